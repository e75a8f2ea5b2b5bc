//! The finite quotients `S/S_m` of the free group on `k` generators at a
//! prime `p`, realized inside the truncated Magnus unit group.
//!
//! Elements are keyed by their Magnus image truncated at degree `m - 1`
//! (so the kernel of the quotient map is exactly `S_m`). The group is found
//! by breadth-first closure of `{1 + X_a}` under right multiplication, which
//! also yields a witness word for every element.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_group::GroupWord;
use crate::group::{FiniteGroup, SpanningTree};
use crate::magnus::magnus;
use crate::series::TruncatedSeries;
use crate::word::{Word, WordIndexer};

/// Default cap on the order of a constructed quotient.
pub const DEFAULT_ORDER_BUDGET: usize = 1 << 20;

/// Largest order for which the full multiplication table is materialized.
pub const TABLE_LIMIT: usize = 1 << 12;

pub struct Quotient {
    k: usize,
    p: u32,
    bound: usize,
    stride: usize,
    keys: Vec<u8>,
    lookup: HashMap<Box<[u8]>, u32>,
    right: Vec<u32>,
    inv: Vec<u32>,
    degree: Vec<u8>,
    generators: Vec<usize>,
    tree: SpanningTree,
    table: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for Quotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Quotient")
            .field("k", &self.k)
            .field("p", &self.p)
            .field("bound", &self.bound)
            .field("order", &self.order())
            .finish()
    }
}

fn key_of(s: &TruncatedSeries) -> Box<[u8]> {
    s.coeffs().iter().map(|&c| c as u8).collect()
}

impl Quotient {
    /// Builds `S/S_m` for `k` generators at the prime `p`, with the default budget.
    pub fn build(k: usize, p: u32, m: usize) -> Result<Self> {
        Self::build_with_budget(k, p, m, DEFAULT_ORDER_BUDGET)
    }

    pub fn build_with_budget(k: usize, p: u32, m: usize, budget: usize) -> Result<Self> {
        crate::require_prime(p)?;
        if p > 255 {
            return Err(Error::InvalidParameter(format!("prime {p} too large for quotient keys")));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if m < 2 {
            return Err(Error::InvalidParameter(format!("quotient bound m={m} must be at least 2")));
        }
        let d = m - 1;
        let one = TruncatedSeries::one(p, k, d)?;
        let stride = one.coeffs().len();
        let mut keys: Vec<u8> = Vec::new();
        let mut series: Vec<TruncatedSeries> = Vec::new();
        let mut lookup: HashMap<Box<[u8]>, u32> = HashMap::new();
        let mut right: Vec<u32> = Vec::new();
        let mut parent = vec![None];
        let mut order = vec![0usize];

        let key = key_of(&one);
        keys.extend_from_slice(&key);
        lookup.insert(key, 0);
        series.push(one);
        let mut head = 0;
        while head < series.len() {
            let e = head;
            head += 1;
            for a in 0..k {
                let s = series[e].mul_generator_right(a);
                let key = key_of(&s);
                let idx = match lookup.get(&key) {
                    Some(&i) => i,
                    None => {
                        let i = series.len();
                        if i >= budget {
                            return Err(Error::BudgetExceeded {
                                what: "quotient order",
                                reached: i + 1,
                                budget,
                            });
                        }
                        keys.extend_from_slice(&key);
                        lookup.insert(key, i as u32);
                        series.push(s);
                        parent.push(Some((e, a)));
                        order.push(i);
                        i as u32
                    }
                };
                right.push(idx);
            }
        }

        let ix = WordIndexer::new(k, d);
        let degree = series
            .iter()
            .map(|s| {
                (1..=d)
                    .find(|&l| s.coeffs()[ix.range(l)].iter().any(|&c| c != 0))
                    .unwrap_or(m) as u8
            })
            .collect();
        let inv = series
            .iter()
            .map(|s| {
                let si = s.inverse().expect("constant term 1");
                lookup[&key_of(&si)]
            })
            .collect();
        let generators = (0..k).map(|a| right[a] as usize).collect();
        Ok(Quotient {
            k,
            p,
            bound: m,
            stride,
            keys,
            lookup,
            right,
            inv,
            degree,
            generators,
            tree: SpanningTree::from_parts(order, parent),
            table: OnceLock::new(),
        })
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// The `m` of `S/S_m`.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Magnus image of element `e`, truncated at degree `m - 1`.
    pub fn series(&self, e: usize) -> TruncatedSeries {
        let raw = &self.keys[e * self.stride..(e + 1) * self.stride];
        TruncatedSeries::from_coeffs(self.p, self.k, self.bound - 1, raw.iter().map(|&c| c as u32).collect())
            .expect("stored keys are well formed")
    }

    /// Coefficients of the length-`l` words in the key of `e`.
    pub fn degree_coords(&self, e: usize, l: usize) -> &[u8] {
        let ix = WordIndexer::new(self.k, self.bound - 1);
        let r = ix.range(l);
        &self.keys[e * self.stride + r.start..e * self.stride + r.end]
    }

    /// Filtration degree of `e`; the bound `m` stands for "at least m".
    pub fn element_degree(&self, e: usize) -> usize {
        self.degree[e] as usize
    }

    /// `eps_w` of every element. Requires `|w| < m`.
    pub fn epsilon_values(&self, w: &Word) -> Result<Vec<u32>> {
        let ix = WordIndexer::new(self.k, self.bound - 1);
        let i = ix.index(w).ok_or_else(|| {
            Error::InvalidParameter(format!("word {w} not readable in S/S_{}", self.bound))
        })?;
        Ok((0..self.order())
            .map(|e| self.keys[e * self.stride + i] as u32)
            .collect())
    }

    pub fn witness(&self, e: usize) -> GroupWord {
        GroupWord::from_syllables(self.tree.path(e).into_iter().map(|a| (a, 1)))
    }

    /// Image of a free-group word under the quotient map.
    pub fn evaluate(&self, g: &GroupWord) -> Result<usize> {
        let s = magnus(g, self.p, self.k, self.bound - 1)?;
        self.lookup_series(&s)
            .ok_or_else(|| Error::Precondition("Magnus image outside the quotient".into()))
    }

    pub fn lookup_series(&self, s: &TruncatedSeries) -> Option<usize> {
        self.lookup.get(&key_of(s)).map(|&i| i as usize)
    }

    /// Elements of `S_n/S_m`, i.e. those whose key has filtration degree `>= n`.
    pub fn filtration_image(&self, n: usize) -> Result<Vec<usize>> {
        if n == 0 || n > self.bound {
            return Err(Error::InvalidParameter(format!(
                "filtration level {n} outside 1..={}",
                self.bound
            )));
        }
        Ok((0..self.order()).filter(|&e| self.element_degree(e) >= n).collect())
    }

    /// The map `S/S_m -> S/S_{m'}` for the smaller quotient `lower`, by
    /// re-truncating keys.
    pub fn projection_to(&self, lower: &Quotient) -> Result<Vec<usize>> {
        if lower.k != self.k || lower.p != self.p || lower.bound > self.bound {
            return Err(Error::ParameterMismatch(format!(
                "cannot project S/S_{} (k={}, p={}) onto S/S_{} (k={}, p={})",
                self.bound, self.k, self.p, lower.bound, lower.k, lower.p
            )));
        }
        (0..self.order())
            .map(|e| {
                let s = self.series(e).truncate(lower.bound - 1)?;
                lower
                    .lookup_series(&s)
                    .ok_or_else(|| Error::Precondition("truncated key missing".into()))
            })
            .collect()
    }

    /// Full multiplication table, materialized on first use.
    pub fn table(&self) -> Result<&[u32]> {
        let n = self.order();
        if n > TABLE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "multiplication table order",
                reached: n,
                budget: TABLE_LIMIT,
            });
        }
        Ok(self.table.get_or_init(|| {
            let mut t = vec![0u32; n * n];
            let bfs = self.tree.bfs_order();
            for x in 0..n {
                let row = &mut t[x * n..(x + 1) * n];
                row[0] = x as u32;
                for &y in &bfs[1..] {
                    let (q, a) = self.tree.parent(y).expect("non-root");
                    row[y] = self.right[row[q] as usize * self.k + a];
                }
            }
            t
        }))
    }

    pub fn to_doc(&self) -> Result<QuotientDoc> {
        Ok(QuotientDoc {
            k: self.k,
            p: self.p,
            bound: self.bound,
            order: self.order(),
            identity: 0,
            generators: self.generators.clone(),
            inverse: self.inv.clone(),
            mul: self.table()?.to_vec(),
            witnesses: (0..self.order()).map(|e| self.witness(e).to_string()).collect(),
        })
    }

    /// Rebuilds the quotient named by a document and checks that the
    /// document's table and witnesses agree with it.
    pub fn from_doc(doc: &QuotientDoc) -> Result<Self> {
        let q = Quotient::build(doc.k, doc.p, doc.bound)?;
        let mismatch = |what: &str| Error::Precondition(format!("document {what} disagrees with S/S_{}", doc.bound));
        if doc.order != q.order() || doc.generators != q.generators || doc.identity != 0 {
            return Err(mismatch("shape"));
        }
        for (e, w) in doc.witnesses.iter().enumerate() {
            if q.evaluate(&GroupWord::parse(w)?)? != e {
                return Err(mismatch("witnesses"));
            }
        }
        if doc.mul != q.table()? || doc.inverse != q.inv {
            return Err(mismatch("table"));
        }
        Ok(q)
    }
}

impl FiniteGroup for Quotient {
    fn order(&self) -> usize {
        self.inv.len()
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = self.table.get() {
            return t[a * self.order() + b] as usize;
        }
        if self.order() <= TABLE_LIMIT {
            let t = self.table().expect("order within table limit");
            return t[a * self.order() + b] as usize;
        }
        self.tree
            .path(b)
            .into_iter()
            .fold(a, |x, i| self.right[x * self.k + i] as usize)
    }

    fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    fn generators(&self) -> &[usize] {
        &self.generators
    }

    fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    fn mul_gen(&self, a: usize, i: usize) -> usize {
        self.right[a * self.k + i] as usize
    }
}

/// JSON interchange form of a quotient: row-major table and witness strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDoc {
    pub k: usize,
    pub p: u32,
    pub bound: usize,
    pub order: usize,
    pub identity: usize,
    pub generators: Vec<usize>,
    pub inverse: Vec<u32>,
    pub mul: Vec<u32>,
    pub witnesses: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{check_associativity, is_normal, subgroup_generated};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orders() {
        assert_eq!(Quotient::build(2, 2, 2).unwrap().order(), 4);
        assert_eq!(Quotient::build(2, 2, 3).unwrap().order(), 32);
        assert_eq!(Quotient::build(2, 3, 3).unwrap().order(), 27);
        assert_eq!(Quotient::build(2, 2, 4).unwrap().order(), 128);
    }

    #[test]
    fn parameter_checks() {
        assert!(Quotient::build(2, 4, 3).is_err());
        assert!(Quotient::build(2, 2, 1).is_err());
        assert!(Quotient::build(0, 2, 3).is_err());
        match Quotient::build_with_budget(2, 2, 4, 100) {
            Err(Error::BudgetExceeded { reached, budget, .. }) => {
                assert_eq!(budget, 100);
                assert_eq!(reached, 101);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn witnesses_evaluate_to_their_elements() {
        let q = Quotient::build(2, 2, 3).unwrap();
        assert!(q.witness(0).is_identity());
        for a in 0..2 {
            assert_eq!(q.witness(q.generators()[a]), GroupWord::generator(a));
        }
        for e in 0..q.order() {
            assert_eq!(q.evaluate(&q.witness(e)).unwrap(), e);
        }
        assert_eq!(q.evaluate(&GroupWord::identity()).unwrap(), 0);
    }

    #[test]
    fn table_is_a_group_law() {
        let q = Quotient::build(2, 3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(check_associativity(&q, &mut rng, 10_000), None);
        for e in 0..q.order() {
            assert_eq!(q.mul(e, q.inv(e)), 0);
            assert_eq!(q.mul(0, e), e);
        }
        // table agrees with series multiplication
        for a in 0..q.order() {
            for b in (0..q.order()).step_by(5) {
                let s = q.series(a).mul(&q.series(b)).unwrap();
                assert_eq!(q.lookup_series(&s), Some(q.mul(a, b)));
            }
        }
    }

    #[test]
    fn path_walk_matches_table() {
        let q = Quotient::build(2, 2, 4).unwrap();
        let t = q.table().unwrap().to_vec();
        let n = q.order();
        for a in (0..n).step_by(3) {
            for b in (0..n).step_by(7) {
                let walked = q.tree.path(b).into_iter().fold(a, |x, i| q.mul_gen(x, i));
                assert_eq!(walked as u32, t[a * n + b]);
            }
        }
    }

    #[test]
    fn filtration_images() {
        let q = Quotient::build(2, 2, 3).unwrap();
        assert_eq!(q.filtration_image(1).unwrap().len(), 32);
        let s2 = q.filtration_image(2).unwrap();
        assert_eq!(s2.len(), 8);
        assert!(is_normal(&q, &s2));
        assert_eq!(q.filtration_image(3).unwrap(), vec![0]);
        assert!(q.filtration_image(0).is_err());
        assert!(q.filtration_image(4).is_err());
    }

    #[test]
    fn commutator_lands_in_second_level() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let c = q.evaluate(&GroupWord::parse("[a0,a1]").unwrap()).unwrap();
        assert_ne!(c, 0);
        assert!(q.filtration_image(2).unwrap().contains(&c));
    }

    #[test]
    fn generated_second_level() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let seeds: Vec<usize> = ["a0^2", "a1^2", "[a0,a1]"]
            .iter()
            .map(|w| q.evaluate(&GroupWord::parse(w).unwrap()).unwrap())
            .collect();
        assert_eq!(subgroup_generated(&q, &seeds), q.filtration_image(2).unwrap());
        assert_eq!(subgroup_generated(&q, q.generators()).len(), 32);
    }

    #[test]
    fn projection_is_a_surjective_homomorphism() {
        let hi = Quotient::build(2, 2, 4).unwrap();
        let lo = Quotient::build(2, 2, 3).unwrap();
        let proj = hi.projection_to(&lo).unwrap();
        let mut hit = vec![false; lo.order()];
        for a in 0..hi.order() {
            hit[proj[a]] = true;
            for b in (0..hi.order()).step_by(11) {
                assert_eq!(proj[hi.mul(a, b)], lo.mul(proj[a], proj[b]));
            }
        }
        assert!(hit.iter().all(|&h| h));
        // filtration images correspond
        let kernel: Vec<usize> = (0..hi.order()).filter(|&e| proj[e] == 0).collect();
        assert_eq!(kernel, hi.filtration_image(3).unwrap());
        assert!(lo.projection_to(&hi).is_err());
    }

    #[test]
    fn document_round_trip() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let doc = q.to_doc().unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let back: QuotientDoc = serde_json::from_str(&json).unwrap();
        let q2 = Quotient::from_doc(&back).unwrap();
        assert_eq!(q2.order(), 32);
        let mut bad = back.clone();
        bad.mul.swap(40, 41);
        assert!(Quotient::from_doc(&bad).is_err());
    }
}
