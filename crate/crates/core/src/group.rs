//! Finite groups given by generators, with a BFS spanning tree over the
//! right Cayley graph.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on element indices `0..order` with a distinguished
/// generating list.
pub trait FiniteGroup: Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn generators(&self) -> &[usize];
    /// Spanning tree of the right Cayley graph rooted at the identity.
    fn tree(&self) -> &SpanningTree;

    /// `a * generators()[i]`
    fn mul_gen(&self, a: usize, i: usize) -> usize {
        self.mul(a, self.generators()[i])
    }
}

/// BFS tree of the right Cayley graph: every non-identity element `e` has a
/// parent `q` and generator slot `i` with `e = q * g_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    /// Elements in discovery order, identity first.
    order: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
}

impl SpanningTree {
    /// Breadth-first search from `identity` using `step(e, i) = e * g_i`.
    pub fn build(
        size: usize,
        identity: usize,
        gens: usize,
        step: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut parent = vec![None; size];
        let mut seen = vec![false; size];
        let mut order = Vec::with_capacity(size);
        let mut queue = VecDeque::from([identity]);
        seen[identity] = true;
        while let Some(e) = queue.pop_front() {
            order.push(e);
            for i in 0..gens {
                let f = step(e, i);
                if !seen[f] {
                    seen[f] = true;
                    parent[f] = Some((e, i));
                    queue.push_back(f);
                }
            }
        }
        if order.len() != size {
            return Err(Error::Precondition(format!(
                "generators reach {} of {size} elements",
                order.len()
            )));
        }
        Ok(SpanningTree { order, parent })
    }

    pub(crate) fn from_parts(order: Vec<usize>, parent: Vec<Option<(usize, usize)>>) -> Self {
        SpanningTree { order, parent }
    }

    /// Elements in BFS order; every element appears after its parent.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn parent(&self, e: usize) -> Option<(usize, usize)> {
        self.parent[e]
    }

    /// Generator slots along the tree path from the identity to `e`.
    pub fn path(&self, mut e: usize) -> Vec<usize> {
        let mut slots = Vec::new();
        while let Some((q, i)) = self.parent[e] {
            slots.push(i);
            e = q;
        }
        slots.reverse();
        slots
    }

    /// Propagates a value from the root along tree edges:
    /// `value(child) = edge(value(parent), parent, slot)`.
    pub fn propagate<T: Clone>(&self, root: T, mut edge: impl FnMut(&T, usize, usize) -> T) -> Vec<T> {
        let mut out: Vec<Option<T>> = vec![None; self.order.len()];
        out[self.order[0]] = Some(root);
        for &e in &self.order[1..] {
            let (q, i) = self.parent[e].expect("non-root has a parent");
            let v = edge(out[q].as_ref().expect("parent visited first"), q, i);
            out[e] = Some(v);
        }
        out.into_iter().map(|v| v.expect("tree spans")).collect()
    }
}

/// A finite group stored as a full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
    tree: SpanningTree,
}

impl GroupTable {
    /// Tabulates `mul` on `0..order`. The identity and inverses are found
    /// from the table; `generators` must generate.
    pub fn from_fn(
        order: usize,
        generators: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return Err(Error::InvalidParameter(format!("product {c} out of range")));
                }
                table.push(c as u32);
            }
        }
        Self::from_table(order, table, generators)
    }

    pub fn from_table(order: usize, mul: Vec<u32>, generators: Vec<usize>) -> Result<Self> {
        if mul.len() != order * order {
            return Err(Error::InvalidParameter("table size mismatch".into()));
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= order) {
            return Err(Error::InvalidParameter(format!("generator {g} out of range")));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] as usize == x && mul[x * order + e] as usize == x))
            .ok_or_else(|| Error::Precondition("table has no identity".into()))?;
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] as usize == identity)
                .ok_or_else(|| Error::Precondition(format!("element {a} has no inverse")))?;
            if mul[b * order + a] as usize != identity {
                return Err(Error::Precondition(format!("inverse of {a} is one-sided")));
            }
            inv[a] = b as u32;
        }
        let tree = SpanningTree::build(order, identity, generators.len(), |e, i| {
            mul[e * order + generators[i]] as usize
        })?;
        Ok(GroupTable {
            order,
            mul,
            inv,
            identity,
            generators,
            tree,
        })
    }

    /// Row-major multiplication table.
    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    /// Checks `(ab)c = a(bc)` on `samples` random triples.
    pub fn check_associativity(&self, rng: &mut impl Rng, samples: usize) -> Option<(usize, usize, usize)> {
        check_associativity(self, rng, samples)
    }
}

impl FiniteGroup for GroupTable {
    fn order(&self) -> usize {
        self.order
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
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
}

/// Returns a failing triple, if any, among `samples` random ones.
pub fn check_associativity<G: FiniteGroup + ?Sized>(
    g: &G,
    rng: &mut impl Rng,
    samples: usize,
) -> Option<(usize, usize, usize)> {
    let n = g.order();
    (0..samples).find_map(|_| {
        let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))).then_some((a, b, c))
    })
}

/// Closure of `seeds` under multiplication and inversion, as a sorted list.
/// An empty seed list yields the trivial subgroup.
pub fn subgroup_generated<G: FiniteGroup + ?Sized>(g: &G, seeds: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.order()];
    let mut queue = VecDeque::from([g.identity()]);
    member[g.identity()] = true;
    let gens: Vec<usize> = seeds
        .iter()
        .flat_map(|&s| [s, g.inv(s)])
        .collect();
    while let Some(e) = queue.pop_front() {
        for &s in &gens {
            let f = g.mul(e, s);
            if !member[f] {
                member[f] = true;
                queue.push_back(f);
            }
        }
    }
    indices(&member)
}

pub(crate) fn indices(member: &[bool]) -> Vec<usize> {
    member
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

pub fn is_subgroup<G: FiniteGroup + ?Sized>(g: &G, set: &[usize]) -> bool {
    let mut member = vec![false; g.order()];
    for &e in set {
        member[e] = true;
    }
    member[g.identity()]
        && set
            .iter()
            .all(|&a| member[g.inv(a)] && set.iter().all(|&b| member[g.mul(a, b)]))
}

/// Normality checked against conjugation by the generators.
pub fn is_normal<G: FiniteGroup + ?Sized>(g: &G, set: &[usize]) -> bool {
    let mut member = vec![false; g.order()];
    for &e in set {
        member[e] = true;
    }
    g.generators().iter().all(|&s| {
        let si = g.inv(s);
        set.iter().all(|&x| member[g.mul(g.mul(si, x), s)])
    })
}

pub fn element_order<G: FiniteGroup + ?Sized>(g: &G, a: usize) -> usize {
    let mut x = a;
    let mut n = 1;
    while x != g.identity() {
        x = g.mul(x, a);
        n += 1;
    }
    n
}

pub fn is_abelian<G: FiniteGroup + ?Sized>(g: &G) -> bool {
    let gens = g.generators();
    gens.iter()
        .all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

pub fn center<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    (0..g.order())
        .filter(|&z| g.generators().iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .collect()
}

/// Exponent of the group: lcm of element orders.
pub fn exponent<G: FiniteGroup + ?Sized>(g: &G) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (0..g.order()).fold(1, |acc, a| {
        let o = element_order(g, a);
        acc / gcd(acc, o) * o
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic(n: usize) -> GroupTable {
        GroupTable::from_fn(n, vec![1 % n], |a, b| (a + b) % n).unwrap()
    }

    /// Z/2 x Z/2 encoded as two bits under xor.
    fn klein() -> GroupTable {
        GroupTable::from_fn(4, vec![1, 2], |a, b| a ^ b).unwrap()
    }

    #[test]
    fn cyclic_group_basics() {
        let g = cyclic(6);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(2), 4);
        assert_eq!(element_order(&g, 2), 3);
        assert_eq!(exponent(&g), 6);
        assert!(is_abelian(&g));
        assert_eq!(g.tree().path(5), vec![0; 5]);
    }

    #[test]
    fn subgroups_of_klein() {
        let g = klein();
        assert_eq!(subgroup_generated(&g, &[0]), vec![0]);
        assert_eq!(subgroup_generated(&g, &[]), vec![0]);
        assert_eq!(subgroup_generated(&g, &[1]), vec![0, 1]);
        assert_eq!(subgroup_generated(&g, g.generators()), vec![0, 1, 2, 3]);
        assert!(is_subgroup(&g, &[0, 3]));
        assert!(!is_subgroup(&g, &[0, 1, 2]));
        assert!(is_normal(&g, &[0, 3]));
        assert_eq!(center(&g).len(), 4);
    }

    #[test]
    fn non_generating_set_is_rejected() {
        let err = GroupTable::from_fn(4, vec![1], |a, b| a ^ b).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn associativity_smoke_test() {
        let g = cyclic(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(g.check_associativity(&mut rng, 200), None);
    }

    #[test]
    fn propagation_follows_tree() {
        let g = cyclic(7);
        let vals = g.tree().propagate(0usize, |v, _, _| v + 1);
        assert_eq!(vals, vec![0, 1, 2, 3, 4, 5, 6]);
    }
}
