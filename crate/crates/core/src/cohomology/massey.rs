//! Defining systems, their correspondence with homomorphisms into punctured
//! unipotent groups, Massey products and cocycle central extensions.
//!
//! Indices are 0-based: a defining system of size `n` has entries `c_{ij}`
//! for `0 <= i <= j < n` except the corner `(0, n-1)`, and
//! `c~_{ij} = -sum_{r=i}^{j-1} c_{ir} u c_{r+1,j}`. The matrix picture uses
//! `Ū_{n+1}` with `gamma(s)_{ab} = (-1)^{b-a} c_{a,b-1}(s)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupTable};
use crate::quotient::Quotient;
use crate::unipotent::{gamma2, hom_from_images, MatrixElement, PuncturedUnipotent, UnipotentMatrix};
use crate::word::Word;
use crate::GroupWord;

use super::solver::CoboundarySolver;
use super::{d1, Cochain1, Cochain2};

/// A triangular array of 1-cochains with no conditions imposed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularArray {
    n: usize,
    p: u32,
    order: usize,
    entries: Vec<Cochain1>,
}

impl TriangularArray {
    pub fn zero(n: usize, p: u32, order: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("defining systems need n >= 2".into()));
        }
        Ok(TriangularArray {
            n,
            p,
            order,
            entries: vec![Cochain1::zero(p, order); n * n],
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Positions `(i, j)` of the array in order of increasing `j - i`.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|d| (0..n - d).map(move |i| (i, i + d)))
            .filter(|&(i, j)| (i, j) != (0, n - 1))
            .collect()
    }

    fn check(&self, i: usize, j: usize) {
        assert!(i <= j && j < self.n && (i, j) != (0, self.n - 1), "({i},{j}) outside the array");
    }

    pub fn get(&self, i: usize, j: usize) -> &Cochain1 {
        self.check(i, j);
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cochain1) {
        self.check(i, j);
        assert_eq!(c.order(), self.order);
        self.entries[i * self.n + j] = c;
    }

    pub fn diagonal(&self) -> Vec<Cochain1> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// `c~_{ij}`; also defined at the corner.
    pub fn c_tilde(&self, i: usize, j: usize) -> Cochain2 {
        let (p, n) = (self.p, self.order);
        let mut acc = vec![0u32; n * n];
        for r in i..j {
            let a = &self.entries[i * self.n + r];
            let b = &self.entries[(r + 1) * self.n + j];
            for s in 0..n {
                let x = a.at(s);
                if x == 0 {
                    continue;
                }
                for t in 0..n {
                    acc[s * n + t] = (acc[s * n + t] + x * b.at(t)) % p;
                }
            }
        }
        Cochain2::from_fn(p, n, |s, t| (p - acc[s * n + t]) % p)
    }

    /// First position where `d c_{ij} != c~_{ij}`, if any.
    pub fn defining_violation<G: FiniteGroup + ?Sized>(&self, g: &G) -> Result<Option<(usize, usize)>> {
        for (i, j) in self.positions() {
            if d1(g, self.get(i, j))? != self.c_tilde(i, j) {
                return Ok(Some((i, j)));
            }
        }
        Ok(None)
    }

    pub fn is_defining<G: FiniteGroup + ?Sized>(&self, g: &G) -> Result<bool> {
        Ok(self.defining_violation(g)?.is_none())
    }
}

/// A triangular array satisfying `d c_{ij} = c~_{ij}` at every position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefiningSystem {
    array: TriangularArray,
}

impl DefiningSystem {
    pub fn new<G: FiniteGroup + ?Sized>(g: &G, array: TriangularArray) -> Result<Self> {
        match array.defining_violation(g)? {
            Some((i, j)) => Err(Error::NotADefiningSystem(i, j)),
            None => Ok(DefiningSystem { array }),
        }
    }

    pub fn array(&self) -> &TriangularArray {
        &self.array
    }

    pub fn size(&self) -> usize {
        self.array.n
    }

    /// The 2-cocycle `c~_{0,n-1}` whose class is the Massey product.
    pub fn c_tilde_corner(&self) -> Cochain2 {
        self.array.c_tilde(0, self.array.n - 1)
    }
}

/// `c~_{1n}` of a defining system.
pub fn c_tilde(ds: &DefiningSystem) -> Cochain2 {
    ds.c_tilde_corner()
}

/// The map `G -> Ū_{n+1}` attached to a triangular array.
pub fn ds_to_matrix_map(array: &TriangularArray) -> Result<Vec<PuncturedUnipotent>> {
    let n = array.n;
    let p = array.p;
    (0..array.order)
        .map(|s| {
            PuncturedUnipotent::from_fn(n + 1, p, |a, b| {
                let v = array.get(a, b - 1).at(s) as i64;
                if (b - a) % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
        })
        .collect()
}

/// Inverse of [`ds_to_matrix_map`]: `c_{ij} = (-1)^{j+1-i} gamma_{i,j+1}`.
/// The caller checks [`TriangularArray::is_defining`] when the map may fail
/// to be a homomorphism.
pub fn matrix_map_to_ds(values: &[PuncturedUnipotent]) -> Result<TriangularArray> {
    let first = values
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty matrix map".into()))?;
    let n = first.dim() - 1;
    let p = first.modulus();
    let mut array = TriangularArray::zero(n, p, values.len())?;
    for (i, j) in array.positions() {
        let c = Cochain1::from_fn(p, values.len(), |s| {
            let v = values[s].get(i, j + 1).expect("not the corner");
            if (j + 1 - i) % 2 == 1 {
                (p - v) % p
            } else {
                v
            }
        });
        array.set(i, j, c);
    }
    Ok(array)
}

/// A Massey product together with the defining system that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct MasseyProduct {
    pub defining_system: DefiningSystem,
    pub representative: Cochain2,
}

fn from_representation(q: &Quotient, images: &[PuncturedUnipotent]) -> Result<MasseyProduct> {
    let rep = hom_from_images(q, images)?;
    let array = matrix_map_to_ds(&rep.values)?;
    let ds = DefiningSystem::new(q, array)?;
    Ok(MasseyProduct {
        representative: ds.c_tilde_corner(),
        defining_system: ds,
    })
}

/// `<c_1, ..., c_n>` on `Q = S/S_m` for characters `c_i`, `m >= n`.
///
/// Each free generator `a` is sent to `prod_i (I - E_{i,i+1})^{c_i(a)}` in
/// `Ū_{n+1}`; this kills `S_n`, so it factors through `Q`, and the attached
/// defining system has diagonal `(c_1, ..., c_n)`.
pub fn massey(q: &Quotient, chars: &[Cochain1]) -> Result<MasseyProduct> {
    let n = chars.len();
    if n < 2 {
        return Err(Error::InvalidParameter("Massey products need at least two characters".into()));
    }
    let p = q.prime();
    for (i, c) in chars.iter().enumerate() {
        if c.order() != q.order() || c.prime() != p || !c.is_homomorphism(q) {
            return Err(Error::NotAHomomorphism(format!("character {i}")));
        }
    }
    let images = q
        .generators()
        .iter()
        .map(|&a| {
            let mut x = UnipotentMatrix::identity(n + 1, p)?;
            for (i, c) in chars.iter().enumerate() {
                let e = UnipotentMatrix::elementary(n + 1, p, i, i + 1, -(c.at(a) as i64))?;
                x = x.mul(&e);
            }
            Ok(x.forget_corner())
        })
        .collect::<Result<Vec<_>>>()?;
    let out = from_representation(q, &images)?;
    debug_assert_eq!(out.defining_system.array().diagonal(), chars);
    Ok(out)
}

/// `psi_w = <eps_(w_1), ..., eps_(w_n)>` on `Q = S/S_m`, `m >= n`, built
/// from `gamma_2` of the word, punctured.
pub fn massey_word(q: &Quotient, w: &Word) -> Result<MasseyProduct> {
    if w.len() < 2 {
        return Err(Error::InvalidParameter("Massey products need words of length >= 2".into()));
    }
    if w.min_alphabet() > q.alphabet() {
        return Err(Error::GeneratorOutOfRange {
            index: w.min_alphabet() - 1,
            alphabet: q.alphabet(),
        });
    }
    let images = (0..q.alphabet())
        .map(|a| Ok(gamma2(w, &GroupWord::generator(a), q.prime())?.forget_corner()))
        .collect::<Result<Vec<_>>>()?;
    from_representation(q, &images)
}

/// Completes `diag` to a defining system level by level, solving
/// `d c_{ij} = c~_{ij}` with the tree solver. With `randomize`, a random
/// combination of the supplied homomorphisms is added to each solution.
pub fn complete_defining_system<G: FiniteGroup + ?Sized, R: Rng>(
    g: &G,
    diag: &[Cochain1],
    randomize: Option<(&[Cochain1], &mut R)>,
) -> Result<DefiningSystem> {
    let n = diag.len();
    let p = diag
        .first()
        .map(Cochain1::prime)
        .ok_or_else(|| Error::InvalidParameter("empty diagonal".into()))?;
    let mut array = TriangularArray::zero(n, p, g.order())?;
    for (i, c) in diag.iter().enumerate() {
        if !c.is_homomorphism(g) {
            return Err(Error::NotAHomomorphism(format!("diagonal entry {i}")));
        }
        array.set(i, i, c.clone());
    }
    let solver = CoboundarySolver::new(g, p);
    let mut randomize = randomize;
    for (i, j) in array.positions() {
        if i == j {
            continue;
        }
        let target = array.c_tilde(i, j);
        let mut x = solver
            .solve(&target)
            .ok_or_else(|| Error::Unsolvable(format!("d c_({i},{j}) = c~_({i},{j})")))?;
        if let Some((homs, rng)) = randomize.as_mut() {
            for h in homs.iter() {
                x = x.add(&h.scale(rng.gen_range(0..p)));
            }
        }
        array.set(i, j, x);
    }
    DefiningSystem::new(g, array)
}

/// The group `Z/p x G` with `(r, g)(s, h) = (r + s + f(g, h), gh)`; element
/// `(r, g)` has index `g * p + r`.
pub fn central_extension<G: FiniteGroup + ?Sized>(g: &G, f: &Cochain2) -> Result<GroupTable> {
    if let Some((s, t, r)) = super::cocycle_violation(g, f)? {
        return Err(Error::NotACocycle(s, t, r));
    }
    let p = f.prime() as usize;
    let order = g.order() * p;
    let mut gens: Vec<usize> = g.generators().iter().map(|&s| s * p).collect();
    let e = g.identity();
    gens.push(e * p + (1 + p - f.at(e, e) as usize) % p);
    GroupTable::from_fn(order, gens, |x, y| {
        let (gx, rx) = (x / p, x % p);
        let (gy, ry) = (y / p, y % p);
        g.mul(gx, gy) * p + (rx + ry + f.at(gx, gy) as usize) % p
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cup, generator_characters};
    use crate::unipotent::fiber_product;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_array_gives_identity_map() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let a = TriangularArray::zero(3, 2, q.order()).unwrap();
        assert!(a.is_defining(&q).unwrap());
        assert!(ds_to_matrix_map(&a).unwrap().iter().all(|x| x.is_identity()));
    }

    #[test]
    fn round_trip_array_map_array() {
        let q = Quotient::build(2, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut a = TriangularArray::zero(3, 3, q.order()).unwrap();
        for (i, j) in a.positions() {
            a.set(i, j, Cochain1::from_fn(3, q.order(), |_| rng.gen_range(0..3)));
        }
        let back = matrix_map_to_ds(&ds_to_matrix_map(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn two_fold_product_is_minus_cup() {
        for p in [2, 3] {
            let q = Quotient::build(2, p, 2).unwrap();
            let chars = generator_characters(&q).unwrap();
            let s = CoboundarySolver::new(&q, p);
            let m = massey(&q, &[chars[0].clone(), chars[1].clone()]).unwrap();
            let c = cup(&chars[0], &chars[1]).unwrap().neg();
            assert_eq!(m.representative, c);
            assert!(s.cohomologous(&m.representative, &c).is_some());
        }
    }

    #[test]
    fn word_route_matches_character_route() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let chars = generator_characters(&q).unwrap();
        let s = CoboundarySolver::new(&q, 2);
        for w in Word::all_of_length(2, 3) {
            let by_word = massey_word(&q, &w).unwrap();
            let diag: Vec<Cochain1> = w.letters().iter().map(|&a| chars[a].clone()).collect();
            assert_eq!(by_word.defining_system.array().diagonal(), diag);
            let by_chars = massey(&q, &diag).unwrap();
            assert_eq!(s.class_vector(&by_word.representative), s.class_vector(&by_chars.representative));
        }
    }

    #[test]
    fn massey_needs_a_deep_enough_quotient() {
        let q = Quotient::build(2, 2, 2).unwrap();
        let chars = generator_characters(&q).unwrap();
        assert!(massey(&q, &[chars[0].clone(), chars[1].clone(), chars[0].clone()]).is_err());
        let bad = Cochain1::from_values(2, vec![1, 0, 0, 0]);
        assert!(matches!(
            massey(&q, &[bad, chars[0].clone()]),
            Err(Error::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn completion_matches_massey_class() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let chars = generator_characters(&q).unwrap();
        let diag = vec![chars[0].clone(), chars[1].clone(), chars[0].clone()];
        let s = CoboundarySolver::new(&q, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let reference = s.class_vector(&massey(&q, &diag).unwrap().representative);
        for _ in 0..3 {
            let ds = complete_defining_system(&q, &diag, Some((&chars[..], &mut rng))).unwrap();
            assert_eq!(s.class_vector(&ds.c_tilde_corner()), reference);
        }
    }

    #[test]
    fn extensions() {
        let q = Quotient::build(2, 2, 2).unwrap();
        let zero = Cochain2::zero(2, q.order());
        let e = central_extension(&q, &zero).unwrap();
        assert_eq!(e.order(), 8);
        assert!(crate::group::is_abelian(&e));
        let chars = generator_characters(&q).unwrap();
        let f = cup(&chars[0], &chars[1]).unwrap();
        let e = central_extension(&q, &f).unwrap();
        assert!(!crate::group::is_abelian(&e));
        let mut bad = zero.clone();
        bad = bad.add(&Cochain2::from_fn(2, 4, |a, b| u32::from(a == 1 && b == 2)));
        assert!(matches!(central_extension(&q, &bad), Err(Error::NotACocycle(..))));
    }

    #[test]
    fn extension_matches_fiber_product() {
        let q = Quotient::build(2, 2, 3).unwrap();
        for w in Word::all_of_length(2, 3) {
            let m = massey_word(&q, &w).unwrap();
            let n = w.len();
            let gamma = ds_to_matrix_map(m.defining_system.array()).unwrap();
            let fp = fiber_product(&q, &gamma).unwrap();
            let sign = if n % 2 == 1 { 1 } else { q.prime() - 1 };
            let ce = central_extension(&q, &m.representative.scale(sign)).unwrap();
            assert_eq!(fp.table(), ce.table(), "{w}");
        }
    }
}
