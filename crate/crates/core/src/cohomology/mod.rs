//! Inhomogeneous cochains with F_p coefficients and trivial action,
//! defining systems and Massey products, central extensions, and the
//! transgression pairing.
//!
//! Cochains store values indexed by the element order of their base
//! group; the group itself is passed to each operation.

pub mod dense;
pub mod massey;
pub mod pairing;
pub mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub use massey::{
    c_tilde, central_extension, complete_defining_system, ds_to_matrix_map, massey, massey_word,
    matrix_map_to_ds, DefiningSystem, TriangularArray,
};
pub use pairing::{pairing_value, transgression_classes};
pub use solver::CoboundarySolver;

/// A 1-cochain `G -> F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain1 {
    p: u32,
    values: Vec<u32>,
}

impl Cochain1 {
    pub fn zero(p: u32, order: usize) -> Self {
        Cochain1 {
            p,
            values: vec![0; order],
        }
    }

    pub fn from_values(p: u32, values: Vec<u32>) -> Self {
        Cochain1 {
            p,
            values: values.into_iter().map(|v| v % p).collect(),
        }
    }

    pub fn from_fn(p: u32, order: usize, mut f: impl FnMut(usize) -> u32) -> Self {
        Cochain1 {
            p,
            values: (0..order).map(|e| f(e) % p).collect(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn at(&self, e: usize) -> u32 {
        self.values[e]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        Cochain1 {
            p,
            values: self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % p).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        Cochain1 {
            p,
            values: self.values.iter().map(|&a| (a * (c % p)) % p).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    /// Pullback along a map of element indices (e.g. inflation).
    pub fn pullback(&self, map: &[usize]) -> Self {
        Cochain1 {
            p: self.p,
            values: map.iter().map(|&e| self.values[e]).collect(),
        }
    }

    /// Whether the cochain is a homomorphism `G -> F_p`, i.e. a 1-cocycle.
    pub fn is_homomorphism<G: FiniteGroup + ?Sized>(&self, g: &G) -> bool {
        let p = self.p;
        self.values[g.identity()] == 0
            && (0..g.order()).all(|x| {
                g.generators()
                    .iter()
                    .enumerate()
                    .all(|(i, &s)| self.values[g.mul_gen(x, i)] == (self.values[x] + self.values[s]) % p)
            })
    }
}

/// A 2-cochain `G x G -> F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain2 {
    p: u32,
    order: usize,
    values: Vec<u32>,
}

impl Cochain2 {
    pub fn zero(p: u32, order: usize) -> Self {
        Cochain2 {
            p,
            order,
            values: vec![0; order * order],
        }
    }

    pub fn from_fn(p: u32, order: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut values = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                values.push(f(a, b) % p);
            }
        }
        Cochain2 { p, order, values }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> u32 {
        self.values[a * self.order + b]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        Cochain2 {
            p,
            order: self.order,
            values: self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % p).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        Cochain2 {
            p,
            order: self.order,
            values: self.values.iter().map(|&a| (a * (c % p)) % p).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    /// Pullback along a map of element indices.
    pub fn pullback(&self, map: &[usize]) -> Self {
        let n = map.len();
        Cochain2::from_fn(self.p, n, |a, b| self.at(map[a], map[b]))
    }
}

fn check_order<G: FiniteGroup + ?Sized>(g: &G, order: usize) -> Result<()> {
    if g.order() != order {
        return Err(Error::ParameterMismatch(format!(
            "cochain on a group of order {order}, group has order {}",
            g.order()
        )));
    }
    Ok(())
}

/// `(d c)(s, t) = c(s) + c(t) - c(st)`
pub fn d1<G: FiniteGroup + ?Sized>(g: &G, c: &Cochain1) -> Result<Cochain2> {
    check_order(g, c.order())?;
    let p = c.p;
    Ok(Cochain2::from_fn(p, g.order(), |a, b| (c.at(a) + c.at(b) + p - c.at(g.mul(a, b))) % p))
}

/// First failing triple of the 2-cocycle identity
/// `f(s,t) + f(st,r) = f(t,r) + f(s,tr)`, over all triples.
pub fn cocycle_violation<G: FiniteGroup + ?Sized>(g: &G, f: &Cochain2) -> Result<Option<(usize, usize, usize)>> {
    check_order(g, f.order)?;
    let n = g.order();
    let p = f.p;
    for s in 0..n {
        for t in 0..n {
            let st = g.mul(s, t);
            for r in 0..n {
                let lhs = (f.at(s, t) + f.at(st, r)) % p;
                let rhs = (f.at(t, r) + f.at(s, g.mul(t, r))) % p;
                if lhs != rhs {
                    return Ok(Some((s, t, r)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_cocycle2<G: FiniteGroup + ?Sized>(g: &G, f: &Cochain2) -> Result<bool> {
    Ok(cocycle_violation(g, f)?.is_none())
}

/// `(c u c')(s, t) = c(s) c'(t)`
pub fn cup(c: &Cochain1, c2: &Cochain1) -> Result<Cochain2> {
    if c.order() != c2.order() || c.p != c2.p {
        return Err(Error::ParameterMismatch("cup of cochains on different groups".into()));
    }
    let p = c.p;
    Ok(Cochain2::from_fn(p, c.order(), |a, b| (c.at(a) * c2.at(b)) % p))
}

/// The characters `eps_(a)` of a quotient `S/S_m`, one per free generator.
pub fn generator_characters(q: &crate::Quotient) -> Result<Vec<Cochain1>> {
    (0..q.alphabet())
        .map(|a| Ok(Cochain1::from_values(q.prime(), q.epsilon_values(&crate::Word::letter(a))?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Quotient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_c1(rng: &mut impl Rng, p: u32, n: usize) -> Cochain1 {
        Cochain1::from_fn(p, n, |_| rng.gen_range(0..p))
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let q = Quotient::build(2, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let c = random_c1(&mut rng, 3, q.order());
            assert!(is_cocycle2(&q, &d1(&q, &c).unwrap()).unwrap());
        }
        assert!(d1(&q, &Cochain1::zero(3, 9)).unwrap().is_zero());
        assert!(is_cocycle2(&q, &Cochain2::zero(3, 9)).unwrap());
    }

    #[test]
    fn characters_are_homomorphisms() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let chars = generator_characters(&q).unwrap();
        for c in &chars {
            assert!(c.is_homomorphism(&q));
            assert!(d1(&q, c).unwrap().is_zero());
        }
        assert_eq!(chars[0].at(q.generators()[0]), 1);
        assert_eq!(chars[0].at(q.generators()[1]), 0);
    }

    #[test]
    fn cup_products_of_characters_are_cocycles() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let chars = generator_characters(&q).unwrap();
        for a in &chars {
            for b in &chars {
                assert!(is_cocycle2(&q, &cup(a, b).unwrap()).unwrap());
            }
        }
        assert!(cup(&Cochain1::zero(2, q.order()), &chars[0]).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule() {
        // d(c u c') = dc u c' - c u dc' as 3-cochains
        let q = Quotient::build(2, 2, 2).unwrap();
        let n = q.order();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let d2 = |f: &dyn Fn(usize, usize) -> u32, s: usize, t: usize, r: usize| {
            (f(t, r) + 2 * 2 - f(q.mul(s, t), r) + f(s, q.mul(t, r)) + 2 - f(s, t)) % 2
        };
        for _ in 0..10 {
            let c = random_c1(&mut rng, 2, n);
            let c2 = random_c1(&mut rng, 2, n);
            let cc = cup(&c, &c2).unwrap();
            let dc = d1(&q, &c).unwrap();
            let dc2 = d1(&q, &c2).unwrap();
            for s in 0..n {
                for t in 0..n {
                    for r in 0..n {
                        let lhs = d2(&|a, b| cc.at(a, b), s, t, r);
                        let rhs = (dc.at(s, t) * c2.at(r) + 2 - (c.at(s) * dc2.at(t, r)) % 2) % 2;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
