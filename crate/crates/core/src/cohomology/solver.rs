//! Solving `dx = f` for 2-cocycles using the spanning tree of the group.
//!
//! A solution is pinned down by `x(1) = f(1,1)` and its values `T_j` on the
//! generators: walking the tree, `x(q g_i) = x(q) + T_i - f(q, g_i)`, so
//! `x = x0 + sum_j T_j C_j` where `C_j(s)` counts slot-`j` edges on the tree
//! path to `s`. For a cocycle `f`, `dx = f` holds everywhere as soon as it
//! holds on the pairs `(s, g_i)`, which gives `|G| k` linear equations in the
//! `k` unknowns `T_j`:
//!
//! ```text
//! sum_j T_j W_j(s,i) = r_{s,i}(f),
//! W_j(s,i) = C_j(s) + C_j(g_i) - C_j(s g_i),
//! r_{s,i}(f) = f(s,g_i) - x0(s) - x0(g_i) + x0(s g_i).
//! ```
//!
//! `f` is a coboundary iff `r(f)` lies in the span of the `W_j`, so `r(f)`
//! reduced modulo that span is a faithful coordinate vector for the class
//! of `f` in `H^2`.

use crate::group::FiniteGroup;
use crate::linalg::{EchelonBasis, FpVec};

use super::{Cochain1, Cochain2};

pub struct CoboundarySolver<'a, G: FiniteGroup + ?Sized> {
    g: &'a G,
    p: u32,
    k: usize,
    /// `C_j(s) mod p`, row-major by element.
    counts: Vec<u32>,
    relations: EchelonBasis,
}

impl<'a, G: FiniteGroup + ?Sized> CoboundarySolver<'a, G> {
    pub fn new(g: &'a G, p: u32) -> Self {
        let k = g.generators().len();
        let n = g.order();
        let tree = g.tree();
        let mut counts = vec![0u32; n * k];
        for &e in &tree.bfs_order()[1..] {
            let (q, i) = tree.parent(e).expect("non-root");
            for j in 0..k {
                counts[e * k + j] = counts[q * k + j];
            }
            counts[e * k + i] = (counts[e * k + i] + 1) % p;
        }
        let mut relations = EchelonBasis::new(p, n * k);
        let gens = g.generators();
        for j in 0..k {
            let mut w = FpVec::zeros(p, n * k);
            for s in 0..n {
                for (i, &gi) in gens.iter().enumerate() {
                    let v = counts[s * k + j] + counts[gi * k + j] + p - counts[g.mul_gen(s, i) * k + j];
                    if !v.is_multiple_of(p) {
                        w.set(s * k + i, v % p);
                    }
                }
            }
            relations.insert_tagged(&w, FpVec::unit(p, k, j));
        }
        CoboundarySolver {
            g,
            p,
            k,
            counts,
            relations,
        }
    }

    pub fn group(&self) -> &G {
        self.g
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Length of class coordinate vectors.
    pub fn coordinate_len(&self) -> usize {
        self.g.order() * self.k
    }

    fn particular(&self, f: &dyn Fn(usize, usize) -> u32) -> (Vec<u32>, FpVec) {
        let (g, p, k) = (self.g, self.p, self.k);
        let gens = g.generators();
        let x0 = g.tree().propagate(f(g.identity(), g.identity()) % p, |&v, q, i| {
            (v + p - f(q, gens[i]) % p) % p
        });
        let mut r = FpVec::zeros(p, g.order() * k);
        for s in 0..g.order() {
            for (i, &gi) in gens.iter().enumerate() {
                let v = f(s, gi) % p + 2 * p - x0[s] - x0[gi] + x0[g.mul_gen(s, i)];
                if !v.is_multiple_of(p) {
                    r.set(s * k + i, v % p);
                }
            }
        }
        (x0, r)
    }

    /// Canonical coordinates of the class of the cocycle `f`: equal vectors
    /// iff cohomologous, zero iff a coboundary, and linear in `f`.
    pub fn class_vector_fn(&self, f: &dyn Fn(usize, usize) -> u32) -> FpVec {
        let (_, r) = self.particular(f);
        self.relations.reduce(&r)
    }

    pub fn class_vector(&self, f: &Cochain2) -> FpVec {
        self.class_vector_fn(&|a, b| f.at(a, b))
    }

    /// A 1-cochain `x` with `dx = f`, for a cocycle `f`, if one exists.
    pub fn solve_fn(&self, f: &dyn Fn(usize, usize) -> u32) -> Option<Cochain1> {
        let (x0, r) = self.particular(f);
        let t = self.relations.express(&r, self.k)?;
        let (p, k) = (self.p, self.k);
        Some(Cochain1::from_fn(p, self.g.order(), |s| {
            (0..k).fold(x0[s], |acc, j| (acc + t.get(j) * self.counts[s * k + j]) % p)
        }))
    }

    pub fn solve(&self, f: &Cochain2) -> Option<Cochain1> {
        self.solve_fn(&|a, b| f.at(a, b))
    }

    pub fn is_coboundary(&self, f: &Cochain2) -> bool {
        self.class_vector(f).is_zero()
    }

    /// A witness `x` with `dx = f - h` when the cocycles are cohomologous.
    pub fn cohomologous(&self, f: &Cochain2, h: &Cochain2) -> Option<Cochain1> {
        let p = self.p;
        self.solve_fn(&|a, b| (f.at(a, b) + p - h.at(a, b)) % p)
    }
}
