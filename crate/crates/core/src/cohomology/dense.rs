//! Dense linear algebra on all of `C^2(G)`: cocycle spaces, coboundary
//! spaces and a direct coboundary solver. Cost grows with `|G|^3`, so this
//! serves small groups and cross-checks of the tree solver.

use crate::error::Result;
use crate::group::FiniteGroup;
use crate::linalg::{EchelonBasis, FpVec};

use super::{d1, Cochain1, Cochain2};

/// Basis of the 2-cocycles, as vectors indexed `a * |G| + b`.
pub fn cocycle_basis<G: FiniteGroup + ?Sized>(g: &G, p: u32) -> Vec<FpVec> {
    let n = g.order();
    let mut eqs = EchelonBasis::new(p, n * n);
    let mut row = FpVec::zeros(p, n * n);
    for s in 0..n {
        for t in 0..n {
            let st = g.mul(s, t);
            for r in 0..n {
                let tr = g.mul(t, r);
                row.add_at(s * n + t, 1);
                row.add_at(st * n + r, 1);
                row.add_at(t * n + r, p - 1);
                row.add_at(s * n + tr, p - 1);
                if !row.is_zero() {
                    eqs.insert(&row);
                }
                row.scale(0);
            }
        }
    }
    eqs.nullspace()
}

/// Echelon basis of the 2-coboundaries, tagged by the delta functions they
/// come from.
pub fn coboundary_basis<G: FiniteGroup + ?Sized>(g: &G, p: u32) -> EchelonBasis {
    let n = g.order();
    let mut b = EchelonBasis::new(p, n * n);
    for e in 0..n {
        let delta = Cochain1::from_fn(p, n, |x| u32::from(x == e));
        let f = d1(g, &delta).expect("matching order");
        b.insert_tagged(&FpVec::from_values(p, f.values()), FpVec::unit(p, n, e));
    }
    b
}

pub fn h2_dimension<G: FiniteGroup + ?Sized>(g: &G, p: u32) -> usize {
    cocycle_basis(g, p).len() - coboundary_basis(g, p).rank()
}

/// Solves `dx = f` over all of `C^1` by elimination.
pub fn solve_coboundary<G: FiniteGroup + ?Sized>(g: &G, f: &Cochain2) -> Result<Option<Cochain1>> {
    let p = f.prime();
    let b = coboundary_basis(g, p);
    Ok(b
        .express(&FpVec::from_values(p, f.values()), g.order())
        .map(|t| Cochain1::from_values(p, t.values())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cup, generator_characters};
    use crate::group::GroupTable;
    use crate::Quotient;

    #[test]
    fn h2_of_small_elementary_abelian_groups() {
        // H^2((Z/2)^2, F_2) has dimension 3, H^2(Z/2, F_2) dimension 1
        let q = Quotient::build(2, 2, 2).unwrap();
        assert_eq!(h2_dimension(&q, 2), 3);
        let c2 = GroupTable::from_fn(2, vec![1], |a, b| a ^ b).unwrap();
        assert_eq!(h2_dimension(&c2, 2), 1);
        // H^2((Z/3)^2, F_3) has dimension 3
        let q = Quotient::build(2, 3, 2).unwrap();
        assert_eq!(h2_dimension(&q, 3), 3);
    }

    #[test]
    fn dense_solver_inverts_d1() {
        let q = Quotient::build(2, 2, 2).unwrap();
        let c = Cochain1::from_values(2, vec![0, 1, 1, 0]);
        let f = d1(&q, &c).unwrap();
        let x = solve_coboundary(&q, &f).unwrap().unwrap();
        assert_eq!(d1(&q, &x).unwrap(), f);
        let chars = generator_characters(&q).unwrap();
        assert!(solve_coboundary(&q, &cup(&chars[0], &chars[1]).unwrap()).unwrap().is_none());
    }
}
