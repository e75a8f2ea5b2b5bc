//! The pairing between `S_n/S_{n+1}` and classes of `H^2(S/S_n)` that die
//! on inflation to `S/S_{n+1}`, computed by lifting: inflate a cocycle
//! `b` to `Ĝ = S/S_{n+1}`, solve `dx = inf b` there, and read off
//! `x(s) - x(1)` at the image of `s in S_n`.
//!
//! Solutions differ by characters of `Ĝ`, which vanish on the image of
//! `S_n` for `n >= 2`. Subtracting `x(1) = b(1,1)` makes the value depend
//! only on the class of `b`, also for cocycles that are not normalized.

use crate::error::{Error, Result};
use crate::free_group::GroupWord;
use crate::group::FiniteGroup;
use crate::quotient::Quotient;
use crate::word::Word;

use super::solver::CoboundarySolver;
use super::{Cochain1, Cochain2};

/// `G = S/S_n`, `Ĝ = S/S_{n+1}` and the projection between them.
pub struct PairingContext {
    n: usize,
    base: Quotient,
    hat: Quotient,
    projection: Vec<usize>,
}

impl PairingContext {
    pub fn new(k: usize, p: u32, n: usize) -> Result<Self> {
        Self::with_budget(k, p, n, crate::quotient::DEFAULT_ORDER_BUDGET)
    }

    pub fn with_budget(k: usize, p: u32, n: usize, budget: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("the pairing is defined for n >= 2".into()));
        }
        let base = Quotient::build_with_budget(k, p, n, budget)?;
        let hat = Quotient::build_with_budget(k, p, n + 1, budget)?;
        let projection = hat.projection_to(&base)?;
        Ok(PairingContext {
            n,
            base,
            hat,
            projection,
        })
    }

    pub fn level(&self) -> usize {
        self.n
    }

    /// `S/S_n`
    pub fn base(&self) -> &Quotient {
        &self.base
    }

    /// `S/S_{n+1}`
    pub fn hat(&self) -> &Quotient {
        &self.hat
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn hat_solver(&self) -> CoboundarySolver<'_, Quotient> {
        CoboundarySolver::new(&self.hat, self.hat.prime())
    }

    /// A solution of `dx = inf b` on `Ĝ`.
    pub fn lift(&self, solver: &CoboundarySolver<'_, Quotient>, beta: &Cochain2) -> Result<Cochain1> {
        if beta.order() != self.base.order() {
            return Err(Error::ParameterMismatch("cocycle not on S/S_n".into()));
        }
        let proj = &self.projection;
        solver
            .solve_fn(&|a, b| beta.at(proj[a], proj[b]))
            .ok_or(Error::ClassDoesNotVanish(self.n + 1))
    }

    /// Pairing value at an element of `S_n/S_{n+1}` given a lift `x`.
    pub fn evaluate(&self, x: &Cochain1, element: usize) -> Result<u32> {
        if self.hat.element_degree(element) < self.n {
            return Err(Error::Precondition(format!("element {element} is not in S_{}", self.n)));
        }
        let p = self.hat.prime();
        Ok((x.at(element) + p - x.at(self.hat.identity())) % p)
    }

    pub fn value(&self, sigma: &GroupWord, beta: &Cochain2) -> Result<u32> {
        let solver = self.hat_solver();
        let x = self.lift(&solver, beta)?;
        self.evaluate(&x, self.hat.evaluate(sigma)?)
    }
}

/// The pairing of `sigma in S_n` with the class of `beta` on `S/S_n`.
pub fn pairing_value(sigma: &GroupWord, beta: &Cochain2, p: u32, k: usize, n: usize) -> Result<u32> {
    PairingContext::new(k, p, n)?.value(sigma, beta)
}

/// Cocycles `eps_w o zeta` on `S/S_n`, one per word of length `n`, where
/// `zeta(g, h) = s(gh)^-1 s(g) s(h)` for a section `s` of `Ĝ -> G`.
/// They span the transgression image of `Hom(S_n/S_{n+1}, F_p)`.
pub fn transgression_classes(ctx: &PairingContext) -> Result<Vec<(Word, Cochain2)>> {
    let (base, hat) = (&ctx.base, &ctx.hat);
    let mut section = vec![usize::MAX; base.order()];
    for (e, &b) in ctx.projection.iter().enumerate() {
        if section[b] == usize::MAX {
            section[b] = e;
        }
    }
    section[base.identity()] = hat.identity();
    let n = base.order();
    let mut zeta = vec![0usize; n * n];
    for g in 0..n {
        for h in 0..n {
            let z = hat.mul(hat.inv(section[base.mul(g, h)]), hat.mul(section[g], section[h]));
            debug_assert_eq!(ctx.projection[z], base.identity());
            zeta[g * n + h] = z;
        }
    }
    Word::all_of_length(hat.alphabet(), ctx.n)
        .into_iter()
        .map(|w| {
            let eps = hat.epsilon_values(&w)?;
            let f = Cochain2::from_fn(hat.prime(), n, |g, h| eps[zeta[g * n + h]]);
            Ok((w, f))
        })
        .collect()
}
