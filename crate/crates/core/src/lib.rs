//! Exact computations around the p-Zassenhaus filtration of free groups.
//!
//! The crate models the filtration through the Magnus expansion into
//! truncated non-commutative power series, realizes the finite quotients
//! `S/S_m` as explicit groups, and computes n-fold Massey products on them
//! through the correspondence with punctured unipotent matrices. The
//! [`verify`] module assembles these pieces into reproducible checks of the
//! kernel-intersection and duality statements.

pub mod cohomology;
pub mod error;
pub mod free_group;
pub mod group;
pub mod linalg;
pub mod magnus;
pub mod parse;
pub mod quotient;
pub mod series;
pub mod unipotent;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use free_group::GroupWord;
pub use group::{FiniteGroup, GroupTable};
pub use magnus::{epsilon, magnus, Degree};
pub use quotient::Quotient;
pub use series::TruncatedSeries;
pub use word::Word;

/// Trial-division primality test; moduli here are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn require_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not prime")))
    }
}
