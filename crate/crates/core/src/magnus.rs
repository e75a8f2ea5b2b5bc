//! The Magnus homomorphism `a -> 1 + X_a` and its coefficient functionals.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::free_group::GroupWord;
use crate::series::TruncatedSeries;
use crate::word::Word;

/// A filtration degree, possibly only bounded from below because the
/// computation stopped at a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    Exact(usize),
    AtLeast(usize),
}

impl Degree {
    /// The guaranteed lower bound.
    pub fn lower_bound(self) -> usize {
        match self {
            Degree::Exact(n) | Degree::AtLeast(n) => n,
        }
    }

    /// Whether the element is known to lie in level `n` of the filtration.
    pub fn at_least(self, n: usize) -> bool {
        self.lower_bound() >= n
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Exact(n) => write!(f, "{n}"),
            Degree::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Magnus image of `g` in `Z/m<<X_0..X_{k-1}>>` truncated at degree `d`.
///
/// Negative exponents go through [`TruncatedSeries::inverse`] of `1 + X_a`.
pub fn magnus(g: &GroupWord, m: u32, k: usize, d: usize) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(m, k, d)?;
    for &(a, e) in g.syllables() {
        if a >= k {
            return Err(Error::GeneratorOutOfRange { index: a, alphabet: k });
        }
        let mut base = TruncatedSeries::generator(m, k, d, a)?;
        if e < 0 {
            base = base.inverse()?;
        }
        acc = acc.mul_unchecked(&base.pow(e.unsigned_abs()));
    }
    Ok(acc)
}

/// The Magnus coefficient `eps_w(g)` in `Z/m`, computed at degree bound `|w|`.
pub fn epsilon(w: &Word, g: &GroupWord, m: u32) -> u32 {
    let k = w.min_alphabet().max(g.min_alphabet()).max(1);
    magnus(g, m, k, w.len())
        .and_then(|s| s.get(w).ok_or(Error::InvalidParameter("word".into())))
        .expect("alphabet covers every letter of w and g")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize]) -> Word {
        Word::new(letters.to_vec())
    }

    #[test]
    fn identity_maps_to_one() {
        let s = magnus(&GroupWord::identity(), 3, 2, 3).unwrap();
        assert!(s.is_one());
    }

    #[test]
    fn generator_maps_to_one_plus_x() {
        for m in [2, 3, 4] {
            let s = magnus(&GroupWord::generator(1), m, 2, 2).unwrap();
            assert_eq!(s.to_string(), "1 + X[1]");
        }
    }

    #[test]
    fn commutator_expansion_mod_two() {
        let c = GroupWord::generator(0).commutator(&GroupWord::generator(1));
        let s = magnus(&c, 2, 2, 2).unwrap();
        assert_eq!(s.to_string(), "1 + X[0,1] + X[1,0]");
    }

    #[test]
    fn out_of_range_generator() {
        let g = GroupWord::generator(3);
        assert!(matches!(
            magnus(&g, 2, 2, 2),
            Err(Error::GeneratorOutOfRange { index: 3, alphabet: 2 })
        ));
    }

    #[test]
    fn epsilon_basics() {
        let a = GroupWord::generator(0);
        let b = GroupWord::generator(1);
        assert_eq!(epsilon(&w(&[0]), &a, 5), 1);
        assert_eq!(epsilon(&w(&[0]), &b, 5), 0);
        for g in [&a, &b, &a.commutator(&b)] {
            assert_eq!(epsilon(&Word::empty(), g, 7), 1);
        }
        for m in [2, 3, 5, 6] {
            let c = a.commutator(&b);
            assert_eq!(epsilon(&w(&[0, 1]), &c, m), 1);
            assert_eq!(epsilon(&w(&[1, 0]), &c, m), m - 1);
        }
    }

    #[test]
    fn v_degree_of_commutator() {
        let c = GroupWord::generator(0).commutator(&GroupWord::generator(1));
        let s = magnus(&c, 2, 2, 3).unwrap();
        assert_eq!(s.v_degree().unwrap(), Degree::Exact(2));
    }

    #[test]
    fn truncation_coherence() {
        let g = GroupWord::parse("a0^2*a1^-1*[a0,a1]*a1^3").unwrap();
        let hi = magnus(&g, 3, 2, 4).unwrap();
        for d in 0..4 {
            assert_eq!(magnus(&g, 3, 2, d).unwrap(), hi.truncate(d).unwrap());
        }
    }
}
