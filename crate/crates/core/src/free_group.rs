//! Reduced words in a finitely generated free group and the Zassenhaus
//! filtration seen through the Magnus expansion.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::magnus::{magnus, Degree};
use crate::quotient::Quotient;
use crate::series::TruncatedSeries;

/// A freely reduced word, stored as syllables `(generator, exponent)`.
///
/// Adjacent syllables have distinct generators and exponents are nonzero;
/// the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    syllables: Vec<(usize, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn generator(a: usize) -> Self {
        GroupWord {
            syllables: vec![(a, 1)],
        }
    }

    /// Builds a word from arbitrary syllables, reducing as it goes.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut g = GroupWord::identity();
        for (a, e) in syllables {
            g.push(a, e);
        }
        g
    }

    fn push(&mut self, a: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((b, f)) if *b == a => {
                *f += e;
                if *f == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((a, e)),
        }
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters counted with multiplicity.
    pub fn length(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    /// One more than the largest generator index used.
    pub fn min_alphabet(&self) -> usize {
        self.syllables.iter().map(|&(a, _)| a + 1).max().unwrap_or(0)
    }

    /// Concatenation followed by free reduction.
    pub fn multiply(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for &(a, e) in &other.syllables {
            out.push(a, e);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            syllables: self.syllables.iter().rev().map(|&(a, e)| (a, -e)).collect(),
        }
    }

    pub fn power(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        if let [(a, f)] = base.syllables[..] {
            return GroupWord::from_syllables([(a, f * e.abs())]);
        }
        let mut acc = GroupWord::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.multiply(&base);
        }
        acc
    }

    /// `[g, h] = g^-1 h^-1 g h`
    pub fn commutator(&self, other: &GroupWord) -> GroupWord {
        self.inverse()
            .multiply(&other.inverse())
            .multiply(self)
            .multiply(other)
    }

    pub fn parse(s: &str) -> Result<GroupWord> {
        crate::parse::parse_group_word(s)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, &(a, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "a{a}")?;
            } else {
                write!(f, "a{a}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupWord::parse(s)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroupWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Zassenhaus degree of `g` at the prime `p`, capped at `cap`.
///
/// Returns `Exact(n)` when `g` lies in `S_n` but not `S_{n+1}` with `n < cap`,
/// and `AtLeast(cap)` otherwise.
pub fn zassenhaus_degree(g: &GroupWord, p: u32, cap: usize) -> Result<Degree> {
    crate::require_prime(p)?;
    if cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let k = g.min_alphabet().max(1);
    magnus(g, p, k, cap - 1)?.v_degree()
}

#[derive(Hash, PartialEq, Eq)]
enum DedupKey {
    Element(usize),
    Series(TruncatedSeries),
}

/// Words in `S_n` built by the recursive scheme: `p`-th powers of level
/// `ceil(l/p)` words and commutators `[x, y]` of level `i` and `j` words with
/// `i + j = l`.
///
/// Without an ambient quotient, the level `n` list is returned, deduplicated
/// by Magnus image at degree bound `n + 1`. With an ambient quotient `S/S_m`,
/// the union of the level lists `n..m` is returned, deduplicated by image in
/// the quotient (and trivial images dropped). `budget` caps each level list.
/// Order: levels ascending, powers before commutators, pairs in recipe order.
pub fn filtration_generators(
    n: usize,
    p: u32,
    k: usize,
    budget: usize,
    ambient: Option<&Quotient>,
) -> Result<Vec<GroupWord>> {
    crate::require_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("filtration level starts at 1".into()));
    }
    if let Some(q) = ambient {
        if q.alphabet() != k || q.prime() != p {
            return Err(Error::ParameterMismatch(format!(
                "ambient quotient has k={}, p={}; requested k={k}, p={p}",
                q.alphabet(),
                q.prime()
            )));
        }
    }
    let top = match ambient {
        Some(q) => q.bound().saturating_sub(1).max(n),
        None => n,
    };
    let key_of = |g: &GroupWord| -> Result<Option<DedupKey>> {
        match ambient {
            Some(q) => {
                let e = q.evaluate(g)?;
                Ok((e != q.identity_index()).then_some(DedupKey::Element(e)))
            }
            None => {
                let s = magnus(g, p, k, n + 1)?;
                Ok((!s.is_one()).then_some(DedupKey::Series(s)))
            }
        }
    };

    let mut levels: Vec<Vec<GroupWord>> = vec![Vec::new(); top + 1];
    for l in 1..=top {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        let mut offer = |g: GroupWord, list: &mut Vec<GroupWord>| -> Result<bool> {
            if list.len() >= budget {
                return Ok(false);
            }
            if let Some(key) = key_of(&g)? {
                if seen.insert(key) {
                    list.push(g);
                }
            }
            Ok(true)
        };
        if l == 1 {
            for a in 0..k {
                offer(GroupWord::generator(a), &mut list)?;
            }
        } else {
            let c = l.div_ceil(p as usize);
            for x in levels[c].clone() {
                if !offer(x.power(p as i64), &mut list)? {
                    break;
                }
            }
            'pairs: for i in 1..l {
                let j = l - i;
                for x in &levels[i] {
                    for y in &levels[j] {
                        if !offer(x.commutator(y), &mut list)? {
                            break 'pairs;
                        }
                    }
                }
            }
        }
        levels[l] = list;
    }

    if ambient.is_none() {
        return Ok(std::mem::take(&mut levels[n]));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for level in levels.into_iter().skip(n) {
        for g in level {
            if let Some(key) = key_of(&g)? {
                if seen.insert(key) {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> GroupWord {
        GroupWord::generator(0)
    }
    fn b() -> GroupWord {
        GroupWord::generator(1)
    }

    #[test]
    fn multiply_reduces() {
        assert!(a().multiply(&a().inverse()).is_identity());
        let ab = a().multiply(&b());
        let bia = b().inverse().multiply(&a());
        assert_eq!(ab.multiply(&bia), a().power(2));
        assert_eq!(ab.multiply(&GroupWord::identity()), ab);
    }

    #[test]
    fn commutators() {
        assert!(a().commutator(&a()).is_identity());
        assert!(a().commutator(&GroupWord::identity()).is_identity());
        let c = a().commutator(&b());
        assert_eq!(c.syllables(), &[(0, -1), (1, -1), (0, 1), (1, 1)]);
        assert_eq!(c.to_string(), "a0^-1*a1^-1*a0*a1");
    }

    #[test]
    fn display_round_trip() {
        for text in ["1", "a0", "a0^2*a1^-1", "a3^-7*a0*a3"] {
            let g = GroupWord::parse(text).unwrap();
            assert_eq!(g.to_string(), text);
            assert_eq!(GroupWord::parse(&g.to_string()).unwrap(), g);
        }
    }

    #[test]
    fn power_and_inverse() {
        let g = a().multiply(&b());
        assert_eq!(g.power(3).length(), 6);
        assert!(g.power(3).multiply(&g.power(-3)).is_identity());
        assert!(g.power(0).is_identity());
        assert_eq!(a().power(-4).syllables(), &[(0, -4)]);
    }

    #[test]
    fn degrees() {
        for p in [2, 3, 5] {
            assert_eq!(zassenhaus_degree(&a(), p, 6).unwrap(), Degree::Exact(1));
            assert_eq!(
                zassenhaus_degree(&a().commutator(&b()), p, 6).unwrap(),
                Degree::Exact(2)
            );
            assert_eq!(
                zassenhaus_degree(&a().power(p as i64), p, 7).unwrap(),
                Degree::Exact(p as usize)
            );
        }
        assert_eq!(
            zassenhaus_degree(&GroupWord::identity(), 2, 4).unwrap(),
            Degree::AtLeast(4)
        );
        assert_eq!(zassenhaus_degree(&a().power(4), 2, 3).unwrap(), Degree::AtLeast(3));
        assert!(zassenhaus_degree(&a(), 4, 3).is_err());
    }

    #[test]
    fn level_one_is_the_generators() {
        let gens = filtration_generators(1, 2, 3, 100, None).unwrap();
        assert_eq!(gens, vec![a(), b(), GroupWord::generator(2)]);
    }

    #[test]
    fn level_two_at_p_two() {
        let gens = filtration_generators(2, 2, 2, 100, None).unwrap();
        assert!(gens.contains(&a().power(2)));
        assert!(gens.contains(&b().power(2)));
        assert!(gens.contains(&a().commutator(&b())));
        // powers come first
        assert_eq!(gens[0], a().power(2));
    }

    #[test]
    fn level_three_at_p_two() {
        let gens = filtration_generators(3, 2, 2, 100, None).unwrap();
        let ab = a().commutator(&b());
        assert!(gens.contains(&a().commutator(&ab)));
        assert!(gens.contains(&b().commutator(&ab)));
        assert!(gens.contains(&ab.power(2)));
        for g in &gens {
            assert!(zassenhaus_degree(g, 2, 3).unwrap().at_least(3), "{g}");
        }
    }

    #[test]
    fn budget_caps_each_level() {
        let gens = filtration_generators(3, 3, 2, 2, None).unwrap();
        assert!(gens.len() <= 2);
    }
}
