//! Truncated non-commutative power series over `Z/m`.
//!
//! A [`TruncatedSeries`] is an element of `Z/m<<X_0, ..., X_{k-1}>>` modulo the
//! ideal spanned by monomials of length greater than the degree bound `D`.
//! Coefficients are stored densely in graded-lex word order (see
//! [`WordIndexer`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::magnus::Degree;
use crate::word::{Word, WordIndexer};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    modulus: u32,
    alphabet: usize,
    degree_bound: usize,
    coeffs: Vec<u32>,
}

fn series_len(k: usize, d: usize) -> usize {
    let mut total = 0usize;
    let mut pw = 1usize;
    for _ in 0..=d {
        total += pw;
        pw *= k;
    }
    total
}

impl TruncatedSeries {
    pub fn zero(modulus: u32, alphabet: usize, degree_bound: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!("modulus {modulus} < 2")));
        }
        if alphabet == 0 {
            return Err(Error::InvalidParameter("alphabet must be nonempty".into()));
        }
        Ok(TruncatedSeries {
            modulus,
            alphabet,
            degree_bound,
            coeffs: vec![0; series_len(alphabet, degree_bound)],
        })
    }

    pub fn one(modulus: u32, alphabet: usize, degree_bound: usize) -> Result<Self> {
        let mut s = Self::zero(modulus, alphabet, degree_bound)?;
        s.coeffs[0] = 1;
        Ok(s)
    }

    /// `c * X_w`; zero when `|w|` exceeds the degree bound.
    pub fn monomial(
        modulus: u32,
        alphabet: usize,
        degree_bound: usize,
        w: &Word,
        c: u32,
    ) -> Result<Self> {
        let mut s = Self::zero(modulus, alphabet, degree_bound)?;
        check_letters(w, alphabet)?;
        if let Some(i) = s.indexer().index(w) {
            s.coeffs[i] = c % modulus;
        }
        Ok(s)
    }

    /// `1 + X_a`, the Magnus image of the generator `a`.
    pub fn generator(modulus: u32, alphabet: usize, degree_bound: usize, a: usize) -> Result<Self> {
        let mut s = Self::one(modulus, alphabet, degree_bound)?;
        if a >= alphabet {
            return Err(Error::GeneratorOutOfRange { index: a, alphabet });
        }
        if degree_bound >= 1 {
            s.coeffs[1 + a] = 1;
        }
        Ok(s)
    }

    /// Builds a series from coefficients in graded-lex order; residues are reduced.
    pub fn from_coeffs(
        modulus: u32,
        alphabet: usize,
        degree_bound: usize,
        coeffs: Vec<u32>,
    ) -> Result<Self> {
        let mut s = Self::zero(modulus, alphabet, degree_bound)?;
        if coeffs.len() != s.coeffs.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                s.coeffs.len(),
                coeffs.len()
            )));
        }
        s.coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(s)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn indexer(&self) -> WordIndexer {
        WordIndexer::new(self.alphabet, self.degree_bound)
    }

    pub fn constant(&self) -> u32 {
        self.coeffs[0]
    }

    /// Coefficient of `X_w`, or `None` when `|w|` exceeds the degree bound
    /// or `w` uses letters outside the alphabet.
    pub fn get(&self, w: &Word) -> Option<u32> {
        self.indexer().index(w).map(|i| self.coeffs[i])
    }

    /// Coefficients of the words of length `l`, in lexicographic order.
    pub fn degree_part(&self, l: usize) -> &[u32] {
        let ix = self.indexer();
        &self.coeffs[ix.range(l)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus
            || self.alphabet != other.alphabet
            || self.degree_bound != other.degree_bound
        {
            return Err(Error::ParameterMismatch(format!(
                "(m={}, k={}, D={}) vs (m={}, k={}, D={})",
                self.modulus,
                self.alphabet,
                self.degree_bound,
                other.modulus,
                other.alphabet,
                other.degree_bound
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % m)
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        self.with_coeffs(self.coeffs.iter().map(|&a| (m - a) % m).collect())
    }

    pub fn scale(&self, c: u32) -> Self {
        let m = self.modulus as u64;
        let c = c as u64 % m;
        self.with_coeffs(
            self.coeffs
                .iter()
                .map(|&a| (a as u64 * c % m) as u32)
                .collect(),
        )
    }

    fn with_coeffs(&self, coeffs: Vec<u32>) -> Self {
        TruncatedSeries {
            modulus: self.modulus,
            alphabet: self.alphabet,
            degree_bound: self.degree_bound,
            coeffs,
        }
    }

    /// Truncated product: the coefficient of `w` is the sum over all
    /// splittings `w = uv` of `s[u] * t[v]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let ix = self.indexer();
        let d = self.degree_bound;
        let m = self.modulus as u64;
        let mut acc = vec![0u64; self.coeffs.len()];
        for lu in 0..=d {
            let urange = ix.range(lu);
            for (u, &su) in self.coeffs[urange.clone()].iter().enumerate() {
                if su == 0 {
                    continue;
                }
                let su = su as u64;
                for lv in 0..=(d - lu) {
                    let base = ix.offset(lu + lv) + u * ix.count(lv);
                    let vrange = ix.range(lv);
                    for (v, &tv) in other.coeffs[vrange].iter().enumerate() {
                        if tv != 0 {
                            acc[base + v] += su * tv as u64;
                        }
                    }
                }
            }
            // keep accumulators bounded
            if m > 1 << 16 {
                for a in acc.iter_mut() {
                    *a %= m;
                }
            }
        }
        self.with_coeffs(acc.into_iter().map(|a| (a % m) as u32).collect())
    }

    /// `self * (1 + X_a)`, computed in linear time.
    pub(crate) fn mul_generator_right(&self, a: usize) -> Self {
        let mut out = self.coeffs.clone();
        let m = self.modulus;
        let k = self.alphabet;
        let mut off = 0usize;
        let mut count = 1usize;
        for _l in 0..self.degree_bound {
            let next_off = off + count;
            for u in 0..count {
                let c = self.coeffs[off + u];
                if c != 0 {
                    let t = next_off + u * k + a;
                    out[t] = (out[t] + c) % m;
                }
            }
            off = next_off;
            count *= k;
        }
        self.with_coeffs(out)
    }

    /// Inverse of a series with constant term 1, as the finite geometric
    /// series `sum_{j=0}^{D} (-alpha)^j` where `self = 1 + alpha`.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0] != 1 {
            return Err(Error::NotAUnit(self.coeffs[0]));
        }
        let mut alpha = self.clone();
        alpha.coeffs[0] = 0;
        let one = Self::one(self.modulus, self.alphabet, self.degree_bound)?;
        // Horner: 1 - alpha (1 - alpha (1 - ...))
        let mut t = one.clone();
        for _ in 0..self.degree_bound {
            t = one.add(&alpha.mul_unchecked(&t).neg())?;
        }
        Ok(t)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus, self.alphabet, self.degree_bound)
            .expect("parameters already validated");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `s^-1 t^-1 s t`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let si = self.inverse()?;
        let ti = other.inverse()?;
        Ok(si
            .mul_unchecked(&ti)
            .mul_unchecked(self)
            .mul_unchecked(other))
    }

    /// The filtration degree: the largest `n <= D + 1` such that all
    /// coefficients of words of length in `[1, n)` vanish.
    pub fn v_degree(&self) -> Result<Degree> {
        if self.coeffs[0] != 1 {
            return Err(Error::NotAUnit(self.coeffs[0]));
        }
        let ix = self.indexer();
        for l in 1..=self.degree_bound {
            if self.coeffs[ix.range(l)].iter().any(|&c| c != 0) {
                return Ok(Degree::Exact(l));
            }
        }
        Ok(Degree::AtLeast(self.degree_bound + 1))
    }

    /// Image under the quotient by monomials of length `> bound`.
    pub fn truncate(&self, bound: usize) -> Result<Self> {
        if bound > self.degree_bound {
            return Err(Error::InvalidParameter(format!(
                "cannot raise degree bound from {} to {bound}",
                self.degree_bound
            )));
        }
        let len = series_len(self.alphabet, bound);
        Ok(TruncatedSeries {
            modulus: self.modulus,
            alphabet: self.alphabet,
            degree_bound: bound,
            coeffs: self.coeffs[..len].to_vec(),
        })
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Word, u32)> + '_ {
        let ix = self.indexer();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (ix.word(i), c))
    }

    /// Parses the output of `Display`, e.g. `1 + X[0,1] + 2*X[1,0]`.
    pub fn parse(s: &str, modulus: u32, alphabet: usize, degree_bound: usize) -> Result<Self> {
        let mut out = Self::zero(modulus, alphabet, degree_bound)?;
        let ix = out.indexer();
        let trimmed = s.trim();
        if trimmed == "0" {
            return Ok(out);
        }
        let mut offset = 0usize;
        for raw in trimmed.split('+') {
            let term = raw.trim();
            let err = |message: String| Error::Parse { offset, message };
            let (coef, mono) = match term.split_once('*') {
                Some((c, x)) => (Some(c.trim()), Some(x.trim())),
                None if term.starts_with('X') => (None, Some(term)),
                None => (Some(term), None),
            };
            let c = match coef {
                Some(c) => c
                    .parse::<u64>()
                    .map_err(|_| err(format!("bad coefficient `{c}`")))?,
                None => 1,
            };
            let idx = match mono {
                None => 0,
                Some(x) => {
                    let body = x
                        .strip_prefix('X')
                        .ok_or_else(|| err(format!("expected monomial, got `{x}`")))?;
                    let w = Word::parse(body)?;
                    check_letters(&w, alphabet)?;
                    ix.index(&w)
                        .ok_or_else(|| err(format!("word {w} exceeds degree bound")))?
                }
            };
            out.coeffs[idx] = ((out.coeffs[idx] as u64 + c) % modulus as u64) as u32;
            offset += raw.len() + 1;
        }
        Ok(out)
    }
}

fn check_letters(w: &Word, alphabet: usize) -> Result<()> {
    match w.letters().iter().find(|&&a| a >= alphabet) {
        Some(&a) => Err(Error::GeneratorOutOfRange { index: a, alphabet }),
        None => Ok(()),
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (w.is_empty(), c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => write!(f, "X{w}")?,
                (false, c) => write!(f, "{c}*X{w}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(m: u32, k: usize, d: usize, a: usize) -> TruncatedSeries {
        TruncatedSeries::generator(m, k, d, a).unwrap()
    }

    fn mono(m: u32, k: usize, d: usize, w: &[usize], c: u32) -> TruncatedSeries {
        TruncatedSeries::monomial(m, k, d, &Word::new(w.to_vec()), c).unwrap()
    }

    #[test]
    fn add_constants() {
        let one = TruncatedSeries::one(4, 2, 2).unwrap();
        let two = one.add(&one).unwrap();
        assert_eq!(two.constant(), 2);
        assert!(two.coeffs()[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn additive_identity_and_inverse() {
        let s = gen(5, 2, 3, 1);
        let z = TruncatedSeries::zero(5, 2, 3).unwrap();
        assert_eq!(s.add(&z).unwrap(), s);
        assert!(s.add(&s.scale(4)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let s = gen(2, 2, 2, 0);
        let t = gen(3, 2, 2, 0);
        let u = gen(2, 2, 3, 0);
        assert!(matches!(s.add(&t), Err(Error::ParameterMismatch(_))));
        assert!(matches!(s.mul(&u), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn product_of_two_generators() {
        for m in [2, 3, 7] {
            let p = gen(m, 2, 3, 0).mul(&gen(m, 2, 3, 1)).unwrap();
            let expected = TruncatedSeries::one(m, 2, 3)
                .unwrap()
                .add(&mono(m, 2, 3, &[0], 1))
                .unwrap()
                .add(&mono(m, 2, 3, &[1], 1))
                .unwrap()
                .add(&mono(m, 2, 3, &[0, 1], 1))
                .unwrap();
            assert_eq!(p, expected);
        }
    }

    #[test]
    fn square_of_generator_mod_two() {
        // (1 + X_a)^2 = 1 + 2 X_a + X_aa = 1 + X_aa over F_2
        let s = gen(2, 2, 2, 0);
        assert_eq!(s.mul(&s).unwrap().to_string(), "1 + X[0,0]");
    }

    #[test]
    fn noncommutative() {
        let a = mono(3, 2, 2, &[0], 1);
        let b = mono(3, 2, 2, &[1], 1);
        assert_ne!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn inverse_of_generator() {
        let inv = gen(3, 2, 2, 0).inverse().unwrap();
        assert_eq!(inv.to_string(), "1 + 2*X[0] + X[0,0]");
        assert!(inv.mul(&gen(3, 2, 2, 0)).unwrap().is_one());
        let one = TruncatedSeries::one(3, 2, 2).unwrap();
        assert_eq!(one.inverse().unwrap(), one);
    }

    #[test]
    fn inverse_requires_unit_constant() {
        let z = TruncatedSeries::zero(3, 2, 2).unwrap();
        assert_eq!(z.inverse(), Err(Error::NotAUnit(0)));
        assert_eq!(z.v_degree(), Err(Error::NotAUnit(0)));
    }

    #[test]
    fn right_generator_product_matches_general_product() {
        let s = gen(3, 3, 3, 2)
            .mul(&gen(3, 3, 3, 0))
            .unwrap()
            .mul(&gen(3, 3, 3, 1).inverse().unwrap())
            .unwrap();
        for a in 0..3 {
            assert_eq!(s.mul_generator_right(a), s.mul(&gen(3, 3, 3, a)).unwrap());
        }
    }

    #[test]
    fn v_degree_cases() {
        let one = TruncatedSeries::one(2, 2, 3).unwrap();
        assert_eq!(one.v_degree().unwrap(), Degree::AtLeast(4));
        assert_eq!(gen(2, 2, 3, 0).v_degree().unwrap(), Degree::Exact(1));
        let c = gen(2, 2, 3, 0).commutator(&gen(2, 2, 3, 1)).unwrap();
        assert_eq!(c.v_degree().unwrap(), Degree::Exact(2));
    }

    #[test]
    fn display_and_parse() {
        let s = gen(5, 2, 2, 1).pow(3);
        let text = s.to_string();
        assert_eq!(text, "1 + 3*X[1] + 3*X[1,1]");
        assert_eq!(TruncatedSeries::parse(&text, 5, 2, 2).unwrap(), s);
        let z = TruncatedSeries::zero(5, 2, 2).unwrap();
        assert_eq!(z.to_string(), "0");
        assert_eq!(TruncatedSeries::parse("0", 5, 2, 2).unwrap(), z);
        assert!(TruncatedSeries::parse("X[0,0,0]", 5, 2, 2).is_err());
    }

    #[test]
    fn truncation() {
        let s = gen(2, 2, 3, 0).commutator(&gen(2, 2, 3, 1)).unwrap();
        let t = s.truncate(1).unwrap();
        assert!(t.is_one());
        assert!(s.truncate(4).is_err());
    }
}
