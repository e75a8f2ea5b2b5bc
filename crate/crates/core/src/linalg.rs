//! Exact linear algebra over F_p: packed bit rows at p = 2, byte rows
//! otherwise, and an incremental echelon basis with optional tags that
//! record each row as a combination of the inserted vectors.

use crate::error::{Error, Result};

/// Multiplicative inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

/// A vector over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FpVec {
    Bits { len: usize, words: Vec<u64> },
    Bytes { p: u32, data: Vec<u8> },
}

impl FpVec {
    pub fn zeros(p: u32, len: usize) -> Self {
        if p == 2 {
            FpVec::Bits {
                len,
                words: vec![0; len.div_ceil(64)],
            }
        } else {
            assert!(p < 256, "byte rows need p < 256");
            FpVec::Bytes { p, data: vec![0; len] }
        }
    }

    pub fn from_values(p: u32, values: &[u32]) -> Self {
        let mut v = FpVec::zeros(p, values.len());
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x % p);
        }
        v
    }

    pub fn unit(p: u32, len: usize, i: usize) -> Self {
        let mut v = FpVec::zeros(p, len);
        v.set(i, 1);
        v
    }

    pub fn prime(&self) -> u32 {
        match self {
            FpVec::Bits { .. } => 2,
            FpVec::Bytes { p, .. } => *p,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FpVec::Bits { len, .. } => *len,
            FpVec::Bytes { data, .. } => data.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        match self {
            FpVec::Bits { words, .. } => ((words[i >> 6] >> (i & 63)) & 1) as u32,
            FpVec::Bytes { data, .. } => data[i] as u32,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, x: u32) {
        match self {
            FpVec::Bits { words, .. } => {
                let bit = 1u64 << (i & 63);
                if x & 1 == 1 {
                    words[i >> 6] |= bit;
                } else {
                    words[i >> 6] &= !bit;
                }
            }
            FpVec::Bytes { p, data } => data[i] = (x % *p) as u8,
        }
    }

    /// Adds `x` to coordinate `i`.
    #[inline]
    pub fn add_at(&mut self, i: usize, x: u32) {
        match self {
            FpVec::Bits { words, .. } => words[i >> 6] ^= ((x & 1) as u64) << (i & 63),
            FpVec::Bytes { p, data } => data[i] = ((data[i] as u32 + x % *p) % *p) as u8,
        }
    }

    pub fn values(&self) -> Vec<u32> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FpVec::Bits { words, .. } => words.iter().all(|&w| w == 0),
            FpVec::Bytes { data, .. } => data.iter().all(|&x| x == 0),
        }
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        match self {
            FpVec::Bits { words, .. } => words
                .iter()
                .enumerate()
                .find(|(_, &w)| w != 0)
                .map(|(i, w)| i * 64 + w.trailing_zeros() as usize),
            FpVec::Bytes { data, .. } => data.iter().position(|&x| x != 0),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u32, other: &FpVec) {
        match (self, other) {
            (FpVec::Bits { words, .. }, FpVec::Bits { words: o, .. }) => {
                if c & 1 == 1 {
                    for (a, b) in words.iter_mut().zip(o) {
                        *a ^= b;
                    }
                }
            }
            (FpVec::Bytes { p, data }, FpVec::Bytes { data: o, .. }) => {
                let p = *p as u16;
                let c = (c % p as u32) as u16;
                if c != 0 {
                    for (a, &b) in data.iter_mut().zip(o) {
                        *a = ((*a as u16 + c * b as u16) % p) as u8;
                    }
                }
            }
            _ => panic!("mixed vector representations"),
        }
    }

    pub fn scale(&mut self, c: u32) {
        match self {
            FpVec::Bits { words, .. } => {
                if c & 1 == 0 {
                    words.iter_mut().for_each(|w| *w = 0);
                }
            }
            FpVec::Bytes { p, data } => {
                let p = *p as u16;
                let c = (c % p as u32) as u16;
                data.iter_mut().for_each(|a| *a = ((*a as u16 * c) % p) as u8);
            }
        }
    }

    pub fn dot(&self, other: &FpVec) -> u32 {
        match (self, other) {
            (FpVec::Bits { words, .. }, FpVec::Bits { words: o, .. }) => {
                words.iter().zip(o).map(|(a, b)| (a & b).count_ones()).sum::<u32>() & 1
            }
            (FpVec::Bytes { p, data }, FpVec::Bytes { data: o, .. }) => {
                (data.iter().zip(o).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % *p as u64) as u32
            }
            _ => panic!("mixed vector representations"),
        }
    }
}

/// An echelon basis built by successive insertion. Each stored row has a
/// distinct pivot with value 1, and every later row is zero at earlier
/// pivots, so reducing in insertion order is complete.
///
/// When tags are used, each row carries the combination of inserted
/// vectors it equals, which lets callers extract relations and solutions.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    p: u32,
    len: usize,
    rows: Vec<FpVec>,
    pivots: Vec<usize>,
    tags: Vec<FpVec>,
}

impl EchelonBasis {
    pub fn new(p: u32, len: usize) -> Self {
        EchelonBasis {
            p,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[FpVec] {
        &self.rows
    }

    /// Reduces `v` against the basis, returning the remainder.
    pub fn reduce(&self, v: &FpVec) -> FpVec {
        let mut v = v.clone();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(piv);
            if c != 0 {
                v.add_scaled(self.p - c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &FpVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether it was independent of the basis.
    pub fn insert(&mut self, v: &FpVec) -> bool {
        let r = self.reduce(v);
        self.push_reduced(r, None)
    }

    fn push_reduced(&mut self, mut r: FpVec, tag: Option<FpVec>) -> bool {
        match r.first_nonzero() {
            None => false,
            Some(piv) => {
                let c = inv_mod(r.get(piv), self.p);
                r.scale(c);
                if let Some(mut t) = tag {
                    t.scale(c);
                    self.tags.push(t);
                }
                self.rows.push(r);
                self.pivots.push(piv);
                true
            }
        }
    }

    /// Reduces `v` while tracking the combination of stored rows used.
    /// Returns the remainder and the tag of `v - remainder`.
    fn reduce_tagged(&self, v: &FpVec, tag_len: usize) -> (FpVec, FpVec) {
        let mut v = v.clone();
        let mut used = FpVec::zeros(self.p, tag_len);
        for ((row, &piv), tag) in self.rows.iter().zip(&self.pivots).zip(&self.tags) {
            let c = v.get(piv);
            if c != 0 {
                v.add_scaled(self.p - c, row);
                used.add_scaled(c, tag);
            }
        }
        (v, used)
    }

    /// Inserts `v` labelled by `tag` (typically a unit vector naming it).
    /// If `v` depends on the basis, returns the relation: a tag combination
    /// whose vectors sum to zero.
    pub fn insert_tagged(&mut self, v: &FpVec, tag: FpVec) -> Option<FpVec> {
        assert_eq!(self.tags.len(), self.rows.len(), "tagged insert into untagged basis");
        let (r, used) = self.reduce_tagged(v, tag.len());
        let mut combo = tag;
        combo.add_scaled(self.p - 1, &used);
        if r.is_zero() {
            Some(combo)
        } else {
            self.push_reduced(r, Some(combo));
            None
        }
    }

    /// Writes `v` as a combination of the tagged inputs, if possible.
    pub fn express(&self, v: &FpVec, tag_len: usize) -> Option<FpVec> {
        assert_eq!(self.tags.len(), self.rows.len(), "express needs tags");
        let (r, used) = self.reduce_tagged(v, tag_len);
        r.is_zero().then_some(used)
    }

    /// Basis of `{x : row . x = 0 for every stored row}`.
    pub fn nullspace(&self) -> Vec<FpVec> {
        let p = self.p;
        // back-substitute into reduced row echelon form
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<FpVec> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        for i in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for r in head.iter_mut() {
                let c = r.get(pivots[i]);
                if c != 0 {
                    r.add_scaled(p - c, pivot_row);
                }
            }
        }
        let mut is_pivot = vec![false; self.len];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.len)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = FpVec::unit(p, self.len, f);
                for (r, &c) in rows.iter().zip(&pivots) {
                    let v = r.get(f);
                    if v != 0 {
                        x.set(c, p - v);
                    }
                }
                x
            })
            .collect()
    }
}

/// Rank of a list of vectors.
pub fn rank(p: u32, len: usize, vectors: &[FpVec]) -> usize {
    let mut e = EchelonBasis::new(p, len);
    vectors.iter().filter(|v| e.insert(v)).count()
}

/// Relations among `vectors` (a basis of the space of `lambda` with
/// `sum lambda_i v_i = 0`), optionally working modulo `modulo`.
pub fn relations(p: u32, len: usize, vectors: &[FpVec], modulo: Option<&EchelonBasis>) -> Vec<FpVec> {
    let mut e = EchelonBasis::new(p, len);
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let v = match modulo {
            Some(m) => m.reduce(v),
            None => v.clone(),
        };
        if let Some(rel) = e.insert_tagged(&v, FpVec::unit(p, vectors.len(), i)) {
            out.push(rel);
        }
    }
    out
}

/// Rank of a dense matrix given as rows of residues.
pub fn matrix_rank(p: u32, rows: &[Vec<u32>]) -> Result<usize> {
    let len = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != len) {
        return Err(Error::InvalidParameter("ragged matrix".into()));
    }
    let vs: Vec<FpVec> = rows.iter().map(|r| FpVec::from_values(p, r)).collect();
    Ok(rank(p, len, &vs))
}
