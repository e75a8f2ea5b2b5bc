//! Words in the free monoid on a finite alphabet, and their graded-lex indexing.

use std::fmt;

use crate::error::{Error, Result};

/// A finite word `(a_1, ..., a_n)` over the alphabet `{0, ..., k-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(a: usize) -> Self {
        Word(vec![a])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letters `i..j` (0-based, half open).
    pub fn subword(&self, i: usize, j: usize) -> Word {
        Word(self.0[i..j].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// One more than the largest letter, or 0 for the empty word.
    pub fn min_alphabet(&self) -> usize {
        self.0.iter().map(|a| a + 1).max().unwrap_or(0)
    }

    /// All words of length `n` over `k` letters, in lexicographic order.
    pub fn all_of_length(k: usize, n: usize) -> Vec<Word> {
        let count = k.pow(n as u32);
        (0..count).map(|i| Word::from_lex_index(k, n, i)).collect()
    }

    fn from_lex_index(k: usize, n: usize, mut index: usize) -> Word {
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = index % k;
            index /= k;
        }
        Word(letters)
    }

    /// Parses `0,1,1`, `a0,a1,a1` or `a0a1a1`; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "()" || s == "[]" {
            return Ok(Word::empty());
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .or_else(|| s.strip_prefix('[').and_then(|t| t.strip_suffix(']')))
            .unwrap_or(s);
        let mut letters = Vec::new();
        for (offset, token) in split_letters(inner) {
            let digits = token.strip_prefix('a').unwrap_or(token);
            let a = digits.parse::<usize>().map_err(|_| Error::Parse {
                offset,
                message: format!("bad letter `{token}`"),
            })?;
            letters.push(a);
        }
        Ok(Word(letters))
    }
}

fn split_letters(s: &str) -> Vec<(usize, &str)> {
    if s.contains(',') {
        let mut out = Vec::new();
        let mut start = 0;
        for part in s.split(',') {
            let lead = part.len() - part.trim_start().len();
            out.push((start + lead, part.trim()));
            start += part.len() + 1;
        }
        return out;
    }
    // `a0a1a12` style
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        i += 1;
        while i < bytes.len() && bytes[i] != b'a' {
            i += 1;
        }
        out.push((start, s[start..i].trim()));
    }
    out
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Graded-lexicographic indexing of all words of length `<= degree_bound`
/// over `k` letters: shorter words first, lexicographic within a length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordIndexer {
    k: usize,
    degree_bound: usize,
    /// `offsets[l]` is the index of the first word of length `l`;
    /// `offsets[degree_bound + 1]` is the total count.
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

impl WordIndexer {
    pub fn new(k: usize, degree_bound: usize) -> Self {
        let mut powers = Vec::with_capacity(degree_bound + 1);
        let mut offsets = Vec::with_capacity(degree_bound + 2);
        let mut pw = 1usize;
        let mut acc = 0usize;
        for _ in 0..=degree_bound {
            powers.push(pw);
            offsets.push(acc);
            acc += pw;
            pw *= k;
        }
        offsets.push(acc);
        WordIndexer {
            k,
            degree_bound,
            offsets,
            powers,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn len(&self) -> usize {
        self.offsets[self.degree_bound + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index range of the words of length `l`.
    pub fn range(&self, l: usize) -> std::ops::Range<usize> {
        self.offsets[l]..self.offsets[l + 1]
    }

    pub fn offset(&self, l: usize) -> usize {
        self.offsets[l]
    }

    /// `k^l`
    pub fn count(&self, l: usize) -> usize {
        self.powers[l]
    }

    pub fn index(&self, w: &Word) -> Option<usize> {
        if w.len() > self.degree_bound || w.letters().iter().any(|&a| a >= self.k) {
            return None;
        }
        let lex = w.letters().iter().fold(0usize, |acc, &a| acc * self.k + a);
        Some(self.offsets[w.len()] + lex)
    }

    pub fn word(&self, index: usize) -> Word {
        let l = (0..=self.degree_bound)
            .find(|&l| index < self.offsets[l + 1])
            .expect("index in range");
        Word::from_lex_index(self.k, l, index - self.offsets[l])
    }

    /// Index of the concatenation of the words with lex positions `u`
    /// (length `lu`) and `v` (length `lv`).
    #[inline]
    pub fn concat_index(&self, u: usize, v: usize, lu: usize, lv: usize) -> usize {
        self.offsets[lu + lv] + u * self.powers[lv] + v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let ix = WordIndexer::new(2, 2);
        assert_eq!(ix.len(), 7);
        let words: Vec<Word> = (0..7).map(|i| ix.word(i)).collect();
        assert_eq!(
            words,
            vec![
                Word::empty(),
                Word::new(vec![0]),
                Word::new(vec![1]),
                Word::new(vec![0, 0]),
                Word::new(vec![0, 1]),
                Word::new(vec![1, 0]),
                Word::new(vec![1, 1]),
            ]
        );
        for (i, w) in words.iter().enumerate() {
            assert_eq!(ix.index(w), Some(i));
        }
        assert_eq!(ix.index(&Word::new(vec![0, 0, 0])), None);
        assert_eq!(ix.index(&Word::new(vec![2])), None);
    }

    #[test]
    fn concat_index_matches_word_concat() {
        let ix = WordIndexer::new(3, 4);
        let u = Word::new(vec![2, 0]);
        let v = Word::new(vec![1]);
        let uu = ix.index(&u).unwrap() - ix.offset(2);
        let vv = ix.index(&v).unwrap() - ix.offset(1);
        assert_eq!(ix.concat_index(uu, vv, 2, 1), ix.index(&u.concat(&v)).unwrap());
    }

    #[test]
    fn parse_forms() {
        let w = Word::new(vec![0, 1, 1]);
        assert_eq!(Word::parse("0,1,1").unwrap(), w);
        assert_eq!(Word::parse("a0,a1,a1").unwrap(), w);
        assert_eq!(Word::parse("a0a1a1").unwrap(), w);
        assert_eq!(Word::parse("[0,1,1]").unwrap(), w);
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
        assert_eq!(Word::parse("").unwrap(), Word::empty());
        assert!(Word::parse("0,x").is_err());
    }
}
