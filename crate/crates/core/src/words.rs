//! Graded-lexicographic enumeration of all words up to a length bound.
//!
//! Shorter words come first and words of equal length are ordered
//! lexicographically by symbol index, so for `d = 2` the order is
//! `ε, a, b, aa, ab, ba, bb, aaa, ...`. The same order indexes Hankel rows and
//! columns and the Fock-space basis.

use std::ops::Range;

use crate::error::{invalid, Result};
use crate::wfa::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordIndex {
    alphabet_size: usize,
    max_length: usize,
    // offsets[k] = number of words of length < k, for k = 0..=max_length + 1
    offsets: Vec<usize>,
}

impl WordIndex {
    pub fn new(alphabet_size: usize, max_length: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return invalid("alphabet size must be positive");
        }
        let mut offsets = Vec::with_capacity(max_length + 2);
        offsets.push(0usize);
        let mut layer = 1usize;
        for _ in 0..=max_length {
            let last = *offsets.last().unwrap();
            let next = last.checked_add(layer);
            match next {
                Some(v) => offsets.push(v),
                None => return invalid("word index size overflows usize"),
            }
            layer = match layer.checked_mul(alphabet_size) {
                Some(v) => v,
                None => usize::MAX,
            };
        }
        Ok(WordIndex {
            alphabet_size,
            max_length,
            offsets,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    /// Number of indexed words, `sum_{k <= L} d^k`.
    pub fn len(&self) -> usize {
        self.offsets[self.max_length + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index range occupied by words of exactly `length` symbols.
    pub fn layer(&self, length: usize) -> Range<usize> {
        assert!(length <= self.max_length, "length {length} beyond bound");
        self.offsets[length]..self.offsets[length + 1]
    }

    /// Index range of words with length `<= length`.
    pub fn up_to(&self, length: usize) -> Range<usize> {
        0..self.offsets[length.min(self.max_length) + 1]
    }

    /// Index of a word, or `None` if it is too long or has a bad symbol.
    pub fn index_of(&self, symbols: &[usize]) -> Option<usize> {
        let len = symbols.len();
        if len > self.max_length {
            return None;
        }
        let mut rank = 0usize;
        for &s in symbols {
            if s >= self.alphabet_size {
                return None;
            }
            rank = rank * self.alphabet_size + s;
        }
        Some(self.offsets[len] + rank)
    }

    pub fn index(&self, word: &Word) -> Option<usize> {
        self.index_of(word.symbols())
    }

    /// Length of the word at `index`.
    pub fn length_of(&self, index: usize) -> usize {
        assert!(index < self.len(), "index {index} out of range");
        // offsets is sorted; find the layer containing index
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    pub fn symbols(&self, index: usize) -> Vec<usize> {
        let len = self.length_of(index);
        let mut rank = index - self.offsets[len];
        let mut out = vec![0usize; len];
        for slot in out.iter_mut().rev() {
            *slot = rank % self.alphabet_size;
            rank /= self.alphabet_size;
        }
        out
    }

    pub fn word(&self, index: usize) -> Word {
        Word::new(self.symbols(index))
    }

    /// All words in index order.
    pub fn words(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |i| self.symbols(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(WordIndex::new(2, 3).unwrap().len(), 15);
        assert_eq!(WordIndex::new(1, 4).unwrap().len(), 5);
        assert_eq!(WordIndex::new(3, 0).unwrap().len(), 1);
        assert_eq!(WordIndex::new(3, 2).unwrap().len(), 13);
    }

    #[test]
    fn graded_lex_order_two_letters() {
        let idx = WordIndex::new(2, 2).unwrap();
        let words: Vec<String> = (0..idx.len()).map(|i| idx.word(i).to_string()).collect();
        assert_eq!(words, ["ε", "a", "b", "aa", "ab", "ba", "bb"]);
        assert_eq!(idx.index_of(&[]), Some(0));
    }

    #[test]
    fn round_trip_exhaustive() {
        for d in 1..=3 {
            for l in 0..=6 {
                let idx = WordIndex::new(d, l).unwrap();
                for i in 0..idx.len() {
                    let w = idx.symbols(i);
                    assert_eq!(idx.index_of(&w), Some(i));
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let idx = WordIndex::new(2, 2).unwrap();
        assert_eq!(idx.index_of(&[0, 0, 0]), None);
        assert_eq!(idx.index_of(&[2]), None);
        assert!(WordIndex::new(0, 2).is_err());
    }

    #[test]
    fn layers() {
        let idx = WordIndex::new(3, 3).unwrap();
        assert_eq!(idx.layer(0), 0..1);
        assert_eq!(idx.layer(1), 1..4);
        assert_eq!(idx.layer(2), 4..13);
        assert_eq!(idx.up_to(1), 0..4);
        assert_eq!(idx.length_of(12), 2);
        assert_eq!(idx.length_of(13), 3);
    }
}
