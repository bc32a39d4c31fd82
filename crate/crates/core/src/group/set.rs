use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::GroupError;

/// A subset of a group of order `n`, stored as an `n`-bit membership vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: usize,
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet {
            n,
            words: vec![0; word_count(n)],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; word_count(n)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        ElementSet { n, words, len: n }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(
        n: usize,
        it: I,
    ) -> Result<Self, GroupError> {
        let mut set = Self::empty(n);
        for i in it {
            if i >= n {
                return Err(GroupError::IndexOutOfRange { index: i, order: n });
            }
            set.insert(i);
        }
        Ok(set)
    }

    /// Builds a set from raw words; bits at or above `n` must be clear.
    pub fn from_words(n: usize, words: Vec<u64>) -> Self {
        assert_eq!(words.len(), word_count(n));
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        let set = ElementSet { n, words, len };
        debug_assert!(set.iter().all(|i| i < n));
        set
    }

    /// Order of the ambient group.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true if `i` was not already present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.n, "index {i} out of range for order {}", self.n);
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        if i >= self.n {
            return false;
        }
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let present = *w & bit != 0;
        *w &= !bit;
        self.len -= present as usize;
        present
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        assert_eq!(self.n, other.n);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        ElementSet::from_words(self.n, words)
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        assert_eq!(self.n, other.n);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        ElementSet::from_words(self.n, words)
    }

    pub fn complement(&self) -> ElementSet {
        ElementSet::full(self.n).difference(self)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }
}

/// Ascending iterator over the members of an [`ElementSet`].
pub struct Iter<'a> {
    words: &'a [u64],
    word_index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_index * 64 + bit);
            }
            self.word_index += 1;
            if self.word_index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_index];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serializes as the sorted index list.
impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len))?;
        for i in self.iter() {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = ElementSet::empty(70);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(69));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_vec(), vec![3, 69]);
        assert!(s.remove(3));
        assert!(!s.contains(3));
        assert_eq!(ElementSet::full(70).len(), 70);
        assert_eq!(ElementSet::full(64).complement().len(), 0);
        assert!(ElementSet::from_indices(5, [5]).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = ElementSet::from_indices(10, [1, 2, 3]).unwrap();
        let b = ElementSet::from_indices(10, [3, 4]).unwrap();
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 2]);
        assert_eq!(a.complement().len(), 7);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_disjoint(&b));
    }
}
