//! Fixed-width bitsets over a ground set `{0, .., n-1}`.

use std::cmp::Ordering;

use crate::error::Error;
use crate::Result;

/// Subset of a fixed ground set, stored as 64-bit words with a cached
/// cardinality.
///
/// Binary operations require both operands to share the same ground size and
/// panic otherwise; a family that mixes ground sets is rejected when it is
/// built rather than silently resized here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    ground: usize,
    card: usize,
    words: Vec<u64>,
}

impl VertexSet {
    /// Empty subset of `{0, .., ground-1}`.
    pub fn empty(ground: usize) -> Self {
        let nwords = ground.div_ceil(64).max(1);
        VertexSet {
            ground,
            card: 0,
            words: vec![0; nwords],
        }
    }

    /// Builds a set from explicit indices, rejecting out-of-range indices
    /// and duplicates.
    pub fn from_indices(ground: usize, indices: &[usize]) -> Result<Self> {
        let mut set = VertexSet::empty(ground);
        for &i in indices {
            if !set.insert(i)? {
                return Err(Error::Domain(format!("duplicate index {i} in block")));
            }
        }
        Ok(set)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn card(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    /// Inserts `index`, returning whether it was newly added.
    pub fn insert(&mut self, index: usize) -> Result<bool> {
        if index >= self.ground {
            return Err(Error::Domain(format!(
                "index {index} outside ground set of size {}",
                self.ground
            )));
        }
        let (w, b) = (index / 64, index % 64);
        if self.words[w] >> b & 1 == 1 {
            return Ok(false);
        }
        self.words[w] |= 1 << b;
        self.card += 1;
        Ok(true)
    }

    /// Removes `index` if present, returning whether it was a member.
    pub fn remove(&mut self, index: usize) -> bool {
        if index >= self.ground {
            return false;
        }
        let (w, b) = (index / 64, index % 64);
        if self.words[w] >> b & 1 == 0 {
            return false;
        }
        self.words[w] &= !(1 << b);
        self.card -= 1;
        true
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.ground && self.words[index / 64] >> (index % 64) & 1 == 1
    }

    /// Number of elements shared with `other`.
    pub fn intersection_size(&self, other: &VertexSet) -> usize {
        self.check_ground(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.check_ground(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Adds every element of `other` to `self`.
    pub fn union_with(&mut self, other: &VertexSet) {
        self.check_ground(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    /// Removes every element of `other` from `self`.
    pub fn subtract(&mut self, other: &VertexSet) {
        self.check_ground(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.recount();
    }

    /// New set holding the elements common to both operands.
    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.check_ground(other);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        let card = words.iter().map(|w| w.count_ones() as usize).sum();
        VertexSet {
            ground: self.ground,
            card,
            words,
        }
    }

    /// Drops every element less than or equal to `index`.
    pub fn retain_above(&mut self, index: usize) {
        let cutoff_word = index / 64;
        for w in self.words.iter_mut().take(cutoff_word) {
            *w = 0;
        }
        if cutoff_word < self.words.len() {
            let bit = index % 64;
            let keep_mask = if bit == 63 { 0 } else { !0u64 << (bit + 1) };
            self.words[cutoff_word] &= keep_mask;
        }
        self.recount();
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
        self.card = 0;
    }

    pub fn clone_from_set(&mut self, other: &VertexSet) {
        self.check_ground(other);
        self.words.copy_from_slice(&other.words);
        self.card = other.card;
    }

    /// Ascending iterator over the member indices.
    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            words: &self.words,
            word_idx: 0,
            current: self.words[0],
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn recount(&mut self) {
        self.card = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn check_ground(&self, other: &VertexSet) {
        assert_eq!(
            self.ground, other.ground,
            "bitset operation on mismatched ground sets"
        );
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    /// Lexicographic order on the ascending element lists, so a family sorts
    /// the way its text encoding would.
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_ground(other);
        let mut shared_below = 0usize;
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff == 0 {
                shared_below += a.count_ones() as usize;
                continue;
            }
            let low = diff & diff.wrapping_neg();
            shared_below += (a & (low - 1)).count_ones() as usize;
            // The sets agree on everything below the lowest differing
            // element d. The one containing d comes first unless the other
            // has already run out of elements.
            let (with_d, without_d) = if a & low != 0 {
                (self, other)
            } else {
                (other, self)
            };
            let without_d_exhausted = without_d.card == shared_below;
            let with_d_first = if without_d_exhausted {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            return if std::ptr::eq(with_d, self) {
                with_d_first
            } else {
                with_d_first.reverse()
            };
        }
        Ordering::Equal
    }
}

/// Ascending index iterator over a bitset.
pub struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let tz = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * 64 + tz)
    }
}
