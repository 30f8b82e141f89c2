//! Fixed-width bit vectors over the object and attribute universes.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::marker::PhantomData;

const WORD_BITS: usize = 64;

/// Marker for sets of attribute indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attr {}

/// Marker for sets of object indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Obj {}

/// A set of indices `0..width` packed into 64-bit words.
///
/// The width is fixed at construction; every set operation between two
/// sets assumes equal widths. Bits beyond the width are kept clear so that
/// equality, hashing and ordering can work on whole words.
///
/// Ordering compares width first and then treats the set as a binary
/// number in which index `i` carries weight `2^i`.
pub struct BitSet<K> {
    words: Vec<u64>,
    width: usize,
    _kind: PhantomData<K>,
}

/// Intent-side subset of the attribute universe.
pub type AttrSet = BitSet<Attr>;
/// Extent-side subset of the object universe.
pub type ObjSet = BitSet<Obj>;

#[inline]
fn word_count(width: usize) -> usize {
    width.div_ceil(WORD_BITS)
}

impl<K> BitSet<K> {
    pub fn empty(width: usize) -> Self {
        BitSet {
            words: vec![0; word_count(width)],
            width,
            _kind: PhantomData,
        }
    }

    pub fn full(width: usize) -> Self {
        let mut set = BitSet {
            words: vec![!0; word_count(width)],
            width,
            _kind: PhantomData,
        };
        set.clear_tail();
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut set = Self::empty(width);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Size of the universe, not the number of members.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Overwrites `self` with `other` without reallocating.
    pub fn copy_from(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        self.words.copy_from_slice(&other.words);
    }

    fn clear_tail(&mut self) {
        let rem = self.width % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.words[i / WORD_BITS] & (1 << (i % WORD_BITS)) != 0
    }

    /// Number of members.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.width
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words.iter().zip(&other.words).any(|(&a, &b)| a & b != 0)
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut out = BitSet {
            words: self.words.iter().map(|w| !w).collect(),
            width: self.width,
            _kind: PhantomData,
        };
        out.clear_tail();
        out
    }

    /// True when `self` and `other` agree on every index below `bound`.
    pub fn agrees_below(&self, other: &Self, bound: usize) -> bool {
        let full = bound / WORD_BITS;
        if self.words[..full] != other.words[..full] {
            return false;
        }
        let rem = bound % WORD_BITS;
        if rem == 0 {
            return true;
        }
        let mask = (1u64 << rem) - 1;
        (self.words[full] ^ other.words[full]) & mask == 0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

// Manual impls: derives would demand the marker type itself be Clone/Eq.
impl<K> Clone for BitSet<K> {
    fn clone(&self) -> Self {
        BitSet {
            words: self.words.clone(),
            width: self.width,
            _kind: PhantomData,
        }
    }
}

impl<K> PartialEq for BitSet<K> {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.words == other.words
    }
}

impl<K> Eq for BitSet<K> {}

impl<K> Hash for BitSet<K> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.width.hash(state);
        self.words.hash(state);
    }
}

impl<K> PartialOrd for BitSet<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<K> Ord for BitSet<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl<K> fmt::Debug for BitSet<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over set members, see [`BitSet::iter`].
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * WORD_BITS + bit)
    }
}

impl<'a, K> IntoIterator for &'a BitSet<K> {
    type Item = usize;
    type IntoIter = Ones<'a>;

    fn into_iter(self) -> Ones<'a> {
        self.iter()
    }
}
