use std::cmp::Ordering;
use std::fmt;

const WORDS: usize = 4;

/// Largest schema width an [`AttributeSet`] can address.
pub const MAX_ATTRIBUTES: usize = WORDS * 64;

/// A set of schema positions, stored as a fixed-width bit vector.
///
/// Ordering is lexicographic over the ascending position lists, so
/// `{0} < {0,1} < {0,2} < {1}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AttributeSet {
    bits: [u64; WORDS],
}

impl AttributeSet {
    pub const fn empty() -> Self {
        AttributeSet { bits: [0; WORDS] }
    }

    /// Panics if `position >= MAX_ATTRIBUTES`.
    pub fn singleton(position: usize) -> Self {
        let mut s = Self::empty();
        s.insert(position);
        s
    }

    /// The set `{0, .., width - 1}`.
    pub fn full(width: usize) -> Self {
        assert!(width <= MAX_ATTRIBUTES, "width {width} exceeds {MAX_ATTRIBUTES}");
        let mut s = Self::empty();
        for (w, word) in s.bits.iter_mut().enumerate() {
            let lo = w * 64;
            if width >= lo + 64 {
                *word = u64::MAX;
            } else if width > lo {
                *word = (1u64 << (width - lo)) - 1;
            }
        }
        s
    }

    pub fn insert(&mut self, position: usize) {
        assert!(position < MAX_ATTRIBUTES, "position {position} exceeds {MAX_ATTRIBUTES}");
        self.bits[position / 64] |= 1 << (position % 64);
    }

    pub fn remove(&mut self, position: usize) {
        if position < MAX_ATTRIBUTES {
            self.bits[position / 64] &= !(1 << (position % 64));
        }
    }

    pub fn with(mut self, position: usize) -> Self {
        self.insert(position);
        self
    }

    pub fn without(mut self, position: usize) -> Self {
        self.remove(position);
        self
    }

    pub fn contains(&self, position: usize) -> bool {
        position < MAX_ATTRIBUTES && self.bits[position / 64] & (1 << (position % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits;
        for (b, o) in bits.iter_mut().zip(other.bits) {
            *b |= o;
        }
        AttributeSet { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits;
        for (b, o) in bits.iter_mut().zip(other.bits) {
            *b &= o;
        }
        AttributeSet { bits }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.bits;
        for (b, o) in bits.iter_mut().zip(other.bits) {
            *b &= !o;
        }
        AttributeSet { bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.iter().zip(other.bits).all(|(a, b)| a & b == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Largest member, if any.
    pub fn last(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Positions {
        Positions {
            bits: self.bits,
            word: 0,
        }
    }

    /// Renumbers positions through `mapping` (position `p` becomes `mapping[p]`).
    pub fn map_positions(&self, mapping: &[usize]) -> Self {
        self.iter().map(|p| mapping[p]).collect()
    }

    /// All subsets, including the empty set and `self`.
    ///
    /// Only sensible for small sets; the count is `2^len`.
    pub fn subsets(&self) -> impl Iterator<Item = AttributeSet> {
        let members: Vec<usize> = self.iter().collect();
        assert!(members.len() < 64, "too many members to enumerate subsets");
        (0u64..(1u64 << members.len())).map(move |mask| {
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect()
        })
    }
}

pub struct Positions {
    bits: [u64; WORDS],
    word: usize,
}

impl Iterator for Positions {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.bits[self.word];
            if w != 0 {
                let tz = w.trailing_zeros() as usize;
                self.bits[self.word] &= w - 1;
                return Some(self.word * 64 + tz);
            }
            self.word += 1;
        }
        None
    }
}

impl FromIterator<usize> for AttributeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = AttributeSet::empty();
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl IntoIterator for &AttributeSet {
    type Item = usize;
    type IntoIter = Positions;

    fn into_iter(self) -> Positions {
        self.iter()
    }
}

impl Ord for AttributeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for AttributeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
