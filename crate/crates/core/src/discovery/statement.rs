use std::cmp::Ordering;
use std::fmt;

use crate::relation::AttributeSet;

/// An unordered pair of disjoint, nonempty attribute sets `{left, right}`.
///
/// The side holding the smallest position is always stored as `left`, so
/// `X ⊥ Y` and `Y ⊥ X` are the same value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndependenceStatement {
    left: AttributeSet,
    right: AttributeSet,
}

impl IndependenceStatement {
    /// `None` when a side is empty or the sides overlap.
    pub fn new(x: AttributeSet, y: AttributeSet) -> Option<Self> {
        if x.is_empty() || y.is_empty() || !x.is_disjoint(&y) {
            return None;
        }
        if x.first() < y.first() {
            Some(IndependenceStatement { left: x, right: y })
        } else {
            Some(IndependenceStatement { left: y, right: x })
        }
    }

    /// `{a} ⊥ {b}`; `None` when `a == b`.
    pub fn pair(a: usize, b: usize) -> Option<Self> {
        Self::new(AttributeSet::singleton(a), AttributeSet::singleton(b))
    }

    pub fn left(&self) -> AttributeSet {
        self.left
    }

    pub fn right(&self) -> AttributeSet {
        self.right
    }

    pub fn attributes(&self) -> AttributeSet {
        self.left.union(&self.right)
    }

    /// Number of distinct attributes, `|left ∪ right|`.
    pub fn arity(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// True iff `other`'s sides embed into ours in either orientation.
    pub fn subsumes(&self, other: &Self) -> bool {
        (other.left.is_subset(&self.left) && other.right.is_subset(&self.right))
            || (other.left.is_subset(&self.right) && other.right.is_subset(&self.left))
    }

    /// Statements obtained by removing one attribute from one side, skipping
    /// those that would leave a side empty.
    pub fn predecessors(&self) -> impl Iterator<Item = IndependenceStatement> + '_ {
        let from_left = self
            .left
            .iter()
            .filter_map(move |a| Self::new(self.left.without(a), self.right));
        let from_right = self
            .right
            .iter()
            .filter_map(move |b| Self::new(self.left, self.right.without(b)));
        from_left.chain(from_right)
    }

    /// Statements obtained by adding one attribute of `universe` outside the
    /// statement to either side.
    pub fn extensions(&self, universe: &AttributeSet) -> impl Iterator<Item = IndependenceStatement> + '_ {
        let free = universe.difference(&self.attributes());
        free.iter().flat_map(move |a| {
            [
                Self::new(self.left.with(a), self.right),
                Self::new(self.left, self.right.with(a)),
            ]
            .into_iter()
            .flatten()
        })
    }

    pub fn map_positions(&self, mapping: &[usize]) -> Self {
        Self::new(self.left.map_positions(mapping), self.right.map_positions(mapping))
            .expect("position mapping must be injective")
    }

    /// Renders as `{a,b} ⊥ {c}` using attribute names.
    pub fn render(&self, names: &[String]) -> String {
        let side = |s: &AttributeSet| {
            let parts: Vec<&str> = s.iter().map(|p| names[p].as_str()).collect();
            format!("{{{}}}", parts.join(","))
        };
        format!("{} ⊥ {}", side(&self.left), side(&self.right))
    }
}

impl Ord for IndependenceStatement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity()
            .cmp(&other.arity())
            .then_with(|| self.left.cmp(&other.left))
            .then_with(|| self.right.cmp(&other.right))
    }
}

impl PartialOrd for IndependenceStatement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndependenceStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊥{}", self.left, self.right)
    }
}

impl fmt::Display for IndependenceStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊥ {}", self.left, self.right)
    }
}
