//! Subsumption-free statement sets and an axiom-based implication reasoner.

mod saturate;

use std::collections::BTreeSet;

use crate::discovery::IndependenceStatement;

pub use saturate::{
    implies, implies_sides, reduce_redundant, render_trace, saturate, Derivation, DerivationStep, Implication,
    Oriented, Reduction, Rule, SaturationBudget, Saturation,
};

/// True iff `t`'s sides embed into `s`'s sides in some orientation.
pub fn subsumes(s: &IndependenceStatement, t: &IndependenceStatement) -> bool {
    s.subsumes(t)
}

/// A set of statements in which no member subsumes another.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Cover {
    members: BTreeSet<IndependenceStatement>,
}

impl Cover {
    pub fn new() -> Self {
        Cover::default()
    }

    /// Adds `s` unless a member already subsumes it, then removes every
    /// member `s` subsumes. Returns whether `s` was added.
    pub fn insert(&mut self, s: IndependenceStatement) -> bool {
        if self.members.iter().any(|m| m.subsumes(&s)) {
            return false;
        }
        self.members.retain(|m| !s.subsumes(m));
        self.members.insert(s)
    }

    pub fn remove(&mut self, s: &IndependenceStatement) -> bool {
        self.members.remove(s)
    }

    pub fn contains(&self, s: &IndependenceStatement) -> bool {
        self.members.contains(s)
    }

    /// True iff some member subsumes `s`.
    pub fn covers(&self, s: &IndependenceStatement) -> bool {
        self.members.iter().any(|m| m.subsumes(s))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in (arity, left, right) order.
    pub fn iter(&self) -> impl Iterator<Item = &IndependenceStatement> + '_ {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<IndependenceStatement> {
        &self.members
    }

    /// Largest member arity, 0 when empty.
    pub fn max_arity(&self) -> usize {
        self.members.iter().map(|s| s.arity()).max().unwrap_or(0)
    }
}

impl FromIterator<IndependenceStatement> for Cover {
    fn from_iter<I: IntoIterator<Item = IndependenceStatement>>(iter: I) -> Self {
        let mut c = Cover::new();
        for s in iter {
            c.insert(s);
        }
        c
    }
}

impl<'a> IntoIterator for &'a Cover {
    type Item = &'a IndependenceStatement;
    type IntoIter = std::collections::btree_set::Iter<'a, IndependenceStatement>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
