use rustc_hash::FxHashSet;

use super::IndependenceStatement;
use crate::error::{Error, Result};
use crate::relation::{AttributeSet, Schema};

/// Every `{A} ⊥ {B}` over the schema, in canonical order.
pub fn initial_candidates(schema: &Schema) -> Result<Vec<IndependenceStatement>> {
    let n = schema.len();
    if n < 2 {
        return Err(Error::SchemaTooSmall(n));
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.extend(IndependenceStatement::pair(a, b));
        }
    }
    Ok(out)
}

/// Result of extending one level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NextLevel {
    /// Distinct extensions before pruning.
    pub generated: usize,
    /// Extensions whose predecessors all survived, sorted.
    pub candidates: Vec<IndependenceStatement>,
}

/// Grows each statement by one attribute on either side and keeps an
/// extension only if all of its immediate predecessors with nonempty sides
/// are in `valid`.
pub fn extend_level(valid: &[IndependenceStatement], width: usize) -> NextLevel {
    let universe = AttributeSet::full(width);
    let lookup: FxHashSet<IndependenceStatement> = valid.iter().copied().collect();
    let mut seen: FxHashSet<IndependenceStatement> = FxHashSet::default();
    for s in valid {
        seen.extend(s.extensions(&universe));
    }
    let generated = seen.len();
    let mut candidates: Vec<_> = seen
        .into_iter()
        .filter(|c| c.predecessors().all(|p| lookup.contains(&p)))
        .collect();
    candidates.sort_unstable();
    NextLevel {
        generated,
        candidates,
    }
}

/// Survivors of [`extend_level`].
pub fn next_candidates(valid: &[IndependenceStatement], schema: &Schema) -> Vec<IndependenceStatement> {
    extend_level(valid, schema.len()).candidates
}

/// All canonical statements of the given arity over `width` attributes,
/// sorted.
pub fn all_of_arity(width: usize, arity: usize) -> Vec<IndependenceStatement> {
    use itertools::Itertools;
    let mut out = Vec::new();
    if arity < 2 || arity > width {
        return out;
    }
    for combo in (0..width).combinations(arity) {
        let (&head, rest) = combo.split_first().expect("arity >= 2");
        // `head` stays on the left; each proper subset of the others joins it.
        for mask in 0u64..(1u64 << rest.len()) - 1 {
            let mut left = AttributeSet::singleton(head);
            let mut right = AttributeSet::empty();
            for (i, &p) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.insert(p);
                } else {
                    right.insert(p);
                }
            }
            out.extend(IndependenceStatement::new(left, right));
        }
    }
    out.sort_unstable();
    out
}
