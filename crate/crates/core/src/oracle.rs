//! Brute-force reference implementations for testing.
//!
//! Nothing here shares code paths with the engine: projections are compared
//! as vectors of original strings, statements are enumerated by assigning
//! every attribute to one of three sides, and the definition of
//! independence is evaluated as written.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;

use crate::discovery::{DiscoveryConfig, IndependenceStatement};
use crate::error::{Error, Result};
use crate::hardness::{AntimonotoneDnf, Graph};
use crate::relation::{AttributeSet, NaSemantics, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_attributes: usize,
    pub max_rows: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_attributes: 8,
            max_rows: 64,
        }
    }
}

impl OracleBudget {
    fn check(&self, attributes: usize, rows: usize) -> Result<()> {
        if attributes > self.max_attributes {
            return Err(Error::BudgetExceeded(format!(
                "{attributes} attributes, limit {}",
                self.max_attributes
            )));
        }
        if rows > self.max_rows {
            return Err(Error::BudgetExceeded(format!("{rows} rows, limit {}", self.max_rows)));
        }
        Ok(())
    }
}

type Projection<'a> = Vec<Option<&'a str>>;

fn project<'a>(r: &'a Relation, row: usize, x: &AttributeSet) -> Projection<'a> {
    x.iter().map(|p| r.value(row, p)).collect()
}

fn effective_rows(r: &Relation, attrs: &AttributeSet, na: NaSemantics) -> Vec<usize> {
    (0..r.row_count())
        .filter(|&row| na == NaSemantics::Value || attrs.iter().all(|p| r.value(row, p).is_some()))
        .collect()
}

/// Distinct projections onto `x` over `rows`, as a set of string vectors.
pub fn distinct_strings(r: &Relation, x: &AttributeSet, rows: &[usize]) -> usize {
    rows.iter().map(|&row| project(r, row, x)).collect::<HashSet<_>>().len()
}

/// For all effective `t₁, t₂` some effective `t` agrees with `t₁` on `x`
/// and with `t₂` on `y`. The sides may overlap.
///
/// Rows are first reduced to their distinct `(t(x), t(y))` pairs; the
/// existential is then a set lookup.
pub fn satisfies_definition(r: &Relation, x: &AttributeSet, y: &AttributeSet, na: NaSemantics) -> bool {
    let rows = effective_rows(r, &x.union(y), na);
    let witnesses: HashSet<(Projection, Projection)> =
        rows.iter().map(|&t| (project(r, t, x), project(r, t, y))).collect();
    let firsts: Vec<&Projection> = witnesses.iter().map(|(tx, _)| tx).unique().collect();
    let seconds: Vec<&Projection> = witnesses.iter().map(|(_, ty)| ty).unique().collect();
    firsts.iter().all(|t1x| {
        seconds
            .iter()
            .all(|t2y| witnesses.contains(&((*t1x).clone(), (*t2y).clone())))
    })
}

fn constant_by_strings(r: &Relation, p: usize, na: NaSemantics) -> bool {
    let values: HashSet<Option<&str>> = (0..r.row_count()).map(|row| r.value(row, p)).collect();
    match na {
        NaSemantics::Value => values.len() == 1,
        NaSemantics::Ignore => values.iter().filter(|v| v.is_some()).count() <= 1,
    }
}

/// Every canonical statement that holds under `config`, found by trying
/// all `3^n` side assignments. Statements touching a constant column are
/// skipped unless `config.keep_constant_columns` is set. No pruning.
pub fn enumerate_valid_iss(
    r: &Relation,
    config: &DiscoveryConfig,
    budget: OracleBudget,
) -> Result<BTreeSet<IndependenceStatement>> {
    let n = r.width();
    budget.check(n, r.row_count())?;
    let usable: Vec<usize> = (0..n)
        .filter(|&p| config.keep_constant_columns || !constant_by_strings(r, p, config.na))
        .collect();
    let (num, den) = (config.epsilon.numerator() as u128, config.epsilon.denominator() as u128);
    let mut out = BTreeSet::new();
    for assignment in 0..3usize.pow(usable.len() as u32) {
        let (mut x, mut y) = (AttributeSet::empty(), AttributeSet::empty());
        let mut a = assignment;
        for &p in &usable {
            match a % 3 {
                1 => x.insert(p),
                2 => y.insert(p),
                _ => {}
            }
            a /= 3;
        }
        let Some(s) = IndependenceStatement::new(x, y) else {
            continue;
        };
        if s.left() != x {
            continue; // the mirrored assignment yields the same statement
        }
        let rows = effective_rows(r, &s.attributes(), config.na);
        if rows.is_empty() {
            out.insert(s);
            continue;
        }
        let cx = distinct_strings(r, &x, &rows) as u128;
        let cy = distinct_strings(r, &y, &rows) as u128;
        let cxy = distinct_strings(r, &s.attributes(), &rows) as u128;
        if cxy * den >= num * cx * cy {
            out.insert(s);
        }
    }
    Ok(out)
}

/// Members not strictly subsumed by another member.
pub fn maximal_under_subsumption(set: &BTreeSet<IndependenceStatement>) -> BTreeSet<IndependenceStatement> {
    let embeds = |big: &IndependenceStatement, small: &IndependenceStatement| {
        let (bl, br, sl, sr) = (big.left(), big.right(), small.left(), small.right());
        (sl.is_subset(&bl) && sr.is_subset(&br)) || (sl.is_subset(&br) && sr.is_subset(&bl))
    };
    set.iter()
        .filter(|s| !set.iter().any(|t| t != *s && embeds(t, s)))
        .copied()
        .collect()
}

/// The part of `valid` a predecessor-filtered level-wise search visits:
/// valid pairs, then level by level every valid statement all of whose
/// predecessors were visited. Equals `valid` when validity is downward
/// closed.
pub fn reachable_by_levels(valid: &BTreeSet<IndependenceStatement>) -> BTreeSet<IndependenceStatement> {
    let mut by_arity: Vec<Vec<IndependenceStatement>> = Vec::new();
    for s in valid {
        if by_arity.len() <= s.arity() {
            by_arity.resize(s.arity() + 1, Vec::new());
        }
        by_arity[s.arity()].push(*s);
    }
    let mut out = BTreeSet::new();
    for (arity, level) in by_arity.into_iter().enumerate() {
        for s in level {
            if arity == 2 || s.predecessors().all(|p| out.contains(&p)) {
                out.insert(s);
            }
        }
    }
    out
}

/// A largest biclique with edge-free sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclique {
    /// `|V₁| + |V₂|`, 0 when the graph has no edge.
    pub size: usize,
    pub left: AttributeSet,
    pub right: AttributeSet,
}

/// Exhaustive search over all `3^n` assignments of nodes to `V₁`, `V₂` or
/// neither.
pub fn max_biclique(g: &Graph, budget: OracleBudget) -> Result<Biclique> {
    let n = g.node_count();
    budget.check(n, 0)?;
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut best = Biclique {
        size: 0,
        left: AttributeSet::empty(),
        right: AttributeSet::empty(),
    };
    for assignment in 0..3usize.pow(n as u32) {
        let mut side = vec![0u8; n];
        let mut a = assignment;
        for s in side.iter_mut() {
            *s = (a % 3) as u8;
            a /= 3;
        }
        let v1: Vec<usize> = (0..n).filter(|&i| side[i] == 1).collect();
        let v2: Vec<usize> = (0..n).filter(|&i| side[i] == 2).collect();
        if v1.is_empty() || v2.is_empty() || v1.len() + v2.len() <= best.size {
            continue;
        }
        let ok = v1.iter().all(|&a| v2.iter().all(|&b| adj[a][b]))
            && v1.iter().tuple_combinations().all(|(&a, &b)| !adj[a][b])
            && v2.iter().tuple_combinations().all(|(&a, &b)| !adj[a][b]);
        if ok {
            best = Biclique {
                size: v1.len() + v2.len(),
                left: v1.into_iter().collect(),
                right: v2.into_iter().collect(),
            };
        }
    }
    Ok(best)
}

/// Whether some assignment with exactly `k` true variables satisfies every
/// conjunct.
pub fn weighted_sat(phi: &[AntimonotoneDnf], k: usize) -> bool {
    let n = phi.first().map_or(0, |d| d.variables().len());
    if k > n {
        return false;
    }
    (0..n).combinations(k).any(|trues| {
        phi.iter().all(|dnf| {
            dnf.clauses()
                .iter()
                .any(|clause| clause.iter().all(|v| !trues.contains(&v)))
        })
    })
}
