//! Level-wise discovery of independence statements.
//!
//! The search starts from all pairs of attributes, validates every candidate
//! of one arity, keeps the valid ones in a subsumption-free cover, and grows
//! the next level only from statements whose predecessors all held.

mod candidates;
mod statement;
mod validate;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

pub use candidates::{all_of_arity, extend_level, initial_candidates, next_candidates, NextLevel};
pub use statement::IndependenceStatement;
pub use validate::{meets_threshold, Counts, Ratio, Threshold, ValidationResult};

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::relation::{AttributeSet, NaSemantics, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscoveryConfig {
    pub epsilon: Threshold,
    pub na: NaSemantics,
    pub max_arity: Option<usize>,
    pub keep_constant_columns: bool,
    /// Filter each level by its predecessors. Turning this off validates
    /// every statement of every arity, which is exponential but complete
    /// for approximate thresholds.
    pub prune: bool,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            epsilon: Threshold::ONE,
            na: NaSemantics::Value,
            max_arity: None,
            keep_constant_columns: false,
            prune: true,
        }
    }
}

impl DiscoveryConfig {
    pub fn with_epsilon(mut self, epsilon: Threshold) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_na(mut self, na: NaSemantics) -> Self {
        self.na = na;
        self
    }
}

/// Validates one statement against `r` under `config`.
pub fn validate(r: &Relation, s: &IndependenceStatement, config: &DiscoveryConfig) -> ValidationResult {
    let rows;
    let subset = match config.na {
        NaSemantics::Value => None,
        NaSemantics::Ignore => {
            rows = r.rows_non_na(&s.attributes());
            Some(rows.as_slice())
        }
    };
    let effective = subset.map_or(r.row_count(), <[usize]>::len) as u64;
    let counts = if effective == 0 {
        Counts {
            left: 0,
            right: 0,
            joint: 0,
            rows: 0,
        }
    } else {
        Counts {
            left: r.distinct_count_unchecked(&s.left(), subset),
            right: r.distinct_count_unchecked(&s.right(), subset),
            joint: r.distinct_count_unchecked(&s.attributes(), subset),
            rows: effective,
        }
    };
    ValidationResult::from_counts(counts, config.epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub arity: usize,
    pub candidates_generated: usize,
    pub candidates_validated: usize,
    pub valid_count: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct DiscoveryReport {
    /// Attribute names of the input relation; all positions below refer to it.
    pub names: Vec<String>,
    pub cover: Cover,
    /// Every statement found valid during the run, with its validation.
    pub valid: BTreeMap<IndependenceStatement, ValidationResult>,
    pub constant_columns: AttributeSet,
    pub levels: Vec<LevelStats>,
    pub config: DiscoveryConfig,
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

impl DiscoveryReport {
    pub fn constant_column_names(&self) -> Vec<String> {
        self.constant_columns.iter().map(|p| self.names[p].clone()).collect()
    }

    pub fn result(&self, s: &IndependenceStatement) -> Option<&ValidationResult> {
        self.valid.get(s)
    }

    pub fn max_arity(&self) -> usize {
        self.cover.max_arity()
    }

    pub fn candidates_validated(&self) -> usize {
        self.levels.iter().map(|l| l.candidates_validated).sum()
    }

    pub fn render(&self, s: &IndependenceStatement) -> String {
        s.render(&self.names)
    }
}

pub const DEGENERATE_WARNING: &str = "degenerate: fewer than two distinct rows";

/// Runs the level-wise search over `r`.
pub fn discover(r: &Relation, config: &DiscoveryConfig) -> DiscoveryReport {
    let mut report = DiscoveryReport {
        names: r.schema().names().to_vec(),
        cover: Cover::new(),
        valid: BTreeMap::new(),
        constant_columns: AttributeSet::empty(),
        levels: Vec::new(),
        config: *config,
        degenerate: false,
        warnings: Vec::new(),
    };

    if r.width() == 0 || r.row_count() == 0 || r.distinct_count_unchecked(&r.schema().all(), None) < 2 {
        report.degenerate = true;
        report.warnings.push(DEGENERATE_WARNING.to_string());
        return report;
    }

    let mut keep = r.schema().all();
    if !config.keep_constant_columns {
        let constant = r.constant_columns(config.na);
        for p in constant.iter() {
            if r.column(p).dictionary().is_empty() {
                report
                    .warnings
                    .push(format!("column {} has no values and was dropped", r.schema().name(p)));
            }
        }
        keep = keep.difference(&constant);
        report.constant_columns = constant;
        if keep.is_empty() {
            report.warnings.push("every column is constant".to_string());
            return report;
        }
    }
    let working = r.project(&keep).expect("kept columns lie within the schema");
    let positions: Vec<usize> = keep.iter().collect();
    let width = working.width();
    if width < 2 {
        report
            .warnings
            .push("fewer than two non-constant columns; nothing to discover".to_string());
        return report;
    }

    let cap = config.max_arity.unwrap_or(usize::MAX).min(width);
    let mut engine = Engine::new(&working, config);
    let mut arity = 2;
    let mut candidates = initial_candidates(working.schema()).expect("width checked above");
    let mut generated = candidates.len();

    while arity <= cap {
        let start = Instant::now();
        let results = engine.validate_all(&candidates);
        let mut level_valid = Vec::new();
        for (s, v) in candidates.iter().zip(results) {
            if v.valid {
                let mapped = s.map_positions(&positions);
                report.cover.insert(mapped);
                report.valid.insert(mapped, v);
                level_valid.push(*s);
            }
        }
        log::debug!(
            "arity {arity}: {} candidates, {} valid",
            candidates.len(),
            level_valid.len()
        );

        let mut stats = LevelStats {
            arity,
            candidates_generated: generated,
            candidates_validated: candidates.len(),
            valid_count: level_valid.len(),
            elapsed_ms: 0.0,
        };
        if arity == cap {
            stats.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            report.levels.push(stats);
            break;
        }
        let next = if config.prune {
            extend_level(&level_valid, width)
        } else {
            let all = all_of_arity(width, arity + 1);
            NextLevel {
                generated: all.len(),
                candidates: all,
            }
        };
        stats.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        report.levels.push(stats);
        if next.generated == 0 {
            break;
        }
        engine.retain_for(arity + 1);
        candidates = next.candidates;
        generated = next.generated;
        arity += 1;
    }
    report
}

/// Validates batches of statements in parallel, reusing distinct counts
/// across statements under value semantics.
struct Engine<'a> {
    r: &'a Relation,
    config: &'a DiscoveryConfig,
    counts: FxHashMap<AttributeSet, u64>,
}

impl<'a> Engine<'a> {
    fn new(r: &'a Relation, config: &'a DiscoveryConfig) -> Self {
        Engine {
            r,
            config,
            counts: FxHashMap::default(),
        }
    }

    /// Drops cached counts too small to serve statements of `arity`.
    fn retain_for(&mut self, arity: usize) {
        self.counts.retain(|set, _| set.len() + 1 >= arity);
    }

    fn validate_all(&mut self, statements: &[IndependenceStatement]) -> Vec<ValidationResult> {
        match self.config.na {
            NaSemantics::Value => self.validate_value(statements),
            NaSemantics::Ignore => self.validate_ignore(statements),
        }
    }

    fn validate_value(&mut self, statements: &[IndependenceStatement]) -> Vec<ValidationResult> {
        let mut missing: FxHashSet<AttributeSet> = FxHashSet::default();
        for s in statements {
            for set in [s.left(), s.right(), s.attributes()] {
                if !self.counts.contains_key(&set) {
                    missing.insert(set);
                }
            }
        }
        let r = self.r;
        let fresh: Vec<(AttributeSet, u64)> = missing
            .into_par_iter()
            .map(|set| (set, r.distinct_count_unchecked(&set, None)))
            .collect();
        self.counts.extend(fresh);

        let rows = r.row_count() as u64;
        statements
            .iter()
            .map(|s| {
                let counts = Counts {
                    left: self.counts[&s.left()],
                    right: self.counts[&s.right()],
                    joint: self.counts[&s.attributes()],
                    rows,
                };
                ValidationResult::from_counts(counts, self.config.epsilon)
            })
            .collect()
    }

    fn validate_ignore(&self, statements: &[IndependenceStatement]) -> Vec<ValidationResult> {
        // Statements over the same attributes share one effective row set.
        let mut groups: BTreeMap<AttributeSet, Vec<usize>> = BTreeMap::new();
        for (i, s) in statements.iter().enumerate() {
            groups.entry(s.attributes()).or_default().push(i);
        }
        let groups: Vec<_> = groups.into_iter().collect();
        let (r, config) = (self.r, self.config);
        let solved: Vec<Vec<(usize, ValidationResult)>> = groups
            .par_iter()
            .map(|(_, members)| {
                members
                    .iter()
                    .map(|&i| (i, validate(r, &statements[i], config)))
                    .collect()
            })
            .collect();
        let mut out = vec![None; statements.len()];
        for (i, v) in solved.into_iter().flatten() {
            out[i] = Some(v);
        }
        out.into_iter().map(|v| v.expect("every statement grouped")).collect()
    }
}

/// One input to [`level_stats_run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slice {
    /// Restrict to these columns.
    Columns(AttributeSet),
    /// Keep the first `n` rows.
    RowPrefix(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub columns: usize,
    pub rows: usize,
    pub runtime_ms: f64,
    pub valid_count: usize,
    pub candidate_count: usize,
    pub max_arity: usize,
}

/// Runs discovery once per slice and tabulates size, runtime and counts.
pub fn level_stats_run(r: &Relation, config: &DiscoveryConfig, slices: &[Slice]) -> Result<Vec<StatsRow>> {
    let mut rows = Vec::with_capacity(slices.len());
    for slice in slices {
        let sub = match slice {
            Slice::Columns(set) => r.project(set)?,
            Slice::RowPrefix(n) => {
                if *n > r.row_count() {
                    return Err(Error::RowOutOfRange {
                        row: *n,
                        rows: r.row_count(),
                    });
                }
                let prefix: Vec<usize> = (0..*n).collect();
                r.select_rows(&prefix)?
            }
        };
        let start = Instant::now();
        let report = discover(&sub, config);
        rows.push(StatsRow {
            columns: sub.width(),
            rows: sub.row_count(),
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            valid_count: report.cover.len(),
            candidate_count: report.candidates_validated(),
            max_arity: report.max_arity(),
        });
    }
    Ok(rows)
}
