use chrono::{SecondsFormat, Utc};
use indep::cover::{render_trace, Reduction};
use indep::discovery::{DiscoveryReport, LevelStats, ValidationResult};
use indep::{validate, DiscoveryConfig, IndependenceStatement, Relation};
use serde::Serialize;

use crate::input::InputManifest;

pub const TOOL: &str = "indep";

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Echoed into every report so a run can be repeated.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input: Option<InputManifest>,
    pub config: Option<DiscoveryConfig>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub tool: &'static str,
    pub version: &'static str,
    pub started: String,
    pub finished: String,
}

impl RunManifest {
    pub fn start(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            input: None,
            config: None,
            threads: None,
            seed: None,
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            started: now(),
            finished: String::new(),
        }
    }

    pub fn finish(&mut self) {
        self.finished = now();
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationSummary {
    pub rows: usize,
    pub columns: usize,
    pub attributes: Vec<String>,
    pub missing_cells: usize,
}

impl RelationSummary {
    pub fn of(r: &Relation) -> Self {
        RelationSummary {
            rows: r.row_count(),
            columns: r.width(),
            attributes: r.schema().names().to_vec(),
            missing_cells: r.na_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverEntry {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub arity: usize,
    /// Six-digit decimal rendering of `fraction`.
    pub ratio: String,
    /// `|r(XY)| / (|r(X)|·|r(Y)|)`, unreduced.
    pub fraction: String,
    pub vacuous: bool,
}

impl CoverEntry {
    pub fn new(names: &[String], s: &IndependenceStatement, v: &ValidationResult) -> Self {
        let side = |set: indep::AttributeSet| set.iter().map(|p| names[p].clone()).collect();
        CoverEntry {
            left: side(s.left()),
            right: side(s.right()),
            arity: s.arity(),
            ratio: v.ratio.to_decimal(),
            fraction: v.ratio.to_string(),
            vacuous: v.vacuous,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RemovedEntry {
    pub statement: CoverEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionSummary {
    /// Size of the cover before reduction.
    pub quasi_cover_size: usize,
    pub removed: Vec<RemovedEntry>,
    /// Some implication check ran out of budget, so members may remain that
    /// are in fact redundant.
    pub incomplete: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub manifest: RunManifest,
    pub relation: RelationSummary,
    pub constant_columns: Vec<String>,
    pub cover_size: usize,
    pub max_arity: usize,
    pub cover: Vec<CoverEntry>,
    pub levels: Vec<LevelStats>,
    pub degenerate: bool,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
}

/// The entry for `s`, revalidating if the run did not record it.
pub fn entry(report: &DiscoveryReport, r: &Relation, s: &IndependenceStatement) -> CoverEntry {
    let v = match report.result(s) {
        Some(v) => *v,
        None => validate(r, s, &report.config),
    };
    CoverEntry::new(&report.names, s, &v)
}

pub fn cover_entries<'a>(
    report: &DiscoveryReport,
    r: &Relation,
    members: impl IntoIterator<Item = &'a IndependenceStatement>,
) -> Vec<CoverEntry> {
    members.into_iter().map(|s| entry(report, r, s)).collect()
}

impl ReportDocument {
    pub fn new(manifest: RunManifest, r: &Relation, report: &DiscoveryReport, reduction: Option<(&Reduction, bool)>) -> Self {
        let (members, summary) = match reduction {
            None => (report.cover.members().iter().copied().collect::<Vec<_>>(), None),
            Some((red, trace)) => {
                let removed = red
                    .removed
                    .iter()
                    .map(|(s, d)| RemovedEntry {
                        statement: entry(report, r, s),
                        trace: trace.then(|| render_trace(d, &report.names)),
                    })
                    .collect();
                let summary = ReductionSummary {
                    quasi_cover_size: report.cover.len(),
                    removed,
                    incomplete: red.incomplete,
                };
                (red.cover.members().iter().copied().collect(), Some(summary))
            }
        };
        ReportDocument {
            manifest,
            relation: RelationSummary::of(r),
            constant_columns: report.constant_column_names(),
            cover_size: members.len(),
            max_arity: members.iter().map(IndependenceStatement::arity).max().unwrap_or(0),
            cover: cover_entries(report, r, &members),
            levels: report.levels.clone(),
            degenerate: report.degenerate,
            warnings: report.warnings.clone(),
            reduction: summary,
        }
    }
}

/// Cover entries as CSV: sides are `;`-joined attribute names.
pub fn write_cover_csv(out: impl std::io::Write, entries: &[CoverEntry]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["left", "right", "arity", "ratio", "fraction", "vacuous"])?;
    for e in entries {
        w.write_record([
            e.left.join(";"),
            e.right.join(";"),
            e.arity.to_string(),
            e.ratio.clone(),
            e.fraction.clone(),
            e.vacuous.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
