use std::path::Path;

use anyhow::{bail, Result};
use clap::Args;
use indep::discovery::{level_stats_run, Slice};
use indep::{discover, AttributeSet, Relation, Threshold};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::input::{output, write_json, Format, InputArgs, SearchArgs};
use crate::report::RunManifest;
use crate::Outcome;

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Curve {
    /// One row per arity level of a single run.
    #[arg(long)]
    pub arity_curve: bool,
    /// Column subsets separated by `;`, each a comma list of attribute
    /// names, e.g. `a,b;a,b,c`. `random` grows a seeded random column order
    /// one column at a time from two columns.
    #[arg(long)]
    pub column_curve: Option<String>,
    /// Prefixes of a seeded random row order, growing by this many rows.
    #[arg(long)]
    pub row_curve: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct Point {
    x: usize,
    columns: usize,
    rows: usize,
    runtime_ms: f64,
    valid_count: usize,
    candidate_count: usize,
    max_arity: usize,
}

#[derive(Debug, Serialize)]
struct BenchDocument {
    manifest: RunManifest,
    axis: &'static str,
    points: Vec<Point>,
}

fn column_subsets(r: &Relation, spec: &str, rng: &mut ChaCha8Rng) -> Result<Vec<AttributeSet>> {
    if spec.trim() == "random" {
        let mut order: Vec<usize> = (0..r.width()).collect();
        order.shuffle(rng);
        return Ok((2..=r.width()).map(|k| order[..k].iter().copied().collect()).collect());
    }
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let names: Vec<&str> = s.split(',').map(str::trim).collect();
            Ok(r.schema().attribute_set(&names)?)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    input: &InputArgs,
    search: &SearchArgs,
    curve: &Curve,
    epsilon: Threshold,
    seed: u64,
    format: Format,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<Outcome> {
    search.check()?;
    let r = input.load()?;
    let config = search.config(epsilon);
    let mut manifest = RunManifest::start("bench");
    manifest.input = Some(input.manifest());
    manifest.config = Some(config);
    manifest.threads = threads;
    manifest.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degenerate = r.width() == 0 || r.row_count() == 0 || r.distinct_count(&r.schema().all(), None)? < 2;

    let (axis, points) = if curve.arity_curve {
        let report = discover(&r, &config);
        let columns = r.width() - report.constant_columns.len();
        let mut top = 0;
        let points = report
            .levels
            .iter()
            .map(|l| {
                if l.valid_count > 0 {
                    top = l.arity;
                }
                Point {
                    x: l.arity,
                    columns,
                    rows: r.row_count(),
                    runtime_ms: l.elapsed_ms,
                    valid_count: l.valid_count,
                    candidate_count: l.candidates_validated,
                    max_arity: top,
                }
            })
            .collect();
        ("arity", points)
    } else {
        let (axis, relation, slices) = if let Some(spec) = &curve.column_curve {
            let subsets = column_subsets(&r, spec, &mut rng)?;
            ("columns", r.clone(), subsets.into_iter().map(Slice::Columns).collect::<Vec<_>>())
        } else {
            let step = curve.row_curve.unwrap_or(0);
            if step == 0 {
                bail!("--row-curve needs a positive step");
            }
            let mut order: Vec<usize> = (0..r.row_count()).collect();
            order.shuffle(&mut rng);
            let shuffled = r.select_rows(&order)?;
            let mut sizes: Vec<usize> = (1..).map(|k| k * step).take_while(|&n| n <= r.row_count()).collect();
            if sizes.last() != Some(&r.row_count()) {
                sizes.push(r.row_count());
            }
            ("rows", shuffled, sizes.into_iter().map(Slice::RowPrefix).collect())
        };
        let points = level_stats_run(&relation, &config, &slices)?
            .into_iter()
            .map(|s| Point {
                x: if axis == "rows" { s.rows } else { s.columns },
                columns: s.columns,
                rows: s.rows,
                runtime_ms: s.runtime_ms,
                valid_count: s.valid_count,
                candidate_count: s.candidate_count,
                max_arity: s.max_arity,
            })
            .collect();
        (axis, points)
    };
    manifest.finish();

    match format {
        Format::Json => write_json(out, &BenchDocument { manifest, axis, points })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(output(out)?);
            w.write_record(["axis", "x", "columns", "rows", "runtime_ms", "valid_count", "candidate_count", "max_arity"])?;
            for p in &points {
                w.write_record([
                    axis.to_string(),
                    p.x.to_string(),
                    p.columns.to_string(),
                    p.rows.to_string(),
                    format!("{:.3}", p.runtime_ms),
                    p.valid_count.to_string(),
                    p.candidate_count.to_string(),
                    p.max_arity.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if degenerate {
        Outcome::Degenerate
    } else {
        Outcome::Success
    })
}
