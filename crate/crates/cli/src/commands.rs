use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use indep::cover::reduce_redundant;
use indep::oracle::{enumerate_valid_iss, maximal_under_subsumption, reachable_by_levels, OracleBudget};
use indep::{discover as run_discovery, validate, IndependenceStatement, SaturationBudget, Threshold};
use serde::Serialize;

use crate::input::{output, write_json, Format, InputArgs, SearchArgs};
use crate::report::{cover_entries, write_cover_csv, CoverEntry, ReportDocument, RunManifest};
use crate::Outcome;

#[allow(clippy::too_many_arguments)]
pub fn discover(
    input: &InputArgs,
    search: &SearchArgs,
    epsilon: Threshold,
    reduce_cover: bool,
    trace: bool,
    format: Format,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<Outcome> {
    search.check()?;
    let r = input.load()?;
    let config = search.config(epsilon);
    let mut manifest = RunManifest::start("discover");
    manifest.input = Some(input.manifest());
    manifest.config = Some(config);
    manifest.threads = threads;

    let report = run_discovery(&r, &config);
    let reduction = reduce_cover.then(|| reduce_redundant(&report.cover, SaturationBudget::default()));
    manifest.finish();
    let doc = ReportDocument::new(manifest, &r, &report, reduction.as_ref().map(|red| (red, trace)));
    match format {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => write_cover_csv(output(out)?, &doc.cover)?,
    }
    for w in &report.warnings {
        log::warn!("{w}");
    }
    Ok(if report.degenerate {
        Outcome::Degenerate
    } else {
        Outcome::Success
    })
}

#[derive(Debug, Serialize)]
struct SweepRun {
    epsilon: String,
    cover_size: usize,
    max_arity: usize,
    runtime_ms: f64,
    cover: Vec<CoverEntry>,
}

#[derive(Debug, Serialize)]
struct SweepDocument {
    manifest: RunManifest,
    runs: Vec<SweepRun>,
}

pub fn sweep(
    input: &InputArgs,
    search: &SearchArgs,
    epsilons: &[Threshold],
    format: Format,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<Outcome> {
    search.check()?;
    let descending = epsilons
        .windows(2)
        .all(|w| (w[0].numerator() as u128 * w[1].denominator() as u128) >= (w[1].numerator() as u128 * w[0].denominator() as u128));
    if !descending {
        bail!("thresholds must be listed in descending order");
    }
    let r = input.load()?;
    let mut manifest = RunManifest::start("sweep");
    manifest.input = Some(input.manifest());
    manifest.config = Some(search.config(epsilons[0]));
    manifest.threads = threads;

    let mut runs = Vec::new();
    let mut degenerate = false;
    for &eps in epsilons {
        let start = Instant::now();
        let report = run_discovery(&r, &search.config(eps));
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        degenerate |= report.degenerate;
        runs.push(SweepRun {
            epsilon: format!("{}", eps.to_f64()),
            cover_size: report.cover.len(),
            max_arity: report.max_arity(),
            runtime_ms,
            cover: cover_entries(&report, &r, report.cover.iter()),
        });
    }
    manifest.finish();
    match format {
        Format::Json => write_json(out, &SweepDocument { manifest, runs })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(output(out)?);
            w.write_record(["epsilon", "cover_size", "max_arity", "runtime_ms"])?;
            for run in &runs {
                w.write_record([
                    run.epsilon.clone(),
                    run.cover_size.to_string(),
                    run.max_arity.to_string(),
                    format!("{:.3}", run.runtime_ms),
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

/// Runs engine and oracle on the same input. With pruning the expected
/// result is the part of the oracle's set the level-wise search can reach,
/// which is everything whenever validity is downward closed.
pub fn verify(
    input: &InputArgs,
    search: &SearchArgs,
    epsilon: Threshold,
    max_attributes: usize,
    max_rows: usize,
) -> Result<Outcome> {
    search.check()?;
    let r = input.load()?;
    let config = search.config(epsilon);
    let budget = OracleBudget {
        max_attributes,
        max_rows,
    };
    let truth = enumerate_valid_iss(&r, &config, budget)?;
    let truth: BTreeSet<IndependenceStatement> = match config.max_arity {
        Some(cap) => truth.into_iter().filter(|s| s.arity() <= cap).collect(),
        None => truth,
    };
    let expected_valid = if config.prune {
        reachable_by_levels(&truth)
    } else {
        truth.clone()
    };
    let expected_cover = maximal_under_subsumption(&expected_valid);

    let report = run_discovery(&r, &config);
    let found_valid: BTreeSet<IndependenceStatement> = report.valid.keys().copied().collect();
    let found_cover = report.cover.members();

    let mut stdout = std::io::stdout().lock();
    writeln!(
        stdout,
        "engine: {} valid, cover {}; oracle: {} valid, cover {}",
        found_valid.len(),
        found_cover.len(),
        expected_valid.len(),
        expected_cover.len()
    )?;
    let unreachable = truth.len() - expected_valid.len();
    if unreachable > 0 {
        writeln!(
            stdout,
            "note: {unreachable} valid statement(s) have a failing predecessor and are out of reach of the pruned search"
        )?;
    }

    let counterexample = found_valid
        .symmetric_difference(&expected_valid)
        .chain(found_cover.symmetric_difference(&expected_cover))
        .min()
        .copied();
    match counterexample {
        None => {
            writeln!(stdout, "match")?;
            Ok(Outcome::Success)
        }
        Some(s) => {
            let v = validate(&r, &s, &config);
            writeln!(
                stdout,
                "mismatch: {} (ratio {}, engine {}, oracle {})",
                s.render(r.schema().names()),
                v.ratio,
                if found_valid.contains(&s) { "valid" } else { "not reported" },
                if truth.contains(&s) { "valid" } else { "invalid" },
            )?;
            Ok(Outcome::Mismatch)
        }
    }
}
