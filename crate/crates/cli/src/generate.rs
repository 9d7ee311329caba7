use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use indep::hardness::{formula_to_relation, graph_to_relation, parse_formula, render_formula, AntimonotoneDnf, Graph};
use indep::oracle::{max_biclique, weighted_sat, OracleBudget};
use indep::AttributeSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::RunManifest;
use crate::Outcome;

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Edge list: one `u v` pair per line, optional `nodes ...` line.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// One antimonotone DNF per line, clauses separated by `|`.
    #[arg(long)]
    pub formula: Option<PathBuf>,
    /// A seeded random graph on --size nodes.
    #[arg(long)]
    pub random_graph: bool,
    /// A seeded random conjunction of DNFs over --size variables.
    #[arg(long)]
    pub random_formula: bool,
}

#[derive(Debug, Serialize)]
struct BicliqueTruth {
    size: usize,
    left: Vec<String>,
    right: Vec<String>,
}

#[derive(Debug, Serialize)]
struct WeightTruth {
    k: usize,
    satisfiable: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Truth {
    Graph {
        nodes: Vec<String>,
        edges: Vec<(String, String)>,
        /// Absent when the graph exceeds the exhaustive-search limit.
        max_biclique: Option<BicliqueTruth>,
        expected_max_arity: Option<usize>,
    },
    Formula {
        formula: String,
        variables: Vec<String>,
        weighted_sat: Vec<WeightTruth>,
        max_weight: usize,
        /// `max_weight + 1` for weights of at least 1; a relation whose
        /// only model is all-false has no statement at all.
        expected_max_arity: usize,
    },
}

#[derive(Debug, Serialize)]
struct Sidecar {
    manifest: RunManifest,
    relation: String,
    rows: usize,
    columns: usize,
    truth: Truth,
}

pub fn truth_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".truth.json");
    out.with_file_name(name)
}

fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        bail!("edge probability must lie in [0, 1]");
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Ok(Graph::new((0..n).map(|i| format!("v{i}")).collect(), edges)?)
}

/// One to three DNFs of one to four nonempty clauses each.
fn random_formula(rng: &mut impl Rng, n: usize) -> Result<Vec<AntimonotoneDnf>> {
    if n == 0 {
        bail!("a formula needs at least one variable");
    }
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let clauses = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let mut c = AttributeSet::empty();
                    while c.is_empty() {
                        c = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                    }
                    c
                })
                .collect();
            Ok(AntimonotoneDnf::new(vars.clone(), clauses)?)
        })
        .collect()
}

fn graph_truth(g: &Graph, max_nodes: usize) -> Result<Truth> {
    let names = g.nodes();
    let budget = OracleBudget {
        max_attributes: max_nodes,
        max_rows: usize::MAX,
    };
    let best = if g.node_count() <= max_nodes {
        let b = max_biclique(g, budget)?;
        let side = |s: &AttributeSet| s.iter().map(|p| names[p].clone()).collect();
        Some(BicliqueTruth {
            size: b.size,
            left: side(&b.left),
            right: side(&b.right),
        })
    } else {
        None
    };
    Ok(Truth::Graph {
        nodes: names.to_vec(),
        edges: g.edges().map(|(u, v)| (names[u].clone(), names[v].clone())).collect(),
        expected_max_arity: best.as_ref().map(|b| b.size),
        max_biclique: best,
    })
}

fn formula_truth(phi: &[AntimonotoneDnf]) -> Truth {
    let n = phi[0].variables().len();
    let weighted: Vec<WeightTruth> = (0..=n)
        .map(|k| WeightTruth {
            k,
            satisfiable: weighted_sat(phi, k),
        })
        .collect();
    let max_weight = weighted.iter().filter(|w| w.satisfiable).map(|w| w.k).max().unwrap_or(0);
    Truth::Formula {
        formula: render_formula(phi),
        variables: phi[0].variables().to_vec(),
        weighted_sat: weighted,
        max_weight,
        expected_max_arity: if max_weight >= 1 { max_weight + 1 } else { 0 },
    }
}

pub fn run(source: &Source, size: usize, p: f64, seed: u64, max_nodes: usize, out: &Path) -> Result<Outcome> {
    let mut manifest = RunManifest::start("generate");
    manifest.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let read = |path: &Path| fs::read_to_string(path).with_context(|| format!("reading {}", path.display()));

    let (relation, truth) = if let Some(path) = &source.graph {
        let g = Graph::parse(&read(path)?)?;
        (graph_to_relation(&g)?, graph_truth(&g, max_nodes)?)
    } else if source.random_graph {
        let g = random_graph(&mut rng, size, p)?;
        (graph_to_relation(&g)?, graph_truth(&g, max_nodes)?)
    } else {
        let phi = match &source.formula {
            Some(path) => parse_formula(&read(path)?)?,
            None => random_formula(&mut rng, size)?,
        };
        (formula_to_relation(&phi)?, formula_truth(&phi))
    };

    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    relation.write_csv(BufWriter::new(file), "?")?;
    manifest.finish();
    let sidecar = Sidecar {
        manifest,
        relation: out.display().to_string(),
        rows: relation.row_count(),
        columns: relation.width(),
        truth,
    };
    let path = truth_path(out);
    crate::input::write_json(Some(&path), &sidecar)?;
    log::info!("wrote {} and {}", out.display(), path.display());
    Ok(Outcome::Success)
}
