#![allow(dead_code)]

use indep::hardness::{AntimonotoneDnf, Graph};
use std::collections::BTreeSet;

use indep::{AttributeSet, IndependenceStatement, Relation};
use rand::seq::SliceRandom;
use rand::Rng;

/// Uniform cells over small domains.
pub fn uniform(rng: &mut impl Rng, width: usize, rows: usize, na: f64) -> Relation {
    let domains: Vec<u32> = (0..width).map(|_| rng.gen_range(1..=4)).collect();
    let cells: Vec<Vec<Option<String>>> = (0..rows)
        .map(|_| {
            domains
                .iter()
                .map(|&d| (!rng.gen_bool(na)).then(|| rng.gen_range(0..d).to_string()))
                .collect()
        })
        .collect();
    build(width, &cells)
}

/// Cross products of small per-group tables, with a few rows perturbed, so
/// that independence statements of several arities hold.
pub fn blocky(rng: &mut impl Rng, width: usize, max_rows: usize, na: f64) -> Relation {
    let mut positions: Vec<usize> = (0..width).collect();
    positions.shuffle(rng);
    let groups = rng.gen_range(1..=width.min(3));
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); groups];
    for (i, p) in positions.into_iter().enumerate() {
        if i < groups {
            parts[i].push(p);
        } else {
            parts[rng.gen_range(0..groups)].push(p);
        }
    }
    let tables: Vec<Vec<Vec<u32>>> = parts
        .iter()
        .map(|g| {
            let n = rng.gen_range(1..=3);
            (0..n)
                .map(|_| g.iter().map(|_| rng.gen_range(0..3)).collect())
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<Option<String>>> = vec![vec![None; width]];
    for (g, table) in parts.iter().zip(&tables) {
        let mut next = Vec::new();
        for row in &rows {
            for t in table {
                let mut r = row.clone();
                for (p, v) in g.iter().zip(t) {
                    r[*p] = Some(v.to_string());
                }
                next.push(r);
            }
        }
        rows = next;
    }
    rows.shuffle(rng);
    rows.truncate(max_rows);
    for _ in 0..rng.gen_range(0..3) {
        let i = rng.gen_range(0..rows.len());
        let p = rng.gen_range(0..width);
        rows[i][p] = Some(rng.gen_range(0..3).to_string());
    }
    for row in rows.iter_mut() {
        for c in row.iter_mut() {
            if rng.gen_bool(na) {
                *c = None;
            }
        }
    }
    build(width, &rows)
}

/// Mixture of [`uniform`] and [`blocky`] with random NA rate.
pub fn random_relation(rng: &mut impl Rng, max_width: usize, max_rows: usize, with_na: bool) -> Relation {
    // Mostly at least two columns and rows; degenerate shapes stay in the mix.
    let width = if rng.gen_bool(0.95) { rng.gen_range(2.min(max_width)..=max_width) } else { 1 };
    let rows = if rng.gen_bool(0.95) { rng.gen_range(2.min(max_rows)..=max_rows) } else { 1 };
    let na = if with_na && rng.gen_bool(0.5) { rng.gen_range(0.02..0.2) } else { 0.0 };
    if rng.gen_bool(0.5) {
        uniform(rng, width, rows, na)
    } else {
        blocky(rng, width, rows, na)
    }
}

fn build(width: usize, cells: &[Vec<Option<String>>]) -> Relation {
    let names: Vec<String> = (0..width).map(|p| format!("c{p}")).collect();
    Relation::from_cells(&names, cells).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, max_nodes: usize) -> Graph {
    let n = rng.gen_range(1..=max_nodes);
    let p = rng.gen_range(0.1..0.9);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new((0..n).map(|i| format!("v{i}")).collect(), edges).unwrap()
}

/// A conjunction of 1 to 3 antimonotone DNFs, each with 1 to 4 clauses, over
/// at most `max_vars` variables.
pub fn random_formula(rng: &mut impl Rng, max_vars: usize) -> Vec<AntimonotoneDnf> {
    let n = rng.gen_range(1..=max_vars);
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let clauses = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let mut c = AttributeSet::empty();
                    while c.is_empty() {
                        for p in 0..n {
                            if rng.gen_bool(0.4) {
                                c.insert(p);
                            }
                        }
                    }
                    c
                })
                .collect();
            AntimonotoneDnf::new(vars.clone(), clauses).unwrap()
        })
        .collect()
}

/// The statements a predecessor-filtered search can reach in `valid`: all
/// valid pairs, then every valid statement whose predecessors were all
/// reached.
pub fn reachable(valid: &BTreeSet<IndependenceStatement>) -> BTreeSet<IndependenceStatement> {
    let mut out: BTreeSet<IndependenceStatement> = valid.iter().filter(|s| s.arity() == 2).copied().collect();
    let top = valid.iter().map(IndependenceStatement::arity).max().unwrap_or(0);
    for arity in 3..=top {
        let level: Vec<IndependenceStatement> = valid
            .iter()
            .filter(|s| s.arity() == arity && s.predecessors().all(|p| out.contains(&p)))
            .copied()
            .collect();
        out.extend(level);
    }
    out
}
