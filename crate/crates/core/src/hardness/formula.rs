use std::collections::BTreeSet;

use super::index::{conjoin_index_relations, index_to_plain, Cell, IndexRelation};
use crate::error::{Error, Result};
use crate::relation::{AttributeSet, Relation};

/// A disjunction of clauses, each clause the conjunction of the negations
/// of its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntimonotoneDnf {
    variables: Vec<String>,
    clauses: Vec<AttributeSet>,
}

impl AntimonotoneDnf {
    pub fn new(variables: Vec<String>, clauses: Vec<AttributeSet>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::MalformedFormula("a disjunction needs at least one clause".into()));
        }
        let all = AttributeSet::full(variables.len());
        for c in &clauses {
            if c.is_empty() {
                return Err(Error::MalformedFormula("empty clause".into()));
            }
            if !c.is_subset(&all) {
                return Err(Error::MalformedFormula(format!("clause {c} uses an unknown variable")));
            }
        }
        let distinct: BTreeSet<&String> = variables.iter().collect();
        if distinct.len() != variables.len() {
            return Err(Error::MalformedFormula("duplicate variable".into()));
        }
        Ok(AntimonotoneDnf { variables, clauses })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn clauses(&self) -> &[AttributeSet] {
        &self.clauses
    }

    /// Truth value under the assignment setting exactly `trues` to true.
    pub fn eval(&self, trues: &AttributeSet) -> bool {
        self.clauses.iter().any(|c| c.is_disjoint(trues))
    }
}

/// Conjunction of antimonotone DNFs over shared variables.
pub fn eval_conjunction(phi: &[AntimonotoneDnf], trues: &AttributeSet) -> bool {
    phi.iter().all(|d| d.eval(trues))
}

/// The two blocks of the DNF construction before they are combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfBlocks {
    /// One row per clause `j`: clause variables carry `j`, the rest 0;
    /// index `j`.
    pub r0: Vec<(Vec<Cell>, Cell)>,
    /// Copies of the variable part of `r0`, the `l`-th with clause-`l`
    /// variables replaced by the marker, duplicates removed.
    pub r_x: Vec<Vec<Cell>>,
    /// Index values `1..=m`.
    pub index: Vec<Cell>,
}

pub fn dnf_blocks(phi: &AntimonotoneDnf) -> DnfBlocks {
    let n = phi.variables.len();
    let r0: Vec<(Vec<Cell>, Cell)> = phi
        .clauses
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let j = j as u64 + 1;
            let row = (0..n).map(|p| Cell::Int(if c.contains(p) { j } else { 0 })).collect();
            (row, Cell::Int(j))
        })
        .collect();
    let mut r_x: Vec<Vec<Cell>> = Vec::new();
    for l in &phi.clauses {
        for (row, _) in &r0 {
            let copy: Vec<Cell> = row
                .iter()
                .enumerate()
                .map(|(p, c)| if l.contains(p) { Cell::Dash(0) } else { *c })
                .collect();
            if !r_x.contains(&copy) {
                r_x.push(copy);
            }
        }
    }
    let index = (1..=phi.clauses.len() as u64).map(Cell::Int).collect();
    DnfBlocks { r0, r_x, index }
}

/// `r0 ∪ (r_X × {1..m})`, whose indicator equals the formula's truth
/// function.
///
/// With a single clause every row carries index 1, the index column is
/// constant and every `Y ⊥ i` holds. That case is built from the clause
/// repeated, which denotes the same function.
pub fn dnf_to_index_relation(phi: &AntimonotoneDnf) -> IndexRelation {
    let padded;
    let phi = if phi.clauses.len() == 1 {
        padded = AntimonotoneDnf {
            variables: phi.variables.clone(),
            clauses: vec![phi.clauses[0], phi.clauses[0]],
        };
        &padded
    } else {
        phi
    };
    let blocks = dnf_blocks(phi);
    let mut r = IndexRelation::new(phi.variables.clone());
    for (row, i) in blocks.r0 {
        r.push(row, i);
    }
    for row in &blocks.r_x {
        for i in &blocks.index {
            r.push(row.clone(), *i);
        }
    }
    r
}

/// Full pipeline: one index relation per conjunct, conjoined, then made
/// plain. The result has a `(k+1)`-ary statement iff `phi` has a weight-`k`
/// model, for every `k ≥ 1`.
pub fn formula_to_relation(phi: &[AntimonotoneDnf]) -> Result<Relation> {
    formula_to_plain(phi)?.to_relation()
}

/// [`formula_to_relation`] before rendering.
pub fn formula_to_plain(phi: &[AntimonotoneDnf]) -> Result<IndexRelation> {
    if phi.is_empty() {
        return Err(Error::MalformedFormula("empty formula".into()));
    }
    if phi.iter().any(|d| d.variables != phi[0].variables) {
        return Err(Error::MalformedFormula("conjuncts over different variables".into()));
    }
    let parts: Vec<IndexRelation> = phi.iter().map(dnf_to_index_relation).collect();
    index_to_plain(&conjoin_index_relations(&parts)?)
}

/// Parses a conjunction of antimonotone DNFs.
///
/// Each line is one conjunct; clauses are separated by `|` and list
/// variable names, optionally written negated (`!x`, `~x`, `¬x`). An
/// optional `vars a b c` line fixes the variables and their order,
/// otherwise they appear in first-use order. `#` starts a comment.
pub fn parse_formula(text: &str) -> Result<Vec<AntimonotoneDnf>> {
    let mut declared: Option<Vec<String>> = None;
    let mut raw: Vec<Vec<Vec<String>>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars ") {
            if declared.is_some() {
                return Err(Error::MalformedFormula(format!("line {}: second vars line", n + 1)));
            }
            declared = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let mut conjunct = Vec::new();
        for clause in line.split('|') {
            let lits: Vec<String> = clause
                .split(|c: char| c.is_whitespace() || c == '&' || c == '∧' || c == ',')
                .filter(|s| !s.is_empty())
                .map(|l| l.trim_start_matches(['!', '~', '¬']).to_string())
                .collect();
            if lits.is_empty() || lits.iter().any(String::is_empty) {
                return Err(Error::MalformedFormula(format!("line {}: empty clause", n + 1)));
            }
            conjunct.push(lits);
        }
        raw.push(conjunct);
    }
    if raw.is_empty() {
        return Err(Error::MalformedFormula("empty formula".into()));
    }
    let fixed = declared.is_some();
    let mut variables = declared.unwrap_or_default();
    let mut out_clauses = Vec::new();
    for conjunct in &raw {
        let mut clauses = Vec::new();
        for lits in conjunct {
            let mut set = AttributeSet::empty();
            for l in lits {
                let p = match variables.iter().position(|v| v == l) {
                    Some(p) => p,
                    None if !fixed => {
                        variables.push(l.clone());
                        variables.len() - 1
                    }
                    None => return Err(Error::MalformedFormula(format!("undeclared variable {l}"))),
                };
                set.insert(p);
            }
            clauses.push(set);
        }
        out_clauses.push(clauses);
    }
    out_clauses
        .into_iter()
        .map(|c| AntimonotoneDnf::new(variables.clone(), c))
        .collect()
}

pub fn render_formula(phi: &[AntimonotoneDnf]) -> String {
    let Some(first) = phi.first() else {
        return String::new();
    };
    let mut out = format!("vars {}\n", first.variables.join(" "));
    for d in phi {
        let clauses: Vec<String> = d
            .clauses
            .iter()
            .map(|c| c.iter().map(|p| first.variables[p].as_str()).collect::<Vec<_>>().join(" "))
            .collect();
        out.push_str(&clauses.join(" | "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    fn set(v: &[usize]) -> AttributeSet {
        v.iter().map(|x| x - 1).collect()
    }

    pub(crate) fn example_dnf() -> AntimonotoneDnf {
        AntimonotoneDnf::new(vars(5), vec![set(&[1, 3, 5]), set(&[2, 4, 5]), set(&[3, 4])]).unwrap()
    }

    #[test]
    fn example_r0_rows() {
        let b = dnf_blocks(&example_dnf());
        let render = |row: &(Vec<Cell>, Cell)| {
            let v: Vec<String> = row.0.iter().map(Cell::to_string).collect();
            format!("({};{})", v.join(","), row.1)
        };
        let rows: Vec<String> = b.r0.iter().map(render).collect();
        assert_eq!(rows, vec!["(1,0,1,0,1;1)", "(0,2,0,2,2;2)", "(0,0,3,3,0;3)"]);
    }

    #[test]
    fn example_r1_block() {
        let b = dnf_blocks(&example_dnf());
        let rows: Vec<String> = b
            .r_x
            .iter()
            .map(|r| r.iter().map(Cell::to_string).collect::<Vec<_>>().join(","))
            .collect();
        let expected = [
            "-,0,-,0,-", "-,2,-,2,-", "-,0,-,3,-", "1,-,1,-,-", "0,-,0,-,-", "0,-,3,-,-", "1,0,-,-,1", "0,2,-,-,2",
            "0,0,-,-,0",
        ];
        assert_eq!(rows, expected);
        let r = dnf_to_index_relation(&example_dnf());
        assert_eq!(r.len(), 3 + 27);
    }

    #[test]
    fn single_clause_blocks() {
        let phi = AntimonotoneDnf::new(vars(1), vec![set(&[1])]).unwrap();
        let b = dnf_blocks(&phi);
        assert_eq!(b.r0, vec![(vec![Cell::Int(1)], Cell::Int(1))]);
        assert_eq!(b.r_x, vec![vec![Cell::Dash(0)]]);
        let r = dnf_to_index_relation(&phi);
        assert!(r.indicator(&AttributeSet::empty()));
        assert!(!r.indicator(&set(&[1])));
    }

    #[test]
    fn example_indicator_matches_truth_table() {
        let phi = example_dnf();
        let r = dnf_to_index_relation(&phi);
        for y in AttributeSet::full(5).subsets() {
            assert_eq!(r.indicator(&y), phi.eval(&y), "Y = {y}");
        }
    }

    #[test]
    fn parse_and_render() {
        let phi = parse_formula("# example\nvars x1 x2 x3 x4 x5\n!x1 !x3 !x5 | x2 x4 x5 | ¬x3 ∧ ¬x4\n").unwrap();
        assert_eq!(phi, vec![example_dnf()]);
        assert_eq!(parse_formula(&render_formula(&phi)).unwrap(), phi);
        assert!(parse_formula("").is_err());
        assert!(parse_formula("vars a\nb\n").is_err());
        assert!(parse_formula("a | | b\n").is_err());
    }

    #[test]
    fn pipeline_rejects_empty_formula() {
        assert!(formula_to_relation(&[]).is_err());
    }
}
