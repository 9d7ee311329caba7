use std::fmt;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::relation::{AttributeSet, Relation};

/// A cell of a constructed relation.
///
/// `Dash` is the fresh marker of the formula construction and `Zero`/`One`
/// are the sentinels added when dropping the index column; none of them
/// can coincide with an ordinary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Int(u64),
    Dash(u64),
    Zero,
    One,
}

impl Cell {
    fn renamed(self, n: u64, j: u64) -> Result<Cell> {
        match self {
            Cell::Int(v) => Ok(Cell::Int(v * n + j)),
            Cell::Dash(t) => Ok(Cell::Dash(t * n + j)),
            Cell::Zero => Err(Error::SentinelCollision(0)),
            Cell::One => Err(Error::SentinelCollision(1)),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Dash(0) => f.write_str("-"),
            Cell::Dash(t) => write!(f, "-{t}"),
            Cell::Zero => f.write_str("s0"),
            Cell::One => f.write_str("s1"),
        }
    }
}

/// A relation over base attributes plus one index column, kept as a set of
/// rows in construction order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRelation {
    attributes: Vec<String>,
    rows: Vec<(Vec<Cell>, Cell)>,
}

pub const INDEX_NAME: &str = "i";

impl IndexRelation {
    pub fn new(attributes: Vec<String>) -> Self {
        IndexRelation {
            attributes,
            rows: Vec::new(),
        }
    }

    /// Adds a row unless present. Panics on a width mismatch.
    pub fn push(&mut self, values: Vec<Cell>, index: Cell) {
        assert_eq!(values.len(), self.attributes.len(), "row width");
        let row = (values, index);
        if !self.rows.contains(&row) {
            self.rows.push(row);
        }
    }

    fn extend_unique(&mut self, rows: impl IntoIterator<Item = (Vec<Cell>, Cell)>) {
        let mut seen: FxHashSet<(Vec<Cell>, Cell)> = self.rows.iter().cloned().collect();
        for row in rows {
            if seen.insert(row.clone()) {
                self.rows.push(row);
            }
        }
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    /// Position of the index column in [`IndexRelation::to_relation`].
    pub fn index_attribute(&self) -> usize {
        self.attributes.len()
    }

    pub fn rows(&self) -> &[(Vec<Cell>, Cell)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct index values in first-seen order.
    pub fn index_values(&self) -> Vec<Cell> {
        let mut seen = FxHashSet::default();
        self.rows.iter().map(|r| r.1).filter(|c| seen.insert(*c)).collect()
    }

    /// Distinct base projections in first-seen order.
    pub fn base_rows(&self) -> Vec<Vec<Cell>> {
        let mut seen = FxHashSet::default();
        self.rows
            .iter()
            .filter(|r| seen.insert(&r.0))
            .map(|r| r.0.clone())
            .collect()
    }

    /// Base attributes followed by the index column.
    pub fn to_relation(&self) -> Result<Relation> {
        let mut names = self.attributes.clone();
        names.push(INDEX_NAME.to_string());
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(v, i)| v.iter().chain(std::iter::once(i)).map(Cell::to_string).collect())
            .collect();
        Relation::from_strings(&names, &rows)
    }

    /// Whether `y ⊥ i` holds, for `y` a set of base positions. The empty set
    /// is trivially independent.
    pub fn indicator(&self, y: &AttributeSet) -> bool {
        if y.is_empty() {
            return true;
        }
        let project = |row: &Vec<Cell>| y.iter().map(|p| row[p]).collect::<Vec<_>>();
        let left: FxHashSet<Vec<Cell>> = self.rows.iter().map(|r| project(&r.0)).collect();
        let right: FxHashSet<Cell> = self.rows.iter().map(|r| r.1).collect();
        let joint: FxHashSet<(Vec<Cell>, Cell)> = self.rows.iter().map(|r| (project(&r.0), r.1)).collect();
        (left.len() as u128) * (right.len() as u128) == joint.len() as u128
    }
}

/// Appends `(0,…,0,a)` and `(1,…,1,a)` for every index value `a`, with
/// fresh sentinels standing in for 0 and 1.
pub fn index_to_plain(ir: &IndexRelation) -> Result<IndexRelation> {
    for (values, index) in &ir.rows {
        for c in values.iter().chain(std::iter::once(index)) {
            match c {
                Cell::Zero => return Err(Error::SentinelCollision(0)),
                Cell::One => return Err(Error::SentinelCollision(1)),
                _ => {}
            }
        }
    }
    let width = ir.attributes.len();
    let mut out = ir.clone();
    let added: Vec<_> = ir
        .index_values()
        .into_iter()
        .flat_map(|a| [(vec![Cell::Zero; width], a), (vec![Cell::One; width], a)])
        .collect();
    out.extend_unique(added);
    Ok(out)
}

/// Combines index relations over one base schema so that the indicator of
/// the result is the conjunction of the inputs' indicators.
///
/// With two or more inputs, values of input `j` are renamed `v ↦ v·n + j`
/// to make all inputs disjoint. The result is the union of the inputs and,
/// for each `j`, the base rows of input `j` paired with every index value of
/// the other inputs.
pub fn conjoin_index_relations(rs: &[IndexRelation]) -> Result<IndexRelation> {
    let Some(first) = rs.first() else {
        return Err(Error::MalformedFormula("nothing to conjoin".into()));
    };
    if rs.iter().any(|r| r.attributes != first.attributes) {
        return Err(Error::MalformedFormula("index relations over different schemas".into()));
    }
    if rs.len() == 1 {
        return Ok(first.clone());
    }
    let n = rs.len() as u64;
    let renamed: Vec<IndexRelation> = rs
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let j = j as u64;
            let rows = r
                .rows
                .iter()
                .map(|(v, i)| {
                    let v = v.iter().map(|c| c.renamed(n, j)).collect::<Result<Vec<_>>>()?;
                    Ok((v, i.renamed(n, j)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IndexRelation {
                attributes: r.attributes.clone(),
                rows,
            })
        })
        .collect::<Result<_>>()?;

    let mut out = IndexRelation::new(first.attributes.clone());
    for r in &renamed {
        out.extend_unique(r.rows.iter().cloned());
    }
    let indices: Vec<Vec<Cell>> = renamed.iter().map(IndexRelation::index_values).collect();
    for (j, r) in renamed.iter().enumerate() {
        let bases = r.base_rows();
        let others: Vec<Cell> = indices
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        out.extend_unique(
            bases
                .iter()
                .flat_map(|b| others.iter().map(move |a| (b.clone(), *a))),
        );
    }
    Ok(out)
}
