//! Column-oriented relations with dictionary-encoded values.
//!
//! Every cell is treated as an opaque string. Each column keeps a dictionary
//! of the strings it contains and stores one dense code per row; missing
//! cells are flagged in a per-column mask and share one extra code so that
//! "NA as an ordinary value" falls out of plain code comparison.

mod attribute_set;
mod count;

pub use attribute_set::{AttributeSet, Positions, MAX_ATTRIBUTES};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How missing cells take part in validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NaSemantics {
    /// A missing cell is one more value of its column.
    #[default]
    Value,
    /// Rows with a missing cell on any attribute of a statement are left out
    /// when that statement is checked.
    Ignore,
}

/// Ordered, uniquely named attributes. Positions are `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    names: Vec<String>,
}

impl Schema {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_ATTRIBUTES {
            return Err(Error::TooManyAttributes(names.len()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateAttribute(n.clone()));
            }
        }
        Ok(Schema { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, position: usize) -> &str {
        &self.names[position]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All positions.
    pub fn all(&self) -> AttributeSet {
        AttributeSet::full(self.names.len())
    }

    /// Looks up every name; fails on the first unknown one.
    pub fn attribute_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AttributeSet> {
        names
            .iter()
            .map(|n| {
                self.position(n.as_ref())
                    .ok_or_else(|| Error::UnknownAttribute(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn names_of(&self, set: &AttributeSet) -> Vec<String> {
        set.iter().map(|p| self.names[p].clone()).collect()
    }
}

/// One dictionary-encoded column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    codes: Vec<u32>,
    na_mask: Vec<bool>,
    dictionary: Vec<String>,
}

impl Column {
    /// Code carried by missing cells: one past the last dictionary entry.
    pub fn na_code(&self) -> u32 {
        self.dictionary.len() as u32
    }

    /// Exclusive upper bound on codes, NA included.
    pub(crate) fn radix(&self) -> u32 {
        self.dictionary.len() as u32 + 1
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn na_mask(&self) -> &[bool] {
        &self.na_mask
    }

    pub fn dictionary(&self) -> &[String] {
        &self.dictionary
    }

    pub fn has_na(&self) -> bool {
        self.na_mask.iter().any(|&m| m)
    }

    pub fn na_count(&self) -> usize {
        self.na_mask.iter().filter(|&&m| m).count()
    }

    pub fn value(&self, row: usize) -> Option<&str> {
        if self.na_mask[row] {
            None
        } else {
            Some(&self.dictionary[self.codes[row] as usize])
        }
    }
}

/// Incrementally encodes rows into a [`Relation`].
pub struct RelationBuilder {
    schema: Schema,
    columns: Vec<Column>,
    lookups: Vec<HashMap<String, u32>>,
    rows: usize,
}

impl RelationBuilder {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let schema = Schema::new(names)?;
        let width = schema.len();
        Ok(RelationBuilder {
            schema,
            columns: (0..width)
                .map(|_| Column {
                    codes: Vec::new(),
                    na_mask: Vec::new(),
                    dictionary: Vec::new(),
                })
                .collect(),
            lookups: vec![HashMap::new(); width],
            rows: 0,
        })
    }

    /// Appends one row; `None` marks a missing cell.
    pub fn push<S: AsRef<str>>(&mut self, row: &[Option<S>]) -> Result<()> {
        if row.len() != self.schema.len() {
            return Err(Error::RaggedRecord {
                record: self.rows as u64 + 1,
                expected: self.schema.len(),
                found: row.len(),
            });
        }
        for ((cell, col), lookup) in row.iter().zip(&mut self.columns).zip(&mut self.lookups) {
            match cell {
                Some(v) => {
                    let v = v.as_ref();
                    let code = match lookup.get(v) {
                        Some(&c) => c,
                        None => {
                            let c = col.dictionary.len() as u32;
                            col.dictionary.push(v.to_string());
                            lookup.insert(v.to_string(), c);
                            c
                        }
                    };
                    col.codes.push(code);
                    col.na_mask.push(false);
                }
                None => {
                    // Patched to the final NA code in `build`.
                    col.codes.push(u32::MAX);
                    col.na_mask.push(true);
                }
            }
        }
        self.rows += 1;
        Ok(())
    }

    pub fn build(mut self) -> Relation {
        for col in &mut self.columns {
            let na = col.na_code();
            for (code, &m) in col.codes.iter_mut().zip(&col.na_mask) {
                if m {
                    *code = na;
                }
            }
        }
        let width = self.schema.len();
        Relation {
            schema: self.schema,
            columns: self.columns,
            row_count: self.rows,
            origin: (0..width).collect(),
            source_names: None,
        }
    }
}

/// Options for [`load_csv`].
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub has_header: bool,
    pub na_markers: BTreeSet<String>,
    pub delimiter: u8,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            has_header: true,
            na_markers: default_na_markers(),
            delimiter: b',',
        }
    }
}

/// The empty field and `?`.
pub fn default_na_markers() -> BTreeSet<String> {
    ["", "?"].iter().map(|s| s.to_string()).collect()
}

/// An immutable relation. Duplicate rows are kept as loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    schema: Schema,
    columns: Vec<Column>,
    row_count: usize,
    /// For each column, its position in the schema the relation was derived from.
    origin: Vec<usize>,
    source_names: Option<Vec<String>>,
}

/// Reads delimited text into a relation.
///
/// Without a header, attributes are named `1`, `2`, ... in column order.
pub fn load_csv<R: Read>(source: R, options: &LoadOptions) -> Result<Relation> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(options.delimiter)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();

    let first = match records.next() {
        Some(r) => r?,
        None => return Err(Error::EmptyInput),
    };
    let (names, pending) = if options.has_header {
        (first.iter().map(str::to_string).collect::<Vec<_>>(), None)
    } else {
        ((1..=first.len()).map(|i| i.to_string()).collect(), Some(first))
    };
    let width = names.len();
    let mut builder = RelationBuilder::new(names)?;
    let mut push = |record: &csv::StringRecord, number: u64| -> Result<()> {
        if record.len() != width {
            if options.has_header && number == 1 {
                return Err(Error::HeaderMismatch {
                    header: width,
                    record: record.len(),
                });
            }
            return Err(Error::RaggedRecord {
                record: number,
                expected: width,
                found: record.len(),
            });
        }
        let cells: Vec<Option<&str>> = record
            .iter()
            .map(|v| if options.na_markers.contains(v) { None } else { Some(v) })
            .collect();
        builder.push(&cells)
    };

    let mut number = 0u64;
    if let Some(record) = pending {
        number += 1;
        push(&record, number)?;
    }
    for record in records {
        number += 1;
        push(&record?, number)?;
    }
    Ok(builder.build())
}

impl Relation {
    /// Builds a relation from string cells; `None` marks a missing cell.
    pub fn from_cells<N, S>(names: &[N], rows: &[Vec<Option<S>>]) -> Result<Relation>
    where
        N: AsRef<str>,
        S: AsRef<str>,
    {
        let mut b = RelationBuilder::new(names.iter().map(|n| n.as_ref().to_string()).collect())?;
        for row in rows {
            b.push(row)?;
        }
        Ok(b.build())
    }

    /// Builds a relation without missing cells.
    pub fn from_strings<N, S>(names: &[N], rows: &[Vec<S>]) -> Result<Relation>
    where
        N: AsRef<str>,
        S: AsRef<str>,
    {
        let mut b = RelationBuilder::new(names.iter().map(|n| n.as_ref().to_string()).collect())?;
        for row in rows {
            let cells: Vec<Option<&str>> = row.iter().map(|v| Some(v.as_ref())).collect();
            b.push(&cells)?;
        }
        Ok(b.build())
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn width(&self) -> usize {
        self.schema.len()
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, position: usize) -> &Column {
        &self.columns[position]
    }

    pub fn value(&self, row: usize, position: usize) -> Option<&str> {
        self.columns[position].value(row)
    }

    pub fn is_na(&self, row: usize, position: usize) -> bool {
        self.columns[position].na_mask[row]
    }

    pub fn na_count(&self) -> usize {
        self.columns.iter().map(Column::na_count).sum()
    }

    /// Position of each column in the schema this relation was derived from.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    /// Attribute names of the schema this relation was derived from.
    pub fn source_names(&self) -> &[String] {
        self.source_names.as_deref().unwrap_or(self.schema.names())
    }

    fn check_set(&self, set: &AttributeSet) -> Result<()> {
        match set.last() {
            Some(p) if p >= self.width() => Err(Error::PositionOutOfRange {
                position: p,
                width: self.width(),
            }),
            _ => Ok(()),
        }
    }

    /// Number of distinct projections onto `x` over `rows` (all rows when
    /// `None`). A missing cell counts as one more distinguished value of its
    /// column.
    pub fn distinct_count(&self, x: &AttributeSet, rows: Option<&[usize]>) -> Result<u64> {
        if x.is_empty() {
            return Err(Error::EmptyAttributeSet);
        }
        self.check_set(x)?;
        if let Some(rs) = rows {
            if let Some(&bad) = rs.iter().find(|&&r| r >= self.row_count) {
                return Err(Error::RowOutOfRange {
                    row: bad,
                    rows: self.row_count,
                });
            }
        }
        Ok(self.distinct_count_unchecked(x, rows))
    }

    pub(crate) fn distinct_count_unchecked(&self, x: &AttributeSet, rows: Option<&[usize]>) -> u64 {
        let cols: Vec<&Column> = x.iter().map(|p| &self.columns[p]).collect();
        match rows {
            None => count::distinct(&cols, count::Rows::All(self.row_count)),
            Some(rs) => count::distinct(&cols, count::Rows::Subset(rs)),
        }
    }

    /// Rows without a missing cell on any attribute of `x`.
    pub fn rows_non_na(&self, x: &AttributeSet) -> Vec<usize> {
        let masks: Vec<&[bool]> = x
            .iter()
            .filter(|&p| p < self.width())
            .map(|p| self.columns[p].na_mask.as_slice())
            .filter(|m| m.iter().any(|&b| b))
            .collect();
        (0..self.row_count)
            .filter(|&r| masks.iter().all(|m| !m[r]))
            .collect()
    }

    /// Columns that are constant under `na`.
    ///
    /// With [`NaSemantics::Value`] a column is constant when it holds exactly
    /// one distinct value, NA included. With [`NaSemantics::Ignore`] it is
    /// constant when it holds at most one distinct non-missing value, so
    /// all-missing columns qualify.
    pub fn constant_columns(&self, na: NaSemantics) -> AttributeSet {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let present = c.dictionary.len();
                match na {
                    NaSemantics::Value => present + usize::from(c.has_na()) == 1,
                    NaSemantics::Ignore => present <= 1,
                }
            })
            .map(|(p, _)| p)
            .collect()
    }

    /// The relation over the attributes outside `dropped`, renumbered from 0.
    pub fn drop_columns(&self, dropped: &AttributeSet) -> Result<Relation> {
        self.check_set(dropped)?;
        let keep = self.schema.all().difference(dropped);
        if keep.is_empty() && !self.schema.is_empty() {
            return Err(Error::NothingLeft);
        }
        Ok(self.project_unchecked(&keep))
    }

    /// The relation over the attributes in `keep`, renumbered from 0.
    pub fn project(&self, keep: &AttributeSet) -> Result<Relation> {
        self.check_set(keep)?;
        Ok(self.project_unchecked(keep))
    }

    fn project_unchecked(&self, keep: &AttributeSet) -> Relation {
        if *keep == self.schema.all() {
            return self.clone();
        }
        let names = keep.iter().map(|p| self.schema.names[p].clone()).collect();
        Relation {
            schema: Schema { names },
            columns: keep.iter().map(|p| self.columns[p].clone()).collect(),
            row_count: self.row_count,
            origin: keep.iter().map(|p| self.origin[p]).collect(),
            source_names: Some(self.source_names().to_vec()),
        }
    }

    /// The relation made of the given rows, in the given order. Dictionaries
    /// are rebuilt so codes stay dense.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Relation> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.row_count) {
            return Err(Error::RowOutOfRange {
                row: bad,
                rows: self.row_count,
            });
        }
        let mut b = RelationBuilder::new(self.schema.names.clone())?;
        let mut cells = Vec::with_capacity(self.width());
        for &r in rows {
            cells.clear();
            cells.extend((0..self.width()).map(|p| self.value(r, p)));
            b.push(&cells)?;
        }
        let mut out = b.build();
        out.origin = self.origin.clone();
        out.source_names = self.source_names.clone();
        Ok(out)
    }

    /// Writes the relation as CSV with a header row; missing cells are written
    /// as `na_token`.
    pub fn write_csv<W: Write>(&self, writer: W, na_token: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.schema.names())?;
        for r in 0..self.row_count {
            w.write_record((0..self.width()).map(|p| self.value(r, p).unwrap_or(na_token)))?;
        }
        w.flush()?;
        Ok(())
    }
}
