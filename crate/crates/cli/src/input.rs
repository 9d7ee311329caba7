use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use indep::relation::default_na_markers;
use indep::{load_csv, DiscoveryConfig, LoadOptions, NaSemantics, Relation, Threshold};
use serde::Serialize;

/// Where the relation comes from and how to read it.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file, or `-` for standard input.
    pub input: PathBuf,

    /// Cell values read as missing, comma separated. Defaults to the empty
    /// field and `?`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub na_markers: Option<Vec<String>>,

    /// Field delimiter: a single character, or `tab`.
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,

    /// The first line is data; attributes are named 1, 2, ...
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputManifest {
    pub path: String,
    pub has_header: bool,
    pub delimiter: String,
    pub na_markers: Vec<String>,
}

impl InputArgs {
    pub fn options(&self) -> LoadOptions {
        LoadOptions {
            has_header: !self.no_header,
            na_markers: match &self.na_markers {
                Some(m) => m.iter().cloned().collect(),
                None => default_na_markers(),
            },
            delimiter: self.delimiter,
        }
    }

    pub fn load(&self) -> Result<Relation> {
        let options = self.options();
        let relation = if self.input.as_os_str() == "-" {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).context("reading standard input")?;
            load_csv(buf.as_slice(), &options)
        } else {
            let file = File::open(&self.input).with_context(|| format!("opening {}", self.input.display()))?;
            load_csv(BufReader::new(file), &options)
        };
        let relation = relation.with_context(|| format!("reading {}", self.input.display()))?;
        log::info!(
            "loaded {} rows x {} columns from {}",
            relation.row_count(),
            relation.width(),
            self.input.display()
        );
        Ok(relation)
    }

    pub fn manifest(&self) -> InputManifest {
        let options = self.options();
        InputManifest {
            path: self.input.display().to_string(),
            has_header: options.has_header,
            delimiter: (options.delimiter as char).to_string(),
            na_markers: options.na_markers.into_iter().collect(),
        }
    }
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("expected a single ASCII character or `tab`, got `{s}`")),
    }
}

pub fn parse_threshold(s: &str) -> Result<Threshold, String> {
    s.parse::<Threshold>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NaArg {
    Value,
    Ignore,
}

impl From<NaArg> for NaSemantics {
    fn from(a: NaArg) -> Self {
        match a {
            NaArg::Value => NaSemantics::Value,
            NaArg::Ignore => NaSemantics::Ignore,
        }
    }
}

/// Search options shared by every command that runs discovery.
#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Missing-value semantics.
    #[arg(long, value_enum, default_value = "value")]
    pub na: NaArg,

    /// Search constant columns too instead of dropping them first.
    #[arg(long)]
    pub keep_constant_columns: bool,

    /// Stop after this arity.
    #[arg(long)]
    pub max_arity: Option<usize>,

    /// Validate every statement of every arity instead of filtering by
    /// predecessors.
    #[arg(long)]
    pub no_prune: bool,
}

impl SearchArgs {
    pub fn config(&self, epsilon: Threshold) -> DiscoveryConfig {
        DiscoveryConfig {
            epsilon,
            na: self.na.into(),
            max_arity: self.max_arity,
            keep_constant_columns: self.keep_constant_columns,
            prune: !self.no_prune,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.max_arity.is_some_and(|a| a < 2) {
            bail!("--max-arity must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Standard output, or a file when `path` is given.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
