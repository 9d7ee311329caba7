//! Discovery of independence statements in tabular data.
//!
//! A relation satisfies `X ⊥ Y` when every combination of an `X`-value and
//! a `Y`-value that occur in it also occurs together, i.e. when
//! `|r(XY)| = |r(X)| · |r(Y)|`. [`discover`] finds a minimal set of such
//! statements from which all others follow by shrinking sides, exactly or
//! for a ratio threshold `|r(XY)| / (|r(X)| · |r(Y)|) ≥ ε`.
//!
//! ```
//! use indep::{discover, fixtures, DiscoveryConfig};
//!
//! let r = fixtures::table1();
//! let report = discover(&r, &DiscoveryConfig::default());
//! let found: Vec<_> = report.cover.iter().map(|s| report.render(s)).collect();
//! assert_eq!(found, ["{education} ⊥ {relationship}"]);
//! ```

pub mod cover;
pub mod discovery;
pub mod error;
pub mod fixtures;
pub mod hardness;
pub mod oracle;
pub mod relation;

pub use cover::{Cover, SaturationBudget};
pub use discovery::{
    discover, validate, DiscoveryConfig, DiscoveryReport, IndependenceStatement, Threshold, ValidationResult,
};
pub use error::{Error, Result};
pub use relation::{load_csv, AttributeSet, LoadOptions, NaSemantics, Relation, Schema};
