//! Small fixed relations used in documentation and tests.

use crate::relation::{load_csv, LoadOptions, Relation};

/// Four census rows over age, education, relationship, race and sex.
pub const TABLE1_CSV: &str = "age,education,relationship,race,sex\n\
39,bachelors,not-in-family,white,male\n\
50,bachelors,husband,white,male\n\
38,hs-grad,not-in-family,white,male\n\
34,hs-grad,husband,white,female\n";

pub fn table1() -> Relation {
    load_csv(TABLE1_CSV.as_bytes(), &LoadOptions::default()).expect("fixture parses")
}
