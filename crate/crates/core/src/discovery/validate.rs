use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact threshold `num / den` in `[0, 1]`, kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub const ONE: Threshold = Threshold { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidThreshold(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Threshold {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_exact(&self) -> bool {
        self.num == self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::ONE
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Accepts decimals (`1`, `0.6`, `.612`) and fractions (`3/5`).
impl FromStr for Threshold {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidThreshold(text.to_string());
        let t = text.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = n.trim().parse::<u64>().map_err(|_| bad())?;
            let d = d.trim().parse::<u64>().map_err(|_| bad())?;
            return Threshold::new(n, d).map_err(|_| bad());
        }
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Threshold::new(num, den).map_err(|_| bad())
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Projection sizes behind one validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Counts {
    pub left: u64,
    pub right: u64,
    pub joint: u64,
    /// Rows the counts were taken over.
    pub rows: u64,
}

/// The independence ratio `|r(XY)| / (|r(X)| · |r(Y)|)`, unreduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: u64,
    pub den: u128,
}

impl Ratio {
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Fixed six-digit decimal rendering, truncated toward zero.
    pub fn to_decimal(&self) -> String {
        if self.den == 0 {
            return "1.000000".into();
        }
        let scaled = BigUint::from(self.num) * BigUint::from(1_000_000u32) / BigUint::from(self.den);
        let scaled: u128 = scaled.try_into().unwrap_or(u128::MAX);
        format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationResult {
    pub valid: bool,
    pub ratio: Ratio,
    pub counts: Counts,
    /// No row was left to check the statement on.
    pub vacuous: bool,
}

impl ValidationResult {
    pub fn from_counts(counts: Counts, epsilon: Threshold) -> Self {
        if counts.rows == 0 {
            return ValidationResult {
                valid: true,
                ratio: Ratio { num: 1, den: 1 },
                counts,
                vacuous: true,
            };
        }
        ValidationResult {
            valid: meets_threshold(counts.joint, counts.left, counts.right, epsilon),
            ratio: Ratio {
                num: counts.joint,
                den: counts.left as u128 * counts.right as u128,
            },
            counts,
            vacuous: false,
        }
    }
}

/// `joint / (left · right) ≥ epsilon`, decided by integer cross-multiplication.
pub fn meets_threshold(joint: u64, left: u64, right: u64, epsilon: Threshold) -> bool {
    let lhs = joint as u128 * epsilon.den as u128;
    let product = left as u128 * right as u128;
    match product.checked_mul(epsilon.num as u128) {
        Some(rhs) => lhs >= rhs,
        None => BigUint::from(lhs) >= BigUint::from(product) * BigUint::from(epsilon.num),
    }
}
