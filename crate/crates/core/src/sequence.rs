//! Finite real sequences, their first differences, and the scalar
//! parameters shared by the classifiers.
//!
//! Sequences are indexed from 0 (`u_0, ..., u_{m-1}`); first differences are
//! indexed from 1 (`Δ_n = u_n - u_{n-1}` for `n = 1, ..., m-1`).

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty, finite-valued sequence `u_0, ..., u_{m-1}`.
///
/// Validation happens once, at construction: every entry is finite and the
/// length is at least one. The values cannot be mutated afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sequence {
    values: Vec<f64>,
}

impl Sequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// The sequence `-u`.
    pub fn negated(&self) -> Sequence {
        Sequence {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Applies `f` entrywise; fails if the image contains a non-finite value.
    pub fn map(&self, f: impl Fn(usize, f64) -> f64) -> Result<Sequence> {
        Sequence::new(self.values.iter().enumerate().map(|(n, &v)| f(n, v)).collect())
    }

    /// `max_n |u_n|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

impl Index<usize> for Sequence {
    type Output = f64;

    fn index(&self, n: usize) -> &f64 {
        &self.values[n]
    }
}

impl TryFrom<Vec<f64>> for Sequence {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sequence::new(values)
    }
}

impl From<Sequence> for Vec<f64> {
    fn from(seq: Sequence) -> Self {
        seq.values
    }
}

/// First differences `Δ_1, ..., Δ_{m-1}` of a sequence with `m >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSequence {
    values: Vec<f64>,
}

impl DeltaSequence {
    /// Number of differences, `m - 1`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Δ_n` for `1 <= n <= m - 1`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|k| self.values.get(k).copied())
    }

    /// Differences in order, `values()[k]` being `Δ_{k+1}`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True when `Δ_n <= Δ_{n+1} + tol` for every consecutive pair.
    pub fn is_nondecreasing(&self, tol: Tolerance) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1] + tol.value())
    }

    /// Prefix sums starting from `first`: `u_n = u_0 + Σ_{k<=n} Δ_k`.
    pub fn reconstruct(&self, first: f64) -> Result<Sequence> {
        let mut values = Vec::with_capacity(self.values.len() + 1);
        values.push(first);
        let mut acc = first;
        for d in &self.values {
            acc += d;
            values.push(acc);
        }
        Sequence::new(values)
    }
}

/// `Δ_n = u_n - u_{n-1}` for `n = 1, ..., m-1`.
pub fn deltas(u: &Sequence) -> Result<DeltaSequence> {
    if u.len() < 2 {
        return Err(Error::TooShort(u.len()));
    }
    Ok(DeltaSequence {
        values: raw_deltas(u.values()),
    })
}

pub(crate) fn raw_deltas(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Returns `(min_k a_k/b_k, max_k a_k/b_k)`.
///
/// For positive denominators the mediant `Σa / Σb` always lies between the
/// two returned values.
pub fn mediant_bounds(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRatios);
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if let Some((index, &value)) = a.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    if let Some((index, &value)) = b.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::NonPositiveDenominator { index, value });
    }
    let (low, high) = a
        .iter()
        .zip(b)
        .map(|(x, y)| x / y)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        });
    Ok((low, high))
}

/// Nonnegative slack parameter ε.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Epsilon(f64);

impl Epsilon {
    pub const ZERO: Epsilon = Epsilon(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Epsilon(value))
        } else {
            Err(Error::InvalidEpsilon(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Epsilon::new(value)
    }
}

impl From<Epsilon> for f64 {
    fn from(eps: Epsilon) -> f64 {
        eps.0
    }
}

/// Absolute comparison tolerance τ, added on the permissive side of every
/// inequality a predicate tests.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);
    pub const EXACT: Tolerance = Tolerance(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Tolerance(value))
        } else {
            Err(Error::InvalidTolerance(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

impl TryFrom<f64> for Tolerance {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Tolerance::new(value)
    }
}

impl From<Tolerance> for f64 {
    fn from(tol: Tolerance) -> f64 {
        tol.0
    }
}

/// How the index `n ∈ ]i, j]` in the ε-convexity inequality
/// `Δ_i <= Δ_j + ε/(n - i)` is quantified.
///
/// `Exists` needs one admissible `n`, which reduces to `n = i + 1` (the
/// largest slack). `Forall` needs every `n`, which reduces to `n = j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantifierMode {
    #[default]
    Exists,
    Forall,
}

impl QuantifierMode {
    pub const ALL: [QuantifierMode; 2] = [QuantifierMode::Exists, QuantifierMode::Forall];

    /// The index `n` that decides the pair `(i, j)` under this mode.
    pub fn deciding_index(self, i: usize, j: usize) -> usize {
        match self {
            QuantifierMode::Exists => i + 1,
            QuantifierMode::Forall => j,
        }
    }

    /// Multiplier `n - i` of the deciding index.
    pub(crate) fn weight(self, i: usize, j: usize) -> f64 {
        (self.deciding_index(i, j) - i) as f64
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuantifierMode::Exists => "exists",
            QuantifierMode::Forall => "forall",
        }
    }
}

impl fmt::Display for QuantifierMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuantifierMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "exists" => Ok(QuantifierMode::Exists),
            "forall" => Ok(QuantifierMode::Forall),
            other => Err(format!(
                "unknown quantifier mode '{other}' (expected exists|forall)"
            )),
        }
    }
}
