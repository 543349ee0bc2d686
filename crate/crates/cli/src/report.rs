//! The JSON report written to standard output, and the TSV plot data.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use seqconvex_core::extend::SampledVerdict;
use seqconvex_core::verify::SuiteReport;
use seqconvex_core::{Certificate, Decomposition, QuantifierMode, Sequence, Verdict};

use crate::input::InputDigest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<QuantifierMode>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<NamedVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps_min: Vec<NamedEpsMin>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<NamedDecomposition>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    /// Wall-clock milliseconds; omitted with `--no-timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, tolerance: f64) -> Self {
        Self {
            tool: "seqconvex".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input: None,
            mode: None,
            tolerance,
            verdicts: Vec::new(),
            eps_min: Vec::new(),
            decompositions: Vec::new(),
            failures: Vec::new(),
            extension: None,
            verification: None,
            timing_ms: None,
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// Every certificate the report carries.
    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.verdicts
            .iter()
            .filter_map(|v| v.verdict.certificate.as_ref())
            .chain(self.eps_min.iter().filter_map(|e| e.tight.as_ref()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedEpsMin {
    pub class: String,
    pub mode: QuantifierMode,
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tight: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedDecomposition {
    pub target: String,
    #[serde(flatten)]
    pub decomposition: Decomposition,
}

/// A requested computation that could not be certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub target: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional_check: Option<SampledVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub rng: String,
    pub results: Vec<SuiteReport>,
}

/// Columns `n  u_n  structured_n  residual_n`, tab separated, with a header.
pub fn write_plot_data(out: &mut dyn Write, u: &Sequence, d: &Decomposition) -> io::Result<()> {
    writeln!(out, "n\tu_n\tstructured_n\tresidual_n")?;
    for (n, ((x, s), r)) in u
        .iter()
        .zip(d.structured.iter())
        .zip(d.residual.iter())
        .enumerate()
    {
        writeln!(out, "{n}\t{x}\t{s}\t{r}")?;
    }
    Ok(())
}
