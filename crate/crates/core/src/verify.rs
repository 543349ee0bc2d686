//! Seeded property sweeps over the stability bounds and the Wright
//! equivalence. Trials run in parallel; results are merged in trial order,
//! so a report depends only on `(suite, seed, trials)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{is_convex, is_wright_convex, min_eps_affine};
use crate::decompose::{affine_approx, convex_approx_hyers};
use crate::error::Error;
use crate::oracle::{generate, trial_rng, Family, GeneratorSpec};
use crate::sequence::{mediant_bounds, QuantifierMode, Sequence, Tolerance};

/// Slack allowed on the stability bounds.
pub const BOUND_SLACK: f64 = 1e-9;
/// Slack allowed on the mediant sandwich.
pub const MEDIANT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Thm09,
    Thm10,
    Thm11,
    Lemma22,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "thm09" => Ok(Suite::Thm09),
            "thm10" => Ok(Suite::Thm10),
            "thm11" => Ok(Suite::Thm11),
            "lemma22" => Ok(Suite::Lemma22),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite '{other}' (expected thm09|thm10|thm11|lemma22|all)"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Thm09 => "thm09",
            Suite::Thm10 => "thm10",
            Suite::Thm11 => "thm11",
            Suite::Lemma22 => "lemma22",
            Suite::All => "all",
        })
    }
}

/// Aggregate of one property over all trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub property: String,
    pub seed: u64,
    pub trials: u64,
    /// Trials where the property was evaluated and held.
    pub passed: u64,
    pub violations: u64,
    /// Trials where the property's premise did not hold.
    pub skipped: u64,
    pub first_violation: Option<u64>,
    /// Largest `observed - allowed` over evaluated trials; `<= 0` when all pass.
    pub max_excess: Option<f64>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// Evaluated; `excess = observed - allowed`.
    Checked {
        excess: f64,
    },
    Skipped,
}

fn aggregate(name: &str, property: &str, seed: u64, outcomes: &[Outcome]) -> SuiteReport {
    let mut r = SuiteReport {
        name: name.to_string(),
        property: property.to_string(),
        seed,
        trials: outcomes.len() as u64,
        passed: 0,
        violations: 0,
        skipped: 0,
        first_violation: None,
        max_excess: None,
    };
    for (t, o) in outcomes.iter().enumerate() {
        match *o {
            Outcome::Skipped => r.skipped += 1,
            Outcome::Checked { excess } => {
                r.max_excess = Some(r.max_excess.map_or(excess, |m: f64| m.max(excess)));
                if excess > 0.0 {
                    r.violations += 1;
                    r.first_violation.get_or_insert(t as u64);
                } else {
                    r.passed += 1;
                }
            }
        }
    }
    r
}

fn run_trials<T: Send>(trials: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..trials).into_par_iter().map(f).collect()
}

/// Sequence for trial `t`: a length drawn from `lengths` and a family
/// chosen by `family(t, rng)`.
fn trial_sequence(
    seed: u64,
    t: u64,
    lengths: std::ops::RangeInclusive<usize>,
    family: impl Fn(u64, &mut rand_chacha::ChaCha8Rng) -> Family,
) -> Sequence {
    let mut rng = trial_rng(seed, t);
    let length = rng.random_range(lengths);
    let family = family(t, &mut rng);
    generate(GeneratorSpec {
        seed: rng.random(),
        length,
        family,
    })
    .expect("lengths start at 1")
}

pub fn thm09_sequence(seed: u64, t: u64) -> Sequence {
    trial_sequence(seed, t, 1..=30, |t, _| match t % 3 {
        0 => Family::RandomUniform,
        1 => Family::ConvexPlusNoise { eps: 0.0 },
        _ => Family::ConvexPlusNoise { eps: 1e-3 },
    })
}

pub fn thm10_sequence(seed: u64, t: u64) -> Sequence {
    trial_sequence(seed, t, 2..=100, |t, rng| {
        if t % 2 == 0 {
            Family::ConvexPlusNoise {
                eps: rng.random_range(0.0..1.0),
            }
        } else {
            Family::RandomUniform
        }
    })
}

pub fn thm11_sequence(seed: u64, t: u64) -> Sequence {
    trial_sequence(seed, t, 1..=100, |t, rng| {
        if t % 2 == 0 {
            Family::ArithmeticPlusNoise {
                eps: rng.random_range(0.0..1.0),
            }
        } else {
            Family::RandomUniform
        }
    })
}

/// Wright convexity agrees with convexity.
pub fn thm09(seed: u64, trials: u64, tol: Tolerance) -> SuiteReport {
    let outcomes = run_trials(trials, |t| {
        let u = thm09_sequence(seed, t);
        let agree = is_wright_convex(&u, tol).holds == is_convex(&u, tol).holds;
        Outcome::Checked {
            excess: if agree { 0.0 } else { 1.0 },
        }
    });
    aggregate("thm09", "is_wright_convex == is_convex", seed, &outcomes)
}

/// Residual of `gcm(u) + ε/2` within `±ε/2`, per quantifier mode. Trials
/// where `u - gcm(u) > ε` are counted as skipped.
pub fn thm10(seed: u64, trials: u64, tol: Tolerance) -> Vec<SuiteReport> {
    let per_trial = run_trials(trials, |t| {
        let u = thm10_sequence(seed, t);
        QuantifierMode::ALL.map(|mode| thm10_outcome(&u, mode, tol))
    });
    QuantifierMode::ALL
        .iter()
        .enumerate()
        .map(|(k, mode)| {
            let outcomes: Vec<Outcome> = per_trial.iter().map(|o| o[k]).collect();
            aggregate(
                &format!("thm10-{mode}"),
                "|u - (gcm(u) + eps/2)| <= eps/2, eps = min_eps_convex",
                seed,
                &outcomes,
            )
        })
        .collect()
}

pub fn thm10_outcome(u: &Sequence, mode: QuantifierMode, tol: Tolerance) -> Outcome {
    match convex_approx_hyers(u, mode, tol) {
        Ok(d) => {
            let half = d.eps.unwrap_or(0.0);
            Outcome::Checked {
                excess: d.bound - (half + BOUND_SLACK),
            }
        }
        Err(Error::GapExceeded { .. }) => Outcome::Skipped,
        Err(_) => Outcome::Checked {
            excess: f64::INFINITY,
        },
    }
}

/// Chebyshev line within `min_eps_affine(u, Exists)`.
pub fn thm11(seed: u64, trials: u64) -> SuiteReport {
    let outcomes = run_trials(trials, |t| {
        let u = thm11_sequence(seed, t);
        let d = affine_approx(&u);
        let eps = min_eps_affine(&u, QuantifierMode::Exists).eps;
        Outcome::Checked {
            excess: d.bound - (eps + BOUND_SLACK),
        }
    });
    aggregate(
        "thm11",
        "affine_approx.bound <= min_eps_affine(u, exists)",
        seed,
        &outcomes,
    )
}

/// Random `(a, b)` with `b > 0` for trial `t`.
pub fn lemma22_input(seed: u64, t: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = trial_rng(seed, t);
    let k = rng.random_range(1..=20);
    let a = (0..k).map(|_| rng.random_range(-10.0..=10.0)).collect();
    let b = (0..k).map(|_| rng.random_range(1e-3..=10.0)).collect();
    (a, b)
}

/// `min a_k/b_k <= Σa/Σb <= max a_k/b_k`.
pub fn lemma22(seed: u64, trials: u64) -> SuiteReport {
    let outcomes = run_trials(trials, |t| {
        let (a, b) = lemma22_input(seed, t);
        let (lo, hi) = mediant_bounds(&a, &b).expect("valid by construction");
        let mediant = a.iter().sum::<f64>() / b.iter().sum::<f64>();
        Outcome::Checked {
            excess: (lo - mediant).max(mediant - hi) - MEDIANT_SLACK,
        }
    });
    aggregate("lemma22", "min a/b <= sum a / sum b <= max a/b", seed, &outcomes)
}

pub fn run_suite(suite: Suite, seed: u64, trials: u64, tol: Tolerance) -> Vec<SuiteReport> {
    match suite {
        Suite::Thm09 => vec![thm09(seed, trials, tol)],
        Suite::Thm10 => thm10(seed, trials, tol),
        Suite::Thm11 => vec![thm11(seed, trials)],
        Suite::Lemma22 => vec![lemma22(seed, trials)],
        Suite::All => [Suite::Thm09, Suite::Thm10, Suite::Thm11, Suite::Lemma22]
            .into_iter()
            .flat_map(|s| run_suite(s, seed, trials, tol))
            .collect(),
    }
}
