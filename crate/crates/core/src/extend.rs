//! Piecewise-linear extension of a sequence to `[0, m-1]` and sampled checks
//! of the functional ε-convexity criterion on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{Epsilon, Sequence, Tolerance};

/// Spans shorter than this are treated as degenerate.
pub const MIN_SPAN: f64 = 1e-12;

/// The chord interpolant through `(n, u_n)`, `n = 0, ..., m-1`.
///
/// On `[n-1, n]` it is `t·u_{n-1} + (1-t)·u_n` with `t = n - x`. Integer
/// abscissae use their own knot as `n` (so `t = 0`), and `x = 0` uses the
/// segment `[0, 1]` with `t = 1`; both give the knot value exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Sequence,
}

impl PiecewiseLinear {
    pub fn new(knots: Sequence) -> Self {
        Self { knots }
    }

    pub fn knots(&self) -> &Sequence {
        &self.knots
    }

    /// Right end of the domain, `m - 1`.
    pub fn upper(&self) -> f64 {
        (self.knots.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let upper = self.upper();
        if !(0.0..=upper).contains(&x) {
            return Err(Error::OutOfDomain { x, upper });
        }
        let u = self.knots.values();
        if u.len() == 1 {
            return Ok(u[0]);
        }
        let n = (x.ceil() as usize).max(1);
        let t = n as f64 - x;
        Ok(t * u[n - 1] + (1.0 - t) * u[n])
    }

    /// Knot slope `f(n+1) - f(n)` for `0 <= n <= m-2`.
    fn knot_slope(&self, n: usize) -> f64 {
        self.knots[n + 1] - self.knots[n]
    }
}

/// Which triples `x < u < y` to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Every triple of integer knots.
    pub knot_triples: bool,
    /// Number of uniformly drawn real triples.
    pub random_triples: usize,
    pub seed: u64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self {
            knot_triples: true,
            random_triples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleCertificate {
    pub x: f64,
    pub u: f64,
    pub y: f64,
    pub eps: f64,
    /// `(f(y) - f(u) + ε)/(y - u) - (f(u) - f(x) - ε)/(u - x)`.
    pub margin: f64,
}

/// Outcome of a sampled verification. `holds` is a proof of failure when
/// false, and only evidence when true.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledVerdict {
    pub holds: bool,
    /// Worst triple seen; a violation whenever `holds` is false.
    pub worst: Option<TripleCertificate>,
    pub checked: usize,
    /// Triples with `u - x` or `y - u` below [`MIN_SPAN`].
    pub skipped: usize,
}

/// Signed slack of `(f(u)-f(x)-ε)/(u-x) <= (f(y)-f(u)+ε)/(y-u)`.
pub fn triple_margin(f: &PiecewiseLinear, eps: Epsilon, x: f64, u: f64, y: f64) -> Result<f64> {
    let (fx, fu, fy) = (f.eval(x)?, f.eval(u)?, f.eval(y)?);
    let e = eps.value();
    Ok((fy - fu + e) / (y - u) - (fu - fx - e) / (u - x))
}

/// Checks the three-point ε-convexity criterion on the triples of `plan`.
pub fn check_eps_convex_function(
    f: &PiecewiseLinear,
    eps: Epsilon,
    plan: SamplePlan,
    tol: Tolerance,
) -> SampledVerdict {
    let mut checked = 0;
    let mut skipped = 0;
    let mut worst: Option<TripleCertificate> = None;
    let mut visit = |x: f64, u: f64, y: f64| {
        if u - x < MIN_SPAN || y - u < MIN_SPAN {
            skipped += 1;
            return;
        }
        // Points come from the domain, so evaluation cannot fail.
        let Ok(margin) = triple_margin(f, eps, x, u, y) else {
            skipped += 1;
            return;
        };
        checked += 1;
        if worst.is_none_or(|w| margin < w.margin) {
            worst = Some(TripleCertificate {
                x,
                u,
                y,
                eps: eps.value(),
                margin,
            });
        }
    };

    let m = f.knots().len();
    if plan.knot_triples {
        for a in 0..m {
            for b in (a + 1)..m {
                for c in (b + 1)..m {
                    visit(a as f64, b as f64, c as f64);
                }
            }
        }
    }
    if m > 1 {
        let upper = f.upper();
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        for _ in 0..plan.random_triples {
            let mut t = [
                rng.random_range(0.0..=upper),
                rng.random_range(0.0..=upper),
                rng.random_range(0.0..=upper),
            ];
            t.sort_by(f64::total_cmp);
            visit(t[0], t[1], t[2]);
        }
    }

    SampledVerdict {
        holds: worst.is_none_or(|w| w.margin >= -tol.value()),
        worst,
        checked,
        skipped,
    }
}

/// Both chord-slope bounds for a span `x < y`, with `x ∈ [n1, n1+1]` and
/// `y ∈ [n2-1, n2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordSlopeCheck {
    pub n1: usize,
    pub n2: usize,
    /// `(f(y) - f(x) - ε)/(y - x)`.
    pub upper_lhs: f64,
    /// `max_{n1 <= n < n2} (f(n+1) - f(n)) - ε/(n2 - n1)`.
    pub upper_bound: f64,
    /// `min_{n1 <= n < n2} (f(n+1) - f(n)) + ε/(y - x)`.
    pub lower_bound: f64,
    /// `(f(y) - f(x) + ε)/(y - x)`.
    pub lower_rhs: f64,
    pub holds: bool,
}

/// Verifies `upper_lhs <= upper_bound` and `lower_bound <= lower_rhs` (each
/// within `tol`): the ε-adjusted chord slope over `[x, y]` is bracketed by
/// the knot slopes of the segments it crosses.
pub fn check_chord_slope_bounds(
    f: &PiecewiseLinear,
    eps: Epsilon,
    x: f64,
    y: f64,
    tol: Tolerance,
) -> Result<ChordSlopeCheck> {
    let (fx, fy) = (f.eval(x)?, f.eval(y)?);
    let span = y - x;
    if span < MIN_SPAN {
        return Err(Error::DegenerateSpan(span));
    }
    let last = f.knots().len() - 1;
    let n1 = (x.floor() as usize).min(last - 1);
    let n2 = (y.ceil() as usize).max(n1 + 1);
    let (lo, hi) = (n1..n2)
        .map(|n| f.knot_slope(n))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s), hi.max(s))
        });

    let e = eps.value();
    let upper_lhs = (fy - fx - e) / span;
    let upper_bound = hi - e / (n2 - n1) as f64;
    let lower_bound = lo + e / span;
    let lower_rhs = (fy - fx + e) / span;
    let t = tol.value();
    Ok(ChordSlopeCheck {
        n1,
        n2,
        upper_lhs,
        upper_bound,
        lower_bound,
        lower_rhs,
        holds: upper_lhs <= upper_bound + t && lower_bound <= lower_rhs + t,
    })
}
