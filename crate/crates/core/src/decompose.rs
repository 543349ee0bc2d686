//! Constructive decompositions `u = structured + residual`.
//!
//! * [`gcm`]: greatest convex minorant sampled at the integers.
//! * [`convex_approx_hyers`]: `gcm(u) + ε/2`, residual within `±ε/2` for
//!   ε the minimal ε-convexity slack.
//! * [`convex_approx_optimal`]: the best uniform convex fit.
//! * [`affine_approx`]: the best uniform arithmetic fit (Chebyshev line).
//! * [`separating_line`] and [`affine_approx_by_separation`]: a line
//!   squeezed between a concave lower and a convex upper envelope.

use serde::{Deserialize, Serialize};

use crate::classify::{min_eps_affine, min_eps_convex};
use crate::error::{Error, Result};
use crate::sequence::{raw_deltas, QuantifierMode, Sequence, Tolerance};

/// `A(x) = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// `A(0), ..., A(len-1)`.
    pub fn sample(&self, len: usize) -> Vec<f64> {
        (0..len).map(|n| self.eval(n as f64)).collect()
    }
}

/// `u = structured + residual` with `bound = max_n |residual_n|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub structured: Sequence,
    pub residual: Sequence,
    pub bound: f64,
    /// The arithmetic part as a line, for affine decompositions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<Line>,
    /// The ε the bound is guaranteed against, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

impl Decomposition {
    fn from_structured(u: &Sequence, structured: Vec<f64>) -> Result<Self> {
        let residual: Vec<f64> = u.iter().zip(&structured).map(|(a, b)| a - b).collect();
        let structured = Sequence::new(structured)?;
        let residual = Sequence::new(residual)?;
        let bound = residual.sup_norm();
        Ok(Self {
            structured,
            residual,
            bound,
            line: None,
            eps: None,
        })
    }

    /// `eps - bound` when an ε is attached; negative means the bound exceeds it.
    pub fn slack(&self) -> Option<f64> {
        self.eps.map(|e| e - self.bound)
    }

    /// Largest `|structured_n + residual_n - u_n|`.
    pub fn reconstruction_error(&self, u: &Sequence) -> f64 {
        self.structured
            .iter()
            .zip(self.residual.iter())
            .zip(u.iter())
            .map(|((s, r), x)| (s + r - x).abs())
            .fold(0.0, f64::max)
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertex indices of the lower convex hull of `(n, v_n)`, left to right.
fn lower_hull(v: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(v.len());
    for n in 0..v.len() {
        let p = (n as f64, v[n]);
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if cross((a as f64, v[a]), (b as f64, v[b]), p) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(n);
    }
    hull
}

/// Greatest convex minorant of `u`, sampled at `n = 0, ..., m-1`.
///
/// Monotone-chain lower hull of the points `(n, u_n)` followed by chord
/// interpolation between consecutive hull vertices. O(m).
pub fn gcm(u: &Sequence) -> Sequence {
    let v = u.values();
    let hull = lower_hull(v);
    let mut out = Vec::with_capacity(v.len());
    out.push(v[0]);
    for seg in hull.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let width = (b - a) as f64;
        for n in (a + 1)..=b {
            if n == b {
                out.push(v[b]);
            } else {
                out.push(((b - n) as f64 * v[a] + (n - a) as f64 * v[b]) / width);
            }
        }
    }
    Sequence::new(out).expect("convex combinations of finite values are finite")
}

/// Least concave majorant, `-gcm(-u)`.
pub fn lcm(u: &Sequence) -> Sequence {
    gcm(&u.negated()).negated()
}

/// Index and value of `max_n (u_n - g_n)`.
fn max_gap(u: &Sequence, g: &Sequence) -> (usize, f64) {
    u.iter()
        .zip(g.iter())
        .map(|(a, b)| a - b)
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |best, (n, gap)| if gap > best.1 { (n, gap) } else { best },
        )
}

/// Convex part `v = gcm(u) + ε/2` with `ε = min_eps_convex(u, mode)`.
///
/// The residual `u - v` lies in `[-ε/2, ε/2]` exactly when
/// `u - gcm(u) <= ε`. Under [`QuantifierMode::Forall`] that gap condition
/// always holds; under [`QuantifierMode::Exists`] it can fail, and the
/// function returns [`Error::GapExceeded`] at the worst index.
pub fn convex_approx_hyers(u: &Sequence, mode: QuantifierMode, tol: Tolerance) -> Result<Decomposition> {
    let eps = min_eps_convex(u, mode).eps;
    let g = gcm(u);
    let (index, gap) = max_gap(u, &g);
    if gap > eps + tol.value() {
        return Err(Error::GapExceeded { index, gap, eps });
    }
    let half = eps / 2.0;
    let structured = g.iter().map(|x| x + half).collect();
    let mut d = Decomposition::from_structured(u, structured)?;
    d.eps = Some(half);
    Ok(d)
}

/// Best uniform convex approximant `gcm(u) + t*`,
/// `t* = max_n (u_n - gcm(u)_n) / 2`.
///
/// Any convex `v` with `|u - v| <= t` lies below `u + t`, hence below
/// `gcm(u) + t`, so `u - gcm(u) <= 2t`; `t*` is therefore optimal.
pub fn convex_approx_optimal(u: &Sequence) -> Decomposition {
    let g = gcm(u);
    let t = max_gap(u, &g).1.max(0.0) / 2.0;
    let structured = g.iter().map(|x| x + t).collect();
    Decomposition::from_structured(u, structured).expect("finite inputs give finite decomposition")
}

/// Vertical width `max_n (u_n - s·n) - min_n (u_n - s·n)`.
fn width(v: &[f64], slope: f64) -> f64 {
    let (lo, hi) = band(v, slope);
    hi - lo
}

fn band(v: &[f64], slope: f64) -> (f64, f64) {
    v.iter()
        .enumerate()
        .map(|(n, x)| x - slope * n as f64)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

const GOLDEN_TOL: f64 = 1e-10;
const GOLDEN_MAX_ITER: usize = 500;

/// Golden-section minimisation of a unimodal `f` over `[a, b]`.
fn golden_section(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= GOLDEN_TOL {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // A flat minimum can leave the midpoint marginally worse than a probe.
    [(mid, f(mid)), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(s, _)| s)
        .unwrap_or(mid)
}

/// Best uniform arithmetic approximant `a_n = slope·n + intercept`.
///
/// The slope minimises the convex width function over `[min Δ, max Δ]`
/// by golden-section search to 1e-10; the intercept centres the remaining
/// band. `eps` is set to `min_eps_affine(u, Exists)` for comparison.
pub fn affine_approx(u: &Sequence) -> Decomposition {
    let v = u.values();
    let slope = if v.len() < 2 {
        0.0
    } else {
        let d = raw_deltas(v);
        let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            lo
        } else {
            golden_section(lo, hi, |s| width(v, s))
        }
    };
    let (lo, hi) = band(v, slope);
    let line = Line {
        slope,
        intercept: 0.5 * (lo + hi),
    };
    let mut d = Decomposition::from_structured(u, line.sample(v.len()))
        .expect("finite inputs give finite decomposition");
    d.line = Some(line);
    d.eps = Some(min_eps_affine(u, QuantifierMode::Exists).eps);
    d
}

/// A line with `lower_n <= A(n) <= upper_n` (within `tol`) at every index.
///
/// Solves the two-variable feasibility problem directly: the admissible
/// slopes form `[s_lo, s_hi]` with
/// `s_lo = max_{i>j} (lower_i - upper_j)/(i - j)` and
/// `s_hi = min_{i<j} (upper_j - lower_i)/(j - i)`. The slope is the midpoint
/// of that interval and the intercept the midpoint of the intercept band.
/// O(m²).
pub fn separating_line(lower: &Sequence, upper: &Sequence, tol: Tolerance) -> Result<Line> {
    if lower.len() != upper.len() {
        return Err(Error::LengthMismatch {
            left: lower.len(),
            right: upper.len(),
        });
    }
    let (lo, up) = (lower.values(), upper.values());
    let mut s_lo = f64::NEG_INFINITY;
    let mut s_hi = f64::INFINITY;
    for (i, &l) in lo.iter().enumerate() {
        for (j, &h) in up.iter().enumerate() {
            if i > j {
                s_lo = s_lo.max((l - h) / (i - j) as f64);
            } else if i < j {
                s_hi = s_hi.min((h - l) / (j - i) as f64);
            }
        }
    }
    let slope = match (s_lo.is_finite(), s_hi.is_finite()) {
        (true, true) => 0.5 * (s_lo + s_hi),
        _ => 0.0, // single point
    };

    let shifted =
        |v: &[f64]| -> Vec<f64> { v.iter().enumerate().map(|(n, x)| x - slope * n as f64).collect() };
    let lo_s = shifted(lo);
    let up_s = shifted(up);
    let (lower_index, c_lo) =
        lo_s.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |b, (n, x)| if x > b.1 { (n, x) } else { b },
        );
    let (upper_index, c_hi) = up_s
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (n, x)| if x < b.1 { (n, x) } else { b });
    if c_lo > c_hi + tol.value() {
        return Err(Error::NoSeparatingLine {
            lower_index,
            upper_index,
            overlap: c_lo - c_hi,
        });
    }
    Ok(Line {
        slope,
        intercept: 0.5 * (c_lo + c_hi),
    })
}

/// The separation-based affine approximant.
///
/// With `ε = min_eps_affine(u, mode)`, the convex approximant
/// `C⁺ = gcm(u) + ε/2` and the concave approximant `C⁻ = lcm(u) - ε/2`
/// both stay within `ε/2` of `u`, so `C⁻ - ε/2 <= u <= C⁺ + ε/2`. A line
/// separating `C⁻ - ε/2` from `C⁺ + ε/2` is then within `ε` of `u`.
///
/// Fails with [`Error::GapExceeded`] when either `u - gcm(u)` or
/// `lcm(u) - u` exceeds ε, in which case the two approximants are not
/// certified.
pub fn affine_approx_by_separation(u: &Sequence, mode: QuantifierMode, tol: Tolerance) -> Result<Separation> {
    let eps = min_eps_affine(u, mode).eps;
    let g = gcm(u);
    let l = lcm(u);
    let (index, gap) = max_gap(u, &g);
    if gap > eps + tol.value() {
        return Err(Error::GapExceeded { index, gap, eps });
    }
    let (index, gap) = max_gap(&l, u);
    if gap > eps + tol.value() {
        return Err(Error::GapExceeded { index, gap, eps });
    }
    let lower = l.map(|_, x| x - eps)?;
    let upper = g.map(|_, x| x + eps)?;
    let line = separating_line(&lower, &upper, tol)?;
    let mut decomposition = Decomposition::from_structured(u, line.sample(u.len()))?;
    decomposition.line = Some(line);
    decomposition.eps = Some(eps);
    Ok(Separation {
        lower,
        upper,
        decomposition,
    })
}

/// Result of [`affine_approx_by_separation`]: the two envelopes and the
/// decomposition induced by the separating line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    /// `lcm(u) - ε`, concave.
    pub lower: Sequence,
    /// `gcm(u) + ε`, convex.
    pub upper: Sequence,
    pub decomposition: Decomposition,
}
