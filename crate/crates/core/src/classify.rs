//! Decision procedures for convex, ε-convex, ε-affine and Wright-convex
//! sequences, plus the exact minimal ε for the two approximate classes.
//!
//! Every negative verdict carries a [`Certificate`] naming the indices of
//! the worst violation. A certificate can be replayed against the sequence
//! with [`Certificate::replay`], which recomputes its margin from scratch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{raw_deltas, Epsilon, QuantifierMode, Sequence, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    /// The inequality is attained (tight) at these indices.
    Witness,
    /// The inequality fails at these indices.
    Violation,
}

/// The inequality a certificate refers to, with the indices it is
/// evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "inequality", rename_all = "snake_case")]
pub enum Witness {
    /// `2u_n <= u_{n-1} + u_{n+1}`.
    SecondDifference { n: usize },
    /// `Δ_i <= Δ_j + eps/(n - i)` with `i < n <= j`.
    EpsConvex { i: usize, j: usize, n: usize, eps: f64 },
    /// `|Δ_i - Δ_j| <= eps/(n - i)` with `i < n <= j`.
    EpsAffine { i: usize, j: usize, n: usize, eps: f64 },
    /// `u_q + u_r <= u_p + u_s` with `p < q <= r < s`, `q + r = p + s`.
    Wright { p: usize, q: usize, r: usize, s: usize },
}

impl Witness {
    /// Signed slack `rhs - lhs` of the inequality, recomputed from `u`.
    pub fn margin(&self, u: &Sequence) -> Result<f64> {
        let at = |k: usize| {
            u.get(k).ok_or(Error::CertificateIndex {
                index: k,
                len: u.len(),
            })
        };
        let delta = |k: usize| -> Result<f64> {
            if k == 0 {
                return Err(Error::CertificateIndex {
                    index: 0,
                    len: u.len(),
                });
            }
            Ok(at(k)? - at(k - 1)?)
        };
        let check_order = |i: usize, n: usize, j: usize| {
            if i < n && n <= j {
                Ok(())
            } else {
                Err(Error::CertificateIndex {
                    index: n,
                    len: u.len(),
                })
            }
        };
        match *self {
            Witness::SecondDifference { n } => {
                if n == 0 {
                    return Err(Error::CertificateIndex {
                        index: 0,
                        len: u.len(),
                    });
                }
                Ok(at(n - 1)? + at(n + 1)? - 2.0 * at(n)?)
            }
            Witness::EpsConvex { i, j, n, eps } => {
                check_order(i, n, j)?;
                Ok(delta(j)? + eps / (n - i) as f64 - delta(i)?)
            }
            Witness::EpsAffine { i, j, n, eps } => {
                check_order(i, n, j)?;
                Ok(eps / (n - i) as f64 - (delta(i)? - delta(j)?).abs())
            }
            Witness::Wright { p, q, r, s } => {
                if !(p < q && q <= r && r < s && q + r == p + s) {
                    return Err(Error::CertificateIndex {
                        index: q,
                        len: u.len(),
                    });
                }
                Ok(at(p)? + at(s)? - at(q)? - at(r)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witness: Witness,
    /// Signed slack `rhs - lhs` at the witness indices; negative means the
    /// inequality fails.
    pub margin: f64,
}

impl Certificate {
    fn new(kind: CertificateKind, witness: Witness, margin: f64) -> Self {
        Self {
            kind,
            witness,
            margin,
        }
    }

    /// Recomputes the margin against `u`.
    pub fn replay(&self, u: &Sequence) -> Result<f64> {
        self.witness.margin(u)
    }

    /// True when replaying reproduces the stored margin within `abs_tol`
    /// and the margin agrees with the certificate kind under `tol`.
    pub fn is_consistent(&self, u: &Sequence, tol: Tolerance, abs_tol: f64) -> bool {
        let Ok(m) = self.replay(u) else {
            return false;
        };
        let kind_ok = match self.kind {
            CertificateKind::Violation => m < -tol.value(),
            CertificateKind::Witness => m.abs() <= tol.value().max(abs_tol),
        };
        (m - self.margin).abs() <= abs_tol && kind_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// Present whenever `holds` is false.
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn holds() -> Self {
        Self {
            holds: true,
            certificate: None,
        }
    }

    /// Builds a verdict from the worst witness found: fails iff its margin
    /// is below `-tol`.
    pub(crate) fn from_worst(worst: Option<(Witness, f64)>, tol: Tolerance) -> Self {
        match worst {
            Some((w, m)) if m < -tol.value() => Self {
                holds: false,
                certificate: Some(Certificate::new(CertificateKind::Violation, w, m)),
            },
            _ => Self::holds(),
        }
    }
}

/// Exact minimal ε together with the pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsMin {
    pub eps: f64,
    /// Tightness witness at `eps`; absent when `eps == 0` (no pair needs slack).
    pub tight: Option<Certificate>,
}

fn keep_min(worst: &mut Option<(Witness, f64)>, w: Witness, m: f64) {
    if worst.is_none_or(|(_, best)| m < best) {
        *worst = Some((w, m));
    }
}

/// `2u_n <= u_{n-1} + u_{n+1} + tol` at every interior `n`.
pub fn is_convex(u: &Sequence, tol: Tolerance) -> Verdict {
    let v = u.values();
    let mut worst = None;
    for n in 1..v.len().saturating_sub(1) {
        let m = v[n - 1] + v[n + 1] - 2.0 * v[n];
        keep_min(&mut worst, Witness::SecondDifference { n }, m);
    }
    Verdict::from_worst(worst, tol)
}

/// Tests `Δ_i <= Δ_j + ε/(n - i) + tol` for all pairs `1 <= i < j <= m-1`,
/// with `n` quantified according to `mode`.
pub fn is_eps_convex(u: &Sequence, eps: Epsilon, mode: QuantifierMode, tol: Tolerance) -> Verdict {
    let d = raw_deltas(u.values());
    let eps = eps.value();
    let mut worst = None;
    match mode {
        QuantifierMode::Exists => {
            // margin = Δ_j + ε - Δ_i; the worst i for each j is the running argmax.
            let mut best_i: Option<(usize, f64)> = None;
            for (k, &dj) in d.iter().enumerate() {
                let j = k + 1;
                if let Some((i, di)) = best_i {
                    let w = Witness::EpsConvex { i, j, n: i + 1, eps };
                    keep_min(&mut worst, w, dj + eps - di);
                }
                if best_i.is_none_or(|(_, di)| dj > di) {
                    best_i = Some((j, dj));
                }
            }
        }
        QuantifierMode::Forall => {
            for (a, &di) in d.iter().enumerate() {
                for (b, &dj) in d.iter().enumerate().skip(a + 1) {
                    let (i, j) = (a + 1, b + 1);
                    let m = dj + eps / (j - i) as f64 - di;
                    keep_min(&mut worst, Witness::EpsConvex { i, j, n: j, eps }, m);
                }
            }
        }
    }
    Verdict::from_worst(worst, tol)
}

/// Two-sided analogue of [`is_eps_convex`]: `|Δ_i - Δ_j| <= ε/(n - i) + tol`.
pub fn is_eps_affine(u: &Sequence, eps: Epsilon, mode: QuantifierMode, tol: Tolerance) -> Verdict {
    let d = raw_deltas(u.values());
    let eps = eps.value();
    let mut worst = None;
    match mode {
        QuantifierMode::Exists => {
            if let Some((i, j)) = extreme_delta_pair(&d) {
                let m = eps - (d[i - 1] - d[j - 1]).abs();
                keep_min(&mut worst, Witness::EpsAffine { i, j, n: i + 1, eps }, m);
            }
        }
        QuantifierMode::Forall => {
            for (a, &di) in d.iter().enumerate() {
                for (b, &dj) in d.iter().enumerate().skip(a + 1) {
                    let (i, j) = (a + 1, b + 1);
                    let m = eps / (j - i) as f64 - (di - dj).abs();
                    keep_min(&mut worst, Witness::EpsAffine { i, j, n: j, eps }, m);
                }
            }
        }
    }
    Verdict::from_worst(worst, tol)
}

/// Pair `(i, j)`, `i < j`, of the positions holding the largest and the
/// smallest difference (in whichever order they occur).
fn extreme_delta_pair(d: &[f64]) -> Option<(usize, usize)> {
    if d.len() < 2 {
        return None;
    }
    let (mut lo, mut hi) = (0, 0);
    for (k, &x) in d.iter().enumerate() {
        if x < d[lo] {
            lo = k;
        }
        if x > d[hi] {
            hi = k;
        }
    }
    if lo == hi {
        // all equal
        return Some((1, 2));
    }
    Some((lo.min(hi) + 1, lo.max(hi) + 1))
}

/// `max_{i<j} (Δ_i - Δ_j)^+ · w(i, j)` where `w = 1` for
/// [`QuantifierMode::Exists`] and `w = j - i` for [`QuantifierMode::Forall`].
pub fn min_eps_convex(u: &Sequence, mode: QuantifierMode) -> EpsMin {
    let d = raw_deltas(u.values());
    let mut best: Option<(usize, usize, f64)> = None;
    let mut consider = |i: usize, j: usize, need: f64| {
        if need > 0.0 && best.is_none_or(|(_, _, b)| need > b) {
            best = Some((i, j, need));
        }
    };
    match mode {
        QuantifierMode::Exists => {
            let mut best_i: Option<(usize, f64)> = None;
            for (k, &dj) in d.iter().enumerate() {
                let j = k + 1;
                if let Some((i, di)) = best_i {
                    consider(i, j, di - dj);
                }
                if best_i.is_none_or(|(_, di)| dj > di) {
                    best_i = Some((j, dj));
                }
            }
        }
        QuantifierMode::Forall => {
            for (a, &di) in d.iter().enumerate() {
                for (b, &dj) in d.iter().enumerate().skip(a + 1) {
                    consider(a + 1, b + 1, (di - dj) * (b - a) as f64);
                }
            }
        }
    }
    match best {
        None => EpsMin {
            eps: 0.0,
            tight: None,
        },
        Some((i, j, eps)) => {
            let witness = Witness::EpsConvex {
                i,
                j,
                n: mode.deciding_index(i, j),
                eps,
            };
            let margin = d[j - 1] + eps / mode.weight(i, j) - d[i - 1];
            EpsMin {
                eps,
                tight: Some(Certificate::new(CertificateKind::Witness, witness, margin)),
            }
        }
    }
}

/// As [`min_eps_convex`] with `|Δ_i - Δ_j|` in place of `(Δ_i - Δ_j)^+`.
pub fn min_eps_affine(u: &Sequence, mode: QuantifierMode) -> EpsMin {
    let d = raw_deltas(u.values());
    let best = match mode {
        QuantifierMode::Exists => extreme_delta_pair(&d).map(|(i, j)| (i, j, (d[i - 1] - d[j - 1]).abs())),
        QuantifierMode::Forall => {
            let mut best: Option<(usize, usize, f64)> = None;
            for (a, &di) in d.iter().enumerate() {
                for (b, &dj) in d.iter().enumerate().skip(a + 1) {
                    let need = (di - dj).abs() * (b - a) as f64;
                    if best.is_none_or(|(_, _, v)| need > v) {
                        best = Some((a + 1, b + 1, need));
                    }
                }
            }
            best
        }
    };
    match best {
        Some((i, j, eps)) if eps > 0.0 => {
            let witness = Witness::EpsAffine {
                i,
                j,
                n: mode.deciding_index(i, j),
                eps,
            };
            let margin = eps / mode.weight(i, j) - (d[i - 1] - d[j - 1]).abs();
            EpsMin {
                eps,
                tight: Some(Certificate::new(CertificateKind::Witness, witness, margin)),
            }
        }
        _ => EpsMin {
            eps: 0.0,
            tight: None,
        },
    }
}

/// `u_q + u_r <= u_p + u_s + tol` for all `p < q <= r < s` with
/// `q + r = p + s`. Enumerates `(p, s, q)` in O(m³).
pub fn is_wright_convex(u: &Sequence, tol: Tolerance) -> Verdict {
    let v = u.values();
    let m = v.len();
    let mut worst = None;
    for p in 0..m {
        for s in (p + 2)..m {
            let outer = v[p] + v[s];
            for q in (p + 1)..=((p + s) / 2) {
                let r = p + s - q;
                keep_min(&mut worst, Witness::Wright { p, q, r, s }, outer - v[q] - v[r]);
            }
        }
    }
    Verdict::from_worst(worst, tol)
}
