//! Brute-force references and seeded sequence generators.
//!
//! Everything here takes the slow, literal route on purpose so that it can
//! serve as ground truth for the fast paths in [`crate::classify`] and
//! [`crate::decompose`].
//!
//! Randomness comes from `ChaCha8Rng` (rand_chacha 0.9) seeded with
//! `seed_from_u64(seed)`; independent trials use `set_stream(trial)` on the
//! same seed. See [`RNG_ALGORITHM`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::sequence::{raw_deltas, QuantifierMode, Sequence, Tolerance};

/// Recorded in reports so runs can be reproduced from the seed.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng(seed_from_u64(seed)).set_stream(trial)";

pub const MAX_BRUTE_EPS_LEN: usize = 500;
pub const MAX_BRUTE_WRIGHT_LEN: usize = 100;

fn guard(u: &Sequence, max: usize) -> Result<()> {
    if u.len() > max {
        return Err(Error::OracleGuard { len: u.len(), max });
    }
    Ok(())
}

/// Smallest ε for which every pair `i < j` has an admissible `n ∈ ]i, j]`
/// (Exists) or has every `n` admissible (Forall), enumerating all `(i, j, n)`.
/// `need` maps `(Δ_i, Δ_j)` to the slack required at `n - i = 1`.
fn brute_eps(u: &Sequence, mode: QuantifierMode, need: impl Fn(f64, f64) -> f64) -> Result<f64> {
    guard(u, MAX_BRUTE_EPS_LEN)?;
    let d = raw_deltas(u.values());
    let delta = |k: usize| d[k - 1];
    let m = u.len();
    let mut eps = 0.0_f64;
    for i in 1..m {
        for j in (i + 1)..m {
            // Inequality at n holds iff ε >= need · (n - i).
            let mut pair: Option<f64> = None;
            for n in (i + 1)..=j {
                let req = (need(delta(i), delta(j)) * (n - i) as f64).max(0.0);
                pair = Some(match (mode, pair) {
                    (_, None) => req,
                    (QuantifierMode::Exists, Some(p)) => p.min(req),
                    (QuantifierMode::Forall, Some(p)) => p.max(req),
                });
            }
            eps = eps.max(pair.unwrap_or(0.0));
        }
    }
    Ok(eps)
}

/// Exact minimal ε-convexity slack by full triple enumeration. O(m³).
pub fn brute_min_eps(u: &Sequence, mode: QuantifierMode) -> Result<f64> {
    brute_eps(u, mode, |di, dj| di - dj)
}

/// Exact minimal ε-affinity slack by full triple enumeration. O(m³).
pub fn brute_min_eps_affine(u: &Sequence, mode: QuantifierMode) -> Result<f64> {
    brute_eps(u, mode, |di, dj| (di - dj).abs())
}

/// Wright convexity by enumerating every quadruple `p < q <= r < s` and
/// keeping those with `q + r = p + s`. O(m⁴).
pub fn brute_wright(u: &Sequence, tol: Tolerance) -> Result<Verdict> {
    guard(u, MAX_BRUTE_WRIGHT_LEN)?;
    let v = u.values();
    let m = v.len();
    let mut worst: Option<(Witness, f64)> = None;
    for p in 0..m {
        for q in (p + 1)..m {
            for r in q..m {
                for s in (r + 1)..m {
                    if q + r != p + s {
                        continue;
                    }
                    let margin = v[p] + v[s] - v[q] - v[r];
                    if worst.is_none_or(|(_, w)| margin < w) {
                        worst = Some((Witness::Wright { p, q, r, s }, margin));
                    }
                }
            }
        }
    }
    Ok(Verdict::from_worst(worst, tol))
}

/// Greatest convex minorant from its chord characterisation:
/// `gcm(u)_n = min_{i <= n <= j} [(j - n) u_i + (n - i) u_j] / (j - i)`. O(m³).
pub fn brute_gcm(u: &Sequence) -> Sequence {
    let v = u.values();
    let m = v.len();
    let out = (0..m)
        .map(|n| {
            let mut best = v[n];
            for i in 0..n {
                for j in (n + 1)..m {
                    let chord = ((j - n) as f64 * v[i] + (n - i) as f64 * v[j]) / (j - i) as f64;
                    best = best.min(chord);
                }
            }
            best
        })
        .collect();
    Sequence::new(out).expect("finite")
}

/// Smallest `t` such that a convex sequence fits inside `[u - t, u + t]`,
/// by bisection on the feasibility test `gcm(u + t) >= u - t` (with the
/// brute-force minorant) down to a bracket of 1e-10.
pub fn bisect_optimal_convex_fit(u: &Sequence) -> f64 {
    let g = brute_gcm(u);
    let feasible = |t: f64| u.iter().zip(g.iter()).all(|(x, gx)| gx + t >= x - t);
    let lo_v = u.iter().fold(f64::INFINITY, f64::min);
    let hi_v = u.iter().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (0.0, hi_v - lo_v);
    if feasible(lo) {
        return 0.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Independent draws from `[-1, 1]`.
    RandomUniform,
    /// Convex base (sorted uniform differences in `[-1, 1]`) plus uniform
    /// noise in `[-eps/2, eps/2]`.
    ConvexPlusNoise { eps: f64 },
    /// Arithmetic base (`α, β ∈ [-1, 1]`) plus uniform noise in `[-eps/2, eps/2]`.
    ArithmeticPlusNoise { eps: f64 },
    /// Integers drawn uniformly from `[-range, range]`.
    IntegerGrid { range: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub length: usize,
    pub family: Family,
}

/// RNG for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn noise(rng: &mut ChaCha8Rng, eps: f64) -> f64 {
    if eps > 0.0 {
        rng.random_range(-eps / 2.0..=eps / 2.0)
    } else {
        0.0
    }
}

/// Deterministic in `spec`.
pub fn generate(spec: GeneratorSpec) -> Result<Sequence> {
    let m = spec.length;
    if m == 0 {
        return Err(Error::ZeroLength);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = match spec.family {
        Family::RandomUniform => (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        Family::ConvexPlusNoise { eps } => {
            let mut d: Vec<f64> = (1..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
            d.sort_by(f64::total_cmp);
            let mut base = Vec::with_capacity(m);
            let mut acc: f64 = rng.random_range(-1.0..=1.0);
            base.push(acc);
            for x in d {
                acc += x;
                base.push(acc);
            }
            base.into_iter().map(|b| b + noise(&mut rng, eps)).collect()
        }
        Family::ArithmeticPlusNoise { eps } => {
            let alpha: f64 = rng.random_range(-1.0..=1.0);
            let beta: f64 = rng.random_range(-1.0..=1.0);
            (0..m)
                .map(|n| alpha + beta * n as f64 + noise(&mut rng, eps))
                .collect()
        }
        Family::IntegerGrid { range } => {
            let r = range as i64;
            (0..m).map(|_| rng.random_range(-r..=r) as f64).collect()
        }
    };
    Sequence::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_convex, min_eps_convex};
    use crate::decompose::{affine_approx, gcm};

    fn seq(v: &[f64]) -> Sequence {
        Sequence::from_slice(v).unwrap()
    }

    #[test]
    fn brute_eps_examples() {
        let convex = seq(&[0.0, 1.0, 4.0, 9.0]);
        for mode in QuantifierMode::ALL {
            assert_eq!(brute_min_eps(&convex, mode).unwrap(), 0.0);
        }
        assert_eq!(
            brute_min_eps(&seq(&[0.0, 1.0, 0.0]), QuantifierMode::Exists).unwrap(),
            2.0
        );
        let zigzag = seq(&[0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(brute_min_eps(&zigzag, QuantifierMode::Forall).unwrap(), 6.0);
        assert_eq!(brute_min_eps(&zigzag, QuantifierMode::Exists).unwrap(), 2.0);
        assert_eq!(
            brute_min_eps_affine(&zigzag, QuantifierMode::Forall).unwrap(),
            6.0
        );
    }

    #[test]
    fn brute_guards() {
        let long = Sequence::new(vec![0.0; MAX_BRUTE_EPS_LEN + 1]).unwrap();
        assert!(matches!(
            brute_min_eps(&long, QuantifierMode::Exists),
            Err(Error::OracleGuard { .. })
        ));
        let long = Sequence::new(vec![0.0; MAX_BRUTE_WRIGHT_LEN + 1]).unwrap();
        assert!(brute_wright(&long, Tolerance::DEFAULT).is_err());
    }

    #[test]
    fn brute_wright_examples() {
        assert!(
            brute_wright(&seq(&[0.0, 1.0, 4.0, 9.0]), Tolerance::DEFAULT)
                .unwrap()
                .holds
        );
        let v = brute_wright(&seq(&[0.0, 1.0, 0.0, 1.0]), Tolerance::DEFAULT).unwrap();
        assert!(!v.holds);
        // (0,1,2,3) ties at margin 0; the failing quadruple is (0,1,1,2).
        assert!(matches!(
            v.certificate.unwrap().witness,
            Witness::Wright {
                p: 0,
                q: 1,
                r: 1,
                s: 2
            }
        ));
    }

    #[test]
    fn brute_wright_exhaustive_ternary() {
        for len in 1..=6u32 {
            for code in 0..3usize.pow(len) {
                let mut c = code;
                let v: Vec<f64> = (0..len)
                    .map(|_| {
                        let x = (c % 3) as f64 - 1.0;
                        c /= 3;
                        x
                    })
                    .collect();
                let u = Sequence::new(v).unwrap();
                assert_eq!(
                    brute_wright(&u, Tolerance::DEFAULT).unwrap().holds,
                    is_convex(&u, Tolerance::DEFAULT).holds,
                    "{u:?}"
                );
            }
        }
    }

    #[test]
    fn brute_gcm_matches_hull() {
        assert_eq!(
            brute_gcm(&seq(&[0.0, 3.0, 1.0, 4.0])).values(),
            &[0.0, 0.5, 1.0, 4.0]
        );
        let u = generate(GeneratorSpec {
            seed: 5,
            length: 40,
            family: Family::RandomUniform,
        })
        .unwrap();
        for (a, b) in brute_gcm(&u).iter().zip(gcm(&u).iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bisection_peak() {
        let t = bisect_optimal_convex_fit(&seq(&[0.0, 1.0, 0.0]));
        assert!((t - 0.5).abs() < 1e-9);
        assert_eq!(bisect_optimal_convex_fit(&seq(&[0.0, 1.0, 4.0])), 0.0);
    }

    #[test]
    fn generate_is_deterministic() {
        for family in [
            Family::RandomUniform,
            Family::ConvexPlusNoise { eps: 0.3 },
            Family::ArithmeticPlusNoise { eps: 0.3 },
            Family::IntegerGrid { range: 2 },
        ] {
            let spec = GeneratorSpec {
                seed: 99,
                length: 17,
                family,
            };
            assert_eq!(generate(spec).unwrap(), generate(spec).unwrap());
            assert_eq!(generate(spec).unwrap().len(), 17);
        }
        assert_eq!(
            generate(GeneratorSpec {
                seed: 0,
                length: 0,
                family: Family::RandomUniform
            }),
            Err(Error::ZeroLength)
        );
    }

    #[test]
    fn integer_grid_range() {
        let u = generate(GeneratorSpec {
            seed: 3,
            length: 200,
            family: Family::IntegerGrid { range: 2 },
        })
        .unwrap();
        assert!(u.iter().all(|x| x.fract() == 0.0 && (-2.0..=2.0).contains(&x)));
    }

    #[test]
    fn noisy_families_respect_their_slack() {
        // Convex base plus noise in [-ε/2, ε/2] moves each Δ_i - Δ_j by at
        // most 2ε, so the EXISTS slack is at most 2ε.
        for seed in 0..300 {
            let eps = 0.25;
            let u = generate(GeneratorSpec {
                seed,
                length: 2 + (seed as usize % 60),
                family: Family::ConvexPlusNoise { eps },
            })
            .unwrap();
            assert!(min_eps_convex(&u, QuantifierMode::Exists).eps <= 2.0 * eps + 1e-12);

            let a = generate(GeneratorSpec {
                seed,
                length: 1 + (seed as usize % 60),
                family: Family::ArithmeticPlusNoise { eps },
            })
            .unwrap();
            assert!(affine_approx(&a).bound <= eps + 1e-9);
        }
    }

    #[test]
    fn trial_streams_differ() {
        let a: u64 = trial_rng(1, 0).random();
        let b: u64 = trial_rng(1, 1).random();
        let c: u64 = trial_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
