//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p seqconvex-cli --test acceptance --release`.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use seqconvex_core::classify::{is_convex, is_wright_convex, min_eps_affine, min_eps_convex};
use seqconvex_core::decompose::{affine_approx_by_separation, convex_approx_optimal};
use seqconvex_core::extend::{check_chord_slope_bounds, check_eps_convex_function, SamplePlan};
use seqconvex_core::oracle::{
    bisect_optimal_convex_fit, brute_min_eps, brute_min_eps_affine, generate, trial_rng, Family,
    GeneratorSpec,
};
use seqconvex_core::verify::{lemma22, thm09_sequence, thm10, thm11, SuiteReport};
use seqconvex_core::{Epsilon, PiecewiseLinear, QuantifierMode, Sequence, Tolerance};

const SEED: u64 = 20_240_601;
const TOL: Tolerance = Tolerance::DEFAULT;
const BOUND_SLACK: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn report_line(r: &SuiteReport) -> String {
    format!(
        "{}: {} passed, {} violations, {} skipped, max excess {:.3e}",
        r.name,
        r.passed,
        r.violations,
        r.skipped,
        r.max_excess.unwrap_or(f64::NAN)
    )
}

/// Every sequence over `{-2, ..., 2}` of each length up to `max_len`.
fn integer_sequences(max_len: usize) -> impl Iterator<Item = Vec<f64>> {
    (1..=max_len).flat_map(|len| {
        (0..5usize.pow(len as u32)).map(move |mut code| {
            (0..len)
                .map(|_| {
                    let digit = (code % 5) as f64 - 2.0;
                    code /= 5;
                    digit
                })
                .collect()
        })
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut exhaustive = 0;
    let mut disagreements = 0;
    for v in integer_sequences(6) {
        let u = Sequence::new(v).unwrap();
        exhaustive += 1;
        if is_wright_convex(&u, Tolerance::EXACT).holds != is_convex(&u, Tolerance::EXACT).holds {
            disagreements += 1;
        }
    }
    let mut convex_seen = 0;
    for t in 0..10_000 {
        let u = thm09_sequence(SEED, t);
        let c = is_convex(&u, TOL).holds;
        convex_seen += usize::from(c);
        if is_wright_convex(&u, TOL).holds != c {
            disagreements += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        disagreements == 0 && elapsed < Duration::from_secs(10),
        format!(
            "Wright convexity == convexity on {exhaustive} exhaustive integer sequences and 10000 random real \
             sequences ({convex_seen} convex); {disagreements} disagreements; {} (limit 10 s)",
            secs(elapsed)
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let reports = thm10(SEED, 10_000, TOL);
    let elapsed = start.elapsed();
    let forall = reports.iter().find(|r| r.name.ends_with("forall")).unwrap();
    let pass =
        reports.iter().all(SuiteReport::ok) && forall.skipped == 0 && elapsed < Duration::from_secs(30);
    let fractions: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{} gap-failure fraction {:.4}",
                r.name,
                r.skipped as f64 / r.trials as f64
            )
        })
        .collect();
    let lines: Vec<String> = reports.iter().map(report_line).collect();
    outcome(
        pass,
        format!(
            "convex part within eps/2: {}; {}; {} (limit 30 s)",
            lines.join("; "),
            fractions.join(", "),
            secs(elapsed)
        ),
    )
}

fn criterion_3() -> Outcome {
    let r = thm11(SEED, 10_000);
    outcome(
        r.ok(),
        format!(
            "Chebyshev line within min_eps_affine(exists): {}",
            report_line(&r)
        ),
    )
}

fn eps_affine_instance(t: u64) -> Sequence {
    let mut rng = trial_rng(SEED ^ 0x5ea, t);
    let length = rng.random_range(2..=100);
    let eps = rng.random_range(0.0..1.0);
    generate(GeneratorSpec {
        seed: rng.random(),
        length,
        family: Family::ArithmeticPlusNoise { eps },
    })
    .unwrap()
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in QuantifierMode::ALL {
        let (mut ok, mut failed, mut violations) = (0, 0, 0);
        let mut worst: f64 = f64::NEG_INFINITY;
        for t in 0..1_000 {
            let u = eps_affine_instance(t);
            let Ok(s) = affine_approx_by_separation(&u, mode, TOL) else {
                failed += 1;
                continue;
            };
            let d = &s.decomposition;
            let eps = d.eps.unwrap();
            let line = d.line.unwrap();
            let sandwich = (0..u.len()).all(|n| {
                let a = line.eval(n as f64);
                s.lower[n] <= a + BOUND_SLACK && a <= s.upper[n] + BOUND_SLACK
            });
            worst = worst.max(d.bound - eps);
            if sandwich && d.bound <= eps + BOUND_SLACK {
                ok += 1;
            } else {
                violations += 1;
            }
        }
        pass &= violations == 0;
        if mode == QuantifierMode::Forall {
            pass &= failed == 0;
        }
        parts.push(format!(
            "{mode}: {ok} sandwiched, {violations} violations, {failed} uncertified, max(bound - eps) {worst:.3e}"
        ));
    }
    outcome(
        pass,
        format!(
            "separating line on 1000 eps-affine instances; {}",
            parts.join("; ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let r = lemma22(SEED, 10_000);
    outcome(
        r.ok(),
        format!("mediant sandwich, tolerance 1e-12: {}", report_line(&r)),
    )
}

fn criterion_6() -> Outcome {
    let (mut refuted, mut checked, mut skipped) = (0, 0, 0);
    let (mut spans, mut span_failures) = (0, 0);
    for t in 0..100 {
        let mut rng = trial_rng(SEED ^ 0xe7, t);
        let length = rng.random_range(2..=40);
        let family = match t % 3 {
            0 => Family::RandomUniform,
            1 => Family::ConvexPlusNoise {
                eps: rng.random_range(0.0..1.0),
            },
            _ => Family::ArithmeticPlusNoise {
                eps: rng.random_range(0.0..1.0),
            },
        };
        let u = generate(GeneratorSpec {
            seed: rng.random(),
            length,
            family,
        })
        .unwrap();
        let eps = Epsilon::new(min_eps_convex(&u, QuantifierMode::Forall).eps).unwrap();
        let f = PiecewiseLinear::new(u);
        let plan = SamplePlan {
            knot_triples: true,
            random_triples: 10_000,
            seed: rng.random(),
        };
        let v = check_eps_convex_function(&f, eps, plan, TOL);
        refuted += usize::from(!v.holds);
        checked += v.checked;
        skipped += v.skipped;
        for _ in 0..10 {
            let a = rng.random_range(0.0..=f.upper());
            let b = rng.random_range(0.0..=f.upper());
            let (x, y) = (a.min(b), a.max(b));
            if let Ok(c) = check_chord_slope_bounds(&f, eps, x, y, TOL) {
                spans += 1;
                span_failures += usize::from(!c.holds);
            }
        }
    }
    outcome(
        refuted == 0 && span_failures == 0 && spans >= 990,
        format!(
            "extension eps-convex at eps = min_eps(forall): 100 sequences, {checked} triples checked \
             ({skipped} degenerate), {refuted} refuted; chord slope bounds on {spans} spans, {span_failures} failures"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut worst_eps: f64 = 0.0;
    let mut eps_mismatch = 0;
    for t in 0..1_000 {
        let mut rng = trial_rng(SEED ^ 0x07, t);
        let length = rng.random_range(1..=50);
        let family = if t % 2 == 0 {
            Family::RandomUniform
        } else {
            Family::ConvexPlusNoise {
                eps: rng.random_range(0.0..1.0),
            }
        };
        let u = generate(GeneratorSpec {
            seed: rng.random(),
            length,
            family,
        })
        .unwrap();
        for mode in QuantifierMode::ALL {
            let pairs = [
                (min_eps_convex(&u, mode).eps, brute_min_eps(&u, mode).unwrap()),
                (
                    min_eps_affine(&u, mode).eps,
                    brute_min_eps_affine(&u, mode).unwrap(),
                ),
            ];
            for (fast, brute) in pairs {
                let diff = (fast - brute).abs();
                worst_eps = worst_eps.max(diff);
                eps_mismatch += usize::from(diff > 1e-12);
            }
        }
    }
    let mut worst_fit: f64 = 0.0;
    let mut fit_mismatch = 0;
    for t in 0..200 {
        let mut rng = trial_rng(SEED ^ 0x77, t);
        let length = rng.random_range(1..=200);
        let family = match t % 3 {
            0 => Family::RandomUniform,
            1 => Family::ConvexPlusNoise {
                eps: rng.random_range(0.0..1.0),
            },
            _ => Family::IntegerGrid { range: 5 },
        };
        let u = generate(GeneratorSpec {
            seed: rng.random(),
            length,
            family,
        })
        .unwrap();
        let diff = (convex_approx_optimal(&u).bound - bisect_optimal_convex_fit(&u)).abs();
        worst_fit = worst_fit.max(diff);
        fit_mismatch += usize::from(diff > 1e-8);
    }
    outcome(
        eps_mismatch == 0 && fit_mismatch == 0,
        format!(
            "min_eps vs brute force on 1000 sequences x 2 modes x 2 classes: {eps_mismatch} beyond 1e-12 \
             (max diff {worst_eps:.3e}); optimal convex fit vs bisection on 200 sequences (m <= 200): \
             {fit_mismatch} beyond 1e-8 (max diff {worst_fit:.3e})"
        ),
    )
}

fn criterion_8() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let data = dir.path().join("data.csv");
    let u = generate(GeneratorSpec {
        seed: SEED,
        length: 60,
        family: Family::ConvexPlusNoise { eps: 0.3 },
    })
    .unwrap();
    let body: String = u.iter().map(|x| format!("{x:?}\n")).collect();
    fs::write(&data, body).unwrap();
    let data = data.to_str().unwrap().to_string();
    let plot = |k: usize| dir.path().join(format!("plot{k}.tsv")).display().to_string();

    let invocations: Vec<Vec<String>> = [
        vec!["classify", "--eps", "0.2", "--class", "wright"],
        vec!["eps-min", "--mode", "forall"],
        vec!["decompose", "--target", "convex", "--mode", "forall"],
        vec!["decompose", "--target", "affine"],
        vec![
            "extend",
            "--grid",
            "11",
            "--at",
            "2.5",
            "--check-eps",
            "0.5",
            "--seed",
            "9",
        ],
    ]
    .into_iter()
    .map(|a| a.into_iter().map(String::from).chain([data.clone()]).collect())
    .chain([["verify", "--suite", "all", "--seed", "5", "--trials", "300"]
        .map(String::from)
        .to_vec()])
    .collect();

    let exe = env!("CARGO_BIN_EXE_seqconvex");
    let mut identical = 0;
    let mut problems = Vec::new();
    for args in &invocations {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let mut cmd = Command::new(exe);
            cmd.args(args).arg("--no-timing").env_remove("SEQCONVEX_SEED");
            if args[0] == "decompose" {
                cmd.args(["--plot-data", &plot(k)]);
            }
            let o = cmd.output().unwrap();
            if !o.status.success() {
                problems.push(format!("{} exited {:?}", args[0], o.status.code()));
            }
            let plot_bytes = fs::read(plot(k)).unwrap_or_default();
            let _ = fs::remove_file(plot(k));
            outputs.push((o.stdout, plot_bytes));
        }
        if outputs[0] == outputs[1] && !outputs[0].0.is_empty() {
            identical += 1;
        } else {
            problems.push(format!("{} differs between runs", args[0]));
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "{identical}/{} invocations byte-identical across two runs with --no-timing{}",
            invocations.len(),
            if problems.is_empty() {
                String::new()
            } else {
                format!(" ({})", problems.join(", "))
            }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failures = 0;
    for (n, check) in criteria {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {n}: {}", o.detail);
        failures += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
