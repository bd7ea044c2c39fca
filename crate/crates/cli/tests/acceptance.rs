//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Reference values are recomputed here from closed forms written out by hand,
//! independently of the library code paths under test.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schwarzian_lab::criteria::{check_dilatation_criterion, lemma_gap, solve_c, DEFAULT_TOLERANCE};
use schwarzian_lab::geometry::{
    boundary_curve, cusp_candidates, injectivity_scan, self_intersections, InjectivityVerdict,
};
use schwarzian_lab::jets::Elementary;
use schwarzian_lab::maps::{disk_automorphism, harmonic_mobius, make_f_alpha, HarmonicMap, Holomorphic, MobiusTransform};
use schwarzian_lab::schwarzian::{
    harmonic_pre_schwarzian, harmonic_schwarzian, pre_schwarzian, schwarzian, schwarzian_norm_estimate, GridSpec,
};
use schwarzian_lab::suites::{affine_suite, automorphism_suite, decomposition_suite, lemma_suite};
use schwarzian_lab::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 42;
const ALPHAS: [f64; 5] = [1.0, 1.01, 1.1, 1.5, 2.0];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one() -> Complex64 {
    c(1.0, 0.0)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

fn log_map() -> Holomorphic {
    // log((1 + z) / (1 - z))
    Holomorphic::elementary(
        Elementary::Log,
        Holomorphic::Mobius(MobiusTransform::new(one(), one(), -one(), one()).unwrap()),
    )
}

fn koebe() -> Holomorphic {
    Holomorphic::quotient(
        Holomorphic::identity(),
        Holomorphic::polynomial(vec![one(), c(-2.0, 0.0), one()]),
    )
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

// 1 ---------------------------------------------------------------------------
fn f_alpha_norms() -> Outcome {
    let start = Instant::now();
    let grid = GridSpec::new(14, 64, 1.0 - 1e-4).map_err(e)?;
    let mut estimates = Vec::new();
    for alpha in ALPHAS {
        let bound = 2.0 * (alpha * alpha - 1.0) + 2.0 * (alpha - 1.0) + 1.5;
        let est = schwarzian_norm_estimate(&make_f_alpha(alpha).map_err(e)?, &grid).map_err(e)?;
        check(est.lower_bound <= bound + 1e-9, || {
            format!("alpha {alpha}: estimate {} exceeds bound {bound}", est.lower_bound)
        })?;
        estimates.push(est.lower_bound);
    }
    check((1.4985..=1.5).contains(&estimates[0]), || format!("alpha 1 estimate {}", estimates[0]))?;
    check(estimates.windows(2).all(|w| w[0] <= w[1]), || format!("not monotone: {estimates:?}"))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("estimates {estimates:.6?} in {elapsed:.2?}"))
}

// 2 ---------------------------------------------------------------------------
fn calibration() -> Outcome {
    let grid = GridSpec::default();
    let ell = schwarzian_norm_estimate(&HarmonicMap::holomorphic(log_map()), &grid).map_err(e)?;
    let k = schwarzian_norm_estimate(&HarmonicMap::holomorphic(koebe()), &grid).map_err(e)?;
    check((ell.lower_bound - 2.0).abs() <= 1e-3, || format!("log map {}", ell.lower_bound))?;
    check((k.lower_bound - 6.0).abs() <= 1e-3, || format!("Koebe {}", k.lower_bound))?;
    let mut worst_mobius = 0.0_f64;
    for (a, b, cc, d) in [
        (one(), c(0.3, 0.1), c(0.2, -0.4), c(2.0, 0.5)),
        (c(0.0, 1.0), c(1.0, 1.0), c(0.5, 0.0), c(3.0, 0.0)),
    ] {
        let m = Holomorphic::Mobius(MobiusTransform::new(a, b, cc, d).map_err(e)?);
        let est = schwarzian_norm_estimate(&HarmonicMap::holomorphic(m), &grid).map_err(e)?;
        worst_mobius = worst_mobius.max(est.lower_bound.abs());
    }
    check(worst_mobius <= 1e-12, || format!("Möbius norm {worst_mobius}"))?;
    Ok(format!(
        "log {:.6}, Koebe {:.6}, Möbius {worst_mobius:.1e}",
        ell.lower_bound, k.lower_bound
    ))
}

// 3 ---------------------------------------------------------------------------
/// Dekker's exact product `a * a = hi + lo` via Veltkamp splitting.
fn exact_square(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a; // 2^27 + 1
    let hi = t - (t - a);
    let lo = a - hi;
    let p = a * a;
    (p, ((hi * hi - p) + 2.0 * hi * lo) + lo * lo)
}

/// `1 - x^2 - y^2` accumulated in double-double.
fn one_minus_norm_sqr_oracle(z: Complex64) -> f64 {
    let (xh, xl) = exact_square(z.re);
    let (yh, yl) = exact_square(z.im);
    let (big, small) = if xh >= yh { (xh, yh) } else { (yh, xh) };
    let head = (1.0 - big) - small;
    let tail = ((1.0 - big) - head) - small + ((1.0 - (1.0 - big)) - big);
    head + (tail - xl - yl)
}

fn s_f_alpha_oracle(alpha: f64, z: Complex64) -> Complex64 {
    let s = one_minus_norm_sqr_oracle(z);
    let u = one() - z;
    let zb = z.conj();
    (1.0 - alpha * alpha) / (2.0 * u * u) + (1.0 - alpha) * zb / (s * u) - 1.5 * zb * zb / (s * s)
}

fn cross_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for alpha in ALPHAS {
        let f = make_f_alpha(alpha).map_err(e)?;
        for _ in 0..1000 {
            let z = disk_point(&mut rng, 0.999);
            let d = (harmonic_schwarzian(&f, z).map_err(e)? - s_f_alpha_oracle(alpha, z)).norm();
            worst = worst.max(d);
        }
    }
    check(worst < 1e-9, || format!("max difference {worst:e}"))?;
    Ok(format!("max difference {worst:.2e}"))
}

// 4 ---------------------------------------------------------------------------
fn lemma() -> Outcome {
    let report = lemma_suite(SEED).map_err(e)?;
    check(report.unverified == 0, || format!("{} unverified samples", report.unverified))?;
    check(report.samples_evaluated == 20 * 500, || format!("{} samples", report.samples_evaluated))?;
    check(report.max_residual <= 1e-12, || format!("max gap {:e}", report.max_residual))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut identity_gap = 0.0_f64;
    for _ in 0..100 {
        identity_gap = identity_gap.max(lemma_gap(&Holomorphic::identity(), disk_point(&mut rng, 0.999)).map_err(e)?.abs());
    }
    let square = Holomorphic::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), one()]);
    let square_gap = lemma_gap(&square, c(0.0, 0.0)).map_err(e)?;
    check(identity_gap <= 1e-12 && square_gap.abs() <= 1e-12, || {
        format!("equality cases: identity {identity_gap:e}, square {square_gap:e}")
    })?;
    Ok(format!("max gap {:.2e}; equality cases {identity_gap:.1e}, {square_gap:.1e}", report.max_residual))
}

// 5 ---------------------------------------------------------------------------
fn decomposition() -> Outcome {
    let r = decomposition_suite(SEED).map_err(e)?;
    check(r.unverified == 0 && r.samples_evaluated == 10 * 1000, || {
        format!("{} evaluated, {} unverified", r.samples_evaluated, r.unverified)
    })?;
    check(r.max_residual < 1e-9, || format!("max residual {:e}", r.max_residual))?;
    Ok(format!("max residual {:.2e} over {} points", r.max_residual, r.samples_evaluated))
}

// 6 ---------------------------------------------------------------------------
fn dilatation_criterion() -> Outcome {
    let grid = GridSpec::default();
    let mut worst = f64::INFINITY;
    for (a, cc) in [(c(0.0, 0.0), c(0.5, 0.0)), (c(0.3, -0.4), c(-0.2, 0.6)), (c(-0.7, 0.1), c(0.0, 0.9))] {
        let f = harmonic_mobius(disk_automorphism(a).map_err(e)?, cc).map_err(e)?;
        let v = check_dilatation_criterion(&f, &grid, DEFAULT_TOLERANCE).map_err(e)?;
        check(v.satisfied && v.worst_margin >= -1e-12, || format!("harmonic Möbius {v:?}"))?;
        worst = worst.min(v.worst_margin);
    }
    let f1 = make_f_alpha(1.0).map_err(e)?;
    let v = check_dilatation_criterion(&f1, &grid, DEFAULT_TOLERANCE).map_err(e)?;
    check(!v.satisfied && !v.inconclusive, || format!("f_1 verdict {v:?}"))?;
    let z = v.worst_point;
    check(z.norm_sqr() > 1.0 / 3.0, || format!("witness {z} has |z|^2 <= 1/3"))?;
    // omega* = 1, A = -3 conj(z) / 2, S = -3 conj(z)^2 / (2 (1 - |z|^2)^2) for f_1
    let r = z.norm();
    let oracle_margin = 0.5 - 1.5 * r * r - 3.0 * r;
    check(oracle_margin < 0.0 && (oracle_margin - v.worst_margin).abs() < 1e-9, || {
        format!("witness margin {} vs oracle {oracle_margin}", v.worst_margin)
    })?;
    Ok(format!(
        "Möbius worst margin {worst:.1e}; f_1 violated at |z|^2 = {:.4} (margin {:.4})",
        z.norm_sqr(),
        v.worst_margin
    ))
}

// 7 ---------------------------------------------------------------------------
fn root_constant() -> Outcome {
    let cc = solve_c();
    let residual = (2.0 * cc * cc.tan() - 1.0).abs();
    check(residual < 1e-12 && (cc - 0.6533).abs() < 5e-4, || format!("c = {cc}, residual {residual:e}"))?;
    Ok(format!("c = {cc:.12}, residual {residual:.1e}"))
}

// 8 ---------------------------------------------------------------------------
fn f_alpha_value_oracle(alpha: f64, z: Complex64) -> Complex64 {
    let p = (one() - z).powf(alpha);
    let h = (one() - p) / alpha;
    let g = (one() - (one() + alpha * z) * p) / (alpha * (1.0 + alpha));
    h + g.conj()
}

fn injectivity() -> Outcome {
    let f15 = make_f_alpha(1.5).map_err(e)?;
    let start = Instant::now();
    let r = injectivity_scan(&f15, 400, 0.05).map_err(e)?;
    let t15 = start.elapsed();
    check(r.verdict == InjectivityVerdict::CollisionFound, || format!("f_1.5 verdict {:?}", r.verdict))?;
    let w = r.witness.ok_or("no witness")?;
    let gap = (f_alpha_value_oracle(1.5, w.z1) - f_alpha_value_oracle(1.5, w.z2)).norm();
    check(w.z1.norm() < 1.0 && w.z2.norm() < 1.0, || format!("witness outside the disk: {w:?}"))?;
    check(gap < 1e-10 && w.image_gap < 1e-10 && (w.z1 - w.z2).norm() >= 0.05, || {
        format!("witness {w:?}, oracle image gap {gap:e}")
    })?;
    let start = Instant::now();
    let r1 = injectivity_scan(&make_f_alpha(1.0).map_err(e)?, 400, 0.05).map_err(e)?;
    let t1 = start.elapsed();
    check(r1.verdict == InjectivityVerdict::NoCollisionAtResolution, || format!("f_1 verdict {:?}", r1.verdict))?;
    check(t15 < Duration::from_secs(60) && t1 < Duration::from_secs(60), || format!("took {t15:?} and {t1:?}"))?;
    Ok(format!(
        "f_1.5 collision, preimage gap {:.4}, oracle image gap {gap:.1e} ({t15:.2?}); f_1 clear ({t1:.2?})",
        w.preimage_gap
    ))
}

// 9 ---------------------------------------------------------------------------
fn boundary_geometry() -> Outcome {
    let n = 65536;
    let f1 = make_f_alpha(1.0).map_err(e)?;
    let crossings = self_intersections(&boundary_curve(&f1, n).map_err(e)?).crossings;
    check(crossings.is_empty(), || format!("f_1 has {} crossings", crossings.len()))?;
    let cusps = cusp_candidates(&f1, n, 1e-6).map_err(e)?;
    check(cusps.len() == 3, || format!("f_1 cusps {cusps:?}"))?;
    for (theta, expected) in cusps.iter().zip([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]) {
        let d = (theta - expected).abs().min(2.0 * PI - (theta - expected).abs());
        check(d <= 1e-6, || format!("cusp {theta} vs {expected}"))?;
    }
    let f15 = make_f_alpha(1.5).map_err(e)?;
    let coarse = self_intersections(&boundary_curve(&f15, n).map_err(e)?).crossings;
    let fine = self_intersections(&boundary_curve(&f15, 2 * n).map_err(e)?).crossings;
    check(!coarse.is_empty(), || "f_1.5 boundary has no crossing".into())?;
    check(coarse.len() == fine.len(), || format!("{} vs {} crossings", coarse.len(), fine.len()))?;
    let mut drift = 0.0_f64;
    for x in &coarse {
        let nearest = fine.iter().map(|y| (x.point - y.point).norm()).fold(f64::INFINITY, f64::min);
        drift = drift.max(nearest);
    }
    check(drift <= 1e-6, || format!("crossings move by {drift:e} under doubling"))?;
    Ok(format!(
        "f_1: 0 crossings, cusps {cusps:.9?}; f_1.5: {} crossings, drift {drift:.1e}",
        coarse.len()
    ))
}

// 10 --------------------------------------------------------------------------
fn affine_invariance() -> Outcome {
    let r = affine_suite(SEED).map_err(e)?;
    let s = r.details["max_schwarzian_residual"];
    let star = r.details["max_omega_star_residual"];
    check(r.unverified == 0 && r.samples_evaluated == 1000, || format!("{r:?}"))?;
    check(s < 1e-10 && star < 1e-10, || format!("residuals {s:e}, {star:e}"))?;
    Ok(format!("max |S_F - S_f| {s:.2e}, max ||w_F*| - |w*|| {star:.2e}"))
}

// 11 --------------------------------------------------------------------------
/// Sample radius for the reduction check. The harmonic pipeline differentiates h
/// symbolically while the holomorphic one reads the jet of h, so the two agree only
/// to rounding relative to |Sh|, which grows like (1 - |z|)^-2.
const REDUCTION_RADIUS: f64 = 0.5;

fn reduction_and_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    let maps = [
        log_map(),
        koebe(),
        Holomorphic::polynomial(vec![c(0.0, 0.0), one(), c(0.2, 0.1), c(0.0, -0.05)]),
        Holomorphic::elementary(Elementary::Exp, Holomorphic::identity()),
    ];
    for h in &maps {
        let f = HarmonicMap::holomorphic(h.clone());
        for _ in 0..200 {
            let z = disk_point(&mut rng, REDUCTION_RADIUS);
            let j = h.jet(z).map_err(e)?;
            let dp = (harmonic_pre_schwarzian(&f, z).map_err(e)? - pre_schwarzian(&j).map_err(e)?).norm();
            let ds = (harmonic_schwarzian(&f, z).map_err(e)? - schwarzian(&j).map_err(e)?).norm();
            worst = worst.max(dp).max(ds);
        }
    }
    check(worst < 1e-13, || format!("reduction residual {worst:e}"))?;
    let grid = GridSpec::default();
    let mut drift = 0.0_f64;
    for h in [log_map(), koebe()] {
        let r = automorphism_suite(SEED, &h, &grid).map_err(e)?;
        check(r.unverified == 0, || format!("{r:?}"))?;
        drift = drift.max(r.max_residual);
    }
    check(drift <= 2e-3, || format!("norm moved by {drift:e} under automorphisms"))?;
    Ok(format!("reduction residual {worst:.1e}; automorphism drift {drift:.1e}"))
}

// 12 --------------------------------------------------------------------------
fn run_cli(args: &[&str], threads: &str) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_schwarzian-lab"))
        .args(args)
        .env("SCHWARZIAN_LAB_THREADS", threads)
        .output()
        .map_err(e)?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["norm", "--map", r#"{"kind":"f_alpha","alpha":1.5}"#, "--grid-levels", "10"],
        &["sweep", "--grid-levels", "10"],
        &["criteria", "lemma", "--seed", "42"],
        &["criteria", "affine", "--seed", "7"],
        &["criteria", "thm3", "--map", r#"{"kind":"f_alpha","alpha":1}"#, "--grid-levels", "8"],
        &["scan", "--map", r#"{"kind":"f_alpha","alpha":1.5}"#, "--resolution", "200"],
        &["render", "--map", r#"{"kind":"f_alpha","alpha":1.5}"#, "--samples", "1024"],
    ];
    for args in runs {
        let (a, code_a) = run_cli(args, "1")?;
        let (b, code_b) = run_cli(args, "0")?;
        let (c2, _) = run_cli(args, "3")?;
        check(code_a == 0 && code_b == 0, || format!("{args:?} exited with {code_a}, {code_b}"))?;
        check(!a.is_empty() && a == b && b == c2, || format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across 3 runs and thread counts", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("f_alpha norm estimates within the closed-form bound", f_alpha_norms),
        ("estimator calibration on log, Koebe and Möbius maps", calibration),
        ("closed form of S_{f_alpha} matches the general pipeline", cross_pipeline),
        ("Schwarz-Pick lemma gap over random Blaschke products", lemma),
        ("decomposition of Sh holds over random shears", decomposition),
        ("dilatation criterion: harmonic Möbius pass, f_1 fails", dilatation_criterion),
        ("root constant of 2c tan c = 1", root_constant),
        ("injectivity scans of f_1.5 and f_1", injectivity),
        ("boundary crossings and cusps of f_1 and f_1.5", boundary_geometry),
        ("affine invariance of S_f and |omega*|", affine_invariance),
        ("reduction to holomorphic operators and Möbius invariance", reduction_and_invariance),
        ("deterministic CLI output", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", k + 1),
            Err(why) => {
                println!("FAIL [{:>2}] {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
