//! Seeded randomized verification suites.
//!
//! Each suite draws from its own ChaCha8 stream of the user seed, so adding a
//! suite never perturbs the others. Generation is sequential; evaluation runs
//! in parallel and is collected in order, so reports depend only on the seed.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{affine_invariance_residuals, lemma_gap, sh_decomposition_residual};
use crate::error::Result;
use crate::maps::{disk_automorphism, make_f_alpha, HarmonicMap, Holomorphic};
use crate::schwarzian::{harmonic_schwarzian, s_f_alpha_closed_form, schwarzian_norm_estimate, GridSpec};

pub const DEFAULT_SEED: u64 = 42;

const STREAM_LEMMA: u64 = 1;
const STREAM_DECOMPOSITION: u64 = 2;
const STREAM_AFFINE: u64 = 3;
const STREAM_CROSS_PIPELINE: u64 = 4;
const STREAM_AUTOMORPHISM: u64 = 5;

pub const LEMMA_PRODUCTS: usize = 20;
pub const LEMMA_POINTS: usize = 500;
pub const LEMMA_TOLERANCE: f64 = 1e-12;
pub const DECOMPOSITION_MAPS: usize = 10;
pub const DECOMPOSITION_POINTS: usize = 1000;
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-9;
pub const AFFINE_SAMPLES: usize = 1000;
pub const AFFINE_TOLERANCE: f64 = 1e-10;
pub const CROSS_PIPELINE_POINTS: usize = 1000;
pub const CROSS_PIPELINE_TOLERANCE: f64 = 1e-9;
pub const AUTOMORPHISMS: usize = 5;
pub const AUTOMORPHISM_TOLERANCE: f64 = 2e-3;

/// Largest modulus of random sample points.
const SAMPLE_RADIUS: f64 = 0.999;
/// Sample radius for suites whose operators lose digits as `|omega| -> 1`.
const INTERIOR_RADIUS: f64 = 0.99;
const ZERO_RADIUS: f64 = 0.9;
const AFFINE_RADIUS: f64 = 0.9;
/// `|S_f|` reaches 1e3 near the circle for Blaschke dilatations, where an absolute
/// 1e-10 residual is below double-precision resolution.
const AFFINE_POINT_RADIUS: f64 = 0.95;
const AUTOMORPHISM_RADIUS: f64 = 0.5;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Uniform (area measure) point in the disk of radius `radius`.
pub fn random_disk_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

fn random_unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, TAU * rng.gen::<f64>())
}

/// Blaschke product with `degree` zeros of modulus below [`ZERO_RADIUS`].
pub fn random_blaschke<R: Rng>(rng: &mut R, degree: usize) -> Result<Holomorphic> {
    let zeros = (0..degree).map(|_| random_disk_point(rng, ZERO_RADIUS)).collect();
    Holomorphic::blaschke(zeros, random_unimodular(rng))
}

/// `z + a_2 z^2 + ... + a_d z^d` with `sum k |a_k| < 1`, so `|h' - 1| < 1` on the disk.
pub fn random_locally_univalent_polynomial<R: Rng>(rng: &mut R, degree: usize) -> Holomorphic {
    let mut coeffs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let budget = 0.95;
    let raw: Vec<Complex64> = (2..=degree).map(|_| random_disk_point(rng, 1.0)).collect();
    let weight: f64 = raw.iter().enumerate().map(|(i, a)| (i + 2) as f64 * a.norm()).sum();
    let scale = if weight > budget { budget / weight } else { 1.0 };
    coeffs.extend(raw.iter().map(|a| a * scale));
    Holomorphic::polynomial(coeffs)
}

/// Harmonic map with polynomial analytic part of degree `2..=4` and Blaschke dilatation of degree `1..=2`.
pub fn random_shear<R: Rng>(rng: &mut R) -> Result<HarmonicMap> {
    let degree = rng.gen_range(2..=4);
    let h = random_locally_univalent_polynomial(rng, degree);
    let omega_degree = rng.gen_range(1..=2);
    let omega = random_blaschke(rng, omega_degree)?;
    Ok(HarmonicMap::from_dilatation(h, omega))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub samples_evaluated: usize,
    pub unverified: usize,
    /// Largest residual (or gap) observed.
    pub max_residual: f64,
    pub worst_case: usize,
    pub worst_point: Complex64,
    pub tolerance: f64,
    pub passed: bool,
    /// Suite-specific named quantities.
    pub details: BTreeMap<String, f64>,
}

struct MaxScan {
    max: f64,
    case: usize,
    point: Complex64,
    evaluated: usize,
    unverified: usize,
}

impl MaxScan {
    fn new() -> Self {
        MaxScan {
            max: f64::NEG_INFINITY,
            case: 0,
            point: Complex64::new(0.0, 0.0),
            evaluated: 0,
            unverified: 0,
        }
    }

    fn push(&mut self, case: usize, z: Complex64, v: Result<f64>) {
        match v {
            Ok(v) if v.is_finite() => {
                self.evaluated += 1;
                if v > self.max {
                    self.max = v;
                    self.case = case;
                    self.point = z;
                }
            }
            Ok(v) => {
                log::warn!("case {case}, point {z}: non-finite value {v}");
                self.unverified += 1;
            }
            Err(e) => {
                log::warn!("case {case}, point {z}: {e}");
                self.unverified += 1;
            }
        }
    }

    fn report(self, suite: &str, seed: u64, cases: usize, tolerance: f64, details: BTreeMap<String, f64>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            cases,
            samples_evaluated: self.evaluated,
            unverified: self.unverified,
            max_residual: self.max,
            worst_case: self.case,
            worst_point: self.point,
            tolerance,
            passed: self.unverified == 0 && self.evaluated > 0 && self.max <= tolerance,
            details,
        }
    }
}

fn evaluate_points<F>(points: &[Complex64], value: F) -> Vec<Result<f64>>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    points.par_iter().map(|&z| value(z)).collect()
}

/// Lemma gap over random Blaschke products of degree 1..=4, plus the equality cases
/// `omega = z` (everywhere) and `omega = z^2` at the origin.
pub fn lemma_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = stream(seed, STREAM_LEMMA);
    let mut scan = MaxScan::new();
    for case in 0..LEMMA_PRODUCTS {
        let degree = rng.gen_range(1..=4);
        let omega = random_blaschke(&mut rng, degree)?;
        let points: Vec<Complex64> = (0..LEMMA_POINTS).map(|_| random_disk_point(&mut rng, SAMPLE_RADIUS)).collect();
        for (z, v) in points.iter().zip(evaluate_points(&points, |z| lemma_gap(&omega, z))) {
            scan.push(case, *z, v);
        }
    }
    let identity = Holomorphic::identity();
    let identity_gap = (0..LEMMA_POINTS)
        .map(|_| lemma_gap(&identity, random_disk_point(&mut rng, SAMPLE_RADIUS)).map(f64::abs))
        .try_fold(0.0_f64, |acc, g| g.map(|g| acc.max(g)))?;
    let square = Holomorphic::polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let square_gap = lemma_gap(&square, Complex64::new(0.0, 0.0))?.abs();
    let mut details = BTreeMap::new();
    details.insert("identity_max_abs_gap".to_string(), identity_gap);
    details.insert("square_at_origin_abs_gap".to_string(), square_gap);
    let mut report = scan.report("lemma", seed, LEMMA_PRODUCTS, LEMMA_TOLERANCE, details);
    report.passed &= identity_gap <= LEMMA_TOLERANCE && square_gap <= LEMMA_TOLERANCE;
    Ok(report)
}

/// Residual of the analytic-part decomposition of the harmonic Schwarzian over random shears.
pub fn decomposition_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = stream(seed, STREAM_DECOMPOSITION);
    let mut scan = MaxScan::new();
    for case in 0..DECOMPOSITION_MAPS {
        let f = random_shear(&mut rng)?;
        let points: Vec<Complex64> = (0..DECOMPOSITION_POINTS)
            .map(|_| random_disk_point(&mut rng, INTERIOR_RADIUS))
            .collect();
        for (z, v) in points.iter().zip(evaluate_points(&points, |z| sh_decomposition_residual(&f, z))) {
            scan.push(case, *z, v);
        }
    }
    Ok(scan.report("identity", seed, DECOMPOSITION_MAPS, DECOMPOSITION_TOLERANCE, BTreeMap::new()))
}

/// `|S_F - S_f|` and `||omega_F*| - |omega*||` for `F = f + a conj(f)` over random `(f, a, z)`.
pub fn affine_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = stream(seed, STREAM_AFFINE);
    let mut cases = Vec::with_capacity(AFFINE_SAMPLES);
    for _ in 0..AFFINE_SAMPLES {
        let f = random_shear(&mut rng)?;
        let a = random_disk_point(&mut rng, AFFINE_RADIUS);
        let z = random_disk_point(&mut rng, AFFINE_POINT_RADIUS);
        cases.push((f, a, z));
    }
    let results: Vec<Result<(f64, f64)>> = cases
        .par_iter()
        .map(|(f, a, z)| affine_invariance_residuals(f, *a, *z))
        .collect();
    let mut scan = MaxScan::new();
    let (mut max_s, mut max_star) = (0.0_f64, 0.0_f64);
    for (case, ((_, _, z), r)) in cases.iter().zip(results).enumerate() {
        if let Ok((ds, dstar)) = &r {
            max_s = max_s.max(*ds);
            max_star = max_star.max(*dstar);
        }
        scan.push(case, *z, r.map(|(ds, dstar)| ds.max(dstar)));
    }
    let mut details = BTreeMap::new();
    details.insert("max_schwarzian_residual".to_string(), max_s);
    details.insert("max_omega_star_residual".to_string(), max_star);
    Ok(scan.report("affine", seed, AFFINE_SAMPLES, AFFINE_TOLERANCE, details))
}

/// `|closed form - general pipeline|` for `S_{f_alpha}` at random points with `|z| <= 0.999`.
pub fn cross_pipeline_suite(seed: u64, alphas: &[f64]) -> Result<SuiteReport> {
    let mut rng = stream(seed, STREAM_CROSS_PIPELINE);
    let mut scan = MaxScan::new();
    let mut details = BTreeMap::new();
    for (case, &alpha) in alphas.iter().enumerate() {
        let f = make_f_alpha(alpha)?;
        let points: Vec<Complex64> = (0..CROSS_PIPELINE_POINTS)
            .map(|_| random_disk_point(&mut rng, SAMPLE_RADIUS))
            .collect();
        let values = evaluate_points(&points, |z| {
            Ok((s_f_alpha_closed_form(alpha, z)? - harmonic_schwarzian(&f, z)?).norm())
        });
        let mut local = 0.0_f64;
        for (z, v) in points.iter().zip(values) {
            if let Ok(v) = &v {
                local = local.max(*v);
            }
            scan.push(case, *z, v);
        }
        details.insert(format!("alpha={alpha}"), local);
    }
    Ok(scan.report("cross_pipeline", seed, alphas.len(), CROSS_PIPELINE_TOLERANCE, details))
}

/// Norm estimates of `h o phi` for random disk automorphisms `phi`, compared with that of `h`.
pub fn automorphism_suite(seed: u64, h: &Holomorphic, grid: &GridSpec) -> Result<SuiteReport> {
    let mut rng = stream(seed, STREAM_AUTOMORPHISM);
    let base = schwarzian_norm_estimate(&HarmonicMap::holomorphic(h.clone()), grid)?.lower_bound;
    let mut scan = MaxScan::new();
    let mut details = BTreeMap::new();
    details.insert("base".to_string(), base);
    for case in 0..AUTOMORPHISMS {
        let a = random_disk_point(&mut rng, AUTOMORPHISM_RADIUS);
        let phi = disk_automorphism(a)?;
        let composed = Holomorphic::compose(h.clone(), Holomorphic::Mobius(phi));
        let estimate = schwarzian_norm_estimate(&HarmonicMap::holomorphic(composed), grid);
        let estimate = estimate.map(|e| e.lower_bound);
        if let Ok(e) = &estimate {
            details.insert(format!("automorphism_{case}"), *e);
        }
        scan.push(case, a, estimate.map(|e| (e - base).abs()));
    }
    Ok(scan.report("automorphism", seed, AUTOMORPHISMS, AUTOMORPHISM_TOLERANCE, details))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, 1).gen()).collect();
        let mut r = stream(7, 1);
        let b: Vec<u64> = (0..4).map(|_| r.gen()).collect();
        let mut s = stream(7, 2);
        let c: Vec<u64> = (0..4).map(|_| s.gen()).collect();
        assert_eq!(a[0], b[0]);
        assert_ne!(b, c);
    }

    #[test]
    fn random_polynomials_are_locally_univalent() {
        let mut rng = stream(3, 9);
        for _ in 0..50 {
            let h = random_locally_univalent_polynomial(&mut rng, 4);
            let Holomorphic::Polynomial(coeffs) = &h else { panic!() };
            let weight: f64 = coeffs.iter().enumerate().skip(2).map(|(k, a)| k as f64 * a.norm()).sum();
            assert!(weight < 1.0);
        }
    }

    #[test]
    fn random_points_stay_inside() {
        let mut rng = stream(1, 1);
        for _ in 0..1000 {
            assert!(random_disk_point(&mut rng, SAMPLE_RADIUS).norm() <= SAMPLE_RADIUS);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        assert_eq!(lemma_suite(5).unwrap(), lemma_suite(5).unwrap());
        assert_eq!(affine_suite(5).unwrap(), affine_suite(5).unwrap());
    }
}
