//! Sampled univalence criteria for harmonic maps and the identities behind them.
//!
//! Every check here evaluates a pointwise inequality on a [`GridSpec`] and
//! reports the smallest margin `rhs - lhs`. A satisfied verdict means the
//! hypothesis held on every sample; it is evidence, not a proof.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{affine_transform, one_minus_norm_sqr, HarmonicMap, Holomorphic};
use crate::schwarzian::{evaluate_grid, harmonic_schwarzian, schwarzian, GridSpec, Operators, GENERIC_RADIUS_CAP};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Which inequality a verdict refers to. Serialized names are part of the report format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionKind {
    /// `(1-|z|^2)^2 |S_f| + 2 |omega* A_f| <= |omega*|^2 / 2`
    #[serde(rename = "thm3")]
    DilatationCriterion,
    /// `|Sh(z)| <= 2 c^2` with `2 c tan c = 1`
    #[serde(rename = "thm4")]
    AnalyticPartCriterion,
    /// Schwarz–Pick second-coefficient inequality for the dilatation.
    #[serde(rename = "lemma")]
    SchwarzPickLemma,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: CriterionKind,
    pub satisfied: bool,
    /// Some samples could not be evaluated and no violation was found among the rest.
    pub inconclusive: bool,
    /// Minimum over samples of `rhs - lhs`.
    pub worst_margin: f64,
    pub worst_point: Complex64,
    pub samples_evaluated: usize,
    pub unverified: usize,
    pub tolerance: f64,
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const ANALYTIC_PART_NOTE: &str =
    "pointwise unweighted bound |Sh(z)| <= 2c^2, no hyperbolic weight applied";

/// Running minimum of margins with first-minimizer tie-breaking.
struct MarginScan {
    worst: f64,
    point: Complex64,
    evaluated: usize,
    unverified: usize,
}

impl MarginScan {
    fn new() -> Self {
        MarginScan {
            worst: f64::INFINITY,
            point: Complex64::new(0.0, 0.0),
            evaluated: 0,
            unverified: 0,
        }
    }

    fn push(&mut self, z: Complex64, margin: Result<f64>) {
        match margin {
            Ok(m) if m.is_finite() => {
                self.evaluated += 1;
                if m < self.worst {
                    self.worst = m;
                    self.point = z;
                }
            }
            Ok(m) => {
                log::warn!("unverified sample {z}: non-finite margin {m}");
                self.unverified += 1;
            }
            Err(e) => {
                log::warn!("unverified sample {z}: {e}");
                self.unverified += 1;
            }
        }
    }

    fn verdict(self, criterion: CriterionKind, tolerance: f64, grid: Option<GridSpec>) -> CriterionVerdict {
        let violated = self.worst < -tolerance;
        CriterionVerdict {
            criterion,
            satisfied: !violated && self.unverified == 0 && self.evaluated > 0,
            inconclusive: !violated && (self.unverified > 0 || self.evaluated == 0),
            worst_margin: self.worst,
            worst_point: self.point,
            samples_evaluated: self.evaluated,
            unverified: self.unverified,
            tolerance,
            grid,
            note: (criterion == CriterionKind::AnalyticPartCriterion).then(|| ANALYTIC_PART_NOTE.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Schwarz–Pick lemma
// ---------------------------------------------------------------------------

/// `|(1-|z|^2)^2 omega''/(2(1-|omega|^2)) - conj(z) omega* + conj(omega) omega*^2| - (1 - |omega*|^2)`;
/// nonpositive for every holomorphic self-map of the disk.
pub fn lemma_gap(omega: &Holomorphic, z: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not in the open unit disk")));
    }
    let j = omega.jet(z)?;
    let w = j.value();
    let modulus = w.norm();
    if !(modulus < 1.0) {
        return Err(Error::SensePreservation { z, modulus });
    }
    let s = one_minus_norm_sqr(z);
    let t = one_minus_norm_sqr(w);
    let star = s * j.d1() / t;
    Ok(lemma_bracket(z, s, t, w, star, j.d2()).norm() - (1.0 - star.norm_sqr()))
}

/// `(1-|z|^2)^2 omega''/(2(1-|omega|^2)) - conj(z) omega* + conj(omega) omega*^2`
fn lemma_bracket(z: Complex64, s: f64, t: f64, w: Complex64, star: Complex64, w2: Complex64) -> Complex64 {
    s * s * w2 / (2.0 * t) - z.conj() * star + w.conj() * star * star
}

/// Lemma gap sampled on a grid, reported as a verdict with margin `-gap`.
pub fn check_lemma(omega: &Holomorphic, grid: &GridSpec, tolerance: f64) -> Result<CriterionVerdict> {
    grid.validate()?;
    let mut scan = MarginScan::new();
    for (_, vals) in evaluate_grid(grid, GENERIC_RADIUS_CAP, |z| lemma_gap(omega, z).map(|g| -g)) {
        for (z, m) in vals {
            scan.push(z, m);
        }
    }
    Ok(scan.verdict(CriterionKind::SchwarzPickLemma, tolerance, Some(*grid)))
}

/// Lemma gap over an explicit point list (used by the randomized suites).
pub fn check_lemma_at(omega: &Holomorphic, points: &[Complex64], tolerance: f64) -> CriterionVerdict {
    let mut scan = MarginScan::new();
    for &z in points {
        scan.push(z, lemma_gap(omega, z).map(|g| -g));
    }
    scan.verdict(CriterionKind::SchwarzPickLemma, tolerance, None)
}

// ---------------------------------------------------------------------------
// Criteria on harmonic maps
// ---------------------------------------------------------------------------

/// `|omega*|^2 / 2 - (1-|z|^2)^2 |S_f| - 2 |omega* A_f|`.
pub fn dilatation_criterion_margin(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    let ops = Operators::at(f, z)?;
    let s = ops.weight;
    Ok(0.5 * ops.omega_star.norm_sqr()
        - s * s * ops.schwarzian.norm()
        - 2.0 * (ops.omega_star * ops.harmonic_order).norm())
}

/// `2 c^2 - |Sh(z)|`.
pub fn analytic_part_margin(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    let ops = Operators::at(f, z)?;
    let c = solve_c();
    Ok(2.0 * c * c - ops.sh.norm())
}

fn margin_for(kind: CriterionKind, f: &HarmonicMap, z: Complex64) -> Result<f64> {
    match kind {
        CriterionKind::DilatationCriterion => dilatation_criterion_margin(f, z),
        CriterionKind::AnalyticPartCriterion => analytic_part_margin(f, z),
        CriterionKind::SchwarzPickLemma => lemma_gap(f.dilatation(), z).map(|g| -g),
    }
}

fn run_check(
    kind: CriterionKind,
    f: &HarmonicMap,
    grid: &GridSpec,
    tolerance: f64,
    carried: Option<Complex64>,
) -> Result<CriterionVerdict> {
    grid.validate()?;
    let mut scan = MarginScan::new();
    if let Some(z) = carried {
        scan.push(z, margin_for(kind, f, z));
    }
    for (_, vals) in evaluate_grid(grid, GENERIC_RADIUS_CAP, |z| margin_for(kind, f, z)) {
        for (z, m) in vals {
            scan.push(z, m);
        }
    }
    Ok(scan.verdict(kind, tolerance, Some(*grid)))
}

/// Sampled check of `(1-|z|^2)^2 |S_f| + 2 |omega* A_f| <= |omega*|^2 / 2`.
pub fn check_dilatation_criterion(f: &HarmonicMap, grid: &GridSpec, tolerance: f64) -> Result<CriterionVerdict> {
    run_check(CriterionKind::DilatationCriterion, f, grid, tolerance, None)
}

/// Sampled check of `|Sh(z)| <= 2 c^2`, implemented without hyperbolic weight.
pub fn check_analytic_part_criterion(f: &HarmonicMap, grid: &GridSpec, tolerance: f64) -> Result<CriterionVerdict> {
    run_check(CriterionKind::AnalyticPartCriterion, f, grid, tolerance, None)
}

impl CriterionVerdict {
    /// Re-run on a new grid, re-checking the previous worst point so that a
    /// found violation is never lost.
    pub fn refine(&self, f: &HarmonicMap, grid: &GridSpec) -> Result<CriterionVerdict> {
        run_check(self.criterion, f, grid, self.tolerance, Some(self.worst_point))
    }
}

/// `|(1-|z|^2)^2 Sh - rhs|` where `rhs` is the rearrangement of the harmonic
/// Schwarzian in terms of `S_f`, `A_f`, `omega*` and the lemma bracket.
/// `Sh` on the left is taken from the jet of `h` itself.
pub fn sh_decomposition_residual(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    let ops = Operators::at(f, z)?;
    let sh = schwarzian(&f.analytic().jet(z)?)?;
    let s = ops.weight;
    let w = ops.omega;
    let t = one_minus_norm_sqr(w);
    let star = ops.omega_star;
    let wb_star = w.conj() * star;
    let lhs = s * s * sh;
    let rhs = s * s * ops.schwarzian - 2.0 * wb_star * ops.harmonic_order - 1.5 * wb_star * wb_star
        + 2.0 * w.conj() * lemma_bracket(z, s, t, w, star, ops.omega_d2);
    Ok((lhs - rhs).norm())
}

/// `(|S_F - S_f|, ||omega_F*| - |omega*||)` for `F = f + a conj(f)`.
pub fn affine_invariance_residuals(f: &HarmonicMap, a: Complex64, z: Complex64) -> Result<(f64, f64)> {
    let big = affine_transform(f, a)?;
    let ops_f = Operators::at(f, z)?;
    let ops_big = Operators::at(&big, z)?;
    let ds = (harmonic_schwarzian(&big, z)? - ops_f.schwarzian).norm();
    let dstar = (ops_big.omega_star.norm() - ops_f.omega_star.norm()).abs();
    Ok((ds, dstar))
}

// ---------------------------------------------------------------------------
// The constant c with 2 c tan c = 1
// ---------------------------------------------------------------------------

pub const ROOT_BRACKET: (f64, f64) = (1e-6, std::f64::consts::FRAC_PI_2 - 1e-6);

fn root_equation(x: f64) -> f64 {
    2.0 * x * x.tan() - 1.0
}

/// Smallest positive solution of `2 x tan x = 1`.
pub fn solve_c() -> f64 {
    solve_c_with_cap(200)
}

/// Bisection on [`ROOT_BRACKET`], where `2 x tan x - 1` increases through one sign change.
/// Stops when the midpoint no longer splits the bracket or after `max_iter` steps.
pub fn solve_c_with_cap(max_iter: usize) -> f64 {
    let (mut lo, mut hi) = ROOT_BRACKET;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if root_equation(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if root_equation(lo).abs() <= root_equation(hi).abs() {
        lo
    } else {
        hi
    }
}
