//! Pre-Schwarzian and Schwarzian operators (holomorphic and harmonic), the
//! hyperbolic derivative of the dilatation, the harmonic order operator, and a
//! sampled lower bound for the Schwarzian norm
//! `sup (1 - |z|^2)^2 |S_f(z)|` over the disk.

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::maps::{one_minus_norm_sqr, Family, HarmonicMap, Holomorphic, LocalData};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest radius sampled for maps without a cancellation-free closed form.
pub const GENERIC_RADIUS_CAP: f64 = 1.0 - 1e-6;

/// `lambda(z) = 1 / (1 - |z|^2)`.
pub fn hyperbolic_density(z: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not in the open unit disk")));
    }
    Ok(1.0 / one_minus_norm_sqr(z))
}

fn nonvanishing_derivative(j: &Jet) -> Result<()> {
    if j.d1() == ZERO {
        Err(Error::singular(j.base(), "derivative vanishes (not locally univalent)"))
    } else {
        Ok(())
    }
}

/// `f'' / f'`.
pub fn pre_schwarzian(j: &Jet) -> Result<Complex64> {
    nonvanishing_derivative(j)?;
    Ok(j.d2() / j.d1())
}

/// `f''' / f' - (3/2) (f'' / f')^2`.
pub fn schwarzian(j: &Jet) -> Result<Complex64> {
    nonvanishing_derivative(j)?;
    let p = j.d2() / j.d1();
    Ok(j.d3() / j.d1() - 1.5 * p * p)
}

/// Hyperbolic derivative `(1 - |z|^2) omega'(z) / (1 - |omega(z)|^2)` of a self-map.
pub fn omega_star(omega: &Holomorphic, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not in the open unit disk")));
    }
    let j = omega.jet(z)?;
    let modulus = j.value().norm();
    if !(modulus < 1.0) {
        return Err(Error::SensePreservation { z, modulus });
    }
    Ok(one_minus_norm_sqr(z) * j.d1() / one_minus_norm_sqr(j.value()))
}

/// All pointwise operators of a harmonic map at one interior point.
#[derive(Debug, Clone, Copy)]
pub struct Operators {
    pub z: Complex64,
    /// `1 - |z|^2`
    pub weight: f64,
    /// `Ph = h'' / h'`
    pub ph: Complex64,
    /// `Sh`
    pub sh: Complex64,
    /// Harmonic pre-Schwarzian `P_f`
    pub pre_schwarzian: Complex64,
    /// Harmonic Schwarzian `S_f`
    pub schwarzian: Complex64,
    pub omega: Complex64,
    pub omega_d1: Complex64,
    pub omega_d2: Complex64,
    /// `omega*`
    pub omega_star: Complex64,
    /// `A_f = (1/2)(1 - |z|^2) P_f - conj(z)`
    pub harmonic_order: Complex64,
}

impl Operators {
    pub fn at(f: &HarmonicMap, z: Complex64) -> Result<Self> {
        Ok(Self::from_local(&f.local(z)?))
    }

    pub fn from_local(local: &LocalData) -> Self {
        let z = local.z;
        let hp = local.h_prime;
        let ph = hp.d1() / hp.value();
        let sh = hp.d2() / hp.value() - 1.5 * ph * ph;
        let (w, w1, w2) = (local.omega.value(), local.omega.d1(), local.omega.d2());
        let t = one_minus_norm_sqr(w);
        let s = one_minus_norm_sqr(z);
        let q = w.conj() * w1 / t;
        let pre = ph - q;
        let schw = sh + (w.conj() / t) * (ph * w1 - w2) - 1.5 * q * q;
        Operators {
            z,
            weight: s,
            ph,
            sh,
            pre_schwarzian: pre,
            schwarzian: schw,
            omega: w,
            omega_d1: w1,
            omega_d2: w2,
            omega_star: s * w1 / t,
            harmonic_order: 0.5 * s * pre - z.conj(),
        }
    }
}

/// `P_f = Ph - conj(omega) omega' / (1 - |omega|^2)`.
pub fn harmonic_pre_schwarzian(f: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    Ok(Operators::at(f, z)?.pre_schwarzian)
}

/// `S_f = Sh + conj(omega)/(1-|omega|^2) (h''/h' omega' - omega'') - (3/2)(omega' conj(omega)/(1-|omega|^2))^2`.
pub fn harmonic_schwarzian(f: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    Ok(Operators::at(f, z)?.schwarzian)
}

pub fn harmonic_order(f: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    Ok(Operators::at(f, z)?.harmonic_order)
}

/// `(1 - |z|^2)^2 |S_f(z)|`. For the `f_alpha` family the powers of
/// `1 - |z|^2` are cancelled analytically first.
pub fn weighted_schwarzian(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    match f.family() {
        Some(Family::FAlpha(alpha)) => weighted_f_alpha(alpha, z),
        None => {
            let ops = Operators::at(f, z)?;
            Ok(ops.weight * ops.weight * ops.schwarzian.norm())
        }
    }
}

fn weighted_f_alpha(alpha: f64, z: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not in the open unit disk")));
    }
    let s = one_minus_norm_sqr(z);
    let u = ONE - z;
    let zb = z.conj();
    let v = (1.0 - alpha * alpha) * s * s / (2.0 * u * u) + (1.0 - alpha) * zb * s / u - 1.5 * zb * zb;
    Ok(v.norm())
}

/// Closed form of `S_{f_alpha}(z)`.
pub fn s_f_alpha_closed_form(alpha: f64, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not in the open unit disk")));
    }
    let s = one_minus_norm_sqr(z);
    let u = ONE - z;
    let zb = z.conj();
    Ok((1.0 - alpha * alpha) / (2.0 * u * u) + (1.0 - alpha) * zb / (s * u) - 1.5 * zb * zb / (s * s))
}

/// Upper bound `2(alpha^2 - 1) + 2(alpha - 1) + 3/2` for the norm of `S_{f_alpha}`, `alpha >= 1`.
pub fn norm_bound_f_alpha(alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("bound requires alpha >= 1, got {alpha}")));
    }
    Ok(2.0 * (alpha * alpha - 1.0) + 2.0 * (alpha - 1.0) + 1.5)
}

// ---------------------------------------------------------------------------
// Sampling grid
// ---------------------------------------------------------------------------

/// Polar sampling grid: the origin plus `levels` circles of radius
/// `r_k = 1 - (1 - r_max) 2^(levels - k)`, `k = 1..=levels`, the `k`-th
/// carrying `round(angular * 2^(k/2))` equispaced points. Circles with
/// nonpositive radius are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub levels: usize,
    pub angular: usize,
    pub r_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            levels: 14,
            angular: 64,
            r_max: 1.0 - 2f64.powi(-14),
        }
    }
}

impl GridSpec {
    pub fn new(levels: usize, angular: usize, r_max: f64) -> Result<Self> {
        let g = GridSpec { levels, angular, r_max };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 || self.angular == 0 {
            return Err(Error::domain("grid needs at least one level and one angular sample"));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::domain(format!("grid r_max must lie in (0, 1), got {}", self.r_max)));
        }
        Ok(())
    }

    pub fn radius(&self, level: usize) -> f64 {
        1.0 - (1.0 - self.r_max) * 2f64.powi((self.levels - level) as i32)
    }

    pub fn angular_count(&self, level: usize) -> usize {
        ((self.angular as f64) * 2f64.powf(level as f64 / 2.0)).round() as usize
    }

    /// The grid restricted to its first `levels` circles.
    pub fn prefix(&self, levels: usize) -> GridSpec {
        GridSpec {
            levels,
            angular: self.angular,
            r_max: self.radius(levels),
        }
    }

    /// Sample points in canonical scan order, grouped by level (origin first, in its own group).
    pub fn levels_points(&self, radius_cap: f64) -> Vec<(usize, Vec<Complex64>)> {
        let mut out = vec![(0, vec![ZERO])];
        for k in 1..=self.levels {
            let r = self.radius(k).min(radius_cap);
            if r <= 0.0 {
                continue;
            }
            let n = self.angular_count(k);
            let pts = (0..n)
                .map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64))
                .collect();
            out.push((k, pts));
        }
        out
    }

    pub fn points(&self, radius_cap: f64) -> Vec<Complex64> {
        self.levels_points(radius_cap)
            .into_iter()
            .flat_map(|(_, p)| p)
            .collect()
    }
}

/// Radius cap used when sampling `f`.
pub fn radius_cap_for(f: &HarmonicMap) -> f64 {
    match f.family() {
        Some(Family::FAlpha(_)) => 1.0,
        None => GENERIC_RADIUS_CAP,
    }
}

// ---------------------------------------------------------------------------
// Norm estimation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub grid: GridSpec,
    pub lower_bound: f64,
}

/// A grid point where an operator could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub z: Complex64,
    pub reason: String,
}

/// Sampled lower bound for `sup (1 - |z|^2)^2 |S_f(z)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower_bound: f64,
    pub witness: Complex64,
    pub grid: GridSpec,
    /// Running maximum after each level; nondecreasing.
    pub history: Vec<HistoryEntry>,
    /// `2 b_K - b_{K-1}` from the last two history entries. Not a certified bound.
    pub extrapolated: Option<f64>,
    pub samples_evaluated: usize,
    pub skipped: Vec<SkippedPoint>,
}

/// One grid level: its index and every point with its evaluation.
pub(crate) type LevelValues<T> = (usize, Vec<(Complex64, Result<T>)>);

/// Evaluate `value` over the grid levels (in parallel) and return the results in scan order.
pub(crate) fn evaluate_grid<T, F>(grid: &GridSpec, radius_cap: f64, value: F) -> Vec<LevelValues<T>>
where
    T: Send,
    F: Fn(Complex64) -> Result<T> + Sync,
{
    grid.levels_points(radius_cap)
        .into_iter()
        .map(|(k, pts)| {
            let vals: Vec<(Complex64, Result<T>)> = pts.par_iter().map(|&z| (z, value(z))).collect();
            (k, vals)
        })
        .collect()
}

pub fn schwarzian_norm_estimate(f: &HarmonicMap, grid: &GridSpec) -> Result<NormEstimate> {
    grid.validate()?;
    let mut best = f64::NEG_INFINITY;
    let mut witness = ZERO;
    let mut history = Vec::new();
    let mut skipped = Vec::new();
    let mut evaluated = 0;

    for (k, vals) in evaluate_grid(grid, radius_cap_for(f), |z| weighted_schwarzian(f, z)) {
        for (z, v) in vals {
            match v {
                Ok(v) if v.is_finite() => {
                    evaluated += 1;
                    if v > best {
                        best = v;
                        witness = z;
                    }
                }
                Ok(v) => skipped.push(skip(z, format!("non-finite weighted value {v}"))),
                Err(e) => skipped.push(skip(z, e.to_string())),
            }
        }
        if k > 0 && best.is_finite() {
            history.push(HistoryEntry {
                grid: grid.prefix(k),
                lower_bound: best,
            });
        }
    }
    if !best.is_finite() {
        return Err(Error::Numeric {
            z: ZERO,
            reason: "no grid point could be evaluated".into(),
        });
    }
    let extrapolated = match history.as_slice() {
        [.., a, b] => Some(2.0 * b.lower_bound - a.lower_bound),
        _ => None,
    };
    Ok(NormEstimate {
        lower_bound: best,
        witness,
        grid: *grid,
        history,
        extrapolated,
        samples_evaluated: evaluated,
        skipped,
    })
}

fn skip(z: Complex64, reason: String) -> SkippedPoint {
    warn!("skipping grid point {z}: {reason}");
    SkippedPoint { z, reason }
}

impl NormEstimate {
    /// Re-estimate on `grid` and merge with `self`; the bound never decreases.
    pub fn refine(&self, f: &HarmonicMap, grid: &GridSpec) -> Result<NormEstimate> {
        let fresh = schwarzian_norm_estimate(f, grid)?;
        let (lower_bound, witness) = if fresh.lower_bound > self.lower_bound {
            (fresh.lower_bound, fresh.witness)
        } else {
            (self.lower_bound, self.witness)
        };
        let mut history = self.history.clone();
        history.push(HistoryEntry {
            grid: *grid,
            lower_bound,
        });
        let mut skipped = self.skipped.clone();
        skipped.extend(fresh.skipped);
        Ok(NormEstimate {
            lower_bound,
            witness,
            grid: *grid,
            extrapolated: fresh.extrapolated,
            history,
            samples_evaluated: self.samples_evaluated + fresh.samples_evaluated,
            skipped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Elementary;
    use crate::maps::{disk_automorphism, harmonic_mobius, make_f_alpha, MobiusTransform};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ell() -> Holomorphic {
        Holomorphic::elementary(
            Elementary::Log,
            Holomorphic::quotient(
                Holomorphic::polynomial(vec![ONE, ONE]),
                Holomorphic::polynomial(vec![ONE, -ONE]),
            ),
        )
    }

    #[test]
    fn density() {
        assert_eq!(hyperbolic_density(ZERO).unwrap(), 1.0);
        assert!((hyperbolic_density(c(0.5, 0.0)).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((hyperbolic_density(c(0.0, 0.8)).unwrap() - 1.0 / 0.36).abs() < 1e-13);
        assert!(hyperbolic_density(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn holomorphic_operators() {
        // 1/(1 - z) at 0
        let m = MobiusTransform::new(ZERO, ONE, -ONE, ONE).unwrap();
        assert!((pre_schwarzian(&m.jet(ZERO).unwrap()).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        for z in [c(0.2, 0.0), c(-0.3, 0.5)] {
            let aut = disk_automorphism(c(0.4, -0.2)).unwrap();
            assert!(schwarzian(&aut.jet(z).unwrap()).unwrap().norm() < 1e-13);
            assert!(schwarzian(&m.jet(z).unwrap()).unwrap().norm() < 1e-13);
        }
        let h2 = make_f_alpha(2.0).unwrap();
        let j = h2.analytic().jet(ZERO).unwrap();
        assert!((pre_schwarzian(&j).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((schwarzian(&j).unwrap() - c(-1.5, 0.0)).norm() < 1e-15);

        let affine = Holomorphic::polynomial(vec![c(0.3, 0.0), c(2.0, 1.0)]);
        assert_eq!(pre_schwarzian(&affine.jet(c(0.1, 0.1)).unwrap()).unwrap(), ZERO);

        assert!((schwarzian(&ell().jet(ZERO).unwrap()).unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        let z = c(0.3, 0.4);
        let expected = 2.0 / (ONE - z * z).powi(2);
        assert!((schwarzian(&ell().jet(z).unwrap()).unwrap() - expected).norm() < 1e-13);

        let flat = Jet::constant(ZERO, ONE);
        assert!(matches!(schwarzian(&flat), Err(Error::Singular { .. })));
    }

    #[test]
    fn harmonic_operator_examples() {
        let f1 = make_f_alpha(1.0).unwrap();
        assert!(harmonic_pre_schwarzian(&f1, ZERO).unwrap().norm() < 1e-16);
        assert!((harmonic_pre_schwarzian(&f1, c(0.5, 0.0)).unwrap() - c(-2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(harmonic_schwarzian(&f1, ZERO).unwrap().norm() < 1e-16);

        assert!((harmonic_order(&f1, c(0.5, 0.0)).unwrap() - c(-0.75, 0.0)).norm() < 1e-15);
        for alpha in [1.0, 1.5, 2.0] {
            let f = make_f_alpha(alpha).unwrap();
            assert!((harmonic_order(&f, ZERO).unwrap() - c((1.0 - alpha) / 2.0, 0.0)).norm() < 1e-15);
        }
        let id = HarmonicMap::holomorphic(Holomorphic::identity());
        let z = c(0.2, 0.7);
        assert_eq!(harmonic_order(&id, z).unwrap(), -z.conj());

        let hm = harmonic_mobius(disk_automorphism(c(0.3, 0.3)).unwrap(), c(0.2, -0.5)).unwrap();
        for z in [c(0.1, 0.2), c(-0.6, 0.3), c(0.0, -0.95)] {
            assert!(harmonic_schwarzian(&hm, z).unwrap().norm() < 1e-12);
            assert!(weighted_schwarzian(&hm, z).unwrap() < 1e-12);
        }
    }

    #[test]
    fn holomorphic_reduction() {
        let h = Holomorphic::polynomial(vec![ZERO, ONE, c(0.2, 0.1), c(-0.05, 0.02)]);
        let f = HarmonicMap::holomorphic(h.clone());
        for z in [c(0.1, 0.3), c(-0.5, -0.2), c(0.7, 0.0)] {
            let j = h.jet(z).unwrap();
            let a = harmonic_schwarzian(&f, z).unwrap();
            let b = schwarzian(&j).unwrap();
            assert!((a - b).norm() < 1e-13);
            assert!((harmonic_pre_schwarzian(&f, z).unwrap() - pre_schwarzian(&j).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn omega_star_examples() {
        let z = c(0.3, -0.4);
        assert!((omega_star(&Holomorphic::identity(), z).unwrap() - ONE).norm() < 1e-15);
        assert_eq!(omega_star(&Holomorphic::constant(c(0.4, 0.1)), z).unwrap(), ZERO);
        let sq = Holomorphic::polynomial(vec![ZERO, ZERO, ONE]);
        assert!((omega_star(&sq, c(0.5, 0.0)).unwrap() - c(0.8, 0.0)).norm() < 1e-15);
        let big = Holomorphic::polynomial(vec![ZERO, c(2.0, 0.0)]);
        assert!(matches!(omega_star(&big, c(0.6, 0.0)), Err(Error::SensePreservation { .. })));
    }

    #[test]
    fn weighted_examples() {
        let f1 = make_f_alpha(1.0).unwrap();
        assert!((weighted_schwarzian(&f1, c(0.8, 0.0)).unwrap() - 0.96).abs() < 1e-14);
        assert!((weighted_schwarzian(&f1, c(0.0, 0.8)).unwrap() - 0.96).abs() < 1e-14);
        let f2 = make_f_alpha(2.0).unwrap();
        assert!((weighted_schwarzian(&f2, ZERO).unwrap() - 1.5).abs() < 1e-15);
        // factored and generic pipelines agree away from the boundary
        let generic = HarmonicMap::new(f2.analytic().clone(), f2.coanalytic().clone());
        for z in [c(0.3, 0.2), c(-0.7, 0.1), c(0.9, -0.3)] {
            let a = weighted_schwarzian(&f2, z).unwrap();
            let b = weighted_schwarzian(&generic, z).unwrap();
            assert!((a - b).abs() < 1e-11 * (1.0 + a), "{a} vs {b}");
        }
    }

    #[test]
    fn closed_form_examples() {
        for alpha in [1.0, 1.5, 2.0] {
            let v = s_f_alpha_closed_form(alpha, ZERO).unwrap();
            assert!((v - c((1.0 - alpha * alpha) / 2.0, 0.0)).norm() < 1e-15);
        }
        let z = c(0.3, 0.5);
        let s = 1.0 - z.norm_sqr();
        let expected = -3.0 * z.conj() * z.conj() / (2.0 * s * s);
        assert!((s_f_alpha_closed_form(1.0, z).unwrap() - expected).norm() < 1e-14);
        let v = s_f_alpha_closed_form(1.5, c(0.5, 0.0)).unwrap();
        assert!((v - c(-23.0 / 6.0, 0.0)).norm() < 1e-14);
        let f = make_f_alpha(1.5).unwrap();
        assert!((harmonic_schwarzian(&f, c(0.5, 0.0)).unwrap() - c(-23.0 / 6.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(norm_bound_f_alpha(1.0).unwrap(), 1.5);
        assert_eq!(norm_bound_f_alpha(1.5).unwrap(), 5.0);
        assert_eq!(norm_bound_f_alpha(2.0).unwrap(), 9.5);
        assert!(norm_bound_f_alpha(0.9).is_err());
    }

    #[test]
    fn grid_layout() {
        let g = GridSpec::default();
        assert_eq!(g.radius(1), 0.5);
        assert_eq!(g.radius(14), 1.0 - 2f64.powi(-14));
        assert_eq!(g.angular_count(2), 128);
        let pts = g.points(1.0);
        assert_eq!(pts[0], ZERO);
        assert_eq!(pts.len(), 1 + (1..=14).map(|k| g.angular_count(k)).sum::<usize>());
        // prefixes reproduce the same circles
        let p = g.prefix(5);
        assert_eq!(p.radius(3), g.radius(3));
        // levels with nonpositive radius are dropped
        let wide = GridSpec::new(14, 8, 0.9).unwrap();
        assert!(wide.levels_points(1.0).iter().all(|(k, _)| *k == 0 || wide.radius(*k) > 0.0));
        assert!(GridSpec::new(0, 8, 0.5).is_err());
        assert!(GridSpec::new(3, 8, 1.0).is_err());
    }

    #[test]
    fn norm_estimates() {
        let hm = harmonic_mobius(MobiusTransform::identity(), c(0.5, 0.0)).unwrap();
        let est = schwarzian_norm_estimate(&hm, &GridSpec::new(8, 32, 0.999).unwrap()).unwrap();
        assert_eq!(est.lower_bound, 0.0);

        let f1 = make_f_alpha(1.0).unwrap();
        let grid = GridSpec::new(14, 64, 1.0 - 1e-4).unwrap();
        let est = schwarzian_norm_estimate(&f1, &grid).unwrap();
        let expected = 1.5 * grid.r_max * grid.r_max;
        assert!((est.lower_bound - expected).abs() < 1e-12);
        assert!((weighted_schwarzian(&f1, est.witness).unwrap() - est.lower_bound).abs() < 1e-12);
        assert!(est.history.windows(2).all(|w| w[0].lower_bound <= w[1].lower_bound));
        assert!(est.skipped.is_empty());

        let ell = HarmonicMap::holomorphic(ell());
        let est = schwarzian_norm_estimate(&ell, &GridSpec::default()).unwrap();
        assert!((est.lower_bound - 2.0).abs() < 1e-3);
    }

    #[test]
    fn refinement_never_decreases() {
        let f = make_f_alpha(1.5).unwrap();
        let coarse = schwarzian_norm_estimate(&f, &GridSpec::new(10, 64, 1.0 - 1e-3).unwrap()).unwrap();
        let fine = coarse.refine(&f, &GridSpec::new(4, 16, 0.5).unwrap()).unwrap();
        assert!(fine.lower_bound >= coarse.lower_bound);
        assert!(fine.history.windows(2).all(|w| w[0].lower_bound <= w[1].lower_bound));
        let finer = fine.refine(&f, &GridSpec::default()).unwrap();
        assert!(finer.lower_bound >= fine.lower_bound);
    }

    #[test]
    fn failed_points_are_reported() {
        // |omega| = 2.5|z| exceeds 1 on every circle of this grid
        let f = HarmonicMap::from_dilatation(Holomorphic::identity(), Holomorphic::polynomial(vec![ZERO, c(2.5, 0.0)]));
        let est = schwarzian_norm_estimate(&f, &GridSpec::new(3, 4, 0.875).unwrap()).unwrap();
        assert_eq!(est.samples_evaluated, 1);
        assert_eq!(est.witness, ZERO);
        assert!(est.skipped.iter().all(|p| p.reason.contains("sense-preservation")));
        assert_eq!(est.skipped.len(), GridSpec::new(3, 4, 0.875).unwrap().points(1.0).len() - 1);
    }
}
