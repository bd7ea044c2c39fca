//! Composite Gauss–Legendre quadrature along straight segments in the plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

// 8-point rule on [-1, 1]; nodes come in +/- pairs.
const NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

pub const MAX_PANELS: usize = 1 << 14;
pub const TOLERANCE: f64 = 1e-12;

fn composite<F>(f: &F, a: Complex64, b: Complex64, panels: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let step = (b - a) / panels as f64;
    let half = step * 0.5;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = a + step * (k as f64 + 0.5);
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            panel += w * (f(mid + half * *x)? + f(mid - half * *x)?);
        }
        total += panel * half;
    }
    Ok(total)
}

/// Integrate `f` along the segment `[a, b]`, doubling the panel count until
/// two successive estimates agree to `TOLERANCE` (relative once the integral
/// exceeds one in modulus).
pub fn integrate_segment<F>(f: F, a: Complex64, b: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut panels = 1;
    let mut prev = composite(&f, a, b, panels)?;
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(&f, a, b, panels)?;
        if (next - prev).norm() < TOLERANCE * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric {
        z: b,
        reason: format!("quadrature did not converge with {MAX_PANELS} panels"),
    })
}
