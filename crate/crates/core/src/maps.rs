//! Holomorphic evaluators, Möbius transformations and harmonic maps `f = h + conj(g)`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::{principal_pow, Elementary, Jet};
use crate::quadrature::integrate_segment;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Points with modulus in `[1, 1 + BOUNDARY_SLACK]` count as lying on the unit circle.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// `1 - |z|^2` without cancellation near the circle: the squares and the two
/// subtractions are carried with their rounding errors (FMA and Knuth two-sum).
pub fn one_minus_norm_sqr(z: Complex64) -> f64 {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    let (x, y) = (z.re, z.im);
    let xx = x * x;
    let ex = x.mul_add(x, -xx);
    let yy = y * y;
    let ey = y.mul_add(y, -yy);
    let (s1, e1) = two_sum(1.0, -xx);
    let (s2, e2) = two_sum(s1, -yy);
    s2 + ((e1 + e2) - (ex + ey))
}

// ---------------------------------------------------------------------------
// Möbius transformations
// ---------------------------------------------------------------------------

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTransform {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusTransform {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = MobiusTransform { a, b, c, d };
        let det = m.determinant();
        if det == ZERO || !det.is_finite() {
            return Err(Error::domain(format!("degenerate Möbius coefficients (det = {det})")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MobiusTransform {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Finite pole, if any.
    pub fn pole(&self) -> Option<Complex64> {
        (self.c != ZERO).then(|| -self.d / self.c)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// `self ∘ inner`, i.e. the coefficient-matrix product `self * inner`.
    pub fn compose(&self, inner: &MobiusTransform) -> MobiusTransform {
        MobiusTransform {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    pub fn inverse(&self) -> MobiusTransform {
        MobiusTransform {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        let den = self.c * z + self.d;
        if den == ZERO {
            return Err(Error::singular(z, "pole of Möbius transformation"));
        }
        let r = den.inv();
        let det = self.determinant();
        let d1 = det * r * r;
        Ok(Jet::new(
            z,
            [
                (self.a * z + self.b) * r,
                d1,
                -2.0 * self.c * d1 * r,
                6.0 * self.c * self.c * d1 * r * r,
            ],
        ))
    }

    fn holomorphic_on_closed_disk(&self) -> bool {
        self.pole().is_none_or(|p| p.norm() > 1.0)
    }
}

fn require_in_disk(what: &str, a: Complex64) -> Result<()> {
    if a.is_finite() && a.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must lie in the open unit disk, got {a}")))
    }
}

/// `phi_a(z) = (a + z) / (1 + conj(a) z)`.
pub fn disk_automorphism(a: Complex64) -> Result<MobiusTransform> {
    require_in_disk("automorphism parameter", a)?;
    MobiusTransform::new(ONE, a, a.conj(), ONE)
}

/// The automorphism `((1 - conj p)/(1 - p)) (z - p)/(1 - conj(p) z)`: sends `p` to 0 and fixes 1.
pub fn normalizing_automorphism(p: Complex64) -> Result<MobiusTransform> {
    require_in_disk("normalizing point", p)?;
    let k = (ONE - p.conj()) / (ONE - p);
    MobiusTransform::new(k, -k * p, -p.conj(), ONE)
}

/// Rotation-scaling `z -> e^{-i theta0} (x / r0) z` sending `z0 = r0 e^{i theta0}` to `x`.
pub fn scaling_map(z0: Complex64, x: f64) -> Result<MobiusTransform> {
    let r0 = z0.norm();
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::domain(format!("scaling centre must satisfy 0 < |z0| < 1, got {z0}")));
    }
    if !(x > 0.0 && x <= r0) {
        return Err(Error::domain(format!("scaling target must satisfy 0 < x <= |z0| = {r0}, got {x}")));
    }
    let factor = Complex64::from_polar(x / r0, -z0.arg());
    MobiusTransform::new(factor, ZERO, ZERO, ONE)
}

// ---------------------------------------------------------------------------
// Holomorphic evaluators
// ---------------------------------------------------------------------------

/// A holomorphic function on (a neighbourhood of) the unit disk, evaluable to third-order jets.
#[derive(Debug, Clone, PartialEq)]
pub enum Holomorphic {
    /// Coefficients in increasing degree.
    Polynomial(Vec<Complex64>),
    Mobius(MobiusTransform),
    /// `(1 - (1 - z)^alpha) / alpha`
    FAlphaAnalytic(f64),
    /// `(1 - (1 + alpha z)(1 - z)^alpha) / (alpha (1 + alpha))`
    FAlphaCoanalytic(f64),
    /// `factor * prod (z - a_k) / (1 - conj(a_k) z)`
    Blaschke {
        zeros: Vec<Complex64>,
        factor: Complex64,
    },
    Sum(Box<Holomorphic>, Box<Holomorphic>),
    Product(Box<Holomorphic>, Box<Holomorphic>),
    Quotient(Box<Holomorphic>, Box<Holomorphic>),
    Compose {
        outer: Box<Holomorphic>,
        inner: Box<Holomorphic>,
    },
    Elementary(Elementary, Box<Holomorphic>),
    /// `base_value + ∫_base^z derivative(w) dw` along the straight segment.
    Antiderivative {
        derivative: Box<Holomorphic>,
        base: Complex64,
        base_value: Complex64,
    },
}

impl Holomorphic {
    pub fn identity() -> Self {
        Holomorphic::Polynomial(vec![ZERO, ONE])
    }

    pub fn constant(c: Complex64) -> Self {
        Holomorphic::Polynomial(vec![c])
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Holomorphic::Polynomial(coeffs)
    }

    pub fn blaschke(zeros: Vec<Complex64>, factor: Complex64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::domain("Blaschke product needs at least one zero"));
        }
        for &a in &zeros {
            require_in_disk("Blaschke zero", a)?;
        }
        if (factor.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("Blaschke factor must be unimodular, got {factor}")));
        }
        Ok(Holomorphic::Blaschke { zeros, factor })
    }

    pub fn sum(a: Holomorphic, b: Holomorphic) -> Self {
        Holomorphic::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Holomorphic, b: Holomorphic) -> Self {
        Holomorphic::Product(Box::new(a), Box::new(b))
    }

    pub fn quotient(num: Holomorphic, den: Holomorphic) -> Self {
        Holomorphic::Quotient(Box::new(num), Box::new(den))
    }

    pub fn compose(outer: Holomorphic, inner: Holomorphic) -> Self {
        Holomorphic::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn elementary(kind: Elementary, arg: Holomorphic) -> Self {
        Holomorphic::Elementary(kind, Box::new(arg))
    }

    pub fn antiderivative(derivative: Holomorphic, base: Complex64, base_value: Complex64) -> Self {
        Holomorphic::Antiderivative {
            derivative: Box::new(derivative),
            base,
            base_value,
        }
    }

    fn scaled(c: Complex64, f: Holomorphic) -> Self {
        Holomorphic::product(Holomorphic::constant(c), f)
    }

    /// Whether values extend continuously to the closed disk.
    pub fn extends_to_closed_disk(&self) -> bool {
        use Holomorphic::*;
        match self {
            Polynomial(_) | FAlphaAnalytic(_) | FAlphaCoanalytic(_) | Blaschke { .. } => true,
            Mobius(m) => m.holomorphic_on_closed_disk(),
            Sum(a, b) | Product(a, b) => a.extends_to_closed_disk() && b.extends_to_closed_disk(),
            Compose { outer, inner } => outer.extends_to_closed_disk() && inner.extends_to_closed_disk(),
            // 1 - z sends the closed disk into Re >= 0, clear of the branch cut
            Elementary(crate::jets::Elementary::Power(p), arg) => {
                *p >= 0.0 && matches!(&**arg, Polynomial(c) if c[..] == [ONE, -ONE])
            }
            Quotient(..) | Elementary(..) => false,
            Antiderivative { derivative, .. } => derivative.extends_to_closed_disk(),
        }
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        let r = z.norm();
        if !r.is_finite() {
            return Err(Error::domain(format!("non-finite point {z}")));
        }
        if r < 1.0 {
            return Ok(());
        }
        if r <= 1.0 + BOUNDARY_SLACK && self.extends_to_closed_disk() {
            return Ok(());
        }
        Err(Error::domain(format!("point {z} outside the domain of evaluation")))
    }

    /// Third-order jet at `z`.
    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        self.check_domain(z)?;
        let j = self.jet_at(z)?;
        if !j.is_finite() {
            return Err(Error::singular(z, "non-finite jet"));
        }
        Ok(j)
    }

    /// Value at `z`; cheaper than [`Holomorphic::jet`] and defined on the circle
    /// for evaluators that extend continuously.
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        let v = self.value_at(z)?;
        if !v.is_finite() {
            return Err(Error::singular(z, "non-finite value"));
        }
        Ok(v)
    }

    fn jet_at(&self, z: Complex64) -> Result<Jet> {
        use Holomorphic::*;
        match self {
            Polynomial(coeffs) => Ok(polynomial_jet(coeffs, z)),
            Mobius(m) => m.jet(z),
            FAlphaAnalytic(alpha) => f_alpha_analytic_jet(*alpha, z),
            FAlphaCoanalytic(alpha) => f_alpha_coanalytic_jet(*alpha, z),
            Blaschke { zeros, factor } => {
                let mut acc = Jet::constant(z, *factor);
                for &a in zeros {
                    acc = acc.mul_unchecked(&blaschke_factor(a).jet(z)?);
                }
                Ok(acc)
            }
            Sum(a, b) => Ok(a.jet_at(z)?.add_unchecked(&b.jet_at(z)?)),
            Product(a, b) => Ok(a.jet_at(z)?.mul_unchecked(&b.jet_at(z)?)),
            Quotient(a, b) => {
                let den = b.jet_at(z)?.recip()?;
                Ok(a.jet_at(z)?.mul_unchecked(&den))
            }
            Compose { outer, inner } => {
                let i = inner.jet_at(z)?;
                let o = outer.jet_at(i.value())?;
                Jet::compose(&o, &i)
            }
            Elementary(kind, arg) => Jet::elementary(*kind, &arg.jet_at(z)?),
            Antiderivative {
                derivative,
                base,
                base_value,
            } => {
                let d = derivative.jet_at(z)?;
                let v = *base_value + integrate_segment(|w| derivative.value_at(w), *base, z)?;
                Ok(Jet::new(z, [v, d.value(), d.d1(), d.d2()]))
            }
        }
    }

    fn value_at(&self, z: Complex64) -> Result<Complex64> {
        use Holomorphic::*;
        match self {
            Polynomial(coeffs) => Ok(coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)),
            Mobius(m) => {
                let den = m.c * z + m.d;
                if den == ZERO {
                    return Err(Error::singular(z, "pole of Möbius transformation"));
                }
                Ok((m.a * z + m.b) / den)
            }
            FAlphaAnalytic(alpha) => {
                let p = principal_pow(z, ONE - z, *alpha)?;
                Ok((ONE - p) / *alpha)
            }
            FAlphaCoanalytic(alpha) => {
                let p = principal_pow(z, ONE - z, *alpha)?;
                Ok((ONE - (ONE + *alpha * z) * p) / (*alpha * (1.0 + *alpha)))
            }
            Blaschke { zeros, factor } => zeros.iter().try_fold(*factor, |acc, &a| {
                let den = ONE - a.conj() * z;
                if den == ZERO {
                    return Err(Error::singular(z, "pole of Blaschke factor"));
                }
                Ok(acc * (z - a) / den)
            }),
            Sum(a, b) => Ok(a.value_at(z)? + b.value_at(z)?),
            Product(a, b) => Ok(a.value_at(z)? * b.value_at(z)?),
            Quotient(a, b) => {
                let den = b.value_at(z)?;
                if den == ZERO {
                    return Err(Error::singular(z, "vanishing denominator"));
                }
                Ok(a.value_at(z)? / den)
            }
            Compose { outer, inner } => outer.value_at(inner.value_at(z)?),
            Elementary(kind, arg) => {
                let w = arg.value_at(z)?;
                match kind {
                    crate::jets::Elementary::Exp => Ok(w.exp()),
                    crate::jets::Elementary::Log => Ok(Jet::constant(z, w).ln()?.value()),
                    crate::jets::Elementary::Power(alpha) => principal_pow(z, w, *alpha),
                }
            }
            Antiderivative {
                derivative,
                base,
                base_value,
            } => Ok(*base_value + integrate_segment(|w| derivative.value_at(w), *base, z)?),
        }
    }

    /// Symbolic derivative.
    pub fn derivative(&self) -> Holomorphic {
        use Holomorphic::*;
        match self {
            Polynomial(coeffs) => {
                let d: Vec<Complex64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &a)| a * k as f64)
                    .collect();
                if d.is_empty() {
                    Holomorphic::constant(ZERO)
                } else {
                    Polynomial(d)
                }
            }
            Mobius(m) => {
                // det / (c z + d)^2
                let den = vec![m.d * m.d, 2.0 * m.c * m.d, m.c * m.c];
                Holomorphic::quotient(Holomorphic::constant(m.determinant()), Polynomial(den))
            }
            FAlphaAnalytic(alpha) => one_minus_z_power(*alpha - 1.0),
            FAlphaCoanalytic(alpha) => {
                Holomorphic::product(Holomorphic::identity(), one_minus_z_power(*alpha - 1.0))
            }
            Blaschke { zeros, factor } => {
                let expanded = zeros.iter().fold(Holomorphic::constant(*factor), |acc, &a| {
                    Holomorphic::product(acc, Mobius(blaschke_factor(a)))
                });
                expanded.derivative()
            }
            Sum(a, b) => Holomorphic::sum(a.derivative(), b.derivative()),
            Product(a, b) => Holomorphic::sum(
                Holomorphic::product(a.derivative(), (**b).clone()),
                Holomorphic::product((**a).clone(), b.derivative()),
            ),
            Quotient(a, b) => Holomorphic::quotient(
                Holomorphic::sum(
                    Holomorphic::product(a.derivative(), (**b).clone()),
                    Holomorphic::scaled(-ONE, Holomorphic::product((**a).clone(), b.derivative())),
                ),
                Holomorphic::product((**b).clone(), (**b).clone()),
            ),
            Compose { outer, inner } => Holomorphic::product(
                Holomorphic::compose(outer.derivative(), (**inner).clone()),
                inner.derivative(),
            ),
            Elementary(kind, arg) => {
                let inner = arg.derivative();
                let outer = match kind {
                    crate::jets::Elementary::Exp => self.clone(),
                    crate::jets::Elementary::Log => {
                        return Holomorphic::quotient(inner, (**arg).clone());
                    }
                    crate::jets::Elementary::Power(alpha) => Holomorphic::scaled(
                        Complex64::new(*alpha, 0.0),
                        Holomorphic::elementary(
                            crate::jets::Elementary::Power(*alpha - 1.0),
                            (**arg).clone(),
                        ),
                    ),
                };
                Holomorphic::product(outer, inner)
            }
            Antiderivative { derivative, .. } => (**derivative).clone(),
        }
    }
}

fn one_minus_z_power(alpha: f64) -> Holomorphic {
    Holomorphic::elementary(Elementary::Power(alpha), Holomorphic::Polynomial(vec![ONE, -ONE]))
}

fn blaschke_factor(a: Complex64) -> MobiusTransform {
    MobiusTransform {
        a: ONE,
        b: -a,
        c: -a.conj(),
        d: ONE,
    }
}

fn polynomial_jet(coeffs: &[Complex64], z: Complex64) -> Jet {
    // Horner on (p, p', p'', p''')
    let mut d = [ZERO; 4];
    for &a in coeffs.iter().rev() {
        d[3] = d[3] * z + 3.0 * d[2];
        d[2] = d[2] * z + 2.0 * d[1];
        d[1] = d[1] * z + d[0];
        d[0] = d[0] * z + a;
    }
    Jet::new(z, d)
}

/// `coef * (1 - z)^exponent`, with zero coefficients short-circuited so that
/// integer exponents at `z = 1` stay finite.
fn power_term(z: Complex64, coef: f64, exponent: f64) -> Result<Complex64> {
    if coef == 0.0 {
        Ok(ZERO)
    } else {
        Ok(coef * principal_pow(z, ONE - z, exponent)?)
    }
}

fn f_alpha_analytic_jet(alpha: f64, z: Complex64) -> Result<Jet> {
    let am1 = alpha - 1.0;
    Ok(Jet::new(
        z,
        [
            (ONE - principal_pow(z, ONE - z, alpha)?) / alpha,
            power_term(z, 1.0, am1)?,
            power_term(z, -am1, alpha - 2.0)?,
            power_term(z, am1 * (alpha - 2.0), alpha - 3.0)?,
        ],
    ))
}

fn f_alpha_coanalytic_jet(alpha: f64, z: Complex64) -> Result<Jet> {
    let am1 = alpha - 1.0;
    let p = principal_pow(z, ONE - z, alpha)?;
    Ok(Jet::new(
        z,
        [
            (ONE - (ONE + alpha * z) * p) / (alpha * (1.0 + alpha)),
            z * power_term(z, 1.0, am1)?,
            power_term(z, 1.0, am1)? - z * power_term(z, am1, alpha - 2.0)?,
            power_term(z, -2.0 * am1, alpha - 2.0)? + z * power_term(z, am1 * (alpha - 2.0), alpha - 3.0)?,
        ],
    ))
}

// ---------------------------------------------------------------------------
// Harmonic maps
// ---------------------------------------------------------------------------

/// Closed-form families whose weighted Schwarzian has a cancellation-free expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    FAlpha(f64),
}

/// A harmonic map `f = h + conj(g)` on the unit disk, with cached symbolic
/// derivatives and dilatation `omega = g' / h'`.
#[derive(Clone, PartialEq)]
pub struct HarmonicMap {
    h: Holomorphic,
    g: Holomorphic,
    h_prime: Holomorphic,
    g_prime: Holomorphic,
    omega: Holomorphic,
    family: Option<Family>,
}

impl fmt::Debug for HarmonicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HarmonicMap")
            .field("h", &self.h)
            .field("g", &self.g)
            .field("family", &self.family)
            .finish_non_exhaustive()
    }
}

/// Everything the differential operators need at one point: `(h', h'', h''')`
/// and `(omega, omega', omega'')`.
#[derive(Debug, Clone, Copy)]
pub struct LocalData {
    pub z: Complex64,
    /// Jet of `h'` (so `h_prime.d1()` is `h''`).
    pub h_prime: Jet,
    pub omega: Jet,
}

impl HarmonicMap {
    /// General map from its analytic and co-analytic parts.
    pub fn new(h: Holomorphic, g: Holomorphic) -> Self {
        let h_prime = h.derivative();
        let g_prime = g.derivative();
        let omega = Holomorphic::quotient(g_prime.clone(), h_prime.clone());
        HarmonicMap {
            h,
            g,
            h_prime,
            g_prime,
            omega,
            family: None,
        }
    }

    /// `f = h` (co-analytic part zero).
    pub fn holomorphic(h: Holomorphic) -> Self {
        let zero = Holomorphic::constant(ZERO);
        HarmonicMap {
            h_prime: h.derivative(),
            h,
            g: zero.clone(),
            g_prime: zero.clone(),
            omega: zero,
            family: None,
        }
    }

    /// Map with analytic part `h` and prescribed dilatation; `g(0) = 0`.
    pub fn from_dilatation(h: Holomorphic, omega: Holomorphic) -> Self {
        let h_prime = h.derivative();
        let g_prime = Holomorphic::product(omega.clone(), h_prime.clone());
        let g = Holomorphic::antiderivative(g_prime.clone(), ZERO, ZERO);
        HarmonicMap {
            h,
            g,
            h_prime,
            g_prime,
            omega,
            family: None,
        }
    }

    pub fn analytic(&self) -> &Holomorphic {
        &self.h
    }

    pub fn coanalytic(&self) -> &Holomorphic {
        &self.g
    }

    pub fn analytic_derivative(&self) -> &Holomorphic {
        &self.h_prime
    }

    pub fn coanalytic_derivative(&self) -> &Holomorphic {
        &self.g_prime
    }

    pub fn dilatation(&self) -> &Holomorphic {
        &self.omega
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn extends_to_closed_disk(&self) -> bool {
        self.h.extends_to_closed_disk() && self.g.extends_to_closed_disk()
    }

    /// `h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.value(z)? + self.g.value(z)?.conj())
    }

    /// Derivative jets at an interior point, checking local univalence and sense preservation.
    pub fn local(&self, z: Complex64) -> Result<LocalData> {
        if !(z.norm() < 1.0) {
            return Err(Error::domain(format!("{z} is not in the open unit disk")));
        }
        let h_prime = self.h_prime.jet(z)?;
        if h_prime.value() == ZERO {
            return Err(Error::singular(z, "h' vanishes"));
        }
        let omega = self.omega.jet(z)?;
        let modulus = omega.value().norm();
        if !(modulus < 1.0) {
            return Err(Error::SensePreservation { z, modulus });
        }
        Ok(LocalData { z, h_prime, omega })
    }
}

/// `f_alpha = h_alpha + conj(g_alpha)` with dilatation exactly `z`.
pub fn make_f_alpha(alpha: f64) -> Result<HarmonicMap> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let h = Holomorphic::FAlphaAnalytic(alpha);
    let g = Holomorphic::FAlphaCoanalytic(alpha);
    Ok(HarmonicMap {
        h_prime: h.derivative(),
        g_prime: g.derivative(),
        h,
        g,
        omega: Holomorphic::identity(),
        family: Some(Family::FAlpha(alpha)),
    })
}

/// Shear construction: `h - g = big_f`, `g' = omega h'`, `g(0) = base_value`.
pub fn shear(big_f: Holomorphic, omega: Holomorphic, base_value: Complex64) -> HarmonicMap {
    let one_minus_omega = Holomorphic::sum(
        Holomorphic::constant(ONE),
        Holomorphic::scaled(-ONE, omega.clone()),
    );
    let h_prime = Holomorphic::quotient(big_f.derivative(), one_minus_omega);
    let g_prime = Holomorphic::product(omega.clone(), h_prime.clone());
    let g = Holomorphic::antiderivative(g_prime.clone(), ZERO, base_value);
    HarmonicMap {
        h: Holomorphic::sum(big_f, g.clone()),
        g,
        h_prime,
        g_prime,
        omega,
        family: None,
    }
}

/// Harmonic Möbius map `M + c conj(M)`.
pub fn harmonic_mobius(m: MobiusTransform, c: Complex64) -> Result<HarmonicMap> {
    require_in_disk("dilatation constant", c)?;
    if !m.holomorphic_on_closed_disk() {
        return Err(Error::domain(format!(
            "Möbius pole {} must lie outside the closed disk",
            m.pole().unwrap_or_default()
        )));
    }
    let h = Holomorphic::Mobius(m);
    let g = Holomorphic::scaled(c, h.clone());
    Ok(HarmonicMap {
        h_prime: h.derivative(),
        g_prime: g.derivative(),
        h,
        g,
        omega: Holomorphic::constant(c),
        family: None,
    })
}

/// `F = f + a conj(f)`: analytic part `h + a g`, co-analytic part `g + conj(a) h`,
/// dilatation `(omega + conj a) / (1 + a omega)`.
pub fn affine_transform(f: &HarmonicMap, a: Complex64) -> Result<HarmonicMap> {
    require_in_disk("affine parameter", a)?;
    let h = Holomorphic::sum(f.h.clone(), Holomorphic::scaled(a, f.g.clone()));
    let g = Holomorphic::sum(f.g.clone(), Holomorphic::scaled(a.conj(), f.h.clone()));
    let h_prime = Holomorphic::sum(f.h_prime.clone(), Holomorphic::scaled(a, f.g_prime.clone()));
    let g_prime = Holomorphic::sum(
        f.g_prime.clone(),
        Holomorphic::scaled(a.conj(), f.h_prime.clone()),
    );
    let twist = MobiusTransform::new(ONE, a.conj(), a, ONE)?;
    let omega = Holomorphic::compose(Holomorphic::Mobius(twist), f.omega.clone());
    Ok(HarmonicMap {
        h,
        g,
        h_prime,
        g_prime,
        omega,
        family: None,
    })
}

pub fn eval_harmonic(f: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    f.eval(z)
}
