//! Third-order Taylor jets of holomorphic functions.
//!
//! A [`Jet`] carries `(f, f', f'', f''')` at a base point. Arithmetic follows
//! the Leibniz rule, composition follows Faà di Bruno truncated at order 3,
//! and the elementary functions are obtained by composing their closed-form
//! outer jets with the argument. Order 3 is exactly what a Schwarzian needs.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Value and first three complex derivatives of a holomorphic function at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    base: Complex64,
    d: [Complex64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Log,
    /// Principal branch `w^alpha`, argument in `(-pi, pi]`.
    Power(f64),
}

impl Jet {
    pub fn new(base: Complex64, d: [Complex64; 4]) -> Self {
        Jet { base, d }
    }

    /// The jet of `z -> z` at `z`.
    pub fn identity(z: Complex64) -> Self {
        Jet::new(z, [z, ONE, ZERO, ZERO])
    }

    pub fn constant(z: Complex64, c: Complex64) -> Self {
        Jet::new(z, [c, ZERO, ZERO, ZERO])
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn value(&self) -> Complex64 {
        self.d[0]
    }

    pub fn d1(&self) -> Complex64 {
        self.d[1]
    }

    pub fn d2(&self) -> Complex64 {
        self.d[2]
    }

    pub fn d3(&self) -> Complex64 {
        self.d[3]
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        self.d
    }

    pub fn is_finite(&self) -> bool {
        self.base.is_finite() && self.d.iter().all(|c| c.is_finite())
    }

    /// Multiply every entry by a constant.
    pub fn scale(&self, c: Complex64) -> Jet {
        Jet::new(self.base, self.d.map(|x| x * c))
    }

    fn check_base(&self, other: &Jet) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "jets at different base points {} and {}",
                self.base, other.base
            )))
        }
    }

    pub fn binary(op: JetOp, a: &Jet, b: &Jet) -> Result<Jet> {
        match op {
            JetOp::Add => a.add(b),
            JetOp::Sub => a.sub(b),
            JetOp::Mul => a.mul(b),
            JetOp::Div => a.div(b),
        }
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_base(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_base(other)?;
        let mut d = self.d;
        for (x, y) in d.iter_mut().zip(other.d) {
            *x -= y;
        }
        Ok(Jet::new(self.base, d))
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_base(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.check_base(other)?;
        let r = other.recip()?;
        Ok(self.mul_unchecked(&r))
    }

    pub(crate) fn add_unchecked(&self, other: &Jet) -> Jet {
        let mut d = self.d;
        for (x, y) in d.iter_mut().zip(other.d) {
            *x += y;
        }
        Jet::new(self.base, d)
    }

    pub(crate) fn mul_unchecked(&self, other: &Jet) -> Jet {
        let [f0, f1, f2, f3] = self.d;
        let [g0, g1, g2, g3] = other.d;
        Jet::new(
            self.base,
            [
                f0 * g0,
                f1 * g0 + f0 * g1,
                f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
                f3 * g0 + 3.0 * (f2 * g1 + f1 * g2) + f0 * g3,
            ],
        )
    }

    /// Jet of `1/f`, from the closed-form derivatives of `w -> 1/w`.
    pub fn recip(&self) -> Result<Jet> {
        let w = self.d[0];
        if w == ZERO {
            return Err(Error::singular(self.base, "division by a jet with zero value"));
        }
        let r = w.inv();
        let r2 = r * r;
        Ok(self.chain([r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2]))
    }

    /// Faà di Bruno to order 3: `outer` holds `(F, F', F'', F''')` evaluated at `self.value()`.
    pub(crate) fn chain(&self, outer: [Complex64; 4]) -> Jet {
        let [_, g1, g2, g3] = self.d;
        let [f0, f1, f2, f3] = outer;
        Jet::new(
            self.base,
            [
                f0,
                f1 * g1,
                f2 * g1 * g1 + f1 * g2,
                f3 * g1 * g1 * g1 + 3.0 * f2 * g1 * g2 + f1 * g3,
            ],
        )
    }

    /// Jet of `outer ∘ inner` at `inner.base()`; requires `outer.base() == inner.value()`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
        if outer.base != inner.d[0] {
            return Err(Error::Usage(format!(
                "outer jet based at {} but inner value is {}",
                outer.base, inner.d[0]
            )));
        }
        Ok(inner.chain(outer.d))
    }

    pub fn elementary(kind: Elementary, w: &Jet) -> Result<Jet> {
        match kind {
            Elementary::Exp => Ok(w.exp()),
            Elementary::Log => w.ln(),
            Elementary::Power(alpha) => w.powf(alpha),
        }
    }

    pub fn exp(&self) -> Jet {
        let e = self.d[0].exp();
        self.chain([e; 4])
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Jet> {
        let w = self.d[0];
        check_branch(self.base, w)?;
        let r = w.inv();
        let r2 = r * r;
        Ok(self.chain([w.ln(), r, -r2, 2.0 * r2 * r]))
    }

    /// Principal power `w^alpha`. Small integer exponents are computed by
    /// repeated multiplication and need no branch.
    pub fn powf(&self, alpha: f64) -> Result<Jet> {
        let w = self.d[0];
        if let Some(n) = small_integer(alpha) {
            if n < 0 && w == ZERO {
                return Err(Error::singular(self.base, "negative power of zero"));
            }
            let mut outer = [ZERO; 4];
            let mut coef = 1.0;
            for (k, slot) in outer.iter_mut().enumerate() {
                if coef != 0.0 {
                    *slot = coef * w.powi(n - k as i32);
                }
                coef *= (n - k as i32) as f64;
            }
            return Ok(self.chain(outer));
        }
        check_branch(self.base, w)?;
        let p = w.powf(alpha);
        let r = w.inv();
        Ok(self.chain([
            p,
            alpha * p * r,
            alpha * (alpha - 1.0) * p * r * r,
            alpha * (alpha - 1.0) * (alpha - 2.0) * p * r * r * r,
        ]))
    }
}

fn small_integer(alpha: f64) -> Option<i32> {
    (alpha.fract() == 0.0 && alpha.abs() <= 16.0).then_some(alpha as i32)
}

fn check_branch(z: Complex64, w: Complex64) -> Result<()> {
    if w.im == 0.0 && w.re <= 0.0 {
        Err(Error::singular(
            z,
            format!("argument {w} on the principal branch cut"),
        ))
    } else {
        Ok(())
    }
}

/// Value-only principal power. Unlike the jet version this accepts `w = 0`
/// for `alpha > 0`, which is where boundary values of `(1 - z)^alpha` live.
pub(crate) fn principal_pow(z: Complex64, w: Complex64, alpha: f64) -> Result<Complex64> {
    if let Some(n) = small_integer(alpha) {
        if n < 0 && w == ZERO {
            return Err(Error::singular(z, "negative power of zero"));
        }
        return Ok(w.powi(n));
    }
    if w == ZERO && alpha > 0.0 {
        return Ok(ZERO);
    }
    check_branch(z, w)?;
    Ok(w.powf(alpha))
}
