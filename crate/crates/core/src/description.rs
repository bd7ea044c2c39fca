//! JSON descriptions of maps, as accepted by the command line.
//!
//! ```json
//! {"kind": "f_alpha", "alpha": 1.5}
//! {"kind": "shear", "F": [0, 1], "omega": {"kind": "blaschke", "zeros": [[0.3, 0.1]]}}
//! {"kind": "harmonic_mobius", "c": [0.2, 0.1]}
//! {"kind": "affine", "base": {"kind": "f_alpha", "alpha": 1}, "a": [0.5, 0]}
//! {"kind": "holomorphic", "h": {"kind": "log", "arg": {"kind": "mobius", "a": 1, "b": 1, "c": -1, "d": 1}}}
//! ```
//!
//! Complex numbers are written either as a real number or as `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Elementary;
use crate::maps::{
    affine_transform, harmonic_mobius, make_f_alpha, shear, HarmonicMap, Holomorphic, MobiusTransform,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        match v {
            ComplexValue::Real(re) => Complex64::new(re, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue::Pair([z.re, z.im])
    }
}

fn complex_list(values: &[ComplexValue]) -> Vec<Complex64> {
    values.iter().map(|&v| v.into()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MobiusDescription {
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub c: ComplexValue,
    pub d: ComplexValue,
}

impl MobiusDescription {
    pub fn build(&self) -> Result<MobiusTransform> {
        MobiusTransform::new(self.a.into(), self.b.into(), self.c.into(), self.d.into())
    }
}

/// A holomorphic function on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HoloDescription {
    Identity {},
    Constant { value: ComplexValue },
    /// Coefficients in increasing degree.
    Polynomial { coeffs: Vec<ComplexValue> },
    Mobius {
        a: ComplexValue,
        b: ComplexValue,
        c: ComplexValue,
        d: ComplexValue,
    },
    Blaschke {
        zeros: Vec<ComplexValue>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factor: Option<ComplexValue>,
    },
    Log { arg: Box<HoloDescription> },
    Exp { arg: Box<HoloDescription> },
    Power { alpha: f64, arg: Box<HoloDescription> },
    Sum { a: Box<HoloDescription>, b: Box<HoloDescription> },
    Product { a: Box<HoloDescription>, b: Box<HoloDescription> },
    Quotient { num: Box<HoloDescription>, den: Box<HoloDescription> },
    Compose { outer: Box<HoloDescription>, inner: Box<HoloDescription> },
}

impl HoloDescription {
    pub fn build(&self) -> Result<Holomorphic> {
        use HoloDescription::*;
        Ok(match self {
            Identity {} => Holomorphic::identity(),
            Constant { value } => Holomorphic::constant((*value).into()),
            Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Usage("polynomial needs at least one coefficient".into()));
                }
                Holomorphic::polynomial(complex_list(coeffs))
            }
            Mobius { a, b, c, d } => Holomorphic::Mobius(MobiusTransform::new(
                (*a).into(),
                (*b).into(),
                (*c).into(),
                (*d).into(),
            )?),
            Blaschke { zeros, factor } => Holomorphic::blaschke(
                complex_list(zeros),
                factor.map_or(Complex64::new(1.0, 0.0), Into::into),
            )?,
            Log { arg } => Holomorphic::elementary(Elementary::Log, arg.build()?),
            Exp { arg } => Holomorphic::elementary(Elementary::Exp, arg.build()?),
            Power { alpha, arg } => {
                if !alpha.is_finite() {
                    return Err(Error::Usage(format!("power exponent must be finite, got {alpha}")));
                }
                Holomorphic::elementary(Elementary::Power(*alpha), arg.build()?)
            }
            Sum { a, b } => Holomorphic::sum(a.build()?, b.build()?),
            Product { a, b } => Holomorphic::product(a.build()?, b.build()?),
            Quotient { num, den } => Holomorphic::quotient(num.build()?, den.build()?),
            Compose { outer, inner } => Holomorphic::compose(outer.build()?, inner.build()?),
        })
    }
}

/// A harmonic map `h + conj(g)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDescription {
    FAlpha {
        alpha: f64,
    },
    /// `h - g = F` with dilatation `omega`; `F` is a polynomial.
    Shear {
        #[serde(rename = "F")]
        big_f: Vec<ComplexValue>,
        omega: HoloDescription,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base_value: Option<ComplexValue>,
    },
    /// `M + c conj(M)`; `M` defaults to the identity.
    HarmonicMobius {
        #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
        m: Option<MobiusDescription>,
        c: ComplexValue,
    },
    /// `f + a conj(f)`.
    Affine {
        base: Box<MapDescription>,
        a: ComplexValue,
    },
    Holomorphic {
        h: HoloDescription,
    },
    Harmonic {
        h: HoloDescription,
        g: HoloDescription,
    },
    /// Analytic part `h` and dilatation `omega`, with `g(0) = 0`.
    Dilatation {
        h: HoloDescription,
        omega: HoloDescription,
    },
}

impl MapDescription {
    pub fn build(&self) -> Result<HarmonicMap> {
        use MapDescription::*;
        match self {
            FAlpha { alpha } => make_f_alpha(*alpha),
            Shear { big_f, omega, base_value } => {
                if big_f.is_empty() {
                    return Err(Error::Usage("shear needs at least one coefficient of F".into()));
                }
                Ok(shear(
                    crate::maps::Holomorphic::polynomial(complex_list(big_f)),
                    omega.build()?,
                    base_value.map_or(Complex64::new(0.0, 0.0), Into::into),
                ))
            }
            HarmonicMobius { m, c } => {
                let m = m.as_ref().map_or(Ok(MobiusTransform::identity()), MobiusDescription::build)?;
                harmonic_mobius(m, (*c).into())
            }
            Affine { base, a } => affine_transform(&base.build()?, (*a).into()),
            Holomorphic { h } => Ok(HarmonicMap::holomorphic(h.build()?)),
            Harmonic { h, g } => Ok(HarmonicMap::new(h.build()?, g.build()?)),
            Dilatation { h, omega } => Ok(HarmonicMap::from_dilatation(h.build()?, omega.build()?)),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid map description: {e}")))
    }
}
