//! Commutative coefficient domains: exact Laurent polynomials over ℚ and
//! double-precision complex numbers.

mod poly;

use std::fmt;
use std::ops::{Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use poly::{IndetKind, Indeterminate, Monomial, SymPoly};
pub(crate) use poly::rational_to_f64;

pub type ComplexVal = Complex64;

/// A commutative ring the algebra can take coefficients in.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_rational(c: &BigRational) -> Self;

    /// Multiplicative inverse where the domain has one.
    fn try_inv(&self) -> Option<Self>;

    /// Size of `self` as a residual: `None` means exactly zero.
    fn residual_magnitude(&self) -> Option<f64>;

    /// Magnitude used to normalize a residual into a relative error.
    fn scale_magnitude(&self) -> f64;
}

impl Coeff for SymPoly {
    fn from_i64(v: i64) -> Self {
        SymPoly::integer(v)
    }

    fn from_rational(c: &BigRational) -> Self {
        SymPoly::constant(c.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        SymPoly::try_inv(self)
    }

    fn residual_magnitude(&self) -> Option<f64> {
        if self.is_zero() {
            None
        } else {
            Some(self.len() as f64)
        }
    }

    fn scale_magnitude(&self) -> f64 {
        1.0
    }
}

impl Coeff for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(c: &BigRational) -> Self {
        Complex64::new(rational_to_f64(c), 0.0)
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn residual_magnitude(&self) -> Option<f64> {
        Some(self.norm())
    }

    fn scale_magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A value from either domain, used at the CLI/JSON boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Exact(SymPoly),
    Complex(ComplexPair),
}

/// `[re, im]` on the wire.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct ComplexPair(pub Complex64);

impl From<[f64; 2]> for ComplexPair {
    fn from(v: [f64; 2]) -> Self {
        ComplexPair(Complex64::new(v[0], v[1]))
    }
}

impl From<ComplexPair> for [f64; 2] {
    fn from(v: ComplexPair) -> Self {
        [v.0.re, v.0.im]
    }
}

impl From<SymPoly> for Coefficient {
    fn from(p: SymPoly) -> Self {
        Coefficient::Exact(p)
    }
}

impl From<Complex64> for Coefficient {
    fn from(z: Complex64) -> Self {
        Coefficient::Complex(ComplexPair(z))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(p) => write!(f, "{p}"),
            Coefficient::Complex(ComplexPair(z)) => fmt_complex(f, *z),
        }
    }
}

fn fmt_complex(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    if z.im == 0.0 {
        write!(f, "{:e}", z.re)
    } else if z.im < 0.0 {
        write!(f, "{:e}-{:e}i", z.re, -z.im)
    } else {
        write!(f, "{:e}+{:e}i", z.re, z.im)
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_error(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_json_shapes() {
        let z: Coefficient = Complex64::new(1.5, -2.0).into();
        assert_eq!(serde_json::to_string(&z).unwrap(), "[1.5,-2.0]");
        let p: Coefficient = SymPoly::integer(3).into();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"[{"monomial":[],"num":"3","den":"1"}]"#);
        assert_eq!(serde_json::from_str::<Coefficient>(&js).unwrap(), p);
        assert_eq!(serde_json::from_str::<Coefficient>("[1.5,-2.0]").unwrap(), z);
    }

    #[test]
    fn relative_error_basics() {
        let a = Complex64::new(1.0, 0.0);
        assert_eq!(relative_error(a, a), 0.0);
        assert_eq!(relative_error(Complex64::zero(), Complex64::zero()), 0.0);
        assert!((relative_error(a, Complex64::new(1.0 + 1e-9, 0.0)) - 1e-9).abs() < 1e-15);
    }
}
