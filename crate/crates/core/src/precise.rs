//! Double-double evaluation of the elliptic quantities.
//!
//! The ₁₀V₉ sum and the elliptic recursion can cancel heavily: at random
//! parameters the terms may exceed the result by ten or more orders of
//! magnitude, and in plain `f64` the relative error then tracks
//! `cond · 1e-16`. The verification checks for those identities evaluate in
//! [`Cdd`] (about 32 significant digits) and round only the final residual.
//! Inputs are the same `f64` parameters; converting them is exact.

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use twofloat::TwoFloat;

use crate::coeffs::{rational_to_f64, Coeff, Indeterminate};
use crate::elliptic::DEGENERACY_THRESHOLD;
use crate::error::{Error, Result};
use crate::weights::{Family, WeightDomain, WeightSpec};

pub type Cdd = Complex<TwoFloat>;

const TRUNCATION_EPS: f64 = 1e-34;

pub fn widen(z: Complex64) -> Cdd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

pub fn round(z: Cdd) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

fn norm(z: Cdd) -> f64 {
    round(z).norm()
}

/// `|a − b| / max(|a|, |b|)` with the difference taken before rounding.
pub fn relative_error(a: Cdd, b: Cdd) -> f64 {
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        norm(a - b) / scale
    }
}

/// Real quotient. `TwoFloat`'s own division can return an `f64`-accurate
/// result, so one Newton correction is applied on top.
fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let x = a / b;
    x + (a - x * b) / b
}

fn inv(z: Cdd) -> Cdd {
    let d = z.re * z.re + z.im * z.im;
    Complex::new(quotient(z.re, d), -quotient(z.im, d))
}

fn div(a: Cdd, b: Cdd) -> Cdd {
    a * inv(b)
}

fn powi(z: Cdd, e: i32) -> Cdd {
    let mut base = if e < 0 { inv(z) } else { z };
    let mut k = e.unsigned_abs();
    let mut acc = Cdd::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

fn check(z: Cdd, what: &str) -> Result<Cdd> {
    let r = round(z);
    if r.re.is_finite() && r.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

fn terms(p: Cdd) -> usize {
    let r = norm(p);
    if r == 0.0 {
        1
    } else {
        (TRUNCATION_EPS.ln() / r.ln()).ceil() as usize + 2
    }
}

/// `θ(x;p)` as a truncated product; `1 − x` at `p = 0`, which stays defined
/// at `x = 0`.
pub fn theta(x: Cdd, p: Cdd) -> Result<Cdd> {
    if p.is_zero() {
        return Ok(Cdd::one() - x);
    }
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if norm(p) >= 1.0 {
        return Err(Error::InvalidParameter(format!("nome |p| = {} must be < 1", norm(p))));
    }
    let x_inv = inv(x);
    let mut acc = Cdd::one();
    let mut pk = Cdd::one();
    for _ in 0..terms(p) {
        let next = pk * p;
        acc = acc * (Cdd::one() - x * pk) * (Cdd::one() - next * x_inv);
        pk = next;
    }
    check(acc, "theta")
}

fn nonvanishing(z: Cdd, what: &str) -> Result<Cdd> {
    if norm(z) < DEGENERACY_THRESHOLD {
        Err(Error::EllipticDegenerate { arg: what.to_string(), threshold: DEGENERACY_THRESHOLD })
    } else {
        Ok(z)
    }
}

fn theta_product(xs: &[Cdd], p: Cdd) -> Result<Cdd> {
    xs.iter().try_fold(Cdd::one(), |acc, &x| Ok(acc * theta(x, p)?))
}

fn theta_denominator(xs: &[Cdd], p: Cdd) -> Result<Cdd> {
    xs.iter().try_fold(Cdd::one(), |acc, &x| Ok(acc * nonvanishing(theta(x, p)?, "theta denominator")?))
}

/// `(a₁,…,a_m;q,p)_n` for `n ≥ 0`.
pub fn qp_factorial_many(xs: &[Cdd], q: Cdd, p: Cdd, n: u32) -> Result<Cdd> {
    let mut acc = Cdd::one();
    for &a in xs {
        let mut aq = a;
        for _ in 0..n {
            acc *= theta(aq, p)?;
            aq *= q;
        }
    }
    Ok(acc)
}

fn qp_denominator(xs: &[Cdd], q: Cdd, p: Cdd, n: u32) -> Result<Cdd> {
    let mut acc = Cdd::one();
    for &a in xs {
        let mut aq = a;
        for _ in 0..n {
            acc *= nonvanishing(theta(aq, p)?, "shifted factorial denominator")?;
            aq *= q;
        }
    }
    Ok(acc)
}

/// Elliptic closed form for `[n,k]`, as in
/// [`crate::binomial::elliptic_binom_closed`].
pub fn elliptic_binom_closed(a: Complex64, b: Complex64, q: Complex64, p: Complex64, n: i64, k: i64) -> Result<Cdd> {
    if k < 0 || k > n {
        return Ok(Cdd::zero());
    }
    let (a, b, q, p) = (widen(a), widen(b), widen(q), widen(p));
    let qi = |e: i64| powi(q, e as i32);
    let len = (n - k) as u32;
    let num = qp_factorial_many(&[qi(1 + k), a * qi(1 + k), b * qi(1 + k), div(a * qi(1 - k), b)], q, p, len)?;
    let den = qp_denominator(&[q, a * q, b * qi(1 + 2 * k), div(a * q, b)], q, p, len)?;
    check(div(num, den), "elliptic closed form")
}

/// Both sides of the ₁₀V₉ summation with `e` derived from the balancing
/// condition in double-double.
pub fn v109_sides(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    q: Complex64,
    p: Complex64,
    n: u32,
) -> Result<(Cdd, Cdd)> {
    let (a, b, c, d, q, p) = (widen(a), widen(b), widen(c), widen(d), widen(q), widen(p));
    let ni = n as i32;
    let e = div(a * a * powi(q, ni + 1), b * c * d);
    let theta_a = theta_denominator(&[a], p)?;
    let upper = [a, b, c, d, e, powi(q, -ni)];
    let lower = [q, div(a * q, b), div(a * q, c), div(a * q, d), div(a * q, e), a * powi(q, ni + 1)];
    let mut lhs = Cdd::zero();
    for k in 0..=n {
        let ki = k as i32;
        // θ(aq^{2k})/θ(a) is exactly 1 at k = 0; keep it exact.
        let lead = if k == 0 { Cdd::one() } else { div(theta(a * powi(q, 2 * ki), p)?, theta_a) };
        let ratio = div(qp_factorial_many(&upper, q, p, k)?, qp_denominator(&lower, q, p, k)?);
        lhs += lead * ratio * powi(q, ki);
    }
    let rhs_num = qp_factorial_many(&[a * q, div(a * q, b * c), div(a * q, b * d), div(a * q, c * d)], q, p, n)?;
    let rhs_den = qp_denominator(&[div(a * q, b), div(a * q, c), div(a * q, d), div(a * q, b * c * d)], q, p, n)?;
    Ok((check(lhs, "10V9 sum")?, check(div(rhs_num, rhs_den), "10V9 product")?))
}

fn q_pochhammer(a: Cdd, q: Cdd, k: u32) -> Cdd {
    let mut acc = Cdd::one();
    let mut aq = a;
    for _ in 0..k {
        acc *= Cdd::one() - aq;
        aq *= q;
    }
    acc
}

/// Jackson's terminating ₈φ₇ sum in double-double, `(series, product)`.
pub fn jackson_8phi7_sides(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    q: Complex64,
    n: u32,
) -> Result<(Cdd, Cdd)> {
    // The square root only enters through ±√a pairs, so the f64 root is
    // refined by one Newton step to double-double accuracy.
    let s0 = widen(a.sqrt());
    let (a, b, c, d, q) = (widen(a), widen(b), widen(c), widen(d), widen(q));
    let half = TwoFloat::from(0.5);
    let sa = (s0 + div(a, s0)) * half;
    let ni = n as i32;
    let e = div(a * a * powi(q, ni + 1), b * c * d);
    let upper = [a, q * sa, -q * sa, b, c, d, e, powi(q, -ni)];
    let lower = [q, sa, -sa, div(a * q, b), div(a * q, c), div(a * q, d), div(a * q, e), a * powi(q, ni + 1)];
    let mut series = Cdd::zero();
    for k in 0..=n {
        let num = upper.iter().fold(Cdd::one(), |acc, &x| acc * q_pochhammer(x, q, k));
        let den = lower.iter().fold(Cdd::one(), |acc, &x| acc * q_pochhammer(x, q, k));
        series += div(num, nonvanishing(den, "8phi7 denominator")?) * powi(q, k as i32);
    }
    let num = [a * q, div(a * q, b * c), div(a * q, b * d), div(a * q, c * d)]
        .iter()
        .fold(Cdd::one(), |acc, &x| acc * q_pochhammer(x, q, n));
    let den = [div(a * q, b), div(a * q, c), div(a * q, d), div(a * q, b * c * d)]
        .iter()
        .fold(Cdd::one(), |acc, &x| acc * q_pochhammer(x, q, n));
    Ok((check(series, "8phi7 series")?, check(div(num, nonvanishing(den, "8phi7 product")?), "8phi7 product")?))
}

impl Coeff for Cdd {
    fn from_i64(v: i64) -> Self {
        Complex::new(TwoFloat::from(v as f64), TwoFloat::from(0.0))
    }

    fn from_rational(c: &BigRational) -> Self {
        Complex::new(TwoFloat::from(rational_to_f64(c)), TwoFloat::from(0.0))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(inv(*self))
        }
    }

    fn residual_magnitude(&self) -> Option<f64> {
        Some(norm(*self))
    }

    fn scale_magnitude(&self) -> f64 {
        norm(*self)
    }
}

/// Only the elliptic family and its basic-hypergeometric limits have a
/// double-double evaluation.
impl WeightDomain for Cdd {
    fn eval_w(spec: &WeightSpec, s: u32, t: u32) -> Result<Self> {
        let (s, t) = (s as i32, t as i32);
        let zero = Cdd::zero();
        let (a, b, q, p) = match spec.family {
            Family::Elliptic { a, b, q, p } => (widen(a), widen(b), widen(q), widen(p)),
            Family::BalancedVwp { a, b, q } => (widen(a), widen(b), widen(q), zero),
            _ => return Err(Error::NotApplicable(format!("double-double evaluation of {}", spec.family_name()))),
        };
        let qi = |e: i32| powi(q, e);
        let num = theta_product(&[a * qi(s + 2 * t), b * qi(2 * s + t - 2), div(a * qi(t - s - 1), b)], p)?;
        let den = theta_denominator(&[a * qi(s + 2 * t - 2), b * qi(2 * s + t), div(a * qi(t - s + 1), b)], p)?;
        check(div(num, den) * q, "elliptic weight")
    }

    fn eval_v(spec: &WeightSpec, _s: u32, _t: u32) -> Result<Self> {
        match spec.family {
            Family::Elliptic { .. } | Family::BalancedVwp { .. } => Ok(Cdd::one()),
            _ => Err(Error::NotApplicable(format!("double-double evaluation of {}", spec.family_name()))),
        }
    }

    fn passthrough(x: &Indeterminate) -> Result<Self> {
        Err(Error::MissingAssignment(*x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::BinomTable;
    use crate::elliptic;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quotient_is_double_double() {
        let third = quotient(TwoFloat::from(1.0), TwoFloat::from(3.0));
        assert!(f64::from(third * TwoFloat::from(3.0) - TwoFloat::from(1.0)).abs() < 1e-31);
    }

    #[test]
    fn agrees_with_f64_kernel() {
        let (x, p) = (z(0.7, 0.4), z(0.25, -0.1));
        let lo = elliptic::theta(x, p).unwrap();
        assert!(crate::coeffs::relative_error(round(theta(widen(x), widen(p)).unwrap()), lo) < 1e-14);
        let (a, b, q) = (z(0.4, 0.3), z(1.1, -0.2), z(0.8, 0.35));
        for (n, k) in [(3, 1), (6, 2), (7, 7)] {
            let lo = crate::binomial::elliptic_binom_closed(a, b, q, p, n, k).unwrap();
            let hi = round(elliptic_binom_closed(a, b, q, p, n, k).unwrap());
            assert!(crate::coeffs::relative_error(hi, lo) < 1e-12);
        }
    }

    #[test]
    fn recursion_matches_closed_form() {
        let (a, b, q, p) = (z(0.4, 0.3), z(1.1, -0.2), z(0.8, 0.35), z(0.2, 0.1));
        let spec = WeightSpec::elliptic(a, b, q, p).unwrap();
        let mut table = BinomTable::<Cdd>::new(&spec);
        for n in 0..=8 {
            for k in 0..=n {
                let closed = elliptic_binom_closed(a, b, q, p, n, k).unwrap();
                assert!(relative_error(table.get(n, k).unwrap(), closed) < 1e-25, "({n},{k})");
            }
        }
    }

    #[test]
    fn v109_and_jackson_close() {
        let (a, b, c, d, q) = (z(0.5, 0.2), z(1.3, 0.1), z(0.7, -0.6), z(1.6, 0.4), z(0.9, 0.3));
        let (l, r) = v109_sides(a, b, c, d, q, z(0.15, 0.05), 6).unwrap();
        assert!(relative_error(l, r) < 1e-25);
        let (s, prod) = jackson_8phi7_sides(a, b, c, d, q, 6).unwrap();
        assert!(relative_error(s, prod) < 1e-25);
        let (l, _) = v109_sides(a, b, c, d, q, Complex64::zero(), 6).unwrap();
        assert!(relative_error(l, prod) < 1e-25);
    }
}
