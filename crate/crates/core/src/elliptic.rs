//! Theta-function kernel, theta shifted factorials and the ₁₀V₉ summation.
//!
//! `θ(x;p) = (x;p)_∞ (p/x;p)_∞` is evaluated as a truncated product whose
//! length adapts to `|p|`: with `N = ⌈ln ε / ln|p|⌉ + 2` and `ε = 1e-17`,
//! every omitted factor differs from 1 by less than `ε·max(|x|, 1/|x|)`.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::binomial::elliptic_binom_closed;
use crate::coeffs::relative_error;
use crate::error::{Error, Result};
use crate::weights::elliptic_big_weight_closed;

/// Denominator factors smaller than this are treated as exact zeros.
pub const DEGENERACY_THRESHOLD: f64 = 1e-13;

const TRUNCATION_EPS: f64 = 1e-17;

#[cfg(test)]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Number of factor pairs used for nome `p`.
pub fn theta_terms(p: Complex64) -> usize {
    let r = p.norm();
    if r == 0.0 {
        return 1;
    }
    ((TRUNCATION_EPS.ln() / r.ln()).ceil() as usize) + 2
}

/// Truncated product with an explicit number of factor pairs.
pub fn theta_truncated(x: Complex64, p: Complex64, terms: usize) -> Complex64 {
    let mut acc = Complex64::one();
    let mut pk = Complex64::one();
    for _ in 0..terms {
        let next = pk * p;
        acc *= (Complex64::one() - x * pk) * (Complex64::one() - next / x);
        pk = next;
    }
    acc
}

fn check_nome(p: Complex64) -> Result<()> {
    if p.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("nome |p| = {} must be < 1", p.norm())))
    }
}

fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Modified Jacobi theta function `θ(x;p)`.
pub fn theta(x: Complex64, p: Complex64) -> Result<Complex64> {
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    check_nome(p)?;
    finite(theta_truncated(x, p, theta_terms(p)), "theta")
}

/// `θ(x₁,…,x_m;p) = ∏ θ(x_k;p)`.
pub fn theta_many(xs: &[Complex64], p: Complex64) -> Result<Complex64> {
    xs.iter().try_fold(Complex64::one(), |acc, &x| Ok(acc * theta(x, p)?))
}

/// Theta product used as a denominator: fails when any factor vanishes.
pub(crate) fn theta_denominator(xs: &[Complex64], p: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::one();
    for &x in xs {
        let t = theta(x, p)?;
        if t.norm() < DEGENERACY_THRESHOLD {
            return Err(Error::EllipticDegenerate { arg: format!("{x}"), threshold: DEGENERACY_THRESHOLD });
        }
        acc *= t;
    }
    Ok(acc)
}

/// Relative residual of the three-term addition formula
/// `θ(xy,x/y,uv,u/v) − θ(xv,x/v,uy,u/y) = (u/y) θ(yv,y/v,xu,x/u)`.
pub fn theta_addition_residual(
    x: Complex64,
    y: Complex64,
    u: Complex64,
    v: Complex64,
    p: Complex64,
) -> Result<f64> {
    if [x, y, u, v].iter().any(|z| z.is_zero()) {
        return Err(Error::ZeroArgument);
    }
    let lhs = theta_many(&[x * y, x / y, u * v, u / v], p)?
        - theta_many(&[x * v, x / v, u * y, u / y], p)?;
    let rhs = (u / y) * theta_many(&[y * v, y / v, x * u, x / u], p)?;
    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
}

/// One factor of a shifted factorial; at `p = 0` this is `1 − x`, which
/// stays defined at `x = 0`.
fn factor(x: Complex64, p: Complex64) -> Result<Complex64> {
    if p.is_zero() {
        Ok(Complex64::one() - x)
    } else {
        theta(x, p)
    }
}

/// Theta shifted factorial `(a;q,p)_n` for any integer `n`.
pub fn qp_factorial(a: Complex64, q: Complex64, p: Complex64, n: i64) -> Result<Complex64> {
    check_nome(p)?;
    let mut acc = Complex64::one();
    if n >= 0 {
        for k in 0..n {
            acc *= factor(a * q.powi(k as i32), p)?;
        }
        finite(acc, "theta shifted factorial")
    } else {
        for k in 0..(-n) {
            let t = factor(a * q.powi((n + k) as i32), p)?;
            if t.norm() < DEGENERACY_THRESHOLD {
                return Err(Error::DegenerateParameter(format!(
                    "vanishing factor in ({a};q,p)_{n}"
                )));
            }
            acc *= t;
        }
        finite(acc.inv(), "theta shifted factorial")
    }
}

/// `(a₁,…,a_m;q,p)_n`.
pub fn qp_factorial_many(xs: &[Complex64], q: Complex64, p: Complex64, n: i64) -> Result<Complex64> {
    xs.iter().try_fold(Complex64::one(), |acc, &a| Ok(acc * qp_factorial(a, q, p, n)?))
}

/// Same as [`qp_factorial_many`] for `n ≥ 0` but rejects vanishing values.
fn qp_denominator(xs: &[Complex64], q: Complex64, p: Complex64, n: i64) -> Result<Complex64> {
    debug_assert!(n >= 0);
    let mut acc = Complex64::one();
    for &a in xs {
        for k in 0..n {
            let t = factor(a * q.powi(k as i32), p)?;
            if t.norm() < DEGENERACY_THRESHOLD {
                return Err(Error::DegenerateParameter(format!("vanishing factor in ({a};q,p)_{n}")));
            }
            acc *= t;
        }
    }
    Ok(acc)
}

/// Parameters of a terminating ₁₀V₉ series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct V109Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub q: Complex64,
    pub p: Complex64,
    pub n: u32,
}

impl V109Params {
    /// Derives `e` from the balancing condition `a²q^{n+1} = bcde`.
    pub fn balanced(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        q: Complex64,
        p: Complex64,
        n: u32,
    ) -> Self {
        let e = a * a * q.powi(n as i32 + 1) / (b * c * d);
        V109Params { a, b, c, d, e, q, p, n }
    }

    pub fn balancing_error(&self) -> f64 {
        let lhs = self.a * self.a * self.q.powi(self.n as i32 + 1);
        let rhs = self.b * self.c * self.d * self.e;
        relative_error(lhs, rhs)
    }
}

/// Both sides of the ₁₀V₉ summation.
pub fn v109_sides(params: &V109Params) -> Result<(Complex64, Complex64)> {
    let V109Params { a, b, c, d, e, q, p, n } = *params;
    let err = params.balancing_error();
    if err >= 1e-12 {
        return Err(Error::BalancingViolation(err));
    }
    let n_i = i64::from(n);
    let qn = q.powi(-(n as i32));
    let theta_a = theta_denominator(&[a], p)?;
    let upper = [a, b, c, d, e, qn];
    let lower = [q, a * q / b, a * q / c, a * q / d, a * q / e, a * q.powi(n as i32 + 1)];
    let mut lhs = Complex64::zero();
    for k in 0..=n_i {
        let num = theta(a * q.powi(2 * k as i32), p)? * qp_factorial_many(&upper, q, p, k)?;
        let den = theta_a * qp_denominator(&lower, q, p, k)?;
        lhs += num / den * q.powi(k as i32);
    }
    let rhs_num = qp_factorial_many(&[a * q, a * q / (b * c), a * q / (b * d), a * q / (c * d)], q, p, n_i)?;
    let rhs_den = qp_denominator(&[a * q / b, a * q / c, a * q / d, a * q / (b * c * d)], q, p, n_i)?;
    Ok((finite(lhs, "10V9 sum")?, finite(rhs_num / rhs_den, "10V9 product")?))
}

fn q_pochhammer(a: Complex64, q: Complex64, k: u32) -> Complex64 {
    (0..k).fold(Complex64::one(), |acc, j| acc * (Complex64::one() - a * q.powi(j as i32)))
}

/// Jackson's terminating ₈φ₇ summation written as a basic hypergeometric
/// series with the `±q√a, ±√a` parameter pairs, independent of the theta
/// kernel. Returns `(series, product)`; `e` is derived from balancing.
pub fn jackson_8phi7_sides(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    q: Complex64,
    n: u32,
) -> Result<(Complex64, Complex64)> {
    let e = a * a * q.powi(n as i32 + 1) / (b * c * d);
    let sa = a.sqrt();
    let upper = [a, q * sa, -q * sa, b, c, d, e, q.powi(-(n as i32))];
    let lower = [q, sa, -sa, a * q / b, a * q / c, a * q / d, a * q / e, a * q.powi(n as i32 + 1)];
    let mut series = Complex64::zero();
    for k in 0..=n {
        let num: Complex64 = upper.iter().map(|&x| q_pochhammer(x, q, k)).product();
        let den: Complex64 = lower.iter().map(|&x| q_pochhammer(x, q, k)).product();
        if den.norm() < DEGENERACY_THRESHOLD {
            return Err(Error::DegenerateParameter("8phi7 denominator".into()));
        }
        series += num / den * q.powi(k as i32);
    }
    let num: Complex64 = [a * q, a * q / (b * c), a * q / (b * d), a * q / (c * d)]
        .iter()
        .map(|&x| q_pochhammer(x, q, n))
        .product();
    let den: Complex64 = [a * q / b, a * q / c, a * q / d, a * q / (b * c * d)]
        .iter()
        .map(|&x| q_pochhammer(x, q, n))
        .product();
    if den.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateParameter("8phi7 product".into()));
    }
    Ok((series, num / den))
}

/// The three lattice-line convolutions of elliptic binomial coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConvolutionKind {
    Diagonal,
    Vertical,
    Horizontal,
}

/// Relative residual of an elliptic convolution identity.
///
/// * `Diagonal`: `[n+m,k] = Σ_j [n,j]·[m,k−j]_{aq^{2n−j},bq^{n+j}}·∏_{i=1}^{k−j} W(i+j,n−j)`.
/// * `Vertical` (fixed `1 ≤ l ≤ n`, passed as `index`):
///   `[n+m,n] = Σ_{k=0}^{m} [k+l−1,l−1]·[n+m−l−k,n−l]_{aq^{l+2k},bq^{2l+k}}·∏_{i=0}^{n−l} W(i+l,k)`.
/// * `Horizontal` (fixed `1 ≤ k ≤ m`):
///   `[n+m,n] = Σ_{l=0}^{n} [l+k−1,l]·[n+m−l−k,n−l]_{aq^{l+2k},bq^{2l+k}}·∏_{i=1}^{n−l} W(i+l,k)`.
///
/// The weights `W` are the closed-form elliptic big weights.
#[allow(clippy::too_many_arguments)]
pub fn v109_convolution_residuals(
    kind: ConvolutionKind,
    a: Complex64,
    b: Complex64,
    q: Complex64,
    p: Complex64,
    n: u32,
    m: u32,
    index: u32,
) -> Result<f64> {
    let bin = |a: Complex64, b: Complex64, n: i64, k: i64| elliptic_binom_closed(a, b, q, p, n, k);
    let big_w = |s: i64, t: i64| elliptic_big_weight_closed(a, b, q, p, s, t);
    let qi = |e: i64| q.powi(e as i32);
    let (n, m, index) = (i64::from(n), i64::from(m), i64::from(index));
    let (lhs, rhs) = match kind {
        ConvolutionKind::Diagonal => {
            let k = index;
            let lhs = bin(a, b, n + m, k)?;
            let mut rhs = Complex64::zero();
            for j in 0..=k.min(n) {
                let mut prod = Complex64::one();
                for i in 1..=(k - j) {
                    prod *= big_w(i + j, n - j)?;
                }
                rhs += bin(a, b, n, j)? * bin(a * qi(2 * n - j), b * qi(n + j), m, k - j)? * prod;
            }
            (lhs, rhs)
        }
        ConvolutionKind::Vertical => {
            let l = index;
            if !(1..=n).contains(&l) {
                return Err(Error::InvalidParameter(format!("vertical convolution needs 1 <= l <= n, got l={l}")));
            }
            let lhs = bin(a, b, n + m, n)?;
            let mut rhs = Complex64::zero();
            for k in 0..=m {
                let mut prod = Complex64::one();
                for i in 0..=(n - l) {
                    prod *= big_w(i + l, k)?;
                }
                rhs += bin(a, b, k + l - 1, l - 1)?
                    * bin(a * qi(l + 2 * k), b * qi(2 * l + k), n + m - l - k, n - l)?
                    * prod;
            }
            (lhs, rhs)
        }
        ConvolutionKind::Horizontal => {
            let k = index;
            if !(1..=m).contains(&k) {
                return Err(Error::InvalidParameter(format!("horizontal convolution needs 1 <= k <= m, got k={k}")));
            }
            let lhs = bin(a, b, n + m, n)?;
            let mut rhs = Complex64::zero();
            for l in 0..=n {
                let mut prod = Complex64::one();
                for i in 1..=(n - l) {
                    prod *= big_w(i + l, k)?;
                }
                rhs += bin(a, b, l + k - 1, l)?
                    * bin(a * qi(l + 2 * k), b * qi(2 * l + k), n + m - l - k, n - l)?
                    * prod;
            }
            (lhs, rhs)
        }
    };
    Ok(relative_error(lhs, rhs))
}

/// The ₁₀V₉ instance each convolution specializes to, with the summation
/// index renamed: Diagonal ↦ `(bq^{−n}/a, q^{−n}/a, bq^{1+n+m}, bq^{−n−m+k}/a, q^{−n}; k)`,
/// Vertical ↦ `(aq^l, bq^l, aq^{1+n+m}, aq^{−n}/b, q^l; m)`,
/// Horizontal ↦ `(bq^k, aq^k, bq^{1+n+m}, bq^{−m}/a, q^k; n)`.
#[allow(clippy::too_many_arguments)]
pub fn v109_substitution(
    kind: ConvolutionKind,
    a: Complex64,
    b: Complex64,
    q: Complex64,
    p: Complex64,
    n: u32,
    m: u32,
    index: u32,
) -> V109Params {
    let qi = |e: i64| q.powi(e as i32);
    let (ni, mi, x) = (i64::from(n), i64::from(m), i64::from(index));
    let (a2, b2, c2, d2, e2, top) = match kind {
        ConvolutionKind::Diagonal => (
            b * qi(-ni) / a,
            qi(-ni) / a,
            b * qi(1 + ni + mi),
            b * qi(-ni - mi + x) / a,
            qi(-ni),
            index,
        ),
        ConvolutionKind::Vertical => {
            (a * qi(x), b * qi(x), a * qi(1 + ni + mi), a * qi(-ni) / b, qi(x), m)
        }
        ConvolutionKind::Horizontal => {
            (b * qi(x), a * qi(x), b * qi(1 + ni + mi), b * qi(-mi) / a, qi(x), n)
        }
    };
    V109Params { a: a2, b: b2, c: c2, d: d2, e: e2, q, p, n: top }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta_at_zero_nome() {
        let x = z(0.3, -1.2);
        assert_eq!(theta(x, Complex64::zero()).unwrap(), Complex64::one() - x);
    }

    #[test]
    fn theta_rejects_zero_argument() {
        assert_eq!(theta(Complex64::zero(), c(0.2)), Err(Error::ZeroArgument));
        assert!(theta(c(0.5), c(1.0)).is_err());
    }

    #[test]
    fn theta_vanishes_at_one() {
        assert_eq!(theta(Complex64::one(), z(0.3, 0.1)).unwrap(), Complex64::zero());
    }

    #[test]
    fn theta_quasi_periodicity_and_inversion() {
        let (x, p) = (z(0.7, 0.4), z(0.25, -0.1));
        let lhs = theta(p * x, p).unwrap();
        let rhs = -theta(x, p).unwrap() / x;
        assert!(relative_error(lhs, rhs) < 1e-12);
        let rhs = -x * theta(x.inv(), p).unwrap();
        assert!(relative_error(theta(x, p).unwrap(), rhs) < 1e-12);
    }

    #[test]
    fn addition_formula_degenerate_slot() {
        let (x, y, u, p) = (z(0.8, 0.2), z(1.3, -0.4), z(0.6, 0.9), c(0.3));
        assert!(theta_addition_residual(x, y, u, y, p).unwrap() < 1e-15);
    }

    #[test]
    fn addition_formula_rational_case() {
        let r = theta_addition_residual(z(0.8, 0.2), z(1.3, -0.4), z(0.6, 0.9), z(1.7, 0.1), Complex64::zero())
            .unwrap();
        assert!(r < 1e-14, "{r}");
    }

    #[test]
    fn shifted_factorial_branches() {
        let (a, q, p) = (z(0.4, 0.3), z(0.8, 0.1), c(0.2));
        assert_eq!(qp_factorial(a, q, p, 0).unwrap(), Complex64::one());
        let pos = qp_factorial(a, q, p, 3).unwrap();
        let manual = theta(a, p).unwrap() * theta(a * q, p).unwrap() * theta(a * q * q, p).unwrap();
        assert!(relative_error(pos, manual) < 1e-14);
        let neg = qp_factorial(a, q, p, -2).unwrap();
        let manual = 1.0 / (theta(a / (q * q), p).unwrap() * theta(a / q, p).unwrap());
        assert!(relative_error(neg, manual) < 1e-14);
        let plain = qp_factorial(a, q, Complex64::zero(), 4).unwrap();
        assert!(relative_error(plain, q_pochhammer(a, q, 4)) < 1e-15);
    }

    #[test]
    fn shifted_factorial_negative_degenerate() {
        let q = z(0.9, 0.0);
        assert!(matches!(qp_factorial(q, q, c(0.1), -1), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn v109_trivial_length() {
        let prm = V109Params::balanced(z(0.5, 0.1), z(0.7, 0.2), z(1.1, -0.3), z(0.9, 0.4), z(0.8, 0.1), c(0.15), 0);
        let (l, r) = v109_sides(&prm).unwrap();
        assert!((l - Complex64::one()).norm() < 1e-15 && (r - Complex64::one()).norm() < 1e-15);
    }

    #[test]
    fn v109_detects_unbalanced() {
        let mut prm = V109Params::balanced(z(0.5, 0.1), z(0.7, 0.2), z(1.1, -0.3), z(0.9, 0.4), z(0.8, 0.1), c(0.15), 3);
        prm.e *= 1.01;
        assert!(matches!(v109_sides(&prm), Err(Error::BalancingViolation(_))));
    }

    #[test]
    fn v109_sum_n5() {
        let prm = V109Params::balanced(z(0.45, 0.2), z(0.7, -0.3), z(1.3, 0.4), z(0.6, 0.5), z(0.85, 0.2), c(0.15), 5);
        let (l, r) = v109_sides(&prm).unwrap();
        assert!(relative_error(l, r) < 1e-8, "{l} vs {r}");
    }

    #[test]
    fn convolution_trivial_m() {
        let r = v109_convolution_residuals(ConvolutionKind::Diagonal, z(0.3, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05), 3, 0, 2)
            .unwrap();
        assert!(r < 1e-13);
    }
}
