//! Weight-dependent binomial coefficients.
//!
//! The coefficients are defined by `[0,0] = 1`, `[n,k] = 0` outside
//! `0 ≤ k ≤ n`, and
//!
//! ```text
//! [n+1,k] = [n,k]·v(k,n+1−k) + [n,k−1]·W(k,n+1−k)
//! ```
//!
//! with `v ≡ 1` for single-weight families. [`BinomTable`] memoizes rows per
//! weight spec (including its shift); the closed forms for the elliptic and
//! basic-hypergeometric families live alongside as independent routes.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::elliptic::{qp_factorial_many, ConvolutionKind, DEGENERACY_THRESHOLD};
use crate::error::{Error, Result};
use crate::weights::{big_weight, small_weight_v, Family, WeightDomain, WeightSpec};

/// Row-memoized coefficient table for one weight spec. Not shared between
/// workers; each worker builds its own.
#[derive(Clone, Debug)]
pub struct BinomTable<C> {
    spec: WeightSpec,
    with_v: bool,
    rows: Vec<Vec<C>>,
    big: HashMap<(u32, u32), C>,
}

impl<C: WeightDomain> BinomTable<C> {
    /// Single-weight recursion (vertical steps weigh 1).
    pub fn new(spec: &WeightSpec) -> Self {
        BinomTable { spec: spec.clone(), with_v: false, rows: vec![vec![C::one()]], big: HashMap::new() }
    }

    /// Double-weight recursion with `v(k, n+1−k)` on the vertical term.
    pub fn new_double(spec: &WeightSpec) -> Self {
        BinomTable { with_v: true, ..Self::new(spec) }
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    fn big_weight(&mut self, s: u32, t: u32) -> Result<C> {
        if let Some(w) = self.big.get(&(s, t)) {
            return Ok(w.clone());
        }
        let w = big_weight::<C>(&self.spec, s, t)?;
        self.big.insert((s, t), w.clone());
        Ok(w)
    }

    fn extend_to(&mut self, n: u32) -> Result<()> {
        while self.rows.len() <= n as usize {
            let prev_n = (self.rows.len() - 1) as u32;
            let next_n = prev_n + 1;
            let mut row = Vec::with_capacity(next_n as usize + 1);
            for k in 0..=next_n {
                let mut val = C::zero();
                if k <= prev_n {
                    let above = self.rows[prev_n as usize][k as usize].clone();
                    val = if self.with_v {
                        above * small_weight_v::<C>(&self.spec, k, next_n - k)?
                    } else {
                        above
                    };
                }
                if k >= 1 {
                    let left = self.rows[prev_n as usize][(k - 1) as usize].clone();
                    if !left.is_zero() {
                        val = val + left * self.big_weight(k, next_n - k)?;
                    }
                }
                row.push(val);
            }
            self.rows.push(row);
        }
        Ok(())
    }

    pub fn get(&mut self, n: i64, k: i64) -> Result<C> {
        if n < 0 {
            return Err(Error::InvalidParameter(format!("binomial needs n >= 0, got {n}")));
        }
        if k < 0 || k > n {
            return Ok(C::zero());
        }
        self.extend_to(n as u32)?;
        Ok(self.rows[n as usize][k as usize].clone())
    }
}

/// `[n,k]` under the single-weight recursion.
pub fn wbinom<C: WeightDomain>(spec: &WeightSpec, n: i64, k: i64) -> Result<C> {
    BinomTable::<C>::new(spec).get(n, k)
}

/// Double weight-dependent `[n,k]`; equals [`wbinom`] when `v ≡ 1`.
pub fn vwbinom<C: WeightDomain>(spec: &WeightSpec, n: i64, k: i64) -> Result<C> {
    BinomTable::<C>::new_double(spec).get(n, k)
}

fn ratio(num: &[Complex64], den: &[Complex64], q: Complex64, p: Complex64, len: i64) -> Result<Complex64> {
    let d = qp_factorial_many(den, q, p, len)?;
    if d.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::EllipticDegenerate { arg: "binomial denominator".into(), threshold: DEGENERACY_THRESHOLD });
    }
    Ok(qp_factorial_many(num, q, p, len)? / d)
}

/// Closed-form elliptic binomial coefficient
/// `(q^{1+k}, aq^{1+k}, bq^{1+k}, aq^{1−k}/b; q,p)_{n−k} / (q, aq, bq^{1+2k}, aq/b; q,p)_{n−k}`.
pub fn elliptic_binom_closed(
    a: Complex64,
    b: Complex64,
    q: Complex64,
    p: Complex64,
    n: i64,
    k: i64,
) -> Result<Complex64> {
    if k < 0 || k > n {
        return Ok(Complex64::zero());
    }
    let qi = |e: i64| q.powi(e as i32);
    ratio(
        &[qi(1 + k), a * qi(1 + k), b * qi(1 + k), a * qi(1 - k) / b],
        &[q, a * q, b * qi(1 + 2 * k), a * q / b],
        q,
        p,
        n - k,
    )
}

/// Closed forms of the three basic-hypergeometric families, with any
/// pending index shift absorbed into the parameters:
///
/// * balanced very-well-poised: `(q^{1+k}, aq^{1+k}, bq^{1+k}, aq^{1−k}/b; q)_{n−k} / (q, aq, bq^{1+2k}, aq/b; q)_{n−k}`
/// * balanced: `(q^{1+k}, bq^{1+k}; q)_{n−k} / (q, bq^{1+2k}; q)_{n−k}`
/// * very-well-poised: `(q^{1+k}, aq^{1+k}; q)_{n−k} / (q, aq; q)_{n−k} · q^{k(k−n)}`
pub fn basic_binom_closed(spec: &WeightSpec, n: i64, k: i64) -> Result<Complex64> {
    if k < 0 || k > n {
        return Ok(Complex64::zero());
    }
    let spec = spec.absorb_shift()?;
    let zero = Complex64::zero();
    let degenerate = |e: Error| match e {
        Error::EllipticDegenerate { .. } => Error::DegenerateParameter("basic binomial denominator".into()),
        other => other,
    };
    match spec.family {
        Family::BalancedVwp { a, b, q } => {
            let qi = |e: i64| q.powi(e as i32);
            ratio(
                &[qi(1 + k), a * qi(1 + k), b * qi(1 + k), a * qi(1 - k) / b],
                &[q, a * q, b * qi(1 + 2 * k), a * q / b],
                q,
                zero,
                n - k,
            )
            .map_err(degenerate)
        }
        Family::Balanced { b, q } => {
            let qi = |e: i64| q.powi(e as i32);
            ratio(&[qi(1 + k), b * qi(1 + k)], &[q, b * qi(1 + 2 * k)], q, zero, n - k).map_err(degenerate)
        }
        Family::Vwp { a, q } => {
            let qi = |e: i64| q.powi(e as i32);
            Ok(ratio(&[qi(1 + k), a * qi(1 + k)], &[q, a * q], q, zero, n - k).map_err(degenerate)?
                * qi(k * (k - n)))
        }
        _ => Err(Error::NotApplicable("basic-hypergeometric closed form".into())),
    }
}

/// Elliptic closed form for an elliptic spec, shift absorbed.
pub fn elliptic_binom_closed_spec(spec: &WeightSpec, n: i64, k: i64) -> Result<Complex64> {
    match spec.absorb_shift()?.family {
        Family::Elliptic { a, b, q, p } => elliptic_binom_closed(a, b, q, p, n, k),
        _ => Err(Error::NotApplicable("elliptic closed form".into())),
    }
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_{n−k})`.
pub fn gaussian_binomial(q: Complex64, n: i64, k: i64) -> Result<Complex64> {
    if k < 0 || k > n {
        return Ok(Complex64::zero());
    }
    let fac = |m: i64| (1..=m).fold(Complex64::one(), |acc, j| acc * (Complex64::one() - q.powi(j as i32)));
    let den = fac(k) * fac(n - k);
    if den.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateParameter("q is a root of unity".into()));
    }
    Ok(fac(n) / den)
}

/// `LHS − RHS` of one of the three convolution formulas, with the
/// conjugated coefficient evaluated under the shifted weight spec.
///
/// * `Diagonal` (`index = k`): `[n+m,k] = Σ_{j=0}^{min(k,n)} [n,j] · [m,k−j]^{(j,n−j)} · ∏_{i=1}^{k−j} W(i+j,n−j)`
/// * `Vertical` (`index = l`, `1 ≤ l ≤ n`): `[n+m,n] = Σ_{k=0}^{m} [k+l−1,l−1] · [n+m−l−k,n−l]^{(l,k)} · ∏_{i=0}^{n−l} W(i+l,k)`
/// * `Horizontal` (`index = k`, `1 ≤ k ≤ m`): `[n+m,n] = Σ_{l=0}^{n} [l+k−1,l] · [n+m−l−k,n−l]^{(l,k)} · ∏_{i=1}^{n−l} W(i+l,k)`
pub fn convolution_check<C: WeightDomain>(
    which: ConvolutionKind,
    spec: &WeightSpec,
    n: u32,
    m: u32,
    index: u32,
) -> Result<C> {
    if spec.is_double() {
        return Err(Error::NotApplicable("convolution formulas for double weights".into()));
    }
    let mut base = BinomTable::<C>::new(spec);
    let (ni, mi) = (i64::from(n), i64::from(m));
    let prod_w = |from: u32, to: u32, offset: u32, height: u32| -> Result<C> {
        (from..=to).try_fold(C::one(), |acc, i| Ok(acc * big_weight::<C>(spec, i + offset, height)?))
    };
    match which {
        ConvolutionKind::Diagonal => {
            let k = index;
            let lhs = base.get(ni + mi, i64::from(k))?;
            let mut rhs = C::zero();
            for j in 0..=k.min(n) {
                let inner = wbinom::<C>(&spec.shifted(j, n - j), mi, i64::from(k - j))?;
                if inner.is_zero() {
                    continue;
                }
                rhs = rhs + base.get(ni, i64::from(j))? * inner * prod_w(1, k - j, j, n - j)?;
            }
            Ok(lhs - rhs)
        }
        ConvolutionKind::Vertical => {
            let l = index;
            if !(1..=n).contains(&l) {
                return Err(Error::InvalidParameter(format!("vertical convolution needs 1 <= l <= n, got l={l}")));
            }
            let lhs = base.get(ni + mi, ni)?;
            let mut rhs = C::zero();
            for k in 0..=m {
                let inner = wbinom::<C>(&spec.shifted(l, k), i64::from(n + m - l - k), i64::from(n - l))?;
                rhs = rhs + base.get(i64::from(k + l - 1), i64::from(l - 1))? * inner * prod_w(0, n - l, l, k)?;
            }
            Ok(lhs - rhs)
        }
        ConvolutionKind::Horizontal => {
            let k = index;
            if !(1..=m).contains(&k) {
                return Err(Error::InvalidParameter(format!("horizontal convolution needs 1 <= k <= m, got k={k}")));
            }
            let lhs = base.get(ni + mi, ni)?;
            let mut rhs = C::zero();
            for l in 0..=n {
                let inner = wbinom::<C>(&spec.shifted(l, k), i64::from(n + m - l - k), i64::from(n - l))?;
                let tail = if l < n { prod_w(1, n - l, l, k)? } else { C::one() };
                rhs = rhs + base.get(i64::from(l + k - 1), i64::from(l))? * inner * tail;
            }
            Ok(lhs - rhs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{relative_error, SymPoly};

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn borders_are_one() {
        let spec = WeightSpec::generic();
        for n in 0..6 {
            assert_eq!(wbinom::<SymPoly>(&spec, n, 0).unwrap(), SymPoly::one());
            assert_eq!(wbinom::<SymPoly>(&spec, n, n).unwrap(), SymPoly::one());
            assert!(wbinom::<SymPoly>(&spec, n, n + 1).unwrap().is_zero());
            assert!(wbinom::<SymPoly>(&spec, n, -1).unwrap().is_zero());
        }
        assert!(wbinom::<SymPoly>(&spec, -1, 0).is_err());
    }

    #[test]
    fn generic_two_one() {
        let got: SymPoly = wbinom(&WeightSpec::generic(), 2, 1).unwrap();
        assert_eq!(got, "1 + w(1,1)".parse().unwrap());
    }

    #[test]
    fn q_family_is_gaussian() {
        let got: SymPoly = wbinom(&WeightSpec::q_symbolic(), 4, 2).unwrap();
        assert_eq!(got, "1 + q + 2*q^2 + q^3 + q^4".parse().unwrap());
    }

    #[test]
    fn no_symmetry_in_general() {
        let spec = WeightSpec::generic();
        let a: SymPoly = wbinom(&spec, 3, 1).unwrap();
        let b: SymPoly = wbinom(&spec, 3, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn stirling_second_four_two() {
        let spec = WeightSpec::new(Family::StirlingSecond).unwrap();
        assert_eq!(vwbinom::<SymPoly>(&spec, 4, 2).unwrap(), SymPoly::integer(7));
        assert_eq!(vwbinom::<SymPoly>(&spec, 0, 0).unwrap(), SymPoly::one());
    }

    #[test]
    fn generic_double_two_one() {
        // Paths to (1,1): HV weighs W(1,0)·v(1,1), VH weighs v(0,1)·W(1,1).
        let got: SymPoly = vwbinom(&WeightSpec::generic_double(), 2, 1).unwrap();
        assert_eq!(got, "v(1,1) + w(1,1)*v(0,1)".parse().unwrap());
    }

    #[test]
    fn elliptic_closed_borders() {
        let (a, b, q, p) = (z(0.31, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05));
        assert_eq!(elliptic_binom_closed(a, b, q, p, 4, 4).unwrap(), Complex64::one());
        assert_eq!(elliptic_binom_closed(a, b, q, p, 4, 0).unwrap(), Complex64::one());
        assert_eq!(elliptic_binom_closed(a, b, q, p, 4, -1).unwrap(), Complex64::zero());
        assert_eq!(elliptic_binom_closed(a, b, q, p, 4, 5).unwrap(), Complex64::zero());
    }

    #[test]
    fn elliptic_closed_matches_recursion() {
        let (a, b, q, p) = (z(0.31, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05));
        let spec = WeightSpec::elliptic(a, b, q, p).unwrap();
        let rec: Complex64 = wbinom(&spec, 5, 2).unwrap();
        let closed = elliptic_binom_closed(a, b, q, p, 5, 2).unwrap();
        assert!(relative_error(rec, closed) < 1e-10);
    }

    #[test]
    fn basic_closed_cases() {
        let q = z(0.55, 0.3);
        let bal = WeightSpec::new(Family::Balanced { b: Complex64::zero(), q }).unwrap();
        for k in 0..=5 {
            let got = basic_binom_closed(&bal, 5, k).unwrap();
            assert!(relative_error(got, gaussian_binomial(q, 5, k).unwrap()) < 1e-13);
        }
        let bvwp = WeightSpec::new(Family::BalancedVwp { a: z(0.4, 0.2), b: z(0.9, -0.3), q }).unwrap();
        assert_eq!(basic_binom_closed(&bvwp, 3, 3).unwrap(), Complex64::one());
        let vwp = WeightSpec::new(Family::Vwp { a: z(0.4, 0.2), q }).unwrap();
        let rec: Complex64 = wbinom(&vwp, 4, 2).unwrap();
        assert!(relative_error(rec, basic_binom_closed(&vwp, 4, 2).unwrap()) < 1e-12);
        assert!(basic_binom_closed(&WeightSpec::generic(), 2, 1).is_err());
    }

    #[test]
    fn convolution_small_cases() {
        let spec = WeightSpec::generic();
        let r: SymPoly = convolution_check(ConvolutionKind::Diagonal, &spec, 3, 0, 2).unwrap();
        assert!(r.is_zero());
        let r: SymPoly = convolution_check(ConvolutionKind::Diagonal, &spec, 2, 2, 2).unwrap();
        assert!(r.is_zero());
        let r: SymPoly = convolution_check(ConvolutionKind::Vertical, &spec, 2, 2, 1).unwrap();
        assert!(r.is_zero());
        let r: SymPoly = convolution_check(ConvolutionKind::Horizontal, &spec, 2, 2, 2).unwrap();
        assert!(r.is_zero());
        assert!(convolution_check::<SymPoly>(ConvolutionKind::Vertical, &spec, 2, 2, 0).is_err());
        assert!(convolution_check::<SymPoly>(ConvolutionKind::Horizontal, &spec, 2, 2, 3).is_err());
    }

    #[test]
    fn convolution_elliptic_numeric() {
        let spec = WeightSpec::elliptic(z(0.31, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05)).unwrap();
        let r: Complex64 = convolution_check(ConvolutionKind::Diagonal, &spec, 3, 3, 3).unwrap();
        assert!(r.norm() < 1e-9);
    }
}
