//! Complete and elementary symmetric functions and the identities obtained
//! by specializing the weights to `w(s,t) = a_t/a_{t−1}` (complete) or
//! `w(s,t) = a_{s+t}/a_{s+t−1}` (elementary).
//!
//! Everything is compared after clearing the monomial denominators, so the
//! residuals live in the polynomial ring in the `a_t`.

use crate::binomial::wbinom;
use crate::coeffs::{Coeff, Indeterminate, SymPoly};
use crate::error::{Error, Result};
use crate::ncalgebra::{binomial_power, NCElement};
use crate::weights::WeightSpec;

/// `h_k` of `vars` via `h_k(…, a) = h_k(…) + a·h_{k−1}(…, a)`.
/// The empty variable list gives `[k = 0]`.
pub fn complete_h<C: Coeff>(k: usize, vars: &[C]) -> C {
    let mut h = vec![C::zero(); k + 1];
    h[0] = C::one();
    for a in vars {
        for j in 1..=k {
            let add = a.clone() * h[j - 1].clone();
            h[j] = h[j].clone() + add;
        }
    }
    h.swap_remove(k)
}

/// `e_k` of `vars` via `e_k(…, a) = e_k(…) + a·e_{k−1}(…)`.
pub fn elementary_e<C: Coeff>(k: usize, vars: &[C]) -> C {
    if k > vars.len() {
        return C::zero();
    }
    let mut e = vec![C::zero(); k + 1];
    e[0] = C::one();
    for a in vars {
        for j in (1..=k).rev() {
            let add = a.clone() * e[j - 1].clone();
            e[j] = e[j].clone() + add;
        }
    }
    e.swap_remove(k)
}

/// The symbolic variables `a_lo, …, a_hi` (empty when `hi < lo`).
pub fn a_vars(lo: i64, hi: i64) -> Vec<SymPoly> {
    (lo.max(0)..=hi).map(|t| SymPoly::var(Indeterminate::a(t as u32))).collect()
}

fn a(t: i64) -> SymPoly {
    SymPoly::var(Indeterminate::a(t as u32))
}

fn h(k: i64, lo: i64, hi: i64) -> SymPoly {
    if k < 0 {
        return SymPoly::zero();
    }
    complete_h(k as usize, &a_vars(lo, hi))
}

fn e(k: i64, lo: i64, hi: i64) -> SymPoly {
    if k < 0 {
        return SymPoly::zero();
    }
    elementary_e(k as usize, &a_vars(lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymFamily {
    /// `w(s,t) = a_t/a_{t−1}`.
    H,
    /// `w(s,t) = a_{s+t}/a_{s+t−1}`.
    E,
}

impl SymFamily {
    pub fn spec(self) -> WeightSpec {
        match self {
            SymFamily::H => WeightSpec::complete_symbolic(),
            SymFamily::E => WeightSpec::elementary_symbolic(),
        }
    }

    /// `[n,k]` times its denominator, as predicted by the symmetric function.
    fn cleared(self, n: i64, k: i64) -> (SymPoly, SymPoly) {
        match self {
            SymFamily::H => (a(0).pow(k as u32), h(k, 0, n - k)),
            SymFamily::E => ((1..=k).fold(SymPoly::one(), |acc, t| acc * a(t)), e(k, 1, n)),
        }
    }
}

/// `a_0^k [n,k] − h_k(a_0..a_{n−k})` (resp. `a_1⋯a_k [n,k] − e_k(a_1..a_n)`)
/// for each coefficient of `(x+y)^n`; the zero element on success.
pub fn sym_binom_check(family: SymFamily, n: u32) -> Result<NCElement<SymPoly>> {
    let expansion: NCElement<SymPoly> = binomial_power(n, &family.spec())?;
    let mut residual = NCElement::zero();
    for k in 0..=n {
        let (clear, expected) = family.cleared(n.into(), k.into());
        residual.add_term(k, n - k, expansion.coeff(k, n - k) * clear - expected);
    }
    Ok(residual)
}

/// `[n,k]` from the recursion times its denominator, minus the symmetric
/// function it should equal.
pub fn sym_labeling_check(family: SymFamily, n: u32, k: u32) -> Result<SymPoly> {
    let coeff: SymPoly = wbinom(&family.spec(), n.into(), k.into())?;
    let (clear, expected) = family.cleared(n.into(), k.into());
    Ok(coeff * clear - expected)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymIdentity {
    /// `h_k(a_0..a_{n+m−k}) = Σ_{j=0}^{min(k,n)} h_j(a_0..a_{n−j}) h_{k−j}(a_{n−j}..a_{n+m−k})`, `0 ≤ k ≤ n+m`.
    H1,
    /// `h_n(a_0..a_m) = Σ_{k=0}^{m} h_{l−1}(a_0..a_k) a_k h_{n−l}(a_k..a_m)`, `1 ≤ l ≤ n`.
    H2,
    /// `h_n(a_0..a_m) = Σ_{l=0}^{n} h_l(a_0..a_{k−1}) h_{n−l}(a_k..a_m)`, `1 ≤ k ≤ m`.
    SchurH,
    /// `e_k(a_1..a_{n+m}) = Σ_{j=0}^{min(k,n)} e_j(a_1..a_n) e_{k−j}(a_{n+1}..a_{n+m})`, `0 ≤ k ≤ n+m`.
    SchurE,
    /// `e_n(a_1..a_{n+m}) = Σ_{k=0}^{m} e_{l−1}(a_1..a_{l+k−1}) a_{l+k} e_{n−l}(a_{l+k+1}..a_{n+m})`, `1 ≤ l ≤ n`.
    E1,
    /// `e_n(a_1..a_{n+m}) = Σ_{l=0}^{n} e_l(a_1..a_{l+k−1}) e_{n−l}(a_{l+k+1}..a_{n+m})`, `1 ≤ k ≤ m`.
    E2,
}

impl SymIdentity {
    pub const ALL: [SymIdentity; 6] =
        [SymIdentity::H1, SymIdentity::H2, SymIdentity::SchurH, SymIdentity::SchurE, SymIdentity::E1, SymIdentity::E2];

    /// Admissible values of the fixed index for sizes `(n, m)`.
    pub fn fixed_range(self, n: u32, m: u32) -> std::ops::RangeInclusive<u32> {
        match self {
            SymIdentity::H1 | SymIdentity::SchurE => 0..=n + m,
            SymIdentity::H2 | SymIdentity::E1 => 1..=n,
            SymIdentity::SchurH | SymIdentity::E2 => 1..=m,
        }
    }
}

/// `LHS − RHS` of the chosen identity; zero on success.
pub fn sym_identity_check(which: SymIdentity, n: u32, m: u32, fixed: u32) -> Result<SymPoly> {
    if !which.fixed_range(n, m).contains(&fixed) {
        return Err(Error::InvalidParameter(format!(
            "{which:?} needs the fixed index in {:?} for n={n}, m={m}, got {fixed}",
            which.fixed_range(n, m)
        )));
    }
    let (n, m, f) = (i64::from(n), i64::from(m), i64::from(fixed));
    let (lhs, rhs) = match which {
        SymIdentity::H1 => {
            let k = f;
            let rhs = (0..=k.min(n)).fold(SymPoly::zero(), |acc, j| acc + h(j, 0, n - j) * h(k - j, n - j, n + m - k));
            (h(k, 0, n + m - k), rhs)
        }
        SymIdentity::H2 => {
            let l = f;
            let rhs = (0..=m).fold(SymPoly::zero(), |acc, k| acc + h(l - 1, 0, k) * a(k) * h(n - l, k, m));
            (h(n, 0, m), rhs)
        }
        SymIdentity::SchurH => {
            let k = f;
            let rhs = (0..=n).fold(SymPoly::zero(), |acc, l| acc + h(l, 0, k - 1) * h(n - l, k, m));
            (h(n, 0, m), rhs)
        }
        SymIdentity::SchurE => {
            let k = f;
            let rhs = (0..=k.min(n)).fold(SymPoly::zero(), |acc, j| acc + e(j, 1, n) * e(k - j, n + 1, n + m));
            (e(k, 1, n + m), rhs)
        }
        SymIdentity::E1 => {
            let l = f;
            let rhs = (0..=m).fold(SymPoly::zero(), |acc, k| {
                acc + e(l - 1, 1, l + k - 1) * a(l + k) * e(n - l, l + k + 1, n + m)
            });
            (e(n, 1, n + m), rhs)
        }
        SymIdentity::E2 => {
            let k = f;
            let rhs =
                (0..=n).fold(SymPoly::zero(), |acc, l| acc + e(l, 1, l + k - 1) * e(n - l, l + k + 1, n + m));
            (e(n, 1, n + m), rhs)
        }
    };
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SymPoly {
        s.parse().unwrap()
    }

    #[test]
    fn h_examples() {
        assert_eq!(complete_h(0, &a_vars(0, 3)), SymPoly::one());
        assert_eq!(complete_h(2, &a_vars(0, 1)), p("a(0)^2 + a(0)*a(1) + a(1)^2"));
        assert_eq!(complete_h::<SymPoly>(2, &[]), SymPoly::zero());
        assert_eq!(complete_h::<SymPoly>(0, &[]), SymPoly::one());
    }

    #[test]
    fn h_recursion_in_last_variable() {
        for k in 1..=4usize {
            for m in 0..=3i64 {
                let lhs = complete_h(k, &a_vars(0, m + 1));
                let rhs = complete_h(k, &a_vars(0, m)) + a(m + 1) * complete_h(k - 1, &a_vars(0, m + 1));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn e_examples() {
        assert_eq!(elementary_e(0, &a_vars(1, 3)), SymPoly::one());
        assert_eq!(elementary_e(2, &a_vars(1, 3)), p("a(1)*a(2) + a(1)*a(3) + a(2)*a(3)"));
        assert!(elementary_e(4, &a_vars(1, 3)).is_zero());
    }

    #[test]
    fn binomial_theorems() {
        for n in 0..=4 {
            assert!(sym_binom_check(SymFamily::H, n).unwrap().is_zero());
            assert!(sym_binom_check(SymFamily::E, n).unwrap().is_zero());
        }
        let e2: NCElement = binomial_power(2, &SymFamily::H.spec()).unwrap();
        assert_eq!(e2.coeff(1, 1), p("1 + a(1)*a(0)^-1"));
        let e3: NCElement = binomial_power(3, &SymFamily::E.spec()).unwrap();
        let expected = elementary_e(2, &a_vars(1, 3)) * p("a(1)^-1*a(2)^-1");
        assert_eq!(e3.coeff(2, 1), expected);
    }

    #[test]
    fn identity_examples() {
        assert!(sym_identity_check(SymIdentity::SchurH, 3, 2, 2).unwrap().is_zero());
        assert!(sym_identity_check(SymIdentity::H1, 2, 2, 2).unwrap().is_zero());
        assert!(sym_identity_check(SymIdentity::E2, 3, 3, 2).unwrap().is_zero());
        assert!(sym_identity_check(SymIdentity::E1, 3, 2, 2).unwrap().is_zero());
        assert!(sym_identity_check(SymIdentity::H2, 3, 2, 3).unwrap().is_zero());
        assert!(sym_identity_check(SymIdentity::SchurE, 2, 3, 4).unwrap().is_zero());
        assert!(sym_identity_check(SymIdentity::E2, 3, 0, 1).is_err());
    }

    #[test]
    fn labelings() {
        for n in 0..=5 {
            for k in 0..=n {
                assert!(sym_labeling_check(SymFamily::H, n, k).unwrap().is_zero());
                assert!(sym_labeling_check(SymFamily::E, n, k).unwrap().is_zero());
            }
        }
    }
}
