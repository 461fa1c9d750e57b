//! Words and normal forms in `ℂ_w[x,y]` and `ℂ_{v,w}[x,y]`.
//!
//! Products are carried out over formal coefficients (polynomials in the
//! indeterminates `w(s,t)`, `v(s,t)`), where moving a coefficient past
//! `x^k y^l` is the index shift `(s,t) ↦ (s+k, t+l)`. A weight family is
//! applied only at the end through [`NCElement::specialize`]: once a weight
//! has been evaluated to a number it can no longer be shifted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffs::{Coeff, IndetKind, Indeterminate, Monomial, SymPoly};
use crate::error::{Error, Result};
use crate::weights::{big_weight, specialize, WeightDomain, WeightSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    X,
    Y,
    /// A commuting factor built from `w`/`v` indeterminates only.
    Weight(Monomial),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Atom>);

impl Word {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Word(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `x` and `y` generators.
    pub fn degrees(&self) -> (u32, u32) {
        self.0.iter().fold((0, 0), |(k, l), a| match a {
            Atom::X => (k + 1, l),
            Atom::Y => (k, l + 1),
            Atom::Weight(_) => (k, l),
        })
    }

    pub fn y_then_x(k: u32, l: u32) -> Self {
        let mut atoms = vec![Atom::Y; k as usize];
        atoms.extend(std::iter::repeat_n(Atom::X, l as usize));
        Word(atoms)
    }
}

fn weight_atom(m: &Monomial) -> Result<()> {
    match m.factors().iter().find(|(x, _)| !matches!(x.kind, IndetKind::W | IndetKind::V)) {
        Some((x, _)) => Err(Error::Parse(format!("{x} cannot appear as a weight factor in a word"))),
        None => Ok(()),
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Tokens `x`, `y`, `w(s,t)`, `v(s,t)`, each optionally raised to a
    /// nonnegative power with `^n`.
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut atoms = Vec::new();
        let number = |i: &mut usize| -> Result<u32> {
            let start = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            s[start..*i].parse().map_err(|_| Error::Parse(format!("expected a number at offset {start} in {s:?}")))
        };
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        loop {
            skip_ws(&mut i);
            if i >= bytes.len() {
                break;
            }
            let atom = match bytes[i] {
                b'x' => {
                    i += 1;
                    Atom::X
                }
                b'y' => {
                    i += 1;
                    Atom::Y
                }
                c @ (b'w' | b'v') => {
                    i += 1;
                    skip_ws(&mut i);
                    let expect = |i: &mut usize, ch: u8| {
                        skip_ws(i);
                        if bytes.get(*i) == Some(&ch) {
                            *i += 1;
                            Ok(())
                        } else {
                            Err(Error::Parse(format!("expected '{}' at offset {} in {s:?}", ch as char, *i)))
                        }
                    };
                    expect(&mut i, b'(')?;
                    skip_ws(&mut i);
                    let a = number(&mut i)?;
                    expect(&mut i, b',')?;
                    skip_ws(&mut i);
                    let b = number(&mut i)?;
                    expect(&mut i, b')')?;
                    let kind = if c == b'w' { IndetKind::W } else { IndetKind::V };
                    Atom::Weight(Monomial::var(Indeterminate::new(kind, a, b)?))
                }
                other => {
                    return Err(Error::Parse(format!("unexpected '{}' at offset {i} in word", other as char)));
                }
            };
            skip_ws(&mut i);
            let reps = if bytes.get(i) == Some(&b'^') {
                i += 1;
                skip_ws(&mut i);
                number(&mut i)?
            } else {
                1
            };
            atoms.extend(std::iter::repeat_n(atom, reps as usize));
        }
        Ok(Word(atoms))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match a {
                Atom::X => f.write_str("x")?,
                Atom::Y => f.write_str("y")?,
                Atom::Weight(m) => write!(f, "{m}")?,
            }
        }
        Ok(())
    }
}

/// An element `Σ c_{k,l} x^k y^l` in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct NCElement<C = SymPoly> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for NCElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> NCElement<C> {
    pub fn zero() -> Self {
        NCElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::term(0, 0, C::one())
    }

    /// `c · x^k y^l`.
    pub fn term(k: u32, l: u32, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(k, l, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^k y^l` (zero when absent).
    pub fn coeff(&self, k: u32, l: u32) -> C {
        self.terms.get(&(k, l)).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &C)> {
        self.terms.iter().map(|(&(k, l), c)| (k, l, c))
    }

    pub fn add_term(&mut self, k: u32, l: u32, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&(k, l)) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert((k, l), sum);
                }
            }
            None => {
                self.terms.insert((k, l), c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, l, c) in other.terms() {
            out.add_term(k, l, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, l, c) in other.terms() {
            out.add_term(k, l, C::zero() - c.clone());
        }
        out
    }
}

impl NCElement<SymPoly> {
    pub fn x() -> Self {
        Self::term(1, 0, SymPoly::one())
    }

    pub fn y() -> Self {
        Self::term(0, 1, SymPoly::one())
    }

    /// Formal product. The right coefficient is shifted past `x^{k_a} y^{l_a}`
    /// and `y^{l_a} x^{k_b}` is reordered with the weights it produces.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, la, ca) in self.terms() {
            for (kb, lb, cb) in other.terms() {
                let swap = commute_monomial(ka, la, kb);
                let c = ca * &cb.shifted(ka, la).mul_monomial(&swap);
                out.add_term(ka + kb, la + lb, c);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    /// Evaluates every formal coefficient under `spec`.
    pub fn specialize<C: WeightDomain>(&self, spec: &WeightSpec) -> Result<NCElement<C>> {
        let mut out = NCElement::zero();
        for (k, l, c) in self.terms() {
            out.add_term(k, l, specialize::<C>(c, spec)?);
        }
        Ok(out)
    }
}

/// `∏_{i=1}^{l} W(s0+i, t)` as a formal monomial in the small weights.
fn commute_monomial(s0: u32, t: u32, l: u32) -> Monomial {
    Monomial::from_factors((1..=l).flat_map(|i| (1..=t).map(move |j| (Indeterminate::w(s0 + i, j), 1))))
}

/// Formal normal form of a word: `(k, l, c)` with `word = c · x^k y^l`.
pub fn normalize_formal(word: &Word) -> (u32, u32, Monomial) {
    let (mut alpha, mut beta) = (0u32, 0u32);
    let mut coeff = Monomial::one();
    for atom in word.atoms() {
        match atom {
            Atom::X => {
                alpha += 1;
                // A horizontal step ending at (alpha, beta) weighs W(alpha, beta).
                coeff = coeff.mul(&Monomial::from_factors((1..=beta).map(|j| (Indeterminate::w(alpha, j), 1))));
            }
            Atom::Y => beta += 1,
            Atom::Weight(m) => coeff = coeff.mul(&m.shifted(alpha, beta)),
        }
    }
    (alpha, beta, coeff)
}

/// Normal form of `word` with weights evaluated under `spec`.
pub fn normalize<C: WeightDomain>(word: &Word, spec: &WeightSpec) -> Result<NCElement<C>> {
    for atom in word.atoms() {
        if let Atom::Weight(m) = atom {
            weight_atom(m)?;
        }
    }
    let (k, l, m) = normalize_formal(word);
    let c = specialize::<C>(&SymPoly::monomial(m), spec)?;
    Ok(NCElement::term(k, l, c))
}

/// `(x + y)^n`, or `(x + v(0,1)·y)^n` for double-weight families.
pub fn binomial_power<C: WeightDomain>(n: u32, spec: &WeightSpec) -> Result<NCElement<C>> {
    let y_coeff = if spec.is_double() { SymPoly::var(Indeterminate::v(0, 1)) } else { SymPoly::one() };
    let base = NCElement::x().add(&NCElement::term(0, 1, y_coeff));
    base.pow(n).specialize(spec)
}

/// `∏_{i=1}^{l} W(i,k)`, the coefficient in `y^k x^l = (…) x^l y^k`.
pub fn commute_yx<C: WeightDomain>(k: u32, l: u32, spec: &WeightSpec) -> Result<C> {
    (1..=l).try_fold(C::one(), |acc, i| Ok(acc * big_weight::<C>(spec, i, k)?))
}

#[derive(Serialize, Deserialize)]
struct TermRepr<C> {
    k: u32,
    l: u32,
    coeff: C,
}

impl<C: Coeff + Serialize> Serialize for NCElement<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(&(k, l), c)| TermRepr { k, l, coeff: c }))
    }
}

impl<'de, C: Coeff + Deserialize<'de>> Deserialize<'de> for NCElement<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<TermRepr<C>> = Vec::deserialize(deserializer)?;
        let mut out = NCElement::zero();
        for t in raw {
            if out.terms.contains_key(&(t.k, t.l)) {
                return Err(D::Error::custom(format!("duplicate term ({}, {})", t.k, t.l)));
            }
            out.add_term(t.k, t.l, t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::{vwbinom, wbinom};
    use num_complex::Complex64;

    fn p(s: &str) -> SymPoly {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_words() {
        let w = word("x x y w(1,2) x");
        assert_eq!(w.len(), 5);
        assert_eq!(w.to_string(), "x x y w(1,2) x");
        assert_eq!(word("x^2 y").to_string(), "x x y");
        assert_eq!(word(""), Word::default());
        assert!("x z".parse::<Word>().is_err());
        assert!("w(0,1)".parse::<Word>().is_err());
        assert!("w(1,".parse::<Word>().is_err());
    }

    #[test]
    fn normalize_running_example() {
        let e: NCElement = normalize(&word("x x y x x y x"), &WeightSpec::generic()).unwrap();
        assert_eq!(e, NCElement::term(5, 2, p("w(3,1)*w(4,1)*w(5,1)*w(5,2)")));
    }

    #[test]
    fn normalize_small_words() {
        let spec = WeightSpec::generic();
        let e: NCElement = normalize(&word("y x"), &spec).unwrap();
        assert_eq!(e, NCElement::term(1, 1, p("w(1,1)")));
        let e: NCElement = normalize(&Word::default(), &spec).unwrap();
        assert_eq!(e, NCElement::one());
        let e: NCElement = normalize(&word("x y w(1,2) x"), &spec).unwrap();
        assert_eq!(e, NCElement::term(2, 1, p("w(2,3)*w(2,1)")));
    }

    #[test]
    fn multiply_examples() {
        let y = NCElement::y();
        let x = NCElement::x();
        assert_eq!(y.multiply(&x), NCElement::term(1, 1, p("w(1,1)")));
        assert_eq!(NCElement::one().multiply(&y), y);
        assert_eq!(y.pow(2).multiply(&x), NCElement::term(1, 2, p("w(1,1)*w(1,2)")));
    }

    #[test]
    fn binomial_power_examples() {
        let e: NCElement = binomial_power(0, &WeightSpec::generic()).unwrap();
        assert_eq!(e, NCElement::one());
        let e: NCElement = binomial_power(2, &WeightSpec::generic()).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.coeff(2, 0), SymPoly::one());
        assert_eq!(e.coeff(1, 1), p("1 + w(1,1)"));
        assert_eq!(e.coeff(0, 2), SymPoly::one());
        let e: NCElement = binomial_power(2, &WeightSpec::q_symbolic()).unwrap();
        assert_eq!(e.coeff(1, 1), p("1 + q"));
    }

    #[test]
    fn binomial_theorem_small() {
        for spec in [WeightSpec::generic(), WeightSpec::generic_double()] {
            for n in 0..=5u32 {
                let e: NCElement = binomial_power(n, &spec).unwrap();
                for k in 0..=n {
                    let want: SymPoly = if spec.is_double() {
                        vwbinom(&spec, n.into(), k.into()).unwrap()
                    } else {
                        wbinom(&spec, n.into(), k.into()).unwrap()
                    };
                    assert_eq!(e.coeff(k, n - k), want, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn commute_examples() {
        let spec = WeightSpec::generic();
        assert_eq!(commute_yx::<SymPoly>(0, 5, &spec).unwrap(), SymPoly::one());
        assert_eq!(commute_yx::<SymPoly>(1, 1, &spec).unwrap(), p("w(1,1)"));
        let got = commute_yx::<SymPoly>(2, 2, &spec).unwrap();
        assert_eq!(got, p("w(1,1)*w(1,2)*w(2,1)*w(2,2)"));
        let e: NCElement = normalize(&word("y y x x"), &spec).unwrap();
        assert_eq!(e, NCElement::term(2, 2, got));
    }

    #[test]
    fn numeric_specialization() {
        let q = Complex64::new(0.5, 0.0);
        let spec = WeightSpec::new(crate::weights::Family::Q { q: Some(q) }).unwrap();
        let e: NCElement<Complex64> = binomial_power(2, &spec).unwrap();
        assert!((e.coeff(1, 1) - Complex64::new(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let e: NCElement = binomial_power(1, &WeightSpec::generic()).unwrap();
        let js = serde_json::to_string(&e).unwrap();
        assert_eq!(
            js,
            r#"[{"k":0,"l":1,"coeff":[{"monomial":[],"num":"1","den":"1"}]},{"k":1,"l":0,"coeff":[{"monomial":[],"num":"1","den":"1"}]}]"#
        );
        let back: NCElement = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
    }
}
