//! Sparse Laurent polynomials with exact rational coefficients.
//!
//! Indeterminates are totally ordered by `(kind, index1, index2)`, monomials
//! are stored as sorted factor lists, and a polynomial is a `BTreeMap` from
//! monomial to nonzero rational. Two polynomials are equal iff their maps are.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndetKind {
    /// Horizontal weight w(s,t).
    W,
    /// Vertical weight v(s,t).
    V,
    /// Symmetric-function variable a_t.
    A,
    /// The base q of the q-families.
    Q,
}

impl IndetKind {
    fn tag(self) -> &'static str {
        match self {
            IndetKind::W => "w",
            IndetKind::V => "v",
            IndetKind::A => "a",
            IndetKind::Q => "q",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "w" | "W" => Some(IndetKind::W),
            "v" | "V" => Some(IndetKind::V),
            "a" | "A" => Some(IndetKind::A),
            "q" | "Q" => Some(IndetKind::Q),
            _ => None,
        }
    }
}

/// A single commuting indeterminate.
///
/// `W` requires both indices ≥ 1, `V` allows `index1 = 0` (the base
/// `v(0,1)` of the double binomial theorem), `A` uses only `index1`, and `Q`
/// carries no indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indeterminate {
    pub kind: IndetKind,
    pub index1: u32,
    pub index2: u32,
}

impl Indeterminate {
    pub fn new(kind: IndetKind, index1: u32, index2: u32) -> Result<Self> {
        let ok = match kind {
            IndetKind::W => index1 >= 1 && index2 >= 1,
            IndetKind::V => index2 >= 1,
            IndetKind::A => index2 == 0,
            IndetKind::Q => index1 == 0 && index2 == 0,
        };
        if ok {
            Ok(Indeterminate { kind, index1, index2 })
        } else {
            Err(Error::InvalidParameter(format!(
                "indices ({index1},{index2}) out of range for {}",
                kind.tag()
            )))
        }
    }

    /// `w(s,t)`; panics unless `s, t ≥ 1`.
    pub fn w(s: u32, t: u32) -> Self {
        Self::new(IndetKind::W, s, t).expect("w(s,t) needs s,t >= 1")
    }

    /// `v(s,t)`; panics unless `t ≥ 1`.
    pub fn v(s: u32, t: u32) -> Self {
        Self::new(IndetKind::V, s, t).expect("v(s,t) needs t >= 1")
    }

    pub fn a(t: u32) -> Self {
        Indeterminate { kind: IndetKind::A, index1: t, index2: 0 }
    }

    pub fn q() -> Self {
        Indeterminate { kind: IndetKind::Q, index1: 0, index2: 0 }
    }

    /// Index shift induced by commuting past `x^ds y^dt`. Only weight
    /// indeterminates move.
    pub fn shifted(self, ds: u32, dt: u32) -> Self {
        match self.kind {
            IndetKind::W | IndetKind::V => Indeterminate {
                kind: self.kind,
                index1: self.index1 + ds,
                index2: self.index2 + dt,
            },
            _ => self,
        }
    }
}

impl fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IndetKind::W | IndetKind::V => {
                write!(f, "{}({},{})", self.kind.tag(), self.index1, self.index2)
            }
            IndetKind::A => write!(f, "a({})", self.index1),
            IndetKind::Q => f.write_str("q"),
        }
    }
}

/// Product of indeterminate powers, sorted, with no zero exponents.
/// Negative exponents are allowed (Laurent monomials).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Indeterminate, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(x: Indeterminate) -> Self {
        Monomial(vec![(x, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (Indeterminate, i32)>>(factors: I) -> Self {
        let mut map: BTreeMap<Indeterminate, i32> = BTreeMap::new();
        for (x, e) in factors {
            *map.entry(x).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Indeterminate, i32)] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| i64::from(e)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(x, e)| (x, -e)).collect())
    }

    /// Shifts weight indeterminates; order among W/V factors is preserved
    /// because the shift is uniform.
    pub fn shifted(&self, ds: u32, dt: u32) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|&(x, e)| (x.shifted(ds, dt), e)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (x, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{x}")?;
            } else {
                write!(f, "{x}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact sparse polynomial: monomial → nonzero rational.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(v: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn var(x: Indeterminate) -> Self {
        Self::monomial(Monomial::var(x))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SymPoly { terms }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Returns the rational value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn indeterminates(&self) -> Vec<Indeterminate> {
        let mut xs: Vec<Indeterminate> =
            self.terms.keys().flat_map(|m| m.0.iter().map(|&(x, _)| x)).collect();
        xs.sort();
        xs.dedup();
        xs
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero();
        }
        SymPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SymPoly {
        SymPoly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn shifted(&self, ds: u32, dt: u32) -> SymPoly {
        if ds == 0 && dt == 0 {
            return self.clone();
        }
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.shifted(ds, dt), c.clone());
        }
        out
    }

    /// Inverse in the Laurent ring; only single terms are invertible.
    pub fn try_inv(&self) -> Option<SymPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(SymPoly::term(m.inverse(), c.recip()))
    }

    pub fn pow(&self, e: u32) -> SymPoly {
        let mut acc = SymPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates the polynomial through a ring homomorphism determined by
    /// its action on indeterminates.
    pub fn eval_with<C, F>(&self, mut value_of: F) -> Result<C>
    where
        C: crate::coeffs::Coeff,
        F: FnMut(&Indeterminate) -> Result<C>,
    {
        let mut cache: HashMap<Indeterminate, (C, Option<C>)> = HashMap::new();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = C::from_rational(c);
            for &(x, e) in &m.0 {
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(x) {
                    let v = value_of(&x)?;
                    let inv = v.try_inv();
                    e.insert((v, inv));
                }
                let (v, inv) = &cache[&x];
                let base = if e > 0 {
                    v
                } else {
                    inv.as_ref().ok_or(Error::SingularSubstitution(x))?
                };
                for _ in 0..e.unsigned_abs() {
                    term = term * base.clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Direct (non-Horner) numeric evaluation.
    pub fn substitute(&self, assignment: &HashMap<Indeterminate, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = Complex64::new(rational_to_f64(c), 0.0);
            for &(x, e) in &m.0 {
                let v = *assignment.get(&x).ok_or(Error::MissingAssignment(x))?;
                if e < 0 && v == Complex64::new(0.0, 0.0) {
                    return Err(Error::SingularSubstitution(x));
                }
                term *= v.powi(e);
            }
            acc += term;
        }
        if acc.re.is_finite() && acc.im.is_finite() {
            Ok(acc)
        } else {
            Err(Error::NonFinite("polynomial substitution".into()))
        }
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for SymPoly {
    type Output = SymPoly;
    fn add(mut self, rhs: SymPoly) -> SymPoly {
        self += rhs;
        self
    }
}

impl<'a> Add<&'a SymPoly> for &'a SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl AddAssign for SymPoly {
    fn add_assign(&mut self, rhs: SymPoly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            for (m, c) in lhs.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl Neg for SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        SymPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: SymPoly) -> SymPoly {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a SymPoly> for &'a SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a SymPoly> for &'a SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: SymPoly) -> SymPoly {
        &self * &rhs
    }
}

impl num_traits::Zero for SymPoly {
    fn zero() -> Self {
        SymPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl num_traits::One for SymPoly {
    fn one() -> Self {
        SymPoly::one()
    }
}

impl From<Indeterminate> for SymPoly {
    fn from(x: Indeterminate) -> Self {
        SymPoly::var(x)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small(&mut self) -> Result<u32> {
        self.digits()?.parse().map_err(|_| self.error("index out of range"))
    }

    fn indeterminate(&mut self) -> Result<Indeterminate> {
        let tag = self.peek().ok_or_else(|| self.error("unexpected end"))?;
        let kind = IndetKind::from_tag(&(tag as char).to_string())
            .ok_or_else(|| self.error("unknown indeterminate"))?;
        self.pos += 1;
        match kind {
            IndetKind::Q => Ok(Indeterminate::q()),
            IndetKind::A => {
                self.expect(b'(')?;
                let t = self.small()?;
                self.expect(b')')?;
                Ok(Indeterminate::a(t))
            }
            IndetKind::W | IndetKind::V => {
                self.expect(b'(')?;
                let s = self.small()?;
                self.expect(b',')?;
                let t = self.small()?;
                self.expect(b')')?;
                Indeterminate::new(kind, s, t)
            }
        }
    }

    fn factor(&mut self) -> Result<SymPoly> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits");
                let den: BigInt = if self.eat(b'/') {
                    self.digits()?.parse().expect("digits")
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                Ok(SymPoly::constant(BigRational::new(num, den)))
            }
            _ => {
                let x = self.indeterminate()?;
                let mut e: i32 = 1;
                if self.eat(b'^') {
                    let neg = self.eat(b'-');
                    e = self.digits()?.parse().map_err(|_| self.error("exponent"))?;
                    if neg {
                        e = -e;
                    }
                }
                Ok(SymPoly::monomial(Monomial::from_factors([(x, e)])))
            }
        }
    }

    fn term(&mut self) -> Result<SymPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn poly(&mut self) -> Result<SymPoly> {
        let mut acc = SymPoly::zero();
        let mut negative = self.eat(b'-');
        loop {
            let t = self.term()?;
            acc += if negative { -t } else { t };
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(acc)
    }
}

impl FromStr for SymPoly {
    type Err = Error;

    /// Parses the canonical text form, e.g. `1 + 2*w(1,1) + w(1,1)^2*w(2,3)`.
    fn from_str(s: &str) -> Result<Self> {
        Lexer { src: s.as_bytes(), pos: 0 }.poly()
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    monomial: Vec<(String, u32, u32, i32)>,
    num: String,
    den: String,
}

impl Serialize for SymPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                monomial: m
                    .0
                    .iter()
                    .map(|&(x, e)| (x.kind.tag().to_string(), x.index1, x.index2, e))
                    .collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<JsonTerm>::deserialize(deserializer)?;
        let mut out = SymPoly::zero();
        for t in terms {
            let mut factors = Vec::with_capacity(t.monomial.len());
            for (tag, i, j, e) in t.monomial {
                let kind = IndetKind::from_tag(&tag)
                    .ok_or_else(|| D::Error::custom(format!("unknown kind {tag}")))?;
                let x = Indeterminate::new(kind, i, j).map_err(D::Error::custom)?;
                factors.push((x, e));
            }
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            out.add_term(Monomial::from_factors(factors), BigRational::new(num, den));
        }
        Ok(out)
    }
}
