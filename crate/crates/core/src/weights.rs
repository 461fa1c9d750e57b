//! Weight families `w(s,t)` / `v(s,t)`, big weights `W(s,t) = ∏_{j≤t} w(s,j)`
//! and the index shift induced by commuting a coefficient past `x^ds y^dt`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::coeffs::{Coeff, IndetKind, Indeterminate, Monomial, SymPoly};
use crate::elliptic::{theta_denominator, theta_many, DEGENERACY_THRESHOLD};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `w(s,t)` are free indeterminates.
    GenericSymbolic,
    /// Free `w(s,t)` and `v(s,t)`.
    GenericDoubleSymbolic,
    /// `w(s,t) = q`; `None` keeps `q` symbolic.
    Q { q: Option<Complex64> },
    /// `w(s,t) = a_t / a_{t−1}`; `None` keeps the `a_t` symbolic.
    CompleteSym { a: Option<Vec<Complex64>> },
    /// `w(s,t) = a_{s+t} / a_{s+t−1}`.
    ElementarySym { a: Option<Vec<Complex64>> },
    Elliptic { a: Complex64, b: Complex64, q: Complex64, p: Complex64 },
    /// `p → 0` limit of the elliptic weights.
    BalancedVwp { a: Complex64, b: Complex64, q: Complex64 },
    /// Further `a → 0`.
    Balanced { b: Complex64, q: Complex64 },
    /// `p → 0` then `b → 0`.
    Vwp { a: Complex64, q: Complex64 },
    /// `v(s,t) = s`, `w = 1`.
    StirlingSecond,
    /// `v(s,t) = 1 − s − t`, `w = 1`.
    StirlingFirst,
    /// `v(s,t) = (1 − q^s)/(1 − q)`, `w = 1`.
    QStirlingSecond { q: Option<Complex64> },
    /// `v(s,t) = (q^{s+t−1} − 1)/(1 − q)`, `w = 1`.
    QStirlingFirst { q: Option<Complex64> },
    /// Explicit numeric tables; `v` defaults to 1 where absent.
    CustomTable { w: BTreeMap<(u32, u32), Complex64>, v: Option<BTreeMap<(u32, u32), Complex64>> },
}

/// Which coefficient domain a family is naturally computed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub family: Family,
    pub shift: (u32, u32),
}

impl WeightSpec {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Elliptic { p, q, .. } => {
                if p.norm() >= 1.0 {
                    return Err(Error::InvalidParameter("elliptic family needs |p| < 1".into()));
                }
                if q.is_zero() {
                    return Err(Error::InvalidParameter("q must be nonzero".into()));
                }
            }
            Family::BalancedVwp { q, .. } | Family::Balanced { q, .. } | Family::Vwp { q, .. }
                if q.is_zero() => {
                    return Err(Error::InvalidParameter("q must be nonzero".into()));
                }
            _ => {}
        }
        Ok(WeightSpec { family, shift: (0, 0) })
    }

    pub fn generic() -> Self {
        WeightSpec { family: Family::GenericSymbolic, shift: (0, 0) }
    }

    pub fn generic_double() -> Self {
        WeightSpec { family: Family::GenericDoubleSymbolic, shift: (0, 0) }
    }

    pub fn q_symbolic() -> Self {
        WeightSpec { family: Family::Q { q: None }, shift: (0, 0) }
    }

    pub fn complete_symbolic() -> Self {
        WeightSpec { family: Family::CompleteSym { a: None }, shift: (0, 0) }
    }

    pub fn elementary_symbolic() -> Self {
        WeightSpec { family: Family::ElementarySym { a: None }, shift: (0, 0) }
    }

    pub fn elliptic(a: Complex64, b: Complex64, q: Complex64, p: Complex64) -> Result<Self> {
        Self::new(Family::Elliptic { a, b, q, p })
    }

    /// Whether the family carries vertical weights `v(s,t)`.
    pub fn is_double(&self) -> bool {
        matches!(
            self.family,
            Family::GenericDoubleSymbolic
                | Family::StirlingSecond
                | Family::StirlingFirst
                | Family::QStirlingSecond { .. }
                | Family::QStirlingFirst { .. }
        ) || matches!(&self.family, Family::CustomTable { v: Some(_), .. })
    }

    pub fn domain(&self) -> Domain {
        match &self.family {
            Family::GenericSymbolic
            | Family::GenericDoubleSymbolic
            | Family::StirlingSecond
            | Family::StirlingFirst => Domain::Exact,
            Family::Q { q } | Family::QStirlingSecond { q } | Family::QStirlingFirst { q } => {
                if q.is_some() {
                    Domain::Numeric
                } else {
                    Domain::Exact
                }
            }
            Family::CompleteSym { a } | Family::ElementarySym { a } => {
                if a.is_some() {
                    Domain::Numeric
                } else {
                    Domain::Exact
                }
            }
            _ => Domain::Numeric,
        }
    }

    /// Conjugation by `x^ds y^dt` as an index shift of the weight table.
    pub fn shifted(&self, ds: u32, dt: u32) -> WeightSpec {
        WeightSpec { family: self.family.clone(), shift: (self.shift.0 + ds, self.shift.1 + dt) }
    }

    /// For the elliptic and basic-hypergeometric families, rewrites the
    /// pending index shift as the equivalent parameter substitution
    /// `a ← a q^{ds+2dt}`, `b ← b q^{2ds+dt}`.
    pub fn absorb_shift(&self) -> Result<WeightSpec> {
        let (ds, dt) = (self.shift.0 as i32, self.shift.1 as i32);
        let sa = |a: Complex64, q: Complex64| a * q.powi(ds + 2 * dt);
        let sb = |b: Complex64, q: Complex64| b * q.powi(2 * ds + dt);
        let family = match self.family {
            Family::Elliptic { a, b, q, p } => Family::Elliptic { a: sa(a, q), b: sb(b, q), q, p },
            Family::BalancedVwp { a, b, q } => Family::BalancedVwp { a: sa(a, q), b: sb(b, q), q },
            Family::Balanced { b, q } => Family::Balanced { b: sb(b, q), q },
            Family::Vwp { a, q } => Family::Vwp { a: sa(a, q), q },
            _ => return Err(Error::NotApplicable("parameter form of the shift".into())),
        };
        Ok(WeightSpec { family, shift: (0, 0) })
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::GenericSymbolic => "generic",
            Family::GenericDoubleSymbolic => "generic-double",
            Family::Q { .. } => "q",
            Family::CompleteSym { .. } => "complete-sym",
            Family::ElementarySym { .. } => "elementary-sym",
            Family::Elliptic { .. } => "elliptic",
            Family::BalancedVwp { .. } => "balanced-vwp",
            Family::Balanced { .. } => "balanced",
            Family::Vwp { .. } => "vwp",
            Family::StirlingSecond => "stirling-second",
            Family::StirlingFirst => "stirling-first",
            Family::QStirlingSecond { .. } => "q-stirling-second",
            Family::QStirlingFirst { .. } => "q-stirling-first",
            Family::CustomTable { .. } => "custom",
        }
    }

    fn at(&self, s: u32, t: u32) -> (u32, u32) {
        (s + self.shift.0, t + self.shift.1)
    }
}

/// A coefficient ring that weight families can be evaluated in.
pub trait WeightDomain: Coeff {
    /// `w(s,t)` at already-shifted indices.
    fn eval_w(spec: &WeightSpec, s: u32, t: u32) -> Result<Self>;
    /// `v(s,t)` at already-shifted indices.
    fn eval_v(spec: &WeightSpec, s: u32, t: u32) -> Result<Self>;
    /// Value of an indeterminate that is not a weight (symmetric-function
    /// variables, `q`).
    fn passthrough(x: &Indeterminate) -> Result<Self>;
}

fn ratio_a(num: u32, den: u32) -> SymPoly {
    SymPoly::monomial(Monomial::from_factors([(Indeterminate::a(num), 1), (Indeterminate::a(den), -1)]))
}

fn q_integer_poly(len: u32) -> SymPoly {
    (0..len).fold(SymPoly::zero(), |acc, i| acc + SymPoly::var(Indeterminate::q()).pow(i))
}

impl WeightDomain for SymPoly {
    fn eval_w(spec: &WeightSpec, s: u32, t: u32) -> Result<Self> {
        match &spec.family {
            Family::GenericSymbolic | Family::GenericDoubleSymbolic => {
                Ok(SymPoly::var(Indeterminate::w(s, t)))
            }
            Family::Q { q: None } => Ok(SymPoly::var(Indeterminate::q())),
            Family::CompleteSym { a: None } => Ok(ratio_a(t, t - 1)),
            Family::ElementarySym { a: None } => Ok(ratio_a(s + t, s + t - 1)),
            Family::StirlingSecond
            | Family::StirlingFirst
            | Family::QStirlingSecond { q: None }
            | Family::QStirlingFirst { q: None } => Ok(SymPoly::one()),
            _ => Err(Error::NotApplicable(format!("exact evaluation of {}", spec.family_name()))),
        }
    }

    fn eval_v(spec: &WeightSpec, s: u32, t: u32) -> Result<Self> {
        match &spec.family {
            Family::GenericDoubleSymbolic => Ok(SymPoly::var(Indeterminate::v(s, t))),
            Family::StirlingSecond => Ok(SymPoly::integer(i64::from(s))),
            Family::StirlingFirst => Ok(SymPoly::integer(1 - i64::from(s) - i64::from(t))),
            Family::QStirlingSecond { q: None } => Ok(q_integer_poly(s)),
            Family::QStirlingFirst { q: None } => Ok(-q_integer_poly(s + t - 1)),
            Family::CustomTable { .. } | Family::Elliptic { .. } => {
                Err(Error::NotApplicable(format!("exact evaluation of {}", spec.family_name())))
            }
            _ if spec.domain() == Domain::Exact => Ok(SymPoly::one()),
            _ => Err(Error::NotApplicable(format!("exact evaluation of {}", spec.family_name()))),
        }
    }

    fn passthrough(x: &Indeterminate) -> Result<Self> {
        Ok(SymPoly::var(*x))
    }
}

fn one_minus(x: Complex64) -> Complex64 {
    Complex64::one() - x
}

fn nonvanishing(x: Complex64, what: &str) -> Result<Complex64> {
    if x.norm() < DEGENERACY_THRESHOLD {
        Err(Error::DegenerateParameter(format!("vanishing denominator in {what}")))
    } else {
        Ok(x)
    }
}

fn table_entry(table: &[Complex64], i: u32, family: &str) -> Result<Complex64> {
    table
        .get(i as usize)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("{family} table has no entry a_{i}")))
}

fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

/// Elliptic small weight at absolute indices.
fn elliptic_small(a: Complex64, b: Complex64, q: Complex64, p: Complex64, s: i32, t: i32) -> Result<Complex64> {
    let num = theta_many(&[a * q.powi(s + 2 * t), b * q.powi(2 * s + t - 2), a * q.powi(t - s - 1) / b], p)?;
    let den = theta_denominator(&[a * q.powi(s + 2 * t - 2), b * q.powi(2 * s + t), a * q.powi(t - s + 1) / b], p)?;
    finite(num / den * q, "elliptic weight")
}

impl WeightDomain for Complex64 {
    fn eval_w(spec: &WeightSpec, s: u32, t: u32) -> Result<Self> {
        let (si, ti) = (s as i32, t as i32);
        match &spec.family {
            Family::Q { q: Some(q) } => Ok(*q),
            Family::CompleteSym { a: Some(a) } => {
                let den = nonvanishing(table_entry(a, t - 1, "complete-sym")?, "complete-sym weight")?;
                Ok(table_entry(a, t, "complete-sym")? / den)
            }
            Family::ElementarySym { a: Some(a) } => {
                let den = nonvanishing(table_entry(a, s + t - 1, "elementary-sym")?, "elementary-sym weight")?;
                Ok(table_entry(a, s + t, "elementary-sym")? / den)
            }
            Family::Elliptic { a, b, q, p } => elliptic_small(*a, *b, *q, *p, si, ti),
            Family::BalancedVwp { a, b, q } => {
                let (a, b, q) = (*a, *b, *q);
                let num = one_minus(a * q.powi(si + 2 * ti))
                    * one_minus(b * q.powi(2 * si + ti - 2))
                    * one_minus(a * q.powi(ti - si - 1) / b);
                let den = one_minus(a * q.powi(si + 2 * ti - 2))
                    * one_minus(b * q.powi(2 * si + ti))
                    * one_minus(a * q.powi(ti - si + 1) / b);
                finite(num / nonvanishing(den, "balanced-vwp weight")? * q, "balanced-vwp weight")
            }
            Family::Balanced { b, q } => {
                let (b, q) = (*b, *q);
                let den = nonvanishing(one_minus(b * q.powi(2 * si + ti)), "balanced weight")?;
                finite(one_minus(b * q.powi(2 * si + ti - 2)) / den * q, "balanced weight")
            }
            Family::Vwp { a, q } => {
                let (a, q) = (*a, *q);
                let den = nonvanishing(one_minus(a * q.powi(si + 2 * ti - 2)), "vwp weight")?;
                finite(one_minus(a * q.powi(si + 2 * ti)) / den / q, "vwp weight")
            }
            Family::StirlingSecond
            | Family::StirlingFirst
            | Family::QStirlingSecond { .. }
            | Family::QStirlingFirst { .. } => Ok(Complex64::one()),
            Family::CustomTable { w, .. } => w
                .get(&(s, t))
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("custom table has no w({s},{t})"))),
            _ => Err(Error::NotApplicable(format!("numeric evaluation of symbolic {}", spec.family_name()))),
        }
    }

    fn eval_v(spec: &WeightSpec, s: u32, t: u32) -> Result<Self> {
        let geometric = |q: Complex64, len: u32| (0..len).map(|i| q.powi(i as i32)).sum::<Complex64>();
        match &spec.family {
            Family::GenericDoubleSymbolic => {
                Err(Error::NotApplicable("numeric evaluation of symbolic generic-double".into()))
            }
            Family::StirlingSecond => Ok(Complex64::new(f64::from(s), 0.0)),
            Family::StirlingFirst => Ok(Complex64::new(1.0 - f64::from(s) - f64::from(t), 0.0)),
            Family::QStirlingSecond { q: Some(q) } => Ok(geometric(*q, s)),
            Family::QStirlingFirst { q: Some(q) } => Ok(-geometric(*q, s + t - 1)),
            Family::QStirlingSecond { q: None } | Family::QStirlingFirst { q: None } => {
                Err(Error::NotApplicable("numeric evaluation with symbolic q".into()))
            }
            Family::CustomTable { v: Some(v), .. } => v
                .get(&(s, t))
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("custom table has no v({s},{t})"))),
            _ => Ok(Complex64::one()),
        }
    }

    fn passthrough(x: &Indeterminate) -> Result<Self> {
        Err(Error::MissingAssignment(*x))
    }
}

/// Small weight `w(s+Δs, t+Δt)`.
pub fn small_weight<C: WeightDomain>(spec: &WeightSpec, s: u32, t: u32) -> Result<C> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidParameter(format!("w(s,t) needs s,t >= 1, got ({s},{t})")));
    }
    let (s, t) = spec.at(s, t);
    C::eval_w(spec, s, t)
}

/// Vertical weight `v(s+Δs, t+Δt)`; 1 for single-weight families.
pub fn small_weight_v<C: WeightDomain>(spec: &WeightSpec, s: u32, t: u32) -> Result<C> {
    if t == 0 {
        return Err(Error::InvalidParameter(format!("v(s,t) needs t >= 1, got ({s},{t})")));
    }
    if !spec.is_double() {
        return Ok(C::one());
    }
    let (s, t) = spec.at(s, t);
    C::eval_v(spec, s, t)
}

/// Big weight `W(s,t) = ∏_{j=1}^{t} w(s,j)`; `W(s,0) = 1`.
pub fn big_weight<C: WeightDomain>(spec: &WeightSpec, s: u32, t: u32) -> Result<C> {
    (1..=t).try_fold(C::one(), |acc, j| Ok(acc * small_weight::<C>(spec, s, j)?))
}

/// Closed product form of the elliptic big weight at absolute indices:
/// `θ(aq^{s+2t}, bq^{2s}, bq^{2s−1}, aq^{1−s}/b, aq^{−s}/b) /
///  θ(aq^s, bq^{2s+t}, bq^{2s+t−1}, aq^{1+t−s}/b, aq^{t−s}/b) · q^t`.
pub fn elliptic_big_weight_closed(
    a: Complex64,
    b: Complex64,
    q: Complex64,
    p: Complex64,
    s: i64,
    t: i64,
) -> Result<Complex64> {
    if t == 0 {
        return Ok(Complex64::one());
    }
    let (s, t) = (s as i32, t as i32);
    let qi = |e: i32| q.powi(e);
    let num = theta_many(
        &[a * qi(s + 2 * t), b * qi(2 * s), b * qi(2 * s - 1), a * qi(1 - s) / b, a * qi(-s) / b],
        p,
    )?;
    let den = theta_denominator(
        &[a * qi(s), b * qi(2 * s + t), b * qi(2 * s + t - 1), a * qi(1 + t - s) / b, a * qi(t - s) / b],
        p,
    )?;
    finite(num / den * qi(t), "elliptic big weight")
}

/// Evaluates a polynomial in the formal weights `w(s,t)`, `v(s,t)` under a
/// weight family (the specialization homomorphism).
pub fn specialize<C: WeightDomain>(poly: &SymPoly, spec: &WeightSpec) -> Result<C> {
    poly.eval_with(|x| match x.kind {
        IndetKind::W => small_weight::<C>(spec, x.index1, x.index2),
        IndetKind::V => {
            if spec.is_double() {
                small_weight_v::<C>(spec, x.index1, x.index2)
            } else {
                Err(Error::NotApplicable(format!("vertical weight {x} in a single-weight family")))
            }
        }
        _ => C::passthrough(x),
    })
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn read_pair(v: &Value) -> Option<Complex64> {
    let arr = v.as_array()?;
    match arr.as_slice() {
        [re, im] => Some(Complex64::new(re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn table_json(t: &BTreeMap<(u32, u32), Complex64>) -> Value {
    Value::Array(t.iter().map(|(&(s, u), z)| json!([s, u, z.re, z.im])).collect())
}

fn read_table(v: &Value) -> Option<BTreeMap<(u32, u32), Complex64>> {
    v.as_array()?
        .iter()
        .map(|row| {
            let r = row.as_array()?;
            match r.as_slice() {
                [s, t, re, im] => Some((
                    (s.as_u64()? as u32, t.as_u64()? as u32),
                    Complex64::new(re.as_f64()?, im.as_f64()?),
                )),
                _ => None,
            }
        })
        .collect()
}

impl WeightSpec {
    pub fn to_json(&self) -> Value {
        let mut params = Map::new();
        let mut put = |k: &str, z: &Complex64| {
            params.insert(k.to_string(), pair(*z));
        };
        match &self.family {
            Family::Q { q: Some(q) } | Family::QStirlingSecond { q: Some(q) } | Family::QStirlingFirst { q: Some(q) } => {
                put("q", q)
            }
            Family::CompleteSym { a: Some(a) } | Family::ElementarySym { a: Some(a) } => {
                params.insert("a".into(), Value::Array(a.iter().map(|z| pair(*z)).collect()));
            }
            Family::Elliptic { a, b, q, p } => {
                put("a", a);
                put("b", b);
                put("q", q);
                put("p", p);
            }
            Family::BalancedVwp { a, b, q } => {
                put("a", a);
                put("b", b);
                put("q", q);
            }
            Family::Balanced { b, q } => {
                put("b", b);
                put("q", q);
            }
            Family::Vwp { a, q } => {
                put("a", a);
                put("q", q);
            }
            Family::CustomTable { w, v } => {
                params.insert("w".into(), table_json(w));
                if let Some(v) = v {
                    params.insert("v".into(), table_json(v));
                }
            }
            _ => {}
        }
        json!({"family": self.family_name(), "params": params, "shift": [self.shift.0, self.shift.1]})
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("weight spec: {msg}"));
        let family = value.get("family").and_then(Value::as_str).ok_or_else(|| bad("missing family"))?;
        let empty = Map::new();
        let params = match value.get("params") {
            Some(Value::Object(m)) => m,
            None | Some(Value::Null) => &empty,
            Some(_) => return Err(bad("params must be an object")),
        };
        let opt = |k: &str| -> Result<Option<Complex64>> {
            params
                .get(k)
                .map(|v| read_pair(v).ok_or_else(|| bad(&format!("{k} must be [re,im]"))))
                .transpose()
        };
        let req = |k: &str| -> Result<Complex64> { opt(k)?.ok_or_else(|| bad(&format!("missing {k}"))) };
        let table = |k: &str| -> Result<Option<Vec<Complex64>>> {
            params
                .get(k)
                .map(|v| {
                    v.as_array()
                        .and_then(|xs| xs.iter().map(read_pair).collect::<Option<Vec<_>>>())
                        .ok_or_else(|| bad(&format!("{k} must be a list of [re,im]")))
                })
                .transpose()
        };
        let fam = match family {
            "generic" => Family::GenericSymbolic,
            "generic-double" => Family::GenericDoubleSymbolic,
            "q" => Family::Q { q: opt("q")? },
            "complete-sym" => Family::CompleteSym { a: table("a")? },
            "elementary-sym" => Family::ElementarySym { a: table("a")? },
            "elliptic" => Family::Elliptic { a: req("a")?, b: req("b")?, q: req("q")?, p: req("p")? },
            "balanced-vwp" => Family::BalancedVwp { a: req("a")?, b: req("b")?, q: req("q")? },
            "balanced" => Family::Balanced { b: req("b")?, q: req("q")? },
            "vwp" => Family::Vwp { a: req("a")?, q: req("q")? },
            "stirling-second" => Family::StirlingSecond,
            "stirling-first" => Family::StirlingFirst,
            "q-stirling-second" => Family::QStirlingSecond { q: opt("q")? },
            "q-stirling-first" => Family::QStirlingFirst { q: opt("q")? },
            "custom" => Family::CustomTable {
                w: params.get("w").and_then(read_table).ok_or_else(|| bad("custom needs w table"))?,
                v: params.get("v").map(|v| read_table(v).ok_or_else(|| bad("bad v table"))).transpose()?,
            },
            other => return Err(bad(&format!("unknown family {other}"))),
        };
        let shift = match value.get("shift") {
            None | Some(Value::Null) => (0, 0),
            Some(v) => {
                let arr = v.as_array().ok_or_else(|| bad("shift must be [ds,dt]"))?;
                match arr.as_slice() {
                    [a, b] => (
                        a.as_u64().ok_or_else(|| bad("shift entries must be >= 0"))? as u32,
                        b.as_u64().ok_or_else(|| bad("shift entries must be >= 0"))? as u32,
                    ),
                    _ => return Err(bad("shift must be [ds,dt]")),
                }
            }
        };
        let mut spec = WeightSpec::new(fam)?;
        spec.shift = shift;
        Ok(spec)
    }
}

impl Serialize for WeightSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WeightSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        WeightSpec::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::relative_error;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ell() -> WeightSpec {
        WeightSpec::elliptic(z(0.31, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05)).unwrap()
    }

    #[test]
    fn generic_is_identity_table() {
        let w: SymPoly = small_weight(&WeightSpec::generic(), 3, 1).unwrap();
        assert_eq!(w, SymPoly::var(Indeterminate::w(3, 1)));
    }

    #[test]
    fn q_family_is_constant() {
        let w: SymPoly = small_weight(&WeightSpec::q_symbolic(), 5, 2).unwrap();
        assert_eq!(w, SymPoly::var(Indeterminate::q()));
    }

    #[test]
    fn elliptic_small_weight_formula() {
        let (a, b, q, p) = (z(0.31, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05));
        let (s, t) = (2i32, 3i32);
        let got: Complex64 = small_weight(&ell(), s as u32, t as u32).unwrap();
        let th = |x: Complex64| crate::elliptic::theta(x, p).unwrap();
        let expected = th(a * q.powi(s + 2 * t)) * th(b * q.powi(2 * s + t - 2)) * th(a * q.powi(t - s - 1) / b)
            / (th(a * q.powi(s + 2 * t - 2)) * th(b * q.powi(2 * s + t)) * th(a * q.powi(t - s + 1) / b))
            * q;
        assert!(relative_error(got, expected) < 1e-14);
    }

    #[test]
    fn vertical_weights() {
        let v: SymPoly = small_weight_v(&WeightSpec { family: Family::StirlingSecond, shift: (0, 0) }, 3, 2).unwrap();
        assert_eq!(v, SymPoly::integer(3));
        let v: SymPoly = small_weight_v(&WeightSpec { family: Family::StirlingFirst, shift: (0, 0) }, 2, 3).unwrap();
        assert_eq!(v, SymPoly::integer(-4));
        let v: SymPoly = small_weight_v(&WeightSpec::generic_double(), 4, 2).unwrap();
        assert_eq!(v, SymPoly::var(Indeterminate::v(4, 2)));
        let v: SymPoly = small_weight_v(&WeightSpec::generic(), 4, 2).unwrap();
        assert_eq!(v, SymPoly::one());
        let v: SymPoly = small_weight_v(&WeightSpec::generic_double(), 0, 1).unwrap();
        assert_eq!(v, SymPoly::var(Indeterminate::v(0, 1)));
    }

    #[test]
    fn q_stirling_reduces_at_q_one() {
        let spec = WeightSpec::new(Family::QStirlingFirst { q: Some(Complex64::one()) }).unwrap();
        let v: Complex64 = small_weight_v(&spec, 2, 3).unwrap();
        assert_eq!(v, z(-4.0, 0.0));
        let spec = WeightSpec::new(Family::QStirlingSecond { q: None }).unwrap();
        let v: SymPoly = small_weight_v(&spec, 3, 1).unwrap();
        assert_eq!(v, "1 + q + q^2".parse().unwrap());
    }

    #[test]
    fn big_weight_edges() {
        let w: SymPoly = big_weight(&WeightSpec::generic(), 4, 0).unwrap();
        assert_eq!(w, SymPoly::one());
        let w: SymPoly = big_weight(&WeightSpec::generic(), 1, 2).unwrap();
        assert_eq!(w, "w(1,1)*w(1,2)".parse().unwrap());
        let w: Complex64 = big_weight(&ell(), 7, 0).unwrap();
        assert_eq!(w, Complex64::one());
    }

    #[test]
    fn elliptic_big_weight_closed_matches_product() {
        let (a, b, q, p) = (z(0.31, 0.1), z(0.27, -0.05), z(0.62, 0.2), z(0.13, 0.05));
        let prod: Complex64 = big_weight(&ell(), 2, 3).unwrap();
        let closed = elliptic_big_weight_closed(a, b, q, p, 2, 3).unwrap();
        assert!(relative_error(prod, closed) < 1e-10);
    }

    #[test]
    fn shift_identity_and_generic_shift() {
        let spec = WeightSpec::generic();
        assert_eq!(spec.shifted(0, 0), spec);
        let (j, n) = (2, 5);
        let w: SymPoly = small_weight(&spec.shifted(j, n - j), 1, 2).unwrap();
        assert_eq!(w, SymPoly::var(Indeterminate::w(1 + j, 2 + n - j)));
    }

    #[test]
    fn elliptic_shift_equals_substitution() {
        let shifted = ell().shifted(2, 3);
        let absorbed = shifted.absorb_shift().unwrap();
        for s in 1..4 {
            for t in 1..4 {
                let x: Complex64 = small_weight(&shifted, s, t).unwrap();
                let y: Complex64 = small_weight(&absorbed, s, t).unwrap();
                assert!(relative_error(x, y) < 1e-10);
            }
        }
    }

    #[test]
    fn elliptic_degeneracy_detected() {
        // a q^{s+2t-2} = 1 at (s,t) = (1,1) when a = q^{-1}.
        let q = z(0.62, 0.2);
        let spec = WeightSpec::elliptic(q.inv(), z(0.27, -0.05), q, z(0.13, 0.05)).unwrap();
        let r: Result<Complex64> = small_weight(&spec, 1, 1);
        assert!(matches!(r, Err(Error::EllipticDegenerate { .. })));
    }

    #[test]
    fn numeric_only_family_refuses_exact() {
        let r: Result<SymPoly> = small_weight(&ell(), 1, 1);
        assert!(matches!(r, Err(Error::NotApplicable(_))));
        let r: Result<Complex64> = small_weight(&WeightSpec::generic(), 1, 1);
        assert!(matches!(r, Err(Error::NotApplicable(_))));
    }

    #[test]
    fn invalid_nome_rejected() {
        assert!(WeightSpec::elliptic(z(0.3, 0.0), z(0.2, 0.0), z(0.5, 0.0), z(1.2, 0.0)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = ell().shifted(1, 2);
        let js = serde_json::to_string(&spec).unwrap();
        let back: WeightSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, spec);
        let custom = WeightSpec::new(Family::CustomTable {
            w: [((1, 1), z(2.0, 0.0))].into_iter().collect(),
            v: None,
        })
        .unwrap();
        let back: WeightSpec = serde_json::from_str(&serde_json::to_string(&custom).unwrap()).unwrap();
        assert_eq!(back, custom);
        assert!(WeightSpec::from_json(&json!({"family": "nope"})).is_err());
    }
}
