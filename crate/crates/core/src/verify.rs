//! Named identity checks and the report built from them.
//!
//! Every check lives in one table, [`identities`], so `report` covers the
//! whole table by construction. A check is either exact (symbolic residuals
//! must vanish identically) or numeric (maximum relative residual over
//! seeded random draws, compared against a tolerance).

use std::ops::RangeInclusive;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::binomial::{
    basic_binom_closed, convolution_check, elliptic_binom_closed, gaussian_binomial, vwbinom, wbinom,
    BinomTable,
};
use crate::coeffs::{relative_error, Indeterminate, Monomial, SymPoly};
use crate::elliptic::{
    qp_factorial, theta, theta_addition_residual, theta_terms, theta_truncated, v109_convolution_residuals,
    ConvolutionKind, V109Params,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::precise::{self, Cdd};
use crate::ncalgebra::{binomial_power, commute_yx, normalize, normalize_formal, Atom, NCElement, Word};
use crate::oracle::{all_words, naive_normalize, set_partitions, single_rewrites, stirling_first_signed};
use crate::paths::{decompose_check, generating_function};
use crate::random::{base_q, complex_in, nome, param, trial_rng, MAX_REDRAWS, PARAM_RANGE, REJECT_BELOW};
use crate::symmetric::{sym_binom_check, sym_identity_check, sym_labeling_check, SymFamily, SymIdentity};
use crate::weights::{Family, WeightSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Numeric { trials: u32, tol: f64 },
}

/// Which size parameters a check reads, with the default sweep bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Sizes {
    pub n: Option<RangeInclusive<u32>>,
    pub m: Option<RangeInclusive<u32>>,
    pub k: bool,
}

const fn sizes(n: Option<(u32, u32)>, m: Option<(u32, u32)>, k: bool) -> Sizes {
    // RangeInclusive::new is const.
    Sizes {
        n: match n {
            Some((a, b)) => Some(RangeInclusive::new(a, b)),
            None => None,
        },
        m: match m {
            Some((a, b)) => Some(RangeInclusive::new(a, b)),
            None => None,
        },
        k,
    }
}

pub struct Identity {
    pub name: &'static str,
    pub about: &'static str,
    pub mode: Mode,
    pub sizes: Sizes,
    run: fn(&Ctx) -> Result<Measure>,
}

/// User overrides; `None` falls back to the identity's defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckParams {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub trials: Option<u32>,
    pub tol: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    ExactZero,
    Value(f64),
    NonFinite,
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Residual::ExactZero => s.serialize_str("exact-zero"),
            Residual::Value(v) => s.serialize_f64(*v),
            Residual::NonFinite => s.serialize_str("non-finite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub identity: String,
    pub params: Map<String, Value>,
    pub trials: u64,
    pub max_residual: Residual,
    pub pass: bool,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Measure {
    residual: Residual,
    cases: u64,
}

struct Ctx<'a> {
    name: &'a str,
    n: RangeInclusive<u32>,
    m: RangeInclusive<u32>,
    k: Option<u32>,
    trials: u32,
    seed: u64,
}

impl Ctx<'_> {
    fn ns(&self) -> RangeInclusive<u32> {
        self.n.clone()
    }

    fn ms(&self) -> RangeInclusive<u32> {
        self.m.clone()
    }

    /// The admissible fixed indices, narrowed to `--k` when given.
    fn ks(&self, admissible: RangeInclusive<u32>) -> Vec<u32> {
        match self.k {
            Some(k) if admissible.contains(&k) => vec![k],
            Some(_) => Vec::new(),
            None => admissible.collect(),
        }
    }
}

fn exact_cases<I, F>(cases: Vec<I>, f: F) -> Result<Measure>
where
    I: Sync,
    F: Fn(&I) -> Result<usize> + Sync + Send,
{
    if cases.is_empty() {
        return Err(Error::InvalidParameter("no admissible cases for these sizes".into()));
    }
    let results = exec::map(&cases, f);
    let mut worst = 0usize;
    for r in results {
        worst = worst.max(r?);
    }
    let residual = if worst == 0 { Residual::ExactZero } else { Residual::Value(worst as f64) };
    Ok(Measure { residual, cases: cases.len() as u64 })
}

fn nonzero_terms(p: &SymPoly) -> usize {
    p.len()
}

fn element_terms(e: &NCElement) -> usize {
    e.terms().map(|(_, _, c)| c.len()).sum()
}

fn is_rejection(e: &Error) -> bool {
    matches!(e, Error::EllipticDegenerate { .. } | Error::DegenerateParameter(_) | Error::ZeroArgument)
}

/// Runs `draw` once per trial on an independent stream, redrawing on
/// degenerate parameters, and returns the worst residual.
fn numeric_trials<F>(ctx: &Ctx, draw: F) -> Result<Measure>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
{
    let trials: Vec<u64> = (0..u64::from(ctx.trials)).collect();
    let results = exec::map(&trials, |&t| {
        let mut rng = trial_rng(ctx.seed, ctx.name, t);
        for _ in 0..MAX_REDRAWS {
            match draw(&mut rng) {
                Err(e) if is_rejection(&e) => continue,
                other => return other,
            }
        }
        Err(Error::DegenerateParameter(format!("no admissible draw in {MAX_REDRAWS} attempts")))
    });
    let mut worst = 0.0f64;
    let mut finite = true;
    for r in results {
        let v = r?;
        if v.is_finite() {
            worst = worst.max(v);
        } else {
            finite = false;
        }
    }
    let residual = if finite { Residual::Value(worst) } else { Residual::NonFinite };
    Ok(Measure { residual, cases: u64::from(ctx.trials) })
}

/// Rejects a draw when any `θ(x·q^j; p)` with `x` in `bases` and `j` in
/// `span`, or any `θ(q^j; p)` with `1 ≤ j ≤ span.end()`, is near zero.
fn guard(p: Complex64, q: Complex64, bases: &[Complex64], span: RangeInclusive<i32>) -> Result<()> {
    let near_zero = |z: Complex64| -> Result<bool> { Ok(theta(z, p)?.norm() < REJECT_BELOW) };
    for &x in bases {
        if x.is_zero() {
            continue;
        }
        for j in span.clone() {
            if near_zero(x * q.powi(j))? {
                return Err(Error::DegenerateParameter("draw rejected".into()));
            }
        }
    }
    for j in 1..=*span.end() {
        if near_zero(q.powi(j))? {
            return Err(Error::DegenerateParameter("draw rejected".into()));
        }
    }
    Ok(())
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

struct EllipticDraw {
    a: Complex64,
    b: Complex64,
    q: Complex64,
    p: Complex64,
}

fn elliptic_draw(rng: &mut ChaCha8Rng, n_max: u32) -> Result<EllipticDraw> {
    let (a, b, q, p) = (param(rng), param(rng), base_q(rng), nome(rng));
    let n = n_max as i32;
    guard(p, q, &[a, b, a / b], -(3 * n + 3)..=(4 * n + 4))?;
    Ok(EllipticDraw { a, b, q, p })
}

// Exact checks.

fn run_binomial_theorem(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::generic();
    exact_cases(ctx.ns().collect(), |&n| {
        let e: NCElement = binomial_power(n, &spec)?;
        let mut table = BinomTable::<SymPoly>::new(&spec);
        let mut want = NCElement::zero();
        for k in 0..=n {
            want.add_term(k, n - k, table.get(n.into(), k.into())?);
        }
        Ok(element_terms(&e.sub(&want)))
    })
}

fn run_double_binomial_theorem(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::generic_double();
    exact_cases(ctx.ns().collect(), |&n| {
        let e: NCElement = binomial_power(n, &spec)?;
        let mut table = BinomTable::<SymPoly>::new_double(&spec);
        let mut want = NCElement::zero();
        for k in 0..=n {
            want.add_term(k, n - k, table.get(n.into(), k.into())?);
        }
        Ok(element_terms(&e.sub(&want)))
    })
}

fn nk_cases(ctx: &Ctx) -> Vec<(u32, u32)> {
    ctx.ns().flat_map(|n| ctx.ks(0..=n).into_iter().map(move |k| (n, k))).collect()
}

fn run_path_oracle(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::generic();
    exact_cases(nk_cases(ctx), |&(n, k)| {
        let rec: SymPoly = wbinom(&spec, n.into(), k.into())?;
        Ok(nonzero_terms(&(rec - generating_function::<SymPoly>((0, 0), (k, n - k), &spec)?)))
    })
}

fn run_double_path_oracle(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::generic_double();
    exact_cases(nk_cases(ctx), |&(n, k)| {
        let rec: SymPoly = vwbinom(&spec, n.into(), k.into())?;
        Ok(nonzero_terms(&(rec - generating_function::<SymPoly>((0, 0), (k, n - k), &spec)?)))
    })
}

fn run_commutation_lemma(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::generic();
    let cases: Vec<(u32, u32)> = ctx.ns().flat_map(|k| ctx.ms().map(move |l| (k, l))).collect();
    exact_cases(cases, |&(k, l)| {
        let lhs: NCElement = normalize(&Word::y_then_x(k, l), &spec)?;
        let rhs = NCElement::term(l, k, commute_yx::<SymPoly>(k, l, &spec)?);
        Ok(element_terms(&lhs.sub(&rhs)))
    })
}

fn lengths(ctx: &Ctx) -> Vec<usize> {
    ctx.ns().map(|n| n as usize).collect()
}

fn run_normalizer(ctx: &Ctx) -> Result<Measure> {
    let plain = [Atom::X, Atom::Y];
    let weighted = [
        Atom::X,
        Atom::Y,
        Atom::Weight(Monomial::var(Indeterminate::w(1, 2))),
        Atom::Weight(Monomial::var(Indeterminate::v(0, 1))),
    ];
    let mut words = Vec::new();
    for len in lengths(ctx) {
        words.extend(all_words(&plain, len));
        if len <= 5 {
            words.extend(all_words(&weighted, len).into_iter().filter(|w| w.atoms().iter().any(|a| matches!(a, Atom::Weight(_)))));
        }
    }
    exact_cases(words, |w| Ok(usize::from(normalize_formal(w) != naive_normalize(w))))
}

fn run_reduction_uniqueness(ctx: &Ctx) -> Result<Measure> {
    let alphabet = [Atom::X, Atom::Y, Atom::Weight(Monomial::var(Indeterminate::w(2, 1)))];
    let words: Vec<Word> = lengths(ctx).into_iter().flat_map(|len| all_words(&alphabet, len)).collect();
    exact_cases(words, |w| {
        let target = normalize_formal(w);
        Ok(single_rewrites(w).iter().filter(|r| normalize_formal(r) != target).count())
    })
}

fn convolution_cases(ctx: &Ctx, kind: ConvolutionKind) -> Vec<(u32, u32, u32)> {
    let total = *ctx.n.end();
    let mut cases = Vec::new();
    let fixed_n = ctx.n.start() == ctx.n.end() && *ctx.n.start() > 0 && ctx.m.start() == ctx.m.end();
    let pairs: Vec<(u32, u32)> = if fixed_n {
        vec![(*ctx.n.start(), *ctx.m.start())]
    } else {
        (0..=total).flat_map(|n| (0..=total - n).map(move |m| (n, m))).collect()
    };
    for (n, m) in pairs {
        let admissible = match kind {
            ConvolutionKind::Diagonal => 0..=n + m,
            ConvolutionKind::Vertical => 1..=n,
            ConvolutionKind::Horizontal => 1..=m,
        };
        cases.extend(ctx.ks(admissible).into_iter().map(|k| (n, m, k)));
    }
    cases
}

fn run_convolution(ctx: &Ctx, kind: ConvolutionKind) -> Result<Measure> {
    let spec = WeightSpec::generic();
    exact_cases(convolution_cases(ctx, kind), |&(n, m, k)| {
        Ok(nonzero_terms(&convolution_check::<SymPoly>(kind, &spec, n, m, k)?))
    })
}

fn run_path_decomposition(ctx: &Ctx, kind: ConvolutionKind) -> Result<Measure> {
    let mut cases = Vec::new();
    for x in ctx.ns() {
        for y in ctx.ms() {
            let admissible = match kind {
                ConvolutionKind::Diagonal => 0..=x + y,
                ConvolutionKind::Vertical => 1..=x,
                ConvolutionKind::Horizontal => 1..=y,
            };
            for idx in ctx.ks(admissible) {
                for double in [false, true] {
                    cases.push((x, y, idx, double));
                }
            }
        }
    }
    exact_cases(cases, |&(x, y, idx, double)| {
        let spec = if double { WeightSpec::generic_double() } else { WeightSpec::generic() };
        Ok(nonzero_terms(&decompose_check::<SymPoly>(kind, &spec, (x, y), idx)?))
    })
}

fn run_sym_binomial(ctx: &Ctx, family: SymFamily) -> Result<Measure> {
    exact_cases(ctx.ns().collect(), |&n| Ok(element_terms(&sym_binom_check(family, n)?)))
}

fn run_sym_identity(ctx: &Ctx, which: SymIdentity) -> Result<Measure> {
    let mut cases = Vec::new();
    for n in ctx.ns() {
        for m in ctx.ms() {
            cases.extend(ctx.ks(which.fixed_range(n, m)).into_iter().map(|f| (n, m, f)));
        }
    }
    exact_cases(cases, |&(n, m, f)| Ok(nonzero_terms(&sym_identity_check(which, n, m, f)?)))
}

fn run_labeling(ctx: &Ctx, family: SymFamily) -> Result<Measure> {
    exact_cases(nk_cases(ctx), |&(n, k)| Ok(nonzero_terms(&sym_labeling_check(family, n, k)?)))
}

fn run_stirling_second(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::new(Family::StirlingSecond)?;
    exact_cases(nk_cases(ctx), |&(n, k)| {
        let got: SymPoly = vwbinom(&spec, n.into(), k.into())?;
        Ok(nonzero_terms(&(got - SymPoly::integer(set_partitions(n, k) as i64))))
    })
}

fn run_stirling_first(ctx: &Ctx) -> Result<Measure> {
    let spec = WeightSpec::new(Family::StirlingFirst)?;
    exact_cases(nk_cases(ctx), |&(n, k)| {
        let got: SymPoly = vwbinom(&spec, n.into(), k.into())?;
        Ok(nonzero_terms(&(got - SymPoly::integer(stirling_first_signed(n, k)))))
    })
}

// Numeric checks.

fn run_elliptic_closed_form(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let d = elliptic_draw(rng, *ctx.n.end())?;
        let spec = WeightSpec::elliptic(d.a, d.b, d.q, d.p)?;
        let mut table = BinomTable::<Cdd>::new(&spec);
        let mut worst = Vec::new();
        for n in ctx.ns() {
            for k in ctx.ks(0..=n) {
                let (n, k) = (i64::from(n), i64::from(k));
                let closed = precise::elliptic_binom_closed(d.a, d.b, d.q, d.p, n, k)?;
                worst.push(precise::relative_error(table.get(n, k)?, closed));
            }
        }
        Ok(max_of(worst))
    })
}

fn run_elliptic_borders(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let d = elliptic_draw(rng, *ctx.n.end())?;
        let mut worst = Vec::new();
        for n in ctx.ns() {
            let n = i64::from(n);
            let at = |k: i64| elliptic_binom_closed(d.a, d.b, d.q, d.p, n, k);
            for (k, want) in [(0, 1.0), (n, 1.0), (-1, 0.0), (-2, 0.0), (n + 1, 0.0)] {
                worst.push((at(k)? - Complex64::new(want, 0.0)).norm());
            }
        }
        Ok(max_of(worst))
    })
}

fn run_elliptic_p_shift(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let d = elliptic_draw(rng, *ctx.n.end())?;
        let mut worst = Vec::new();
        for n in ctx.ns() {
            for k in ctx.ks(0..=n) {
                let (n, k) = (i64::from(n), i64::from(k));
                let base = elliptic_binom_closed(d.a, d.b, d.q, d.p, n, k)?;
                worst.push(relative_error(base, elliptic_binom_closed(d.p * d.a, d.b, d.q, d.p, n, k)?));
                worst.push(relative_error(base, elliptic_binom_closed(d.a, d.p * d.b, d.q, d.p, n, k)?));
            }
        }
        Ok(max_of(worst))
    })
}

fn v109_draw(rng: &mut ChaCha8Rng, p: Complex64, n: u32) -> Result<V109Params> {
    let (a, b, c, d, q) = (param(rng), param(rng), param(rng), param(rng), base_q(rng));
    let prm = V109Params::balanced(a, b, c, d, q, p, n);
    let e = prm.e;
    let ni = n as i32;
    let sa = a.sqrt();
    guard(p, q, &[a, a / b, a / c, a / d, a / e, a / (b * c * d), sa, -sa], -1..=ni + 2)?;
    Ok(prm)
}

fn run_v109(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let p = nome(rng);
        let mut worst = Vec::new();
        for n in ctx.ns() {
            let prm = v109_draw(rng, p, n)?;
            let (lhs, rhs) = precise::v109_sides(prm.a, prm.b, prm.c, prm.d, prm.q, p, n)?;
            worst.push(precise::relative_error(lhs, rhs));
        }
        Ok(max_of(worst))
    })
}

fn run_jackson(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let mut worst = Vec::new();
        for n in ctx.ns() {
            let prm = v109_draw(rng, Complex64::zero(), n)?;
            let (series, product) = precise::jackson_8phi7_sides(prm.a, prm.b, prm.c, prm.d, prm.q, n)?;
            let (lhs, rhs) = precise::v109_sides(prm.a, prm.b, prm.c, prm.d, prm.q, prm.p, n)?;
            worst.extend([
                precise::relative_error(series, product),
                precise::relative_error(lhs, product),
                precise::relative_error(rhs, product),
            ]);
        }
        Ok(max_of(worst))
    })
}

fn run_v109_convolution(ctx: &Ctx, kind: ConvolutionKind) -> Result<Measure> {
    let mut cases = Vec::new();
    for n in ctx.ns() {
        for m in ctx.ms() {
            let admissible = match kind {
                ConvolutionKind::Diagonal => 0..=n + m,
                ConvolutionKind::Vertical => 1..=n,
                ConvolutionKind::Horizontal => 1..=m,
            };
            cases.extend(ctx.ks(admissible).into_iter().map(|k| (n, m, k)));
        }
    }
    if cases.is_empty() {
        return Err(Error::InvalidParameter("no admissible cases for these sizes".into()));
    }
    numeric_trials(ctx, |rng| {
        let d = elliptic_draw(rng, *ctx.n.end() + *ctx.m.end())?;
        let mut worst = Vec::new();
        for &(n, m, k) in &cases {
            worst.push(v109_convolution_residuals(kind, d.a, d.b, d.q, d.p, n, m, k)?);
        }
        Ok(max_of(worst))
    })
}

fn theta_args(rng: &mut ChaCha8Rng, count: usize) -> (Vec<Complex64>, Complex64) {
    let xs = (0..count).map(|_| complex_in(rng, PARAM_RANGE)).collect();
    (xs, nome(rng))
}

fn theta_guard(xs: &[Complex64], p: Complex64) -> Result<()> {
    guard(p, Complex64::one(), xs, 0..=0)
}

fn run_theta_inversion(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (xs, p) = theta_args(rng, 1);
        let x = xs[0];
        theta_guard(&xs, p)?;
        Ok(relative_error(theta(x, p)?, -x * theta(x.inv(), p)?))
    })
}

fn run_theta_p_shift(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (xs, p) = theta_args(rng, 1);
        let x = xs[0];
        theta_guard(&xs, p)?;
        Ok(relative_error(theta(p * x, p)?, -theta(x, p)? / x))
    })
}

fn run_theta_addition(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (xs, p) = theta_args(rng, 4);
        theta_addition_residual(xs[0], xs[1], xs[2], xs[3], p)
    })
}

fn run_theta_zero_nome(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (xs, _) = theta_args(rng, 1);
        let x = xs[0];
        Ok(relative_error(theta(x, Complex64::zero())?, Complex64::one() - x))
    })
}

fn run_theta_truncation(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (xs, p) = theta_args(rng, 1);
        theta_guard(&xs, p)?;
        let terms = theta_terms(p);
        Ok(relative_error(theta_truncated(xs[0], p, terms), theta_truncated(xs[0], p, 2 * terms)))
    })
}

fn run_qp_p_shift(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (a, q, p) = (param(rng), base_q(rng), nome(rng));
        guard(p, q, &[a], -6..=10)?;
        let mut worst = Vec::new();
        for n in -4i64..=8 {
            let lhs = qp_factorial(p * a, q, p, n)?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = sign * a.powi(-n as i32) * q.powi(-(n * (n - 1) / 2) as i32) * qp_factorial(a, q, p, n)?;
            worst.push(relative_error(lhs, rhs));
        }
        Ok(max_of(worst))
    })
}

fn basic_spec(which: &str, rng: &mut ChaCha8Rng, n_max: u32) -> Result<WeightSpec> {
    let (a, b, q) = (param(rng), param(rng), base_q(rng));
    let span = -(n_max as i32 + 2)..=(2 * n_max as i32 + 2);
    let zero = Complex64::zero();
    let family = match which {
        "balanced-vwp" => {
            guard(zero, q, &[a, b, a / b], span)?;
            Family::BalancedVwp { a, b, q }
        }
        "balanced" => {
            guard(zero, q, &[b], span)?;
            Family::Balanced { b, q }
        }
        _ => {
            guard(zero, q, &[a], span)?;
            Family::Vwp { a, q }
        }
    };
    WeightSpec::new(family)
}

fn run_basic_closed(ctx: &Ctx, which: &'static str) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let spec = basic_spec(which, rng, *ctx.n.end())?;
        let mut table = BinomTable::<Complex64>::new(&spec);
        let mut worst = Vec::new();
        for n in ctx.ns() {
            for k in ctx.ks(0..=n) {
                let (n, k) = (i64::from(n), i64::from(k));
                worst.push(relative_error(table.get(n, k)?, basic_binom_closed(&spec, n, k)?));
            }
        }
        Ok(max_of(worst))
    })
}

/// `closed` and the recursion under `family` against the Gaussian binomial
/// in `base`.
fn limit_residuals(ctx: &Ctx, family: Family, base: Complex64) -> Result<f64> {
    let spec = WeightSpec::new(family)?;
    let mut table = BinomTable::<Complex64>::new(&spec);
    let mut worst = Vec::new();
    for n in ctx.ns() {
        for k in ctx.ks(0..=n) {
            let (n, k) = (i64::from(n), i64::from(k));
            let want = gaussian_binomial(base, n, k)?;
            worst.push(relative_error(basic_binom_closed(&spec, n, k)?, want));
            worst.push(relative_error(table.get(n, k)?, want));
        }
    }
    Ok(max_of(worst))
}

fn run_balanced_b_limit(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let q = base_q(rng);
        guard(Complex64::zero(), q, &[], 0..=*ctx.n.end() as i32)?;
        limit_residuals(ctx, Family::Balanced { b: Complex64::zero(), q }, q)
    })
}

fn run_vwp_a_limit(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let q = base_q(rng);
        guard(Complex64::zero(), q, &[], 0..=*ctx.n.end() as i32)?;
        limit_residuals(ctx, Family::Vwp { a: Complex64::zero(), q }, q.inv())
    })
}

fn run_elliptic_limit_chain(ctx: &Ctx) -> Result<Measure> {
    numeric_trials(ctx, |rng| {
        let (a, b, q) = (param(rng), param(rng), base_q(rng));
        let zero = Complex64::zero();
        let n_max = *ctx.n.end() as i32;
        guard(zero, q, &[a, b, a / b], -(n_max + 2)..=(2 * n_max + 2))?;
        let bvwp = WeightSpec::new(Family::BalancedVwp { a, b, q })?;
        let bvwp_a0 = WeightSpec::new(Family::BalancedVwp { a: zero, b, q })?;
        let balanced = WeightSpec::new(Family::Balanced { b, q })?;
        let balanced_b0 = WeightSpec::new(Family::Balanced { b: zero, q })?;
        let mut worst = Vec::new();
        for n in ctx.ns() {
            for k in ctx.ks(0..=n) {
                let (n, k) = (i64::from(n), i64::from(k));
                let at_p0 = elliptic_binom_closed(a, b, q, zero, n, k)?;
                worst.push(relative_error(at_p0, basic_binom_closed(&bvwp, n, k)?));
                let at_a0 = elliptic_binom_closed(zero, b, q, zero, n, k)?;
                let balanced_val = basic_binom_closed(&balanced, n, k)?;
                worst.push(relative_error(at_a0, balanced_val));
                worst.push(relative_error(basic_binom_closed(&bvwp_a0, n, k)?, balanced_val));
                worst.push(relative_error(basic_binom_closed(&balanced_b0, n, k)?, gaussian_binomial(q, n, k)?));
            }
        }
        Ok(max_of(worst))
    })
}

const EXACT: Mode = Mode::Exact;

const fn numeric(trials: u32, tol: f64) -> Mode {
    Mode::Numeric { trials, tol }
}

macro_rules! identity {
    ($name:expr, $about:expr, $mode:expr, $sizes:expr, $run:expr) => {
        Identity { name: $name, about: $about, mode: $mode, sizes: $sizes, run: $run }
    };
}

static IDENTITIES: &[Identity] = &[
    identity!(
        "balanced-b-limit",
        "balanced family at b = 0 gives the Gaussian binomial in q",
        numeric(100, 1e-12),
        sizes(Some((0, 10)), None, true),
        run_balanced_b_limit
    ),
    identity!(
        "basic-balanced",
        "balanced basic binomial: closed form vs recursion",
        numeric(100, 1e-9),
        sizes(Some((0, 10)), None, true),
        |c| run_basic_closed(c, "balanced")
    ),
    identity!(
        "basic-balanced-vwp",
        "balanced very-well-poised basic binomial: closed form vs recursion",
        numeric(100, 1e-9),
        sizes(Some((0, 10)), None, true),
        |c| run_basic_closed(c, "balanced-vwp")
    ),
    identity!(
        "basic-vwp",
        "very-well-poised basic binomial: closed form vs recursion",
        numeric(100, 1e-9),
        sizes(Some((0, 10)), None, true),
        |c| run_basic_closed(c, "vwp")
    ),
    identity!(
        "binomial-theorem",
        "(x+y)^n expands with the recursion coefficients (generic weights)",
        EXACT,
        sizes(Some((0, 8)), None, false),
        run_binomial_theorem
    ),
    identity!(
        "commutation-lemma",
        "normalize(y^n x^m) = prod_{i=1}^{m} W(i,n) x^m y^n",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), false),
        run_commutation_lemma
    ),
    identity!(
        "convolution-diagonal",
        "first convolution, all n+m <= N (N from --n), generic weights",
        EXACT,
        sizes(Some((0, 7)), Some((0, 7)), true),
        |c| run_convolution(c, ConvolutionKind::Diagonal)
    ),
    identity!(
        "convolution-horizontal",
        "third convolution (fixed 1 <= k <= m), all n+m <= N, generic weights",
        EXACT,
        sizes(Some((0, 7)), Some((0, 7)), true),
        |c| run_convolution(c, ConvolutionKind::Horizontal)
    ),
    identity!(
        "convolution-vertical",
        "second convolution (fixed 1 <= l <= n), all n+m <= N, generic weights",
        EXACT,
        sizes(Some((0, 7)), Some((0, 7)), true),
        |c| run_convolution(c, ConvolutionKind::Vertical)
    ),
    identity!(
        "double-binomial-theorem",
        "(x + v(0,1) y)^n expands with the double recursion coefficients",
        EXACT,
        sizes(Some((0, 7)), None, false),
        run_double_binomial_theorem
    ),
    identity!(
        "double-path-oracle",
        "double coefficients equal v,w-weighted path sums",
        EXACT,
        sizes(Some((0, 8)), None, true),
        run_double_path_oracle
    ),
    identity!(
        "e-labeling",
        "a_1...a_k [n,k] = e_k(a_1..a_n) for w(s,t) = a_{s+t}/a_{s+t-1}",
        EXACT,
        sizes(Some((0, 8)), None, true),
        |c| run_labeling(c, SymFamily::E)
    ),
    identity!(
        "e1",
        "e_n(a_1..a_{n+m}) split at a_{l+k} for fixed 1 <= l <= n",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), true),
        |c| run_sym_identity(c, SymIdentity::E1)
    ),
    identity!(
        "e2",
        "e_n(a_1..a_{n+m}) split skipping a_{l+k} for fixed 1 <= k <= m",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), true),
        |c| run_sym_identity(c, SymIdentity::E2)
    ),
    identity!(
        "elliptic-borders",
        "elliptic closed form is 1 at k = 0, n and 0 outside 0..n",
        numeric(100, 0.0),
        sizes(Some((0, 10)), None, false),
        run_elliptic_borders
    ),
    identity!(
        "elliptic-closed-form",
        "elliptic closed form vs recursion with elliptic weights, in double-double",
        numeric(100, 1e-9),
        sizes(Some((0, 10)), None, true),
        run_elliptic_closed_form
    ),
    identity!(
        "elliptic-limit-chain",
        "elliptic closed form at p = 0, then a = 0, then b = 0",
        numeric(100, 1e-12),
        sizes(Some((0, 10)), None, true),
        run_elliptic_limit_chain
    ),
    identity!(
        "elliptic-p-shift",
        "elliptic closed form is invariant under a -> pa and b -> pb",
        numeric(100, 1e-9),
        sizes(Some((0, 10)), None, true),
        run_elliptic_p_shift
    ),
    identity!(
        "h-labeling",
        "a_0^k [n,k] = h_k(a_0..a_{n-k}) for w(s,t) = a_t/a_{t-1}",
        EXACT,
        sizes(Some((0, 8)), None, true),
        |c| run_labeling(c, SymFamily::H)
    ),
    identity!(
        "h1",
        "h_k(a_0..a_{n+m-k}) as a diagonal convolution",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), true),
        |c| run_sym_identity(c, SymIdentity::H1)
    ),
    identity!(
        "h2",
        "h_n(a_0..a_m) split at a_k for fixed 1 <= l <= n",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), true),
        |c| run_sym_identity(c, SymIdentity::H2)
    ),
    identity!(
        "jackson-8phi7",
        "terminating 8phi7 sum at p = 0 against both 10V9 sides, in double-double",
        numeric(50, 1e-10),
        sizes(Some((0, 8)), None, false),
        run_jackson
    ),
    identity!(
        "normalizer",
        "fast normal form equals exhaustive rewriting on every word up to length N",
        EXACT,
        sizes(Some((0, 8)), None, false),
        run_normalizer
    ),
    identity!(
        "path-decomposition-diagonal",
        "paths split where they cross a diagonal, every endpoint in the box",
        EXACT,
        sizes(Some((0, 7)), Some((0, 7)), true),
        |c| run_path_decomposition(c, ConvolutionKind::Diagonal)
    ),
    identity!(
        "path-decomposition-horizontal",
        "paths split at the step into row k, every endpoint in the box",
        EXACT,
        sizes(Some((0, 7)), Some((0, 7)), true),
        |c| run_path_decomposition(c, ConvolutionKind::Horizontal)
    ),
    identity!(
        "path-decomposition-vertical",
        "paths split at the step into column l, every endpoint in the box",
        EXACT,
        sizes(Some((0, 7)), Some((0, 7)), true),
        |c| run_path_decomposition(c, ConvolutionKind::Vertical)
    ),
    identity!(
        "path-oracle",
        "recursion coefficients equal weighted path sums",
        EXACT,
        sizes(Some((0, 8)), None, true),
        run_path_oracle
    ),
    identity!(
        "qp-factorial-p-shift",
        "(pa;q,p)_n = (-1)^n a^{-n} q^{-n(n-1)/2} (a;q,p)_n for -4 <= n <= 8",
        numeric(200, 1e-11),
        sizes(None, None, false),
        run_qp_p_shift
    ),
    identity!(
        "reduction-uniqueness",
        "any single rewrite leaves the normal form unchanged",
        EXACT,
        sizes(Some((0, 6)), None, false),
        run_reduction_uniqueness
    ),
    identity!(
        "schur-e",
        "e_k(a_1..a_{n+m}) as a convolution of the two halves",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), true),
        |c| run_sym_identity(c, SymIdentity::SchurE)
    ),
    identity!(
        "schur-h",
        "h_n(a_0..a_m) split at a_{k-1} | a_k for fixed 1 <= k <= m",
        EXACT,
        sizes(Some((0, 6)), Some((0, 6)), true),
        |c| run_sym_identity(c, SymIdentity::SchurH)
    ),
    identity!(
        "stirling-first",
        "v(s,t) = 1-s-t, w = 1 gives signed Stirling numbers of the first kind",
        EXACT,
        sizes(Some((0, 8)), None, true),
        run_stirling_first
    ),
    identity!(
        "stirling-second",
        "v(s,t) = s, w = 1 gives set-partition counts",
        EXACT,
        sizes(Some((0, 8)), None, true),
        run_stirling_second
    ),
    identity!(
        "sym-binomial-e",
        "(x+y)^n with w(s,t) = a_{s+t}/a_{s+t-1} has coefficients e_k/(a_1...a_k)",
        EXACT,
        sizes(Some((0, 6)), None, false),
        |c| run_sym_binomial(c, SymFamily::E)
    ),
    identity!(
        "sym-binomial-h",
        "(x+y)^n with w(s,t) = a_t/a_{t-1} has coefficients h_k/a_0^k",
        EXACT,
        sizes(Some((0, 6)), None, false),
        |c| run_sym_binomial(c, SymFamily::H)
    ),
    identity!(
        "theta-addition",
        "three-term addition formula for theta",
        numeric(200, 1e-11),
        sizes(None, None, false),
        run_theta_addition
    ),
    identity!(
        "theta-inversion",
        "theta(x) = -x theta(1/x)",
        numeric(200, 1e-11),
        sizes(None, None, false),
        run_theta_inversion
    ),
    identity!(
        "theta-p-shift",
        "theta(px) = -theta(x)/x",
        numeric(200, 1e-11),
        sizes(None, None, false),
        run_theta_p_shift
    ),
    identity!(
        "theta-truncation",
        "doubling the number of product factors changes theta by < tol",
        numeric(200, 1e-13),
        sizes(None, None, false),
        run_theta_truncation
    ),
    identity!(
        "theta-zero-nome",
        "theta(x; 0) = 1 - x",
        numeric(200, 1e-15),
        sizes(None, None, false),
        run_theta_zero_nome
    ),
    identity!(
        "v109",
        "10V9 summation with e from the balancing condition, in double-double",
        numeric(50, 1e-8),
        sizes(Some((0, 8)), None, false),
        run_v109
    ),
    identity!(
        "v109-convolution-diagonal",
        "elliptic first convolution, all n, m <= 5",
        numeric(25, 1e-8),
        sizes(Some((0, 5)), Some((0, 5)), true),
        |c| run_v109_convolution(c, ConvolutionKind::Diagonal)
    ),
    identity!(
        "v109-convolution-horizontal",
        "elliptic third convolution, all n, m <= 5",
        numeric(25, 1e-8),
        sizes(Some((0, 5)), Some((0, 5)), true),
        |c| run_v109_convolution(c, ConvolutionKind::Horizontal)
    ),
    identity!(
        "v109-convolution-vertical",
        "elliptic second convolution, all n, m <= 5",
        numeric(25, 1e-8),
        sizes(Some((0, 5)), Some((0, 5)), true),
        |c| run_v109_convolution(c, ConvolutionKind::Vertical)
    ),
    identity!(
        "vwp-a-limit",
        "very-well-poised family at a = 0 gives the Gaussian binomial in 1/q",
        numeric(100, 1e-12),
        sizes(Some((0, 10)), None, true),
        run_vwp_a_limit
    ),
];

/// All registered checks, sorted by name.
pub fn identities() -> &'static [Identity] {
    IDENTITIES
}

pub fn find(name: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.name == name)
}

impl Identity {
    fn context(&self, params: &CheckParams) -> Result<(Ctx<'static>, Map<String, Value>)> {
        let name = self.name;
        let mut shown = Map::new();
        let mut pick = |label: &str, default: &Option<RangeInclusive<u32>>, given: Option<u32>| -> Result<RangeInclusive<u32>> {
            match (default, given) {
                (None, Some(_)) => Err(Error::InvalidParameter(format!("{name} does not take --{label}"))),
                (None, None) => Ok(0..=0),
                (Some(range), None) => {
                    shown.insert(format!("{label}_max"), Value::from(*range.end()));
                    Ok(range.clone())
                }
                (Some(_), Some(v)) => {
                    shown.insert(label.to_string(), Value::from(v));
                    Ok(v..=v)
                }
            }
        };
        let n = pick("n", &self.sizes.n, params.n)?;
        let m = pick("m", &self.sizes.m, params.m)?;
        if params.k.is_some() && !self.sizes.k {
            return Err(Error::InvalidParameter(format!("{name} does not take --k")));
        }
        if let Some(k) = params.k {
            shown.insert("k".into(), Value::from(k));
        }
        let trials = match self.mode {
            Mode::Exact => {
                if params.trials.is_some() || params.tol.is_some() {
                    return Err(Error::InvalidParameter(format!("{name} is exact; --trials and --tol do not apply")));
                }
                0
            }
            Mode::Numeric { trials, tol } => {
                let tol = params.tol.unwrap_or(tol);
                if !(tol >= 0.0 && tol.is_finite()) {
                    return Err(Error::InvalidParameter(format!("--tol must be a nonnegative number, got {tol}")));
                }
                shown.insert("tol".into(), Value::from(tol));
                shown.insert("seed".into(), Value::from(params.seed));
                let t = params.trials.unwrap_or(trials);
                if t == 0 {
                    return Err(Error::InvalidParameter("--trials must be at least 1".into()));
                }
                t
            }
        };
        Ok((Ctx { name, n, m, k: params.k, trials, seed: params.seed }, shown))
    }

    pub fn tolerance(&self, params: &CheckParams) -> Option<f64> {
        match self.mode {
            Mode::Exact => None,
            Mode::Numeric { tol, .. } => Some(params.tol.unwrap_or(tol)),
        }
    }

    /// Runs the check. Invalid sizes are an `Err`; a failing or erroring
    /// check is an `Ok` outcome with `pass == false`.
    pub fn run(&self, params: &CheckParams, timings: bool) -> Result<CheckOutcome> {
        let (ctx, shown) = self.context(params)?;
        let start = Instant::now();
        let measured = (self.run)(&ctx);
        let millis = if timings { start.elapsed().as_millis() as u64 } else { 0 };
        let mut outcome = CheckOutcome {
            identity: self.name.to_string(),
            params: shown,
            trials: 0,
            max_residual: Residual::NonFinite,
            pass: false,
            millis,
            error: None,
        };
        match measured {
            Ok(m) => {
                outcome.trials = m.cases;
                outcome.pass = match (self.mode, m.residual) {
                    (Mode::Exact, Residual::ExactZero) => true,
                    (Mode::Numeric { .. }, Residual::Value(v)) => v <= self.tolerance(params).unwrap_or(0.0),
                    _ => false,
                };
                outcome.max_residual = m.residual;
            }
            Err(e @ Error::InvalidParameter(_)) => return Err(e),
            Err(e) => outcome.error = Some(e.to_string()),
        }
        Ok(outcome)
    }
}

/// Every registered check at its default sizes, in name order.
pub fn report(seed: u64, timings: bool) -> Vec<CheckOutcome> {
    let params = CheckParams { seed, ..CheckParams::default() };
    IDENTITIES
        .iter()
        .map(|id| {
            id.run(&params, timings).unwrap_or_else(|e| CheckOutcome {
                identity: id.name.to_string(),
                params: Map::new(),
                trials: 0,
                max_residual: Residual::NonFinite,
                pass: false,
                millis: 0,
                error: Some(e.to_string()),
            })
        })
        .collect()
}
