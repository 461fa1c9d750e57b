use std::fmt::Display;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use wbinom_core::binomial::{basic_binom_closed, elliptic_binom_closed_spec, vwbinom, wbinom};
use wbinom_core::coeffs::{Coeff, Coefficient, SymPoly};
use wbinom_core::ncalgebra::{binomial_power, normalize, NCElement, Word};
use wbinom_core::paths::{enumerate_paths, generating_function, path_weight};
use wbinom_core::verify::{find, identities, report, CheckParams, Mode};
use wbinom_core::weights::{Domain, Family, WeightDomain, WeightSpec};
use wbinom_core::Error;

#[derive(Parser)]
#[command(name = "wbinom", version, about = "Weight-dependent noncommutative binomial coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand (x+y)^n in normal form.
    Expand {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// One coefficient [n,k] from the recursion or a closed form.
    Coeff {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        /// Use the closed product formula (elliptic and basic families only).
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Lattice paths from the origin to (K,M) with their weights.
    Paths {
        /// Endpoint as K,M.
        #[arg(long, value_parser = parse_pair_u32)]
        to: (u32, u32),
        /// Print every path, not just the generating function.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Normal form of a word such as "y x w(1,2) x".
    Normalize {
        word: String,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one named identity check.
    Verify {
        #[arg(long, required_unless_present = "list")]
        identity: Option<String>,
        /// List the available identities.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Report wall-clock milliseconds (otherwise 0, for reproducible output).
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run every identity check at default sizes.
    Report {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct WeightArgs {
    /// Family name or a full weight-spec JSON object.
    #[arg(long, default_value = "generic")]
    weights: String,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    b: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    p: Option<Complex64>,
    /// Index shift as DS,DT.
    #[arg(long, value_parser = parse_pair_u32)]
    shift: Option<(u32, u32)>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected RE or RE,IM".into()),
    }
}

fn parse_pair_u32(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not a nonnegative integer: {t}"));
    Ok((num(a)?, num(b)?))
}

impl WeightArgs {
    fn spec(&self) -> Result<WeightSpec, Error> {
        let mut value = if self.weights.trim_start().starts_with('{') {
            serde_json::from_str::<Value>(&self.weights).map_err(|e| Error::Parse(format!("weight spec: {e}")))?
        } else {
            json!({ "family": self.weights.trim() })
        };
        let pair = |z: Complex64| json!([z.re, z.im]);
        for (name, v) in [("a", self.a), ("b", self.b), ("q", self.q), ("p", self.p)] {
            if let Some(z) = v {
                value["params"][name] = pair(z);
            }
        }
        if let Some((ds, dt)) = self.shift {
            value["shift"] = json!([ds, dt]);
        }
        WeightSpec::from_json(&value)
    }
}

enum Failure {
    Invalid(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn monomial_text(k: u32, l: u32) -> String {
    let power = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    };
    let parts: Vec<String> = [power("x", k), power("y", l)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn element_text<C: Coeff + Into<Coefficient>>(e: &NCElement<C>) -> String {
    if e.is_zero() {
        return "0\n".into();
    }
    e.terms()
        .map(|(k, l, c)| format!("({}) {}\n", c.clone().into(), monomial_text(k, l)))
        .collect()
}

fn emit_element<C>(e: &NCElement<C>, format: Format) -> Result<(), Failure>
where
    C: Coeff + Into<Coefficient> + serde::Serialize,
{
    match format {
        Format::Text => print!("{}", element_text(e)),
        Format::Json => println!("{}", serde_json::to_string(e).map_err(|e| Failure::Invalid(e.to_string()))?),
    }
    Ok(())
}

fn expand(n: u32, spec: &WeightSpec, format: Format) -> Result<(), Failure> {
    match spec.domain() {
        Domain::Exact => emit_element(&binomial_power::<SymPoly>(n, spec)?, format),
        Domain::Numeric => emit_element(&binomial_power::<Complex64>(n, spec)?, format),
    }
}

fn recursion_value<C: WeightDomain>(spec: &WeightSpec, n: i64, k: i64) -> Result<C, Error> {
    if spec.is_double() {
        vwbinom(spec, n, k)
    } else {
        wbinom(spec, n, k)
    }
}

fn coeff(n: i64, k: i64, closed: bool, spec: &WeightSpec, format: Format) -> Result<(), Failure> {
    let value: Coefficient = if closed {
        match spec.family {
            Family::Elliptic { .. } => elliptic_binom_closed_spec(spec, n, k)?.into(),
            Family::BalancedVwp { .. } | Family::Balanced { .. } | Family::Vwp { .. } => {
                basic_binom_closed(spec, n, k)?.into()
            }
            _ => {
                return Err(Failure::Invalid(format!("no closed form for the {} family", spec.family_name())));
            }
        }
    } else {
        match spec.domain() {
            Domain::Exact => recursion_value::<SymPoly>(spec, n, k)?.into(),
            Domain::Numeric => recursion_value::<Complex64>(spec, n, k)?.into(),
        }
    };
    match format {
        Format::Text => println!("{value}"),
        Format::Json => println!("{}", json!({"n": n, "k": k, "value": value})),
    }
    Ok(())
}

fn paths_generic<C>(to: (u32, u32), list: bool, spec: &WeightSpec, format: Format) -> Result<(), Failure>
where
    C: WeightDomain + Into<Coefficient>,
{
    let mut rows = Vec::new();
    if list {
        for path in enumerate_paths((0, 0), to)? {
            let w: C = path_weight(&path, spec)?;
            rows.push((path.to_string(), w.into()));
        }
    }
    let gf: Coefficient = generating_function::<C>((0, 0), to, spec)?.into();
    match format {
        Format::Text => {
            for (p, w) in &rows {
                println!("{} {w}", if p.is_empty() { "-" } else { p });
            }
            println!("total {gf}");
        }
        Format::Json => {
            let mut out = json!({"to": [to.0, to.1], "generating_function": gf});
            if list {
                out["paths"] = rows.into_iter().map(|(p, w)| json!({"path": p, "weight": w})).collect();
            }
            println!("{out}");
        }
    }
    Ok(())
}

fn paths(to: (u32, u32), list: bool, spec: &WeightSpec, format: Format) -> Result<(), Failure> {
    match spec.domain() {
        Domain::Exact => paths_generic::<SymPoly>(to, list, spec, format),
        Domain::Numeric => paths_generic::<Complex64>(to, list, spec, format),
    }
}

fn normalize_word(word: &str, spec: &WeightSpec, format: Format) -> Result<(), Failure> {
    let word: Word = word.parse()?;
    match spec.domain() {
        Domain::Exact => emit_element(&normalize::<SymPoly>(&word, spec)?, format),
        Domain::Numeric => emit_element(&normalize::<Complex64>(&word, spec)?, format),
    }
}

fn list_identities() {
    for id in identities() {
        let mode = match id.mode {
            Mode::Exact => "exact".to_string(),
            Mode::Numeric { trials, tol } => format!("{trials} draws, tol {tol:e}"),
        };
        println!("{:<30} {:<22} {}", id.name, mode, id.about);
    }
}

fn outcome_text(o: &wbinom_core::verify::CheckOutcome) -> String {
    let residual = serde_json::to_string(&o.max_residual).unwrap_or_default();
    let mut line = format!("{} {} trials={} max_residual={}", if o.pass { "PASS" } else { "FAIL" }, o.identity, o.trials, residual.trim_matches('"'));
    if let Some(e) = &o.error {
        line.push_str(&format!(" error={e}"));
    }
    line
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::Invalid(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expand { n, weights, format } => expand(n, &weights.spec()?, format),
        Command::Coeff { n, k, closed_form, weights, format } => coeff(n, k, closed_form, &weights.spec()?, format),
        Command::Paths { to, list, weights, format } => paths(to, list, &weights.spec()?, format),
        Command::Normalize { word, weights, format } => normalize_word(&word, &weights.spec()?, format),
        Command::Verify { identity, list, n, m, k, trials, tol, seed, timings, format } => {
            if list {
                list_identities();
                return Ok(());
            }
            let name = identity.unwrap_or_default();
            let id = find(&name).ok_or_else(|| Failure::Invalid(format!("unknown identity {name}; see --list")))?;
            let outcome = id.run(&CheckParams { n, m, k, trials, tol, seed }, timings)?;
            match format {
                Format::Text => println!("{}", outcome_text(&outcome)),
                Format::Json => println!("{}", to_json(&outcome)?),
            }
            if outcome.pass {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Report { seed, timings, format } => {
            let outcomes = report(seed, timings);
            match format {
                Format::Text => outcomes.iter().for_each(|o| println!("{}", outcome_text(o))),
                Format::Json => println!("{}", to_json(&outcomes)?),
            }
            if outcomes.iter().all(|o| o.pass) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn fail(msg: impl Display) -> ExitCode {
    eprintln!("wbinom: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => fail(msg),
    }
}
