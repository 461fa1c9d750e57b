//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every numeric check runs at its registered tolerance.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use wbinom_core::binomial::vwbinom;
use wbinom_core::coeffs::SymPoly;
use wbinom_core::verify::{find, report, CheckOutcome, CheckParams, Residual};
use wbinom_core::weights::{Family, WeightSpec};

const SEED: u64 = 42;

struct Criterion {
    label: &'static str,
    identities: &'static [&'static str],
    /// Wall-clock budget for running the listed identities once.
    budget: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { label: "binomial theorem, generic weights, n <= 8", identities: &["binomial-theorem"], budget: Some(Duration::from_secs(10)) },
    Criterion { label: "double binomial theorem, n <= 7", identities: &["double-binomial-theorem"], budget: None },
    Criterion { label: "recursion equals path sums, n <= 8", identities: &["path-oracle", "double-path-oracle"], budget: None },
    Criterion {
        label: "commutation of y^k x^l and fast vs naive normal form",
        identities: &["commutation-lemma", "normalizer", "reduction-uniqueness"],
        budget: None,
    },
    Criterion {
        label: "three convolutions and path decompositions",
        identities: &[
            "convolution-diagonal",
            "convolution-vertical",
            "convolution-horizontal",
            "path-decomposition-diagonal",
            "path-decomposition-vertical",
            "path-decomposition-horizontal",
        ],
        budget: None,
    },
    Criterion {
        label: "elliptic closed form, borders, p-shift",
        identities: &["elliptic-closed-form", "elliptic-borders", "elliptic-p-shift"],
        budget: Some(Duration::from_secs(30)),
    },
    Criterion { label: "10V9 summation and its p = 0 branch", identities: &["v109", "jackson-8phi7"], budget: None },
    Criterion {
        label: "elliptic convolutions, n, m <= 5",
        identities: &["v109-convolution-diagonal", "v109-convolution-vertical", "v109-convolution-horizontal"],
        budget: None,
    },
    Criterion {
        label: "theta kernel",
        identities: &["theta-inversion", "theta-p-shift", "theta-addition", "qp-factorial-p-shift", "theta-zero-nome"],
        budget: None,
    },
    Criterion {
        label: "symmetric-function identities and labelings",
        identities: &[
            "sym-binomial-h",
            "sym-binomial-e",
            "h1",
            "h2",
            "schur-h",
            "schur-e",
            "e1",
            "e2",
            "h-labeling",
            "e-labeling",
        ],
        budget: None,
    },
    Criterion {
        label: "basic-hypergeometric closed forms and limits",
        identities: &[
            "basic-balanced-vwp",
            "basic-balanced",
            "basic-vwp",
            "balanced-b-limit",
            "vwp-a-limit",
            "elliptic-limit-chain",
        ],
        budget: None,
    },
    Criterion { label: "Stirling specializations, n <= 8", identities: &["stirling-second", "stirling-first"], budget: None },
];

fn describe(o: &CheckOutcome) -> String {
    let residual = match o.max_residual {
        Residual::ExactZero => "exact-zero".to_string(),
        Residual::Value(v) => format!("{v:.2e}"),
        Residual::NonFinite => "non-finite".to_string(),
    };
    let mut s = format!("{}={}{}", o.identity, residual, if o.pass { "" } else { " (FAIL)" });
    if let Some(e) = &o.error {
        s.push_str(&format!(" [{e}]"));
    }
    s
}

fn line(ok: bool, index: usize, label: &str, detail: &str) {
    println!("{} C{index:<2} {label}: {detail}", if ok { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let first = report(SEED, false);
    let mut all_ok = true;

    for (i, c) in CRITERIA.iter().enumerate() {
        let mut ok = true;
        let mut details = Vec::new();
        for name in c.identities {
            match first.iter().find(|o| o.identity == *name) {
                Some(o) => {
                    ok &= o.pass;
                    details.push(describe(o));
                }
                None => {
                    ok = false;
                    details.push(format!("{name} missing from report"));
                }
            }
        }
        if let Some(budget) = c.budget {
            let start = Instant::now();
            for name in c.identities {
                let params = CheckParams { seed: SEED, ..CheckParams::default() };
                ok &= find(name).and_then(|id| id.run(&params, false).ok()).is_some_and(|o| o.pass);
            }
            let took = start.elapsed();
            ok &= took <= budget;
            details.push(format!("{:.1}s of {}s", took.as_secs_f64(), budget.as_secs()));
        }
        if i == 11 {
            let spec = WeightSpec::new(Family::StirlingSecond).expect("stirling spec");
            let seven = vwbinom::<SymPoly>(&spec, 4, 2).map(|v| v == SymPoly::integer(7)).unwrap_or(false);
            ok &= seven;
            details.push(format!("S(4,2)=7 {}", if seven { "ok" } else { "wrong" }));
        }
        line(ok, i + 1, c.label, &details.join(", "));
        all_ok &= ok;
    }

    let a = serde_json::to_string(&first).expect("serialize report");
    let b = serde_json::to_string(&report(SEED, false)).expect("serialize report");
    let same = a == b;
    line(same, 13, "report determinism", &format!("{} bytes, {}", a.len(), if same { "identical" } else { "differ" }));
    all_ok &= same;

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
