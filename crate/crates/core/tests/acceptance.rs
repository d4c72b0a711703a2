//! End-to-end acceptance gate. Runs every criterion in sequence, prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pairedk_core::kernels::{member_s, oracle_angle, paired_residual};
use pairedk_core::operators::{Node, OperatorExpression};
use pairedk_core::properties::ClassConstraint;
use pairedk_core::{
    kernel_oracle, run_property, sample_symbol, toeplitz_kernel, transposed_kernel, winding_index, Config,
    KernelStatus, LaurentPoly, PropertyReport, RationalSymbol, SamplerProfile, SymbolPair,
};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Payloads of every property run, keyed by `(id, trials, seed, oracle N)`, for the determinism check.
type Payloads = BTreeMap<(String, usize, u64, usize), String>;

fn laurent(terms: &[(i64, f64)]) -> RationalSymbol {
    RationalSymbol::from_laurent(LaurentPoly::from_real(terms))
}

fn expr(node: Node) -> OperatorExpression {
    OperatorExpression::new(node).expect("well-typed expression")
}

fn run(id: &str, trials: usize, seed: u64, config: &Config, payloads: &mut Payloads) -> PropertyReport {
    let report = run_property(id, trials, seed, config).expect("registered property");
    payloads.insert((id.to_string(), trials, seed, config.oracle_n), report.payload().to_string());
    report
}

fn summary(r: &PropertyReport) -> String {
    let mut s = format!("{} {}/{}", r.property, r.passes, r.trials);
    if let Some(f) = r.failures.first() {
        s.push_str(&format!(" (first failure: trial {} seed {}: {})", f.trial, f.seed, f.detail));
    }
    s
}

fn metric(r: &PropertyReport, name: &str) -> f64 {
    r.metrics.get(name).copied().unwrap_or(0.0)
}

fn within(elapsed: Duration, budget: f64) -> bool {
    elapsed.as_secs_f64() < budget
}

fn circle_example() -> Outcome {
    let start = Instant::now();
    let a = laurent(&[(0, 1.0), (-1, 1.0)]);
    let b = laurent(&[(0, 1.0), (1, 1.0)]);
    let p = SymbolPair::new(a.clone(), b.clone()).unwrap();
    let witness = laurent(&[(0, 1.0), (-1, -1.0)]);
    let residual = paired_residual(&witness, &p).unwrap();
    let member = member_s(&witness, &p).unwrap();
    let ks = transposed_kernel(&p).unwrap();
    let certificate = ks.certificate.clone().unwrap_or_default();
    let empty = ks.status == KernelStatus::Empty && ks.dim() == Some(0) && certificate.contains("not in L2");
    let sigma = kernel_oracle(&expr(Node::transposed(a.clone(), b.clone())), 64, 1e-10).unwrap();
    let s = kernel_oracle(&expr(Node::paired(a, b)), 64, 1e-10).unwrap();
    let elapsed = start.elapsed();
    Outcome::new(
        member && residual == 0.0 && empty && sigma.dimension == 0 && s.dimension >= 1 && within(elapsed, 1.0),
        format!(
            "member_S(1 - 1/z) = {member} residual {residual:e}; ker Sigma empty: {empty} [{certificate}]; oracle dims Sigma {} S {}; {elapsed:.2?}",
            sigma.dimension, s.dimension
        ),
    )
}

fn coburn(config: &Config, payloads: &mut Payloads) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, seed) in [("P_COBURN_S", 42), ("P_COBURN_SIG", 43)] {
        let start = Instant::now();
        let r = run(id, 500, seed, config, payloads);
        let elapsed = start.elapsed();
        pass &= r.passes == 500 && within(elapsed, 60.0);
        parts.push(format!("{} in {elapsed:.2?}", summary(&r)));
    }
    Outcome::new(pass, parts.join("; "))
}

fn index_formula() -> Outcome {
    let start = Instant::now();
    let profile = SamplerProfile::with_class(ClassConstraint::Invertible);
    let (mut mismatches, mut worst_gap, mut worst_angle) = (Vec::new(), f64::INFINITY, 0.0f64);
    let mut nontrivial = 0;
    for seed in 0..500u64 {
        let g = sample_symbol(&profile, seed);
        let expected = (-winding_index(&g).unwrap()).max(0) as usize;
        let tk = toeplitz_kernel(&g).unwrap();
        let oracle = kernel_oracle(&expr(Node::Toeplitz(g)), 64, 1e-10).unwrap();
        let angle = oracle_angle(&oracle, &tk.basis).unwrap();
        worst_gap = worst_gap.min(oracle.gap);
        worst_angle = worst_angle.max(angle);
        nontrivial += usize::from(expected > 0);
        if tk.dim() != Some(expected) || oracle.dimension != expected || oracle.gap < 1e3 || angle > 1e-7 {
            mismatches.push(format!("seed {seed}: exact {:?} oracle {} expected {expected} gap {:.1e} angle {angle:.1e}", tk.dim(), oracle.dimension, oracle.gap));
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        mismatches.is_empty() && within(elapsed, 120.0),
        format!(
            "{} of 500 symbols disagree ({nontrivial} with nontrivial kernels); smallest gap {worst_gap:.2e}, largest angle {worst_angle:.2e}; {elapsed:.2?}{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

fn identities(config: &Config, payloads: &mut Payloads) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ["P_PRODRES", "P_COMMEXP", "P_EQUIV", "P_RH"] {
        let r = run(id, 100, 1, config, payloads);
        let worst = r.metrics.iter().filter(|(k, _)| k.starts_with("residual")).map(|(_, v)| *v).fold(0.0, f64::max);
        pass &= r.all_pass() && worst <= 1e-10;
        parts.push(format!("{} max residual {worst:.2e}", summary(&r)));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 60.0);
    Outcome::new(pass, format!("{}; {elapsed:.2?}", parts.join("; ")))
}

fn rank_one(config: &Config, payloads: &mut Payloads) -> Outcome {
    let start = Instant::now();
    let r = run("P_RANK1", 100, 7, config, payloads);
    let elapsed = start.elapsed();
    let gap = 1.0 / metric(&r, "inverse_gap");
    Outcome::new(r.all_pass() && gap >= 1e3 && within(elapsed, 60.0), format!("{} smallest gap {gap:.2e}; {elapsed:.2?}", summary(&r)))
}

fn adjoint(config: &Config, payloads: &mut Payloads) -> Outcome {
    let start = Instant::now();
    let r = run("P_ADJ", 100, 3, config, payloads);
    let elapsed = start.elapsed();
    let positive = metric(&r, "positive_residual");
    let negative = 1.0 / metric(&r, "negative_residual_inverse");
    Outcome::new(
        r.all_pass() && positive <= 1e-12 && negative >= 1e-3 && within(elapsed, 30.0),
        format!("{} largest positive residual {positive:.2e}, smallest negative residual {negative:.2e}; {elapsed:.2?}", summary(&r)),
    )
}

fn norms(payloads: &mut Payloads) -> Outcome {
    let config = Config { oracle_n: 128, ..Config::default() };
    let start = Instant::now();
    let r = run("P_NORM", 100, 5, &config, payloads);
    let elapsed = start.elapsed();
    Outcome::new(
        r.all_pass() && within(elapsed, 120.0),
        format!("{} at N = 128, largest excess over the upper bound {:.2e}; {elapsed:.2?}", summary(&r), metric(&r, "upper_excess")),
    )
}

fn uniqueness(config: &Config, payloads: &mut Payloads) -> Outcome {
    let start = Instant::now();
    let r = run("P_UNIQUE", 100, 11, config, payloads);
    let elapsed = start.elapsed();
    Outcome::new(
        r.all_pass() && within(elapsed, 30.0),
        format!("{} construction residual {:.2e}; {elapsed:.2?}", summary(&r), metric(&r, "construction_residual")),
    )
}

fn invariance(config: &Config, payloads: &mut Payloads) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ["P_INV", "P_MODELINV", "P_DEFECT1", "P_STAB", "P_FPLUS0"] {
        let r = run(id, 100, 13, config, payloads);
        pass &= r.all_pass();
        parts.push(summary(&r));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 120.0);
    Outcome::new(pass, format!("{}; {elapsed:.2?}", parts.join("; ")))
}

fn determinism(payloads: &Payloads) -> Outcome {
    let mut differing = Vec::new();
    for ((id, trials, seed, n), first) in payloads {
        let config = Config { oracle_n: *n, ..Config::default() };
        let again = run_property(id, *trials, *seed, &config).expect("registered property");
        if again.payload().to_string() != *first {
            differing.push(id.clone());
        }
    }
    Outcome::new(differing.is_empty(), format!("{} property runs repeated, differing: {differing:?}", payloads.len()))
}

fn main() -> ExitCode {
    let config = Config::default();
    let mut payloads = Payloads::new();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut report = |name: &'static str, outcome: Outcome| {
        println!("criterion {name}: {} {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
        results.push((name, outcome));
    };
    report("1 circle-zero example", circle_example());
    report("2 Coburn dichotomies", coburn(&config, &mut payloads));
    report("3 kernel dimension vs index", index_formula());
    report("4 identity residuals", identities(&config, &mut payloads));
    report("5 rank-one commutators", rank_one(&config, &mut payloads));
    report("6 adjoint criterion", adjoint(&config, &mut payloads));
    report("7 norm bounds", norms(&mut payloads));
    report("8 uniqueness and construction", uniqueness(&config, &mut payloads));
    report("9 invariance suite", invariance(&config, &mut payloads));
    report("10 determinism", determinism(&payloads));
    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
