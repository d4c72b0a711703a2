use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use pairedk_core::kernels::{kernel_oracle, paired_kernel, toeplitz_kernel, transposed_kernel, KernelBasis, KernelStatus, SymbolPair};
use pairedk_core::operators::norm::{numerical_rank, operator_norm, sup_norm};
use pairedk_core::operators::truncate::truncate;
use pairedk_core::operators::{apply_exact, Node, OperatorExpression};
use pairedk_core::properties::{lookup, run_property, Config, PropertyReport, SuiteReport};
use pairedk_core::symbol::{parse_symbol, symbol_to_value};
use pairedk_core::{inner_outer, wiener_hopf, RationalSymbol, Side};
use serde_json::{json, Value};

use crate::{Cli, Command, NumericArgs, OperatorArgs, OperatorKind, SideArg};

pub enum CliError {
    /// Bad flags, unreadable inputs or malformed config: exit status 2.
    Usage(String),
    /// The computation itself failed: exit status 1.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<pairedk_core::Error> for CliError {
    fn from(e: pairedk_core::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

type Outcome = Result<u8, CliError>;

/// A symbol given inline as JSON or as a path to a JSON file.
fn symbol_arg(flag: &str, text: &str) -> Result<RationalSymbol, CliError> {
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| CliError::Usage(format!("--{flag}: cannot read {text}: {e}")))?
    };
    parse_symbol(&body).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn required(flag: &str, value: &Option<String>) -> Result<RationalSymbol, CliError> {
    match value {
        Some(text) => symbol_arg(flag, text),
        None => Err(CliError::Usage(format!("--{flag} is required here"))),
    }
}

fn config(cli: &Cli, numeric: &NumericArgs) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| CliError::Usage(format!("--config: {e}")))?,
        None => Config::default(),
    };
    if let Some(n) = numeric.n {
        if n < 8 {
            return Err(CliError::Usage("--N must be at least 8".into()));
        }
        config.oracle_n = n;
    }
    if let Some(tol) = numeric.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage("--tol must be a positive number".into()));
        }
        config.rank_tol = tol;
    }
    Ok(config)
}

fn pair(op: &OperatorArgs) -> Result<SymbolPair, CliError> {
    Ok(SymbolPair::new(required("a", &op.a)?, required("b", &op.b)?)?)
}

/// The operator described by `--type` and its symbols. Toeplitz and Hankel
/// operators take their symbol from `symbol_flag`.
fn operator(op: &OperatorArgs, symbol_flag: &str) -> Result<Node, CliError> {
    let single = || required(symbol_flag, if symbol_flag == "g" { &op.g } else { &op.a });
    Ok(match op.kind {
        OperatorKind::Paired => {
            let p = pair(op)?;
            Node::paired(p.a, p.b)
        }
        OperatorKind::Transposed => {
            let p = pair(op)?;
            Node::transposed(p.a, p.b)
        }
        OperatorKind::Toeplitz => Node::Toeplitz(single()?),
        OperatorKind::Hankel => Node::Hankel(single()?),
    })
}

fn kind_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Paired => "paired",
        OperatorKind::Transposed => "transposed",
        OperatorKind::Toeplitz => "toeplitz",
        OperatorKind::Hankel => "hankel",
    }
}

fn emit(cli: &Cli, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::Usage(format!("--out: cannot write {}: {e}", path.display()))),
        None => {
            // A closed pipe (`| head`) is not an error for a JSON dump.
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Failed(format!("cannot write output: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn human(cli: &Cli, lines: impl IntoIterator<Item = String>) {
    if cli.human {
        for line in lines {
            eprintln!("{line}");
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Kernel { op, numeric } => kernel(cli, op, numeric),
        Command::Apply { op, f } => apply(cli, op, f),
        Command::Factor { wh: _, io, side, g } => factor(cli, *io, *side, g),
        Command::Norm { op, numeric } => norm(cli, op, numeric),
        Command::Commutator { op, numeric, f } => commutator(cli, op, numeric, f.as_deref()),
        Command::Verify { all, property, trials, seed, numeric } => verify(cli, *all, property, *trials, *seed, numeric),
        Command::Report { path } => report(cli, path),
    }
}

fn kernel(cli: &Cli, op: &OperatorArgs, numeric: &NumericArgs) -> Outcome {
    let config = config(cli, numeric)?;
    let node = operator(op, "g")?;
    let basis = match op.kind {
        OperatorKind::Paired => paired_kernel(&pair(op)?)?,
        OperatorKind::Transposed => transposed_kernel(&pair(op)?)?,
        OperatorKind::Toeplitz => toeplitz_kernel(&required("g", &op.g)?)?,
        OperatorKind::Hankel => KernelBasis::needs_oracle("Hankel kernels are estimated from truncations only"),
    };
    let mut out = serde_json::to_value(&basis).expect("kernel bases serialize");
    out["operator"] = json!(kind_name(op.kind));
    if basis.status == KernelStatus::NeedsOracle || numeric.n.is_some() {
        out["oracle"] = match kernel_oracle(&OperatorExpression::new(node)?, config.oracle_n, config.rank_tol) {
            Ok(r) => json!({ "dimension": r.dimension, "gap": r.gap, "n_requested": r.n_requested, "n_used": r.n_used, "stable": r.stable }),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    human(cli, [format!("{} kernel: status {:?}, dimension {:?}", kind_name(op.kind), basis.status, basis.dimension)]);
    emit(cli, &out)?;
    Ok(0)
}

fn apply(cli: &Cli, op: &OperatorArgs, f: &str) -> Outcome {
    let x = OperatorExpression::new(operator(op, "g")?)?;
    let f = symbol_arg("f", f)?;
    let result = apply_exact(&x, &f)?;
    human(cli, [format!("{} operator applied: {result:?}", kind_name(op.kind))]);
    emit(cli, &json!({ "operator": kind_name(op.kind), "result": symbol_to_value(&result) }))?;
    Ok(0)
}

fn factor(cli: &Cli, io: bool, side: SideArg, g: &str) -> Outcome {
    let g = symbol_arg("g", g)?;
    let out = if io {
        let side = match side {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        };
        let pair = inner_outer(&g, side)?;
        human(cli, [format!("inner {:?}", pair.inner), format!("outer {:?}", pair.outer)]);
        serde_json::to_value(&pair).expect("factorizations serialize")
    } else {
        let wh = wiener_hopf(&g)?;
        human(cli, [format!("kappa {}", wh.kappa), format!("g_minus {:?}", wh.g_minus), format!("g_plus {:?}", wh.g_plus)]);
        serde_json::to_value(&wh).expect("factorizations serialize")
    };
    emit(cli, &out)?;
    Ok(0)
}

fn norm(cli: &Cli, op: &OperatorArgs, numeric: &NumericArgs) -> Outcome {
    let config = config(cli, numeric)?;
    let x = OperatorExpression::new(operator(op, "g")?)?;
    let est = operator_norm(&x, config.oracle_n)?;
    let mut out = json!({ "operator": kind_name(op.kind), "lower_bound": est.value, "n": est.n });
    if matches!(op.kind, OperatorKind::Paired | OperatorKind::Transposed) {
        let p = pair(op)?;
        let (ma, mb) = (sup_norm(&p.a), sup_norm(&p.b));
        let m = ma.max(mb);
        out["bounds"] = json!({ "lower": m, "upper": (ma + mb).min(std::f64::consts::SQRT_2 * m) });
    }
    human(cli, [format!("‖X‖ ≥ {:.12} (N = {})", est.value, est.n)]);
    emit(cli, &out)?;
    Ok(0)
}

fn commutator(cli: &Cli, op: &OperatorArgs, numeric: &NumericArgs, f: Option<&str>) -> Outcome {
    let config = config(cli, numeric)?;
    let x = operator(op, "a")?;
    let multiplier = required("g", &op.g)?;
    let c = OperatorExpression::new(Node::commutator(x, Node::Mult(multiplier)))?;
    let rank = numerical_rank(&truncate(&c, config.oracle_n)?, config.rank_tol);
    let mut out = json!({
        "operator": kind_name(op.kind),
        "rank": rank.rank,
        "gap": rank.gap,
        "certified": rank.certified,
        "n": config.oracle_n,
    });
    if let Some(f) = f {
        out["image"] = symbol_to_value(&apply_exact(&c, &symbol_arg("f", f)?)?);
    }
    human(cli, [format!("commutator rank {} (gap {:.3e}, certified {})", rank.rank, rank.gap, rank.certified)]);
    emit(cli, &out)?;
    Ok(0)
}

fn summary_lines(suite: &SuiteReport) -> Vec<String> {
    let mut lines: Vec<String> = suite
        .properties
        .iter()
        .map(|r| format!("{:16} {:>5}/{:<5} {}", r.property, r.passes, r.trials, if r.all_pass() { "pass" } else { "FAIL" }))
        .collect();
    lines.push(format!("{} ({:.1} s)", if suite.all_pass { "all properties pass" } else { "some properties fail" }, suite.wall_time));
    lines
}

fn verify(cli: &Cli, all: bool, property: &[String], trials: Option<usize>, seed: u64, numeric: &NumericArgs) -> Outcome {
    let mut config = config(cli, numeric)?;
    if let Some(t) = trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be positive".into()));
        }
        config.trials = t;
    }
    let ids: Vec<String> = if all {
        pairedk_core::properties::all_property_ids()
    } else if property.is_empty() {
        return Err(CliError::Usage("verify needs --all or at least one --property".into()));
    } else {
        property.to_vec()
    };
    for id in &ids {
        lookup(id).map_err(|e| CliError::Usage(format!("--property: {e}")))?;
    }
    let start = Instant::now();
    let mut properties = Vec::with_capacity(ids.len());
    for id in &ids {
        if !cli.quiet {
            eprintln!("running {id} ({} trials)", config.trials);
        }
        let r = run_property(id, config.trials, seed, &config)?;
        if !cli.quiet {
            eprintln!("  {}/{} in {:.2} s", r.passes, r.trials, r.wall_time);
        }
        properties.push(r);
    }
    let suite = SuiteReport { all_pass: properties.iter().all(PropertyReport::all_pass), properties, wall_time: start.elapsed().as_secs_f64() };
    human(cli, summary_lines(&suite));
    emit(cli, &serde_json::to_value(&suite).expect("reports serialize"))?;
    Ok(if suite.all_pass { 0 } else { 1 })
}

fn report(cli: &Cli, path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("report: cannot read {}: {e}", path.display())))?;
    let suite = match serde_json::from_str::<SuiteReport>(&text) {
        Ok(s) => s,
        Err(_) => {
            let single: PropertyReport =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("report: {} is not a report: {e}", path.display())))?;
            SuiteReport { all_pass: single.all_pass(), wall_time: single.wall_time, properties: vec![single] }
        }
    };
    human(cli, summary_lines(&suite));
    emit(cli, &serde_json::to_value(&suite).expect("reports serialize"))?;
    Ok(if suite.all_pass { 0 } else { 1 })
}
