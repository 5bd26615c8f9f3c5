use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use concbound_core::bounds::{self, BoundKind, BoundReport, InnerWeight, SubspaceWeight};
use concbound_core::concurrence::RoofOptions;
use concbound_core::distill::{self, SearchOptions};
use concbound_core::states::{Builtin, BUILTIN_NAMES};
use concbound_core::BipartiteState;

mod io;
mod report;

use report::{Bound, Distill, Flag, Input, Report, Results, RoofSettings, SCHEMA};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] concbound_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

const THREADS_ENV: &str = "CONCBOUND_THREADS";

/// Lower bounds of concurrence from subspace projections, and distillability checks.
#[derive(Debug, Parser)]
#[command(name = "concbound", version, after_help = "Set CONCBOUND_THREADS to fix the worker thread count.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a built-in state to a state file (or standard output).
    Gen(GenArgs),
    /// Evaluate certified lower bounds of C².
    Bound(BoundArgs),
    /// Estimate the convex-roof quantity τ_{s⊗t} numerically (not certified).
    Roof(RoofArgs),
    /// Check sufficient conditions for distillability.
    Distill(DistillArgs),
}

#[derive(Debug, Args)]
struct Source {
    /// State file to read.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "builtin", required_unless_present = "builtin")]
    input: Option<PathBuf>,
    /// Built-in state: rho0, sigma_alpha, rho1, rho2, maxent, isotropic.
    #[arg(long)]
    builtin: Option<String>,
    /// Built-in parameter as key=value (p, alpha, w, d); repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Accept a Hermitian unit-trace file that is not positive semidefinite.
    #[arg(long)]
    allow_indefinite: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    builtin: String,
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Output path; the state goes to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Tau22,
    Kappa,
    Zeta,
    Chen,
    Combined,
    All,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "all")]
    kind: Kind,
    /// A-side block size; all admissible sizes when omitted.
    #[arg(long)]
    s: Option<usize>,
    /// B-side block size; all admissible sizes when omitted.
    #[arg(long)]
    t: Option<usize>,
    /// Subspace weights for `combined` as s,t:weight; repeatable or `;`-separated.
    #[arg(long = "weights", value_name = "S,T:W")]
    weights: Vec<String>,
    /// Inner bound weights for `combined` as kind:weight[,kind:weight...].
    #[arg(long, value_name = "KIND:W,...")]
    inner: Option<String>,
    #[command(flatten)]
    roof: RoofFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RoofFlags {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ensemble size K; defaults to min(r², 2r + 4) for rank r.
    #[arg(long)]
    ensemble_size: Option<usize>,
    #[arg(long, default_value_t = RoofOptions::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = RoofOptions::default().max_sweeps)]
    max_sweeps: usize,
    #[arg(long, default_value_t = RoofOptions::default().tol)]
    tol: f64,
}

impl RoofFlags {
    fn options(&self) -> RoofOptions {
        RoofOptions {
            ensemble_size: self.ensemble_size,
            restarts: self.restarts,
            max_sweeps: self.max_sweeps,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct RoofArgs {
    #[command(flatten)]
    source: Source,
    /// Defaults to the full A side.
    #[arg(long)]
    s: Option<usize>,
    /// Defaults to the full B side.
    #[arg(long)]
    t: Option<usize>,
    #[command(flatten)]
    roof: RoofFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DistillArgs {
    #[command(flatten)]
    source: Source,
    /// Largest number of copies N searched.
    #[arg(long, default_value_t = 2)]
    copies: usize,
    /// Extra searches under seeded random local unitaries.
    #[arg(long, default_value_t = 0)]
    rotations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
    Ok((key.trim().to_owned(), value))
}

fn parse_weights(items: &[String]) -> Result<Vec<SubspaceWeight>, CliError> {
    let bad = |item: &str| CliError::Input(format!("bad weight `{item}`, expected s,t:weight"));
    let mut out = Vec::new();
    for item in items.iter().flat_map(|s| s.split(';')).map(str::trim).filter(|s| !s.is_empty()) {
        let (pair, w) = item.split_once(':').ok_or_else(|| bad(item))?;
        let (s, t) = pair.split_once(',').ok_or_else(|| bad(item))?;
        let s: usize = s.trim().parse().map_err(|_| bad(item))?;
        let t: usize = t.trim().parse().map_err(|_| bad(item))?;
        let w: f64 = w.trim().parse().map_err(|_| bad(item))?;
        out.push(((s, t), w));
    }
    Ok(out)
}

fn parse_inner(spec: &str) -> Result<Vec<InnerWeight>, CliError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = || CliError::Input(format!("bad inner weight `{item}`, expected kind:weight"));
            let (kind, w) = item.split_once(':').ok_or_else(bad)?;
            let kind = BoundKind::from_name(kind.trim()).ok_or_else(bad)?;
            let w: f64 = w.trim().parse().map_err(|_| bad())?;
            Ok((kind, w))
        })
        .collect()
}

fn load_builtin(name: &str, params: &[(String, f64)]) -> Result<(BipartiteState, String), CliError> {
    let refs: Vec<(&str, f64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let b = Builtin::from_params(name, &refs).map_err(|e| match e {
        concbound_core::Error::UnknownState(_) => {
            CliError::Input(format!("{e}; known states: {}", BUILTIN_NAMES.join(", ")))
        }
        e => e.into(),
    })?;
    let desc = b
        .params()
        .iter()
        .fold(format!("builtin {}", b.name()), |acc, (k, v)| format!("{acc} {k}={v}"));
    Ok((b.state()?, desc))
}

fn load(source: &Source) -> Result<(BipartiteState, String), CliError> {
    match (&source.input, &source.builtin) {
        (Some(path), _) => {
            if !source.params.is_empty() {
                return Err(CliError::Input("--param only applies to --builtin".into()));
            }
            Ok((io::read(path, source.allow_indefinite)?, path.display().to_string()))
        }
        (None, Some(name)) => load_builtin(name, &source.params),
        (None, None) => Err(CliError::Input("one of --in or --builtin is required".into())),
    }
}

/// `x` with 9 significant digits.
fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

fn describe(desc: &str, rho: &BipartiteState) -> Result<Input, CliError> {
    Ok(Input::new(desc.to_owned(), &rho.fingerprint()?))
}

fn print_input(input: &Input) {
    println!(
        "state: {} ({}⊗{}), trace {}, min eigenvalue {}",
        input.source,
        input.m,
        input.n,
        sig(input.trace),
        sig(input.min_eigenvalue)
    );
}

fn print_bound(b: &Bound) {
    let size = if b.kind == "chen_global" || b.kind == "tau22" {
        String::new()
    } else {
        format!(" ({},{})", b.s, b.t)
    };
    let rel = if b.certified { "≥" } else { "≈" };
    let mut line = format!(
        "{}{size}: C² {rel} {}   C {rel} {}",
        b.kind,
        sig(b.value_sq),
        sig(b.value)
    );
    if !b.certified {
        line.push_str("   [estimate, NOT a certified lower bound]");
    }
    if !b.converged {
        line.push_str("   [optimizer did not converge]");
    }
    if b.swapped {
        line.push_str("   [evaluated with subsystems exchanged]");
    }
    println!("{line}");
}

fn sizes(given: Option<usize>, full: usize) -> Vec<usize> {
    match given {
        Some(x) => vec![x],
        None => (2..=full).collect(),
    }
}

fn run_bound(args: &BoundArgs) -> Result<(Input, Results), CliError> {
    let (rho, desc) = load(&args.source)?;
    let input = describe(&desc, &rho)?;
    let (m, n) = (rho.m(), rho.n());
    let pairs: Vec<(usize, usize)> = sizes(args.s, m)
        .into_iter()
        .flat_map(|s| sizes(args.t, n).into_iter().map(move |t| (s, t)))
        .collect();
    let roof = args.roof.options();
    let mut out: Vec<BoundReport> = Vec::new();
    if matches!(args.kind, Kind::Tau22 | Kind::All) {
        out.push(bounds::tau22(&rho)?);
    }
    for &(s, t) in &pairs {
        if matches!(args.kind, Kind::Kappa | Kind::All) {
            out.push(bounds::kappa(&rho, s, t)?);
        }
        if matches!(args.kind, Kind::Zeta | Kind::All) {
            out.push(bounds::zeta(&rho, s, t)?);
        }
    }
    if matches!(args.kind, Kind::Chen | Kind::All) {
        out.push(bounds::chen_global(&rho)?);
    }
    if args.kind == Kind::Combined {
        let weights = if args.weights.is_empty() {
            bounds::default_weights(m, n)
        } else {
            parse_weights(&args.weights)?
        };
        let inner = match &args.inner {
            Some(spec) => parse_inner(spec)?,
            None => bounds::default_inner(),
        };
        out.push(bounds::combined(&rho, &weights, &inner, &roof)?);
    }
    Ok((input, Results::Bound { bounds: out.iter().map(Bound::from).collect() }))
}

fn run_roof(args: &RoofArgs) -> Result<(Input, Results), CliError> {
    let (rho, desc) = load(&args.source)?;
    let input = describe(&desc, &rho)?;
    let opts = args.roof.options();
    let (s, t) = (args.s.unwrap_or(rho.m()), args.t.unwrap_or(rho.n()));
    let report = bounds::tau_roof_estimate(&rho, s, t, &opts)?;
    Ok((
        input,
        Results::Roof {
            bound: Bound::from(&report),
            options: RoofSettings::from(&opts),
        },
    ))
}

fn run_distill(args: &DistillArgs) -> Result<(Input, Results), CliError> {
    let (rho, desc) = load(&args.source)?;
    let input = describe(&desc, &rho)?;
    let opts = SearchOptions {
        max_copies: args.copies,
        rotations: args.rotations,
        seed: args.seed,
    };
    let v = distill::verdict(&rho, &opts)?;
    Ok((input, Results::Distill(Distill::new(&v, &opts))))
}

fn run_gen(args: &GenArgs) -> Result<(Input, Results), CliError> {
    let (rho, desc) = load_builtin(&args.builtin, &args.params)?;
    let input = describe(&desc, &rho)?;
    match &args.out {
        Some(path) => io::write(path, &rho)?,
        None => println!("{}", io::to_json(&rho)),
    }
    let path = args.out.as_ref().map(|p| p.display().to_string());
    Ok((input, Results::Gen { path }))
}

fn flag(f: Flag) -> &'static str {
    match f {
        Flag::Fires => "fires",
        Flag::Silent => "silent",
    }
}

fn print_distill(d: &Distill) {
    println!("distillable: {}", d.distillable);
    match &d.witness {
        Some(w) => println!(
            "  theorem3 (NPT 2x3/3x2 block of ρ^⊗N, N ≤ {}): fires at N={}, {} block rows {:?} cols {:?}, min PT eigenvalue {}{}",
            d.max_copies,
            w.copies,
            w.orientation,
            w.rows,
            w.cols,
            sig(w.min_pt_eigenvalue),
            w.rotation.map(|r| format!(", under local rotation {r}")).unwrap_or_default()
        ),
        None => println!("  theorem3 (NPT 2x3/3x2 block of ρ^⊗N, N ≤ {}): silent", d.max_copies),
    }
    match d.tau22_ou_copies {
        Some(n) => println!("  tau22_ou (τ₂⊗₂(ρ^⊗N) > 0): fires at N={n}"),
        None => println!("  tau22_ou (τ₂⊗₂(ρ^⊗N) > 0): {}", flag(d.criteria.tau22_ou)),
    }
    println!(
        "  reduction: {} (min eigenvalue {})",
        flag(d.criteria.reduction),
        sig(d.reduction_min_eigenvalue)
    );
}

fn configure_threads() {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not set {THREADS_ENV}={n}: {e}");
            }
        }
        _ => eprintln!("warning: ignoring {THREADS_ENV}={value:?}, expected a positive integer"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    let (json, seed) = match &cli.command {
        Command::Gen(a) => (a.json, None),
        Command::Bound(a) => (a.json, Some(a.roof.seed)),
        Command::Roof(a) => (a.json, Some(a.roof.seed)),
        Command::Distill(a) => (a.json, Some(a.seed)),
    };
    let outcome = match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Bound(a) => run_bound(a),
        Command::Roof(a) => run_roof(a),
        Command::Distill(a) => run_distill(a),
    };
    let (input, results) = match outcome {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let unconverged = matches!(&results, Results::Roof { bound, .. } if !bound.converged);
    let gen_to_stdout = matches!(&results, Results::Gen { path: None });
    let report = Report {
        schema: SCHEMA.to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        command: std::env::args().collect(),
        seed,
        input,
        results,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if gen_to_stdout {
        eprintln!(
            "{}⊗{} state, trace {}, min eigenvalue {}",
            report.input.m,
            report.input.n,
            sig(report.input.trace),
            sig(report.input.min_eigenvalue)
        );
    } else if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        print_input(&report.input);
        match &report.results {
            Results::Gen { path } => println!("wrote {}", path.as_deref().unwrap_or("-")),
            Results::Bound { bounds } => bounds.iter().for_each(print_bound),
            Results::Roof { bound, .. } => print_bound(bound),
            Results::Distill(d) => print_distill(d),
        }
    }
    if unconverged {
        eprintln!("error: roof optimization hit the sweep limit; the value above is the best found");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
