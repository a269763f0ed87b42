use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bellgap::games::{KvParams, Recipe};
use bellgap::io::{load_game, save_game, GameFile, ReportFile};
use bellgap::quantum::constructed_strategy;
use bellgap::solvers::{self, lv_ratio, QuantumOptions, SolverOptions, ValueClass, DEFAULT_BUDGET};
use bellgap::verify::{run_suite, Suite, VerifyConfig};
use bellgap::{BellFunctional, Error};

/// Writes a line to stdout. A closed pipe ends output quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// Values of Bell functionals and nonlocal games over local, bilocal,
/// non-signalling and quantum behaviour classes.
///
/// Exit codes: 0 success, 1 failed verification, 2 usage or input error,
/// 3 work budget exceeded.
#[derive(Parser)]
#[command(name = "bellgap", version)]
struct Cli {
    /// Cap on elementary scans per exact computation.
    #[arg(long, global = true, env = "BELLGAP_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads for the solvers (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a game or functional and write it as JSON.
    MakeGame(MakeGame),
    /// Compute the value of a functional over one behaviour class.
    Value(ValueCmd),
    /// Run a verification suite.
    Verify(VerifyCmd),
    /// Compute every applicable value of a functional with ratios.
    Report(ReportCmd),
}

#[derive(Args)]
struct MakeGame {
    /// chsh, chsh-cor, trivial, kv, hadamard-cor, tensor, hat or tilde.
    name: String,
    /// Khot-Vishnoi: log2 of the number of answers.
    #[arg(long)]
    l: Option<u32>,
    /// Khot-Vishnoi noise (default 1/2 - 1/l).
    #[arg(long)]
    eta: Option<f64>,
    /// Hadamard functional: inputs per party (a power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Trivial game: number of parties.
    #[arg(long, default_value_t = 3)]
    parties: usize,
    /// Input game files for tensor (two), hat and tilde (one).
    #[arg(long = "in")]
    inputs: Vec<PathBuf>,
    /// Output path (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuantumArgs {
    /// See-saw random starts.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// See-saw local dimensions, comma separated (default 2 per party).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
}

#[derive(Args)]
struct ValueCmd {
    file: PathBuf,
    /// local, bilocal-general, bilocal-ns, ns, quantum-lower, local-cor, bilocal-cor or ns-cor.
    #[arg(long)]
    class: String,
    /// Write the full report with its certificate here.
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[command(flatten)]
    quantum: QuantumArgs,
}

#[derive(Args)]
struct VerifyCmd {
    /// lemma1, prop-bilocal-cor, prop-lv, thm2, lemmas-dk or all.
    suite: String,
    /// Random instances per randomized family.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, default_value_t = 2024)]
    rng_seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportCmd {
    file: PathBuf,
    /// Classes to compute (default: every class that applies).
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<String>>,
    #[command(flatten)]
    quantum: QuantumArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let opts = SolverOptions::with_budget(cli.budget);
    let outcome = match cli.command {
        Command::MakeGame(args) => make_game(args),
        Command::Value(args) => value(args, &opts),
        Command::Verify(args) => verify(args, &opts),
        Command::Report(args) => report(args, &opts),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(BellFunctional, Option<Recipe>), Failure> {
    load_game(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn make_game(args: MakeGame) -> Result<(), Failure> {
    let want_inputs = match args.name.as_str() {
        "tensor" => 2,
        "hat" | "tilde" => 1,
        _ => 0,
    };
    if args.inputs.len() != want_inputs {
        return Err(Failure::Usage(format!(
            "make-game {} takes {want_inputs} --in file(s), got {}",
            args.name,
            args.inputs.len()
        )));
    }
    let loaded = args.inputs.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let boxed = |i: usize| loaded[i].1.clone().map(Box::new);
    let (game, recipe) = match args.name.as_str() {
        "chsh" => (bellgap::games::chsh_game(), Some(Recipe::Chsh)),
        "chsh-cor" => (bellgap::games::chsh_correlation_functional(), Some(Recipe::ChshCor)),
        "trivial" => {
            let r = Recipe::Trivial { parties: args.parties };
            (r.build()?, Some(r))
        }
        "kv" => {
            let l = args.l.ok_or_else(|| Failure::Usage("make-game kv needs --l".into()))?;
            let p = match args.eta {
                Some(eta) => KvParams::with_eta(l, eta)?,
                None => KvParams::new(l)?,
            };
            let r = Recipe::Kv { l, eta: p.eta() };
            (r.build()?, Some(r))
        }
        "hadamard-cor" => {
            let n = args.n.unwrap_or(4);
            let r = Recipe::HadamardCor { n };
            (r.build()?, Some(r))
        }
        "tensor" => {
            let g = bellgap::games::tensor_product(&loaded[0].0, &loaded[1].0)?;
            let r = boxed(0).zip(boxed(1)).map(|(left, right)| Recipe::Tensor { left, right });
            (g, r)
        }
        "hat" => (
            bellgap::games::hat_construction(&loaded[0].0)?,
            boxed(0).map(|base| Recipe::Hat { base }),
        ),
        "tilde" => (
            bellgap::games::tilde_construction(&loaded[0].0)?,
            boxed(0).map(|base| Recipe::Tilde { base }),
        ),
        other => {
            return Err(Failure::Usage(format!(
                "unknown game {other:?}; expected chsh, chsh-cor, trivial, kv, hadamard-cor, tensor, hat or tilde"
            )))
        }
    };
    match &args.out {
        Some(p) => save_game(p, &game, recipe.as_ref())?,
        None => out!("{}", GameFile::from_functional(&game, recipe.as_ref())?.to_json()?),
    }
    Ok(())
}

fn quantum_options(q: &QuantumArgs, recipe: Option<&Recipe>, m: &BellFunctional) -> Result<QuantumOptions, Failure> {
    let strategy = match (m.is_correlation(), recipe) {
        (false, Some(r)) => Some(constructed_strategy(r)?),
        _ => None,
    };
    Ok(QuantumOptions {
        dims: q.dims.clone(),
        seeds: q.seeds,
        strategy,
    })
}

fn value(args: ValueCmd, opts: &SolverOptions) -> Result<(), Failure> {
    let class: ValueClass = args.class.parse()?;
    let (m, recipe) = load(&args.file)?;
    let qopts = if class == ValueClass::QuantumLower {
        quantum_options(&args.quantum, recipe.as_ref(), &m)?
    } else {
        QuantumOptions::default()
    };
    let r = solvers::value(&m, class, opts, &qopts)?;
    out!("{} {} {} ({})", r.functional, r.class, r.value, r.method.as_str());
    if let Some(p) = &args.certificate {
        let text = serde_json::to_string_pretty(&r).map_err(Error::from)?;
        write_or_print(Some(p), &text)?;
    }
    Ok(())
}

fn verify(args: VerifyCmd, opts: &SolverOptions) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let cfg = VerifyConfig {
        opts: *opts,
        seeds: args.seeds,
        samples: args.samples,
        rng_seed: args.rng_seed,
    };
    let report = run_suite(suite, &cfg)?;
    for c in &report.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        let rel = serde_json::to_value(c.relation).map_err(Error::from)?;
        out!(
            "{tag} {} : {} {} {} (tol {:e})",
            c.name,
            c.lhs,
            rel.as_str().unwrap_or("?"),
            c.rhs,
            c.tolerance
        );
    }
    if let Some(p) = &args.out {
        write_or_print(Some(p), &report.to_json()?)?;
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn default_classes(m: &BellFunctional, has_strategy: bool) -> Vec<ValueClass> {
    let tripartite = m.parties() == 3;
    let mut out = Vec::new();
    if m.is_correlation() {
        out.push(ValueClass::LocalCor);
        if tripartite {
            out.push(ValueClass::BilocalCor);
        }
        out.push(ValueClass::NsCor);
        out.push(ValueClass::QuantumLower);
    } else {
        out.push(ValueClass::Local);
        if tripartite {
            out.push(ValueClass::BilocalNs);
            if m.is_nonnegative() {
                out.push(ValueClass::BilocalGeneral);
            }
        }
        out.push(ValueClass::Ns);
        if has_strategy {
            out.push(ValueClass::QuantumLower);
        }
    }
    out
}

fn report(args: ReportCmd, opts: &SolverOptions) -> Result<(), Failure> {
    let (m, recipe) = load(&args.file)?;
    let qopts = quantum_options(&args.quantum, recipe.as_ref(), &m).unwrap_or_else(|_| QuantumOptions {
        dims: args.quantum.dims.clone(),
        seeds: args.quantum.seeds,
        strategy: None,
    });
    let classes = match &args.classes {
        Some(names) => names.iter().map(|c| c.parse()).collect::<Result<Vec<ValueClass>, _>>()?,
        None => default_classes(&m, qopts.strategy.is_some()),
    };
    let mut rep = ReportFile::new(m.label());
    for class in classes {
        let start = Instant::now();
        let r = solvers::value(&m, class, opts, &qopts)?;
        rep.wall_times.insert(class.to_string(), start.elapsed().as_secs_f64());
        out!("{} {}", r.class, r.value);
        rep.values.push(r);
    }
    let baseline = rep
        .values
        .iter()
        .find(|v| matches!(v.class, ValueClass::Local | ValueClass::LocalCor))
        .cloned();
    if let Some(base) = baseline {
        for v in rep.values.iter().filter(|v| v.class != base.class) {
            let lv = lv_ratio(v, &base);
            out!("LV({}/{}) {}", lv.numerator, lv.denominator, lv.ratio);
            rep.lv_ratios.push(lv);
        }
    }
    if let Some(p) = &args.out {
        write_or_print(Some(p), &rep.to_json()?)?;
    }
    Ok(())
}
