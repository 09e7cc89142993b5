//! `oslab`: runs the verification suites and writes a versioned report.

mod cocycle;
mod fourier;
mod report;
mod tensor;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use oslab::fourier_finite::{AGFunction, FiniteGroup};
use oslab::hochschild::CommutativeAlgebra;
use oslab::ostensor::{TensorElement, DEFAULT_GAUGE_RESTARTS};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::json;

use report::{Report, Row};

const MAX_TENSOR_DIM: usize = 8;
const MAX_GROUP_ORDER: usize = 24;
const MAX_ALGEBRA_DIM: usize = 8;

#[derive(Parser)]
#[command(name = "oslab", version, about = "Verification suites for tensor norms, cocycles and Fourier algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Spatial, twisted, Haagerup and projective norms with their brackets.
    Norms,
    /// twisted ≤ √(h·h_flip) ≤ mean and twisted ≤ projective upper bound.
    TwistedChain,
    /// Schatten-class elementary operator bounds against Haagerup norms.
    Rainwater,
    /// Hochschild complex, wedge cocycles, polarization and trigonometric examples.
    Cocycle,
    /// Fourier algebra norms, check map, Herz restriction, products, derivations.
    Fourier,
    /// Every suite with default settings.
    All,
}

impl Command {
    fn label(self) -> &'static str {
        match self {
            Command::Norms => "norms",
            Command::TwistedChain => "twisted-chain",
            Command::Rainwater => "rainwater",
            Command::Cocycle => "cocycle",
            Command::Fourier => "fourier",
            Command::All => "all",
        }
    }

    fn suites(self) -> &'static [&'static str] {
        match self {
            Command::Cocycle => &["all", "complex", "derivations", "polarization", "wedge", "pullback", "trig"],
            Command::Fourier => &["all", "norms", "check", "herz", "products", "derivations"],
            _ => &["all"],
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args)]
struct Options {
    /// Sub-suite to run (see each command).
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    /// JSON file with one instance or an array of instances.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Generate random instances (the default when no input is given).
    #[arg(long, global = true)]
    random: bool,
    /// Number of random instances.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Tensor factor dimensions; for `cocycle` the first bounds the algebra dimension.
    #[arg(long, global = true, num_args = 2, value_names = ["E", "F"])]
    dims: Option<Vec<usize>>,
    #[arg(long, global = true, env = "OSLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Random restarts of the gauge searches.
    #[arg(long, global = true, default_value_t = DEFAULT_GAUGE_RESTARTS)]
    restarts: usize,
    /// Overrides the slack or tolerance of each check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Group for `fourier`: Z/n, D<m>, S3, S4, Q8 or products `A x B`.
    #[arg(long, global = true)]
    group: Option<String>,
}

/// Validated run settings shared by the suites.
#[derive(Clone)]
pub struct Settings {
    pub seed: u64,
    pub count: usize,
    pub dims: (usize, usize),
    pub restarts: usize,
    pub tol: Option<f64>,
    pub iterations: usize,
}

fn settings(o: &Options, command: Command) -> anyhow::Result<Settings> {
    if !command.suites().contains(&o.suite.as_str()) {
        bail!("unknown suite {:?} for {}; expected one of {:?}", o.suite, command.label(), command.suites());
    }
    if let Some(t) = o.tol {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tol must be positive, got {t}");
        }
    }
    let default_count = match command {
        Command::Cocycle => 5,
        Command::Fourier => 20,
        _ => 10,
    };
    let dims = match (&o.dims, command) {
        (Some(d), _) => (d[0], d[1]),
        (None, Command::Cocycle) => (5, 5),
        (None, _) => (3, 3),
    };
    let max = if command == Command::Cocycle { MAX_ALGEBRA_DIM } else { MAX_TENSOR_DIM };
    if dims.0 == 0 || dims.1 == 0 || dims.0 > max || dims.1 > max {
        bail!("--dims must lie in 1..={max}, got {} {}", dims.0, dims.1);
    }
    Ok(Settings {
        seed: o.seed,
        count: o.count.unwrap_or(default_count),
        dims,
        restarts: o.restarts,
        tol: o.tol,
        iterations: fourier::default_iterations(),
    })
}

/// Reads one instance or an array of instances, reporting the JSON path and
/// line of the first malformed field.
fn load<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_array = text.trim_start().starts_with('[');
    let mut de = serde_json::Deserializer::from_str(&text);
    let result = if is_array {
        serde_path_to_error::deserialize::<_, Vec<T>>(&mut de)
    } else {
        serde_path_to_error::deserialize::<_, T>(&mut de).map(|t| vec![t])
    };
    result.map_err(|e| anyhow!("invalid input in {} at `{}`: {}", path.display(), e.path(), e.inner()))
}

fn tensor_inputs(o: &Options, s: &Settings) -> anyhow::Result<Vec<TensorElement>> {
    let Some(path) = &o.input else {
        return Ok(tensor::random_instances(s));
    };
    let items: Vec<TensorElement> = load(path)?;
    for (i, w) in items.iter().enumerate() {
        if w.dim_e() > MAX_TENSOR_DIM || w.dim_f() > MAX_TENSOR_DIM {
            bail!("instance {i} has dims {} {}, above the maximum {MAX_TENSOR_DIM}", w.dim_e(), w.dim_f());
        }
    }
    Ok(items)
}

fn per_instance<T: Sync>(items: &[T], f: impl Fn(usize, &T) -> Vec<Row> + Sync) -> Vec<Row> {
    let nested: Vec<Vec<Row>> = items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect();
    nested.into_iter().flatten().collect()
}

fn cocycle_rows(o: &Options, s: &Settings) -> anyhow::Result<Vec<Row>> {
    let suite = o.suite.as_str();
    let algebras: Vec<CommutativeAlgebra> = match &o.input {
        Some(path) => load(path)?,
        None => cocycle::random_algebras(s),
    };
    if let Some((i, a)) = algebras.iter().enumerate().find(|(_, a)| a.dim() > MAX_ALGEBRA_DIM) {
        bail!("algebra {i} has dimension {}, above the maximum {MAX_ALGEBRA_DIM}", a.dim());
    }
    let mut rows = per_instance(&algebras, |i, a| cocycle::algebra_rows(i, a, s, suite));
    if matches!(suite, "all" | "wedge") && algebras.len() > 1 {
        let pairs: Vec<usize> = (0..algebras.len()).collect();
        rows.extend(per_instance(&pairs, |i, &k| {
            cocycle::wedge_pair_rows(i, &algebras[k], &algebras[(k + 1) % algebras.len()], s)
        }));
    }
    if o.input.is_some() {
        return Ok(rows);
    }
    rows.extend(cocycle::structured_rows(s, suite));
    if matches!(suite, "all" | "trig") {
        let ids: Vec<usize> = (0..20 * s.count).collect();
        rows.extend(per_instance(&ids, |i, _| cocycle::trig_rows(i, s)));
        rows.extend(cocycle::monomial_rows());
    }
    Ok(rows)
}

fn fourier_rows(o: &Options, s: &Settings) -> anyhow::Result<Vec<Row>> {
    if let Some(path) = &o.input {
        let functions: Vec<AGFunction> = load(path)?;
        if let Some((i, f)) = functions.iter().enumerate().find(|(_, f)| f.group().order() > MAX_GROUP_ORDER) {
            bail!("function {i} lives on a group of order {}, above {MAX_GROUP_ORDER}", f.group().order());
        }
        return Ok(per_instance(&functions, |i, f| fourier::function_rows(i, f, s)));
    }
    let names: Vec<String> = match &o.group {
        Some(g) => vec![g.clone()],
        None => fourier::DEFAULT_GROUPS.iter().map(|g| g.to_string()).collect(),
    };
    let groups: Vec<FiniteGroup> = names.iter().map(|n| FiniteGroup::by_name(n)).collect::<oslab::Result<_>>()?;
    if let Some(g) = groups.iter().find(|g| g.order() > MAX_GROUP_ORDER) {
        bail!("group {} has order {}, above {MAX_GROUP_ORDER}", g.name(), g.order());
    }
    Ok(per_instance(&groups, |_, g| fourier::group_rows(g, s, &o.suite)))
}

fn rows_for(command: Command, o: &Options, s: &Settings) -> anyhow::Result<Vec<Row>> {
    Ok(match command {
        Command::Norms => per_instance(&tensor_inputs(o, s)?, |i, w| tensor::norms(i, w, s)),
        Command::TwistedChain => per_instance(&tensor_inputs(o, s)?, |i, w| tensor::twisted_chain(i, w, s)),
        Command::Rainwater => per_instance(&tensor_inputs(o, s)?, |i, w| tensor::rainwater(i, w, s)),
        Command::Cocycle => cocycle_rows(o, s)?,
        Command::Fourier => fourier_rows(o, s)?,
        Command::All => {
            if o.input.is_some() {
                bail!("`all` runs on random instances only");
            }
            let mut rows = Vec::new();
            for sub in [Command::Norms, Command::TwistedChain, Command::Rainwater, Command::Cocycle, Command::Fourier] {
                let s = settings(o, sub)?;
                for mut r in rows_for(sub, o, &s)? {
                    r.name = format!("{}/{}", sub.label(), r.name);
                    rows.push(r);
                }
            }
            rows
        }
    })
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let o = &cli.options;
    let s = settings(o, cli.command)?;
    let rows = rows_for(cli.command, o, &s)?;
    let config = json!({
        "suite": o.suite,
        "source": o.input.as_ref().map_or("random".to_string(), |p| p.display().to_string()),
        "seed": s.seed,
        "count": s.count,
        "dims": [s.dims.0, s.dims.1],
        "restarts": s.restarts,
        "tol": s.tol,
        "group": o.group,
    });
    Ok(Report::new(cli.command.label(), config, rows))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.options.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = (|| -> anyhow::Result<()> {
        let mut out: Box<dyn Write> = match &cli.options.output {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        match cli.options.format {
            Format::Json => report.write_json(&mut out)?,
            Format::Csv => report.write_csv(&mut out)?,
        }
        out.flush()?;
        Ok(())
    })();
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let sm = &report.summary;
    eprintln!(
        "{}: {} checks, {} passed, {} failed, {} warnings",
        report.command, sm.checks, sm.passed, sm.failed, sm.warnings
    );
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
