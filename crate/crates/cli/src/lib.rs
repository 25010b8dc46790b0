//! Command-line front end for the `mockcheb` library: node inspection,
//! single fits, p- and n-sweeps and baseline comparisons, written as CSV or
//! JSON.
//!
//! Exit codes: 0 on success (including sweeps where some methods failed and
//! were recorded as `inf` rows), 2 for usage, configuration and input
//! errors, 3 for numerical failures.

pub mod output;
pub mod range;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mockcheb::bench::{self, ingest_samples, test_function, Method, SweepConfig, SweepResult, TestFunction};
use mockcheb::grids::{extract_mock_subset, mock_degree, EquispacedGrid};
use mockcheb::metrics::DEFAULT_GRID_SIZE;
use mockcheb::polycore::Basis;
use mockcheb::{fit, FitOptions};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use range::IntRange;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read input: {0}")]
    Input(String),

    #[error("cannot write output: {0}")]
    Output(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] mockcheb::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_domain() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mockcheb",
    version,
    about = "Constrained mock-Chebyshev least squares on equispaced samples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Chebyshev,
    Monomial,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Chebyshev => Basis::Chebyshev,
            BasisArg::Monomial => Basis::Monomial,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the equispaced nodes and whether each is a mock-Chebyshev node.
    Nodes {
        #[arg(long)]
        n: usize,
    },
    /// Fit one constrained approximant and report its errors and coefficients.
    Approx {
        #[command(flatten)]
        source: Source,
        /// Number of subintervals (inferred from --input).
        #[arg(long)]
        n: Option<usize>,
        /// Regression degree (default: the automatic choice for n).
        #[arg(long)]
        p: Option<usize>,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Errors of the constrained fit for a range of regression degrees at fixed n.
    Psweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        /// Degrees as a:b[:step] (default: every admissible degree).
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Errors of the chosen methods over a range of n.
    Nsweep {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Like nsweep with every method by default, plus a summary of the best
    /// method at the largest n on stderr.
    Compare {
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in test function f1..f7.
    #[arg(long)]
    pub function: Option<String>,
    /// CSV file with header `t,f` tabulating a function on an equispaced grid.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value_t = BasisArg::Chebyshev)]
    pub basis: BasisArg,
    /// Equispaced points used to measure the uniform error.
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    /// n values as a:b[:step]; without a step about 40 log-spaced values.
    #[arg(long)]
    pub n: String,
    /// Comma-separated methods, e.g. cmcls,mock,rbf_g.
    #[arg(long)]
    pub methods: Option<String>,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Shape parameters tried by the IMQ and Gaussian kernels, as lo:hi:count.
    #[arg(long)]
    pub eps_grid: Option<String>,
    /// Largest Floater-Hormann blending degree tried.
    #[arg(long, default_value_t = 10)]
    pub d_max: usize,
    /// Hermite-function damping parameter.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

/// One row of `nodes` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRow {
    pub index: usize,
    pub x: f64,
    pub role: String,
}

/// Result of `approx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    /// Test function name, absent for tabulated input.
    pub function: Option<String>,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub basis: Basis,
    /// Evaluation points behind `uniform_error`.
    pub grid_size: Option<usize>,
    /// Absent for tabulated input, where the exact function is unknown.
    pub uniform_error: Option<f64>,
    /// Discrete 2-norm of the fit's residual on the non-mock nodes.
    pub residual_2norm: f64,
    /// Same for the mock-Chebyshev interpolant alone.
    pub mock_residual_2norm: f64,
    /// Coefficients of the regression polynomial multiplying the monic node
    /// polynomial of the mock nodes, in `basis`.
    pub coefficients: Vec<f64>,
}

enum Data {
    Function(TestFunction),
    Table(EquispacedGrid, Vec<f64>),
}

impl Source {
    fn load(&self) -> Result<Data, CliError> {
        match (&self.function, &self.input) {
            (Some(name), None) => Ok(Data::Function(test_function(name)?)),
            (None, Some(path)) => {
                let rows = read_table(path)?;
                let (grid, values) = ingest_samples(&rows)?;
                Ok(Data::Table(grid, values))
            }
            _ => Err(CliError::Usage("give exactly one of --function and --input".into())),
        }
    }

    fn function(&self, command: &str) -> Result<TestFunction, CliError> {
        match self.load()? {
            Data::Function(f) => Ok(f),
            Data::Table(..) => Err(CliError::Usage(format!(
                "{command} measures errors against the exact function and needs --function"
            ))),
        }
    }
}

/// Reads a `t,f` table.
pub fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let header = reader.headers().map_err(|e| CliError::Input(e.to_string()))?.clone();
    if header.len() != 2 || header[0].trim() != "t" || header[1].trim() != "f" {
        return Err(CliError::Input(format!("{}: header must be 't,f'", path.display())));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(e.to_string()))?;
        let num = |k: usize| {
            record[k].trim().parse::<f64>().map_err(|_| {
                CliError::Input(format!(
                    "{}: row {}: '{}' is not a number",
                    path.display(),
                    line + 2,
                    &record[k]
                ))
            })
        };
        rows.push((num(0)?, num(1)?));
    }
    Ok(rows)
}

fn parse_methods(list: Option<&str>, default: &[Method]) -> Result<Vec<Method>, CliError> {
    let Some(list) = list else {
        return Ok(default.to_vec());
    };
    let mut methods = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m: Method = name
            .parse()
            .map_err(|e: mockcheb::Error| CliError::Usage(e.to_string()))?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err(CliError::Usage("--methods is empty".into()));
    }
    Ok(methods)
}

pub fn cmd_nodes(n: usize) -> Result<Vec<NodeRow>, CliError> {
    let grid = EquispacedGrid::new(n)?;
    let split = extract_mock_subset(&grid)?;
    Ok(grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(index, &x)| NodeRow {
            index,
            x,
            role: if split.is_mock(index) { "mock" } else { "residual" }.to_string(),
        })
        .collect())
}

pub fn cmd_approx(
    source: &Source,
    n: Option<usize>,
    p: Option<usize>,
    eval: &EvalArgs,
) -> Result<ApproxReport, CliError> {
    let (function, grid, samples) = match source.load()? {
        Data::Function(f) => {
            let n = n.ok_or_else(|| CliError::Usage("--n is required with --function".into()))?;
            let grid = EquispacedGrid::new(n)?;
            let samples = f.sample(&grid);
            (Some(f), grid, samples)
        }
        Data::Table(grid, samples) => {
            if let Some(n) = n.filter(|&n| n != grid.n()) {
                return Err(CliError::Usage(format!(
                    "--n {n} disagrees with the {} subintervals in --input",
                    grid.n()
                )));
            }
            (None, grid, samples)
        }
    };
    let options = FitOptions {
        p,
        ..FitOptions::default().basis(eval.basis.into())
    };
    let a = fit(&samples, grid.n(), options)?;
    let uniform_error = match &function {
        Some(f) => {
            let (e, non_finite) = bench::uniform_error(|t| a.evaluate(t), f, eval.grid_size)?;
            if non_finite {
                return Err(
                    mockcheb::Error::Numerical("the approximant is not finite on the evaluation grid".into()).into(),
                );
            }
            Some(e)
        }
        None => None,
    };
    let scale = (-a.omega().log_scale()).exp();
    Ok(ApproxReport {
        function: function.map(|f| f.name.to_string()),
        n: a.n(),
        m: a.m(),
        p: a.p(),
        basis: a.regression().basis(),
        grid_size: uniform_error.map(|_| eval.grid_size),
        uniform_error,
        residual_2norm: a.residual_2norm(),
        mock_residual_2norm: a.mock_residual_2norm(),
        coefficients: a.regression().coefficients().iter().map(|c| c * scale).collect(),
    })
}

fn sweep_config(eval: &EvalArgs) -> SweepConfig {
    SweepConfig {
        grid_size: eval.grid_size,
        basis: eval.basis.into(),
        ..SweepConfig::default()
    }
}

pub fn cmd_psweep(source: &Source, n: usize, p: Option<&str>, eval: &EvalArgs) -> Result<SweepResult, CliError> {
    let f = source.function("psweep")?;
    let p_values = match p {
        Some(s) => IntRange::parse(s)?.linear(),
        None => {
            let m = mock_degree(n)?;
            (1..n.saturating_sub(m)).collect()
        }
    };
    Ok(bench::p_sweep(&f, n, &p_values, &sweep_config(eval))?)
}

pub fn cmd_nsweep(args: &SweepArgs, default_methods: &[Method]) -> Result<SweepResult, CliError> {
    let f = args.source.function("an n-sweep")?;
    let n_values = IntRange::parse(&args.n)?.sweep_values();
    let methods = parse_methods(args.methods.as_deref(), default_methods)?;
    if !args.gamma.is_finite() || args.gamma < 0.0 {
        return Err(CliError::Usage(format!(
            "--gamma {} must be finite and non-negative",
            args.gamma
        )));
    }
    let mut config = SweepConfig {
        d_max: args.d_max,
        gamma: args.gamma,
        ..sweep_config(&args.eval)
    };
    if let Some(s) = &args.eps_grid {
        config.eps_grid = range::parse_eps_grid(s)?;
    }
    Ok(bench::n_sweep(&f, &methods, &n_values, &config)?)
}

/// One line naming the most accurate method at the largest `n` of a sweep.
pub fn best_at_largest_n(result: &SweepResult) -> Option<String> {
    let n = result.rows.iter().map(|r| r.n).max()?;
    let best = result
        .rows
        .iter()
        .filter(|r| r.n == n)
        .min_by(|a, b| a.uniform_error.total_cmp(&b.uniform_error))?;
    Some(format!(
        "best at n = {n}: {} ({})",
        best.method,
        output::sci(best.uniform_error)
    ))
}

fn approx_fields(r: &ApproxReport) -> Vec<(String, String)> {
    let mut fields = vec![
        ("function".to_string(), r.function.clone().unwrap_or_default()),
        ("n".to_string(), r.n.to_string()),
        ("m".to_string(), r.m.to_string()),
        ("p".to_string(), r.p.to_string()),
        (
            "basis".to_string(),
            if r.basis == Basis::Monomial {
                "monomial"
            } else {
                "chebyshev"
            }
            .to_string(),
        ),
        (
            "grid_size".to_string(),
            r.grid_size.map(|g| g.to_string()).unwrap_or_default(),
        ),
        (
            "uniform_error".to_string(),
            r.uniform_error.map(output::sci).unwrap_or_default(),
        ),
        ("residual_2norm".to_string(), output::sci(r.residual_2norm)),
        ("mock_residual_2norm".to_string(), output::sci(r.mock_residual_2norm)),
    ];
    fields.extend(
        r.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| (format!("coefficient_{k}"), format!("{c:e}"))),
    );
    fields
}

fn render(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Nodes { n } => {
            let rows = cmd_nodes(*n)?;
            match cli.format {
                Format::Json => output::json(&rows),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["index", "x", "role"])?;
                    for r in &rows {
                        w.write_record([r.index.to_string(), r.x.to_string(), r.role.clone()])?;
                    }
                    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
                    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
                }
            }
        }
        Command::Approx { source, n, p, eval } => {
            let report = cmd_approx(source, *n, *p, eval)?;
            match cli.format {
                Format::Json => output::json(&report),
                Format::Csv => output::fields_csv(&approx_fields(&report)),
            }
        }
        Command::Psweep { source, n, p, eval } => {
            sweep_output(&cmd_psweep(source, *n, p.as_deref(), eval)?, cli.format)
        }
        Command::Nsweep { sweep } => sweep_output(&cmd_nsweep(sweep, &[Method::Cmcls, Method::MockOnly])?, cli.format),
        Command::Compare { sweep } => {
            let result = cmd_nsweep(sweep, &Method::ALL)?;
            if let Some(line) = best_at_largest_n(&result) {
                eprintln!("{line}");
            }
            sweep_output(&result, cli.format)
        }
    }
}

fn sweep_output(result: &SweepResult, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => output::sweep_csv(result),
        Format::Json => output::json(result),
    }
}

/// Runs a parsed command line and writes its report to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match cli.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?
            .install(|| render(cli))?,
        None => render(cli)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
