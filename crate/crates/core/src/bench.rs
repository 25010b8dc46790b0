//! Test-function registry and experiment drivers: uniform errors, p-sweeps at
//! fixed `n`, and n-sweeps comparing the constrained fit with the baselines.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{fh_best_d, hermite_fit, rbf_trial_and_error, RbfKernel};
use crate::cmcls::{fit, FitOptions};
use crate::error::{Error, Result};
use crate::grids::{extract_mock_subset, regression_degree, EquispacedGrid, MIN_SUBINTERVALS};
use crate::metrics::{ErrorGrid, DEFAULT_GRID_SIZE};
use crate::polycore::{BarycentricInterpolant, Basis};

/// Relative tolerance on tabulated abscissae in [`ingest_samples`].
pub const INGEST_TOLERANCE: f64 = 1e-9;

/// Largest `n` accepted by the sweeps.
pub const MAX_SWEEP_N: usize = 10_000;

#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    pub evaluator: fn(f64) -> f64,
    pub smoothness_note: &'static str,
}

impl TestFunction {
    pub fn eval(&self, t: f64) -> f64 {
        (self.evaluator)(t)
    }

    /// Samples at the `n + 1` equispaced nodes.
    pub fn sample(&self, grid: &EquispacedGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&t| self.eval(t)).collect()
    }
}

fn f1(t: f64) -> f64 {
    t.abs().sqrt()
}

fn f2(t: f64) -> f64 {
    1.0 / (1.0 + 25.0 * t * t)
}

fn f3(t: f64) -> f64 {
    1e-15 / (1e-15 + 25.0 * t * t)
}

fn f4(t: f64) -> f64 {
    t * t.abs()
}

fn f5(t: f64) -> f64 {
    1.0 / (t * t - 1.5)
}

fn f6(t: f64) -> f64 {
    let t2 = t * t;
    let b = 26.0_f64.sqrt() / 5.0 - 1.0;
    1.0 / (t2 * t2 + b * t2 + (13.0_f64 / 50.0).powi(2))
}

fn f7(t: f64) -> f64 {
    let t2 = t * t;
    1.0 / (t2 * t2 + (2.0_f64 / 50.0).powi(2))
}

pub const REGISTRY: [TestFunction; 7] = [
    TestFunction {
        name: "f1",
        evaluator: f1,
        smoothness_note: "continuous; derivative unbounded at 0",
    },
    TestFunction {
        name: "f2",
        evaluator: f2,
        smoothness_note: "analytic, poles at +-0.2i (Runge)",
    },
    TestFunction {
        name: "f3",
        evaluator: f3,
        smoothness_note: "analytic but poles within 1e-8 of 0; a spike of width ~1e-8",
    },
    TestFunction {
        name: "f4",
        evaluator: f4,
        smoothness_note: "C1; second derivative jumps at 0",
    },
    TestFunction {
        name: "f5",
        evaluator: f5,
        smoothness_note: "analytic, real poles at +-sqrt(1.5) outside the interval",
    },
    TestFunction {
        name: "f6",
        evaluator: f6,
        smoothness_note: "analytic, poles at +-0.354 +-0.367i",
    },
    TestFunction {
        name: "f7",
        evaluator: f7,
        smoothness_note: "analytic, poles at +-0.141 +-0.141i",
    },
];

pub fn test_function(name: &str) -> Result<TestFunction> {
    REGISTRY
        .iter()
        .find(|f| f.name == name)
        .copied()
        .ok_or_else(|| Error::domain(format!("unknown test function '{name}' (expected f1..f7)")))
}

/// Approximation methods compared in the sweeps. The declaration order is the
/// row order within one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cmcls,
    MockOnly,
    FullInterp,
    Fh,
    Hermite,
    RbfMn,
    RbfW2,
    RbfImq,
    RbfG,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Cmcls,
        Method::MockOnly,
        Method::FullInterp,
        Method::Fh,
        Method::Hermite,
        Method::RbfMn,
        Method::RbfW2,
        Method::RbfImq,
        Method::RbfG,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cmcls => "cmcls",
            Method::MockOnly => "mock_only",
            Method::FullInterp => "full_interp",
            Method::Fh => "fh",
            Method::Hermite => "hermite",
            Method::RbfMn => "rbf_mn",
            Method::RbfW2 => "rbf_w2",
            Method::RbfImq => "rbf_imq",
            Method::RbfG => "rbf_g",
        }
    }

    fn rbf_kernel(self) -> Option<RbfKernel> {
        match self {
            Method::RbfMn => Some(RbfKernel::Monomial),
            Method::RbfW2 => Some(RbfKernel::Wendland2),
            Method::RbfImq => Some(RbfKernel::InverseMultiquadric),
            Method::RbfG => Some(RbfKernel::Gaussian),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "mock" {
            return Ok(Method::MockOnly);
        }
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown method '{s}'")))
    }
}

/// Parameters selected or used by a method.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MethodParams {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_real")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_real")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub method: Method,
    pub n: usize,
    pub p: Option<usize>,
    #[serde(with = "real")]
    pub uniform_error: f64,
    #[serde(with = "opt_real")]
    pub two_norm_error: Option<f64>,
    pub params: MethodParams,
    /// Set when the method failed or produced non-finite values; the error
    /// is then `+inf`.
    pub flag: Option<String>,
}

impl ErrorReport {
    fn failed(method: Method, n: usize, p: Option<usize>, why: String) -> Self {
        ErrorReport {
            method,
            n,
            p,
            uniform_error: f64::INFINITY,
            two_norm_error: None,
            params: MethodParams::default(),
            flag: Some(why),
        }
    }

    fn sort_key(&self) -> (usize, Method, usize) {
        (self.n, self.method, self.p.unwrap_or(0))
    }
}

/// How the rows of a sweep were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of equispaced evaluation points on `[-1, 1]`.
    pub eval_points: usize,
    /// How the `n` values were chosen.
    pub n_sampling: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub function_name: String,
    pub rows: Vec<ErrorReport>,
    pub grid_spec: GridSpec,
}

impl SweepResult {
    fn new(function_name: &str, mut rows: Vec<ErrorReport>, grid_spec: GridSpec) -> Self {
        rows.sort_by_key(ErrorReport::sort_key);
        SweepResult {
            function_name: function_name.to_string(),
            rows,
            grid_spec,
        }
    }

    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &ErrorReport> {
        self.rows.iter().filter(move |r| r.method == method)
    }
}

/// Settings shared by the sweeps: evaluation grid, regression basis, and the
/// baselines' parameter searches.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid_size: usize,
    pub basis: Basis,
    /// Candidate shape parameters for the IMQ and Gaussian kernels.
    pub eps_grid: Vec<f64>,
    /// Largest Floater-Hormann blending degree tried (capped at `n`).
    pub d_max: usize,
    pub gamma: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid_size: DEFAULT_GRID_SIZE,
            basis: Basis::Chebyshev,
            eps_grid: crate::baselines::rbf::default_eps_grid(),
            d_max: 10,
            gamma: 1.0,
        }
    }
}

/// Maximum of `|approx(t) - f(t)|` over `grid_size` equispaced points, with
/// a non-finite approximant reported as `+inf` and flagged.
pub fn uniform_error(approx: impl Fn(f64) -> f64, f: &TestFunction, grid_size: usize) -> Result<(f64, bool)> {
    if grid_size < 2 {
        return Err(Error::domain("evaluation grid needs at least two points"));
    }
    let e = ErrorGrid::equispaced(grid_size, f.evaluator).max_error(approx);
    Ok((e.value, e.non_finite))
}

const NON_FINITE: &str = "non-finite values";

fn measured(
    method: Method,
    n: usize,
    p: Option<usize>,
    grid: &ErrorGrid,
    approx: impl Fn(f64) -> f64,
    two_norm_error: Option<f64>,
    params: MethodParams,
) -> ErrorReport {
    let e = grid.max_error(approx);
    ErrorReport {
        method,
        n,
        p,
        uniform_error: e.value,
        two_norm_error,
        params,
        flag: e.non_finite.then(|| NON_FINITE.to_string()),
    }
}

fn cmcls_report(samples: &[f64], n: usize, p: usize, basis: Basis, grid: &ErrorGrid) -> ErrorReport {
    match fit(samples, n, FitOptions::with_p(p).basis(basis)) {
        Ok(a) => measured(
            Method::Cmcls,
            n,
            Some(p),
            grid,
            |t| a.evaluate(t),
            Some(a.residual_2norm()),
            MethodParams::default(),
        ),
        Err(e) => ErrorReport::failed(Method::Cmcls, n, Some(p), e.to_string()),
    }
}

fn mock_only_report(samples: &[f64], grid_n: &EquispacedGrid, grid: &ErrorGrid) -> Result<ErrorReport> {
    let split = extract_mock_subset(grid_n)?;
    let values: Vec<f64> = split.mock().iter().map(|&i| samples[i]).collect();
    let interp = BarycentricInterpolant::fit(&split.mock_nodes(grid_n), &values)?;
    let two_norm = split
        .residual()
        .iter()
        .map(|&i| samples[i] - interp.eval(grid_n.node(i)))
        .fold(0.0_f64, f64::hypot);
    Ok(measured(
        Method::MockOnly,
        grid_n.n(),
        None,
        grid,
        |t| interp.eval(t),
        Some(two_norm),
        MethodParams::default(),
    ))
}

fn baseline_report(
    method: Method,
    samples: &[f64],
    grid_n: &EquispacedGrid,
    grid: &ErrorGrid,
    config: &SweepConfig,
) -> Result<ErrorReport> {
    let n = grid_n.n();
    let nodes = grid_n.nodes();
    let report = match method {
        Method::Cmcls => {
            let p = regression_degree(n)?;
            cmcls_report(samples, n, p, config.basis, grid)
        }
        Method::MockOnly => mock_only_report(samples, grid_n, grid)?,
        Method::FullInterp => {
            let b = BarycentricInterpolant::fit(nodes, samples)?;
            measured(method, n, None, grid, |t| b.eval(t), None, MethodParams::default())
        }
        Method::Fh => {
            let (d, error) = fh_best_d(nodes, samples, config.d_max.min(n), grid)?;
            ErrorReport {
                method,
                n,
                p: None,
                uniform_error: error,
                two_norm_error: None,
                params: MethodParams {
                    d: Some(d),
                    ..Default::default()
                },
                flag: error.is_infinite().then(|| NON_FINITE.to_string()),
            }
        }
        Method::Hermite => {
            let h = hermite_fit(nodes, samples, config.gamma)?;
            let params = MethodParams {
                gamma: Some(config.gamma),
                ..Default::default()
            };
            measured(method, n, None, grid, |t| h.eval(t), None, params)
        }
        Method::RbfMn | Method::RbfW2 | Method::RbfImq | Method::RbfG => {
            let kernel = method.rbf_kernel().expect("rbf method");
            let best = rbf_trial_and_error(kernel, nodes, samples, &config.eps_grid, grid)?;
            ErrorReport {
                method,
                n,
                p: None,
                uniform_error: best.error,
                two_norm_error: None,
                params: MethodParams {
                    epsilon: best.epsilon,
                    ..Default::default()
                },
                flag: best.error.is_infinite().then(|| NON_FINITE.to_string()),
            }
        }
    };
    Ok(report)
}

/// One constrained fit per `p` in `p_values` plus a single report for the
/// mock-Chebyshev interpolant alone, all at fixed `n`.
pub fn p_sweep(f: &TestFunction, n: usize, p_values: &[usize], config: &SweepConfig) -> Result<SweepResult> {
    let grid_n = EquispacedGrid::new(n)?;
    let m = extract_mock_subset(&grid_n)?.m();
    if let Some(&p) = p_values.iter().find(|&&p| p < 1 || p + 1 > n - m) {
        return Err(Error::domain(format!(
            "regression degree p = {p} outside [1, {}] for n = {n}",
            n - m - 1
        )));
    }
    if config.grid_size < 2 {
        return Err(Error::domain("evaluation grid needs at least two points"));
    }
    let samples = f.sample(&grid_n);
    let grid = ErrorGrid::equispaced(config.grid_size, f.evaluator);
    let mut rows: Vec<ErrorReport> = p_values
        .par_iter()
        .map(|&p| cmcls_report(&samples, n, p, config.basis, &grid))
        .collect();
    rows.push(mock_only_report(&samples, &grid_n, &grid)?);
    Ok(SweepResult::new(
        f.name,
        rows,
        GridSpec {
            eval_points: config.grid_size,
            n_sampling: format!("fixed n = {n}"),
        },
    ))
}

/// Every method in `methods` at every `n` in `n_values`. A method that fails
/// at some `n` yields a flagged `+inf` row and the sweep continues.
pub fn n_sweep(f: &TestFunction, methods: &[Method], n_values: &[usize], config: &SweepConfig) -> Result<SweepResult> {
    if let Some(&n) = n_values
        .iter()
        .find(|&&n| !(MIN_SUBINTERVALS..=MAX_SWEEP_N).contains(&n))
    {
        return Err(Error::domain(format!(
            "n = {n} outside [{MIN_SUBINTERVALS}, {MAX_SWEEP_N}]"
        )));
    }
    if config.grid_size < 2 {
        return Err(Error::domain("evaluation grid needs at least two points"));
    }
    let grid = ErrorGrid::equispaced(config.grid_size, f.evaluator);
    let jobs: Vec<(usize, Method)> = n_values
        .iter()
        .flat_map(|&n| methods.iter().map(move |&m| (n, m)))
        .collect();
    let rows: Vec<ErrorReport> = jobs
        .par_iter()
        .map(|&(n, method)| {
            let grid_n = EquispacedGrid::new(n).expect("n validated above");
            let samples = f.sample(&grid_n);
            baseline_report(method, &samples, &grid_n, &grid, config).unwrap_or_else(|e| {
                let p = (method == Method::Cmcls).then(|| regression_degree(n).ok()).flatten();
                log::warn!("{method} failed at n = {n}: {e}");
                ErrorReport::failed(method, n, p, e.to_string())
            })
        })
        .collect();
    Ok(SweepResult::new(
        f.name,
        rows,
        GridSpec {
            eval_points: config.grid_size,
            n_sampling: describe_n_values(n_values),
        },
    ))
}

fn describe_n_values(n_values: &[usize]) -> String {
    let list: Vec<String> = n_values.iter().map(usize::to_string).collect();
    format!("{} values: {}", n_values.len(), list.join(","))
}

/// About `count` distinct integers spaced logarithmically in `[lo, hi]`,
/// both ends included.
pub fn log_spaced_n(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if lo >= hi || count < 2 {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp().round() as usize)
        .map(|n| n.clamp(lo, hi))
        .collect();
    out.dedup();
    out
}

/// Turns tabulated `(t, value)` rows into a grid and samples in node order.
/// The abscissae must be an equispaced partition of `[-1, 1]` up to
/// [`INGEST_TOLERANCE`], in any order.
pub fn ingest_samples(rows: &[(f64, f64)]) -> Result<(EquispacedGrid, Vec<f64>)> {
    if rows.len() < MIN_SUBINTERVALS + 1 {
        return Err(Error::domain(format!(
            "need at least {} samples, got {}",
            MIN_SUBINTERVALS + 1,
            rows.len()
        )));
    }
    if let Some((t, v)) = rows.iter().find(|(t, v)| !t.is_finite() || !v.is_finite()) {
        return Err(Error::domain(format!("non-finite sample ({t}, {v})")));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::domain(format!("duplicate abscissa {}", w[0].0)));
    }
    let grid = EquispacedGrid::new(sorted.len() - 1)?;
    let (worst, deviation) = sorted
        .iter()
        .zip(grid.nodes())
        .map(|(&(t, _), &x)| (t, (t - x).abs()))
        .fold((0.0, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if deviation > INGEST_TOLERANCE {
        return Err(Error::domain(format!(
            "abscissae are not an equispaced partition of [-1, 1]: t = {worst} is off by {deviation:e}"
        )));
    }
    Ok((grid, sorted.into_iter().map(|(_, v)| v).collect()))
}

/// Reals that may be infinite or NaN are written as strings in
/// self-describing formats, since JSON has no literal for them.
mod real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

mod opt_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::real::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::real")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
