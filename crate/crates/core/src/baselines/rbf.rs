//! Radial basis function interpolation `S(t) = sum lambda_i phi(|t - xi_i|)`
//! with trial-and-error selection of the shape parameter.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ErrorGrid;

/// Relative interpolation residual above which a solve counts as singular.
const SINGULAR_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RbfKernel {
    /// `r^power`, odd power (default 3).
    Monomial,
    /// Wendland `(1 - r)_+^4 (1 + 4r)`.
    Wendland2,
    /// `1 / sqrt(1 + (eps r)^2)`.
    InverseMultiquadric,
    /// `exp(-(eps r)^2)`.
    Gaussian,
}

impl RbfKernel {
    pub fn needs_shape(self) -> bool {
        matches!(self, RbfKernel::InverseMultiquadric | RbfKernel::Gaussian)
    }
}

/// Kernel together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbfParams {
    pub kernel: RbfKernel,
    pub epsilon: Option<f64>,
    /// Exponent `2m + 1` of the monomial kernel.
    pub mn_power: u32,
}

impl RbfParams {
    pub fn new(kernel: RbfKernel, epsilon: Option<f64>) -> Self {
        Self {
            kernel,
            epsilon,
            mn_power: 3,
        }
    }

    #[inline]
    fn phi(&self, r: f64) -> f64 {
        match self.kernel {
            RbfKernel::Monomial => r.powi(self.mn_power as i32),
            RbfKernel::Wendland2 => {
                if r >= 1.0 {
                    0.0
                } else {
                    let s = 1.0 - r;
                    s * s * s * s * (1.0 + 4.0 * r)
                }
            }
            RbfKernel::InverseMultiquadric => {
                let er = self.epsilon.unwrap_or(1.0) * r;
                1.0 / (1.0 + er * er).sqrt()
            }
            RbfKernel::Gaussian => {
                let er = self.epsilon.unwrap_or(1.0) * r;
                (-er * er).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RbfInterpolant {
    params: RbfParams,
    centers: Vec<f64>,
    coefficients: Vec<f64>,
    residual: f64,
}

/// Interpolation matrix `phi(|xi_i - xi_j|)`, filled from the upper triangle.
pub fn interpolation_matrix(params: &RbfParams, centers: &[f64]) -> DMatrix<f64> {
    let n = centers.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = params.phi((centers[i] - centers[j]).abs());
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

pub fn rbf_fit(params: RbfParams, centers: &[f64], values: &[f64]) -> Result<RbfInterpolant> {
    if centers.is_empty() || centers.len() != values.len() {
        return Err(Error::domain(
            "RBF interpolation needs matching, nonempty centers and values",
        ));
    }
    let mut sorted = centers.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("RBF centers must be distinct"));
    }
    let mut params = params;
    if params.kernel.needs_shape() {
        match params.epsilon {
            Some(e) if e > 0.0 && e.is_finite() => {}
            _ => return Err(Error::domain("IMQ and Gaussian kernels need a shape parameter > 0")),
        }
    } else if params.epsilon.take().is_some() {
        log::warn!("{:?} kernel has no shape parameter; epsilon ignored", params.kernel);
    }
    if params.kernel == RbfKernel::Monomial && params.mn_power % 2 == 0 {
        return Err(Error::domain("monomial kernel power must be odd"));
    }

    let a = interpolation_matrix(&params, centers);
    let b = DVector::from_column_slice(values);
    let solution = a.clone().lu().solve(&b);
    let Some(lambda) = solution.filter(|l| l.iter().all(|v| v.is_finite())) else {
        return Err(Error::Conditioning {
            message: format!("{:?} interpolation matrix is singular", params.kernel),
            residual: f64::INFINITY,
        });
    };
    let scale = values
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let residual = (&a * &lambda - &b).amax() / scale;
    if !(residual <= SINGULAR_RESIDUAL) {
        return Err(Error::Conditioning {
            message: format!("{:?} interpolation matrix is numerically singular", params.kernel),
            residual,
        });
    }
    Ok(RbfInterpolant {
        params,
        centers: centers.to_vec(),
        coefficients: lambda.as_slice().to_vec(),
        residual,
    })
}

impl RbfInterpolant {
    pub fn params(&self) -> &RbfParams {
        &self.params
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Relative max-norm residual of the interpolation conditions.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(&c, &l)| l * self.params.phi((t - c).abs()))
            .sum()
    }
}

/// `count` logarithmically spaced values in `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// 40 log-spaced shape parameters in `[1e-2, 1e2]`.
pub fn default_eps_grid() -> Vec<f64> {
    log_spaced(1e-2, 1e2, 40)
}

/// Outcome of a shape-parameter search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// Selected shape parameter; `None` for parameter-free kernels.
    pub epsilon: Option<f64>,
    pub error: f64,
}

/// Fits every candidate in `eps_grid` and keeps the one with the smallest
/// uniform error on `grid`; ties go to the smaller epsilon. Parameter-free
/// kernels are fitted once.
pub fn rbf_trial_and_error(
    kernel: RbfKernel,
    centers: &[f64],
    values: &[f64],
    eps_grid: &[f64],
    grid: &ErrorGrid,
) -> Result<TrialOutcome> {
    if !kernel.needs_shape() {
        let s = rbf_fit(RbfParams::new(kernel, None), centers, values)?;
        return Ok(TrialOutcome {
            epsilon: None,
            error: grid.max_error(|t| s.eval(t)).value,
        });
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::domain("shape-parameter grid must be nonempty and positive"));
    }
    let mut candidates = eps_grid.to_vec();
    candidates.sort_by(f64::total_cmp);
    let errors: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|&eps| {
            rbf_fit(RbfParams::new(kernel, Some(eps)), centers, values)
                .ok()
                .map(|s| grid.max_error(|t| s.eval(t)).value)
        })
        .collect();
    let mut best: Option<TrialOutcome> = None;
    for (&eps, err) in candidates.iter().zip(errors) {
        if let Some(e) = err {
            if best.map_or(true, |b| e < b.error) {
                best = Some(TrialOutcome {
                    epsilon: Some(eps),
                    error: e,
                });
            }
        }
    }
    best.ok_or_else(|| Error::Conditioning {
        message: format!("every {kernel:?} trial failed"),
        residual: f64::INFINITY,
    })
}
