//! Constrained mock-Chebyshev least squares.
//!
//! The approximant interpolates the samples on the mock-Chebyshev subset and
//! adds `Q(t) * omega(t)`, where `omega` vanishes on that subset and `Q` is the
//! least-squares fit of the remaining residual on the other nodes:
//!
//! ```text
//! P(t) = P_mock(t) + Q(t) * omega(t),   Q = argmin || f - P_mock - Q omega ||_2 on X''
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{extract_mock_subset, regression_degree, EquispacedGrid, NodeSplit};
use crate::lsq::{householder_lstsq, DenseMatrix};
use crate::polycore::{BarycentricInterpolant, Basis, BasisPolynomial, ScaledNodePolynomial};

/// Fit configuration. `p = None` selects `regression_degree(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub p: Option<usize>,
    pub basis: Basis,
    /// Extra positive factor applied to the scaled node polynomial. The
    /// approximant does not depend on it; it exists to check exactly that.
    pub omega_factor: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            p: None,
            basis: Basis::Chebyshev,
            omega_factor: 1.0,
        }
    }
}

impl FitOptions {
    pub fn with_p(p: usize) -> Self {
        Self {
            p: Some(p),
            ..Self::default()
        }
    }

    pub fn basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }
}

/// The overdetermined system `A c ~ b` on the residual nodes.
#[derive(Debug, Clone)]
pub struct RegressionSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub p: usize,
    pub basis: Basis,
}

impl RegressionSystem {
    /// Rows `omega(x'') * phi_j(x'')`, right-hand side `f(x'') - P_mock(x'')`.
    pub fn assemble(
        residual_nodes: &[f64],
        residual_values: &[f64],
        interp: &BarycentricInterpolant,
        omega: &ScaledNodePolynomial,
        p: usize,
        basis: Basis,
    ) -> Self {
        let rows = residual_nodes.len();
        let mut matrix = DenseMatrix::zeros(rows, p + 1);
        let mut row = vec![0.0; p + 1];
        let mut rhs = Vec::with_capacity(rows);
        for (i, (&x, &f)) in residual_nodes.iter().zip(residual_values).enumerate() {
            let w = omega.eval(x);
            basis.fill_row(x, &mut row);
            for (j, &phi) in row.iter().enumerate() {
                matrix[(i, j)] = w * phi;
            }
            rhs.push(f - interp.eval(x));
        }
        Self { matrix, rhs, p, basis }
    }

    pub fn solve(&self) -> Result<Vec<f64>> {
        householder_lstsq(&self.matrix, &self.rhs)
    }
}

/// Fitted constrained mock-Chebyshev least-squares polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedApproximant {
    split: NodeSplit,
    interp: BarycentricInterpolant,
    omega: ScaledNodePolynomial,
    q: BasisPolynomial,
    p: usize,
    residual_2norm: f64,
    mock_residual_2norm: f64,
}

fn euclidean_norm(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0_f64, f64::hypot)
}

/// Fits the approximant to `samples` taken at the `n + 1` equispaced nodes.
pub fn fit(samples: &[f64], n: usize, options: FitOptions) -> Result<ConstrainedApproximant> {
    let grid = EquispacedGrid::new(n.max(1))?;
    if samples.len() != n + 1 {
        return Err(Error::domain(format!(
            "expected {} samples for n = {n}, got {}",
            n + 1,
            samples.len()
        )));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(format!("sample {i} is not finite")));
    }
    let split = extract_mock_subset(&grid)?;
    let m = split.m();
    let p = match options.p {
        Some(p) => p,
        None => regression_degree(n)?,
    };
    if p < 1 || p + 1 > n - m {
        return Err(Error::domain(format!(
            "regression degree p = {p} outside [1, {}] for n = {n}",
            n - m - 1
        )));
    }
    if !(options.omega_factor > 0.0 && options.omega_factor.is_finite()) {
        return Err(Error::domain("omega factor must be positive and finite"));
    }

    let mock_nodes = split.mock_nodes(&grid);
    let mock_values: Vec<f64> = split.mock().iter().map(|&i| samples[i]).collect();
    let residual_nodes = split.residual_nodes(&grid);
    let residual_values: Vec<f64> = split.residual().iter().map(|&i| samples[i]).collect();

    let interp = BarycentricInterpolant::fit(&mock_nodes, &mock_values)?;
    let mut omega = ScaledNodePolynomial::build(&mock_nodes, &residual_nodes)?;
    if options.omega_factor != 1.0 {
        omega = omega.rescaled(options.omega_factor);
    }

    let system = RegressionSystem::assemble(&residual_nodes, &residual_values, &interp, &omega, p, options.basis);
    let coefficients = system.solve()?;
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::numerical("regression produced non-finite coefficients"));
    }
    let fitted = system.matrix.mul_vec(&coefficients);
    let residual_2norm = euclidean_norm(system.rhs.iter().zip(&fitted).map(|(b, a)| b - a));
    let mock_residual_2norm = euclidean_norm(system.rhs.iter().copied());

    Ok(ConstrainedApproximant {
        split,
        interp,
        omega,
        q: BasisPolynomial::new(options.basis, coefficients),
        p,
        residual_2norm,
        mock_residual_2norm,
    })
}

impl ConstrainedApproximant {
    pub fn split(&self) -> &NodeSplit {
        &self.split
    }

    pub fn n(&self) -> usize {
        self.split.n()
    }

    pub fn m(&self) -> usize {
        self.split.m()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Interpolant on the mock-Chebyshev subset.
    pub fn mock_interpolant(&self) -> &BarycentricInterpolant {
        &self.interp
    }

    pub fn omega(&self) -> &ScaledNodePolynomial {
        &self.omega
    }

    /// Regression polynomial multiplying the scaled node polynomial.
    pub fn regression(&self) -> &BasisPolynomial {
        &self.q
    }

    /// Discrete 2-norm of `f - P` over the residual nodes.
    pub fn residual_2norm(&self) -> f64 {
        self.residual_2norm
    }

    /// Discrete 2-norm of `f - P_mock` over the residual nodes.
    pub fn mock_residual_2norm(&self) -> f64 {
        self.mock_residual_2norm
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.interp.eval(t) + self.q.eval(t) * self.omega.eval(t)
    }

    /// Transformed target `(f(t) - P_mock(t)) / omega(t)` at a residual node `t`.
    pub fn fhat_eval(&self, samples: &[f64], t: f64) -> Result<f64> {
        let n = self.n();
        if samples.len() != n + 1 {
            return Err(Error::domain("sample count does not match the fitted grid"));
        }
        let grid = EquispacedGrid::new(n)?;
        let pos = ((t + 1.0) * n as f64 / 2.0).round();
        if !(0.0..=n as f64).contains(&pos) || grid.node(pos as usize) != t {
            return Err(Error::domain(format!("{t} is not a node of the sampled grid")));
        }
        let i = pos as usize;
        if self.split.is_mock(i) {
            return Err(Error::domain(format!(
                "{t} is a mock-Chebyshev node where the node polynomial vanishes"
            )));
        }
        Ok((samples[i] - self.interp.eval(t)) / self.omega.eval(t))
    }
}

/// `(||f - P||_2, ||f - P_mock||_2)` over the residual nodes.
pub fn two_norm_gap(samples: &[f64], n: usize, p: usize) -> Result<(f64, f64)> {
    let a = fit(samples, n, FitOptions::with_p(p))?;
    Ok((a.residual_2norm(), a.mock_residual_2norm()))
}
