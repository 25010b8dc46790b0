//! Floater-Hormann rational interpolation.
//!
//! `R(t) = sum nu_i(t) p_i(t) / sum nu_i(t)`, where `p_i` interpolates on
//! `x_i..x_{i+d}` and `nu_i(t) = (-1)^i / prod_{j=i}^{i+d} (t - x_j)`. The blend
//! has the barycentric weights
//!
//! ```text
//! w_k = sum_{i in J_k} (-1)^i prod_{j=i, j != k}^{i+d} 1 / (x_k - x_j),
//! J_k = { i : 0 <= i <= n - d, k - d <= i <= k }
//! ```
//!
//! and is evaluated in second barycentric form.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::ErrorGrid;
use crate::polycore::{node_product_compensated, BarycentricInterpolant};

#[derive(Debug, Clone, PartialEq)]
pub struct FloaterHormannInterpolant {
    d: usize,
    inner: BarycentricInterpolant,
}

impl FloaterHormannInterpolant {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nodes(&self) -> &[f64] {
        self.inner.nodes()
    }

    /// Weights normalized to maximum modulus one.
    pub fn weights(&self) -> &[f64] {
        self.inner.weights()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }
}

/// Builds the interpolant with blending degree `d` on increasing `nodes`.
pub fn fh_fit(nodes: &[f64], values: &[f64], d: usize) -> Result<FloaterHormannInterpolant> {
    if nodes.len() != values.len() || nodes.is_empty() {
        return Err(Error::domain(
            "Floater-Hormann needs matching, nonempty nodes and values",
        ));
    }
    let n = nodes.len() - 1;
    if d > n {
        return Err(Error::domain(format!("blending degree d = {d} outside [0, {n}]")));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("Floater-Hormann nodes must be strictly increasing"));
    }

    // Each term as (sign, ln magnitude) so that large d cannot overflow.
    let terms: Vec<Vec<(f64, f64)>> = (0..=n)
        .map(|k| {
            let lo = k.saturating_sub(d);
            let hi = k.min(n - d);
            (lo..=hi)
                .map(|i| {
                    let local = &nodes[i..=i + d];
                    let prod = node_product_compensated(nodes[k], local, Some(k - i));
                    let parity = if i % 2 == 0 { 1.0 } else { -1.0 };
                    (parity * prod.signum(), -prod.ln_abs())
                })
                .collect()
        })
        .collect();
    let top = terms
        .iter()
        .flatten()
        .map(|&(_, l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = terms
        .iter()
        .map(|ts| ts.iter().map(|&(s, l)| s * (l - top).exp()).sum())
        .collect();
    let wmax = weights.iter().fold(0.0_f64, |a, w| a.max(w.abs()));
    if !(wmax > 0.0 && wmax.is_finite()) {
        return Err(Error::numerical("Floater-Hormann weights vanished"));
    }
    for w in &mut weights {
        *w /= wmax;
    }
    Ok(FloaterHormannInterpolant {
        d,
        inner: BarycentricInterpolant::from_weights(nodes.to_vec(), values.to_vec(), weights),
    })
}

/// Sweeps `d = 0..=d_max` and returns the blending degree with the smallest
/// uniform error on `grid` (ties to the smaller `d`).
pub fn fh_best_d(nodes: &[f64], values: &[f64], d_max: usize, grid: &ErrorGrid) -> Result<(usize, f64)> {
    let n = nodes.len().saturating_sub(1);
    if d_max > n {
        return Err(Error::domain(format!("d_max = {d_max} exceeds n = {n}")));
    }
    let errors: Vec<f64> = (0..=d_max)
        .into_par_iter()
        .map(|d| match fh_fit(nodes, values, d) {
            Ok(r) => grid.max_error(|t| r.eval(t)).value,
            Err(_) => f64::INFINITY,
        })
        .collect();
    let mut best = (0, errors[0]);
    for (d, &e) in errors.iter().enumerate().skip(1) {
        if e < best.1 {
            best = (d, e);
        }
    }
    Ok(best)
}
