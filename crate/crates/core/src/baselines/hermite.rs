//! Hermite-function interpolation in first barycentric form:
//!
//! ```text
//! H(t) = Omega(t) sum_j mu_j f(xi_j) / (t - xi_j)
//! Omega(t) = exp(-(n-1)/2 ln(4) gamma^2 t^2) prod_j (t - xi_j),   mu_j = 1 / Omega'(xi_j)
//! ```
//!
//! The weights are stored relative to their largest modulus, with the common
//! log-magnitude kept apart, so the node product never has to be formed in
//! plain floating point.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

use crate::polycore::{node_product, node_product_compensated, WideProduct};

/// Smallest `log2` ratio between a weight and the largest weight that still
/// leaves the weight representable.
const MIN_LOG2_RATIO: f64 = -1000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteFunctionInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    gamma: f64,
    damping: f64,
    weights: Vec<f64>,
    weight_shift: i64,
}

pub fn hermite_fit(nodes: &[f64], values: &[f64], gamma: f64) -> Result<HermiteFunctionInterpolant> {
    let count = nodes.len();
    if count < 2 || values.len() != count {
        return Err(Error::domain(
            "Hermite-function interpolation needs at least two nodes with values",
        ));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("Hermite-function nodes must be strictly increasing"));
    }
    let damping = (count - 1) as f64 / 2.0 * 4.0_f64.ln() * gamma * gamma;

    // mu_j = exp(damping xi_j^2) / prod_{i != j} (xi_j - xi_i), with the
    // product's binary exponent shifted by a common power of two.
    let products: Vec<WideProduct> = (0..count)
        .map(|j| node_product_compensated(nodes[j], nodes, Some(j)))
        .collect();
    if products.iter().any(|p| p.signum() == 0.0) {
        return Err(Error::numerical("Hermite node product vanished"));
    }
    let log2_mag = |j: usize| damping * nodes[j] * nodes[j] / LN_2 - products[j].log2_floor() as f64;
    let top = (0..count).map(log2_mag).fold(f64::NEG_INFINITY, f64::max);
    if let Some(j) = (0..count).find(|&j| log2_mag(j) - top < MIN_LOG2_RATIO) {
        return Err(Error::numerical(format!(
            "Hermite weight {j} of {count} is below the representable range \
             (practical limit is a few hundred nodes)"
        )));
    }
    // 1 / (2^shift prod_j exp(-damping xi_j^2)); the damping never leaves
    // the exponent, so it cannot overflow on its own
    let shift = top.floor() as i64;
    let weights = products
        .iter()
        .zip(nodes)
        .map(|(p, &x)| 1.0 / p.times_exp2(shift as f64 - damping * x * x / LN_2))
        .collect();
    Ok(HermiteFunctionInterpolant {
        nodes: nodes.to_vec(),
        values: values.to_vec(),
        gamma,
        damping,
        weights,
        weight_shift: shift,
    })
}

impl HermiteFunctionInterpolant {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `mu_j` times a common power of two.
    pub fn relative_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        for ((&x, &f), &w) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = t - x;
            if d == 0.0 {
                return f;
            }
            sum += w * f / d;
        }
        let omega =
            node_product(t, &self.nodes, None).times_exp2(self.weight_shift as f64 - self.damping * t * t / LN_2);
        omega * sum
    }
}
