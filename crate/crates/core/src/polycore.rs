//! Polynomial kernels: barycentric Lagrange interpolation, the scaled node
//! polynomial, and Chebyshev/monomial series evaluation.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A product of many factors kept as `mantissa * 2^exp2`, with the exponent
/// carried separately so that long products neither overflow nor underflow.
/// Rescaling is by exact powers of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct WideProduct {
    mantissa: f64,
    exp2: i64,
}

impl WideProduct {
    pub(crate) const ONE: Self = WideProduct { mantissa: 1.0, exp2: 0 };

    #[inline]
    pub(crate) fn mul(&mut self, factor: f64) {
        self.mantissa *= factor;
        let a = self.mantissa.abs();
        if !(1e-150..=1e150).contains(&a) && a != 0.0 && a.is_finite() {
            let e = exponent_of(self.mantissa);
            self.mantissa *= pow2(-e);
            self.exp2 += e;
        }
    }

    pub(crate) fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Natural log of the magnitude; `-inf` for a zero product.
    pub(crate) fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.exp2 as f64 * LN_2
    }

    /// Binary exponent of the magnitude, `floor(log2 |product|)`.
    pub(crate) fn log2_floor(&self) -> i64 {
        self.exp2 + exponent_of(self.mantissa)
    }

    /// The product multiplied by `2^shift`; exact unless the result leaves
    /// the normal range.
    pub(crate) fn shifted(&self, shift: i64) -> f64 {
        let mut v = self.mantissa;
        let mut e = self.exp2 + shift;
        while e != 0 && v != 0.0 && v.is_finite() {
            let step = e.clamp(-1000, 1000);
            v *= pow2(step);
            e -= step;
        }
        v
    }

    /// The product multiplied by `2^extra` for a real `extra`, with the
    /// integer part of the exponent applied exactly.
    pub(crate) fn times_exp2(&self, extra: f64) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let whole = extra.floor();
        let unit = WideProduct {
            mantissa: self.mantissa * (extra - whole).exp2(),
            exp2: self.exp2,
        };
        unit.shifted(whole as i64)
    }

    /// The product multiplied by `exp(-log_scale)`.
    pub(crate) fn scaled(&self, log_scale: f64) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let e = exponent_of(self.mantissa);
        let m = self.mantissa * pow2(-e);
        m * ((self.exp2 + e) as f64 * LN_2 - log_scale).exp()
    }
}

/// Binary exponent of a finite nonzero float (normals and subnormals).
fn exponent_of(x: f64) -> i64 {
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal: normalize first
        exponent_of(x * pow2(64)) - 64
    } else {
        raw - 1023
    }
}

/// `2^e` for `e` in the normal range, built from bits.
fn pow2(e: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// Product of `(x - nodes[j])` over all `j != skip`.
pub(crate) fn node_product(x: f64, nodes: &[f64], skip: Option<usize>) -> WideProduct {
    let mut prod = WideProduct::ONE;
    for (j, &xj) in nodes.iter().enumerate() {
        if Some(j) != skip {
            prod.mul(x - xj);
        }
    }
    prod
}

/// Same product as [`node_product`], accumulated in double-double arithmetic
/// with exact node differences. The result is close to correctly rounded,
/// which matters for interpolation weights on ill-conditioned node sets.
pub(crate) fn node_product_compensated(x: f64, nodes: &[f64], skip: Option<usize>) -> WideProduct {
    let (mut hi, mut lo, mut exp2) = (1.0_f64, 0.0_f64, 0_i64);
    for (j, &xj) in nodes.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        let (dh, dl) = two_sum(x, -xj);
        let h = hi * dh;
        let e = hi.mul_add(dh, -h) + (hi * dl + lo * dh);
        (hi, lo) = fast_two_sum(h, e);
        let a = hi.abs();
        if !(1e-150..=1e150).contains(&a) && a != 0.0 && a.is_finite() {
            let k = exponent_of(hi);
            hi *= pow2(-k);
            lo *= pow2(-k);
            exp2 += k;
        }
    }
    WideProduct {
        mantissa: hi + lo,
        exp2,
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn check_distinct_sorted(nodes: &[f64]) -> Result<()> {
    if nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("nodes must be finite"));
    }
    if let Some(w) = nodes.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::domain(if w[0] == w[1] {
            format!("duplicate node {}", w[0])
        } else {
            "nodes must be sorted increasingly".to_string()
        }));
    }
    Ok(())
}

/// Lagrange interpolant in second barycentric form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycentricInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl BarycentricInterpolant {
    /// Builds the interpolant of `(nodes[i], values[i])`. Nodes are sorted
    /// internally; weights are scaled by a power of two into `[1, 2)` in modulus.
    pub fn fit(nodes: &[f64], values: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("barycentric interpolation needs at least one node"));
        }
        if nodes.len() != values.len() {
            return Err(Error::domain(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        let mut pairs: Vec<(f64, f64)> = nodes.iter().copied().zip(values.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, values): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        check_distinct_sorted(&nodes)?;

        let products: Vec<WideProduct> = (0..nodes.len())
            .map(|i| node_product_compensated(nodes[i], &nodes, Some(i)))
            .collect();
        // w_i = 1 / prod_i, shifted by an exact power of two
        let shift = -products.iter().map(WideProduct::log2_floor).min().unwrap_or(0);
        let mut weights: Vec<f64> = products.iter().map(|p| 1.0 / p.shifted(shift)).collect();
        // normalize by a power of two so that no weight picks up a rounding
        let wmax = weights.iter().fold(0.0_f64, |a, w| a.max(w.abs()));
        let scale = pow2(-exponent_of(wmax));
        for w in &mut weights {
            *w *= scale;
        }
        Ok(Self { nodes, values, weights })
    }

    /// Builds an interpolant from precomputed weights (used by the rational
    /// baselines that share the second-form evaluator).
    pub(crate) fn from_weights(nodes: Vec<f64>, values: Vec<f64>, weights: Vec<f64>) -> Self {
        Self { nodes, values, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Second-form barycentric evaluation; returns the stored value exactly
    /// when `t` equals a node.
    pub fn eval(&self, t: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&x, &f), &w) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = t - x;
            if d == 0.0 {
                return f;
            }
            let c = w / d;
            num += c * f;
            den += c;
        }
        num / den
    }

    /// Same interpolant with all weights multiplied by `factor`.
    pub fn with_scaled_weights(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for w in &mut out.weights {
            *w *= factor;
        }
        out
    }
}

/// Node polynomial `prod (t - x_i)` multiplied by `exp(-log_scale)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledNodePolynomial {
    nodes: Vec<f64>,
    log_scale: f64,
}

impl ScaledNodePolynomial {
    /// Picks `log_scale` as the largest `ln |omega(t)|` over `reference_points`,
    /// so that the scaled polynomial peaks at modulus one there.
    pub fn build(nodes: &[f64], reference_points: &[f64]) -> Result<Self> {
        let mut sorted = nodes.to_vec();
        sorted.sort_by(f64::total_cmp);
        check_distinct_sorted(&sorted)?;
        if reference_points.is_empty() {
            return Err(Error::domain("node polynomial scaling needs reference points"));
        }
        let log_scale = reference_points
            .iter()
            .map(|&t| node_product(t, &sorted, None).ln_abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let log_scale = if log_scale.is_finite() { log_scale } else { 0.0 };
        Ok(Self {
            nodes: sorted,
            log_scale,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Same polynomial multiplied by `sigma > 0`.
    pub fn rescaled(&self, sigma: f64) -> Self {
        Self {
            nodes: self.nodes.clone(),
            log_scale: self.log_scale - sigma.ln(),
        }
    }

    /// Scaled value; exactly zero at the nodes.
    pub fn eval(&self, t: f64) -> f64 {
        node_product(t, &self.nodes, None).scaled(self.log_scale)
    }
}

/// Coefficient basis of a regression polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    #[default]
    Chebyshev,
    Monomial,
}

impl Basis {
    /// Writes the basis functions `phi_0(t) .. phi_p(t)` into `out`.
    pub fn fill_row(self, t: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = t;
        match self {
            Basis::Chebyshev => {
                for k in 2..out.len() {
                    out[k] = 2.0 * t * out[k - 1] - out[k - 2];
                }
            }
            Basis::Monomial => {
                for k in 2..out.len() {
                    out[k] = t * out[k - 1];
                }
            }
        }
    }
}

/// A polynomial of degree at most `p` stored by its coefficients in a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisPolynomial {
    basis: Basis,
    coefficients: Vec<f64>,
}

impl BasisPolynomial {
    pub fn new(basis: Basis, coefficients: Vec<f64>) -> Self {
        Self { basis, coefficients }
    }

    pub fn chebyshev(coefficients: Vec<f64>) -> Self {
        Self::new(Basis::Chebyshev, coefficients)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.basis {
            Basis::Chebyshev => clenshaw(&self.coefficients, t),
            Basis::Monomial => horner(&self.coefficients, t),
        }
    }
}

/// `sum c_k T_k(t)` by the Clenshaw backward recurrence.
pub fn clenshaw(coefficients: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coefficients.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    match coefficients.first() {
        Some(&c0) => t * b1 - b2 + c0,
        None => 0.0,
    }
}

/// `sum c_k t^k` by Horner's rule.
pub fn horner(coefficients: &[f64], t: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}
