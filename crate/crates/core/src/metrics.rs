//! Uniform-norm error on a dense evaluation grid.

use serde::{Deserialize, Serialize};

/// Number of equispaced evaluation points used for reported errors.
pub const DEFAULT_GRID_SIZE: usize = 10_001;

/// Evaluation points on `[-1, 1]` together with the exact function values.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorGrid {
    points: Vec<f64>,
    exact: Vec<f64>,
}

impl ErrorGrid {
    /// `size` equispaced points on `[-1, 1]` (endpoints included).
    pub fn equispaced(size: usize, f: impl Fn(f64) -> f64) -> Self {
        assert!(size >= 2, "error grid needs at least two points");
        let last = (size - 1) as f64;
        let points: Vec<f64> = (0..size).map(|k| (2.0 * k as f64 - last) / last).collect();
        let exact = points.iter().map(|&t| f(t)).collect();
        Self { points, exact }
    }

    pub fn from_values(points: Vec<f64>, exact: Vec<f64>) -> Self {
        assert_eq!(points.len(), exact.len());
        Self { points, exact }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn exact(&self) -> &[f64] {
        &self.exact
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Maximum absolute deviation of `approx` from the exact values.
    pub fn max_error(&self, approx: impl Fn(f64) -> f64) -> UniformError {
        let mut value = 0.0_f64;
        for (&t, &f) in self.points.iter().zip(&self.exact) {
            let a = approx(t);
            if !a.is_finite() {
                return UniformError {
                    value: f64::INFINITY,
                    non_finite: true,
                };
            }
            value = value.max((a - f).abs());
        }
        UniformError {
            value,
            non_finite: false,
        }
    }
}

/// Uniform error; `non_finite` marks an approximant that produced inf/NaN,
/// in which case `value` is `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformError {
    pub value: f64,
    pub non_finite: bool,
}
