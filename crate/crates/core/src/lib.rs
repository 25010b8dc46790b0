//! Recovery of smooth functions from equispaced samples without the Runge
//! phenomenon.
//!
//! The samples are interpolated on the equispaced nodes closest to a
//! Chebyshev-Lobatto grid (the mock-Chebyshev subset), and the remaining nodes
//! are fitted in the least-squares sense by a correction that vanishes on that
//! subset. See [`cmcls::fit`].
//!
//! ```
//! use mockcheb::{cmcls, grids::EquispacedGrid};
//!
//! let n = 200;
//! let grid = EquispacedGrid::new(n).unwrap();
//! let samples: Vec<f64> = grid.nodes().iter().map(|t| 1.0 / (1.0 + 25.0 * t * t)).collect();
//! let approx = cmcls::fit(&samples, n, Default::default()).unwrap();
//! assert!((approx.evaluate(0.013) - 1.0 / (1.0 + 25.0 * 0.013 * 0.013)).abs() < 1e-3);
//! ```

pub mod baselines;
pub mod bench;
pub mod cmcls;
pub mod error;
pub mod grids;
pub mod lsq;
pub mod metrics;
pub mod polycore;

pub use cmcls::{fit, ConstrainedApproximant, FitOptions};
pub use error::{Error, Result};
