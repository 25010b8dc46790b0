//! Comparison interpolants: Floater-Hormann rational, Hermite-function and
//! radial basis functions.

pub mod fh;
pub mod hermite;
pub mod rbf;

pub use fh::{fh_best_d, fh_fit, FloaterHormannInterpolant};
pub use hermite::{hermite_fit, HermiteFunctionInterpolant};
pub use rbf::{rbf_fit, rbf_trial_and_error, RbfInterpolant, RbfKernel, RbfParams, TrialOutcome};
