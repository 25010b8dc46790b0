//! Parsing of the `a:b[:step]` range syntax used by `--n`, `--p` and
//! `--eps-grid`.

use mockcheb::baselines::rbf::log_spaced;
use mockcheb::bench::log_spaced_n;

use crate::CliError;

/// Number of `n` values an n-sweep samples when no step is given.
pub const DEFAULT_N_SAMPLES: usize = 40;

/// An inclusive integer range, possibly a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
    pub step: Option<usize>,
}

impl IntRange {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let int = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("'{p}' in range '{s}' is not a non-negative integer")))
        };
        let range = match parts.as_slice() {
            [a] => {
                let v = int(a)?;
                IntRange {
                    lo: v,
                    hi: v,
                    step: None,
                }
            }
            [a, b] => IntRange {
                lo: int(a)?,
                hi: int(b)?,
                step: None,
            },
            [a, b, c] => IntRange {
                lo: int(a)?,
                hi: int(b)?,
                step: Some(int(c)?),
            },
            _ => {
                return Err(CliError::Usage(format!(
                    "range '{s}' must look like a, a:b or a:b:step"
                )))
            }
        };
        if range.lo > range.hi {
            return Err(CliError::Usage(format!("range '{s}' is empty")));
        }
        if range.step == Some(0) {
            return Err(CliError::Usage(format!("range '{s}' has a zero step")));
        }
        Ok(range)
    }

    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }

    /// Every value from `lo` to `hi` by `step` (default 1).
    pub fn linear(&self) -> Vec<usize> {
        (self.lo..=self.hi).step_by(self.step.unwrap_or(1)).collect()
    }

    /// Sampling for n-sweeps: the explicit step if given, otherwise
    /// [`DEFAULT_N_SAMPLES`] logarithmically spaced values.
    pub fn sweep_values(&self) -> Vec<usize> {
        match self.step {
            Some(_) => self.linear(),
            None => log_spaced_n(self.lo, self.hi, DEFAULT_N_SAMPLES),
        }
    }
}

/// `a:b:k` as `k` logarithmically spaced shape parameters in `[a, b]`.
pub fn parse_eps_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--eps-grid '{s}' must be lo:hi:count with 0 < lo <= hi"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, k] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    let count: usize = k.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) || count == 0 {
        return Err(bad());
    }
    Ok(log_spaced(lo, hi, count))
}
