//! Equispaced and Chebyshev-Lobatto grids, the two degree rules, and the
//! mock-Chebyshev split of an equispaced grid.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest grid for which the mock-Chebyshev split keeps its spacing guarantees.
pub const MIN_SUBINTERVALS: usize = 10;

const DEGREE_CONSTANT: f64 = PI / SQRT_2;

fn check_grid_size(n: usize) -> Result<()> {
    if n < MIN_SUBINTERVALS {
        return Err(Error::domain(format!(
            "grid too small for mock-Chebyshev extraction: n = {n}, need n >= {MIN_SUBINTERVALS}"
        )));
    }
    Ok(())
}

/// Degree `m` of the mock-Chebyshev interpolant on `n + 1` equispaced nodes.
pub fn mock_degree(n: usize) -> Result<usize> {
    check_grid_size(n)?;
    Ok((DEGREE_CONSTANT * (n as f64).sqrt()).floor() as usize)
}

/// Default degree `p` of the simultaneous regression polynomial.
pub fn regression_degree(n: usize) -> Result<usize> {
    check_grid_size(n)?;
    Ok((DEGREE_CONSTANT * (n as f64 / 6.0).sqrt()).floor() as usize)
}

/// `n + 1` equispaced nodes on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquispacedGrid {
    n: usize,
    nodes: Vec<f64>,
}

impl EquispacedGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("equispaced grid needs at least one subinterval"));
        }
        // (2i - n) / n is exactly antisymmetric and hits both endpoints exactly.
        let nodes = (0..=n).map(|i| (2.0 * i as f64 - n as f64) / n as f64).collect();
        Ok(Self { n, nodes })
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    /// Spacing `h = 2 / n`.
    pub fn spacing(&self) -> f64 {
        2.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Chebyshev-Lobatto nodes `-cos(pi j / m)`, `j = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevLobattoGrid {
    m: usize,
    nodes: Vec<f64>,
}

impl ChebyshevLobattoGrid {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

pub fn chebyshev_lobatto(m: usize) -> Result<ChebyshevLobattoGrid> {
    if m == 0 {
        return Err(Error::domain("Chebyshev-Lobatto grid needs m >= 1"));
    }
    // -cos(pi j / m) = sin(pi (2j - m) / (2m)); the sine form is exactly odd.
    let nodes = (0..=m)
        .map(|j| {
            let k = 2 * j as i64 - m as i64;
            (FRAC_PI_2 * k as f64 / m as f64).sin()
        })
        .collect();
    Ok(ChebyshevLobattoGrid { m, nodes })
}

/// Partition of an equispaced grid into the mock-Chebyshev subset and the
/// residual nodes. Both index lists are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSplit {
    n: usize,
    m: usize,
    mock: Vec<usize>,
    residual: Vec<usize>,
}

impl NodeSplit {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Indices of the `m + 1` interpolation nodes.
    pub fn mock(&self) -> &[usize] {
        &self.mock
    }

    /// Indices of the `n - m` regression nodes.
    pub fn residual(&self) -> &[usize] {
        &self.residual
    }

    pub fn mock_nodes(&self, grid: &EquispacedGrid) -> Vec<f64> {
        self.mock.iter().map(|&i| grid.node(i)).collect()
    }

    pub fn residual_nodes(&self, grid: &EquispacedGrid) -> Vec<f64> {
        self.residual.iter().map(|&i| grid.node(i)).collect()
    }

    pub fn is_mock(&self, i: usize) -> bool {
        self.mock.binary_search(&i).is_ok()
    }
}

/// Distances closer than this are treated as an exact tie.
const TIE_TOLERANCE: f64 = 8.0 * f64::EPSILON;

/// Index of the equispaced node nearest to `x`; ties go to the smaller index.
///
/// Exact ties are common (the node 0 for odd `n` and even `m`, the nodes
/// +-1/2 when `n = 2 mod 4` and `3 | m`), so the comparison must not depend
/// on how the Chebyshev-Lobatto node was rounded.
fn nearest_index(grid: &EquispacedGrid, x: f64) -> usize {
    let n = grid.n();
    let pos = (x + 1.0) * n as f64 / 2.0;
    let lo = (pos.floor().max(0.0) as usize).min(n);
    let hi = (lo + 1).min(n);
    let d_lo = (grid.node(lo) - x).abs();
    let d_hi = (grid.node(hi) - x).abs();
    if d_hi < d_lo - TIE_TOLERANCE {
        hi
    } else {
        lo
    }
}

/// Where two neighbouring Chebyshev-Lobatto nodes pick the same equispaced
/// node, the one farther from its endpoint moves one node inward.
///
/// This happens only next to the endpoints, for the `n` at which
/// `1 - cos(pi / m)` falls just below `1 / n` (e.g. n = 10, 13, 52, 993).
fn resolve_endpoint_collisions(cl: &[f64], mock: &mut [usize]) {
    let m = mock.len() - 1;
    for j in 1..=m {
        if cl[j] <= 0.0 && mock[j] <= mock[j - 1] {
            mock[j] = mock[j - 1] + 1;
        }
    }
    for j in (0..m).rev() {
        if cl[j] >= 0.0 && mock[j] >= mock[j + 1] {
            mock[j] = mock[j + 1] - 1;
        }
    }
}

/// Selects, for every Chebyshev-Lobatto node of degree `mock_degree(n)`, the
/// nearest equispaced node, and returns the selection with its complement.
pub fn extract_mock_subset(grid: &EquispacedGrid) -> Result<NodeSplit> {
    let n = grid.n();
    let m = mock_degree(n)?;
    let cl = chebyshev_lobatto(m)?;

    let x = cl.nodes();
    let mut mock: Vec<usize> = x.iter().map(|&x| nearest_index(grid, x)).collect();
    resolve_endpoint_collisions(x, &mut mock);
    if let Some(w) = mock.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Invariant(format!(
            "equispaced node {} selected twice for n = {n}",
            w[1]
        )));
    }
    debug_assert_eq!(mock.first(), Some(&0));
    debug_assert_eq!(mock.last(), Some(&n));

    let mut residual = Vec::with_capacity(n - m);
    let mut next = mock.iter().peekable();
    for i in 0..=n {
        if next.peek() == Some(&&i) {
            next.next();
        } else {
            residual.push(i);
        }
    }
    Ok(NodeSplit { n, m, mock, residual })
}
