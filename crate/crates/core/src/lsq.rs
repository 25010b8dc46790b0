//! Dense least squares by Householder orthogonal factorization.

use crate::error::{Error, Result};

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from row slices.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.as_ref().iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate().take(self.cols) {
            for (yi, aij) in y.iter_mut().zip(self.column(j)) {
                *yi += aij * xj;
            }
        }
        y
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[j * self.rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[j * self.rows + i]
    }
}

/// Solves `min ||A x - b||_2` for a full-column-rank `A` with `rows >= cols`.
///
/// Householder reflections with column pivoting reduce `A P` to upper
/// triangular `R` while being applied to `b`. Pivoting on the largest
/// remaining column norm makes `|R[k,k]|` non-increasing, so a diagonal that
/// falls below `rows * eps * |R[0,0]|` reveals numerical rank deficiency,
/// which is reported as an error rather than solved into huge coefficients.
pub fn householder_lstsq(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    if b.len() != rows {
        return Err(Error::domain(format!(
            "right-hand side has {} entries for {rows} rows",
            b.len()
        )));
    }
    if rows < cols {
        return Err(Error::domain(format!(
            "underdetermined system: {rows} rows, {cols} columns"
        )));
    }
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let mut v = vec![0.0; rows];
    let mut perm: Vec<usize> = (0..cols).collect();

    for k in 0..cols {
        let tail_norm = |r: &DenseMatrix, j: usize| r.column(j)[k..].iter().fold(0.0_f64, |acc, x| acc.hypot(*x));
        // first maximum, so ties keep the natural column order
        let (pivot, norm) =
            (k..cols)
                .map(|j| (j, tail_norm(&r, j)))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if norm == 0.0 {
            return Err(Error::numerical(format!("column {} is rank deficient", perm[k])));
        }
        if pivot != k {
            for i in 0..rows {
                r.data.swap(k * rows + i, pivot * rows + i);
            }
            perm.swap(k, pivot);
        }
        let col = &r.column(k)[k..];
        let alpha = if col[0] > 0.0 { -norm } else { norm };
        let len = rows - k;
        v[..len].copy_from_slice(col);
        v[0] -= alpha;
        let vnorm2: f64 = v[..len].iter().map(|x| x * x).sum();

        if vnorm2 > 0.0 {
            for j in k..cols {
                let cj = &mut r.column_mut(j)[k..];
                let dot: f64 = v[..len].iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
                let s = 2.0 * dot / vnorm2;
                for (c, vi) in cj.iter_mut().zip(&v[..len]) {
                    *c -= s * vi;
                }
            }
            let tail = &mut qtb[k..];
            let dot: f64 = v[..len].iter().zip(tail.iter()).map(|(a, b)| a * b).sum();
            let s = 2.0 * dot / vnorm2;
            for (c, vi) in tail.iter_mut().zip(&v[..len]) {
                *c -= s * vi;
            }
        }
        // exact zeros below the diagonal
        r.column_mut(k)[k] = alpha;
        for x in &mut r.column_mut(k)[k + 1..] {
            *x = 0.0;
        }
    }

    let lead = r[(0, 0)].abs();
    let tol = lead * f64::EPSILON * rows as f64;
    if let Some(k) = (0..cols).find(|&k| r[(k, k)].abs() <= tol) {
        return Err(Error::numerical(format!(
            "numerically rank deficient: rank {k} of {cols} columns, |R[{k},{k}]| = {:e} vs {:e}",
            r[(k, k)].abs(),
            lead
        )));
    }
    let mut y = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = qtb[k];
        for j in k + 1..cols {
            s -= r[(k, j)] * y[j];
        }
        y[k] = s / r[(k, k)];
    }
    let mut x = vec![0.0; cols];
    for (k, &j) in perm.iter().enumerate() {
        x[j] = y[k];
    }
    Ok(x)
}
