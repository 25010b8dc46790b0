#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn equispaced(n: usize) -> Vec<f64> {
    (0..=n).map(|i| (2.0 * i as f64 - n as f64) / n as f64).collect()
}

/// Newton divided-difference interpolation, evaluated by nested
/// multiplication. Independent of the barycentric code under test.
pub fn newton_interpolate(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let mut coef = ys.to_vec();
    for j in 1..xs.len() {
        for i in (j..xs.len()).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut acc = *coef.last().unwrap();
    for i in (0..xs.len() - 1).rev() {
        acc = acc * (t - xs[i]) + coef[i];
    }
    acc
}

/// `T_k(t)` from the trigonometric definition.
pub fn chebyshev_t(k: usize, t: f64) -> f64 {
    (k as f64 * t.clamp(-1.0, 1.0).acos()).cos()
}

/// A random analytic function on `[-1, 1]`: a few damped oscillations plus a
/// Runge-type bump with a random pole distance.
#[derive(Debug, Clone)]
pub struct RandomSmooth {
    waves: Vec<(f64, f64, f64)>,
    bump: (f64, f64, f64),
}

impl RandomSmooth {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let waves = (0..3)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.5..8.0),
                    rng.gen_range(0.0..6.3),
                )
            })
            .collect();
        let bump = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(1.0..30.0),
        );
        RandomSmooth { waves, bump }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let waves: f64 = self.waves.iter().map(|&(a, k, phase)| a * (k * t + phase).cos()).sum();
        let (a, c, w) = self.bump;
        waves + a / (1.0 + w * (t - c) * (t - c))
    }
}

pub mod exact {
    //! Constrained least squares in exact rational arithmetic: Lagrange
    //! interpolation on the mock nodes, the monic node polynomial, and the
    //! normal equations of the Chebyshev regression solved by elimination.

    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    pub type Q = BigRational;

    pub fn q(x: f64) -> Q {
        Q::from_float(x).expect("finite")
    }

    pub fn to_f64(x: &Q) -> f64 {
        x.to_f64().expect("representable")
    }

    pub struct ExactFit {
        mock_x: Vec<Q>,
        mock_y: Vec<Q>,
        pub coefficients: Vec<Q>,
    }

    fn lagrange(xs: &[Q], ys: &[Q], t: &Q) -> Q {
        let mut sum = Q::zero();
        for (j, (xj, yj)) in xs.iter().zip(ys).enumerate() {
            let mut l = Q::one();
            for (k, xk) in xs.iter().enumerate() {
                if k != j {
                    l *= (t - xk) / (xj - xk);
                }
            }
            sum += l * yj;
        }
        sum
    }

    fn omega(xs: &[Q], t: &Q) -> Q {
        xs.iter().fold(Q::one(), |acc, x| acc * (t - x))
    }

    fn chebyshev_row(t: &Q, count: usize) -> Vec<Q> {
        let mut row = vec![Q::one(), t.clone()];
        let two = Q::from_integer(BigInt::from(2));
        while row.len() < count {
            let k = row.len();
            let next = &two * t * &row[k - 1] - &row[k - 2];
            row.push(next);
        }
        row.truncate(count);
        row
    }

    fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Vec<Q> {
        let k = b.len();
        for col in 0..k {
            let pivot = (col..k).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
            a.swap(col, pivot);
            b.swap(col, pivot);
            for r in col + 1..k {
                let factor = &a[r][col] / &a[col][col];
                for c in col..k {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
        let mut x = vec![Q::zero(); k];
        for r in (0..k).rev() {
            let mut acc = b[r].clone();
            for c in r + 1..k {
                acc -= &a[r][c] * &x[c];
            }
            x[r] = acc / &a[r][r];
        }
        x
    }

    /// Fits data `(x_i, y_i)` given the mock and residual index sets.
    pub fn fit(nodes: &[f64], values: &[f64], mock: &[usize], residual: &[usize], p: usize) -> ExactFit {
        let mock_x: Vec<Q> = mock.iter().map(|&i| q(nodes[i])).collect();
        let mock_y: Vec<Q> = mock.iter().map(|&i| q(values[i])).collect();
        let rows: Vec<(Vec<Q>, Q)> = residual
            .iter()
            .map(|&i| {
                let t = q(nodes[i]);
                let w = omega(&mock_x, &t);
                let row = chebyshev_row(&t, p + 1).into_iter().map(|c| c * &w).collect();
                (row, q(values[i]) - lagrange(&mock_x, &mock_y, &t))
            })
            .collect();
        let k = p + 1;
        let mut ata = vec![vec![Q::zero(); k]; k];
        let mut atb = vec![Q::zero(); k];
        for (row, rhs) in &rows {
            for r in 0..k {
                for c in 0..k {
                    ata[r][c] += &row[r] * &row[c];
                }
                atb[r] += &row[r] * rhs;
            }
        }
        ExactFit {
            coefficients: solve(ata, atb),
            mock_x,
            mock_y,
        }
    }

    impl ExactFit {
        pub fn eval(&self, t: f64) -> f64 {
            let t = q(t);
            let base = lagrange(&self.mock_x, &self.mock_y, &t);
            let w = omega(&self.mock_x, &t);
            let row = chebyshev_row(&t, self.coefficients.len());
            let corr = row
                .iter()
                .zip(&self.coefficients)
                .fold(Q::zero(), |acc, (a, b)| acc + a * b);
            to_f64(&(base + corr * w))
        }
    }
}
