//! One-sided Jacobi SVD for the small dense matrices behind every rank test.
//!
//! nalgebra's bidiagonal SVD occasionally returns factors that do not
//! reconstruct rank-deficient inputs (errors around 1e-3 were observed on
//! 5x4 matrices of rank 2), which is fatal for rank decisions at 1e-9. The
//! Jacobi method is slower but delivers singular values to high relative
//! accuracy, and the matrices here have at most a few dozen entries.

use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 80;

/// A = U diag(s) V^T with `s` descending, U m x k, V n x k, k = min(m, n).
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl Svd {
    pub fn new(a: &DMatrix<f64>) -> Svd {
        if a.nrows() < a.ncols() {
            let t = Svd::tall(&a.transpose());
            return Svd {
                u: t.v,
                s: t.s,
                v: t.u,
            };
        }
        Svd::tall(a)
    }

    fn tall(a: &DMatrix<f64>) -> Svd {
        let (m, n) = a.shape();
        let mut w = a.clone();
        let mut v = DMatrix::<f64>::identity(n, n);
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                    for r in 0..m {
                        alpha += w[(r, p)] * w[(r, p)];
                        beta += w[(r, q)] * w[(r, q)];
                        gamma += w[(r, p)] * w[(r, q)];
                    }
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for r in 0..m {
                        let (x, y) = (w[(r, p)], w[(r, q)]);
                        w[(r, p)] = c * x - s * y;
                        w[(r, q)] = s * x + c * y;
                    }
                    for r in 0..n {
                        let (x, y) = (v[(r, p)], v[(r, q)]);
                        v[(r, p)] = c * x - s * y;
                        v[(r, q)] = s * x + c * y;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
        let mut u = DMatrix::zeros(m, n);
        let mut vs = DMatrix::zeros(n, n);
        let mut s = Vec::with_capacity(n);
        for (k, &c) in order.iter().enumerate() {
            s.push(norms[c]);
            if norms[c] > 0.0 {
                u.set_column(k, &(w.column(c) / norms[c]));
            }
            vs.set_column(k, &v.column(c));
        }
        Svd { u, s, v: vs }
    }

    /// Minimum-norm least-squares solution, singular values below `eps`
    /// treated as zero.
    pub fn solve(&self, b: &DVector<f64>, eps: f64) -> DVector<f64> {
        let mut x = DVector::zeros(self.v.nrows());
        for (k, &sk) in self.s.iter().enumerate() {
            if sk > eps {
                let coef = self.u.column(k).dot(b) / sk;
                x += self.v.column(k) * coef;
            }
        }
        x
    }
}
