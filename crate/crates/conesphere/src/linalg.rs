//! Small dense linear algebra: cyclic Jacobi eigenvalues for symmetric
//! matrices, LU factorization for determinants and solves, and the log-linear
//! least squares used by the ideal-simplex regularity check.
//!
//! Matrices here are at most (2N−2)×(2N−2) with N ≤ 5, so simplicity and
//! determinism win over performance.

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `1e-30 * max(1, scale²)` or 60 sweeps pass. Returns eigenvalues in
/// ascending order.
pub fn jacobi_eigenvalues(m: &Mat) -> Vec<f64> {
    let n = m.n;
    let mut a = m.clone();
    let scale = a.max_abs().max(1.0);
    let tol = 1e-30 * scale * scale;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- Jᵀ A J on rows/columns p, q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// LU factorization with partial pivoting.
pub struct Lu {
    n: usize,
    lu: Mat,
    piv: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(m: &Mat) -> Lu {
        let n = m.n;
        let mut lu = m.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for col in 0..n {
            let mut best = col;
            let mut best_val = lu[(col, col)].abs();
            for r in (col + 1)..n {
                if lu[(r, col)].abs() > best_val {
                    best = r;
                    best_val = lu[(r, col)].abs();
                }
            }
            if best != col {
                for c in 0..n {
                    let t = lu[(col, c)];
                    lu[(col, c)] = lu[(best, c)];
                    lu[(best, c)] = t;
                }
                piv.swap(col, best);
                sign = -sign;
            }
            let p = lu[(col, col)];
            if p == 0.0 {
                singular = true;
                continue;
            }
            for r in (col + 1)..n {
                let f = lu[(r, col)] / p;
                lu[(r, col)] = f;
                for c in (col + 1)..n {
                    let sub = f * lu[(col, c)];
                    lu[(r, c)] -= sub;
                }
            }
        }
        Lu {
            n,
            lu,
            piv,
            sign,
            singular,
        }
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let mut d = self.sign;
        for i in 0..self.n {
            d *= self.lu[(i, i)];
        }
        d
    }

    /// Solves A x = b. Returns None when the factorization hit a zero pivot.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut x: Vec<f64> = (0..n).map(|i| b[self.piv[i]]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            let p = self.lu[(i, i)];
            if p == 0.0 {
                return None;
            }
            x[i] /= p;
        }
        Some(x)
    }
}

/// Least squares fit of `y_ij ≈ w_i + w_j` over all pairs i < j.
///
/// Returns (w, rms residual). The normal equations are
/// `((k−2) I + 1·1ᵀ) w = rowsum(y)`, nonsingular for k ≥ 3.
pub fn fit_pairwise_sum(k: usize, y: &dyn Fn(usize, usize) -> f64) -> (Vec<f64>, f64) {
    assert!(k >= 3);
    let mut m = Mat::zeros(k);
    let mut b = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = if i == j { (k - 1) as f64 } else { 1.0 };
        }
        for j in 0..k {
            if j != i {
                b[i] += y(i.min(j), i.max(j));
            }
        }
    }
    let w = Lu::factor(&m)
        .solve(&b)
        .expect("normal equations nonsingular");
    let mut ss = 0.0;
    let mut cnt = 0usize;
    for i in 0..k {
        for j in (i + 1)..k {
            let r = y(i, j) - w[i] - w[j];
            ss += r * r;
            cnt += 1;
        }
    }
    (w, (ss / cnt as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_known_spectrum() {
        // diag(1, -1, ..., -1) rotated by nothing: trivial case.
        let mut m = Mat::zeros(4);
        m[(0, 0)] = 1.0;
        for i in 1..4 {
            m[(i, i)] = -1.0;
        }
        let ev = jacobi_eigenvalues(&m);
        assert!((ev[3] - 1.0).abs() < 1e-12);
        for v in &ev[..3] {
            assert!((v + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_two_by_two_closed_form() {
        // [[a, b], [b, c]] has eigenvalues (a+c)/2 ± sqrt(((a-c)/2)² + b²).
        let (a, b, c) = (0.7, -1.3, 2.1);
        let m = Mat::from_rows(&[vec![a, b], vec![b, c]]);
        let ev = jacobi_eigenvalues(&m);
        let mid = (a + c) / 2.0;
        let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        assert!((ev[0] - (mid - rad)).abs() < 1e-12);
        assert!((ev[1] - (mid + rad)).abs() < 1e-12);
    }

    #[test]
    fn lu_det_and_solve_roundtrip() {
        let m = Mat::from_rows(&[
            vec![2.0, 1.0, 0.5],
            vec![-1.0, 3.0, 2.0],
            vec![0.0, 1.0, -2.0],
        ]);
        let lu = Lu::factor(&m);
        // det by cofactor expansion, done by hand:
        // 2*(3*-2 - 2*1) - 1*(1*-2 - 2*0) + 0.5*(-1*1 - 0)
        let det_manual = 2.0 * (-8.0) + (1.0 * -2.0 - 0.5 * 1.0);
        assert!((lu.det() - det_manual).abs() < 1e-12);
        let x = lu.solve(&[1.0, 2.0, 3.0]).unwrap();
        // Verify A x = b.
        let b0 = 2.0 * x[0] + 1.0 * x[1] + 0.5 * x[2];
        let b1 = -x[0] + 3.0 * x[1] + 2.0 * x[2];
        let b2 = x[1] - 2.0 * x[2];
        assert!((b0 - 1.0).abs() < 1e-12);
        assert!((b1 - 2.0).abs() < 1e-12);
        assert!((b2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pairwise_fit_recovers_exact_model() {
        let w_true = [0.3, -1.1, 0.7, 2.0, -0.4];
        let (w, res) = fit_pairwise_sum(5, &|i, j| w_true[i] + w_true[j]);
        assert!(res < 1e-12);
        for i in 0..5 {
            for j in (i + 1)..5 {
                assert!(((w[i] + w[j]) - (w_true[i] + w_true[j])).abs() < 1e-10);
            }
        }
    }
}
