//! Banded Cholesky factorization for the symmetric positive definite
//! systems produced by grounded graph Laplacians.
//!
//! A rectangular lattice numbered row-major has half-bandwidth equal to the
//! row length, so the factorization costs `O(n * bw^2)` instead of `O(n^3)`.

use crate::error::{Error, Result};

/// Lower band of a symmetric matrix. Row `i` stores columns
/// `i - bw ..= i`, left-padded with zeros near the top rows.
#[derive(Debug, Clone)]
pub struct SymmetricBanded {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymmetricBanded {
    pub fn zeros(n: usize, bw: usize) -> Self {
        SymmetricBanded {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (self.bw + j - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to entry `(i, j)` (and implicitly `(j, i)`).
    ///
    /// Panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// In-place Cholesky `A = L Lᵀ`.
    pub fn cholesky(mut self) -> Result<BandedCholesky> {
        let (n, bw) = (self.n, self.bw);
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(bw));
                let mut sum = self.data[self.idx(i, j)];
                for k in lo..j {
                    sum -= self.data[self.idx(i, k)] * self.data[self.idx(j, k)];
                }
                let k_ij = self.idx(i, j);
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return Err(Error::Solver(format!(
                            "matrix is not positive definite (pivot {i} = {sum:e})"
                        )));
                    }
                    self.data[k_ij] = sum.sqrt();
                } else {
                    self.data[k_ij] = sum / self.data[self.idx(j, j)];
                }
            }
        }
        Ok(BandedCholesky { factor: self })
    }
}

#[derive(Debug, Clone)]
pub struct BandedCholesky {
    factor: SymmetricBanded,
}

impl BandedCholesky {
    pub fn dim(&self) -> usize {
        self.factor.n
    }

    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let l = &self.factor;
        let (n, bw) = (l.n, l.bw);
        assert_eq!(rhs.len(), n, "rhs length must match matrix dimension");
        for i in 0..n {
            let mut sum = rhs[i];
            for k in i.saturating_sub(bw)..i {
                sum -= l.data[l.idx(i, k)] * rhs[k];
            }
            rhs[i] = sum / l.data[l.idx(i, i)];
        }
        for i in (0..n).rev() {
            let mut sum = rhs[i];
            for k in (i + 1)..n.min(i + bw + 1) {
                sum -= l.data[l.idx(k, i)] * rhs[k];
            }
            rhs[i] = sum / l.data[l.idx(i, i)];
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tridiagonal_solve_matches_known_solution() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] has x = [1 1 1].
        let mut a = SymmetricBanded::zeros(3, 1);
        for i in 0..3 {
            a.add(i, i, 2.0);
        }
        a.add(1, 0, -1.0);
        a.add(2, 1, -1.0);
        let x = a.cholesky().unwrap().solve(&[1.0, 0.0, 1.0]);
        for v in x {
            assert_relative_eq!(v, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let mut a = SymmetricBanded::zeros(2, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        a.add(0, 1, 2.0);
        assert!(matches!(a.cholesky(), Err(Error::Solver(_))));
    }

    #[test]
    fn wide_band_agrees_with_dense_reference() {
        // SPD matrix with full band: A = B Bᵀ + n I.
        let n = 6;
        let b: Vec<f64> = (0..n * n).map(|k| ((k * 7 + 3) % 11) as f64 - 5.0).collect();
        let mut a = SymmetricBanded::zeros(n, n - 1);
        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut v: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
                if i == j {
                    v += n as f64;
                }
                a.add(i, j, v);
                dense[(i, j)] = v;
                dense[(j, i)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let x = a.cholesky().unwrap().solve(&rhs);
        let expected = dense.lu().solve(&nalgebra::DVector::from_vec(rhs)).unwrap();
        for i in 0..n {
            assert_relative_eq!(x[i], expected[i], max_relative = 1e-12);
        }
    }
}
