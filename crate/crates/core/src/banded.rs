//! Symmetric positive-definite banded matrices and their Cholesky factor.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Lower band of a symmetric `n x n` matrix with half-bandwidth `bw`.
/// Row `i` stores `A[i][i - bw ..= i]`; out-of-range slots stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSpd {
    n: usize,
    bw: usize,
    lower: Vec<f64>,
}

impl BandedSpd {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            lower: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn identity(n: usize, bw: usize) -> Self {
        let mut m = Self::zeros(n, bw);
        for i in 0..n {
            m.add(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (self.bw + j - i)
    }

    /// `A[i][j] += v` (and its mirror). Requires `i - bw <= j <= i`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j <= i && i - j <= self.bw, "entry ({i},{j}) outside band");
        let s = self.slot(i, j);
        self.lower[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        if i - j > self.bw {
            0.0
        } else {
            self.lower[self.slot(i, j)]
        }
    }

    /// Banded Cholesky `A = L L^T`. Fails if a pivot is not positive.
    pub fn factor(&self) -> Result<BandedCholesky> {
        let mut l = self.clone();
        let (n, bw) = (self.n, self.bw);
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let mut sum = l.lower[l.slot(i, j)];
                let lo = lo_i.max(j.saturating_sub(bw));
                for k in lo..j {
                    sum -= l.lower[l.slot(i, k)] * l.lower[l.slot(j, k)];
                }
                let s = l.slot(i, j);
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(Error::InvalidParameter("matrix is not positive definite"));
                    }
                    l.lower[s] = libm::sqrt(sum);
                } else {
                    l.lower[s] = sum / l.lower[l.slot(j, j)];
                }
            }
        }
        Ok(BandedCholesky { l })
    }
}

#[derive(Debug, Clone)]
pub struct BandedCholesky {
    l: BandedSpd,
}

impl BandedCholesky {
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let l = &self.l;
        let (n, bw) = (l.n, l.bw);
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: x.len(),
            });
        }
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= l.lower[l.slot(i, k)] * x[k];
            }
            x[i] = s / l.lower[l.slot(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n.min(i + bw + 1) {
                s -= l.lower[l.slot(k, i)] * x[k];
            }
            x[i] = s / l.lower[l.slot(i, i)];
        }
        Ok(())
    }
}
