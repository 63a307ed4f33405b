//! Sparse finite-difference operators on sample vectors.
//!
//! With `v_m = 1 / (x_m - x_{m-1})`:
//! * `L_inf` is `(M-1) x M`, row `m` maps `z` to the chord slope
//!   `(z_{m+1} - z_m) / (x_{m+1} - x_m)`;
//! * `L_1` is `(M-2) x M`, row `m` maps `z` to the difference of two
//!   consecutive chord slopes, so `||L_1 z||_1` is the second-order total
//!   variation of the canonical interpolant of `z`.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandedSpd;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceOperator {
    rows: usize,
    cols: usize,
    /// `(row, col, value)`, sorted by row, at most three per row.
    entries: Vec<(usize, usize, f64)>,
}

impl DifferenceOperator {
    /// Chord-slope operator `L_inf`. Empty for fewer than two abscissas.
    pub fn linf(xs: &[f64]) -> Self {
        let cols = xs.len();
        let rows = cols.saturating_sub(1);
        let mut entries = Vec::with_capacity(2 * rows);
        for m in 0..rows {
            let v = 1.0 / (xs[m + 1] - xs[m]);
            entries.push((m, m, -v));
            entries.push((m, m + 1, v));
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Second-divided-difference operator `L_1`. Empty for fewer than three
    /// abscissas.
    pub fn l1(xs: &[f64]) -> Self {
        let cols = xs.len();
        let rows = cols.saturating_sub(2);
        let mut entries = Vec::with_capacity(3 * rows);
        for m in 0..rows {
            let v1 = 1.0 / (xs[m + 1] - xs[m]);
            let v2 = 1.0 / (xs[m + 2] - xs[m + 1]);
            entries.push((m, m, -v1));
            entries.push((m, m + 1, v1 + v2));
            entries.push((m, m + 2, -v2));
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Largest `|col - row|` distance between two entries of one row.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0;
        let mut start = 0;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let end = start
                + self.entries[start..]
                    .iter()
                    .take_while(|e| e.0 == row)
                    .count();
            let lo = self.entries[start..end]
                .iter()
                .map(|e| e.1)
                .min()
                .unwrap_or(0);
            let hi = self.entries[start..end]
                .iter()
                .map(|e| e.1)
                .max()
                .unwrap_or(0);
            bw = bw.max(hi - lo);
            start = end;
        }
        bw
    }

    pub fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, z.len())?;
        let mut out = vec![0.0; self.rows];
        for &(r, c, v) in &self.entries {
            out[r] += v * z[c];
        }
        Ok(out)
    }

    pub fn apply_transpose(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.rows, u.len())?;
        let mut out = vec![0.0; self.cols];
        self.accumulate_transpose(u, 1.0, &mut out);
        Ok(out)
    }

    /// `out += scale * L^T u`, no shape checks.
    pub(crate) fn accumulate_transpose(&self, u: &[f64], scale: f64, out: &mut [f64]) {
        for &(r, c, v) in &self.entries {
            out[c] += scale * v * u[r];
        }
    }

    /// `dst += rho * L^T L`. `dst` must have bandwidth at least
    /// [`bandwidth`](Self::bandwidth).
    pub fn add_gram(&self, rho: f64, dst: &mut BandedSpd) {
        let mut start = 0;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let end = start
                + self.entries[start..]
                    .iter()
                    .take_while(|e| e.0 == row)
                    .count();
            let block = &self.entries[start..end];
            for &(_, ci, vi) in block {
                for &(_, cj, vj) in block {
                    if cj <= ci {
                        dst.add(ci, cj, rho * vi * vj);
                    }
                }
            }
            start = end;
        }
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}
