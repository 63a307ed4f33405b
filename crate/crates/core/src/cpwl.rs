//! Continuous piecewise-linear functions in canonical form
//! `f(x) = c0 + c1 x + sum_k a_k ReLU(x - tau_k)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tol;

/// Sorted samples `(x_m, y_m)` with strictly increasing abscissas.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl DataSet {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                found: ys.len(),
            });
        }
        if xs.is_empty() {
            return Err(Error::TooFewPoints {
                needed: 1,
                found: 0,
            });
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing { index: i + 1 });
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Same abscissas, new ordinates.
    pub fn with_ys(&self, ys: Vec<f64>) -> Result<Self> {
        Self::new(self.xs.clone(), ys)
    }

    /// Chord slopes `(y_{m+1} - y_m) / (x_{m+1} - x_m)`.
    pub fn chord_slopes(&self) -> Vec<f64> {
        chord_slopes(&self.xs, &self.ys)
    }
}

pub(crate) fn chord_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect()
}

/// A finite-knot CPWL function on the real line.
///
/// Knots are strictly increasing and every slope change is nonzero; the
/// constructor sorts, merges coincident knots and drops vanishing
/// coefficients so that this holds.
#[derive(Debug, Clone, PartialEq)]
pub struct CpwlFunction {
    c0: f64,
    c1: f64,
    knots: Vec<f64>,
    coeffs: Vec<f64>,
}

/// The three quantities of the Lipschitz / TV² bound and its slack
/// `tv2 + min_slope - lipschitz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipTvBound {
    pub lipschitz: f64,
    pub min_slope: f64,
    pub tv2: f64,
    pub slack: f64,
}

impl CpwlFunction {
    pub fn new(c0: f64, c1: f64, knots: Vec<f64>, coeffs: Vec<f64>) -> Result<Self> {
        if knots.len() != coeffs.len() {
            return Err(Error::LengthMismatch {
                expected: knots.len(),
                found: coeffs.len(),
            });
        }
        if !c0.is_finite()
            || !c1.is_finite()
            || knots.iter().chain(coeffs.iter()).any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let mut pairs: Vec<(f64, f64)> = knots.into_iter().zip(coeffs).collect();
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let mut knots = Vec::with_capacity(pairs.len());
        let mut coeffs: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut last = f64::NEG_INFINITY;
        for (t, a) in pairs {
            if t - last <= tol::KNOT_MERGE {
                *coeffs.last_mut().expect("a previous knot exists") += a;
            } else {
                knots.push(t);
                coeffs.push(a);
            }
            last = t;
        }
        let (knots, coeffs) = knots
            .into_iter()
            .zip(coeffs)
            .filter(|(_, a)| a.abs() > tol::COEFF_DROP)
            .unzip();
        Ok(Self {
            c0,
            c1,
            knots,
            coeffs,
        })
    }

    pub fn affine(c0: f64, c1: f64) -> Self {
        Self {
            c0,
            c1,
            knots: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn num_knots(&self) -> usize {
        self.knots.len()
    }

    pub fn num_regions(&self) -> usize {
        self.knots.len() + 1
    }

    /// Evaluates the canonical sum. NaN in, NaN out.
    pub fn eval(&self, x: f64) -> f64 {
        self.knots
            .iter()
            .zip(&self.coeffs)
            .fold(self.c0 + self.c1 * x, |acc, (&t, &a)| {
                acc + a * (x - t).max(0.0)
            })
    }

    /// Like [`eval`](Self::eval) but rejects non-finite input.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(self.eval(x))
    }

    /// Slopes of the `K + 1` linear regions, left to right.
    pub fn region_slopes(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.knots.len() + 1);
        let mut s = self.c1;
        out.push(s);
        for &a in &self.coeffs {
            s += a;
            out.push(s);
        }
        out
    }

    /// Largest absolute region slope.
    pub fn lipschitz_constant(&self) -> f64 {
        self.region_slopes()
            .into_iter()
            .fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Infimum of `|f(x1) - f(x2)| / |x1 - x2|`: zero unless every region
    /// slope has the same strict sign, otherwise the smallest absolute slope.
    pub fn min_slope(&self) -> f64 {
        let slopes = self.region_slopes();
        let all_pos = slopes.iter().all(|&s| s > 0.0);
        let all_neg = slopes.iter().all(|&s| s < 0.0);
        if !(all_pos || all_neg) {
            return 0.0;
        }
        slopes
            .into_iter()
            .fold(f64::INFINITY, |m, s| m.min(s.abs()))
    }

    /// Second-order total variation, `sum_k |a_k|`.
    pub fn tv2(&self) -> f64 {
        self.coeffs.iter().map(|a| a.abs()).sum()
    }

    pub fn check_lip_tv_bound(&self) -> LipTvBound {
        let lipschitz = self.lipschitz_constant();
        let min_slope = self.min_slope();
        let tv2 = self.tv2();
        LipTvBound {
            lipschitz,
            min_slope,
            tv2,
            slack: tv2 + min_slope - lipschitz,
        }
    }

    /// Values at the knots, `(tau_k, f(tau_k))`.
    pub fn breakpoints(&self) -> Vec<(f64, f64)> {
        self.knots.iter().map(|&t| (t, self.eval(t))).collect()
    }

    /// Number of linear regions, ignoring knots whose slope change is below the
    /// collinearity threshold used by the sparsifier.
    pub fn count_regions(&self) -> usize {
        let slopes = self.region_slopes();
        1 + slopes
            .windows(2)
            .filter(|w| !tol::is_collinear(w[0], w[1], 0.0))
            .count()
    }
}

/// The CPWL interpolant with knots only at interior data abscissas, extended
/// by its boundary slopes outside `[x_1, x_M]`.
pub fn canonical_interpolant(data: &DataSet) -> Result<CpwlFunction> {
    interpolant_from_slices(data.xs(), data.ys())
}

pub(crate) fn interpolant_from_slices(xs: &[f64], zs: &[f64]) -> Result<CpwlFunction> {
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: xs.len(),
        });
    }
    let slopes = chord_slopes(xs, zs);
    let c1 = slopes[0];
    let c0 = zs[0] - c1 * xs[0];
    let knots = xs[1..xs.len() - 1].to_vec();
    let coeffs = slopes.windows(2).map(|w| w[1] - w[0]).collect();
    CpwlFunction::new(c0, c1, knots, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn shifted_relu() -> CpwlFunction {
        CpwlFunction::new(0.0, 0.0, vec![0.5], vec![1.0]).unwrap()
    }

    fn bump() -> CpwlFunction {
        CpwlFunction::new(0.0, 0.0, vec![1.0, 2.0], vec![2.0, -2.0]).unwrap()
    }

    #[test]
    fn dataset_rejects_bad_input() {
        assert_eq!(
            DataSet::new(vec![0.0, 0.0], vec![1.0, 2.0]),
            Err(Error::NotIncreasing { index: 1 })
        );
        assert_eq!(
            DataSet::new(vec![0.0, 1.0], vec![1.0]),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            DataSet::new(vec![0.0], vec![f64::NAN]),
            Err(Error::NonFinite)
        );
        assert!(DataSet::new(vec![], vec![]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(CpwlFunction::affine(0.0, 1.0).eval(3.0), 3.0);
        assert_eq!(shifted_relu().eval(0.25), 0.0);
        assert_eq!(shifted_relu().eval(0.75), 0.25);
        assert_eq!(bump().eval(3.0), 2.0);
        assert_eq!(bump().evaluate(f64::INFINITY), Err(Error::NonFinite));
    }

    #[test]
    fn construction_normalizes() {
        let f = CpwlFunction::new(
            1.0,
            0.0,
            vec![2.0, 1.0, 1.0 + 1e-13, 3.0],
            vec![1.0, 2.0, -2.0, 1e-13],
        )
        .unwrap();
        assert_eq!(f.knots(), &[2.0]);
        assert_eq!(f.coeffs(), &[1.0]);
        assert_eq!(f.num_regions(), 2);
    }

    #[test]
    fn lipschitz_and_tv2_examples() {
        assert_eq!(CpwlFunction::affine(4.0, 0.0).lipschitz_constant(), 0.0);
        assert_eq!(shifted_relu().lipschitz_constant(), 1.0);
        assert_eq!(bump().lipschitz_constant(), 2.0);
        assert_eq!(bump().region_slopes(), vec![0.0, 2.0, 0.0]);

        assert_eq!(CpwlFunction::affine(1.0, -3.0).tv2(), 0.0);
        assert_eq!(shifted_relu().tv2(), 1.0);
        assert_eq!(bump().tv2(), 4.0);
    }

    #[test]
    fn min_slope_examples() {
        let increasing = CpwlFunction::new(0.0, 1.0, vec![0.0], vec![2.0]).unwrap();
        assert_eq!(increasing.min_slope(), 1.0);
        let tent = CpwlFunction::new(0.0, 1.0, vec![0.0], vec![-2.0]).unwrap();
        assert_eq!(tent.min_slope(), 0.0);
        assert_eq!(CpwlFunction::affine(2.0, 0.0).min_slope(), 0.0);
        assert_eq!(shifted_relu().min_slope(), 0.0);
    }

    #[test]
    fn lip_tv_bound_examples() {
        let convex = CpwlFunction::new(0.0, 1.0, vec![0.0], vec![2.0]).unwrap();
        let b = convex.check_lip_tv_bound();
        assert_eq!(
            (b.lipschitz, b.min_slope, b.tv2, b.slack),
            (3.0, 1.0, 2.0, 0.0)
        );

        let tent = CpwlFunction::new(0.0, 1.0, vec![0.0], vec![-2.0]).unwrap();
        let b = tent.check_lip_tv_bound();
        assert_eq!(
            (b.lipschitz, b.min_slope, b.tv2, b.slack),
            (1.0, 0.0, 2.0, 1.0)
        );

        let b = CpwlFunction::affine(3.0, -2.5).check_lip_tv_bound();
        assert_eq!(
            (b.lipschitz, b.min_slope, b.tv2, b.slack),
            (2.5, 2.5, 0.0, 0.0)
        );
    }

    #[test]
    fn canonical_interpolant_examples() {
        let line =
            canonical_interpolant(&DataSet::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap()).unwrap();
        assert_eq!((line.c0(), line.c1(), line.num_knots()), (0.0, 1.0, 0));

        let data = DataSet::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.0, 2.0, 2.0]).unwrap();
        let f = canonical_interpolant(&data).unwrap();
        assert_eq!(f.c1(), 0.0);
        assert_eq!(f.knots(), &[1.0, 2.0]);
        assert_eq!(f.coeffs(), &[2.0, -2.0]);

        let collinear = DataSet::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]).unwrap();
        let f = canonical_interpolant(&collinear).unwrap();
        assert_eq!((f.c0(), f.c1(), f.num_knots()), (0.0, 1.0, 0));

        let single = DataSet::new(vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(
            canonical_interpolant(&single),
            Err(Error::TooFewPoints {
                needed: 2,
                found: 1
            })
        ));
    }
}
