//! ADMM solvers for the two reduced problems over the sample vector `z`:
//!
//! * Lipschitz-regularized: `min_z F(z) + lambda ||L_inf z||_inf`;
//! * hybrid: `min_z F(z) + lambda ||L_1 z||_1` s.t. `||L_inf z||_inf <= lbar`;
//!
//! with the quadratic loss `F(z) = 1/2 ||z - y||^2`. Each split term
//! `u = L z` carries its own multiplier `w` and penalty `rho`; the z-update is
//! a banded SPD solve with a matrix that does not change across iterations.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::{BandedCholesky, BandedSpd};
use crate::cpwl::{chord_slopes, CpwlFunction, DataSet};
use crate::error::{Error, Result};
use crate::operator::DifferenceOperator;
use crate::prox::{prox_linf_norm, soft_threshold};

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmConfig {
    /// Penalty of the Lipschitz-regularized splitting.
    pub rho: f64,
    /// Penalty of the `L_1` split in the hybrid problem.
    pub rho1: f64,
    /// Penalty of the `L_inf` split in the hybrid problem.
    pub rhoinf: f64,
    pub max_iter: usize,
    pub tol_primal: f64,
    pub tol_dual: f64,
    /// Starting point; defaults to the data `y`.
    pub z_init: Option<Vec<f64>>,
    /// Rescale the penalties to balance primal and dual residuals during the
    /// first half of the iterations. The penalties above are then only
    /// starting values.
    pub adaptive_rho: bool,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            rho1: 1.0,
            rhoinf: 1.0,
            max_iter: 50_000,
            tol_primal: 1e-8,
            tol_dual: 1e-8,
            z_init: None,
            adaptive_rho: true,
        }
    }
}

impl AdmmConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.rho) && positive(self.rho1) && positive(self.rhoinf)) {
            return Err(Error::InvalidParameter("ADMM penalties must be positive"));
        }
        if !(positive(self.tol_primal) && positive(self.tol_dual)) {
            return Err(Error::InvalidParameter("ADMM tolerances must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmReport {
    pub z: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub objective: f64,
    pub converged: bool,
    /// Final multiplier of the `L_inf` split (length `M - 1`).
    pub dual_linf: Vec<f64>,
    /// Final multiplier of the `L_1` split (hybrid only, length `M - 2`).
    pub dual_l1: Vec<f64>,
}

/// One split `u = L z` with multiplier `w` and penalty `rho`, as seen by the
/// z-update.
#[derive(Debug, Clone, Copy)]
pub struct SplitTerm<'a> {
    pub op: &'a DifferenceOperator,
    pub u: &'a [f64],
    pub w: &'a [f64],
    pub rho: f64,
}

/// `1/2 sum (z_m - y_m)^2`.
pub fn empirical_loss(z: &[f64], ys: &[f64]) -> Result<f64> {
    if z.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: ys.len(),
            found: z.len(),
        });
    }
    Ok(quadratic_loss(z, ys))
}

fn quadratic_loss(z: &[f64], ys: &[f64]) -> f64 {
    0.5 * z
        .iter()
        .zip(ys)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
}

/// Exact minimizer of the augmented Lagrangian in `z`: solves
/// `(I + sum rho_i L_i^T L_i) z = y + sum L_i^T (rho_i u_i - w_i)`.
pub fn solve_z_update(ys: &[f64], terms: &[SplitTerm<'_>]) -> Result<Vec<f64>> {
    let n = ys.len();
    for t in terms {
        if t.op.cols() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: t.op.cols(),
            });
        }
        for len in [t.u.len(), t.w.len()] {
            if len != t.op.rows() {
                return Err(Error::LengthMismatch {
                    expected: t.op.rows(),
                    found: len,
                });
            }
        }
        if !(t.rho > 0.0) {
            return Err(Error::InvalidParameter("ADMM penalties must be positive"));
        }
    }
    let ops: Vec<(&DifferenceOperator, f64)> = terms.iter().map(|t| (t.op, t.rho)).collect();
    let factor = normal_matrix(n, &ops)?;
    let mut rhs = ys.to_vec();
    for t in terms {
        let shifted: Vec<f64> = t.u.iter().zip(t.w).map(|(u, w)| t.rho * u - w).collect();
        t.op.accumulate_transpose(&shifted, 1.0, &mut rhs);
    }
    factor.solve_in_place(&mut rhs)?;
    Ok(rhs)
}

fn normal_matrix(n: usize, ops: &[(&DifferenceOperator, f64)]) -> Result<BandedCholesky> {
    let bw = ops.iter().map(|(op, _)| op.bandwidth()).max().unwrap_or(0);
    let mut k = BandedSpd::identity(n, bw);
    for (op, rho) in ops {
        op.add_gram(*rho, &mut k);
    }
    k.factor()
}

/// Data term plus `lambda` times the Lipschitz constant of `f`.
pub fn lipschitz_objective(data: &DataSet, lambda: f64, f: &CpwlFunction) -> f64 {
    model_loss(data, f) + lambda * f.lipschitz_constant()
}

/// Data term plus `lambda` times the second-order total variation of `f`.
pub fn hybrid_objective(data: &DataSet, lambda: f64, f: &CpwlFunction) -> f64 {
    model_loss(data, f) + lambda * f.tv2()
}

fn model_loss(data: &DataSet, f: &CpwlFunction) -> f64 {
    data.xs()
        .iter()
        .zip(data.ys())
        .map(|(&x, &y)| {
            let r = f.eval(x) - y;
            0.5 * r * r
        })
        .sum()
}

#[derive(Debug, Clone, Copy)]
enum Prox {
    /// `tau ||.||_inf`
    LinfNorm(f64),
    /// `tau ||.||_1`
    L1Norm(f64),
    /// indicator of the l-inf ball of the given radius
    LinfBall(f64),
}

struct Split {
    op: DifferenceOperator,
    rho: f64,
    prox: Prox,
    u: Vec<f64>,
    w: Vec<f64>,
}

impl Split {
    fn new(op: DifferenceOperator, rho: f64, prox: Prox, z0: &[f64]) -> Self {
        let u = op.apply(z0).expect("operator built on the same abscissas");
        let w = vec![0.0; op.rows()];
        Self {
            op,
            rho,
            prox,
            u,
            w,
        }
    }

    /// u- and w-updates for the new `z`. Returns `(||Lz - u||^2, u_new - u_old)`.
    fn update(&mut self, z: &[f64]) -> (f64, Vec<f64>) {
        let lz = self.op.apply(z).expect("shape checked at construction");
        let v: Vec<f64> = lz
            .iter()
            .zip(&self.w)
            .map(|(a, w)| a + w / self.rho)
            .collect();
        let u_new = match self.prox {
            Prox::LinfNorm(lambda) => {
                prox_linf_norm(&v, lambda / self.rho).expect("positive scale")
            }
            Prox::L1Norm(lambda) => v
                .iter()
                .map(|&x| soft_threshold(x, lambda / self.rho))
                .collect(),
            Prox::LinfBall(radius) => v.iter().map(|&x| x.clamp(-radius, radius)).collect(),
        };
        let mut primal_sq = 0.0;
        for ((w, a), u) in self.w.iter_mut().zip(&lz).zip(&u_new) {
            let r = a - u;
            *w += self.rho * r;
            primal_sq += r * r;
        }
        let du = u_new.iter().zip(&self.u).map(|(a, b)| a - b).collect();
        self.u = u_new;
        (primal_sq, du)
    }
}

struct Outcome {
    z: Vec<f64>,
    iterations: usize,
    primal: f64,
    dual: f64,
    converged: bool,
}

/// Residual ratio that triggers a penalty change, and the change factor.
const BALANCE_RATIO: f64 = 10.0;
const BALANCE_STEP: f64 = 2.0;
const BALANCE_EVERY: usize = 10;

fn factor_splits(n: usize, splits: &[Split]) -> Result<BandedCholesky> {
    let ops: Vec<(&DifferenceOperator, f64)> = splits.iter().map(|s| (&s.op, s.rho)).collect();
    normal_matrix(n, &ops)
}

fn run_admm(ys: &[f64], splits: &mut [Split], cfg: &AdmmConfig) -> Result<Outcome> {
    let n = ys.len();
    let mut factor = factor_splits(n, splits)?;
    let adapt_until = if cfg.adaptive_rho {
        cfg.max_iter / 2
    } else {
        0
    };
    let rows: usize = splits.iter().map(|s| s.op.rows()).sum();
    let primal_tol = cfg.tol_primal * libm::sqrt(rows as f64);
    let dual_tol = cfg.tol_dual * libm::sqrt(n as f64);

    let mut z = ys.to_vec();
    let mut out = Outcome {
        z: Vec::new(),
        iterations: 0,
        primal: f64::INFINITY,
        dual: f64::INFINITY,
        converged: false,
    };
    let mut dual_vec = vec![0.0; n];
    for k in 1..=cfg.max_iter {
        z.copy_from_slice(ys);
        for s in splits.iter() {
            let shifted: Vec<f64> = s.u.iter().zip(&s.w).map(|(u, w)| s.rho * u - w).collect();
            s.op.accumulate_transpose(&shifted, 1.0, &mut z);
        }
        factor.solve_in_place(&mut z)?;

        let mut primal_sq = 0.0;
        dual_vec.iter_mut().for_each(|d| *d = 0.0);
        for s in splits.iter_mut() {
            let (p, du) = s.update(&z);
            primal_sq += p;
            s.op.accumulate_transpose(&du, s.rho, &mut dual_vec);
        }
        out.iterations = k;
        out.primal = libm::sqrt(primal_sq);
        out.dual = libm::sqrt(dual_vec.iter().map(|d| d * d).sum());
        if out.primal <= primal_tol && out.dual <= dual_tol {
            out.converged = true;
            break;
        }
        if k <= adapt_until && k % BALANCE_EVERY == 0 {
            let scale = if out.primal > BALANCE_RATIO * out.dual {
                BALANCE_STEP
            } else if out.dual > BALANCE_RATIO * out.primal {
                1.0 / BALANCE_STEP
            } else {
                1.0
            };
            if scale != 1.0 {
                // multipliers are unscaled, so only the factorization changes
                splits.iter_mut().for_each(|s| s.rho *= scale);
                factor = factor_splits(n, splits)?;
            }
        }
    }
    out.z = z;
    Ok(out)
}

/// Rebuilds a sample vector from chord slopes, with the additive constant that
/// minimizes the quadratic loss.
fn integrate_slopes(xs: &[f64], ys: &[f64], slopes: &[f64]) -> Vec<f64> {
    let mut z = Vec::with_capacity(xs.len());
    z.push(0.0);
    for (m, s) in slopes.iter().enumerate() {
        let next = z[m] + s * (xs[m + 1] - xs[m]);
        z.push(next);
    }
    let shift = ys.iter().zip(&z).map(|(y, z)| y - z).sum::<f64>() / xs.len() as f64;
    z.iter_mut().for_each(|v| *v += shift);
    z
}

fn check_problem(data: &DataSet, lambda: f64, cfg: &AdmmConfig) -> Result<Vec<f64>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter("lambda must be positive"));
    }
    cfg.validate()?;
    match &cfg.z_init {
        Some(z) if z.len() != data.len() => Err(Error::LengthMismatch {
            expected: data.len(),
            found: z.len(),
        }),
        Some(z) if z.iter().any(|v| !v.is_finite()) => Err(Error::NonFinite),
        Some(z) => Ok(z.clone()),
        None => Ok(data.ys().to_vec()),
    }
}

fn trivial_report(data: &DataSet) -> AdmmReport {
    AdmmReport {
        z: data.ys().to_vec(),
        iterations: 0,
        primal_residual: 0.0,
        dual_residual: 0.0,
        objective: 0.0,
        converged: true,
        dual_linf: Vec::new(),
        dual_l1: Vec::new(),
    }
}

/// Solves `min_z 1/2 ||z - y||^2 + lambda ||L_inf z||_inf`.
///
/// The returned `z` is rebuilt from the final split variable `u` (the chord
/// slopes after the l-inf prox), so chords that sit on the active bound have
/// exactly equal slopes. Non-convergence is reported, not raised.
pub fn admm_lipschitz(data: &DataSet, lambda: f64, cfg: &AdmmConfig) -> Result<AdmmReport> {
    let z0 = check_problem(data, lambda, cfg)?;
    if data.len() < 2 {
        return Ok(trivial_report(data));
    }
    let (xs, ys) = (data.xs(), data.ys());
    let mut splits = [Split::new(
        DifferenceOperator::linf(xs),
        cfg.rho,
        Prox::LinfNorm(lambda),
        &z0,
    )];
    let out = run_admm(ys, &mut splits, cfg)?;
    let [linf] = splits;

    let z = integrate_slopes(xs, ys, &linf.u);
    let lip = chord_slopes(xs, &z)
        .into_iter()
        .fold(0.0_f64, |m, s| m.max(s.abs()));
    Ok(AdmmReport {
        objective: quadratic_loss(&z, ys) + lambda * lip,
        z,
        iterations: out.iterations,
        primal_residual: out.primal,
        dual_residual: out.dual,
        converged: out.converged,
        dual_linf: linf.w,
        dual_l1: Vec::new(),
    })
}

/// Solves `min_z 1/2 ||z - y||^2 + lambda ||L_1 z||_1` subject to
/// `||L_inf z||_inf <= lbar`.
///
/// The returned `z` is rebuilt from the split variables: slope changes from
/// the soft-thresholded `u_1` (exact zeros stay zeros), offset to match
/// `u_inf`, clamped to `[-lbar, lbar]` and integrated. With `M = 2` the `L_1`
/// term is empty and only the slope bound remains.
pub fn admm_hybrid(data: &DataSet, lambda: f64, lbar: f64, cfg: &AdmmConfig) -> Result<AdmmReport> {
    let z0 = check_problem(data, lambda, cfg)?;
    if !(lbar > 0.0) || lbar.is_nan() {
        return Err(Error::InvalidParameter("lbar must be positive"));
    }
    if data.len() < 2 {
        return Ok(trivial_report(data));
    }
    let (xs, ys) = (data.xs(), data.ys());
    let linf = Split::new(
        DifferenceOperator::linf(xs),
        cfg.rhoinf,
        Prox::LinfBall(lbar),
        &z0,
    );
    let (out, linf, l1) = if data.len() >= 3 {
        let l1 = Split::new(
            DifferenceOperator::l1(xs),
            cfg.rho1,
            Prox::L1Norm(lambda),
            &z0,
        );
        let mut splits = [l1, linf];
        let out = run_admm(ys, &mut splits, cfg)?;
        let [l1, linf] = splits;
        (out, linf, Some(l1))
    } else {
        let mut splits = [linf];
        let out = run_admm(ys, &mut splits, cfg)?;
        let [linf] = splits;
        (out, linf, None)
    };

    let slopes = match &l1 {
        None => linf.u.clone(),
        Some(l1) => {
            // (L_1 z)_m = d_m - d_{m+1}
            let mut d = Vec::with_capacity(linf.u.len());
            d.push(0.0);
            for (m, c) in l1.u.iter().enumerate() {
                d.push(d[m] - c);
            }
            let offset = linf.u.iter().zip(&d).map(|(u, d)| u - d).sum::<f64>() / d.len() as f64;
            d.iter().map(|s| (s + offset).clamp(-lbar, lbar)).collect()
        }
    };
    let z = integrate_slopes(xs, ys, &slopes);
    let slopes = chord_slopes(xs, &z);
    let tv: f64 = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok(AdmmReport {
        objective: quadratic_loss(&z, ys) + lambda * tv,
        z,
        iterations: out.iterations,
        primal_residual: out.primal,
        dual_residual: out.dual,
        converged: out.converged,
        dual_linf: linf.w,
        dual_l1: l1.map(|s| s.w).unwrap_or_default(),
    })
}
