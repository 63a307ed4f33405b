//! Two-step fits: solve for the sample vector `z` with ADMM, then take the
//! sparsest CPWL interpolant of `(x, z)`.

use lipreg_core::{
    admm_hybrid, admm_lipschitz, empirical_loss, sparsest_interpolant, AdmmConfig, AdmmReport,
    CpwlFunction, DataSet, InterpolationInstance,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitMetrics {
    /// `1/2 sum (f(x_m) - y_m)^2`.
    pub loss: f64,
    pub lipschitz: f64,
    pub tv2: f64,
    pub num_regions: usize,
    /// Objective of the solved problem evaluated at the model.
    pub objective: f64,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lbar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: CpwlFunction,
    pub z: Vec<f64>,
    pub metrics: FitMetrics,
    pub solver: AdmmReport,
}

impl FitResult {
    pub fn converged(&self) -> bool {
        self.solver.converged
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Lipschitz-regularized fit.
    Lipschitz,
    /// TV2-regularized fit under the slope bound `lbar`.
    Hybrid { lbar: f64 },
}

fn finish(
    data: &DataSet,
    lambda: f64,
    lbar: Option<f64>,
    solver: AdmmReport,
) -> lipreg_core::Result<FitResult> {
    let inst = InterpolationInstance::new(data.xs().to_vec(), solver.z.clone())?;
    let model = sparsest_interpolant(&inst)?;
    let loss = empirical_loss(&solver.z, data.ys())?;
    let (lipschitz, tv2) = (model.lipschitz_constant(), model.tv2());
    let objective = match lbar {
        None => loss + lambda * lipschitz,
        Some(_) => loss + lambda * tv2,
    };
    Ok(FitResult {
        metrics: FitMetrics {
            loss,
            lipschitz,
            tv2,
            num_regions: model.num_regions(),
            objective,
            lambda,
            lbar,
        },
        z: solver.z.clone(),
        model,
        solver,
    })
}

pub fn fit_lipschitz(
    data: &DataSet,
    lambda: f64,
    cfg: &AdmmConfig,
) -> lipreg_core::Result<FitResult> {
    let solver = admm_lipschitz(data, lambda, cfg)?;
    finish(data, lambda, None, solver)
}

pub fn fit_hybrid(
    data: &DataSet,
    lambda: f64,
    lbar: f64,
    cfg: &AdmmConfig,
) -> lipreg_core::Result<FitResult> {
    let solver = admm_hybrid(data, lambda, lbar, cfg)?;
    finish(data, lambda, Some(lbar), solver)
}

pub fn fit(
    data: &DataSet,
    lambda: f64,
    mode: Mode,
    cfg: &AdmmConfig,
) -> lipreg_core::Result<FitResult> {
    match mode {
        Mode::Lipschitz => fit_lipschitz(data, lambda, cfg),
        Mode::Hybrid { lbar } => fit_hybrid(data, lambda, lbar, cfg),
    }
}

/// Independent cold-started fits, run in parallel, returned in increasing
/// `lambda` order.
pub fn sweep(
    data: &DataSet,
    lambdas: &[f64],
    mode: Mode,
    cfg: &AdmmConfig,
) -> lipreg_core::Result<Vec<FitResult>> {
    if lambdas.is_empty() {
        return Err(lipreg_core::Error::InvalidParameter("empty lambda grid"));
    }
    let mut grid = lambdas.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.par_iter().map(|&l| fit(data, l, mode, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> DataSet {
        let xs: Vec<f64> = (0..12).map(|i| i as f64 / 11.0).collect();
        let ys = xs
            .iter()
            .map(|x| (x - 0.5f64).max(0.0) + 0.01 * (x * 37.0).sin())
            .collect();
        DataSet::new(xs, ys).unwrap()
    }

    #[test]
    fn huge_lambda_is_constant() {
        let r = fit_lipschitz(&data(), 1e6, &AdmmConfig::default()).unwrap();
        assert_eq!(r.metrics.num_regions, 1);
        assert!(r.metrics.lipschitz < 1e-9);
        assert_eq!(r.metrics.lbar, None);
    }

    #[test]
    fn model_interpolates_z() {
        let d = data();
        let r = fit_hybrid(&d, 0.01, 2.0, &AdmmConfig::default()).unwrap();
        assert!(r.converged());
        for (x, z) in d.xs().iter().zip(&r.z) {
            assert!((r.model.eval(*x) - z).abs() < 1e-9);
        }
        assert_eq!(r.metrics.num_regions, r.model.num_knots() + 1);
        assert_eq!(r.metrics.lbar, Some(2.0));
    }

    #[test]
    fn sweep_is_sorted_and_matches_single_fits() {
        let d = data();
        let cfg = AdmmConfig::default();
        let out = sweep(&d, &[0.1, 1e-3, 0.01], Mode::Lipschitz, &cfg).unwrap();
        let lambdas: Vec<f64> = out.iter().map(|r| r.metrics.lambda).collect();
        assert_eq!(lambdas, vec![1e-3, 0.01, 0.1]);
        assert_eq!(out[1], fit_lipschitz(&d, 0.01, &cfg).unwrap());
        assert!(sweep(&d, &[], Mode::Lipschitz, &cfg).is_err());
    }
}
