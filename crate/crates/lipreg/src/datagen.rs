//! Seeded synthetic data: noisy samples of a CPWL ground truth at random
//! abscissas in `[0, 1]`.
//!
//! Randomness comes from ChaCha8 seeded with the 64-bit seed. Draw order:
//! the `m` abscissas (uniform, re-drawn when within `1e-12` of an earlier
//! one), then the outlier subset, then one standard normal per sorted
//! abscissa. Output is reproducible across runs and platforms.

use std::path::Path;
use std::str::FromStr;

use lipreg_core::{CpwlFunction, DataSet};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::formats::{self, FormatError};

/// Closer abscissas are treated as a collision and re-drawn.
pub const MIN_SPACING: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator setting: {0}")]
    Invalid(&'static str),
    #[error("unknown ground-truth preset `{0}` (expected 6region or relu_half)")]
    UnknownPreset(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] lipreg_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub m: usize,
    pub ground_truth: CpwlFunction,
    pub sigma: f64,
    pub seed: u64,
    pub outlier_frac: f64,
    pub outlier_sigma: f64,
}

impl GenConfig {
    pub fn new(m: usize, ground_truth: CpwlFunction, sigma: f64, seed: u64) -> Self {
        Self {
            m,
            ground_truth,
            sigma,
            seed,
            outlier_frac: 0.0,
            outlier_sigma: 0.0,
        }
    }

    pub fn with_outliers(mut self, frac: f64, sigma: f64) -> Self {
        self.outlier_frac = frac;
        self.outlier_sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.m == 0 {
            return Err(GenError::Invalid("m must be at least 1"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(GenError::Invalid("sigma must be finite and nonnegative"));
        }
        if !(0.0..1.0).contains(&self.outlier_frac) {
            return Err(GenError::Invalid("outlier fraction must lie in [0, 1)"));
        }
        if !(self.outlier_sigma >= 0.0 && self.outlier_sigma.is_finite()) {
            return Err(GenError::Invalid(
                "outlier sigma must be finite and nonnegative",
            ));
        }
        Ok(())
    }

    /// Size of the outlier subset, `round(outlier_frac * m)`.
    pub fn num_outliers(&self) -> usize {
        (self.outlier_frac * self.m as f64).round() as usize
    }
}

/// Bundled ground truths on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Six linear regions with knots at 0.2, 0.35, 0.55, 0.7, 0.85; slopes
    /// 0.6, -0.4, 0.6, -0.6, 0.4, -0.4 (Lipschitz constant 0.6).
    SixRegion,
    /// `(x - 1/2)_+`.
    ReluHalf,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::SixRegion => "6region",
            Preset::ReluHalf => "relu_half",
        }
    }

    pub fn function(self) -> CpwlFunction {
        match self {
            Preset::SixRegion => six_region(),
            Preset::ReluHalf => relu_half(),
        }
    }
}

impl FromStr for Preset {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        match s {
            "6region" => Ok(Preset::SixRegion),
            "relu_half" => Ok(Preset::ReluHalf),
            other => Err(GenError::UnknownPreset(other.to_owned())),
        }
    }
}

/// Passes through (0, 0), (0.2, 0.12), (0.35, 0.06), (0.55, 0.18), (0.7, 0.09),
/// (0.85, 0.15), (1, 0.09).
pub fn six_region() -> CpwlFunction {
    CpwlFunction::new(
        0.0,
        0.6,
        vec![0.2, 0.35, 0.55, 0.7, 0.85],
        vec![-1.0, 1.0, -1.2, 1.0, -0.8],
    )
    .expect("preset is finite")
}

pub fn relu_half() -> CpwlFunction {
    CpwlFunction::new(0.0, 0.0, vec![0.5], vec![1.0]).expect("preset is finite")
}

/// Ground truth from a preset name or a CPWL JSON file.
pub fn load_ground_truth(name: &str, file: Option<&Path>) -> Result<CpwlFunction, GenError> {
    match (name, file) {
        ("file", Some(path)) => Ok(formats::read_cpwl_json(path)?),
        ("file", None) => Err(GenError::Invalid("--gt file needs a path")),
        (name, _) => Ok(name.parse::<Preset>()?.function()),
    }
}

fn draw_abscissas(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = Vec::with_capacity(m);
    while xs.len() < m {
        let x: f64 = rng.random();
        let at = xs.partition_point(|&t| t < x);
        let near = |i: usize| xs.get(i).is_some_and(|t| (t - x).abs() <= MIN_SPACING);
        if near(at) || (at > 0 && near(at - 1)) {
            continue;
        }
        xs.insert(at, x);
    }
    xs
}

pub fn generate_data(cfg: &GenConfig) -> Result<DataSet, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs = draw_abscissas(&mut rng, cfg.m);
    let mut is_outlier = vec![false; cfg.m];
    for i in index::sample(&mut rng, cfg.m, cfg.num_outliers()) {
        is_outlier[i] = true;
    }
    let ys = xs
        .iter()
        .zip(&is_outlier)
        .map(|(&x, &out)| {
            let n: f64 = rng.sample(StandardNormal);
            let s = if out { cfg.outlier_sigma } else { cfg.sigma };
            cfg.ground_truth.eval(x) + s * n
        })
        .collect();
    Ok(DataSet::new(xs, ys)?)
}
