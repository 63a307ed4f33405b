//! Synthetic data generation, end-to-end fitting pipelines, λ sweeps and the
//! JSON/CSV formats used by the `lipreg` command-line tool. The numerical
//! kernels live in [`lipreg_core`].

pub mod datagen;
pub mod formats;
pub mod pipeline;

pub use lipreg_core;
