//! Seeded sweeps over random processes.

use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::processes::{integral_version_check, pureness_bound_check, run_process, ProcessReport, ProcessSpec};
use crate::quantum::random::{haar_unitary_from, random_hamiltonian_from, random_state_from};
use crate::quantum::rng_from_seed;
use crate::scalar::Real;
use crate::thermo::{InverseTemp, Reservoir};

/// Inverse temperatures drawn by the sweep.
pub const SWEEP_BETAS: [f64; 3] = [-2.0, 0.5, 3.0];

/// Largest system and reservoir dimension drawn by the sweep.
pub const SWEEP_MAX_DIM: usize = 6;

/// Process `index` of the sweep started from `seed`: random system state of
/// random rank, random reservoir Hamiltonian with levels in `[0, 2)`, Haar
/// unitary on the joint space.
pub fn random_process<T: Real>(seed: u64, index: u64) -> Result<ProcessSpec<T>> {
    let mut rng = rng_from_seed(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let ds = rng.random_range(2..=SWEEP_MAX_DIM);
    let d = rng.random_range(2..=SWEEP_MAX_DIM);
    let rank = rng.random_range(1..=ds);
    let beta = SWEEP_BETAS[rng.random_range(0..SWEEP_BETAS.len())];
    let rho = random_state_from(ds, rank, &mut rng)?;
    let h = random_hamiltonian_from(d, 0.0, 2.0, &mut rng);
    let u = haar_unitary_from(ds * d, &mut rng);
    ProcessSpec::new(rho, Reservoir::new(h, InverseTemp::Finite(T::lit(beta))), u)
}

/// Extremes of the checked quantities over a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub count: usize,
    pub max_equality_residual: f64,
    pub max_second_law_residual: f64,
    pub min_mutual_info: f64,
    pub min_landauer_margin: f64,
    pub min_finite_size_margin: f64,
    /// Over processes with `beta dQ <= 0`; `inf` if there are none.
    pub min_sharpened_margin: f64,
    /// Over processes with `beta >= 0`.
    pub min_pureness_margin: f64,
    pub max_integral_residual: f64,
}

struct Sample {
    report: ProcessReport<f64>,
    pureness: Option<f64>,
    integral: f64,
}

fn sample(seed: u64, index: u64) -> Result<Sample> {
    let spec = random_process::<f64>(seed, index)?;
    let report = run_process(&spec)?;
    let pureness = pureness_bound_check(&spec, &report).margin();
    let integral = integral_version_check(&spec, &report)?.residual;
    Ok(Sample { report, pureness, integral })
}

pub fn sweep(seed: u64, count: usize) -> Result<SweepSummary> {
    let samples: Vec<Sample> = (0..count as u64).into_par_iter().map(|i| sample(seed, i)).collect::<Result<_>>()?;
    let max = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let min = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).fold(f64::INFINITY, f64::min);
    Ok(SweepSummary {
        count,
        max_equality_residual: max(&|s| s.report.equality_residual),
        max_second_law_residual: max(&|s| s.report.second_law_residual),
        min_mutual_info: min(&|s| s.report.mutual_info),
        min_landauer_margin: min(&|s| s.report.margins.landauer),
        min_finite_size_margin: min(&|s| s.report.margins.finite_size),
        min_sharpened_margin: min(&|s| s.report.margins.sharpened.margin().unwrap_or(f64::INFINITY)),
        min_pureness_margin: min(&|s| s.pureness.unwrap_or(f64::INFINITY)),
        max_integral_residual: max(&|s| s.integral),
    })
}
