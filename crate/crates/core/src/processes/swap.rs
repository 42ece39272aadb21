//! Swap processes: part of the system is exchanged with an equally sized
//! part of a reservoir whose thermal state is prescribed.

use super::ProcessSpec;
use crate::bounds::{compute_m, spread_spectrum, MOptimum};
use crate::error::{arg, Result};
use crate::quantum::{
    mutual_information, swap_unitary, von_neumann_entropy, CVector, HermitianOp, QState,
};
use crate::scalar::Real;
use crate::thermo::{InverseTemp, Reservoir};

fn split<T: Real>(rho: &QState<T>, k: usize, what: &str) -> Result<QState<T>> {
    if k == 0 || !rho.dim().is_multiple_of(k) {
        return arg(format!("swap dimension {k} does not divide the {what} dimension {}", rho.dim()));
    }
    rho.with_dims(vec![k, rho.dim() / k])
}

/// Swaps the leading `swap_dim`-dimensional factor of the system with the
/// leading factor of a reservoir in state `rho_r` (as the thermal state of
/// `H = -log rho_r` at `beta = 1`). Use `swap_dim = dim` for a full swap.
pub fn build_swap_process<T: Real>(rho_s: &QState<T>, rho_r: &QState<T>, swap_dim: usize) -> Result<ProcessSpec<T>> {
    let s = split(rho_s, swap_dim, "system")?;
    let r = split(rho_r, swap_dim, "reservoir")?;
    let dims = [swap_dim, s.dims()[1], swap_dim, r.dims()[1]];
    let reservoir = Reservoir::from_state(&r)?;
    ProcessSpec::new(s, reservoir, swap_unitary(&dims, 0, 2)?)
}

/// Quantities of a swap process from the marginals of the initial states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapClosedForms<T> {
    pub delta_s: T,
    pub delta: T,
    pub delta_q: T,
    pub mutual_info: T,
}

pub fn swap_closed_forms<T: Real>(rho_s: &QState<T>, rho_r: &QState<T>, swap_dim: usize) -> Result<SwapClosedForms<T>> {
    let s = split(rho_s, swap_dim, "system")?;
    let r = split(rho_r, swap_dim, "reservoir")?;
    let (s1, s2) = (s.partial_trace(&[0])?, s.partial_trace(&[1])?);
    let (r1, r2) = (r.partial_trace(&[0])?, r.partial_trace(&[1])?);
    let ent = von_neumann_entropy::<T>;
    let log_r = r.eigen().reconstruct(|p| p.ln());
    let after = s1.tensor(&r2)?;
    let h_after = (&log_r * after.matrix()).trace().re;
    let h_before = (&log_r * r.matrix()).trace().re;
    Ok(SwapClosedForms {
        delta_s: ent(&s) - ent(&s2) - ent(&r1),
        delta: -ent(&r) + ent(&r2) + ent(&s1),
        delta_q: h_before - h_after,
        mutual_info: mutual_information(&s, &[0], &[1])? + mutual_information(&r, &[0], &[1])?,
    })
}

/// Full swap between commuting `d`-dimensional states built from the
/// optimizer of `M(dS, d)`; its heat equals the finite-size bound.
pub fn build_tight_process<T: Real>(delta_s: T, d: usize) -> Result<(ProcessSpec<T>, MOptimum<T>)> {
    let ld = T::from_usize(d).expect("dimension").ln();
    if delta_s.is_nan_val() || delta_s < T::zero() || delta_s > ld - T::tol(1e-6) {
        return arg(format!("dS = {delta_s} must lie in [0, log d - 1e-6] for d = {d}"));
    }
    let m = compute_m(delta_s, d)?;
    let rho_s = QState::diagonal(&spread_spectrum(m.s_star, d))?;
    let rho_r = QState::diagonal(&spread_spectrum(m.r_star, d))?;
    if rho_r.lambda_min() <= T::tol(1e-12) {
        return arg(format!("dS = {delta_s} is too close to log d: the reservoir state would not be full rank"));
    }
    Ok((build_swap_process(&rho_s, &rho_r, d)?, m))
}

/// Processes attaining the extreme values of `dS` for reservoir dimension `d`.
#[derive(Debug, Clone)]
pub struct RangeWitnesses<T: Real> {
    /// `dS = log d`: maximally mixed system swapped with a ground state.
    pub upper: ProcessSpec<T>,
    /// `dS = -log d`: pure system swapped with a maximally mixed reservoir.
    pub classical_lower: ProcessSpec<T>,
    /// `dS = -2 log d`, no heat: half of a maximally entangled system swapped
    /// with a maximally mixed reservoir.
    pub quantum_lower: ProcessSpec<T>,
}

pub fn delta_s_range_witnesses<T: Real>(d: usize) -> Result<RangeWitnesses<T>> {
    if d < 2 {
        return arg("range witnesses need d >= 2");
    }
    let mut levels = vec![T::one(); d];
    levels[0] = T::zero();
    let ground = Reservoir::new(HermitianOp::diagonal(&levels), InverseTemp::PosInf);
    let upper = ProcessSpec::new(QState::maximally_mixed(d), ground, swap_unitary(&[d, d], 0, 1)?)?;

    let flat = || Reservoir::new(HermitianOp::zero(d), InverseTemp::Finite(T::one()));
    let classical_lower = ProcessSpec::new(QState::basis_state(d, 0)?, flat(), swap_unitary(&[d, d], 0, 1)?)?;

    let mut psi = CVector::<T>::zeros(d * d);
    for i in 0..d {
        psi[i * d + i] = nalgebra::Complex::new(T::one(), T::zero());
    }
    let entangled = QState::pure(&psi, vec![d, d])?;
    let quantum_lower = ProcessSpec::new(entangled, flat(), swap_unitary(&[d, d, d], 0, 2)?)?;
    Ok(RangeWitnesses { upper, classical_lower, quantum_lower })
}
