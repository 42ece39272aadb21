//! System-reservoir processes: execution of `rho_S (x) rho_R -> U (.) U^dagger`,
//! the full set of entropic and thermodynamic quantities, and diagnostics
//! built on them.

mod composite;
mod erasure;
mod kstep;
mod memory;
mod swap;

pub use composite::{multi_system_check, product_process, MultiSystemComparison};
pub use erasure::{
    pure_erasure_dense, pure_erasure_required_depth, pure_erasure_truncated, PureErasureReport, ERASURE_TAIL_TOL,
};
pub use kstep::{build_kstep_process, kstep_dense_oracle, Interpolation, KStepReport, KStepSpec};
pub use memory::{
    classical_memory, controlled_shift, correlated_initial_check, correlation_counterexamples, entangled_memory,
    lift_system_memory, lift_system_reservoir, memory_process_report, mixed_reservoir_swap_heat,
    two_stage_memory_scenario, CorrelatedInitialReport, CorrelationCounterexamples, MemoryProcessSpec,
    MemoryReport, TwoStageMemoryReport,
};
pub use swap::{
    build_swap_process, build_tight_process, delta_s_range_witnesses, swap_closed_forms, RangeWitnesses,
    SwapClosedForms,
};

use crate::bounds::{delta_q_bound_check, finite_size_bound, BoundCheck, BoundParams, CHECK_TOL};
use crate::error::{Error, Result};
use crate::quantum::{mutual_information, relative_entropy, von_neumann_entropy, QState, Unitary};
use crate::scalar::{ext_sub, Real};
use crate::thermo::{
    integrate_beta_de, integrate_beta_de_quadrature, pythagoras_decompose, InverseTemp, Reservoir,
    MASKED_POPULATION_TOL,
};

/// Tolerance on `|beta dQ - dS|` below which a process is diagnosed as an
/// equality case.
pub const EQUALITY_TOL: f64 = 1e-7;

/// A system state, a thermal reservoir and a joint unitary.
#[derive(Debug, Clone)]
pub struct ProcessSpec<T: Real> {
    rho_s: QState<T>,
    reservoir: Reservoir<T>,
    u: Unitary<T>,
}

impl<T: Real> ProcessSpec<T> {
    pub fn new(rho_s: QState<T>, reservoir: Reservoir<T>, u: Unitary<T>) -> Result<Self> {
        let joint = rho_s.dim() * reservoir.dim();
        if u.dim() != joint {
            return Err(Error::Dimension(format!(
                "unitary of dimension {} for a {}x{} system-reservoir pair",
                u.dim(),
                rho_s.dim(),
                reservoir.dim()
            )));
        }
        Ok(Self { rho_s, reservoir, u })
    }

    pub fn system(&self) -> &QState<T> {
        &self.rho_s
    }

    pub fn reservoir(&self) -> &Reservoir<T> {
        &self.reservoir
    }

    pub fn unitary(&self) -> &Unitary<T> {
        &self.u
    }

    /// `rho_S (x) rho_R`.
    pub fn initial_joint(&self) -> Result<QState<T>> {
        self.rho_s.tensor(self.reservoir.state())
    }

    pub(crate) fn system_factors(&self) -> Vec<usize> {
        (0..self.rho_s.num_factors()).collect()
    }

    pub(crate) fn reservoir_factors(&self) -> Vec<usize> {
        let n = self.rho_s.num_factors();
        (n..n + self.reservoir.state().num_factors()).collect()
    }
}

/// Margins of the inequalities every process must satisfy. Positive or zero
/// means the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundMargins<T> {
    /// `beta dQ - dS`
    pub landauer: T,
    /// `beta dQ` minus the finite-size lower bound for the reservoir dimension.
    pub finite_size: T,
    /// The sharpened bound for heat-extracting processes.
    pub sharpened: BoundCheck<T>,
}

impl<T: Real> BoundMargins<T> {
    pub fn all_hold(&self) -> bool {
        let tol = -T::tol(CHECK_TOL);
        self.landauer >= tol && self.finite_size >= tol && self.sharpened.holds()
    }
}

#[derive(Debug, Clone)]
pub struct ProcessReport<T: Real> {
    /// `S(rho_S) - S(rho'_S)`
    pub delta_s: T,
    /// `tr[H (rho'_R - rho_R)]`, heat into the reservoir.
    pub delta_q: T,
    /// `S(rho'_R) - S(rho_R)`
    pub delta: T,
    /// `I(S':R')`
    pub mutual_info: T,
    /// `D(rho'_R || rho_R)`
    pub rel_ent: T,
    pub beta: InverseTemp<T>,
    /// Extended real; `+inf` for a zero-temperature reservoir receiving heat
    /// or a masked level becoming populated.
    pub beta_delta_q: T,
    /// `|beta dQ - (dS + I + D)|` with `inf - inf = 0`.
    pub equality_residual: T,
    /// `|delta - dS - I|`
    pub second_law_residual: T,
    pub margins: BoundMargins<T>,
    pub reservoir_dim: usize,
    pub final_system: QState<T>,
    pub final_reservoir: QState<T>,
    pub final_joint: QState<T>,
}

/// `beta * dQ` on the extended reals for a reservoir at `beta`.
pub(super) fn scaled_heat<T: Real>(beta: InverseTemp<T>, dq: T, zero_tol: T) -> T {
    match beta {
        InverseTemp::Finite(b) => b * dq,
        _ if dq.abs() <= zero_tol => T::zero(),
        _ => beta.times(dq),
    }
}

pub fn run_process<T: Real>(spec: &ProcessSpec<T>) -> Result<ProcessReport<T>> {
    let initial = spec.initial_joint()?;
    let joint = initial.apply_unitary(&spec.u)?;
    let sys = spec.system_factors();
    let res = spec.reservoir_factors();
    let final_system = joint.partial_trace(&sys)?;
    let final_reservoir = joint.partial_trace(&res)?;
    let reservoir = &spec.reservoir;
    let rho_r = reservoir.state();

    let delta_s = von_neumann_entropy(&spec.rho_s) - von_neumann_entropy(&final_system);
    let delta = von_neumann_entropy(&final_reservoir) - von_neumann_entropy(rho_r);
    let mutual_info = mutual_information(&joint, &sys, &res)?;
    let rel_ent = relative_entropy(&final_reservoir, rho_r)?;

    let h = reservoir.hamiltonian();
    let masked_leak = reservoir.masked_population(&final_reservoir) > T::tol(MASKED_POPULATION_TOL);
    let (delta_q, beta_delta_q) = if masked_leak {
        (T::infinity(), T::infinity())
    } else {
        let dq = h.expectation(final_reservoir.matrix()) - h.expectation(rho_r.matrix());
        let (lo, hi) = reservoir.energy_range();
        let spread = if hi.is_finite() { hi - lo } else { T::zero() };
        let zero_tol = T::tol(1e-10) * spread.max(T::one());
        (dq, scaled_heat(reservoir.beta(), dq, zero_tol))
    };

    let rhs = delta_s + mutual_info + rel_ent;
    let equality_residual = ext_sub(beta_delta_q, rhs).abs();
    let second_law_residual = (delta - delta_s - mutual_info).abs();

    let d = reservoir.dim();
    let ld = T::from_usize(d).expect("dimension").ln();
    let bound = finite_size_bound(delta_s.min(ld), BoundParams::new(d))?;
    let margins = BoundMargins {
        landauer: ext_sub(beta_delta_q, delta_s),
        finite_size: if bound.degenerate { T::zero() } else { ext_sub(beta_delta_q, bound.value) },
        sharpened: delta_q_bound_check(delta, beta_delta_q, d)?,
    };

    Ok(ProcessReport {
        delta_s,
        delta_q,
        delta,
        mutual_info,
        rel_ent,
        beta: reservoir.beta(),
        beta_delta_q,
        equality_residual,
        second_law_residual,
        margins,
        reservoir_dim: d,
        final_system,
        final_reservoir,
        final_joint: joint,
    })
}

/// Whether a process sits in the equality case `beta dQ = dS`, with the
/// structural witnesses that must then accompany it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualityDiagnosis<T> {
    pub is_equality: bool,
    /// `max |rho'_R - rho_R|`
    pub reservoir_change: T,
    pub mutual_info: T,
    /// Largest deviation between the sorted spectra of `rho_S` and `rho'_S`.
    pub spectrum_change: T,
    /// All witnesses within `1e-6` (vacuously true when not an equality case).
    pub witnesses_hold: bool,
}

pub fn check_equality_case<T: Real>(report: &ProcessReport<T>, spec: &ProcessSpec<T>) -> EqualityDiagnosis<T> {
    let gap = ext_sub(report.beta_delta_q, report.delta_s).abs();
    let is_equality = gap <= T::tol(EQUALITY_TOL);
    let reservoir_change = report.final_reservoir.max_abs_diff(spec.reservoir.state());
    let before = spec.rho_s.spectrum();
    let after = report.final_system.spectrum();
    let spectrum_change =
        before.iter().zip(after).fold(T::zero(), |m, (&a, &b)| if (a - b).abs() > m { (a - b).abs() } else { m });
    let w = T::tol(1e-6);
    let witnesses_hold =
        !is_equality || (reservoir_change <= w && report.mutual_info <= w && spectrum_change <= w);
    EqualityDiagnosis { is_equality, reservoir_change, mutual_info: report.mutual_info, spectrum_change, witnesses_hold }
}

/// `lambda_min(rho'_S) >= e^{-beta (H_max - H_min)} lambda_min(rho_S)` for
/// `beta` in `[0, inf]`.
pub fn pureness_bound_check<T: Real>(spec: &ProcessSpec<T>, report: &ProcessReport<T>) -> BoundCheck<T> {
    let (lo, hi) = spec.reservoir.energy_range();
    let spread = hi - lo;
    let factor = match spec.reservoir.beta() {
        InverseTemp::NegInf => return BoundCheck::NotApplicable,
        InverseTemp::Finite(b) if b < T::zero() => return BoundCheck::NotApplicable,
        InverseTemp::Finite(b) => {
            if spread.is_finite() {
                (-b * spread).exp()
            } else if b == T::zero() {
                T::one()
            } else {
                T::zero()
            }
        }
        InverseTemp::PosInf => {
            if spread <= T::tol(1e-10) * hi.abs().max(T::one()) {
                T::one()
            } else {
                T::zero()
            }
        }
    };
    let rhs = factor * spec.rho_s.lambda_min();
    let margin = report.final_system.lambda_min() - rhs;
    BoundCheck::Checked { holds: margin >= -T::tol(1e-10), margin, rhs }
}

/// Both sides of `dS + I(S':R') + D(rho'_R || rho'_th) = int beta(E) dE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck<T> {
    pub lhs: T,
    /// Entropy difference of thermal states at the initial and final energy.
    pub rhs: T,
    /// The same integral by quadrature of `beta(E)`.
    pub rhs_quadrature: T,
    pub residual: T,
}

pub fn integral_version_check<T: Real>(spec: &ProcessSpec<T>, report: &ProcessReport<T>) -> Result<IntegralCheck<T>> {
    let reservoir = &spec.reservoir;
    let split = pythagoras_decompose(&report.final_reservoir, reservoir)?;
    let lhs = report.delta_s + report.mutual_info + split.nonthermal;
    let h = reservoir.hamiltonian();
    let e0 = h.expectation(reservoir.state().matrix());
    let e1 = h.expectation(report.final_reservoir.matrix());
    let rhs = integrate_beta_de(h, e0, e1)?;
    let rhs_quadrature = integrate_beta_de_quadrature(h, e0, e1, T::tol(1e-10))?;
    Ok(IntegralCheck { lhs, rhs, rhs_quadrature, residual: (lhs - rhs).abs() })
}
