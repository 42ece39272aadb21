//! Processes with a memory register correlated with the system, the
//! scenarios showing why a naive mutual-information version of the bound
//! fails, and the initially correlated system-reservoir case.

use super::{build_kstep_process, scaled_heat, KStepReport, KStepSpec};
use crate::error::{arg, Error, Result};
use crate::optimize::grid_then_golden_min;
use crate::quantum::{
    conditional_entropy, hermitian_eigen, mutual_information, relative_entropy, von_neumann_entropy, CVector,
    HermitianOp, QState, Unitary,
};
use crate::scalar::{ext_sub, Real};
use crate::thermo::{InverseTemp, Reservoir};

const S: usize = 0;
const R: usize = 1;
const M: usize = 2;

/// A system-memory state, a reservoir, and a unitary on `S (x) R (x) M`
/// (or on `S (x) R (x) M (x) A` with a maximally mixed ancilla `A` that is
/// discarded afterwards, which models a noisy operation).
#[derive(Debug, Clone)]
pub struct MemoryProcessSpec<T: Real> {
    rho_sm: QState<T>,
    reservoir: Reservoir<T>,
    u: Unitary<T>,
    ancilla_dim: usize,
}

impl<T: Real> MemoryProcessSpec<T> {
    pub fn new(rho_sm: &QState<T>, system_dim: usize, reservoir: Reservoir<T>, u: Unitary<T>) -> Result<Self> {
        Self::with_ancilla(rho_sm, system_dim, reservoir, u, 1)
    }

    pub fn with_ancilla(
        rho_sm: &QState<T>,
        system_dim: usize,
        reservoir: Reservoir<T>,
        u: Unitary<T>,
        ancilla_dim: usize,
    ) -> Result<Self> {
        if system_dim == 0 || !rho_sm.dim().is_multiple_of(system_dim) {
            return arg(format!("system dimension {system_dim} does not divide {}", rho_sm.dim()));
        }
        let rho_sm = rho_sm.with_dims(vec![system_dim, rho_sm.dim() / system_dim])?;
        let total = rho_sm.dim() * reservoir.dim() * ancilla_dim.max(1);
        if u.dim() != total {
            return Err(Error::Dimension(format!("unitary of dimension {} on a {total}-dim space", u.dim())));
        }
        Ok(Self { rho_sm, reservoir, u, ancilla_dim: ancilla_dim.max(1) })
    }

    /// `[d_S, d_R, d_M]`, the factor order the unitary acts on.
    pub fn dims(&self) -> [usize; 3] {
        [self.rho_sm.dims()[0], self.reservoir.dim(), self.rho_sm.dims()[1]]
    }

    pub fn system_memory(&self) -> &QState<T> {
        &self.rho_sm
    }

    pub fn reservoir(&self) -> &Reservoir<T> {
        &self.reservoir
    }
}

/// Lifts a unitary on `S (x) M` to `S (x) R (x) M`, acting trivially on `R`.
pub fn lift_system_memory<T: Real>(u_sm: &Unitary<T>, dims: [usize; 3]) -> Result<Unitary<T>> {
    Unitary::embed(u_sm, &[S, M], &dims)
}

/// Lifts a unitary on `S (x) R` to `S (x) R (x) M`, acting trivially on `M`.
pub fn lift_system_reservoir<T: Real>(u_sr: &Unitary<T>, dims: [usize; 3]) -> Result<Unitary<T>> {
    Unitary::embed(u_sr, &[S, R], &dims)
}

/// `|a>|b> -> |a - b mod d>|b>` on `S (x) M`.
pub fn controlled_shift<T: Real>(d: usize) -> Unitary<T> {
    let perm: Vec<usize> = (0..d * d).map(|i| ((i / d + d - i % d) % d) * d + i % d).collect();
    Unitary::from_permutation(&perm).expect("shift is a permutation")
}

/// `(1/d) sum_i |ii><ii|`
pub fn classical_memory<T: Real>(d: usize) -> QState<T> {
    let mut p = vec![T::zero(); d * d];
    for i in 0..d {
        p[i * d + i] = T::one() / T::from_usize(d).unwrap();
    }
    QState::diagonal(&p).expect("distribution").with_dims(vec![d, d]).expect("dims")
}

/// `|psi><psi|` with `psi = sum_i |ii> / sqrt(d)`
pub fn entangled_memory<T: Real>(d: usize) -> QState<T> {
    let mut psi = CVector::<T>::zeros(d * d);
    for i in 0..d {
        psi[i * d + i] = nalgebra::Complex::new(T::one(), T::zero());
    }
    QState::pure(&psi, vec![d, d]).expect("normalisable")
}

#[derive(Debug, Clone)]
pub struct MemoryReport<T: Real> {
    /// `S(S|M) - S(S'|M')`
    pub delta_s_cond: T,
    pub delta_q: T,
    pub beta_delta_q: T,
    /// `S(rho'_R) - S(rho_R)`
    pub delta: T,
    /// `I(S'M':R')`
    pub mutual_info: T,
    pub rel_ent: T,
    pub memory_entropy_before: T,
    pub memory_entropy_after: T,
    pub sm_mutual_info_before: T,
    pub sm_mutual_info_after: T,
    /// Increase of the total entropy; zero for a unitary, nonnegative for a
    /// noisy operation.
    pub entropy_production: T,
    /// `delta - dS_cond - I(S'M':R')`
    pub second_law_margin: T,
    /// `beta dQ - (dS_cond + I(S'M':R') + D)`
    pub landauer_margin: T,
    /// Deviation from `beta dQ = dS_cond + I + D + S(M) - S(M') + sigma`.
    pub identity_residual: T,
    /// `S(M') <= S(M)` up to `1e-10`.
    pub memory_not_increased: bool,
    pub final_sm: QState<T>,
    pub final_reservoir: QState<T>,
}

pub fn memory_process_report<T: Real>(spec: &MemoryProcessSpec<T>) -> Result<MemoryReport<T>> {
    let srm = spec.rho_sm.tensor(spec.reservoir.state())?.permute(&[0, 2, 1])?;
    let initial = if spec.ancilla_dim > 1 { srm.tensor(&QState::maximally_mixed(spec.ancilla_dim))? } else { srm };
    let after = initial.apply_unitary(&spec.u)?;
    let joint = if spec.ancilla_dim > 1 { after.partial_trace(&[S, R, M])? } else { after };
    let initial_srm = if spec.ancilla_dim > 1 { initial.partial_trace(&[S, R, M])? } else { initial };

    let final_sm = joint.partial_trace(&[S, M])?;
    let final_reservoir = joint.partial_trace(&[R])?;
    let rho_r = spec.reservoir.state();
    let ent = von_neumann_entropy::<T>;

    let delta_s_cond = conditional_entropy(&spec.rho_sm, &[0], &[1])? - conditional_entropy(&final_sm, &[0], &[1])?;
    let delta = ent(&final_reservoir) - ent(rho_r);
    let mutual_info = mutual_information(&joint, &[S, M], &[R])?;
    let rel_ent = relative_entropy(&final_reservoir, rho_r)?;
    let h = spec.reservoir.hamiltonian();
    let delta_q = h.expectation(final_reservoir.matrix()) - h.expectation(rho_r.matrix());
    let zero_tol = T::tol(1e-10) * h.norm().max(T::one());
    let beta_delta_q = scaled_heat(spec.reservoir.beta(), delta_q, zero_tol);

    let memory_entropy_before = ent(&spec.rho_sm.partial_trace(&[1])?);
    let memory_entropy_after = ent(&final_sm.partial_trace(&[1])?);
    let entropy_production = ent(&joint) - ent(&initial_srm);
    let landauer_margin = ext_sub(beta_delta_q, delta_s_cond + mutual_info + rel_ent);
    let identity_residual =
        ext_sub(landauer_margin, memory_entropy_before - memory_entropy_after + entropy_production).abs();
    Ok(MemoryReport {
        delta_s_cond,
        delta_q,
        beta_delta_q,
        delta,
        mutual_info,
        rel_ent,
        memory_entropy_before,
        memory_entropy_after,
        sm_mutual_info_before: mutual_information(&spec.rho_sm, &[0], &[1])?,
        sm_mutual_info_after: mutual_information(&final_sm, &[0], &[1])?,
        entropy_production,
        second_law_margin: delta - delta_s_cond - mutual_info,
        landauer_margin,
        identity_residual,
        memory_not_increased: memory_entropy_after <= memory_entropy_before + T::tol(1e-10),
        final_sm,
        final_reservoir,
    })
}

/// Erasure of an entangled qubit memory followed by a stepwise process
/// that returns the (now pure) memory to its initial mixed marginal.
#[derive(Debug, Clone)]
pub struct TwoStageMemoryReport<T: Real> {
    pub stage1: MemoryReport<T>,
    pub stage2: KStepReport<T>,
    pub total_beta_delta_q: T,
    /// `-S(S)`, the value the second stage can approach.
    pub target: T,
    pub memory_entropy_final: T,
}

pub fn two_stage_memory_scenario<T: Real>(k: usize) -> Result<TwoStageMemoryReport<T>> {
    let rho_sm = entangled_memory::<T>(2);
    let reservoir = Reservoir::new(HermitianOp::diagonal(&[T::zero(), T::one()]), InverseTemp::Finite(T::one()));
    let u = lift_system_memory(&controlled_shift(2), [2, 2, 2])?;
    let stage1 = memory_process_report(&MemoryProcessSpec::new(&rho_sm, 2, reservoir, u)?)?;
    let memory_now = stage1.final_sm.partial_trace(&[1])?;
    let memory_then = rho_sm.partial_trace(&[1])?;
    let stage2 = build_kstep_process(&KStepSpec::linear(memory_now, memory_then.clone(), k))?;
    Ok(TwoStageMemoryReport {
        total_beta_delta_q: stage1.beta_delta_q + stage2.beta_delta_q,
        target: -von_neumann_entropy(&rho_sm.partial_trace(&[0])?),
        memory_entropy_final: von_neumann_entropy(&memory_then),
        stage1,
        stage2,
    })
}

/// The two scenarios in which `beta dQ >= dI` fails.
#[derive(Debug, Clone)]
pub struct CorrelationCounterexamples<T: Real> {
    /// Swap of a system classically correlated with a memory into a reservoir
    /// in the same marginal state: `dI = log 2`, no heat.
    pub correlated: MemoryReport<T>,
    pub correlated_delta_i: T,
    /// Reservoir dimension of the product scenario.
    pub d: usize,
    /// Mixing weight minimizing the heat of the product-state swap.
    pub lambda: T,
    /// Heat at `lambda` from the closed form.
    pub beta_delta_q: T,
    /// Heat at `lambda` from the dense swap.
    pub beta_delta_q_dense: T,
    /// Change of `I(S:M)` in the dense swap, which has a trivial memory.
    pub product_delta_i: T,
    /// Smallest and largest heat over the scanned `lambda`.
    pub scan_min: T,
    pub scan_max: T,
}

/// `beta dQ` of the swap of a pure state with `(1 - l) psi + l 1/d`.
pub fn mixed_reservoir_swap_heat<T: Real>(lambda: T, d: usize) -> T {
    let df = T::from_usize(d).unwrap();
    let a = T::one() - lambda + lambda / df;
    let b = lambda / df;
    (a - T::one()) * a.ln() + (df - T::one()) * b.xlogx()
}

pub fn correlation_counterexamples<T: Real>(d: usize) -> Result<CorrelationCounterexamples<T>> {
    if d < 2 {
        return arg("the product scenario needs d >= 2");
    }
    let half = QState::maximally_mixed(2);
    let flat = Reservoir::from_state(&half)?;
    let u = lift_system_reservoir(&crate::quantum::swap_unitary(&[2, 2], 0, 1)?, [2, 2, 2])?;
    let correlated = memory_process_report(&MemoryProcessSpec::new(&classical_memory(2), 2, flat, u)?)?;
    let correlated_delta_i = correlated.sm_mutual_info_before - correlated.sm_mutual_info_after;

    const SCAN: usize = 200;
    let heat = |l: T| mixed_reservoir_swap_heat(l, d);
    let mut scan_min = T::infinity();
    let mut scan_max = T::neg_infinity();
    for i in 1..=SCAN {
        let v = heat(T::from_usize(i).unwrap() / T::from_usize(SCAN + 1).unwrap());
        scan_min = scan_min.min(v);
        scan_max = scan_max.max(v);
    }
    let (lambda, beta_delta_q) = grid_then_golden_min(heat, T::zero(), T::one(), SCAN, T::tol(1e-12));
    let scan_min = scan_min.min(beta_delta_q);

    let mut psi = vec![T::zero(); d];
    psi[0] = T::one();
    let pure = QState::diagonal(&psi)?;
    let rho_r = pure.mix(&QState::maximally_mixed(d), lambda)?;
    let u = lift_system_reservoir(&crate::quantum::swap_unitary(&[d, d], 0, 1)?, [d, d, 1])?;
    let product = memory_process_report(&MemoryProcessSpec::new(&pure, d, Reservoir::from_state(&rho_r)?, u)?)?;
    Ok(CorrelationCounterexamples {
        correlated,
        correlated_delta_i,
        d,
        lambda,
        beta_delta_q,
        beta_delta_q_dense: product.beta_delta_q,
        product_delta_i: product.sm_mutual_info_before - product.sm_mutual_info_after,
        scan_min,
        scan_max,
    })
}

/// A unitary applied to a correlated system-reservoir state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedInitialReport<T> {
    pub delta: T,
    pub delta_s: T,
    /// `I(S:R)` of the initial state.
    pub initial_mutual_info: T,
    /// `||rho_SR - rho_S (x) rho_R||_1`
    pub trace_distance: T,
    /// `delta - (dS - I(S:R))`
    pub second_law_margin: T,
    /// `trace_distance (log d_S + log d_R) - I(S:R)`
    pub mutual_info_bound_margin: T,
}

pub fn correlated_initial_check<T: Real>(rho_sr: &QState<T>, system_dim: usize, u: &Unitary<T>) -> Result<CorrelatedInitialReport<T>> {
    if system_dim == 0 || !rho_sr.dim().is_multiple_of(system_dim) {
        return arg(format!("system dimension {system_dim} does not divide {}", rho_sr.dim()));
    }
    let dr = rho_sr.dim() / system_dim;
    let joint = rho_sr.with_dims(vec![system_dim, dr])?;
    let after = joint.apply_unitary(u)?;
    let (s0, r0) = (joint.partial_trace(&[0])?, joint.partial_trace(&[1])?);
    let (s1, r1) = (after.partial_trace(&[0])?, after.partial_trace(&[1])?);
    let ent = von_neumann_entropy::<T>;
    let delta = ent(&r1) - ent(&r0);
    let delta_s = ent(&s0) - ent(&s1);
    let initial_mutual_info = mutual_information(&joint, &[0], &[1])?;
    let diff = joint.matrix() - s0.tensor(&r0)?.matrix();
    let trace_distance = hermitian_eigen(&diff).values.iter().fold(T::zero(), |a, &x| a + x.abs());
    let logs = T::from_usize(system_dim).unwrap().ln() + T::from_usize(dr).unwrap().ln();
    Ok(CorrelatedInitialReport {
        delta,
        delta_s,
        initial_mutual_info,
        trace_distance,
        second_law_margin: delta - (delta_s - initial_mutual_info),
        mutual_info_bound_margin: trace_distance * logs - initial_mutual_info,
    })
}
