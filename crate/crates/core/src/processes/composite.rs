//! Several systems processed jointly, each with its own reservoir.

use super::{run_process, ProcessReport, ProcessSpec};
use crate::error::{arg, Error, Result};
use crate::quantum::{mutual_information, von_neumann_entropy, QState, Unitary};
use crate::scalar::Real;
use crate::thermo::Reservoir;

/// The independent parallel composition of processes sharing one inverse
/// temperature: `H = sum_i H_i` and `U = (x)_i U_i`, with factor order
/// `S_1 ... S_k R_1 ... R_k`.
pub fn product_process<T: Real>(specs: &[ProcessSpec<T>]) -> Result<ProcessSpec<T>> {
    let first = specs.first().ok_or_else(|| Error::Argument("no processes given".into()))?;
    let beta = first.reservoir().beta();
    if specs.iter().any(|s| s.reservoir().beta() != beta || s.reservoir().is_masked()) {
        return arg("product processes need one inverse temperature and unmasked reservoirs");
    }
    let k = specs.len();
    let flat = |q: &QState<T>| q.with_dims(vec![q.dim()]);
    let mut rho_s = flat(first.system())?;
    let mut h = first.reservoir().hamiltonian().clone();
    for s in &specs[1..] {
        rho_s = rho_s.tensor(&flat(s.system())?)?;
        h = h.local_sum(s.reservoir().hamiltonian());
    }
    let reservoir_dims: Vec<usize> = specs.iter().map(|s| s.reservoir().dim()).collect();
    let reservoir = Reservoir::new(h, beta).with_factor_dims(reservoir_dims.clone())?;
    let mut dims: Vec<usize> = specs.iter().map(|s| s.system().dim()).collect();
    dims.extend(reservoir_dims);
    let total = dims.iter().product();
    let mut u = Unitary::identity(total);
    for (i, s) in specs.iter().enumerate() {
        u = Unitary::embed(s.unitary(), &[i, k + i], &dims)?.then_after(&u)?;
    }
    ProcessSpec::new(rho_s, reservoir, u)
}

#[derive(Debug, Clone)]
pub struct MultiSystemComparison<T: Real> {
    pub joint: ProcessReport<T>,
    pub individual: Vec<ProcessReport<T>>,
    pub sum_delta_s: T,
    pub sum_beta_delta_q: T,
    /// `beta dQ_joint - sum_i dS_i`
    pub heat_margin: T,
    /// `sum_i I(S'_i : S'_{i+1} ... S'_k)`
    pub final_correlation: T,
    /// `|S(rho'_S) - sum_i S(rho'_i) + final_correlation|`
    pub chaining_residual: T,
}

/// Compares a joint process on `S_1 (x) ... (x) S_k` against processes on
/// the single systems with the same final marginals.
pub fn multi_system_check<T: Real>(specs: &[ProcessSpec<T>], joint: &ProcessSpec<T>) -> Result<MultiSystemComparison<T>> {
    let k = specs.len();
    if joint.system().num_factors() != k {
        return Err(Error::Dimension(format!(
            "joint system has {} factors for {k} processes",
            joint.system().num_factors()
        )));
    }
    let joint_report = run_process(joint)?;
    let individual = specs.iter().map(run_process).collect::<Result<Vec<_>>>()?;
    let fin = &joint_report.final_system;
    let mut marginals = Vec::with_capacity(k);
    for (i, rep) in individual.iter().enumerate() {
        let m = fin.partial_trace(&[i])?;
        if m.dim() != rep.final_system.dim() || m.max_abs_diff(&rep.final_system) > T::tol(1e-8) {
            return arg(format!("final marginal of system {i} differs from its individual process"));
        }
        marginals.push(m);
    }
    let sum_delta_s = individual.iter().fold(T::zero(), |a, r| a + r.delta_s);
    let sum_beta_delta_q = individual.iter().fold(T::zero(), |a, r| a + r.beta_delta_q);
    let mut final_correlation = T::zero();
    for i in 0..k.saturating_sub(1) {
        let rest: Vec<usize> = (i + 1..k).collect();
        final_correlation += mutual_information(fin, &[i], &rest)?;
    }
    let sum_marginal = marginals.iter().fold(T::zero(), |a, m| a + von_neumann_entropy(m));
    let chaining_residual = (von_neumann_entropy(fin) - sum_marginal + final_correlation).abs();
    Ok(MultiSystemComparison {
        heat_margin: crate::scalar::ext_sub(joint_report.beta_delta_q, sum_delta_s),
        joint: joint_report,
        individual,
        sum_delta_s,
        sum_beta_delta_q,
        final_correlation,
        chaining_residual,
    })
}
