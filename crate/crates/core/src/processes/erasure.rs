//! Erasure of a qubit to a pure state with a reservoir whose populated
//! levels form a binary tree and whose remaining levels are masked
//! (formally infinite energy).
//!
//! Node 2 carries weight `eps`; a node with weight `r` has children carrying
//! `(1 - eps) s_1 r` and `(1 - eps) s_2 r`. The process moves the system
//! population of each node onto its children, leaving the system in `|0>`.
//! Nodes at depth `m` with `a` left turns share one weight, so sums over
//! the tree run over `(m, a)` with binomial multiplicities.

use super::{run_process, ProcessReport, ProcessSpec};
use crate::error::{arg, Error, Result};
use crate::quantum::{QState, Unitary};
use crate::scalar::Real;
use crate::thermo::{InverseTemp, Reservoir};

/// Largest untracked tail weight accepted.
pub const ERASURE_TAIL_TOL: f64 = 1e-10;
/// Deepest tree materialized by [`pure_erasure_dense`].
const DENSE_MAX_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureErasureReport<T> {
    pub epsilon: T,
    pub s1: T,
    pub depth: usize,
    /// Weight beyond the truncation depth, `(1 - eps)^(depth + 1)`.
    pub tail_mass: T,
    /// `S(rho_S)`, as the final state is pure.
    pub delta_s: T,
    pub beta_delta_q: T,
    /// `D(rho'_R || rho_R)`
    pub rel_ent: T,
    /// `S(rho'_R) - S(rho_R)`
    pub entropy_change: T,
    pub reservoir_entropy: T,
    /// `(h(eps) + (1 - eps) S(rho_S)) / eps`
    pub reservoir_entropy_closed_form: T,
    /// `|beta dQ - dS - D|`
    pub equality_residual: T,
    /// Upper bound on the weight of `|1>` in the final system state.
    pub final_impurity: T,
}

fn check_inputs<T: Real>(s1: T, epsilon: T) -> Result<()> {
    let open = |x: T| x > T::zero() && x < T::one();
    if !open(s1) || !open(epsilon) {
        return arg(format!("need s1 = {s1} and eps = {epsilon} in (0, 1)"));
    }
    Ok(())
}

/// Smallest depth whose tail weight is at most `tol`.
pub fn pure_erasure_required_depth<T: Real>(epsilon: T, tol: T) -> usize {
    let steps = (tol.ln() / (T::one() - epsilon).ln()).ceil();
    steps.as_f64().max(1.0) as usize - 1
}

/// Evaluates the construction on the tree truncated at `depth`.
pub fn pure_erasure_truncated<T: Real>(s1: T, epsilon: T, depth: usize) -> Result<PureErasureReport<T>> {
    check_inputs(s1, epsilon)?;
    let one = T::one();
    let s2 = one - s1;
    let keep = one - epsilon;
    let tail_mass = keep.powi(depth as i32 + 1);
    if tail_mass > T::tol(ERASURE_TAIL_TOL) {
        let need = pure_erasure_required_depth(epsilon, T::tol(ERASURE_TAIL_TOL));
        return arg(format!("tail weight {tail_mass:e} at depth {depth}; depth {need} is required"));
    }
    let (le, lk, l1, l2) = (epsilon.ln(), keep.ln(), s1.ln(), s2.ln());
    let mut s_r = T::zero();
    let mut s_r_prime = T::zero();
    let mut heat = T::zero();
    let mut mass_prime = T::zero();
    for m in 0..=depth {
        let mf = T::from_usize(m).unwrap();
        let mut ln_binom = T::zero();
        for a in 0..=m {
            let af = T::from_usize(a).unwrap();
            let ln_r = le + mf * lk + af * l1 + (mf - af) * l2;
            let weight = (ln_binom + ln_r).exp();
            s_r -= weight * ln_r;
            heat += weight * ln_r;
            // the two children of each node at (m, a)
            for (ln_s, child_a) in [(l1, af + one), (l2, af)] {
                let ln_child = le + (mf + one) * lk + child_a * l1 + (mf + one - child_a) * l2;
                let ln_rp = ln_child - lk;
                let wp = (ln_binom + ln_r + ln_s).exp();
                debug_assert!((ln_rp - (ln_r + ln_s)).abs() < T::tol(1e-9));
                s_r_prime -= wp * ln_rp;
                heat -= wp * ln_child;
                mass_prime += wp;
            }
            if a < m {
                ln_binom += (mf - af).ln() - (af + one).ln();
            }
        }
    }
    let delta_s = -(s1 * l1 + s2 * l2);
    let rel_ent = -lk * mass_prime;
    let h_eps = -(epsilon * le + keep * lk);
    Ok(PureErasureReport {
        epsilon,
        s1,
        depth,
        tail_mass,
        delta_s,
        beta_delta_q: heat,
        rel_ent,
        entropy_change: s_r_prime - s_r,
        reservoir_entropy: s_r,
        reservoir_entropy_closed_form: (h_eps + keep * delta_s) / epsilon,
        equality_residual: (heat - delta_s - rel_ent).abs(),
        final_impurity: tail_mass,
    })
}

/// The same construction on an explicit masked reservoir, with the tree cut
/// at a small `depth` and its weights renormalized. Leaves have no children,
/// so their system population cannot be moved and the final system state is
/// only approximately pure.
pub fn pure_erasure_dense<T: Real>(s1: T, epsilon: T, depth: usize) -> Result<(ProcessSpec<T>, ProcessReport<T>)> {
    check_inputs(s1, epsilon)?;
    if depth == 0 || depth > DENSE_MAX_DEPTH {
        return Err(Error::Argument(format!("dense erasure supports depths 1..={DENSE_MAX_DEPTH}")));
    }
    let one = T::one();
    let keep = one - epsilon;
    let nodes = 1usize << (depth + 1);
    let mut weight = vec![T::zero(); nodes + 1];
    weight[2] = epsilon;
    for k in 2..=(nodes / 2) {
        weight[2 * k - 1] = keep * s1 * weight[k];
        weight[2 * k] = keep * (one - s1) * weight[k];
    }
    let total = weight.iter().fold(T::zero(), |a, &b| a + b);
    // populated slot of node j sits at 2(j - 1), its masked partner at 2j - 1
    let dim = 2 * nodes;
    let mut levels = vec![None; dim];
    for j in 2..=nodes {
        levels[2 * (j - 1)] = Some(-(weight[j] / total).ln());
    }
    let reservoir = Reservoir::masked(&levels, InverseTemp::Finite(one))?;

    let slot = |j: usize| 2 * (j - 1);
    let idx = |sigma: usize, s: usize| sigma * dim + s;
    let mut perm: Vec<usize> = (0..2 * dim).collect();
    let leaves = nodes / 2 + 1;
    for j in 2..leaves {
        perm[idx(0, slot(j))] = idx(0, slot(2 * j - 1));
        perm[idx(1, slot(j))] = idx(0, slot(2 * j));
    }
    perm[idx(0, slot(leaves))] = idx(0, slot(2));
    for t in 2..leaves {
        perm[idx(0, slot(nodes / 2 + t))] = idx(1, slot(t));
    }
    let u = Unitary::from_permutation(&perm)?;
    let rho_s = QState::diagonal(&[s1, one - s1])?;
    let spec = ProcessSpec::new(rho_s, reservoir, u)?;
    let report = run_process(&spec)?;
    Ok((spec, report))
}
