//! Stepwise processes approaching the Landauer bound: the system is swapped
//! in turn with `k` reservoirs whose thermal states interpolate between the
//! initial and the target state.

use super::{run_process, ProcessReport, ProcessSpec};
use crate::bounds::compute_m;
use crate::error::{arg, Error, Result};
use crate::quantum::{relative_entropy, von_neumann_entropy, CMatrix, QState, Unitary, SUPPORT_TOL};
use crate::scalar::Real;
use crate::thermo::Reservoir;

/// Largest total dimension accepted by the dense oracle.
const DENSE_MAX_DIM: usize = 4096;

/// How the intermediate states are chosen.
#[derive(Debug, Clone)]
pub enum Interpolation<T: Real> {
    /// `rho_i = (1 - i/k) rho_0 + (i/k) rho'_S`
    LinearMixture,
    /// Explicit `rho_1, ..., rho_{k-1}`; `rho_k` is always the target.
    Samples(Vec<QState<T>>),
}

#[derive(Debug, Clone)]
pub struct KStepSpec<T: Real> {
    pub rho_s: QState<T>,
    pub rho_target: QState<T>,
    pub k: usize,
    pub interpolation: Interpolation<T>,
}

impl<T: Real> KStepSpec<T> {
    pub fn linear(rho_s: QState<T>, rho_target: QState<T>, k: usize) -> Self {
        Self { rho_s, rho_target, k, interpolation: Interpolation::LinearMixture }
    }
}

#[derive(Debug, Clone)]
pub struct KStepReport<T> {
    pub k: usize,
    /// Rank of the target; every reservoir has this dimension.
    pub rank: usize,
    pub delta_s: T,
    /// `dS + sum_i D(rho_{i-1} || rho_i)`
    pub beta_delta_q: T,
    /// `sum_i tr[(rho_{i-1} - rho_i)(-log rho_i)]`, the heat summed step by step.
    pub beta_delta_q_direct: T,
    /// `D(rho_{i-1} || rho_i)` for `i = 1..k`.
    pub step_divergences: Vec<T>,
    /// `beta dQ - dS`
    pub gap: T,
    /// `(D(rho_0 || rho') + D(rho' || rho_0)) / k`, linear interpolation only.
    pub upper_bound: Option<T>,
    /// `k M(dS/k, r)`
    pub lower_bound: T,
    /// Whether a rotation into the target support was needed first.
    pub rotated: bool,
}

/// Path data shared by the analytic evaluation and the dense oracle.
struct Path<T: Real> {
    /// Eigenvectors of the target, support first.
    basis: Unitary<T>,
    rank: usize,
    u0: Option<Unitary<T>>,
    rho0: QState<T>,
    /// `rho_0, ..., rho_k` restricted to the target support.
    restricted: Vec<QState<T>>,
}

fn restrict<T: Real>(rho: &CMatrix<T>, basis: &Unitary<T>, r: usize) -> QState<T> {
    let w = basis.matrix().columns(0, r);
    QState::from_matrix_unchecked(w.adjoint() * rho * w, vec![r])
}

fn build_path<T: Real>(spec: &KStepSpec<T>) -> Result<Path<T>> {
    let d = spec.rho_s.dim();
    if spec.rho_target.dim() != d {
        return Err(Error::Dimension(format!("{d} vs {}", spec.rho_target.dim())));
    }
    if spec.k == 0 {
        return arg("at least one step is required");
    }
    let tol = T::tol(SUPPORT_TOL);
    let r = spec.rho_target.rank(tol);
    let rs = spec.rho_s.rank(tol);
    if rs > r {
        return arg(format!(
            "target rank {r} is below the initial rank {rs}; rank-decreasing processes need \
             an infinite reservoir (see pure_erasure_truncated)"
        ));
    }
    let target = spec.rho_target.eigen();
    let basis = Unitary::from_matrix_unchecked(target.vectors.clone());
    let w = basis.matrix().columns(0, r);
    let inside = (w.adjoint() * spec.rho_s.matrix() * w).trace().re;
    let (u0, rho0) = if T::one() - inside <= tol {
        (None, spec.rho_s.clone())
    } else {
        let v = spec.rho_s.eigen().vectors.adjoint();
        let u0 = Unitary::from_matrix_unchecked(basis.matrix() * v);
        let rho0 = spec.rho_s.apply_unitary(&u0)?;
        (Some(u0), rho0)
    };
    let k = spec.k;
    let mut restricted = Vec::with_capacity(k + 1);
    restricted.push(restrict(rho0.matrix(), &basis, r));
    match &spec.interpolation {
        Interpolation::LinearMixture => {
            for i in 1..k {
                let t = T::from_usize(i).unwrap() / T::from_usize(k).unwrap();
                let m = rho0.matrix() * nalgebra::Complex::new(T::one() - t, T::zero())
                    + spec.rho_target.matrix() * nalgebra::Complex::new(t, T::zero());
                restricted.push(restrict(&m, &basis, r));
            }
        }
        Interpolation::Samples(samples) => {
            if samples.len() + 1 != k {
                return arg(format!("{} intermediate states given for {k} steps", samples.len()));
            }
            for s in samples {
                if s.dim() != d {
                    return Err(Error::Dimension(format!("intermediate state of dimension {}", s.dim())));
                }
                let q = restrict(s.matrix(), &basis, r);
                if (T::one() - q.trace()).abs() > tol || q.lambda_min() <= tol {
                    return arg("intermediate states must have full rank on the target support");
                }
                restricted.push(q);
            }
        }
    }
    restricted.push(restrict(spec.rho_target.matrix(), &basis, r));
    Ok(Path { basis, rank: r, u0, rho0, restricted })
}

/// Heat of the `k`-step process evaluated on `r`-dimensional marginals only.
pub fn build_kstep_process<T: Real>(spec: &KStepSpec<T>) -> Result<KStepReport<T>> {
    let path = build_path(spec)?;
    let delta_s = von_neumann_entropy(&spec.rho_s) - von_neumann_entropy(&spec.rho_target);
    let mut step_divergences = Vec::with_capacity(spec.k);
    let mut direct = T::zero();
    for pair in path.restricted.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        step_divergences.push(relative_entropy(prev, next)?);
        let minus_log = next.eigen().reconstruct(|p| -p.ln());
        direct += ((prev.matrix() - next.matrix()) * minus_log).trace().re;
    }
    let gap = step_divergences.iter().fold(T::zero(), |a, &b| a + b);
    let kf = T::from_usize(spec.k).unwrap();
    let upper_bound = match spec.interpolation {
        Interpolation::LinearMixture => {
            let fwd = relative_entropy(&path.rho0, &spec.rho_target)?;
            let back = relative_entropy(&spec.rho_target, &path.rho0)?;
            Some((fwd + back) / kf)
        }
        Interpolation::Samples(_) => None,
    };
    let lower_bound = if path.rank >= 2 {
        let lr = T::from_usize(path.rank).unwrap().ln();
        let x = (delta_s / kf).max(-lr).min(lr);
        kf * compute_m(x, path.rank)?.value
    } else {
        T::zero()
    };
    Ok(KStepReport {
        k: spec.k,
        rank: path.rank,
        delta_s,
        beta_delta_q: delta_s + gap,
        beta_delta_q_direct: direct,
        step_divergences,
        gap,
        upper_bound,
        lower_bound,
        rotated: path.u0.is_some(),
    })
}

/// The same process on the full joint space `S (x) R_1 (x) ... (x) R_k`, for
/// small `k`.
pub fn kstep_dense_oracle<T: Real>(spec: &KStepSpec<T>) -> Result<(ProcessSpec<T>, ProcessReport<T>)> {
    let path = build_path(spec)?;
    let (d, r, k) = (spec.rho_s.dim(), path.rank, spec.k);
    let total = d * r.pow(k as u32);
    if total > DENSE_MAX_DIM {
        return Err(Error::Size { requested: total, max: DENSE_MAX_DIM });
    }
    let mut reservoir_state = path.restricted[1].clone();
    for q in &path.restricted[2..] {
        reservoir_state = reservoir_state.tensor(q)?;
    }
    let reservoir = Reservoir::from_state(&reservoir_state)?;

    // exchange the target support of S with one r-dimensional slot
    let mut perm = Vec::with_capacity(d * r);
    for a in 0..d {
        for b in 0..r {
            perm.push(if a < r { b * r + a } else { a * r + b });
        }
    }
    let frame = path.basis.kron(&Unitary::identity(r));
    let exchange = frame.then_after(&Unitary::from_permutation(&perm)?)?.then_after(&frame.adjoint())?;

    let mut dims = vec![d];
    dims.extend(std::iter::repeat_n(r, k));
    let mut u = match &path.u0 {
        Some(u0) => Unitary::embed(u0, &[0], &dims)?,
        None => Unitary::identity(total),
    };
    for slot in 1..=k {
        u = Unitary::embed(&exchange, &[0, slot], &dims)?.then_after(&u)?;
    }
    let process = ProcessSpec::new(spec.rho_s.clone(), reservoir, u)?;
    let report = run_process(&process)?;
    Ok((process, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{haar_unitary, random_state};

    fn qubit_example(k: usize) -> KStepSpec<f64> {
        KStepSpec::linear(QState::maximally_mixed(2), QState::diagonal(&[0.9, 0.1]).unwrap(), k)
    }

    #[test]
    fn single_step_is_a_swap() {
        let spec = qubit_example(1);
        let r = build_kstep_process(&spec).unwrap();
        let d = relative_entropy(&spec.rho_s, &spec.rho_target).unwrap();
        assert!((r.beta_delta_q - (r.delta_s + d)).abs() < 1e-12);
    }

    #[test]
    fn gap_between_bounds() {
        for k in [10, 100, 1000] {
            let r = build_kstep_process(&qubit_example(k)).unwrap();
            assert!(r.gap >= r.lower_bound - 1e-12, "k = {k}");
            assert!(r.gap <= r.upper_bound.unwrap() + 1e-12, "k = {k}");
            assert!((r.beta_delta_q - r.beta_delta_q_direct).abs() < 1e-10);
        }
    }

    #[test]
    fn gap_decays_as_one_over_k() {
        let g100 = build_kstep_process(&qubit_example(100)).unwrap().gap;
        let g200 = build_kstep_process(&qubit_example(200)).unwrap().gap;
        let ratio = g100 / g200;
        assert!((1.8..=2.2).contains(&ratio), "{ratio}");
    }

    #[test]
    fn dense_oracle_agrees() {
        for k in 1..=3 {
            let spec = qubit_example(k);
            let analytic = build_kstep_process(&spec).unwrap();
            let (_, dense) = kstep_dense_oracle(&spec).unwrap();
            assert!((dense.beta_delta_q - analytic.beta_delta_q).abs() < 1e-8, "k = {k}");
            assert!((dense.delta_s - analytic.delta_s).abs() < 1e-10);
            assert!(dense.final_system.max_abs_diff(&spec.rho_target) < 1e-10);
        }
    }

    #[test]
    fn rank_deficient_start_is_rotated_into_support() {
        // pure start outside the support of a rank-2 target in dimension 3
        let target = QState::<f64>::diagonal(&[0.7, 0.3, 0.0]).unwrap();
        let start = QState::basis_state(3, 2).unwrap();
        let spec = KStepSpec::linear(start, target.clone(), 3);
        let r = build_kstep_process(&spec).unwrap();
        assert!(r.rotated && r.rank == 2);
        let (_, dense) = kstep_dense_oracle(&spec).unwrap();
        assert!((dense.beta_delta_q - r.beta_delta_q).abs() < 1e-8);
        assert!(dense.final_system.max_abs_diff(&target) < 1e-10);
    }

    #[test]
    fn random_target_dense_oracle() {
        let target = random_state::<f64>(3, 3, 8).unwrap().apply_unitary(&haar_unitary(3, 9)).unwrap();
        let start = random_state::<f64>(3, 2, 10).unwrap();
        let spec = KStepSpec::linear(start, target, 2);
        let r = build_kstep_process(&spec).unwrap();
        let (_, dense) = kstep_dense_oracle(&spec).unwrap();
        assert!((dense.beta_delta_q - r.beta_delta_q).abs() < 1e-8);
    }

    #[test]
    fn rank_decrease_rejected() {
        let spec = KStepSpec::linear(QState::<f64>::maximally_mixed(2), QState::basis_state(2, 0).unwrap(), 4);
        assert!(matches!(build_kstep_process(&spec), Err(Error::Argument(_))));
    }

    #[test]
    fn custom_samples() {
        let mid = QState::<f64>::diagonal(&[0.7, 0.3]).unwrap();
        let spec = KStepSpec {
            rho_s: QState::maximally_mixed(2),
            rho_target: QState::diagonal(&[0.9, 0.1]).unwrap(),
            k: 2,
            interpolation: Interpolation::Samples(vec![mid]),
        };
        let r = build_kstep_process(&spec).unwrap();
        assert!(r.upper_bound.is_none());
        let (_, dense) = kstep_dense_oracle(&spec).unwrap();
        assert!((dense.beta_delta_q - r.beta_delta_q).abs() < 1e-8);
    }
}
