use super::state::QState;
use super::{SUPPORT_TOL, ZERO_EIG};
use crate::error::{arg, Error, Result};
use crate::scalar::Real;

/// `-tr[rho log rho]` in nats.
pub fn von_neumann_entropy<T: Real>(s: &QState<T>) -> T {
    let cut = T::tol(ZERO_EIG);
    -s.spectrum().iter().filter(|&&p| p > cut).fold(T::zero(), |acc, &p| acc + p.xlogx())
}

/// `D(sigma || rho) = tr[sigma log sigma] - tr[sigma log rho]`, `+inf` when the
/// support of `sigma` is not contained in that of `rho`.
pub fn relative_entropy<T: Real>(sigma: &QState<T>, rho: &QState<T>) -> Result<T> {
    if sigma.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "relative entropy between dimensions {} and {}",
            sigma.dim(),
            rho.dim()
        )));
    }
    let support = T::tol(SUPPORT_TOL);
    let cut = T::tol(ZERO_EIG);
    let es = sigma.eigen();
    let er = rho.eigen();
    let overlap = es.vectors.adjoint() * &er.vectors;
    let mut d = T::zero();
    for (i, &si) in es.values.iter().enumerate() {
        if si <= cut {
            continue;
        }
        let mut cross = T::zero();
        let mut kernel = T::zero();
        for (j, &rj) in er.values.iter().enumerate() {
            let w = overlap[(i, j)].norm_sqr();
            if rj > support {
                cross += w * rj.ln();
            } else {
                kernel += w;
            }
        }
        if si > support && kernel > support {
            return Ok(T::infinity());
        }
        d += si * (si.ln() - cross);
    }
    Ok(if d < T::zero() { T::zero() } else { d })
}

fn check_disjoint(n: usize, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    if a.is_empty() || b.is_empty() {
        return arg("both sides of a cut must be nonempty");
    }
    let mut seen = vec![false; n];
    for &f in a.iter().chain(b) {
        if f >= n {
            return arg(format!("factor index {f} out of range ({n} factors)"));
        }
        if seen[f] {
            return arg(format!("factor {f} appears on both sides of the cut"));
        }
        seen[f] = true;
    }
    Ok((0..n).filter(|&f| seen[f]).collect())
}

/// `I(A:B) = S(A) + S(B) - S(AB)` for disjoint factor sets `a`, `b`; factors in
/// neither set are traced out first.
pub fn mutual_information<T: Real>(s: &QState<T>, a: &[usize], b: &[usize]) -> Result<T> {
    let ab = check_disjoint(s.num_factors(), a, b)?;
    let sa = von_neumann_entropy(&s.partial_trace(a)?);
    let sb = von_neumann_entropy(&s.partial_trace(b)?);
    let sab = von_neumann_entropy(&s.partial_trace(&ab)?);
    Ok(sa + sb - sab)
}

/// `S(A|B) = S(AB) - S(B)`.
pub fn conditional_entropy<T: Real>(s: &QState<T>, target: &[usize], condition: &[usize]) -> Result<T> {
    let ab = check_disjoint(s.num_factors(), target, condition)?;
    let sab = von_neumann_entropy(&s.partial_trace(&ab)?);
    let sb = von_neumann_entropy(&s.partial_trace(condition)?);
    Ok(sab - sb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::c;
    use crate::quantum::{haar_unitary, random_state, CVector};

    fn diag(p: &[f64]) -> QState<f64> {
        QState::diagonal(p).unwrap()
    }

    fn bell() -> QState<f64> {
        let s = 0.5f64.sqrt();
        QState::pure(&CVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]), vec![2, 2]).unwrap()
    }

    #[test]
    fn entropy_of_pure_and_mixed() {
        assert_eq!(von_neumann_entropy(&random_state::<f64>(4, 1, 3).unwrap()), 0.0);
        let mm = QState::<f64>::maximally_mixed(16);
        assert!((von_neumann_entropy(&mm) - 16f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn entropy_matches_scalar_formula() {
        let oracle = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((von_neumann_entropy(&diag(&[0.25, 0.75])) - oracle).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_cases() {
        let r = random_state::<f64>(3, 3, 8).unwrap();
        assert!(relative_entropy(&r, &r).unwrap() < 1e-12);
        let d = relative_entropy(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap();
        assert!(d.is_infinite());
        // classical KL oracle
        let kl = 0.3f64 * (0.3f64 / 0.6).ln() + 0.7 * (0.7f64 / 0.4).ln();
        let d = relative_entropy(&diag(&[0.3, 0.7]), &diag(&[0.6, 0.4])).unwrap();
        assert!((d - kl).abs() < 1e-12);
        assert!(relative_entropy(&diag(&[0.5, 0.5]), &QState::maximally_mixed(3)).is_err());
    }

    #[test]
    fn relative_entropy_finite_inside_support() {
        let d = relative_entropy(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5])).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn mutual_information_cases() {
        let a = random_state::<f64>(2, 2, 1).unwrap();
        let b = random_state::<f64>(3, 3, 2).unwrap();
        let prod = a.tensor(&b).unwrap();
        assert!(mutual_information(&prod, &[0], &[1]).unwrap().abs() < 1e-12);
        let i = mutual_information(&bell(), &[0], &[1]).unwrap();
        assert!((i - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_cases() {
        let b = bell();
        assert!((conditional_entropy(&b, &[0], &[1]).unwrap() + 2f64.ln()).abs() < 1e-12);
        let cc = diag(&[0.3, 0.0, 0.0, 0.7]).with_dims(vec![2, 2]).unwrap();
        assert!(conditional_entropy(&cc, &[0], &[1]).unwrap().abs() < 1e-12);
        let a = random_state::<f64>(2, 2, 5).unwrap();
        let prod = a.tensor(&random_state::<f64>(2, 2, 6).unwrap()).unwrap();
        let sa = von_neumann_entropy(&a);
        assert!((conditional_entropy(&prod, &[0], &[1]).unwrap() - sa).abs() < 1e-12);
    }

    #[test]
    fn unitary_invariance_of_relative_entropy() {
        let s = random_state::<f64>(4, 4, 40).unwrap();
        let r = random_state::<f64>(4, 4, 41).unwrap();
        let u = haar_unitary::<f64>(4, 42);
        let d0 = relative_entropy(&s, &r).unwrap();
        let d1 = relative_entropy(&s.apply_unitary(&u).unwrap(), &r.apply_unitary(&u).unwrap()).unwrap();
        assert!((d0 - d1).abs() < 1e-8);
    }
}
