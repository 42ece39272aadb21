use std::sync::OnceLock;

use super::linalg::{
    c, compose, digits, hermitian_eigen, hermitize, max_abs_diff, permutation_index_map, trace_re, CMatrix,
    CVector, Eigen,
};
use super::operator::Unitary;
use super::{EIG_CLAMP, HERMITIAN_TOL, TRACE_TOL};
use crate::error::{arg, Error, Result};
use crate::scalar::Real;

/// Largest total Hilbert-space dimension produced by [`QState::tensor`].
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Density matrix together with the dimensions of its tensor factors.
///
/// Eigenvalues are cached on first use; negative eigenvalues within
/// `EIG_CLAMP` of zero are reported as exactly zero.
#[derive(Debug, Clone)]
pub struct QState<T: Real> {
    matrix: CMatrix<T>,
    dims: Vec<usize>,
    eig: OnceLock<Eigen<T>>,
}

impl<T: Real> QState<T> {
    /// Validates Hermiticity, unit trace, and positivity.
    pub fn new(matrix: CMatrix<T>, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("state is {}x{}", matrix.nrows(), matrix.ncols())));
        }
        check_dims(&dims, matrix.nrows())?;
        let dev = max_abs_diff(&matrix, &matrix.adjoint());
        if dev > T::tol(HERMITIAN_TOL) {
            return Err(Error::Invariant(format!("state not Hermitian (deviation {dev:e})")));
        }
        let tr = trace_re(&matrix);
        if (tr - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::Invariant(format!("trace {tr} differs from 1")));
        }
        let matrix = hermitize(&matrix);
        let raw = hermitian_eigen(&matrix);
        if raw.min() < -T::tol(EIG_CLAMP) {
            return Err(Error::Invariant(format!("negative eigenvalue {:e}", raw.min())));
        }
        let state = Self { matrix, dims, eig: OnceLock::new() };
        let _ = state.eig.set(clamp(raw));
        Ok(state)
    }

    /// Single-factor convenience constructor.
    pub fn from_matrix(matrix: CMatrix<T>) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(matrix, vec![d])
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix<T>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        Self { matrix: hermitize(&matrix), dims, eig: OnceLock::new() }
    }

    /// `sum_i p_i |v_i><v_i|` with `v_i` the columns of `basis`.
    pub fn from_spectrum(probs: &[T], basis: &Unitary<T>) -> Result<Self> {
        let n = probs.len();
        if basis.dim() != n {
            return Err(Error::Dimension(format!("{n} eigenvalues for a {}-dim basis", basis.dim())));
        }
        check_distribution(probs)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| probs[b].partial_cmp(&probs[a]).unwrap_or(std::cmp::Ordering::Equal));
        let eig = Eigen {
            values: order.iter().map(|&i| probs[i]).collect(),
            vectors: CMatrix::from_fn(n, n, |r, col| basis.matrix()[(r, order[col])]),
        };
        let state = Self::from_matrix_unchecked(eig.reconstruct(|x| x), vec![n]);
        let _ = state.eig.set(eig);
        Ok(state)
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(probs: &[T]) -> Result<Self> {
        Self::from_spectrum(probs, &Unitary::identity(probs.len()))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let p = T::one() / T::from_usize(d).expect("dimension");
        Self::diagonal(&vec![p; d]).expect("uniform distribution")
    }

    /// Computational basis state `|index><index|`.
    pub fn basis_state(d: usize, index: usize) -> Result<Self> {
        if index >= d {
            return arg(format!("basis index {index} out of range for dimension {d}"));
        }
        let mut p = vec![T::zero(); d];
        p[index] = T::one();
        Self::diagonal(&p)
    }

    /// `|psi><psi|` for a vector normalised here.
    pub fn pure(psi: &CVector<T>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, psi.len())?;
        let norm = psi.norm();
        if norm <= T::zero() {
            return arg("zero vector");
        }
        let v = psi.unscale(norm);
        Ok(Self::from_matrix_unchecked(&v * v.adjoint(), dims))
    }

    /// Returns a copy with a different factor structure of the same total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.dim())?;
        Ok(Self { matrix: self.matrix.clone(), dims, eig: self.eig.clone() })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn eigen(&self) -> &Eigen<T> {
        self.eig.get_or_init(|| clamp(hermitian_eigen(&self.matrix)))
    }

    /// Eigenvalues in descending order, clamped at zero.
    pub fn spectrum(&self) -> &[T] {
        &self.eigen().values
    }

    pub fn lambda_min(&self) -> T {
        self.eigen().min()
    }

    pub fn lambda_max(&self) -> T {
        self.eigen().max()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: T) -> usize {
        self.spectrum().iter().filter(|&&p| p > tol).count()
    }

    pub fn trace(&self) -> T {
        trace_re(&self.matrix)
    }

    /// Largest entrywise deviation from another state of the same dimension.
    pub fn max_abs_diff(&self, other: &QState<T>) -> T {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn tensor(&self, other: &QState<T>) -> Result<Self> {
        self.tensor_with_limit(other, DEFAULT_MAX_DIM)
    }

    pub fn tensor_with_limit(&self, other: &QState<T>, max_dim: usize) -> Result<Self> {
        let requested = self.dim() * other.dim();
        if requested > max_dim {
            return Err(Error::Size { requested, max: max_dim });
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let state = Self { matrix: self.matrix.kronecker(&other.matrix), dims, eig: OnceLock::new() };
        // spectrum of a product is the pointwise product of the spectra
        if let (Some(a), Some(b)) = (self.eig.get(), other.eig.get()) {
            let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(requested);
            for (i, &x) in a.values.iter().enumerate() {
                for (j, &y) in b.values.iter().enumerate() {
                    pairs.push((x * y, i, j));
                }
            }
            pairs.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap_or(std::cmp::Ordering::Equal));
            let n = requested;
            let mut vectors = CMatrix::zeros(n, n);
            for (col, &(_, i, j)) in pairs.iter().enumerate() {
                let v = a.vectors.column(i).kronecker(&b.vectors.column(j));
                vectors.set_column(col, &v);
            }
            let _ = state.eig.set(Eigen { values: pairs.iter().map(|p| p.0).collect(), vectors });
        }
        Ok(state)
    }

    /// Reduced state on the factors in `keep` (in their original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        if keep.is_empty() {
            return arg("partial trace must keep at least one factor");
        }
        let mut kept = vec![false; n];
        for &k in keep {
            if k >= n {
                return arg(format!("factor index {k} out of range ({n} factors)"));
            }
            if kept[k] {
                return arg(format!("factor index {k} repeated"));
            }
            kept[k] = true;
        }
        if kept.iter().all(|&b| b) {
            return Ok(self.clone());
        }
        let keep_f: Vec<usize> = (0..n).filter(|&f| kept[f]).collect();
        let trace_f: Vec<usize> = (0..n).filter(|&f| !kept[f]).collect();
        let offsets = |factors: &[usize]| -> Vec<usize> {
            let sub: Vec<usize> = factors.iter().map(|&f| self.dims[f]).collect();
            let total: usize = sub.iter().product();
            let mut local = vec![0; factors.len()];
            let mut full = vec![0; n];
            (0..total)
                .map(|idx| {
                    digits(idx, &sub, &mut local);
                    full.iter_mut().for_each(|x| *x = 0);
                    for (p, &f) in factors.iter().enumerate() {
                        full[f] = local[p];
                    }
                    compose(&full, &self.dims)
                })
                .collect()
        };
        let ok = offsets(&keep_f);
        let ot = offsets(&trace_f);
        let dk = ok.len();
        let mut out = CMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                let mut acc = c(T::zero());
                for &t in &ot {
                    acc += self.matrix[(ok[i] + t, ok[j] + t)];
                }
                out[(i, j)] = acc;
            }
        }
        let dims = keep_f.iter().map(|&f| self.dims[f]).collect();
        Ok(Self::from_matrix_unchecked(out, dims))
    }

    /// Reorders tensor factors: the new factor at position `p` is old factor `order[p]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&f| f >= n || std::mem::replace(&mut seen[f], true)) {
            return arg(format!("{order:?} is not a permutation of {n} factors"));
        }
        let map = permutation_index_map(&self.dims, order);
        let d = self.dim();
        let m = CMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]);
        let dims = order.iter().map(|&f| self.dims[f]).collect();
        let state = Self { matrix: m, dims, eig: OnceLock::new() };
        if let Some(e) = self.eig.get() {
            let vectors = CMatrix::from_fn(d, d, |i, j| e.vectors[(map[i], j)]);
            let _ = state.eig.set(Eigen { values: e.values.clone(), vectors });
        }
        Ok(state)
    }

    /// `U rho U^dagger`.
    pub fn apply_unitary(&self, u: &Unitary<T>) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "unitary of dimension {} on a {}-dim state",
                u.dim(),
                self.dim()
            )));
        }
        let m = u.matrix() * &self.matrix * u.matrix().adjoint();
        let state = Self::from_matrix_unchecked(m, self.dims.clone());
        if let Some(e) = self.eig.get() {
            let _ = state.eig.set(Eigen { values: e.values.clone(), vectors: u.matrix() * &e.vectors });
        }
        Ok(state)
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn mix(&self, other: &QState<T>, t: T) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        if t < T::zero() || t > T::one() {
            return arg("mixing weight outside [0, 1]");
        }
        let m = &self.matrix * c(T::one() - t) + &other.matrix * c(t);
        Ok(Self::from_matrix_unchecked(m, self.dims.clone()))
    }
}

fn clamp<T: Real>(mut e: Eigen<T>) -> Eigen<T> {
    for v in e.values.iter_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    e
}

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != total {
        return Err(Error::Dimension(format!("factor dims {dims:?} do not multiply to {total}")));
    }
    Ok(())
}

pub(crate) fn check_distribution<T: Real>(p: &[T]) -> Result<()> {
    if p.iter().any(|&x| x < -T::tol(EIG_CLAMP) || !x.is_finite()) {
        return Err(Error::Invariant("negative or non-finite probability".into()));
    }
    let total = p.iter().fold(T::zero(), |a, &b| a + b);
    if (total - T::one()).abs() > T::tol(TRACE_TOL) {
        return Err(Error::Invariant(format!("probabilities sum to {total}")));
    }
    Ok(())
}
