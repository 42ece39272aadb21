use std::sync::OnceLock;

use nalgebra::Complex;

use super::linalg::{c, hermitian_eigen, hermitize, max_abs_diff, permutation_index_map, CMatrix, Eigen};
use super::{HERMITIAN_TOL, UNITARY_TOL};
use crate::error::{arg, Error, Result};
use crate::scalar::Real;

/// Hermitian operator with a lazily computed eigendecomposition.
#[derive(Debug, Clone)]
pub struct HermitianOp<T: Real> {
    matrix: CMatrix<T>,
    eig: OnceLock<Eigen<T>>,
}

impl<T: Real> HermitianOp<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "operator is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return arg("operator entries must be finite");
        }
        let dev = max_abs_diff(&matrix, &matrix.adjoint());
        if dev > T::tol(HERMITIAN_TOL) {
            return Err(Error::Invariant(format!("not Hermitian (deviation {dev:e})")));
        }
        Ok(Self::from_matrix_unchecked(hermitize(&matrix)))
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix<T>) -> Self {
        Self { matrix, eig: OnceLock::new() }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let m = CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(T::zero()) });
        let op = Self::from_matrix_unchecked(m);
        let mut vals: Vec<(usize, T)> = values.iter().copied().enumerate().collect();
        vals.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let vectors = CMatrix::from_fn(n, n, |r, col| {
            if r == vals[col].0 {
                c(T::one())
            } else {
                c(T::zero())
            }
        });
        let _ = op.eig.set(Eigen { values: vals.iter().map(|v| v.1).collect(), vectors });
        op
    }

    /// `V diag(values) V^dagger` for a unitary `V` whose columns are eigenvectors.
    pub fn from_spectrum(values: &[T], basis: &Unitary<T>) -> Result<Self> {
        let n = values.len();
        if basis.dim() != n {
            return Err(Error::Dimension(format!("{n} eigenvalues for a {}-dim basis", basis.dim())));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
        let eig = Eigen {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors: CMatrix::from_fn(n, n, |r, col| basis.matrix()[(r, order[col])]),
        };
        let op = Self::from_matrix_unchecked(hermitize(&eig.reconstruct(|x| x)));
        let _ = op.eig.set(eig);
        Ok(op)
    }

    pub fn identity(d: usize) -> Self {
        Self::diagonal(&vec![T::one(); d])
    }

    pub fn zero(d: usize) -> Self {
        Self::diagonal(&vec![T::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn eigen(&self) -> &Eigen<T> {
        self.eig.get_or_init(|| hermitian_eigen(&self.matrix))
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigen().min()
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigen().max()
    }

    /// Operator norm.
    pub fn norm(&self) -> T {
        let e = self.eigen();
        let (lo, hi) = (e.min().abs(), e.max().abs());
        if lo > hi {
            lo
        } else {
            hi
        }
    }

    /// `tr[H rho]` for a matrix of matching dimension.
    pub fn expectation(&self, rho: &CMatrix<T>) -> T {
        let n = self.dim();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix[(i, j)] * rho[(j, i)]).re;
            }
        }
        acc
    }

    /// `H (x) 1 + 1 (x) K` on the tensor product.
    pub fn local_sum(&self, other: &HermitianOp<T>) -> HermitianOp<T> {
        let ia = CMatrix::<T>::identity(self.dim(), self.dim());
        let ib = CMatrix::<T>::identity(other.dim(), other.dim());
        Self::from_matrix_unchecked(self.matrix.kronecker(&ib) + ia.kronecker(&other.matrix))
    }

    /// Whether the operator is proportional to the identity: spectral spread
    /// below `1e-10 * max(1, ||H||)`.
    pub fn is_trivial(&self) -> bool {
        let e = self.eigen();
        let scale = if self.norm() > T::one() { self.norm() } else { T::one() };
        e.max() - e.min() < T::tol(1e-10) * scale
    }
}

/// Unitary matrix on a (possibly multipartite) space.
#[derive(Debug, Clone)]
pub struct Unitary<T: Real> {
    matrix: CMatrix<T>,
}

impl<T: Real> Unitary<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "unitary is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        let gram = matrix.adjoint() * &matrix;
        let dev = max_abs_diff(&gram, &CMatrix::identity(n, n));
        if dev > T::tol(UNITARY_TOL) {
            return Err(Error::Invariant(format!("not unitary (deviation {dev:e})")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: CMatrix::identity(d, d) }
    }

    /// Permutation unitary sending basis vector `j` to basis vector `perm[j]`.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return arg("not a permutation");
            }
            seen[p] = true;
        }
        let mut m = CMatrix::zeros(n, n);
        for (j, &p) in perm.iter().enumerate() {
            m[(p, j)] = c(T::one());
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    /// `self * other`: apply `other` first.
    pub fn then_after(&self, other: &Unitary<T>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(Self { matrix: &self.matrix * &other.matrix })
    }

    pub fn kron(&self, other: &Unitary<T>) -> Self {
        Self { matrix: self.matrix.kronecker(&other.matrix) }
    }

    /// Lifts `local`, acting on the factors listed in `positions` (in that
    /// order), to the full space with factor dimensions `dims`.
    pub fn embed(local: &Unitary<T>, positions: &[usize], dims: &[usize]) -> Result<Self> {
        let mut used = vec![false; dims.len()];
        for &p in positions {
            if p >= dims.len() || used[p] {
                return arg(format!("invalid factor positions {positions:?}"));
            }
            used[p] = true;
        }
        let local_dim: usize = positions.iter().map(|&p| dims[p]).product();
        if local_dim != local.dim() {
            return Err(Error::Dimension(format!(
                "local unitary has dimension {}, factors give {local_dim}",
                local.dim()
            )));
        }
        let mut order: Vec<usize> = positions.to_vec();
        order.extend((0..dims.len()).filter(|f| !used[*f]));
        let rest: usize = dims.iter().product::<usize>() / local_dim;
        let lifted = local.matrix.kronecker(&CMatrix::<T>::identity(rest, rest));
        let map = permutation_index_map(dims, &order);
        let n = map.len();
        let mut full = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let v = lifted[(a, b)];
                if v != Complex::new(T::zero(), T::zero()) {
                    full[(map[a], map[b])] = v;
                }
            }
        }
        Ok(Self { matrix: full })
    }
}

/// Exchanges tensor factors `i` and `j` (which must have equal dimension).
pub fn swap_unitary<T: Real>(dims: &[usize], i: usize, j: usize) -> Result<Unitary<T>> {
    if i >= dims.len() || j >= dims.len() {
        return arg(format!("factor index out of range for dims {dims:?}"));
    }
    if dims[i] != dims[j] {
        return arg(format!("cannot swap factors of dimensions {} and {}", dims[i], dims[j]));
    }
    let mut order: Vec<usize> = (0..dims.len()).collect();
    order.swap(i, j);
    let map = permutation_index_map(dims, &order);
    // basis vector `old` is sent to `new` with map[new] = old
    let mut perm = vec![0; map.len()];
    for (new, &old) in map.iter().enumerate() {
        perm[old] = new;
    }
    Unitary::from_permutation(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_is_an_involution() {
        let s = swap_unitary::<f64>(&[2, 3, 2], 0, 2).unwrap();
        let sq = s.then_after(&s).unwrap();
        assert!(max_abs_diff(sq.matrix(), &CMatrix::identity(12, 12)) < 1e-15);
    }

    #[test]
    fn swap_rejects_unequal_dims() {
        assert!(swap_unitary::<f64>(&[2, 3], 0, 1).is_err());
    }

    #[test]
    fn trivial_hamiltonian_detected() {
        assert!(HermitianOp::<f64>::diagonal(&[2.0, 2.0, 2.0]).is_trivial());
        assert!(!HermitianOp::<f64>::diagonal(&[0.0, 1e-6]).is_trivial());
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::<f64>::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(HermitianOp::new(m), Err(Error::Invariant(_))));
    }

    #[test]
    fn embed_matches_kron_for_leading_factor() {
        let x = Unitary::<f64>::new(CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])).unwrap();
        let full = Unitary::embed(&x, &[0], &[2, 3]).unwrap();
        let direct = x.kron(&Unitary::identity(3));
        assert!(max_abs_diff(full.matrix(), direct.matrix()) < 1e-15);
        let back = Unitary::embed(&x, &[1], &[3, 2]).unwrap();
        let direct = Unitary::identity(3).kron(&x);
        assert!(max_abs_diff(back.matrix(), direct.matrix()) < 1e-15);
    }
}
