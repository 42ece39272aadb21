use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order; column `i` of `vectors` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct Eigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> Eigen<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Rebuilds `V f(diag) V^dagger`.
    pub fn reconstruct(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let w = Complex::new(f(self.values[j]), T::zero());
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> Eigen<T> {
    let n = m.nrows();
    if n == 1 {
        return Eigen {
            values: vec![m[(0, 0)].re],
            vectors: CMatrix::identity(1, 1),
        };
    }
    let se = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Eigen { values, vectors }
}

pub(crate) fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Largest entrywise modulus of `a - b`.
pub(crate) fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).modulus())
        .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
}

pub(crate) fn hermitize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = c(T::lit(0.5));
    (m + m.adjoint()) * half
}

pub(crate) fn trace_re<T: Real>(m: &CMatrix<T>) -> T {
    (0..m.nrows()).fold(T::zero(), |acc, i| acc + m[(i, i)].re)
}

/// Row-major mixed-radix digits of `index` for the factor dimensions `dims`
/// (the first factor is the most significant).
pub(crate) fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for f in (0..dims.len()).rev() {
        out[f] = index % dims[f];
        index /= dims[f];
    }
}

pub(crate) fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// For a reordering of tensor factors, `map[new_index] = old_index`, where the
/// new factor at position `p` is the old factor `order[p]`.
pub(crate) fn permutation_index_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let new_dims: Vec<usize> = order.iter().map(|&f| dims[f]).collect();
    let total: usize = dims.iter().product();
    let mut new_digits = vec![0; dims.len()];
    let mut old_digits = vec![0; dims.len()];
    (0..total)
        .map(|n| {
            digits(n, &new_dims, &mut new_digits);
            for (p, &f) in order.iter().enumerate() {
                old_digits[f] = new_digits[p];
            }
            compose(&old_digits, dims)
        })
        .collect()
}
