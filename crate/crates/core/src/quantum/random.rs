use nalgebra::{Complex, ComplexField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::linalg::CMatrix;
use super::operator::{HermitianOp, Unitary};
use super::state::QState;
use crate::error::{arg, Result};
use crate::scalar::Real;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn haar_unitary_from<T: Real, R: Rng>(d: usize, rng: &mut R) -> Unitary<T> {
    let g = CMatrix::<T>::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix the phases so that the distribution is Haar
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.modulus();
        if n > T::zero() {
            let phase = rjj / Complex::new(n, T::zero());
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    Unitary::from_matrix_unchecked(q)
}

/// Haar-distributed unitary, deterministic per seed.
pub fn haar_unitary<T: Real>(d: usize, seed: u64) -> Unitary<T> {
    haar_unitary_from(d, &mut rng_from_seed(seed))
}

pub(crate) fn random_state_from<T: Real, R: Rng>(d: usize, rank: usize, rng: &mut R) -> Result<QState<T>> {
    if rank == 0 || rank > d {
        return arg(format!("rank {rank} impossible in dimension {d}"));
    }
    let mut w: Vec<f64> = (0..rank).map(|_| rng.sample::<f64, _>(Exp1) + 1e-3).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w.resize(d, 0.0);
    let probs: Vec<T> = w.into_iter().map(T::lit).collect();
    let basis = haar_unitary_from(d, rng);
    QState::from_spectrum(&probs, &basis)
}

/// Random state of the requested rank: flat-Dirichlet spectrum in a Haar basis.
pub fn random_state<T: Real>(d: usize, rank: usize, seed: u64) -> Result<QState<T>> {
    random_state_from(d, rank, &mut rng_from_seed(seed))
}

pub(crate) fn random_hamiltonian_from<T: Real, R: Rng>(d: usize, lo: f64, hi: f64, rng: &mut R) -> HermitianOp<T> {
    let values: Vec<T> = (0..d).map(|_| T::lit(rng.random_range(lo..hi))).collect();
    let basis = haar_unitary_from(d, rng);
    HermitianOp::from_spectrum(&values, &basis).expect("dimensions agree")
}

/// Random Hamiltonian with eigenvalues uniform in `[lo, hi)` and a Haar eigenbasis.
pub fn random_hamiltonian<T: Real>(d: usize, lo: f64, hi: f64, seed: u64) -> HermitianOp<T> {
    random_hamiltonian_from(d, lo, hi, &mut rng_from_seed(seed))
}
