//! Thermodynamics of a finite-dimensional system with Hamiltonian `H`:
//! thermal states at extended-real inverse temperature, the functions
//! `E(beta)`, `S(beta)`, `var_beta(H)`, the inverse map `beta(E)`, free
//! energies and the Pythagoras split of a reservoir relative entropy.

use std::fmt;

use crate::error::{arg, Error, Result};
use crate::optimize::{bisect_decreasing, tanh_sinh};
use crate::quantum::{relative_entropy, von_neumann_entropy, CMatrix, HermitianOp, QState, Unitary};
use crate::scalar::Real;

/// Eigenvalues this close to the extreme one form the ground (top) space.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Energies this close (relative to the spectral spread) to `E_min`/`E_max`
/// are mapped to `beta = +inf`/`-inf`.
pub const ENERGY_EDGE_TOL: f64 = 1e-10;
/// Population on a masked level above which heat is infinite.
pub const MASKED_POPULATION_TOL: f64 = 1e-12;

/// Inverse temperature on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseTemp<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: Real> InverseTemp<T> {
    /// Maps `+-inf` to the corresponding variant; NaN is rejected.
    pub fn new(x: T) -> Result<Self> {
        if x.is_nan_val() {
            arg("inverse temperature is NaN")
        } else if x.is_pos_inf() {
            Ok(Self::PosInf)
        } else if x.is_neg_inf() {
            Ok(Self::NegInf)
        } else {
            Ok(Self::Finite(x))
        }
    }

    pub fn finite(x: T) -> Self {
        Self::new(x).expect("finite inverse temperature")
    }

    pub fn value(self) -> T {
        match self {
            Self::NegInf => T::neg_infinity(),
            Self::Finite(b) => b,
            Self::PosInf => T::infinity(),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// `beta * x` with `(+-inf) * 0 = 0`.
    pub fn times(self, x: T) -> T {
        match self {
            Self::Finite(b) => b * x,
            _ if x == T::zero() => T::zero(),
            _ => self.value() * x,
        }
    }
}

impl<T: Real> fmt::Display for InverseTemp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => write!(f, "-inf"),
            Self::PosInf => write!(f, "inf"),
            Self::Finite(b) => write!(f, "{b}"),
        }
    }
}

/// Spectral data of a Hamiltonian with the thermal functions of `beta`.
#[derive(Debug, Clone)]
pub struct ThermoProfile<T: Real> {
    energies: Vec<T>,
    e_min: T,
    e_max: T,
    degeneracy_tol: T,
}

impl<T: Real> ThermoProfile<T> {
    pub fn new(h: &HermitianOp<T>) -> Self {
        Self::from_energies(h.eigen().values.clone())
    }

    pub fn from_energies(energies: Vec<T>) -> Self {
        let e_max = energies.iter().copied().fold(T::neg_infinity(), |a, b| if b > a { b } else { a });
        let e_min = energies.iter().copied().fold(T::infinity(), |a, b| if b < a { b } else { a });
        let scale = e_max.abs().max(e_min.abs()).max(T::one());
        Self { energies, e_min, e_max, degeneracy_tol: T::tol(DEGENERACY_TOL) * scale }
    }

    pub fn e_min(&self) -> T {
        self.e_min
    }

    pub fn e_max(&self) -> T {
        self.e_max
    }

    pub fn spread(&self) -> T {
        self.e_max - self.e_min
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `H` proportional to the identity.
    pub fn is_trivial(&self) -> bool {
        let scale = self.e_max.abs().max(self.e_min.abs()).max(T::one());
        self.spread() < T::tol(1e-10) * scale
    }

    /// Thermal populations in the order of the eigenvalues, together with
    /// `log p_i` (which stays finite where `p_i` underflows).
    pub fn log_weights(&self, beta: InverseTemp<T>) -> (Vec<T>, Vec<T>) {
        match beta {
            InverseTemp::PosInf | InverseTemp::NegInf => {
                let edge = if beta == InverseTemp::PosInf { self.e_min } else { self.e_max };
                let inside: Vec<bool> =
                    self.energies.iter().map(|&e| (e - edge).abs() <= self.degeneracy_tol).collect();
                let n = T::from_usize(inside.iter().filter(|&&b| b).count()).expect("count");
                let p: Vec<T> = inside.iter().map(|&b| if b { T::one() / n } else { T::zero() }).collect();
                let lp = p.iter().map(|&x| if x > T::zero() { x.ln() } else { T::neg_infinity() }).collect();
                (p, lp)
            }
            InverseTemp::Finite(b) => {
                let reference = if b >= T::zero() { self.e_min } else { self.e_max };
                let x: Vec<T> = self.energies.iter().map(|&e| -b * (e - reference)).collect();
                let z = x.iter().fold(T::zero(), |acc, &v| acc + v.exp());
                let log_z = z.ln();
                let p = x.iter().map(|&v| (v - log_z).exp()).collect();
                let lp = x.iter().map(|&v| v - log_z).collect();
                (p, lp)
            }
        }
    }

    pub fn weights(&self, beta: InverseTemp<T>) -> Vec<T> {
        self.log_weights(beta).0
    }

    /// `E(beta) - E_min`, accurate near the ground state.
    fn excess_over_min(&self, p: &[T]) -> T {
        p.iter().zip(&self.energies).fold(T::zero(), |acc, (&w, &e)| acc + w * (e - self.e_min))
    }

    fn deficit_below_max(&self, p: &[T]) -> T {
        p.iter().zip(&self.energies).fold(T::zero(), |acc, (&w, &e)| acc + w * (self.e_max - e))
    }

    pub fn energy(&self, beta: InverseTemp<T>) -> T {
        let p = self.weights(beta);
        let up = self.excess_over_min(&p);
        let down = self.deficit_below_max(&p);
        if up <= down {
            self.e_min + up
        } else {
            self.e_max - down
        }
    }

    pub fn entropy(&self, beta: InverseTemp<T>) -> T {
        let (p, lp) = self.log_weights(beta);
        -p.iter().zip(&lp).fold(T::zero(), |acc, (&w, &l)| if w > T::zero() { acc + w * l } else { acc })
    }

    pub fn variance(&self, beta: InverseTemp<T>) -> T {
        let p = self.weights(beta);
        let mean = self.energy(beta);
        p.iter().zip(&self.energies).fold(T::zero(), |acc, (&w, &e)| acc + w * (e - mean) * (e - mean))
    }

    /// `var_beta(beta H)`, zero at `beta = +-inf`.
    pub fn heat_capacity(&self, beta: InverseTemp<T>) -> T {
        match beta {
            InverseTemp::Finite(b) => b * b * self.variance(beta),
            _ => T::zero(),
        }
    }

    /// Inverse of the strictly decreasing map `beta -> E(beta)`.
    pub fn beta_of_energy(&self, e: T) -> Result<InverseTemp<T>> {
        if self.is_trivial() {
            return Err(Error::Undefined("beta(E) does not exist for a Hamiltonian proportional to 1".into()));
        }
        let spread = self.spread();
        let edge = T::tol(ENERGY_EDGE_TOL) * spread;
        if e < self.e_min - edge || e > self.e_max + edge || e.is_nan_val() {
            return arg(format!("energy {e} outside [{}, {}]", self.e_min, self.e_max));
        }
        let up = e - self.e_min;
        let down = self.e_max - e;
        if up <= edge {
            return Ok(InverseTemp::PosInf);
        }
        if down <= edge {
            return Ok(InverseTemp::NegInf);
        }
        // signed mismatch, positive while E(beta) > e; decreasing in beta
        let mismatch = |beta: T| -> T {
            let p = self.weights(InverseTemp::Finite(beta));
            if up <= down {
                self.excess_over_min(&p) - up
            } else {
                down - self.deficit_below_max(&p)
            }
        };
        // only beta * spread matters; away from the edges it stays below ~40
        let unit = T::one() / spread;
        let (mut b_lo, mut b_hi) = (-unit, unit);
        for _ in 0..64 {
            if mismatch(b_hi) <= T::zero() {
                break;
            }
            b_lo = b_hi;
            b_hi *= T::lit(2.0);
        }
        for _ in 0..64 {
            if mismatch(b_lo) >= T::zero() {
                break;
            }
            b_hi = b_lo;
            b_lo *= T::lit(2.0);
        }
        Ok(InverseTemp::Finite(bisect_decreasing(mismatch, b_lo, b_hi, 300)))
    }
}

/// `e^{-beta H} / tr e^{-beta H}`; at `beta = +-inf` the maximally mixed state
/// on the ground space of `+-H`.
pub fn thermal_state<T: Real>(h: &HermitianOp<T>, beta: InverseTemp<T>) -> QState<T> {
    let profile = ThermoProfile::new(h);
    let p = profile.weights(beta);
    let basis = Unitary::from_matrix_unchecked(h.eigen().vectors.clone());
    QState::from_spectrum(&p, &basis).expect("thermal weights form a distribution")
}

pub fn thermal_energy<T: Real>(h: &HermitianOp<T>, beta: InverseTemp<T>) -> T {
    ThermoProfile::new(h).energy(beta)
}

pub fn thermal_entropy<T: Real>(h: &HermitianOp<T>, beta: InverseTemp<T>) -> T {
    ThermoProfile::new(h).entropy(beta)
}

pub fn thermal_variance<T: Real>(h: &HermitianOp<T>, beta: InverseTemp<T>) -> T {
    ThermoProfile::new(h).variance(beta)
}

pub fn beta_of_energy<T: Real>(h: &HermitianOp<T>, e: T) -> Result<InverseTemp<T>> {
    ThermoProfile::new(h).beta_of_energy(e)
}

/// Heat capacity `C(T) = var_beta(beta H)`.
pub fn heat_capacity_t<T: Real>(h: &HermitianOp<T>, beta: InverseTemp<T>) -> T {
    ThermoProfile::new(h).heat_capacity(beta)
}

/// Dimensionless free energy `beta tr[H rho] - S(rho)`.
pub fn free_energy<T: Real>(rho: &QState<T>, h: &HermitianOp<T>, beta: InverseTemp<T>) -> Result<T> {
    if rho.dim() != h.dim() {
        return Err(Error::Dimension(format!("state {} vs Hamiltonian {}", rho.dim(), h.dim())));
    }
    Ok(beta.times(h.expectation(rho.matrix())) - von_neumann_entropy(rho))
}

/// Thermal reservoir: Hamiltonian, inverse temperature and the thermal state.
///
/// A reservoir may carry masked levels (formally infinite energy). Masked
/// reservoirs have a Hamiltonian diagonal in the computational basis, the
/// mask indexes basis vectors, and the thermal state puts no weight there.
#[derive(Debug, Clone)]
pub struct Reservoir<T: Real> {
    h: HermitianOp<T>,
    beta: InverseTemp<T>,
    state: QState<T>,
    mask: Option<Vec<bool>>,
}

impl<T: Real> Reservoir<T> {
    pub fn new(h: HermitianOp<T>, beta: InverseTemp<T>) -> Self {
        let state = thermal_state(&h, beta);
        Self { h, beta, state, mask: None }
    }

    /// Reservoir whose thermal state is the given full-rank state, using
    /// `H = -log rho` at `beta = 1`.
    pub fn from_state(rho: &QState<T>) -> Result<Self> {
        let e = rho.eigen();
        if e.min() <= T::tol(1e-12) {
            return arg(format!("state is not full rank (lambda_min = {:e})", e.min()));
        }
        let energies: Vec<T> = e.values.iter().map(|&p| -p.ln()).collect();
        let basis = Unitary::from_matrix_unchecked(e.vectors.clone());
        let h = HermitianOp::from_spectrum(&energies, &basis)?;
        let r = Self::new(h, InverseTemp::Finite(T::one()));
        Ok(Self { state: rho.clone(), ..r })
    }

    /// Diagonal Hamiltonian where `None` entries are masked (energy `+inf`).
    /// Requires `beta` in `(0, +inf]` and at least one unmasked level.
    pub fn masked(levels: &[Option<T>], beta: InverseTemp<T>) -> Result<Self> {
        match beta {
            InverseTemp::Finite(b) if b > T::zero() => {}
            InverseTemp::PosInf => {}
            _ => return arg("masked levels need a strictly positive inverse temperature"),
        }
        let finite: Vec<T> = levels.iter().flatten().copied().collect();
        if finite.is_empty() {
            return arg("every level is masked");
        }
        let profile = ThermoProfile::from_energies(finite);
        let p_unmasked = profile.weights(beta);
        let mut it = p_unmasked.into_iter();
        let p: Vec<T> = levels.iter().map(|l| if l.is_some() { it.next().unwrap() } else { T::zero() }).collect();
        let diag: Vec<T> = levels.iter().map(|l| l.unwrap_or_else(T::zero)).collect();
        let h = HermitianOp::diagonal(&diag);
        let state = QState::diagonal(&p)?;
        Ok(Self { h, beta, state, mask: Some(levels.iter().map(|l| l.is_none()).collect()) })
    }

    /// Relabels the tensor-factor structure of the reservoir state.
    pub fn with_factor_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        self.state = self.state.with_dims(dims)?;
        Ok(self)
    }

    pub fn hamiltonian(&self) -> &HermitianOp<T> {
        &self.h
    }

    pub fn beta(&self) -> InverseTemp<T> {
        self.beta
    }

    pub fn state(&self) -> &QState<T> {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn is_masked(&self) -> bool {
        self.mask.is_some()
    }

    /// Energy of a reservoir state from the finite levels only.
    pub fn energy(&self, rho: &CMatrix<T>) -> T {
        self.h.expectation(rho)
    }

    /// Total population of masked levels.
    pub fn masked_population(&self, rho: &QState<T>) -> T {
        match &self.mask {
            None => T::zero(),
            Some(mask) => mask
                .iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .fold(T::zero(), |acc, (i, _)| acc + rho.matrix()[(i, i)].re),
        }
    }

    /// Smallest and largest energy, with `+inf` for a masked reservoir.
    pub fn energy_range(&self) -> (T, T) {
        match &self.mask {
            None => (self.h.min_eigenvalue(), self.h.max_eigenvalue()),
            Some(mask) => {
                let finite = (0..self.dim()).filter(|&i| !mask[i]).map(|i| self.h.matrix()[(i, i)].re);
                let lo = finite.fold(T::infinity(), |a, b| if b < a { b } else { a });
                let hi = if mask.iter().any(|&m| m) { T::infinity() } else { self.h.max_eigenvalue() };
                (lo, hi)
            }
        }
    }
}

/// Split of `D(rho'_R || rho_R)` through the thermal state of equal energy.
#[derive(Debug, Clone, Copy)]
pub struct PythagorasSplit<T> {
    pub total: T,
    /// `D(rho'_R || rho'_th)`, always finite.
    pub nonthermal: T,
    /// `D(rho'_th || rho_R)`.
    pub thermal: T,
    pub beta_prime: InverseTemp<T>,
}

pub fn pythagoras_decompose<T: Real>(rho_prime: &QState<T>, reservoir: &Reservoir<T>) -> Result<PythagorasSplit<T>> {
    if reservoir.is_masked() {
        return arg("Pythagoras split is not defined for masked reservoirs");
    }
    if rho_prime.dim() != reservoir.dim() {
        return Err(Error::Dimension(format!("state {} vs reservoir {}", rho_prime.dim(), reservoir.dim())));
    }
    let total = relative_entropy(rho_prime, reservoir.state())?;
    let profile = ThermoProfile::new(reservoir.hamiltonian());
    if profile.is_trivial() {
        return Ok(PythagorasSplit { total, nonthermal: total, thermal: T::zero(), beta_prime: reservoir.beta() });
    }
    let e = clamp_energy(&profile, reservoir.energy(rho_prime.matrix()));
    let beta_prime = profile.beta_of_energy(e)?;
    let th = thermal_state(reservoir.hamiltonian(), beta_prime);
    Ok(PythagorasSplit {
        total,
        nonthermal: relative_entropy(rho_prime, &th)?,
        thermal: relative_entropy(&th, reservoir.state())?,
        beta_prime,
    })
}

fn clamp_energy<T: Real>(p: &ThermoProfile<T>, e: T) -> T {
    if e < p.e_min() {
        p.e_min()
    } else if e > p.e_max() {
        p.e_max()
    } else {
        e
    }
}

fn check_energy_range<T: Real>(p: &ThermoProfile<T>, e: T) -> Result<T> {
    let edge = T::tol(ENERGY_EDGE_TOL) * p.spread().max(T::one());
    if e < p.e_min() - edge || e > p.e_max() + edge || e.is_nan_val() {
        return arg(format!("energy {e} outside [{}, {}]", p.e_min(), p.e_max()));
    }
    Ok(clamp_energy(p, e))
}

/// `int_{E_start}^{E_end} beta(E) dE`, evaluated as `S(E_end) - S(E_start)`.
/// Zero for a Hamiltonian proportional to the identity.
pub fn integrate_beta_de<T: Real>(h: &HermitianOp<T>, e_start: T, e_end: T) -> Result<T> {
    let profile = ThermoProfile::new(h);
    let a = check_energy_range(&profile, e_start)?;
    let b = check_energy_range(&profile, e_end)?;
    if profile.is_trivial() || a == b {
        return Ok(T::zero());
    }
    let s_end = profile.entropy(profile.beta_of_energy(b)?);
    let s_start = profile.entropy(profile.beta_of_energy(a)?);
    Ok(s_end - s_start)
}

/// The same integral by direct tanh-sinh quadrature of `beta(E)`; a
/// validation path for [`integrate_beta_de`].
pub fn integrate_beta_de_quadrature<T: Real>(h: &HermitianOp<T>, e_start: T, e_end: T, tol: T) -> Result<T> {
    let profile = ThermoProfile::new(h);
    let a = check_energy_range(&profile, e_start)?;
    let b = check_energy_range(&profile, e_end)?;
    if profile.is_trivial() || a == b {
        return Ok(T::zero());
    }
    let (lo, hi, sign) = if a < b { (a, b, T::one()) } else { (b, a, -T::one()) };
    let v = tanh_sinh(
        |e| match profile.beta_of_energy(e) {
            Ok(InverseTemp::Finite(x)) => x,
            _ => T::infinity(),
        },
        lo,
        hi,
        tol,
    );
    Ok(sign * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_hamiltonian, random_state};

    fn fin(b: f64) -> InverseTemp<f64> {
        InverseTemp::Finite(b)
    }

    #[test]
    fn beta_of_energy_narrow_spectrum() {
        let p = ThermoProfile::from_energies(vec![0.0, 0.004, 0.009]);
        for b in [300.0, -800.0, 2500.0] {
            let got = p.beta_of_energy(p.energy(fin(b))).unwrap().value();
            assert!((got - b).abs() < 1e-6 * b.abs(), "{got} vs {b}");
        }
    }

    #[test]
    fn thermal_state_cases() {
        let h = HermitianOp::<f64>::diagonal(&[0.0, 1.0]);
        let mm = thermal_state(&h, fin(0.0));
        assert!(mm.max_abs_diff(&QState::maximally_mixed(2)) < 1e-15);
        let g = thermal_state(&h, InverseTemp::PosInf);
        assert!(g.max_abs_diff(&QState::diagonal(&[1.0, 0.0]).unwrap()) < 1e-15);
        let z = 1.0 + (-1.0f64).exp();
        let oracle = QState::diagonal(&[1.0 / z, (-1.0f64).exp() / z]).unwrap();
        assert!(thermal_state(&h, fin(1.0)).max_abs_diff(&oracle) < 1e-14);
        let top = thermal_state(&h, InverseTemp::NegInf);
        assert!(top.max_abs_diff(&QState::diagonal(&[0.0, 1.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn thermal_state_commutes_with_h() {
        let h = random_hamiltonian::<f64>(5, -1.0, 1.0, 3);
        let rho = thermal_state(&h, fin(0.8));
        let comm = h.matrix() * rho.matrix() - rho.matrix() * h.matrix();
        assert!(comm.iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn ground_space_degeneracy_grouped() {
        let h = HermitianOp::<f64>::diagonal(&[0.0, 1e-12, 1.0]);
        let g = thermal_state(&h, InverseTemp::PosInf);
        assert!((g.spectrum()[0] - 0.5).abs() < 1e-15);
        assert!((thermal_entropy(&h, InverseTemp::PosInf) - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn two_level_at_infinite_temperature() {
        let h = HermitianOp::<f64>::diagonal(&[0.0, 1.0]);
        assert!((thermal_energy(&h, fin(0.0)) - 0.5).abs() < 1e-15);
        assert!((thermal_entropy(&h, fin(0.0)) - 2f64.ln()).abs() < 1e-15);
        assert!((thermal_variance(&h, fin(0.0)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constant_energy_for_trivial_h() {
        let h = HermitianOp::<f64>::diagonal(&[0.7, 0.7, 0.7]);
        for b in [-3.0, 0.0, 2.0] {
            assert!((thermal_energy(&h, fin(b)) - 0.7).abs() < 1e-15);
        }
        assert!(matches!(beta_of_energy(&h, 0.7), Err(Error::Undefined(_))));
    }

    #[test]
    fn energy_derivative_is_minus_variance() {
        let h = random_hamiltonian::<f64>(5, -1.0, 1.0, 11);
        let (b, step) = (0.7, 1e-5);
        let fd = (thermal_energy(&h, fin(b + step)) - thermal_energy(&h, fin(b - step))) / (2.0 * step);
        let var = thermal_variance(&h, fin(b));
        assert!(((fd + var) / var).abs() < 1e-6);
        let fd = (thermal_entropy(&h, fin(b + step)) - thermal_entropy(&h, fin(b - step))) / (2.0 * step);
        assert!(((fd + b * var) / (b * var)).abs() < 1e-6);
    }

    #[test]
    fn beta_of_energy_round_trip() {
        let h = random_hamiltonian::<f64>(4, 0.0, 1.0, 5);
        for b in [-3.0, -0.1, 0.5, 10.0] {
            let e = thermal_energy(&h, fin(b));
            let back = beta_of_energy(&h, e).unwrap().value();
            assert!((back - b).abs() < 1e-8, "beta {b} -> {back}");
        }
        let mean = h.matrix().trace().re / 4.0;
        assert!(beta_of_energy(&h, mean).unwrap().value().abs() < 1e-10);
        let p = ThermoProfile::new(&h);
        assert_eq!(beta_of_energy(&h, p.e_min()).unwrap(), InverseTemp::PosInf);
        assert_eq!(beta_of_energy(&h, p.e_max()).unwrap(), InverseTemp::NegInf);
        assert!(matches!(beta_of_energy(&h, p.e_max() + 1.0), Err(Error::Argument(_))));
    }

    #[test]
    fn beta_of_energy_derivative() {
        let h = random_hamiltonian::<f64>(4, 0.0, 1.0, 6);
        let p = ThermoProfile::new(&h);
        let e = 0.4 * p.e_min() + 0.6 * p.e_max();
        let step = 1e-6;
        let fd = (p.beta_of_energy(e + step).unwrap().value() - p.beta_of_energy(e - step).unwrap().value())
            / (2.0 * step);
        let var = p.variance(p.beta_of_energy(e).unwrap());
        assert!(((fd + 1.0 / var) * var).abs() < 1e-5);
    }

    #[test]
    fn beta_of_energy_strictly_decreasing() {
        let h = random_hamiltonian::<f64>(3, 0.0, 2.0, 8);
        let p = ThermoProfile::new(&h);
        let mut last = f64::INFINITY;
        for i in 1..50 {
            let e = p.e_min() + p.spread() * i as f64 / 50.0;
            let b = p.beta_of_energy(e).unwrap().value();
            assert!(b < last);
            last = b;
        }
    }

    #[test]
    fn heat_capacity_edges() {
        let h = random_hamiltonian::<f64>(4, 0.0, 1.0, 2);
        assert_eq!(heat_capacity_t(&h, fin(0.0)), 0.0);
        assert_eq!(heat_capacity_t(&h, InverseTemp::PosInf), 0.0);
        assert_eq!(heat_capacity_t(&h, InverseTemp::NegInf), 0.0);
    }

    #[test]
    fn free_energy_identity() {
        let h = random_hamiltonian::<f64>(4, -1.0, 1.0, 21);
        let beta = fin(1.3);
        let th = thermal_state(&h, beta);
        let rho = random_state::<f64>(4, 4, 22).unwrap();
        let d = relative_entropy(&rho, &th).unwrap();
        let f_rho = free_energy(&rho, &h, beta).unwrap();
        let f_th = free_energy(&th, &h, beta).unwrap();
        assert!((d - (f_rho - f_th)).abs() < 1e-9);
        assert!(f_rho > f_th);
        let de = h.expectation(rho.matrix()) - h.expectation(th.matrix());
        let ds = von_neumann_entropy(&rho) - von_neumann_entropy(&th);
        assert!((d - (1.3 * de - ds)).abs() < 1e-10);
    }

    #[test]
    fn pythagoras_cases() {
        let h = random_hamiltonian::<f64>(4, 0.0, 1.0, 31);
        let res = Reservoir::new(h.clone(), fin(0.9));
        let same = pythagoras_decompose(res.state(), &res).unwrap();
        assert!(same.total < 1e-12 && same.nonthermal < 1e-12 && same.thermal < 1e-12);
        assert!((same.beta_prime.value() - 0.9).abs() < 1e-8);
        let th = thermal_state(&h, fin(-0.4));
        let split = pythagoras_decompose(&th, &res).unwrap();
        assert!(split.nonthermal < 1e-10);
        assert!((split.total - split.thermal).abs() < 1e-9);
        let rho = random_state::<f64>(4, 4, 32).unwrap();
        let split = pythagoras_decompose(&rho, &res).unwrap();
        assert!((split.total - split.nonthermal - split.thermal).abs() < 1e-8);
    }

    #[test]
    fn pythagoras_trivial_hamiltonian() {
        let res = Reservoir::new(HermitianOp::<f64>::diagonal(&[1.0, 1.0]), fin(2.0));
        let rho = QState::diagonal(&[0.9, 0.1]).unwrap();
        let split = pythagoras_decompose(&rho, &res).unwrap();
        assert_eq!(split.thermal, 0.0);
        assert_eq!(split.beta_prime, fin(2.0));
        assert_eq!(split.nonthermal, split.total);
    }

    #[test]
    fn integral_matches_entropy_difference_and_quadrature() {
        let h = random_hamiltonian::<f64>(4, 0.0, 1.0, 41);
        let p = ThermoProfile::new(&h);
        let (a, b) = (p.energy(fin(1.5)), p.energy(fin(-0.5)));
        let v = integrate_beta_de(&h, a, b).unwrap();
        let oracle = p.entropy(fin(-0.5)) - p.entropy(fin(1.5));
        assert!((v - oracle).abs() < 1e-6);
        let q = integrate_beta_de_quadrature(&h, a, b, 1e-10).unwrap();
        assert!((q - v).abs() < 1e-5, "{q} vs {v}");
        assert_eq!(integrate_beta_de(&h, a, a).unwrap(), 0.0);
        assert!((integrate_beta_de(&h, b, a).unwrap() + v).abs() < 1e-14);
        assert!(integrate_beta_de(&h, p.e_max() + 1.0, a).is_err());
    }

    #[test]
    fn integral_finite_at_infinite_beta_endpoint() {
        let h = HermitianOp::<f64>::diagonal(&[0.0, 1.0]);
        let v = integrate_beta_de(&h, 0.0, 0.5).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
        let q = integrate_beta_de_quadrature(&h, 0.0, 0.5, 1e-10).unwrap();
        assert!((q - v).abs() < 1e-5, "{q}");
    }

    #[test]
    fn masked_reservoir_has_no_masked_population() {
        let res = Reservoir::<f64>::masked(&[Some(0.0), None, Some(1.0), None], fin(1.0)).unwrap();
        assert_eq!(res.masked_population(res.state()), 0.0);
        assert!(res.energy_range().1.is_infinite());
        assert!(Reservoir::<f64>::masked(&[Some(0.0), None], fin(-1.0)).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let h = HermitianOp::<f32>::diagonal(&[0.0, 1.0, 2.0]);
        let e = thermal_energy(&h, InverseTemp::Finite(0.5f32));
        let back = beta_of_energy(&h, e).unwrap().value();
        assert!((back - 0.5).abs() < 1e-3);
    }
}
