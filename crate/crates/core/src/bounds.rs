//! Finite-size bound functions: the variance constant `N(d)`, the
//! relative-entropy floor `M(x, d)`, the analytic chain below `M`, and the
//! resulting lower bounds on `beta dQ`.

use crate::error::{arg, Result};
use crate::optimize::{golden_section_min, grid_then_golden_min};
use crate::quantum::{relative_entropy, von_neumann_entropy, QState};
use crate::scalar::Real;

/// `x` this close to `log d` gives `M = +inf`.
pub const M_EDGE_TOL: f64 = 1e-9;
/// Slack for physical inequalities checked numerically.
pub const CHECK_TOL: f64 = 1e-8;

const N_GRID: usize = 4000;
const M_GRID: usize = 2000;
const M_REFINE: f64 = 1e-10;

fn check_unit<T: Real>(name: &str, s: T) -> Result<()> {
    if s.is_nan_val() || s < T::zero() || s > T::one() {
        return arg(format!("{name} = {s} outside [0, 1]"));
    }
    Ok(())
}

/// Entropy of `diag(s, 1 - s)`.
pub fn binary_entropy<T: Real>(s: T) -> Result<T> {
    check_unit("s", s)?;
    Ok(-(s.xlogx() + (T::one() - s).xlogx()))
}

/// `D(diag(s, 1-s) || diag(r, 1-r))`, `+inf` when the support of the first
/// is not contained in that of the second.
pub fn binary_relative_entropy<T: Real>(s: T, r: T) -> Result<T> {
    check_unit("s", s)?;
    check_unit("r", r)?;
    Ok(binrel(s, r))
}

fn binrel<T: Real>(s: T, r: T) -> T {
    let term = |a: T, b: T| -> T {
        if a <= T::zero() {
            T::zero()
        } else if b <= T::zero() {
            T::infinity()
        } else {
            a * (a / b).ln()
        }
    };
    let v = term(s, r) + term(T::one() - s, T::one() - r);
    if v < T::zero() {
        T::zero()
    } else {
        v
    }
}

/// Entropy of the spectrum `(1 - u, u/(d-1), ..., u/(d-1))`, i.e.
/// `h(u) + u log(d - 1)`. Strictly increasing on `[0, (d-1)/d]`.
pub fn spread_entropy<T: Real>(u: T, d: usize) -> T {
    let hb = -(u.xlogx() + (T::one() - u).xlogx());
    if d <= 2 {
        hb
    } else {
        hb + u * T::from_usize(d - 1).expect("dimension").ln()
    }
}

/// The spectrum whose entropy is [`spread_entropy`].
pub fn spread_spectrum<T: Real>(u: T, d: usize) -> Vec<T> {
    let mut p = vec![T::one() - u];
    if d > 1 {
        let rest = u / T::from_usize(d - 1).expect("dimension");
        p.extend(std::iter::repeat_n(rest, d - 1));
    }
    p
}

fn spread_top<T: Real>(d: usize) -> T {
    let d = T::from_usize(d).expect("dimension");
    (d - T::one()) / d
}

/// Inverse of [`spread_entropy`] on `[0, (d-1)/d]` by bisection.
fn spread_entropy_inv<T: Real>(v: T, d: usize) -> T {
    let top = spread_top::<T>(d);
    if v <= T::zero() {
        return T::zero();
    }
    if v >= spread_entropy(top, d) {
        return top;
    }
    let (mut lo, mut hi) = (T::zero(), top);
    for _ in 0..1100 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if spread_entropy(mid, d) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (v - spread_entropy(lo, d), spread_entropy(hi, d) - v);
    if flo <= fhi {
        lo
    } else {
        hi
    }
}

fn log_dim<T: Real>(d: usize) -> T {
    T::from_usize(d).expect("dimension").ln()
}

/// Maximizer of `r (1-r) log^2((1-r)(d-1)/r)` over `0 < r < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NOptimum<T> {
    pub d: usize,
    pub value: T,
    pub r_star: T,
    /// Derivative of the objective at `r_star`.
    pub stationarity_residual: T,
}

fn n_objective<T: Real>(r: T, ld: T) -> T {
    let l = ((T::one() - r) / r).ln() + ld;
    r * (T::one() - r) * l * l
}

fn n_derivative<T: Real>(r: T, ld: T) -> T {
    let l = ((T::one() - r) / r).ln() + ld;
    l * ((T::one() - T::lit(2.0) * r) * l - T::lit(2.0))
}

/// `N(d)`, the largest value of `var_beta(beta H)` over all `beta` and all
/// Hamiltonians on a `d`-dimensional space.
pub fn compute_n<T: Real>(d: usize) -> Result<NOptimum<T>> {
    if d < 2 {
        return arg(format!("N(d) needs d >= 2, got {d}"));
    }
    let ld = T::from_usize(d - 1).expect("dimension").ln();
    let half = T::lit(0.5);
    let (lmin, lmax) = (T::lit(1e-12).ln(), half.ln());
    let grid: Vec<T> = (0..N_GRID)
        .map(|i| (lmin + (lmax - lmin) * T::from_usize(i).unwrap() / T::from_usize(N_GRID - 1).unwrap()).exp())
        .collect();
    let best = (0..N_GRID)
        .max_by(|&a, &b| n_objective(grid[a], ld).partial_cmp(&n_objective(grid[b], ld)).unwrap())
        .expect("non-empty grid");
    let lo = grid[best.saturating_sub(1)];
    let hi = if best + 1 < N_GRID { grid[best + 1] } else { half };
    let (r_gold, _) = golden_section_min(|r| -n_objective(r, ld), lo, hi, T::tol(1e-14));
    // The derivative factors as L * ((1 - 2r) L - 2) with the second factor
    // strictly decreasing, so its sign change pins the maximizer.
    let g = |r: T| ((T::one() - T::lit(2.0) * r) * (((T::one() - r) / r).ln() + ld)) - T::lit(2.0);
    let (mut a, mut b) = (lo, hi);
    let r_star = if g(a) > T::zero() && g(b) < T::zero() {
        for _ in 0..200 {
            let mid = (a + b) / T::lit(2.0);
            if mid <= a || mid >= b {
                break;
            }
            if g(mid) > T::zero() {
                a = mid;
            } else {
                b = mid;
            }
        }
        if g(a).abs() <= g(b).abs() {
            a
        } else {
            b
        }
    } else {
        r_gold
    };
    Ok(NOptimum { d, value: n_objective(r_star, ld), r_star, stationarity_residual: n_derivative(r_star, ld) })
}

/// Minimizer of `D(s || r)` on binary distributions subject to
/// `phi(s) - phi(r) = x`, `phi` being [`spread_entropy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MOptimum<T> {
    pub x: T,
    pub d: usize,
    pub value: T,
    pub s_star: T,
    pub r_star: T,
}

impl<T: Real> MOptimum<T> {
    pub fn constraint_residual(&self) -> T {
        if self.value.is_infinite_val() {
            return T::zero();
        }
        (spread_entropy(self.s_star, self.d) - spread_entropy(self.r_star, self.d) - self.x).abs()
    }
}

/// `M(x, d)`: the smallest relative entropy `D(sigma || rho)` between
/// `d`-dimensional states with `S(sigma) - S(rho) = x`.
pub fn compute_m<T: Real>(x: T, d: usize) -> Result<MOptimum<T>> {
    if d < 2 {
        return arg(format!("M(x, d) needs d >= 2, got {d}"));
    }
    let ld = log_dim::<T>(d);
    let slack = T::tol(1e-12);
    if x.is_nan_val() || x < -ld - slack || x > ld + slack {
        return arg(format!("x = {x} outside [-log d, log d] for d = {d}"));
    }
    let top = spread_top::<T>(d);
    if x >= ld - T::tol(M_EDGE_TOL) {
        return Ok(MOptimum { x, d, value: T::infinity(), s_star: top, r_star: T::zero() });
    }
    if x == T::zero() {
        return Ok(MOptimum { x, d, value: T::zero(), s_star: top, r_star: top });
    }
    let x = x.max(-ld);
    let r_lo = spread_entropy_inv((-x).max(T::zero()), d);
    let r_hi = spread_entropy_inv((ld - x).min(ld), d);
    let pinned_s = |r: T| spread_entropy_inv(spread_entropy(r, d) + x, d);
    let objective = |r: T| binrel(pinned_s(r), r);

    let mut best_r = r_lo;
    let mut best = objective(r_lo);
    let v_hi = objective(r_hi);
    if v_hi < best {
        best = v_hi;
        best_r = r_hi;
    }
    let width = r_hi - r_lo;
    if width > T::zero() {
        // near x = log d the optimum sits within ~1e-13 of r_hi, so the
        // refinement tolerance is relative to the feasible interval
        let tol = T::tol(M_REFINE) * width.min(T::one());
        let (r, v) = grid_then_golden_min(objective, r_lo, r_hi, M_GRID, tol);
        if v < best {
            best = v;
            best_r = r;
        }
    }
    let s_star = pinned_s(best_r);
    if s_star > top - T::tol(M_EDGE_TOL) && x > T::zero() {
        return Ok(MOptimum { x, d, value: T::infinity(), s_star: top, r_star: best_r });
    }
    Ok(MOptimum { x, d, value: best, s_star, r_star: best_r })
}

/// Lower bounds on `M(x, d)` in terms of any `N >= N(d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundChain<T> {
    /// `N e^{x/N} - N - x`
    pub exp_bound: T,
    /// `x^2/2N + x^3/6N^2`
    pub cubic_bound: T,
    /// `x^2/2N`
    pub quadratic_bound: T,
}

pub fn lower_bound_chain<T: Real>(x: T, n: T) -> LowerBoundChain<T> {
    let two = T::lit(2.0);
    LowerBoundChain {
        exp_bound: n * (x / n).exp_m1() - x,
        cubic_bound: x * x / (two * n) + x * x * x / (T::lit(6.0) * n * n),
        quadratic_bound: x * x / (two * n),
    }
}

/// Admissible choices of the constant `N >= N(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NChoice {
    #[default]
    Exact,
    /// `log^2(d-1)/4 + 1`
    QuarterLogSquaredPlusOne,
    /// `log^2 d`
    LogSquared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    /// Reservoir dimension.
    pub d: usize,
    pub n_choice: NChoice,
}

impl BoundParams {
    pub fn new(d: usize) -> Self {
        Self { d, n_choice: NChoice::Exact }
    }

    pub fn with_choice(d: usize, n_choice: NChoice) -> Self {
        Self { d, n_choice }
    }

    pub fn n_value<T: Real>(&self) -> Result<T> {
        if self.d < 2 {
            return arg("N is only defined for d >= 2");
        }
        Ok(match self.n_choice {
            NChoice::Exact => compute_n::<T>(self.d)?.value,
            NChoice::QuarterLogSquaredPlusOne => {
                let l = T::from_usize(self.d - 1).unwrap().ln();
                l * l / T::lit(4.0) + T::one()
            }
            NChoice::LogSquared => {
                let l = log_dim::<T>(self.d);
                l * l
            }
        })
    }
}

/// Lower bound on `beta dQ` given the system entropy decrease.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteSizeBound<T> {
    pub delta_s: T,
    /// The bound itself.
    pub value: T,
    /// `dS + M(dS, d)` where `M` is defined.
    pub m_branch: Option<T>,
    /// `dS + dS^2/2N` for `dS >= 0`, `N - sqrt(N^2 - 2 N dS)` for `dS <= 0`.
    pub n_branch: T,
    /// A one-dimensional reservoir allows no change: `dS` must vanish.
    pub degenerate: bool,
}

pub fn finite_size_bound<T: Real>(delta_s: T, params: BoundParams) -> Result<FiniteSizeBound<T>> {
    if params.d == 0 {
        return arg("reservoir dimension must be at least 1");
    }
    if params.d == 1 {
        return Ok(FiniteSizeBound {
            delta_s,
            value: T::zero(),
            m_branch: None,
            n_branch: T::zero(),
            degenerate: true,
        });
    }
    let ld = log_dim::<T>(params.d);
    if delta_s.is_nan_val() || delta_s > ld + T::tol(1e-12) {
        return arg(format!("dS = {delta_s} exceeds log d = {ld}"));
    }
    let n = params.n_value::<T>()?;
    let two = T::lit(2.0);
    let m_branch = if delta_s >= -ld {
        let m = compute_m(delta_s.min(ld), params.d)?.value;
        Some(delta_s + m)
    } else {
        None
    };
    if delta_s >= T::zero() {
        let n_branch = delta_s + delta_s * delta_s / (two * n);
        let m = m_branch.expect("defined for dS >= 0");
        Ok(FiniteSizeBound { delta_s, value: m.max(n_branch), m_branch, n_branch, degenerate: false })
    } else {
        let n_branch = n - (n * n - two * n * delta_s).sqrt();
        Ok(FiniteSizeBound { delta_s, value: n_branch, m_branch, n_branch, degenerate: false })
    }
}

/// Outcome of an inequality evaluated on computed data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundCheck<T> {
    /// The inequality only makes a claim under a precondition that fails.
    NotApplicable,
    Checked { holds: bool, margin: T, rhs: T },
}

impl<T: Real> BoundCheck<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Checked { holds: true, .. } | Self::NotApplicable)
    }

    pub fn margin(&self) -> Option<T> {
        match self {
            Self::Checked { margin, .. } => Some(*margin),
            Self::NotApplicable => None,
        }
    }
}

/// For `beta dQ <= 0`: `delta <= beta dQ - (beta dQ)^2 / 2N(d)`.
/// The margin is right-hand side minus `delta`.
pub fn delta_q_bound_check<T: Real>(delta: T, beta_dq: T, d: usize) -> Result<BoundCheck<T>> {
    if beta_dq > T::zero() || beta_dq.is_nan_val() {
        return Ok(BoundCheck::NotApplicable);
    }
    let rhs = if d < 2 {
        beta_dq
    } else {
        let n = compute_n::<T>(d)?.value;
        beta_dq - beta_dq * beta_dq / (T::lit(2.0) * n)
    };
    let margin = crate::scalar::ext_sub(rhs, delta);
    Ok(BoundCheck::Checked { holds: margin >= -T::tol(CHECK_TOL), margin, rhs })
}

/// `D(sigma || rho) - M(S(sigma) - S(rho), d)`, nonnegative for valid states.
pub fn relent_floor_check<T: Real>(sigma: &QState<T>, rho: &QState<T>) -> Result<T> {
    let d = sigma.dim();
    if rho.dim() != d {
        return Err(crate::error::Error::Dimension(format!("{d} vs {}", rho.dim())));
    }
    if d < 2 {
        return arg("relative entropy floor needs d >= 2");
    }
    let ld = log_dim::<T>(d);
    let x = (von_neumann_entropy(sigma) - von_neumann_entropy(rho)).max(-ld).min(ld);
    let dist = relative_entropy(sigma, rho)?;
    let m = compute_m(x, d)?.value;
    Ok(crate::scalar::ext_sub(dist, m))
}
