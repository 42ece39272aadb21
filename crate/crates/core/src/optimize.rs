//! Bounded scalar search and quadrature used by the thermodynamic maps and
//! the bound functions.

use crate::scalar::Real;

/// Minimizes a unimodal `f` on `[a, b]` by golden-section search until the
/// bracket is narrower than `tol`. Returns `(argmin, min)`.
pub fn golden_section_min<T: Real>(mut f: impl FnMut(T) -> T, mut a: T, mut b: T, tol: T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Scans `n` equally spaced interior points of `[a, b]`, then refines the best
/// bracket with golden-section search.
pub fn grid_then_golden_min<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, n: usize, tol: T) -> (T, T) {
    let n = n.max(3);
    let step = (b - a) / T::from_usize(n + 1).expect("grid size");
    let pts: Vec<T> = (1..=n).map(|i| a + step * T::from_usize(i).expect("index")).collect();
    let mut best = 0;
    let mut best_val = T::infinity();
    for (i, &x) in pts.iter().enumerate() {
        let v = f(x);
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    let lo = if best == 0 { a } else { pts[best - 1] };
    let hi = if best + 1 == n { b } else { pts[best + 1] };
    let (x, v) = golden_section_min(&mut f, lo, hi, tol);
    if v <= best_val {
        (x, v)
    } else {
        (pts[best], best_val)
    }
}

/// Root of a function that is decreasing on `[lo, hi]`, by bisection.
/// Assumes `f(lo) >= 0 >= f(hi)`; returns the midpoint of the final bracket.
pub fn bisect_decreasing<T: Real>(mut f: impl FnMut(T) -> T, mut lo: T, mut hi: T, max_iter: usize) -> T {
    for _ in 0..max_iter {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Tanh-sinh quadrature of `f` over `[a, b]`. Tolerates integrable endpoint
/// singularities; nodes where `f` is not finite contribute nothing (their
/// weights are below machine precision).
pub fn tanh_sinh<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> T {
    if a == b {
        return T::zero();
    }
    let half_pi = T::frac_pi_2();
    let two = T::lit(2.0);
    let len = b - a;
    let t_max = T::lit(4.0);
    let mut eval = |t: T| -> T {
        let u = half_pi * t.sinh();
        let cu = u.cosh();
        let w = half_pi * t.cosh() / (cu * cu);
        // distance of the node from the nearer endpoint, computed without cancellation
        let dist = len / (T::one() + (two * u.abs()).exp());
        let x = if t < T::zero() { a + dist } else { b - dist };
        let fx = f(x);
        if fx.is_finite() {
            fx * w * len / two
        } else {
            T::zero()
        }
    };
    let mut h = T::lit(0.5);
    let mut sum = eval(T::zero());
    let mut k = T::one();
    while k * h <= t_max {
        sum += eval(k * h) + eval(-k * h);
        k += T::one();
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h /= two;
        let mut k = T::one();
        while k * h <= t_max {
            sum += eval(k * h) + eval(-k * h);
            k += two;
        }
        let next = sum * h;
        let done = (next - estimate).abs() <= tol * (T::one() + next.abs());
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}
