//! Sampled lower-bound curves `beta dQ >= g(dS)` for a fixed reservoir
//! dimension, and number formatting for tabular output.

use crate::bounds::{compute_n, finite_size_bound, BoundParams};
use crate::error::{arg, Result};

/// One sample of the bound curves at a given `dS`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub delta_s: f64,
    /// `dS`
    pub landauer: f64,
    /// `dS + dS^2/2N` for `dS >= 0`, `N - sqrt(N^2 - 2 N dS)` below.
    pub quadratic: f64,
    /// `dS + M(dS, d)` for `dS >= 0`, the quadratic branch below.
    pub best: f64,
    /// `dS + M(dS, d)`, attained by a swap; NaN where `dS < -log d`.
    pub achievable: f64,
}

impl CurveRow {
    pub const HEADER: [&'static str; 5] = ["delta_s", "landauer", "quadratic", "best", "achievable"];

    pub fn evaluate(delta_s: f64, d: usize) -> Result<Self> {
        if d < 2 {
            return arg("bound curves need d >= 2");
        }
        let ld = (d as f64).ln();
        if !(-2.0 * ld - 1e-12..=ld + 1e-12).contains(&delta_s) {
            return arg(format!("dS = {delta_s} outside [-2 log d, log d] = [{}, {ld}]", -2.0 * ld));
        }
        let delta_s = delta_s.min(ld);
        let b = finite_size_bound(delta_s, BoundParams::new(d))?;
        let achievable = b.m_branch.unwrap_or(f64::NAN);
        let best = if delta_s >= 0.0 { achievable } else { b.n_branch };
        Ok(Self { delta_s, landauer: delta_s, quadratic: b.n_branch, best, achievable })
    }

    pub fn fields(&self) -> [String; 5] {
        [self.delta_s, self.landauer, self.quadratic, self.best, self.achievable].map(fmt_num)
    }

    /// `landauer <= quadratic <= best` up to `tol`.
    pub fn ordered(&self, tol: f64) -> bool {
        self.landauer <= self.quadratic + tol && self.quadratic <= self.best + tol
    }
}

/// Evenly spaced grid including both endpoints; a single point needs
/// `from == to`.
pub fn linear_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !from.is_finite() || !to.is_finite() || to < from {
        return arg(format!("invalid grid {from}..{to} with {points} points"));
    }
    if points == 1 {
        return if from == to { Ok(vec![from]) } else { arg("a single grid point needs from == to") };
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { to } else { from + step * i as f64 }).collect())
}

pub fn bound_curve(d: usize, grid: &[f64]) -> Result<Vec<CurveRow>> {
    // fail early on d before evaluating the grid
    compute_n::<f64>(d.max(2))?;
    use rayon::prelude::*;
    grid.par_iter().map(|&x| CurveRow::evaluate(x, d)).collect()
}

/// Twelve significant digits, `inf`/`-inf`/`nan` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}
