//! Scalar abstraction.
//!
//! Every numerical routine in the crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances are written once as `f64`
//! literals and rescaled per type through [`Real::tol`], so an `f32`
//! instantiation gets proportionally looser thresholds.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar usable by the linear algebra and the bound optimizers.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Multiplier applied to `f64`-calibrated tolerances.
    const PRECISION_SCALE: f64;

    fn infinity() -> Self;
    fn neg_infinity() -> Self;
    fn is_infinite_val(self) -> bool;
    fn is_nan_val(self) -> bool;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// An `f64`-calibrated tolerance, rescaled for this type.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x * Self::PRECISION_SCALE)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn is_pos_inf(self) -> bool {
        self.is_infinite_val() && self > Self::zero()
    }

    #[inline]
    fn is_neg_inf(self) -> bool {
        self.is_infinite_val() && self < Self::zero()
    }

    /// `x log x` with the convention `0 log 0 = 0`.
    #[inline]
    fn xlogx(self) -> Self {
        if self <= Self::zero() {
            Self::zero()
        } else {
            self * self.ln()
        }
    }
}

macro_rules! impl_real {
    ($t:ty, $scale:expr) => {
        impl Real for $t {
            const PRECISION_SCALE: f64 = $scale;

            #[inline]
            fn infinity() -> Self {
                <$t as Float>::infinity()
            }
            #[inline]
            fn neg_infinity() -> Self {
                <$t as Float>::neg_infinity()
            }
            #[inline]
            fn is_infinite_val(self) -> bool {
                <$t as Float>::is_infinite(self)
            }
            #[inline]
            fn is_nan_val(self) -> bool {
                <$t as Float>::is_nan(self)
            }
        }
    };
}

impl_real!(f64, 1.0);
impl_real!(f32, 1e5);

/// Difference of extended reals where `+inf - +inf` (and `-inf - -inf`) is
/// read as agreement and yields zero.
pub fn ext_sub<T: Real>(a: T, b: T) -> T {
    if a.is_infinite_val() && b.is_infinite_val() && (a > T::zero()) == (b > T::zero()) {
        T::zero()
    } else {
        a - b
    }
}
