//! Scalar abstraction for the numerical core.
//!
//! Everything downstream is generic over [`Real`], which is any IEEE float
//! that `rustfft` can transform. In practice that means `f32` or `f64`;
//! concrete aliases for both live at the crate root.

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

/// Floating-point scalar used for grids, fields, and spectra.
pub trait Real: Float + FloatConst + FftNum {
    /// Convert an `f64` constant into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// `2π`.
    fn two_pi() -> Self {
        Self::PI() + Self::PI()
    }
}

impl<T: Float + FloatConst + FftNum> Real for T {}

/// Relative tolerance used when validating exact algebraic identities
/// (soliton constraint, step-count divisibility). Pinned at `1e-12` for
/// `f64`; widens to a few ulps for lower-precision scalars where `1e-12`
/// is not representable as a meaningful bound.
pub(crate) fn identity_tol<T: Real>() -> T {
    let pinned = T::of(1e-12);
    let floor = T::epsilon() * T::of(32.0);
    if floor > pinned {
        floor
    } else {
        pinned
    }
}
