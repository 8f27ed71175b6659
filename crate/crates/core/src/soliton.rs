//! Closed-form one-soliton solutions and their bookkeeping.
//!
//! The stationary bright soliton of the envelope equation
//! `∂a/∂t = i(C/2) ∂²a/∂z² + iK|a|²a` is
//!
//! ```text
//! a(z, t) = A exp(i K A² t / 2) sech(z / ξ),     K A² = C / ξ²
//! ```
//!
//! where the constraint ties the amplitude `A` to the width `ξ` through the
//! waveguide constants. Its photon number is `n = ∫|a|²dz = 2A²ξ`, and its
//! spatial spectrum is again a sech:
//! `F(k) = ξ √(π/2) sech(π k ξ / 2)` (symmetric transform convention, see
//! the crate's FFT docs).
//!
//! [`ZsParams`] carries the four-parameter travelling soliton of the
//! unit-normalized equation; [`reduce_zs`] maps its stationary special case
//! (`xi = x0 = phi = 0`, width `1/(2η)`) onto [`SolitonParams`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Grid, WaveguideParams};
use crate::float::{identity_tol, Real};

/// `sech(x) = 2 / (e^x + e^{-x})`, clamped to 0 for |x| > 700 so grid-edge
/// evaluations never produce Inf/NaN.
pub fn sech<T: Real>(x: T) -> T {
    if x.abs() > T::of(700.0) {
        T::zero()
    } else {
        T::of(2.0) / (x.exp() + (-x).exp())
    }
}

/// Amplitude `A` and width `ξ` of a bright one-soliton pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams<T> {
    /// Peak amplitude `A` (sqrt photons per unit length), real positive.
    pub amplitude: T,
    /// Width `ξ` (length), real positive.
    pub width: T,
}

impl<T: Real> SolitonParams<T> {
    /// Free-standing parameters; positivity only.
    pub fn new(amplitude: T, width: T) -> Result<Self> {
        if !amplitude.is_finite() || !width.is_finite() || amplitude <= T::zero() || width <= T::zero()
        {
            return Err(Error::BadSolitonParams);
        }
        Ok(Self { amplitude, width })
    }

    /// Parameters bound to a waveguide: the constraint `K A² = C/ξ²` must
    /// hold to relative `1e-12`.
    pub fn bound(amplitude: T, width: T, waveguide: &WaveguideParams<T>) -> Result<Self> {
        let p = Self::new(amplitude, width)?;
        let residual = constraint_residual(&p, waveguide)?;
        if residual.abs() > identity_tol::<T>() {
            return Err(Error::ConstraintViolated {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(p)
    }
}

/// Relative constraint residual `(K A² − C/ξ²) / (C/ξ²)`.
///
/// Errors when `C*K ≤ 0`: no bright-soliton regime exists there.
pub fn constraint_residual<T: Real>(
    p: &SolitonParams<T>,
    w: &WaveguideParams<T>,
) -> Result<T> {
    let ck = w.ck();
    if !(ck > T::zero()) {
        return Err(Error::NoBrightSoliton {
            ck: ck.to_f64().unwrap_or(f64::NAN),
        });
    }
    let target = w.gvd_c / (p.width * p.width);
    Ok((w.kerr_k * p.amplitude * p.amplitude - target) / target)
}

/// Photon number `n = 2 A² ξ` carried by the soliton.
pub fn photon_number<T: Real>(p: &SolitonParams<T>) -> T {
    T::of(2.0) * p.amplitude * p.amplitude * p.width
}

/// Build the unique constraint-satisfying soliton holding `n` photons:
/// `ξ = 2C/(K n)`, `A² = n/(2ξ)`.
pub fn from_photon_number<T: Real>(n: T, w: &WaveguideParams<T>) -> Result<SolitonParams<T>> {
    if !n.is_finite() || n <= T::zero() {
        return Err(Error::BadPhotonNumber(n.to_f64().unwrap_or(f64::NAN)));
    }
    let ck = w.ck();
    if !(ck > T::zero()) {
        return Err(Error::NoBrightSoliton {
            ck: ck.to_f64().unwrap_or(f64::NAN),
        });
    }
    let width = T::of(2.0) * w.gvd_c / (w.kerr_k * n);
    let amplitude = (n / (T::of(2.0) * width)).sqrt();
    SolitonParams::new(amplitude, width)
}

/// Sample the soliton envelope `A exp(i K A² t / 2) sech(z/ξ)` on a grid.
///
/// The carrier oscillation `exp(-iω0 t)` and the group delay `z/vg` are
/// already removed: this is the envelope-frame field the propagator evolves.
/// Errors if the amplitude/width pair violates the waveguide constraint.
pub fn soliton_field<T: Real>(
    p: &SolitonParams<T>,
    w: &WaveguideParams<T>,
    grid: &Grid<T>,
    t: T,
) -> Result<ComplexField<T>> {
    let residual = constraint_residual(p, w)?;
    if residual.abs() > identity_tol::<T>() {
        return Err(Error::ConstraintViolated {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let phase = w.kerr_k * p.amplitude * p.amplitude * t / T::of(2.0);
    let rot = Complex::from_polar(p.amplitude, phase);
    ComplexField::from_fn(*grid, |z| rot.scale(sech(z / p.width)))
}

/// Analytic spatial spectrum of a unit-amplitude sech pulse of width `ξ`:
/// `F(k) = ξ √(π/2) sech(π k ξ / 2)`.
pub fn sech_spectrum<T: Real>(xi: T, k: T) -> T {
    let half = T::of(0.5);
    xi * (T::PI() * half).sqrt() * sech(T::PI() * k * xi * half)
}

/// Four-parameter travelling soliton of the unit-normalized equation
/// (see [`zs_soliton_field`] for the closed form).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZsParams<T> {
    /// Inverse-width parameter `η > 0`; the stationary pulse width is `1/(2η)`.
    pub eta: T,
    /// Velocity/frequency parameter `ξ`: the peak travels at `−4ξ` and the
    /// field carries the wavenumber `−2ξ`.
    pub xi: T,
    /// Pulse center `x0` at `t = 0`.
    pub x0: T,
    /// Constant phase offset `φ`.
    pub phi: T,
    /// Normalization amplitude `A0` (free input; the induced equation fixes
    /// it to `2η` only when the field is required to be an exact solution).
    pub a0: T,
}

impl<T: Real> ZsParams<T> {
    pub fn new(eta: T, xi: T, x0: T, phi: T, a0: T) -> Result<Self> {
        let finite =
            eta.is_finite() && xi.is_finite() && x0.is_finite() && phi.is_finite() && a0.is_finite();
        if !finite || eta <= T::zero() {
            return Err(Error::BadSolitonParams);
        }
        Ok(Self { eta, xi, x0, phi, a0 })
    }
}

/// Sample the travelling soliton
///
/// ```text
/// u(x, t) = A0 exp{−4i(ξ² − η²)t − 2iξx + iφ} / cosh[2η(x − x0) + 8ηξt]
/// ```
///
/// with `x` identified with the grid coordinate `z`.
pub fn zs_soliton_field<T: Real>(p: &ZsParams<T>, grid: &Grid<T>, t: T) -> Result<ComplexField<T>> {
    let four = T::of(4.0);
    let two = T::of(2.0);
    let eight = T::of(8.0);
    let omega = four * (p.xi * p.xi - p.eta * p.eta);
    ComplexField::from_fn(*grid, |x| {
        let phase = -omega * t - two * p.xi * x + p.phi;
        let arg = two * p.eta * (x - p.x0) + eight * p.eta * p.xi * t;
        Complex::from_polar(p.a0 * sech(arg), phase)
    })
}

/// Reduce the stationary special case (`xi = x0 = phi = 0`) to amplitude/width
/// form: width `ξ = 1/(2η)`, amplitude `A = A0`.
pub fn reduce_zs<T: Real>(p: &ZsParams<T>) -> Result<SolitonParams<T>> {
    if p.xi != T::zero() || p.x0 != T::zero() || p.phi != T::zero() {
        return Err(Error::ZsNotReduced);
    }
    SolitonParams::new(p.a0, T::one() / (T::of(2.0) * p.eta))
}
