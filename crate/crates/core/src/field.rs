//! Grids, complex envelope fields, and spectral transforms.
//!
//! The spatial coordinate `z` is discretized on a uniform periodic grid of
//! `n` points (power of two) covering `[z_min, z_max)`; sample `j` sits at
//! `z_min + j*dz`. Fields store one complex amplitude per grid point, in
//! units of sqrt(photons per unit length), so that [`l2_norm_sq`] is a
//! photon count.
//!
//! # FFT convention
//!
//! The discrete transforms are fixed once, here, and every spectral
//! operation in the crate references them:
//!
//! ```text
//! forward:  F_m = sum_j f_j exp(-2πi j m / n)          (unscaled)
//! inverse:  f_j = (1/n) sum_m F_m exp(+2πi j m / n)
//! ```
//!
//! The inverse carries the whole `1/n`, so `fft_inverse(fft_forward(f)) = f`
//! up to roundoff and Parseval reads `Σ_j |f_j|² = (1/n) Σ_m |F_m|²`.
//! Mode `m` carries the wavenumber `k_m = 2π m / L` with `m` running over
//! `0, 1, …, n/2−1, −n/2, …, −1` (see [`wavenumbers`]).
//!
//! [`continuum_spectrum`] rescales the forward transform to approximate the
//! symmetric-convention continuous transform
//! `F(k) = (2π)^{-1/2} ∫ f(z) exp(-ikz) dz`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::float::Real;

/// Uniform periodic 1-D grid over the propagation coordinate `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    z_min: T,
    z_max: T,
    n_points: usize,
}

impl<T: Real> Grid<T> {
    /// Grid over `[z_min, z_max)` with `n_points` samples.
    ///
    /// `n_points` must be a power of two and at least 8.
    pub fn new(z_min: T, z_max: T, n_points: usize) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::BadPointCount(n_points));
        }
        if !z_min.is_finite() || !z_max.is_finite() || z_max <= z_min {
            return Err(Error::EmptyDomain);
        }
        Ok(Self { z_min, z_max, n_points })
    }

    /// Grid of total length `length` centered on `z = 0`.
    pub fn centered(length: T, n_points: usize) -> Result<Self> {
        let half = length / T::of(2.0);
        Self::new(-half, half, n_points)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn z_min(&self) -> T {
        self.z_min
    }

    pub fn z_max(&self) -> T {
        self.z_max
    }

    /// Periodic domain length `L = z_max − z_min`.
    pub fn length(&self) -> T {
        self.z_max - self.z_min
    }

    /// Sample spacing `dz = L / n`.
    pub fn dz(&self) -> T {
        self.length() / T::of(self.n_points as f64)
    }

    /// Coordinate of sample `j`.
    pub fn point(&self, j: usize) -> T {
        self.z_min + T::of(j as f64) * self.dz()
    }

    /// All sample coordinates in grid order.
    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |j| self.point(j))
    }

    /// Index of the sample closest to `z`.
    pub fn nearest_index(&self, z: T) -> usize {
        let raw = ((z - self.z_min) / self.dz()).round();
        let j = raw.to_f64().unwrap_or(0.0).max(0.0) as usize;
        j.min(self.n_points - 1)
    }
}

/// Dispersive Kerr waveguide parameters.
///
/// `gvd_c` is the group-velocity dispersion `C = (d²ω/dk²)` at the carrier
/// wavenumber `k0`; `kerr_k` is the Kerr constant multiplying the cubic
/// nonlinearity. A bright soliton needs `gvd_c * kerr_k > 0`, which is
/// checked at soliton-construction time rather than here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams<T> {
    /// Carrier angular frequency `ω0` (rad/time).
    pub omega0: T,
    /// Carrier wavenumber `k0` (1/length).
    pub k0: T,
    /// Group velocity `vg = dω/dk` at `k0` (length/time).
    pub vg: T,
    /// Group-velocity dispersion `C` (length²/time).
    pub gvd_c: T,
    /// Kerr constant `K` (length/time per photon density).
    pub kerr_k: T,
}

impl<T: Real> WaveguideParams<T> {
    pub fn new(omega0: T, k0: T, vg: T, gvd_c: T, kerr_k: T) -> Result<Self> {
        let all_finite = omega0.is_finite()
            && k0.is_finite()
            && vg.is_finite()
            && gvd_c.is_finite()
            && kerr_k.is_finite();
        if !all_finite || omega0 <= T::zero() || vg <= T::zero() {
            return Err(Error::BadWaveguide);
        }
        Ok(Self { omega0, k0, vg, gvd_c, kerr_k })
    }

    /// Product `C*K`, whose sign decides the bright-soliton regime.
    pub fn ck(&self) -> T {
        self.gvd_c * self.kerr_k
    }
}

/// Complex envelope samples `a(z)` on a [`Grid`]; one time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField<T> {
    grid: Grid<T>,
    samples: Vec<Complex<T>>,
}

impl<T: Real> ComplexField<T> {
    /// Wrap samples on a grid, checking length and finiteness.
    pub fn new(grid: Grid<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::LengthMismatch {
                expected: grid.n_points(),
                actual: samples.len(),
            });
        }
        if !samples.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, samples })
    }

    /// Evaluate `f` at every grid point.
    pub fn from_fn(grid: Grid<T>, mut f: impl FnMut(T) -> Complex<T>) -> Result<Self> {
        let samples = grid.points().map(&mut f).collect();
        Self::new(grid, samples)
    }

    /// Construct without the finiteness scan. Intermediate stepper states
    /// may legitimately carry non-finite values that the caller detects.
    pub(crate) fn from_raw(grid: Grid<T>, samples: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(samples.len(), grid.n_points());
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }
}

/// FFT-ordered wavenumbers `k_m = 2π m / L`, `m ∈ [−n/2, n/2)`.
///
/// `k[0]` is the DC mode; positive modes come first, then the negative ones,
/// matching the layout of [`fft_forward`] output.
pub fn wavenumbers<T: Real>(grid: &Grid<T>) -> Vec<T> {
    let n = grid.n_points();
    let scale = T::two_pi() / grid.length();
    (0..n)
        .map(|j| {
            let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            scale * T::of(m as f64)
        })
        .collect()
}

/// Unscaled forward DFT of the field samples (see the module docs for the
/// convention).
pub fn fft_forward<T: Real>(field: &ComplexField<T>) -> Vec<Complex<T>> {
    let mut buf = field.samples().to_vec();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    buf
}

/// Inverse DFT (with the `1/n` factor) back onto `grid`.
pub fn fft_inverse<T: Real>(spectrum: &[Complex<T>], grid: &Grid<T>) -> Result<ComplexField<T>> {
    if spectrum.len() != grid.n_points() {
        return Err(Error::LengthMismatch {
            expected: grid.n_points(),
            actual: spectrum.len(),
        });
    }
    let mut buf = spectrum.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    let inv_n = T::one() / T::of(buf.len() as f64);
    for c in &mut buf {
        *c = c.scale(inv_n);
    }
    ComplexField::new(*grid, buf)
}

/// Spectrum normalized to approximate the continuous transform
/// `F(k_m) = (2π)^{-1/2} ∫ f(z) e^{-ik_m z} dz`, i.e.
/// `dz/√(2π) · e^{-i k_m z_min} · F_m`.
///
/// The phase factor accounts for the grid starting at `z_min` rather than 0,
/// so a field symmetric about `z = 0` yields a real, positive spectrum.
pub fn continuum_spectrum<T: Real>(field: &ComplexField<T>) -> Vec<Complex<T>> {
    let spectrum = fft_forward(field);
    let ks = wavenumbers(field.grid());
    let amp = field.grid().dz() / T::two_pi().sqrt();
    spectrum
        .into_iter()
        .zip(ks)
        .map(|(c, k)| {
            let phase = -k * field.grid().z_min();
            c * Complex::from_polar(amp, phase)
        })
        .collect()
}

/// Discrete photon-count integral `Σ_j |a_j|² dz`.
///
/// On a periodic grid the rectangle rule coincides with the trapezoid rule,
/// and for smooth decaying fields it is spectrally accurate.
pub fn l2_norm_sq<T: Real>(field: &ComplexField<T>) -> T {
    let sum = field
        .samples()
        .iter()
        .fold(T::zero(), |acc, c| acc + c.norm_sqr());
    sum * field.grid().dz()
}

/// `max_j |f_j − g_j|` over two fields on the same grid.
pub fn max_abs_diff<T: Real>(f: &ComplexField<T>, g: &ComplexField<T>) -> Result<T> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(f.samples()
        .iter()
        .zip(g.samples())
        .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
}

/// Relative L2 distance `‖f − g‖ / ‖g‖`.
pub fn l2_rel_error<T: Real>(f: &ComplexField<T>, g: &ComplexField<T>) -> Result<T> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let (num, den) = f.samples().iter().zip(g.samples()).fold(
        (T::zero(), T::zero()),
        |(num, den), (a, b)| (num + (a - b).norm_sqr(), den + b.norm_sqr()),
    );
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C64 = Complex<f64>;

    fn grid(z_min: f64, z_max: f64, n: usize) -> Grid<f64> {
        Grid::new(z_min, z_max, n).unwrap()
    }

    #[test]
    fn grid_rejects_bad_point_counts() {
        assert_eq!(Grid::<f64>::new(0.0, 1.0, 7), Err(Error::BadPointCount(7)));
        assert_eq!(Grid::<f64>::new(0.0, 1.0, 12), Err(Error::BadPointCount(12)));
        assert!(Grid::<f64>::new(0.0, 1.0, 8).is_ok());
    }

    #[test]
    fn grid_rejects_empty_domain() {
        assert_eq!(Grid::<f64>::new(1.0, 1.0, 8), Err(Error::EmptyDomain));
        assert_eq!(Grid::<f64>::new(2.0, 1.0, 8), Err(Error::EmptyDomain));
    }

    #[test]
    fn sample_points_start_at_z_min() {
        let g = grid(-1.0, 3.0, 8);
        assert_eq!(g.dz(), 0.5);
        assert_eq!(g.point(0), -1.0);
        assert_eq!(g.point(3), 0.5);
        // z_max itself is not a sample (periodic wrap).
        assert_eq!(g.point(7), 2.5);
    }

    #[test]
    fn wavenumbers_match_fft_order() {
        let g = grid(-std::f64::consts::PI, std::f64::consts::PI, 8);
        let ks = wavenumbers(&g);
        let expect = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (k, e) in ks.iter().zip(expect) {
            assert!((k - e).abs() < 1e-14, "k = {k}, expected {e}");
        }
    }

    #[test]
    fn wavenumber_unit_interval() {
        let g = grid(0.0, 1.0, 8);
        let ks = wavenumbers(&g);
        assert_eq!(ks[0], 0.0);
        assert!((ks[1] - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn constant_field_is_pure_dc() {
        let g = grid(-5.0, 5.0, 32);
        let c = C64::new(0.7, -0.3);
        let f = ComplexField::from_fn(g, |_| c).unwrap();
        let spec = fft_forward(&f);
        assert!((spec[0] - c * 32.0).norm() < 1e-12);
        for s in &spec[1..] {
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_lands_in_single_bin() {
        let g = grid(-5.0, 5.0, 64);
        let ks = wavenumbers(&g);
        let k1 = ks[3];
        let f = ComplexField::from_fn(g, |z| C64::from_polar(1.0, k1 * z)).unwrap();
        let spec = fft_forward(&f);
        for (m, s) in spec.iter().enumerate() {
            if m == 3 {
                assert!((s.norm() - 64.0).abs() < 1e-9);
            } else {
                assert!(s.norm() < 1e-9, "leakage into bin {m}: {}", s.norm());
            }
        }
    }

    #[test]
    fn norm_of_constant_field_on_unit_interval() {
        let g = grid(0.0, 1.0, 16);
        let c = C64::new(1.5, -2.0);
        let f = ComplexField::from_fn(g, |_| c).unwrap();
        assert!((l2_norm_sq(&f) - c.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn norm_of_zero_field_is_zero() {
        let g = grid(0.0, 1.0, 16);
        let f = ComplexField::from_fn(g, |_| C64::new(0.0, 0.0)).unwrap();
        assert_eq!(l2_norm_sq(&f), 0.0);
    }

    #[test]
    fn max_abs_diff_detects_single_point_bump() {
        let g = grid(0.0, 1.0, 16);
        let f = ComplexField::from_fn(g, |z| C64::new(z, 0.0)).unwrap();
        assert_eq!(max_abs_diff(&f, &f).unwrap(), 0.0);
        let mut samples = f.samples().to_vec();
        samples[5] += C64::new(0.0, 1e-3);
        let h = ComplexField::new(g, samples).unwrap();
        assert!((max_abs_diff(&f, &h).unwrap() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let f = ComplexField::from_fn(grid(0.0, 1.0, 16), |_| C64::new(1.0, 0.0)).unwrap();
        let h = ComplexField::from_fn(grid(0.0, 2.0, 16), |_| C64::new(1.0, 0.0)).unwrap();
        assert_eq!(max_abs_diff(&f, &h), Err(Error::GridMismatch));
    }

    #[test]
    fn field_rejects_nan_and_length_mismatch() {
        let g = grid(0.0, 1.0, 8);
        let bad = vec![C64::new(f64::NAN, 0.0); 8];
        assert_eq!(ComplexField::new(g, bad), Err(Error::NonFinite));
        let short = vec![C64::new(0.0, 0.0); 4];
        assert_eq!(
            ComplexField::new(g, short),
            Err(Error::LengthMismatch { expected: 8, actual: 4 })
        );
    }

    #[test]
    fn inverse_rejects_length_mismatch() {
        let g = grid(0.0, 1.0, 8);
        let spec = vec![C64::new(0.0, 0.0); 4];
        assert!(matches!(
            fft_inverse(&spec, &g),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn nearest_index_finds_center() {
        let g = grid(-20.0, 20.0, 1024);
        let j = g.nearest_index(0.0);
        assert_eq!(g.point(j), 0.0);
    }

    proptest! {
        #[test]
        fn fft_round_trip_is_identity(res in proptest::collection::vec((-1.0_f64..1.0, -1.0_f64..1.0), 32)) {
            let g = grid(-3.0, 3.0, 32);
            let samples: Vec<C64> = res.iter().map(|&(re, im)| C64::new(re, im)).collect();
            let f = ComplexField::new(g, samples).unwrap();
            let back = fft_inverse(&fft_forward(&f), &g).unwrap();
            prop_assert!(max_abs_diff(&f, &back).unwrap() < 1e-12);
        }

        #[test]
        fn parseval_holds(res in proptest::collection::vec((-1.0_f64..1.0, -1.0_f64..1.0), 32)) {
            let g = grid(-3.0, 3.0, 32);
            let samples: Vec<C64> = res.iter().map(|&(re, im)| C64::new(re, im)).collect();
            let f = ComplexField::new(g, samples).unwrap();
            let direct = l2_norm_sq(&f);
            let spec = fft_forward(&f);
            let spectral: f64 =
                spec.iter().map(|c| c.norm_sqr()).sum::<f64>() / 32.0 * g.dz();
            prop_assert!((direct - spectral).abs() <= 1e-12 * direct.max(1e-30));
        }

        #[test]
        fn wavenumbers_are_integer_multiples(exp in 3_u32..9) {
            let n = 1_usize << exp;
            let g = grid(-7.3, 11.9, n);
            for (j, k) in wavenumbers(&g).iter().enumerate() {
                let m = k * g.length() / (2.0 * std::f64::consts::PI);
                prop_assert!((m - m.round()).abs() < 1e-9, "j={j} k={k} m={m}");
            }
        }
    }
}
