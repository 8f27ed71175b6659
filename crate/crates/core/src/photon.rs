//! Coherent-state photon statistics of the one-soliton pulse.
//!
//! Integrating the soliton envelope over `z` leaves a single complex
//! amplitude `α(t) = √(2ξ) A · exp(i K A² t / 2)` with `|α|² = n`, the
//! soliton photon number. Treating the pulse as the coherent state `|α⟩`
//! gives Poisson photon-number statistics
//! `p_n = e^{-|α|²} |α|^{2n} / n!`, and the Kerr interaction attaches the
//! number-dependent phase `K A² t n / 2` to each number state.
//!
//! Probabilities are accumulated in log space (running `ln Γ(n+1)` sum), so
//! photon numbers up to ~10⁴ stay finite.

use num_complex::Complex;

use crate::float::Real;
use crate::soliton::{photon_number, SolitonParams};

/// Integrated complex amplitude of the soliton together with the parameters
/// it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude<T> {
    alpha: Complex<T>,
    source: SolitonParams<T>,
}

impl<T: Real> CoherentAmplitude<T> {
    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    /// `|α|²`, the mean photon number.
    pub fn alpha_sq(&self) -> T {
        self.alpha.norm_sqr()
    }

    pub fn source(&self) -> &SolitonParams<T> {
        &self.source
    }
}

/// Initial coherent amplitude `α(0) = √(2ξ) A`, real and positive, with
/// `|α(0)|²` equal to the soliton photon number `2A²ξ`.
pub fn alpha0<T: Real>(p: &SolitonParams<T>) -> CoherentAmplitude<T> {
    let alpha = (T::of(2.0) * p.width).sqrt() * p.amplitude;
    CoherentAmplitude {
        alpha: Complex::new(alpha, T::zero()),
        source: *p,
    }
}

/// Kerr-rotated amplitude `α(t) = α(0) · exp(i K A² t / 2)`; the magnitude
/// is invariant.
pub fn alpha_t<T: Real>(
    a0: &CoherentAmplitude<T>,
    kerr_k: T,
    amplitude: T,
    t: T,
) -> CoherentAmplitude<T> {
    let phase = kerr_k * amplitude * amplitude * t / T::of(2.0);
    CoherentAmplitude {
        alpha: a0.alpha * Complex::from_polar(T::one(), phase),
        source: a0.source,
    }
}

/// Kerr phase of the number state `|n⟩` after time `t`: `K A² t n / 2`,
/// linear in the photon number.
pub fn number_state_phase<T: Real>(n: usize, kerr_k: T, amplitude: T, t: T) -> T {
    let rate = kerr_k * amplitude * amplitude * t / T::of(2.0);
    rate * T::of(n as f64)
}

/// Truncated photon-number distribution `p_0 … p_{n_max}` plus the mass left
/// beyond the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonPmf<T> {
    probabilities: Vec<T>,
    tail_mass: T,
    truncation_warning: bool,
}

impl<T: Real> PhotonPmf<T> {
    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn n_max(&self) -> usize {
        self.probabilities.len() - 1
    }

    /// `1 − Σ p_n`: probability mass beyond `n_max` (clamped at 0).
    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }

    /// Set when `n_max` was too small to hold the bulk of the distribution
    /// (tail mass above 0.5).
    pub fn truncation_warning(&self) -> bool {
        self.truncation_warning
    }
}

/// Default truncation `⌈|α|² + 10√(|α|²) + 20⌉`: ten standard deviations
/// past the Poisson mean, leaving tail mass below 1e-12.
pub fn default_n_max<T: Real>(alpha_sq: T) -> usize {
    let bound = alpha_sq + T::of(10.0) * alpha_sq.sqrt() + T::of(20.0);
    bound.ceil().to_f64().unwrap_or(20.0) as usize
}

/// Poisson probabilities `p_n = e^{-|α|²} |α|^{2n} / n!` for `n ≤ n_max`,
/// evaluated as `exp(n ln|α|² − |α|² − ln n!)`.
pub fn photon_pmf<T: Real>(a: &CoherentAmplitude<T>, n_max: usize) -> PhotonPmf<T> {
    let alpha_sq = a.alpha_sq();
    let mut probabilities = Vec::with_capacity(n_max + 1);
    if alpha_sq == T::zero() {
        probabilities.push(T::one());
        probabilities.resize(n_max + 1, T::zero());
        return PhotonPmf {
            probabilities,
            tail_mass: T::zero(),
            truncation_warning: false,
        };
    }
    let ln_alpha_sq = alpha_sq.ln();
    let mut ln_factorial = T::zero();
    let mut total = T::zero();
    for n in 0..=n_max {
        if n > 0 {
            ln_factorial = ln_factorial + T::of(n as f64).ln();
        }
        let ln_p = T::of(n as f64) * ln_alpha_sq - alpha_sq - ln_factorial;
        let p = ln_p.exp();
        total = total + p;
        probabilities.push(p);
    }
    let tail_mass = (T::one() - total).max(T::zero());
    PhotonPmf {
        probabilities,
        tail_mass,
        truncation_warning: tail_mass > T::of(0.5),
    }
}

/// Truncated mean and variance of a photon-number distribution.
pub fn pmf_moments<T: Real>(pmf: &PhotonPmf<T>) -> (T, T) {
    let mut mean = T::zero();
    let mut second = T::zero();
    for (n, &p) in pmf.probabilities().iter().enumerate() {
        let nf = T::of(n as f64);
        mean = mean + nf * p;
        second = second + nf * nf * p;
    }
    (mean, second - mean * mean)
}
