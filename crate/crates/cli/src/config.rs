//! JSON run configuration.
//!
//! A single document fixes the waveguide, exactly one initial condition,
//! the grid, and the stepper; optional sections tune the photon-statistics
//! and Lax-check commands. All numbers are in the normalized units the
//! solver works in. Parsing round-trips: serialize-then-parse reproduces
//! the configuration exactly.

use serde::{Deserialize, Serialize};

use nlse_core::{
    from_photon_number, reduce_zs, Grid, SolitonParams, SplitScheme, StepperConfig,
    WaveguideParams, ZsParams,
};

use crate::{CmdError, CmdResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub waveguide: WaveguideSpec,
    pub initial: InitialSpec,
    pub grid: GridSpec,
    pub stepper: StepperSpec,
    #[serde(default)]
    pub photons: PhotonsSpec,
    #[serde(default)]
    pub lax: LaxSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CmdResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn waveguide_params(&self) -> CmdResult<WaveguideParams<f64>> {
        let w = &self.waveguide;
        Ok(WaveguideParams::new(w.omega0, w.k0, w.vg, w.gvd_c, w.kerr_k)?)
    }

    pub fn grid(&self) -> CmdResult<Grid<f64>> {
        Ok(Grid::new(self.grid.z_min, self.grid.z_max, self.grid.n_points)?)
    }

    /// The soliton (amplitude, width) pair behind the initial condition.
    /// A travelling four-parameter initial condition resolves only in its
    /// stationary special case.
    pub fn soliton_params(&self, w: &WaveguideParams<f64>) -> CmdResult<SolitonParams<f64>> {
        match &self.initial {
            InitialSpec::Soliton { amplitude, width } => {
                Ok(SolitonParams::new(*amplitude, *width)?)
            }
            InitialSpec::PhotonNumber(n) => Ok(from_photon_number(*n, w)?),
            InitialSpec::Zs { eta, xi, x0, phi, a0 } => {
                let p = ZsParams::new(*eta, *xi, *x0, *phi, *a0)?;
                Ok(reduce_zs(&p)?)
            }
        }
    }

    pub fn stepper(&self) -> CmdResult<StepperConfig<f64>> {
        let s = &self.stepper;
        Ok(StepperConfig::new(
            s.dt,
            s.t_end,
            s.snapshot_stride,
            s.scheme.into(),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideSpec {
    pub omega0: f64,
    pub k0: f64,
    pub vg: f64,
    pub gvd_c: f64,
    pub kerr_k: f64,
}

/// Exactly one initial condition; the JSON key picks the kind:
/// `{"soliton": {...}}`, `{"photon_number": 2.0}`, or `{"zs": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialSpec {
    Soliton { amplitude: f64, width: f64 },
    PhotonNumber(f64),
    Zs { eta: f64, xi: f64, x0: f64, phi: f64, a0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperSpec {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub scheme: SchemeSpec,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SchemeSpec {
    #[default]
    Strang,
}

impl From<SchemeSpec> for SplitScheme {
    fn from(s: SchemeSpec) -> Self {
        match s {
            SchemeSpec::Strang => SplitScheme::Strang,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PhotonsSpec {
    /// Truncation override; defaults to mean + 10 sigma + 20.
    #[serde(default)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaxSpec {
    /// Spectral-parameter sweep for the zeta-independence check.
    #[serde(default = "default_zetas")]
    pub zetas: Vec<f64>,
}

impl Default for LaxSpec {
    fn default() -> Self {
        Self { zetas: default_zetas() }
    }
}

fn default_zetas() -> Vec<f64> {
    vec![-1.0, 0.0, 0.7, 2.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "out".to_string() }
    }
}

/// Reject a photon-statistic resolution when the waveguide cannot hold a
/// bright soliton; used by commands that must report rather than fail.
pub fn bright_regime(w: &WaveguideParams<f64>) -> bool {
    w.ck() > 0.0
}

impl RunConfig {
    /// Example configuration: the unit soliton in the `C = K = 2` waveguide.
    pub fn example() -> Self {
        Self {
            waveguide: WaveguideSpec {
                omega0: 1.0,
                k0: 1.0,
                vg: 1.0,
                gvd_c: 2.0,
                kerr_k: 2.0,
            },
            initial: InitialSpec::Soliton { amplitude: 1.0, width: 1.0 },
            grid: GridSpec { z_min: -20.0, z_max: 20.0, n_points: 1024 },
            stepper: StepperSpec {
                dt: 2.5e-4,
                t_end: 1.0,
                snapshot_stride: 400,
                scheme: SchemeSpec::Strang,
            },
            photons: PhotonsSpec::default(),
            lax: LaxSpec::default(),
            output: OutputSpec::default(),
        }
    }
}

impl std::convert::TryFrom<&RunConfig> for ZsParams<f64> {
    type Error = CmdError;

    fn try_from(cfg: &RunConfig) -> CmdResult<Self> {
        match &cfg.initial {
            InitialSpec::Zs { eta, xi, x0, phi, a0 } => {
                Ok(ZsParams::new(*eta, *xi, *x0, *phi, *a0)?)
            }
            _ => Err(CmdError::Config("initial condition is not a zs spec".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let cfg = RunConfig::example();
        let text = cfg.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = RunConfig::from_json("{\n  \"waveguide\": [\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "diagnostic should name the line: {msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn initial_condition_is_exactly_one() {
        let text = r#"{
            "waveguide": {"omega0": 1.0, "k0": 1.0, "vg": 1.0, "gvd_c": 2.0, "kerr_k": 2.0},
            "initial": {"soliton": {"amplitude": 1.0, "width": 1.0}, "photon_number": 2.0},
            "grid": {"z_min": -20.0, "z_max": 20.0, "n_points": 1024},
            "stepper": {"dt": 0.001, "t_end": 1.0}
        }"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn photon_number_initial_resolves_to_balanced_soliton() {
        let mut cfg = RunConfig::example();
        cfg.initial = InitialSpec::PhotonNumber(2.0);
        let w = cfg.waveguide_params().unwrap();
        let p = cfg.soliton_params(&w).unwrap();
        assert!((p.amplitude - 1.0).abs() < 1e-15);
        assert!((p.width - 1.0).abs() < 1e-15);
    }

    #[test]
    fn defaults_fill_optional_sections() {
        let text = r#"{
            "waveguide": {"omega0": 1.0, "k0": 1.0, "vg": 1.0, "gvd_c": 2.0, "kerr_k": 2.0},
            "initial": {"photon_number": 2.0},
            "grid": {"z_min": -20.0, "z_max": 20.0, "n_points": 1024},
            "stepper": {"dt": 0.001, "t_end": 1.0}
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.stepper.snapshot_stride, 1);
        assert_eq!(cfg.lax.zetas, vec![-1.0, 0.0, 0.7, 2.0]);
        assert_eq!(cfg.output.dir, "out");
        assert_eq!(cfg.photons.n_max, None);
    }
}
