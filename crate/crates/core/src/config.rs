//! Run configuration: a sectioned TOML document, strictly parsed.
//!
//! ```toml
//! [laser]
//! feedback_c = 0.5
//!
//! [scenario]
//! duration_s = 2.0
//! seed = 7
//! standoff_m = 8.125e-8
//!
//! [scenario.source]
//! kind = "slip_burst"
//! band_lo_hz = 60.0
//! band_hi_hz = 700.0
//! rms_m = 1e-8
//! onset_s = 1.0
//! burst_s = 0.5
//!
//! [analysis]
//! rest_s = [0.1, 0.9]
//! signal_s = [1.0, 1.5]
//! ```
//!
//! Every section is optional and falls back to its defaults; unknown keys
//! are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{EventParams, NOISE_WINDOW_S};
use crate::error::{ensure, Error, Result};
use crate::readout::ReadoutConfig;
use crate::scenario::{MicModel, ScenarioSpec, Source};
use crate::smi::{FringeDetectorParams, LaserConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrMode {
    WindowPower,
    PeakBased,
}

/// Where and how the analysis stage measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// At-rest region `[start, end]` in seconds.
    pub rest_s: [f64; 2],
    /// Signal region `[start, end]` in seconds.
    pub signal_s: [f64; 2],
    pub noise_window_s: f64,
    pub snr_mode: SnrMode,
    /// Number of peaks for the peak-based SNR.
    pub peak_count: usize,
    pub min_peak_separation_s: f64,
    pub events: EventParams,
    pub spectrum_start_s: f64,
    pub spectrum_len_s: f64,
    /// Fringe-counting window in seconds; the whole trace when absent.
    pub fringe_window_s: Option<[f64; 2]>,
    pub fringe_detector: FringeDetectorParams,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            rest_s: [0.1, 0.9],
            signal_s: [1.0, 1.5],
            noise_window_s: NOISE_WINDOW_S,
            snr_mode: SnrMode::WindowPower,
            peak_count: 10,
            min_peak_separation_s: 0.05,
            events: EventParams::default(),
            spectrum_start_s: 0.25,
            spectrum_len_s: 1.0,
            fringe_window_s: None,
            fringe_detector: FringeDetectorParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub laser: LaserConfig,
    pub readout: ReadoutConfig,
    pub mic: MicModel,
    pub scenario: ScenarioSpec,
    pub analysis: AnalysisConfig,
    /// Time ranges `[start, end]` (s) ignored by noise and signal power.
    pub exclusion_windows: Vec<[f64; 2]>,
}

impl Default for RunConfig {
    fn default() -> Self {
        presets::speaker(3.0)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => Error::InvalidConfig(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("RunConfig always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.laser.validate()?;
        self.readout.validate()?;
        self.mic.validate()?;
        self.scenario.validate()?;
        let a = &self.analysis;
        for (name, [lo, hi]) in [("rest_s", a.rest_s), ("signal_s", a.signal_s)] {
            ensure!(
                0.0 <= lo && lo < hi,
                InvalidConfig,
                "analysis.{name} must be an increasing pair, got [{lo}, {hi}]"
            );
        }
        ensure!(
            a.noise_window_s > 0.0 && a.spectrum_len_s > 0.0,
            InvalidConfig,
            "analysis window lengths must be > 0"
        );
        ensure!(
            a.peak_count > 0,
            InvalidConfig,
            "analysis.peak_count must be > 0"
        );
        for w in &self.exclusion_windows {
            ensure!(
                w[0] < w[1],
                InvalidConfig,
                "exclusion window [{}, {}] is not increasing",
                w[0],
                w[1]
            );
        }
        Ok(())
    }

    /// Built-in scenario by name; see [`presets::NAMES`].
    pub fn preset(name: &str) -> Result<Self> {
        presets::by_name(name)
    }
}

/// Ready-made scenarios reproducing the bench validation and robot
/// experiments with synthetic excitation.
pub mod presets {
    use super::*;

    pub const NAMES: &[&str] = &[
        "speaker",
        "stepper500",
        "stepper1000",
        "cable",
        "box",
        "pencil",
        "pencil_noisy",
        "cup",
        "cup_noisy",
    ];

    /// Operating point a quarter fringe from the intensity extremum.
    pub fn quadrature_standoff(laser: &LaserConfig) -> f64 {
        laser.wavelength_m / 8.0
    }

    /// Readout with a photocurrent noise floor so SNRs are finite.
    pub fn noisy_readout() -> ReadoutConfig {
        ReadoutConfig {
            current_noise_rms_a: 1.5e-7,
            ..ReadoutConfig::default()
        }
    }

    pub fn by_name(name: &str) -> Result<RunConfig> {
        Ok(match name {
            "speaker" => speaker(3.0),
            "stepper500" => stepper(500.0),
            "stepper1000" => stepper(1_000.0),
            "cable" => slip("cable", 60.0, 700.0, 10e-9, 57.0),
            "box" => slip("box", 60.0, 700.0, 400e-9, 57.0),
            "pencil" => slip("pencil", 200.0, 1_000.0, 300e-9, 57.0),
            "pencil_noisy" => slip("pencil", 200.0, 1_000.0, 300e-9, 82.0),
            "cup" => cup(57.0),
            "cup_noisy" => cup(82.0),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown preset `{other}`; known: {}",
                    NAMES.join(", ")
                )))
            }
        })
    }

    /// Speaker driven at 500 Hz with `wavelengths` of peak-to-peak travel.
    /// The fringe window spans the rising half-period between turning points.
    pub fn speaker(wavelengths: f64) -> RunConfig {
        let laser = LaserConfig::default();
        RunConfig {
            scenario: ScenarioSpec {
                duration_s: 0.004,
                rate_hz: 200_000.0,
                seed: 1,
                standoff_m: 0.0,
                anl_db: 57.0,
                source: Source::Sinusoid {
                    freq_hz: 500.0,
                    amplitude_pp_m: wavelengths * laser.wavelength_m,
                },
            },
            analysis: AnalysisConfig {
                fringe_window_s: Some([0.0015, 0.0025]),
                ..AnalysisConfig::default()
            },
            laser,
            readout: ReadoutConfig::default(),
            mic: MicModel::default(),
            exclusion_windows: Vec::new(),
        }
    }

    /// Stepper motor coupled through a board, sub-fringe amplitude.
    pub fn stepper(steps_per_s: f64) -> RunConfig {
        let laser = LaserConfig::default();
        RunConfig {
            scenario: ScenarioSpec {
                duration_s: 1.5,
                rate_hz: 200_000.0,
                seed: 2,
                standoff_m: quadrature_standoff(&laser),
                anl_db: 57.0,
                source: Source::Stepper {
                    steps_per_s,
                    fundamental_amplitude_m: 20e-9,
                    harmonic_rolloff_db: 6.0,
                },
            },
            analysis: AnalysisConfig {
                spectrum_start_s: 0.25,
                spectrum_len_s: 1.0,
                ..AnalysisConfig::default()
            },
            laser,
            readout: noisy_readout(),
            mic: MicModel::default(),
            exclusion_windows: Vec::new(),
        }
    }

    /// Slip burst between 1.0 s and 1.5 s of a 2 s recording.
    pub fn slip(tag: &str, lo: f64, hi: f64, rms_m: f64, anl_db: f64) -> RunConfig {
        let laser = LaserConfig::default();
        let seed = tag
            .bytes()
            .fold(17u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
        RunConfig {
            scenario: ScenarioSpec {
                duration_s: 2.0,
                rate_hz: 200_000.0,
                seed,
                standoff_m: quadrature_standoff(&laser),
                anl_db,
                source: Source::SlipBurst {
                    band_lo_hz: lo,
                    band_hi_hz: hi,
                    rms_m,
                    onset_s: 1.0,
                    burst_s: 0.5,
                },
            },
            analysis: AnalysisConfig {
                rest_s: [0.1, 0.9],
                signal_s: [1.0, 1.5],
                ..AnalysisConfig::default()
            },
            laser,
            readout: noisy_readout(),
            mic: MicModel::default(),
            exclusion_windows: Vec::new(),
        }
    }

    /// Ten silicone pieces dropped into a cup; the first two land hardest.
    pub fn cup(anl_db: f64) -> RunConfig {
        let laser = LaserConfig::default();
        let mut peaks = vec![60e-9; 10];
        peaks[0] = 180e-9;
        peaks[1] = 180e-9;
        RunConfig {
            scenario: ScenarioSpec {
                duration_s: 2.2,
                rate_hz: 200_000.0,
                seed: 5,
                standoff_m: quadrature_standoff(&laser),
                anl_db,
                source: Source::ImpulseTrain {
                    peak_amplitudes_m: peaks,
                    spacing_s: 0.2,
                    ring_freq_hz: 1_200.0,
                    decay_tau_s: 0.01,
                },
            },
            analysis: AnalysisConfig {
                rest_s: [0.05, 0.19],
                signal_s: [0.2, 2.2],
                noise_window_s: 0.1,
                snr_mode: SnrMode::PeakBased,
                peak_count: 10,
                min_peak_separation_s: 0.1,
                ..AnalysisConfig::default()
            },
            laser,
            readout: noisy_readout(),
            mic: MicModel::default(),
            exclusion_windows: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip_through_toml() {
        for name in presets::NAMES {
            let cfg = RunConfig::preset(name).unwrap();
            let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
            assert_eq!(back, cfg, "{name}");
        }
        assert!(RunConfig::preset("nope").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("[laser]\nwavelength = 650e-9\n").unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
        assert!(RunConfig::from_toml("colour = 1\n").is_err());
        assert!(RunConfig::from_toml("[analysis]\nthreshold = 3\n").is_err());
    }

    #[test]
    fn partial_sections_fall_back_to_defaults() {
        let cfg = RunConfig::from_toml("[readout]\nsa_gain = 10.0\n").unwrap();
        assert_eq!(cfg.readout.sa_gain, 10.0);
        assert_eq!(cfg.readout.tia_gain_v_per_a, 40_000.0);
        assert_eq!(cfg.laser, LaserConfig::default());
    }

    #[test]
    fn invariant_violations_are_config_errors() {
        assert!(RunConfig::from_toml("[laser]\nfeedback_c = 1.2\n").is_err());
        assert!(RunConfig::from_toml("[readout]\naa_cutoff_hz = 6000.0\n").is_err());
        assert!(RunConfig::from_toml("exclusion_windows = [[1.0, 0.5]]\n").is_err());
    }
}
