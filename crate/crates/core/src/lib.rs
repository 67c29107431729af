//! Simulation and analysis toolkit for self-mixing-interferometry (SMI)
//! tactile fingertips.
//!
//! A laser diode facing the inside of a silicone fingertip turns surface
//! vibrations into fringes in its monitor photocurrent. This crate
//!
//! - synthesizes that photocurrent from target displacement ([`smi`]),
//! - runs it through a model of the analog readout and ADC ([`readout`]),
//! - generates bench and robot-experiment excitations, and a parallel
//!   microphone channel with ambient noise ([`scenario`]),
//! - measures noise floors, SNRs, spectra and events ([`analysis`]),
//! - and turns per-experiment SNRs into a technology decision map
//!   ([`decision`]).
//!
//! [`config`], [`io`] and [`pipeline`] tie the stages into reproducible runs;
//! the `smi-tactile` binary is a thin wrapper over [`pipeline::run_pipeline`].
//!
//! ```
//! use smi_tactile::prelude::*;
//!
//! let laser = LaserConfig::default();
//! let d = gen_sinusoid(500.0, 3.0 * laser.wavelength_m, 0.004, 200_000.0).unwrap();
//! let current = simulate_smi(&d, &laser).unwrap();
//! let report = count_fringes(&current, 300..500, &FringeDetectorParams::default()).unwrap();
//! assert_eq!(report.fringe_count, 6);
//! ```

pub mod analysis;
pub mod config;
pub mod decision;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod readout;
pub mod rng;
pub mod scenario;
pub mod smi;
pub mod trace;

pub use error::{Error, Result};
pub use trace::{SampleTrace, Unit};

pub mod prelude {
    pub use crate::analysis::{
        detect_events, noise_floor, normalize, peak_snr, pick_peaks, snr_db, spectrum,
        worst_case_noise, EventKind, EventParams, NoiseEstimate, SnrReport, SpectrumReport,
    };
    pub use crate::config::RunConfig;
    pub use crate::decision::{build_map, classify, ExperimentRecord, Winner};
    pub use crate::readout::{
        apply_chain, apply_filter, design_highpass, design_sallen_key_lowpass, frequency_response,
        quantize, BiquadCoeffs, ReadoutConfig,
    };
    pub use crate::scenario::{
        gen_impulse_train, gen_sinusoid, gen_slip_burst, gen_stepper, laser_channel, mic_channel,
        MicModel, ScenarioSpec, Source,
    };
    pub use crate::smi::{
        count_fringes, displacement_from_fringes, simulate_smi, solve_excess_phase,
        FringeDetectorParams, FringeReport, LaserConfig,
    };
    pub use crate::trace::{rms, SampleTrace, Unit};
    pub use crate::{Error, Result};
}
