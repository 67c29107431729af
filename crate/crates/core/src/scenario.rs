//! Synthetic excitations for the bench and robot experiments, plus the two
//! sensing channels that observe them: the laser through the readout chain
//! and the embedded microphone with ambient noise.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::readout::{apply_chain, quantize, ReadoutConfig};
use crate::rng::{self, stream};
use crate::smi::{simulate_smi, LaserConfig};
use crate::trace::{rms, SampleTrace, Unit};

/// Ambient level (dB SPL) at which the microphone's ambient term has unit
/// coupling. Measured around the fingertips with no added noise.
pub const REFERENCE_ANL_DB: f64 = 57.0;

/// Length of the raised-cosine ramps at both ends of a slip burst.
pub const BURST_RAMP_S: f64 = 0.010;

/// Default number of stepper tones (fundamental plus harmonics).
pub const STEPPER_TONES: usize = 5;

/// What drives the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Sinusoid {
        freq_hz: f64,
        amplitude_pp_m: f64,
    },
    Stepper {
        steps_per_s: f64,
        fundamental_amplitude_m: f64,
        #[serde(default = "default_rolloff")]
        harmonic_rolloff_db: f64,
    },
    SlipBurst {
        band_lo_hz: f64,
        band_hi_hz: f64,
        rms_m: f64,
        onset_s: f64,
        burst_s: f64,
    },
    ImpulseTrain {
        peak_amplitudes_m: Vec<f64>,
        spacing_s: f64,
        #[serde(default = "default_ring_freq")]
        ring_freq_hz: f64,
        decay_tau_s: f64,
    },
    Silence {},
}

fn default_rolloff() -> f64 {
    6.0
}

fn default_ring_freq() -> f64 {
    1_200.0
}

/// A declarative, seeded experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub duration_s: f64,
    /// Physics-level sample rate.
    #[serde(default = "default_physics_rate")]
    pub rate_hz: f64,
    /// Root seed for every random stream in the run.
    #[serde(default)]
    pub seed: u64,
    /// Static laser-to-target offset added to the displacement. Sets the
    /// interferometric operating point for sub-fringe vibrations.
    #[serde(default)]
    pub standoff_m: f64,
    /// Ambient noise level (dB SPL) around the fingertip.
    #[serde(default = "default_anl")]
    pub anl_db: f64,
    pub source: Source,
}

fn default_physics_rate() -> f64 {
    200_000.0
}

fn default_anl() -> f64 {
    REFERENCE_ANL_DB
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.duration_s > 0.0 && self.duration_s.is_finite(),
            InvalidConfig,
            "scenario.duration_s must be > 0, got {}",
            self.duration_s
        );
        ensure!(
            self.rate_hz > 0.0 && self.rate_hz.is_finite(),
            InvalidConfig,
            "scenario.rate_hz must be > 0, got {}",
            self.rate_hz
        );
        ensure!(
            self.standoff_m.is_finite() && self.anl_db.is_finite(),
            InvalidConfig,
            "scenario.standoff_m and scenario.anl_db must be finite"
        );
        Ok(())
    }

    /// Target displacement for this scenario, standoff included.
    pub fn displacement(&self) -> Result<SampleTrace> {
        self.validate()?;
        let (dur, rate, seed) = (self.duration_s, self.rate_hz, self.seed);
        let d = match &self.source {
            Source::Sinusoid {
                freq_hz,
                amplitude_pp_m,
            } => gen_sinusoid(*freq_hz, *amplitude_pp_m, dur, rate)?,
            Source::Stepper {
                steps_per_s,
                fundamental_amplitude_m,
                harmonic_rolloff_db,
            } => gen_stepper(
                *steps_per_s,
                *fundamental_amplitude_m,
                *harmonic_rolloff_db,
                dur,
                rate,
                seed,
            )?,
            Source::SlipBurst {
                band_lo_hz,
                band_hi_hz,
                rms_m,
                onset_s,
                burst_s,
            } => gen_slip_burst(
                *band_lo_hz,
                *band_hi_hz,
                *rms_m,
                *onset_s,
                *burst_s,
                dur,
                rate,
                seed,
            )?,
            Source::ImpulseTrain {
                peak_amplitudes_m,
                spacing_s,
                ring_freq_hz,
                decay_tau_s,
            } => {
                let train = gen_impulse_train(
                    peak_amplitudes_m,
                    *spacing_s,
                    *ring_freq_hz,
                    *decay_tau_s,
                    rate,
                )?;
                let n = sample_count(dur, rate);
                let mut samples = train.into_samples();
                samples.resize(n, 0.0);
                SampleTrace::new(rate, Unit::Meters, samples)?
            }
            Source::Silence {} => SampleTrace::zeros(rate, Unit::Meters, sample_count(dur, rate))?,
        };
        if self.standoff_m == 0.0 {
            Ok(d)
        } else {
            d.map(Unit::Meters, |x| x + self.standoff_m)
        }
    }
}

fn sample_count(duration_s: f64, rate_hz: f64) -> usize {
    (duration_s * rate_hz).round() as usize
}

fn check_rate(rate_hz: f64, duration_s: f64) -> Result<()> {
    ensure!(
        rate_hz > 0.0 && rate_hz.is_finite(),
        InvalidArgument,
        "rate must be > 0, got {rate_hz}"
    );
    ensure!(
        duration_s > 0.0 && duration_s.is_finite(),
        InvalidArgument,
        "duration must be > 0, got {duration_s}"
    );
    Ok(())
}

/// `D(t) = (pp/2) sin(2 pi f t)`.
pub fn gen_sinusoid(
    freq_hz: f64,
    amplitude_pp_m: f64,
    duration_s: f64,
    rate_hz: f64,
) -> Result<SampleTrace> {
    check_rate(rate_hz, duration_s)?;
    ensure!(
        freq_hz >= 0.0 && freq_hz < rate_hz / 2.0,
        InvalidArgument,
        "sinusoid at {freq_hz} Hz aliases at rate {rate_hz} Hz"
    );
    let amp = amplitude_pp_m / 2.0;
    SampleTrace::from_fn(
        rate_hz,
        Unit::Meters,
        sample_count(duration_s, rate_hz),
        |t| amp * (2.0 * PI * freq_hz * t).sin(),
    )
}

/// Stepper-motor vibration: fundamental at the step rate, harmonics falling
/// by `harmonic_rolloff_db` each, and a white floor 40 dB below the
/// fundamental's RMS. Tones at or above Nyquist are omitted.
pub fn gen_stepper(
    steps_per_s: f64,
    fundamental_amplitude_m: f64,
    harmonic_rolloff_db: f64,
    duration_s: f64,
    rate_hz: f64,
    seed: u64,
) -> Result<SampleTrace> {
    check_rate(rate_hz, duration_s)?;
    ensure!(
        steps_per_s > 0.0 && steps_per_s * 3.0 < rate_hz / 2.0,
        InvalidArgument,
        "step rate {steps_per_s} leaves no room for 3 harmonics below {} Hz",
        rate_hz / 2.0
    );
    let tones: Vec<(f64, f64)> = (1..=STEPPER_TONES)
        .map(|k| {
            let gain = 10f64.powf(-harmonic_rolloff_db * (k - 1) as f64 / 20.0);
            (k as f64 * steps_per_s, fundamental_amplitude_m * gain)
        })
        .filter(|&(f, _)| f < rate_hz / 2.0)
        .collect();
    let n = sample_count(duration_s, rate_hz);
    let floor_rms = fundamental_amplitude_m.abs() / 2f64.sqrt() * 0.01;
    let noise = rng::gaussian(seed, stream::DISPLACEMENT, n, floor_rms);
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / rate_hz;
            tones
                .iter()
                .map(|&(f, a)| a * (2.0 * PI * f * t).sin())
                .sum::<f64>()
                + noise[i]
        })
        .collect();
    SampleTrace::new(rate_hz, Unit::Meters, samples)
}

/// Band-limited Gaussian burst embedded in silence.
///
/// White noise is confined to `[band_lo_hz, band_hi_hz]` by zeroing FFT bins,
/// shaped by raised-cosine ramps of [`BURST_RAMP_S`], then scaled so the
/// burst region has exactly `rms_m`.
#[allow(clippy::too_many_arguments)]
pub fn gen_slip_burst(
    band_lo_hz: f64,
    band_hi_hz: f64,
    rms_m: f64,
    onset_s: f64,
    burst_s: f64,
    total_s: f64,
    rate_hz: f64,
    seed: u64,
) -> Result<SampleTrace> {
    check_rate(rate_hz, total_s)?;
    ensure!(
        0.0 < band_lo_hz && band_lo_hz < band_hi_hz && band_hi_hz < rate_hz / 2.0,
        InvalidArgument,
        "band {band_lo_hz}..{band_hi_hz} Hz must lie inside (0, {}) Hz",
        rate_hz / 2.0
    );
    ensure!(
        onset_s >= 0.0 && burst_s > 0.0 && onset_s + burst_s <= total_s + 1e-12,
        InvalidArgument,
        "burst {onset_s}+{burst_s} s does not fit in {total_s} s"
    );
    ensure!(rms_m >= 0.0, InvalidArgument, "rms must be >= 0");
    let n_total = sample_count(total_s, rate_hz);
    let start = sample_count(onset_s, rate_hz);
    let n = sample_count(burst_s, rate_hz).min(n_total - start);
    let mut out = vec![0.0; n_total];
    if rms_m == 0.0 || n == 0 {
        return SampleTrace::new(rate_hz, Unit::Meters, out);
    }

    let white = rng::gaussian(seed, stream::DISPLACEMENT, n, 1.0);
    let mut spectrum: Vec<Complex<f64>> = white.iter().map(|&x| Complex::new(x, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut spectrum);
    let df = rate_hz / n as f64;
    for (k, bin) in spectrum.iter_mut().enumerate() {
        let f = k.min(n - k) as f64 * df;
        if f < band_lo_hz || f > band_hi_hz {
            *bin = Complex::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut spectrum);
    let mut burst: Vec<f64> = spectrum.iter().map(|c| c.re).collect();

    let ramp = sample_count(BURST_RAMP_S, rate_hz).min(n / 2);
    for i in 0..ramp {
        let w = 0.5 - 0.5 * (PI * i as f64 / ramp as f64).cos();
        burst[i] *= w;
        burst[n - 1 - i] *= w;
    }
    let current = rms(&burst);
    if current > 0.0 {
        let scale = rms_m / current;
        burst.iter_mut().for_each(|x| *x *= scale);
    }
    out[start..start + n].copy_from_slice(&burst);
    SampleTrace::new(rate_hz, Unit::Meters, out)
}

/// Train of decaying-sinusoid wavelets, one per dropped object.
///
/// Event `i` starts at `(i + 1) * spacing_s`, so the first spacing is quiet
/// and usable as a rest region. Each wavelet is scaled so its sampled peak
/// magnitude equals `|p_i|`. The trace lasts `(n + 1) * spacing_s`.
pub fn gen_impulse_train(
    peak_amplitudes_m: &[f64],
    spacing_s: f64,
    ring_freq_hz: f64,
    decay_tau_s: f64,
    rate_hz: f64,
) -> Result<SampleTrace> {
    ensure!(
        !peak_amplitudes_m.is_empty(),
        InvalidArgument,
        "impulse train needs at least one peak"
    );
    ensure!(
        decay_tau_s > 0.0 && spacing_s > 5.0 * decay_tau_s,
        InvalidArgument,
        "spacing {spacing_s} s must exceed 5 decay constants ({} s)",
        5.0 * decay_tau_s
    );
    ensure!(
        ring_freq_hz > 0.0 && ring_freq_hz < rate_hz / 2.0,
        InvalidArgument,
        "ring frequency {ring_freq_hz} Hz must lie below Nyquist"
    );
    let spacing = sample_count(spacing_s, rate_hz);
    let wavelet: Vec<f64> = (0..spacing)
        .map(|k| {
            let t = k as f64 / rate_hz;
            (-t / decay_tau_s).exp() * (2.0 * PI * ring_freq_hz * t).sin()
        })
        .collect();
    let unit_peak = wavelet.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut out = vec![0.0; (peak_amplitudes_m.len() + 1) * spacing];
    for (i, &p) in peak_amplitudes_m.iter().enumerate() {
        let start = (i + 1) * spacing;
        for (k, &w) in wavelet.iter().enumerate() {
            out[start + k] += p * w / unit_peak;
        }
    }
    SampleTrace::new(rate_hz, Unit::Meters, out)
}

/// Linear model of the embedded microphone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MicModel {
    /// Output amplitude per unit of vibration.
    pub sensitivity: f64,
    /// Self-noise RMS in output amplitude units.
    pub self_noise_rms: f64,
    /// Ambient RMS (output units) at the reference ambient level.
    pub ambient_coupling: f64,
}

impl Default for MicModel {
    fn default() -> Self {
        Self {
            sensitivity: 2e8,
            self_noise_rms: 0.5,
            ambient_coupling: 1.0,
        }
    }
}

impl MicModel {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.sensitivity > 0.0 && self.sensitivity.is_finite(),
            InvalidConfig,
            "mic.sensitivity must be > 0"
        );
        ensure!(
            self.self_noise_rms >= 0.0 && self.ambient_coupling >= 0.0,
            InvalidConfig,
            "mic noise terms must be >= 0"
        );
        Ok(())
    }

    /// RMS of the ambient term at `anl_db`.
    pub fn ambient_rms(&self, anl_db: f64) -> f64 {
        self.ambient_coupling * 10f64.powf((anl_db - REFERENCE_ANL_DB) / 20.0)
    }
}

/// Microphone output: scaled vibration plus white ambient and self noise.
/// Ambient and self noise come from separate seeded streams.
pub fn mic_channel(
    vibration: &SampleTrace,
    ambient_anl_db: f64,
    model: &MicModel,
    seed: u64,
) -> Result<SampleTrace> {
    model.validate()?;
    let n = vibration.len();
    let ambient = rng::gaussian(
        seed,
        stream::MIC_AMBIENT,
        n,
        model.ambient_rms(ambient_anl_db),
    );
    let own = rng::gaussian(seed, stream::MIC_SELF_NOISE, n, model.self_noise_rms);
    let samples = vibration
        .samples()
        .iter()
        .zip(ambient.iter().zip(&own))
        .map(|(&v, (&a, &s))| model.sensitivity * v + a + s)
        .collect();
    SampleTrace::new(vibration.sample_rate_hz(), Unit::Dimensionless, samples)
}

/// ADC output of the laser channel and what was noticed on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct LaserChannelOutput {
    pub trace: SampleTrace,
    /// ADC samples that hit a rail.
    pub clipped: usize,
    /// Mean fringe rate: total travel per second over half a wavelength.
    pub fringe_rate_hz: f64,
    /// False when fringes arrive faster than the AA cutoff, so individual
    /// fringes are smeared into the anti-aliasing band at the ADC.
    pub fringes_resolvable: bool,
}

/// Laser path: SMI physics, optional photocurrent noise, readout chain, ADC.
/// Ambient sound does not enter this path.
pub fn laser_channel(
    vibration: &SampleTrace,
    laser: &LaserConfig,
    cfg: &ReadoutConfig,
    seed: u64,
) -> Result<LaserChannelOutput> {
    let mut current = simulate_smi(vibration, laser)?;
    if cfg.current_noise_rms_a > 0.0 {
        let noise = rng::gaussian(
            seed,
            stream::LASER_CURRENT_NOISE,
            current.len(),
            cfg.current_noise_rms_a,
        );
        let noisy = current
            .samples()
            .iter()
            .zip(&noise)
            .map(|(i, n)| i + n)
            .collect();
        current = SampleTrace::new(current.sample_rate_hz(), Unit::Amps, noisy)?;
    }
    let analog = apply_chain(&current, cfg)?;
    let adc = quantize(&analog, cfg)?;
    let fringe_rate_hz = mean_fringe_rate(vibration, laser);
    Ok(LaserChannelOutput {
        trace: adc.trace,
        clipped: adc.clipped,
        fringe_rate_hz,
        fringes_resolvable: fringe_rate_hz < cfg.aa_cutoff_hz,
    })
}

fn mean_fringe_rate(vibration: &SampleTrace, laser: &LaserConfig) -> f64 {
    let travel: f64 = vibration
        .samples()
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum();
    let duration = vibration.duration_s();
    if duration == 0.0 {
        0.0
    } else {
        travel / (laser.wavelength_m / 2.0) / duration
    }
}
