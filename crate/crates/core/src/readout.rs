//! Discrete-time model of the analog front end: transimpedance amplifier,
//! first-order high-pass, signal amplifier, second-order Sallen-Key
//! anti-aliasing low-pass, and the ADC.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::trace::{SampleTrace, Unit};

/// Front-end parameters. Defaults mirror the fingertip board.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReadoutConfig {
    /// Transimpedance (V/A).
    pub tia_gain_v_per_a: f64,
    pub hp_cutoff_hz: f64,
    pub sa_gain: f64,
    pub aa_cutoff_hz: f64,
    pub aa_quality: f64,
    pub adc_rate_hz: f64,
    pub adc_bits: u32,
    pub adc_fullscale_v: f64,
    /// White photocurrent noise (A rms per input sample) added before the
    /// TIA by [`crate::scenario::laser_channel`]. Zero disables it.
    pub current_noise_rms_a: f64,
}

impl Default for ReadoutConfig {
    fn default() -> Self {
        Self {
            tia_gain_v_per_a: 40_000.0,
            hp_cutoff_hz: 150.0,
            sa_gain: 30.0,
            aa_cutoff_hz: 2_000.0,
            aa_quality: std::f64::consts::FRAC_1_SQRT_2,
            adc_rate_hz: 10_000.0,
            adc_bits: 12,
            adc_fullscale_v: 5.0,
            current_noise_rms_a: 0.0,
        }
    }
}

impl ReadoutConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tia_gain_v_per_a", self.tia_gain_v_per_a),
            ("hp_cutoff_hz", self.hp_cutoff_hz),
            ("sa_gain", self.sa_gain),
            ("aa_cutoff_hz", self.aa_cutoff_hz),
            ("aa_quality", self.aa_quality),
            ("adc_rate_hz", self.adc_rate_hz),
            ("adc_fullscale_v", self.adc_fullscale_v),
        ] {
            ensure!(
                v.is_finite() && v > 0.0,
                InvalidConfig,
                "readout.{name} must be > 0, got {v}"
            );
        }
        ensure!(
            self.hp_cutoff_hz < self.aa_cutoff_hz && self.aa_cutoff_hz < self.adc_rate_hz / 2.0,
            InvalidConfig,
            "readout cutoffs must satisfy hp ({}) < aa ({}) < adc_rate/2 ({})",
            self.hp_cutoff_hz,
            self.aa_cutoff_hz,
            self.adc_rate_hz / 2.0
        );
        ensure!(
            (2..=32).contains(&self.adc_bits),
            InvalidConfig,
            "readout.adc_bits must lie in [2, 32], got {}",
            self.adc_bits
        );
        ensure!(
            self.current_noise_rms_a.is_finite() && self.current_noise_rms_a >= 0.0,
            InvalidConfig,
            "readout.current_noise_rms_a must be >= 0"
        );
        Ok(())
    }

    /// Combined TIA and SA gain (V/A).
    pub fn midband_gain(&self) -> f64 {
        self.tia_gain_v_per_a * self.sa_gain
    }

    /// Samples to skip after the start of a chain output before the
    /// high-pass transient has settled (five cutoff periods).
    pub fn settling_s(&self) -> f64 {
        5.0 / self.hp_cutoff_hz
    }
}

/// Normalized biquad `H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiquadCoeffs {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
    pub design_rate_hz: f64,
}

impl BiquadCoeffs {
    pub fn identity(rate_hz: f64) -> Self {
        Self {
            b0: 1.0,
            b1: 0.0,
            b2: 0.0,
            a1: 0.0,
            a2: 0.0,
            design_rate_hz: rate_hz,
        }
    }

    /// Largest pole magnitude of `z^2 + a1 z + a2`.
    pub fn pole_radius(&self) -> f64 {
        let disc = self.a1 * self.a1 - 4.0 * self.a2;
        if disc >= 0.0 {
            let s = disc.sqrt();
            ((-self.a1 + s) / 2.0)
                .abs()
                .max(((-self.a1 - s) / 2.0).abs())
        } else {
            // complex pair: |z|^2 = a2
            self.a2.sqrt()
        }
    }

    pub fn is_stable(&self) -> bool {
        self.pole_radius() < 1.0
    }
}

fn check_cutoff(cutoff_hz: f64, rate_hz: f64) -> Result<()> {
    ensure!(
        rate_hz.is_finite() && rate_hz > 0.0,
        InvalidArgument,
        "sample rate must be > 0, got {rate_hz}"
    );
    ensure!(
        cutoff_hz > 0.0 && cutoff_hz < rate_hz / 2.0,
        InvalidArgument,
        "cutoff {cutoff_hz} Hz must lie in (0, {}) Hz",
        rate_hz / 2.0
    );
    Ok(())
}

/// First-order high-pass, bilinear transform prewarped at `cutoff_hz`.
pub fn design_highpass(cutoff_hz: f64, rate_hz: f64) -> Result<BiquadCoeffs> {
    check_cutoff(cutoff_hz, rate_hz)?;
    let k = (PI * cutoff_hz / rate_hz).tan();
    let norm = 1.0 / (1.0 + k);
    Ok(BiquadCoeffs {
        b0: norm,
        b1: -norm,
        b2: 0.0,
        a1: (k - 1.0) * norm,
        a2: 0.0,
        design_rate_hz: rate_hz,
    })
}

/// Second-order low-pass with quality factor `q` (the Sallen-Key response),
/// bilinear transform prewarped at `cutoff_hz`.
pub fn design_sallen_key_lowpass(cutoff_hz: f64, q: f64, rate_hz: f64) -> Result<BiquadCoeffs> {
    check_cutoff(cutoff_hz, rate_hz)?;
    ensure!(
        q > 0.0 && q.is_finite(),
        InvalidArgument,
        "q must be > 0, got {q}"
    );
    let k = (PI * cutoff_hz / rate_hz).tan();
    let k2 = k * k;
    let norm = 1.0 / (1.0 + k / q + k2);
    let b0 = k2 * norm;
    Ok(BiquadCoeffs {
        b0,
        b1: 2.0 * b0,
        b2: b0,
        a1: 2.0 * (k2 - 1.0) * norm,
        a2: (1.0 - k / q + k2) * norm,
        design_rate_hz: rate_hz,
    })
}

/// Magnitude response in dB at `freq_hz`, evaluated on the unit circle.
pub fn frequency_response(coeffs: &BiquadCoeffs, freq_hz: f64) -> f64 {
    let w = 2.0 * PI * freq_hz / coeffs.design_rate_hz;
    let (c1, s1) = (w.cos(), w.sin());
    let (c2, s2) = ((2.0 * w).cos(), (2.0 * w).sin());
    let num_re = coeffs.b0 + coeffs.b1 * c1 + coeffs.b2 * c2;
    let num_im = -(coeffs.b1 * s1 + coeffs.b2 * s2);
    let den_re = 1.0 + coeffs.a1 * c1 + coeffs.a2 * c2;
    let den_im = -(coeffs.a1 * s1 + coeffs.a2 * s2);
    let num = num_re.hypot(num_im);
    let den = den_re.hypot(den_im);
    20.0 * (num / den).log10()
}

/// Streaming direct-form-II-transposed biquad.
#[derive(Debug, Clone)]
pub struct BiquadFilter {
    coeffs: BiquadCoeffs,
    s1: f64,
    s2: f64,
}

impl BiquadFilter {
    pub fn new(coeffs: BiquadCoeffs) -> Self {
        Self {
            coeffs,
            s1: 0.0,
            s2: 0.0,
        }
    }

    #[inline]
    pub fn process(&mut self, x: f64) -> f64 {
        let c = &self.coeffs;
        let y = c.b0 * x + self.s1;
        self.s1 = c.b1 * x - c.a1 * y + self.s2;
        self.s2 = c.b2 * x - c.a2 * y;
        y
    }

    pub fn reset(&mut self) {
        self.s1 = 0.0;
        self.s2 = 0.0;
    }

    /// Loads the state a long run of constant input `x` would leave behind,
    /// so the next sample sees no start-up transient. Returns the settled
    /// output level.
    pub fn settle_at(&mut self, x: f64) -> f64 {
        let c = &self.coeffs;
        let y = x * (c.b0 + c.b1 + c.b2) / (1.0 + c.a1 + c.a2);
        self.s2 = c.b2 * x - c.a2 * y;
        self.s1 = c.b1 * x - c.a1 * y + self.s2;
        y
    }
}

/// Filters a whole trace from zero initial state.
pub fn apply_filter(coeffs: &BiquadCoeffs, input: &SampleTrace) -> Result<SampleTrace> {
    ensure!(
        input.sample_rate_hz() == coeffs.design_rate_hz,
        InvalidArgument,
        "trace rate {} Hz does not match filter design rate {} Hz",
        input.sample_rate_hz(),
        coeffs.design_rate_hz
    );
    let mut filter = BiquadFilter::new(*coeffs);
    let out = input.samples().iter().map(|&x| filter.process(x)).collect();
    SampleTrace::new(input.sample_rate_hz(), input.unit(), out)
}

/// TIA, HP, SA and AA at the input rate, then resampling to the ADC rate.
/// Both filters start settled on the first input sample.
/// The result is the analog voltage presented to the converter; see
/// [`quantize`] for the conversion itself.
pub fn apply_chain(photocurrent: &SampleTrace, cfg: &ReadoutConfig) -> Result<SampleTrace> {
    photocurrent.require_unit(Unit::Amps)?;
    cfg.validate()?;
    let rate = photocurrent.sample_rate_hz();
    ensure!(
        rate >= 2.0 * cfg.aa_cutoff_hz,
        InvalidConfig,
        "input rate {rate} Hz is below twice the AA cutoff ({} Hz)",
        cfg.aa_cutoff_hz
    );
    let mut hp = BiquadFilter::new(design_highpass(cfg.hp_cutoff_hz, rate)?);
    let mut aa = BiquadFilter::new(design_sallen_key_lowpass(
        cfg.aa_cutoff_hz,
        cfg.aa_quality,
        rate,
    )?);
    // The front end is assumed powered long before the record starts.
    if let Some(&first) = photocurrent.samples().first() {
        let v = hp.settle_at(first * cfg.tia_gain_v_per_a);
        aa.settle_at(v * cfg.sa_gain);
    }
    let analog: Vec<f64> = photocurrent
        .samples()
        .iter()
        .map(|&i| {
            let v = hp.process(i * cfg.tia_gain_v_per_a);
            aa.process(v * cfg.sa_gain)
        })
        .collect();
    let resampled = resample::to_rate(&analog, rate, cfg.adc_rate_hz);
    SampleTrace::new(cfg.adc_rate_hz, Unit::Volts, resampled)
}

/// Quantizer output plus the number of samples that hit the rails.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantized {
    pub trace: SampleTrace,
    pub clipped: usize,
}

/// Mid-tread uniform quantizer over `[-fullscale/2, +fullscale/2]`.
pub fn quantize(trace: &SampleTrace, cfg: &ReadoutConfig) -> Result<Quantized> {
    let levels = 2f64.powi(cfg.adc_bits as i32);
    let lsb = cfg.adc_fullscale_v / levels;
    let top = levels / 2.0 - 1.0;
    let bottom = -levels / 2.0;
    let mut clipped = 0;
    let out = trace
        .samples()
        .iter()
        .map(|&v| {
            let code = (v / lsb).round();
            if code > top || code < bottom {
                clipped += 1;
            }
            code.clamp(bottom, top) * lsb
        })
        .collect();
    Ok(Quantized {
        trace: SampleTrace::new(trace.sample_rate_hz(), Unit::Volts, out)?,
        clipped,
    })
}

/// Rate conversion from the simulation rate down to the ADC rate.
pub mod resample {
    use std::f64::consts::PI;

    /// Above this integer decimation factor a guard FIR runs before picking
    /// samples; below it the AA biquad alone is the anti-alias filter.
    pub const GUARD_RATIO: usize = 20;

    pub fn to_rate(x: &[f64], in_rate: f64, out_rate: f64) -> Vec<f64> {
        let ratio = in_rate / out_rate;
        let integer = ratio.round();
        if (ratio - integer).abs() < 1e-9 * ratio && integer >= 1.0 {
            let m = integer as usize;
            if m == 1 {
                x.to_vec()
            } else if m <= GUARD_RATIO {
                x.iter().step_by(m).copied().collect()
            } else {
                decimate_with_guard(x, m)
            }
        } else {
            interpolate(x, in_rate, out_rate)
        }
    }

    fn blackman(n: usize, len: usize) -> f64 {
        let t = n as f64 / (len - 1) as f64;
        0.42 - 0.5 * (2.0 * PI * t).cos() + 0.08 * (4.0 * PI * t).cos()
    }

    fn sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            (PI * x).sin() / (PI * x)
        }
    }

    /// Windowed-sinc low-pass at 0.45 of the output rate, evaluated only at
    /// the retained output instants (polyphase decimation).
    fn decimate_with_guard(x: &[f64], m: usize) -> Vec<f64> {
        let len = 8 * m + 1;
        let half = (len / 2) as isize;
        let fc = 0.45 / m as f64;
        let mut taps: Vec<f64> = (0..len)
            .map(|n| 2.0 * fc * sinc(2.0 * fc * (n as isize - half) as f64) * blackman(n, len))
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        (0..x.len())
            .step_by(m)
            .map(|i| {
                // causal alignment keeps the zero-state start
                taps.iter()
                    .enumerate()
                    .filter_map(|(k, &h)| i.checked_sub(k).map(|j| h * x[j]))
                    .sum()
            })
            .collect()
    }

    /// Band-limited interpolation for non-integer ratios.
    fn interpolate(x: &[f64], in_rate: f64, out_rate: f64) -> Vec<f64> {
        let scale = (out_rate / in_rate).min(1.0);
        let fc = 0.45 * scale;
        let half_width = (8.0 / scale).ceil() as isize;
        let n_out = (x.len() as f64 * out_rate / in_rate).floor() as usize;
        (0..n_out)
            .map(|k| {
                let pos = k as f64 * in_rate / out_rate;
                let center = pos.floor() as isize;
                let mut acc = 0.0;
                let mut wsum = 0.0;
                for j in (center - half_width + 1)..=(center + half_width) {
                    let d = pos - j as f64;
                    let win = 0.5 + 0.5 * (PI * d / half_width as f64).cos();
                    let h = 2.0 * fc * sinc(2.0 * fc * d) * win;
                    wsum += h;
                    if j >= 0 && (j as usize) < x.len() {
                        acc += h * x[j as usize];
                    }
                }
                acc / wsum
            })
            .collect()
    }
}
