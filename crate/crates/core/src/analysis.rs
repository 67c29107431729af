//! Noise floor, normalization, SNR, spectra and event detection.
//!
//! Power is always the mean squared deviation from the window mean, and all
//! decibel figures are `10 log10` of a power ratio.

use std::ops::Range;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::trace::{SampleTrace, Unit};

/// Default worst-case sliding-window length and stride.
pub const NOISE_WINDOW_S: f64 = 0.5;
pub const NOISE_STRIDE_S: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePolicy {
    ExplicitWindow,
    WorstCaseSliding,
}

/// Square root of the at-rest noise power and where it was measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub sqrt_p_noise: f64,
    pub window: Range<usize>,
    pub policy: NoisePolicy,
}

impl NoiseEstimate {
    pub fn p_noise(&self) -> f64 {
        self.sqrt_p_noise * self.sqrt_p_noise
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrMethod {
    WindowPower,
    PeakBased,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub p_signal: f64,
    pub p_noise: f64,
    pub snr_db: f64,
    pub signal_window: Range<usize>,
    pub noise_window: Range<usize>,
    pub method: SnrMethod,
}

impl SnrReport {
    fn new(
        p_signal: f64,
        noise: &NoiseEstimate,
        signal_window: Range<usize>,
        method: SnrMethod,
    ) -> Result<Self> {
        let p_noise = noise.p_noise();
        if p_noise <= 0.0 {
            return Err(Error::Degenerate(
                "noise power is zero; the rest region carries no noise".into(),
            ));
        }
        Ok(Self {
            p_signal,
            p_noise,
            snr_db: 10.0 * (p_signal / p_noise).log10(),
            signal_window,
            noise_window: noise.window.clone(),
            method,
        })
    }
}

/// Mean squared deviation over the samples of `window` not covered by any
/// exclusion. Returns `(power, count)`.
fn windowed_power(x: &[f64], window: &Range<usize>, exclusions: &[Range<usize>]) -> (f64, usize) {
    let kept = || {
        window
            .clone()
            .filter(move |i| !exclusions.iter().any(|e| e.contains(i)))
            .map(|i| x[i])
    };
    let n = kept().count();
    if n == 0 {
        return (0.0, 0);
    }
    // Shifting by the first sample is exact for constant windows and keeps
    // the two-pass sums small.
    let shift = kept().next().unwrap_or(0.0);
    let mean = kept().map(|v| v - shift).sum::<f64>() / n as f64;
    let power = kept().map(|v| (v - shift - mean).powi(2)).sum::<f64>() / n as f64;
    (power, n)
}

/// Noise floor over an explicit window: the population standard deviation.
pub fn noise_floor(trace: &SampleTrace, window: Range<usize>) -> Result<NoiseEstimate> {
    trace.check_window(&window)?;
    ensure!(
        window.len() >= 2,
        InvalidArgument,
        "noise window needs at least 2 samples, got {}",
        window.len()
    );
    let (power, _) = windowed_power(trace.samples(), &window, &[]);
    Ok(NoiseEstimate {
        sqrt_p_noise: power.sqrt(),
        window,
        policy: NoisePolicy::ExplicitWindow,
    })
}

/// Worst-case noise floor: the largest [`noise_floor`] over windows of
/// `window_len` sliding through `rest_region` at half-window stride.
pub fn worst_case_noise(
    trace: &SampleTrace,
    rest_region: Range<usize>,
    window_len: usize,
) -> Result<NoiseEstimate> {
    worst_case_noise_excluding(trace, rest_region, window_len, &[])
}

/// As [`worst_case_noise`], skipping any window that overlaps an exclusion
/// (for example the start/stop transients of the robot).
pub fn worst_case_noise_excluding(
    trace: &SampleTrace,
    rest_region: Range<usize>,
    window_len: usize,
    exclusions: &[Range<usize>],
) -> Result<NoiseEstimate> {
    trace.check_window(&rest_region)?;
    ensure!(
        window_len >= 2 && rest_region.len() >= window_len,
        InvalidArgument,
        "rest region of {} samples cannot hold a {window_len}-sample window",
        rest_region.len()
    );
    let stride = (window_len / 2).max(1);
    let overlaps = |w: &Range<usize>| {
        exclusions
            .iter()
            .any(|e| e.start < w.end && w.start < e.end)
    };
    let mut best: Option<(f64, Range<usize>)> = None;
    let mut start = rest_region.start;
    while start + window_len <= rest_region.end {
        let w = start..start + window_len;
        if !overlaps(&w) {
            let (p, _) = windowed_power(trace.samples(), &w, &[]);
            if best.as_ref().is_none_or(|(bp, _)| p > *bp) {
                best = Some((p, w));
            }
        }
        start += stride;
    }
    let (power, window) = best
        .ok_or_else(|| Error::InvalidArgument("every noise window overlaps an exclusion".into()))?;
    Ok(NoiseEstimate {
        sqrt_p_noise: power.sqrt(),
        window,
        policy: NoisePolicy::WorstCaseSliding,
    })
}

/// Divides every sample by the noise amplitude; the result is dimensionless.
pub fn normalize(trace: &SampleTrace, noise: &NoiseEstimate) -> Result<SampleTrace> {
    if noise.sqrt_p_noise <= 0.0 || !noise.sqrt_p_noise.is_finite() {
        return Err(Error::Degenerate(format!(
            "cannot normalize by a noise amplitude of {}",
            noise.sqrt_p_noise
        )));
    }
    let s = noise.sqrt_p_noise;
    trace.map(Unit::Dimensionless, |x| x / s)
}

/// Window-power SNR: signal power over `signal_window` against the noise power.
pub fn snr_db(
    trace: &SampleTrace,
    signal_window: Range<usize>,
    noise: &NoiseEstimate,
) -> Result<SnrReport> {
    snr_db_excluding(trace, signal_window, noise, &[])
}

pub fn snr_db_excluding(
    trace: &SampleTrace,
    signal_window: Range<usize>,
    noise: &NoiseEstimate,
    exclusions: &[Range<usize>],
) -> Result<SnrReport> {
    trace.check_window(&signal_window)?;
    let (p_signal, n) = windowed_power(trace.samples(), &signal_window, exclusions);
    ensure!(
        n >= 2,
        InvalidArgument,
        "signal window keeps {n} samples after exclusions"
    );
    SnrReport::new(p_signal, noise, signal_window, SnrMethod::WindowPower)
}

/// Peak-based SNR: `sum |p_i|^2 / (P_noise * n)` for the samples at `peaks`.
pub fn peak_snr(trace: &SampleTrace, peaks: &[usize], noise: &NoiseEstimate) -> Result<SnrReport> {
    ensure!(!peaks.is_empty(), InvalidArgument, "peak list is empty");
    let x = trace.samples();
    if let Some(&bad) = peaks.iter().find(|&&i| i >= x.len()) {
        return Err(Error::InvalidArgument(format!(
            "peak index {bad} beyond trace length {}",
            x.len()
        )));
    }
    let p_signal = peaks.iter().map(|&i| x[i] * x[i]).sum::<f64>() / peaks.len() as f64;
    let lo = *peaks.iter().min().unwrap();
    let hi = *peaks.iter().max().unwrap();
    SnrReport::new(p_signal, noise, lo..hi + 1, SnrMethod::PeakBased)
}

/// Picks the `count` largest-magnitude samples that lie at least
/// `min_separation` apart, returned in index order.
pub fn pick_peaks(trace: &SampleTrace, count: usize, min_separation: usize) -> Vec<usize> {
    let x = trace.samples();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    for i in order {
        if chosen.len() == count {
            break;
        }
        if chosen.iter().all(|&c| c.abs_diff(i) >= min_separation) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Magnitude spectrum normalized to a unit peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub freqs_hz: Vec<f64>,
    pub normalized_magnitudes: Vec<f64>,
    pub window_s: f64,
    /// Magnitude of the largest bin before normalization.
    pub peak_magnitude: f64,
    pub peak_freq_hz: f64,
}

impl SpectrumReport {
    pub fn resolution_hz(&self) -> f64 {
        1.0 / self.window_s
    }

    /// Unnormalized magnitude of the bin nearest `freq_hz`.
    pub fn raw_magnitude_at(&self, freq_hz: f64) -> f64 {
        let k = (freq_hz * self.window_s).round() as usize;
        self.normalized_magnitudes.get(k).copied().unwrap_or(0.0) * self.peak_magnitude
    }
}

/// Hann-windowed, mean-removed FFT magnitude of `[start, start + len)`.
pub fn spectrum(
    trace: &SampleTrace,
    window_start_s: f64,
    window_len_s: f64,
) -> Result<SpectrumReport> {
    let rate = trace.sample_rate_hz();
    let n = (window_len_s * rate).round() as usize;
    ensure!(
        n >= 64,
        InvalidArgument,
        "spectrum window of {n} samples is shorter than 64"
    );
    let start = (window_start_s * rate).round().max(0.0) as usize;
    let window = start..start + n;
    trace.check_window(&window)?;

    let x = &trace.samples()[window];
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos();
            Complex::new((v - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf[..=n / 2].iter().map(|c| c.norm()).collect();
    let (peak_bin, peak) =
        mags.iter().enumerate().fold(
            (0, 0.0f64),
            |(bi, bm), (i, &m)| if m > bm { (i, m) } else { (bi, bm) },
        );
    let scale = x.iter().fold(0.0f64, |m, &v| m.max(v.abs())) * n as f64;
    if peak <= 1e-12 * scale || peak == 0.0 {
        return Err(Error::Degenerate(
            "spectrum has no content beyond DC; peak is undefined".into(),
        ));
    }
    let df = rate / n as f64;
    Ok(SpectrumReport {
        freqs_hz: (0..mags.len()).map(|k| k as f64 * df).collect(),
        normalized_magnitudes: mags.iter().map(|m| m / peak).collect(),
        window_s: n as f64 / rate,
        peak_magnitude: peak,
        peak_freq_hz: peak_bin as f64 * df,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Slip,
    Contact,
    Impulse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub start_index: usize,
    pub end_index: usize,
    pub peak_normalized_amplitude: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EventList {
    pub events: Vec<Event>,
}

/// Event detector settings, in normalized (noise-floor) units and seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventParams {
    /// Envelope level an event must reach.
    pub threshold: f64,
    /// Envelope level below which an event ends. Clamped to `threshold`.
    pub release: f64,
    pub min_duration_s: f64,
    /// Gaps shorter than this are bridged.
    pub hold_s: f64,
    /// Moving-RMS envelope length.
    pub envelope_s: f64,
}

impl Default for EventParams {
    fn default() -> Self {
        Self {
            threshold: 4.0,
            release: 2.0,
            min_duration_s: 0.02,
            hold_s: 0.05,
            envelope_s: 0.020,
        }
    }
}

impl EventParams {
    pub fn new(threshold: f64, min_duration_s: f64, hold_s: f64) -> Self {
        Self {
            threshold,
            min_duration_s,
            hold_s,
            ..Self::default()
        }
    }
}

/// Centered moving RMS with a window of `len` samples.
pub fn moving_rms(x: &[f64], len: usize) -> Vec<f64> {
    let len = len.max(1);
    let mut prefix = Vec::with_capacity(x.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in x {
        acc += v * v;
        prefix.push(acc);
    }
    let half = len / 2;
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + len - half).min(x.len());
            ((prefix[hi] - prefix[lo]).max(0.0) / (hi - lo) as f64).sqrt()
        })
        .collect()
}

/// Hysteresis detection on the moving-RMS envelope of a normalized trace.
///
/// Runs of envelope above `release` are merged across gaps shorter than
/// `hold_s`; a merged run becomes an event if it reaches `threshold` and
/// lasts at least `min_duration_s`. Grouping does not depend on `threshold`
/// (for `threshold >= release`), so raising it can only remove events.
pub fn detect_events(normalized: &SampleTrace, params: &EventParams, kind: EventKind) -> EventList {
    let x = normalized.samples();
    if x.is_empty() {
        return EventList::default();
    }
    let rate = normalized.sample_rate_hz();
    let env = moving_rms(x, (params.envelope_s * rate).round() as usize);
    let release = params.release.min(params.threshold);
    let hold = (params.hold_s * rate).round() as usize;
    let min_len = (params.min_duration_s * rate).round() as usize;

    let mut runs: Vec<Range<usize>> = Vec::new();
    let mut i = 0;
    while i < env.len() {
        if env[i] >= release {
            let start = i;
            while i < env.len() && env[i] >= release {
                i += 1;
            }
            match runs.last_mut() {
                Some(prev) if start - prev.end < hold => prev.end = i,
                _ => runs.push(start..i),
            }
        } else {
            i += 1;
        }
    }

    let events = runs
        .into_iter()
        .filter(|r| r.len() >= min_len.max(1))
        .filter(|r| env[r.clone()].iter().any(|&e| e >= params.threshold))
        .map(|r| Event {
            peak_normalized_amplitude: x[r.clone()].iter().fold(0.0f64, |m, &v| m.max(v.abs())),
            start_index: r.start,
            end_index: r.end,
            kind,
        })
        .collect();
    EventList { events }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn tr(xs: Vec<f64>) -> SampleTrace {
        SampleTrace::new(1_000.0, Unit::Volts, xs).unwrap()
    }

    /// Two-pass population standard deviation, written out longhand.
    fn oracle_std(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mut mean = 0.0;
        for x in xs {
            mean += x;
        }
        mean /= n;
        let mut ss = 0.0;
        for x in xs {
            ss += (x - mean).powi(2);
        }
        (ss / n).sqrt()
    }

    #[test]
    fn noise_floor_examples() {
        assert_eq!(
            noise_floor(&tr(vec![3.0; 10]), 0..10).unwrap().sqrt_p_noise,
            0.0
        );
        let alt = tr(vec![1.0, -1.0, 1.0, -1.0]);
        assert_eq!(noise_floor(&alt, 0..4).unwrap().sqrt_p_noise, 1.0);
        let g = tr(rng::gaussian(3, 99, 10_000, 0.5));
        let est = noise_floor(&g, 0..10_000).unwrap();
        assert!((est.sqrt_p_noise / 0.5 - 1.0).abs() < 0.02);
        assert!((est.sqrt_p_noise - oracle_std(g.samples())).abs() < 1e-12 * est.sqrt_p_noise);
        assert!(noise_floor(&alt, 0..1).is_err());
    }

    #[test]
    fn worst_case_picks_noisy_half() {
        let mut xs = rng::gaussian(1, 5, 4_000, 0.1);
        xs.extend(rng::gaussian(1, 6, 4_000, 0.3));
        let t = tr(xs);
        let worst = worst_case_noise(&t, 0..8_000, 1_000).unwrap();
        let pooled = noise_floor(&t, 0..8_000).unwrap().sqrt_p_noise;
        assert!(
            (worst.sqrt_p_noise - 0.3).abs() < 0.02,
            "{}",
            worst.sqrt_p_noise
        );
        assert!(worst.sqrt_p_noise > pooled + 0.05);
        assert_eq!(worst.policy, NoisePolicy::WorstCaseSliding);
    }

    #[test]
    fn worst_case_degenerate_cases() {
        let flat = tr(vec![2.0; 100]);
        assert_eq!(
            worst_case_noise(&flat, 0..100, 20).unwrap().sqrt_p_noise,
            0.0
        );
        let g = tr(rng::gaussian(2, 1, 500, 1.0));
        let single = worst_case_noise(&g, 100..300, 200).unwrap();
        let direct = noise_floor(&g, 100..300).unwrap();
        assert_eq!(single.sqrt_p_noise, direct.sqrt_p_noise);
        assert!(worst_case_noise(&g, 0..100, 200).is_err());
    }

    #[test]
    #[allow(clippy::single_range_in_vec_init)]
    fn exclusions_skip_transients() {
        let mut xs = rng::gaussian(4, 1, 3_000, 1.0);
        for v in &mut xs[1_000..1_100] {
            *v *= 50.0;
        }
        let t = tr(xs);
        let with = worst_case_noise(&t, 0..3_000, 500).unwrap();
        let without = worst_case_noise_excluding(&t, 0..3_000, 500, &[1_000..1_100]).unwrap();
        assert!(with.sqrt_p_noise > 5.0);
        assert!(without.sqrt_p_noise < 1.2);
        assert!(worst_case_noise_excluding(&t, 0..3_000, 500, &[0..3_000]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let g = tr(rng::gaussian(8, 1, 2_000, 0.7));
        let est = noise_floor(&g, 0..2_000).unwrap();
        let n = normalize(&g, &est).unwrap();
        assert_eq!(n.unit(), Unit::Dimensionless);
        let rms1 = noise_floor(&n, 0..2_000).unwrap().sqrt_p_noise;
        assert!((rms1 - 1.0).abs() < 1e-9);

        let g2 = g.scaled(2.0).unwrap();
        let est2 = NoiseEstimate {
            sqrt_p_noise: 2.0 * est.sqrt_p_noise,
            ..est.clone()
        };
        assert_eq!(normalize(&g2, &est2).unwrap(), n);

        let zero = NoiseEstimate {
            sqrt_p_noise: 0.0,
            ..est
        };
        assert!(matches!(normalize(&g, &zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn snr_examples() {
        let g = tr(rng::gaussian(5, 1, 2_000, 1.0));
        let noise = noise_floor(&g, 0..1_000).unwrap();
        assert!(snr_db(&g, 0..1_000, &noise).unwrap().snr_db.abs() < 1e-12);

        let mut xs = g.samples()[..1_000].to_vec();
        xs.extend(g.samples()[1_000..].iter().map(|v| v * 10.0));
        let t = tr(xs);
        let noise = noise_floor(&t, 0..1_000).unwrap();
        let sig = noise_floor(&t, 1_000..2_000).unwrap();
        let r = snr_db(&t, 1_000..2_000, &noise).unwrap();
        let expected = 20.0 * (sig.sqrt_p_noise / noise.sqrt_p_noise).log10();
        assert!((r.snr_db - expected).abs() < 1e-9);
        assert_eq!(r.snr_db, 10.0 * (r.p_signal / r.p_noise).log10());
    }

    #[test]
    fn peak_snr_examples() {
        let noise = NoiseEstimate {
            sqrt_p_noise: 0.5,
            window: 0..10,
            policy: NoisePolicy::ExplicitWindow,
        };
        let s = noise.sqrt_p_noise;
        let mut xs = vec![0.0; 100];
        let peaks: Vec<usize> = (0..10).map(|i| 5 + 10 * i).collect();
        for &p in &peaks {
            xs[p] = s;
        }
        assert!(
            peak_snr(&tr(xs.clone()), &peaks, &noise)
                .unwrap()
                .snr_db
                .abs()
                < 1e-12
        );
        for &p in &peaks {
            xs[p] = 10.0 * s;
        }
        assert!((peak_snr(&tr(xs.clone()), &peaks, &noise).unwrap().snr_db - 20.0).abs() < 1e-12);

        let mult = [2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        for (&p, m) in peaks.iter().zip(mult) {
            xs[p] = m * s;
        }
        // (4 + 4 + 8) / 10
        let expected = 10.0 * (16.0f64 / 10.0).log10();
        let got = peak_snr(&tr(xs.clone()), &peaks, &noise).unwrap();
        assert!((got.snr_db - expected).abs() < 1e-12);
        assert_eq!(got.method, SnrMethod::PeakBased);
        assert!(peak_snr(&tr(xs), &[], &noise).is_err());
    }

    #[test]
    fn pick_peaks_respects_separation() {
        let mut xs = vec![0.0; 100];
        xs[10] = 5.0;
        xs[11] = 4.9;
        xs[50] = -3.0;
        xs[90] = 1.0;
        assert_eq!(pick_peaks(&tr(xs), 3, 5), vec![10, 50, 90]);
    }

    #[test]
    fn spectrum_tone_dc_and_two_tone() {
        let fs = 10_000.0;
        let tone = SampleTrace::from_fn(fs, Unit::Volts, 20_000, |t| {
            (2.0 * std::f64::consts::PI * 500.0 * t).sin()
        })
        .unwrap();
        let s = spectrum(&tone, 0.5, 1.0).unwrap();
        assert!((s.peak_freq_hz - 500.0).abs() <= s.resolution_hz());
        assert_eq!(
            s.normalized_magnitudes.iter().cloned().fold(0.0, f64::max),
            1.0
        );
        assert_eq!(s.freqs_hz.len(), s.normalized_magnitudes.len());

        let dc = SampleTrace::new(fs, Unit::Volts, vec![1.5; 20_000]).unwrap();
        assert!(matches!(spectrum(&dc, 0.0, 1.0), Err(Error::Degenerate(_))));

        let two = SampleTrace::from_fn(fs, Unit::Volts, 10_000, |t| {
            let w = 2.0 * std::f64::consts::PI * t;
            (w * 500.0).sin() + (w * 1_000.0).sin()
        })
        .unwrap();
        let s = spectrum(&two, 0.0, 1.0).unwrap();
        let (a, b) = (s.raw_magnitude_at(500.0), s.raw_magnitude_at(1_000.0));
        assert!((a / b - 1.0).abs() < 0.01, "{a} vs {b}");

        assert!(spectrum(&two, 0.0, 0.005).is_err());
        assert!(spectrum(&two, 0.5, 1.0).is_err());
    }

    #[test]
    fn events_on_noise_and_burst() {
        let empty = SampleTrace::new(1e4, Unit::Dimensionless, vec![]).unwrap();
        assert!(
            detect_events(&empty, &EventParams::default(), EventKind::Slip)
                .events
                .is_empty()
        );

        let mut total = 0;
        for seed in 0..100 {
            let n = SampleTrace::new(
                1e4,
                Unit::Dimensionless,
                rng::gaussian(seed, 7, 10_000, 1.0),
            )
            .unwrap();
            total += detect_events(&n, &EventParams::default(), EventKind::Slip)
                .events
                .len();
        }
        assert!(total <= 1, "{total} false alarms");

        let mut xs = rng::gaussian(1, 7, 20_000, 1.0);
        let burst = rng::gaussian(1, 8, 5_000, 12.9);
        for (v, b) in xs[8_000..13_000].iter_mut().zip(&burst) {
            *v += b;
        }
        let t = SampleTrace::new(1e4, Unit::Dimensionless, xs).unwrap();
        let ev = detect_events(&t, &EventParams::default(), EventKind::Slip).events;
        assert_eq!(ev.len(), 1);
        assert!(ev[0].start_index.abs_diff(8_000) <= 250);
        assert!(ev[0].end_index.abs_diff(13_000) <= 250);
        assert!(ev[0].peak_normalized_amplitude > 12.9);
        assert_eq!(ev[0].kind, EventKind::Slip);
    }
}
