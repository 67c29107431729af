//! Trace files: a commented two-column CSV and 16-bit PCM mono WAV.
//!
//! CSV layout:
//!
//! ```text
//! # smi-tactile trace v1
//! # sample_rate_hz: 200000
//! # unit: amps
//! # channel: laser
//! # seed: 42
//! time_s,value
//! 0,1.0000000000000002e-5
//! ```
//!
//! Header lines are optional on input; without them the rate is inferred
//! from the time column and the unit is dimensionless. Values are written
//! with Rust's shortest round-trip formatting, so a write/read cycle is
//! bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::trace::{SampleTrace, Unit};

pub const FORMAT_LINE: &str = "# smi-tactile trace v1";
pub const COLUMN_HEADER: &str = "time_s,value";
/// Relative timestep jitter accepted when reading CSV.
pub const STEP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceFormat {
    Csv,
    Wav16,
}

impl TraceFormat {
    /// `.wav` selects WAV, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("wav") => TraceFormat::Wav16,
            _ => TraceFormat::Csv,
        }
    }
}

/// Descriptive header fields stored alongside the samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub channel: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub meta: TraceMeta,
    pub trace: SampleTrace,
}

/// What happened while writing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WriteReport {
    /// Samples outside `[-1, 1)` that were clipped (WAV only).
    pub clipped: usize,
}

pub fn read_trace(path: &Path, format: TraceFormat) -> Result<SampleTrace> {
    read_trace_file(path, format).map(|f| f.trace)
}

pub fn read_trace_file(path: &Path, format: TraceFormat) -> Result<TraceFile> {
    match format {
        TraceFormat::Csv => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_csv(&text)
        }
        TraceFormat::Wav16 => read_wav(path),
    }
}

pub fn write_trace(trace: &SampleTrace, path: &Path, format: TraceFormat) -> Result<WriteReport> {
    write_trace_file(trace, &TraceMeta::default(), path, format)
}

pub fn write_trace_file(
    trace: &SampleTrace,
    meta: &TraceMeta,
    path: &Path,
    format: TraceFormat,
) -> Result<WriteReport> {
    match format {
        TraceFormat::Csv => {
            std::fs::write(path, to_csv(trace, meta)).map_err(|e| Error::io(path, e))?;
            Ok(WriteReport::default())
        }
        TraceFormat::Wav16 => write_wav(trace, path),
    }
}

pub fn to_csv(trace: &SampleTrace, meta: &TraceMeta) -> String {
    let rate = trace.sample_rate_hz();
    let mut out = String::with_capacity(32 * trace.len() + 128);
    let _ = writeln!(out, "{FORMAT_LINE}");
    let _ = writeln!(out, "# sample_rate_hz: {rate}");
    let _ = writeln!(out, "# unit: {}", trace.unit());
    if !meta.channel.is_empty() {
        let _ = writeln!(out, "# channel: {}", meta.channel);
    }
    if let Some(seed) = meta.seed {
        let _ = writeln!(out, "# seed: {seed}");
    }
    let _ = writeln!(out, "{COLUMN_HEADER}");
    for (i, v) in trace.samples().iter().enumerate() {
        let _ = writeln!(out, "{},{v}", i as f64 / rate);
    }
    out
}

pub fn parse_csv(text: &str) -> Result<TraceFile> {
    let mut meta = TraceMeta::default();
    let mut rate: Option<f64> = None;
    let mut unit = Unit::Dimensionless;
    let mut lines = text.lines().enumerate().peekable();

    while let Some(&(_, line)) = lines.peek() {
        let Some(body) = line.strip_prefix('#') else {
            break;
        };
        let body = body.trim();
        lines.next();
        if body.is_empty() || body.starts_with("smi-tactile trace") {
            if let Some(v) = body.strip_prefix("smi-tactile trace ") {
                ensure!(
                    v == "v1",
                    MalformedHeader,
                    "unsupported trace version `{v}`"
                );
            }
            continue;
        }
        let (key, value) = body.split_once(':').ok_or_else(|| {
            Error::MalformedHeader(format!("header line `{line}` has no `key: value`"))
        })?;
        let value = value.trim();
        match key.trim() {
            "sample_rate_hz" => {
                let r: f64 = value
                    .parse()
                    .map_err(|_| Error::MalformedHeader(format!("bad sample rate `{value}`")))?;
                ensure!(
                    r > 0.0 && r.is_finite(),
                    MalformedHeader,
                    "bad sample rate `{value}`"
                );
                rate = Some(r);
            }
            "unit" => {
                unit = value
                    .parse()
                    .map_err(|_| Error::MalformedHeader(format!("unknown unit `{value}`")))?
            }
            "channel" => meta.channel = value.to_string(),
            "seed" => {
                meta.seed = Some(
                    value
                        .parse()
                        .map_err(|_| Error::MalformedHeader(format!("bad seed `{value}`")))?,
                )
            }
            // creation metadata and other annotations are informational
            _ => {}
        }
    }

    match lines.next() {
        Some((_, h)) if h.trim() == COLUMN_HEADER => {}
        other => {
            return Err(Error::MalformedHeader(format!(
                "expected column header `{COLUMN_HEADER}`, found `{}`",
                other.map_or("<end of file>", |(_, l)| l)
            )))
        }
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || {
            Error::InvalidArgument(format!(
                "line {}: expected `time_s,value`, found `{line}`",
                i + 1
            ))
        };
        let (t, v) = line.split_once(',').ok_or_else(bad)?;
        let t: f64 = t.trim().parse().map_err(|_| bad())?;
        let v: f64 = v.trim().parse().map_err(|_| bad())?;
        times.push(t);
        values.push(v);
    }

    let rate = match rate {
        Some(r) => r,
        None => infer_rate(&times)?,
    };
    check_timesteps(&times, rate)?;
    Ok(TraceFile {
        meta,
        trace: SampleTrace::new(rate, unit, values)?,
    })
}

fn infer_rate(times: &[f64]) -> Result<f64> {
    ensure!(
        times.len() >= 2,
        MalformedHeader,
        "cannot infer a sample rate from {} rows without a sample_rate_hz header",
        times.len()
    );
    let step = times[1] - times[0];
    ensure!(step > 0.0, MalformedHeader, "time column does not increase");
    let rate = 1.0 / step;
    let snapped = rate.round();
    Ok(
        if snapped > 0.0 && (rate - snapped).abs() <= STEP_TOLERANCE * rate {
            snapped
        } else {
            rate
        },
    )
}

fn check_timesteps(times: &[f64], rate: f64) -> Result<()> {
    let Some(&t0) = times.first() else {
        return Ok(());
    };
    let step = 1.0 / rate;
    for (i, &t) in times.iter().enumerate().skip(1) {
        let expected = t0 + i as f64 * step;
        if (t - expected).abs() > STEP_TOLERANCE * step {
            return Err(Error::InconsistentTimestep {
                row: i + 1,
                expected_s: step,
                found_s: t - times[i - 1],
            });
        }
    }
    Ok(())
}

fn read_wav(path: &Path) -> Result<TraceFile> {
    let reader = hound::WavReader::open(path).map_err(|e| wav_error(path, e))?;
    let spec = reader.spec();
    ensure!(
        spec.sample_format == hound::SampleFormat::Int && spec.bits_per_sample == 16,
        UnsupportedWav,
        "{} is {:?} with {} bits per sample; only 16-bit PCM is read",
        path.display(),
        spec.sample_format,
        spec.bits_per_sample
    );
    ensure!(
        spec.channels == 1,
        UnsupportedWav,
        "{} has {} channels; only mono is read",
        path.display(),
        spec.channels
    );
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / 32768.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| wav_error(path, e))?;
    Ok(TraceFile {
        meta: TraceMeta::default(),
        trace: SampleTrace::new(spec.sample_rate as f64, Unit::Dimensionless, samples)?,
    })
}

fn write_wav(trace: &SampleTrace, path: &Path) -> Result<WriteReport> {
    let rate = trace.sample_rate_hz();
    ensure!(
        rate.fract() == 0.0 && rate <= u32::MAX as f64,
        InvalidArgument,
        "WAV needs an integer sample rate, got {rate}"
    );
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate as u32,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(|e| wav_error(path, e))?;
    let mut clipped = 0;
    for &v in trace.samples() {
        let code = (v * 32768.0).round();
        if !(-32768.0..=32767.0).contains(&code) {
            clipped += 1;
        }
        writer
            .write_sample(code.clamp(-32768.0, 32767.0) as i16)
            .map_err(|e| wav_error(path, e))?;
    }
    writer.finalize().map_err(|e| wav_error(path, e))?;
    Ok(WriteReport { clipped })
}

fn wav_error(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::io(path, io),
        hound::Error::Unsupported => {
            Error::UnsupportedWav(format!("{}: unsupported encoding", path.display()))
        }
        other => Error::UnsupportedWav(format!("{}: {other}", path.display())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_sample_csv_without_header() {
        let f = parse_csv("time_s,value\n0,1.5\n0.0001,2\n0.0002,-3\n").unwrap();
        assert_eq!(f.trace.len(), 3);
        assert_eq!(f.trace.sample_rate_hz(), 10_000.0);
        assert_eq!(f.trace.unit(), Unit::Dimensionless);
    }

    #[test]
    fn empty_trace_is_header_only() {
        let t = SampleTrace::new(1e3, Unit::Volts, vec![]).unwrap();
        let csv = to_csv(&t, &TraceMeta::default());
        assert!(csv.ends_with("time_s,value\n"));
        assert_eq!(parse_csv(&csv).unwrap().trace, t);
    }

    #[test]
    fn distinct_diagnostics() {
        assert!(matches!(
            parse_csv("t,v\n0,1\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_csv("# nonsense\ntime_s,value\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_csv("time_s,value\n0,1\n0.001,1\n0.0025,1\n"),
            Err(Error::InconsistentTimestep { row: 3, .. })
        ));
        assert!(matches!(
            parse_csv("time_s,value\n0,1\n"),
            Err(Error::MalformedHeader(_))
        ));
    }

    #[test]
    fn metadata_survives() {
        let t = SampleTrace::new(200e3, Unit::Amps, vec![1e-5, 1.1e-5]).unwrap();
        let meta = TraceMeta {
            channel: "laser".into(),
            seed: Some(42),
        };
        let back = parse_csv(&to_csv(&t, &meta)).unwrap();
        assert_eq!(back.meta, meta);
        assert_eq!(back.trace, t);
    }

    #[test]
    fn wav_mapping_and_clipping() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        let t = SampleTrace::new(
            48_000.0,
            Unit::Dimensionless,
            vec![32767.0 / 32768.0, -1.0, 0.0, 1.5, -2.0],
        )
        .unwrap();
        let report = write_trace(&t, &path, TraceFormat::Wav16).unwrap();
        assert_eq!(report.clipped, 2);
        let back = read_trace(&path, TraceFormat::Wav16).unwrap();
        assert_eq!(back.samples()[0], 32767.0 / 32768.0);
        assert_eq!(back.samples()[1], -1.0);
        assert_eq!(back.samples()[3], 32767.0 / 32768.0);
        assert_eq!(back.sample_rate_hz(), 48_000.0);
    }

    #[test]
    fn non_pcm16_wav_is_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.wav");
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 8_000,
            bits_per_sample: 32,
            sample_format: hound::SampleFormat::Float,
        };
        let mut w = hound::WavWriter::create(&path, spec).unwrap();
        w.write_sample(0.5f32).unwrap();
        w.finalize().unwrap();
        assert!(matches!(
            read_trace(&path, TraceFormat::Wav16),
            Err(Error::UnsupportedWav(_))
        ));
    }
}
