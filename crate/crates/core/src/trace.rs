//! The uniformly sampled waveform that flows between every stage.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Physical unit tag carried by a [`SampleTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Meters,
    Amps,
    Volts,
    Dimensionless,
    Pressure,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Meters => "meters",
            Unit::Amps => "amps",
            Unit::Volts => "volts",
            Unit::Dimensionless => "dimensionless",
            Unit::Pressure => "pressure",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "meters" => Unit::Meters,
            "amps" => Unit::Amps,
            "volts" => Unit::Volts,
            "dimensionless" => Unit::Dimensionless,
            "pressure" => Unit::Pressure,
            other => return Err(Error::InvalidArgument(format!("unknown unit `{other}`"))),
        })
    }
}

/// Uniformly sampled, finite-valued waveform with a unit tag.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrace {
    sample_rate_hz: f64,
    unit: Unit,
    samples: Vec<f64>,
}

impl SampleTrace {
    pub fn new(sample_rate_hz: f64, unit: Unit, samples: Vec<f64>) -> Result<Self> {
        ensure!(
            sample_rate_hz.is_finite() && sample_rate_hz > 0.0,
            InvalidArgument,
            "sample rate must be positive and finite, got {sample_rate_hz}"
        );
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sample {i} is not finite ({})",
                samples[i]
            )));
        }
        Ok(Self {
            sample_rate_hz,
            unit,
            samples,
        })
    }

    pub fn zeros(sample_rate_hz: f64, unit: Unit, len: usize) -> Result<Self> {
        Self::new(sample_rate_hz, unit, vec![0.0; len])
    }

    /// Builds a trace from `f(t)` evaluated at `n` sample instants.
    pub fn from_fn(
        sample_rate_hz: f64,
        unit: Unit,
        n: usize,
        f: impl FnMut(f64) -> f64,
    ) -> Result<Self> {
        let mut f = f;
        let samples = (0..n).map(|i| f(i as f64 / sample_rate_hz)).collect();
        Self::new(sample_rate_hz, unit, samples)
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Sample index nearest to time `t_s`, clamped to `[0, len]`.
    pub fn index_at(&self, t_s: f64) -> usize {
        let i = (t_s * self.sample_rate_hz).round();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.samples.len())
        }
    }

    /// Index range covering `[start_s, end_s)`.
    pub fn range_s(&self, start_s: f64, end_s: f64) -> Range<usize> {
        self.index_at(start_s)..self.index_at(end_s)
    }

    /// Same samples, new unit. Used where an operation explicitly changes units.
    pub fn with_unit(mut self, unit: Unit) -> Self {
        self.unit = unit;
        self
    }

    /// Applies `f` to every sample, producing a trace in `unit`.
    pub fn map(&self, unit: Unit, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.sample_rate_hz,
            unit,
            self.samples.iter().map(|&x| f(x)).collect(),
        )
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.map(self.unit, |x| x * factor)
    }

    pub(crate) fn check_window(&self, window: &Range<usize>) -> Result<()> {
        ensure!(
            window.start < window.end,
            InvalidArgument,
            "empty window {}..{}",
            window.start,
            window.end
        );
        ensure!(
            window.end <= self.samples.len(),
            InvalidArgument,
            "window {}..{} exceeds trace length {}",
            window.start,
            window.end,
            self.samples.len()
        );
        Ok(())
    }

    pub(crate) fn require_unit(&self, unit: Unit) -> Result<()> {
        ensure!(
            self.unit == unit,
            InvalidArgument,
            "expected a trace in {unit}, got {}",
            self.unit
        );
        Ok(())
    }
}

/// Root-mean-square of a slice; zero for an empty slice.
pub fn rms(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}
