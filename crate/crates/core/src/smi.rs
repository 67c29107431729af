//! Self-mixing photocurrent synthesis and fringe counting.
//!
//! The laser sees its own light reflected from the target. With round-trip
//! phase `phi0 = 4*pi*D/lambda`, the feedback-perturbed phase `phi_f` solves
//!
//! ```text
//! phi_f + C * sin(phi_f + atan(alpha)) = phi0
//! ```
//!
//! and the monitor photocurrent is `I = I_dc * (1 + m * cos(phi_f))`. One
//! fringe appears for every half wavelength of target travel.

use std::f64::consts::PI;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::trace::{SampleTrace, Unit};

const SOLVER_TOLERANCE: f64 = 1e-12;
const SOLVER_MAX_ITERATIONS: usize = 100;

/// Parameters of the laser-feedback model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaserConfig {
    /// Emission wavelength (m).
    pub wavelength_m: f64,
    /// Feedback level C, restricted to the weak regime `[0, 1)`.
    pub feedback_c: f64,
    /// Linewidth-enhancement factor.
    pub alpha: f64,
    /// Modulation depth m in `(0, 1]`.
    pub mod_depth: f64,
    /// Photocurrent baseline (A).
    pub dc_power: f64,
}

impl Default for LaserConfig {
    fn default() -> Self {
        Self {
            wavelength_m: 650e-9,
            feedback_c: 0.5,
            alpha: 4.6,
            mod_depth: 0.1,
            dc_power: 10e-6,
        }
    }
}

impl LaserConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.wavelength_m.is_finite() && self.wavelength_m > 0.0,
            InvalidConfig,
            "laser.wavelength_m must be > 0, got {}",
            self.wavelength_m
        );
        ensure!(
            (0.0..1.0).contains(&self.feedback_c),
            InvalidConfig,
            "laser.feedback_c must lie in [0, 1), got {}",
            self.feedback_c
        );
        ensure!(
            self.alpha.is_finite() && self.alpha >= 0.0,
            InvalidConfig,
            "laser.alpha must be >= 0, got {}",
            self.alpha
        );
        ensure!(
            self.mod_depth > 0.0 && self.mod_depth <= 1.0,
            InvalidConfig,
            "laser.mod_depth must lie in (0, 1], got {}",
            self.mod_depth
        );
        ensure!(
            self.dc_power.is_finite() && self.dc_power > 0.0,
            InvalidConfig,
            "laser.dc_power must be > 0, got {}",
            self.dc_power
        );
        Ok(())
    }

    /// Round-trip phase for a target at displacement `d_m`.
    pub fn round_trip_phase(&self, d_m: f64) -> f64 {
        4.0 * PI * d_m / self.wavelength_m
    }
}

/// Solves the excess-phase equation for `phi_f`.
///
/// Newton iteration safeguarded by the bracket `[phi0 - C, phi0 + C]`, which
/// always contains the root because `|phi_f - phi0| <= C`. The residual
/// function is strictly increasing for `C < 1`, so the root is unique.
pub fn solve_excess_phase(phi0: f64, laser: &LaserConfig) -> Result<f64> {
    let c = laser.feedback_c;
    ensure!(
        (0.0..1.0).contains(&c),
        InvalidConfig,
        "feedback_c must lie in [0, 1) for a unique root, got {c}"
    );
    ensure!(phi0.is_finite(), InvalidArgument, "phi0 is not finite");
    if c == 0.0 {
        return Ok(phi0);
    }
    let offset = laser.alpha.atan();
    let residual = |x: f64| x + c * (x + offset).sin() - phi0;

    let (mut lo, mut hi) = (phi0 - c, phi0 + c);
    let mut x = phi0;
    for _ in 0..SOLVER_MAX_ITERATIONS {
        let r = residual(x);
        if r.abs() < SOLVER_TOLERANCE {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = 1.0 + c * (x + offset).cos();
        let newton = x - r / slope;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < f64::EPSILON * phi0.abs().max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        phi0,
        iterations: SOLVER_MAX_ITERATIONS,
    })
}

/// Monitor photocurrent for a feedback phase.
pub fn smi_photocurrent(phase: f64, laser: &LaserConfig) -> f64 {
    laser.dc_power * (1.0 + laser.mod_depth * phase.cos())
}

/// Photocurrent trace for a target displacement trace.
pub fn simulate_smi(displacement: &SampleTrace, laser: &LaserConfig) -> Result<SampleTrace> {
    displacement.require_unit(Unit::Meters)?;
    laser.validate()?;
    let current = displacement
        .samples()
        .iter()
        .enumerate()
        .map(|(index, &d)| {
            solve_excess_phase(laser.round_trip_phase(d), laser)
                .map(|phase| smi_photocurrent(phase, laser))
                .map_err(|e| Error::AtSample {
                    index,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    SampleTrace::new(displacement.sample_rate_hz(), Unit::Amps, current)
}

/// Tuning of the fringe detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FringeDetectorParams {
    /// Schmitt-trigger half-width as a fraction of half the window's
    /// peak-to-peak span.
    pub hysteresis: f64,
    /// Fringes closer than this many samples to the previous one are dropped.
    pub min_separation: usize,
}

impl Default for FringeDetectorParams {
    fn default() -> Self {
        Self {
            hysteresis: 0.5,
            min_separation: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeReport {
    pub fringe_count: usize,
    /// Sample index of the steepest step inside each fringe.
    pub fringe_indices: Vec<usize>,
    pub window: Range<usize>,
}

/// Counts fringes inside `window`.
///
/// Each fringe is one pass of the signal through a full interference cycle.
/// A Schmitt trigger around the window's mid-level registers one fringe per
/// rising crossing of the upper threshold (re-armed only after the lower
/// threshold is crossed), and the fringe is located at the largest
/// first-difference magnitude between re-arming and firing: the sharp edge
/// of the sawtooth-like waveform.
pub fn count_fringes(
    signal: &SampleTrace,
    window: Range<usize>,
    detector: &FringeDetectorParams,
) -> Result<FringeReport> {
    ensure!(
        signal.len() >= 3,
        InvalidArgument,
        "fringe counting needs at least 3 samples, got {}",
        signal.len()
    );
    signal.check_window(&window)?;
    ensure!(
        detector.hysteresis > 0.0 && detector.hysteresis < 1.0,
        InvalidArgument,
        "hysteresis must lie in (0, 1), got {}",
        detector.hysteresis
    );

    let x = &signal.samples()[window.clone()];
    let (min, max) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let mid = 0.5 * (max + min);
    let half_span = 0.5 * (max - min);
    let mut indices = Vec::new();
    if half_span <= 1e-12 * mid.abs() || half_span == 0.0 {
        return Ok(FringeReport {
            fringe_count: 0,
            fringe_indices: indices,
            window,
        });
    }
    let upper = mid + detector.hysteresis * half_span;
    let lower = mid - detector.hysteresis * half_span;

    let mut high = x[0] > upper;
    let mut armed_at = 0usize;
    for i in 1..x.len() {
        if high {
            if x[i] < lower {
                high = false;
                armed_at = i;
            }
        } else if x[i] < lower {
            armed_at = i;
        } else if x[i] > upper {
            high = true;
            let edge = (armed_at..i)
                .max_by(|&a, &b| {
                    let da = (x[a + 1] - x[a]).abs();
                    let db = (x[b + 1] - x[b]).abs();
                    da.total_cmp(&db).then(b.cmp(&a))
                })
                .map_or(i, |j| j + 1);
            let index = window.start + edge;
            let far_enough = indices
                .last()
                .is_none_or(|&prev: &usize| index >= prev + detector.min_separation);
            if far_enough {
                indices.push(index);
            }
        }
    }
    Ok(FringeReport {
        fringe_count: indices.len(),
        fringe_indices: indices,
        window,
    })
}

/// Target travel implied by a fringe count: half a wavelength per fringe.
pub fn displacement_from_fringes(fringe_count: usize, laser: &LaserConfig) -> f64 {
    fringe_count as f64 * laser.wavelength_m / 2.0
}
