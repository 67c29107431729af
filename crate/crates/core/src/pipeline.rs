//! End-to-end runs behind the command-line subcommands.

use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{
    detect_events, normalize, peak_snr, pick_peaks, snr_db_excluding, spectrum,
    worst_case_noise_excluding, EventKind, EventList, NoiseEstimate, SnrReport, SpectrumReport,
};
use crate::config::{presets, RunConfig, SnrMode};
use crate::decision::{self, build_map, classify, Classification, ExperimentRecord, MapFormat};
use crate::error::{Error, Result};
use crate::io::{read_trace, write_trace_file, TraceFormat, TraceMeta};
use crate::scenario::{laser_channel, mic_channel, LaserChannelOutput, Source, REFERENCE_ANL_DB};
use crate::smi::{count_fringes, displacement_from_fringes, simulate_smi, FringeReport};
use crate::trace::SampleTrace;

/// Environment variable that overrides the default output directory.
pub const OUT_DIR_ENV: &str = "SMI_TACTILE_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Analyze,
    Spectrum,
    Fringes,
    DecisionMap,
    Validate,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub out_dir: Option<PathBuf>,
    /// Existing laser (or generic) trace to use instead of simulating.
    pub input: Option<PathBuf>,
    /// Existing microphone trace for `analyze`.
    pub mic_input: Option<PathBuf>,
    /// Experiment-record CSV for `decision_map`; the built-in nine otherwise.
    pub records: Option<PathBuf>,
}

impl PipelineOptions {
    /// Explicit directory, else `$SMI_TACTILE_OUT`, else `./out`.
    pub fn resolved_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub artifacts: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

/// Everything one scenario produces.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub displacement: SampleTrace,
    pub laser: LaserChannelOutput,
    pub mic: SampleTrace,
}

pub fn simulate(cfg: &RunConfig) -> Result<Simulation> {
    cfg.validate()?;
    let displacement = cfg.scenario.displacement()?;
    let seed = cfg.scenario.seed;
    let laser = laser_channel(&displacement, &cfg.laser, &cfg.readout, seed)?;
    // the microphone hears vibration about the static standoff, not the standoff
    let standoff = cfg.scenario.standoff_m;
    let vibration = displacement.map(displacement.unit(), |d| d - standoff)?;
    let mic = mic_channel(&vibration, cfg.scenario.anl_db, &cfg.mic, seed)?;
    Ok(Simulation {
        displacement,
        laser,
        mic,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelAnalysis {
    pub noise: NoiseEstimate,
    pub snr: SnrReport,
    pub events: EventList,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub laser: ChannelAnalysis,
    pub mic: ChannelAnalysis,
    pub record: ExperimentRecord,
    pub classification: Classification,
}

fn to_range(trace: &SampleTrace, [lo, hi]: [f64; 2]) -> Range<usize> {
    trace.range_s(lo, hi)
}

/// Noise floor, SNR and events for one channel under `cfg.analysis`.
/// `settle_s` pushes the rest region past filter start-up transients.
pub fn analyze_channel(
    trace: &SampleTrace,
    cfg: &RunConfig,
    settle_s: f64,
) -> Result<ChannelAnalysis> {
    let a = &cfg.analysis;
    let rest = [a.rest_s[0].max(settle_s), a.rest_s[1]];
    let rest = to_range(trace, rest);
    let exclusions: Vec<Range<usize>> = cfg
        .exclusion_windows
        .iter()
        .map(|&w| to_range(trace, w))
        .collect();
    let window_len = ((a.noise_window_s * trace.sample_rate_hz()).round() as usize).min(rest.len());
    let noise = worst_case_noise_excluding(trace, rest, window_len, &exclusions)?;
    let signal = to_range(trace, a.signal_s);
    let snr = match a.snr_mode {
        SnrMode::WindowPower => snr_db_excluding(trace, signal, &noise, &exclusions)?,
        SnrMode::PeakBased => {
            trace.check_window(&signal)?;
            let region = SampleTrace::new(
                trace.sample_rate_hz(),
                trace.unit(),
                trace.samples()[signal.clone()].to_vec(),
            )?;
            let sep = (a.min_peak_separation_s * trace.sample_rate_hz()).round() as usize;
            let peaks: Vec<usize> = pick_peaks(&region, a.peak_count, sep.max(1))
                .into_iter()
                .map(|i| i + signal.start)
                .collect();
            peak_snr(trace, &peaks, &noise)?
        }
    };
    let kind = match (a.snr_mode, &cfg.scenario.source) {
        (SnrMode::PeakBased, _) | (_, Source::ImpulseTrain { .. }) => EventKind::Impulse,
        _ => EventKind::Slip,
    };
    let events = detect_events(&normalize(trace, &noise)?, &a.events, kind);
    Ok(ChannelAnalysis { noise, snr, events })
}

/// Both channels plus the decision-map record for the scenario.
pub fn analyze_pair(
    laser: &SampleTrace,
    mic: &SampleTrace,
    cfg: &RunConfig,
    name: &str,
) -> Result<AnalysisReport> {
    let laser = analyze_channel(laser, cfg, cfg.readout.settling_s())?;
    let mic = analyze_channel(mic, cfg, 0.0)?;
    let record = ExperimentRecord::new(
        name,
        name,
        cfg.scenario.anl_db,
        mic.snr.snr_db,
        laser.snr.snr_db,
    );
    let classification = classify(&record);
    Ok(AnalysisReport {
        laser,
        mic,
        record,
        classification,
    })
}

pub fn analyze(cfg: &RunConfig, sim: &Simulation) -> Result<AnalysisReport> {
    analyze_pair(&sim.laser.trace, &sim.mic, cfg, "scenario")
}

/// Physics-level fringe count over the configured window.
pub fn fringes(cfg: &RunConfig) -> Result<(FringeReport, f64)> {
    let d = cfg.scenario.displacement()?;
    let current = simulate_smi(&d, &cfg.laser)?;
    let window = cfg
        .analysis
        .fringe_window_s
        .map_or(0..current.len(), |w| to_range(&current, w));
    let report = count_fringes(&current, window, &cfg.analysis.fringe_detector)?;
    let travel = displacement_from_fringes(report.fringe_count, &cfg.laser);
    Ok((report, travel))
}

pub fn laser_spectrum(cfg: &RunConfig, trace: &SampleTrace) -> Result<SpectrumReport> {
    spectrum(
        trace,
        cfg.analysis.spectrum_start_s,
        cfg.analysis.spectrum_len_s,
    )
}

pub fn spectrum_csv(s: &SpectrumReport) -> String {
    let mut out = String::from("freq_hz,normalized_magnitude\n");
    for (f, m) in s.freqs_hz.iter().zip(&s.normalized_magnitudes) {
        out.push_str(&format!("{f},{m}\n"));
    }
    out
}

/// One named pass/fail line of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks plus the named traces (with their seeds) and spectra behind them.
pub type ValidationRun = (
    Vec<Check>,
    Vec<(String, u64, SampleTrace)>,
    Vec<(String, SpectrumReport)>,
);

/// Bench validation: fringe counts on the speaker and spectral peaks on the
/// stepper. Returns every check, passed or not.
pub fn validation_checks() -> Result<ValidationRun> {
    let mut checks = Vec::new();
    let mut traces = Vec::new();
    let mut spectra = Vec::new();

    for (wavelengths, expected) in [(4.0, 8usize), (3.0, 6)] {
        let cfg = presets::speaker(wavelengths);
        let (report, travel) = fringes(&cfg)?;
        let expected_travel = displacement_from_fringes(expected, &cfg.laser);
        checks.push(Check {
            name: format!("speaker_{wavelengths}λ_fringes"),
            passed: report.fringe_count == expected,
            detail: format!(
                "{} fringes per half-period (expected {expected}), travel {travel:e} m",
                report.fringe_count
            ),
        });
        if wavelengths == 3.0 {
            checks.push(Check {
                name: "speaker_3λ_travel".into(),
                passed: travel == 1.95e-6,
                detail: format!("reconstructed travel {travel:e} m (expected 1.95e-6 m), {expected_travel:e} from rule"),
            });
            let d = cfg.scenario.displacement()?;
            traces.push((
                "speaker_3l_photocurrent".to_string(),
                cfg.scenario.seed,
                simulate_smi(&d, &cfg.laser)?,
            ));
        }
    }

    for steps in [500.0, 1_000.0] {
        let cfg = presets::stepper(steps);
        let sim = simulate(&cfg)?;
        let s = laser_spectrum(&cfg, &sim.laser.trace)?;
        let off = (s.peak_freq_hz - steps).abs();
        checks.push(Check {
            name: format!("stepper_{steps}_peak"),
            passed: off <= s.resolution_hz() + 1e-9,
            detail: format!("spectral peak at {} Hz, driving {steps} Hz", s.peak_freq_hz),
        });
        traces.push((
            format!("stepper_{steps}_adc"),
            cfg.scenario.seed,
            sim.laser.trace,
        ));
        spectra.push((format!("stepper_{steps}_spectrum"), s));
    }
    Ok((checks, traces, spectra))
}

fn write_text(dir: &Path, name: &str, text: &str, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    artifacts.push(path);
    Ok(())
}

fn write_json<T: Serialize>(
    dir: &Path,
    name: &str,
    value: &T,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    write_text(dir, name, &text, artifacts)
}

fn write_csv_trace(
    dir: &Path,
    name: &str,
    trace: &SampleTrace,
    seed: u64,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = dir.join(format!("{name}.csv"));
    let meta = TraceMeta {
        channel: name.to_string(),
        seed: Some(seed),
    };
    write_trace_file(trace, &meta, &path, TraceFormat::Csv)?;
    artifacts.push(path);
    Ok(())
}

fn load(path: &Path) -> Result<SampleTrace> {
    read_trace(path, TraceFormat::from_path(path))
}

/// Runs one subcommand, writing its artifacts into the output directory.
///
/// `validate` writes its artifacts before reporting failures, and returns
/// [`Error::Assertion`] if any check fails.
pub fn run_pipeline(cfg: &RunConfig, command: Command, opts: &PipelineOptions) -> Result<Outcome> {
    cfg.validate()?;
    let dir = opts.resolved_out_dir();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let seed = cfg.scenario.seed;
    let mut artifacts = Vec::new();

    let summary = match command {
        Command::Simulate => {
            let sim = simulate(cfg)?;
            write_csv_trace(
                &dir,
                "displacement",
                &sim.displacement,
                seed,
                &mut artifacts,
            )?;
            write_csv_trace(&dir, "laser", &sim.laser.trace, seed, &mut artifacts)?;
            write_csv_trace(&dir, "mic", &sim.mic, seed, &mut artifacts)?;
            let summary = serde_json::json!({
                "laser_clipped": sim.laser.clipped,
                "fringe_rate_hz": sim.laser.fringe_rate_hz,
                "fringes_resolvable": sim.laser.fringes_resolvable,
                "laser_samples": sim.laser.trace.len(),
                "mic_samples": sim.mic.len(),
            });
            write_json(&dir, "simulate.json", &summary, &mut artifacts)?;
            summary
        }
        Command::Analyze => {
            let report = match (&opts.input, &opts.mic_input) {
                (Some(l), Some(m)) => analyze_pair(&load(l)?, &load(m)?, cfg, "input")?,
                (None, None) => analyze(cfg, &simulate(cfg)?)?,
                _ => {
                    return Err(Error::InvalidArgument(
                        "analyze needs both --input and --mic-input, or neither".into(),
                    ))
                }
            };
            write_json(&dir, "analysis.json", &report, &mut artifacts)?;
            serde_json::to_value(&report).expect("report serializes")
        }
        Command::Spectrum => {
            let trace = match &opts.input {
                Some(p) => load(p)?,
                None => simulate(cfg)?.laser.trace,
            };
            let s = laser_spectrum(cfg, &trace)?;
            write_text(&dir, "spectrum.csv", &spectrum_csv(&s), &mut artifacts)?;
            serde_json::json!({ "peak_freq_hz": s.peak_freq_hz, "resolution_hz": s.resolution_hz() })
        }
        Command::Fringes => {
            let (report, travel) = fringes(cfg)?;
            let summary = serde_json::json!({ "report": report, "displacement_m": travel });
            write_json(&dir, "fringes.json", &summary, &mut artifacts)?;
            summary
        }
        Command::DecisionMap => {
            let records = match &opts.records {
                Some(p) => {
                    let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                    decision::records_from_csv(&text)?
                }
                None => decision::published_results(),
            };
            let map = build_map(&records, REFERENCE_ANL_DB)?;
            for (fmt, name) in [
                (MapFormat::Csv, "decision_map.csv"),
                (MapFormat::Svg, "decision_map.svg"),
            ] {
                let path = dir.join(name);
                decision::write_map(&map, fmt, &path)?;
                artifacts.push(path);
            }
            serde_json::to_value(&map).expect("map serializes")
        }
        Command::Validate => {
            let (checks, traces, spectra) = validation_checks()?;
            for (name, trace_seed, t) in &traces {
                write_csv_trace(&dir, name, t, *trace_seed, &mut artifacts)?;
            }
            for (name, s) in &spectra {
                write_text(
                    &dir,
                    &format!("{name}.csv"),
                    &spectrum_csv(s),
                    &mut artifacts,
                )?;
            }
            write_json(&dir, "validation.json", &checks, &mut artifacts)?;
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            if !failed.is_empty() {
                return Err(Error::Assertion(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )));
            }
            serde_json::to_value(&checks).expect("checks serialize")
        }
    };
    Ok(Outcome { artifacts, summary })
}
