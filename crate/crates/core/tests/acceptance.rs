//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! with its measured values and runtime; the test fails if any criterion does.
//!
//! Run with `cargo test -p smi-tactile --test acceptance -- --nocapture`.

// Q = 0.7071 is the stated Butterworth design value, not a stand-in for 1/sqrt(2).
#![allow(clippy::approx_constant)]

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smi_tactile::analysis::{noise_floor, peak_snr, snr_db, spectrum};
use smi_tactile::config::{presets, RunConfig};
use smi_tactile::decision::{
    build_map, classify, map_from_csv, map_to_csv, published_results, Winner,
};
use smi_tactile::pipeline::{analyze, fringes, run_pipeline, simulate, Command, PipelineOptions};
use smi_tactile::readout::{
    design_highpass, design_sallen_key_lowpass, frequency_response, BiquadCoeffs, BiquadFilter,
};
use smi_tactile::smi::{solve_excess_phase, LaserConfig};
use smi_tactile::{SampleTrace, Unit};

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(id: u32, title: &str, budget: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let out = body();
    let elapsed = t0.elapsed();
    let in_time = elapsed <= budget;
    let passed = out.passed && in_time;
    println!(
        "[{}] {id}. {title}: {} ({:.3} s, budget {:.0} s)",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    passed
}

// --- 1 -------------------------------------------------------------------

fn fringe_law() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (wavelengths, expected) in [(4.0, 8usize), (3.0, 6)] {
        let cfg = presets::speaker(wavelengths);
        let (report, travel) = fringes(&cfg).expect("fringe pipeline");
        ok &= report.fringe_count == expected;
        parts.push(format!(
            "{wavelengths}λ pp -> {} fringes (want {expected})",
            report.fringe_count
        ));
        if wavelengths == 3.0 {
            ok &= travel == 1.95e-6;
            parts.push(format!("travel {travel:e} m (want 1.95e-6 exactly)"));
        }
    }
    Outcome {
        passed: ok,
        detail: parts.join(", "),
    }
}

// --- 2 -------------------------------------------------------------------

/// Bisection on the bracket [φ0 − C, φ0 + C], which always contains the root
/// because the residual moves by ±C at its ends.
fn bisection(phi0: f64, c: f64, alpha: f64) -> f64 {
    let f = |p: f64| p + c * (p + alpha.atan()).sin() - phi0;
    let (mut lo, mut hi) = (phi0 - c, phi0 + c);
    if f(lo) == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) < 0.0) == (f(lo) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn solver_vs_oracle() -> Outcome {
    // 10 × 10 × 10 grid over φ0 ∈ [−4π, 4π], C ∈ [0, 0.95], α ∈ [0, 6].
    let mut worst = 0.0f64;
    let mut points = 0;
    let mut failures = 0;
    for i in 0..10 {
        let phi0 = -4.0 * PI + 8.0 * PI * i as f64 / 9.0;
        for j in 0..10 {
            let c = 0.95 * j as f64 / 9.0;
            for k in 0..10 {
                let alpha = 6.0 * k as f64 / 9.0;
                let laser = LaserConfig {
                    feedback_c: c,
                    alpha,
                    ..LaserConfig::default()
                };
                points += 1;
                match solve_excess_phase(phi0, &laser) {
                    Ok(phi) => worst = worst.max((phi - bisection(phi0, c, alpha)).abs()),
                    Err(_) => failures += 1,
                }
            }
        }
    }
    Outcome {
        passed: points == 1000 && failures == 0 && worst <= 1e-9,
        detail: format!(
            "{points} grid points, {failures} failures, max |Δφ| = {worst:.2e} rad (tol 1e-9)"
        ),
    }
}

// --- 3 -------------------------------------------------------------------

/// Steady-state gain in dB from a least-squares sine fit of the filtered
/// tone after discarding the start-up transient.
fn measured_gain_db(coeffs: &BiquadCoeffs, freq: f64) -> f64 {
    let fs = coeffs.design_rate_hz;
    let settle = (2.0 * fs) as usize;
    // Whole number of periods for the fit window, at least one second.
    let periods = (freq * 1.0).ceil().max(1.0);
    let fit = (periods / freq * fs).round() as usize;
    let mut filter = BiquadFilter::new(*coeffs);
    let w = 2.0 * PI * freq / fs;
    let (mut scc, mut sss, mut scs, mut syc, mut sys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for n in 0..settle + fit {
        let y = filter.process((w * n as f64).sin());
        if n >= settle {
            let (s, c) = (w * n as f64).sin_cos();
            scc += c * c;
            sss += s * s;
            scs += s * c;
            syc += y * c;
            sys += y * s;
        }
    }
    let det = scc * sss - scs * scs;
    let a = (syc * sss - sys * scs) / det;
    let b = (sys * scc - syc * scs) / det;
    20.0 * (a * a + b * b).sqrt().log10()
}

fn chain_vs_analytic() -> Outcome {
    let fs = 10_000.0;
    let hp = design_highpass(150.0, fs).unwrap();
    let lp = design_sallen_key_lowpass(2_000.0, 0.7071, fs).unwrap();
    let mut worst = 0.0f64;
    for k in 0..20 {
        let f = 10.0 * (4_500.0f64 / 10.0).powf(k as f64 / 19.0);
        for c in [&hp, &lp] {
            worst = worst.max((measured_gain_db(c, f) - frequency_response(c, f)).abs());
        }
    }
    let hp_fc = frequency_response(&hp, 150.0);
    let lp_fc = frequency_response(&lp, 2_000.0);
    let hp_meas = measured_gain_db(&hp, 150.0);
    let lp_meas = measured_gain_db(&lp, 2_000.0);
    let near = |x: f64| (x + 3.01).abs() <= 0.05;
    Outcome {
        passed: worst <= 0.1 && near(hp_fc) && near(lp_fc) && near(hp_meas) && near(lp_meas),
        detail: format!(
            "max sweep deviation {worst:.4} dB over 20 tones (tol 0.1); HP@150 {hp_fc:.3}/{hp_meas:.3} dB, \
             LP@2k {lp_fc:.3}/{lp_meas:.3} dB analytic/measured (want -3.01±0.05)"
        ),
    }
}

// --- 4 -------------------------------------------------------------------

fn snr_pipeline() -> Outcome {
    let fs = 10_000.0;
    let n = 5_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let mean = raw.iter().sum::<f64>() / n as f64;
    let sd = (raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    let sigma = 0.003;
    let noise: Vec<f64> = raw.iter().map(|v| (v - mean) / sd * sigma).collect();

    let mut ok = true;
    let mut parts = Vec::new();
    for r in [2.0, 10.0, 12.9, 100.0] {
        // 50 Hz tone over exactly 25 periods: RMS amplitude/√2.
        let amp = r * sigma * 2f64.sqrt();
        let mut samples = noise.clone();
        samples.extend((0..n).map(|i| amp * (2.0 * PI * 50.0 * i as f64 / fs).sin()));
        let trace = SampleTrace::new(fs, Unit::Volts, samples).unwrap();
        let est = noise_floor(&trace, 0..n).unwrap();
        let got = snr_db(&trace, n..2 * n, &est).unwrap().snr_db;
        let want = 10.0 * (r * r).log10();
        ok &= (got - want).abs() <= 0.2;
        parts.push(format!("R={r}: {got:.3} dB (want {want:.3})"));
    }

    let mut samples = noise.clone();
    let p = 10.0 * sigma;
    let peaks: Vec<usize> = (0..10).map(|i| 250 + 450 * i).collect();
    for &i in &peaks {
        samples[i] = p;
    }
    let mut rest = noise.clone();
    rest.extend(samples);
    let trace = SampleTrace::new(fs, Unit::Volts, rest).unwrap();
    let est = noise_floor(&trace, 0..n).unwrap();
    let shifted: Vec<usize> = peaks.iter().map(|i| i + n).collect();
    let peak_db = peak_snr(&trace, &shifted, &est).unwrap().snr_db;
    ok &= (peak_db - 20.0).abs() <= 0.01;
    parts.push(format!(
        "10 peaks at 10·√P_noise: {peak_db:.4} dB (want 20±0.01)"
    ));
    Outcome {
        passed: ok,
        detail: parts.join(", "),
    }
}

// --- 5 -------------------------------------------------------------------

fn stepper_spectra() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for steps in [500.0, 1_000.0] {
        let cfg = presets::stepper(steps);
        let sim = simulate(&cfg).unwrap();
        let s = spectrum(&sim.laser.trace, cfg.analysis.spectrum_start_s, 1.0).unwrap();
        let bins_off = (s.peak_freq_hz - steps).abs() / s.resolution_hz();
        ok &= bins_off <= 1.0 + 1e-9 && s.window_s == 1.0;
        parts.push(format!(
            "{steps} steps/s -> peak {} Hz ({bins_off:.0} bins off)",
            s.peak_freq_hz
        ));
    }
    Outcome {
        passed: ok,
        detail: parts.join(", "),
    }
}

// --- 6 -------------------------------------------------------------------

fn ambient_resilience() -> Outcome {
    let quiet = RunConfig::preset("pencil").unwrap();
    let loud = RunConfig::preset("pencil_noisy").unwrap();
    assert_eq!(quiet.scenario.anl_db, 57.0);
    assert_eq!(loud.scenario.anl_db, 82.0);
    let a = analyze(&quiet, &simulate(&quiet).unwrap()).unwrap();
    let b = analyze(&loud, &simulate(&loud).unwrap()).unwrap();
    let laser_change = (b.laser.snr.snr_db - a.laser.snr.snr_db).abs();
    let mic_drop = a.mic.snr.snr_db - b.mic.snr.snr_db;
    let w57 = classify(&a.record).winner;
    let w82 = classify(&b.record).winner;
    Outcome {
        passed: laser_change < 0.1
            && mic_drop > 15.0
            && w57 == Winner::Microphone
            && w82 == Winner::Laser,
        detail: format!(
            "laser {:.2} -> {:.2} dB (Δ {laser_change:.3}, want < 0.1), mic {:.2} -> {:.2} dB \
             (drop {mic_drop:.2}, want > 15), winner {} -> {}",
            a.laser.snr.snr_db,
            b.laser.snr.snr_db,
            a.mic.snr.snr_db,
            b.mic.snr.snr_db,
            w57.as_str(),
            w82.as_str()
        ),
    }
}

// --- 7 -------------------------------------------------------------------

fn decision_fixture() -> Outcome {
    let want_diff = [-20.5, -16.5, 4.7, 17.7, 4.6, -16.3, 6.4, -13.0, 6.4];
    let want_winner = [
        Winner::Laser,
        Winner::Laser,
        Winner::Microphone,
        Winner::Microphone,
        Winner::Microphone,
        Winner::Laser,
        Winner::Microphone,
        Winner::Laser,
        Winner::Microphone,
    ];
    let records = published_results();
    let map = build_map(&records, 57.0).unwrap();
    let mut ok = map.points.len() == 9;
    for (i, p) in map.points.iter().enumerate() {
        ok &= p.diff_db == want_diff[i] && p.winner == want_winner[i] && !p.tie;
    }
    let csv = map_to_csv(&map);
    let back = map_from_csv(&csv, 57.0).unwrap();
    let round_trip = back == map && map_to_csv(&back) == csv;
    ok &= round_trip;
    let got: Vec<String> = map
        .points
        .iter()
        .map(|p| format!("{:+.1}", p.diff_db))
        .collect();
    Outcome {
        passed: ok,
        detail: format!(
            "{} points, diffs [{}], CSV round-trip {}",
            map.points.len(),
            got.join(", "),
            if round_trip { "bit-exact" } else { "MISMATCH" }
        ),
    }
}

// --- 8 -------------------------------------------------------------------

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let cfg = RunConfig::default();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let opts = PipelineOptions {
            out_dir: Some(d.path().to_path_buf()),
            ..PipelineOptions::default()
        };
        run_pipeline(&cfg, Command::Validate, &opts).expect("validate passes");
    }
    let a = read_dir_sorted(dirs[0].path());
    let b = read_dir_sorted(dirs[1].path());
    let bytes: usize = a.iter().map(|(_, v)| v.len()).sum();
    Outcome {
        passed: !a.is_empty() && a == b,
        detail: format!(
            "{} artifacts, {bytes} bytes, {}",
            a.len(),
            if a == b { "byte-identical" } else { "DIFFER" }
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let suite = Instant::now();
    let s = Duration::from_secs;
    let results = [
        run(1, "fringe law", s(1), fringe_law),
        run(
            2,
            "excess-phase solver vs bisection",
            s(5),
            solver_vs_oracle,
        ),
        run(
            3,
            "filter chain vs analytic response",
            s(5),
            chain_vs_analytic,
        ),
        run(4, "SNR pipeline", s(1), snr_pipeline),
        run(5, "stepper vibrometry", s(2), stepper_spectra),
        run(6, "ambient resilience", s(5), ambient_resilience),
        run(7, "decision-map fixture", s(1), decision_fixture),
        run(8, "determinism", s(30), determinism),
    ];
    let total = suite.elapsed();
    let in_time = total <= s(30);
    println!(
        "[{}] full suite runtime {:.3} s (budget 30 s)",
        if in_time { "PASS" } else { "FAIL" },
        total.as_secs_f64()
    );
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    assert!(
        passed == results.len() && in_time,
        "acceptance criteria failed"
    );
}
