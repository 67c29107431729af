//! Writing and reading traces: CSV round-trips bit-exactly, 16-bit WAV
//! quantizes and reports clipping.
//!
//! ```bash
//! cargo run -p smi-tactile --example trace_io
//! ```

use smi_tactile::config::RunConfig;
use smi_tactile::io::{
    read_trace, read_trace_file, write_trace, write_trace_file, TraceFormat, TraceMeta,
};
use smi_tactile::pipeline::simulate;

fn main() -> smi_tactile::Result<()> {
    let dir = std::env::temp_dir().join("smi-tactile-trace-io");
    std::fs::create_dir_all(&dir).map_err(|e| smi_tactile::Error::io(&dir, e))?;

    let cfg = RunConfig::preset("cable")?;
    let sim = simulate(&cfg)?;
    let csv = dir.join("laser.csv");
    let meta = TraceMeta {
        channel: "laser".into(),
        seed: Some(cfg.scenario.seed),
    };
    write_trace_file(&sim.laser.trace, &meta, &csv, TraceFormat::Csv)?;
    let back = read_trace_file(&csv, TraceFormat::from_path(&csv))?;
    println!(
        "{}: {} samples at {} Hz, channel `{}`, seed {:?}, bit-exact: {}",
        csv.display(),
        back.trace.len(),
        back.trace.sample_rate_hz(),
        back.meta.channel,
        back.meta.seed,
        back.trace == sim.laser.trace
    );

    // The microphone trace in output units; scale into [-1, 1) for PCM.
    let peak = sim.mic.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let wav = dir.join("mic.wav");
    let report = write_trace(&sim.mic.scaled(0.9 / peak)?, &wav, TraceFormat::Wav16)?;
    let pcm = read_trace(&wav, TraceFormat::Wav16)?;
    println!(
        "{}: {} samples at {} Hz, {} clipped",
        wav.display(),
        pcm.len(),
        pcm.sample_rate_hz(),
        report.clipped
    );
    Ok(())
}
