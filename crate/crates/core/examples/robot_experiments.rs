//! Runs the synthetic robot experiments and prints both channels' SNRs and
//! the winning modality, one line per scenario.
//!
//! ```bash
//! cargo run --release -p smi-tactile --example robot_experiments
//! ```

use smi_tactile::config::RunConfig;
use smi_tactile::pipeline::{analyze, simulate};

fn main() -> smi_tactile::Result<()> {
    println!(
        "{:<14} {:>6} {:>10} {:>10} {:>9}  {:<10} laser events",
        "scenario", "ANL", "laser dB", "mic dB", "diff dB", "winner"
    );
    for name in ["cable", "box", "pencil", "pencil_noisy", "cup", "cup_noisy"] {
        let cfg = RunConfig::preset(name)?;
        let sim = simulate(&cfg)?;
        let report = analyze(&cfg, &sim)?;
        println!(
            "{:<14} {:>6.1} {:>10.1} {:>10.1} {:>+9.1}  {:<10} {}{}",
            name,
            cfg.scenario.anl_db,
            report.laser.snr.snr_db,
            report.mic.snr.snr_db,
            report.record.diff_db,
            report.classification.winner.as_str(),
            report.laser.events.events.len(),
            if sim.laser.clipped > 0 {
                format!("  ({} ADC samples clipped)", sim.laser.clipped)
            } else {
                String::new()
            }
        );
    }
    Ok(())
}
