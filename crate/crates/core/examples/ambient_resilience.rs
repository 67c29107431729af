//! Pencil-on-table contact heard by both channels, first in a quiet room
//! and then with loud white noise playing. The laser does not hear the room;
//! the microphone does, and the winning modality flips.
//!
//! ```bash
//! cargo run --release -p smi-tactile --example ambient_resilience
//! ```

use smi_tactile::config::RunConfig;
use smi_tactile::decision::classify;
use smi_tactile::pipeline::{analyze, simulate};

fn main() -> smi_tactile::Result<()> {
    for name in ["pencil", "pencil_noisy"] {
        let cfg = RunConfig::preset(name)?;
        let report = analyze(&cfg, &simulate(&cfg)?)?;
        let c = classify(&report.record);
        println!(
            "ANL {:>4.1} dB: laser {:>5.1} dB, microphone {:>5.1} dB -> {}{} ({} laser / {} mic events)",
            cfg.scenario.anl_db,
            report.laser.snr.snr_db,
            report.mic.snr.snr_db,
            c.winner.as_str(),
            if c.tie { " (tie)" } else { "" },
            report.laser.events.events.len(),
            report.mic.events.events.len(),
        );
    }
    Ok(())
}
