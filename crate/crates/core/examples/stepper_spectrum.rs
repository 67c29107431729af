//! Vibrometry of a stepper motor: the normalized one-second spectrum of the
//! laser channel peaks at the step rate.
//!
//! ```bash
//! cargo run --release -p smi-tactile --example stepper_spectrum
//! ```

use smi_tactile::config::presets;
use smi_tactile::pipeline::{laser_spectrum, simulate};

fn main() -> smi_tactile::Result<()> {
    for steps in [500.0, 1_000.0] {
        let cfg = presets::stepper(steps);
        let sim = simulate(&cfg)?;
        let s = laser_spectrum(&cfg, &sim.laser.trace)?;
        let mut strongest: Vec<(f64, f64)> = s
            .freqs_hz
            .iter()
            .copied()
            .zip(s.normalized_magnitudes.iter().copied())
            .collect();
        strongest.sort_by(|a, b| b.1.total_cmp(&a.1));
        println!(
            "{steps} steps/s: peak at {} Hz (resolution {} Hz)",
            s.peak_freq_hz,
            s.resolution_hz()
        );
        for (f, m) in strongest.iter().take(5) {
            println!("    {f:>7.1} Hz  {m:.3}");
        }
    }
    Ok(())
}
