//! Bench check of the interferometer: a speaker cone driven at 500 Hz moves
//! the target, and counting fringes over one rising half-period recovers its
//! travel at half a wavelength per fringe.
//!
//! ```bash
//! cargo run -p smi-tactile --example speaker_fringes
//! ```

use smi_tactile::config::presets;
use smi_tactile::pipeline::fringes;

fn main() -> smi_tactile::Result<()> {
    for wavelengths in [1.0, 2.0, 3.0, 4.0] {
        let cfg = presets::speaker(wavelengths);
        let (report, travel) = fringes(&cfg)?;
        println!(
            "{wavelengths} λ peak-to-peak: {} fringes -> {:.3} µm travel (fringes at samples {:?})",
            report.fringe_count,
            travel * 1e6,
            report.fringe_indices
        );
    }
    Ok(())
}
