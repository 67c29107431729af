//! The analog front end as a discrete filter chain: prints the designed
//! stage responses, then pushes a small photocurrent tone through TIA, HP,
//! SA, AA and the ADC.
//!
//! ```bash
//! cargo run -p smi-tactile --example readout_chain
//! ```

use std::f64::consts::PI;

use smi_tactile::readout::{
    apply_chain, design_highpass, design_sallen_key_lowpass, frequency_response, quantize,
    ReadoutConfig,
};
use smi_tactile::{SampleTrace, Unit};

fn main() -> smi_tactile::Result<()> {
    let cfg = ReadoutConfig::default();
    let physics_rate = 200_000.0;
    let hp = design_highpass(cfg.hp_cutoff_hz, physics_rate)?;
    let aa = design_sallen_key_lowpass(cfg.aa_cutoff_hz, cfg.aa_quality, physics_rate)?;
    println!(
        "{:>8}  {:>8}  {:>8}  {:>8}",
        "f [Hz]", "HP [dB]", "AA [dB]", "total"
    );
    for f in [10.0, 50.0, 150.0, 500.0, 1_000.0, 2_000.0, 4_000.0] {
        let (h, a) = (frequency_response(&hp, f), frequency_response(&aa, f));
        println!(
            "{f:>8.0}  {h:>8.2}  {a:>8.2}  {:>8.2}",
            h + a + 20.0 * cfg.midband_gain().log10()
        );
    }

    let amp = 1e-6;
    let tone = SampleTrace::from_fn(physics_rate, Unit::Amps, 100_000, |t| {
        10e-6 + amp * (2.0 * PI * 500.0 * t).sin()
    })?;
    let adc = quantize(&apply_chain(&tone, &cfg)?, &cfg)?;
    let settled = &adc.trace.samples()[adc.trace.range_s(0.1, 0.5)];
    let peak = settled.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!(
        "1 µA at 500 Hz on a 10 µA bias -> {:.3} V peak at {} Hz ADC ({} clipped), {:.3e} V/A",
        peak,
        adc.trace.sample_rate_hz(),
        adc.clipped,
        peak / amp
    );
    Ok(())
}
