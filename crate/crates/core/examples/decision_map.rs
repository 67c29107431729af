//! Technology decision map from published experiment results: which sensor
//! wins at which ambient level, rendered as CSV and SVG.
//!
//! ```bash
//! cargo run -p smi-tactile --example decision_map -- out/map.svg
//! ```

use std::path::PathBuf;

use smi_tactile::decision::{build_map, emit_map, published_results, write_map, MapFormat};
use smi_tactile::scenario::REFERENCE_ANL_DB;

fn main() -> smi_tactile::Result<()> {
    let map = build_map(&published_results(), REFERENCE_ANL_DB)?;
    print!("{}", emit_map(&map, MapFormat::Csv));
    if let Some(path) = std::env::args().nth(1).map(PathBuf::from) {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| smi_tactile::Error::io(dir, e))?;
        }
        write_map(&map, MapFormat::Svg, &path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
