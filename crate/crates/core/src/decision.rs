//! Technology decision map: which modality wins under which ambient level.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::scenario::REFERENCE_ANL_DB;

/// Differences at or below this magnitude (dB) are ties.
pub const TIE_DB: f64 = 0.1;
/// A record sits at the baseline when its ANL is this close to it (dB).
pub const BASELINE_MATCH_DB: f64 = 0.5;

pub const MAP_CSV_HEADER: &str = "name,anl_db,mic_baseline_snr_db,diff_db,winner";
pub const RECORD_CSV_HEADER: &str = "name,family,anl_db,mic_snr_db,laser_snr_db,diff_db";

/// One experiment: SNRs of both modalities at one ambient level.
///
/// `diff_db` is microphone minus laser. Some experiments are only reported
/// as a difference; those leave both absolute SNRs empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub name: String,
    /// Records of one family share an object and motion, differing only in ANL.
    pub family: String,
    pub anl_db: f64,
    pub mic_snr_db: Option<f64>,
    pub laser_snr_db: Option<f64>,
    pub diff_db: f64,
}

impl ExperimentRecord {
    pub fn new(name: &str, family: &str, anl_db: f64, mic_snr_db: f64, laser_snr_db: f64) -> Self {
        Self {
            name: name.into(),
            family: family.into(),
            anl_db,
            mic_snr_db: Some(mic_snr_db),
            laser_snr_db: Some(laser_snr_db),
            diff_db: mic_snr_db - laser_snr_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (what, s) in [("name", &self.name), ("family", &self.family)] {
            ensure!(
                !s.is_empty() && !s.contains([',', '"', '\n', '\r']),
                InvalidArgument,
                "record {what} `{s}` must be non-empty and free of commas, quotes and newlines"
            );
        }
        match (self.mic_snr_db, self.laser_snr_db) {
            (Some(m), Some(l)) => ensure!(
                (m - l - self.diff_db).abs() <= TIE_DB + 1e-9,
                InvalidArgument,
                "record `{}`: stored diff {} dB disagrees with mic - laser = {} dB",
                self.name,
                self.diff_db,
                m - l
            ),
            (None, None) => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "record `{}` has only one absolute SNR",
                    self.name
                )))
            }
        }
        ensure!(
            self.anl_db.is_finite() && self.diff_db.is_finite(),
            InvalidArgument,
            "record `{}` has non-finite values",
            self.name
        );
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Laser,
    Microphone,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Laser => "laser",
            Winner::Microphone => "microphone",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub winner: Winner,
    /// The difference was within [`TIE_DB`]; the laser is named by default.
    pub tie: bool,
}

fn classify_diff(diff_db: f64) -> Classification {
    if diff_db.abs() <= TIE_DB {
        Classification {
            winner: Winner::Laser,
            tie: true,
        }
    } else if diff_db > 0.0 {
        Classification {
            winner: Winner::Microphone,
            tie: false,
        }
    } else {
        Classification {
            winner: Winner::Laser,
            tie: false,
        }
    }
}

pub fn classify(record: &ExperimentRecord) -> Classification {
    classify_diff(record.diff_db)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionPoint {
    pub name: String,
    pub anl_db: f64,
    /// Microphone SNR of the family's baseline-ANL record; `None` when the
    /// family has no baseline record and only differences were reported.
    pub mic_baseline_snr_db: Option<f64>,
    pub diff_db: f64,
    pub winner: Winner,
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMapData {
    pub points: Vec<DecisionPoint>,
    pub baseline_anl_db: f64,
}

/// One point per record, in input order.
///
/// A family without a record at the baseline ANL is an error unless every
/// record in it is difference-only, in which case its points carry no
/// vertical coordinate.
pub fn build_map(records: &[ExperimentRecord], baseline_anl_db: f64) -> Result<DecisionMapData> {
    ensure!(
        !records.is_empty(),
        InvalidArgument,
        "no experiment records"
    );
    for r in records {
        r.validate()?;
    }
    let baseline_for = |family: &str| -> Result<Option<f64>> {
        let members: Vec<&ExperimentRecord> =
            records.iter().filter(|r| r.family == family).collect();
        let at_baseline: Vec<&&ExperimentRecord> = members
            .iter()
            .filter(|r| (r.anl_db - baseline_anl_db).abs() <= BASELINE_MATCH_DB)
            .collect();
        match at_baseline.as_slice() {
            [one] => one.mic_snr_db.map(Some).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "baseline record `{}` has no microphone SNR",
                    one.name
                ))
            }),
            [] if members.iter().all(|r| r.mic_snr_db.is_none()) => Ok(None),
            [] => Err(Error::InvalidArgument(format!(
                "family `{family}` has no record at the baseline ANL of {baseline_anl_db} dB"
            ))),
            _ => Err(Error::InvalidArgument(format!(
                "family `{family}` has several baseline records"
            ))),
        }
    };
    let points = records
        .iter()
        .map(|r| {
            let c = classify(r);
            Ok(DecisionPoint {
                name: r.name.clone(),
                anl_db: r.anl_db,
                mic_baseline_snr_db: baseline_for(&r.family)?,
                diff_db: r.diff_db,
                winner: c.winner,
                tie: c.tie,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecisionMapData {
        points,
        baseline_anl_db,
    })
}

/// The nine robot experiments: cable and box slip, pencil and cup contact.
///
/// The silicone-cup laser SNR (37.5 dB) follows from the microphone's
/// 43.9 dB being 6.4 dB ahead; at 82 dB the laser lost 1.7 dB and the
/// microphone 21.1 dB. The bolt run at 82 dB is known only as a difference.
pub fn published_results() -> Vec<ExperimentRecord> {
    let with_diff = |name: &str, family: &str, anl, mic, laser, diff| ExperimentRecord {
        name: String::from(name),
        family: String::from(family),
        anl_db: anl,
        mic_snr_db: Some(mic),
        laser_snr_db: Some(laser),
        diff_db: diff,
    };
    vec![
        with_diff("cable1", "cable_1cm_s", 57.0, 1.7, 22.2, -20.5),
        with_diff("cable5", "cable_5cm_s", 57.0, 13.9, 30.4, -16.5),
        with_diff("box2", "box_2cm_s", 57.0, 25.9, 21.2, 4.7),
        with_diff("box5", "box_5cm_s", 57.0, 41.8, 24.1, 17.7),
        with_diff("pencil57", "pencil", 57.0, 24.5, 19.9, 4.6),
        with_diff("pencil62", "pencil", 62.0, 5.0, 21.3, -16.3),
        with_diff("cupSil57", "cup_silicone", 57.0, 43.9, 37.5, 6.4),
        with_diff("cupSil82", "cup_silicone", 82.0, 22.8, 35.8, -13.0),
        ExperimentRecord {
            name: "cupBolt82".into(),
            family: "cup_bolt".into(),
            anl_db: 82.0,
            mic_snr_db: None,
            laser_snr_db: None,
            diff_db: 6.4,
        },
    ]
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_f64(field: &str, row: usize, what: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("row {row}: bad {what} `{field}`")))
}

fn parse_opt(field: &str, row: usize, what: &str) -> Result<Option<f64>> {
    if field.trim().is_empty() {
        Ok(None)
    } else {
        parse_f64(field, row, what).map(Some)
    }
}

fn data_rows<'a>(
    text: &'a str,
    header: &str,
    columns: usize,
) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == header => {}
        other => {
            return Err(Error::MalformedHeader(format!(
                "expected `{header}`, found `{}`",
                other.map_or("", |(_, h)| h)
            )))
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let fields: Vec<&str> = l.split(',').collect();
            ensure!(
                fields.len() == columns,
                InvalidArgument,
                "row {}: expected {columns} columns, found {}",
                i + 1,
                fields.len()
            );
            Ok((i + 1, fields))
        })
        .collect()
}

/// Decision map as CSV: header row, LF endings, shortest round-trip decimals.
pub fn map_to_csv(map: &DecisionMapData) -> String {
    let mut out = String::from(MAP_CSV_HEADER);
    out.push('\n');
    for p in &map.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.name,
            p.anl_db,
            fmt_opt(p.mic_baseline_snr_db),
            p.diff_db,
            p.winner.as_str()
        );
    }
    out
}

pub fn map_from_csv(text: &str, baseline_anl_db: f64) -> Result<DecisionMapData> {
    let points = data_rows(text, MAP_CSV_HEADER, 5)?
        .into_iter()
        .map(|(row, f)| {
            let diff_db = parse_f64(f[3], row, "diff_db")?;
            let winner = match f[4].trim() {
                "laser" => Winner::Laser,
                "microphone" => Winner::Microphone,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "row {row}: unknown winner `{other}`"
                    )))
                }
            };
            let expected = classify_diff(diff_db);
            ensure!(
                expected.winner == winner,
                InvalidArgument,
                "row {row}: winner `{}` contradicts diff {diff_db} dB",
                winner.as_str()
            );
            Ok(DecisionPoint {
                name: f[0].to_string(),
                anl_db: parse_f64(f[1], row, "anl_db")?,
                mic_baseline_snr_db: parse_opt(f[2], row, "mic_baseline_snr_db")?,
                diff_db,
                winner,
                tie: expected.tie,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecisionMapData {
        points,
        baseline_anl_db,
    })
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(RECORD_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.name,
            r.family,
            r.anl_db,
            fmt_opt(r.mic_snr_db),
            fmt_opt(r.laser_snr_db),
            r.diff_db
        );
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    data_rows(text, RECORD_CSV_HEADER, 6)?
        .into_iter()
        .map(|(row, f)| {
            let r = ExperimentRecord {
                name: f[0].to_string(),
                family: f[1].to_string(),
                anl_db: parse_f64(f[2], row, "anl_db")?,
                mic_snr_db: parse_opt(f[3], row, "mic_snr_db")?,
                laser_snr_db: parse_opt(f[4], row, "laser_snr_db")?,
                diff_db: parse_f64(f[5], row, "diff_db")?,
            };
            r.validate()?;
            Ok(r)
        })
        .collect()
}

const LASER_COLOR: &str = "#c0392b";
const MIC_COLOR: &str = "#2471a3";

/// Static SVG scatter: ANL on x, baseline microphone SNR on y, each circle
/// labelled with its SNR difference and shaded by the winning modality.
/// Points without a baseline sit in a strip below the axis.
pub fn map_to_svg(map: &DecisionMapData) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 30.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 110.0;

    let xs: Vec<f64> = map.points.iter().map(|p| p.anl_db).collect();
    let ys: Vec<f64> = map
        .points
        .iter()
        .filter_map(|p| p.mic_baseline_snr_db)
        .collect();
    let bounds = |v: &[f64], lo: f64, hi: f64| {
        let min = v.iter().cloned().fold(lo, f64::min);
        let max = v.iter().cloned().fold(hi, f64::max);
        (
            (min / 5.0).floor() * 5.0 - 5.0,
            (max / 5.0).ceil() * 5.0 + 5.0,
        )
    };
    let (x0, x1) = bounds(&xs, map.baseline_anl_db, map.baseline_anl_db);
    let (y0, y1) = bounds(&ys, 0.0, 0.0);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);
    let strip_y = H - BOTTOM + 55.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>
<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{b}" stroke="black"/>"#,
        b = H - BOTTOM,
        r = W - RIGHT
    );
    let mut tick = x0;
    while tick <= x1 + 1e-9 {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{tick}</text>"#,
            px(tick),
            H - BOTTOM + 18.0
        );
        tick += 5.0;
    }
    let mut tick = y0;
    while tick <= y1 + 1e-9 {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{tick}</text>"#,
            LEFT - 8.0,
            py(tick) + 4.0
        );
        tick += 5.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">ambient noise level (dB)</text>
<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">microphone SNR at baseline ANL (dB)</text>
<text x="{LEFT}" y="{strip_y:.1}" text-anchor="end" dx="-8">n/a</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - BOTTOM + 36.0,
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0,
    );
    for p in &map.points {
        let color = match p.winner {
            Winner::Laser => LASER_COLOR,
            Winner::Microphone => MIC_COLOR,
        };
        let (cx, cy) = (
            px(p.anl_db),
            p.mic_baseline_snr_db.map_or(strip_y - 4.0, py),
        );
        let _ = writeln!(
            s,
            r#"<g class="point {winner}"><title>{name}</title>
<circle cx="{cx:.1}" cy="{cy:.1}" r="34" fill="{color}" fill-opacity="0.15"/>
<circle cx="{cx:.1}" cy="{cy:.1}" r="17" fill="white" stroke="black" stroke-width="2"/>
<text x="{cx:.1}" y="{ty:.1}" text-anchor="middle" font-size="10">{diff:+.1}</text></g>"#,
            winner = p.winner.as_str(),
            name = p.name,
            ty = cy + 3.5,
            diff = p.diff_db,
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{lx}" y="{TOP}" width="12" height="12" fill="{LASER_COLOR}" fill-opacity="0.4"/><text x="{tx}" y="{t1}">laser</text>
<rect x="{lx}" y="{t2}" width="12" height="12" fill="{MIC_COLOR}" fill-opacity="0.4"/><text x="{tx}" y="{t3}">microphone</text>
</svg>"#,
        lx = W - RIGHT - 100.0,
        tx = W - RIGHT - 82.0,
        t1 = TOP + 10.0,
        t2 = TOP + 18.0,
        t3 = TOP + 28.0,
    );
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFormat {
    Csv,
    Svg,
}

pub fn emit_map(map: &DecisionMapData, format: MapFormat) -> String {
    match format {
        MapFormat::Csv => map_to_csv(map),
        MapFormat::Svg => map_to_svg(map),
    }
}

pub fn write_map(map: &DecisionMapData, format: MapFormat, path: &Path) -> Result<()> {
    std::fs::write(path, emit_map(map, format)).map_err(|e| Error::io(path, e))
}

impl Default for DecisionMapData {
    fn default() -> Self {
        Self {
            points: Vec::new(),
            baseline_anl_db: REFERENCE_ANL_DB,
        }
    }
}
