use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smi_tactile::config::RunConfig;
use smi_tactile::decision::{
    build_map, classify, emit_map, map_from_csv, map_to_csv, published_results, records_from_csv,
    records_to_csv, DecisionMapData, ExperimentRecord, MapFormat, Winner, MAP_CSV_HEADER,
};
use smi_tactile::io::{
    parse_csv, read_trace, read_trace_file, to_csv, write_trace, TraceFormat, TraceMeta,
};
use smi_tactile::{Error, SampleTrace, Unit};

#[test]
fn fixture_winners_and_axes() {
    let map = build_map(&published_results(), 57.0).unwrap();
    let winners: Vec<(&str, Winner)> = map
        .points
        .iter()
        .map(|p| (p.name.as_str(), p.winner))
        .collect();
    use Winner::{Laser as L, Microphone as M};
    assert_eq!(
        winners,
        [
            ("cable1", L),
            ("cable5", L),
            ("box2", M),
            ("box5", M),
            ("pencil57", M),
            ("pencil62", L),
            ("cupSil57", M),
            ("cupSil82", L),
            ("cupBolt82", M),
        ]
    );
    let by_name = |n: &str| map.points.iter().find(|p| p.name == n).unwrap();
    // Noisy variants sit at their family's baseline microphone SNR.
    assert_eq!(by_name("pencil62").mic_baseline_snr_db, Some(24.5));
    assert_eq!(by_name("cupSil82").mic_baseline_snr_db, Some(43.9));
    assert_eq!(by_name("cupBolt82").mic_baseline_snr_db, None);
    assert_eq!(by_name("pencil62").anl_db, 62.0);
}

#[test]
fn map_edge_cases() {
    assert!(build_map(&[], 57.0).is_err());
    let empty = DecisionMapData::default();
    assert_eq!(
        emit_map(&empty, MapFormat::Csv),
        format!("{MAP_CSV_HEADER}\n")
    );

    let one = build_map(&[ExperimentRecord::new("a", "f", 57.0, 10.0, 12.0)], 57.0).unwrap();
    assert_eq!(one.points.len(), 1);
    let svg = emit_map(&one, MapFormat::Svg);
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains("-2.0"));

    // No baseline record for a family that has absolute SNRs.
    assert!(build_map(&[ExperimentRecord::new("a", "f", 82.0, 10.0, 12.0)], 57.0).is_err());

    let mut bad = ExperimentRecord::new("b", "f", 57.0, 10.0, 12.0);
    bad.diff_db = -1.8;
    assert!(bad.validate().is_err());
    assert!(build_map(&[bad], 57.0).is_err());
}

#[test]
fn ties_default_to_laser_and_are_flagged() {
    let c = classify(&ExperimentRecord::new("t", "f", 57.0, 20.0, 20.0));
    assert_eq!(c.winner, Winner::Laser);
    assert!(c.tie);
    let c = classify(&ExperimentRecord::new("t", "f", 57.0, 20.05, 20.0));
    assert!(c.tie);
    let c = classify(&ExperimentRecord::new("t", "f", 57.0, 20.5, 20.0));
    assert_eq!(c.winner, Winner::Microphone);
    assert!(!c.tie);
}

#[test]
fn record_csv_round_trips() {
    let records = published_results();
    let text = records_to_csv(&records);
    assert_eq!(records_from_csv(&text).unwrap(), records);
    assert!(map_from_csv(
        "name,anl_db,mic_baseline_snr_db,diff_db,winner\nx,57,1,5,laser\n",
        57.0
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn winner_depends_only_on_the_difference(
        mic in -20.0f64..60.0,
        laser in -20.0f64..60.0,
        shift in -50.0f64..50.0,
    ) {
        let a = classify(&ExperimentRecord::new("x", "f", 57.0, mic, laser));
        let b = classify(&ExperimentRecord::new("x", "f", 57.0, mic + shift, laser + shift));
        let d = mic - laser;
        if (d.abs() - 0.1).abs() > 1e-9 {
            prop_assert_eq!(a, b);
        }
        if d > 0.1 + 1e-9 {
            prop_assert_eq!(a.winner, Winner::Microphone);
        }
        if d < 0.0 {
            prop_assert_eq!(a.winner, Winner::Laser);
        }
    }

    #[test]
    fn decision_map_csv_round_trips(
        rows in proptest::collection::vec((30.0f64..100.0, -10.0f64..60.0, -10.0f64..60.0), 1..20),
    ) {
        let records: Vec<ExperimentRecord> = rows
            .iter()
            .enumerate()
            .map(|(i, &(anl, mic, laser))| ExperimentRecord::new(&format!("r{i}"), &format!("f{i}"), anl, mic, laser))
            .collect();
        // Each record is the only member of its family, so it is its own baseline.
        let baselines: Vec<ExperimentRecord> = records.iter().map(|r| ExperimentRecord { anl_db: 57.0, ..r.clone() }).collect();
        let map = build_map(&baselines, 57.0).unwrap();
        let csv = map_to_csv(&map);
        let back = map_from_csv(&csv, 57.0).unwrap();
        prop_assert_eq!(&back, &map);
        prop_assert_eq!(map_to_csv(&back), csv);
    }

    #[test]
    fn csv_trace_round_trip_is_bit_exact(
        v in proptest::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 0..300),
        rate in prop_oneof![Just(10_000.0), Just(200_000.0), Just(44_100.0), 1.0f64..1e6],
    ) {
        let t = SampleTrace::new(rate, Unit::Volts, v).unwrap();
        let meta = TraceMeta { channel: "laser".into(), seed: Some(7) };
        let back = parse_csv(&to_csv(&t, &meta)).unwrap();
        prop_assert_eq!(back.trace, t);
        prop_assert_eq!(back.meta, meta);
    }
}

#[test]
fn million_sample_csv_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<f64> = (0..1_000_000)
        .map(|_| {
            f64::from_bits(
                rng.gen::<u64>() & !(0x7ffu64 << 52) | ((rng.gen_range(900u64..1150)) << 52),
            )
        })
        .collect();
    let t = SampleTrace::new(200_000.0, Unit::Amps, samples).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.csv");
    write_trace(&t, &path, TraceFormat::Csv).unwrap();
    let back = read_trace(&path, TraceFormat::Csv).unwrap();
    assert!(back
        .samples()
        .iter()
        .zip(t.samples())
        .all(|(a, b)| a.to_bits() == b.to_bits()));
    assert_eq!(back, t);
}

#[test]
fn csv_without_rate_header_infers_it() {
    let text = "# smi-tactile trace v1\ntime_s,value\n0,1.5\n0.0001,2.5\n0.0002,-1\n";
    let f = parse_csv(text).unwrap();
    assert_eq!(f.trace.len(), 3);
    assert_eq!(f.trace.sample_rate_hz(), 10_000.0);
    assert_eq!(f.trace.samples(), &[1.5, 2.5, -1.0]);

    let empty = SampleTrace::new(1_000.0, Unit::Volts, vec![]).unwrap();
    let csv = to_csv(&empty, &TraceMeta::default());
    assert!(csv.lines().last().unwrap() == "time_s,value");
    assert_eq!(parse_csv(&csv).unwrap().trace, empty);
}

#[test]
fn csv_diagnostics_are_distinct() {
    let jitter = "# smi-tactile trace v1\ntime_s,value\n0,1\n0.0001,1\n0.00025,1\n";
    assert!(matches!(
        parse_csv(jitter),
        Err(Error::InconsistentTimestep { row: 3, .. })
    ));
    let header = "# smi-tactile trace v1\n# this line has no key\ntime_s,value\n0,1\n0.1,1\n";
    assert!(matches!(parse_csv(header), Err(Error::MalformedHeader(_))));
    let version = "# smi-tactile trace v9\ntime_s,value\n0,1\n0.1,1\n";
    assert!(matches!(parse_csv(version), Err(Error::MalformedHeader(_))));
    let columns = "# smi-tactile trace v1\nt,v\n0,1\n";
    assert!(matches!(parse_csv(columns), Err(Error::MalformedHeader(_))));
}

#[test]
fn wav_mapping_clipping_and_encoding() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mic.wav");
    let t = SampleTrace::new(
        16_000.0,
        Unit::Dimensionless,
        vec![0.0, 0.5, -1.0, 32767.0 / 32768.0, 1.5, -3.0, 1.0 / 32768.0],
    )
    .unwrap();
    let report = write_trace(&t, &path, TraceFormat::Wav16).unwrap();
    assert_eq!(report.clipped, 2);
    let back = read_trace_file(&path, TraceFormat::from_path(&path))
        .unwrap()
        .trace;
    assert_eq!(back.sample_rate_hz(), 16_000.0);
    assert_eq!(back.unit(), Unit::Dimensionless);
    assert_eq!(
        back.samples(),
        &[
            0.0,
            0.5,
            -1.0,
            32767.0 / 32768.0,
            32767.0 / 32768.0,
            -1.0,
            1.0 / 32768.0
        ]
    );

    let stereo = dir.path().join("stereo.wav");
    let spec = hound::WavSpec {
        channels: 2,
        sample_rate: 8_000,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(&stereo, spec).unwrap();
    for _ in 0..4 {
        w.write_sample(0i16).unwrap();
    }
    w.finalize().unwrap();
    assert!(matches!(
        read_trace(&stereo, TraceFormat::Wav16),
        Err(Error::UnsupportedWav(_))
    ));

    let missing = dir.path().join("nope.csv");
    assert!(matches!(
        read_trace(&missing, TraceFormat::Csv),
        Err(Error::Io { .. })
    ));
}

#[test]
fn config_round_trips_and_is_strict() {
    for name in smi_tactile::config::presets::NAMES {
        let cfg = RunConfig::preset(name).unwrap();
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg, "preset {name}");
    }
    let text = RunConfig::default().to_toml();
    let typo = text.replacen("[laser]", "[laser]\nfeedback = 0.3", 1);
    assert!(matches!(
        RunConfig::from_toml(&typo),
        Err(Error::InvalidConfig(_))
    ));
    assert!(matches!(
        RunConfig::from_toml("[nonsense]\nx = 1\n"),
        Err(Error::InvalidConfig(_))
    ));
    let silence = "[scenario]\nduration_s = 1.0\nseed = 1\n[scenario.source]\nkind = \"silence\"\nextra = 3\n";
    assert!(RunConfig::from_toml(silence).is_err());
    assert!(text.contains("feedback_c = 0.5"));
    let bad_c = text.replacen("feedback_c = 0.5", "feedback_c = 1.5", 1);
    assert!(matches!(
        RunConfig::from_toml(&bad_c),
        Err(Error::InvalidConfig(_))
    ));
}
