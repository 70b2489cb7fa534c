mod common;

use std::path::Path;
use std::process::Command;

use approx::assert_relative_eq;
use proptest::prelude::*;
use spoofgame::harness::{
    dest_shift, load_scenario, paper_like, parse_scenario, run_single, streams, HarnessError,
    Scenario, ShiftDistribution,
};
use spoofgame::{DefenderPolicy, Vec2f};

const MINIMAL: &str = r#"{
  "starts": [{"x":0,"y":0},{"x":0,"y":100},{"x":0,"y":200},{"x":0,"y":300},{"x":0,"y":400}],
  "real_dests": [{"x":900,"y":0},{"x":900,"y":100},{"x":900,"y":200},{"x":900,"y":300},{"x":900,"y":400}],
  "attacker_dests": [{"x":500,"y":-50},{"x":500,"y":50},{"x":500,"y":150},{"x":500,"y":250},{"x":500,"y":350}],
  "step_length": 50,
  "e_max": 50
}"#;

fn write_and_load(s: &Scenario) -> Scenario {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, s.to_json()).unwrap();
    load_scenario(&path).unwrap()
}

#[test]
fn reference_scenario_round_trips() {
    let s = paper_like();
    assert_eq!(write_and_load(&s), s);
}

#[test]
fn defaults_fill_missing_fields() {
    let s = parse_scenario(MINIMAL).unwrap();
    assert_eq!(s.tolerance, 1e-6);
    assert_eq!(s.seed, 0);
    assert_eq!(s.tau, None);
    assert_eq!(s.horizon(), 54);
}

#[test]
fn errors_name_the_offending_field() {
    let missing = MINIMAL.replace("\"attacker_dests\"", "\"attackers\"");
    match parse_scenario(&missing) {
        Err(e @ HarnessError::Schema { .. }) => {
            assert_eq!(e.code(), "E_SCHEMA");
            assert!(e.to_string().contains("attacker"), "{e}");
        }
        other => panic!("expected a schema error, got {other:?}"),
    }

    let too_close = MINIMAL.replace("\"e_max\": 50", "\"e_max\": 950");
    match parse_scenario(&too_close) {
        Err(e @ HarnessError::Invariant { .. }) => {
            assert_eq!(e.code(), "E_INVARIANT");
            assert!(e.to_string().contains("starts[0]"), "{e}");
        }
        other => panic!("expected an invariant error, got {other:?}"),
    }

    assert_eq!(parse_scenario("{ not json").unwrap_err().code(), "E_PARSE");
}

#[test]
fn unattacked_cell_has_no_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let cell = run_single(&paper_like(), DefenderPolicy::None, false, dir.path()).unwrap();
    assert!(cell.deviations.iter().all(|d| d.theta_index == 0.0));
    assert!(cell.captured().is_empty());

    let mut reader = csv::Reader::from_path(dir.path().join("metrics_run_none.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    for column in ["scenario_hash", "cell", "seed", "theta_index", "captured"] {
        assert!(headers.iter().any(|h| h == column), "missing {column}");
    }
    let theta = headers.iter().position(|h| h == "theta_index").unwrap();
    let captured = headers.iter().position(|h| h == "captured").unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row[theta].parse::<f64>().unwrap(), 0.0);
        assert_eq!(&row[captured], "false");
    }
}

#[test]
fn every_output_row_is_attributable() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = paper_like();
    run_single(&scenario, DefenderPolicy::Random, true, dir.path()).unwrap();
    let hash = scenario.hash();
    for file in ["trajectories_run_random.csv", "metrics_run_random.csv"] {
        let mut reader = csv::Reader::from_path(dir.path().join(file)).unwrap();
        for row in reader.records() {
            let row = row.unwrap();
            assert_eq!(&row[0], hash);
            assert_eq!(&row[1], "run_random");
            assert_eq!(row[2].parse::<u64>().unwrap(), scenario.seed);
        }
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["scenario_hash"], hash);
    assert_eq!(summary["seed"], scenario.seed);
    assert_eq!(summary["cells"].as_array().unwrap().len(), 1);
}

#[test]
fn constant_shift_moves_each_destination_exactly() {
    let s = paper_like();
    let shifted = dest_shift(&s, 40.0, ShiftDistribution::Constant, &mut common::rng(0));
    for (a, b) in s.attacker_dests.iter().zip(&shifted.attacker_dests) {
        assert_relative_eq!(b.x - a.x, 40.0, epsilon = 1e-9);
        assert_eq!(a.y, b.y);
    }
}

#[test]
fn random_shift_has_the_requested_mean() {
    let s = paper_like();
    let trials = 1000;
    let mut total = 0.0;
    for seed in 0..trials {
        let mut rng = streams::rng(seed, streams::DEST_SHIFT);
        let shifted = dest_shift(&s, 50.0, ShiftDistribution::Uniform, &mut rng);
        total += s.mean_dest_gap() - shifted.mean_dest_gap();
    }
    let mean = total / trials as f64;
    let along_x: f64 = s
        .attacker_dests
        .iter()
        .zip(&s.real_dests)
        .map(|(a, r)| (r.x - a.x) / r.distance(*a))
        .sum::<f64>()
        / 5.0;
    // The gap shrinks by the x-shift times the cosine of each gap's direction.
    let expected = 50.0 * along_x;
    assert!(
        (mean - expected).abs() <= 0.05 * expected,
        "mean {mean} vs {expected}"
    );
}

#[test]
fn shifts_never_pass_the_real_destination() {
    let s = paper_like();
    let shifted = dest_shift(&s, 5000.0, ShiftDistribution::Constant, &mut common::rng(0));
    for (a, r) in shifted.attacker_dests.iter().zip(&s.real_dests) {
        assert_eq!(a.x, r.x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_scenarios_round_trip(
        seed in any::<u64>(),
        step in 10.0f64..120.0,
        e_max in 5.0f64..90.0,
        tau in proptest::option::of(1usize..500),
        offsets in prop::array::uniform5(-60.0f64..60.0),
    ) {
        let base = paper_like();
        let s = Scenario {
            name: format!("random {seed}"),
            starts: base.starts.iter().zip(offsets).map(|(p, o)| *p + Vec2f::new(o, -o)).collect(),
            step_length: step,
            e_max,
            tau,
            seed,
            tolerance: 1e-6 + e_max * 1e-9,
            ..base
        };
        prop_assume!(s.validate().is_ok());
        prop_assert_eq!(write_and_load(&s), s);
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_spoofgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn reference_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/paper_like.json")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn cli_exit_codes() {
    let scenario = reference_path();
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(
        cli(&["validate", "--scenario", &scenario]).status.code(),
        Some(0)
    );
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));

    let missing = cli(&["validate", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("E_READ"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, MINIMAL.replace("\"e_max\": 50", "\"e_max\": 950")).unwrap();
    let invalid = cli(&["validate", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("E_INVARIANT"));

    let blocker = dir.path().join("not_a_dir");
    std::fs::write(&blocker, "").unwrap();
    let unwritable = cli(&[
        "run",
        "--scenario",
        &scenario,
        "--policy",
        "none",
        "--out",
        blocker.join("out").to_str().unwrap(),
    ]);
    assert_eq!(unwritable.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unwritable.stderr).contains("E_WRITE"));
}

#[test]
fn cli_sweep_writes_every_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "--seed",
        "9",
        "sweep",
        "--scenario",
        &reference_path(),
        "--var",
        "step_length",
        "--values",
        "40,80",
        "--policies",
        "stackelberg,random",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names.len(), 9);
    assert!(names.contains(&"metrics_step_length_40_stackelberg.csv".to_string()));
    assert!(names.contains(&"trajectories_step_length_80_random.csv".to_string()));
    let summary = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
    assert!(summary.contains("\"seed\": 9"));
}
