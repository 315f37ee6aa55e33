//! End-to-end tests of the `harq-fso` binary: output schemas, exit codes,
//! determinism, and the figure-recipe behaviors.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_harq-fso"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("harq-fso-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn op_curve_default_schema_and_bounds() {
    let out = run(&["op-curve"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        header,
        [
            "gamma_bar_db",
            "op_cc_exact",
            "op_cc_asym",
            "op_ir_exact",
            "op_ir_asym"
        ]
    );
    assert_eq!(rows.len(), 13, "20..80 dB step 5 is 13 points");
    for row in &rows {
        for cell in &row[1..] {
            let v: f64 = cell.parse().unwrap();
            assert!(v.is_finite() && (0.0..=1.0).contains(&v), "cell {cell}");
        }
    }
}

#[test]
fn op_curve_more_rounds_never_hurt() {
    let curve = |rounds: usize| -> Vec<f64> {
        let powers: Vec<String> = vec!["0.35".into(); rounds];
        let cfg = write_config(
            &format!("rounds{rounds}.json"),
            &format!(
                r#"{{"schema":1,"harq":{{"max_rounds":{rounds}}},
                    "power":{{"allocation":{{"explicit":[{}]}}}}}}"#,
                powers.join(",")
            ),
        );
        let out = run(&["op-curve", "--config", cfg.to_str().unwrap()]);
        assert!(out.status.success());
        let (_, rows) = parse_csv(&stdout(&out));
        rows.iter().map(|r| r[1].parse().unwrap()).collect()
    };
    let j1 = curve(1);
    let j4 = curve(4);
    let j10 = curve(10);
    for i in 0..j1.len() {
        assert!(j4[i] <= j1[i] + 1e-12, "J=4 above J=1 at row {i}");
        assert!(j10[i] <= j4[i] + 1e-12, "J=10 above J=4 at row {i}");
    }
}

#[test]
fn op_curve_mc_columns_track_the_exact_curve() {
    let cfg = write_config(
        "mc.json",
        r#"{"schema":1,
            "power":{"allocation":{"explicit":[0.35,0.35,0.35,0.35]}},
            "snr_sweep":{"start_db":40.0,"stop_db":60.0,"step_db":10.0},
            "sim":{"enabled":true,"packets":400000,"seed":7,"chunks":16}}"#,
    );
    let out = run(&["op-curve", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header.len(), 9, "MC adds four columns");
    for row in rows {
        let exact: f64 = row[1].parse().unwrap();
        let mc: f64 = row[5].parse().unwrap();
        let se: f64 = row[6].parse().unwrap();
        assert!(
            (mc - exact).abs() <= 3.0 * se.max(1e-9),
            "MC {mc} vs exact {exact} (se {se})"
        );
    }
}

#[test]
fn op_curve_output_is_byte_identical_across_runs() {
    let cfg = write_config(
        "det.json",
        r#"{"schema":1,
            "snr_sweep":{"start_db":40.0,"stop_db":50.0,"step_db":5.0},
            "sim":{"enabled":true,"packets":100000,"seed":11,"chunks":8}}"#,
    );
    let a = run(&["op-curve", "--config", cfg.to_str().unwrap()]);
    let b = run(&["op-curve", "--config", cfg.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn optimize_dominates_equal_split_and_handles_single_round() {
    let cfg = write_config(
        "opt.json",
        r#"{"schema":1,
            "harq":{"scheme":"cc","max_rounds":4},
            "power":{"allocation":"optimized"},
            "gamma_bar_db":60.0,
            "rate_grid":{"start":0.5,"stop":3.0,"step":0.5}}"#,
    );
    let out = run(&["optimize", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header[0], "rate");
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let opt: f64 = row[1].parse().unwrap();
        let eq: f64 = row[2].parse().unwrap();
        assert!(
            opt <= eq * (1.0 + 1e-9),
            "optimized {opt} above equal split {eq}"
        );
        assert_eq!(row.last().unwrap(), "true");
    }

    let single = write_config(
        "opt1.json",
        r#"{"schema":1,
            "harq":{"scheme":"ir","max_rounds":1},
            "power":{"allocation":"optimized"},
            "gamma_bar_db":60.0,
            "rate_grid":{"start":1.0,"stop":2.0,"step":1.0}}"#,
    );
    let out = run(&["optimize", "--config", single.to_str().unwrap()]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&stdout(&out));
    for row in rows {
        assert_eq!(row[3], "0.2", "single-round power must be min(P0, Pmax)");
    }
}

#[test]
fn throughput_vanishes_at_rate_extremes_and_reports_best() {
    let cfg = write_config(
        "thr.json",
        r#"{"schema":1,
            "harq":{"scheme":"ir","max_rounds":4},
            "power":{"allocation":"optimized"},
            "gamma_bar_db":30.0,
            "rate_grid":{"start":0.05,"stop":6.0,"step":0.35}}"#,
    );
    let out = run(&["throughput", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["rate", "omega_optimized", "omega_equal_split"]);
    let best_row = rows.last().unwrap();
    assert_eq!(best_row[0], "best");
    let best: f64 = best_row[2].parse().unwrap();
    let first: f64 = rows[0][1].parse().unwrap();
    let last: f64 = rows[rows.len() - 2][1].parse().unwrap();
    assert!(best > 0.0);
    assert!(
        first <= 0.05 + 1e-12,
        "omega is capped by the rate near zero"
    );
    assert!(last < 0.5 * best, "omega must fall off at large rates");
    // the best row matches the grid maximum
    let max_omega = rows[..rows.len() - 1]
        .iter()
        .map(|r| r[1].parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((best - max_omega).abs() < 1e-12);
}

#[test]
fn json_format_is_valid_json() {
    let out = run(&["op-curve", "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 13);
}

#[test]
fn validate_passes_at_desk_scale_and_is_deterministic() {
    let cfg = write_config(
        "val.json",
        r#"{"schema":1,
            "power":{"allocation":{"explicit":[0.35,0.35,0.35,0.35]}},
            "gamma_bar_db":60.0,
            "sim":{"packets":300000,"seed":5,"chunks":16}}"#,
    );
    let a = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert!(a.status.success(), "validate failed:\n{}", stdout(&a));
    assert!(stdout(&a).lines().all(|l| !l.starts_with("FAIL")));
    let b = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout, "same seed must give identical reports");
}

#[test]
fn validate_detects_a_corrupted_asymptotic_constant() {
    let cfg = write_config(
        "val_bad.json",
        r#"{"schema":1,
            "power":{"allocation":{"explicit":[0.35,0.35,0.35,0.35]}},
            "gamma_bar_db":60.0,
            "sim":{"packets":100000,"seed":5,"chunks":16}}"#,
    );
    let out = run(&[
        "validate",
        "--config",
        cfg.to_str().unwrap(),
        "--distort-psi",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(
        text.contains("FAIL asymptotic_consistency_95db"),
        "report:\n{text}"
    );
}

#[test]
fn config_errors_exit_with_code_2() {
    // missing file
    let out = run(&["op-curve", "--config", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown field
    let cfg = write_config("bad_field.json", r#"{"schema":1,"nonsense":true}"#);
    let out = run(&["op-curve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nonsense"), "stderr names the field: {err}");

    // invalid value
    let cfg = write_config("bad_rate.json", r#"{"schema":1,"harq":{"rate":-2.0}}"#);
    let out = run(&["op-curve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("harq.rate"), "stderr names the field: {err}");

    // clap-level parse error
    let out = run(&["op-curve", "--format", "yaml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_and_packet_flags_override_the_config() {
    let cfg = write_config(
        "ovr.json",
        r#"{"schema":1,
            "snr_sweep":{"start_db":50.0,"stop_db":50.0,"step_db":5.0},
            "sim":{"enabled":true,"packets":50000,"seed":1,"chunks":4}}"#,
    );
    let a = run(&["op-curve", "--config", cfg.to_str().unwrap(), "--seed", "2"]);
    let b = run(&["op-curve", "--config", cfg.to_str().unwrap(), "--seed", "3"]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout, "different seeds change the MC columns");
    let c = run(&[
        "op-curve",
        "--config",
        cfg.to_str().unwrap(),
        "--packets",
        "1000",
        "--seed",
        "2",
    ]);
    assert!(c.status.success());
    assert_ne!(a.stdout, c.stdout);
}
