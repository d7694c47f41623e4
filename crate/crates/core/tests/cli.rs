mod common;

use std::collections::HashMap;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_graphene-casimir");

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let out = Command::new(BIN).args(args).env_remove("RUST_LOG").output().unwrap();
    Outcome {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write_config(dir: &Path, json: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_owned()
}

/// Rows of a CSV table keyed by column name; checks the schema line.
fn parse_csv(text: &str, command: &str) -> Vec<HashMap<String, String>> {
    let (schema, body) = text.split_once('\n').unwrap();
    assert_eq!(schema, format!("# graphene-casimir schema=1 command={command}"));
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(str::to_owned).collect();
    r.records()
        .map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(str::to_owned)).collect())
        .collect()
}

fn num(row: &HashMap<String, String>, col: &str) -> f64 {
    row[col].parse().unwrap_or_else(|_| panic!("{col}: {:?}", row[col]))
}

fn error_kind(stderr: &str) -> String {
    let line = stderr.lines().rev().find(|l| l.contains("\"error\"")).unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn configuration_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"temperature": 300}"#);
    let o = run(&["pressure", "--config", &cfg]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    assert_eq!(error_kind(&o.stderr), "config");
    assert!(o.stdout.is_empty());

    let o = run(&["pressure", "--threads", "0"]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    let o = run(&["pressure", "--temperature", "-1"]);
    assert_eq!(o.code, 2, "{}", o.stderr);
}

#[test]
fn io_errors_exit_with_code_4() {
    let o = run(&["pressure", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.code, 4, "{}", o.stderr);
    assert_eq!(error_kind(&o.stderr), "io");
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"points": []}"#);
    let o = run(&["permittivity", "--config", &cfg, "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.code, 4, "{}", o.stderr);
}

#[test]
fn empty_point_list_gives_header_only() {
    let o = run(&["permittivity"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 2, "{}", o.stdout);
    assert!(lines[1].starts_with("axis,q_per_m,omega_or_xi_rad_s,l,region,re_eps_L"));
}

#[test]
fn permittivity_dump_labels_regions_and_is_real_on_imaginary_axis() {
    let dir = tempfile::tempdir().unwrap();
    let w = 1e14;
    let points = [
        (0.5 * w / common::C, "propagating"),
        (10.0 * w / common::C, "plasmonic"),
        (2.0 * w / common::VF, "deep_evanescent"),
    ];
    let mut specs: Vec<String> = points
        .iter()
        .map(|(q, _)| format!(r#"{{"axis": "real", "q_per_m": {q:e}, "omega_rad_s": {w:e}}}"#))
        .collect();
    specs.extend((0..3).map(|l| format!(r#"{{"axis": "imaginary", "q_per_m": 1e7, "l": {l}}}"#)));
    let cfg = write_config(dir.path(), &format!(r#"{{"points": [{}]}}"#, specs.join(",")));

    let o = run(&["permittivity", "--config", &cfg]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = parse_csv(&o.stdout, "permittivity");
    assert_eq!(rows.len(), 6);
    for (row, (_, region)) in rows.iter().zip(points) {
        assert_eq!(row["axis"], "real");
        assert_eq!(row["region"], region);
        assert!(num(row, "im_eps_L") >= 0.0 && num(row, "im_eps_Tr") >= 0.0);
    }
    for (l, row) in rows[3..].iter().enumerate() {
        assert_eq!(row["axis"], "imaginary");
        assert_eq!(row["l"], l.to_string());
        assert!(row["region"].is_empty());
        assert!(num(row, "im_eps_L").abs() <= 1e-10 * (num(row, "re_eps_L") - 1.0).abs());
    }

    let j = run(&["permittivity", "--config", &cfg, "--format", "json"]);
    assert_eq!(j.code, 0, "{}", j.stderr);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["command"], "permittivity");
    for (row, jrow) in rows.iter().zip(v["rows"].as_array().unwrap()) {
        assert_eq!(num(row, "re_eps_L"), jrow["re_eps_L"].as_f64().unwrap());
    }
}

#[test]
fn reflection_dump_stays_in_physical_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"points": [{"axis": "real", "q_per_m": 1e5, "omega_rad_s": 1e14},
                       {"axis": "imaginary", "q_per_m": 1e7, "l": 1}]}"#,
    );
    let o = run(&["reflection", "--config", &cfg]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = parse_csv(&o.stdout, "reflection");
    let r = &rows[0];
    let mag = |re: &str, im: &str| num(r, re).hypot(num(r, im));
    assert!(mag("re_r_TM", "im_r_TM") <= 1.0 && mag("re_r_TE", "im_r_TE") <= 1.0);
    let r = &rows[1];
    assert!((0.0..1.0).contains(&num(r, "re_r_TM")) && (-1.0..=0.0).contains(&num(r, "re_r_TE")));
}

#[test]
fn pressure_output_is_deterministic_and_reports_wall_time() {
    let args = ["pressure", "--separation", "1e-6"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let rows = parse_csv(&a.stdout, "pressure");
    let r = &rows[0];
    let im = -common::KB * 300.0 * 1.202_056_903_159_594_3 / (4.0 * std::f64::consts::PI * 1e-18);
    assert!((num(r, "P_IM_Pa") / im - 1.0).abs() < 1e-14);
    assert_eq!(num(r, "P_total_Pa"), num(r, "P_TM_Pa") + num(r, "P_TE_Pa"));
    assert!(num(r, "P_TM_Pa") < 0.0 && num(r, "P_TE_Pa") < 0.0);
    let timing: serde_json::Value = serde_json::from_str(a.stderr.lines().last().unwrap()).unwrap();
    assert_eq!(timing["command"], "pressure");
    assert!(timing["wall_time_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_writes_rows_and_flags_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"grid": {"separations_m": [5e-7, 1e-6, 2e-6]}}"#);
    let o = run(&["sweep", "--no-split", "--config", &cfg]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = parse_csv(&o.stdout, "sweep");
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["status"] == "ok" && r["P_TM_evan_Pa"].is_empty()));
    assert!(num(&rows[0], "P_total_Pa") < num(&rows[2], "P_total_Pa"));

    let bad = write_config(
        dir.path(),
        r#"{"grid": {"separations_m": [5e-7, 1e-6]}, "summation": {"l_max_cap": 2}, "split": false}"#,
    );
    let out = dir.path().join("sweep.csv");
    let o = run(&["sweep", "--config", &bad, "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 3, "{}", o.stderr);
    assert_eq!(error_kind(&o.stderr), "numeric");
    let rows = parse_csv(&std::fs::read_to_string(&out).unwrap(), "sweep");
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["status"].starts_with("error") && r["P_TM_Pa"].is_empty()));

    let unordered = write_config(dir.path(), r#"{"grid": {"separations_m": [1e-6, 5e-7]}}"#);
    assert_eq!(run(&["sweep", "--config", &unordered]).code, 2);
}
