use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn xepecs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xepecs"))
        .args(args)
        .env_remove("XEPECS_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join(format!("config-{:016x}.json", fnv1a(body)));
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

#[test]
fn entropy_sweep_has_181_rows_peaking_at_90() {
    let (header, rows) = parse_csv(&stdout(&xepecs(&["entropy", "--theta", "0:180:1"])));
    assert_eq!(header, ["theta_deg", "entropy_bits"]);
    assert_eq!(rows.len(), 181);
    let peak = rows.iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert_eq!(peak[0], 90.0);
    assert!((peak[1] - 1.0).abs() < 1e-10);
    assert!(rows[0][1].abs() < 1e-10 && rows[180][1].abs() < 1e-10);
    assert!((rows[45][1] - 0.60088).abs() < 1e-4);
}

#[test]
fn entropy_defaults_to_full_sweep() {
    let (_, rows) = parse_csv(&stdout(&xepecs(&["entropy"])));
    assert_eq!(rows.len(), 181);
}

#[test]
fn rho_json_has_the_equatorial_pattern() {
    let doc: Value = serde_json::from_str(&stdout(&xepecs(&["rho", "--theta", "90", "--phi", "0", "--format", "json"]))).unwrap();
    assert_eq!(doc["basis"], serde_json::json!(["U1", "U2", "D1", "D2"]));
    let m = doc["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 4);
    let mut expected = [[(0.0, 0.0); 4]; 4];
    expected[1][1] = (0.5, 0.0);
    expected[2][2] = (0.5, 0.0);
    expected[1][2] = (0.0, -0.5);
    expected[2][1] = (0.0, 0.5);
    for (i, row) in m.iter().enumerate() {
        let row = row.as_array().unwrap();
        assert_eq!(row.len(), 4);
        for (j, z) in row.iter().enumerate() {
            let (re, im) = (z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap());
            assert!((re - expected[i][j].0).abs() < 1e-10 && (im - expected[i][j].1).abs() < 1e-10, "({i},{j})");
        }
    }
}

#[test]
fn rho_csv_flattening() {
    let text = stdout(&xepecs(&["rho"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,col,re,im"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(&rows[6][..2], ["U2", "D1"]);
    assert!((rows[6][3].parse::<f64>().unwrap() + 0.5).abs() < 1e-10);
}

fn local_maxima(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.windows(3).filter(|w| w[1][1] > w[0][1] && w[1][1] > w[2][1]).map(|w| w[1][0]).collect()
}

#[test]
fn xps_j1_peaks_coincide_for_both_spins() {
    // A narrow core-hole width resolves the J=0 line from the upper J=1 line.
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), r#"{"Gamma_1s": 0.01}"#);
    let (hu, up) = parse_csv(&stdout(&xepecs(&["xps", "--spin", "up", "--config", &config])));
    let (hd, down) = parse_csv(&stdout(&xepecs(&["xps", "--spin", "down", "--config", &config])));
    assert_eq!(hu, ["kinetic_energy_eV", "intensity_up"]);
    assert_eq!(hd, ["kinetic_energy_eV", "intensity_down"]);
    let (pu, pd) = (local_maxima(&up), local_maxima(&down));
    assert_eq!(pd.len(), 2, "down spin shows the two J=1 lines only: {pd:?}");
    assert_eq!(pu.len(), 3, "up spin adds the J=0 line: {pu:?}");
    for p in &pd {
        assert!(pu.contains(p), "J=1 peak at {p} missing from up-spin spectrum {pu:?}");
    }
}

#[test]
fn xps_without_spin_writes_both_columns() {
    let (header, rows) = parse_csv(&stdout(&xepecs(&["xps", "--grid", "6:7:0.1"])));
    assert_eq!(header, ["kinetic_energy_eV", "intensity_up", "intensity_down"]);
    assert_eq!(rows.len(), 11);
}

#[test]
fn xepecs_schema_and_equatorial_overlap() {
    let (header, rows) = parse_csv(&stdout(&xepecs(&["xepecs", "--theta", "90"])));
    assert_eq!(header, ["emission_energy_eV", "I_U1", "I_U2", "I_D1", "I_D2"]);
    assert_eq!(rows.len(), 1201);
    for r in &rows {
        assert!((r[2] - r[3]).abs() <= 1e-10 * r[2].abs().max(1e-300));
        assert!(r[1].abs() < 1e-20 && r[4].abs() < 1e-20);
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["entropy"],
        vec!["rho", "--format", "json", "--theta", "33", "--phi", "12"],
        vec!["xepecs", "--theta", "45", "--format", "json"],
        vec!["xps"],
        vec!["entropy", "--format", "svg"],
    ] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        for path in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            stdout(&xepecs(&full));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn config_errors_exit_with_2_and_name_the_field() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["rho".into(), "--config".into(), write_config(dir.path(), r#"{"zeta": "high"}"#)], "zeta"),
        (vec!["rho".into(), "--config".into(), write_config(dir.path(), r#"{"Gamma_1s": -1}"#)], "Gamma_1s"),
        (vec!["rho".into(), "--config".into(), write_config(dir.path(), r#"{"colour": 1}"#)], "colour"),
        (vec!["rho".into(), "--theta".into(), "200".into()], "theta"),
        (vec!["rho".into(), "--beta1".into(), "0".into(), "--beta2".into(), "180".into()], "beta"),
        (vec!["rho".into(), "--epsilon".into(), "soon".into()], "epsilon"),
        (vec!["rho".into(), "--format".into(), "svg".into()], "format"),
        (vec!["entropy".into(), "--theta".into(), "90:0:1".into()], "theta"),
        (vec!["xps".into(), "--grid".into(), "5:8:0".into()], "grid"),
        (vec!["xepecs".into(), "--theta".into(), "0:10:1".into()], "theta"),
        (vec!["rho".into(), "--config".into(), dir.path().join("missing.json").to_str().unwrap().into()], "config"),
    ];
    for (args, field) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = xepecs(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{args:?}: {err}");
    }
}

#[test]
fn config_file_from_environment() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), r#"{"theta_deg": 0, "epsilon": 6.0}"#);
    let with_env = Command::new(env!("CARGO_BIN_EXE_xepecs")).arg("rho").env("XEPECS_CONFIG", &config).output().unwrap();
    let with_flag = xepecs(&["rho", "--config", &config]);
    assert_eq!(stdout(&with_env), stdout(&with_flag));
    assert_ne!(stdout(&with_env), stdout(&xepecs(&["rho"])));

    let bad = write_config(dir.path(), r#"{"gamma": "x"}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_xepecs")).arg("rho").env("XEPECS_CONFIG", &bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_defaults_match_no_config() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"G": 0.3, "zeta": 0.1, "eps_s": -13.6, "eps_p": -5.0, "Omega": 20.0, "Gamma_1s": 0.5, "gamma": 0.4,
            "theta_deg": 90, "phi_deg": 0, "beta1_deg": 90, "beta2_deg": 180, "epsilon": "auto"}"#,
    );
    for cmd in ["xps", "xepecs", "rho"] {
        assert_eq!(stdout(&xepecs(&[cmd, "--config", &config])), stdout(&xepecs(&[cmd])), "{cmd}");
    }
}
