use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use catlab_cli::args::Format;
use catlab_cli::output::Table;

fn catlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catlab"))
        .args(args)
        .env_remove("CATLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn table(args: &[&str]) -> Table {
    let out = catlab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Table::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn summary(t: &Table, key: &str) -> f64 {
    t.summary[key].as_f64().unwrap()
}

#[test]
fn coherent_baseline_row() {
    let t = table(&["metrics", "--z", "1", "--theta", "pi/4", "--m", "0"]);
    assert_eq!(t.rows.len(), 1);
    assert!(col(&t, "Q")[0].abs() < 1e-12);
    assert!((col(&t, "g2")[0] - 1.0).abs() < 1e-12);
    assert!((col(&t, "var_q")[0] - 0.5).abs() < 1e-12);
    assert!((col(&t, "var_p")[0] - 0.5).abs() < 1e-12);
    // m = 0: only the vacuum herald outcome, |<0|z sinθ>|²
    assert!((col(&t, "p_succ")[0] - (-0.5f64).exp()).abs() < 1e-10);
}

#[test]
fn lattice_rows_are_ordered() {
    let t = table(&["metrics", "--z", "1", "--z", "0.5,0.2", "--theta", "pi/6,pi/3", "--m", "1,2"]);
    assert_eq!(t.rows.len(), 8);
    assert_eq!(col(&t, "z_re"), vec![1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 0.5, 0.5]);
    assert_eq!(col(&t, "m"), vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
    assert_eq!(col(&t, "theta")[2], PI / 3.0);
}

#[test]
fn oracle_audit_passes_and_reports() {
    let t = table(&["metrics", "--z", "1", "--theta", "pi/3", "--m", "2", "--oracle"]);
    assert!(summary(&t, "oracle_max_deviation") < 1e-7);
    let t = table(&["pnd", "--z", "1.3,0.4", "--theta", "pi/5", "--m", "3", "--oracle"]);
    assert!(summary(&t, "oracle_max_deviation") < 1e-7);
}

#[test]
fn single_photon_probabilities() {
    let p1 = |z: &str, theta: &str, m: &str| col(&table(&["pnd", "--z", z, "--theta", theta, "--m", m]), "p_n")[1];
    assert!((p1("1", "pi/4", "3") - 0.57).abs() <= 0.005);
    assert!((p1("0.5", "pi/3", "3") - 0.77).abs() <= 0.005);
    assert!((p1("0.5", "pi/3", "2") - 0.61).abs() <= 0.005);
}

#[test]
fn pnd_of_coherent_state_is_poisson() {
    let t = table(&["pnd", "--z", "1", "--theta", "pi/3", "--m", "0"]);
    let mean = 0.25f64;
    let mut fact = 1.0;
    for (n, p) in col(&t, "p_n").into_iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        assert!((p - (-mean).exp() * mean.powi(n as i32) / fact).abs() < 1e-14);
    }
    assert!((summary(&t, "sum") - 1.0).abs() < 1e-8);
}

#[test]
fn table1_cells() {
    let t = table(&["table1"]);
    assert_eq!(t.rows.len(), 18);
    let cell = |m: f64, z: f64, theta: f64| {
        t.rows
            .iter()
            .find(|r| r[0] == m && r[1] == z && r[2] == theta)
            .map(|r| r[3])
            .unwrap()
    };
    assert!((cell(1.0, 1.0, PI / 5.0) - 0.023).abs() <= 0.01);
    assert!((cell(2.0, 2.0, PI / 4.0) - 0.271).abs() <= 0.01);
    assert!((cell(3.0, 1.0, PI / 4.0) - 0.188).abs() <= 0.01);
}

#[test]
fn wigner_grid_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let out = catlab(&[
        "wigner", "--z", "1", "--theta", "pi/5", "--m", "1", "--grid", "6,121", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("delta") && stdout.contains("min_w"));

    let text = std::fs::read_to_string(&path).unwrap();
    let t = Table::parse_csv(&text).unwrap();
    assert_eq!(t.columns, ["q", "p", "W"]);
    let (q, p, w) = (col(&t, "q"), col(&t, "p"), col(&t, "W"));
    let n_p = t.summary["grid"]["n_p"].as_u64().unwrap() as usize;
    // row-major, q outer
    assert_eq!(q[0], q[n_p - 1]);
    assert!(q[n_p] > q[0] && p[1] > p[0]);
    let dq = q[n_p] - q[0];
    let dp = p[1] - p[0];
    let integral: f64 = w.iter().sum::<f64>() * dq * dp;
    assert!((integral - 1.0).abs() < 5e-3);
    assert!(w.iter().all(|v| v.abs() <= 2.0 / PI + 1e-9));
    assert!(w.iter().any(|&v| v < 0.0));
}

#[test]
fn wigner_oracle_rejects_decohered_audit() {
    let out = catlab(&["wigner", "--kt", "0.1", "--oracle"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decohere_starts_at_the_undecohered_minimum() {
    let d = table(&["decohere", "--z", "1", "--theta", "pi/3", "--m", "1", "--kt", "0"]);
    let w = catlab(&["wigner", "--z", "1", "--theta", "pi/3", "--m", "1", "--grid", "4,41"]);
    let w = Table::parse_csv(&String::from_utf8(w.stdout).unwrap()).unwrap();
    assert!((col(&d, "min_w")[0] - summary(&w, "min_w")).abs() < 1e-12);
}

#[test]
fn decohere_curves_are_monotone() {
    for m in ["1", "2"] {
        let t = table(&["decohere", "--z", "1", "--theta", "pi/3", "--m", m, "--kt", "0,0.05,0.1,0.2,0.3"]);
        let mins = col(&t, "min_w");
        assert!(mins[0] < 0.0);
        assert!(mins.windows(2).all(|w| w[1] >= w[0]), "{mins:?}");
        let deltas = col(&t, "delta");
        assert!(deltas.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{deltas:?}");
        let kt_c = summary(&t, "kt_c");
        assert!(kt_c > 0.3 && kt_c < 0.35);
    }
}

#[test]
fn decohere_agrees_with_library_characteristic_time() {
    let t = table(&["decohere", "--z", "1", "--theta", "pi/4", "--m", "1", "--kt", "0"]);
    let p = catlab::CatalysisParams::real(1.0, PI / 4.0, 1).unwrap();
    assert_eq!(summary(&t, "kt_c"), catlab::wigner::characteristic_time(&p, 0.0).unwrap());
}

#[test]
fn squeeze_opt_single_photon_depth() {
    let t = table(&["squeeze-opt", "--z", "0.5", "--z", "2.5", "--m", "1"]);
    for db in col(&t, "db_best") {
        assert!((db + 1.249).abs() <= 0.005);
    }
}

#[test]
fn scan_finds_sub_poissonian_region() {
    let t = table(&["scan", "--metric", "q", "--z", "1", "--m", "1", "--points", "300"]);
    assert_eq!(t.rows.len(), 300);
    assert!(!t.summary["zero_crossings"].as_array().unwrap().is_empty());
    assert!(col(&t, "value").iter().any(|&v| v < 0.0));
}

#[test]
fn outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for format in [Format::Csv, Format::Json] {
        let name = if format == Format::Csv { "csv" } else { "json" };
        let path = dir.path().join(format!("m.{name}"));
        let out = catlab(&[
            "metrics", "--z", "1.2,-0.3", "--theta", "0.7,pi/6", "--m", "0,2", "--format", name, "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let text = std::fs::read_to_string(&path).unwrap();
        let t = Table::parse(&text, format).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.render(format), text);
    }
}

#[test]
fn json_mirrors_csv() {
    let csv = table(&["pnd", "--z", "1", "--m", "2"]);
    let out = catlab(&["pnd", "--z", "1", "--m", "2", "--format", "json"]);
    let json = Table::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(csv.columns, json.columns);
    assert_eq!(csv.rows, json.rows);
    assert_eq!(csv.summary, json.summary);
}

#[test]
fn repro_writes_named_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = catlab(&["repro", "table1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(Path::new(&dir.path().join("table1.csv")).exists());
}

#[test]
fn exit_codes() {
    assert_eq!(catlab(&["metrics", "--theta", "2"]).status.code(), Some(2));
    assert_eq!(catlab(&["metrics", "--theta", "pi/7"]).status.code(), Some(2));
    assert_eq!(catlab(&["metrics", "--z", "a,b"]).status.code(), Some(2));
    assert_eq!(catlab(&["metrics", "--z", "0", "--m", "0"]).status.code(), Some(2));
    assert_eq!(catlab(&["metrics", "--m", "40"]).status.code(), Some(2));
    assert_eq!(catlab(&["pnd", "--m", "1,2"]).status.code(), Some(2));
    assert_eq!(catlab(&["scan", "--metric", "nope"]).status.code(), Some(2));
    // the Fock simulation cannot hold |z = 2> in five levels
    let out = catlab(&["metrics", "--z", "2", "--n-trunc", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_max"));

    let out = Command::new(env!("CARGO_BIN_EXE_catlab"))
        .args(["metrics"])
        .env("CATLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_catlab"))
        .args(["metrics"])
        .env("CATLAB_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}
