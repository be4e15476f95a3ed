use std::path::Path;
use std::process::{Command, Output};

const TABLE1: &str = include_str!("../../core/tests/golden/table1.csv");
const TABLE2: &str = include_str!("../../core/tests/golden/table2.csv");

fn cyclerep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclerep"))
        .args(args)
        .env_remove("CYCLEREP_SEED_TABLE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CUBIC: &str = r#"{
  "p": [{"du":0,"dv":1,"c":"1/1"},{"du":1,"dv":0,"c":"1/4"},{"du":3,"dv":0,"c":"-1/1"},{"du":1,"dv":2,"c":"-1/1"}],
  "q": [{"du":1,"dv":0,"c":"-1/1"},{"du":0,"dv":1,"c":"1/4"},{"du":2,"dv":1,"c":"-1/1"},{"du":0,"dv":3,"c":"-1/1"}]
}"#;

#[test]
fn tables_match_golden() {
    let o = cyclerep(&["bounds", "table1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), TABLE1);
    let o = cyclerep(&["bounds", "table2"]);
    assert_eq!(stdout(&o), TABLE2);
}

#[test]
fn table_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t2.csv");
    let o = cyclerep(&["bounds", "table2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(path).unwrap(), TABLE2);
}

#[test]
fn query_prints_chain() {
    let o = cyclerep(&["bounds", "query", "39"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("H(39) ≥ 4·H(19) ≥ 4·503 = 2012"));
    let o = cyclerep(&["bounds", "query", "14", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 252);
    assert_eq!(v["witness"], serde_json::json!([4, 3]));
}

#[test]
fn query_without_witness_exits_5() {
    let o = cyclerep(&["bounds", "query", "12"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn ceiling_is_exact() {
    let o = cyclerep(&["bounds", "ceiling", "5", "4", "24"]);
    assert_eq!(stdout(&o), "k0,n0,N,ceiling\n5,4,24,125\n");
    let o = cyclerep(&["bounds", "ceiling", "1", "3", "12"]);
    assert!(stdout(&o).ends_with(",169/16\n"));
}

#[test]
fn seed_table_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seeds.json");
    std::fs::write(&path, r#"[{"n": 3, "value": 13, "source": "custom"}]"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cyclerep"))
        .args(["bounds", "query", "7"])
        .env("CYCLEREP_SEED_TABLE", &path)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("= 52"));
}

#[test]
fn pullback_writes_verified_field() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("x.json");
    let out = dir.path().join("y.json");
    std::fs::write(&field, CUBIC).unwrap();
    let o = cyclerep(&[
        "pullback",
        "--field",
        field.to_str().unwrap(),
        "--m",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["deg_Y"], 11);
    assert_eq!(v["m"], 3);
}

#[test]
fn pullback_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let good = dir.path().join("x.json");
    let out = dir.path().join("y.json");
    std::fs::write(&bad, "{\"p\": [").unwrap();
    std::fs::write(&good, CUBIC).unwrap();
    let run = |f: &Path, m: &str| {
        cyclerep(&[
            "pullback",
            "--field",
            f.to_str().unwrap(),
            "--m",
            m,
            "--out",
            out.to_str().unwrap(),
        ])
        .status
        .code()
    };
    assert_eq!(run(&bad, "3"), Some(2));
    assert_eq!(run(&good, "1"), Some(3));
}

#[test]
fn example_emits_cycles_and_figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex");
    let o = cyclerep(&[
        "example",
        "--m",
        "3",
        "--rho",
        "1/2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("cycles.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    for name in [
        "phase_portrait.svg",
        "branch_grid.svg",
        "residuals.csv",
        "pullback.json",
        "cycles.json",
    ] {
        assert!(out.join(name).exists(), "{name}");
    }
    let grid = std::fs::read_to_string(out.join("branch_grid.svg")).unwrap();
    assert!(grid.contains(r#"viewBox="0 0 1000 1000""#));
    assert_eq!(grid.matches("<polyline").count(), 9);
}

#[test]
fn example_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        assert!(cyclerep(&[
            "example",
            "--m",
            "4",
            "--rho",
            "0.3",
            "--out",
            d.to_str().unwrap()
        ])
        .status
        .success());
    }
    for name in [
        "cycles.csv",
        "cycles.json",
        "branch_grid.svg",
        "residuals.csv",
    ] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let csv = std::fs::read_to_string(a.join("cycles.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn example_rejects_bad_rho() {
    let dir = tempfile::tempdir().unwrap();
    let o = cyclerep(&[
        "example",
        "--rho",
        "3/2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = cyclerep(&[
        "example",
        "--rho",
        "abc",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn branches_from_file_match_chebyshev() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("t3.json");
    std::fs::write(&poly, r#"{"coeffs": ["0", "-3", "0", "4"]}"#).unwrap();
    let from_file: serde_json::Value =
        serde_json::from_slice(&cyclerep(&["branches", "--poly", poly.to_str().unwrap()]).stdout)
            .unwrap();
    let cheb: serde_json::Value =
        serde_json::from_slice(&cyclerep(&["branches", "--cheb", "3"]).stdout).unwrap();
    assert_eq!(from_file["count"], 3);
    assert_eq!(cheb["count"], 3);
    for k in 0..3 {
        for key in ["lo", "hi"] {
            let a = from_file["intervals"][k][key].as_f64().unwrap();
            let b = cheb["intervals"][k][key].as_f64().unwrap();
            assert!((a - b).abs() < 1e-9, "{k} {key}");
        }
        assert_eq!(
            from_file["intervals"][k]["dir"],
            cheb["intervals"][k]["dir"]
        );
    }
}

#[test]
fn branches_cheb6_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("t6.svg");
    let o = cyclerep(&["branches", "--cheb", "6", "--svg", svg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 6);
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn degenerate_critical_warns_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("x3.json");
    std::fs::write(&poly, r#"{"coeffs": ["0", "0", "0", "1"]}"#).unwrap();
    let o = cyclerep(&["branches", "--poly", poly.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degenerate_critical"], true);
    assert_eq!(v["count"], 1);
}
