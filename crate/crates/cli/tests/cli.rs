use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn peakwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peakwalk"))
        .args(args)
        .env_remove("PEAKWALK_TOL_CLUSTER")
        .env_remove("PEAKWALK_TOL_ENTRY")
        .env_remove("PEAKWALK_TOL_RECOG")
        .env_remove("PEAKWALK_TOL_PST")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn analyze_petersen() {
    let out = peakwalk(&[
        "analyze", "--graph", "petersen", "--matrix", "A", "--pair", "0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "Peak");
    assert_eq!(v["transfer"], "PeakOnly");
    assert_eq!(v["tau0_exact"], "pi");
    assert!((num(&v, "tau0") - PI).abs() < 1e-12);
    assert!((num(&v, "probability") - 64.0 / 225.0).abs() < 1e-9);
}

#[test]
fn analyze_g12_laplacian() {
    let out = peakwalk(&[
        "analyze", "--graph", "g12", "--matrix", "L", "--pair", "0,8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tau0_exact"], "pi/2");
    assert!((num(&v, "probability") - 4.0 / 9.0).abs() < 1e-9);
    assert_eq!(num(&v, "phase"), 0.0);
}

#[test]
fn analyze_k2_is_perfect() {
    let out = peakwalk(&["analyze", "--graph", "k2", "--matrix", "A", "--pair", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["transfer"], "PerfectST");
}

#[test]
fn analyze_exit_codes() {
    let out = peakwalk(&["analyze", "--graph", "path4", "--pair", "0,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "NoPeak");

    let out = peakwalk(&["analyze", "--graph", "c4neg"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "ZeroTransfer");

    for bad in [
        vec!["analyze", "--graph", "no-such-graph-or-file"],
        vec!["analyze", "--graph", "yn3"],
        vec!["analyze", "--graph", "path4", "--pair", "0;3"],
        vec!["analyze", "--graph", "path4", "--pair", "0,9"],
        vec!["analyze", "--graph", "petersen", "--matrix", "Q"],
        vec!["frobnicate"],
    ] {
        let out = peakwalk(&bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(out.stdout.is_empty(), "{bad:?}");
        assert!(!out.stderr.is_empty(), "{bad:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    let args = ["analyze", "--graph", "g11"];
    assert_eq!(peakwalk(&args).stdout, peakwalk(&args).stdout);
    let args = ["scan", "--enumerate", "5", "--workers", "3"];
    let a = peakwalk(&args).stdout;
    assert_eq!(
        a,
        peakwalk(&["scan", "--enumerate", "5", "--workers", "1"]).stdout
    );
}

#[test]
fn tolerance_env_vars() {
    // a loose PST tolerance still leaves K2 perfect; a negative entry
    // tolerance is a usage error
    let out = Command::new(env!("CARGO_BIN_EXE_peakwalk"))
        .args(["analyze", "--graph", "k2"])
        .env("PEAKWALK_TOL_PST", "0.5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_peakwalk"))
        .args(["analyze", "--graph", "k2"])
        .env("PEAKWALK_TOL_ENTRY", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_reads_files() {
    let dir = std::env::temp_dir().join(format!("peakwalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g6 = dir.join("k2.g6");
    std::fs::write(&g6, "A_\n").unwrap();
    let out = peakwalk(&["analyze", "--graph", g6.to_str().unwrap(), "--pair", "0,1"]);
    assert_eq!(json(&out)["transfer"], "PerfectST");

    let js = dir.join("c4.json");
    std::fs::write(
        &js,
        r#"{"n": 4, "edges": [[0, 1, -1], [1, 2, 1], [2, 3, 1], [0, 3, 1]], "pair": [1, 3]}"#,
    )
    .unwrap();
    let out = peakwalk(&["analyze", "--graph", js.to_str().unwrap()]);
    assert_eq!(json(&out)["verdict"], "ZeroTransfer");

    let bad = dir.join("bad.g6");
    std::fs::write(&bad, "A_\n~~\n").unwrap();
    let out = peakwalk(&["scan", "--graph6", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).ok();
}

fn csv_rows(out: &Output) -> Vec<(f64, f64)> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,probability"));
    lines
        .map(|l| {
            let (t, p) = l.split_once(',').unwrap();
            (t.parse().unwrap(), p.parse().unwrap())
        })
        .collect()
}

#[test]
fn simulate_k2() {
    let out = peakwalk(&[
        "simulate", "--graph", "k2", "--tmax", "3.2", "--steps", "3201",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3201);
    let (t, p) = rows
        .iter()
        .cloned()
        .fold((0.0, -1.0), |b, r| if r.1 > b.1 { r } else { b });
    assert!((p - 1.0).abs() < 1e-6);
    assert!((t - PI / 2.0).abs() < 2e-3);
}

#[test]
fn simulate_g11_and_path9() {
    let out = peakwalk(&[
        "simulate", "--graph", "g11", "--pair", "2,9", "--tmax", "6.3", "--steps", "6301",
    ]);
    let rows = csv_rows(&out);
    let (t, p) = rows
        .iter()
        .cloned()
        .fold((0.0, -1.0), |b, r| if r.1 > b.1 { r } else { b });
    assert!((p - 0.64).abs() < 1e-5, "{p}");
    assert!((t - PI).abs() < 2e-3);

    let dir = std::env::temp_dir().join(format!("peakwalk-sim-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p9.csv");
    let out = peakwalk(&[
        "simulate",
        "--graph",
        "path9",
        "--pair",
        "0,8",
        "--tmax",
        "100",
        "--steps",
        "10000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let max = text
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').unwrap().1.parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max < 0.95, "{max}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn family_commands() {
    let v = json(&peakwalk(&["family", "--name", "xn", "--n", "4"]));
    assert!((num(&v["facts"], "bound") - 128.0 / 140.0).abs() < 1e-12);
    assert_eq!(v["engine_match"], true);

    let v = json(&peakwalk(&["family", "--name", "gn", "--n", "4"]));
    assert!((num(&v["facts"], "tau0") - PI / 3.0).abs() < 1e-12);
    assert_eq!(v["engine"]["tau0_exact"], "pi/3");
    assert_eq!(v["engine_match"], true);

    let v = json(&peakwalk(&["family", "--name", "xn", "--n", "1"]));
    assert_eq!(num(&v["facts"], "bound"), 1.0);
    assert_eq!(v["engine_match"], true);

    assert_eq!(
        peakwalk(&["family", "--name", "xn", "--n", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn scan_tables() {
    let out = peakwalk(&["scan", "--enumerate", "4", "--matrix", "both"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "n\ttotal\tpst_A\tpeak_A\tpst_L\tpeak_L\tfailures\n4\t6\t1\t4\t2\t5\t0\n"
    );
    let out = peakwalk(&["scan", "--enumerate", "6", "--strict"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("6\t112\t1\t20\t0\t50\t0\n"), "{text}");
    let out = peakwalk(&["scan", "--trees", "9", "--matrix", "A"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("9\t47\t0\t6\t0\t0\t0\n"), "{text}");
    assert_eq!(peakwalk(&["scan"]).status.code(), Some(2));
    assert_eq!(
        peakwalk(&["scan", "--trees", "3", "--enumerate", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn witness_lines() {
    let out = peakwalk(&["witness", "--trees", "10", "--matrix", "L"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut graphs: Vec<String> = text
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            assert_eq!(v["matrix"], "L");
            assert_eq!(v["result"]["verdict"], "Peak");
            v["graph6"].as_str().unwrap().to_string()
        })
        .collect();
    graphs.dedup();
    assert_eq!(graphs.len(), 2);

    let out = peakwalk(&["witness", "--enumerate", "2"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["graph6"], "A_");
    assert!((v["result"]["bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}
