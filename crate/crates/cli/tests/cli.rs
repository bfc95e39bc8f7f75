use std::process::{Command, Output};

fn hulthen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hulthen")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hulthen(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn spectrum_json_lists_both_branches() {
    let s = stdout(&["spectrum", "--variant", "pt", "--m", "1", "--q", "1", "--alpha", "2", "--V0", "2.5", "--n", "0..3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 8);
    let n0: Vec<f64> = results
        .iter()
        .filter(|r| r["n"] == 0)
        .map(|r| r["E"]["re"].as_f64().unwrap())
        .collect();
    let mut n0 = n0;
    n0.sort_by(f64::total_cmp);
    assert!((n0[0] - 1.10566243).abs() < 1e-8 && (n0[1] - 1.39433757).abs() < 1e-8, "{n0:?}");
    assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["provenance"]["command_line"].as_str().unwrap().starts_with("hulthen spectrum"));
}

#[test]
fn scan_window_flips_at_endpoints() {
    // α window for n = 0 at V0 = 2.5 is [1, 4].
    let s = stdout(&["scan", "--variant", "pt", "--vary", "alpha", "--from", "0.5", "--to", "4.5", "--steps", "9", "--n", "0", "--q", "1", "--V0", "2.5"]);
    let rows = data_rows(&s);
    assert_eq!(rows.len(), 18);
    for r in &rows {
        let alpha: f64 = r[0].parse().unwrap();
        let outside = r[6] == "true";
        assert_eq!(outside, !(1.0..=4.0).contains(&alpha), "{r:?}");
        if alpha == 1.0 || alpha == 4.0 {
            let (re, im): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
            assert!((re - 1.25).abs() < 1e-10 && im.abs() < 1e-10, "{r:?}");
        }
    }
}

#[test]
fn scan_rows_are_sorted() {
    let s = stdout(&["scan", "--vary", "V0", "--from", "6", "--to", "2", "--steps", "50", "--n", "0,1", "--q", "1", "--alpha", "1"]);
    let rows = data_rows(&s);
    assert_eq!(rows.len(), 50 * 2 * 2);
    let keys: Vec<(f64, u32, String)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].clone())).collect();
    for w in keys.windows(2) {
        let ord = w[0].0.total_cmp(&w[1].0).then(w[0].1.cmp(&w[1].1)).then(w[0].2.cmp(&w[1].2).reverse());
        assert!(ord.is_le(), "{:?} {:?}", w[0], w[1]);
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let scan = ["scan", "--vary", "V0", "--from", "2", "--to", "6", "--steps", "200", "--n", "0..2", "--q", "1", "--alpha", "1"];
    assert_eq!(hulthen(&scan).stdout, hulthen(&scan).stdout);
    let spec = ["spectrum", "--variant", "ph", "--q", "2", "--alpha", "1.5", "--V0", "4", "--n", "0..3", "--format", "json"];
    assert_eq!(hulthen(&spec).stdout, hulthen(&spec).stdout);
}

#[test]
fn out_file_matches_stdout_and_omits_out_from_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let args = ["spectrum", "--n", "0", "--format", "json"];
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(hulthen(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&args));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    // q = 1 puts a potential pole inside the box.
    let out = hulthen(&["oracle", "--variant", "real", "--q", "1", "--cells", "50", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["spectrum", "--frobnicate"],
        vec!["scan", "--vary", "alpha", "--from", "1", "--to", "2", "--steps", "1"],
        vec!["spectrum", "--variant", "exp"],
        vec!["verify", "--tol", "nope=1"],
        vec![],
    ] {
        assert_eq!(hulthen(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(hulthen(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let ok = hulthen(&["verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let report = String::from_utf8(ok.stdout).unwrap();
    for name in ["closed_vs_root", "kummer", "fd_order", "pt_symmetry"] {
        assert!(report.contains(name));
    }
    let bad = hulthen(&["verify", "--tol", "kummer=0", "--format", "json"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    let k = v["results"].as_array().unwrap().iter().find(|r| r["check"] == "kummer").unwrap();
    assert_eq!(k["passed"], false);
}

#[test]
fn wavefunction_exp_needs_energy() {
    assert_eq!(hulthen(&["wavefunction", "--variant", "exp"]).status.code(), Some(2));
    let s = stdout(&["wavefunction", "--variant", "exp", "--energy", "0.55", "--x-min", "0.1", "--x-max", "5", "--points", "5"]);
    let rows = data_rows(&s);
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.iter().all(|c| c.parse::<f64>().unwrap().is_finite())));
}
