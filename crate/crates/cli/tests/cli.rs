use std::process::{Command, Output};

fn extremal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extremal")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dot_export_of_a_small_window() {
    let o = extremal(&["crystal", "gen", "--n", "3", "--ell", "1", "--lmin", "-8", "--lmax", "12", "--format", "dot"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("window [-8, 12]"));
    assert!(s.contains("digraph crystal"));
    assert!(s.contains("Y_{1,0}"));
}

#[test]
fn even_rank_is_a_usage_error() {
    let o = extremal(&["crystal", "gen", "--n", "4", "--ell", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd"));
}

#[test]
fn unknown_flags_are_rejected() {
    let o = extremal(&["crystal", "gen", "--n", "3", "--ell", "1", "--colour", "red"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn default_window_is_recorded() {
    let o = extremal(&["crystal", "gen", "--n", "3", "--ell", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["window"]["lmin"], -16);
    assert_eq!(v["window"]["lmax"], 16);
    assert_eq!(v["window"]["default"], true);
    assert!(v["graph"]["nodes"].as_array().unwrap().len() > 4);
}

#[test]
fn outputs_are_deterministic() {
    let args = ["rep", "build", "--n", "3", "--ell", "2", "--format", "json"];
    assert_eq!(extremal(&args).stdout, extremal(&args).stdout);
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("tab.txt");
    std::fs::write(&cfg, format!("# tableaux\nn = 3\nell = 2\njmax = 1\nout = {}\n", out.display())).unwrap();
    let o = extremal(&["tableaux", "list", "--config", cfg.to_str().unwrap(), "--jmax", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    let s = std::fs::read_to_string(&out).unwrap();
    assert!(s.starts_with("# n = 3, ell = 2, j in [0, 0]: 6 monomials"));

    std::fs::write(&cfg, "shape = round\n").unwrap();
    let o = extremal(&["tableaux", "list", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_closed_level_exits_nonzero_with_witness() {
    let o = extremal(&["closed", "--n", "5", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("not-closed") && s.contains("witness"));
    assert!(extremal(&["closed", "--n", "3", "--ell", "2"]).status.success());
}

#[test]
fn relation_check_passes() {
    let o = extremal(&["rep", "check", "--n", "3", "--ell", "1", "--r-max", "2", "--m-values", "-1,1"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn refused_construction_has_its_own_code() {
    let o = extremal(&["rep", "build", "--n", "5", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(17));
}

#[test]
fn unity_dimension_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_extremal"))
        .args(["unity", "thin", "--n", "3", "--ell", "1", "--L", "2", "--r-max", "1", "--m-values", "1"])
        .env("EXTREMAL_CYCLO_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("dimension 8 (expected 8)"));
    assert!(dir.path().join("phi_8.txt").exists());
    let o = extremal(&["unity", "thin", "--n", "3", "--ell", "1", "--L", "1"]);
    assert!(stdout(&o).contains("dimension 4"));
}

#[test]
fn dot_only_for_crystals() {
    let o = extremal(&["rep", "qchar", "--n", "3", "--ell", "1", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn section5_build_and_anchor_export() {
    let o = extremal(&["rep", "s5", "build", "--lmin", "-8", "--lmax", "8", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["smax"], 3);
    let o = extremal(&["crystal", "export", "--n", "3", "--anchor", "Y_{1,1}Y_{1,-1}Y_{0,2}^{-1}Y_{0,0}^{-1}", "--format", "text"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Y_{1,3}^{-1}Y_{1,-1}Y_{2,2}Y_{0,0}^{-1}") || stdout(&o).contains("Y_{0,0}^{-1}Y_{1,-1}Y_{1,3}^{-1}Y_{2,2}"));
}
