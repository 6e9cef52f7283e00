use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    root.join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbitforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const RINGS: [&str; 5] = ["heisenberg_3", "heisenberg_9", "heisenberg_mixed", "ut4_5", "abelian_27"];

#[test]
fn validate_bundled_rings() {
    let classes = [2, 2, 2, 3, 1];
    for (name, class) in RINGS.iter().zip(classes) {
        let out = run(&["validate", "--ring", &data(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!(v["format"], 1);
        assert_eq!(v["valid"], true);
        assert_eq!(v["class"], class, "{name}");
    }
}

#[test]
fn heisenberg_compat_certificate() {
    let out = run(&["verify", "--ring", &data("heisenberg_3"), "--suite", "compat"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checked"], 128);
    assert_eq!(v["summary"]["dense_cycles"], 128);
    let first = &v["records"][0];
    assert_eq!(first["alpha"], first["beta_product"]);
    assert_eq!(first["dense_cycle_identity"], true);
}

#[test]
fn abelian_ring_passes_every_suite() {
    for suite in [
        "compat",
        "reduction",
        "maslov",
        "witt",
        "gamma",
        "svn",
        "root-independence",
        "chain",
        "choice",
    ] {
        let out = run(&["verify", "--ring", &data("abelian_27"), "--suite", suite, "--count", "10"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["passed"], true, "{suite}");
    }
}

#[test]
fn ut4_reduction_on_samples() {
    let out = run(&["verify", "--ring", &data("ut4_5"), "--suite", "reduction", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checked"].as_u64().unwrap() >= 50);
}

#[test]
fn output_is_deterministic_across_runs_and_jobs() {
    let args = ["verify", "--ring", &data("heisenberg_9"), "--suite", "compat", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut parallel = args.to_vec();
    parallel.extend(["--jobs", "3"]);
    let c = run(&parallel);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("gamma.json");
    let out = run(&["verify", "--ring", &data("heisenberg_3"), "--suite", "gamma", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "gamma");
    assert_eq!(v["format"], 1);
}

#[test]
fn input_errors_exit_two() {
    let out = run(&["verify", "--ring", &data("heisenberg_3"), "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["orbits", "--ring", "/definitely/missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = scratch("bad_format.json");
    std::fs::write(&bad, r#"{"format": 7, "p": 3, "exponents": [1]}"#).unwrap();
    assert_eq!(run(&["orbits", "--ring", bad.to_str().unwrap()]).status.code(), Some(2));
    let out = run(&["alpha", "--ring", &data("heisenberg_3"), "--pick", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_ring_fails_validation() {
    // [g1,g2] = g3, [g1,g3] = g4, [g1,g4] = g5 has class 4 ≥ p = 3
    let path = scratch("class4.json");
    std::fs::write(
        &path,
        r#"{"format":1,"p":3,"exponents":[1,1,1,1,1],"brackets":[
            {"i":0,"j":1,"value":[0,0,1,0,0]},
            {"i":0,"j":2,"value":[0,0,0,1,0]},
            {"i":0,"j":3,"value":[0,0,0,0,1]}]}"#,
    )
    .unwrap();
    let out = run(&["validate", "--ring", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn character_table_of_heisenberg() {
    let out = run(&["chartable", "--ring", &data("heisenberg_3")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let dims: u64 = rows.iter().map(|r| r["dimension"].as_u64().unwrap().pow(2)).sum();
    assert_eq!(dims, 27);
    for r in rows {
        let d = r["dimension"].as_f64().unwrap();
        assert!((r["values"][0]["re"].as_f64().unwrap() - d).abs() < 1e-9);
    }
}

#[test]
fn alpha_and_chain_on_given_polarizations() {
    let pols = scratch("pols.json");
    std::fs::write(
        &pols,
        r#"{"format":1,"polarizations":[
            {"generators":[[1,0,0],[0,0,1]],"orientation":1},
            {"generators":[[0,1,0],[0,0,1]],"orientation":2},
            {"generators":[[1,1,0],[0,0,1]]}]}"#,
    )
    .unwrap();
    let p = pols.to_str().unwrap();
    let out = run(&["alpha", "--ring", &data("heisenberg_3"), "--polarizations", p, "--pick", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["methods_agree"], true);
    assert_eq!(v["beta_product_equals_alpha"], true);
    assert_eq!(v["alpha_compose"], v["alpha_reduced"]);
    let out = run(&["chain", "--ring", &data("heisenberg_3"), "--polarizations", p, "--pick", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["links_certified"], true);
}

#[test]
fn polarize_certifies() {
    for name in RINGS {
        let out = run(&["polarize", "--ring", &data(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!(v["certificate"]["subring"], true);
        assert_eq!(v["certificate"]["isotropic"], true);
        assert_eq!(v["certificate"]["size"], true);
    }
}
