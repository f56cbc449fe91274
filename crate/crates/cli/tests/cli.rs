use std::io::Write;
use std::process::{Command, Output, Stdio};

use mobile_atlas::mobile::MobileJson;
use mobile_atlas::planar_map::MapJson;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobile-atlas")).args(args).output().expect("binary runs")
}

fn run_with(args: &[&str], env: &[(&str, &str)], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mobile-atlas"))
        .args(args)
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn solve_forest_to_order_six() {
    let v = json(&run(&["solve", "forest", "--order", "6", "--format", "json"]));
    assert_eq!(v["order"], 6);
    let r = v["series"]["R"].as_array().unwrap();
    assert_eq!(r[1], "3");
    assert_eq!(r[2], "18 + 30*y");
    assert_eq!(r[6], "96228 + 801900*y + 2818800*y^2 + 5290920*y^3 + 5395824*y^4 + 2450448*y^5");
    let pretty = String::from_utf8(run(&["solve", "forest", "--order", "6"]).stdout).unwrap();
    assert!(pretty.contains("g^6  36*(2673 + 22275*y + 78300*y^2 + 146970*y^3 + 149884*y^4 + 68068*y^5)"), "{pretty}");
}

#[test]
fn solve_forest_order_zero() {
    let v = json(&run(&["solve", "forest", "--order", "0", "--format", "json"]));
    assert_eq!(v["series"]["R"], serde_json::json!(["1"]));
}

#[test]
fn solve_ising_h_row() {
    let out = run(&["solve", "ising", "--order", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let h = text.split("H:").nth(1).unwrap();
    assert!(h.contains("g^3  108*z1^2*(1 + 2*z1^2 + z1^4)"), "{text}");
}

#[test]
fn rooted_hp_divides_by_n_plus_two() {
    let plain = json(&run(&["solve", "hp-triangulation", "--order", "6", "--format", "json"]));
    let rooted = json(&run(&["solve", "hp-triangulation", "--order", "6", "--rooted", "--format", "json"]));
    assert_eq!(plain["series"]["G"][2], "3 + 6*z1");
    assert_eq!(rooted["series"]["G"][2], "1 + 2*z1");
    assert_eq!(rooted["series"]["G"][6], "12 + 72*z1 + 99*z1^2 + 24*z1^3");
}

#[test]
fn csv_and_substitution() {
    let out = run(&["solve", "forest", "--order", "2", "--y", "1/2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,R,G"));
    assert_eq!(text.lines().nth(3), Some("2,33,76"));
    let out = run(&["solve", "forest", "--order", "2", "--y", "0.5", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run(&["solve", "forest", "--order", "x"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "forest", "--y", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "generic"]).status.code(), Some(2));
    assert_eq!(run(&["singularity", "--y", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "hp-triangulation", "--size", "2"]).status.code(), Some(2));
    assert_eq!(run_with(&["convert", "--to", "map"], &[], "{\"bad\": 1}").status.code(), Some(2));
    assert_eq!(run_with(&["solve", "forest"], &[("MOBILE_ATLAS_THREADS", "zero")], "").status.code(), Some(2));
}

#[test]
fn generic_spec_file() {
    let dir = std::env::temp_dir().join(format!("mobile-atlas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quad.json");
    std::fs::write(&path, r#"{"white": {"4": "g"}, "black": {"2": "1"}, "y": "y", "mode": "pairs"}"#).unwrap();
    let generic = json(&run(&["solve", "generic", "--spec", path.to_str().unwrap(), "--order", "4", "--format", "json"]));
    let forest = json(&run(&["solve", "forest", "--order", "4", "--format", "json"]));
    assert_eq!(generic["series"]["R"], forest["series"]["R"]);
}

#[test]
fn check_suites_pass() {
    for suite in ["identities", "duality", "cancellation"] {
        let v = json(&run(&["check", suite, "--order", "6", "--format", "json"]));
        assert_eq!(v["pass"], true, "{suite}");
    }
    let out = run_with(&["check", "roundtrip", "--max-edges", "3"], &[("MOBILE_ATLAS_THREADS", "2")], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PASS roundtrip"));
}

#[test]
fn perturbed_coefficient_is_caught() {
    let clean = run(&["check", "oracle-series"]);
    assert_eq!(clean.status.code(), Some(0), "{}", String::from_utf8_lossy(&clean.stderr));
    let out = run_with(&["check", "oracle-series"], &[("MOBILE_ATLAS_PERTURB", "1")], "");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    let counterexample: Value = serde_json::from_str(err.trim().trim_start_matches("verification failed: ")).unwrap();
    assert_eq!(counterexample["match"], false);
    assert_eq!(counterexample["expected"], "3");
    assert_eq!(counterexample["actual"], "4");
}

#[test]
fn singularity_meets_tolerance() {
    let v = json(&run(&["singularity", "--y", "1", "--tol", "1e-12"]));
    assert_eq!(v["classification"], "square_root");
    assert!(v["u_star"].as_str().unwrap().starts_with("0.0363157694860878795"));
    let dg: f64 = v["dg_du"].as_str().unwrap().parse().unwrap();
    let d2: f64 = v["d2g_du2"].as_str().unwrap().parse().unwrap();
    let u: f64 = v["u_star"].as_str().unwrap().parse().unwrap();
    assert!(dg.abs() <= 1e-12 * (u * d2).abs());
    let t = json(&run(&["singularity", "--y", "0"]));
    assert_eq!(t["classification"], "tree_log");
}

#[test]
fn sampling_is_byte_identical() {
    let a = run(&["sample", "forest", "--size", "20", "--seed", "7"]);
    let b = run(&["sample", "forest", "--size", "20", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let map: MapJson = serde_json::from_value(v["map"].clone()).unwrap();
    // 20 quadrangles, each edge doubled into a bigon: 80 edges
    assert_eq!(map.darts, 160);
    assert!(map.to_config().is_ok());
    let c = run(&["sample", "forest", "--size", "20", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn convert_round_trip_keeps_the_map() {
    let sampled = json(&run(&["sample", "quad-one-way", "--size", "5", "--seed", "11", "--y", "2"]));
    let map_text = sampled["map"].to_string();
    let original = MapJson::parse(&map_text).unwrap();
    let mobile = run_with(&["convert", "--to", "mobile"], &[], &map_text);
    let mobile_text = String::from_utf8(json(&mobile).to_string().into_bytes()).unwrap();
    assert!(MobileJson::parse(&mobile_text).is_ok());
    let back = run_with(&["convert", "--to", "map"], &[], &mobile_text);
    let back = MapJson::parse(&json(&back).to_string()).unwrap();
    assert_eq!(back.canonical_key(), original.canonical_key());
}
