use std::path::{Path, PathBuf};

use envlie::cli::run_with;
use envlie::scene::bundled;

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> i32 {
    run_with(std::iter::once("envlie").chain(args.iter().copied()))
}

fn read(dir: &Path, f: &str) -> String {
    std::fs::read_to_string(dir.join(f)).unwrap()
}

#[test]
fn dphi_table() {
    let out = tempfile::tempdir().unwrap();
    let o = out.path().to_str().unwrap();
    assert_eq!(run(&["dphi", "--scene", scene("running_example").to_str().unwrap(), "--out", o]), 0);
    let j: serde_json::Value = serde_json::from_str(&read(out.path(), "dphi.json")).unwrap();
    assert_eq!(j["rank"], 5);
    assert_eq!(j["kernel"], serde_json::json!(["g3"]));
    assert_eq!(j["images"][0]["image"], "52/25*yz");
}

#[test]
fn envelope_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let s = scene("running_example");
    for d in [&a, &b] {
        let args = ["envelope", "--scene", s.to_str().unwrap(), "--out", d.path().to_str().unwrap(), "--t-samples", "12", "--u-samples", "10"];
        assert_eq!(run(&args), 0);
    }
    for f in ["envelope.obj", "envelope_residuals.csv", "envelope_report.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let obj = read(a.path(), "envelope.obj");
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 120);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2 * 11 * 9);
}

#[test]
fn trim_two_branches() {
    let out = tempfile::tempdir().unwrap();
    let s = scene("running_example");
    let args = ["trim", "--scene", s.to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--t-samples", "11", "--u-samples", "6"];
    assert_eq!(run(&args), 0);
    let j: serde_json::Value = serde_json::from_str(&read(out.path(), "trim_domain.json")).unwrap();
    assert_eq!(j["branches"].as_array().unwrap().len(), 2);
    assert_eq!(j["z_bounds"], serde_json::json!(["2", "5"]));
}

#[test]
fn char_and_verify_gates() {
    let out = tempfile::tempdir().unwrap();
    let o = out.path().to_str().unwrap();
    let s = scene("running_example");
    let s = s.to_str().unwrap();
    assert_eq!(run(&["char", "--scene", s, "--out", o]), 0);
    let j: serde_json::Value = serde_json::from_str(&read(out.path(), "char.json")).unwrap();
    assert_eq!(j["kind"], "rational");
    assert_eq!(j["t0"], "1/2");
    assert!(!j["bezier"].as_array().unwrap().is_empty());

    // points on F_{1/2} away from the characteristic fail the gate
    let pts = out.path().join("pts.csv");
    std::fs::write(&pts, "t,x,y,z\n1/2,1.5,0.5,1.5\n1/2,2.5,0.5,1.5\n").unwrap();
    assert_eq!(run(&["verify", "--scene", s, "--out", o, "--points", pts.to_str().unwrap()]), 1);
    assert!(read(out.path(), "verify.csv").starts_with("t,x,y,z,abs_f,abs_df_dt\n"));
    // default points are samples of the characteristic
    assert_eq!(run(&["verify", "--scene", s, "--out", o]), 0);
}

#[test]
fn error_exit_codes() {
    let out = tempfile::tempdir().unwrap();
    let o = out.path().to_str().unwrap();
    let bad = out.path().join("bad.json");
    std::fs::write(&bad, "{ \"elementary\": ").unwrap();
    assert_eq!(run(&["dphi", "--scene", bad.to_str().unwrap(), "--out", o]), 2);
    assert_eq!(run(&["char", "--scene", scene("pipe").to_str().unwrap(), "--t0", "7", "--out", o]), 2);
    assert_eq!(run(&["char", "--scene", scene("pipe").to_str().unwrap(), "--t0", "0.5", "--out", o]), 2);
    assert_eq!(run(&["bogus"]), 2);

    // a motion that does not move has no characteristic: degenerate geometry
    let mut f = bundled().remove(1).1.to_file();
    f.motion.entries[0][3].num = vec!["1".into()];
    let still = out.path().join("still.json");
    std::fs::write(&still, f.to_json()).unwrap();
    assert_eq!(run(&["char", "--scene", still.to_str().unwrap(), "--out", o]), 3);
}
