use std::path::PathBuf;
use std::process::Command;

use detachlab::cli::run;
use serde_json::Value;

fn file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("detachlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn dl(args: &[&str]) -> (i32, String, String) {
    run(std::iter::once("detachlab").chain(args.iter().copied()))
}

const CUBIC: &str = "ring P3 vars x,y,z,w over QQ;\nideal C = x*z-y^2, x*w-y*z, y*w-z^2;\n";

const FAMILY: &str = "ring A3 vars x,y,z param t over QQ;
ideal X = x^2, y^2;
structure T on X case 3d data f = y^2, g = x^2;
family F case-d data f = y^2, g = x^2, path = (0, t);
";

#[test]
fn hilbert_of_twisted_cubic() {
    let f = file("cubic.dl", CUBIC);
    let (code, out, _) = dl(&["hilbert", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3*z+1");
    let (_, out, _) = dl(&["--json", "hilbert", f.to_str().unwrap()]);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["hilbert_polynomial"], "3*z+1");
    assert_eq!(j["genus"], 0);
}

#[test]
fn gb_and_tangent() {
    let f = file("cubic2.dl", CUBIC);
    let (code, out, _) = dl(&["gb", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim().split(", ").count(), 3);
    let (code, out, _) = dl(&["--json", "tangent", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["hom_dim"], 12);
}

#[test]
fn local_generators_at_a_point() {
    let f = file("nonlci.dl", "ring A3 vars x,y,z over QQ;\nideal I = x*y, x*z, y*z;\n");
    let (code, out, _) = dl(&["local", f.to_str().unwrap(), "--point", "(0, 0, 0)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3");
}

#[test]
fn flat_limit_and_verify() {
    let f = file("family.dl", FAMILY);
    let (code, out, _) = dl(&["--json", "flat-limit", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let j: Value = serde_json::from_str(&out).unwrap();
    assert!(!j["limit"].as_array().unwrap().is_empty());
    let (code, out, _) = dl(&["--json", "verify", f.to_str().unwrap(), "--target", "T", "--base", "X", "--points", "3"]);
    assert_eq!(code, 0, "{out}");
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["passed"], true);
    assert_eq!(j["limit_ok"], true);
}

#[test]
fn wrong_target_is_a_check_failure() {
    let f = file("family2.dl", &format!("{FAMILY}ideal W = x, y^2;\n"));
    let (code, _, _) = dl(&["verify", f.to_str().unwrap(), "--target", "W", "--base", "X", "--points", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dl(&["frobnicate"]).0, 2);
    let f = file("bad.dl", "ring R vars x over QQ;\nideal I = x^;\n");
    let (code, _, err) = dl(&["gb", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    assert_eq!(dl(&["example", "run", "no-such-example"]).0, 2);
    let f = file("ok.dl", CUBIC);
    assert_eq!(dl(&["ideal-op", "frob", f.to_str().unwrap(), "C"]).0, 2);
}

#[test]
fn example_run_json() {
    let (code, out, _) = dl(&["--json", "example", "run", "example-two"]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["passed"], true);
    assert_eq!(j["name"], "example-two");
    for c in j["checks"].as_array().unwrap() {
        assert_eq!(c["verdict"], "pass");
        assert!(["stated", "derived", "trivial"].contains(&c["source"].as_str().unwrap()));
    }
}

#[test]
fn failing_example_file_exits_one() {
    let f = file("fail.dl", "example f;\nclaim \"c\";\nring R vars x,y over QQ;\nideal I = x, y;\ncheck colength(I, I) = 1 trivial;\n");
    let (code, out, _) = dl(&["example", "run", "--file", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let a = dl(&["--json", "example", "run", "case-e-limit"]);
    let b = dl(&["--json", "example", "run", "case-e-limit"]);
    assert_eq!(a, b);
    let c = dl(&["--json", "--seed", "7", "example", "run", "case-e-limit"]);
    assert_eq!(c.0, 0);
}

#[test]
fn example_list_names() {
    let (code, out, _) = dl(&["example", "list"]);
    assert_eq!(code, 0);
    for n in ["example-two", "bowtie-end-dim", "components-4z+1"] {
        assert!(out.lines().any(|l| l.starts_with(n)), "{n}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_detachlab");
    let f = file("cubic3.dl", CUBIC);
    assert_eq!(Command::new(bin).args(["hilbert", f.to_str().unwrap()]).status().unwrap().code(), Some(0));
    assert_eq!(Command::new(bin).arg("nope").output().unwrap().status.code(), Some(2));
}
