use std::path::Path;
use std::process::{Command, Output};

fn tm_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tm-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(csv: &str, key: &str) -> f64 {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} in\n{csv}"))
        .parse()
        .unwrap()
}

#[test]
fn eval_zero_profile() {
    let o = tm_lab(&["eval", "--u", "zero", "--form", "none"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "q"), 0.0);
    assert!((value(&out, "j") - std::f64::consts::PI).abs() < 1e-15);
    assert!(out.starts_with("# tm-lab "));
    assert!(out.contains("# config={"));
    assert!(out.contains("# grid=logit n=4096"));
}

#[test]
fn eval_moser_with_constant_form() {
    let o = tm_lab(&["eval", "--u", "moser:8", "--form", "constant:2.0"]);
    assert_eq!(o.status.code(), Some(0));
    let q = value(&stdout(&o), "q");
    assert!(q > 0.0 && q < 1.0, "{q}");
}

#[test]
fn eval_profile_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let prof = dir.path().join("prof.csv");
    let grid = tm_lab::radial::RadialGrid::graded(256).unwrap();
    let u = tm_lab::probe::moser(&grid, 4.0).unwrap();
    tm_lab::radial::write_profile_csv(&u, &[], std::fs::File::create(&prof).unwrap()).unwrap();
    let spec = format!("file:{}", prof.display());
    let o = tm_lab(&["eval", "--u", &spec, "--form", "gamma:0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(value(&stdout(&o), "q").is_finite());
}

#[test]
fn singular_evaluation_exits_3() {
    let o = tm_lab(&["eval", "--u", "moser:4", "--form", "gamma:0.5", "--inner", "1e-300", "--n", "16384"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["eval", "--u", "wavy"],
        vec!["eval", "--form", "gamma:-1"],
        vec!["probe", "--family", "sawtooth"],
        vec!["audit", "--ineq", "cauchy"],
        vec!["groundstate", "--start", "sideways"],
        vec!["lambda", "--p", "1.5"],
        vec!["nonsense"],
    ] {
        let o = tm_lab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn groundstate_classifications() {
    for (pot, expect) in [
        ("leray", "GroundStateDetected"),
        ("constant:2.0", "WeaklyCoercive"),
        ("constant:12.0", "Indefinite"),
    ] {
        let o = tm_lab(&["groundstate", "--potential", pot]);
        assert_eq!(o.status.code(), Some(0));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(&format!("classification: {expect}")), "{pot}: {err}");
        let out = stdout(&o);
        assert!(out.lines().any(|l| l.starts_with("r,phi")), "{pot}");
    }
}

#[test]
fn probe_verdicts() {
    for (form, family, expect) in [
        ("none", "moser", "Bounded"),
        ("potential:leray", "gsapprox", "Divergent"),
        ("lp:1.0:4", "moser", "Bounded"),
    ] {
        let o = tm_lab(&["probe", "--form", form, "--family", family]);
        assert_eq!(o.status.code(), Some(0));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(&format!("verdict: {expect}")), "{form}: {err}");
    }
}

#[test]
fn audit_exit_codes() {
    let o = tm_lab(&["audit", "--ineq", "onofri", "--form", "none", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    // the refined inequality has genuine counterexamples
    let o = tm_lab(&["audit", "--ineq", "onofri-refined", "--form", "gamma:0.5", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_output_carries_metadata() {
    let o = tm_lab(&["lambda", "--n", "512", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metadata"]["command"], "lambda");
    assert_eq!(v["metadata"]["grid"]["n"], 512);
    let l1 = v["values"]["lambda_1"].as_f64().unwrap();
    assert!((l1 - 5.783185962946784).abs() < 1e-2);
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["-o", p]);
    let o = tm_lab(&full);
    assert!(o.status.code().is_some_and(|c| c <= 1), "{args:?}");
    std::fs::read(path).unwrap()
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "audit", "ineq": "orlicz", "form": "wangye", "samples": 5, "seed": 2, "n": 512}"#)
        .unwrap();
    let c = cfg.to_str().unwrap();
    let a = run_to(dir.path(), "a.csv", &["audit", "--config", c]);
    let b = run_to(dir.path(), "b.csv", &["audit", "--config", c, "--seed", "2"]);
    assert_eq!(a, b);
    let other = run_to(dir.path(), "c.csv", &["audit", "--config", c, "--seed", "3"]);
    assert_ne!(a, other);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\"samples\":5"));

    std::fs::write(&cfg, r#"{"samples": 5, "colour": "red"}"#).unwrap();
    assert_eq!(tm_lab(&["audit", "--config", c]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"command": "probe"}"#).unwrap();
    assert_eq!(tm_lab(&["audit", "--config", c]).status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        &["rearrange", "--u", "moser:16", "--n", "512"][..],
        &["probe", "--form", "potential:leray", "--family", "gsapprox", "--format", "json"],
        &["audit", "--ineq", "adimurthi-druet", "--form", "constant:2", "--samples", "10", "--seed", "5", "--n", "512"],
    ]
    .iter()
    .enumerate()
    {
        let a = run_to(dir.path(), &format!("{i}a"), args);
        let b = run_to(dir.path(), &format!("{i}b"), args);
        assert_eq!(a, b, "{args:?}");
    }
}
