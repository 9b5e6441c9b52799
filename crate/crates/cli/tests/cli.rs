use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropicurv"))
        .args(args)
        .env_remove("TROPICURV_SEED")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn curvature_reports_class_and_witnesses() {
    let out = run(&["curvature", "--points", "0,0;448,449;452,256"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("class=Undefined\n"), "{text}");
    assert!(text.contains("side b:ac: signs of f-h"));
    assert!(text.contains("witness"));

    for (points, class) in [("1,3;0,0;3,2", "Negative"), ("0,4;3,0;5,6", "Positive"), ("5,1;7,3;10,4", "Flat")] {
        let out = run(&["curvature", "--points", points]);
        assert!(stdout(&out).starts_with(&format!("class={class}\n")), "{points}");
    }
}

#[test]
fn curvature_json_is_parseable() {
    let out = run(&["curvature", "--points", "1,3;0,0;3,2", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["class"], "Negative");
    assert!(doc.get("witnesses").is_some());
}

#[test]
fn type_command_labels_exemplars() {
    assert_eq!(stdout(&run(&["type", "--points", "0,0;2,4;5,1"])).trim(), "{T1}");
    assert_eq!(stdout(&run(&["type", "--points", "3,4;6,3;9,5"])).trim(), "{T4}");
}

#[test]
fn profile_exports_breakpoints_and_comparison_curve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = run(&["profile", "--points", "1,3;0,0;3,2", "--side", "a:bc", "--step", "1/2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# side a:bc h^2 = 1 t^2 + -3 t + 9"));
    assert_eq!(lines.next(), Some("kind,t,f,f_squared,h_squared"));
    let breakpoints: Vec<&str> = csv.lines().filter(|l| l.starts_with("breakpoint")).collect();
    assert_eq!(breakpoints, ["breakpoint,0,3,9,9", "breakpoint,1,2,4,7", "breakpoint,2,2,4,7", "breakpoint,3,3,9,9"]);
    assert_eq!(csv.lines().filter(|l| l.starts_with("sample")).count(), 7);
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    assert_eq!(run(&["curvature", "--points", "0,0;0,0;1,2"]).status.code(), Some(3));
    assert_eq!(run(&["curvature", "--points", "0,x;1,1;2,0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--sampler", "simplex:n=2"]).status.code(), Some(4));
    assert_eq!(run(&["experiment", "--id", "table9"]).status.code(), Some(4));
    assert_eq!(run(&["experiment", "--id", "custom"]).status.code(), Some(4));
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let by_flag = run(&["sample", "--sampler", "simplex:n=4", "--n", "3", "--seed", "42"]);
    let by_env = Command::new(env!("CARGO_BIN_EXE_tropicurv"))
        .args(["sample", "--sampler", "simplex:n=4", "--n", "3"])
        .env("TROPICURV_SEED", "42")
        .output()
        .unwrap();
    let default = run(&["sample", "--sampler", "simplex:n=4", "--n", "3"]);
    assert_eq!(by_flag.stdout, by_env.stdout);
    assert_ne!(by_flag.stdout, default.stdout);
    assert_eq!(stdout(&by_flag).lines().count(), 3);
}

#[test]
fn experiment_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("t3-{i}.csv"));
            let out = run(&["experiment", "--id", "table3", "--trials", "200", "--runs", "2", "--out", path.to_str().unwrap()]);
            assert!(out.status.success());
            std::fs::read(&path).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
    let csv = String::from_utf8(files[0].clone()).unwrap();
    assert!(csv.starts_with("group,category,count,percentage\n"));
    assert!(csv.contains("n=3,T1,"));
}
