use std::io::Write;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_farsight");
const DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/instances");

const TTC: &str = "i1->s1, i2->s1, i3->s2, i4->s3";
const DA: &str = "i1->s1, i2->s2, i3->s1, i4->s3";
const IA: &str = "i1->s1, i2->s3, i3->s2, i4->s1";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn farsight(instance: &str, args: &[&str]) -> Run {
    let out =
        Command::new(BIN).arg(args[0]).arg(format!("{DIR}/{instance}")).args(&args[1..]).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(run: &Run) -> serde_json::Value {
    serde_json::from_str(&run.stdout).expect("json output")
}

#[test]
fn solve_prints_outcomes() {
    let expected = [("ttc", TTC), ("da", DA), ("ia", IA)];
    for (mechanism, literal) in expected {
        let run = farsight("ttc_vs_da.txt", &["solve", "--mechanism", mechanism]);
        assert_eq!(run.code, 0);
        assert_eq!(run.stdout, format!("{literal}\n"));
    }
    let run = farsight("seat_inheritance.txt", &["solve", "--mechanism", "ttc"]);
    assert_eq!(run.stdout, "i1->s1, i2->s3, i3->s2, i4->s1\n");
}

#[test]
fn solve_trace_lists_cycles() {
    let run = farsight("ttc_vs_da.txt", &["solve", "--mechanism", "ttc", "--trace"]);
    let cycles: Vec<&str> = run.stdout.lines().filter(|l| l.trim_start().starts_with("cycle:")).collect();
    assert_eq!(cycles, ["  cycle: (s1, i1)", "  cycle: (s1, i3, s2, i2)", "  cycle: (s3, i4)"]);

    let run = farsight("ttc_vs_da.txt", &["solve", "--mechanism", "ttc", "--trace", "--format", "json"]);
    let v = json(&run);
    assert_eq!(v["matching"], TTC);
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
    assert_eq!(v["trace"][1]["kind"], "trading");
    assert_eq!(v["trace"][1]["cycles"][0][1]["student"], "i2");
}

#[test]
fn properties_and_requirements() {
    let run = farsight("ttc_vs_da.txt", &["properties", "--matching", DA, "--format", "json"]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["stable"], true);
    assert_eq!(v["pareto_efficient"], false);
    assert_eq!(v["pareto_improvement"], TTC);

    let run = farsight("ttc_vs_da.txt", &["properties", "--matching", TTC, "--require", "pareto-efficient"]);
    assert_eq!(run.code, 0);
    let run = farsight("ttc_vs_da.txt", &["properties", "--matching", TTC, "--require", "stable"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("  i4 envies i2 at s1\n"));
    assert!(run.stdout.ends_with("required stable: fails\n"));
}

#[test]
fn phi_lists_sorted_matchings_that_reread() {
    let run = farsight("ttc_vs_da.txt", &["phi", "--from", DA, "--format", "json"]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["partial"], false);
    let ms: Vec<String> = v["matchings"].as_array().unwrap().iter().map(|m| m.as_str().unwrap().to_string()).collect();
    assert!(ms.contains(&TTC.to_string()));
    let mut sorted = ms.clone();
    sorted.sort();
    assert_eq!(ms, sorted);
    for m in ms.iter().step_by(7) {
        assert_eq!(farsight("ttc_vs_da.txt", &["properties", "--matching", m]).code, 0, "{m}");
    }
}

#[test]
fn phi_with_horizon_flags_partial_search() {
    let run = farsight("ttc_vs_da.txt", &["phi", "--from", DA, "--horizon", "2", "--depth-cap", "1"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("PARTIAL"));
    let v = json(&farsight(
        "ttc_vs_da.txt",
        &["phi", "--from", DA, "--horizon", "2", "--depth-cap", "1", "--format", "json"],
    ));
    assert_eq!(v["partial"], true);
    assert_eq!(v["horizon"], 2);
}

#[test]
fn path_certificate_validates_and_rereads() {
    let from = "i1->s1, i2->s2, i3->s3, i4->s1";
    let run = farsight("ttc_vs_da.txt", &["path", "--target", "ttc", "--from", from, "--check-horizon", "3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.starts_with(&format!("matching: {from}\n")));
    assert!(run.stdout.contains(&format!("matching: {TTC}\ncoalition: i3 s1\n")));
    assert!(run.stdout.contains("# check (horizon 3): valid\n"));

    for (format, text) in [
        ("text", run.stdout.clone()),
        ("json", farsight("ttc_vs_da.txt", &["path", "--target", "ttc", "--from", from, "--format", "json"]).stdout),
    ] {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        let path = file.path().to_str().unwrap();
        let check = farsight("ttc_vs_da.txt", &["validate-path", "--file", path]);
        assert_eq!(check.code, 0, "{format}: {}", check.stdout);
        assert!(check.stdout.ends_with("verdict: valid\n"));
    }
}

#[test]
fn every_target_builds_a_valid_path() {
    let cases = [
        ("clinch_first.txt", "fct", "i1->self, i2->s1, i3->s2"),
        ("iterated_clinch.txt", "ct", "i1->self, i2->self, i3->self, i4->self"),
        ("seat_inheritance.txt", "ettc", "i1->s1, i2->s3, i3->s2, i4->s1"),
    ];
    for (instance, target, from) in cases {
        let run = farsight(instance, &["path", "--target", target, "--from", from, "--format", "json"]);
        assert_eq!(run.code, 0, "{instance}: {}", run.stderr);
        let v = json(&run);
        assert_eq!(v["validation"]["valid"], true);
        let steps = v["certificate"]["steps"].as_array().unwrap().len();
        assert_eq!(v["construction"].as_array().unwrap().len(), steps);
    }
}

#[test]
fn broken_certificate_reports_first_violation() {
    let text = format!("matching: {IA}\nmatching: {TTC}\ncoalition: i2\nhorizon: farsighted\n");
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    let run =
        farsight("ttc_vs_da.txt", &["validate-path", "--file", file.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(run.code, 1);
    let v = json(&run);
    assert_eq!(v["valid"], false);
    assert_eq!(v["failing_step"], 0);
    assert!(v["violation"].as_str().unwrap().starts_with("step 0: "));
}

#[test]
fn check_set_verdicts() {
    let run = farsight("ttc_vs_da.txt", &["check-set", "--set", "i1->s1,i2->s1,i3->s2,i4->s3"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("verdict: stable\n"));

    let run = farsight("ttc_vs_da.txt", &["check-set", "--set", &format!("{TTC}; {DA}"), "--format", "json"]);
    assert_eq!(run.code, 1);
    let v = json(&run);
    assert_eq!(v["verdict"], "not_stable");
    assert_eq!(v["internal"][0]["from"], DA);
    assert_eq!(v["internal"][0]["to"], TTC);

    let run = farsight("ttc_vs_da.txt", &["check-set", "--set", TTC, "--horizon", "3"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("horizon: 3\n"));
}

#[test]
fn stable_set_searches() {
    let singles = json(&farsight("ttc_vs_da.txt", &["find-singletons", "--format", "json"]));
    let sets = singles["sets"].as_array().unwrap();
    assert!(sets.iter().any(|s| s[0] == TTC));
    assert!(sets.iter().all(|s| s.as_array().unwrap().len() == 1));

    let pairs = json(&farsight("clinch_first.txt", &["find-sets", "--max-size", "2", "--format", "json"]));
    assert_eq!(pairs["max_size"], 2);
    assert_eq!(pairs["partial"], false);
}

#[test]
fn enumerate_counts() {
    let run = farsight("ttc_vs_da.txt", &["enumerate"]);
    assert_eq!(run.stdout, "matchings: 115\n");
    let run = farsight("clinch_first.txt", &["enumerate", "--list", "--format", "json"]);
    let v = json(&run);
    assert_eq!(v["count"], v["matchings"].as_array().unwrap().len());
}

#[test]
fn output_is_deterministic() {
    let args = ["find-singletons", "--format", "json"];
    assert_eq!(farsight("ttc_vs_da.txt", &args).stdout, farsight("ttc_vs_da.txt", &args).stdout);
    let args = ["phi", "--from", DA];
    assert_eq!(farsight("ttc_vs_da.txt", &args).stdout, farsight("ttc_vs_da.txt", &args).stdout);
}

#[test]
fn input_errors_exit_2() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"students: i1 i2\nschools: s1\nquota s1 = 1\npref i1: s1\npref i2: s1\n").unwrap();
    let out = Command::new(BIN).args(["solve", file.path().to_str().unwrap(), "--mechanism", "da"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":2: missing priority line for school s1"), "{err}");

    let run = farsight("ttc_vs_da.txt", &["properties", "--matching", "i1->s1, i2->s9, i3->s2, i4->s3"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("unknown school `s9`"));
    assert_eq!(farsight("ttc_vs_da.txt", &["path", "--target", "ttc", "--from", TTC]).code, 2);
    assert_eq!(farsight("ttc_vs_da.txt", &["solve", "--mechanism", "xyz"]).code, 2);
}

#[test]
fn capacity_errors_exit_3() {
    let run = farsight("ttc_vs_da.txt", &["phi", "--from", DA, "--cap", "10"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("cap of 10"));
    assert_eq!(farsight("ttc_vs_da.txt", &["find-sets", "--max-size", "60"]).code, 3);
}
