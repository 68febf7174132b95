use std::path::PathBuf;
use std::process::Command;

use emtkit_cli::{run_command, Response};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Response {
    run_stdin(args, "")
}

fn run_stdin(args: &[&str], input: &str) -> Response {
    let argv = std::iter::once("emtkit").chain(args.iter().copied());
    run_command(argv, &mut input.as_bytes())
}

fn report(r: &Response) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", r))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("emtkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_sierpinski() {
    let r = run(&["validate", "--in", &fixture("sierpinski.json")]);
    assert_eq!(r.code, 0);
    let v = report(&r);
    assert_eq!(v["valid"], true);
    assert_eq!(v["is_emt"], false);
    assert_eq!(v["hausdorff"], false);
}

#[test]
fn validate_reports_axiom_violations_as_failures() {
    let triangle = r#"{"points":["a","b","c"],"opens":[[],["a","b","c"]],
        "dist":[["0","1","5"],["1","0","1"],["5","1","0"]]}"#;
    let r = run_stdin(&["validate"], triangle);
    assert_eq!(r.code, 1);
    assert_eq!(report(&r)["valid"], false);
    let not_topology = r#"{"points":["a","b"],"opens":[["a"],["a","b"]],"dist":[["0","1"],["1","0"]]}"#;
    assert_eq!(run_stdin(&["validate"], not_topology).code, 1);
}

#[test]
fn parse_errors_exit_2_with_pointer() {
    let cases = [
        (r#"{"points":["a"],"opens":[[],["a"]],"dist":[["-1"]]}"#, "/dist/0/0"),
        (r#"{"points":["a","a"],"opens":[[]],"dist":[]}"#, "/points/1"),
        (r#"{"points":["a"],"opens":[[],["a"]],"dist":[["0"]],"extra":1}"#, "/extra"),
        (r#"{"points":["a"],"opens":[[],["b"]],"dist":[["0"]]}"#, "/opens/1/0"),
        ("not json", ""),
    ];
    for (doc, pointer) in cases {
        let r = run_stdin(&["validate"], doc);
        assert_eq!(r.code, 2, "{doc}");
        let v = report(&r);
        assert_eq!(v["error"]["kind"], "parse");
        assert_eq!(v["error"]["pointer"], pointer, "{doc}");
    }
}

#[test]
fn theoremb_relaxed_sierpinski() {
    let r = run(&["theoremb", "--relaxed", "--in", &fixture("sierpinski.json")]);
    assert_eq!(r.code, 0);
    let v = report(&r);
    assert!(v["conditions"].as_object().unwrap().values().all(|b| b == false));
    assert_eq!(v["consistent"], true);
    assert_eq!(run(&["theoremb", "--in", &fixture("sierpinski.json")]).code, 2);
    let r = run(&["theoremb", "--in", &fixture("two_points.json")]);
    assert_eq!(r.code, 0);
    assert!(report(&r)["conditions"].as_object().unwrap().values().all(|b| b == true));
}

#[test]
fn functors() {
    let two = fixture("two_points.json");
    for name in ["emt", "gamma", "gammabar", "mc", "geo", "trunc:1/2", "disc:1", "disc:inf", "T"] {
        let r = run(&["functor", "--name", name, "--in", &two]);
        assert_eq!(r.code, 0, "{name}: {}", r.stdout);
        assert_eq!(report(&r)["tag"], name);
    }
    let geo = report(&run(&["functor", "--name", "geo", "--in", &two]));
    assert_eq!(geo["direction"], "counit");
    assert_eq!(geo["warnings"][0], "degenerate-at-finite-scale");
    assert_eq!(geo["object"]["dist"][0][1], "inf");
    assert_eq!(run(&["functor", "--name", "nope", "--in", &two]).code, 2);
    assert_eq!(run(&["functor", "--name", "gamma", "--in", &fixture("sierpinski.json")]).code, 2);
}

#[test]
fn emtfy_collapses_sierpinski() {
    let r = run(&["emtfy", "--in", &fixture("sierpinski.json")]);
    assert_eq!(r.code, 0);
    let v = report(&r);
    assert_eq!(v["object"]["points"].as_array().unwrap().len(), 1);
    assert_eq!(v["unit"]["map"]["open"], v["unit"]["map"]["closed"]);
}

#[test]
fn limits_colimits_verify() {
    let d = fixture("coequalizer.json");
    let lim = report(&run(&["limit", "--in", &d]));
    assert_eq!(lim["limit"]["apex"]["points"].as_array().unwrap().len(), 0);
    let colim = report(&run(&["colimit", "--in", &d]));
    assert_eq!(colim["colimit"]["apex"]["points"].as_array().unwrap().len(), 2);
    assert_eq!(colim["colimit"]["apex"]["dist"][0][1], "1");
    let r = run(&["verify", "--in", &d]);
    assert_eq!(r.code, 0);
    assert_eq!(report(&r)["colimit"]["verdict"], "pass");
    assert_eq!(run(&["verify", "--in", &d, "--probe-max", "3"]).code, 0);
}

#[test]
fn verify_rejects_bad_candidate() {
    let d = fixture("coequalizer.json");
    // the target itself with identity legs does not coequalize
    let candidate = r#"{"side":"cocone",
        "apex":{"points":["x","y","z"],
                "opens":[[],["x"],["y"],["z"],["x","y"],["x","z"],["y","z"],["x","y","z"]],
                "dist":[["0","1","2"],["1","0","1"],["2","1","0"]]},
        "legs":[{"map":{"p":"x"}},{"map":{"x":"x","y":"y","z":"z"}}]}"#;
    let path = scratch("candidate.json");
    std::fs::write(&path, candidate).unwrap();
    let r = run(&["verify", "--in", &d, "--candidate", path.to_str().unwrap()]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert_eq!(report(&r)["candidate"]["verdict"], "fail");

    // the computed colimit passes when given explicitly
    let colim = report(&run(&["colimit", "--in", &d]));
    std::fs::write(&path, colim["colimit"].to_string()).unwrap();
    assert_eq!(run(&["verify", "--in", &d, "--candidate", path.to_str().unwrap()]).code, 0);
}

#[test]
fn adjunction_modes() {
    let r = run(&["adjunction", "--name", "emt", "--seed", "3", "--count", "20"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(report(&r)["pass"], 20);
    let r = run(&["adjunction", "--name", "emt", "--left", &fixture("sierpinski.json"), "--right", &fixture("two_points.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(run(&["adjunction", "--name", "emt", "--left", &fixture("sierpinski.json")]).code, 2);
    assert_eq!(run(&["adjunction", "--name", "geo", "--left", &fixture("two_points.json"), "--right", &fixture("two_points.json")]).code, 2);
}

#[test]
fn suite_is_deterministic() {
    let a = run(&["suite", "--seed", "42", "--count", "20"]);
    let b = run(&["suite", "--seed", "42", "--count", "20"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    let v = report(&a);
    assert_eq!(v["totals"]["fail"], 0);
    assert_eq!(v["totals"]["inconclusive"], 0);
    let names: Vec<&String> = v["checks"].as_object().unwrap().keys().collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("report.json");
    let r = run(&["validate", "--in", &fixture("two_points.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["is_emt"], true);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["bogus"]).code, 2);
    assert_eq!(run(&["validate", "--in", "/nonexistent/file.json"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn binary_respects_caps_env() {
    let bin = env!("CARGO_BIN_EXE_emtkit");
    let d = fixture("coequalizer.json");
    let status = |caps: &str| {
        Command::new(bin)
            .args(["verify", "--in", &d])
            .env("EMTKIT_CAPS", caps)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(status("enum=2"), Some(3));
    assert_eq!(status("enum=4096,product=64,oracle=6,opens=4096"), Some(0));
    assert_eq!(status("bogus=1"), Some(2));
}
