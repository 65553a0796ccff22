use std::path::{Path, PathBuf};

use deformspace::cli::{run, Outcome, EXIT_INPUT, EXIT_OK};

const FIXTURES: [&str; 8] = ["ssf1", "ssf2", "ssf3", "hnn1", "triv", "nred", "free3", "slide1"];

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.gog")).display().to_string()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn cli(args: &[&str]) -> Outcome {
    cli_with_stdin(args, "")
}

fn cli_with_stdin(args: &[&str], input: &str) -> Outcome {
    let mut argv = vec!["deformspace"];
    argv.extend_from_slice(args);
    run(argv, &mut input.as_bytes())
}

/// Compares with the stored file; `UPDATE_GOLDEN=1` rewrites it instead.
fn golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn check_goldens() {
    for f in FIXTURES {
        let o = cli(&["check", &fixture(f), "--format", "json"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        golden(&format!("check_{f}.json"), &o.stdout);
        let o = cli(&["check", &fixture(f)]);
        golden(&format!("check_{f}.txt"), &o.stdout);
        let o = cli(&["dot", &fixture(f)]);
        golden(&format!("{f}.dot"), &o.stdout);
    }
}

#[test]
fn rigidity_goldens() {
    for f in FIXTURES {
        if f == "nred" || f == "slide1" {
            continue;
        }
        let o = cli(&["rigidity", &fixture(f), "--format", "json", "--seed", "5"]);
        assert_eq!(o.code, EXIT_OK, "{f}: {}", o.stderr);
        golden(&format!("rigidity_{f}.json"), &o.stdout);
        let o = cli(&["enumerate", &fixture(f), "--depth", "2", "--format", "json"]);
        assert_eq!(o.code, EXIT_OK);
        golden(&format!("enumerate_{f}.json"), &o.stdout);
    }
    let o = cli(&["dot", &fixture("free3"), "--moves", "--depth", "2"]);
    golden("free3_moves.dot", &o.stdout);
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        vec!["rigidity", "FILE", "--format", "json", "--seed", "9"],
        vec!["enumerate", "FILE", "--format", "dot"],
        vec!["check", "FILE", "--format", "json"],
    ] {
        for f in ["ssf2", "free3"] {
            let path = fixture(f);
            let args: Vec<&str> = args.iter().map(|&a| if a == "FILE" { path.as_str() } else { a }).collect();
            let a = cli(&args);
            let b = cli(&args);
            assert_eq!(a.stdout, b.stdout);
            assert_eq!(a.code, b.code);
        }
    }
}

#[test]
fn check_text_summary() {
    let o = cli(&["check", &fixture("ssf1")]);
    assert!(o.stdout.contains("reduced ✓"));
    assert!(o.stdout.contains("minimal ✓"));
    assert!(o.stdout.contains("slide-free ✓"));
    assert!(o.stdout.contains("5 subgroup classes"));
}

#[test]
fn free3_rigidity_summary() {
    let o = cli(&["rigidity", &fixture("free3"), "--depth", "2"]);
    assert_eq!(o.code, EXIT_OK);
    let first = o.stdout.lines().next().unwrap();
    let n: usize = first.split("among ").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(first.contains(": 0 strongly slide-free among"), "{first}");
    assert!(n >= 3);
}

#[test]
fn move_graph_dot_has_reduced_nodes() {
    let o = cli(&["dot", &fixture("free3"), "--moves", "--depth", "2"]);
    assert!(o.stdout.matches("doublecircle").count() >= 3);
}

#[test]
fn input_errors_exit_1() {
    let o = cli(&["check", &data("malformed.gog")]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("malformed.gog: 3:"), "{}", o.stderr);
    let o = cli(&["check", &data("missing.gog")]);
    assert_eq!(o.code, EXIT_INPUT);
    let o = cli(&["enumerate", &fixture("nred")]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("not minimal"));
    let o = cli(&["check", &fixture("ssf1"), "--depth", "0"]);
    assert_eq!(o.code, EXIT_INPUT);
    let o = cli(&["frobnicate"]);
    assert_eq!(o.code, EXIT_INPUT);
    let o = cli(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
}

#[test]
fn normal_form_repl() {
    let words = std::fs::read_to_string(data("words.txt")).unwrap();
    let o = cli_with_stdin(&["nf", &fixture("ssf1")], &words);
    assert_eq!(o.code, EXIT_INPUT, "the last word is malformed");
    golden("nf_ssf1.txt", &o.stdout);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "a·a·a·a => 1  [ℓ = 0]");
    assert_eq!(lines[1], "a^2·b^3 => 1  [ℓ = 0]");
    assert!(lines[2].ends_with("[ℓ = 4]"));
    assert!(lines[5].contains("error"));
    let o = cli_with_stdin(&["nf", &fixture("ssf1"), "--format", "json"], "a·b\n");
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v[0]["translation_length"], 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ssf1.dot");
    let o = cli(&["dot", &fixture("ssf1"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("\"2 [2:3]\""));
}

#[test]
fn certificate_schema() {
    let o = cli(&["rigidity", &fixture("ssf1"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    let c = &v["certificates"][0];
    assert_eq!(c["verdict"], "isomorphism");
    for k in ["injectivity", "edge_lengths", "degrees", "uniqueness"] {
        assert_eq!(c["checks"][k], true, "{k}");
    }
    assert!(c["vertex_assignment"].as_array().unwrap().len() == 2);
    assert!(c["diagnostics"].as_array().unwrap().is_empty());
    let o = cli(&["enumerate", &fixture("free3"), "--depth", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    for k in ["classes", "moves", "truncated"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}
