use std::process::Command;

use findim_cli::{run_command, EXIT_CAP, EXIT_DECIDED, EXIT_INCONCLUSIVE, EXIT_INPUT};
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv: Vec<&str> = args.to_vec();
    argv.extend(["--format", "json"]);
    let out = run_command(argv);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_findim"));
    c.env_remove("FINDIM_PRIME");
    c
}

#[test]
fn envelope_fields_always_present() {
    let (code, v) = json(&["check", "ex53"]);
    assert_eq!(code, EXIT_DECIDED);
    for key in ["version", "command", "algebra", "status", "result", "error"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["status"], "decided");
    assert!(v["error"].is_null());
    assert_eq!(v["result"]["vertices"], 3);
    assert_eq!(v["result"]["prime"], 32003);
    assert!(v["result"]["module"].is_null());
}

#[test]
fn bound_of_three_vertex_example() {
    let (code, v) = json(&["bound", "ex53"]);
    assert_eq!(code, EXIT_DECIDED);
    let r = &v["result"];
    assert_eq!((r["s"].as_u64(), r["alpha"].as_u64(), r["beta"].as_u64(), r["bound"].as_u64()), (Some(0), Some(1), Some(0), Some(2)));
    assert_eq!(r["infinity_set"], serde_json::json!([1, 2]));
    let (_, again) = json(&["bound", "ex53"]);
    assert_eq!(v, again);
    assert_eq!(json(&["radcube-bound", "ex53"]).1["result"]["bound"], 4);
}

#[test]
fn pd_reports_and_exit_codes() {
    let (code, v) = json(&["pd", "ex53", "--module", "S(2)"]);
    assert_eq!(code, EXIT_DECIDED);
    let pd = &v["result"]["pd"];
    assert_eq!(pd["status"], "infinite");
    assert!(pd["value"].is_null() && pd["depth"].is_null() && pd["cycle"].is_array());
    let (code, v) = json(&["pd", "ex53", "--module", "P(3)"]);
    assert_eq!((code, v["result"]["pd"]["value"].as_u64()), (EXIT_DECIDED, Some(0)));
    let (code, v) = json(&["pd", "ex53", "--module", "S(1)", "--depth", "1"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(v["result"]["pd"]["status"], "unknown");
}

#[test]
fn input_errors() {
    let (code, v) = json(&["pd", "ex53", "--module", "S(1)+P(9)"]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["code"], "index_out_of_range");
    assert!(v["result"].is_null());
    assert_eq!(json(&["pd", "ex53"]).1["error"]["code"], "missing_module");
    assert_eq!(json(&["check", "/nonexistent/algebra.txt"]).1["error"]["code"], "io_error");
    let out = run_command(["frobnicate", "ex53"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
    assert_eq!(run_command(["--help"]).code, EXIT_DECIDED);
}

#[test]
fn tiny_field_exceeds_cap() {
    let (code, v) = json(&["decompose", "ex53", "--module", "S(1)+S(1)+S(1)", "--prime", "2"]);
    assert_eq!(code, EXIT_CAP);
    assert_eq!(v["status"], "cap_exceeded");
}

#[test]
fn file_input_and_prime_precedence() {
    let dir = std::env::temp_dir().join(format!("findim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a2.txt");
    std::fs::write(&path, "field 5\nvertices 1 2\narrow x 1 2\n").unwrap();
    let path = path.to_str().unwrap();
    let (code, v) = json(&["check", path]);
    assert_eq!((code, v["result"]["prime"].as_u64()), (EXIT_DECIDED, Some(5)));
    assert_eq!(json(&["check", path, "--prime", "7"]).1["result"]["prime"], 7);

    let prime_of = |env: Option<&str>, extra: &[&str]| -> (i32, Value) {
        let mut c = binary();
        c.args(["check", path, "--format", "json"]).args(extra);
        if let Some(e) = env {
            c.env("FINDIM_PRIME", e);
        }
        let out = c.output().unwrap();
        (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
    };
    assert_eq!(prime_of(Some("11"), &[]).1["result"]["prime"], 11);
    assert_eq!(prime_of(Some("11"), &["--prime", "13"]).1["result"]["prime"], 13);
    let (code, v) = prime_of(Some("eleven"), &[]);
    assert_eq!((code, v["error"]["code"].as_str()), (EXIT_INPUT, Some("bad_environment")));
}

/// `blocks` disjoint copies of the two-vertex loop example.
fn blocks_file(blocks: usize) -> String {
    let vs: Vec<String> = (1..=2 * blocks).map(|v| v.to_string()).collect();
    let mut text = format!("field 32003\nvertices {}\n", vs.join(" "));
    for b in 0..blocks {
        let (u, v) = (2 * b + 1, 2 * b + 2);
        text.push_str(&format!("arrow a{b} {u} {v}\narrow b{b} {u} {u}\narrow g{b} {v} {v}\n"));
    }
    for b in 0..blocks {
        text.push_str(&format!("rel b{b}*b{b}\nrel a{b}*b{b}\nrel g{b}*a{b}\nrel g{b}*g{b}\n"));
    }
    let dir = std::env::temp_dir().join(format!("findim-cli-blocks-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("blocks{blocks}.txt"));
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn unsupported_cardinality_is_inconclusive() {
    let path = blocks_file(4);
    let (code, v) = json(&["bound", &path]);
    assert_eq!(code, EXIT_INCONCLUSIVE, "{v}");
    assert_eq!(v["result"]["card_infinity"], 4);
    assert!(v["result"]["bound"].is_null());
}

#[test]
fn three_infinite_indices_need_an_assumption() {
    let path = blocks_file(3);
    let (code, v) = json(&["bound", &path]);
    assert_eq!((code, v["error"]["code"].as_str()), (EXIT_INPUT, Some("missing_assumption")));
    let (code, v) = json(&["bound", &path, "--assume", "3-cardinal", "--assume", "3-finitistic"]);
    assert_eq!(code, EXIT_DECIDED, "{v}");
    assert!(v["result"]["bound"].is_u64());
}

#[test]
fn filtration_and_membership() {
    let (code, v) = json(&["filtration", "ex54", "--module", "mt(1)"]);
    assert_eq!(code, EXIT_DECIDED);
    let r = &v["result"];
    assert_eq!(r["verdict"], "member");
    assert_eq!(r["multiplicities"], serde_json::json!([4, 2, 0]));
    assert_eq!((r["min"].as_u64(), r["max"].as_u64()), (Some(1), Some(2)));
    let (code, v) = json(&["filtration", "ex53", "--module", "S(3)"]);
    assert_eq!(code, EXIT_DECIDED);
    assert_eq!(v["result"]["verdict"], "non_member");
    assert!(v["result"]["layers"].is_null());
}

#[test]
fn text_output_and_binary_agree_on_exit_codes() {
    let out = binary().args(["bound", "ex53"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bound"), "{text}");
    let out = binary().args(["pd", "ex53", "--module", "S(1)+P(9)"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("index_out_of_range"));
}

#[test]
fn three_properties_report() {
    let path = blocks_file(3);
    let args = ["three-props", path.as_str(), "--samples", "4", "--seed", "3"];
    let (code, v) = json(&args);
    assert!(code == EXIT_DECIDED || code == EXIT_INCONCLUSIVE, "{v}");
    assert!(v["result"]["sample_count"].as_u64().unwrap() >= 12);
    assert_eq!(v, json(&args).1);
    let (code, v) = json(&["three-props", "ex53"]);
    assert_eq!((code, v["error"]["code"].as_str()), (EXIT_INCONCLUSIVE, Some("validation_failed")));
}
