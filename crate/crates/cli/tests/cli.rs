use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_commrank"));
    c.env_remove("MONO_CAP");
    c
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    (
        o.status.code().unwrap(),
        serde_json::from_slice(&o.stdout).expect("json output"),
    )
}

#[test]
fn gpqa_klein_case() {
    let (code, v) = json(&["gpqa", "--p", "2", "--q", "2", "--a", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "report-v1");
    let p = &v["payload"];
    assert_eq!(
        (p["order"].as_u64(), p["rho"].as_u64(), p["r"].as_u64()),
        (Some(8), Some(1), Some(2))
    );
    assert_eq!(p["commutator"], serde_json::json!([[0, 0], [1, 1]]));
}

#[test]
fn gpqa_sizes_and_text() {
    let o = run(&["gpqa", "--p", "3", "--q", "2", "--a", "1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("|C|: 4") && text.contains("|D|: 8"), "{text}");
}

#[test]
fn gpqa_input_errors() {
    assert_eq!(
        run(&["gpqa", "--p", "3", "--q", "2", "--a", "0,0,0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["gpqa", "--p", "4", "--q", "2", "--a", "0,0,0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["gpqa", "--p", "3", "--q", "2", "--a", "0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["gpqa", "--p", "3", "--q", "2", "--a", "x"]).status.code(),
        Some(2)
    );
}

#[test]
fn cap_exceeded_exit_code() {
    let o = bin()
        .env("MONO_CAP", "10")
        .args(["gpqa", "--p", "3", "--q", "2", "--a", "1,0,0"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["invariants", "--gens", &data("pattern_group.json"), "--cap", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        run(&["invariants", "--gens", &data("pattern_group.json"), "--cap", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn burnside_on_pattern_group() {
    let o = run(&["burnside", "--gens", &data("pattern_group.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("irreducible: true"));
    let (code, v) = json(&["burnside", "--gens", &data("triangular.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["irreducible"], false);
    assert_eq!(v["payload"]["invariant_subspace"]["subspace"]["dim"], 1);
}

#[test]
fn decompose_block_sum() {
    let (code, v) = json(&["decompose", "--gens", &data("pattern_group_plus_signs.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["status"], "verified");
    assert_eq!(v["payload"]["dim"], 3);
    assert_eq!(
        run(&["decompose", "--gens", &data("big_rank.json")]).status.code(),
        Some(2)
    );
}

#[test]
fn invariants_of_diagonal_group() {
    let (code, v) = json(&["invariants", "--gens", &data("diagonal.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["r"], 0);
    assert_eq!(v["payload"]["abelian"], true);
    assert_eq!(v["payload"]["order"], 8);
}

#[test]
fn stabilizer_of_a_line() {
    let (code, v) = json(&[
        "stabilizer",
        "--gens",
        &data("pattern_group.json"),
        "--subspace",
        &data("line.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["holds"], true);
    assert_eq!(v["payload"]["stabilizer_order"], 4);
}

#[test]
fn bad_files() {
    assert_eq!(
        run(&["invariants", "--gens", "/nonexistent.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["burnside", "--gens", &data("line.json")]).status.code(), Some(2));
}

#[test]
fn verify_named_case() {
    let o = run(&["verify-paper", "--case", "2.8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2.8    <T,S>"));
    assert_eq!(run(&["verify-paper", "--case", "9.9"]).status.code(), Some(2));
}

#[test]
fn verify_rho_two_sweep() {
    let (code, v) = json(&["verify-paper", "--case", "3.3", "--p-max", "5", "--q-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["summary"]["3.3"]["fail"], 0);
}

#[test]
fn verify_all_small_reports_failures_and_findings() {
    // the structure checks fail at p = q = 3; see the README
    let o = run(&["verify-paper", "--case", "all", "--p-max", "3", "--q-max", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("\nfindings:\n") && text.contains("case (iv)") && text.contains("case (v)"));
    assert!(text
        .lines()
        .filter(|l| l.contains(" FAIL "))
        .all(|l| l.contains("G(3,3,")));
}

#[test]
fn json_payload_is_deterministic_and_out_file_matches() {
    let args = [
        "verify-paper",
        "--case",
        "all",
        "--p-max",
        "3",
        "--q-max",
        "3",
        "--threads",
        "4",
    ];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(a["payload"].to_string(), b["payload"].to_string());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("verify_out.json");
    let mut with_out = args.to_vec();
    let out_s = out.display().to_string();
    with_out.extend(["--format", "json", "--out", &out_s]);
    let o = run(&with_out);
    assert!(o.stdout.is_empty());
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(a["payload"], c["payload"]);
}
