use std::fs;
use std::path::{Path, PathBuf};

use morphplan::datasets::builtin_documents;
use morphplan::{MckpSolution, StrategyReport};
use morphplan_cli::{run, EXIT_FINDINGS, EXIT_OK, EXIT_SOLVER, EXIT_USAGE};
use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn data(name: &str) -> String {
    data_dir().join(name).to_string_lossy().into_owned()
}

fn morphplan(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("morphplan").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn shipped_data_matches_builtin_documents() {
    for (name, content) in builtin_documents() {
        let shipped = fs::read_to_string(data_dir().join(&name)).unwrap();
        assert_eq!(
            shipped, content,
            "{name} is stale; re-run `morphplan datasets export data`"
        );
    }
}

#[test]
fn solve_stage_two_gives_17() {
    let (code, out, _) = morphplan(&["solve", "--instance", &data("table9.json"), "--solver", "dp"]);
    assert_eq!(code, EXIT_OK);
    let solution: MckpSolution = serde_json::from_str(&out).unwrap();
    assert_eq!(solution.total_profit.to_string(), "17.0");
    assert_eq!(solution.selection, vec![Some(1), Some(1), Some(1), Some(0)]);
}

#[test]
fn solve_plain_instance_with_each_solver() {
    for solver in ["greedy", "dp", "exhaustive"] {
        let (code, out, _) = morphplan(&["solve", "--instance", &data("table8-instance.json"), "--solver", solver]);
        assert_eq!(code, EXIT_OK, "{solver}");
        let doc = json(&out);
        assert_eq!(doc["profit"], "17.6");
        assert_eq!(doc["cost"], "19.0");
        assert_eq!(doc["solver"], solver);
    }
}

#[test]
fn solve_infeasible_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    fs::write(
        &path,
        r#"{"budget":"0.0","comparator":"exclusive","groups":[[{"profit":"1.0","cost":"0.0"}]]}"#,
    )
    .unwrap();
    let (code, out, err) = morphplan(&["solve", "--instance", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_SOLVER);
    assert!(out.is_empty());
    assert!(err.contains("infeasible"));
}

#[test]
fn diff_identity_is_empty() {
    let (code, out, _) = morphplan(&[
        "diff",
        "--model",
        &data("wireless.json"),
        "--from",
        "S1G",
        "--to",
        "S1G",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out), json("[]"));
}

#[test]
fn diff_six_to_seven() {
    let (code, out, _) = morphplan(&[
        "diff",
        "--model",
        "wireless",
        "--from",
        &data("S6G.json"),
        "--to",
        &data("S7G.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out), json(r#"[{"leaf":"B442","from":"B442_1","to":"B442_2"}]"#));
}

#[test]
fn verify_claimed_stage_one_selection() {
    let (code, out, err) = morphplan(&[
        "verify",
        "--instance",
        &data("table8.json"),
        "--selection",
        "U1_2,U2_2,U3_3,U4_3,U5_2",
    ]);
    assert_eq!(code, EXIT_SOLVER);
    assert!(err.contains("budget exceeded: 24.0 > 19.0"));
    let doc = json(&out);
    assert_eq!(doc["feasible"], false);
    assert_eq!(doc["findings"][0], "budget exceeded: 24.0 > 19.0");
}

#[test]
fn verify_pairs_on_plain_instance() {
    let (code, out, _) = morphplan(&[
        "verify",
        "--instance",
        &data("table9-instance.json"),
        "--selection",
        "1:2,2:2,3:2",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["profit"], "17.0");
    let (code, _, _) = morphplan(&[
        "verify",
        "--instance",
        &data("table9-instance.json"),
        "--selection",
        "V1_2",
    ]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, err) = morphplan(&["verify", "--instance", &data("table9.json"), "--selection", "V9_9"]);
    assert_eq!(code, EXIT_FINDINGS);
    assert!(err.contains("unknown operation id: V9_9"));
}

#[test]
fn validate_reports_findings() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut doc = json(&fs::read_to_string(data_dir().join("S5G.json")).unwrap());
    doc["assignment"].as_object_mut().unwrap().remove("B442");
    fs::write(&bad, doc.to_string()).unwrap();

    let (code, out, _) = morphplan(&["validate", &data("wireless.json"), &data("S5G.json"), "S7G"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["leaves"], 11);

    let (code, out, _) = morphplan(&["validate", &data("wireless.json"), bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_FINDINGS);
    assert_eq!(json(&out)["configurations"][0]["findings"][0], "unassigned leaf: B442");
}

#[test]
fn validate_rejects_empty_alternatives() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(
        &path,
        r#"{"id":"S","label":"s","nodes":[{"id":"A","label":"a","alternatives":[]}]}"#,
    )
    .unwrap();
    let (code, out, _) = morphplan(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FINDINGS);
    assert!(json(&out)["errors"][0]
        .as_str()
        .unwrap()
        .contains("empty alternative list"));
}

#[test]
fn plan_builtin_example_carries_discrepancy() {
    let (code, out, _) = morphplan(&["plan", "--paper-example"]);
    assert_eq!(code, EXIT_OK);
    let report = StrategyReport::parse(&out).unwrap();
    assert_eq!(report.chain, "S5G => S5G_adv1 => S5G_adv2");
    assert!(report.stages[0]
        .annotations
        .iter()
        .any(|a| a.message.contains("fails verification: budget exceeded: 24.0 > 19.0")));
    assert_eq!(report.stages[1].selected, ["V1_2", "V2_2", "V3_2"]);
}

#[test]
fn plan_from_files_and_chain_agree() {
    let (_, example, _) = morphplan(&["plan", "--paper-example"]);
    let (code, files, _) = morphplan(&[
        "plan",
        "--model",
        &data("wireless.json"),
        "--initial",
        &data("S5G.json"),
        "--stages",
        &format!("{},{}", data("table8.json"), data("table9.json")),
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, chain, _) = morphplan(&["plan", "--chain", &data("chain.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(example, files);
    assert_eq!(example, chain);
}

#[test]
fn plan_greedy_includes_trace() {
    let (code, out, _) = morphplan(&["plan", "--paper-example", "--solver", "greedy"]);
    assert_eq!(code, EXIT_OK);
    let report = StrategyReport::parse(&out).unwrap();
    let trace = report.stages[0].greedy_trace.as_ref().unwrap();
    assert!(trace.iter().any(|t| t.decision == "skipped: would exceed budget"));
}

#[test]
fn plan_stale_stage_fails() {
    let (code, out, err) = morphplan(&[
        "plan",
        "--model",
        "wireless",
        "--initial",
        "S5G",
        "--stages",
        &data("table9.json"),
    ]);
    assert_eq!(code, EXIT_FINDINGS);
    assert!(err.contains("stage stage2 failed"));
    assert!(StrategyReport::parse(&out).unwrap().failure.is_some());
}

#[test]
fn report_round_trips_and_renders_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strategy.json");
    let (_, out, _) = morphplan(&["plan", "--paper-example"]);
    fs::write(&path, &out).unwrap();
    let (code, again, _) = morphplan(&["report", "--strategy", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(again, out);
    let (code, text, _) = morphplan(&["report", "--strategy", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.starts_with("strategy: S5G => S5G_adv1 => S5G_adv2\n"));
    assert!(!text.contains('\x1b'));
}

#[test]
fn export_writes_all_documents() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = morphplan(&["datasets", "export", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let names: Vec<String> = serde_json::from_str(&out).unwrap();
    assert_eq!(names.len(), builtin_documents().len());
    for name in names {
        assert!(dir.path().join(name).is_file());
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(morphplan(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(morphplan(&["solve", "--instance", "x.json", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(
        morphplan(&["solve", "--instance", "x.json", "--solver", "simplex"]).0,
        EXIT_USAGE
    );
    let (code, _, err) = morphplan(&["solve", "--instance", "/nonexistent/x.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cannot read"));
    let (code, out, _) = morphplan(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Usage"));
}
