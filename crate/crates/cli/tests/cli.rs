use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ilm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run ilm")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn montagna_is_derivable_in_ilm_only() {
    let dir = tempfile::tempdir().unwrap();
    let m = "p |> q -> (p & []r) |> (q & []r)";
    assert_eq!(code(&ilm(&["prove", "--logic", "ilm", m], dir.path())), 0);
    assert_eq!(code(&ilm(&["prove", "--logic", "il", m], dir.path())), 1);
}

#[test]
fn refuted_certificate_reloads_in_a_separate_process() {
    let dir = tempfile::tempdir().unwrap();
    let out = ilm(&["prove", "--logic", "gl", "p -> []p", "--cert", "out.json", "--json"], dir.path());
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["verdict"], "refuted");
    assert!(dir.path().join("out.json").exists());
    let check = ilm(&["modelcheck", "--logic", "gl", "out.json", "--json"], dir.path());
    assert_eq!(code(&check), 0);
    let v = json(&check);
    assert_eq!(v["frame_valid"], true);
    assert_eq!(v["forced"], true);
    assert_eq!(v["formula"], "~(p -> []p)");
    // The formula itself is false at the root.
    let again = ilm(&["modelcheck", "out.json", "p -> []p"], dir.path());
    assert_eq!(code(&again), 1);
}

#[test]
fn tsg_witness_is_box_p() {
    let dir = tempfile::tempdir().unwrap();
    let out = ilm(&["classify", "tsg", "[][]p -> []p", "--json"], dir.path());
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["witness"], "[]p");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&ilm(&["prove", "p |>"], d)), 3);
    assert_eq!(code(&ilm(&["prove", "--logic", "gl", "p |> q"], d)), 3);
    assert_eq!(code(&ilm(&["frobnicate"], d)), 3);
    assert_eq!(code(&ilm(&["prove", "--logic", "kt", "p"], d)), 3);
    assert_eq!(code(&ilm(&["sat", "p & []~p"], d)), 0);
    assert_eq!(code(&ilm(&["sat", "p & ~p"], d)), 1);
    assert_eq!(code(&ilm(&["countermodel", "[]p -> p"], d)), 0);
    assert_eq!(code(&ilm(&["countermodel", "[]([]p -> p) -> []p"], d)), 1);
    assert_eq!(code(&ilm(&["classify", "sigma1", "p & []p"], d)), 1);
    assert_eq!(code(&ilm(&["classify", "delta1", "[]p"], d)), 1);
    assert_eq!(code(&ilm(&["rules", "ix", "p"], d)), 3);
    assert_eq!(code(&ilm(&["rules", "i"], d)), 3);
    // A countermodel with a successor needs more than one step.
    assert_eq!(code(&ilm(&["prove", "--max-steps", "1", "p -> []p"], d)), 2);
    assert_eq!(code(&ilm(&["prove"], d)), 3);
    assert_eq!(code(&ilm(&["--help"], d)), 0);
}

#[test]
fn sigma1_no_comes_with_a_seeded_countermodel() {
    let dir = tempfile::tempdir().unwrap();
    let out = ilm(&["classify", "sigma1", "p & []p", "--json", "--cert", "s.json"], dir.path());
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert!(v["sigma1_countermodel"]["root"].is_string());
    let check = ilm(&["modelcheck", "s.json"], dir.path());
    assert_eq!(code(&check), 0);
}

#[test]
fn close_and_export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let model = r#"{"worlds":["a","b","c"],"R":[["a","b"],["b","c"]],"S":[],"val":{"c":["p"]}}"#;
    std::fs::write(dir.path().join("m.json"), model).unwrap();
    let out = ilm(&["close", "m.json", "--steps", "--json"], dir.path());
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let r = v["model"]["R"].as_array().unwrap();
    assert!(r.contains(&serde_json::json!(["a", "c"])));
    assert!(v["repairs"].as_u64().unwrap() > 0);
    std::fs::write(dir.path().join("closed.json"), v["model"].to_string()).unwrap();
    assert_eq!(code(&ilm(&["modelcheck", "closed.json"], dir.path())), 0);
    assert_eq!(code(&ilm(&["modelcheck", "m.json"], dir.path())), 1);

    let dot = ilm(&["export-dot", "m.json"], dir.path());
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"a\" -> \"b\";"));
    assert!(text.contains("c\\np"));

    let cyclic = r#"{"worlds":["a","b"],"R":[["a","b"],["b","a"]]}"#;
    std::fs::write(dir.path().join("cyc.json"), cyclic).unwrap();
    assert_eq!(code(&ilm(&["close", "cyc.json"], dir.path())), 3);
}

#[test]
fn corpus_keeps_file_order_for_any_job_count() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.txt"), "# sample\n[]p -> [][]p\n\np -> []p\nbad |>\n[]p -> p\n").unwrap();
    let one = ilm(&["prove", "--corpus", "c.txt", "--jobs", "1", "--json"], dir.path());
    let four = ilm(&["prove", "--corpus", "c.txt", "--jobs", "4", "--json"], dir.path());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&one), 3);
    let v = json(&one);
    let exits: Vec<u64> = v["results"].as_array().unwrap().iter().map(|r| r["exit"].as_u64().unwrap()).collect();
    assert_eq!(exits, [0, 1, 3, 1]);
}

#[test]
fn proof_files_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let proof = "1. [](p -> q) -> ([]p -> []q) ; L1\n";
    std::fs::write(dir.path().join("ok.proof"), proof).unwrap();
    let args = ["prove", "--logic", "gl", "--check-proof", "ok.proof"];
    assert_eq!(code(&ilm(&args, dir.path())), 0);
    let mut with_goal = args.to_vec();
    with_goal.push("[]p -> p");
    assert_eq!(code(&ilm(&with_goal, dir.path())), 1);
    std::fs::write(dir.path().join("bad.proof"), "1. p ; MP 1 2\n").unwrap();
    assert_eq!(code(&ilm(&["prove", "--check-proof", "bad.proof"], dir.path())), 3);
}
