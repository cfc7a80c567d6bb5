use num_rational::Rational64;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use zhat::exactseries::Series;
use zhat::zhat::Zhat;
use zhat::{corpus, QSeries};

fn zhat_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zhat"))
}

fn run(args: &[&str]) -> Output {
    zhat_cmd().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn series_at(v: &Value) -> QSeries {
    let rec = serde_json::from_value(v["series"].clone()).expect("series record");
    Series::from_record(&rec).expect("valid record")
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn e6_family_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "e6.graph", &corpus::e6().to_text());
    let out = run(&["--format", "json", "zhat", &g, "--order", "25"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let rows = doc["spinc"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let lib = Zhat::new(&corpus::e6())
        .unwrap()
        .zhat_all(Rational64::from_integer(25), None)
        .unwrap();
    for (row, want) in rows.iter().zip(&lib) {
        assert_eq!(&series_at(&row["value"]), want);
    }
    let zero = rows
        .iter()
        .position(|r| r["c1"].as_array().unwrap().iter().all(|x| x == 0))
        .unwrap();
    assert!(series_at(&rows[zero]["value"]).agrees_with(&corpus::e6_zhat0()));
    assert_eq!(doc["meta"]["h_order"], "3");
    assert_eq!(doc["meta"]["graph_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = [
        "--format",
        "json",
        "zhat",
        "--seifert",
        "1; 3/1 4/1 5/1",
        "--order",
        "6",
    ];
    let a = zhat_cmd().args(args).env("ZHAT_THREADS", "1").output().unwrap();
    let b = zhat_cmd().args(args).env("ZHAT_THREADS", "4").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = zhat_cmd()
        .args(["casson-walker", "--seifert", "2; 2/1 3/2 3/2"])
        .env("ZHAT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seifert_compare_passes() {
    let out = run(&["seifert-reduce", "2; 2/1 3/2 3/2", "--order", "25", "--compare"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("compare: PASS"), "{text}");
    assert!(text.contains("plumbing path"));
}

#[test]
fn connections_footer() {
    let out = run(&["connections", "2", "3", "5", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.trim_end().ends_with("λ^P = 59, μ = 236, μ/4 = λ^P: true"),
        "{text}"
    );
}

#[test]
fn connections_reject_common_factors() {
    let out = run(&["--format", "json", "connections", "2", "4", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "not_coprime");
}

#[test]
fn malformed_graph_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "bad.graph", "3\n-2 -2 x\n0 1\n");
    let out = run(&["--format", "json", "z0", &g, "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = &json_of(&out)["error"];
    assert_eq!(err["kind"], "parse");
    assert_eq!(err["line"], 2);
    assert_eq!(err["column"], 7);
}

#[test]
fn indefinite_input_is_a_precondition_error() {
    let out = run(&["--format", "json", "z0", "--seifert", "1; 2/1 3/1 5/1", "--order", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "not_negative_definite");
}

#[test]
fn stdin_graph_and_scaled_z0() {
    let mut child = zhat_cmd()
        .args(["--format", "json", "z0", "-", "--order", "75", "--scaled"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    std::io::Write::write_all(child.stdin.as_mut().unwrap(), corpus::e6().to_text().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(series_at(&json_of(&out)["value"]).agrees_with(&corpus::e6_z0_cubed()));
}

#[test]
fn seed_corpus_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["seed-corpus", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let load = |name: &str| {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("# "), "{name} lacks a header");
        let body: String = text.lines().filter(|l| !l.starts_with('#')).collect();
        zhat::exactseries::parse_series_json(&body).unwrap()
    };
    assert_eq!(load("e6_zhat0.series"), corpus::e6_zhat0());
    assert_eq!(load("y1_z0.series"), corpus::y1_z0());
    let g = std::fs::read_to_string(dir.path().join("y1.graph")).unwrap();
    assert_eq!(zhat::plumbing::PlumbingGraph::parse(&g).unwrap(), corpus::y1());
    let golden = dir.path().join("e6.graph");
    let out = run(&["--format", "json", "identify", golden.to_str().unwrap()]);
    let doc = json_of(&out);
    assert_eq!(doc["result"]["Matched"]["p"], 6);
}

#[test]
fn moves_script_preserves_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "e6.graph", &corpus::e6().to_text());
    let script = dir.path().join("moves.txt");
    std::fs::write(
        &script,
        "# two blow-ups and an undo\nblowup-leaf 0 -1\nblowup-edge 0 3 -1\nblowdown 7\n",
    )
    .unwrap();
    let out = run(&["--format", "json", "moves", &g, "--script", script.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert_eq!(doc["moves"].as_array().unwrap().len(), 3);
    assert_eq!(doc["casson_walker_before"], doc["casson_walker_after"]);
    assert_eq!(doc["meta"]["h_order"], "3");

    std::fs::write(&script, "blowup-leaf 0 -1\nblowdown 0\n").unwrap();
    let out = run(&["--format", "json", "moves", &g, "--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "inapplicable");
}

#[test]
fn splice_and_normalized_series_for_y_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let y1 = write_graph(dir.path(), "y1.graph", &corpus::y1().to_text());
    let y2 = write_graph(dir.path(), "y2.graph", &corpus::y2().to_text());
    let out = run(&["--format", "json", "splice", &y1]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["adjugate"]["holds"], true);
    let a = json_of(&run(&["--format", "json", "z0-normalized", &y1, "--order", "40"]));
    let b = json_of(&run(&["--format", "json", "z0-normalized", &y2, "--order", "40"]));
    assert_eq!(a["casson_walker"], "-4");
    assert_eq!(b["casson_walker"], "-9");
    assert_eq!(series_at(&a["value"]), series_at(&b["value"]));
}

#[test]
fn unknown_spinc_index() {
    let out = run(&[
        "--format",
        "json",
        "zhat",
        "--seifert",
        "2; 2/1 3/2 3/2",
        "--order",
        "5",
        "--spinc",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "unknown_spinc");
}
