//! End-to-end runs of the `unirigid` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use unirigid::fq::FqField;
use unirigid::groups::Heis;
use unirigid::harness::HeisDeck;
use unirigid::rigidity::heis_sample_set;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unirigid")).args(args).output().expect("spawning unirigid")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn jsonl(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_writes_jsonl_and_exits_zero() {
    let o = run(&["verify", "group-laws", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines = jsonl(&stdout(&o));
    assert_eq!(lines.len(), 6);
    assert!(lines[..5].iter().all(|l| l["type"] == "record" && l["pass"] == true));
    assert_eq!(lines[5]["type"], "summary");
    assert_eq!((lines[5]["passed"].as_u64(), lines[5]["total"].as_u64()), (Some(5), Some(5)));
    assert!(stderr(&o).contains("PASS"));
}

#[test]
fn bad_input_exits_two() {
    let o = run(&["verify", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("usage error"));

    let o = run(&["--p", "2", "--e", "2", "verify", "prop-ab", "--q", "2,4", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("e > 2"), "{}", stderr(&o));

    let o = run(&["--schedule", "not-a-schedule", "verify", "prop-ab", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_is_seeded() {
    let a = run(&["--seed", "4", "gen", "prop-ab", "--trials", "3"]);
    let b = run(&["--seed", "4", "gen", "prop-ab", "--trials", "3"]);
    let c = run(&["--seed", "5", "gen", "prop-ab", "--trials", "3"]);
    assert_eq!(a.status.code(), Some(0));
    let lines = jsonl(&stdout(&a));
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l["kind"] == "prop-ab"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn files_csv_and_merge() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (ja, jb, csv) = (path("a.jsonl"), path("b.jsonl"), path("gcd.csv"));

    let o = run(&["--json-out", &ja, "verify", "gcd-bounds", "--trials", "6", "--q", "3", "--csv-out", &csv]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("gcd_c = "));
    let table = fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("suite,index,k,q,measured,gcd_deg,reference,stable,pass"));
    assert_eq!(table.lines().count(), 7);

    let o = run(&["--json-out", &jb, "verify", "frobenius-mono", "--trials", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = run(&["report", "--merge", &ja, &jb]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["total"], 10);
    assert_eq!(summary["passed"], 10);
    assert_eq!(summary["suites"][0]["suite"], "gcd-bounds");
    assert_eq!(summary["suites"][1]["suite"], "frobenius-mono");
}

#[test]
fn merge_of_failing_report_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.jsonl");
    fs::write(&f, "{\"type\":\"summary\",\"schema\":\"unirigid.suite.v1\",\"suite\":\"prop-ab\",\"passed\":3,\"total\":4}\n")
        .unwrap();
    let o = run(&["report", "--merge", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    fs::write(&f, "{\"type\":\"summary\",\"schema\":\"other.v0\",\"passed\":1,\"total\":1}\n").unwrap();
    assert_eq!(run(&["report", "--merge", f.to_str().unwrap()]).status.code(), Some(2));
}

fn write_deck(path: &Path) {
    let f = FqField::new(3, 1).unwrap();
    let heis = Heis::new(1, &f).unwrap();
    let samples = heis_sample_set(&heis).into_iter().map(|g| (g.clone(), g)).collect();
    let deck = HeisDeck { field: f.to_params(), m: 1, samples };
    fs::write(path, serde_json::to_string(&deck).unwrap()).unwrap();
}

#[test]
fn solve_reads_a_deck() {
    let dir = tempfile::tempdir().unwrap();
    let deck = dir.path().join("deck.json");
    write_deck(&deck);
    let o = run(&["solve", "heis", "--in", deck.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sol: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(sol["tau"]["alpha"], 1);
    assert_eq!(sol["ambiguous"], false);

    // A Heisenberg deck is not a G2 deck.
    let o = run(&["solve", "g2", "--in", deck.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parsing deck"));
}
