use std::collections::BTreeSet;
use std::process::Command;

use azcong::cli::{self, EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE};

const GOLDEN_CSV: &str = include_str!("golden/sweep_5_13.csv");
const GOLDEN_JSON: &str = include_str!("golden/sweep_5_13.json");

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("azcong").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

type Tuple = (String, u64, u64, String, String, bool, String);

fn csv_tuples(text: &str) -> Vec<Tuple> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].to_string(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
                r[3].to_string(),
                r[4].to_string(),
                r[5].parse().unwrap(),
                r[6].to_string(),
            )
        })
        .collect()
}

fn json_tuples(text: &str) -> Vec<Tuple> {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["check_id"].as_str().unwrap().to_string(),
                r["p"].as_u64().unwrap(),
                r["m"].as_u64().unwrap(),
                r["lhs"].as_str().unwrap().to_string(),
                r["rhs"].as_str().unwrap().to_string(),
                r["passed"].as_bool().unwrap(),
                r["detail"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn csv_matches_golden_file() {
    let (code, out, _) = run(&["sweep", "--pmin", "5", "--pmax", "13", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, GOLDEN_CSV);
}

#[test]
fn json_matches_golden_file() {
    let (code, out, _) = run(&[
        "sweep", "--pmin", "5", "--pmax", "13", "--format", "json", "--omit-timing",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, GOLDEN_JSON);
}

#[test]
fn csv_and_json_carry_identical_tuples() {
    let args = ["sweep", "--pmin", "5", "--pmax", "60", "--workers", "3"];
    let (_, csv_out, _) = run(&[&args[..], &["--format", "csv"]].concat());
    let (_, json_out, _) = run(&[&args[..], &["--format", "json"]].concat());
    let a = csv_tuples(&csv_out);
    assert_eq!(a.len(), 15 * 10);
    assert_eq!(a, json_tuples(&json_out));
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let s = &v["summary"];
    assert_eq!(s["total"], 150);
    assert_eq!(s["passed"], 150);
    assert_eq!(s["failed"], 0);
    assert!(s["elapsed_ms"].is_u64());
}

#[test]
fn csv_is_lf_terminated_with_fixed_header() {
    let (_, out, _) = run(&["sweep", "--pmin", "7", "--pmax", "7", "--format", "csv"]);
    assert!(!out.contains('\r'));
    assert!(out.starts_with("check_id,p,m,lhs,rhs,passed,detail\n"));
    assert!(out.ends_with('\n'));
}

#[test]
fn output_file_receives_data() {
    let dir = std::env::temp_dir().join(format!("azcong-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let (code, out, _) = run(&[
        "sweep", "--pmin", "5", "--pmax", "13", "--format", "csv", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), GOLDEN_CSV);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn default_pmax_depends_on_selector() {
    let (_, out, _) = run(&["sweep", "--checks", "B3", "--format", "csv", "--pmin", "1990"]);
    let ps: BTreeSet<u64> = csv_tuples(&out).iter().map(|t| t.1).collect();
    assert_eq!(ps.into_iter().collect::<Vec<_>>(), vec![1993, 1997, 1999]);
    let (_, out, _) = run(&["sweep", "--checks", "A5", "--format", "csv", "--pmin", "490"]);
    let ps: Vec<u64> = csv_tuples(&out).iter().map(|t| t.1).collect();
    assert_eq!(ps, vec![491, 499]);
}

#[test]
fn exact_flag_cross_validates() {
    let (code, out, _) = run(&[
        "sweep", "--pmin", "5", "--pmax", "13", "--format", "csv", "--exact",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, GOLDEN_CSV);
    let (code, out, _) = run(&["check", "NEW1", "--prime", "13", "--exact", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("NEW1,13,1,"));
}

#[test]
fn table_format_summarizes() {
    let (code, out, _) = run(&["check", "B3", "--prime", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("pass"));
    assert!(out.trim_end().ends_with("1 checks, 1 passed, 0 failed"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_azcong");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let ok = status(&["check", "A4", "--prime", "5"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(ok.stderr.is_empty());

    let not_prime = status(&["check", "A4", "--prime", "9"]);
    assert_eq!(not_prime.status.code(), Some(EXIT_PRECONDITION));
    assert!(not_prime.stdout.is_empty());
    assert!(String::from_utf8_lossy(&not_prime.stderr).contains("not prime"));

    let usage = status(&["sweep", "--format", "yaml"]);
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));

    let too_small = status(&["check", "B3", "--prime", "3"]);
    assert_eq!(too_small.status.code(), Some(EXIT_PRECONDITION));
}
