//! Black-box tests of the command-line interface: output lines and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taxicab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.to_string())
        .collect()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn decompose_4104() {
    let out = run(&["decompose", "4104"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_lines(&out),
        vec![
            "DECOMP N=4104 x=2 y=16 sign=+",
            "DECOMP N=4104 x=9 y=15 sign=+",
        ]
    );
}

#[test]
fn decompose_3_is_clean_not_found() {
    let out = run(&["decompose", "3"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stdout_lines(&out).is_empty());
}

#[test]
fn decompose_signed_91() {
    let out = run(&["decompose", "91", "--signed"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_lines(&out),
        vec![
            "DECOMP N=91 x=3 y=4 sign=+",
            "DECOMP N=91 x=6 y=5 sign=-",
        ]
    );
}

#[test]
fn decompose_with_factors() {
    let out = run(&["decompose", "4104", "--factors", "2^3,3^3,19"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_lines(&out).len(), 2);

    let out = run(&["decompose", "4104", "--factors", "2^3,3^3"]);
    assert_eq!(exit_code(&out), 2);

    let out = run(&["decompose", "4104", "--factors", "4^3,64"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn decompose_rejects_even_power() {
    let out = run(&["decompose", "4104", "--power", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn search_finds_r6() {
    let out = run(&["search", "--seed", "W5", "--from", "2", "--to", "79"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_lines(&out),
        vec!["FOUND M=79 ways=6 value=24153319581254312065344"]
    );
}

#[test]
fn search_short_range_not_found() {
    let out = run(&["search", "--seed", "W5", "--from", "2", "--to", "10"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stdout_lines(&out).is_empty());
}

#[test]
fn search_rejects_unknown_seed_and_bad_range() {
    let out = run(&["search", "--seed", "T99", "--from", "2", "--to", "10"]);
    assert_eq!(exit_code(&out), 2);

    let out = run(&["search", "--seed", "W5", "--from", "1", "--to", "10"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn search_accepts_numeric_seed() {
    // 4104 is 2-way; no multiplier in [2,4] yields a third way
    let out = run(&["search", "--seed", "4104", "--from", "2", "--to", "4"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn verify_all_entries() {
    let out = run(&["verify"]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 15);
    assert!(lines.iter().all(|l| l.starts_with("OK ")));
}

#[test]
fn verify_single_entry() {
    let out = run(&["verify", "--entry", "T7"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_lines(&out), vec!["OK T7 (7 decompositions)"]);

    let out = run(&["verify", "--entry", "T99"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn identity_single() {
    let out = run(&["identity", "--name", "gerardin-square", "--params", "2,1"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_lines(&out),
        vec!["IDENTITY gerardin-square params=2,1 OK"]
    );

    let out = run(&["identity", "--name", "no-such-identity", "--params", "1,1"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn identity_grid_sweep() {
    let out = run(&["identity", "--all", "--grid", "3"]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 14);
    assert!(lines.iter().all(|l| l.starts_with("IDENTITY ") && l.ends_with(" OK")));
}

#[test]
fn bounds_value() {
    let out = run(&["bounds", "--power", "3", "--ways", "2"]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert!(lines == vec!["1065"] || lines == vec!["1064"]);

    let out = run(&["bounds", "--power", "4", "--ways", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn cabtaxi_91() {
    let out = run(&["cabtaxi", "91"]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "CABTAXI N=91 order=2");
    assert!(lines.contains(&"DECOMP N=91 x=3 y=4 sign=+".to_string()));
    assert!(lines.contains(&"DECOMP N=91 x=6 y=5 sign=-".to_string()));
}

#[test]
fn cabtaxi_without_representations() {
    let out = run(&["cabtaxi", "5"]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(stdout_lines(&out), vec!["CABTAXI N=5 order=0"]);
}
