use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use llr_scl::{construct_frozen_set, encode};

fn llrscl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_llrscl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_mask_file() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("code.mask");
    let out = llrscl(&[
        "construct",
        "--n",
        "4",
        "--k",
        "2",
        "--z0",
        "0.5",
        "--out",
        path_str(&mask),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&mask).unwrap(), "4 2\n1100\n");

    let out = llrscl(&["construct", "--n", "2", "--k", "2"]);
    assert_eq!(stdout(&out), "2 2\n00\n");
}

#[test]
fn construct_rejects_bad_length() {
    let out = llrscl(&["construct", "--n", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("power of two"));
}

#[test]
fn decode_recovers_noiseless_frames() {
    let dir = tempfile::tempdir().unwrap();
    let spec = construct_frozen_set(16, 8, 0.5).unwrap();
    let mask = dir.path().join("code.mask");
    fs::write(&mask, spec.to_mask_file()).unwrap();

    let messages = [[1u8, 0, 1, 1, 0, 0, 1, 0], [0, 1, 1, 1, 1, 0, 0, 1]];
    let rows: Vec<String> = messages
        .iter()
        .map(|m| {
            encode(&spec, m)
                .unwrap()
                .iter()
                .map(|&b| if b == 0 { "30" } else { "-30" })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let llrs = dir.path().join("llrs.csv");
    fs::write(&llrs, rows.join("\n") + "\n").unwrap();

    for extra in [
        &[][..],
        &["--metric", "exact", "--kernel", "exact"],
        &["--q", "6"],
    ] {
        let mut args = vec![
            "decode",
            "--mask",
            path_str(&mask),
            "--llrs",
            path_str(&llrs),
            "--list",
            "2",
        ];
        args.extend_from_slice(extra);
        let out = llrscl(&args);
        assert!(
            out.status.success(),
            "{extra:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = stdout(&out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "frame,message,metric,min_gap");
        assert!(
            lines[1].starts_with("0,10110010,"),
            "{extra:?}: {}",
            lines[1]
        );
        assert!(
            lines[2].starts_with("1,01111001,"),
            "{extra:?}: {}",
            lines[2]
        );
    }

    let out = llrscl(&[
        "decode",
        "--mask",
        path_str(&mask),
        "--llrs",
        path_str(&llrs),
        "--metric",
        "exact",
        "--kernel",
        "exact",
        "--oracle-check",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().ends_with(",oracle"));
    assert!(
        text.lines().skip(1).all(|l| l.ends_with(",agree")),
        "{text}"
    );
}

#[test]
fn decode_rejects_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("code.mask");
    fs::write(&mask, "4 2\n1100\n").unwrap();
    let llrs = dir.path().join("bad.csv");

    fs::write(&llrs, "1.0,2.0,abc,4.0\n").unwrap();
    let out = llrscl(&[
        "decode",
        "--mask",
        path_str(&mask),
        "--llrs",
        path_str(&llrs),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a number"));

    fs::write(&llrs, "1.0,2.0,3.0\n").unwrap();
    let out = llrscl(&[
        "decode",
        "--mask",
        path_str(&mask),
        "--llrs",
        path_str(&llrs),
    ]);
    assert_eq!(out.status.code(), Some(2));

    fs::write(&mask, "4 2\n11x0\n").unwrap();
    let out = llrscl(&[
        "decode",
        "--mask",
        path_str(&mask),
        "--llrs",
        path_str(&llrs),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let csv = dir.path().join(name);
        let mut args = vec![
            "simulate",
            "--n",
            "64",
            "--k",
            "32",
            "--list",
            "4",
            "--snr",
            "1.0:0.5:3.0",
            "--seed",
            "7",
            "--frames",
            "300",
            "--out",
            path_str(&csv),
        ];
        args.extend_from_slice(extra);
        let out = llrscl(&args);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = fs::read_to_string(&csv).unwrap();
        assert_eq!(stdout(&out), text);
        (text, csv.with_extension("json"))
    };
    let (a, manifest) = run("a.csv", &[]);
    let (b, _) = run("b.csv", &["--threads", "1"]);
    let (c, _) = run("c.csv", &["--sequential"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.lines().count(), 6);
    assert!(
        a.starts_with("ebn0_db,frames,frame_errors,bit_errors,fer,ber,ci_low,ci_high\n1.0,300,")
    );

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(json["command"], "simulate");
    assert_eq!(json["seed"], 7);
    assert_eq!(json["config"]["list_size"], 4);
    assert_eq!(json["config"]["snr_db"].as_array().unwrap().len(), 5);
    assert!(json["rng_algorithm"].as_str().unwrap().contains("ChaCha20"));
    assert!(json["git_describe"].is_string());
    assert!(json["outputs"]["csv"].as_str().unwrap().ends_with("a.csv"));
}

#[test]
fn simulate_with_pinned_mask_matches_construction() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("code.mask");
    assert!(llrscl(&[
        "construct",
        "--n",
        "32",
        "--k",
        "16",
        "--out",
        path_str(&mask)
    ])
    .status
    .success());
    let common = ["--snr", "2", "--frames", "200", "--list", "2"];
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let mut args = vec!["simulate", "--mask", path_str(&mask), "--out", path_str(&a)];
    args.extend_from_slice(&common);
    assert!(llrscl(&args).status.success());
    let mut args = vec!["simulate", "--n", "32", "--k", "16", "--out", path_str(&b)];
    args.extend_from_slice(&common);
    assert!(llrscl(&args).status.success());
    assert_eq!(
        fs::read_to_string(a).unwrap(),
        fs::read_to_string(b).unwrap()
    );

    let out = llrscl(&[
        "simulate",
        "--mask",
        path_str(&mask),
        "--n",
        "64",
        "--out",
        path_str(&dir.path().join("c.csv")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_rejects_bad_sweep() {
    let out = llrscl(&["simulate", "--n", "16", "--k", "8", "--snr", "3:0.5:1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn costmodel_paper_check_passes() {
    let out = llrscl(&[
        "costmodel",
        "--n",
        "1024",
        "--list",
        "4",
        "--q",
        "6",
        "--paper-check",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("43134q + 4096"));
}

#[test]
fn costmodel_report_and_json() {
    let out = llrscl(&["costmodel", "--n", "1024", "--list", "4", "--q", "6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("86088q + 4096"));

    let out = llrscl(&["costmodel", "--n", "2", "--list", "1", "--q", "2", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["llr_scl"]["pe_count"], 1);
    assert_eq!(json["llr_scl"]["latency_cycles"], 4);
    assert_eq!(json["llr_scl"]["llr_memory_bits"]["per_q"], 3.0);

    assert_eq!(llrscl(&["costmodel", "--list", "3"]).status.code(), Some(1));
}

#[test]
fn sortnet_prints_layers() {
    let out = llrscl(&["sortnet", "--size", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("size 8: 19 comparators in 6 layers\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("layer ")).count(), 6);
    assert_eq!(llrscl(&["sortnet", "--size", "6"]).status.code(), Some(1));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(llrscl(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(llrscl(&["simulate"]).status.code(), Some(1));
    let help = llrscl(&["simulate", "--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = stdout(&help);
    for flag in [
        "--snr",
        "--seed",
        "--frames",
        "--min-errors",
        "--metric",
        "--kernel",
        "--q",
        "--all-zero",
        "--threads",
    ] {
        assert!(text.contains(flag), "help lacks {flag}");
    }
}
