//! End-to-end tests of the binary: exit codes, file outputs, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vizing"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vizing-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).unwrap();
}

fn petersen_text() -> String {
    let mut lines = Vec::new();
    for i in 0..5 {
        lines.push(format!("{} {}", i, (i + 1) % 5));
    }
    for i in 0..5 {
        lines.push(format!("{} {}", 5 + i, 5 + (i + 2) % 5));
    }
    for i in 0..5 {
        lines.push(format!("{} {}", i, i + 5));
    }
    lines.join("\n")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

#[test]
fn k2_sequential_colors_single_edge() {
    let input = tmp("k2.txt");
    let out_path = tmp("k2.colors");
    write(&input, "0 1\n");
    let out = bin()
        .args(["color", "--input"])
        .arg(&input)
        .args(["--mode", "sequential", "--out"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{out:?}");
    assert_eq!(fs::read_to_string(&out_path).unwrap(), "0 1\n");
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("\"colored_count\":1"), "{summary}");
}

#[test]
fn petersen_distributed_is_proper_and_verifies() {
    let input = tmp("petersen.txt");
    let colors = tmp("petersen.colors");
    let stats = tmp("petersen.stats");
    write(&input, &petersen_text());
    let out = bin()
        .args(["color", "--input"])
        .arg(&input)
        .args(["--mode", "distributed", "--seed", "42", "--out"])
        .arg(&colors)
        .args(["--stats-out"])
        .arg(&stats)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{out:?}");
    // 15 colored edges, palette 4.
    let text = fs::read_to_string(&colors).unwrap();
    assert_eq!(text.lines().count(), 15);
    for line in text.lines() {
        let c: usize = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(c >= 1 && c <= 4);
    }
    let stats_text = fs::read_to_string(&stats).unwrap();
    assert!(stats_text.contains("\"kind\":\"phase\""));
    assert!(stats_text.contains("\"kind\":\"ledger\""));

    let verify = bin()
        .args(["verify", "--graph"])
        .arg(&input)
        .args(["--coloring"])
        .arg(&colors)
        .output()
        .unwrap();
    assert_eq!(code(&verify), 0, "{verify:?}");
}

#[test]
fn malformed_input_exits_2() {
    let input = tmp("loop.txt");
    write(&input, "0 0\n");
    let out = bin()
        .args(["color", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn missing_file_exits_1() {
    let out = bin()
        .args(["color", "--input", "/nonexistent/graph.txt"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_flags_clash_and_missing_entry() {
    let input = tmp("p3.txt");
    write(&input, "0 1\n1 2\n");
    // Clash: both edges share vertex 1 and carry color 1.
    let clash = tmp("p3-clash.colors");
    write(&clash, "0 1\n1 1\n");
    let out = bin()
        .args(["verify", "--graph"])
        .arg(&input)
        .args(["--coloring"])
        .arg(&clash)
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("edges 0 and 1"), "{err}");

    // Missing entry: edge 1 absent.
    let partial = tmp("p3-partial.colors");
    write(&partial, "0 1\n");
    let out = bin()
        .args(["verify", "--graph"])
        .arg(&input)
        .args(["--coloring"])
        .arg(&partial)
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("edge 1 is uncolored"), "{err}");

    // Palette overflow is flagged too.
    let overfull = tmp("p3-overfull.colors");
    write(&overfull, "0 1\n1 9\n");
    let out = bin()
        .args(["verify", "--graph"])
        .arg(&input)
        .args(["--coloring"])
        .arg(&overfull)
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("\"palette_ok\":false"), "{report}");
}

#[test]
fn verify_rejects_unparseable_coloring_with_2() {
    let input = tmp("pair.txt");
    write(&input, "0 1\n");
    let bad = tmp("bad.colors");
    write(&bad, "zebra\n");
    let out = bin()
        .args(["verify", "--graph"])
        .arg(&input)
        .args(["--coloring"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_single_run_emits_header_plus_one_row() {
    let report = tmp("bench1.csv");
    let out = bin()
        .args(["bench", "--case", "64:4:distributed:1", "--out"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{out:?}");
    let text = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[0].starts_with("schema,row_kind,case"));
    assert!(lines[1].starts_with("vizing-bench-v1,run,64:4:distributed:1"));
    assert!(lines[1].ends_with("true"));
}

#[test]
fn bench_multi_seed_adds_aggregates_and_reruns_identically() {
    let a = tmp("bench-a.csv");
    let b = tmp("bench-b.csv");
    for path in [&a, &b] {
        let out = bin()
            .args([
                "bench",
                "--case",
                "100:5:distributed:3",
                "--case",
                "100:5:sequential:3",
                "--seed",
                "9",
                "--out",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{out:?}");
    }
    let text_a = fs::read_to_string(&a).unwrap();
    let text_b = fs::read_to_string(&b).unwrap();
    assert_eq!(text_a, text_b, "fixed-seed reruns must be byte-identical");
    assert_eq!(
        text_a.lines().filter(|l| l.contains(",run,")).count(),
        6
    );
    assert_eq!(
        text_a
            .lines()
            .filter(|l| l.contains(",aggregate_mean,") || l.contains(",aggregate_sd,"))
            .count(),
        4
    );
}

#[test]
fn color_reruns_are_byte_identical() {
    let input = tmp("det.txt");
    write(&input, &petersen_text());
    let mut outputs = Vec::new();
    for name in ["det-a", "det-b"] {
        let colors = tmp(&format!("{name}.colors"));
        let stats = tmp(&format!("{name}.stats"));
        let out = bin()
            .args(["color", "--input"])
            .arg(&input)
            .args(["--mode", "distributed", "--seed", "7", "--out"])
            .arg(&colors)
            .args(["--stats-out"])
            .arg(&stats)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        outputs.push((
            fs::read_to_string(&colors).unwrap(),
            fs::read_to_string(&stats).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn trace_flag_writes_step_traces() {
    let input = tmp("trace-in.txt");
    write(&input, &petersen_text());
    let trace = tmp("run.trace");
    let out = bin()
        .args(["color", "--input"])
        .arg(&input)
        .args(["--mode", "sequential", "--seed", "1", "--out"])
        .arg(tmp("trace.colors"))
        .args(["--trace"])
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&trace).unwrap();
    assert!(!text.is_empty());
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(first.get("edge").is_some());
    assert!(first.get("steps").is_some());
}

#[test]
fn ell_and_step_overrides_are_accepted() {
    let input = tmp("override.txt");
    write(&input, &petersen_text());
    let out = bin()
        .args(["color", "--input"])
        .arg(&input)
        .args([
            "--mode",
            "sequential",
            "--ell",
            "12",
            "--steps-T",
            "4",
            "--mis",
            "greedy",
            "--fallback",
            "on",
            "--out",
        ])
        .arg(tmp("override.colors"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{out:?}");
}
