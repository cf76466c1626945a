use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainlattice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn decompose_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("d.txt");
    let dump_s = dump.to_str().unwrap();
    let out = run(&[
        "decompose",
        "--method",
        "uniform",
        "--n",
        "12",
        "--seed",
        "3",
        "--chains",
        dump_s,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&out);
    assert_eq!(rec["schema"], 1);
    assert_eq!(rec["num_chains"], 924);
    assert!(rec["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p.as_array().unwrap().len() == 2));
    for key in [
        "s",
        "k",
        "C0",
        "leftover_size",
        "counts",
        "near_uniform_fraction",
        "coverage_fraction",
    ] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }

    let out = run(&["verify", "--chains", dump_s]);
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&out);
    assert_eq!(rec["passed"], true);
    assert_eq!(rec["minimum_chains"], true);
}

#[test]
fn corrupted_dump_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("d.txt");
    let dump_s = dump.to_str().unwrap();
    assert!(run(&[
        "decompose",
        "--method",
        "symmetric",
        "--n",
        "6",
        "--chains",
        dump_s
    ])
    .status
    .success());
    let text = fs::read_to_string(&dump).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // Duplicate a set of the second chain into the first.
    let stolen = lines[2].split(' ').next().unwrap().to_string();
    lines[1] = format!("{} {stolen}", lines[1]);
    fs::write(&dump, lines.join("\n") + "\n").unwrap();
    let out = run(&["verify", "--chains", dump_s]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);

    fs::write(&dump, "n=3 chains=1\nzz\n").unwrap();
    let out = run(&["verify", "--chains", dump_s]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"].as_str().unwrap().contains("line 2"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["decompose"]).status.code(), Some(2));
    assert_eq!(
        run(&["decompose", "--method", "uniform", "--n", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["numerics", "--check", "claim22:9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["extremal", "--config", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "decompose",
        "--method",
        "uniform",
        "--n",
        "14",
        "--seed",
        "5",
        "--best-of",
        "2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let threads = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.stdout, threads.stdout);
}

#[test]
fn max_bytes_suppresses_dump_but_not_stats() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("d.txt");
    let out = run(&[
        "decompose",
        "--method",
        "symmetric",
        "--n",
        "10",
        "--chains",
        dump.to_str().unwrap(),
        "--max-bytes",
        "100",
    ]);
    assert!(out.status.success());
    let rec = json(&out);
    assert_eq!(rec["dump"]["written"], false);
    assert_eq!(rec["num_chains"], 252);
    assert!(!dump.exists());
}

#[test]
fn sperner_and_stats_records() {
    let rec = json(&run(&[
        "sperner", "--n", "8", "--method", "uniform", "--seed", "1",
    ]));
    assert_eq!(rec["alpha"], 70);
    assert_eq!(rec["alpha_certified"], true);
    assert_eq!(rec["meets_turan"], true);
    let rec = json(&run(&["stats", "--n", "9", "--eps", "0.5,0.25"]));
    assert_eq!(rec["near_uniform_fraction"].as_array().unwrap().len(), 2);
    assert_eq!(rec["dominated_by_symmetric"], true);
}

#[test]
fn extremal_modes() {
    let rec = json(&run(&["extremal", "--config", "unionfree", "--k", "3"]));
    assert_eq!(rec["exact_or_bound"], 5);
    assert_eq!(rec["witness"].as_array().unwrap().len(), 5);
    let rec = json(&run(&["extremal", "--config", "sperner", "--n", "4"]));
    assert_eq!(rec["exact_or_bound"], 6);
    let rec = json(&run(&[
        "extremal",
        "--config",
        "unionfree",
        "--mode",
        "bound",
        "--n",
        "400",
    ]));
    let ratio = rec["over_middle_binomial"].as_f64().unwrap();
    assert!((ratio - 2.0 * 2f64.sqrt()).abs() < 0.02, "{ratio}");
    let out = run(&[
        "extremal",
        "--config",
        "sperner",
        "--mode",
        "partition",
        "--n",
        "8",
        "--d",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["exact_or_bound"].as_u64().unwrap() >= 70);

    let dir = tempfile::tempdir().unwrap();
    let poset = dir.path().join("p.txt");
    fs::write(&poset, "# a 2-chain\n2\n1<2\n").unwrap();
    let config_name = format!("poset:{}", poset.display());
    let rec = json(&run(&["extremal", "--config", &config_name, "--n", "4"]));
    assert_eq!(rec["exact_or_bound"], 6);
    assert_eq!(rec["formula"], "(x1 ⊂ x2)");
}

#[test]
fn numerics_checks() {
    let out = run(&["numerics", "--check", "appendix"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows_ok"], 13);
    assert_eq!(
        run(&["numerics", "--check", "claim22:3"]).status.code(),
        Some(0)
    );
    // Part 4's lower bound fails for odd n; the command reports it.
    assert_eq!(
        run(&["numerics", "--check", "claim22:4"]).status.code(),
        Some(1)
    );
}

#[test]
fn containers_record() {
    let out = run(&["containers", "--n", "10", "--samples", "50", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&out);
    assert_eq!(rec["all_contained"], true);
    assert_eq!(rec["samples"], 50);
}
