//! End-to-end tests of the `contagion` binary: output bytes, exit codes, and
//! per-seed determinism.

use std::path::Path;
use std::process::{Command, Output};

fn contagion(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contagion"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generate_path_has_exact_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = contagion(&["generate", "--model", "path:n=5"], tmp.path());
    assert!(out.status.success());
    assert_eq!(out.stdout, b"5 4\n0 1\n1 2\n2 3\n3 4\n");

    let out = contagion(&["generate", "--model", "gnp:n=100,d=0"], tmp.path());
    assert!(out.status.success());
    assert_eq!(out.stdout, b"100 0\n");
}

#[test]
fn generate_same_seed_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for (i, args) in [
        vec!["generate", "--model", "gnp:n=60,d=3", "--seed", "7"],
        vec!["generate", "--model", "regular:n=40,d=3", "--seed", "7"],
        vec!["generate", "--model", "noisytree:n=300,delta=3,eps=1.0", "--seed", "7"],
    ]
    .iter()
    .enumerate()
    {
        let a = tmp.path().join(format!("a{i}"));
        let b = tmp.path().join(format!("b{i}"));
        let mut run_a = args.clone();
        run_a.extend(["--out", a.to_str().unwrap()]);
        let mut run_b = args.clone();
        run_b.extend(["--out", b.to_str().unwrap()]);
        assert!(contagion(&run_a, tmp.path()).status.success());
        assert!(contagion(&run_b, tmp.path()).status.success());
        let bytes_a = std::fs::read(&a).unwrap();
        assert_eq!(bytes_a, std::fs::read(&b).unwrap(), "args {args:?}");
        assert!(!bytes_a.is_empty());
    }
}

#[test]
fn solve_diamond_brute_and_tw_agree() {
    let tmp = tempfile::tempdir().unwrap();
    // Two seeds both adjacent to vertex 2; threshold 2, slack 0: one deletion.
    let graph = write(tmp.path(), "g.txt", "3 2\n0 2\n1 2\n");
    let seeds = write(tmp.path(), "s.txt", "0\n1\n");
    let mut outputs = Vec::new();
    for method in ["brute", "tw"] {
        let out = contagion(
            &[
                "solve", "--problem", "min", "--graph", &graph, "--seeds", &seeds, "--method",
                method,
            ],
            tmp.path(),
        );
        assert!(out.status.success(), "{method}: {}", String::from_utf8_lossy(&out.stderr));
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(json["problem"], "min");
        assert_eq!(json["budget"], 1, "{method}");
        assert_eq!(json["additional_infected"], 0);
        assert_eq!(json["verified"], true);
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn solve_stop_needs_protected_and_works_with_it() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = write(tmp.path(), "g.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let seeds = write(tmp.path(), "s.txt", "0\n1\n");
    let missing = contagion(
        &["solve", "--problem", "stop", "--graph", &graph, "--seeds", &seeds],
        tmp.path(),
    );
    assert_eq!(missing.status.code(), Some(1));

    let protected = write(tmp.path(), "p.txt", "3\n");
    let out = contagion(
        &[
            "solve", "--problem", "stop", "--graph", &graph, "--seeds", &seeds, "--protected",
            &protected,
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["budget"], 2);
}

#[test]
fn solve_random_method_finds_diamond_optimum() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = write(tmp.path(), "g.txt", "3 2\n0 2\n1 2\n");
    let seeds = write(tmp.path(), "s.txt", "0\n1\n");
    let out = contagion(
        &[
            "solve",
            "--problem",
            "min",
            "--graph",
            &graph,
            "--seeds",
            &seeds,
            "--method",
            "random",
            "--budget-hint",
            "1",
            "--seed",
            "13",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["budget"], 1);
}

#[test]
fn exit_codes_cover_usage_guard_and_verification() {
    let tmp = tempfile::tempdir().unwrap();
    // Usage: unknown subcommand and bad model spec.
    assert_eq!(contagion(&["bogus"], tmp.path()).status.code(), Some(1));
    assert_eq!(
        contagion(&["generate", "--model", "blob:n=3"], tmp.path()).status.code(),
        Some(1)
    );

    // Guard: brute force on a closure with more than 22 edges.
    let k8: String = {
        let mut edges = Vec::new();
        for u in 0..8u32 {
            for v in (u + 1)..8 {
                edges.push(format!("{u} {v}"));
            }
        }
        format!("8 28\n{}\n", edges.join("\n"))
    };
    let graph = write(tmp.path(), "k8.txt", &k8);
    let seeds = write(tmp.path(), "s.txt", "0\n1\n");
    let out = contagion(
        &[
            "solve", "--problem", "min", "--graph", &graph, "--seeds", &seeds, "--method",
            "brute",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // Verification: the injected-mutant oracle run must fail with exit 3.
    let dump = tmp.path().join("dumps");
    let out = contagion(
        &[
            "oracle-compare",
            "--suite",
            "min",
            "--count",
            "2",
            "--inject-mutant",
            "--out",
            dump.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    assert!(std::fs::read_dir(&dump).unwrap().count() > 0);

    // Help exits 0.
    assert_eq!(contagion(&["--help"], tmp.path()).status.code(), Some(0));
}

#[test]
fn oracle_compare_passes_and_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let out = contagion(
        &["oracle-compare", "--suite", "stop", "--count", "6", "--seed", "3"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "oracle-compare suite=stop count=6 failures=0 -> PASS\n");
}

#[test]
fn treewidth_prints_validated_decomposition() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = write(tmp.path(), "g.txt", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let out = contagion(&["treewidth", "--graph", &graph], tmp.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("width 1"));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("bags "));
}

#[test]
fn experiment_outputs_are_deterministic_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let common: Vec<Vec<&str>> = vec![
        vec!["experiment-spread", "--model", "grid:side=6", "--k", "1,3", "--trials", "4"],
        vec!["experiment-localtw", "--n", "128", "--d", "2,4", "--k", "4,8", "--trials", "5"],
        vec!["experiment-edgespan", "--n", "400", "--k", "2,8", "--trials", "5"],
    ];
    for (i, args) in common.iter().enumerate() {
        for format in ["csv", "json"] {
            let a = tmp.path().join(format!("a{i}.{format}"));
            let b = tmp.path().join(format!("b{i}.{format}"));
            for path in [&a, &b] {
                let mut run = args.clone();
                run.extend(["--seed", "11", "--format", format, "--out", path.to_str().unwrap()]);
                let out = contagion(&run, tmp.path());
                assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
            }
            assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?} {format}");
        }
    }
    // CSV schema: fixed header per command.
    let spread = std::fs::read_to_string(tmp.path().join("a0.csv")).unwrap();
    assert!(spread.starts_with("experiment,n,k,trial,spread,rounds,flagged,trial_seed\n"));
    let localtw = std::fs::read_to_string(tmp.path().join("a1.csv")).unwrap();
    assert!(localtw
        .starts_with("experiment,n,d,k,trials,width_estimate,excess_bound,exact,cell_seed\n"));
    let edgespan = std::fs::read_to_string(tmp.path().join("a2.csv")).unwrap();
    assert!(edgespan.starts_with("experiment,n,delta,eps,k,trial,edges,excess,trial_seed\n"));
}

#[test]
fn threads_flag_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("t1.csv");
    let b = tmp.path().join("t4.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = contagion(
            &[
                "experiment-spread", "--model", "gnp:n=80,d=3", "--k", "2,4", "--trials", "6",
                "--seed", "5", "--threads", threads, "--out", path.to_str().unwrap(),
            ],
            tmp.path(),
        );
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
