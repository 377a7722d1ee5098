//! Acceptance suite: one test per shipped guarantee, each printing a PASS
//! line with the measured quantities. Tolerances and instance counts are part
//! of the contract; seeds are frozen so every run checks identical instances.

use std::time::{Duration, Instant};

use contagion_cli::experiments::{
    excess_fit_constant, grid_perimeter_profile, run_edgespan, run_local_tw, EdgespanConfig,
    LocalTwConfig,
};
use contagion_cli::gen::{random_seed_set, small_instance};
use contagion_cli::oracle::{run_oracle, Suite};
use contagion_core::contagion::{
    bruteforce_edge_deletion_min, gen_hard_stop_instance, min_vertex_cover_bruteforce,
    solve_min_contagion_tw, solve_randomized_fpt, solve_stop_contagion_tw, ContagionError,
    MinContagionInstance,
};
use contagion_core::decomposition::{
    exact_local_treewidth_tiny, exact_treewidth_small, local_treewidth_sample, EXACT_TW_LIMIT,
};
use contagion_core::models;
use contagion_core::percolation::{percolate, Threshold, ThresholdMap};
use contagion_core::{seeds, Graph, VertexSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const ROOT: u64 = 0xACCE;

fn pass(criterion: usize, name: &str, detail: String) {
    println!("acceptance {criterion} ({name}): PASS - {detail}");
}

fn random_connected(rng: &mut ChaCha8Rng, n_max: usize) -> Graph {
    loop {
        let n = rng.gen_range(2..=n_max);
        let p = rng.gen_range(0.25..0.8);
        let g = models::gnp(n, p, rng.gen()).expect("p in range");
        if g.connected_components().len() == 1 {
            return g;
        }
    }
}

#[test]
fn criterion_1_gidm_oracle_equivalence() {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let report = run_oracle(Suite::Gidm, 500, ROOT, false, tmp.path()).unwrap();
    assert!(report.passed(), "{}", report.render());
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:.1?}");
    pass(1, "GIDM oracle equivalence", format!("500 instances exact in {elapsed:.1?}"));
}

#[test]
fn criterion_2_edge_deletion_solver_equivalence() {
    let tmp = tempfile::tempdir().unwrap();
    for suite in [Suite::Min, Suite::Stop] {
        let report = run_oracle(suite, 200, ROOT, false, tmp.path()).unwrap();
        assert!(report.passed(), "{}", report.render());
    }
    pass(
        2,
        "edge-deletion solver equivalence",
        "200 min + 200 stop instances match the brute-force optimum".into(),
    );
}

#[test]
fn criterion_3_randomized_fpt_frequency() {
    let mut batches = 0usize;
    let mut successes = 0usize;
    let mut index = 0u64;
    while batches < 50 {
        let w = small_instance(ROOT.wrapping_add(3), index);
        index += 1;
        let inst =
            MinContagionInstance::uniform(w.g.clone(), w.seeds.clone(), w.r, w.slack).unwrap();
        let optimum = bruteforce_edge_deletion_min(&inst).unwrap().deleted.len();
        // Envelope from the trial-count guarantee: r_max + budget hint <= 6.
        if inst.slack + optimum > 6 {
            continue;
        }
        let batch_seed = ROOT.wrapping_add(300 + batches as u64);
        match solve_randomized_fpt(&inst, inst.slack, optimum, 1, batch_seed) {
            Ok(sol) => {
                assert!(sol.additional_infected <= inst.slack);
                if sol.deleted.len() == optimum {
                    successes += 1;
                }
            }
            Err(ContagionError::NoSolutionFound) => {}
            Err(other) => panic!("unexpected error: {other}"),
        }
        batches += 1;
    }
    // Binomial test: a per-batch success rate of 2/3 fails 28-of-50 only
    // outside the 95% band.
    assert!(successes >= 28, "{successes}/50 batches found the optimum");
    pass(3, "randomized FPT frequency", format!("{successes}/50 batches found the optimum"));
}

#[test]
fn criterion_4_excess_bounds_exact_treewidth() {
    for i in 0..2000u64 {
        let mut rng = seeds::substream(ROOT.wrapping_add(4), "c4", &[i]);
        let g = random_connected(&mut rng, 8);
        let (width, _) = exact_treewidth_small(&g, EXACT_TW_LIMIT).unwrap();
        let bound = g.m() + 2 - g.n();
        assert!(width <= bound, "n={} m={} width={width} bound={bound}", g.n(), g.m());
    }
    pass(4, "edge-excess treewidth bound", "2000 connected graphs, zero violations".into());
}

#[test]
fn criterion_5_forest_spread_below_seed_count() {
    for i in 0..1000u64 {
        let mut rng = seeds::substream(ROOT.wrapping_add(5), "c5", &[i]);
        let n = rng.gen_range(2..=40);
        let delta = rng.gen_range(2..=4);
        let tree = models::random_tree(n, delta, rng.gen()).unwrap();
        // Forest: drop roughly a fifth of the tree edges.
        let kept: Vec<(u32, u32)> =
            tree.edges().into_iter().filter(|_| rng.gen_bool(0.8)).collect();
        let g = Graph::from_edge_list(n, &kept).unwrap();
        let k = rng.gen_range(1..=n);
        let seed_set = random_seed_set(n, k, &mut rng);
        let values: Vec<Threshold> = (0..n as u32)
            .map(|v| {
                if seed_set.contains(v) {
                    Threshold::Finite(0)
                } else {
                    Threshold::Finite(rng.gen_range(2..=3))
                }
            })
            .collect();
        let t = ThresholdMap::from_values(values);
        let spread = percolate(&g, &t, &seed_set).unwrap().spread();
        assert!(spread < k, "forest spread {spread} >= |A| = {k} (n={n})");
    }
    pass(5, "forest spread", "1000 forests, spread < |A| in every trial".into());
}

#[test]
fn criterion_6_grid_perimeter_monotone() {
    let side = 20;
    let n = side * side;
    let mut fitted_c = 0.0f64;
    for i in 0..100u64 {
        let mut rng = seeds::substream(ROOT.wrapping_add(6), "c6", &[i]);
        let k = rng.gen_range(1..=20);
        let seed_set = random_seed_set(n, k, &mut rng);
        let profile = grid_perimeter_profile(side, &seed_set, 2).unwrap();
        for w in profile.windows(2) {
            assert!(w[1] <= w[0], "perimeter increased: {profile:?}");
        }
        let t = ThresholdMap::uniform_with_seeds(n, 2, &seed_set);
        let spread = percolate(&models::grid(side), &t, &seed_set).unwrap().spread();
        // Perimeter argument: closure fits in (4k/4)^2 cells, so spread <= k^2.
        assert!(spread <= k * k, "spread {spread} above k^2 = {}", k * k);
        fitted_c = fitted_c.max(spread as f64 / (k * k) as f64);
    }
    pass(
        6,
        "grid perimeter",
        format!("100 seed sets, perimeter monotone; spread <= c*k^2 with c = {fitted_c:.3}"),
    );
}

#[test]
fn criterion_7_subdivision_counts_and_closure_correspondence() {
    use contagion_core::contagion::reduce_min_contagion;
    for i in 0..300u64 {
        let mut rng = seeds::substream(ROOT.wrapping_add(7), "c7", &[i]);
        let n = rng.gen_range(3..=9);
        let g = loop {
            let p = rng.gen_range(0.2..0.7);
            let g = models::gnp(n, p, rng.gen()).expect("p in range");
            if g.m() > 0 {
                break g;
            }
        };
        let r = rng.gen_range(2..=3);
        let k = rng.gen_range(1..n);
        let seed_set = random_seed_set(n, k, &mut rng);
        let inst = MinContagionInstance::uniform(g.clone(), seed_set.clone(), r, 0).unwrap();
        let red = reduce_min_contagion(&inst);
        assert_eq!(red.g.n(), g.n() + g.m(), "|V'| = n + m");
        assert_eq!(red.g.m(), 2 * g.m(), "|E'| = 2m");
        let closure = percolate(&g, &inst.t, &seed_set).unwrap().closure;
        let closure_sub = percolate(&red.g, &red.t, &seed_set).unwrap().closure;
        let back =
            VertexSet::from_iter(closure_sub.iter().filter(|&v| (v as usize) < g.n()));
        assert_eq!(back, closure, "closure correspondence failed (instance {i})");
    }
    pass(
        7,
        "subdivision reduction",
        "300 instances: |V'| = n+m, |E'| = 2m, closures correspond".into(),
    );
}

fn all_labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| ((u + 1)..n as u32).map(move |v| (u, v)))
        .collect();
    (0..(1u64 << pairs.len()))
        .map(|mask| {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edge_list(n, &edges).unwrap()
        })
        .collect()
}

#[test]
fn criterion_8_hard_instances_match_vertex_cover() {
    let mut checked = 0usize;
    let mut check = |g_vc: &Graph| {
        let (vc, _) = min_vertex_cover_bruteforce(g_vc);
        let inst = gen_hard_stop_instance(g_vc);
        let sol = solve_stop_contagion_tw(&inst).unwrap();
        assert_eq!(
            sol.deleted.len(),
            vc,
            "hard instance optimum != vertex cover (n={}, m={})",
            g_vc.n(),
            g_vc.m()
        );
        checked += 1;
    };
    // Every labeled base graph on 1 to 5 vertices. The 0-vertex base yields
    // an empty gadget, which the instance type rejects (no seeds).
    for n in 1..=5 {
        for g in all_labeled_graphs(n) {
            check(&g);
        }
    }
    // Random base graphs up to the stated 8 vertices, density-capped so the
    // gadgets stay within desk-scale solve times, plus the complete graphs
    // as the densest corner of the envelope.
    for i in 0..150u64 {
        let mut rng = seeds::substream(ROOT.wrapping_add(8), "c8", &[i]);
        let g = loop {
            let n = rng.gen_range(6..=8);
            let p = rng.gen_range(0.1..0.5);
            let g = models::gnp(n, p, rng.gen()).expect("p in range");
            if g.m() <= 14 {
                break g;
            }
        };
        check(&g);
    }
    for n in 6..=8 {
        check(&models::gnp(n, 1.0, 0).expect("complete graph"));
    }
    pass(8, "hard instances = vertex cover", format!("{checked} base graphs, zero mismatches"));
}

#[test]
fn criterion_9_noisy_tree_excess_constant_stable() {
    let run = |seed: u64| {
        let config = EdgespanConfig {
            n: 100_000,
            delta: 3,
            eps: 1.0,
            ks: vec![16, 32, 64],
            trials: 1000,
            seed,
        };
        let out = run_edgespan(&config).unwrap();
        let mut worst = 0.0f64;
        for &k in &[16usize, 32, 64] {
            let max_excess =
                out.rows.iter().filter(|r| r.k == k).map(|r| r.excess).max().unwrap();
            worst = worst.max(excess_fit_constant(max_excess, k, 3, 100_000));
        }
        worst
    };
    // Frozen seed pair; stability over reruns is the claim under test.
    let c1 = run(1001);
    let c2 = run(2002);
    let reference = c1.max(c2);
    assert!(reference <= 5.0, "fitted constant unexpectedly large: {c1:.3} vs {c2:.3}");
    if reference > 0.0 {
        assert!(
            (c1 - c2).abs() <= 0.25 * reference,
            "fitted constants differ by more than 25%: {c1:.3} vs {c2:.3}"
        );
    }
    pass(
        9,
        "noisy-tree excess constant",
        format!("fitted C = {c1:.3} and {c2:.3} across seeds (within 25%)"),
    );
}

#[test]
fn criterion_10_local_treewidth_trend() {
    let config = LocalTwConfig {
        model: None,
        ns: vec![1 << 14],
        ds: vec![2, 4, 8],
        ks: vec![32, 64, 128],
        trials: 200,
        seed: ROOT.wrapping_add(10),
    };
    let out = run_local_tw(&config).unwrap();
    let est = |d: u32, k: usize| {
        out.rows
            .iter()
            .find(|r| r.d == d && r.k == k)
            .map(|r| r.width_estimate)
            .expect("cell present")
    };
    for &d in &[2u32, 4, 8] {
        // At most linear growth in k: doubling k at most doubles the estimate.
        assert!(est(d, 64) <= 2 * est(d, 32) + 1, "d={d}");
        assert!(est(d, 128) <= 2 * est(d, 64) + 1, "d={d}");
    }
    for &k in &[32usize, 64, 128] {
        // At most linear growth in log d: doubling d adds a bounded factor.
        assert!(est(4, k) <= 2 * est(2, k) + 1, "k={k}");
        assert!(est(8, k) <= 2 * est(4, k) + 1, "k={k}");
    }

    // Tiny graphs: the exhaustive local treewidth is monotone in k and the
    // sampler's witness reaches it.
    let g = models::gnp(9, 0.4, 77).unwrap();
    let mut prev = 0;
    for k in 1..=9 {
        let exact = exact_local_treewidth_tiny(&g, k).unwrap();
        assert!(exact >= prev, "t_k not monotone at k={k}");
        prev = exact;
        if g.connected_components().iter().any(|c| c.len() >= k) {
            let sampled = local_treewidth_sample(&g, k, 400, 7).unwrap();
            assert!(sampled.exact);
            assert_eq!(sampled.lower, exact, "sampler missed t_{k}");
            // The witness itself attains the sampled width.
            let (sub, _) = g.induced_subgraph(&sampled.witness).unwrap();
            assert_eq!(exact_treewidth_small(&sub, EXACT_TW_LIMIT).unwrap().0, sampled.lower);
        }
    }
    let cells: Vec<String> =
        out.rows.iter().map(|r| format!("d={} k={} -> {}", r.d, r.k, r.width_estimate)).collect();
    pass(10, "local treewidth trend", cells.join(", "));
}

#[test]
fn criterion_11_cli_byte_identical_per_seed() {
    use std::process::Command;
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let graph_path = dir.join("g.txt");
    std::fs::write(&graph_path, "3 2\n0 2\n1 2\n").unwrap();
    let seeds_path = dir.join("s.txt");
    std::fs::write(&seeds_path, "0\n1\n").unwrap();
    let graph = graph_path.to_str().unwrap();
    let seeds_file = seeds_path.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["generate", "--model", "gnp:n=50,d=2"],
        vec!["solve", "--problem", "min", "--graph", graph, "--seeds", seeds_file],
        vec!["treewidth", "--graph", graph],
        vec!["experiment-localtw", "--n", "128", "--d", "2", "--k", "4,8", "--trials", "4"],
        vec!["experiment-spread", "--model", "grid:side=5", "--k", "1,2", "--trials", "4"],
        vec!["experiment-edgespan", "--n", "300", "--k", "2,4", "--trials", "4"],
        vec!["oracle-compare", "--suite", "min", "--count", "4"],
    ];
    for args in &commands {
        let mut runs = Vec::new();
        for run in 0..2 {
            let out_file = dir.join(format!("{}-{run}.out", args[0]));
            let mut full = args.clone();
            full.extend(["--seed", "99"]);
            let uses_stdout = args[0] == "oracle-compare";
            if !uses_stdout {
                full.extend(["--out", out_file.to_str().unwrap()]);
            }
            let output = Command::new(env!("CARGO_BIN_EXE_contagion"))
                .args(&full)
                .current_dir(dir)
                .output()
                .expect("binary runs");
            assert!(
                output.status.success(),
                "{args:?}: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            let bytes =
                if uses_stdout { output.stdout } else { std::fs::read(&out_file).unwrap() };
            assert!(!bytes.is_empty(), "{args:?} produced no output");
            runs.push(bytes);
        }
        assert_eq!(runs[0], runs[1], "outputs differ for {args:?}");
    }
    pass(11, "CLI determinism", format!("{} commands byte-identical across reruns", commands.len()));
}
