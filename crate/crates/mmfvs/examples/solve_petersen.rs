//! End-to-end drive: solve the Petersen graph for every target size, verify
//! every witness, and cross-check the threshold against the exhaustive
//! oracle and the width-parameterized engine. The largest minimal feedback
//! vertex set of the Petersen graph has 4 vertices (e.g. {1, 2, 4, 9}), one
//! more than its feedback vertex number.

use mmfvs::{
    brute_mmfvs, heuristic_decomposition, make_nice, solve, solve_tw, MultiGraph, OracleConfig,
    SolveConfig, SolveOutcome, TwOutcome,
};

fn main() {
    let outer = [(1u32, 2u32), (2, 3), (3, 4), (4, 5), (5, 1)];
    let inner = [(6u32, 8u32), (8, 10), (10, 7), (7, 9), (9, 6)];
    let spokes = [(1u32, 6u32), (2, 7), (3, 8), (4, 9), (5, 10)];
    let edges: Vec<(u32, u32)> = outer.iter().chain(&inner).chain(&spokes).copied().collect();
    let g = MultiGraph::from_edges(10, &edges);

    let mut threshold = 0usize;
    for k in 0..=10usize {
        let (outcome, stats) = solve(&g, &SolveConfig::new(k)).expect("solve");
        match outcome {
            SolveOutcome::Witness(w) => {
                w.verify(&g).expect("witness verifies");
                threshold = k;
                println!(
                    "k = {k:2}: yes, witness {:?} (size {}), {} branch nodes, {} guesses",
                    w.solution.to_vec(),
                    w.size(),
                    stats.branch_nodes,
                    stats.subsets
                );
            }
            SolveOutcome::No => {
                println!(
                    "k = {k:2}: no, {} branch nodes, {} guesses",
                    stats.branch_nodes, stats.subsets
                );
            }
        }
    }
    let oracle = brute_mmfvs(&g, &OracleConfig::default()).expect("oracle");
    println!("largest minimal feedback vertex set of the Petersen graph: {threshold}");
    assert_eq!(threshold as i64, oracle.optimum_i64(), "solver must match the oracle");

    // Same question through the tree-decomposition engine: the optimum falls
    // out of a single k = 0 run, independent of the decomposition used.
    let td = heuristic_decomposition(&g);
    let ntd = make_nice(&g, &td).expect("nice decomposition");
    let (outcome, stats) = solve_tw(&g, &ntd, 0).expect("width-parameterized solve");
    match outcome {
        TwOutcome::Yes { size, witness } => {
            witness.verify(&g).expect("witness verifies");
            println!(
                "width-parameterized engine: optimum {size}, witness {:?} \
                 (decomposition width {}, {} nice nodes, largest table {})",
                witness.solution.to_vec(),
                stats.width,
                stats.nodes,
                stats.max_tuples
            );
            assert_eq!(size, threshold, "both engines must agree on the optimum");
        }
        TwOutcome::No => unreachable!("k = 0 always has the empty-or-better answer"),
    }
}
