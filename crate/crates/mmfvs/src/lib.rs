//! Exact solvers, oracles and instance generators for the maximum minimal
//! feedback vertex set problem: given a multigraph, find a feedback vertex set
//! that is inclusion-minimal and as large as possible.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] — multigraphs with contraction, acyclicity and minimality
//!   machinery, plus verifiable witnesses (solution + one private cycle per
//!   member).
//! * [`io`] — a small text format for graphs and JSON shapes for instances,
//!   witnesses and reports.
//! * [`oracle`] — exhaustive reference solvers used as ground truth in tests.
//! * [`annotated`] — annotated instances (partial solution, protected forest,
//!   remaining target), the reduction rules that rewrite them, and the
//!   polynomial-space branching solver for the path-restricted case.
//! * [`solver`] — the top-level decision procedure: guess how an initial
//!   minimal feedback vertex set splits, then reduce, branch and delegate.
//! * [`twdp`] — tree decompositions (validation, a min-degree heuristic, a
//!   text format) and a dynamic program over nice decompositions whose tables
//!   grow with the width, not the graph.
//! * [`generators`] — hardness-reduction constructions with structural
//!   verifiers, seeded random instances, and isomorphism-free catalogs of
//!   small graphs.

pub mod annotated;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod solver;
pub mod twdp;

pub use annotated::{
    base_case_solve, solve_path_restricted, solve_path_restricted_with, AnnotatedError,
    AnnotatedInstance, MeasureBreakdown, PathOutcome, PathStats, SearchBudget, UndoEvent, UndoLog,
};
pub use generators::{
    all_graphs, attach_force_gadget, brute_k_in_tree, coloring_to_annotated, connected_graphs,
    constructive_witness, gen_eth_instance, k_in_tree_to_extension, parse_dimacs, random_instance,
    sat_to_3p3sat, satisfying_assignment, verify_eth, write_dimacs, ChoiceGadget, CnfFormula,
    EthConstruction, EthParams, EthReport, ForceGadget, GenError, PartitionedCnf, RandomInstance,
    RandomProfile,
};
pub use graph::{GraphError, MultiGraph, VertexId, VertexSet, Witness, WitnessError};
pub use oracle::{brute_annotated, brute_extension, brute_mmfvs, OracleConfig, OracleResult};
pub use solver::{
    branch_step, initial_minimal_fvs, solve, SolveConfig, SolveError, SolveOutcome, SolveStats,
};
pub use twdp::{
    heuristic_decomposition, make_nice, parse_td, solve_tw, write_td, NiceTreeDecomposition,
    TreeDecomposition, TwError, TwOutcome, TwStats,
};
