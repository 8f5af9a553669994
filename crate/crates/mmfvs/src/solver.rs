//! Top-level exact decision procedure: given a multigraph and a target k,
//! decide whether some inclusion-minimal feedback vertex set has size ≥ k and
//! produce a verified witness when one exists.
//!
//! The search strips self-looped vertices (they sit in every feedback vertex
//! set), computes an initial minimal feedback vertex set `S0`, and — when
//! `S0` is not already large enough — guesses, for every subset of `S0`, that
//! exactly this subset joins a hypothetical large solution while the rest of
//! `S0` stays in its forest. Each guess becomes an annotated instance that is
//! rewritten with the answer-preserving reduction rules and branched on
//! undecided vertices of high degree until it is either solved outright (the
//! branching measure drops to 1), delegated to the path solver, or refuted.

use crate::annotated::{
    solve_path_restricted_with, AnnotatedError, AnnotatedInstance, MeasureBreakdown, PathOutcome,
    SearchBudget,
};
use crate::graph::{GraphError, MultiGraph, VertexId, VertexSet, Witness};
use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("configuration invalid: {0}")]
    Config(&'static str),
    #[error("node budget exhausted after {visited} nodes")]
    Budget { visited: u64 },
    #[error(
        "initial minimal feedback vertex set has {s0} vertices below the target; \
         2^{s0} guesses are out of reach"
    )]
    OutOfReach { s0: usize },
    #[error(transparent)]
    Annotated(AnnotatedError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Route an annotated-layer error upward, keeping budget exhaustion a
/// first-class outcome rather than a generic wrapped error.
fn lift_err(e: AnnotatedError) -> SolveError {
    match e {
        AnnotatedError::Budget { visited } => SolveError::Budget { visited },
        other => SolveError::Annotated(other),
    }
}

/// Decision for one solve call. `No` is exact: every minimal feedback vertex
/// set of the input graph is smaller than the target.
#[derive(Debug)]
pub enum SolveOutcome {
    Witness(Witness),
    No,
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Target size.
    pub k: usize,
    /// Hard cap on branch nodes across the whole search (solver and path
    /// levels combined). Must be positive when present.
    pub node_budget: Option<u64>,
    /// Number of worker threads for the guessing phase. 1 = sequential.
    pub parallel_width: usize,
    /// Emit per-guess progress through the `log` facade.
    pub trace: bool,
    /// Explore every guess and return the largest witness found instead of
    /// stopping at the first one. The result is still a witness search, not a
    /// certified maximum: each guess contributes the first witness it finds.
    pub maximize: bool,
}

impl SolveConfig {
    pub fn new(k: usize) -> Self {
        SolveConfig { k, node_budget: None, parallel_width: 1, trace: false, maximize: false }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Guess instances actually built and searched.
    pub subsets: u64,
    /// Branch nodes, solver level and path level combined.
    pub branch_nodes: u64,
    /// Reduction rule applications, solver level and path level combined.
    pub rules_applied: u64,
    /// Leaves solved by the measure ≤ 1 extraction.
    pub extractions: u64,
    /// Leaves delegated to the path solver.
    pub path_calls: u64,
}

impl SolveStats {
    fn merge(&mut self, other: &SolveStats) {
        self.subsets += other.subsets;
        self.branch_nodes += other.branch_nodes;
        self.rules_applied += other.rules_applied;
        self.extractions += other.extractions;
        self.path_calls += other.path_calls;
    }
}

/// A deterministic minimal feedback vertex set: the whole vertex set shrunk
/// greedily in id order.
pub fn initial_minimal_fvs(g: &MultiGraph) -> VertexSet {
    g.minimalize(&g.vertex_set()).expect("the full vertex set is a feedback vertex set")
}

/// Decide whether `g` has a minimal feedback vertex set of size ≥ `cfg.k`.
///
/// The returned witness is verified against `g`. `No` is exact. A budget
/// error means the search was cut short and neither answer is known.
pub fn solve(g: &MultiGraph, cfg: &SolveConfig) -> Result<(SolveOutcome, SolveStats), SolveError> {
    if cfg.parallel_width == 0 {
        return Err(SolveError::Config("parallel_width must be at least 1"));
    }
    if cfg.node_budget == Some(0) {
        return Err(SolveError::Config("node_budget must be positive when present"));
    }
    let budget = match cfg.node_budget {
        Some(n) => SearchBudget::limited(n),
        None => SearchBudget::unlimited(),
    };
    let mut stats = SolveStats::default();

    // Self-looped vertices belong to every feedback vertex set: take them now
    // and solve the rest of the graph for the rest of the target.
    let looped: VertexSet = g.vertices().filter(|&v| g.loop_count(v) > 0).collect();
    let mut core = g.clone();
    for v in looped.iter() {
        core.remove_vertex_in_place(v)?;
    }
    let k_core = cfg.k.saturating_sub(looped.len());

    let s0 = initial_minimal_fvs(&core);
    let start = s0.union(&looped);
    if cfg.trace {
        log::debug!(
            "start: |S0| = {}, {} forced loop vertices, target {}",
            s0.len(),
            looped.len(),
            cfg.k
        );
    }
    let start_witness = if start.len() >= cfg.k { Some(Witness::build(g, start)?) } else { None };
    if !cfg.maximize {
        if let Some(w) = start_witness {
            return Ok((SolveOutcome::Witness(w), stats));
        }
    }
    if s0.is_empty() {
        // The loop-free core is a forest, so its only minimal feedback vertex
        // set is empty and the loop vertices are the whole optimum. Answer
        // here: the guessing machinery below assumes a cyclic core.
        let outcome = match start_witness {
            Some(w) => SolveOutcome::Witness(w),
            None => SolveOutcome::No,
        };
        return Ok((outcome, stats));
    }

    if s0.len() > 24 {
        return Err(SolveError::OutOfReach { s0: s0.len() });
    }
    let s0v: Vec<VertexId> = s0.iter().collect();
    let mut masks: Vec<u64> = (0..(1u64 << s0v.len())).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));

    let mut best: Option<Witness> = match start_witness {
        Some(w) if cfg.maximize => Some(w),
        _ => None,
    };

    if cfg.parallel_width == 1 {
        for &mask in &masks {
            if let Some(w) = run_guess(&core, &s0v, &s0, k_core, mask, &budget, cfg.trace, None, &mut stats)? {
                let w = with_forced_loops(g, &w, &looped)?;
                if cfg.maximize {
                    if best.as_ref().is_none_or(|b| w.size() > b.size()) {
                        best = Some(w);
                    }
                } else {
                    debug_assert!(w.size() >= cfg.k);
                    return Ok((SolveOutcome::Witness(w), stats));
                }
            }
        }
    } else {
        let next = AtomicUsize::new(0);
        let stop = AtomicBool::new(false);
        let found: Mutex<Option<Witness>> = Mutex::new(None);
        let first_err: Mutex<Option<SolveError>> = Mutex::new(None);
        let shared_stats: Mutex<SolveStats> = Mutex::new(SolveStats::default());
        let workers = cfg.parallel_width.min(masks.len());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut local = SolveStats::default();
                    loop {
                        if stop.load(Ordering::Relaxed) {
                            break;
                        }
                        let idx = next.fetch_add(1, Ordering::Relaxed);
                        if idx >= masks.len() {
                            break;
                        }
                        let got = run_guess(
                            &core,
                            &s0v,
                            &s0,
                            k_core,
                            masks[idx],
                            &budget,
                            cfg.trace,
                            Some(&stop),
                            &mut local,
                        );
                        match got {
                            Ok(Some(w)) => {
                                let mut guard = found.lock().unwrap();
                                if cfg.maximize {
                                    if guard.as_ref().is_none_or(|b| w.size() > b.size()) {
                                        *guard = Some(w);
                                    }
                                } else {
                                    if guard.is_none() {
                                        *guard = Some(w);
                                    }
                                    stop.store(true, Ordering::Relaxed);
                                }
                            }
                            Ok(None) => {}
                            Err(e) => {
                                let mut guard = first_err.lock().unwrap();
                                if guard.is_none() {
                                    *guard = Some(e);
                                }
                                stop.store(true, Ordering::Relaxed);
                            }
                        }
                    }
                    shared_stats.lock().unwrap().merge(&local);
                });
            }
        });
        stats.merge(&shared_stats.lock().unwrap());
        if let Some(e) = first_err.into_inner().unwrap() {
            // a verified witness outranks a cut-short sibling search, except
            // under maximize, where an unfinished sweep has no maximum
            let winner = found.into_inner().unwrap();
            match winner {
                Some(w) if !cfg.maximize => {
                    return Ok((SolveOutcome::Witness(with_forced_loops(g, &w, &looped)?), stats));
                }
                _ => return Err(e),
            }
        }
        if let Some(w) = found.into_inner().unwrap() {
            let w = with_forced_loops(g, &w, &looped)?;
            if cfg.maximize {
                if best.as_ref().is_none_or(|b| w.size() > b.size()) {
                    best = Some(w);
                }
            } else {
                return Ok((SolveOutcome::Witness(w), stats));
            }
        }
    }

    match best {
        Some(w) => Ok((SolveOutcome::Witness(w), stats)),
        None => Ok((SolveOutcome::No, stats)),
    }
}

/// Build and search the annotated instance for one subset guess.
#[allow(clippy::too_many_arguments)]
fn run_guess(
    core: &MultiGraph,
    s0v: &[VertexId],
    s0: &VertexSet,
    k_core: usize,
    mask: u64,
    budget: &SearchBudget,
    trace: bool,
    stop: Option<&AtomicBool>,
    stats: &mut SolveStats,
) -> Result<Option<Witness>, SolveError> {
    let x: VertexSet = s0v
        .iter()
        .enumerate()
        .filter_map(|(j, &v)| (mask >> j & 1 == 1).then_some(v))
        .collect();
    let f0 = s0.difference(&x);
    let inst = AnnotatedInstance::new(core.clone(), x, f0, k_core).map_err(lift_err)?;
    stats.subsets += 1;
    let m0 = inst.measure();
    assert!(
        m0.mu <= (k_core + m0.forest_components) as i64,
        "root measure {} exceeds k + cc(F) = {}",
        m0.mu,
        k_core + m0.forest_components
    );
    if trace {
        log::debug!("guess S = {:?}: initial measure {}", inst.s().to_vec(), m0.mu);
    }
    let got = search(inst, budget, trace, stop, stats)?;
    if trace {
        match &got {
            Some(w) => log::debug!("guess solved: witness of size {}", w.size()),
            None => log::debug!("guess refuted"),
        }
    }
    Ok(got)
}

/// Depth-first search over one annotated instance: exhaust rules, extract at
/// measure ≤ 1, delegate path-solvable instances, branch otherwise. Returns
/// the first verified witness, or None when every leaf is a refutation.
fn search(
    root: AnnotatedInstance,
    budget: &SearchBudget,
    trace: bool,
    stop: Option<&AtomicBool>,
    stats: &mut SolveStats,
) -> Result<Option<Witness>, SolveError> {
    let depth_bound = root.k() + root.graph().component_count_within(root.f());
    let mut stack: Vec<(AnnotatedInstance, Option<MeasureBreakdown>, usize)> =
        vec![(root, None, 0)];
    while let Some((raw, parent, depth)) = stack.pop() {
        if let Some(s) = stop {
            if s.load(Ordering::Relaxed) {
                return Ok(None);
            }
        }
        // A guess may protect a cyclic part of S0; such an instance has no
        // solution. Branch children are pre-checked, so this mostly guards
        // the roots.
        if !raw.f_is_forest() {
            continue;
        }
        let (i, applied) = raw.exhaust_rules();
        stats.rules_applied += applied as u64;
        let m = i.measure();
        if let Some(pm) = parent {
            assert!(
                m.mu < pm.mu,
                "branching must reduce the measure: parent {}, child {}",
                pm.mu,
                m.mu
            );
            assert!(
                m.good >= pm.good,
                "branching must not lose good vertices: parent {}, child {}",
                pm.good,
                m.good
            );
        }
        if m.mu <= 1 {
            stats.extractions += 1;
            return Ok(Some(i.extract_when_mu_le_1().map_err(lift_err)?));
        }
        if !i.feasibility_ok() {
            continue;
        }
        if i.path_solvable() {
            stats.path_calls += 1;
            let (outcome, ps) = solve_path_restricted_with(&i, budget).map_err(lift_err)?;
            stats.branch_nodes += ps.branch_nodes;
            stats.rules_applied += ps.rules_applied;
            match outcome {
                PathOutcome::Witness(w) => return Ok(Some(w)),
                PathOutcome::AnnotatedNo => continue,
            }
        }
        budget.tick().map_err(lift_err)?;
        stats.branch_nodes += 1;
        assert!(depth <= depth_bound, "branch depth {depth} exceeded k + cc(F) = {depth_bound}");
        let (into_s, into_f) = branch_step(&i).map_err(lift_err)?;
        if trace {
            log::trace!(
                "branch at depth {depth}: measure {}, {} good, {} paths",
                m.mu,
                m.good,
                m.paths
            );
        }
        stack.push((into_s, Some(m), depth + 1));
        if let Some(j) = into_f {
            stack.push((j, Some(m), depth + 1)); // explored first
        }
    }
    Ok(None)
}

/// One branching step on a rule-exhausted, non-path-solvable instance: pick
/// the undecided vertex with ≥ 3 edge units into F ∪ U that lies deepest in
/// its tree of G[U] (rooted at the tree's smallest id, ties to the smaller
/// id) and try both sides. Returns the instance that moves the vertex into
/// the partial solution and, unless doing so closes a cycle in the protected
/// forest, the instance that moves it into F. After re-exhausting rules 1–3,
/// both children have strictly smaller measure and no fewer good vertices
/// than the input.
pub fn branch_step(
    i: &AnnotatedInstance,
) -> Result<(AnnotatedInstance, Option<AnnotatedInstance>), AnnotatedError> {
    if i.find_rule1().is_some() || i.find_rule2().is_some() || i.find_rule3().is_some() {
        return Err(AnnotatedError::Precondition("branching wants rules 1–3 exhausted"));
    }
    let v = pick_interesting(i).ok_or(AnnotatedError::Precondition(
        "no undecided vertex has three edge units into F ∪ U; use the path solver",
    ))?;
    let into_s = i.move_to_s(v);
    let into_f = i.move_to_f(v);
    let into_f = if into_f.f_is_forest() { Some(into_f) } else { None };
    Ok((into_s, into_f))
}

/// The undecided vertex with ≥ 3 edge units into F ∪ U at maximum distance
/// from the smallest-id vertex of its component of G[U]; ties go to the
/// smaller id. None when every undecided vertex has two units or is a cycle
/// anchor.
fn pick_interesting(i: &AnnotatedInstance) -> Option<VertexId> {
    let g = i.graph();
    let u = i.u_set();
    let fu: VertexSet = g.vertices().filter(|&v| !i.s().contains(v)).collect();
    let mut pick: Option<(usize, VertexId)> = None;
    for comp in g.components_within(&u) {
        let root = *comp.iter().min().expect("components are nonempty");
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        dist.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            for y in g.neighbors(x) {
                if u.contains(y) && !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        for &v in &comp {
            if g.deg_within(v, &fu) >= 3 {
                let d = dist[&v];
                let better = match pick {
                    None => true,
                    Some((bd, bv)) => d > bd || (d == bd && v < bv),
                };
                if better {
                    pick = Some((d, v));
                }
            }
        }
    }
    pick.map(|(_, v)| v)
}

/// Re-attach the forced self-loop vertices to a witness of the loop-free
/// core and rebuild it against the original graph.
fn with_forced_loops(
    g: &MultiGraph,
    w: &Witness,
    looped: &VertexSet,
) -> Result<Witness, SolveError> {
    if looped.is_empty() {
        // already verified against the core, which is the whole graph
        return Ok(w.clone());
    }
    Ok(Witness::build(g, w.solution.union(looped))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_mmfvs, OracleConfig};

    fn k2n(n: u32) -> MultiGraph {
        let mut edges = Vec::new();
        for r in 3..(3 + n) {
            edges.push((1, r));
            edges.push((2, r));
        }
        MultiGraph::from_edges(2 + n, &edges)
    }

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    }

    fn solve_k(g: &MultiGraph, k: usize) -> (SolveOutcome, SolveStats) {
        solve(g, &SolveConfig::new(k)).unwrap()
    }

    fn is_yes(outcome: &SolveOutcome) -> bool {
        matches!(outcome, SolveOutcome::Witness(_))
    }

    #[test]
    fn initial_minimal_fvs_examples() {
        let forest = MultiGraph::from_edges(4, &[(1, 2), (2, 3)]);
        assert!(initial_minimal_fvs(&forest).is_empty());

        let c4 = MultiGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert_eq!(initial_minimal_fvs(&c4).len(), 1);

        assert_eq!(initial_minimal_fvs(&k4()).len(), 2);

        let mut with_loop = MultiGraph::from_edges(4, &[(2, 3), (3, 4), (2, 4)]);
        with_loop.add_edge(1, 1).unwrap();
        let s = initial_minimal_fvs(&with_loop);
        assert!(s.contains(1), "self-looped vertex is in every feedback vertex set");
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn complete_bipartite_thresholds() {
        for n in 2..=6u32 {
            let g = k2n(n);
            let (yes, _) = solve_k(&g, n as usize - 1);
            match yes {
                SolveOutcome::Witness(w) => {
                    assert!(w.size() >= n as usize - 1);
                    w.verify(&g).unwrap();
                }
                SolveOutcome::No => panic!("expected a witness for n = {n}"),
            }
            let (no, _) = solve_k(&g, n as usize);
            assert!(!is_yes(&no), "k = n must be refuted for n = {n}");
        }
    }

    #[test]
    fn complete_graph_thresholds() {
        for k in 0..=2usize {
            let (outcome, _) = solve_k(&k4(), k);
            assert!(is_yes(&outcome), "K4 has minimal feedback vertex sets of size 2 ≥ {k}");
        }
        let (outcome, _) = solve_k(&k4(), 3);
        assert!(!is_yes(&outcome));
    }

    #[test]
    fn zero_target_is_always_a_yes() {
        for g in [
            MultiGraph::new(),
            MultiGraph::from_edges(3, &[(1, 2)]),
            k4(),
            k2n(4),
        ] {
            let (outcome, stats) = solve_k(&g, 0);
            match outcome {
                SolveOutcome::Witness(w) => w.verify(&g).unwrap(),
                SolveOutcome::No => panic!("k = 0 must produce a witness"),
            }
            assert_eq!(stats.subsets, 0, "k = 0 needs no guessing");
        }
    }

    #[test]
    fn self_loops_are_forced_into_the_witness() {
        // loop vertex + C4: optimum is 1 + 1
        let mut g = MultiGraph::from_edges(5, &[(2, 3), (3, 4), (4, 5), (5, 2)]);
        g.add_edge(1, 1).unwrap();
        let (yes, _) = solve_k(&g, 2);
        match yes {
            SolveOutcome::Witness(w) => {
                assert!(w.solution.contains(1));
                w.verify(&g).unwrap();
            }
            SolveOutcome::No => panic!("expected a witness"),
        }
        let (no, _) = solve_k(&g, 3);
        assert!(!is_yes(&no));
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1213);
        let cfg = OracleConfig::default();
        let mut yes_seen = 0;
        let mut no_seen = 0;
        for round in 0..30 {
            let n = rng.gen_range(5..=9u32);
            let p = [0.25, 0.4, 0.55][rng.gen_range(0..3)];
            let mut edges = Vec::new();
            for a in 1..=n {
                for b in (a + 1)..=n {
                    if rng.gen_bool(p) {
                        edges.push((a, b));
                    }
                }
            }
            let g = MultiGraph::from_edges(n, &edges);
            let opt = brute_mmfvs(&g, &cfg).unwrap().optimum_i64();
            for k in 0..=(opt + 2).max(1) as usize {
                let (outcome, _) = solve_k(&g, k);
                match outcome {
                    SolveOutcome::Witness(w) => {
                        assert!(
                            opt >= k as i64,
                            "round {round}: solver found size {} for k = {k}, optimum {opt}",
                            w.size()
                        );
                        assert!(w.size() >= k);
                        w.verify(&g).unwrap();
                        yes_seen += 1;
                    }
                    SolveOutcome::No => {
                        assert!(opt < k as i64, "round {round}: refuted k = {k}, optimum {opt}");
                        no_seen += 1;
                    }
                }
            }
        }
        assert!(yes_seen >= 30, "only {yes_seen} confirmed instances");
        assert!(no_seen >= 30, "only {no_seen} refuted instances");
    }

    #[test]
    fn answer_survives_reversed_vertex_ids() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..12 {
            let n = rng.gen_range(6..=9u32);
            let mut edges = Vec::new();
            for a in 1..=n {
                for b in (a + 1)..=n {
                    if rng.gen_bool(0.4) {
                        edges.push((a, b));
                    }
                }
            }
            let g = MultiGraph::from_edges(n, &edges);
            let flip = |v: VertexId| n + 1 - v;
            let rev_edges: Vec<(VertexId, VertexId)> =
                edges.iter().map(|&(a, b)| (flip(a), flip(b))).collect();
            let rev = MultiGraph::from_edges(n, &rev_edges);
            for k in 1..=4usize {
                let (a, _) = solve_k(&g, k);
                let (b, _) = solve_k(&rev, k);
                assert_eq!(
                    is_yes(&a),
                    is_yes(&b),
                    "answers diverged under reversed ids for k = {k}"
                );
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_distinct_from_no() {
        // K4 at k = 3 is a No that requires genuine branching
        let (outcome, stats) = solve_k(&k4(), 3);
        assert!(!is_yes(&outcome));
        assert!(stats.branch_nodes >= 2, "expected branching, got {stats:?}");
        let mut cfg = SolveConfig::new(3);
        cfg.node_budget = Some(stats.branch_nodes - 1);
        match solve(&k4(), &cfg) {
            Err(SolveError::Budget { .. }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn zero_budget_is_a_config_error() {
        let mut cfg = SolveConfig::new(1);
        cfg.node_budget = Some(0);
        assert!(matches!(solve(&k4(), &cfg), Err(SolveError::Config(_))));
        cfg.node_budget = None;
        cfg.parallel_width = 0;
        assert!(matches!(solve(&k4(), &cfg), Err(SolveError::Config(_))));
    }

    #[test]
    fn maximize_explores_every_guess() {
        let g = k2n(4);
        let s0 = initial_minimal_fvs(&g);
        let mut cfg = SolveConfig::new(1);
        cfg.maximize = true;
        let (outcome, stats) = solve(&g, &cfg).unwrap();
        match outcome {
            SolveOutcome::Witness(w) => {
                assert!(w.size() >= 1);
                w.verify(&g).unwrap();
            }
            SolveOutcome::No => panic!("expected a witness"),
        }
        assert_eq!(stats.subsets, 1 << s0.len(), "maximize must try every guess");
        // without the flag the initial set already answers k = 1
        let (_, fast) = solve_k(&g, 1);
        assert_eq!(fast.subsets, 0);
    }

    #[test]
    fn parallel_agrees_with_sequential() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..8 {
            let n = rng.gen_range(6..=9u32);
            let mut edges = Vec::new();
            for a in 1..=n {
                for b in (a + 1)..=n {
                    if rng.gen_bool(0.4) {
                        edges.push((a, b));
                    }
                }
            }
            let g = MultiGraph::from_edges(n, &edges);
            for k in 2..=3usize {
                let (seq, _) = solve_k(&g, k);
                let mut cfg = SolveConfig::new(k);
                cfg.parallel_width = 4;
                let (par, _) = solve(&g, &cfg).unwrap();
                assert_eq!(is_yes(&seq), is_yes(&par));
                if let SolveOutcome::Witness(w) = par {
                    w.verify(&g).unwrap();
                }
            }
        }
    }

    #[test]
    fn branch_step_picks_the_deepest_high_degree_vertex() {
        // U path 1-2-3; 1 and 3 both have two extra edges into F, so both are
        // branch candidates; 3 is farther from the root (vertex 1)
        let g = MultiGraph::from_edges(
            7,
            &[(1, 2), (2, 3), (1, 4), (1, 5), (3, 6), (3, 7)],
        );
        let i = AnnotatedInstance::new(g, VertexSet::new(), [4, 5, 6, 7].into(), 2).unwrap();
        let (into_s, into_f) = branch_step(&i).unwrap();
        assert_eq!(into_s.s().to_vec(), vec![3]);
        let into_f = into_f.expect("moving 3 to F keeps it a forest");
        assert!(into_f.f().contains(3));
    }

    #[test]
    fn branch_step_rejects_unprepared_instances() {
        // rules not exhausted: F contains an edge
        let g = MultiGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let i = AnnotatedInstance::new(g.clone(), VertexSet::new(), [1, 2].into(), 1).unwrap();
        assert!(matches!(branch_step(&i), Err(AnnotatedError::Precondition(_))));

        // path-solvable: no vertex has three units into F ∪ U
        let j = AnnotatedInstance::new(g, VertexSet::new(), [1].into(), 1).unwrap();
        assert!(matches!(branch_step(&j), Err(AnnotatedError::Precondition(_))));
    }
}
