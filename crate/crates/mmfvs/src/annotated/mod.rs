//! Annotated instances: a working multigraph together with a partial solution
//! `S`, a protected set `F`, and a remaining target `k`. The exact solvers
//! rewrite these instances with answer-preserving rules and branch on the
//! rest. Every deletion and contraction is journaled, so a witness found on a
//! rewritten graph can be lifted back to the graph the search started from
//! and verified there.
//!
//! Throughout, `U` denotes the undecided vertices `V \ (S ∪ F)`. The instance
//! invariant is that `S ∪ F` is a feedback vertex set, so `G[U]` is always a
//! forest.

mod path;

pub use path::{
    base_case_solve, solve_path_restricted, solve_path_restricted_with, PathOutcome, PathStats,
};

use crate::graph::{GraphError, MultiGraph, VertexId, VertexSet, Witness};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnnotatedError {
    #[error("S and F are not disjoint")]
    NotDisjoint,
    #[error("S ∪ F is not a feedback vertex set")]
    NotAnFvs,
    #[error("vertex {0} has a self-loop; strip loops before annotating")]
    SelfLoop(VertexId),
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("rewrite trigger not satisfied: {0}")]
    Trigger(&'static str),
    #[error("instance is not path-restricted")]
    NotPathRestricted,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("measure is {0}, extraction needs μ ≤ 1")]
    MuTooLarge(i64),
    #[error("G[F] has a cycle")]
    FHasCycle,
    #[error("search budget exhausted after {visited} nodes")]
    Budget { visited: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Shared node counter with an optional hard limit. Clones share the counter,
/// so one budget can serve several worker threads.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    limit: Option<u64>,
    used: Arc<AtomicU64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { limit: None, used: Arc::new(AtomicU64::new(0)) }
    }

    pub fn limited(limit: u64) -> Self {
        SearchBudget { limit: Some(limit), used: Arc::new(AtomicU64::new(0)) }
    }

    pub fn tick(&self) -> Result<(), AnnotatedError> {
        let now = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        match self.limit {
            Some(l) if now > l => Err(AnnotatedError::Budget { visited: now }),
            _ => Ok(()),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

/// One journaled rewrite of the working graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UndoEvent {
    /// Contracted an edge whose merged vertex `w` lives in F afterwards.
    /// Witnesses never contain F vertices, so lifting is the identity.
    ContractForestEdge { u: VertexId, v: VertexId, w: VertexId },
    /// Contracted a degree-one undecided vertex `u` into its undecided
    /// neighbour `v`; the merged vertex `w` stays undecided. A witness using
    /// `w` maps back to `v`.
    ContractIntoU { u: VertexId, v: VertexId, w: VertexId },
    /// Deleted an undecided vertex with no edges into F ∪ U. Whether it is
    /// needed in a lifted witness depends on whether the witness already
    /// breaks all its cycles, which are spanned by S alone.
    DeleteIsolatedU { u: VertexId },
    /// Deleted an S vertex that every compatible solution must contain
    /// (it had two edge units into one tree of G[F ∪ U]); k dropped by one.
    DeleteForced { u: VertexId },
}

/// Journal of rewrites leading from an origin graph to the current one.
#[derive(Debug, Clone)]
pub struct UndoLog {
    origin: Arc<MultiGraph>,
    origin_k: usize,
    events: Vec<UndoEvent>,
}

impl UndoLog {
    fn new(origin: MultiGraph, origin_k: usize) -> Self {
        UndoLog { origin: Arc::new(origin), origin_k, events: Vec::new() }
    }

    pub fn origin(&self) -> &MultiGraph {
        &self.origin
    }

    pub fn origin_k(&self) -> usize {
        self.origin_k
    }

    pub fn events(&self) -> &[UndoEvent] {
        &self.events
    }

    /// Number of forced deletions on the way here. Every lifted witness gains
    /// at least this many vertices over the one it lifts.
    pub fn forced_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, UndoEvent::DeleteForced { .. }))
            .count()
    }

    fn pushed(&self, e: UndoEvent) -> Self {
        let mut events = self.events.clone();
        events.push(e);
        UndoLog { origin: Arc::clone(&self.origin), origin_k: self.origin_k, events }
    }

    /// Transform a minimal FVS of the current graph into one of the origin
    /// graph by unwinding the journal. Replays the journal forward first to
    /// recover each intermediate graph.
    pub fn lift(&self, on_current: &VertexSet) -> VertexSet {
        let mut snapshots: Vec<MultiGraph> = Vec::with_capacity(self.events.len());
        let mut g = (*self.origin).clone();
        for e in &self.events {
            snapshots.push(g.clone());
            match *e {
                UndoEvent::ContractForestEdge { u, v, w } | UndoEvent::ContractIntoU { u, v, w } => {
                    let got = g.contract_edge_in_place(u, v).expect("journal replays");
                    debug_assert_eq!(got, w);
                }
                UndoEvent::DeleteIsolatedU { u } | UndoEvent::DeleteForced { u } => {
                    g.remove_vertex_in_place(u).expect("journal replays");
                }
            }
        }
        let mut wit = on_current.clone();
        for (e, before) in self.events.iter().zip(snapshots.iter()).rev() {
            match *e {
                UndoEvent::ContractForestEdge { w, .. } => {
                    debug_assert!(!wit.contains(w), "witness must avoid F");
                }
                UndoEvent::ContractIntoU { u, v, w } => {
                    // The merged vertex stands for both endpoints. Witnesses
                    // are not required to contain S, so either endpoint may be
                    // the one whose cycles the witness was covering: keep
                    // whichever restores a feedback vertex set here, or both
                    // (then each has a private cycle through the other's side).
                    if wit.remove(w) {
                        let with_v = wit.with(v);
                        if before.is_acyclic_without(&with_v) {
                            wit = with_v;
                        } else {
                            let with_u = wit.with(u);
                            wit = if before.is_acyclic_without(&with_u) {
                                with_u
                            } else {
                                with_v.with(u)
                            };
                        }
                    }
                }
                UndoEvent::DeleteIsolatedU { u } => {
                    if !before.is_acyclic_without(&wit) {
                        wit.insert(u);
                    }
                }
                UndoEvent::DeleteForced { u } => {
                    wit.insert(u);
                }
            }
            debug_assert!(
                before.is_acyclic_without(&wit),
                "unwinding must keep a feedback vertex set at every step"
            );
        }
        wit
    }
}

/// Breakdown of the branching measure μ = k + cc(F) − g − p, where g counts
/// good S vertices and p counts interesting paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureBreakdown {
    pub k: usize,
    pub forest_components: usize,
    pub good: usize,
    pub paths: usize,
    pub mu: i64,
}

/// An annotated instance (G, S, F, k). Sought: a minimal FVS of size ≥ k that
/// contains S and avoids F. Instances are immutable; rewrites return fresh
/// instances sharing the undo journal's origin.
#[derive(Debug, Clone)]
pub struct AnnotatedInstance {
    g: MultiGraph,
    s: VertexSet,
    f: VertexSet,
    k: usize,
    undo: UndoLog,
}

impl AnnotatedInstance {
    pub fn new(
        g: MultiGraph,
        s: VertexSet,
        f: VertexSet,
        k: usize,
    ) -> Result<Self, AnnotatedError> {
        for v in s.iter().chain(f.iter()) {
            if !g.has_vertex(v) {
                return Err(AnnotatedError::UnknownVertex(v));
            }
        }
        if !s.is_disjoint(&f) {
            return Err(AnnotatedError::NotDisjoint);
        }
        if let Some(v) = g.vertices().find(|&v| g.loop_count(v) > 0) {
            return Err(AnnotatedError::SelfLoop(v));
        }
        if !g.is_fvs(&s.union(&f)) {
            return Err(AnnotatedError::NotAnFvs);
        }
        let undo = UndoLog::new(g.clone(), k);
        Ok(AnnotatedInstance { g, s, f, k, undo })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.g
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    pub fn f(&self) -> &VertexSet {
        &self.f
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn undo(&self) -> &UndoLog {
        &self.undo
    }

    /// The undecided vertices V \ (S ∪ F).
    pub fn u_set(&self) -> VertexSet {
        self.g
            .vertices()
            .filter(|&v| !self.s.contains(v) && !self.f.contains(v))
            .collect()
    }

    fn fu_set(&self) -> VertexSet {
        self.g.vertices().filter(|&v| !self.s.contains(v)).collect()
    }

    pub fn f_is_forest(&self) -> bool {
        self.g.induced(&self.f).is_acyclic()
    }

    /// S vertices with at least two edge units into F and at most one into U.
    pub fn good_vertices(&self) -> VertexSet {
        let u = self.u_set();
        self.s
            .iter()
            .filter(|&v| self.g.deg_within(v, &self.f) >= 2 && self.g.deg_within(v, &u) <= 1)
            .collect()
    }

    /// Components of G[U] in which every vertex has exactly two edge units
    /// into F ∪ U. Ordered by smallest member; each path is sorted by id.
    pub fn interesting_paths(&self) -> Vec<Vec<VertexId>> {
        let u = self.u_set();
        let fu = self.fu_set();
        self.g
            .components_within(&u)
            .into_iter()
            .filter(|comp| comp.iter().all(|&v| self.g.deg_within(v, &fu) == 2))
            .collect()
    }

    /// True when every component of G[U] is an interesting path. Since G[U]
    /// is a forest this is the same as every undecided vertex having exactly
    /// two edge units into F ∪ U.
    pub fn is_path_restricted(&self) -> bool {
        let fu = self.fu_set();
        self.u_set().iter().all(|v| self.g.deg_within(v, &fu) == 2)
    }

    /// An undecided vertex all of whose edges lead into S, at least two of
    /// them parallel to one S vertex. Such a vertex can never join a minimal
    /// solution itself (every cycle through it crosses S twice), but the
    /// doubled edge hands its partner a private cycle for free. Deleting it
    /// would therefore change the answer, so the reduction rules leave
    /// anchors in place and the solvers treat their partners as certified.
    pub fn is_cycle_anchor(&self, u: VertexId) -> bool {
        !self.s.contains(u)
            && !self.f.contains(u)
            && self.g.has_vertex(u)
            && self.g.deg_within(u, &self.fu_set()) == 0
            && self
                .g
                .neighbors_with_mult(u)
                .any(|(x, m)| m >= 2 && self.s.contains(x))
    }

    /// True when some cycle anchor carries a doubled edge to `s`, so `s`
    /// already owns a private cycle no matter how the rest of the instance
    /// is resolved.
    pub fn has_anchored_cycle(&self, s: VertexId) -> bool {
        self.s.contains(s)
            && self
                .g
                .neighbors_with_mult(s)
                .any(|(u, m)| m >= 2 && self.is_cycle_anchor(u))
    }

    /// True when every S vertex has an anchored private cycle (vacuously true
    /// for S = ∅). Such instances are decided outright by the greedy base
    /// case: the answer is |S| plus the largest number of interesting paths
    /// that can donate a vertex.
    pub fn all_anchored(&self) -> bool {
        self.s.iter().all(|s| self.has_anchored_cycle(s))
    }

    /// True when every undecided vertex either lies on an interesting path or
    /// is a cycle anchor. This is the entry condition of the path solver: it
    /// is weaker than [`is_path_restricted`](Self::is_path_restricted), which
    /// admits no anchors.
    pub fn path_solvable(&self) -> bool {
        let fu = self.fu_set();
        self.u_set()
            .iter()
            .all(|v| self.g.deg_within(v, &fu) == 2 || self.is_cycle_anchor(v))
    }

    pub fn measure(&self) -> MeasureBreakdown {
        let forest_components = self.g.component_count_within(&self.f);
        let good = self.good_vertices().len();
        let paths = self.interesting_paths().len();
        let mu = self.k as i64 + forest_components as i64 - good as i64 - paths as i64;
        MeasureBreakdown { k: self.k, forest_components, good, paths, mu }
    }

    /// Every S vertex can still earn a private cycle: it has two edge units
    /// into a single component of G[F ∪ U].
    pub fn feasibility_ok(&self) -> bool {
        let fu = self.fu_set();
        let comp = self.g.component_ids_within(&fu);
        self.s.iter().all(|s| {
            let mut tally: std::collections::BTreeMap<usize, u32> = std::collections::BTreeMap::new();
            for (x, m) in self.g.neighbors_with_mult(s) {
                if let Some(&c) = comp.get(&x) {
                    *tally.entry(c).or_insert(0) += m;
                }
            }
            tally.values().any(|&t| t >= 2)
        })
    }

    fn with_parts(&self, g: MultiGraph, s: VertexSet, f: VertexSet, k: usize, undo: UndoLog) -> Self {
        AnnotatedInstance { g, s, f, k, undo }
    }

    /// Move an undecided vertex into F. Annotation-only; no journal entry.
    pub(crate) fn move_to_f(&self, u: VertexId) -> Self {
        debug_assert!(!self.s.contains(u) && !self.f.contains(u) && self.g.has_vertex(u));
        self.with_parts(self.g.clone(), self.s.clone(), self.f.with(u), self.k, self.undo.clone())
    }

    /// Move an undecided vertex into S. Annotation-only; no journal entry.
    pub(crate) fn move_to_s(&self, u: VertexId) -> Self {
        debug_assert!(!self.s.contains(u) && !self.f.contains(u) && self.g.has_vertex(u));
        self.with_parts(self.g.clone(), self.s.with(u), self.f.clone(), self.k, self.undo.clone())
    }

    /// Contract an edge between two F vertices. The merged vertex joins F.
    pub fn rule1(&self, u: VertexId, v: VertexId) -> Result<Self, AnnotatedError> {
        if !(self.f.contains(u) && self.f.contains(v) && u != v && self.g.multiplicity(u, v) >= 1) {
            return Err(AnnotatedError::Trigger("rule 1 wants an edge inside F"));
        }
        let before = self.measure();
        let (g, w) = self.g.contract_edge(u, v)?;
        let f = self.f.without(u).without(v).with(w);
        let undo = self.undo.pushed(UndoEvent::ContractForestEdge { u, v, w });
        let next = self.with_parts(g, self.s.clone(), f, self.k, undo);
        debug_assert!(next.measure().mu <= before.mu, "rule 1 must not raise μ");
        Ok(next)
    }

    /// Delete an undecided vertex with no edges into F ∪ U.
    pub fn rule2(&self, u: VertexId) -> Result<Self, AnnotatedError> {
        let uset = self.u_set();
        if !(uset.contains(u) && self.g.deg_within(u, &self.fu_set()) == 0) {
            return Err(AnnotatedError::Trigger("rule 2 wants a U vertex isolated in F ∪ U"));
        }
        if self.is_cycle_anchor(u) {
            // a doubled edge into S is the partner's private cycle: deleting
            // the vertex would turn Yes instances into No instances
            return Err(AnnotatedError::Trigger("rule 2 must not delete a cycle anchor"));
        }
        let before = self.measure();
        let g = self.g.removed(u)?;
        let undo = self.undo.pushed(UndoEvent::DeleteIsolatedU { u });
        let next = self.with_parts(g, self.s.clone(), self.f.clone(), self.k, undo);
        debug_assert!(next.measure().mu <= before.mu, "rule 2 must not raise μ");
        Ok(next)
    }

    /// Contract an undecided vertex with exactly one edge unit into F ∪ U
    /// into that neighbour. The merged vertex inherits the neighbour's side.
    pub fn rule3(&self, u: VertexId) -> Result<Self, AnnotatedError> {
        let uset = self.u_set();
        let fu = self.fu_set();
        if !(uset.contains(u) && self.g.deg_within(u, &fu) == 1) {
            return Err(AnnotatedError::Trigger("rule 3 wants a U vertex with one edge unit into F ∪ U"));
        }
        let v = self
            .g
            .neighbors(u)
            .find(|&x| x != u && fu.contains(x))
            .expect("degree one inside F ∪ U");
        let before = self.measure();
        let (g, w) = self.g.contract_edge(u, v)?;
        let (f, event) = if self.f.contains(v) {
            (self.f.without(v).with(w), UndoEvent::ContractForestEdge { u, v, w })
        } else {
            (self.f.clone(), UndoEvent::ContractIntoU { u, v, w })
        };
        let undo = self.undo.pushed(event);
        let next = self.with_parts(g, self.s.clone(), f, self.k, undo);
        debug_assert!(next.measure().mu <= before.mu, "rule 3 must not raise μ");
        Ok(next)
    }

    /// Smallest trigger for rule 1, as an ordered F-F edge.
    pub fn find_rule1(&self) -> Option<(VertexId, VertexId)> {
        for u in self.f.iter() {
            for x in self.g.neighbors(u) {
                if x != u && self.f.contains(x) {
                    return Some((u.min(x), u.max(x)));
                }
            }
        }
        None
    }

    /// Smallest trigger for rule 2.
    pub fn find_rule2(&self) -> Option<VertexId> {
        let fu = self.fu_set();
        self.u_set()
            .iter()
            .find(|&u| self.g.deg_within(u, &fu) == 0 && !self.is_cycle_anchor(u))
    }

    /// Smallest trigger for rule 3.
    pub fn find_rule3(&self) -> Option<VertexId> {
        let fu = self.fu_set();
        self.u_set().iter().find(|&u| self.g.deg_within(u, &fu) == 1)
    }

    /// Apply rules 1–3 until none fires. Returns the rewritten instance and
    /// the number of applications.
    pub fn exhaust_rules(&self) -> (Self, usize) {
        let mut cur = self.clone();
        let mut applied = 0;
        loop {
            if let Some((u, v)) = cur.find_rule1() {
                cur = cur.rule1(u, v).expect("found trigger");
            } else if let Some(u) = cur.find_rule2() {
                cur = cur.rule2(u).expect("found trigger");
            } else if let Some(u) = cur.find_rule3() {
                cur = cur.rule3(u).expect("found trigger");
            } else {
                return (cur, applied);
            }
            applied += 1;
        }
    }

    /// Path-restricted rule: a U vertex whose removal disconnects
    /// G[F ∪ U] is moved to F.
    pub fn path_rule_i(&self, u: VertexId) -> Result<Self, AnnotatedError> {
        if !self.path_solvable() {
            return Err(AnnotatedError::NotPathRestricted);
        }
        if !self.u_set().contains(u) {
            return Err(AnnotatedError::Trigger("rule (i) wants a U vertex"));
        }
        let fu = self.fu_set();
        if self.g.component_count_within(&fu.without(u)) <= self.g.component_count_within(&fu) {
            return Err(AnnotatedError::Trigger("rule (i) wants a cut vertex of G[F ∪ U]"));
        }
        Ok(self.move_to_f(u))
    }

    pub fn find_path_rule_i(&self) -> Option<VertexId> {
        let fu = self.fu_set();
        let base = self.g.component_count_within(&fu);
        self.u_set()
            .iter()
            .find(|&u| self.g.component_count_within(&fu.without(u)) > base)
    }

    /// Path-restricted rule: an S vertex with two edge units onto F vertices
    /// inside one tree of G[F ∪ U] is in every compatible solution. Delete it
    /// and decrement k.
    pub fn path_rule_ii(&self, s: VertexId) -> Result<Self, AnnotatedError> {
        if !self.path_solvable() {
            return Err(AnnotatedError::NotPathRestricted);
        }
        if !self.s.contains(s) {
            return Err(AnnotatedError::Trigger("rule (ii) wants an S vertex"));
        }
        if !self.rule_ii_fires(s) {
            return Err(AnnotatedError::Trigger(
                "rule (ii) wants two edge units onto F inside one tree of G[F ∪ U]",
            ));
        }
        let g = self.g.removed(s)?;
        let undo = self.undo.pushed(UndoEvent::DeleteForced { u: s });
        Ok(self.with_parts(g, self.s.without(s), self.f.clone(), self.k.saturating_sub(1), undo))
    }

    fn rule_ii_fires(&self, s: VertexId) -> bool {
        let fu = self.fu_set();
        let comp = self.g.component_ids_within(&fu);
        let mut tally: std::collections::BTreeMap<usize, u32> = std::collections::BTreeMap::new();
        for (x, m) in self.g.neighbors_with_mult(s) {
            if self.f.contains(x) {
                *tally.entry(comp[&x]).or_insert(0) += m;
            }
        }
        tally.values().any(|&t| t >= 2)
    }

    pub fn find_path_rule_ii(&self) -> Option<VertexId> {
        self.s.iter().find(|&s| self.rule_ii_fires(s))
    }

    /// When μ ≤ 1, minimalizing S ∪ U yields a witness of size ≥ k; lift and
    /// verify it against the origin graph.
    pub fn extract_when_mu_le_1(&self) -> Result<Witness, AnnotatedError> {
        if !self.f_is_forest() {
            return Err(AnnotatedError::FHasCycle);
        }
        let m = self.measure();
        if m.mu > 1 {
            return Err(AnnotatedError::MuTooLarge(m.mu));
        }
        let su = self.s.union(&self.u_set());
        let w = self.g.minimalize(&su)?;
        assert!(
            w.len() >= self.k,
            "μ ≤ 1 extraction produced {} vertices, needs ≥ {}",
            w.len(),
            self.k
        );
        self.lift_and_verify(&w)
    }

    /// Lift a minimal FVS of the current graph through the journal, rebuild
    /// its certificates on the origin graph, and check everything.
    pub fn lift_and_verify(&self, on_current: &VertexSet) -> Result<Witness, AnnotatedError> {
        debug_assert!(self.g.is_minimal_fvs(on_current));
        let lifted = self.undo.lift(on_current);
        let witness = Witness::build(self.undo.origin(), lifted)?;
        debug_assert!(witness.verify(self.undo.origin()).is_ok());
        Ok(witness)
    }
}
