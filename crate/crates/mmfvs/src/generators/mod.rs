//! Instance builders: hardness-reduction constructions with their
//! verifiers, plus seeded random instances and an isomorphism-free small
//! graph catalog for exhaustive testing.
//!
//! * [`attach_force_gadget`] — pins a vertex into the forest side of every
//!   large minimal feedback vertex set.
//! * [`sat_to_3p3sat`] — splits a 3-CNF formula into an equisatisfiable one
//!   with three balanced variable classes (at most one per clause each).
//! * [`gen_eth_instance`] / [`verify_eth`] / [`constructive_witness`] — the
//!   choice-gadget graph whose large minimal feedback vertex sets encode
//!   satisfying assignments, with a structural verifier and the explicit
//!   witness built from an assignment.
//! * [`coloring_to_annotated`] — 3-colorability as an annotated instance
//!   whose undecided part is a union of length-2 paths.
//! * [`k_in_tree_to_extension`] — induced trees through terminals as a
//!   feedback-vertex-set extension question.
//! * [`random_instance`] — seeded random graphs and annotated instances.

mod catalog;
mod cnf;
mod eth;

pub use catalog::{all_graphs, connected_graphs};
pub use cnf::{
    parse_dimacs, sat_to_3p3sat, satisfying_assignment, write_dimacs, CnfFormula, PartitionedCnf,
};
pub use eth::{
    constructive_witness, gen_eth_instance, verify_eth, ChoiceGadget, EthConstruction, EthParams,
    EthReport,
};

use crate::annotated::{AnnotatedError, AnnotatedInstance};
use crate::graph::{GraphError, MultiGraph, VertexId, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("force gadgets need at least one leaf")]
    ZeroForceWidth,
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} holds the invalid literal {literal}")]
    LiteralOutOfRange { clause: usize, literal: i32 },
    #[error("clause {clause} has width {width}, more than 3")]
    ClauseTooWide { clause: usize, width: usize },
    #[error("clause {clause} uses class {part} twice")]
    BadPartition { clause: usize, part: usize },
    #[error("{vars} variables cannot split into three classes of {} each", expected / 3)]
    PartSizeMismatch { vars: u32, expected: u32 },
    #[error("DIMACS line {line}: {what}")]
    Dimacs { line: usize, what: String },
    #[error("input graph must be simple: {0}")]
    NotSimple(&'static str),
    #[error("need at least two terminals, got {0}")]
    TooFewTerminals(usize),
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(VertexId),
    #[error("assignment covers {got} variables, the formula has {want}")]
    WrongAssignmentLength { got: usize, want: usize },
    #[error("assignment does not satisfy clause {clause}")]
    NotSatisfying { clause: usize },
    #[error("constructed solution has size {got}, the target is {want}")]
    WitnessSize { got: usize, want: usize },
    #[error("structural check {check} failed: {detail}")]
    EthViolation { check: &'static str, detail: String },
    #[error("profile not realizable: {0}")]
    InfeasibleProfile(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Annotated(#[from] AnnotatedError),
}

/// The vertices a force gadget added next to its anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForceGadget {
    pub anchor: VertexId,
    pub twin: VertexId,
    pub leaves: Vec<VertexId>,
}

/// Attach a force gadget to `u`: a twin adjacent to `u` plus `a`
/// independent leaves adjacent to both. Any minimal feedback vertex set
/// containing `u` (or the twin) must leave every leaf out — each leaf's
/// only cycles run through both `u` and the twin — so solutions larger
/// than the rest of the graph can afford must keep `u` in the forest and
/// collect the `a` leaves instead. New vertices are labeled `twin` and
/// `leaf`.
pub fn attach_force_gadget(
    g: &mut MultiGraph,
    u: VertexId,
    a: usize,
) -> Result<ForceGadget, GenError> {
    if !g.has_vertex(u) {
        return Err(GenError::UnknownVertex(u));
    }
    if a == 0 {
        return Err(GenError::ZeroForceWidth);
    }
    let twin = g.add_vertex();
    g.set_label(twin, "twin");
    let mut leaves = Vec::with_capacity(a);
    for _ in 0..a {
        let leaf = g.add_vertex();
        g.set_label(leaf, "leaf");
        g.add_edge(u, leaf)?;
        g.add_edge(twin, leaf)?;
        leaves.push(leaf);
    }
    g.add_edge(u, twin)?;
    Ok(ForceGadget { anchor: u, twin, leaves })
}

/// Encode 3-colorability of a simple graph as an annotated instance.
///
/// Vertex ids in the output: the pinned forest vertex `w` is 1; input
/// vertices are indexed 1..=n in ascending id order and input edges 1..=m
/// in ascending (u, v) order; color copy j of input vertex i is
/// `1 + 3(i-1) + j` and edge vertex j of input edge i is
/// `1 + 3n + 3(i-1) + j`. Each input vertex contributes a 4-cycle
/// w–u1–u2–u3–w, each input edge three must-take vertices tied to `w` and
/// to the matching color copies of its endpoints. The protected set is
/// every edge vertex, the pinned forest is `{w}`, and the target is
/// n + 3m: reachable exactly when one color copy per input vertex can
/// join the solution, which forces a proper 3-coloring.
pub fn coloring_to_annotated(g: &MultiGraph) -> Result<AnnotatedInstance, GenError> {
    if g.vertices().any(|v| g.loop_count(v) > 0) {
        return Err(GenError::NotSimple("self-loop"));
    }
    if g.edge_multiplicities().iter().any(|&(_, _, c)| c > 1) {
        return Err(GenError::NotSimple("parallel edges"));
    }
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    let edges: Vec<(VertexId, VertexId)> =
        g.edge_multiplicities().iter().map(|&(u, v, _)| (u, v)).collect();
    let m = edges.len();
    let index_of = |v: VertexId| vs.iter().position(|&w| w == v).unwrap();

    let total = 1 + 3 * n + 3 * m;
    let mut out = MultiGraph::new();
    for _ in 0..total {
        out.add_vertex();
    }
    let w = 1 as VertexId;
    let u_copy = |i: usize, j: usize| (1 + 3 * i + j + 1) as VertexId; // i, j zero-based
    let e_copy = |i: usize, j: usize| (1 + 3 * n + 3 * i + j + 1) as VertexId;

    for i in 0..n {
        out.add_edge(w, u_copy(i, 0))?;
        out.add_edge(u_copy(i, 0), u_copy(i, 1))?;
        out.add_edge(u_copy(i, 1), u_copy(i, 2))?;
        out.add_edge(u_copy(i, 2), w)?;
    }
    let mut s = VertexSet::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (ia, ib) = (index_of(a), index_of(b));
        for j in 0..3 {
            let e = e_copy(i, j);
            s.insert(e);
            out.add_edge(e, w)?;
            out.add_edge(e, u_copy(ia, j))?;
            out.add_edge(e, u_copy(ib, j))?;
        }
    }
    let f = VertexSet::from([w]);
    Ok(AnnotatedInstance::new(out, s, f, n + 3 * m)?)
}

/// Rephrase "is there an induced tree through all `terminals`" as a
/// feedback-vertex-set extension question: add one fresh degree-2 vertex
/// per consecutive terminal pair, adjacent to both. The fresh vertices
/// (returned as the set to extend) can all sit in a minimal feedback
/// vertex set exactly when the remaining forest connects every terminal
/// pair — that is, when some induced tree spans the terminals.
pub fn k_in_tree_to_extension(
    g: &MultiGraph,
    terminals: &[VertexId],
) -> Result<(MultiGraph, VertexSet), GenError> {
    if terminals.len() < 2 {
        return Err(GenError::TooFewTerminals(terminals.len()));
    }
    let mut seen = VertexSet::new();
    for &t in terminals {
        if !g.has_vertex(t) {
            return Err(GenError::UnknownVertex(t));
        }
        if !seen.insert(t) {
            return Err(GenError::DuplicateTerminal(t));
        }
    }
    let mut out = g.clone();
    let mut s = VertexSet::new();
    for pair in terminals.windows(2) {
        let v = out.add_vertex();
        out.set_label(v, "s");
        out.add_edge(v, pair[0])?;
        out.add_edge(v, pair[1])?;
        s.insert(v);
    }
    Ok((out, s))
}

/// Exhaustive search for an induced tree containing every terminal.
/// Enumerates all vertex supersets of the terminals, so it is only meant
/// for small graphs.
pub fn brute_k_in_tree(g: &MultiGraph, terminals: &[VertexId]) -> Result<bool, GenError> {
    let mut base = VertexSet::new();
    for &t in terminals {
        if !g.has_vertex(t) {
            return Err(GenError::UnknownVertex(t));
        }
        base.insert(t);
    }
    let rest: Vec<VertexId> = g.vertices().filter(|&v| !base.contains(v)).collect();
    let empty = VertexSet::new();
    for mask in 0u64..1 << rest.len() {
        let mut cand = base.clone();
        for (i, &v) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                cand.insert(v);
            }
        }
        let sub = g.induced(&cand);
        if sub.is_fvs(&empty) && sub.components_within(&cand).len() == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Shapes [`random_instance`] can produce.
///
/// The serialized form is externally tagged with kebab-case names, e.g.
/// `{"erdos-renyi": {"n": 12, "p": 0.4}}`, which is what benchmark suite
/// files use to pick a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomProfile {
    /// Every pair becomes an edge independently with probability `p`.
    ErdosRenyi { n: u32, p: f64 },
    /// An annotated instance on `n` vertices with `s` protected and `f`
    /// pinned vertices; everything outside them is a forest by
    /// construction and the target defaults to `s`.
    RandomAnnotated { n: u32, s: usize, f: usize },
    /// An annotated instance whose undecided vertices form exactly
    /// `paths` disjoint paths, every undecided vertex carrying two edge
    /// units into the forest-or-undecided part; the target defaults to
    /// the protected count plus `paths`.
    RandomPathRestricted { n: u32, paths: usize },
}

#[derive(Debug, Clone)]
pub enum RandomInstance {
    Graph(MultiGraph),
    Annotated(AnnotatedInstance),
}

/// Deterministic under `seed`: the same seed and profile always produce
/// the identical instance.
pub fn random_instance(seed: u64, profile: &RandomProfile) -> Result<RandomInstance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *profile {
        RandomProfile::ErdosRenyi { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::InfeasibleProfile(format!(
                    "edge probability {p} outside [0, 1]"
                )));
            }
            let mut g = MultiGraph::new();
            for _ in 0..n {
                g.add_vertex();
            }
            for u in 1..=n as VertexId {
                for v in u + 1..=n as VertexId {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            Ok(RandomInstance::Graph(g))
        }
        RandomProfile::RandomAnnotated { n, s, f } => {
            if s + f > n as usize {
                return Err(GenError::InfeasibleProfile(format!(
                    "{s} protected + {f} pinned vertices exceed n = {n}"
                )));
            }
            let mut ids: Vec<VertexId> = (1..=n as VertexId).collect();
            ids.shuffle(&mut rng);
            let s_set: VertexSet = ids[..s].iter().copied().collect();
            let f_set: VertexSet = ids[s..s + f].iter().copied().collect();
            let u_ids: Vec<VertexId> = {
                let mut u: Vec<VertexId> = ids[s + f..].to_vec();
                u.sort_unstable();
                u
            };
            let mut g = MultiGraph::new();
            for _ in 0..n {
                g.add_vertex();
            }
            // a forest on the undecided part
            for i in 1..u_ids.len() {
                if rng.gen_bool(0.6) {
                    let j = rng.gen_range(0..i);
                    g.add_edge(u_ids[i], u_ids[j])?;
                }
            }
            // arbitrary edges inside and out of the decided part
            let sf: Vec<VertexId> = s_set.union(&f_set).to_vec();
            for (i, &a) in sf.iter().enumerate() {
                for &b in &sf[i + 1..] {
                    if rng.gen_bool(0.3) {
                        g.add_edge(a, b)?;
                    }
                }
                for &u in &u_ids {
                    if rng.gen_bool(0.25) {
                        g.add_edge(a, u)?;
                    }
                }
            }
            Ok(RandomInstance::Annotated(AnnotatedInstance::new(g, s_set, f_set, s)?))
        }
        RandomProfile::RandomPathRestricted { n, paths } => {
            let s_count = 1.max(n as usize / 6);
            let f_count = 1.max(n as usize / 5);
            let u_count = (n as usize)
                .checked_sub(s_count + f_count)
                .ok_or_else(|| GenError::InfeasibleProfile(format!("n = {n} is too small")))?;
            if paths == 0 && u_count > 0 || paths > u_count {
                return Err(GenError::InfeasibleProfile(format!(
                    "{u_count} undecided vertices cannot form {paths} nonempty paths"
                )));
            }
            let mut ids: Vec<VertexId> = (1..=n as VertexId).collect();
            ids.shuffle(&mut rng);
            let s_set: VertexSet = ids[..s_count].iter().copied().collect();
            let f_ids: Vec<VertexId> = ids[s_count..s_count + f_count].to_vec();
            let f_set: VertexSet = f_ids.iter().copied().collect();
            let u_ids: Vec<VertexId> = ids[s_count + f_count..].to_vec();
            let mut g = MultiGraph::new();
            for _ in 0..n {
                g.add_vertex();
            }
            // a tree on the pinned forest part
            for i in 1..f_ids.len() {
                let j = rng.gen_range(0..i);
                g.add_edge(f_ids[i], f_ids[j])?;
            }
            // undecided paths, as even as possible, ends tied into the forest
            let base = u_count.checked_div(paths).unwrap_or(0);
            let extra = u_count.checked_rem(paths).unwrap_or(0);
            let mut next = 0usize;
            for pi in 0..paths {
                let len = base + usize::from(pi < extra);
                let chunk = &u_ids[next..next + len];
                next += len;
                for pair in chunk.windows(2) {
                    g.add_edge(pair[0], pair[1])?;
                }
                let hook = |rng: &mut ChaCha8Rng| f_ids[rng.gen_range(0..f_ids.len())];
                if len == 1 {
                    let (a, b) = (hook(&mut rng), hook(&mut rng));
                    g.add_edge(chunk[0], a)?;
                    g.add_edge(chunk[0], b)?;
                } else {
                    let a = hook(&mut rng);
                    g.add_edge(chunk[0], a)?;
                    let b = hook(&mut rng);
                    g.add_edge(chunk[len - 1], b)?;
                }
            }
            // protected vertices reach around arbitrarily
            let mut s_sorted = s_set.to_vec();
            s_sorted.sort_unstable();
            for &sv in &s_sorted {
                for _ in 0..rng.gen_range(1..=3usize) {
                    let mut t = sv;
                    while t == sv {
                        t = rng.gen_range(1..=n) as VertexId;
                    }
                    g.add_edge(sv, t)?;
                }
            }
            Ok(RandomInstance::Annotated(AnnotatedInstance::new(
                g,
                s_set,
                f_set,
                s_count + paths,
            )?))
        }
    }
}
