//! Exhaustive reference solvers. Deliberately simple: enumerate candidate sets
//! in a fixed order (increasing cardinality, then lexicographic), check each
//! against the graph-level predicates, and report the best. Everything faster
//! in this crate is tested against these.

use crate::graph::{GraphError, MultiGraph, VertexId, VertexSet, Witness};
use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// brute_mmfvs and brute_extension enumerate subsets of up to this many vertices.
    pub max_vertices: usize,
    /// brute_annotated enumerates subsets of the undecided vertices V \ (S ∪ F);
    /// their count may not exceed this.
    pub max_universe: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: 16, max_universe: 20 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} candidate vertices, cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("S and F are not disjoint")]
    NotDisjoint,
    #[error("S ∪ F is not a feedback vertex set")]
    NotAnFvs,
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Result of an exhaustive search. `Infeasible` plays the role of optimum -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Feasible { optimum: usize, witness: Witness },
    Infeasible,
}

impl OracleResult {
    pub fn optimum_i64(&self) -> i64 {
        match self {
            OracleResult::Feasible { optimum, .. } => *optimum as i64,
            OracleResult::Infeasible => -1,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            OracleResult::Feasible { witness, .. } => Some(witness),
            OracleResult::Infeasible => None,
        }
    }
}

/// All t-subsets of `items` in lexicographic order, then t+1, and so on.
/// `visit` returns false to stop the whole enumeration.
fn for_each_subset<F>(items: &[VertexId], mut visit: F)
where
    F: FnMut(&VertexSet) -> bool,
{
    let n = items.len();
    for t in 0..=n {
        let mut idx: Vec<usize> = (0..t).collect();
        'combos: loop {
            let set: VertexSet = idx.iter().map(|&i| items[i]).collect();
            if !visit(&set) {
                return;
            }
            if t == 0 {
                break;
            }
            let mut i = t;
            while i > 0 {
                i -= 1;
                if idx[i] < n - t + i {
                    idx[i] += 1;
                    for j in i + 1..t {
                        idx[j] = idx[j - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
    }
}

/// Maximum minimal feedback vertex set by exhaustive enumeration. The witness
/// is the lexicographically smallest among maximum-size minimal FVSs.
pub fn brute_mmfvs(g: &MultiGraph, cfg: &OracleConfig) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    if n > cfg.max_vertices {
        return Err(OracleError::TooLarge { n, cap: cfg.max_vertices });
    }
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut best: Option<VertexSet> = None;
    for_each_subset(&vs, |s| {
        if g.is_minimal_fvs(s) && best.as_ref().is_none_or(|b| s.len() > b.len()) {
            best = Some(s.clone());
        }
        true
    });
    match best {
        Some(solution) => {
            let witness = Witness::build(g, solution)?;
            Ok(OracleResult::Feasible { optimum: witness.size(), witness })
        }
        None => Ok(OracleResult::Infeasible),
    }
}

/// Maximum minimal FVS S' with s ⊆ S' and S' ∩ f = ∅, by enumerating subsets of
/// the undecided vertices. Infeasible when no such S' exists (in particular
/// whenever G[f] has a cycle).
pub fn brute_annotated(
    g: &MultiGraph,
    s: &VertexSet,
    f: &VertexSet,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    for v in s.iter().chain(f.iter()) {
        if !g.has_vertex(v) {
            return Err(OracleError::UnknownVertex(v));
        }
    }
    if !s.is_disjoint(f) {
        return Err(OracleError::NotDisjoint);
    }
    let sf = s.union(f);
    if !g.is_fvs(&sf) {
        return Err(OracleError::NotAnFvs);
    }
    let undecided: Vec<VertexId> = g.vertices().filter(|&v| !sf.contains(v)).collect();
    if undecided.len() > cfg.max_universe {
        return Err(OracleError::TooLarge { n: undecided.len(), cap: cfg.max_universe });
    }
    let mut best: Option<VertexSet> = None;
    for_each_subset(&undecided, |x| {
        let cand = s.union(x);
        if g.is_minimal_fvs(&cand) && best.as_ref().is_none_or(|b| cand.len() > b.len()) {
            best = Some(cand);
        }
        true
    });
    match best {
        Some(solution) => {
            let witness = Witness::build(g, solution)?;
            Ok(OracleResult::Feasible { optimum: witness.size(), witness })
        }
        None => Ok(OracleResult::Infeasible),
    }
}

/// First (smallest, then lexicographic) minimal FVS containing s, if any.
pub fn brute_extension(
    g: &MultiGraph,
    s: &VertexSet,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    for v in s.iter() {
        if !g.has_vertex(v) {
            return Err(OracleError::UnknownVertex(v));
        }
    }
    let rest: Vec<VertexId> = g.vertices().filter(|&v| !s.contains(v)).collect();
    if rest.len() > cfg.max_vertices {
        return Err(OracleError::TooLarge { n: rest.len(), cap: cfg.max_vertices });
    }
    let mut found: Option<VertexSet> = None;
    for_each_subset(&rest, |x| {
        let cand = s.union(x);
        if g.is_minimal_fvs(&cand) {
            found = Some(cand);
            return false;
        }
        true
    });
    match found {
        Some(solution) => {
            let witness = Witness::build(g, solution)?;
            Ok(OracleResult::Feasible { optimum: witness.size(), witness })
        }
        None => Ok(OracleResult::Infeasible),
    }
}
