//! Undirected multigraph with stable vertex ids, plus the feedback vertex set
//! primitives everything else is built on: acyclicity, FVS / minimal FVS tests,
//! private cycle extraction, greedy minimalization and edge contraction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("no edge between {0} and {1}")]
    NoSuchEdge(VertexId, VertexId),
    #[error("set is not a feedback vertex set")]
    NotAnFvs,
    #[error("vertex {0} has no private cycle")]
    NoPrivateCycle(VertexId),
}

/// Sorted vertex set. Iteration order is always ascending id.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(std::collections::BTreeSet<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        self.0.remove(&v)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(&self, v: VertexId) -> VertexSet {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn without(&self, v: VertexId) -> VertexSet {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<T: IntoIterator<Item = VertexId>>(iter: T) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[VertexId; N]> for VertexSet {
    fn from(vs: [VertexId; N]) -> Self {
        vs.into_iter().collect()
    }
}

/// Undirected multigraph. Cross edges carry a multiplicity, self-loops are
/// counted separately. Vertex ids are stable: removal never renumbers, and
/// contraction allocates a fresh id that has never been used in this graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    adj: BTreeMap<VertexId, BTreeMap<VertexId, u32>>,
    loops: BTreeMap<VertexId, u32>,
    labels: BTreeMap<VertexId, String>,
    next_id: VertexId,
}

impl MultiGraph {
    pub fn new() -> Self {
        MultiGraph {
            adj: BTreeMap::new(),
            loops: BTreeMap::new(),
            labels: BTreeMap::new(),
            next_id: 1,
        }
    }

    /// Graph with vertices 1..=n and the given unit edges (repeats add multiplicity,
    /// u == v adds a self-loop).
    pub fn from_edges(n: u32, edges: &[(VertexId, VertexId)]) -> Self {
        let mut g = MultiGraph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        for &(u, v) in edges {
            g.add_edge(u, v).expect("edge endpoints must be in 1..=n");
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        self.adj.insert(id, BTreeMap::new());
        id
    }

    pub fn add_vertex_with_id(&mut self, id: VertexId) -> Result<(), GraphError> {
        if self.adj.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.adj.insert(id, BTreeMap::new());
        if id >= self.next_id {
            self.next_id = id + 1;
        }
        Ok(())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    /// Adds one edge unit. u == v adds a self-loop.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if !self.has_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if u == v {
            *self.loops.entry(u).or_insert(0) += 1;
        } else {
            *self.adj.get_mut(&u).unwrap().entry(v).or_insert(0) += 1;
            *self.adj.get_mut(&v).unwrap().entry(u).or_insert(0) += 1;
        }
        Ok(())
    }

    /// Remove one unit of multiplicity from the edge (u, v); u == v removes a
    /// self-loop. The last unit deletes the edge entirely.
    pub fn remove_edge_in_place(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if !self.has_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if u == v {
            match self.loops.get_mut(&u) {
                Some(c) if *c > 1 => *c -= 1,
                Some(_) => {
                    self.loops.remove(&u);
                }
                None => return Err(GraphError::NoSuchEdge(u, v)),
            }
            return Ok(());
        }
        if self.multiplicity(u, v) == 0 {
            return Err(GraphError::NoSuchEdge(u, v));
        }
        for (a, b) in [(u, v), (v, u)] {
            let row = self.adj.get_mut(&a).unwrap();
            let c = row.get_mut(&b).unwrap();
            if *c > 1 {
                *c -= 1;
            } else {
                row.remove(&b);
            }
        }
        Ok(())
    }

    pub fn set_label(&mut self, v: VertexId, label: &str) {
        if self.has_vertex(v) {
            self.labels.insert(v, label.to_string());
        }
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Total edge units: each cross pair counted once with its multiplicity,
    /// plus self-loops.
    pub fn edge_count(&self) -> usize {
        let cross: u32 = self
            .adj
            .iter()
            .map(|(&u, nbrs)| nbrs.iter().filter(|(&v, _)| v > u).map(|(_, &m)| m).sum::<u32>())
            .sum();
        let loops: u32 = self.loops.values().sum();
        (cross + loops) as usize
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Distinct cross neighbors in ascending id order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|m| m.keys().copied())
    }

    pub fn neighbors_with_mult(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.adj
            .get(&v)
            .into_iter()
            .flat_map(|m| m.iter().map(|(&x, &c)| (x, c)))
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> u32 {
        if u == v {
            return self.loop_count(u);
        }
        self.adj.get(&u).and_then(|m| m.get(&v)).copied().unwrap_or(0)
    }

    pub fn loop_count(&self, v: VertexId) -> u32 {
        self.loops.get(&v).copied().unwrap_or(0)
    }

    /// Degree counting multiplicities; every self-loop contributes 2.
    pub fn degree(&self, v: VertexId) -> usize {
        let cross: u32 = self.adj.get(&v).map(|m| m.values().sum()).unwrap_or(0);
        (cross + 2 * self.loop_count(v)) as usize
    }

    /// Degree of u inside G[X ∪ {u}]: edge units from u into X, multiplicities
    /// counted, plus 2 per self-loop on u. Membership of u in X is irrelevant.
    pub fn deg_within(&self, u: VertexId, xs: &VertexSet) -> usize {
        let cross: u32 = self
            .neighbors_with_mult(u)
            .filter(|(x, _)| xs.contains(*x))
            .map(|(_, m)| m)
            .sum();
        (cross + 2 * self.loop_count(u)) as usize
    }

    /// Edge units as (u, v, multiplicity) with u <= v; self-loops appear as (v, v, count).
    pub fn edge_multiplicities(&self) -> Vec<(VertexId, VertexId, u32)> {
        let mut out = Vec::new();
        for (&u, nbrs) in &self.adj {
            if let Some(&c) = self.loops.get(&u) {
                if c > 0 {
                    out.push((u, u, c));
                }
            }
            for (&v, &m) in nbrs.iter().filter(|(&v, _)| v > u) {
                out.push((u, v, m));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn remove_vertex_in_place(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let nbrs: Vec<VertexId> = self.neighbors(v).collect();
        for u in nbrs {
            self.adj.get_mut(&u).unwrap().remove(&v);
        }
        self.adj.remove(&v);
        self.loops.remove(&v);
        self.labels.remove(&v);
        Ok(())
    }

    pub fn removed(&self, v: VertexId) -> Result<MultiGraph, GraphError> {
        let mut g = self.clone();
        g.remove_vertex_in_place(v)?;
        Ok(g)
    }

    /// Induced subgraph on `keep`; ids and the fresh-id counter are preserved.
    pub fn induced(&self, keep: &VertexSet) -> MultiGraph {
        let mut g = MultiGraph {
            adj: BTreeMap::new(),
            loops: BTreeMap::new(),
            labels: BTreeMap::new(),
            next_id: self.next_id,
        };
        for v in keep.iter().filter(|&v| self.has_vertex(v)) {
            g.adj.insert(v, BTreeMap::new());
            if let Some(&c) = self.loops.get(&v) {
                g.loops.insert(v, c);
            }
            if let Some(l) = self.labels.get(&v) {
                g.labels.insert(v, l.clone());
            }
        }
        let ids: Vec<VertexId> = g.adj.keys().copied().collect();
        for &v in &ids {
            let kept: BTreeMap<VertexId, u32> = self.adj[&v]
                .iter()
                .filter(|(x, _)| g.adj.contains_key(x))
                .map(|(&x, &m)| (x, m))
                .collect();
            g.adj.insert(v, kept);
        }
        g
    }

    /// Contracts one unit of the edge {u, v} into a fresh vertex w and returns it.
    /// Edges from u and v to third vertices merge with multiplicities summed,
    /// remaining parallel u-v edges become self-loops on w, and self-loops of u
    /// and v carry over to w.
    pub fn contract_edge_in_place(&mut self, u: VertexId, v: VertexId) -> Result<VertexId, GraphError> {
        if !self.has_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if u == v || self.multiplicity(u, v) == 0 {
            return Err(GraphError::NoSuchEdge(u, v));
        }
        let parallel = self.multiplicity(u, v) - 1;
        let carried_loops = self.loop_count(u) + self.loop_count(v) + parallel;
        let mut merged: BTreeMap<VertexId, u32> = BTreeMap::new();
        for (x, m) in self.neighbors_with_mult(u).filter(|&(x, _)| x != v) {
            *merged.entry(x).or_insert(0) += m;
        }
        for (x, m) in self.neighbors_with_mult(v).filter(|&(x, _)| x != u) {
            *merged.entry(x).or_insert(0) += m;
        }
        self.remove_vertex_in_place(u)?;
        self.remove_vertex_in_place(v)?;
        let w = self.add_vertex();
        for (x, m) in merged {
            *self.adj.get_mut(&w).unwrap().entry(x).or_insert(0) += m;
            *self.adj.get_mut(&x).unwrap().entry(w).or_insert(0) += m;
        }
        if carried_loops > 0 {
            self.loops.insert(w, carried_loops);
        }
        Ok(w)
    }

    pub fn contract_edge(&self, u: VertexId, v: VertexId) -> Result<(MultiGraph, VertexId), GraphError> {
        let mut g = self.clone();
        let w = g.contract_edge_in_place(u, v)?;
        Ok((g, w))
    }

    /// True when G minus `removed` has no cycle. A self-loop or an edge of
    /// multiplicity >= 2 among the remaining vertices is a cycle.
    pub fn is_acyclic_without(&self, removed: &VertexSet) -> bool {
        let mut uf = UnionFind::new();
        for u in self.vertices().filter(|&u| !removed.contains(u)) {
            if self.loop_count(u) > 0 {
                return false;
            }
            uf.add(u);
        }
        for u in self.vertices().filter(|&u| !removed.contains(u)) {
            for (v, m) in self.neighbors_with_mult(u).filter(|&(v, _)| v > u && !removed.contains(v)) {
                if m >= 2 || !uf.union(u, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_without(&VertexSet::new())
    }

    pub fn is_fvs(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.has_vertex(v)) && self.is_acyclic_without(s)
    }

    /// Shortest cycle through v in G - removed, as a vertex sequence starting at v.
    /// [v] is a self-loop, [v, x] a doubled edge, longer sequences are simple cycles.
    /// Ties break toward lexicographically smallest (length, then endpoints).
    pub fn shortest_cycle_through(&self, v: VertexId, removed: &VertexSet) -> Option<Vec<VertexId>> {
        if removed.contains(v) || !self.has_vertex(v) {
            return None;
        }
        if self.loop_count(v) > 0 {
            return Some(vec![v]);
        }
        let nbrs: Vec<(VertexId, u32)> = self
            .neighbors_with_mult(v)
            .filter(|(x, _)| !removed.contains(*x))
            .collect();
        if let Some(&(x, _)) = nbrs.iter().find(|&&(_, m)| m >= 2) {
            return Some(vec![v, x]);
        }
        // BFS from each neighbor inside G - removed - v; best pair by (dist, x, y).
        let mut best: Option<(usize, VertexId, VertexId, Vec<VertexId>)> = None;
        let nbr_ids: Vec<VertexId> = nbrs.iter().map(|&(x, _)| x).collect();
        for (i, &x) in nbr_ids.iter().enumerate() {
            let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
            let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            let mut queue = std::collections::VecDeque::new();
            dist.insert(x, 0);
            queue.push_back(x);
            while let Some(cur) = queue.pop_front() {
                let d_cur = dist[&cur];
                let next: Vec<VertexId> = self
                    .neighbors(cur)
                    .filter(|&nb| nb != v && !removed.contains(nb) && !dist.contains_key(&nb))
                    .collect();
                for nb in next {
                    dist.insert(nb, d_cur + 1);
                    parent.insert(nb, cur);
                    queue.push_back(nb);
                }
            }
            for &y in &nbr_ids[i + 1..] {
                if let Some(&d) = dist.get(&y) {
                    let better = match &best {
                        None => true,
                        Some((bd, bx, by, _)) => (d, x, y) < (*bd, *bx, *by),
                    };
                    if better {
                        let mut path = vec![y];
                        let mut cur = y;
                        while cur != x {
                            cur = parent[&cur];
                            path.push(cur);
                        }
                        path.reverse();
                        best = Some((d, x, y, path));
                    }
                }
            }
        }
        best.map(|(_, _, _, path)| {
            let mut cycle = vec![v];
            cycle.extend(path);
            cycle
        })
    }

    /// A minimal FVS: every member has a private cycle once restored.
    pub fn is_minimal_fvs(&self, s: &VertexSet) -> bool {
        self.is_fvs(s)
            && s.iter()
                .all(|v| self.shortest_cycle_through(v, &s.without(v)).is_some())
    }

    /// One shortest private cycle per member of s.
    pub fn private_cycles(&self, s: &VertexSet) -> Result<BTreeMap<VertexId, Vec<VertexId>>, GraphError> {
        if !self.is_fvs(s) {
            return Err(GraphError::NotAnFvs);
        }
        let mut out = BTreeMap::new();
        for v in s.iter() {
            match self.shortest_cycle_through(v, &s.without(v)) {
                Some(c) => {
                    out.insert(v, c);
                }
                None => return Err(GraphError::NoPrivateCycle(v)),
            }
        }
        Ok(out)
    }

    /// Greedily removes redundant vertices of s in ascending id order. A single
    /// pass suffices: FVS membership is monotone under supersets, so a vertex
    /// redundant later would have been redundant when visited.
    pub fn minimalize(&self, s: &VertexSet) -> Result<VertexSet, GraphError> {
        if !self.is_fvs(s) {
            return Err(GraphError::NotAnFvs);
        }
        let mut cur = s.clone();
        for v in s.iter() {
            let cand = cur.without(v);
            if self.is_acyclic_without(&cand) {
                cur = cand;
            }
        }
        Ok(cur)
    }

    /// Connected components of G[within], each sorted ascending, ordered by minimum id.
    pub fn components_within(&self, within: &VertexSet) -> Vec<Vec<VertexId>> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for start in within.iter().filter(|&v| self.has_vertex(v)) {
            if seen.contains(start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.push(v);
                for nb in self.neighbors(v) {
                    if within.contains(nb) && !seen.contains(nb) {
                        seen.insert(nb);
                        stack.push(nb);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count_within(&self, within: &VertexSet) -> usize {
        self.components_within(within).len()
    }

    /// Map vertex -> component index, components ordered by minimum id.
    pub fn component_ids_within(&self, within: &VertexSet) -> BTreeMap<VertexId, usize> {
        let mut map = BTreeMap::new();
        for (i, comp) in self.components_within(within).into_iter().enumerate() {
            for v in comp {
                map.insert(v, i);
            }
        }
        map
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        self.component_count_within(&self.vertex_set()) == 1
    }
}

/// Minimal FVS together with one private cycle per member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub solution: VertexSet,
    pub certificates: BTreeMap<VertexId, Vec<VertexId>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("solution is not a feedback vertex set")]
    NotAnFvs,
    #[error("missing certificate for vertex {0}")]
    MissingCertificate(VertexId),
    #[error("certificate for vertex {0} is not a valid cycle: {1}")]
    BadCertificate(VertexId, String),
}

impl Witness {
    /// Builds a witness by extracting a shortest private cycle per member.
    pub fn build(g: &MultiGraph, solution: VertexSet) -> Result<Witness, GraphError> {
        let certificates = g.private_cycles(&solution)?;
        Ok(Witness { solution, certificates })
    }

    pub fn size(&self) -> usize {
        self.solution.len()
    }

    /// Full re-check against g, independent of how the witness was produced:
    /// the solution removes all cycles, and each member's certificate is a real
    /// cycle through it that avoids the rest of the solution.
    pub fn verify(&self, g: &MultiGraph) -> Result<(), WitnessError> {
        if !g.is_fvs(&self.solution) {
            return Err(WitnessError::NotAnFvs);
        }
        for v in self.solution.iter() {
            let cyc = self
                .certificates
                .get(&v)
                .ok_or(WitnessError::MissingCertificate(v))?;
            self.check_cycle(g, v, cyc)
                .map_err(|e| WitnessError::BadCertificate(v, e))?;
        }
        Ok(())
    }

    fn check_cycle(&self, g: &MultiGraph, v: VertexId, cyc: &[VertexId]) -> Result<(), String> {
        if cyc.is_empty() {
            return Err("empty".into());
        }
        if cyc[0] != v {
            return Err(format!("must start at {v}"));
        }
        for &x in cyc {
            if !g.has_vertex(x) {
                return Err(format!("vertex {x} not in graph"));
            }
            if x != v && self.solution.contains(x) {
                return Err(format!("vertex {x} belongs to the solution"));
            }
        }
        match cyc.len() {
            1 => {
                if g.loop_count(v) == 0 {
                    return Err("no self-loop".into());
                }
            }
            2 => {
                if g.multiplicity(cyc[0], cyc[1]) < 2 {
                    return Err("needs a doubled edge".into());
                }
            }
            _ => {
                let mut distinct = cyc.to_vec();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() != cyc.len() {
                    return Err("repeated vertex".into());
                }
                for w in cyc.windows(2) {
                    if g.multiplicity(w[0], w[1]) == 0 {
                        return Err(format!("missing edge {}-{}", w[0], w[1]));
                    }
                }
                if g.multiplicity(cyc[cyc.len() - 1], cyc[0]) == 0 {
                    return Err("missing closing edge".into());
                }
            }
        }
        Ok(())
    }
}

/// Plain union-find over vertex ids.
#[derive(Debug, Default, Clone)]
pub(crate) struct UnionFind {
    parent: BTreeMap<VertexId, VertexId>,
}

impl UnionFind {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, v: VertexId) {
        self.parent.entry(v).or_insert(v);
    }

    pub(crate) fn find(&mut self, v: VertexId) -> VertexId {
        self.add(v);
        let mut root = v;
        while self.parent[&root] != root {
            root = self.parent[&root];
        }
        let mut cur = v;
        while self.parent[&cur] != root {
            let next = self.parent[&cur];
            self.parent.insert(cur, root);
            cur = next;
        }
        root
    }

    /// False when u and v were already in the same set.
    pub(crate) fn union(&mut self, u: VertexId, v: VertexId) -> bool {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            return false;
        }
        self.parent.insert(ru.max(rv), ru.min(rv));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Test-local acyclicity by DFS on an explicit edge-unit list, independent of
    // the union-find implementation above.
    fn naive_has_cycle(n_ids: &[VertexId], units: &[(VertexId, VertexId)]) -> bool {
        for &(u, v) in units {
            if u == v {
                return true;
            }
        }
        let mut mult: BTreeMap<(VertexId, VertexId), u32> = BTreeMap::new();
        for &(u, v) in units {
            let key = (u.min(v), u.max(v));
            *mult.entry(key).or_insert(0) += 1;
        }
        if mult.values().any(|&m| m >= 2) {
            return true;
        }
        // simple graph now: DFS with parent tracking
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = n_ids.iter().map(|&v| (v, vec![])).collect();
        for &(u, v) in mult.keys() {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        let mut seen: std::collections::BTreeSet<VertexId> = Default::default();
        for &start in n_ids {
            if seen.contains(&start) {
                continue;
            }
            let mut stack = vec![(start, None::<VertexId>)];
            seen.insert(start);
            while let Some((v, p)) = stack.pop() {
                for &nb in &adj[&v] {
                    if Some(nb) == p {
                        continue;
                    }
                    if seen.contains(&nb) {
                        return true;
                    }
                    seen.insert(nb);
                    stack.push((nb, Some(v)));
                }
            }
        }
        false
    }

    fn units_of(g: &MultiGraph) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (u, v, m) in g.edge_multiplicities() {
            for _ in 0..m {
                out.push((u, v));
            }
        }
        out
    }

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    }

    fn c(n: u32) -> MultiGraph {
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (i, i + 1)).chain(std::iter::once((n, 1))).collect();
        MultiGraph::from_edges(n, &edges)
    }

    #[test]
    fn contract_path_gives_edge() {
        // path a-b-c, contract ab: result is a single edge w-c
        let g = MultiGraph::from_edges(3, &[(1, 2), (2, 3)]);
        let (h, w) = g.contract_edge(1, 2).unwrap();
        assert_eq!(w, 4);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.multiplicity(w, 3), 1);
        assert_eq!(h.loop_count(w), 0);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn contract_triangle_gives_doubled_edge() {
        let g = MultiGraph::from_edges(3, &[(1, 2), (1, 3), (2, 3)]);
        let (h, w) = g.contract_edge(1, 2).unwrap();
        assert_eq!(h.multiplicity(w, 3), 2);
        assert_eq!(h.loop_count(w), 0);
        assert!(!h.is_acyclic());
    }

    #[test]
    fn contract_doubled_edge_gives_loop() {
        let g = MultiGraph::from_edges(2, &[(1, 2), (1, 2)]);
        let (h, w) = g.contract_edge(1, 2).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.loop_count(w), 1);
        assert!(!h.is_acyclic());
    }

    #[test]
    fn contract_carries_loops_over() {
        let mut g = MultiGraph::from_edges(2, &[(1, 2)]);
        g.add_edge(1, 1).unwrap();
        let (h, w) = g.contract_edge(1, 2).unwrap();
        assert_eq!(h.loop_count(w), 1);
    }

    #[test]
    fn contract_missing_edge_errors() {
        let g = MultiGraph::from_edges(3, &[(1, 2)]);
        assert_eq!(g.contract_edge(1, 3).unwrap_err(), GraphError::NoSuchEdge(1, 3));
        assert_eq!(g.contract_edge(1, 1).unwrap_err(), GraphError::NoSuchEdge(1, 1));
        assert_eq!(g.contract_edge(1, 9).unwrap_err(), GraphError::UnknownVertex(9));
    }

    #[test]
    fn remove_edge_peels_multiplicity_then_deletes() {
        let mut g = MultiGraph::from_edges(3, &[(1, 2), (1, 2), (2, 3)]);
        g.add_edge(3, 3).unwrap();
        g.remove_edge_in_place(2, 1).unwrap();
        assert_eq!(g.multiplicity(1, 2), 1);
        g.remove_edge_in_place(1, 2).unwrap();
        assert_eq!(g.multiplicity(1, 2), 0);
        assert_eq!(g.remove_edge_in_place(1, 2).unwrap_err(), GraphError::NoSuchEdge(1, 2));
        g.remove_edge_in_place(3, 3).unwrap();
        assert_eq!(g.loop_count(3), 0);
        assert_eq!(g.remove_edge_in_place(3, 3).unwrap_err(), GraphError::NoSuchEdge(3, 3));
        assert_eq!(g.remove_edge_in_place(1, 9).unwrap_err(), GraphError::UnknownVertex(9));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn fresh_ids_never_reused() {
        let mut g = MultiGraph::from_edges(3, &[(1, 2), (2, 3)]);
        let w1 = g.contract_edge_in_place(1, 2).unwrap();
        assert_eq!(w1, 4);
        g.remove_vertex_in_place(w1).unwrap();
        let v = g.add_vertex();
        assert_eq!(v, 5);
    }

    #[test]
    fn acyclic_basics() {
        assert!(MultiGraph::new().is_acyclic());
        assert!(MultiGraph::from_edges(4, &[(1, 2), (2, 3), (2, 4)]).is_acyclic());
        assert!(!c(3).is_acyclic());
        let mut g = MultiGraph::from_edges(1, &[]);
        g.add_edge(1, 1).unwrap();
        assert!(!g.is_acyclic());
        assert!(!MultiGraph::from_edges(2, &[(1, 2), (1, 2)]).is_acyclic());
    }

    #[test]
    fn fvs_on_k4() {
        let g = k4();
        assert!(g.is_fvs(&[1, 2].into()));
        assert!(!g.is_fvs(&[1].into()));
        assert!(g.is_minimal_fvs(&[1, 2].into()));
        // all of V is an FVS but not minimal
        assert!(g.is_fvs(&[1, 2, 3, 4].into()));
        assert!(!g.is_minimal_fvs(&[1, 2, 3, 4].into()));
    }

    #[test]
    fn c4_opposite_pair_not_minimal() {
        let g = c(4);
        // 1 and 3 are opposite; removing either alone already breaks the cycle
        assert!(g.is_fvs(&[1, 3].into()));
        assert!(!g.is_minimal_fvs(&[1, 3].into()));
        assert!(g.is_minimal_fvs(&[1].into()));
    }

    #[test]
    fn private_cycles_on_c5() {
        let g = c(5);
        let s: VertexSet = [2].into();
        let cycles = g.private_cycles(&s).unwrap();
        assert_eq!(cycles[&2], vec![2, 1, 5, 4, 3]);
    }

    #[test]
    fn private_cycle_via_doubled_edge_and_loop() {
        let mut g = MultiGraph::from_edges(2, &[(1, 2), (1, 2)]);
        g.add_edge(2, 2).unwrap();
        assert_eq!(g.shortest_cycle_through(2, &VertexSet::new()), Some(vec![2]));
        assert_eq!(g.shortest_cycle_through(1, &[2].into()), None);
        let h = MultiGraph::from_edges(2, &[(1, 2), (1, 2)]);
        assert_eq!(h.shortest_cycle_through(1, &VertexSet::new()), Some(vec![1, 2]));
    }

    #[test]
    fn private_cycles_error_names_vertex() {
        let g = c(4);
        assert_eq!(g.private_cycles(&[1, 3].into()).unwrap_err(), GraphError::NoPrivateCycle(1));
        assert_eq!(g.private_cycles(&[9].into()).unwrap_err(), GraphError::NotAnFvs);
    }

    #[test]
    fn minimalize_examples() {
        let g = c(4);
        let m = g.minimalize(&g.vertex_set()).unwrap();
        assert_eq!(m.len(), 1);
        assert!(g.is_minimal_fvs(&m));
        let g = k4();
        let m = g.minimalize(&[1, 2, 3].into()).unwrap();
        assert_eq!(m.len(), 2);
        assert!(g.is_minimal_fvs(&m));
        // forest minimalizes to the empty set
        let f = MultiGraph::from_edges(4, &[(1, 2), (2, 3)]);
        assert!(f.minimalize(&f.vertex_set()).unwrap().is_empty());
        assert!(f.minimalize(&VertexSet::new()).unwrap().is_empty());
    }

    #[test]
    fn minimalize_idempotent_and_verified() {
        let g = k4();
        let m = g.minimalize(&g.vertex_set()).unwrap();
        assert_eq!(g.minimalize(&m).unwrap(), m);
        let w = Witness::build(&g, m).unwrap();
        w.verify(&g).unwrap();
    }

    #[test]
    fn minimalize_keeps_self_looped_vertices() {
        let mut g = c(4);
        g.add_edge(3, 3).unwrap();
        let m = g.minimalize(&g.vertex_set()).unwrap();
        assert!(m.contains(3));
        assert!(g.is_minimal_fvs(&m));
    }

    #[test]
    fn deg_within_counts_multiplicities_and_loops() {
        let mut g = MultiGraph::from_edges(4, &[(1, 2), (1, 2), (1, 3), (1, 4)]);
        g.add_edge(1, 1).unwrap();
        assert_eq!(g.deg_within(1, &[2, 3].into()), 3 + 2);
        assert_eq!(g.deg_within(1, &[4].into()), 1 + 2);
        assert_eq!(g.deg_within(2, &[1].into()), 2);
        assert_eq!(g.deg_within(2, &[3, 4].into()), 0);
    }

    #[test]
    fn witness_verification_rejects_tampering() {
        let g = k4();
        let w = Witness::build(&g, [1, 2].into()).unwrap();
        w.verify(&g).unwrap();
        let mut bad = w.clone();
        bad.solution.insert(3);
        assert!(bad.verify(&g).is_err()); // no certificate for 3 (and not minimal)
        let mut bad = w.clone();
        bad.certificates.get_mut(&1).unwrap().push(4);
        assert!(bad.verify(&g).is_err());
        let mut bad = w;
        bad.certificates.remove(&2);
        assert_eq!(bad.verify(&g).unwrap_err(), WitnessError::MissingCertificate(2));
    }

    #[test]
    fn components_within_orders_deterministically() {
        let g = MultiGraph::from_edges(6, &[(2, 4), (1, 5), (3, 6), (6, 3)]);
        let comps = g.components_within(&g.vertex_set());
        assert_eq!(comps, vec![vec![1, 5], vec![2, 4], vec![3, 6]]);
        assert_eq!(g.component_count_within(&[2, 3, 6].into()), 2);
    }

    // All labeled graphs on <= 5 vertices: contraction preserves acyclicity in both
    // directions (the catalog-backed run up to 8 vertices lives in the acceptance suite).
    #[test]
    fn contraction_acyclicity_equivalence_small_exhaustive() {
        for n in 2u32..=5 {
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = MultiGraph::from_edges(n, &edges);
                for &(u, v) in &edges {
                    let (h, _) = g.contract_edge(u, v).unwrap();
                    assert_eq!(g.is_acyclic(), h.is_acyclic(), "n={n} mask={mask} edge {u}-{v}");
                }
            }
        }
    }

    #[test]
    fn contraction_acyclicity_equivalence_with_multiplicities() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(2..=8);
            let mut g = MultiGraph::new();
            for _ in 0..n {
                g.add_vertex();
            }
            let units = rng.gen_range(0..=n + 4);
            for _ in 0..units {
                let u = rng.gen_range(1..=n as u32);
                let v = rng.gen_range(1..=n as u32);
                g.add_edge(u, v).unwrap();
            }
            let cross: Vec<(u32, u32, u32)> = g
                .edge_multiplicities()
                .into_iter()
                .filter(|&(u, v, _)| u != v)
                .collect();
            assert_eq!(g.is_acyclic(), !naive_has_cycle(&g.vertices().collect::<Vec<_>>(), &units_of(&g)));
            for &(u, v, _) in &cross {
                let (h, _) = g.contract_edge(u, v).unwrap();
                assert_eq!(g.is_acyclic(), h.is_acyclic(), "edge {u}-{v}");
                assert_eq!(h.is_acyclic(), !naive_has_cycle(&h.vertices().collect::<Vec<_>>(), &units_of(&h)));
            }
        }
    }

    #[test]
    fn minimalize_random_graphs_yield_verified_minimal_sets() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=9);
            let mut g = MultiGraph::new();
            for _ in 0..n {
                g.add_vertex();
            }
            for u in 1..=n as u32 {
                for v in (u + 1)..=n as u32 {
                    if rng.gen_bool(0.35) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let m = g.minimalize(&g.vertex_set()).unwrap();
            assert!(g.is_minimal_fvs(&m));
            assert_eq!(g.minimalize(&m).unwrap(), m);
            if !m.is_empty() {
                Witness::build(&g, m).unwrap().verify(&g).unwrap();
            }
        }
    }
}
