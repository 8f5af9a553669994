//! Tree decompositions and a width-parameterized exact solver built on them.
//!
//! The pieces, bottom-up:
//!
//! * [`TreeDecomposition`] — bags plus tree edges, with [`TreeDecomposition::validate`]
//!   naming exactly which decomposition invariant a bad input breaks.
//! * [`parse_td`] / [`write_td`] — a line-oriented text format for exchanging
//!   decompositions (`c` comments, an `s td` header, `b` bag lines, edge lines).
//! * [`heuristic_decomposition`] — min-degree elimination; exact on trees,
//!   cycles and cliques, a reasonable upper bound elsewhere.
//! * [`make_nice`] — rewrites a valid decomposition into leaf / introduce /
//!   forget / join nodes with an empty root bag, the shape the solver walks.
//! * [`solve_tw`] — a dynamic program whose tables grow with the decomposition
//!   width, not the graph size; see [`dp`](self::dp) for the tuple semantics.

mod dp;
mod format;

pub use dp::{
    dp_forget, dp_introduce, dp_join, dp_leaf, solve_tw, state_bound, DPTuple, TwOutcome,
    TwStats,
};
pub use format::{parse_td, write_td};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{GraphError, MultiGraph, VertexId, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwError {
    #[error("vertex {0} is not covered by any bag")]
    VertexNotCovered(VertexId),
    #[error("edge {0}-{1} has no bag containing both endpoints")]
    EdgeNotCovered(VertexId, VertexId),
    #[error("the bags containing vertex {0} do not form a connected subtree")]
    DisconnectedSubtree(VertexId),
    #[error("bag {0} mentions vertex {1} which is not in the graph")]
    ForeignVertex(usize, VertexId),
    #[error("the decomposition is not a tree: {0}")]
    NotATree(&'static str),
    #[error("the nice decomposition is malformed: {0}")]
    MalformedNice(&'static str),
    #[error("width {0} exceeds the supported maximum of 120")]
    WidthTooLarge(usize),
    #[error("line {line}: {what}")]
    Parse { line: usize, what: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Tree decomposition: bags indexed by arbitrary ids, connected by tree edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: BTreeMap<usize, VertexSet>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; zero for an empty decomposition.
    pub fn width(&self) -> usize {
        self.bags
            .values()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Checks every decomposition invariant against `g` and names the first
    /// violation: the bag graph must be a tree, bags must not mention unknown
    /// vertices, every vertex and every edge must be covered, and the bags
    /// containing any fixed vertex must form a connected subtree.
    pub fn validate(&self, g: &MultiGraph) -> Result<(), TwError> {
        if self.bags.is_empty() {
            return Err(TwError::NotATree("there are no bags"));
        }
        for (&id, bag) in &self.bags {
            for v in bag.iter() {
                if !g.has_vertex(v) {
                    return Err(TwError::ForeignVertex(id, v));
                }
            }
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = self.bags.keys().map(|&b| (b, Vec::new())).collect();
        for &(a, b) in &self.tree_edges {
            if a == b {
                return Err(TwError::NotATree("a tree edge joins a bag to itself"));
            }
            match (adj.contains_key(&a), adj.contains_key(&b)) {
                (true, true) => {
                    adj.get_mut(&a).unwrap().push(b);
                    adj.get_mut(&b).unwrap().push(a);
                }
                _ => return Err(TwError::NotATree("a tree edge references a missing bag")),
            }
        }
        if self.tree_edges.len() != self.bags.len() - 1 {
            return Err(TwError::NotATree("edge count must be bag count minus one"));
        }
        if reachable_from(&adj, *self.bags.keys().next().unwrap(), None).len() != self.bags.len() {
            return Err(TwError::NotATree("the bag graph is disconnected"));
        }
        for v in g.vertices() {
            if !self.bags.values().any(|b| b.contains(v)) {
                return Err(TwError::VertexNotCovered(v));
            }
        }
        for (u, v, _) in g.edge_multiplicities() {
            if u != v && !self.bags.values().any(|b| b.contains(u) && b.contains(v)) {
                return Err(TwError::EdgeNotCovered(u, v));
            }
        }
        for v in g.vertices() {
            let holding: Vec<usize> = self
                .bags
                .iter()
                .filter(|(_, b)| b.contains(v))
                .map(|(&id, _)| id)
                .collect();
            let seen = reachable_from(&adj, holding[0], Some(&holding));
            if seen.len() != holding.len() {
                return Err(TwError::DisconnectedSubtree(v));
            }
        }
        Ok(())
    }
}

/// Bag ids reachable from `start`, optionally restricted to the ids in `within`.
fn reachable_from(
    adj: &BTreeMap<usize, Vec<usize>>,
    start: usize,
    within: Option<&[usize]>,
) -> Vec<usize> {
    let allowed = |b: usize| within.is_none_or(|w| w.contains(&b));
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(b) = stack.pop() {
        for &nb in &adj[&b] {
            if allowed(nb) && !seen.contains(&nb) {
                seen.push(nb);
                stack.push(nb);
            }
        }
    }
    seen
}

/// Min-degree elimination. Each step removes a smallest-degree vertex after
/// turning its neighborhood into a clique; the bag recorded for the step is the
/// vertex plus that neighborhood, and each bag hangs off the bag of the
/// earliest-eliminated vertex it still mentions. Multiplicities and self-loops
/// do not affect the result. The empty graph yields a single empty bag.
pub fn heuristic_decomposition(g: &MultiGraph) -> TreeDecomposition {
    let mut adj: BTreeMap<VertexId, VertexSet> = g
        .vertices()
        .map(|v| (v, g.neighbors(v).filter(|&w| w != v).collect()))
        .collect();
    let mut elim_index: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut bags: Vec<VertexSet> = Vec::new();
    while !adj.is_empty() {
        let (&v, _) = adj.iter().min_by_key(|(&v, nb)| (nb.len(), v)).unwrap();
        let nbrs = adj.remove(&v).unwrap();
        for a in nbrs.iter() {
            adj.get_mut(&a).unwrap().remove(v);
            for b in nbrs.iter().filter(|&b| b > a) {
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
        }
        elim_index.insert(v, bags.len());
        bags.push(nbrs.with(v));
    }
    if bags.is_empty() {
        bags.push(VertexSet::new());
    }
    let mut tree_edges = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        // Everything in the bag except the vertex eliminated at step i is
        // eliminated later; the earliest of those bags contains this whole rest.
        let parent = bag
            .iter()
            .map(|w| elim_index[&w])
            .filter(|&j| j > i)
            .min();
        match parent {
            Some(j) => tree_edges.push((i, j)),
            None if i + 1 < bags.len() => tree_edges.push((i, i + 1)),
            None => {}
        }
    }
    TreeDecomposition {
        bags: bags.into_iter().enumerate().collect(),
        tree_edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceNodeKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceNodeKind,
    pub bag: VertexSet,
    pub children: Vec<usize>,
}

/// Rooted decomposition made of leaf / introduce / forget / join nodes, with
/// empty leaf and root bags. Built by [`make_nice`]; [`solve_tw`] walks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Node ids with every child listed before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
            } else {
                stack.push((id, true));
                for &c in &self.nodes[id].children {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Structural soundness plus the three decomposition invariants against `g`.
    pub fn validate(&self, g: &MultiGraph) -> Result<(), TwError> {
        if self.root >= self.nodes.len() {
            return Err(TwError::MalformedNice("the root id is out of range"));
        }
        for node in &self.nodes {
            let arity_ok = match node.kind {
                NiceNodeKind::Leaf => node.children.is_empty(),
                NiceNodeKind::Introduce(_) | NiceNodeKind::Forget(_) => node.children.len() == 1,
                NiceNodeKind::Join => node.children.len() == 2,
            };
            if !arity_ok || node.children.iter().any(|&c| c >= self.nodes.len()) {
                return Err(TwError::MalformedNice("a node has the wrong children"));
            }
            match node.kind {
                NiceNodeKind::Leaf => {
                    if !node.bag.is_empty() {
                        return Err(TwError::MalformedNice("a leaf bag is not empty"));
                    }
                }
                NiceNodeKind::Introduce(v) => {
                    let child = &self.nodes[node.children[0]];
                    if child.bag.contains(v) || node.bag != child.bag.with(v) {
                        return Err(TwError::MalformedNice(
                            "an introduce node must add exactly its named vertex",
                        ));
                    }
                }
                NiceNodeKind::Forget(v) => {
                    let child = &self.nodes[node.children[0]];
                    if !child.bag.contains(v) || node.bag != child.bag.without(v) {
                        return Err(TwError::MalformedNice(
                            "a forget node must drop exactly its named vertex",
                        ));
                    }
                }
                NiceNodeKind::Join => {
                    if self.nodes[node.children[0]].bag != node.bag
                        || self.nodes[node.children[1]].bag != node.bag
                    {
                        return Err(TwError::MalformedNice(
                            "a join node's children must carry the same bag",
                        ));
                    }
                }
            }
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err(TwError::MalformedNice("the root bag is not empty"));
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        let mut count = 0usize;
        while let Some(id) = stack.pop() {
            if seen[id] {
                return Err(TwError::MalformedNice("a node is shared between branches"));
            }
            seen[id] = true;
            count += 1;
            stack.extend(self.nodes[id].children.iter().copied());
        }
        if count != self.nodes.len() {
            return Err(TwError::MalformedNice("a node is unreachable from the root"));
        }
        for (id, node) in self.nodes.iter().enumerate() {
            for v in node.bag.iter() {
                if !g.has_vertex(v) {
                    return Err(TwError::ForeignVertex(id, v));
                }
            }
        }
        for v in g.vertices() {
            if !self.nodes.iter().any(|n| n.bag.contains(v)) {
                return Err(TwError::VertexNotCovered(v));
            }
        }
        for (u, v, _) in g.edge_multiplicities() {
            if u != v && !self.nodes.iter().any(|n| n.bag.contains(u) && n.bag.contains(v)) {
                return Err(TwError::EdgeNotCovered(u, v));
            }
        }
        // Subtree connectivity: walking up from the root, a vertex must not
        // reappear after the subtree holding it has been left behind.
        for v in g.vertices() {
            let holding: Vec<usize> = (0..self.nodes.len())
                .filter(|&id| self.nodes[id].bag.contains(v))
                .collect();
            let mut adj: BTreeMap<usize, Vec<usize>> =
                holding.iter().map(|&id| (id, Vec::new())).collect();
            for &id in &holding {
                for &c in &self.nodes[id].children {
                    if self.nodes[c].bag.contains(v) {
                        adj.get_mut(&id).unwrap().push(c);
                        adj.get_mut(&c).unwrap().push(id);
                    }
                }
            }
            if reachable_from(&adj, holding[0], Some(&holding)).len() != holding.len() {
                return Err(TwError::DisconnectedSubtree(v));
            }
        }
        Ok(())
    }
}

/// Rewrites a valid decomposition of `g` into a nice one: every original bag
/// becomes a chain of forgets and introduces towards its parent, children are
/// combined with joins, and the root bag is forgotten down to empty. The
/// result has O(width · (bags + vertices)) nodes.
pub fn make_nice(g: &MultiGraph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition, TwError> {
    td.validate(g)?;
    let mut adj: BTreeMap<usize, Vec<usize>> = td.bags.keys().map(|&b| (b, Vec::new())).collect();
    for &(a, b) in &td.tree_edges {
        adj.get_mut(&a).unwrap().push(b);
        adj.get_mut(&b).unwrap().push(a);
    }
    let root_bag_id = *td.bags.keys().next().unwrap();
    let mut nodes: Vec<NiceNode> = Vec::new();
    let top = build_nice(td, &adj, &mut nodes, root_bag_id, None);
    let mut cur = top;
    let mut cur_bag = td.bags[&root_bag_id].clone();
    for v in td.bags[&root_bag_id].iter() {
        cur_bag.remove(v);
        cur = push_node(&mut nodes, NiceNodeKind::Forget(v), cur_bag.clone(), vec![cur]);
    }
    let ntd = NiceTreeDecomposition { nodes, root: cur };
    debug_assert!(ntd.validate(g).is_ok());
    debug_assert!(
        ntd.nodes.len()
            <= (td.bags.len() + td.tree_edges.len() + 1) * (2 * td.width() + 4) + 2,
        "nicification must stay linear in bags times width"
    );
    Ok(ntd)
}

fn push_node(
    nodes: &mut Vec<NiceNode>,
    kind: NiceNodeKind,
    bag: VertexSet,
    children: Vec<usize>,
) -> usize {
    nodes.push(NiceNode { kind, bag, children });
    nodes.len() - 1
}

/// Emits nodes producing exactly `td.bags[bag_id]` on top, returning their root.
fn build_nice(
    td: &TreeDecomposition,
    adj: &BTreeMap<usize, Vec<usize>>,
    nodes: &mut Vec<NiceNode>,
    bag_id: usize,
    parent: Option<usize>,
) -> usize {
    let bag = &td.bags[&bag_id];
    let mut tops = Vec::new();
    for &kid in adj[&bag_id].iter().filter(|&&k| Some(k) != parent) {
        let mut cur = build_nice(td, adj, nodes, kid, Some(bag_id));
        let mut cur_bag = td.bags[&kid].clone();
        for v in td.bags[&kid].difference(bag).iter() {
            cur_bag.remove(v);
            cur = push_node(nodes, NiceNodeKind::Forget(v), cur_bag.clone(), vec![cur]);
        }
        for v in bag.difference(&td.bags[&kid]).iter() {
            cur_bag.insert(v);
            cur = push_node(nodes, NiceNodeKind::Introduce(v), cur_bag.clone(), vec![cur]);
        }
        tops.push(cur);
    }
    match tops.split_first() {
        None => {
            let mut cur = push_node(nodes, NiceNodeKind::Leaf, VertexSet::new(), vec![]);
            let mut cur_bag = VertexSet::new();
            for v in bag.iter() {
                cur_bag.insert(v);
                cur = push_node(nodes, NiceNodeKind::Introduce(v), cur_bag.clone(), vec![cur]);
            }
            cur
        }
        Some((&first, rest)) => rest.iter().fold(first, |acc, &t| {
            push_node(nodes, NiceNodeKind::Join, bag.clone(), vec![acc, t])
        }),
    }
}
