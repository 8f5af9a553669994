//! The dynamic program behind [`solve_tw`].
//!
//! Walking a nice tree decomposition bottom-up, each node's table holds one
//! [`DPTuple`] per distinguishable way a solution could intersect the vertices
//! introduced below the node:
//!
//! * `x` — the solution vertices in the bag, `size` the solution vertices below.
//! * `c` — a coloring of the bag pledging final forest components. Forest
//!   vertices of one color must end up in the same component of the final
//!   forest; for a solution vertex the color names the component its private
//!   cycle closes through.
//! * `d` — per solution vertex, how many edge units (capped at two, doubled
//!   edges count twice) it already has into forgotten vertices of its pledged
//!   component. Two units into one tree close a private cycle, so every member
//!   of the solution is genuinely needed and the solution is minimal.
//! * `f` — merge colors: forest vertices whose partial-forest component's bag
//!   trace is not connected inside the bag share a nonzero color, so bag-level
//!   reasoning can still see they are one component. Color 0 marks everything
//!   else. Together with the bag edges this encodes the components' traces.
//!
//! Colors are canonical (renamed in first-occurrence order over ascending
//! vertex ids), tuples agreeing on everything but `size` are collapsed keeping
//! the larger size, and each surviving root tuple describes a feedback vertex
//! set in which every vertex has a private cycle — a minimal one. Table sizes
//! therefore depend on the width alone, monitored against [`state_bound`].

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{MultiGraph, UnionFind, VertexId, VertexSet, Witness};

use super::{NiceNodeKind, NiceTreeDecomposition, TwError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPTuple {
    pub x: VertexSet,
    pub size: usize,
    pub c: BTreeMap<VertexId, u8>,
    pub d: BTreeMap<VertexId, u8>,
    pub f: BTreeMap<VertexId, u8>,
    back: Back,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Back {
    Leaf,
    Intro { child: usize, added: bool },
    Forget { child: usize },
    Join { left: usize, right: usize },
}

type TupleKey = (Vec<VertexId>, Vec<u8>, Vec<u8>, Vec<u8>);

impl DPTuple {
    /// Renames colors to first-occurrence order over ascending vertex ids;
    /// merge color 0 stays fixed.
    fn normalize(&mut self) {
        let mut rename: BTreeMap<u8, u8> = BTreeMap::new();
        let mut next = 0u8;
        let keys: Vec<VertexId> = self.c.keys().copied().collect();
        for v in &keys {
            let raw = self.c[v];
            let lbl = *rename.entry(raw).or_insert_with(|| {
                let l = next;
                next += 1;
                l
            });
            self.c.insert(*v, lbl);
        }
        let mut rename_f: BTreeMap<u8, u8> = BTreeMap::new();
        let mut next_f = 1u8;
        let keys: Vec<VertexId> = self.f.keys().copied().collect();
        for v in &keys {
            let raw = self.f[v];
            if raw == 0 {
                continue;
            }
            let lbl = *rename_f.entry(raw).or_insert_with(|| {
                let l = next_f;
                next_f += 1;
                l
            });
            self.f.insert(*v, lbl);
        }
    }

    fn key(&self) -> TupleKey {
        (
            self.x.to_vec(),
            self.c.values().copied().collect(),
            self.d.values().copied().collect(),
            self.f.values().copied().collect(),
        )
    }

    /// Structural invariants relative to the node's bag.
    fn is_consistent_with(&self, bag: &VertexSet) -> bool {
        self.x.is_subset(bag)
            && self.c.keys().copied().eq(bag.iter())
            && self.f.keys().copied().eq(bag.iter())
            && self.d.keys().copied().eq(self.x.iter())
            && self.d.values().all(|&d| d <= 2)
            && self.x.iter().all(|v| self.f[&v] == 0)
            && self.size >= self.x.len()
    }
}

/// Collects candidate tuples, collapsing equal keys onto the larger size.
/// On ties the earlier insertion wins, so derivations from smaller child
/// indices are preferred deterministically.
struct Sink {
    index: BTreeMap<TupleKey, usize>,
    out: Vec<DPTuple>,
}

impl Sink {
    fn new() -> Self {
        Sink { index: BTreeMap::new(), out: Vec::new() }
    }

    fn push(&mut self, mut t: DPTuple) {
        t.normalize();
        match self.index.entry(t.key()) {
            std::collections::btree_map::Entry::Occupied(e) => {
                let i = *e.get();
                if t.size > self.out[i].size {
                    self.out[i] = t;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(self.out.len());
                self.out.push(t);
            }
        }
    }

    fn finish(self) -> Vec<DPTuple> {
        self.out
    }
}

/// Partition of the bag's forest vertices into the traces of the partial
/// forest's components: the closure of bag-level adjacency and shared nonzero
/// merge colors. Returns vertex → smallest member of its block.
fn forest_blocks(
    g: &MultiGraph,
    bag: &VertexSet,
    x: &VertexSet,
    f: &BTreeMap<VertexId, u8>,
) -> BTreeMap<VertexId, VertexId> {
    let forest: Vec<VertexId> = bag.iter().filter(|&v| !x.contains(v)).collect();
    let mut uf = UnionFind::new();
    for &v in &forest {
        uf.add(v);
    }
    for &v in &forest {
        for (w, _) in g.neighbors_with_mult(v) {
            if w > v && bag.contains(w) && !x.contains(w) {
                uf.union(v, w);
            }
        }
    }
    let mut seen_color: BTreeMap<u8, VertexId> = BTreeMap::new();
    for &v in &forest {
        let color = f[&v];
        if color != 0 {
            if let Some(&first) = seen_color.get(&color) {
                uf.union(v, first);
            } else {
                seen_color.insert(color, v);
            }
        }
    }
    forest.into_iter().map(|v| (v, uf.find(v))).collect()
}

/// Members of each block, keyed and ordered by the block representative.
fn group_blocks(blocks: &BTreeMap<VertexId, VertexId>) -> BTreeMap<VertexId, Vec<VertexId>> {
    let mut groups: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (&v, &rep) in blocks {
        groups.entry(rep).or_default().push(v);
    }
    groups
}

/// Merge coloring derived from a block partition: members of a block that is
/// already connected by bag edges alone get color 0, every other block gets
/// one nonzero color. Solution vertices always carry 0.
fn derive_f(
    g: &MultiGraph,
    bag: &VertexSet,
    blocks: &BTreeMap<VertexId, VertexId>,
) -> BTreeMap<VertexId, u8> {
    let mut f: BTreeMap<VertexId, u8> = bag.iter().map(|v| (v, 0)).collect();
    let mut next = 1u8;
    for members in group_blocks(blocks).values() {
        if members.len() <= 1 {
            continue;
        }
        let set: VertexSet = members.iter().copied().collect();
        if g.components_within(&set).len() > 1 {
            for &v in members {
                f.insert(v, next);
            }
            next += 1;
        }
    }
    f
}

/// Every color in use plus one fresh one: the choices that matter for a newly
/// introduced vertex, since unused colors are interchangeable.
fn palette(c: &BTreeMap<VertexId, u8>) -> Vec<u8> {
    let used: BTreeSet<u8> = c.values().copied().collect();
    let fresh = (0..=u8::MAX).find(|x| !used.contains(x)).expect("bags are far smaller than 255");
    used.into_iter().chain([fresh]).collect()
}

/// Table of a leaf: the single empty tuple.
pub fn dp_leaf() -> Vec<DPTuple> {
    vec![DPTuple {
        x: VertexSet::new(),
        size: 0,
        c: BTreeMap::new(),
        d: BTreeMap::new(),
        f: BTreeMap::new(),
        back: Back::Leaf,
    }]
}

/// Extends each child tuple by the introduced vertex `u`, either into the
/// solution (pledging its private cycle on every color in turn, with the
/// counter starting at two for a self-looped vertex — the loop already is a
/// private cycle) or into the forest. The forest branch is skipped when a loop
/// forces `u` into the solution, when neighboring forest vertices disagree
/// about their color, or when `u` has two edge units into one partial-forest
/// component, which would close a cycle.
pub fn dp_introduce(
    g: &MultiGraph,
    bag: &VertexSet,
    u: VertexId,
    child: &[DPTuple],
) -> Vec<DPTuple> {
    debug_assert!(bag.contains(u));
    let child_bag = bag.without(u);
    let looped = g.loop_count(u) > 0;
    let mut sink = Sink::new();
    for (ci, t) in child.iter().enumerate() {
        debug_assert!(t.is_consistent_with(&child_bag));
        for color in palette(&t.c) {
            let mut nt = t.clone();
            nt.x.insert(u);
            nt.c.insert(u, color);
            nt.d.insert(u, if looped { 2 } else { 0 });
            nt.f.insert(u, 0);
            nt.size += 1;
            nt.back = Back::Intro { child: ci, added: true };
            sink.push(nt);
        }
        if looped {
            continue;
        }
        let forest_nbrs: Vec<(VertexId, u32)> = g
            .neighbors_with_mult(u)
            .filter(|&(v, _)| child_bag.contains(v) && !t.x.contains(v))
            .collect();
        let nbr_colors: BTreeSet<u8> = forest_nbrs.iter().map(|(v, _)| t.c[v]).collect();
        if nbr_colors.len() > 1 {
            continue;
        }
        let blocks = forest_blocks(g, &child_bag, &t.x, &t.f);
        let mut units_into: BTreeMap<VertexId, u32> = BTreeMap::new();
        for &(v, m) in &forest_nbrs {
            *units_into.entry(blocks[&v]).or_insert(0) += m.min(2);
        }
        if units_into.values().any(|&m| m >= 2) {
            continue;
        }
        let mut uf = UnionFind::new();
        uf.add(u);
        for (&v, &rep) in &blocks {
            uf.add(v);
            uf.union(v, rep);
        }
        for &(v, _) in &forest_nbrs {
            uf.union(u, v);
        }
        let merged: BTreeMap<VertexId, VertexId> = blocks
            .keys()
            .copied()
            .chain([u])
            .collect::<Vec<_>>()
            .into_iter()
            .map(|v| (v, uf.find(v)))
            .collect();
        let new_f = derive_f(g, bag, &merged);
        let candidates: Vec<u8> = match nbr_colors.first() {
            Some(&c0) => vec![c0],
            None => palette(&t.c),
        };
        for color in candidates {
            let mut nt = t.clone();
            nt.c.insert(u, color);
            nt.f = new_f.clone();
            nt.back = Back::Intro { child: ci, added: false };
            sink.push(nt);
        }
    }
    sink.finish()
}

/// Drops the forgotten vertex `u`. A solution vertex survives only if its
/// private cycle is secured: counted units plus edge units into same-colored
/// forest vertices still in the bag must reach two. A forest vertex first pays
/// its edge units out to adjacent same-colored solution vertices; if it was
/// the last trace of its component in the bag, the component is sealed — that
/// is a contradiction while other forest vertices still pledge its color, and
/// otherwise unfinished counters against that color start over.
pub fn dp_forget(g: &MultiGraph, bag: &VertexSet, u: VertexId, child: &[DPTuple]) -> Vec<DPTuple> {
    debug_assert!(!bag.contains(u));
    let child_bag = bag.with(u);
    let mut sink = Sink::new();
    for (ci, t) in child.iter().enumerate() {
        debug_assert!(t.is_consistent_with(&child_bag));
        let cu = t.c[&u];
        if t.x.contains(u) {
            let units: u32 = g
                .neighbors_with_mult(u)
                .filter(|&(v, _)| bag.contains(v) && !t.x.contains(v) && t.c[&v] == cu)
                .map(|(_, m)| m.min(2))
                .sum();
            if u32::from(t.d[&u]) + units < 2 {
                continue;
            }
            let mut nt = t.clone();
            nt.x.remove(u);
            nt.c.remove(&u);
            nt.d.remove(&u);
            nt.f.remove(&u);
            nt.back = Back::Forget { child: ci };
            sink.push(nt);
        } else {
            let blocks = forest_blocks(g, &child_bag, &t.x, &t.f);
            let mut nt = t.clone();
            for (v, m) in g.neighbors_with_mult(u) {
                if t.x.contains(v) && t.c[&v] == cu {
                    let dv = nt.d.get_mut(&v).unwrap();
                    if *dv < 2 {
                        *dv = (*dv + m.min(2) as u8).min(2);
                    }
                }
            }
            let block_rep = blocks[&u];
            let sealing = blocks.iter().all(|(&v, &rep)| v == u || rep != block_rep);
            if sealing {
                if bag.iter().any(|v| !t.x.contains(v) && t.c[&v] == cu) {
                    // Another forest vertex still pledges this color, but the
                    // sealed component can never reach it.
                    continue;
                }
                for (v, dv) in nt.d.iter_mut() {
                    if t.c[v] == cu && *dv < 2 {
                        *dv = 0;
                    }
                }
            }
            nt.c.remove(&u);
            nt.f.remove(&u);
            let remaining: BTreeMap<VertexId, VertexId> = {
                let new_rep = blocks
                    .iter()
                    .filter(|&(&v, &rep)| v != u && rep == block_rep)
                    .map(|(&v, _)| v)
                    .min();
                blocks
                    .iter()
                    .filter(|&(&v, _)| v != u)
                    .map(|(&v, &rep)| {
                        (v, if rep == block_rep { new_rep.unwrap() } else { rep })
                    })
                    .collect()
            };
            nt.f = derive_f(g, bag, &remaining);
            nt.back = Back::Forget { child: ci };
            sink.push(nt);
        }
    }
    sink.finish()
}

/// Combines two tables over the same bag. Partners must agree on the solution
/// vertices and the coloring; private-cycle counters add up (the forgotten
/// vertices below the two sides are disjoint) and the two partial forests are
/// glued. Gluing inserts, per side and per component trace, one bridge for
/// each bag-edge-connected piece beyond the first; a bridge landing between
/// already-connected pieces would close a cycle, so the pair is discarded.
pub fn dp_join(g: &MultiGraph, bag: &VertexSet, left: &[DPTuple], right: &[DPTuple]) -> Vec<DPTuple> {
    let mut buckets: BTreeMap<(Vec<VertexId>, Vec<u8>), Vec<usize>> = BTreeMap::new();
    for (ri, r) in right.iter().enumerate() {
        debug_assert!(r.is_consistent_with(bag));
        buckets
            .entry((r.x.to_vec(), r.c.values().copied().collect()))
            .or_default()
            .push(ri);
    }
    let mut sink = Sink::new();
    for (li, l) in left.iter().enumerate() {
        debug_assert!(l.is_consistent_with(bag));
        let key = (l.x.to_vec(), l.c.values().copied().collect());
        let Some(partners) = buckets.get(&key) else { continue };
        let forest: Vec<VertexId> = bag.iter().filter(|&v| !l.x.contains(v)).collect();
        for &ri in partners {
            let r = &right[ri];
            let mut uf = UnionFind::new();
            for &v in &forest {
                uf.add(v);
            }
            let mut acyclic = true;
            for &v in &forest {
                for (w, m) in g.neighbors_with_mult(v) {
                    if w > v && bag.contains(w) && !l.x.contains(w) {
                        debug_assert!(m < 2, "a doubled edge never has both endpoints in the forest");
                        if !uf.union(v, w) {
                            acyclic = false;
                        }
                    }
                }
            }
            debug_assert!(acyclic, "bag-level forest edges are acyclic in reachable tuples");
            for side in [l, r] {
                if !acyclic {
                    break;
                }
                let blocks = forest_blocks(g, bag, &side.x, &side.f);
                for members in group_blocks(&blocks).values() {
                    let set: VertexSet = members.iter().copied().collect();
                    let pieces = g.components_within(&set);
                    for pair in pieces.windows(2) {
                        if !uf.union(pair[0][0], pair[1][0]) {
                            acyclic = false;
                            break;
                        }
                    }
                    if !acyclic {
                        break;
                    }
                }
            }
            if !acyclic {
                continue;
            }
            let mut nt = l.clone();
            nt.size = l.size + r.size - l.x.len();
            for (v, dv) in nt.d.iter_mut() {
                *dv = (*dv + r.d[v]).min(2);
            }
            let glued: BTreeMap<VertexId, VertexId> =
                forest.iter().map(|&v| (v, uf.find(v))).collect();
            nt.f = derive_f(g, bag, &glued);
            nt.back = Back::Join { left: li, right: ri };
            sink.push(nt);
        }
    }
    sink.finish()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwOutcome {
    Yes { size: usize, witness: Witness },
    No,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TwStats {
    pub nodes: usize,
    pub width: usize,
    pub max_tuples: usize,
    pub total_tuples: u64,
}

/// Monitored ceiling on table sizes: (24·(w+1))^(2·(w+1)) for width w. Every
/// bag vertex contributes a constant number of choices (membership, color,
/// counter, merge color), so tables grow with the width, never the graph.
pub fn state_bound(width: usize) -> u128 {
    let base = 24u128.saturating_mul(width as u128 + 1);
    base.saturating_pow(2 * (width as u32 + 1))
}

/// Decides whether the graph has a minimal feedback vertex set with at least
/// `k` vertices by dynamic programming over the nice decomposition, which must
/// be a valid decomposition of `g`. The maximum is always computed, so `k = 0`
/// reports the optimum; the witness is rebuilt through back-pointers and
/// checked against `g` in debug builds.
pub fn solve_tw(
    g: &MultiGraph,
    ntd: &NiceTreeDecomposition,
    k: usize,
) -> Result<(TwOutcome, TwStats), TwError> {
    ntd.validate(g)?;
    if ntd.width() > 120 {
        return Err(TwError::WidthTooLarge(ntd.width()));
    }
    let mut stats = TwStats {
        nodes: ntd.nodes().len(),
        width: ntd.width(),
        max_tuples: 0,
        total_tuples: 0,
    };
    let mut tables: Vec<Vec<DPTuple>> = vec![Vec::new(); ntd.nodes().len()];
    for id in ntd.post_order() {
        let node = &ntd.nodes()[id];
        let table = match node.kind {
            NiceNodeKind::Leaf => dp_leaf(),
            NiceNodeKind::Introduce(v) => {
                dp_introduce(g, &node.bag, v, &tables[node.children[0]])
            }
            NiceNodeKind::Forget(v) => dp_forget(g, &node.bag, v, &tables[node.children[0]]),
            NiceNodeKind::Join => {
                dp_join(g, &node.bag, &tables[node.children[0]], &tables[node.children[1]])
            }
        };
        debug_assert!(!table.is_empty(), "a consistent run always survives");
        debug_assert!(
            table.len() as u128 <= state_bound(stats.width),
            "table size {} exceeds the width bound {}",
            table.len(),
            state_bound(stats.width),
        );
        stats.max_tuples = stats.max_tuples.max(table.len());
        stats.total_tuples += table.len() as u64;
        tables[id] = table;
    }
    let root_table = &tables[ntd.root()];
    assert_eq!(
        root_table.len(),
        1,
        "the empty root bag collapses to exactly one tuple"
    );
    let best_size = root_table[0].size;
    let solution = reconstruct(ntd, &tables, ntd.root(), 0);
    debug_assert_eq!(solution.len(), best_size);
    let witness = Witness::build(g, solution)?;
    debug_assert!(witness.verify(g).is_ok());
    if best_size >= k {
        Ok((TwOutcome::Yes { size: best_size, witness }, stats))
    } else {
        Ok((TwOutcome::No, stats))
    }
}

/// Replays back-pointers downward, collecting the vertices added at introduce
/// steps of the chosen derivation.
fn reconstruct(
    ntd: &NiceTreeDecomposition,
    tables: &[Vec<DPTuple>],
    node: usize,
    tuple: usize,
) -> VertexSet {
    let mut out = VertexSet::new();
    let mut stack = vec![(node, tuple)];
    while let Some((nid, ti)) = stack.pop() {
        let n = &ntd.nodes()[nid];
        match tables[nid][ti].back {
            Back::Leaf => {}
            Back::Intro { child, added } => {
                if added {
                    match n.kind {
                        NiceNodeKind::Introduce(v) => out.insert(v),
                        _ => unreachable!("intro back-pointers only appear on introduce nodes"),
                    };
                }
                stack.push((n.children[0], child));
            }
            Back::Forget { child } => stack.push((n.children[0], child)),
            Back::Join { left, right } => {
                stack.push((n.children[0], left));
                stack.push((n.children[1], right));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::super::{heuristic_decomposition, make_nice, TreeDecomposition};
    use super::*;
    use crate::oracle::{brute_mmfvs, OracleConfig};

    fn graph(n: u32, edges: &[(VertexId, VertexId)]) -> MultiGraph {
        MultiGraph::from_edges(n, edges)
    }

    fn complete(n: VertexId) -> MultiGraph {
        let mut es = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                es.push((u, v));
            }
        }
        graph(n, &es)
    }

    /// Optimum, witness and stats via the heuristic decomposition.
    fn solve_opt(g: &MultiGraph) -> (usize, Witness, TwStats) {
        let ntd = make_nice(g, &heuristic_decomposition(g)).unwrap();
        match solve_tw(g, &ntd, 0).unwrap() {
            (TwOutcome::Yes { size, witness }, stats) => (size, witness, stats),
            (TwOutcome::No, _) => unreachable!("the empty set is never beaten by nothing"),
        }
    }

    fn oracle_opt(g: &MultiGraph) -> usize {
        let cfg = OracleConfig::default();
        usize::try_from(brute_mmfvs(g, &cfg).unwrap().optimum_i64()).unwrap()
    }

    #[test]
    fn forests_have_only_the_empty_solution() {
        let mut g = graph(4, &[(1, 2), (2, 3), (3, 4)]);
        g.add_vertex_with_id(9).unwrap();
        let ntd = make_nice(&g, &heuristic_decomposition(&g)).unwrap();
        match solve_tw(&g, &ntd, 0).unwrap().0 {
            TwOutcome::Yes { size, witness } => {
                assert_eq!(size, 0);
                assert!(witness.solution.is_empty());
                witness.verify(&g).unwrap();
            }
            TwOutcome::No => panic!("k = 0 is always satisfiable"),
        }
        assert!(matches!(solve_tw(&g, &ntd, 1).unwrap().0, TwOutcome::No));

        let empty = MultiGraph::new();
        let ntd = make_nice(&empty, &heuristic_decomposition(&empty)).unwrap();
        assert!(matches!(
            solve_tw(&empty, &ntd, 0).unwrap().0,
            TwOutcome::Yes { size: 0, .. }
        ));
    }

    #[test]
    fn clique_thresholds_match_the_two_smallest_leftovers() {
        // A minimal feedback vertex set of a clique is any subset leaving two
        // vertices behind, so the optimum of K_n is n - 2.
        for n in 3..=6u32 {
            let g = complete(n);
            let ntd = make_nice(&g, &heuristic_decomposition(&g)).unwrap();
            let want = (n - 2) as usize;
            match solve_tw(&g, &ntd, want).unwrap().0 {
                TwOutcome::Yes { size, witness } => {
                    assert_eq!(size, want);
                    witness.verify(&g).unwrap();
                }
                TwOutcome::No => panic!("K_{n} must reach {want}"),
            }
            assert!(matches!(solve_tw(&g, &ntd, want + 1).unwrap().0, TwOutcome::No));
        }
    }

    #[test]
    fn small_shapes_have_known_optima() {
        // One cycle: any single vertex, never two.
        let c5 = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
        assert_eq!(solve_opt(&c5).0, 1);

        // A doubled edge is a two-vertex cycle.
        let bigon = graph(2, &[(1, 2), (1, 2)]);
        assert_eq!(solve_opt(&bigon).0, 1);

        // Theta graph: both middle vertices of two of the three paths.
        let theta = graph(5, &[(1, 3), (3, 2), (1, 4), (4, 2), (1, 5), (5, 2)]);
        assert_eq!(solve_opt(&theta).0, 2);

        // Complete bipartite K_{2,3}: one side of each of two four-cycles.
        let k23 = graph(5, &[(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert_eq!(solve_opt(&k23).0, 2);
    }

    #[test]
    fn join_nodes_glue_partial_forests() {
        // Two triangles sharing vertex 1, decomposed with a branching bag so
        // the nice decomposition contains a join.
        let g = graph(5, &[(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)]);
        let td = TreeDecomposition {
            bags: [
                (0, VertexSet::from([1])),
                (1, VertexSet::from([1, 2, 3])),
                (2, VertexSet::from([1, 4, 5])),
            ]
            .into_iter()
            .collect(),
            tree_edges: vec![(0, 1), (0, 2)],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert!(ntd
            .nodes()
            .iter()
            .any(|n| matches!(n.kind, NiceNodeKind::Join)));
        match solve_tw(&g, &ntd, 0).unwrap().0 {
            TwOutcome::Yes { size, witness } => {
                assert_eq!(size, 2, "one vertex per triangle, avoiding the shared one");
                assert_eq!(size, oracle_opt(&g));
                witness.verify(&g).unwrap();
            }
            TwOutcome::No => unreachable!(),
        }
    }

    #[test]
    fn self_loops_are_forced_into_the_solution() {
        let mut g = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        g.add_edge(5, 5).unwrap();
        g.add_edge(5, 1).unwrap();
        let (size, witness, _) = solve_opt(&g);
        assert!(witness.solution.contains(5), "a self-loop survives every deletion but its own");
        assert_eq!(size, oracle_opt(&g));
        witness.verify(&g).unwrap();
    }

    #[test]
    fn introduce_tables_respect_the_documented_cases() {
        let g = complete(3);
        let bag1 = VertexSet::from([1]);
        let bag12 = VertexSet::from([1, 2]);
        let bag123 = VertexSet::from([1, 2, 3]);
        let t0 = dp_leaf();
        let t1 = dp_introduce(&g, &bag1, 1, &t0);
        let t2 = dp_introduce(&g, &bag12, 2, &t1);
        let t3 = dp_introduce(&g, &bag123, 3, &t2);
        // A newly pledged solution vertex always starts with no counted units.
        for t in t1.iter().chain(&t2).chain(&t3) {
            for v in t.x.iter() {
                assert_eq!(t.f[&v], 0);
            }
        }
        assert!(t1.iter().all(|t| !t.x.contains(1) || t.d[&1] == 0));
        // All three vertices in the forest would close the triangle.
        assert!(t3.iter().all(|t| !t.x.is_empty()));
        // Two forest vertices joined by an edge must share a color.
        for t in t3.iter().filter(|t| t.x.len() == 1) {
            let forest: Vec<VertexId> = bag123.iter().filter(|&v| !t.x.contains(v)).collect();
            assert_eq!(t.c[&forest[0]], t.c[&forest[1]]);
        }
    }

    #[test]
    fn matches_the_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e77);
        let mut checked = 0usize;
        for n in 5..=10u32 {
            for &p in &[0.25f64, 0.4, 0.55] {
                for _ in 0..2 {
                    let mut edges = Vec::new();
                    for u in 1..=n {
                        for v in (u + 1)..=n {
                            if rng.gen_bool(p) {
                                edges.push((u, v));
                                if rng.gen_bool(0.12) {
                                    edges.push((u, v));
                                }
                            }
                        }
                    }
                    let mut g = graph(n, &edges);
                    if rng.gen_bool(0.3) {
                        let v = rng.gen_range(1..=n);
                        g.add_edge(v, v).unwrap();
                    }
                    let (size, witness, _) = solve_opt(&g);
                    assert_eq!(size, oracle_opt(&g), "optimum mismatch on {g:?}");
                    witness.verify(&g).unwrap();
                    let ntd = make_nice(&g, &heuristic_decomposition(&g)).unwrap();
                    assert!(matches!(
                        solve_tw(&g, &ntd, size).unwrap().0,
                        TwOutcome::Yes { .. }
                    ));
                    assert!(matches!(solve_tw(&g, &ntd, size + 1).unwrap().0, TwOutcome::No));
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 36);
    }

    #[test]
    fn the_answer_does_not_depend_on_the_decomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xdecaf);
        for _ in 0..6 {
            let n = rng.gen_range(5..=8u32);
            let mut edges = Vec::new();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = graph(n, &edges);
            let via_heuristic = solve_opt(&g).0;
            let single_bag = TreeDecomposition {
                bags: [(0, g.vertex_set())].into_iter().collect(),
                tree_edges: vec![],
            };
            let ntd = make_nice(&g, &single_bag).unwrap();
            let via_single = match solve_tw(&g, &ntd, 0).unwrap().0 {
                TwOutcome::Yes { size, .. } => size,
                TwOutcome::No => unreachable!(),
            };
            assert_eq!(via_heuristic, via_single);
        }
    }

    #[test]
    fn tables_stay_within_the_width_bound() {
        let g = graph(8, &[(1, 2), (2, 3), (3, 4), (4, 1), (4, 5), (5, 6), (6, 7), (7, 8), (8, 5)]);
        let (_, _, stats) = solve_opt(&g);
        assert!(stats.max_tuples as u128 <= state_bound(stats.width));
        assert!(stats.width <= 3);

        let k5 = complete(5);
        let (_, _, stats) = solve_opt(&k5);
        assert!(stats.max_tuples as u128 <= state_bound(stats.width));
    }

    #[test]
    fn oversized_widths_are_rejected_up_front() {
        // A fake nice decomposition with a huge bag is refused before any
        // tables are built; constructing one takes a graph with 122 vertices.
        let mut edges = Vec::new();
        for u in 1..=122u32 {
            for v in (u + 1)..=122 {
                edges.push((u, v));
            }
        }
        let g = graph(122, &edges);
        let td = TreeDecomposition {
            bags: [(0, g.vertex_set())].into_iter().collect(),
            tree_edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert_eq!(solve_tw(&g, &ntd, 0), Err(TwError::WidthTooLarge(121)));
    }
}
