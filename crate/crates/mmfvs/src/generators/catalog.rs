//! Exhaustive catalogs of small simple graphs, one representative per
//! isomorphism class, for brute-force cross-checking. Graphs are encoded
//! as upper-triangle bitmasks and deduplicated by a canonical code: the
//! maximum code over all vertex arrangements that list color-refinement
//! classes in a fixed class order. The candidate arrangements depend only
//! on the isomorphism class, so two graphs get the same canonical code
//! exactly when they are isomorphic. Each level n is generated by
//! augmenting every canonical (n−1)-vertex graph with one new vertex and
//! every possible neighborhood.

use crate::graph::{MultiGraph, VertexId};
use std::collections::BTreeSet;

/// Bit position of the pair (i, j), i < j, in a graph code.
fn pair_bit(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

/// Neighbor bitmasks of the graph a code describes.
fn adj_from_code(n: usize, code: u64) -> Vec<u64> {
    let mut adj = vec![0u64; n];
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if code >> bit & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            bit += 1;
        }
    }
    adj
}

/// Code of the arrangement that puts vertex `pi[p]` at position `p`.
fn code_of_arrangement(n: usize, adj: &[u64], pi: &[usize]) -> u64 {
    let mut code = 0u64;
    for q in 1..n {
        for p in 0..q {
            if adj[pi[p]] >> pi[q] & 1 == 1 {
                code |= 1 << pair_bit(p, q);
            }
        }
    }
    code
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn best_over_products(
    class_perms: &[Vec<Vec<usize>>],
    ci: usize,
    prefix: &mut Vec<usize>,
    n: usize,
    adj: &[u64],
    best: &mut u64,
) {
    if ci == class_perms.len() {
        *best = (*best).max(code_of_arrangement(n, adj, prefix));
        return;
    }
    for p in &class_perms[ci] {
        let len = prefix.len();
        prefix.extend_from_slice(p);
        best_over_products(class_perms, ci + 1, prefix, n, adj, best);
        prefix.truncate(len);
    }
}

/// Canonical code: vertices are first partitioned by iterated color
/// refinement (start equal, re-key every vertex by its color and the
/// sorted colors of its neighbors until the class count stops growing);
/// the code is the maximum over all arrangements that keep the classes
/// in ascending color order. Both the partition and the class order are
/// isomorphism-invariant, and the maximum is attained by an actual
/// arrangement of the graph, so isomorphic graphs — and only they — share
/// a canonical code.
fn canonical_code(n: usize, adj: &[u64]) -> u64 {
    let mut colors = vec![0usize; n];
    let mut distinct = 1usize;
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nc: Vec<usize> =
                    (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| colors[u]).collect();
                nc.sort_unstable();
                (colors[v], nc)
            })
            .collect();
        let mut uniq = keys.clone();
        uniq.sort_unstable();
        uniq.dedup();
        colors = keys.iter().map(|k| uniq.binary_search(k).unwrap()).collect();
        if uniq.len() == distinct {
            break;
        }
        distinct = uniq.len();
    }

    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); distinct];
    for (v, &c) in colors.iter().enumerate() {
        classes[c].push(v);
    }
    let class_perms: Vec<Vec<Vec<usize>>> =
        classes.iter().map(|class| permutations(class)).collect();
    let mut best = 0u64;
    let mut prefix = Vec::with_capacity(n);
    best_over_products(&class_perms, 0, &mut prefix, n, adj, &mut best);
    best
}

fn graph_from_code(n: usize, code: u64) -> MultiGraph {
    let mut g = MultiGraph::new();
    for _ in 0..n {
        g.add_vertex();
    }
    for j in 1..n {
        for i in 0..j {
            if code >> pair_bit(i, j) & 1 == 1 {
                g.add_edge((i + 1) as VertexId, (j + 1) as VertexId).unwrap();
            }
        }
    }
    g
}

fn canonical_codes(n: usize) -> Vec<u64> {
    assert!(
        (1..=10).contains(&n),
        "catalog supports 1..=10 vertices, asked for {n}"
    );
    let mut level: Vec<u64> = vec![0];
    for size in 2..=n {
        let mut next: BTreeSet<u64> = BTreeSet::new();
        for &code in &level {
            let parent = adj_from_code(size - 1, code);
            for mask in 0u64..1 << (size - 1) {
                let mut adj = parent.clone();
                adj.push(mask);
                for (v, row) in adj.iter_mut().enumerate().take(size - 1) {
                    if mask >> v & 1 == 1 {
                        *row |= 1 << (size - 1);
                    }
                }
                next.insert(canonical_code(size, &adj));
            }
        }
        level = next.into_iter().collect();
    }
    level
}

/// All simple graphs on vertices 1..=n, one per isomorphism class.
pub fn all_graphs(n: usize) -> Vec<MultiGraph> {
    canonical_codes(n).into_iter().map(|code| graph_from_code(n, code)).collect()
}

/// All connected simple graphs on vertices 1..=n, one per isomorphism
/// class.
pub fn connected_graphs(n: usize) -> Vec<MultiGraph> {
    all_graphs(n)
        .into_iter()
        .filter(|g| g.components_within(&g.vertices().collect()).len() == 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn catalog_counts_match_the_published_sequences() {
        // graph counts from OEIS: A000088 (all), A001349 (connected)
        let all = [1usize, 2, 4, 11, 34, 156];
        let connected = [1usize, 1, 2, 6, 21, 112];
        for n in 1..=6usize {
            assert_eq!(all_graphs(n).len(), all[n - 1], "all graphs on {n} vertices");
            assert_eq!(
                connected_graphs(n).len(),
                connected[n - 1],
                "connected graphs on {n} vertices"
            );
        }
    }

    #[test]
    fn four_vertex_catalog_has_the_right_edge_census() {
        let mut by_edges = [0usize; 7];
        for g in all_graphs(4) {
            assert_eq!(g.vertex_count(), 4);
            by_edges[g.edge_count()] += 1;
        }
        assert_eq!(by_edges, [1, 1, 2, 3, 2, 1, 1]);
    }

    #[test]
    fn canonical_codes_ignore_labelings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..=7usize);
            let mut adj = vec![0u64; n];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.5) {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut relabeled = vec![0u64; n];
            for i in 0..n {
                for j in 0..n {
                    if adj[i] >> j & 1 == 1 {
                        relabeled[perm[i]] |= 1 << perm[j];
                    }
                }
            }
            assert_eq!(canonical_code(n, &adj), canonical_code(n, &relabeled));
        }
    }
}
