//! A satisfiability-preserving graph construction built for lower-bound
//! experiments: from a three-class CNF formula it produces a graph and a
//! solution-size target `k` such that a minimal feedback vertex set of
//! size at least `k` exists exactly when the formula is satisfiable.
//!
//! The variable classes are padded to size `n` (a power of four) and cut
//! into `log n` subsets each, and every subset is served by one choice
//! gadget. A gadget splits its variables into `2L` small blocks and holds,
//! for each block `i`, a row of `R` middle vertices `m_j^i` flanked by a
//! guard pair κ_i, λ_i and a pair of forced outer vertices ℓ_i, ℓ′_i; a
//! shared rank of `R` forced vertices `r_j` picks one column. Force
//! gadgets (see [`attach_force_gadget`]) pin every ℓ, ℓ′ and `r` into the
//! forest, so a maximum minimal solution must take all force-gadget
//! leaves, every κ, and all but one middle vertex per row — and the
//! surviving column index `j` encodes an assignment of the block's
//! variables (bit `t` of `j − 1` is the value of the block's `t`-th
//! variable). One extra vertex per clause is wired to the outer vertex
//! `ℓ` of each literal's block and to the `r_j` of every column whose
//! assignment satisfies the literal; it can join a minimal solution only
//! when some kept column certifies the clause, which makes the target
//! reachable exactly for satisfiable formulas.

use super::cnf::{CnfFormula, PartitionedCnf};
use super::{attach_force_gadget, ForceGadget, GenError};
use crate::graph::{MultiGraph, VertexId, VertexSet, Witness};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Derived sizes of one construction. With `n` the padded class size and
/// `m` the clause count: `log_n = log₂ n`, `l = ⌈n / log² n⌉` block
/// pairs, `r = √n` columns, force width `a = n² + m`, and the target
/// `k = (4al + ar + 2lr) · 3 log n + m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EthParams {
    pub n: u32,
    pub m: usize,
    pub log_n: u32,
    pub l: usize,
    pub r: usize,
    pub a: usize,
    pub k: usize,
}

/// One choice gadget: the rows, guards, columns and variable blocks for
/// class `part` (0, 1 or 2), subset `subset` (0-based, below `log n`).
/// `mid[i][j]` is the middle vertex of row `i`, column `j`; `blocks[i]`
/// lists row `i`'s variables in ascending order.
#[derive(Debug, Clone)]
pub struct ChoiceGadget {
    pub part: usize,
    pub subset: usize,
    pub ell: Vec<VertexId>,
    pub ellp: Vec<VertexId>,
    pub kappa: Vec<VertexId>,
    pub lambda: Vec<VertexId>,
    pub r: Vec<VertexId>,
    pub mid: Vec<Vec<VertexId>>,
    pub blocks: Vec<Vec<u32>>,
}

/// The generated graph with its bookkeeping: parameters, gadget rosters,
/// force gadgets, clause vertices, the padded formula actually encoded,
/// and the map from original to padded variable names.
#[derive(Debug, Clone)]
pub struct EthConstruction {
    pub graph: MultiGraph,
    pub params: EthParams,
    pub gadgets: Vec<ChoiceGadget>,
    pub force: Vec<ForceGadget>,
    pub clause_vertices: Vec<VertexId>,
    pub padded: PartitionedCnf,
    pub original_part_size: u32,
    pub var_map: BTreeMap<u32, u32>,
}

impl EthConstruction {
    /// Role of every vertex (`ell`, `ellp`, `kappa`, `lambda`, `mid`,
    /// `r`, `twin`, `leaf` or `clause`), read back from the labels.
    pub fn roles(&self) -> BTreeMap<VertexId, String> {
        self.graph
            .vertices()
            .filter_map(|v| self.graph.label(v).map(|s| (v, s.to_string())))
            .collect()
    }
}

/// Where each padded variable lives: variable → (gadget index, row
/// index, position within the row's block).
fn var_locations(gadgets: &[ChoiceGadget]) -> BTreeMap<u32, (usize, usize, usize)> {
    let mut out = BTreeMap::new();
    for (gi, gad) in gadgets.iter().enumerate() {
        for (bi, block) in gad.blocks.iter().enumerate() {
            for (pos, &v) in block.iter().enumerate() {
                out.insert(v, (gi, bi, pos));
            }
        }
    }
    out
}

fn alloc_labeled(g: &mut MultiGraph, label: &str, count: usize) -> Vec<VertexId> {
    (0..count)
        .map(|_| {
            let v = g.add_vertex();
            g.set_label(v, label);
            v
        })
        .collect()
}

/// Build the construction for a three-class formula. Classes are padded
/// with fresh always-true variables up to the next power of four (at
/// least 4); padding variables appear in no clause and no block is ever
/// larger than `log n / 2`.
pub fn gen_eth_instance(pc: &PartitionedCnf) -> Result<EthConstruction, GenError> {
    let orig = pc.part_size;
    let mut n: u32 = 4;
    while n < orig {
        n *= 4;
    }

    // rename class p's variables into the padded numbering, dummies last
    let mut var_map = BTreeMap::new();
    for v in 1..=3 * orig {
        let p = (v - 1) / orig;
        let t = (v - 1) % orig;
        var_map.insert(v, p * n + t + 1);
    }
    let clauses: Vec<Vec<i32>> = pc
        .cnf
        .clauses
        .iter()
        .map(|cl| {
            cl.iter()
                .map(|&lit| {
                    let mapped = var_map[&lit.unsigned_abs()] as i32;
                    if lit < 0 {
                        -mapped
                    } else {
                        mapped
                    }
                })
                .collect()
        })
        .collect();
    let padded = PartitionedCnf::new(CnfFormula::new(3 * n, clauses)?, n)?;

    let m = padded.cnf.clauses.len();
    let log_n = n.trailing_zeros();
    let l = (n as usize).div_ceil((log_n * log_n) as usize);
    let r = 1usize << (log_n / 2);
    let a = (n as usize) * (n as usize) + m;
    let k = (4 * a * l + a * r + 2 * l * r) * 3 * (log_n as usize) + m;
    let params = EthParams { n, m, log_n, l, r, a, k };

    let mut graph = MultiGraph::new();
    let mut gadgets: Vec<ChoiceGadget> = Vec::with_capacity(3 * log_n as usize);
    let mut force: Vec<ForceGadget> = Vec::new();

    for part in 0..3usize {
        // deal the class round-robin into log n subsets …
        let mut subsets: Vec<Vec<u32>> = vec![Vec::new(); log_n as usize];
        for idx in 0..n {
            subsets[(idx % log_n) as usize].push(part as u32 * n + idx + 1);
        }
        for (subset, vars) in subsets.into_iter().enumerate() {
            // … and each subset round-robin into 2L ascending blocks
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); 2 * l];
            for (j, v) in vars.into_iter().enumerate() {
                blocks[j % (2 * l)].push(v);
            }
            for b in &blocks {
                assert!(
                    !b.is_empty() && b.len() <= (log_n / 2) as usize,
                    "block of {} variables outside 1..={}",
                    b.len(),
                    log_n / 2
                );
            }

            let ell = alloc_labeled(&mut graph, "ell", 2 * l);
            let ellp = alloc_labeled(&mut graph, "ellp", 2 * l);
            let kappa = alloc_labeled(&mut graph, "kappa", 2 * l);
            let lambda = alloc_labeled(&mut graph, "lambda", 2 * l);
            let rank = alloc_labeled(&mut graph, "r", r);
            let mut mid = Vec::with_capacity(2 * l);
            for _ in 0..2 * l {
                mid.push(alloc_labeled(&mut graph, "mid", r));
            }
            for i in 0..2 * l {
                graph.add_edge(kappa[i], lambda[i])?;
                for j in 0..r {
                    graph.add_edge(kappa[i], mid[i][j])?;
                    graph.add_edge(lambda[i], mid[i][j])?;
                    graph.add_edge(mid[i][j], ell[i])?;
                    graph.add_edge(mid[i][j], ellp[i])?;
                    graph.add_edge(mid[i][j], rank[j])?;
                }
            }
            for &anchor in ell.iter().chain(ellp.iter()).chain(rank.iter()) {
                force.push(attach_force_gadget(&mut graph, anchor, a)?);
            }
            gadgets.push(ChoiceGadget {
                part,
                subset,
                ell,
                ellp,
                kappa,
                lambda,
                r: rank,
                mid,
                blocks,
            });
        }
    }

    // one vertex per clause, wired to each literal's outer row vertex and
    // to every column whose assignment makes the literal true
    let var_loc = var_locations(&gadgets);
    let mut clause_vertices = Vec::with_capacity(m);
    for clause in &padded.cnf.clauses {
        let c = graph.add_vertex();
        graph.set_label(c, "clause");
        for &lit in clause {
            let (gi, bi, pos) = var_loc[&lit.unsigned_abs()];
            let gad = &gadgets[gi];
            graph.add_edge(c, gad.ell[bi])?;
            let positive = lit > 0;
            for code in 0..r {
                if (code >> pos & 1 == 1) == positive {
                    graph.add_edge(c, gad.r[code])?;
                }
            }
        }
        clause_vertices.push(c);
    }

    Ok(EthConstruction {
        graph,
        params,
        gadgets,
        force,
        clause_vertices,
        padded,
        original_part_size: orig,
        var_map,
    })
}

/// Turn a satisfying assignment of the *original* (unpadded) formula into
/// a minimal feedback vertex set of size exactly `k`: all force-gadget
/// leaves, every κ, all middle vertices except the assignment column of
/// each row, and every clause vertex. Fails if the assignment has the
/// wrong length or does not satisfy the formula.
pub fn constructive_witness(
    ec: &EthConstruction,
    assignment: &[bool],
) -> Result<Witness, GenError> {
    let want_len = 3 * ec.original_part_size as usize;
    if assignment.len() != want_len {
        return Err(GenError::WrongAssignmentLength { got: assignment.len(), want: want_len });
    }
    // padded values: dummies are true, named variables follow the input
    let mut val = vec![true; (3 * ec.params.n + 1) as usize];
    for (&orig, &padded_var) in &ec.var_map {
        val[padded_var as usize] = assignment[(orig - 1) as usize];
    }
    for (ci, clause) in ec.padded.cnf.clauses.iter().enumerate() {
        if !clause.iter().any(|&lit| val[lit.unsigned_abs() as usize] == (lit > 0)) {
            return Err(GenError::NotSatisfying { clause: ci });
        }
    }

    let mut s = VertexSet::new();
    for fg in &ec.force {
        for &leaf in &fg.leaves {
            s.insert(leaf);
        }
    }
    for gad in &ec.gadgets {
        for &kv in &gad.kappa {
            s.insert(kv);
        }
        for (i, block) in gad.blocks.iter().enumerate() {
            let keep: usize = block
                .iter()
                .enumerate()
                .map(|(t, &v)| usize::from(val[v as usize]) << t)
                .sum();
            for (j, &mv) in gad.mid[i].iter().enumerate() {
                if j != keep {
                    s.insert(mv);
                }
            }
        }
    }
    for &c in &ec.clause_vertices {
        s.insert(c);
    }

    let w = Witness::build(&ec.graph, s)?;
    if w.size() != ec.params.k {
        return Err(GenError::WitnessSize { got: w.size(), want: ec.params.k });
    }
    Ok(w)
}

/// Names of the structural checks [`verify_eth`] ran, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EthReport {
    pub passed: Vec<&'static str>,
}

/// Re-derive every structural property of a construction from scratch and
/// fail on the first mismatch: parameter formulas, gadget rosters and
/// labels, the block partition, all five wiring patterns, simplicity, and
/// the vertex-cover certificate that keeps the instance's complement
/// independent. Returns the list of passed check names.
pub fn verify_eth(ec: &EthConstruction) -> Result<EthReport, GenError> {
    let fail = |check: &'static str, detail: String| GenError::EthViolation { check, detail };
    let nbrs = |v: VertexId| -> BTreeSet<VertexId> { ec.graph.neighbors(v).collect() };
    let mut passed = Vec::new();
    let p = &ec.params;
    let n = p.n;
    let m = p.m;

    // params-formulas: every derived quantity follows from (n, m)
    if n < 4 || !n.is_power_of_two() || !n.trailing_zeros().is_multiple_of(2) {
        return Err(fail("params-formulas", format!("class size {n} is not a power of four")));
    }
    if ec.padded.part_size != n {
        return Err(fail(
            "params-formulas",
            format!("padded classes have size {}, parameters say {n}", ec.padded.part_size),
        ));
    }
    if ec.padded.cnf.clauses.len() != m {
        return Err(fail(
            "params-formulas",
            format!("{} clauses, parameters say {m}", ec.padded.cnf.clauses.len()),
        ));
    }
    let log_n = n.trailing_zeros();
    let want_l = (n as usize).div_ceil((log_n * log_n) as usize);
    let want_r = 1usize << (log_n / 2);
    let want_a = (n as usize) * (n as usize) + m;
    let want_k = (4 * want_a * want_l + want_a * want_r + 2 * want_l * want_r)
        * 3
        * (log_n as usize)
        + m;
    if (p.log_n, p.l, p.r, p.a, p.k) != (log_n, want_l, want_r, want_a, want_k) {
        return Err(fail(
            "params-formulas",
            format!(
                "derived parameters {:?} should be {:?}",
                (p.log_n, p.l, p.r, p.a, p.k),
                (log_n, want_l, want_r, want_a, want_k)
            ),
        ));
    }
    if ec.var_map.len() != 3 * ec.original_part_size as usize {
        return Err(fail(
            "params-formulas",
            format!("{} renamed variables, expected {}", ec.var_map.len(), 3 * ec.original_part_size),
        ));
    }
    let named: BTreeSet<u32> = ec.var_map.values().copied().collect();
    for (ci, clause) in ec.padded.cnf.clauses.iter().enumerate() {
        for &lit in clause {
            if !named.contains(&lit.unsigned_abs()) {
                return Err(fail(
                    "params-formulas",
                    format!("clause {ci} uses padding variable {}", lit.unsigned_abs()),
                ));
            }
        }
    }
    passed.push("params-formulas");

    // gadget-roster: one gadget per (class, subset), rosters of the right
    // shape, every vertex listed once with a matching label, and the
    // vertex total implied by the parameters
    let want_gadgets = 3 * log_n as usize;
    let two_l = 2 * p.l;
    if ec.gadgets.len() != want_gadgets {
        return Err(fail(
            "gadget-roster",
            format!("{} gadgets, expected {want_gadgets}", ec.gadgets.len()),
        ));
    }
    for (gi, gad) in ec.gadgets.iter().enumerate() {
        if (gad.part, gad.subset) != (gi / log_n as usize, gi % log_n as usize) {
            return Err(fail(
                "gadget-roster",
                format!("gadget {gi} says (class, subset) = {:?}", (gad.part, gad.subset)),
            ));
        }
        if gad.ell.len() != two_l
            || gad.ellp.len() != two_l
            || gad.kappa.len() != two_l
            || gad.lambda.len() != two_l
            || gad.r.len() != p.r
            || gad.mid.len() != two_l
            || gad.mid.iter().any(|row| row.len() != p.r)
            || gad.blocks.len() != two_l
        {
            return Err(fail("gadget-roster", format!("gadget {gi} rosters have wrong sizes")));
        }
    }
    let mut roster: Vec<(VertexId, &'static str)> = Vec::new();
    for gad in &ec.gadgets {
        roster.extend(gad.ell.iter().map(|&v| (v, "ell")));
        roster.extend(gad.ellp.iter().map(|&v| (v, "ellp")));
        roster.extend(gad.kappa.iter().map(|&v| (v, "kappa")));
        roster.extend(gad.lambda.iter().map(|&v| (v, "lambda")));
        roster.extend(gad.r.iter().map(|&v| (v, "r")));
        for row in &gad.mid {
            roster.extend(row.iter().map(|&v| (v, "mid")));
        }
    }
    for fg in &ec.force {
        roster.push((fg.twin, "twin"));
        roster.extend(fg.leaves.iter().map(|&v| (v, "leaf")));
    }
    roster.extend(ec.clause_vertices.iter().map(|&v| (v, "clause")));
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for &(v, role) in &roster {
        if !seen.insert(v) {
            return Err(fail("gadget-roster", format!("vertex {v} listed twice")));
        }
        if ec.graph.label(v) != Some(role) {
            return Err(fail(
                "gadget-roster",
                format!("vertex {v} should be labeled {role}, found {:?}", ec.graph.label(v)),
            ));
        }
    }
    let per_gadget = 8 * p.l + p.r + 2 * p.l * p.r + (4 * p.l + p.r) * (p.a + 1);
    let want_total = want_gadgets * per_gadget + m;
    if roster.len() != want_total || ec.graph.vertex_count() != want_total {
        return Err(fail(
            "gadget-roster",
            format!(
                "{} listed vertices in a graph of {}, expected {want_total}",
                roster.len(),
                ec.graph.vertex_count()
            ),
        ));
    }
    passed.push("gadget-roster");

    // blocks-partition: ascending nonempty blocks no larger than
    // log n / 2, together partitioning each class exactly
    for part in 0..3usize {
        let mut union: BTreeSet<u32> = BTreeSet::new();
        for q in 0..log_n as usize {
            let gad = &ec.gadgets[part * log_n as usize + q];
            for b in &gad.blocks {
                if b.is_empty() || b.len() > (log_n / 2) as usize {
                    return Err(fail(
                        "blocks-partition",
                        format!("block of {} variables outside 1..={}", b.len(), log_n / 2),
                    ));
                }
                if !b.windows(2).all(|w| w[0] < w[1]) {
                    return Err(fail("blocks-partition", format!("block {b:?} is not ascending")));
                }
                for &v in b {
                    if !union.insert(v) {
                        return Err(fail(
                            "blocks-partition",
                            format!("variable {v} sits in two blocks"),
                        ));
                    }
                }
            }
        }
        let want: BTreeSet<u32> = (part as u32 * n + 1..=(part as u32 + 1) * n).collect();
        if union != want {
            return Err(fail(
                "blocks-partition",
                format!("class {part} blocks do not cover variables {}..={}", part as u32 * n + 1, (part as u32 + 1) * n),
            ));
        }
    }
    passed.push("blocks-partition");

    // kappa-lambda-wiring: each guard sees exactly its row and its mate
    for gad in &ec.gadgets {
        for i in 0..two_l {
            let row: BTreeSet<VertexId> = gad.mid[i].iter().copied().collect();
            let mut want = row.clone();
            want.insert(gad.lambda[i]);
            if nbrs(gad.kappa[i]) != want {
                return Err(fail(
                    "kappa-lambda-wiring",
                    format!("vertex {} has unexpected neighbors", gad.kappa[i]),
                ));
            }
            let mut want = row;
            want.insert(gad.kappa[i]);
            if nbrs(gad.lambda[i]) != want {
                return Err(fail(
                    "kappa-lambda-wiring",
                    format!("vertex {} has unexpected neighbors", gad.lambda[i]),
                ));
            }
        }
    }
    passed.push("kappa-lambda-wiring");

    // mid-wiring: m_j^i sees its row's four flanks and its column vertex
    for gad in &ec.gadgets {
        for i in 0..two_l {
            for j in 0..p.r {
                let want: BTreeSet<VertexId> =
                    [gad.ell[i], gad.ellp[i], gad.kappa[i], gad.lambda[i], gad.r[j]]
                        .into_iter()
                        .collect();
                if nbrs(gad.mid[i][j]) != want {
                    return Err(fail(
                        "mid-wiring",
                        format!("vertex {} has unexpected neighbors", gad.mid[i][j]),
                    ));
                }
            }
        }
    }
    passed.push("mid-wiring");

    // force-gadgets: one per outer vertex, a leaves each, twins and
    // leaves wired exactly as documented
    let want_force = (4 * p.l + p.r) * want_gadgets;
    if ec.force.len() != want_force {
        return Err(fail(
            "force-gadgets",
            format!("{} force gadgets, expected {want_force}", ec.force.len()),
        ));
    }
    let mut anchors: BTreeSet<VertexId> = BTreeSet::new();
    for fg in &ec.force {
        if fg.leaves.len() != p.a {
            return Err(fail(
                "force-gadgets",
                format!("anchor {} has {} leaves, expected {}", fg.anchor, fg.leaves.len(), p.a),
            ));
        }
        if !anchors.insert(fg.anchor) {
            return Err(fail("force-gadgets", format!("anchor {} is forced twice", fg.anchor)));
        }
        let mut want_twin: BTreeSet<VertexId> = fg.leaves.iter().copied().collect();
        want_twin.insert(fg.anchor);
        if nbrs(fg.twin) != want_twin {
            return Err(fail(
                "force-gadgets",
                format!("twin {} has unexpected neighbors", fg.twin),
            ));
        }
        let want_leaf: BTreeSet<VertexId> = [fg.anchor, fg.twin].into_iter().collect();
        for &leaf in &fg.leaves {
            if nbrs(leaf) != want_leaf {
                return Err(fail(
                    "force-gadgets",
                    format!("leaf {leaf} has unexpected neighbors"),
                ));
            }
        }
    }
    let want_anchors: BTreeSet<VertexId> = ec
        .gadgets
        .iter()
        .flat_map(|g| g.ell.iter().chain(g.ellp.iter()).chain(g.r.iter()).copied())
        .collect();
    if anchors != want_anchors {
        return Err(fail(
            "force-gadgets",
            "anchors are not exactly the ℓ, ℓ′ and r vertices".to_string(),
        ));
    }
    passed.push("force-gadgets");

    // recompute the clause wiring once; the next three checks compare the
    // graph against it from the ℓ side, the clause side and the r side
    let var_loc = var_locations(&ec.gadgets);
    let force_of: BTreeMap<VertexId, &ForceGadget> =
        ec.force.iter().map(|f| (f.anchor, f)).collect();
    if ec.clause_vertices.len() != m {
        return Err(fail(
            "clause-wiring",
            format!("{} clause vertices, expected {m}", ec.clause_vertices.len()),
        ));
    }
    let mut ell_extra: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut r_extra: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut clause_want: Vec<BTreeSet<VertexId>> = Vec::with_capacity(m);
    for (ci, clause) in ec.padded.cnf.clauses.iter().enumerate() {
        let c = ec.clause_vertices[ci];
        let mut want = BTreeSet::new();
        for &lit in clause {
            let x = lit.unsigned_abs();
            let Some(&(gi, bi, pos)) = var_loc.get(&x) else {
                return Err(fail("clause-wiring", format!("variable {x} is in no block")));
            };
            let gad = &ec.gadgets[gi];
            want.insert(gad.ell[bi]);
            ell_extra.entry(gad.ell[bi]).or_default().insert(c);
            let positive = lit > 0;
            for code in 0..p.r {
                if (code >> pos & 1 == 1) == positive {
                    want.insert(gad.r[code]);
                    r_extra.entry(gad.r[code]).or_default().insert(c);
                }
            }
        }
        clause_want.push(want);
    }

    // ell-wiring: ℓ sees its row, its force gadget, and its clauses;
    // ℓ′ sees only its row and force gadget
    for gad in &ec.gadgets {
        for i in 0..two_l {
            let fg = force_of[&gad.ell[i]];
            let mut want: BTreeSet<VertexId> = gad.mid[i].iter().copied().collect();
            want.insert(fg.twin);
            want.extend(fg.leaves.iter().copied());
            if let Some(extra) = ell_extra.get(&gad.ell[i]) {
                want.extend(extra.iter().copied());
            }
            if nbrs(gad.ell[i]) != want {
                return Err(fail(
                    "ell-wiring",
                    format!("vertex {} has unexpected neighbors", gad.ell[i]),
                ));
            }
            let fg = force_of[&gad.ellp[i]];
            let mut want: BTreeSet<VertexId> = gad.mid[i].iter().copied().collect();
            want.insert(fg.twin);
            want.extend(fg.leaves.iter().copied());
            if nbrs(gad.ellp[i]) != want {
                return Err(fail(
                    "ell-wiring",
                    format!("vertex {} has unexpected neighbors", gad.ellp[i]),
                ));
            }
        }
    }
    passed.push("ell-wiring");

    // clause-wiring: each clause vertex sees exactly the recomputed set
    for (ci, want) in clause_want.iter().enumerate() {
        if &nbrs(ec.clause_vertices[ci]) != want {
            return Err(fail(
                "clause-wiring",
                format!("clause vertex {} has unexpected neighbors", ec.clause_vertices[ci]),
            ));
        }
    }
    passed.push("clause-wiring");

    // r-wiring: r_j sees its column, its force gadget, and its clauses
    for gad in &ec.gadgets {
        for j in 0..p.r {
            let rv = gad.r[j];
            let fg = force_of[&rv];
            let mut want: BTreeSet<VertexId> = (0..two_l).map(|i| gad.mid[i][j]).collect();
            want.insert(fg.twin);
            want.extend(fg.leaves.iter().copied());
            if let Some(extra) = r_extra.get(&rv) {
                want.extend(extra.iter().copied());
            }
            if nbrs(rv) != want {
                return Err(fail("r-wiring", format!("vertex {rv} has unexpected neighbors")));
            }
        }
    }
    passed.push("r-wiring");

    // simple-graph: no loops, no parallel edges
    if let Some(v) = ec.graph.vertices().find(|&v| ec.graph.loop_count(v) > 0) {
        return Err(fail("simple-graph", format!("vertex {v} has a self-loop")));
    }
    if let Some(&(u, v, c)) =
        ec.graph.edge_multiplicities().iter().find(|&&(_, _, c)| c > 1)
    {
        return Err(fail("simple-graph", format!("edge ({u}, {v}) has multiplicity {c}")));
    }
    passed.push("simple-graph");

    // vc-certificate: the ℓ, ℓ′, κ, λ, r vertices plus all twins form a
    // vertex cover of the stated size, so everything else — middles,
    // leaves, clause vertices — is an independent set
    let mut cert: BTreeSet<VertexId> = BTreeSet::new();
    for gad in &ec.gadgets {
        cert.extend(gad.ell.iter().copied());
        cert.extend(gad.ellp.iter().copied());
        cert.extend(gad.kappa.iter().copied());
        cert.extend(gad.lambda.iter().copied());
        cert.extend(gad.r.iter().copied());
    }
    for fg in &ec.force {
        cert.insert(fg.twin);
    }
    let want_cert = (12 * p.l + 2 * p.r) * want_gadgets;
    if cert.len() != want_cert {
        return Err(fail(
            "vc-certificate",
            format!("cover has {} vertices, expected {want_cert}", cert.len()),
        ));
    }
    for (u, v, _) in ec.graph.edge_multiplicities() {
        if !cert.contains(&u) && !cert.contains(&v) {
            return Err(fail("vc-certificate", format!("edge ({u}, {v}) is uncovered")));
        }
    }
    passed.push("vc-certificate");

    Ok(EthReport { passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cnf::{sat_to_3p3sat, satisfying_assignment};

    fn tiny_parts() -> (PartitionedCnf, EthConstruction) {
        // one variable, one clause; splitting yields 3 copies and 4 clauses
        let phi = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let pc = sat_to_3p3sat(&phi).unwrap();
        let ec = gen_eth_instance(&pc).unwrap();
        (pc, ec)
    }

    #[test]
    fn smallest_instance_has_the_documented_shape() {
        let (_, ec) = tiny_parts();
        let p = &ec.params;
        assert_eq!((p.n, p.m, p.log_n, p.l, p.r), (4, 4, 2, 1, 2));
        assert_eq!(p.a, 16 + 4);
        assert_eq!(p.k, 600 + 37 * 4);
        assert_eq!(ec.gadgets.len(), 6);
        assert_eq!(ec.force.len(), 36);
        assert_eq!(ec.clause_vertices.len(), 4);
        // 14 core vertices and 6 force gadgets of a + 1 vertices each
        assert_eq!(ec.graph.vertex_count(), 6 * (14 + 6 * (p.a + 1)) + 4);

        let roles = ec.roles();
        assert_eq!(roles.len(), ec.graph.vertex_count());
        let count = |r: &str| roles.values().filter(|s| s.as_str() == r).count();
        assert_eq!(count("ell"), 12);
        assert_eq!(count("ellp"), 12);
        assert_eq!(count("kappa"), 12);
        assert_eq!(count("lambda"), 12);
        assert_eq!(count("r"), 12);
        assert_eq!(count("mid"), 24);
        assert_eq!(count("twin"), 36);
        assert_eq!(count("leaf"), 36 * p.a);
        assert_eq!(count("clause"), 4);
    }

    #[test]
    fn verifier_approves_and_names_every_check() {
        let (_, ec) = tiny_parts();
        let report = verify_eth(&ec).unwrap();
        assert_eq!(
            report.passed,
            vec![
                "params-formulas",
                "gadget-roster",
                "blocks-partition",
                "kappa-lambda-wiring",
                "mid-wiring",
                "force-gadgets",
                "ell-wiring",
                "clause-wiring",
                "r-wiring",
                "simple-graph",
                "vc-certificate",
            ]
        );
    }

    #[test]
    fn padding_rounds_the_class_size_up_to_a_power_of_four() {
        let phi = CnfFormula::new(3, vec![vec![1, 2, 3], vec![-1, -2, -3]]).unwrap();
        let pc = sat_to_3p3sat(&phi).unwrap();
        assert_eq!(pc.part_size, 3);
        let ec = gen_eth_instance(&pc).unwrap();
        assert_eq!(ec.params.n, 4);
        assert_eq!(ec.original_part_size, 3);
        // classes restart at multiples of the padded size
        assert_eq!(ec.var_map[&4], 5);
        assert_eq!(ec.var_map[&7], 9);
        // padding variables appear in no clause
        let used: BTreeSet<u32> = ec
            .padded
            .cnf
            .clauses
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs())
            .collect();
        for dummy in [4u32, 8, 12] {
            assert!(!used.contains(&dummy), "padding variable {dummy} used");
        }
        verify_eth(&ec).unwrap();
    }

    #[test]
    fn assignments_become_witnesses_of_exactly_the_target_size() {
        let phi = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2]]).unwrap();
        let pc = sat_to_3p3sat(&phi).unwrap();
        let ec = gen_eth_instance(&pc).unwrap();
        let assignment = satisfying_assignment(&pc.cnf).unwrap();
        assert_eq!(assignment.len(), 6);
        let w = constructive_witness(&ec, &assignment).unwrap();
        assert_eq!(w.size(), ec.params.k);
        w.verify(&ec.graph).unwrap();

        assert!(matches!(
            constructive_witness(&ec, &[true]),
            Err(GenError::WrongAssignmentLength { got: 1, want: 6 })
        ));
        // both copies of x2 false falsify the first original clause
        let bad = vec![false; 6];
        assert!(matches!(
            constructive_witness(&ec, &bad),
            Err(GenError::NotSatisfying { .. })
        ));
    }

    #[test]
    fn dropping_a_clause_vertex_exposes_its_private_cycle() {
        let (pc, ec) = tiny_parts();
        let assignment = satisfying_assignment(&pc.cnf).unwrap();
        let w = constructive_witness(&ec, &assignment).unwrap();
        let c = ec.clause_vertices[0];
        assert!(w.solution.contains(c));
        // without the clause vertex the rest no longer breaks every cycle
        assert!(!ec.graph.is_fvs(&w.solution.without(c)));
        // the cycle is the square ℓ – kept middle – r – clause for some
        // literal the assignment satisfies
        let locs = var_locations(&ec.gadgets);
        let mut found = false;
        for &lit in &ec.padded.cnf.clauses[0] {
            let (gi, bi, _) = locs[&lit.unsigned_abs()];
            let gad = &ec.gadgets[gi];
            let keep = (0..ec.params.r)
                .find(|&j| !w.solution.contains(gad.mid[bi][j]))
                .expect("one middle vertex per row stays out");
            if ec.graph.multiplicity(c, gad.r[keep]) > 0 {
                assert!(ec.graph.multiplicity(c, gad.ell[bi]) > 0);
                assert!(ec.graph.multiplicity(gad.ell[bi], gad.mid[bi][keep]) > 0);
                assert!(ec.graph.multiplicity(gad.mid[bi][keep], gad.r[keep]) > 0);
                assert!(!w.solution.contains(gad.ell[bi]));
                assert!(!w.solution.contains(gad.r[keep]));
                found = true;
                break;
            }
        }
        assert!(found, "no kept column certifies the first clause");
    }

    #[test]
    fn structural_tampering_trips_the_matching_check() {
        let (_, ec) = tiny_parts();

        let mut bad = ec.clone();
        bad.params.k += 1;
        assert!(matches!(
            verify_eth(&bad),
            Err(GenError::EthViolation { check: "params-formulas", .. })
        ));

        let mut bad = ec.clone();
        let (ka, la) = (bad.gadgets[0].kappa[0], bad.gadgets[0].lambda[0]);
        bad.graph.remove_edge_in_place(ka, la).unwrap();
        assert!(matches!(
            verify_eth(&bad),
            Err(GenError::EthViolation { check: "kappa-lambda-wiring", .. })
        ));

        let mut bad = ec.clone();
        let (a, b) = (bad.force[0].leaves[0], bad.force[0].leaves[1]);
        bad.graph.add_edge(a, b).unwrap();
        assert!(matches!(
            verify_eth(&bad),
            Err(GenError::EthViolation { check: "force-gadgets", .. })
        ));

        let mut bad = ec;
        let c = bad.clause_vertices[0];
        let ell = bad
            .graph
            .neighbors(c)
            .find(|&v| bad.graph.label(v) == Some("ell"))
            .unwrap();
        bad.graph.remove_edge_in_place(c, ell).unwrap();
        assert!(matches!(
            verify_eth(&bad),
            Err(GenError::EthViolation { check: "ell-wiring", .. })
        ));
    }
}
