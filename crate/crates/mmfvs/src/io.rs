//! Text graph format and the JSON shapes used on the tool boundary.
//!
//! Graph files: `c` comment lines, one `p mmfvs <n> <m>` header, then exactly m
//! edge lines `<u> <v>` with 1-indexed endpoints. A repeated pair adds multiplicity,
//! `<u> <u>` is a self-loop. Vertices are implicitly 1..=n. The writer renumbers
//! vertices ascending into 1..=n and sorts edge lines, so writing what was read
//! reproduces the file byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{MultiGraph, VertexId, Witness};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("missing `p mmfvs <n> <m>` header")]
    MissingHeader,
    #[error("line {0}: bad header: {1}")]
    BadHeader(usize, String),
    #[error("line {0}: expected `<u> <v>`, got `{1}`")]
    BadEdgeLine(usize, String),
    #[error("line {0}: endpoint {1} out of range 1..={2}")]
    EndpointOutOfRange(usize, VertexId, u32),
    #[error("header declared {expected} edges, file has {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("second header on line {0}")]
    DuplicateHeader(usize),
}

pub fn read_graph(text: &str) -> Result<MultiGraph, FormatError> {
    let mut header: Option<(u32, usize)> = None;
    let mut g = MultiGraph::new();
    let mut edges_seen = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(FormatError::DuplicateHeader(lineno));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "mmfvs" {
                return Err(FormatError::BadHeader(lineno, line.to_string()));
            }
            let n: u32 = toks[2]
                .parse()
                .map_err(|_| FormatError::BadHeader(lineno, line.to_string()))?;
            let m: usize = toks[3]
                .parse()
                .map_err(|_| FormatError::BadHeader(lineno, line.to_string()))?;
            for _ in 0..n {
                g.add_vertex();
            }
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or(FormatError::MissingHeader)?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(FormatError::BadEdgeLine(lineno, line.to_string()));
        }
        let u: VertexId = toks[0]
            .parse()
            .map_err(|_| FormatError::BadEdgeLine(lineno, line.to_string()))?;
        let v: VertexId = toks[1]
            .parse()
            .map_err(|_| FormatError::BadEdgeLine(lineno, line.to_string()))?;
        for &x in &[u, v] {
            if x == 0 || x > n {
                return Err(FormatError::EndpointOutOfRange(lineno, x, n));
            }
        }
        g.add_edge(u, v).unwrap();
        edges_seen += 1;
    }
    let (_, m) = header.ok_or(FormatError::MissingHeader)?;
    if edges_seen != m {
        return Err(FormatError::WrongEdgeCount { expected: m, got: edges_seen });
    }
    Ok(g)
}

/// Canonical form: vertices renumbered 1..=n in ascending id order, edge lines
/// sorted, one line per edge unit.
pub fn write_graph(g: &MultiGraph) -> String {
    let ids: Vec<VertexId> = g.vertices().collect();
    let rename: BTreeMap<VertexId, VertexId> = ids
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, (i + 1) as VertexId))
        .collect();
    let mut units: Vec<(VertexId, VertexId)> = Vec::new();
    for (u, v, m) in g.edge_multiplicities() {
        let (a, b) = (rename[&u], rename[&v]);
        let (a, b) = (a.min(b), a.max(b));
        for _ in 0..m {
            units.push((a, b));
        }
    }
    units.sort_unstable();
    let mut out = format!("p mmfvs {} {}\n", ids.len(), units.len());
    for (a, b) in units {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

/// Graph payload inside instance JSON: either a path to a graph file or an
/// inline `{n, edges}` object.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRefJson {
    Path(String),
    Inline { n: u32, edges: Vec<(VertexId, VertexId)> },
}

impl GraphRefJson {
    pub fn resolve(&self, base_dir: &std::path::Path) -> Result<MultiGraph, String> {
        match self {
            GraphRefJson::Path(p) => {
                let path = base_dir.join(p);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                read_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
            }
            GraphRefJson::Inline { n, edges } => {
                let mut g = MultiGraph::new();
                for _ in 0..*n {
                    g.add_vertex();
                }
                for &(u, v) in edges {
                    g.add_edge(u, v).map_err(|e| e.to_string())?;
                }
                Ok(g)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnotatedInstanceJson {
    pub graph: GraphRefJson,
    #[serde(rename = "S")]
    pub s: Vec<VertexId>,
    #[serde(rename = "F")]
    pub f: Vec<VertexId>,
    pub k: usize,
}

/// Witness payload as written by the solvers and read back by `verify`.
/// Extra fields in the surrounding JSON are ignored on read, so a full result
/// document also parses as a WitnessJson.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub witness: Vec<VertexId>,
    #[serde(default)]
    pub certificates: BTreeMap<VertexId, Vec<VertexId>>,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        WitnessJson {
            witness: w.solution.to_vec(),
            certificates: w.certificates.clone(),
        }
    }
}

impl WitnessJson {
    pub fn to_witness(&self) -> Witness {
        Witness {
            solution: self.witness.iter().copied().collect(),
            certificates: self.certificates.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    #[test]
    fn round_trip_file_to_graph_to_file() {
        let text = "p mmfvs 4 5\n1 2\n1 2\n2 3\n3 3\n3 4\n";
        let g = read_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.multiplicity(1, 2), 2);
        assert_eq!(g.loop_count(3), 1);
        assert_eq!(write_graph(&g), text);
    }

    #[test]
    fn round_trip_graph_to_file_to_graph() {
        let g = MultiGraph::from_edges(5, &[(4, 2), (1, 5), (2, 1), (3, 3)]);
        let back = read_graph(&write_graph(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn writer_renumbers_gapped_ids() {
        let mut g = MultiGraph::from_edges(3, &[(1, 2), (2, 3)]);
        g.remove_vertex_in_place(2).unwrap();
        // remaining ids 1 and 3 become 1 and 2
        assert_eq!(write_graph(&g), "p mmfvs 2 0\n");
        let w = g.contract_edge_in_place(1, 3).ok(); // no edge: errors
        assert!(w.is_none());
    }

    #[test]
    fn parser_is_lenient_on_whitespace_and_comments() {
        let text = "c a comment\n\n  p   mmfvs 3 2 \nc mid\n 1   2\n2 3\nc end\n";
        let g = read_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parser_rejects_bad_inputs() {
        assert_eq!(read_graph("1 2\n").unwrap_err(), FormatError::MissingHeader);
        assert_eq!(
            read_graph("p mmfvs 2 1\n1 3\n").unwrap_err(),
            FormatError::EndpointOutOfRange(2, 3, 2)
        );
        assert_eq!(
            read_graph("p mmfvs 2 2\n1 2\n").unwrap_err(),
            FormatError::WrongEdgeCount { expected: 2, got: 1 }
        );
        assert!(matches!(read_graph("p fvs 2 1\n1 2\n").unwrap_err(), FormatError::BadHeader(..)));
        assert!(matches!(
            read_graph("p mmfvs 2 1\np mmfvs 2 1\n1 2\n").unwrap_err(),
            FormatError::DuplicateHeader(2)
        ));
        assert!(matches!(read_graph("p mmfvs 2 1\n1 2 3\n").unwrap_err(), FormatError::BadEdgeLine(..)));
    }

    #[test]
    fn witness_json_round_trip() {
        let g = MultiGraph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]);
        let w = Witness::build(&g, VertexSet::from([2])).unwrap();
        let j = WitnessJson::from(&w);
        let s = serde_json::to_string(&j).unwrap();
        let back: WitnessJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_witness(), w);
        // extra fields are tolerated
        let full = "{\"answer\":\"yes\",\"witness\":[2],\"certificates\":{\"2\":[2,1,3]},\"stats\":{}}".to_string();
        let parsed: WitnessJson = serde_json::from_str(&full).unwrap();
        assert_eq!(parsed.to_witness(), w);
    }

    #[test]
    fn inline_graph_ref_resolves() {
        let j = r#"{"graph": {"n": 3, "edges": [[1,2],[2,3],[1,3]]}, "S": [1], "F": [], "k": 1}"#;
        let inst: AnnotatedInstanceJson = serde_json::from_str(j).unwrap();
        let g = inst.graph.resolve(std::path::Path::new(".")).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(inst.s, vec![1]);
        assert_eq!(inst.k, 1);
    }
}
