//! Line-oriented text format for tree decompositions.
//!
//! ```text
//! c any number of comment lines
//! s td <bag count> <largest bag size> <largest vertex id>
//! b <bag id> <vertex> <vertex> ...
//! <bag id> <bag id>
//! ```
//!
//! One `b` line per bag (possibly with no vertices), one trailing line per tree
//! edge. Vertex and bag ids are written verbatim rather than being renumbered,
//! so a parse of a written decomposition reproduces it exactly.

use std::collections::BTreeMap;

use crate::graph::VertexSet;

use super::{TreeDecomposition, TwError};

fn parse_err(line: usize, what: impl Into<String>) -> TwError {
    TwError::Parse { line, what: what.into() }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, TwError> {
    tok.parse::<T>()
        .map_err(|_| parse_err(line, format!("{what} must be a number, got {tok:?}")))
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, TwError> {
    let mut header: Option<(usize, usize, u64)> = None;
    let mut bags: BTreeMap<usize, VertexSet> = BTreeMap::new();
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match toks[0] {
            "s" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(parse_err(line, "header must read 's td <bags> <max bag size> <max vertex id>'"));
                }
                header = Some((
                    number(toks[2], line, "the bag count")?,
                    number(toks[3], line, "the largest bag size")?,
                    number(toks[4], line, "the largest vertex id")?,
                ));
            }
            "b" => {
                if header.is_none() {
                    return Err(parse_err(line, "bag line before the 's td' header"));
                }
                if toks.len() < 2 {
                    return Err(parse_err(line, "bag line needs an id"));
                }
                let id: usize = number(toks[1], line, "the bag id")?;
                let mut bag = VertexSet::new();
                for tok in &toks[2..] {
                    bag.insert(number(tok, line, "a bag vertex")?);
                }
                let (_, max_size, max_vertex) = header.unwrap();
                if bag.len() > max_size {
                    return Err(parse_err(
                        line,
                        format!("bag {id} has {} vertices but the header allows {max_size}", bag.len()),
                    ));
                }
                if let Some(v) = bag.iter().find(|&v| u64::from(v) > max_vertex) {
                    return Err(parse_err(
                        line,
                        format!("vertex {v} exceeds the header's largest vertex id {max_vertex}"),
                    ));
                }
                if bags.insert(id, bag).is_some() {
                    return Err(parse_err(line, format!("bag {id} is defined twice")));
                }
            }
            _ => {
                if header.is_none() {
                    return Err(parse_err(line, "edge line before the 's td' header"));
                }
                if toks.len() != 2 {
                    return Err(parse_err(line, "a tree edge line is two bag ids"));
                }
                let a: usize = number(toks[0], line, "a tree edge endpoint")?;
                let b: usize = number(toks[1], line, "a tree edge endpoint")?;
                if !bags.contains_key(&a) || !bags.contains_key(&b) {
                    return Err(parse_err(line, format!("tree edge {a}-{b} references an undefined bag")));
                }
                tree_edges.push((a, b));
            }
        }
    }
    let (bag_count, _, _) = header.ok_or_else(|| parse_err(0, "missing the 's td' header"))?;
    if bags.len() != bag_count {
        return Err(parse_err(
            0,
            format!("the header declares {bag_count} bags but {} were defined", bags.len()),
        ));
    }
    Ok(TreeDecomposition { bags, tree_edges })
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let max_size = td.bags.values().map(|b| b.len()).max().unwrap_or(0);
    let max_vertex = td
        .bags
        .values()
        .flat_map(|b| b.iter())
        .max()
        .map(u64::from)
        .unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), max_size, max_vertex);
    for (id, bag) in &td.bags {
        out.push_str(&format!("b {id}"));
        for v in bag.iter() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for &(a, b) in &td.tree_edges {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}
