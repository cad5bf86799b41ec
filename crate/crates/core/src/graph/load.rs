use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{RoadNetwork, VertexId};
use crate::error::{Error, Result};

/// Reads a node file (`<id> <x> <y>`) and an edge file
/// (`<eid> <a> <b> <weight>`).
///
/// Blank lines and lines starting with `#` are skipped. Vertex ids may be
/// sparse; they are re-densified in ascending order and the original id is
/// kept for output (see [`RoadNetwork::external_id`]). Self-loops are
/// dropped.
pub fn load_network(node_file: impl AsRef<Path>, edge_file: impl AsRef<Path>) -> Result<RoadNetwork> {
    let node_file = node_file.as_ref();
    let edge_file = edge_file.as_ref();
    let node_text = fs::read_to_string(node_file).map_err(|e| Error::io(node_file, e))?;
    let edge_text = fs::read_to_string(edge_file).map_err(|e| Error::io(edge_file, e))?;

    let mut nodes: Vec<(i64, f64, f64, usize)> = Vec::new();
    for (line_no, fields) in records(&node_text) {
        let [id, x, y] = expect_fields::<3>(node_file, line_no, &fields)?;
        nodes.push((
            parse(node_file, line_no, id, "vertex id")?,
            parse(node_file, line_no, x, "x coordinate")?,
            parse(node_file, line_no, y, "y coordinate")?,
            line_no,
        ));
    }
    nodes.sort_by_key(|n| n.0);
    for pair in nodes.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::Parse {
                path: node_file.to_path_buf(),
                line: pair[1].3.max(pair[0].3),
                msg: format!("duplicate vertex id {}", pair[0].0),
            });
        }
    }
    let external_ids: Vec<i64> = nodes.iter().map(|n| n.0).collect();
    let coords: Vec<(f64, f64)> = nodes.iter().map(|n| (n.1, n.2)).collect();
    let lookup = |id: i64| external_ids.binary_search(&id).ok().map(|i| VertexId(i as u32));

    let mut edges = Vec::new();
    for (line_no, fields) in records(&edge_text) {
        let [eid, a, b, w] = expect_fields::<4>(edge_file, line_no, &fields)?;
        let _eid: i64 = parse(edge_file, line_no, eid, "edge id")?;
        let a_ext: i64 = parse(edge_file, line_no, a, "endpoint")?;
        let b_ext: i64 = parse(edge_file, line_no, b, "endpoint")?;
        let weight: f64 = parse(edge_file, line_no, w, "weight")?;
        let (Some(a), Some(b)) = (lookup(a_ext), lookup(b_ext)) else {
            let missing = if lookup(a_ext).is_none() { a_ext } else { b_ext };
            return Err(Error::Integrity(format!(
                "{}:{line_no}: edge references unknown vertex {missing}",
                edge_file.display()
            )));
        };
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Domain(format!(
                "{}:{line_no}: edge weight must be a finite non-negative number, got {w}",
                edge_file.display()
            )));
        }
        if a != b {
            edges.push((a, b, weight));
        }
    }

    Ok(RoadNetwork::assemble(coords, external_ids, edges))
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn expect_fields<'a, const N: usize>(path: &Path, line: usize, fields: &[&'a str]) -> Result<[&'a str; N]> {
    <[&str; N]>::try_from(fields).map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("expected {N} fields, found {}", fields.len()),
    })
}

fn parse<T: FromStr>(path: &Path, line: usize, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("invalid {what} {field:?}"),
    })
}
