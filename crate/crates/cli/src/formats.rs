//! File formats shared by every subcommand: the edge-list graph format,
//! one-id-per-line vertex lists, threshold overrides, and the solution JSON.

use std::fs;
use std::path::Path;

use contagion_core::percolation::{Threshold, ThresholdMap};
use contagion_core::{Graph, GraphError, VertexSet};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Graph {
        path: String,
        #[source]
        source: GraphError,
    },
}

fn read_to_string(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: display(path), source })
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

// Data lines are everything that is not blank or a '#' comment; line numbers
// refer to the original file so parse errors stay addressable.
fn data_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { path: display(path), line, message: message.into() }
}

/// Reads a graph in the edge-list format: a header line "n m" followed by
/// exactly m lines "u v". Blank lines and '#' comments are ignored.
pub fn read_graph(path: &Path) -> Result<Graph, FormatError> {
    let text = read_to_string(path)?;
    let mut lines = data_lines(&text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_error(path, 1, "missing header line \"n m\""))?;
    let mut fields = header.split_whitespace();
    let n: usize = fields
        .next()
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| parse_error(path, header_no, "header must be \"n m\""))?;
    let m: usize = fields
        .next()
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| parse_error(path, header_no, "header must be \"n m\""))?;
    if fields.next().is_some() {
        return Err(parse_error(path, header_no, "header must be \"n m\""));
    }
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let mut fields = line.split_whitespace();
        let u: u32 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_error(path, line_no, "edge line must be \"u v\""))?;
        let v: u32 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_error(path, line_no, "edge line must be \"u v\""))?;
        if fields.next().is_some() {
            return Err(parse_error(path, line_no, "edge line must be \"u v\""));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_error(
            path,
            1,
            format!("header promises {m} edges, file has {}", edges.len()),
        ));
    }
    Graph::from_edge_list(n, &edges).map_err(|source| FormatError::Graph { path: display(path), source })
}

/// Renders a graph in the edge-list format with edges in lexicographic order,
/// so equal graphs always produce identical bytes.
pub fn graph_to_string(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Reads a vertex list, one id per line (seeds and protected sets).
pub fn read_vertex_list(path: &Path) -> Result<VertexSet, FormatError> {
    let text = read_to_string(path)?;
    let mut set = VertexSet::new();
    for (line_no, line) in data_lines(&text) {
        let v: u32 = line
            .parse()
            .map_err(|_| parse_error(path, line_no, "expected one vertex id per line"))?;
        set.insert(v);
    }
    Ok(set)
}

/// Reads threshold overrides, one "v t" pair per line where t is a
/// non-negative integer or "inf" for immunized, and applies them on top of
/// `base`.
pub fn apply_threshold_overrides(
    path: &Path,
    mut base: ThresholdMap,
) -> Result<ThresholdMap, FormatError> {
    let text = read_to_string(path)?;
    for (line_no, line) in data_lines(&text) {
        let mut fields = line.split_whitespace();
        let v: u32 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_error(path, line_no, "threshold line must be \"v t\""))?;
        let raw = fields
            .next()
            .ok_or_else(|| parse_error(path, line_no, "threshold line must be \"v t\""))?;
        if fields.next().is_some() {
            return Err(parse_error(path, line_no, "threshold line must be \"v t\""));
        }
        let t = if raw == "inf" {
            Threshold::Immunized
        } else {
            Threshold::Finite(
                raw.parse()
                    .map_err(|_| parse_error(path, line_no, "threshold must be an integer or inf"))?,
            )
        };
        if (v as usize) >= base.len() {
            return Err(parse_error(path, line_no, format!("vertex {v} out of range")));
        }
        base.set(v, t);
    }
    Ok(base)
}

/// Solution report for `solve`; serialized as JSON with this field order.
#[derive(Debug, Serialize)]
pub struct SolutionReport {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub deleted_edges: Vec<(u32, u32)>,
    pub additional_infected: usize,
    pub budget: usize,
    pub verified: bool,
}

impl SolutionReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn graph_round_trip() {
        let g = contagion_core::models::path(5);
        let text = graph_to_string(&g);
        assert_eq!(text, "5 4\n0 1\n1 2\n2 3\n3 4\n");
        let f = temp_file(&text);
        let back = read_graph(f.path()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.n(), 5);
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let f = temp_file("# a triangle\n3 3\n\n0 1\n# middle\n0 2\n1 2\n");
        let g = read_graph(f.path()).unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn header_edge_count_enforced() {
        let f = temp_file("3 2\n0 1\n");
        let err = read_graph(f.path()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { .. }), "{err}");
    }

    #[test]
    fn vertex_list_and_thresholds() {
        let f = temp_file("2\n0\n# comment\n2\n");
        let set = read_vertex_list(f.path()).unwrap();
        assert_eq!(set.as_slice(), &[0, 2]);

        let base = ThresholdMap::uniform(4, 2);
        let f = temp_file("1 3\n3 inf\n");
        let t = apply_threshold_overrides(f.path(), base).unwrap();
        assert_eq!(t.get(0), Threshold::Finite(2));
        assert_eq!(t.get(1), Threshold::Finite(3));
        assert_eq!(t.get(3), Threshold::Immunized);
    }

    #[test]
    fn solution_json_shape() {
        let report = SolutionReport {
            problem: "min".into(),
            n: 3,
            m: 2,
            deleted_edges: vec![(0, 2)],
            additional_infected: 0,
            budget: 1,
            verified: true,
        };
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["problem"], "min");
        assert_eq!(json["deleted_edges"][0][1], 2);
        assert_eq!(json["verified"], true);
    }
}
