//! Immutable simple undirected graphs and dataset ingestion.
//!
//! Graphs keep their edge list in canonical form: every edge stored as
//! `(u, v)` with `u < v`, the list sorted lexicographically, no self-loops
//! and no duplicates. That order defines the feature-row order everywhere
//! downstream, so it must be a pure function of the edge *set*.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Simple undirected graph with a canonical edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
    graph_id: String,
    label: Option<i64>,
}

impl Graph {
    /// Build a graph from raw edges. Self-loops and duplicates are dropped
    /// silently; use the parsers if you need the dropped-edge count.
    pub fn new<I>(node_count: usize, edges: I, graph_id: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let graph_id = graph_id.into();
        if node_count == 0 {
            return Err(Error::EmptyGraph(graph_id));
        }
        let mut canonical = BTreeSet::new();
        for (u, v) in edges {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::Format(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes in {graph_id}"
                )));
            }
            if u == v {
                continue;
            }
            canonical.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(u32, u32)> = canonical.into_iter().collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            node_count,
            edges,
            adjacency,
            graph_id,
            label: None,
        })
    }

    pub fn with_label(mut self, label: i64) -> Self {
        self.label = Some(label);
        self
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn graph_id(&self) -> &str {
        &self.graph_id
    }

    pub fn label(&self) -> Option<i64> {
        self.label
    }
}

/// Named, ordered collection of graphs. Order matches the source files.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<Graph>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// Result of parsing an edge-list document: the graph plus the number of
/// self-loops and duplicate edges that were dropped.
#[derive(Debug)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    pub warnings: usize,
}

/// Parse a UTF-8 edge-list document.
///
/// Lines starting with `#` are comments; an optional `n=<int>` header fixes
/// the node count, otherwise it is inferred as `max id + 1`. Each data line
/// holds two integer node ids.
pub fn parse_edge_list(text: &str, graph_id: impl Into<String>) -> Result<ParsedEdgeList> {
    let graph_id = graph_id.into();
    let mut declared_n: Option<usize> = None;
    let mut raw_edges: Vec<(u32, u32)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            if declared_n.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate n= header".into(),
                });
            }
            let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node count {rest:?}"),
            })?;
            declared_n = Some(n);
            continue;
        }
        let mut fields = line.split_whitespace();
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => {
                let u: u32 = a.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid node id {a:?}"),
                })?;
                let v: u32 = b.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid node id {b:?}"),
                })?;
                (u, v)
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two node ids, got {line:?}"),
                })
            }
        };
        raw_edges.push((u, v));
    }

    let inferred_n = raw_edges
        .iter()
        .map(|&(u, v)| u.max(v) as usize + 1)
        .max()
        .unwrap_or(0);
    let node_count = declared_n.unwrap_or(inferred_n);
    if node_count == 0 {
        return Err(Error::EmptyGraph(graph_id));
    }

    // Count dropped self-loops and duplicates before canonicalization.
    let mut seen = BTreeSet::new();
    let mut warnings = 0usize;
    for &(u, v) in &raw_edges {
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            warnings += 1;
        }
    }

    let graph = Graph::new(node_count, raw_edges, graph_id)?;
    Ok(ParsedEdgeList { graph, warnings })
}

/// Read one graph from an edge-list file.
pub fn read_edge_list(path: &Path) -> Result<ParsedEdgeList> {
    let text = fs::read_to_string(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".to_string());
    parse_edge_list(&text, id)
}

/// Parse a TUDataset-style directory: `DS_A.txt` (1-indexed edge pairs),
/// `DS_graph_indicator.txt` (node -> graph assignment) and optionally
/// `DS_graph_labels.txt`. Node ids are remapped to local 0-based ids
/// preserving file order; node/edge attribute files are ignored.
pub fn parse_tudataset(dir: &Path) -> Result<Dataset> {
    let name = find_dataset_prefix(dir)?;
    let a_path = dir.join(format!("{name}_A.txt"));
    let ind_path = dir.join(format!("{name}_graph_indicator.txt"));
    let labels_path = dir.join(format!("{name}_graph_labels.txt"));

    let indicator = read_int_lines(&ind_path)?;
    if indicator.is_empty() {
        return Err(Error::Format(format!("{}: no nodes listed", ind_path.display())));
    }

    // indicator[i] = 1-based graph id of 1-based node i+1
    let graph_count = *indicator.iter().max().unwrap() as usize;
    let mut node_graph = vec![0usize; indicator.len()];
    let mut local_id = vec![0u32; indicator.len()];
    let mut sizes = vec![0usize; graph_count];
    for (i, &g) in indicator.iter().enumerate() {
        if g < 1 || g as usize > graph_count {
            return Err(Error::Format(format!(
                "{}: graph indicator {g} out of range at line {}",
                ind_path.display(),
                i + 1
            )));
        }
        let g = g as usize - 1;
        node_graph[i] = g;
        local_id[i] = sizes[g] as u32;
        sizes[g] += 1;
    }

    let mut edges: Vec<Vec<(u32, u32)>> = vec![Vec::new(); graph_count];
    let a_text = fs::read_to_string(&a_path)?;
    for (idx, line) in a_text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => {
                let u: usize = a.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("invalid node id {a:?} in {}", a_path.display()),
                })?;
                let v: usize = b.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("invalid node id {b:?} in {}", a_path.display()),
                })?;
                (u, v)
            }
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected two node ids in {}", a_path.display()),
                })
            }
        };
        if u < 1 || v < 1 || u > indicator.len() || v > indicator.len() {
            return Err(Error::Format(format!(
                "{}: node id out of range at line {}",
                a_path.display(),
                idx + 1
            )));
        }
        let (gu, gv) = (node_graph[u - 1], node_graph[v - 1]);
        if gu != gv {
            return Err(Error::Format(format!(
                "{}: edge ({u}, {v}) crosses graphs {} and {}",
                a_path.display(),
                gu + 1,
                gv + 1
            )));
        }
        edges[gu].push((local_id[u - 1], local_id[v - 1]));
    }

    let labels: Option<Vec<i64>> = if labels_path.exists() {
        let ls = read_int_lines(&labels_path)?;
        if ls.len() != graph_count {
            return Err(Error::Format(format!(
                "{}: {} labels for {} graphs",
                labels_path.display(),
                ls.len(),
                graph_count
            )));
        }
        Some(ls)
    } else {
        None
    };

    let mut graphs = Vec::with_capacity(graph_count);
    for (g, edge_list) in edges.into_iter().enumerate() {
        let graph_id = format!("{name}#{g}");
        let mut graph = Graph::new(sizes[g], edge_list, graph_id)?;
        if let Some(ls) = &labels {
            graph = graph.with_label(ls[g]);
        }
        graphs.push(graph);
    }

    Ok(Dataset { name, graphs })
}

fn find_dataset_prefix(dir: &Path) -> Result<String> {
    if !dir.is_dir() {
        return Err(Error::Format(format!("{} is not a directory", dir.display())));
    }
    let mut candidates: Vec<String> = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let file_name = entry.file_name();
        let file_name = file_name.to_string_lossy();
        if let Some(prefix) = file_name.strip_suffix("_A.txt") {
            candidates.push(prefix.to_string());
        }
    }
    candidates.sort();
    match candidates.len() {
        0 => Err(Error::Format(format!(
            "{}: no *_A.txt file found",
            dir.display()
        ))),
        1 => Ok(candidates.pop().unwrap()),
        _ => Err(Error::Format(format!(
            "{}: multiple *_A.txt files: {}",
            dir.display(),
            candidates.join(", ")
        ))),
    }
}

fn read_int_lines(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value: i64 = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("invalid integer {line:?} in {}", path.display()),
        })?;
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_from_lines() {
        let parsed = parse_edge_list("0 1\n1 2\n2 0\n", "t").unwrap();
        assert_eq!(parsed.graph.node_count(), 3);
        assert_eq!(parsed.graph.edge_count(), 3);
        assert_eq!(parsed.graph.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(parsed.warnings, 0);
    }

    #[test]
    fn duplicates_and_self_loops_dropped_with_warnings() {
        let parsed = parse_edge_list("0 1\n0 1\n1 1\n", "d").unwrap();
        assert_eq!(parsed.graph.node_count(), 2);
        assert_eq!(parsed.graph.edge_count(), 1);
        assert_eq!(parsed.warnings, 2);
    }

    #[test]
    fn empty_document_is_an_error() {
        assert!(matches!(
            parse_edge_list("", "e"),
            Err(Error::EmptyGraph(_))
        ));
        assert!(matches!(
            parse_edge_list("# just a comment\n", "e"),
            Err(Error::EmptyGraph(_))
        ));
    }

    #[test]
    fn header_and_comments() {
        let parsed = parse_edge_list("# graph\nn=5\n0 1\n", "h").unwrap();
        assert_eq!(parsed.graph.node_count(), 5);
        assert_eq!(parsed.graph.edge_count(), 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("0 1\n0 x\n", "m").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn edge_out_of_declared_range() {
        assert!(parse_edge_list("n=2\n0 3\n", "r").is_err());
    }

    #[test]
    fn canonical_order_is_input_order_independent() {
        let a = parse_edge_list("2 0\n1 2\n0 1\n", "a").unwrap().graph;
        let b = parse_edge_list("0 1\n1 2\n0 2\n", "a").unwrap().graph;
        assert_eq!(a, b);
    }

    #[test]
    fn reversed_edges_are_duplicates() {
        let parsed = parse_edge_list("0 1\n1 0\n", "rev").unwrap();
        assert_eq!(parsed.graph.edge_count(), 1);
        assert_eq!(parsed.warnings, 1);
    }

    fn write_tudataset(dir: &Path, name: &str, with_labels: bool) {
        // Graph 1: triangle on global nodes 1..=3, graph 2: path on 4..=6.
        fs::write(
            dir.join(format!("{name}_A.txt")),
            "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n5, 6\n6, 5\n",
        )
        .unwrap();
        fs::write(
            dir.join(format!("{name}_graph_indicator.txt")),
            "1\n1\n1\n2\n2\n2\n",
        )
        .unwrap();
        if with_labels {
            fs::write(dir.join(format!("{name}_graph_labels.txt")), "1\n-1\n").unwrap();
        }
    }

    #[test]
    fn tudataset_two_graph_fixture() {
        let dir = tempfile::tempdir().unwrap();
        write_tudataset(dir.path(), "TINY", true);
        let ds = parse_tudataset(dir.path()).unwrap();
        assert_eq!(ds.name, "TINY");
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.graphs[0].node_count(), 3);
        assert_eq!(ds.graphs[0].edge_count(), 3);
        assert_eq!(ds.graphs[1].node_count(), 3);
        assert_eq!(ds.graphs[1].edge_count(), 2);
        assert_eq!(ds.graphs[0].graph_id(), "TINY#0");
        assert_eq!(ds.graphs[1].graph_id(), "TINY#1");
        assert_eq!(ds.graphs[0].label(), Some(1));
        assert_eq!(ds.graphs[1].label(), Some(-1));
    }

    #[test]
    fn tudataset_missing_a_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("X_graph_indicator.txt"), "1\n").unwrap();
        assert!(parse_tudataset(dir.path()).is_err());
    }

    #[test]
    fn tudataset_edge_crossing_graphs() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("X_A.txt"), "1, 2\n2, 3\n").unwrap();
        fs::write(dir.path().join("X_graph_indicator.txt"), "1\n1\n2\n").unwrap();
        let err = parse_tudataset(dir.path()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn tudataset_reserializes_canonical_edge_multiset() {
        let dir = tempfile::tempdir().unwrap();
        write_tudataset(dir.path(), "TINY", false);
        let ds = parse_tudataset(dir.path()).unwrap();
        // The fixture lists each undirected edge in both directions; the
        // canonical multiset is each edge once.
        let collected: Vec<(u32, u32)> = ds.graphs.iter().flat_map(|g| g.edges().to_vec()).collect();
        assert_eq!(
            collected,
            vec![(0, 1), (0, 2), (1, 2), (0, 1), (1, 2)]
        );
    }
}
