//! TUDataset text layout: `NAME_A.txt` (1-indexed `i, j` node pairs over
//! the whole collection), `NAME_graph_indicator.txt` (graph id per node),
//! `NAME_graph_labels.txt` (label per graph), optional
//! `NAME_node_labels.txt`.

use std::fs;
use std::path::{Path, PathBuf};

use pairperm_core::graph::{Graph, LabeledDataset};

use crate::error::{Error, Result};

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect())
}

fn parse_int(path: &Path, line: usize, s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::format(path, line, format!("expected an integer, found `{}`", s.trim())))
}

fn file(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

pub fn load_tudataset(dir: impl AsRef<Path>, name: &str) -> Result<LabeledDataset> {
    let dir = dir.as_ref();
    let a_path = file(dir, name, "A");
    let ind_path = file(dir, name, "graph_indicator");
    let lab_path = file(dir, name, "graph_labels");
    let node_lab_path = file(dir, name, "node_labels");

    let graph_labels: Vec<i64> =
        read_lines(&lab_path)?.iter().map(|(n, l)| parse_int(&lab_path, *n, l)).collect::<Result<_>>()?;
    let n_graphs = graph_labels.len();

    // node (0-based, global) -> (graph, local index)
    let mut owner: Vec<(usize, usize)> = Vec::new();
    let mut sizes = vec![0usize; n_graphs];
    for (line, l) in read_lines(&ind_path)? {
        let g = parse_int(&ind_path, line, &l)?;
        if g < 1 || g as usize > n_graphs {
            return Err(Error::format(&ind_path, line, format!("graph id {g} is not in 1..={n_graphs}")));
        }
        let g = g as usize - 1;
        owner.push((g, sizes[g]));
        sizes[g] += 1;
    }

    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_graphs];
    for (line, l) in read_lines(&a_path)? {
        let mut parts = l.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::format(&a_path, line, "expected `i, j`"));
        };
        let (a, b) = (parse_int(&a_path, line, a)?, parse_int(&a_path, line, b)?);
        let node = |x: i64| -> Result<(usize, usize)> {
            if x < 1 || x as usize > owner.len() {
                return Err(Error::format(&a_path, line, format!("node {x} is not in 1..={}", owner.len())));
            }
            Ok(owner[x as usize - 1])
        };
        let ((ga, la), (gb, lb)) = (node(a)?, node(b)?);
        if ga != gb {
            return Err(Error::format(&a_path, line, format!("edge ({a}, {b}) joins graphs {} and {}", ga + 1, gb + 1)));
        }
        if la != lb {
            edges[ga].push((la.min(lb), la.max(lb)));
        }
    }

    let node_labels: Option<Vec<i64>> = if node_lab_path.exists() {
        let v: Vec<i64> =
            read_lines(&node_lab_path)?.iter().map(|(n, l)| parse_int(&node_lab_path, *n, l)).collect::<Result<_>>()?;
        if v.len() != owner.len() {
            return Err(Error::format(&node_lab_path, v.len(), format!("{} node labels for {} nodes", v.len(), owner.len())));
        }
        Some(v)
    } else {
        None
    };

    let mut per_graph: Vec<Vec<i64>> = vec![Vec::new(); n_graphs];
    if let Some(labels) = &node_labels {
        for (&(g, _), &l) in owner.iter().zip(labels) {
            per_graph[g].push(l);
        }
    }
    let mut graphs = Vec::with_capacity(n_graphs);
    for (g, mut e) in edges.into_iter().enumerate() {
        e.sort_unstable();
        e.dedup();
        let mut graph = Graph::new(sizes[g], e)?;
        if node_labels.is_some() {
            graph = graph.with_vertex_labels(std::mem::take(&mut per_graph[g]))?;
        }
        graphs.push(graph);
    }
    Ok(LabeledDataset::new(name, graphs, &graph_labels)?)
}
