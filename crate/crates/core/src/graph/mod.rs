//! Graphs, labeled graph datasets, triangle meshes and point clouds, plus
//! the synthetic generators used by the experiments.

mod generate;
mod mesh;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use generate::{dumbbell_mesh, make_sbm_dataset, sbm, DumbbellParams, SbmModel, SBM_CLASS_A, SBM_CLASS_B};
pub use mesh::{knn_graph, sample_mesh, sample_surface, PointCloud, TriangleMesh};

/// Simple undirected graph. Edges are stored once as `(u, v)` with `u < v`,
/// sorted lexicographically; the adjacency is kept in CSR form alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    // (neighbor, edge id)
    incidence: Vec<(usize, usize)>,
    vertex_labels: Option<Vec<i64>>,
}

impl Graph {
    /// Builds a graph from an edge list. Orientation and duplicates are
    /// normalized away; self-loops and out-of-range endpoints are errors.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{n_vertices}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            list.push(if a < b { (a, b) } else { (b, a) });
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_normalized(n_vertices, list))
    }

    pub fn empty(n_vertices: usize) -> Self {
        Self::from_normalized(n_vertices, Vec::new())
    }

    pub fn complete(n_vertices: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n_vertices {
            for j in i + 1..n_vertices {
                edges.push((i, j));
            }
        }
        Self::from_normalized(n_vertices, edges)
    }

    pub fn path(n_vertices: usize) -> Self {
        Self::from_normalized(n_vertices, (1..n_vertices).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n_vertices: usize) -> Self {
        Self::new(n_vertices, (0..n_vertices).map(|i| (i, (i + 1) % n_vertices))).expect("valid cycle")
    }

    fn from_normalized(n_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n_vertices];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n_vertices + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![(0, 0); 2 * edges.len()];
        for (id, &(a, b)) in edges.iter().enumerate() {
            incidence[fill[a]] = (b, id);
            fill[a] += 1;
            incidence[fill[b]] = (a, id);
            fill[b] += 1;
        }
        Self { n_vertices, edges, offsets, incidence, vertex_labels: None }
    }

    pub fn with_vertex_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.n_vertices {
            return Err(Error::InvalidGraph(format!(
                "{} vertex labels for {} vertices",
                labels.len(),
                self.n_vertices
            )));
        }
        self.vertex_labels = Some(labels);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_labels(&self) -> Option<&[i64]> {
        self.vertex_labels.as_deref()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident(v).iter().map(|&(u, _)| u)
    }

    /// Component id per vertex (numbered by smallest member) and the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n_vertices];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n_vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn n_components(&self) -> usize {
        self.components().1
    }

    /// First Betti number |E| - |V| + C.
    pub fn cycle_rank(&self) -> usize {
        self.n_edges() + self.n_components() - self.n_vertices
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_vertices {
            return Err(crate::error::param("permutation length does not match vertex count"));
        }
        let g = Graph::new(self.n_vertices, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))?;
        match &self.vertex_labels {
            Some(labels) => {
                let mut out = vec![0; labels.len()];
                for (v, &l) in labels.iter().enumerate() {
                    out[perm[v]] = l;
                }
                g.with_vertex_labels(out)
            }
            None => Ok(g),
        }
    }
}

/// A named collection of graphs with one class label each. Labels are
/// remapped to `0..n_classes`; `class_values` keeps the original values.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub labels: Vec<usize>,
    pub class_values: Vec<i64>,
}

impl LabeledDataset {
    /// Builds a dataset, remapping raw labels to contiguous class indices in
    /// increasing order of the raw value.
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, raw_labels: &[i64]) -> Result<Self> {
        if graphs.len() != raw_labels.len() {
            return Err(Error::Labels(format!(
                "{} graphs but {} labels",
                graphs.len(),
                raw_labels.len()
            )));
        }
        let mut classes: BTreeMap<i64, usize> = raw_labels.iter().map(|&l| (l, 0)).collect();
        for (i, v) in classes.values_mut().enumerate() {
            *v = i;
        }
        let labels = raw_labels.iter().map(|l| classes[l]).collect();
        Ok(Self { name: name.into(), graphs, labels, class_values: classes.into_keys().collect() })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.class_values.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn mean_vertices(&self) -> f64 {
        self.graphs.iter().map(|g| g.n_vertices() as f64).sum::<f64>() / self.len().max(1) as f64
    }

    pub fn mean_edges(&self) -> f64 {
        self.graphs.iter().map(|g| g.n_edges() as f64).sum::<f64>() / self.len().max(1) as f64
    }
}
