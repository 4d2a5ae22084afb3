//! Scalar vertex functions on graphs and their lower/upper-star extension
//! to edges.

mod ricci;
mod spectral;

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{param, Result};
use crate::graph::Graph;

pub use ricci::{edge_curvatures, ollivier_ricci, transport_cost, RicciParams, VertexReduction};
pub use spectral::{fiedler_squared, DENSE_EIGEN_LIMIT};

/// One finite real value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(param(format!("filtration value at vertex {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Value at `perm[v]` becomes the value at `v` of the original; used to
    /// follow a vertex relabeling.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = vec![0.0; self.0.len()];
        for (v, &x) in self.0.iter().enumerate() {
            out[perm[v]] = x;
        }
        Self(out)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.0.iter().map(|&x| f(x)).collect())
    }

    pub(crate) fn check(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.n_vertices() {
            return Err(param(format!(
                "filtration has {} values for a graph with {} vertices",
                self.0.len(),
                g.n_vertices()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Sublevel,
    Superlevel,
}

/// Edge values induced by a vertex function: max of the endpoints for a
/// sublevel sweep, min for a superlevel sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    pub values: Vec<f64>,
    pub direction: Direction,
}

pub fn extend_to_edges(g: &Graph, f: &VertexFunction, direction: Direction) -> Result<EdgeFunction> {
    f.check(g)?;
    let v = f.values();
    let values = g
        .edges()
        .iter()
        .map(|&(a, b)| match direction {
            Direction::Sublevel => v[a].max(v[b]),
            Direction::Superlevel => v[a].min(v[b]),
        })
        .collect();
    Ok(EdgeFunction { values, direction })
}

/// Named filtration choices used by the experiment pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiltrationKind {
    Degree,
    Closeness,
    FiedlerSquared,
    Ricci(RicciParams),
}

impl FiltrationKind {
    pub fn name(&self) -> String {
        match self {
            FiltrationKind::Degree => "degree".into(),
            FiltrationKind::Closeness => "closeness".into(),
            FiltrationKind::FiedlerSquared => "fiedler_s".into(),
            FiltrationKind::Ricci(p) => format!("ricci(alpha={},{})", p.idleness, p.reduction.name()),
        }
    }

    pub fn compute(&self, g: &Graph) -> Result<VertexFunction> {
        match self {
            FiltrationKind::Degree => Ok(degree_function(g)),
            FiltrationKind::Closeness => Ok(closeness(g)),
            FiltrationKind::FiedlerSquared => fiedler_squared(g),
            FiltrationKind::Ricci(p) => ollivier_ricci(g, p),
        }
    }
}

pub fn degree_function(g: &Graph) -> VertexFunction {
    VertexFunction((0..g.n_vertices()).map(|v| g.degree(v) as f64).collect())
}

/// Unweighted BFS distances from `source`; `usize::MAX` when unreachable.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n_vertices()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Closeness centrality, scaled by component size for disconnected graphs:
/// `((n_c - 1) / sum_u d(v, u)) * ((n_c - 1) / (n - 1))`.
pub fn closeness(g: &Graph) -> VertexFunction {
    let n = g.n_vertices();
    let values = (0..n)
        .map(|v| {
            let dist = bfs_distances(g, v);
            let (reach, total) = dist
                .iter()
                .filter(|&&d| d != usize::MAX)
                .fold((0usize, 0usize), |(c, s), &d| (c + 1, s + d));
            if reach <= 1 || n <= 1 {
                0.0
            } else {
                let others = (reach - 1) as f64;
                (others / total as f64) * (others / (n - 1) as f64)
            }
        })
        .collect();
    VertexFunction(values)
}

/// Single-source shortest paths, with unreachable vertices set to one more
/// than the largest reachable distance and listed in `unreachable`.
#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic {
    pub values: VertexFunction,
    pub unreachable: Vec<usize>,
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    // reversed for a min-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

pub fn geodesic_from(g: &Graph, lengths: &[f64], source: usize) -> Result<Geodesic> {
    if lengths.len() != g.n_edges() {
        return Err(param(format!("{} edge lengths for {} edges", lengths.len(), g.n_edges())));
    }
    if let Some(i) = lengths.iter().position(|&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(param(format!("edge {i} has invalid length {}", lengths[i])));
    }
    if source >= g.n_vertices() {
        return Err(param(format!("source {source} out of range")));
    }
    let mut dist = vec![f64::INFINITY; g.n_vertices()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapItem(0.0, source));
    while let Some(HeapItem(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(u, e) in g.incident(v) {
            let nd = d + lengths[e];
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(HeapItem(nd, u));
            }
        }
    }
    let max_reached = dist.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max);
    let mut unreachable = Vec::new();
    for (v, d) in dist.iter_mut().enumerate() {
        if !d.is_finite() {
            *d = max_reached + 1.0;
            unreachable.push(v);
        }
    }
    Ok(Geodesic { values: VertexFunction(dist), unreachable })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star3() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn degree_fixtures() {
        assert_eq!(degree_function(&Graph::complete(3)).values(), &[2.0, 2.0, 2.0]);
        assert_eq!(degree_function(&star3()).values(), &[3.0, 1.0, 1.0, 1.0]);
        assert_eq!(degree_function(&Graph::path(3)).values(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn closeness_fixtures() {
        let c = closeness(&Graph::path(3));
        assert_eq!(c.values()[1], 1.0);
        assert!((c.values()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.values()[2] - 2.0 / 3.0).abs() < 1e-15);
        assert!(closeness(&Graph::complete(6)).values().iter().all(|&x| x == 1.0));
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(closeness(&two).values().iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(closeness(&Graph::empty(3)).values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn geodesic_fixtures() {
        let p = Graph::path(3);
        let geo = geodesic_from(&p, &[1.0, 1.0], 0).unwrap();
        assert_eq!(geo.values.values(), &[0.0, 1.0, 2.0]);
        assert!(geo.unreachable.is_empty());
        let k4 = Graph::complete(4);
        assert_eq!(geodesic_from(&k4, &[1.0; 6], 2).unwrap().values.values(), &[1.0, 1.0, 0.0, 1.0]);
        assert!(geodesic_from(&p, &[1.0, -1.0], 0).is_err());
        let split = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let geo = geodesic_from(&split, &[2.0, 1.0], 0).unwrap();
        assert_eq!(geo.values.values(), &[0.0, 2.0, 3.0, 3.0]);
        assert_eq!(geo.unreachable, vec![2, 3]);
    }

    #[test]
    fn edge_extension() {
        let g = Graph::path(2);
        let f = VertexFunction::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(extend_to_edges(&g, &f, Direction::Sublevel).unwrap().values, vec![3.0]);
        assert_eq!(extend_to_edges(&g, &f, Direction::Superlevel).unwrap().values, vec![1.0]);
        let c = VertexFunction::new(vec![2.5; 4]).unwrap();
        let e = extend_to_edges(&Graph::complete(4), &c, Direction::Sublevel).unwrap();
        assert!(e.values.iter().all(|&x| x == 2.5));
    }

    #[test]
    fn rejects_non_finite_values() {
        assert!(VertexFunction::new(vec![0.0, f64::NAN]).is_err());
    }
}
