use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::sweep::vertex_order;
use super::{PersistenceDiagram, PersistencePoint, PointKind};
use crate::error::{Error, Result};
use crate::filtration::VertexFunction;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy)]
enum Cell {
    Apex,
    Vertex(usize),
    Edge(usize),
    ConeEdge(usize),
    ConeTriangle(usize),
}

fn symmetric_difference(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Extended diagram by plain Z/2 boundary-matrix reduction of the coned
/// filtration: the lower-star filtration of the graph, then for each
/// vertex in decreasing order the cone over its upper star. Cubic in the
/// number of cells; meant as a reference for small graphs.
pub fn reduce_extended(g: &Graph, f: &VertexFunction) -> Result<PersistenceDiagram> {
    f.check(g)?;
    let val = f.values();
    let n = g.n_vertices();
    let edges = g.edges();
    let (order, rank) = vertex_order(val);

    let mut by_later: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut by_earlier: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        let (lo, hi) = if rank[a] < rank[b] { (a, b) } else { (b, a) };
        by_later[hi].push(e);
        by_earlier[lo].push(e);
    }
    let other_rank = |e: usize, v: usize| {
        let (a, b) = edges[e];
        rank[if a == v { b } else { a }]
    };

    let mut cells = vec![Cell::Apex];
    let mut vertex_idx = vec![0; n];
    let mut edge_idx = vec![0; edges.len()];
    let mut cone_idx = vec![0; n];
    for &v in &order {
        vertex_idx[v] = cells.len();
        cells.push(Cell::Vertex(v));
        let mut es = by_later[v].clone();
        es.sort_unstable_by_key(|&e| other_rank(e, v));
        for e in es {
            edge_idx[e] = cells.len();
            cells.push(Cell::Edge(e));
        }
    }
    for &v in order.iter().rev() {
        cone_idx[v] = cells.len();
        cells.push(Cell::ConeEdge(v));
        let mut es = by_earlier[v].clone();
        es.sort_unstable_by_key(|&e| core::cmp::Reverse(other_rank(e, v)));
        for e in es {
            cells.push(Cell::ConeTriangle(e));
        }
    }

    let boundary = |c: Cell| -> Vec<usize> {
        let mut b = match c {
            Cell::Apex | Cell::Vertex(_) => Vec::new(),
            Cell::Edge(e) => vec![vertex_idx[edges[e].0], vertex_idx[edges[e].1]],
            Cell::ConeEdge(v) => vec![0, vertex_idx[v]],
            Cell::ConeTriangle(e) => vec![edge_idx[e], cone_idx[edges[e].0], cone_idx[edges[e].1]],
        };
        b.sort_unstable();
        b
    };

    let mut columns: Vec<Vec<usize>> = cells.iter().map(|&c| boundary(c)).collect();
    let mut owner = vec![usize::MAX; cells.len()];
    let mut paired = vec![false; cells.len()];
    let mut scratch = Vec::new();
    let mut pts = Vec::new();
    for j in 0..cells.len() {
        while let Some(&low) = columns[j].last() {
            let k = owner[low];
            if k == usize::MAX {
                break;
            }
            symmetric_difference(&columns[j], &columns[k], &mut scratch);
            core::mem::swap(&mut columns[j], &mut scratch);
        }
        let Some(&low) = columns[j].last() else { continue };
        owner[low] = j;
        paired[low] = true;
        paired[j] = true;
        let edge_max = |e: usize| val[edges[e].0].max(val[edges[e].1]);
        let edge_min = |e: usize| val[edges[e].0].min(val[edges[e].1]);
        let (kind, birth, death) = match (cells[low], cells[j]) {
            (Cell::Vertex(a), Cell::Edge(e)) => (PointKind::Ord0, val[a], edge_max(e)),
            (Cell::Vertex(a), Cell::ConeEdge(v)) => (PointKind::Ext0, val[a], val[v]),
            (Cell::Edge(e), Cell::ConeTriangle(t)) => (PointKind::Ext1, edge_max(e), edge_min(t)),
            (Cell::ConeEdge(v), Cell::ConeTriangle(t)) => (PointKind::Rel1, val[v], edge_min(t)),
            (a, b) => return Err(Error::Internal(format!("unexpected pair {a:?} / {b:?}"))),
        };
        let keep = matches!(kind, PointKind::Ext0 | PointKind::Ext1) || birth != death;
        if keep {
            pts.push(PersistencePoint::new(kind, birth, death));
        }
    }
    if let Some(i) = (1..cells.len()).find(|&i| !paired[i]) {
        return Err(Error::Internal(format!("cell {:?} left unpaired", cells[i])));
    }
    Ok(PersistenceDiagram::new(pts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vf(v: &[f64]) -> VertexFunction {
        VertexFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn fixtures() {
        let d = reduce_extended(&Graph::complete(3), &vf(&[0.0, 1.0, 2.0])).unwrap();
        let got: Vec<_> = d.points().iter().map(|p| (p.kind, p.birth, p.death)).collect();
        assert_eq!(got, vec![(PointKind::Ext0, 0.0, 2.0), (PointKind::Ext1, 2.0, 0.0)]);
        let d = reduce_extended(&Graph::empty(3), &vf(&[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(d.count(PointKind::Ext0), 3);
        let d = reduce_extended(&Graph::path(3), &vf(&[1.0, 3.0, 2.0])).unwrap();
        let got: Vec<_> = d.points().iter().map(|p| (p.kind, p.birth, p.death)).collect();
        assert_eq!(got, vec![(PointKind::Ord0, 2.0, 3.0), (PointKind::Ext0, 1.0, 3.0)]);
    }
}
