use alloc::vec;
use alloc::vec::Vec;

use super::{PersistenceDiagram, PersistencePoint, PointKind};
use crate::error::Result;
use crate::filtration::VertexFunction;
use crate::graph::Graph;

/// Strict total order on vertices: by value, ties by index. Returns
/// `(order, rank)` with `order[rank[v]] == v`.
pub(crate) fn vertex_order(f: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[a].partial_cmp(&f[b]).expect("finite values").then(a.cmp(&b)));
    let mut rank = vec![0; f.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    (order, rank)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Result of one union-find sweep in a given vertex order, in terms of
/// vertices: finite `(birth, death)` pairs by the elder rule, and one
/// `(oldest, newest)` pair per component.
struct Sweep {
    pairs: Vec<(usize, usize)>,
    essential: Vec<(usize, usize)>,
}

fn sweep(g: &Graph, order: &[usize], pos: &[usize]) -> Sweep {
    let n = g.n_vertices();
    let mut uf = UnionFind::new(n);
    // per root, the oldest and newest vertex of the component
    let oldest: Vec<usize> = (0..n).collect();
    let mut newest: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();
    let mut earlier = Vec::new();
    for &v in order {
        earlier.clear();
        earlier.extend(g.neighbors(v).filter(|&u| pos[u] < pos[v]));
        earlier.sort_unstable_by_key(|&u| pos[u]);
        for &u in &earlier {
            let ru = uf.find(u);
            let rv = uf.find(v);
            if ru == rv {
                continue;
            }
            let (elder, younger) = if pos[oldest[ru]] < pos[oldest[rv]] { (ru, rv) } else { (rv, ru) };
            pairs.push((oldest[younger], v));
            uf.parent[younger] = elder;
            newest[elder] = v;
        }
    }
    let mut essential = Vec::new();
    for v in 0..n {
        if uf.find(v) == v {
            essential.push((oldest[v], newest[v]));
        }
    }
    Sweep { pairs, essential }
}

fn ascending(g: &Graph, f: &[f64]) -> (Vec<usize>, Vec<usize>, Sweep) {
    let (order, rank) = vertex_order(f);
    let s = sweep(g, &order, &rank);
    (order, rank, s)
}

fn descending(g: &Graph, order: &[usize], rank: &[usize]) -> Sweep {
    let n = order.len();
    let rev: Vec<usize> = order.iter().rev().copied().collect();
    let pos: Vec<usize> = rank.iter().map(|&r| n - 1 - r).collect();
    sweep(g, &rev, &pos)
}

fn finite_points(kind: PointKind, pairs: &[(usize, usize)], f: &[f64], out: &mut Vec<PersistencePoint>) {
    for &(b, d) in pairs {
        if f[b] != f[d] {
            out.push(PersistencePoint::new(kind, f[b], f[d]));
        }
    }
}

fn essential_points(kind: PointKind, ess: &[(usize, usize)], f: &[f64], out: &mut Vec<PersistencePoint>) {
    out.extend(ess.iter().map(|&(b, d)| PersistencePoint::new(kind, f[b], f[d])));
}

/// Sublevel 0-dimensional diagram. Each component contributes an essential
/// point closed at its maximum value.
pub fn sublevel_pd0(g: &Graph, f: &VertexFunction) -> Result<PersistenceDiagram> {
    f.check(g)?;
    let v = f.values();
    let (_, _, s) = ascending(g, v);
    let mut pts = Vec::new();
    finite_points(PointKind::Sub0, &s.pairs, v, &mut pts);
    essential_points(PointKind::Sub0, &s.essential, v, &mut pts);
    Ok(PersistenceDiagram::new(pts))
}

/// Superlevel 0-dimensional diagram; points have `birth >= death` and each
/// component's essential point is closed at its minimum value.
pub fn superlevel_pd0(g: &Graph, f: &VertexFunction) -> Result<PersistenceDiagram> {
    f.check(g)?;
    let v = f.values();
    let (order, rank) = vertex_order(v);
    let s = descending(g, &order, &rank);
    let mut pts = Vec::new();
    finite_points(PointKind::Sup0, &s.pairs, v, &mut pts);
    essential_points(PointKind::Sup0, &s.essential, v, &mut pts);
    Ok(PersistenceDiagram::new(pts))
}

/// Extended persistence diagram of the lower-star filtration followed by
/// the relative upper-star filtration.
///
/// Ord0 and Ext0 come from the ascending union-find sweep, Rel1 from the
/// descending one. For Ext1, edges are taken in descending order while a
/// spanning forest is kept minimal with respect to the ascending edge
/// order; an edge closing a cycle kills the ascending-latest edge on that
/// cycle, which leaves the forest if it was a tree edge.
pub fn extended_pd(g: &Graph, f: &VertexFunction) -> Result<PersistenceDiagram> {
    f.check(g)?;
    let v = f.values();
    let (order, rank, asc) = ascending(g, v);
    let desc = descending(g, &order, &rank);
    let mut pts = Vec::new();
    finite_points(PointKind::Ord0, &asc.pairs, v, &mut pts);
    essential_points(PointKind::Ext0, &asc.essential, v, &mut pts);
    finite_points(PointKind::Rel1, &desc.pairs, v, &mut pts);
    ext1_points(g, v, &rank, &mut pts);
    Ok(PersistenceDiagram::new(pts))
}

fn ext1_points(g: &Graph, f: &[f64], rank: &[usize], out: &mut Vec<PersistencePoint>) {
    let n = g.n_vertices();
    let edges = g.edges();
    // (later, earlier) endpoint ranks; ascending edge order is lexicographic on this
    let asc_key: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (rank[a].max(rank[b]), rank[a].min(rank[b])))
        .collect();
    let mut desc: Vec<usize> = (0..edges.len()).collect();
    desc.sort_unstable_by(|&x, &y| {
        let (hx, lx) = asc_key[x];
        let (hy, ly) = asc_key[y];
        ly.cmp(&lx).then(hy.cmp(&hx))
    });

    let mut uf = UnionFind::new(n);
    let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut via = vec![usize::MAX; n];
    let mut seen = vec![0u32; n];
    let mut stamp = 0u32;
    let mut stack = Vec::new();
    for e in desc {
        let (a, b) = edges[e];
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra != rb {
            uf.parent[ra] = rb;
            forest[a].push((b, e));
            forest[b].push((a, e));
            continue;
        }
        // tree path from a to b
        stamp += 1;
        seen[a] = stamp;
        stack.clear();
        stack.push(a);
        while let Some(x) = stack.pop() {
            if x == b {
                break;
            }
            for &(y, id) in &forest[x] {
                if seen[y] != stamp {
                    seen[y] = stamp;
                    via[y] = id;
                    stack.push(y);
                }
            }
        }
        let mut latest = usize::MAX;
        let mut x = b;
        while x != a {
            let id = via[x];
            if latest == usize::MAX || asc_key[id] > asc_key[latest] {
                latest = id;
            }
            let (p, q) = edges[id];
            x = if p == x { q } else { p };
        }
        let killed = if asc_key[e] > asc_key[latest] {
            e
        } else {
            let (p, q) = edges[latest];
            forest[p].retain(|&(_, id)| id != latest);
            forest[q].retain(|&(_, id)| id != latest);
            forest[a].push((b, e));
            forest[b].push((a, e));
            latest
        };
        let (p, q) = edges[killed];
        out.push(PersistencePoint::new(PointKind::Ext1, f[p].max(f[q]), f[a].min(f[b])));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::PersistencePoint as P;
    use PointKind::*;

    fn vf(v: &[f64]) -> VertexFunction {
        VertexFunction::new(v.to_vec()).unwrap()
    }

    fn pts(d: &PersistenceDiagram) -> Vec<(PointKind, f64, f64)> {
        d.points().iter().map(|p| (p.kind, p.birth, p.death)).collect()
    }

    #[test]
    fn sublevel_fixtures() {
        let p3 = Graph::path(3);
        assert_eq!(pts(&sublevel_pd0(&p3, &vf(&[1.0, 3.0, 2.0])).unwrap()), vec![(Sub0, 1.0, 3.0), (Sub0, 2.0, 3.0)]);
        let tri = Graph::complete(3);
        assert_eq!(pts(&sublevel_pd0(&tri, &vf(&[4.0; 3])).unwrap()), vec![(Sub0, 4.0, 4.0)]);
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            pts(&sublevel_pd0(&two, &vf(&[0.0, 1.0, 2.0, 3.0])).unwrap()),
            vec![(Sub0, 0.0, 1.0), (Sub0, 2.0, 3.0)]
        );
    }

    #[test]
    fn superlevel_fixtures() {
        let p3 = Graph::path(3);
        assert_eq!(pts(&superlevel_pd0(&p3, &vf(&[1.0, 3.0, 2.0])).unwrap()), vec![(Sup0, 3.0, 1.0)]);
        assert_eq!(pts(&superlevel_pd0(&p3, &vf(&[2.0; 3])).unwrap()), vec![(Sup0, 2.0, 2.0)]);
        // a valley between two peaks
        let g = Graph::path(3);
        assert_eq!(
            pts(&superlevel_pd0(&g, &vf(&[5.0, 1.0, 4.0])).unwrap()),
            vec![(Sup0, 4.0, 1.0), (Sup0, 5.0, 1.0)]
        );
    }

    #[test]
    fn extended_fixtures() {
        let tri = Graph::complete(3);
        assert_eq!(pts(&extended_pd(&tri, &vf(&[0.0, 1.0, 2.0])).unwrap()), vec![(Ext0, 0.0, 2.0), (Ext1, 2.0, 0.0)]);
        let p3 = Graph::path(3);
        assert_eq!(pts(&extended_pd(&p3, &vf(&[1.0, 3.0, 2.0])).unwrap()), vec![(Ord0, 2.0, 3.0), (Ext0, 1.0, 3.0)]);
        assert_eq!(pts(&extended_pd(&Graph::path(2), &vf(&[0.0, 1.0])).unwrap()), vec![(Ext0, 0.0, 1.0)]);
        let empty = Graph::empty(3);
        assert_eq!(
            pts(&extended_pd(&empty, &vf(&[3.0, 1.0, 2.0])).unwrap()),
            vec![(Ext0, 1.0, 1.0), (Ext0, 2.0, 2.0), (Ext0, 3.0, 3.0)]
        );
    }

    #[test]
    fn rel1_on_two_peaks() {
        let g = Graph::path(3);
        let d = extended_pd(&g, &vf(&[5.0, 1.0, 4.0])).unwrap();
        assert!(d.points().contains(&P::new(Rel1, 4.0, 1.0)));
        assert!(d.points().contains(&P::new(Ext0, 1.0, 5.0)));
    }
}
