use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::VertexFunction;
use crate::error::{param, Error, Result};
use crate::graph::Graph;

const EPS: f64 = 1e-14;
const MAX_HOPS: usize = 3;

/// How edge curvatures are reduced to a vertex value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexReduction {
    #[default]
    Mean,
    Min,
    Max,
}

impl VertexReduction {
    pub fn name(&self) -> &'static str {
        match self {
            VertexReduction::Mean => "mean",
            VertexReduction::Min => "min",
            VertexReduction::Max => "max",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mean" => Some(VertexReduction::Mean),
            "min" => Some(VertexReduction::Min),
            "max" => Some(VertexReduction::Max),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciParams {
    /// Mass kept at the vertex itself, in `[0, 1)`.
    pub idleness: f64,
    pub reduction: VertexReduction,
}

impl Default for RicciParams {
    fn default() -> Self {
        RicciParams { idleness: 0.5, reduction: VertexReduction::Mean }
    }
}

impl RicciParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.idleness) {
            return Err(param(alloc::format!("ricci idleness must lie in [0, 1), got {}", self.idleness)));
        }
        Ok(())
    }
}

fn measure(g: &Graph, x: usize, alpha: f64) -> Vec<(usize, f64)> {
    let deg = g.degree(x);
    let mut m = Vec::with_capacity(deg + 1);
    if alpha > 0.0 {
        m.push((x, alpha));
    }
    let share = (1.0 - alpha) / deg as f64;
    m.extend(g.neighbors(x).map(|u| (u, share)));
    m
}

/// Hop distances from `src`, explored up to `MAX_HOPS`; farther vertices are
/// left at `usize::MAX`. `dist` must be all `usize::MAX` on entry and is
/// restored before returning through `touched`.
fn bounded_bfs(g: &Graph, src: usize, dist: &mut [usize], touched: &mut Vec<usize>, queue: &mut VecDeque<usize>) {
    dist[src] = 0;
    touched.push(src);
    queue.push_back(src);
    while let Some(v) = queue.pop_front() {
        if dist[v] == MAX_HOPS {
            continue;
        }
        for u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                touched.push(u);
                queue.push_back(u);
            }
        }
    }
}

/// Ollivier-Ricci curvature of every edge, in the order of `g.edges()`.
pub fn edge_curvatures(g: &Graph, alpha: f64) -> Result<Vec<f64>> {
    RicciParams { idleness: alpha, reduction: VertexReduction::Mean }.validate()?;
    let n = g.n_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::with_capacity(g.n_edges());
    for &(x, y) in g.edges() {
        let mx = measure(g, x, alpha);
        let my = measure(g, y, alpha);
        let mut cost = Vec::with_capacity(mx.len() * my.len());
        for &(u, _) in &mx {
            bounded_bfs(g, u, &mut dist, &mut touched, &mut queue);
            for &(v, _) in &my {
                let d = dist[v];
                if d == usize::MAX {
                    return Err(Error::Internal(alloc::format!("vertices {u} and {v} farther than {MAX_HOPS} hops")));
                }
                cost.push(d as f64);
            }
            for t in touched.drain(..) {
                dist[t] = usize::MAX;
            }
        }
        let supply: Vec<f64> = mx.iter().map(|p| p.1).collect();
        let demand: Vec<f64> = my.iter().map(|p| p.1).collect();
        let w1 = transport_cost(&supply, &demand, &cost)?;
        out.push(1.0 - w1);
    }
    Ok(out)
}

/// Vertex-level Ollivier-Ricci curvature; isolated vertices get 0.
pub fn ollivier_ricci(g: &Graph, params: &RicciParams) -> Result<VertexFunction> {
    params.validate()?;
    let kappa = edge_curvatures(g, params.idleness)?;
    let values = (0..g.n_vertices())
        .map(|v| {
            let inc = g.incident(v);
            if inc.is_empty() {
                return 0.0;
            }
            let it = inc.iter().map(|&(_, e)| kappa[e]);
            match params.reduction {
                VertexReduction::Mean => it.sum::<f64>() / inc.len() as f64,
                VertexReduction::Min => it.fold(f64::INFINITY, f64::min),
                VertexReduction::Max => it.fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    VertexFunction::new(values)
}

/// Minimum-cost transport between `supply` and `demand` (equal totals) with
/// row-major nonnegative `cost`, solved by successive shortest paths.
pub fn transport_cost(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<f64> {
    let a = supply.len();
    let b = demand.len();
    if cost.len() != a * b {
        return Err(param("transport cost matrix has the wrong shape"));
    }
    if supply.iter().chain(demand).chain(cost).any(|x| !x.is_finite() || *x < 0.0) {
        return Err(param("transport inputs must be finite and nonnegative"));
    }
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-9 * total_s.max(1.0) {
        return Err(param("transport supply and demand totals differ"));
    }

    // nodes: 0 = source, 1..=a supplies, a+1..=a+b demands, a+b+1 = sink
    let nv = a + b + 2;
    let sink = nv - 1;
    let mut rem_s = supply.to_vec();
    let mut rem_d = demand.to_vec();
    let mut flow = vec![0.0; a * b];
    let mut pi = vec![0.0; nv];
    let mut dist = vec![0.0; nv];
    let mut prev = vec![usize::MAX; nv];
    let mut done = vec![false; nv];
    let mut remaining = total_s.min(total_d);

    // residual arcs out of `u` as (target, cost, capacity); arcs back into the
    // source or out of the sink never lie on a shortest path and are omitted
    let arcs = |u: usize, rem_s: &[f64], rem_d: &[f64], flow: &[f64], f: &mut dyn FnMut(usize, f64, f64)| {
        if u == 0 {
            for i in 0..a {
                if rem_s[i] > EPS {
                    f(1 + i, 0.0, rem_s[i]);
                }
            }
        } else if u <= a {
            let i = u - 1;
            for j in 0..b {
                f(1 + a + j, cost[i * b + j], f64::INFINITY);
            }
        } else if u < sink {
            let j = u - 1 - a;
            for i in 0..a {
                if flow[i * b + j] > EPS {
                    f(1 + i, -cost[i * b + j], flow[i * b + j]);
                }
            }
            if rem_d[j] > EPS {
                f(sink, 0.0, rem_d[j]);
            }
        }
    };

    let mut guard = 0usize;
    while remaining > EPS {
        guard += 1;
        if guard > 16 * (a + b + 2) * (a + b + 2) {
            return Err(Error::Internal("transport solver did not terminate".into()));
        }
        dist.fill(f64::INFINITY);
        prev.fill(usize::MAX);
        done.fill(false);
        dist[0] = 0.0;
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..nv {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            let du = dist[u];
            arcs(u, &rem_s, &rem_d, &flow, &mut |v, c, _| {
                let reduced = (c + pi[u] - pi[v]).max(0.0);
                if !done[v] && du + reduced < dist[v] {
                    dist[v] = du + reduced;
                    prev[v] = u;
                }
            });
        }
        if !dist[sink].is_finite() {
            break;
        }
        let cap_of = |u: usize, v: usize, rem_s: &[f64], rem_d: &[f64], flow: &[f64]| -> f64 {
            let mut cap = 0.0;
            arcs(u, rem_s, rem_d, flow, &mut |t, _, c| {
                if t == v {
                    cap = c;
                }
            });
            cap
        };
        let mut push = remaining;
        let mut v = sink;
        while v != 0 {
            let u = prev[v];
            push = push.min(cap_of(u, v, &rem_s, &rem_d, &flow));
            v = u;
        }
        let mut v = sink;
        while v != 0 {
            let u = prev[v];
            if u == 0 {
                rem_s[v - 1] -= push;
            } else if v == sink {
                rem_d[u - 1 - a] -= push;
            } else if u <= a && v > a {
                flow[(u - 1) * b + (v - 1 - a)] += push;
            } else {
                flow[(v - 1) * b + (u - 1 - a)] -= push;
            }
            v = u;
        }
        remaining -= push;
        let cap = dist[sink];
        for v in 0..nv {
            pi[v] += dist[v].min(cap);
        }
    }
    if remaining > 1e-9 * total_s.max(1.0) {
        return Err(Error::Internal("transport problem left mass unassigned".into()));
    }
    Ok(flow.iter().zip(cost).map(|(f, c)| f.max(0.0) * c).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    /// Dense two-phase simplex with Bland's rule for `min c.x, Ax = b, x >= 0`.
    fn simplex_min(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> f64 {
        let m = a.len();
        let n = c.len();
        let tol = 1e-12;
        // tableau columns: n originals, m artificials, rhs
        let w = n + m + 1;
        let mut t: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row = vec![0.0; w];
                let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
                for j in 0..n {
                    row[j] = s * a[i][j];
                }
                row[n + i] = 1.0;
                row[w - 1] = s * b[i];
                row
            })
            .collect();
        let mut basis: Vec<usize> = (n..n + m).collect();

        fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, col: usize) {
            let p = t[r][col];
            for x in t[r].iter_mut() {
                *x /= p;
            }
            let pr = t[r].clone();
            for (i, row) in t.iter_mut().enumerate() {
                if i != r && row[col] != 0.0 {
                    let f = row[col];
                    for (x, y) in row.iter_mut().zip(&pr) {
                        *x -= f * y;
                    }
                }
            }
            basis[r] = col;
        }

        fn run(t: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], allowed: usize, tol: f64) {
            let w = t[0].len();
            loop {
                // reduced costs
                let mut enter = None;
                for j in 0..allowed {
                    if basis.contains(&j) {
                        continue;
                    }
                    let z: f64 = t.iter().zip(basis.iter()).map(|(row, &bv)| cost[bv] * row[j]).sum();
                    if cost[j] - z < -tol {
                        enter = Some(j);
                        break;
                    }
                }
                let Some(col) = enter else { return };
                let mut leave: Option<(usize, f64)> = None;
                for (i, row) in t.iter().enumerate() {
                    if row[col] > tol {
                        let ratio = row[w - 1] / row[col];
                        match leave {
                            None => leave = Some((i, ratio)),
                            Some((li, lr)) => {
                                if ratio < lr - tol || (ratio <= lr + tol && basis[i] < basis[li]) {
                                    leave = Some((i, ratio));
                                }
                            }
                        }
                    }
                }
                let (r, _) = leave.expect("bounded problem");
                pivot(t, basis, r, col);
            }
        }

        let mut phase1 = vec![0.0; n + m];
        for x in &mut phase1[n..] {
            *x = 1.0;
        }
        run(&mut t, &mut basis, &phase1, n + m, tol);
        let infeas: f64 = t.iter().zip(&basis).filter(|(_, &bv)| bv >= n).map(|(row, _)| row[w - 1]).sum();
        assert!(infeas < 1e-9, "infeasible");
        // drive artificials out, dropping redundant rows
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= n {
                if let Some(col) = (0..n).find(|&j| t[i][j].abs() > 1e-9) {
                    pivot(&mut t, &mut basis, i, col);
                    i += 1;
                } else {
                    t.remove(i);
                    basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        let mut phase2 = c.to_vec();
        phase2.extend(vec![0.0; m]);
        run(&mut t, &mut basis, &phase2, n, tol);
        t.iter().zip(&basis).map(|(row, &bv)| phase2[bv] * row[w - 1]).sum()
    }

    fn lp_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> f64 {
        let (a, b) = (supply.len(), demand.len());
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..a {
            let mut r = vec![0.0; a * b];
            for j in 0..b {
                r[i * b + j] = 1.0;
            }
            rows.push(r);
            rhs.push(supply[i]);
        }
        for j in 0..b {
            let mut r = vec![0.0; a * b];
            for i in 0..a {
                r[i * b + j] = 1.0;
            }
            rows.push(r);
            rhs.push(demand[j]);
        }
        simplex_min(&rows, &rhs, cost)
    }

    fn hop_matrix(g: &Graph) -> Vec<Vec<f64>> {
        let n = g.n_vertices();
        let mut d = vec![vec![f64::INFINITY; n]; n];
        for i in 0..n {
            d[i][i] = 0.0;
        }
        for &(u, v) in g.edges() {
            d[u][v] = 1.0;
            d[v][u] = 1.0;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    fn oracle_curvatures(g: &Graph, alpha: f64) -> Vec<f64> {
        let n = g.n_vertices();
        let d = hop_matrix(g);
        let full = |x: usize| {
            let mut m = vec![0.0; n];
            m[x] = alpha;
            for u in g.neighbors(x) {
                m[u] = (1.0 - alpha) / g.degree(x) as f64;
            }
            m
        };
        g.edges()
            .iter()
            .map(|&(x, y)| {
                let cost: Vec<f64> = (0..n * n).map(|k| d[k / n][k % n].min(1e3)).collect();
                1.0 - lp_transport(&full(x), &full(y), &cost)
            })
            .collect()
    }

    #[test]
    fn k2_is_flat_at_one() {
        let g = Graph::path(2);
        let f = ollivier_ricci(&g, &RicciParams::default()).unwrap();
        assert!((f.values()[0] - 1.0).abs() < 1e-12 && (f.values()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p3_fixtures() {
        let g = Graph::path(3);
        let p = RicciParams { idleness: 0.0, ..Default::default() };
        let f = ollivier_ricci(&g, &p).unwrap();
        for v in f.values() {
            assert!(v.abs() < 1e-12);
        }
        let k = edge_curvatures(&g, 0.5).unwrap();
        assert!((k[0] - 0.5).abs() < 1e-12 && (k[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn isolated_vertices_are_zero() {
        let g = Graph::new(4, [(0, 1)]).unwrap();
        let f = ollivier_ricci(&g, &RicciParams::default()).unwrap();
        assert_eq!(f.values()[2], 0.0);
        assert_eq!(f.values()[3], 0.0);
    }

    #[test]
    fn transport_matches_simplex_on_random_instances() {
        let mut rng = rng_from_seed(10);
        for _ in 0..200 {
            let a = rng.gen_range(1..6);
            let b = rng.gen_range(1..6);
            let mut s: Vec<f64> = (0..a).map(|_| rng.gen::<f64>() + 0.01).collect();
            let mut d: Vec<f64> = (0..b).map(|_| rng.gen::<f64>() + 0.01).collect();
            let ts: f64 = s.iter().sum();
            let td: f64 = d.iter().sum();
            s.iter_mut().for_each(|x| *x /= ts);
            d.iter_mut().for_each(|x| *x /= td);
            let c: Vec<f64> = (0..a * b).map(|_| rng.gen_range(0..4) as f64).collect();
            let fast = transport_cost(&s, &d, &c).unwrap();
            let slow = lp_transport(&s, &d, &c);
            assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
        }
    }

    #[test]
    fn curvature_matches_lp_oracle_on_small_graphs() {
        let mut rng = rng_from_seed(11);
        let mut graphs = vec![Graph::complete(4), Graph::cycle(5), Graph::path(6), Graph::complete(8)];
        for _ in 0..25 {
            let n = rng.gen_range(2..=8);
            let edges: Vec<_> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen::<f64>() < 0.4).collect();
            graphs.push(Graph::new(n, edges).unwrap());
        }
        for g in &graphs {
            for alpha in [0.0, 0.25, 0.5, 0.9] {
                let fast = edge_curvatures(g, alpha).unwrap();
                let slow = oracle_curvatures(g, alpha);
                for (x, y) in fast.iter().zip(&slow) {
                    assert!((x - y).abs() < 1e-9, "alpha {alpha}: {fast:?} vs {slow:?}");
                }
            }
        }
    }

    #[test]
    fn reductions_and_validation() {
        let g = Graph::new(4, [(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap();
        let k = edge_curvatures(&g, 0.5).unwrap();
        let inc: Vec<f64> = g.incident(1).iter().map(|&(_, e)| k[e]).collect();
        let get = |r| ollivier_ricci(&g, &RicciParams { idleness: 0.5, reduction: r }).unwrap().values()[1];
        assert_eq!(get(VertexReduction::Min), inc.iter().cloned().fold(f64::INFINITY, f64::min));
        assert_eq!(get(VertexReduction::Max), inc.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        assert!(ollivier_ricci(&g, &RicciParams { idleness: 1.0, ..Default::default() }).is_err());
    }
}
