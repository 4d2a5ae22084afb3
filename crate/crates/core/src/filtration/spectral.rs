use alloc::vec;
use alloc::vec::Vec;

use super::VertexFunction;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{dot, norm, symmetric_eigen, Matrix};
use crate::math;

/// Graphs up to this many vertices use a dense eigen-decomposition;
/// larger connected graphs use block inverse iteration with CG solves.
pub const DENSE_EIGEN_LIMIT: usize = 512;

const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Squared Fiedler vector.
///
/// When the second-smallest Laplacian eigenvalue is repeated the
/// eigenvector is not unique; the value returned is then the diagonal of
/// the orthogonal projector onto that eigenspace divided by its dimension,
/// which coincides with the squared unit eigenvector in the simple case and
/// is independent of basis and vertex order. Disconnected graphs fall in
/// this case with the zero eigenspace orthogonal to the all-ones vector,
/// giving `(1/|C(v)| - 1/n) / (#components - 1)`. Entries are nonnegative
/// and sum to one.
pub fn fiedler_squared(g: &Graph) -> Result<VertexFunction> {
    let n = g.n_vertices();
    if n <= 1 {
        return VertexFunction::new(vec![1.0; n]);
    }
    let (comp, count) = g.components();
    if count > 1 {
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let denom = (count - 1) as f64;
        let values = comp.iter().map(|&c| (1.0 / sizes[c] as f64 - 1.0 / n as f64) / denom).collect();
        return VertexFunction::new(values);
    }
    if n <= DENSE_EIGEN_LIMIT {
        dense_fiedler(g)
    } else {
        iterative_fiedler(g)
    }
}

fn laplacian(g: &Graph) -> Matrix {
    let n = g.n_vertices();
    let mut l = Matrix::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = g.degree(v) as f64;
    }
    for &(a, b) in g.edges() {
        l[(a, b)] = -1.0;
        l[(b, a)] = -1.0;
    }
    l
}

fn laplacian_apply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for v in 0..g.n_vertices() {
        let mut s = g.degree(v) as f64 * x[v];
        for u in g.neighbors(v) {
            s -= x[u];
        }
        out[v] = s;
    }
}

fn max_degree(g: &Graph) -> usize {
    (0..g.n_vertices()).map(|v| g.degree(v)).max().unwrap_or(0)
}

fn residual_scale(g: &Graph) -> f64 {
    (2.0 * max_degree(g) as f64).max(1.0)
}

fn cluster_tolerance(lambda_max: f64) -> f64 {
    1e-9 * lambda_max.max(1.0)
}

fn dense_fiedler(g: &Graph) -> Result<VertexFunction> {
    let n = g.n_vertices();
    let l = laplacian(g);
    let eig = symmetric_eigen(&l)?;
    let vectors = eig.vectors.expect("requested vectors");
    let lambda2 = eig.values[1];
    let tol = cluster_tolerance(eig.values[n - 1]);
    let cluster: Vec<usize> = (1..n).filter(|&j| (eig.values[j] - lambda2).abs() <= tol).collect();

    let mut out = vec![0.0; n];
    let mut lv = vec![0.0; n];
    let mut worst = 0.0f64;
    for &j in &cluster {
        let col: Vec<f64> = (0..n).map(|i| vectors[(i, j)]).collect();
        laplacian_apply(g, &col, &mut lv);
        let r = norm(&lv.iter().zip(&col).map(|(a, b)| a - eig.values[j] * b).collect::<Vec<_>>());
        worst = worst.max(r);
        for (o, c) in out.iter_mut().zip(&col) {
            *o += c * c;
        }
    }
    if worst > RESIDUAL_TOLERANCE * residual_scale(g) {
        return Err(Error::Eigensolver { residual: worst });
    }
    finish(out, cluster.len())
}

fn finish(mut diag: Vec<f64>, k: usize) -> Result<VertexFunction> {
    let total: f64 = diag.iter().sum();
    let scale = if total > 0.0 { 1.0 / total } else { 1.0 / k as f64 };
    for d in &mut diag {
        *d *= scale;
    }
    VertexFunction::new(diag)
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x {
        *v -= mean;
    }
}

/// Solves `L y = b` on the complement of the all-ones vector by CG.
fn cg_solve(g: &Graph, b: &[f64], y: &mut [f64]) {
    let n = b.len();
    y.fill(0.0);
    let mut r = b.to_vec();
    remove_mean(&mut r);
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let stop = 1e-28 * rr.max(1e-300);
    for _ in 0..(10 * n) {
        if rr <= stop {
            break;
        }
        laplacian_apply(g, &p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            y[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        remove_mean(&mut r);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    remove_mean(y);
}

fn orthonormalize(block: &mut [Vec<f64>]) {
    for j in 0..block.len() {
        for _ in 0..2 {
            for i in 0..j {
                let (head, tail) = block.split_at_mut(j);
                let proj = dot(&head[i], &tail[0]);
                for (t, h) in tail[0].iter_mut().zip(&head[i]) {
                    *t -= proj * h;
                }
            }
        }
        let nrm = norm(&block[j]);
        if nrm > 0.0 {
            for x in &mut block[j] {
                *x /= nrm;
            }
        }
    }
}

fn iterative_fiedler(g: &Graph) -> Result<VertexFunction> {
    let n = g.n_vertices();
    let width = 4.min(n - 1);
    let scale = residual_scale(g);
    // deterministic start: low-frequency cosines of the vertex index plus a hash
    let mut block: Vec<Vec<f64>> = (0..width)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let h = ((i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 40) as f64 / (1u64 << 24) as f64;
                    math::cos(math::PI * (j + 1) as f64 * (i as f64 + 0.5) / n as f64) + 0.1 * h
                })
                .collect()
        })
        .collect();
    for v in &mut block {
        remove_mean(v);
    }
    orthonormalize(&mut block);

    let mut lv = vec![0.0; n];
    let mut worst = f64::INFINITY;
    for _ in 0..500 {
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(width);
        for v in &block {
            let mut y = vec![0.0; n];
            cg_solve(g, v, &mut y);
            next.push(y);
        }
        orthonormalize(&mut next);

        // Rayleigh-Ritz on the block
        let images: Vec<Vec<f64>> = next
            .iter()
            .map(|v| {
                let mut out = vec![0.0; n];
                laplacian_apply(g, v, &mut out);
                out
            })
            .collect();
        let h = Matrix::from_fn(width, width, |a, b| 0.5 * (dot(&next[a], &images[b]) + dot(&next[b], &images[a])));
        let eig = symmetric_eigen(&h)?;
        let w = eig.vectors.expect("requested vectors");
        block = (0..width)
            .map(|c| {
                let mut v = vec![0.0; n];
                for (r, src) in next.iter().enumerate() {
                    for (o, s) in v.iter_mut().zip(src) {
                        *o += w[(r, c)] * s;
                    }
                }
                v
            })
            .collect();

        let lambda2 = eig.values[0];
        let tol = cluster_tolerance(2.0 * max_degree(g) as f64);
        let cluster: Vec<usize> = (0..width).filter(|&j| (eig.values[j] - lambda2).abs() <= tol).collect();
        worst = 0.0;
        for &j in &cluster {
            laplacian_apply(g, &block[j], &mut lv);
            let r = norm(&lv.iter().zip(&block[j]).map(|(a, b)| a - eig.values[j] * b).collect::<Vec<_>>());
            worst = worst.max(r);
        }
        if worst <= RESIDUAL_TOLERANCE * scale {
            let mut diag = vec![0.0; n];
            for &j in &cluster {
                for (d, x) in diag.iter_mut().zip(&block[j]) {
                    *d += x * x;
                }
            }
            return finish(diag, cluster.len());
        }
    }
    Err(Error::Eigensolver { residual: worst })
}
