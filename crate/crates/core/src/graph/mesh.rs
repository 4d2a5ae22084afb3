use alloc::format;
use alloc::vec::Vec;

use rand::Rng as _;

use super::Graph;
use crate::error::{param, Error, Result};
use crate::math;
use crate::rng::rng_from_seed;

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point3>,
    faces: Vec<[usize; 3]>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if let Some(f) = faces.iter().find(|f| f.iter().any(|&i| i >= n)) {
            return Err(Error::InvalidMesh(format!("face {f:?} references a vertex outside 0..{n}")));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        Ok(Self { vertices, faces })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// The 1-skeleton: vertices plus the (deduplicated) face edges.
    pub fn skeleton(&self) -> Graph {
        let edges = self
            .faces
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (a, c)])
            .filter(|(a, b)| a != b);
        Graph::new(self.vertices.len(), edges).expect("face indices validated")
    }

    /// Euclidean length of every skeleton edge, aligned with `skeleton().edges()`.
    pub fn edge_lengths(&self, skeleton: &Graph) -> Vec<f64> {
        skeleton.edges().iter().map(|&(a, b)| distance(&self.vertices[a], &self.vertices[b])).collect()
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        triangle_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3>,
}

impl PointCloud {
    /// Translates to the centroid and scales so the largest norm is 1.
    pub fn normalize(&mut self) {
        let n = self.points.len();
        if n == 0 {
            return;
        }
        let mut c = [0.0; 3];
        for p in &self.points {
            for k in 0..3 {
                c[k] += p[k];
            }
        }
        for ck in &mut c {
            *ck /= n as f64;
        }
        let mut max_norm = 0.0f64;
        for p in &mut self.points {
            for k in 0..3 {
                p[k] -= c[k];
            }
            max_norm = max_norm.max(norm(p));
        }
        if max_norm > 0.0 {
            for p in &mut self.points {
                for x in p.iter_mut() {
                    *x /= max_norm;
                }
            }
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(norm).fold(0.0, f64::max)
    }
}

fn norm(p: &Point3) -> f64 {
    math::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])
}

fn distance(a: &Point3, b: &Point3) -> f64 {
    norm(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

fn triangle_area(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    0.5 * norm(&cross)
}

/// Raw area-weighted uniform samples on the mesh surface (no normalization).
pub fn sample_surface(mesh: &TriangleMesh, n: usize, seed: u64) -> Result<Vec<Point3>> {
    let mut cumulative = Vec::with_capacity(mesh.faces.len());
    let mut total = 0.0;
    for f in 0..mesh.faces.len() {
        total += mesh.face_area(f);
        cumulative.push(total);
    }
    if !(total > 0.0) {
        return Err(Error::Sampling("mesh has no face with positive area".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let target = rng.gen::<f64>() * total;
        let f = cumulative.partition_point(|&c| c <= target).min(cumulative.len() - 1);
        let [ia, ib, ic] = mesh.faces[f];
        let (a, b, c) = (&mesh.vertices[ia], &mesh.vertices[ib], &mesh.vertices[ic]);
        let mut r1: f64 = rng.gen();
        let mut r2: f64 = rng.gen();
        if r1 + r2 > 1.0 {
            r1 = 1.0 - r1;
            r2 = 1.0 - r2;
        }
        out.push([
            a[0] + r1 * (b[0] - a[0]) + r2 * (c[0] - a[0]),
            a[1] + r1 * (b[1] - a[1]) + r2 * (c[1] - a[1]),
            a[2] + r1 * (b[2] - a[2]) + r2 * (c[2] - a[2]),
        ]);
    }
    Ok(out)
}

/// `n` area-weighted surface samples, centered and scaled into the unit ball.
pub fn sample_mesh(mesh: &TriangleMesh, n: usize, seed: u64) -> Result<PointCloud> {
    let mut cloud = PointCloud { points: sample_surface(mesh, n, seed)? };
    cloud.normalize();
    Ok(cloud)
}

/// Symmetrized (union) k-nearest-neighbor graph; distance ties go to the
/// lower index.
pub fn knn_graph(cloud: &PointCloud, k: usize) -> Result<Graph> {
    let n = cloud.points.len();
    if k == 0 {
        return Err(param("k must be positive"));
    }
    if n <= k {
        return Err(param(format!("need more than k = {k} points, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * k);
    let mut candidates: Vec<(f64, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        candidates.clear();
        let p = &cloud.points[i];
        for (j, q) in cloud.points.iter().enumerate() {
            if j != i {
                let d = (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) + (p[2] - q[2]) * (p[2] - q[2]);
                candidates.push((d, j));
            }
        }
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        candidates.select_nth_unstable_by(k - 1, cmp);
        edges.extend(candidates[..k].iter().map(|&(_, j)| (i, j)));
    }
    Graph::new(n, edges)
}
