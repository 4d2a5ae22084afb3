use alloc::format;

use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng as _;

use super::{Graph, LabeledDataset, TriangleMesh};
use crate::error::{param, Result};
use crate::math;
use crate::rng::{derive_seed, rng_from_seed};

/// Two-block stochastic block model: blocks of `n1` and `n2` vertices,
/// within-block edge probability `p`, cross-block probability `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmModel {
    pub n1: usize,
    pub n2: usize,
    pub p: f64,
    pub q: f64,
}

pub const SBM_CLASS_A: SbmModel = SbmModel { n1: 100, n2: 50, p: 0.5, q: 0.1 };
pub const SBM_CLASS_B: SbmModel = SbmModel { n1: 75, n2: 75, p: 0.4, q: 0.2 };

pub fn sbm(n1: usize, n2: usize, p: f64, q: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(param(format!("edge probabilities must lie in [0, 1], got p = {p}, q = {q}")));
    }
    let n = n1 + n2;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let prob = if (i < n1) == (j < n1) { p } else { q };
            if rng.gen::<f64>() < prob {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

impl SbmModel {
    pub fn sample(&self, seed: u64) -> Result<Graph> {
        sbm(self.n1, self.n2, self.p, self.q, seed)
    }
}

/// `count` graphs split evenly between the two SBM classes; then exactly
/// `round(noise * count)` labels, chosen without replacement, are flipped.
pub fn make_sbm_dataset(count: usize, noise: f64, seed: u64) -> Result<LabeledDataset> {
    if !(0.0..=0.5).contains(&noise) {
        return Err(param(format!("label noise must lie in [0, 0.5], got {noise}")));
    }
    let first = count - count / 2;
    let mut graphs = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let (model, label) = if i < first { (SBM_CLASS_A, 0) } else { (SBM_CLASS_B, 1) };
        graphs.push(model.sample(derive_seed(seed, "sbm-graph", i as u64))?);
        labels.push(label);
    }
    let flips = math::round(noise * count as f64) as usize;
    let mut rng = rng_from_seed(derive_seed(seed, "sbm-label-noise", 0));
    for i in sample(&mut rng, count, flips.min(count)) {
        labels[i] = 1 - labels[i];
    }
    let name = format!("sbm-noise{noise}");
    LabeledDataset::new(name, graphs, &labels)
}

/// Shape of the synthetic dumbbell used for segmentation checks: two
/// spherical lobes of different radii joined by a cylindrical neck.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumbbellParams {
    pub radius_a: f64,
    pub radius_b: f64,
    pub neck_radius: f64,
    pub neck_length: f64,
    pub rings: usize,
    pub segments: usize,
    /// Relative radial noise applied per vertex.
    pub jitter: f64,
}

impl Default for DumbbellParams {
    fn default() -> Self {
        Self { radius_a: 1.0, radius_b: 0.6, neck_radius: 0.25, neck_length: 1.0, rings: 36, segments: 12, jitter: 0.05 }
    }
}

/// Surface-of-revolution dumbbell along the z axis with per-vertex lobe
/// labels (0 = lobe A, 1 = lobe B; the neck is split at its midpoint).
pub fn dumbbell_mesh(params: &DumbbellParams, seed: u64) -> Result<(TriangleMesh, Vec<usize>)> {
    let DumbbellParams { radius_a, radius_b, neck_radius, neck_length, rings, segments, jitter } = *params;
    if rings < 2 || segments < 3 {
        return Err(param("dumbbell needs at least 2 rings and 3 segments"));
    }
    if !(radius_a > 0.0 && radius_b > 0.0 && neck_radius > 0.0 && neck_length >= 0.0) {
        return Err(param("dumbbell dimensions must be positive"));
    }
    let center_a = radius_a;
    let center_b = 2.0 * radius_a + neck_length + radius_b;
    let length = center_b + radius_b;
    let split = 2.0 * radius_a + 0.5 * neck_length;
    let sphere = |z: f64, c: f64, r: f64| {
        let h = r * r - (z - c) * (z - c);
        if h > 0.0 {
            math::sqrt(h)
        } else {
            0.0
        }
    };
    let profile = |z: f64| {
        let mut r = sphere(z, center_a, radius_a).max(sphere(z, center_b, radius_b));
        if z >= center_a && z <= center_b {
            r = r.max(neck_radius);
        }
        r
    };

    let mut rng = rng_from_seed(seed);
    let mut vertices = Vec::with_capacity(rings * segments + 2);
    let mut labels = Vec::with_capacity(rings * segments + 2);
    vertices.push([0.0, 0.0, 0.0]);
    labels.push(0);
    for i in 1..=rings {
        let z = length * i as f64 / (rings + 1) as f64;
        let r = profile(z);
        let offset = if i % 2 == 0 { 0.5 } else { 0.0 };
        for j in 0..segments {
            let theta = 2.0 * math::PI * (j as f64 + offset) / segments as f64;
            let noisy = r * (1.0 + jitter * (2.0 * rng.gen::<f64>() - 1.0));
            vertices.push([noisy * math::cos(theta), noisy * math::sin(theta), z]);
            labels.push(usize::from(z > split));
        }
    }
    vertices.push([0.0, 0.0, length]);
    labels.push(1);

    let ring = |i: usize, j: usize| 1 + (i - 1) * segments + (j % segments);
    let top = vertices.len() - 1;
    let mut faces = Vec::with_capacity(2 * rings * segments);
    for j in 0..segments {
        faces.push([0, ring(1, j), ring(1, j + 1)]);
        faces.push([top, ring(rings, j + 1), ring(rings, j)]);
    }
    for i in 1..rings {
        for j in 0..segments {
            faces.push([ring(i, j), ring(i + 1, j), ring(i, j + 1)]);
            faces.push([ring(i, j + 1), ring(i + 1, j), ring(i + 1, j + 1)]);
        }
    }
    Ok((TriangleMesh::new(vertices, faces)?, labels))
}
