//! True-vs-fake separation, the 4-way true/fake confusion, and per-vertex
//! shape segmentation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::cv::{cross_validate, select_and_evaluate, stratified_folds, CvProtocol, Fold, PrecomputedGrams};
use super::svm::SvmSettings;
use super::vectors::{VectorFamily, VectorFeature};
use super::ExperimentResult;
use crate::diagrams::{permute_diagram, Orientation};
use crate::error::{param, Error, Result};
use crate::filtration::geodesic_from;
use crate::graph::TriangleMesh;
use crate::kernels::KernelSpec;
use crate::persistence::{superlevel_pd0, PersistenceDiagram};
use crate::rng::{derive_seed, rng_from_seed};

/// One permuted diagram per input, item `i` drawn with sub-seed
/// `(seed, "permute", i)`.
pub fn fake_diagrams(diagrams: &[PersistenceDiagram], seed: u64, orientation: Orientation) -> Vec<PersistenceDiagram> {
    diagrams
        .iter()
        .enumerate()
        .map(|(i, d)| permute_diagram(d, derive_seed(seed, "permute", i as u64), orientation))
        .collect()
}

/// Binary classification of every true diagram (class 0) against one fake
/// of it (class 1) under the cross-validation protocol.
pub fn separation_experiment(
    diagrams: &[PersistenceDiagram],
    kernels: &[KernelSpec],
    protocol: &CvProtocol,
    seed: u64,
    config: &str,
) -> Result<ExperimentResult> {
    let fakes = fake_diagrams(diagrams, seed, Orientation::ByKind);
    let items: Vec<PersistenceDiagram> = diagrams.iter().cloned().chain(fakes).collect();
    let labels: Vec<usize> = (0..items.len()).map(|i| usize::from(i >= diagrams.len())).collect();
    let family = PrecomputedGrams::from_specs(&items, kernels)?;
    let mut result = cross_validate(&family, &labels, 2, protocol, seed, config)?;
    for (d, min) in &family.skipped {
        result.warnings.push(format!("skipped {d}: min eigenvalue {min:e}"));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourWayResult {
    /// Classes in order I+T, I+F, II+T, II+F.
    pub result: ExperimentResult,
    /// The 4x4 confusion with true and fake collapsed per original class.
    pub merged: [[u64; 2]; 2],
}

/// Collapses `confusion[2a + t][2b + u]` over `t, u`.
pub fn merge_true_fake(confusion: &[Vec<u64>]) -> [[u64; 2]; 2] {
    let mut m = [[0; 2]; 2];
    for (r, row) in confusion.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m[r / 2][c / 2] += v;
        }
    }
    m
}

/// Every diagram of a binary dataset appears twice: true with label
/// `2y`, fake with label `2y + 1`.
pub fn confusion_4way(
    diagrams: &[PersistenceDiagram],
    labels: &[usize],
    kernels: &[KernelSpec],
    protocol: &CvProtocol,
    seed: u64,
    config: &str,
) -> Result<FourWayResult> {
    if labels.len() != diagrams.len() {
        return Err(Error::Labels(format!("{} labels for {} diagrams", labels.len(), diagrams.len())));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::Labels("the 4-way experiment needs binary labels".into()));
    }
    let fakes = fake_diagrams(diagrams, seed, Orientation::ByKind);
    let items: Vec<PersistenceDiagram> = diagrams.iter().cloned().chain(fakes).collect();
    let four: Vec<usize> = labels.iter().map(|&y| 2 * y).chain(labels.iter().map(|&y| 2 * y + 1)).collect();
    let family = PrecomputedGrams::from_specs(&items, kernels)?;
    let result = cross_validate(&family, &four, 4, protocol, seed, config)?;
    let merged = merge_true_fake(&result.confusion);
    Ok(FourWayResult { result, merged })
}

/// Superlevel 0-dimensional diagrams of the geodesic distance from every
/// vertex, on the mesh skeleton with Euclidean edge lengths.
pub fn geodesic_vertex_diagrams(mesh: &TriangleMesh) -> Result<Vec<PersistenceDiagram>> {
    let g = mesh.skeleton();
    let lengths = mesh.edge_lengths(&g);
    (0..g.n_vertices())
        .map(|v| {
            let dist = geodesic_from(&g, &lengths, v)?;
            superlevel_pd0(&g, &dist.values)
        })
        .collect()
}

/// Per-vertex diagrams and ground-truth segment labels of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationShape {
    pub diagrams: Vec<PersistenceDiagram>,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationParams {
    pub feature: VectorFeature,
    pub bandwidths: Vec<f64>,
    pub c_grid: Vec<f64>,
    pub permute: bool,
    pub svm: SvmSettings,
}

impl SegmentationParams {
    pub fn descriptor(&self) -> String {
        format!(
            "segmentation({},bandwidths={:?},C={:?},permute={})",
            self.feature.descriptor(),
            self.bandwidths,
            self.c_grid,
            self.permute
        )
    }
}

/// Half of the shapes (rounded up, chosen by `seed`) train a Gaussian
/// SVM on per-vertex features; the result has one fold whose accuracy is
/// one minus the misclassified-vertex fraction on the other shapes.
/// Bandwidth and `C` are chosen by leave-one-shape-out over the training
/// shapes.
pub fn segmentation_run(shapes: &[SegmentationShape], params: &SegmentationParams, seed: u64) -> Result<ExperimentResult> {
    if shapes.len() < 2 {
        return Err(param("segmentation needs at least two shapes"));
    }
    for s in shapes {
        if s.labels.len() != s.diagrams.len() {
            return Err(Error::Labels(format!("{} labels for {} vertices", s.labels.len(), s.diagrams.len())));
        }
    }
    let mut classes: Vec<usize> = shapes.iter().flat_map(|s| s.labels.iter().copied()).collect();
    classes.sort_unstable();
    classes.dedup();
    let remap = |l: usize| classes.binary_search(&l).expect("collected above");

    let mut diagrams = Vec::new();
    let mut labels = Vec::new();
    let mut owner = Vec::new();
    for (si, s) in shapes.iter().enumerate() {
        for (vi, (d, &l)) in s.diagrams.iter().zip(&s.labels).enumerate() {
            diagrams.push(if params.permute {
                permute_diagram(d, derive_seed(seed, "permute", ((si as u64) << 32) | vi as u64), Orientation::ByKind)
            } else {
                d.clone()
            });
            labels.push(remap(l));
            owner.push(si);
        }
    }

    let mut order: Vec<usize> = (0..shapes.len()).collect();
    order.shuffle(&mut rng_from_seed(derive_seed(seed, "split", 0)));
    let n_train = shapes.len().div_ceil(2);
    let mut is_train = vec![false; shapes.len()];
    for &s in &order[..n_train] {
        is_train[s] = true;
    }
    let items_of = |pred: &dyn Fn(usize) -> bool| -> Vec<usize> { (0..owner.len()).filter(|&i| pred(owner[i])).collect() };
    let fold = Fold::from_indices(items_of(&|s| is_train[s]), items_of(&|s| !is_train[s]))?;

    let train_shapes: Vec<usize> = order[..n_train].to_vec();
    let inner = || -> Result<Vec<Fold>> {
        if train_shapes.len() >= 2 {
            train_shapes
                .iter()
                .map(|&held| Fold::from_indices(items_of(&|s| is_train[s] && s != held), items_of(&|s| s == held)))
                .collect()
        } else {
            stratified_folds(fold.train(), &labels, 3, derive_seed(seed, "inner", 0)).map(|s| s.folds)
        }
    };

    let family = VectorFamily { diagrams: &diagrams, functions: &[], features: vec![params.feature], bandwidths: params.bandwidths.clone() };
    let n_classes = classes.len();
    let (pred, selected, c) = select_and_evaluate(&family, &fold, inner, &labels, n_classes, &params.c_grid, &params.svm)?;
    let truth: Vec<usize> = fold.test().iter().map(|&i| labels[i]).collect();
    let mut result = ExperimentResult::new(n_classes, &params.descriptor(), seed);
    result.push_fold(0, 0, &truth, &pred, selected, c);
    result.finish();
    Ok(result)
}
