//! Gaussian-kernel families over fixed-length diagram vectorizations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::cv::{Fold, FoldKernels, KernelFamily};
use crate::diagrams::{filvec, pervec, HistogramRange};
use crate::error::{param, Result};
use crate::features::{landscape, persistence_image, ImageLayout, ImageWeight, LandscapeParams};
use crate::filtration::VertexFunction;
use crate::linalg::Matrix;
use crate::math;
use crate::persistence::PersistenceDiagram;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorFeature {
    /// Histogram of diagram coordinates.
    Pervec { bins: usize },
    /// Histogram of vertex function values.
    Filvec { bins: usize },
    Landscape { k_max: usize, bins: usize },
    Image { resolution: usize, bandwidth: f64, weight: ImageWeight },
}

impl VectorFeature {
    pub fn name(&self) -> &'static str {
        match self {
            VectorFeature::Pervec { .. } => "pervec",
            VectorFeature::Filvec { .. } => "filvec",
            VectorFeature::Landscape { .. } => "landscape",
            VectorFeature::Image { .. } => "image",
        }
    }

    pub fn descriptor(&self) -> String {
        match *self {
            VectorFeature::Pervec { bins } => format!("pervec(bins={bins})"),
            VectorFeature::Filvec { bins } => format!("filvec(bins={bins})"),
            VectorFeature::Landscape { k_max, bins } => format!("landscape(k_max={k_max},bins={bins})"),
            VectorFeature::Image { resolution, bandwidth, weight } => {
                format!("image(resolution={resolution},bandwidth={bandwidth},weight={})", weight.name())
            }
        }
    }
}

/// Landscape sampling range covering the training points.
fn landscape_range<'a>(train: impl Iterator<Item = &'a PersistenceDiagram>) -> (f64, f64) {
    let r = HistogramRange::fit(train.flat_map(|d| d.coordinates()));
    if r.hi > r.lo {
        (r.lo, r.hi)
    } else {
        (r.lo - 0.5, r.lo + 0.5)
    }
}

/// Candidates are `features x bandwidths`; one group per feature, so the
/// vectorization is fitted once per fold and shared by all bandwidths.
#[derive(Debug, Clone)]
pub struct VectorFamily<'a> {
    pub diagrams: &'a [PersistenceDiagram],
    /// Vertex functions, needed only by `Filvec`.
    pub functions: &'a [VertexFunction],
    pub features: Vec<VectorFeature>,
    pub bandwidths: Vec<f64>,
}

impl<'a> VectorFamily<'a> {
    /// Vectors of `items` under `feature`, with every data-dependent range
    /// fitted on `fit` only.
    pub fn vectors(&self, feature: &VectorFeature, fit: &[usize], items: &[usize]) -> Result<Vec<Vec<f64>>> {
        match *feature {
            VectorFeature::Pervec { bins } => {
                let range = HistogramRange::fit(fit.iter().flat_map(|&i| self.diagrams[i].coordinates()));
                items.iter().map(|&i| pervec(&self.diagrams[i], bins, range).map(|h| h.counts)).collect()
            }
            VectorFeature::Filvec { bins } => {
                if self.functions.len() != self.diagrams.len() {
                    return Err(param("filvec needs one vertex function per item"));
                }
                let range = HistogramRange::fit(fit.iter().flat_map(|&i| self.functions[i].values().iter().copied()));
                items.iter().map(|&i| filvec(&self.functions[i], bins, range).map(|h| h.counts)).collect()
            }
            VectorFeature::Landscape { k_max, bins } => {
                let (lo, hi) = landscape_range(fit.iter().map(|&i| &self.diagrams[i]));
                let params = LandscapeParams { k_max, bins, lo, hi };
                items.iter().map(|&i| landscape(&self.diagrams[i], &params).map(|f| f.values)).collect()
            }
            VectorFeature::Image { resolution, bandwidth, weight } => {
                let layout = ImageLayout::fit(fit.iter().map(|&i| &self.diagrams[i]), resolution, bandwidth, weight)?;
                Ok(items.iter().map(|&i| persistence_image(&self.diagrams[i], &layout).values).collect())
            }
        }
    }
}

fn squared_distances(rows: &[Vec<f64>], cols: &[Vec<f64>]) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| rows[i].iter().zip(&cols[j]).map(|(a, b)| (a - b) * (a - b)).sum())
}

impl KernelFamily for VectorFamily<'_> {
    fn groups(&self) -> usize {
        self.features.len()
    }

    fn group_size(&self, _group: usize) -> usize {
        self.bandwidths.len()
    }

    fn fold_kernels(&self, group: usize, fold: &Fold) -> Result<Vec<FoldKernels>> {
        let feature = &self.features[group];
        let train = self.vectors(feature, fold.train(), fold.train())?;
        let test = self.vectors(feature, fold.train(), fold.test())?;
        let d_train = squared_distances(&train, &train);
        let d_test = squared_distances(&test, &train);
        self.bandwidths
            .iter()
            .map(|&bw| {
                if !(bw > 0.0 && bw.is_finite()) {
                    return Err(param(format!("bandwidth must be positive, got {bw}")));
                }
                let g = |d2: f64| math::exp(-d2 / (2.0 * bw * bw));
                Ok(FoldKernels {
                    descriptor: format!("{}+gaussian(bandwidth={bw})", feature.descriptor()),
                    train: d_train.map(g),
                    test: d_test.map(g),
                    needs_repair: false,
                })
            })
            .collect()
    }
}
