//! Kernel SVM, cross-validation, and the evaluation protocols built on them.

mod cv;
mod experiments;
mod svm;
mod vectors;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{param, Result};
use crate::math;

pub use cv::{cross_validate, stratified_folds, CvProtocol, Fold, FoldKernels, KernelFamily, PrecomputedGrams, StratifiedSplit};
pub use experiments::{
    confusion_4way, fake_diagrams, geodesic_vertex_diagrams, merge_true_fake, segmentation_run, separation_experiment,
    FourWayResult, SegmentationParams, SegmentationShape,
};
pub use svm::{svm_train, svm_train_binary, MulticlassSvm, PairMachine, SvmModel, SvmSettings};
pub use vectors::{VectorFamily, VectorFeature};

/// `exp(-|x1 - x2|^2 / (2 bandwidth^2))`.
pub fn gaussian_kernel_on_vectors(x1: &[f64], x2: &[f64], bandwidth: f64) -> Result<f64> {
    if x1.len() != x2.len() {
        return Err(param(format!("vector lengths differ: {} vs {}", x1.len(), x2.len())));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(param(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let d2: f64 = x1.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(math::exp(-d2 / (2.0 * bandwidth * bandwidth)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub repeat: usize,
    pub fold: usize,
    pub accuracy: f64,
    pub n_test: usize,
    /// Kernel descriptor and `C` chosen for this fold.
    pub selected: String,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub folds: Vec<FoldOutcome>,
    /// Arithmetic mean of the fold accuracies.
    pub mean: f64,
    /// Population standard deviation of the fold accuracies.
    pub std: f64,
    /// `confusion[truth][predicted]`, summed over all test folds.
    pub confusion: Vec<Vec<u64>>,
    pub f1: Vec<f64>,
    pub config: String,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl ExperimentResult {
    pub fn new(n_classes: usize, config: &str, seed: u64) -> Self {
        ExperimentResult {
            folds: Vec::new(),
            mean: 0.0,
            std: 0.0,
            confusion: vec![vec![0; n_classes]; n_classes],
            f1: vec![0.0; n_classes],
            config: config.into(),
            seed,
            warnings: Vec::new(),
        }
    }

    pub fn n_classes(&self) -> usize {
        self.confusion.len()
    }

    pub fn push_fold(&mut self, repeat: usize, fold: usize, truth: &[usize], pred: &[usize], selected: String, c: f64) {
        let mut hits = 0;
        for (&t, &p) in truth.iter().zip(pred) {
            self.confusion[t][p] += 1;
            hits += usize::from(t == p);
        }
        let accuracy = if truth.is_empty() { 0.0 } else { hits as f64 / truth.len() as f64 };
        self.folds.push(FoldOutcome { repeat, fold, accuracy, n_test: truth.len(), selected, c });
    }

    /// Recomputes mean, std and per-class F1 from the folds and confusion.
    pub fn finish(&mut self) {
        let n = self.folds.len();
        if n > 0 {
            self.mean = self.folds.iter().map(|f| f.accuracy).sum::<f64>() / n as f64;
            let var = self.folds.iter().map(|f| (f.accuracy - self.mean) * (f.accuracy - self.mean)).sum::<f64>() / n as f64;
            self.std = math::sqrt(var);
        }
        let k = self.n_classes();
        self.f1 = (0..k)
            .map(|c| {
                let tp = self.confusion[c][c] as f64;
                let fn_: f64 = self.confusion[c].iter().sum::<u64>() as f64 - tp;
                let fp: f64 = (0..k).map(|r| self.confusion[r][c]).sum::<u64>() as f64 - tp;
                let denom = 2.0 * tp + fp + fn_;
                if denom > 0.0 {
                    2.0 * tp / denom
                } else {
                    0.0
                }
            })
            .collect();
    }

    /// Overall fraction of correctly classified test items.
    pub fn pooled_accuracy(&self) -> f64 {
        let total: u64 = self.confusion.iter().flatten().sum();
        let hits: u64 = (0..self.n_classes()).map(|c| self.confusion[c][c]).sum();
        if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_kernel_values() {
        assert_eq!(gaussian_kernel_on_vectors(&[1.0, 2.0], &[1.0, 2.0], 0.3).unwrap(), 1.0);
        let v = gaussian_kernel_on_vectors(&[0.0, 0.0], &[0.6, 0.8], 1.0).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(
            gaussian_kernel_on_vectors(&[0.1, 3.0], &[2.0, -1.0], 2.0).unwrap(),
            gaussian_kernel_on_vectors(&[2.0, -1.0], &[0.1, 3.0], 2.0).unwrap()
        );
        assert!(gaussian_kernel_on_vectors(&[1.0], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn summary_statistics() {
        let mut r = ExperimentResult::new(2, "", 0);
        r.push_fold(0, 0, &[0, 0, 1, 1], &[0, 0, 1, 0], "k".into(), 1.0);
        r.push_fold(0, 1, &[0, 1], &[0, 1], "k".into(), 1.0);
        r.finish();
        assert_eq!(r.mean, (0.75 + 1.0) / 2.0);
        assert!((r.std - 0.125).abs() < 1e-15);
        assert_eq!(r.confusion, vec![vec![3, 0], vec![1, 2]]);
        assert!((r.f1[0] - 6.0 / 7.0).abs() < 1e-15);
        assert!((r.f1[1] - 0.8).abs() < 1e-15);
    }
}
