//! Stratified folds and nested cross-validation over kernel families.

use alloc::borrow::Cow;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::svm::{svm_train, SvmSettings};
use super::ExperimentResult;
use crate::error::{param, Error, Result};
use crate::kernels::{base_matrix, BaseSpec, GramMatrix, KernelSpec};
use crate::linalg::{repair_psd, Matrix};
use crate::persistence::PersistenceDiagram;
use crate::rng::{derive_seed, rng_from_seed};

/// A train/test split. Construction checks that the two index sets are
/// disjoint, so a fold can never leak test items into fitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    repeat: usize,
    index: usize,
    train: Vec<usize>,
    test: Vec<usize>,
}

impl Fold {
    pub fn from_indices(mut train: Vec<usize>, mut test: Vec<usize>) -> Result<Self> {
        train.sort_unstable();
        test.sort_unstable();
        if train.windows(2).any(|w| w[0] == w[1]) || test.windows(2).any(|w| w[0] == w[1]) {
            return Err(param("fold indices must be distinct"));
        }
        let (mut i, mut j) = (0, 0);
        while i < train.len() && j < test.len() {
            if train[i] == test[j] {
                return Err(param(format!("leakage: item {} is in both train and test", train[i])));
            }
            if train[i] < test[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(Fold { repeat: 0, index: 0, train, test })
    }

    pub fn train(&self) -> &[usize] {
        &self.train
    }

    pub fn test(&self) -> &[usize] {
        &self.test
    }

    pub fn repeat(&self) -> usize {
        self.repeat
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratifiedSplit {
    pub folds: Vec<Fold>,
    /// Fold count actually used.
    pub k: usize,
    pub warning: Option<String>,
}

/// `k` stratified folds over `items` (global indices) with labels
/// `labels[item]`. Each class is shuffled and dealt round-robin, the deal
/// continuing across classes so fold sizes differ by at most one. When the
/// smallest class has fewer than `k` members the fold count is reduced to
/// that size and a warning is returned.
pub fn stratified_folds(items: &[usize], labels: &[usize], k: usize, seed: u64) -> Result<StratifiedSplit> {
    if k < 2 {
        return Err(param("at least 2 folds are needed"));
    }
    let n_classes = items.iter().map(|&i| labels[i] + 1).max().unwrap_or(0);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for &i in items {
        members[labels[i]].push(i);
    }
    members.retain(|m| !m.is_empty());
    let smallest = members.iter().map(Vec::len).min().unwrap_or(0);
    if smallest < 2 {
        return Err(Error::Labels(format!("a class has {smallest} member(s); stratified folds need at least 2")));
    }
    let (k, warning) = if smallest < k {
        (smallest, Some(format!("smallest class has {smallest} members; using {smallest} folds instead of {k}")))
    } else {
        (k, None)
    };
    let mut rng = rng_from_seed(seed);
    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut slot = 0;
    for m in &mut members {
        m.shuffle(&mut rng);
        for &i in m.iter() {
            tests[slot].push(i);
            slot = (slot + 1) % k;
        }
    }
    let mut folds = Vec::with_capacity(k);
    for (f, test) in tests.iter().enumerate() {
        let train: Vec<usize> = tests.iter().enumerate().filter(|&(g, _)| g != f).flat_map(|(_, t)| t.iter().copied()).collect();
        let mut fold = Fold::from_indices(train, test.clone())?;
        fold.index = f;
        folds.push(fold);
    }
    Ok(StratifiedSplit { folds, k, warning })
}

/// Kernel matrices of one hyperparameter candidate on one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldKernels {
    pub descriptor: String,
    /// `train x train`, rows in `fold.train()` order.
    pub train: Matrix,
    /// `test x train`.
    pub test: Matrix,
    /// Whether `train` may be indefinite and must pass `repair_psd` first.
    pub needs_repair: bool,
}

/// A family of kernels indexed by hyperparameter candidates, grouped so
/// that candidates sharing a fitted transform are produced together.
/// Implementations may fit data-dependent transforms (histogram ranges,
/// image extents) on `fold.train()` only.
pub trait KernelFamily {
    fn groups(&self) -> usize;
    /// Number of candidates produced by `fold_kernels(group, _)`.
    fn group_size(&self, group: usize) -> usize;
    fn fold_kernels(&self, group: usize, fold: &Fold) -> Result<Vec<FoldKernels>>;
}

/// Full Gram matrices computed once; folds are sub-blocks. Valid for
/// kernels without fitted parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecomputedGrams {
    candidates: Vec<(String, Matrix)>,
    /// Candidates dropped because their Gram was not repairable, with the
    /// offending minimum eigenvalue.
    pub skipped: Vec<(String, f64)>,
}

impl PrecomputedGrams {
    /// Every Gram goes through `repair_psd` once; principal sub-blocks of a
    /// PSD matrix are PSD, so folds need no further check.
    pub fn new(candidates: Vec<(String, Matrix)>) -> Result<Self> {
        let mut kept = Vec::with_capacity(candidates.len());
        let mut skipped = Vec::new();
        for (descriptor, g) in candidates {
            match repair_psd(&g) {
                Ok(m) => kept.push((descriptor, m)),
                Err(Error::NotPsd { min_eigenvalue }) => skipped.push((descriptor, min_eigenvalue)),
                Err(e) => return Err(e),
            }
        }
        Ok(PrecomputedGrams { candidates: kept, skipped })
    }

    /// Grams of every spec over `items`; specs sharing a base quantity
    /// (e.g. sliced Wasserstein at several bandwidths) share one base
    /// matrix.
    pub fn from_specs(items: &[PersistenceDiagram], specs: &[KernelSpec]) -> Result<Self> {
        let mut bases: Vec<(BaseSpec, Matrix)> = Vec::new();
        let mut candidates = Vec::with_capacity(specs.len());
        for spec in specs {
            spec.validate()?;
            let b = spec.base();
            let pos = match bases.iter().position(|(x, _)| *x == b) {
                Some(p) => p,
                None => {
                    bases.push((b, base_matrix(items, b)));
                    bases.len() - 1
                }
            };
            let g = GramMatrix::from_base(&bases[pos].1, spec, Vec::new())?;
            candidates.push((g.descriptor, g.values));
        }
        Self::new(candidates)
    }

    pub fn candidates(&self) -> &[(String, Matrix)] {
        &self.candidates
    }
}

impl KernelFamily for PrecomputedGrams {
    fn groups(&self) -> usize {
        self.candidates.len()
    }

    fn group_size(&self, _group: usize) -> usize {
        1
    }

    fn fold_kernels(&self, group: usize, fold: &Fold) -> Result<Vec<FoldKernels>> {
        let (descriptor, g) = &self.candidates[group];
        Ok(vec![FoldKernels {
            descriptor: descriptor.clone(),
            train: g.select(fold.train(), fold.train()),
            test: g.select(fold.test(), fold.train()),
            needs_repair: false,
        }])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvProtocol {
    pub outer_folds: usize,
    pub repeats: usize,
    /// Inner folds for model selection on each outer training split.
    pub inner_folds: usize,
    pub c_grid: Vec<f64>,
    pub svm: SvmSettings,
}

impl Default for CvProtocol {
    fn default() -> Self {
        CvProtocol {
            outer_folds: 10,
            repeats: 10,
            inner_folds: 10,
            c_grid: crate::kernels::grids::SVM_C.to_vec(),
            svm: SvmSettings::default(),
        }
    }
}

impl CvProtocol {
    pub fn validate(&self) -> Result<()> {
        if self.outer_folds < 2 || self.inner_folds < 2 || self.repeats == 0 {
            return Err(param("cross-validation needs >= 2 folds and >= 1 repeat"));
        }
        if self.c_grid.is_empty() || self.c_grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(param("C grid must be non-empty and positive"));
        }
        Ok(())
    }

    pub fn descriptor(&self) -> String {
        format!(
            "cv(outer={},repeats={},inner={},C={:?},tol={},max_evals={})",
            self.outer_folds, self.repeats, self.inner_folds, self.c_grid, self.svm.tol, self.svm.max_kernel_evals
        )
    }
}

/// The training block ready for the solver, or `None` if it is not
/// repairable.
fn usable_train(k: &FoldKernels) -> Result<Option<Cow<'_, Matrix>>> {
    if !k.needs_repair {
        return Ok(Some(Cow::Borrowed(&k.train)));
    }
    match repair_psd(&k.train) {
        Ok(m) => Ok(Some(Cow::Owned(m))),
        Err(Error::NotPsd { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Trains on the fold's training block and predicts its test items.
/// Returns `None` when the solver does not converge.
fn fit_predict(
    k: &FoldKernels,
    train: &Matrix,
    fold: &Fold,
    labels: &[usize],
    n_classes: usize,
    c: f64,
    settings: &SvmSettings,
) -> Result<Option<Vec<usize>>> {
    let y: Vec<usize> = fold.train().iter().map(|&i| labels[i]).collect();
    let model = match svm_train(train, &y, n_classes, c, &k.descriptor, settings) {
        Ok(m) => m,
        Err(Error::NotConverged { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some((0..fold.test().len()).map(|t| model.predict(k.test.row(t))).collect()))
}

/// Selected hyperparameters: (group, candidate within group, C).
pub(crate) type Choice = (usize, usize, f64);

/// Grid search scored by pooled accuracy over `inner` folds; ties keep
/// the earliest candidate. A candidate failing on any inner fold is
/// dropped.
pub(crate) fn select(
    family: &dyn KernelFamily,
    inner: &[Fold],
    labels: &[usize],
    n_classes: usize,
    c_grid: &[f64],
    settings: &SvmSettings,
) -> Result<Choice> {
    let mut best: Option<(usize, Choice)> = None;
    for g in 0..family.groups() {
        let mut scores: Vec<Vec<Option<usize>>> = vec![vec![Some(0); c_grid.len()]; family.group_size(g)];
        for fold in inner {
            let kernels = family.fold_kernels(g, fold)?;
            for (ci, k) in kernels.iter().enumerate() {
                if scores[ci].iter().all(Option::is_none) {
                    continue;
                }
                let Some(train) = usable_train(k)? else {
                    scores[ci].iter_mut().for_each(|s| *s = None);
                    continue;
                };
                for (cj, &c) in c_grid.iter().enumerate() {
                    let Some(prev) = scores[ci][cj] else { continue };
                    scores[ci][cj] = fit_predict(k, &train, fold, labels, n_classes, c, settings)?
                        .map(|pred| prev + pred.iter().zip(fold.test()).filter(|(p, &i)| **p == labels[i]).count());
                }
            }
        }
        for (ci, row) in scores.iter().enumerate() {
            for (cj, s) in row.iter().enumerate() {
                if let Some(s) = *s {
                    if best.is_none_or(|(b, _)| s > b) {
                        best = Some((s, (g, ci, c_grid[cj])));
                    }
                }
            }
        }
    }
    best.map(|(_, choice)| choice)
        .ok_or_else(|| Error::Internal("no hyperparameter candidate produced a usable model".into()))
}

fn single_choice(family: &dyn KernelFamily, c_grid: &[f64]) -> Option<Choice> {
    (family.groups() == 1 && family.group_size(0) == 1 && c_grid.len() == 1).then(|| (0, 0, c_grid[0]))
}

/// Refits `choice` on `fold.train()` and predicts `fold.test()`. Returns
/// the predictions and the candidate descriptor.
pub(crate) fn evaluate(
    family: &dyn KernelFamily,
    fold: &Fold,
    choice: Choice,
    labels: &[usize],
    n_classes: usize,
    settings: &SvmSettings,
) -> Result<(Vec<usize>, String)> {
    let (g, ci, c) = choice;
    let kernels = family.fold_kernels(g, fold)?;
    let k = &kernels[ci];
    let fitted = match usable_train(k)? {
        Some(train) => fit_predict(k, &train, fold, labels, n_classes, c, settings)?,
        None => None,
    };
    let pred = fitted.ok_or_else(|| {
        Error::Internal(format!("selected candidate {} (C={c}) failed on the full training split", k.descriptor))
    })?;
    Ok((pred, format!("{};C={c}", k.descriptor)))
}

/// Selection on `inner` folds (skipped when the grid has one point), then
/// refit and prediction on `fold`.
pub(crate) fn select_and_evaluate(
    family: &dyn KernelFamily,
    fold: &Fold,
    inner: impl FnOnce() -> Result<Vec<Fold>>,
    labels: &[usize],
    n_classes: usize,
    c_grid: &[f64],
    settings: &SvmSettings,
) -> Result<(Vec<usize>, String, f64)> {
    let choice = match single_choice(family, c_grid) {
        Some(choice) => choice,
        None => select(family, &inner()?, labels, n_classes, c_grid, settings)?,
    };
    let (pred, descriptor) = evaluate(family, fold, choice, labels, n_classes, settings)?;
    Ok((pred, descriptor, choice.2))
}

/// Repeated stratified k-fold cross-validation. On every outer split the
/// kernel candidate and `C` are chosen by an inner stratified CV on the
/// training part only, then the model is refit on the whole training part
/// and scored on the test part.
pub fn cross_validate(
    family: &dyn KernelFamily,
    labels: &[usize],
    n_classes: usize,
    protocol: &CvProtocol,
    seed: u64,
    config: &str,
) -> Result<ExperimentResult> {
    protocol.validate()?;
    if family.groups() == 0 {
        return Err(param("kernel family has no candidates"));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(Error::Labels(format!("label {bad} out of range for {n_classes} classes")));
    }
    let all: Vec<usize> = (0..labels.len()).collect();
    let mut result = ExperimentResult::new(n_classes, config, seed);
    for repeat in 0..protocol.repeats {
        let split = stratified_folds(&all, labels, protocol.outer_folds, derive_seed(seed, "outer", repeat as u64))?;
        if let Some(w) = &split.warning {
            if repeat == 0 {
                result.warnings.push(w.clone());
            }
        }
        for mut fold in split.folds {
            fold.repeat = repeat;
            let inner_seed = derive_seed(seed, "inner", (repeat * split.k + fold.index) as u64);
            let inner = || stratified_folds(fold.train(), labels, protocol.inner_folds, inner_seed).map(|s| s.folds);
            let (pred, selected, c) =
                select_and_evaluate(family, &fold, inner, labels, n_classes, &protocol.c_grid, &protocol.svm)?;
            let truth: Vec<usize> = fold.test().iter().map(|&i| labels[i]).collect();
            result.push_fold(repeat, fold.index, &truth, &pred, selected, c);
        }
    }
    result.finish();
    Ok(result)
}
