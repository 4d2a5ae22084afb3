//! Experiment stages: dataset, diagrams, transform, featurization and
//! cross-validated classification. Each stage reads and writes the staged
//! formats, so a pipeline can be stopped and resumed between stages with
//! bit-identical results.

use std::fs;
use std::path::Path;

use pairperm_core::diagrams::filter_kinds;
use pairperm_core::filtration::{FiltrationKind, VertexFunction};
use pairperm_core::graph::{make_sbm_dataset, LabeledDataset};
use pairperm_core::kernels::{base_matrix, BaseSpec, GramMatrix, KernelSpec};
use pairperm_core::learn::{
    confusion_4way, cross_validate, fake_diagrams, separation_experiment, ExperimentResult, PrecomputedGrams,
    VectorFamily,
};
use pairperm_core::linalg::Matrix;
use pairperm_core::persistence::{extended_pd, PersistenceDiagram, Provenance};
use pairperm_core::rng::derive_seed;

use crate::cache::{content_key, Cache};
use crate::config::{Config, DatasetConfig, Featurization};
use crate::error::{Error, Result};
use crate::formats::{self, LabelRow, LabeledMatrix, ResultRow};
use crate::tudataset::load_tudataset;

pub const CONFIG_FILE: &str = "config.toml";
pub const DIAGRAMS_FILE: &str = "diagrams.txt";
pub const LABELS_FILE: &str = "labels.csv";
pub const FUNCTIONS_FILE: &str = "functions.txt";
pub const RESULTS_FILE: &str = "results.csv";
pub const CONFUSION_FILE: &str = "confusion.csv";
pub const MERGED_FILE: &str = "confusion_merged.csv";
pub const FAILED_FILE: &str = "FAILED";

pub fn load_dataset(cfg: &Config) -> Result<LabeledDataset> {
    match &cfg.dataset {
        DatasetConfig::Sbm { count, noise } => Ok(make_sbm_dataset(*count, *noise, derive_seed(cfg.seed, "dataset", 0))?),
        DatasetConfig::Tudataset { path, name } => load_tudataset(path, name),
    }
}

/// Graph ids are 0-based positions in the dataset.
pub fn graph_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Extended diagrams (all four kinds) of every graph, cached under the
/// dataset content and filtration descriptor.
pub fn extended_diagrams(ds: &LabeledDataset, filtration: &FiltrationKind, cache: &Cache) -> Result<Vec<PersistenceDiagram>> {
    let graphs = formats::graphs_text(ds)?;
    let fname = filtration.name();
    let key = content_key(&[b"diagrams", graphs.as_bytes(), fname.as_bytes()]);
    if let Some(path) = cache.lookup("diagrams", &key) {
        return formats::read_diagrams(&path);
    }
    let ids = graph_ids(ds.len());
    let mut out = Vec::with_capacity(ds.len());
    for (g, id) in ds.graphs.iter().zip(ids) {
        let f = filtration.compute(g)?;
        let prov = Provenance { dataset: ds.name.clone(), graph_id: id, filtration: fname.clone(), fake: false };
        out.push(extended_pd(g, &f)?.with_provenance(prov));
    }
    cache.store("diagrams", &key, formats::diagrams_text(&out)?.as_bytes())?;
    Ok(out)
}

pub fn vertex_functions(ds: &LabeledDataset, filtration: &FiltrationKind) -> Result<Vec<VertexFunction>> {
    ds.graphs.iter().map(|g| filtration.compute(g).map_err(Error::from)).collect()
}

/// Keeps the configured kinds, then permutes when the mode is `fake`.
pub fn transform(cfg: &Config, full: &[PersistenceDiagram]) -> Result<Vec<PersistenceDiagram>> {
    let kinds = cfg.diagrams.point_kinds()?;
    let kept: Vec<PersistenceDiagram> = full.iter().map(|d| filter_kinds(d, &kinds)).collect();
    if cfg.diagrams.fake() {
        Ok(fake_diagrams(&kept, cfg.seed, cfg.diagrams.orientation()?))
    } else {
        Ok(kept)
    }
}

/// Everything classification needs, as produced by the diagrams stage.
#[derive(Debug, Clone, PartialEq)]
pub struct Staged {
    pub dataset: String,
    pub ids: Vec<String>,
    pub diagrams: Vec<PersistenceDiagram>,
    pub raw_labels: Vec<i64>,
    /// Present when the featurization needs vertex functions.
    pub functions: Option<Vec<VertexFunction>>,
}

fn needs_functions(cfg: &Config) -> bool {
    cfg.features.name() == "filvec"
}

pub fn diagrams_stage(cfg: &Config, cache: &Cache) -> Result<Staged> {
    let ds = load_dataset(cfg)?;
    let filtration = cfg.filtration()?;
    let full = extended_diagrams(&ds, &filtration, cache)?;
    let diagrams = transform(cfg, &full)?;
    let functions = if needs_functions(cfg) { Some(vertex_functions(&ds, &filtration)?) } else { None };
    Ok(Staged {
        dataset: ds.name.clone(),
        ids: graph_ids(ds.len()),
        diagrams,
        raw_labels: ds.labels.iter().map(|&l| ds.class_values[l]).collect(),
        functions,
    })
}

pub fn write_staged(dir: &Path, cfg: &Config, staged: &Staged) -> Result<()> {
    formats::write_file(&dir.join(CONFIG_FILE), cfg.snapshot().as_bytes())?;
    formats::write_diagrams(&dir.join(DIAGRAMS_FILE), &staged.diagrams)?;
    let labels: Vec<LabelRow> =
        staged.ids.iter().zip(&staged.raw_labels).map(|(id, &label)| LabelRow { id: id.clone(), label }).collect();
    formats::write_labels(&dir.join(LABELS_FILE), &labels)?;
    if let Some(f) = &staged.functions {
        formats::write_functions(&dir.join(FUNCTIONS_FILE), &staged.ids, f)?;
    }
    Ok(())
}

pub fn read_staged(dir: &Path, cfg: &Config) -> Result<Staged> {
    let diagrams = formats::read_diagrams(&dir.join(DIAGRAMS_FILE))?;
    let labels = formats::read_labels(&dir.join(LABELS_FILE))?;
    let ids: Vec<String> = diagrams.iter().map(|d| d.provenance.graph_id.clone()).collect();
    if labels.len() != diagrams.len() || labels.iter().zip(&ids).any(|(l, id)| &l.id != id) {
        return Err(Error::Config(format!("{}: labels do not match the staged diagrams", dir.display())));
    }
    let functions = if needs_functions(cfg) {
        let (fids, f) = formats::read_functions(&dir.join(FUNCTIONS_FILE))?;
        if fids != ids {
            return Err(Error::Config(format!("{}: functions do not match the staged diagrams", dir.display())));
        }
        Some(f)
    } else {
        None
    };
    Ok(Staged {
        dataset: diagrams.first().map(|d| d.provenance.dataset.clone()).unwrap_or_default(),
        ids,
        diagrams,
        raw_labels: labels.iter().map(|l| l.label).collect(),
        functions,
    })
}

/// Contiguous class indices in increasing order of the raw label.
pub fn class_indices(raw: &[i64]) -> (Vec<i64>, Vec<usize>) {
    let mut classes = raw.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let idx = raw.iter().map(|r| classes.binary_search(r).expect("present")).collect();
    (classes, idx)
}

/// Gram matrices of `specs` over `diagrams`, each cached under the diagram
/// content and kernel descriptor. Specs sharing a base quantity share one
/// base matrix, computed only if some Gram is missing.
pub fn kernel_grams(diagrams: &[PersistenceDiagram], specs: &[KernelSpec], cache: &Cache) -> Result<Vec<(String, Matrix)>> {
    let content = formats::diagrams_text(diagrams)?;
    let ids: Vec<String> = diagrams.iter().map(|d| d.provenance.graph_id.clone()).collect();
    let mut bases: Vec<(BaseSpec, Matrix)> = Vec::new();
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let descriptor = spec.descriptor();
        let key = content_key(&[b"gram", content.as_bytes(), descriptor.as_bytes()]);
        if let Some(path) = cache.lookup("gram", &key) {
            let m = formats::read_matrix(&path, formats::GRAM)?;
            out.push((m.descriptor, m.values));
            continue;
        }
        let b = spec.base();
        let pos = match bases.iter().position(|(x, _)| *x == b) {
            Some(p) => p,
            None => {
                bases.push((b, base_matrix(diagrams, b)));
                bases.len() - 1
            }
        };
        let g = GramMatrix::from_base(&bases[pos].1, spec, ids.clone())?;
        if cache.enabled() {
            let m = LabeledMatrix { descriptor: g.descriptor.clone(), ids: g.ids.clone(), values: g.values.clone() };
            cache.store("gram", &key, &formats::matrix_bytes(formats::GRAM, &m)?)?;
        }
        out.push((g.descriptor, g.values));
    }
    Ok(out)
}

/// Cross-validated classification of staged diagrams.
pub fn classify(cfg: &Config, staged: &Staged, cache: &Cache) -> Result<(ExperimentResult, Vec<i64>)> {
    let (classes, labels) = class_indices(&staged.raw_labels);
    let protocol = cfg.cv.protocol();
    let snapshot = cfg.snapshot();
    let result = match cfg.features.featurization()? {
        Featurization::Kernels(specs) => {
            let family = PrecomputedGrams::new(kernel_grams(&staged.diagrams, &specs, cache)?)?;
            if family.candidates().is_empty() {
                return Err(Error::Config("no kernel candidate has a usable Gram matrix".into()));
            }
            let mut r = cross_validate(&family, &labels, classes.len(), &protocol, cfg.seed, &snapshot)?;
            for (d, min) in &family.skipped {
                r.warnings.push(format!("skipped {d}: min eigenvalue {min:e}"));
            }
            r
        }
        Featurization::Vectors { features, bandwidths } => {
            let functions = staged.functions.as_deref().unwrap_or(&[]);
            let family = VectorFamily { diagrams: &staged.diagrams, functions, features, bandwidths };
            cross_validate(&family, &labels, classes.len(), &protocol, cfg.seed, &snapshot)?
        }
    };
    Ok((result, classes))
}

/// Labels of the result rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RowMeta {
    pub dataset: String,
    pub filtration: String,
    pub transform: String,
    pub featurization: String,
}

impl RowMeta {
    pub fn new(cfg: &Config, dataset: &str, transform: &str) -> Result<Self> {
        Ok(RowMeta {
            dataset: dataset.into(),
            filtration: cfg.filtration()?.name(),
            transform: transform.into(),
            featurization: cfg.features.name().into(),
        })
    }
}

pub fn result_rows(meta: &RowMeta, r: &ExperimentResult) -> Vec<ResultRow> {
    let row = |kind: &str, repeat: String, fold: String| ResultRow {
        dataset: meta.dataset.clone(),
        filtration: meta.filtration.clone(),
        transform: meta.transform.clone(),
        featurization: meta.featurization.clone(),
        row: kind.into(),
        repeat,
        fold,
        accuracy: 0.0,
        std: None,
        n_test: 0,
        selected: String::new(),
        c: None,
    };
    let mut rows: Vec<ResultRow> = r
        .folds
        .iter()
        .map(|f| ResultRow {
            accuracy: f.accuracy,
            n_test: f.n_test,
            selected: f.selected.clone(),
            c: Some(f.c),
            ..row("fold", f.repeat.to_string(), f.fold.to_string())
        })
        .collect();
    rows.push(ResultRow {
        accuracy: r.mean,
        std: Some(r.std),
        n_test: r.folds.iter().map(|f| f.n_test).sum(),
        ..row("summary", "all".into(), "all".into())
    });
    rows
}

pub fn write_result(dir: &Path, cfg: &Config, meta: &RowMeta, r: &ExperimentResult, classes: &[String]) -> Result<()> {
    formats::write_results(&dir.join(RESULTS_FILE), &cfg.snapshot(), &r.warnings, &result_rows(meta, r))?;
    formats::write_confusion(&dir.join(CONFUSION_FILE), classes, &r.confusion)
}

/// Runs `f`, leaving a `FAILED` marker with the error in `dir` if it fails.
/// Outputs written before the failure are kept.
pub fn with_failure_marker<T>(dir: &Path, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let marker = dir.join(FAILED_FILE);
    if marker.exists() {
        fs::remove_file(&marker).map_err(|e| Error::write(&marker, e))?;
    }
    let out = f();
    if let Err(e) = &out {
        formats::write_file(&marker, format!("{e}\n").as_bytes())?;
    }
    out
}

fn raw_names(classes: &[i64]) -> Vec<String> {
    classes.iter().map(i64::to_string).collect()
}

/// The whole classification pipeline into `dir`.
pub fn run(cfg: &Config, dir: &Path, cache: &Cache) -> Result<ExperimentResult> {
    with_failure_marker(dir, || {
        cfg.validate()?;
        let staged = diagrams_stage(cfg, cache)?;
        write_staged(dir, cfg, &staged)?;
        classify_into(cfg, &staged, dir, cache)
    })
}

/// Classification of staged diagrams into `dir`.
pub fn classify_into(cfg: &Config, staged: &Staged, dir: &Path, cache: &Cache) -> Result<ExperimentResult> {
    let (r, classes) = classify(cfg, staged, cache)?;
    let meta = RowMeta::new(cfg, &staged.dataset, cfg.transform())?;
    write_result(dir, cfg, &meta, &r, &raw_names(&classes))?;
    Ok(r)
}

fn kernel_specs(cfg: &Config, what: &str) -> Result<Vec<KernelSpec>> {
    match cfg.features.featurization()? {
        Featurization::Kernels(specs) => Ok(specs),
        Featurization::Vectors { .. } => Err(Error::Config(format!("{what} needs a kernel featurization"))),
    }
}

/// True diagrams (configured kinds, never permuted) of the dataset.
fn true_diagrams(cfg: &Config, cache: &Cache) -> Result<(LabeledDataset, Vec<PersistenceDiagram>)> {
    let ds = load_dataset(cfg)?;
    let full = extended_diagrams(&ds, &cfg.filtration()?, cache)?;
    let kinds = cfg.diagrams.point_kinds()?;
    let dgs = full.iter().map(|d| filter_kinds(d, &kinds)).collect();
    Ok((ds, dgs))
}

/// True against permuted diagrams of the same graphs.
pub fn separate(cfg: &Config, dir: &Path, cache: &Cache) -> Result<ExperimentResult> {
    with_failure_marker(dir, || {
        cfg.validate()?;
        let specs = kernel_specs(cfg, "separate")?;
        let (ds, dgs) = true_diagrams(cfg, cache)?;
        formats::write_file(&dir.join(CONFIG_FILE), cfg.snapshot().as_bytes())?;
        let r = separation_experiment(&dgs, &specs, &cfg.cv.protocol(), cfg.seed, &cfg.snapshot())?;
        let meta = RowMeta::new(cfg, &ds.name, "true-vs-fake")?;
        write_result(dir, cfg, &meta, &r, &["true".into(), "fake".into()])?;
        Ok(r)
    })
}

/// Four classes: each original class, true or permuted.
pub fn confuse4(cfg: &Config, dir: &Path, cache: &Cache) -> Result<ExperimentResult> {
    with_failure_marker(dir, || {
        cfg.validate()?;
        let specs = kernel_specs(cfg, "confuse4")?;
        let (ds, dgs) = true_diagrams(cfg, cache)?;
        if ds.n_classes() != 2 {
            return Err(Error::Config(format!("confuse4 needs a binary dataset, {} has {} classes", ds.name, ds.n_classes())));
        }
        formats::write_file(&dir.join(CONFIG_FILE), cfg.snapshot().as_bytes())?;
        let four = confusion_4way(&dgs, &ds.labels, &specs, &cfg.cv.protocol(), cfg.seed, &cfg.snapshot())?;
        let names: Vec<String> = ds.class_values.iter().map(i64::to_string).collect();
        let classes: Vec<String> = names.iter().flat_map(|n| [format!("{n}+true"), format!("{n}+fake")]).collect();
        let meta = RowMeta::new(cfg, &ds.name, "4way")?;
        write_result(dir, cfg, &meta, &four.result, &classes)?;
        let merged: Vec<Vec<u64>> = four.merged.iter().map(|r| r.to_vec()).collect();
        formats::write_confusion(&dir.join(MERGED_FILE), &names, &merged)?;
        Ok(four.result)
    })
}
