//! Command-line interface. Every subcommand reads and writes the staged
//! formats, so pipelines can be split at any stage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pairperm_core::diagrams::{bottleneck, wasserstein_p};
use pairperm_core::features::ImageWeight;
use pairperm_core::graph::{dumbbell_mesh, DumbbellParams, TriangleMesh};
use pairperm_core::kernels::{base_matrix, kernel_distance, GramMatrix, KernelSpec, DEFAULT_SLICES};
use pairperm_core::learn::{
    fake_diagrams, geodesic_vertex_diagrams, segmentation_run, ExperimentResult, SegmentationParams, SegmentationShape,
    SvmSettings, VectorFamily, VectorFeature,
};
use pairperm_core::kernels::grids;
use pairperm_core::linalg::Matrix;
use pairperm_core::persistence::PersistenceDiagram;
use pairperm_core::rng::derive_seed;

use crate::cache::Cache;
use crate::config::{parse_orientation, Config, DatasetConfig, FeatureConfig, FiltrationConfig, OutputConfig};
use crate::error::{Error, Result};
use crate::formats::{self, FeatureTable, LabeledMatrix, ReportRow, ResultRow};
use crate::off::load_off;
use crate::pipeline::{self, RowMeta};

#[derive(Debug, Parser)]
#[command(name = "pairperm", version, about = "Persistence diagrams of graph filtrations, permutation tests and kernel SVM experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagrams and cross-validated classification in one go.
    Run(ConfigArgs),
    /// Dataset, filtration and diagram transform; writes the staged files.
    Diagrams(ConfigArgs),
    /// Cross-validated classification of staged diagrams.
    Classify(ClassifyArgs),
    /// Permuted (fake) copies of a diagram file.
    Permute(PermuteArgs),
    /// Vectorizes a diagram file.
    Featurize(FeaturizeArgs),
    /// Gram matrix of one kernel over a diagram file.
    Gram(GramArgs),
    /// Pairwise distance matrix over a diagram file.
    Distance(DistanceArgs),
    /// Classifies true against permuted diagrams.
    Separate(ConfigArgs),
    /// Four-way classification: each class, true or permuted.
    Confuse4(ConfigArgs),
    /// Per-vertex mesh segmentation from geodesic diagrams.
    Segment(SegmentArgs),
    /// True against permuted accuracy table from result files.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML config; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `sbm` or `tudataset`.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Number of SBM graphs.
    #[arg(long)]
    pub count: Option<usize>,
    /// SBM label noise.
    #[arg(long)]
    pub noise: Option<f64>,
    /// TUDataset directory.
    #[arg(long)]
    pub path: Option<PathBuf>,
    /// TUDataset name (file prefix).
    #[arg(long)]
    pub name: Option<String>,
    /// degree, closeness, fiedler_s or ricci.
    #[arg(long)]
    pub filtration: Option<String>,
    /// Ricci idleness.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Ricci vertex reduction: mean, min or max.
    #[arg(long)]
    pub reduction: Option<String>,
    /// sw, pss, pwg, pf, pervec, filvec, landscape or image.
    #[arg(long)]
    pub feat: Option<String>,
    /// Classify permuted diagrams.
    #[arg(long)]
    pub permute: bool,
    /// Diagram kinds to keep, e.g. ord0,rel1,ext0,ext1.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<String>>,
    /// Histogram lengths for pervec/filvec.
    #[arg(long, value_delimiter = ',')]
    pub bins: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub outer: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub inner: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn table_value(name: &str, fields: &[(&str, String)]) -> String {
    let mut t = format!("name = \"{name}\"\n");
    for (k, v) in fields {
        t += &format!("{k} = {v}\n");
    }
    t
}

impl ConfigArgs {
    /// The validated config: file (or SBM defaults) plus flag overrides.
    pub fn resolve(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::new(DatasetConfig::Sbm { count: 1000, noise: 0.0 }),
        };
        if let Some(kind) = &self.dataset {
            cfg.dataset = match kind.as_str() {
                "sbm" => DatasetConfig::Sbm { count: 1000, noise: 0.0 },
                "tudataset" => DatasetConfig::Tudataset {
                    path: self.path.clone().ok_or_else(|| Error::Config("--dataset tudataset needs --path".into()))?,
                    name: self.name.clone().ok_or_else(|| Error::Config("--dataset tudataset needs --name".into()))?,
                },
                other => return Err(Error::Config(format!("unknown dataset kind `{other}`"))),
            };
        }
        match &mut cfg.dataset {
            DatasetConfig::Sbm { count, noise } => {
                if let Some(c) = self.count {
                    *count = c;
                }
                if let Some(x) = self.noise {
                    *noise = x;
                }
                if self.path.is_some() || self.name.is_some() {
                    return Err(Error::Config("--path/--name apply to tudataset only".into()));
                }
            }
            DatasetConfig::Tudataset { path, name } => {
                if self.count.is_some() || self.noise.is_some() {
                    return Err(Error::Config("--count/--noise apply to sbm only".into()));
                }
                if let Some(p) = &self.path {
                    *path = p.clone();
                }
                if let Some(n) = &self.name {
                    *name = n.clone();
                }
            }
        }
        if self.filtration.is_some() || self.alpha.is_some() || self.reduction.is_some() {
            let name = match (&self.filtration, &cfg.filtration) {
                (Some(n), _) => n.clone(),
                (None, FiltrationConfig::Ricci { .. }) => "ricci".into(),
                (None, _) => return Err(Error::Config("--alpha/--reduction apply to the ricci filtration".into())),
            };
            let mut fields = Vec::new();
            if let Some(a) = self.alpha {
                fields.push(("alpha", format!("{a:?}")));
            }
            if let Some(r) = &self.reduction {
                fields.push(("reduction", format!("\"{r}\"")));
            }
            cfg.filtration = toml::from_str(&table_value(&name, &fields))
                .map_err(|e| Error::Config(format!("filtration `{name}`: {e}")))?;
        }
        if let Some(f) = &self.feat {
            cfg.features = FeatureConfig::by_name(f)?;
        }
        if let Some(b) = &self.bins {
            match &mut cfg.features {
                FeatureConfig::Pervec { bins, .. } | FeatureConfig::Filvec { bins, .. } => *bins = b.clone(),
                other => return Err(Error::Config(format!("--bins applies to pervec/filvec, not {}", other.name()))),
            }
        }
        if self.permute {
            cfg.diagrams.mode = "fake".into();
        }
        if let Some(k) = &self.kinds {
            cfg.diagrams.kinds = k.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(v) = self.outer {
            cfg.cv.outer_folds = v;
        }
        if let Some(v) = self.repeats {
            cfg.cv.repeats = v;
        }
        if let Some(v) = self.inner {
            cfg.cv.inner_folds = v;
        }
        if let Some(o) = &self.out {
            cfg.output = Some(OutputConfig { dir: o.clone() });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Directory written by `diagrams`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Overrides; the config defaults to the staged `config.toml`.
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct PermuteArgs {
    #[arg(long)]
    pub diagrams: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// by_kind or unoriented.
    #[arg(long, default_value = "by_kind")]
    pub orientation: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VectorArgs {
    /// pervec, filvec, landscape or image.
    #[arg(long, default_value = "image")]
    pub feature: String,
    /// Histogram length (pervec, filvec) or landscape sample count.
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long, default_value_t = 5)]
    pub k_max: usize,
    #[arg(long, default_value_t = 20)]
    pub resolution: usize,
    /// Persistence-image Gaussian width.
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Persistence-image weight: death or persistence.
    #[arg(long, default_value = "death")]
    pub weight: String,
}

impl VectorArgs {
    pub fn feature(&self) -> Result<VectorFeature> {
        Ok(match self.feature.as_str() {
            "pervec" => VectorFeature::Pervec { bins: self.bins },
            "filvec" => VectorFeature::Filvec { bins: self.bins },
            "landscape" => VectorFeature::Landscape { k_max: self.k_max, bins: self.bins },
            "image" => VectorFeature::Image {
                resolution: self.resolution,
                bandwidth: self.sigma,
                weight: ImageWeight::parse(&self.weight)
                    .ok_or_else(|| Error::Config(format!("unknown image weight `{}`", self.weight)))?,
            },
            other => return Err(Error::Config(format!("unknown vector feature `{other}`"))),
        })
    }
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub diagrams: PathBuf,
    /// Vertex functions, needed by filvec.
    #[arg(long)]
    pub functions: Option<PathBuf>,
    #[command(flatten)]
    pub vector: VectorArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// sw, pss, pwg or pf.
    #[arg(long, default_value = "sw")]
    pub kernel: String,
    /// Outer bandwidth: sigma for sw, tau for pwg.
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth: f64,
    #[arg(long, default_value_t = DEFAULT_SLICES)]
    pub slices: usize,
    /// Scale for pss and pf.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Smoothing for pf.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Use the unsquared embedding distance in pwg.
    #[arg(long)]
    pub unsquared: bool,
}

impl KernelArgs {
    pub fn spec(&self) -> Result<KernelSpec> {
        let spec = match self.kernel.as_str() {
            "sw" => KernelSpec::Sw { sigma: self.bandwidth, slices: self.slices },
            "pss" => KernelSpec::Pss { t: self.t },
            "pwg" => KernelSpec::Pwg { rho: self.rho, k_w: self.k, p_w: self.p, tau: self.bandwidth, squared: !self.unsquared },
            "pf" => KernelSpec::Pf { t: self.t, tau: self.tau },
            other => return Err(Error::Config(format!("unknown kernel `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct GramArgs {
    #[arg(long)]
    pub diagrams: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub diagrams: PathBuf,
    /// bottleneck, wasserstein or kernel.
    #[arg(long, default_value = "bottleneck")]
    pub metric: String,
    /// Wasserstein order.
    #[arg(long = "order", default_value_t = 2.0)]
    pub order: f64,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Synthetic dumbbell shapes, used when no meshes are given.
    #[arg(long, default_value_t = 6)]
    pub shapes: usize,
    /// Radial jitter of the dumbbells.
    #[arg(long, default_value_t = 0.15)]
    pub jitter: f64,
    /// OFF meshes; each needs a matching `--labels` file.
    #[arg(long)]
    pub mesh: Vec<PathBuf>,
    /// One integer segment label per vertex and line.
    #[arg(long)]
    pub labels: Vec<PathBuf>,
    #[command(flatten)]
    pub vector: VectorArgs,
    #[arg(long)]
    pub permute: bool,
    #[arg(long, value_delimiter = ',')]
    pub bandwidths: Option<Vec<f64>>,
    #[arg(long = "c", value_delimiter = ',')]
    pub c_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Result files written by run, classify or separate.
    #[arg(long, required = true, num_args = 1..)]
    pub results: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

fn summary(r: &ExperimentResult) -> String {
    let mut s = format!("accuracy {:.4} +- {:.4} over {} folds", r.mean, r.std, r.folds.len());
    for w in &r.warnings {
        s += &format!("\nwarning: {w}");
    }
    s
}

/// Symmetric matrix over `ids`, each unordered pair evaluated once.
fn square(descriptor: String, ids: Vec<String>, f: impl Fn(usize, usize) -> Result<f64>) -> Result<LabeledMatrix> {
    let n = ids.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = f(i, j)?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(LabeledMatrix { descriptor, ids, values: m })
}

fn ids_of(diagrams: &[PersistenceDiagram]) -> Vec<String> {
    diagrams.iter().map(|d| d.provenance.graph_id.clone()).collect()
}

fn read_vertex_labels(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.trim().parse().map_err(|_| Error::format(path, i + 1, format!("bad label `{l}`"))))
        .collect()
}

fn segmentation_shapes(args: &SegmentArgs) -> Result<(String, Vec<SegmentationShape>)> {
    let mut meshes: Vec<(TriangleMesh, Vec<usize>)> = Vec::new();
    let name = if args.mesh.is_empty() {
        if !args.labels.is_empty() {
            return Err(Error::Config("--labels needs matching --mesh files".into()));
        }
        let params = DumbbellParams { jitter: args.jitter, ..DumbbellParams::default() };
        for s in 0..args.shapes {
            meshes.push(dumbbell_mesh(&params, derive_seed(args.seed, "dumbbell", s as u64))?);
        }
        "dumbbell"
    } else {
        if args.mesh.len() != args.labels.len() {
            return Err(Error::Config("every --mesh needs one --labels file".into()));
        }
        for (m, l) in args.mesh.iter().zip(&args.labels) {
            meshes.push((load_off(m)?, read_vertex_labels(l)?));
        }
        "meshes"
    };
    let shapes = meshes
        .iter()
        .map(|(mesh, labels)| {
            Ok(SegmentationShape { diagrams: geodesic_vertex_diagrams(mesh)?, labels: labels.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name.into(), shapes))
}

fn report_rows(files: &[PathBuf]) -> Result<Vec<ReportRow>> {
    let mut rows: Vec<ReportRow> = Vec::new();
    for f in files {
        for r in formats::read_results(f)?.into_iter().filter(|r| r.row == "summary") {
            let ResultRow { dataset, filtration, featurization, transform, accuracy, std, .. } = r;
            let pos = rows
                .iter()
                .position(|x| x.dataset == dataset && x.filtration == filtration && x.featurization == featurization);
            let row = match pos {
                Some(p) => &mut rows[p],
                None => {
                    rows.push(ReportRow {
                        dataset,
                        filtration,
                        featurization,
                        true_accuracy: None,
                        true_std: None,
                        permuted_accuracy: None,
                        permuted_std: None,
                        difference: None,
                    });
                    rows.last_mut().expect("just pushed")
                }
            };
            match transform.as_str() {
                "true" => (row.true_accuracy, row.true_std) = (Some(accuracy), std),
                "permuted" => (row.permuted_accuracy, row.permuted_std) = (Some(accuracy), std),
                _ => {}
            }
        }
    }
    for r in &mut rows {
        r.difference = r.true_accuracy.zip(r.permuted_accuracy).map(|(t, p)| t - p);
    }
    Ok(rows)
}

fn out_dir(cfg: &Config) -> PathBuf {
    cfg.output_dir()
}

/// Runs one parsed command.
pub fn execute(cli: Cli) -> Result<String> {
    let cache = Cache::from_env();
    match cli.command {
        Command::Run(a) => {
            let cfg = a.resolve()?;
            let r = pipeline::run(&cfg, &out_dir(&cfg), &cache)?;
            Ok(summary(&r))
        }
        Command::Diagrams(a) => {
            let cfg = a.resolve()?;
            let dir = out_dir(&cfg);
            pipeline::with_failure_marker(&dir, || {
                let staged = pipeline::diagrams_stage(&cfg, &cache)?;
                pipeline::write_staged(&dir, &cfg, &staged)?;
                Ok(format!("{} diagrams written to {}", staged.diagrams.len(), dir.display()))
            })
        }
        Command::Classify(a) => {
            let mut args = a.config.clone();
            if args.config.is_none() {
                args.config = Some(a.input.join(pipeline::CONFIG_FILE));
            }
            if args.out.is_none() {
                args.out = Some(a.input.clone());
            }
            let cfg = args.resolve()?;
            let dir = out_dir(&cfg);
            let r = pipeline::with_failure_marker(&dir, || {
                let staged = pipeline::read_staged(&a.input, &cfg)?;
                pipeline::classify_into(&cfg, &staged, &dir, &cache)
            })?;
            Ok(summary(&r))
        }
        Command::Permute(a) => {
            let orientation = parse_orientation(&a.orientation)?;
            let dgs = formats::read_diagrams(&a.diagrams)?;
            formats::write_diagrams(&a.out, &fake_diagrams(&dgs, a.seed, orientation))?;
            Ok(format!("{} permuted diagrams written to {}", dgs.len(), a.out.display()))
        }
        Command::Featurize(a) => {
            let dgs = formats::read_diagrams(&a.diagrams)?;
            let feature = a.vector.feature()?;
            let functions = match &a.functions {
                Some(p) => formats::read_functions(p)?.1,
                None => Vec::new(),
            };
            let family = VectorFamily { diagrams: &dgs, functions: &functions, features: vec![feature], bandwidths: Vec::new() };
            let all: Vec<usize> = (0..dgs.len()).collect();
            let rows = family.vectors(&feature, &all, &all)?;
            let descriptor = serde_json::json!({ "feature": feature.descriptor(), "fitted_on": "all items", "items": dgs.len() });
            formats::write_features(&a.out, &FeatureTable { descriptor, ids: ids_of(&dgs), rows })?;
            Ok(format!("features written to {}", a.out.display()))
        }
        Command::Gram(a) => {
            let dgs = formats::read_diagrams(&a.diagrams)?;
            let spec = a.kernel.spec()?;
            let g = GramMatrix::from_base(&base_matrix(&dgs, spec.base()), &spec, ids_of(&dgs))?;
            let m = LabeledMatrix { descriptor: g.descriptor, ids: g.ids, values: g.values };
            formats::write_matrix(&a.out, formats::GRAM, &m)?;
            Ok(format!("{}x{} gram written to {}", m.ids.len(), m.ids.len(), a.out.display()))
        }
        Command::Distance(a) => {
            let dgs = formats::read_diagrams(&a.diagrams)?;
            let ids = ids_of(&dgs);
            let m = match a.metric.as_str() {
                "bottleneck" => square("bottleneck".into(), ids, |i, j| Ok(bottleneck(&dgs[i], &dgs[j])))?,
                "wasserstein" => square(format!("wasserstein(p={})", a.order), ids, |i, j| {
                    Ok(wasserstein_p(&dgs[i], &dgs[j], a.order)?)
                })?,
                "kernel" => {
                    let spec = a.kernel.spec()?;
                    square(format!("kernel_distance({})", spec.descriptor()), ids, |i, j| {
                        Ok(kernel_distance(&spec, &dgs[i], &dgs[j]))
                    })?
                }
                other => return Err(Error::Config(format!("unknown metric `{other}`"))),
            };
            formats::write_matrix(&a.out, formats::DISTANCE, &m)?;
            Ok(format!("{} distances written to {}", m.descriptor, a.out.display()))
        }
        Command::Separate(a) => {
            let cfg = a.resolve()?;
            Ok(summary(&pipeline::separate(&cfg, &out_dir(&cfg), &cache)?))
        }
        Command::Confuse4(a) => {
            let cfg = a.resolve()?;
            Ok(summary(&pipeline::confuse4(&cfg, &out_dir(&cfg), &cache)?))
        }
        Command::Segment(a) => {
            let params = SegmentationParams {
                feature: a.vector.feature()?,
                bandwidths: a.bandwidths.clone().unwrap_or_else(|| grids::GAUSSIAN_BANDWIDTH.to_vec()),
                c_grid: a.c_grid.clone().unwrap_or_else(|| grids::SVM_C.to_vec()),
                permute: a.permute,
                svm: SvmSettings::default(),
            };
            let r = pipeline::with_failure_marker(&a.out, || {
                let (name, shapes) = segmentation_shapes(&a)?;
                let r = segmentation_run(&shapes, &params, a.seed)?;
                let meta = RowMeta {
                    dataset: name,
                    filtration: "geodesic".into(),
                    transform: if a.permute { "permuted" } else { "true" }.into(),
                    featurization: a.vector.feature.clone(),
                };
                let classes: Vec<String> = (0..r.n_classes()).map(|c| c.to_string()).collect();
                let snapshot = format!("{}\nseed = {}", params.descriptor(), a.seed);
                formats::write_results(&a.out.join(pipeline::RESULTS_FILE), &snapshot, &r.warnings, &pipeline::result_rows(&meta, &r))?;
                formats::write_confusion(&a.out.join(pipeline::CONFUSION_FILE), &classes, &r.confusion)?;
                Ok(r)
            })?;
            Ok(format!("segmentation error {:.4}", 1.0 - r.mean))
        }
        Command::Report(a) => {
            let rows = report_rows(&a.results)?;
            formats::write_report(&a.out, &rows)?;
            let fmt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
            let mut s = String::from("dataset\tfiltration\tfeaturization\ttrue\tpermuted\tdifference");
            for r in &rows {
                s += &format!(
                    "\n{}\t{}\t{}\t{}\t{}\t{}",
                    r.dataset,
                    r.filtration,
                    r.featurization,
                    fmt(r.true_accuracy),
                    fmt(r.permuted_accuracy),
                    fmt(r.difference)
                );
            }
            Ok(s)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    execute(cli)
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
