//! Experiment configuration: a TOML file with a schema version. Every field
//! is checked by [`Config::validate`] before any stage runs.

use std::path::{Path, PathBuf};

use pairperm_core::diagrams::Orientation;
use pairperm_core::features::ImageWeight;
use pairperm_core::filtration::{FiltrationKind, RicciParams, VertexReduction};
use pairperm_core::kernels::{grids, KernelSpec, DEFAULT_SLICES};
use pairperm_core::learn::{CvProtocol, SvmSettings, VectorFeature};
use pairperm_core::persistence::PointKind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub filtration: FiltrationConfig,
    #[serde(default)]
    pub diagrams: DiagramConfig,
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default)]
    pub cv: CvConfig,
    /// Where outputs go; not part of the experiment snapshot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DatasetConfig {
    /// Two-block stochastic block model graphs with label noise.
    Sbm {
        #[serde(default = "default_sbm_count")]
        count: usize,
        #[serde(default)]
        noise: f64,
    },
    Tudataset { path: PathBuf, name: String },
}

fn default_sbm_count() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
pub enum FiltrationConfig {
    #[default]
    #[serde(rename = "degree")]
    Degree,
    #[serde(rename = "closeness")]
    Closeness,
    #[serde(rename = "fiedler_s")]
    FiedlerSquared,
    #[serde(rename = "ricci")]
    Ricci {
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_reduction")]
        reduction: String,
    },
}

fn default_alpha() -> f64 {
    RicciParams::default().idleness
}

fn default_reduction() -> String {
    VertexReduction::default().name().into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramConfig {
    /// `true` or `fake` (permuted).
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_kinds")]
    pub kinds: Vec<String>,
    /// `by_kind` or `unoriented`.
    #[serde(default = "default_orientation")]
    pub orientation: String,
}

fn default_mode() -> String {
    "true".into()
}

fn default_kinds() -> Vec<String> {
    ["ord0", "rel1", "ext0"].map(String::from).to_vec()
}

fn default_orientation() -> String {
    "by_kind".into()
}

impl Default for DiagramConfig {
    fn default() -> Self {
        DiagramConfig { mode: default_mode(), kinds: default_kinds(), orientation: default_orientation() }
    }
}

impl DiagramConfig {
    pub fn fake(&self) -> bool {
        self.mode == "fake"
    }

    pub fn point_kinds(&self) -> Result<Vec<PointKind>> {
        self.kinds
            .iter()
            .map(|k| PointKind::parse(k).ok_or_else(|| Error::Config(format!("unknown diagram kind `{k}`"))))
            .collect()
    }

    pub fn orientation(&self) -> Result<Orientation> {
        parse_orientation(&self.orientation)
    }
}

pub fn parse_orientation(s: &str) -> Result<Orientation> {
    match s {
        "by_kind" => Ok(Orientation::ByKind),
        "unoriented" => Ok(Orientation::Unoriented),
        other => Err(Error::Config(format!("orientation must be by_kind or unoriented, got `{other}`"))),
    }
}

/// Featurization and its hyperparameter grids; omitted grids take the
/// built-in defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum FeatureConfig {
    Sw {
        #[serde(default = "sw_sigma")]
        sigma: Vec<f64>,
        #[serde(default = "sw_slices")]
        slices: usize,
    },
    Pss {
        #[serde(default = "pss_t")]
        t: Vec<f64>,
    },
    Pwg {
        #[serde(default = "pwg_tau")]
        tau: Vec<f64>,
        #[serde(default = "pwg_k")]
        k: Vec<f64>,
        #[serde(default = "pwg_rho")]
        rho: Vec<f64>,
        #[serde(default = "one")]
        p: f64,
        #[serde(default = "yes")]
        squared: bool,
    },
    Pf {
        #[serde(default = "pf_grid")]
        t: Vec<f64>,
        #[serde(default = "pf_grid")]
        tau: Vec<f64>,
    },
    Pervec {
        #[serde(default = "hist_bins")]
        bins: Vec<usize>,
        #[serde(default = "gaussian_bw")]
        bandwidth: Vec<f64>,
    },
    Filvec {
        #[serde(default = "hist_bins")]
        bins: Vec<usize>,
        #[serde(default = "gaussian_bw")]
        bandwidth: Vec<f64>,
    },
    Landscape {
        #[serde(default = "landscape_k")]
        k_max: Vec<usize>,
        #[serde(default = "landscape_bins")]
        bins: Vec<usize>,
        #[serde(default = "gaussian_bw")]
        bandwidth: Vec<f64>,
    },
    Image {
        #[serde(default = "image_resolution")]
        resolution: Vec<usize>,
        /// Gaussian width of the persistence surface.
        #[serde(default = "image_sigma")]
        sigma: Vec<f64>,
        #[serde(default = "image_weight")]
        weight: String,
        #[serde(default = "gaussian_bw")]
        bandwidth: Vec<f64>,
    },
}

fn sw_sigma() -> Vec<f64> {
    grids::SW_SIGMA.to_vec()
}
fn sw_slices() -> usize {
    DEFAULT_SLICES
}
fn pss_t() -> Vec<f64> {
    grids::PSS_T.to_vec()
}
fn pwg_tau() -> Vec<f64> {
    grids::PWG_TAU.to_vec()
}
fn pwg_k() -> Vec<f64> {
    grids::PWG_K.to_vec()
}
fn pwg_rho() -> Vec<f64> {
    grids::PWG_RHO.to_vec()
}
fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn pf_grid() -> Vec<f64> {
    grids::PF.to_vec()
}
fn hist_bins() -> Vec<usize> {
    grids::HISTOGRAM_BINS.to_vec()
}
fn gaussian_bw() -> Vec<f64> {
    grids::GAUSSIAN_BANDWIDTH.to_vec()
}
fn landscape_k() -> Vec<usize> {
    grids::LANDSCAPE_K.to_vec()
}
fn landscape_bins() -> Vec<usize> {
    grids::LANDSCAPE_BINS.to_vec()
}
fn image_resolution() -> Vec<usize> {
    grids::IMAGE_RESOLUTION.to_vec()
}
fn image_sigma() -> Vec<f64> {
    grids::IMAGE_BANDWIDTH.to_vec()
}
fn image_weight() -> String {
    ImageWeight::default().name().into()
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig::Sw { sigma: sw_sigma(), slices: sw_slices() }
    }
}

/// What a featurization turns into for cross-validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Featurization {
    Kernels(Vec<KernelSpec>),
    Vectors { features: Vec<VectorFeature>, bandwidths: Vec<f64> },
}

impl FeatureConfig {
    pub fn name(&self) -> &'static str {
        match self {
            FeatureConfig::Sw { .. } => "sw",
            FeatureConfig::Pss { .. } => "pss",
            FeatureConfig::Pwg { .. } => "pwg",
            FeatureConfig::Pf { .. } => "pf",
            FeatureConfig::Pervec { .. } => "pervec",
            FeatureConfig::Filvec { .. } => "filvec",
            FeatureConfig::Landscape { .. } => "landscape",
            FeatureConfig::Image { .. } => "image",
        }
    }

    /// Published default grids for `name`.
    pub fn by_name(name: &str) -> Result<Self> {
        let text = format!("name = \"{name}\"");
        toml::from_str(&text).map_err(|_| Error::Config(format!("unknown featurization `{name}`")))
    }

    pub fn featurization(&self) -> Result<Featurization> {
        let cross = |a: &[f64], b: &[f64]| -> Vec<(f64, f64)> { a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect() };
        let kernels = |v: Vec<KernelSpec>| Featurization::Kernels(v);
        let f = match self {
            FeatureConfig::Sw { sigma, slices } => {
                kernels(sigma.iter().map(|&sigma| KernelSpec::Sw { sigma, slices: *slices }).collect())
            }
            FeatureConfig::Pss { t } => kernels(t.iter().map(|&t| KernelSpec::Pss { t }).collect()),
            FeatureConfig::Pwg { tau, k, rho, p, squared } => {
                let mut v = Vec::new();
                for &rho in rho {
                    for &k_w in k {
                        for &tau in tau {
                            v.push(KernelSpec::Pwg { rho, k_w, p_w: *p, tau, squared: *squared });
                        }
                    }
                }
                kernels(v)
            }
            FeatureConfig::Pf { t, tau } => {
                kernels(cross(tau, t).into_iter().map(|(tau, t)| KernelSpec::Pf { t, tau }).collect())
            }
            FeatureConfig::Pervec { bins, bandwidth } => Featurization::Vectors {
                features: bins.iter().map(|&bins| VectorFeature::Pervec { bins }).collect(),
                bandwidths: bandwidth.clone(),
            },
            FeatureConfig::Filvec { bins, bandwidth } => Featurization::Vectors {
                features: bins.iter().map(|&bins| VectorFeature::Filvec { bins }).collect(),
                bandwidths: bandwidth.clone(),
            },
            FeatureConfig::Landscape { k_max, bins, bandwidth } => Featurization::Vectors {
                features: k_max
                    .iter()
                    .flat_map(|&k_max| bins.iter().map(move |&bins| VectorFeature::Landscape { k_max, bins }))
                    .collect(),
                bandwidths: bandwidth.clone(),
            },
            FeatureConfig::Image { resolution, sigma, weight, bandwidth } => {
                let weight = ImageWeight::parse(weight)
                    .ok_or_else(|| Error::Config(format!("image weight must be death or persistence, got `{weight}`")))?;
                Featurization::Vectors {
                    features: resolution
                        .iter()
                        .flat_map(|&resolution| {
                            sigma.iter().map(move |&bandwidth| VectorFeature::Image { resolution, bandwidth, weight })
                        })
                        .collect(),
                    bandwidths: bandwidth.clone(),
                }
            }
        };
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        match self.featurization()? {
            Featurization::Kernels(specs) => {
                if specs.is_empty() {
                    return Err(Error::Config(format!("{}: empty hyperparameter grid", self.name())));
                }
                for s in &specs {
                    s.validate().map_err(|e| Error::Config(format!("{}: {e}", self.name())))?;
                }
            }
            Featurization::Vectors { features, bandwidths } => {
                if features.is_empty() || bandwidths.is_empty() {
                    return Err(Error::Config(format!("{}: empty hyperparameter grid", self.name())));
                }
                positive_all(self.name(), "bandwidth", &bandwidths)?;
                for f in &features {
                    match *f {
                        VectorFeature::Pervec { bins } | VectorFeature::Filvec { bins } if bins == 0 => {
                            return Err(Error::Config(format!("{}: bins must be positive", self.name())))
                        }
                        VectorFeature::Landscape { k_max, bins } if k_max == 0 || bins < 2 => {
                            return Err(Error::Config("landscape: k_max >= 1 and bins >= 2 required".into()))
                        }
                        VectorFeature::Image { resolution, bandwidth, .. } if resolution == 0 || !(bandwidth > 0.0) => {
                            return Err(Error::Config("image: resolution and sigma must be positive".into()))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }
}

fn positive_all(what: &str, field: &str, xs: &[f64]) -> Result<()> {
    match xs.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        Some(x) => Err(Error::Config(format!("{what}: {field} values must be positive, got {x}"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvConfig {
    #[serde(default = "ten")]
    pub outer_folds: usize,
    #[serde(default = "ten")]
    pub repeats: usize,
    #[serde(default = "ten")]
    pub inner_folds: usize,
    #[serde(default = "svm_c")]
    pub c: Vec<f64>,
    #[serde(default = "svm_tol")]
    pub tol: f64,
    #[serde(default = "svm_evals")]
    pub max_kernel_evals: u64,
}

fn ten() -> usize {
    10
}
fn svm_c() -> Vec<f64> {
    grids::SVM_C.to_vec()
}
fn svm_tol() -> f64 {
    SvmSettings::default().tol
}
fn svm_evals() -> u64 {
    SvmSettings::default().max_kernel_evals
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            outer_folds: ten(),
            repeats: ten(),
            inner_folds: ten(),
            c: svm_c(),
            tol: svm_tol(),
            max_kernel_evals: svm_evals(),
        }
    }
}

impl CvConfig {
    pub fn protocol(&self) -> CvProtocol {
        CvProtocol {
            outer_folds: self.outer_folds,
            repeats: self.repeats,
            inner_folds: self.inner_folds,
            c_grid: self.c.clone(),
            svm: SvmSettings { tol: self.tol, max_kernel_evals: self.max_kernel_evals, ..SvmSettings::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out")]
    pub dir: PathBuf,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: default_out() }
    }
}

impl Config {
    pub fn new(dataset: DatasetConfig) -> Self {
        Config {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            dataset,
            filtration: FiltrationConfig::default(),
            diagrams: DiagramConfig::default(),
            features: FeatureConfig::default(),
            cv: CvConfig::default(),
            output: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// The config with every default filled in.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The resolved config without the output location, as written next to
    /// outputs and embedded in result files.
    pub fn snapshot(&self) -> String {
        Config { output: None, ..self.clone() }.to_toml()
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.as_ref().map_or_else(default_out, |o| o.dir.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.dataset {
            DatasetConfig::Sbm { count, noise } => {
                if *count < 4 {
                    return Err(Error::Config("sbm count must be at least 4".into()));
                }
                if !(0.0..=0.5).contains(noise) {
                    return Err(Error::Config(format!("sbm noise must lie in [0, 0.5], got {noise}")));
                }
            }
            DatasetConfig::Tudataset { name, .. } => {
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(Error::Config(format!("invalid dataset name `{name}`")));
                }
            }
        }
        self.filtration()?;
        if self.diagrams.mode != "true" && self.diagrams.mode != "fake" {
            return Err(Error::Config(format!("diagrams.mode must be true or fake, got `{}`", self.diagrams.mode)));
        }
        if self.diagrams.point_kinds()?.is_empty() {
            return Err(Error::Config("diagrams.kinds must not be empty".into()));
        }
        self.diagrams.orientation()?;
        self.features.validate()?;
        self.cv.protocol().validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.cv.tol > 0.0) || self.cv.max_kernel_evals == 0 {
            return Err(Error::Config("cv.tol and cv.max_kernel_evals must be positive".into()));
        }
        Ok(())
    }

    pub fn filtration(&self) -> Result<FiltrationKind> {
        Ok(match &self.filtration {
            FiltrationConfig::Degree => FiltrationKind::Degree,
            FiltrationConfig::Closeness => FiltrationKind::Closeness,
            FiltrationConfig::FiedlerSquared => FiltrationKind::FiedlerSquared,
            FiltrationConfig::Ricci { alpha, reduction } => {
                if !(0.0..1.0).contains(alpha) {
                    return Err(Error::Config(format!("ricci alpha must lie in [0, 1), got {alpha}")));
                }
                let reduction = VertexReduction::parse(reduction)
                    .ok_or_else(|| Error::Config(format!("ricci reduction must be mean, min or max, got `{reduction}`")))?;
                FiltrationKind::Ricci(RicciParams { idleness: *alpha, reduction })
            }
        })
    }

    /// `true` or `permuted`, the transform column of result files.
    pub fn transform(&self) -> &'static str {
        if self.diagrams.fake() {
            "permuted"
        } else {
            "true"
        }
    }
}
