//! The run configuration: a TOML file mirroring every pipeline parameter,
//! with command-line flags applied on top.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use gmapper::cover::{
    BalancedConfig, CoverStrategyConfig, FcmConfig, GMapperConfig, SearchMethod, UniformConfig,
};
use gmapper::data::{DatasetKind, DatasetSpec};
use gmapper::mapper::{ClusterParams, LensKind, Normalization};
use serde::{Deserialize, Serialize};

use crate::args::PipelineArgs;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Dot,
    Graphml,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "graphml" => Ok(Format::Graphml),
            other => Err(CliError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensConfig {
    #[serde(flatten)]
    pub kind: LensKind,
    #[serde(default)]
    pub normalization: Normalization,
}

impl Default for LensConfig {
    fn default() -> Self {
        LensConfig {
            kind: LensKind::Coordinate { index: 0 },
            normalization: Normalization::Minmax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Include the member list of every node in the written graph.
    pub members: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            format: Format::Json,
            members: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dataset")]
    pub dataset: DatasetKind,
    #[serde(default)]
    pub lens: LensConfig,
    #[serde(default)]
    pub cover: CoverStrategyConfig,
    #[serde(default)]
    pub clustering: ClusterParams,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_dataset() -> DatasetKind {
    DatasetSpec::circle(5000, 0).kind
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            dataset: default_dataset(),
            lens: LensConfig::default(),
            cover: CoverStrategyConfig::default(),
            clustering: ClusterParams::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    /// The configuration file named by `--config` (or the defaults), with
    /// every flag that was given applied on top.
    pub fn resolve(args: &PipelineArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        cfg.apply(args)?;
        cfg.cover.set_seed(cfg.seed);
        cfg.cover
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid cover configuration: {e}")))?;
        if !(cfg.clustering.eps > 0.0) {
            return Err(CliError::Usage(format!("eps must be positive, got {}", cfg.clustering.eps)));
        }
        Ok(cfg)
    }

    pub fn dataset_spec(&self) -> DatasetSpec {
        DatasetSpec::new(self.dataset.clone(), self.seed)
    }

    fn apply(&mut self, args: &PipelineArgs) -> Result<(), CliError> {
        if let Some(seed) = args.dataset.seed {
            self.seed = seed;
        }
        if let Some(name) = &args.dataset.dataset {
            self.dataset = parse_dataset(name, args.dataset.label_column.clone())?;
        } else if let (Some(column), DatasetKind::Csv { label_column, .. }) =
            (&args.dataset.label_column, &mut self.dataset)
        {
            *label_column = Some(column.clone());
        }
        if let Some(n) = args.dataset.n {
            match &mut self.dataset {
                DatasetKind::Circle { n: m, .. }
                | DatasetKind::TwoCircles { n: m, .. }
                | DatasetKind::KleinBottle { n: m, .. } => *m = n,
                DatasetKind::Csv { .. } => return Err(CliError::Usage("--n does not apply to a CSV dataset".into())),
            }
        }
        if let Some(lens) = &args.lens {
            self.lens.kind = parse_lens(lens)?;
        }
        if let Some(norm) = &args.normalize {
            self.lens.normalization = match norm.as_str() {
                "minmax" => Normalization::Minmax,
                "none" => Normalization::None,
                other => return Err(CliError::Usage(format!("unknown normalization `{other}`"))),
            };
        }
        if let Some(strategy) = &args.cover {
            if strategy != self.cover.source().name() {
                self.cover = default_cover(strategy)?;
            }
        }
        self.apply_cover_flags(args)?;
        let c = &mut self.clustering;
        if let Some(eps) = args.eps {
            c.eps = eps;
        }
        if let Some(min_pts) = args.min_pts {
            c.min_pts = min_pts;
        }
        if let Some(metric) = &args.metric {
            c.metric = metric.parse().map_err(CliError::Usage)?;
        }
        if let Some(noise) = &args.noise {
            c.noise = noise.parse().map_err(CliError::Usage)?;
        }
        Ok(())
    }

    fn apply_cover_flags(&mut self, args: &PipelineArgs) -> Result<(), CliError> {
        let strategy = self.cover.source().name();
        let misplaced = |flag: &str| CliError::Usage(format!("{flag} does not apply to the {strategy} cover"));
        match &mut self.cover {
            CoverStrategyConfig::Gmapper(c) => {
                if let Some(t) = args.ad_threshold {
                    c.ad_threshold = t;
                }
                if let Some(g) = args.g_overlap {
                    c.g_overlap = g;
                }
                if let Some(s) = &args.search {
                    c.search = s.parse::<SearchMethod>().map_err(CliError::Usage)?;
                }
                for (given, flag) in [
                    (args.intervals.is_some(), "--intervals"),
                    (args.gain.is_some(), "--gain"),
                    (args.tau.is_some(), "--tau"),
                ] {
                    if given {
                        return Err(misplaced(flag));
                    }
                }
            }
            CoverStrategyConfig::Uniform(UniformConfig { n_intervals, gain })
            | CoverStrategyConfig::Balanced(BalancedConfig { n_intervals, gain }) => {
                if let Some(k) = args.intervals {
                    *n_intervals = k;
                }
                if let Some(g) = args.gain {
                    *gain = g;
                }
                for (given, flag) in [
                    (args.ad_threshold.is_some(), "--ad-threshold"),
                    (args.g_overlap.is_some(), "--g-overlap"),
                    (args.search.is_some(), "--search"),
                    (args.tau.is_some(), "--tau"),
                ] {
                    if given {
                        return Err(misplaced(flag));
                    }
                }
            }
            CoverStrategyConfig::Fcm(c) => {
                if let Some(k) = args.intervals {
                    c.n_intervals = k;
                }
                if let Some(t) = args.tau {
                    c.threshold_tau = t;
                }
                for (given, flag) in [
                    (args.ad_threshold.is_some(), "--ad-threshold"),
                    (args.g_overlap.is_some(), "--g-overlap"),
                    (args.search.is_some(), "--search"),
                    (args.gain.is_some(), "--gain"),
                ] {
                    if given {
                        return Err(misplaced(flag));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn default_cover(strategy: &str) -> Result<CoverStrategyConfig, CliError> {
    Ok(match strategy {
        "gmapper" => CoverStrategyConfig::Gmapper(GMapperConfig::default()),
        "uniform" => CoverStrategyConfig::Uniform(UniformConfig::default()),
        "balanced" => CoverStrategyConfig::Balanced(BalancedConfig::default()),
        "fcm" => CoverStrategyConfig::Fcm(FcmConfig::default()),
        other => {
            return Err(CliError::Usage(format!(
                "unknown cover `{other}` (expected gmapper, uniform, balanced or fcm)"
            )))
        }
    })
}

/// `circle`, `two_circles`, `klein_bottle` (dashes accepted), or a path to
/// a CSV file.
pub fn parse_dataset(name: &str, label_column: Option<String>) -> Result<DatasetKind, CliError> {
    let spec = match name.replace('-', "_").as_str() {
        "circle" => DatasetSpec::circle(5000, 0),
        "two_circles" => DatasetSpec::two_circles(5000, 0),
        "klein_bottle" | "klein" => DatasetSpec::klein_bottle(15875, 0),
        _ if name.ends_with(".csv") => {
            return Ok(DatasetKind::Csv {
                path: PathBuf::from(name),
                label_column,
            })
        }
        _ => {
            return Err(CliError::Usage(format!(
                "unknown dataset `{name}` (expected circle, two_circles, klein_bottle or a .csv path)"
            )))
        }
    };
    if label_column.is_some() {
        return Err(CliError::Usage("--label-column only applies to CSV datasets".into()));
    }
    Ok(spec.kind)
}

/// `coordinate:J` (or `xJ`), `coord_sum`, `l2_norm`, `pca1`, `column:NAME`.
pub fn parse_lens(s: &str) -> Result<LensKind, CliError> {
    let bad = || CliError::Usage(format!("unknown lens `{s}`"));
    if let Some(rest) = s.strip_prefix("coordinate:").or_else(|| s.strip_prefix('x')) {
        return rest.parse().map(|index| LensKind::Coordinate { index }).map_err(|_| bad());
    }
    if let Some(name) = s.strip_prefix("column:") {
        return Ok(LensKind::CsvColumn { name: name.to_string() });
    }
    match s.replace('-', "_").as_str() {
        "coord_sum" => Ok(LensKind::CoordSum),
        "l2_norm" => Ok(LensKind::L2Norm),
        "pca1" | "pca" => Ok(LensKind::Pca1),
        _ => Err(bad()),
    }
}
