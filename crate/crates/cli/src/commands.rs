use std::io::Write;
use std::path::Path;
use std::time::Instant;

use gmapper::bench::time_cover;
use gmapper::cover::{build_cover, CoverStrategyConfig};
use gmapper::data::{generate, write_csv, DatasetKind};
use gmapper::mapper::{apply_lens, build_mapper, graph_summary, GraphSummary, MapperGraph, PointCloud};
use serde::Serialize;

use crate::args::{DatasetArgs, PipelineArgs};
use crate::config::{default_cover, Format, RunConfig};
use crate::error::CliError;
use crate::export;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub strategy: &'static str,
    pub n_intervals: usize,
    pub iterations: usize,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub n_components: usize,
    pub cycle_rank: usize,
    pub cover_runtime_seconds: f64,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn load_cloud(cfg: &RunConfig) -> Result<PointCloud, CliError> {
    Ok(generate(&cfg.dataset_spec())?)
}

pub fn cmd_generate(dataset: &DatasetArgs, config: Option<&Path>, out: &Path) -> Result<usize, CliError> {
    let args = PipelineArgs {
        config: config.map(Path::to_path_buf),
        dataset: dataset.clone(),
        ..Default::default()
    };
    let cfg = RunConfig::resolve(&args)?;
    let cloud = load_cloud(&cfg)?;
    write_csv(&cloud, out).map_err(|e| match e {
        gmapper::data::DataError::Io { path, source } => CliError::Write { path, source },
        other => CliError::Data(other),
    })?;
    Ok(cloud.len())
}

/// Runs the pipeline. The graph is returned together with the summary; the
/// cover timing covers `build_cover` only.
pub fn run_pipeline(cfg: &RunConfig) -> Result<(MapperGraph, RunSummary), CliError> {
    let cloud = load_cloud(cfg)?;
    let lens = apply_lens(&cloud, &cfg.lens.kind, cfg.lens.normalization)?;
    let start = Instant::now();
    let cover = build_cover(&lens.values, &cfg.cover)?;
    let cover_runtime_seconds = start.elapsed().as_secs_f64();
    let mut graph = build_mapper(&cloud, &lens, &cover, &cfg.clustering)?;
    if let serde_json::Value::Object(map) = &mut graph.provenance {
        map.insert("seed".into(), cfg.seed.into());
        map.insert("dataset".into(), serde_json::to_value(&cfg.dataset).expect("dataset serializes"));
        map.insert("n_points".into(), cloud.len().into());
    }
    let GraphSummary {
        n_nodes,
        n_edges,
        n_components,
        cycle_rank,
    } = graph_summary(&graph);
    let summary = RunSummary {
        strategy: cover.source.name(),
        n_intervals: cover.len(),
        iterations: cover.iterations,
        n_nodes,
        n_edges,
        n_components,
        cycle_rank,
        cover_runtime_seconds,
    };
    Ok((graph, summary))
}

pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let (mut graph, summary) = run_pipeline(cfg)?;
    if let Some(path) = &cfg.output.path {
        if !cfg.output.members {
            graph.nodes.iter_mut().for_each(|n| n.members.clear());
        }
        write_file(path, &export::render(&graph, cfg.output.format))?;
    }
    Ok(summary)
}

fn dataset_name(kind: &DatasetKind) -> String {
    match kind {
        DatasetKind::Circle { .. } => "circle".into(),
        DatasetKind::TwoCircles { .. } => "two_circles".into(),
        DatasetKind::KleinBottle { .. } => "klein_bottle".into(),
        DatasetKind::Csv { path, .. } => path.display().to_string(),
    }
}

pub const BENCH_HEADER: &str = "dataset,n,dim,strategy,trials,mean_seconds,std_seconds,n_intervals";

/// One CSV row per requested strategy. Fixed-count strategies use
/// `--intervals` when given and otherwise the number of intervals the
/// configured G-Mapper cover finds.
pub fn cmd_bench(args: &PipelineArgs, trials: usize, strategies: &str, mut out: impl Write) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let names: Vec<&str> = strategies.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::Usage("no strategies requested".into()));
    }
    let base = RunConfig::resolve(&PipelineArgs {
        cover: None,
        intervals: None,
        gain: None,
        tau: None,
        ..args.clone()
    })?;
    let cloud = load_cloud(&base)?;
    let lens = apply_lens(&cloud, &base.lens.kind, base.lens.normalization)?;
    let reference = match &base.cover {
        CoverStrategyConfig::Gmapper(_) => base.cover.clone(),
        _ => default_cover("gmapper")?,
    };
    let detected = build_cover(&lens.values, &reference)?.len().max(2);
    let write_err = |source| CliError::Write {
        path: "<stdout>".into(),
        source,
    };
    writeln!(out, "{BENCH_HEADER}").map_err(write_err)?;
    for name in names {
        let cfg = match name {
            "gmapper" => reference.clone(),
            other => {
                let mut cfg = default_cover(other)?;
                let k = args.intervals.unwrap_or(detected);
                match &mut cfg {
                    CoverStrategyConfig::Uniform(c) => {
                        c.n_intervals = k;
                        c.gain = args.gain.unwrap_or(c.gain);
                    }
                    CoverStrategyConfig::Balanced(c) => {
                        c.n_intervals = k;
                        c.gain = args.gain.unwrap_or(c.gain);
                    }
                    CoverStrategyConfig::Fcm(c) => {
                        c.n_intervals = k;
                        c.threshold_tau = args.tau.unwrap_or(c.threshold_tau);
                    }
                    CoverStrategyConfig::Gmapper(_) => unreachable!(),
                }
                cfg
            }
        };
        let t = time_cover(&lens.values, &cfg, trials)?;
        writeln!(
            out,
            "{},{},{},{},{},{:.6e},{:.6e},{}",
            dataset_name(&base.dataset),
            cloud.len(),
            cloud.dim(),
            t.strategy,
            t.trials,
            t.mean_seconds,
            t.std_seconds,
            t.n_intervals
        )
        .map_err(write_err)?;
    }
    Ok(())
}

pub fn cmd_export(input: &Path, format: &str, out: Option<&Path>) -> Result<String, CliError> {
    let format: Format = format.parse()?;
    let text = std::fs::read_to_string(input).map_err(|source| CliError::Read {
        path: input.to_path_buf(),
        source,
    })?;
    let graph = export::parse_json(&text, input)?;
    let rendered = export::render(&graph, format);
    if let Some(path) = out {
        write_file(path, &rendered)?;
    }
    Ok(rendered)
}
