use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gmapper", version, about = "Build Mapper graphs with adaptive or fixed interval covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a dataset to CSV.
    Generate {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full pipeline and print a one-line summary.
    Run {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        /// Leave node member lists out of the written graph.
        #[arg(long)]
        no_members: bool,
    },
    /// Time cover construction for several strategies; prints CSV.
    Bench {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Comma-separated strategies to time.
        #[arg(long, default_value = "gmapper,fcm,balanced")]
        strategies: String,
    },
    /// Convert a graph JSON file to another format.
    Export {
        input: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct DatasetArgs {
    /// circle, two_circles, klein_bottle, or a path ending in .csv
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PipelineArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// coordinate:J, xJ, coord_sum, l2_norm, pca1 or column:NAME
    #[arg(long)]
    pub lens: Option<String>,
    /// minmax or none
    #[arg(long)]
    pub normalize: Option<String>,
    /// gmapper, uniform, balanced or fcm
    #[arg(long)]
    pub cover: Option<String>,
    #[arg(long)]
    pub ad_threshold: Option<f64>,
    #[arg(long)]
    pub g_overlap: Option<f64>,
    /// dfs, bfs or random
    #[arg(long)]
    pub search: Option<String>,
    #[arg(long)]
    pub intervals: Option<usize>,
    #[arg(long)]
    pub gain: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub min_pts: Option<usize>,
    /// euclidean or correlation
    #[arg(long)]
    pub metric: Option<String>,
    /// drop or singletons
    #[arg(long)]
    pub noise: Option<String>,
}
