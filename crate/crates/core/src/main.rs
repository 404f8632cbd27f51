use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use mpld::geom::ShapeMode;
use mpld::pipeline::{run, InputFormat, RunConfig};
use mpld::simplify::SimplifyLevel;
use mpld::solvers::{Algorithm, SdpParams};
use mpld::stitch::CandidatePolicy;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Gds,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum AlgoArg {
    Ilp,
    Sdp,
    Backtrack,
    Dl,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum ShapeArg {
    Rectangle,
    Polygon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    All,
    One,
}

/// Assign layout features to k masks, inserting stitches where they help.
#[derive(Debug, Parser)]
#[command(name = "mpld", version)]
struct Cli {
    /// Input layout (.gds or .json)
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Input format; guessed from the extension when omitted
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Layer to decompose (default: all layers)
    #[arg(long)]
    layer: Option<i32>,
    /// Write the colored layout as GDSII, one layer per mask starting at 100
    #[arg(long, value_name = "FILE")]
    out_gds: Option<PathBuf>,
    /// Write an SVG preview
    #[arg(long, value_name = "FILE")]
    out_svg: Option<PathBuf>,
    /// Write the JSON report
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    #[arg(long, value_enum, ignore_case = true, default_value = "BACKTRACK")]
    algo: AlgoArg,
    /// Number of masks
    #[arg(long, default_value_t = 3)]
    color_num: usize,
    /// Minimum coloring distance in nm (default: the layout file's, or 120)
    #[arg(long, value_name = "NM")]
    coloring_distance: Option<i64>,
    /// 0 none, 1 components, 2 hide small degree, 3 biconnected, 4 merge sub-K4
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=4))]
    simplify_level: u8,
    #[arg(long, value_enum, ignore_case = true, default_value = "POLYGON")]
    shape: ShapeArg,
    #[arg(long, default_value_t = 8)]
    thread_num: usize,
    /// Disable stitch insertion
    #[arg(long)]
    no_stitch: bool,
    /// Stitch candidates per feature (default: one for DL, all otherwise)
    #[arg(long, value_enum)]
    stitch_policy: Option<PolicyArg>,
    /// Stitch weight in the cost
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Time budget in seconds
    #[arg(long, value_name = "S", default_value_t = 3600.0)]
    time_budget: f64,
    /// Seed for the SDP initial vectors
    #[arg(long)]
    seed: Option<u64>,
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, String> {
        if !(self.time_budget >= 0.0 && self.time_budget.is_finite()) {
            return Err(format!("time budget must be a non-negative number, got {}", self.time_budget));
        }
        let mut sdp = SdpParams::default();
        if let Some(s) = self.seed {
            sdp.seed = s;
        }
        Ok(RunConfig {
            input: Some(self.input),
            format: self.format.map(|f| match f {
                FormatArg::Gds => InputFormat::Gds,
                FormatArg::Json => InputFormat::Json,
            }),
            layer: self.layer,
            k: self.color_num,
            alpha: self.alpha,
            min_color_dist_nm: self.coloring_distance,
            algorithm: match self.algo {
                AlgoArg::Ilp => Algorithm::Ilp,
                AlgoArg::Sdp => Algorithm::Sdp,
                AlgoArg::Backtrack => Algorithm::Backtrack,
                AlgoArg::Dl => Algorithm::DancingLinks,
            },
            simplify_level: SimplifyLevel::new(self.simplify_level).map_err(|e| e.to_string())?,
            threads: self.thread_num,
            shape: match self.shape {
                ShapeArg::Rectangle => ShapeMode::Rectangle,
                ShapeArg::Polygon => ShapeMode::Polygon,
            },
            stitch: !self.no_stitch,
            policy: self.stitch_policy.map(|p| match p {
                PolicyArg::All => CandidatePolicy::All,
                PolicyArg::One => CandidatePolicy::OnePerFeature,
            }),
            time_budget: Duration::from_secs_f64(self.time_budget),
            sdp,
            out_gds: self.out_gds,
            out_svg: self.out_svg,
            report: self.report,
            ..RunConfig::default()
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(r) => {
            println!("algorithm {}", r.algorithm);
            println!("features {}", r.features);
            println!("segments {}", r.segments);
            println!("components {}", r.per_component.len());
            println!("conflicts {}", r.conflict_count);
            println!("stitches {}", r.stitch_count);
            println!("cost {}", r.cost);
            println!("time {:.3}s", r.wall_time_s);
            if !r.optimal && config.algorithm.is_exact() {
                println!("note: time budget reached, result may not be optimal");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
