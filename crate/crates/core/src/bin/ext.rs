use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use steenrod_ext::chart::ChartFormat;
use steenrod_ext::cli::{self, CmdResult, RunConfig, Selection};

#[derive(Parser)]
#[command(name = "ext", about = "Ext over the mod 2 Steenrod algebra: resolutions, products, brackets")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Dataset directory.
    #[arg(long, global = true, default_value = ".")]
    root: PathBuf,
    #[arg(long, global = true)]
    smax: Option<u32>,
    #[arg(long, global = true)]
    tmax: Option<u32>,
    /// File listing the cocycles to work on, one s_g per line.
    #[arg(long, global = true, conflicts_with = "map")]
    maps: Option<PathBuf>,
    /// A single cocycle s_g.
    #[arg(long, global = true)]
    map: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tikz)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tikz,
    Svg,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Compute or extend the minimal resolution.
    Resolve,
    /// Write a Def for every generator in range and the maps list.
    Cocycles,
    /// Lift the selected cocycles to chain maps.
    Lift,
    /// Gather Map.aug files into all.products.
    Collect,
    /// Lift the squaring map and write all.sq0.
    Dosq0,
    /// Write brackets and brackets.sym for the selected maps.
    Brackets,
    /// Write the periodicity operator files.
    Operators,
    /// Draw an Adams chart.
    Chart,
    /// Validate the resolution and every lifted map.
    Check,
    /// Run every stage from resolve to check.
    Pipeline,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = RunConfig {
        root: args.root,
        s_max: args.smax,
        t_max: args.tmax,
        selection: match (args.maps, args.map) {
            (Some(file), _) => Selection::List(file),
            (None, Some(name)) => Selection::Single(name),
            (None, None) => Selection::All,
        },
        format: match args.format {
            Format::Tikz => ChartFormat::Tikz,
            Format::Svg => ChartFormat::Svg,
        },
    };
    let run: fn(&RunConfig) -> CmdResult = match args.command {
        Command::Resolve => cli::cmd_resolve,
        Command::Cocycles => cli::cmd_cocycles,
        Command::Lift => cli::cmd_lift,
        Command::Collect => cli::cmd_collect,
        Command::Dosq0 => cli::cmd_dosq0,
        Command::Brackets => cli::cmd_brackets,
        Command::Operators => cli::cmd_operators,
        Command::Chart => cli::cmd_chart,
        Command::Check => cli::cmd_check,
        Command::Pipeline => cli::cmd_pipeline,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(jobs);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&config)) {
        Ok(outcome) => {
            for m in &outcome.messages {
                println!("{m}");
            }
            for v in &outcome.violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
