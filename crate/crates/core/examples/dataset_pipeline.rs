//! Run the file-based pipeline into a dataset directory, the same steps the
//! `ext` binary runs.
//!
//! cargo run --release --example dataset_pipeline -- <dir> [smax] [tmax]

use steenrod_ext::cli::{cmd_pipeline, RunConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let Some(root) = args.next() else {
        eprintln!("usage: dataset_pipeline <dir> [smax] [tmax]");
        std::process::exit(2);
    };
    let smax = args.next().map_or(6, |a| a.parse().expect("numeric smax"));
    let tmax = args.next().map_or(30, |a| a.parse().expect("numeric tmax"));
    let config = RunConfig::new(root).with_range(smax, tmax);
    match cmd_pipeline(&config) {
        Ok(outcome) => {
            for m in &outcome.messages {
                println!("{m}");
            }
            for v in &outcome.violations {
                println!("violation: {v}");
            }
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
