use clap::Parser;

use neoclassical::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        let code = exit_code(&e);
        let report = anyhow::Error::from(e).context("neo failed");
        eprintln!("{report:#}");
        std::process::exit(code);
    }
}
