use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use landau_cli::{resolve, run, thread_cap, Cli, THREADS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = thread_cap(std::env::var(THREADS_ENV).ok().as_deref())
        .and_then(|cap| {
            if let Some(n) = cap {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| landau_cli::CliError::Threads(e.to_string()))?;
            }
            resolve(&cli)
        })
        .and_then(|cfg| run::run(&cfg));
    match outcome {
        Ok(Some(text)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
