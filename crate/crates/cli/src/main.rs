use std::io;
use std::process::ExitCode;

use clap::Parser;
use zerokit_cli::{run, thread_cap, Cli, Failure};

/// Sizes the global pool; returns whether sweeps may run in parallel.
fn configure_threads(cap: Option<usize>) -> bool {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = cap {
            // Fails only if the pool already exists, which it cannot here.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        cap != Some(1)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = cap;
        false
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                zerokit_cli::EXIT_PARSE
            } else {
                0
            });
        }
    };
    let cap = match thread_cap(std::env::var("ZEROKIT_THREADS").ok().as_deref()) {
        Ok(cap) => cap,
        Err(e) => {
            eprintln!("zerokit: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let parallel = configure_threads(cap);
    match run(
        &cli,
        parallel,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    ) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zerokit: {e}");
            if matches!(e, Failure::Mismatch) {
                eprintln!("zerokit: see verification.rectangles in the output");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
