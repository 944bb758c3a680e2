//! Library side of the `catlab` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use args::Command;
use error::CliError;
use output::emit;

/// Runs one parsed command, writing its output.
pub fn run(command: &Command) -> Result<(), CliError> {
    let config = serde_json::to_value(command).expect("arguments serialize");
    match command {
        Command::Metrics(a) => {
            let t = commands::metrics_table(a, config)?;
            emit(&t.render(a.output.format), a.output.out.as_deref())
        }
        Command::Pnd(a) => {
            let t = commands::pnd_table(a, config)?;
            emit(&t.render(a.output.format), a.output.out.as_deref())
        }
        Command::Wigner(a) => {
            let t = commands::wigner_table(a, config)?;
            emit(&t.render(a.output.format), a.output.out.as_deref())?;
            let line = format!(
                "delta {} min_w {} at (q, p) = ({}, {})",
                t.summary["delta"], t.summary["min_w"], t.summary["min_q"], t.summary["min_p"]
            );
            if a.output.out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(())
        }
        Command::Table1(o) => {
            let t = commands::table1_table(config)?;
            emit(&t.render(o.format), o.out.as_deref())
        }
        Command::Decohere(a) => {
            let t = commands::decohere_table(a, config)?;
            emit(&t.render(a.output.format), a.output.out.as_deref())?;
            eprintln!("kt_c {}", t.summary["kt_c"]);
            Ok(())
        }
        Command::SqueezeOpt(a) => {
            let t = commands::squeeze_table(a, config)?;
            emit(&t.render(a.output.format), a.output.out.as_deref())
        }
        Command::Scan(a) => {
            let t = commands::scan_table(a, config)?;
            emit(&t.render(a.output.format), a.output.out.as_deref())
        }
        Command::Repro(a) => {
            for path in commands::repro(a, config)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

/// Applies `CATLAB_THREADS` to the global thread pool.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CATLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("CATLAB_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(format!("CATLAB_THREADS: {e}")))
}
