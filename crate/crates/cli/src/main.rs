use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use symrig::cli::Cli;
use symrig::defaults::WORK_CAP_ENV;
use symrig::{resolve_limits, run, CliError};

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let env = std::env::var(WORK_CAP_ENV).ok();
    let limits = resolve_limits(&cli.global, env.as_deref())?;
    let outcome = run(cli, &limits)?;
    let text = outcome.report.render(cli.global.json);
    match &cli.global.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>".as_ref(), e))?;
        }
    }
    if let Some(flag) = &outcome.report.flag {
        eprintln!("symrig: {flag}");
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("symrig: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
