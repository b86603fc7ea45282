use std::process::ExitCode;

use clap::Parser;

use fracineq_cli::{exit, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        let flags = RunConfig::from_flags(&cli)?;
        let cfg = match &cli.config {
            Some(path) => flags.over(RunConfig::load(path)?),
            None => flags,
        };
        run(&cfg)
    })();
    match result {
        Ok((exec, code)) => {
            eprintln!("{}", exec.headline());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("fracineq: {e}");
            ExitCode::from(e.exit_code().max(exit::VIOLATION))
        }
    }
}
