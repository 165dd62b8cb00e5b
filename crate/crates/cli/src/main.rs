use std::process::ExitCode;

use clap::Parser;
use gmapper_cli::args::{Cli, Command};
use gmapper_cli::commands::{cmd_bench, cmd_export, cmd_generate, cmd_run};
use gmapper_cli::config::RunConfig;
use gmapper_cli::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { dataset, config, out } => {
            let n = cmd_generate(&dataset, config.as_deref(), &out)?;
            eprintln!("wrote {n} points to {}", out.display());
        }
        Command::Run {
            pipeline,
            out,
            format,
            no_members,
        } => {
            let mut cfg = RunConfig::resolve(&pipeline)?;
            if out.is_some() {
                cfg.output.path = out;
            }
            if let Some(f) = format {
                cfg.output.format = f.parse()?;
            }
            if no_members {
                cfg.output.members = false;
            }
            let summary = cmd_run(&cfg)?;
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
        }
        Command::Bench {
            pipeline,
            trials,
            strategies,
        } => cmd_bench(&pipeline, trials, &strategies, std::io::stdout().lock())?,
        Command::Export { input, format, out } => {
            let rendered = cmd_export(&input, &format, out.as_deref())?;
            if out.is_none() {
                print!("{rendered}");
            }
        }
    }
    Ok(())
}
