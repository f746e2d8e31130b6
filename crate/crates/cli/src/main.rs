use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lerw_lab::cli::{Cli, Command, PresetArgs};
use lerw_lab::report::{pretty, write_file};
use lerw_lab::run::check_preset_name;
use lerw_lab::{commands, run_experiment, ExperimentConfig, LabError, Result};

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_file(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| LabError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn preset(args: Vec<String>) -> Result<bool> {
    let (name, rest) = args.split_first().expect("clap supplies the subcommand name");
    check_preset_name(name)?;
    let opts = PresetArgs::try_parse_from(rest).map_err(|e| LabError::Config(e.to_string()))?;
    let mut config = ExperimentConfig::load(&opts.config)?;
    if config.preset.name() != name {
        return Err(LabError::PresetMismatch {
            expected: name.clone(),
            found: config.preset.name().to_string(),
        });
    }
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    let out_dir = opts
        .out
        .unwrap_or_else(|| PathBuf::from("results").join(name));
    let out = run_experiment(&config, &out_dir)?;
    for v in &out.report.verdicts {
        println!(
            "{} {} (value {:.6}, bound {:.6}, slack {:.3e})",
            if v.pass { "pass" } else { "FAIL" },
            v.inequality,
            v.value,
            v.bound,
            v.slack
        );
    }
    println!("wrote {}", out_dir.display());
    Ok(out.report.all_pass())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Intersect(args) => {
            let csv = commands::intersect(&args)?;
            emit(args.out.as_ref(), &csv)?;
            Ok(true)
        }
        Command::Exact(args) => {
            let report = commands::exact(&args)?;
            emit(args.out.as_ref(), &pretty(&report)?)?;
            Ok(report.all_pass)
        }
        Command::Wilson(args) => {
            let report = commands::wilson(&args)?;
            emit(args.out.as_ref(), &pretty(&report)?)?;
            Ok(true)
        }
        Command::Preset(args) => preset(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        // some inequality failed; the report says which
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
