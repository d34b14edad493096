use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lplab::numerics::RandomSource;
use lplab_cli::config::{parse_range, Format, Layers, RunConfig};
use lplab_cli::presets::catalog;
use lplab_cli::run::{execute, exit_code, render_report, render_sweep, sweep};
use lplab_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "lplab", version, about = "Numerical checks of L_p Brunn-Minkowski-type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verifier and write its report.
    Verify(RunArgs),
    /// Run a verifier over the cross product of parameter ranges.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `KEY=V1,V2,...`; repeat for more axes.
        #[arg(long = "range", value_name = "KEY=VALUES")]
        ranges: Vec<String>,
    },
    /// List the presets, or run one.
    Demo {
        #[arg(long)]
        list: bool,
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<String>,
        #[arg(long)]
        format: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    /// Flat `key = value` file.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "p", allow_negative_numbers = true)]
    p: Option<String>,
    #[arg(long = "s", allow_negative_numbers = true)]
    s: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    /// Any verifier parameter, as `KEY=VALUE`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    output: Option<String>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Write the constructed function as a per-node CSV.
    #[arg(long)]
    emit_profile: Option<String>,
}

impl RunArgs {
    fn layers(&self) -> Result<Layers> {
        let mut flags = BTreeMap::new();
        for entry in &self.set {
            let (k, v) = entry
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set {entry:?} is not KEY=VALUE")))?;
            flags.insert(k.trim().to_string(), v.trim().to_string());
        }
        let named = [
            ("target", &self.target),
            ("preset", &self.preset),
            ("p", &self.p),
            ("s", &self.s),
            ("lambda", &self.lambda),
            ("mu", &self.mu),
            ("omega", &self.omega),
            ("alpha", &self.alpha),
            ("samples", &self.samples),
            ("resolution", &self.resolution),
            ("output", &self.output),
            ("format", &self.format),
            ("emit_profile", &self.emit_profile),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                flags.insert(k.to_string(), v.clone());
            }
        }
        if let Some(seed) = self.seed {
            flags.insert("seed".to_string(), seed.to_string());
        }
        let file = match &self.config {
            Some(path) => Some((read_config(path)?, path.clone())),
            None => None,
        };
        Ok(Layers {
            file,
            env_seed: std::env::var("LPLAB_SEED").ok(),
            flags,
        })
    }
}

fn read_config(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn write_out(path: Option<&str>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(cfg: &RunConfig) -> Result<u8> {
    let outcome = execute(cfg.target, &cfg.params, RandomSource::new(cfg.seed))?;
    if let Some(path) = &cfg.emit_profile {
        let h = outcome.profile.as_ref().ok_or_else(|| {
            CliError::Config(format!("target {} constructs no function to profile", cfg.target))
        })?;
        write_out(Some(path), &h.to_profile_csv())?;
    }
    write_out(
        cfg.output.as_deref(),
        &render_report(&outcome.report, cfg.format.unwrap_or(Format::Json)),
    )?;
    Ok(exit_code([&outcome.report]))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify(args) => verify(&RunConfig::build(&args.layers()?)?),
        Command::Sweep { run, ranges } => {
            let cfg = RunConfig::build(&run.layers()?)?;
            if cfg.emit_profile.is_some() {
                return Err(CliError::Config("--emit-profile applies to verify only".into()));
            }
            let axes = ranges.iter().map(|r| parse_range(r)).collect::<Result<Vec<_>>>()?;
            let rows = sweep(cfg.target, &cfg.params, &axes, RandomSource::new(cfg.seed))?;
            write_out(
                cfg.output.as_deref(),
                &render_sweep(&axes, &rows, cfg.format.unwrap_or(Format::Csv)),
            )?;
            Ok(exit_code(rows.iter().map(|r| &r.report)))
        }
        Command::Demo {
            list,
            preset,
            seed,
            output,
            format,
        } => {
            if list || preset.is_none() {
                print!("{}", catalog());
                return Ok(0);
            }
            let mut flags = BTreeMap::new();
            flags.insert("preset".to_string(), preset.unwrap_or_default());
            for (k, v) in [("output", output), ("format", format), ("seed", seed.map(|s| s.to_string()))] {
                if let Some(v) = v {
                    flags.insert(k.to_string(), v);
                }
            }
            verify(&RunConfig::build(&Layers {
                file: None,
                env_seed: std::env::var("LPLAB_SEED").ok(),
                flags,
            })?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
