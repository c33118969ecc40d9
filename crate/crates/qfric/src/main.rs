use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

/// Radiation and friction spectrum of a small particle moving above an
/// ideal-conductor mirror.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key (repeatable); wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// spectrum | total-power | validate
    #[arg(long)]
    mode: Option<String>,
    /// Output path, `-` for standard output.
    #[arg(long)]
    output: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut overrides = cli.set;
    if let Some(m) = cli.mode {
        overrides.push(format!("mode={m}"));
    }
    if let Some(o) = cli.output {
        overrides.push(format!("output={o}"));
    }
    let start = Instant::now();
    let code = match qfric::load_config(cli.config.as_deref(), &overrides)
        .and_then(|cfg| qfric::execute_to_destination(&cfg))
    {
        Ok(code) => {
            if code == qfric::exit::NUMERICAL {
                eprintln!("qfric: some checks failed or quadratures did not converge");
            }
            code
        }
        Err(e) => {
            eprintln!("qfric: {e}");
            e.exit_code()
        }
    };
    eprintln!("qfric: wall time {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
