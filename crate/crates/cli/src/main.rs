use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use troplag_core::io::{run, CommandRequest, Subcommand};
use troplag_core::realization::pipeline::Overrides;

#[derive(Parser)]
#[command(name = "troplag", version, about = "Realize tropical Lagrangian multi-sections over rank-2 fans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Check the tropical data for consistency.
    Validate(Common),
    /// Count crossings of the deck-translates.
    Genericity(Common),
    /// Build the glued potential and certify embeddedness.
    Realize(Common),
    /// Re-certify a stored realization.
    Verify(Common),
    /// Mirror bundle summary, or invert tropical data on P2.
    Bundle(Common),
    /// Render a fan, tropical data or a realization as SVG.
    Plot(Common),
}

#[derive(Args)]
struct Common {
    input: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long = "series-order")]
    series_order: Option<usize>,
    #[arg(long = "R")]
    big_r: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (subcommand, c) = match cli.command {
        Command::Validate(c) => (Subcommand::Validate, c),
        Command::Genericity(c) => (Subcommand::Genericity, c),
        Command::Realize(c) => (Subcommand::Realize, c),
        Command::Verify(c) => (Subcommand::Verify, c),
        Command::Bundle(c) => (Subcommand::Bundle, c),
        Command::Plot(c) => (Subcommand::Plot, c),
    };
    let req = CommandRequest {
        subcommand,
        input: c.input,
        output: c.output,
        overrides: Overrides {
            big_r: c.big_r,
            eps: c.eps,
            series_order: c.series_order,
            resolution: c.resolution,
            ..Default::default()
        },
    };
    let out = run(&req);
    if let Some(m) = &out.message {
        eprintln!("troplag: {m}");
    }
    if !out.output.is_empty() {
        match &req.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &out.output) {
                    eprintln!("troplag: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            None => print!("{}", out.output),
        }
    }
    ExitCode::from(out.code as u8)
}
