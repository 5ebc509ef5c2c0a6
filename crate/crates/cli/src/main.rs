use std::process::ExitCode;

use ccc2d_cli::commands::{
    self, BerArgs, ConstructArgs, Export1dArgs, RadiateArgs, VerifyArgs, EXIT_IO,
};
use clap::{Parser, Subcommand};

/// Build, verify and simulate 2D complete complementary codes.
#[derive(Debug, Parser)]
#[command(name = "ccc2d", version)]
struct Cli {
    /// Worker threads for verification and simulation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a (2^k, 2^k, 2^n, 2^m) CCC from a TOML spec and write a family file.
    Construct(ConstructArgs),
    /// Exhaustively check that a family is a CCC (exit 1 when it is not).
    Verify(VerifyArgs),
    /// Write the received-power pattern of one set used as precoders (CSV).
    Radiate(RadiateArgs),
    /// Monte-Carlo BER of the precoded 4x4 STBC link (CSV).
    Ber(BerArgs),
    /// Export a single-row family as 1D sequences and verify it.
    #[command(name = "export-1d")]
    Export1d(Export1dArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO as u8);
        }
    }
    let result = match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Verify(a) => commands::verify(a),
        Command::Radiate(a) => commands::radiate(a),
        Command::Ber(a) => commands::ber(a),
        Command::Export1d(a) => commands::export_1d(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code as u8)
        }
    }
}
