//! Command-line front end: one subcommand per check family, JSON or text
//! reports on stdout, diagnostics on stderr. Exit code 0 when every check
//! passes, 1 on any failure, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use kronrho::report::{
    cmd_all, cmd_gamma, cmd_hilbert, cmd_mesh, cmd_preinj, cmd_purity, cmd_qgr, cmd_torsion,
    parse_field_spec, RunConfig, TorsionSource,
};

#[derive(Parser)]
#[command(name = "kronrho", version, about = "Exact checks for the quadric quotient algebra and the N-Kronecker quiver")]
struct Cli {
    /// Number of variables / arrows (at least 2)
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Coefficient field: q or fp:<p>
    #[arg(long, global = true, default_value = "fp:32003")]
    field: String,
    /// Cap on graded degrees (default depends on n)
    #[arg(long, global = true)]
    cap_deg: Option<usize>,
    /// Cap on chain lengths (default depends on n)
    #[arg(long, global = true)]
    cap_len: Option<usize>,
    /// Seed for all randomized witnesses
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit the report as JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Treat inconclusive checks as failures
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graded dimensions and the exact sequence of slices
    Hilbert,
    /// Graded-algebra isomorphism onto chain morphisms
    Gamma,
    /// Injectivity witnesses along the preprojective chain
    Purity,
    /// Preinjective chain, transpose model, evaluation surjectivity
    Preinj,
    /// Torsion-pair decomposition and stabilization
    Torsion {
        /// Number of seeded random modules
        #[arg(long, default_value_t = 10)]
        random: usize,
        /// Check a single module from a JSON file instead
        #[arg(long)]
        module_file: Option<PathBuf>,
    },
    /// Mesh category against chain Hom spaces
    Mesh,
    /// Graded-side Hom dimensions, tilting pattern, covers
    Qgr,
    /// The full suite
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match parse_field_spec(&cli.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.n < 2 {
        eprintln!("error: --n must be at least 2");
        return ExitCode::from(2);
    }
    let cfg = RunConfig {
        n: cli.n,
        field,
        cap_deg: cli.cap_deg,
        cap_len: cli.cap_len,
        seed: cli.seed,
        strict: cli.strict,
    };
    let start = Instant::now();
    let report = match &cli.command {
        Command::Hilbert => cmd_hilbert(&cfg),
        Command::Gamma => cmd_gamma(&cfg),
        Command::Purity => cmd_purity(&cfg),
        Command::Preinj => cmd_preinj(&cfg),
        Command::Torsion { random, module_file } => {
            let source = match module_file {
                Some(p) => TorsionSource::File(p.clone()),
                None => TorsionSource::Random(*random),
            };
            cmd_torsion(&cfg, &source)
        }
        Command::Mesh => cmd_mesh(&cfg),
        Command::Qgr => cmd_qgr(&cfg),
        Command::All => cmd_all(&cfg),
    };
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text(Some(start.elapsed())));
    }
    ExitCode::from(report.exit_code(cli.strict) as u8)
}
