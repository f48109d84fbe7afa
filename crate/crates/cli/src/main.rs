use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pevkit::Limits;
use pevkit_cli::commands::{run, Command, Fault, JobConfig, OutputFormat};
use pevkit_cli::format::parse_tag;

/// Decide, witness and explore partial evaluations of formal expressions.
///
/// Exit status: 0 the relation holds (or the check passed), 1 it does not,
/// 2 bad input or a limit was hit, 3 an internal consistency check failed.
/// Inputs are JSON files, or inline JSON when the argument starts with `{`.
#[derive(Parser)]
#[command(name = "pevkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Algebra: a file, inline JSON, or one of nat-add, terminal, barycenter.
    #[arg(long, global = true)]
    alg: Option<String>,

    /// Monad instance: multiset, list, action, dist or terminal.
    #[arg(long, global = true, value_parser = tag_arg)]
    instance: Option<pevkit::Tag>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest expression whose nestings are enumerated.
    #[arg(long, global = true, default_value_t = Limits::default().fiber, value_parser = positive)]
    fiber_limit: usize,

    /// Largest reduction graph, and largest level of a complex.
    #[arg(long, global = true, default_value_t = Limits::default().nodes, value_parser = positive)]
    node_cap: usize,

    /// Largest number of LP variables.
    #[arg(long, global = true, default_value_t = Limits::default().lp_vars, value_parser = positive)]
    lp_vars: usize,

    /// Largest number of fillers enumerated.
    #[arg(long, global = true, default_value_t = Limits::default().fillers, value_parser = positive)]
    filler_limit: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Unit,
    Eval,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether P partially evaluates to Q, printing a witness.
    Check { p: String, q: String },
    /// Re-validate a serialized witness.
    Validate {
        witness: String,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// The reduction graph of everything reachable from SEED.
    Graph { seed: String },
    /// The bar construction truncated at a level, over SEED's graph.
    Bar {
        seed: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Check monad and algebra laws on random samples.
    Laws {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Compare second-order dominance with the partial-evaluation LP on the line.
    Sosd { p: String, q: String },
}

fn tag_arg(s: &str) -> Result<pevkit::Tag, String> {
    parse_tag(s).map_err(|e| e.0)
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common;
    let command = match cli.command {
        Cmd::Check { p, q } => Command::Check { p, q },
        Cmd::Validate {
            witness,
            source,
            target,
        } => Command::Validate {
            witness,
            source,
            target,
        },
        Cmd::Graph { seed } => Command::Graph { seed },
        Cmd::Bar { seed, level } => Command::Bar { seed, level },
        Cmd::Laws {
            samples,
            seed,
            inject_fault,
        } => Command::Laws {
            samples,
            seed,
            fault: inject_fault.map(|f| match f {
                FaultArg::Unit => Fault::Unit,
                FaultArg::Eval => Fault::Eval,
            }),
        },
        Cmd::Sosd { p, q } => Command::Sosd { p, q },
    };
    let job = JobConfig {
        command,
        instance: c.instance,
        algebra: c.alg,
        limits: Limits {
            fiber: c.fiber_limit,
            nodes: c.node_cap,
            fillers: c.filler_limit,
            lp_vars: c.lp_vars,
        },
        format: match c.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Dot => OutputFormat::Dot,
        },
    };
    match run(&job) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("pevkit: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
