use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use qdiag::{exit_code, render_text, run, BlockCache, CheckReport, CliError, Options, CHECKS};
use qdiag_core::qma::DEFAULT_MAX_BLOCK;
use qdiag_core::{IdealVariant, Sign};

#[derive(Parser)]
#[command(name = "qdiag", version, about = "Exact checks of Hecke algebra and quantum matrix algebra identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check, or `all` of them in dependency order.
    Run(RunArgs),
    /// List the available checks.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Concat,
    ActionClosed,
}

#[derive(clap::Args)]
struct RunArgs {
    check: String,
    /// Alphabet size (dimension of V).
    #[arg(short = 'd', long = "d", visible_alias = "n")]
    d: Option<usize>,
    /// Degree or rank.
    #[arg(short, long)]
    r: Option<usize>,
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(short, long)]
    jobs: Option<usize>,
    /// Directory for JSON dumps of the reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest number of words allowed in one weight block.
    #[arg(long, default_value_t = DEFAULT_MAX_BLOCK)]
    max_block: usize,
    /// Block-result cache; defaults to $XDG_CACHE_HOME/qdiag or ~/.cache/qdiag.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, conflicts_with = "cache_dir")]
    no_cache: bool,
}

fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|d| d.join("qdiag"))
}

fn dump(dir: &PathBuf, reports: &[CheckReport]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("reports.json"), serde_json::to_string_pretty(reports)?)?;
    for check in CHECKS {
        let mine: Vec<&CheckReport> = reports.iter().filter(|r| r.check == check).collect();
        if !mine.is_empty() {
            std::fs::write(dir.join(format!("{check}.json")), serde_json::to_string_pretty(&mine)?)?;
        }
    }
    Ok(())
}

fn execute(args: RunArgs) -> Result<i32, CliError> {
    let cache = if args.no_cache {
        None
    } else {
        args.cache_dir.or_else(default_cache_dir)
    };
    let opts = Options {
        n: args.d,
        r: args.r,
        sign: args.sign.map(|s| match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }),
        variant: args.variant.map(|v| match v {
            VariantArg::Concat => IdealVariant::Concat,
            VariantArg::ActionClosed => IdealVariant::ActionClosed,
        }),
        max_block: args.max_block,
        cache: cache.map(|d| Arc::new(BlockCache::new(d))),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::InvalidParam(format!("thread pool: {e}")))?;
    let reports = pool.install(|| run(&args.check, &opts))?;
    match args.format {
        Format::Text => print!("{}", render_text(&reports)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
    }
    if let Some(dir) = &args.out {
        dump(dir, &reports)?;
    }
    Ok(exit_code(&reports))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for c in CHECKS {
                println!("{c}");
            }
            println!("all");
            ExitCode::SUCCESS
        }
        Command::Run(args) => match execute(args) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
