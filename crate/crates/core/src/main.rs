use std::fs;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use enumirror::cli::{emit_series, parse_genus, parse_key, run, RunConfig, CHECKS};
use enumirror::swlattice::DEFAULT_BUDGET;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Verify identities between quasimap and Vafa-Witten generating series.
#[derive(Debug, Parser)]
#[command(name = "enumirror", version)]
struct Args {
    /// Prime rank r.
    #[arg(long, default_value_t = 2)]
    rank: u32,
    /// Genus or inclusive range, e.g. 3 or 2-5.
    #[arg(long, default_value = "2")]
    genus: String,
    /// Truncation order of q-expansions.
    #[arg(long, default_value_t = 60)]
    order: i64,
    /// Check to run; repeatable. Omit for all.
    #[arg(long = "check", value_name = "NAME")]
    checks: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    report: Format,
    /// Test point in the upper half-plane, e.g. 1+2i; repeatable.
    #[arg(long = "tau", value_name = "A+Bi")]
    taus: Vec<String>,
    /// Cap on brute-force enumerations.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
    budget: u64,
    /// Tolerance for floating-point checks.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Record wall-clock time per check (output is then not reproducible).
    #[arg(long)]
    timings: bool,
    /// Print the q-expansion of one invariant (sl:d:a or pgl:d:a) and exit.
    #[arg(long, value_name = "KEY")]
    emit: Option<String>,
    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
    /// List check names and exit.
    #[arg(long)]
    list: bool,
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("enumirror: {msg}");
    ExitCode::from(2)
}

fn write(out: &Option<String>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        println!("{}", CHECKS.join("\n"));
        return ExitCode::SUCCESS;
    }
    let genus = match parse_genus(&args.genus) {
        Ok(g) => g,
        Err(e) => return config_error(e),
    };
    if let Some(key) = &args.emit {
        let text = parse_key(key, args.rank, genus[0]).and_then(|k| emit_series(&k, args.order));
        return match text {
            Ok(t) => match write(&args.out, &t) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => config_error(e),
            },
            Err(e) => config_error(e),
        };
    }
    let mut config = RunConfig {
        rank: args.rank,
        genus,
        order: args.order,
        checks: args.checks,
        budget: args.budget,
        tolerance: args.tolerance,
        timings: args.timings,
        ..RunConfig::default()
    };
    if !args.taus.is_empty() {
        config.taus = args.taus;
    }
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    let text = match args.report {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if let Err(e) = write(&args.out, &text) {
        return config_error(e);
    }
    ExitCode::from(report.exit_code() as u8)
}
