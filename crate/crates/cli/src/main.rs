//! `weierdim`: reports on Weierstrass-type functions of planar curves.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or hypothesis error.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::CommonArgs;

#[derive(Debug, Parser)]
#[command(name = "weierdim", version, about = "Box dimension tools for Weierstrass-type functions of planar curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Variant {
    Plain,
    Ell,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Curve constants L, delta, epsilon and the threshold constants.
    Constants,
    /// Evaluate W at one point.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Occupied b-adic cube counts per level, as CSV.
    Boxcount,
    /// Fit the box dimension over a level range.
    Dimension,
    /// Check the first and second order telescoping residual bounds.
    #[command(name = "verify-lemma21")]
    VerifyResiduals {
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 1000)]
        k_per_level: usize,
    },
    /// Check the covering inclusion for the curve or its corrected form.
    VerifyCovering {
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 256)]
        curve_samples: usize,
        #[arg(long, default_value_t = 1024)]
        rhs_samples: usize,
    },
    /// Check that the scaled disc neighbourhood lies in the image of W on a
    /// b-adic interval.
    VerifyOpenset {
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Interval indices, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        k: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        #[arg(long, default_value_t = 256)]
        curve_samples: usize,
        #[arg(long, default_value_t = 1 << 18)]
        rhs_samples: usize,
    },
    /// Build the telescoping counterexample curve and check its properties.
    Counterexample {
        /// Random points for the telescoping check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn report_error(kind: &str, message: &str) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{line}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            return report_error("usage", first);
        }
    };

    let outcome = match commands::run(cli.command, &cli.common) {
        Ok(outcome) => outcome,
        Err(e) => return report_error(e.kind(), &e.to_string()),
    };
    let written = match &cli.common.output {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        return report_error("io", &e.to_string());
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
