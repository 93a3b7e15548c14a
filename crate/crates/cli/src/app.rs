//! Command-line parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use jacfiber_core::{
    fiber_equation, graded_syzygy_kernel, syzygy::syzygy_dimension, tangent_rank_check, Error, Field, FiberRecord,
    MvPoly, ProjectivePoint, RationalMapInput,
};

use crate::analysis::{analyze, render_text, AnalyzeOptions, FiberSummary};
use crate::mapfile::{parse_point, read_map_file, MapInput};
use crate::selftest::{render_table, run_selftest};

/// Exit status for input errors.
pub const EXIT_INPUT: i32 = 1;
/// Exit status when a degree inequality or pinned value fails.
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jacfiber", version, about = "Jacobian minors, contracted fibers and degree bounds of rational maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline: minor gcd, syzygies, fiber discovery, degree chain.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of random lines used for fiber discovery.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long)]
        json: bool,
        /// Recompute deg F modulo a second prime and warn on mismatch.
        #[arg(long)]
        second_prime: bool,
    },
    /// Equation of the divisorial part of the fiber over a target point.
    Fiber {
        file: PathBuf,
        /// Target point, e.g. "0,0,1,1".
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Dimensions of the graded pieces of the syzygy module.
    Syzygy {
        file: PathBuf,
        /// Largest degree examined; defaults to the degree of the forms.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Compare rank J(q) with the rank of the differential at a source point.
    RankCheck {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Run the built-in fixtures and invariant checks.
    Selftest {
        #[arg(long)]
        json: bool,
        /// Read fixture files `<name>.map` from this directory.
        #[arg(long)]
        fixture_dir: Option<PathBuf>,
    },
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::ChainViolation(_)) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze { file, seed, budget, json, second_prime } => {
            let (map, input) = read_map_file(&file)?;
            let report = analyze(&map, &input, &AnalyzeOptions { seed, budget, second_prime })?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(out, "{}", render_text(&report))?;
            }
            Ok(if report.ok() { 0 } else { EXIT_VIOLATION })
        }
        Command::Fiber { file, point, json } => {
            let (_, input) = read_map_file(&file)?;
            let summary = match &input {
                MapInput::Prime(i) => fiber_command(i, &point)?,
                MapInput::Rational(i) => fiber_command(i, &point)?,
            };
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            } else {
                writeln!(out, "y = {}", summary.y)?;
                if summary.deg == 0 {
                    writeln!(out, "h = 1 (no divisorial part)")?;
                } else {
                    writeln!(out, "h = {}", summary.h)?;
                    for p in &summary.parts {
                        writeln!(out, "  square-free part ({}) with multiplicity {}", p.factor, p.multiplicity)?;
                    }
                }
                writeln!(out, "deg {}, weighted deg {}", summary.deg, summary.weighted_deg)?;
            }
            Ok(0)
        }
        Command::Syzygy { file, max_degree } => {
            let (_, input) = read_map_file(&file)?;
            match &input {
                MapInput::Prime(i) => syzygy_command(i, max_degree, out)?,
                MapInput::Rational(i) => syzygy_command(i, max_degree, out)?,
            }
            Ok(0)
        }
        Command::RankCheck { file, point } => {
            let (_, input) = read_map_file(&file)?;
            let r = match &input {
                MapInput::Prime(i) => tangent_rank_check(i, &parse_point(i.field(), &point)?)?,
                MapInput::Rational(i) => tangent_rank_check(i, &parse_point(i.field(), &point)?)?,
            };
            writeln!(out, "rank J(q) = {}", r.rank_j)?;
            writeln!(out, "rank dphi_q = {}", r.rank_dphi)?;
            writeln!(out, "rank J(q) = rank dphi_q + 1: {}", if r.consistent { "yes" } else { "no" })?;
            Ok(0)
        }
        Command::Selftest { json, fixture_dir } => {
            let report = run_selftest(fixture_dir.as_deref());
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(out, "{}", render_table(&report))?;
            }
            Ok(if report.passed { 0 } else { EXIT_VIOLATION })
        }
    }
}

fn fiber_command<F: Field>(input: &RationalMapInput<F>, point: &str) -> anyhow::Result<FiberSummary> {
    let coords = parse_point(input.field(), point)?;
    if coords.len() != input.forms().len() {
        return Err(Error::BadPoint { expected: input.forms().len(), found: coords.len() }.into());
    }
    let y = ProjectivePoint::new(input.field(), coords)?;
    let h = fiber_equation(input, &y)?;
    let record = FiberRecord::new(y, h).context("square-free decomposition of h")?;
    Ok(FiberSummary::new(input, &record))
}

fn syzygy_command<F: Field>(input: &RationalMapInput<F>, max_degree: Option<u32>, out: &mut dyn Write) -> anyhow::Result<()> {
    let cap = max_degree.unwrap_or(input.d());
    let names = input.names();
    let mut first = None;
    for nu in 0..=cap {
        let dim = syzygy_dimension(input, nu);
        writeln!(out, "degree {nu}: dim Syz(I) = {dim}")?;
        if dim > 0 && first.is_none() {
            first = Some(nu);
        }
    }
    match first {
        Some(nu) => {
            writeln!(out, "indeg Syz(I) = {nu}")?;
            let ker = graded_syzygy_kernel(input, nu);
            writeln!(out, "basis in degree {nu}:")?;
            for tuple in &ker.basis {
                let parts: Vec<String> = tuple.iter().map(|a: &MvPoly<F>| a.display_with(names).to_string()).collect();
                writeln!(out, "  ({})", parts.join(", "))?;
            }
        }
        None => writeln!(out, "indeg Syz(I) > {cap}")?,
    }
    Ok(())
}
