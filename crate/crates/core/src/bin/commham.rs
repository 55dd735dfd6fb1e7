//! Command-line front end. Exit codes: 0 success or accept, 1 reject or
//! not found, 2 invalid input, 3 non-commuting model.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use commham::io::{load_certificate, load_model, model_to_json, save_certificate};
use commham::lattice::{Boundary, LatticeSpec};
use commham::linalg::{ground_space_projector, GAP_TOL};
use commham::model::{check_commuting, gen_ising, gen_random, gen_toric, IsingParams, RandomMethod};
use commham::oracle::{as_integer, certificate_sum, ground_dim, total_overlap, SumMethod};
use commham::prover::{exhaustive_search, greedy_search, Found, DEFAULT_LABEL_CAP, DEFAULT_RESTARTS};
use commham::verifier::{Verdict, Verifier};
use commham::Error;

/// `out!` that ignores a closed stdout (e.g. when piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "commham", version, about = "Ground-space certificates for commuting plaquette Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Toric,
    Ising,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    RotatedClassical,
    SignedToric,
    DiagonalField,
}

impl From<Method> for RandomMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::RotatedClassical => RandomMethod::RotatedClassical,
            Method::SignedToric => RandomMethod::SignedToric,
            Method::DiagonalField => RandomMethod::DiagonalField,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Subcommand)]
enum Command {
    /// Write a model file.
    Gen {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
        #[arg(long, value_enum, default_value = "open")]
        boundary: BoundaryArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Family for `--model random`.
        #[arg(long, value_enum, default_value = "rotated-classical")]
        method: Method,
        /// Uniform Ising coupling J.
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// Uniform Ising field.
        #[arg(long, default_value_t = 0.0)]
        field: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check pairwise commutation and report per-term ground-space ranks.
    Check { model: PathBuf },
    /// Verify a certificate.
    #[command(group(ArgGroup::new("thr").args(["threshold", "log2_threshold"])))]
    Verify {
        model: PathBuf,
        certificate: PathBuf,
        /// Accept when Ω is at least this (linear).
        #[arg(long)]
        threshold: Option<f64>,
        /// Accept when log2 Ω is at least this. Default -(2N+1).
        #[arg(long, allow_negative_numbers = true)]
        log2_threshold: Option<f64>,
    },
    /// Search for a certificate.
    #[command(group(ArgGroup::new("mode").args(["exhaustive", "greedy"]).required(true)))]
    Prove {
        model: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        greedy: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Largest exhaustive space, in slice labels.
        #[arg(long, default_value_t = DEFAULT_LABEL_CAP)]
        cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force tr[Π_B Π_W] on the full register.
    Oracle {
        model: PathBuf,
        /// Also sum Ω over every certificate and compare.
        #[arg(long)]
        sum_check: bool,
    },
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::NonCommuting { .. }
        | Error::ProjectorsNotCommuting { .. }
        | Error::ImpossibleAlgebraPair { .. }
        | Error::BasisMismatch { .. }
        | Error::SupportConflict { .. }
        | Error::DegreeViolation { .. } => 3,
        Error::NotIntegral { .. } | Error::SumMismatch { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}

fn run(command: Command) -> commham::Result<u8> {
    match command {
        Command::Gen {
            model,
            lx,
            ly,
            boundary,
            seed,
            method,
            coupling,
            field,
            output,
        } => {
            let boundary = match boundary {
                BoundaryArg::Open => Boundary::Open,
                BoundaryArg::Periodic => Boundary::Periodic,
            };
            let lattice = LatticeSpec::new(lx, ly, boundary)?;
            let model = match model {
                ModelKind::Toric => gen_toric(lattice),
                ModelKind::Ising => gen_ising(lattice, &IsingParams::uniform(&lattice, coupling, field)),
                ModelKind::Random => gen_random(lattice, seed, method.into()),
            };
            let text = model_to_json(&model)?;
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => out!("{text}"),
            }
            Ok(0)
        }
        Command::Check { model } => {
            let model = load_model(model)?;
            let report = check_commuting(&model);
            out!("pairs checked: {}", report.pairs_checked);
            for v in &report.violations {
                out!("non-commuting: {} {} (|[h_p,h_q]|_F = {:.3e})", v.p, v.q, v.norm);
            }
            out!("ground-space rank per term:");
            for (p, h) in model.terms() {
                let rank = ground_space_projector(h, GAP_TOL)?.trace().re.round();
                out!("  {p}: {rank}");
            }
            if report.is_ok() {
                out!("commuting: yes");
                Ok(0)
            } else {
                out!("commuting: no");
                Ok(3)
            }
        }
        Command::Verify {
            model,
            certificate,
            threshold,
            log2_threshold,
        } => {
            let model = load_model(model)?;
            let cert = load_certificate(certificate)?;
            let verifier = Verifier::new(&model)?;
            let threshold = log2_threshold.or(threshold.map(f64::log2));
            let verdict = verifier.verify(&cert, threshold)?;
            print_verdict(&verdict);
            Ok(if verdict.accept { 0 } else { 1 })
        }
        Command::Prove {
            model,
            exhaustive,
            greedy: _,
            seed,
            restarts,
            cap,
            output,
        } => {
            let model = load_model(model)?;
            let verifier = Verifier::new(&model)?;
            let found = if exhaustive {
                exhaustive_search(&verifier, None, cap)?
            } else {
                greedy_search(&verifier, None, seed, restarts)?
            };
            let Some(Found { certificate, verdict }) = found else {
                out!("no certificate found");
                return Ok(1);
            };
            if let Some(path) = &output {
                save_certificate(&certificate, path)?;
            }
            print_verdict(&verdict);
            if output.is_none() {
                out!("{}", commham::io::certificate_to_json(&certificate)?);
            }
            Ok(if verdict.accept { 0 } else { 1 })
        }
        Command::Oracle { model, sum_check } => {
            let model = load_model(model)?;
            check_commuting(&model).into_result()?;
            let overlap = total_overlap(&model)?;
            out!("tr[Pi_B Pi_W] = {overlap}");
            let rounded = as_integer(overlap)?;
            out!("integrality: pass ({rounded})");
            out!("ground-space dimension: {}", ground_dim(&model)?);
            if sum_check {
                let sum = certificate_sum(&model, SumMethod::Chain)?;
                out!("certificates: {}", sum.table.len());
                out!("sum of omega = {}", sum.sum);
                out!("sum identity: pass");
            }
            Ok(0)
        }
    }
}

fn print_verdict(v: &Verdict) {
    out!("{}", if v.accept { "ACCEPT" } else { "REJECT" });
    if v.omega.zero {
        out!("omega = 0");
    } else {
        out!("log2 omega = {}", v.omega.log2_magnitude);
    }
    out!("log2 threshold = {}", v.threshold_log2);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for f in &v.omega.factors {
        *counts.entry(f.kind.to_string()).or_default() += 1;
    }
    out!("factors:");
    for f in &v.omega.factors {
        out!("  {:<15} {:<24} log2 = {}", f.kind.to_string(), f.id, f.log2);
    }
    let summary: Vec<String> = counts.iter().map(|(k, n)| format!("{n} {k}")).collect();
    out!("({})", summary.join(", "));
}
