//! Command-line front end: exact Weyr characteristics, Kronecker invariants,
//! strict equivalence, Smith forms, and rank-one perturbation verification
//! over JSON inputs. Output is deterministic: identical inputs (and seeds)
//! produce byte-identical bytes.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use relpencil::error::{Error, Result};
use relpencil::pencil::{
    build_kronecker, invariants_from_weyr, pencil_weyr_via_kernel, pencil_weyr_via_range,
    strictly_equivalent_pencils, Pencil,
};
use relpencil::perturb::{perturbation_bound_report, run_perturbation_trials, TrialConfig};
use relpencil::relation::LinearRelation;
use relpencil::scalar::Scalar;
use relpencil::weyr::weyr_characteristic;

#[derive(Parser)]
#[command(name = "relpencil", version, about = "Exact Weyr/Kronecker analysis of linear relations and matrix pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output JSON here instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ExtraEigs {
    /// Additional eigenvalue candidates (scalar strings like "1/2" or "2+i").
    #[arg(long = "extra-eig")]
    extra_eigs: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Weyr characteristic (W, A, B, C) of a linear relation.
    WeyrRelation {
        /// Relation JSON {m, basis}; "-" reads stdin.
        input: String,
        #[command(flatten)]
        eigs: ExtraEigs,
    },
    /// Weyr characteristic and Kronecker invariants of a pencil.
    WeyrPencil {
        /// Pencil JSON {n, m, E, F}; "-" reads stdin.
        input: String,
        /// Which representation(s) to compute through; "both" cross-checks.
        #[arg(long, default_value = "both", value_parser = ["kernel", "range", "both"])]
        representation: String,
        #[command(flatten)]
        eigs: ExtraEigs,
    },
    /// Assemble the Kronecker canonical pencil from invariants.
    BuildKronecker {
        /// Invariants JSON {finite, alpha, beta, gamma}; "-" reads stdin.
        input: String,
    },
    /// Decide strict equivalence of two pencils.
    Equiv { input1: String, input2: String },
    /// Verify rank-one perturbation bounds for a pair of pencils, or run
    /// seeded randomized trials.
    Perturb {
        /// Unperturbed pencil JSON (omit when using --trials).
        input1: Option<String>,
        /// Perturbed pencil JSON.
        input2: Option<String>,
        /// Run this many randomized trials instead of checking a pair.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size bound for randomized canonical forms.
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        #[command(flatten)]
        eigs: ExtraEigs,
    },
    /// Smith invariant factors of the pencil sE - F.
    Smith { input: String },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

fn parse_eigs(eigs: &ExtraEigs) -> Result<Vec<Scalar>> {
    eigs.extra_eigs
        .iter()
        .map(|s| s.parse::<Scalar>())
        .collect()
}

fn emit<T: Serialize>(value: &T, output: &Option<std::path::PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{}", text),
    }
    Ok(())
}

fn warn_large_degrees(p: &Pencil) {
    let degree_cap = 64;
    if p.invariant_factors().iter().any(|f| f.degree() > degree_cap) {
        eprintln!(
            "warning: invariant factor degree exceeds {}; rational root search may be slow",
            degree_cap
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::WeyrRelation { input, eigs } => {
            let relation: LinearRelation = parse_json(&input)?;
            let extra = parse_eigs(&eigs)?;
            emit(&weyr_characteristic(&relation, &extra), &cli.output)
        }
        Command::WeyrPencil { input, representation, eigs } => {
            let pencil: Pencil = parse_json(&input)?;
            let extra = parse_eigs(&eigs)?;
            warn_large_degrees(&pencil);
            let weyr = match representation.as_str() {
                "kernel" => pencil_weyr_via_kernel(&pencil, &extra)?,
                "range" => pencil_weyr_via_range(&pencil, &extra)?,
                _ => {
                    let k = pencil_weyr_via_kernel(&pencil, &extra)?;
                    let r = pencil_weyr_via_range(&pencil, &extra)?;
                    if k != r {
                        return Err(Error::InconsistentInvariants(
                            "kernel and range routes disagree".into(),
                        ));
                    }
                    k
                }
            };
            let invariants = invariants_from_weyr(&weyr);
            emit(&json!({ "weyr": weyr, "invariants": invariants }), &cli.output)
        }
        Command::BuildKronecker { input } => {
            let invariants = parse_json(&input)?;
            emit(&build_kronecker(&invariants), &cli.output)
        }
        Command::Equiv { input1, input2 } => {
            let p: Pencil = parse_json(&input1)?;
            let q: Pencil = parse_json(&input2)?;
            let equivalent = strictly_equivalent_pencils(&p, &q)?;
            let reason = if p.n != q.n || p.m != q.m {
                "shape mismatch"
            } else if equivalent {
                "all invariants equal"
            } else {
                "invariants differ"
            };
            emit(&json!({ "equivalent": equivalent, "reason": reason }), &cli.output)
        }
        Command::Perturb { input1, input2, trials, seed, max_size, eigs } => {
            if let Some(trials) = trials {
                let summary = run_perturbation_trials(&TrialConfig { trials, max_size, seed });
                emit(&summary, &cli.output)
            } else {
                let (Some(path1), Some(path2)) = (input1, input2) else {
                    return Err(Error::Parse(
                        "perturb needs two pencil inputs or --trials".into(),
                    ));
                };
                let p: Pencil = parse_json(&path1)?;
                let q: Pencil = parse_json(&path2)?;
                let extra = parse_eigs(&eigs)?;
                emit(&perturbation_bound_report(&p, &q, &extra)?, &cli.output)
            }
        }
        Command::Smith { input } => {
            let pencil: Pencil = parse_json(&input)?;
            let factors = pencil.invariant_factors();
            let pretty: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
            emit(
                &json!({ "invariant_factors": factors, "display": pretty }),
                &cli.output,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!(
                "{}",
                json!({ "error": e.to_string(), "code": code })
            );
            ExitCode::from(code as u8)
        }
    }
}
