use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nielsen_core::action::{
    fixed_sublattice, involution_signatures, multi_reflection_operator, multi_twist_operator,
};
use nielsen_core::classify::classify_indefinite;
use nielsen_core::degtyarev::{build_certificate, verify_certificate};
use nielsen_core::lattice::{discriminant_group, Lattice, Parity};
use nielsen_core::scenario::{Format, Scenario};
use nielsen_core::suite::paper_suite;
use nielsen_core::Error;
use num_bigint::BigInt;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "nielsen",
    version,
    about = "Lattice and mapping-class obstruction toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice utilities
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Normal form of an indefinite unimodular form
    Classify {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        sig: i64,
        #[arg(long)]
        parity: Parity,
        #[arg(long)]
        json: bool,
    },
    /// Action of a multi-twist or multi-reflection on a lattice
    Action(ActionArgs),
    /// Run a scenario file through the obstruction engine
    Obstruct {
        file: PathBuf,
        /// Override the spin, H1 and characteristic-vector hypotheses of multi-reflections
        #[arg(long)]
        as_paper: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify the eigenlattice certificate
    Degtyarev {
        #[arg(long)]
        json: bool,
    },
    /// Run the full reproduction suite
    PaperSuite {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Invariants and discriminant group of a lattice expression
    Info {
        expr: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ActionArgs {
    #[arg(long)]
    lattice: String,
    /// Sphere classes, `;`-separated rows of `,`-separated integers
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "reflect",
        required_unless_present = "reflect"
    )]
    twist: Option<String>,
    /// Exceptional classes, same syntax as --twist
    #[arg(long, allow_hyphen_values = true)]
    reflect: Option<String>,
    #[arg(long)]
    json: bool,
}

fn parse_classes(src: &str) -> Result<Vec<Vec<BigInt>>, Error> {
    src.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim().parse::<BigInt>().map_err(|_| {
                        Error::InvalidParams(format!("`{}` is not an integer", x.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Lattice {
            command: LatticeCommand::Info { expr, json },
        } => {
            let lat = Lattice::parse(&expr)?;
            let inv = lat.invariants();
            let disc = if lat.is_nondegenerate() {
                Some(discriminant_group(&lat)?)
            } else {
                None
            };
            if json {
                print_json(&json!({ "expr": expr, "invariants": inv, "discriminant_group": disc }));
            } else {
                println!("{expr}");
                println!(
                    "rank {}, b+ {}, b- {}, signature {}, det {}, {:?}, unimodular {}",
                    inv.rank,
                    inv.b_plus,
                    inv.b_minus,
                    inv.signature,
                    inv.det,
                    inv.parity,
                    inv.unimodular
                );
                if let Some(d) = disc {
                    println!("discriminant group: {d}");
                }
            }
        }
        Command::Classify {
            rank,
            sig,
            parity,
            json,
        } => {
            let d = classify_indefinite(rank, sig, parity)?;
            if json {
                print_json(&json!({
                    "rank": rank,
                    "signature": sig,
                    "parity": d.parity,
                    "normal_form": d.normal_form.to_string(),
                }));
            } else {
                println!("{}", d.normal_form);
            }
        }
        Command::Action(args) => {
            let lat = Lattice::parse(&args.lattice)?;
            let (kind, f) = match (&args.twist, &args.reflect) {
                (Some(t), _) => (
                    "multi-twist",
                    multi_twist_operator(&lat, &parse_classes(t)?)?,
                ),
                (None, Some(r)) => (
                    "multi-reflection",
                    multi_reflection_operator(&lat, &parse_classes(r)?)?,
                ),
                (None, None) => unreachable!("clap requires one of --twist, --reflect"),
            };
            let (_, fixed_rank) = fixed_sublattice(&f);
            let sig = if f.is_involution() {
                Some(involution_signatures(&f)?)
            } else {
                None
            };
            if args.json {
                print_json(&json!({
                    "kind": kind,
                    "lattice": args.lattice,
                    "matrix": f.matrix(),
                    "involution": f.is_involution(),
                    "fixed_rank": fixed_rank,
                    "fixed_signatures": sig,
                }));
            } else {
                println!("{kind} on {}", args.lattice);
                println!("{}", f.matrix());
                println!("involution: {}, fixed rank {fixed_rank}", f.is_involution());
                if let Some(s) = sig {
                    println!(
                        "b_f+ {}, b_f- {}, sigma_f {}",
                        s.b_f_plus, s.b_f_minus, s.sigma_f
                    );
                }
            }
        }
        Command::Obstruct {
            file,
            as_paper,
            json,
        } => {
            let src = std::fs::read_to_string(&file)
                .map_err(|e| Error::InvalidParams(format!("{}: {e}", file.display())))?;
            let scenario = Scenario::parse(&src)?;
            let report = scenario.run(as_paper)?;
            if json || scenario.options.format == Format::Json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Degtyarev { json } => {
            let cert = build_certificate()?;
            let report = verify_certificate(&cert);
            if json {
                print_json(&json!({ "certificate": cert, "report": report }));
            } else {
                print!("{}", report.transcript());
            }
        }
        Command::PaperSuite { json } => {
            let report = paper_suite();
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Violations(v)) => {
            eprintln!("error: configuration rejected");
            for line in v {
                eprintln!("  {line}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
