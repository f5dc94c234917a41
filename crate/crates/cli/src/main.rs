//! Command-line front end: parse arrangement documents, run operations,
//! emit machine-readable certificates and human-readable reports.
//!
//! Subcommands compose through standard streams, so pipelines like
//! `multiarr catalog grrl 3 3 | multiarr exponents` work directly.
//! Exit codes: 0 computed, 1 property/verification failure, 2 input error,
//! 3 budget exhausted.

mod render;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use multiarr_core::chains::{self, ChainKind, SearchStatus, DEFAULT_BUDGET};
use multiarr_core::derivation::exponents_oracle;
use multiarr_core::document::{
    self, arrangement_from_doc, arrangement_to_doc, certificate_to_doc, chain_from_doc,
    chain_to_doc, lattice_to_doc, parse_form_list, parse_linear_form, parse_span,
    restriction_to_doc, verdict_to_doc, verification_to_doc, ArrangementDoc, ChainDoc,
    DefiningPolynomialDoc, HereditaryDoc, HereditaryFlatDoc, TripleDoc, FORMAT_VERSION,
};
use multiarr_core::{catalog, euler, lattice, Error as CoreError, Multiarrangement};

const EXIT_OK: i32 = 0;
const EXIT_VERIFICATION_FAILURE: i32 = 1;
const EXIT_INPUT_ERROR: i32 = 2;
const EXIT_BUDGET_EXHAUSTED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Machine,
    Human,
}

#[derive(Parser)]
#[command(
    name = "multiarr",
    version,
    about = "Exact computations with hyperplane multiarrangements: lattices, Euler restrictions, freeness certificates, inductive and recursive chains"
)]
struct Cli {
    /// Output rendering: machine (JSON documents) or human report
    #[arg(long, global = true, value_enum, default_value_t = Format::Machine)]
    format: Format,

    /// Worker threads for independent subcomputations (default: all cores).
    /// Results are merged in canonical order, so output does not depend on N.
    #[arg(long, global = true, env = "MULTIARR_JOBS")]
    jobs: Option<usize>,

    /// Output path (defaults to stdout)
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries, or emit a named arrangement
    Catalog {
        /// Entry name (omit to list all entries)
        name: Option<String>,
        /// Integer parameters of the entry
        params: Vec<u32>,
    },
    /// Flats of the intersection lattice, with ranks
    Lattice { input: Option<PathBuf> },
    /// Defining polynomial Q(A, nu)
    Q { input: Option<PathBuf> },
    /// Localization at a flat (forms) or at a spanned subspace (vectors)
    Localize {
        input: Option<PathBuf>,
        /// Forms cutting out the flat, e.g. "x; y+z"
        #[arg(long)]
        flat: Option<String>,
        /// Spanning vectors of the subspace, e.g. "1,0,0; 0,1,-1"
        #[arg(long)]
        span: Option<String>,
    },
    /// Restriction to a hyperplane with Euler multiplicities
    Restrict {
        input: Option<PathBuf>,
        /// The pivot hyperplane as a linear form, e.g. "x" or "x1 - zeta*x2"
        #[arg(long)]
        pivot: String,
    },
    /// The full triple (original, deletion, Euler restriction)
    Triple {
        input: Option<PathBuf>,
        #[arg(long)]
        pivot: String,
    },
    /// Restriction of a simple arrangement with Ziegler's canonical multiplicity
    Ziegler {
        input: Option<PathBuf>,
        #[arg(long)]
        pivot: String,
    },
    /// Freeness certificate of the derivation module (exponents oracle)
    Exponents {
        input: Option<PathBuf>,
        /// Degree cap for the generator scan (default |nu|)
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Search for an inductive chain
    IndSearch {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search for a recursive chain over a hyperplane pool
    RecSearch {
        input: Option<PathBuf>,
        /// Pool of hyperplanes as forms, e.g. "x; y; x+y" (default: the support)
        #[arg(long)]
        pool: Option<String>,
        /// Multiplicity cap of the searched space (default: max multiplicity)
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Re-verify a chain document step by step
    VerifyChain { input: Option<PathBuf> },
    /// Descend a chain document to a localization
    Descend {
        input: Option<PathBuf>,
        /// Forms cutting out the flat of the chain's target
        #[arg(long)]
        flat: String,
    },
    /// Hereditary inductive freeness over all flats under an order
    Hered {
        input: Option<PathBuf>,
        /// Total order as comma-separated support indices (default: canonical)
        #[arg(long)]
        order: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Product of two arrangements (fields are merged)
    Product {
        left: PathBuf,
        /// Second factor (defaults to stdin)
        right: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    let code = match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            classify_error(&err)
        }
    };
    std::process::exit(code);
}

fn classify_error(err: &anyhow::Error) -> i32 {
    if let Some(core) = err.downcast_ref::<CoreError>() {
        match core {
            CoreError::Internal(_) => EXIT_VERIFICATION_FAILURE,
            _ => EXIT_INPUT_ERROR,
        }
    } else {
        EXIT_INPUT_ERROR
    }
}

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn read_arrangement(path: &Option<PathBuf>) -> anyhow::Result<Multiarrangement> {
    let text = read_input(path)?;
    let doc: ArrangementDoc = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!(CoreError::Parse(format!("{e}"))))?;
    Ok(arrangement_from_doc(&doc)?)
}

fn read_chain(path: &Option<PathBuf>) -> anyhow::Result<multiarr_core::Chain> {
    let text = read_input(path)?;
    let doc: ChainDoc = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!(CoreError::Parse(format!("{e}"))))?;
    Ok(chain_from_doc(&doc)?)
}

fn emit<T: Serialize>(cli: &Cli, doc: &T, human: String) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Machine => format!("{}\n", serde_json::to_string_pretty(doc)?),
        Format::Human => human,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pivot_index(arr: &Multiarrangement, pivot: &str) -> anyhow::Result<usize> {
    let form = parse_linear_form(arr.ctx(), arr.dimension(), pivot)?;
    arr.find_form(&form)
        .filter(|&i| arr.multiplicity(i) >= 1)
        .ok_or_else(|| anyhow::anyhow!(CoreError::HyperplaneNotFound(pivot.to_string())))
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Catalog { name, params } => {
            let Some(name) = name else {
                #[derive(Serialize)]
                struct EntryDoc {
                    name: &'static str,
                    params: &'static str,
                    description: &'static str,
                }
                let entries: Vec<EntryDoc> = catalog::catalog_entries()
                    .into_iter()
                    .map(|e| EntryDoc {
                        name: e.name,
                        params: e.params,
                        description: e.description,
                    })
                    .collect();
                let mut human = String::from("catalog entries:\n");
                for e in &entries {
                    human.push_str(&format!("  {} {} - {}\n", e.name, e.params, e.description));
                }
                emit(cli, &entries, human)?;
                return Ok(EXIT_OK);
            };
            let arr = catalog::build_entry(name, params)?;
            let doc = arrangement_to_doc(&arr);
            emit(cli, &doc, render::arrangement(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Lattice { input } => {
            let arr = read_arrangement(input)?;
            let lat = lattice::intersection_lattice(&arr);
            let doc = lattice_to_doc(&lat);
            emit(cli, &doc, render::lattice(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Q { input } => {
            let arr = read_arrangement(input)?;
            let q = arr.defining_polynomial();
            let doc = DefiningPolynomialDoc {
                version: FORMAT_VERSION,
                degree: arr.total_multiplicity(),
                polynomial: document::polynomial_to_doc(&q),
            };
            emit(cli, &doc, render::defining_polynomial(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Localize { input, flat, span } => {
            let arr = read_arrangement(input)?;
            let localized = match (flat, span) {
                (Some(forms), None) => {
                    let forms = parse_form_list(arr.ctx(), arr.dimension(), forms)?;
                    let flat = lattice::flat_from_forms(&arr, &forms)?;
                    arr.localize_span_rows(&flat.normal_basis)
                }
                (None, Some(vectors)) => {
                    let vectors = parse_span(arr.ctx(), arr.dimension(), vectors)?;
                    arr.localize_vectors(&vectors)
                }
                _ => {
                    return Err(anyhow::anyhow!(CoreError::InvalidInput(
                        "localize requires exactly one of --flat or --span".into()
                    )))
                }
            };
            let doc = arrangement_to_doc(&localized);
            emit(cli, &doc, render::arrangement(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Restrict { input, pivot } => {
            let arr = read_arrangement(input)?;
            let h0 = pivot_index(&arr, pivot)?;
            let (restricted, _) = euler::restriction_with_euler(&arr, h0)?;
            let doc = restriction_to_doc(arr.form(h0), &restricted);
            emit(cli, &doc, render::restriction(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Triple { input, pivot } => {
            let arr = read_arrangement(input)?;
            let h0 = pivot_index(&arr, pivot)?;
            let t = euler::triple(&arr, h0)?;
            let doc = TripleDoc {
                version: FORMAT_VERSION,
                original: arrangement_to_doc(&t.original),
                deleted: arrangement_to_doc(&t.deleted),
                restricted: restriction_to_doc(&t.pivot, &t.restricted),
            };
            emit(cli, &doc, render::triple(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Ziegler { input, pivot } => {
            let arr = read_arrangement(input)?;
            let h0 = pivot_index(&arr, pivot)?;
            let (restricted, _) = euler::ziegler_multiplicity(&arr, h0)?;
            let doc = restriction_to_doc(arr.form(h0), &restricted);
            emit(cli, &doc, render::restriction(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Exponents { input, cap } => {
            let arr = read_arrangement(input)?;
            let cert = exponents_oracle(&arr, *cap);
            let doc = certificate_to_doc(&cert);
            emit(cli, &doc, render::certificate(&doc))?;
            Ok(EXIT_OK)
        }
        Command::IndSearch { input, budget } => {
            let arr = read_arrangement(input)?;
            let verdict = chains::inductive_search(&arr, *budget)?;
            let doc = verdict_to_doc(&arr, &verdict);
            emit(cli, &doc, render::chain(&doc))?;
            Ok(match verdict.status {
                SearchStatus::BudgetExhausted => EXIT_BUDGET_EXHAUSTED,
                _ => EXIT_OK,
            })
        }
        Command::RecSearch {
            input,
            pool,
            cap,
            budget,
        } => {
            let arr = read_arrangement(input)?;
            let pool = match pool {
                Some(p) if p != "support" => {
                    Some(parse_form_list(arr.ctx(), arr.dimension(), p)?)
                }
                _ => None,
            };
            let cap = cap.unwrap_or_else(|| {
                arr.support()
                    .map(|(_, h)| h.multiplicity)
                    .max()
                    .unwrap_or(1)
            });
            let verdict = chains::recursive_search(&arr, pool, cap, *budget)?;
            let doc = verdict_to_doc(&arr, &verdict);
            emit(cli, &doc, render::chain(&doc))?;
            Ok(match verdict.status {
                SearchStatus::BudgetExhausted => EXIT_BUDGET_EXHAUSTED,
                _ => EXIT_OK,
            })
        }
        Command::VerifyChain { input } => {
            let chain = read_chain(input)?;
            let verification = chains::verify_chain(&chain)?;
            let doc = verification_to_doc(&verification);
            emit(cli, &doc, render::verification(&doc))?;
            Ok(if verification.ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILURE
            })
        }
        Command::Descend { input, flat } => {
            let chain = read_chain(input)?;
            let forms = parse_form_list(&chain.ctx, chain.dimension, flat)?;
            let flat = lattice::flat_from_forms(&chain.target, &forms)?;
            let descended = chains::descend_chain(&chain, &flat)?;
            let verification = chains::verify_chain(&descended)?;
            let doc = chain_to_doc(&descended, Some(verification.ok), None);
            emit(cli, &doc, render::chain(&doc))?;
            Ok(if verification.ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILURE
            })
        }
        Command::Hered {
            input,
            order,
            budget,
        } => {
            let arr = read_arrangement(input)?;
            let order = match order {
                Some(o) => Some(
                    o.split(',')
                        .map(|s| {
                            s.trim().parse::<usize>().map_err(|_| {
                                anyhow::anyhow!(CoreError::Parse(format!(
                                    "bad order index {s:?}"
                                )))
                            })
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?,
                ),
                None => None,
            };
            let report = chains::hereditary_inductive_check(&arr, order, *budget)?;
            let doc = HereditaryDoc {
                version: FORMAT_VERSION,
                order: report.order.clone(),
                all_member: report.all_member,
                any_budget_exhausted: report.any_budget_exhausted,
                flats: report
                    .per_flat
                    .iter()
                    .map(|fv| HereditaryFlatDoc {
                        rank: fv.flat.rank,
                        containing: fv.flat.containing.clone(),
                        status: match fv.verdict.status {
                            SearchStatus::Member => "member".into(),
                            SearchStatus::NonMember => "non_member".into(),
                            SearchStatus::BudgetExhausted => "budget_exhausted".into(),
                        },
                        exponents: fv.verdict.chain.as_ref().map(|c| {
                            c.steps
                                .last()
                                .map(|s| s.exponents_after.as_slice().to_vec())
                                .unwrap_or_default()
                        }),
                    })
                    .collect(),
            };
            emit(cli, &doc, render::hereditary(&doc))?;
            Ok(if report.any_budget_exhausted {
                EXIT_BUDGET_EXHAUSTED
            } else {
                EXIT_OK
            })
        }
        Command::Product { left, right } => {
            let a = read_arrangement(&Some(left.clone()))?;
            let b = read_arrangement(right)?;
            let p = a.product(&b)?;
            let doc = arrangement_to_doc(&p);
            emit(cli, &doc, render::arrangement(&doc))?;
            Ok(EXIT_OK)
        }
    }
}

// Chains are emitted kind-tagged; search verdicts reuse the same document
// with an explicit status, so `verify-chain` can consume either.
#[allow(dead_code)]
fn kind_name(kind: ChainKind) -> &'static str {
    match kind {
        ChainKind::Inductive => "inductive",
        ChainKind::Recursive => "recursive",
    }
}
