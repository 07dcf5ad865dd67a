//! Command-line front end. Every subcommand is a thin adapter over one
//! library call; all verdict logic lives in the library.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict,
//! 2 usage or parse error, 3 stall / index ceiling / fixture exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use streamlab::ca::{self, eca_rule, LocalRule};
use streamlab::catalog;
use streamlab::codec::Codec;
use streamlab::expr::build_stream;
use streamlab::fst;
use streamlab::orbit::{orbit, to_ascii, to_pbm};
use streamlab::reducer;
use streamlab::stream::{Alphabet, Stream};
use streamlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "streamlab",
    about = "Streams, local cellular-automaton rules, transducers, and reducibility checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a prefix of a stream expression
    Gen {
        expr: String,
        #[arg(long, default_value_t = 64)]
        len: u64,
    },
    /// Apply a rule file to a stream and print the image prefix
    ApplyCa {
        rule: PathBuf,
        expr: String,
        #[arg(long, default_value_t = 64)]
        len: u64,
    },
    /// Run a transducer file on a stream and print its output letters
    ApplyFst {
        machine: PathBuf,
        expr: String,
        /// Number of output letters to produce
        #[arg(long, default_value_t = 64)]
        steps: u64,
    },
    /// Compose two rule files (first applied first) into one rule file
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Budgeted reducibility guess: bounded scan, then an area estimate
    Check {
        src: String,
        dst: String,
        /// Total window-processing budget
        #[arg(long)]
        cmax: u64,
        /// Slack factor as p or p/q
        #[arg(long, default_value = "1")]
        alpha: String,
    },
    /// Exhaustive radius sweep reporting witnesses and a rule on success
    Synth {
        src: String,
        dst: String,
        #[arg(long, default_value_t = 4)]
        max_radius: u64,
        #[arg(long, default_value_t = 2000)]
        horizon: u64,
    },
    /// Render a space-time diagram of repeated rule application
    Orbit {
        /// Use the elementary rule with this Wolfram number
        #[arg(long)]
        eca: Option<u8>,
        /// Rule file (omit when --eca is given), then the stream expression
        #[arg(value_name = "RULE-OR-EXPR")]
        first: String,
        #[arg(value_name = "EXPR")]
        second: Option<String>,
        #[arg(long, default_value_t = 64)]
        width: u64,
        #[arg(long, default_value_t = 16)]
        steps: u64,
        /// Write a portable bitmap here
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Print rows of 0/1 to stdout
        #[arg(long)]
        ascii: bool,
    },
    /// Print the marker-block binary encoding of a stream
    Encode {
        expr: String,
        /// The stream's alphabet, in order
        #[arg(long)]
        alphabet: String,
        /// Alternative letter order for code assignment
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long, default_value_t = 64)]
        len: u64,
    },
    /// Find the least index shifts aligning two streams
    Congruent {
        a: String,
        b: String,
        #[arg(long, default_value_t = 16)]
        max_shift: u64,
        #[arg(long, default_value_t = 256)]
        horizon: u64,
    },
    /// List the stream catalog
    Catalog,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Stall { .. }
                | Error::CeilingExceeded { .. }
                | Error::FixtureExhausted { .. }
                | Error::EmptyBlocks { .. } => 3,
                _ => 2,
            })
        }
    }
}

const YES: ExitCode = ExitCode::SUCCESS;
const NO: ExitCode = ExitCode::FAILURE;

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { expr, len } => {
            println!("{}", build_stream(&expr)?.prefix(len)?);
            Ok(YES)
        }
        Cmd::ApplyCa { rule, expr, len } => {
            let rule = read_rule(&rule)?;
            let image = ca::apply(&rule, &build_stream(&expr)?)?;
            println!("{}", image.prefix(len)?);
            Ok(YES)
        }
        Cmd::ApplyFst { machine, expr, steps } => {
            let text = std::fs::read_to_string(&machine)?;
            let fst = fst::parse_fst(&text)?;
            let out = fst::apply_fst(&fst, &build_stream(&expr)?)?;
            println!("{}", out.prefix(steps)?);
            Ok(YES)
        }
        Cmd::Compose { first, second, out } => {
            let composed = ca::compose(&read_rule(&first)?, &read_rule(&second)?)?;
            let table = ca::materialize(&composed)?;
            std::fs::write(&out, ca::format_rule(&table)?)?;
            println!("wrote {} (radius {})", out.display(), table.radius());
            Ok(YES)
        }
        Cmd::Check { src, dst, cmax, alpha } => {
            let alpha = parse_alpha(&alpha)?;
            let outcome =
                reducer::budget_check(&build_stream(&src)?, &build_stream(&dst)?, alpha, cmax)?;
            println!("{}", if outcome.answer { "Yes" } else { "No" });
            println!("radius: {}", outcome.radius);
            println!("index: {}", outcome.index);
            Ok(if outcome.answer { YES } else { NO })
        }
        Cmd::Synth { src, dst, max_radius, horizon } => {
            let verdict = reducer::synthesize(
                &build_stream(&src)?,
                &build_stream(&dst)?,
                max_radius,
                horizon,
            )?;
            print!("{}", reducer::report(&verdict));
            Ok(if verdict.answer { YES } else { NO })
        }
        Cmd::Orbit { eca, first, second, width, steps, out, ascii } => {
            let (rule, expr) = match (eca, second) {
                (Some(number), None) => (eca_rule(number), first),
                (None, Some(expr)) => (read_rule(&PathBuf::from(&first))?, expr),
                (Some(_), Some(_)) => {
                    return Err(Error::Other(
                        "give either --eca or a rule file, not both".into(),
                    ))
                }
                (None, None) => {
                    return Err(Error::Other(
                        "missing rule: pass --eca <n> or a rule file before the expression".into(),
                    ))
                }
            };
            let o = orbit(&rule, &build_stream(&expr)?, width, steps)?;
            if let Some(path) = &out {
                std::fs::write(path, to_pbm(&o))?;
            }
            if ascii || out.is_none() {
                print!("{}", to_ascii(&o));
            }
            Ok(YES)
        }
        Cmd::Encode { expr, alphabet, gamma, len } => {
            let stream = build_stream(&expr)?;
            let declared = Alphabet::new(&alphabet)?;
            declared.expect_same(stream.alphabet())?;
            let encoded = match gamma {
                None => Codec::new(declared).encode(&stream)?,
                Some(order) => {
                    let order = Alphabet::new(&order)?;
                    for c in declared.letters() {
                        if !order.contains(*c) {
                            return Err(Error::Other(format!(
                                "--gamma must reorder the alphabet letters; {c:?} is missing"
                            )));
                        }
                    }
                    if order.len() != declared.len() {
                        return Err(Error::Other(
                            "--gamma must reorder the alphabet letters".into(),
                        ));
                    }
                    let relabeled = {
                        let stream = stream.clone();
                        Stream::from_fn(order.clone(), move |i| stream.letter_at(i))
                    };
                    Codec::new(order).encode(&relabeled)?
                }
            };
            println!("{}", encoded.prefix(len)?);
            Ok(YES)
        }
        Cmd::Congruent { a, b, max_shift, horizon } => {
            let found = reducer::congruent(
                &build_stream(&a)?,
                &build_stream(&b)?,
                max_shift,
                horizon,
            )?;
            match found {
                Some((n, m)) => {
                    println!("congruent: {n} {m}");
                    Ok(YES)
                }
                None => {
                    println!("not congruent within shift {max_shift}");
                    Ok(NO)
                }
            }
        }
        Cmd::Catalog => {
            for entry in catalog::entries() {
                let label = if entry.params.is_empty() {
                    entry.name.to_string()
                } else {
                    format!("{}:{}", entry.name, entry.params)
                };
                println!("{label:24} {}", entry.doc);
            }
            Ok(YES)
        }
    }
}

fn read_rule(path: &PathBuf) -> Result<LocalRule> {
    let text = std::fs::read_to_string(path)?;
    ca::parse_rule(&text)
}

fn parse_alpha(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::Other(format!("alpha must be p or p/q with positive integers, got {text:?}"));
    let (p, q) = match text.split_once('/') {
        None => (text.parse().map_err(|_| bad())?, 1),
        Some((p, q)) => (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?),
    };
    if p == 0 || q == 0 {
        return Err(bad());
    }
    Ok((p, q))
}
