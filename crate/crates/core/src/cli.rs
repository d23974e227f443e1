//! Command-line front end.
//!
//! ```text
//! sp match    --driver F --target F [--max-hits N] [--beam N]
//! sp parse    --grammar F --new F [--beam N] [--alignments K] [--format text|json] [--sort-new]
//! sp generate --grammar F --encoding F
//! sp learn    --corpus F --out F [--grammar-beam N] [--align-beam N]
//! sp prob     --grammar F --new F [--sort-new]
//! sp cost     --grammar F [--corpus F]
//! sp verify   --grammar F --new F
//! sp verify   --driver F --target F
//! ```
//!
//! Exit status is 0 on success, 1 on a usage error (unknown flag, missing
//! file, instance outside the oracle's bounds) and 2 on a malformed input
//! file.
//!
//! `parse --format json` prints one object:
//!
//! ```text
//! {"alignments": [{"cd": f64, "probability": f64,
//!                  "rows": [{"pattern": id|null, "symbols": [str], "roles": "IC.."}],
//!                  "columns": [[[row, position], ...], ...],
//!                  "encoding": [str], "residue": [position]}]}
//! ```

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alignment::{
    build_alignments, derive_encoding, generate, relative_probabilities, AlignParams,
    MultipleAlignment,
};
use crate::cost::{build_cost_model, grammar_cost};
use crate::error::Error;
use crate::format::{load_corpus, load_grammar, parse_encodings, renumbered, save_grammar};
use crate::learner::{compile_universe, learn_with_pool, GrammarCandidate, LearnParams};
use crate::matcher::{find_hits, MatchParams};
use crate::oracle::{exhaustive_alignments, lcs_score, Bounds};
use crate::pattern::{Grammar, Origin, Pattern};
use crate::render::{render_alignment, Orientation};
use crate::symbol::Symbol;

#[derive(Parser, Debug)]
#[command(name = "sp", about = "Pattern matching, alignment and grammar learning by compression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best partial matches of one sequence against another.
    Match {
        #[arg(long)]
        driver: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = MatchParams::default().max_hits)]
        max_hits: usize,
        #[arg(long, default_value_t = MatchParams::default().beam_width)]
        beam: usize,
    },
    /// Multiple alignments of New patterns against a grammar.
    Parse {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        new: PathBuf,
        #[arg(long, default_value_t = AlignParams::default().align_beam)]
        beam: usize,
        #[arg(long, default_value_t = AlignParams::default().max_alignments)]
        alignments: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Put the New patterns in sorted order before concatenating them.
        #[arg(long)]
        sort_new: bool,
    },
    /// Surface sequences for encodings, one encoding per line.
    Generate {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        encoding: PathBuf,
    },
    /// Learns a grammar from a corpus and writes the best one.
    Learn {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = LearnParams::default().grammar_beam)]
        grammar_beam: usize,
        #[arg(long, default_value_t = AlignParams::default().align_beam)]
        align_beam: usize,
    },
    /// Relative probabilities of the alignments of New.
    Prob {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        new: PathBuf,
        #[arg(long)]
        sort_new: bool,
    },
    /// Grammar size G, corpus encoding size E and their sum, in bits.
    Cost {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Compares the engine with brute force on a small instance.
    Verify {
        #[arg(long, requires = "new")]
        grammar: Option<PathBuf>,
        #[arg(long)]
        new: Option<PathBuf>,
        #[arg(long, requires = "target", conflicts_with = "grammar")]
        driver: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Format(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::BoundsExceeded(_) => Failure::Usage(e.to_string()),
            _ => Failure::Format(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Runs one command line. `argv[0]` is the program name.
pub fn dispatch(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Format(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

/// All tokens of a file, every line joined, as one pattern.
fn load_sequence(path: &PathBuf) -> Result<Pattern, Failure> {
    let lines = load_corpus(path)?;
    let symbols: Vec<Symbol> = lines.iter().flat_map(|p| p.symbols().to_vec()).collect();
    Pattern::new(0, symbols, 1, Origin::New)
        .map_err(|_| Failure::Format(format!("{}: no tokens", path.display())))
}

fn load_new(path: &PathBuf, sort: bool) -> Result<Vec<Pattern>, Failure> {
    let mut new = load_corpus(path)?;
    if sort {
        new.sort_by_key(|p| texts(p.symbols()));
    }
    Ok(new)
}

fn texts(symbols: &[Symbol]) -> Vec<String> {
    symbols.iter().map(|s| s.text().to_string()).collect()
}

#[derive(Serialize)]
struct JsonRow {
    pattern: Option<u32>,
    symbols: Vec<String>,
    roles: String,
}

#[derive(Serialize)]
struct JsonAlignment {
    cd: f64,
    probability: f64,
    rows: Vec<JsonRow>,
    columns: Vec<Vec<(usize, usize)>>,
    encoding: Vec<String>,
    residue: Vec<usize>,
}

#[derive(Serialize)]
struct JsonParse {
    alignments: Vec<JsonAlignment>,
}

fn json_alignment(a: &MultipleAlignment, probability: f64) -> JsonAlignment {
    JsonAlignment {
        cd: a.score(),
        probability,
        rows: a
            .rows()
            .iter()
            .map(|r| JsonRow {
                pattern: r.pattern,
                symbols: texts(&r.symbols),
                roles: r.symbols.iter().map(|s| s.role.mask_char()).collect(),
            })
            .collect(),
        columns: a.columns().to_vec(),
        encoding: texts(&derive_encoding(a).symbols),
        residue: a.residue(),
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Match {
            driver,
            target,
            max_hits,
            beam,
        } => {
            let d = load_sequence(&driver)?;
            let t = load_sequence(&target)?;
            let model = build_cost_model(
                &Grammar::from_patterns([d.clone(), Pattern::new(1, t.symbols().to_vec(), 1, Origin::New).expect("nonempty")])
                    .expect("two distinct ids"),
            );
            let params = MatchParams {
                beam_width: beam,
                max_hits,
                ..MatchParams::default()
            };
            for (i, h) in find_hits(d.symbols(), t.symbols(), &params, &model)
                .iter()
                .enumerate()
            {
                let pairs: Vec<String> = h.pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                writeln!(
                    out,
                    "hit {} score={:.3} pairs={} {}",
                    i + 1,
                    h.score,
                    h.pairs.len(),
                    pairs.join(" ")
                )?;
            }
        }
        Command::Parse {
            grammar,
            new,
            beam,
            alignments,
            format,
            sort_new,
        } => {
            let g = load_grammar(&grammar)?;
            let new = load_new(&new, sort_new)?;
            let model = build_cost_model(&g);
            let params = AlignParams {
                align_beam: beam,
                max_alignments: alignments,
                ..AlignParams::default()
            };
            let found = build_alignments(&new, &g, &params, &model);
            let probs = relative_probabilities(&found, &model);
            match format {
                OutputFormat::Json => {
                    let doc = JsonParse {
                        alignments: found
                            .iter()
                            .zip(&probs)
                            .map(|(a, &p)| json_alignment(a, p))
                            .collect(),
                    };
                    serde_json::to_writer_pretty(&mut *out, &doc).map_err(Error::from)?;
                    writeln!(out)?;
                }
                OutputFormat::Text => {
                    if found.is_empty() {
                        writeln!(out, "no alignment")?;
                    }
                    for (i, a) in found.iter().enumerate() {
                        writeln!(
                            out,
                            "alignment {} CD={:.3} p={:.6} encoding: {}",
                            i + 1,
                            a.score(),
                            probs[i],
                            texts(&derive_encoding(a).symbols).join(" ")
                        )?;
                        write!(out, "{}", render_alignment(a, Orientation::Rows))?;
                        writeln!(out)?;
                    }
                }
            }
        }
        Command::Generate { grammar, encoding } => {
            let g = load_grammar(&grammar)?;
            let codes = parse_encodings(&std::fs::read_to_string(&encoding)?)?;
            let model = build_cost_model(&g);
            for code in &codes {
                let surfaces = generate(code, &g, &AlignParams::default(), &model);
                match surfaces.first() {
                    Some(s) => writeln!(out, "{}", s.text())?,
                    None => writeln!(out)?,
                }
            }
        }
        Command::Learn {
            corpus,
            out: path,
            grammar_beam,
            align_beam,
        } => {
            let corpus = load_corpus(&corpus)?;
            if corpus.is_empty() {
                return Err(Failure::Format("corpus is empty".into()));
            }
            let params = LearnParams {
                grammar_beam,
                align: AlignParams {
                    align_beam,
                    ..AlignParams::default()
                },
                ..LearnParams::default()
            };
            let (pool, ranked) = learn_with_pool(&corpus, &params);
            let best: &GrammarCandidate = &ranked[0];
            save_grammar(&renumbered(&best.grammar), &path)?;
            let universe = compile_universe(&pool, &corpus);
            writeln!(
                out,
                "patterns={} G={:.3} E={:.3} total={:.3}",
                best.pattern_ids.len(),
                best.g,
                best.e,
                best.total
            )?;
            for id in &best.pattern_ids {
                writeln!(out, "  {}", universe[id])?;
            }
        }
        Command::Prob {
            grammar,
            new,
            sort_new,
        } => {
            let g = load_grammar(&grammar)?;
            let new = load_new(&new, sort_new)?;
            let model = build_cost_model(&g);
            let found = build_alignments(&new, &g, &AlignParams::default(), &model);
            let probs = relative_probabilities(&found, &model);
            for (i, a) in found.iter().enumerate() {
                writeln!(
                    out,
                    "alignment {} CD={:.3} B_E={:.3} p={:.6} encoding: {}",
                    i + 1,
                    a.score(),
                    derive_encoding(a).cost(&model),
                    probs[i],
                    texts(&derive_encoding(a).symbols).join(" ")
                )?;
            }
        }
        Command::Cost { grammar, corpus } => {
            let g = load_grammar(&grammar)?;
            let model = build_cost_model(&g);
            let gbits = grammar_cost(&g, &model);
            match corpus {
                None => writeln!(out, "G={gbits:.3} E=n/a total={gbits:.3}")?,
                Some(path) => {
                    let corpus = load_corpus(&path)?;
                    let e = crate::learner::encoding_cost_e(
                        &g,
                        &corpus,
                        &AlignParams::default(),
                        &model,
                    );
                    writeln!(out, "G={gbits:.3} E={e:.3} total={:.3}", gbits + e)?;
                }
            }
        }
        Command::Verify {
            grammar,
            new,
            driver,
            target,
        } => match (grammar, new, driver, target) {
            (Some(grammar), Some(new), _, _) => {
                let g = load_grammar(&grammar)?;
                let model = build_cost_model(&g);
                for n in load_corpus(&new)? {
                    let exact = exhaustive_alignments(&n, &g, &Bounds::default(), &model)?;
                    let heur = build_alignments(
                        std::slice::from_ref(&n),
                        &g,
                        &AlignParams::default(),
                        &model,
                    );
                    let h = heur.first().map_or(0.0, |a| a.score());
                    let agree = crate::matcher::cmp_bits(h, exact.score()).is_eq();
                    writeln!(
                        out,
                        "heuristic={h:.3} exhaustive={:.3} agree={}",
                        exact.score(),
                        if agree { "yes" } else { "no" }
                    )?;
                }
            }
            (_, _, Some(driver), Some(target)) => {
                let d = load_sequence(&driver)?;
                let t = load_sequence(&target)?;
                writeln!(out, "lcs={}", lcs_score(&d, &t))?;
            }
            _ => {
                return Err(Failure::Usage(
                    "verify needs --grammar and --new, or --driver and --target".into(),
                ))
            }
        },
    }
    Ok(())
}
