use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use tangency::curve::{validate_family, Family};
use tangency::gen::GeneratorSpec;
use tangency::graph::stabbing_line;
use tangency::io::write_atomic;
use tangency::search::{self, GridSpec};
use tangency::verify::{self, props::NAMES};

const OK: u8 = 0;
const VIOLATION: u8 = 1;
const INVALID: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "tangency", version, about = "Tangencies among 1-intersecting x-monotone curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the family hypotheses and list every intersection.
    Validate {
        /// Family JSON, or - for stdin.
        file: String,
    },
    /// Full report: census, both pipelines, proposition verdicts, bounds.
    Analyze {
        file: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for counterexample artifacts.
        #[arg(long, default_value = "counterexamples")]
        counterexamples: PathBuf,
    },
    /// Proposition verdicts only.
    Props {
        file: String,
        /// Comma-separated checker names.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long, default_value = "counterexamples")]
        counterexamples: PathBuf,
    },
    /// Emit a generated family.
    Generate {
        /// lines | caterpillar | three-n-minus-4 | grid-incidence
        #[arg(long)]
        name: String,
        /// Curve count (nBlue for caterpillar).
        #[arg(long)]
        n: Option<usize>,
        /// nRed for caterpillar, grid size for grid-incidence.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force maximum number of touching pairs on a grid.
    Search {
        #[arg(long)]
        n: usize,
        /// XxY grid slots.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        max_vertices: usize,
        /// Checkpoint file; resumed from if it exists.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Also list every family up to signature.
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG drawing with tangencies and the stabbing line.
    ExportSvg {
        file: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Invalid(String),
    Usage(String),
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Invalid(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn load(path: &str) -> Result<Family, Failure> {
    Family::from_json(&read_input(path)?).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn counterexamples(dir: &Path, f: &Family, report: &verify::Report) -> Result<u8, Failure> {
    if report.failures().is_empty() {
        return Ok(if report.all_pass() { OK } else { VIOLATION });
    }
    let files = verify::write_counterexamples(dir, f, report).map_err(|e| Failure::Invalid(e.to_string()))?;
    for p in files {
        eprintln!("counterexample: {}", p.display());
    }
    Ok(VIOLATION)
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Validate { file } => {
            let f = load(&file)?;
            let rep = validate_family(&f);
            print!("{}", rep.to_json());
            Ok(if rep.is_valid() { OK } else { INVALID })
        }
        Cmd::Analyze { file, report, counterexamples: dir } => {
            let f = load(&file)?;
            let rep = verify::analyze(&f);
            emit(report.as_deref(), &rep.to_json())?;
            if !rep.valid {
                return Ok(INVALID);
            }
            counterexamples(&dir, &f, &rep)
        }
        Cmd::Props { file, only, counterexamples: dir } => {
            if let Some(bad) = only.iter().flatten().find(|s| !NAMES.contains(&s.as_str())) {
                return Err(Failure::Usage(format!("unknown proposition {bad:?}; known: {}", NAMES.join(", "))));
            }
            let f = load(&file)?;
            let rep = verify::analyze_only(&f, only.as_deref());
            let Some(a) = &rep.analysis else {
                print!("{}", rep.to_json());
                return Ok(INVALID);
            };
            println!("{}", serde_json::to_string_pretty(&a.proposition_verdicts).expect("serializes"));
            if rep.failures().is_empty() {
                return Ok(OK);
            }
            counterexamples(&dir, &f, &rep)
        }
        Cmd::Generate { name, n, k, seed, out } => {
            let spec = GeneratorSpec::from_parts(&name, n, k, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            let f = spec.generate();
            emit(out.as_deref(), &(f.to_json() + "\n"))?;
            Ok(OK)
        }
        Cmd::Search { n, grid, max_vertices, resume, enumerate, out } => {
            let g: GridSpec = grid.parse().map_err(|e: search::SearchError| Failure::Usage(e.to_string()))?;
            let g = GridSpec::new(g.x_slots, g.y_slots, max_vertices);
            let fail = |e: search::SearchError| match e {
                search::SearchError::Io(_) | search::SearchError::Checkpoint(_) => Failure::Invalid(e.to_string()),
                _ => Failure::Usage(e.to_string()),
            };
            let best = search::max_tangencies(n, &g, resume.as_deref()).map_err(fail)?;
            let witness: serde_json::Value = serde_json::from_str(&best.witness.to_json()).expect("family JSON");
            let mut doc = json!({
                "n": n,
                "grid": g,
                "value": best.value,
                "scope": "grid-relative lower bound on the true maximum",
                "witness": witness,
                "stats": best.stats,
            });
            if enumerate {
                let (fams, stats) = search::enumerate_families(n, &g).map_err(fail)?;
                let list: Vec<serde_json::Value> =
                    fams.iter().map(|f| serde_json::from_str(&f.to_json()).expect("family JSON")).collect();
                doc["families"] = list.into();
                doc["enumeration"] = serde_json::to_value(stats).expect("serializes");
            }
            emit(out.as_deref(), &(serde_json::to_string_pretty(&doc).expect("serializes") + "\n"))?;
            Ok(OK)
        }
        Cmd::ExportSvg { file, out } => {
            let f = load(&file)?;
            let rep = validate_family(&f);
            let relaxed = f.meta.as_ref().and_then(|m| m.get("relaxed")).and_then(|v| v.as_bool()) == Some(true);
            let svg = match &rep.valid {
                Some(v) => tangency::svg::render(&f, Some(v), Some(&stabbing_line(v))),
                None => {
                    if !relaxed {
                        eprintln!("warning: family is not valid; drawing curves only");
                    }
                    tangency::svg::render(&f, None, None)
                }
            };
            emit(Some(&out), &svg)?;
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(INVALID)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(USAGE)
        }
    }
}
