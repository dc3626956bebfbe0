mod commands;
mod random;
mod report;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use aqslie::io::{from_text, AlgebraDoc, FormDoc, MatrixDoc, Mode};
use aqslie::scalar::{set_tolerance, Exact, Float};
use clap::{Args, Parser, Subcommand};

use commands::{InvariantFormsArgs, Payload};
use report::{digest, ErrorInfo, Report};

#[derive(Parser)]
#[command(name = "aqslie", version, about = "Exact verification and classification of almost contact metric Lie algebras")]
struct Cli {
    /// Print a JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Zero tolerance for float-mode inputs.
    #[arg(long, global = true, env = "AQSLIE_TOLERANCE")]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Input file, `-` for stdin.
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Run on every `*.json` file in a directory, writing one report per input.
    #[arg(long, conflicts_with = "input")]
    batch: Option<PathBuf>,
    /// Output directory for `--batch`.
    #[arg(long, default_value = "reports", requires = "batch")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra (Jacobi, Killing form, nilpotency) and any structure on it.
    Check {
        #[command(flatten)]
        io: Input,
        /// Also check d∘d = 0 on this many random forms.
        #[arg(long, default_value_t = 0)]
        random_forms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Class tags and weighted Heisenberg normal form of a structure.
    Classify {
        #[command(flatten)]
        io: Input,
        /// Re-classify this many random orthogonal conjugates of the input.
        #[arg(long, default_value_t = 0)]
        conjugations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a structure file.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Central extension of a Kähler Lie algebra by a closed 2-form.
    Extend {
        #[arg(long)]
        kahler: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Chevalley–Eilenberg Betti numbers.
    Cohomology {
        #[command(flatten)]
        io: Input,
    },
    /// Scalar, Ricci and K(ξ, ·) sectional curvatures of the metric.
    Curvature {
        #[command(flatten)]
        io: Input,
    },
    /// Closed invariant 2-forms on g/k for k the centralizer of a torus.
    InvariantForms {
        #[arg(long)]
        algebra: PathBuf,
        /// 1-based basis indices spanning the torus.
        #[arg(long)]
        torus: String,
        /// Use this subalgebra (1-based basis indices) instead of the centralizer.
        #[arg(long)]
        k: Option<String>,
        /// Complex structure on m, in the basis of m printed by the command.
        #[arg(long = "J")]
        j: Option<PathBuf>,
        /// Reject k that is not the centralizer of a torus instead of warning.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Weighted Heisenberg algebra with its standard structure(s).
    Heisenberg {
        #[arg(long, value_parser = ["4n1", "2n1"])]
        dim_family: String,
        /// Comma-separated weights.
        #[arg(long)]
        weights: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|_| aqslie::Error::Format("input is not UTF-8".into()).into())
}

macro_rules! by_mode {
    ($mode:expr, $f:ident ( $($arg:expr),* )) => {
        match $mode {
            Mode::Exact => commands::$f::<Exact>($($arg),*),
            Mode::Float => commands::$f::<Float>($($arg),*),
        }
    };
}

/// Run a command that reads one algebra or structure file.
fn run_single(command: &Command, bytes: &[u8]) -> Result<Payload> {
    let doc: AlgebraDoc = from_text(text(bytes)?)?;
    match command {
        Command::Check { random_forms, seed, .. } => by_mode!(doc.mode, check(&doc, *random_forms, *seed)),
        Command::Classify { conjugations, seed, .. } => {
            by_mode!(doc.mode, classify(&doc, *conjugations, *seed))
        }
        Command::Cohomology { .. } => by_mode!(doc.mode, cohomology(&doc)),
        Command::Curvature { .. } => by_mode!(doc.mode, curvature_cmd(&doc)),
        _ => unreachable!("not a single-input command"),
    }
}

fn run(command: &Command) -> (Option<String>, Result<Payload>) {
    let mut inputs: Vec<Vec<u8>> = Vec::new();
    let result = (|| match command {
        Command::Check { io, .. }
        | Command::Classify { io, .. }
        | Command::Cohomology { io }
        | Command::Curvature { io } => {
            inputs.push(read(&io.input)?);
            run_single(command, &inputs[0])
        }
        Command::Construct {
            what: Construct::Heisenberg { dim_family, weights, mode },
        } => match mode {
            ModeArg::Exact => commands::construct_heisenberg::<Exact>(dim_family, weights),
            ModeArg::Float => commands::construct_heisenberg::<Float>(dim_family, weights),
        },
        Command::Extend { kahler, cocycle } => {
            inputs.push(read(kahler)?);
            inputs.push(read(cocycle)?);
            let k: AlgebraDoc = from_text(text(&inputs[0])?)?;
            let c: FormDoc = from_text(text(&inputs[1])?)?;
            by_mode!(k.mode, extend(&k, &c))
        }
        Command::InvariantForms { algebra, torus, k, j, strict } => {
            inputs.push(read(algebra)?);
            let doc: AlgebraDoc = from_text(text(&inputs[0])?)?;
            let jdoc = match j {
                Some(path) => {
                    inputs.push(read(path)?);
                    Some(from_text::<MatrixDoc>(text(&inputs[1])?)?)
                }
                None => None,
            };
            let args = InvariantFormsArgs {
                torus,
                k: k.as_deref(),
                j: jdoc.as_ref(),
                strict: *strict,
            };
            by_mode!(doc.mode, invariant_forms(&doc, &args))
        }
    })();
    (digest(inputs.iter().map(Vec::as_slice)), result)
}

fn make_report(
    echo: Vec<String>,
    input_digest: Option<String>,
    result: &Result<Payload>,
    elapsed: Option<f64>,
) -> Report {
    Report {
        command: echo,
        input_digest,
        result: result.as_ref().ok().map(|p| p.json.clone()),
        error: result.as_ref().err().map(ErrorInfo::from_anyhow),
        wall_time_ms: elapsed,
    }
}

fn batch(cli: &Cli, io: &Input, dir: &Path) -> Result<u8> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    std::fs::create_dir_all(&io.out)?;
    let subcommand = match cli.command {
        Command::Check { .. } => "check",
        Command::Classify { .. } => "classify",
        Command::Cohomology { .. } => "cohomology",
        _ => "curvature",
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = files.len().div_ceil(workers).max(1);
    let outcomes: Vec<(PathBuf, i32)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .chunks(chunk)
            .map(|group| {
                scope.spawn(move || {
                    group
                        .iter()
                        .map(|path| {
                            let start = Instant::now();
                            let bytes = read(path);
                            let input_digest = bytes.as_ref().ok().and_then(|b| digest([b.as_slice()]));
                            let result = bytes.and_then(|b| run_single(&cli.command, &b));
                            let elapsed = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                            let echo = vec![subcommand.to_string(), path.display().to_string()];
                            let report = make_report(echo, input_digest, &result, elapsed);
                            let code = report.error.as_ref().map_or(0, |e| e.exit_code);
                            let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                            let target = io.out.join(format!("{stem}.report.json"));
                            let written = serde_json::to_string_pretty(&report)
                                .map_err(anyhow::Error::from)
                                .and_then(|s| std::fs::write(&target, s + "\n").map_err(Into::into));
                            (path.clone(), if written.is_err() { 2 } else { code })
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut worst = 0;
    for (path, code) in &outcomes {
        println!("{}: {}", path.display(), if *code == 0 { "ok".to_string() } else { format!("exit {code}") });
        worst = worst.max(*code);
    }
    Ok(worst as u8)
}

/// Write to stdout, tolerating a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.tolerance {
        set_tolerance(t);
    }
    let batch_io = match &cli.command {
        Command::Check { io, .. }
        | Command::Classify { io, .. }
        | Command::Cohomology { io }
        | Command::Curvature { io } => io.batch.as_ref().map(|dir| (io.clone(), dir.clone())),
        _ => None,
    };
    if let Some((io, dir)) = batch_io {
        return match batch(&cli, &io, &dir) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        };
    }

    let start = Instant::now();
    let (input_digest, result) = run(&cli.command);
    let elapsed = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let report = make_report(echo, input_digest, &result, elapsed);
    let code = report.error.as_ref().map_or(0, |e| e.exit_code);

    if cli.json {
        out(&format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")));
    } else {
        match &result {
            Ok(payload) => {
                if let Some(doc) = &payload.document {
                    out(doc);
                    eprint!("{}", payload.human);
                } else {
                    out(&payload.human);
                }
                if let Some(ms) = elapsed {
                    eprintln!("wall time: {ms:.1} ms");
                }
            }
            Err(_) => {
                let e = report.error.as_ref().expect("error present");
                eprintln!("error [{}/{}]: {}", e.family, e.code, e.message);
            }
        }
    }
    ExitCode::from(code as u8)
}
