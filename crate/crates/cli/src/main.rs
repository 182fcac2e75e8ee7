//! `openbook`: build, transform and inspect Kirby diagrams of open books.
//!
//! Exit status is 0 on success, 1 when the input is rejected by the library
//! and 2 on usage errors.

mod io;
mod render;
mod report;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use openbook::braid::canonicalize;
use openbook::moves::{parse_script, Derivation};
use openbook::reduce::{reduce, verify_reduce};
use openbook::{
    double, half_open_book, open_book, stabilize, Braid, HeegaardDiagram, KirbyDiagram, Monodromy,
    Twist, TwistWord,
};
use rayon::prelude::*;

use io::Source;
use report::{emit, OutputFormat, ReduceOutput, RoundtripReport};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn domain(e: impl fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "openbook",
    version,
    about = "Kirby diagrams of 4-dimensional open books"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report format for invariants, reductions, braids and round trips;
    /// `text` also prints Kirby diagrams in readable form.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Process several inputs on this many threads.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Half open book of a page (.hd in, .kd out).
    Hob { inputs: Vec<PathBuf> },
    /// Open book with trivial monodromy (.hd in, .kd out).
    Double { inputs: Vec<PathBuf> },
    /// Open book with a twist-word monodromy (.hd in, .kd out).
    Ob {
        /// Twist word such as "t(1,1)^3 s(1)"; defaults to the input's
        /// `# monodromy:` line.
        #[arg(long, allow_hyphen_values = true)]
        mono: Option<String>,
        inputs: Vec<PathBuf>,
    },
    /// Euler characteristic, fundamental group, homology and form (.kd in).
    Invariants { inputs: Vec<PathBuf> },
    /// Rewrite the doubled page as an open book on a punctured handlebody.
    Reduce {
        /// Also compare the invariants of both sides; exits 1 if they differ.
        #[arg(long)]
        verify: bool,
        inputs: Vec<PathBuf>,
    },
    /// Page diagram of a punctured lens space L(p,q).
    Lens {
        p: u64,
        q: u64,
        /// Emit the punctured solid torus tagged with the monodromy of the
        /// twisted spin instead.
        #[arg(long)]
        twisted: bool,
    },
    /// Normal form of a braid whose closure is a knot.
    BraidCanon {
        /// Braid word such as "s1 s2^-1 s1".
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Number of strands; defaults to one more than the largest generator.
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Handle moves on a Kirby diagram.
    Moves {
        #[command(subcommand)]
        action: MovesCommand,
    },
    /// Stabilize a page, extending its monodromy (.hd in, .hd out).
    Stabilize {
        /// Monodromy on the input page; defaults to its `# monodromy:` line,
        /// then to the identity.
        #[arg(long, allow_hyphen_values = true)]
        mono: Option<String>,
        inputs: Vec<PathBuf>,
    },
    /// Schematic SVG of a Kirby diagram (.kd in).
    Render { inputs: Vec<PathBuf> },
    /// Parse, serialize and parse again, and compare.
    Roundtrip { inputs: Vec<PathBuf> },
}

#[derive(Subcommand, Debug)]
enum MovesCommand {
    /// Apply a move script; the diagram goes to the output, the log to stderr.
    Apply {
        script: PathBuf,
        inputs: Vec<PathBuf>,
    },
}

/// What one input produces.
#[derive(Default)]
struct Output {
    stdout: String,
    stderr: String,
    /// Reported after the output has been written.
    failure: Option<CliError>,
}

impl From<String> for Output {
    fn from(stdout: String) -> Self {
        Output {
            stdout,
            ..Default::default()
        }
    }
}

fn kd_out(kd: &KirbyDiagram, format: OutputFormat) -> Output {
    match format {
        OutputFormat::Json => kd.to_kd_string().into(),
        OutputFormat::Text => kd.to_string().into(),
    }
}

/// `--mono`, else the `# monodromy:` line, else `fallback`.
fn monodromy_text<'a>(
    flag: &'a Option<String>,
    text: &'a str,
    fallback: Option<&'a str>,
) -> Result<&'a str, CliError> {
    flag.as_deref()
        .or_else(|| io::monodromy_comment(text))
        .or(fallback)
        .ok_or_else(|| {
            CliError::Usage("no monodromy: pass --mono or add a `# monodromy:` line".into())
        })
}

fn process(command: &Command, format: OutputFormat, src: &Source) -> Result<Output, CliError> {
    let label = src.label();
    let text = src.read()?;
    let out = match command {
        Command::Hob { .. } => kd_out(
            &half_open_book(&io::parse_heegaard(&text, &label)?).map_err(domain)?,
            format,
        ),
        Command::Double { .. } => kd_out(
            &double(&io::parse_heegaard(&text, &label)?).map_err(domain)?,
            format,
        ),
        Command::Ob { mono, .. } => {
            let hd = io::parse_heegaard(&text, &label)?;
            let word = TwistWord::parse(
                monodromy_text(mono, &text, None)?,
                hd.genus(),
                hd.curve_count(),
            )
            .map_err(domain)?;
            kd_out(
                &open_book(&hd, &Monodromy::Word(word)).map_err(domain)?,
                format,
            )
        }
        Command::Invariants { .. } => {
            let r = report::invariants(&io::parse_kirby(&text, &label)?)?;
            emit(&r, format, report::invariants_text).into()
        }
        Command::Reduce { verify, .. } => {
            let hd = io::parse_heegaard(&text, &label)?;
            if *verify {
                let rep = verify_reduce(&hd).map_err(domain)?;
                let failure = (!rep.verdict).then(|| {
                    CliError::Domain(format!("{label}: invariants of the reduction differ"))
                });
                Output {
                    stdout: emit(
                        &ReduceOutput::Verified(Box::new(rep)),
                        format,
                        report::reduce_text,
                    ),
                    failure,
                    ..Default::default()
                }
            } else {
                let red = reduce(&hd).map_err(domain)?;
                emit(&ReduceOutput::Plain(red), format, report::reduce_text).into()
            }
        }
        Command::Moves {
            action: MovesCommand::Apply { script, .. },
        } => {
            let kd = io::parse_kirby(&text, &label)?;
            let script_text = Source::File(script.clone()).read()?;
            let moves = parse_script(&script_text)
                .map_err(|e| CliError::Domain(format!("{}: {e}", script.display())))?;
            let d = Derivation::new(kd).apply_all(&moves).map_err(domain)?;
            let mut out = kd_out(&d.diagram, format);
            out.stderr = d.log.iter().map(|r| format!("{r}\n")).collect();
            out
        }
        Command::Stabilize { mono, .. } => {
            let hd = io::parse_heegaard(&text, &label)?;
            let word = TwistWord::parse(
                monodromy_text(mono, &text, Some(""))?,
                hd.genus(),
                hd.curve_count(),
            )
            .map_err(domain)?;
            let (page, extended) = stabilize(&hd, &word).map_err(domain)?;
            format!("# monodromy: {extended}\n{}", page.to_hd_string()).into()
        }
        Command::Render { .. } => render::render(&io::parse_kirby(&text, &label)?).into(),
        Command::Roundtrip { .. } => {
            let r = match io::parse_any(&text, &label)? {
                io::Diagram::Heegaard(hd) => RoundtripReport {
                    format: "hd",
                    roundtrip: hd
                        .to_hd_string()
                        .parse::<HeegaardDiagram>()
                        .is_ok_and(|back| back == hd),
                },
                io::Diagram::Kirby(kd) => RoundtripReport {
                    format: "kd",
                    roundtrip: KirbyDiagram::from_kd_str(&kd.to_kd_string())
                        .is_ok_and(|back| back == kd),
                },
            };
            emit(&r, format, report::roundtrip_text).into()
        }
        Command::Lens { .. } | Command::BraidCanon { .. } => unreachable!("takes no input"),
    };
    Ok(out)
}

fn inputs(command: &Command) -> Option<&[PathBuf]> {
    match command {
        Command::Hob { inputs }
        | Command::Double { inputs }
        | Command::Ob { inputs, .. }
        | Command::Invariants { inputs }
        | Command::Reduce { inputs, .. }
        | Command::Moves {
            action: MovesCommand::Apply { inputs, .. },
        }
        | Command::Stabilize { inputs, .. }
        | Command::Render { inputs }
        | Command::Roundtrip { inputs } => Some(inputs),
        Command::Lens { .. } | Command::BraidCanon { .. } => None,
    }
}

fn generate(command: &Command, format: OutputFormat) -> Result<Output, CliError> {
    match command {
        Command::Lens { p, q, twisted } => {
            let hd = HeegaardDiagram::lens(*p, *q).map_err(domain)?;
            if !*twisted {
                return Ok(hd.to_hd_string().into());
            }
            // the twisted spin is the spin with one more sphere twist
            let mut word = TwistWord::spun_lens(*p, *q).map_err(domain)?;
            word.push(Twist::sphere(1, 1)).map_err(domain)?;
            let page = HeegaardDiagram::canonical_punctured_handlebody(1, 1);
            Ok(format!("# monodromy: {word}\n{}", page.to_hd_string()).into())
        }
        Command::BraidCanon { word, strands } => {
            let b = Braid::parse(word, *strands).map_err(domain)?;
            let c = canonicalize(&b).map_err(domain)?;
            Ok(emit(&c, format, report::braid_text).into())
        }
        _ => unreachable!("reads inputs"),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let outputs: Vec<(String, Output)> = match inputs(&cli.command) {
        None => vec![(String::new(), generate(&cli.command, cli.format)?)],
        Some(paths) => {
            let sources = Source::from_args(paths);
            let job = |s: &Source| process(&cli.command, cli.format, s).map(|o| (s.label(), o));
            let results: Vec<Result<(String, Output), CliError>> = match cli.jobs {
                Some(n) if sources.len() > 1 => rayon::ThreadPoolBuilder::new()
                    .num_threads(n as usize)
                    .build()
                    .map_err(domain)?
                    .install(|| sources.par_iter().map(job).collect()),
                _ => sources.iter().map(job).collect(),
            };
            results.into_iter().collect::<Result<_, _>>()?
        }
    };

    let many = outputs.len() > 1;
    let mut stdout = String::new();
    let mut stderr = String::new();
    let mut failure = None;
    for (label, out) in outputs {
        if many {
            stdout.push_str(&format!("==> {label} <==\n"));
            if !out.stderr.is_empty() {
                stderr.push_str(&format!("==> {label} <==\n"));
            }
        }
        stdout.push_str(&out.stdout);
        stderr.push_str(&out.stderr);
        failure = failure.or(out.failure);
    }
    eprint!("{stderr}");
    match &cli.out {
        Some(path) => fs::write(path, stdout)
            .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?,
        None => {
            let mut handle = std::io::stdout().lock();
            // a closed pipe downstream is not an error of ours
            let _ = handle
                .write_all(stdout.as_bytes())
                .and_then(|_| handle.flush());
        }
    }
    failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("openbook: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
