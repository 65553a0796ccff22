//! Command-line front end. [`run`] does all the work and returns the output
//! and exit status, so that tests can drive it in-process.

use std::ffi::OsString;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use deformspace_core::dsl::parse_gog_with_cap;
use deformspace_core::gog::GraphOfGroups;
use deformspace_core::moves::{enumerate_reduced, Caps, MarkedGog};
use serde::Serialize;

use crate::dot::{gog_dot, moves_dot};
use crate::report::{check_report, manifest, rigidity_report};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "deformspace", version, about = "Deformation spaces of graphs of finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Depth cap for the move search.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Edge cap for graphs visited by the move search.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_edges: u32,
    /// Largest group order accepted.
    #[arg(long, global = true, default_value_t = 48, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_order: u32,
    /// Verification ball radius for canonical maps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub radius: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural predicates and the finite subgroup census.
    Check { files: Vec<PathBuf> },
    /// Normal forms of words read from stdin, one per line.
    Nf { file: PathBuf },
    /// Explore the deformation space by collapses and expansions.
    Enumerate { file: PathBuf },
    /// Check that the space has at most one strongly slide-free reduced class.
    Rigidity { file: PathBuf },
    /// Graphviz output of a graph, or of its move graph with `--moves`.
    Dot {
        file: PathBuf,
        #[arg(long)]
        moves: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Opts {
    pub fn caps(&self) -> Caps {
        Caps {
            depth: self.depth as usize,
            max_edges: self.max_edges as usize,
            max_order: self.max_order as usize,
            ..Caps::default()
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn load(path: &Path, max_order: usize) -> Result<GraphOfGroups, CliError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })?;
    parse_gog_with_cap(&src, max_order)
        .map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable report");
    s.push('\n');
    s
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.display().to_string(), message: e.to_string() }
}

#[derive(Serialize)]
struct NfLine {
    input: String,
    normal_form: Option<String>,
    identity: Option<bool>,
    translation_length: Option<usize>,
    error: Option<String>,
}

fn normal_forms(g: &GraphOfGroups, input: &mut dyn BufRead, format: Format) -> Result<(String, bool), CliError> {
    let mut lines = Vec::new();
    let mut failed = false;
    for line in input.lines() {
        let line = line?;
        let w = line.trim();
        if w.is_empty() || w.starts_with('#') {
            continue;
        }
        let r = g.parse_word(w).and_then(|x| Ok((g.translation_length(&x)?, x)));
        lines.push(match r {
            Ok((l, x)) => NfLine {
                input: w.to_string(),
                normal_form: Some(g.print_word(&x)),
                identity: Some(x.is_identity()),
                translation_length: Some(l),
                error: None,
            },
            Err(e) => {
                failed = true;
                NfLine { input: w.to_string(), normal_form: None, identity: None, translation_length: None, error: Some(e.to_string()) }
            }
        });
    }
    let out = match format {
        Format::Json => json(&lines),
        _ => lines
            .iter()
            .map(|l| match (&l.normal_form, &l.error) {
                (Some(nf), _) => format!("{} => {}  [ℓ = {}]\n", l.input, nf, l.translation_length.unwrap_or(0)),
                (None, Some(e)) => format!("{} => error: {}\n", l.input, e),
                _ => unreachable!(),
            })
            .collect(),
    };
    Ok((out, failed))
}

/// Runs a parsed command, returning its output and exit status.
pub fn execute(cli: &Cli, stdin: &mut dyn BufRead) -> Result<(String, u8), CliError> {
    let o = &cli.opts;
    let cap = o.max_order as usize;
    match &cli.command {
        Command::Check { files } => {
            let mut reports = Vec::new();
            let mut dots = String::new();
            for f in files {
                let g = load(f, cap)?;
                if o.format == Format::Dot {
                    dots.push_str(&gog_dot(&stem(f), &g));
                }
                reports.push(check_report(&stem(f), &g));
            }
            let out = match o.format {
                Format::Json => json(&reports),
                Format::Dot => dots,
                Format::Text => reports.iter().map(|r| r.to_text()).collect(),
            };
            Ok((out, EXIT_OK))
        }
        Command::Nf { file } => {
            let g = load(file, cap)?;
            let (out, failed) = normal_forms(&g, stdin, o.format)?;
            Ok((out, if failed { EXIT_INPUT } else { EXIT_OK }))
        }
        Command::Enumerate { file } => {
            let m = MarkedGog::new(load(file, cap)?);
            let space = enumerate_reduced(&m, &o.caps()).map_err(|e| input_error(file, e))?;
            let out = match o.format {
                Format::Json => json(&manifest(&stem(file), &space)),
                Format::Dot => moves_dot(&stem(file), &space),
                Format::Text => manifest(&stem(file), &space).to_text(),
            };
            Ok((out, EXIT_OK))
        }
        Command::Rigidity { file } => {
            let m = MarkedGog::new(load(file, cap)?);
            let (space, r) = rigidity_report(&stem(file), &m, &o.caps(), o.radius.map(|r| r as usize), o.seed)
                .map_err(|e| input_error(file, e))?;
            let out = match o.format {
                Format::Json => json(&r),
                Format::Dot => moves_dot(&stem(file), &space),
                Format::Text => r.to_text(),
            };
            let code = if r.violation.is_some() { EXIT_VIOLATION } else { EXIT_OK };
            Ok((out, code))
        }
        Command::Dot { file, moves } => {
            let g = load(file, cap)?;
            if *moves {
                let space = enumerate_reduced(&MarkedGog::new(g), &o.caps()).map_err(|e| input_error(file, e))?;
                Ok((moves_dot(&stem(file), &space), EXIT_OK))
            } else {
                Ok((gog_dot(&stem(file), &g), EXIT_OK))
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Output
/// goes to `--out` when given; it is returned in `stdout` otherwise.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli, stdin) {
        Ok((out, code)) => {
            let stderr = if code == EXIT_VIOLATION {
                "THEOREM-VIOLATION: at most one strongly slide-free reduced class was expected\n".to_string()
            } else {
                String::new()
            };
            match &cli.opts.out {
                Some(p) => match std::fs::write(p, &out) {
                    Ok(()) => Outcome { stdout: String::new(), stderr, code },
                    Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {}: {e}\n", p.display()), code: EXIT_INPUT },
                },
                None => Outcome { stdout: out, stderr, code },
            }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INPUT },
    }
}
