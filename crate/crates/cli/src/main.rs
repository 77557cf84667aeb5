use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use knaf_cli::fixtures;
use knaf_cli::problem::{parse_problem, DecideSource, Mode, Problem, ProblemFile, FORMAT_VERSION};
use knaf_cli::report;
use knaf_cli::run::{run, Failure, Outcome, EXIT_OK, EXIT_USAGE};
use knaf_core::localsplit::DEFAULT_DEPTH_LIMIT;

/// Ramification invariants and the finite-type criterion for valuation rings.
#[derive(Parser)]
#[command(name = "knaf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// One `key=value` record per result row.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Depth limit for the splitting engine.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_LIMIT)]
    depth: usize,
}

#[derive(Args)]
struct FileArg {
    /// Problem file, or `-` for standard input.
    #[arg(long)]
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Index, cosets and initial index of two value groups.
    Group(FileArg),
    /// Verdict for explicit extension data or a named fixture.
    Decide {
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        file: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Extensions of a rank-1 discrete valuation to a polynomial's root field.
    Split(FileArg),
    /// Extensions of a monomial valuation along a binomial.
    Binomial(FileArg),
    /// List the fixture catalog, or print one fixture as a problem file.
    Fixtures { name: Option<String> },
}

fn read_problem(path: &PathBuf) -> Result<ProblemFile, Failure> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf, mode: Mode) -> Result<ProblemFile, Failure> {
    let p = read_problem(path)?;
    if p.body.mode() != mode {
        return Err(Failure::usage(format!(
            "{} is a {} problem, not {}",
            path.display(),
            p.body.mode().name(),
            mode.name()
        )));
    }
    Ok(p)
}

fn render(outcome: &Outcome, porcelain: bool) -> String {
    match (outcome, porcelain) {
        (Outcome::Group(s), false) => report::human_group(s),
        (Outcome::Group(s), true) => report::porcelain_group(s),
        (Outcome::Rows(r), false) => report::human_rows(r),
        (Outcome::Rows(r), true) => report::porcelain_rows(r),
    }
}

fn fixtures_command(name: Option<&str>, porcelain: bool) -> Result<String, Failure> {
    if let Some(name) = name {
        let fx = fixtures::find(name).ok_or_else(|| Failure::usage(format!("unknown fixture '{name}'")))?;
        return Ok(format!("# {}\n{}", fx.citation, fx.problem_file()));
    }
    let mut rows = Vec::new();
    for fx in fixtures::catalog() {
        rows.push(fx.row()?);
    }
    if porcelain {
        return Ok(report::porcelain_rows(&rows));
    }
    let mut out = report::human_rows(&rows);
    out += "\ncitations:\n";
    for fx in fixtures::catalog() {
        out += &format!("  {}: {}\n", fx.name, fx.citation);
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let problem = match &cli.command {
        Command::Fixtures { name } => return fixtures_command(name.as_deref(), cli.porcelain),
        Command::Group(f) => load(&f.file, Mode::Group)?,
        Command::Split(f) => load(&f.file, Mode::Split)?,
        Command::Binomial(f) => load(&f.file, Mode::Binomial)?,
        Command::Decide { file: Some(f), .. } => load(f, Mode::Decide)?,
        Command::Decide { fixture, .. } => ProblemFile {
            format_version: FORMAT_VERSION,
            label: None,
            body: Problem::Decide(DecideSource::Fixture(fixture.clone().expect("required by clap"))),
        },
    };
    Ok(render(&run(&problem, cli.depth)?, cli.porcelain))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(EXIT_OK as u8)
        }
        Err(f) => {
            for m in &f.messages {
                eprintln!("error: {m}");
            }
            ExitCode::from(f.code as u8)
        }
    }
}
