use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use multipoint::complex::SimplicialMap;
use multipoint::fixtures::{generate_fixture, random, RandomParams, FIXTURE_NAMES};
use multipoint::io::{emit_report, homology_listing, parse_map, BuildReport, Format, MapDocument, Report};
use multipoint::multiplicity::{k_max, Kind, MultiplePointComplex};
use multipoint::spectral::{gvzss, icss};
use multipoint::verify::run_all_seeded;
use multipoint::Error;

/// Multiple-point spaces of simplicial maps and their spectral sequences.
///
/// INPUT is a path to a JSON map document or `fixture:NAME`, where NAME is
/// one of the built-in fixtures or `random` (seeded by --seed).
#[derive(Parser, Debug)]
#[command(name = "multipoint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Highest chain degree to compute (defaults to dim Y).
    #[arg(long, global = true)]
    q_max: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    /// Seed for random fixtures and randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the input is a finite simplicial surjection.
    Validate { input: String },
    /// Build W^k or D^k.
    Build {
        input: String,
        #[arg(long, value_enum)]
        kind: SpaceKind,
        #[arg(long)]
        k: usize,
    },
    /// Homology of X, Y, the multiple-point spaces and their alternating parts.
    Homology {
        input: String,
        /// Largest multiplicity (defaults to the largest fibre size).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Image-computing spectral sequence.
    Icss { input: String },
    /// Spectral sequence of the W tower.
    Gvzss { input: String },
    /// Run every exactness and isomorphism check.
    Verify { input: String },
    /// Print a fixture as a map document, or list the fixture names.
    Fixtures { name: Option<String> },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceKind {
    #[value(name = "W")]
    W,
    #[value(name = "D")]
    D,
}

/// A failed run: `Input` exits with 2, everything else reaching here is a
/// computation error and exits with 2 as well since it stems from the input.
fn input_error(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn load(input: &str, seed: u64) -> Result<MapDocument, Error> {
    match input.strip_prefix("fixture:") {
        Some("random") => Ok(random(seed, RandomParams::default())),
        Some(name) => generate_fixture(name),
        None => {
            let text = std::fs::read_to_string(Path::new(input))
                .map_err(|e| Error::Parse { location: input.to_string(), message: e.to_string() })?;
            parse_map(&text)
        }
    }
}

fn load_map(input: &str, seed: u64) -> Result<(MapDocument, Arc<SimplicialMap>), Error> {
    let doc = load(input, seed)?;
    let f = doc.to_map()?;
    Ok((doc, f))
}

fn name_of(doc: &MapDocument, input: &str) -> String {
    doc.metadata.as_ref().and_then(|m| m.fixture.clone()).unwrap_or_else(|| input.to_string())
}

fn print<R: Report + ?Sized>(report: &R, format: Format) -> ExitCode {
    print!("{}", emit_report(report, format));
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let format = match cli.format {
        OutputFormat::Human => Format::Human,
        OutputFormat::Json => Format::Json,
    };
    let q_max = |f: &SimplicialMap| cli.q_max.unwrap_or(f.target().dim().max(0) as usize);
    match &cli.command {
        Command::Validate { input } => {
            let doc = load(input, cli.seed)?;
            Ok(print(&doc.validate()?, format))
        }
        Command::Build { input, kind, k } => {
            let (_, f) = load_map(input, cli.seed)?;
            let kind = match kind {
                SpaceKind::W => Kind::W,
                SpaceKind::D => Kind::D,
            };
            let z = MultiplePointComplex::build(&f, kind, *k, Arc::new(multipoint::multiplicity::LiftTable::new(&f)))?;
            Ok(print(&BuildReport::new(&z), format))
        }
        Command::Homology { input, k } => {
            let (_, f) = load_map(input, cli.seed)?;
            let top = k.unwrap_or_else(|| k_max(&f));
            Ok(print(&homology_listing(&f, top, q_max(&f))?, format))
        }
        Command::Icss { input } => {
            let (_, f) = load_map(input, cli.seed)?;
            Ok(print(&icss(&f, q_max(&f))?, format))
        }
        Command::Gvzss { input } => {
            let (_, f) = load_map(input, cli.seed)?;
            Ok(print(&gvzss(&f, q_max(&f))?, format))
        }
        Command::Verify { input } => {
            let doc = load(input, cli.seed)?;
            let validation = doc.validate()?;
            if !validation.is_valid() {
                return Ok(print(&validation, format));
            }
            let f = doc.to_map()?;
            let reports = run_all_seeded(&f, &name_of(&doc, input), cli.seed)?;
            Ok(print(reports.as_slice(), format))
        }
        Command::Fixtures { name: Some(name) } => {
            let doc = if name == "random" { random(cli.seed, RandomParams::default()) } else { generate_fixture(name)? };
            print!("{}", doc.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fixtures { name: None } => {
            for name in FIXTURE_NAMES {
                println!("{name}");
            }
            println!("random");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli).unwrap_or_else(input_error)
}
