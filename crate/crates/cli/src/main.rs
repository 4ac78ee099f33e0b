use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use uniserial::lie::format::{parse_representation, parse_spec, render_representation};
use uniserial::lie::{
    classify_with, enumerate, intertwiners, is_isomorphic_with, CensusConfig, IsoSearch, Representation,
    SolvableAlgebra,
};
use uniserial::matrix::{subspace_count, DEFAULT_SUBSPACE_BUDGET};
use uniserial::orbit::{canonicalize, factor_unipotent, ClassY};
use uniserial::{Error, Field};

/// Construct, verify, normalize and classify uniserial modules over
/// `<x> ⋉ a`.
#[derive(Parser, Debug)]
#[command(name = "uniserial", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest subspace count the brute-force lattice oracle may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSPACE_BUDGET)]
    budget: u128,
    /// Seed for randomized isomorphism search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a representation from a spec file and verify it.
    Build { spec: PathBuf },
    /// Verify a representation file.
    Verify { rep: PathBuf },
    /// Canonical orbit representative of a `Y` file.
    Canon {
        input: PathBuf,
        /// Field of a headerless input.
        #[arg(long)]
        field: Option<Field>,
    },
    /// Decide whether two representation files are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Print the isomorphism invariants of a representation file.
    Classify { rep: PathBuf },
    /// Enumerate every module for a field, `m` and weights.
    Enumerate {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        m: usize,
        /// Comma-separated `delta:dim` pairs.
        #[arg(long, default_value = "1:1")]
        weights: String,
        /// Largest number of specs accepted.
        #[arg(long, default_value_t = CensusConfig::default().limit)]
        limit: u128,
    },
}

/// Process exit status: `Ok(_)` is the command's verdict, errors map via
/// [`error_code`].
enum Outcome {
    Ok,
    NotIsomorphic,
    VerifierFailed,
}

fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InconclusiveSearch(_)) => 4,
        Some(
            Error::Parse(_)
            | Error::FunctionalNormalization(_)
            | Error::CharacteristicViolation(_)
            | Error::MissingWeightOne
            | Error::NotCanonicalY
            | Error::MapRangeViolation(_)
            | Error::DimensionMismatch(_)
            | Error::MixedFields(..)
            | Error::NotPrime(_)
            | Error::BudgetExceeded { .. }
            | Error::UnsupportedField(_),
        ) => 2,
        Some(_) => 3,
        None => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn report(rep: &Representation, budget: u128) -> (String, bool) {
    let g = rep.algebra();
    let representation = rep.verify_representation();
    let admissible = rep.is_admissible();
    let annihilated = rep.annihilated_by_derived();
    let fits = g
        .field()
        .order()
        .is_some_and(|p| subspace_count(p, rep.dim()) <= budget);
    let uniserial = if fits {
        match rep.is_uniserial_module(budget) {
            Ok(true) => "true",
            Ok(false) => "false",
            Err(_) => "unverified",
        }
    } else {
        "unverified"
    };
    let mut out = String::new();
    writeln!(out, "# representation = {representation}").unwrap();
    writeln!(out, "# admissible = {admissible}").unwrap();
    writeln!(out, "# uniserial = {uniserial}").unwrap();
    writeln!(out, "# annihilated_by_derived = {annihilated}").unwrap();
    writeln!(out, "# faithful = {}", rep.is_faithful()).unwrap();
    let ok = representation && admissible && uniserial != "false" && !annihilated;
    (out, ok)
}

fn run(cli: &Cli, out: &mut String) -> Result<Outcome> {
    let iso_cfg = IsoSearch {
        seed: cli.seed,
        ..IsoSearch::default()
    };
    match &cli.command {
        Command::Build { spec } => {
            let (g, spec) = parse_spec(&read(spec)?)?;
            let rep = spec.build(&g)?;
            let (text, ok) = report(&rep, cli.budget);
            out.push_str(&text);
            out.push_str(&render_representation(&rep));
            Ok(if ok { Outcome::Ok } else { Outcome::VerifierFailed })
        }
        Command::Verify { rep } => {
            let rep = parse_representation(&read(rep)?)?;
            let (text, ok) = report(&rep, cli.budget);
            out.push_str(&text);
            Ok(if ok { Outcome::Ok } else { Outcome::VerifierFailed })
        }
        Command::Canon { input, field } => {
            let text = read(input)?;
            let y = match field {
                Some(f) => {
                    let line = text
                        .lines()
                        .map(str::trim)
                        .find(|l| !l.is_empty() && !l.starts_with('#'))
                        .ok_or_else(|| Error::Parse("empty input".into()))?;
                    ClassY::parse(*f, line)?
                }
                None => ClassY::from_text(&text)?,
            };
            let (can, t) = canonicalize(&y, y.field().characteristic())?;
            let factors: Vec<String> = factor_unipotent(&t).iter().map(ToString::to_string).collect();
            writeln!(out, "field = {}", y.field()).unwrap();
            writeln!(out, "input = {}", y.render()).unwrap();
            writeln!(out, "canonical = {}", can.render()).unwrap();
            writeln!(out, "transporter = {}", t.poly()).unwrap();
            writeln!(out, "factors = {}", factors.join(",")).unwrap();
            Ok(Outcome::Ok)
        }
        Command::Iso { a, b } => {
            let ra = parse_representation(&read(a)?)?;
            let rb = parse_representation(&read(b)?)?;
            let dim = if ra.algebra() == rb.algebra() && ra.dim() == rb.dim() {
                intertwiners(&ra, &rb)?.len()
            } else {
                0
            };
            writeln!(out, "seed = {}", cli.seed).unwrap();
            writeln!(out, "intertwiner_dim = {dim}").unwrap();
            let iso = is_isomorphic_with(&ra, &rb, &iso_cfg)?;
            writeln!(out, "isomorphic = {iso}").unwrap();
            Ok(if iso { Outcome::Ok } else { Outcome::NotIsomorphic })
        }
        Command::Classify { rep } => {
            let rep = parse_representation(&read(rep)?)?;
            let inv = classify_with(&rep, cli.budget)?;
            out.push_str(&inv.to_text(rep.algebra()));
            Ok(Outcome::Ok)
        }
        Command::Enumerate {
            field,
            m,
            weights,
            limit,
        } => {
            let g = SolvableAlgebra::parse_weights(*field, weights)?;
            let cfg = CensusConfig {
                limit: *limit,
                subspace_budget: cli.budget,
                iso: iso_cfg,
                ..CensusConfig::default()
            };
            let census = enumerate(&g, *m, &cfg)?;
            writeln!(out, "seed = {}", cli.seed).unwrap();
            out.push_str(&census.to_text());
            Ok(if census.is_consistent() {
                Outcome::Ok
            } else {
                Outcome::VerifierFailed
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    if !out.is_empty() {
        let written = match &cli.out {
            Some(path) => fs::write(path, &out).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{out}");
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::NotIsomorphic) => ExitCode::from(1),
        Ok(Outcome::VerifierFailed) => ExitCode::from(3),
        Err(e) => {
            match e.downcast_ref::<Error>() {
                Some(err) => eprintln!("error[{}]: {e:#}", err.kind()),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(error_code(&e))
        }
    }
}
