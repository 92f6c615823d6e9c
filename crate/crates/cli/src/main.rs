use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gl2reps::charfun::Level;
use gl2reps::clifford::Registry;
use gl2reps::driver::{build_table, ClassifyOptions};
use gl2reps::io::{compare_files, Cache, TableFileV1};
use gl2reps::oracle::{oracle_table, DEFAULT_SEED};
use gl2reps::ring::{Flavor, RingSpec};
use gl2reps::{Error, DEFAULT_CAP, TOLERANCE};

const EXIT_UNCERTIFIED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

/// Irreducible characters of GL2 over Z/p^r and F_p[t]/t^r.
#[derive(Parser)]
#[command(name = "gl2reps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and certify the character table by the orbit method.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest group order that may be enumerated.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Neither read nor write the table cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Brute-force character table from the class algebra.
    Oracle {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Compare two table files up to a permutation of rows.
    Verify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = TOLERANCE)]
        tol: f64,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, default_value = "padic", value_parser = parse_flavor)]
    flavor: Flavor,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    r: u32,
}

impl SpecArgs {
    fn spec(&self) -> RingSpec {
        RingSpec::new(self.flavor, self.p, self.r)
    }
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidSpec(_) | Error::TooLarge { .. } => EXIT_USAGE,
        Error::ClassMismatch | Error::Parse(_) | Error::Json(_) => EXIT_DATA,
        _ => 1,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Classify {
            spec,
            out,
            cap,
            no_cache,
        } => classify(spec.spec(), out.as_deref(), cap, no_cache),
        Command::Oracle { spec, seed, out, cap } => {
            let level = Level::new(spec.spec(), cap)?;
            let rows = oracle_table(level.group(), level.classes(), seed)?;
            let labels = (0..rows.len()).map(|i| format!("oracle#{i}")).collect();
            emit(&TableFileV1::from_rows(&level, labels, &rows), out.as_deref())?;
            Ok(0)
        }
        Command::Verify { a, b, tol } => {
            let (a, b) = (TableFileV1::read(&a)?, TableFileV1::read(&b)?);
            let cmp = compare_files(&a, &b)?;
            println!("rows: {} vs {}", cmp.rows_a, cmp.rows_b);
            println!("max residual: {:e}", cmp.residual);
            Ok(if cmp.passed(tol) { 0 } else { EXIT_UNCERTIFIED })
        }
    }
}

fn classify(spec: RingSpec, out: Option<&Path>, cap: usize, no_cache: bool) -> Result<u8, Error> {
    let cache = (!no_cache).then(Cache::from_env);
    if let Some(file) = cache.as_ref().and_then(|c| c.load(spec)) {
        log::info!("using cached table for {spec}");
        emit(&file, out)?;
        return Ok(0);
    }
    let opts = ClassifyOptions {
        cap,
        ..ClassifyOptions::default()
    };
    let table = build_table(spec, &opts, &Registry::standard())?;
    let cert = table.certificate();
    let file = TableFileV1::from_table(&table);
    emit(&file, out)?;
    if !cert.passed() {
        eprintln!("certificate failed: {cert:?}");
        return Ok(EXIT_UNCERTIFIED);
    }
    if let Some(cache) = &cache {
        if let Err(e) = cache.store(&file) {
            log::warn!("could not write cache in {}: {e}", cache.dir().display());
        }
    }
    eprintln!(
        "{spec}: {} irreducible characters, Σ dim² = {} = |G|",
        cert.irreps, cert.dim_square_sum
    );
    Ok(0)
}

fn emit(file: &TableFileV1, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => file.write(path),
        None => {
            println!("{}", file.to_json()?);
            Ok(())
        }
    }
}
