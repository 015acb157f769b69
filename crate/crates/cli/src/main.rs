//! `altsurg` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 no stable coefficients,
//! 3 no obtuse superbase exists, 4 inconclusive search or search-space
//! overflow, 5 slope below the changemaker minimum, 6 graph not planar.

mod batch;
mod certificate;
mod selftest;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use altsurg::alexpoly::{is_lspace_form, parse_polynomial, torsion_coefficients, torsion_counts};
use altsurg::changemaker::{
    build_half_integer_lattice, build_integer_lattice, n_invariant, stable_coefficients, ChangemakerLattice,
    StableCoefficients,
};
use altsurg::classify::{classify, classify_rho, render_text, Classification, Outcome};
use altsurg::goeritz::{emit_branching_set, planarity};
use altsurg::lattice::validate_superbase;
use altsurg::osb_search::{search, CertificateStatus, SearchConfig, SearchMode, SuperbaseCertificate};
use altsurg::Error;

use certificate::{tool_version, CertificateFile, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{message}")]
    Status { code: u8, message: String },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EmptyStableCoefficients | Error::NotLSpaceForm => 2,
        Error::SearchSpaceOverflow { .. } | Error::Inconclusive { .. } | Error::Overflow(_) => 4,
        Error::SlopeTooSmall { .. } => 5,
        Error::NotPlanar => 6,
        _ => 1,
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(e) => exit_code(e) as u8,
            CliError::Status { code, .. } => *code,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
struct Global {
    /// Search mode.
    #[arg(long, value_enum, default_value = "full", global = true)]
    mode: ModeArg,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    cap_vectors: Option<u64>,
    #[arg(long, global = true)]
    cap_nodes: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KnotInput {
    /// Alexander polynomial coefficients, highest power first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "rho")]
    alexander: Option<Vec<i64>>,
    /// Stable coefficients, in any order.
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<i64>>,
}

#[derive(Debug, Parser)]
#[command(name = "altsurg", version, about = "Alternating surgery slopes via changemaker lattices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stable coefficients, genus and N.
    Stable(KnotInput),
    /// Search one changemaker lattice for an obtuse superbase.
    Osb {
        #[arg(long, value_delimiter = ',', required = true)]
        rho: Vec<i64>,
        /// Integer, `p/2` or `x.5`.
        #[arg(long)]
        slope: String,
    },
    /// Classify alternating surgery slopes.
    Classify {
        #[command(flatten)]
        input: KnotInput,
        /// CSV batch file; results go to --out as JSONL.
        #[arg(long, conflicts_with_all = ["alexander", "rho"])]
        batch: Option<PathBuf>,
        /// Continue an interrupted batch run.
        #[arg(long, requires = "batch")]
        resume: bool,
        /// Report slopes for the mirror image.
        #[arg(long)]
        mirror: bool,
    },
    /// Emit alternating diagram data from a certificate file.
    Emit {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Run the built-in reference corpus.
    Selftest {
        /// Skip the slowest groups.
        #[arg(long)]
        fast: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn config(g: &Global) -> SearchConfig {
    let mut cfg = SearchConfig::with_mode(match g.mode {
        ModeArg::Quick => SearchMode::Quick,
        ModeArg::Full => SearchMode::Full,
    });
    if let Some(c) = g.cap_vectors {
        cfg.cap_vectors = c;
    }
    if let Some(c) = g.cap_nodes {
        cfg.cap_nodes = c;
    }
    cfg
}

fn write_output(g: &Global, text: &str) -> Result<(), CliError> {
    match &g.out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let g = &cli.global;
    match cli.cmd {
        Command::Stable(input) => cmd_stable(g, input),
        Command::Osb { rho, slope } => cmd_osb(g, rho, &slope),
        Command::Classify { input, batch, resume, mirror } => match batch {
            Some(path) => cmd_batch(g, &path, resume),
            None => cmd_classify(g, input, mirror),
        },
        Command::Emit { certificate } => cmd_emit(g, &certificate),
        Command::Selftest { fast } => selftest::run(&config(g), fast),
    }
}

#[derive(Serialize)]
struct StableReport {
    schema_version: u32,
    unknot_form: bool,
    rho: Option<Vec<i64>>,
    genus: Option<i64>,
    #[serde(rename = "N")]
    n: Option<i64>,
}

fn cmd_stable(g: &Global, input: KnotInput) -> Result<u8, CliError> {
    let rho = match (input.alexander, input.rho) {
        (Some(raw), _) => {
            let p = parse_polynomial(&raw)?;
            let genus = p.genus_degree() as i64;
            if genus == 0 {
                let r = StableReport { schema_version: SCHEMA_VERSION, unknot_form: true, rho: None, genus: Some(0), n: None };
                let text = if g.json { to_json(&r)? } else { "unknot form: trivial Alexander polynomial".into() };
                write_output(g, &text)?;
                return Ok(0);
            }
            let profile = torsion_coefficients(&p);
            if !is_lspace_form(&profile) {
                return Err(CliError::Status { code: 2, message: "no stable coefficients: not of L-space form".into() });
            }
            let counts = torsion_counts(&profile)?;
            stable_coefficients(&counts, genus, counts.t0()).ok_or_else(|| CliError::Status {
                code: 2,
                message: "no stable coefficients: torsion counts are not realised".into(),
            })?
        }
        (None, Some(r)) => StableCoefficients::new(r)?,
        (None, None) => return Err(CliError::Usage("one of --alexander or --rho is required".into())),
    };
    let n = n_invariant(&rho)?;
    let r = StableReport {
        schema_version: SCHEMA_VERSION,
        unknot_form: false,
        rho: Some(rho.as_slice().to_vec()),
        genus: Some(rho.genus()),
        n: Some(n),
    };
    let text = if g.json {
        to_json(&r)?
    } else {
        let list: Vec<String> = rho.as_slice().iter().map(|x| x.to_string()).collect();
        format!("rho=[{}] g={} N={}", list.join(","), rho.genus(), n)
    };
    write_output(g, &text)?;
    Ok(0)
}

/// Parse an integer or half-integer slope into a lattice.
fn slope_lattice(rho: &StableCoefficients, slope: &str) -> Result<ChangemakerLattice, CliError> {
    let s = slope.trim();
    let scope = || {
        CliError::Usage(format!("slope {s:?}: only integer and half-integer slopes (p/2 or x.5) are supported"))
    };
    if let Ok(n) = s.parse::<i64>() {
        return Ok(build_integer_lattice(rho, n)?);
    }
    let twice = if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| scope())?;
        match q.trim().parse::<i64>().map_err(|_| scope())? {
            1 => return Ok(build_integer_lattice(rho, p)?),
            2 if p % 2 != 0 => p,
            2 => return Ok(build_integer_lattice(rho, p / 2)?),
            _ => return Err(scope()),
        }
    } else if let Some(int) = s.strip_suffix(".5") {
        let k: i64 = int.parse().map_err(|_| scope())?;
        if int.starts_with('-') {
            return Err(scope());
        }
        2 * k + 1
    } else {
        return Err(scope());
    };
    // slope twice/2 = n - 1/2
    Ok(build_half_integer_lattice(rho, (twice + 1) / 2)?)
}

fn cmd_osb(g: &Global, rho: Vec<i64>, slope: &str) -> Result<u8, CliError> {
    let rho = StableCoefficients::new(rho)?;
    let l = slope_lattice(&rho, slope)?;
    let cfg = config(g);
    let outcome = search(&l, &cfg)?;
    let cert = SuperbaseCertificate::from_outcome(&outcome);
    let code = match cert.status {
        CertificateStatus::Found => 0,
        CertificateStatus::None => 3,
        CertificateStatus::Inconclusive => 4,
    };
    let file = CertificateFile::new(
        rho.as_slice().to_vec(),
        l.flavor,
        l.sigma.as_slice().to_vec(),
        l.disc(),
        outcome.mode,
        cert,
    );
    let status = match file.certificate.status {
        CertificateStatus::Found if file.certificate.planar => "Found (planar)",
        CertificateStatus::Found => "Found (not planar)",
        CertificateStatus::None => "NoneExists",
        CertificateStatus::Inconclusive => "Inconclusive",
    };
    let json = to_json(&file)?;
    match (&g.out, g.json) {
        (Some(_), _) => {
            write_output(g, &json)?;
            println!("slope {} disc {}: {}", file.slope, file.disc, status);
        }
        (None, true) => write_output(g, &json)?,
        (None, false) => println!("slope {} disc {}: {}", file.slope, file.disc, status),
    }
    Ok(code)
}

fn mirror(c: &mut Classification) {
    let neg = |s: &mut i64| *s = -*s;
    match &mut c.outcome {
        Outcome::AtMostOne { slope } | Outcome::CounterexampleFlag { slope } => neg(slope),
        Outcome::AtMostTwo { slopes } => {
            slopes.iter_mut().for_each(neg);
            slopes.reverse();
        }
        Outcome::CandidateIntervalD { interval, .. } => {
            interval.iter_mut().for_each(neg);
            interval.reverse();
        }
        _ => {}
    }
    if let Some(w) = c.slope_window.as_mut() {
        w.iter_mut().for_each(neg);
        w.reverse();
    }
    for r in &mut c.certificates {
        r.slope = format!("-{}", r.slope);
    }
    c.caveats.push("slopes are reported for the mirror image".into());
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    schema_version: u32,
    tool: String,
    mirror: bool,
    #[serde(flatten)]
    classification: &'a Classification,
}

fn cmd_classify(g: &Global, input: KnotInput, mirrored: bool) -> Result<u8, CliError> {
    let cfg = config(g);
    let result = match (input.alexander, input.rho) {
        (Some(raw), _) => classify(&parse_polynomial(&raw)?, &cfg),
        (None, Some(r)) => classify_rho(&StableCoefficients::new(r)?, &cfg),
        (None, None) => return Err(CliError::Usage("one of --alexander, --rho or --batch is required".into())),
    };
    let mut c = match result {
        Ok(c) => c,
        Err(e) => {
            for r in &e.partial {
                eprintln!("partial: L_{} {:?}", r.slope, r.certificate.status);
            }
            return Err(e.source.into());
        }
    };
    if mirrored {
        mirror(&mut c);
    }
    let text = if g.json {
        to_json(&ClassifyOutput { schema_version: SCHEMA_VERSION, tool: tool_version(), mirror: mirrored, classification: &c })?
    } else {
        render_text(&c)
    };
    write_output(g, &text)?;
    Ok(0)
}

fn cmd_batch(g: &Global, path: &PathBuf, resume: bool) -> Result<u8, CliError> {
    let out = g.out.as_ref().ok_or_else(|| CliError::Usage("--batch needs --out".into()))?;
    let items = batch::parse_batch(&fs::read_to_string(path)?)?;
    let workers = g.threads.unwrap_or_else(rayon::current_num_threads);
    let done = batch::run_batch(&items, out, &config(g), resume, workers)?;
    eprintln!("{done} record(s) written to {}", out.display());
    Ok(0)
}

fn cmd_emit(g: &Global, path: &PathBuf) -> Result<u8, CliError> {
    let file: CertificateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if !file.hash_ok() {
        return Err(CliError::Usage("certificate content hash does not match".into()));
    }
    if file.certificate.status != CertificateStatus::Found {
        return Err(CliError::Status { code: 3, message: "certificate does not contain a superbase".into() });
    }
    let rho = StableCoefficients::new(file.rho.clone())?;
    let l = slope_lattice(&rho, &file.slope)?;
    let b = validate_superbase(&l, &file.certificate.vectors)?;
    let embedding = planarity(&b.graph).ok_or(Error::NotPlanar)?;
    let diagram = emit_branching_set(&embedding, &b)?;
    write_output(g, &to_json(&diagram)?)?;
    if g.out.is_some() {
        println!("{} crossings, determinant {}", diagram.pd_crossings.len(), diagram.determinant);
    }
    Ok(0)
}
