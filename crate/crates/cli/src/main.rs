use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use khmod::braid::SlicedTangle;
use khmod::complex::Complex;
use khmod::verify::{self, Manifest, ProjectorStore, VerificationReport, CACHE_ENV};
use khmod::{Coeff, Error, RingKind, F2, Q, Z};

#[derive(Parser)]
#[command(name = "khmod", version, about = "Verification pipelines for Khovanov tangle complexes and projectors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
    #[value(name = "F2")]
    F2,
}

impl From<Ring> for RingKind {
    fn from(r: Ring) -> Self {
        match r {
            Ring::Z => RingKind::Z,
            Ring::Q => RingKind::Q,
            Ring::F2 => RingKind::F2,
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "Z")]
    ring: Ring,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Projector truncation in t.
    #[arg(long)]
    trunc: Option<i32>,
    #[arg(long, default_value_t = 100_000)]
    budget_states: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Attempt sizes outside the supported desk-scale matrix.
    #[arg(long)]
    experimental: bool,
    /// Negative control: build every crossing as a positive one.
    #[arg(long)]
    corrupt_conventions: bool,
    /// Print the report JSON instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// R1 shift table and R2/R3 equivalences.
    VerifyReidemeister(Common),
    /// Build, check and cache a projector.
    BuildProjector(Common),
    /// Twist action on E_{n,k} up to the shift functor.
    VerifyModular(Common),
    /// Decategorified and matrix oracles.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Summarize a report, or round-trip a complex or projector file.
    Report {
        file: PathBuf,
        /// Ring for bare complex files.
        #[arg(long, value_enum, default_value = "Z")]
        ring: Ring,
        /// Projector file the input must match.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Oracle {
    JonesWenzl(Common),
    ThroughProjectors(Common),
    ModularDecat(Common),
    Bracket {
        #[command(flatten)]
        common: Common,
        /// Braid word such as "s1 s2^-1 s1".
        #[arg(long)]
        word: Option<String>,
        /// Sliced tangle JSON file.
        #[arg(long, conflicts_with = "word")]
        tangle: Option<PathBuf>,
        /// Close the braid with nested caps and cups.
        #[arg(long)]
        closure: bool,
    },
    Matrices(Common),
}

fn manifest(pipeline: &str, c: &Common) -> Manifest {
    let mut m = Manifest::new(pipeline, c.ring.into());
    m.n = c.n;
    m.k = c.k;
    m.trunc = c.trunc;
    m.seed = c.seed;
    m.budget_states = c.budget_states;
    m.experimental = c.experimental;
    m.conventions.corrupted = c.corrupt_conventions;
    m
}

fn emit(r: &VerificationReport, c: &Common) -> Result<ExitCode, Error> {
    let text = r.to_json()?;
    if let Some(p) = &c.out {
        fs::write(p, &text)?;
    }
    if c.json {
        print!("{text}");
    } else {
        print!("{}", r.summary());
        println!("manifest {}", r.manifest_hash);
    }
    Ok(ExitCode::from(r.exit_code() as u8))
}

fn pipeline(name: &str, c: &Common, m: Option<Manifest>) -> Result<ExitCode, Error> {
    let m = m.unwrap_or_else(|| manifest(name, c));
    let store = ProjectorStore::new(c.cache_dir.clone());
    let r = verify::run(&m, &store)?;
    emit(&r, c)
}

fn round_trip<R: Coeff>(text: &str) -> Result<String, Error> {
    Complex::<R>::from_json(text)?.to_json()
}

fn projector_round_trip(text: &str, ring: RingKind) -> Result<(serde_json::Value, String), Error> {
    let conv = verify::Conventions::default();
    let v: serde_json::Value = serde_json::from_str(text)?;
    let out = match ring {
        RingKind::Z => verify::projector_from_json::<Z>(text).and_then(|(_, p)| verify::projector_to_json(&p, &conv)),
        RingKind::Q => verify::projector_from_json::<Q>(text).and_then(|(_, p)| verify::projector_to_json(&p, &conv)),
        RingKind::F2 => verify::projector_from_json::<F2>(text).and_then(|(_, p)| verify::projector_to_json(&p, &conv)),
    }?;
    Ok((v, out))
}

fn report(file: &Path, ring: RingKind, golden: Option<&Path>) -> Result<ExitCode, Error> {
    let text = fs::read_to_string(file)?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    if v.get("format").and_then(|f| f.as_str()) == Some(verify::REPORT_FORMAT) {
        let r = verify::read_report(file)?;
        print!("{}", r.summary());
        println!("manifest {}", r.manifest_hash);
        return Ok(ExitCode::from(r.exit_code() as u8));
    }
    let (kind, again) = if let Some(h) = v.get("header") {
        let ring: RingKind = serde_json::from_value(h["ring"].clone())?;
        let (_, out) = projector_round_trip(&text, ring)?;
        ("projector", out)
    } else {
        let out = match ring {
            RingKind::Z => round_trip::<Z>(&text),
            RingKind::Q => round_trip::<Q>(&text),
            RingKind::F2 => round_trip::<F2>(&text),
        }?;
        ("complex", out)
    };
    let identical = again == text;
    println!("{kind} round trip: {}", if identical { "byte-identical" } else { "DIFFERS" });
    let mut ok = identical;
    if let Some(g) = golden {
        let gold = fs::read_to_string(g)?;
        let a: serde_json::Value = serde_json::from_str(&gold)?;
        let same = a["complex"] == v["complex"] && a["header"]["n"] == v["header"]["n"] && a["header"]["k"] == v["header"]["k"];
        println!("golden {}: {}", g.display(), if same { "match" } else { "MISMATCH" });
        ok &= same;
    }
    Ok(ExitCode::from(if ok { 0 } else { 2 }))
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::VerifyReidemeister(c) => pipeline("verify-reidemeister", &c, None),
        Cmd::BuildProjector(c) => pipeline("build-projector", &c, None),
        Cmd::VerifyModular(c) => pipeline("verify-modular", &c, None),
        Cmd::Oracle { which } => match which {
            Oracle::JonesWenzl(c) => pipeline("oracle-jones-wenzl", &c, None),
            Oracle::ThroughProjectors(c) => pipeline("oracle-through-projectors", &c, None),
            Oracle::ModularDecat(c) => pipeline("oracle-modular-decat", &c, None),
            Oracle::Matrices(c) => pipeline("oracle-matrices", &c, None),
            Oracle::Bracket { common, word, tangle, closure } => {
                let mut m = manifest("oracle-bracket", &common);
                m.word = word;
                m.closure = closure;
                if let Some(p) = tangle {
                    let t: SlicedTangle = serde_json::from_str(&fs::read_to_string(p)?)?;
                    m.tangle = Some(SlicedTangle::new(t.bottom, t.slices)?);
                }
                pipeline("oracle-bracket", &common, Some(m))
            }
        },
        Cmd::Report { file, ring, golden } => report(&file, ring.into(), golden.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("khmod: {e}");
            ExitCode::from(1)
        }
    }
}
