//! `btlab`: JSON front end for the building toolkit.
//!
//! Every command prints one JSON document carrying `"schema": "btlab/1"`.
//! Exit codes: 0 on success, 2 on domain and input errors, 3 on guard
//! violations.

mod inputs;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btlab::building::{ball, random_chain, SimplexX};
use btlab::chaincx::{
    build_complex, homology_ranks, relative_volume, CoefficientSystem, DetLabel, FiniteComplex, Style,
};
use btlab::coeffring::FiniteField;
use btlab::latmod::FMatrix;
use btlab::lefschetz::{
    fixed_simplices, lefschetz_minimal, lefschetz_sum, orbit_apartment_intersection, orbit_bfs, parahoric_generators,
    DimensionOracle, EllipticElement, SymbolicOracle, TraceOracle,
};
use btlab::tower::{chamber_decomposition, criterion_xe, support_xl, vertex_label, ChainOverFloor, TowerField};
use btlab::{Error, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use inputs::{document, SCHEMA};

#[derive(Parser)]
#[command(name = "btlab", version, about = "Lattice-chain computations in the building of GL_n over F_q((t))")]
struct Cli {
    /// Worker threads for enumeration and rank kernels.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residue field and tower data.
    Field(FieldArgs),
    /// Lattice chains and regions of the building.
    #[command(subcommand, alias = "building")]
    Chain(ChainCmd),
    /// Membership of a chain in X(E).
    Criterion(CriterionArgs),
    /// The X[L] chambers inside a chamber of X.
    Decompose(DecomposeArgs),
    /// Criterion and decomposition under one name.
    #[command(subcommand)]
    Tower(TowerCmd),
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Ratio of parahoric volumes.
    Volume(VolumeArgs),
    /// Orbit of a simplex under a parahoric subgroup, modulo t^prec.
    Orbit(OrbitArgs),
    /// Simplices fixed by an element inside a ball.
    Fixed(FixedArgs),
    #[command(subcommand)]
    Lefschetz(LefschetzCmd),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    tower: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum ChainCmd {
    /// d, e and p of a chain.
    Invariants {
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// A chain g·L for a seeded random g and the standard chain of type d.
    Random {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Composition of n, e.g. "1,2,1"; defaults to all ones.
        #[arg(long)]
        d: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on the valuations of the random entries.
        #[arg(long, default_value_t = 2)]
        spread: i64,
    },
    /// A face-closed region as a list of simplices.
    Region {
        #[arg(long, default_value = "single-chamber")]
        region: String,
        /// Shorthand for `--region ball:R`.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        radius: Option<u64>,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Args)]
struct CriterionArgs {
    #[arg(long)]
    tower: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value = "standard-vertex")]
    chain: String,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    tower: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value = "standard-chamber")]
    chain: String,
}

#[derive(Subcommand)]
enum TowerCmd {
    Criterion(CriterionArgs),
    Decompose(DecomposeArgs),
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Homology ranks with constant coefficients.
    Homology {
        #[arg(long, default_value = "single-chamber")]
        region: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        radius: Option<u64>,
        #[arg(long, default_value = "const:1")]
        coeff: String,
        #[arg(long, default_value = "oriented")]
        style: String,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Args)]
struct VolumeArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    chain: String,
    #[arg(long)]
    relative_to: String,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// The chain whose parahoric acts.
    #[arg(long, default_value = "standard-chamber")]
    chain: String,
    /// The simplex to move: a chain spec or `vertex:A1,...,An`.
    #[arg(long)]
    vertex: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(i64).range(1..))]
    prec: i64,
    /// Maximum orbit size before giving up.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    guard: u64,
}

#[derive(Args)]
struct FixedArgs {
    #[arg(long)]
    gamma: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    radius: u64,
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Also report the Lefschetz sum with the dimension oracle.
    #[arg(long)]
    coeff: Option<String>,
}

#[derive(Args)]
struct MinimalArgs {
    /// Tower over which the element is given (with its n).
    #[arg(long)]
    tower: Option<String>,
    /// The element as a series in the top-floor uniformizer s.
    #[arg(long)]
    gamma_expansion: Option<String>,
    /// A preset or element document, instead of --tower/--gamma-expansion.
    #[arg(long, conflicts_with_all = ["tower", "gamma_expansion"])]
    gamma: Option<String>,
    /// The tower L carrying the coefficient support.
    #[arg(long = "L")]
    l_tower: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Evaluate with the dimension oracle instead of symbolically.
    #[arg(long)]
    coeff: Option<String>,
}

#[derive(Subcommand)]
enum LefschetzCmd {
    Fixed(FixedArgs),
    /// The single possible term for a minimal element.
    Minimal(MinimalArgs),
}

fn field_of(q: u64) -> Result<FiniteField> {
    FiniteField::with_order(q)
}

fn need_n(n: Option<usize>, tw: &TowerField) -> Result<usize> {
    n.or(tw.n()).ok_or_else(|| Error::Invalid("--n is required for this tower".into()))
}

fn run_field(a: &FieldArgs) -> Result<Value> {
    let f = field_of(a.q)?;
    let mut body = json!({ "p": f.p(), "k": f.k(), "modulus": f.modulus() });
    if let Some(spec) = &a.tower {
        let tw = inputs::tower(&f, spec, a.n)?;
        let floors = (0..=tw.top())
            .map(|i| {
                Ok(json!({
                    "e": tw.e(i),
                    "f": tw.f(i),
                    "degree": tw.degree(i),
                    "residue_order": tw.residue(i)?.order(),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        body["floors"] = Value::Array(floors);
        return Ok(document(Some(a.q), tw.n(), body));
    }
    Ok(document(Some(a.q), None, body))
}

fn run_chain(c: &ChainCmd) -> Result<Value> {
    match c {
        ChainCmd::Invariants { chain, q, n } => {
            let q = inputs::doc_q(chain, *q)?;
            let c = inputs::chain(&field_of(q)?, chain, *n)?;
            let inv = c.invariants();
            Ok(document(None, None, json!({ "d": inv.d, "e": inv.e, "p": inv.p })))
        }
        ChainCmd::Random { q, n, d, seed, spread } => {
            let f = field_of(*q)?;
            let d = match d {
                Some(d) => inputs::parse_composition(d)?,
                None => vec![1; *n],
            };
            if d.iter().sum::<usize>() != *n {
                return Err(Error::BadComposition(format!("{d:?} is not a composition of {n}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let c = random_chain(&f, &d, *spread, &mut rng)?;
            Ok(document(Some(*q), Some(*n), json!({ "simplex": SimplexX::from_chain(&c).to_json() })))
        }
        ChainCmd::Region { region, radius, q, n } => {
            let spec = radius.map_or_else(|| region.clone(), |r| format!("ball:{r}"));
            let fc = inputs::region(&field_of(*q)?, &spec, *n)?;
            Ok(document(Some(*q), Some(*n), fc.to_json()))
        }
    }
}

fn run_criterion(a: &CriterionArgs) -> Result<Value> {
    let q = inputs::doc_q(&a.tower, a.q)?;
    let f = field_of(q)?;
    let tw = inputs::tower(&f, &a.tower, a.n)?;
    let n = need_n(a.n, &tw)?;
    let c = inputs::chain(&f, &a.chain, n)?;
    if c.dim() != n {
        return Err(Error::DimensionMismatch(format!("chain has dimension {}, expected {n}", c.dim())));
    }
    let inv = c.invariants();
    Ok(document(None, None, json!({ "in_XE": criterion_xe(&tw, &c), "d": inv.d, "e": inv.e, "p": inv.p })))
}

fn run_decompose(a: &DecomposeArgs) -> Result<Value> {
    let q = inputs::doc_q(&a.tower, a.q)?;
    let f = field_of(q)?;
    let tw = inputs::tower(&f, &a.tower, a.n)?;
    let n = need_n(a.n, &tw)?;
    let c = inputs::chain(&f, &a.chain, n)?;
    let top = tw.top();
    let e_param = n / tw.f(top);
    let trivial = TowerField::new(&f, vec![], Some(n))?;
    let chambers = chamber_decomposition(&tw, &c)?
        .iter()
        .map(|x| {
            let u = x.underlying();
            let support = support_xl(&ChainOverFloor::new(&trivial, 0, u.chain())?, e_param)?;
            let labels: Vec<usize> = x.vertices().iter().map(|v| vertex_label(v, &tw)).collect();
            Ok(json!({ "simplex": u.to_json(), "labels": labels, "support_XL": support }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(document(Some(q), Some(n), json!({ "e": tw.e(top), "f": tw.f(top), "chambers": chambers })))
}

fn run_complex(c: &ComplexCmd) -> Result<Value> {
    let ComplexCmd::Homology { region, radius, coeff, style, q, n } = c;
    let spec = radius.map_or_else(|| region.clone(), |r| format!("ball:{r}"));
    let q = inputs::doc_q(&spec, *q)?;
    let fc = inputs::region(&field_of(q)?, &spec, *n)?;
    let cs = CoefficientSystem::parse(coeff)?;
    let style: Style = style.parse()?;
    let dim = fc.cells(0).first().map_or(*n, |v| v.ambient_dim());
    let cc = build_complex(&fc, &cs, style, &DetLabel { modulus: dim as i64 })?;
    Ok(document(
        None,
        None,
        json!({ "ranks": homology_ranks(&cc), "chi": cc.euler_characteristic(), "cells": cc.cell_counts }),
    ))
}

fn run_volume(a: &VolumeArgs) -> Result<Value> {
    let q = inputs::doc_q(&a.chain, a.q)?;
    let f = field_of(q)?;
    let c1 = inputs::chain(&f, &a.chain, a.n)?;
    let c2 = inputs::chain(&f, &a.relative_to, a.n)?;
    let r = relative_volume(&c1, &c2, q)?;
    Ok(document(Some(q), None, json!({ "ratio": r.to_string() })))
}

fn run_orbit(a: &OrbitArgs) -> Result<Value> {
    let f = field_of(a.q)?;
    let c = inputs::chain(&f, &a.chain, a.n)?;
    let s = inputs::simplex(&f, &a.vertex, a.n)?;
    let gens = parahoric_generators(&c, a.prec)?;
    let guard = usize::try_from(a.guard).unwrap_or(usize::MAX);
    let orbit = orbit_bfs(&gens, &s, a.prec, guard)?;
    let meet = orbit_apartment_intersection(&orbit, &FMatrix::identity(&f, a.n))?;
    Ok(document(
        Some(a.q),
        Some(a.n),
        json!({
            "orbit_size": orbit.len(),
            "orbit": orbit.iter().map(SimplexX::to_json).collect::<Vec<_>>(),
            "apartment": meet.iter().map(SimplexX::to_json).collect::<Vec<_>>(),
        }),
    ))
}

fn run_fixed(a: &FixedArgs) -> Result<Value> {
    let q = inputs::doc_q(&a.gamma, a.q)?;
    let f = field_of(q)?;
    let gamma = inputs::gamma(q, &a.gamma)?;
    let g = gamma.element();
    let n = g.dim();
    let radius = usize::try_from(a.radius).map_err(|_| Error::Invalid("radius is too large".into()))?;
    let region = FiniteComplex::from_ball(&ball(&btlab::latmod::Lattice::standard(&f, n), radius)?);
    let fixed = fixed_simplices(g, &region)?;
    let list: Vec<Value> = fixed
        .iter()
        .map(|x| {
            json!({
                "simplex": x.simplex.to_json(),
                "sign": x.sign,
                "fixed_dim": x.fixed_dim,
                "cycle_type": x.cycle_type,
                "orbit_key": x.simplex.chain().d_sequence(),
            })
        })
        .collect();
    let mut body = json!({ "region_cells": region.len(), "count": list.len(), "fixed": list });
    if let Some(coeff) = &a.coeff {
        let sum = lefschetz_sum(g, &region, &DimensionOracle(CoefficientSystem::parse(coeff)?))?;
        body["lefschetz"] = sum.by_fixed_dim.to_string().into();
    }
    Ok(document(Some(q), Some(n), body))
}

fn run_minimal(a: &MinimalArgs) -> Result<Value> {
    let elem = match (&a.gamma, &a.tower, &a.gamma_expansion) {
        (Some(g), _, _) => match inputs::gamma(inputs::doc_q(g, a.q)?, g)? {
            inputs::Gamma::Elliptic(e) => e,
            inputs::Gamma::Matrix(_) => return Err(Error::Invalid("a matrix element carries no field data".into())),
        },
        (None, Some(t), Some(x)) => {
            let q = inputs::doc_q(t, a.q)?;
            EllipticElement::from_expansion(inputs::tower(&field_of(q)?, t, a.n)?, x)?
        }
        _ => return Err(Error::Invalid("give --gamma, or --tower with --gamma-expansion".into())),
    };
    let n = elem.n();
    let l = inputs::tower(elem.tower().base(), &a.l_tower, Some(n))?;
    let dims;
    let oracle: &dyn TraceOracle = match &a.coeff {
        Some(c) => {
            dims = DimensionOracle(CoefficientSystem::parse(c)?);
            &dims
        }
        None => &SymbolicOracle,
    };
    let term = lefschetz_minimal(&elem, &l, oracle)?;
    Ok(document(
        Some(elem.tower().q()),
        Some(n),
        json!({
            "support": term.support,
            "term": { "orbit": term.orbit, "sign": term.sign },
            "value": term.value.to_string(),
        }),
    ))
}

fn run(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::Field(a) => run_field(a),
        Command::Chain(c) => run_chain(c),
        Command::Criterion(a) | Command::Tower(TowerCmd::Criterion(a)) => run_criterion(a),
        Command::Decompose(a) | Command::Tower(TowerCmd::Decompose(a)) => run_decompose(a),
        Command::Complex(c) => run_complex(c),
        Command::Volume(a) => run_volume(a),
        Command::Orbit(a) => run_orbit(a),
        Command::Fixed(a) | Command::Lefschetz(LefschetzCmd::Fixed(a)) => run_fixed(a),
        Command::Lefschetz(LefschetzCmd::Minimal(a)) => run_minimal(a),
    }
}

/// Writes through a sibling temporary file so a failed run never leaves a
/// truncated document behind.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn error_document(kind: &str, message: &str) -> String {
    let v = json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } });
    serde_json::to_string_pretty(&v).expect("JSON values always serialize")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            println!("{}", error_document("Usage", e.to_string().lines().next().unwrap_or_default()));
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global() {
            eprintln!("could not configure the thread pool: {e}");
        }
    }
    let text = match run(&cli.command) {
        Ok(v) => serde_json::to_string_pretty(&v).expect("JSON values always serialize"),
        Err(e) => {
            println!("{}", error_document(e.kind(), &e.to_string()));
            return ExitCode::from(if e.is_guard() { 3 } else { 2 });
        }
    };
    let written = match &cli.out {
        Some(path) => write_atomic(path, &format!("{text}\n")),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    };
    if let Err(e) = written {
        println!("{}", error_document("Io", &e.to_string()));
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
