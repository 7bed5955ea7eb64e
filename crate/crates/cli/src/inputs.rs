//! Resolution of command-line inputs: presets, inline specs and JSON files.

use std::fs;
use std::path::Path;

use btlab::building::{ball, LatticeChain, SimplexX};
use btlab::chaincx::{FiniteComplex, RegionTag};
use btlab::coeffring::FiniteField;
use btlab::latmod::Lattice;
use btlab::lefschetz::{EllipticElement, GroupElement};
use btlab::tower::{FloorSpec, TowerField};
use btlab::{Error, Result};
use serde_json::{Map, Value};

pub const SCHEMA: &str = "btlab/1";

/// A JSON document with its envelope fields ("schema", "q", "n") removed.
pub struct Document {
    pub q: Option<u64>,
    pub n: Option<usize>,
    pub body: Value,
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let Value::Object(mut obj) = v else {
        return Ok(Document { q: None, n: None, body: v });
    };
    if let Some(s) = obj.remove("schema") {
        if s != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {s}")));
        }
    }
    let q =
        obj.remove("q").map(|x| x.as_u64().ok_or_else(|| Error::Parse("q must be an integer".into()))).transpose()?;
    let n = obj
        .remove("n")
        .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| Error::Parse("n must be an integer".into())))
        .transpose()?;
    Ok(Document { q, n, body: Value::Object(obj) })
}

fn only_key(obj: Value, key: &str) -> Result<Value> {
    match obj {
        Value::Object(mut m) => {
            let v = m.remove(key).ok_or_else(|| Error::Parse(format!("missing {key:?}")))?;
            if let Some(k) = m.keys().next() {
                return Err(Error::Parse(format!("unknown field {k:?}")));
            }
            Ok(v)
        }
        other => Ok(other),
    }
}

fn check_q(doc: &Document, q: u64) -> Result<()> {
    match doc.q {
        Some(dq) if dq != q => Err(Error::Invalid(format!("document is over q = {dq}, but --q is {q}"))),
        _ => Ok(()),
    }
}

/// The q to use: the document's if it has one, else the flag.
pub fn doc_q(path: &str, q: u64) -> Result<u64> {
    let p = Path::new(path);
    if p.exists() {
        return Ok(read_document(p)?.q.unwrap_or(q));
    }
    Ok(q)
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad integer {x:?} in {s:?}")))).collect()
}

pub fn parse_composition(s: &str) -> Result<Vec<usize>> {
    parse_list(s)?
        .into_iter()
        .map(|x| usize::try_from(x).ok().filter(|&x| x > 0).ok_or_else(|| Error::BadComposition(s.into())))
        .collect()
}

/// Tower presets fix n as well.
pub fn tower(base: &FiniteField, spec: &str, n: Option<usize>) -> Result<TowerField> {
    let preset = |floors: Vec<FloorSpec>, pn: usize| TowerField::new(base, floors, Some(n.unwrap_or(pn)));
    match spec {
        "gl4-quadratic-unramified" | "chamber-decomp-n4-f2" => preset(vec![FloorSpec { e: 1, f: 2 }], 4),
        "trivial" => TowerField::new(base, vec![], n),
        _ if Path::new(spec).exists() => {
            let doc = read_document(Path::new(spec))?;
            check_q(&doc, base.order())?;
            let mut t = TowerField::from_json(base, &doc.body)?;
            if let Some(n) = n.or(doc.n) {
                t = t.with_n(n)?;
            }
            Ok(t)
        }
        _ => TowerField::parse_compact(base, spec, n),
    }
}

/// `standard-vertex`, `standard-chamber`, `standard:D1,D2,...`, or a chain
/// document.
pub fn chain(f: &FiniteField, spec: &str, n: usize) -> Result<LatticeChain> {
    match spec {
        "standard-vertex" => LatticeChain::standard(f, &[n]),
        "standard-chamber" | "single-chamber" => LatticeChain::standard(f, &vec![1; n]),
        _ => {
            if let Some(d) = spec.strip_prefix("standard:") {
                return LatticeChain::standard(f, &parse_composition(d)?);
            }
            let path = Path::new(spec);
            if !path.exists() {
                return Err(Error::Parse(format!("unknown chain {spec:?}")));
            }
            let doc = read_document(path)?;
            check_q(&doc, f.order())?;
            Ok(SimplexX::from_json(f, &only_key(doc.body, "simplex")?)?.chain())
        }
    }
}

/// `vertex:A1,...,An` (a diagonal lattice), a chain spec, or a simplex file.
pub fn simplex(f: &FiniteField, spec: &str, n: usize) -> Result<SimplexX> {
    if let Some(exps) = spec.strip_prefix("vertex:") {
        let exps = parse_list(exps)?;
        if exps.len() != n {
            return Err(Error::DimensionMismatch(format!("{} exponents for n = {n}", exps.len())));
        }
        return Ok(SimplexX::vertex(&Lattice::diagonal(f, &exps)));
    }
    Ok(SimplexX::from_chain(&chain(f, spec, n)?))
}

/// `single-chamber`, `standard-vertex`, `ball:R` (around the standard
/// lattice), or a region document.
pub fn region(f: &FiniteField, spec: &str, n: usize) -> Result<FiniteComplex<SimplexX>> {
    if let Some(r) = spec.strip_prefix("ball:") {
        let radius: usize = r.parse().map_err(|_| Error::Parse(format!("bad radius in {spec:?}")))?;
        if radius == 0 {
            return Err(Error::Invalid("ball radius must be positive".into()));
        }
        return Ok(FiniteComplex::from_ball(&ball(&Lattice::standard(f, n), radius)?));
    }
    if matches!(spec, "single-chamber" | "standard-chamber" | "standard-vertex") || spec.starts_with("standard:") {
        let s = SimplexX::from_chain(&chain(f, spec, n)?);
        return Ok(FiniteComplex::closure([s], RegionTag::Explicit(spec.into())));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Parse(format!("unknown region {spec:?}")));
    }
    let doc = read_document(path)?;
    check_q(&doc, f.order())?;
    FiniteComplex::from_json(f, &doc.body)
}

pub enum Gamma {
    Elliptic(EllipticElement),
    Matrix(GroupElement),
}

impl Gamma {
    pub fn element(&self) -> &GroupElement {
        match self {
            Gamma::Elliptic(g) => g.embedded(),
            Gamma::Matrix(g) => g,
        }
    }
}

/// `companion:x^n-t`, the preset `x2-minus-t`, or a document holding an
/// elliptic element ({"tower", "expansion"}) or a matrix ({"entries"}).
pub fn gamma(q: u64, spec: &str) -> Result<Gamma> {
    let f = FiniteField::with_order(q)?;
    let companion = |n: usize| Ok(Gamma::Elliptic(EllipticElement::companion_x_n_minus_t(&f, n)?));
    if spec == "x2-minus-t" {
        return companion(2);
    }
    if let Some(rest) = spec.strip_prefix("companion:x^") {
        let n = rest
            .strip_suffix("-t")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| Error::Parse(format!("expected companion:x^N-t, got {spec:?}")))?;
        return companion(n);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Parse(format!("unknown element {spec:?}")));
    }
    let doc = read_document(path)?;
    let q = doc.q.unwrap_or(q);
    let Value::Object(mut body) = doc.body else {
        return Err(Error::Parse("element document must be an object".into()));
    };
    if body.contains_key("expansion") {
        body.insert("q".into(), q.into());
        return Ok(Gamma::Elliptic(EllipticElement::from_json(&Value::Object(body))?));
    }
    if let Some(n) = doc.n {
        body.insert("n".into(), n.into());
    }
    Ok(Gamma::Matrix(GroupElement::from_json(&FiniteField::with_order(q)?, &Value::Object(body))?))
}

/// Wraps a body object in the versioned envelope.
pub fn document(q: Option<u64>, n: Option<usize>, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), SCHEMA.into());
    if let Some(q) = q {
        out.insert("q".into(), q.into());
    }
    if let Some(n) = n {
        out.insert("n".into(), n.into());
    }
    match body {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}
