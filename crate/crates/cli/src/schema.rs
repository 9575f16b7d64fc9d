//! The versioned JSON document read by every command.
//!
//! Integers may be written as JSON numbers or, when they do not fit in 64
//! bits, as decimal strings. Rational entries (the mixed and stratum blocks
//! of a germ) may also be written as `"p/q"` strings.

use std::collections::BTreeMap;
use std::fmt;

use gcorners::arith::{Int, Rat};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Located};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn to_int(&self) -> Result<Int, String> {
        match self {
            Num::Int(v) => Ok(Int::from(*v)),
            Num::Text(s) => s.trim().parse::<BigInt>().map_err(|_| format!("'{s}' is not an integer")),
        }
    }

    pub fn to_rat(&self) -> Result<Rat, String> {
        match self {
            Num::Int(v) => Ok(Rat::from_integer(Int::from(*v))),
            Num::Text(s) => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s.as_str(), "1"),
                };
                let n = n.trim().parse::<BigInt>().map_err(|_| format!("'{s}' is not a rational"))?;
                let d = d.trim().parse::<BigInt>().map_err(|_| format!("'{s}' is not a rational"))?;
                if d == BigInt::from(0) {
                    return Err(format!("'{s}' has a zero denominator"));
                }
                Ok(Rat::new(n, d))
            }
        }
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num::Int(v)
    }
}

pub type Row = Vec<Num>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidBlock {
    pub ambient_rank: usize,
    pub generators: Vec<Row>,
}

/// Free commutative monoid on `generators` letters modulo `lhs = rhs`,
/// each side an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentedBlock {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<(Row, Row)>,
}

/// `matrix` has one row per target coordinate and one column per source
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBlock {
    pub source: String,
    pub target: String,
    pub matrix: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismPairBlock {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub monoid: String,
    #[serde(default)]
    pub real_dim: usize,
}

/// `exponent[i][j]` is the power of the `i`-th source boundary coordinate
/// in the `j`-th target monomial. `mixed` (target rank x source real
/// dimension) and `stratum` (target real x source real dimension) default
/// to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermBlock {
    pub source: String,
    pub target: String,
    pub exponent: Vec<Row>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed: Option<Vec<Row>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratum: Option<Vec<Row>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairBlock {
    pub g: String,
    pub h: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub monoids: BTreeMap<String, MonoidBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub presented: BTreeMap<String, PresentedBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphism_pairs: BTreeMap<String, MorphismPairBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub local_models: BTreeMap<String, ModelBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub germs: BTreeMap<String, GermBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<String, PairBlock>,
}

impl Document {
    pub fn new() -> Self {
        Document { schema_version: SCHEMA_VERSION, ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

/// Parses and validates a document, reporting every problem found.
pub fn parse(text: &str) -> Result<Document, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::Input(vec![Located::new("", "empty document")]));
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let path = if path == "." { String::new() } else { path };
        CliError::Input(vec![Located::new(&path, &inner.to_string())])
    })?;
    let errors = validate(&doc);
    if errors.is_empty() {
        Ok(doc)
    } else {
        Err(CliError::Input(errors))
    }
}

struct Checker {
    errors: Vec<Located>,
}

impl Checker {
    fn push(&mut self, path: impl fmt::Display, msg: impl Into<String>) {
        self.errors.push(Located { path: path.to_string(), message: msg.into() });
    }

    fn ints(&mut self, path: &str, row: &[Num], len: usize) {
        if row.len() != len {
            self.push(path, format!("expected {len} entries, got {}", row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            if let Err(e) = x.to_int() {
                self.push(format!("{path}[{j}]"), e);
            }
        }
    }

    fn rats(&mut self, path: &str, row: &[Num], len: usize) {
        if row.len() != len {
            self.push(path, format!("expected {len} entries, got {}", row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            if let Err(e) = x.to_rat() {
                self.push(format!("{path}[{j}]"), e);
            }
        }
    }

    fn naturals(&mut self, path: &str, row: &[Num], len: usize) {
        self.ints(path, row, len);
        for (j, x) in row.iter().enumerate() {
            if matches!(x.to_int(), Ok(v) if v < Int::from(0)) {
                self.push(format!("{path}[{j}]"), "exponents must be nonnegative");
            }
        }
    }

    fn reference<T>(&mut self, path: &str, name: &str, kind: &str, map: &BTreeMap<String, T>) -> bool {
        if map.contains_key(name) {
            true
        } else {
            self.push(path, format!("unknown {kind} '{name}'"));
            false
        }
    }

    /// A rectangular matrix with `n_rows` rows; without `n_cols` the first
    /// row fixes the width.
    fn matrix(&mut self, path: &str, rows: &[Row], n_rows: usize, n_cols: Option<usize>, rational: bool) {
        if rows.len() != n_rows {
            self.push(path, format!("expected {n_rows} rows, got {}", rows.len()));
        }
        let cols = n_cols.or_else(|| rows.first().map(|r| r.len())).unwrap_or(0);
        for (i, r) in rows.iter().enumerate() {
            let p = format!("{path}[{i}]");
            if rational {
                self.rats(&p, r, cols);
            } else {
                self.ints(&p, r, cols);
            }
        }
    }
}

fn validate(doc: &Document) -> Vec<Located> {
    let mut c = Checker { errors: Vec::new() };
    if doc.schema_version != SCHEMA_VERSION {
        c.push("schema_version", format!("unsupported version {}, expected {SCHEMA_VERSION}", doc.schema_version));
    }
    for (name, m) in &doc.monoids {
        for (i, g) in m.generators.iter().enumerate() {
            c.ints(&format!("monoids.{name}.generators[{i}]"), g, m.ambient_rank);
        }
    }
    for (name, p) in &doc.presented {
        for (i, (l, r)) in p.relations.iter().enumerate() {
            c.naturals(&format!("presented.{name}.relations[{i}][0]"), l, p.generators);
            c.naturals(&format!("presented.{name}.relations[{i}][1]"), r, p.generators);
        }
    }
    for (name, m) in &doc.morphisms {
        let base = format!("morphisms.{name}");
        let s = c.reference(&format!("{base}.source"), &m.source, "monoid", &doc.monoids);
        let t = c.reference(&format!("{base}.target"), &m.target, "monoid", &doc.monoids);
        if s && t {
            let (s, t) = (&doc.monoids[&m.source], &doc.monoids[&m.target]);
            c.matrix(&format!("{base}.matrix"), &m.matrix, t.ambient_rank, Some(s.ambient_rank), false);
        }
    }
    for (name, p) in &doc.morphism_pairs {
        let base = format!("morphism_pairs.{name}");
        c.reference(&format!("{base}.left"), &p.left, "morphism", &doc.morphisms);
        c.reference(&format!("{base}.right"), &p.right, "morphism", &doc.morphisms);
    }
    for (name, m) in &doc.local_models {
        c.reference(&format!("local_models.{name}.monoid"), &m.monoid, "monoid", &doc.monoids);
    }
    for (name, g) in &doc.germs {
        let base = format!("germs.{name}");
        let s = c.reference(&format!("{base}.source"), &g.source, "local model", &doc.local_models);
        let t = c.reference(&format!("{base}.target"), &g.target, "local model", &doc.local_models);
        if !(s && t) {
            continue;
        }
        let (sm, tm) = (&doc.local_models[&g.source], &doc.local_models[&g.target]);
        let (Some(sp), Some(tp)) = (doc.monoids.get(&sm.monoid), doc.monoids.get(&tm.monoid)) else {
            continue;
        };
        c.matrix(&format!("{base}.exponent"), &g.exponent, sp.ambient_rank, Some(tp.ambient_rank), false);
        if let Some(d) = &g.mixed {
            c.matrix(&format!("{base}.mixed"), d, tp.ambient_rank, Some(sm.real_dim), true);
        }
        if let Some(s) = &g.stratum {
            c.matrix(&format!("{base}.stratum"), s, tm.real_dim, Some(sm.real_dim), true);
        }
    }
    for (name, p) in &doc.pairs {
        c.reference(&format!("pairs.{name}.g"), &p.g, "germ", &doc.germs);
        c.reference(&format!("pairs.{name}.h"), &p.h, "germ", &doc.germs);
    }
    c.errors
}
