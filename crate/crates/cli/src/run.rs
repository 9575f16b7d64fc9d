//! Command dispatch and report assembly.
//!
//! Blocks are turned into core objects only when a command needs them, so a
//! document may mix, say, a non-saturated monoid for `monoid-check` with
//! local models built on other monoids.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use gcorners::arith::{Int, IntMatrix, IntVec, Rat, RatMatrix};
use gcorners::germ::MapGerm;
use gcorners::model::LocalModel;
use gcorners::monoid::{fibre_product, pushout_fg, pushout_toric, AffineMonoid, MonoidMorphism, PresentedMonoid};
use gcorners::trans;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Located};
use crate::schema::{Document, Num, Row, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    MonoidCheck,
    MonoidDual,
    MonoidFaces,
    MonoidFibre,
    MonoidPushout,
    ModelCorners,
    ModelBoundary,
    ModelIsCorners,
    GermClassify,
    TransCheck,
    TransFibre,
    TransCornerFormula,
    CorpusVerify,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::MonoidCheck,
        Command::MonoidDual,
        Command::MonoidFaces,
        Command::MonoidFibre,
        Command::MonoidPushout,
        Command::ModelCorners,
        Command::ModelBoundary,
        Command::ModelIsCorners,
        Command::GermClassify,
        Command::TransCheck,
        Command::TransFibre,
        Command::TransCornerFormula,
        Command::CorpusVerify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::MonoidCheck => "monoid-check",
            Command::MonoidDual => "monoid-dual",
            Command::MonoidFaces => "monoid-faces",
            Command::MonoidFibre => "monoid-fibre",
            Command::MonoidPushout => "monoid-pushout",
            Command::ModelCorners => "model-corners",
            Command::ModelBoundary => "model-boundary",
            Command::ModelIsCorners => "model-is-corners",
            Command::GermClassify => "germ-classify",
            Command::TransCheck => "trans-check",
            Command::TransFibre => "trans-fibre",
            Command::TransCornerFormula => "trans-corner-formula",
            Command::CorpusVerify => "corpus-verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown command '{s}'"))
    }
}

pub const DEFAULT_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Word-problem bound for presented monoids.
    pub bound: usize,
    /// Codimension for corner commands, depth for `model-boundary`.
    pub codim: Option<usize>,
    /// Restrict the command to the block with this name.
    pub name: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { bound: DEFAULT_BOUND, codim: None, name: None }
    }
}

pub fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn vec_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn vecs_json(vs: &[IntVec]) -> Value {
    Value::Array(vs.iter().map(|v| vec_json(v)).collect())
}

fn rat_json(x: &Rat) -> Value {
    if x.is_integer() {
        int_json(x.numer())
    } else {
        json!(x.to_string())
    }
}

fn monoid_json(p: &AffineMonoid) -> Value {
    json!({
        "ambient_rank": p.ambient(),
        "rank": p.rank(),
        "generators": vecs_json(p.generators()),
    })
}

fn ints(row: &[Num]) -> IntVec {
    row.iter().map(|x| x.to_int().expect("validated at parse time")).collect()
}

fn int_matrix(rows: &[Row], cols: usize) -> Result<IntMatrix, gcorners::Error> {
    IntMatrix::from_rows(rows.iter().map(|r| ints(r)).collect(), cols)
}

fn rat_matrix(rows: Option<&Vec<Row>>, n_rows: usize, cols: usize) -> Result<RatMatrix, gcorners::Error> {
    match rows {
        None => Ok(RatMatrix::zeros(n_rows, cols)),
        Some(rows) => RatMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|x| x.to_rat().expect("validated at parse time")).collect()).collect(),
            cols,
        ),
    }
}

/// Builds core objects from named blocks, attaching block paths to errors.
pub struct Resolver<'a> {
    doc: &'a Document,
}

impl<'a> Resolver<'a> {
    pub fn new(doc: &'a Document) -> Self {
        Resolver { doc }
    }

    pub fn monoid(&self, name: &str) -> Result<AffineMonoid, CliError> {
        let path = format!("monoids.{name}");
        let b = self.doc.monoids.get(name).ok_or_else(|| missing(&path))?;
        AffineMonoid::new(b.ambient_rank, b.generators.iter().map(|g| ints(g)).collect())
            .map_err(|e| CliError::from_core(&path, e))
    }

    pub fn presented(&self, name: &str) -> Result<PresentedMonoid, CliError> {
        let path = format!("presented.{name}");
        let b = self.doc.presented.get(name).ok_or_else(|| missing(&path))?;
        let rels = b.relations.iter().map(|(l, r)| (ints(l), ints(r))).collect();
        PresentedMonoid::new(b.generators, rels).map_err(|e| CliError::from_core(&path, e))
    }

    pub fn morphism(&self, name: &str) -> Result<MonoidMorphism, CliError> {
        let path = format!("morphisms.{name}");
        let b = self.doc.morphisms.get(name).ok_or_else(|| missing(&path))?;
        let (s, t) = (self.monoid(&b.source)?, self.monoid(&b.target)?);
        let m = int_matrix(&b.matrix, s.ambient()).map_err(|e| CliError::from_core(&path, e))?;
        MonoidMorphism::new(s, t, m).map_err(|e| CliError::from_core(&path, e))
    }

    pub fn model(&self, name: &str) -> Result<LocalModel, CliError> {
        let path = format!("local_models.{name}");
        let b = self.doc.local_models.get(name).ok_or_else(|| missing(&path))?;
        LocalModel::new(self.monoid(&b.monoid)?, b.real_dim).map_err(|e| CliError::from_core(&path, e))
    }

    pub fn germ(&self, name: &str) -> Result<MapGerm, CliError> {
        let path = format!("germs.{name}");
        let b = self.doc.germs.get(name).ok_or_else(|| missing(&path))?;
        let (x, z) = (self.model(&b.source)?, self.model(&b.target)?);
        let err = |e| CliError::from_core(&path, e);
        let (q, s) = (x.monoid().ambient(), z.monoid().ambient());
        let exponent = int_matrix(&b.exponent, s).map_err(err)?;
        let mixed = rat_matrix(b.mixed.as_ref(), s, x.real_dim()).map_err(err)?;
        let stratum = rat_matrix(b.stratum.as_ref(), z.real_dim(), x.real_dim()).map_err(err)?;
        debug_assert_eq!(exponent.rows(), q);
        MapGerm::new(x, z, exponent, mixed, stratum).map_err(err)
    }

    pub fn pair(&self, name: &str) -> Result<(MapGerm, MapGerm), CliError> {
        let path = format!("pairs.{name}");
        let b = self.doc.pairs.get(name).ok_or_else(|| missing(&path))?;
        Ok((self.germ(&b.g)?, self.germ(&b.h)?))
    }
}

fn missing(path: &str) -> CliError {
    CliError::Input(vec![Located::new(path, "no such block")])
}

/// Names of the blocks a command visits: all of them, or the selected one.
fn selected<T>(map: &BTreeMap<String, T>, opts: &Options) -> Vec<String> {
    match &opts.name {
        Some(n) => map.keys().filter(|k| *k == n).cloned().collect(),
        None => map.keys().cloned().collect(),
    }
}

type Section = Map<String, Value>;

fn each<T>(
    map: &BTreeMap<String, T>,
    opts: &Options,
    mut f: impl FnMut(&str) -> Result<Value, CliError>,
) -> Result<Section, CliError> {
    let mut out = Map::new();
    for name in selected(map, opts) {
        out.insert(name.clone(), f(&name)?);
    }
    Ok(out)
}

fn core<T>(path: String, r: gcorners::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::from_core(&path, e))
}

/// Runs `command` on a parsed document and returns the report.
pub fn run(command: Command, doc: &Document, opts: &Options) -> Result<Value, CliError> {
    if command == Command::CorpusVerify {
        return crate::corpus::verify_all(opts);
    }
    if let Some(n) = &opts.name {
        if !document_names(doc).contains(n) {
            return Err(CliError::Input(vec![Located::new("", &format!("no block named '{n}'"))]));
        }
    }
    let r = Resolver::new(doc);
    let mut results = Map::new();
    let mut put = |key: &str, section: Section| {
        if !section.is_empty() {
            results.insert(key.to_string(), Value::Object(section));
        }
    };
    match command {
        Command::MonoidCheck => {
            put("monoids", each(&doc.monoids, opts, |n| Ok(monoid_check(&r.monoid(n)?)))?);
            put("presented", each(&doc.presented, opts, |n| presented_check(n, &r.presented(n)?, opts.bound))?);
        }
        Command::MonoidDual => put("monoids", each(&doc.monoids, opts, |n| Ok(monoid_dual(&r.monoid(n)?)))?),
        Command::MonoidFaces => put("monoids", each(&doc.monoids, opts, |n| monoid_faces(n, &r.monoid(n)?))?),
        Command::MonoidFibre => put(
            "morphism_pairs",
            each(&doc.morphism_pairs, opts, |n| {
                let b = &doc.morphism_pairs[n];
                let w = core(format!("morphism_pairs.{n}"), fibre_product(&r.morphism(&b.left)?, &r.morphism(&b.right)?))?;
                Ok(json!({ "fibre_product": monoid_json(&w), "hilbert_basis": vecs_json(&w.hilbert_basis()) }))
            })?,
        ),
        Command::MonoidPushout => put(
            "morphism_pairs",
            each(&doc.morphism_pairs, opts, |n| {
                let b = &doc.morphism_pairs[n];
                let (a, c) = (r.morphism(&b.left)?, r.morphism(&b.right)?);
                let path = format!("morphism_pairs.{n}");
                let fg = core(path.clone(), pushout_fg(&a, &c))?;
                let toric = core(path, pushout_toric(&a, &c))?;
                Ok(json!({
                    "presentation": {
                        "generators": fg.generator_count(),
                        "relations": fg.relations().iter().map(|(u, v)| json!([vec_json(u), vec_json(v)])).collect::<Vec<_>>(),
                    },
                    "toric": monoid_json(&toric),
                    "hilbert_basis": vecs_json(&toric.hilbert_basis()),
                }))
            })?,
        ),
        Command::ModelCorners => {
            put("local_models", each(&doc.local_models, opts, |n| model_corners(n, &r.model(n)?, opts.codim))?)
        }
        Command::ModelBoundary => put(
            "local_models",
            each(&doc.local_models, opts, |n| model_boundary(n, &r.model(n)?, opts.codim.unwrap_or(1)))?,
        ),
        Command::ModelIsCorners => {
            put("local_models", each(&doc.local_models, opts, |n| Ok(model_is_corners(&r.model(n)?)))?)
        }
        Command::GermClassify => put("germs", each(&doc.germs, opts, |n| Ok(germ_classify(&r.germ(n)?)))?),
        Command::TransCheck => put(
            "pairs",
            each(&doc.pairs, opts, |n| {
                let (g, h) = r.pair(n)?;
                trans_check(n, &g, &h)
            })?,
        ),
        Command::TransFibre => put(
            "pairs",
            each(&doc.pairs, opts, |n| {
                let (g, h) = r.pair(n)?;
                trans_fibre(n, &g, &h)
            })?,
        ),
        Command::TransCornerFormula => put(
            "pairs",
            each(&doc.pairs, opts, |n| {
                let (g, h) = r.pair(n)?;
                corner_formula(n, &g, &h, opts.codim)
            })?,
        ),
        Command::CorpusVerify => unreachable!("handled above"),
    }
    Ok(report(command, opts, results))
}

pub fn report(command: Command, opts: &Options, results: Map<String, Value>) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command.as_str(),
        "options": {
            "bound": opts.bound,
            "codim": opts.codim,
            "name": opts.name,
        },
        "results": results,
    })
}

fn document_names(doc: &Document) -> Vec<String> {
    let mut names = Vec::new();
    names.extend(doc.monoids.keys().cloned());
    names.extend(doc.presented.keys().cloned());
    names.extend(doc.morphisms.keys().cloned());
    names.extend(doc.morphism_pairs.keys().cloned());
    names.extend(doc.local_models.keys().cloned());
    names.extend(doc.germs.keys().cloned());
    names.extend(doc.pairs.keys().cloned());
    names
}

fn monoid_check(p: &AffineMonoid) -> Value {
    let c = p.classify();
    let mut v = json!({
        "finitely_generated": c.finitely_generated,
        "integral": c.integral,
        "saturated": c.saturated,
        "torsion_free": c.torsion_free,
        "sharp": c.sharp,
        "weakly_toric": c.weakly_toric,
        "toric": c.toric,
        "rank": c.rank,
        "unit_rank": p.units().rank(),
        "free": c.toric && p.is_free(),
    });
    if c.sharp {
        v["minimal_generators"] = vecs_json(&p.minimal_generators());
    }
    v
}

fn presented_check(name: &str, p: &PresentedMonoid, bound: usize) -> Result<Value, CliError> {
    let c = core(format!("presented.{name}"), p.classify(bound))?;
    Ok(json!({
        "finitely_generated": c.finitely_generated.as_str(),
        "integral": c.integral.as_str(),
        "saturated": c.saturated.as_str(),
        "torsion_free": c.torsion_free.as_str(),
        "sharp": c.sharp.as_str(),
        "weakly_toric": c.weakly_toric.as_str(),
        "toric": c.toric.as_str(),
        "rank": c.rank,
        "group": {
            "free_rank": c.group.free_rank,
            "torsion": vec_json(&c.group.torsion),
        },
        "bound": c.bound,
    }))
}

fn monoid_dual(p: &AffineMonoid) -> Value {
    let d = p.dual();
    let dd = p.double_dual_map();
    json!({
        "dual": monoid_json(&d),
        "dual_is_free": d.is_free(),
        "double_dual_isomorphism": dd.iso,
    })
}

fn monoid_faces(name: &str, p: &AffineMonoid) -> Result<Value, CliError> {
    let path = format!("monoids.{name}");
    let faces = core(path.clone(), p.faces())?;
    let census = core(path.clone(), p.face_census())?;
    let spec = core(path, p.spec())?;
    Ok(json!({
        "census": census,
        "faces": faces.iter().map(|f| json!({ "generators": f.generators, "rank": f.rank, "codim": f.codim })).collect::<Vec<_>>(),
        "prime_ideals": spec.iter().map(|q| json!(q.generators)).collect::<Vec<_>>(),
    }))
}

fn check_codim(name: &str, m: &LocalModel, k: usize) -> Result<(), CliError> {
    if k > m.monoid().rank() {
        return Err(CliError::from_core(
            &format!("local_models.{name}"),
            gcorners::Error::OutOfRange { index: k, max: m.monoid().rank() },
        ));
    }
    Ok(())
}

fn model_corners(name: &str, m: &LocalModel, codim: Option<usize>) -> Result<Value, CliError> {
    let ks: Vec<usize> = match codim {
        Some(k) => {
            check_codim(name, m, k)?;
            vec![k]
        }
        None => (0..=m.monoid().rank()).collect(),
    };
    let mut corners = Vec::new();
    for k in ks {
        let cs = core(format!("local_models.{name}"), m.corners(k))?;
        let components: Vec<Value> = cs
            .iter()
            .map(|c| {
                let (fibre, normal) = m.corner_fibre_monoid(&c.face).expect("faces of the model");
                json!({
                    "face": c.face.generators,
                    "dimension": c.face.rank + m.real_dim(),
                    "normal_rank": normal,
                    "fibre_free": fibre.is_free(),
                })
            })
            .collect();
        corners.push(json!({ "codim": k, "count": cs.len(), "components": components }));
    }
    Ok(json!({
        "dimension": m.dimension(),
        "census": m.strata_census(),
        "corners": corners,
    }))
}

fn model_boundary(name: &str, m: &LocalModel, depth: usize) -> Result<Value, CliError> {
    check_codim(name, m, depth)?;
    let faces = m.faces();
    let flags = core(format!("local_models.{name}"), m.iterated_boundary(depth))?;
    Ok(json!({
        "depth": depth,
        "count": flags.len(),
        "flags": flags.iter().map(|f| f.faces.iter().map(|&i| json!(faces[i].generators)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    }))
}

fn model_is_corners(m: &LocalModel) -> Value {
    let bad: Vec<Value> = m
        .faces()
        .iter()
        .filter(|f| !m.corner_fibre_monoid(f).map(|(p, _)| p.is_free()).unwrap_or(false))
        .map(|f| json!(f.generators))
        .collect();
    json!({
        "is_manifold_with_corners": m.is_manifold_with_corners(),
        "non_free_corner_fibres": bad,
    })
}

fn germ_classify(g: &MapGerm) -> Value {
    let c = g.classify();
    let s = g.is_simple();
    let i = g.is_immersion_at_vertex();
    json!({
        "interior": c.interior,
        "simple_at_vertex": c.simple_at_vertex,
        "simple_local": c.simple_local,
        "b_normal": c.b_normal,
        "b_submersion": c.b_submersion,
        "b_fibration": c.b_fibration,
        "immersion": {
            "immersion": i.immersion,
            "stratum_injective": i.stratum_injective,
            "dual_injective": i.dual_injective,
            "cokernel_torsion_free": i.cokernel_torsion_free,
        },
        "etale_at_vertex": c.etale_at_vertex,
        "non_simple_face": s.failing_face,
        "b_normal_failure_face": g.b_normal_witness().map(|f| f.generators),
        "b_derivative": g.b_derivative().row_vecs().iter().map(|r| r.iter().map(rat_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "diagnostics": c.diagnostics,
    })
}

fn trans_check(name: &str, g: &MapGerm, h: &MapGerm) -> Result<Value, CliError> {
    let path = format!("pairs.{name}");
    let r = core(path.clone(), trans::is_c_transverse(g, h))?;
    let sufficient = core(path, trans::c_transverse_sufficiency(g, h))?;
    Ok(json!({
        "b_transverse": r.b_transverse,
        "btilde_surjective": r.btilde_surjective,
        "monoid_condition": r.monoid_condition,
        "c_transverse": r.c_transverse,
        "c_transverse_near_vertex": r.c_transverse_near_vertex,
        "failing_faces": r.failing_faces.map(|(a, b)| json!([a, b])),
        "sufficiency": sufficient,
        "witness": vec_json(&r.witness),
        "failures": r.failures,
    }))
}

fn trans_fibre(name: &str, g: &MapGerm, h: &MapGerm) -> Result<Value, CliError> {
    let f = core(format!("pairs.{name}"), trans::fibre_local_model(g, h))?;
    let census = core(format!("pairs.{name}"), f.monoid.face_census())?;
    Ok(json!({
        "vertex_in_fibre": f.vertex_in_fibre,
        "dimension": f.dimension,
        "extra_real_dim": f.extra_real_dim,
        "monoid": monoid_json(&f.monoid),
        "hilbert_basis": vecs_json(&f.monoid.hilbert_basis()),
        "face_census": census,
        "dual_fibre": monoid_json(&f.dual_fibre),
    }))
}

fn corner_formula(name: &str, g: &MapGerm, h: &MapGerm, codim: Option<usize>) -> Result<Value, CliError> {
    let path = format!("pairs.{name}");
    let report = core(path.clone(), trans::is_c_transverse(g, h))?;
    if !report.c_transverse_near_vertex {
        let why = report.failures.join("; ");
        return Err(CliError::Precondition(Located::new(&path, &format!("pair is not c-transverse: {why}"))));
    }
    let model = core(path.clone(), trans::fibre_local_model(g, h))?;
    let rank = model.monoid.rank();
    let ks: Vec<usize> = match codim {
        Some(k) if k > rank => {
            return Err(CliError::from_core(&path, gcorners::Error::OutOfRange { index: k, max: rank }));
        }
        Some(k) => vec![k],
        None => (0..=rank).collect(),
    };
    let mut rows = Vec::new();
    for k in ks {
        let c = core(path.clone(), trans::corner_formula_check(g, h, k))?;
        rows.push(json!({
            "codim": c.codim,
            "left": c.left,
            "right": c.right,
            "matches": c.matches,
            "dimensions_match": c.dimensions_match,
            "left_has_nonfree": c.left_has_nonfree,
        }));
    }
    Ok(json!({ "fibre_rank": rank, "codims": rows }))
}
