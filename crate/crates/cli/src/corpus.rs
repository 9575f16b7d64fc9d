//! The bundled regression corpus.
//!
//! Each entry is an input document, a command with options, and either the
//! exit status the command must fail with or an `expected` value. `expected`
//! is matched against the report's `results` as a pattern: objects match
//! when every listed key matches, arrays element by element, and scalars by
//! equality. Entries therefore pin only the values they care about.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::run::{report, run, Command, Options, DEFAULT_BOUND};
use crate::schema::Document;

pub const FILES: &[(&str, &str)] = &[
    ("classification_table.json", include_str!("../corpus/classification_table.json")),
    ("presented_classification.json", include_str!("../corpus/presented_classification.json")),
    ("duals_of_free_and_lattices.json", include_str!("../corpus/duals_of_free_and_lattices.json")),
    ("pyramid_faces.json", include_str!("../corpus/pyramid_faces.json")),
    ("pyramid_corners.json", include_str!("../corpus/pyramid_corners.json")),
    ("pyramid_boundary_depth_2.json", include_str!("../corpus/pyramid_boundary_depth_2.json")),
    ("pyramid_boundary_depth_3.json", include_str!("../corpus/pyramid_boundary_depth_3.json")),
    ("corner_detector.json", include_str!("../corpus/corner_detector.json")),
    ("germ_fibrations.json", include_str!("../corpus/germ_fibrations.json")),
    ("germ_immersions.json", include_str!("../corpus/germ_immersions.json")),
    ("normal_maps_not_surjective.json", include_str!("../corpus/normal_maps_not_surjective.json")),
    ("zero_dual_fibre.json", include_str!("../corpus/zero_dual_fibre.json")),
    ("pyramid_target_proper_face.json", include_str!("../corpus/pyramid_target_proper_face.json")),
    ("multiplication_legs_fibre.json", include_str!("../corpus/multiplication_legs_fibre.json")),
    ("multiplication_legs_corner_formula.json", include_str!("../corpus/multiplication_legs_corner_formula.json")),
    ("corner_formula_needs_transversality.json", include_str!("../corpus/corner_formula_needs_transversality.json")),
    ("transverse_pairs.json", include_str!("../corpus/transverse_pairs.json")),
    ("fibre_product_of_sums.json", include_str!("../corpus/fibre_product_of_sums.json")),
    ("pushout_of_doublings.json", include_str!("../corpus/pushout_of_doublings.json")),
];

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    bound: Option<usize>,
    codim: Option<usize>,
    name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    command: String,
    #[serde(default)]
    options: RawOptions,
    input: Value,
    #[serde(default)]
    expected: Option<Value>,
    #[serde(default)]
    expected_exit: Option<i32>,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub command: Command,
    pub options: Options,
    pub input: Document,
    pub expected: Option<Value>,
    pub expected_exit: Option<i32>,
}

fn load(file: &str, text: &str) -> Result<Entry, String> {
    let raw: RawEntry = serde_json::from_str(text).map_err(|e| format!("{file}: {e}"))?;
    let command = raw.command.parse::<Command>().map_err(|e| format!("{file}: {e}"))?;
    if raw.expected.is_some() == raw.expected_exit.is_some() {
        return Err(format!("{file}: give exactly one of expected and expected_exit"));
    }
    let input = crate::schema::parse(&raw.input.to_string()).map_err(|e| format!("{file}: {e}"))?;
    let options = Options {
        bound: raw.options.bound.unwrap_or(DEFAULT_BOUND),
        codim: raw.options.codim,
        name: raw.options.name,
    };
    Ok(Entry { name: raw.name, command, options, input, expected: raw.expected, expected_exit: raw.expected_exit })
}

/// Every bundled entry, in file order.
pub fn entries() -> Vec<Entry> {
    FILES.iter().map(|(f, t)| load(f, t).unwrap_or_else(|e| panic!("bundled corpus is malformed: {e}"))).collect()
}

/// Checks that `actual` matches the pattern `expected`; the error names the
/// first mismatching path.
pub fn matches(actual: &Value, expected: &Value, path: &str) -> Result<(), String> {
    match (actual, expected) {
        (Value::Object(a), Value::Object(e)) => {
            for (k, ev) in e {
                let p = format!("{path}.{k}");
                match a.get(k) {
                    Some(av) => matches(av, ev, &p)?,
                    None => return Err(format!("{p}: missing")),
                }
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(e)) => {
            if a.len() != e.len() {
                return Err(format!("{path}: expected {} elements, got {}", e.len(), a.len()));
            }
            for (i, (av, ev)) in a.iter().zip(e).enumerate() {
                matches(av, ev, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        _ if actual == expected => Ok(()),
        _ => Err(format!("{path}: expected {expected}, got {actual}")),
    }
}

pub fn verify(entry: &Entry) -> Result<(), String> {
    match (run(entry.command, &entry.input, &entry.options), &entry.expected, entry.expected_exit) {
        (Ok(r), Some(e), _) => matches(&r["results"], e, "results"),
        (Ok(_), None, Some(code)) => Err(format!("expected exit {code}, command succeeded")),
        (Err(err), _, Some(code)) if err.exit_code() == code => Ok(()),
        (Err(err), _, _) => Err(format!("exit {}: {err}", err.exit_code())),
        (Ok(_), None, None) => unreachable!("entries carry an expectation"),
    }
}

pub fn verify_all(opts: &Options) -> Result<Value, CliError> {
    let mut results = Map::new();
    let mut failures = Vec::new();
    for entry in entries() {
        if opts.name.as_ref().is_some_and(|n| *n != entry.name) {
            continue;
        }
        let status = match verify(&entry) {
            Ok(()) => "pass",
            Err(e) => {
                failures.push(format!("  {}: {e}", entry.name));
                "fail"
            }
        };
        results.insert(entry.name.clone(), json!({ "command": entry.command.as_str(), "status": status }));
    }
    if results.is_empty() {
        if let Some(n) = &opts.name {
            return Err(CliError::Input(vec![crate::error::Located::new("", &format!("no corpus entry named '{n}'"))]));
        }
    }
    if failures.is_empty() {
        Ok(report(Command::CorpusVerify, opts, results))
    } else {
        Err(CliError::Mismatch(failures))
    }
}
