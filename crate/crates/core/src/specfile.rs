//! Parsing for the structured spec files the CLI consumes.
//!
//! Every file is a single JSON object with a normative `"spec_version": 1`
//! and a `"kind"` that selects the schema: `cayley`, `perm`, or `catalog`
//! for groups; `hom` / `hom-gen` for homomorphisms; `action` /
//! `natural-action` for group actions; `linear-system` for exact systems.
//! Unknown kinds and unknown fields are rejected. Nested group positions
//! (hom domain/codomain, action group) take either an inline group object
//! or a path string resolved relative to the referencing file.
//!
//! Linear entries are exact: JSON integers or decimal-free strings
//! `"num/den"`. Floats are rejected outright.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::group::{catalog_with, FiniteGroup, GroupConfig, GroupError};
use crate::linear::{ExactMatrix, ExactScalar, FieldTag, LinearError};

const MAX_REFERENCE_DEPTH: usize = 8;

pub const KNOWN_KINDS: &[&str] = &[
    "cayley",
    "perm",
    "catalog",
    "hom",
    "hom-gen",
    "action",
    "natural-action",
    "linear-system",
];

pub const CATALOG_NAMES: &[&str] =
    &["cyclic", "symmetric", "dihedral", "klein4", "quaternion8"];

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid spec in {path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("unknown kind {kind:?} in {path}; known kinds: {}", KNOWN_KINDS.join(", "))]
    UnknownKind { path: PathBuf, kind: String },
    #[error("reference chain deeper than {MAX_REFERENCE_DEPTH} at {path}")]
    TooDeep { path: PathBuf },
}

impl SpecError {
    fn schema(path: &Path, message: impl fmt::Display) -> Self {
        SpecError::Schema { path: path.to_path_buf(), message: message.to_string() }
    }
}

/// A parsed group construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cayley { table: Vec<Vec<usize>> },
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    Catalog { name: String, parameter: i64 },
}

impl GroupSpec {
    pub fn build(&self, config: &GroupConfig) -> Result<Arc<FiniteGroup>, GroupError> {
        match self {
            GroupSpec::Cayley { table } => {
                FiniteGroup::from_cayley_table_with(table, config)
            }
            GroupSpec::Perm { degree, generators } => {
                FiniteGroup::from_permutation_generators_with(*degree, generators, config)
            }
            GroupSpec::Catalog { name, parameter } => catalog_with(name, *parameter, config),
        }
    }

    /// Short description used in report subjects.
    pub fn describe(&self) -> String {
        match self {
            GroupSpec::Cayley { table } => format!("cayley(order {})", table.len()),
            GroupSpec::Perm { degree, generators } => {
                format!("perm(degree {degree}, {} generators)", generators.len())
            }
            GroupSpec::Catalog { name, parameter } => format!("{name}({parameter})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomBody {
    /// Dense map array over domain indices.
    Map(Vec<usize>),
    /// One codomain index per domain generator.
    GeneratorImages(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpec {
    pub domain: GroupSpec,
    pub codomain: GroupSpec,
    pub body: HomBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionSpec {
    Table { group: GroupSpec, set_size: usize, table: Vec<Vec<usize>> },
    Natural { group: GroupSpec },
}

impl ActionSpec {
    pub fn group(&self) -> &GroupSpec {
        match self {
            ActionSpec::Table { group, .. } | ActionSpec::Natural { group } => group,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystemSpec {
    pub matrix: ExactMatrix,
    pub rhs: Vec<ExactScalar>,
}

/// Any top-level spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedSpec {
    Group(GroupSpec),
    Hom(HomSpec),
    Action(ActionSpec),
    Linear(LinearSystemSpec),
}

impl ParsedSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedSpec::Group(GroupSpec::Cayley { .. }) => "cayley",
            ParsedSpec::Group(GroupSpec::Perm { .. }) => "perm",
            ParsedSpec::Group(GroupSpec::Catalog { .. }) => "catalog",
            ParsedSpec::Hom(HomSpec { body: HomBody::Map(_), .. }) => "hom",
            ParsedSpec::Hom(HomSpec { body: HomBody::GeneratorImages(_), .. }) => "hom-gen",
            ParsedSpec::Action(ActionSpec::Table { .. }) => "action",
            ParsedSpec::Action(ActionSpec::Natural { .. }) => "natural-action",
            ParsedSpec::Linear(_) => "linear-system",
        }
    }
}

/// Reads and parses a spec file, resolving nested group references
/// relative to its directory.
pub fn parse_spec_file(path: &Path) -> Result<ParsedSpec, SpecError> {
    parse_file_at_depth(path, 0)
}

fn parse_file_at_depth(path: &Path, depth: usize) -> Result<ParsedSpec, SpecError> {
    if depth > MAX_REFERENCE_DEPTH {
        return Err(SpecError::TooDeep { path: path.to_path_buf() });
    }
    let text = std::fs::read_to_string(path)
        .map_err(|source| SpecError::Io { path: path.to_path_buf(), source })?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
    parse_spec_text(&text, path, &base_dir, depth)
}

/// Parses spec text directly; nested path references resolve against
/// `base_dir`.
pub fn parse_spec_str(text: &str, base_dir: &Path) -> Result<ParsedSpec, SpecError> {
    parse_spec_text(text, Path::new("<inline>"), base_dir, 0)
}

fn parse_spec_text(
    text: &str,
    path: &Path,
    base_dir: &Path,
    depth: usize,
) -> Result<ParsedSpec, SpecError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|source| SpecError::Json { path: path.to_path_buf(), source })?;
    let obj = value
        .as_object()
        .ok_or_else(|| SpecError::schema(path, "top level must be an object"))?;
    match obj.get("spec_version") {
        Some(v) if v.as_u64() == Some(1) => {}
        Some(v) => {
            return Err(SpecError::schema(path, format!("unsupported spec_version {v}")))
        }
        None => return Err(SpecError::schema(path, "missing required field spec_version")),
    }
    parse_object(&value, path, base_dir, depth)
}

fn parse_object(
    value: &Value,
    path: &Path,
    base_dir: &Path,
    depth: usize,
) -> Result<ParsedSpec, SpecError> {
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| SpecError::schema(path, "missing required string field kind"))?;
    match kind {
        "cayley" => {
            let raw: RawCayley = from_value(value, path)?;
            if raw.table.len() != raw.order {
                return Err(SpecError::schema(
                    path,
                    format!("order is {} but the table has {} rows", raw.order, raw.table.len()),
                ));
            }
            Ok(ParsedSpec::Group(GroupSpec::Cayley { table: raw.table }))
        }
        "perm" => {
            let raw: RawPerm = from_value(value, path)?;
            if raw.degree == 0 {
                return Err(SpecError::schema(path, "degree must be positive"));
            }
            Ok(ParsedSpec::Group(GroupSpec::Perm {
                degree: raw.degree,
                generators: raw.generators,
            }))
        }
        "catalog" => {
            let raw: RawCatalog = from_value(value, path)?;
            if !CATALOG_NAMES.contains(&raw.name.as_str()) {
                return Err(SpecError::schema(
                    path,
                    format!(
                        "unknown catalog name {:?}; known names: {}",
                        raw.name,
                        CATALOG_NAMES.join(", ")
                    ),
                ));
            }
            Ok(ParsedSpec::Group(GroupSpec::Catalog {
                name: raw.name,
                parameter: raw.parameter,
            }))
        }
        "hom" => {
            let raw: RawHom = from_value(value, path)?;
            Ok(ParsedSpec::Hom(HomSpec {
                domain: resolve_group_ref(&raw.domain, path, base_dir, depth)?,
                codomain: resolve_group_ref(&raw.codomain, path, base_dir, depth)?,
                body: HomBody::Map(raw.map),
            }))
        }
        "hom-gen" => {
            let raw: RawHomGen = from_value(value, path)?;
            Ok(ParsedSpec::Hom(HomSpec {
                domain: resolve_group_ref(&raw.domain, path, base_dir, depth)?,
                codomain: resolve_group_ref(&raw.codomain, path, base_dir, depth)?,
                body: HomBody::GeneratorImages(raw.images),
            }))
        }
        "action" => {
            let raw: RawAction = from_value(value, path)?;
            Ok(ParsedSpec::Action(ActionSpec::Table {
                group: resolve_group_ref(&raw.group, path, base_dir, depth)?,
                set_size: raw.set_size,
                table: raw.table,
            }))
        }
        "natural-action" => {
            let raw: RawNaturalAction = from_value(value, path)?;
            Ok(ParsedSpec::Action(ActionSpec::Natural {
                group: resolve_group_ref(&raw.group, path, base_dir, depth)?,
            }))
        }
        "linear-system" => {
            let raw: RawLinearSystem = from_value(value, path)?;
            let field = parse_field(&raw.field, path)?;
            let rows = raw.matrix.len();
            let cols = raw.matrix.first().map_or(0, |r| r.len());
            if raw.matrix.iter().any(|r| r.len() != cols) {
                return Err(SpecError::schema(path, "matrix rows have unequal lengths"));
            }
            let mut entries = Vec::with_capacity(rows * cols);
            for row in &raw.matrix {
                for cell in row {
                    entries.push(parse_entry(cell, field, path)?);
                }
            }
            let matrix = ExactMatrix::new(rows, cols, field, entries)
                .map_err(|e| SpecError::schema(path, e))?;
            if raw.rhs.len() != rows {
                return Err(SpecError::schema(
                    path,
                    format!("rhs has {} entries but the matrix has {rows} rows", raw.rhs.len()),
                ));
            }
            let rhs = raw
                .rhs
                .iter()
                .map(|cell| parse_entry(cell, field, path))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParsedSpec::Linear(LinearSystemSpec { matrix, rhs }))
        }
        other => {
            Err(SpecError::UnknownKind { path: path.to_path_buf(), kind: other.to_string() })
        }
    }
}

fn from_value<T: serde::de::DeserializeOwned>(value: &Value, path: &Path) -> Result<T, SpecError> {
    serde_json::from_value(value.clone())
        .map_err(|source| SpecError::Json { path: path.to_path_buf(), source })
}

fn resolve_group_ref(
    reference: &Value,
    path: &Path,
    base_dir: &Path,
    depth: usize,
) -> Result<GroupSpec, SpecError> {
    match reference {
        Value::String(rel) => {
            let target = base_dir.join(rel);
            match parse_file_at_depth(&target, depth + 1)? {
                ParsedSpec::Group(g) => Ok(g),
                other => Err(SpecError::schema(
                    &target,
                    format!("expected a group spec, found kind {:?}", other.kind()),
                )),
            }
        }
        Value::Object(_) => {
            // Inline group objects may omit spec_version; if present it must
            // still be 1.
            if let Some(v) = reference.get("spec_version") {
                if v.as_u64() != Some(1) {
                    return Err(SpecError::schema(
                        path,
                        format!("unsupported spec_version {v} in inline group"),
                    ));
                }
            }
            match parse_object(reference, path, base_dir, depth)? {
                ParsedSpec::Group(g) => Ok(g),
                other => Err(SpecError::schema(
                    path,
                    format!("expected a group spec, found kind {:?}", other.kind()),
                )),
            }
        }
        _ => Err(SpecError::schema(path, "group reference must be an object or a path string")),
    }
}

fn parse_field(field: &Value, path: &Path) -> Result<FieldTag, SpecError> {
    match field {
        Value::String(s) if s == "Q" => Ok(FieldTag::Rationals),
        Value::Object(obj) if obj.len() == 1 && obj.contains_key("gf") => {
            let p = obj["gf"]
                .as_u64()
                .ok_or_else(|| SpecError::schema(path, "gf modulus must be an integer"))?;
            FieldTag::gf(p).map_err(|e: LinearError| SpecError::schema(path, e))
        }
        other => Err(SpecError::schema(
            path,
            format!("field must be \"Q\" or {{\"gf\": p}}, found {other}"),
        )),
    }
}

/// One exact entry: a JSON integer or a decimal-free string, `"a"` or
/// `"a/b"`. Floats are rejected.
fn parse_entry(cell: &Value, field: FieldTag, path: &Path) -> Result<ExactScalar, SpecError> {
    match cell {
        Value::Number(num) => {
            if let Some(v) = num.as_i64() {
                Ok(ExactScalar::from_integer(field, v))
            } else if let Some(v) = num.as_u64() {
                Ok(ExactScalar::from_big_integer(field, &BigInt::from(v)))
            } else {
                Err(SpecError::schema(
                    path,
                    format!("entry {num} is not an exact integer; floats are rejected"),
                ))
            }
        }
        Value::String(s) => parse_exact_string(s, field)
            .ok_or_else(|| SpecError::schema(path, format!("malformed exact entry {s:?}"))),
        other => Err(SpecError::schema(
            path,
            format!("entry must be an integer or string, found {other}"),
        )),
    }
}

fn parse_exact_string(s: &str, field: FieldTag) -> Option<ExactScalar> {
    let parse_int = |t: &str| -> Option<BigInt> {
        if t.is_empty() {
            return None;
        }
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        BigInt::from_str(t).ok()
    };
    match s.split_once('/') {
        None => Some(ExactScalar::from_big_integer(field, &parse_int(s)?)),
        Some((num, den)) => {
            let numer = parse_int(num)?;
            let denom = parse_int(den)?;
            if denom <= BigInt::from(0) {
                return None;
            }
            match field {
                FieldTag::Rationals => Some(ExactScalar::Rational(
                    num_rational::BigRational::new(numer, denom),
                )),
                FieldTag::Gf { .. } => {
                    let n = ExactScalar::from_big_integer(field, &numer);
                    let d = ExactScalar::from_big_integer(field, &denom);
                    n.checked_div(&d).ok()
                }
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCayley {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    order: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPerm {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    degree: usize,
    generators: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    name: String,
    #[serde(default)]
    parameter: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHom {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    domain: Value,
    codomain: Value,
    map: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHomGen {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    domain: Value,
    codomain: Value,
    images: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    group: Value,
    set_size: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNaturalAction {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    group: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLinearSystem {
    #[allow(dead_code)]
    spec_version: Option<u64>,
    #[allow(dead_code)]
    kind: String,
    field: Value,
    matrix: Vec<Vec<Value>>,
    rhs: Vec<Value>,
}
