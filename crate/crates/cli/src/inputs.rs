use std::fs;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use quadembed::groups::{parse_oracle_list, CayleyTable, GroupBackend, Presentation};
use quadembed::quadratic::{SolutionTuple, SolutionValue};
use quadembed::words::{Sort, Word};

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    /// Finite group given by a multiplication table (JSON).
    Table,
    /// Free group; the group file is a presentation with generators only.
    Free,
    /// List of solvable equations, one per line.
    Oracle,
}

pub struct LoadedGroup {
    pub backend: GroupBackend,
    pub digest: String,
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_bytes(path)?).map_err(|_| Failure::input(format!("{}: not UTF-8", path.display())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_group(path: &Path, kind: BackendKind, radius: usize) -> Result<LoadedGroup, Failure> {
    let bytes = read_bytes(path)?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure::input(format!("{}: not UTF-8", path.display())))?;
    let at = |e: String| Failure::input(format!("{}: {e}", path.display()));
    let backend = match kind {
        BackendKind::Table => GroupBackend::FiniteTable(
            CayleyTable::from_json(&text)
                .and_then(CayleyTable::checked)
                .map_err(|e| at(e.to_string()))?,
        ),
        BackendKind::Free => {
            let p = Presentation::parse(&text).map_err(|e| at(e.to_string()))?;
            if !p.relators().is_empty() || p.x_count() > 0 || p.uses_h() {
                return Err(at("a free group is given by `gens a:<rank>;` alone".into()));
            }
            GroupBackend::FreeGroup {
                rank: p.a_count(),
                radius,
            }
        }
        BackendKind::Oracle => GroupBackend::OracleList(parse_oracle_list(&text).map_err(|e| at(e.to_string()))?),
    };
    Ok(LoadedGroup { backend, digest })
}

/// The presentation the embedding starts from: the given file, or else one
/// read off the table, the free presentation, or bare generators for an oracle.
pub fn base_presentation(backend: &GroupBackend, file: Option<&Path>) -> Result<Presentation, Failure> {
    if let Some(path) = file {
        return Presentation::parse(&read_text(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())));
    }
    Ok(match backend {
        GroupBackend::FiniteTable(t) => t.derived_presentation(),
        _ => Presentation::new(backend.a_count(), 0, false, vec![])?,
    })
}

/// `{"x1": 0, "x2": "a1.a2"}`.
pub fn tuple_to_json(t: &SolutionTuple) -> Value {
    let mut map = Map::new();
    for (v, value) in t.assignments() {
        map.insert(format!("x{v}"), serde_json::to_value(value).expect("values serialize"));
    }
    Value::Object(map)
}

pub fn tuple_from_json(value: &Value) -> Result<SolutionTuple, Failure> {
    let bad = || Failure::input(format!("bad solution tuple {value}"));
    let map = value.as_object().ok_or_else(bad)?;
    let mut assignments = Vec::new();
    for (key, v) in map {
        let var = parse_variable(key)?;
        let value = match v {
            Value::Number(n) => SolutionValue::Element(n.as_u64().ok_or_else(bad)? as usize),
            Value::String(s) => SolutionValue::Word(s.parse()?),
            _ => return Err(bad()),
        };
        assignments.push((var, value));
    }
    Ok(SolutionTuple::new(assignments))
}

fn parse_variable(key: &str) -> Result<u32, Failure> {
    let word: Word = key.trim().parse()?;
    match word.letters() {
        [l] if l.sort() == Sort::X && !l.is_inverse() => Ok(l.index()),
        _ => Err(Failure::input(format!("{key:?} is not a variable"))),
    }
}

/// `x1=a1.a2,x2=e` for free groups; `x1=3` or `x1=<element name>` for tables.
pub fn parse_assignments(text: &str, backend: &GroupBackend) -> Result<SolutionTuple, Failure> {
    let mut assignments = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (var, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("expected `x<k>=<value>`, found {part:?}")))?;
        let var = parse_variable(var)?;
        let value = value.trim();
        let value = match backend {
            GroupBackend::FiniteTable(t) => SolutionValue::Element(
                t.names()
                    .iter()
                    .position(|n| n == value)
                    .or_else(|| value.parse().ok().filter(|&g: &usize| g < t.order()))
                    .ok_or_else(|| Failure::input(format!("{value:?} is not an element")))?,
            ),
            _ => SolutionValue::Word(value.parse()?),
        };
        assignments.push((var, value));
    }
    Ok(SolutionTuple::new(assignments))
}

/// Human-readable tuple: element names for tables, words otherwise.
pub fn describe_tuple(t: &SolutionTuple, backend: &GroupBackend) -> String {
    t.assignments()
        .iter()
        .map(|(v, value)| match (value, backend) {
            (SolutionValue::Element(g), GroupBackend::FiniteTable(table)) => format!("x{v} = {}", table.name(*g)),
            (SolutionValue::Element(g), _) => format!("x{v} = {g}"),
            (SolutionValue::Word(w), _) => format!("x{v} = {w}"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}
