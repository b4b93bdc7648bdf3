//! JSON documents for structures, partitions, maps, filter bases, coherent
//! families and inverse systems.
//!
//! The canonical form has sorted keys, sorted id arrays, two-space
//! indentation and a trailing newline. Parsing accepts any key order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::carrier::{Builder, CarrierError, Elem, FiniteStructure, Kind, MapLaw, StructureMap};
use crate::cofinite::{CofiniteError, FilterBase};
use crate::completion::{zline, Base, CompletionError, InverseSystem};
use crate::groupoid::{CoherentFamily, GroupoidError};
use crate::partition::{Law, Partition, PartitionError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Cofinite(#[from] CofiniteError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

/// Pretty-printed JSON with a trailing newline. Object keys come out
/// sorted because `serde_json` maps are ordered.
pub fn canonical<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = serde_json::to_string_pretty(&v).expect("serializable");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    kind: Kind,
    elements: Vec<String>,
    #[serde(default)]
    vertices: Vec<String>,
    #[serde(default)]
    src: BTreeMap<String, String>,
    #[serde(default)]
    tgt: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inv: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mul: Option<Vec<(String, String, String)>>,
}

fn sorted_names(s: &FiniteStructure, xs: impl Iterator<Item = Elem>) -> Vec<String> {
    let mut v: Vec<String> = xs.map(|x| s.name(x).to_string()).collect();
    v.sort();
    v
}

/// Edges list their ends; vertices are implied to fix themselves.
pub fn structure_to_value(s: &FiniteStructure) -> Value {
    let ends = |f: &dyn Fn(Elem) -> Elem| -> BTreeMap<String, String> {
        s.edges()
            .map(|x| (s.name(x).to_string(), s.name(f(x)).to_string()))
            .collect()
    };
    let inv = match s.kind() {
        Kind::Digraph => None,
        _ => s.has_inv().then(|| {
            s.edges()
                .map(|x| (s.name(x).to_string(), s.name(s.inverse(x)).to_string()))
                .collect()
        }),
    };
    let mul = s.has_mul().then(|| {
        let mut triples: Vec<(String, String, String)> = s
            .elements()
            .flat_map(|g| s.elements().map(move |h| (g, h)))
            .filter_map(|(g, h)| {
                s.mul(g, h)
                    .map(|gh| (s.name(g).into(), s.name(h).into(), s.name(gh).into()))
            })
            .collect();
        triples.sort();
        triples
    });
    let doc = StructureDoc {
        kind: s.kind(),
        elements: sorted_names(s, s.elements()),
        vertices: sorted_names(s, s.vertices()),
        src: ends(&|x| s.src(x)),
        tgt: ends(&|x| s.tgt(x)),
        inv,
        mul,
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn structure_to_json(s: &FiniteStructure) -> String {
    canonical(&structure_to_value(s))
}

fn lookup(b: &Builder, table: &'static str, id: &str) -> Result<Elem, CarrierError> {
    b.id(id).ok_or_else(|| CarrierError::DanglingReference {
        table,
        id: id.to_string(),
    })
}

pub fn structure_from_value(v: &Value) -> Result<FiniteStructure, FormatError> {
    let doc: StructureDoc = serde_json::from_value(v.clone())?;
    if doc.kind == Kind::Digraph && doc.inv.is_some() {
        return Err(
            CarrierError::KindMismatch("a digraph document has an `inv` table".into()).into(),
        );
    }
    if doc.kind != Kind::Groupoid && doc.mul.is_some() {
        return Err(CarrierError::KindMismatch(format!(
            "a {} document has a `mul` table",
            doc.kind
        ))
        .into());
    }
    let vertices: BTreeSet<&str> = doc.vertices.iter().map(String::as_str).collect();
    let mut b = Builder::new(doc.kind);
    for id in &doc.elements {
        b.element(id.clone(), vertices.contains(id.as_str()))?;
    }
    for v in &doc.vertices {
        lookup(&b, "vertices", v)?;
    }
    for (table, entries) in [("src", &doc.src), ("tgt", &doc.tgt)] {
        for (x, y) in entries {
            let (x, y) = (lookup(&b, table, x)?, lookup(&b, table, y)?);
            if table == "src" {
                b.set_src(x, y);
            } else {
                b.set_tgt(x, y);
            }
        }
    }
    if let Some(inv) = &doc.inv {
        for v in &doc.vertices {
            let x = lookup(&b, "vertices", v)?;
            b.set_inv(x, x);
        }
        for (x, y) in inv {
            let (x, y) = (lookup(&b, "inv", x)?, lookup(&b, "inv", y)?);
            b.set_inv(x, y);
        }
    }
    if let Some(mul) = &doc.mul {
        for (g, h, gh) in mul {
            let (g, h, gh) = (
                lookup(&b, "mul", g)?,
                lookup(&b, "mul", h)?,
                lookup(&b, "mul", gh)?,
            );
            b.set_mul(g, h, gh);
        }
    }
    Ok(b.build()?)
}

pub fn parse_structure(text: &str) -> Result<FiniteStructure, FormatError> {
    structure_from_value(&serde_json::from_str(text)?)
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_structure(path: &Path) -> Result<FiniteStructure, FormatError> {
    parse_structure(&read_text(path)?)
}

/// A document field holding either an inline structure or a path to one,
/// relative to `dir`.
fn structure_ref(v: &Value, dir: &Path) -> Result<FiniteStructure, FormatError> {
    match v {
        Value::String(p) => read_structure(&resolve(dir, p)),
        other => structure_from_value(other),
    }
}

fn resolve(dir: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        dir.join(p)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDoc {
    classes: Vec<Vec<String>>,
}

/// Non-singleton classes only.
pub fn partition_to_value(s: &FiniteStructure, r: &Partition) -> Value {
    let classes = r
        .named_classes(s)
        .into_iter()
        .filter(|c| c.len() > 1)
        .collect();
    serde_json::to_value(PartitionDoc { classes }).expect("serializable")
}

pub fn partition_from_value(s: &FiniteStructure, v: &Value) -> Result<Partition, FormatError> {
    let doc: PartitionDoc = serde_json::from_value(v.clone())?;
    Ok(Partition::from_named_classes(s, &doc.classes)?)
}

pub fn read_partition(s: &FiniteStructure, path: &Path) -> Result<Partition, FormatError> {
    partition_from_value(s, &serde_json::from_str(&read_text(path)?)?)
}

/// Seed pairs, either `[["x","y"],…]` or `{"pairs": [["x","y"],…]}`.
pub fn pairs_from_value(s: &FiniteStructure, v: &Value) -> Result<Vec<(Elem, Elem)>, FormatError> {
    let list = match v {
        Value::Object(m) if m.len() == 1 && m.contains_key("pairs") => &m["pairs"],
        other => other,
    };
    let pairs: Vec<(String, String)> = serde_json::from_value(list.clone())?;
    pairs
        .iter()
        .map(|(x, y)| Ok((s.element(x)?, s.element(y)?)))
        .collect()
}

/// Ids as a JSON array, or `{"subgroup": [...]}`.
pub fn ids_from_value(s: &FiniteStructure, v: &Value) -> Result<BTreeSet<Elem>, FormatError> {
    let list = match v {
        Value::Object(m) if m.len() == 1 && m.contains_key("subgroup") => &m["subgroup"],
        other => other,
    };
    let ids: Vec<String> = serde_json::from_value(list.clone())?;
    Ok(ids
        .iter()
        .map(|id| s.element(id))
        .collect::<Result<_, _>>()?)
}

/// `{"table": {id: image}}`.
pub fn map_to_value(f: &StructureMap) -> Value {
    let (d, c) = (f.domain(), f.codomain());
    let table: BTreeMap<String, String> = d
        .elements()
        .map(|x| (d.name(x).to_string(), c.name(f.apply(x)).to_string()))
        .collect();
    serde_json::json!({ "table": table })
}

fn map_from_value(
    domain: &Arc<FiniteStructure>,
    codomain: &Arc<FiniteStructure>,
    v: &Value,
) -> Result<StructureMap, FormatError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct MapDoc {
        table: BTreeMap<String, String>,
    }
    let doc: MapDoc = serde_json::from_value(v.clone())?;
    let mut table = vec![None; domain.len()];
    for (x, y) in &doc.table {
        table[domain.element(x)?] = Some(codomain.element(y)?);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| CarrierError::MissingEntry {
                table: "map",
                id: domain.name(x).to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StructureMap::unchecked(
        domain.clone(),
        codomain.clone(),
        table,
        MapLaw::for_kind(codomain.kind()),
    )?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterBaseDoc {
    carrier: Value,
    members: Vec<Value>,
    law: Option<Law>,
}

pub fn filterbase_from_value(v: &Value, dir: &Path) -> Result<FilterBase, FormatError> {
    let doc: FilterBaseDoc = serde_json::from_value(v.clone())?;
    let carrier = Arc::new(structure_ref(&doc.carrier, dir)?);
    let law = doc.law.unwrap_or(Law::Compatible);
    let members = doc
        .members
        .iter()
        .map(|m| partition_from_value(&carrier, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FilterBase::new(carrier, law, members)?)
}

pub fn read_filterbase(path: &Path) -> Result<FilterBase, FormatError> {
    let v: Value = serde_json::from_str(&read_text(path)?)?;
    filterbase_from_value(&v, path.parent().unwrap_or(Path::new(".")))
}

pub fn filterbase_to_value(i: &FilterBase) -> Value {
    let members: Vec<Value> = i
        .members()
        .iter()
        .map(|r| partition_to_value(i.carrier(), r))
        .collect();
    serde_json::json!({
        "carrier": structure_to_value(i.carrier()),
        "law": i.law(),
        "members": members,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    groupoid: Value,
    subgroups: BTreeMap<String, Vec<String>>,
}

pub fn family_from_value(v: &Value, dir: &Path) -> Result<CoherentFamily, FormatError> {
    let doc: FamilyDoc = serde_json::from_value(v.clone())?;
    let g = Arc::new(structure_ref(&doc.groupoid, dir)?);
    let mut subgroups = BTreeMap::new();
    for (x, ids) in &doc.subgroups {
        let x = g
            .id(x)
            .filter(|&x| g.is_vertex(x))
            .ok_or_else(|| CarrierError::UnknownVertex(x.clone()))?;
        let n = ids
            .iter()
            .map(|id| g.element(id))
            .collect::<Result<BTreeSet<_>, _>>()?;
        subgroups.insert(x, n);
    }
    Ok(CoherentFamily::new(g, subgroups)?)
}

pub fn family_to_value(f: &CoherentFamily) -> Value {
    let g = f.groupoid();
    let subgroups: BTreeMap<String, Vec<String>> = f
        .subgroups()
        .iter()
        .map(|(&x, n)| (g.name(x).to_string(), sorted_names(g, n.iter().copied())))
        .collect();
    serde_json::json!({ "groupoid": structure_to_value(g), "subgroups": subgroups })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitSystemDoc {
    #[serde(default = "one")]
    first_level: usize,
    levels: Vec<Value>,
    bondings: Vec<Value>,
    base: Option<FiniteBaseDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteBaseDoc {
    carrier: Value,
    projections: Vec<Value>,
}

fn one() -> usize {
    1
}

/// `{"generator": "zline-circles"|"zline-arcs", "max_level": n}` or an
/// explicit `{"levels": [...], "bondings": [...], "base"?: {...}}` where
/// `bondings[i]` maps level `i+1` to level `i`.
pub fn system_from_value(v: &Value, dir: &Path) -> Result<InverseSystem, FormatError> {
    if let Some(g) = v.get("generator") {
        let name = g
            .as_str()
            .ok_or_else(|| FormatError::Schema("`generator` must be a string".into()))?;
        let max = v.get("max_level").and_then(Value::as_u64).ok_or_else(|| {
            FormatError::Schema("`max_level` must be a non-negative integer".into())
        })? as usize;
        if v.as_object().is_some_and(|m| m.len() != 2) {
            return Err(FormatError::Schema(
                "generator documents take only `generator` and `max_level`".into(),
            ));
        }
        return generated_system(name, max);
    }
    let doc: ExplicitSystemDoc = serde_json::from_value(v.clone())?;
    let levels: Vec<Arc<FiniteStructure>> = doc
        .levels
        .iter()
        .map(|l| structure_ref(l, dir).map(Arc::new))
        .collect::<Result<_, _>>()?;
    if doc.bondings.len() + 1 != levels.len() {
        return Err(FormatError::Schema(format!(
            "{} levels need {} bondings, found {}",
            levels.len(),
            levels.len().saturating_sub(1),
            doc.bondings.len()
        )));
    }
    let bondings = doc
        .bondings
        .iter()
        .enumerate()
        .map(|(i, b)| map_from_value(&levels[i + 1], &levels[i], b))
        .collect::<Result<Vec<_>, _>>()?;
    let base = match doc.base {
        None => None,
        Some(b) => {
            let carrier = Arc::new(structure_ref(&b.carrier, dir)?);
            let projections = b
                .projections
                .iter()
                .zip(&levels)
                .map(|(p, l)| map_from_value(&carrier, l, p))
                .collect::<Result<Vec<_>, _>>()?;
            Some(Base::Finite {
                carrier,
                projections,
            })
        }
    };
    Ok(InverseSystem::new(doc.first_level, levels, bondings, base)?)
}

pub fn generated_system(name: &str, max_level: usize) -> Result<InverseSystem, FormatError> {
    if max_level > crate::fixtures::MAX_PARAMETER {
        return Err(FormatError::Schema(format!(
            "max_level {max_level} exceeds {}",
            crate::fixtures::MAX_PARAMETER
        )));
    }
    match name {
        "zline-circles" if max_level >= 1 => Ok(zline::circles(max_level)),
        "zline-circles" => Err(FormatError::Schema(
            "zline-circles starts at level 1".into(),
        )),
        "zline-arcs" => Ok(zline::arcs(max_level)),
        other => Err(FormatError::Schema(format!("unknown generator `{other}`"))),
    }
}

pub fn system_to_value(sys: &InverseSystem) -> Value {
    let levels: Vec<Value> = sys.levels().iter().map(|l| structure_to_value(l)).collect();
    let bondings: Vec<Value> = (sys.first_level()..sys.last_level())
        .map(|n| map_to_value(sys.bonding(n).expect("level in range")))
        .collect();
    let mut doc = serde_json::json!({
        "first_level": sys.first_level(),
        "levels": levels,
        "bondings": bondings,
    });
    if let Some(Base::Finite {
        carrier,
        projections,
    }) = sys.base()
    {
        doc["base"] = serde_json::json!({
            "carrier": structure_to_value(carrier),
            "projections": projections.iter().map(map_to_value).collect::<Vec<_>>(),
        });
    }
    doc
}
