//! Finite carriers for directed graphs, Serre graphs and groupoids.
//!
//! All three kinds share one representation: a set of named elements, a
//! vertex subset, source and target tables, an optional involution table and
//! an optional partial product table. The identities of a groupoid are its
//! vertices.

mod map;
mod ops;
mod validate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use map::{MapLaw, MapViolation, StructureMap};
pub use ops::{
    disjoint_union, generated_elements, generated_substructure, hom_set, induced_substructure,
    product, product_projections, serre_double,
};
pub use validate::{End, ValidationReport, Violation};

/// Dense element index inside one carrier.
pub type Elem = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Digraph,
    Graph,
    Groupoid,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Digraph => "digraph",
            Kind::Graph => "graph",
            Kind::Groupoid => "groupoid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("{table} table references unknown id `{id}`")]
    DanglingReference { table: &'static str, id: String },
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("{table} table has no entry for `{id}`")]
    MissingEntry { table: &'static str, id: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("map table has {found} entries but the domain has {expected} elements")]
    MapArity { expected: usize, found: usize },
    #[error("map sends `{element}` outside the codomain")]
    MapOutOfRange { element: String },
    #[error("map law {law} fails: {witness}")]
    MapLawViolated { law: MapLaw, witness: String },
}

/// A finite directed graph, Serre graph or groupoid.
///
/// Instances are built through [`Builder`] (or the JSON format in
/// [`crate::format`]). Construction only resolves references; the axioms for
/// the declared kind are checked by [`FiniteStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    kind: Kind,
    names: Vec<String>,
    lookup: HashMap<String, Elem>,
    vertex: Vec<bool>,
    src: Vec<Elem>,
    tgt: Vec<Elem>,
    inv: Option<Vec<Elem>>,
    // row-major, len * len
    mul: Option<Vec<Option<Elem>>>,
}

impl FiniteStructure {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<Elem> {
        self.lookup.get(name).copied()
    }

    /// Resolves an id, failing with [`CarrierError::UnknownElement`].
    pub fn element(&self, name: &str) -> Result<Elem, CarrierError> {
        self.id(name)
            .ok_or_else(|| CarrierError::UnknownElement(name.to_string()))
    }

    pub fn is_vertex(&self, x: Elem) -> bool {
        self.vertex[x]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(|&x| self.vertex[x])
    }

    pub fn edges(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(|&x| !self.vertex[x])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex.iter().filter(|&&v| v).count()
    }

    pub fn src(&self, x: Elem) -> Elem {
        self.src[x]
    }

    pub fn tgt(&self, x: Elem) -> Elem {
        self.tgt[x]
    }

    pub fn has_inv(&self) -> bool {
        self.inv.is_some()
    }

    pub fn has_mul(&self) -> bool {
        self.mul.is_some()
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        self.inv.as_ref().map(|t| t[x])
    }

    /// The involution of `x`.
    ///
    /// # Panics
    ///
    /// Panics if the structure carries no involution table, which never
    /// happens for graphs and for groupoids in which every element has an
    /// inverse.
    pub fn inverse(&self, x: Elem) -> Elem {
        self.inv
            .as_ref()
            .expect("structure has no involution table")[x]
    }

    pub fn mul(&self, g: Elem, h: Elem) -> Option<Elem> {
        self.mul.as_ref().and_then(|t| t[g * self.len() + h])
    }

    pub fn composable(&self, g: Elem, h: Elem) -> bool {
        self.tgt[g] == self.src[h]
    }

    /// All `(g, h, gh)` with `t(g) = s(h)` and `gh` present in the table.
    pub fn products(&self) -> Vec<(Elem, Elem, Elem)> {
        let mut out = Vec::new();
        if self.mul.is_none() {
            return out;
        }
        for g in self.elements() {
            for h in self.elements() {
                if self.composable(g, h) {
                    if let Some(gh) = self.mul(g, h) {
                        out.push((g, h, gh));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }
}

/// Incremental constructor for [`FiniteStructure`].
#[derive(Debug, Clone)]
pub struct Builder {
    kind: Kind,
    names: Vec<String>,
    lookup: HashMap<String, Elem>,
    vertex: Vec<bool>,
    src: Vec<Option<Elem>>,
    tgt: Vec<Option<Elem>>,
    inv: Vec<Option<Elem>>,
    mul: Vec<(Elem, Elem, Elem)>,
}

impl Builder {
    pub fn new(kind: Kind) -> Self {
        Builder {
            kind,
            names: Vec::new(),
            lookup: HashMap::new(),
            vertex: Vec::new(),
            src: Vec::new(),
            tgt: Vec::new(),
            inv: Vec::new(),
            mul: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<Elem> {
        self.lookup.get(name).copied()
    }

    fn push(&mut self, name: impl Into<String>, is_vertex: bool) -> Result<Elem, CarrierError> {
        let name = name.into();
        if self.lookup.contains_key(&name) {
            return Err(CarrierError::DuplicateId(name));
        }
        let x = self.names.len();
        self.lookup.insert(name.clone(), x);
        self.names.push(name);
        self.vertex.push(is_vertex);
        self.src.push(is_vertex.then_some(x));
        self.tgt.push(is_vertex.then_some(x));
        self.inv.push(None);
        Ok(x)
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> Result<Elem, CarrierError> {
        self.push(name, true)
    }

    pub fn edge(
        &mut self,
        name: impl Into<String>,
        s: Elem,
        t: Elem,
    ) -> Result<Elem, CarrierError> {
        let x = self.push(name, false)?;
        self.src[x] = Some(s);
        self.tgt[x] = Some(t);
        Ok(x)
    }

    /// Adds an element whose endpoints are set later with [`Builder::set_ends`].
    pub fn element(
        &mut self,
        name: impl Into<String>,
        is_vertex: bool,
    ) -> Result<Elem, CarrierError> {
        self.push(name, is_vertex)
    }

    pub fn set_src(&mut self, x: Elem, s: Elem) {
        self.src[x] = Some(s);
    }

    pub fn set_tgt(&mut self, x: Elem, t: Elem) {
        self.tgt[x] = Some(t);
    }

    pub fn set_ends(&mut self, x: Elem, s: Elem, t: Elem) {
        self.src[x] = Some(s);
        self.tgt[x] = Some(t);
    }

    pub fn set_inv(&mut self, x: Elem, y: Elem) {
        self.inv[x] = Some(y);
    }

    /// Sets `x⁻¹ = y` and `y⁻¹ = x`.
    pub fn pair_inverse(&mut self, x: Elem, y: Elem) {
        self.inv[x] = Some(y);
        self.inv[y] = Some(x);
    }

    pub fn set_mul(&mut self, g: Elem, h: Elem, gh: Elem) {
        self.mul.push((g, h, gh));
    }

    pub fn build(self) -> Result<FiniteStructure, CarrierError> {
        let n = self.names.len();
        let any_inv = self.inv.iter().any(Option::is_some);
        if self.kind == Kind::Digraph && any_inv {
            return Err(CarrierError::KindMismatch(
                "a digraph carries no involution table".into(),
            ));
        }
        if self.kind != Kind::Groupoid && !self.mul.is_empty() {
            return Err(CarrierError::KindMismatch(format!(
                "a {} carries no product table",
                self.kind
            )));
        }
        let resolve =
            |table: &'static str, col: &[Option<Elem>]| -> Result<Vec<Elem>, CarrierError> {
                col.iter()
                    .enumerate()
                    .map(|(x, v)| {
                        v.ok_or_else(|| CarrierError::MissingEntry {
                            table,
                            id: self.names[x].clone(),
                        })
                    })
                    .collect()
            };
        let src = resolve("src", &self.src)?;
        let tgt = resolve("tgt", &self.tgt)?;
        let inv = match self.kind {
            Kind::Digraph => None,
            Kind::Graph => Some(resolve("inv", &self.inv)?),
            Kind::Groupoid if any_inv => Some(resolve("inv", &self.inv)?),
            Kind::Groupoid => None,
        };
        let mul = if self.kind == Kind::Groupoid {
            let mut table = vec![None; n * n];
            for &(g, h, gh) in &self.mul {
                table[g * n + h] = Some(gh);
            }
            Some(table)
        } else {
            None
        };
        let mut s = FiniteStructure {
            kind: self.kind,
            names: self.names,
            lookup: self.lookup,
            vertex: self.vertex,
            src,
            tgt,
            inv,
            mul,
        };
        if s.kind == Kind::Groupoid && s.inv.is_none() {
            s.inv = derive_inverses(&s);
        }
        Ok(s)
    }
}

/// Finds the two-sided inverse of every arrow from the product table, if all
/// of them exist.
fn derive_inverses(s: &FiniteStructure) -> Option<Vec<Elem>> {
    s.elements()
        .map(|g| {
            s.elements().find(|&h| {
                s.composable(g, h)
                    && s.composable(h, g)
                    && s.mul(g, h) == Some(s.src(g))
                    && s.mul(h, g) == Some(s.tgt(g))
            })
        })
        .collect()
}
