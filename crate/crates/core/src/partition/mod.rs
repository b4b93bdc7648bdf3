//! Equivalence relations on carriers, their closure operators, kernels and
//! quotients.

mod closure;
mod law;
mod quotient;
mod unionfind;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carrier::{CarrierError, Elem, FiniteStructure, Kind};

pub use closure::{close, close_with, ClosureResult, SaturationRules};
pub use law::{check, CheckReport, LawFailure};
pub use quotient::{
    first_isomorphism, induced_bonding, kernel, quotient, quotient_unchecked, refinement_map,
    IsoReport, Quotient,
};
pub use unionfind::UnionFind;

/// Which closure and check rules apply to a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Compatible,
    GraphEquivalence,
    Congruence,
}

impl Law {
    /// The strongest law that makes sense for structures of `kind`.
    pub fn for_kind(kind: Kind) -> Law {
        match kind {
            Kind::Digraph => Law::Compatible,
            Kind::Graph => Law::GraphEquivalence,
            Kind::Groupoid => Law::Congruence,
        }
    }

    pub fn supports(self, kind: Kind) -> bool {
        match self {
            Law::Compatible => true,
            Law::GraphEquivalence => kind == Kind::Graph,
            Law::Congruence => kind == Kind::Groupoid,
        }
    }

    pub fn parse(s: &str) -> Option<Law> {
        match s {
            "compatible" => Some(Law::Compatible),
            "graph_equivalence" | "graph-equivalence" | "graph" => Some(Law::GraphEquivalence),
            "congruence" => Some(Law::Congruence),
            _ => None,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Compatible => "compatible",
            Law::GraphEquivalence => "graph_equivalence",
            Law::Congruence => "congruence",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("law {law} does not apply to a {kind}")]
    LawKindMismatch { law: Law, kind: Kind },
    #[error("partition covers {found} elements but the carrier has {expected}")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("element `{0}` appears in two classes")]
    Overlap(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation fails the {law} law: {witness}")]
    LawCheckFailed { law: Law, witness: LawFailure },
    #[error("quotient product is undefined: composable triple ({0}, {1}, {2}) has no lift")]
    QuotientProductUndefined(String, String, String),
    #[error("fine class {{{}}} is not inside one coarse class", .0.join(","))]
    NotARefinement(Vec<String>),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

enum BadClass {
    OutOfRange(Elem),
    Overlap(Elem),
}

/// An equivalence relation on `0..len`, stored as disjoint classes.
///
/// Classes are numbered in order of their smallest element and each class
/// is sorted, so two partitions are equal iff they relate the same pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<Elem>>,
}

impl Partition {
    /// Groups elements by equal labels.
    pub fn from_labels<T: Hash + Eq>(labels: impl IntoIterator<Item = T>) -> Self {
        let mut ids: HashMap<T, usize> = HashMap::new();
        let mut class_of = Vec::new();
        let mut classes: Vec<Vec<Elem>> = Vec::new();
        for (x, label) in labels.into_iter().enumerate() {
            let next = classes.len();
            let c = *ids.entry(label).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push(x);
            class_of.push(c);
        }
        Partition { class_of, classes }
    }

    /// The diagonal δ.
    pub fn discrete(n: usize) -> Self {
        Self::from_labels(0..n)
    }

    pub fn full(n: usize) -> Self {
        Self::from_labels(std::iter::repeat_n((), n))
    }

    /// Builds a partition from listed classes; unlisted elements become
    /// singletons.
    pub fn from_classes(n: usize, classes: &[Vec<Elem>]) -> Result<Self, PartitionError> {
        Self::collect_classes(n, classes).map_err(|bad| match bad {
            BadClass::OutOfRange(x) => PartitionError::UnknownElement(x.to_string()),
            BadClass::Overlap(x) => PartitionError::Overlap(x.to_string()),
        })
    }

    /// Like [`Partition::from_classes`] but with classes given by ids.
    pub fn from_named_classes<S: AsRef<str>>(
        s: &FiniteStructure,
        classes: &[Vec<S>],
    ) -> Result<Self, PartitionError> {
        let resolved = classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|id| {
                        s.id(id.as_ref())
                            .ok_or_else(|| PartitionError::UnknownElement(id.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::collect_classes(s.len(), &resolved).map_err(|bad| match bad {
            BadClass::OutOfRange(x) => PartitionError::UnknownElement(x.to_string()),
            BadClass::Overlap(x) => PartitionError::Overlap(s.name(x).to_string()),
        })
    }

    fn collect_classes(n: usize, classes: &[Vec<Elem>]) -> Result<Self, BadClass> {
        let mut label: Vec<Option<usize>> = vec![None; n];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= n {
                    return Err(BadClass::OutOfRange(x));
                }
                if label[x].replace(c).is_some() {
                    return Err(BadClass::Overlap(x));
                }
            }
        }
        let offset = classes.len();
        Ok(Self::from_labels(
            label
                .into_iter()
                .enumerate()
                .map(|(x, l)| l.unwrap_or(offset + x)),
        ))
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    /// Number of classes.
    pub fn index(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<Elem>] {
        &self.classes
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_of[x]
    }

    pub fn class_labels(&self) -> &[usize] {
        &self.class_of
    }

    /// `R[x]`.
    pub fn class_members(&self, x: Elem) -> &[Elem] {
        &self.classes[self.class_of[x]]
    }

    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.index() == self.len()
    }

    /// Whether every class of `self` lies inside a class of `coarser`
    /// (`self ⊆ coarser` as sets of pairs).
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len()
            && self.classes.iter().all(|c| {
                c.iter()
                    .all(|&x| coarser.class_of[x] == coarser.class_of[c[0]])
            })
    }

    fn same_carrier(&self, other: &Partition) -> Result<(), PartitionError> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(PartitionError::CarrierMismatch {
                expected: self.len(),
                found: other.len(),
            })
        }
    }

    /// The common refinement `R₁ ∩ R₂`.
    pub fn intersect(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.same_carrier(other)?;
        Ok(Self::from_labels(
            self.class_of
                .iter()
                .zip(&other.class_of)
                .map(|(a, b)| (*a, *b)),
        ))
    }

    /// Every related pair `(x, y)` with `x ≠ y`.
    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.classes.iter().flat_map(|c| {
            c.iter()
                .flat_map(move |&x| c.iter().filter(move |&&y| y != x).map(move |&y| (x, y)))
        })
    }

    /// Lexicographically smallest original id of each class.
    pub fn representatives(&self, s: &FiniteStructure) -> Vec<Elem> {
        self.classes
            .iter()
            .map(|c| {
                *c.iter()
                    .min_by(|&&a, &&b| s.name(a).cmp(s.name(b)))
                    .expect("nonempty class")
            })
            .collect()
    }

    /// Classes as sorted lists of ids, themselves sorted.
    pub fn named_classes(&self, s: &FiniteStructure) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .classes
            .iter()
            .map(|c| {
                let mut ids: Vec<String> = c.iter().map(|&x| s.name(x).to_string()).collect();
                ids.sort();
                ids
            })
            .collect();
        out.sort();
        out
    }
}
