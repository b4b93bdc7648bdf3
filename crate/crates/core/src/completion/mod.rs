//! Inverse systems of finite quotients indexed by a chain, evaluated level
//! by level over a finite or symbolic base.

mod ends;
pub mod zline;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::carrier::{CarrierError, Elem, FiniteStructure, Kind, MapLaw, StructureMap};
use crate::cofinite::FilterBase;
use crate::partition::{induced_bonding, quotient, Law, Partition, PartitionError};

pub use ends::{
    count_new_points, discrete_quotient_check, fiber_census, window_separation, Census,
    CensusSource, ClassFiber, DiscreteQuotientReport, EndReport, EndStatus, LevelCount,
    SeparationReport, Thread,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("the system has no base carrier")]
    NoBase,
    #[error("members {0} and {1} are not comparable under refinement")]
    NotAChain(usize, usize),
    #[error("level {level} outside {first}..={last}")]
    LevelOutOfRange {
        level: usize,
        first: usize,
        last: usize,
    },
    #[error("`{id}` is not in window {window} of the base")]
    OutOfWindow { id: String, window: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("end status is not exact at depth {0}")]
    StatusUnknown(usize),
    #[error("system has no levels")]
    Empty,
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

/// An infinite carrier known through nested finite windows.
pub trait SymbolicBase: fmt::Debug + Send + Sync {
    fn describe(&self) -> String;
    fn kind(&self) -> Kind;
    /// Ids in window `w`; windows are nested.
    fn window(&self, w: usize) -> Vec<String>;
    fn contains(&self, id: &str, w: usize) -> bool;
    fn is_vertex(&self, id: &str) -> bool;
    fn src(&self, id: &str) -> String;
    fn tgt(&self, id: &str) -> String;
    /// The id of `φ_level(id)` in the level structure.
    fn project(&self, level: usize, id: &str) -> String;
    /// Classes of `level` known analytically to have infinite fibres, if
    /// the base can tell.
    fn declared_unbounded(&self, _level: usize) -> Option<Vec<String>> {
        None
    }
}

#[derive(Debug, Clone)]
pub enum Base {
    /// A finite carrier with one projection per level.
    Finite {
        carrier: Arc<FiniteStructure>,
        projections: Vec<StructureMap>,
    },
    Symbolic(Arc<dyn SymbolicBase>),
}

/// Levels `Γ_first … Γ_last` with bondings `Γ_{n+1} → Γ_n`.
#[derive(Debug, Clone)]
pub struct InverseSystem {
    first_level: usize,
    levels: Vec<Arc<FiniteStructure>>,
    bondings: Vec<StructureMap>,
    base: Option<Base>,
    window: usize,
}

impl InverseSystem {
    /// `bondings[i]` maps `levels[i + 1]` to `levels[i]`.
    pub fn new(
        first_level: usize,
        levels: Vec<Arc<FiniteStructure>>,
        bondings: Vec<StructureMap>,
        base: Option<Base>,
    ) -> Result<Self, CompletionError> {
        if levels.is_empty() {
            return Err(CompletionError::Empty);
        }
        if bondings.len() + 1 != levels.len() {
            return Err(CarrierError::MapArity {
                expected: levels.len() - 1,
                found: bondings.len(),
            }
            .into());
        }
        if let Some(Base::Finite { projections, .. }) = &base {
            if projections.len() != levels.len() {
                return Err(CarrierError::MapArity {
                    expected: levels.len(),
                    found: projections.len(),
                }
                .into());
            }
        }
        let last = first_level + levels.len() - 1;
        Ok(InverseSystem {
            first_level,
            levels,
            bondings,
            base,
            window: 2 * last + 2,
        })
    }

    pub fn first_level(&self) -> usize {
        self.first_level
    }

    pub fn last_level(&self) -> usize {
        self.first_level + self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Arc<FiniteStructure>] {
        &self.levels
    }

    pub fn base(&self) -> Option<&Base> {
        self.base.as_ref()
    }

    /// Window used by [`level_embed`] to decide membership in a symbolic
    /// base. Defaults to `2·last + 2`.
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn set_window(&mut self, w: usize) {
        self.window = w;
    }

    fn slot(&self, n: usize) -> Result<usize, CompletionError> {
        if n < self.first_level || n > self.last_level() {
            Err(CompletionError::LevelOutOfRange {
                level: n,
                first: self.first_level,
                last: self.last_level(),
            })
        } else {
            Ok(n - self.first_level)
        }
    }

    pub fn level(&self, n: usize) -> Result<&Arc<FiniteStructure>, CompletionError> {
        Ok(&self.levels[self.slot(n)?])
    }

    /// The bonding `Γ_{n+1} → Γ_n`.
    pub fn bonding(&self, n: usize) -> Result<&StructureMap, CompletionError> {
        let i = self.slot(n)?;
        self.slot(n + 1)?;
        Ok(&self.bondings[i])
    }

    /// Overwrites the table of the bonding `Γ_{n+1} → Γ_n` without checking
    /// its laws.
    pub fn replace_bonding(&mut self, n: usize, table: Vec<Elem>) -> Result<(), CompletionError> {
        let old = self.bonding(n)?.clone();
        let i = self.slot(n)?;
        self.bondings[i] = StructureMap::unchecked(
            old.domain().clone(),
            old.codomain().clone(),
            table,
            old.laws().clone(),
        )?;
        Ok(())
    }

    /// Composite bonding `Γ_n → Γ_m` for `m ≤ n`, as a table.
    pub fn bonding_table(&self, m: usize, n: usize) -> Result<Vec<Elem>, CompletionError> {
        self.slot(m)?;
        let mut table: Vec<Elem> = self.level(n)?.elements().collect();
        for k in (m..n).rev() {
            let b = self.bonding(k)?;
            for x in table.iter_mut() {
                *x = b.apply(*x);
            }
        }
        Ok(table)
    }

    /// Ids of the base elements in window `w` (all of them for a finite
    /// base).
    pub fn base_elements(&self, w: usize) -> Result<Vec<String>, CompletionError> {
        match self.base.as_ref().ok_or(CompletionError::NoBase)? {
            Base::Finite { carrier, .. } => Ok(carrier.names().to_vec()),
            Base::Symbolic(b) => Ok(b.window(w)),
        }
    }

    pub(crate) fn base_in_window(&self, id: &str, w: usize) -> Result<bool, CompletionError> {
        match self.base.as_ref().ok_or(CompletionError::NoBase)? {
            Base::Finite { carrier, .. } => Ok(carrier.id(id).is_some()),
            Base::Symbolic(b) => Ok(b.contains(id, w)),
        }
    }

    pub(crate) fn base_ends(&self, id: &str) -> Result<(String, String), CompletionError> {
        match self.base.as_ref().ok_or(CompletionError::NoBase)? {
            Base::Finite { carrier, .. } => {
                let x = carrier
                    .id(id)
                    .ok_or_else(|| CompletionError::UnknownElement(id.into()))?;
                Ok((
                    carrier.name(carrier.src(x)).into(),
                    carrier.name(carrier.tgt(x)).into(),
                ))
            }
            Base::Symbolic(b) => Ok((b.src(id), b.tgt(id))),
        }
    }

    /// `φ_n(id)` as an element of level `n`, without a window check.
    pub(crate) fn project(&self, n: usize, id: &str) -> Result<Elem, CompletionError> {
        let i = self.slot(n)?;
        match self.base.as_ref().ok_or(CompletionError::NoBase)? {
            Base::Finite {
                carrier,
                projections,
            } => {
                let x = carrier
                    .id(id)
                    .ok_or_else(|| CompletionError::UnknownElement(id.into()))?;
                Ok(projections[i].apply(x))
            }
            Base::Symbolic(b) => {
                let name = b.project(n, id);
                self.levels[i]
                    .id(&name)
                    .ok_or(CompletionError::UnknownElement(name))
            }
        }
    }

    pub fn validate(&self, window: usize) -> SystemReport {
        validate_system(self, window)
    }
}

/// A failed identity of an inverse system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum SystemFailure {
    Level {
        level: usize,
        violation: String,
    },
    Bonding {
        level: usize,
        violation: String,
    },
    /// `φ_{n,n+1}(φ_{n+1}(a)) ≠ φ_n(a)`.
    Projection {
        level: usize,
        element: String,
        expected: String,
        found: String,
    },
    /// `φ_n(s(a)) ≠ s(φ_n(a))` or the same for targets.
    ProjectionLaw {
        level: usize,
        element: String,
    },
}

impl fmt::Display for SystemFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemFailure::Level { level, violation } => write!(f, "level {level}: {violation}"),
            SystemFailure::Bonding { level, violation } => {
                write!(f, "bonding {}→{level}: {violation}", level + 1)
            }
            SystemFailure::Projection { level, element, expected, found } => write!(
                f,
                "bonding {}→{level} sends the image of {element} to {found}, projection gives {expected}",
                level + 1
            ),
            SystemFailure::ProjectionLaw { level, element } => {
                write!(f, "projection to level {level} breaks src/tgt at {element}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub passed: bool,
    pub failures: Vec<SystemFailure>,
}

/// Checks every level, the declared laws of every bonding, and, over
/// window `window` of the base, that projections commute with bondings and
/// preserve sources and targets.
pub fn validate_system(sys: &InverseSystem, window: usize) -> SystemReport {
    let mut failures = Vec::new();
    for (i, l) in sys.levels.iter().enumerate() {
        let level = sys.first_level + i;
        for v in l.validate().violations {
            failures.push(SystemFailure::Level {
                level,
                violation: v.to_string(),
            });
        }
    }
    for (i, b) in sys.bondings.iter().enumerate() {
        let level = sys.first_level + i;
        for v in b.violations() {
            failures.push(SystemFailure::Bonding {
                level,
                violation: v.to_string(),
            });
        }
    }
    if let Ok(ids) = sys.base_elements(window) {
        for id in &ids {
            let images: Vec<Elem> = match (sys.first_level..=sys.last_level())
                .map(|n| sys.project(n, id))
                .collect::<Result<_, _>>()
            {
                Ok(v) => v,
                Err(e) => {
                    failures.push(SystemFailure::ProjectionLaw {
                        level: sys.first_level,
                        element: format!("{id}: {e}"),
                    });
                    continue;
                }
            };
            for (i, b) in sys.bondings.iter().enumerate() {
                let found = b.apply(images[i + 1]);
                if found != images[i] {
                    let l = &sys.levels[i];
                    failures.push(SystemFailure::Projection {
                        level: sys.first_level + i,
                        element: id.clone(),
                        expected: l.name(images[i]).into(),
                        found: l.name(found).into(),
                    });
                }
            }
            let Ok((s, t)) = sys.base_ends(id) else {
                continue;
            };
            for (i, l) in sys.levels.iter().enumerate() {
                let n = sys.first_level + i;
                let x = images[i];
                let ok = |end: &str, want: Elem| -> bool {
                    match sys.base_in_window(end, window) {
                        Ok(true) => sys.project(n, end).map(|e| e == want).unwrap_or(false),
                        _ => true,
                    }
                };
                if !ok(&s, l.src(x)) || !ok(&t, l.tgt(x)) {
                    failures.push(SystemFailure::ProjectionLaw {
                        level: n,
                        element: id.clone(),
                    });
                }
            }
        }
    }
    SystemReport {
        passed: failures.is_empty(),
        failures,
    }
}

/// The level-`n` coordinate `φ_n(a)` of the canonical embedding.
pub fn level_embed(sys: &InverseSystem, a: &str, n: usize) -> Result<String, CompletionError> {
    sys.slot(n)?;
    if !sys.base_in_window(a, sys.window)? {
        return Err(match sys.base {
            Some(Base::Symbolic(_)) => CompletionError::OutOfWindow {
                id: a.into(),
                window: sys.window,
            },
            _ => CompletionError::UnknownElement(a.into()),
        });
    }
    let x = sys.project(n, a)?;
    Ok(sys.level(n)?.name(x).to_string())
}

/// Sorts `chain` from coarse to fine, dropping repeats.
pub fn sort_chain(chain: &[Partition]) -> Result<Vec<Partition>, CompletionError> {
    for i in 0..chain.len() {
        for j in i + 1..chain.len() {
            if !chain[i].refines(&chain[j]) && !chain[j].refines(&chain[i]) {
                return Err(CompletionError::NotAChain(i, j));
            }
        }
    }
    let mut sorted = chain.to_vec();
    sorted.sort_by_key(|r| r.index());
    sorted.dedup();
    Ok(sorted)
}

/// Quotients of `carrier` along a refinement chain, labelled `1..=m` from
/// coarse to fine, with the natural maps as projections.
pub fn system_from_chain(
    carrier: &Arc<FiniteStructure>,
    law: Law,
    chain: &[Partition],
) -> Result<InverseSystem, CompletionError> {
    let sorted = sort_chain(chain)?;
    let mut levels = Vec::new();
    let mut projections = Vec::new();
    for r in &sorted {
        let q = quotient(carrier, r, law)?;
        levels.push(q.structure);
        projections.push(q.map);
    }
    let mut bondings = Vec::new();
    for pair in sorted.windows(2) {
        let b = induced_bonding(carrier, law, &pair[0], &pair[1])?;
        // Rebuild against the shared level structures so that identity of
        // domains and codomains is by pointer as well as by value.
        let i = bondings.len();
        bondings.push(StructureMap::new(
            levels[i + 1].clone(),
            levels[i].clone(),
            b.table().to_vec(),
            MapLaw::for_kind(levels[i].kind()),
        )?);
    }
    InverseSystem::new(
        1,
        levels,
        bondings,
        Some(Base::Finite {
            carrier: carrier.clone(),
            projections,
        }),
    )
}

pub fn system_from_filterbase(i: &FilterBase) -> Result<InverseSystem, CompletionError> {
    system_from_chain(i.carrier(), i.law(), i.members())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn classes(s: &FiniteStructure, cs: &[&[&str]]) -> Partition {
        let owned: Vec<Vec<&str>> = cs.iter().map(|c| c.to_vec()).collect();
        Partition::from_named_classes(s, &owned).unwrap()
    }

    #[test]
    fn diagonal_gives_one_copy() {
        let p2 = Arc::new(fixtures::path(2));
        let fb = FilterBase::new(
            p2.clone(),
            Law::Compatible,
            vec![Partition::discrete(p2.len())],
        )
        .unwrap();
        let sys = system_from_filterbase(&fb).unwrap();
        assert_eq!(sys.levels().len(), 1);
        assert_eq!(sys.levels()[0].names(), p2.names());
    }

    #[test]
    fn three_level_tower_on_p2() {
        let p2 = Arc::new(fixtures::path(2));
        let n = p2.len();
        let mid = classes(&p2, &[&["0", "2"]]);
        let fb = FilterBase::new(
            p2.clone(),
            Law::Compatible,
            vec![Partition::discrete(n), Partition::full(n), mid],
        )
        .unwrap();
        let sys = system_from_filterbase(&fb).unwrap();
        let sizes: Vec<usize> = sys.levels().iter().map(|l| l.len()).collect();
        assert_eq!(sizes, [1, 4, 5]);
        let report = sys.validate(0);
        assert!(report.passed, "{:?}", report.failures);
        assert_eq!(level_embed(&sys, "2", 2).unwrap(), "0");
    }

    #[test]
    fn incomparable_members_are_not_a_chain() {
        let p2 = Arc::new(fixtures::path(2));
        let a = classes(&p2, &[&["0", "1"]]);
        let b = classes(&p2, &[&["1", "2"]]);
        let fb = FilterBase::new(p2, Law::Compatible, vec![a, b]).unwrap();
        assert_eq!(
            system_from_filterbase(&fb).unwrap_err(),
            CompletionError::NotAChain(0, 1)
        );
    }

    #[test]
    fn group_tower_on_z4() {
        let z4 = Arc::new(fixtures::cyclic(4));
        let mod2 = classes(&z4, &[&["0", "2"], &["1", "3"]]);
        let chain = vec![Partition::full(4), mod2, Partition::discrete(4)];
        let sys = system_from_chain(&z4, Law::Congruence, &chain).unwrap();
        let sizes: Vec<usize> = sys.levels().iter().map(|l| l.len()).collect();
        assert_eq!(sizes, [1, 2, 4]);
        assert!(sys
            .levels()
            .iter()
            .all(|l| l.kind() == Kind::Groupoid && l.is_valid()));
        assert!(sys.validate(0).passed);
    }
}
