use std::fmt;

use serde::Serialize;

use super::{Law, Partition, PartitionError};
use crate::carrier::{Elem, FiniteStructure};

const MAX_WITNESSES: usize = 32;

/// A related pair (or pair of pairs) whose consequence is not related.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LawFailure {
    /// `(x, y) ∈ R` but `(s(x), s(y)) ∉ R`.
    Source {
        x: String,
        y: String,
    },
    Target {
        x: String,
        y: String,
    },
    /// `(x, y) ∈ R` but `(x⁻¹, y⁻¹) ∉ R`.
    Inverse {
        x: String,
        y: String,
    },
    /// `(x, x⁻¹) ∈ R` but the class of `x` holds no vertex.
    SelfInverse {
        x: String,
    },
    /// `(g₁, g₂), (h₁, h₂) ∈ R` composable but `(g₁h₁, g₂h₂) ∉ R`.
    Product {
        g1: String,
        h1: String,
        g2: String,
        h2: String,
    },
}

impl fmt::Display for LawFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawFailure::Source { x, y } => write!(f, "({x},{y}) related but sources are not"),
            LawFailure::Target { x, y } => write!(f, "({x},{y}) related but targets are not"),
            LawFailure::Inverse { x, y } => write!(f, "({x},{y}) related but inverses are not"),
            LawFailure::SelfInverse { x } => {
                write!(
                    f,
                    "{x} is related to its inverse outside the vertex classes"
                )
            }
            LawFailure::Product { g1, h1, g2, h2 } => {
                write!(
                    f,
                    "({g1},{g2}) and ({h1},{h2}) related but ({g1}{h1},{g2}{h2}) are not"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub law: Law,
    pub passed: bool,
    pub failures: Vec<LawFailure>,
}

impl CheckReport {
    pub fn first_failure(&self) -> Option<&LawFailure> {
        self.failures.first()
    }
}

pub(super) fn ensure_supported(law: Law, s: &FiniteStructure) -> Result<(), PartitionError> {
    if law.supports(s.kind()) {
        Ok(())
    } else {
        Err(PartitionError::LawKindMismatch {
            law,
            kind: s.kind(),
        })
    }
}

pub(super) fn ensure_carrier(s: &FiniteStructure, r: &Partition) -> Result<(), PartitionError> {
    if r.len() == s.len() {
        Ok(())
    } else {
        Err(PartitionError::CarrierMismatch {
            expected: s.len(),
            found: r.len(),
        })
    }
}

/// Checks whether `r` satisfies `law` on `s`.
pub fn check(law: Law, s: &FiniteStructure, r: &Partition) -> Result<CheckReport, PartitionError> {
    ensure_supported(law, s)?;
    ensure_carrier(s, r)?;
    let name = |x: Elem| s.name(x).to_string();
    let mut failures = Vec::new();

    // Transitivity lets every member be compared with its class head.
    for class in r.classes() {
        let head = class[0];
        for &x in &class[1..] {
            if !r.related(s.src(head), s.src(x)) {
                failures.push(LawFailure::Source {
                    x: name(head),
                    y: name(x),
                });
            }
            if !r.related(s.tgt(head), s.tgt(x)) {
                failures.push(LawFailure::Target {
                    x: name(head),
                    y: name(x),
                });
            }
            if law != Law::Compatible && !r.related(s.inverse(head), s.inverse(x)) {
                failures.push(LawFailure::Inverse {
                    x: name(head),
                    y: name(x),
                });
            }
        }
    }

    if law == Law::GraphEquivalence {
        for x in s.elements() {
            let xi = s.inverse(x);
            if xi != x && r.related(x, xi) && !r.class_members(x).iter().any(|&v| s.is_vertex(v)) {
                failures.push(LawFailure::SelfInverse { x: name(x) });
            }
        }
    }

    if law == Law::Congruence {
        'outer: for (g1, h1, p1) in s.products() {
            for &g2 in r.class_members(g1) {
                for &h2 in r.class_members(h1) {
                    if !s.composable(g2, h2) {
                        continue;
                    }
                    let p2 = s.mul(g2, h2).expect("validated groupoid");
                    if !r.related(p1, p2) {
                        failures.push(LawFailure::Product {
                            g1: name(g1),
                            h1: name(h1),
                            g2: name(g2),
                            h2: name(h2),
                        });
                        if failures.len() >= MAX_WITNESSES {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }

    Ok(CheckReport {
        law,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn vertex_merge_on_a_path_is_compatible() {
        let p2 = fixtures::path(2);
        let r = Partition::from_named_classes(&p2, &[vec!["0", "1"]]).unwrap();
        assert!(check(Law::Compatible, &p2, &r).unwrap().passed);
    }

    #[test]
    fn edge_merge_on_a_path_is_not_compatible() {
        let p2 = fixtures::path(2);
        let r = Partition::from_named_classes(&p2, &[vec!["e01", "e12"]]).unwrap();
        let report = check(Law::Compatible, &p2, &r).unwrap();
        assert!(!report.passed);
        assert_eq!(
            report.first_failure(),
            Some(&LawFailure::Source {
                x: "e01".into(),
                y: "e12".into()
            })
        );
    }

    #[test]
    fn diagonal_is_a_congruence() {
        for (_, g) in fixtures::groupoid_catalogue(16) {
            assert!(
                check(Law::Congruence, &g, &Partition::discrete(g.len()))
                    .unwrap()
                    .passed
            );
        }
    }

    #[test]
    fn cosets_of_a_non_subgroup_are_not_a_congruence() {
        let z4 = fixtures::cyclic(4);
        let r = Partition::from_named_classes(&z4, &[vec!["1", "3"]]).unwrap();
        let report = check(Law::Congruence, &z4, &r).unwrap();
        assert!(!report.passed);
        assert!(matches!(
            report.first_failure(),
            Some(LawFailure::Product { .. })
        ));
    }

    #[test]
    fn graph_law_needs_a_graph() {
        let p2 = fixtures::path(2);
        assert_eq!(
            check(Law::GraphEquivalence, &p2, &Partition::discrete(p2.len())),
            Err(PartitionError::LawKindMismatch {
                law: Law::GraphEquivalence,
                kind: p2.kind()
            })
        );
    }

    #[test]
    fn edge_glued_to_its_inverse_needs_a_vertex() {
        let g = crate::carrier::serre_double(&fixtures::path(1)).unwrap();
        // {e01, e01^-1} together forces 0 ~ 1, but no vertex joins the edge class.
        let r =
            Partition::from_named_classes(&g, &[vec!["e01", "e01^-1"], vec!["0", "1"]]).unwrap();
        let report = check(Law::GraphEquivalence, &g, &r).unwrap();
        assert_eq!(
            report.failures,
            vec![
                LawFailure::SelfInverse { x: "e01".into() },
                LawFailure::SelfInverse { x: "e01^-1".into() }
            ]
        );
        let absorbed = Partition::full(g.len());
        assert!(check(Law::GraphEquivalence, &g, &absorbed).unwrap().passed);
    }
}
