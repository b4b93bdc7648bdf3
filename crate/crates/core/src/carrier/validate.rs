use std::fmt;

use serde::Serialize;

use super::{Elem, FiniteStructure, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Source,
    Target,
}

/// One violated axiom, with witnesses given by their original ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// A vertex whose source or target is not itself.
    VertexNotFixed {
        vertex: String,
    },
    /// The source or target of an element is not a vertex.
    EndpointNotVertex {
        element: String,
        end: End,
    },
    /// A graph or groupoid without a (derivable) involution table.
    MissingInvolution,
    InvolutionNotInvolutive {
        element: String,
    },
    InvolutionEndpoints {
        element: String,
    },
    FixedEdge {
        edge: String,
    },
    VertexNotSelfInverse {
        vertex: String,
    },
    /// A composable pair without a product.
    PartialProductDomain {
        left: String,
        right: String,
    },
    /// A product stored for a pair with `t(g) ≠ s(h)`.
    ProductOnNonComposable {
        left: String,
        right: String,
    },
    /// `s(gh) ≠ s(g)` or `t(gh) ≠ t(h)`.
    ProductEndpoints {
        left: String,
        right: String,
    },
    NonAssociative {
        left: String,
        middle: String,
        right: String,
    },
    /// `s(g)g ≠ g` or `gt(g) ≠ g`.
    IdentityLaw {
        element: String,
    },
    /// No two-sided inverse in the product table.
    NoInverse {
        element: String,
    },
    /// The stored inverse does not satisfy `gg⁻¹ = s(g)`, `g⁻¹g = t(g)`.
    InverseLaw {
        element: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexNotFixed { vertex } => write!(f, "VertexNotFixed{{{vertex}}}"),
            Violation::EndpointNotVertex { element, end } => {
                write!(f, "EndpointNotVertex{{{element}, {end:?}}}")
            }
            Violation::MissingInvolution => write!(f, "MissingInvolution"),
            Violation::InvolutionNotInvolutive { element } => {
                write!(f, "InvolutionNotInvolutive{{{element}}}")
            }
            Violation::InvolutionEndpoints { element } => {
                write!(f, "InvolutionEndpoints{{{element}}}")
            }
            Violation::FixedEdge { edge } => write!(f, "FixedEdge{{{edge}}}"),
            Violation::VertexNotSelfInverse { vertex } => {
                write!(f, "VertexNotSelfInverse{{{vertex}}}")
            }
            Violation::PartialProductDomain { left, right } => {
                write!(f, "PartialProductDomain{{({left},{right})}}")
            }
            Violation::ProductOnNonComposable { left, right } => {
                write!(f, "ProductOnNonComposable{{({left},{right})}}")
            }
            Violation::ProductEndpoints { left, right } => {
                write!(f, "ProductEndpoints{{({left},{right})}}")
            }
            Violation::NonAssociative {
                left,
                middle,
                right,
            } => {
                write!(f, "NonAssociative{{({left},{middle},{right})}}")
            }
            Violation::IdentityLaw { element } => write!(f, "IdentityLaw{{{element}}}"),
            Violation::NoInverse { element } => write!(f, "NoInverse{{{element}}}"),
            Violation::InverseLaw { element } => write!(f, "InverseLaw{{{element}}}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(super) fn validate(s: &FiniteStructure) -> ValidationReport {
    let mut out = Vec::new();
    let name = |x: Elem| s.name(x).to_string();

    for x in s.elements() {
        if s.is_vertex(x) && (s.src(x) != x || s.tgt(x) != x) {
            out.push(Violation::VertexNotFixed { vertex: name(x) });
        }
        if !s.is_vertex(s.src(x)) {
            out.push(Violation::EndpointNotVertex {
                element: name(x),
                end: End::Source,
            });
        }
        if !s.is_vertex(s.tgt(x)) {
            out.push(Violation::EndpointNotVertex {
                element: name(x),
                end: End::Target,
            });
        }
    }

    match s.kind() {
        Kind::Digraph => {}
        Kind::Graph => validate_involution(s, &mut out),
        Kind::Groupoid => validate_groupoid(s, &mut out),
    }
    ValidationReport { violations: out }
}

fn validate_involution(s: &FiniteStructure, out: &mut Vec<Violation>) {
    if !s.has_inv() {
        out.push(Violation::MissingInvolution);
        return;
    }
    for x in s.elements() {
        let y = s.inverse(x);
        if s.inverse(y) != x {
            out.push(Violation::InvolutionNotInvolutive {
                element: s.name(x).into(),
            });
        }
        if s.src(y) != s.tgt(x) || s.tgt(y) != s.src(x) {
            out.push(Violation::InvolutionEndpoints {
                element: s.name(x).into(),
            });
        }
        match (s.is_vertex(x), y == x) {
            (false, true) => out.push(Violation::FixedEdge {
                edge: s.name(x).into(),
            }),
            (true, false) => out.push(Violation::VertexNotSelfInverse {
                vertex: s.name(x).into(),
            }),
            _ => {}
        }
    }
}

fn validate_groupoid(s: &FiniteStructure, out: &mut Vec<Violation>) {
    let name = |x: Elem| s.name(x).to_string();
    let mut closed = true;

    // Axiom 1: gh defined iff t(g) = s(h), with s(gh) = s(g), t(gh) = t(h).
    for g in s.elements() {
        for h in s.elements() {
            match (s.composable(g, h), s.mul(g, h)) {
                (true, None) => {
                    closed = false;
                    out.push(Violation::PartialProductDomain {
                        left: name(g),
                        right: name(h),
                    });
                }
                (false, Some(_)) => out.push(Violation::ProductOnNonComposable {
                    left: name(g),
                    right: name(h),
                }),
                (true, Some(gh)) => {
                    if s.src(gh) != s.src(g) || s.tgt(gh) != s.tgt(h) {
                        out.push(Violation::ProductEndpoints {
                            left: name(g),
                            right: name(h),
                        });
                    }
                }
                (false, None) => {}
            }
        }
    }

    // Axiom 2 on every composable triple where both bracketings exist.
    if closed {
        for (g, h, gh) in s.products() {
            for k in s.elements() {
                if !s.composable(h, k) {
                    continue;
                }
                let hk = s.mul(h, k);
                let left = s.mul(gh, k);
                let right = hk.and_then(|hk| s.mul(g, hk));
                if left != right {
                    out.push(Violation::NonAssociative {
                        left: name(g),
                        middle: name(h),
                        right: name(k),
                    });
                }
            }
        }
    }

    // Axiom 3.
    for g in s.elements() {
        let left = s.mul(s.src(g), g);
        let right = s.mul(g, s.tgt(g));
        if left != Some(g) || right != Some(g) {
            out.push(Violation::IdentityLaw { element: name(g) });
        }
    }

    // Axiom 4.
    match s.inv.as_ref() {
        Some(inv) => {
            for g in s.elements() {
                let h = inv[g];
                let ok = s.src(h) == s.tgt(g)
                    && s.tgt(h) == s.src(g)
                    && s.mul(g, h) == Some(s.src(g))
                    && s.mul(h, g) == Some(s.tgt(g));
                if !ok {
                    out.push(Violation::InverseLaw { element: name(g) });
                }
            }
        }
        None => {
            for g in s.elements() {
                let found = s
                    .elements()
                    .any(|h| s.mul(g, h) == Some(s.src(g)) && s.mul(h, g) == Some(s.tgt(g)));
                if !found {
                    out.push(Violation::NoInverse { element: name(g) });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::Builder;
    use crate::fixtures;

    #[test]
    fn cyclic_group_is_a_valid_groupoid() {
        assert!(fixtures::cyclic(4).validate().is_valid());
    }

    #[test]
    fn self_inverse_edge_is_a_fixed_edge() {
        let mut b = Builder::new(Kind::Graph);
        let v = b.vertex("v").unwrap();
        let e = b.edge("e", v, v).unwrap();
        b.set_inv(v, v);
        b.set_inv(e, e);
        let report = b.build().unwrap().validate();
        assert_eq!(
            report.violations,
            vec![Violation::FixedEdge { edge: "e".into() }]
        );
    }

    #[test]
    fn missing_product_on_composable_pair() {
        let mut b = Builder::new(Kind::Groupoid);
        let v = b.vertex("v").unwrap();
        let g = b.edge("g", v, v).unwrap();
        b.set_mul(v, v, v);
        b.set_mul(v, g, g);
        b.set_mul(g, v, g);
        let report = b.build().unwrap().validate();
        assert!(report
            .violations
            .contains(&Violation::PartialProductDomain {
                left: "g".into(),
                right: "g".into()
            }));
    }

    #[test]
    fn vertex_with_foreign_source() {
        let mut b = Builder::new(Kind::Digraph);
        let u = b.vertex("u").unwrap();
        let v = b.vertex("v").unwrap();
        b.set_src(v, u);
        let report = b.build().unwrap().validate();
        assert_eq!(
            report.violations,
            vec![Violation::VertexNotFixed { vertex: "v".into() }]
        );
    }

    #[test]
    fn non_associative_table_is_caught() {
        // A one-vertex "group" on {0, a, b} whose table is a quasigroup but
        // not associative: a·a = b, a·b = b, b·a = 0, b·b = a.
        let mut b = Builder::new(Kind::Groupoid);
        let e = b.vertex("0").unwrap();
        let x = b.edge("a", e, e).unwrap();
        let y = b.edge("b", e, e).unwrap();
        for (g, h, gh) in [
            (e, e, e),
            (e, x, x),
            (e, y, y),
            (x, e, x),
            (y, e, y),
            (x, x, y),
            (x, y, y),
            (y, x, e),
            (y, y, x),
        ] {
            b.set_mul(g, h, gh);
        }
        let report = b.build().unwrap().validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonAssociative { .. })));
    }
}
