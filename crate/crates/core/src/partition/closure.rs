use std::collections::HashMap;

use super::law::{ensure_supported, LawFailure};
use super::{Law, Partition, PartitionError, UnionFind};
use crate::carrier::{Elem, FiniteStructure};

/// Result of [`close`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub partition: Partition,
    /// False only for `graph_equivalence` when some element ends up related
    /// to its inverse without a vertex in its class.
    pub valid: bool,
    pub side_condition: Option<LawFailure>,
}

/// Which generation rules the saturation applies.
///
/// [`SaturationRules::for_law`] gives the correct set; the switches exist so
/// that the verification suite can demonstrate that its oracles notice a
/// missing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationRules {
    pub endpoints: bool,
    pub inverses: bool,
    pub products: bool,
}

impl SaturationRules {
    pub fn for_law(law: Law) -> Self {
        SaturationRules {
            endpoints: true,
            inverses: law != Law::Compatible,
            products: law == Law::Congruence,
        }
    }
}

/// The smallest equivalence containing `seed` and closed under the
/// generation rules of `law`.
pub fn close(
    law: Law,
    s: &FiniteStructure,
    seed: &[(Elem, Elem)],
) -> Result<ClosureResult, PartitionError> {
    close_with(law, s, seed, SaturationRules::for_law(law))
}

pub fn close_with(
    law: Law,
    s: &FiniteStructure,
    seed: &[(Elem, Elem)],
    rules: SaturationRules,
) -> Result<ClosureResult, PartitionError> {
    ensure_supported(law, s)?;
    if let Some(&(x, y)) = seed.iter().find(|&&(x, y)| x >= s.len() || y >= s.len()) {
        return Err(PartitionError::UnknownElement(x.max(y).to_string()));
    }
    let mut uf = UnionFind::new(s.len());
    let mut work: Vec<(Elem, Elem)> = seed.to_vec();
    let products = if rules.products {
        s.products()
    } else {
        Vec::new()
    };

    loop {
        while let Some((a, b)) = work.pop() {
            if !uf.union(a, b) {
                continue;
            }
            if rules.endpoints {
                work.push((s.src(a), s.src(b)));
                work.push((s.tgt(a), s.tgt(b)));
            }
            if rules.inverses {
                work.push((s.inverse(a), s.inverse(b)));
            }
        }
        if !rules.products {
            break;
        }
        // Products of composable pairs with the same class signature must
        // land in one class.
        let mut signature: HashMap<(usize, usize), Elem> = HashMap::new();
        for &(g, h, gh) in &products {
            let key = (uf.find(g), uf.find(h));
            match signature.get(&key) {
                Some(&other) => {
                    if uf.find(other) != uf.find(gh) {
                        work.push((other, gh));
                    }
                }
                None => {
                    signature.insert(key, gh);
                }
            }
        }
        if work.is_empty() {
            break;
        }
    }

    let partition = Partition::from_labels(uf.labels());
    let side_condition = if law == Law::GraphEquivalence {
        s.elements()
            .find(|&x| {
                let xi = s.inverse(x);
                xi != x
                    && partition.related(x, xi)
                    && !partition.class_members(x).iter().any(|&v| s.is_vertex(v))
            })
            .map(|x| LawFailure::SelfInverse {
                x: s.name(x).to_string(),
            })
    } else {
        None
    };
    Ok(ClosureResult {
        partition,
        valid: side_condition.is_none(),
        side_condition,
    })
}
