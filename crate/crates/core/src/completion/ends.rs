use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Base, CompletionError, InverseSystem};
use crate::carrier::Elem;

/// Where the unbounded classes of a census come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusSource {
    /// Finite base: every fibre is bounded.
    Finite,
    /// The symbolic base names its unbounded classes.
    Declared,
    /// Strict growth over three consecutive window increments.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassFiber {
    pub class: String,
    /// Fibre size in windows `w, w+1, w+2, w+3`.
    pub sizes: Vec<usize>,
    pub grows: bool,
    pub unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub level: usize,
    pub window: usize,
    pub source: CensusSource,
    pub classes: Vec<ClassFiber>,
}

impl Census {
    pub fn unbounded(&self) -> Vec<&str> {
        self.classes
            .iter()
            .filter(|c| c.unbounded)
            .map(|c| c.class.as_str())
            .collect()
    }
}

const GROWTH_STEPS: usize = 3;

/// Fibre sizes of the level-`n` classes over windows `budget..=budget+3`.
pub fn fiber_census(
    sys: &InverseSystem,
    n: usize,
    budget: usize,
) -> Result<Census, CompletionError> {
    let level = sys.level(n)?.clone();
    let base = sys.base().ok_or(CompletionError::NoBase)?;
    let mut sizes = vec![vec![0usize; GROWTH_STEPS + 1]; level.len()];
    for (step, w) in (budget..=budget + GROWTH_STEPS).enumerate() {
        for id in sys.base_elements(w)? {
            sizes[sys.project(n, &id)?][step] += 1;
        }
    }
    let (source, declared): (CensusSource, Option<BTreeSet<String>>) = match base {
        Base::Finite { .. } => (CensusSource::Finite, Some(BTreeSet::new())),
        Base::Symbolic(b) => match b.declared_unbounded(n) {
            Some(d) => (CensusSource::Declared, Some(d.into_iter().collect())),
            None => (CensusSource::Heuristic, None),
        },
    };
    let classes = level
        .elements()
        .map(|x| {
            let s = &sizes[x];
            let grows = s.windows(2).all(|p| p[1] > p[0]);
            let class = level.name(x).to_string();
            let unbounded = match &declared {
                Some(d) => d.contains(&class),
                None => grows,
            };
            ClassFiber {
                class,
                sizes: s.clone(),
                grows,
                unbounded,
            }
        })
        .collect();
    Ok(Census {
        level: n,
        window: budget,
        source,
        classes,
    })
}

/// `Exact(k)` or `Unknown`; serialized as the text `Exact(k)` / `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndStatus {
    Exact(usize),
    Unknown,
}

impl fmt::Display for EndStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndStatus::Exact(k) => write!(f, "Exact({k})"),
            EndStatus::Unknown => f.write_str("Unknown"),
        }
    }
}

impl Serialize for EndStatus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCount {
    pub level: usize,
    pub unbounded: usize,
}

/// A coherent choice of unbounded classes, one per census level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thread {
    pub name: String,
    /// Classes from the first census level to the deepest.
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndReport {
    pub status: EndStatus,
    pub depth: usize,
    pub source: CensusSource,
    pub census: Vec<LevelCount>,
    pub stabilization: Option<usize>,
    /// Present when the status is exact.
    pub ends: Vec<Thread>,
}

/// First level counted by the census: level 0, when present, is the
/// one-class quotient and is skipped.
fn census_start(sys: &InverseSystem) -> usize {
    sys.first_level().max(1)
}

/// Counts coherent threads of unbounded classes up to level `depth`.
///
/// The transition from level `ℓ+1` to `ℓ` is the bonding restricted to
/// unbounded classes. The count is exact when every transition from some
/// level on is a bijection onto the unbounded classes below.
pub fn count_new_points(sys: &InverseSystem, depth: usize) -> Result<EndReport, CompletionError> {
    let start = census_start(sys);
    if depth < start || depth > sys.last_level() {
        return Err(CompletionError::LevelOutOfRange {
            level: depth,
            first: start,
            last: sys.last_level(),
        });
    }
    let window = 2 * depth + 2;
    let mut unbounded: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    let mut source = CensusSource::Finite;
    for n in start..=depth {
        let c = fiber_census(sys, n, window)?;
        source = c.source;
        let level = sys.level(n)?;
        unbounded.insert(
            n,
            c.unbounded()
                .iter()
                .map(|id| level.id(id).expect("class of the level"))
                .collect(),
        );
    }
    let bijective = |l: usize| -> Result<bool, CompletionError> {
        let b = sys.bonding(l)?;
        let below: BTreeSet<Elem> = unbounded[&l].iter().copied().collect();
        let images: BTreeSet<Elem> = unbounded[&(l + 1)].iter().map(|&x| b.apply(x)).collect();
        Ok(images.len() == unbounded[&(l + 1)].len() && images == below)
    };
    let mut stabilization = Some(depth);
    for l in (start..depth).rev() {
        if bijective(l)? {
            stabilization = Some(l);
        } else {
            break;
        }
    }
    let k = unbounded[&depth].len();
    let exact = k == 0 || stabilization.is_some_and(|s| s < depth);
    let census = unbounded
        .iter()
        .map(|(&level, v)| LevelCount {
            level,
            unbounded: v.len(),
        })
        .collect();
    if !exact {
        return Ok(EndReport {
            status: EndStatus::Unknown,
            depth,
            source,
            census,
            stabilization: None,
            ends: Vec::new(),
        });
    }
    let deepest = sys.level(depth)?;
    let mut ends = Vec::new();
    for &x in &unbounded[&depth] {
        let mut classes = vec![deepest.name(x).to_string()];
        let mut y = x;
        for l in (start..depth).rev() {
            y = sys.bonding(l)?.apply(y);
            classes.push(sys.level(l)?.name(y).to_string());
        }
        classes.reverse();
        ends.push(Thread {
            name: format!("end:{}", deepest.name(x)),
            classes,
        });
    }
    Ok(EndReport {
        status: EndStatus::Exact(k),
        depth,
        source,
        census,
        stabilization,
        ends,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscreteQuotientReport {
    pub level: usize,
    pub holds: bool,
    /// Classes of the window plus the ends under the level-`n` projection.
    pub classes: usize,
    pub level_size: usize,
    pub end_images: Vec<(String, String)>,
}

/// Extends the level-`n` projection to the ends and checks that the window
/// together with the ends maps onto `Γ_n` by a map of directed graphs.
pub fn discrete_quotient_check(
    sys: &InverseSystem,
    n: usize,
    depth: usize,
) -> Result<DiscreteQuotientReport, CompletionError> {
    let ends = count_new_points(sys, depth)?;
    if ends.status == EndStatus::Unknown {
        return Err(CompletionError::StatusUnknown(depth));
    }
    let start = census_start(sys);
    if n < start || n > depth {
        return Err(CompletionError::LevelOutOfRange {
            level: n,
            first: start,
            last: depth,
        });
    }
    let level = sys.level(n)?;
    let window = 2 * depth + 2;
    let mut hit = vec![false; level.len()];
    let mut preserves = true;
    for id in sys.base_elements(window)? {
        let x = sys.project(n, &id)?;
        hit[x] = true;
        let (s, t) = sys.base_ends(&id)?;
        for (end, want) in [(s, level.src(x)), (t, level.tgt(x))] {
            if sys.base_in_window(&end, window)? && sys.project(n, &end)? != want {
                preserves = false;
            }
        }
    }
    let end_images = ends.end_images_at(n - start);
    for (_, class) in &end_images {
        hit[level.id(class).expect("thread class")] = true;
    }
    let classes = hit.iter().filter(|&&h| h).count();
    Ok(DiscreteQuotientReport {
        level: n,
        holds: preserves && classes == level.len(),
        classes,
        level_size: level.len(),
        end_images,
    })
}

impl EndReport {
    fn end_images_at(&self, offset: usize) -> Vec<(String, String)> {
        self.ends
            .iter()
            .map(|t| (t.name.clone(), t.classes[offset].clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub window: usize,
    pub max_level: usize,
    pub all_separated: bool,
    /// Pairs of window elements no level up to `max_level` tells apart.
    pub unseparated: Vec<(String, String)>,
    /// For each window element, the first level whose class meets the
    /// window only in that element.
    pub isolated_at: Vec<(String, Option<usize>)>,
}

/// Whether every two elements of window `w` have distinct images at some
/// level `≤ max_level`.
pub fn window_separation(
    sys: &InverseSystem,
    w: usize,
    max_level: usize,
) -> Result<SeparationReport, CompletionError> {
    let ids = sys.base_elements(w)?;
    let levels: Vec<usize> = (sys.first_level()..=max_level.min(sys.last_level())).collect();
    let images: Vec<Vec<Elem>> = ids
        .iter()
        .map(|id| levels.iter().map(|&n| sys.project(n, id)).collect())
        .collect::<Result<_, _>>()?;
    let mut unseparated = Vec::new();
    for a in 0..ids.len() {
        for b in a + 1..ids.len() {
            if images[a] == images[b] {
                unseparated.push((ids[a].clone(), ids[b].clone()));
            }
        }
    }
    let isolated_at = ids
        .iter()
        .enumerate()
        .map(|(a, id)| {
            let at = (0..levels.len())
                .find(|&k| (0..ids.len()).all(|b| b == a || images[b][k] != images[a][k]))
                .map(|k| levels[k]);
            (id.clone(), at)
        })
        .collect();
    Ok(SeparationReport {
        window: w,
        max_level,
        all_separated: unseparated.is_empty(),
        unseparated,
        isolated_at,
    })
}
