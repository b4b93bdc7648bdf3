//! Generators for the standard fixtures: paths, the six-element graph Δ,
//! cyclic groups, pair groupoids, connected groupoids `C(k, H)`, discrete
//! spaces and the two ℤ-line inverse systems.

use std::fmt;

use thiserror::Error;

use crate::carrier::{disjoint_union, serre_double, Builder, Elem, FiniteStructure, Kind};
use crate::completion::{zline, InverseSystem};

/// Largest parameter accepted by [`generate`].
pub const MAX_PARAMETER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

/// A finite group given by its multiplication table; index 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1, "cyclic group of order 0");
        GroupTable {
            name: format!("z{m}"),
            elements: (0..m).map(|i| i.to_string()).collect(),
            table: (0..m)
                .map(|a| (0..m).map(|b| (a + b) % m).collect())
                .collect(),
        }
    }

    pub fn klein() -> Self {
        GroupTable {
            name: "klein".into(),
            elements: ["e", "a", "b", "c"].map(String::from).to_vec(),
            table: (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
        }
    }

    /// The symmetric group on three letters. Elements are named by their
    /// image words; `pq` applies `p` first.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index([q[p[0]], q[p[1]], q[p[2]]]))
                    .collect()
            })
            .collect();
        GroupTable {
            name: "s3".into(),
            elements: perms
                .iter()
                .map(|p| p.iter().map(|d| d.to_string()).collect())
                .collect(),
            table,
        }
    }

    /// `z<m>`, `klein` or `s3`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "klein" | "v4" => Some(Self::klein()),
            "s3" => Some(Self::s3()),
            _ => {
                let m: usize = name.strip_prefix('z')?.parse().ok()?;
                (1..=MAX_PARAMETER).contains(&m).then(|| Self::cyclic(m))
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == 0)
            .expect("group element without inverse")
    }
}

/// `P_n`: vertices `0..=n` and edges `e{i}{i+1}`.
pub fn path(n: usize) -> FiniteStructure {
    let mut b = Builder::new(Kind::Digraph);
    let vs: Vec<Elem> = (0..=n).map(|i| b.vertex(i.to_string()).unwrap()).collect();
    for i in 0..n {
        b.edge(format!("e{}{}", i, i + 1), vs[i], vs[i + 1])
            .unwrap();
    }
    b.build().unwrap()
}

/// A directed cycle with `n ≥ 1` vertices `0..n` and edges `e{i}{i+1 mod n}`.
pub fn cycle(n: usize) -> FiniteStructure {
    assert!(n >= 1);
    let mut b = Builder::new(Kind::Digraph);
    let vs: Vec<Elem> = (0..n).map(|i| b.vertex(i.to_string()).unwrap()).collect();
    for i in 0..n {
        b.edge(format!("e{}{}", i, (i + 1) % n), vs[i], vs[(i + 1) % n])
            .unwrap();
    }
    b.build().unwrap()
}

/// The graph Δ with `V = {a, b}` and edges `e: a→a`, `f: b→b`, `g: a→b`,
/// `gbar: b→a`. Every digraph map into Δ is determined by its vertex part.
pub fn delta_graph() -> FiniteStructure {
    let mut b = Builder::new(Kind::Digraph);
    let a = b.vertex("a").unwrap();
    let bb = b.vertex("b").unwrap();
    b.edge("e", a, a).unwrap();
    b.edge("f", bb, bb).unwrap();
    b.edge("g", a, bb).unwrap();
    b.edge("gbar", bb, a).unwrap();
    b.build().unwrap()
}

/// One vertex `a` with one loop `e`.
pub fn loop_graph() -> FiniteStructure {
    let mut b = Builder::new(Kind::Digraph);
    let a = b.vertex("a").unwrap();
    b.edge("e", a, a).unwrap();
    b.build().unwrap()
}

/// `n` vertices `0..n` and no edges.
pub fn discrete_space(n: usize) -> FiniteStructure {
    let mut b = Builder::new(Kind::Digraph);
    for i in 0..n {
        b.vertex(i.to_string()).unwrap();
    }
    b.build().unwrap()
}

/// `n` identities and no other arrows.
pub fn discrete_groupoid(n: usize) -> FiniteStructure {
    let mut b = Builder::new(Kind::Groupoid);
    for i in 0..n {
        let v = b.vertex(i.to_string()).unwrap();
        b.set_mul(v, v, v);
    }
    b.build().unwrap()
}

/// A group viewed as a one-vertex groupoid whose vertex is the identity.
pub fn group(h: &GroupTable) -> FiniteStructure {
    let mut b = Builder::new(Kind::Groupoid);
    let e = b.vertex(h.element_name(0)).unwrap();
    for a in 1..h.order() {
        b.edge(h.element_name(a), e, e).unwrap();
    }
    for x in 0..h.order() {
        for y in 0..h.order() {
            b.set_mul(x, y, h.mul(x, y));
        }
    }
    b.build().unwrap()
}

/// ℤ/n as a one-vertex groupoid with elements `0..n`.
pub fn cyclic(n: usize) -> FiniteStructure {
    group(&GroupTable::cyclic(n))
}

fn vertex_label(i: usize, n: usize) -> String {
    if n <= 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("x{i}")
    }
}

/// The pair groupoid on `n` vertices: exactly one arrow `xy` from `x` to `y`.
pub fn pair_groupoid(n: usize) -> FiniteStructure {
    let mut b = Builder::new(Kind::Groupoid);
    let labels: Vec<String> = (0..n).map(|i| vertex_label(i, n)).collect();
    for l in &labels {
        b.vertex(l.clone()).unwrap();
    }
    let mut arrow = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            arrow[i][j] = if i == j {
                i
            } else {
                b.edge(format!("{}{}", labels[i], labels[j]), i, j).unwrap()
            };
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                b.set_mul(arrow[i][j], arrow[j][k], arrow[i][k]);
            }
        }
    }
    b.build().unwrap()
}

/// `C(k, H)`: the connected groupoid on vertices `v0..v{k-1}` with an arrow
/// `(i,h,j)` from `v{i}` to `v{j}` for every `h ∈ H`, composed by
/// `(i,h,j)(j,h',l) = (i,hh',l)`. The arrow `(i,e,i)` is the vertex `v{i}`.
pub fn connected_groupoid(k: usize, h: &GroupTable) -> FiniteStructure {
    let m = h.order();
    let mut b = Builder::new(Kind::Groupoid);
    for i in 0..k {
        b.vertex(format!("v{i}")).unwrap();
    }
    let mut arrow = vec![0; k * k * m];
    let at = |i: usize, j: usize, a: usize| (i * k + j) * m + a;
    for i in 0..k {
        for j in 0..k {
            for a in 0..m {
                arrow[at(i, j, a)] = if i == j && a == 0 {
                    i
                } else {
                    b.edge(format!("({},{},{})", i, h.element_name(a), j), i, j)
                        .unwrap()
                };
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                for x in 0..m {
                    for y in 0..m {
                        b.set_mul(
                            arrow[at(i, j, x)],
                            arrow[at(j, l, y)],
                            arrow[at(i, l, h.mul(x, y))],
                        );
                    }
                }
            }
        }
    }
    b.build().unwrap()
}

/// Named small structures of every kind, up to `max_size` elements.
pub fn catalogue(max_size: usize) -> Vec<(String, FiniteStructure)> {
    let mut out: Vec<(String, FiniteStructure)> = Vec::new();
    for n in 0..=3 {
        out.push((format!("path({n})"), path(n)));
    }
    for n in 1..=3 {
        out.push((format!("cycle({n})"), cycle(n)));
        out.push((format!("discrete-space({n})"), discrete_space(n)));
    }
    out.push(("delta-graph".into(), delta_graph()));
    out.push(("loop".into(), loop_graph()));
    for n in 1..=2 {
        out.push((format!("serre(path({n}))"), serre_double(&path(n)).unwrap()));
    }
    out.push(("serre(cycle(2))".into(), serre_double(&cycle(2)).unwrap()));
    out.extend(groupoid_catalogue(max_size));
    out.retain(|(_, s)| s.len() <= max_size);
    out
}

/// Named small groupoids up to `max_size` elements.
pub fn groupoid_catalogue(max_size: usize) -> Vec<(String, FiniteStructure)> {
    let mut out: Vec<(String, FiniteStructure)> = Vec::new();
    for n in 1..=8 {
        out.push((format!("cyclic({n})"), cyclic(n)));
    }
    for n in 1..=3 {
        out.push((format!("pair-groupoid({n})"), pair_groupoid(n)));
        out.push((format!("discrete-groupoid({n})"), discrete_groupoid(n)));
    }
    out.push(("klein".into(), group(&GroupTable::klein())));
    out.push(("s3".into(), group(&GroupTable::s3())));
    for (k, h) in [(2, "z2"), (2, "z3"), (2, "z4"), (3, "z2")] {
        let table = GroupTable::by_name(h).unwrap();
        out.push((
            format!("connected-groupoid({k},{h})"),
            connected_groupoid(k, &table),
        ));
    }
    let z2 = cyclic(2);
    let pair2 = pair_groupoid(2);
    for (name, a, b) in [
        ("cyclic(2)+cyclic(2)", &z2, &z2),
        ("cyclic(2)+cyclic(3)", &z2, &cyclic(3)),
        ("cyclic(2)+pair-groupoid(2)", &z2, &pair2),
        ("pair-groupoid(2)+pair-groupoid(2)", &pair2, &pair2),
    ] {
        out.push((name.into(), disjoint_union(a, b).unwrap()));
    }
    out.retain(|(_, s)| s.len() <= max_size);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureSpec {
    Path(usize),
    ZlineCircles(usize),
    ZlineArcs(usize),
    DeltaGraph,
    Cyclic(usize),
    PairGroupoid(usize),
    ConnectedGroupoid(usize, String),
    DiscreteSpace(usize),
}

impl fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureSpec::Path(n) => write!(f, "path({n})"),
            FixtureSpec::ZlineCircles(n) => write!(f, "zline-circles({n})"),
            FixtureSpec::ZlineArcs(n) => write!(f, "zline-arcs({n})"),
            FixtureSpec::DeltaGraph => write!(f, "delta-graph"),
            FixtureSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            FixtureSpec::PairGroupoid(n) => write!(f, "pair-groupoid({n})"),
            FixtureSpec::ConnectedGroupoid(n, h) => write!(f, "connected-groupoid({n},{h})"),
            FixtureSpec::DiscreteSpace(n) => write!(f, "discrete-space({n})"),
        }
    }
}

impl FixtureSpec {
    /// Parses a fixture name and its positional parameters.
    pub fn parse(name: &str, params: &[String]) -> Result<Self, FixtureError> {
        let number = |i: usize| -> Result<usize, FixtureError> {
            let raw = params.get(i).ok_or_else(|| {
                FixtureError::BadParameter(format!("{name} needs parameter #{}", i + 1))
            })?;
            raw.parse().map_err(|_| {
                FixtureError::BadParameter(format!("`{raw}` is not a non-negative integer"))
            })
        };
        let expect = |count: usize| -> Result<(), FixtureError> {
            if params.len() == count {
                Ok(())
            } else {
                Err(FixtureError::BadParameter(format!(
                    "{name} takes {count} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let spec = match name {
            "path" => {
                expect(1)?;
                FixtureSpec::Path(number(0)?)
            }
            "zline-circles" => {
                expect(1)?;
                FixtureSpec::ZlineCircles(number(0)?)
            }
            "zline-arcs" => {
                expect(1)?;
                FixtureSpec::ZlineArcs(number(0)?)
            }
            "delta-graph" => {
                expect(0)?;
                FixtureSpec::DeltaGraph
            }
            "cyclic" => {
                expect(1)?;
                FixtureSpec::Cyclic(number(0)?)
            }
            "pair-groupoid" => {
                expect(1)?;
                FixtureSpec::PairGroupoid(number(0)?)
            }
            "connected-groupoid" => {
                expect(2)?;
                FixtureSpec::ConnectedGroupoid(number(0)?, params[1].clone())
            }
            "discrete-space" => {
                expect(1)?;
                FixtureSpec::DiscreteSpace(number(0)?)
            }
            other => return Err(FixtureError::UnknownFixture(other.to_string())),
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
pub enum Generated {
    Structure(FiniteStructure),
    System(InverseSystem),
}

fn bounded(n: usize, min: usize) -> Result<usize, FixtureError> {
    if n < min || n > MAX_PARAMETER {
        Err(FixtureError::BadParameter(format!(
            "parameter {n} outside {min}..={MAX_PARAMETER}"
        )))
    } else {
        Ok(n)
    }
}

pub fn generate(spec: &FixtureSpec) -> Result<Generated, FixtureError> {
    use Generated::{Structure, System};
    Ok(match spec {
        FixtureSpec::Path(n) => Structure(path(bounded(*n, 0)?)),
        FixtureSpec::ZlineCircles(n) => System(zline::circles(bounded(*n, 1)?)),
        FixtureSpec::ZlineArcs(n) => System(zline::arcs(bounded(*n, 0)?)),
        FixtureSpec::DeltaGraph => Structure(delta_graph()),
        FixtureSpec::Cyclic(n) => Structure(cyclic(bounded(*n, 1)?)),
        FixtureSpec::PairGroupoid(n) => Structure(pair_groupoid(bounded(*n, 1)?)),
        FixtureSpec::ConnectedGroupoid(k, h) => {
            let table = GroupTable::by_name(h)
                .ok_or_else(|| FixtureError::BadParameter(format!("unknown group `{h}`")))?;
            Structure(connected_groupoid(bounded(*k, 1)?, &table))
        }
        FixtureSpec::DiscreteSpace(n) => Structure(discrete_space(bounded(*n, 1)?)),
    })
}
