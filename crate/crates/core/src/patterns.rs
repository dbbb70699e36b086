//! Structural subquivers: double edges, induced cycles, basic subquivers,
//! indicator-vector radical checks, and certificates of infinite mutation
//! type.
//!
//! A cycle is always an induced (chordless) cycle of the underlying graph
//! with at least three vertices. It is oriented when every edge runs the
//! same way around it.

use std::collections::VecDeque;
use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, gf2_span_dim};
use crate::quiver::{Quiver, VertexSet};
use crate::vector::{Gf2Vector, IntVector};

/// Cycle enumeration refuses quivers larger than this.
pub const MAX_CYCLE_VERTICES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PatternKind {
    DoubleEdge,
    OrientedCycle,
    NonOrientedCycle,
    BasicD4,
    BasicAdjacentTriangles,
    BasicOrientedCycle,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PatternKind::DoubleEdge => "double edge",
            PatternKind::OrientedCycle => "oriented cycle",
            PatternKind::NonOrientedCycle => "non-oriented cycle",
            PatternKind::BasicD4 => "basic D4",
            PatternKind::BasicAdjacentTriangles => "basic adjacent triangles",
            PatternKind::BasicOrientedCycle => "basic oriented cycle",
        };
        f.write_str(s)
    }
}

/// A detected structure. `vertices` is sorted; `detail` describes the
/// layout with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubquiverPattern {
    pub kind: PatternKind,
    #[serde(serialize_with = "crate::format::one_based")]
    pub vertices: VertexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// An induced cycle in cyclic order, starting at its smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    #[serde(serialize_with = "crate::format::one_based")]
    pub order: Vec<usize>,
    pub oriented: bool,
    pub simply_laced: bool,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        let mut v = self.order.clone();
        v.sort_unstable();
        v
    }

    fn new(q: &Quiver, order: Vec<usize>) -> Self {
        let m = order.len();
        let signs: Vec<bool> = (0..m)
            .map(|i| q.entry(order[i], order[(i + 1) % m]).is_positive())
            .collect();
        let oriented = signs.iter().all(|&s| s) || signs.iter().all(|&s| !s);
        let simply_laced = (0..m).all(|i| q.weight(order[i], order[(i + 1) % m]) == 1);
        Cycle {
            order,
            oriented,
            simply_laced,
        }
    }

    fn describe(&self, q: &Quiver) -> String {
        let m = self.order.len();
        let mut s = String::new();
        for i in 0..m {
            let (a, b) = (self.order[i], self.order[(i + 1) % m]);
            if i == 0 {
                s.push_str(&(a + 1).to_string());
            }
            let w = q.weight(a, b);
            let arrow = if q.entry(a, b).is_positive() { "->" } else { "<-" };
            if w == 1 {
                s.push_str(arrow);
            } else {
                s.push_str(&format!("{arrow}[{w}]"));
            }
            s.push_str(&(b + 1).to_string());
        }
        s
    }

    pub fn to_pattern(&self, q: &Quiver) -> SubquiverPattern {
        SubquiverPattern {
            kind: if self.oriented {
                PatternKind::OrientedCycle
            } else {
                PatternKind::NonOrientedCycle
            },
            vertices: self.vertex_set(),
            detail: Some(self.describe(q)),
        }
    }
}

/// All pairs joined by exactly two arrows.
pub fn double_edges(q: &Quiver) -> Vec<SubquiverPattern> {
    let n = q.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if q.weight(i, j) == 2 {
                let (t, h) = if q.entry(i, j).is_positive() { (i, j) } else { (j, i) };
                out.push(SubquiverPattern {
                    kind: PatternKind::DoubleEdge,
                    vertices: vec![i, j],
                    detail: Some(format!("{}=>{}", t + 1, h + 1)),
                });
            }
        }
    }
    out
}

fn check_cycle_limit(q: &Quiver) -> Result<()> {
    if q.n() > MAX_CYCLE_VERTICES {
        return Err(Error::TooManyVertices {
            operation: "induced cycle enumeration",
            limit: MAX_CYCLE_VERTICES,
            n: q.n(),
        });
    }
    Ok(())
}

/// Every induced cycle, each reported once.
///
/// Paths grow from their smallest vertex `s` through larger vertices only,
/// rejecting any vertex with a chord back into the path; a path closes when
/// its end is adjacent to `s`, and is kept in the direction whose second
/// vertex is smaller than its last.
pub fn cycles(q: &Quiver) -> Result<Vec<Cycle>> {
    check_cycle_limit(q)?;
    let n = q.n();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| q.adjacent(i, j)).collect())
        .collect();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    for s in 0..n {
        for p1 in s + 1..n {
            if adj[s][p1] {
                path.clear();
                path.push(s);
                path.push(p1);
                extend_chordless(q, &adj, &mut path, &mut out);
            }
        }
    }
    Ok(out)
}

fn extend_chordless(q: &Quiver, adj: &[Vec<bool>], path: &mut Vec<usize>, out: &mut Vec<Cycle>) {
    let s = path[0];
    let last = *path.last().unwrap();
    let end = path.len() - 1;
    for w in s + 1..adj.len() {
        if !adj[last][w] || path.contains(&w) || path[1..end].iter().any(|&p| adj[p][w]) {
            continue;
        }
        if adj[s][w] {
            if path[1] < w {
                let mut order = path.clone();
                order.push(w);
                out.push(Cycle::new(q, order));
            }
        } else {
            path.push(w);
            extend_chordless(q, adj, path, out);
            path.pop();
        }
    }
}

/// Induced cycles as patterns.
pub fn induced_cycles(q: &Quiver) -> Result<Vec<SubquiverPattern>> {
    Ok(cycles(q)?.iter().map(|c| c.to_pattern(q)).collect())
}

fn oriented_triangle(q: &Quiver, a: usize, b: usize, c: usize) -> bool {
    let s = [q.entry(a, b), q.entry(b, c), q.entry(c, a)];
    s.iter().all(|e| e.is_positive()) || s.iter().all(|e| e.is_negative())
}

/// Basic subquivers: a D4 tree (any orientation), two oriented simply-laced
/// triangles sharing an edge, or an oriented simply-laced cycle on at least
/// four vertices.
pub fn basic_subquivers(q: &Quiver) -> Result<Vec<SubquiverPattern>> {
    let cycle_list = cycles(q)?;
    let n = q.n();
    let mut out = Vec::new();

    for c in 0..n {
        let leaves: Vec<usize> = (0..n).filter(|&v| q.weight(c, v) == 1).collect();
        for (x, &a) in leaves.iter().enumerate() {
            for (y, &b) in leaves.iter().enumerate().skip(x + 1) {
                if q.adjacent(a, b) {
                    continue;
                }
                for &d in &leaves[y + 1..] {
                    if q.adjacent(a, d) || q.adjacent(b, d) {
                        continue;
                    }
                    let mut vs = vec![c, a, b, d];
                    vs.sort_unstable();
                    out.push(SubquiverPattern {
                        kind: PatternKind::BasicD4,
                        vertices: vs,
                        detail: Some(format!("center {}", c + 1)),
                    });
                }
            }
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            if q.weight(a, b) != 1 {
                continue;
            }
            let apexes: Vec<usize> = (0..n)
                .filter(|&x| {
                    q.weight(a, x) == 1 && q.weight(b, x) == 1 && oriented_triangle(q, a, b, x)
                })
                .collect();
            for (i, &x) in apexes.iter().enumerate() {
                for &y in &apexes[i + 1..] {
                    if q.adjacent(x, y) {
                        continue;
                    }
                    let mut vs = vec![a, b, x, y];
                    vs.sort_unstable();
                    out.push(SubquiverPattern {
                        kind: PatternKind::BasicAdjacentTriangles,
                        vertices: vs,
                        detail: Some(format!("shared edge {}-{}", a + 1, b + 1)),
                    });
                }
            }
        }
    }

    for c in cycle_list
        .iter()
        .filter(|c| c.oriented && c.simply_laced && c.len() >= 4)
    {
        out.push(SubquiverPattern {
            kind: PatternKind::BasicOrientedCycle,
            vertices: c.vertex_set(),
            detail: Some(c.describe(q)),
        });
    }
    Ok(out)
}

pub fn has_basic_subquiver(q: &Quiver) -> Result<bool> {
    Ok(!basic_subquivers(q)?.is_empty())
}

fn check_range(q: &Quiver, set: &[usize]) -> Result<()> {
    for &v in set {
        if v >= q.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: q.n() });
        }
    }
    Ok(())
}

/// Whether the indicator vector of `set` is radical for `B`.
///
/// Decided vertex by vertex: for every `j`, the weighted count of arrows
/// from `j` into the set must equal the weighted count from the set into
/// `j`. The empty set gives the zero vector, which is radical.
pub fn radical_support_check_z(q: &Quiver, set: &[usize]) -> Result<bool> {
    check_range(q, set)?;
    let balanced = (0..q.n()).all(|j| {
        let (mut leaving, mut entering) = (num_bigint::BigInt::default(), num_bigint::BigInt::default());
        for &s in set {
            let e = q.entry(j, s);
            if e.is_positive() {
                leaving += e;
            } else if e.is_negative() {
                entering -= e;
            }
        }
        leaving == entering
    });
    debug_assert_eq!(
        balanced,
        q.is_radical(&IntVector::indicator(q.n(), set)).unwrap()
    );
    Ok(balanced)
}

/// Whether the indicator vector of `set` is radical for `B` mod 2: every
/// vertex meets the set with even total weight.
pub fn radical_support_check_gf2(q: &Quiver, set: &[usize]) -> Result<bool> {
    check_range(q, set)?;
    let even = (0..q.n()).all(|j| {
        let total: num_bigint::BigInt = set.iter().map(|&s| q.entry(j, s).abs()).sum();
        num_integer::Integer::is_even(&total)
    });
    debug_assert_eq!(
        even,
        linalg::reduce_mod2(q)
            .apply(&Gf2Vector::indicator(q.n(), set))
            .is_zero()
    );
    Ok(even)
}

/// GF(2) radical vectors whose support is two vertices or an induced cycle.
/// Pairs come first in lexicographic order, then cycles in enumeration
/// order.
pub fn basic_radical_vectors(q: &Quiver) -> Result<Vec<Gf2Vector>> {
    let n = q.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if radical_support_check_gf2(q, &[i, j])? {
                out.push(Gf2Vector::indicator(n, &[i, j]));
            }
        }
    }
    for c in cycles(q)? {
        if radical_support_check_gf2(q, &c.order)? {
            out.push(Gf2Vector::indicator(n, &c.order));
        }
    }
    Ok(out)
}

/// Dimensions of the span of basic radical vectors, of the full GF(2)
/// radical, and of their quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct V00Dims {
    pub dim_v00: usize,
    pub dim_v0: usize,
    pub quotient_dim: usize,
}

pub fn v00(q: &Quiver) -> Result<V00Dims> {
    let basic = basic_radical_vectors(q)?;
    let dim_v00 = gf2_span_dim(&basic)?;
    let dim_v0 = linalg::corank_gf2(q);
    debug_assert!(dim_v00 <= dim_v0);
    Ok(V00Dims {
        dim_v00,
        dim_v0,
        quotient_dim: dim_v0 - dim_v00,
    })
}

/// Which sufficient condition for infinite mutation type was met.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateClause {
    /// An edge of weight at least 3 inside a connected piece with three or
    /// more vertices.
    WeightGE3,
    /// A connected three-vertex subquiver with a double edge that is not an
    /// oriented triangle with weights 2,1,1 or 2,2,2.
    ThreeVertexNonAdmissible,
    /// A non-oriented cycle that is not simply-laced.
    NonSimplyLacedNonOrientedCycle,
    /// In a simply-laced piece: a vertex meeting a non-oriented cycle in an
    /// odd number of vertices, or an oriented cycle in an odd number ≥ 3.
    OddAttachment,
    /// A connected subquiver without oriented cycles holding two
    /// non-oriented cycles.
    TwoNonOrientedCyclesNoOriented,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteCertificate {
    pub clause: CertificateClause,
    /// Vertex sets involved: the witness subquiver first, then its parts.
    #[serde(serialize_with = "crate::format::one_based_sets")]
    pub witness: Vec<VertexSet>,
    pub detail: String,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Scans for a certificate of infinite mutation type, trying the clauses in
/// order and returning the first hit. `None` proves nothing.
pub fn infinite_certificate(q: &Quiver) -> Result<Option<InfiniteCertificate>> {
    let n = q.n();
    if n < 3 {
        return Ok(None);
    }

    for i in 0..n {
        for j in i + 1..n {
            if q.weight(i, j) < 3 {
                continue;
            }
            if let Some(k) = (0..n).find(|&k| k != i && k != j && (q.adjacent(i, k) || q.adjacent(j, k))) {
                return Ok(Some(InfiniteCertificate {
                    clause: CertificateClause::WeightGE3,
                    witness: vec![sorted(vec![i, j, k])],
                    detail: format!(
                        "edge {}-{} has weight {}",
                        i + 1,
                        j + 1,
                        q.entry(i, j).abs()
                    ),
                }));
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            if q.weight(i, j) != 2 {
                continue;
            }
            for k in 0..n {
                if k == i || k == j || !(q.adjacent(i, k) || q.adjacent(j, k)) {
                    continue;
                }
                let admissible = oriented_triangle(q, i, j, k) && {
                    let (a, b) = (q.weight(i, k), q.weight(j, k));
                    (a == 1 && b == 1) || (a == 2 && b == 2)
                };
                if !admissible {
                    return Ok(Some(InfiniteCertificate {
                        clause: CertificateClause::ThreeVertexNonAdmissible,
                        witness: vec![sorted(vec![i, j, k])],
                        detail: format!(
                            "three-vertex subquiver on {{{}, {}, {}}} with a double edge",
                            i + 1,
                            j + 1,
                            k + 1
                        ),
                    }));
                }
            }
        }
    }

    let cycle_list = cycles(q)?;

    if let Some(c) = cycle_list.iter().find(|c| !c.oriented && !c.simply_laced) {
        return Ok(Some(InfiniteCertificate {
            clause: CertificateClause::NonSimplyLacedNonOrientedCycle,
            witness: vec![c.vertex_set()],
            detail: format!("cycle {}", c.describe(q)),
        }));
    }

    for c in cycle_list.iter().filter(|c| c.simply_laced) {
        for k in 0..n {
            if c.order.contains(&k) {
                continue;
            }
            let touching: Vec<usize> = c.order.iter().copied().filter(|&v| q.adjacent(k, v)).collect();
            if touching.iter().any(|&v| q.weight(k, v) != 1) {
                continue;
            }
            let m = touching.len();
            let hit = if c.oriented { m % 2 == 1 && m >= 3 } else { m % 2 == 1 };
            if hit {
                let mut all = c.order.clone();
                all.push(k);
                return Ok(Some(InfiniteCertificate {
                    clause: CertificateClause::OddAttachment,
                    witness: vec![sorted(all), c.vertex_set(), vec![k]],
                    detail: format!(
                        "vertex {} meets the {} cycle {} in {} vertices",
                        k + 1,
                        if c.oriented { "oriented" } else { "non-oriented" },
                        c.describe(q),
                        m
                    ),
                }));
            }
        }
    }

    let non_oriented: Vec<&Cycle> = cycle_list.iter().filter(|c| !c.oriented).collect();
    for (x, c1) in non_oriented.iter().enumerate() {
        for c2 in &non_oriented[x + 1..] {
            let mut union = c1.order.clone();
            union.extend(&c2.order);
            let mut union = sorted(union);
            if !q.is_connected_on(&union) {
                match connecting_path(q, &union, &c1.order, &c2.order) {
                    Some(path) => {
                        union.extend(path);
                        union = sorted(union);
                    }
                    None => continue,
                }
            }
            if !q.has_directed_cycle_on(&union) {
                return Ok(Some(InfiniteCertificate {
                    clause: CertificateClause::TwoNonOrientedCyclesNoOriented,
                    witness: vec![union, c1.vertex_set(), c2.vertex_set()],
                    detail: format!(
                        "cycles {} and {} in a subquiver without oriented cycles",
                        c1.describe(q),
                        c2.describe(q)
                    ),
                }));
            }
        }
    }

    Ok(None)
}

/// Interior vertices of a shortest path from `from` to `to`, avoiding
/// vertices already in `taken`.
fn connecting_path(q: &Quiver, taken: &[usize], from: &[usize], to: &[usize]) -> Option<Vec<usize>> {
    let n = q.n();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for u in q.neighbors(v) {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            prev[u] = v;
            if to.contains(&u) {
                let mut path = Vec::new();
                let mut cur = v;
                while !from.contains(&cur) {
                    path.push(cur);
                    cur = prev[cur];
                }
                return Some(path);
            }
            if !taken.contains(&u) {
                queue.push_back(u);
            }
        }
    }
    None
}
