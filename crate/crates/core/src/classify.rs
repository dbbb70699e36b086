//! Surface versus exceptional classification, and the structural tests it
//! rests on: subquiver scans against reference classes, the E6
//! characterization for six-vertex quivers, and the basic-radical
//! criterion for surface quivers.

use std::fmt;

use serde::Serialize;

use crate::canon::{self, CanonMode};
use crate::catalog::{self, Family, ReferenceCatalog};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mutclass::{self, Caps, ClassStatus, FiniteVerdict, InfiniteEvidence};
use crate::patterns::{self, InfiniteCertificate, PatternKind, SubquiverPattern};
use crate::quiver::{Quiver, VertexSet};
use crate::vector::IntVector;

/// Largest number of vertex subsets a single scan may visit by default.
pub const DEFAULT_SUBSET_BUDGET: u128 = 2_000_000;

/// Class members checked for the expected subquiver after an exceptional
/// verdict, besides the input itself.
const CROSS_CHECK_SAMPLE: usize = 16;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic
/// order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// Whether `q1` and `q2` are mutation-equivalent. One class must be finite
/// and enumerable under `caps`.
pub fn mutation_equivalent(q1: &Quiver, q2: &Quiver, caps: Caps) -> Result<bool> {
    if q1.n() != q2.n() {
        return Ok(false);
    }
    let f1 = canon::canonical_form(q1)?;
    let f2 = canon::canonical_form(q2)?;
    if f1 == f2 {
        return Ok(true);
    }
    let first = mutclass::enumerate_class(q1, caps)?;
    if first.is_complete() {
        return Ok(first.contains(&f2));
    }
    let second = mutclass::enumerate_class(q2, caps)?;
    match (first.status, second.status) {
        (_, ClassStatus::Complete) => Ok(second.contains(&f1)),
        (ClassStatus::AbortedWeight, ClassStatus::AbortedWeight) => Err(Error::Unknown(
            "both quivers are of infinite mutation type".into(),
        )),
        _ => Err(Error::Unknown(format!(
            "mutation classes exceed {} members",
            caps.max_size
        ))),
    }
}

/// First vertex subset, in lexicographic order, whose induced subquiver is
/// mutation-equivalent to the named reference seed.
pub fn contains_class_subquiver(
    q: &Quiver,
    target: &str,
    catalog: &ReferenceCatalog,
) -> Result<Option<VertexSet>> {
    contains_class_subquiver_with_budget(q, target, catalog, DEFAULT_SUBSET_BUDGET)
}

pub fn contains_class_subquiver_with_budget(
    q: &Quiver,
    target: &str,
    catalog: &ReferenceCatalog,
    budget: u128,
) -> Result<Option<VertexSet>> {
    let k = catalog::seed(target)?.n();
    let n = q.n();
    if k > n {
        return Ok(None);
    }
    let needed = binomial(n, k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let class = catalog.class(target)?;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if q.is_connected_on(&subset) {
            let sub = q.induced_subquiver(&subset)?.quiver;
            if class.contains(&canon::canonical_form_with(&sub, CanonMode::Refinement)?) {
                return Ok(Some(subset));
            }
        }
        if !next_combination(&mut subset, n) {
            return Ok(None);
        }
    }
}

/// The four conditions of the E6 characterization for six-vertex quivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct E6Report {
    /// Mutation-equivalent to E6.
    pub a: bool,
    /// Has a basic subquiver and nonsingular exchange matrix.
    pub b: bool,
    /// Has a basic subquiver and nonsingular reduction mod 2.
    pub c: bool,
    /// Has a basic subquiver, every induced cycle has an outside vertex
    /// meeting it exactly once, and every non-adjacent pair is separated by
    /// some vertex adjacent to exactly one of the two.
    pub d: bool,
}

/// Checks the hypotheses (simply-laced, connected, six vertices, no
/// non-oriented induced cycle) and evaluates the four conditions.
pub fn e6_characterization(q: &Quiver, catalog: &ReferenceCatalog) -> Result<E6Report> {
    if q.n() != 6 {
        return Err(Error::Hypothesis(format!("needs 6 vertices, got {}", q.n())));
    }
    if !q.is_simply_laced() {
        return Err(Error::Hypothesis("quiver must be simply-laced".into()));
    }
    if !q.is_connected() {
        return Err(Error::Hypothesis("quiver must be connected".into()));
    }
    let cycles = patterns::cycles(q)?;
    if cycles.iter().any(|c| !c.oriented) {
        return Err(Error::Hypothesis(
            "quiver must not contain a non-oriented induced cycle".into(),
        ));
    }
    let form = canon::canonical_form(q)?;
    let a = catalog.class("E6")?.contains(&form);
    let basic = patterns::has_basic_subquiver(q)?;
    let b = basic && linalg::corank_z(q) == 0;
    let c = basic && linalg::corank_gf2(q) == 0;

    let n = q.n();
    let cycles_separated = cycles.iter().all(|cycle| {
        let members = cycle.vertex_set();
        (0..n).any(|v| {
            !members.contains(&v) && members.iter().filter(|&&m| q.adjacent(v, m)).count() == 1
        })
    });
    let pairs_separated = (0..n).all(|x| {
        (x + 1..n).all(|y| {
            q.adjacent(x, y) || (0..n).any(|v| q.adjacent(v, x) != q.adjacent(v, y))
        })
    });
    let d = basic && cycles_separated && pairs_separated;
    Ok(E6Report { a, b, c, d })
}

/// Outcome of the radical search inside one basic subquiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicRadicalEvidence {
    pub subquiver: SubquiverPattern,
    /// The chosen radical vector with coordinates in {-1, 0, 1}.
    pub vector: Option<IntVector>,
    /// For oriented cycles of length at least 5: whether the indicator of
    /// the cycle is radical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_ones_radical: Option<bool>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub holds: bool,
    pub basic_subquivers: Vec<BasicRadicalEvidence>,
}

/// Whether the induced subquiver on `set` is a cycle.
fn is_induced_cycle(q: &Quiver, set: &[usize]) -> bool {
    set.len() >= 3
        && set
            .iter()
            .all(|&v| set.iter().filter(|&&w| q.adjacent(v, w)).count() == 2)
        && q.is_connected_on(set)
}

/// Smallest support (lexicographically, as a sorted vertex list) inside
/// `s` that is a pair or an induced cycle and carries a radical vector with
/// coordinates ±1; among sign patterns the first coordinate is +1 and +1
/// precedes -1.
fn search_radical(q: &Quiver, s: &[usize]) -> Result<Option<IntVector>> {
    let m = s.len();
    let mut supports: Vec<Vec<usize>> = (1u64..1 << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect::<Vec<_>>())
        .filter(|t: &Vec<usize>| t.len() == 2 || is_induced_cycle(q, t))
        .collect();
    supports.sort();
    for t in supports {
        let free = t.len() - 1;
        for signs in 0u64..1 << free {
            let mut coords = vec![num_bigint::BigInt::from(0); q.n()];
            coords[t[0]] = 1.into();
            for (i, &v) in t[1..].iter().enumerate() {
                coords[v] = if signs >> (free - 1 - i) & 1 == 0 { 1 } else { -1 }.into();
            }
            let u = IntVector::new(coords);
            if q.is_radical(&u)? {
                return Ok(Some(u));
            }
        }
    }
    Ok(None)
}

/// The basic-radical criterion for surface quivers. Verifies first that `q`
/// is connected, has at least three vertices and is of finite mutation
/// type.
pub fn surface_by_basic_radical(q: &Quiver) -> Result<SurfaceReport> {
    if q.n() < 3 {
        return Err(Error::Hypothesis("needs at least 3 vertices".into()));
    }
    if !q.is_connected() {
        return Err(Error::Hypothesis("quiver must be connected".into()));
    }
    if !mutclass::is_finite_mutation_type(q)?.is_finite() {
        return Err(Error::NotFiniteType);
    }
    surface_by_basic_radical_unchecked(q)
}

/// The criterion without the finite-type verification.
pub fn surface_by_basic_radical_unchecked(q: &Quiver) -> Result<SurfaceReport> {
    let mut basic_subquivers = Vec::new();
    for pattern in patterns::basic_subquivers(q)? {
        let vector = search_radical(q, &pattern.vertices)?;
        let all_ones_radical = (pattern.kind == PatternKind::BasicOrientedCycle
            && pattern.vertices.len() >= 5)
            .then(|| q.is_radical(&IntVector::indicator(q.n(), &pattern.vertices)))
            .transpose()?;
        let passed = vector.is_some() && all_ones_radical != Some(false);
        basic_subquivers.push(BasicRadicalEvidence {
            subquiver: pattern,
            vector,
            all_ones_radical,
            passed,
        });
    }
    Ok(SurfaceReport {
        holds: basic_subquivers.iter().all(|e| e.passed),
        basic_subquivers,
    })
}

/// True unless `q` contains subquivers from both the E6 and the X6 class.
pub fn e6_x6_exclusion(q: &Quiver, catalog: &ReferenceCatalog) -> Result<bool> {
    let e6 = contains_class_subquiver(q, "E6", catalog)?.is_some();
    let x6 = contains_class_subquiver(q, "X6", catalog)?.is_some();
    Ok(!(e6 && x6))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "name")]
pub enum Verdict {
    Infinite,
    Surface,
    ExceptionalE(String),
    ExceptionalX(String),
    TooSmall,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Infinite => f.write_str("Infinite"),
            Verdict::Surface => f.write_str("Surface"),
            Verdict::ExceptionalE(name) => write!(f, "ExceptionalE({name})"),
            Verdict::ExceptionalX(name) => write!(f, "ExceptionalX({name})"),
            Verdict::TooSmall => f.write_str("TooSmall"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    TooSmall {
        n: usize,
    },
    Certificate {
        certificate: InfiniteCertificate,
    },
    WeightWitness {
        quiver: Quiver,
    },
    ClassEnumerated {
        size: usize,
    },
    ReferenceMatch {
        name: String,
        class_size: usize,
    },
    NoReferenceMatch {
        checked: Vec<String>,
    },
    SubquiverScan {
        target: String,
        members_checked: usize,
        #[serde(serialize_with = "crate::format::one_based_opt")]
        found: Option<VertexSet>,
    },
    BasicRadical {
        holds: bool,
        basic_subquivers: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

/// Classifies a connected quiver as too small, infinite, surface type or
/// one of the exceptional types, with supporting evidence. Internal
/// consistency checks that fail are reported as
/// [`Error::TheoremViolation`].
pub fn classify_quiver(q: &Quiver, catalog: &ReferenceCatalog) -> Result<Classification> {
    classify_quiver_with(q, catalog, Caps::default())
}

pub fn classify_quiver_with(
    q: &Quiver,
    catalog: &ReferenceCatalog,
    caps: Caps,
) -> Result<Classification> {
    if !q.is_connected() {
        return Err(Error::Hypothesis("quiver must be connected".into()));
    }
    let n = q.n();
    if n <= 2 {
        return Ok(Classification {
            verdict: Verdict::TooSmall,
            evidence: vec![Evidence::TooSmall { n }],
        });
    }
    if n <= patterns::MAX_CYCLE_VERTICES {
        if let Some(certificate) = patterns::infinite_certificate(q)? {
            return Ok(Classification {
                verdict: Verdict::Infinite,
                evidence: vec![Evidence::Certificate { certificate }],
            });
        }
    }

    let form = canon::canonical_form(q)?;
    let mut checked = Vec::new();
    for name in catalog::EXCEPTIONAL {
        if catalog::seed(name)?.n() != n {
            continue;
        }
        checked.push(name.to_owned());
        let class = catalog.class(name)?;
        if class.contains(&form) {
            return exceptional(q, name, &class, catalog);
        }
    }

    let class = match mutclass::is_finite_mutation_type_with(q, caps)? {
        FiniteVerdict::Finite(class) => class,
        FiniteVerdict::Infinite(InfiniteEvidence::Certificate(certificate)) => {
            return Ok(Classification {
                verdict: Verdict::Infinite,
                evidence: vec![Evidence::Certificate { certificate }],
            })
        }
        FiniteVerdict::Infinite(InfiniteEvidence::WeightWitness(quiver)) => {
            return Ok(Classification {
                verdict: Verdict::Infinite,
                evidence: vec![Evidence::WeightWitness { quiver }],
            })
        }
    };

    let mut evidence = vec![
        Evidence::ClassEnumerated { size: class.size() },
        Evidence::NoReferenceMatch { checked },
    ];
    for target in ["E6", "X6"] {
        let found = contains_class_subquiver(q, target, catalog)?;
        if let Some(set) = &found {
            return Err(Error::TheoremViolation(format!(
                "surface-type quiver contains a {target}-class subquiver on {:?}",
                set.iter().map(|v| v + 1).collect::<Vec<_>>()
            )));
        }
        evidence.push(Evidence::SubquiverScan {
            target: target.to_owned(),
            members_checked: 1,
            found,
        });
    }
    let report = surface_by_basic_radical_unchecked(q)?;
    if !report.holds {
        return Err(Error::TheoremViolation(
            "surface-type quiver fails the basic-radical criterion".into(),
        ));
    }
    evidence.push(Evidence::BasicRadical {
        holds: true,
        basic_subquivers: report.basic_subquivers.len(),
    });
    Ok(Classification {
        verdict: Verdict::Surface,
        evidence,
    })
}

fn exceptional(
    q: &Quiver,
    name: &str,
    class: &mutclass::MutationClass,
    catalog: &ReferenceCatalog,
) -> Result<Classification> {
    let family = catalog::family(name).expect("exceptional names have a family");
    let target = match family {
        Family::E => "E6",
        Family::X => "X6",
    };
    let reps = class.representatives();
    let step = reps.len().div_ceil(CROSS_CHECK_SAMPLE).max(1);
    let sample = std::iter::once(q).chain(reps.iter().step_by(step));
    let mut members_checked = 0;
    let mut first = None;
    for member in sample {
        match contains_class_subquiver(member, target, catalog)? {
            Some(set) => {
                first.get_or_insert(set);
            }
            None => {
                return Err(Error::TheoremViolation(format!(
                    "a member of the {name} class has no {target}-class subquiver"
                )))
            }
        }
        members_checked += 1;
    }
    let verdict = match family {
        Family::E => Verdict::ExceptionalE(name.to_owned()),
        Family::X => Verdict::ExceptionalX(name.to_owned()),
    };
    Ok(Classification {
        verdict,
        evidence: vec![
            Evidence::ClassEnumerated { size: class.size() },
            Evidence::ReferenceMatch {
                name: name.to_owned(),
                class_size: class.size(),
            },
            Evidence::SubquiverScan {
                target: target.to_owned(),
                members_checked,
                found: first,
            },
        ],
    })
}
