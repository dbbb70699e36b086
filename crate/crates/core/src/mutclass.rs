//! Mutation classes up to relabeling: breadth-first enumeration with
//! deduplication by canonical form, and the finite-mutation-type decision.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{self, CanonMode, CanonicalForm};
use crate::error::{Error, Result};
use crate::format;
use crate::patterns::{self, InfiniteCertificate};
use crate::quiver::Quiver;

/// Limits on an enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    /// Stop with [`ClassStatus::AbortedCap`] rather than exceed this many
    /// members.
    pub max_size: usize,
    /// Stop with [`ClassStatus::AbortedWeight`] as soon as an edge of at
    /// least this weight appears inside a connected piece with three or
    /// more vertices.
    #[serde(default = "default_weight_abort")]
    pub weight_abort: u64,
}

fn default_weight_abort() -> u64 {
    3
}

/// Keeps every intermediate product inside `i64`.
const MAX_WEIGHT_ABORT: u64 = 1 << 31;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_size: 100_000,
            weight_abort: 3,
        }
    }
}

impl Caps {
    pub fn with_max_size(max_size: usize) -> Self {
        Caps {
            max_size,
            ..Caps::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_size == 0 {
            return Err(Error::InvalidCaps("max_size must be positive".into()));
        }
        if self.weight_abort == 0 || self.weight_abort > MAX_WEIGHT_ABORT {
            return Err(Error::InvalidCaps(format!(
                "weight_abort must be in 1..={MAX_WEIGHT_ABORT}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumerateOptions {
    pub caps: Caps,
    /// Deduplicate labeled quivers instead of isomorphism classes.
    pub labeled: bool,
    /// Expand each BFS level on the rayon pool. The result does not depend
    /// on scheduling.
    pub parallel: bool,
    pub canon_mode: CanonMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassStatus {
    Complete,
    AbortedWeight,
    AbortedCap,
}

/// A mutation class, or the part of it explored before a cap was hit.
#[derive(Clone, Debug)]
pub struct MutationClass {
    /// Sorted.
    members: Vec<CanonicalForm>,
    /// `representatives[i]` is `members[i]` in canonical vertex order.
    representatives: Vec<Quiver>,
    pub status: ClassStatus,
    /// The first quiver met with an edge of weight at least `weight_abort`.
    pub witness: Option<Quiver>,
    /// Whether the seed was connected.
    pub connected: bool,
    /// Number of `(member, vertex)` mutations examined.
    pub mutations_examined: usize,
}

impl MutationClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[CanonicalForm] {
        &self.members
    }

    pub fn representatives(&self) -> &[Quiver] {
        &self.representatives
    }

    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.members.binary_search(form).is_ok()
    }

    pub fn position(&self, form: &CanonicalForm) -> Option<usize> {
        self.members.binary_search(form).ok()
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClassStatus::Complete
    }

    /// Rebuilds a class from stored representatives, recomputing forms.
    pub fn from_representatives(quivers: Vec<Quiver>, status: ClassStatus) -> Result<Self> {
        let connected = quivers.first().is_none_or(Quiver::is_connected);
        let mut pairs = quivers
            .into_iter()
            .map(|q| {
                let (rep, form) = canon::canonical_quiver(&q, CanonMode::Refinement)?;
                Ok((form, rep))
            })
            .collect::<Result<Vec<_>>>()?;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs.dedup_by(|a, b| a.0 == b.0);
        let (members, representatives) = pairs.into_iter().unzip();
        Ok(MutationClass {
            members,
            representatives,
            status,
            witness: None,
            connected,
            mutations_examined: 0,
        })
    }
}

/// Row-major `i64` exchange matrix used inside the search.
#[derive(Clone)]
struct Small {
    n: usize,
    b: Vec<i64>,
}

impl Small {
    fn from_quiver(q: &Quiver) -> Option<Small> {
        let b = q.matrix().into_iter().flatten().map(|e| e.to_i64()).collect::<Option<Vec<_>>>()?;
        Some(Small { n: q.n(), b })
    }

    fn to_quiver(&self) -> Quiver {
        Quiver::from_raw(self.n, self.b.iter().map(|&e| BigInt::from(e)).collect())
    }

    fn mutate(&self, k: usize) -> Small {
        let n = self.n;
        let mut b = self.b.clone();
        for i in 0..n {
            let bik = self.b[i * n + k];
            b[i * n + k] = -bik;
            b[k * n + i] = -self.b[k * n + i];
            if bik == 0 || i == k {
                continue;
            }
            for j in 0..n {
                if j == k {
                    continue;
                }
                let bkj = self.b[k * n + j];
                if bik > 0 && bkj > 0 {
                    b[i * n + j] += bik * bkj;
                } else if bik < 0 && bkj < 0 {
                    b[i * n + j] -= bik * bkj;
                }
            }
        }
        Small { n, b }
    }

    fn permuted(&self, order: &[usize]) -> Small {
        let n = self.n;
        let mut b = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = self.b[order[i] * n + order[j]];
            }
        }
        Small { n, b }
    }

    /// Whether some edge reaches `limit` inside a component flagged in
    /// `big_component`.
    fn heavy(&self, limit: u64, big_component: &[bool]) -> bool {
        let n = self.n;
        (0..n).any(|i| {
            big_component[i] && (i + 1..n).any(|j| self.b[i * n + j].unsigned_abs() >= limit)
        })
    }
}

struct Expanded {
    heavy: Option<Small>,
    children: Vec<(CanonicalForm, Small)>,
}

fn canonicalize(s: &Small, labeled: bool) -> (CanonicalForm, Small) {
    if labeled {
        (canon::labeled_small(s.n, &s.b), s.clone())
    } else {
        let (order, form) = canon::canonical_small(s.n, &s.b);
        (form, s.permuted(&order))
    }
}

/// Enumerates the mutation class of `q` with default options.
pub fn enumerate_class(q: &Quiver, caps: Caps) -> Result<MutationClass> {
    enumerate_class_with(
        q,
        &EnumerateOptions {
            caps,
            ..EnumerateOptions::default()
        },
    )
}

/// Breadth-first enumeration from `q`. Each level is expanded in member
/// order and vertex order, so discovery is deterministic; the returned
/// members are sorted by canonical form.
pub fn enumerate_class_with(q: &Quiver, opts: &EnumerateOptions) -> Result<MutationClass> {
    opts.caps.validate()?;
    if opts.canon_mode == CanonMode::Bounded && q.n() > canon::DEFAULT_CANON_LIMIT {
        return Err(Error::TooManyVertices {
            operation: "mutation class enumeration",
            limit: canon::DEFAULT_CANON_LIMIT,
            n: q.n(),
        });
    }
    let n = q.n();
    let components = q.components();
    let connected = components.len() == 1;
    let mut big_component = vec![false; n];
    for c in components.iter().filter(|c| c.len() >= 3) {
        for &v in c {
            big_component[v] = true;
        }
    }
    let limit = opts.caps.weight_abort;

    let seed_heavy = (0..n).any(|i| {
        big_component[i] && (i + 1..n).any(|j| q.entry(i, j).magnitude() >= &limit.into())
    });
    if seed_heavy {
        let (_, form) = canon::canonical_labeling(q, CanonMode::Refinement)?;
        return Ok(MutationClass {
            members: vec![form],
            representatives: vec![canon::canonical_quiver(q, CanonMode::Refinement)?.0],
            status: ClassStatus::AbortedWeight,
            witness: Some(q.clone().without_labels()),
            connected,
            mutations_examined: 0,
        });
    }
    let seed = Small::from_quiver(q).ok_or_else(|| {
        Error::Unknown("entries outside the 64-bit range in a two-vertex component".into())
    })?;

    let (seed_form, seed_rep) = canonicalize(&seed, opts.labeled);
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    index.insert(seed_form.clone(), 0);
    let mut found: Vec<(CanonicalForm, Small)> = vec![(seed_form, seed_rep)];
    let mut frontier: Vec<usize> = vec![0];
    let mut examined = 0usize;

    let expand = |s: &Small| -> Expanded {
        let mut children = Vec::with_capacity(n);
        for k in 0..n {
            let child = s.mutate(k);
            if child.heavy(limit, &big_component) {
                return Expanded {
                    heavy: Some(child),
                    children,
                };
            }
            children.push(canonicalize(&child, opts.labeled));
        }
        Expanded {
            heavy: None,
            children,
        }
    };

    let finish = |found: Vec<(CanonicalForm, Small)>, status, witness, examined| {
        let mut found = found;
        found.sort_by(|a, b| a.0.cmp(&b.0));
        let (members, reps): (Vec<_>, Vec<_>) = found.into_iter().unzip();
        MutationClass {
            members,
            representatives: reps.iter().map(Small::to_quiver).collect(),
            status,
            witness,
            connected,
            mutations_examined: examined,
        }
    };

    while !frontier.is_empty() {
        let expanded: Vec<Expanded> = if opts.parallel {
            frontier.par_iter().map(|&i| expand(&found[i].1)).collect()
        } else {
            frontier.iter().map(|&i| expand(&found[i].1)).collect()
        };
        let mut next = Vec::new();
        for e in expanded {
            examined += e.children.len();
            for (form, rep) in e.children {
                if index.contains_key(&form) {
                    continue;
                }
                if found.len() == opts.caps.max_size {
                    return Ok(finish(found, ClassStatus::AbortedCap, None, examined));
                }
                index.insert(form.clone(), found.len());
                next.push(found.len());
                found.push((form, rep));
            }
            if let Some(h) = e.heavy {
                return Ok(finish(
                    found,
                    ClassStatus::AbortedWeight,
                    Some(h.to_quiver()),
                    examined + 1,
                ));
            }
        }
        frontier = next;
    }
    Ok(finish(found, ClassStatus::Complete, None, examined))
}

/// Evidence that a quiver is of infinite mutation type.
#[derive(Clone, Debug)]
pub enum InfiniteEvidence {
    Certificate(InfiniteCertificate),
    /// A mutation-equivalent quiver with an edge of weight at least 3.
    WeightWitness(Quiver),
}

#[derive(Clone, Debug)]
pub enum FiniteVerdict {
    Finite(MutationClass),
    Infinite(InfiniteEvidence),
}

impl FiniteVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, FiniteVerdict::Finite(_))
    }
}

pub fn is_finite_mutation_type(q: &Quiver) -> Result<FiniteVerdict> {
    is_finite_mutation_type_with(q, Caps::default())
}

/// Decides finite mutation type. Quivers with at most two vertices are
/// always finite. Otherwise a structural certificate is tried first, then
/// enumeration; a size cap hit is an error, never a verdict.
pub fn is_finite_mutation_type_with(q: &Quiver, caps: Caps) -> Result<FiniteVerdict> {
    if caps.weight_abort < 3 {
        return Err(Error::InvalidCaps(
            "finiteness needs weight_abort of at least 3".into(),
        ));
    }
    if q.n() >= 3 && q.n() <= patterns::MAX_CYCLE_VERTICES {
        if let Some(cert) = patterns::infinite_certificate(q)? {
            return Ok(FiniteVerdict::Infinite(InfiniteEvidence::Certificate(cert)));
        }
    }
    let class = enumerate_class(q, caps)?;
    match class.status {
        ClassStatus::Complete => Ok(FiniteVerdict::Finite(class)),
        ClassStatus::AbortedWeight => Ok(FiniteVerdict::Infinite(InfiniteEvidence::WeightWitness(
            class.witness.expect("weight abort records its witness"),
        ))),
        ClassStatus::AbortedCap => Err(Error::Unknown(format!(
            "mutation class exceeds {} members",
            caps.max_size
        ))),
    }
}

/// Values of an invariant over a complete class.
#[derive(Clone, Debug)]
pub struct Sweep<V> {
    pub values: BTreeMap<CanonicalForm, V>,
    pub constant: bool,
}

/// Evaluates `f` on every member of the class of `q`.
pub fn sweep<V, F>(q: &Quiver, caps: Caps, f: F) -> Result<Sweep<V>>
where
    V: PartialEq,
    F: Fn(&Quiver) -> Result<V>,
{
    let class = enumerate_class(q, caps)?;
    if !class.is_complete() {
        return Err(Error::Unknown(format!(
            "class enumeration stopped with {:?} after {} members",
            class.status,
            class.size()
        )));
    }
    sweep_class(&class, f)
}

pub fn sweep_class<V, F>(class: &MutationClass, f: F) -> Result<Sweep<V>>
where
    V: PartialEq,
    F: Fn(&Quiver) -> Result<V>,
{
    let mut values = BTreeMap::new();
    for (form, rep) in class.members.iter().zip(&class.representatives) {
        values.insert(form.clone(), f(rep)?);
    }
    let mut it = values.values();
    let constant = match it.next() {
        Some(first) => it.all(|v| v == first),
        None => true,
    };
    Ok(Sweep { values, constant })
}

/// First line of a class dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpHeader {
    pub size: usize,
    pub status: ClassStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
}

/// Writes a header line followed by one JSON quiver per member.
pub fn write_dump<W: Write>(
    class: &MutationClass,
    name: Option<&str>,
    version: Option<u32>,
    mut out: W,
) -> Result<()> {
    let header = DumpHeader {
        size: class.size(),
        status: class.status,
        name: name.map(str::to_owned),
        version,
    };
    writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for rep in &class.representatives {
        writeln!(out, "{}", format::to_json(rep))?;
    }
    Ok(())
}

/// Reads a dump written by [`write_dump`].
pub fn read_dump<R: BufRead>(input: R) -> Result<(DumpHeader, Vec<Quiver>)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty class dump".into(),
    })??;
    let header: DumpHeader = serde_json::from_str(&first).map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let mut quivers = Vec::with_capacity(header.size);
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let q = format::parse_json(&line).map_err(|e| Error::Parse {
            line: idx + 2,
            message: e.to_string(),
        })?;
        quivers.push(q);
    }
    if quivers.len() != header.size {
        return Err(Error::Parse {
            line: quivers.len() + 1,
            message: format!("header announces {} members, found {}", header.size, quivers.len()),
        });
    }
    Ok((header, quivers))
}
