//! Canonical forms of quivers up to relabeling of vertices.
//!
//! Vertices are split into cells by iterated refinement on the multiset of
//! `(cell of neighbor, entry)` pairs. When refinement stalls, each vertex of
//! the first non-singleton cell is individualized in turn and the search
//! recurses. Every leaf is a total order; the lexicographically smallest
//! relabeled upper triangle wins. Vertices with identical rows and no edge
//! between them are interchangeable, so only one of each such class is
//! branched on.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Default vertex bound for canonicalization.
pub const DEFAULT_CANON_LIMIT: usize = 12;

/// Whether canonicalization enforces the vertex bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CanonMode {
    #[default]
    Bounded,
    /// No vertex bound; the search still runs to completion.
    Refinement,
}

/// Byte serialization of the relabeled matrix that is minimal over all
/// relabelings. Equal forms mean isomorphic quivers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

fn write_sleb(out: &mut Vec<u8>, mut v: i64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        let done = (v == 0 && byte & 0x40 == 0) || (v == -1 && byte & 0x40 != 0);
        out.push(if done { byte } else { byte | 0x80 });
        if done {
            break;
        }
    }
}

/// Tags the two serializations so they can never collide.
const SMALL: u8 = 0;
const BIG: u8 = 1;

fn serialize_small(n: usize, m: &[i64], order: &[usize]) -> CanonicalForm {
    let mut out = Vec::with_capacity(2 + n * (n - 1) / 2);
    out.push(SMALL);
    write_sleb(&mut out, n as i64);
    for i in 0..n {
        for j in i + 1..n {
            write_sleb(&mut out, m[order[i] * n + order[j]]);
        }
    }
    CanonicalForm(out)
}

fn serialize_big(n: usize, m: &[BigInt], order: &[usize]) -> CanonicalForm {
    let mut out = vec![BIG];
    write_sleb(&mut out, n as i64);
    for i in 0..n {
        for j in i + 1..n {
            let bytes = m[order[i] * n + order[j]].to_signed_bytes_le();
            write_sleb(&mut out, bytes.len() as i64);
            out.extend(bytes);
        }
    }
    CanonicalForm(out)
}

struct Search<'a, T> {
    n: usize,
    m: &'a [T],
    zero: &'a T,
    best: Option<(Vec<T>, Vec<usize>)>,
}

impl<T: Ord + Clone> Search<'_, T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.m[i * self.n + j]
    }

    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut cell_of = vec![0usize; n];
        loop {
            for (idx, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = idx;
                }
            }
            let mut next = Vec::with_capacity(n);
            let mut changed = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sigs: Vec<(Vec<(usize, &T)>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut s: Vec<(usize, &T)> = (0..n)
                            .filter(|&u| u != v && self.at(v, u) != self.zero)
                            .map(|u| (cell_of[u], self.at(v, u)))
                            .collect();
                        s.sort_unstable();
                        (s, v)
                    })
                    .collect();
                sigs.sort();
                let start = next.len();
                let mut group = vec![sigs[0].1];
                for w in sigs.windows(2) {
                    if w[0].0 == w[1].0 {
                        group.push(w[1].1);
                    } else {
                        next.push(std::mem::take(&mut group));
                        group.push(w[1].1);
                    }
                }
                next.push(group);
                if next.len() - start > 1 {
                    changed = true;
                }
            }
            cells = next;
            if !changed {
                return cells;
            }
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        self.at(u, v) == self.zero
            && (0..self.n)
                .filter(|&w| w != u && w != v)
                .all(|w| self.at(u, w) == self.at(v, w))
    }

    fn run(&mut self, cells: Vec<Vec<usize>>) {
        let cells = self.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            self.leaf(order);
            return;
        };
        let cell = &cells[target];
        let mut tried: Vec<usize> = Vec::new();
        for &v in cell {
            if tried.iter().any(|&t| self.twins(t, v)) {
                continue;
            }
            tried.push(v);
            let mut branch = Vec::with_capacity(cells.len() + 1);
            branch.extend_from_slice(&cells[..target]);
            branch.push(vec![v]);
            branch.push(cell.iter().copied().filter(|&u| u != v).collect());
            branch.extend_from_slice(&cells[target + 1..]);
            self.run(branch);
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let n = self.n;
        let key: Vec<T> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.at(order[i], order[j]).clone())
            .collect();
        match &self.best {
            Some((best, _)) if *best <= key => {}
            _ => self.best = Some((key, order)),
        }
    }
}

/// Canonical vertex order: position `i` of the result holds the original
/// vertex placed at `i`.
pub(crate) fn canonical_order<T: Ord + Clone>(n: usize, m: &[T], zero: &T) -> Vec<usize> {
    let mut search = Search {
        n,
        m,
        zero,
        best: None,
    };
    search.run(vec![(0..n).collect()]);
    search.best.expect("search visits at least one leaf").1
}

/// Canonical order and form of an `i64` exchange matrix.
pub(crate) fn canonical_small(n: usize, m: &[i64]) -> (Vec<usize>, CanonicalForm) {
    let order = canonical_order(n, m, &0);
    let form = serialize_small(n, m, &order);
    (order, form)
}

/// Form of an `i64` exchange matrix in its given vertex order.
pub(crate) fn labeled_small(n: usize, m: &[i64]) -> CanonicalForm {
    let order: Vec<usize> = (0..n).collect();
    serialize_small(n, m, &order)
}

fn check_bound(q: &Quiver, mode: CanonMode) -> Result<()> {
    if mode == CanonMode::Bounded && q.n() > DEFAULT_CANON_LIMIT {
        return Err(Error::TooManyVertices {
            operation: "canonical form",
            limit: DEFAULT_CANON_LIMIT,
            n: q.n(),
        });
    }
    Ok(())
}

/// Canonical vertex order and form.
pub fn canonical_labeling(q: &Quiver, mode: CanonMode) -> Result<(Vec<usize>, CanonicalForm)> {
    check_bound(q, mode)?;
    let n = q.n();
    let small: Option<Vec<i64>> = q.raw().iter().map(ToPrimitive::to_i64).collect();
    Ok(match small {
        Some(m) => canonical_small(n, &m),
        None => {
            let order = canonical_order(n, q.raw(), &BigInt::zero());
            let form = serialize_big(n, q.raw(), &order);
            (order, form)
        }
    })
}

/// Canonical form with the default vertex bound.
pub fn canonical_form(q: &Quiver) -> Result<CanonicalForm> {
    canonical_form_with(q, CanonMode::Bounded)
}

pub fn canonical_form_with(q: &Quiver, mode: CanonMode) -> Result<CanonicalForm> {
    Ok(canonical_labeling(q, mode)?.1)
}

/// The quiver relabeled into canonical order, with its form.
pub fn canonical_quiver(q: &Quiver, mode: CanonMode) -> Result<(Quiver, CanonicalForm)> {
    let (order, form) = canonical_labeling(q, mode)?;
    Ok((q.permuted(&order)?.without_labels(), form))
}
