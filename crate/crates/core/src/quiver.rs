//! Quivers as skew-symmetric integer matrices, mutation, and the change of
//! coordinates that mutation induces on ℤⁿ.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::vector::IntVector;

/// A quiver on vertices `0..n`, stored as its exchange matrix `B`.
///
/// `b[i][j] > 0` means `b[i][j]` arrows `i → j`. The matrix is always
/// skew-symmetric with zero diagonal, which rules out loops and 2-cycles.
/// Entries are arbitrary precision; mutation of infinite-type quivers grows
/// them without bound.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    b: Vec<BigInt>,
    labels: Option<Vec<String>>,
}

/// An induced subquiver together with the host vertex each of its vertices
/// came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquiver {
    pub quiver: Quiver,
    /// `vertices[i]` is the host vertex that became vertex `i`.
    pub vertices: Vec<usize>,
}

impl Quiver {
    /// Builds a quiver from `(i, j, w)` triples meaning `w` arrows `i → j`.
    pub fn from_arrows<W>(n: usize, arrows: impl IntoIterator<Item = (usize, usize, W)>) -> Result<Self>
    where
        W: Into<BigInt>,
    {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut b = vec![BigInt::zero(); n * n];
        for (i, j, w) in arrows {
            let w: BigInt = w.into();
            for v in [i, j] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::LoopForbidden(i));
            }
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight);
            }
            if !b[i * n + j].is_zero() {
                return Err(Error::ConflictingEdge(i.min(j), i.max(j)));
            }
            b[j * n + i] = -&w;
            b[i * n + j] = w;
        }
        Ok(Quiver { n, b, labels: None })
    }

    /// Builds a quiver from a full matrix, checking skew-symmetry.
    pub fn from_matrix<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut b = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            b.extend(row.iter().cloned().map(Into::into));
        }
        for i in 0..n {
            if !b[i * n + i].is_zero() {
                return Err(Error::LoopForbidden(i));
            }
            for j in i + 1..n {
                if b[i * n + j] != -&b[j * n + i] {
                    return Err(Error::ConflictingEdge(i, j));
                }
            }
        }
        Ok(Quiver { n, b, labels: None })
    }

    pub(crate) fn from_raw(n: usize, b: Vec<BigInt>) -> Self {
        debug_assert_eq!(b.len(), n * n);
        Quiver { n, b, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.b[i * self.n + j]
    }

    /// The entry clamped into `i64`; only the sign and small magnitudes
    /// matter to most structural scans.
    #[inline]
    pub fn entry_clamped(&self, i: usize, j: usize) -> i64 {
        let e = self.entry(i, j);
        e.to_i64()
            .unwrap_or(if e.is_positive() { i64::MAX } else { i64::MIN + 1 })
    }

    /// Number of arrows between `i` and `j`, regardless of direction,
    /// saturating at `u64::MAX`.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> u64 {
        self.entry(i, j).abs().to_u64().unwrap_or(u64::MAX)
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        !self.entry(i, j).is_zero()
    }

    pub fn matrix(&self) -> Vec<Vec<BigInt>> {
        self.b.chunks(self.n).map(<[BigInt]>::to_vec).collect()
    }

    pub(crate) fn raw(&self) -> &[BigInt] {
        &self.b
    }

    /// Edges as `(tail, head, weight)`, one per adjacent pair, ordered by
    /// the pair `(min, max)`.
    pub fn arrows(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let e = self.entry(i, j);
                if e.is_positive() {
                    out.push((i, j, e.clone()));
                } else if e.is_negative() {
                    out.push((j, i, -e));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacent(i, j))
            .count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.adjacent(v, u))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Mutation at `k`.
    ///
    /// Entries in row or column `k` change sign; every other entry becomes
    /// `b[i][j] + sgn(b[i][k]) · max(b[i][k] · b[k][j], 0)`.
    pub fn mutate(&self, k: usize) -> Result<Quiver> {
        self.check_vertex(k)?;
        let n = self.n;
        let mut b = self.b.clone();
        for i in 0..n {
            for j in 0..n {
                if i == k || j == k {
                    b[i * n + j] = -&self.b[i * n + j];
                    continue;
                }
                let bik = &self.b[i * n + k];
                let bkj = &self.b[k * n + j];
                // sgn(b_ik)[b_ik b_kj]_+ is nonzero only when both factors
                // share a sign.
                if bik.is_positive() && bkj.is_positive() {
                    b[i * n + j] += bik * bkj;
                } else if bik.is_negative() && bkj.is_negative() {
                    b[i * n + j] -= bik * bkj;
                }
            }
        }
        Ok(Quiver {
            n,
            b,
            labels: self.labels.clone(),
        })
    }

    /// Applies mutations left to right.
    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<Quiver> {
        let mut q = self.clone();
        for &k in ks {
            q = q.mutate(k)?;
        }
        Ok(q)
    }

    /// Coordinates of `u` in the basis in which `mutate(k)` represents the
    /// same skew form. Only coordinate `k` changes:
    /// `u'_k = −u_k + Σ_{b[k][j] < 0} (−b[k][j]) · u_j`.
    ///
    /// If `B·u = 0` then `mutate(k).B · u' = 0`.
    pub fn pushforward_vector(&self, k: usize, u: &IntVector) -> Result<IntVector> {
        self.check_vertex(k)?;
        if u.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: u.len(),
            });
        }
        let mut coords = u.coords().to_vec();
        let mut uk = -&coords[k];
        for (j, uj) in u.coords().iter().enumerate() {
            let bkj = self.entry(k, j);
            if bkj.is_negative() {
                uk -= bkj * uj;
            }
        }
        coords[k] = uk;
        Ok(IntVector::new(coords))
    }

    /// `B · u`.
    pub fn apply(&self, u: &IntVector) -> Result<IntVector> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: u.len(),
            });
        }
        let out = (0..self.n)
            .map(|i| {
                self.b[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(u.coords())
                    .filter(|(b, c)| !b.is_zero() && !c.is_zero())
                    .map(|(b, c)| b * c)
                    .sum()
            })
            .collect();
        Ok(IntVector::new(out))
    }

    pub fn is_radical(&self, u: &IntVector) -> Result<bool> {
        Ok(self.apply(u)?.is_zero())
    }

    /// The full subquiver on `vertices`, in the given order.
    pub fn induced_subquiver(&self, vertices: &[usize]) -> Result<Subquiver> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for (idx, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if vertices[..idx].contains(&v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let m = vertices.len();
        let mut b = Vec::with_capacity(m * m);
        for &i in vertices {
            for &j in vertices {
                b.push(self.entry(i, j).clone());
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| vertices.iter().map(|&v| l[v].clone()).collect());
        Ok(Subquiver {
            quiver: Quiver { n: m, b, labels },
            vertices: vertices.to_vec(),
        })
    }

    /// Relabels so that host vertex `order[i]` becomes vertex `i`.
    pub fn permuted(&self, order: &[usize]) -> Result<Quiver> {
        if order.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: order.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &v in order {
            self.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Ok(self.induced_subquiver(order)?.quiver)
    }

    /// The opposite quiver: every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            n: self.n,
            b: self.b.iter().map(|e| -e).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        self.b.iter().all(|e| e.is_zero() || e.abs().is_one())
    }

    pub fn max_weight(&self) -> BigInt {
        self.b.iter().map(Signed::abs).max().unwrap_or_default()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected components of the underlying graph, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Whether the vertex set induces a connected subquiver.
    pub fn is_connected_on(&self, vertices: &[usize]) -> bool {
        let Some(&start) = vertices.first() else {
            return false;
        };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in vertices {
                if !seen.contains(&u) && self.adjacent(v, u) {
                    seen.push(u);
                    stack.push(u);
                }
            }
        }
        seen.len() == vertices.len()
    }

    /// Whether the directed graph has a directed cycle through the given
    /// vertices only.
    pub fn has_directed_cycle_on(&self, vertices: &[usize]) -> bool {
        // Kahn's algorithm on the induced subgraph.
        let m = vertices.len();
        let mut indeg = vec![0usize; m];
        for (a, &i) in vertices.iter().enumerate() {
            for &j in vertices {
                if self.entry(j, i).is_positive() {
                    indeg[a] += 1;
                }
            }
        }
        let mut ready: Vec<usize> = (0..m).filter(|&a| indeg[a] == 0).collect();
        let mut removed = 0;
        while let Some(a) = ready.pop() {
            removed += 1;
            for (c, &j) in vertices.iter().enumerate() {
                if self.entry(vertices[a], j).is_positive() {
                    indeg[c] -= 1;
                    if indeg[c] == 0 {
                        ready.push(c);
                    }
                }
            }
        }
        removed < m
    }
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quiver(n={}", self.n)?;
        for (i, j, w) in self.arrows() {
            write!(f, ", {}->{}", i + 1, j + 1)?;
            if !w.is_one() {
                write!(f, ":{w}")?;
            }
        }
        write!(f, ")")
    }
}

/// Vertex sets are handled as sorted index vectors throughout.
pub type VertexSet = Vec<usize>;
