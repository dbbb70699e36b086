//! Exact linear algebra for exchange matrices: rank and radical over ℚ,
//! and the same over GF(2) on packed rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::vector::{normalize_primitive, Gf2Vector, IntVector};

/// Fraction-free (Bareiss) elimination; returns the rank of an `n × n`
/// row-major matrix, destroying it.
fn bareiss_rank(n: usize, m: &mut [BigInt]) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !m[r * n + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for c in 0..n {
                m.swap(pivot * n + c, rank * n + c);
            }
        }
        let p = m[rank * n + col].clone();
        for r in rank + 1..n {
            let f = m[r * n + col].clone();
            for c in col + 1..n {
                // Exact by Sylvester's identity.
                let v = (&p * &m[r * n + c] - &f * &m[rank * n + c]) / &prev;
                m[r * n + c] = v;
            }
            m[r * n + col] = BigInt::zero();
        }
        prev = p;
        rank += 1;
    }
    rank
}

/// Rank of `B` over ℚ.
pub fn rank_z(q: &Quiver) -> usize {
    let mut m = q.raw().to_vec();
    bareiss_rank(q.n(), &mut m)
}

pub fn corank_z(q: &Quiver) -> usize {
    q.n() - rank_z(q)
}

/// Basis of the rational kernel of `B`, as primitive integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalBasisZ {
    pub vectors: Vec<IntVector>,
    pub corank: usize,
}

/// Kernel basis of `B` over ℚ from the reduced row echelon form. One vector
/// per free column, ascending; each scaled to a primitive integer vector
/// whose first nonzero entry is positive.
pub fn radical_basis_z(q: &Quiver) -> RadicalBasisZ {
    let n = q.n();
    let mut rows: Vec<Vec<BigRational>> = q
        .matrix()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..n).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in &mut rows[r][col..] {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == n {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors = free
        .iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); n];
            x[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -rows[row][f].clone();
            }
            let denom = x
                .iter()
                .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
            let mut coords: Vec<BigInt> = x
                .iter()
                .map(|v| v.numer() * (&denom / v.denom()))
                .collect();
            normalize_primitive(&mut coords);
            IntVector::new(coords)
        })
        .collect();
    RadicalBasisZ {
        vectors,
        corank: free.len(),
    }
}

/// A square matrix over GF(2) with packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// `B̄ · v`.
    pub fn apply(&self, v: &Gf2Vector) -> Gf2Vector {
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(v)).collect();
        Gf2Vector::from_bits(&bits)
    }

    pub fn rank(&self) -> usize {
        echelon(self.rows.clone()).len()
    }
}

/// Entrywise reduction of `B` modulo 2. The result is symmetric.
pub fn reduce_mod2(q: &Quiver) -> Gf2Matrix {
    let n = q.n();
    let rows = (0..n)
        .map(|i| {
            let mut r = Gf2Vector::zeros(n);
            for j in 0..n {
                if num_integer::Integer::is_odd(q.entry(i, j)) {
                    r.set(j, true);
                }
            }
            r
        })
        .collect();
    Gf2Matrix { rows }
}

/// Kernel of `B̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalBasisGf2 {
    pub vectors: Vec<Gf2Vector>,
    pub corank2: usize,
}

/// Reduced echelon rows, each with a distinct leading bit, sorted by it.
fn echelon(mut rows: Vec<Gf2Vector>) -> Vec<Gf2Vector> {
    let mut basis: Vec<Gf2Vector> = Vec::new();
    for mut r in rows.drain(..) {
        for b in &basis {
            let lead = b.first_one().expect("basis rows are nonzero");
            if r.get(lead) {
                r.xor_assign(b);
            }
        }
        if let Some(lead) = r.first_one() {
            for b in basis.iter_mut() {
                if b.get(lead) {
                    b.xor_assign(&r);
                }
            }
            basis.push(r);
        }
    }
    basis.sort_by_key(|b| b.first_one());
    basis
}

/// Basis of `{v : B̄ v = 0}`, one vector per free column, ascending.
pub fn radical_basis_gf2(q: &Quiver) -> RadicalBasisGf2 {
    kernel_gf2(&reduce_mod2(q))
}

pub fn kernel_gf2(m: &Gf2Matrix) -> RadicalBasisGf2 {
    let n = m.n();
    let rref = echelon(m.rows.clone());
    let leads: Vec<usize> = rref.iter().map(|r| r.first_one().unwrap()).collect();
    let vectors: Vec<Gf2Vector> = (0..n)
        .filter(|c| !leads.contains(c))
        .map(|f| {
            let mut v = Gf2Vector::zeros(n);
            v.set(f, true);
            for (row, &lead) in rref.iter().zip(&leads) {
                if row.get(f) {
                    v.set(lead, true);
                }
            }
            v
        })
        .collect();
    RadicalBasisGf2 {
        corank2: vectors.len(),
        vectors,
    }
}

pub fn corank_gf2(q: &Quiver) -> usize {
    q.n() - reduce_mod2(q).rank()
}

fn check_lengths<'a>(vs: impl IntoIterator<Item = &'a Gf2Vector>, len: Option<usize>) -> Result<()> {
    let mut expected = len;
    for v in vs {
        match expected {
            None => expected = Some(v.len()),
            Some(e) if e != v.len() => {
                return Err(Error::LengthMismatch {
                    expected: e,
                    found: v.len(),
                })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Dimension of the GF(2) span of `vs`.
pub fn gf2_span_dim(vs: &[Gf2Vector]) -> Result<usize> {
    check_lengths(vs, None)?;
    Ok(echelon(vs.to_vec()).len())
}

/// Whether `v` lies in the GF(2) span of `vs`.
pub fn gf2_member(v: &Gf2Vector, vs: &[Gf2Vector]) -> Result<bool> {
    check_lengths(vs, Some(v.len()))?;
    let mut r = v.clone();
    for b in echelon(vs.to_vec()) {
        if r.get(b.first_one().unwrap()) {
            r.xor_assign(&b);
        }
    }
    Ok(r.is_zero())
}
