//! Test support: a deliberately naive reference implementation of mutation
//! and isomorphism, plus a deterministic corpus of quivers.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quivers::catalog;
use quivers::Quiver;

pub type Matrix = Vec<Vec<i64>>;

pub fn to_matrix(q: &Quiver) -> Matrix {
    (0..q.n())
        .map(|i| (0..q.n()).map(|j| q.entry_clamped(i, j)).collect())
        .collect()
}

pub fn from_matrix(m: &Matrix) -> Quiver {
    Quiver::from_matrix(m).unwrap()
}

/// Mutation written as `b + (|b_ik| b_kj + b_ik |b_kj|) / 2`.
pub fn oracle_mutate(b: &Matrix, k: usize) -> Matrix {
    let n = b.len();
    let mut out = b.clone();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest upper triangle over every relabeling.
pub struct Oracle {
    perms: Vec<Vec<usize>>,
}

impl Oracle {
    pub fn new(n: usize) -> Self {
        Oracle {
            perms: permutations(n),
        }
    }

    pub fn form(&self, b: &Matrix) -> Vec<i64> {
        let n = b.len();
        self.perms
            .iter()
            .map(|p| {
                let mut key = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for j in i + 1..n {
                        key.push(b[p[i]][p[j]]);
                    }
                }
                key
            })
            .min()
            .unwrap()
    }

    pub fn isomorphic(&self, a: &Matrix, b: &Matrix) -> bool {
        self.form(a) == self.form(b)
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum OracleClass {
    Complete(BTreeSet<Vec<i64>>),
    Heavy,
}

/// Breadth-first class enumeration with the naive rule and isomorphism
/// test. Stops when an edge of weight at least 3 appears.
pub fn oracle_class(q: &Quiver) -> OracleClass {
    let n = q.n();
    let oracle = Oracle::new(n);
    let start = to_matrix(q);
    let mut seen = BTreeSet::from([oracle.form(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(b) = queue.pop_front() {
        for k in 0..n {
            let c = oracle_mutate(&b, k);
            if c.iter().flatten().any(|e| e.abs() >= 3) {
                return OracleClass::Heavy;
            }
            if seen.insert(oracle.form(&c)) {
                queue.push_back(c);
            }
        }
    }
    OracleClass::Complete(seen)
}

pub fn random_quiver(rng: &mut StdRng, max_n: usize, max_weight: i64) -> Quiver {
    let n = rng.gen_range(1..=max_n);
    let density: f64 = rng.gen_range(0.2..0.8);
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let w = rng.gen_range(1..=max_weight);
                if rng.gen_bool(0.5) {
                    arrows.push((i, j, w));
                } else {
                    arrows.push((j, i, w));
                }
            }
        }
    }
    Quiver::from_arrows(n, arrows).unwrap()
}

/// 1000 seeded random quivers with at most 8 vertices and weights at most 3.
pub fn random_corpus() -> Vec<Quiver> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    (0..1000).map(|_| random_quiver(&mut rng, 8, 3)).collect()
}

/// Named seeds: A and D types and oriented cycles up to 8 vertices, and the
/// exceptional seeds.
pub fn named_seeds() -> Vec<(String, Quiver)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("A{n}"), catalog::a_n(n).unwrap()));
    }
    for n in 4..=8 {
        out.push((format!("D{n}"), catalog::d_n(n).unwrap()));
    }
    for n in 3..=8 {
        out.push((format!("C{n}"), catalog::oriented_cycle(n).unwrap()));
    }
    for name in catalog::EXCEPTIONAL {
        out.push((name.to_owned(), catalog::seed(name).unwrap()));
    }
    out
}

/// Random corpus followed by the named seeds.
pub fn corpus() -> Vec<Quiver> {
    let mut out = random_corpus();
    out.extend(named_seeds().into_iter().map(|(_, q)| q));
    out
}

/// `B · 1_S` computed directly.
pub fn indicator_product(b: &Matrix, set: &[usize]) -> Vec<i64> {
    b.iter().map(|row| set.iter().map(|&s| row[s]).sum()).collect()
}

/// Subsets of `0..n` as sorted vertex lists, by bitmask.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Class sizes up to relabeling, produced by [`oracle_class`] and frozen.
pub const FROZEN_SIZES: [(&str, usize); 12] = [
    ("A2", 1),
    ("A3", 4),
    ("A4", 6),
    ("A5", 19),
    ("D4", 6),
    ("D5", 26),
    ("C4", 6),
    ("C5", 26),
    ("E6", 67),
    ("X6", 5),
    ("X7", 2),
    ("A6", 49),
];

pub fn frozen_size(name: &str) -> usize {
    FROZEN_SIZES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, s)| s)
        .unwrap_or_else(|| panic!("no frozen size for {name}"))
}
