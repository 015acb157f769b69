//! Integral lattice primitives: pairings, obtuse superbases and their graphs,
//! discriminants and irreducibility predicates.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::changemaker::{standard_basis, ChangemakerLattice, ChangemakerVector};
use crate::error::{Error, Result};
use crate::linalg::{self, dot};

pub fn pairing(a: &[i64], b: &[i64]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::RankMismatch { left: a.len(), right: b.len() });
    }
    Ok(dot(a, b))
}

/// Multigraph with `|v_i . v_j|` edges between superbase vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperbaseGraph {
    pub vertices: usize,
    pub mult: Vec<Vec<u64>>,
}

impl SuperbaseGraph {
    pub fn from_vectors(vs: &[Vec<i64>]) -> Self {
        let n = vs.len();
        let mut mult = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    mult[i][j] = dot(&vs[i], &vs[j]).unsigned_abs();
                }
            }
        }
        SuperbaseGraph { vertices: n, mult }
    }

    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut mult = vec![vec![0u64; vertices]; vertices];
        for &(a, b) in edges {
            if a != b {
                mult[a][b] += 1;
                mult[b][a] += 1;
            }
        }
        SuperbaseGraph { vertices, mult }
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.mult[v].iter().sum()
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.vertices).map(|v| self.degree(v)).sum::<u64>() / 2
    }

    /// `(i, j, multiplicity)` with `i < j` and nonzero multiplicity.
    pub fn edges(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for i in 0..self.vertices {
            for j in i + 1..self.vertices {
                if self.mult[i][j] > 0 {
                    out.push((i, j, self.mult[i][j]));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices).filter(move |&u| self.mult[v][u] > 0)
    }

    /// Connectivity of the subgraph induced by `mask` (bit i = vertex i).
    pub fn induced_connected(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                let bit = 1u64 << u;
                if mask & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(u);
                }
            }
        }
        seen == mask
    }

    pub fn is_connected(&self) -> bool {
        self.vertices <= 1 || self.induced_connected(full_mask(self.vertices))
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObtuseSuperbase {
    pub vectors: Vec<Vec<i64>>,
    pub graph: SuperbaseGraph,
}

/// Search statistics backing a negative (or inconclusive) search result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionRecord {
    pub bounds: Vec<i64>,
    pub bound_sources: Vec<String>,
    pub v_bound: u64,
    pub v_irred: u64,
    pub subsets_examined: u64,
    pub nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
    pub algorithm_version: String,
}

/// Gram determinant of a lattice basis.
pub fn discriminant(l: &ChangemakerLattice) -> i64 {
    let b = l.basis();
    let d = linalg::determinant(&linalg::gram(&b));
    i64::try_from(d).expect("discriminant fits in i64")
}

/// Check the superbase axioms and build the associated graph.
pub fn validate_superbase(l: &ChangemakerLattice, vs: &[Vec<i64>]) -> Result<ObtuseSuperbase> {
    for (index, v) in vs.iter().enumerate() {
        if v.len() != l.ambient_rank {
            return Err(Error::RankMismatch { left: v.len(), right: l.ambient_rank });
        }
        if !l.contains(v) {
            return Err(Error::VectorNotInLattice { index });
        }
    }
    let mut sum = vec![0; l.ambient_rank];
    vs.iter().for_each(|v| linalg::add_assign(&mut sum, v));
    if sum.iter().any(|&x| x != 0) {
        return Err(Error::NonzeroSum);
    }
    if vs.len() != l.rank() + 1 {
        return Err(Error::WrongCount { expected: l.rank() + 1, got: vs.len() });
    }
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let value = dot(&vs[i], &vs[j]);
            if value > 0 {
                return Err(Error::PositivePairing { i, j, value });
            }
        }
    }
    if !spans(l, &vs[..vs.len() - 1]) {
        return Err(Error::NotSpanning);
    }
    Ok(ObtuseSuperbase {
        vectors: vs.to_vec(),
        graph: SuperbaseGraph::from_vectors(vs),
    })
}

/// `rank` vectors of `l` span it iff their Gram determinant equals the
/// discriminant.
pub fn spans(l: &ChangemakerLattice, vs: &[Vec<i64>]) -> bool {
    vs.len() == l.rank()
        && linalg::determinant_i128(&linalg::gram(vs)) == Some(l.disc() as i128)
}

/// Irreducibility of a `{0, +-1}` vector of `<sigma>^perp`: reducible iff
/// proper nonempty parts of the positive and negative supports have equal
/// sigma-sums.
pub fn is_irreducible_pm1(z: &[i64], sigma: &ChangemakerVector) -> Result<bool> {
    let s = sigma.as_slice();
    if z.len() != s.len() {
        return Err(Error::RankMismatch { left: z.len(), right: s.len() });
    }
    if z.iter().any(|&x| x.abs() > 1) {
        return Err(Error::CoordinateOutOfRange);
    }
    let pos: Vec<i64> = (0..s.len()).filter(|&i| z[i] == 1).map(|i| s[i]).collect();
    let neg: Vec<i64> = (0..s.len()).filter(|&i| z[i] == -1).map(|i| s[i]).collect();
    if pos.is_empty() || neg.is_empty() {
        // a one-sided vector splits into orthogonal pieces unless it is a single e_i
        return Ok(pos.len() + neg.len() == 1);
    }
    let a = proper_subset_sums(&pos);
    let b = proper_subset_sums(&neg);
    Ok(a.intersection(&b).next().is_none())
}

/// Sums of subsets of size strictly between 0 and `len`.
fn proper_subset_sums(w: &[i64]) -> BTreeSet<i64> {
    let total: i64 = w.iter().sum();
    let n = w.len();
    // sizes[s] = bitmask of achievable subset sizes with sum s
    let mut sizes = vec![0u128; total as usize + 1];
    sizes[0] = 1;
    for &x in w {
        for s in (x as usize..=total as usize).rev() {
            sizes[s] |= sizes[s - x as usize] << 1;
        }
    }
    let proper = if n >= 2 { ((1u128 << n) - 1) & !1 } else { 0 };
    (0..=total)
        .filter(|&s| sizes[s as usize] & proper != 0)
        .collect()
}

/// Sums over vertex sets `R` with `R` and its complement both connected.
pub fn superbase_irreducibles(b: &ObtuseSuperbase) -> Vec<Vec<i64>> {
    let n = b.vectors.len();
    let dim = b.vectors.first().map_or(0, |v| v.len());
    let all = full_mask(n);
    let mut seen = BTreeSet::new();
    for mask in 1..all {
        if b.graph.induced_connected(mask) && b.graph.induced_connected(all & !mask) {
            let mut z = vec![0; dim];
            for (i, v) in b.vectors.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    linalg::add_assign(&mut z, v);
                }
            }
            seen.insert(z);
        }
    }
    seen.into_iter().collect()
}

/// No cut vertex (graphs with at most two vertices count as 2-connected
/// when connected).
pub fn is_two_connected(g: &SuperbaseGraph) -> bool {
    if !g.is_connected() {
        return false;
    }
    if g.vertices <= 2 {
        return true;
    }
    let all = full_mask(g.vertices);
    (0..g.vertices).all(|v| g.induced_connected(all & !(1u64 << v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionHint {
    Indecomposable,
    Unknown,
}

/// One-sided decomposability test from the standard-basis pairing graph.
pub fn indecomposable_hint(sigma: &ChangemakerVector) -> DecompositionHint {
    let basis = standard_basis(sigma);
    let n = basis.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if dot(&basis[i], &basis[j]) != 0 {
                edges.push((i, j));
            }
        }
    }
    if SuperbaseGraph::from_edges(n, &edges).is_connected() {
        DecompositionHint::Indecomposable
    } else {
        DecompositionHint::Unknown
    }
}

/// Sign-normalize so the first nonzero coordinate is positive.
pub fn canonical_sign(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => linalg::neg(v),
        _ => v.to_vec(),
    }
}
