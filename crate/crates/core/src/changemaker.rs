//! Changemaker vectors, stable coefficients and changemaker lattices.

use serde::{Deserialize, Serialize};

use crate::alexpoly::TorsionCounts;
use crate::error::{Error, Result};
use crate::linalg;

pub fn is_changemaker(sigma: &[i64]) -> bool {
    if sigma.first() != Some(&1) {
        return false;
    }
    let mut sum = 0i64;
    for w in sigma.windows(2) {
        sum += w[0];
        if w[1] < w[0] || w[1] > sum + 1 {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ChangemakerVector {
    sigma: Vec<i64>,
}

impl ChangemakerVector {
    pub fn new(sigma: Vec<i64>) -> Result<Self> {
        if is_changemaker(&sigma) {
            Ok(ChangemakerVector { sigma })
        } else {
            Err(Error::NotChangemaker(sigma))
        }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn norm(&self) -> i64 {
        linalg::norm(&self.sigma)
    }

    /// Entries greater than one, in decreasing order.
    pub fn stable_part(&self) -> StableCoefficients {
        let mut rho: Vec<i64> = self.sigma.iter().copied().filter(|&s| s > 1).collect();
        rho.reverse();
        StableCoefficients { rho }
    }
}

impl TryFrom<Vec<i64>> for ChangemakerVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        ChangemakerVector::new(v)
    }
}

impl From<ChangemakerVector> for Vec<i64> {
    fn from(c: ChangemakerVector) -> Vec<i64> {
        c.sigma
    }
}

/// Stable coefficients, kept in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct StableCoefficients {
    rho: Vec<i64>,
}

impl StableCoefficients {
    /// Sorts into canonical decreasing order; every entry must be at least 2.
    pub fn new(mut rho: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = rho.iter().find(|&&r| r < 2) {
            return Err(Error::OutOfRange(format!("stable coefficient {bad}")));
        }
        rho.sort_unstable_by(|a, b| b.cmp(a));
        Ok(StableCoefficients { rho })
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.rho
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn genus(&self) -> i64 {
        self.rho.iter().map(|r| r * (r - 1)).sum::<i64>() / 2
    }

    pub fn sum_of_squares(&self) -> i64 {
        self.rho.iter().map(|r| r * r).sum()
    }
}

impl TryFrom<Vec<i64>> for StableCoefficients {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        StableCoefficients::new(v)
    }
}

impl From<StableCoefficients> for Vec<i64> {
    fn from(s: StableCoefficients) -> Vec<i64> {
        s.rho
    }
}

/// Greedy subset of `{1..k}` (1-based, returned in decreasing order) whose
/// entries of `sigma` sum to `target`.
pub fn subset_representation(sigma: &ChangemakerVector, k: usize, target: i64) -> Result<Vec<usize>> {
    let s = sigma.as_slice();
    if k > s.len() {
        return Err(Error::IndexOutOfRange { index: k, len: s.len() });
    }
    let total: i64 = s[..k].iter().sum();
    if target < 0 || target > total {
        return Err(Error::OutOfRange(format!("subset target {target}")));
    }
    Ok(greedy_subset(&s[..k], target).expect("changemaker prefixes represent every target"))
}

fn greedy_subset(prefix: &[i64], target: i64) -> Option<Vec<usize>> {
    let mut rem = target;
    let mut out = Vec::new();
    for i in (0..prefix.len()).rev() {
        if prefix[i] <= rem {
            rem -= prefix[i];
            out.push(i + 1);
        }
    }
    (rem == 0).then_some(out)
}

/// Maximum of `alpha . weights` over `alpha >= 0` with
/// `sum alpha_i (alpha_i + 1) = 2k`. With `ones`, an unlimited supply of
/// weight-one entries is appended. `None` when no such `alpha` exists.
pub fn max_pairing(weights: &[i64], k: i64, ones: bool) -> Option<i64> {
    let budget = (2 * k) as usize;
    let mut best: Vec<Option<i64>> = vec![None; budget + 1];
    best[0] = Some(0);
    for &w in weights {
        let mut next = best.clone();
        for (b, cur) in best.iter().enumerate() {
            let Some(cur) = *cur else { continue };
            let mut a = 1usize;
            while b + a * (a + 1) <= budget {
                let nb = b + a * (a + 1);
                let val = cur + a as i64 * w;
                if next[nb].is_none_or(|x| x < val) {
                    next[nb] = Some(val);
                }
                a += 1;
            }
        }
        best = next;
    }
    if ones {
        best.iter()
            .enumerate()
            .filter_map(|(b, v)| v.map(|v| v + ((budget - b) / 2) as i64))
            .max()
    } else {
        best[budget]
    }
}

/// Torsion counts implied by a set of stable coefficients.
pub fn expected_counts(rho: &StableCoefficients) -> TorsionCounts {
    let g = rho.genus();
    let mut counts = vec![0];
    let mut k = 1;
    loop {
        let m = max_pairing(rho.as_slice(), k, true).unwrap_or(0);
        if m >= g {
            counts.push(g);
            break;
        }
        counts.push(m);
        k += 1;
    }
    TorsionCounts { counts }
}

/// Extract stable coefficients from torsion counts, verifying the result
/// by regenerating the counts.
pub fn stable_coefficients(counts: &TorsionCounts, g: i64, t0: usize) -> Option<StableCoefficients> {
    let t = &counts.counts;
    if t.len() != t0 + 1 || t.first() != Some(&0) || t[t0] != g || g <= 0 {
        return None;
    }
    let mut s: Vec<i64> = Vec::new();
    let mut k = 1usize;
    while k <= t0 && t[k] - t[k - 1] > 2 {
        let m = max_pairing(&s, k as i64, false);
        match m {
            Some(m) if m > t[k] && k < t0 => return None,
            Some(m) if m >= t[k] => {}
            _ => s.push(t[k] - t[k - 1]),
        }
        k += 1;
    }
    let used: i64 = s.iter().map(|x| x * (x - 1)).sum::<i64>() / 2;
    let d = g - used;
    if d < 0 {
        return None;
    }
    s.extend(std::iter::repeat_n(2, d as usize));
    let rho = StableCoefficients::new(s).ok()?;
    (expected_counts(&rho) == *counts).then_some(rho)
}

/// `N = sum rho_i^2 + max_k (rho_k - sum_{i > k} rho_i)` for decreasing rho.
pub fn n_invariant(rho: &StableCoefficients) -> Result<i64> {
    let r = rho.as_slice();
    if r.is_empty() {
        return Err(Error::EmptyStableCoefficients);
    }
    let mut tail = 0i64;
    let mut best = i64::MIN;
    for &x in r.iter().rev() {
        best = best.max(x - tail);
        tail += x;
    }
    Ok(rho.sum_of_squares() + best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Flavor {
    /// Slope `n`.
    Integer { n: i64 },
    /// Slope `n - 1/2`.
    HalfInteger { n: i64 },
}

impl Flavor {
    pub fn slope_string(&self) -> String {
        match *self {
            Flavor::Integer { n } => n.to_string(),
            Flavor::HalfInteger { n } => format!("{}.5", n - 1),
        }
    }

    /// Slope as a fraction `p/q`.
    pub fn slope_fraction(&self) -> (i64, i64) {
        match *self {
            Flavor::Integer { n } => (n, 1),
            Flavor::HalfInteger { n } => (2 * n - 1, 2),
        }
    }
}

/// An integer or half-integer changemaker lattice. Half-integer lattices
/// live in `Z^(r+2)` with coordinates ordered `e_-1, e_0, e_1, ..., e_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangemakerLattice {
    pub flavor: Flavor,
    pub sigma: ChangemakerVector,
    pub ambient_rank: usize,
    pub defining_vectors: Vec<Vec<i64>>,
}

impl ChangemakerLattice {
    pub fn integer(sigma: ChangemakerVector) -> Self {
        let n = sigma.norm();
        ChangemakerLattice {
            flavor: Flavor::Integer { n },
            ambient_rank: sigma.len(),
            defining_vectors: vec![sigma.as_slice().to_vec()],
            sigma,
        }
    }

    /// Half-integer lattice of slope `|sigma| + 1/2`.
    pub fn half_integer(sigma: ChangemakerVector) -> Self {
        let n = sigma.norm() + 1;
        let r = sigma.len();
        let mut a = vec![0; r + 2];
        a[0] = 1;
        a[1] = -1;
        let mut b = vec![0, 1];
        b.extend_from_slice(sigma.as_slice());
        ChangemakerLattice {
            flavor: Flavor::HalfInteger { n },
            ambient_rank: r + 2,
            defining_vectors: vec![a, b],
            sigma,
        }
    }

    pub fn is_half_integer(&self) -> bool {
        matches!(self.flavor, Flavor::HalfInteger { .. })
    }

    pub fn rank(&self) -> usize {
        match self.flavor {
            Flavor::Integer { .. } => self.sigma.len() - 1,
            Flavor::HalfInteger { .. } => self.sigma.len(),
        }
    }

    /// Discriminant: `n` for slope `n`, `2n - 1` for slope `n - 1/2`.
    pub fn disc(&self) -> i64 {
        match self.flavor {
            Flavor::Integer { n } => n,
            Flavor::HalfInteger { n } => 2 * n - 1,
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.ambient_rank
            && self.defining_vectors.iter().all(|d| linalg::dot(d, v) == 0)
    }

    /// A basis: the standard basis in the integer case, and
    /// `f_k = e_k - sigma_k (e_0 + e_-1)` in the half-integer case.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        match self.flavor {
            Flavor::Integer { .. } => standard_basis(&self.sigma),
            Flavor::HalfInteger { .. } => {
                let r = self.sigma.len();
                (0..r)
                    .map(|k| {
                        let s = self.sigma.as_slice()[k];
                        let mut v = vec![0; r + 2];
                        v[0] = -s;
                        v[1] = -s;
                        v[k + 2] = 1;
                        v
                    })
                    .collect()
            }
        }
    }

    /// Embed a vector of the inner lattice `<sigma>^perp` (half-integer case).
    pub fn lift_inner(&self, v: &[i64]) -> Vec<i64> {
        match self.flavor {
            Flavor::Integer { .. } => v.to_vec(),
            Flavor::HalfInteger { .. } => {
                let mut out = vec![0, 0];
                out.extend_from_slice(v);
                out
            }
        }
    }
}

/// Integer `n`-changemaker lattice with the given stable coefficients.
pub fn build_integer_lattice(rho: &StableCoefficients, n: i64) -> Result<ChangemakerLattice> {
    let big_n = n_invariant(rho)?;
    if n < big_n - 1 {
        return Err(Error::SlopeTooSmall {
            slope: n.to_string(),
            minimum: (big_n - 1).to_string(),
        });
    }
    Ok(ChangemakerLattice::integer(sigma_for(rho, n)?))
}

/// Half-integer lattice of slope `n - 1/2`; the inner changemaker vector
/// has norm `n - 1`.
pub fn build_half_integer_lattice(rho: &StableCoefficients, n: i64) -> Result<ChangemakerLattice> {
    let big_n = n_invariant(rho)?;
    if n < big_n {
        return Err(Error::SlopeTooSmall {
            slope: format!("{}.5", n - 1),
            minimum: format!("{}.5", big_n - 1),
        });
    }
    Ok(ChangemakerLattice::half_integer(sigma_for(rho, n - 1)?))
}

fn sigma_for(rho: &StableCoefficients, norm: i64) -> Result<ChangemakerVector> {
    let ones = norm - rho.sum_of_squares();
    if ones < 0 {
        return Err(Error::Precondition(format!("norm {norm} below sum of squares")));
    }
    let mut sigma = vec![1; ones as usize];
    sigma.extend(rho.as_slice().iter().rev());
    ChangemakerVector::new(sigma)
}

/// `v^(2), ..., v^(r)` as ambient coordinate vectors.
pub fn standard_basis(sigma: &ChangemakerVector) -> Vec<Vec<i64>> {
    let s = sigma.as_slice();
    let r = s.len();
    let mut prefix = 0i64;
    let mut out = Vec::with_capacity(r.saturating_sub(1));
    for k in 0..r {
        if k > 0 {
            let mut v = vec![0; r];
            v[k] = -1;
            if s[k] == prefix + 1 {
                v[0] = 2;
                v[1..k].iter_mut().for_each(|x| *x = 1);
            } else {
                for i in greedy_subset(&s[..k], s[k]).expect("changemaker") {
                    v[i - 1] = 1;
                }
            }
            out.push(v);
        }
        prefix += s[k];
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangemakerFlags {
    pub tight: bool,
    pub very_slack: bool,
    /// Least 1-based index with `sigma_m >= 2`, or `r + 1`.
    pub m: usize,
}

pub fn classify_flags(sigma: &ChangemakerVector) -> ChangemakerFlags {
    let s = sigma.as_slice();
    let mut prefix = 0i64;
    let mut tight = false;
    let mut stable = false;
    let mut very_slack = true;
    for (k, &x) in s.iter().enumerate() {
        if k > 0 && x == prefix + 1 {
            tight = true;
        }
        if x > 1 {
            stable = true;
            if x > prefix - 1 {
                very_slack = false;
            }
        }
        prefix += x;
    }
    let m = s.iter().position(|&x| x >= 2).map_or(s.len() + 1, |i| i + 1);
    ChangemakerFlags {
        tight,
        very_slack: stable && very_slack,
        m,
    }
}

/// Continued fraction `p/q = a_0 - 1/(a_1 - 1/(...))` with `a_i >= 2` for `i >= 1`.
pub fn continued_fraction(p: i64, q: i64) -> Result<Vec<i64>> {
    if q < 1 || p <= 0 {
        return Err(Error::InvalidSlope { p, q });
    }
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    loop {
        let a = (p + q - 1) / q;
        out.push(a);
        let rem = a * q - p;
        if rem == 0 {
            return Ok(out);
        }
        (p, q) = (q, rem);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(v: &[i64]) -> ChangemakerVector {
        ChangemakerVector::new(v.to_vec()).unwrap()
    }

    fn rho(v: &[i64]) -> StableCoefficients {
        StableCoefficients::new(v.to_vec()).unwrap()
    }

    #[test]
    fn changemaker_predicate() {
        assert!(is_changemaker(&[1, 1, 2, 3]));
        assert!(!is_changemaker(&[1, 3]));
        assert!(!is_changemaker(&[2, 3]));
        assert!(!is_changemaker(&[]));
        assert!(!is_changemaker(&[1, 2, 1]));
    }

    #[test]
    fn greedy_subsets() {
        assert_eq!(subset_representation(&cm(&[1, 1, 2, 3]), 4, 4).unwrap(), vec![4, 2]);
        assert!(subset_representation(&cm(&[1, 1, 2, 3]), 4, 0).unwrap().is_empty());
        assert_eq!(subset_representation(&cm(&[1, 2]), 2, 2).unwrap(), vec![2]);
        assert!(subset_representation(&cm(&[1, 2]), 2, 4).is_err());
    }

    #[test]
    fn greedy_always_succeeds_on_changemaker_prefixes() {
        let s = cm(&[1, 1, 2, 4, 5, 12, 17, 26]);
        for k in 1..=s.len() {
            let total: i64 = s.as_slice()[..k].iter().sum();
            for t in 0..=total {
                let a = subset_representation(&s, k, t).unwrap();
                assert_eq!(a.iter().map(|&i| s.as_slice()[i - 1]).sum::<i64>(), t);
            }
        }
    }

    #[test]
    fn pretzel_counts_give_stable_coefficients() {
        let c = TorsionCounts { counts: vec![0, 3, 5] };
        assert_eq!(stable_coefficients(&c, 5, 2), Some(rho(&[3, 2, 2])));
        assert_eq!(expected_counts(&rho(&[3, 2, 2])), c);
    }

    #[test]
    fn torus_two_nine_gives_twos() {
        use crate::alexpoly::*;
        let p = parse_polynomial(&[1, -1, 1, -1, 1]).unwrap();
        let t = torsion_coefficients(&p);
        assert_eq!(t.t, vec![2, 2, 1, 1, 0]);
        let c = torsion_counts(&t).unwrap();
        assert_eq!(c.counts, vec![0, 2, 4]);
        assert_eq!(stable_coefficients(&c, 4, 2), Some(rho(&[2, 2, 2, 2])));
    }

    #[test]
    fn table_row_round_trip() {
        let r = rho(&[5, 4, 3, 2, 2]);
        let c = expected_counts(&r);
        assert_eq!(c.counts, vec![0, 5, 9, 12, 14, 17, 19, 21]);
        assert_eq!(stable_coefficients(&c, 21, 7), Some(r));
    }

    #[test]
    fn loop_runs_through_t0() {
        // t_0 = 1 and g = 3: only a single step of the loop recovers (3).
        for r in [vec![3], vec![3, 3], vec![3, 3, 3], vec![4, 3], vec![8, 3, 3], vec![3, 3, 3, 2]] {
            let r = rho(&r);
            let c = expected_counts(&r);
            assert_eq!(stable_coefficients(&c, r.genus(), c.t0()), Some(r));
        }
    }

    #[test]
    fn small_expected_counts() {
        let c = expected_counts(&rho(&[2]));
        assert_eq!(c.counts, vec![0, 1]);
        assert_eq!(rho(&[12, 9, 5, 4, 2]).genus(), 119);
    }

    #[test]
    fn inconsistent_counts_are_rejected() {
        assert_eq!(stable_coefficients(&TorsionCounts { counts: vec![0, 4, 5] }, 5, 2), None);
        assert_eq!(stable_coefficients(&TorsionCounts { counts: vec![0, 1, 5] }, 5, 2), None);
    }

    #[test]
    fn n_values() {
        assert_eq!(n_invariant(&rho(&[5, 4, 3, 2, 2])).unwrap(), 60);
        assert_eq!(n_invariant(&rho(&[5, 2])).unwrap(), 32);
        assert_eq!(n_invariant(&rho(&[12, 9, 5, 4, 2])).unwrap(), 272);
        assert_eq!(n_invariant(&rho(&[2])).unwrap(), 6);
        assert_eq!(n_invariant(&rho(&[3, 2, 2])).unwrap(), 19);
        assert_eq!(n_invariant(&rho(&[])), Err(Error::EmptyStableCoefficients));
    }

    #[test]
    fn integer_lattices() {
        let l = build_integer_lattice(&rho(&[2]), 6).unwrap();
        assert_eq!(l.sigma.as_slice(), &[1, 1, 2]);
        assert_eq!(l.ambient_rank, 3);
        assert_eq!(l.disc(), 6);
        let l = build_integer_lattice(&rho(&[3, 2, 2]), 18).unwrap();
        assert_eq!(l.sigma.as_slice(), &[1, 2, 2, 3]);
        assert!(matches!(
            build_integer_lattice(&rho(&[2]), 4),
            Err(Error::SlopeTooSmall { .. })
        ));
        assert!(build_integer_lattice(&rho(&[2]), 5).is_ok());
    }

    #[test]
    fn half_integer_lattices() {
        let l = build_half_integer_lattice(&rho(&[3, 2, 2]), 19).unwrap();
        assert_eq!(l.sigma.as_slice(), &[1, 2, 2, 3]);
        assert_eq!(l.disc(), 37);
        assert_eq!(l.flavor.slope_string(), "18.5");
        assert_eq!(l.rank(), 4);
        let l = build_half_integer_lattice(&rho(&[12, 9, 5, 4, 2]), 272).unwrap();
        assert_eq!(l.sigma.norm(), 271);
        assert_eq!(l.sigma.as_slice()[..2], [1, 2]);
        assert!(matches!(
            build_half_integer_lattice(&rho(&[2]), 5),
            Err(Error::SlopeTooSmall { .. })
        ));
    }

    #[test]
    fn standard_bases() {
        assert_eq!(standard_basis(&cm(&[1, 2])), vec![vec![2, -1]]);
        assert_eq!(standard_basis(&cm(&[1, 1])), vec![vec![1, -1]]);
        assert_eq!(
            standard_basis(&cm(&[1, 1, 2])),
            vec![vec![1, -1, 0], vec![1, 1, -1]]
        );
    }

    #[test]
    fn flags() {
        let f = classify_flags(&cm(&[1, 2]));
        assert!(f.tight);
        assert_eq!(f.m, 2);
        let f = classify_flags(&cm(&[1, 1, 1, 2, 2, 3]));
        assert!(f.very_slack && !f.tight);
        let f = classify_flags(&cm(&[1, 1]));
        assert_eq!(f.m, 3);
        assert!(!f.tight && !f.very_slack);
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(continued_fraction(7, 2).unwrap(), vec![4, 2]);
        assert_eq!(continued_fraction(5, 1).unwrap(), vec![5]);
        assert_eq!(continued_fraction(37, 2).unwrap(), vec![19, 2]);
        assert_eq!(continued_fraction(5, 0), Err(Error::InvalidSlope { p: 5, q: 0 }));
        assert_eq!(continued_fraction(-3, 2), Err(Error::InvalidSlope { p: -3, q: 2 }));
    }
}
