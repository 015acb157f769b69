//! Exact irreducible-vector computation.
//!
//! A nonzero lattice vector `v` is irreducible (no splitting `v = x + y` with
//! `x . y >= 0`) exactly when `+-v` are the only minimal vectors of the coset
//! `v + 2L`. Each nonzero class of `L / 2L` is minimised by an exact
//! Fincke-Pohst enumeration over rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::linalg::{dot, norm};

/// Size-reduce pairs of basis vectors until no `2|b_i . b_j| > |b_j|`.
pub fn pair_reduce(mut basis: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let n = basis.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let g = dot(&basis[i], &basis[j]);
                let nj = norm(&basis[j]);
                if 2 * g.abs() > nj {
                    let q = div_round(g, nj);
                    let bj = basis[j].clone();
                    basis[i].iter_mut().zip(&bj).for_each(|(a, b)| *a -= q * b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by_key(|b| norm(b));
    basis
}

fn div_round(a: i64, b: i64) -> i64 {
    (2 * a + b).div_euclid(2 * b)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact Gram-Schmidt data of a lattice basis, for enumeration.
pub struct Enumerator {
    basis: Vec<Vec<i64>>,
    /// `mu[i][j]` for `j < i`.
    mu: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
}

impl Enumerator {
    pub fn new(basis: Vec<Vec<i64>>) -> Self {
        let n = basis.len();
        let gram: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&basis[i], &basis[j])).collect())
            .collect();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut b: Vec<BigRational> = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..i {
                let mut s = rat(gram[i][j]);
                for k in 0..j {
                    s -= &mu[j][k] * &mu[i][k] * &b[k];
                }
                mu[i][j] = s / &b[j];
            }
            let mut s = rat(gram[i][i]);
            for k in 0..i {
                s -= &mu[i][k] * &mu[i][k] * &b[k];
            }
            b.push(s);
        }
        Enumerator { basis, mu, b }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn combine(&self, x: &[i64]) -> Vec<i64> {
        let dim = self.basis.first().map_or(0, |v| v.len());
        let mut v = vec![0; dim];
        for (c, b) in x.iter().zip(&self.basis) {
            if *c != 0 {
                v.iter_mut().zip(b).for_each(|(a, bb)| *a += c * bb);
            }
        }
        v
    }

    /// Minimal vectors of the class `sum parity_i b_i + 2L` with norm at most
    /// `radius`, as `(norm, vectors)`. `None` when the class has no vector
    /// within the radius.
    pub fn coset_minimum(&self, parity: &[bool], radius: i64) -> Option<(i64, Vec<Vec<i64>>)> {
        let n = self.rank();
        let rep: Vec<i64> = parity.iter().map(|&p| p as i64).collect();
        let rep_norm = norm(&self.combine(&rep));
        let mut state = CosetSearch {
            best: radius.min(rep_norm),
            found: Vec::new(),
        };
        let mut x = vec![0i64; n];
        self.descend(n, parity, &mut x, &BigRational::zero(), &mut state);
        if state.found.is_empty() {
            None
        } else {
            Some((state.best, state.found))
        }
    }

    fn descend(
        &self,
        level: usize,
        parity: &[bool],
        x: &mut [i64],
        acc: &BigRational,
        state: &mut CosetSearch,
    ) {
        if level == 0 {
            if x.iter().all(|&c| c == 0) {
                return;
            }
            let v = self.combine(x);
            let nv = norm(&v);
            if nv < state.best {
                state.best = nv;
                state.found.clear();
            }
            if nv == state.best {
                state.found.push(v);
            }
            return;
        }
        let j = level - 1;
        let mut center = BigRational::zero();
        for (mu, &xi) in self.mu[level..].iter().zip(&x[level..]) {
            if xi != 0 {
                center -= &mu[j] * rat(xi);
            }
        }
        let want = parity[j] as i64;
        // largest integer <= center with the required parity
        let fl = center.floor().to_integer();
        let fl = i64::try_from(fl).expect("coordinate fits in i64");
        let start_down = if fl.rem_euclid(2) == want { fl } else { fl - 1 };
        let step = |xj: i64, x: &mut [i64], state: &mut CosetSearch| -> bool {
            let d = rat(xj) - &center;
            let total = acc + &self.b[j] * &d * &d;
            if total > rat(state.best) {
                return false;
            }
            x[j] = xj;
            self.descend(j, parity, x, &total, state);
            x[j] = 0;
            true
        };
        let mut xj = start_down;
        while step(xj, x, state) {
            xj -= 2;
        }
        let mut xj = start_down + 2;
        while step(xj, x, state) {
            xj += 2;
        }
    }
}

struct CosetSearch {
    best: i64,
    found: Vec<Vec<i64>>,
}

/// All irreducible vectors of norm at most `max_norm` in the lattice spanned
/// by `basis`, sorted by norm.
pub fn irreducible_vectors(basis: &[Vec<i64>], max_norm: i64) -> Vec<Vec<i64>> {
    let reduced = pair_reduce(basis.to_vec());
    let n = reduced.len();
    if n == 0 {
        return Vec::new();
    }
    assert!(n < 30, "rank too large for coset enumeration");
    let en = Enumerator::new(reduced);
    let classes: Vec<u32> = (1..(1u32 << n)).collect();
    let per_class: Vec<Vec<Vec<i64>>> = classes
        .par_iter()
        .map(|&mask| {
            let parity: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            match en.coset_minimum(&parity, max_norm) {
                Some((_, vs)) if vs.len() == 2 => vs,
                _ => Vec::new(),
            }
        })
        .collect();
    let mut out: Vec<Vec<i64>> = per_class.into_iter().flatten().collect();
    out.sort_by(|a, b| norm(a).cmp(&norm(b)).then_with(|| b.cmp(a)));
    out
}

/// `true` iff `v` is irreducible: checked against every lattice vector of
/// norm at most `|v|` in the class `v + 2L`. Intended for small inputs.
pub fn is_irreducible(basis: &[Vec<i64>], v: &[i64]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return false;
    }
    let nv = norm(v);
    irreducible_vectors(basis, nv).iter().any(|w| w == v)
}
