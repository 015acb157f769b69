//! Independent reference implementations shared by integration tests.
#![allow(dead_code)]

use altsurg::changemaker::{ChangemakerLattice, Flavor};

/// All changemaker vectors of length `2..=max_len` and norm at most
/// `max_norm`.
pub fn changemakers(max_len: usize, max_norm: i64) -> Vec<Vec<i64>> {
    fn grow(cur: &mut Vec<i64>, sum: i64, norm: i64, max_len: usize, max_norm: i64, out: &mut Vec<Vec<i64>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        let lo = *cur.last().unwrap();
        for next in lo..=sum + 1 {
            if norm + next * next > max_norm {
                break;
            }
            cur.push(next);
            grow(cur, sum + next, norm + next * next, max_len, max_norm, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut vec![1], 1, 1, max_len, max_norm, &mut out);
    out
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact determinant by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gram(vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect()
}

/// Discriminant recomputed from the flavor.
pub fn expected_disc(l: &ChangemakerLattice) -> i64 {
    match l.flavor {
        Flavor::Integer { n } => n,
        Flavor::HalfInteger { n } => 2 * n - 1,
    }
}

/// Checks the obtuse superbase axioms directly: membership, zero sum,
/// nonpositive pairings, and that any `rank` of the vectors have Gram
/// determinant equal to the discriminant.
pub fn is_obtuse_superbase(l: &ChangemakerLattice, vs: &[Vec<i64>]) -> bool {
    let dim = l.ambient_rank;
    let rank = dim - l.defining_vectors.len();
    if vs.len() != rank + 1 || vs.iter().any(|v| v.len() != dim) {
        return false;
    }
    if vs.iter().any(|v| l.defining_vectors.iter().any(|d| dot(v, d) != 0)) {
        return false;
    }
    if (0..dim).any(|i| vs.iter().map(|v| v[i]).sum::<i64>() != 0) {
        return false;
    }
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if dot(&vs[i], &vs[j]) > 0 {
                return false;
            }
        }
    }
    det(&gram(&vs[..rank])) == expected_disc(l) as i128
}

/// Every vector `z` with `sigma . z = 0` and `0 < |z|^2 <= bound`, by box
/// enumeration.
pub fn short_vectors(sigma: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let r = sigma.len();
    let c = (bound as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let mut z = vec![-c; r];
    loop {
        let nz = dot(&z, &z);
        if nz > 0 && nz <= bound && dot(&z, sigma) == 0 {
            out.push(z.clone());
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            z[i] += 1;
            if z[i] <= c {
                break;
            }
            z[i] = -c;
            i += 1;
        }
    }
}

/// Existence of an obtuse superbase of the integer lattice of `sigma`,
/// among vectors of norm at most the discriminant.
pub fn oracle_has_superbase(sigma: &[i64]) -> bool {
    let n = dot(sigma, sigma);
    let r = sigma.len();
    let short = short_vectors(sigma, n);
    // choose r - 1 vectors in increasing index order; the last is forced
    fn dfs(short: &[Vec<i64>], chosen: &mut Vec<usize>, start: usize, need: usize, n: i64) -> bool {
        if chosen.len() == need {
            let r = short[0].len();
            let mut last = vec![0; r];
            for &i in chosen.iter() {
                last.iter_mut().zip(&short[i]).for_each(|(a, b)| *a -= b);
            }
            let nl = dot(&last, &last);
            if nl == 0 || nl > n || chosen.iter().any(|&i| dot(&short[i], &last) > 0) {
                return false;
            }
            let vs: Vec<Vec<i64>> = chosen.iter().map(|&i| short[i].clone()).collect();
            return det(&gram(&vs)) == n as i128;
        }
        for k in start..short.len() {
            if chosen.iter().all(|&i| dot(&short[i], &short[k]) <= 0) {
                chosen.push(k);
                if dfs(short, chosen, k + 1, need, n) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    dfs(&short, &mut Vec::new(), 0, r - 1, n)
}
