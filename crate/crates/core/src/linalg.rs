//! Exact integer linear algebra helpers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[i64]) -> i64 {
    dot(a, a)
}

pub fn add_assign(acc: &mut [i64], v: &[i64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x;
    }
}

pub fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// Floor of the square root of a nonnegative integer (0 for negative input).
pub fn isqrt(x: i64) -> i64 {
    if x <= 0 {
        0
    } else {
        (x as u64).isqrt() as i64
    }
}

pub fn gram(vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    vs.iter()
        .map(|a| vs.iter().map(|b| dot(a, b)).collect())
        .collect()
}

fn bareiss_i128(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_big(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    match bareiss_i128(m) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(m),
    }
}

/// Determinant as i128 when it fits.
pub fn determinant_i128(m: &[Vec<i64>]) -> Option<i128> {
    bareiss_i128(m).or_else(|| i128::try_from(bareiss_big(m)).ok())
}
