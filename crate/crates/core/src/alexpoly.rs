//! Symmetrized Alexander polynomials and their torsion invariants.
//!
//! A polynomial is stored by its half-coefficient list `(a_0, ..., a_g)`
//! standing for `a_0 + sum a_i (x^i + x^-i)`. Raw input lists are written
//! the way the polynomial is usually printed: from `a_g` down to `a_0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlexanderPolynomial {
    coeffs: Vec<i64>,
}

impl AlexanderPolynomial {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient.
    pub fn genus_degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Torsion coefficients `t_0, ..., t_g` (with `t_g = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub t: Vec<i64>,
}

impl TorsionProfile {
    pub fn genus_degree(&self) -> usize {
        self.t.len() - 1
    }
}

/// Counts `T_0 = 0, T_1, ..., T_{t_0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCounts {
    pub counts: Vec<i64>,
}

impl TorsionCounts {
    pub fn t0(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn genus(&self) -> i64 {
        *self.counts.last().unwrap_or(&0)
    }

    /// The (decreasing) torsion profile these counts describe.
    pub fn to_profile(&self) -> TorsionProfile {
        let mut t = Vec::new();
        for k in (1..self.counts.len()).rev() {
            let run = self.counts[k] - self.counts[k - 1];
            t.extend(std::iter::repeat_n(k as i64, run.max(0) as usize));
        }
        t.push(0);
        TorsionProfile { t }
    }
}

/// Parse a raw coefficient list `a_g, ..., a_1, a_0` (highest power first),
/// fixing the overall sign.
pub fn parse_polynomial(raw: &[i64]) -> Result<AlexanderPolynomial> {
    let mut coeffs = raw.to_vec();
    coeffs.reverse();
    from_half_coefficients(&coeffs)
}

/// Validate a half-coefficient list `a_0, ..., a_g`, fixing the overall sign.
pub fn from_half_coefficients(a: &[i64]) -> Result<AlexanderPolynomial> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut coeffs = a.to_vec();
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    let mut value = coeffs[0];
    for &a in &coeffs[1..] {
        value = a
            .checked_mul(2)
            .and_then(|d| value.checked_add(d))
            .ok_or(Error::Overflow("polynomial value at 1"))?;
    }
    match value {
        1 => {}
        -1 => coeffs.iter_mut().for_each(|a| *a = -*a),
        _ => return Err(Error::Normalization { value }),
    }
    Ok(AlexanderPolynomial { coeffs })
}

/// Accept the full Laurent list `(a_-g, ..., a_0, ..., a_g)` and fold it.
pub fn parse_laurent(full: &[i64]) -> Result<AlexanderPolynomial> {
    if full.is_empty() {
        return Err(Error::EmptyInput);
    }
    if full.len().is_multiple_of(2) || full.iter().ne(full.iter().rev()) {
        return Err(Error::Asymmetric);
    }
    from_half_coefficients(&full[full.len() / 2..])
}

/// `t_i = sum_{j >= 1} j a_{i+j}`.
pub fn torsion_coefficients(p: &AlexanderPolynomial) -> TorsionProfile {
    let a = &p.coeffs;
    let g = a.len() - 1;
    let t = (0..=g)
        .map(|i| {
            (i + 1..=g)
                .map(|k| (k - i) as i64 * a[k])
                .sum::<i64>()
        })
        .collect();
    TorsionProfile { t }
}

pub fn is_lspace_form(p: &TorsionProfile) -> bool {
    let t = &p.t;
    let g = t.len() - 1;
    if t.iter().any(|&x| x < 0) || t[g] != 0 {
        return false;
    }
    if g >= 1 && t[g - 1] != 1 {
        return false;
    }
    t.windows(2).all(|w| w[0] >= w[1] && w[1] >= w[0] - 1)
}

pub fn torsion_counts(p: &TorsionProfile) -> Result<TorsionCounts> {
    if !is_lspace_form(p) {
        return Err(Error::NotLSpaceForm);
    }
    let g = p.genus_degree();
    let t0 = p.t[0];
    let counts = (0..=t0)
        .map(|k| p.t[..g].iter().filter(|&&x| x > 0 && x <= k).count() as i64)
        .collect();
    Ok(TorsionCounts { counts })
}

/// Rebuild the polynomial from a torsion profile by second differences.
pub fn polynomial_from_profile(p: &TorsionProfile) -> Result<AlexanderPolynomial> {
    let t = &p.t;
    let g = t.len() - 1;
    let at = |i: usize| if i <= g { t[i] } else { 0 };
    let mut coeffs = vec![0; g + 1];
    for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = at(i - 1) - 2 * at(i) + at(i + 1);
    }
    coeffs[0] = 1 - 2 * coeffs[1..].iter().sum::<i64>();
    from_half_coefficients(&coeffs)
}
