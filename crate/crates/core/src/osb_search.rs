//! Obtuse superbase search for integer and half-integer changemaker lattices.
//!
//! Candidates are the irreducible vectors of norm at most the discriminant,
//! computed exactly (see [`crate::voronoi`]) and then cut down by the
//! coordinate bounds and the pairing conditions against the pinned norm-two
//! vectors. A clique search over pairwise-obtuse candidates closes each
//! subset with the negated sum and checks spanning by Gram determinant.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::changemaker::{classify_flags, subset_representation, ChangemakerLattice, ChangemakerVector};
use crate::error::{Error, Result};
use crate::goeritz::{planarity, PlanarEmbedding};
use crate::lattice::{validate_superbase, ExhaustionRecord, ObtuseSuperbase};
use crate::linalg::{self, dot, isqrt, norm};
use crate::voronoi;

pub const ALGORITHM_VERSION: &str = "coset-irreducibles/clique-1";

pub const DEFAULT_CAP_VECTORS: u64 = 5_000_000;
pub const DEFAULT_CAP_NODES: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObstructionReason {
    /// `sigma_m < m - 2`.
    SigmaMTooSmall { m: usize, sigma_m: i64 },
    /// A run of `len >= 4` equal entries starting at 1-based index `start > 1`
    /// followed by an entry strictly between `sigma_start` and
    /// `(len - 1) sigma_start`.
    LongRun { start: usize, len: usize, later: usize },
}

/// Formula-level obstructions to an obtuse superbase (advisory).
pub fn pre_obstructions(sigma: &ChangemakerVector) -> Option<ObstructionReason> {
    let s = sigma.as_slice();
    let flags = classify_flags(sigma);
    if flags.m <= s.len() {
        let sigma_m = s[flags.m - 1];
        if sigma_m < flags.m as i64 - 2 {
            return Some(ObstructionReason::SigmaMTooSmall { m: flags.m, sigma_m });
        }
    }
    let mut b = 0;
    while b < s.len() {
        let mut e = b;
        while e + 1 < s.len() && s[e + 1] == s[b] {
            e += 1;
        }
        let len = e - b + 1;
        if b > 0 && len >= 4 {
            let v = s[b];
            if let Some(k) = (e + 1..s.len()).find(|&k| s[k] > v && s[k] < (len as i64 - 1) * v) {
                return Some(ObstructionReason::LongRun { start: b + 1, len, later: k + 1 });
            }
        }
        b = e + 1;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSource {
    CauchySchwarz,
    IrredBound,
    SigmaM,
    HalfIntColSum,
    QuickBox,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateBounds {
    pub bounds: Vec<i64>,
    pub sources: Vec<BoundSource>,
}

impl CoordinateBounds {
    fn cap(&mut self, value: i64, source: BoundSource) {
        for (b, s) in self.bounds.iter_mut().zip(self.sources.iter_mut()) {
            if value < *b {
                *b = value;
                *s = source;
            }
        }
    }

    pub fn admits(&self, z: &[i64]) -> bool {
        z.iter().zip(&self.bounds).all(|(x, b)| x.abs() <= *b)
    }
}

/// Coordinate bounds for obtuse superbase vectors of an integer lattice.
pub fn coordinate_bounds(l: &ChangemakerLattice) -> Result<CoordinateBounds> {
    if l.is_half_integer() {
        return Err(Error::WrongFlavor("coordinate_bounds needs an integer lattice"));
    }
    Ok(sigma_bounds(&l.sigma, l.disc()))
}

/// Bounds on the inner-lattice part of obtuse superbase vectors of a
/// half-integer lattice (norm bounded by the discriminant of the full lattice).
pub fn inner_coordinate_bounds(l: &ChangemakerLattice) -> Result<CoordinateBounds> {
    if !l.is_half_integer() {
        return Err(Error::WrongFlavor("inner_coordinate_bounds needs a half-integer lattice"));
    }
    Ok(sigma_bounds(&l.sigma, l.disc()))
}

/// Bounds for irreducible vectors `z` of `<sigma>^perp` with `|z| <= max_norm`.
fn sigma_bounds(sigma: &ChangemakerVector, max_norm: i64) -> CoordinateBounds {
    let s = sigma.as_slice();
    let n = sigma.norm();
    let r = s.len();
    let mut bounds = Vec::with_capacity(r);
    let mut sources = Vec::with_capacity(r);
    // (sigma_k z_k)^2 <= (max_norm - z_k^2)(n - sigma_k^2)
    for &sk in s {
        bounds.push(isqrt(max_norm * (n - sk * sk) / n));
        sources.push(BoundSource::CauchySchwarz);
    }
    let flags = classify_flags(sigma);
    if s.last().copied().unwrap_or(1) < 2 {
        return CoordinateBounds { bounds, sources };
    }
    let mut prefix = 0i64;
    for k in 0..r {
        let irred = if s[k] == 1 {
            if flags.tight { 2 } else { 1 }
        } else if s[k] == prefix + 1 {
            5 + bounds[..k].iter().map(|b| b + 1).sum::<i64>()
        } else {
            let a = subset_representation(sigma, k, s[k]).expect("changemaker");
            a.iter().map(|&i| bounds[i - 1] + 1).sum()
        };
        if irred < bounds[k] {
            bounds[k] = irred;
            sources[k] = BoundSource::IrredBound;
        }
        if k + 1 == flags.m && s[k] < bounds[k] {
            bounds[k] = s[k];
            sources[k] = BoundSource::SigmaM;
        }
        prefix += s[k];
    }
    CoordinateBounds { bounds, sources }
}

/// Value-dependent form of the irreducible coordinate bounds.
fn within_dynamic_bounds(sigma: &ChangemakerVector, z: &[i64]) -> bool {
    let s = sigma.as_slice();
    if s.last().copied().unwrap_or(1) < 2 {
        return true;
    }
    let mut prefix = 0i64;
    for k in 0..s.len() {
        if s[k] > 1 {
            let limit = if s[k] == prefix + 1 {
                5 + z[..k].iter().map(|x| x.abs() + 1).sum::<i64>()
            } else {
                let a = subset_representation(sigma, k, s[k]).expect("changemaker");
                a.iter().map(|&i| z[i - 1].abs() + 1).sum()
            };
            if z[k].abs() > limit {
                return false;
            }
        }
        prefix += s[k];
    }
    true
}

/// All nonzero `z` with `|z_k| <= b_k` and `sigma . z = 0`.
pub fn enumerate_v_bound(l: &ChangemakerLattice, bounds: &CoordinateBounds, cap: u64) -> Result<Vec<Vec<i64>>> {
    let s = l.sigma.as_slice();
    let r = s.len();
    if bounds.bounds.len() != r {
        return Err(Error::RankMismatch { left: bounds.bounds.len(), right: r });
    }
    // capacity[k] = max |sigma . z| achievable on coordinates 0..k
    let mut capacity = vec![0i64; r + 1];
    for k in 0..r {
        capacity[k + 1] = capacity[k] + s[k] * bounds.bounds[k];
    }
    let mut out = Vec::new();
    let mut z = vec![0i64; r];
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        partial: i64,
        s: &[i64],
        b: &[i64],
        capacity: &[i64],
        z: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        cap: u64,
    ) -> Result<()> {
        if k == 0 {
            if partial == 0 && z.iter().any(|&x| x != 0) {
                if out.len() as u64 >= cap {
                    return Err(Error::SearchSpaceOverflow { what: "v_bound".into(), cap });
                }
                out.push(z.clone());
            }
            return Ok(());
        }
        let i = k - 1;
        for x in (-b[i]..=b[i]).rev() {
            let p = partial + s[i] * x;
            if p.abs() <= capacity[i] {
                z[i] = x;
                go(i, p, s, b, capacity, z, out, cap)?;
            }
        }
        z[i] = 0;
        Ok(())
    }
    go(r, 0, s, &bounds.bounds, &capacity, &mut z, &mut out, cap)?;
    Ok(out)
}

/// The norm-two vectors `e_i - e_{i+1}` lying in `<sigma>^perp`.
pub fn v2_vectors(sigma: &ChangemakerVector) -> Vec<Vec<i64>> {
    let s = sigma.as_slice();
    (0..s.len().saturating_sub(1))
        .filter(|&i| s[i] == s[i + 1])
        .map(|i| {
            let mut v = vec![0; s.len()];
            v[i] = 1;
            v[i + 1] = -1;
            v
        })
        .collect()
}

/// Keep `v` with `(v - w) . w < 0` for every other `w` in the list, and
/// with `v` in `v2` or `v . w` in `{0, -1}` for all `w` in `v2`.
pub fn filter_v_irred(v_bound: &[Vec<i64>], v2: &[Vec<i64>]) -> Vec<Vec<i64>> {
    v_bound
        .iter()
        .filter(|v| {
            v_bound
                .iter()
                .filter(|w| w != v)
                .all(|w| dot(v, w) - norm(w) < 0)
        })
        .filter(|v| v2.contains(v) || v2.iter().all(|w| matches!(dot(v, w), 0 | -1)))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub cap_vectors: u64,
    pub cap_nodes: u64,
    pub parallel: bool,
    /// Request the `|z_k| <= 2` cap in half-integer searches; needs
    /// `inner_witness`.
    pub colsum_cap: bool,
    /// An obtuse superbase of the inner integer lattice.
    pub inner_witness: Option<ObtuseSuperbase>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Full,
            cap_vectors: DEFAULT_CAP_VECTORS,
            cap_nodes: DEFAULT_CAP_NODES,
            parallel: true,
            colsum_cap: false,
            inner_witness: None,
        }
    }
}

impl SearchConfig {
    pub fn with_mode(mode: SearchMode) -> Self {
        SearchConfig { mode, ..Default::default() }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchResult {
    Found { superbase: ObtuseSuperbase },
    NoneExists { exhaustion: ExhaustionRecord },
    /// Quick mode only: nothing found inside the reduced box.
    Inconclusive { exhaustion: ExhaustionRecord },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub mode: SearchMode,
}

impl SearchOutcome {
    pub fn superbase(&self) -> Option<&ObtuseSuperbase> {
        match &self.result {
            SearchResult::Found { superbase } => Some(superbase),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.superbase().is_some()
    }

    pub fn exhaustion(&self) -> Option<&ExhaustionRecord> {
        match &self.result {
            SearchResult::Found { .. } => None,
            SearchResult::NoneExists { exhaustion } | SearchResult::Inconclusive { exhaustion } => Some(exhaustion),
        }
    }
}

/// Dispatch on the lattice flavor.
pub fn search(l: &ChangemakerLattice, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if l.is_half_integer() {
        search_half_integer(l, cfg)
    } else {
        search_integer(l, cfg)
    }
}

/// The cycle superbase `e_1 - e_2, ..., e_{r-1} - e_r, e_r - e_1`.
fn cycle_superbase(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v[(i + 1) % r] -= 1;
            v
        })
        .collect()
}

pub fn search_integer(l: &ChangemakerLattice, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if l.is_half_integer() {
        return Err(Error::WrongFlavor("search_integer needs an integer lattice"));
    }
    let s = l.sigma.as_slice();
    let r = s.len();
    if r < 2 {
        return Err(Error::Precondition("lattice of rank zero".into()));
    }
    let start = Instant::now();
    if s[r - 1] == 1 {
        let superbase = validate_superbase(l, &cycle_superbase(r))?;
        return Ok(SearchOutcome { result: SearchResult::Found { superbase }, mode: cfg.mode });
    }
    let mut bounds = coordinate_bounds(l)?;
    if cfg.mode == SearchMode::Quick {
        bounds.cap(2, BoundSource::QuickBox);
    }
    let irr = voronoi::irreducible_vectors(&l.basis(), l.disc());
    if irr.len() as u64 > cfg.cap_vectors {
        return Err(Error::SearchSpaceOverflow { what: "v_bound".into(), cap: cfg.cap_vectors });
    }
    let pinned = v2_vectors(&l.sigma);
    let free: Vec<Vec<i64>> = irr
        .iter()
        .filter(|v| !pinned.contains(v))
        .filter(|v| bounds.admits(v) && within_dynamic_bounds(&l.sigma, v))
        .filter(|v| pinned.iter().all(|w| matches!(dot(v, w), 0 | -1)))
        .cloned()
        .collect();
    let problem = SubsetProblem::new(l, pinned, free);
    finish(l, cfg, bounds, irr.len() as u64, problem, start)
}

pub fn search_half_integer(l: &ChangemakerLattice, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if !l.is_half_integer() {
        return Err(Error::WrongFlavor("search_half_integer needs a half-integer lattice"));
    }
    let start = Instant::now();
    let inner = ChangemakerLattice::integer(l.sigma.clone());
    let mut bounds = inner_coordinate_bounds(l)?;
    if cfg.colsum_cap {
        let witness = cfg
            .inner_witness
            .as_ref()
            .ok_or_else(|| Error::PrerequisiteMissing("column-sum cap needs an inner-lattice superbase".into()))?;
        validate_superbase(&inner, &witness.vectors)?;
        let colsum_ok = (0..inner.ambient_rank).all(|k| witness.vectors.iter().map(|v| v[k].abs()).sum::<i64>() <= 4);
        if !colsum_ok {
            return Err(Error::PrerequisiteMissing(
                "inner-lattice superbase has a column sum above 4".into(),
            ));
        }
        bounds.cap(2, BoundSource::HalfIntColSum);
    }
    if cfg.mode == SearchMode::Quick {
        bounds.cap(2, BoundSource::QuickBox);
    }
    let s = l.sigma.as_slice();
    let m = classify_flags(&l.sigma).m;
    let irr = if s.len() >= 2 {
        voronoi::irreducible_vectors(&inner.basis(), l.disc())
    } else {
        Vec::new()
    };
    if irr.len() as u64 > cfg.cap_vectors {
        return Err(Error::SearchSpaceOverflow { what: "v_bound".into(), cap: cfg.cap_vectors });
    }
    // -e_k + e_{k-1} for 2 <= k < m
    let chain: Vec<Vec<i64>> = v2_vectors(&l.sigma)
        .into_iter()
        .filter(|v| v.iter().position(|&x| x == -1).is_some_and(|k| k + 1 < m))
        .collect();
    let free: Vec<Vec<i64>> = irr
        .iter()
        .filter(|v| !chain.contains(v))
        .filter(|v| v[0] >= 0)
        .filter(|v| bounds.admits(v) && within_dynamic_bounds(&l.sigma, v))
        .filter(|v| chain.iter().all(|w| matches!(dot(v, w), 0 | -1)))
        .map(|v| l.lift_inner(v))
        .collect();
    let mut v0 = vec![0; l.ambient_rank];
    v0[0] = 1;
    v0[1] = 1;
    v0[2] = -1;
    let mut fixed = vec![v0];
    fixed.extend(chain.iter().map(|v| l.lift_inner(v)));
    let problem = SubsetProblem::new(l, fixed, free);
    finish(l, cfg, bounds, irr.len() as u64, problem, start)
}

fn finish(
    l: &ChangemakerLattice,
    cfg: &SearchConfig,
    bounds: CoordinateBounds,
    v_bound: u64,
    problem: SubsetProblem,
    start: Instant,
) -> Result<SearchOutcome> {
    let v_irred = problem.free.len() as u64;
    let (found, stats) = problem.run(cfg.cap_nodes, cfg.parallel)?;
    let result = match found {
        Some(vectors) => SearchResult::Found { superbase: validate_superbase(l, &vectors)? },
        None => {
            let exhaustion = ExhaustionRecord {
                bound_sources: bounds.sources.iter().map(|s| format!("{s:?}")).collect(),
                bounds: bounds.bounds,
                v_bound,
                v_irred,
                subsets_examined: stats.leaves,
                nodes: stats.nodes,
                wall_clock_ms: Some(start.elapsed().as_millis() as u64),
                algorithm_version: ALGORITHM_VERSION.to_string(),
            };
            match cfg.mode {
                SearchMode::Full => SearchResult::NoneExists { exhaustion },
                SearchMode::Quick => SearchResult::Inconclusive { exhaustion },
            }
        }
    };
    Ok(SearchOutcome { result, mode: cfg.mode })
}

#[derive(Debug, Default, Clone, Copy)]
struct SearchStats {
    nodes: u64,
    leaves: u64,
}

/// Choose `pick` vectors from `free` so that together with `fixed` they form
/// a basis whose negated sum completes an obtuse superbase.
struct SubsetProblem {
    fixed: Vec<Vec<i64>>,
    free: Vec<Vec<i64>>,
    pick: usize,
    disc: i64,
    norms: Vec<i64>,
    /// Pairings among free candidates.
    pair: Vec<Vec<i64>>,
    /// Free candidates compatible with every fixed vector.
    admissible: Vec<usize>,
    /// Budget already used by each fixed vector among the fixed ones.
    fixed_used: Vec<i64>,
    fixed_pair: Vec<Vec<i64>>,
}

struct Frame {
    chosen: Vec<usize>,
    used_fixed: Vec<i64>,
    used_free: Vec<i64>,
}

impl SubsetProblem {
    fn new(l: &ChangemakerLattice, fixed: Vec<Vec<i64>>, free: Vec<Vec<i64>>) -> Self {
        let pick = l.rank().saturating_sub(fixed.len());
        let norms: Vec<i64> = free.iter().map(|v| norm(v)).collect();
        let pair: Vec<Vec<i64>> = free.iter().map(|a| free.iter().map(|b| dot(a, b)).collect()).collect();
        let fixed_pair: Vec<Vec<i64>> = fixed.iter().map(|f| free.iter().map(|v| dot(f, v)).collect()).collect();
        let fixed_used: Vec<i64> = (0..fixed.len())
            .map(|i| {
                (0..fixed.len())
                    .filter(|&j| j != i)
                    .map(|j| dot(&fixed[i], &fixed[j]).abs())
                    .sum()
            })
            .collect();
        let admissible = (0..free.len())
            .filter(|&c| {
                (0..fixed.len()).all(|f| {
                    fixed_pair[f][c] <= 0 && fixed_used[f] + fixed_pair[f][c].abs() <= norm(&fixed[f])
                }) && (0..fixed.len()).map(|f| fixed_pair[f][c].abs()).sum::<i64>() <= norms[c]
            })
            .collect();
        SubsetProblem {
            fixed,
            free,
            pick,
            disc: l.disc(),
            norms,
            pair,
            admissible,
            fixed_used,
            fixed_pair,
        }
    }

    fn fixed_valid(&self) -> bool {
        let n = self.fixed.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| dot(&self.fixed[i], &self.fixed[j]) <= 0)
                && self.fixed_used[i] <= norm(&self.fixed[i])
        })
    }

    fn run(&self, cap_nodes: u64, parallel: bool) -> Result<(Option<Vec<Vec<i64>>>, SearchStats)> {
        let nodes = AtomicU64::new(0);
        let leaves = AtomicU64::new(0);
        if !self.fixed_valid() {
            return Ok((None, SearchStats::default()));
        }
        let root = Frame {
            chosen: Vec::new(),
            used_fixed: self.fixed_used.clone(),
            used_free: Vec::new(),
        };
        let found = if self.pick == 0 {
            self.leaf(&root.chosen, &leaves)
        } else if parallel {
            let first: Vec<usize> = (0..self.admissible.len()).collect();
            first
                .par_iter()
                .map(|&pos| self.branch(&root, pos, &self.admissible, &nodes, &leaves, cap_nodes))
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                })
                .transpose()?
                .flatten()
        } else {
            let mut out = None;
            for pos in 0..self.admissible.len() {
                if let Some(v) = self.branch(&root, pos, &self.admissible, &nodes, &leaves, cap_nodes)? {
                    out = Some(v);
                    break;
                }
            }
            out
        };
        let stats = SearchStats {
            nodes: nodes.load(Ordering::Relaxed),
            leaves: leaves.load(Ordering::Relaxed),
        };
        Ok((found, stats))
    }

    /// Try adding `cands[pos]` to the frame and search below it.
    fn branch(
        &self,
        frame: &Frame,
        pos: usize,
        cands: &[usize],
        nodes: &AtomicU64,
        leaves: &AtomicU64,
        cap: u64,
    ) -> Result<Option<Vec<Vec<i64>>>> {
        let c = cands[pos];
        let need_after = self.pick - frame.chosen.len() - 1;
        if cands.len() - pos - 1 < need_after {
            return Ok(None);
        }
        let Some(next) = self.extend(frame, c) else {
            return Ok(None);
        };
        if nodes.fetch_add(1, Ordering::Relaxed) + 1 > cap {
            return Err(Error::SearchSpaceOverflow { what: "subset nodes".into(), cap });
        }
        if need_after == 0 {
            return Ok(self.leaf(&next.chosen, leaves));
        }
        let rest: Vec<usize> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&d| self.pair[c][d] <= 0 && self.pair[c][d] != -self.norms[c])
            .collect();
        if rest.len() < need_after {
            return Ok(None);
        }
        for p in 0..rest.len() {
            if let Some(v) = self.branch(&next, p, &rest, nodes, leaves, cap)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    /// Budget check: in an obtuse superbase each vector's pairings with the
    /// others sum to minus its norm.
    fn extend(&self, frame: &Frame, c: usize) -> Option<Frame> {
        let mut own = self.fixed_pair.iter().map(|row| row[c].abs()).sum::<i64>();
        let mut used_fixed = frame.used_fixed.clone();
        for (f, u) in used_fixed.iter_mut().enumerate() {
            *u += self.fixed_pair[f][c].abs();
            if *u > norm(&self.fixed[f]) {
                return None;
            }
        }
        let mut used_free = frame.used_free.clone();
        for (i, &d) in frame.chosen.iter().enumerate() {
            let p = self.pair[c][d].abs();
            used_free[i] += p;
            own += p;
            if used_free[i] > self.norms[d] {
                return None;
            }
        }
        if own > self.norms[c] {
            return None;
        }
        let mut chosen = frame.chosen.clone();
        chosen.push(c);
        used_free.push(own);
        Some(Frame { chosen, used_fixed, used_free })
    }

    fn leaf(&self, chosen: &[usize], leaves: &AtomicU64) -> Option<Vec<Vec<i64>>> {
        leaves.fetch_add(1, Ordering::Relaxed);
        let mut basis: Vec<Vec<i64>> = self.fixed.clone();
        basis.extend(chosen.iter().map(|&i| self.free[i].clone()));
        if linalg::determinant_i128(&linalg::gram(&basis)) != Some(self.disc as i128) {
            return None;
        }
        let dim = basis.first().map_or(0, |v| v.len());
        let mut last = vec![0; dim];
        basis.iter().for_each(|v| linalg::add_assign(&mut last, v));
        let last = linalg::neg(&last);
        if basis.iter().any(|v| dot(v, &last) > 0) {
            return None;
        }
        basis.push(last);
        Some(basis)
    }
}

/// Number of reducible vectors in a superbase (for consistency checks).
pub fn reducible_count(l: &ChangemakerLattice, b: &ObtuseSuperbase) -> usize {
    let basis = l.basis();
    b.vectors.iter().filter(|v| !voronoi::is_irreducible(&basis, v)).count()
}

/// `n <= 4 + (3/2) sum sigma_i (sigma_i - 1)`, for `sigma_r >= 3`.
pub fn genus_inequality_check(sigma: &ChangemakerVector, n: i64) -> Result<bool> {
    let s = sigma.as_slice();
    if s.last().copied().unwrap_or(0) < 3 {
        return Err(Error::Precondition("largest changemaker coefficient must be at least 3".into()));
    }
    let total: i64 = s.iter().map(|x| x * (x - 1)).sum();
    Ok(2 * n <= 8 + 3 * total)
}

/// Certificate for a single lattice search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperbaseCertificate {
    pub status: CertificateStatus,
    pub vectors: Vec<Vec<i64>>,
    pub planar: bool,
    pub embedding: Option<PlanarEmbedding>,
    pub exhaustion: Option<ExhaustionRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Found,
    None,
    Inconclusive,
}

impl SuperbaseCertificate {
    pub fn from_outcome(outcome: &SearchOutcome) -> Self {
        match &outcome.result {
            SearchResult::Found { superbase } => {
                let embedding = planarity(&superbase.graph);
                SuperbaseCertificate {
                    status: CertificateStatus::Found,
                    vectors: superbase.vectors.clone(),
                    planar: embedding.is_some(),
                    embedding,
                    exhaustion: None,
                }
            }
            SearchResult::NoneExists { exhaustion } | SearchResult::Inconclusive { exhaustion } => {
                SuperbaseCertificate {
                    status: if matches!(outcome.result, SearchResult::NoneExists { .. }) {
                        CertificateStatus::None
                    } else {
                        CertificateStatus::Inconclusive
                    },
                    vectors: Vec::new(),
                    planar: false,
                    embedding: None,
                    exhaustion: Some(exhaustion.clone()),
                }
            }
        }
    }

    /// Drop wall-clock timing so repeated runs serialize identically.
    pub fn without_timing(mut self) -> Self {
        if let Some(e) = self.exhaustion.as_mut() {
            e.wall_clock_ms = None;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::changemaker::{build_half_integer_lattice, build_integer_lattice, StableCoefficients};

    fn cm(v: &[i64]) -> ChangemakerVector {
        ChangemakerVector::new(v.to_vec()).unwrap()
    }

    fn rho(v: &[i64]) -> StableCoefficients {
        StableCoefficients::new(v.to_vec()).unwrap()
    }

    fn full() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn obstructions() {
        assert_eq!(
            pre_obstructions(&cm(&[1, 1, 1, 1, 1, 2, 3])),
            Some(ObstructionReason::SigmaMTooSmall { m: 6, sigma_m: 2 })
        );
        assert_eq!(
            pre_obstructions(&cm(&[1, 2, 2, 2, 2, 5])),
            Some(ObstructionReason::LongRun { start: 2, len: 4, later: 6 })
        );
        assert_eq!(pre_obstructions(&cm(&[1, 2, 3])), None);
        assert_eq!(pre_obstructions(&cm(&[1, 2, 2, 2, 2, 6])), None);
    }

    #[test]
    fn bounds() {
        let b = coordinate_bounds(&ChangemakerLattice::integer(cm(&[1, 1, 2]))).unwrap();
        assert_eq!(b.bounds, vec![1, 1, 1]);
        let b = coordinate_bounds(&ChangemakerLattice::integer(cm(&[1, 2]))).unwrap();
        assert_eq!(b.bounds[0], 2);
        assert_eq!(b.bounds[1], 1);
        let b = coordinate_bounds(&ChangemakerLattice::integer(cm(&[1, 1, 2, 2, 3]))).unwrap();
        assert_eq!(b.sources[2], BoundSource::SigmaM);
        assert!(coordinate_bounds(&ChangemakerLattice::half_integer(cm(&[1, 2]))).is_err());
    }

    #[test]
    fn v_bound_enumeration() {
        let l = ChangemakerLattice::integer(cm(&[1, 1, 2]));
        let b = coordinate_bounds(&l).unwrap();
        let vs = enumerate_v_bound(&l, &b, 100).unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs.contains(&vec![1, -1, 0]) && vs.contains(&vec![1, 1, -1]));
        let l = ChangemakerLattice::integer(cm(&[1, 1]));
        let b = coordinate_bounds(&l).unwrap();
        let mut vs = enumerate_v_bound(&l, &b, 100).unwrap();
        vs.sort();
        assert_eq!(vs, vec![vec![-1, 1], vec![1, -1]]);
        let zero = CoordinateBounds { bounds: vec![0, 0], sources: vec![BoundSource::QuickBox; 2] };
        assert!(enumerate_v_bound(&l, &zero, 100).unwrap().is_empty());
        assert!(matches!(enumerate_v_bound(&l, &b, 1), Err(Error::SearchSpaceOverflow { .. })));
    }

    #[test]
    fn pairwise_filter() {
        let l = ChangemakerLattice::integer(cm(&[1, 1, 2]));
        let b = coordinate_bounds(&l).unwrap();
        let vs = enumerate_v_bound(&l, &b, 100).unwrap();
        let v2 = v2_vectors(&l.sigma);
        let irr = filter_v_irred(&vs, &v2);
        assert!(irr.contains(&vec![1, -1, 0]) && irr.contains(&vec![1, 1, -1]));
        let doubled = vec![vec![1, -1, 0], vec![2, -2, 0]];
        assert_eq!(filter_v_irred(&doubled, &[]), vec![vec![1, -1, 0]]);
        let v2 = vec![vec![1, -1, 0]];
        assert!(filter_v_irred(&[vec![-1, 1, 0], vec![1, -1, 0]], &v2) == vec![vec![1, -1, 0]]);
    }

    #[test]
    fn small_integer_searches() {
        let found = search_integer(&build_integer_lattice(&rho(&[2]), 5).unwrap(), &full()).unwrap();
        assert!(found.is_found());
        let cyc = search_integer(&ChangemakerLattice::integer(cm(&[1, 1, 1])), &full()).unwrap();
        assert_eq!(cyc.superbase().unwrap().vectors.len(), 3);
    }

    #[test]
    fn threes_twos_fixture_has_no_superbase() {
        let l = build_integer_lattice(&rho(&[3, 2, 2, 2]), 21 + 1).unwrap();
        let out = search_integer(&l, &full()).unwrap();
        assert!(matches!(out.result, SearchResult::NoneExists { .. }));
    }

    #[test]
    fn pretzel_half_integer() {
        let l = build_half_integer_lattice(&rho(&[3, 2, 2]), 19).unwrap();
        let out = search_half_integer(&l, &full()).unwrap();
        let b = out.superbase().expect("found");
        assert_eq!(crate::lattice::discriminant(&l), 37);
        assert_eq!(b.vectors.len(), l.rank() + 1);
        assert!(reducible_count(&l, b) <= 1);
    }

    #[test]
    fn trefoil_half_integer() {
        let l = build_half_integer_lattice(&rho(&[2]), 6).unwrap();
        assert!(search_half_integer(&l, &full()).unwrap().is_found());
    }

    #[test]
    fn colsum_cap_requires_witness() {
        let l = build_half_integer_lattice(&rho(&[3, 2, 2]), 19).unwrap();
        let cfg = SearchConfig { colsum_cap: true, ..Default::default() };
        assert!(matches!(search_half_integer(&l, &cfg), Err(Error::PrerequisiteMissing(_))));
    }

    #[test]
    fn sequential_matches_parallel() {
        let l = build_integer_lattice(&rho(&[5, 4, 3, 2, 2]), 59).unwrap();
        let a = search_integer(&l, &full()).unwrap();
        let b = search_integer(&l, &full().sequential()).unwrap();
        assert_eq!(a.superbase(), b.superbase());
    }

    #[test]
    fn genus_inequality() {
        assert!(genus_inequality_check(&cm(&[1, 2, 2, 3]), 19).unwrap());
        assert!(!genus_inequality_check(&cm(&[1, 2, 2, 3]), 20).unwrap());
        assert!(genus_inequality_check(&cm(&[1, 1, 2]), 6).is_err());
    }
}
