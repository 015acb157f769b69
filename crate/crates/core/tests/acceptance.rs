//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rayon::prelude::*;

use altsurg::alexpoly::{parse_polynomial, torsion_coefficients, torsion_counts};
use altsurg::changemaker::{
    build_half_integer_lattice, build_integer_lattice, n_invariant, ChangemakerLattice, ChangemakerVector,
    StableCoefficients,
};
use altsurg::classify::{classify, classify_rho, genus_slope_bound, Outcome};
use altsurg::corpus;
use altsurg::goeritz::{default_drop, emit_branching_set, goeritz_matrix, planarity, spanning_tree_count};
use altsurg::lattice::{validate_superbase, ObtuseSuperbase};
use altsurg::osb_search::{genus_inequality_check, pre_obstructions, search, SearchConfig, SearchResult};

/// Every Found superbase met in criteria 1 to 6.
type Found = Vec<(ChangemakerLattice, ObtuseSuperbase)>;

struct Suite {
    cfg: SearchConfig,
    found: Found,
    failures: usize,
}

#[derive(Debug, PartialEq, Eq)]
enum St {
    FoundPlanar,
    FoundNonPlanar,
    None,
    Other(String),
}

impl Suite {
    fn run(&mut self, l: ChangemakerLattice) -> St {
        match search(&l, &self.cfg).map(|o| o.result) {
            Ok(SearchResult::Found { superbase }) => {
                let planar = planarity(&superbase.graph).is_some();
                self.found.push((l, superbase));
                if planar {
                    St::FoundPlanar
                } else {
                    St::FoundNonPlanar
                }
            }
            Ok(SearchResult::NoneExists { .. }) => St::None,
            Ok(SearchResult::Inconclusive { .. }) => St::Other("inconclusive".into()),
            Err(e) => St::Other(e.to_string()),
        }
    }

    fn integer(&mut self, rho: &StableCoefficients, n: i64) -> St {
        match build_integer_lattice(rho, n) {
            Ok(l) => self.run(l),
            Err(e) => St::Other(e.to_string()),
        }
    }

    fn half(&mut self, rho: &StableCoefficients, n: i64) -> St {
        match build_half_integer_lattice(rho, n) {
            Ok(l) => self.run(l),
            Err(e) => St::Other(e.to_string()),
        }
    }

    fn report(&mut self, id: usize, title: &str, t: Instant, problems: Vec<String>) {
        let secs = t.elapsed().as_secs_f64();
        if problems.is_empty() {
            println!("PASS criterion {id}: {title} ({secs:.2}s)");
        } else {
            self.failures += 1;
            println!("FAIL criterion {id}: {title} ({secs:.2}s)");
            for p in problems {
                println!("    {p}");
            }
        }
    }
}

fn rho(v: &[i64]) -> StableCoefficients {
    StableCoefficients::new(v.to_vec()).unwrap()
}

fn table_rows(s: &mut Suite, rows: &[(&str, &[i64], i64)], n_found: bool) -> Vec<String> {
    let mut problems = Vec::new();
    for (name, r, expected) in rows {
        let rho = rho(r);
        let n = n_invariant(&rho).unwrap();
        if n != *expected {
            problems.push(format!("{name}: N = {n}, expected {expected}"));
            continue;
        }
        let at_n = if n_found { St::FoundPlanar } else { St::None };
        let checks = [
            (format!("L_{}", n - 1), s.integer(&rho, n - 1), St::FoundPlanar),
            (format!("L_{n}"), s.integer(&rho, n), at_n),
            (format!("L_{}", n + 1), s.integer(&rho, n + 1), St::None),
            (format!("L_{}.5", n - 1), s.half(&rho, n), St::None),
        ];
        for (what, got, want) in checks {
            if got != want {
                problems.push(format!("{name} {what}: {got:?}, expected {want:?}"));
            }
        }
    }
    problems
}

fn criterion_1(s: &mut Suite) {
    let t = Instant::now();
    let p = table_rows(s, corpus::UNIQUE_INTEGER, false);
    s.report(1, "single-slope census rows", t, p);
}

fn criterion_2(s: &mut Suite) {
    let t = Instant::now();
    let p = table_rows(s, corpus::TWO_SLOPES, true);
    s.report(2, "two-slope asymmetric rows", t, p);
}

fn criterion_3(s: &mut Suite) {
    let t = Instant::now();
    let mut p = Vec::new();
    for r in corpus::NO_SUPERBASE_FAMILIES {
        let rho = rho(r);
        for m in 2..=4 {
            let n = m - 1 + rho.sum_of_squares();
            let got = s.integer(&rho, n);
            if got != St::None {
                p.push(format!("{r:?} n={n}: {got:?}"));
            }
        }
    }
    s.report(3, "nine lattices without obtuse superbases", t, p);
}

fn criterion_4(s: &mut Suite) {
    let t = Instant::now();
    let mut p = Vec::new();
    let poly = parse_polynomial(corpus::PRETZEL_ALEXANDER).unwrap();
    let profile = torsion_coefficients(&poly);
    if profile.t != vec![2, 2, 1, 1, 1, 0] {
        p.push(format!("torsion coefficients {:?}", profile.t));
    }
    let counts = torsion_counts(&profile).unwrap();
    if counts.counts != vec![0, 3, 5] {
        p.push(format!("torsion counts {:?}", counts.counts));
    }
    match classify(&poly, &s.cfg) {
        Ok(c) => {
            if c.rho != Some(vec![3, 2, 2]) || c.n != Some(19) {
                p.push(format!("rho {:?}, N {:?}", c.rho, c.n));
            }
            if c.outcome != (Outcome::CandidateIntervalD { interval: [18, 19], knot_in_d_unverified: true }) {
                p.push(format!("outcome {:?}", c.outcome));
            }
            let half = c.certificates.iter().find(|r| r.slope == "18.5");
            match half.and_then(|r| r.diagram.as_ref()) {
                Some(d) if d.determinant == BigInt::from(37) && half.unwrap().disc == 37 => {}
                _ => p.push("half-integer certificate with determinant 37 missing".into()),
            }
        }
        Err(e) => p.push(format!("classify failed: {e}")),
    }
    let r = rho(&[3, 2, 2]);
    for (n, half) in [(18, false), (19, false), (19, true)] {
        let st = if half { s.half(&r, n) } else { s.integer(&r, n) };
        if st != St::FoundPlanar {
            p.push(format!("slope {n} half={half}: {st:?}"));
        }
    }
    s.report(4, "pretzel pipeline", t, p);
}

fn criterion_5(s: &mut Suite) {
    let t = Instant::now();
    let mut p = Vec::new();
    for k in 1..=5usize {
        let r = rho(&corpus::threes_then_twos(k));
        let n = n_invariant(&r).unwrap();
        let expected_n = 9 * k as i64 + 10;
        if n != expected_n {
            p.push(format!("k={k}: N = {n}, expected {expected_n}"));
        }
        if genus_slope_bound(&r).unwrap() != n {
            p.push(format!("k={k}: genus bound {} differs from N", genus_slope_bound(&r).unwrap()));
        }
        // slope 9k + 19/2 = expected_n - 1/2
        let st = s.half(&r, expected_n);
        if st != St::FoundPlanar {
            p.push(format!("k={k}: half-integer lattice {st:?}"));
        }
    }
    s.report(5, "threes family sharpness", t, p);
}

fn criterion_6(s: &mut Suite) {
    let t = Instant::now();
    let mut p = Vec::new();
    match classify_rho(&rho(&[5, 2]), &s.cfg) {
        Ok(c) => {
            if c.n != Some(32) {
                p.push(format!("N {:?}", c.n));
            }
            if c.outcome != (Outcome::CandidateIntervalD { interval: [31, 32], knot_in_d_unverified: true }) {
                p.push(format!("outcome {:?}", c.outcome));
            }
        }
        Err(e) => p.push(format!("classify failed: {e}")),
    }
    let r = rho(&[5, 2]);
    for (n, half) in [(31, false), (32, false), (32, true)] {
        if let St::Other(e) = if half { s.half(&r, n) } else { s.integer(&r, n) } {
            p.push(e);
        }
    }
    s.report(6, "rho (5,2) interval", t, p);
}

fn criterion_7(s: &mut Suite) {
    let t = Instant::now();
    let sigmas = common::changemakers(5, 20);
    let cfg = s.cfg.clone().sequential();
    let p: Vec<String> = sigmas
        .par_iter()
        .filter_map(|sigma| {
            let l = ChangemakerLattice::integer(ChangemakerVector::new(sigma.clone()).unwrap());
            let got = search(&l, &cfg).map(|o| o.is_found());
            let want = common::oracle_has_superbase(sigma);
            match got {
                Ok(g) if g == want => None,
                Ok(g) => Some(format!("{sigma:?}: search {g}, oracle {want}")),
                Err(e) => Some(format!("{sigma:?}: {e}")),
            }
        })
        .collect();
    let title = format!("search agrees with brute force on {} lattices", sigmas.len());
    s.report(7, &title, t, p);
}

fn random_sigma() -> impl Strategy<Value = Vec<i64>> {
    (0usize..7, prop::collection::vec(0u32..1000, 1..5)).prop_map(|(ones, picks)| {
        let mut s = vec![1i64; ones + 1];
        let mut sum = s.len() as i64;
        for p in picks {
            let lo = *s.last().unwrap();
            let x = lo + (p as i64) % (sum + 2 - lo);
            s.push(x);
            sum += x;
        }
        s
    })
}

fn criterion_8(s: &mut Suite) {
    let t = Instant::now();
    let mut p = Vec::new();
    for (l, b) in &s.found {
        let disc = BigInt::from(common::expected_disc(l));
        let trees = spanning_tree_count(&b.graph);
        let goeritz = goeritz_matrix(b, default_drop(&b.graph)).unwrap().determinant();
        if trees != disc || goeritz != disc {
            p.push(format!("{:?}: trees {trees}, goeritz {goeritz}, disc {disc}", l.flavor));
        }
        if !common::is_obtuse_superbase(l, &b.vectors) || validate_superbase(l, &b.vectors).is_err() {
            p.push(format!("{:?} sigma {:?}: invalid superbase", l.flavor, l.sigma.as_slice()));
        }
        if let Some(e) = planarity(&b.graph) {
            match emit_branching_set(&e, b) {
                Ok(d) if d.determinant == disc => {}
                Ok(d) => p.push(format!("{:?}: diagram determinant {}", l.flavor, d.determinant)),
                Err(e) => p.push(format!("{:?}: emit failed: {e}", l.flavor)),
            }
        }
    }
    let found_count = s.found.len();

    let mut runner = TestRunner::new_with_rng(
        Config { cases: 500, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let cfg = s.cfg.clone();
    let result = runner.run(&random_sigma(), |sigma| {
        let cm = ChangemakerVector::new(sigma.clone()).unwrap();
        let n = cm.norm();
        let l = ChangemakerLattice::integer(cm.clone());
        let out = search(&l, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
        if out.is_found() {
            prop_assert!(pre_obstructions(&cm).is_none(), "found despite obstruction: {:?}", sigma);
            if *sigma.last().unwrap() >= 3 {
                prop_assert!(genus_inequality_check(&cm, n).unwrap(), "genus inequality fails: {:?}", sigma);
            }
            prop_assert!(common::is_obtuse_superbase(&l, &out.superbase().unwrap().vectors));
        }
        Ok(())
    });
    if let Err(e) = result {
        p.push(format!("random changemakers: {e}"));
    }
    let title = format!("determinant identities on {found_count} superbases, 500 random changemakers");
    s.report(8, &title, t, p);
}

fn main() -> ExitCode {
    let mut s = Suite { cfg: SearchConfig::default(), found: Vec::new(), failures: 0 };
    criterion_1(&mut s);
    criterion_2(&mut s);
    criterion_3(&mut s);
    criterion_4(&mut s);
    criterion_5(&mut s);
    criterion_6(&mut s);
    criterion_7(&mut s);
    criterion_8(&mut s);
    println!("{} of 8 criteria passed", 8 - s.failures);
    if s.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
