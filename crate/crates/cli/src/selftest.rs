//! Reference corpus run by `altsurg selftest`.

use std::time::Instant;

use altsurg::alexpoly::parse_polynomial;
use altsurg::changemaker::{build_half_integer_lattice, build_integer_lattice, n_invariant, StableCoefficients};
use altsurg::classify::{classify, classify_rho, genus_slope_bound, Outcome};
use altsurg::corpus;
use altsurg::goeritz::planarity;
use altsurg::osb_search::{search, SearchConfig, SearchResult};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    FoundPlanar,
    FoundNonPlanar,
    None,
    Other,
}

fn status(rho: &StableCoefficients, n: i64, half: bool, cfg: &SearchConfig) -> Status {
    let l = if half { build_half_integer_lattice(rho, n) } else { build_integer_lattice(rho, n) };
    let Ok(l) = l else { return Status::Other };
    match search(&l, cfg).map(|o| o.result) {
        Ok(SearchResult::Found { superbase }) if planarity(&superbase.graph).is_some() => Status::FoundPlanar,
        Ok(SearchResult::Found { .. }) => Status::FoundNonPlanar,
        Ok(SearchResult::NoneExists { .. }) => Status::None,
        _ => Status::Other,
    }
}

fn rho(v: &[i64]) -> StableCoefficients {
    StableCoefficients::new(v.to_vec()).expect("corpus rho is valid")
}

fn table_row(r: &[i64], n_expected: i64, n_found: bool, cfg: &SearchConfig) -> bool {
    let rho = rho(r);
    let Ok(n) = n_invariant(&rho) else { return false };
    let at_n = if n_found { Status::FoundPlanar } else { Status::None };
    n == n_expected
        && status(&rho, n - 1, false, cfg) == Status::FoundPlanar
        && status(&rho, n, false, cfg) == at_n
        && status(&rho, n + 1, false, cfg) == Status::None
        && status(&rho, n, true, cfg) == Status::None
}

pub fn run(cfg: &SearchConfig, fast: bool) -> Result<u8, CliError> {
    let mut failures = 0;
    let mut report = |name: String, ok: bool, t: Instant| {
        println!("{} {} ({} ms)", if ok { "PASS" } else { "FAIL" }, name, t.elapsed().as_millis());
        if !ok {
            failures += 1;
        }
    };

    let t = Instant::now();
    let ok = parse_polynomial(corpus::PRETZEL_ALEXANDER)
        .ok()
        .and_then(|p| classify(&p, cfg).ok())
        .is_some_and(|c| {
            c.n == Some(19) && c.outcome == Outcome::CandidateIntervalD { interval: [18, 19], knot_in_d_unverified: true }
        });
    report("pretzel polynomial classifies as [18, 19]".into(), ok, t);

    let t = Instant::now();
    let ok = classify_rho(&rho(&[5, 2]), cfg)
        .is_ok_and(|c| c.n == Some(32) && c.outcome.named_slopes() == vec![31, 32]);
    report("rho (5,2) classifies as [31, 32]".into(), ok, t);

    for (name, r, n) in corpus::UNIQUE_INTEGER {
        let t = Instant::now();
        report(format!("single-slope {name} N={n}"), table_row(r, *n, false, cfg), t);
    }
    if !fast {
        for (name, r, n) in corpus::TWO_SLOPES {
            let t = Instant::now();
            report(format!("two-slope {name} N={n}"), table_row(r, *n, true, cfg), t);
        }
    }
    for r in corpus::NO_SUPERBASE_FAMILIES {
        let rho = rho(r);
        for m in 2..=4 {
            let t = Instant::now();
            let n = m - 1 + rho.sum_of_squares();
            report(format!("no superbase {r:?} n={n}"), status(&rho, n, false, cfg) == Status::None, t);
        }
    }
    let top = if fast { 3 } else { 5 };
    for k in 1..=top {
        let t = Instant::now();
        let rho = rho(&corpus::threes_then_twos(k));
        let n = 9 * k as i64 + 10;
        let ok = n_invariant(&rho).ok() == Some(n)
            && genus_slope_bound(&rho).ok() == Some(n)
            && status(&rho, n, true, cfg) == Status::FoundPlanar;
        report(format!("threes family k={k} half slope {}.5", n - 1), ok, t);
    }

    println!("{} failure(s)", failures);
    Ok(if failures == 0 { 0 } else { 1 })
}
