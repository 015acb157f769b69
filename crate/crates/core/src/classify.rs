//! End-to-end classification of the alternating surgery slopes of a knot
//! from its Alexander polynomial or stable coefficients.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alexpoly::{is_lspace_form, torsion_coefficients, torsion_counts, AlexanderPolynomial};
use crate::changemaker::{
    build_half_integer_lattice, build_integer_lattice, n_invariant, stable_coefficients, ChangemakerLattice,
    Flavor, StableCoefficients,
};
use crate::error::Error;
use crate::goeritz::{emit_branching_set, AlternatingDiagramData};
use crate::osb_search::{
    pre_obstructions, search, CertificateStatus, ObstructionReason, SearchConfig, SearchResult,
    SuperbaseCertificate,
};

pub const KNOT_IN_D_CAVEAT: &str = "knot-in-D membership and the finiteness of non-integer slopes \
need a 3-manifold homeomorphism check that this tool does not perform";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifyInput {
    /// Raw coefficients, highest power first.
    Alexander { coefficients: Vec<i64> },
    Rho { rho: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// Trivial Alexander polynomial.
    UnknotForm,
    NoStableCoefficients { reason: String },
    Obstructed { reasons: Vec<String> },
    AtMostOne { slope: i64 },
    AtMostTwo { slopes: [i64; 2] },
    CandidateIntervalD { interval: [i64; 2], knot_in_d_unverified: bool },
    CounterexampleFlag { slope: i64 },
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::UnknotForm => "UnknotForm",
            Outcome::NoStableCoefficients { .. } => "NoStableCoefficients",
            Outcome::Obstructed { .. } => "Obstructed",
            Outcome::AtMostOne { .. } => "AtMostOne",
            Outcome::AtMostTwo { .. } => "AtMostTwo",
            Outcome::CandidateIntervalD { .. } => "CandidateIntervalD",
            Outcome::CounterexampleFlag { .. } => "CounterexampleFlag",
        }
    }

    /// Integer slopes named by the outcome.
    pub fn named_slopes(&self) -> Vec<i64> {
        match self {
            Outcome::AtMostOne { slope } | Outcome::CounterexampleFlag { slope } => vec![*slope],
            Outcome::AtMostTwo { slopes } => slopes.to_vec(),
            Outcome::CandidateIntervalD { interval, .. } => interval.to_vec(),
            _ => Vec::new(),
        }
    }
}

/// Search result for one lattice together with its rendering data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub slope: String,
    pub flavor: Flavor,
    pub sigma: Vec<i64>,
    pub disc: i64,
    pub pre_obstruction: Option<ObstructionReason>,
    pub certificate: SuperbaseCertificate,
    pub diagram: Option<AlternatingDiagramData>,
}

impl LatticeReport {
    /// Found and planar: the only case that counts toward alternating slopes.
    pub fn admits_planar(&self) -> bool {
        self.certificate.status == CertificateStatus::Found && self.certificate.planar
    }

    fn describe_failure(&self) -> String {
        let c = &self.certificate;
        if c.status == CertificateStatus::Found {
            return format!("L_{}: the obtuse superbase found is not planar", self.slope);
        }
        let mut s = match &c.exhaustion {
            Some(e) => format!(
                "L_{}: exhaustive search found no obtuse superbase ({} irreducible candidates, {} nodes)",
                self.slope, e.v_irred, e.nodes
            ),
            None => format!("L_{}: no obtuse superbase", self.slope),
        };
        if let Some(r) = &self.pre_obstruction {
            s.push_str(&format!("; formula obstruction {}", describe_obstruction(r)));
        }
        s
    }
}

fn describe_obstruction(r: &ObstructionReason) -> String {
    match r {
        ObstructionReason::SigmaMTooSmall { m, sigma_m } => format!("sigma_{m} = {sigma_m} < {m} - 2"),
        ObstructionReason::LongRun { start, len, later } => {
            format!("run of {len} equal entries from index {start}, obstructed by index {later}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub input: ClassifyInput,
    pub unknot_form: bool,
    pub rho: Option<Vec<i64>>,
    #[serde(rename = "N")]
    pub n: Option<i64>,
    pub genus: Option<i64>,
    pub genus_slope_bound: Option<i64>,
    pub outcome: Outcome,
    pub slope_window: Option<[i64; 2]>,
    pub certificates: Vec<LatticeReport>,
    pub caveats: Vec<String>,
}

/// A failed classification with the lattice reports completed so far.
#[derive(Debug, thiserror::Error)]
#[error("{source}")]
pub struct ClassifyError {
    pub source: Error,
    pub partial: Vec<LatticeReport>,
}

impl From<Error> for ClassifyError {
    fn from(source: Error) -> Self {
        ClassifyError { source, partial: Vec::new() }
    }
}

/// `|p/q|` bound on alternating slopes: `4g + 3` for the two-stranded torus
/// form `(2, ..., 2)`, `3g + 4` otherwise.
pub fn genus_slope_bound(rho: &StableCoefficients) -> crate::Result<i64> {
    if rho.is_empty() {
        return Err(Error::EmptyStableCoefficients);
    }
    let g = rho.genus();
    if rho.as_slice().iter().all(|&x| x == 2) {
        Ok(4 * g + 3)
    } else {
        Ok(3 * g + 4)
    }
}

fn empty_classification(input: ClassifyInput, outcome: Outcome, genus: Option<i64>) -> Classification {
    Classification {
        input,
        unknot_form: outcome == Outcome::UnknotForm,
        rho: None,
        n: None,
        genus,
        genus_slope_bound: None,
        outcome,
        slope_window: None,
        certificates: Vec::new(),
        caveats: Vec::new(),
    }
}

/// Classify from an Alexander polynomial.
pub fn classify(p: &AlexanderPolynomial, cfg: &SearchConfig) -> Result<Classification, ClassifyError> {
    let mut raw = p.coeffs().to_vec();
    raw.reverse();
    let input = ClassifyInput::Alexander { coefficients: raw };
    let g = p.genus_degree() as i64;
    if g == 0 {
        let mut c = empty_classification(input, Outcome::UnknotForm, Some(0));
        c.caveats
            .push("trivial Alexander polynomial: among L-space knots only the unknot has this form".into());
        return Ok(c);
    }
    let profile = torsion_coefficients(p);
    if !is_lspace_form(&profile) {
        let outcome = Outcome::NoStableCoefficients { reason: "torsion profile is not of L-space form".into() };
        return Ok(empty_classification(input, outcome, Some(g)));
    }
    let counts = torsion_counts(&profile)?;
    match stable_coefficients(&counts, g, counts.t0()) {
        Some(rho) => classify_stable(input, &rho, cfg),
        None => {
            let outcome = Outcome::NoStableCoefficients {
                reason: "torsion counts do not arise from stable coefficients".into(),
            };
            Ok(empty_classification(input, outcome, Some(g)))
        }
    }
}

/// Classify directly from stable coefficients.
pub fn classify_rho(rho: &StableCoefficients, cfg: &SearchConfig) -> Result<Classification, ClassifyError> {
    let input = ClassifyInput::Rho { rho: rho.as_slice().to_vec() };
    classify_stable(input, rho, cfg)
}

fn run_lattice(l: &ChangemakerLattice, cfg: &SearchConfig) -> crate::Result<LatticeReport> {
    let outcome = search(l, cfg)?;
    if let SearchResult::Inconclusive { .. } = outcome.result {
        return Err(Error::Inconclusive { slope: l.flavor.slope_string() });
    }
    let certificate = SuperbaseCertificate::from_outcome(&outcome).without_timing();
    let diagram = match (outcome.superbase(), &certificate.embedding) {
        (Some(b), Some(e)) => Some(emit_branching_set(e, b)?),
        _ => None,
    };
    Ok(LatticeReport {
        slope: l.flavor.slope_string(),
        flavor: l.flavor,
        sigma: l.sigma.as_slice().to_vec(),
        disc: l.disc(),
        pre_obstruction: pre_obstructions(&l.sigma),
        certificate,
        diagram,
    })
}

fn classify_stable(
    input: ClassifyInput,
    rho: &StableCoefficients,
    cfg: &SearchConfig,
) -> Result<Classification, ClassifyError> {
    let n = n_invariant(rho)?;
    let g = rho.genus();
    let bound = genus_slope_bound(rho)?;

    let slopes = [n + 1, n, n - 1];
    let lattices: Vec<ChangemakerLattice> =
        slopes.iter().map(|&s| build_integer_lattice(rho, s)).collect::<crate::Result<_>>()?;
    let results: Vec<crate::Result<LatticeReport>> = if cfg.parallel {
        lattices.par_iter().map(|l| run_lattice(l, cfg)).collect()
    } else {
        lattices.iter().map(|l| run_lattice(l, cfg)).collect()
    };
    let mut reports = Vec::new();
    let mut failure = None;
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    if let Some(source) = failure {
        return Err(ClassifyError { source, partial: reports });
    }

    let (plus, at_n, minus) = (reports[0].admits_planar(), reports[1].admits_planar(), reports[2].admits_planar());
    let mut caveats = vec![KNOT_IN_D_CAVEAT.to_string()];
    let outcome = if plus {
        caveats.push(format!(
            "L_{} admits a planar obtuse superbase: a hyperbolic knot with these invariants has no \
             alternating surgeries or contradicts the expected slope structure; for a torus or cable knot \
             with cabling slope {n} the set of alternating slopes is [{}, {}]",
            n + 1,
            n - 1,
            n + 1
        ));
        Outcome::CounterexampleFlag { slope: n + 1 }
    } else if at_n && minus {
        let half = build_half_integer_lattice(rho, n)?;
        let rep = run_lattice(&half, cfg).map_err(|source| ClassifyError { source, partial: reports.clone() })?;
        let found = rep.admits_planar();
        reports.push(rep);
        if found {
            caveats.push(format!(
                "the interval [{}, {}] holds only if the knot lies in D; otherwise the set of alternating \
                 slopes is a finite subset of it with bounded denominators",
                n - 1,
                n
            ));
            Outcome::CandidateIntervalD { interval: [n - 1, n], knot_in_d_unverified: true }
        } else {
            caveats.push(format!(
                "slope {} is excluded by exhaustive search; realising {} and {} needs a homeomorphism check",
                half.flavor.slope_string(),
                n - 1,
                n
            ));
            Outcome::AtMostTwo { slopes: [n - 1, n] }
        }
    } else if minus || at_n {
        let (keep, drop) = if minus { (n - 1, n) } else { (n, n - 1) };
        caveats.push(format!(
            "slope {drop} is excluded by exhaustive search; realising {keep} needs a homeomorphism check"
        ));
        Outcome::AtMostOne { slope: keep }
    } else {
        let reasons = [&reports[2], &reports[1]].iter().map(|r| r.describe_failure()).collect();
        Outcome::Obstructed { reasons }
    };

    Ok(Classification {
        input,
        unknot_form: false,
        rho: Some(rho.as_slice().to_vec()),
        n: Some(n),
        genus: Some(g),
        genus_slope_bound: Some(bound),
        outcome,
        slope_window: Some([n - 1, n + 1]),
        certificates: reports,
        caveats,
    })
}

/// Human-readable report.
pub fn render_text(c: &Classification) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    match &c.input {
        ClassifyInput::Alexander { coefficients } => push(&mut out, format!("input: alexander {coefficients:?}")),
        ClassifyInput::Rho { rho } => push(&mut out, format!("input: rho {rho:?}")),
    }
    if let Some(rho) = &c.rho {
        push(&mut out, format!("rho: {rho:?}"));
    }
    if let Some(g) = c.genus {
        push(&mut out, format!("genus: {g}"));
    }
    if let Some(n) = c.n {
        push(&mut out, format!("N: {n}"));
    }
    if let Some(b) = c.genus_slope_bound {
        push(&mut out, format!("genus slope bound: {b}"));
    }
    if let Some([a, b]) = c.slope_window {
        push(&mut out, format!("slope window: [{a}, {b}]"));
    }
    let detail = match &c.outcome {
        Outcome::UnknotForm => String::new(),
        Outcome::NoStableCoefficients { reason } => format!(" ({reason}); no alternating surgeries"),
        Outcome::Obstructed { .. } => "; no alternating surgeries".into(),
        Outcome::AtMostOne { slope } => format!(" {{{slope}}}"),
        Outcome::AtMostTwo { slopes } => format!(" {{{}, {}}}", slopes[0], slopes[1]),
        Outcome::CandidateIntervalD { interval, .. } => format!(" [{}, {}]", interval[0], interval[1]),
        Outcome::CounterexampleFlag { slope } => format!(" at slope {slope}"),
    };
    push(&mut out, format!("outcome: {}{}", c.outcome.name(), detail));
    if let Outcome::Obstructed { reasons } = &c.outcome {
        for r in reasons {
            push(&mut out, format!("  - {r}"));
        }
    }
    for r in &c.certificates {
        let status = match r.certificate.status {
            CertificateStatus::Found if r.certificate.planar => "found, planar",
            CertificateStatus::Found => "found, not planar",
            CertificateStatus::None => "none exists",
            CertificateStatus::Inconclusive => "inconclusive",
        };
        push(&mut out, format!("lattice L_{} (disc {}): {}", r.slope, r.disc, status));
        if let Some(d) = &r.diagram {
            push(
                &mut out,
                format!(
                    "  branching set: {} crossings, {} components, determinant {}",
                    d.pd_crossings.len(),
                    d.components,
                    d.determinant
                ),
            );
        }
    }
    for cv in &c.caveats {
        push(&mut out, format!("caveat: {cv}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexpoly::parse_polynomial;

    fn rho(v: &[i64]) -> StableCoefficients {
        StableCoefficients::new(v.to_vec()).unwrap()
    }

    #[test]
    fn slope_bounds() {
        assert_eq!(genus_slope_bound(&rho(&[2, 2, 2])).unwrap(), 15);
        assert_eq!(genus_slope_bound(&rho(&[3, 2, 2])).unwrap(), 19);
        assert_eq!(genus_slope_bound(&rho(&[3, 3, 3])).unwrap(), 31);
        assert_eq!(n_invariant(&rho(&[3, 3, 3])).unwrap(), 30);
    }

    #[test]
    fn unknot_form() {
        let c = classify(&parse_polynomial(&[1]).unwrap(), &SearchConfig::default()).unwrap();
        assert!(c.unknot_form);
        assert_eq!(c.outcome, Outcome::UnknotForm);
    }

    #[test]
    fn non_lspace_polynomial() {
        // figure eight: -x + 3 - 1/x
        let c = classify(&parse_polynomial(&[-1, 3]).unwrap(), &SearchConfig::default()).unwrap();
        assert!(matches!(c.outcome, Outcome::NoStableCoefficients { .. }));
    }

    #[test]
    fn pretzel_interval() {
        let p = parse_polynomial(&[1, -1, 0, 1, -1, 1]).unwrap();
        let c = classify(&p, &SearchConfig::default()).unwrap();
        assert_eq!(c.rho, Some(vec![3, 2, 2]));
        assert_eq!(c.n, Some(19));
        assert_eq!(c.outcome, Outcome::CandidateIntervalD { interval: [18, 19], knot_in_d_unverified: true });
        let half = c.certificates.iter().find(|r| r.slope == "18.5").unwrap();
        assert_eq!(half.diagram.as_ref().unwrap().determinant, 37.into());
        assert_eq!(c.certificates.iter().filter(|r| r.diagram.is_some()).count(), 3);
    }

    #[test]
    fn trefoil_form_flags_the_cable_case() {
        let c = classify_rho(&rho(&[2]), &SearchConfig::default()).unwrap();
        assert_eq!(c.n, Some(6));
        assert_eq!(c.outcome, Outcome::CounterexampleFlag { slope: 7 });
        assert!(c.caveats.iter().any(|s| s.contains("cable")));
    }

    #[test]
    fn quick_mode_surfaces_partial_results() {
        let cfg = SearchConfig::with_mode(crate::osb_search::SearchMode::Quick);
        match classify_rho(&rho(&[5, 4, 3, 2, 2]), &cfg) {
            Ok(c) => assert!(c.outcome.named_slopes().iter().all(|&s| (59..=61).contains(&s))),
            Err(e) => assert!(matches!(e.source, Error::Inconclusive { .. })),
        }
    }

    #[test]
    fn text_report_mentions_outcome() {
        let c = classify_rho(&rho(&[5, 2]), &SearchConfig::default()).unwrap();
        let t = render_text(&c);
        assert!(t.contains("CandidateIntervalD [31, 32]"));
        assert!(t.contains("caveat: knot-in-D"));
    }
}
