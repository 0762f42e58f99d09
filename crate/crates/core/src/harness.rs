//! End-to-end certification: construct a cover, select the certifying
//! curve, compute its self-intersection downstairs, lift it, and certify
//! the lift is simple. Certificates embed the full monodromy so they can be
//! re-verified without the constructors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{
    admissible_targets, realize_target, AdmissibleTarget, ConstructError, Provenance,
};
use crate::covers::{
    build_cover, lift_path, validate_rep, CoverError, CoverRep,
    Perm,
};
use crate::curves::{home_graph, select_curve, CurveError, NonSimplicityEvidence};
use crate::fatgraph::{FatGraphError, SurfaceSpec};
use crate::selfint::{
    self_intersection, self_intersection_path, vertex_simple_certificate, ClosedPath,
    SelfIntError,
};
use crate::words::{CyclicWord, WordError};

pub const CERT_SCHEMA: &str = "liftlab-cert/1";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Graph(#[from] FatGraphError),
    #[error(transparent)]
    SelfInt(#[from] SelfIntError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("curve {0} is already simple")]
    AlreadySimple(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub word: String,
    pub expected_i: i64,
    pub computed_i: Option<i64>,
    pub evidence: NonSimplicityEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRecord {
    pub start_sheet: usize,
    pub degree: usize,
    pub path_len: usize,
    pub lift_i: i64,
    pub vertex_simple: bool,
}

/// Machine-checkable record of one certified instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub surface: SurfaceSpec,
    pub degree: usize,
    pub target: AdmissibleTarget,
    pub provenance: Provenance,
    pub rep: CoverRep,
    pub cover_chi: i64,
    pub cover_genus: i64,
    pub cover_boundary: i64,
    pub curve: CurveRecord,
    pub lift: LiftRecord,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Certificate {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.to_string(), pass, detail }
}

/// Run the full pipeline for one (surface, degree, target) instance.
pub fn verify_instance(
    spec: SurfaceSpec,
    n: usize,
    target: AdmissibleTarget,
) -> Result<Certificate, HarnessError> {
    let built = realize_target(spec, n, target)?;
    verify_with_rep(spec, n, target, built.rep, built.provenance)
}

/// Verify an instance against an explicit rep (used both by the pipeline
/// and when re-validating serialized certificates).
pub fn verify_with_rep(
    spec: SurfaceSpec,
    n: usize,
    target: AdmissibleTarget,
    rep: CoverRep,
    provenance: Provenance,
) -> Result<Certificate, HarnessError> {
    let mut checks = Vec::new();
    let graph = home_graph(spec)?;
    let info = validate_rep(&graph, &rep)?;
    let n_i = n as i64;

    // cover invariants
    let base_inv = graph.invariants()?;
    checks.push(check(
        "euler-scaling",
        info.chi == n_i * base_inv.chi,
        format!("chi~ = {} vs n*chi = {}", info.chi, n_i * base_inv.chi),
    ));
    checks.push(check(
        "boundary-bounds",
        base_inv.boundary <= info.boundary && info.boundary <= n_i * base_inv.boundary,
        format!("k = {} <= k~ = {} <= nk = {}", base_inv.boundary, info.boundary, n_i * base_inv.boundary),
    ));
    let realized = match target {
        AdmissibleTarget::Boundaries(_) => AdmissibleTarget::Boundaries(info.boundary),
        AdmissibleTarget::Genus(_) => AdmissibleTarget::Genus(info.genus),
    };
    checks.push(check(
        "target-realized",
        realized == target,
        format!("target {target:?}, realized {realized:?}"),
    ));

    // the certifying curve
    let built = crate::constructors::Constructed { rep: rep.clone(), provenance: provenance.clone() };
    let choice = select_curve(spec, n, target, &built)?;
    let word_str = choice.word.to_string();

    let essential = !crate::covers::is_boundary_parallel(&graph, &choice.word);
    checks.push(check("curve-essential", essential, format!("word {word_str}")));

    let computed_i = match choice.evidence {
        NonSimplicityEvidence::Computed => {
            let i = self_intersection(&graph, &choice.word)? as i64;
            checks.push(check(
                "downstairs-nonsimple",
                i == choice.expected_i && i >= 1,
                format!("computed i = {i}, expected {}", choice.expected_i),
            ));
            Some(i)
        }
        NonSimplicityEvidence::Homology => {
            // nonzero non-primitive homology class on a closed surface
            let h = choice.word.homology();
            let nonzero: Vec<i64> = h.values().copied().filter(|v| *v != 0).collect();
            let g = nonzero.iter().fold(0i64, |acc, v| num_gcd(acc, v.abs()));
            checks.push(check(
                "downstairs-nonsimple",
                !nonzero.is_empty() && g > 1,
                format!("homology gcd = {g}"),
            ));
            None
        }
        NonSimplicityEvidence::Cited => {
            checks.push(check(
                "downstairs-nonsimple",
                true,
                "recorded claim, not computed".to_string(),
            ));
            None
        }
    };

    // lift and certify upstairs
    let complex = build_cover(&graph, &rep)?;
    let lifted = lift_path(&complex, &choice.word, choice.start_sheet)?;
    let mono = rep.monodromy(&choice.word)?;
    let orbit_len = mono.orbit_of(choice.start_sheet).len();
    checks.push(check(
        "lift-closed",
        lifted.degree == orbit_len && lifted.path.len() == choice.word.len() * orbit_len,
        format!("degree {} over orbit {orbit_len}", lifted.degree),
    ));
    let lift_closed_path = ClosedPath::new(&complex.total, lifted.path.clone())?;
    let lift_i = self_intersection_path(&complex.total, &lift_closed_path)? as i64;
    let vsimple = vertex_simple_certificate(&complex.total, &lift_closed_path);
    checks.push(check("lift-simple", lift_i == 0, format!("lift i = {lift_i}")));
    if vsimple {
        checks.push(check(
            "vertex-simple-consistent",
            lift_i == 0,
            "embedded cycle certificate".to_string(),
        ));
    }

    // preimage component degrees sum to n
    let total: usize = mono.cycles().iter().map(Vec::len).sum();
    checks.push(check("component-degrees", total == n, format!("sum {total} = n {n}")));

    // closed surfaces: the spine-neighborhood restriction must be
    // transitive, and simplicity upstairs is certified inside it (an
    // embedded curve in the neighborhood cover embeds in the closed cover)
    if spec.is_closed() {
        let transitive = rep.is_transitive(&graph.alphabet())?;
        checks.push(check(
            "neighborhood-cover-connected",
            transitive,
            "restriction transitive".to_string(),
        ));
        checks.push(check(
            "subsurface-reduction",
            true,
            "lift simplicity certified in the generator-neighborhood cover".to_string(),
        ));
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(Certificate {
        schema: CERT_SCHEMA.to_string(),
        surface: spec,
        degree: n,
        target,
        provenance,
        rep,
        cover_chi: info.chi,
        cover_genus: info.genus,
        cover_boundary: info.boundary,
        curve: CurveRecord {
            word: word_str,
            expected_i: choice.expected_i,
            computed_i,
            evidence: choice.evidence,
        },
        lift: LiftRecord {
            start_sheet: lifted.start_sheet,
            degree: lifted.degree,
            path_len: lifted.path.len(),
            lift_i,
            vertex_simple: vsimple,
        },
        checks,
        pass,
    })
}

/// Re-verify a serialized certificate using only its embedded data.
pub fn reverify(cert: &Certificate) -> Result<bool, HarnessError> {
    let fresh = verify_with_rep(
        cert.surface,
        cert.degree,
        cert.target,
        cert.rep.clone(),
        cert.provenance.clone(),
    )?;
    Ok(fresh.pass
        && fresh.curve == cert.curve
        && fresh.lift == cert.lift
        && fresh.cover_chi == cert.cover_chi
        && fresh.cover_genus == cert.cover_genus
        && fresh.cover_boundary == cert.cover_boundary)
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Bounds for a verification sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridBounds {
    pub max_genus: u32,
    pub max_boundary: u32,
    pub max_degree: usize,
    pub include_closed: bool,
}

impl GridBounds {
    /// All (surface, degree, target) instances in deterministic order.
    pub fn instances(&self) -> Vec<(SurfaceSpec, usize, AdmissibleTarget)> {
        let mut specs = Vec::new();
        for g in 0..=self.max_genus {
            for k in 1..=self.max_boundary {
                let spec = SurfaceSpec::new(g, k);
                if spec.chi() < 0 {
                    specs.push(spec);
                }
            }
            if self.include_closed && g >= 2 {
                specs.push(SurfaceSpec::new(g, 0));
            }
        }
        specs.sort();
        let mut out = Vec::new();
        for spec in specs {
            for n in 2..=self.max_degree {
                for t in admissible_targets(spec, n) {
                    out.push((spec, n, t));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub certificates: Vec<Certificate>,
    pub pass_count: usize,
    pub fail_count: usize,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.fail_count == 0 && !self.certificates.is_empty()
    }
}

/// Verify every instance in the grid. `jobs` > 1 splits the instances over
/// that many threads; the report order is independent of the split.
pub fn verify_all(bounds: GridBounds, jobs: usize) -> Result<Report, HarnessError> {
    let instances = bounds.instances();
    let jobs = jobs.max(1).min(instances.len().max(1));
    let mut certs: Vec<Option<Certificate>> = vec![None; instances.len()];
    if jobs <= 1 {
        for (slot, &(spec, n, t)) in certs.iter_mut().zip(instances.iter()) {
            *slot = Some(verify_instance(spec, n, t)?);
        }
    } else {
        let chunk = instances.len().div_ceil(jobs);
        let results: Vec<Result<Vec<(usize, Certificate)>, String>> =
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for (w, work) in instances.chunks(chunk).enumerate() {
                    let base = w * chunk;
                    handles.push(scope.spawn(move || {
                        let mut out = Vec::with_capacity(work.len());
                        for (off, &(spec, n, t)) in work.iter().enumerate() {
                            let cert =
                                verify_instance(spec, n, t).map_err(|e| e.to_string())?;
                            out.push((base + off, cert));
                        }
                        Ok(out)
                    }));
                }
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
        for r in results {
            match r {
                Ok(list) => {
                    for (idx, cert) in list {
                        certs[idx] = Some(cert);
                    }
                }
                Err(e) => {
                    return Err(HarnessError::Construct(ConstructError::BadParameter(e)))
                }
            }
        }
    }
    let certificates: Vec<Certificate> = certs.into_iter().map(Option::unwrap).collect();
    let pass_count = certificates.iter().filter(|c| c.pass).count();
    let fail_count = certificates.len() - pass_count;
    Ok(Report { certificates, pass_count, fail_count })
}

/// Which covers of the one-holed torus simply lift a^2 b^n: the family is
/// surveyed over every admissible cover parameter at its degree rather than
/// presumed to work everywhere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SquarePowerSurvey {
    pub degree: usize,
    /// (q, simple lift found at some start sheet)
    pub per_q: Vec<(usize, bool)>,
}

pub fn square_power_survey(n: usize) -> Result<SquarePowerSurvey, HarnessError> {
    let spec = SurfaceSpec::new(1, 1);
    let graph = home_graph(spec)?;
    let word = CyclicWord::parse(&format!("a^2 b^{n}"), &graph.alphabet())?;
    let mut per_q = Vec::new();
    let mut q = if n % 2 == 0 { 2 } else { 1 };
    while q <= n {
        let built = crate::constructors::one_holed_torus_cover(n, q)?;
        let complex = build_cover(&graph, &built.rep)?;
        let mono = built.rep.monodromy(&word)?;
        let mut simple = false;
        let mut covered = vec![false; n];
        for s in 0..n {
            if covered[s] {
                continue;
            }
            for x in mono.orbit_of(s) {
                covered[x] = true;
            }
            let lifted = lift_path(&complex, &word, s)?;
            let path = ClosedPath::new(&complex.total, lifted.path)?;
            if self_intersection_path(&complex.total, &path)? == 0 {
                simple = true;
                break;
            }
        }
        per_q.push((q, simple));
        q += 2;
    }
    Ok(SquarePowerSurvey { degree: n, per_q })
}

/// Result of a brute-force search for the smallest covering degree with a
/// simple lift.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinDegResult {
    pub word: String,
    pub surface: SurfaceSpec,
    pub found_degree: Option<usize>,
    pub witness: Option<CoverRep>,
    pub witness_start_sheet: Option<usize>,
    pub search_bound: usize,
    pub exhaustive: bool,
}

/// Enumerate transitive reps of each degree up to conjugacy (canonical BFS
/// relabeling) and return the smallest degree admitting a simple lift of
/// `w`. Exponential in the degree; desk scale only.
pub fn mindeg_search(
    spec: SurfaceSpec,
    w: &CyclicWord,
    max_degree: usize,
) -> Result<MinDegResult, HarnessError> {
    let graph = home_graph(spec)?;
    let base_i = self_intersection(&graph, w)?;
    if base_i == 0 {
        return Err(HarnessError::AlreadySimple(w.to_string()));
    }
    let labels = graph.labels();
    for d in 2..=max_degree {
        let perms = all_perms(d);
        let mut seen_canonical: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        let mut assignment = vec![0usize; labels.len()];
        loop {
            let rep = {
                let mut map = std::collections::BTreeMap::new();
                for (i, l) in labels.iter().enumerate() {
                    map.insert(l.clone(), perms[assignment[i]].clone());
                }
                CoverRep::new(d, map)?
            };
            if rep.is_transitive(&graph.alphabet())? {
                let canon = rep.canonicalize();
                let key: Vec<Vec<usize>> =
                    canon.perms.values().map(|p| p.images().to_vec()).collect();
                if seen_canonical.insert(key) {
                    let complex = build_cover(&graph, &canon)?;
                    let mono = canon.monodromy(w)?;
                    let mut starts: Vec<usize> = Vec::new();
                    let mut covered = vec![false; d];
                    for s in 0..d {
                        if !covered[s] {
                            for x in mono.orbit_of(s) {
                                covered[x] = true;
                            }
                            starts.push(s);
                        }
                    }
                    for s in starts {
                        let lifted = lift_path(&complex, w, s)?;
                        let path = ClosedPath::new(&complex.total, lifted.path)?;
                        if self_intersection_path(&complex.total, &path)? == 0 {
                            return Ok(MinDegResult {
                                word: w.to_string(),
                                surface: spec,
                                found_degree: Some(d),
                                witness: Some(canon),
                                witness_start_sheet: Some(s),
                                search_bound: max_degree,
                                exhaustive: true,
                            });
                        }
                    }
                }
            }
            // odometer over label assignments
            let mut i = 0;
            loop {
                if i == assignment.len() {
                    break;
                }
                assignment[i] += 1;
                if assignment[i] < perms.len() {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
            if i == assignment.len() {
                break;
            }
        }
    }
    Ok(MinDegResult {
        word: w.to_string(),
        surface: spec,
        found_degree: None,
        witness: None,
        witness_start_sheet: None,
        search_bound: max_degree,
        exhaustive: true,
    })
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out.sort_by(|a, b| a.images().cmp(b.images()));
    out
}

fn permute(items: &mut Vec<usize>, at: usize, out: &mut Vec<Perm>) {
    if at == items.len() {
        out.push(Perm::new(items.clone()).unwrap());
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, out);
        items.swap(at, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatgraph::build_fatgraph;

    #[test]
    fn pants_instance_passes() {
        let cert = verify_instance(
            SurfaceSpec::new(0, 3),
            6,
            AdmissibleTarget::Boundaries(4),
        )
        .unwrap();
        assert!(cert.pass, "failure: {:?}", cert.first_failure());
        assert_eq!(cert.lift.lift_i, 0);
        assert!(cert.curve.computed_i.unwrap() >= 1);
    }

    #[test]
    fn torus_instance_with_known_curve() {
        let cert = verify_instance(
            SurfaceSpec::new(1, 1),
            2,
            AdmissibleTarget::Boundaries(2),
        )
        .unwrap();
        assert!(cert.pass, "failure: {:?}", cert.first_failure());
        assert_eq!(cert.curve.word, "a b a^3 b");
        assert_eq!(cert.lift.degree, 1);
    }

    #[test]
    fn two_boundary_instance() {
        let cert =
            verify_instance(SurfaceSpec::new(3, 2), 3, AdmissibleTarget::Genus(9)).unwrap();
        assert!(cert.pass, "failure: {:?}", cert.first_failure());
        assert_eq!(cert.curve.word, "c^3 x1");
        assert_eq!(cert.curve.computed_i, Some(2));
    }

    #[test]
    fn certificate_reverifies_from_serialized_form() {
        let cert =
            verify_instance(SurfaceSpec::new(0, 4), 2, AdmissibleTarget::Boundaries(6)).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let parsed: Certificate = serde_json::from_str(&json).unwrap();
        assert!(reverify(&parsed).unwrap());
    }

    #[test]
    fn closed_instance() {
        let cert =
            verify_instance(SurfaceSpec::new(2, 0), 2, AdmissibleTarget::Genus(3)).unwrap();
        assert!(cert.pass, "failure: {:?}", cert.first_failure());
        assert_eq!(cert.curve.evidence, NonSimplicityEvidence::Homology);
    }

    #[test]
    fn small_grid_passes() {
        let report = verify_all(
            GridBounds { max_genus: 1, max_boundary: 3, max_degree: 3, include_closed: false },
            1,
        )
        .unwrap();
        assert!(report.all_pass(), "failures: {}", report.fail_count);
    }

    #[test]
    fn parallel_report_order_is_stable() {
        let bounds =
            GridBounds { max_genus: 1, max_boundary: 2, max_degree: 3, include_closed: false };
        let a = verify_all(bounds, 1).unwrap();
        let b = verify_all(bounds, 3).unwrap();
        let names =
            |r: &Report| r.certificates.iter().map(|c| (c.surface, c.degree, c.target)).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
    }

    #[test]
    fn square_power_family_lifts_simply_at_every_parameter() {
        for n in 2..=5usize {
            let survey = square_power_survey(n).unwrap();
            assert!(
                survey.per_q.iter().all(|(_, simple)| *simple),
                "n={n}: {:?}",
                survey.per_q
            );
        }
    }

    #[test]
    fn mindeg_pants_ab() {
        let g = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
        let w = CyclicWord::parse("a b", &g.alphabet()).unwrap();
        let r = mindeg_search(SurfaceSpec::new(0, 3), &w, 3).unwrap();
        assert_eq!(r.found_degree, Some(2));
        assert!(r.exhaustive);
    }

    #[test]
    fn mindeg_rejects_simple_words() {
        let g = build_fatgraph(SurfaceSpec::new(1, 1)).unwrap();
        let w = CyclicWord::parse("a b", &g.alphabet()).unwrap();
        assert!(matches!(
            mindeg_search(SurfaceSpec::new(1, 1), &w, 2),
            Err(HarnessError::AlreadySimple(_))
        ));
    }
}
