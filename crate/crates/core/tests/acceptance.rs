//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p liftlab-core --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::time::Instant;

use liftlab_core::constructors::{
    admissible_targets, closed_cover, one_holed_torus_cover, pants_cover, realize_target,
    AdmissibleTarget,
};
use liftlab_core::covers::{
    build_cover, is_boundary_parallel, lift_path, path_is_boundary_parallel, validate_rep,
};
use liftlab_core::curves::NonSimplicityEvidence;
use liftlab_core::fatgraph::{build_fatgraph, regular_neighborhood, FatGraph, SurfaceSpec};
use liftlab_core::harness::{mindeg_search, verify_all, verify_instance, GridBounds};
use liftlab_core::oracle::oracle_stabilized;
use liftlab_core::selfint::{
    self_intersection, self_intersection_path, vertex_simple_certificate, ClosedPath,
    SelfIntError,
};
use liftlab_core::words::{CyclicWord, Letter};

fn word_on(graph: &FatGraph, text: &str) -> CyclicWord {
    CyclicWord::parse(text, &graph.alphabet()).unwrap()
}

fn i_on(graph: &FatGraph, text: &str) -> u64 {
    self_intersection(graph, &word_on(graph, text)).unwrap()
}

fn grid_surfaces() -> Vec<SurfaceSpec> {
    let mut out = Vec::new();
    for g in 0..=3u32 {
        for k in 1..=5u32 {
            let s = SurfaceSpec::new(g, k);
            if s.chi() < 0 {
                out.push(s);
            }
        }
    }
    out
}

#[test]
fn criterion_01_intersection_value_reproduction() {
    let t0 = Instant::now();
    let pants = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
    for k in 1..=8u64 {
        assert_eq!(i_on(&pants, &format!("a b^{k}")), k);
    }
    let torus = build_fatgraph(SurfaceSpec::new(1, 1)).unwrap();
    for k in 3..=8u64 {
        assert_eq!(i_on(&torus, &format!("a b a b^{k}")), k - 2);
    }
    for n in 3..=8u64 {
        assert_eq!(i_on(&torus, &format!("a b a^{n} b")), n - 2);
    }
    for n in 2..=8u64 {
        assert_eq!(i_on(&torus, &format!("a^2 b^{n}")), n - 1);
    }
    for k in [4u32, 6] {
        let s = build_fatgraph(SurfaceSpec::new(0, k)).unwrap();
        let gens: Vec<String> = (2..=k).map(|i| format!("a{i}")).collect();
        for j in 1..=5u64 {
            let text = format!("{} a2^{j}", gens.join(" "));
            assert_eq!(i_on(&s, &text), j, "tau^{j} on S_0,{k}");
        }
    }
    for g in [1u32, 3] {
        let s = build_fatgraph(SurfaceSpec::new(g, 2)).unwrap();
        for k in 2..=6u64 {
            assert_eq!(i_on(&s, &format!("c^{k} x1")), k - 1, "zeta^{k} on S_{g},2");
        }
    }
    assert_eq!(i_on(&torus, "a b a^3 b"), 1);
    assert_eq!(i_on(&torus, "a b a^2 b^2"), 2);
    let dt = t0.elapsed();
    assert!(dt.as_secs() < 10, "criterion 1 took {dt:?}");
    println!("ACCEPTANCE 1: PASS - family intersection numbers exact ({dt:?})");
}

#[test]
fn criterion_02_calibration_pinning() {
    let pants = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
    assert_eq!(i_on(&pants, "a b"), 1);
    assert_eq!(i_on(&pants, "a b^3"), 3);
    let torus = build_fatgraph(SurfaceSpec::new(1, 1)).unwrap();
    assert_eq!(i_on(&torus, "a b"), 0);
    let mut checked = 0;
    for spec in grid_surfaces() {
        let graph = build_fatgraph(spec).unwrap();
        for w in graph.boundary_words() {
            assert_eq!(self_intersection(&graph, &w).unwrap(), 0, "boundary on {spec}");
            checked += 1;
        }
        for label in graph.labels() {
            assert_eq!(i_on(&graph, &label), 0, "generator {label} on {spec}");
            checked += 1;
        }
    }
    println!("ACCEPTANCE 2: PASS - calibration anchors and {checked} zero-values exact");
}

/// All cyclically reduced cyclic words over two generators, up to rotation,
/// of length at most `max_len`.
fn rank2_cyclic_words(max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut cur = vec![0usize; len];
        loop {
            let letter = |c: usize| Letter::new(if c / 2 == 0 { "a" } else { "b" }, c % 2 == 1);
            let reduced = (0..len).all(|i| {
                let x = cur[i];
                let y = cur[(i + 1) % len];
                len == 1 || x / 2 != y / 2 || x % 2 == y % 2
            });
            if reduced {
                let canon = (0..len)
                    .map(|r| {
                        let mut v = cur.clone();
                        v.rotate_left(r);
                        v
                    })
                    .min()
                    .unwrap();
                if canon == cur {
                    out.push(cur.iter().map(|&c| letter(c)).collect());
                }
            }
            let mut i = 0;
            while i < len {
                cur[i] += 1;
                if cur[i] < 4 {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    out
}

#[test]
fn criterion_03_oracle_equivalence() {
    let t0 = Instant::now();
    let words = rank2_cyclic_words(6);
    let mut agreements = 0;
    for spec in [SurfaceSpec::new(0, 3), SurfaceSpec::new(1, 1)] {
        let graph = build_fatgraph(spec).unwrap();
        for letters in &words {
            let Ok(w) = CyclicWord::from_letters(letters.clone()) else { continue };
            if w.len() != letters.len() || !w.is_primitive() {
                continue;
            }
            match self_intersection(&graph, &w) {
                Ok(i) => {
                    let r = oracle_stabilized(&graph, &w, 2 * w.len() + 6).unwrap();
                    assert!(r.stable, "{w} unstable on {spec}");
                    assert_eq!(r.count, i, "{w} on {spec}");
                    agreements += 1;
                }
                Err(SelfIntError::Degenerate) => {} // excluded by the criterion
                Err(e) => panic!("{w}: {e}"),
            }
        }
    }
    let dt = t0.elapsed();
    assert!(agreements >= 300, "only {agreements} comparisons");
    assert!(dt.as_secs() < 300, "criterion 3 took {dt:?}");
    println!("ACCEPTANCE 3: PASS - engine = stabilized oracle on {agreements} words ({dt:?})");
}

#[test]
fn criterion_04_cover_invariants_on_grid() {
    let mut count = 0;
    for spec in grid_surfaces() {
        let graph = build_fatgraph(spec).unwrap();
        let base = graph.invariants().unwrap();
        for n in 2..=5usize {
            for target in admissible_targets(spec, n) {
                let built = realize_target(spec, n, target).unwrap();
                let info = validate_rep(&graph, &built.rep).unwrap();
                assert_eq!(info.chi, n as i64 * base.chi, "{spec} n={n}");
                assert!(
                    base.boundary <= info.boundary && info.boundary <= n as i64 * base.boundary,
                    "{spec} n={n}: boundary {}",
                    info.boundary
                );
                // section bounds and parity, checked on the realized value
                match target {
                    AdmissibleTarget::Boundaries(kt) => {
                        assert_eq!(info.boundary, kt);
                        let k = spec.boundary as i64;
                        let n = n as i64;
                        if (spec.genus, spec.boundary) == (0, 3) {
                            assert!(3 <= kt && kt <= n + 2 && (kt - n) % 2 == 0);
                        } else if spec.genus == 0 {
                            assert!(k <= kt && kt <= (k - 2) * n + 2 && (kt - n * k) % 2 == 0);
                        } else {
                            assert!(1 <= kt && kt <= n && (kt - n) % 2 == 0);
                        }
                    }
                    AdmissibleTarget::Genus(gt) => {
                        assert_eq!(info.genus, gt);
                        let g = spec.genus as i64;
                        let n = n as i64;
                        assert!(gt >= n * g - n + 1, "{spec}: lower genus bound");
                        match spec.boundary {
                            1 => assert!(gt <= n * (g - 1) + (n + 1) / 2),
                            2 => assert!(gt <= n * g),
                            _ => assert!(gt <= n * g + (n - 1) * (spec.boundary as i64 - 2) / 2),
                        }
                    }
                }
                count += 1;
            }
        }
    }
    println!("ACCEPTANCE 4: PASS - invariants exact on {count} constructed covers");
}

#[test]
fn criterion_05_realization_completeness() {
    // pants: the m-family realizes exactly the admissible boundary counts
    let pants = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
    for n in 2..=6usize {
        let mut realized = BTreeSet::new();
        for m in 0..=n - 2 {
            let c = pants_cover(n, m).unwrap();
            realized.insert(AdmissibleTarget::Boundaries(
                validate_rep(&pants, &c.rep).unwrap().boundary,
            ));
        }
        let admissible: BTreeSet<_> =
            admissible_targets(SurfaceSpec::new(0, 3), n).into_iter().collect();
        assert_eq!(realized, admissible, "pants n={n}");
        if n == 6 {
            let kt: BTreeSet<i64> = realized
                .iter()
                .map(|t| match t {
                    AdmissibleTarget::Boundaries(k) => *k,
                    _ => unreachable!(),
                })
                .collect();
            assert_eq!(kt, BTreeSet::from([4, 6, 8]));
        }
    }
    // one-holed torus: the q-family realizes exactly the admissible set
    let torus = build_fatgraph(SurfaceSpec::new(1, 1)).unwrap();
    for n in 2..=6usize {
        let mut realized = BTreeSet::new();
        let mut q = if n % 2 == 0 { 2 } else { 1 };
        while q <= n {
            let c = one_holed_torus_cover(n, q).unwrap();
            realized.insert(AdmissibleTarget::Boundaries(
                validate_rep(&torus, &c.rep).unwrap().boundary,
            ));
            q += 2;
        }
        let admissible: BTreeSet<_> =
            admissible_targets(SurfaceSpec::new(1, 1), n).into_iter().collect();
        assert_eq!(realized, admissible, "one-holed torus n={n}");
    }
    // per-section completeness over the grid: every admissible target is
    // realized by a verified constructor output
    let mut count = 0;
    for spec in grid_surfaces() {
        for n in 2..=5usize {
            for target in admissible_targets(spec, n) {
                realize_target(spec, n, target)
                    .unwrap_or_else(|e| panic!("{spec} n={n} {target:?}: {e}"));
                count += 1;
            }
        }
    }
    println!("ACCEPTANCE 5: PASS - realization complete ({count} grid targets + parameter sweeps)");
}

#[test]
fn criterion_06_certification_grid() {
    let t0 = Instant::now();
    let report = verify_all(
        GridBounds { max_genus: 3, max_boundary: 5, max_degree: 5, include_closed: true },
        1,
    )
    .unwrap();
    assert!(report.all_pass(), "{} failures", report.fail_count);
    for cert in &report.certificates {
        assert_eq!(cert.lift.lift_i, 0);
        assert!(cert.curve.expected_i >= 1);
        if let Some(i) = cert.curve.computed_i {
            assert_eq!(i, cert.curve.expected_i);
        }
    }
    // the named instances, including the degree-6 pants family
    for m in 0..=4usize {
        let cert = verify_instance(
            SurfaceSpec::new(0, 3),
            6,
            AdmissibleTarget::Boundaries(validate_rep(
                &build_fatgraph(SurfaceSpec::new(0, 3)).unwrap(),
                &pants_cover(6, m).unwrap().rep,
            )
            .unwrap()
            .boundary),
        )
        .unwrap();
        assert!(cert.pass);
    }
    let find = |spec: SurfaceSpec, n: usize, word: &str| {
        report
            .certificates
            .iter()
            .find(|c| c.surface == spec && c.degree == n && c.curve.word == word)
            .unwrap_or_else(|| panic!("missing instance {spec} n={n} {word}"))
    };
    find(SurfaceSpec::new(1, 1), 2, "a b a^3 b");
    find(SurfaceSpec::new(1, 1), 3, "a b a^2 b^2");
    find(SurfaceSpec::new(1, 1), 3, "a b a^3 b");
    find(SurfaceSpec::new(1, 1), 4, "a b a b^3");
    find(SurfaceSpec::new(1, 1), 5, "a b a b^4");
    find(SurfaceSpec::new(1, 1), 5, "a b a b^3");
    find(SurfaceSpec::new(0, 4), 2, "a2 a3 a4 a2");
    find(SurfaceSpec::new(3, 2), 3, "c^3 x1");
    // every constructor branch is exercised somewhere on the grid
    let branches: BTreeSet<(String, String)> = report
        .certificates
        .iter()
        .map(|c| (c.provenance.construction.clone(), c.provenance.case.clone()))
        .collect();
    for expect in [
        ("pants", "three-holed-sphere"),
        ("planar", "even-boundaries"),
        ("planar", "odd-boundaries"),
        ("planar", "odd-boundaries-free-end"),
        ("one-holed-torus", "fixed-plus-paired"),
        ("one-boundary", "handle-sum"),
        ("two-boundary", "annulus-cycle"),
        ("two-boundary", "genus-piece"),
        ("many-boundary", "handle-piece"),
        ("many-boundary", "planar-piece"),
        ("many-boundary", "split-pieces"),
        ("closed", "cyclic-handle"),
    ] {
        assert!(
            branches.contains(&(expect.0.to_string(), expect.1.to_string())),
            "constructor branch {expect:?} not exercised"
        );
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs() < 300, "criterion 6 took {dt:?}");
    println!(
        "ACCEPTANCE 6: PASS - {} certificates green on the grid ({dt:?})",
        report.certificates.len()
    );
}

#[test]
fn criterion_07_closed_surfaces() {
    let mut count = 0;
    for g in [2u32, 3] {
        for n in 2..=4usize {
            let built = closed_cover(n, g).unwrap();
            let q_graph = regular_neighborhood(g).unwrap();
            let relator = q_graph.boundary_words().pop().unwrap();
            assert!(built.rep.monodromy(&relator).unwrap().is_identity());
            assert!(built.rep.is_transitive(&q_graph.alphabet()).unwrap());
            let info = validate_rep(&q_graph, &built.rep).unwrap();
            assert_eq!(info.genus, 1 + n as i64 * (g as i64 - 1));

            let cert = verify_instance(
                SurfaceSpec::new(g, 0),
                n,
                AdmissibleTarget::Genus(1 + n as i64 * (g as i64 - 1)),
            )
            .unwrap();
            assert!(cert.pass, "closed g={g} n={n}: {:?}", cert.first_failure());
            assert_eq!(cert.lift.lift_i, 0);
            // evidence flag: nonzero non-primitive homology class computes,
            // otherwise the claim is recorded
            let w = CyclicWord::parse(&cert.curve.word, &q_graph.alphabet()).unwrap();
            let h = w.homology();
            let gcd = h.values().filter(|v| **v != 0).fold(0i64, |a, v| {
                fn g(a: i64, b: i64) -> i64 {
                    if b == 0 {
                        a
                    } else {
                        g(b, a % b)
                    }
                }
                g(a, v.abs())
            });
            let expect = if gcd > 1 {
                NonSimplicityEvidence::Homology
            } else {
                NonSimplicityEvidence::Cited
            };
            assert_eq!(cert.curve.evidence, expect);
            count += 1;
        }
    }
    println!("ACCEPTANCE 7: PASS - {count} closed-surface instances certified");
}

#[test]
fn criterion_08_essential_lifts_stay_essential() {
    let mut pairs = 0;
    for spec in grid_surfaces() {
        let graph = build_fatgraph(spec).unwrap();
        for n in 2..=3usize {
            for target in admissible_targets(spec, n) {
                let built = realize_target(spec, n, target).unwrap();
                let complex = build_cover(&graph, &built.rep).unwrap();
                // essential words: the certifying curves plus the generators
                let mut words: Vec<CyclicWord> = Vec::new();
                let choice =
                    liftlab_core::curves::select_curve(spec, n, target, &built).unwrap();
                words.push(choice.word);
                for label in graph.labels() {
                    let w = CyclicWord::parse(&label, &graph.alphabet()).unwrap();
                    if !is_boundary_parallel(&graph, &w) {
                        words.push(w);
                    }
                }
                for w in words {
                    let mono = built.rep.monodromy(&w).unwrap();
                    let mut covered = vec![false; n];
                    for s in 0..n {
                        if covered[s] {
                            continue;
                        }
                        for x in mono.orbit_of(s) {
                            covered[x] = true;
                        }
                        let lifted = lift_path(&complex, &w, s).unwrap();
                        assert!(
                            !path_is_boundary_parallel(&complex.total, &lifted.path),
                            "essential lift became boundary parallel: {w} on {spec} n={n}"
                        );
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs >= 100, "only {pairs} pairs sampled");
    println!("ACCEPTANCE 8: PASS - {pairs} preimage components all essential upstairs");
}

#[test]
fn criterion_09_unbounded_intersection_at_degree_two() {
    let spec = SurfaceSpec::new(1, 1);
    let graph = build_fatgraph(spec).unwrap();
    for m in 1..=6u64 {
        let text = format!("a b a^{} b", m + 2);
        let w = word_on(&graph, &text);
        assert_eq!(self_intersection(&graph, &w).unwrap(), m);
        let r = mindeg_search(spec, &w, 2).unwrap();
        assert_eq!(r.found_degree, Some(2), "{text}");
        assert!(r.exhaustive);
    }
    println!("ACCEPTANCE 9: PASS - arbitrarily non-simple curves lift simply at degree 2");
}

#[test]
fn criterion_10_structural_invariants() {
    // vertex-simple certificate implies engine zero on encountered lifts
    let mut vs_checked = 0;
    for (spec, n) in [(SurfaceSpec::new(0, 3), 4), (SurfaceSpec::new(1, 1), 4)] {
        let graph = build_fatgraph(spec).unwrap();
        for target in admissible_targets(spec, n) {
            let built = realize_target(spec, n, target).unwrap();
            let complex = build_cover(&graph, &built.rep).unwrap();
            let choice = liftlab_core::curves::select_curve(spec, n, target, &built).unwrap();
            let lifted = lift_path(&complex, &choice.word, choice.start_sheet).unwrap();
            let path = ClosedPath::new(&complex.total, lifted.path).unwrap();
            if vertex_simple_certificate(&complex.total, &path) {
                assert_eq!(self_intersection_path(&complex.total, &path).unwrap(), 0);
                vs_checked += 1;
            }
        }
    }
    assert!(vs_checked >= 1);

    // invariance of i under rotation, inversion, and conjugation on a
    // deterministic pseudo-random corpus of 200 words
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut rand = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let specs = [SurfaceSpec::new(0, 3), SurfaceSpec::new(1, 1)];
    let mut tested = 0;
    while tested < 200 {
        let spec = specs[(rand() % 2) as usize];
        let graph = build_fatgraph(spec).unwrap();
        let len = 2 + (rand() % 7) as usize;
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let c = rand() % 4;
                Letter::new(if c / 2 == 0 { "a" } else { "b" }, c % 2 == 1)
            })
            .collect();
        let Ok(w) = CyclicWord::from_letters(letters) else { continue };
        if !w.is_primitive() {
            continue;
        }
        let base = match self_intersection(&graph, &w) {
            Ok(i) => i,
            Err(SelfIntError::Degenerate) => continue,
            Err(e) => panic!("{e}"),
        };
        let rot = w.rotated((rand() % w.len() as u64) as usize);
        assert_eq!(self_intersection(&graph, &rot).unwrap(), base, "rotation of {w}");
        assert_eq!(self_intersection(&graph, &w.inverse()).unwrap(), base, "inverse of {w}");
        // conjugate by a short word
        let u = [
            Letter::new("a", rand() % 2 == 0),
            Letter::new("b", rand() % 2 == 0),
        ];
        let mut conj: Vec<Letter> = u.to_vec();
        conj.extend(w.letters().iter().cloned());
        conj.extend(u.iter().rev().map(Letter::inv));
        let cw = CyclicWord::from_letters(conj).unwrap();
        assert_eq!(self_intersection(&graph, &cw).unwrap(), base, "conjugate of {w}");
        tested += 1;
    }

    // byte-stable serialization round-trips
    for spec in [SurfaceSpec::new(0, 4), SurfaceSpec::new(2, 2)] {
        let graph = build_fatgraph(spec).unwrap();
        let j1 = serde_json::to_string_pretty(&graph).unwrap();
        let back: FatGraph = serde_json::from_str(&j1).unwrap();
        let j2 = serde_json::to_string_pretty(&back).unwrap();
        assert_eq!(j1, j2);
        assert_eq!(graph.to_dot(), back.to_dot());
    }
    let cert = verify_instance(SurfaceSpec::new(0, 3), 3, AdmissibleTarget::Boundaries(3)).unwrap();
    let c1 = serde_json::to_string_pretty(&cert).unwrap();
    let parsed: liftlab_core::harness::Certificate = serde_json::from_str(&c1).unwrap();
    let c2 = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(c1, c2);
    assert!(liftlab_core::harness::reverify(&parsed).unwrap());

    println!(
        "ACCEPTANCE 10: PASS - vertex-simple consistency, invariance on {tested} words, byte-stable round-trips"
    );
}
