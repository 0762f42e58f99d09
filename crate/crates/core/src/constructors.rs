//! Explicit cover constructors for each surface case, with per-case
//! admissibility predicates and search-based realization of target
//! invariants.
//!
//! Every constructor returns the monodromy together with provenance
//! (case name and parameters) so certificates can cite the construction.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::{validate_rep, CoverError, CoverRep, Perm};
use crate::fatgraph::{build_fatgraph, regular_neighborhood, FatGraph, FatGraphError, SurfaceSpec};
use crate::words::CyclicWord;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("target {0:?} is not admissible for {1} at degree {2}")]
    NotAdmissible(AdmissibleTarget, SurfaceSpec, usize),
    #[error("search exhausted without realizing target {0:?} for {1} at degree {2}")]
    SearchExhausted(AdmissibleTarget, SurfaceSpec, usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Graph(#[from] FatGraphError),
}

/// A cover invariant that the constructors can aim for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum AdmissibleTarget {
    Boundaries(i64),
    Genus(i64),
}

/// Which construction produced a rep, and with what parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub case: String,
    pub params: BTreeMap<String, i64>,
}

impl Provenance {
    fn new(construction: &str, case: &str, params: &[(&str, i64)]) -> Provenance {
        Provenance {
            construction: construction.to_string(),
            case: case.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constructed {
    pub rep: CoverRep,
    pub provenance: Provenance,
}

fn rep_with(graph: &FatGraph, degree: usize, assign: &[(&str, Perm)]) -> CoverRep {
    let mut perms: BTreeMap<String, Perm> = graph
        .labels()
        .into_iter()
        .map(|l| (l, Perm::identity(degree)))
        .collect();
    for (l, p) in assign {
        assert_eq!(p.degree(), degree);
        assert!(perms.contains_key(*l), "label {l} not on graph");
        perms.insert(l.to_string(), p.clone());
    }
    CoverRep::new(degree, perms).expect("degrees agree")
}

/// The exact finite set of cover invariants admissible for (spec, n).
///
/// For surfaces of genus 0 and the one-holed torus the classified invariant
/// is the boundary count; otherwise it is the genus. Closed surfaces admit a
/// single topological type per degree.
pub fn admissible_targets(spec: SurfaceSpec, n: usize) -> Vec<AdmissibleTarget> {
    assert!(n >= 2, "covers of degree >= 2");
    assert!(spec.chi() < 0, "hyperbolic-type surfaces only");
    let n_i = n as i64;
    let g = spec.genus as i64;
    let k = spec.boundary as i64;
    let mut out = Vec::new();
    if spec.is_closed() {
        out.push(AdmissibleTarget::Genus(1 + n_i * (g - 1)));
    } else if (g, k) == (0, 3) {
        // 3 <= kt <= n+2, kt = n (mod 2)
        for kt in 3..=n_i + 2 {
            if (kt - n_i) % 2 == 0 {
                out.push(AdmissibleTarget::Boundaries(kt));
            }
        }
    } else if g == 0 {
        // k <= kt <= (k-2)n+2, kt = nk (mod 2)
        for kt in k..=(k - 2) * n_i + 2 {
            if (kt - n_i * k) % 2 == 0 {
                out.push(AdmissibleTarget::Boundaries(kt));
            }
        }
    } else if (g, k) == (1, 1) {
        // 1 <= kt <= n, kt = n (mod 2)
        for kt in 1..=n_i {
            if (kt - n_i) % 2 == 0 {
                out.push(AdmissibleTarget::Boundaries(kt));
            }
        }
    } else if k == 1 {
        // ng-n+1 <= gt <= n(g-1) + (n+1)/2, every integer in range
        let lo = n_i * g - n_i + 1;
        let hi = n_i * (g - 1) + (n_i + 1) / 2;
        for gt in lo..=hi {
            out.push(AdmissibleTarget::Genus(gt));
        }
    } else if k == 2 {
        // ng-n+1 <= gt <= ng
        for gt in n_i * g - n_i + 1..=n_i * g {
            out.push(AdmissibleTarget::Genus(gt));
        }
    } else {
        // ng-n+1 <= gt <= ng + max planar piece genus
        let lo = n_i * g - n_i + 1;
        let hi = n_i * g + max_planar_piece_genus(n_i, k);
        for gt in lo..=hi {
            out.push(AdmissibleTarget::Genus(gt));
        }
    }
    out
}

/// Largest genus of a degree-n cover of S_{0,k} (k >= 3): realized at the
/// smallest admissible boundary count.
fn max_planar_piece_genus(n: i64, k: i64) -> i64 {
    let min_kt = if (k * (n - 1)) % 2 == 0 { k } else { k + 1 };
    (2 - min_kt + n * (k - 2)) / 2
}

/// Pair-of-pants covers P^[n]_m for 0 <= m <= n-2.
///
/// sigma_b is the full cycle; sigma_a fixes 1..m and closes the remaining
/// sheets into an (n-m)-cycle whose a-edge from sheet m+1 lands on sheet 0.
pub fn pants_cover(n: usize, m: usize) -> Result<Constructed, ConstructError> {
    if n < 2 || m > n - 2 {
        return Err(ConstructError::BadParameter(format!(
            "pants cover needs m <= n-2, got ({n},{m})"
        )));
    }
    let mut images: Vec<usize> = (0..n).collect();
    // cycle on {0, m+1, .., n-1}: m+1 -> 0 -> n-1 -> n-2 -> .. -> m+2 -> m+1
    images[m + 1] = 0;
    images[0] = n - 1;
    for j in m + 2..n {
        images[j] = j - 1;
    }
    let sigma_a = Perm::new(images).expect("valid by construction");
    let graph = build_fatgraph(SurfaceSpec::new(0, 3))?;
    let rep = rep_with(&graph, n, &[("a", sigma_a), ("b", Perm::full_cycle(n))]);
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "pants",
            "three-holed-sphere",
            &[("n", n as i64), ("m", m as i64)],
        ),
    })
}

/// Covers of the one-holed torus with q sheets fixed by sigma_a and the
/// rest paired into 2-cycles; q = n (mod 2), 1 <= q <= n.
pub fn one_holed_torus_cover(n: usize, q: usize) -> Result<Constructed, ConstructError> {
    if q < 1 || q > n || (n - q) % 2 != 0 {
        return Err(ConstructError::BadParameter(format!(
            "one-holed torus cover needs 1 <= q <= n with q = n mod 2, got ({n},{q})"
        )));
    }
    let mut sigma_a = Perm::identity(n);
    let mut j = q;
    while j + 1 < n {
        sigma_a = sigma_a.then(&Perm::transposition(n, j, j + 1));
        j += 2;
    }
    let graph = build_fatgraph(SurfaceSpec::new(1, 1))?;
    let rep = rep_with(&graph, n, &[("a", sigma_a), ("b", Perm::full_cycle(n))]);
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "one-holed-torus",
            "fixed-plus-paired",
            &[("n", n as i64), ("q", q as i64)],
        ),
    })
}

/// Catalog of gluing permutations used by the planar searches: for each
/// j = 1..n the j-cycle (0 1 .. j-1), with cycle count n-j+1.
fn cycle_catalog(n: usize) -> Vec<Perm> {
    (1..=n).map(|j| Perm::cycle(n, &(0..j).collect::<Vec<_>>())).collect()
}

/// Even-boundary planar covers of S_{0,k}: boundaries are cut in pairs and
/// paired cuts get inverse permutations, so every tau-curve monodromy
/// telescopes to a power of sigma(a2).
///
/// `pis[0]` is sigma(a2); `pis[i]` (i >= 1) handles the pair
/// (a_{2i+1}, a_{2i+2}) as (pi, pi^-1). Some pi must be an n-cycle for the
/// cover to be connected.
pub fn planar_cover(n: usize, k: usize, pis: &[Perm]) -> Result<Constructed, ConstructError> {
    if k < 4 || k % 2 != 0 {
        return Err(ConstructError::BadParameter(format!(
            "planar even case needs even k >= 4, got {k}"
        )));
    }
    if pis.len() != k / 2 {
        return Err(ConstructError::BadParameter(format!(
            "need k/2 = {} gluing permutations, got {}",
            k / 2,
            pis.len()
        )));
    }
    let graph = build_fatgraph(SurfaceSpec::new(0, k as u32))?;
    let mut assign: Vec<(String, Perm)> = vec![("a2".to_string(), pis[0].clone())];
    for (i, pi) in pis.iter().enumerate().skip(1) {
        assign.push((format!("a{}", 2 * i + 1), pi.clone()));
        assign.push((format!("a{}", 2 * i + 2), pi.inverse()));
    }
    let pairs: Vec<(&str, Perm)> = assign.iter().map(|(l, p)| (l.as_str(), p.clone())).collect();
    let rep = rep_with(&graph, n, &pairs);
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "planar",
            "even-boundaries",
            &[("n", n as i64), ("k", k as i64)],
        ),
    })
}

/// Odd-boundary planar covers: S_{0,k} is a (k-1)-boundary piece glued to a
/// pants along a circle G with class a_{k-1} a_k. The piece gets the
/// even-case construction with G's cut carrying an n-cycle; sigma(a_{k-1})
/// is a free parameter rho and sigma(a_k) solves
/// mono(a_{k-1} a_k) = sigma(G).
///
/// Cut pairs on the piece: (A1,A2), (A3,A4), .., (A_{k-4},A_{k-3}),
/// (A_{k-2},G). `pis[0]` is sigma(a2) and must have order dividing n (so
/// tau^{n-1} has identity monodromy); `pis[last]` is the (A_{k-2},G) pair
/// and must be an n-cycle.
pub fn planar_cover_odd(
    n: usize,
    k: usize,
    pis: &[Perm],
    rho: &Perm,
) -> Result<Constructed, ConstructError> {
    if k < 5 || k % 2 == 0 {
        return Err(ConstructError::BadParameter(format!(
            "planar odd case needs odd k >= 5, got {k}"
        )));
    }
    let want = (k - 1) / 2;
    if pis.len() != want {
        return Err(ConstructError::BadParameter(format!(
            "need (k-1)/2 = {want} gluing permutations, got {}",
            pis.len()
        )));
    }
    let glue = &pis[want - 1];
    if glue.cycle_count() != 1 {
        return Err(ConstructError::BadParameter(
            "the gluing-circle permutation must be an n-cycle".to_string(),
        ));
    }
    let mut pow = Perm::identity(n);
    for _ in 0..n {
        pow = pow.then(&pis[0]);
    }
    if !pow.is_identity() {
        return Err(ConstructError::BadParameter(
            "sigma(a2)^n must be the identity".to_string(),
        ));
    }
    let graph = build_fatgraph(SurfaceSpec::new(0, k as u32))?;
    let mut assign: Vec<(String, Perm)> = vec![("a2".to_string(), pis[0].clone())];
    for (i, pi) in pis.iter().enumerate().take(want - 1).skip(1) {
        assign.push((format!("a{}", 2 * i + 1), pi.clone()));
        assign.push((format!("a{}", 2 * i + 2), pi.inverse()));
    }
    assign.push((format!("a{}", k - 2), glue.clone()));
    let sigma_g = glue.inverse();
    assign.push((format!("a{}", k - 1), rho.clone()));
    assign.push((format!("a{k}"), rho.inverse().then(&sigma_g)));
    let pairs: Vec<(&str, Perm)> = assign.iter().map(|(l, p)| (l.as_str(), p.clone())).collect();
    let rep = rep_with(&graph, n, &pairs);
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "planar",
            "odd-boundaries",
            &[("n", n as i64), ("k", k as i64)],
        ),
    })
}

/// Odd-boundary planar covers, alternate pasting: the cuts pair
/// (A1,A2), (A3,A4), .., (A_{k-3},A_{k-2}) and the last boundary is not
/// cut, so sigma(a_k) is trivial and tau-curve monodromies telescope to
/// powers of the connecting n-cycle on a2 exactly as in the even case.
pub fn planar_cover_odd_free_end(
    n: usize,
    k: usize,
    pis: &[Perm],
) -> Result<Constructed, ConstructError> {
    if k < 5 || k % 2 == 0 {
        return Err(ConstructError::BadParameter(format!(
            "planar odd case needs odd k >= 5, got {k}"
        )));
    }
    let want = (k - 1) / 2;
    if pis.len() != want {
        return Err(ConstructError::BadParameter(format!(
            "need (k-1)/2 = {want} gluing permutations, got {}",
            pis.len()
        )));
    }
    if pis[0].cycle_count() != 1 {
        return Err(ConstructError::BadParameter(
            "the first cut permutation must be an n-cycle".to_string(),
        ));
    }
    let graph = build_fatgraph(SurfaceSpec::new(0, k as u32))?;
    let mut assign: Vec<(String, Perm)> = vec![("a2".to_string(), pis[0].clone())];
    for (i, pi) in pis.iter().enumerate().skip(1) {
        assign.push((format!("a{}", 2 * i + 1), pi.clone()));
        assign.push((format!("a{}", 2 * i + 2), pi.inverse()));
    }
    // a_k stays identity: its boundary is not cut
    let pairs: Vec<(&str, Perm)> = assign.iter().map(|(l, p)| (l.as_str(), p.clone())).collect();
    let rep = rep_with(&graph, n, &pairs);
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "planar",
            "odd-boundaries-free-end",
            &[("n", n as i64), ("k", k as i64)],
        ),
    })
}

/// Realize a boundary-count target on S_{0,k} (k >= 4) by a deterministic
/// search over the cycle catalogs; odd k tries both pastings. Unreachable
/// targets are reported, never fabricated.
pub fn planar_realize(n: usize, k: usize, target: i64) -> Result<Constructed, ConstructError> {
    let spec = SurfaceSpec::new(0, k as u32);
    let graph = build_fatgraph(spec)?;
    let catalog = cycle_catalog(n);
    let hit = |built: Constructed| -> Option<Constructed> {
        match validate_rep(&graph, &built.rep) {
            Ok(info) if info.boundary == target => Some(built),
            _ => None,
        }
    };
    // The first cut is always pasted connectedly (sigma(a2) = full cycle):
    // the tau-curve lift threads all sheets through it. Remaining cuts vary
    // over the cycle catalog.
    if k % 2 == 0 {
        let slots = k / 2 - 1;
        let mut choice = vec![0usize; slots];
        loop {
            let mut pis: Vec<Perm> = vec![Perm::full_cycle(n)];
            for c in &choice {
                pis.push(catalog[*c].clone());
            }
            if let Ok(built) = planar_cover(n, k, &pis) {
                if let Some(found) = hit(built) {
                    return Ok(found);
                }
            }
            if !advance(&mut choice, catalog.len(), catalog.len()) {
                break;
            }
        }
    } else {
        let slots = (k - 1) / 2;
        // glued-circle pasting: middles and rho vary, gluing pair pinned
        let mut choice = vec![0usize; slots - 1];
        loop {
            let mut pis: Vec<Perm> = vec![Perm::full_cycle(n)];
            for c in &choice[..slots - 2] {
                pis.push(catalog[*c].clone());
            }
            pis.push(Perm::full_cycle(n));
            let rho = &catalog[choice[slots - 2]];
            if let Ok(built) = planar_cover_odd(n, k, &pis, rho) {
                if let Some(found) = hit(built) {
                    return Ok(found);
                }
            }
            if !advance(&mut choice, catalog.len(), catalog.len()) {
                break;
            }
        }
        // free-end pasting: last boundary uncut, middles vary
        let mut choice = vec![0usize; slots - 1];
        loop {
            let mut pis: Vec<Perm> = vec![Perm::full_cycle(n)];
            for c in &choice {
                pis.push(catalog[*c].clone());
            }
            if let Ok(built) = planar_cover_odd_free_end(n, k, &pis) {
                if let Some(found) = hit(built) {
                    return Ok(found);
                }
            }
            if !advance(&mut choice, catalog.len(), catalog.len()) {
                break;
            }
        }
    }
    Err(ConstructError::SearchExhausted(AdmissibleTarget::Boundaries(target), spec, n))
}

/// Odometer over mixed radices: slot 0 runs over `first`, later slots over
/// `rest`. Returns false when the odometer wraps.
fn advance(choice: &mut [usize], first: usize, rest: usize) -> bool {
    for (i, c) in choice.iter_mut().enumerate() {
        let radix = if i == 0 { first } else { rest };
        *c += 1;
        if *c < radix {
            return true;
        }
        *c = 0;
    }
    false
}

/// Covers of S_{g,1}, g >= 1: the one-holed-torus pattern on the first
/// handle (x1, y1), identity on the rest. Realized genus ng + (2-q-n)/2.
pub fn one_boundary_cover(n: usize, g: u32, q: usize) -> Result<Constructed, ConstructError> {
    if g == 0 {
        return Err(ConstructError::BadParameter("genus must be >= 1".into()));
    }
    if g == 1 {
        return one_holed_torus_cover(n, q);
    }
    let torus = one_holed_torus_cover(n, q)?;
    let graph = build_fatgraph(SurfaceSpec::new(g, 1))?;
    let rep = rep_with(
        &graph,
        n,
        &[
            ("x1", torus.rep.perm("a").unwrap().clone()),
            ("y1", torus.rep.perm("b").unwrap().clone()),
        ],
    );
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "one-boundary",
            "handle-sum",
            &[("n", n as i64), ("g", g as i64), ("q", q as i64)],
        ),
    })
}

/// Covers of S_{g,2} parameterized by u = ng - gt, 0 <= u <= n-1.
///
/// For u >= 1: sigma(y1) cycles sheets 0..=u (a (u+1)-sheeted genus piece of
/// maximal genus), sigma(c) cycles sheets u..n-1. For u = 0 only sigma(c)
/// is nontrivial, a full cycle.
pub fn two_boundary_cover(n: usize, g: u32, u: usize) -> Result<Constructed, ConstructError> {
    if g < 1 {
        return Err(ConstructError::BadParameter("genus must be >= 1".into()));
    }
    if u + 1 > n {
        return Err(ConstructError::BadParameter(format!("u must be <= n-1, got {u}")));
    }
    let graph = build_fatgraph(SurfaceSpec::new(g, 2))?;
    let rep = if u == 0 {
        rep_with(&graph, n, &[("c", Perm::full_cycle(n))])
    } else {
        let y_cycle = Perm::cycle(n, &(0..=u).collect::<Vec<_>>());
        let c_cycle = Perm::cycle(n, &(u..n).collect::<Vec<_>>());
        rep_with(&graph, n, &[("y1", y_cycle), ("c", c_cycle)])
    };
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "two-boundary",
            if u == 0 { "annulus-cycle" } else { "genus-piece" },
            &[("n", n as i64), ("g", g as i64), ("u", u as i64)],
        ),
    })
}

/// Covers of S_{g,k}, g >= 1, k >= 3, aimed at a genus target.
///
/// Case 1 (gt <= ng - ceil((n-1)/2)): one-boundary pattern on the handles.
/// Case 2 (gt >= ng): planar pattern on the planar generators realizing
/// piece genus gt - ng. Case 3 (in between, l = ng - gt + 1): an l-sheeted
/// minimal-genus handle piece next to an (n-l+1)-cycle on a2.
pub fn many_boundary_cover(
    n: usize,
    g: u32,
    k: u32,
    target_genus: i64,
) -> Result<Constructed, ConstructError> {
    if g < 1 || k < 3 {
        return Err(ConstructError::BadParameter(format!(
            "needs g >= 1, k >= 3, got ({g},{k})"
        )));
    }
    let spec = SurfaceSpec::new(g, k);
    let n_i = n as i64;
    let g_i = g as i64;
    if !admissible_targets(spec, n).contains(&AdmissibleTarget::Genus(target_genus)) {
        return Err(ConstructError::NotAdmissible(AdmissibleTarget::Genus(target_genus), spec, n));
    }
    let graph = build_fatgraph(spec)?;
    let case1_bound = n_i * g_i - (n_i) / 2; // ng - ceil((n-1)/2)
    if target_genus <= case1_bound {
        let q = 2 * (n_i * g_i - target_genus + 1) - n_i;
        if q < 1 || q > n_i {
            return Err(ConstructError::SearchExhausted(
                AdmissibleTarget::Genus(target_genus),
                spec,
                n,
            ));
        }
        let torus = one_holed_torus_cover(n, q as usize)?;
        let rep = rep_with(
            &graph,
            n,
            &[
                ("x1", torus.rep.perm("a").unwrap().clone()),
                ("y1", torus.rep.perm("b").unwrap().clone()),
            ],
        );
        return Ok(Constructed {
            rep,
            provenance: Provenance::new(
                "many-boundary",
                "handle-piece",
                &[("n", n_i), ("g", g_i), ("k", k as i64), ("q", q)],
            ),
        });
    }
    if target_genus >= n_i * g_i {
        let piece_genus = target_genus - n_i * g_i;
        let kt2 = 2 - 2 * piece_genus + n_i * (k as i64 - 2);
        let planar = if k == 3 {
            pants_piece_realize(n, kt2)?
        } else {
            planar_realize(n, k as usize, kt2)?
        };
        let pairs: Vec<(String, Perm)> =
            planar.rep.perms.iter().map(|(l, p)| (l.clone(), p.clone())).collect();
        let assign: Vec<(&str, Perm)> = pairs.iter().map(|(l, p)| (l.as_str(), p.clone())).collect();
        let rep = rep_with(&graph, n, &assign);
        let mut params = planar.provenance.params.clone();
        params.insert("g".into(), g_i);
        return Ok(Constructed {
            rep,
            provenance: Provenance {
                construction: "many-boundary".into(),
                case: "planar-piece".into(),
                params,
            },
        });
    }
    // Case 3: 1 < l < (n+1)/2
    let l = (n_i * g_i - target_genus + 1) as usize;
    let y_cycle = Perm::cycle(n, &(0..l).collect::<Vec<_>>());
    let mut a2_sheets = vec![0usize];
    a2_sheets.extend(l..n);
    let a2_cycle = Perm::cycle(n, &a2_sheets);
    let rep = rep_with(&graph, n, &[("y1", y_cycle), ("a2", a2_cycle)]);
    Ok(Constructed {
        rep,
        provenance: Provenance::new(
            "many-boundary",
            "split-pieces",
            &[("n", n_i), ("g", g_i), ("k", k as i64), ("l", l as i64)],
        ),
    })
}

/// Pants-role piece of a composite with k = 3: the pants construction
/// transported through the label isomorphism a -> a2, b -> a3^-1 (the
/// pants model and the two-generator planar block are mirror images).
fn pants_piece_realize(n: usize, target_boundaries: i64) -> Result<Constructed, ConstructError> {
    let pants = build_fatgraph(SurfaceSpec::new(0, 3))?;
    for m in 0..=n - 2 {
        let c = pants_cover(n, m)?;
        let info = validate_rep(&pants, &c.rep)?;
        if info.boundary == target_boundaries {
            let mut perms = BTreeMap::new();
            perms.insert("a2".to_string(), c.rep.perm("a").unwrap().clone());
            perms.insert("a3".to_string(), c.rep.perm("b").unwrap().inverse());
            let mut params = c.provenance.params.clone();
            params.insert("mirrored".into(), 1);
            return Ok(Constructed {
                rep: CoverRep::new(n, perms)?,
                provenance: Provenance {
                    construction: "planar".into(),
                    case: "pants-piece".into(),
                    params,
                },
            });
        }
    }
    Err(ConstructError::SearchExhausted(
        AdmissibleTarget::Boundaries(target_boundaries),
        SurfaceSpec::new(0, 3),
        n,
    ))
}

/// Covers of closed surfaces of genus g >= 2: sigma(d1) is the full cycle,
/// all other generators trivial. The boundary relator of the spine
/// neighborhood has identity monodromy, so the rep descends to the closed
/// surface; its restriction to the neighborhood is transitive.
pub fn closed_cover(n: usize, g: u32) -> Result<Constructed, ConstructError> {
    if g < 2 {
        return Err(ConstructError::BadParameter("closed case needs g >= 2".into()));
    }
    let q_graph = regular_neighborhood(g)?;
    let rep = rep_with(&q_graph, n, &[("d1", Perm::full_cycle(n))]);
    let relator = q_graph.boundary_words().pop().expect("one boundary");
    let mono = rep.monodromy(&relator)?;
    assert!(mono.is_identity(), "relator monodromy must be trivial");
    Ok(Constructed {
        rep,
        provenance: Provenance::new("closed", "cyclic-handle", &[("n", n as i64), ("g", g as i64)]),
    })
}

/// Construct a cover of `spec` of degree `n` realizing `target`, verified
/// by face tracing.
pub fn realize_target(
    spec: SurfaceSpec,
    n: usize,
    target: AdmissibleTarget,
) -> Result<Constructed, ConstructError> {
    if !admissible_targets(spec, n).contains(&target) {
        return Err(ConstructError::NotAdmissible(target, spec, n));
    }
    let (g, k) = (spec.genus, spec.boundary);
    let built = if spec.is_closed() {
        closed_cover(n, g)?
    } else if (g, k) == (0, 3) {
        let AdmissibleTarget::Boundaries(kt) = target else {
            return Err(ConstructError::NotAdmissible(target, spec, n));
        };
        let graph = build_fatgraph(spec)?;
        let mut found = None;
        for m in 0..=n - 2 {
            let c = pants_cover(n, m)?;
            if validate_rep(&graph, &c.rep)?.boundary == kt {
                found = Some(c);
                break;
            }
        }
        found.ok_or(ConstructError::SearchExhausted(target, spec, n))?
    } else if g == 0 {
        let AdmissibleTarget::Boundaries(kt) = target else {
            return Err(ConstructError::NotAdmissible(target, spec, n));
        };
        planar_realize(n, k as usize, kt)?
    } else if (g, k) == (1, 1) {
        let AdmissibleTarget::Boundaries(kt) = target else {
            return Err(ConstructError::NotAdmissible(target, spec, n));
        };
        one_holed_torus_cover(n, kt as usize)?
    } else if k == 1 {
        let AdmissibleTarget::Genus(gt) = target else {
            return Err(ConstructError::NotAdmissible(target, spec, n));
        };
        let q = 2 * (n as i64 * g as i64 - gt + 1) - n as i64;
        one_boundary_cover(n, g, q as usize)?
    } else if k == 2 {
        let AdmissibleTarget::Genus(gt) = target else {
            return Err(ConstructError::NotAdmissible(target, spec, n));
        };
        let u = (n as i64 * g as i64 - gt) as usize;
        two_boundary_cover(n, g, u)?
    } else {
        let AdmissibleTarget::Genus(gt) = target else {
            return Err(ConstructError::NotAdmissible(target, spec, n));
        };
        many_boundary_cover(n, g, k, gt)?
    };
    // verify the target is realized exactly
    let (graph, closed_adjust) = if spec.is_closed() {
        (regular_neighborhood(g)?, true)
    } else {
        (build_fatgraph(spec)?, false)
    };
    let info = validate_rep(&graph, &built.rep)?;
    let realized = match target {
        AdmissibleTarget::Boundaries(_) => AdmissibleTarget::Boundaries(info.boundary),
        // capping the spine neighborhood's boundary preimages with disks
        // leaves the genus unchanged
        AdmissibleTarget::Genus(_) => AdmissibleTarget::Genus(info.genus),
    };
    let _ = closed_adjust;
    if realized != target {
        return Err(ConstructError::SearchExhausted(target, spec, n));
    }
    Ok(built)
}

/// tau^j on S_{0,k}: the product of the generators followed by a2^j.
pub fn tau_word(k: u32, j: usize) -> CyclicWord {
    let gens: Vec<String> = (2..=k).map(|i| format!("a{i}")).collect();
    let alphabet: BTreeSet<String> = gens.iter().cloned().collect();
    let mut text = gens.join(" ");
    text.push_str(&format!(" a2^{j}"));
    CyclicWord::parse(&text, &alphabet).unwrap()
}
