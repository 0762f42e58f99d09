//! The non-simple curve families and the per-construction curve selection
//! table: which curve certifies a simple lift in which cover.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{AdmissibleTarget, Constructed};
use crate::fatgraph::{build_fatgraph, regular_neighborhood, FatGraph, FatGraphError, SurfaceSpec};
use crate::words::{substitute, CyclicWord, Letter, WordError};

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("parameter out of range for family {0}: {1}")]
    BadParameter(String, i64),
    #[error("family {0} does not live on {1}")]
    WrongSurface(String, SurfaceSpec),
    #[error("no curve selection for {0} at degree {1}")]
    NoSelection(SurfaceSpec, usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Graph(#[from] FatGraphError),
}

/// Named curve family with one integer parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// a b^k on the pants; i = k
    Gamma,
    /// a2 a3 .. ak a2^j on S_{0,k}; i = j
    Tau,
    /// a b a b^k on the one-holed torus, k >= 3; i = k-2
    Eta,
    /// a b a^n b on the one-holed torus, n >= 3; i = n-2
    Sigma,
    /// a^2 b^n on the one-holed torus, n >= 2; i = n-1
    SquareTimesPower,
    /// c^k x1 on S_{g,2}, k >= 2; i = k-1
    Zeta,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "gamma" => Some(Family::Gamma),
            "tau" => Some(Family::Tau),
            "eta" => Some(Family::Eta),
            "sigma" => Some(Family::Sigma),
            "a2bn" => Some(Family::SquareTimesPower),
            "zeta" => Some(Family::Zeta),
            _ => None,
        }
    }
}

/// The family's word on its home surface plus the closed-form expected
/// self-intersection number.
pub fn family_word(
    family: Family,
    param: i64,
    home: SurfaceSpec,
) -> Result<(CyclicWord, i64), CurveError> {
    let graph = build_fatgraph(home)?;
    let alphabet = graph.alphabet();
    let bad = |name: &str| CurveError::BadParameter(name.to_string(), param);
    match family {
        Family::Gamma => {
            if home != SurfaceSpec::new(0, 3) {
                return Err(CurveError::WrongSurface("gamma".into(), home));
            }
            if param < 1 {
                return Err(bad("gamma"));
            }
            Ok((CyclicWord::parse(&format!("a b^{param}"), &alphabet)?, param))
        }
        Family::Tau => {
            if home.genus != 0 || home.boundary < 4 {
                return Err(CurveError::WrongSurface("tau".into(), home));
            }
            if param < 1 {
                return Err(bad("tau"));
            }
            Ok((crate::constructors::tau_word(home.boundary, param as usize), param))
        }
        Family::Eta => {
            if home != SurfaceSpec::new(1, 1) {
                return Err(CurveError::WrongSurface("eta".into(), home));
            }
            if param < 3 {
                return Err(bad("eta"));
            }
            Ok((CyclicWord::parse(&format!("a b a b^{param}"), &alphabet)?, param - 2))
        }
        Family::Sigma => {
            if home != SurfaceSpec::new(1, 1) {
                return Err(CurveError::WrongSurface("sigma".into(), home));
            }
            if param < 3 {
                return Err(bad("sigma"));
            }
            Ok((CyclicWord::parse(&format!("a b a^{param} b"), &alphabet)?, param - 2))
        }
        Family::SquareTimesPower => {
            if home != SurfaceSpec::new(1, 1) {
                return Err(CurveError::WrongSurface("a2bn".into(), home));
            }
            if param < 2 {
                return Err(bad("a2bn"));
            }
            Ok((CyclicWord::parse(&format!("a^2 b^{param}"), &alphabet)?, param - 1))
        }
        Family::Zeta => {
            if home.genus < 1 || home.boundary != 2 {
                return Err(CurveError::WrongSurface("zeta".into(), home));
            }
            if param < 2 {
                return Err(bad("zeta"));
            }
            Ok((CyclicWord::parse(&format!("c^{param} x1"), &alphabet)?, param - 1))
        }
    }
}

/// How the downstairs non-simplicity of a selected curve is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonSimplicityEvidence {
    /// computed exactly by the intersection engine
    Computed,
    /// closed surface: nonzero non-primitive homology class
    Homology,
    /// closed surface, homology silent: recorded literature claim
    Cited,
}

/// A selected certifying curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveChoice {
    pub word: CyclicWord,
    pub expected_i: i64,
    pub start_sheet: usize,
    pub evidence: NonSimplicityEvidence,
}

/// The curve on the one-holed torus certifying the cover with invariant q,
/// as a word over (a, b).
fn torus_case_word(n: usize, q: usize) -> Result<(String, i64), CurveError> {
    let word = match (n, q) {
        (2, 2) => ("a b a^3 b".to_string(), 1),
        (3, 3) => ("a b a^2 b^2".to_string(), 2),
        (3, 1) => ("a b a^3 b".to_string(), 1),
        // eta^{n-1}, i = n-3; except q = 1 (n odd >= 5) takes eta^{n-2}
        _ if n >= 4 && q >= 2 => (format!("a b a b^{}", n - 1), n as i64 - 3),
        _ if n >= 5 && q == 1 => (format!("a b a b^{}", n - 2), n as i64 - 4),
        _ => return Err(CurveError::NoSelection(SurfaceSpec::new(1, 1), n)),
    };
    Ok(word)
}

fn rename(word: &CyclicWord, map: &[(&str, &str)]) -> CyclicWord {
    let table: BTreeMap<String, Vec<Letter>> = map
        .iter()
        .map(|(from, to)| (from.to_string(), vec![Letter::new(*to, false)]))
        .collect();
    substitute(word, &table).expect("renaming preserves reducedness")
}

/// Deterministic curve selection for a constructed cover of (spec, n)
/// realizing `target`. The start sheet points into the active piece of the
/// construction.
pub fn select_curve(
    spec: SurfaceSpec,
    n: usize,
    target: AdmissibleTarget,
    built: &Constructed,
) -> Result<CurveChoice, CurveError> {
    let (g, k) = (spec.genus, spec.boundary);
    let params = &built.provenance.params;
    let torus_alphabet = build_fatgraph(SurfaceSpec::new(1, 1))?.alphabet();
    if spec.is_closed() {
        // curve on the spine neighborhood: the torus-case word for the
        // restriction, which fixes every sheet of sigma(c1) (q = n pattern)
        let (text, expected) = torus_case_word(n, n)?;
        let base = CyclicWord::parse(&text, &torus_alphabet)?;
        let word = rename(&base, &[("a", "c1"), ("b", "d1")]);
        // homology screen: nonzero non-primitive class on the closed surface
        let h = word.homology();
        let nonzero: Vec<i64> = h.values().copied().filter(|v| *v != 0).collect();
        let gcd = nonzero.iter().fold(0i64, |acc, v| gcd(acc, v.abs()));
        let evidence = if !nonzero.is_empty() && gcd > 1 {
            NonSimplicityEvidence::Homology
        } else {
            NonSimplicityEvidence::Cited
        };
        return Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence });
    }
    let computed = NonSimplicityEvidence::Computed;
    if (g, k) == (0, 3) {
        let m = *params.get("m").ok_or(CurveError::NoSelection(spec, n))? as usize;
        let (word, expected) = family_word(Family::Gamma, m as i64 + 1, spec)?;
        return Ok(CurveChoice { word, expected_i: expected, start_sheet: m + 1, evidence: computed });
    }
    if g == 0 {
        let (word, expected) = family_word(Family::Tau, n as i64 - 1, spec)?;
        return Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed });
    }
    if (g, k) == (1, 1) {
        let AdmissibleTarget::Boundaries(q) = target else {
            return Err(CurveError::NoSelection(spec, n));
        };
        let (text, expected) = torus_case_word(n, q as usize)?;
        let word = CyclicWord::parse(&text, &torus_alphabet)?;
        return Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed });
    }
    if k == 1 {
        let q = *params.get("q").ok_or(CurveError::NoSelection(spec, n))? as usize;
        let (text, expected) = torus_case_word(n, q)?;
        let base = CyclicWord::parse(&text, &torus_alphabet)?;
        let word = rename(&base, &[("a", "x1"), ("b", "y1")]);
        return Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed });
    }
    if k == 2 {
        let u = *params.get("u").ok_or(CurveError::NoSelection(spec, n))? as usize;
        if u == 0 {
            let (word, expected) = family_word(Family::Zeta, n as i64, spec)?;
            return Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed });
        }
        // the handle piece is a (u+1)-sheeted cover of the genus part with
        // every sigma(x1)-sheet fixed: the q = n pattern at degree u+1
        let (text, expected) = torus_case_word(u + 1, u + 1)?;
        let base = CyclicWord::parse(&text, &torus_alphabet)?;
        let word = rename(&base, &[("a", "x1"), ("b", "y1")]);
        return Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed });
    }
    // k >= 3
    match built.provenance.case.as_str() {
        "handle-piece" => {
            let q = *params.get("q").ok_or(CurveError::NoSelection(spec, n))? as usize;
            let (text, expected) = torus_case_word(n, q)?;
            let base = CyclicWord::parse(&text, &torus_alphabet)?;
            let word = rename(&base, &[("a", "x1"), ("b", "y1")]);
            Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed })
        }
        "planar-piece" => {
            if k == 3 {
                // mirrored pants piece: gamma^{m+1} becomes a2 a3^-{m+1}
                let m = *params.get("m").ok_or(CurveError::NoSelection(spec, n))? as usize;
                let graph = build_fatgraph(spec)?;
                let text = format!("a2 a3^-{}", m + 1);
                let word = CyclicWord::parse(&text, &graph.alphabet())?;
                Ok(CurveChoice {
                    word,
                    expected_i: m as i64 + 1,
                    start_sheet: m + 1,
                    evidence: computed,
                })
            } else {
                let (word, expected) = family_word(Family::Tau, n as i64 - 1, SurfaceSpec::new(0, k))?;
                Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed })
            }
        }
        "split-pieces" => {
            let l = *params.get("l").ok_or(CurveError::NoSelection(spec, n))? as usize;
            let (text, expected) = torus_case_word(l, l)?;
            let base = CyclicWord::parse(&text, &torus_alphabet)?;
            let word = rename(&base, &[("a", "x1"), ("b", "y1")]);
            Ok(CurveChoice { word, expected_i: expected, start_sheet: 0, evidence: computed })
        }
        _ => Err(CurveError::NoSelection(spec, n)),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The ambient fat graph a selected curve lives on: the base model, or the
/// spine neighborhood for closed surfaces.
pub fn home_graph(spec: SurfaceSpec) -> Result<FatGraph, CurveError> {
    if spec.is_closed() {
        Ok(regular_neighborhood(spec.genus)?)
    } else {
        Ok(build_fatgraph(spec)?)
    }
}

/// Parse a CLI-facing family spec like `eta:3`.
pub fn parse_family_spec(s: &str) -> Option<(Family, i64)> {
    let (name, param) = s.split_once(':')?;
    Some((Family::parse(name)?, param.parse().ok()?))
}

/// Letters for a word usable on surfaces whose planar generators are
/// a2..ak; convenience for tests.
pub fn word_on(spec: SurfaceSpec, text: &str) -> Result<CyclicWord, CurveError> {
    let graph = home_graph(spec)?;
    Ok(CyclicWord::parse(text, &graph.alphabet())?)
}
