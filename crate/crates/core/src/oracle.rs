//! Independent numerical cross-check of the self-intersection engine.
//!
//! A one-vertex fat graph of rank r is realized by r real Mobius
//! transformations pairing 2r disjoint intervals on the line, arranged in
//! the vertex's cyclic order. Crossings of the curve correspond to classes
//! of translates of its axis that link it: the count enumerates reduced
//! words g up to a depth bound, canonicalizes the unordered class
//! <w> g <w> with g identified with its inverse, and counts classes whose
//! translated axis endpoints interleave with the axis of w on the boundary
//! circle. The count is reported with a stability flag (unchanged from the
//! previous depth); stable counts equal the exact engine on the desk corpus.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fatgraph::{End, FatGraph};
use crate::words::CyclicWord;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("oracle needs a one-vertex fat graph")]
    NotOneVertex,
    #[error("numerical degeneracy: axis endpoints within {0}")]
    Degenerate(f64),
    #[error("depth bound {0} smaller than the word length {1}")]
    DepthTooSmall(usize, usize),
    #[error("word uses a label not on the graph: {0}")]
    UnknownLabel(String),
}

/// A generator realized as a real 2x2 matrix pairing two intervals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MobiusGen {
    pub label: String,
    /// row-major [a, b, c, d], determinant 1
    pub matrix: [f64; 4],
    pub tail_interval: (f64, f64),
    pub head_interval: (f64, f64),
}

const RADIUS: f64 = 1.0;
const SPACING: f64 = 3.0;
const PAIRING_TOL: f64 = 1e-9;
/// minimal circular separation between axis endpoints, in radians
const ENDPOINT_TOL: f64 = 1e-7;

type Mat = [f64; 4];

fn mul(a: &Mat, b: &Mat) -> Mat {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn inv(a: &Mat) -> Mat {
    // determinant is kept at 1
    [a[3], -a[1], -a[2], a[0]]
}

fn apply(a: &Mat, x: f64) -> f64 {
    (a[0] * x + a[1]) / (a[2] * x + a[3])
}

/// Interval pairing map z -> q - s^2/(z - p), normalized to determinant 1.
fn pairing_matrix(p: f64, q: f64, s: f64) -> Mat {
    [q / s, (-q * p - s * s) / s, 1.0 / s, -p / s]
}

/// Realize a one-vertex fat graph by interval pairings: interval centers
/// follow the vertex cyclic order, and each generator maps the exterior of
/// its tail interval onto the interior of its head interval.
pub fn schottky_rep(graph: &FatGraph) -> Result<Vec<MobiusGen>, OracleError> {
    if graph.vertex_count() != 1 {
        return Err(OracleError::NotOneVertex);
    }
    let order = graph.cyclic_order(0);
    let center = |idx: usize| (idx as f64 + 1.0) * SPACING;
    let mut gens = Vec::new();
    for (e, rec) in graph.edges().iter().enumerate() {
        let mut p = None;
        let mut q = None;
        for (i, h) in order.iter().enumerate() {
            if h.edge == e {
                match h.end {
                    End::Tail => p = Some(center(i)),
                    End::Head => q = Some(center(i)),
                }
            }
        }
        let (p, q) = (p.expect("tail half-edge"), q.expect("head half-edge"));
        let matrix = pairing_matrix(p, q, RADIUS);
        // pairing property: tail circle boundary points land on the head's
        for x in [p - RADIUS, p + RADIUS] {
            let y = apply(&matrix, x);
            assert!(((y - q).abs() - RADIUS).abs() <= PAIRING_TOL, "interval pairing violated");
        }
        gens.push(MobiusGen {
            label: rec.label.clone(),
            matrix,
            tail_interval: (p - RADIUS, p + RADIUS),
            head_interval: (q - RADIUS, q + RADIUS),
        });
    }
    Ok(gens)
}

/// A boundary-circle point in projective coordinates (n : d); the circle is
/// parameterized by the angle atan2(n, d) mod pi, so points that wrap
/// through infinity are handled uniformly.
#[derive(Debug, Clone, Copy)]
struct PPoint {
    n: f64,
    d: f64,
}

impl PPoint {
    fn angle(self) -> f64 {
        let t = self.n.atan2(self.d).rem_euclid(PI);
        if t >= PI {
            0.0
        } else {
            t
        }
    }
}

fn apply_projective(m: &Mat, p: PPoint) -> PPoint {
    PPoint { n: m[0] * p.n + m[1] * p.d, d: m[2] * p.n + m[3] * p.d }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Fixed points of a hyperbolic matrix, as projective points.
fn axis(m: &Mat) -> Result<(PPoint, PPoint), OracleError> {
    let tr = m[0] + m[3];
    let disc = tr * tr - 4.0;
    if disc <= 0.0 {
        return Err(OracleError::Degenerate(disc));
    }
    let root = disc.sqrt();
    let (p1, p2) = if m[2].abs() > 1e-12 {
        (
            PPoint { n: m[0] - m[3] + root, d: 2.0 * m[2] },
            PPoint { n: m[0] - m[3] - root, d: 2.0 * m[2] },
        )
    } else {
        // upper triangular: infinity and b/(d-a)
        (PPoint { n: 1.0, d: 0.0 }, PPoint { n: m[1], d: m[3] - m[0] })
    };
    let sep = circ_dist(p1.angle(), p2.angle());
    if sep < ENDPOINT_TOL {
        return Err(OracleError::Degenerate(sep));
    }
    Ok((p1, p2))
}

/// Do the chords with endpoint angles a and b link on the circle?
fn linked(a: (f64, f64), b: (f64, f64)) -> bool {
    let width = (a.1 - a.0).rem_euclid(PI);
    let inside = |x: f64| (x - a.0).rem_euclid(PI) < width;
    inside(b.0) != inside(b.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub count: u64,
    pub stable: bool,
}

/// Letter encoded as a signed generator index: +(e+1) forward, -(e+1) back.
type Lit = i16;

fn letters_of(graph: &FatGraph, w: &CyclicWord) -> Result<Vec<Lit>, OracleError> {
    w.letters()
        .iter()
        .map(|l| {
            let e = graph
                .edge_by_label(&l.gen)
                .ok_or_else(|| OracleError::UnknownLabel(l.gen.clone()))?;
            let v = e as Lit + 1;
            Ok(if l.inverse { -v } else { v })
        })
        .collect()
}

fn reduce(word: &mut Vec<Lit>) {
    let mut out: Vec<Lit> = Vec::with_capacity(word.len());
    for &l in word.iter() {
        if out.last().is_some_and(|&t| t == -l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *word = out;
}

fn concat(a: &[Lit], b: &[Lit]) -> Vec<Lit> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    reduce(&mut v);
    v
}

fn invert(a: &[Lit]) -> Vec<Lit> {
    a.iter().rev().map(|&l| -l).collect()
}

/// Powers w^i, |i| <= radius, precomputed for coset minimization.
struct WordPowers {
    base_len: usize,
    radius: usize,
    /// index r + radius holds w^r
    table: Vec<Vec<Lit>>,
}

impl WordPowers {
    fn new(w: &[Lit], radius: usize) -> WordPowers {
        let mut table = vec![Vec::new(); 2 * radius + 1];
        let w_inv = invert(w);
        for r in 1..=radius {
            table[radius + r] = concat(&table[radius + r - 1], w);
            table[radius - r] = concat(&table[radius - r + 1], &w_inv);
        }
        WordPowers { base_len: w.len(), radius, table }
    }

    fn get(&self, i: i64) -> &[Lit] {
        &self.table[(i + self.radius as i64) as usize]
    }
}

/// Canonical key of the class <w> g <w> with g identified with g^-1: the
/// lexicographically least among the minimal-length elements of the
/// two-sided power window w^i g w^j. The window radius is generous: any
/// element no longer than the seed lies within cancellation range, since
/// powers beyond it add length monotonically.
fn class_key(g: &[Lit], powers: &WordPowers) -> Vec<Lit> {
    let mut best: Option<Vec<Lit>> = None;
    for seed in [g.to_vec(), invert(g)] {
        let r = ((2 * seed.len()) / powers.base_len + 3).min(powers.radius) as i64;
        for i in -r..=r {
            let left = concat(powers.get(i), &seed);
            for j in -r..=r {
                let cand = concat(&left, powers.get(j));
                let better = match &best {
                    None => true,
                    Some(b) => cand.len() < b.len() || (cand.len() == b.len() && cand < *b),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("nonempty window")
}

/// A one-step w-multiplication shortens g: g is not a minimal-length
/// element of its double coset, so its class is counted at a shorter word.
fn locally_reducible(g: &[Lit], w: &[Lit], w_inv: &[Lit]) -> bool {
    for side in [w, w_inv] {
        if concat(side, g).len() < g.len() || concat(g, side).len() < g.len() {
            return true;
        }
    }
    false
}

struct Search {
    mats: Vec<Mat>,
    word: Vec<Lit>,
    word_inv: Vec<Lit>,
    powers: WordPowers,
    w_fix: (PPoint, PPoint),
    w_axis: (f64, f64),
}

impl Search {
    fn mat_of(&self, l: Lit) -> Mat {
        let idx = (l.abs() - 1) as usize;
        if l > 0 {
            self.mats[idx]
        } else {
            inv(&self.mats[idx])
        }
    }

    fn run(
        &mut self,
        letters: &mut Vec<Lit>,
        here: Mat,
        depth: usize,
        classes: &mut BTreeSet<Vec<Lit>>,
    ) {
        if !letters.is_empty() {
            let starts = |p: &[Lit]| letters.len() >= p.len() && letters[..p.len()] == *p;
            if starts(&self.word) || starts(&self.word_inv) {
                return; // a shorter double-coset representative exists
            }
            // Translated endpoints contract together for long words; that
            // is expected, and they stay a fixed distance away from the
            // base axis endpoints, so strict comparisons suffice. Residual
            // borderline cases surface through the stability flag.
            let t0 = apply_projective(&here, self.w_fix.0);
            let t1 = apply_projective(&here, self.w_fix.1);
            let a = (t0.angle(), t1.angle());
            if linked(a, self.w_axis)
                && !locally_reducible(letters, &self.word, &self.word_inv)
            {
                classes.insert(class_key(letters, &self.powers));
            }
        }
        if letters.len() == depth {
            return;
        }
        for e in 1..=self.mats.len() as Lit {
            for lit in [e, -e] {
                if letters.last().is_some_and(|&t| t == -lit) {
                    continue;
                }
                let m = mul(&here, &self.mat_of(lit));
                letters.push(lit);
                self.run(letters, m, depth, classes);
                letters.pop();
            }
        }
    }
}

/// Count classes of linked axis translates among reduced words of length
/// up to `depth`; `stable` reports agreement with depth-1.
pub fn oracle_self_intersection(
    graph: &FatGraph,
    w: &CyclicWord,
    depth: usize,
) -> Result<OracleResult, OracleError> {
    if depth < w.len() {
        return Err(OracleError::DepthTooSmall(depth, w.len()));
    }
    let gens = schottky_rep(graph)?;
    let word = letters_of(graph, w)?;
    let word_inv = invert(&word);
    let mats: Vec<Mat> = gens.iter().map(|g| g.matrix).collect();
    let mut w_mat = [1.0, 0.0, 0.0, 1.0];
    for &l in &word {
        let idx = (l.abs() - 1) as usize;
        let m = if l > 0 { mats[idx] } else { inv(&mats[idx]) };
        w_mat = mul(&w_mat, &m);
    }
    let w_fix = axis(&w_mat)?;
    let w_axis = (w_fix.0.angle(), w_fix.1.angle());
    let powers = WordPowers::new(&word, 2 * depth / word.len() + 4);
    let mut search = Search { mats, word, word_inv, powers, w_fix, w_axis };
    let mut counts = Vec::new();
    for d in [depth - 1, depth] {
        let mut classes = BTreeSet::new();
        let mut letters = Vec::new();
        search.run(&mut letters, [1.0, 0.0, 0.0, 1.0], d, &mut classes);
        counts.push(classes.len() as u64);
    }
    Ok(OracleResult { count: counts[1], stable: counts[0] == counts[1] })
}


/// Increase the depth until two consecutive counts agree, starting at
/// 2L and giving up at `max_depth`.
pub fn oracle_stabilized(
    graph: &FatGraph,
    w: &CyclicWord,
    max_depth: usize,
) -> Result<OracleResult, OracleError> {
    let mut depth = (2 * w.len()).max(2);
    loop {
        let r = oracle_self_intersection(graph, w, depth)?;
        if r.stable || depth >= max_depth {
            return Ok(r);
        }
        depth += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatgraph::{build_fatgraph, SurfaceSpec};

    fn check(spec: (u32, u32), word: &str, depth: usize, expect: u64) {
        let g = build_fatgraph(SurfaceSpec::new(spec.0, spec.1)).unwrap();
        let w = CyclicWord::parse(word, &g.alphabet()).unwrap();
        let r = oracle_self_intersection(&g, &w, depth).unwrap();
        assert_eq!(r.count, expect, "{word} on {spec:?}");
        assert!(r.stable, "{word} unstable at depth {depth}");
    }

    #[test]
    fn schottky_intervals_follow_cyclic_order() {
        let g = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
        let gens = schottky_rep(&g).unwrap();
        // pants order (a+, a-, b-, b+): tail(a) < head(a) < head(b) < tail(b)
        let a = &gens[0];
        let b = &gens[1];
        assert!(a.tail_interval.0 < a.head_interval.0);
        assert!(a.head_interval.0 < b.head_interval.0);
        assert!(b.head_interval.0 < b.tail_interval.0);
    }

    #[test]
    fn pants_anchors() {
        check((0, 3), "a b", 6, 1);
        check((0, 3), "a b^3", 8, 3);
        check((0, 3), "a^5 b", 12, 5);
    }

    #[test]
    fn torus_anchors() {
        check((1, 1), "a b", 6, 0);
        check((1, 1), "a^2 b^2", 8, 1);
    }

    #[test]
    fn rank_one_hyperbolic() {
        let g = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
        let w = CyclicWord::parse("a", &g.alphabet()).unwrap();
        let r = oracle_self_intersection(&g, &w, 5).unwrap();
        assert_eq!(r.count, 0);
    }
}
