//! Exact minimal self-intersection number of a primitive closed edge path on
//! a fat-graph spine of a surface with boundary.
//!
//! The count is over pairs of strands of the curve through a common vertex.
//! Each passage `t` of the path contributes two outward rays at its vertex:
//! `Out(t)` follows the path forward, `In(t)` runs backward along reversed
//! edges. Rays at a vertex are circularly ordered: bands (half-edges) in the
//! vertex's cyclic order, and rays within a band by first divergence — after
//! stripping the common edge prefix, the ray whose next departure half-edge
//! comes first reading in successor direction from the arrival half-edge is
//! first. This reproduces the circular order of the rays' ends on the
//! boundary of the universal cover.
//!
//! Two passages at a vertex are *linked* when their (In, Out) chords
//! interleave in that circular order. A linked pair witnesses a crossing of
//! two lifts of the curve; the same crossing is visible from every vertex of
//! the lifts' shared corridor, so linked pairs are deduplicated by walking
//! the corridor and counting only its minimal appearance. The resulting
//! count is the minimal self-intersection number of the free homotopy class.
//!
//! The reading direction and the within-band orientation are a frozen
//! convention pinned by the calibration suite (i(ab)=1, i(ab^3)=3 on the
//! pants; i(ab)=0, i(a^2 b^2)=1 on the one-holed torus); the globally
//! mirrored convention is equally valid.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::fatgraph::{DirEdge, FatGraph, FatGraphError};
use crate::words::CyclicWord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SelfIntError {
    #[error("path is not cyclically reduced (step {0} reverses)")]
    NotReduced(usize),
    #[error("proper power unsupported")]
    ProperPower,
    #[error("degenerate (reversible) class unsupported")]
    Degenerate,
    #[error(transparent)]
    Graph(#[from] FatGraphError),
}

/// A closed edge path, validated against its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPath {
    steps: Vec<DirEdge>,
}

impl ClosedPath {
    pub fn new(graph: &FatGraph, steps: Vec<DirEdge>) -> Result<ClosedPath, SelfIntError> {
        assert!(!steps.is_empty(), "closed path must be nonempty");
        let n = steps.len();
        for i in 0..n {
            let next = steps[(i + 1) % n];
            if graph.end_vertex(steps[i]) != graph.start_vertex(next) {
                return Err(SelfIntError::Graph(FatGraphError::NotAPath(format!(
                    "steps {i} and {} do not chain",
                    (i + 1) % n
                ))));
            }
            if next == steps[i].reverse() && n > 1 {
                return Err(SelfIntError::NotReduced(i));
            }
        }
        if n == 1 && steps[0] == steps[0].reverse() {
            return Err(SelfIntError::NotReduced(0));
        }
        Ok(ClosedPath { steps })
    }

    pub fn from_word(graph: &FatGraph, w: &CyclicWord) -> Result<ClosedPath, SelfIntError> {
        Ok(ClosedPath { steps: graph.path_of_word(w)? })
    }

    pub fn steps(&self) -> &[DirEdge] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn word(&self, graph: &FatGraph) -> CyclicWord {
        let letters = self.steps.iter().map(|d| graph.letter_of(*d)).collect();
        CyclicWord::from_letters(letters).expect("reduced path")
    }

    /// True iff no proper rotation of the step sequence equals itself.
    pub fn is_primitive(&self) -> bool {
        let n = self.steps.len();
        'outer: for t in 1..n {
            if n % t != 0 {
                continue;
            }
            for i in 0..n {
                if self.steps[i] != self.steps[(i + t) % n] {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct RayId {
    passage: usize,
    kind: Kind,
}

struct Engine<'a> {
    graph: &'a FatGraph,
    path: &'a [DirEdge],
    len: usize,
}

impl<'a> Engine<'a> {
    /// Directed edge at depth `i` of a ray.
    fn ray_step(&self, ray: RayId, i: usize) -> DirEdge {
        let n = self.len;
        match ray.kind {
            Kind::Out => self.path[(ray.passage + i) % n],
            // backward ray: reversed edges of t-1, t-2, ...
            Kind::In => self.path[(ray.passage + 2 * n - 1 - i % n) % n].reverse(),
        }
    }

    fn ray_band(&self, ray: RayId) -> crate::fatgraph::HalfEdge {
        self.ray_step(ray, 0).departure()
    }

    /// Vertex at which passage `t` sits.
    fn passage_vertex(&self, t: usize) -> usize {
        self.graph.start_vertex(self.path[t])
    }

    /// Order two distinct rays departing through the same band.
    fn compare_rays(&self, a: RayId, b: RayId) -> Result<std::cmp::Ordering, SelfIntError> {
        debug_assert_ne!(a, b);
        let bound = 2 * self.len + 2;
        for i in 1..=bound {
            let da = self.ray_step(a, i);
            let db = self.ray_step(b, i);
            if da != db {
                let shared = self.ray_step(a, i - 1);
                let iota = shared.arrival();
                let ra = self.graph.succ_distance(iota, da.departure());
                let rb = self.graph.succ_distance(iota, db.departure());
                debug_assert!(ra != rb && ra > 0 && rb > 0);
                return Ok(ra.cmp(&rb));
            }
        }
        Err(SelfIntError::Degenerate)
    }

    /// Circular position of every ray around every vertex.
    fn ray_positions(&self) -> Result<(HashMap<RayId, usize>, Vec<usize>), SelfIntError> {
        // group rays by (vertex, band)
        let mut by_band: HashMap<crate::fatgraph::HalfEdge, Vec<RayId>> = HashMap::new();
        for t in 0..self.len {
            for kind in [Kind::Out, Kind::In] {
                let ray = RayId { passage: t, kind };
                by_band.entry(self.ray_band(ray)).or_default().push(ray);
            }
        }
        // sort within each band; insertion sort keeps error propagation simple
        for rays in by_band.values_mut() {
            let mut sorted: Vec<RayId> = Vec::with_capacity(rays.len());
            for &r in rays.iter() {
                let mut at = sorted.len();
                for (i, &s) in sorted.iter().enumerate() {
                    if self.compare_rays(r, s)? == std::cmp::Ordering::Less {
                        at = i;
                        break;
                    }
                }
                sorted.insert(at, r);
            }
            *rays = sorted;
        }
        // concatenate bands in the vertex cyclic order
        let mut pos = HashMap::new();
        let mut circle_size = vec![0usize; self.graph.vertex_count()];
        for v in 0..self.graph.vertex_count() {
            let mut idx = 0;
            for h in self.graph.cyclic_order(v) {
                if let Some(rays) = by_band.get(h) {
                    for &r in rays {
                        pos.insert(r, idx);
                        idx += 1;
                    }
                }
            }
            circle_size[v] = idx;
        }
        Ok((pos, circle_size))
    }

    /// Do the chords of passages `s`, `t` (same vertex) interleave?
    fn linked(
        &self,
        pos: &HashMap<RayId, usize>,
        circle: usize,
        s: usize,
        t: usize,
    ) -> bool {
        let a = pos[&RayId { passage: s, kind: Kind::In }];
        let b = pos[&RayId { passage: s, kind: Kind::Out }];
        let inside = |x: usize| (x + circle - a) % circle < (b + circle - a) % circle && x != a;
        let c = pos[&RayId { passage: t, kind: Kind::In }];
        let d = pos[&RayId { passage: t, kind: Kind::Out }];
        inside(c) != inside(d)
    }

    fn in_first(&self, t: usize) -> DirEdge {
        self.ray_step(RayId { passage: t, kind: Kind::In }, 0)
    }

    fn out_first(&self, t: usize) -> DirEdge {
        self.ray_step(RayId { passage: t, kind: Kind::Out }, 0)
    }

    /// All appearances of the crossing pair along the two lifts' shared
    /// corridor, as (vertex, s, t) with s < t. The pair is counted only at
    /// the minimal appearance, so each crossing contributes exactly once.
    fn corridor_appearances(&self, s0: usize, t0: usize) -> Vec<(usize, usize, usize)> {
        let norm = |s: usize, t: usize| if s <= t { (s, t) } else { (t, s) };
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut queue = vec![norm(s0, t0)];
        seen.insert(norm(s0, t0));
        let mut out = Vec::new();
        let n = self.len;
        while let Some((s, t)) = queue.pop() {
            out.push((self.passage_vertex(s), s, t));
            let mut push = |p: (usize, usize), queue: &mut Vec<(usize, usize)>| {
                if seen.insert(p) {
                    queue.push(p);
                }
            };
            if self.in_first(s) == self.in_first(t) {
                push(norm((s + n - 1) % n, (t + n - 1) % n), &mut queue);
            }
            if self.out_first(s) == self.out_first(t) {
                push(norm((s + 1) % n, (t + 1) % n), &mut queue);
            }
            if self.in_first(s) == self.out_first(t) {
                push(norm((s + n - 1) % n, (t + 1) % n), &mut queue);
            }
            if self.in_first(t) == self.out_first(s) {
                push(norm((s + 1) % n, (t + n - 1) % n), &mut queue);
            }
        }
        out
    }
}

/// Minimal self-intersection number of the free homotopy class of a
/// primitive, non-degenerate closed path.
pub fn self_intersection_path(graph: &FatGraph, path: &ClosedPath) -> Result<u64, SelfIntError> {
    if !path.is_primitive() {
        return Err(SelfIntError::ProperPower);
    }
    let eng = Engine { graph, path: path.steps(), len: path.len() };
    let (pos, circle_size) = eng.ray_positions()?;
    // group passages per vertex
    let mut at_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for t in 0..path.len() {
        at_vertex.entry(eng.passage_vertex(t)).or_default().push(t);
    }
    let mut count = 0u64;
    for (&v, passages) in &at_vertex {
        let circle = circle_size[v];
        for (i, &s) in passages.iter().enumerate() {
            for &t in &passages[i + 1..] {
                if !eng.linked(&pos, circle, s, t) {
                    continue;
                }
                let apps = eng.corridor_appearances(s, t);
                let canonical = apps.iter().min().copied().unwrap();
                if canonical == (v, s.min(t), s.max(t)) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Minimal self-intersection of a cyclic word on a fat graph.
pub fn self_intersection(graph: &FatGraph, w: &CyclicWord) -> Result<u64, SelfIntError> {
    let path = ClosedPath::from_word(graph, w)?;
    self_intersection_path(graph, &path)
}

pub fn is_simple(graph: &FatGraph, w: &CyclicWord) -> Result<bool, SelfIntError> {
    Ok(self_intersection(graph, w)? == 0)
}

/// True iff the closed path visits each vertex at most once. A true result
/// certifies the class is simple (an embedded cycle); false is inconclusive.
pub fn vertex_simple_certificate(graph: &FatGraph, path: &ClosedPath) -> bool {
    let mut seen = BTreeSet::new();
    path.steps().iter().all(|d| seen.insert(graph.start_vertex(*d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatgraph::{build_fatgraph, SurfaceSpec};

    fn i_of(spec: (u32, u32), word: &str) -> u64 {
        let g = build_fatgraph(SurfaceSpec::new(spec.0, spec.1)).unwrap();
        let w = CyclicWord::parse(word, &g.alphabet()).unwrap();
        self_intersection(&g, &w).unwrap()
    }

    #[test]
    fn pants_calibration() {
        assert_eq!(i_of((0, 3), "a b"), 1);
        assert_eq!(i_of((0, 3), "a b^2"), 2);
        assert_eq!(i_of((0, 3), "a b^3"), 3);
    }

    #[test]
    fn pants_family() {
        for k in 1..=8u64 {
            assert_eq!(i_of((0, 3), &format!("a b^{k}")), k, "a b^{k}");
        }
    }

    #[test]
    fn torus_calibration() {
        assert_eq!(i_of((1, 1), "a b"), 0);
        assert_eq!(i_of((1, 1), "a b a b^3"), 1);
        assert_eq!(i_of((1, 1), "a^2 b^2"), 1);
    }

    #[test]
    fn torus_families() {
        for k in 3..=8u64 {
            assert_eq!(i_of((1, 1), &format!("a b a b^{k}")), k - 2, "abab^{k}");
        }
        for n in 3..=8u64 {
            assert_eq!(i_of((1, 1), &format!("a b a^{n} b")), n - 2, "aba^{n}b");
        }
        for n in 2..=8u64 {
            assert_eq!(i_of((1, 1), &format!("a^2 b^{n}")), n - 1, "a^2b^{n}");
        }
        assert_eq!(i_of((1, 1), "a b a^3 b"), 1);
        assert_eq!(i_of((1, 1), "a b a^2 b^2"), 2);
    }

    #[test]
    fn planar_tau_family() {
        for k in [4u32, 6] {
            let gens: Vec<String> = (2..=k).map(|i| format!("a{i}")).collect();
            let prefix = gens.join(" ");
            for j in 1..=5u64 {
                let word = format!("{prefix} a2^{j}");
                assert_eq!(i_of((0, k), &word), j, "tau^{j} on S_0,{k}");
            }
        }
    }

    #[test]
    fn two_boundary_zeta_family() {
        for g in [1u32, 3] {
            for k in 2..=6u64 {
                let word = format!("c^{k} x1");
                assert_eq!(i_of((g, 2), &word), k - 1, "zeta^{k} on S_{g},2");
            }
        }
    }

    #[test]
    fn boundaries_and_generators_simple() {
        for (g, k) in [(0u32, 3u32), (0, 4), (0, 5), (1, 1), (1, 2), (2, 1), (2, 2), (3, 2)] {
            let fg = build_fatgraph(SurfaceSpec::new(g, k)).unwrap();
            for w in fg.boundary_words() {
                assert_eq!(self_intersection(&fg, &w).unwrap(), 0, "boundary on S_{g},{k}");
            }
            for label in fg.labels() {
                let w = CyclicWord::parse(&label, &fg.alphabet()).unwrap();
                assert_eq!(self_intersection(&fg, &w).unwrap(), 0);
            }
        }
    }

    #[test]
    fn rotation_inversion_conjugation_invariance() {
        let g = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
        let w = CyclicWord::parse("a b^3", &g.alphabet()).unwrap();
        let base = self_intersection(&g, &w).unwrap();
        for t in 0..w.len() {
            assert_eq!(self_intersection(&g, &w.rotated(t)).unwrap(), base);
        }
        assert_eq!(self_intersection(&g, &w.inverse()).unwrap(), base);
        // conjugation: u w u^-1 cyclically reduces to a rotation of w
        let mut conj = crate::words::parse_word("b a", &g.alphabet()).unwrap();
        conj.extend(w.letters().iter().cloned());
        conj.extend(
            crate::words::parse_word("b a", &g.alphabet())
                .unwrap()
                .iter()
                .rev()
                .map(|l| l.inv()),
        );
        let cw = CyclicWord::from_letters(conj).unwrap();
        assert_eq!(self_intersection(&g, &cw).unwrap(), base);
    }

    #[test]
    fn proper_power_rejected() {
        let g = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
        let w = CyclicWord::parse("a b a b", &g.alphabet()).unwrap();
        assert_eq!(self_intersection(&g, &w), Err(SelfIntError::ProperPower));
    }

    #[test]
    fn vertex_simple_implies_zero() {
        let g = build_fatgraph(SurfaceSpec::new(0, 3)).unwrap();
        let w = CyclicWord::parse("a", &g.alphabet()).unwrap();
        let p = ClosedPath::from_word(&g, &w).unwrap();
        assert!(vertex_simple_certificate(&g, &p));
        assert_eq!(self_intersection_path(&g, &p).unwrap(), 0);
    }
}
