//! Ribbon graphs (fat graphs): graphs with a cyclic order of half-edges at
//! each vertex, thickening to compact oriented surfaces with boundary.
//!
//! Boundary components are traced with the successor rule: the directed edge
//! after `d` departs via the cyclic-order successor of the half-edge at which
//! `d` arrives. Predecessor tracing is the mirror and yields the same count.
//!
//! The canonical one-vertex models are frozen conventions, pinned by the
//! calibration suite in `selfint`:
//!   * pair of pants, labels `a`, `b`: order (a+, a-, b-, b+) so that the
//!     boundary words are {a^-1, b, a b^-1} and i(ab) = 1;
//!   * planar S_{0,k}, k >= 4, labels `a2`..`ak`: per-generator blocks
//!     (a2+, a2-, a3+, a3-, ...) so that the boundary words are the
//!     generator inverses plus a2 a3 ... ak, and i(tau^j) = j;
//!   * handles contribute blocks (x+, y+, x-, y-), making x y simple on the
//!     one-holed torus;
//!   * S_{g,2} prepends the annulus block (c+, c-).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::words::{CyclicWord, Letter};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FatGraphError {
    #[error("unsupported surface: chi = {0} >= 0")]
    UnsupportedSurface(i64),
    #[error("fat graph is not connected")]
    NotConnected,
    #[error("half-edge multiset does not match cyclic orders: {0}")]
    BadIncidence(String),
    #[error("edge labels must be unique and nonempty")]
    BadLabels,
    #[error("non-orientable or corrupt ribbon data: genus is not integral")]
    NonIntegralGenus,
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("word is not an edge path on this graph: {0}")]
    NotAPath(String),
}

/// Which end of an edge a half-edge is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Tail,
    Head,
}

/// One of the two ends of an edge, attached at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn tail(edge: usize) -> Self {
        HalfEdge { edge, end: End::Tail }
    }
    pub fn head(edge: usize) -> Self {
        HalfEdge { edge, end: End::Head }
    }
    pub fn opposite(self) -> Self {
        HalfEdge {
            edge: self.edge,
            end: match self.end {
                End::Tail => End::Head,
                End::Head => End::Tail,
            },
        }
    }
}

/// A directed traversal of an edge: forward runs tail -> head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirEdge {
    pub edge: usize,
    pub forward: bool,
}

impl DirEdge {
    pub fn reverse(self) -> Self {
        DirEdge { edge: self.edge, forward: !self.forward }
    }
    /// Half-edge through which this traversal departs its start vertex.
    pub fn departure(self) -> HalfEdge {
        if self.forward {
            HalfEdge::tail(self.edge)
        } else {
            HalfEdge::head(self.edge)
        }
    }
    /// Half-edge at which this traversal arrives.
    pub fn arrival(self) -> HalfEdge {
        self.departure().opposite()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRec {
    pub label: String,
    pub tail: usize,
    pub head: usize,
}

/// Surface classification data derived from a fat graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub chi: i64,
    pub genus: i64,
    pub boundary: i64,
}

/// A compact oriented surface type S_{g,k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub boundary: u32,
}

impl SurfaceSpec {
    pub fn new(genus: u32, boundary: u32) -> Self {
        SurfaceSpec { genus, boundary }
    }
    pub fn chi(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }
    pub fn is_closed(&self) -> bool {
        self.boundary == 0
    }
}

impl std::fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S_{{{},{}}}", self.genus, self.boundary)
    }
}

/// A connected ribbon graph with labeled edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatGraph {
    edges: Vec<EdgeRec>,
    /// Per vertex, the circular sequence of incident half-edges.
    order: Vec<Vec<HalfEdge>>,
    /// Position of each half-edge: (vertex, index into its cyclic order).
    position: HashMap<HalfEdge, (usize, usize)>,
}

impl FatGraph {
    pub fn new(edges: Vec<EdgeRec>, order: Vec<Vec<HalfEdge>>) -> Result<FatGraph, FatGraphError> {
        let mut position = HashMap::new();
        for (v, cyc) in order.iter().enumerate() {
            for (i, &h) in cyc.iter().enumerate() {
                if position.insert(h, (v, i)).is_some() {
                    return Err(FatGraphError::BadIncidence(format!(
                        "half-edge {h:?} occurs twice"
                    )));
                }
            }
        }
        let g = FatGraph { edges, order, position };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), FatGraphError> {
        let mut labels = BTreeSet::new();
        for e in &self.edges {
            if e.label.is_empty() || !labels.insert(e.label.clone()) {
                return Err(FatGraphError::BadLabels);
            }
        }
        for (e, rec) in self.edges.iter().enumerate() {
            if rec.tail >= self.order.len() || rec.head >= self.order.len() {
                return Err(FatGraphError::BadVertex(rec.tail.max(rec.head)));
            }
            for (h, v) in [(HalfEdge::tail(e), rec.tail), (HalfEdge::head(e), rec.head)] {
                match self.position.get(&h) {
                    Some(&(pv, _)) if pv == v => {}
                    Some(_) => {
                        return Err(FatGraphError::BadIncidence(format!(
                            "half-edge {h:?} attached at the wrong vertex"
                        )))
                    }
                    None => {
                        return Err(FatGraphError::BadIncidence(format!(
                            "half-edge {h:?} missing from cyclic orders"
                        )))
                    }
                }
            }
        }
        let total: usize = self.order.iter().map(Vec::len).sum();
        if total != 2 * self.edges.len() {
            return Err(FatGraphError::BadIncidence(format!(
                "expected {} half-edges, found {total}",
                2 * self.edges.len()
            )));
        }
        if !self.is_connected() {
            return Err(FatGraphError::NotConnected);
        }
        self.invariants()?;
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let n = self.order.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for h in &self.order[v] {
                let rec = &self.edges[h.edge];
                let w = if rec.tail == v { rec.head } else { rec.tail };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeRec] {
        &self.edges
    }

    pub fn cyclic_order(&self, v: usize) -> &[HalfEdge] {
        &self.order[v]
    }

    pub fn labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn alphabet(&self) -> BTreeSet<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn edge_by_label(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Vertex at which a half-edge is attached.
    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.position[&h].0
    }

    /// Cyclic-order successor at the half-edge's vertex.
    pub fn succ(&self, h: HalfEdge) -> HalfEdge {
        let (v, i) = self.position[&h];
        let cyc = &self.order[v];
        cyc[(i + 1) % cyc.len()]
    }

    /// Steps from `from` to `to` in successor direction (1..deg-1).
    pub fn succ_distance(&self, from: HalfEdge, to: HalfEdge) -> usize {
        let (v, i) = self.position[&from];
        let (w, j) = self.position[&to];
        assert_eq!(v, w, "succ_distance across vertices");
        let n = self.order[v].len();
        (j + n - i) % n
    }

    pub fn start_vertex(&self, d: DirEdge) -> usize {
        self.vertex_of(d.departure())
    }

    pub fn end_vertex(&self, d: DirEdge) -> usize {
        self.vertex_of(d.arrival())
    }

    /// Directed edge after `d` in its boundary cycle.
    pub fn boundary_next(&self, d: DirEdge) -> DirEdge {
        let s = self.succ(d.arrival());
        DirEdge {
            edge: s.edge,
            forward: s.end == End::Tail,
        }
    }

    /// All boundary cycles; each directed edge appears in exactly one.
    /// Cycles are rotated to start at their minimal directed edge and the
    /// list is sorted, so the output is deterministic.
    pub fn trace_boundaries(&self) -> Vec<Vec<DirEdge>> {
        let mut seen: BTreeSet<DirEdge> = BTreeSet::new();
        let mut cycles = Vec::new();
        for e in 0..self.edges.len() {
            for forward in [true, false] {
                let start = DirEdge { edge: e, forward };
                if seen.contains(&start) {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut d = start;
                loop {
                    cycle.push(d);
                    seen.insert(d);
                    d = self.boundary_next(d);
                    if d == start {
                        break;
                    }
                }
                let min = cycle.iter().enumerate().min_by_key(|(_, x)| **x).unwrap().0;
                cycle.rotate_left(min);
                cycles.push(cycle);
            }
        }
        cycles.sort();
        cycles
    }

    pub fn letter_of(&self, d: DirEdge) -> Letter {
        Letter::new(self.edges[d.edge].label.clone(), !d.forward)
    }

    pub fn dir_edge_of(&self, l: &Letter) -> Option<DirEdge> {
        self.edge_by_label(&l.gen).map(|e| DirEdge { edge: e, forward: !l.inverse })
    }

    pub fn cycle_word(&self, cycle: &[DirEdge]) -> CyclicWord {
        let letters: Vec<Letter> = cycle.iter().map(|d| self.letter_of(*d)).collect();
        CyclicWord::from_letters(letters).expect("boundary cycles are reduced")
    }

    pub fn boundary_words(&self) -> Vec<CyclicWord> {
        self.trace_boundaries().iter().map(|c| self.cycle_word(c)).collect()
    }

    /// Euler characteristic, genus and boundary count.
    pub fn invariants(&self) -> Result<SurfaceInvariants, FatGraphError> {
        let chi = self.order.len() as i64 - self.edges.len() as i64;
        let boundary = self.trace_boundaries().len() as i64;
        let two_g = 2 - chi - boundary;
        if two_g % 2 != 0 || two_g < 0 {
            return Err(FatGraphError::NonIntegralGenus);
        }
        Ok(SurfaceInvariants { chi, genus: two_g / 2, boundary })
    }

    /// Interpret a cyclic word as a closed edge path. On a one-vertex graph
    /// every word is a path; on multi-vertex graphs consecutive letters must
    /// chain through common vertices.
    pub fn path_of_word(&self, w: &CyclicWord) -> Result<Vec<DirEdge>, FatGraphError> {
        let mut steps = Vec::with_capacity(w.len());
        for l in w.letters() {
            let d = self
                .dir_edge_of(l)
                .ok_or_else(|| FatGraphError::NotAPath(format!("no edge labeled {}", l.gen)))?;
            steps.push(d);
        }
        for i in 0..steps.len() {
            let next = steps[(i + 1) % steps.len()];
            if self.end_vertex(steps[i]) != self.start_vertex(next) {
                return Err(FatGraphError::NotAPath(format!(
                    "letters {i} and {} do not chain",
                    (i + 1) % steps.len()
                )));
            }
        }
        Ok(steps)
    }

    /// GraphViz form; cyclic orders are recorded as comments.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph fatgraph {\n");
        for (v, cyc) in self.order.iter().enumerate() {
            let ports: Vec<String> = cyc.iter().map(|h| half_edge_token(self, *h)).collect();
            let _ = writeln!(s, "  // v{v} order: {}", ports.join(" "));
            let _ = writeln!(s, "  v{v};");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.tail, e.head, e.label);
        }
        s.push_str("}\n");
        s
    }
}

fn half_edge_token(g: &FatGraph, h: HalfEdge) -> String {
    let sign = match h.end {
        End::Tail => "+",
        End::Head => "-",
    };
    format!("{}{}", g.edges[h.edge].label, sign)
}

fn parse_half_edge_token(tok: &str) -> Option<(String, End)> {
    let (label, sign) = tok.split_at(tok.len().checked_sub(1)?);
    let end = match sign {
        "+" => End::Tail,
        "-" => End::Head,
        _ => return None,
    };
    if label.is_empty() {
        return None;
    }
    Some((label.to_string(), end))
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: usize,
    label: String,
    tail: usize,
    head: usize,
}

#[derive(Serialize, Deserialize)]
struct FatGraphJson {
    vertices: usize,
    edges: Vec<EdgeJson>,
    order: BTreeMap<String, Vec<String>>,
}

impl Serialize for FatGraph {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeJson { id, label: e.label.clone(), tail: e.tail, head: e.head })
            .collect();
        let order = self
            .order
            .iter()
            .enumerate()
            .map(|(v, cyc)| {
                (v.to_string(), cyc.iter().map(|h| half_edge_token(self, *h)).collect())
            })
            .collect();
        FatGraphJson { vertices: self.order.len(), edges, order }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FatGraph {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = FatGraphJson::deserialize(de)?;
        let mut edges = vec![];
        for (i, e) in raw.edges.iter().enumerate() {
            if e.id != i {
                return Err(D::Error::custom("edge ids must be 0..n in order"));
            }
            edges.push(EdgeRec { label: e.label.clone(), tail: e.tail, head: e.head });
        }
        let by_label: HashMap<String, usize> =
            edges.iter().enumerate().map(|(i, e)| (e.label.clone(), i)).collect();
        let mut order = vec![Vec::new(); raw.vertices];
        for (v, toks) in &raw.order {
            let v: usize = v.parse().map_err(|_| D::Error::custom("bad vertex key"))?;
            if v >= raw.vertices {
                return Err(D::Error::custom("vertex key out of range"));
            }
            let mut cyc = Vec::new();
            for t in toks {
                let (label, end) = parse_half_edge_token(t)
                    .ok_or_else(|| D::Error::custom(format!("bad half-edge token {t}")))?;
                let edge = *by_label
                    .get(&label)
                    .ok_or_else(|| D::Error::custom(format!("unknown label {label}")))?;
                cyc.push(HalfEdge { edge, end });
            }
            order[v] = cyc;
        }
        FatGraph::new(edges, order).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Canonical one-vertex model of S_{g,k} with boundary (chi < 0, k >= 1).
///
/// Labels: pants and the one-holed torus use `a`, `b`; S_{0,k} uses
/// `a2`..`ak`; S_{g,2} uses `c` plus handle pairs `x1`,`y1`,..; other
/// surfaces use `a2`..`ak` plus handle pairs.
pub fn build_fatgraph(spec: SurfaceSpec) -> Result<FatGraph, FatGraphError> {
    if spec.chi() >= 0 {
        return Err(FatGraphError::UnsupportedSurface(spec.chi()));
    }
    if spec.boundary == 0 {
        return Err(FatGraphError::UnsupportedSurface(spec.chi()));
    }
    let (g, k) = (spec.genus, spec.boundary);
    let planar_labels: Vec<String> = if (g, k) == (0, 3) {
        vec!["a".into(), "b".into()]
    } else if g >= 1 && k == 2 {
        vec!["c".into()]
    } else {
        (2..=k).map(|i| format!("a{i}")).collect()
    };
    let handle_labels: Vec<(String, String)> = if (g, k) == (1, 1) {
        vec![("a".into(), "b".into())]
    } else {
        (1..=g).map(|i| (format!("x{i}"), format!("y{i}"))).collect()
    };
    Ok(assemble_one_vertex_model(&planar_labels, &handle_labels, (g, k) == (0, 3)))
}

/// One-vertex model shared by `build_fatgraph` and `regular_neighborhood`.
///
/// `pants_zigzag` switches the planar part to the calibrated pants block
/// (a+, a-, b-, b+); otherwise planar generators contribute (t, h) blocks.
fn assemble_one_vertex_model(
    planar: &[String],
    handles: &[(String, String)],
    pants_zigzag: bool,
) -> FatGraph {
    let mut edges = Vec::new();
    let mut cyc = Vec::new();
    if pants_zigzag {
        assert_eq!(planar.len(), 2);
        let a = edges.len();
        edges.push(EdgeRec { label: planar[0].clone(), tail: 0, head: 0 });
        let b = edges.len();
        edges.push(EdgeRec { label: planar[1].clone(), tail: 0, head: 0 });
        cyc.extend([HalfEdge::tail(a), HalfEdge::head(a), HalfEdge::head(b), HalfEdge::tail(b)]);
    } else {
        for label in planar {
            let e = edges.len();
            edges.push(EdgeRec { label: label.clone(), tail: 0, head: 0 });
            cyc.extend([HalfEdge::tail(e), HalfEdge::head(e)]);
        }
    }
    for (x, y) in handles {
        let ex = edges.len();
        edges.push(EdgeRec { label: x.clone(), tail: 0, head: 0 });
        let ey = edges.len();
        edges.push(EdgeRec { label: y.clone(), tail: 0, head: 0 });
        cyc.extend([
            HalfEdge::tail(ex),
            HalfEdge::tail(ey),
            HalfEdge::head(ex),
            HalfEdge::head(ey),
        ]);
    }
    FatGraph::new(edges, vec![cyc]).expect("canonical models are valid")
}

/// The S_{g,1} model on generators `c1`,`d1`,..,`cg`,`dg`, used as the
/// spine neighborhood of the standard generators of a closed surface.
pub fn regular_neighborhood(genus: u32) -> Result<FatGraph, FatGraphError> {
    if genus < 1 {
        return Err(FatGraphError::UnsupportedSurface(2));
    }
    let handles: Vec<(String, String)> =
        (1..=genus).map(|i| (format!("c{i}"), format!("d{i}"))).collect();
    Ok(assemble_one_vertex_model(&[], &handles, false))
}
