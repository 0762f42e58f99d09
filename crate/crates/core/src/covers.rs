//! Finite covers of a fat graph presented by permutation monodromy.
//!
//! A degree-n cover assigns one permutation of the sheets {0,..,n-1} to each
//! edge label. The monodromy of a word g1 g2 .. gL sends sheet s to
//! sigma_{gL}(..sigma_{g1}(s)..), matching left-to-right path lifting:
//! traversing edge g forward from sheet s ends on sheet sigma_g(s).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fatgraph::{DirEdge, EdgeRec, End, FatGraph, FatGraphError, HalfEdge};
use crate::words::{CyclicWord, Letter};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("permutation is not a bijection on 0..{0}")]
    BadPermutation(usize),
    #[error("no permutation assigned to label `{0}`")]
    MissingLabel(String),
    #[error("rep assigns labels not on the base graph: {0}")]
    ExtraLabel(String),
    #[error("disconnected cover (monodromy not transitive)")]
    Disconnected,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("sheet {0} out of range for degree {1}")]
    BadSheet(usize, usize),
    #[error(transparent)]
    Graph(#[from] FatGraphError),
}

/// A permutation of {0,..,n-1}, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm, CoverError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(CoverError::BadPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// The cycle (0 1 .. n-1).
    pub fn full_cycle(n: usize) -> Perm {
        Perm((0..n).map(|i| (i + 1) % n).collect())
    }

    /// Cycle through the listed sheets in order, fixing the rest.
    pub fn cycle(n: usize, sheets: &[usize]) -> Perm {
        let mut v: Vec<usize> = (0..n).collect();
        for w in 0..sheets.len() {
            v[sheets[w]] = sheets[(w + 1) % sheets.len()];
        }
        Perm::new(v).expect("cycle builds a permutation")
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        Perm::cycle(n, &[a, b])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, s: usize) -> usize {
        self.0[s]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `self` then `other` (left-to-right composition).
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut t = self.0[s];
            while t != s {
                seen[t] = true;
                cyc.push(t);
                t = self.0[t];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn orbit_of(&self, s: usize) -> Vec<usize> {
        let mut orbit = vec![s];
        let mut t = self.0[s];
        while t != s {
            orbit.push(t);
            t = self.0[t];
        }
        orbit
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }
}

/// Permutation monodromy for a base fat graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRep {
    pub degree: usize,
    pub perms: BTreeMap<String, Perm>,
}

impl CoverRep {
    pub fn new(degree: usize, perms: BTreeMap<String, Perm>) -> Result<CoverRep, CoverError> {
        for p in perms.values() {
            if p.degree() != degree {
                return Err(CoverError::DegreeMismatch(p.degree(), degree));
            }
        }
        Ok(CoverRep { degree, perms })
    }

    pub fn identity(graph: &FatGraph, degree: usize) -> CoverRep {
        let perms = graph
            .labels()
            .into_iter()
            .map(|l| (l, Perm::identity(degree)))
            .collect();
        CoverRep { degree, perms }
    }

    pub fn perm(&self, label: &str) -> Result<&Perm, CoverError> {
        self.perms.get(label).ok_or_else(|| CoverError::MissingLabel(label.to_string()))
    }

    /// Monodromy of a word, letters applied left to right.
    pub fn monodromy(&self, w: &CyclicWord) -> Result<Perm, CoverError> {
        self.monodromy_letters(w.letters())
    }

    pub fn monodromy_letters(&self, letters: &[Letter]) -> Result<Perm, CoverError> {
        let mut m = Perm::identity(self.degree);
        for l in letters {
            let p = self.perm(&l.gen)?;
            m = if l.inverse { m.then(&p.inverse()) } else { m.then(p) };
        }
        Ok(m)
    }

    /// Orbits of the subgroup generated by the listed labels' permutations.
    pub fn orbits(&self, labels: &BTreeSet<String>) -> Result<Vec<Vec<usize>>, CoverError> {
        let mut perms = Vec::new();
        for l in labels {
            perms.push(self.perm(l)?.clone());
        }
        let n = self.degree;
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut orbit = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for p in &perms {
                    for y in [p.apply(x), p.inverse().apply(x)] {
                        if !seen[y] {
                            seen[y] = true;
                            orbit.push(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
            orbit.sort();
            orbits.push(orbit);
        }
        Ok(orbits)
    }

    pub fn is_transitive(&self, labels: &BTreeSet<String>) -> Result<bool, CoverError> {
        Ok(self.orbits(labels)?.len() == 1)
    }

    /// Restriction to an orbit, with sheets relabeled 0..m-1 in orbit order.
    pub fn restrict(&self, labels: &BTreeSet<String>, orbit: &[usize]) -> Result<CoverRep, CoverError> {
        let index: BTreeMap<usize, usize> =
            orbit.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut perms = BTreeMap::new();
        for l in labels {
            let p = self.perm(l)?;
            let images = orbit
                .iter()
                .map(|&s| {
                    index
                        .get(&p.apply(s))
                        .copied()
                        .ok_or(CoverError::Disconnected)
                })
                .collect::<Result<Vec<_>, _>>()?;
            perms.insert(l.clone(), Perm::new(images)?);
        }
        CoverRep::new(orbit.len(), perms)
    }

    /// Canonical relabeling: BFS from sheet 0 along labels in sorted order,
    /// generators before inverses. Reps related by a sheet relabeling fixing
    /// nothing become equal after canonicalization.
    pub fn canonicalize(&self) -> CoverRep {
        let n = self.degree;
        let labels: Vec<&String> = self.perms.keys().collect();
        let mut discovery = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([0usize]);
        discovery[0] = 0;
        order.push(0);
        while let Some(s) = queue.pop_front() {
            for l in &labels {
                let p = &self.perms[*l];
                for t in [p.apply(s), p.inverse().apply(s)] {
                    if discovery[t] == usize::MAX {
                        discovery[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        if order.len() < n {
            // disconnected: leave unreached sheets in original relative order
            for s in 0..n {
                if discovery[s] == usize::MAX {
                    discovery[s] = order.len();
                    order.push(s);
                }
            }
        }
        let perms = self
            .perms
            .iter()
            .map(|(l, p)| {
                let images = order.iter().map(|&s| discovery[p.apply(s)]).collect();
                (l.clone(), Perm::new(images).unwrap())
            })
            .collect();
        CoverRep { degree: n, perms }
    }
}

/// Invariants of the surface induced by a cover rep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInfo {
    pub degree: usize,
    pub chi: i64,
    pub genus: i64,
    pub boundary: i64,
}

/// The total fat graph of a cover, with projection data.
#[derive(Debug, Clone)]
pub struct CoverComplex {
    pub base: FatGraph,
    pub rep: CoverRep,
    pub total: FatGraph,
    /// total edge index -> base edge index
    pub projection: Vec<usize>,
}

/// Check a rep against a base graph and compute the induced invariants.
pub fn validate_rep(base: &FatGraph, rep: &CoverRep) -> Result<CoverInfo, CoverError> {
    let complex = build_cover(base, rep)?;
    let inv = complex.total.invariants()?;
    let base_inv = base.invariants()?;
    let n = rep.degree as i64;
    // Internal self-checks; these cannot fail for valid input.
    assert_eq!(inv.chi, n * base_inv.chi, "Euler characteristic must scale by the degree");
    assert!(
        base_inv.boundary <= inv.boundary && inv.boundary <= n * base_inv.boundary,
        "boundary count outside [k, nk]"
    );
    Ok(CoverInfo { degree: rep.degree, chi: inv.chi, genus: inv.genus, boundary: inv.boundary })
}

/// Build the covering fat graph: vertex (v, s) = v*n + s carries a copy of
/// the base cyclic order in which the outgoing entry of edge e is e's lift
/// departing sheet s and the incoming entry is the lift arriving at sheet s.
pub fn build_cover(base: &FatGraph, rep: &CoverRep) -> Result<CoverComplex, CoverError> {
    for label in base.labels() {
        rep.perm(&label)?;
    }
    for l in rep.perms.keys() {
        if base.edge_by_label(l).is_none() {
            return Err(CoverError::ExtraLabel(l.clone()));
        }
    }
    if !rep.is_transitive(&base.alphabet())? {
        return Err(CoverError::Disconnected);
    }
    let n = rep.degree;
    let bv = base.vertex_count();
    let be = base.edge_count();
    let mut edges = vec![EdgeRec { label: String::new(), tail: 0, head: 0 }; be * n];
    let mut projection = vec![0usize; be * n];
    for (e, rec) in base.edges().iter().enumerate() {
        let p = rep.perm(&rec.label)?;
        for s in 0..n {
            // lift of e departing sheet s: (tail, s) -> (head, p(s))
            let idx = e + s * be;
            edges[idx] = EdgeRec {
                label: format!("{}.{s}", rec.label),
                tail: rec.tail * n + s,
                head: rec.head * n + p.apply(s),
            };
            projection[idx] = e;
        }
    }
    let mut order = vec![Vec::new(); bv * n];
    for v in 0..bv {
        for s in 0..n {
            let mut cyc = Vec::new();
            for h in base.cyclic_order(v) {
                let rec = &base.edges()[h.edge];
                let p = rep.perm(&rec.label)?;
                match h.end {
                    // outgoing: lift departing sheet s
                    End::Tail => cyc.push(HalfEdge::tail(h.edge + s * be)),
                    // incoming: lift arriving at sheet s departs p^-1(s)
                    End::Head => {
                        cyc.push(HalfEdge::head(h.edge + p.inverse().apply(s) * be))
                    }
                }
            }
            order[v * n + s] = cyc;
        }
    }
    let total = FatGraph::new(edges, order)?;
    Ok(CoverComplex { base: base.clone(), rep: rep.clone(), total, projection })
}

impl CoverComplex {
    pub fn sheet_of_vertex(&self, total_vertex: usize) -> usize {
        total_vertex % self.rep.degree
    }

    pub fn base_vertex(&self, total_vertex: usize) -> usize {
        total_vertex / self.rep.degree
    }

    /// Lift a directed base edge starting on `sheet`; returns the lifted
    /// directed edge and the sheet at its end.
    pub fn lift_step(&self, d: DirEdge, sheet: usize) -> Result<(DirEdge, usize), CoverError> {
        let be = self.base.edge_count();
        let rec = &self.base.edges()[d.edge];
        let p = self.rep.perm(&rec.label)?;
        if sheet >= self.rep.degree {
            return Err(CoverError::BadSheet(sheet, self.rep.degree));
        }
        if d.forward {
            Ok((DirEdge { edge: d.edge + sheet * be, forward: true }, p.apply(sheet)))
        } else {
            let start = p.inverse().apply(sheet);
            Ok((DirEdge { edge: d.edge + start * be, forward: false }, start))
        }
    }

    pub fn project_dir_edge(&self, d: DirEdge) -> DirEdge {
        DirEdge { edge: self.projection[d.edge], forward: d.forward }
    }
}

/// One component of the preimage of a closed curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPath {
    pub start_sheet: usize,
    pub degree: usize,
    /// closed edge path in the total graph, as (edge index, forward) pairs
    pub path: Vec<DirEdge>,
}

/// Lift a cyclic word starting at `sheet`; the path closes after d
/// traversals, d the orbit length of the sheet under the word's monodromy.
pub fn lift_path(
    complex: &CoverComplex,
    w: &CyclicWord,
    sheet: usize,
) -> Result<LiftedPath, CoverError> {
    if sheet >= complex.rep.degree {
        return Err(CoverError::BadSheet(sheet, complex.rep.degree));
    }
    let base_steps = complex.base.path_of_word(w)?;
    let mono = complex.rep.monodromy(w)?;
    let degree = mono.orbit_of(sheet).len();
    let mut path = Vec::with_capacity(base_steps.len() * degree);
    let mut s = sheet;
    for _ in 0..degree {
        for &d in &base_steps {
            let (lifted, next) = complex.lift_step(d, s)?;
            path.push(lifted);
            s = next;
        }
    }
    debug_assert_eq!(s, sheet, "lift must close after the orbit length");
    Ok(LiftedPath { start_sheet: sheet, degree, path })
}

/// Per-component data for the preimage of a subsurface piece carrying the
/// given labels: orbit sheets, covering degree, and the invariants of the
/// restricted cover of the piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub sheets: Vec<usize>,
    pub degree: usize,
    pub chi: i64,
    pub genus: i64,
    pub boundary: i64,
}

/// Components of the preimage of a piece. `piece` must carry exactly the
/// given labels as its edge labels.
pub fn components_over(
    rep: &CoverRep,
    labels: &BTreeSet<String>,
    piece: &FatGraph,
) -> Result<Vec<ComponentInfo>, CoverError> {
    if piece.alphabet() != *labels {
        return Err(CoverError::ExtraLabel(format!(
            "piece labels {:?} do not match {:?}",
            piece.alphabet(),
            labels
        )));
    }
    let mut out = Vec::new();
    for orbit in rep.orbits(labels)? {
        let sub = rep.restrict(labels, &orbit)?;
        let info = validate_rep(piece, &sub)?;
        out.push(ComponentInfo {
            sheets: orbit,
            degree: sub.degree,
            chi: info.chi,
            genus: info.genus,
            boundary: info.boundary,
        });
    }
    Ok(out)
}

/// Is the class of `w` that of a boundary component (or its inverse)?
pub fn is_boundary_parallel(graph: &FatGraph, w: &CyclicWord) -> bool {
    graph.boundary_words().iter().any(|b| w.unoriented_eq(b))
}

/// Boundary-parallelism for an explicit closed path (used on covers).
pub fn path_is_boundary_parallel(graph: &FatGraph, path: &[DirEdge]) -> bool {
    let reverse: Vec<DirEdge> = path.iter().rev().map(|d| d.reverse()).collect();
    for cycle in graph.trace_boundaries() {
        if cycle.len() != path.len() {
            continue;
        }
        for cand in [path, reverse.as_slice()] {
            let n = cycle.len();
            for r in 0..n {
                if (0..n).all(|i| cand[(i + r) % n] == cycle[i]) {
                    return true;
                }
            }
        }
    }
    false
}
