//! Finite truncations of N-graded graphs.
//!
//! Level `n` of a graph is the state set of the `n`-th coordinate of the
//! Markov compactum; a positive multiplicity `mult(v, w)` between consecutive
//! levels means `w` is an allowed successor of `v`, and parallel edges are
//! kept as multiplicities. Paths always run through consecutive levels.
//!
//! [`Diagram`] is the read interface used by the algorithms. It is implemented
//! by the materialized [`GradedGraph`] and by [`Pascal`], an implicit Pascal
//! graph that can be arbitrarily deep without storing its levels.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub level: usize,
    pub index: usize,
}

impl VertexId {
    pub const fn new(level: usize, index: usize) -> Self {
        VertexId { level, index }
    }
}

/// A neighbour on the adjacent level together with the edge multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adjacent {
    pub index: usize,
    pub mult: u64,
}

pub trait Diagram {
    /// Number of levels; valid levels are `0..depth()`.
    fn depth(&self) -> usize;

    fn level_len(&self, level: usize) -> usize;

    /// Successors on level `v.level + 1`, ordered by index, positive multiplicities only.
    fn successors(&self, v: VertexId) -> Cow<'_, [Adjacent]>;

    /// Predecessors on level `v.level - 1`, ordered by index, positive multiplicities only.
    fn predecessors(&self, v: VertexId) -> Cow<'_, [Adjacent]>;

    fn label(&self, v: VertexId) -> String;

    fn find(&self, label: &str) -> Option<VertexId>;

    fn contains(&self, v: VertexId) -> bool {
        v.level < self.depth() && v.index < self.level_len(v.level)
    }

    fn multiplicity(&self, from: VertexId, to_index: usize) -> u64 {
        self.successors(from)
            .iter()
            .find(|a| a.index == to_index)
            .map_or(0, |a| a.mult)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.level >= self.depth() {
            return Err(Error::LevelOutOfRange {
                level: v.level,
                depth: self.depth(),
            });
        }
        if v.index >= self.level_len(v.level) {
            return Err(Error::IndexOutOfRange {
                level: v.level,
                index: v.index,
            });
        }
        Ok(())
    }
}

/// Serializable description of a graph; labels must be globally unique and
/// the level of each vertex is its position in `levels`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSpec {
    pub levels: Vec<Vec<String>>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoLevels,
    EmptyLevel(usize),
    DuplicateLabel(String),
    UnknownEndpoint {
        from: String,
        to: String,
    },
    BadLevelIndexing {
        from: String,
        from_level: usize,
        to: String,
        to_level: usize,
    },
    DuplicateEdge {
        from: String,
        to: String,
    },
    NoIncomingEdge {
        vertex: String,
        level: usize,
    },
    NoOutgoingEdge {
        vertex: String,
        level: usize,
    },
    NoEdgesBetween {
        level: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoLevels => write!(f, "graph has no levels"),
            Violation::EmptyLevel(n) => write!(f, "level {n} is empty"),
            Violation::DuplicateLabel(l) => write!(f, "duplicate vertex label {l}"),
            Violation::UnknownEndpoint { from, to } => {
                write!(f, "edge {from} -> {to} references an unknown vertex")
            }
            Violation::BadLevelIndexing {
                from,
                from_level,
                to,
                to_level,
            } => write!(
                f,
                "edge {from} (level {from_level}) -> {to} (level {to_level}) does not join consecutive levels"
            ),
            Violation::DuplicateEdge { from, to } => write!(f, "edge {from} -> {to} listed twice"),
            Violation::NoIncomingEdge { vertex, level } => {
                write!(f, "vertex {vertex} at level {level} has no incoming edge")
            }
            Violation::NoOutgoingEdge { vertex, level } => {
                write!(f, "vertex {vertex} at level {level} has no outgoing edge")
            }
            Violation::NoEdgesBetween { level } => write!(
                f,
                "no positive multiplicity between levels {level} and {}",
                level + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a graph description.
pub fn validate(spec: &GraphSpec) -> ValidationReport {
    let mut violations = Vec::new();
    if spec.levels.is_empty() {
        violations.push(Violation::NoLevels);
        return ValidationReport { violations };
    }
    let mut position: BTreeMap<&str, VertexId> = BTreeMap::new();
    for (level, labels) in spec.levels.iter().enumerate() {
        if labels.is_empty() {
            violations.push(Violation::EmptyLevel(level));
        }
        for (index, label) in labels.iter().enumerate() {
            if position
                .insert(label.as_str(), VertexId::new(level, index))
                .is_some()
            {
                violations.push(Violation::DuplicateLabel(label.clone()));
            }
        }
    }

    let mut has_in: BTreeSet<VertexId> = BTreeSet::new();
    let mut has_out: BTreeSet<VertexId> = BTreeSet::new();
    let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut positive_between = vec![false; spec.levels.len()];
    for edge in &spec.edges {
        let (Some(&from), Some(&to)) = (
            position.get(edge.from.as_str()),
            position.get(edge.to.as_str()),
        ) else {
            violations.push(Violation::UnknownEndpoint {
                from: edge.from.clone(),
                to: edge.to.clone(),
            });
            continue;
        };
        if to.level != from.level + 1 {
            violations.push(Violation::BadLevelIndexing {
                from: edge.from.clone(),
                from_level: from.level,
                to: edge.to.clone(),
                to_level: to.level,
            });
            continue;
        }
        if !seen.insert((from, to)) {
            violations.push(Violation::DuplicateEdge {
                from: edge.from.clone(),
                to: edge.to.clone(),
            });
            continue;
        }
        if edge.mult > 0 {
            has_out.insert(from);
            has_in.insert(to);
            positive_between[from.level] = true;
        }
    }

    let last = spec.levels.len() - 1;
    for level in 0..last {
        if !positive_between[level] && !spec.levels[level].is_empty() {
            violations.push(Violation::NoEdgesBetween { level });
        }
    }
    for (level, labels) in spec.levels.iter().enumerate() {
        for (index, label) in labels.iter().enumerate() {
            let v = VertexId::new(level, index);
            if position.get(label.as_str()) != Some(&v) {
                continue;
            }
            if level > 0 && !has_in.contains(&v) {
                violations.push(Violation::NoIncomingEdge {
                    vertex: label.clone(),
                    level,
                });
            }
            if level < last && !has_out.contains(&v) {
                violations.push(Violation::NoOutgoingEdge {
                    vertex: label.clone(),
                    level,
                });
            }
        }
    }
    ValidationReport { violations }
}

/// A validated, immutable graph with materialized levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGraph {
    labels: Vec<Vec<String>>,
    lookup: BTreeMap<String, VertexId>,
    out: Vec<Vec<Vec<Adjacent>>>,
    inc: Vec<Vec<Vec<Adjacent>>>,
}

impl GradedGraph {
    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        let report = validate(spec);
        if !report.passed() {
            return Err(Error::InvalidGraph(report));
        }
        let mut lookup = BTreeMap::new();
        for (level, labels) in spec.levels.iter().enumerate() {
            for (index, label) in labels.iter().enumerate() {
                lookup.insert(label.clone(), VertexId::new(level, index));
            }
        }
        let mut out: Vec<Vec<Vec<Adjacent>>> = spec
            .levels
            .iter()
            .map(|l| vec![Vec::new(); l.len()])
            .collect();
        for edge in spec.edges.iter().filter(|e| e.mult > 0) {
            let from = lookup[&edge.from];
            let to = lookup[&edge.to];
            out[from.level][from.index].push(Adjacent {
                index: to.index,
                mult: edge.mult,
            });
        }
        Ok(Self::assemble(spec.levels.clone(), out, lookup))
    }

    fn assemble(
        labels: Vec<Vec<String>>,
        mut out: Vec<Vec<Vec<Adjacent>>>,
        lookup: BTreeMap<String, VertexId>,
    ) -> Self {
        let mut inc: Vec<Vec<Vec<Adjacent>>> =
            labels.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for (level, row) in out.iter_mut().enumerate() {
            for (index, succ) in row.iter_mut().enumerate() {
                succ.sort_by_key(|a| a.index);
                for a in succ.iter() {
                    inc[level + 1][a.index].push(Adjacent {
                        index,
                        mult: a.mult,
                    });
                }
            }
        }
        GradedGraph {
            labels,
            lookup,
            out,
            inc,
        }
    }

    pub fn to_spec(&self) -> GraphSpec {
        let mut edges = Vec::new();
        for (level, row) in self.out.iter().enumerate() {
            for (index, succ) in row.iter().enumerate() {
                for a in succ {
                    edges.push(EdgeSpec {
                        from: self.labels[level][index].clone(),
                        to: self.labels[level + 1][a.index].clone(),
                        mult: a.mult,
                    });
                }
            }
        }
        GraphSpec {
            levels: self.labels.clone(),
            edges,
        }
    }

    /// Re-runs the invariant checks; graphs are valid by construction, so
    /// this always passes unless the invariants themselves are broken.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_spec())
    }

    pub fn labels(&self, level: usize) -> &[String] {
        &self.labels[level]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.labels
            .iter()
            .enumerate()
            .flat_map(|(level, l)| (0..l.len()).map(move |index| VertexId::new(level, index)))
    }

    pub fn vertices_at(&self, level: usize) -> impl Iterator<Item = VertexId> {
        let len = self.labels.get(level).map_or(0, Vec::len);
        (0..len).map(move |index| VertexId::new(level, index))
    }

    /// The unique level-0 vertex, if there is exactly one.
    pub fn root(&self) -> Option<VertexId> {
        (self.labels[0].len() == 1).then_some(VertexId::new(0, 0))
    }

    /// Number of paths from level 0 to every vertex (each level-0 vertex
    /// counts as one path); the dimension function of the graph.
    pub fn dimensions(&self) -> Vec<Vec<BigUint>> {
        let mut dims: Vec<Vec<BigUint>> = Vec::with_capacity(self.labels.len());
        dims.push(vec![BigUint::one(); self.labels[0].len()]);
        for level in 1..self.labels.len() {
            let row = (0..self.labels[level].len())
                .map(|index| {
                    self.inc[level][index]
                        .iter()
                        .map(|a| &dims[level - 1][a.index] * a.mult)
                        .sum()
                })
                .collect();
            dims.push(row);
        }
        dims
    }

    pub fn label_of(&self, v: VertexId) -> &str {
        &self.labels[v.level][v.index]
    }
}

impl Diagram for GradedGraph {
    fn depth(&self) -> usize {
        self.labels.len()
    }

    fn level_len(&self, level: usize) -> usize {
        self.labels.get(level).map_or(0, Vec::len)
    }

    fn successors(&self, v: VertexId) -> Cow<'_, [Adjacent]> {
        Cow::Borrowed(&self.out[v.level][v.index])
    }

    fn predecessors(&self, v: VertexId) -> Cow<'_, [Adjacent]> {
        Cow::Borrowed(&self.inc[v.level][v.index])
    }

    fn label(&self, v: VertexId) -> String {
        self.labels[v.level][v.index].clone()
    }

    fn find(&self, label: &str) -> Option<VertexId> {
        self.lookup.get(label).copied()
    }
}

/// Pascal graph: level `n` holds `(n, k)` for `0 <= k <= n`, labelled `"n,k"`,
/// with simple edges `(n, k) -> (n+1, k)` and `(n, k) -> (n+1, k+1)`.
pub fn pascal_graph(depth: usize) -> Result<GradedGraph> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let labels: Vec<Vec<String>> = (0..depth)
        .map(|n| (0..=n).map(|k| format!("{n},{k}")).collect())
        .collect();
    let out = (0..depth)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    if n + 1 < depth {
                        vec![
                            Adjacent { index: k, mult: 1 },
                            Adjacent {
                                index: k + 1,
                                mult: 1,
                            },
                        ]
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    Ok(GradedGraph::assemble(
        labels.clone(),
        out,
        lookup_of(&labels),
    ))
}

/// Young graph: level `n` holds the partitions of `n` (largest first part
/// first), labelled like `"(2,1)"`; `λ -> Λ` iff `Λ` is `λ` plus one box.
pub fn young_graph(depth: usize) -> Result<GradedGraph> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let shapes: Vec<Vec<Partition>> = (0..depth).map(Partition::all_of).collect();
    let position: Vec<BTreeMap<&Partition, usize>> = shapes
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, p)| (p, i)).collect())
        .collect();
    let out = (0..depth)
        .map(|n| {
            shapes[n]
                .iter()
                .map(|lambda| {
                    if n + 1 == depth {
                        return Vec::new();
                    }
                    lambda
                        .addable_rows()
                        .map(|row| {
                            let bigger = lambda.with_box(row).expect("addable row");
                            Adjacent {
                                index: position[n + 1][&bigger],
                                mult: 1,
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let labels: Vec<Vec<String>> = shapes
        .iter()
        .map(|l| l.iter().map(ToString::to_string).collect())
        .collect();
    Ok(GradedGraph::assemble(
        labels.clone(),
        out,
        lookup_of(&labels),
    ))
}

fn lookup_of(labels: &[Vec<String>]) -> BTreeMap<String, VertexId> {
    labels
        .iter()
        .enumerate()
        .flat_map(|(level, l)| {
            l.iter()
                .enumerate()
                .map(move |(index, s)| (s.clone(), VertexId::new(level, index)))
        })
        .collect()
}

/// The Pascal graph without materialized levels. Vertex `(n, k)` has index
/// `k` at level `n`, the same indexing as [`pascal_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pascal {
    depth: usize,
}

impl Pascal {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        Ok(Pascal { depth })
    }
}

impl Diagram for Pascal {
    fn depth(&self) -> usize {
        self.depth
    }

    fn level_len(&self, level: usize) -> usize {
        if level < self.depth {
            level + 1
        } else {
            0
        }
    }

    fn successors(&self, v: VertexId) -> Cow<'_, [Adjacent]> {
        if v.level + 1 >= self.depth {
            return Cow::Borrowed(&[]);
        }
        Cow::Owned(vec![
            Adjacent {
                index: v.index,
                mult: 1,
            },
            Adjacent {
                index: v.index + 1,
                mult: 1,
            },
        ])
    }

    fn predecessors(&self, v: VertexId) -> Cow<'_, [Adjacent]> {
        let mut preds = Vec::with_capacity(2);
        if v.level == 0 {
            return Cow::Owned(preds);
        }
        if v.index > 0 {
            preds.push(Adjacent {
                index: v.index - 1,
                mult: 1,
            });
        }
        if v.index < v.level {
            preds.push(Adjacent {
                index: v.index,
                mult: 1,
            });
        }
        Cow::Owned(preds)
    }

    fn label(&self, v: VertexId) -> String {
        format!("{},{}", v.level, v.index)
    }

    fn find(&self, label: &str) -> Option<VertexId> {
        let (n, k) = label.split_once(',')?;
        let v = VertexId::new(n.trim().parse().ok()?, k.trim().parse().ok()?);
        self.contains(v).then_some(v)
    }
}

/// A path through consecutive levels, starting at `start_level`. Parallel
/// edges are distinguished by `edges[i]`, the choice in `0..mult` for the
/// step from level `start_level + i` to the next.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinitePath {
    start_level: usize,
    vertices: Vec<usize>,
    edges: Vec<u64>,
}

impl FinitePath {
    pub fn new(start_level: usize, vertices: Vec<usize>, edges: Vec<u64>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::MalformedPath("no vertices".into()));
        }
        if edges.len() + 1 != vertices.len() {
            return Err(Error::MalformedPath(format!(
                "{} vertices need {} edge choices, got {}",
                vertices.len(),
                vertices.len() - 1,
                edges.len()
            )));
        }
        Ok(FinitePath {
            start_level,
            vertices,
            edges,
        })
    }

    /// A path using edge choice 0 at every step.
    pub fn simple(start_level: usize, vertices: Vec<usize>) -> Result<Self> {
        let steps = vertices.len().saturating_sub(1);
        Self::new(start_level, vertices, vec![0; steps])
    }

    pub fn trivial(v: VertexId) -> Self {
        FinitePath {
            start_level: v.level,
            vertices: vec![v.index],
            edges: Vec::new(),
        }
    }

    pub fn start_level(&self) -> usize {
        self.start_level
    }

    pub fn end_level(&self) -> usize {
        self.start_level + self.vertices.len() - 1
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn start(&self) -> VertexId {
        VertexId::new(self.start_level, self.vertices[0])
    }

    pub fn endpoint(&self) -> VertexId {
        VertexId::new(self.end_level(), *self.vertices.last().expect("nonempty"))
    }

    /// The vertex at absolute `level`, if the path visits it.
    pub fn at(&self, level: usize) -> Option<VertexId> {
        let i = level.checked_sub(self.start_level)?;
        self.vertices
            .get(i)
            .map(|&index| VertexId::new(level, index))
    }

    pub fn push(&mut self, index: usize, edge: u64) {
        self.vertices.push(index);
        self.edges.push(edge);
    }

    /// The initial segment ending at absolute `level`.
    pub fn prefix(&self, level: usize) -> Option<FinitePath> {
        let keep = level.checked_sub(self.start_level)? + 1;
        if keep > self.vertices.len() {
            return None;
        }
        Some(FinitePath {
            start_level: self.start_level,
            vertices: self.vertices[..keep].to_vec(),
            edges: self.edges[..keep - 1].to_vec(),
        })
    }

    /// Checks that every step follows an edge with an in-range choice.
    pub fn check_in<D: Diagram + ?Sized>(&self, graph: &D) -> Result<()> {
        for (i, &index) in self.vertices.iter().enumerate() {
            graph.check_vertex(VertexId::new(self.start_level + i, index))?;
        }
        for (i, &edge) in self.edges.iter().enumerate() {
            let from = VertexId::new(self.start_level + i, self.vertices[i]);
            let mult = graph.multiplicity(from, self.vertices[i + 1]);
            if edge >= mult {
                return Err(Error::MalformedPath(format!(
                    "step {} -> {} uses edge {edge} of multiplicity {mult}",
                    graph.label(from),
                    graph.label(VertexId::new(from.level + 1, self.vertices[i + 1])),
                )));
            }
        }
        Ok(())
    }

    pub fn display<'a, D: Diagram + ?Sized>(&'a self, graph: &'a D) -> PathDisplay<'a, D> {
        PathDisplay { path: self, graph }
    }
}

pub struct PathDisplay<'a, D: ?Sized> {
    path: &'a FinitePath,
    graph: &'a D,
}

impl<D: Diagram + ?Sized> fmt::Display for PathDisplay<'_, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &index) in self.path.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
                let e = self.path.edges[i - 1];
                if e != 0 {
                    write!(f, "[{e}] ")?;
                }
            }
            let v = VertexId::new(self.path.start_level + i, index);
            f.write_str(&self.graph.label(v))?;
        }
        Ok(())
    }
}

fn check_order<D: Diagram + ?Sized>(graph: &D, v: VertexId, w: VertexId) -> Result<()> {
    graph.check_vertex(v)?;
    graph.check_vertex(w)?;
    if v.level > w.level {
        return Err(Error::LevelOrder {
            from: graph.label(v),
            from_level: v.level,
            to: graph.label(w),
            to_level: w.level,
        });
    }
    Ok(())
}

/// Number of paths from `v` to `w`, counted with edge multiplicities.
pub fn path_count<D: Diagram + ?Sized>(graph: &D, v: VertexId, w: VertexId) -> Result<BigUint> {
    check_order(graph, v, w)?;
    let mut counts: BTreeMap<usize, BigUint> = BTreeMap::new();
    counts.insert(v.index, BigUint::one());
    for level in v.level..w.level {
        let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (index, count) in &counts {
            for a in graph.successors(VertexId::new(level, *index)).iter() {
                *next.entry(a.index).or_default() += count * a.mult;
            }
        }
        counts = next;
    }
    Ok(counts.remove(&w.index).unwrap_or_default())
}

/// All paths from `v` to `w`, parallel edges distinguished, in lexicographic
/// order of (vertex index, edge choice). Refuses when there are more than
/// `cap` of them.
pub fn enumerate_paths<D: Diagram + ?Sized>(
    graph: &D,
    v: VertexId,
    w: VertexId,
    cap: usize,
) -> Result<Vec<FinitePath>> {
    let count = path_count(graph, v, w)?;
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    if count.is_zero() {
        return Ok(out);
    }
    // can_reach[l - v.level] = indices at level l from which w is reachable
    let mut can_reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); w.level - v.level + 1];
    can_reach[w.level - v.level].insert(w.index);
    for level in (v.level..w.level).rev() {
        let above = can_reach[level + 1 - v.level].clone();
        let here = &mut can_reach[level - v.level];
        for &index in &above {
            for a in graph.predecessors(VertexId::new(level + 1, index)).iter() {
                here.insert(a.index);
            }
        }
    }
    let mut path = FinitePath::trivial(v);
    extend(graph, &can_reach, v.level, w.level, &mut path, &mut out);
    Ok(out)
}

fn extend<D: Diagram + ?Sized>(
    graph: &D,
    can_reach: &[BTreeSet<usize>],
    base: usize,
    target_level: usize,
    path: &mut FinitePath,
    out: &mut Vec<FinitePath>,
) {
    let here = path.endpoint();
    if here.level == target_level {
        out.push(path.clone());
        return;
    }
    for a in graph.successors(here).iter() {
        if !can_reach[here.level + 1 - base].contains(&a.index) {
            continue;
        }
        for e in 0..a.mult {
            path.push(a.index, e);
            extend(graph, can_reach, base, target_level, path, out);
            path.vertices.pop();
            path.edges.pop();
        }
    }
}

/// All paths from any level-0 vertex into `w`.
pub fn paths_into<D: Diagram + ?Sized>(
    graph: &D,
    w: VertexId,
    cap: usize,
) -> Result<Vec<FinitePath>> {
    graph.check_vertex(w)?;
    let mut total = BigUint::zero();
    for index in 0..graph.level_len(0) {
        total += path_count(graph, VertexId::new(0, index), w)?;
    }
    if total > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            count: total.to_string(),
            cap,
        });
    }
    let mut out = Vec::new();
    for index in 0..graph.level_len(0) {
        out.extend(enumerate_paths(graph, VertexId::new(0, index), w, cap)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(levels: &[&[&str]], edges: &[(&str, &str, u64)]) -> GraphSpec {
        GraphSpec {
            levels: levels
                .iter()
                .map(|l| l.iter().map(|s| s.to_string()).collect())
                .collect(),
            edges: edges
                .iter()
                .map(|&(from, to, mult)| EdgeSpec {
                    from: from.into(),
                    to: to.into(),
                    mult,
                })
                .collect(),
        }
    }

    #[test]
    fn builtins_validate() {
        assert!(pascal_graph(5).unwrap().validate().passed());
        assert!(young_graph(6).unwrap().validate().passed());
        assert_eq!(pascal_graph(0), Err(Error::ZeroDepth));
        assert_eq!(young_graph(0), Err(Error::ZeroDepth));
    }

    #[test]
    fn pascal_shape() {
        let g = pascal_graph(3).unwrap();
        let sizes: Vec<usize> = (0..3).map(|n| g.level_len(n)).collect();
        assert_eq!(sizes, [1, 2, 3]);
        let g = pascal_graph(6).unwrap();
        for n in 1..6 {
            for k in 1..n {
                assert_eq!(g.predecessors(VertexId::new(n, k)).len(), 2);
            }
        }
    }

    #[test]
    fn young_levels() {
        let g = young_graph(6).unwrap();
        assert_eq!(g.level_len(4), 5);
        assert_eq!(g.labels(0), ["()"]);
        assert_eq!(g.find("(2,1)"), Some(VertexId::new(3, 1)));
    }

    #[test]
    fn isolated_vertex_is_named() {
        let s = spec(
            &[&["r"], &["a", "b"], &["c", "lonely"]],
            &[("r", "a", 1), ("r", "b", 1), ("a", "c", 1), ("b", "c", 2)],
        );
        let report = validate(&s);
        assert!(!report.passed());
        assert!(report.violations.contains(&Violation::NoIncomingEdge {
            vertex: "lonely".into(),
            level: 2
        }));
        assert!(matches!(
            GradedGraph::from_spec(&s),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn structural_violations() {
        let s = spec(
            &[&["r"], &["a", "c"], &["b", "a"]],
            &[("r", "b", 1), ("r", "c", 1), ("r", "c", 1), ("r", "zz", 1)],
        );
        let v = validate(&s).violations;
        assert!(v.contains(&Violation::DuplicateLabel("a".into())));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::BadLevelIndexing { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::DuplicateEdge { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::UnknownEndpoint { .. })));
        assert!(v.contains(&Violation::NoEdgesBetween { level: 1 }));

        let zero = spec(&[&["r"], &["a"]], &[("r", "a", 0)]);
        let v = validate(&zero).violations;
        assert!(v.contains(&Violation::NoEdgesBetween { level: 0 }));
        assert!(v.contains(&Violation::NoOutgoingEdge {
            vertex: "r".into(),
            level: 0
        }));
        assert_eq!(
            validate(&GraphSpec::default()).violations,
            [Violation::NoLevels]
        );
    }

    #[test]
    fn spec_round_trip() {
        let g = young_graph(5).unwrap();
        assert_eq!(GradedGraph::from_spec(&g.to_spec()).unwrap(), g);
    }

    #[test]
    fn counting_with_multiplicities() {
        let s = spec(
            &[&["r"], &["a", "b"], &["c"]],
            &[("r", "a", 2), ("r", "b", 1), ("a", "c", 3), ("b", "c", 1)],
        );
        let g = GradedGraph::from_spec(&s).unwrap();
        let c = g.find("c").unwrap();
        assert_eq!(
            path_count(&g, VertexId::new(0, 0), c).unwrap(),
            BigUint::from(7u32)
        );
        let paths = enumerate_paths(&g, VertexId::new(0, 0), c, 100).unwrap();
        assert_eq!(paths.len(), 7);
        for p in &paths {
            p.check_in(&g).unwrap();
        }
        assert_eq!(g.dimensions()[2][0], BigUint::from(7u32));
    }

    #[test]
    fn enumeration_edge_cases() {
        let g = pascal_graph(5).unwrap();
        let root = VertexId::new(0, 0);
        let v = g.find("2,1").unwrap();
        assert_eq!(enumerate_paths(&g, root, v, 10).unwrap().len(), 2);
        assert_eq!(
            enumerate_paths(&g, v, v, 10).unwrap(),
            [FinitePath::trivial(v)]
        );
        assert!(matches!(
            enumerate_paths(&g, root, v, 1),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            path_count(&g, v, root),
            Err(Error::LevelOrder { .. })
        ));
        assert_eq!(path_count(&g, v, v).unwrap(), BigUint::one());
    }

    #[test]
    fn implicit_pascal_agrees_with_materialized() {
        let g = pascal_graph(7).unwrap();
        let p = Pascal::new(7).unwrap();
        for v in g.vertices() {
            assert_eq!(g.successors(v), p.successors(v));
            assert_eq!(g.predecessors(v), p.predecessors(v));
            assert_eq!(g.label(v), p.label(v));
            assert_eq!(p.find(&g.label(v)), Some(v));
        }
        assert_eq!(p.find("7,0"), None);
    }

    #[test]
    fn path_accessors() {
        let p = FinitePath::simple(0, vec![0, 1, 1, 2]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.endpoint(), VertexId::new(3, 2));
        assert_eq!(p.at(2), Some(VertexId::new(2, 1)));
        assert_eq!(p.prefix(1).unwrap().indices(), &[0, 1]);
        assert!(FinitePath::new(0, vec![0, 1], vec![]).is_err());
        let g = pascal_graph(4).unwrap();
        assert_eq!(p.display(&g).to_string(), "0,0 1,1 2,1 3,2");
        assert!(FinitePath::simple(0, vec![0, 1, 0])
            .unwrap()
            .check_in(&g)
            .is_err());
    }
}
