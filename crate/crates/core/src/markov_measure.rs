//! Markov measures on path spaces and their cocycles.
//!
//! A Markov measure is an initial distribution on level 0 together with
//! forward transition probabilities on edges. Every such measure determines
//! cotransitions (by Bayes' rule over the level marginals) and hence a
//! Markov cocycle; [`matches_equipment`] checks whether that cocycle agrees
//! with a prescribed equipment on all positive-measure cylinders.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::equipment::{
    cocycle_eval, for_each_class, merge_level, CoEntry, Cocycle, CocycleValue, CotransitionSystem,
};
use crate::error::{Error, Result};
use crate::graded_graph::{
    pascal_graph, young_graph, Diagram, FinitePath, GradedGraph, Pascal, VertexId,
};
use crate::rational::{
    below_threshold, format_rational, from_biguint_ratio, is_probability, pick_by_threshold,
    Rational,
};
use crate::stream::stream_rng;

/// Forward transition along one outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub to: usize,
    pub edge: u64,
    pub prob: Rational,
}

/// Read access to a Markov measure given by forward transitions.
pub trait Transitions {
    type Graph: Diagram;

    fn graph(&self) -> &Self::Graph;

    /// Distribution of the level-0 coordinate, indexed by vertex.
    fn initial(&self) -> Cow<'_, [Rational]>;

    /// Outgoing row of `v`, one entry per outgoing edge. Empty on the last level.
    fn forward(&self, v: VertexId) -> Cow<'_, [Step]>;

    fn choose_initial(&self, u: u64) -> Option<usize> {
        pick_by_threshold(self.initial().iter(), u)
    }

    /// Next vertex index and edge choice for one uniform draw.
    fn choose_step(&self, v: VertexId, u: u64) -> Option<(usize, u64)> {
        let row = self.forward(v);
        let j = pick_by_threshold(row.iter().map(|s| &s.prob), u)?;
        Some((row[j].to, row[j].edge))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovMeasure {
    graph: Arc<GradedGraph>,
    initial: Vec<Rational>,
    forward: Vec<Vec<Vec<Step>>>,
}

impl MarkovMeasure {
    /// Validates the initial vector and one forward row per vertex below the
    /// last level. Edges missing from a row get probability zero.
    pub fn new(
        graph: Arc<GradedGraph>,
        initial: Vec<Rational>,
        rows: &BTreeMap<VertexId, Vec<Step>>,
    ) -> Result<Self> {
        if initial.len() != graph.level_len(0) {
            return Err(Error::BadInitial(format!(
                "{} entries for {} level-0 vertices",
                initial.len(),
                graph.level_len(0)
            )));
        }
        if let Some(p) = initial.iter().find(|p| p.is_negative()) {
            return Err(Error::BadInitial(format!(
                "negative entry {}",
                format_rational(p)
            )));
        }
        let total: Rational = initial.iter().sum();
        if !total.is_one() {
            return Err(Error::BadInitial(format!(
                "sums to {}",
                format_rational(&total)
            )));
        }
        for &v in rows.keys() {
            graph.check_vertex(v)?;
        }
        let last = graph.depth() - 1;
        let mut forward: Vec<Vec<Vec<Step>>> = (0..graph.depth())
            .map(|l| vec![Vec::new(); graph.level_len(l)])
            .collect();
        for v in graph.vertices().filter(|v| v.level < last) {
            let given = rows
                .get(&v)
                .ok_or_else(|| Error::MissingRow(graph.label(v)))?;
            forward[v.level][v.index] = normalize_forward(&graph, v, given)?;
        }
        if let Some(v) = rows.keys().find(|v| v.level == last) {
            if !rows[v].is_empty() {
                return Err(Error::BadRow {
                    vertex: graph.label(*v),
                    reason: "vertices on the last level have no outgoing edges".into(),
                });
            }
        }
        Ok(MarkovMeasure {
            graph,
            initial,
            forward,
        })
    }

    /// Builds the rows from a closure called once per vertex below the last level.
    pub fn from_fn<F>(graph: Arc<GradedGraph>, initial: Vec<Rational>, mut row: F) -> Result<Self>
    where
        F: FnMut(VertexId) -> Vec<Step>,
    {
        let last = graph.depth() - 1;
        let rows: BTreeMap<VertexId, Vec<Step>> = graph
            .vertices()
            .filter(|v| v.level < last)
            .map(|v| (v, row(v)))
            .collect();
        Self::new(graph, initial, &rows)
    }

    pub fn graph_arc(&self) -> &Arc<GradedGraph> {
        &self.graph
    }

    pub fn initial_vector(&self) -> &[Rational] {
        &self.initial
    }

    /// Rows keyed by source vertex (levels below the last).
    pub fn rows(&self) -> BTreeMap<VertexId, Vec<Step>> {
        let last = self.graph.depth() - 1;
        self.graph
            .vertices()
            .filter(|v| v.level < last)
            .map(|v| (v, self.forward[v.level][v.index].clone()))
            .collect()
    }

    /// Probability that the path passes through each vertex.
    pub fn marginals(&self) -> Vec<Vec<Rational>> {
        let g = &self.graph;
        let mut out = Vec::with_capacity(g.depth());
        out.push(self.initial.clone());
        for level in 0..g.depth() - 1 {
            let mut next = vec![Rational::zero(); g.level_len(level + 1)];
            for (index, mass) in out[level].iter().enumerate() {
                if mass.is_zero() {
                    continue;
                }
                for s in &self.forward[level][index] {
                    next[s.to] += mass * &s.prob;
                }
            }
            out.push(next);
        }
        out
    }
}

fn normalize_forward(graph: &GradedGraph, v: VertexId, given: &[Step]) -> Result<Vec<Step>> {
    let bad = |reason: alloc::string::String| Error::BadRow {
        vertex: graph.label(v),
        reason,
    };
    let mut slots: BTreeMap<(usize, u64), Option<Rational>> = BTreeMap::new();
    for a in graph.successors(v).iter() {
        for e in 0..a.mult {
            slots.insert((a.index, e), None);
        }
    }
    let mut sum = Rational::zero();
    for s in given {
        let slot = slots.get_mut(&(s.to, s.edge)).ok_or_else(|| {
            bad(format!(
                "transition on non-edge to #{} (edge {})",
                s.to, s.edge
            ))
        })?;
        if slot.is_some() {
            return Err(bad(format!(
                "duplicate transition to #{} (edge {})",
                s.to, s.edge
            )));
        }
        if s.prob.is_negative() {
            return Err(bad(format!(
                "negative probability {}",
                format_rational(&s.prob)
            )));
        }
        sum += &s.prob;
        *slot = Some(s.prob.clone());
    }
    if !sum.is_one() {
        return Err(bad(format!("sums to {}", format_rational(&sum))));
    }
    Ok(slots
        .into_iter()
        .map(|((to, edge), p)| Step {
            to,
            edge,
            prob: p.unwrap_or_else(Rational::zero),
        })
        .collect())
}

impl Transitions for MarkovMeasure {
    type Graph = GradedGraph;

    fn graph(&self) -> &GradedGraph {
        &self.graph
    }

    fn initial(&self) -> Cow<'_, [Rational]> {
        Cow::Borrowed(&self.initial)
    }

    fn forward(&self, v: VertexId) -> Cow<'_, [Step]> {
        Cow::Borrowed(&self.forward[v.level][v.index])
    }
}

/// `μ(x_0) · Π P(x_i → x_{i+1})` for a path starting on level 0; zero when
/// the path leaves the support or does not follow an edge.
pub fn cylinder_prob<T: Transitions + ?Sized>(m: &T, p: &FinitePath) -> Result<Rational> {
    if p.start_level() != 0 {
        return Err(Error::MalformedPath("cylinders start on level 0".into()));
    }
    let graph = m.graph();
    for (level, &index) in p.indices().iter().enumerate() {
        graph.check_vertex(VertexId::new(level, index))?;
    }
    let mut prob = m.initial()[p.indices()[0]].clone();
    for i in 0..p.len() {
        if prob.is_zero() {
            break;
        }
        let row = m.forward(VertexId::new(i, p.indices()[i]));
        let step = row
            .iter()
            .find(|s| s.to == p.indices()[i + 1] && s.edge == p.edges()[i]);
        match step {
            Some(s) => prob *= &s.prob,
            None => return Ok(Rational::zero()),
        }
    }
    Ok(prob)
}

/// Cotransitions of `m` by Bayes' rule:
/// `P(x_n = y, edge | x_{n+1} = x) = μ(y) P(y → x, edge) / μ(x)`.
/// Rows of vertices with zero marginal are left unspecified.
pub fn induced_cotransitions(m: &MarkovMeasure) -> CotransitionSystem {
    let g = m.graph.as_ref();
    let marginals = m.marginals();
    let rows = (0..g.depth())
        .map(|level| {
            (0..g.level_len(level))
                .map(|index| {
                    if level == 0 {
                        return Some(Vec::new());
                    }
                    let mass = &marginals[level][index];
                    if mass.is_zero() {
                        return None;
                    }
                    let x = VertexId::new(level, index);
                    let mut row = Vec::new();
                    for a in g.predecessors(x).iter() {
                        let from_mass = &marginals[level - 1][a.index];
                        for edge in 0..a.mult {
                            let forward = m.forward[level - 1][a.index]
                                .iter()
                                .find(|s| s.to == index && s.edge == edge)
                                .map_or_else(Rational::zero, |s| s.prob.clone());
                            row.push(CoEntry {
                                from: a.index,
                                edge,
                                prob: from_mass * forward / mass,
                            });
                        }
                    }
                    Some(row)
                })
                .collect()
        })
        .collect();
    CotransitionSystem::from_partial_rows(m.graph.clone(), rows)
}

/// Radon–Nikodym cocycle of `m` on a tail-equivalent pair: the ratio of the
/// two cylinder probabilities.
pub fn rn_cocycle<T: Transitions + ?Sized>(
    m: &T,
    p: &FinitePath,
    q: &FinitePath,
) -> Result<CocycleValue> {
    merge_level(m.graph(), p, q)?;
    Ok(CocycleValue::quotient(
        cylinder_prob(m, p)?,
        cylinder_prob(m, q)?,
    ))
}

impl Cocycle for MarkovMeasure {
    fn eval(&self, p: &FinitePath, q: &FinitePath) -> Result<CocycleValue> {
        rn_cocycle(self, p, q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchWitness {
    /// A positive-measure pair on which the two cocycles differ.
    Pair {
        p: FinitePath,
        q: FinitePath,
        rn: CocycleValue,
        prescribed: CocycleValue,
    },
    /// A reachable vertex whose induced cotransition row differs from the
    /// prescribed one.
    Row {
        vertex: VertexId,
        induced: Vec<CoEntry>,
        prescribed: Option<Vec<CoEntry>>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchReport {
    pub pairs_checked: usize,
    pub rows_checked: usize,
    pub pair_witness: Option<MatchWitness>,
    pub row_witness: Option<MatchWitness>,
}

impl MatchReport {
    pub fn passed(&self) -> bool {
        self.pair_witness.is_none() && self.row_witness.is_none()
    }

    pub fn witness(&self) -> Option<&MatchWitness> {
        self.pair_witness.as_ref().or(self.row_witness.as_ref())
    }
}

/// Checks whether the Radon–Nikodym cocycle of `m` coincides with the
/// cocycle of `sys` on levels below `level_bound`, in two independent ways:
/// pairwise on all tail-equivalent positive-measure cylinders, and row by row
/// on the induced cotransitions of reachable vertices.
pub fn matches_equipment(
    m: &MarkovMeasure,
    sys: &CotransitionSystem,
    level_bound: usize,
    cap: usize,
) -> Result<MatchReport> {
    if !Arc::ptr_eq(&m.graph, sys.graph_arc()) && m.graph != *sys.graph_arc() {
        return Err(Error::GraphMismatch);
    }
    let g = m.graph.as_ref();
    let mut report = MatchReport::default();

    for_each_class(g, level_bound, cap, |paths| {
        if report.pair_witness.is_some() {
            return Ok(());
        }
        let mut charged = Vec::with_capacity(paths.len());
        for p in paths {
            if !cylinder_prob(m, p)?.is_zero() {
                charged.push(p);
            }
        }
        for p in &charged {
            for q in &charged {
                report.pairs_checked += 1;
                let rn = rn_cocycle(m, p, q)?;
                let prescribed = cocycle_eval(sys, p, q)?;
                if rn != prescribed {
                    report.pair_witness = Some(MatchWitness::Pair {
                        p: (*p).clone(),
                        q: (*q).clone(),
                        rn,
                        prescribed,
                    });
                    return Ok(());
                }
            }
        }
        Ok(())
    })?;

    let induced = induced_cotransitions(m);
    let marginals = m.marginals();
    'rows: for level in 1..level_bound.min(g.depth()) {
        for index in 0..g.level_len(level) {
            if marginals[level][index].is_zero() {
                continue;
            }
            let x = VertexId::new(level, index);
            report.rows_checked += 1;
            let ours = induced.row(x).expect("reachable rows are specified");
            let theirs = sys.row(x);
            if theirs != Some(ours) {
                report.row_witness = Some(MatchWitness::Row {
                    vertex: x,
                    induced: ours.to_vec(),
                    prescribed: theirs.map(<[CoEntry]>::to_vec),
                });
                break 'rows;
            }
        }
    }
    Ok(report)
}

pub(crate) fn require_builtin(
    graph: &GradedGraph,
    expected: Result<GradedGraph>,
    name: &'static str,
) -> Result<()> {
    if expected.as_ref() == Ok(graph) {
        Ok(())
    } else {
        Err(Error::WrongGraph(name))
    }
}

pub(crate) fn single_root(graph: &GradedGraph) -> Vec<Rational> {
    vec![Rational::one(); graph.level_len(0)]
}

/// The Plancherel measure on the Young graph:
/// `P(λ → Λ) = dim(Λ) / ((|λ| + 1) dim(λ))`.
pub fn plancherel_measure(graph: Arc<GradedGraph>) -> Result<MarkovMeasure> {
    require_builtin(&graph, young_graph(graph.depth()), "Young")?;
    let dims = graph.dimensions();
    let initial = single_root(&graph);
    let g = graph.clone();
    MarkovMeasure::from_fn(graph, initial, |v| {
        let scale = &dims[v.level][v.index] * (v.level + 1);
        g.successors(v)
            .iter()
            .map(|a| Step {
                to: a.index,
                edge: 0,
                prob: from_biguint_ratio(&dims[v.level + 1][a.index], &scale),
            })
            .collect()
    })
}

fn check_probability(p: &Rational) -> Result<()> {
    if is_probability(p) {
        Ok(())
    } else {
        Err(Error::ProbabilityRange(format_rational(p)))
    }
}

/// Bernoulli(p) on the Pascal graph: each step goes to `(n+1, k+1)` with
/// probability `p` and to `(n+1, k)` with probability `1 - p`.
pub fn bernoulli_on_pascal(graph: Arc<GradedGraph>, p: &Rational) -> Result<MarkovMeasure> {
    check_probability(p)?;
    require_builtin(&graph, pascal_graph(graph.depth()), "Pascal")?;
    let stay = Rational::one() - p;
    let initial = single_root(&graph);
    MarkovMeasure::from_fn(graph, initial, |v| {
        vec![
            Step {
                to: v.index,
                edge: 0,
                prob: stay.clone(),
            },
            Step {
                to: v.index + 1,
                edge: 0,
                prob: p.clone(),
            },
        ]
    })
}

/// The Markov chain on the Pascal graph realizing the mixture
/// `Σ w_i Bernoulli(p_i)`. Vertices the mixture never reaches get the
/// uniform row `(1/2, 1/2)`.
pub fn mixture_on_pascal(
    graph: Arc<GradedGraph>,
    components: &[(Rational, Rational)],
) -> Result<MarkovMeasure> {
    check_mixture(components.iter().map(|c| &c.0))?;
    for (_, p) in components {
        check_probability(p)?;
    }
    require_builtin(&graph, pascal_graph(graph.depth()), "Pascal")?;
    // Z(n, k) = Σ w_i p_i^k (1 - p_i)^(n - k): mass of any single path to (n, k).
    let z = |n: usize, k: usize| -> Rational {
        components
            .iter()
            .map(|(w, p)| {
                let q = Rational::one() - p;
                w * num_traits::pow(p.clone(), k) * num_traits::pow(q, n - k)
            })
            .sum()
    };
    let half = Rational::new(1.into(), 2.into());
    let initial = single_root(&graph);
    MarkovMeasure::from_fn(graph, initial, |v| {
        let here = z(v.level, v.index);
        let (stay, up) = if here.is_zero() {
            (half.clone(), half.clone())
        } else {
            (
                z(v.level + 1, v.index) / &here,
                z(v.level + 1, v.index + 1) / &here,
            )
        };
        vec![
            Step {
                to: v.index,
                edge: 0,
                prob: stay,
            },
            Step {
                to: v.index + 1,
                edge: 0,
                prob: up,
            },
        ]
    })
}

fn check_mixture<'a>(weights: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let mut total = Rational::zero();
    for w in weights {
        if w.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "negative mixture weight {}",
                format_rational(w)
            )));
        }
        total += w;
    }
    if !total.is_one() {
        return Err(Error::InvalidArgument(format!(
            "mixture weights sum to {}",
            format_rational(&total)
        )));
    }
    Ok(())
}

/// Bernoulli(p) on the implicit Pascal graph, for deep sampling.
#[derive(Clone, Debug)]
pub struct BernoulliChain {
    pascal: Pascal,
    p: Rational,
    stay: Rational,
}

impl BernoulliChain {
    pub fn new(pascal: Pascal, p: Rational) -> Result<Self> {
        check_probability(&p)?;
        let stay = Rational::one() - &p;
        Ok(BernoulliChain { pascal, p, stay })
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }
}

impl Transitions for BernoulliChain {
    type Graph = Pascal;

    fn graph(&self) -> &Pascal {
        &self.pascal
    }

    fn initial(&self) -> Cow<'_, [Rational]> {
        Cow::Owned(vec![Rational::one()])
    }

    fn forward(&self, v: VertexId) -> Cow<'_, [Step]> {
        if v.level + 1 >= self.pascal.depth() {
            return Cow::Owned(Vec::new());
        }
        Cow::Owned(vec![
            Step {
                to: v.index,
                edge: 0,
                prob: self.stay.clone(),
            },
            Step {
                to: v.index + 1,
                edge: 0,
                prob: self.p.clone(),
            },
        ])
    }

    fn choose_initial(&self, _u: u64) -> Option<usize> {
        Some(0)
    }

    fn choose_step(&self, v: VertexId, u: u64) -> Option<(usize, u64)> {
        if v.level + 1 >= self.pascal.depth() {
            return None;
        }
        if self.p.is_zero() || below_threshold(u, &self.stay) {
            Some((v.index, 0))
        } else {
            Some((v.index + 1, 0))
        }
    }
}

/// Draws random paths from level 0.
pub trait PathSampler {
    /// A path visiting levels `0..levels`.
    fn sample_path<R: RngCore>(&self, levels: usize, rng: &mut R) -> Result<FinitePath>;
}

impl<T: Transitions> PathSampler for T {
    fn sample_path<R: RngCore>(&self, levels: usize, rng: &mut R) -> Result<FinitePath> {
        let depth = self.graph().depth();
        if levels == 0 || levels > depth {
            return Err(Error::LevelOutOfRange {
                level: levels,
                depth,
            });
        }
        let start = self
            .choose_initial(rng.next_u64())
            .ok_or_else(|| Error::BadInitial("no positive mass".into()))?;
        let mut path = FinitePath::trivial(VertexId::new(0, start));
        for _ in 1..levels {
            let here = path.endpoint();
            let (to, edge) =
                self.choose_step(here, rng.next_u64())
                    .ok_or_else(|| Error::BadRow {
                        vertex: self.graph().label(here),
                        reason: "no outgoing mass".into(),
                    })?;
            path.push(to, edge);
        }
        Ok(path)
    }
}

/// A finite convex combination of measures; samples by first choosing a
/// component.
#[derive(Clone, Debug)]
pub struct Mixture<M> {
    components: Vec<(Rational, M)>,
}

impl<M> Mixture<M> {
    pub fn new(components: Vec<(Rational, M)>) -> Result<Self> {
        check_mixture(components.iter().map(|c| &c.0))?;
        Ok(Mixture { components })
    }

    pub fn components(&self) -> &[(Rational, M)] {
        &self.components
    }
}

impl<M: PathSampler> PathSampler for Mixture<M> {
    fn sample_path<R: RngCore>(&self, levels: usize, rng: &mut R) -> Result<FinitePath> {
        let j = pick_by_threshold(self.components.iter().map(|c| &c.0), rng.next_u64())
            .ok_or(Error::EmptySample)?;
        self.components[j].1.sample_path(levels, rng)
    }
}

/// One path from stream 0 of `seed`.
pub fn sample_path<S: PathSampler + ?Sized>(m: &S, levels: usize, seed: u64) -> Result<FinitePath> {
    m.sample_path(levels, &mut stream_rng(seed, 0))
}

/// `count` paths, path `i` drawn from stream `i` of `seed`.
pub fn sample_paths<S: PathSampler + ?Sized>(
    m: &S,
    levels: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<FinitePath>> {
    (0..count)
        .map(|i| m.sample_path(levels, &mut stream_rng(seed, i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equipment::central_equipment;
    use crate::graded_graph::paths_into;
    use crate::rational::ratio;

    fn pascal(depth: usize) -> Arc<GradedGraph> {
        Arc::new(pascal_graph(depth).unwrap())
    }

    fn path(v: &[usize]) -> FinitePath {
        FinitePath::simple(0, v.to_vec()).unwrap()
    }

    #[test]
    fn cylinder_examples() {
        let g = pascal(4);
        let half = bernoulli_on_pascal(g.clone(), &ratio(1, 2)).unwrap();
        assert_eq!(
            cylinder_prob(&half, &path(&[0, 1, 1])).unwrap(),
            ratio(1, 4)
        );
        let zero = bernoulli_on_pascal(g.clone(), &ratio(0, 1)).unwrap();
        assert_eq!(cylinder_prob(&zero, &path(&[0, 1])).unwrap(), ratio(0, 1));
        assert_eq!(
            cylinder_prob(&zero, &path(&[0, 0, 0, 0])).unwrap(),
            ratio(1, 1)
        );
        assert!(cylinder_prob(&half, &path(&[0, 0, 5])).is_err());
        // not an edge: off support
        assert_eq!(
            cylinder_prob(&half, &path(&[0, 0, 2])).unwrap(),
            ratio(0, 1)
        );
    }

    #[test]
    fn single_vertex_levels() {
        use crate::graded_graph::{EdgeSpec, GraphSpec};
        let spec = GraphSpec {
            levels: vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            edges: vec![
                EdgeSpec {
                    from: "a".into(),
                    to: "b".into(),
                    mult: 1,
                },
                EdgeSpec {
                    from: "b".into(),
                    to: "c".into(),
                    mult: 1,
                },
            ],
        };
        let g = Arc::new(GradedGraph::from_spec(&spec).unwrap());
        let m = MarkovMeasure::from_fn(g, vec![ratio(1, 1)], |v| {
            vec![Step {
                to: 0,
                edge: 0,
                prob: ratio(1, 1),
            }]
            .into_iter()
            .filter(|_| v.level < 2)
            .collect()
        })
        .unwrap();
        assert_eq!(cylinder_prob(&m, &path(&[0, 0, 0])).unwrap(), ratio(1, 1));
        let induced = induced_cotransitions(&m);
        assert!(induced
            .to_table()
            .values()
            .flatten()
            .all(|e| e.prob.is_one()));
    }

    #[test]
    fn rejects_bad_rows() {
        let g = pascal(3);
        let bad = MarkovMeasure::from_fn(g.clone(), vec![ratio(1, 1)], |v| {
            vec![Step {
                to: v.index,
                edge: 0,
                prob: ratio(1, 2),
            }]
        });
        assert!(matches!(bad, Err(Error::BadRow { .. })));
        let bad_initial = MarkovMeasure::from_fn(g.clone(), vec![ratio(1, 2)], |v| {
            vec![Step {
                to: v.index,
                edge: 0,
                prob: ratio(1, 1),
            }]
        });
        assert!(matches!(bad_initial, Err(Error::BadInitial(_))));
        assert!(matches!(
            bernoulli_on_pascal(g, &ratio(3, 2)),
            Err(Error::ProbabilityRange(_))
        ));
        let y = Arc::new(young_graph(3).unwrap());
        assert!(matches!(
            bernoulli_on_pascal(y, &ratio(1, 2)),
            Err(Error::WrongGraph("Pascal"))
        ));
    }

    #[test]
    fn bernoulli_marginal() {
        let g = pascal(3);
        let m = bernoulli_on_pascal(g.clone(), &ratio(1, 3)).unwrap();
        assert_eq!(m.marginals()[2][1], ratio(4, 9));
    }

    /// Up-probability 1/2 except 1/3 on the step leaving level 1.
    fn skewed(g: Arc<GradedGraph>) -> MarkovMeasure {
        MarkovMeasure::from_fn(g, vec![ratio(1, 1)], |v| {
            let p = if v.level == 1 {
                ratio(1, 3)
            } else {
                ratio(1, 2)
            };
            vec![
                Step {
                    to: v.index,
                    edge: 0,
                    prob: Rational::one() - &p,
                },
                Step {
                    to: v.index + 1,
                    edge: 0,
                    prob: p,
                },
            ]
        })
        .unwrap()
    }

    #[test]
    fn rn_examples() {
        let g = pascal(4);
        let p = path(&[0, 1, 1]);
        let q = path(&[0, 0, 1]);
        // (1/2 · 2/3) / (1/2 · 1/3)
        let skew = skewed(g.clone());
        assert_eq!(
            rn_cocycle(&skew, &p, &q).unwrap(),
            CocycleValue::Value(ratio(2, 1))
        );
        assert_eq!(
            rn_cocycle(&skew, &q, &p).unwrap(),
            CocycleValue::Value(ratio(1, 2))
        );
        // Bernoulli measures are exchangeable: both paths have mass 1/3 · 2/3
        let third = bernoulli_on_pascal(g.clone(), &ratio(1, 3)).unwrap();
        assert_eq!(rn_cocycle(&third, &p, &q).unwrap(), CocycleValue::one());
        assert_eq!(rn_cocycle(&third, &p, &p).unwrap(), CocycleValue::one());
        let zero = bernoulli_on_pascal(g, &ratio(0, 1)).unwrap();
        assert_eq!(rn_cocycle(&zero, &p, &q).unwrap(), CocycleValue::Undefined);
    }

    #[test]
    fn non_exchangeable_fails_central_with_witness() {
        let g = pascal(5);
        let m = skewed(g.clone());
        let central = central_equipment(g.clone()).unwrap();
        let report = matches_equipment(&m, &central, 5, 1000).unwrap();
        assert!(!report.passed());
        match report.pair_witness.unwrap() {
            MatchWitness::Pair { rn, prescribed, .. } => {
                assert_eq!(prescribed, CocycleValue::one());
                assert!(
                    rn == CocycleValue::Value(ratio(1, 2))
                        || rn == CocycleValue::Value(ratio(2, 1))
                );
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(report.row_witness, Some(MatchWitness::Row { .. })));
        let third = bernoulli_on_pascal(g, &ratio(1, 3)).unwrap();
        assert!(matches_equipment(&third, &central, 5, 1000)
            .unwrap()
            .passed());
    }

    #[test]
    fn half_matches_central() {
        let g = pascal(5);
        let m = bernoulli_on_pascal(g.clone(), &ratio(1, 2)).unwrap();
        let central = central_equipment(g.clone()).unwrap();
        assert!(matches_equipment(&m, &central, 5, 1000).unwrap().passed());
        let induced = induced_cotransitions(&m);
        assert_eq!(induced.to_table(), central.to_table());
    }

    #[test]
    fn graph_mismatch_is_an_error() {
        let m = bernoulli_on_pascal(pascal(4), &ratio(1, 2)).unwrap();
        let other = central_equipment(pascal(5)).unwrap();
        assert_eq!(
            matches_equipment(&m, &other, 4, 100),
            Err(Error::GraphMismatch)
        );
    }

    #[test]
    fn plancherel_level_two() {
        let g = Arc::new(young_graph(4).unwrap());
        let m = plancherel_measure(g.clone()).unwrap();
        let marg = m.marginals();
        assert_eq!(marg[1][0], ratio(1, 1));
        assert_eq!(marg[2][0], ratio(1, 2));
        assert_eq!(marg[2][1], ratio(1, 2));
        assert!(matches!(
            plancherel_measure(pascal(3)),
            Err(Error::WrongGraph("Young"))
        ));
    }

    #[test]
    fn mixture_chain_is_the_mixture() {
        let g = pascal(6);
        let comps = [(ratio(1, 2), ratio(1, 4)), (ratio(1, 2), ratio(3, 4))];
        let mix = mixture_on_pascal(g.clone(), &comps).unwrap();
        let a = bernoulli_on_pascal(g.clone(), &ratio(1, 4)).unwrap();
        let b = bernoulli_on_pascal(g.clone(), &ratio(3, 4)).unwrap();
        for w in g.vertices_at(5) {
            for p in paths_into(g.as_ref(), w, 100).unwrap() {
                let expected =
                    (cylinder_prob(&a, &p).unwrap() + cylinder_prob(&b, &p).unwrap()) * ratio(1, 2);
                assert_eq!(cylinder_prob(&mix, &p).unwrap(), expected);
            }
        }
        let degenerate = [(ratio(1, 2), ratio(0, 1)), (ratio(1, 2), ratio(1, 1))];
        let m = mixture_on_pascal(g, &degenerate).unwrap();
        assert_eq!(m.marginals()[3][1], ratio(0, 1));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = pascal(12);
        let m = bernoulli_on_pascal(g.clone(), &ratio(1, 3)).unwrap();
        let a = sample_path(&m, 12, 9).unwrap();
        let b = sample_path(&m, 12, 9).unwrap();
        assert_eq!(a, b);
        a.check_in(g.as_ref()).unwrap();
        let zero = bernoulli_on_pascal(g, &ratio(0, 1)).unwrap();
        for seed in 0..20 {
            assert!(sample_path(&zero, 12, seed)
                .unwrap()
                .indices()
                .iter()
                .all(|&k| k == 0));
        }
        assert!(sample_path(&zero, 13, 0).is_err());
    }

    #[test]
    fn implicit_chain_agrees_with_materialized_sampler() {
        let g = pascal(40);
        let m = bernoulli_on_pascal(g, &ratio(2, 7)).unwrap();
        let chain = BernoulliChain::new(Pascal::new(40).unwrap(), ratio(2, 7)).unwrap();
        for seed in 0..50 {
            assert_eq!(
                sample_path(&m, 40, seed).unwrap(),
                sample_path(&chain, 40, seed).unwrap()
            );
        }
    }
}
