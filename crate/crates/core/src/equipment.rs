//! Cotransition systems and the Markov cocycles they induce.
//!
//! A cotransition row of a vertex `x` on level `n + 1` is a probability
//! vector over the edges entering `x`: the conditional law of the level-`n`
//! coordinate (and, for parallel edges, of the edge) given that the path
//! passes through `x`. For two tail-equivalent paths the induced cocycle is
//! the ratio of the products of their cotransition probabilities over the
//! levels where they differ.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::graded_graph::{paths_into, Diagram, FinitePath, GradedGraph, Pascal, VertexId};
use crate::rational::{format_rational, from_biguint_ratio, ratio, Rational};

/// Probability attached to one entering edge: predecessor index on the level
/// below, the parallel-edge choice, and the probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoEntry {
    pub from: usize,
    pub edge: u64,
    pub prob: Rational,
}

/// Read access to a system of cotransition probabilities.
pub trait Equipment {
    type Graph: Diagram;

    fn graph(&self) -> &Self::Graph;

    /// The cotransition row of `x` (every entering edge, in predecessor
    /// order), or `None` when the row is unspecified. Level-0 vertices have
    /// an empty row.
    fn cotransitions(&self, x: VertexId) -> Option<Cow<'_, [CoEntry]>>;

    fn cotransition(&self, x: VertexId, from: usize, edge: u64) -> Option<Rational> {
        let row = self.cotransitions(x)?;
        Some(
            row.iter()
                .find(|e| e.from == from && e.edge == edge)
                .map_or_else(Rational::zero, |e| e.prob.clone()),
        )
    }
}

/// Tabulated cotransitions on a materialized graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotransitionSystem {
    graph: Arc<GradedGraph>,
    rows: Vec<Vec<Option<Vec<CoEntry>>>>,
}

impl CotransitionSystem {
    /// Validates a table keyed by target vertex. Entries for edges missing
    /// from a row are zero; every row must sum to exactly one.
    pub fn from_table(
        graph: Arc<GradedGraph>,
        table: &BTreeMap<VertexId, Vec<CoEntry>>,
    ) -> Result<Self> {
        for &x in table.keys() {
            graph.check_vertex(x)?;
            if x.level == 0 {
                return Err(Error::BadRow {
                    vertex: graph.label(x),
                    reason: "level-0 vertices have no predecessors".into(),
                });
            }
        }
        let mut rows = empty_rows(&graph);
        for x in graph.vertices().filter(|v| v.level > 0) {
            let given = table
                .get(&x)
                .ok_or_else(|| Error::MissingRow(graph.label(x)))?;
            rows[x.level][x.index] = Some(normalize_row(&graph, x, given)?);
        }
        Ok(CotransitionSystem { graph, rows })
    }

    /// Rows left as `None` are unspecified (used for vertices a measure never
    /// reaches). Specified rows must already be complete.
    pub(crate) fn from_partial_rows(
        graph: Arc<GradedGraph>,
        rows: Vec<Vec<Option<Vec<CoEntry>>>>,
    ) -> Self {
        CotransitionSystem { graph, rows }
    }

    pub fn graph_arc(&self) -> &Arc<GradedGraph> {
        &self.graph
    }

    pub fn row(&self, x: VertexId) -> Option<&[CoEntry]> {
        self.rows.get(x.level)?.get(x.index)?.as_deref()
    }

    /// Vertices on levels >= 1 whose rows are unspecified.
    pub fn unspecified(&self) -> Vec<VertexId> {
        self.graph
            .vertices()
            .filter(|v| v.level > 0 && self.rows[v.level][v.index].is_none())
            .collect()
    }

    /// Specified rows keyed by target vertex.
    pub fn to_table(&self) -> BTreeMap<VertexId, Vec<CoEntry>> {
        self.graph
            .vertices()
            .filter(|v| v.level > 0)
            .filter_map(|v| Some((v, self.row(v)?.to_vec())))
            .collect()
    }
}

fn empty_rows(graph: &GradedGraph) -> Vec<Vec<Option<Vec<CoEntry>>>> {
    (0..graph.depth())
        .map(|level| {
            (0..graph.level_len(level))
                .map(|_| (level == 0).then(Vec::new))
                .collect()
        })
        .collect()
}

fn normalize_row(graph: &GradedGraph, x: VertexId, given: &[CoEntry]) -> Result<Vec<CoEntry>> {
    let bad = |reason: alloc::string::String| Error::BadRow {
        vertex: graph.label(x),
        reason,
    };
    let mut slots: BTreeMap<(usize, u64), Option<Rational>> = BTreeMap::new();
    for a in graph.predecessors(x).iter() {
        for e in 0..a.mult {
            slots.insert((a.index, e), None);
        }
    }
    let mut sum = Rational::zero();
    for entry in given {
        let from_label = if entry.from < graph.level_len(x.level - 1) {
            graph.label(VertexId::new(x.level - 1, entry.from))
        } else {
            format!("#{}", entry.from)
        };
        let slot = slots.get_mut(&(entry.from, entry.edge)).ok_or_else(|| {
            bad(format!(
                "probability on non-edge from {from_label} (edge {})",
                entry.edge
            ))
        })?;
        if slot.is_some() {
            return Err(bad(format!(
                "duplicate entry for {from_label} (edge {})",
                entry.edge
            )));
        }
        if entry.prob.is_negative() {
            return Err(bad(format!(
                "negative probability {} from {from_label}",
                format_rational(&entry.prob)
            )));
        }
        sum += &entry.prob;
        *slot = Some(entry.prob.clone());
    }
    if !sum.is_one() {
        return Err(bad(format!("sums to {}", format_rational(&sum))));
    }
    Ok(slots
        .into_iter()
        .map(|((from, edge), p)| CoEntry {
            from,
            edge,
            prob: p.unwrap_or_else(Rational::zero),
        })
        .collect())
}

impl Equipment for CotransitionSystem {
    type Graph = GradedGraph;

    fn graph(&self) -> &GradedGraph {
        &self.graph
    }

    fn cotransitions(&self, x: VertexId) -> Option<Cow<'_, [CoEntry]>> {
        self.row(x).map(Cow::Borrowed)
    }
}

/// The central equipment: every entering edge of `x` gets probability
/// `dim(y) / dim(x)`, where `dim` counts paths from level 0. Its cocycle is
/// identically one on pairs with a common starting vertex, i.e. all
/// conditional measures are uniform.
pub fn central_equipment(graph: Arc<GradedGraph>) -> Result<CotransitionSystem> {
    let dims = graph.dimensions();
    let mut rows = empty_rows(&graph);
    for x in graph.vertices().filter(|v| v.level > 0) {
        let total = &dims[x.level][x.index];
        if total.is_zero() {
            return Err(Error::Unreachable(graph.label(x)));
        }
        let mut row = Vec::new();
        for a in graph.predecessors(x).iter() {
            let p = from_biguint_ratio(&dims[x.level - 1][a.index], total);
            for edge in 0..a.mult {
                row.push(CoEntry {
                    from: a.index,
                    edge,
                    prob: p.clone(),
                });
            }
        }
        rows[x.level][x.index] = Some(row);
    }
    Ok(CotransitionSystem { graph, rows })
}

/// A random valid equipment: integer weights in `0..4` per entering edge
/// (at least one positive), normalized. Zero entries are deliberate; they
/// exercise the undefined-cocycle paths.
pub fn random_equipment<R: RngCore>(graph: Arc<GradedGraph>, rng: &mut R) -> CotransitionSystem {
    let mut rows = empty_rows(&graph);
    for x in graph.vertices().filter(|v| v.level > 0) {
        let mut slots = Vec::new();
        for a in graph.predecessors(x).iter() {
            for edge in 0..a.mult {
                slots.push((a.index, edge, (rng.next_u32() % 4) as i64));
            }
        }
        if slots.iter().all(|s| s.2 == 0) {
            let pick = rng.next_u32() as usize % slots.len();
            slots[pick].2 = 1;
        }
        let total: i64 = slots.iter().map(|s| s.2).sum();
        rows[x.level][x.index] = Some(
            slots
                .into_iter()
                .map(|(from, edge, w)| CoEntry {
                    from,
                    edge,
                    prob: ratio(w, total),
                })
                .collect(),
        );
    }
    CotransitionSystem { graph, rows }
}

/// Central equipment on the implicit Pascal graph, in closed form:
/// entering `(n, k)` from `(n-1, k-1)` has probability `k/n`, from
/// `(n-1, k)` probability `(n-k)/n`.
#[derive(Clone, Copy, Debug)]
pub struct PascalCentral {
    pascal: Pascal,
}

impl PascalCentral {
    pub fn new(pascal: Pascal) -> Self {
        PascalCentral { pascal }
    }
}

impl Equipment for PascalCentral {
    type Graph = Pascal;

    fn graph(&self) -> &Pascal {
        &self.pascal
    }

    fn cotransitions(&self, x: VertexId) -> Option<Cow<'_, [CoEntry]>> {
        if !self.pascal.contains(x) {
            return None;
        }
        let (n, k) = (x.level as i64, x.index as i64);
        let mut row = Vec::with_capacity(2);
        if k > 0 {
            row.push(CoEntry {
                from: x.index - 1,
                edge: 0,
                prob: ratio(k, n),
            });
        }
        if k < n {
            row.push(CoEntry {
                from: x.index,
                edge: 0,
                prob: ratio(n - k, n),
            });
        }
        Some(Cow::Owned(row))
    }
}

/// Value of a cocycle on a pair of paths. Pairs involving zero-probability
/// cotransitions in the denominator have no value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CocycleValue {
    Value(Rational),
    Undefined,
}

impl CocycleValue {
    pub fn one() -> Self {
        CocycleValue::Value(Rational::one())
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            CocycleValue::Value(v) => Some(v),
            CocycleValue::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, CocycleValue::Value(_))
    }

    pub(crate) fn quotient(numer: Rational, denom: Rational) -> Self {
        if denom.is_zero() {
            CocycleValue::Undefined
        } else {
            CocycleValue::Value(numer / denom)
        }
    }
}

impl fmt::Display for CocycleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleValue::Value(v) => f.write_str(&format_rational(v)),
            CocycleValue::Undefined => f.write_str("undefined"),
        }
    }
}

/// Anything that assigns values to tail-equivalent pairs of paths.
pub trait Cocycle {
    fn eval(&self, p: &FinitePath, q: &FinitePath) -> Result<CocycleValue>;
}

impl<E: Equipment> Cocycle for E {
    fn eval(&self, p: &FinitePath, q: &FinitePath) -> Result<CocycleValue> {
        cocycle_eval(self, p, q)
    }
}

/// Checks that `p` and `q` both start on level 0 and end at the same vertex,
/// and returns the first level from which they coincide (vertices and edge
/// choices).
pub(crate) fn merge_level<D: Diagram + ?Sized>(
    graph: &D,
    p: &FinitePath,
    q: &FinitePath,
) -> Result<usize> {
    p.check_in(graph)?;
    q.check_in(graph)?;
    if p.start_level() != 0 || q.start_level() != 0 {
        return Err(Error::NotTailEquivalent(
            "paths must start on level 0".into(),
        ));
    }
    if p.endpoint() != q.endpoint() {
        return Err(Error::NotTailEquivalent(format!(
            "paths end at {} (level {}) and {} (level {})",
            graph.label(p.endpoint()),
            p.end_level(),
            graph.label(q.endpoint()),
            q.end_level()
        )));
    }
    let mut m = p.end_level();
    while m > 0 && p.indices()[m - 1] == q.indices()[m - 1] && p.edges()[m - 1] == q.edges()[m - 1]
    {
        m -= 1;
    }
    Ok(m)
}

/// Product of the cotransition probabilities of the first `steps` steps of
/// `p`; `None` if a needed row is unspecified.
fn backward_weight<E: Equipment + ?Sized>(
    sys: &E,
    p: &FinitePath,
    steps: usize,
) -> Option<Rational> {
    let mut w = Rational::one();
    for i in 0..steps {
        let x = VertexId::new(i + 1, p.indices()[i + 1]);
        let c = sys.cotransition(x, p.indices()[i], p.edges()[i])?;
        if c.is_zero() {
            return Some(c);
        }
        w *= c;
    }
    Some(w)
}

/// The Markov cocycle of a cotransition system on a tail-equivalent pair:
/// the ratio of cotransition products over the levels below the level
/// where the paths merge.
pub fn cocycle_eval<E: Equipment + ?Sized>(
    sys: &E,
    p: &FinitePath,
    q: &FinitePath,
) -> Result<CocycleValue> {
    let merge = merge_level(sys.graph(), p, q)?;
    let (Some(numer), Some(denom)) = (
        backward_weight(sys, p, merge),
        backward_weight(sys, q, merge),
    ) else {
        return Ok(CocycleValue::Undefined);
    };
    Ok(CocycleValue::quotient(numer, denom))
}

/// Explicit cocycle values on enumerated pairs. Useful for checking the
/// axioms on cocycles that do not come from a cotransition system.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleTable {
    entries: BTreeMap<(FinitePath, FinitePath), CocycleValue>,
}

impl CocycleTable {
    /// Tabulates `cocycle` on every pair of paths from level 0 that end at a
    /// common vertex on a level below `level_bound`.
    pub fn tabulate<D, C>(graph: &D, cocycle: &C, level_bound: usize, cap: usize) -> Result<Self>
    where
        D: Diagram + ?Sized,
        C: Cocycle + ?Sized,
    {
        let mut entries = BTreeMap::new();
        for_each_class(graph, level_bound, cap, |paths| {
            for p in paths {
                for q in paths {
                    entries.insert((p.clone(), q.clone()), cocycle.eval(p, q)?);
                }
            }
            Ok(())
        })?;
        Ok(CocycleTable { entries })
    }

    pub fn set(&mut self, p: FinitePath, q: FinitePath, value: CocycleValue) {
        self.entries.insert((p, q), value);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Cocycle for CocycleTable {
    fn eval(&self, p: &FinitePath, q: &FinitePath) -> Result<CocycleValue> {
        self.entries
            .get(&(p.clone(), q.clone()))
            .cloned()
            .ok_or_else(|| Error::NotTailEquivalent("pair not in table".into()))
    }
}

/// Runs `f` on each class of paths from level 0 into a common vertex, for
/// every vertex on levels `0..min(level_bound, depth)`.
pub(crate) fn for_each_class<D, F>(
    graph: &D,
    level_bound: usize,
    cap: usize,
    mut f: F,
) -> Result<()>
where
    D: Diagram + ?Sized,
    F: FnMut(&[FinitePath]) -> Result<()>,
{
    for level in 0..level_bound.min(graph.depth()) {
        for index in 0..graph.level_len(level) {
            let paths = paths_into(graph, VertexId::new(level, index), cap)?;
            f(&paths)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    Identity {
        path: FinitePath,
        value: CocycleValue,
    },
    Inverse {
        p: FinitePath,
        q: FinitePath,
        forward: CocycleValue,
        backward: CocycleValue,
    },
    Multiplicative {
        p: FinitePath,
        q: FinitePath,
        r: FinitePath,
        pq: CocycleValue,
        qr: CocycleValue,
        pr: CocycleValue,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub paths: usize,
    pub pairs: usize,
    pub undefined_pairs: usize,
    pub triples: usize,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustively checks `ρ(p,p) = 1`, `ρ(p,q)·ρ(q,p) = 1` and
/// `ρ(p,q)·ρ(q,r) = ρ(p,r)` over all tail-equivalent paths from level 0 into
/// vertices on levels below `level_bound`. Undefined values (null paths) are
/// skipped, except that a defined product must have a defined composite.
/// Stops at the first counterexample.
pub fn check_cocycle_axioms<D, C>(
    graph: &D,
    cocycle: &C,
    level_bound: usize,
    cap: usize,
) -> Result<AxiomReport>
where
    D: Diagram + ?Sized,
    C: Cocycle + ?Sized,
{
    let mut report = AxiomReport::default();
    let one = Rational::one();
    for_each_class(graph, level_bound, cap, |paths| {
        if report.violation.is_some() {
            return Ok(());
        }
        let n = paths.len();
        report.paths += n;
        let mut table = Vec::with_capacity(n * n);
        for p in paths {
            for q in paths {
                table.push(cocycle.eval(p, q)?);
            }
        }
        let at = |i: usize, j: usize| &table[i * n + j];
        for i in 0..n {
            if at(i, i).is_defined() && at(i, i) != &CocycleValue::one() {
                report.violation = Some(AxiomViolation::Identity {
                    path: paths[i].clone(),
                    value: at(i, i).clone(),
                });
                return Ok(());
            }
        }
        for i in 0..n {
            for j in 0..n {
                report.pairs += 1;
                let (f, b) = (at(i, j), at(j, i));
                let ok = match (f.value(), b.value()) {
                    (Some(x), Some(y)) => x * y == one,
                    (Some(x), None) => x.is_zero(),
                    (None, Some(y)) => y.is_zero(),
                    (None, None) => {
                        report.undefined_pairs += 1;
                        true
                    }
                };
                if !ok {
                    report.violation = Some(AxiomViolation::Inverse {
                        p: paths[i].clone(),
                        q: paths[j].clone(),
                        forward: f.clone(),
                        backward: b.clone(),
                    });
                    return Ok(());
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let Some(pq) = at(i, j).value() else { continue };
                for k in 0..n {
                    let Some(qr) = at(j, k).value() else { continue };
                    report.triples += 1;
                    let pr = at(i, k);
                    if pr.value() != Some(&(pq * qr)) {
                        report.violation = Some(AxiomViolation::Multiplicative {
                            p: paths[i].clone(),
                            q: paths[j].clone(),
                            r: paths[k].clone(),
                            pq: at(i, j).clone(),
                            qr: at(j, k).clone(),
                            pr: pr.clone(),
                        });
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_graph::{pascal_graph, young_graph};
    use crate::stream::stream_rng;
    use alloc::vec;

    fn pascal(depth: usize) -> Arc<GradedGraph> {
        Arc::new(pascal_graph(depth).unwrap())
    }

    fn path(v: &[usize]) -> FinitePath {
        FinitePath::simple(0, v.to_vec()).unwrap()
    }

    #[test]
    fn central_rows_on_young() {
        let g = Arc::new(young_graph(4).unwrap());
        let sys = central_equipment(g.clone()).unwrap();
        let x = g.find("(2,1)").unwrap();
        let two = g.find("(2)").unwrap().index;
        let one_one = g.find("(1,1)").unwrap().index;
        assert_eq!(sys.cotransition(x, two, 0), Some(ratio(1, 2)));
        assert_eq!(sys.cotransition(x, one_one, 0), Some(ratio(1, 2)));
    }

    #[test]
    fn central_rows_on_pascal() {
        let g = pascal(4);
        let sys = central_equipment(g.clone()).unwrap();
        let x10 = g.find("1,0").unwrap();
        assert_eq!(
            sys.row(x10).unwrap(),
            [CoEntry {
                from: 0,
                edge: 0,
                prob: ratio(1, 1)
            }]
        );
        let x21 = g.find("2,1").unwrap();
        assert_eq!(sys.cotransition(x21, 0, 0), Some(ratio(1, 2)));
        assert_eq!(sys.cotransition(x21, 1, 0), Some(ratio(1, 2)));
    }

    #[test]
    fn closed_form_pascal_matches_generic_central() {
        let g = pascal(9);
        let sys = central_equipment(g.clone()).unwrap();
        let implicit = PascalCentral::new(Pascal::new(9).unwrap());
        for x in g.vertices().filter(|v| v.level > 0) {
            assert_eq!(
                implicit.cotransitions(x).unwrap().as_ref(),
                sys.row(x).unwrap()
            );
        }
    }

    #[test]
    fn table_round_trip_and_errors() {
        let g = pascal(4);
        let sys = central_equipment(g.clone()).unwrap();
        let table = sys.to_table();
        assert_eq!(
            CotransitionSystem::from_table(g.clone(), &table).unwrap(),
            sys
        );

        let x = g.find("2,1").unwrap();
        let mut short = table.clone();
        short.get_mut(&x).unwrap()[0].prob = ratio(2, 5);
        match CotransitionSystem::from_table(g.clone(), &short) {
            Err(Error::BadRow { vertex, reason }) => {
                assert_eq!(vertex, "2,1");
                assert!(reason.contains("9/10"), "{reason}");
            }
            other => panic!("{other:?}"),
        }

        let mut off = table.clone();
        let x20 = g.find("2,0").unwrap();
        off.get_mut(&x20).unwrap().push(CoEntry {
            from: 1,
            edge: 0,
            prob: ratio(0, 1),
        });
        assert!(matches!(
            CotransitionSystem::from_table(g.clone(), &off),
            Err(Error::BadRow { .. })
        ));

        let mut missing = table;
        missing.remove(&x);
        assert_eq!(
            CotransitionSystem::from_table(g, &missing),
            Err(Error::MissingRow("2,1".into()))
        );
    }

    #[test]
    fn cocycle_examples() {
        let g = pascal(4);
        let central = central_equipment(g.clone()).unwrap();
        let p = path(&[0, 0, 1]);
        let q = path(&[0, 1, 1]);
        assert_eq!(cocycle_eval(&central, &p, &q).unwrap(), CocycleValue::one());
        assert_eq!(cocycle_eval(&central, &p, &p).unwrap(), CocycleValue::one());

        let mut table = central.to_table();
        let x = g.find("2,1").unwrap();
        table.insert(
            x,
            vec![
                CoEntry {
                    from: 0,
                    edge: 0,
                    prob: ratio(1, 3),
                },
                CoEntry {
                    from: 1,
                    edge: 0,
                    prob: ratio(2, 3),
                },
            ],
        );
        let skewed = CotransitionSystem::from_table(g, &table).unwrap();
        assert_eq!(
            cocycle_eval(&skewed, &p, &q).unwrap(),
            CocycleValue::Value(ratio(1, 2))
        );
        assert!(matches!(
            cocycle_eval(&skewed, &p, &path(&[0, 1, 2])),
            Err(Error::NotTailEquivalent(_))
        ));
    }

    #[test]
    fn zero_denominator_is_undefined() {
        let g = pascal(4);
        let mut table = central_equipment(g.clone()).unwrap().to_table();
        let x = g.find("2,1").unwrap();
        table.insert(
            x,
            vec![
                CoEntry {
                    from: 0,
                    edge: 0,
                    prob: ratio(1, 1),
                },
                CoEntry {
                    from: 1,
                    edge: 0,
                    prob: ratio(0, 1),
                },
            ],
        );
        let sys = CotransitionSystem::from_table(g, &table).unwrap();
        let p = path(&[0, 0, 1]);
        let q = path(&[0, 1, 1]);
        assert_eq!(cocycle_eval(&sys, &p, &q).unwrap(), CocycleValue::Undefined);
        assert_eq!(
            cocycle_eval(&sys, &q, &p).unwrap(),
            CocycleValue::Value(ratio(0, 1))
        );
    }

    #[test]
    fn axioms_hold_for_central_and_random() {
        let g = pascal(5);
        let central = central_equipment(g.clone()).unwrap();
        let report = check_cocycle_axioms(g.as_ref(), &central, 5, 1000).unwrap();
        assert!(report.passed());
        assert!(report.triples > 0);

        let y = Arc::new(young_graph(5).unwrap());
        let mut rng = stream_rng(7, 0);
        for _ in 0..5 {
            let sys = random_equipment(y.clone(), &mut rng);
            assert!(check_cocycle_axioms(y.as_ref(), &sys, 5, 1000)
                .unwrap()
                .passed());
        }
    }

    #[test]
    fn corrupted_table_reports_counterexample() {
        let g = pascal(5);
        let central = central_equipment(g.clone()).unwrap();
        let mut table = CocycleTable::tabulate(g.as_ref(), &central, 5, 1000).unwrap();
        let p = path(&[0, 0, 1, 2]);
        let q = path(&[0, 1, 1, 2]);
        table.set(p, q, CocycleValue::Value(ratio(2, 1)));
        let report = check_cocycle_axioms(g.as_ref(), &table, 5, 1000).unwrap();
        assert!(matches!(
            report.violation,
            Some(AxiomViolation::Inverse { .. })
        ));
    }

    #[test]
    fn random_equipment_is_valid() {
        let g = Arc::new(young_graph(6).unwrap());
        let sys = random_equipment(g.clone(), &mut stream_rng(1, 2));
        assert_eq!(
            CotransitionSystem::from_table(g, &sys.to_table()).unwrap(),
            sys
        );
    }

    #[test]
    fn parallel_edges_get_their_own_entries() {
        use crate::graded_graph::{EdgeSpec, GraphSpec};
        let spec = GraphSpec {
            levels: vec![
                vec!["r".into()],
                vec!["a".into(), "b".into()],
                vec!["c".into()],
            ],
            edges: vec![
                EdgeSpec {
                    from: "r".into(),
                    to: "a".into(),
                    mult: 1,
                },
                EdgeSpec {
                    from: "r".into(),
                    to: "b".into(),
                    mult: 1,
                },
                EdgeSpec {
                    from: "a".into(),
                    to: "c".into(),
                    mult: 2,
                },
                EdgeSpec {
                    from: "b".into(),
                    to: "c".into(),
                    mult: 1,
                },
            ],
        };
        let g = Arc::new(GradedGraph::from_spec(&spec).unwrap());
        let sys = central_equipment(g.clone()).unwrap();
        let c = g.find("c").unwrap();
        assert_eq!(sys.row(c).unwrap().len(), 3);
        assert!(sys.row(c).unwrap().iter().all(|e| e.prob == ratio(1, 3)));
        let p = FinitePath::new(0, vec![0, 0, 0], vec![0, 0]).unwrap();
        let q = FinitePath::new(0, vec![0, 0, 0], vec![0, 1]).unwrap();
        assert_eq!(cocycle_eval(&sys, &p, &q).unwrap(), CocycleValue::one());
        assert!(check_cocycle_axioms(g.as_ref(), &sys, 3, 100)
            .unwrap()
            .passed());
    }
}
