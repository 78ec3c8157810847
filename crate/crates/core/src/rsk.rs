//! Robinson–Schensted–Knuth insertion and the pushforward of i.i.d. letter
//! sequences to paths in the Young graph.
//!
//! The recording tableau of a word grows one box per letter, so its shape
//! sequence is a Young-graph path. For i.i.d. letters the resulting path
//! measure is central, with row frequencies given by the letter atoms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Float, One, Signed, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::graded_graph::{young_graph, Diagram, FinitePath, GradedGraph, VertexId};
use crate::markov_measure::{require_builtin, single_root, MarkovMeasure, Step};
use crate::partition::Partition;
use crate::rational::{format_rational, from_biguint_ratio, pick_by_threshold, Rational};
use crate::stream::stream_rng;

/// A box position, both coordinates counted from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tableau<T> {
    rows: Vec<Vec<T>>,
}

impl<T> Default for Tableau<T> {
    fn default() -> Self {
        Tableau { rows: Vec::new() }
    }
}

impl<T: Ord + Clone> Tableau<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accepts only semistandard fillings of a partition shape.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let t = Tableau { rows };
        t.is_semistandard().then_some(t)
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(Vec::len).collect()).expect("tableau rows decrease")
    }

    pub fn is_semistandard(&self) -> bool {
        let shape_ok = self.rows.iter().all(|r| !r.is_empty())
            && self.rows.windows(2).all(|w| w[0].len() >= w[1].len());
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|p| p[0] <= p[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(below, above)| above < below));
        shape_ok && rows_ok && cols_ok
    }

    /// Schensted row insertion in place: `x` replaces the leftmost entry
    /// strictly greater than it, which is bumped to the next row.
    pub fn insert(&mut self, mut x: T) -> Cell {
        for (row, entries) in self.rows.iter_mut().enumerate() {
            let col = entries.partition_point(|y| *y <= x);
            if col == entries.len() {
                entries.push(x);
                return Cell { row, col };
            }
            core::mem::swap(&mut entries[col], &mut x);
        }
        self.rows.push(vec![x]);
        Cell {
            row: self.rows.len() - 1,
            col: 0,
        }
    }

    fn place(&mut self, cell: Cell, x: T) {
        if cell.row == self.rows.len() {
            self.rows.push(Vec::new());
        }
        debug_assert_eq!(self.rows[cell.row].len(), cell.col);
        self.rows[cell.row].push(x);
    }
}

impl Tableau<usize> {
    /// Entries `1..=n` once each, strictly increasing along rows and columns.
    pub fn is_standard(&self) -> bool {
        let mut seen: Vec<usize> = self.rows.iter().flatten().copied().collect();
        seen.sort_unstable();
        self.is_semistandard()
            && seen.iter().copied().eq(1..=self.size())
            && self.rows.iter().all(|r| r.windows(2).all(|p| p[0] < p[1]))
    }
}

impl<T: fmt::Display> fmt::Display for Tableau<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn row_insert<T: Ord + Clone>(t: &Tableau<T>, x: T) -> (Tableau<T>, Cell) {
    let mut t = t.clone();
    let cell = t.insert(x);
    (t, cell)
}

/// Insertion tableau `P` and recording tableau `Q` of a word.
pub fn rsk_pair<T: Ord + Clone>(word: &[T]) -> (Tableau<T>, Tableau<usize>) {
    let mut p = Tableau::new();
    let mut q = Tableau::new();
    for (i, x) in word.iter().enumerate() {
        let cell = p.insert(x.clone());
        q.place(cell, i + 1);
    }
    (p, q)
}

/// The shape growth of the recording tableau.
pub fn q_shape_path<T: Ord + Clone>(word: &[T]) -> YoungPath {
    let mut p = Tableau::new();
    YoungPath {
        steps: word.iter().map(|x| p.insert(x.clone()).row).collect(),
    }
}

/// A Young-graph path from the empty partition, stored as the row receiving
/// each new box. Equivalent to a standard tableau.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YoungPath {
    steps: Vec<usize>,
}

impl YoungPath {
    pub fn from_rows(steps: Vec<usize>) -> Option<Self> {
        let mut shape: Vec<usize> = Vec::new();
        for &row in &steps {
            match row.cmp(&shape.len()) {
                core::cmp::Ordering::Less if row == 0 || shape[row - 1] > shape[row] => {
                    shape[row] += 1
                }
                core::cmp::Ordering::Equal => shape.push(1),
                _ => return None,
            }
        }
        Some(YoungPath { steps })
    }

    /// From `∅ = λ(0) ⊂ λ(1) ⊂ ...`, each adding one box.
    pub fn from_shapes(shapes: &[Partition]) -> Option<Self> {
        if shapes.first()? != &Partition::empty() {
            return None;
        }
        let steps = shapes
            .windows(2)
            .map(|w| w[0].box_added_to(&w[1]))
            .collect::<Option<Vec<_>>>()?;
        Some(YoungPath { steps })
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn shapes(&self) -> Vec<Partition> {
        let mut current = Partition::empty();
        let mut out = vec![current.clone()];
        for &row in &self.steps {
            current = current.with_box(row).expect("valid path");
            out.push(current.clone());
        }
        out
    }

    pub fn final_shape(&self) -> Partition {
        let mut rows: Vec<usize> = Vec::new();
        for &row in &self.steps {
            if row == rows.len() {
                rows.push(0);
            }
            rows[row] += 1;
        }
        Partition::new(rows).expect("valid path")
    }

    /// Standard tableau recording where box `k` was added.
    pub fn tableau(&self) -> Tableau<usize> {
        let mut t = Tableau::new();
        let mut lengths: Vec<usize> = Vec::new();
        for (i, &row) in self.steps.iter().enumerate() {
            if row == lengths.len() {
                lengths.push(0);
            }
            t.place(
                Cell {
                    row,
                    col: lengths[row],
                },
                i + 1,
            );
            lengths[row] += 1;
        }
        t
    }

    /// The same path in a materialized Young graph, looked up by label.
    pub fn to_finite_path<D: Diagram + ?Sized>(&self, graph: &D) -> Result<FinitePath> {
        let mut indices = Vec::with_capacity(self.steps.len() + 1);
        for shape in self.shapes() {
            let label = format!("{shape}");
            let v = graph.find(&label).ok_or(Error::UnknownVertex(label))?;
            indices.push(v.index);
        }
        let p = FinitePath::simple(0, indices)?;
        p.check_in(graph)?;
        Ok(p)
    }

    pub fn from_finite_path(graph: &GradedGraph, p: &FinitePath) -> Result<Self> {
        let shapes = (p.start_level()..=p.end_level())
            .map(|l| {
                let v = p.at(l).expect("level within path");
                graph.label_of(v).parse::<Partition>().map_err(|_| {
                    Error::MalformedPath(format!("{} is not a partition", graph.label_of(v)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_shapes(&shapes)
            .ok_or_else(|| Error::MalformedPath("not a Young path from the empty shape".into()))
    }
}

impl fmt::Display for YoungPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, shape) in self.shapes().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{shape}")?;
        }
        Ok(())
    }
}

/// A letter of a random word. Atoms are ordered by index; continuous letters
/// sit above all atoms and are ordered by an independent uniform draw, with
/// the position in the word breaking the (probability zero) remaining ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Atom(usize),
    Continuous(u64, u64),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Atom(i) => write!(f, "a{}", i + 1),
            Letter::Continuous(draw, _) => write!(f, "c{draw:016x}"),
        }
    }
}

/// Atoms `α_1 ≥ α_2 ≥ ... ≥ 0` with `Σα ≤ 1`; the rest `γ = 1 - Σα` is
/// continuous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterDistribution {
    atoms: Vec<Rational>,
    continuous: Rational,
}

impl LetterDistribution {
    pub fn new(atoms: Vec<Rational>) -> Result<Self> {
        if let Some(a) = atoms.iter().find(|a| a.is_negative()) {
            return Err(Error::BadLetterDistribution(format!(
                "negative atom {}",
                format_rational(a)
            )));
        }
        if atoms.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadLetterDistribution(
                "atoms must be nonincreasing".into(),
            ));
        }
        let total: Rational = atoms.iter().sum();
        if total > Rational::one() {
            return Err(Error::BadLetterDistribution(format!(
                "atoms sum to {}",
                format_rational(&total)
            )));
        }
        Ok(LetterDistribution {
            atoms,
            continuous: Rational::one() - total,
        })
    }

    /// The purely continuous distribution (`γ = 1`).
    pub fn continuous() -> Self {
        LetterDistribution {
            atoms: Vec::new(),
            continuous: Rational::one(),
        }
    }

    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn continuous_mass(&self) -> &Rational {
        &self.continuous
    }

    /// `position` tags continuous letters so they are pairwise distinct.
    pub fn sample_letter<R: RngCore + ?Sized>(&self, rng: &mut R, position: u64) -> Letter {
        let u = rng.next_u64();
        let j = pick_by_threshold(
            self.atoms.iter().chain(core::iter::once(&self.continuous)),
            u,
        )
        .expect("distribution has positive mass");
        if j < self.atoms.len() {
            Letter::Atom(j)
        } else {
            Letter::Continuous(rng.next_u64(), position)
        }
    }

    pub fn sample_word<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Letter> {
        (0..n as u64).map(|i| self.sample_letter(rng, i)).collect()
    }
}

/// Shape path of an i.i.d. word of length `n` drawn from stream 0 of `seed`.
pub fn pushforward_sample(dist: &LetterDistribution, n: usize, seed: u64) -> YoungPath {
    pushforward_with(dist, n, &mut stream_rng(seed, 0))
}

pub fn pushforward_with<R: RngCore + ?Sized>(
    dist: &LetterDistribution,
    n: usize,
    rng: &mut R,
) -> YoungPath {
    let mut p = Tableau::new();
    let steps = (0..n as u64)
        .map(|i| p.insert(dist.sample_letter(rng, i)).row)
        .collect();
    YoungPath { steps }
}

/// Path `i` uses stream `i` of `seed`.
pub fn pushforward_samples(
    dist: &LetterDistribution,
    n: usize,
    count: usize,
    seed: u64,
) -> Vec<YoungPath> {
    (0..count)
        .map(|i| pushforward_with(dist, n, &mut stream_rng(seed, i as u64)))
        .collect()
}

/// Exact law of the shape path of an i.i.d. word of length `n` over the
/// alphabet `0..probs.len()`, by enumerating all words.
pub fn pushforward_exact(probs: &[Rational], n: usize) -> Result<BTreeMap<YoungPath, Rational>> {
    if probs.is_empty()
        || probs.iter().any(Signed::is_negative)
        || probs.iter().sum::<Rational>() != Rational::one()
    {
        return Err(Error::BadLetterDistribution(
            "letter probabilities must be nonnegative and sum to 1".into(),
        ));
    }
    let letters = probs.len();
    let count = letters
        .checked_pow(n as u32)
        .ok_or_else(|| Error::CapExceeded {
            count: format!("{letters}^{n}"),
            cap: usize::MAX,
        })?;
    let mut law = BTreeMap::new();
    let mut word = vec![0usize; n];
    for code in 0..count {
        let mut rest = code;
        let mut weight = Rational::one();
        for slot in word.iter_mut().rev() {
            *slot = rest % letters;
            rest /= letters;
            weight *= &probs[*slot];
        }
        if weight.is_zero() {
            continue;
        }
        *law.entry(q_shape_path(&word))
            .or_insert_with(Rational::zero) += weight;
    }
    Ok(law)
}

/// Row or column frequencies `mean(len_i(λ(n)) / n)` with standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyEstimate {
    pub level: usize,
    pub samples: usize,
    /// `(mean, stderr)` for rows (or columns) `1..=cap`.
    pub values: Vec<(f64, f64)>,
}

pub const DEFAULT_ROW_CAP: usize = 10;

/// Estimates the Thoma row frequencies `α_i` from paths of equal length.
pub fn thoma_frequency_estimate(paths: &[YoungPath], row_cap: usize) -> Result<FrequencyEstimate> {
    frequency_estimate(paths, row_cap, |shape, i| shape.row(i))
}

/// Column frequencies, for exploration of the dual parameters.
pub fn column_frequency_estimate(paths: &[YoungPath], cap: usize) -> Result<FrequencyEstimate> {
    frequency_estimate(paths, cap, |shape, i| shape.column(i))
}

fn frequency_estimate(
    paths: &[YoungPath],
    cap: usize,
    length: impl Fn(&Partition, usize) -> usize,
) -> Result<FrequencyEstimate> {
    let first = paths.first().ok_or(Error::EmptySample)?;
    let n = first.len();
    if paths.iter().any(|p| p.len() != n) {
        return Err(Error::UnequalLengths);
    }
    let shapes: Vec<Partition> = paths.iter().map(YoungPath::final_shape).collect();
    let count = paths.len() as f64;
    let scale = n.max(1) as f64;
    let values = (0..cap)
        .map(|i| {
            let xs: Vec<f64> = shapes.iter().map(|s| length(s, i) as f64 / scale).collect();
            let mean = xs.iter().sum::<f64>() / count;
            let stderr = if paths.len() > 1 {
                let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1.0);
                Float::sqrt(var / count)
            } else {
                0.0
            };
            (mean, stderr)
        })
        .collect();
    Ok(FrequencyEstimate {
        level: n,
        samples: paths.len(),
        values,
    })
}

/// `s_λ(x_1, ..., x_m)` by the branching rule over horizontal strips.
pub fn schur_polynomial(shape: &Partition, xs: &[Rational]) -> Rational {
    let mut memo = BTreeMap::new();
    schur_rec(shape.parts(), xs, &mut memo)
}

fn schur_rec(
    parts: &[usize],
    xs: &[Rational],
    memo: &mut BTreeMap<(Vec<usize>, usize), Rational>,
) -> Rational {
    if parts.is_empty() {
        return Rational::one();
    }
    if parts.len() > xs.len() {
        return Rational::zero();
    }
    let key = (parts.to_vec(), xs.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let (last, rest) = xs.split_last().expect("nonempty");
    let total: usize = parts.iter().sum();
    // μ interlaces λ: λ_{i+1} <= μ_i <= λ_i
    let mut sum = Rational::zero();
    let mut mu = vec![0usize; parts.len()];
    interlacing(parts, 0, &mut mu, &mut |mu| {
        let trimmed: Vec<usize> = mu.iter().copied().take_while(|&x| x > 0).collect();
        let strip = total - trimmed.iter().sum::<usize>();
        let inner = schur_rec(&trimmed, rest, memo);
        if !inner.is_zero() {
            sum += inner * pow(last, strip);
        }
    });
    memo.insert(key, sum.clone());
    sum
}

fn interlacing(parts: &[usize], i: usize, mu: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if i == parts.len() {
        f(mu);
        return;
    }
    let low = parts.get(i + 1).copied().unwrap_or(0);
    for v in low..=parts[i] {
        mu[i] = v;
        interlacing(parts, i + 1, mu, f);
    }
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// The central measure on the Young graph with atoms `α` summing to 1:
/// `P(λ → Λ) = s_Λ(α) / s_λ(α)`. Use the Plancherel measure for `γ = 1`.
///
/// Shapes with `s_λ(α) = 0` (more rows than positive atoms) are never
/// reached; they receive Plancherel rows to keep the chain well defined.
pub fn thoma_measure(graph: Arc<GradedGraph>, atoms: &[Rational]) -> Result<MarkovMeasure> {
    let dist = LetterDistribution::new(atoms.to_vec())?;
    if !dist.continuous_mass().is_zero() {
        return Err(Error::BadLetterDistribution("atoms must sum to 1".into()));
    }
    require_builtin(&graph, young_graph(graph.depth()), "Young")?;
    let shapes: Vec<Vec<Partition>> = (0..graph.depth())
        .map(|level| {
            graph
                .labels(level)
                .iter()
                .map(|l| l.parse().expect("Young labels are partitions"))
                .collect()
        })
        .collect();
    let values: Vec<Vec<Rational>> = shapes
        .iter()
        .map(|level| level.iter().map(|s| schur_polynomial(s, atoms)).collect())
        .collect();
    let dims = graph.dimensions();
    let g = graph.clone();
    MarkovMeasure::from_fn(graph, single_root(&g), |v| {
        let here = &values[v.level][v.index];
        g.successors(v)
            .iter()
            .map(|a| {
                let prob = if here.is_zero() {
                    from_biguint_ratio(
                        &dims[v.level + 1][a.index],
                        &(&dims[v.level][v.index] * (v.level + 1)),
                    )
                } else {
                    &values[v.level + 1][a.index] / here
                };
                Step {
                    to: a.index,
                    edge: 0,
                    prob,
                }
            })
            .collect()
    })
}

/// Level of a Young path's endpoint in a materialized Young graph.
pub fn endpoint_vertex(graph: &GradedGraph, path: &YoungPath) -> Result<VertexId> {
    let label = format!("{}", path.final_shape());
    graph.find(&label).ok_or(Error::UnknownVertex(label))
}
