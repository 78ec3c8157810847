//! The ergodic method.
//!
//! Conditioning a path on passing through a far vertex `w_N` gives a
//! probability measure on initial segments: the Martin kernel
//! `K(p, w_N) = Prob(x_0..x_n = p | x_N = w_N)` under the backward chain of
//! the equipment. Limits of these kernels along boundary sequences `w_N`
//! produce the extreme points of the set of measures with the prescribed
//! cocycle. The kernels are computed exactly; only reports use floats.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::equipment::Equipment;
use crate::error::{Error, Result};
use crate::graded_graph::{paths_into, Diagram, FinitePath, VertexId};
use crate::markov_measure::{cylinder_prob, PathSampler, Transitions};
use crate::rational::{round_half_up, to_f64, Rational};
use crate::stream::stream_rng;

/// Law of the level-`n` coordinate given `x_N = w`, stored as integer
/// numerators over one denominator with no common factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardDistribution {
    terminal: VertexId,
    level: usize,
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl BackwardDistribution {
    pub fn terminal(&self) -> VertexId {
        self.terminal
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Positive masses keyed by vertex index on `level()`.
    pub fn masses(&self) -> BTreeMap<usize, Rational> {
        (0..self.numerators.len())
            .filter(|&i| !self.numerators[i].is_zero())
            .map(|i| (i, self.mass(i)))
            .collect()
    }

    pub fn mass(&self, index: usize) -> Rational {
        match self.numerators.get(index) {
            Some(v) if !v.is_zero() => Rational::new(v.clone(), self.denominator.clone()),
            _ => Rational::zero(),
        }
    }

    /// `K(p, w)` for a path `p` from level 0 to `level()`.
    pub fn kernel<E: Equipment + ?Sized>(&self, sys: &E, p: &FinitePath) -> Result<Rational> {
        if p.start_level() != 0 || p.end_level() != self.level {
            return Err(Error::MalformedPath(alloc::format!(
                "kernel prefixes run from level 0 to level {}",
                self.level
            )));
        }
        p.check_in(sys.graph())?;
        let mut value = self.mass(p.endpoint().index);
        for i in (0..p.len()).rev() {
            if value.is_zero() {
                break;
            }
            let x = VertexId::new(i + 1, p.indices()[i + 1]);
            let c = sys
                .cotransition(x, p.indices()[i], p.edges()[i])
                .ok_or_else(|| Error::UnspecifiedRow(sys.graph().label(x)))?;
            value *= c;
        }
        Ok(value)
    }
}

/// Iterates the cotransitions backwards from `δ_w`:
/// `D_k(y) = Σ_x D_{k+1}(x) P(y | x)`, returning `D_n`.
///
/// The vectors are kept as integer numerators over one common denominator,
/// which is scaled by the lcm of the row denominators at each level and
/// reduced by the content of the vector every few levels.
pub fn backward_distribution<E: Equipment + ?Sized>(
    sys: &E,
    w: VertexId,
    n: usize,
) -> Result<BackwardDistribution> {
    let graph = sys.graph();
    graph.check_vertex(w)?;
    if n > w.level {
        return Err(Error::LevelOrder {
            from: graph.label(w),
            from_level: w.level,
            to: alloc::format!("level {n}"),
            to_level: n,
        });
    }
    let mut nums: Vec<BigInt> = vec![BigInt::zero(); graph.level_len(w.level)];
    nums[w.index] = BigInt::one();
    let mut denom = Denominator::new();
    for level in (n + 1..=w.level).rev() {
        let mut rows = Vec::new();
        let mut lcm = BigInt::one();
        for (index, num) in nums.iter().enumerate() {
            if num.is_zero() {
                continue;
            }
            let x = VertexId::new(level, index);
            let row = sys
                .cotransitions(x)
                .ok_or_else(|| Error::UnspecifiedRow(graph.label(x)))?;
            for e in row.iter().filter(|e| !e.prob.is_zero()) {
                if !(lcm.is_multiple_of(e.prob.denom())) {
                    lcm = lcm.lcm(e.prob.denom());
                }
            }
            rows.push((index, row));
        }
        let mut next: Vec<BigInt> = vec![BigInt::zero(); graph.level_len(level - 1)];
        let mut scratch = BigInt::zero();
        let small_lcm = lcm.to_u64();
        for (index, row) in &rows {
            for e in row.iter().filter(|e| !e.prob.is_zero()) {
                scratch.clone_from(&nums[*index]);
                match (small_lcm, e.prob.numer().to_u64(), e.prob.denom().to_u64()) {
                    (Some(l), Some(a), Some(b)) if (l / b).checked_mul(a).is_some() => {
                        scratch *= a * (l / b)
                    }
                    _ => scratch *= e.prob.numer() * (&lcm / e.prob.denom()),
                }
                next[e.from] += &scratch;
            }
        }
        drop(rows);
        nums = next;
        denom.scale(lcm);
        if level % 8 == 0 {
            denom.reduce(&mut nums);
        }
    }
    denom.finish(&mut nums);
    let denominator = denom.value;
    Ok(BackwardDistribution {
        terminal: w,
        level: n,
        numerators: nums,
        denominator,
    })
}

/// Common denominator of the backward vectors. While every scaling factor
/// fits in a `u64` its prime factors are tracked and divided out in batches;
/// larger factors fall back to content gcds.
struct Denominator {
    value: BigInt,
    primes: Option<BTreeMap<u64, u32>>,
}

impl Denominator {
    fn new() -> Self {
        Denominator {
            value: BigInt::one(),
            primes: Some(BTreeMap::new()),
        }
    }

    fn scale(&mut self, factor: BigInt) {
        match (self.primes.as_mut(), factor.to_u64()) {
            (Some(primes), Some(f)) => {
                for (p, e) in factorize(f) {
                    *primes.entry(p).or_insert(0) += e;
                }
            }
            _ => self.primes = None,
        }
        self.value *= factor;
    }

    /// Reduces until no tracked prime divides the whole vector, which leaves
    /// numerators and denominator without a common factor.
    fn finish(&mut self, nums: &mut [BigInt]) {
        if self.primes.is_none() {
            reduce_by_content(nums, &mut self.value);
            return;
        }
        loop {
            let before = self.value.clone();
            self.reduce(nums);
            if self.value == before {
                return;
            }
        }
    }

    /// Divides the vector and the denominator by every common factor made of
    /// tracked primes, testing batches of prime powers that fit in a `u64`.
    fn reduce(&mut self, nums: &mut [BigInt]) {
        let Some(primes) = self.primes.as_mut() else {
            reduce_by_content(nums, &mut self.value);
            return;
        };
        let pending: Vec<(u64, u32)> = primes.iter().map(|(&p, &e)| (p, e)).collect();
        let mut batch = 1u64;
        let mut flush = |q: u64, primes: &mut BTreeMap<u64, u32>, value: &mut BigInt| {
            let mut g = q;
            for v in nums.iter().filter(|v| !v.is_zero()) {
                g = g.gcd(&residue(v, g));
                if g == 1 {
                    return;
                }
            }
            for v in nums.iter_mut() {
                *v /= g;
            }
            *value /= g;
            for (p, e) in primes.iter_mut() {
                while *e > 0 && g % *p == 0 {
                    g /= *p;
                    *e -= 1;
                }
            }
        };
        for (p, e) in pending {
            let mut power = 1u64;
            for _ in 0..e {
                match power.checked_mul(p) {
                    Some(x) if x < 1 << 32 => power = x,
                    _ => break,
                }
            }
            match batch.checked_mul(power) {
                Some(x) => batch = x,
                None => {
                    flush(batch, primes, &mut self.value);
                    batch = power;
                }
            }
        }
        if batch > 1 {
            flush(batch, primes, &mut self.value);
        }
        primes.retain(|_, e| *e > 0);
    }
}

/// `v mod q` for nonnegative `v`, without copying `v`.
fn residue(v: &BigInt, q: u64) -> u64 {
    v.iter_u64_digits()
        .rev()
        .fold(0u128, |r, d| ((r << 64) | u128::from(d)) % u128::from(q)) as u64
}

/// Prime factorization by trial division; a cofactor left over past `2^16`
/// is kept whole (dividing by it is still exact, just coarser).
fn factorize(mut f: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= f && d < 1 << 16 {
        let mut e = 0;
        while f % d == 0 {
            f /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if f > 1 {
        out.push((f, 1));
    }
    out
}

fn reduce_by_content(nums: &mut [BigInt], denom: &mut BigInt) {
    let mut g = denom.clone();
    for v in nums.iter().filter(|v| !v.is_zero()) {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_one() || g.is_zero() {
        return;
    }
    for v in nums.iter_mut().filter(|v| !v.is_zero()) {
        *v /= &g;
    }
    *denom /= g;
}

/// `K(p, w) = Prob(x_0..x_n = p | x_N = w)`.
pub fn martin_kernel<E: Equipment + ?Sized>(
    sys: &E,
    p: &FinitePath,
    w: VertexId,
) -> Result<Rational> {
    if p.start_level() != 0 {
        return Err(Error::MalformedPath(
            "kernel prefixes start on level 0".into(),
        ));
    }
    backward_distribution(sys, w, p.end_level())?.kernel(sys, p)
}

/// Martin kernel values of every level-`n` prefix with positive backward mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MartinTable {
    pub level: usize,
    pub terminal: VertexId,
    pub values: BTreeMap<FinitePath, Rational>,
}

impl MartinTable {
    pub fn build<E: Equipment + ?Sized>(
        sys: &E,
        n: usize,
        w: VertexId,
        cap: usize,
    ) -> Result<Self> {
        let dist = backward_distribution(sys, w, n)?;
        let mut values = BTreeMap::new();
        for &index in dist.masses().keys() {
            for p in paths_into(sys.graph(), VertexId::new(n, index), cap)? {
                let k = dist.kernel(sys, &p)?;
                values.insert(p, k);
            }
        }
        Ok(MartinTable {
            level: n,
            terminal: w,
            values,
        })
    }

    pub fn total(&self) -> Rational {
        self.values.values().sum()
    }
}

/// A rule choosing a terminal vertex on each level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundarySequence {
    /// `w_N = (N, round(p·N))` in Pascal indexing (index `k` on level `N`).
    Frequency { p: Rational },
    /// One vertex per level, looked up by level.
    Explicit(Vec<VertexId>),
}

impl BoundarySequence {
    pub fn terminal<D: Diagram + ?Sized>(&self, graph: &D, level: usize) -> Result<VertexId> {
        let v = match self {
            BoundarySequence::Frequency { p } => {
                let k = round_half_up(&(p * Rational::from_integer(BigInt::from(level))));
                let index = k.to_usize().ok_or(Error::NoBoundaryVertex(level))?;
                VertexId::new(level, index)
            }
            BoundarySequence::Explicit(vs) => *vs
                .iter()
                .find(|v| v.level == level)
                .ok_or(Error::NoBoundaryVertex(level))?,
        };
        if !graph.contains(v) {
            return Err(Error::NoBoundaryVertex(level));
        }
        Ok(v)
    }
}

/// The set whose conditional probability is tracked along a boundary sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CylinderTarget {
    /// A single prefix from level 0.
    Path(FinitePath),
    /// All prefixes ending at this vertex (the backward marginal).
    Vertex(VertexId),
}

impl CylinderTarget {
    fn level(&self) -> usize {
        match self {
            CylinderTarget::Path(p) => p.end_level(),
            CylinderTarget::Vertex(v) => v.level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    /// `(N, K(target, w_N))` in the order requested.
    pub values: Vec<(usize, Rational)>,
}

impl LimitReport {
    pub fn last(&self) -> Option<&Rational> {
        self.values.last().map(|v| &v.1)
    }

    /// Absolute differences of consecutive values.
    pub fn deltas(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| to_f64(&(&w[1].1 - &w[0].1).abs()))
            .collect()
    }

    pub fn max_delta(&self) -> Option<f64> {
        self.deltas().into_iter().reduce(f64::max)
    }

    pub fn last_delta(&self) -> Option<f64> {
        self.deltas().last().copied()
    }
}

/// Evaluates the kernel of `target` at `w_N` for every `N` in `levels`.
/// Reports raw values; no limit is extrapolated.
pub fn boundary_limit_estimate<E: Equipment + ?Sized>(
    sys: &E,
    seq: &BoundarySequence,
    target: &CylinderTarget,
    levels: &[usize],
) -> Result<LimitReport> {
    let mut values = Vec::with_capacity(levels.len());
    for &level in levels {
        let w = seq.terminal(sys.graph(), level)?;
        let dist = backward_distribution(sys, w, target.level())?;
        let value = match target {
            CylinderTarget::Path(p) => dist.kernel(sys, p)?,
            CylinderTarget::Vertex(v) => {
                sys.graph().check_vertex(*v)?;
                dist.mass(v.index)
            }
        };
        values.push((level, value));
    }
    Ok(LimitReport { values })
}

/// A level-`n` statistic of a sampled path.
#[derive(Clone, Copy, Debug)]
pub enum Statistic {
    /// Index of the level-`n` vertex divided by `n`; `k_n / n` on the Pascal graph.
    EndpointCoordinate,
    /// Fraction of levels `1..=n` at which the visited vertex satisfies the predicate.
    VertexIndicatorFrequency(fn(VertexId) -> bool),
    Custom(fn(&FinitePath, usize) -> f64),
}

impl Statistic {
    pub fn evaluate(&self, path: &FinitePath, n: usize) -> f64 {
        match self {
            Statistic::EndpointCoordinate => {
                let v = path.at(n).expect("path reaches level n");
                v.index as f64 / (n.max(1)) as f64
            }
            Statistic::VertexIndicatorFrequency(pred) => {
                let hits = (1..=n)
                    .filter(|&l| pred(path.at(l).expect("path reaches level n")))
                    .count();
                hits as f64 / (n.max(1)) as f64
            }
            Statistic::Custom(f) => f(path, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErgodicityConfig {
    pub levels: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for ErgodicityConfig {
    fn default() -> Self {
        ErgodicityConfig {
            levels: vec![100, 400, 1600],
            samples: 100_000,
            seed: 0,
            threshold: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceRow {
    pub level: usize,
    pub mean: f64,
    pub variance: f64,
    /// Monte Carlo standard error of `variance`.
    pub stderr: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithErgodic,
    InconsistentWithErgodic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErgodicityReport {
    pub rows: Vec<VarianceRow>,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Estimates the variance of `statistic` at each requested level from
/// independent sampled paths (path `i` from stream `i`).
///
/// Ergodicity forces the variance to zero. The verdict is
/// consistent when the last variance is below the threshold, inconsistent
/// when it is above and not decreasing significantly (three standard errors)
/// from the previous level, and inconclusive otherwise. It is never a proof.
pub fn ergodicity_test<S: PathSampler + ?Sized>(
    m: &S,
    statistic: Statistic,
    config: &ErgodicityConfig,
) -> Result<ErgodicityReport> {
    if config.samples < 2 {
        return Err(Error::EmptySample);
    }
    let Some(&max_level) = config.levels.iter().max() else {
        return Err(Error::InvalidArgument("no levels requested".into()));
    };
    let mut values: Vec<Vec<f64>> = vec![Vec::with_capacity(config.samples); config.levels.len()];
    for i in 0..config.samples {
        let path = m.sample_path(max_level + 1, &mut stream_rng(config.seed, i as u64))?;
        for (slot, &n) in config.levels.iter().enumerate() {
            values[slot].push(statistic.evaluate(&path, n));
        }
    }
    let rows: Vec<VarianceRow> = config
        .levels
        .iter()
        .zip(&values)
        .map(|(&level, xs)| variance_row(level, xs))
        .collect();
    let verdict = verdict(&rows, config.threshold);
    Ok(ErgodicityReport {
        rows,
        threshold: config.threshold,
        verdict,
    })
}

fn variance_row(level: usize, xs: &[f64]) -> VarianceRow {
    let count = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / count;
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    let population = m2 / count;
    let variance = m2 / (count - 1.0);
    let fourth = m4 / count;
    let stderr = Float::sqrt(Float::max(fourth - population * population, 0.0) / count);
    VarianceRow {
        level,
        mean,
        variance,
        stderr,
    }
}

fn verdict(rows: &[VarianceRow], threshold: f64) -> Verdict {
    let Some(last) = rows.last() else {
        return Verdict::Inconclusive;
    };
    if last.variance < threshold {
        return Verdict::ConsistentWithErgodic;
    }
    let Some(prev) = rows.len().checked_sub(2).map(|i| rows[i]) else {
        return Verdict::Inconclusive;
    };
    let spread = 3.0 * Float::sqrt(last.stderr * last.stderr + prev.stderr * prev.stderr);
    if prev.variance - last.variance <= spread {
        Verdict::InconsistentWithErgodic
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExchangeabilityReport {
    pub classes: usize,
    pub paths: usize,
    /// Two paths with the same endpoint and different cylinder probabilities.
    pub witness: Option<(FinitePath, Rational, FinitePath, Rational)>,
}

impl ExchangeabilityReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks exactly that the cylinder probability of a path to level `n`
/// depends only on its endpoint. On the Pascal graph the endpoint `(n, k)`
/// is the number of ones among the first `n` coordinates, so this is
/// exchangeability of the first `n` coordinates.
pub fn exchangeability_check<T: Transitions + ?Sized>(
    m: &T,
    n: usize,
    cap: usize,
) -> Result<ExchangeabilityReport> {
    let graph = m.graph();
    if n >= graph.depth() {
        return Err(Error::LevelOutOfRange {
            level: n,
            depth: graph.depth(),
        });
    }
    let mut report = ExchangeabilityReport::default();
    for index in 0..graph.level_len(n) {
        let paths = paths_into(graph, VertexId::new(n, index), cap)?;
        report.classes += 1;
        report.paths += paths.len();
        let mut first: Option<(&FinitePath, Rational)> = None;
        for p in &paths {
            let prob = cylinder_prob(m, p)?;
            match &first {
                None => first = Some((p, prob)),
                Some((q, expected)) if *expected != prob => {
                    report.witness = Some(((*q).clone(), expected.clone(), p.clone(), prob));
                    return Ok(report);
                }
                Some(_) => {}
            }
        }
    }
    Ok(report)
}
