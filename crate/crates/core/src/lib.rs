//! Equipped Markov compacta.
//!
//! A Markov compactum is the space of paths through a sequence of finite
//! level sets with prescribed allowed transitions; here it is always given as
//! a finite truncation of an N-graded graph (a Bratteli diagram). The tail
//! equivalence relation identifies paths that coincide from some level on,
//! and a system of *cotransition probabilities* equips that relation with a
//! Markov cocycle. The crate answers questions of the form "which Markov
//! measures have this cocycle as their Radon–Nikodym cocycle?":
//!
//! - [`graded_graph`]: graphs, paths, exact path counting, the Pascal and
//!   Young graphs.
//! - [`equipment`]: cotransition systems, the induced cocycle, cocycle axiom
//!   checks, the central (maximal entropy) equipment.
//! - [`markov_measure`]: Markov measures, cylinder probabilities, induced
//!   cotransitions, the Radon–Nikodym cocycle and matching checks, samplers.
//! - [`absolute`]: the ergodic method. Backward distributions, Martin
//!   kernels, boundary sequences, a statistical ergodicity test, and the
//!   exchangeability check on the Pascal graph.
//! - [`rsk`]: Robinson–Schensted–Knuth insertion and the pushforward of
//!   i.i.d. letter sequences to central measures on the Young graph.
//!
//! All probabilities are exact big rationals; floating point only shows up in
//! Monte Carlo statistics and reports.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod absolute;
pub mod equipment;
mod error;
pub mod graded_graph;
pub mod markov_measure;
pub mod partition;
pub mod rational;
pub mod rsk;
pub mod stream;

pub use error::{Error, Result};
pub use rational::Rational;

pub use absolute::{
    backward_distribution, boundary_limit_estimate, ergodicity_test, exchangeability_check,
    martin_kernel, BackwardDistribution, BoundarySequence, CylinderTarget, ErgodicityConfig,
    ErgodicityReport, ExchangeabilityReport, LimitReport, MartinTable, Statistic, VarianceRow,
    Verdict,
};
pub use equipment::{
    central_equipment, check_cocycle_axioms, cocycle_eval, random_equipment, AxiomReport,
    AxiomViolation, CoEntry, Cocycle, CocycleTable, CocycleValue, CotransitionSystem, Equipment,
    PascalCentral,
};
pub use graded_graph::{
    enumerate_paths, pascal_graph, path_count, paths_into, validate, young_graph, Adjacent,
    Diagram, EdgeSpec, FinitePath, GradedGraph, GraphSpec, Pascal, ValidationReport, VertexId,
    Violation,
};
pub use markov_measure::{
    bernoulli_on_pascal, cylinder_prob, induced_cotransitions, matches_equipment,
    mixture_on_pascal, plancherel_measure, rn_cocycle, sample_path, sample_paths, BernoulliChain,
    MarkovMeasure, MatchReport, MatchWitness, Mixture, PathSampler, Step, Transitions,
};
pub use partition::Partition;
pub use rsk::{
    column_frequency_estimate, endpoint_vertex, pushforward_exact, pushforward_sample,
    pushforward_samples, pushforward_with, q_shape_path, row_insert, rsk_pair, schur_polynomial,
    thoma_frequency_estimate, thoma_measure, Cell, FrequencyEstimate, Letter, LetterDistribution,
    Tableau, YoungPath, DEFAULT_ROW_CAP,
};
