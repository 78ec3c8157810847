use std::collections::BTreeMap;
use std::sync::Arc;

use compacta::absolute::MartinTable;
use compacta::rational::ratio;
use compacta::stream::stream_rng;
use compacta::*;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

const CAP: usize = 10_000;

/// A layered graph from raw proptest data, patched so every vertex has an
/// incoming edge (above level 0) and an outgoing edge (below the last level).
fn build_graph(sizes: &[usize], mults: &[u64]) -> GradedGraph {
    let levels: Vec<Vec<String>> = sizes
        .iter()
        .enumerate()
        .map(|(l, &n)| (0..n).map(|i| format!("v{l}_{i}")).collect())
        .collect();
    let mut edges = Vec::new();
    let mut next = mults.iter().cycle();
    for l in 0..sizes.len() - 1 {
        let mut table = vec![vec![0u64; sizes[l + 1]]; sizes[l]];
        for row in table.iter_mut() {
            for m in row.iter_mut() {
                *m = *next.next().unwrap();
            }
        }
        for (i, row) in table.iter_mut().enumerate() {
            if row.iter().all(|&m| m == 0) {
                row[i % sizes[l + 1]] = 1;
            }
        }
        for j in 0..sizes[l + 1] {
            if table.iter().all(|row| row[j] == 0) {
                table[j % sizes[l]][j] = 1;
            }
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &mult) in row.iter().enumerate() {
                if mult > 0 {
                    edges.push(EdgeSpec {
                        from: levels[l][i].clone(),
                        to: levels[l + 1][j].clone(),
                        mult,
                    });
                }
            }
        }
    }
    GradedGraph::from_spec(&GraphSpec { levels, edges }).expect("patched graph is valid")
}

fn graph_strategy() -> impl Strategy<Value = GradedGraph> {
    (
        prop::collection::vec(1usize..=3, 2..=5),
        prop::collection::vec(0u64..=2, 1..40),
    )
        .prop_map(|(sizes, mults)| build_graph(&sizes, &mults))
}

/// Forward rows with small random integer weights, some of them zero.
fn random_measure(graph: Arc<GradedGraph>, seed: u64) -> MarkovMeasure {
    use rand_core::RngCore;
    let mut rng = stream_rng(seed, 0);
    let mut weights = |n: usize| -> Vec<i64> {
        let mut w: Vec<i64> = (0..n).map(|_| (rng.next_u32() % 3) as i64).collect();
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        w
    };
    let init = weights(graph.level_len(0));
    let total: i64 = init.iter().sum();
    let initial = init.iter().map(|&w| ratio(w, total)).collect();
    let g = graph.clone();
    MarkovMeasure::from_fn(graph, initial, |v| {
        let slots: Vec<(usize, u64)> = g
            .successors(v)
            .iter()
            .flat_map(|a| (0..a.mult).map(move |e| (a.index, e)))
            .collect();
        let w = weights(slots.len());
        let total: i64 = w.iter().sum();
        slots
            .into_iter()
            .zip(w)
            .map(|((to, edge), w)| Step {
                to,
                edge,
                prob: ratio(w, total),
            })
            .collect()
    })
    .expect("rows are normalized")
}

fn all_paths_to_level(graph: &GradedGraph, level: usize) -> Vec<FinitePath> {
    graph
        .vertices_at(level)
        .flat_map(|v| paths_into(graph, v, CAP).unwrap())
        .collect()
}

fn cotransition_product<E: Equipment>(sys: &E, p: &FinitePath) -> Rational {
    (0..p.len())
        .map(|i| {
            sys.cotransition(
                VertexId::new(i + 1, p.indices()[i + 1]),
                p.indices()[i],
                p.edges()[i],
            )
            .unwrap()
        })
        .product()
}

/// Pascal-rule triangle without factorials.
fn pascal_triangle(rows: usize) -> Vec<Vec<u128>> {
    let mut t: Vec<Vec<u128>> = vec![vec![1]];
    for n in 1..rows {
        let prev = &t[n - 1];
        let row = (0..=n)
            .map(|k| {
                let left = if k > 0 { prev[k - 1] } else { 0 };
                let right = prev.get(k).copied().unwrap_or(0);
                left + right
            })
            .collect();
        t.push(row);
    }
    t
}

#[test]
fn pascal_counts_are_binomials() {
    let t = pascal_triangle(61);
    let g = Pascal::new(61).unwrap();
    for n in 0..61 {
        for k in 0..=n {
            let count = path_count(&g, VertexId::new(0, 0), VertexId::new(n, k)).unwrap();
            assert_eq!(count, BigUint::from(t[n][k]), "({n},{k})");
        }
    }
}

#[test]
fn young_counts_match_tableau_enumeration() {
    let g = young_graph(7).unwrap();
    for v in g.vertices() {
        let shape: Partition = g.label_of(v).parse().unwrap();
        let paths = paths_into(&g, v, CAP).unwrap();
        assert_eq!(BigUint::from(paths.len()), shape.hook_dimension());
        let tableaux: std::collections::BTreeSet<_> = paths
            .iter()
            .map(|p| YoungPath::from_finite_path(&g, p).unwrap().tableau())
            .collect();
        assert_eq!(tableaux.len(), paths.len());
        assert!(tableaux.iter().all(Tableau::is_standard));
    }
}

#[test]
fn builtin_cylinders_sum_to_one() {
    for depth in 1..=5 {
        let young = Arc::new(young_graph(depth).unwrap());
        let pascal = Arc::new(pascal_graph(depth).unwrap());
        let plancherel = plancherel_measure(young.clone()).unwrap();
        let measures = [
            (plancherel, young.clone()),
            (
                bernoulli_on_pascal(pascal.clone(), &ratio(1, 3)).unwrap(),
                pascal.clone(),
            ),
            (
                mixture_on_pascal(
                    pascal.clone(),
                    &[(ratio(1, 2), ratio(1, 4)), (ratio(1, 2), ratio(3, 4))],
                )
                .unwrap(),
                pascal.clone(),
            ),
        ];
        for (m, g) in &measures {
            let total: Rational = all_paths_to_level(g, depth - 1)
                .iter()
                .map(|p| cylinder_prob(m, p).unwrap())
                .sum();
            assert!(total.is_one(), "depth {depth}");
        }
    }
}

#[test]
fn centrality_iff_endpoint_determines_cylinders() {
    let young = Arc::new(young_graph(6).unwrap());
    let pascal = Arc::new(pascal_graph(6).unwrap());
    let cases: Vec<(MarkovMeasure, Arc<GradedGraph>)> = vec![
        (plancherel_measure(young.clone()).unwrap(), young.clone()),
        (
            bernoulli_on_pascal(pascal.clone(), &ratio(1, 2)).unwrap(),
            pascal.clone(),
        ),
        (
            bernoulli_on_pascal(pascal.clone(), &ratio(1, 3)).unwrap(),
            pascal.clone(),
        ),
        (random_measure(pascal.clone(), 7), pascal.clone()),
        (random_measure(young.clone(), 8), young.clone()),
    ];
    for (m, g) in cases {
        let central = central_equipment(g.clone()).unwrap();
        let matches = matches_equipment(&m, &central, 6, CAP).unwrap().passed();
        let endpoint_only = (1..6).all(|n| exchangeability_check(&m, n, CAP).unwrap().passed());
        assert_eq!(matches, endpoint_only);
    }
}

#[test]
fn backward_distribution_is_hypergeometric() {
    for g in [pascal_graph(7).unwrap(), young_graph(7).unwrap()] {
        let g = Arc::new(g);
        let sys = central_equipment(g.clone()).unwrap();
        let root = VertexId::new(0, 0);
        for w in g.vertices() {
            let total = path_count(&*g, root, w).unwrap();
            for n in 0..=w.level {
                let d = backward_distribution(&sys, w, n).unwrap();
                for v in g.vertices_at(n) {
                    let through =
                        path_count(&*g, root, v).unwrap() * path_count(&*g, v, w).unwrap();
                    let expected = Rational::new(through.into(), total.clone().into());
                    assert_eq!(d.mass(v.index), expected);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_recurrence_and_enumeration(g in graph_strategy()) {
        for v in g.vertices() {
            for w in g.vertices().filter(|w| w.level > v.level) {
                let count = path_count(&g, v, w).unwrap();
                let split: BigUint = g
                    .successors(v)
                    .iter()
                    .map(|a| BigUint::from(a.mult) * path_count(&g, VertexId::new(v.level + 1, a.index), w).unwrap())
                    .sum();
                prop_assert_eq!(&count, &split);
                let listed = enumerate_paths(&g, v, w, CAP).unwrap();
                prop_assert_eq!(BigUint::from(listed.len()), count);
                let mut distinct = listed.clone();
                distinct.sort();
                distinct.dedup();
                prop_assert_eq!(distinct.len(), listed.len());
            }
            prop_assert!(path_count(&g, v, v).unwrap().is_one());
        }
    }

    #[test]
    fn random_equipment_is_a_cocycle(g in graph_strategy(), seed in any::<u64>()) {
        let g = Arc::new(g);
        let sys = random_equipment(g.clone(), &mut stream_rng(seed, 0));
        let depth = g.depth();
        let report = check_cocycle_axioms(&*g, &sys, depth, CAP).unwrap();
        prop_assert!(report.passed(), "{:?}", report.violation);
    }

    #[test]
    fn central_cocycle_is_one(g in graph_strategy()) {
        let g = Arc::new(g);
        let sys = central_equipment(g.clone()).unwrap();
        for w in g.vertices() {
            let paths = paths_into(&*g, w, CAP).unwrap();
            for p in &paths {
                for q in paths.iter().filter(|q| q.start() == p.start()) {
                    prop_assert_eq!(cocycle_eval(&sys, p, q).unwrap(), CocycleValue::one());
                }
            }
        }
    }

    #[test]
    fn cocycle_matches_conditional_oracle(g in graph_strategy(), seed in any::<u64>()) {
        let g = Arc::new(g);
        let sys = random_equipment(g.clone(), &mut stream_rng(seed, 1));
        for w in g.vertices() {
            let paths = paths_into(&*g, w, CAP).unwrap();
            let weights: Vec<Rational> = paths.iter().map(|p| cotransition_product(&sys, p)).collect();
            for (p, wp) in paths.iter().zip(&weights) {
                for (q, wq) in paths.iter().zip(&weights) {
                    if wq.is_zero() {
                        continue;
                    }
                    prop_assert_eq!(cocycle_eval(&sys, p, q).unwrap(), CocycleValue::Value(wp / wq));
                }
            }
        }
    }

    #[test]
    fn random_measures(g in graph_strategy(), seed in any::<u64>()) {
        let g = Arc::new(g);
        let m = random_measure(g.clone(), seed);
        let last = g.depth() - 1;
        for level in 0..=last {
            let total: Rational = all_paths_to_level(&g, level).iter().map(|p| cylinder_prob(&m, p).unwrap()).sum();
            prop_assert!(total.is_one());
        }
        let induced = induced_cotransitions(&m);
        prop_assert!(matches_equipment(&m, &induced, g.depth(), CAP).unwrap().passed());
        let axioms = check_cocycle_axioms(&*g, &m, g.depth(), CAP).unwrap();
        prop_assert!(axioms.passed(), "{:?}", axioms.violation);
    }

    #[test]
    fn kernels_are_probabilities_and_martingales(g in graph_strategy(), seed in any::<u64>()) {
        let g = Arc::new(g);
        let sys = random_equipment(g.clone(), &mut stream_rng(seed, 2));
        for w in g.vertices() {
            for n in 0..=w.level {
                let d = backward_distribution(&sys, w, n).unwrap();
                prop_assert!(d.masses().values().sum::<Rational>().is_one());
                let table = MartinTable::build(&sys, n, w, CAP).unwrap();
                prop_assert!(table.total().is_one());
                if n == w.level {
                    continue;
                }
                let deeper = MartinTable::build(&sys, n + 1, w, CAP).unwrap();
                let mut children: BTreeMap<FinitePath, Rational> = BTreeMap::new();
                for (p, k) in &deeper.values {
                    *children.entry(p.prefix(n).unwrap()).or_insert_with(Rational::zero) += k;
                }
                for (p, k) in &table.values {
                    let sum = children.get(p).cloned().unwrap_or_else(Rational::zero);
                    prop_assert_eq!(&sum, k);
                    prop_assert_eq!(martin_kernel(&sys, p, w).unwrap(), k.clone());
                }
            }
        }
    }
}
