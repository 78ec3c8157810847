use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use compacta::absolute::{ErgodicityReport, Verdict};
use compacta::equipment::AxiomViolation;
use compacta::markov_measure::MatchWitness;
use compacta::rational::{format_rational, to_f64};
use compacta::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::formats::*;
use crate::output::Outcome;

type Res = Result<Outcome, CliError>;

pub fn dispatch(command: &Command) -> Res {
    match command {
        Command::Graph(c) => graph(c),
        Command::Equip(c) => equip(c),
        Command::Measure(c) => measure(c),
        Command::Absolute(c) => absolute(c),
        Command::Rsk(c) => rsk(c),
    }
}

/// `--out` of the command, if any.
pub fn out_path(command: &Command) -> Option<&Path> {
    let out = match command {
        Command::Graph(GraphCmd::Builtin { out, .. })
        | Command::Equip(EquipCmd::Central { out, .. })
        | Command::Measure(MeasureCmd::Sample { out, .. })
        | Command::Measure(MeasureCmd::Plancherel { out, .. })
        | Command::Measure(MeasureCmd::Bernoulli { out, .. })
        | Command::Absolute(AbsoluteCmd::Limit { out, .. })
        | Command::Absolute(AbsoluteCmd::Ergodic { out, .. })
        | Command::Rsk(RskCmd::Push { out, .. })
        | Command::Rsk(RskCmd::Freq { out, .. }) => out,
        _ => return None,
    };
    out.out.as_deref()
}

fn graph(c: &GraphCmd) -> Res {
    match c {
        GraphCmd::Validate { graph } => {
            let spec: GraphSpec = read_json::<GraphFile>(graph)?.into();
            let report = validate(&spec);
            let vertices: usize = spec.levels.iter().map(Vec::len).sum();
            let violations: Vec<String> =
                report.violations.iter().map(ToString::to_string).collect();
            let text = if report.passed() {
                format!(
                    "valid: {} levels, {} vertices, {} edges\n",
                    spec.levels.len(),
                    vertices,
                    spec.edges.len()
                )
            } else {
                let mut t = String::from("invalid:\n");
                for v in &violations {
                    let _ = writeln!(t, "  {v}");
                }
                t
            };
            Ok(Outcome::check(
                report.passed(),
                text,
                json!({
                    "valid": report.passed(),
                    "levels": spec.levels.len(),
                    "vertices": vertices,
                    "edges": spec.edges.len(),
                    "violations": violations,
                }),
            ))
        }
        GraphCmd::Builtin { kind, depth, .. } => {
            let g = match kind {
                Builtin::Pascal => pascal_graph(*depth)?,
                Builtin::Young => young_graph(*depth)?,
            };
            let file = GraphFile::from(&g.to_spec());
            let vertices = g.vertices().count();
            Ok(Outcome::report(
                format!("{kind:?} graph: {depth} levels, {vertices} vertices\n").to_lowercase(),
                serde_json::to_value(&file).expect("serializable"),
            )
            .with_artifact(to_json(&file)))
        }
    }
}

fn depth_bound(graph: &GradedGraph, bound: &CheckDepth) -> usize {
    bound.depth.unwrap_or(graph.depth()).min(graph.depth())
}

fn equip(c: &EquipCmd) -> Res {
    match c {
        EquipCmd::Central { graph, .. } => {
            let g = read_graph(graph)?;
            let sys = central_equipment(g)?;
            let blocks = cotransitions_to_file(&sys);
            Ok(Outcome::report(
                format!("central equipment: {} rows\n", blocks.len()),
                serde_json::to_value(&blocks).expect("serializable"),
            )
            .with_artifact(to_json(&blocks)))
        }
        EquipCmd::Check {
            graph,
            equip,
            bound,
        } => {
            let g = read_graph(graph)?;
            let sys = read_cotransitions(g.clone(), equip)?;
            let levels = depth_bound(&g, bound);
            let report = check_cocycle_axioms(&*g, &sys, levels, bound.cap)?;
            let witness = report.violation.as_ref().map(|v| axiom_witness(&g, v));
            let text = match &witness {
                None => format!(
                    "pass: {} paths, {} pairs ({} undefined), {} triples, {} levels\n",
                    report.paths, report.pairs, report.undefined_pairs, report.triples, levels
                ),
                Some(w) => format!("fail: {}\n", w["text"].as_str().unwrap_or_default()),
            };
            Ok(Outcome::check(
                report.passed(),
                text,
                json!({
                    "pass": report.passed(),
                    "levels": levels,
                    "paths": report.paths,
                    "pairs": report.pairs,
                    "undefined_pairs": report.undefined_pairs,
                    "triples": report.triples,
                    "witness": witness,
                }),
            ))
        }
    }
}

fn axiom_witness(g: &GradedGraph, v: &AxiomViolation) -> Value {
    let p = |x: &FinitePath| format_path(g, x);
    match v {
        AxiomViolation::Identity { path, value } => json!({
            "kind": "identity",
            "p": p(path),
            "value": value.to_string(),
            "text": format!("rho(p,p) = {value} for p = {}", p(path)),
        }),
        AxiomViolation::Inverse {
            p: a,
            q: b,
            forward,
            backward,
        } => json!({
            "kind": "inverse",
            "p": p(a),
            "q": p(b),
            "forward": forward.to_string(),
            "backward": backward.to_string(),
            "text": format!("rho(p,q) = {forward}, rho(q,p) = {backward} for p = {}, q = {}", p(a), p(b)),
        }),
        AxiomViolation::Multiplicative {
            p: a,
            q: b,
            r,
            pq,
            qr,
            pr,
        } => json!({
            "kind": "multiplicative",
            "p": p(a),
            "q": p(b),
            "r": p(r),
            "pq": pq.to_string(),
            "qr": qr.to_string(),
            "pr": pr.to_string(),
            "text": format!(
                "rho(p,q) rho(q,r) = {pq} * {qr} but rho(p,r) = {pr} for p = {}, q = {}, r = {}",
                p(a), p(b), p(r)
            ),
        }),
    }
}

fn match_witness(g: &GradedGraph, w: &MatchWitness) -> Value {
    match w {
        MatchWitness::Pair {
            p,
            q,
            rn,
            prescribed,
        } => json!({
            "kind": "pair",
            "p": format_path(g, p),
            "q": format_path(g, q),
            "rn": rn.to_string(),
            "prescribed": prescribed.to_string(),
            "text": format!(
                "p = {}, q = {}: measure ratio {rn}, prescribed {prescribed}",
                format_path(g, p), format_path(g, q)
            ),
        }),
        MatchWitness::Row {
            vertex,
            induced,
            prescribed,
        } => {
            let row = |r: &[CoEntry]| -> Vec<Value> {
                r.iter()
                    .map(|e| {
                        json!({
                            "from": g.label_of(VertexId::new(vertex.level - 1, e.from)),
                            "edge": e.edge,
                            "p": format_rational(&e.prob),
                        })
                    })
                    .collect()
            };
            let fmt_row = |r: &[CoEntry]| -> String {
                r.iter()
                    .map(|e| {
                        format!(
                            "{}:{}",
                            g.label_of(VertexId::new(vertex.level - 1, e.from)),
                            format_rational(&e.prob)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            json!({
                "kind": "row",
                "vertex": g.label_of(*vertex),
                "induced": row(induced),
                "prescribed": prescribed.as_deref().map(row),
                "text": format!(
                    "cotransitions into {}: induced [{}], prescribed [{}]",
                    g.label_of(*vertex),
                    fmt_row(induced),
                    prescribed.as_deref().map(fmt_row).unwrap_or_else(|| "unspecified".into())
                ),
            })
        }
    }
}

fn measure(c: &MeasureCmd) -> Res {
    match c {
        MeasureCmd::Cylinder {
            graph,
            measure,
            path,
        } => {
            let g = read_graph(graph)?;
            let m = read_measure(g.clone(), measure)?;
            let p = parse_path(&*g, path)?;
            let prob = cylinder_prob(&m, &p)?;
            Ok(Outcome::report(
                format!("{}\n", format_rational(&prob)),
                json!({"path": format_path(&*g, &p), "p": format_rational(&prob)}),
            ))
        }
        MeasureCmd::Check {
            graph,
            measure,
            equip,
            bound,
        } => {
            let g = read_graph(graph)?;
            let m = read_measure(g.clone(), measure)?;
            let sys = read_cotransitions(g.clone(), equip)?;
            let levels = depth_bound(&g, bound);
            let report = matches_equipment(&m, &sys, levels, bound.cap)?;
            let pair = report.pair_witness.as_ref().map(|w| match_witness(&g, w));
            let row = report.row_witness.as_ref().map(|w| match_witness(&g, w));
            let mut text = if report.passed() {
                format!(
                    "pass: {} pairs and {} rows checked, {} levels\n",
                    report.pairs_checked, report.rows_checked, levels
                )
            } else {
                String::from("fail:\n")
            };
            for w in pair.iter().chain(&row) {
                let _ = writeln!(text, "  {}", w["text"].as_str().unwrap_or_default());
            }
            Ok(Outcome::check(
                report.passed(),
                text,
                json!({
                    "pass": report.passed(),
                    "levels": levels,
                    "pairs_checked": report.pairs_checked,
                    "rows_checked": report.rows_checked,
                    "pair_witness": pair,
                    "row_witness": row,
                }),
            ))
        }
        MeasureCmd::Sample {
            graph,
            measure,
            levels,
            count,
            seed,
            ..
        } => {
            let g = read_graph(graph)?;
            let m = read_measure(g.clone(), measure)?;
            let levels = levels.unwrap_or(g.depth());
            if levels == 0 || levels > g.depth() {
                return Err(CliError::Usage(format!(
                    "--levels must be in 1..={}",
                    g.depth()
                )));
            }
            let paths = sample_paths(&m, levels, *count, *seed)?;
            let mut csv = Table::new(&["path_id", "level", "vertex"]);
            for (i, p) in paths.iter().enumerate() {
                for level in 0..levels {
                    let v = p.at(level).expect("sampled level");
                    csv.row([i.to_string(), level.to_string(), g.label_of(v).to_string()]);
                }
            }
            let listed: Vec<String> = paths.iter().map(|p| format_path(&*g, p)).collect();
            Ok(Outcome::report(
                format!("{count} paths over {levels} levels, seed {seed}\n"),
                json!({"seed": seed, "levels": levels, "paths": listed}),
            )
            .with_artifact(csv.finish()))
        }
        MeasureCmd::Plancherel { depth, .. } => {
            let m = plancherel_measure(Arc::new(young_graph(*depth)?))?;
            measure_artifact(
                &m,
                format!("Plancherel measure on the Young graph, {depth} levels\n"),
            )
        }
        MeasureCmd::Bernoulli { p, depth, .. } => {
            let m = bernoulli_on_pascal(Arc::new(pascal_graph(*depth)?), p)?;
            measure_artifact(
                &m,
                format!(
                    "Bernoulli({}) on the Pascal graph, {depth} levels\n",
                    format_rational(p)
                ),
            )
        }
    }
}

fn measure_artifact(m: &MarkovMeasure, text: String) -> Res {
    let file = measure_to_file(m);
    Ok(
        Outcome::report(text, serde_json::to_value(&file).expect("serializable"))
            .with_artifact(to_json(&file)),
    )
}

/// CSV artifact built in memory.
struct Table(csv::Writer<Vec<u8>>);

impl Table {
    fn new(header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        Table(w)
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        self.0
            .write_record(fields.into_iter().collect::<Vec<_>>())
            .expect("in-memory write");
    }

    fn finish(self) -> String {
        String::from_utf8(self.0.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Either files or the implicit Pascal graph with closed-form central rows.
enum Source {
    Files(CotransitionSystem),
    Implicit(PascalCentral),
}

fn limit_source(src: &ImplicitOrFiles, levels: &[usize]) -> Result<Source, CliError> {
    match (&src.graph, &src.equip) {
        (Some(g), Some(e)) => {
            let g = read_graph(g)?;
            Ok(Source::Files(read_cotransitions(g, e)?))
        }
        _ => {
            let depth = levels.iter().max().copied().unwrap_or(0) + 1;
            Ok(Source::Implicit(PascalCentral::new(Pascal::new(depth)?)))
        }
    }
}

fn absolute(c: &AbsoluteCmd) -> Res {
    match c {
        AbsoluteCmd::Backward {
            graph,
            equip,
            to,
            level,
        } => {
            let g = read_graph(graph)?;
            let sys = read_cotransitions(g.clone(), equip)?;
            let w = find(&*g, to)?;
            let d = backward_distribution(&sys, w, *level)?;
            let mut text = String::new();
            let mut masses = Vec::new();
            for (index, p) in &d.masses() {
                let label = g.label_of(VertexId::new(*level, *index));
                let _ = writeln!(text, "{label} {}", format_rational(p));
                masses.push(json!({"vertex": label, "p": format_rational(p)}));
            }
            Ok(Outcome::report(
                text,
                json!({"terminal": to, "level": level, "masses": masses}),
            ))
        }
        AbsoluteCmd::Kernel {
            graph,
            equip,
            path,
            to,
        } => {
            let g = read_graph(graph)?;
            let sys = read_cotransitions(g.clone(), equip)?;
            let p = parse_path(&*g, path)?;
            let w = find(&*g, to)?;
            let k = martin_kernel(&sys, &p, w)?;
            Ok(Outcome::report(
                format!("{}\n", format_rational(&k)),
                json!({"path": format_path(&*g, &p), "terminal": to, "value": format_rational(&k)}),
            ))
        }
        AbsoluteCmd::Limit {
            source,
            p,
            sequence,
            levels,
            prefix,
            vertex,
            tolerance,
            ..
        } => {
            let src = limit_source(source, levels)?;
            match &src {
                Source::Files(sys) => limit(sys, p, sequence, levels, prefix, vertex, *tolerance),
                Source::Implicit(sys) => {
                    limit(sys, p, sequence, levels, prefix, vertex, *tolerance)
                }
            }
        }
        AbsoluteCmd::Ergodic {
            p,
            mixture,
            graph,
            measure,
            levels,
            samples,
            seed,
            threshold,
            ..
        } => {
            let config = ErgodicityConfig {
                levels: levels.clone(),
                samples: *samples,
                seed: *seed,
                threshold: *threshold,
            };
            let depth = levels.iter().max().copied().unwrap_or(0) + 1;
            let report = match (p, mixture, graph, measure) {
                (Some(p), None, None, None) => {
                    let chain = BernoulliChain::new(Pascal::new(depth)?, p.clone())?;
                    ergodicity_test(&chain, Statistic::EndpointCoordinate, &config)?
                }
                (None, Some(spec), None, None) => {
                    let pascal = Pascal::new(depth)?;
                    let components = parse_mixture(spec)?
                        .into_iter()
                        .map(|(w, p)| Ok((w, BernoulliChain::new(pascal, p)?)))
                        .collect::<Result<Vec<_>, CliError>>()?;
                    ergodicity_test(
                        &Mixture::new(components)?,
                        Statistic::EndpointCoordinate,
                        &config,
                    )?
                }
                (None, None, Some(g), Some(m)) => {
                    let g = read_graph(g)?;
                    if depth > g.depth() {
                        return Err(CliError::Usage(format!(
                            "levels up to {} need a graph with {} levels",
                            depth - 1,
                            depth
                        )));
                    }
                    let m = read_measure(g, m)?;
                    ergodicity_test(&m, Statistic::EndpointCoordinate, &config)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --p, --mixture, or --graph with --measure".into(),
                    ))
                }
            };
            Ok(ergodic_outcome(&report, &config))
        }
        AbsoluteCmd::Exchange {
            graph,
            measure,
            level,
            cap,
        } => {
            let g = read_graph(graph)?;
            let m = read_measure(g.clone(), measure)?;
            let report = exchangeability_check(&m, *level, *cap)?;
            let witness = report.witness.as_ref().map(|(p, a, q, b)| {
                json!({
                    "p": format_path(&*g, p),
                    "p_prob": format_rational(a),
                    "q": format_path(&*g, q),
                    "q_prob": format_rational(b),
                })
            });
            let text = match &report.witness {
                None => format!(
                    "pass: {} paths into {} vertices on level {level}\n",
                    report.paths, report.classes
                ),
                Some((p, a, q, b)) => format!(
                    "fail: {} has probability {}, {} has probability {}\n",
                    format_path(&*g, p),
                    format_rational(a),
                    format_path(&*g, q),
                    format_rational(b)
                ),
            };
            Ok(Outcome::check(
                report.passed(),
                text,
                json!({
                    "pass": report.passed(),
                    "level": level,
                    "classes": report.classes,
                    "paths": report.paths,
                    "witness": witness,
                }),
            ))
        }
    }
}

fn find<D: Diagram + ?Sized>(g: &D, label: &str) -> Result<VertexId, CliError> {
    g.find(label)
        .ok_or_else(|| CliError::Format(format!("unknown vertex {label:?}")))
}

#[allow(clippy::too_many_arguments)]
fn limit<E: Equipment>(
    sys: &E,
    p: &Option<Rational>,
    sequence: &Option<String>,
    levels: &[usize],
    prefix: &Option<String>,
    vertex: &Option<String>,
    tolerance: f64,
) -> Res {
    let graph = sys.graph();
    let (seq, levels) = match (p, sequence) {
        (Some(p), None) => (
            BoundarySequence::Frequency { p: p.clone() },
            levels.to_vec(),
        ),
        (None, Some(list)) => {
            let sep = if list.contains(';') { ';' } else { ',' };
            let vs = list
                .split(sep)
                .map(|l| find(graph, l.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let levels = vs.iter().map(|v| v.level).collect();
            (BoundarySequence::Explicit(vs), levels)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --p or --sequence".into(),
            ))
        }
    };
    let target = match (prefix, vertex) {
        (Some(path), None) => CylinderTarget::Path(parse_path(graph, path)?),
        (None, Some(v)) => CylinderTarget::Vertex(find(graph, v)?),
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --prefix or --vertex".into(),
            ))
        }
    };
    let report = boundary_limit_estimate(sys, &seq, &target, &levels)?;
    let mut csv = Table::new(&["N", "value"]);
    let mut rows = Vec::new();
    for (n, value) in &report.values {
        csv.row([n.to_string(), rational_csv(value)]);
        rows.push(json!({"N": n, "value": format_rational(value), "approx": to_f64(value)}));
    }
    let last_delta = report.last_delta();
    let within = last_delta.is_some_and(|d| d <= tolerance);
    let mut text = String::new();
    if let Some(last) = report.last() {
        let _ = writeln!(text, "last value {}", csv_number(to_f64(last)));
    }
    match last_delta {
        Some(d) => {
            let _ = writeln!(
                text,
                "last delta {} ({} tolerance {})",
                csv_number(d),
                if within { "within" } else { "outside" },
                csv_number(tolerance)
            );
        }
        None => text.push_str("a single level gives no delta\n"),
    }
    Ok(Outcome::report(
        text,
        json!({
            "values": rows,
            "max_delta": report.max_delta(),
            "last_delta": last_delta,
            "tolerance": tolerance,
            "within_tolerance": within,
        }),
    )
    .with_artifact(csv.finish()))
}

fn parse_mixture(spec: &str) -> Result<Vec<(Rational, Rational)>, CliError> {
    spec.split(',')
        .map(|item| {
            let (w, p) = item
                .split_once(':')
                .ok_or_else(|| CliError::Format(format!("mixture items are w:p, got {item:?}")))?;
            Ok((rational(w.trim())?, rational(p.trim())?))
        })
        .collect()
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::ConsistentWithErgodic => "consistent",
        Verdict::InconsistentWithErgodic => "inconsistent",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn ergodic_outcome(report: &ErgodicityReport, config: &ErgodicityConfig) -> Outcome {
    let mut csv = Table::new(&["n", "variance", "stderr"]);
    let mut rows = Vec::new();
    for r in &report.rows {
        csv.row([
            r.level.to_string(),
            csv_number(r.variance),
            csv_number(r.stderr),
        ]);
        rows.push(
            json!({"n": r.level, "mean": r.mean, "variance": r.variance, "stderr": r.stderr}),
        );
    }
    let text = format!(
        "{} with ergodicity (threshold {}, {} samples, seed {})\n",
        verdict_name(report.verdict),
        csv_number(report.threshold),
        config.samples,
        config.seed
    );
    Outcome::report(
        text,
        json!({
            "rows": rows,
            "threshold": report.threshold,
            "samples": config.samples,
            "seed": config.seed,
            "verdict": verdict_name(report.verdict),
        }),
    )
    .with_artifact(csv.finish())
}

/// Saved shape paths: each path is the list of rows receiving a box.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsFile {
    pub n: usize,
    pub paths: Vec<Vec<usize>>,
}

fn rsk(c: &RskCmd) -> Res {
    match c {
        RskCmd::Word { letters } => {
            let numbers: Option<Vec<i64>> = letters.iter().map(|l| l.parse().ok()).collect();
            match numbers {
                Some(word) => Ok(word_outcome(&word)),
                None => Ok(word_outcome(letters)),
            }
        }
        RskCmd::Push {
            atoms,
            n,
            samples,
            seed,
            rows,
            columns,
            paths,
            ..
        } => {
            let dist = LetterDistribution::new(atoms.clone())?;
            let sampled = pushforward_samples(&dist, *n, *samples, *seed);
            if let Some(path) = paths {
                let file = PathsFile {
                    n: *n,
                    paths: sampled.iter().map(|p| p.steps().to_vec()).collect(),
                };
                crate::output::write_atomic(path, &to_json(&file))?;
            }
            let mut out = frequency_outcome(&sampled, *rows, *columns)?;
            out.json["atoms"] = json!(atoms.iter().map(format_rational).collect::<Vec<_>>());
            out.json["seed"] = json!(seed);
            Ok(out)
        }
        RskCmd::Freq {
            paths,
            rows,
            columns,
            ..
        } => {
            let file: PathsFile = read_json(paths)?;
            let parsed = file
                .paths
                .into_iter()
                .map(|steps| {
                    if steps.len() != file.n {
                        return Err(CliError::Format(format!(
                            "a path has {} steps, expected {}",
                            steps.len(),
                            file.n
                        )));
                    }
                    YoungPath::from_rows(steps)
                        .ok_or_else(|| CliError::Format("not a Young path".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            frequency_outcome(&parsed, *rows, *columns)
        }
    }
}

fn word_outcome<T: Ord + Clone + std::fmt::Display + Serialize>(word: &[T]) -> Outcome {
    let (p, q) = rsk_pair(word);
    let path = q_shape_path(word);
    let shapes: Vec<String> = path.shapes().iter().map(ToString::to_string).collect();
    Outcome::report(
        format!("P {p}\nQ {q}\nshapes {}\n", shapes.join(" ")),
        json!({"p": p.rows(), "q": q.rows(), "shapes": shapes}),
    )
}

fn frequency_outcome(paths: &[YoungPath], cap: usize, columns: bool) -> Res {
    let est = if columns {
        column_frequency_estimate(paths, cap)?
    } else {
        thoma_frequency_estimate(paths, cap)?
    };
    let kind = if columns { "column" } else { "row" };
    let mut csv = Table::new(&[kind, "frequency", "stderr"]);
    let mut text = format!("{} paths of length {}\n", est.samples, est.level);
    let mut rows = Vec::new();
    for (i, (mean, se)) in est.values.iter().enumerate() {
        csv.row([(i + 1).to_string(), csv_number(*mean), csv_number(*se)]);
        let _ = writeln!(
            text,
            "{kind} {}: {} +- {}",
            i + 1,
            csv_number(*mean),
            csv_number(*se)
        );
        rows.push(json!({kind: i + 1, "frequency": mean, "stderr": se}));
    }
    Ok(Outcome::report(
        text,
        json!({"n": est.level, "samples": est.samples, "kind": kind, "values": rows}),
    )
    .with_artifact(csv.finish()))
}
