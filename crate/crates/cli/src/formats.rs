//! JSON file formats and the text path syntax.
//!
//! Rationals are strings `"a/b"` (integers and exact decimals are accepted on
//! input). Levels are 0-indexed from the root level.
//!
//! Graph:
//! ```json
//! {"levels": [["0,0"], ["1,0", "1,1"]],
//!  "edges": [{"from": "0,0", "to": "1,0", "mult": 1}, {"from": "0,0", "to": "1,1"}]}
//! ```
//! Cotransitions, one block per vertex `to` above level 0; `level` is the level
//! of the `from` vertices:
//! ```json
//! [{"level": 0, "to": "1,0", "rows": [{"from": "0,0", "edge": 0, "p": "1/1"}]}]
//! ```
//! Measure, with `level` the level of `from`:
//! ```json
//! {"initial": [{"vertex": "0,0", "p": "1/1"}],
//!  "forward": [{"level": 0, "from": "0,0", "rows": [{"to": "1,1", "edge": 0, "p": "1/3"}]}]}
//! ```
//! A path is written as vertex labels joined by `/`. A parallel-edge choice
//! other than 0 is written as `[e]` in front of the label it leads to, as in
//! `r/[1]a/b`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use compacta::rational::{format_rational, parse_rational};
use compacta::{
    CoEntry, CotransitionSystem, Diagram, EdgeSpec, Equipment, FinitePath, GradedGraph, GraphSpec,
    MarkovMeasure, Rational, Step, Transitions, VertexId,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub levels: Vec<Vec<String>>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
    #[serde(default = "one")]
    pub mult: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CotransitionBlock {
    pub level: usize,
    pub to: String,
    pub rows: Vec<CotransitionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CotransitionEntry {
    pub from: String,
    #[serde(default)]
    pub edge: u64,
    pub p: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub initial: Vec<InitialEntry>,
    pub forward: Vec<ForwardBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InitialEntry {
    pub vertex: String,
    pub p: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ForwardBlock {
    pub level: usize,
    pub from: String,
    pub rows: Vec<ForwardEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ForwardEntry {
    pub to: String,
    #[serde(default)]
    pub edge: u64,
    pub p: String,
}

impl From<&GraphSpec> for GraphFile {
    fn from(spec: &GraphSpec) -> Self {
        GraphFile {
            levels: spec.levels.clone(),
            edges: spec
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    mult: e.mult,
                })
                .collect(),
        }
    }
}

impl From<GraphFile> for GraphSpec {
    fn from(file: GraphFile) -> Self {
        GraphSpec {
            levels: file.levels,
            edges: file
                .edges
                .into_iter()
                .map(|e| EdgeSpec {
                    from: e.from,
                    to: e.to,
                    mult: e.mult,
                })
                .collect(),
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Loads and validates a graph file.
pub fn read_graph(path: &Path) -> Result<Arc<GradedGraph>, CliError> {
    let spec: GraphSpec = read_json::<GraphFile>(path)?.into();
    GradedGraph::from_spec(&spec)
        .map(Arc::new)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Format(format!("not a rational number: {s:?}")))
}

fn vertex(graph: &GradedGraph, label: &str) -> Result<VertexId, CliError> {
    graph
        .find(label)
        .ok_or_else(|| CliError::Format(format!("unknown vertex {label:?}")))
}

fn vertex_on(graph: &GradedGraph, label: &str, level: usize) -> Result<VertexId, CliError> {
    let v = vertex(graph, label)?;
    if v.level != level {
        return Err(CliError::Format(format!(
            "vertex {label:?} is on level {}, not {level}",
            v.level
        )));
    }
    Ok(v)
}

pub fn cotransitions_to_file(sys: &CotransitionSystem) -> Vec<CotransitionBlock> {
    let graph = sys.graph();
    sys.to_table()
        .into_iter()
        .map(|(x, row)| CotransitionBlock {
            level: x.level - 1,
            to: graph.label_of(x).to_string(),
            rows: row
                .iter()
                .map(|e| CotransitionEntry {
                    from: graph
                        .label_of(VertexId::new(x.level - 1, e.from))
                        .to_string(),
                    edge: e.edge,
                    p: format_rational(&e.prob),
                })
                .collect(),
        })
        .collect()
}

pub fn cotransitions_from_file(
    graph: Arc<GradedGraph>,
    blocks: &[CotransitionBlock],
) -> Result<CotransitionSystem, CliError> {
    let mut table: BTreeMap<VertexId, Vec<CoEntry>> = BTreeMap::new();
    for block in blocks {
        let x = vertex_on(&graph, &block.to, block.level + 1)?;
        let mut row = Vec::with_capacity(block.rows.len());
        for entry in &block.rows {
            let y = vertex_on(&graph, &entry.from, block.level)?;
            row.push(CoEntry {
                from: y.index,
                edge: entry.edge,
                prob: rational(&entry.p)?,
            });
        }
        if table.insert(x, row).is_some() {
            return Err(CliError::Format(format!(
                "two blocks for vertex {:?}",
                block.to
            )));
        }
    }
    Ok(CotransitionSystem::from_table(graph, &table)?)
}

pub fn read_cotransitions(
    graph: Arc<GradedGraph>,
    path: &Path,
) -> Result<CotransitionSystem, CliError> {
    let blocks: Vec<CotransitionBlock> = read_json(path)?;
    cotransitions_from_file(graph, &blocks)
}

pub fn measure_to_file(m: &MarkovMeasure) -> MeasureFile {
    let graph = m.graph();
    MeasureFile {
        initial: m
            .initial_vector()
            .iter()
            .enumerate()
            .map(|(i, p)| InitialEntry {
                vertex: graph.label_of(VertexId::new(0, i)).to_string(),
                p: format_rational(p),
            })
            .collect(),
        forward: m
            .rows()
            .into_iter()
            .map(|(v, row)| ForwardBlock {
                level: v.level,
                from: graph.label_of(v).to_string(),
                rows: row
                    .iter()
                    .map(|s| ForwardEntry {
                        to: graph.label_of(VertexId::new(v.level + 1, s.to)).to_string(),
                        edge: s.edge,
                        p: format_rational(&s.prob),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn measure_from_file(
    graph: Arc<GradedGraph>,
    file: &MeasureFile,
) -> Result<MarkovMeasure, CliError> {
    let mut initial = vec![Rational::from_integer(0.into()); graph.level_len(0)];
    for entry in &file.initial {
        let v = vertex_on(&graph, &entry.vertex, 0)?;
        initial[v.index] = rational(&entry.p)?;
    }
    let last = graph.depth() - 1;
    let mut rows: BTreeMap<VertexId, Vec<Step>> = graph
        .vertices()
        .filter(|v| v.level == last)
        .map(|v| (v, Vec::new()))
        .collect();
    for block in &file.forward {
        let v = vertex_on(&graph, &block.from, block.level)?;
        let mut row = Vec::with_capacity(block.rows.len());
        for entry in &block.rows {
            let w = vertex_on(&graph, &entry.to, block.level + 1)?;
            row.push(Step {
                to: w.index,
                edge: entry.edge,
                prob: rational(&entry.p)?,
            });
        }
        if v.level < last && rows.insert(v, row).is_some() {
            return Err(CliError::Format(format!(
                "two blocks for vertex {:?}",
                block.from
            )));
        }
    }
    Ok(MarkovMeasure::new(graph, initial, &rows)?)
}

pub fn read_measure(graph: Arc<GradedGraph>, path: &Path) -> Result<MarkovMeasure, CliError> {
    let file: MeasureFile = read_json(path)?;
    measure_from_file(graph, &file)
}

/// Parses `a/b/[1]c`; the path starts at the level of its first vertex.
pub fn parse_path<D: Diagram + ?Sized>(graph: &D, text: &str) -> Result<FinitePath, CliError> {
    let mut path: Option<FinitePath> = None;
    for item in text.split('/') {
        let (edge, label) = match item.strip_prefix('[') {
            Some(rest) => {
                let (e, label) = rest
                    .split_once(']')
                    .ok_or_else(|| CliError::Format(format!("bad edge choice in {item:?}")))?;
                let e = e
                    .parse::<u64>()
                    .map_err(|_| CliError::Format(format!("bad edge choice in {item:?}")))?;
                (e, label)
            }
            None => (0, item),
        };
        let v = graph
            .find(label)
            .ok_or_else(|| CliError::Format(format!("unknown vertex {label:?}")))?;
        match &mut path {
            None if edge != 0 => {
                return Err(CliError::Format(
                    "the first vertex takes no edge choice".into(),
                ))
            }
            None => path = Some(FinitePath::trivial(v)),
            Some(p) => {
                if v.level != p.end_level() + 1 {
                    return Err(CliError::Format(format!(
                        "{label:?} is on level {}, expected {}",
                        v.level,
                        p.end_level() + 1
                    )));
                }
                p.push(v.index, edge);
            }
        }
    }
    let path = path.ok_or_else(|| CliError::Format("empty path".into()))?;
    path.check_in(graph)?;
    Ok(path)
}

pub fn format_path<D: Diagram + ?Sized>(graph: &D, p: &FinitePath) -> String {
    let mut out = String::new();
    for level in p.start_level()..=p.end_level() {
        if level > p.start_level() {
            out.push('/');
            let e = p.edges()[level - p.start_level() - 1];
            if e != 0 {
                out.push_str(&format!("[{e}]"));
            }
        }
        out.push_str(&graph.label(p.at(level).expect("level within path")));
    }
    out
}

/// Decimal with 12 significant digits, for CSV output.
pub fn csv_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x == 0.0 {
            "0".into()
        } else {
            format!("{x}")
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 11 - magnitude;
    if (0..=24).contains(&decimals) {
        let s = format!("{:.*}", decimals as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

pub fn rational_csv(r: &Rational) -> String {
    csv_number(compacta::rational::to_f64(r))
}

/// Equipment files written for a graph are read back unchanged.
pub fn equipment_round_trip(sys: &CotransitionSystem) -> Result<CotransitionSystem, CliError> {
    cotransitions_from_file(sys.graph_arc().clone(), &cotransitions_to_file(sys))
}

pub fn transitions_round_trip(m: &MarkovMeasure) -> Result<MarkovMeasure, CliError> {
    measure_from_file(m.graph_arc().clone(), &measure_to_file(m))
}
