//! Gene regulatory networks as sources of ANN structure.
//!
//! A [`GrnGraph`] holds signed, relatively weighted regulatory interactions.
//! Subnetworks between chosen sensor and target genes are extracted into
//! [`LayeredNetwork`]s, environment conditions rescale individual
//! interactions, and [`mine_structures`] enumerates every fully connected
//! `i`-input / `j`-output perceptron layer present in the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::ann::{self, Activation, AnnError, Edge, FeedForwardDag, LayeredNetwork, NodeKind, NodeSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrnError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("input error: {0}")]
    Input(String),
    #[error("empty result: {0}")]
    EmptyResult(String),
    #[error("unmatched selectors: {}", .0.iter().map(|(s, t)| format!("{s}->{t}")).join(", "))]
    Selector(Vec<(String, String)>),
    #[error(transparent)]
    Network(#[from] AnnError),
}

pub type Result<T, E = GrnError> = std::result::Result<T, E>;

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| GrnError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Activation,
    Repression,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Activation => 1.0,
            Sign::Repression => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Activation => "+",
            Sign::Repression => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrnEdge {
    pub source: String,
    pub target: String,
    pub sign: Sign,
    /// Relative interaction strength in (0, 1].
    pub weight: f64,
}

impl GrnEdge {
    pub fn signed_weight(&self) -> f64 {
        self.sign.factor() * self.weight
    }
}

/// Directed regulatory-interaction graph.
///
/// Edges are kept in canonical `(source, target)` order, so two graphs built
/// from the same interactions compare equal regardless of insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GrnGraph {
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), (Sign, f64)>,
    successors: BTreeMap<String, BTreeSet<String>>,
    predecessors: BTreeMap<String, BTreeSet<String>>,
}

impl GrnGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>) {
        self.nodes.insert(id.into());
    }

    pub fn add_edge(&mut self, source: &str, target: &str, sign: Sign, weight: f64) -> Result<()> {
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(GrnError::Input(format!(
                "relative weight of {source}->{target} must lie in (0, 1], got {weight}"
            )));
        }
        for id in [source, target] {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(GrnError::Input(format!("invalid gene id `{id}`")));
            }
        }
        let key = (source.to_string(), target.to_string());
        if self.edges.contains_key(&key) {
            return Err(GrnError::Input(format!("duplicate edge {source}->{target}")));
        }
        self.edges.insert(key, (sign, weight));
        self.nodes.insert(source.to_string());
        self.nodes.insert(target.to_string());
        self.successors.entry(source.to_string()).or_default().insert(target.to_string());
        self.predecessors.entry(target.to_string()).or_default().insert(source.to_string());
        Ok(())
    }

    /// Parses `source<TAB>target<TAB>+|-<TAB>weight` lines; `#` starts a
    /// comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph = GrnGraph::new();
        let mut first_seen: BTreeMap<(String, String), usize> = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| GrnError::Parse { line: ln + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [source, target, sign, weight] = fields.as_slice() else {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            };
            let sign = match *sign {
                "+" => Sign::Activation,
                "-" => Sign::Repression,
                other => return Err(err(format!("sign must be + or -, got `{other}`"))),
            };
            let weight: f64 = weight.parse().map_err(|e| err(format!("bad weight `{weight}`: {e}")))?;
            let key = (source.to_string(), target.to_string());
            if let Some(prev) = first_seen.get(&key) {
                return Err(err(format!("duplicate edge {source}->{target} (first on line {prev})")));
            }
            first_seen.insert(key, ln + 1);
            graph.add_edge(source, target, sign, weight).map_err(|e| match e {
                GrnError::Input(m) => err(m),
                other => other,
            })?;
        }
        Ok(graph)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = GrnEdge> + '_ {
        self.edges.iter().map(|((s, t), &(sign, weight))| GrnEdge {
            source: s.clone(),
            target: t.clone(),
            sign,
            weight,
        })
    }

    pub fn edge(&self, source: &str, target: &str) -> Option<GrnEdge> {
        self.edges.get(&(source.to_string(), target.to_string())).map(|&(sign, weight)| GrnEdge {
            source: source.to_string(),
            target: target.to_string(),
            sign,
            weight,
        })
    }

    pub fn has_edge(&self, source: &str, target: &str) -> bool {
        self.successors.get(source).is_some_and(|s| s.contains(target))
    }

    pub fn successors(&self, id: &str) -> impl Iterator<Item = &String> {
        self.successors.get(id).into_iter().flatten()
    }

    pub fn predecessors(&self, id: &str) -> impl Iterator<Item = &String> {
        self.predecessors.get(id).into_iter().flatten()
    }
}

/// Multiplier applied to the weight of one interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeModifier {
    pub source: String,
    pub target: String,
    pub multiplier: f64,
}

/// Named environment (e.g. a growth temperature) and the interactions it
/// rescales.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentCondition {
    pub name: String,
    pub modifiers: Vec<EdgeModifier>,
}

impl EnvironmentCondition {
    pub fn new(name: impl Into<String>) -> Self {
        EnvironmentCondition { name: name.into(), modifiers: Vec::new() }
    }

    pub fn with_modifier(mut self, source: &str, target: &str, multiplier: f64) -> Self {
        self.modifiers.push(EdgeModifier { source: source.into(), target: target.into(), multiplier });
        self
    }

    /// Parses `source<TAB>target<TAB>multiplier` lines.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut cond = EnvironmentCondition::new(name);
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| GrnError::Parse { line: ln + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [source, target, mult] = fields.as_slice() else {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            };
            let multiplier: f64 = mult.parse().map_err(|e| err(format!("bad multiplier `{mult}`: {e}")))?;
            if !(multiplier > 0.0 && multiplier.is_finite()) {
                return Err(err(format!("multiplier must be positive, got {multiplier}")));
            }
            if cond.modifiers.iter().any(|m| m.source == *source && m.target == *target) {
                return Err(err(format!("selector {source}->{target} given twice")));
            }
            cond = cond.with_modifier(source, target, multiplier);
        }
        Ok(cond)
    }

    /// Loads a condition file; the condition is named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::parse(&name, &read_file(path)?)
    }
}

/// Follows phantom pass-through nodes back to the real node feeding them.
fn real_origin<'a>(net: &'a LayeredNetwork, mut id: &'a str) -> &'a str {
    while net.node(id).is_some_and(|n| n.kind == NodeKind::Phantom) {
        match net.edges().iter().find(|e| e.target == id) {
            Some(e) => id = &e.source,
            None => break,
        }
    }
    id
}

/// Returns a copy of `net` with the selected interaction weights multiplied.
///
/// A selector `(source, target)` matches the edge entering `target` whose
/// real origin is `source`, so interactions that were split by phantom nodes
/// are still addressed by their gene names.
pub fn apply_environment(net: &LayeredNetwork, cond: &EnvironmentCondition) -> Result<LayeredNetwork> {
    let mut out = net.clone();
    let mut unmatched = Vec::new();
    for m in &cond.modifiers {
        if !(m.multiplier > 0.0 && m.multiplier.is_finite()) {
            return Err(GrnError::Input(format!(
                "multiplier for {}->{} must be positive, got {}",
                m.source, m.target, m.multiplier
            )));
        }
        let hit = out
            .edges()
            .iter()
            .find(|e| e.target == m.target && real_origin(net, &e.source) == m.source)
            .map(|e| (e.source.clone(), e.weight));
        match hit {
            Some((source, w)) => {
                out.set_weight(&source, &m.target, w * m.multiplier);
            }
            None => unmatched.push((m.source.clone(), m.target.clone())),
        }
    }
    if unmatched.is_empty() {
        Ok(out)
    } else {
        Err(GrnError::Selector(unmatched))
    }
}

/// Extracts the part of `grn` lying on input-to-output paths of at most
/// `max_depth` hops and layers it.
///
/// Paths are simple, start at an input, end at the first output they reach,
/// and do not pass through other inputs or outputs. Non-input nodes get the
/// default Hill activation and edge weights carry the interaction sign.
pub fn extract_subnetwork(
    grn: &GrnGraph,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    max_depth: usize,
) -> Result<LayeredNetwork> {
    if inputs.is_empty() || outputs.is_empty() {
        return Err(GrnError::Input("inputs and outputs must be non-empty".into()));
    }
    if max_depth == 0 {
        return Err(GrnError::Input("max depth must be at least 1".into()));
    }
    if let Some(missing) = inputs.iter().chain(outputs).find(|id| !grn.nodes.contains(*id)) {
        return Err(GrnError::Input(format!("`{missing}` is not a node of the graph")));
    }
    if let Some(both) = inputs.intersection(outputs).next() {
        return Err(GrnError::Input(format!("`{both}` is both an input and an output")));
    }

    struct Search<'g> {
        grn: &'g GrnGraph,
        inputs: &'g BTreeSet<String>,
        outputs: &'g BTreeSet<String>,
        max_depth: usize,
        path: Vec<&'g String>,
        nodes: BTreeSet<&'g String>,
        edges: BTreeSet<(&'g String, &'g String)>,
    }

    impl<'g> Search<'g> {
        fn walk(&mut self) {
            let at = *self.path.last().expect("path starts at an input");
            for next in self.grn.successors(at) {
                if self.path.contains(&next) || self.inputs.contains(next) {
                    continue;
                }
                if self.outputs.contains(next) {
                    self.path.push(next);
                    self.nodes.extend(self.path.iter().copied());
                    self.edges.extend(self.path.iter().copied().tuple_windows::<(_, _)>());
                    self.path.pop();
                } else if self.path.len() < self.max_depth {
                    self.path.push(next);
                    self.walk();
                    self.path.pop();
                }
            }
        }
    }

    let mut search =
        Search { grn, inputs, outputs, max_depth, path: Vec::new(), nodes: BTreeSet::new(), edges: BTreeSet::new() };
    for input in inputs {
        search.path = vec![input];
        search.walk();
    }
    if search.edges.is_empty() {
        return Err(GrnError::EmptyResult(format!(
            "no path of at most {max_depth} hops from {{{}}} to {{{}}}",
            inputs.iter().join(","),
            outputs.iter().join(",")
        )));
    }

    let nodes = search
        .nodes
        .iter()
        .map(|id| {
            let act = if inputs.contains(*id) { Activation::Identity } else { Activation::default() };
            NodeSpec::real(id.as_str(), act)
        })
        .collect();
    let edges = search
        .edges
        .iter()
        .map(|(s, t)| {
            let e = grn.edge(s, t).expect("edge from graph");
            Edge::new(s.as_str(), t.as_str(), e.signed_weight())
        })
        .collect();
    let kept = |set: &BTreeSet<String>| set.iter().filter(|id| search.nodes.contains(id)).cloned().collect();
    let dag = FeedForwardDag::new(nodes, edges, kept(inputs), kept(outputs))?;
    Ok(ann::insert_phantom_nodes(&dag)?)
}

/// Requested structure shape: `inputs` sources fully connected to `outputs`
/// targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubnetworkQuery {
    pub inputs: usize,
    pub outputs: usize,
}

impl SubnetworkQuery {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        SubnetworkQuery { inputs, outputs }
    }
}

/// Fully connected one-hop bipartite structure found in a GRN.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinedStructure {
    /// Sorted input gene ids.
    pub inputs: Vec<String>,
    /// Sorted output gene ids.
    pub outputs: Vec<String>,
}

impl MinedStructure {
    /// Materializes the structure as a two-layer network using the graph's
    /// signed weights.
    pub fn to_network(&self, grn: &GrnGraph) -> Result<LayeredNetwork> {
        let mut nodes: Vec<NodeSpec> =
            self.inputs.iter().map(|id| NodeSpec::real(id.as_str(), Activation::Identity)).collect();
        nodes.extend(self.outputs.iter().map(|id| NodeSpec::real(id.as_str(), Activation::default())));
        let mut edges = Vec::with_capacity(self.inputs.len() * self.outputs.len());
        for s in &self.inputs {
            for t in &self.outputs {
                let e =
                    grn.edge(s, t).ok_or_else(|| GrnError::Input(format!("structure edge {s}->{t} not in graph")))?;
                edges.push(Edge::new(s.as_str(), t.as_str(), e.signed_weight()));
            }
        }
        Ok(LayeredNetwork::new(nodes, vec![self.inputs.clone(), self.outputs.clone()], edges)?)
    }
}

impl fmt::Display for MinedStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.inputs.join(","), self.outputs.join(","))
    }
}

fn validate_query(grn: &GrnGraph, q: SubnetworkQuery) -> Result<()> {
    if q.inputs == 0 || q.outputs == 0 {
        return Err(GrnError::Input("structures need at least one input and one output node".into()));
    }
    let n = grn.node_count();
    if q.inputs > n || q.outputs > n {
        return Err(GrnError::Input(format!("query ({}, {}) exceeds the graph's {n} nodes", q.inputs, q.outputs)));
    }
    Ok(())
}

/// Enumerates every fully connected `i`-input / `j`-output structure.
///
/// For each node, every `j`-subset of its successors forms a candidate output
/// group. The common predecessors of a group (excluding the group itself) are
/// the possible inputs, and each `i`-subset of them yields one structure.
/// Results are de-duplicated and sorted lexicographically.
pub fn mine_structures(grn: &GrnGraph, q: SubnetworkQuery) -> Result<Vec<MinedStructure>> {
    validate_query(grn, q)?;
    let mut groups: BTreeSet<Vec<&String>> = BTreeSet::new();
    for hub in &grn.nodes {
        let succ: Vec<&String> = grn.successors(hub).collect();
        groups.extend(succ.into_iter().combinations(q.outputs));
    }

    let mut found = BTreeSet::new();
    for group in groups {
        let mut common: BTreeSet<&String> = grn.predecessors(group[0]).collect();
        for t in &group[1..] {
            let preds: BTreeSet<&String> = grn.predecessors(t).collect();
            common.retain(|p| preds.contains(p));
        }
        for t in &group {
            common.remove(t);
        }
        for inputs in common.into_iter().combinations(q.inputs) {
            found.insert(MinedStructure {
                inputs: inputs.into_iter().cloned().collect(),
                outputs: group.iter().map(|s| (*s).clone()).collect(),
            });
        }
    }
    Ok(found.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureCount {
    pub inputs: usize,
    pub outputs: usize,
    pub count: usize,
}

/// Structure counts over a grid of shapes, ordered by `i` then `j`.
///
/// Shapes larger than the graph count as zero.
pub fn count_structures(
    grn: &GrnGraph,
    inputs: RangeInclusive<usize>,
    outputs: RangeInclusive<usize>,
) -> Result<Vec<StructureCount>> {
    if inputs.is_empty() || outputs.is_empty() {
        return Err(GrnError::Input("count ranges must be non-empty".into()));
    }
    if *inputs.start() == 0 || *outputs.start() == 0 {
        return Err(GrnError::Input("structures need at least one input and one output node".into()));
    }
    let cells: Vec<(usize, usize)> = inputs.cartesian_product(outputs).collect();
    cells
        .into_par_iter()
        .map(|(i, j)| {
            let n = grn.node_count();
            let count = if i > n || j > n { 0 } else { mine_structures(grn, SubnetworkQuery::new(i, j))?.len() };
            Ok(StructureCount { inputs: i, outputs: j, count })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str)]) -> GrnGraph {
        let mut g = GrnGraph::new();
        for (s, t) in edges {
            g.add_edge(s, t, Sign::Activation, 0.5).unwrap();
        }
        g
    }

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    fn structure(i: &[&str], o: &[&str]) -> MinedStructure {
        MinedStructure {
            inputs: i.iter().map(|s| s.to_string()).collect(),
            outputs: o.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn parse_empty_and_small_files() {
        let empty = GrnGraph::parse("# only a comment\n\n").unwrap();
        assert_eq!(empty.edge_count(), 0);
        let g = GrnGraph::parse("A\tB\t+\t0.5\nA\tC\t-\t0.25\nB\tC\t+\t1\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge("A", "C").unwrap().signed_weight(), -0.25);
    }

    #[test]
    fn parse_is_order_independent() {
        let a = GrnGraph::parse("A\tB\t+\t0.5\nB\tC\t-\t0.3\n").unwrap();
        let b = GrnGraph::parse("B\tC\t-\t0.3\nA\tB\t+\t0.5\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_rejects_duplicates_and_malformed_lines() {
        let dup = GrnGraph::parse("A\tB\t+\t0.5\n# x\nA\tB\t+\t0.7\n").unwrap_err();
        assert!(matches!(dup, GrnError::Parse { line: 3, ref message } if message.contains("duplicate")));
        assert!(matches!(GrnGraph::parse("A\tB\t+\n"), Err(GrnError::Parse { line: 1, .. })));
        assert!(matches!(GrnGraph::parse("A\tB\t*\t0.5\n"), Err(GrnError::Parse { line: 1, .. })));
        assert!(matches!(GrnGraph::parse("A\tB\t+\t1.5\n"), Err(GrnError::Parse { line: 1, .. })));
        assert!(matches!(GrnGraph::parse("A\tB\t+\t0\n"), Err(GrnError::Parse { line: 1, .. })));
    }

    #[test]
    fn extract_chain() {
        let g = graph(&[("A", "B"), ("B", "C")]);
        let net = extract_subnetwork(&g, &set(&["A"]), &set(&["C"]), 5).unwrap();
        assert_eq!(net.layers().len(), 3);
        assert_eq!(net.phantom_count(), 0);
    }

    #[test]
    fn extract_diamond_inserts_one_phantom() {
        let g = graph(&[("A", "C"), ("A", "B"), ("B", "C")]);
        let net = extract_subnetwork(&g, &set(&["A"]), &set(&["C"]), 5).unwrap();
        assert_eq!(net.phantom_count(), 1);
        assert_eq!(net.layers().len(), 3);
    }

    #[test]
    fn extract_respects_max_depth_and_reports_empty() {
        let g = graph(&[("A", "C"), ("A", "B"), ("B", "C"), ("Y", "Z")]);
        let net = extract_subnetwork(&g, &set(&["A"]), &set(&["C"]), 1).unwrap();
        assert_eq!(net.layers().len(), 2);
        assert!(net.node("B").is_none());
        assert!(matches!(extract_subnetwork(&g, &set(&["A"]), &set(&["Z"]), 4), Err(GrnError::EmptyResult(_))));
        assert!(matches!(extract_subnetwork(&g, &set(&["A"]), &set(&["A"]), 4), Err(GrnError::Input(_))));
    }

    #[test]
    fn extract_drops_off_path_nodes_and_keeps_signs() {
        let mut g = graph(&[("A", "B"), ("B", "C"), ("B", "D"), ("E", "B")]);
        g.add_edge("A", "F", Sign::Repression, 0.4).unwrap();
        g.add_edge("F", "C", Sign::Activation, 0.9).unwrap();
        let net = extract_subnetwork(&g, &set(&["A"]), &set(&["C"]), 3).unwrap();
        assert!(net.node("D").is_none());
        assert!(net.node("E").is_none());
        assert_eq!(net.weight("A", "F"), Some(-0.4));
    }

    #[test]
    fn environment_multiplies_selected_weights() {
        let mut g = GrnGraph::new();
        g.add_edge("hn21", "rhlR", Sign::Activation, 0.3).unwrap();
        g.add_edge("lasR", "rhlR", Sign::Activation, 0.5).unwrap();
        let net = extract_subnetwork(&g, &set(&["hn21", "lasR"]), &set(&["rhlR"]), 2).unwrap();

        let same =
            apply_environment(&net, &EnvironmentCondition::new("30C").with_modifier("hn21", "rhlR", 1.0)).unwrap();
        assert_eq!(same, net);

        let hot = apply_environment(&net, &EnvironmentCondition::new("x").with_modifier("hn21", "rhlR", 2.0)).unwrap();
        assert!((hot.weight("hn21", "rhlR").unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(hot.weight("lasR", "rhlR"), Some(0.5));
        assert_eq!(net.weight("hn21", "rhlR"), Some(0.3));
    }

    #[test]
    fn environment_reports_every_unmatched_selector() {
        let g = graph(&[("A", "B")]);
        let net = extract_subnetwork(&g, &set(&["A"]), &set(&["B"]), 1).unwrap();
        let cond = EnvironmentCondition::new("bad").with_modifier("A", "X", 2.0).with_modifier("Q", "B", 2.0);
        assert_eq!(
            apply_environment(&net, &cond).unwrap_err(),
            GrnError::Selector(vec![("A".into(), "X".into()), ("Q".into(), "B".into())])
        );
    }

    #[test]
    fn environment_addresses_phantom_split_edges() {
        let g = graph(&[("A", "C"), ("A", "B"), ("B", "C")]);
        let net = extract_subnetwork(&g, &set(&["A"]), &set(&["C"]), 3).unwrap();
        let out = apply_environment(&net, &EnvironmentCondition::new("x").with_modifier("A", "C", 3.0)).unwrap();
        let phantom_edge = out.edges().iter().find(|e| e.target == "C" && e.source != "B").unwrap();
        assert!((phantom_edge.weight - 1.5).abs() < 1e-12);
    }

    #[test]
    fn environment_file_parse() {
        let c = EnvironmentCondition::parse("37C", "# temp\nhn21\trhlR\t2.5\n").unwrap();
        assert_eq!(c.modifiers.len(), 1);
        assert!(EnvironmentCondition::parse("x", "a\tb\t-1\n").is_err());
        assert!(EnvironmentCondition::parse("x", "a\tb\t2\na\tb\t3\n").is_err());
    }

    #[test]
    fn mine_star() {
        let g = graph(&[("A", "B"), ("A", "C"), ("A", "D")]);
        let got = mine_structures(&g, SubnetworkQuery::new(1, 2)).unwrap();
        assert_eq!(
            got,
            vec![structure(&["A"], &["B", "C"]), structure(&["A"], &["B", "D"]), structure(&["A"], &["C", "D"])]
        );
    }

    #[test]
    fn mine_single_edges_and_complete_bipartite() {
        let g = graph(&[("A", "B"), ("B", "C"), ("C", "A"), ("A", "C")]);
        assert_eq!(mine_structures(&g, SubnetworkQuery::new(1, 1)).unwrap().len(), g.edge_count());

        let k23 = graph(&[("A", "X"), ("A", "Y"), ("A", "Z"), ("B", "X"), ("B", "Y"), ("B", "Z")]);
        assert_eq!(
            mine_structures(&k23, SubnetworkQuery::new(2, 3)).unwrap(),
            vec![structure(&["A", "B"], &["X", "Y", "Z"])]
        );
    }

    #[test]
    fn mine_rejects_bad_queries() {
        let g = graph(&[("A", "B")]);
        assert!(matches!(mine_structures(&g, SubnetworkQuery::new(0, 1)), Err(GrnError::Input(_))));
        assert!(matches!(mine_structures(&g, SubnetworkQuery::new(1, 3)), Err(GrnError::Input(_))));
    }

    #[test]
    fn counts_on_star_and_empty_graph() {
        let g = graph(&[("A", "B"), ("A", "C"), ("A", "D")]);
        let table = count_structures(&g, 1..=2, 1..=3).unwrap();
        let count = |i, j| table.iter().find(|c| c.inputs == i && c.outputs == j).unwrap().count;
        assert_eq!(count(1, 2), 3);
        assert_eq!(count(1, 3), 1);
        assert_eq!(count(2, 1), 0);
        let order: Vec<_> = table.iter().map(|c| (c.inputs, c.outputs)).collect();
        assert_eq!(order, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]);

        let empty = count_structures(&GrnGraph::new(), 1..=3, 1..=5).unwrap();
        assert_eq!(empty.len(), 15);
        assert!(empty.iter().all(|c| c.count == 0));
        assert!(count_structures(&g, 0..=1, 1..=1).is_err());
    }
}
