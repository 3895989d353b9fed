//! Layered feed-forward networks.
//!
//! Every construct in this crate eventually evaluates as a [`LayeredNetwork`]:
//! nodes are partitioned into layers, layer 0 holds the inputs, the last layer
//! holds the outputs and every edge connects layer `k` to layer `k + 1`.
//! Arbitrary DAGs with uneven path depths are brought into that shape by
//! [`insert_phantom_nodes`], which splits long edges with identity pass-through
//! nodes.
//!
//! Node values are computed as `activation(bias + Σ weight · source)`. Input
//! nodes take their supplied value verbatim.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnError {
    #[error("input error: {0}")]
    Input(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = AnnError> = std::result::Result<T, E>;

/// Transfer function applied at a node after weighted summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    Identity,
    LogSigmoid,
    /// `u^n / (K^n + u^n)` for `u > 0`, zero otherwise.
    Hill {
        n: f64,
        k: f64,
    },
    /// 1 when `u >= theta`, else 0.
    Threshold {
        theta: f64,
    },
}

impl Default for Activation {
    fn default() -> Self {
        Activation::Hill { n: 2.0, k: 1.0 }
    }
}

impl Activation {
    pub fn apply(&self, u: f64) -> f64 {
        match *self {
            Activation::Identity => u,
            Activation::LogSigmoid => 1.0 / (1.0 + (-u).exp()),
            Activation::Hill { n, k } => {
                if u <= 0.0 {
                    0.0
                } else {
                    // algebraically u^n / (k^n + u^n), without overflowing u^n
                    1.0 / (1.0 + (k / u).powf(n))
                }
            }
            Activation::Threshold { theta } => {
                if u >= theta {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Activation::Hill { n, k } if !(n > 0.0 && n.is_finite() && k > 0.0 && k.is_finite()) => {
                Err(AnnError::Input(format!("hill parameters must be positive and finite, got n={n}, K={k}")))
            }
            Activation::Threshold { theta } if !theta.is_finite() => {
                Err(AnnError::Input(format!("threshold must be finite, got {theta}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activation::Identity => write!(f, "identity"),
            Activation::LogSigmoid => write!(f, "logsig"),
            Activation::Hill { n, k } => write!(f, "hill({n},{k})"),
            Activation::Threshold { theta } => write!(f, "threshold({theta})"),
        }
    }
}

impl FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let args = |name: &str| -> std::result::Result<Vec<f64>, String> {
            let inner = s
                .strip_prefix(name)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("malformed activation `{s}`"))?;
            inner
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|e| format!("bad activation argument `{a}`: {e}")))
                .collect()
        };
        let act = match s {
            "identity" => Activation::Identity,
            "logsig" | "log-sigmoid" => Activation::LogSigmoid,
            _ if s.starts_with("hill") => match args("hill")?.as_slice() {
                [n, k] => Activation::Hill { n: *n, k: *k },
                _ => return Err(format!("hill takes two arguments: `{s}`")),
            },
            _ if s.starts_with("threshold") => match args("threshold")?.as_slice() {
                [theta] => Activation::Threshold { theta: *theta },
                _ => return Err(format!("threshold takes one argument: `{s}`")),
            },
            _ => return Err(format!("unknown activation `{s}`")),
        };
        act.validate().map_err(|e| e.to_string())?;
        Ok(act)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Real,
    Phantom,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::Real => "real",
            NodeKind::Phantom => "phantom",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: String,
    pub kind: NodeKind,
    pub activation: Activation,
    pub bias: f64,
}

impl NodeSpec {
    pub fn real(id: impl Into<String>, activation: Activation) -> Self {
        NodeSpec { id: id.into(), kind: NodeKind::Real, activation, bias: 0.0 }
    }

    pub fn phantom(id: impl Into<String>) -> Self {
        NodeSpec { id: id.into(), kind: NodeKind::Phantom, activation: Activation::Identity, bias: 0.0 }
    }

    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self
    }

    fn value(&self, input_sum: f64) -> f64 {
        self.activation.apply(self.bias + input_sum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl Edge {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: f64) -> Self {
        Edge { source: source.into(), target: target.into(), weight }
    }
}

fn index_nodes(nodes: &[NodeSpec]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        if node.id.is_empty() || node.id.chars().any(char::is_whitespace) {
            return Err(AnnError::Structure(format!("invalid node id `{}`", node.id)));
        }
        if !node.bias.is_finite() {
            return Err(AnnError::Structure(format!("node `{}` has non-finite bias", node.id)));
        }
        node.activation.validate()?;
        if index.insert(node.id.clone(), i).is_some() {
            return Err(AnnError::Structure(format!("duplicate node id `{}`", node.id)));
        }
    }
    Ok(index)
}

/// Resolves edges to index pairs, rejecting unknown endpoints, self-edges,
/// duplicates and non-finite weights.
fn resolve_edges(edges: &[Edge], index: &HashMap<String, usize>) -> Result<Vec<(usize, usize)>> {
    let mut seen = HashSet::with_capacity(edges.len());
    edges
        .iter()
        .map(|e| {
            let lookup = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| AnnError::Structure(format!("edge references unknown node `{id}`")))
            };
            let (s, t) = (lookup(&e.source)?, lookup(&e.target)?);
            if s == t {
                return Err(AnnError::Structure(format!("self-edge on `{}`", e.source)));
            }
            if !e.weight.is_finite() {
                return Err(AnnError::Structure(format!("edge {} -> {} has non-finite weight", e.source, e.target)));
            }
            if !seen.insert((s, t)) {
                return Err(AnnError::Structure(format!("duplicate edge {} -> {}", e.source, e.target)));
            }
            Ok((s, t))
        })
        .collect()
}

fn check_inputs(values: &BTreeMap<String, f64>, expected: &[&str]) -> Result<()> {
    for id in expected {
        match values.get(*id) {
            None => return Err(AnnError::Input(format!("missing value for input `{id}`"))),
            Some(v) if !v.is_finite() => return Err(AnnError::Input(format!("non-finite value for input `{id}`"))),
            _ => {}
        }
    }
    if let Some(extra) = values.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(AnnError::Input(format!("`{extra}` is not an input node")));
    }
    Ok(())
}

/// A directed acyclic network with designated input and output nodes whose
/// input-to-output paths may differ in length.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedForwardDag {
    nodes: Vec<NodeSpec>,
    edges: Vec<Edge>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    index: HashMap<String, usize>,
    resolved: Vec<(usize, usize)>,
}

impl FeedForwardDag {
    pub fn new(nodes: Vec<NodeSpec>, edges: Vec<Edge>, inputs: Vec<String>, outputs: Vec<String>) -> Result<Self> {
        let index = index_nodes(&nodes)?;
        let resolved = resolve_edges(&edges, &index)?;
        if inputs.is_empty() || outputs.is_empty() {
            return Err(AnnError::Structure("network needs at least one input and one output".into()));
        }
        for id in inputs.iter().chain(&outputs) {
            if !index.contains_key(id) {
                return Err(AnnError::Structure(format!("designated node `{id}` does not exist")));
            }
        }
        let input_set: HashSet<&String> = inputs.iter().collect();
        if input_set.len() != inputs.len() || outputs.iter().collect::<HashSet<_>>().len() != outputs.len() {
            return Err(AnnError::Structure("duplicate entries in input or output list".into()));
        }
        if let Some(both) = outputs.iter().find(|o| input_set.contains(o)) {
            return Err(AnnError::Structure(format!("`{both}` is both an input and an output")));
        }
        Ok(FeedForwardDag { nodes, edges, inputs, outputs, index, resolved })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    /// Kahn's algorithm; ties resolved by node declaration order.
    fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let mut successors = vec![Vec::new(); n];
        for &(s, t) in &self.resolved {
            indegree[t] += 1;
            successors[s].push(t);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &t in &successors[v] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        if order.len() != n {
            return Err(AnnError::Structure("network contains a cycle".into()));
        }
        Ok(order)
    }

    fn incoming(&self) -> Vec<Vec<usize>> {
        let mut incoming = vec![Vec::new(); self.nodes.len()];
        for (ei, &(_, t)) in self.resolved.iter().enumerate() {
            incoming[t].push(ei);
        }
        incoming
    }

    /// Evaluates the DAG in topological order, without any layering.
    pub fn evaluate(&self, inputs: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
        let input_ids: Vec<&str> = self.inputs.iter().map(String::as_str).collect();
        check_inputs(inputs, &input_ids)?;
        let order = self.topological_order()?;
        let incoming = self.incoming();
        let mut values = vec![0.0; self.nodes.len()];
        for v in order {
            let node = &self.nodes[v];
            values[v] = match inputs.get(&node.id) {
                Some(&x) => x,
                None => {
                    let sum: f64 =
                        incoming[v].iter().map(|&ei| self.edges[ei].weight * values[self.resolved[ei].0]).sum();
                    node.value(sum)
                }
            };
        }
        Ok(self.outputs.iter().map(|id| (id.clone(), values[self.index[id]])).collect())
    }
}

/// Equalizes all input-to-output path lengths.
///
/// Nodes are ranked by longest distance from the inputs and every output is
/// moved to the deepest rank. An edge spanning `s > 1` ranks is replaced by a
/// chain of `s - 1` phantom nodes: the chain edges carry weight 1 and the last
/// edge keeps the original weight.
///
/// Inputs must have no incoming edges, outputs no outgoing edges, and every
/// node must lie on some input-to-output path.
pub fn insert_phantom_nodes(dag: &FeedForwardDag) -> Result<LayeredNetwork> {
    let n = dag.nodes.len();
    let order = dag.topological_order()?;
    let is_input: Vec<bool> = (0..n).map(|i| dag.inputs.contains(&dag.nodes[i].id)).collect();
    let is_output: Vec<bool> = (0..n).map(|i| dag.outputs.contains(&dag.nodes[i].id)).collect();

    let mut forward_reach = is_input.clone();
    let mut preds = vec![Vec::new(); n];
    let mut succs = vec![Vec::new(); n];
    for &(s, t) in &dag.resolved {
        if is_input[t] {
            return Err(AnnError::Structure(format!("input `{}` has an incoming edge", dag.nodes[t].id)));
        }
        if is_output[s] {
            return Err(AnnError::Structure(format!("output `{}` has an outgoing edge", dag.nodes[s].id)));
        }
        preds[t].push(s);
        succs[s].push(t);
    }

    let mut rank = vec![0usize; n];
    for &v in &order {
        for &p in &preds[v] {
            if forward_reach[p] {
                forward_reach[v] = true;
                rank[v] = rank[v].max(rank[p] + 1);
            }
        }
    }
    let mut backward_reach = is_output.clone();
    for &v in order.iter().rev() {
        if succs[v].iter().any(|&s| backward_reach[s]) {
            backward_reach[v] = true;
        }
    }
    if let Some(v) = (0..n).find(|&v| !(forward_reach[v] && backward_reach[v])) {
        return Err(AnnError::Structure(format!("node `{}` lies on no input-to-output path", dag.nodes[v].id)));
    }

    let depth = (0..n).filter(|&v| is_output[v]).map(|v| rank[v]).max().unwrap_or(0);
    for v in 0..n {
        if is_output[v] {
            rank[v] = depth;
        }
    }

    let mut taken: HashSet<String> = dag.nodes.iter().map(|nd| nd.id.clone()).collect();
    let mut nodes = dag.nodes.clone();
    let mut node_rank = rank.clone();
    let mut edges = Vec::with_capacity(dag.edges.len());
    for (edge, &(s, t)) in dag.edges.iter().zip(&dag.resolved) {
        let span = rank[t] - rank[s];
        let mut prev = edge.source.clone();
        for k in 1..span {
            let mut id = format!("{}~{}~{}", edge.source, edge.target, k);
            while !taken.insert(id.clone()) {
                id.push('\'');
            }
            nodes.push(NodeSpec::phantom(id.clone()));
            node_rank.push(rank[s] + k);
            edges.push(Edge::new(prev, id.clone(), 1.0));
            prev = id;
        }
        edges.push(Edge::new(prev, edge.target.clone(), edge.weight));
    }

    let mut by_layer = vec![Vec::new(); depth + 1];
    for (node, &r) in nodes.into_iter().zip(&node_rank) {
        by_layer[r].push(node);
    }
    let layers = by_layer.iter().map(|l| l.iter().map(|n| n.id.clone()).collect()).collect();
    LayeredNetwork::new(by_layer.into_iter().flatten().collect(), layers, edges)
}

/// Strictly layered feed-forward network.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredNetwork {
    nodes: Vec<NodeSpec>,
    layers: Vec<Vec<String>>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    resolved: Vec<(usize, usize)>,
}

impl LayeredNetwork {
    pub fn new(nodes: Vec<NodeSpec>, layers: Vec<Vec<String>>, edges: Vec<Edge>) -> Result<Self> {
        let index = index_nodes(&nodes)?;
        let resolved = resolve_edges(&edges, &index)?;
        if layers.len() < 2 {
            return Err(AnnError::Structure("a layered network needs at least two layers".into()));
        }
        let mut layer_of = vec![usize::MAX; nodes.len()];
        for (k, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(AnnError::Structure(format!("layer {k} is empty")));
            }
            for id in layer {
                let &i =
                    index.get(id).ok_or_else(|| AnnError::Structure(format!("layer {k} names unknown node `{id}`")))?;
                if layer_of[i] != usize::MAX {
                    return Err(AnnError::Structure(format!("node `{id}` appears in more than one layer slot")));
                }
                layer_of[i] = k;
            }
        }
        if let Some(i) = layer_of.iter().position(|&l| l == usize::MAX) {
            return Err(AnnError::Structure(format!("node `{}` is not assigned to a layer", nodes[i].id)));
        }
        let mut fan_in = vec![0usize; nodes.len()];
        let mut fan_out = vec![0usize; nodes.len()];
        for (e, &(s, t)) in edges.iter().zip(&resolved) {
            if layer_of[t] != layer_of[s] + 1 {
                return Err(AnnError::Structure(format!(
                    "edge {} -> {} skips from layer {} to layer {}",
                    e.source, e.target, layer_of[s], layer_of[t]
                )));
            }
            fan_in[t] += 1;
            fan_out[s] += 1;
            if nodes[t].kind == NodeKind::Phantom && e.weight != 1.0 {
                return Err(AnnError::Structure(format!("phantom `{}` must be fed with weight 1", e.target)));
            }
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.kind == NodeKind::Phantom
                && (node.activation != Activation::Identity || node.bias != 0.0 || fan_in[i] != 1 || fan_out[i] != 1)
            {
                return Err(AnnError::Structure(format!(
                    "phantom `{}` must be an identity pass-through with one incoming and one outgoing edge",
                    node.id
                )));
            }
        }
        Ok(LayeredNetwork { nodes, layers, edges, index, resolved })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn layers(&self) -> &[Vec<String>] {
        &self.layers
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: &str) -> Option<&NodeSpec> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn inputs(&self) -> &[String] {
        &self.layers[0]
    }

    pub fn outputs(&self) -> &[String] {
        self.layers.last().expect("at least two layers")
    }

    pub fn phantom_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Phantom).count()
    }

    pub fn weight(&self, source: &str, target: &str) -> Option<f64> {
        self.edges.iter().find(|e| e.source == source && e.target == target).map(|e| e.weight)
    }

    /// Replaces the weight of an existing edge. Returns `false` if there is no
    /// such edge; the structure never changes.
    pub fn set_weight(&mut self, source: &str, target: &str, weight: f64) -> bool {
        match self.edges.iter_mut().find(|e| e.source == source && e.target == target) {
            Some(e) if weight.is_finite() => {
                e.weight = weight;
                true
            }
            _ => false,
        }
    }

    /// Evaluates every node and returns the values of all of them, keyed by id.
    pub fn evaluate_all(&self, inputs: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
        let input_ids: Vec<&str> = self.layers[0].iter().map(String::as_str).collect();
        check_inputs(inputs, &input_ids)?;
        let mut incoming = vec![Vec::new(); self.nodes.len()];
        for (ei, &(_, t)) in self.resolved.iter().enumerate() {
            incoming[t].push(ei);
        }
        let mut values = vec![0.0; self.nodes.len()];
        for id in &self.layers[0] {
            values[self.index[id]] = inputs[id];
        }
        for layer in &self.layers[1..] {
            for id in layer {
                let v = self.index[id];
                let sum: f64 = incoming[v].iter().map(|&ei| self.edges[ei].weight * values[self.resolved[ei].0]).sum();
                values[v] = self.nodes[v].value(sum);
            }
        }
        Ok(self.nodes.iter().zip(values).map(|(n, v)| (n.id.clone(), v)).collect())
    }

    /// Layer-by-layer evaluation returning the output layer.
    pub fn forward(&self, inputs: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
        let mut all = self.evaluate_all(inputs)?;
        Ok(self.outputs().iter().map(|id| (id.clone(), all.remove(id).expect("evaluated"))).collect())
    }

    /// Line-oriented text form; see [`LayeredNetwork::from_text`].
    pub fn to_text(&self) -> String {
        let mut out =
            String::from("# layered network: node <id> <kind> <activation> <bias> / edge <src> <dst> <weight>\n");
        for layer in &self.layers {
            for id in layer {
                let n = &self.nodes[self.index[id]];
                out.push_str(&format!("node {} {} {} {}\n", n.id, n.kind, n.activation, n.bias));
            }
        }
        for e in &self.edges {
            out.push_str(&format!("edge {} {} {}\n", e.source, e.target, e.weight));
        }
        out
    }

    /// Parses the text form.
    ///
    /// ```text
    /// # comment
    /// node <id> <real|phantom> <identity|logsig|hill(n,K)|threshold(t)> <bias>
    /// edge <src> <dst> <weight>
    /// ```
    ///
    /// Nodes without incoming edges become inputs, nodes without outgoing edges
    /// become outputs, and layers are assigned by longest-path rank after
    /// phantom insertion.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| AnnError::Parse { line: ln + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |s: &str, what: &str| s.parse::<f64>().map_err(|e| err(format!("bad {what} `{s}`: {e}")));
            match fields.as_slice() {
                ["node", id, kind, act, bias] => {
                    let kind = match *kind {
                        "real" => NodeKind::Real,
                        "phantom" => NodeKind::Phantom,
                        other => return Err(err(format!("unknown node kind `{other}`"))),
                    };
                    let activation = act.parse::<Activation>().map_err(err)?;
                    nodes.push(NodeSpec { id: (*id).to_string(), kind, activation, bias: number(bias, "bias")? });
                }
                ["edge", src, dst, w] => edges.push(Edge::new(*src, *dst, number(w, "weight")?)),
                _ => return Err(err(format!("unrecognized record `{line}`"))),
            }
        }
        let has_in: HashSet<&str> = edges.iter().map(|e| e.target.as_str()).collect();
        let has_out: HashSet<&str> = edges.iter().map(|e| e.source.as_str()).collect();
        let inputs = nodes.iter().filter(|n| !has_in.contains(n.id.as_str())).map(|n| n.id.clone()).collect();
        let outputs = nodes.iter().filter(|n| !has_out.contains(n.id.as_str())).map(|n| n.id.clone()).collect();
        insert_phantom_nodes(&FeedForwardDag::new(nodes, edges, inputs, outputs)?)
    }
}

/// Mean of squared componentwise differences.
pub fn mse(actual: &[f64], target: &[f64]) -> Result<f64> {
    if actual.len() != target.len() {
        return Err(AnnError::Input(format!("length mismatch: {} vs {}", actual.len(), target.len())));
    }
    if actual.is_empty() {
        return Err(AnnError::Input("mse of empty vectors".into()));
    }
    let sum: f64 = actual.iter().zip(target).map(|(a, t)| (a - t) * (a - t)).sum();
    Ok(sum / actual.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub params: BTreeMap<String, f64>,
    pub error: f64,
}

/// Per-epoch parameter snapshots and error values of a training loop.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingTrace {
    epochs: Vec<EpochRecord>,
}

impl TrainingTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the next epoch and returns its index.
    pub fn record(&mut self, params: BTreeMap<String, f64>, error: f64) -> usize {
        debug_assert!(error >= 0.0, "training error must be non-negative");
        let epoch = self.epochs.len();
        self.epochs.push(EpochRecord { epoch, params, error });
        epoch
    }

    pub fn epochs(&self) -> &[EpochRecord] {
        &self.epochs
    }

    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }

    pub fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.epochs.iter().map(|e| e.error)
    }
}
