//! Multi-species bacterial networks whose edge weights come from population
//! sizes.
//!
//! Species are nodes arranged in layers. A species in layer `k` is connected
//! to a species in layer `k + 1` for every metabolite the first produces and
//! the second consumes. The weight of such an edge is
//! `P_producer * P_consumer / weight_scale`, so training the network means
//! adjusting population sizes.
//!
//! Signal propagation is a steady-state cascade: external glucose is shared
//! among the first layer in proportion to population, every species emits
//! `yield * uptake` of each metabolite it produces, and an emitted metabolite
//! is split among its downstream consumers in proportion to edge weight. A
//! consumer's uptake is the weight-scaled sum of the shares it receives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::ann::TrainingTrace;

/// External input metabolite consumed by the first layer.
pub const GLUCOSE: &str = "glucose";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PopulationError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("input error: {0}")]
    Input(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = PopulationError> = std::result::Result<T, E>;

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| PopulationError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesNode {
    pub name: String,
    /// Cells, arbitrary units.
    pub population: f64,
    pub layer: usize,
    pub consumes: BTreeSet<String>,
    /// Output units emitted per unit taken up.
    pub produces: BTreeMap<String, f64>,
}

impl SpeciesNode {
    pub fn new(name: impl Into<String>, layer: usize, population: f64) -> Self {
        SpeciesNode { name: name.into(), population, layer, consumes: BTreeSet::new(), produces: BTreeMap::new() }
    }

    pub fn consuming(mut self, metabolite: &str) -> Self {
        self.consumes.insert(metabolite.to_string());
        self
    }

    pub fn producing(mut self, metabolite: &str, yield_coefficient: f64) -> Self {
        self.produces.insert(metabolite.to_string(), yield_coefficient);
        self
    }
}

/// Cross-feeding link: `producer` emits `metabolite`, `consumer` takes it up.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaboliteEdge {
    pub producer: String,
    pub consumer: String,
    pub metabolite: String,
}

impl MetaboliteEdge {
    pub fn new(producer: &str, consumer: &str, metabolite: &str) -> Self {
        MetaboliteEdge { producer: producer.into(), consumer: consumer.into(), metabolite: metabolite.into() }
    }
}

impl fmt::Display for MetaboliteEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.producer, self.consumer, self.metabolite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EdgeIx {
    producer: usize,
    consumer: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationAnn {
    species: Vec<SpeciesNode>,
    weight_scale: f64,
    edges: Vec<MetaboliteEdge>,
    edge_ix: Vec<EdgeIx>,
}

impl PopulationAnn {
    pub fn new(species: Vec<SpeciesNode>, weight_scale: f64) -> Result<Self> {
        let mut names = BTreeSet::new();
        for s in &species {
            if s.name.is_empty() || s.name.chars().any(|c| c.is_whitespace() || c == '.') {
                return Err(PopulationError::Input(format!("invalid species name `{}`", s.name)));
            }
            if !names.insert(s.name.as_str()) {
                return Err(PopulationError::Input(format!("duplicate species `{}`", s.name)));
            }
            if !(s.population >= 0.0 && s.population.is_finite()) {
                return Err(PopulationError::Input(format!("population of `{}` must be finite and >= 0", s.name)));
            }
            if let Some((m, y)) = s.produces.iter().find(|(_, y)| !(**y >= 0.0 && y.is_finite())) {
                return Err(PopulationError::Input(format!("yield of {m} by `{}` must be >= 0, got {y}", s.name)));
            }
            if s.layer == 0 && s.consumes.iter().any(|m| m != GLUCOSE) {
                return Err(PopulationError::Input(format!(
                    "first-layer species `{}` may only consume {GLUCOSE}",
                    s.name
                )));
            }
            if s.layer > 0 && s.consumes.contains(GLUCOSE) {
                return Err(PopulationError::Input(format!(
                    "only first-layer species consume {GLUCOSE}: `{}`",
                    s.name
                )));
            }
        }
        if species.is_empty() {
            return Err(PopulationError::Input("network has no species".into()));
        }
        let depth = species.iter().map(|s| s.layer).max().unwrap_or(0);
        if let Some(gap) = (0..=depth).find(|l| !species.iter().any(|s| s.layer == *l)) {
            return Err(PopulationError::Input(format!("layer {gap} has no species")));
        }

        let mut edges = Vec::new();
        for (pi, p) in species.iter().enumerate() {
            for (ci, c) in species.iter().enumerate() {
                if c.layer != p.layer + 1 {
                    continue;
                }
                for m in p.produces.keys().filter(|m| c.consumes.contains(*m)) {
                    edges.push((MetaboliteEdge::new(&p.name, &c.name, m), EdgeIx { producer: pi, consumer: ci }));
                }
            }
        }
        let (edges, edge_ix) = edges.into_iter().unzip();
        let net = PopulationAnn { species, weight_scale, edges, edge_ix };
        net.check_scale()?;
        Ok(net)
    }

    fn check_scale(&self) -> Result<()> {
        if self.weight_scale > 0.0 && self.weight_scale.is_finite() {
            Ok(())
        } else {
            Err(PopulationError::Config(format!("weight scale must be positive and finite, got {}", self.weight_scale)))
        }
    }

    /// Parses `species<TAB>layer<TAB>population<TAB>consumes<TAB>produces`
    /// lines where `consumes` is a comma list of metabolites and `produces` a
    /// comma list of `metabolite:yield`. `-` marks an empty list.
    pub fn parse(text: &str, weight_scale: f64) -> Result<Self> {
        let mut species = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PopulationError::Parse { line: ln + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [name, layer, population, consumes, produces] = fields.as_slice() else {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            };
            let list = |s: &str| -> Vec<String> {
                if s == "-" {
                    Vec::new()
                } else {
                    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
                }
            };
            let mut node = SpeciesNode::new(
                *name,
                layer.parse().map_err(|e| err(format!("bad layer `{layer}`: {e}")))?,
                population.parse().map_err(|e| err(format!("bad population `{population}`: {e}")))?,
            );
            node.consumes = list(consumes).into_iter().collect();
            for item in list(produces) {
                let (m, y) =
                    item.split_once(':').ok_or_else(|| err(format!("expected metabolite:yield, got `{item}`")))?;
                let y: f64 = y.parse().map_err(|e| err(format!("bad yield `{y}`: {e}")))?;
                if node.produces.insert(m.to_string(), y).is_some() {
                    return Err(err(format!("metabolite `{m}` listed twice")));
                }
            }
            species.push(node);
        }
        Self::new(species, weight_scale)
    }

    pub fn load(path: impl AsRef<Path>, weight_scale: f64) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?, weight_scale)
    }

    pub fn species(&self) -> &[SpeciesNode] {
        &self.species
    }

    pub fn weight_scale(&self) -> f64 {
        self.weight_scale
    }

    pub fn edges(&self) -> &[MetaboliteEdge] {
        &self.edges
    }

    pub fn metabolites(&self) -> BTreeSet<&str> {
        self.species.iter().flat_map(|s| s.produces.keys().map(String::as_str)).collect()
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.species
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| PopulationError::Input(format!("unknown species `{name}`")))
    }

    pub fn population(&self, name: &str) -> Result<f64> {
        Ok(self.species[self.index_of(name)?].population)
    }

    pub fn set_population(&mut self, name: &str, population: f64) -> Result<()> {
        if !(population >= 0.0 && population.is_finite()) {
            return Err(PopulationError::Input(format!("population must be finite and >= 0, got {population}")));
        }
        let i = self.index_of(name)?;
        self.species[i].population = population;
        Ok(())
    }

    fn weight_at(&self, e: EdgeIx) -> f64 {
        self.species[e.producer].population * self.species[e.consumer].population / self.weight_scale
    }

    /// `P_producer * P_consumer / weight_scale`.
    pub fn edge_weight(&self, edge: &MetaboliteEdge) -> Result<f64> {
        let i = self
            .edges
            .iter()
            .position(|e| e == edge)
            .ok_or_else(|| PopulationError::Input(format!("`{edge}` is not an edge of the network")))?;
        Ok(self.weight_at(self.edge_ix[i]))
    }

    pub fn weights(&self) -> Vec<(MetaboliteEdge, f64)> {
        self.edges.iter().zip(&self.edge_ix).map(|(e, &ix)| (e.clone(), self.weight_at(ix))).collect()
    }

    /// Full steady-state cascade for a given glucose input.
    pub fn propagate(&self, glucose: f64) -> Result<Propagation> {
        if !(glucose >= 0.0 && glucose.is_finite()) {
            return Err(PopulationError::Input(format!("glucose input must be finite and >= 0, got {glucose}")));
        }
        let n = self.species.len();
        let mut uptake = vec![0.0; n];
        let first: Vec<usize> =
            (0..n).filter(|&i| self.species[i].layer == 0 && self.species[i].consumes.contains(GLUCOSE)).collect();
        let total: f64 = first.iter().map(|&i| self.species[i].population).sum();
        if total > 0.0 {
            for &i in &first {
                uptake[i] = glucose * self.species[i].population / total;
            }
        }

        let weights: Vec<f64> = self.edge_ix.iter().map(|&ix| self.weight_at(ix)).collect();
        // weight mass leaving each (producer, metabolite)
        let mut outgoing: BTreeMap<(usize, &str), f64> = BTreeMap::new();
        for ((e, ix), w) in self.edges.iter().zip(&self.edge_ix).zip(&weights) {
            *outgoing.entry((ix.producer, e.metabolite.as_str())).or_default() += w;
        }

        let depth = self.species.iter().map(|s| s.layer).max().unwrap_or(0);
        let mut edge_flux = vec![0.0; self.edges.len()];
        for layer in 1..=depth {
            for (k, (e, ix)) in self.edges.iter().zip(&self.edge_ix).enumerate() {
                if self.species[ix.consumer].layer != layer {
                    continue;
                }
                let producer = &self.species[ix.producer];
                let emitted = producer.produces[&e.metabolite] * uptake[ix.producer];
                let mass = outgoing[&(ix.producer, e.metabolite.as_str())];
                if mass > 0.0 {
                    edge_flux[k] = emitted * weights[k] / mass;
                    uptake[ix.consumer] += weights[k] * edge_flux[k];
                }
            }
        }

        let mut totals: BTreeMap<String, f64> = self.metabolites().into_iter().map(|m| (m.to_string(), 0.0)).collect();
        for (s, u) in self.species.iter().zip(&uptake) {
            for (m, y) in &s.produces {
                *totals.get_mut(m).expect("listed metabolite") += y * u;
            }
        }
        Ok(Propagation {
            uptake: self.species.iter().map(|s| s.name.clone()).zip(uptake).collect(),
            edge_flux: self.edges.iter().cloned().zip(edge_flux).collect(),
            totals,
        })
    }

    /// Total amount of every metabolite emitted by the network.
    pub fn forward_metabolites(&self, glucose: f64) -> Result<BTreeMap<String, f64>> {
        Ok(self.propagate(glucose)?.totals)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    /// Amount taken up by each species.
    pub uptake: BTreeMap<String, f64>,
    /// Share of the producer's emission delivered along each edge.
    pub edge_flux: Vec<(MetaboliteEdge, f64)>,
    /// Emitted amount per metabolite summed over all species.
    pub totals: BTreeMap<String, f64>,
}

/// Desired edge weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TargetWeights(pub BTreeMap<MetaboliteEdge, f64>);

impl TargetWeights {
    /// Targets equal to the network's current weights.
    pub fn from_network(net: &PopulationAnn) -> Self {
        TargetWeights(net.weights().into_iter().collect())
    }

    /// Parses `producer<TAB>consumer<TAB>metabolite<TAB>weight` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PopulationError::Parse { line: ln + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [p, c, m, w] = fields.as_slice() else {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            };
            let w: f64 = w.parse().map_err(|e| err(format!("bad weight `{w}`: {e}")))?;
            if !(w >= 0.0 && w.is_finite()) {
                return Err(err(format!("target weight must be finite and >= 0, got {w}")));
            }
            if map.insert(MetaboliteEdge::new(p, c, m), w).is_some() {
                return Err(err(format!("duplicate target for {p}.{c}.{m}")));
            }
        }
        Ok(TargetWeights(map))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# producer\tconsumer\tmetabolite\tweight\n");
        for (e, w) in &self.0 {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", e.producer, e.consumer, e.metabolite, w));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    /// Gradient step size.
    pub step: f64,
    pub max_epochs: usize,
    /// Training stops once the weight MSE drops below this value.
    pub tol: f64,
    /// Species whose populations are held fixed.
    pub frozen: BTreeSet<String>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig { step: 0.05, max_epochs: 10_000, tol: 1e-10, frozen: BTreeSet::new() }
    }
}

fn resolve_targets(net: &PopulationAnn, target: &TargetWeights) -> Result<Vec<(EdgeIx, f64)>> {
    if target.0.is_empty() {
        return Err(PopulationError::Input("no target weights given".into()));
    }
    target
        .0
        .iter()
        .map(|(edge, &w)| {
            let i = net
                .edges
                .iter()
                .position(|e| e == edge)
                .ok_or_else(|| PopulationError::Input(format!("target `{edge}` is not an edge of the network")))?;
            Ok((net.edge_ix[i], w))
        })
        .collect()
}

/// Mean squared difference between current and target weights.
pub fn weight_mse(net: &PopulationAnn, target: &TargetWeights) -> Result<f64> {
    let targets = resolve_targets(net, target)?;
    Ok(targets.iter().map(|&(ix, t)| (net.weight_at(ix) - t).powi(2)).sum::<f64>() / targets.len() as f64)
}

/// Trace keys under which population and weight snapshots are recorded.
pub fn population_key(species: &str) -> String {
    format!("pop.{species}")
}

pub fn weight_key(edge: &MetaboliteEdge) -> String {
    format!("w.{edge}")
}

/// Gradient descent on `L = Σ (w_e - target_e)²` over population sizes.
///
/// With `w = P_p P_c / s`, `∂L/∂P_k = (2 / s) Σ_e (w_e - t_e) · P_other(e, k)`
/// over every target edge touching species `k`. Populations are clamped at
/// zero. Epoch 0 of the trace is the untrained network; each later epoch
/// follows one update. The error recorded is the mean over target edges.
pub fn train_populations(
    net: &PopulationAnn,
    target: &TargetWeights,
    cfg: &TrainingConfig,
) -> Result<(PopulationAnn, TrainingTrace)> {
    net.check_scale()?;
    if !(cfg.step > 0.0 && cfg.step.is_finite()) {
        return Err(PopulationError::Config(format!("step must be positive, got {}", cfg.step)));
    }
    if cfg.tol.is_nan() || cfg.tol < 0.0 {
        return Err(PopulationError::Config(format!("tolerance must be >= 0, got {}", cfg.tol)));
    }
    let targets = resolve_targets(net, target)?;
    let frozen: Vec<bool> = net.species.iter().map(|s| cfg.frozen.contains(&s.name)).collect();
    if let Some(unknown) = cfg.frozen.iter().find(|f| !net.species.iter().any(|s| &&s.name == f)) {
        return Err(PopulationError::Input(format!("cannot freeze unknown species `{unknown}`")));
    }

    let mut net = net.clone();
    let mut trace = TrainingTrace::new();
    let scale = net.weight_scale;
    for epoch in 0..=cfg.max_epochs {
        let residuals: Vec<(EdgeIx, f64)> = targets.iter().map(|&(ix, t)| (ix, net.weight_at(ix) - t)).collect();
        let mse = residuals.iter().map(|(_, r)| r * r).sum::<f64>() / residuals.len() as f64;
        trace.record(snapshot(&net), mse);
        if mse < cfg.tol || epoch == cfg.max_epochs {
            break;
        }
        let mut grad = vec![0.0; net.species.len()];
        for &(ix, r) in &residuals {
            grad[ix.producer] += 2.0 * r * net.species[ix.consumer].population / scale;
            grad[ix.consumer] += 2.0 * r * net.species[ix.producer].population / scale;
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(PopulationError::Config("non-finite gradient".into()));
        }
        for ((s, g), fixed) in net.species.iter_mut().zip(&grad).zip(&frozen) {
            if !fixed {
                s.population = (s.population - cfg.step * g).max(0.0);
            }
        }
    }
    Ok((net, trace))
}

fn snapshot(net: &PopulationAnn) -> BTreeMap<String, f64> {
    let mut params: BTreeMap<String, f64> =
        net.species.iter().map(|s| (population_key(&s.name), s.population)).collect();
    params.extend(net.weights().into_iter().map(|(e, w)| (weight_key(&e), w)));
    params
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub fraction: f64,
    pub acetate: f64,
    pub propionate: f64,
    pub butyrate: f64,
}

/// Re-evaluates the network with `species` scaled to each fraction of its
/// current (baseline) population. The baseline is restored before returning.
pub fn sensitivity_sweep(
    net: &mut PopulationAnn,
    species: &str,
    fractions: &[f64],
    glucose: f64,
) -> Result<Vec<SweepRow>> {
    let i = net.index_of(species)?;
    if let Some(f) = fractions.iter().find(|f| !(**f >= 0.0 && f.is_finite())) {
        return Err(PopulationError::Input(format!("fractions must be finite and >= 0, got {f}")));
    }
    let baseline = net.species[i].population;
    let rows = fractions
        .iter()
        .map(|&fraction| {
            net.species[i].population = fraction * baseline;
            let totals = net.forward_metabolites(glucose)?;
            let get = |m: &str| totals.get(m).copied().unwrap_or(0.0);
            Ok(SweepRow { fraction, acetate: get("acetate"), propionate: get("propionate"), butyrate: get("butyrate") })
        })
        .collect();
    net.species[i].population = baseline;
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(p_prod: f64, p_cons: f64, scale: f64) -> PopulationAnn {
        PopulationAnn::new(
            vec![
                SpeciesNode::new("P", 0, p_prod).consuming(GLUCOSE).producing("lactate", 1.0),
                SpeciesNode::new("C", 1, p_cons).consuming("lactate").producing("butyrate", 1.0),
            ],
            scale,
        )
        .unwrap()
    }

    fn edge() -> MetaboliteEdge {
        MetaboliteEdge::new("P", "C", "lactate")
    }

    #[test]
    fn edge_weight_examples() {
        assert_eq!(chain(0.0, 5.0, 1.0).edge_weight(&edge()).unwrap(), 0.0);
        assert_eq!(chain(100.0, 50.0, 1000.0).edge_weight(&edge()).unwrap(), 5.0);
        let w1 = chain(3.0, 2.0, 7.0).edge_weight(&edge()).unwrap();
        let w2 = chain(6.0, 2.0, 7.0).edge_weight(&edge()).unwrap();
        assert!((w2 - 2.0 * w1).abs() < 1e-15);
        assert!(matches!(
            chain(1.0, 1.0, 1.0).edge_weight(&MetaboliteEdge::new("C", "P", "lactate")),
            Err(PopulationError::Input(_))
        ));
    }

    #[test]
    fn edges_follow_layers_and_metabolites() {
        let net = PopulationAnn::new(
            vec![
                SpeciesNode::new("A", 0, 1.0).consuming(GLUCOSE).producing("acetate", 1.0).producing("lactate", 1.0),
                SpeciesNode::new("B", 1, 1.0).consuming("acetate"),
                SpeciesNode::new("C", 1, 1.0).consuming("propionate"),
                SpeciesNode::new("D", 2, 1.0).consuming("acetate"),
            ],
            1.0,
        );
        // layer 2 has no producer feeding it, which is allowed
        let net = net.unwrap();
        assert_eq!(net.edges(), &[MetaboliteEdge::new("A", "B", "acetate")]);
    }

    #[test]
    fn construction_rejects_invalid_species() {
        let bad_first = PopulationAnn::new(vec![SpeciesNode::new("A", 0, 1.0).consuming("acetate")], 1.0);
        assert!(matches!(bad_first, Err(PopulationError::Input(_))));
        let negative = PopulationAnn::new(vec![SpeciesNode::new("A", 0, -1.0)], 1.0);
        assert!(matches!(negative, Err(PopulationError::Input(_))));
        let gap = PopulationAnn::new(vec![SpeciesNode::new("A", 0, 1.0), SpeciesNode::new("B", 2, 1.0)], 1.0);
        assert!(matches!(gap, Err(PopulationError::Input(_))));
        assert!(matches!(
            PopulationAnn::new(vec![SpeciesNode::new("A", 0, 1.0)], 0.0),
            Err(PopulationError::Config(_))
        ));
    }

    #[test]
    fn forward_zero_and_identity_chain() {
        let net = chain(1.0, 1.0, 1.0);
        assert!(net.forward_metabolites(0.0).unwrap().values().all(|v| *v == 0.0));
        let out = net.forward_metabolites(3.5).unwrap();
        assert_eq!(out["butyrate"], 3.5);
        assert!(net.forward_metabolites(-1.0).is_err());
    }

    #[test]
    fn competing_consumers_split_by_weight() {
        // weights 3 and 1 via populations 3 and 1 with a unit producer
        let net = PopulationAnn::new(
            vec![
                SpeciesNode::new("P", 0, 1.0).consuming(GLUCOSE).producing("acetate", 1.0),
                SpeciesNode::new("X", 1, 3.0).consuming("acetate"),
                SpeciesNode::new("Y", 1, 1.0).consuming("acetate"),
            ],
            1.0,
        )
        .unwrap();
        let prop = net.propagate(8.0).unwrap();
        let flux: Vec<f64> = prop.edge_flux.iter().map(|(_, f)| *f).collect();
        assert_eq!(flux, vec![6.0, 2.0]);
        assert_eq!(prop.uptake["X"], 3.0 * 6.0);
        assert_eq!(prop.uptake["Y"], 2.0);
    }

    #[test]
    fn target_file_parse() {
        let t = TargetWeights::parse("# x\nP\tC\tlactate\t0.5\n").unwrap();
        assert_eq!(t.0[&edge()], 0.5);
        assert!(TargetWeights::parse("P\tC\tlactate\n").is_err());
        assert!(TargetWeights::parse("P\tC\tlactate\t-1\n").is_err());
        assert_eq!(TargetWeights::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn training_at_fixed_point_records_one_epoch() {
        let net = chain(1.3, 0.7, 2.0);
        let (trained, trace) =
            train_populations(&net, &TargetWeights::from_network(&net), &TrainingConfig::default()).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.last().unwrap().error, 0.0);
        assert_eq!(trained, net);
    }

    #[test]
    fn training_single_edge_matches_scalar_recursion() {
        let (p0, pc, scale, target) = (0.4, 1.5, 2.0, 0.9);
        let net = chain(p0, pc, scale);
        let cfg = TrainingConfig { frozen: ["C".to_string()].into(), ..TrainingConfig::default() };
        let targets = TargetWeights([(edge(), target)].into());
        let (trained, trace) = train_populations(&net, &targets, &cfg).unwrap();

        // independent scalar gradient descent
        let mut p = p0;
        for rec in trace.epochs() {
            let w: f64 = p * pc / scale;
            assert!((rec.error - (w - target).powi(2)).abs() < 1e-12);
            assert!((rec.params["pop.P"] - p).abs() < 1e-12);
            p -= 0.05 * 2.0 * (w - target) * pc / scale;
        }
        let closed_form = target * scale / pc;
        assert!((trained.population("P").unwrap() - closed_form).abs() < 1e-4);
        assert_eq!(trained.population("C").unwrap(), pc);
    }

    #[test]
    fn training_config_errors() {
        let net = chain(1.0, 1.0, 1.0);
        let t = TargetWeights::from_network(&net);
        let bad = TrainingConfig { step: 0.0, ..TrainingConfig::default() };
        assert!(matches!(train_populations(&net, &t, &bad), Err(PopulationError::Config(_))));
        let mut zero_scale = net.clone();
        zero_scale.weight_scale = 0.0;
        assert!(matches!(
            train_populations(&zero_scale, &t, &TrainingConfig::default()),
            Err(PopulationError::Config(_))
        ));
        let wrong = TargetWeights([(MetaboliteEdge::new("C", "P", "x"), 1.0)].into());
        assert!(matches!(train_populations(&net, &wrong, &TrainingConfig::default()), Err(PopulationError::Input(_))));
    }

    #[test]
    fn sweep_restores_and_rejects_unknown_species() {
        let mut net = chain(2.0, 1.0, 1.0);
        let before = net.clone();
        let rows = sensitivity_sweep(&mut net, "C", &[0.0, 0.5, 1.0, 1.5, 2.0], 1.0).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].butyrate, 0.0);
        assert!(rows.windows(2).all(|w| w[0].butyrate < w[1].butyrate));
        assert_eq!(net, before);
        assert!(matches!(sensitivity_sweep(&mut net, "Nope", &[1.0], 1.0), Err(PopulationError::Input(_))));
        assert!(sensitivity_sweep(&mut net, "C", &[f64::NAN], 1.0).is_err());
        assert_eq!(net, before);
    }
}
