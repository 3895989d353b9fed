use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use mml_core::ann::LayeredNetwork;
use mml_core::fixtures;
use mml_core::grai::{
    apply_environment, count_structures, extract_subnetwork, mine_structures, EnvironmentCondition, GrnGraph,
    SubnetworkQuery,
};

use crate::output::{Artifacts, Csv};
use crate::svg::{heatmap, LineChart, Series};
use crate::{load_config, parse_range, read_text, resolve, GlobalArgs, UsageError};

const CONFIG_KEYS: &[&str] = &["max_depth", "max_input", "steps"];

#[derive(Subcommand, Debug)]
pub enum GraiCommand {
    /// Extract the layered network linking input genes to output genes
    Extract(ExtractArgs),
    /// Rescale interactions per environment condition and evaluate the response
    Env(EnvArgs),
    /// List every fully connected i-input, j-output structure
    Mine(MineArgs),
    /// Count structures over a grid of (i, j) shapes
    Count(CountArgs),
}

#[derive(Args, Debug)]
pub struct GrnSource {
    /// GRN file (source, target, sign, weight); the bundled P. aeruginosa network when omitted
    #[arg(long)]
    pub grn: Option<PathBuf>,
}

impl GrnSource {
    fn load(&self) -> Result<GrnGraph> {
        Ok(match &self.grn {
            Some(path) => GrnGraph::parse(&read_text(path)?)?,
            None => GrnGraph::parse(fixtures::PA_GRN)?,
        })
    }
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub source: GrnSource,
    /// Input genes, comma separated; defaults to every gene without regulators
    #[arg(long, value_delimiter = ',')]
    pub inputs: Vec<String>,
    /// Output genes, comma separated; defaults to every gene without targets
    #[arg(long, value_delimiter = ',')]
    pub outputs: Vec<String>,
    /// Longest input-to-output path considered, in hops [default: 6]
    #[arg(long)]
    pub max_depth: Option<usize>,
}

impl ExtractArgs {
    fn extract(&self, config: &mml_core::config::KeyValues) -> Result<LayeredNetwork> {
        let grn = self.source.load()?;
        let pick = |given: &[String], no_links: &dyn Fn(&str) -> bool| -> BTreeSet<String> {
            if given.is_empty() {
                grn.nodes().iter().filter(|n| no_links(n)).cloned().collect()
            } else {
                given.iter().cloned().collect()
            }
        };
        let inputs = pick(&self.inputs, &|n| grn.predecessors(n).next().is_none());
        let outputs = pick(&self.outputs, &|n| grn.successors(n).next().is_none());
        let depth = resolve(self.max_depth, config, "max_depth", 6)?;
        Ok(extract_subnetwork(&grn, &inputs, &outputs, depth)?)
    }
}

#[derive(Args, Debug)]
pub struct EnvArgs {
    #[command(flatten)]
    pub extract: ExtractArgs,
    /// Previously extracted layered network file, used instead of extracting
    #[arg(long, conflicts_with_all = ["grn", "inputs", "outputs", "max_depth"])]
    pub network: Option<PathBuf>,
    /// Environment condition files (source, target, multiplier), named by file
    /// stem; the bundled 30C and 37C conditions when omitted
    #[arg(long = "env")]
    pub envs: Vec<PathBuf>,
    /// Largest input level of the response sweep [default: 10]
    #[arg(long)]
    pub max_input: Option<f64>,
    /// Number of input levels in the response sweep [default: 21]
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MineArgs {
    #[command(flatten)]
    pub source: GrnSource,
    /// Number of input genes per structure
    #[arg(long = "i")]
    pub inputs: usize,
    /// Number of output genes per structure
    #[arg(long = "j")]
    pub outputs: usize,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub source: GrnSource,
    /// Input-count range, `A..B` inclusive or a single number
    #[arg(long = "i", value_parser = parse_range, default_value = "1..3")]
    pub inputs: RangeInclusive<usize>,
    /// Output-count range, `A..B` inclusive or a single number
    #[arg(long = "j", value_parser = parse_range, default_value = "1..5")]
    pub outputs: RangeInclusive<usize>,
}

pub fn run(global: &GlobalArgs, cmd: GraiCommand) -> Result<()> {
    let config = load_config(global)?;
    config.reject_unknown(CONFIG_KEYS)?;
    let mut out = Artifacts::default();
    match cmd {
        GraiCommand::Extract(args) => {
            let net = args.extract(&config)?;
            eprintln!(
                "extracted {} layers, {} nodes ({} phantom), {} edges",
                net.layers().len(),
                net.nodes().len(),
                net.phantom_count(),
                net.edges().len()
            );
            out.add("network.txt", net.to_text());
        }
        GraiCommand::Env(args) => env(global, &config, args, &mut out)?,
        GraiCommand::Mine(args) => {
            let grn = args.source.load()?;
            let found = mine_structures(&grn, SubnetworkQuery::new(args.inputs, args.outputs))?;
            println!("{}", found.len());
            let mut text = String::from("inputs\toutputs\n");
            for s in &found {
                text.push_str(&format!("{s}\n"));
            }
            out.add("structures.tsv", text);
        }
        GraiCommand::Count(args) => {
            let grn = args.source.load()?;
            let table = count_structures(&grn, args.inputs.clone(), args.outputs.clone())?;
            let mut csv = Csv::new(&["i", "j", "count"]);
            for row in &table {
                csv.row(&[row.inputs, row.outputs, row.count]);
            }
            out.add("counts.csv", csv.finish());
            if global.plot {
                let lookup: BTreeMap<(usize, usize), usize> =
                    table.iter().map(|r| ((r.inputs, r.outputs), r.count)).collect();
                let rows: Vec<usize> = args.inputs.collect();
                let cols: Vec<usize> = args.outputs.collect();
                out.add(
                    "counts.svg",
                    heatmap("Sub-network structures", "input genes i", "output genes j", &rows, &cols, |i, j| {
                        lookup[&(i, j)]
                    }),
                );
            }
        }
    }
    for path in out.commit(&global.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn env(global: &GlobalArgs, config: &mml_core::config::KeyValues, args: EnvArgs, out: &mut Artifacts) -> Result<()> {
    let net = match &args.network {
        Some(path) => LayeredNetwork::from_text(&read_text(path)?)?,
        None => args.extract.extract(config)?,
    };
    let conditions = if args.envs.is_empty() {
        vec![
            EnvironmentCondition::parse("30C", fixtures::ENV_30C)?,
            EnvironmentCondition::parse("37C", fixtures::ENV_37C)?,
        ]
    } else {
        args.envs.iter().map(EnvironmentCondition::load).collect::<Result<_, _>>()?
    };
    let max_input: f64 = resolve(args.max_input, config, "max_input", 10.0)?;
    let steps: usize = resolve(args.steps, config, "steps", 21)?;
    if steps < 2 || !(max_input > 0.0 && max_input.is_finite()) {
        return Err(UsageError("response sweep needs --steps >= 2 and a positive --max-input".into()).into());
    }
    let names: BTreeSet<&str> = conditions.iter().map(|c| c.name.as_str()).collect();
    if names.len() != conditions.len() {
        return Err(UsageError("environment conditions must have distinct names".into()).into());
    }

    let outputs = net.outputs().to_vec();
    let mut header = vec!["condition".to_string(), "input".to_string()];
    header.extend(outputs.iter().cloned());
    let mut csv = Csv::new(&header);
    let mut series = Vec::new();
    for cond in &conditions {
        let modified = apply_environment(&net, cond)?;
        let mut curves: Vec<Vec<(f64, f64)>> = vec![Vec::with_capacity(steps); outputs.len()];
        for k in 0..steps {
            let level = max_input * k as f64 / (steps - 1) as f64;
            let x: BTreeMap<String, f64> = net.inputs().iter().map(|id| (id.clone(), level)).collect();
            let y = modified.forward(&x)?;
            let mut row = vec![cond.name.clone(), level.to_string()];
            for (o, curve) in outputs.iter().zip(&mut curves) {
                row.push(y[o].to_string());
                curve.push((level, y[o]));
            }
            csv.row(&row);
        }
        series.extend(outputs.iter().zip(curves).map(|(o, pts)| Series::new(format!("{} {o}", cond.name), pts)));
        out.add(format!("network_{}.txt", cond.name), modified.to_text());
    }
    out.add("env_response.csv", csv.finish());
    if global.plot {
        let chart = LineChart {
            title: "Output response per environment".into(),
            x_label: "input level".into(),
            y_label: "output value".into(),
            log_y: false,
            series,
        };
        out.add("env_response.svg", chart.render());
    }
    Ok(())
}
