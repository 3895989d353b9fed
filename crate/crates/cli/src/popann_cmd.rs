use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use mml_core::fixtures;
use mml_core::popann::{sensitivity_sweep, train_populations, PopulationAnn, TargetWeights, TrainingConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{Artifacts, Csv};
use crate::svg::{LineChart, Series};
use crate::{load_config, read_text, resolve, GlobalArgs, UsageError};

const CONFIG_KEYS: &[&str] = &["weight_scale", "step", "max_epochs", "tol", "jitter", "glucose"];

#[derive(Subcommand, Debug)]
pub enum PopannCommand {
    /// Adjust populations until the edge weights match a target
    Train(TrainArgs),
    /// Vary one species' abundance and record the metabolite outputs
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct NetworkSource {
    /// Species file; the bundled gut bacteria network when omitted
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// Weight normalizer [default: 1]
    #[arg(long)]
    pub weight_scale: Option<f64>,
}

impl NetworkSource {
    fn load(&self, config: &mml_core::config::KeyValues) -> Result<PopulationAnn> {
        let scale = resolve(self.weight_scale, config, "weight_scale", fixtures::HGB_WEIGHT_SCALE)?;
        Ok(match &self.fixture {
            Some(path) => PopulationAnn::parse(&read_text(path)?, scale)?,
            None => PopulationAnn::parse(fixtures::HGB_SPECIES, scale)?,
        })
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    pub network: NetworkSource,
    /// Target weights file; the bundled targets when omitted
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Gradient step size [default: 0.05]
    #[arg(long)]
    pub step: Option<f64>,
    /// Epoch limit [default: 10000]
    #[arg(long)]
    pub max_epochs: Option<usize>,
    /// Stop once the weight MSE falls below this value [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative random perturbation of the initial populations, drawn from the run seed [default: 0]
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Species whose populations stay fixed, comma separated
    #[arg(long, value_delimiter = ',')]
    pub freeze: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub network: NetworkSource,
    /// Species whose abundance is varied
    #[arg(long)]
    pub species: String,
    /// First abundance fraction
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    /// Last abundance fraction
    #[arg(long, default_value_t = 2.0)]
    pub to: f64,
    /// Number of fractions, evenly spaced
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    /// Glucose supplied to the first layer [default: 10]
    #[arg(long)]
    pub glucose: Option<f64>,
}

pub fn run(global: &GlobalArgs, cmd: PopannCommand) -> Result<()> {
    let config = load_config(global)?;
    config.reject_unknown(CONFIG_KEYS)?;
    let mut out = Artifacts::default();
    match cmd {
        PopannCommand::Train(args) => train(global, &config, args, &mut out)?,
        PopannCommand::Sweep(args) => sweep(global, &config, args, &mut out)?,
    }
    for path in out.commit(&global.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn train(
    global: &GlobalArgs,
    config: &mml_core::config::KeyValues,
    args: TrainArgs,
    out: &mut Artifacts,
) -> Result<()> {
    let mut net = args.network.load(config)?;
    let target = match &args.target {
        Some(path) => TargetWeights::parse(&read_text(path)?)?,
        None => TargetWeights::parse(fixtures::HGB_TARGET)?,
    };
    let defaults = TrainingConfig::default();
    let cfg = TrainingConfig {
        step: resolve(args.step, config, "step", defaults.step)?,
        max_epochs: resolve(args.max_epochs, config, "max_epochs", defaults.max_epochs)?,
        tol: resolve(args.tol, config, "tol", defaults.tol)?,
        frozen: args.freeze.iter().cloned().collect::<BTreeSet<_>>(),
    };
    let jitter: f64 = resolve(args.jitter, config, "jitter", 0.0)?;
    if !(jitter >= 0.0 && jitter.is_finite()) {
        return Err(UsageError(format!("--jitter must be >= 0, got {jitter}")).into());
    }
    if jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
        let names: Vec<(String, f64)> = net.species().iter().map(|s| (s.name.clone(), s.population)).collect();
        for (name, p) in names {
            let factor = 1.0 + jitter * rng.gen_range(-1.0..=1.0);
            net.set_population(&name, (p * factor).max(0.0))?;
        }
    }

    let (trained, trace) = train_populations(&net, &target, &cfg)?;
    let last = trace.last().expect("training records the initial epoch");
    println!("epochs={} mse={}", last.epoch, last.error);

    let mut mse = Csv::new(&["epoch", "mse"]);
    for r in trace.epochs() {
        mse.row(&[r.epoch.to_string(), r.error.to_string()]);
    }
    out.add("training_mse.csv", mse.finish());

    let weight_keys: Vec<&String> = last.params.keys().filter(|k| k.starts_with("w.")).collect();
    let mut header = vec!["epoch"];
    header.extend(weight_keys.iter().map(|k| k.as_str()));
    let mut weights = Csv::new(&header);
    for r in trace.epochs() {
        let mut row = vec![r.epoch.to_string()];
        row.extend(weight_keys.iter().map(|k| r.params[*k].to_string()));
        weights.row(&row);
    }
    out.add("training_weights.csv", weights.finish());

    let mut pops = Csv::new(&["species", "initial", "trained"]);
    for (before, after) in net.species().iter().zip(trained.species()) {
        pops.row(&[before.name.clone(), before.population.to_string(), after.population.to_string()]);
    }
    out.add("trained_populations.csv", pops.finish());

    if global.plot {
        let mse_chart = LineChart {
            title: "Weight-space MSE during training".into(),
            x_label: "epoch".into(),
            y_label: "MSE (log10)".into(),
            log_y: true,
            series: vec![Series::new("mse", trace.epochs().iter().map(|r| (r.epoch as f64, r.error)).collect())],
        };
        out.add("training_mse.svg", mse_chart.render());
        let weight_chart = LineChart {
            title: "Edge weights during training".into(),
            x_label: "epoch".into(),
            y_label: "weight".into(),
            log_y: false,
            series: weight_keys
                .iter()
                .map(|k| {
                    Series::new(k.as_str(), trace.epochs().iter().map(|r| (r.epoch as f64, r.params[*k])).collect())
                })
                .collect(),
        };
        out.add("training_weights.svg", weight_chart.render());
    }
    Ok(())
}

fn sweep(
    global: &GlobalArgs,
    config: &mml_core::config::KeyValues,
    args: SweepArgs,
    out: &mut Artifacts,
) -> Result<()> {
    let mut net = args.network.load(config)?;
    if args.steps == 0 || !(args.from.is_finite() && args.to.is_finite()) {
        return Err(UsageError("sweep needs --steps >= 1 and finite --from/--to".into()).into());
    }
    let glucose = resolve(args.glucose, config, "glucose", 10.0)?;
    let fractions: Vec<f64> = (0..args.steps)
        .map(|k| {
            if args.steps == 1 {
                args.from
            } else {
                args.from + (args.to - args.from) * k as f64 / (args.steps - 1) as f64
            }
        })
        .collect();
    let rows = sensitivity_sweep(&mut net, &args.species, &fractions, glucose)?;
    let mut csv = Csv::new(&["fraction", "acetate", "propionate", "butyrate"]);
    for r in &rows {
        csv.row(&[r.fraction, r.acetate, r.propionate, r.butyrate]);
    }
    out.add("sweep.csv", csv.finish());
    if global.plot {
        let curve = |f: fn(&mml_core::popann::SweepRow) -> f64| rows.iter().map(|r| (r.fraction, f(r))).collect();
        let chart = LineChart {
            title: format!("Metabolite output vs {} abundance", args.species),
            x_label: format!("{} population fraction", args.species),
            y_label: "metabolite amount".into(),
            log_y: false,
            series: vec![
                Series::new("acetate", curve(|r| r.acetate)),
                Series::new("propionate", curve(|r| r.propionate)),
                Series::new("butyrate", curve(|r| r.butyrate)),
            ],
        };
        out.add("sweep.svg", chart.render());
    }
    Ok(())
}
