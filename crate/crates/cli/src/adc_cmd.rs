use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use mml_core::calcium::{adc_convert, adc_sweep, train_adc, AdcSetup};

use crate::output::{Artifacts, Csv};
use crate::svg::{LineChart, Series};
use crate::{read_text, GlobalArgs};

/// File written by `adc train` holding the trained converter.
pub const SYSTEM_FILE: &str = "adc_system.cfg";

#[derive(Subcommand, Debug)]
pub enum AdcCommand {
    /// Train both cells on the interval midpoints
    Train,
    /// Convert one extracellular concentration and print its code
    Convert(ConvertArgs),
    /// Convert a grid of concentrations over the input range
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct SystemSource {
    /// Trained converter file; otherwise the one in --out, otherwise the
    /// converter is trained in-process
    #[arg(long)]
    pub system: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Extracellular Ca2+ concentration, µM
    #[arg(long)]
    pub x: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Spacing of the input grid, µM
    #[arg(long, default_value_t = 100.0)]
    pub stride: f64,
}

fn untrained_setup(global: &GlobalArgs) -> Result<AdcSetup> {
    Ok(match &global.config {
        Some(path) => AdcSetup::parse(&read_text(path)?).with_context(|| format!("in {}", path.display()))?,
        None => AdcSetup::default(),
    })
}

fn trained_setup(global: &GlobalArgs, source: &SystemSource) -> Result<AdcSetup> {
    let saved = source.system.clone().or_else(|| Some(global.out.join(SYSTEM_FILE)).filter(|p| p.is_file()));
    if let Some(path) = saved {
        return AdcSetup::parse(&read_text(&path)?).with_context(|| format!("in {}", path.display()));
    }
    let mut setup = untrained_setup(global)?;
    setup.system = train_adc(&setup.system, &setup.training, &setup.params)?.system;
    Ok(setup)
}

pub fn run(global: &GlobalArgs, cmd: AdcCommand) -> Result<()> {
    let mut out = Artifacts::default();
    match cmd {
        AdcCommand::Train => train(global, &mut out)?,
        AdcCommand::Convert(args) => {
            let setup = trained_setup(global, &args.source)?;
            let reading = adc_convert(&setup.system, args.x, &setup.params)?;
            eprintln!("C1 = {} µM, C2 = {} µM", reading.c1, reading.c2);
            println!("{}", reading.code());
        }
        AdcCommand::Sweep(args) => {
            let setup = trained_setup(global, &args.source)?;
            let rows = adc_sweep(&setup.system, args.stride, &setup.params)?;
            let mut csv = Csv::new(&["x_uM", "C1_uM", "C2_uM", "code"]);
            for r in &rows {
                csv.row(&[r.x.to_string(), r.c1.to_string(), r.c2.to_string(), r.code()]);
            }
            out.add("adc_sweep.csv", csv.finish());
            if global.plot {
                let theta = setup.system.theta;
                let chart = LineChart {
                    title: "Saturated cytoplasmic Ca2+ per input".into(),
                    x_label: "extracellular Ca2+ x (µM)".into(),
                    y_label: "cytoplasmic Ca2+ (µM)".into(),
                    log_y: false,
                    series: vec![
                        Series::new("C1 (MSB)", rows.iter().map(|r| (r.x, r.c1)).collect()),
                        Series::new("C2 (LSB)", rows.iter().map(|r| (r.x, r.c2)).collect()),
                        Series::new("threshold", rows.iter().map(|r| (r.x, theta)).collect()),
                    ],
                };
                out.add("adc_sweep.svg", chart.render());
            }
        }
    }
    for path in out.commit(&global.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn train(global: &GlobalArgs, out: &mut Artifacts) -> Result<()> {
    let setup = untrained_setup(global)?;
    let result = train_adc(&setup.system, &setup.training, &setup.params)?;
    let trained = AdcSetup { system: result.system, ..setup };
    println!("w0={} w1={} d0={}", trained.system.cell1.weight, trained.system.cell2.weight, trained.system.d0);

    // cell 2 epochs continue the numbering after the cell 1 epochs
    let mut csv = Csv::new(&["epoch", "w0", "w1", "d0", "errors"]);
    let (w1_start, d0_start) = (setup.system.cell2.weight, setup.system.d0);
    for r in result.cell1.trace.epochs() {
        csv.row(&[r.epoch as f64, r.params["w0"], w1_start, d0_start, r.error]);
    }
    let offset = result.cell1.trace.len();
    for r in result.cell2.trace.epochs() {
        csv.row(&[(offset + r.epoch) as f64, trained.system.cell1.weight, r.params["w1"], r.params["d0"], r.error]);
    }
    out.add("adc_trace.csv", csv.finish());

    let header = format!(
        "# trained converter: {} cell-1 epochs, {} cell-2 epochs\n",
        result.cell1.trace.len(),
        result.cell2.trace.len()
    );
    out.add(SYSTEM_FILE, header + &trained.to_key_values().to_text());

    if global.plot {
        let errors = |t: &mml_core::ann::TrainingTrace| t.epochs().iter().map(|r| (r.epoch as f64, r.error)).collect();
        let chart = LineChart {
            title: "Misclassified samples per training epoch".into(),
            x_label: "epoch".into(),
            y_label: "errors".into(),
            log_y: false,
            series: vec![
                Series::new("cell 1", errors(&result.cell1.trace)),
                Series::new("cell 2", errors(&result.cell2.trace)),
            ],
        };
        out.add("adc_trace.svg", chart.render());
    }
    Ok(())
}
