use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mml_core::fixtures;
use mml_core::popann::{PopulationAnn, TargetWeights};
use tempfile::TempDir;

fn mml(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mml-lab")).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) -> String {
    let o = mml(out, args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn count_grid_has_one_row_per_cell() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["grai", "count", "--grn", &fixture("pa_tcs_qs.tsv"), "--i", "1..3", "--j", "1..5"]);
    let csv = fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert!(csv.starts_with("i,j,count\n"));
    assert_eq!(data_rows(&dir.path().join("counts.csv")), 15);
}

#[test]
fn extract_chain_gives_three_layers() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["grai", "extract", "--grn", &fixture("chain.tsv")]);
    let net =
        mml_core::ann::LayeredNetwork::from_text(&fs::read_to_string(dir.path().join("network.txt")).unwrap()).unwrap();
    assert_eq!(net.layers().len(), 3);
}

#[test]
fn mine_prints_structure_count() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(dir.path(), &["grai", "mine", "--i", "1", "--j", "1"]);
    assert_eq!(stdout.trim(), "28");
    assert_eq!(data_rows(&dir.path().join("structures.tsv")), 28);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = mml(dir.path(), &["grai", "count", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mml(dir.path(), &["grai", "count", "--i", "3..1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let dir = TempDir::new().unwrap();
    assert_eq!(mml(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_emits_requested_rows() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["popann", "sweep", "--species", "Bacteroides", "--from", "0", "--to", "2", "--steps", "21"]);
    let path = dir.path().join("sweep.csv");
    assert!(fs::read_to_string(&path).unwrap().starts_with("fraction,acetate,propionate,butyrate\n"));
    assert_eq!(data_rows(&path), 21);
}

#[test]
fn training_toward_current_weights_is_a_fixed_point() {
    let dir = TempDir::new().unwrap();
    let net = PopulationAnn::parse(fixtures::HGB_SPECIES, fixtures::HGB_WEIGHT_SCALE).unwrap();
    let target = dir.path().join("current.tsv");
    fs::write(&target, TargetWeights::from_network(&net).to_text()).unwrap();
    ok(dir.path(), &["popann", "train", "--target", target.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(dir.path().join("training_mse.csv")).unwrap(), "epoch,mse\n0,0\n");
}

#[test]
fn seeded_training_is_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["popann", "train", "--seed", "42", "--jitter", "0.2", "--plot"];
    ok(a.path(), &args);
    ok(b.path(), &args);
    for f in ["training_mse.csv", "training_weights.csv", "trained_populations.csv", "training_mse.svg"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let c = TempDir::new().unwrap();
    ok(c.path(), &["popann", "train", "--seed", "43", "--jitter", "0.2"]);
    assert_ne!(
        fs::read(a.path().join("trained_populations.csv")).unwrap(),
        fs::read(c.path().join("trained_populations.csv")).unwrap()
    );
}

#[test]
fn adc_train_then_convert() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["adc", "train"]);
    assert!(dir.path().join("adc_system.cfg").is_file());
    let trace = fs::read_to_string(dir.path().join("adc_trace.csv")).unwrap();
    assert!(trace.starts_with("epoch,w0,w1,d0,errors\n"));
    assert_eq!(trace.lines().count() - 1, 12);
    assert_eq!(ok(dir.path(), &["adc", "convert", "--x", "1250"]).trim(), "01");
}

#[test]
fn adc_sweep_covers_the_range() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["adc", "sweep", "--stride", "100"]);
    let path = dir.path().join("adc_sweep.csv");
    assert!(fs::read_to_string(&path).unwrap().starts_with("x_uM,C1_uM,C2_uM,code\n"));
    assert_eq!(data_rows(&path), 21);
}

#[test]
fn out_of_range_conversion_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(mml(dir.path(), &["adc", "convert", "--x", "9999"]).status.code(), Some(2));
}

#[test]
fn unlearnable_training_is_a_convergence_error() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("adc.cfg");
    fs::write(&cfg, "delta_d=0\nmax_epochs=20\n").unwrap();
    let out = dir.path().join("out");
    let o = mml(&out, &["adc", "train", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists(), "failed run left output behind");
}

#[test]
fn failed_runs_leave_no_files() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = mml(&out, &["popann", "sweep", "--species", "Nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "a\tb\t+\n").unwrap();
    let o = mml(&out, &["grai", "count", "--grn", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn config_file_overrides_defaults_and_flags_override_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("p.cfg");
    fs::write(&cfg, "max_epochs=3\n").unwrap();
    ok(dir.path(), &["popann", "train", "--config", cfg.to_str().unwrap()]);
    assert_eq!(data_rows(&dir.path().join("training_mse.csv")), 4);
    ok(dir.path(), &["popann", "train", "--config", cfg.to_str().unwrap(), "--max-epochs", "5"]);
    assert_eq!(data_rows(&dir.path().join("training_mse.csv")), 6);
    fs::write(&cfg, "bogus=1\n").unwrap();
    assert_eq!(mml(dir.path(), &["popann", "train", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
