use std::path::Path;
use std::process::{Command, Output};

use ergoflow::cli::{run, Cli, CommonArgs, RunConfig};
use clap::Parser;
use tempfile::tempdir;

fn ergoflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergoflow"))
        .args(args)
        .env_remove("ERGOFLOW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

fn value_after(text: &str, label: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(label))
        .unwrap_or_else(|| panic!("no `{label}` in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn simulate_squeezed_fig2() {
    let o = ergoflow(&["simulate", "--family", "squeezed", "--nbar-pi", "0.2", "--nbar", "0.4", "--r", "1", "--tmax", "5", "--dt", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "tau,E_state,E_passive,ergotropy,erg_v,erg_theta,wigner_entropy,f_beta_t,r_t"
    );
    let erg = column(&text, "ergotropy");
    assert_eq!(erg.len(), 501);
    assert!((erg[0] - 1.933_536_983_758_541_9).abs() < 1e-12);
    let tau = column(&text, "tau");
    assert!((tau[500] - 5.0).abs() < 1e-12);
}

#[test]
fn simulate_displaced_and_thermal_families() {
    let o = ergoflow(&["simulate", "--family", "displaced", "--mu", "1"]);
    let text = stdout(&o);
    for (tau, e) in column(&text, "tau").into_iter().zip(column(&text, "ergotropy")) {
        assert!((e - (-tau).exp()).abs() <= 1e-12 * (-tau).exp(), "{tau} {e}");
    }
    let o = ergoflow(&["simulate", "--family", "thermal", "--nbar-pi", "0.4", "--nbar", "0.4"]);
    assert!(column(&stdout(&o), "ergotropy").iter().all(|&e| e == 0.0));
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = ergoflow(&["simulate", "--family", "squeezed-displaced", "--theta", "0.7", "--mu-phase", "-1.2", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn absolute_time_converts_inputs() {
    let o = ergoflow(&["simulate", "--gamma", "0.5", "--tmax", "5", "--dt", "0.01", "--absolute-time"]);
    let tau = column(&stdout(&o), "tau");
    assert_eq!(tau.len(), 501);
    assert!((tau[500] - 2.5).abs() < 1e-12);
}

#[test]
fn crossing_reports() {
    let o = ergoflow(&["crossing", "--nbar-pi", "0.2", "--nbar", "0.4", "--r", "1", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!((value_after(&text, "tau_c closed form:") - 0.793_103_891_254_493_8).abs() < 1e-12);
    assert!(value_after(&text, "difference:") <= 1e-9);

    let o = ergoflow(&["crossing", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no crossing"));

    let o = ergoflow(&["crossing", "--mu", "1.3905168045581262"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("degenerate at origin"));
}

#[test]
fn crossing_writes_optional_csv() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = ergoflow(&["crossing", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("r,nbar_pi,nbar,mu,exists,tau_c_closed"));
}

#[test]
fn sweep_tables_and_trends() {
    let o = ergoflow(&["sweep", "--mu", "1", "--r-values", "0.8,1,1.2", "--nbar-pi-values", "0.5", "--nbar-values", "0:2:5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 15);
    let tau = column(&text, "tau_c_closed");
    for chunk in tau.chunks(5) {
        assert!(chunk.windows(2).all(|w| w[1] < w[0]), "{chunk:?}");
    }
    assert!(stderr(&o).contains("0/12 nbar pairs not decreasing"));
}

#[test]
fn sweep_rejects_empty_axis() {
    let o = ergoflow(&["sweep", "--r-values", ""]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"));
    let o = ergoflow(&["sweep", "--nbar-values", "0:1:0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_default_passes() {
    let o = ergoflow(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("PASS").count(), 6);
    assert!(text.contains("max_deviation"));
}

#[test]
fn verify_catches_noise_without_gamma() {
    let o = ergoflow(&["verify", "--gamma", "0.5", "--noise-without-gamma", "--random-states", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let line = stdout(&o).lines().find(|l| l.starts_with("rk4_vs_analytic")).unwrap().to_string();
    assert!(line.ends_with("FAIL"), "{line}");
}

#[test]
fn verify_rejects_small_cutoff() {
    let o = ergoflow(&["verify", "--cutoff", "10", "--random-states", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cutoff"));
}

#[test]
fn usage_and_parameter_errors_exit_two() {
    for args in [
        vec!["simulate", "--nbar", "-1"],
        vec!["simulate", "--family", "coherent"],
        vec!["simulate", "--dt", "0"],
        vec!["frobnicate"],
        vec!["simulate", "--out", "/nonexistent-dir/x.csv"],
    ] {
        let o = ergoflow(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = ergoflow(&["simulate", "--nbar", "-1"]);
    assert!(stderr(&o).contains("--nbar"));
}

#[test]
fn thread_variable_is_validated() {
    let bad = Command::new(env!("CARGO_BIN_EXE_ergoflow"))
        .args(["crossing"])
        .env("ERGOFLOW_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_ergoflow"))
        .args(["sweep", "--nbar-values", "0:1:4"])
        .env("ERGOFLOW_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# displaced battery\nfamily = displaced\nmu = 0.5\ntmax = 1\n").unwrap();
    let o = ergoflow(&["simulate", "--config", cfg.to_str().unwrap(), "--mu", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let erg = column(&stdout(&o), "ergotropy");
    assert_eq!(erg.len(), 101);
    assert!((erg[0] - 1.0).abs() < 1e-12);

    std::fs::write(&cfg, "mu = 1\nmu = 2\n").unwrap();
    assert_eq!(ergoflow(&["simulate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("absent.cfg");
    assert_eq!(ergoflow(&["simulate", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn config_round_trips() {
    let text = "family = squeezed-displaced\nnbar-pi = 0.25\nnbar = 1.5\nomega = 2\ngamma = 0.3\nr = 0.8\n\
                theta = 1.25\nmu = 0.4\nmu-phase = -0.5\ntmax = 10\ndt = 0.05\nabsolute-time = true\n\
                cutoff = 70\nseed = 99\nrandom-states = 12\nout = data/run.csv\nr-values = 0.8,1,1.2\n\
                nbar-pi-values = 0.5\nnbar-values = 0:2:100\n";
    let cfg = RunConfig::from_config_str(text).unwrap();
    let mut a: Vec<&str> = text.lines().collect();
    let back = cfg.to_config_string();
    let mut b: Vec<&str> = back.lines().collect();
    a.sort_unstable();
    b.sort_unstable();
    assert_eq!(a, b);
}

#[test]
fn library_entry_point_matches_binary() {
    let cli = Cli::try_parse_from(["ergoflow", "simulate", "--tmax", "0.05"]).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(run(&cli, &mut out, &mut err).unwrap(), 0);
    let bin = ergoflow(&["simulate", "--tmax", "0.05"]);
    assert_eq!(out, bin.stdout);
    assert!(CommonArgs::default().resolve().is_ok());
    assert!(Path::new(env!("CARGO_BIN_EXE_ergoflow")).exists());
}
