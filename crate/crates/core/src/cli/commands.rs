use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::cli::args::{Cli, Command, VerifyArgs};
use crate::cli::config::{AxisSpec, Family, RunConfig};
use crate::cli::output::{fmt_num, write_crossings, write_trajectory};
use crate::cli::{CliError, EXIT_OK, EXIT_TOLERANCE};
use crate::dynamics::{sample_trajectory, uniform_grid};
use crate::error::Error;
use crate::gaussian::{GaussianState, SystemBathSpec};
use crate::mpemba::{crossing_report, CrossingReport, mpemba_scan, CrossingParams, ScanConfig, SweepGrid};
use crate::oracles::rk4::NoiseConvention;
use crate::oracles::suite::{run_verification, VerifyConfig};
use crate::states::{
    displaced_thermal, squeezed_displaced_thermal, squeezed_thermal, thermal_state, DisplacementAmplitude,
    SqueezingParameter, ThermalOccupation,
};

/// Caps the rayon worker count.
pub const THREADS_ENV: &str = "ERGOFLOW_THREADS";

/// Builds the global thread pool from `ERGOFLOW_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // A pool that already exists (e.g. in tests) is left as is.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one command, writing reports to `stdout`/`stderr`, and returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Simulate(a) => simulate(&a.resolve()?, stdout),
        Command::Crossing(a) => crossing(&a.resolve()?, stdout),
        Command::Sweep(a) => sweep(&a.resolve()?, stdout, stderr),
        Command::Verify(a) => verify(a, stdout),
    }
}

fn spec_of(cfg: &RunConfig) -> Result<SystemBathSpec, CliError> {
    Ok(SystemBathSpec::new(cfg.omega, cfg.gamma, cfg.nbar)?)
}

fn initial_state(cfg: &RunConfig) -> Result<GaussianState, CliError> {
    let occ = ThermalOccupation::new(cfg.nbar_pi)?;
    let amp = || DisplacementAmplitude::polar(cfg.mu, cfg.mu_phase);
    let z = || SqueezingParameter::new(cfg.r, cfg.theta);
    Ok(match cfg.family {
        Family::Thermal => thermal_state(occ),
        Family::Displaced => displaced_thermal(occ, amp()?),
        Family::Squeezed => squeezed_thermal(occ, z()?),
        Family::SqueezedDisplaced => squeezed_displaced_thermal(occ, amp()?, z()?),
    })
}

fn io_err(path: &str) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: path.to_string(),
        reason: e.to_string(),
    }
}

/// Sends `emit` to the configured output file, or to `stdout`.
fn with_output<F>(out: Option<&Path>, stdout: &mut dyn Write, emit: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> csv::Result<()>,
{
    match out {
        Some(path) => {
            let name = path.display().to_string();
            let file = File::create(path).map_err(io_err(&name))?;
            let mut w = BufWriter::new(file);
            emit(&mut w).map_err(|e| CliError::Io {
                path: name.clone(),
                reason: e.to_string(),
            })?;
            w.flush().map_err(io_err(&name))
        }
        None => emit(stdout).map_err(|e| CliError::Io {
            path: "stdout".into(),
            reason: e.to_string(),
        }),
    }
}

fn simulate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = spec_of(cfg)?;
    let state = initial_state(cfg)?;
    let (tau_max, dtau) = cfg.tau_grid_bounds();
    let traj = sample_trajectory(&state, &spec, &uniform_grid(tau_max, dtau)?)?;
    with_output(cfg.out.as_deref(), stdout, |w| write_trajectory(w, &traj))?;
    Ok(EXIT_OK)
}

fn write_crossing_text(w: &mut dyn Write, rep: &CrossingReport) -> io::Result<()> {
    let p = &rep.params;
    writeln!(w, "r = {}, mu = {}, nbar_pi = {}, nbar = {}", p.r, p.mu, p.nbar_pi, p.nbar)?;
    writeln!(w, "initial ergotropy (squeezed):  {}", fmt_num(rep.erg0_squeezed))?;
    writeln!(w, "initial ergotropy (displaced): {}", fmt_num(rep.erg0_displaced))?;
    match (rep.tau_c_closed, rep.tau_c_numeric) {
        (Some(a), Some(b)) => {
            writeln!(w, "tau_c closed form: {}", fmt_num(a))?;
            writeln!(w, "tau_c numeric:     {}", fmt_num(b))?;
            writeln!(w, "difference:        {}", fmt_num((a - b).abs()))?;
        }
        (closed, numeric) => {
            let reason = rep.note.map(|n| n.as_str()).unwrap_or("closed form and scan disagree");
            writeln!(w, "no crossing ({reason})")?;
            if let Some(t) = closed.or(numeric) {
                writeln!(w, "warning: only one method found a crossing, at tau = {}", fmt_num(t))?;
            }
        }
    }
    Ok(())
}

fn crossing(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = spec_of(cfg)?;
    let p = CrossingParams::new(cfg.r, cfg.mu, cfg.nbar_pi, cfg.nbar)?;
    let rep = crossing_report(&p, &spec, &ScanConfig::default())?;
    write_crossing_text(stdout, &rep).map_err(io_err("stdout"))?;
    if let Some(path) = cfg.out.as_deref() {
        with_output(Some(path), stdout, |w| write_crossings(w, &[rep]))?;
    }
    Ok(EXIT_OK)
}

fn axis(spec: &Option<AxisSpec>, fallback: f64) -> Vec<f64> {
    spec.as_ref().map(AxisSpec::values).unwrap_or_else(|| vec![fallback])
}

fn sweep(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let spec = spec_of(cfg)?;
    let grid = SweepGrid::new(
        axis(&cfg.r_values, cfg.r),
        axis(&cfg.nbar_pi_values, cfg.nbar_pi),
        axis(&cfg.nbar_values, cfg.nbar),
        cfg.mu,
    )
    .map_err(|e| match e {
        Error::InvalidGrid(msg) => CliError::Usage(format!("{msg}; pass at least one value per axis")),
        other => other.into(),
    })?;
    let table = mpemba_scan(&grid, &spec, &ScanConfig::default())?;
    with_output(cfg.out.as_deref(), stdout, |w| write_crossings(w, &table.rows))?;
    let s = table.stats;
    writeln!(
        stderr,
        "monotonicity: {}/{} nbar pairs not decreasing, {}/{} nbar_pi pairs not increasing",
        s.nbar_violations, s.nbar_pairs, s.nbar_pi_violations, s.nbar_pi_pairs
    )
    .map_err(io_err("stderr"))?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = args.common.resolve()?;
    let vc = VerifyConfig {
        nbar_pi: cfg.nbar_pi,
        nbar: cfg.nbar,
        omega: cfg.omega,
        gamma: cfg.gamma,
        r: cfg.r,
        theta: cfg.theta,
        mu: cfg.mu,
        cutoff: cfg.cutoff,
        seed: cfg.seed,
        random_states: cfg.random_states,
        noise: if args.noise_without_gamma {
            NoiseConvention::Unscaled
        } else {
            NoiseConvention::Scaled
        },
        ..VerifyConfig::default()
    };
    let report = run_verification(&vc).map_err(|e| match e {
        Error::CutoffTooSmall { .. } => CliError::Usage(format!("{e}; increase --cutoff")),
        other => other.into(),
    })?;
    let text = report.to_string();
    match cfg.out.as_deref() {
        Some(path) => {
            let name = path.display().to_string();
            std::fs::write(path, &text).map_err(io_err(&name))?;
        }
        None => stdout.write_all(text.as_bytes()).map_err(io_err("stdout"))?,
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_TOLERANCE })
}
