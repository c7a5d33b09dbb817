//! Pass/fail comparison of the closed-form layer against the RK4 and Fock oracles.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::evolve_analytic;
use crate::error::{Error, Result};
use crate::gaussian::{ergotropy, GaussianState, SystemBathSpec};
use crate::mpemba::{crossing_time_closed_form, crossing_time_numeric, CrossingParams, ScanConfig};
use crate::oracles::fock::{fock_ergotropy, fock_lindblad_evolve, fock_lindblad_trajectory, prepare_fock_state, GaussianDescriptor};
use crate::oracles::rk4::{lyapunov_trajectory, IntegratorConfig, Moments, NoiseConvention};
use crate::states::{squeezed_displaced_thermal, DisplacementAmplitude, SqueezingParameter, ThermalOccupation};
use crate::C64;

pub const RK4_TOL: f64 = 1e-8;
pub const ORDER_TOL: f64 = 0.2;
pub const FOCK_T0_TOL: f64 = 1e-4;
pub const FOCK_TRAJECTORY_TOL: f64 = 1e-3;
pub const FOCK_MEAN_TOL: f64 = 1e-6;
pub const CROSSING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub nbar_pi: f64,
    pub nbar: f64,
    pub omega: f64,
    pub gamma: f64,
    pub r: f64,
    pub theta: f64,
    pub mu: f64,
    pub cutoff: usize,
    /// RK4 step in units of `τ = γt`.
    pub rk4_dtau: f64,
    pub rk4_tau_max: f64,
    pub random_states: usize,
    pub seed: u64,
    pub fock_dt: f64,
    pub fock_tau_max: f64,
    pub fock_points: usize,
    pub noise: NoiseConvention,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            nbar_pi: 0.2,
            nbar: 0.4,
            omega: 1.0,
            gamma: 1.0,
            r: 1.0,
            theta: 0.0,
            mu: 1.0,
            cutoff: 60,
            rk4_dtau: 1e-4,
            rk4_tau_max: 5.0,
            random_states: 100,
            seed: 7,
            fock_dt: 1e-3,
            fock_tau_max: 3.0,
            fock_points: 10,
            noise: NoiseConvention::Scaled,
        }
    }
}

impl VerifyConfig {
    pub fn spec(&self) -> Result<SystemBathSpec> {
        SystemBathSpec::new(self.omega, self.gamma, self.nbar)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    /// Passes when `deviation ≤ tolerance`; NaN never passes.
    pub fn within(name: &str, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_deviation: deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>14} {:>12}  result", "check", "max_deviation", "tolerance")?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<28} {:>14.6e} {:>12.3e}  {}",
                c.name,
                c.max_deviation,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn moment_deviation(m: &Moments, exact: &GaussianState) -> f64 {
    let cov = (m.cov - exact.cov()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mean = (m.mean - exact.mean()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    cov.max(mean)
}

/// Largest moment deviation between RK4 and the analytic solution, sampled every `0.01 τ`.
pub fn rk4_max_deviation(
    state0: &GaussianState,
    spec: &SystemBathSpec,
    dtau: f64,
    tau_max: f64,
    noise: NoiseConvention,
) -> Result<f64> {
    let g = spec.gamma();
    let cfg = IntegratorConfig::new(dtau / g, tau_max / g)?;
    let every = ((0.01 / dtau).round() as u64).max(1);
    let mut worst: f64 = 0.0;
    for (t, m) in lyapunov_trajectory(state0, spec, &cfg, noise, every)? {
        let exact = evolve_analytic(state0, spec, t)?;
        worst = worst.max(moment_deviation(&m, &exact));
    }
    Ok(worst)
}

/// Observed order `log₂(e(h)/e(h/2))`, averaged over successive halvings of `dtau`.
pub fn rk4_convergence_order(
    state0: &GaussianState,
    spec: &SystemBathSpec,
    dtau: f64,
    tau_final: f64,
    halvings: usize,
    noise: NoiseConvention,
) -> Result<f64> {
    if halvings == 0 {
        return Err(Error::param("halvings", "must be at least 1"));
    }
    let g = spec.gamma();
    let exact = evolve_analytic(state0, spec, tau_final / g)?;
    let errors = (0..=halvings)
        .map(|k| {
            let cfg = IntegratorConfig::new(dtau / g / f64::powi(2.0, k as i32), tau_final / g)?;
            let last = lyapunov_trajectory(state0, spec, &cfg, noise, u64::MAX)?
                .pop()
                .expect("final sample");
            Ok(moment_deviation(&last.1, &exact))
        })
        .collect::<Result<Vec<f64>>>()?;
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(orders.iter().sum::<f64>() / orders.len() as f64)
}

/// Random Gaussian states with `n̄_π ∈ [0, 2]`, `r ∈ [0, 1.5]`, `|μ| ≤ 2` and uniform phases.
pub fn random_states(seed: u64, count: usize) -> Vec<GaussianState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let occ = ThermalOccupation::new(rng.random_range(0.0..2.0)).expect("valid range");
            let amp = DisplacementAmplitude::polar(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0 * PI))
                .expect("valid range");
            let z = SqueezingParameter::new(rng.random_range(0.0..1.5), rng.random_range(0.0..2.0 * PI))
                .expect("valid range");
            squeezed_displaced_thermal(occ, amp, z)
        })
        .collect()
}

pub fn run_verification(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let spec = cfg.spec()?;
    let mut checks = Vec::new();

    let fig = squeezed_displaced_thermal(
        ThermalOccupation::new(cfg.nbar_pi)?,
        DisplacementAmplitude::real(cfg.mu)?,
        SqueezingParameter::new(cfg.r, cfg.theta)?,
    );
    let mut states = vec![fig];
    states.extend(random_states(cfg.seed, cfg.random_states));
    let worst = states
        .par_iter()
        .map(|s| rk4_max_deviation(s, &spec, cfg.rk4_dtau, cfg.rk4_tau_max, cfg.noise))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(CheckResult::within("rk4_vs_analytic", worst, RK4_TOL));

    let order = rk4_convergence_order(&fig, &spec, 0.1, 2.0, 2, cfg.noise)?;
    checks.push(CheckResult::within("rk4_order", (order - 4.0).abs(), ORDER_TOL));

    let squeezed = GaussianDescriptor::squeezed(cfg.nbar_pi, cfg.r, cfg.theta)?;
    let rho0 = prepare_fock_state(&squeezed, cfg.cutoff)?;
    let exact0 = ergotropy(&squeezed.gaussian(), &spec);
    checks.push(CheckResult::within(
        "fock_ergotropy_t0",
        (fock_ergotropy(&rho0, &spec)? - exact0).abs(),
        FOCK_T0_TOL,
    ));

    let n = cfg.fock_points.max(2);
    let taus: Vec<f64> = (0..n).map(|k| cfg.fock_tau_max * k as f64 / (n - 1) as f64).collect();
    let times: Vec<f64> = taus.iter().map(|t| t / spec.gamma()).collect();
    let traj = fock_lindblad_trajectory(&rho0, &spec, &times, cfg.fock_dt)?;
    let mut worst: f64 = 0.0;
    for (rho, &t) in traj.iter().zip(&times) {
        let exact = ergotropy(&evolve_analytic(&squeezed.gaussian(), &spec, t)?, &spec);
        worst = worst.max((fock_ergotropy(rho, &spec)? - exact).abs());
    }
    checks.push(CheckResult::within("fock_ergotropy_trajectory", worst, FOCK_TRAJECTORY_TOL));

    let mu = C64::new(cfg.mu, 0.0);
    let displaced = prepare_fock_state(&GaussianDescriptor::displaced(cfg.nbar_pi, mu)?, cfg.cutoff)?;
    let t = 1.0 / spec.gamma();
    let amp = fock_lindblad_evolve(&displaced, &spec, t, cfg.fock_dt)?.moments().amplitude;
    let expected = mu * C64::new(-0.5 * spec.gamma() * t, -spec.omega() * t).exp();
    checks.push(CheckResult::within("fock_displaced_mean", (amp - expected).norm(), FOCK_MEAN_TOL));

    let p = CrossingParams::new(cfg.r, cfg.mu, cfg.nbar_pi, cfg.nbar)?;
    let closed = crossing_time_closed_form(&p).time();
    let numeric = crossing_time_numeric(&p, &spec, &ScanConfig::default())?.time();
    let dev = match (closed, numeric) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    checks.push(CheckResult::within("crossing_closed_vs_numeric", dev, CROSSING_TOL));

    Ok(VerificationReport { checks })
}
