//! Closed-form evolution under thermal damping.
//!
//! The covariance obeys `Θ̇ = ΛΘ + ΘΛ† + γ f(β) 𝕀` with
//! `Λ = -½ diag(γ + 2iω, γ - 2iω)`, whose solution is
//!
//! ```text
//! Θ₁₁(t) = (Θ₁₁(0) - f(β)) e^{-γt} + f(β)
//! Θ₁₂(t) = Θ₁₂(0) e^{-(γ + 2iω)t}
//! <a>(t) = <a>(0) e^{-(iω + γ/2)t}
//! ```
//!
//! The noise term carries the factor γ so that `f(β)𝕀` is the fixed point.

use crate::error::{Error, Result};
use crate::gaussian::{
    ergotropy, ergotropy_split, mean_energy, passive_energy, passive_occupation, wigner_entropy,
    GaussianState, SystemBathSpec,
};
use crate::states::{SqueezingParameter, ThermalOccupation};
use crate::C64;

/// Evolves `state0` for a physical time `t` (not `τ = γt`).
pub fn evolve_analytic(state0: &GaussianState, spec: &SystemBathSpec, t: f64) -> Result<GaussianState> {
    if !t.is_finite() {
        return Err(Error::param("t", "must be finite"));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(*state0);
    }
    let (gamma, omega, f) = (spec.gamma(), spec.omega(), spec.f_beta());
    let decay = (-gamma * t).exp();
    let t11 = (state0.theta11() - f) * decay + f;
    let t12 = state0.theta12() * C64::new(-gamma * t, -2.0 * omega * t).exp();
    let amp = state0.amplitude() * C64::new(-0.5 * gamma * t, -omega * t).exp();
    Ok(GaussianState::assemble(amp, t11, t12))
}

/// Squeezed-thermal trajectory written as an instantaneous squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParameters {
    /// `f(β_t)`, the occupation function of the instantaneous passive state.
    pub f_beta_t: f64,
    pub r_t: f64,
    /// `θ - 2ωt`
    pub theta_t: f64,
    /// `[f(β_π) - f(β)] e^{-γt} + f(β)`, the passive occupation of a displaced thermal state.
    pub delta_beta: f64,
}

impl EffectiveParameters {
    /// `f(β_t) cosh 2r_t`, equal to Θ₁₁ of the evolved squeezed thermal state.
    pub fn theta11(&self) -> f64 {
        self.f_beta_t * (2.0 * self.r_t).cosh()
    }
}

/// Effective temperature and squeezing of `S(z) π S†(z)` after a time `t`.
pub fn effective_parameters(
    occ: ThermalOccupation,
    z: SqueezingParameter,
    spec: &SystemBathSpec,
    t: f64,
) -> Result<EffectiveParameters> {
    if !t.is_finite() {
        return Err(Error::param("t", "must be finite"));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let (f_pi, f) = (occ.f_beta(), spec.f_beta());
    let gt = spec.gamma() * t;
    let decay = (-gt).exp();
    let sinh2 = z.r().sinh().powi(2);
    let delta_beta = (f_pi - f) * decay + f;
    // e^{-2γt}(e^{γt} - 1) = e^{-γt}(1 - e^{-γt}); expm1 keeps small t accurate.
    let mixing = decay * -(-gt).exp_m1();
    let f_beta_t = (delta_beta * delta_beta + 4.0 * f_pi * f * mixing * sinh2).sqrt();
    let cosh_2r = (delta_beta + 2.0 * f_pi * decay * sinh2) / f_beta_t;
    Ok(EffectiveParameters {
        f_beta_t,
        r_t: 0.5 * cosh_2r.max(1.0).acosh(),
        theta_t: z.theta() - 2.0 * spec.omega() * t,
        delta_beta,
    })
}

/// One sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub tau: f64,
    pub energy: f64,
    pub passive_energy: f64,
    pub ergotropy: f64,
    pub erg_v: f64,
    pub erg_theta: f64,
    pub wigner_entropy: f64,
    pub f_beta_t: f64,
    pub r_t: f64,
}

impl TrajectoryRecord {
    /// Evaluates every recorded quantity for `state` at dimensionless time `tau`.
    pub fn of_state(state: &GaussianState, spec: &SystemBathSpec, tau: f64) -> Self {
        let split = ergotropy_split(state, spec);
        let f_beta_t = passive_occupation(state);
        Self {
            tau,
            energy: mean_energy(state, spec),
            passive_energy: passive_energy(state, spec),
            ergotropy: ergotropy(state, spec),
            erg_v: split.displacement,
            erg_theta: split.covariance,
            wigner_entropy: wigner_entropy(state),
            f_beta_t,
            r_t: 0.5 * (state.theta11() / f_beta_t).max(1.0).acosh(),
        }
    }
}

/// Samples of an evolution on a strictly increasing grid of `τ = γt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    records: Vec<TrajectoryRecord>,
}

impl Trajectory {
    pub fn records(&self) -> &[TrajectoryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.tau)
    }

    pub fn ergotropies(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.ergotropy)
    }
}

/// Checks that `grid` starts at zero, is finite and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    let first = *grid
        .first()
        .ok_or_else(|| Error::InvalidGrid("grid is empty".into()))?;
    if first != 0.0 {
        return Err(Error::InvalidGrid(format!("grid must start at 0, starts at {first}")));
    }
    if let Some(bad) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite grid point {bad}")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "grid is not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `τ_k = k·dτ` for `k = 0..=round(τ_max/dτ)`.
pub fn uniform_grid(tau_max: f64, dtau: f64) -> Result<Vec<f64>> {
    if !(dtau.is_finite() && dtau > 0.0) {
        return Err(Error::InvalidGrid(format!("step must be positive, got {dtau}")));
    }
    if !(tau_max.is_finite() && tau_max >= 0.0) {
        return Err(Error::InvalidGrid(format!("end time must be >= 0, got {tau_max}")));
    }
    let steps = (tau_max / dtau).round();
    if steps > 1e8 {
        return Err(Error::InvalidGrid(format!("{steps} grid points is too many")));
    }
    Ok((0..=steps as u64).map(|k| k as f64 * dtau).collect())
}

/// Evaluates the closed-form evolution of `state0` at every `τ` in `tau_grid`.
pub fn sample_trajectory(
    state0: &GaussianState,
    spec: &SystemBathSpec,
    tau_grid: &[f64],
) -> Result<Trajectory> {
    validate_grid(tau_grid)?;
    let records = tau_grid
        .iter()
        .map(|&tau| {
            let state = evolve_analytic(state0, spec, tau / spec.gamma())?;
            Ok(TrajectoryRecord::of_state(&state, spec, tau))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { records })
}

/// Decomposition of the instantaneous ergotropy loss rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgotropyRate {
    /// `dℰ/dt`
    pub rate: f64,
    /// Energy flux `Φ(W) = -dE/dt`.
    pub flux: f64,
    /// `ω √det Θ · dS/dt`, equal to `-Φ(W_π)`.
    pub entropy_term: f64,
}

/// Analytic `dℰ/dt = -Φ(W) - ω√det Θ · Ṡ(W)` at physical time `t`.
pub fn ergotropy_rate(state0: &GaussianState, spec: &SystemBathSpec, t: f64) -> Result<ErgotropyRate> {
    let state = evolve_analytic(state0, spec, t)?;
    let (gamma, omega, f) = (spec.gamma(), spec.omega(), spec.f_beta());
    let t11 = state.theta11();
    let t12_sq = state.theta12().norm_sqr();
    let amp_sq = state.amplitude().norm_sqr();

    let d_t11 = -gamma * (t11 - f);
    let d_energy = omega * (d_t11 - gamma * amp_sq);
    let det = state.det();
    let d_det = 2.0 * t11 * d_t11 + 2.0 * gamma * t12_sq;
    let d_entropy = 0.5 * d_det / det;

    let flux = -d_energy;
    let entropy_term = omega * det.sqrt() * d_entropy;
    Ok(ErgotropyRate {
        rate: -flux - entropy_term,
        flux,
        entropy_term,
    })
}
