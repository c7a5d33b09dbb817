//! Fixed-step classical RK4 integration of the moment equations
//! `v̇ = Λv`, `Θ̇ = ΛΘ + ΘΛ† + F`.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SystemBathSpec};
use crate::C64;

/// Upper bound on the number of steps of a single integration.
pub const MAX_STEPS: u64 = 1_000_000_000;

/// How the bath noise term `F` is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseConvention {
    /// `F = γ f(β) 𝕀`, whose fixed point is `f(β) 𝕀`.
    #[default]
    Scaled,
    /// `F = f(β) 𝕀`. Only used to check that the verification suite catches it.
    Unscaled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_final: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {dt}")));
        }
        if !(t_final.is_finite() && t_final >= 0.0) {
            return Err(Error::param("t_final", format!("must be >= 0, got {t_final}")));
        }
        Ok(Self { dt, t_final })
    }

    /// Number of equal steps covering `[0, t_final]` with width at most `dt`.
    pub fn steps(&self) -> Result<u64> {
        let raw = (self.t_final / self.dt - 1e-9).ceil().max(0.0);
        if raw > MAX_STEPS as f64 {
            return Err(Error::StepOverflow {
                steps: raw as u64,
                limit: MAX_STEPS,
            });
        }
        Ok(raw as u64)
    }
}

/// Mean vector and covariance advanced together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: Vector2<C64>,
    pub cov: Matrix2<C64>,
}

impl Moments {
    pub fn of(state: &GaussianState) -> Self {
        Self {
            mean: *state.mean(),
            cov: *state.cov(),
        }
    }

    pub fn to_state(&self) -> Result<GaussianState> {
        GaussianState::new(self.mean, self.cov)
    }

    fn axpy(&self, h: f64, d: &Moments) -> Moments {
        let h = C64::new(h, 0.0);
        Moments {
            mean: self.mean + d.mean * h,
            cov: self.cov + d.cov * h,
        }
    }
}

/// Right-hand side of the moment equations for one bath.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovRhs {
    lambda: Matrix2<C64>,
    noise: Matrix2<C64>,
}

impl LyapunovRhs {
    pub fn new(spec: &SystemBathSpec, convention: NoiseConvention) -> Self {
        let (g, w) = (spec.gamma(), spec.omega());
        let lambda = Matrix2::new(
            C64::new(-0.5 * g, -w),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-0.5 * g, w),
        );
        let scale = match convention {
            NoiseConvention::Scaled => g * spec.f_beta(),
            NoiseConvention::Unscaled => spec.f_beta(),
        };
        Self {
            lambda,
            noise: Matrix2::identity() * C64::new(scale, 0.0),
        }
    }

    pub fn eval(&self, m: &Moments) -> Moments {
        Moments {
            mean: self.lambda * m.mean,
            cov: self.lambda * m.cov + m.cov * self.lambda.adjoint() + self.noise,
        }
    }

    pub fn step(&self, m: &Moments, h: f64) -> Moments {
        let k1 = self.eval(m);
        let k2 = self.eval(&m.axpy(0.5 * h, &k1));
        let k3 = self.eval(&m.axpy(0.5 * h, &k2));
        let k4 = self.eval(&m.axpy(h, &k3));
        let h6 = C64::new(h / 6.0, 0.0);
        let two = C64::new(2.0, 0.0);
        Moments {
            mean: m.mean + (k1.mean + k2.mean * two + k3.mean * two + k4.mean) * h6,
            cov: m.cov + (k1.cov + k2.cov * two + k3.cov * two + k4.cov) * h6,
        }
    }
}

/// Integrates the moment equations of `state0` up to `cfg.t_final`.
pub fn integrate_lyapunov(state0: &GaussianState, spec: &SystemBathSpec, cfg: &IntegratorConfig) -> Result<GaussianState> {
    integrate_lyapunov_with(state0, spec, cfg, NoiseConvention::Scaled)
}

pub fn integrate_lyapunov_with(
    state0: &GaussianState,
    spec: &SystemBathSpec,
    cfg: &IntegratorConfig,
    convention: NoiseConvention,
) -> Result<GaussianState> {
    let last = lyapunov_trajectory(state0, spec, cfg, convention, u64::MAX)?
        .pop()
        .expect("trajectory holds the final sample");
    last.1.to_state()
}

/// Raw moments at `t = 0`, every `every`-th step and the final time.
pub fn lyapunov_trajectory(
    state0: &GaussianState,
    spec: &SystemBathSpec,
    cfg: &IntegratorConfig,
    convention: NoiseConvention,
    every: u64,
) -> Result<Vec<(f64, Moments)>> {
    let steps = cfg.steps()?;
    let h = if steps == 0 { 0.0 } else { cfg.t_final / steps as f64 };
    let rhs = LyapunovRhs::new(spec, convention);
    let mut m = Moments::of(state0);
    let mut out = vec![(0.0, m)];
    for k in 1..=steps {
        m = rhs.step(&m, h);
        if k == steps || k % every.max(1) == 0 {
            let t = if k == steps { cfg.t_final } else { k as f64 * h };
            out.push((t, m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_analytic;
    use crate::states::{squeezed_thermal, thermal_state, SqueezingParameter, ThermalOccupation};

    fn max_cov_dev(a: &Moments, b: &GaussianState) -> f64 {
        (a.cov - b.cov()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn thermal_fixed_point_is_stationary() {
        let spec = SystemBathSpec::new(1.3, 0.7, 0.4).unwrap();
        let s = thermal_state(ThermalOccupation::new(0.4).unwrap());
        let rhs = LyapunovRhs::new(&spec, NoiseConvention::Scaled);
        let m = Moments::of(&s);
        let next = rhs.step(&m, 0.01);
        assert!(max_cov_dev(&next, &s) <= 1e-12);
        let unscaled = LyapunovRhs::new(&spec, NoiseConvention::Unscaled).step(&m, 0.01);
        assert!(max_cov_dev(&unscaled, &s) > 1e-4);
    }

    #[test]
    fn matches_analytic_at_unit_time() {
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let s = squeezed_thermal(ThermalOccupation::new(0.2).unwrap(), SqueezingParameter::real(1.0).unwrap());
        let cfg = IntegratorConfig::new(1e-4, 1.0).unwrap();
        let num = integrate_lyapunov(&s, &spec, &cfg).unwrap();
        let exact = evolve_analytic(&s, &spec, 1.0).unwrap();
        assert!((num.theta11() - exact.theta11()).abs() < 1e-8);
        assert!((num.theta12() - exact.theta12()).norm() < 1e-8);
        assert!((num.theta11() - 1.537_732_616_835_12).abs() < 1e-8);
    }

    #[test]
    fn halving_step_cuts_error_sixteenfold() {
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let s = squeezed_thermal(ThermalOccupation::new(0.2).unwrap(), SqueezingParameter::real(1.0).unwrap());
        let exact = evolve_analytic(&s, &spec, 2.0).unwrap();
        let err = |dt: f64| {
            let cfg = IntegratorConfig::new(dt, 2.0).unwrap();
            let traj = lyapunov_trajectory(&s, &spec, &cfg, NoiseConvention::Scaled, u64::MAX).unwrap();
            max_cov_dev(&traj.last().unwrap().1, &exact)
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 2.0, "ratio {ratio}");
    }

    #[test]
    fn step_count_and_overflow() {
        assert_eq!(IntegratorConfig::new(0.1, 1.0).unwrap().steps().unwrap(), 10);
        assert_eq!(IntegratorConfig::new(0.3, 1.0).unwrap().steps().unwrap(), 4);
        assert_eq!(IntegratorConfig::new(0.1, 0.0).unwrap().steps().unwrap(), 0);
        assert!(matches!(
            IntegratorConfig::new(1e-12, 10.0).unwrap().steps(),
            Err(Error::StepOverflow { .. })
        ));
        assert!(IntegratorConfig::new(0.0, 1.0).is_err());
    }
}
