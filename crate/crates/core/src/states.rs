//! Constructors for thermal, displaced, squeezed and squeezed-displaced thermal states.
//!
//! Displacement `D(μ)` shifts the mean by `(μ, μ*)` and leaves Θ alone.
//! Squeezing `S(z)`, `z = r e^{iθ}`, acts on both moments through the
//! Bogoliubov matrix `M = [[cosh r, -e^{iθ} sinh r], [-e^{-iθ} sinh r, cosh r]]`:
//! `v → M v` and `Θ → M Θ M†`. Since `det M = 1`, det Θ is preserved.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::C64;

/// Coherent displacement amplitude `μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementAmplitude(C64);

impl DisplacementAmplitude {
    pub fn new(mu: C64) -> Result<Self> {
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return Err(Error::param("mu", "must be finite"));
        }
        Ok(Self(mu))
    }

    pub fn real(mu: f64) -> Result<Self> {
        Self::new(C64::new(mu, 0.0))
    }

    /// `|μ| e^{iφ}`.
    pub fn polar(modulus: f64, phase: f64) -> Result<Self> {
        Self::new(C64::from_polar(modulus, phase))
    }

    pub fn value(&self) -> C64 {
        self.0
    }
}

/// Squeezing parameter `z = r e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParameter {
    r: f64,
    theta: f64,
}

impl SqueezingParameter {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::param("r", format!("must be a finite value >= 0, got {r}")));
        }
        if !theta.is_finite() {
            return Err(Error::param("theta", "must be finite"));
        }
        Ok(Self { r, theta })
    }

    /// Squeezing along `θ = 0`.
    pub fn real(r: f64) -> Result<Self> {
        Self::new(r, 0.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn bogoliubov(&self) -> Matrix2<C64> {
        let c = C64::new(self.r.cosh(), 0.0);
        let s = C64::from_polar(self.r.sinh(), self.theta);
        Matrix2::new(c, -s, -s.conj(), c)
    }
}

/// Mean occupation `n̄_π` of the thermal state a battery is charged from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalOccupation(f64);

impl ThermalOccupation {
    pub fn new(nbar_pi: f64) -> Result<Self> {
        if !(nbar_pi.is_finite() && nbar_pi >= 0.0) {
            return Err(Error::param(
                "nbar_pi",
                format!("must be a finite value >= 0, got {nbar_pi}"),
            ));
        }
        Ok(Self(nbar_pi))
    }

    pub fn nbar(&self) -> f64 {
        self.0
    }

    /// `f(β_π) = n̄_π + ½`.
    pub fn f_beta(&self) -> f64 {
        self.0 + 0.5
    }
}

pub fn thermal_state(occ: ThermalOccupation) -> GaussianState {
    GaussianState::thermal_unchecked(occ.f_beta())
}

pub fn displace(state: &GaussianState, amp: DisplacementAmplitude) -> GaussianState {
    let (t11, t12) = state.reduced_cov();
    GaussianState::assemble(state.amplitude() + amp.value(), t11, t12)
}

pub fn squeeze(state: &GaussianState, z: SqueezingParameter) -> GaussianState {
    let m = z.bogoliubov();
    let mean = m * state.mean();
    let cov = m * state.cov() * m.adjoint();
    GaussianState::assemble(mean[0], cov[(0, 0)].re, cov[(0, 1)])
}

pub fn displaced_thermal(occ: ThermalOccupation, amp: DisplacementAmplitude) -> GaussianState {
    displace(&thermal_state(occ), amp)
}

pub fn squeezed_thermal(occ: ThermalOccupation, z: SqueezingParameter) -> GaussianState {
    squeeze(&thermal_state(occ), z)
}

/// `S(z) D(μ) π D†(μ) S†(z)`: displacement first, squeezing second.
///
/// The resulting mean is the squeezed image `M (μ, μ*)`, so its modulus is
/// not `|μ|` unless `r = 0`.
pub fn squeezed_displaced_thermal(
    occ: ThermalOccupation,
    amp: DisplacementAmplitude,
    z: SqueezingParameter,
) -> GaussianState {
    squeeze(&displaced_thermal(occ, amp), z)
}
