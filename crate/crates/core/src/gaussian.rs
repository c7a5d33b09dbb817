//! Single-mode Gaussian states and their static thermodynamic quantities.
//!
//! A state is carried as the mean vector `v = (<a>, <a†>)` and the complex
//! covariance matrix `Θ_ij = ½<{u_i, u_j}> - <u_i><u_j>` with `u = (a, a†)`.
//! Everything in this module depends on the state only through `|v₁|`, `Θ₁₁`
//! and `|Θ₁₂|`, so all outputs are invariant under phase rotations.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::C64;

/// Absolute tolerance of the structural checks (Hermiticity, realness, bounds).
pub const VALIDITY_TOL: f64 = 1e-10;

/// Divergences and ergotropies in `[-CLAMP_TOL, 0)` are rounding noise and read as zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// A valid single-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    mean: Vector2<C64>,
    cov: Matrix2<C64>,
}

impl GaussianState {
    /// Builds a state from a full mean vector and covariance matrix.
    ///
    /// The input must satisfy the structural invariants to within
    /// [`VALIDITY_TOL`]; the stored copy is then made exactly Hermitian with a
    /// real, repeated diagonal and a conjugate-paired mean.
    pub fn new(mean: Vector2<C64>, cov: Matrix2<C64>) -> Result<Self> {
        let finite = mean.iter().chain(cov.iter()).all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        if (mean[1] - mean[0].conj()).norm() > VALIDITY_TOL {
            return Err(Error::InvalidState(format!(
                "mean components are not conjugate: {} vs {}",
                mean[0], mean[1]
            )));
        }
        let (d0, d1) = (cov[(0, 0)], cov[(1, 1)]);
        if d0.im.abs() > VALIDITY_TOL || d1.im.abs() > VALIDITY_TOL {
            return Err(Error::InvalidState("covariance diagonal is not real".into()));
        }
        if (d0.re - d1.re).abs() > VALIDITY_TOL {
            return Err(Error::InvalidState(format!(
                "covariance diagonal entries differ: {} vs {}",
                d0.re, d1.re
            )));
        }
        if (cov[(1, 0)] - cov[(0, 1)].conj()).norm() > VALIDITY_TOL {
            return Err(Error::InvalidState("covariance is not Hermitian".into()));
        }
        Self::from_moments(mean[0], d0.re, cov[(0, 1)])
    }

    /// Builds a state from `<a>`, `Θ₁₁` and `Θ₁₂`.
    pub fn from_moments(amplitude: C64, theta11: f64, theta12: C64) -> Result<Self> {
        let finite = [amplitude.re, amplitude.im, theta11, theta12.re, theta12.im]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        if theta11 < 0.5 - VALIDITY_TOL {
            return Err(Error::InvalidState(format!(
                "Θ₁₁ = {theta11} is below the vacuum floor 1/2"
            )));
        }
        let state = Self::assemble(amplitude, theta11, theta12);
        let det = state.det();
        if det < 0.25 - VALIDITY_TOL {
            return Err(Error::InvalidState(format!(
                "det Θ = {det} violates the uncertainty bound 1/4"
            )));
        }
        Ok(state)
    }

    /// Assembles a state without checks. Callers guarantee validity up to rounding.
    pub(crate) fn assemble(amplitude: C64, theta11: f64, theta12: C64) -> Self {
        let d = C64::new(theta11, 0.0);
        Self {
            mean: Vector2::new(amplitude, amplitude.conj()),
            cov: Matrix2::new(d, theta12, theta12.conj(), d),
        }
    }

    /// Thermal state with covariance `f·𝕀` and zero mean.
    pub(crate) fn thermal_unchecked(f: f64) -> Self {
        Self::assemble(C64::new(0.0, 0.0), f, C64::new(0.0, 0.0))
    }

    pub fn mean(&self) -> &Vector2<C64> {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix2<C64> {
        &self.cov
    }

    /// `<a>`, the first mean component.
    pub fn amplitude(&self) -> C64 {
        self.mean[0]
    }

    pub fn theta11(&self) -> f64 {
        self.cov[(0, 0)].re
    }

    pub fn theta12(&self) -> C64 {
        self.cov[(0, 1)]
    }

    /// The reduced pair `(Θ₁₁, Θ₁₂)` that fixes the covariance.
    pub fn reduced_cov(&self) -> (f64, C64) {
        (self.theta11(), self.theta12())
    }

    /// `det Θ = Θ₁₁² - |Θ₁₂|²`.
    pub fn det(&self) -> f64 {
        let t11 = self.theta11();
        t11 * t11 - self.theta12().norm_sqr()
    }

    /// Closed-form inverse of the 2×2 covariance.
    pub fn cov_inverse(&self) -> Result<Matrix2<C64>> {
        let det = self.det();
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::InvalidState(format!("singular covariance (det = {det})")));
        }
        let t11 = C64::new(self.theta11(), 0.0);
        let t12 = self.theta12();
        Ok(Matrix2::new(t11, -t12, -t12.conj(), t11) / C64::new(det, 0.0))
    }

    /// Re-runs the construction checks on this state.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.mean, self.cov).map(|_| ())
    }

    /// True when the covariance is proportional to the identity and the mean vanishes.
    pub fn is_thermal(&self, tol: f64) -> bool {
        self.theta12().norm() <= tol && self.amplitude().norm() <= tol
    }
}

/// Mode frequency, damping rate and bath occupation of the thermal reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemBathSpec {
    omega: f64,
    gamma: f64,
    nbar: f64,
}

impl SystemBathSpec {
    pub fn new(omega: f64, gamma: f64, nbar: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::param("omega", format!("must be positive, got {omega}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
        }
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::param("nbar", format!("must be non-negative, got {nbar}")));
        }
        Ok(Self { omega, gamma, nbar })
    }

    /// `ω = γ = 1` with the given bath occupation.
    pub fn unit(nbar: f64) -> Result<Self> {
        Self::new(1.0, 1.0, nbar)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// `f(β) = n̄ + ½`, the bath covariance scale.
    pub fn f_beta(&self) -> f64 {
        self.nbar + 0.5
    }
}

/// A point `α` of phase space; its conjugate partner is implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub alpha: C64,
}

impl PhasePoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self {
            alpha: C64::new(re, im),
        }
    }

    /// The doubled coordinate `(α, α*)`.
    pub fn vector(&self) -> Vector2<C64> {
        Vector2::new(self.alpha, self.alpha.conj())
    }
}

/// Wigner entropy `S = ln π + 1 + ½ ln det Θ`.
///
/// Evaluated as `ln √det Θ`, so a state and its passive partner (whose
/// covariance is `√det Θ · 𝕀`) produce bit-identical entropies.
pub fn wigner_entropy(state: &GaussianState) -> f64 {
    PI.ln() + 1.0 + state.det().sqrt().ln()
}

/// Relative Wigner entropy `K[W_a || W_b]` in closed form.
pub fn relative_wigner_entropy(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    clamp_nonnegative(relative_entropy_raw(a, b)?)
}

// Uses the adjugate of Θ_b so that K[W || W] and K[thermal || its passive
// partner] evaluate to exactly zero.
fn relative_entropy_raw(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let (det_a, det_b) = (a.det(), b.det());
    for det in [det_a, det_b] {
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::InvalidState(format!("singular covariance (det = {det})")));
        }
    }
    let (a11, a12) = a.reduced_cov();
    let (b11, b12) = b.reduced_cov();
    let trace = 2.0 * (b11 * a11 - (b12 * a12.conj()).re);
    let d = a.amplitude() - b.amplitude();
    let quad = 2.0 * (b11 * d.norm_sqr() - (b12 * (d.conj() * d.conj())).re);
    Ok(-1.0 + 0.5 * ((det_b / det_a).ln() + (trace + quad) / det_b))
}

fn clamp_nonnegative(k: f64) -> Result<f64> {
    if k >= 0.0 {
        Ok(k)
    } else if k >= -CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeDivergence(k))
    }
}

/// Mean energy `E = ω(Θ₁₁ + |<a>|²)` of `H = ω(a†a + ½)`.
pub fn mean_energy(state: &GaussianState, spec: &SystemBathSpec) -> f64 {
    spec.omega * (state.theta11() + state.amplitude().norm_sqr())
}

/// Occupation function of the passive state, `f(β_π) = √det Θ`.
pub fn passive_occupation(state: &GaussianState) -> f64 {
    state.det().sqrt()
}

/// The thermal state reached by optimal unitary work extraction.
pub fn passive_state(state: &GaussianState) -> GaussianState {
    GaussianState::thermal_unchecked(passive_occupation(state))
}

/// Energy of the passive state, `ω √det Θ`.
pub fn passive_energy(state: &GaussianState, spec: &SystemBathSpec) -> f64 {
    spec.omega * passive_occupation(state)
}

/// Ergotropy through the phase-space relative entropy, `ω f(β_π) K[W || W_π]`.
pub fn ergotropy(state: &GaussianState, spec: &SystemBathSpec) -> f64 {
    let passive = passive_state(state);
    let f_pi = passive.theta11();
    // Θ_π = f_π 𝕀 is never singular, so the only failure mode is rounding below zero.
    let k = relative_entropy_raw(state, &passive).unwrap_or(f64::NAN);
    debug_assert!(k >= -CLAMP_TOL, "negative K[W||W_π] = {k:e}");
    spec.omega * f_pi * k.max(0.0)
}

/// Ergotropy as the energy gap `E(W) - ω√det Θ`.
pub fn ergotropy_direct(state: &GaussianState, spec: &SystemBathSpec) -> f64 {
    (mean_energy(state, spec) - passive_energy(state, spec)).max(0.0)
}

/// Displacement and covariance contributions to the ergotropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgotropySplit {
    /// `ω|v₁|²`
    pub displacement: f64,
    /// `ω√det Θ [Tr Θ / (2√det Θ) - 1]`
    pub covariance: f64,
}

impl ErgotropySplit {
    pub fn total(&self) -> f64 {
        self.displacement + self.covariance
    }
}

/// Splits the ergotropy into mean-vector and covariance parts.
pub fn ergotropy_split(state: &GaussianState, spec: &SystemBathSpec) -> ErgotropySplit {
    let t11 = state.theta11();
    let root_det = passive_occupation(state);
    // Θ₁₁ - √det written as |Θ₁₂|²/(Θ₁₁ + √det) to avoid cancellation.
    let covariance = spec.omega * state.theta12().norm_sqr() / (t11 + root_det);
    ErgotropySplit {
        displacement: spec.omega * state.amplitude().norm_sqr(),
        covariance,
    }
}

/// Natural log of the Wigner function at `point`.
pub fn log_wigner(state: &GaussianState, point: &PhasePoint) -> f64 {
    let inv = state
        .cov_inverse()
        .expect("valid states have positive determinant");
    let d = point.vector() - state.mean;
    let quad = (d.adjoint() * inv * d)[(0, 0)].re;
    -(PI * state.det().sqrt()).ln() - 0.5 * quad
}

/// Gaussian Wigner function evaluated at `point`.
pub fn evaluate_wigner(state: &GaussianState, point: &PhasePoint) -> f64 {
    log_wigner(state, point).exp()
}
