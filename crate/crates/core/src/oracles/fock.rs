//! Truncated Fock-space density matrices evolved under the thermal
//! Lindblad master equation
//! `ρ̇ = -iω[a†a, ρ] + γ(n̄+1) 𝒟[a]ρ + γ n̄ 𝒟[a†]ρ`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SystemBathSpec};
use crate::states::{DisplacementAmplitude, SqueezingParameter, ThermalOccupation};
use crate::C64;

/// Maximum allowed population on the top `TAIL_WINDOW` levels before truncation.
pub const CUTOFF_TAIL_THRESHOLD: f64 = 1e-5;
pub const TAIL_WINDOW: usize = 5;
pub const DEFAULT_FOCK_DT: f64 = 1e-3;

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const POSITIVITY_TOL: f64 = 1e-10;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Validated density matrix in the truncated basis `|0⟩ … |N-1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    rho: DMatrix<C64>,
}

impl FockDensityMatrix {
    pub fn new(rho: DMatrix<C64>) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected a non-empty square matrix, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let out = Self { rho };
        out.validate()?;
        Ok(out)
    }

    pub fn thermal(nbar: f64, dim: usize) -> Result<Self> {
        let occ = ThermalOccupation::new(nbar)?;
        if dim == 0 {
            return Err(Error::param("cutoff", "must be positive"));
        }
        Self::new(thermal_matrix(occ.nbar(), dim))
    }

    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::param("n", format!("level {n} outside cutoff {dim}")));
        }
        let mut rho = DMatrix::from_element(dim, dim, zero());
        rho[(n, n)] = C64::new(1.0, 0.0);
        Self::new(rho)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let herm = (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian, deviation {herm:e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.rho.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// First and second moments, as a Gaussian covariance description.
    pub fn moments(&self) -> FockMoments {
        let n = self.dim();
        let mut a = zero();
        let mut a2 = zero();
        let mut num = 0.0;
        for m in 0..n {
            num += m as f64 * self.rho[(m, m)].re;
            if m + 1 < n {
                a += self.rho[(m + 1, m)] * ((m + 1) as f64).sqrt();
            }
            if m + 2 < n {
                a2 += self.rho[(m + 2, m)] * (((m + 1) * (m + 2)) as f64).sqrt();
            }
        }
        FockMoments {
            amplitude: a,
            number: num,
            theta11: num + 0.5 - a.norm_sqr(),
            theta12: a2 - a * a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockMoments {
    /// `⟨a⟩`
    pub amplitude: C64,
    /// `⟨a†a⟩`
    pub number: f64,
    pub theta11: f64,
    pub theta12: C64,
}

impl FockMoments {
    pub fn to_state(&self) -> Result<GaussianState> {
        GaussianState::from_moments(self.amplitude, self.theta11, self.theta12)
    }
}

/// Parameters of `S(z) D(μ) π D†(μ) S†(z)` for building Fock-space states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDescriptor {
    pub occupation: ThermalOccupation,
    pub displacement: DisplacementAmplitude,
    pub squeezing: SqueezingParameter,
}

impl GaussianDescriptor {
    pub fn new(occupation: ThermalOccupation, displacement: DisplacementAmplitude, squeezing: SqueezingParameter) -> Self {
        Self {
            occupation,
            displacement,
            squeezing,
        }
    }

    pub fn thermal(nbar_pi: f64) -> Result<Self> {
        Ok(Self::new(
            ThermalOccupation::new(nbar_pi)?,
            DisplacementAmplitude::real(0.0)?,
            SqueezingParameter::real(0.0)?,
        ))
    }

    pub fn squeezed(nbar_pi: f64, r: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            squeezing: SqueezingParameter::new(r, theta)?,
            ..Self::thermal(nbar_pi)?
        })
    }

    pub fn displaced(nbar_pi: f64, mu: C64) -> Result<Self> {
        Ok(Self {
            displacement: DisplacementAmplitude::new(mu)?,
            ..Self::thermal(nbar_pi)?
        })
    }

    /// The same state in the Gaussian description.
    pub fn gaussian(&self) -> GaussianState {
        crate::states::squeezed_displaced_thermal(self.occupation, self.displacement, self.squeezing)
    }
}

fn thermal_matrix(nbar: f64, dim: usize) -> DMatrix<C64> {
    let mut rho = DMatrix::from_element(dim, dim, zero());
    let q = nbar / (nbar + 1.0);
    let mut p = 1.0 / (nbar + 1.0);
    let mut total = 0.0;
    for n in 0..dim {
        rho[(n, n)] = C64::new(p, 0.0);
        total += p;
        p *= q;
    }
    rho / C64::new(total, 0.0)
}

fn annihilation(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::from_element(dim, dim, zero());
    for m in 1..dim {
        a[(m - 1, m)] = C64::new((m as f64).sqrt(), 0.0);
    }
    a
}

/// Builds the state in a larger space, checks the population near the
/// cutoff and truncates to `cutoff` levels with renormalisation.
pub fn prepare_fock_state(desc: &GaussianDescriptor, cutoff: usize) -> Result<FockDensityMatrix> {
    if cutoff <= TAIL_WINDOW {
        return Err(Error::param("cutoff", format!("must exceed {TAIL_WINDOW}, got {cutoff}")));
    }
    let ext = 2 * cutoff + 20;
    let a = annihilation(ext);
    let ad = a.adjoint();
    let mu = desc.displacement.value();
    let z = C64::from_polar(desc.squeezing.r(), desc.squeezing.theta());

    let d = (&ad * mu - &a * mu.conj()).exp();
    let a2 = &a * &a;
    let s = ((&a2 * z.conj() - a2.adjoint() * z) * C64::new(0.5, 0.0)).exp();
    let u = s * d;
    let full = &u * thermal_matrix(desc.occupation.nbar(), ext) * u.adjoint();

    let tail: f64 = (cutoff - TAIL_WINDOW..ext).map(|n| full[(n, n)].re).sum();
    if tail > CUTOFF_TAIL_THRESHOLD {
        return Err(Error::CutoffTooSmall {
            cutoff,
            level: cutoff - TAIL_WINDOW,
            tail,
            threshold: CUTOFF_TAIL_THRESHOLD,
        });
    }
    let mut rho = full.view((0, 0), (cutoff, cutoff)).into_owned();
    let tr: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    rho /= C64::new(tr, 0.0);
    rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    FockDensityMatrix::new(rho)
}

/// Lindblad generator acting on truncated density matrices.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    dim: usize,
    omega: f64,
    down: f64,
    up: f64,
    sqrt: Vec<f64>,
}

impl LindbladGenerator {
    pub fn new(spec: &SystemBathSpec, dim: usize) -> Self {
        Self {
            dim,
            omega: spec.omega(),
            down: spec.gamma() * (spec.nbar() + 1.0),
            up: spec.gamma() * spec.nbar(),
            sqrt: (0..=dim).map(|k| (k as f64).sqrt()).collect(),
        }
    }

    /// `(aa†)ₘₘ` in the truncated space; the top level has no partner.
    fn aad(&self, m: usize) -> f64 {
        if m + 1 < self.dim {
            (m + 1) as f64
        } else {
            0.0
        }
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |m, k| {
            let r = rho[(m, k)];
            let (mf, kf) = (m as f64, k as f64);
            let mut out = C64::new(0.0, -self.omega * (mf - kf)) * r;
            out -= r * (0.5 * self.down * (mf + kf) + 0.5 * self.up * (self.aad(m) + self.aad(k)));
            if m + 1 < n && k + 1 < n {
                out += rho[(m + 1, k + 1)] * (self.down * self.sqrt[m + 1] * self.sqrt[k + 1]);
            }
            if m >= 1 && k >= 1 {
                out += rho[(m - 1, k - 1)] * (self.up * self.sqrt[m] * self.sqrt[k]);
            }
            out
        })
    }

    pub fn rk4_step(&self, rho: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
        let c = |x: f64| C64::new(x, 0.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1 * c(0.5 * h)));
        let k3 = self.apply(&(rho + &k2 * c(0.5 * h)));
        let k4 = self.apply(&(rho + &k3 * c(h)));
        rho + (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0)
    }
}

/// Evolves `rho0` and returns the state at each of the (ascending) physical `times`.
pub fn fock_lindblad_trajectory(
    rho0: &FockDensityMatrix,
    spec: &SystemBathSpec,
    times: &[f64],
    dt: f64,
) -> Result<Vec<FockDensityMatrix>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    let gen = LindbladGenerator::new(spec, rho0.dim());
    let mut rho = rho0.rho.clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if !t.is_finite() || t < now {
            return Err(Error::InvalidGrid(format!("times must be finite, >= 0 and ascending, got {t}")));
        }
        let span = t - now;
        let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                rho = gen.rk4_step(&rho, h);
            }
        }
        now = t;
        out.push(FockDensityMatrix::new((&rho + rho.adjoint()) * C64::new(0.5, 0.0))?);
    }
    Ok(out)
}

pub fn fock_lindblad_evolve(rho0: &FockDensityMatrix, spec: &SystemBathSpec, t: f64, dt: f64) -> Result<FockDensityMatrix> {
    Ok(fock_lindblad_trajectory(rho0, spec, &[t], dt)?.remove(0))
}

/// Mean energy `ω Tr[(a†a + ½) ρ]`.
pub fn fock_energy(rho: &FockDensityMatrix, spec: &SystemBathSpec) -> f64 {
    spec.omega() * rho.populations().iter().enumerate().map(|(n, p)| (n as f64 + 0.5) * p).sum::<f64>()
}

/// Ergotropy from the spectrum: energy minus the energy of the eigenvalues
/// placed in descending order on ascending Fock levels.
pub fn fock_ergotropy(rho: &FockDensityMatrix, spec: &SystemBathSpec) -> Result<f64> {
    rho.validate()?;
    let passive: f64 = rho
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, &p)| (k as f64 + 0.5) * p.max(0.0))
        .sum();
    let erg = fock_energy(rho, spec) - spec.omega() * passive;
    Ok(erg.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::ergotropy;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = DMatrix::from_element(3, 3, zero());
        m[(0, 0)] = C64::new(0.5, 0.0);
        assert!(FockDensityMatrix::new(m.clone()).is_err());
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(FockDensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.1, 0.0);
        assert!(FockDensityMatrix::new(m).is_ok());
        let mut neg = DMatrix::from_element(2, 2, zero());
        neg[(0, 0)] = C64::new(1.5, 0.0);
        neg[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(FockDensityMatrix::new(neg).is_err());
    }

    #[test]
    fn thermal_and_fock_ergotropy() {
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let th = FockDensityMatrix::thermal(0.3, 40).unwrap();
        assert!(fock_ergotropy(&th, &spec).unwrap() < 1e-14);
        let f3 = FockDensityMatrix::fock(3, 10).unwrap();
        assert_relative_eq!(fock_ergotropy(&f3, &spec).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn prepared_states_match_gaussian_moments() {
        let desc = GaussianDescriptor::new(
            ThermalOccupation::new(0.2).unwrap(),
            DisplacementAmplitude::polar(0.6, 0.3).unwrap(),
            SqueezingParameter::new(0.5, 0.9).unwrap(),
        );
        let rho = prepare_fock_state(&desc, 50).unwrap();
        let m = rho.moments();
        let g = desc.gaussian();
        assert!((m.amplitude - g.amplitude()).norm() < 1e-8);
        assert!((m.theta11 - g.theta11()).abs() < 1e-8);
        assert!((m.theta12 - g.theta12()).norm() < 1e-8);
    }

    #[test]
    fn fock_ergotropy_matches_gaussian_for_squeezed_thermal() {
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let desc = GaussianDescriptor::squeezed(0.2, 1.0, 0.0).unwrap();
        let rho = prepare_fock_state(&desc, 60).unwrap();
        let exact = ergotropy(&desc.gaussian(), &spec);
        assert!((fock_ergotropy(&rho, &spec).unwrap() - exact).abs() < 1e-4);
    }

    #[test]
    fn small_cutoff_is_rejected() {
        let desc = GaussianDescriptor::squeezed(0.2, 1.0, 0.0).unwrap();
        match prepare_fock_state(&desc, 10) {
            Err(Error::CutoffTooSmall { cutoff, tail, .. }) => {
                assert_eq!(cutoff, 10);
                assert!(tail > CUTOFF_TAIL_THRESHOLD);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generator_preserves_trace_and_fixes_thermal_state() {
        let spec = SystemBathSpec::new(1.0, 0.8, 0.4).unwrap();
        let gen = LindbladGenerator::new(&spec, 30);
        let th = FockDensityMatrix::thermal(0.4, 30).unwrap();
        let d = gen.apply(th.matrix());
        // Only the truncation edge breaks stationarity.
        let max = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max < 1e-4, "{max}");
        let rho = prepare_fock_state(&GaussianDescriptor::squeezed(0.1, 0.4, 0.2).unwrap(), 30).unwrap();
        let tr: C64 = gen.apply(rho.matrix()).diagonal().iter().sum();
        assert!(tr.norm() < 1e-13);
    }

    #[test]
    fn vacuum_and_bath_thermal_are_stationary() {
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let vac = prepare_fock_state(&GaussianDescriptor::thermal(0.0).unwrap(), 20).unwrap();
        assert_eq!(vac.matrix(), FockDensityMatrix::fock(0, 20).unwrap().matrix());
        assert_eq!(fock_lindblad_evolve(&vac, &spec, 0.0, DEFAULT_FOCK_DT).unwrap(), vac);

        let th = FockDensityMatrix::thermal(0.4, 60).unwrap();
        let out = fock_lindblad_evolve(&th, &spec, 2.0, DEFAULT_FOCK_DT).unwrap();
        let dev = th
            .populations()
            .iter()
            .zip(out.populations())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-8, "{dev}");
    }

    #[test]
    fn displaced_mean_decays_as_expected() {
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let mu = C64::new(1.0, 0.0);
        let rho = prepare_fock_state(&GaussianDescriptor::displaced(0.2, mu).unwrap(), 40).unwrap();
        let out = fock_lindblad_evolve(&rho, &spec, 1.0, DEFAULT_FOCK_DT).unwrap();
        let expected = mu * (C64::new(-0.5, -1.0)).exp();
        assert!((out.moments().amplitude - expected).norm() < 1e-6);
    }
}
