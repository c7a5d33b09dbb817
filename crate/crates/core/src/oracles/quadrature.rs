//! Midpoint-rule integration of Wigner functions over a square window in
//! the complex plane, used to cross-check the closed-form functionals.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{log_wigner, passive_state, GaussianState, PhasePoint, SystemBathSpec};

/// Widths (in standard deviations) kept around the mean by [`PhaseSpaceGrid::adapted`].
pub const ADAPTED_SIGMAS: f64 = 8.0;

/// `points × points` midpoint nodes on `[-L, L]²`, `α = x + i y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    half_width: f64,
    points: usize,
}

impl PhaseSpaceGrid {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width must be positive, got {half_width}")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points per axis, got {points}")));
        }
        Ok(Self { half_width, points })
    }

    /// Window wide enough to hold every state to `ADAPTED_SIGMAS` deviations.
    pub fn adapted(states: &[&GaussianState], points: usize) -> Result<Self> {
        let reach = states
            .iter()
            .map(|s| {
                let (t11, t12) = s.reduced_cov();
                let sigma = (0.5 * (t11 + t12.norm())).sqrt();
                s.amplitude().norm() + ADAPTED_SIGMAS * sigma
            })
            .fold(0.0, f64::max);
        Self::new(reach, points)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    fn node(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    /// `∫ g(α) d²α` over the window.
    pub fn integrate<F>(&self, g: F) -> f64
    where
        F: Fn(&PhasePoint) -> f64 + Sync,
    {
        let h = self.spacing();
        let total: f64 = (0..self.points)
            .into_par_iter()
            .map(|i| {
                let x = self.node(i);
                (0..self.points).map(|j| g(&PhasePoint::new(x, self.node(j)))).sum::<f64>()
            })
            .sum();
        total * h * h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMoments {
    /// `∫ W`
    pub norm: f64,
    /// `∫ |α|² W`, the energy in units of ω.
    pub energy: f64,
    /// `-∫ W ln W`
    pub entropy: f64,
}

pub fn wigner_moments(state: &GaussianState, grid: &PhaseSpaceGrid) -> WignerMoments {
    let parts = |p: &PhasePoint| {
        let lw = log_wigner(state, p);
        (lw.exp(), lw)
    };
    WignerMoments {
        norm: grid.integrate(|p| parts(p).0),
        energy: grid.integrate(|p| parts(p).0 * p.alpha.norm_sqr()),
        entropy: grid.integrate(|p| {
            let (w, lw) = parts(p);
            -w * lw
        }),
    }
}

/// `∫ W_a (ln W_a - ln W_b)`.
pub fn relative_entropy_quadrature(a: &GaussianState, b: &GaussianState, grid: &PhaseSpaceGrid) -> f64 {
    grid.integrate(|p| {
        let la = log_wigner(a, p);
        la.exp() * (la - log_wigner(b, p))
    })
}

/// Ergotropy through `ω f_π K[W‖W_π]`, with the divergence integrated numerically.
pub fn ergotropy_quadrature(state: &GaussianState, spec: &SystemBathSpec, grid: &PhaseSpaceGrid) -> f64 {
    let passive = passive_state(state);
    spec.omega() * passive.theta11() * relative_entropy_quadrature(state, &passive, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{ergotropy, mean_energy, relative_wigner_entropy, wigner_entropy};
    use crate::states::*;

    #[test]
    fn grid_validation() {
        assert!(PhaseSpaceGrid::new(0.0, 10).is_err());
        assert!(PhaseSpaceGrid::new(1.0, 1).is_err());
        let g = PhaseSpaceGrid::new(6.0, 400).unwrap();
        assert!((g.spacing() - 0.03).abs() < 1e-15);
    }

    #[test]
    fn displaced_squeezed_state_functionals() {
        let s = squeezed_displaced_thermal(
            ThermalOccupation::new(0.3).unwrap(),
            DisplacementAmplitude::polar(0.7, 0.5).unwrap(),
            SqueezingParameter::new(0.4, 1.1).unwrap(),
        );
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let grid = PhaseSpaceGrid::new(6.0, 400).unwrap();
        let m = wigner_moments(&s, &grid);
        assert!((m.norm - 1.0).abs() < 1e-6);
        assert!((m.energy - mean_energy(&s, &spec)).abs() < 1e-6);
        assert!((m.entropy - wigner_entropy(&s)).abs() < 1e-6);
        assert!((ergotropy_quadrature(&s, &spec, &grid) - ergotropy(&s, &spec)).abs() < 1e-6);
    }

    #[test]
    fn thermal_relative_entropy() {
        let a = thermal_state(ThermalOccupation::new(0.2).unwrap());
        let b = thermal_state(ThermalOccupation::new(0.4).unwrap());
        let grid = PhaseSpaceGrid::adapted(&[&a, &b], 400).unwrap();
        let k = relative_entropy_quadrature(&a, &b, &grid);
        assert!((k - relative_wigner_entropy(&a, &b).unwrap()).abs() < 1e-8);
        assert!((k - 0.029_092_206_058_683_79).abs() < 1e-8);
    }
}
