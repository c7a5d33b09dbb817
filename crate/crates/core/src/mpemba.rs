//! Ergotropic Mpemba effect: crossing of squeezed- and displaced-thermal discharge curves.
//!
//! A squeezed thermal state `S(r)πS†(r)` and a displaced thermal state
//! `D(μ)πD†(μ)` are prepared from the same passive state and released into the
//! same bath. When the squeezed battery starts with more charge
//! (`|μ|² < 2 f(β_π) sinh² r`), its ergotropy falls below the displaced one at
//!
//! ```text
//! τ_c = ln[1 + (|μ|² - 2cosh²(r) f(β_π)) (|μ|² - 2sinh²(r) f(β_π)) / (2|μ|² f(β))]
//! ```
//!
//! [`crossing_time_numeric`] recovers the same time by bisection on the sampled
//! curves and serves as the oracle for the closed form.

use std::fmt;

use rayon::prelude::*;

use crate::dynamics::{evolve_analytic, sample_trajectory, Trajectory};
use crate::error::{Error, Result};
use crate::gaussian::{ergotropy, ergotropy_split, GaussianState, SystemBathSpec};
use crate::states::{
    displaced_thermal, squeezed_thermal, DisplacementAmplitude, SqueezingParameter,
    ThermalOccupation,
};

/// Relative gap between initial charges below which they count as equal.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Why no crossing time is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoCrossing {
    /// The squeezed state does not start with more ergotropy than the displaced one.
    PreconditionViolated,
    /// Equal initial charges: the curves touch at `τ = 0` and separate.
    Degenerate,
    /// One of the two batteries carries no ergotropy.
    NoCharge,
    /// The sampled difference never changes sign on the scan window.
    NoSignChange,
}

impl NoCrossing {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoCrossing::PreconditionViolated => "no Mpemba precondition",
            NoCrossing::Degenerate => "degenerate at origin: equal initial charge",
            NoCrossing::NoCharge => "no charge",
            NoCrossing::NoSignChange => "no sign change on scan window",
        }
    }
}

impl fmt::Display for NoCrossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a crossing-time computation, in units of `τ = γt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    At(f64),
    Absent(NoCrossing),
}

impl Crossing {
    pub fn time(&self) -> Option<f64> {
        match *self {
            Crossing::At(t) => Some(t),
            Crossing::Absent(_) => None,
        }
    }

    pub fn reason(&self) -> Option<NoCrossing> {
        match *self {
            Crossing::At(_) => None,
            Crossing::Absent(n) => Some(n),
        }
    }
}

/// Parameters of a squeezed-vs-displaced comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingParams {
    pub r: f64,
    /// `|μ|`; only the modulus enters the ergotropy.
    pub mu: f64,
    pub nbar_pi: f64,
    pub nbar: f64,
}

impl CrossingParams {
    pub fn new(r: f64, mu: f64, nbar_pi: f64, nbar: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("nbar_pi", nbar_pi), ("nbar", nbar)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, format!("must be a finite value >= 0, got {v}")));
            }
        }
        if !mu.is_finite() {
            return Err(Error::param("mu", format!("must be finite, got {mu}")));
        }
        Ok(Self {
            r,
            mu: mu.abs(),
            nbar_pi,
            nbar,
        })
    }

    pub fn f_pi(&self) -> f64 {
        self.nbar_pi + 0.5
    }

    pub fn f_bath(&self) -> f64 {
        self.nbar + 0.5
    }

    pub fn squeezed_state(&self) -> Result<GaussianState> {
        Ok(squeezed_thermal(
            ThermalOccupation::new(self.nbar_pi)?,
            SqueezingParameter::real(self.r)?,
        ))
    }

    pub fn displaced_state(&self) -> Result<GaussianState> {
        Ok(displaced_thermal(
            ThermalOccupation::new(self.nbar_pi)?,
            DisplacementAmplitude::real(self.mu)?,
        ))
    }

    /// The bath of this comparison with the given frequency and damping rate.
    pub fn bath(&self, omega: f64, gamma: f64) -> Result<SystemBathSpec> {
        SystemBathSpec::new(omega, gamma, self.nbar)
    }
}

/// Closed-form crossing time.
pub fn crossing_time_closed_form(p: &CrossingParams) -> Crossing {
    let mu2 = p.mu * p.mu;
    let f_pi = p.f_pi();
    let sinh2 = p.r.sinh().powi(2);
    let cosh2 = p.r.cosh().powi(2);
    // Initial charges in units of ω.
    let charge_sq = 2.0 * f_pi * sinh2;
    let charge_disp = mu2;
    if charge_sq == 0.0 || charge_disp == 0.0 {
        return Crossing::Absent(NoCrossing::NoCharge);
    }
    let b = mu2 - charge_sq;
    if b.abs() <= DEGENERACY_TOL * charge_sq.max(charge_disp) {
        return Crossing::Absent(NoCrossing::Degenerate);
    }
    if b > 0.0 {
        return Crossing::Absent(NoCrossing::PreconditionViolated);
    }
    let a = mu2 - 2.0 * cosh2 * f_pi;
    let tau = (a * b / (2.0 * mu2 * p.f_bath())).ln_1p();
    if tau > 0.0 {
        Crossing::At(tau)
    } else {
        Crossing::Absent(NoCrossing::Degenerate)
    }
}

/// Bracket scan and bisection settings for [`crossing_time_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub tau_max: f64,
    pub step: f64,
    /// Width at which the bisection bracket is considered converged.
    pub tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            tau_max: 50.0,
            step: 0.01,
            tol: 1e-12,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_max.is_finite() && self.tau_max > 0.0) {
            return Err(Error::param("tau_max", format!("must be positive, got {}", self.tau_max)));
        }
        if !(self.step.is_finite() && self.step > 0.0 && self.step <= self.tau_max) {
            return Err(Error::param("scan_step", format!("must lie in (0, tau_max], got {}", self.step)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        Ok(())
    }
}

/// Bisection on a bracket `[lo, hi]` whose endpoints have opposite signs.
///
/// Stops once the bracket is no wider than `tol` or `f` vanishes exactly.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::param("bracket", format!("no sign change on [{lo}, {hi}]")));
    }
    // 200 halvings exhaust any f64 bracket.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Crossing time located on the evolved curves by scan-and-bisect.
pub fn crossing_time_numeric(
    p: &CrossingParams,
    spec: &SystemBathSpec,
    scan: &ScanConfig,
) -> Result<Crossing> {
    scan.validate()?;
    let squeezed = p.squeezed_state()?;
    let displaced = p.displaced_state()?;
    let bath = SystemBathSpec::new(spec.omega(), spec.gamma(), p.nbar)?;
    let charge = |s: &GaussianState, tau: f64| -> f64 {
        let evolved = evolve_analytic(s, &bath, tau / bath.gamma()).expect("tau >= 0");
        ergotropy_split(&evolved, &bath).total()
    };
    let gap = |tau: f64| charge(&squeezed, tau) - charge(&displaced, tau);

    let (e_sq, e_disp) = (charge(&squeezed, 0.0), charge(&displaced, 0.0));
    let scale = e_sq.max(e_disp);
    if scale == 0.0 {
        return Ok(Crossing::Absent(NoCrossing::NoSignChange));
    }
    let g0 = e_sq - e_disp;
    if g0.abs() <= DEGENERACY_TOL * scale {
        return Ok(Crossing::Absent(NoCrossing::Degenerate));
    }

    let steps = (scan.tau_max / scan.step).ceil() as u64;
    let mut prev = 0.0;
    for k in 1..=steps {
        let tau = (k as f64 * scan.step).min(scan.tau_max);
        let g = gap(tau);
        if g == 0.0 {
            return Ok(Crossing::At(tau));
        }
        if g.signum() != g0.signum() {
            return Ok(Crossing::At(bisect(gap, prev, tau, scan.tol)?));
        }
        prev = tau;
    }
    Ok(Crossing::Absent(NoCrossing::NoSignChange))
}

/// Closed-form and numeric crossing data for one parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingReport {
    pub params: CrossingParams,
    /// A genuine crossing at positive time exists (closed form).
    pub exists: bool,
    pub tau_c_closed: Option<f64>,
    pub tau_c_numeric: Option<f64>,
    pub erg0_squeezed: f64,
    pub erg0_displaced: f64,
    pub note: Option<NoCrossing>,
}

impl CrossingReport {
    /// `|τ_closed - τ_numeric|` when both are present.
    pub fn difference(&self) -> Option<f64> {
        Some((self.tau_c_closed? - self.tau_c_numeric?).abs())
    }
}

pub fn crossing_report(
    p: &CrossingParams,
    spec: &SystemBathSpec,
    scan: &ScanConfig,
) -> Result<CrossingReport> {
    let bath = SystemBathSpec::new(spec.omega(), spec.gamma(), p.nbar)?;
    let closed = crossing_time_closed_form(p);
    let numeric = crossing_time_numeric(p, &bath, scan)?;
    Ok(CrossingReport {
        params: *p,
        exists: closed.time().is_some(),
        tau_c_closed: closed.time(),
        tau_c_numeric: numeric.time(),
        erg0_squeezed: ergotropy(&p.squeezed_state()?, &bath),
        erg0_displaced: ergotropy(&p.displaced_state()?, &bath),
        note: closed.reason().or(numeric.reason()),
    })
}

/// Displacement amplitude whose initial ergotropy equals that of the `r`-squeezed state.
///
/// `|μ| = √(f(β_π)[cosh 2r - 1]) = √(2 f(β_π)) sinh r`.
pub fn equal_charge_amplitude(r: f64, nbar_pi: f64) -> Result<f64> {
    let occ = ThermalOccupation::new(nbar_pi)?;
    let z = SqueezingParameter::real(r)?;
    Ok((2.0 * occ.f_beta()).sqrt() * z.r().sinh())
}

/// Axes of a crossing-time sweep at fixed `|μ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    r_values: Vec<f64>,
    nbar_pi_values: Vec<f64>,
    nbar_values: Vec<f64>,
    mu: f64,
}

impl SweepGrid {
    pub fn new(r_values: Vec<f64>, nbar_pi_values: Vec<f64>, nbar_values: Vec<f64>, mu: f64) -> Result<Self> {
        for (name, axis) in [("r", &r_values), ("nbar_pi", &nbar_pi_values), ("nbar", &nbar_values)] {
            if axis.is_empty() {
                return Err(Error::param(name, "sweep axis is empty"));
            }
            if let Some(bad) = axis.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::param(name, format!("axis value {bad} is not a finite value >= 0")));
            }
        }
        if !mu.is_finite() {
            return Err(Error::param("mu", "must be finite"));
        }
        Ok(Self {
            r_values,
            nbar_pi_values,
            nbar_values,
            mu: mu.abs(),
        })
    }

    pub fn r_values(&self) -> &[f64] {
        &self.r_values
    }

    pub fn nbar_pi_values(&self) -> &[f64] {
        &self.nbar_pi_values
    }

    pub fn nbar_values(&self) -> &[f64] {
        &self.nbar_values
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.r_values.len() * self.nbar_pi_values.len() * self.nbar_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in axis order: `r` outermost, then `n̄_π`, then `n̄`.
    pub fn points(&self) -> Vec<CrossingParams> {
        let mut out = Vec::with_capacity(self.len());
        for &r in &self.r_values {
            for &nbar_pi in &self.nbar_pi_values {
                for &nbar in &self.nbar_values {
                    out.push(CrossingParams {
                        r,
                        mu: self.mu,
                        nbar_pi,
                        nbar,
                    });
                }
            }
        }
        out
    }
}

/// Counts of adjacent present `τ_c` pairs that break the expected trends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MonotonicityStats {
    /// Adjacent pairs along `n̄` (ascending) where both crossings exist.
    pub nbar_pairs: usize,
    /// Pairs along `n̄` where `τ_c` fails to strictly decrease.
    pub nbar_violations: usize,
    pub nbar_pi_pairs: usize,
    /// Pairs along `n̄_π` where `τ_c` fails to strictly increase.
    pub nbar_pi_violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<CrossingReport>,
    pub stats: MonotonicityStats,
}

/// Evaluates a [`CrossingReport`] at every grid point, in axis order.
pub fn mpemba_scan(grid: &SweepGrid, spec: &SystemBathSpec, scan: &ScanConfig) -> Result<SweepTable> {
    scan.validate()?;
    let rows = grid
        .points()
        .par_iter()
        .map(|p| crossing_report(p, spec, scan))
        .collect::<Result<Vec<_>>>()?;
    let stats = monotonicity(grid, &rows);
    Ok(SweepTable { rows, stats })
}

/// Walks one axis in ascending value order and counts (pairs, broken trends).
fn count_trend(series: Vec<(f64, Option<f64>)>, increasing: bool) -> (usize, usize) {
    let mut series: Vec<(f64, f64)> = series.into_iter().filter_map(|(x, t)| Some((x, t?))).collect();
    series.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut pairs, mut bad) = (0, 0);
    for w in series.windows(2) {
        if w[1].0 == w[0].0 {
            continue;
        }
        pairs += 1;
        let ok = if increasing { w[1].1 > w[0].1 } else { w[1].1 < w[0].1 };
        if !ok {
            bad += 1;
        }
    }
    (pairs, bad)
}

fn monotonicity(grid: &SweepGrid, rows: &[CrossingReport]) -> MonotonicityStats {
    let (n_pi, n_bath) = (grid.nbar_pi_values.len(), grid.nbar_values.len());
    let at = |ir: usize, ip: usize, ib: usize| &rows[(ir * n_pi + ip) * n_bath + ib];
    let mut stats = MonotonicityStats::default();
    for ir in 0..grid.r_values.len() {
        for ip in 0..n_pi {
            let series = (0..n_bath)
                .map(|ib| (grid.nbar_values[ib], at(ir, ip, ib).tau_c_closed))
                .collect();
            let (p, v) = count_trend(series, false);
            stats.nbar_pairs += p;
            stats.nbar_violations += v;
        }
        for ib in 0..n_bath {
            let series = (0..n_pi)
                .map(|ip| (grid.nbar_pi_values[ip], at(ir, ip, ib).tau_c_closed))
                .collect();
            let (p, v) = count_trend(series, true);
            stats.nbar_pi_pairs += p;
            stats.nbar_pi_violations += v;
        }
    }
    stats
}

/// Discharge of two batteries charged to the same initial ergotropy.
#[derive(Debug, Clone, PartialEq)]
pub struct DischargeComparison {
    pub mu: f64,
    pub squeezed: Trajectory,
    pub displaced: Trajectory,
}

impl DischargeComparison {
    /// `|ℰ_squeezed(0) - ℰ_displaced(0)|`.
    pub fn initial_gap(&self) -> f64 {
        (self.squeezed.records()[0].ergotropy - self.displaced.records()[0].ergotropy).abs()
    }

    /// First `τ > 0` on the grid where the displaced battery does not hold strictly more charge.
    pub fn first_violation(&self) -> Option<f64> {
        self.squeezed
            .records()
            .iter()
            .zip(self.displaced.records())
            .skip(1)
            .find(|(s, d)| d.ergotropy <= s.ergotropy)
            .map(|(s, _)| s.tau)
    }

    pub fn displaced_dominates(&self) -> bool {
        self.first_violation().is_none()
    }
}

/// Squeezed thermal battery against a displaced one with the equal-charge amplitude.
pub fn faster_discharge_demo(
    r: f64,
    nbar_pi: f64,
    spec: &SystemBathSpec,
    tau_grid: &[f64],
) -> Result<DischargeComparison> {
    let mu = equal_charge_amplitude(r, nbar_pi)?;
    let p = CrossingParams::new(r, mu, nbar_pi, spec.nbar())?;
    Ok(DischargeComparison {
        mu,
        squeezed: sample_trajectory(&p.squeezed_state()?, spec, tau_grid)?,
        displaced: sample_trajectory(&p.displaced_state()?, spec, tau_grid)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::uniform_grid;
    use approx::assert_relative_eq;

    fn params(r: f64, mu: f64, nbar_pi: f64, nbar: f64) -> CrossingParams {
        CrossingParams::new(r, mu, nbar_pi, nbar).unwrap()
    }

    #[test]
    fn reference_crossing_time() {
        let p = params(1.0, 1.0, 0.2, 0.4);
        let closed = crossing_time_closed_form(&p).time().unwrap();
        assert_relative_eq!(closed, 0.793_103_891_254_493_8, max_relative = 1e-12);
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let numeric = crossing_time_numeric(&p, &spec, &ScanConfig::default()).unwrap();
        assert!((numeric.time().unwrap() - closed).abs() <= 1e-9);
    }

    #[test]
    fn boundary_and_violated_precondition() {
        let mu_eq = equal_charge_amplitude(1.0, 0.2).unwrap();
        let p = params(1.0, mu_eq, 0.2, 0.4);
        assert_eq!(crossing_time_closed_form(&p), Crossing::Absent(NoCrossing::Degenerate));
        let spec = SystemBathSpec::unit(0.4).unwrap();
        assert_eq!(
            crossing_time_numeric(&p, &spec, &ScanConfig::default()).unwrap(),
            Crossing::Absent(NoCrossing::Degenerate)
        );

        let p = params(1.0, 1.5, 0.2, 0.4);
        assert_eq!(
            crossing_time_closed_form(&p),
            Crossing::Absent(NoCrossing::PreconditionViolated)
        );
        assert_eq!(NoCrossing::PreconditionViolated.to_string(), "no Mpemba precondition");
        assert_eq!(
            crossing_time_numeric(&p, &spec, &ScanConfig::default()).unwrap(),
            Crossing::Absent(NoCrossing::NoSignChange)
        );
    }

    #[test]
    fn thermal_pair_never_crosses() {
        let p = params(0.0, 0.0, 0.2, 0.4);
        let spec = SystemBathSpec::unit(0.4).unwrap();
        assert_eq!(crossing_time_closed_form(&p), Crossing::Absent(NoCrossing::NoCharge));
        assert!(crossing_time_numeric(&p, &spec, &ScanConfig::default())
            .unwrap()
            .time()
            .is_none());
        let only_squeezed = params(1.0, 0.0, 0.2, 0.4);
        assert!(crossing_time_closed_form(&only_squeezed).time().is_none());
        assert!(crossing_time_numeric(&only_squeezed, &spec, &ScanConfig::default())
            .unwrap()
            .time()
            .is_none());
    }

    #[test]
    fn equal_charge_examples() {
        assert_eq!(equal_charge_amplitude(0.0, 0.3).unwrap(), 0.0);
        let mu = equal_charge_amplitude(1.0, 0.2).unwrap();
        assert_relative_eq!(mu, (0.7 * (2f64.cosh() - 1.0)).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(mu, 1.390_516_804_558_126_2, max_relative = 1e-13);
        assert_relative_eq!(equal_charge_amplitude(1.0, 0.0).unwrap(), 1f64.sinh(), max_relative = 1e-15);

        let spec = SystemBathSpec::unit(0.4).unwrap();
        let p = params(1.0, mu, 0.2, 0.4);
        let es = ergotropy(&p.squeezed_state().unwrap(), &spec);
        let ed = ergotropy(&p.displaced_state().unwrap(), &spec);
        assert!((es - ed).abs() <= 1e-12 * es);
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let root = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn single_point_sweep_matches_closed_form() {
        let grid = SweepGrid::new(vec![1.0], vec![0.2], vec![0.4], 1.0).unwrap();
        let spec = SystemBathSpec::unit(0.0).unwrap();
        let table = mpemba_scan(&grid, &spec, &ScanConfig::default()).unwrap();
        assert_eq!(table.rows.len(), 1);
        let expected = crossing_time_closed_form(&params(1.0, 1.0, 0.2, 0.4)).time();
        assert_eq!(table.rows[0].tau_c_closed, expected);
        assert!(table.rows[0].difference().unwrap() <= 1e-9);
    }

    #[test]
    fn empty_axis_rejected() {
        assert!(SweepGrid::new(vec![], vec![0.5], vec![0.5], 1.0).is_err());
        assert!(SweepGrid::new(vec![1.0], vec![-0.5], vec![0.5], 1.0).is_err());
    }

    #[test]
    fn sweep_trends_small_grid() {
        let axis: Vec<f64> = (0..11).map(|i| 0.2 * i as f64).collect();
        let spec = SystemBathSpec::unit(0.0).unwrap();
        let scan = ScanConfig::default();
        let a = mpemba_scan(&SweepGrid::new(vec![0.8, 1.0, 1.2], vec![0.5], axis.clone(), 1.0).unwrap(), &spec, &scan)
            .unwrap();
        assert_eq!(a.stats.nbar_pairs, 30);
        assert_eq!(a.stats.nbar_violations, 0);
        let b = mpemba_scan(&SweepGrid::new(vec![0.8, 1.0, 1.2], axis, vec![0.5], 1.0).unwrap(), &spec, &scan)
            .unwrap();
        assert!(b.stats.nbar_pi_pairs > 0);
        assert_eq!(b.stats.nbar_pi_violations, 0);
    }

    #[test]
    fn equal_charge_discharge() {
        let grid = uniform_grid(5.0, 0.01).unwrap();
        let spec = SystemBathSpec::unit(0.4).unwrap();
        let demo = faster_discharge_demo(1.0, 0.2, &spec, &grid).unwrap();
        assert!(demo.initial_gap() <= 1e-12);
        assert!(demo.displaced_dominates());

        let same_temp = SystemBathSpec::unit(0.2).unwrap();
        let demo = faster_discharge_demo(0.6, 0.2, &same_temp, &grid).unwrap();
        assert!(demo.displaced_dominates());

        let flat = faster_discharge_demo(0.0, 0.2, &spec, &grid).unwrap();
        assert!(flat.squeezed.ergotropies().all(|e| e == 0.0));
        assert!(flat.displaced.ergotropies().all(|e| e == 0.0));
    }
}
