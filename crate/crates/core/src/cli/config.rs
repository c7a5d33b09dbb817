//! Run configuration shared by every command, loaded from a flat
//! `key = value` file and overridden by command-line flags.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::cli::CliError;

/// Initial-state family for `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Family {
    Thermal,
    Displaced,
    #[default]
    Squeezed,
    SqueezedDisplaced,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Thermal => "thermal",
            Family::Displaced => "displaced",
            Family::Squeezed => "squeezed",
            Family::SqueezedDisplaced => "squeezed-displaced",
        }
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "thermal" => Ok(Family::Thermal),
            "displaced" => Ok(Family::Displaced),
            "squeezed" => Ok(Family::Squeezed),
            "squeezed-displaced" => Ok(Family::SqueezedDisplaced),
            other => Err(CliError::Usage(format!(
                "unknown family `{other}`; expected thermal, displaced, squeezed or squeezed-displaced"
            ))),
        }
    }
}

/// Values along one sweep axis: `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
#[derive(Debug, Clone, PartialEq)]
pub enum AxisSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            AxisSpec::List(ref v) => v.clone(),
            AxisSpec::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

impl FromStr for AxisSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(AxisSpec::List(Vec::new()));
        }
        let bad = |what: &str| CliError::Usage(format!("cannot parse axis `{s}`: {what}"));
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad("a range needs start:stop:count"));
            }
            let start = parts[0].parse().map_err(|_| bad("start is not a number"))?;
            let stop = parts[1].parse().map_err(|_| bad("stop is not a number"))?;
            let count = parts[2].parse().map_err(|_| bad("count is not a whole number"))?;
            return Ok(AxisSpec::Range { start, stop, count });
        }
        let values = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad("list entries must be numbers")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AxisSpec::List(values))
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisSpec::List(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", items.join(","))
            }
            AxisSpec::Range { start, stop, count } => write!(f, "{start}:{stop}:{count}"),
        }
    }
}

/// Every recognised key, in serialisation order.
pub const KEYS: &[&str] = &[
    "family",
    "nbar-pi",
    "nbar",
    "omega",
    "gamma",
    "r",
    "theta",
    "mu",
    "mu-phase",
    "tmax",
    "dt",
    "absolute-time",
    "cutoff",
    "seed",
    "random-states",
    "out",
    "r-values",
    "nbar-pi-values",
    "nbar-values",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub nbar_pi: f64,
    pub nbar: f64,
    pub omega: f64,
    pub gamma: f64,
    pub r: f64,
    pub theta: f64,
    pub mu: f64,
    pub mu_phase: f64,
    /// End of the time grid, in `τ = γt` unless `absolute_time` is set.
    pub tmax: f64,
    pub dt: f64,
    pub absolute_time: bool,
    pub cutoff: usize,
    pub seed: u64,
    pub random_states: usize,
    pub out: Option<PathBuf>,
    pub r_values: Option<AxisSpec>,
    pub nbar_pi_values: Option<AxisSpec>,
    pub nbar_values: Option<AxisSpec>,
    explicit: BTreeSet<&'static str>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: Family::Squeezed,
            nbar_pi: 0.2,
            nbar: 0.4,
            omega: 1.0,
            gamma: 1.0,
            r: 1.0,
            theta: 0.0,
            mu: 1.0,
            mu_phase: 0.0,
            tmax: 5.0,
            dt: 0.01,
            absolute_time: false,
            cutoff: 60,
            seed: 7,
            random_states: 100,
            out: None,
            r_values: None,
            nbar_pi_values: None,
            nbar_values: None,
            explicit: BTreeSet::new(),
        }
    }
}

fn canonical_key(key: &str) -> Result<&'static str, CliError> {
    let norm = key.trim().replace('_', "-");
    KEYS.iter()
        .copied()
        .find(|k| *k == norm)
        .ok_or_else(|| CliError::Usage(format!("unknown configuration key `{}`", key.trim())))
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("`{key}` expects a number, got `{value}`")))
}

impl RunConfig {
    /// Parses a flat `key = value` text; `#` starts a comment.
    pub fn from_config_str(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            let key = canonical_key(key)?;
            if cfg.explicit.contains(key) {
                return Err(CliError::Usage(format!("line {}: `{key}` given twice", lineno + 1)));
            }
            cfg.set(key, value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_config_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!(
            "cannot read config file {}: {e}",
            path.display()
        )))?;
        Self::from_config_str(&text)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = canonical_key(key)?;
        match key {
            "family" => self.family = value.parse()?,
            "nbar-pi" => self.nbar_pi = number(key, value)?,
            "nbar" => self.nbar = number(key, value)?,
            "omega" => self.omega = number(key, value)?,
            "gamma" => self.gamma = number(key, value)?,
            "r" => self.r = number(key, value)?,
            "theta" => self.theta = number(key, value)?,
            "mu" => self.mu = number(key, value)?,
            "mu-phase" => self.mu_phase = number(key, value)?,
            "tmax" => self.tmax = number(key, value)?,
            "dt" => self.dt = number(key, value)?,
            "absolute-time" => {
                self.absolute_time = value
                    .parse()
                    .map_err(|_| CliError::Usage(format!("`{key}` expects true or false, got `{value}`")))?
            }
            "cutoff" => self.cutoff = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "random-states" => self.random_states = number(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "r-values" => self.r_values = Some(value.parse()?),
            "nbar-pi-values" => self.nbar_pi_values = Some(value.parse()?),
            "nbar-values" => self.nbar_values = Some(value.parse()?),
            _ => unreachable!("canonical_key only returns known keys"),
        }
        self.explicit.insert(key);
        Ok(())
    }

    fn value_of(&self, key: &str) -> String {
        let axis = |a: &Option<AxisSpec>| a.as_ref().map(|a| a.to_string()).unwrap_or_default();
        match key {
            "family" => self.family.as_str().to_string(),
            "nbar-pi" => self.nbar_pi.to_string(),
            "nbar" => self.nbar.to_string(),
            "omega" => self.omega.to_string(),
            "gamma" => self.gamma.to_string(),
            "r" => self.r.to_string(),
            "theta" => self.theta.to_string(),
            "mu" => self.mu.to_string(),
            "mu-phase" => self.mu_phase.to_string(),
            "tmax" => self.tmax.to_string(),
            "dt" => self.dt.to_string(),
            "absolute-time" => self.absolute_time.to_string(),
            "cutoff" => self.cutoff.to_string(),
            "seed" => self.seed.to_string(),
            "random-states" => self.random_states.to_string(),
            "out" => self.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            "r-values" => axis(&self.r_values),
            "nbar-pi-values" => axis(&self.nbar_pi_values),
            "nbar-values" => axis(&self.nbar_values),
            _ => unreachable!(),
        }
    }

    /// Keys that were set from a file or flag, in [`KEYS`] order.
    pub fn explicit_keys(&self) -> Vec<&'static str> {
        KEYS.iter().copied().filter(|k| self.explicit.contains(k)).collect()
    }

    /// Writes the explicitly set keys back as `key = value` lines.
    pub fn to_config_string(&self) -> String {
        self.explicit_keys()
            .into_iter()
            .map(|k| format!("{k} = {}\n", self.value_of(k)))
            .collect()
    }

    /// Checks physical parameters and the time grid.
    pub fn validate(&self) -> Result<(), CliError> {
        let nonneg = [
            ("nbar-pi", self.nbar_pi),
            ("nbar", self.nbar),
            ("r", self.r),
            ("mu", self.mu),
            ("tmax", self.tmax),
        ];
        for (k, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Usage(format!("--{k} must be a finite value >= 0, got {v}")));
            }
        }
        for (k, v) in [("omega", self.omega), ("gamma", self.gamma), ("dt", self.dt)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("--{k} must be a finite value > 0, got {v}")));
            }
        }
        for (k, v) in [("theta", self.theta), ("mu-phase", self.mu_phase)] {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("--{k} must be finite, got {v}")));
            }
        }
        if self.dt > self.tmax && self.tmax > 0.0 {
            return Err(CliError::Usage(format!(
                "--dt ({}) exceeds --tmax ({}); the grid would hold a single point",
                self.dt, self.tmax
            )));
        }
        Ok(())
    }

    /// `(τ_max, dτ)`, converting from physical time when `absolute_time` is set.
    pub fn tau_grid_bounds(&self) -> (f64, f64) {
        if self.absolute_time {
            (self.gamma * self.tmax, self.gamma * self.dt)
        } else {
            (self.tmax, self.dt)
        }
    }
}
