use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::config::RunConfig;
use crate::cli::CliError;

#[derive(Debug, Parser)]
#[command(name = "ergoflow", version, about = "Ergotropy dynamics of Gaussian bosonic batteries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a closed-form trajectory as CSV.
    Simulate(CommonArgs),
    /// Report the squeezed/displaced ergotropy crossing time.
    Crossing(CommonArgs),
    /// Tabulate crossing times over a parameter grid.
    Sweep(CommonArgs),
    /// Compare the closed forms against the RK4 and Fock-space oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags given here take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// thermal | displaced | squeezed | squeezed-displaced
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "nbar-pi", allow_negative_numbers = true)]
    pub nbar_pi: Option<f64>,
    /// Bath occupation.
    #[arg(long, allow_negative_numbers = true)]
    pub nbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Squeezing modulus.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Squeezing phase.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Displacement modulus.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long = "mu-phase", allow_negative_numbers = true)]
    pub mu_phase: Option<f64>,
    /// End of the time grid (τ = γt unless --absolute-time).
    #[arg(long, allow_negative_numbers = true)]
    pub tmax: Option<f64>,
    /// Grid spacing (τ = γt unless --absolute-time).
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    /// Read --tmax and --dt as physical times t rather than τ = γt.
    #[arg(long = "absolute-time")]
    pub absolute_time: bool,
    /// Fock-space cutoff for the verification oracles.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random initial states in the RK4 check.
    #[arg(long = "random-states")]
    pub random_states: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sweep axis: `a,b,c` or `start:stop:count`.
    #[arg(long = "r-values", allow_hyphen_values = true)]
    pub r_values: Option<String>,
    #[arg(long = "nbar-pi-values", allow_hyphen_values = true)]
    pub nbar_pi_values: Option<String>,
    #[arg(long = "nbar-values", allow_hyphen_values = true)]
    pub nbar_values: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Drop γ from the bath noise term of the RK4 oracle.
    #[arg(long = "noise-without-gamma", hide = true)]
    pub noise_without_gamma: bool,
}

impl CommonArgs {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut put = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k, v));
            }
        };
        let num = |v: Option<f64>| v.map(|x| x.to_string());
        put("family", self.family.clone());
        put("nbar-pi", num(self.nbar_pi));
        put("nbar", num(self.nbar));
        put("omega", num(self.omega));
        put("gamma", num(self.gamma));
        put("r", num(self.r));
        put("theta", num(self.theta));
        put("mu", num(self.mu));
        put("mu-phase", num(self.mu_phase));
        put("tmax", num(self.tmax));
        put("dt", num(self.dt));
        put("absolute-time", self.absolute_time.then(|| "true".to_string()));
        put("cutoff", self.cutoff.map(|x| x.to_string()));
        put("seed", self.seed.map(|x| x.to_string()));
        put("random-states", self.random_states.map(|x| x.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("r-values", self.r_values.clone());
        put("nbar-pi-values", self.nbar_pi_values.clone());
        put("nbar-values", self.nbar_values.clone());
        out
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_config_file(path)?,
            None => RunConfig::default(),
        };
        for (k, v) in self.overrides() {
            cfg.set(k, &v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
