//! Experiment configurations. Every tolerance an experiment asserts lives
//! here with its default, so a config file fully describes a run.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use momentspace::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    /// Base path for the CSV data and JSON metadata files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(flatten)]
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Experiment {
    Clt(CltConfig),
    Ldp(LdpConfig),
    Mdp(MdpConfig),
    Taylor(TaylorConfig),
    Szego(SzegoConfig),
    RangeConv(RangeConvConfig),
    SigmaPlus(SigmaPlusConfig),
}

impl Experiment {
    pub fn id(&self) -> &'static str {
        match self {
            Experiment::Clt(_) => "clt",
            Experiment::Ldp(_) => "ldp",
            Experiment::Mdp(_) => "mdp",
            Experiment::Taylor(_) => "taylor",
            Experiment::Szego(_) => "szego",
            Experiment::RangeConv(_) => "range-conv",
            Experiment::SigmaPlus(_) => "sigma-plus",
        }
    }

    /// The experiment with all defaults.
    pub fn default_for(id: &str) -> Result<Self> {
        Ok(match id {
            "clt" => Experiment::Clt(CltConfig::default()),
            "ldp" => Experiment::Ldp(LdpConfig::default()),
            "mdp" => Experiment::Mdp(MdpConfig::default()),
            "taylor" => Experiment::Taylor(TaylorConfig::default()),
            "szego" => Experiment::Szego(SzegoConfig::default()),
            "range-conv" => Experiment::RangeConv(RangeConvConfig::default()),
            "sigma-plus" => Experiment::SigmaPlus(SigmaPlusConfig::default()),
            other => return Err(Error::Config(format!("unknown experiment id {other:?}"))),
        })
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, seed: u64) -> Self {
        ExperimentConfig { schema_version: SCHEMA_VERSION, seed, output: None, experiment }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.experiment {
            Experiment::Clt(c) => {
                check_grid(&c.n_grid)?;
                check(c.k >= 1 && c.k <= 4, "clt needs 1 ≤ k ≤ 4")?;
                check(c.n_grid.iter().all(|&n| n >= c.k as u64), "clt needs n ≥ k")?;
                check(c.trials >= 2, "clt needs at least two trials")?;
            }
            Experiment::Ldp(c) => {
                check_grid(&c.n_grid)?;
                check(c.n_grid.len() >= 3, "ldp slope fit needs at least three grid points")?;
                check(c.threshold >= 0.5 && c.threshold < 1.0, "ldp threshold must lie in [1/2, 1)")?;
            }
            Experiment::Mdp(c) => {
                check_grid(&c.n_grid)?;
                check(c.gamma > 0.0 && c.gamma < 1.0, "mdp speed exponent γ must lie in (0,1)")?;
                check(c.threshold >= 0.0, "mdp threshold must be nonnegative")?;
            }
            Experiment::Taylor(c) => {
                check(c.k >= 1, "taylor needs k ≥ 1")?;
                check(c.radius > 0.0 && c.radius <= 0.05, "taylor radius must lie in (0, 0.05]")?;
                check(c.halvings >= 1, "taylor needs at least one radius halving")?;
                check(c.trials >= 1, "taylor needs trials")?;
            }
            Experiment::Szego(c) => {
                check_grid(&c.n_grid)?;
                check(c.n_grid[0] >= 1, "szego grid starts at n = 1")?;
            }
            Experiment::RangeConv(c) => {
                check_grid(&c.k_grid)?;
                check(c.k_grid[0] >= 1, "range-conv grid starts at k = 1")?;
                check(!c.polynomial.is_empty(), "range-conv needs polynomial coefficients")?;
            }
            Experiment::SigmaPlus(c) => {
                check_grid(&c.n_grid)?;
                check(c.trials >= 1, "sigma-plus needs trials")?;
            }
        }
        Ok(())
    }
}

fn check(ok: bool, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(message.to_string()))
    }
}

fn check_grid<T: PartialOrd + Copy>(grid: &[T]) -> Result<()> {
    check(!grid.is_empty(), "grid is empty")?;
    check(grid.windows(2).all(|w| w[0] < w[1]), "grid must be strictly increasing")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CltConfig {
    pub k: usize,
    pub n_grid: Vec<u64>,
    pub trials: u64,
    /// Allowed Frobenius-relative error of the empirical covariance.
    pub covariance_tolerance: f64,
    /// Allowed |mean| in standard errors.
    pub drift_sigmas: f64,
}

impl Default for CltConfig {
    fn default() -> Self {
        CltConfig { k: 2, n_grid: vec![200], trials: 100_000, covariance_tolerance: 0.1, drift_sigmas: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdpConfig {
    /// Event `{c₁ ≥ threshold}`.
    pub threshold: f64,
    pub n_grid: Vec<u64>,
    /// Fit `½ ln n`-type prefactors with a `ln n` regressor.
    pub log_regressor: bool,
    /// Relative tolerance on the fitted slope (absolute when the rate is 0).
    pub slope_tolerance: f64,
    /// Monte Carlo cross-check at this `n`; skipped when absent.
    pub monte_carlo_n: Option<u64>,
    pub monte_carlo_trials: u64,
}

impl Default for LdpConfig {
    fn default() -> Self {
        LdpConfig {
            threshold: 0.6,
            n_grid: (1..=8).map(|i| 50 * i).collect(),
            log_regressor: true,
            slope_tolerance: 0.1,
            monte_carlo_n: Some(100),
            monte_carlo_trials: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MdpConfig {
    /// Speed `u_n = n^{-γ}`.
    pub gamma: f64,
    pub threshold: f64,
    pub n_grid: Vec<u64>,
    /// Reported proximity to `4t²`; not asserted.
    pub proximity: f64,
}

impl Default for MdpConfig {
    fn default() -> Self {
        MdpConfig {
            gamma: 0.5,
            threshold: 1.0,
            n_grid: vec![100, 1_000, 10_000, 100_000, 1_000_000],
            proximity: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaylorConfig {
    pub k: usize,
    pub radius: f64,
    pub halvings: u32,
    pub trials: u64,
    /// Allowed spread of the max residual ratio across radii.
    pub ratio_spread: f64,
}

impl Default for TaylorConfig {
    fn default() -> Self {
        TaylorConfig { k: 3, radius: 0.01, halvings: 3, trials: 1_000, ratio_spread: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SzegoMeasure {
    /// The arcsine law, moments `C(2k,k)/4^k`.
    Arcsine,
    /// Lebesgue density `2x`, moments `2/(k+2)`.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SzegoConfig {
    pub measure: SzegoMeasure,
    /// Half-orders `n`; the ratio uses `H̲_{2n}`.
    pub n_grid: Vec<u64>,
    /// Allowed relative deficit at the last grid point. The default is twice
    /// the deficit of the linear density at order 40 (1.2e-2, decaying like
    /// 0.24/n); the arcsine ratio is exactly 8 at every order.
    pub final_tolerance: f64,
    /// Largest even order for the transformed-measure identity.
    pub identity_max_order: u64,
}

impl Default for SzegoConfig {
    fn default() -> Self {
        SzegoConfig {
            measure: SzegoMeasure::Linear,
            n_grid: (1..=20).collect(),
            final_tolerance: 0.025,
            identity_max_order: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RangeConvConfig {
    /// Coefficients of `P` in increasing powers; the measure is `ν / P`.
    pub polynomial: Vec<f64>,
    pub k_grid: Vec<u64>,
    pub tolerance: f64,
}

impl Default for RangeConvConfig {
    fn default() -> Self {
        RangeConvConfig {
            polynomial: vec![0.5 * (1.0 + 5f64.sqrt()), -1.0],
            k_grid: (1..=10).collect(),
            tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SigmaPlusConfig {
    pub n_grid: Vec<u64>,
    pub trials: u64,
    /// Largest tolerated share of failed constructions.
    pub max_failure_rate: f64,
}

impl Default for SigmaPlusConfig {
    fn default() -> Self {
        SigmaPlusConfig { n_grid: vec![20, 40, 80], trials: 100, max_failure_rate: 0.01 }
    }
}
