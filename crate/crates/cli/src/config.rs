//! Run configuration and parameter sweeps.

use std::fmt;
use std::str::FromStr;

use tavis_core::ModelParams;

use crate::angle::parse_angle;
use crate::error::{CliError, Result};

pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_STEPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Theta,
    BigOmega,
    Gamma,
    N,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::Theta => "theta",
            Self::BigOmega => "big_omega",
            Self::Gamma => "gamma",
            Self::N => "n",
        }
    }

    /// `params` with this parameter set to `value`.
    pub fn apply(self, params: &ModelParams, value: f64) -> Result<ModelParams> {
        let mut p = *params;
        match self {
            Self::Theta => p.theta = value,
            Self::BigOmega => p.big_omega = value,
            Self::Gamma => p.gamma = value,
            Self::N => {
                if value < 0.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(CliError::InvalidArgument(format!(
                        "photon number must be a non-negative integer, got {value}"
                    )));
                }
                p.n = value as u32;
            }
        }
        p.validate()?;
        Ok(p)
    }
}

impl FromStr for SweepParameter {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(Self::Theta),
            "big_omega" | "dipole" => Ok(Self::BigOmega),
            "gamma" => Ok(Self::Gamma),
            "n" | "photons" => Ok(Self::N),
            other => Err(CliError::UnknownSweepParameter(other.into())),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One swept parameter and its values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = CliError;

    /// `name=v1,v2,...` or `name=start:stop:count` (count ≥ 2, endpoints
    /// included). Values accept the angle syntax of [`parse_angle`].
    fn from_str(s: &str) -> Result<Self> {
        let (name, text) = s
            .split_once('=')
            .ok_or_else(|| CliError::InvalidArgument(format!("sweep `{s}` must look like name=values")))?;
        let parameter: SweepParameter = name.trim().parse()?;
        let values = if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            let [start, stop, count] = parts.as_slice() else {
                return Err(CliError::InvalidArgument(format!(
                    "range `{text}` must be start:stop:count"
                )));
            };
            let (start, stop) = (parse_angle(start)?, parse_angle(stop)?);
            let count: usize =
                count.trim().parse().ok().filter(|&c| c >= 2).ok_or_else(|| {
                    CliError::InvalidArgument(format!("range count in `{text}` must be an integer ≥ 2"))
                })?;
            (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect()
        } else {
            text.split(',').map(parse_angle).collect::<Result<Vec<f64>>>()?
        };
        if values.is_empty() {
            return Err(CliError::InvalidArgument(format!("sweep `{s}` has no values")));
        }
        Ok(Self { parameter, values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub t_max: f64,
    pub steps: usize,
    pub with_oracle: bool,
    /// Field cutoff for the oracle; `None` means the minimal `n + 2`.
    pub n_max: Option<usize>,
    pub sweep: Vec<Sweep>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            t_max: DEFAULT_T_MAX,
            steps: DEFAULT_STEPS,
            with_oracle: false,
            n_max: None,
            sweep: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(CliError::InvalidArgument(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::InvalidArgument(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if let Some(n_max) = self.n_max {
            if n_max < self.params.min_n_max() {
                return Err(tavis_core::Error::TruncationTooSmall {
                    n: self.params.n,
                    n_max,
                }
                .into());
            }
        }
        Ok(())
    }

    pub fn oracle_cutoff(&self) -> usize {
        self.n_max.unwrap_or_else(|| self.params.min_n_max())
    }

    /// One sweep-free config per point of the Cartesian product of all
    /// sweeps, first sweep varying slowest. Without sweeps, just `self`.
    pub fn expand(&self) -> Result<Vec<RunConfig>> {
        let mut out = vec![RunConfig {
            sweep: Vec::new(),
            ..self.clone()
        }];
        for sweep in &self.sweep {
            let mut next = Vec::with_capacity(out.len() * sweep.values.len());
            for base in &out {
                for &v in &sweep.values {
                    let mut cfg = base.clone();
                    cfg.params = sweep.parameter.apply(&base.params, v)?;
                    next.push(cfg);
                }
            }
            out = next;
        }
        for cfg in &out {
            cfg.validate()?;
        }
        Ok(out)
    }
}
