//! Sampled trajectories of the reduced two-atom state and its measures.

use rayon::prelude::*;
use tavis_core::measures::{assemble_rho, bell_closed, bell_generic, negativity_closed, negativity_generic};
use tavis_core::oracle::reduced_atoms;
use tavis_core::{AtomPairState, ClosedForm, MasterEquationOracle};

use crate::config::RunConfig;
use crate::error::Result;

pub const POPULATION_TOL: f64 = 1e-9;
pub const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

/// One CSV row: closed-form entries and measures, plus oracle measures when
/// requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3_re: f64,
    pub a3_im: f64,
    pub a5: f64,
    pub a6: f64,
    pub negativity: f64,
    pub bell: f64,
    pub negativity_oracle: Option<f64>,
    pub bell_oracle: Option<f64>,
}

impl TrajectoryRecord {
    pub fn from_state(t: f64, a: &AtomPairState) -> Self {
        Self {
            t,
            a1: a.a1,
            a2: a.a2,
            a3_re: a.a3.re,
            a3_im: a.a3.im,
            a5: a.a5,
            a6: a.a6,
            negativity: negativity_closed(a),
            bell: bell_closed(a),
            negativity_oracle: None,
            bell_oracle: None,
        }
    }

    pub fn has_oracle(&self) -> bool {
        self.negativity_oracle.is_some()
    }

    /// Violated record invariants, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        let pop = self.a1 + self.a2 + self.a5 + self.a6;
        if (pop - 1.0).abs() > POPULATION_TOL {
            return Err(format!("t={}: populations sum to {pop}", self.t));
        }
        let negs = std::iter::once(self.negativity).chain(self.negativity_oracle);
        for e in negs {
            if !(0.0..=1.0).contains(&e) {
                return Err(format!("t={}: negativity {e} outside [0, 1]", self.t));
            }
        }
        let bells = std::iter::once(self.bell).chain(self.bell_oracle);
        for b in bells {
            if !(0.0..=TSIRELSON + 1e-12).contains(&b) {
                return Err(format!("t={}: Bell value {b} outside [0, 2√2]", self.t));
            }
        }
        Ok(())
    }
}

/// `steps + 1` uniform sample times on `[0, t_max]`.
pub fn sample_times(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect()
}

/// Trajectory of a single, sweep-free config.
pub fn run_trajectory(cfg: &RunConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let closed = ClosedForm::new(cfg.params);
    let oracle = if cfg.with_oracle {
        Some(MasterEquationOracle::new(&cfg.params, cfg.oracle_cutoff())?)
    } else {
        None
    };
    sample_times(cfg.t_max, cfg.steps)
        .into_par_iter()
        .map(|t| {
            let mut rec = TrajectoryRecord::from_state(t, &closed.atom_pair_state(t));
            if let Some(oracle) = &oracle {
                let rho = assemble_rho(&reduced_atoms(&oracle.state(t), oracle.field_dim())?);
                rec.negativity_oracle = Some(negativity_generic(&rho)?);
                rec.bell_oracle = Some(bell_generic(&rho)?);
            }
            Ok(rec)
        })
        .collect()
}

/// Trajectories for every point of the config's sweep, in sweep order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<(RunConfig, Vec<TrajectoryRecord>)>> {
    cfg.expand()?
        .into_par_iter()
        .map(|c| {
            let records = run_trajectory(&c)?;
            Ok((c, records))
        })
        .collect()
}
