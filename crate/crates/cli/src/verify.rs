//! Self-verification: closed form against the numerical oracle, the two
//! measure paths against each other, and the structural invariants of every
//! evolved state.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};
use std::fmt;

use rayon::prelude::*;
use tavis_core::closedform::atom_pair_state;
use tavis_core::measures::{assemble_rho, bell_closed, bell_generic, negativity_closed, negativity_generic};
use tavis_core::oracle::{rk4_evolve, sector_leakage, series_evolve_converged, DEFAULT_RK4_DT};
use tavis_core::qmath::{is_psd_within, purity};
use tavis_core::{ClosedForm, MasterEquationOracle, ModelParams};

use crate::error::Result;
use crate::trajectory::{sample_times, TSIRELSON};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Battery {
    Standard,
    Extended,
}

impl Battery {
    pub fn photons(self) -> &'static [u32] {
        match self {
            Self::Standard => &[0, 1, 2],
            Self::Extended => &[0, 1, 2, 3],
        }
    }

    pub fn gammas(self) -> &'static [f64] {
        match self {
            Self::Standard => &[0.0, 0.1, 1.0],
            Self::Extended => &[0.0, 0.01, 0.1, 1.0, 10.0],
        }
    }

    pub const DIPOLES: [f64; 4] = [0.0, 0.5, 1.0, 5.0];
    pub const THETAS: [f64; 4] = [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_4];

    /// Every (n, γ, Ω, θ) combination at g = 1, ω = 0.
    pub fn params(self) -> Vec<ModelParams> {
        let mut out = Vec::new();
        for &n in self.photons() {
            for &gamma in self.gammas() {
                for big_omega in Self::DIPOLES {
                    for theta in Self::THETAS {
                        out.push(
                            ModelParams::new(1.0, 0.0, big_omega, gamma, n, theta)
                                .expect("battery parameters are valid"),
                        );
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub battery: Battery,
    pub t_max: f64,
    pub steps: usize,
    /// Added to Δ in the closed form under test; nonzero only for
    /// sensitivity probes.
    pub delta_shift: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            battery: Battery::Standard,
            t_max: 20.0,
            steps: 2000,
            delta_shift: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub configs: usize,
    pub samples: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} parameter sets, {} samples each", self.configs, self.samples)?;
        writeln!(
            f,
            "{:<6} {:<28} {:>12} {:>10}",
            "status", "check", "max dev", "tolerance"
        )?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{status:<6} {:<28} {:>12.3e} {:>10.0e}",
                c.name, c.max_deviation, c.tolerance
            )?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "verification FAILED"
            }
        )
    }
}

/// Per-trajectory maxima; combined across the battery by `max`.
#[derive(Debug, Clone, Copy, Default)]
struct Deviations {
    closed_vs_oracle: f64,
    measures_vs_oracle: f64,
    dual_path: f64,
    trace: f64,
    hermiticity: f64,
    psd_failures: f64,
    sector_leakage: f64,
    purity_drift: f64,
    purity_increase: f64,
    range_excess: f64,
}

impl Deviations {
    fn max(self, o: Self) -> Self {
        Self {
            closed_vs_oracle: self.closed_vs_oracle.max(o.closed_vs_oracle),
            measures_vs_oracle: self.measures_vs_oracle.max(o.measures_vs_oracle),
            dual_path: self.dual_path.max(o.dual_path),
            trace: self.trace.max(o.trace),
            hermiticity: self.hermiticity.max(o.hermiticity),
            psd_failures: self.psd_failures + o.psd_failures,
            sector_leakage: self.sector_leakage.max(o.sector_leakage),
            purity_drift: self.purity_drift.max(o.purity_drift),
            purity_increase: self.purity_increase.max(o.purity_increase),
            range_excess: self.range_excess.max(o.range_excess),
        }
    }
}

fn trajectory_deviations(p: &ModelParams, times: &[f64], delta_shift: f64) -> Result<Deviations> {
    let oracle = MasterEquationOracle::minimal(p)?;
    let closed = if delta_shift == 0.0 {
        ClosedForm::new(*p)
    } else {
        ClosedForm::with_delta(*p, p.delta() + delta_shift)
    };
    let start_purity = purity(oracle.initial());
    let mut d = Deviations::default();
    let mut last_purity = start_purity;
    for &t in times {
        let rho = oracle.state(t);
        d.trace = d.trace.max((rho.trace() - 1.0).norm());
        d.hermiticity = d.hermiticity.max(rho.hermiticity_error());
        if !is_psd_within(&rho, 1e-8) {
            d.psd_failures += 1.0;
        }
        d.sector_leakage = d.sector_leakage.max(sector_leakage(&rho, p.n, oracle.n_max()));
        let pur = purity(&rho);
        if p.gamma == 0.0 {
            d.purity_drift = d.purity_drift.max((pur - start_purity).abs());
        } else {
            d.purity_increase = d.purity_increase.max(pur - last_purity);
        }
        last_purity = pur;

        let a = closed.atom_pair_state(t);
        let b = tavis_core::oracle::reduced_atoms(&rho, oracle.field_dim())?;
        let (neg, bell) = (negativity_closed(&a), bell_closed(&a));
        d.closed_vs_oracle = d.closed_vs_oracle.max(a.max_abs_diff(&b));
        d.measures_vs_oracle = d
            .measures_vs_oracle
            .max((neg - negativity_closed(&b)).abs())
            .max((bell - bell_closed(&b)).abs());

        let rho_ab = assemble_rho(&a);
        d.dual_path = d
            .dual_path
            .max((neg - negativity_generic(&rho_ab)?).abs())
            .max((bell - bell_generic(&rho_ab)?).abs());
        d.range_excess = d.range_excess.max(-neg).max(neg - 1.0).max(-bell).max(bell - TSIRELSON);
    }
    Ok(d)
}

/// `|negativity - 1|` and `|bell - 2√2|` along the θ = 3π/4 trajectories.
fn frozen_deviation(battery: Battery, times: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &n in battery.photons() {
        for &gamma in battery.gammas() {
            for big_omega in Battery::DIPOLES {
                let p = ModelParams::new(1.0, 0.0, big_omega, gamma, n, 3.0 * FRAC_PI_4).expect("valid");
                let closed = ClosedForm::new(p);
                for &t in times {
                    let a = closed.atom_pair_state(t);
                    worst = worst
                        .max((negativity_closed(&a) - 1.0).abs())
                        .max((bell_closed(&a) - 2.0 * SQRT_2).abs());
                }
            }
        }
    }
    worst
}

/// Pure-state anchors at t = 0 on a 100-point θ grid.
fn initial_anchor_deviation() -> f64 {
    (0..100)
        .map(|k| {
            let theta = k as f64 * PI / 100.0;
            let s2 = (2.0 * theta).sin();
            let p = ModelParams::new(1.0, 0.0, 1.0, 0.0, 0, theta).expect("valid");
            let a = atom_pair_state(&p, 0.0);
            (negativity_closed(&a) - s2.abs())
                .abs()
                .max((bell_closed(&a) - 2.0 * (1.0 + s2 * s2).sqrt()).abs())
        })
        .fold(0.0, f64::max)
}

/// Points for the series and RK4 corroborators: γt(E_max - E_min)² stays
/// small enough for the literal series, and the runs are short enough for RK4.
pub const CONCORDANCE_POINTS: [(f64, f64, u32, f64, f64); 4] = [
    // (Ω, γ, n, θ, t)
    (1.0, 0.1, 0, 0.0, 10.0),
    (0.5, 0.05, 1, FRAC_PI_8, 3.0),
    (5.0, 0.01, 0, 0.3, 2.0),
    (0.0, 0.2, 2, FRAC_PI_4, 1.5),
];

fn concordance() -> Result<(f64, f64)> {
    let results: Vec<(f64, f64)> = CONCORDANCE_POINTS
        .par_iter()
        .map(|&(w, gamma, n, theta, t)| {
            let p = ModelParams::new(1.0, 0.0, w, gamma, n, theta)?;
            let oracle = MasterEquationOracle::minimal(&p)?;
            let exact = oracle.state(t);
            let series = series_evolve_converged(oracle.hamiltonian(), oracle.initial(), gamma, t)?;
            let rk4 = rk4_evolve(
                oracle.hamiltonian(),
                oracle.initial(),
                gamma,
                t,
                DEFAULT_RK4_DT.min(tavis_core::oracle::rk4_step_bound(oracle.hamiltonian(), gamma)),
            )?;
            Ok((series.max_abs_diff(&exact), rk4.max_abs_diff(&exact)))
        })
        .collect::<Result<_>>()?;
    Ok(results
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a.max(x), b.max(y))))
}

pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let times = sample_times(opts.t_max, opts.steps);
    let params = opts.battery.params();
    let d = params
        .par_iter()
        .map(|p| trajectory_deviations(p, &times, opts.delta_shift))
        .try_reduce(Deviations::default, |a, b| Ok(a.max(b)))?;
    let (series, rk4) = concordance()?;

    let checks = vec![
        CheckOutcome::new("closed_vs_oracle_entries", d.closed_vs_oracle, 1e-9),
        CheckOutcome::new("closed_vs_oracle_measures", d.measures_vs_oracle, 1e-9),
        CheckOutcome::new("measures_dual_path", d.dual_path, 1e-10),
        CheckOutcome::new("frozen_maximal_state", frozen_deviation(opts.battery, &times), 1e-10),
        CheckOutcome::new("initial_pure_state_anchors", initial_anchor_deviation(), 1e-12),
        CheckOutcome::new("oracle_trace", d.trace, 1e-8),
        CheckOutcome::new("oracle_hermiticity", d.hermiticity, 1e-8),
        CheckOutcome::new("oracle_psd_failures", d.psd_failures, 0.0),
        CheckOutcome::new("oracle_sector_leakage", d.sector_leakage, 1e-12),
        CheckOutcome::new("purity_constant_unitary", d.purity_drift, 1e-10),
        CheckOutcome::new("purity_non_increasing", d.purity_increase, 1e-12),
        CheckOutcome::new("measure_ranges", d.range_excess, 1e-12),
        CheckOutcome::new("series_vs_spectral", series, 1e-10),
        CheckOutcome::new("rk4_vs_spectral", rk4, 1e-6),
    ];
    Ok(VerifyReport {
        configs: params.len(),
        samples: times.len(),
        checks,
    })
}
