//! Acceptance criteria 1 … 9. Prints one PASS/FAIL line per criterion with
//! the observed numbers, then exits nonzero if any criterion failed.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tavis_cli::presets::FIGURES;
use tavis_cli::{figure_preset, run_trajectory, RunConfig};
use tavis_core::closedform::{atom_pair_state, stationary_negativity_paper, stationary_state};
use tavis_core::measures::{assemble_rho, bell_closed, bell_generic, negativity_closed, negativity_generic};
use tavis_core::oracle::{
    reduced_atoms, rk4_evolve, rk4_step_bound, sector_leakage, series_evolve_converged, DEFAULT_RK4_DT,
};
use tavis_core::qmath::{hermitian_eig, is_psd_within, purity, CMatrix};
use tavis_core::{ClosedForm, MasterEquationOracle, ModelParams};

const T_MAX: f64 = 20.0;
const STEPS: usize = 2000;
const TSIRELSON: f64 = 2.0 * SQRT_2;

struct Verdict {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self {
            passed,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

fn params(big_omega: f64, gamma: f64, n: u32, theta: f64) -> ModelParams {
    ModelParams::new(1.0, 0.0, big_omega, gamma, n, theta).unwrap()
}

fn times() -> Vec<f64> {
    (0..=STEPS).map(|i| T_MAX * i as f64 / STEPS as f64).collect()
}

fn negativity_at(p: &ModelParams, t: f64) -> f64 {
    negativity_closed(&atom_pair_state(p, t))
}

// ---------------------------------------------------------------- 1

fn frozen_maximal_entanglement() -> Verdict {
    let ts = times();
    let (mut closed_dev, mut oracle_dev) = (0.0f64, 0.0f64);
    let mut runs = 0;
    for n in 0..4 {
        for gamma in [0.0, 0.01, 0.1, 1.0, 10.0] {
            for w in [0.0, 0.5, 1.0, 5.0] {
                let p = params(w, gamma, n, 3.0 * FRAC_PI_4);
                let closed = ClosedForm::new(p);
                let oracle = MasterEquationOracle::minimal(&p).unwrap();
                for &t in &ts {
                    let a = closed.atom_pair_state(t);
                    closed_dev = closed_dev
                        .max((negativity_closed(&a) - 1.0).abs())
                        .max((bell_closed(&a) - TSIRELSON).abs());
                    let rho = assemble_rho(&oracle.atom_pair_state(t).unwrap());
                    oracle_dev = oracle_dev
                        .max((negativity_generic(&rho).unwrap() - 1.0).abs())
                        .max((bell_generic(&rho).unwrap() - TSIRELSON).abs());
                }
                runs += 1;
            }
        }
    }
    Verdict::new(
        closed_dev <= 1e-10 && oracle_dev <= 1e-10,
        format!("{runs} runs x {} samples: closed form max dev {closed_dev:.1e}, oracle max dev {oracle_dev:.1e} (tol 1e-10)", ts.len()),
    )
}

// ---------------------------------------------------------------- 2

fn initial_value_anchors() -> Verdict {
    let mut dev = 0.0f64;
    for k in 0..100 {
        let theta = k as f64 * PI / 99.0;
        let s2 = (2.0 * theta).sin();
        let want_neg = s2.abs();
        let want_bell = 2.0 * (1.0 + s2 * s2).sqrt();
        let p = params(1.0, 0.0, 0, theta);
        let a = atom_pair_state(&p, 0.0);
        let rho = assemble_rho(&MasterEquationOracle::minimal(&p).unwrap().atom_pair_state(0.0).unwrap());
        for (neg, bell) in [
            (negativity_closed(&a), bell_closed(&a)),
            (negativity_generic(&rho).unwrap(), bell_generic(&rho).unwrap()),
        ] {
            dev = dev.max((neg - want_neg).abs()).max((bell - want_bell).abs());
        }
    }
    Verdict::new(
        dev <= 1e-12,
        format!("100 θ values on [0, π], both measure paths: max dev {dev:.1e} (tol 1e-12)"),
    )
}

// ---------------------------------------------------------------- 3, 9

/// Maxima over one oracle trajectory.
#[derive(Default, Clone, Copy)]
struct TrajectoryStats {
    entries: f64,
    measures: f64,
    trace: f64,
    hermiticity: f64,
    psd_failures: usize,
    leakage: f64,
    purity_drift: f64,
    purity_rise: f64,
    tsirelson_excess: f64,
    negativity_range_excess: f64,
}

impl TrajectoryStats {
    fn merge(self, o: Self) -> Self {
        Self {
            entries: self.entries.max(o.entries),
            measures: self.measures.max(o.measures),
            trace: self.trace.max(o.trace),
            hermiticity: self.hermiticity.max(o.hermiticity),
            psd_failures: self.psd_failures + o.psd_failures,
            leakage: self.leakage.max(o.leakage),
            purity_drift: self.purity_drift.max(o.purity_drift),
            purity_rise: self.purity_rise.max(o.purity_rise),
            tsirelson_excess: self.tsirelson_excess.max(o.tsirelson_excess),
            negativity_range_excess: self.negativity_range_excess.max(o.negativity_range_excess),
        }
    }

    /// Range and full-state checks for one sample.
    fn observe_state(&mut self, rho: &CMatrix) {
        self.trace = self.trace.max((rho.trace() - 1.0).norm());
        self.hermiticity = self.hermiticity.max(rho.hermiticity_error());
        if !is_psd_within(rho, 1e-8) {
            self.psd_failures += 1;
        }
    }

    fn observe_measures(&mut self, neg: f64, bell: f64) {
        self.tsirelson_excess = self.tsirelson_excess.max(bell - TSIRELSON).max(-bell);
        self.negativity_range_excess = self.negativity_range_excess.max(neg - 1.0).max(-neg);
    }
}

struct Battery {
    stats: TrajectoryStats,
    runs: usize,
    elapsed: Duration,
}

fn battery() -> &'static Battery {
    static CELL: OnceLock<Battery> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let ts = times();
        let mut stats = TrajectoryStats::default();
        let mut runs = 0;
        for n in 0..3 {
            for gamma in [0.0, 0.1, 1.0] {
                for w in [0.0, 0.5, 1.0, 5.0] {
                    for theta in [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_4] {
                        stats = stats.merge(battery_run(&params(w, gamma, n, theta), &ts));
                        runs += 1;
                    }
                }
            }
        }
        Battery {
            stats,
            runs,
            elapsed: start.elapsed(),
        }
    })
}

fn battery_run(p: &ModelParams, ts: &[f64]) -> TrajectoryStats {
    let closed = ClosedForm::new(*p);
    let oracle = MasterEquationOracle::minimal(p).unwrap();
    let start_purity = purity(oracle.initial());
    let mut last_purity = start_purity;
    let mut s = TrajectoryStats::default();
    for &t in ts {
        let rho = oracle.state(t);
        s.observe_state(&rho);
        s.leakage = s.leakage.max(sector_leakage(&rho, p.n, oracle.n_max()));
        let pur = purity(&rho);
        if p.gamma == 0.0 {
            s.purity_drift = s.purity_drift.max((pur - start_purity).abs());
        } else {
            s.purity_rise = s.purity_rise.max(pur - last_purity);
        }
        last_purity = pur;

        let a = closed.atom_pair_state(t);
        let b = reduced_atoms(&rho, oracle.field_dim()).unwrap();
        let rho_b = assemble_rho(&b);
        let (neg_a, bell_a) = (negativity_closed(&a), bell_closed(&a));
        let (neg_b, bell_b) = (negativity_generic(&rho_b).unwrap(), bell_generic(&rho_b).unwrap());
        s.entries = s.entries.max(a.max_abs_diff(&b));
        s.measures = s.measures.max((neg_a - neg_b).abs()).max((bell_a - bell_b).abs());
        s.observe_state(&rho_b);
        s.observe_measures(neg_a, bell_a);
        s.observe_measures(neg_b, bell_b);
    }
    s
}

fn closed_form_vs_oracle() -> Verdict {
    let b = battery();
    let s = &b.stats;
    let secs = b.elapsed.as_secs_f64();
    Verdict::new(
        s.entries <= 1e-9 && s.measures <= 1e-9 && secs < 60.0,
        format!(
            "{} runs x {} samples in {secs:.1} s: entries max dev {:.1e}, negativity/Bell max dev {:.1e} (tol 1e-9, < 60 s)",
            b.runs,
            STEPS + 1,
            s.entries,
            s.measures
        ),
    )
}

// ---------------------------------------------------------------- 4

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

fn first_maximum_and_return() -> Verdict {
    let p = params(1.0, 0.0, 0, 0.0);
    let ts = times();
    let neg: Vec<f64> = ts.iter().map(|&t| negativity_at(&p, t)).collect();
    let Some(i_max) = (1..neg.len() - 1).find(|&i| neg[i] > neg[i - 1] && neg[i] >= neg[i + 1]) else {
        return Verdict::new(false, "no local maximum on the grid");
    };
    let peak = neg[i_max];
    let mut best = (f64::NAN, f64::INFINITY);
    for i in i_max + 1..neg.len() - 1 {
        if neg[i] <= neg[i - 1] && neg[i] <= neg[i + 1] {
            let (t, v) = golden_min(|t| negativity_at(&p, t), ts[i - 1], ts[i + 1]);
            if v < best.1 {
                best = (t, v);
            }
        }
    }
    let grid_min = neg[i_max..].iter().cloned().fold(f64::INFINITY, f64::min);
    Verdict::new(
        (0.4..=0.6).contains(&peak) && best.1 < 1e-6 && best.0 < T_MAX,
        format!(
            "first maximum {peak:.4} at t = {:.3}; later minimum {:.1e} at t = {:.6} (grid alone reaches {grid_min:.1e})",
            ts[i_max], best.1, best.0
        ),
    )
}

// ---------------------------------------------------------------- 5

fn separable_start_never_violates() -> Verdict {
    let p = params(1.0, 0.0, 0, 0.0);
    let records = run_trajectory(&RunConfig::new(p)).unwrap();
    let (t, max) = records
        .iter()
        .map(|r| (r.t, r.bell))
        .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
    Verdict::new(
        max <= 2.0 + 1e-9,
        format!(
            "max Bell value {max:.15} at t = {t} over {} samples (bound 2 + 1e-9)",
            records.len()
        ),
    )
}

// ---------------------------------------------------------------- 6

fn decoherence_decay() -> Verdict {
    let ts = times();
    let swing = |p: &ModelParams, lo: f64, hi: f64| {
        let v: Vec<f64> = ts
            .iter()
            .filter(|&&t| (lo..=hi).contains(&t))
            .map(|&t| negativity_at(p, t))
            .collect();
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let mut passed = true;
    let mut details = Vec::new();
    for w in [0.5, 5.0] {
        for (theta, label) in [(0.0, "0"), (FRAC_PI_8, "π/8")] {
            let p = params(w, 0.1, 0, theta);
            let early = swing(&p, 0.0, 5.0);
            let late = swing(&p, 15.0, 20.0);
            let ratio = late / early;
            let stationary = negativity_closed(&stationary_state(&p).unwrap());
            let mismatch = (negativity_at(&p, 200.0) - stationary).abs();
            let ok = ratio < 0.1 && mismatch <= 1e-6;
            passed &= ok;
            let (g21, _, _) = ClosedForm::new(p).gaps();
            details.push(format!(
                "Ω={w} θ={label}: swing ratio {:.1}% (need < 10%), |E(200) - E_stat| = {mismatch:.1e} (need ≤ 1e-6), slowest decay exp(-{:.4} t) {}",
                100.0 * ratio,
                0.5 * g21 * g21 * p.gamma,
                if ok { "ok" } else { "MISS" }
            ));
        }
    }
    Verdict::new(
        passed,
        "γ = 0.1, n = 0; Ω = 0.5 keeps a slowly decaying E2-E1 coherence",
    )
    .with_details(details)
}

// ---------------------------------------------------------------- 7

fn printed_stationary_formula() -> Verdict {
    let mut passed = true;
    let mut details = Vec::new();
    for n in 0..3 {
        let (mut worst, mut worst_theta, mut negative_points) = (0.0f64, 0.0, 0);
        let mut worst_nonnegative = 0.0f64;
        for k in 0..100 {
            let theta = k as f64 * PI / 99.0;
            let p = params(0.0, 0.1, n, theta);
            let printed = stationary_negativity_paper(&p);
            let truth = negativity_closed(&stationary_state(&p).unwrap());
            if printed < 0.0 {
                negative_points += 1;
            }
            let dev = (printed - truth).abs();
            if printed >= 0.0 {
                worst_nonnegative = worst_nonnegative.max(dev);
            }
            if dev > worst {
                worst = dev;
                worst_theta = theta;
            }
        }
        passed &= worst <= 1e-9;
        details.push(format!(
            "Ω=0 n={n}: max |printed - stationary| = {worst:.1e} at θ = {worst_theta:.4}; printed value negative at {negative_points}/100 θ, max deviation where printed ≥ 0: {worst_nonnegative:.1e}"
        ));
    }
    for w in [0.5, 1.0, 5.0] {
        for (theta, label) in [(FRAC_PI_8, "π/8"), (FRAC_PI_4, "π/4"), (3.0 * FRAC_PI_4, "3π/4")] {
            let p = params(w, 0.1, 0, theta);
            let printed = stationary_negativity_paper(&p);
            let truth = negativity_closed(&stationary_state(&p).unwrap());
            details.push(format!(
                "report Ω={w} n=0 θ={label}: printed {printed:.6}, stationary {truth:.6}, difference {:.2e}",
                printed - truth
            ));
        }
    }
    Verdict::new(
        passed,
        "Ω = 0 over 100 θ values for n = 0, 1, 2 (tol 1e-9); Ω ≠ 0 reported only",
    )
    .with_details(details)
}

// ---------------------------------------------------------------- 8

fn three_way_oracle_concordance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut series_dev, mut rk4_dev) = (0.0f64, 0.0f64);
    let mut stats = TrajectoryStats::default();
    let mut details = Vec::new();
    for _ in 0..20 {
        let p = params(
            rng.gen_range(0.0..5.0),
            10f64.powf(rng.gen_range(-3.0..0.0)),
            rng.gen_range(0..3),
            rng.gen_range(0.0..PI),
        );
        let oracle = MasterEquationOracle::minimal(&p).unwrap();
        let h = oracle.hamiltonian();
        let e = hermitian_eig(h).unwrap().values;
        let spread = e[e.len() - 1] - e[0];
        // series domain γt·(E_max - E_min)² ≤ 20; t ≤ 5 keeps RK4 short
        let t = rng.gen_range(0.0..(20.0 / (p.gamma * spread * spread)).min(5.0));
        let exact = oracle.state(t);
        let series = series_evolve_converged(h, oracle.initial(), p.gamma, t).unwrap();
        let dt = DEFAULT_RK4_DT.min(rk4_step_bound(h, p.gamma));
        let rk4 = rk4_evolve(h, oracle.initial(), p.gamma, t, dt).unwrap();
        let (ds, dr) = (series.max_abs_diff(&exact), rk4.max_abs_diff(&exact));
        series_dev = series_dev.max(ds);
        rk4_dev = rk4_dev.max(dr);
        for rho in [&exact, &series, &rk4] {
            stats.observe_state(rho);
        }
        details.push(format!(
            "Ω={:.3} γ={:.3} n={} θ={:.3} t={t:.3}: series {ds:.1e}, RK4 {dr:.1e}",
            p.big_omega, p.gamma, p.n, p.theta
        ));
    }
    record_extra(stats);
    Verdict::new(
        series_dev <= 1e-10 && rk4_dev <= 1e-6,
        format!("20 random points: spectral vs series {series_dev:.1e} (tol 1e-10), spectral vs RK4 {rk4_dev:.1e} (tol 1e-6)"),
    )
    .with_details(details)
}

/// Full-state checks from outside the battery, folded into criterion 9.
fn record_extra(stats: TrajectoryStats) {
    let mut guard = extra().lock().unwrap();
    *guard = guard.merge(stats);
}

fn extra() -> &'static std::sync::Mutex<TrajectoryStats> {
    static CELL: OnceLock<std::sync::Mutex<TrajectoryStats>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

// ---------------------------------------------------------------- 9

fn structural_invariants() -> Verdict {
    let mut s = battery().stats.merge(*extra().lock().unwrap());
    let mut preset_rows = 0;
    let mut row_failures = 0;
    for id in FIGURES {
        for curve in figure_preset(id).unwrap() {
            for r in run_trajectory(&curve.config).unwrap() {
                preset_rows += 1;
                if r.check().is_err() {
                    row_failures += 1;
                }
                s.observe_measures(r.negativity, r.bell);
            }
        }
    }
    let checks = [
        ("trace", s.trace, 1e-8),
        ("hermiticity", s.hermiticity, 1e-8),
        ("PSD failures", s.psd_failures as f64, 0.0),
        ("K-sector leakage", s.leakage, 1e-12),
        ("purity drift at γ=0", s.purity_drift, 1e-10),
        ("purity rise at γ>0", s.purity_rise, 1e-12),
        ("Tsirelson excess", s.tsirelson_excess, 1e-12),
        ("negativity outside [0,1]", s.negativity_range_excess, 1e-12),
        ("figure rows failing invariants", row_failures as f64, 0.0),
    ];
    let passed = checks.iter().all(|&(_, v, tol)| v <= tol);
    let details = checks
        .iter()
        .map(|&(name, v, tol)| format!("{name}: {v:.1e} (tol {tol:.0e})"))
        .collect();
    Verdict::new(
        passed,
        format!("battery trajectories, oracle concordance states and {preset_rows} figure rows"),
    )
    .with_details(details)
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("frozen maximal entanglement", frozen_maximal_entanglement),
        ("initial-value anchors", initial_value_anchors),
        ("closed form vs oracle", closed_form_vs_oracle),
        ("first negativity maximum and return to zero", first_maximum_and_return),
        ("separable start never violates CHSH", separable_start_never_violates),
        ("decoherence decay", decoherence_decay),
        ("printed stationary negativity", printed_stationary_formula),
        ("three-way oracle concordance", three_way_oracle_concordance),
        ("structural invariants", structural_invariants),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Verdict::new(false, "panicked"));
        let status = if verdict.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {status} {name}: {} [{:.1} s]",
            i + 1,
            verdict.summary,
            start.elapsed().as_secs_f64()
        );
        for line in &verdict.details {
            println!("    {line}");
        }
        if !verdict.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
