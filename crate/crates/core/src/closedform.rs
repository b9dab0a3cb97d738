//! Analytic solution for the initial family `(cos θ|eg> + sin θ|ge>) ⊗ |n>`.
//!
//! The initial state lives entirely in the span of the dressed states
//! E1, E2, E3, so under phase decoherence every coherence between dressed
//! states `m, n` rotates at `E_m - E_n` and decays as
//! `exp(-(E_m - E_n)² γ t / 2)`. Only the three gaps
//! `E2 - E1 = (3Ω - Δ)/2`, `E3 - E1 = (3Ω + Δ)/2`, `E3 - E2 = Δ` enter, so
//! nothing here depends on ω.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{dressed_basis, ModelParams};
use crate::qmath::{c64, re, CMatrix, C64};

/// Gaps smaller than this (times g) are treated as exact degeneracies when
/// taking the long-time limit.
pub const ZERO_GAP_TOL: f64 = 1e-12;

/// Coefficients of ρ(t) in the dressed basis {E1, E2, E3}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// |E1><E2|
    pub c4: Complex64,
    /// |E1><E3|
    pub c6: Complex64,
    /// |E2><E3|
    pub c8: Complex64,
}

impl EvolutionCoefficients {
    pub fn c5(&self) -> Complex64 {
        self.c4.conj()
    }

    pub fn c7(&self) -> Complex64 {
        self.c6.conj()
    }

    pub fn c9(&self) -> Complex64 {
        self.c8.conj()
    }

    /// 3x3 density matrix over (E1, E2, E3).
    pub fn as_matrix(&self) -> CMatrix {
        CMatrix::from_vec(
            3,
            3,
            vec![
                re(self.c1),
                self.c4,
                self.c6,
                self.c5(),
                re(self.c2),
                self.c8,
                self.c7(),
                self.c9(),
                re(self.c3),
            ],
        )
    }
}

/// The X-shaped reduced two-atom state
/// `a1|gg><gg| + a2|ge><ge| + a3|ge><eg| + a4|eg><ge| + a5|eg><eg| + a6|ee><ee|`
/// with `a4 = conj(a3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPairState {
    pub a1: f64,
    pub a2: f64,
    pub a3: Complex64,
    pub a5: f64,
    pub a6: f64,
}

impl AtomPairState {
    pub fn a4(&self) -> Complex64 {
        self.a3.conj()
    }

    pub fn population_sum(&self) -> f64 {
        self.a1 + self.a2 + self.a5 + self.a6
    }

    /// Largest entrywise difference, treating a3 as one complex entry.
    pub fn max_abs_diff(&self, other: &AtomPairState) -> f64 {
        [
            (self.a1 - other.a1).abs(),
            (self.a2 - other.a2).abs(),
            (self.a3 - other.a3).norm(),
            (self.a5 - other.a5).abs(),
            (self.a6 - other.a6).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Damped oscillation `exp(-gap² γ t / 2) · (cos(gap t), sin(gap t))`.
#[derive(Debug, Clone, Copy)]
struct Damped {
    cos: f64,
    sin: f64,
}

impl Damped {
    fn at(gap: f64, gamma: f64, t: f64) -> Self {
        let damp = (-0.5 * gap * gap * gamma * t).exp();
        let (s, c) = (gap * t).sin_cos();
        Self {
            cos: damp * c,
            sin: damp * s,
        }
    }

    /// t → ∞ under γ > 0: only an exactly vanishing gap survives, as cos(0) = 1.
    fn stationary(gap: f64, g: f64) -> Self {
        let survives = gap.abs() <= ZERO_GAP_TOL * g;
        Self {
            cos: if survives { 1.0 } else { 0.0 },
            sin: 0.0,
        }
    }
}

/// Closed-form evaluator with the derived quantities precomputed.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    params: ModelParams,
    delta: f64,
    delta_minus: f64,
    delta_plus: f64,
}

impl ClosedForm {
    pub fn new(params: ModelParams) -> Self {
        let (delta_minus, delta_plus) = params.delta_minus_plus();
        Self {
            params,
            delta: params.delta(),
            delta_minus,
            delta_plus,
        }
    }

    /// Evaluator with Δ forced to `delta` everywhere it appears.
    ///
    /// Exists for sensitivity probes: a correct oracle comparison must notice
    /// even a small error in Δ.
    pub fn with_delta(params: ModelParams, delta: f64) -> Self {
        Self {
            params,
            delta,
            delta_minus: delta - params.big_omega,
            delta_plus: delta + params.big_omega,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// (E2 - E1, E3 - E1, E3 - E2).
    pub fn gaps(&self) -> (f64, f64, f64) {
        let w = self.params.big_omega;
        (0.5 * (3.0 * w - self.delta), 0.5 * (3.0 * w + self.delta), self.delta)
    }

    pub fn coefficients(&self, t: f64) -> EvolutionCoefficients {
        debug_assert!(t >= 0.0);
        let p = &self.params;
        let (s2, c2) = (2.0 * p.theta).sin_cos();
        let d = self.delta;
        let (g21, g31, g32) = self.gaps();
        let osc = |gap: f64| {
            let f = Damped::at(gap, p.gamma, t);
            c64(f.cos, f.sin)
        };
        let k = 0.5 * FRAC_1_SQRT_2 * c2;
        EvolutionCoefficients {
            c1: 0.5 * (1.0 - s2),
            c2: 0.25 * (1.0 + s2) * self.delta_minus / d,
            c3: 0.25 * (1.0 + s2) * self.delta_plus / d,
            c4: osc(g21) * (k * (self.delta_minus / d).sqrt()),
            c6: osc(g31) * (-k * (self.delta_plus / d).sqrt()),
            // <E2|ψ0> and <E3|ψ0> have opposite signs for the E2, E3 vectors
            // as defined in `model::dressed_basis`, hence the minus.
            c8: osc(g32) * (-FRAC_1_SQRT_2 * (1.0 + s2) * p.g * (1.0 + 2.0 * p.n as f64).sqrt() / d),
        }
    }

    pub fn atom_pair_state(&self, t: f64) -> AtomPairState {
        debug_assert!(t >= 0.0);
        let (g21, g31, g32) = self.gaps();
        let gamma = self.params.gamma;
        self.entries(
            Damped::at(g21, gamma, t),
            Damped::at(g31, gamma, t),
            Damped::at(g32, gamma, t),
        )
    }

    pub fn stationary_state(&self) -> Result<AtomPairState> {
        if self.params.gamma <= 0.0 {
            return Err(Error::NotDecaying);
        }
        let (g21, g31, g32) = self.gaps();
        let g = self.params.g;
        Ok(self.entries(
            Damped::stationary(g21, g),
            Damped::stationary(g31, g),
            Damped::stationary(g32, g),
        ))
    }

    fn entries(&self, f21: Damped, f31: Damped, f32: Damped) -> AtomPairState {
        let p = &self.params;
        let (s2, c2) = (2.0 * p.theta).sin_cos();
        let n = p.n as f64;
        let d2 = self.delta * self.delta;
        let g2 = p.g * p.g;
        let bright = 1.0 + s2;

        let relax = 1.0 - f32.cos;
        let a1 = bright * 2.0 * (n + 1.0) * g2 / d2 * relax;
        let a6 = bright * 2.0 * n * g2 / d2 * relax;
        let common = -bright * (1.0 + 2.0 * n) * g2 / d2 * relax;

        let x = 0.25 * c2 * self.delta_minus / self.delta;
        let y = 0.25 * c2 * self.delta_plus / self.delta;
        let swing = x * f21.cos + y * f31.cos;

        AtomPairState {
            a1,
            a2: 0.5 + common - swing,
            a3: c64(0.5 * s2 + common, -(x * f21.sin + y * f31.sin)),
            a5: 0.5 + common + swing,
            a6,
        }
    }
}

pub fn coefficients(p: &ModelParams, t: f64) -> EvolutionCoefficients {
    ClosedForm::new(*p).coefficients(t)
}

pub fn atom_pair_state(p: &ModelParams, t: f64) -> AtomPairState {
    ClosedForm::new(*p).atom_pair_state(t)
}

/// Long-time limit of [`atom_pair_state`] under phase decoherence.
///
/// Coherences between exactly degenerate dressed states (|gap| ≤ 1e-12·g,
/// e.g. E1 = E2 when Δ = 3Ω) never decay and are kept.
pub fn stationary_state(p: &ModelParams) -> Result<AtomPairState> {
    ClosedForm::new(*p).stationary_state()
}

/// The closed expression usually quoted for the long-time negativity:
///
/// `[-2(1+2n)g²(sinθ+cosθ)² + sqrt(4g⁴(sinθ+cosθ)⁴ + (1+2n)²(-2g² + 6(g²+Ω²) sin2θ)²)] / (8(1+2n)g² + Ω²)`
///
/// Evaluated as written, unclamped. It agrees with
/// `negativity_closed(stationary_state(p))` only when Ω = 0 or sin 2θ = 0;
/// the true limit has `(1+2n)(-2g² + 6g² sin2θ) + Ω² sin2θ` in the second
/// square. Kept for side-by-side reporting.
pub fn stationary_negativity_paper(p: &ModelParams) -> f64 {
    let n21 = 1.0 + 2.0 * p.n as f64;
    let g2 = p.g * p.g;
    let w2 = p.big_omega * p.big_omega;
    let sc = (p.theta.sin() + p.theta.cos()).powi(2);
    let s2 = (2.0 * p.theta).sin();
    let inner = -2.0 * g2 + 6.0 * (g2 + w2) * s2;
    let num = -2.0 * n21 * g2 * sc + (4.0 * g2 * g2 * sc * sc + n21 * n21 * inner * inner).sqrt();
    num / (8.0 * n21 * g2 + w2)
}

/// ρ(t) on the truncated full space, assembled from the dressed-basis
/// coefficients and the closed-form eigenvectors.
pub fn evolved_density(p: &ModelParams, t: f64, n_max: usize) -> Result<CMatrix> {
    p.validate()?;
    if n_max < p.min_n_max() {
        return Err(Error::TruncationTooSmall { n: p.n, n_max });
    }
    let basis = dressed_basis(p);
    let kets: Vec<Vec<C64>> = [&basis.e1, &basis.e2, &basis.e3]
        .iter()
        .map(|s| basis.embed(s, n_max))
        .collect();
    let c = coefficients(p, t).as_matrix();
    let dim = kets[0].len();
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let mut acc = re(0.0);
        for m in 0..3 {
            for k in 0..3 {
                acc += c[(m, k)] * kets[m][i] * kets[k][j].conj();
            }
        }
        acc
    }))
}
