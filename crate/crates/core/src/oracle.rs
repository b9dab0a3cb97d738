//! Brute-force evolution of the full atoms ⊗ field density matrix under
//!
//! `dρ/dt = -i[H, ρ] - (γ/2)[H, [H, ρ]]`
//!
//! by three independent routes:
//!
//! * [`SpectralPropagator`]: exact solution in the eigenbasis of H, where
//!   `ρ_mn(t) = ρ_mn(0) exp(-i(E_m - E_n)t) exp(-(γt/2)(E_m - E_n)²)`.
//!   This is the reference every closed-form result is checked against.
//! * [`series_evolve`]: the Kraus-like sum
//!   `Σ_k (γt)^k/k! M_k ρ(0) M_k†` with `M_k = H^k exp(-iHt) exp(-γtH²/2)`,
//!   truncated.
//! * [`rk4_evolve`]: classical fourth-order Runge-Kutta on the master equation.

use crate::closedform::AtomPairState;
use crate::error::{Error, Result};
use crate::model::{basis_index, build_hamiltonian, excitation_numbers, initial_state, AtomPair, ModelParams};
use crate::qmath::{hermitian_eig, partial_trace_field, re, CMatrix, EigenDecomposition, C64};

/// Tail bound the series order is chosen to reach.
pub const SERIES_TAIL_TOL: f64 = 1e-12;
/// Hard cap on series terms.
pub const SERIES_MAX_TERMS: usize = 500;
/// Default RK4 step in units of 1/g.
pub const DEFAULT_RK4_DT: f64 = 1e-3;
/// Largest tolerated coherence outside `<ge|ρ|eg>` in a reduced two-atom state.
pub const COHERENCE_TOL: f64 = 1e-8;

/// Initial state expressed in the eigenbasis of H, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    pub decomposition: EigenDecomposition,
    pub rho0_eigenbasis: CMatrix,
}

impl SpectralPropagator {
    pub fn new(h: &CMatrix, rho0: &CMatrix) -> Result<Self> {
        if rho0.rows() != h.rows() || rho0.cols() != h.cols() {
            return Err(Error::BadDimension {
                expected: format!("{0}x{0} density matrix", h.rows()),
                rows: rho0.rows(),
                cols: rho0.cols(),
            });
        }
        let decomposition = hermitian_eig(h)?;
        let rho0_eigenbasis = decomposition.to_eigenbasis(rho0);
        Ok(Self {
            decomposition,
            rho0_eigenbasis,
        })
    }

    pub fn dim(&self) -> usize {
        self.decomposition.values.len()
    }

    /// ρ(t) in the eigenbasis of H.
    pub fn evolve_eigenbasis(&self, gamma: f64, t: f64) -> CMatrix {
        let e = &self.decomposition.values;
        let n = e.len();
        CMatrix::from_fn(n, n, |m, k| {
            let gap = e[m] - e[k];
            let factor = C64::from_polar((-0.5 * gamma * t * gap * gap).exp(), -gap * t);
            self.rho0_eigenbasis[(m, k)] * factor
        })
    }

    /// ρ(t) in the bare basis.
    pub fn evolve(&self, gamma: f64, t: f64) -> CMatrix {
        debug_assert!(t >= 0.0);
        self.decomposition.from_eigenbasis(&self.evolve_eigenbasis(gamma, t))
    }
}

pub fn spectral_evolve(prop: &SpectralPropagator, gamma: f64, t: f64) -> CMatrix {
    prop.evolve(gamma, t)
}

/// Smallest `k_max` with `x^(k_max+1) / (k_max+1)! < 1e-12`, where
/// `x = γ t ρ(H)²` and ρ(H) is the spectral radius.
pub fn series_order(h: &CMatrix, gamma: f64, t: f64) -> Result<usize> {
    let eig = hermitian_eig(h)?;
    let radius = eig.values.iter().map(|e| e.abs()).fold(0.0, f64::max);
    series_order_for(gamma * t * radius * radius)
}

pub fn series_order_for(x: f64) -> Result<usize> {
    let mut term = 1.0;
    for k in 0..=SERIES_MAX_TERMS {
        term *= x / (k as f64 + 1.0);
        if term < SERIES_TAIL_TOL {
            return Ok(k);
        }
    }
    Err(Error::TailNotConverged {
        x,
        k_max: SERIES_MAX_TERMS,
    })
}

/// Literal partial sum `Σ_{k=0}^{k_max} (γt)^k/k! M_k ρ(0) M_k†`.
///
/// `M_k` commutes with the common factor `exp(-iHt) exp(-γtH²/2)`, so the
/// terms are built as `H^k (U ρ0 U†) H^k` by repeated multiplication with H.
///
/// The sum re-amplifies the `exp(-γtE²/2)` suppression of high-energy
/// components, so rounding in those components grows like `exp(γtρ(H)²)`.
/// Agreement with the spectral route to 1e-10 needs `γt·(E_max - E_min)² ≲ 20`.
pub fn series_evolve(h: &CMatrix, rho0: &CMatrix, gamma: f64, t: f64, k_max: usize) -> Result<CMatrix> {
    if k_max > SERIES_MAX_TERMS {
        let eig = hermitian_eig(h)?;
        let radius = eig.values.iter().map(|e| e.abs()).fold(0.0, f64::max);
        return Err(Error::TailNotConverged {
            x: gamma * t * radius * radius,
            k_max: SERIES_MAX_TERMS,
        });
    }
    let eig = hermitian_eig(h)?;
    let u_diag: Vec<C64> = eig
        .values
        .iter()
        .map(|&e| C64::from_polar((-0.5 * gamma * t * e * e).exp(), -e * t))
        .collect();
    let v = &eig.vectors;
    let n = u_diag.len();
    let u = v
        .matmul(&CMatrix::from_fn(n, n, |i, j| if i == j { u_diag[i] } else { re(0.0) }))
        .matmul(&v.dagger());

    let mut term = u.matmul(rho0).matmul(&u.dagger());
    let mut acc = term.clone();
    let gt = gamma * t;
    for k in 1..=k_max {
        term = h.matmul(&term).matmul(h).scale(re(gt / k as f64));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Series evaluation at the order [`series_order`] prescribes.
pub fn series_evolve_converged(h: &CMatrix, rho0: &CMatrix, gamma: f64, t: f64) -> Result<CMatrix> {
    let k_max = series_order(h, gamma, t)?;
    series_evolve(h, rho0, gamma, t, k_max)
}

/// Largest step accepted by the RK4 integrator:
/// `0.01 / max(1, ‖H‖_max (1 + γ‖H‖_max))`.
pub fn rk4_step_bound(h: &CMatrix, gamma: f64) -> f64 {
    let hm = h.max_abs();
    0.01 / (hm * (1.0 + gamma * hm)).max(1.0)
}

fn master_rhs(h: &CMatrix, rho: &CMatrix, gamma: f64) -> CMatrix {
    let comm = h.commutator(rho);
    let double = h.commutator(&comm);
    &comm.scale(C64::new(0.0, -1.0)) + &double.scale(re(-0.5 * gamma))
}

fn rk4_step(h: &CMatrix, rho: &CMatrix, gamma: f64, dt: f64) -> CMatrix {
    let k1 = master_rhs(h, rho, gamma);
    let k2 = master_rhs(h, &(rho + &k1.scale(re(0.5 * dt))), gamma);
    let k3 = master_rhs(h, &(rho + &k2.scale(re(0.5 * dt))), gamma);
    let k4 = master_rhs(h, &(rho + &k3.scale(re(dt))), gamma);
    let incr = &(&k1 + &k2.scale(re(2.0))) + &(&k3.scale(re(2.0)) + &k4);
    (rho + &incr.scale(re(dt / 6.0))).hermitian_part()
}

/// RK4 samples at each of `times` (non-decreasing, from t = 0), with steps no
/// longer than `dt`. Each interval is split into equal steps.
pub fn rk4_trajectory(h: &CMatrix, rho0: &CMatrix, gamma: f64, times: &[f64], dt: f64) -> Result<Vec<CMatrix>> {
    let bound = rk4_step_bound(h, gamma);
    if dt.is_nan() || dt <= 0.0 || dt > bound {
        return Err(Error::StepTooLarge { dt, bound });
    }
    let mut rho = rho0.hermitian_part();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        assert!(target >= now, "sample times must be non-decreasing and non-negative");
        let span = target - now;
        let steps = (span / dt).ceil() as usize;
        if steps > 0 {
            let h_step = span / steps as f64;
            for _ in 0..steps {
                rho = rk4_step(h, &rho, gamma, h_step);
            }
        }
        now = target;
        out.push(rho.clone());
    }
    Ok(out)
}

pub fn rk4_evolve(h: &CMatrix, rho0: &CMatrix, gamma: f64, t: f64, dt: f64) -> Result<CMatrix> {
    Ok(rk4_trajectory(h, rho0, gamma, &[t], dt)?.remove(0))
}

/// Traces out the field and reads off the X-shaped entries.
///
/// Fails with [`Error::UnexpectedCoherence`] if any coherence other than
/// `<ge|ρ|eg>` exceeds 1e-8, which signals a basis or model mismatch.
pub fn reduced_atoms(rho_full: &CMatrix, field_dim: usize) -> Result<AtomPairState> {
    let rho = partial_trace_field(rho_full, field_dim)?;
    let (ge, eg) = (AtomPair::GE.index(), AtomPair::EG.index());
    for i in 0..4 {
        for j in 0..4 {
            if i == j || (i, j) == (ge, eg) || (i, j) == (eg, ge) {
                continue;
            }
            let magnitude = rho[(i, j)].norm();
            if magnitude > COHERENCE_TOL {
                return Err(Error::UnexpectedCoherence {
                    row: i,
                    col: j,
                    magnitude,
                });
            }
        }
    }
    Ok(AtomPairState {
        a1: rho[(0, 0)].re,
        a2: rho[(ge, ge)].re,
        a3: rho[(ge, eg)],
        a5: rho[(eg, eg)].re,
        a6: rho[(3, 3)].re,
    })
}

/// Total population outside the excitation-`n` block.
pub fn sector_leakage(rho: &CMatrix, n: u32, n_max: usize) -> f64 {
    excitation_numbers(n_max)
        .iter()
        .enumerate()
        .filter(|(_, &k)| (k - n as f64).abs() > 0.5)
        .map(|(i, _)| rho[(i, i)].re.abs())
        .sum()
}

/// Spectral oracle for one parameter set: H, ρ(0) and their propagator.
#[derive(Debug, Clone)]
pub struct MasterEquationOracle {
    params: ModelParams,
    n_max: usize,
    hamiltonian: CMatrix,
    rho0: CMatrix,
    propagator: SpectralPropagator,
}

impl MasterEquationOracle {
    pub fn new(params: &ModelParams, n_max: usize) -> Result<Self> {
        let hamiltonian = build_hamiltonian(params, n_max)?;
        let rho0 = initial_state(params, n_max)?;
        let propagator = SpectralPropagator::new(&hamiltonian, &rho0)?;
        Ok(Self {
            params: *params,
            n_max,
            hamiltonian,
            rho0,
            propagator,
        })
    }

    /// Oracle at the minimal faithful cutoff `n + 2`.
    pub fn minimal(params: &ModelParams) -> Result<Self> {
        Self::new(params, params.min_n_max())
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn field_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn initial(&self) -> &CMatrix {
        &self.rho0
    }

    pub fn propagator(&self) -> &SpectralPropagator {
        &self.propagator
    }

    pub fn state(&self, t: f64) -> CMatrix {
        self.propagator.evolve(self.params.gamma, t)
    }

    pub fn atom_pair_state(&self, t: f64) -> Result<AtomPairState> {
        reduced_atoms(&self.state(t), self.field_dim())
    }

    /// Index of `|pair, photons>` for this oracle's cutoff.
    pub fn index(&self, pair: AtomPair, photons: usize) -> usize {
        basis_index(pair, photons, self.n_max)
    }
}
