//! Two identical two-level atoms, dipole-coupled to each other and resonantly
//! coupled to one cavity mode (rotating-wave approximation).
//!
//! State space ordering, shared by every module: `atomA ⊗ atomB ⊗ field`,
//! single-atom basis `(|g>, |e>)`, so the two-atom block runs
//! `|gg>, |ge>, |eg>, |ee>` and the full index is
//! `pair * (n_max + 1) + photons`.

use crate::error::{Error, Result};
use crate::qmath::{kron, re, CMatrix, C64};

/// Physical parameters, all energies in units where `g` sets the scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Atom-cavity coupling.
    pub g: f64,
    /// Common atomic and cavity frequency.
    pub omega: f64,
    /// Dipole-dipole exchange coupling.
    pub big_omega: f64,
    /// Phase decoherence coefficient, in units of inverse energy.
    pub gamma: f64,
    /// Initial Fock photon number.
    pub n: u32,
    /// Initial entanglement angle: `cos θ |eg> + sin θ |ge>`.
    pub theta: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            g: 1.0,
            omega: 0.0,
            big_omega: 1.0,
            gamma: 0.0,
            n: 0,
            theta: 0.0,
        }
    }
}

impl ModelParams {
    pub fn new(g: f64, omega: f64, big_omega: f64, gamma: f64, n: u32, theta: f64) -> Result<Self> {
        let p = Self {
            g,
            omega,
            big_omega,
            gamma,
            n,
            theta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::InvalidParams(format!(
                "g must be positive and finite, got {}",
                self.g
            )));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "gamma must be non-negative and finite, got {}",
                self.gamma
            )));
        }
        for (name, v) in [
            ("omega", self.omega),
            ("big_omega", self.big_omega),
            ("theta", self.theta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Smallest photon cutoff that holds the `|n+1>` component.
    pub fn min_n_max(&self) -> usize {
        self.n as usize + 2
    }

    /// `8 (1 + 2n) g²`, the squared bright-state coupling times four.
    pub fn coupling_sq(&self) -> f64 {
        8.0 * (1.0 + 2.0 * self.n as f64) * self.g * self.g
    }

    /// Δ = sqrt(8(1+2n)g² + Ω²).
    pub fn delta(&self) -> f64 {
        (self.coupling_sq() + self.big_omega * self.big_omega).sqrt()
    }

    /// (Δ - Ω, Δ + Ω), evaluated without cancellation.
    pub fn delta_minus_plus(&self) -> (f64, f64) {
        let d = self.delta();
        let w = self.big_omega;
        if w >= 0.0 {
            let plus = d + w;
            (self.coupling_sq() / plus, plus)
        } else {
            let minus = d - w;
            (minus, self.coupling_sq() / minus)
        }
    }

    /// E2 - E1 = (3Ω - Δ)/2.
    pub fn gap_21(&self) -> f64 {
        0.5 * (3.0 * self.big_omega - self.delta())
    }

    /// E3 - E1 = (3Ω + Δ)/2.
    pub fn gap_31(&self) -> f64 {
        0.5 * (3.0 * self.big_omega + self.delta())
    }

    /// E3 - E2 = Δ.
    pub fn gap_32(&self) -> f64 {
        self.delta()
    }
}

/// Two-atom basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomPair {
    GG = 0,
    GE = 1,
    EG = 2,
    EE = 3,
}

impl AtomPair {
    pub const ALL: [AtomPair; 4] = [AtomPair::GG, AtomPair::GE, AtomPair::EG, AtomPair::EE];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Number of excited atoms.
    pub fn excitations(self) -> usize {
        match self {
            AtomPair::GG => 0,
            AtomPair::GE | AtomPair::EG => 1,
            AtomPair::EE => 2,
        }
    }
}

/// Index of `|pair, photons>` in the truncated space.
#[inline]
pub fn basis_index(pair: AtomPair, photons: usize, n_max: usize) -> usize {
    pair.index() * (n_max + 1) + photons
}

fn check_cutoff(p: &ModelParams, n_max: usize) -> Result<()> {
    if n_max < p.min_n_max() {
        return Err(Error::TruncationTooSmall { n: p.n, n_max });
    }
    Ok(())
}

fn sigma_plus() -> CMatrix {
    // |e><g| in the (g, e) basis
    CMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0])
}

fn sigma_minus() -> CMatrix {
    CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

fn half_sigma_z() -> CMatrix {
    CMatrix::from_diag(&[-0.5, 0.5])
}

fn annihilation(n_max: usize) -> CMatrix {
    let d = n_max + 1;
    CMatrix::from_fn(d, d, |i, j| if j == i + 1 { re((j as f64).sqrt()) } else { re(0.0) })
}

fn number_op(n_max: usize) -> CMatrix {
    CMatrix::from_diag(&(0..=n_max).map(|k| k as f64).collect::<Vec<_>>())
}

fn on_atom_a(op: &CMatrix) -> CMatrix {
    kron(op, &CMatrix::identity(2))
}

fn on_atom_b(op: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(2), op)
}

/// Full Hamiltonian on the truncated space of dimension `4 (n_max + 1)`:
///
/// `H = ω(S1z + S2z) + ω a†a + g Σ_j (a† S_j⁻ + a S_j⁺) + Ω(S1⁺S2⁻ + S2⁺S1⁻)`
///
/// with `S^z = (|e><e| - |g><g|)/2`.
pub fn build_hamiltonian(p: &ModelParams, n_max: usize) -> Result<CMatrix> {
    p.validate()?;
    check_cutoff(p, n_max)?;
    let id_f = CMatrix::identity(n_max + 1);
    let id_at = CMatrix::identity(4);
    let a = annihilation(n_max);
    let a_dag = a.dagger();

    let sz_total = &on_atom_a(&half_sigma_z()) + &on_atom_b(&half_sigma_z());
    let s1p = on_atom_a(&sigma_plus());
    let s1m = on_atom_a(&sigma_minus());
    let s2p = on_atom_b(&sigma_plus());
    let s2m = on_atom_b(&sigma_minus());

    let free = &kron(&sz_total, &id_f).scale(re(p.omega)) + &kron(&id_at, &number_op(n_max)).scale(re(p.omega));
    let lowering = &s1m + &s2m;
    let raising = &s1p + &s2p;
    let jc = &kron(&lowering, &a_dag) + &kron(&raising, &a);
    let dipole = &s1p.matmul(&s2m) + &s2p.matmul(&s1m);

    let h = &(&free + &jc.scale(re(p.g))) + &kron(&dipole, &id_f).scale(re(p.big_omega));
    Ok(h)
}

/// Conserved excitation number `a†a + S1z + S2z`, which equals
/// `a†a + (σ1z + σ2z)/2` in Pauli normalisation. Diagonal in the bare basis.
pub fn excitation_operator(n_max: usize) -> CMatrix {
    let mut diag = vec![0.0; 4 * (n_max + 1)];
    for pair in AtomPair::ALL {
        for k in 0..=n_max {
            diag[basis_index(pair, k, n_max)] = k as f64 + pair.excitations() as f64 - 1.0;
        }
    }
    CMatrix::from_diag(&diag)
}

/// Excitation number of every bare basis state.
pub fn excitation_numbers(n_max: usize) -> Vec<f64> {
    let k = excitation_operator(n_max);
    (0..k.rows()).map(|i| k[(i, i)].re).collect()
}

/// `cos θ |eg> + sin θ |ge>` on the two-atom block.
pub fn atomic_ket(theta: f64) -> [C64; 4] {
    let mut psi = [re(0.0); 4];
    psi[AtomPair::EG.index()] = re(theta.cos());
    psi[AtomPair::GE.index()] = re(theta.sin());
    psi
}

/// Initial pure state `(cos θ|eg> + sin θ|ge>) ⊗ |n>` in the full space.
pub fn initial_ket(p: &ModelParams, n_max: usize) -> Result<Vec<C64>> {
    p.validate()?;
    check_cutoff(p, n_max)?;
    let mut psi = vec![re(0.0); 4 * (n_max + 1)];
    let n = p.n as usize;
    psi[basis_index(AtomPair::EG, n, n_max)] = re(p.theta.cos());
    psi[basis_index(AtomPair::GE, n, n_max)] = re(p.theta.sin());
    Ok(psi)
}

/// ρ(0) = |ψ><ψ| ⊗ |n><n|.
pub fn initial_state(p: &ModelParams, n_max: usize) -> Result<CMatrix> {
    Ok(CMatrix::outer(&initial_ket(p, n_max)?))
}

/// One dressed eigenvector of the excitation-`n` block.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedState {
    pub energy: f64,
    /// Real amplitudes over [`DressedBasis::sector_states`].
    pub coeffs: Vec<f64>,
}

/// Closed-form eigensystem of the Hamiltonian in the excitation-`n` block.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedBasis {
    pub n: u32,
    pub delta: f64,
    /// Dark state, present only for `n >= 1`; the initial state never overlaps it.
    pub e0: Option<DressedState>,
    pub e1: DressedState,
    pub e2: DressedState,
    pub e3: DressedState,
}

impl DressedBasis {
    /// Bare states spanning the block, in coefficient order:
    /// `|n-1,ee>` (n >= 1 only), `|n,eg>`, `|n,ge>`, `|n+1,gg>`.
    pub fn sector_states(&self) -> Vec<(AtomPair, usize)> {
        let n = self.n as usize;
        let mut states = Vec::with_capacity(4);
        if n >= 1 {
            states.push((AtomPair::EE, n - 1));
        }
        states.push((AtomPair::EG, n));
        states.push((AtomPair::GE, n));
        states.push((AtomPair::GG, n + 1));
        states
    }

    pub fn states(&self) -> Vec<&DressedState> {
        self.e0.iter().chain([&self.e1, &self.e2, &self.e3]).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states().iter().map(|s| s.energy).collect()
    }

    /// Embeds a dressed state in the truncated full space.
    pub fn embed(&self, state: &DressedState, n_max: usize) -> Vec<C64> {
        let mut v = vec![re(0.0); 4 * (n_max + 1)];
        for ((pair, k), &c) in self.sector_states().into_iter().zip(&state.coeffs) {
            v[basis_index(pair, k, n_max)] = re(c);
        }
        v
    }
}

/// Dressed energies and eigenvectors of the excitation-`n` block.
pub fn dressed_basis(p: &ModelParams) -> DressedBasis {
    let n = p.n as f64;
    let g = p.g;
    let w = p.big_omega;
    let delta = p.delta();
    let (dm, dp) = p.delta_minus_plus();
    let nw = n * p.omega;
    let has_ee = p.n >= 1;

    let assemble = |ee: f64, eg: f64, ge: f64, gg: f64| -> Vec<f64> {
        if has_ee {
            vec![ee, eg, ge, gg]
        } else {
            vec![eg, ge, gg]
        }
    };

    let e0 = has_ee.then(|| DressedState {
        energy: nw,
        coeffs: assemble(
            -((1.0 + n) / (1.0 + 2.0 * n)).sqrt(),
            0.0,
            0.0,
            (n / (1.0 + 2.0 * n)).sqrt(),
        ),
    });

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e1 = DressedState {
        energy: nw - w,
        coeffs: assemble(0.0, -h, h, 0.0),
    };

    let n2 = 0.5 * (dm / delta).sqrt();
    let e2 = DressedState {
        energy: 0.5 * (2.0 * nw + w - delta),
        coeffs: assemble(
            n2 * 4.0 * n.sqrt() * g / dm,
            -n2,
            -n2,
            n2 * 4.0 * (n + 1.0).sqrt() * g / dm,
        ),
    };

    let n3 = 0.5 * (dp / delta).sqrt();
    let e3 = DressedState {
        energy: 0.5 * (2.0 * nw + w + delta),
        coeffs: assemble(
            n3 * 4.0 * n.sqrt() * g / dp,
            n3,
            n3,
            n3 * 4.0 * (n + 1.0).sqrt() * g / dp,
        ),
    };

    DressedBasis {
        n: p.n,
        delta,
        e0,
        e1,
        e2,
        e3,
    }
}
