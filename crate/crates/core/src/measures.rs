//! Entanglement negativity and maximal CHSH value for two qubits.
//!
//! Each measure comes in two flavours: a closed form over the X-shaped
//! [`AtomPairState`], and a generic path over any 4x4 density matrix. The two
//! are checked against each other in tests.
//!
//! Pauli convention on the `(|g>, |e>)` basis: `σz|e> = +|e>`, `σx|g> = |e>`,
//! `σy = i σx σz`.

use crate::closedform::AtomPairState;
use crate::error::{Error, Result};
use crate::model::AtomPair;
use crate::qmath::{c64, hermitian_eig, is_density_matrix, kron, partial_transpose_b, re, CMatrix};

/// Density-matrix tolerance for [`negativity_generic`] inputs.
pub const DENSITY_TOL: f64 = 1e-8;

pub fn sigma_x() -> CMatrix {
    CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_vec(2, 2, vec![re(0.0), c64(0.0, 1.0), c64(0.0, -1.0), re(0.0)])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_diag(&[-1.0, 1.0])
}

pub fn paulis() -> [CMatrix; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// 4x4 matrix on `|gg>, |ge>, |eg>, |ee>` with `<ge|ρ|eg> = a3`.
pub fn assemble_rho(a: &AtomPairState) -> CMatrix {
    let mut rho = CMatrix::zeros(4, 4);
    let (gg, ge, eg, ee) = (
        AtomPair::GG.index(),
        AtomPair::GE.index(),
        AtomPair::EG.index(),
        AtomPair::EE.index(),
    );
    rho[(gg, gg)] = re(a.a1);
    rho[(ge, ge)] = re(a.a2);
    rho[(eg, eg)] = re(a.a5);
    rho[(ee, ee)] = re(a.a6);
    rho[(ge, eg)] = a.a3;
    rho[(eg, ge)] = a.a4();
    rho
}

/// Eigenvalues of the partial transpose of an X-shaped state:
/// `a2, a5, (a1 + a6 ± sqrt((a1 - a6)² + 4|a3|²)) / 2`.
pub fn partial_transpose_spectrum(a: &AtomPairState) -> [f64; 4] {
    let root = ((a.a1 - a.a6).powi(2) + 4.0 * a.a3.norm_sqr()).sqrt();
    [a.a2, a.a5, 0.5 * (a.a1 + a.a6 + root), 0.5 * (a.a1 + a.a6 - root)]
}

/// `Σ (|μ| - μ)` over the partial-transpose spectrum, i.e. minus twice the sum
/// of its negative eigenvalues, without clamping.
pub fn negativity_abs_form(a: &AtomPairState) -> f64 {
    partial_transpose_spectrum(a).iter().map(|&mu| mu.abs() - mu).sum()
}

/// Negativity of the X-shaped state; only the lower eigenvalue of the
/// `gg/ee` block can go negative.
pub fn negativity_closed(a: &AtomPairState) -> f64 {
    let root = ((a.a1 - a.a6).powi(2) + 4.0 * a.a3.norm_sqr()).sqrt();
    (root - (a.a1 + a.a6)).clamp(0.0, 1.0)
}

/// `-2 Σ` negative eigenvalues of the partial transpose, clamped to [0, 1].
pub fn negativity_generic(rho: &CMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::BadDimension {
            expected: "4x4 two-qubit density matrix".into(),
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    if !is_density_matrix(rho, DENSITY_TOL) {
        return Err(Error::NotDensityMatrix { tol: DENSITY_TOL });
    }
    let pt = partial_transpose_b(&rho.hermitian_part())?;
    let eig = hermitian_eig(&pt)?;
    let neg: f64 = eig.values.iter().filter(|&&v| v < 0.0).sum();
    Ok((-2.0 * neg).clamp(0.0, 1.0))
}

/// Two-qubit correlation tensor `T[n][m] = Tr(ρ σn ⊗ σm)`, n, m ∈ {x, y, z}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub t: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    /// TᵀT as a matrix.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.t[k][i] * self.t[k][j]).sum();
            }
        }
        out
    }
}

pub fn correlation_matrix(rho: &CMatrix) -> Result<CorrelationMatrix> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::BadDimension {
            expected: "4x4 two-qubit operator".into(),
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    let sigmas = paulis();
    let mut t = [[0.0; 3]; 3];
    for (n, sn) in sigmas.iter().enumerate() {
        for (m, sm) in sigmas.iter().enumerate() {
            t[n][m] = rho.matmul(&kron(sn, sm)).trace().re;
        }
    }
    Ok(CorrelationMatrix { t })
}

/// Maximal CHSH expectation `2 sqrt(λ1 + λ2)`, with λ1, λ2 the two largest
/// eigenvalues of TᵀT.
pub fn bell_generic(rho: &CMatrix) -> Result<f64> {
    let corr = correlation_matrix(rho)?;
    let gram = corr.gram();
    let m = CMatrix::from_fn(3, 3, |i, j| re(gram[i][j]));
    let eig = hermitian_eig(&m)?;
    let top = (eig.values[1] + eig.values[2]).max(0.0);
    Ok(2.0 * top.sqrt())
}

/// Closed form for X-shaped states: the spectrum of TᵀT is
/// `{4|a3|², 4|a3|², (a1 + a6 - a2 - a5)²}`.
pub fn bell_closed(a: &AtomPairState) -> f64 {
    let coh = 4.0 * a.a3.norm_sqr();
    let zz = (a.a1 + a.a6 - a.a2 - a.a5).powi(2);
    2.0 * (coh + coh.max(zz)).sqrt()
}
