//! Small dense complex linear algebra.
//!
//! Everything in this crate lives in Hilbert spaces of dimension at most a
//! few dozen, so matrices are plain row-major `Vec`s and the eigensolver is
//! a cyclic complex Jacobi iteration, which keeps eigenvectors orthonormal
//! to machine precision.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation from Hermiticity accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Negative-eigenvalue slack used when checking density matrices.
pub const PSD_TOL: f64 = 1e-9;

/// Cyclic Jacobi sweep cap.
pub const MAX_JACOBI_SWEEPS: usize = 100;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    Complex64::new(x, 0.0)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| re(x)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = re(d);
        }
        m
    }

    /// The projector |psi><psi|.
    pub fn outer(ket: &[C64]) -> Self {
        Self::from_fn(ket.len(), ket.len(), |i, j| ket[i] * ket[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-norm distance to `other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M - M^dagger|, or infinity for a non-square matrix.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// (M + M^dagger) / 2.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in row.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// [self, other] = self*other - other*self.
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Extracts the square block indexed by `idx` on both sides.
    pub fn submatrix(&self, idx: &[usize]) -> CMatrix {
        CMatrix::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows, b.cols);
    CMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Spectrum and eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unit eigenvectors, stored as columns in the order of `values`.
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    /// V diag(values) V^dagger.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj()).sum()
        })
    }

    /// Expresses `m` in the eigenbasis: V^dagger m V.
    pub fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.vectors.dagger().matmul(m).matmul(&self.vectors)
    }

    /// Maps an eigenbasis operator back: V m V^dagger.
    pub fn from_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.vectors.matmul(m).matmul(&self.vectors.dagger())
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Eigenvalues come back ascending; equal eigenvalues keep the order in which
/// the iteration left them on the diagonal.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::BadDimension {
            expected: "square matrix".into(),
            rows: m.rows,
            cols: m.cols,
        });
    }
    let deviation = m.hermiticity_error();
    if deviation > HERMITIAN_TOL || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }

    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);

    let frob = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * frob * n as f64;

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps ties in original index order
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = [[c, s e], [-s conj(e), c]] on the (p, q) plane
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = a.rows;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * jpq + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * jqp.conj();
        a[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    a[(p, p)] = re(app - t * r);
    a[(q, q)] = re(aqq + t * r);
    a[(p, q)] = re(0.0);
    a[(q, p)] = re(0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

fn require_dim(m: &CMatrix, dim: usize, what: &str) -> Result<()> {
    if m.rows != dim || m.cols != dim {
        return Err(Error::BadDimension {
            expected: what.to_string(),
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(())
}

/// Transposes the second qubit of a two-qubit operator:
/// `<i j|out|k l> = <i l|rho|k j>`.
pub fn partial_transpose_b(rho: &CMatrix) -> Result<CMatrix> {
    require_dim(rho, 4, "4x4 two-qubit operator")?;
    Ok(CMatrix::from_fn(4, 4, |row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        rho[(2 * i + l, 2 * k + j)]
    }))
}

/// Traces out the cavity mode from an `atoms ⊗ field` operator whose field
/// factor has dimension `field_dim`. Returns the 4x4 atomic block.
pub fn partial_trace_field(rho_full: &CMatrix, field_dim: usize) -> Result<CMatrix> {
    if field_dim == 0 {
        return Err(Error::BadDimension {
            expected: "positive field dimension".into(),
            rows: rho_full.rows,
            cols: rho_full.cols,
        });
    }
    require_dim(
        rho_full,
        4 * field_dim,
        &format!("{0}x{0} atoms-field operator", 4 * field_dim),
    )?;
    Ok(CMatrix::from_fn(4, 4, |a, b| {
        (0..field_dim)
            .map(|f| rho_full[(a * field_dim + f, b * field_dim + f)])
            .sum()
    }))
}

/// Hermitian within `tol`, unit trace within `tol`, and no eigenvalue below `-tol`.
pub fn is_density_matrix(rho: &CMatrix, tol: f64) -> bool {
    if !rho.is_square() || !rho.is_hermitian(tol) {
        return false;
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return false;
    }
    match hermitian_eig(&rho.hermitian_part()) {
        Ok(eig) => eig.values[0] >= -tol,
        Err(_) => false,
    }
}

/// Positive-semidefiniteness to slack `tol`, decided by attempting a
/// Cholesky factorisation of `rho + tol·I`.
///
/// This is the cheap check used on long trajectories; it accepts exactly the
/// Hermitian matrices whose smallest eigenvalue exceeds `-tol` (up to
/// rounding in the factorisation).
pub fn is_psd_within(rho: &CMatrix, tol: f64) -> bool {
    if !rho.is_square() {
        return false;
    }
    let n = rho.rows;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = rho[(j, j)].re + tol;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = re(d);
        for i in (j + 1)..n {
            let mut s = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    true
}

/// Tr(rho^2).
pub fn purity(rho: &CMatrix) -> f64 {
    assert!(rho.is_square());
    // Tr(rho rho) = sum_ij rho_ij rho_ji; for Hermitian rho this is sum |rho_ij|^2
    let n = rho.rows;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * rho[(j, i)];
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sx() -> CMatrix {
        CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(rng.gen_range(-5.0..5.0));
            for j in (i + 1)..n {
                let z = c64(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn random_density(rng: &mut impl Rng, n: usize) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let p = g.matmul(&g.dagger());
        let tr = p.trace().re;
        p.scale(re(1.0 / tr))
    }

    #[test]
    fn kron_identity_and_sigma_z() {
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(2)), CMatrix::identity(4));
        let z = CMatrix::from_diag(&[1.0, -1.0]);
        assert_eq!(
            kron(&z, &CMatrix::identity(2)),
            CMatrix::from_diag(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn kron_sigma_x_swaps_basis_pairs() {
        let xx = kron(&sx(), &sx());
        let image = |k: usize| {
            let mut e = vec![re(0.0); 4];
            e[k] = re(1.0);
            xx.apply(&e).iter().position(|z| z.re == 1.0).unwrap()
        };
        assert_eq!(image(0), 3);
        assert_eq!(image(3), 0);
        assert_eq!(image(1), 2);
        assert_eq!(image(2), 1);
    }

    #[test]
    fn kron_is_associative_on_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut int_mat = |r: usize, c: usize| {
                CMatrix::from_fn(r, c, |_, _| {
                    c64(rng.gen_range(-4..=4) as f64, rng.gen_range(-4..=4) as f64)
                })
            };
            let a = int_mat(2, 3);
            let b = int_mat(3, 2);
            let c = int_mat(2, 2);
            assert_eq!(kron(&kron(&a, &b), &c), kron(&a, &kron(&b, &c)));
        }
    }

    #[test]
    fn eig_of_diagonal_is_sorted() {
        let eig = hermitian_eig(&CMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_of_sigma_x() {
        let eig = hermitian_eig(&sx()).unwrap();
        assert_abs_diff_eq!(eig.values[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eig.values[1], 1.0, epsilon = 1e-15);
        let h = 1.0 / 2f64.sqrt();
        let v0 = eig.vectors.column(0);
        let v1 = eig.vectors.column(1);
        // up to a global phase: (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2
        assert_abs_diff_eq!((v0[0] * v0[1].conj()).re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!((v1[0] * v1[1].conj()).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(v0[0].norm(), h, epsilon = 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian_and_non_square() {
        let m = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&m), Err(Error::BadDimension { .. })));
    }

    #[test]
    fn eig_random_hermitian_battery() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..1000 {
            let n = 2 + trial % 15;
            let m = random_hermitian(&mut rng, n);
            let eig = hermitian_eig(&m).unwrap();
            let v = &eig.vectors;
            let gram = v.dagger().matmul(v);
            assert!(
                gram.max_abs_diff(&CMatrix::identity(n)) <= 1e-12,
                "orthonormality, n = {n}"
            );
            let recon = eig.reconstruct();
            assert!(
                recon.max_abs_diff(&m) <= 1e-10 * (1.0 + m.max_abs()),
                "reconstruction, n = {n}"
            );
            for k in 0..n {
                let col = v.column(k);
                let mv = m.apply(&col);
                let worst = mv
                    .iter()
                    .zip(&col)
                    .map(|(a, b)| (a - b * eig.values[k]).norm())
                    .fold(0.0, f64::max);
                assert!(worst <= 1e-10 * (1.0 + m.max_abs()));
            }
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 2..=12 {
            let m = random_hermitian(&mut rng, n);
            let na = nalgebra::DMatrix::from_fn(n, n, |i, j| nalgebra::Complex::new(m[(i, j)].re, m[(i, j)].im));
            let mut reference: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            let ours = hermitian_eig(&m).unwrap().values;
            for (a, b) in ours.iter().zip(&reference) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn partial_transpose_fixed_point_and_singlet() {
        let mixed = CMatrix::identity(4).scale(re(0.25));
        assert_eq!(partial_transpose_b(&mixed).unwrap(), mixed);

        let h = 1.0 / 2f64.sqrt();
        // (|eg> - |ge>)/sqrt2 with |ge> = index 1, |eg> = index 2
        let singlet = CMatrix::outer(&[re(0.0), re(-h), re(h), re(0.0)]);
        let eig = hermitian_eig(&partial_transpose_b(&singlet).unwrap()).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in eig.values.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn partial_transpose_is_involutive_trace_and_hermiticity_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rho = random_density(&mut rng, 4);
            let pt = partial_transpose_b(&rho).unwrap();
            assert_eq!(partial_transpose_b(&pt).unwrap(), rho);
            assert_abs_diff_eq!(pt.trace().re, rho.trace().re, epsilon = 1e-14);
            assert!(pt.hermiticity_error() <= 1e-15);
        }
        assert!(matches!(
            partial_transpose_b(&CMatrix::identity(3)),
            Err(Error::BadDimension { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field_dim in 1..6 {
            let a = random_density(&mut rng, 4);
            let b = CMatrix::from_fn(field_dim, field_dim, |_, _| {
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let traced = partial_trace_field(&kron(&a, &b), field_dim).unwrap();
            assert!(traced.max_abs_diff(&a.scale(b.trace())) <= 1e-14);
        }
        // rho_atoms ⊗ |n><n|
        let a = random_density(&mut rng, 4);
        let mut fock = CMatrix::zeros(5, 5);
        fock[(3, 3)] = re(1.0);
        let full = kron(&a, &fock);
        assert!(partial_trace_field(&full, 5).unwrap().max_abs_diff(&a) <= 1e-15);
        assert_abs_diff_eq!(
            partial_trace_field(&full, 5).unwrap().trace().re,
            full.trace().re,
            epsilon = 1e-12
        );
        assert!(partial_trace_field(&full, 4).is_err());
    }

    #[test]
    fn density_matrix_predicate() {
        assert!(is_density_matrix(&CMatrix::identity(2).scale(re(0.5)), 1e-12));
        assert!(!is_density_matrix(&CMatrix::from_diag(&[1.5, -0.5]), 1e-9));
        assert!(!is_density_matrix(&CMatrix::from_diag(&[0.5, 0.4]), 1e-9));
        assert!(!is_density_matrix(&CMatrix::zeros(2, 3), 1e-9));
    }

    #[test]
    fn cholesky_psd_agrees_with_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let m = random_hermitian(&mut rng, 5);
            let min = hermitian_eig(&m).unwrap().values[0];
            let tol = 1e-9;
            if (min + tol).abs() > 1e-6 {
                assert_eq!(is_psd_within(&m, tol), min > -tol);
            }
        }
        assert!(is_psd_within(&CMatrix::from_diag(&[1.0, 0.0, 0.0]), 1e-9));
        assert!(!is_psd_within(&CMatrix::from_diag(&[1.0, -1e-6]), 1e-9));
    }

    #[test]
    fn purity_of_pure_and_mixed() {
        let h = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(purity(&CMatrix::outer(&[re(h), c64(0.0, h)])), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(purity(&CMatrix::identity(4).scale(re(0.25))), 0.25, epsilon = 1e-15);
    }
}
