//! Dense complex matrices sized for few-qubit work, plus a cyclic Jacobi
//! eigensolver for Hermitian matrices.
//!
//! Everything here is row-major `Vec<Complex64>` storage. The state spaces
//! never exceed 8x8 (16x16 for the eigensolver contract), so simplicity and
//! reproducibility win over asymptotics throughout.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronecker products are rejected once the result would exceed this dimension.
pub const MAX_KRON_DIM: usize = 1 << 10;

/// Hard cap on the Hermitian eigensolver dimension.
pub const MAX_EIGEN_DIM: usize = 16;

const EIGEN_SWEEP_CAP: usize = 50;
const HERMITICITY_TOL: f64 = 1e-10;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must match");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max modulus of `A - A^dag` entries.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    /// Max deviation of `U U^dag` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        assert!(self.is_square());
        self.matmul(&self.dagger())
            .max_abs_diff(&Self::identity(self.rows))
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product. Result dimensions are the products of the input
/// dimensions and are rejected beyond [`MAX_KRON_DIM`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    assert!(
        rows <= MAX_KRON_DIM && cols <= MAX_KRON_DIM,
        "kron output {rows}x{cols} exceeds the {MAX_KRON_DIM} dimension cap"
    );
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps zero one off-diagonal pivot at a time with a phased Givens
/// rotation; for the dimensions used here (at most [`MAX_EIGEN_DIM`]) this
/// converges in a handful of sweeps and keeps the eigenvector basis
/// orthonormal to machine precision.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() || m.rows() > MAX_EIGEN_DIM {
        return Err(Error::EigenDimension {
            max: MAX_EIGEN_DIM,
            got: m.rows().max(m.cols()),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            asymmetry: defect,
            tol: HERMITICITY_TOL,
        });
    }

    let n = m.rows();
    let mut a = m.clone();
    // Force exact Hermitian symmetry so roundoff in the input cannot leak
    // imaginary parts onto the diagonal.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(1e-300);
    let target = scale * 1e-15 * (n as f64);

    let mut converged = false;
    for _sweep in 0..EIGEN_SWEEP_CAP {
        let off = off_diag_max(&a);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= target / (n as f64) {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // tan(2*angle) = 2r / (app - aqq), smaller-root tangent.
                let theta = (app - aqq) / (2.0 * r);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- U^dag A U with U touching rows/cols p and q:
                // U[p][p]=c, U[p][q]=-s*phase, U[q][p]=s*conj(phase), U[q][q]=c.
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    let new_ip = aip * c + aiq * s * phase.conj();
                    let new_iq = aiq * c - aip * s * phase;
                    a[(i, p)] = new_ip;
                    a[(p, i)] = new_ip.conj();
                    a[(i, q)] = new_iq;
                    a[(q, i)] = new_iq.conj();
                }
                let new_pp = c * c * app + 2.0 * c * s * r + s * s * aqq;
                let new_qq = s * s * app - 2.0 * c * s * r + c * c * aqq;
                a[(p, p)] = Complex64::new(new_pp, 0.0);
                a[(q, q)] = Complex64::new(new_qq, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s * phase.conj();
                    v[(i, q)] = viq * c - vip * s * phase;
                }
            }
        }
    }
    if !converged && off_diag_max(&a) > target {
        return Err(Error::EigenNoConvergence {
            sweeps: EIGEN_SWEEP_CAP,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diag_max(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max(a[(i, j)].norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_block_structure() {
        let mut sx = ComplexMatrix::zeros(2, 2);
        sx[(0, 1)] = c(1.0, 0.0);
        sx[(1, 0)] = c(1.0, 0.0);
        let m = kron(&sx, &ComplexMatrix::identity(2));
        assert_eq!(m[(0, 2)], c(1.0, 0.0));
        assert_eq!(m[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn kron_triple_flip_maps_000_to_111() {
        let mut sx = ComplexMatrix::zeros(2, 2);
        sx[(0, 1)] = c(1.0, 0.0);
        sx[(1, 0)] = c(1.0, 0.0);
        let xxx = kron(&kron(&sx, &sx), &sx);
        // basis vector |000> as the first column of an 8x1 matrix
        let mut e0 = ComplexMatrix::zeros(8, 1);
        e0[(0, 0)] = c(1.0, 0.0);
        let mapped = xxx.matmul(&e0);
        for i in 0..8 {
            let expected = if i == 7 { 1.0 } else { 0.0 };
            assert_eq!(mapped[(i, 0)], c(expected, 0.0));
        }
    }

    #[test]
    fn kron_is_associative_on_integer_matrices() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 5.0], &[6.0, 7.0]]);
        let d = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[1.0, 9.0]]);
        // bitwise equality holds for integer-valued entries
        assert_eq!(kron(&kron(&a, &b), &d), kron(&a, &kron(&b, &d)));
    }

    #[test]
    #[should_panic(expected = "dimension cap")]
    fn kron_rejects_oversized_output() {
        let big = ComplexMatrix::identity(64);
        let _ = kron(&kron(&big, &big), &ComplexMatrix::identity(2));
    }

    #[test]
    fn eigen_identity() {
        let eig = hermitian_eigen(&ComplexMatrix::identity(8)).unwrap();
        for v in eig.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_pauli_x_spectrum() {
        let mut sx = ComplexMatrix::zeros(2, 2);
        sx[(0, 1)] = c(1.0, 0.0);
        sx[(1, 0)] = c(1.0, 0.0);
        let eig = hermitian_eigen(&sx).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_rejects_oversized() {
        let m = ComplexMatrix::identity(17);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::EigenDimension { .. })
        ));
    }

    fn reconstruct(eig: &HermitianEigen) -> ComplexMatrix {
        let n = eig.values.len();
        let mut lambda = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            lambda[(i, i)] = c(eig.values[i], 0.0);
        }
        eig.vectors.matmul(&lambda).matmul(&eig.vectors.dagger())
    }

    proptest! {
        #[test]
        fn eigen_matches_two_by_two_characteristic_roots(
            a in -5.0f64..5.0, d in -5.0f64..5.0,
            br in -5.0f64..5.0, bi in -5.0f64..5.0,
        ) {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = c(a, 0.0);
            m[(1, 1)] = c(d, 0.0);
            m[(0, 1)] = c(br, bi);
            m[(1, 0)] = c(br, -bi);
            let eig = hermitian_eigen(&m).unwrap();
            let mid = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + br * br + bi * bi).sqrt();
            prop_assert!((eig.values[0] - (mid - disc)).abs() < 1e-12);
            prop_assert!((eig.values[1] - (mid + disc)).abs() < 1e-12);
        }

        #[test]
        fn eigen_reconstructs_random_hermitian(
            seed in 0u64..1000,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 8;
            let raw = ComplexMatrix::from_fn(n, n, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let herm = raw.add(&raw.dagger()).scale(c(0.5, 0.0));
            let eig = hermitian_eigen(&herm).unwrap();
            prop_assert!(reconstruct(&eig).max_abs_diff(&herm) <= 1e-10);
            // ascending order
            for w in eig.values.windows(2) {
                prop_assert!(w[0] <= w[1] + 1e-14);
            }
            // orthonormal columns
            prop_assert!(eig.vectors.unitarity_defect() <= 1e-12);
        }
    }
}
