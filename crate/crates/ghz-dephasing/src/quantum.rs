//! Three-qubit state machinery: the GHZ-like initial family, per-qubit
//! unitaries generated by a fluctuating sigma_x term, unitary conjugation,
//! and the bit-flip channel that averages that fluctuation exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, kron, ComplexMatrix};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;

/// Validated quantum state: Hermitian, unit trace, positive semidefinite
/// within tolerance. 8x8 for the tripartite system; smaller matrices are
/// accepted for single-qubit tests.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a candidate state.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_psd_tolerance(matrix, PSD_TOL)
    }

    /// Like [`DensityMatrix::new`] but with a caller-chosen floor on the
    /// smallest eigenvalue (Monte-Carlo means carry sampling noise).
    pub fn with_psd_tolerance(matrix: ComplexMatrix, psd_tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("not square: {}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("hermiticity defect {defect:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace {tr} is not 1"),
            });
        }
        let eig = hermitian_eigen(&matrix)?;
        let min = eig.values[0];
        if min < -psd_tol {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("eigenvalue {min:.3e} below -{psd_tol:.1e}"),
            });
        }
        Ok(Self { matrix })
    }

    /// Wraps without validation; for internal construction where validity
    /// is guaranteed structurally.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Mixedness parameter of the GHZ-like family, on the closed interval [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateSpec {
    r: f64,
}

impl InitialStateSpec {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) || !r.is_finite() {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: format!("{r} outside [0, 1]"),
            });
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Per-qubit Hamiltonian parameters: energy splitting and coupling to the
/// fluctuating field. The splitting contributes only a global phase to the
/// evolved state; the coupling defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    pub epsilon: f64,
    pub lambda: f64,
}

impl QubitParams {
    pub fn new(epsilon: f64, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "coupling must be finite and non-zero".into(),
            });
        }
        Ok(Self { epsilon, lambda })
    }
}

impl Default for QubitParams {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            lambda: 1.0,
        }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    let mut sx = ComplexMatrix::zeros(2, 2);
    sx[(0, 1)] = Complex64::new(1.0, 0.0);
    sx[(1, 0)] = Complex64::new(1.0, 0.0);
    sx
}

/// GHZ-like state (1-r) I/8 + r |GHZ><GHZ|.
pub fn ghz_density(spec: InitialStateSpec) -> DensityMatrix {
    let r = spec.r();
    let mut m = ComplexMatrix::zeros(8, 8);
    for i in 0..8 {
        m[(i, i)] = Complex64::new((1.0 - r) / 8.0, 0.0);
    }
    for &(i, j) in &[(0, 0), (0, 7), (7, 0), (7, 7)] {
        m[(i, j)] += Complex64::new(r / 2.0, 0.0);
    }
    DensityMatrix::from_matrix_unchecked(m)
}

/// The pure GHZ projector, used as the witness reference.
pub fn ghz_projector() -> DensityMatrix {
    ghz_density(InitialStateSpec::new(1.0).unwrap())
}

/// Single-qubit evolution operator for an accumulated phase `phi`:
/// `exp(-i eps tau) * (cos(lambda phi) I - i sin(lambda phi) sigma_x)`.
pub fn single_qubit_unitary(params: QubitParams, phi: f64, tau: f64) -> ComplexMatrix {
    let angle = params.lambda * phi;
    let (sin_a, cos_a) = angle.sin_cos();
    let global = Complex64::from_polar(1.0, -params.epsilon * tau);
    let diag = global * Complex64::new(cos_a, 0.0);
    let off = global * Complex64::new(0.0, -sin_a);
    let mut u = ComplexMatrix::zeros(2, 2);
    u[(0, 0)] = diag;
    u[(1, 1)] = diag;
    u[(0, 1)] = off;
    u[(1, 0)] = off;
    u
}

/// Unitary conjugation `U rho U^dag`.
pub fn evolve(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    let deviation = u.unitarity_defect();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    if u.rows() != rho.dim() {
        return Err(Error::ShapeMismatch {
            context: format!("unitary is {}x{}, state is {}", u.rows(), u.cols(), rho.dim()),
        });
    }
    let m = u.matmul(rho.matrix()).matmul(&u.dagger());
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Bit-flip channel `rho -> (1-p) rho + p X_k rho X_k` on one qubit of a
/// three-qubit state. This is the exact average of sigma_x dephasing with a
/// centered Gaussian phase: p = (1 - exp(-2 beta)) / 2.
pub fn apply_bitflip_channel(rho: &DensityMatrix, qubit_index: usize, p: f64) -> Result<DensityMatrix> {
    if qubit_index > 2 {
        return Err(Error::InvalidParameter {
            name: "qubit_index",
            reason: format!("{qubit_index} outside 0..=2"),
        });
    }
    if !(0.0..=0.5).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("{p} outside [0, 1/2]"),
        });
    }
    if rho.dim() != 8 {
        return Err(Error::ShapeMismatch {
            context: format!("bit-flip channel needs an 8x8 state, got {}", rho.dim()),
        });
    }
    let x_k = embed_single_qubit(&pauli_x(), qubit_index);
    let flipped = x_k.matmul(rho.matrix()).matmul(&x_k);
    let m = rho
        .matrix()
        .scale(Complex64::new(1.0 - p, 0.0))
        .add(&flipped.scale(Complex64::new(p, 0.0)));
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Embeds a 2x2 operator on one qubit of the three-qubit register.
/// Qubit 0 is the most significant bit of the basis index.
pub fn embed_single_qubit(op: &ComplexMatrix, qubit_index: usize) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    let factors = [
        if qubit_index == 0 { op } else { &i2 },
        if qubit_index == 1 { op } else { &i2 },
        if qubit_index == 2 { op } else { &i2 },
    ];
    kron(&kron(factors[0], factors[1]), factors[2])
}

/// Tensor product of three single-qubit operators, qubit 0 first.
pub fn triple_kron(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    kron(&kron(a, b), c)
}
