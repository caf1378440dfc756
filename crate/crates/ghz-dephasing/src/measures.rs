//! Entanglement witness, purity and von Neumann entropy of a state.
//!
//! The witness is reported as `Tr[rho_ref rho] - 1/2` against a pure
//! reference, so a fresh GHZ state scores +1/2, separability is crossed at
//! zero, and the fully dephased limit sits at -1/4. Entropies use natural
//! logarithms throughout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::quantum::DensityMatrix;

const REFERENCE_PURITY_TOL: f64 = 1e-10;

/// Eigenvalues in [-EIGEN_CLIP, 0) are treated as exact zeros when taking
/// entropies; anything more negative signals an invalid state.
const EIGEN_CLIP: f64 = 1e-10;

/// The three quantifiers at one dimensionless time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    pub tau: f64,
    /// Witness value in [-1/2, 1/2]; positive certifies GHZ-class entanglement.
    pub witness: f64,
    /// Purity in [1/8, 1] for the tripartite system.
    pub purity: f64,
    /// Von Neumann entropy in nats, in [0, ln 8].
    pub decoherence: f64,
}

/// Witness `Tr[rho_ref rho] - 1/2` against a pure reference state.
pub fn witness(rho: &DensityMatrix, reference: &DensityMatrix) -> Result<f64> {
    let ref_purity = purity(reference);
    if ref_purity < 1.0 - REFERENCE_PURITY_TOL {
        return Err(Error::WitnessReferenceNotPure { purity: ref_purity });
    }
    if rho.dim() != reference.dim() {
        return Err(Error::ShapeMismatch {
            context: format!("state is {}, reference is {}", rho.dim(), reference.dim()),
        });
    }
    let overlap = reference.matrix().matmul(rho.matrix()).trace();
    Ok(overlap.re - 0.5)
}

/// Purity `Tr[rho^2]`, computed as the squared Frobenius norm.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().entries().iter().map(|z| z.norm_sqr()).sum()
}

/// Von Neumann entropy `-sum lambda ln lambda` in nats, with `0 ln 0 = 0`.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho.matrix())?;
    let mut entropy = 0.0;
    for &lambda in &eig.values {
        if lambda < -EIGEN_CLIP {
            return Err(Error::NegativeEigenvalue {
                value: lambda,
                tol: EIGEN_CLIP,
            });
        }
        if lambda > 0.0 {
            entropy -= lambda * lambda.ln();
        }
    }
    Ok(entropy.max(0.0))
}

/// Bundles the three measures computed from the same state.
pub fn measure_set(rho: &DensityMatrix, reference: &DensityMatrix, tau: f64) -> Result<MeasureSet> {
    Ok(MeasureSet {
        tau,
        witness: witness(rho, reference)?,
        purity: purity(rho),
        decoherence: vn_entropy(rho)?,
    })
}
