//! Closed-form evolved states and measure curves.
//!
//! Averaging the per-qubit sigma_x dephasing over its Gaussian phase turns
//! each qubit's evolution into a bit-flip channel with coherence factor
//! `c_i = exp(-2 beta_i(tau))`. Applied to the GHZ-like initial state the
//! result stays X-shaped, with every entry determined by the pairwise
//! products `c_i c_j`:
//!
//! ```text
//! corner  = (1 + c1 c2 + c1 c3 + c2 c3) / 8
//! entry_b = (1 + s1 s2 c1 c2 + s1 s3 c1 c3 + s2 s3 c2 c3) / 8,  s_k = (-1)^bit_k
//! ```
//!
//! on both the diagonal and the anti-diagonal. All measures then follow in
//! closed form and are cross-checked against the generic eigenvalue route.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::MeasureSet;
use crate::noise::{FgKernel, NoiseKernel, PlKernel};
use crate::quantum::DensityMatrix;

/// Per-qubit kernel assignment for the three environments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfiguration {
    kernels: [NoiseKernel; 3],
}

impl NoiseConfiguration {
    pub fn new(kernels: [NoiseKernel; 3]) -> Self {
        Self { kernels }
    }

    /// All three qubits see the same power-law noise.
    pub fn pure_pl(kernel: PlKernel) -> Self {
        Self::new([kernel.into(); 3])
    }

    /// All three qubits see the same fractional Gaussian noise.
    pub fn pure_fg(kernel: FgKernel) -> Self {
        Self::new([kernel.into(); 3])
    }

    /// Power-law maximized: qubits 0 and 1 see power-law noise, qubit 2
    /// fractional Gaussian noise.
    pub fn plm(pl: PlKernel, fg: FgKernel) -> Self {
        Self::new([pl.into(), pl.into(), fg.into()])
    }

    /// Fractional-Gaussian maximized: qubits 0 and 1 see fractional
    /// Gaussian noise, qubit 2 power-law noise.
    pub fn fgm(fg: FgKernel, pl: PlKernel) -> Self {
        Self::new([fg.into(), fg.into(), pl.into()])
    }

    pub fn kernels(&self) -> &[NoiseKernel; 3] {
        &self.kernels
    }

    pub fn kernel(&self, qubit: usize) -> &NoiseKernel {
        &self.kernels[qubit]
    }

    /// Same assignment with qubits permuted.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        Self::new([
            self.kernels[order[0]],
            self.kernels[order[1]],
            self.kernels[order[2]],
        ])
    }
}

/// Scalar decay quantities at one time: per-qubit phase variances and
/// coherence factors. Everything that enters the closed forms derives from
/// these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingFactors {
    /// Phase variance per qubit.
    pub beta: [f64; 3],
    /// Coherence factor per qubit, `exp(-2 beta_i)`, in (0, 1].
    pub c: [f64; 3],
}

impl DephasingFactors {
    /// Builds from raw coherence factors (each in (0, 1]).
    pub fn from_coherence_factors(c: [f64; 3]) -> Result<Self> {
        for &ci in &c {
            if !(ci > 0.0 && ci <= 1.0) {
                return Err(Error::InvalidParameter {
                    name: "c",
                    reason: format!("coherence factor {ci} outside (0, 1]"),
                });
            }
        }
        let beta = [-c[0].ln() / 2.0, -c[1].ln() / 2.0, -c[2].ln() / 2.0];
        Ok(Self { beta, c })
    }

    /// Pairwise products `[c1 c2, c1 c3, c2 c3]`; the only combinations the
    /// evolved state depends on.
    pub fn pair_products(&self) -> [f64; 3] {
        [
            self.c[0] * self.c[1],
            self.c[0] * self.c[2],
            self.c[1] * self.c[2],
        ]
    }

    /// `exp(-4 beta)` of the doubled kernel: the coherence product of
    /// qubits 0 and 1. Equal to the single-noise factor in the pure case.
    pub fn x_factor(&self) -> f64 {
        self.c[0] * self.c[1]
    }

    /// `exp(-2 beta_mix)`: the cross product between a doubled-kernel qubit
    /// and the odd one.
    pub fn y_factor(&self) -> f64 {
        self.c[1] * self.c[2]
    }

    /// `exp(-4 beta)` in the pure case; alias of [`Self::x_factor`].
    pub fn eta1(&self) -> f64 {
        self.x_factor()
    }

    /// `exp(-8 beta)` in the pure case.
    pub fn eta2(&self) -> f64 {
        let x = self.x_factor();
        x * x
    }

    /// The four distinct numerators of the evolved X-state entries, times 8:
    /// `[1+P12+P13+P23, 1+P12-P13-P23, 1-P12+P13-P23, 1-P12-P13+P23]`.
    ///
    /// When qubits 0 and 1 share a kernel this is `[H1, H2, H3, H3]` with
    /// `H1 = 1 + X + 2Y`, `H2 = 1 + X - 2Y`, `H3 = 1 - X`.
    pub fn h_values(&self) -> [f64; 4] {
        let [p12, p13, p23] = self.pair_products();
        [
            1.0 + p12 + p13 + p23,
            1.0 + p12 - p13 - p23,
            1.0 - p12 + p13 - p23,
            1.0 - p12 - p13 + p23,
        ]
    }
}

/// Evaluates the per-qubit phase variances and coherence factors at `tau`.
pub fn dephasing_factors(config: &NoiseConfiguration, tau: f64) -> Result<DephasingFactors> {
    let mut beta = [0.0; 3];
    let mut c = [0.0; 3];
    for (i, kernel) in config.kernels().iter().enumerate() {
        beta[i] = kernel.beta_closed(tau)?.value();
        c[i] = (-2.0 * beta[i]).exp();
    }
    Ok(DephasingFactors { beta, c })
}

/// Builds the evolved state from coherence factors, mixed with the fully
/// mixed state by `r`: `(1 - r) I/8 + r rho_X(c)`.
pub fn xstate_from_factors(factors: &DephasingFactors, r: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&r) || !r.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("{r} outside [0, 1]"),
        });
    }
    for &ci in &factors.c {
        if !(ci > 0.0 && ci <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "c",
                reason: format!("coherence factor {ci} outside (0, 1]"),
            });
        }
    }
    let [p12, p13, p23] = factors.pair_products();
    let mut m = ComplexMatrix::zeros(8, 8);
    for b in 0..8usize {
        let s1 = if b & 0b100 == 0 { 1.0 } else { -1.0 };
        let s2 = if b & 0b010 == 0 { 1.0 } else { -1.0 };
        let s3 = if b & 0b001 == 0 { 1.0 } else { -1.0 };
        let value = (1.0 + s1 * s2 * p12 + s1 * s3 * p13 + s2 * s3 * p23) / 8.0;
        m[(b, b)] = Complex64::new((1.0 - r) / 8.0 + r * value, 0.0);
        m[(b, 7 - b)] += Complex64::new(r * value, 0.0);
    }
    DensityMatrix::new(m)
}

/// Closed-form evolved state at `tau`.
pub fn analytic_rho(config: &NoiseConfiguration, tau: f64, r: f64) -> Result<DensityMatrix> {
    let factors = dephasing_factors(config, tau)?;
    xstate_from_factors(&factors, r)
}

/// Closed-form measures at `tau` for the undiluted (`r = 1`) initial state:
///
/// ```text
/// E = (P12 + P13 + P23 - 1) / 4
/// P = (1 + P12^2 + P13^2 + P23^2) / 4
/// D = -sum_i (G_i / 4) ln(G_i / 4)
/// ```
///
/// which reduce to `E = (3 eta1 - 1)/4`, `P = (1 + 3 eta2)/4` in the pure
/// case and to `E = (X + 2Y - 1)/4`, `P = (1 + X^2 + 2Y^2)/4` with the
/// `H1, H2, H3, H3` eigenvalue set in the two mixed cases.
pub fn analytic_measures(config: &NoiseConfiguration, tau: f64) -> Result<MeasureSet> {
    let factors = dephasing_factors(config, tau)?;
    Ok(measures_from_factors(&factors, tau))
}

/// Closed-form measures from precomputed factors (`r = 1`).
pub fn measures_from_factors(factors: &DephasingFactors, tau: f64) -> MeasureSet {
    let pairs = factors.pair_products();
    let witness = (pairs.iter().sum::<f64>() - 1.0) / 4.0;
    let purity = (1.0 + pairs.iter().map(|p| p * p).sum::<f64>()) / 4.0;
    let mut decoherence = 0.0;
    for h in factors.h_values() {
        let lambda = h / 4.0;
        if lambda > 0.0 {
            decoherence -= lambda * lambda.ln();
        }
    }
    MeasureSet {
        tau,
        witness,
        purity,
        decoherence: decoherence.max(0.0),
    }
}

/// Measure rows over an ascending time grid (r = 1 closed forms).
#[derive(Debug, Clone)]
pub struct MeasureCurve {
    pub config: NoiseConfiguration,
    pub rows: Vec<MeasureSet>,
}

/// Evaluates the closed-form measures on a uniform grid over `[0, tau_max]`.
pub fn measure_curve(config: &NoiseConfiguration, tau_max: f64, steps: usize) -> Result<MeasureCurve> {
    assert!(steps >= 2 && tau_max > 0.0);
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let tau = tau_max * i as f64 / (steps - 1) as f64;
        rows.push(analytic_measures(config, tau)?);
    }
    Ok(MeasureCurve {
        config: *config,
        rows,
    })
}

const BRACKET_LIMIT: f64 = 1e6;

/// Finds the root of a strictly decreasing function of `tau` by geometric
/// bracket growth from [0, 1] and bisection.
fn bisect_decreasing(f: impl Fn(f64) -> f64, limit: f64) -> Result<f64> {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    if f(lo) < 0.0 {
        return Err(Error::NoSeparabilityCrossing { limit });
    }
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Err(Error::NoSeparabilityCrossing { limit });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * mid.max(1.0) {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Earliest time at which the witness crosses zero (`r = 1`).
pub fn separability_time(config: &NoiseConfiguration) -> Result<f64> {
    let f = |tau: f64| {
        analytic_measures(config, tau)
            .map(|m| m.witness)
            .unwrap_or(f64::NAN)
    };
    bisect_decreasing(f, BRACKET_LIMIT)
}

/// Smallest time at which the witness is within `margin` of its -1/4
/// asymptote; used to pick sensible sweep ranges.
pub fn witness_settling_time(config: &NoiseConfiguration, margin: f64) -> Result<f64> {
    let f = |tau: f64| {
        analytic_measures(config, tau)
            .map(|m| m.witness - (-0.25 + margin))
            .unwrap_or(f64::NAN)
    };
    bisect_decreasing(f, BRACKET_LIMIT)
}
