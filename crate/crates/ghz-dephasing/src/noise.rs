//! Noise autocorrelation kernels and their accumulated phase variance.
//!
//! Two kernel families drive the dephasing: fractional Gaussian noise with
//! Hurst exponent `H`, and power-law noise with rate ratio `g` and tail
//! exponent `alpha`. The central quantity is the beta function
//!
//! ```text
//! beta(tau) = int_0^tau int_0^tau K(z, z') dz dz'
//! ```
//!
//! i.e. the variance of the phase a qubit accumulates up to dimensionless
//! time `tau`. Both families have closed forms; an independent trapezoid
//! quadrature of the double integral cross-checks them.

use crate::error::{Error, Result};

/// Tail exponents closer to 2 than this are treated as singular.
pub const ALPHA_SINGULAR_TOL: f64 = 1e-9;

/// Minimum base resolution accepted by the quadrature oracle.
pub const MIN_QUAD_RESOLUTION: usize = 16;

/// Relative convergence target of the quadrature refinement.
pub const QUAD_REL_TOL: f64 = 1e-6;

/// Refinement stops once a trapezoid level would exceed 2^20 cells.
const MAX_QUAD_CELLS: usize = 1 << 20;

/// Fractional Gaussian noise kernel, parameterized by the Hurst exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgKernel {
    hurst: f64,
}

impl FgKernel {
    pub fn new(hurst: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::InvalidParameter {
                name: "hurst",
                reason: format!("{hurst} outside (0, 1)"),
            });
        }
        Ok(Self { hurst })
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    /// Two-argument autocorrelation
    /// `(|t|^2H + |t'|^2H - |t - t'|^2H) / 2`.
    pub fn covariance(&self, t: f64, t_prime: f64) -> f64 {
        assert!(t >= 0.0 && t_prime >= 0.0, "times must be non-negative");
        let e = 2.0 * self.hurst;
        0.5 * (t.powf(e) + t_prime.powf(e) - (t - t_prime).abs().powf(e))
    }

    /// Closed-form phase variance `tau^(2H+2) / (2H+2)`.
    pub fn beta(&self, tau: f64) -> BetaValue {
        assert!(tau >= 0.0, "tau must be non-negative");
        let e = 2.0 * self.hurst + 2.0;
        BetaValue(tau.powf(e) / e)
    }
}

/// Power-law noise kernel. `g` is the dimensionless rate ratio and `alpha`
/// the tail exponent, restricted to `alpha > 2` so the phase variance stays
/// finite in the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlKernel {
    g: f64,
    alpha: f64,
}

impl PlKernel {
    pub fn new(g: f64, alpha: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: format!("{g} must be positive"),
            });
        }
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("{alpha} must exceed 2"),
            });
        }
        Ok(Self { g, alpha })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Stationary autocorrelation `(alpha-1) g / (2 (g u + 1)^alpha)` at
    /// lag `u >= 0`.
    pub fn autocorrelation(&self, lag: f64) -> f64 {
        assert!(lag >= 0.0, "lag must be non-negative");
        (self.alpha - 1.0) * self.g / (2.0 * (self.g * lag + 1.0).powf(self.alpha))
    }

    /// Closed-form phase variance
    /// `[g tau (alpha-2) + (1 + g tau)^(2-alpha) - 1] / (g (alpha-2))`.
    ///
    /// For small `tau` this behaves as `(alpha-1) g tau^2 / 2`.
    pub fn beta(&self, tau: f64) -> Result<BetaValue> {
        assert!(tau >= 0.0, "tau must be non-negative");
        if (self.alpha - 2.0).abs() < ALPHA_SINGULAR_TOL {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("{} within {ALPHA_SINGULAR_TOL:.1e} of the singular value 2", self.alpha),
            });
        }
        let gt = self.g * tau;
        let am2 = self.alpha - 2.0;
        let value = (gt * am2 + (1.0 + gt).powf(-am2) - 1.0) / (self.g * am2);
        // roundoff can leave a tiny negative residue at very small tau
        BetaValue::new(value.max(0.0))
    }
}

/// Accumulated phase variance at some dimensionless time. Non-negative and
/// zero at `tau = 0` for every kernel.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BetaValue(f64);

impl BetaValue {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("{value} must be finite and non-negative"),
            });
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// One environment's kernel: either family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKernel {
    PowerLaw(PlKernel),
    FractionalGaussian(FgKernel),
}

impl NoiseKernel {
    /// Closed-form phase variance at `tau`.
    pub fn beta_closed(&self, tau: f64) -> Result<BetaValue> {
        match self {
            NoiseKernel::PowerLaw(k) => k.beta(tau),
            NoiseKernel::FractionalGaussian(k) => Ok(k.beta(tau)),
        }
    }

    /// Two-argument covariance integrand.
    pub fn covariance(&self, t: f64, t_prime: f64) -> f64 {
        match self {
            NoiseKernel::PowerLaw(k) => k.autocorrelation((t - t_prime).abs()),
            NoiseKernel::FractionalGaussian(k) => k.covariance(t, t_prime),
        }
    }

    /// Richardson exponent ladder for the trapezoid error of the double
    /// integral. The `|z - z'|^2H` ridge (and the `z^2H` edges) of the
    /// fractional Gaussian covariance contribute an `h^(1+2H)` term on top
    /// of the smooth `h^2` behaviour, so the ladder depends on `H`.
    fn error_exponents(&self) -> Vec<f64> {
        let mut exps = match self {
            NoiseKernel::PowerLaw(_) => vec![2.0, 3.0, 4.0],
            NoiseKernel::FractionalGaussian(k) => {
                let h2 = 2.0 * k.hurst();
                vec![1.0 + h2, 2.0, 2.0 + h2, 3.0 + h2, 4.0]
            }
        };
        exps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        exps.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        exps
    }
}

impl From<PlKernel> for NoiseKernel {
    fn from(k: PlKernel) -> Self {
        NoiseKernel::PowerLaw(k)
    }
}

impl From<FgKernel> for NoiseKernel {
    fn from(k: FgKernel) -> Self {
        NoiseKernel::FractionalGaussian(k)
    }
}

/// Sum of the two closed-form phase variances; the decay rate seen by the
/// cross coherence between a power-law qubit and a fractional Gaussian one.
pub fn beta_mix(pl: &PlKernel, fg: &FgKernel, tau: f64) -> Result<BetaValue> {
    Ok(BetaValue(pl.beta(tau)?.value() + fg.beta(tau).value()))
}

/// Composite trapezoid rule for `int_0^tx int_0^ty f(z, z') dz dz'` with
/// `n` cells per side. Rows are summed separately to keep the accumulation
/// error small and the evaluation order fixed.
fn trapezoid_2d(f: &dyn Fn(f64, f64) -> f64, tx: f64, ty: f64, n: usize) -> f64 {
    let hx = tx / n as f64;
    let hy = ty / n as f64;
    let mut total = 0.0;
    for i in 0..=n {
        let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
        let z = if i == n { tx } else { i as f64 * hx };
        let mut row = 0.0;
        for j in 0..=n {
            let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
            let zp = if j == n { ty } else { j as f64 * hy };
            row += wj * f(z, zp);
        }
        total += wi * row;
    }
    total * hx * hy
}

/// Trapezoid refinement with generalized Richardson extrapolation over a
/// known exponent ladder. Returns the best diagonal estimate once two
/// successive estimates agree to `QUAD_REL_TOL`, or the last estimate at the
/// cell cap.
fn refine_2d(
    f: &dyn Fn(f64, f64) -> f64,
    tx: f64,
    ty: f64,
    base_resolution: usize,
    exponents: &[f64],
) -> Result<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut n = base_resolution;
    let mut prev_diag: Option<f64> = None;
    loop {
        let t = trapezoid_2d(f, tx, ty, n);
        if !t.is_finite() {
            return Err(Error::QuadratureNonFinite { tau: tx.max(ty) });
        }
        let mut row = vec![t];
        for (k, p) in exponents.iter().enumerate() {
            if k >= rows.len() {
                break;
            }
            let prev = &rows[rows.len() - 1];
            if k >= prev.len() {
                break;
            }
            let factor = 2f64.powf(*p);
            let next = row[k] + (row[k] - prev[k]) / (factor - 1.0);
            row.push(next);
        }
        let diag = *row.last().unwrap();
        rows.push(row);
        if let Some(prev) = prev_diag {
            if (diag - prev).abs() <= QUAD_REL_TOL * diag.abs().max(1e-12) {
                return Ok(diag);
            }
        }
        prev_diag = Some(diag);
        if n * n >= MAX_QUAD_CELLS / 4 {
            // next doubling would blow the cell cap; settle for the best estimate
            return Ok(diag);
        }
        n *= 2;
    }
}

/// Quadrature oracle for the double-integral definition of beta.
///
/// `resolution` is the coarsest trapezoid level; refinement then doubles it
/// until the extrapolated value stabilizes to [`QUAD_REL_TOL`]. The default
/// base of 64 reaches the target for every kernel in the supported
/// parameter ranges.
pub fn beta_quadrature(kernel: &NoiseKernel, tau: f64, resolution: usize) -> Result<BetaValue> {
    assert!(tau >= 0.0, "tau must be non-negative");
    if resolution < MIN_QUAD_RESOLUTION {
        return Err(Error::ResolutionTooSmall {
            got: resolution,
            min: MIN_QUAD_RESOLUTION,
        });
    }
    if tau == 0.0 {
        return Ok(BetaValue(0.0));
    }
    let f = |z: f64, zp: f64| kernel.covariance(z, zp);
    let value = refine_2d(&f, tau, tau, resolution, &kernel.error_exponents())?;
    BetaValue::new(value.max(0.0))
}

/// Symmetric matrix of integrated covariances over a strictly ascending
/// time grid: entry (i, j) is the covariance of the phases accumulated up
/// to `grid[i]` and `grid[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceGrid {
    dim: usize,
    /// Row-major, symmetric.
    data: Vec<f64>,
}

impl CovarianceGrid {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::ShapeMismatch {
                    context: "covariance grid must be square".into(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }
}

/// Builds the phase covariance matrix over a time grid by quadrature.
pub fn phase_covariance_grid(kernel: &NoiseKernel, grid: &[f64]) -> Result<CovarianceGrid> {
    if grid.is_empty() || grid[0] < 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadTimeGrid);
    }
    let m = grid.len();
    let f = |z: f64, zp: f64| kernel.covariance(z, zp);
    let exponents = kernel.error_exponents();
    let mut rows = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let value = if grid[i] == 0.0 || grid[j] == 0.0 {
                0.0
            } else {
                refine_2d(&f, grid[i], grid[j], 64, &exponents)?
            };
            rows[i][j] = value;
            rows[j][i] = value;
        }
    }
    CovarianceGrid::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fg(h: f64) -> FgKernel {
        FgKernel::new(h).unwrap()
    }

    fn pl(g: f64, alpha: f64) -> PlKernel {
        PlKernel::new(g, alpha).unwrap()
    }

    #[test]
    fn fg_covariance_vanishes_at_zero_time() {
        assert_eq!(fg(0.5).covariance(0.0, 0.7), 0.0);
    }

    #[test]
    fn fg_covariance_diagonal_and_symmetry() {
        let k = fg(0.5);
        assert!((k.covariance(1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((k.covariance(2.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((k.covariance(2.0, 1.0) - k.covariance(1.0, 2.0)).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "non-negative")]
    fn fg_covariance_rejects_negative_time() {
        fg(0.5).covariance(-1.0, 0.5);
    }

    #[test]
    fn fg_kernel_rejects_bad_hurst() {
        assert!(FgKernel::new(0.0).is_err());
        assert!(FgKernel::new(1.0).is_err());
        assert!(FgKernel::new(1.5).is_err());
    }

    #[test]
    fn pl_autocorrelation_values() {
        let k = pl(1.0, 3.0);
        assert!((k.autocorrelation(0.0) - 1.0).abs() < 1e-15);
        assert!((k.autocorrelation(1.0) - 0.125).abs() < 1e-15);
        assert!(k.autocorrelation(1e9) < 1e-15);
    }

    #[test]
    fn pl_kernel_rejects_bad_parameters() {
        assert!(PlKernel::new(0.0, 3.0).is_err());
        assert!(PlKernel::new(-1.0, 3.0).is_err());
        assert!(PlKernel::new(1.0, 2.0).is_err());
        assert!(PlKernel::new(1.0, 1.9).is_err());
    }

    #[test]
    fn beta_fg_closed_values() {
        assert_eq!(fg(0.3).beta(0.0).value(), 0.0);
        assert!((fg(0.5).beta(1.0).value() - 1.0 / 3.0).abs() < 1e-15);
        assert!((fg(0.5).beta(2.0).value() - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn beta_pl_closed_values() {
        assert_eq!(pl(1.0, 3.0).beta(0.0).unwrap().value(), 0.0);
        assert!((pl(1.0, 3.0).beta(1.0).unwrap().value() - 0.5).abs() < 1e-15);
        let small = pl(1.0, 3.0).beta(0.01).unwrap().value();
        assert!((small - 1.0e-4).abs() / 1.0e-4 < 0.02);
    }

    #[test]
    fn beta_pl_small_tau_law() {
        for &(g, alpha) in &[(1e-2, 2.1), (1.0, 3.0), (0.1, 3.0)] {
            let k = pl(g, alpha);
            let tau = 1e-3;
            let ratio = k.beta(tau).unwrap().value() / (tau * tau);
            let expected = (alpha - 1.0) * g / 2.0;
            assert!(
                (ratio - expected).abs() / expected < 0.01,
                "g={g} alpha={alpha}: {ratio} vs {expected}"
            );
        }
    }

    #[test]
    fn beta_mix_is_component_sum() {
        let p = pl(1.0, 3.0);
        let f = fg(0.5);
        assert_eq!(beta_mix(&p, &f, 0.0).unwrap().value(), 0.0);
        let m1 = beta_mix(&p, &f, 1.0).unwrap().value();
        assert!((m1 - (0.5 + 1.0 / 3.0)).abs() < 1e-14);
        let m2 = beta_mix(&p, &f, 2.0).unwrap().value();
        assert!((m2 - (p.beta(2.0).unwrap().value() + 8.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_constant_kernel_gives_square_area() {
        let f = |_: f64, _: f64| 1.0;
        assert!((trapezoid_2d(&f, 2.0, 2.0, 16) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_matches_fg_closed_form() {
        let k = NoiseKernel::from(fg(0.5));
        let q = beta_quadrature(&k, 1.0, 64).unwrap().value();
        assert!((q - 1.0 / 3.0).abs() / (1.0 / 3.0) <= 1e-6);
    }

    #[test]
    fn quadrature_matches_pl_closed_form() {
        let k = NoiseKernel::from(pl(1.0, 3.0));
        let q = beta_quadrature(&k, 1.0, 64).unwrap().value();
        assert!((q - 0.5).abs() / 0.5 <= 1e-6);
    }

    #[test]
    fn quadrature_rejects_small_resolution() {
        let k = NoiseKernel::from(fg(0.5));
        assert!(matches!(
            beta_quadrature(&k, 1.0, 8),
            Err(Error::ResolutionTooSmall { .. })
        ));
    }

    #[test]
    fn oracle_equivalence_over_parameter_grid() {
        // log-spaced taus in [1e-2, 10]
        let taus: Vec<f64> = (0..13)
            .map(|i| 10f64.powf(-2.0 + 3.0 * i as f64 / 12.0))
            .collect();
        let mut kernels: Vec<NoiseKernel> = vec![
            fg(0.1).into(),
            fg(0.5).into(),
            fg(0.9).into(),
            pl(1e-2, 2.1).into(),
            pl(1.0, 3.0).into(),
            pl(0.1, 3.0).into(),
        ];
        for kernel in kernels.drain(..) {
            for &tau in &taus {
                let closed = kernel.beta_closed(tau).unwrap().value();
                let quad = beta_quadrature(&kernel, tau, 64).unwrap().value();
                let rel = (quad - closed).abs() / closed.max(1e-12);
                assert!(rel <= 1e-6, "{kernel:?} tau={tau}: rel={rel:.3e}");
            }
        }
    }

    #[test]
    fn covariance_grid_single_point_is_beta() {
        let k = NoiseKernel::from(fg(0.5));
        let grid = phase_covariance_grid(&k, &[1.0]).unwrap();
        assert_eq!(grid.dim(), 1);
        assert!((grid.get(0, 0) - 1.0 / 3.0).abs() / (1.0 / 3.0) < 1e-6);
    }

    #[test]
    fn covariance_grid_diagonal_matches_quadrature() {
        let k = NoiseKernel::from(fg(0.5));
        let times = [1.0, 2.0];
        let grid = phase_covariance_grid(&k, &times).unwrap();
        assert!((grid.get(0, 0) - 1.0 / 3.0).abs() < 1e-6);
        assert!((grid.get(1, 1) - 8.0 / 3.0).abs() < 1e-5);
        for (i, &t) in times.iter().enumerate() {
            let q = beta_quadrature(&k, t, 64).unwrap().value();
            assert!((grid.get(i, i) - q).abs() <= 1e-9 * q.max(1.0));
        }
        assert_eq!(grid.get(0, 1), grid.get(1, 0));
    }

    #[test]
    fn covariance_grid_rejects_unordered_grid() {
        let k = NoiseKernel::from(fg(0.5));
        assert!(matches!(
            phase_covariance_grid(&k, &[2.0, 1.0]),
            Err(Error::BadTimeGrid)
        ));
    }

    proptest! {
        #[test]
        fn beta_monotone_in_tau(
            h in 0.05f64..0.95,
            g in 1e-3f64..10.0,
            alpha in 2.05f64..10.0,
            t1 in 0.0f64..5.0,
            dt in 1e-6f64..5.0,
        ) {
            let t2 = t1 + dt;
            let f = fg(h);
            prop_assert!(f.beta(t1).value() <= f.beta(t2).value());
            let p = pl(g, alpha);
            prop_assert!(p.beta(t1).unwrap().value() <= p.beta(t2).unwrap().value() + 1e-15);
        }

        #[test]
        fn fg_beta_self_similarity(
            h in 0.05f64..0.95,
            tau in 1e-3f64..10.0,
            scale in 0.1f64..10.0,
        ) {
            let k = fg(h);
            let lhs = k.beta(scale * tau).value();
            let rhs = scale.powf(2.0 * h + 2.0) * k.beta(tau).value();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-12));
        }
    }
}
