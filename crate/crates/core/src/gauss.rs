//! Normalized quadratic-Gaussian relay model.
//!
//! Source and relay side information are zero-mean, unit-variance and
//! jointly Gaussian with correlation `rho`. The channel is
//!
//! ```text
//! Y1 = h2 X1 + Z1            (relay)
//! Y  = h1 X1 + h3 X2 + Z     (destination)
//! ```
//!
//! with `|h1|^2 = 1`, `|h2|^2 = alpha`, `|h3|^2 = beta`, unit noise variances
//! and one channel use per source sample. Every rate expression compares two
//! `0.5 * ln(..)` terms, so logs are natural throughout.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

/// Symmetry and eigenvalue tolerance for covariance validation, relative to
/// the largest diagonal entry (floored at 1).
const PSD_TOL: f64 = 1e-9;
/// Singular values below this fraction of the largest are treated as zero.
const PINV_CUTOFF: f64 = 1e-12;

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Received SNRs of the three links, in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSnrs {
    /// Source to destination, `P1`.
    pub sd_db: f64,
    /// Source to relay, `alpha * P1`.
    pub sr_db: f64,
    /// Relay to destination, `beta * P2`.
    pub rd_db: f64,
}

/// All parameters of the Gaussian problem.
///
/// Source variance, noise variances and `|h1|^2` are fixed to one by
/// normalization and are not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussScenario {
    p1: f64,
    p2: f64,
    alpha: f64,
    beta: f64,
    rho: f64,
}

impl GaussScenario {
    /// Channel uses per source sample.
    pub const RATE: f64 = 1.0;

    pub fn new(p1: f64, p2: f64, alpha: f64, beta: f64, rho: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("alpha", alpha), ("beta", beta)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::InvalidScenario(format!(
                "rho must lie in [-1, 1], got {rho}"
            )));
        }
        Ok(Self { p1, p2, alpha, beta, rho })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn b(&self) -> f64 {
        Self::RATE
    }

    /// `1 - rho^2`, the variance of the source given the relay side information.
    pub fn residual_variance(&self) -> f64 {
        (1.0 - self.rho * self.rho).max(0.0)
    }

    /// Received SNR on the source-relay link, `alpha * P1`.
    pub fn sr_snr(&self) -> f64 {
        self.alpha * self.p1
    }

    /// Received SNR on the relay-destination link, `beta * P2`.
    pub fn rd_snr(&self) -> f64 {
        self.beta * self.p2
    }

    /// The same channel with a different source correlation.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.p1, self.p2, self.alpha, self.beta, rho)
    }
}

/// Builds a scenario from link SNRs.
///
/// `P1` carries the S-D SNR and `alpha` the S-R/S-D ratio. Every formula
/// depends on the relay power only through `beta * P2`, so `P2` is pinned to
/// one and `beta` takes the R-D SNR.
pub fn scenario_from_snrs(snrs: LinkSnrs, rho: f64) -> Result<GaussScenario> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidScenario(format!(
            "rho must lie in [-1, 1], got {rho}"
        )));
    }
    if snrs.sd_db == f64::NEG_INFINITY {
        return Err(Error::DegenerateScenario(
            "S-D SNR of -inf dB leaves alpha undefined".into(),
        ));
    }
    for (name, v) in [("sd_db", snrs.sd_db), ("sr_db", snrs.sr_db), ("rd_db", snrs.rd_db)] {
        if !v.is_finite() {
            return Err(Error::InvalidScenario(format!("{name} must be finite, got {v}")));
        }
    }
    let p1 = db_to_linear(snrs.sd_db);
    let alpha = db_to_linear(snrs.sr_db) / p1;
    let p2 = 1.0;
    let beta = db_to_linear(snrs.rd_db) / p2;
    GaussScenario::new(p1, p2, alpha, beta, rho)
}

/// `Var(S1 | S2 + V)` for unit-variance `S1, S2` with correlation `rho` and
/// independent noise `V` of variance `noise_var`.
///
/// `noise_var = 0` gives `1 - rho^2`; `noise_var = inf` gives 1.
pub fn conditional_variance_given_sideinfo(rho: f64, noise_var: f64) -> f64 {
    if noise_var.is_infinite() {
        return 1.0;
    }
    1.0 - rho * rho / (1.0 + noise_var)
}

/// A zero-mean Gaussian vector described by its covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGaussian {
    cov: DMatrix<f64>,
}

impl JointGaussian {
    pub fn new(cov: DMatrix<f64>) -> Result<Self> {
        if !cov.is_square() {
            return Err(Error::InvalidModel(format!(
                "covariance must be square, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("covariance has non-finite entries".into()));
        }
        let scale = cov.diagonal().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = PSD_TOL * scale;
        let n = cov.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if (cov[(i, j)] - cov[(j, i)]).abs() > tol {
                    return Err(Error::InvalidModel(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if n > 0 {
            let min_eig = SymmetricEigen::new(cov.clone()).eigenvalues.min();
            if min_eig < -tol {
                return Err(Error::InvalidModel(format!(
                    "covariance is not positive semidefinite (eigenvalue {min_eig:e})"
                )));
            }
        }
        Ok(Self { cov })
    }

    /// Covariance of `L E` for a standard normal vector `E`, i.e. `L L^T`.
    ///
    /// Row `i` of `loadings` expresses variable `i` in terms of independent
    /// unit-variance components.
    pub fn from_loadings(loadings: &DMatrix<f64>) -> Result<Self> {
        let cov = loadings * loadings.transpose();
        Self::new((&cov + cov.transpose()) * 0.5)
    }

    pub fn dim(&self) -> usize {
        self.cov.nrows()
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `Var(target | observed)`, using a pseudo-inverse when the observed block
    /// is singular. The result is clamped to `[0, Var(target)]`.
    ///
    /// Observed variables with zero variance carry no information and are
    /// dropped. The rest are rescaled to unit variance before a symmetric
    /// eigendecomposition, so badly scaled blocks stay well conditioned.
    pub fn conditional_variance(&self, target: usize, observed: &[usize]) -> Result<f64> {
        self.check_indices(target, observed)?;
        let prior = self.cov[(target, target)];
        let obs: Vec<usize> = observed.iter().copied().filter(|&o| self.cov[(o, o)] > 0.0).collect();
        if obs.is_empty() || prior <= 0.0 {
            return Ok(prior);
        }
        let k = obs.len();
        let scale: Vec<f64> = obs.iter().map(|&o| self.cov[(o, o)].sqrt().recip()).collect();
        let corr = DMatrix::from_fn(k, k, |i, j| self.cov[(obs[i], obs[j])] * scale[i] * scale[j]);
        let cross: Vec<f64> = (0..k).map(|i| self.cov[(target, obs[i])] * scale[i]).collect();
        let eig = SymmetricEigen::new(corr);
        let largest = eig.eigenvalues.max();
        let explained: f64 = (0..k)
            .filter(|&m| eig.eigenvalues[m] > PINV_CUTOFF * largest)
            .map(|m| {
                let proj: f64 = (0..k).map(|i| eig.eigenvectors[(i, m)] * cross[i]).sum();
                proj * proj / eig.eigenvalues[m]
            })
            .sum();
        Ok((prior - explained).clamp(0.0, prior))
    }

    /// `I(A; B | C)` in nats for a scalar `A`.
    ///
    /// Zero when `A` is already determined by `C`; infinite when `B` pins
    /// down an otherwise uncertain `A`.
    pub fn mutual_information(&self, a: usize, b: &[usize], c: &[usize]) -> Result<f64> {
        let given_c = self.conditional_variance(a, c)?;
        let mut bc = c.to_vec();
        bc.extend_from_slice(b);
        let given_bc = self.conditional_variance(a, &bc)?;
        if given_c <= 0.0 {
            return Ok(0.0);
        }
        if given_bc <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok((0.5 * (given_c / given_bc).ln()).max(0.0))
    }

    fn check_indices(&self, target: usize, observed: &[usize]) -> Result<()> {
        let n = self.dim();
        if target >= n || observed.iter().any(|&o| o >= n) {
            return Err(Error::InvalidModel(format!("index out of range for dimension {n}")));
        }
        if observed.contains(&target) {
            return Err(Error::InvalidModel(format!(
                "target {target} is also observed"
            )));
        }
        Ok(())
    }
}

/// A Gaussian vector plus the estimation question: which component to
/// estimate from which others.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLinearModel {
    joint: JointGaussian,
    target: usize,
    observed: Vec<usize>,
}

impl GaussianLinearModel {
    pub fn new(cov: DMatrix<f64>, target: usize, observed: Vec<usize>) -> Result<Self> {
        Self::from_joint(JointGaussian::new(cov)?, target, observed)
    }

    pub fn from_joint(joint: JointGaussian, target: usize, observed: Vec<usize>) -> Result<Self> {
        joint.check_indices(target, &observed)?;
        Ok(Self { joint, target, observed })
    }

    pub fn dim(&self) -> usize {
        self.joint.dim()
    }

    pub fn joint(&self) -> &JointGaussian {
        &self.joint
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn observed(&self) -> &[usize] {
        &self.observed
    }
}

/// Minimum mean squared error of the target given the observed components.
pub fn mmse_variance(model: &GaussianLinearModel) -> f64 {
    model
        .joint
        .conditional_variance(model.target, &model.observed)
        .expect("indices validated at construction")
}
