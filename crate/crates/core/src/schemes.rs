//! Distortion of the cut-set lower bound and of every achievable scheme in
//! the Gaussian model.
//!
//! Each layered scheme has a fixed-parameter evaluator (`*_at`) and an
//! optimized form that searches its parameters over the unit box. The
//! optimized forms also evaluate the faces of their box that coincide with
//! simpler schemes, so a scheme with a larger parameter space never reports
//! a worse distortion than the schemes it contains.
//!
//! Parameters:
//! - `xi`: correlation between the source and relay jDF channel codewords.
//! - `gamma`: share of relay power spent on the jDF layer; the rest carries
//!   a quantized copy of the relay side information.
//! - `theta`: share of source power spent on the jDF layer; the rest is a
//!   direct layer to the destination.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::gauss::{GaussScenario, JointGaussian};
use crate::optimize::{golden_section, minimize_box, BoxSearchConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    CutSet,
    DirectTx,
    ClassicDF,
    ClassicCF,
    UncodedSourceCoop,
    JDF,
    HJDF,
    PJDF,
    HPJDF,
}

impl SchemeId {
    pub const ALL: [SchemeId; 9] = [
        SchemeId::CutSet,
        SchemeId::DirectTx,
        SchemeId::ClassicDF,
        SchemeId::ClassicCF,
        SchemeId::UncodedSourceCoop,
        SchemeId::JDF,
        SchemeId::HJDF,
        SchemeId::PJDF,
        SchemeId::HPJDF,
    ];

    pub fn token(self) -> &'static str {
        match self {
            SchemeId::CutSet => "cutset",
            SchemeId::DirectTx => "dt",
            SchemeId::ClassicDF => "df",
            SchemeId::ClassicCF => "cf",
            SchemeId::UncodedSourceCoop => "uncoded_sc",
            SchemeId::JDF => "jdf",
            SchemeId::HJDF => "hjdf",
            SchemeId::PJDF => "pjdf",
            SchemeId::HPJDF => "hpjdf",
        }
    }

    /// Whether the scheme is achievable (everything but the cut-set bound).
    pub fn is_achievable(self) -> bool {
        self != SchemeId::CutSet
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.token() == s)
            .ok_or_else(|| Error::Usage(format!("unknown scheme '{s}'")))
    }
}

/// Optimized internal parameters reported with a distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Xi,
    Gamma,
    Theta,
    /// Quantization noise of the single jDF description.
    SigmaW2,
    /// Quantization noise of the finest source description.
    SigmaW1Sq,
    /// Quantization noise of the relay side-information description.
    SigmaV2,
    /// Total quantization noise of the jDF layer in the partial schemes.
    SigmaT2,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Xi => "xi",
            Param::Gamma => "gamma",
            Param::Theta => "theta",
            Param::SigmaW2 => "sigma_w2",
            Param::SigmaW1Sq => "sigma_w1_2",
            Param::SigmaV2 => "sigma_v2",
            Param::SigmaT2 => "sigma_t2",
        }
    }
}

/// Why a scheme reported the trivial distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `alpha * P1 = 0` and the relay side information is imperfect, so the
    /// relay can never decode.
    RelayLinkDead,
}

impl Degeneracy {
    pub fn name(self) -> &'static str {
        match self {
            Degeneracy::RelayLinkDead => "relay-link-dead",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub scheme: SchemeId,
    /// Mean squared error at the destination, in `(0, 1]`.
    pub distortion: f64,
    pub params: BTreeMap<Param, f64>,
    pub degeneracy: Option<Degeneracy>,
}

impl EvalResult {
    fn new(scheme: SchemeId, point: SchemePoint) -> Self {
        Self {
            scheme,
            distortion: point.distortion,
            params: point.params.into_iter().collect(),
            degeneracy: None,
        }
    }

    pub fn distortion_db(&self) -> f64 {
        10.0 * self.distortion.log10()
    }

    pub fn param(&self, p: Param) -> Option<f64> {
        self.params.get(&p).copied()
    }
}

/// Distortion of a scheme at fixed internal parameters, with the resulting
/// quantization noise variances.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemePoint {
    pub distortion: f64,
    pub params: Vec<(Param, f64)>,
}

impl SchemePoint {
    pub fn param(&self, p: Param) -> Option<f64> {
        self.params.iter().find(|(k, _)| *k == p).map(|(_, v)| *v)
    }
}

/// Evaluates any scheme with the given search budget.
pub fn evaluate(scheme: SchemeId, s: &GaussScenario, cfg: &BoxSearchConfig) -> Result<EvalResult> {
    match scheme {
        SchemeId::CutSet => Ok(cutset_lower_bound(s)),
        SchemeId::DirectTx => Ok(direct_transmission(s)),
        SchemeId::ClassicDF => classic_df_with(s, cfg),
        SchemeId::ClassicCF => Ok(classic_cf(s)),
        SchemeId::UncodedSourceCoop => uncoded_source_coop(s),
        SchemeId::JDF => jdf_with(s, cfg),
        SchemeId::HJDF => hjdf_with(s, cfg),
        SchemeId::PJDF => pjdf_with(s, cfg),
        SchemeId::HPJDF => hpjdf_with(s, cfg),
    }
}

/// `num / den` for non-negative operands with `0 / 0 = 0` and `x / 0 = inf`.
///
/// A zero numerator means the constraint asks for no information at all.
fn ratio(num: f64, den: f64) -> f64 {
    if num <= 0.0 {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// `Var(S1 | S1 + W)` for unit-variance `S1` and noise variance `sigma2`.
fn mmse_from_noise(sigma2: f64) -> f64 {
    1.0 / (1.0 + 1.0 / sigma2)
}

/// Minimizes `max(rising(x), falling(x))` on `[0, 1]` where `rising` is
/// non-decreasing and `falling` is non-increasing.
fn minimax_crossing(rising: impl Fn(f64) -> f64, falling: impl Fn(f64) -> f64) -> (f64, f64) {
    let g = |x: f64| rising(x).max(falling(x));
    if rising(0.0) >= falling(0.0) {
        return (0.0, g(0.0));
    }
    if rising(1.0) <= falling(1.0) {
        return (1.0, g(1.0));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rising(mid) < falling(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if g(lo) <= g(hi) {
        (lo, g(lo))
    } else {
        (hi, g(hi))
    }
}

/// Joint source-channel cut-set lower bound on the achievable distortion.
///
/// The broadcast cut gives `(1 - rho^2) / (1 + (1 - xi^2)(1 + alpha) P1)`,
/// the multiple-access cut `1 / (1 + P1 + beta P2 + 2 xi sqrt(beta P1 P2))`.
/// The first is non-decreasing and the second non-increasing in `xi`, so the
/// minimum of their maximum is found by bisection on the crossing.
pub fn cutset_lower_bound(s: &GaussScenario) -> EvalResult {
    let (p1, rd, res) = (s.p1(), s.rd_snr(), s.residual_variance());
    let bc = |xi: f64| res / (1.0 + (1.0 - xi * xi) * (1.0 + s.alpha()) * p1);
    let mac = |xi: f64| 1.0 / (1.0 + p1 + rd + 2.0 * xi * (p1 * rd).sqrt());
    let (xi, d) = minimax_crossing(bc, mac);
    EvalResult::new(SchemeId::CutSet, SchemePoint { distortion: d, params: vec![(Param::Xi, xi)] })
}

/// Point-to-point transmission with the relay silent: `1 / (1 + P1)`.
pub fn direct_transmission(s: &GaussScenario) -> EvalResult {
    EvalResult::new(
        SchemeId::DirectTx,
        SchemePoint { distortion: 1.0 / (1.0 + s.p1()), params: vec![] },
    )
}

pub fn jdf_point(s: &GaussScenario, xi: f64) -> SchemePoint {
    let (p1, rd) = (s.p1(), s.rd_snr());
    // I(S1; Z | S2) <= I(X1; Y1 | X2)
    let relay = ratio(s.residual_variance(), (1.0 - xi * xi) * s.sr_snr());
    // I(S1; Z) <= I(X1, X2; Y)
    let dest = ratio(1.0, p1 + rd + 2.0 * xi * (p1 * rd).sqrt());
    let sigma_w2 = relay.max(dest);
    SchemePoint {
        distortion: mmse_from_noise(sigma_w2),
        params: vec![(Param::Xi, xi), (Param::SigmaW2, sigma_w2)],
    }
}

/// jDF distortion at a fixed codeword correlation `xi`.
pub fn jdf_at(s: &GaussScenario, xi: f64) -> f64 {
    jdf_point(s, xi).distortion
}

pub fn jdf(s: &GaussScenario) -> Result<EvalResult> {
    jdf_with(s, &BoxSearchConfig::default())
}

/// jDF minimized over `xi`.
///
/// The objective is the maximum of a rising and a falling branch, so the
/// grid incumbent is polished with a golden-section search.
pub fn jdf_with(s: &GaussScenario, cfg: &BoxSearchConfig) -> Result<EvalResult> {
    let grid = minimize_box(|x: &[f64; 1]| jdf_at(s, x[0]), cfg)?;
    let h = 2.0 * cfg.final_spacing();
    let x0 = grid.argmin[0];
    let (xp, dp) = golden_section(|x| jdf_at(s, x), (x0 - h).max(0.0), (x0 + h).min(1.0), 1e-15)?;
    let xi = if dp < grid.min { xp } else { x0 };

    let mut out = EvalResult::new(SchemeId::JDF, jdf_point(s, xi));
    if s.sr_snr() <= 0.0 && s.residual_variance() > 0.0 {
        out.degeneracy = Some(Degeneracy::RelayLinkDead);
    }
    Ok(out)
}

/// Classical decode-and-forward: jDF with the relay side information ignored.
pub fn classic_df(s: &GaussScenario) -> Result<EvalResult> {
    classic_df_with(s, &BoxSearchConfig::default())
}

pub fn classic_df_with(s: &GaussScenario, cfg: &BoxSearchConfig) -> Result<EvalResult> {
    let mut out = jdf_with(&s.with_rho(0.0)?, cfg)?;
    out.scheme = SchemeId::ClassicDF;
    Ok(out)
}

/// Gaussian compress-and-forward with Wyner-Ziv binning against the direct
/// observation and independent inputs.
///
/// The relay quantizes `Y1` with noise `(1 + P1 + alpha P1) / (beta P2)`,
/// which exhausts the relay-destination rate.
pub fn classic_cf(s: &GaussScenario) -> EvalResult {
    let (p1, sr, rd) = (s.p1(), s.sr_snr(), s.rd_snr());
    let sigma_q2 = ratio(1.0 + p1 + sr, rd);
    let snr = p1 + sr / (1.0 + sigma_q2);
    EvalResult::new(SchemeId::ClassicCF, SchemePoint { distortion: 1.0 / (1.0 + snr), params: vec![] })
}

/// Uncoded source cooperation: the source sends `sqrt(P1) S1`, the relay
/// sends `±sqrt(P2) S2` (sign matching `rho`) and the destination forms the
/// MMSE estimate of `S1` from the superposition.
pub fn uncoded_source_coop(s: &GaussScenario) -> Result<EvalResult> {
    let rho = s.rho();
    let relay_gain = rho.signum() * s.rd_snr().sqrt();
    let relay_gain = if rho == 0.0 { s.rd_snr().sqrt() } else { relay_gain };
    let a = s.p1().sqrt();
    // Components: S1 innovation, S2 innovation, destination noise.
    let loadings = DMatrix::from_row_slice(
        2,
        3,
        &[
            1.0,
            0.0,
            0.0,
            a + relay_gain * rho,
            relay_gain * s.residual_variance().sqrt(),
            1.0,
        ],
    );
    let joint = JointGaussian::from_loadings(&loadings)?;
    let d = joint.conditional_variance(0, &[1])?;
    Ok(EvalResult::new(SchemeId::UncodedSourceCoop, SchemePoint { distortion: d, params: vec![] }))
}

/// Quantization noise of the relay's side-information description and the
/// resulting prior `Var(S1 | Zh)` at the destination.
///
/// The description is decoded first with every other codeword, including the
/// coherent jDF pair, treated as noise.
fn side_description(s: &GaussScenario, gamma: f64, coherent: f64, jdf_relay_snr: f64) -> (f64, f64) {
    let side_snr = s.beta() * (1.0 - gamma) * s.p2();
    if side_snr <= 0.0 {
        return (f64::INFINITY, 1.0);
    }
    let sigma_v2 = (1.0 + s.p1() + jdf_relay_snr + coherent) / side_snr;
    let prior = (s.residual_variance() + sigma_v2) / (1.0 + sigma_v2);
    (sigma_v2, prior)
}

pub fn hjdf_point(s: &GaussScenario, gamma: f64, xi: f64) -> SchemePoint {
    let p1 = s.p1();
    let jdf_relay = s.beta() * gamma * s.p2();
    let coherent = 2.0 * xi * (p1 * jdf_relay).sqrt();
    let (sigma_v2, prior) = side_description(s, gamma, coherent, jdf_relay);

    let relay = ratio(s.residual_variance(), (1.0 - xi * xi) * s.sr_snr());
    // I(S1; Z | Zh) <= I(X1, X2'; Y | side codeword)
    let dest = ratio(prior, p1 + jdf_relay + coherent);
    let sigma_w1_2 = relay.max(dest);
    let distortion = 1.0 / (1.0 / prior + 1.0 / sigma_w1_2);
    SchemePoint {
        distortion,
        params: vec![
            (Param::Gamma, gamma),
            (Param::Xi, xi),
            (Param::SigmaV2, sigma_v2),
            (Param::SigmaW1Sq, sigma_w1_2),
        ],
    }
}

/// hjDF distortion at fixed relay power split `gamma` and correlation `xi`.
pub fn hjdf_at(s: &GaussScenario, gamma: f64, xi: f64) -> f64 {
    hjdf_point(s, gamma, xi).distortion
}

pub fn hjdf(s: &GaussScenario) -> Result<EvalResult> {
    hjdf_with(s, &BoxSearchConfig::default())
}

pub fn hjdf_with(s: &GaussScenario, cfg: &BoxSearchConfig) -> Result<EvalResult> {
    let grid = minimize_box(|x: &[f64; 2]| hjdf_at(s, x[0], x[1]), cfg)?;
    let mut best = hjdf_point(s, grid.argmin[0], grid.argmin[1]);

    let face = jdf_with(s, cfg)?;
    if face.distortion < best.distortion {
        best = hjdf_point(s, 1.0, face.param(Param::Xi).unwrap_or(0.0));
    }
    Ok(EvalResult::new(SchemeId::HJDF, best))
}

pub fn pjdf_point(s: &GaussScenario, theta: f64, xi: f64) -> SchemePoint {
    let (p1, rd) = (s.p1(), s.rd_snr());
    let direct_gain = 1.0 + (1.0 - theta) * p1;
    let sigma_t2 = if theta <= 0.0 {
        // No source power on the jDF layer: pure direct transmission.
        f64::INFINITY
    } else {
        let jdf_p1 = theta * p1;
        // Relay decodes the jDF layer treating the direct layer as noise.
        let relay = ratio(
            s.residual_variance() * (1.0 + s.alpha() * (1.0 - theta) * p1),
            (1.0 - xi * xi) * (s.alpha() * jdf_p1),
        );
        let dest = ratio(direct_gain, jdf_p1 + rd + 2.0 * xi * (jdf_p1 * rd).sqrt());
        relay.max(dest)
    };
    // Direct layer refines the jDF description up to the direct-link rate.
    let inv_d = direct_gain * (1.0 + 1.0 / sigma_t2);
    SchemePoint {
        distortion: 1.0 / inv_d,
        params: vec![
            (Param::Theta, theta),
            (Param::Xi, xi),
            (Param::SigmaT2, sigma_t2),
            (Param::SigmaW1Sq, 1.0 / (inv_d - 1.0)),
        ],
    }
}

/// pjDF distortion at fixed source power split `theta` and correlation `xi`.
pub fn pjdf_at(s: &GaussScenario, theta: f64, xi: f64) -> f64 {
    pjdf_point(s, theta, xi).distortion
}

pub fn pjdf(s: &GaussScenario) -> Result<EvalResult> {
    pjdf_with(s, &BoxSearchConfig::default())
}

pub fn pjdf_with(s: &GaussScenario, cfg: &BoxSearchConfig) -> Result<EvalResult> {
    let grid = minimize_box(|x: &[f64; 2]| pjdf_at(s, x[0], x[1]), cfg)?;
    let mut best = pjdf_point(s, grid.argmin[0], grid.argmin[1]);

    let face = jdf_with(s, cfg)?;
    if face.distortion < best.distortion {
        best = pjdf_point(s, 1.0, face.param(Param::Xi).unwrap_or(0.0));
    }
    let direct = pjdf_point(s, 0.0, 0.0);
    if direct.distortion < best.distortion {
        best = direct;
    }
    Ok(EvalResult::new(SchemeId::PJDF, best))
}

pub fn hpjdf_point(s: &GaussScenario, theta: f64, gamma: f64, xi: f64) -> SchemePoint {
    let p1 = s.p1();
    let jdf_p1 = theta * p1;
    let jdf_relay = s.beta() * gamma * s.p2();
    let coherent = 2.0 * xi * (jdf_p1 * jdf_relay).sqrt();
    let (sigma_v2, prior) = side_description(s, gamma, coherent, jdf_relay);
    let direct_gain = 1.0 + (1.0 - theta) * p1;

    let sigma_t2 = if theta <= 0.0 {
        f64::INFINITY
    } else {
        let relay = ratio(
            s.residual_variance() * (1.0 + s.alpha() * (1.0 - theta) * p1),
            (1.0 - xi * xi) * (s.alpha() * jdf_p1),
        );
        // jDF layer decoded after the side description, with Zh as decoder
        // side information and the direct layer as noise.
        let dest = ratio(prior * direct_gain, jdf_p1 + jdf_relay + coherent);
        relay.max(dest)
    };
    // Direct layer: Wyner-Ziv refinement given both the jDF description and Zh.
    let inv_d = direct_gain * (1.0 / prior + 1.0 / sigma_t2);
    let sigma_w1_2 = 1.0 / (inv_d - 1.0 / prior);
    SchemePoint {
        distortion: 1.0 / inv_d,
        params: vec![
            (Param::Theta, theta),
            (Param::Gamma, gamma),
            (Param::Xi, xi),
            (Param::SigmaV2, sigma_v2),
            (Param::SigmaT2, sigma_t2),
            (Param::SigmaW1Sq, sigma_w1_2),
        ],
    }
}

/// hpjDF distortion at fixed source split `theta`, relay split `gamma` and
/// correlation `xi`.
pub fn hpjdf_at(s: &GaussScenario, theta: f64, gamma: f64, xi: f64) -> f64 {
    hpjdf_point(s, theta, gamma, xi).distortion
}

pub fn hpjdf(s: &GaussScenario) -> Result<EvalResult> {
    hpjdf_with(s, &BoxSearchConfig::default())
}

pub fn hpjdf_with(s: &GaussScenario, cfg: &BoxSearchConfig) -> Result<EvalResult> {
    let grid = minimize_box(|x: &[f64; 3]| hpjdf_at(s, x[0], x[1], x[2]), cfg)?;
    let mut best = hpjdf_point(s, grid.argmin[0], grid.argmin[1], grid.argmin[2]);

    let hybrid = hjdf_with(s, cfg)?;
    if hybrid.distortion < best.distortion {
        let gamma = hybrid.param(Param::Gamma).unwrap_or(1.0);
        let xi = hybrid.param(Param::Xi).unwrap_or(0.0);
        best = hpjdf_point(s, 1.0, gamma, xi);
    }
    let partial = pjdf_with(s, cfg)?;
    if partial.distortion < best.distortion {
        let theta = partial.param(Param::Theta).unwrap_or(1.0);
        let xi = partial.param(Param::Xi).unwrap_or(0.0);
        best = hpjdf_point(s, theta, 1.0, xi);
    }
    Ok(EvalResult::new(SchemeId::HPJDF, best))
}
