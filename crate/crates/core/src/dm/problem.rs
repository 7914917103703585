use super::pmf::{Axis, JointPmf, MASS_TOL};
use crate::{Error, Result};

/// Discrete memoryless relay channel `p(y1, y | x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmChannel {
    x1: usize,
    x2: usize,
    y1: usize,
    y: usize,
    /// Indexed `[x1][x2][y1][y]`, row-major.
    kernel: Vec<f64>,
}

impl DmChannel {
    pub fn new(x1: usize, x2: usize, y1: usize, y: usize, kernel: Vec<f64>) -> Result<Self> {
        if [x1, x2, y1, y].contains(&0) {
            return Err(Error::InvalidDistribution("channel alphabets must be non-empty".into()));
        }
        if kernel.len() != x1 * x2 * y1 * y {
            return Err(Error::InvalidDistribution(format!(
                "channel kernel needs {} entries, got {}",
                x1 * x2 * y1 * y,
                kernel.len()
            )));
        }
        check_rows(&kernel, y1 * y, "channel kernel")?;
        Ok(Self { x1, x2, y1, y, kernel })
    }

    /// `Y1 = X1` through `relay` and `Y` determined by `(X1, X2)` through
    /// `dest`, independently.
    pub fn from_components(relay: &[Vec<f64>], dest: &[Vec<Vec<f64>>]) -> Result<Self> {
        let x1 = relay.len();
        let y1 = relay.first().map_or(0, Vec::len);
        let x2 = dest.first().map_or(0, Vec::len);
        let y = dest.first().and_then(|r| r.first()).map_or(0, Vec::len);
        if dest.len() != x1 {
            return Err(Error::InvalidDistribution("relay and destination disagree on |X1|".into()));
        }
        let mut kernel = Vec::with_capacity(x1 * x2 * y1 * y);
        for a in 0..x1 {
            for b in 0..x2 {
                for r in 0..y1 {
                    for d in 0..y {
                        kernel.push(relay[a][r] * dest[a][b][d]);
                    }
                }
            }
        }
        Self::new(x1, x2, y1, y, kernel)
    }

    pub fn x1_size(&self) -> usize {
        self.x1
    }

    pub fn x2_size(&self) -> usize {
        self.x2
    }

    pub fn y1_size(&self) -> usize {
        self.y1
    }

    pub fn y_size(&self) -> usize {
        self.y
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    /// Joint of `(X1, X2, Y1, Y)` induced by an input pmf over `(X1, X2)`.
    pub fn joint_with_inputs(&self, inputs: &JointPmf) -> Result<JointPmf> {
        if inputs.sizes() != [self.x1, self.x2] {
            return Err(Error::Usage(format!(
                "input pmf must be over |X1| x |X2| = {} x {}",
                self.x1, self.x2
            )));
        }
        let out = self.y1 * self.y;
        let probs = inputs
            .probs()
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| self.kernel[i * out..(i + 1) * out].iter().map(move |k| p * k))
            .collect();
        JointPmf::from_weights(
            vec![
                Axis::new("X1", self.x1),
                Axis::new("X2", self.x2),
                Axis::new("Y1", self.y1),
                Axis::new("Y", self.y),
            ],
            probs,
        )
    }

    /// `(I(X1; Y1 | X2), I(X1, X2; Y))` in nats.
    pub fn rates(&self, inputs: &JointPmf) -> Result<(f64, f64)> {
        let joint = self.joint_with_inputs(inputs)?;
        let relay = joint.conditional_mutual_information(&[0], &[2], &[1])?;
        let dest = joint.conditional_mutual_information(&[0, 1], &[3], &[])?;
        Ok((relay, dest))
    }
}

/// Quantization test channel `p(z | s1)`.
///
/// The description depends on the source alone, so `Z - S1 - (S2, S3)` is a
/// Markov chain by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TestChannel {
    s1: usize,
    z: usize,
    /// Indexed `[s1][z]`.
    kernel: Vec<f64>,
}

impl TestChannel {
    pub fn new(s1: usize, z: usize, kernel: Vec<f64>) -> Result<Self> {
        if s1 == 0 || z == 0 {
            return Err(Error::InvalidDistribution("test channel alphabets must be non-empty".into()));
        }
        if z > s1 + 2 {
            return Err(Error::InvalidDistribution(format!(
                "|Z| = {z} exceeds the cardinality bound |S1| + 2 = {}",
                s1 + 2
            )));
        }
        if kernel.len() != s1 * z {
            return Err(Error::InvalidDistribution(format!(
                "test channel needs {} entries, got {}",
                s1 * z,
                kernel.len()
            )));
        }
        check_rows(&kernel, z, "test channel")?;
        Ok(Self { s1, z, kernel })
    }

    /// `Z = S1`, padded with unused symbols up to `z`.
    pub fn identity(s1: usize, z: usize) -> Result<Self> {
        let kernel = (0..s1 * z).map(|i| if i / z == i % z { 1.0 } else { 0.0 }).collect();
        Self::new(s1, z, kernel)
    }

    /// `Z` constant.
    pub fn constant(s1: usize, z: usize) -> Result<Self> {
        let kernel = (0..s1 * z).map(|i| if i % z == 0 { 1.0 } else { 0.0 }).collect();
        Self::new(s1, z, kernel)
    }

    pub fn s1_size(&self) -> usize {
        self.s1
    }

    pub fn z_size(&self) -> usize {
        self.z
    }

    pub fn prob(&self, s1: usize, z: usize) -> f64 {
        self.kernel[s1 * self.z + z]
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }
}

/// A discrete memoryless source/channel pair with distortion measure and
/// input costs.
#[derive(Debug, Clone, PartialEq)]
pub struct DmProblem {
    /// Joint of `(S1, S2, S3)`; a size-one `S3` means no destination side
    /// information.
    pub source: JointPmf,
    pub channel: DmChannel,
    /// `d(s1, s1_hat)` indexed `[s1][s1_hat]`.
    pub distortion: Vec<f64>,
    pub reconstruction_size: usize,
    pub cost1: Vec<f64>,
    pub cost2: Vec<f64>,
    pub budget1: f64,
    pub budget2: f64,
    /// Channel uses per source sample.
    pub b: f64,
}

impl DmProblem {
    pub fn validate(&self) -> Result<()> {
        if self.source.axes().len() != 3 {
            return Err(Error::InvalidDistribution("source must be a joint over (S1, S2, S3)".into()));
        }
        let s1 = self.s1_size();
        if self.reconstruction_size == 0 || self.distortion.len() != s1 * self.reconstruction_size {
            return Err(Error::InvalidDistribution(format!(
                "distortion matrix must be |S1| x |S1_hat| = {s1} x {}",
                self.reconstruction_size
            )));
        }
        if self.distortion.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(Error::InvalidDistribution("distortions must be finite and non-negative".into()));
        }
        if self.cost1.len() != self.channel.x1_size() || self.cost2.len() != self.channel.x2_size() {
            return Err(Error::InvalidDistribution("cost vectors must match the input alphabets".into()));
        }
        if self.cost1.iter().chain(&self.cost2).any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(Error::InvalidDistribution("costs must be finite and non-negative".into()));
        }
        if !(self.budget1 >= 0.0 && self.budget2 >= 0.0) {
            return Err(Error::InvalidDistribution("budgets must be non-negative".into()));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidDistribution("rate b must be positive".into()));
        }
        Ok(())
    }

    pub fn s1_size(&self) -> usize {
        self.source.axes()[0].size
    }

    pub fn s2_size(&self) -> usize {
        self.source.axes()[1].size
    }

    pub fn s3_size(&self) -> usize {
        self.source.axes()[2].size
    }

    pub fn d(&self, s1: usize, s1_hat: usize) -> f64 {
        self.distortion[s1 * self.reconstruction_size + s1_hat]
    }

    /// `(E[cost1(X1)], E[cost2(X2)])` under an input pmf over `(X1, X2)`.
    pub fn expected_costs(&self, inputs: &JointPmf) -> (f64, f64) {
        let x2 = self.channel.x2_size();
        inputs.probs().iter().enumerate().fold((0.0, 0.0), |(c1, c2), (i, &p)| {
            (c1 + p * self.cost1[i / x2], c2 + p * self.cost2[i % x2])
        })
    }

    /// Joint of `(S1, S2, S3, Z)`.
    pub fn source_joint_with(&self, t: &TestChannel) -> Result<JointPmf> {
        if t.s1_size() != self.s1_size() {
            return Err(Error::Usage(format!(
                "test channel is over |S1| = {}, problem has {}",
                t.s1_size(),
                self.s1_size()
            )));
        }
        let z = t.z_size();
        let inner = self.s2_size() * self.s3_size();
        let probs = self
            .source
            .probs()
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                let s1 = i / inner;
                (0..z).map(move |k| p * t.prob(s1, k))
            })
            .collect();
        let mut axes = self.source.axes().to_vec();
        axes.push(Axis::new("Z", z));
        JointPmf::from_weights(axes, probs)
    }
}

fn check_rows(kernel: &[f64], row: usize, what: &str) -> Result<()> {
    for (i, chunk) in kernel.chunks(row).enumerate() {
        if chunk.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::InvalidDistribution(format!("{what} row {i} has invalid entries")));
        }
        let total: f64 = chunk.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("{what} row {i} sums to {total}")));
        }
    }
    Ok(())
}
