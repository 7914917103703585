use crate::{Error, Result};

/// Tolerance on the total mass of a distribution.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub name: String,
    pub size: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Self { name: name.into(), size }
    }
}

/// A finite joint distribution stored as a dense row-major tensor, last axis
/// fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        let cells: usize = axes.iter().map(|a| a.size).product();
        if axes.iter().any(|a| a.size == 0) {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        if probs.len() != cells {
            return Err(Error::InvalidDistribution(format!(
                "expected {cells} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::InvalidDistribution(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { axes, probs })
    }

    /// Builds from unnormalized non-negative weights.
    pub(crate) fn from_weights(axes: Vec<Axis>, mut probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("zero total mass".into()));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Self::new(axes, probs)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.name == name)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size).collect()
    }

    /// Multi-index of a flat position.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            idx[k] = flat % axis.size;
            flat /= axis.size;
        }
        idx
    }

    /// Marginal over the listed axes, in the listed order.
    pub fn marginal(&self, keep: &[usize]) -> Result<JointPmf> {
        self.check_axes(keep)?;
        let axes: Vec<Axis> = keep.iter().map(|&k| self.axes[k].clone()).collect();
        let probs = self.marginal_probs(keep);
        Ok(JointPmf { axes, probs })
    }

    fn marginal_probs(&self, keep: &[usize]) -> Vec<f64> {
        let sizes = self.sizes();
        let out_len: usize = keep.iter().map(|&k| sizes[k]).product();
        let mut out = vec![0.0; out_len];
        let mut idx = vec![0usize; sizes.len()];
        for &p in &self.probs {
            if p > 0.0 {
                let mut flat = 0;
                for &k in keep {
                    flat = flat * sizes[k] + idx[k];
                }
                out[flat] += p;
            }
            for k in (0..sizes.len()).rev() {
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        out
    }

    /// Shannon entropy of the listed axes, in nats.
    pub fn entropy(&self, axes: &[usize]) -> Result<f64> {
        self.check_axes(axes)?;
        Ok(entropy_of(&self.marginal_probs(axes)))
    }

    /// `I(A; B | C)` in nats. `c` may be empty.
    pub fn conditional_mutual_information(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if x.iter().any(|k| y.contains(k)) {
                return Err(Error::Usage("axis sets must be disjoint".into()));
            }
        }
        if a.is_empty() || b.is_empty() {
            return Err(Error::Usage("mutual information needs two non-empty axis sets".into()));
        }
        let join = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
        let h_ac = self.entropy(&join(a, c))?;
        let h_bc = self.entropy(&join(b, c))?;
        let h_abc = self.entropy(&join(&join(a, b), c))?;
        let h_c = self.entropy(c)?;
        Ok((h_ac + h_bc - h_abc - h_c).max(0.0))
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        let n = self.axes.len();
        for (i, &k) in axes.iter().enumerate() {
            if k >= n {
                return Err(Error::Usage(format!("axis {k} out of range (pmf has {n})")));
            }
            if axes[..i].contains(&k) {
                return Err(Error::Usage(format!("axis {k} listed twice")));
            }
        }
        Ok(())
    }
}

pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

pub fn nats_to_bits(x: f64) -> f64 {
    x / std::f64::consts::LN_2
}
