use std::fmt;

use super::pmf::{nats_to_bits, JointPmf};
use super::problem::{DmProblem, TestChannel};
use crate::Result;

/// Slack allowed on every inequality of the achievability conditions.
pub const SLACK: f64 = 1e-12;

/// Decoder map `(z, s3) -> s1_hat` and its expected distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Indexed `z * |S3| + s3`.
    pub map: Vec<usize>,
    pub s3_size: usize,
    pub expected_distortion: f64,
}

impl Reconstruction {
    pub fn apply(&self, z: usize, s3: usize) -> usize {
        self.map[z * self.s3_size + s3]
    }
}

/// Bayes decoder for a test channel: for each `(z, s3)` pick the
/// reconstruction with the smallest posterior expected distortion.
///
/// Ties go to the smallest reconstruction index; zero-probability cells map
/// to index 0.
pub fn optimal_reconstruction(problem: &DmProblem, t: &TestChannel) -> Result<Reconstruction> {
    let joint = problem.source_joint_with(t)?;
    // (S1, S3, Z) weights, then regroup as [z][s3][s1].
    let m = joint.marginal(&[3, 2, 0])?;
    let (nz, ns3, ns1) = (t.z_size(), problem.s3_size(), problem.s1_size());
    let mut map = vec![0; nz * ns3];
    let mut expected = 0.0;
    for cell in 0..nz * ns3 {
        let post = &m.probs()[cell * ns1..(cell + 1) * ns1];
        if post.iter().all(|&p| p <= 0.0) {
            continue;
        }
        let mut best = (0, f64::INFINITY);
        for hat in 0..problem.reconstruction_size {
            let cost: f64 = post.iter().enumerate().map(|(s1, &p)| p * problem.d(s1, hat)).sum();
            if cost < best.1 {
                best = (hat, cost);
            }
        }
        map[cell] = best.0;
        expected += best.1;
    }
    Ok(Reconstruction { map, s3_size: ns3, expected_distortion: expected })
}

/// One inequality `lhs <= rhs` of the achievability conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Whether `lhs`/`rhs` are information quantities in nats.
    pub information: bool,
}

impl ConditionCheck {
    fn new(name: &'static str, lhs: f64, rhs: f64, information: bool) -> Self {
        Self { name, lhs, rhs, holds: lhs <= rhs + SLACK, information }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub conditions: Vec<ConditionCheck>,
    pub reconstruction: Reconstruction,
}

impl Verdict {
    pub fn feasible(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            let (l, r, unit) = if c.information {
                (nats_to_bits(c.lhs), nats_to_bits(c.rhs), " bits")
            } else {
                (c.lhs, c.rhs, "")
            };
            writeln!(
                f,
                "{:<28} {:>14.9} <= {:<14.9}{unit:5} {}",
                c.name,
                l,
                r,
                if c.holds { "ok" } else { "VIOLATED" }
            )?;
        }
        write!(f, "feasible: {}", self.feasible())
    }
}

/// Checks every achievability condition for a test channel, an input pmf
/// over `(X1, X2)` and a target distortion.
///
/// 1. `Z - S1 - (S2, S3)` holds structurally for a [`TestChannel`].
/// 2. The Bayes decoder reaches `target_d`.
/// 3. Both expected input costs are within budget.
/// 4. `I(S1; Z | S2) <= b I(X1; Y1 | X2)` and `I(S1; Z | S3) <= b I(X1, X2; Y)`.
pub fn check_theorem1(
    problem: &DmProblem,
    t: &TestChannel,
    inputs: &JointPmf,
    target_d: f64,
) -> Result<Verdict> {
    problem.validate()?;
    let source = problem.source_joint_with(t)?;
    let (relay_rate, dest_rate) = problem.channel.rates(inputs)?;
    let relay_need = source.conditional_mutual_information(&[0], &[3], &[1])?;
    let dest_need = source.conditional_mutual_information(&[0], &[3], &[2])?;
    let reconstruction = optimal_reconstruction(problem, t)?;
    let (c1, c2) = problem.expected_costs(inputs);

    let conditions = vec![
        ConditionCheck::new("markov Z-S1-(S2,S3)", 0.0, 0.0, false),
        ConditionCheck::new("distortion", reconstruction.expected_distortion, target_d, false),
        ConditionCheck::new("cost X1", c1, problem.budget1, false),
        ConditionCheck::new("cost X2", c2, problem.budget2, false),
        ConditionCheck::new("I(S1;Z|S2) <= b I(X1;Y1|X2)", relay_need, problem.b * relay_rate, true),
        ConditionCheck::new("I(S1;Z|S3) <= b I(X1,X2;Y)", dest_need, problem.b * dest_rate, true),
    ];
    Ok(Verdict { conditions, reconstruction })
}
