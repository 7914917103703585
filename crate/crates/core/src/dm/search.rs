use super::pmf::{Axis, JointPmf};
use super::problem::{DmProblem, TestChannel};
use super::theorem::{optimal_reconstruction, SLACK};
use crate::{Error, Result};

/// Largest number of (test channel, input pmf) pairs a search may cover.
pub const MAX_COMBINATIONS: f64 = 1e8;
pub const DEFAULT_Z_GRID: usize = 8;
pub const DEFAULT_X_GRID: usize = 6;

/// All pmfs on `cells` points whose entries are multiples of `1 / k`, in
/// lexicographic order of the numerators (first cell largest first).
pub fn simplex_grid(cells: usize, k: usize) -> Vec<Vec<f64>> {
    fn rec(cells: usize, left: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cells == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&m| m as f64 / k as f64).collect());
            cur.pop();
            return;
        }
        for m in (0..=left).rev() {
            cur.push(m);
            rec(cells - 1, left - m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if cells > 0 && k > 0 {
        rec(cells, k, k, &mut Vec::with_capacity(cells), &mut out);
    }
    out
}

/// Number of points in [`simplex_grid`], as a float to survive huge counts.
pub fn simplex_grid_len(cells: usize, k: usize) -> f64 {
    // C(k + cells - 1, cells - 1)
    (1..cells).fold(1.0, |acc, i| acc * (k + i) as f64 / i as f64).round()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best_d: f64,
    pub test_channel: TestChannel,
    /// Joint input pmf over `(X1, X2)`.
    pub inputs: JointPmf,
    pub test_channels_scanned: usize,
    pub inputs_within_budget: usize,
}

/// Grid sizes a search would cover: `(test channels, input pmfs)`.
pub fn search_size(problem: &DmProblem, z_grid: usize, x_grid: usize) -> (f64, f64) {
    let s1 = problem.s1_size();
    let per_row = simplex_grid_len(s1 + 2, z_grid);
    let inputs = simplex_grid_len(problem.channel.x1_size() * problem.channel.x2_size(), x_grid);
    (per_row.powi(s1 as i32), inputs)
}

/// Smallest distortion certified by the achievability conditions over a
/// grid of test channels (`|Z| = |S1| + 2`, rows with resolution `1/z_grid`)
/// and joint input pmfs (resolution `1/x_grid`) within the cost budgets.
///
/// Ties keep the first candidate in enumeration order.
pub fn min_distortion_search(problem: &DmProblem, z_grid: usize, x_grid: usize) -> Result<SearchOutcome> {
    problem.validate()?;
    if z_grid == 0 || x_grid == 0 {
        return Err(Error::Usage("grid resolutions must be positive".into()));
    }
    let (n_t, n_x) = search_size(problem, z_grid, x_grid);
    if n_t * n_x > MAX_COMBINATIONS {
        return Err(Error::Intractable { required: n_t * n_x, limit: MAX_COMBINATIONS });
    }

    let channel = &problem.channel;
    let input_axes = vec![Axis::new("X1", channel.x1_size()), Axis::new("X2", channel.x2_size())];
    let mut inputs = Vec::new();
    for probs in simplex_grid(channel.x1_size() * channel.x2_size(), x_grid) {
        let pmf = JointPmf::new(input_axes.clone(), probs)?;
        let (c1, c2) = problem.expected_costs(&pmf);
        if c1 <= problem.budget1 + SLACK && c2 <= problem.budget2 + SLACK {
            let (relay, dest) = channel.rates(&pmf)?;
            inputs.push((pmf, problem.b * relay, problem.b * dest));
        }
    }
    if inputs.is_empty() {
        return Err(Error::NoFeasibleInput);
    }

    let s1 = problem.s1_size();
    let z = s1 + 2;
    let rows = simplex_grid(z, z_grid);
    let mut choice = vec![0usize; s1];
    let mut best: Option<(f64, TestChannel, usize)> = None;
    let mut scanned = 0;
    loop {
        scanned += 1;
        let kernel: Vec<f64> = choice.iter().flat_map(|&r| rows[r].iter().copied()).collect();
        let t = TestChannel::new(s1, z, kernel)?;
        let d = optimal_reconstruction(problem, &t)?.expected_distortion;
        if best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
            let joint = problem.source_joint_with(&t)?;
            let relay_need = joint.conditional_mutual_information(&[0], &[3], &[1])?;
            let dest_need = joint.conditional_mutual_information(&[0], &[3], &[2])?;
            let witness = inputs
                .iter()
                .position(|(_, r, dst)| relay_need <= r + SLACK && dest_need <= dst + SLACK);
            if let Some(i) = witness {
                best = Some((d, t, i));
            }
        }

        let mut k = s1;
        loop {
            if k == 0 {
                let (best_d, test_channel, i) = best.expect("constant description is always feasible");
                return Ok(SearchOutcome {
                    best_d,
                    test_channel,
                    inputs: inputs.swap_remove(i).0,
                    test_channels_scanned: scanned,
                    inputs_within_budget: inputs.len() + 1,
                });
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < rows.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}
