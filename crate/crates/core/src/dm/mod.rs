//! Discrete memoryless joint source-channel decode-and-forward.
//!
//! A distortion `D` is achievable when some test channel `p(z|s1)` with
//! `|Z| <= |S1| + 2` and some input pmf `p(x1, x2)` within the cost budgets
//! satisfy
//!
//! ```text
//! E[d(S1, h(Z, S3))] <= D
//! I(S1; Z | S2) <= b I(X1; Y1 | X2)
//! I(S1; Z | S3) <= b I(X1, X2; Y)
//! ```
//!
//! [`check_theorem1`] evaluates these for given distributions and
//! [`min_distortion_search`] brute-forces the smallest certified `D` on
//! rational grids.

mod format;
mod pmf;
mod problem;
mod search;
mod theorem;

pub use format::{parse_problem, write_problem};
pub use pmf::{nats_to_bits, Axis, JointPmf};
pub use problem::{DmChannel, DmProblem, TestChannel};
pub use search::{
    min_distortion_search, search_size, simplex_grid, simplex_grid_len, SearchOutcome,
    DEFAULT_X_GRID, DEFAULT_Z_GRID, MAX_COMBINATIONS,
};
pub use theorem::{check_theorem1, optimal_reconstruction, ConditionCheck, Reconstruction, Verdict, SLACK};
