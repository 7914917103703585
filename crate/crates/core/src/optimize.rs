//! Derivative-free minimization on the unit box `[0, 1]^D`.
//!
//! A uniform grid is evaluated first, then a shrinking grid is re-laid around
//! the incumbent for a fixed number of rounds. Objectives may return `+inf`
//! at infeasible points; `NaN` is an error.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSearchConfig {
    /// Grid points per axis, in the coarse pass and in every refinement.
    pub coarse_points: usize,
    pub refine_rounds: usize,
    /// Box width multiplier per refinement round.
    pub refine_factor: f64,
}

impl Default for BoxSearchConfig {
    fn default() -> Self {
        Self { coarse_points: 101, refine_rounds: 4, refine_factor: 0.1 }
    }
}

impl BoxSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 3 {
            return Err(Error::InvalidConfig(format!(
                "coarse_points must be at least 3, got {}",
                self.coarse_points
            )));
        }
        if !(self.refine_factor > 0.0 && self.refine_factor < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "refine_factor must lie in (0, 1), got {}",
                self.refine_factor
            )));
        }
        Ok(())
    }

    /// Grid spacing of the last refinement round.
    pub fn final_spacing(&self) -> f64 {
        self.refine_factor.powi(self.refine_rounds as i32) / (self.coarse_points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxMinimum<const D: usize> {
    pub argmin: [f64; D],
    pub min: f64,
    /// Best value seen on the coarse grid.
    pub coarse_min: f64,
}

/// Minimizes `f` over `[0, 1]^D`, `D` in `1..=3`.
///
/// Deterministic for a fixed configuration. Ties go to the lexicographically
/// smallest point.
pub fn minimize_box<const D: usize, F>(f: F, cfg: &BoxSearchConfig) -> Result<BoxMinimum<D>>
where
    F: Fn(&[f64; D]) -> f64,
{
    minimize_box_traced(f, cfg).map(|(m, _)| m)
}

/// Like [`minimize_box`], also returning the incumbent value after each round.
pub fn minimize_box_traced<const D: usize, F>(
    f: F,
    cfg: &BoxSearchConfig,
) -> Result<(BoxMinimum<D>, Vec<f64>)>
where
    F: Fn(&[f64; D]) -> f64,
{
    if !(1..=3).contains(&D) {
        return Err(Error::InvalidConfig(format!("dimension must be 1..=3, got {D}")));
    }
    cfg.validate()?;

    let mut best = Incumbent { point: [0.0; D], value: f64::INFINITY, seen: false };
    scan(&f, &[[0.0, 1.0]; D], cfg.coarse_points, &mut best)?;
    let coarse_min = best.value;
    let mut trace = vec![coarse_min];

    let mut width = 1.0;
    for _ in 0..cfg.refine_rounds {
        width *= cfg.refine_factor;
        let mut bounds = [[0.0, 1.0]; D];
        for (b, &c) in bounds.iter_mut().zip(best.point.iter()) {
            *b = [(c - 0.5 * width).max(0.0), (c + 0.5 * width).min(1.0)];
        }
        scan(&f, &bounds, cfg.coarse_points, &mut best)?;
        trace.push(best.value);
    }

    Ok((BoxMinimum { argmin: best.point, min: best.value, coarse_min }, trace))
}

/// Golden-section search for a unimodal `f` on `[lo, hi]`; returns the
/// better of the final bracket interior point and both endpoints.
pub fn golden_section<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            return Err(Error::NanObjective { point: vec![x] });
        }
        Ok(v)
    };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let v = eval(x)?;
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

struct Incumbent<const D: usize> {
    point: [f64; D],
    value: f64,
    seen: bool,
}

impl<const D: usize> Incumbent<D> {
    fn offer(&mut self, point: [f64; D], value: f64) {
        let better = !self.seen
            || value < self.value
            || (value == self.value && lex_less(&point, &self.point));
        if better {
            self.point = point;
            self.value = value;
            self.seen = true;
        }
    }
}

fn lex_less<const D: usize>(a: &[f64; D], b: &[f64; D]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn scan<const D: usize, F>(
    f: &F,
    bounds: &[[f64; 2]; D],
    n: usize,
    best: &mut Incumbent<D>,
) -> Result<()>
where
    F: Fn(&[f64; D]) -> f64,
{
    let axis = |k: usize, i: usize| -> f64 {
        let [lo, hi] = bounds[k];
        if i == n - 1 {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut idx = [0usize; D];
    loop {
        let mut point = [0.0; D];
        for k in 0..D {
            point[k] = axis(k, idx[k]);
        }
        let v = f(&point);
        if v.is_nan() {
            return Err(Error::NanObjective { point: point.to_vec() });
        }
        best.offer(point, v);

        // Odometer increment, last axis fastest.
        let mut k = D;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}
