//! Plain-text problem files.
//!
//! A file is a sequence of sections. Each section starts with a header line
//! naming the section and its axes as `NAME=size`, followed by
//! whitespace-separated numbers in row-major order (last axis fastest).
//! `#` starts a comment. Numbers may be written as fractions such as `1/3`.
//!
//! ```text
//! rate 1
//! source S1=2 S2=2 S3=1          # p(s1, s2, s3)
//! 0.5 0 0 0.5
//! channel X1=2 X2=2 Y1=2 Y=2     # p(y1, y | x1, x2)
//! ...
//! distortion S1=2 S1hat=2        # d(s1, s1_hat)
//! 0 1
//! 1 0
//! cost1 X1=2 budget=inf          # cost of each X1 symbol
//! 0 0
//! cost2 X2=2 budget=inf
//! 0 0
//! ```
//!
//! `S3=1` means the destination has no side information.

use std::fmt::Write as _;

use super::pmf::{Axis, JointPmf};
use super::problem::{DmChannel, DmProblem};
use crate::{Error, Result};

struct Section {
    line: usize,
    name: String,
    axes: Vec<Axis>,
    budget: Option<f64>,
    scalar: Option<f64>,
    data: Vec<f64>,
}

impl Section {
    fn cells(&self) -> usize {
        self.axes.iter().map(|a| a.size).product()
    }

    fn expect_axes(&self, n: usize) -> Result<()> {
        if self.axes.len() != n {
            return Err(parse_err(
                self.line,
                format!("section '{}' needs {n} axes, got {}", self.name, self.axes.len()),
            ));
        }
        if self.data.len() != self.cells() {
            return Err(parse_err(
                self.line,
                format!(
                    "section '{}' needs {} numbers, got {}",
                    self.name,
                    self.cells(),
                    self.data.len()
                ),
            ));
        }
        Ok(())
    }
}

const SECTIONS: [&str; 6] = ["rate", "source", "channel", "distortion", "cost1", "cost2"];

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    let value = match tok.split_once('/') {
        Some((num, den)) => num.parse::<f64>().ok().zip(den.parse::<f64>().ok()).map(|(n, d)| n / d),
        None => tok.parse::<f64>().ok(),
    };
    value
        .filter(|v| !v.is_nan())
        .ok_or_else(|| parse_err(line, format!("expected a number, got '{tok}'")))
}

pub fn parse_problem(text: &str) -> Result<DmProblem> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace().peekable();
        let Some(&first) = tokens.peek() else { continue };

        if SECTIONS.contains(&first) {
            tokens.next();
            if sections.iter().any(|s| s.name == first) {
                return Err(parse_err(line, format!("duplicate section '{first}'")));
            }
            let mut sec = Section {
                line,
                name: first.to_string(),
                axes: Vec::new(),
                budget: None,
                scalar: None,
                data: Vec::new(),
            };
            for tok in tokens {
                if first == "rate" {
                    if sec.scalar.is_some() {
                        return Err(parse_err(line, "rate takes one value"));
                    }
                    sec.scalar = Some(parse_number(tok, line)?);
                    continue;
                }
                let (key, value) = tok
                    .split_once('=')
                    .ok_or_else(|| parse_err(line, format!("expected NAME=size, got '{tok}'")))?;
                if key == "budget" {
                    sec.budget = Some(parse_number(value, line)?);
                } else {
                    let size = value
                        .parse::<usize>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| parse_err(line, format!("invalid size '{value}'")))?;
                    sec.axes.push(Axis::new(key, size));
                }
            }
            sections.push(sec);
        } else if first.starts_with(|c: char| c.is_ascii_alphabetic()) && parse_number(first, line).is_err() {
            return Err(parse_err(line, format!("unknown section '{first}'")));
        } else {
            let sec = sections
                .last_mut()
                .ok_or_else(|| parse_err(line, "numbers before any section header"))?;
            if sec.name == "rate" {
                return Err(parse_err(line, "rate takes its value on the header line"));
            }
            for tok in tokens {
                sec.data.push(parse_number(tok, line)?);
            }
        }
    }

    let take = |name: &str| -> Result<&Section> {
        sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| parse_err(text.lines().count().max(1), format!("missing section '{name}'")))
    };

    let rate = take("rate")?;
    let b = rate.scalar.ok_or_else(|| parse_err(rate.line, "rate needs a value"))?;

    let src = take("source")?;
    src.expect_axes(3)?;
    let source = JointPmf::new(src.axes.clone(), src.data.clone())
        .map_err(|e| parse_err(src.line, e.to_string()))?;

    let ch = take("channel")?;
    ch.expect_axes(4)?;
    let sizes: Vec<usize> = ch.axes.iter().map(|a| a.size).collect();
    let channel = DmChannel::new(sizes[0], sizes[1], sizes[2], sizes[3], ch.data.clone())
        .map_err(|e| parse_err(ch.line, e.to_string()))?;

    let dist = take("distortion")?;
    dist.expect_axes(2)?;
    if dist.axes[0].size != source.axes()[0].size {
        return Err(parse_err(dist.line, "distortion rows must match |S1|"));
    }

    let mut costs = Vec::new();
    for (name, size) in [("cost1", sizes[0]), ("cost2", sizes[1])] {
        let sec = take(name)?;
        sec.expect_axes(1)?;
        if sec.axes[0].size != size {
            return Err(parse_err(sec.line, format!("{name} must have {size} entries")));
        }
        costs.push((sec.data.clone(), sec.budget.unwrap_or(f64::INFINITY)));
    }
    let (cost2, budget2) = costs.pop().expect("two cost sections");
    let (cost1, budget1) = costs.pop().expect("two cost sections");

    let problem = DmProblem {
        source,
        channel,
        distortion: dist.data.clone(),
        reconstruction_size: dist.axes[1].size,
        cost1,
        cost2,
        budget1,
        budget2,
        b,
    };
    problem.validate().map_err(|e| parse_err(1, e.to_string()))?;
    Ok(problem)
}

pub fn write_problem(p: &DmProblem) -> String {
    let mut out = String::new();
    let row = |out: &mut String, vals: &[f64], width: usize| {
        for chunk in vals.chunks(width.max(1)) {
            let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    };
    let _ = writeln!(out, "rate {}", p.b);
    let axes: Vec<String> = p.source.axes().iter().map(|a| format!("{}={}", a.name, a.size)).collect();
    let _ = writeln!(out, "source {}", axes.join(" "));
    row(&mut out, p.source.probs(), p.source.axes().last().map_or(1, |a| a.size));
    let c = &p.channel;
    let _ = writeln!(
        out,
        "channel X1={} X2={} Y1={} Y={}",
        c.x1_size(),
        c.x2_size(),
        c.y1_size(),
        c.y_size()
    );
    row(&mut out, c.kernel(), c.y1_size() * c.y_size());
    let _ = writeln!(out, "distortion S1={} S1hat={}", p.s1_size(), p.reconstruction_size);
    row(&mut out, &p.distortion, p.reconstruction_size);
    let _ = writeln!(out, "cost1 X1={} budget={}", p.cost1.len(), p.budget1);
    row(&mut out, &p.cost1, p.cost1.len());
    let _ = writeln!(out, "cost2 X2={} budget={}", p.cost2.len(), p.budget2);
    row(&mut out, &p.cost2, p.cost2.len());
    out
}
