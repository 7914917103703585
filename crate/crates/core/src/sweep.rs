//! One-axis parameter sweeps rendered as CSV, and the figure presets built
//! on them.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::gauss::{scenario_from_snrs, GaussScenario, LinkSnrs};
use crate::optimize::BoxSearchConfig;
use crate::schemes::{evaluate, SchemeId};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    SrDb,
    RdDb,
    SdDb,
    Rho,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::SrDb => "sr_db",
            SweepAxis::RdDb => "rd_db",
            SweepAxis::SdDb => "sd_db",
            SweepAxis::Rho => "rho",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sr_db" => Ok(SweepAxis::SrDb),
            "rd_db" => Ok(SweepAxis::RdDb),
            "sd_db" => Ok(SweepAxis::SdDb),
            "rho" => Ok(SweepAxis::Rho),
            _ => Err(Error::Usage(format!("unknown sweep axis '{s}'"))),
        }
    }
}

/// A curve: a scheme, optionally at its own correlation coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Column {
    pub scheme: SchemeId,
    pub rho: Option<f64>,
}

impl Column {
    pub fn new(scheme: SchemeId) -> Self {
        Self { scheme, rho: None }
    }

    pub fn at_rho(scheme: SchemeId, rho: f64) -> Self {
        Self { scheme, rho: Some(rho) }
    }

    /// CSV column name, e.g. `jdf_distortion` or `jdf_rho0.9_distortion`.
    pub fn label(&self) -> String {
        match self.rho {
            Some(r) => format!("{}_rho{}_distortion", self.scheme, r),
            None => format!("{}_distortion", self.scheme),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Link SNRs for the axes that are not swept.
    pub fixed: LinkSnrs,
    pub rho: f64,
    pub columns: Vec<Column>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("need at least 2 steps, got {}", self.steps)));
        }
        if !(self.start < self.stop) {
            return Err(Error::InvalidSweep(format!(
                "start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.columns.is_empty() {
            return Err(Error::InvalidSweep("no schemes requested".into()));
        }
        Ok(())
    }

    pub fn axis_values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| {
                let v = if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
                };
                if self.axis == SweepAxis::Rho {
                    v.clamp(-1.0, 1.0)
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn scenario_at(&self, value: f64, rho_override: Option<f64>) -> Result<GaussScenario> {
        let mut snrs = self.fixed;
        let mut rho = self.rho;
        match self.axis {
            SweepAxis::SrDb => snrs.sr_db = value,
            SweepAxis::RdDb => snrs.rd_db = value,
            SweepAxis::SdDb => snrs.sd_db = value,
            SweepAxis::Rho => rho = value,
        }
        scenario_from_snrs(snrs, rho_override.unwrap_or(rho))
    }

    pub fn header(&self) -> String {
        std::iter::once("axis_value".to_string())
            .chain(self.columns.iter().map(Column::label))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Distortion of every column at every axis value, in row order.
    pub fn evaluate(&self, cfg: &BoxSearchConfig) -> Result<Vec<(f64, Vec<f64>)>> {
        self.validate()?;
        self.axis_values()
            .into_iter()
            .map(|v| {
                let row = self
                    .columns
                    .iter()
                    .map(|c| Ok(evaluate(c.scheme, &self.scenario_at(v, c.rho)?, cfg)?.distortion))
                    .collect::<Result<Vec<_>>>()?;
                Ok((v, row))
            })
            .collect()
    }

    /// CSV text: `#` comment lines, a header, one row per axis value.
    pub fn render_csv(&self, cfg: &BoxSearchConfig, comments: &[String]) -> Result<String> {
        let rows = self.evaluate(cfg)?;
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header());
        for (v, vals) in rows {
            let _ = write!(out, "{v}");
            for d in vals {
                let _ = write!(out, ",{d}");
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// A gnuplot script plotting every column of `csv_path` on a log scale.
    pub fn gnuplot_script(&self, csv_path: &str, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set datafile commentschars '#'");
        let _ = writeln!(s, "set key autotitle columnhead");
        let _ = writeln!(s, "set logscale y");
        let _ = writeln!(s, "set title '{title}'");
        let _ = writeln!(s, "set xlabel '{}'", self.axis.name());
        let _ = writeln!(s, "set ylabel 'distortion'");
        let plots: Vec<String> = (0..self.columns.len())
            .map(|i| format!("'{csv_path}' using 1:{} with lines", i + 2))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}

/// Figure presets at the operating points of the comparison study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// DF, CF and jDF versus S-R SNR.
    Fig2,
    /// The jDF family versus S-R SNR.
    Fig3,
    /// hpjDF and uncoded source cooperation versus R-D SNR.
    Fig4,
    /// hpjDF and uncoded source cooperation versus correlation.
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5];

    pub fn id(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Figure::Fig2 => "channel cooperation vs jDF",
            Figure::Fig3 => "distortion vs S-R link quality",
            Figure::Fig4 => "distortion vs R-D link quality",
            Figure::Fig5 => "distortion vs correlation coefficient",
        }
    }

    pub fn spec(self) -> SweepSpec {
        use SchemeId::*;
        let family = [JDF, PJDF, HJDF, HPJDF, CutSet].map(Column::new).to_vec();
        let source_coop = [HPJDF, UncodedSourceCoop, CutSet, JDF, PJDF, HJDF].map(Column::new).to_vec();
        match self {
            Figure::Fig2 => SweepSpec {
                axis: SweepAxis::SrDb,
                start: 0.0,
                stop: 20.0,
                steps: 51,
                fixed: LinkSnrs { sd_db: 5.0, sr_db: 0.0, rd_db: 10.0 },
                rho: 0.9,
                columns: vec![
                    Column::new(ClassicDF),
                    Column::new(ClassicCF),
                    Column::at_rho(JDF, 0.3),
                    Column::at_rho(JDF, 0.9),
                ],
            },
            Figure::Fig3 => SweepSpec {
                axis: SweepAxis::SrDb,
                start: -5.0,
                stop: 20.0,
                steps: 51,
                fixed: LinkSnrs { sd_db: 5.0, sr_db: 0.0, rd_db: 10.0 },
                rho: 0.5,
                columns: family,
            },
            Figure::Fig4 => SweepSpec {
                axis: SweepAxis::RdDb,
                start: -5.0,
                stop: 20.0,
                steps: 51,
                fixed: LinkSnrs { sd_db: 0.0, sr_db: 0.0, rd_db: 0.0 },
                rho: 0.9,
                columns: source_coop,
            },
            Figure::Fig5 => SweepSpec {
                axis: SweepAxis::Rho,
                start: 0.0,
                stop: 1.0,
                steps: 51,
                fixed: LinkSnrs { sd_db: 4.0, sr_db: 10.0, rd_db: 4.0 },
                rho: 0.0,
                columns: source_coop,
            },
        }
    }

    pub fn comments(self, spec: &SweepSpec) -> Vec<String> {
        let f = spec.fixed;
        let point = match spec.axis {
            SweepAxis::SrDb => format!("sd_db={} rd_db={} rho={}", f.sd_db, f.rd_db, spec.rho),
            SweepAxis::RdDb => format!("sd_db={} sr_db={} rho={}", f.sd_db, f.sr_db, spec.rho),
            SweepAxis::SdDb => format!("sr_db={} rd_db={} rho={}", f.sr_db, f.rd_db, spec.rho),
            SweepAxis::Rho => format!("sd_db={} sr_db={} rd_db={}", f.sd_db, f.sr_db, f.rd_db),
        };
        vec![
            format!("{}: {}", self.id(), self.title()),
            format!("axis: {} from {} to {} ({} points); {point}", spec.axis.name(), spec.start, spec.stop, spec.steps),
            "aCF and separation-based source cooperation curves are omitted (no closed form available)".into(),
        ]
    }

    /// CSV for the preset with its default axis range.
    pub fn render_csv(self, cfg: &BoxSearchConfig) -> Result<String> {
        let spec = self.spec();
        spec.render_csv(cfg, &self.comments(&spec))
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.id() == s)
            .ok_or_else(|| Error::Usage(format!("unknown figure '{s}'")))
    }
}

/// Parses a CSV produced by [`SweepSpec::render_csv`] into its header and rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse { line: 1, msg: "empty CSV".into() })?;
    let header: Vec<String> = header.split(',').map(str::to_string).collect();
    let rows = lines
        .map(|(i, l)| {
            l.split(',')
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad number '{t}'") })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}
