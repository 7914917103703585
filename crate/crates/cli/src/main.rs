use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use relay_jscc::dm::{
    check_theorem1, min_distortion_search, nats_to_bits, parse_problem, DEFAULT_X_GRID, DEFAULT_Z_GRID,
};
use relay_jscc::gauss::scenario_from_snrs;
use relay_jscc::schemes::evaluate;
use relay_jscc::sweep::{Column, Figure, SweepAxis, SweepSpec};
use relay_jscc::{BoxSearchConfig, Error, LinkSnrs, SchemeId};

/// Distortion of joint source-channel relaying schemes with relay side information.
#[derive(Parser)]
#[command(name = "relay-jscc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scheme at one scenario.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// cutset, dt, df, cf, uncoded_sc, jdf, hjdf, pjdf or hpjdf.
        #[arg(long)]
        scheme: SchemeId,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Sweep one scenario axis and write a CSV.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
        /// Comma-separated schemes; `scheme@rho` pins a correlation.
        #[arg(long, value_delimiter = ',', required = true)]
        schemes: Vec<String>,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Write the CSV behind one of the comparison figures.
    Figure {
        /// fig2, fig3, fig4 or fig5.
        id: Figure,
        /// Override the number of axis samples.
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search or check a discrete memoryless problem file.
    Dm {
        problem: PathBuf,
        /// Test-channel grid resolution (entries are multiples of 1/z).
        #[arg(long, default_value_t = DEFAULT_Z_GRID)]
        z_grid: usize,
        /// Input pmf grid resolution.
        #[arg(long, default_value_t = DEFAULT_X_GRID)]
        x_grid: usize,
        /// Check the best witness against this distortion instead of
        /// reporting the minimum.
        #[arg(long, allow_negative_numbers = true)]
        target_d: Option<f64>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Source-destination SNR in dB.
    #[arg(long, default_value_t = 0.0)]
    sd_db: f64,
    /// Source-relay SNR in dB.
    #[arg(long, default_value_t = 0.0)]
    sr_db: f64,
    /// Relay-destination SNR in dB.
    #[arg(long, default_value_t = 0.0)]
    rd_db: f64,
    /// Correlation between the source and the relay side information.
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
}

impl ScenarioArgs {
    fn snrs(&self) -> LinkSnrs {
        LinkSnrs { sd_db: self.sd_db, sr_db: self.sr_db, rd_db: self.rd_db }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Grid points per parameter axis.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Refinement rounds after the coarse grid.
    #[arg(long, default_value_t = 4)]
    refine_rounds: usize,
}

impl SearchArgs {
    fn config(&self) -> Result<BoxSearchConfig> {
        let cfg = BoxSearchConfig { coarse_points: self.grid, refine_rounds: self.refine_rounds, ..Default::default() };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long, requires = "out")]
    gnuplot: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Intractable { .. }) => 3,
        Some(Error::Io(_) | Error::NoFeasibleInput | Error::NanObjective { .. }) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Eval { scenario, scheme, search } => eval(&scenario, scheme, &search.config()?),
        Command::Sweep { axis, start, stop, steps, schemes, scenario, output, search } => {
            let columns = schemes.iter().map(|s| parse_column(s)).collect::<Result<Vec<_>>>()?;
            let spec = SweepSpec { axis, start, stop, steps, fixed: scenario.snrs(), rho: scenario.rho, columns };
            spec.validate()?;
            if !(-1.0..=1.0).contains(&spec.rho) && axis != SweepAxis::Rho {
                return Err(Error::InvalidScenario(format!("rho must lie in [-1, 1], got {}", spec.rho)).into());
            }
            let comments = [format!("sweep of {} with sd_db={} sr_db={} rd_db={} rho={}", axis.name(), scenario.sd_db, scenario.sr_db, scenario.rd_db, scenario.rho)];
            let csv = spec.render_csv(&search.config()?, &comments)?;
            emit(&output, &csv, &spec, "sweep")
        }
        Command::Figure { id, steps, output, search } => {
            let mut spec = id.spec();
            if let Some(n) = steps {
                spec.steps = n;
            }
            let csv = spec.render_csv(&search.config()?, &id.comments(&spec))?;
            emit(&output, &csv, &spec, id.title())
        }
        Command::Dm { problem, z_grid, x_grid, target_d } => dm(&problem, z_grid, x_grid, target_d),
    }
}

/// `jdf` or `jdf@0.3`.
fn parse_column(token: &str) -> Result<Column> {
    match token.split_once('@') {
        Some((scheme, rho)) => {
            let rho: f64 = rho.parse().map_err(|_| Error::Usage(format!("bad correlation in '{token}'")))?;
            Ok(Column::at_rho(scheme.parse()?, rho))
        }
        None => Ok(Column::new(token.parse()?)),
    }
}

fn emit(output: &OutputArgs, csv: &str, spec: &SweepSpec, title: &str) -> Result<()> {
    let Some(path) = &output.out else {
        std::io::stdout().write_all(csv.as_bytes()).map_err(Error::Io)?;
        return Ok(());
    };
    write(path, csv)?;
    if output.gnuplot {
        let script = path.with_extension("gp");
        write(&script, &spec.gnuplot_script(&path.display().to_string(), title))?;
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(Error::Io).with_context(|| format!("writing {}", path.display()))
}

/// `x` with `digits` significant digits in positional notation.
fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let decimals = (digits - 1 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn eval(args: &ScenarioArgs, scheme: SchemeId, cfg: &BoxSearchConfig) -> Result<()> {
    let s = scenario_from_snrs(args.snrs(), args.rho)?;
    let r = evaluate(scheme, &s, cfg)?;
    println!("scheme         {}", r.scheme);
    println!("distortion     {}", significant(r.distortion, 9));
    println!("distortion_db  {:.6}", r.distortion_db());
    for (p, v) in &r.params {
        println!("{:<14} {}", p.name(), significant(*v, 9));
    }
    if let Some(d) = r.degeneracy {
        println!("degenerate     {}", d.name());
    }
    Ok(())
}

fn dm(path: &Path, z_grid: usize, x_grid: usize, target_d: Option<f64>) -> Result<()> {
    let text = fs::read_to_string(path).map_err(Error::Io).with_context(|| format!("reading {}", path.display()))?;
    let problem = parse_problem(&text).with_context(|| format!("parsing {}", path.display()))?;
    let found = min_distortion_search(&problem, z_grid, x_grid)?;

    println!("test channels scanned  {}", found.test_channels_scanned);
    println!("inputs within budget   {}", found.inputs_within_budget);
    println!("best_d                 {}", significant(found.best_d, 9));
    println!("test channel p(z|s1):");
    for s1 in 0..problem.s1_size() {
        let row: Vec<String> = (0..found.test_channel.z_size())
            .map(|z| format!("{:.4}", found.test_channel.prob(s1, z)))
            .collect();
        println!("  s1={s1}: {}", row.join(" "));
    }
    println!("input pmf p(x1,x2):");
    let x2 = problem.channel.x2_size();
    for (i, p) in found.inputs.probs().iter().enumerate() {
        println!("  ({}, {}): {:.4}", i / x2, i % x2, p);
    }

    let target = target_d.unwrap_or(found.best_d);
    let verdict = check_theorem1(&problem, &found.test_channel, &found.inputs, target)?;
    println!("conditions at D = {}:", significant(target, 9));
    println!("{verdict}");
    let rates = problem.channel.rates(&found.inputs)?;
    println!(
        "rates (bits): relay {:.6}, destination {:.6}",
        nats_to_bits(problem.b * rates.0),
        nats_to_bits(problem.b * rates.1)
    );
    Ok(())
}
