//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{bh_limit_threshold, LimitParams};
use crate::error::{Error, Result};
use crate::field::{generate_field_with, read_table, ModelParams, PValueTable, Placement};
use crate::harness::config::ExperimentConfig;
use crate::harness::experiment::{
    ppv_consistency_check, run_convergence_study, run_experiment, run_pi1_sweep, ExperimentReport,
};
use crate::harness::report::{fmt_f64, FRAGMENT_COLUMNS};
use crate::metrics::{min_pi1_for_ppv_half, mfdr_analytic, ppv_formula, DesignPoint};
use crate::probability::Probability;
use crate::procedures::{
    alpha_threshold, benjamini_hochberg, bonferroni, oracle_threshold, ThresholdDecision,
};
use crate::rng::SeedSpec;

#[derive(Debug, Parser)]
#[command(name = "fdrlab", version, about = "Threshold multiple tests on simulated normal-means fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one field and write it as an `index,status,z,p` table.
    Simulate(SimulateArgs),
    /// Reject every P-value at or below a fixed level.
    Alpha {
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        input: DecisionInput,
    },
    /// Fixed level divided by the number of tests.
    Bonferroni {
        #[arg(long)]
        level: f64,
        #[command(flatten)]
        input: DecisionInput,
    },
    /// Benjamini-Hochberg step-up at FDR target gamma.
    Bh {
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        input: DecisionInput,
    },
    /// Largest threshold whose realized FDP is at most gamma (needs statuses).
    Oracle {
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        input: DecisionInput,
    },
    /// PPV and mFDR of a level-alpha test with the given power.
    Ppv(PpvArgs),
    /// Limiting BH / oracle threshold.
    Limit {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        pi1: f64,
        #[arg(long)]
        gamma: f64,
    },
    /// Run a configured Monte Carlo experiment.
    Experiment(ReportArgs),
    /// Run the configured `m_schedule`, or a pi1 sweep at the configured m.
    Converge {
        #[command(flatten)]
        report: ReportArgs,
        /// Comma-separated pi1 values; replaces the m schedule.
        #[arg(long, value_delimiter = ',')]
        pi1_sweep: Option<Vec<f64>>,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub pi1: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Put the false nulls first instead of shuffling them.
    #[arg(long)]
    pub ordered: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecisionInput {
    /// Table with a `p` column; `-` reads stdin.
    pub file: PathBuf,
    /// Print only the k most significant rejections.
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PpvArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub power: f64,
    #[arg(long)]
    pub pi1: f64,
    /// Also estimate PPV by simulation.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long, default_value_t = 10_000)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub config: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Exit status for an error: 1 for bad input, 2 for runtime failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::InvalidArgument(_)
        | Error::Domain(_)
        | Error::Undefined(_)
        | Error::Parse(_) => 1,
        Error::Io(_) | Error::Csv(_) | Error::Numerical(_) | Error::Trial { .. } => 2,
    }
}

fn open_output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn load_table(path: &Path) -> Result<PValueTable<f64>> {
    if path == Path::new("-") {
        read_table(io::stdin().lock())
    } else {
        read_table(File::open(path)?)
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    text.parse()
}

fn write_decision(
    out: &mut dyn Write,
    table: &PValueTable<f64>,
    decision: &ThresholdDecision<f64>,
    top: Option<usize>,
) -> Result<()> {
    writeln!(out, "tau,s_hat")?;
    writeln!(out, "{},{}", fmt_f64(decision.tau().value()), decision.s_hat())?;
    let positions = match top {
        Some(k) => decision.top_k(&table.p_values, k),
        None => decision.rejected().to_vec(),
    };
    for i in positions {
        writeln!(out, "{}", table.indices[i])?;
    }
    Ok(())
}

fn decide(command: &Command) -> Result<(PValueTable<f64>, ThresholdDecision<f64>, Option<usize>)> {
    let (input, decision): (&DecisionInput, _) = match command {
        Command::Alpha { alpha, input } => {
            let table = load_table(&input.file)?;
            let d = alpha_threshold(&table.p_values, Probability::new(*alpha)?);
            (input, (table, d))
        }
        Command::Bonferroni { level, input } => {
            let table = load_table(&input.file)?;
            let d = bonferroni(&table.p_values, Probability::new(*level)?)?;
            (input, (table, d))
        }
        Command::Bh { gamma, input } => {
            let table = load_table(&input.file)?;
            let d = benjamini_hochberg(&table.p_values, Probability::new(*gamma)?)?;
            (input, (table, d))
        }
        Command::Oracle { gamma, input } => {
            let table = load_table(&input.file)?;
            let statuses = table.statuses.as_deref().ok_or_else(|| {
                Error::invalid("the oracle needs a `status` column in the table")
            })?;
            let d = oracle_threshold(&table.p_values, statuses, Probability::new(*gamma)?)?;
            (input, (table, d))
        }
        _ => unreachable!("not a decision command"),
    };
    Ok((decision.0, decision.1, input.top))
}

fn write_report(report: &ExperimentReport, args: &ReportArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut out = open_output(args.output.as_deref(), stdout)?;
    match args.format {
        Format::Csv => report.write_csv(&mut out)?,
        Format::Json => report.write_json(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn ppv(args: &PpvArgs, out: &mut dyn Write) -> Result<()> {
    let design = DesignPoint::new(args.alpha, args.power, args.pi1)?;
    let ppv = ppv_formula(&design)?.value();
    let mfdr = mfdr_analytic(&design)?;
    let min_pi1 = min_pi1_for_ppv_half(design.alpha);
    writeln!(out, "alpha,power,pi1,ppv,mfdr,min_pi1_ppv_half")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        fmt_f64(args.alpha),
        fmt_f64(args.power),
        fmt_f64(args.pi1),
        fmt_f64(ppv),
        fmt_f64(mfdr),
        fmt_f64(min_pi1)
    )?;
    if !args.simulate {
        return Ok(());
    }

    let check = ppv_consistency_check(&design, args.m, args.trials, args.seed, args.workers)?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    writeln!(out)?;
    writeln!(out, "{}", FRAGMENT_COLUMNS.join(","))?;
    for (name, e) in [("ppv", check.estimate), ("mfdr", check.mfdr)] {
        let flag = e.flag.map(|f| f.to_string()).unwrap_or_default();
        writeln!(out, "{name},{},{},{},{flag}", opt(e.value), opt(e.stderr), args.trials)?;
    }
    writeln!(out, "mu,{},,{},", fmt_f64(check.mu), args.trials)?;
    writeln!(out, "ppv_z,{},,{},", opt(check.z_score), args.trials)?;
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let model = ModelParams::new(args.m, args.pi1, args.mu)?;
            let placement = if args.ordered { Placement::Leading } else { Placement::Shuffled };
            let field = generate_field_with(&model, SeedSpec::new(args.seed, args.stream), placement);
            let mut out = open_output(args.output.as_deref(), stdout)?;
            field.write_table(&mut out)?;
            out.flush()?;
        }
        cmd @ (Command::Alpha { .. }
        | Command::Bonferroni { .. }
        | Command::Bh { .. }
        | Command::Oracle { .. }) => {
            let (table, decision, top) = decide(&cmd)?;
            write_decision(stdout, &table, &decision, top)?;
        }
        Command::Ppv(args) => ppv(&args, stdout)?,
        Command::Limit { mu, pi1, gamma } => {
            let lp = LimitParams::new(mu, pi1, gamma)?;
            let u = bh_limit_threshold(&lp)?.value();
            writeln!(stdout, "lambda_inf,u_limit")?;
            writeln!(stdout, "{},{}", fmt_f64(lp.lambda_inf()), fmt_f64(u))?;
        }
        Command::Experiment(args) => {
            let config = load_config(&args.config)?;
            let report = run_experiment(&config, args.workers)?;
            write_report(&report, &args, stdout)?;
        }
        Command::Converge { report: args, pi1_sweep } => {
            let config = load_config(&args.config)?;
            let report = match pi1_sweep {
                Some(pi1s) => run_pi1_sweep(&config, &pi1s, args.workers)?,
                None => run_convergence_study(&config, args.workers)?,
            };
            write_report(&report, &args, stdout)?;
        }
    }
    stdout.flush()?;
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::Trial { index, .. } = &e {
                let _ = writeln!(stderr, "failed trial index: {index}");
            }
            exit_code(&e)
        }
    }
}
