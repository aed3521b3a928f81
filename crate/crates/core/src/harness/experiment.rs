//! Monte Carlo campaigns.
//!
//! Trial `k` always draws its field from stream `(master_seed, k)`, trials
//! run on a rayon pool, and results are folded in trial order. The output
//! therefore does not depend on the number of workers.

use rayon::prelude::*;

use crate::asymptotics::{bh_limit_threshold, LimitParams};
use crate::error::{Error, Result};
use crate::field::{generate_field, ModelParams};
use crate::harness::config::{ExperimentConfig, ProcedureSpec};
use crate::metrics::{
    mfdr_analytic, tabulate, DesignPoint, Estimate, OutcomeTable, RateAccumulator, RateEstimates,
};
use crate::probability::Probability;
use crate::rng::SeedSpec;
use crate::special::{effect_for_power, z_test_power};

#[derive(Debug, Clone, Copy, PartialEq)]
struct TrialOutcome {
    table: OutcomeTable,
    tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSummary {
    pub mean: f64,
    pub sd: Option<f64>,
    pub stderr: Option<f64>,
}

/// Analytic reference values attached to a design point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Targets {
    /// u(μ, λ∞) for BH and oracle runs with 0 < π₁ < 1.
    pub tau_limit: Option<f64>,
    /// Exact mFDR of a fixed threshold given the realized m₀, m₁.
    pub mfdr: Option<f64>,
    pub ppv: Option<f64>,
    /// 1 − (1 − τ)^m₀ for a fixed threshold τ.
    pub fwer: Option<f64>,
}

/// Results for one (m, π₁, μ) setting.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub model: ModelParams<f64>,
    pub procedure: ProcedureSpec,
    pub rates: RateEstimates,
    pub tau: TauSummary,
    pub targets: Targets,
}

impl PointSummary {
    /// |mean τ̂ − u(μ, λ∞)| when a limit applies.
    pub fn tau_deviation(&self) -> Option<f64> {
        self.targets.tau_limit.map(|u| (self.tau.mean - u).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub points: Vec<PointSummary>,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))
}

fn run_trial(model: &ModelParams<f64>, procedure: &ProcedureSpec, seed: SeedSpec) -> Result<TrialOutcome> {
    let field = generate_field(model, seed);
    let decision = procedure.apply(&field)?;
    let table = tabulate(&decision, field.statuses())?;
    Ok(TrialOutcome { table, tau: decision.tau().value() })
}

fn targets_for(model: &ModelParams<f64>, procedure: &ProcedureSpec) -> Result<Targets> {
    let mut targets = Targets::default();
    let pi1 = model.pi1().value();
    match procedure {
        ProcedureSpec::Bh(gamma) | ProcedureSpec::Oracle(gamma) => {
            if pi1 > 0.0 && pi1 < 1.0 {
                let lp = LimitParams::new(model.mu().value(), pi1, gamma.value())?;
                targets.tau_limit = Some(bh_limit_threshold(&lp)?.value());
            }
        }
        ProcedureSpec::Alpha(_) | ProcedureSpec::Bonferroni(_) => {
            let tau = procedure.fixed_threshold(model.m()).expect("fixed-threshold procedure");
            let realized_pi1 = model.m1() as f64 / model.m() as f64;
            let design = DesignPoint {
                alpha: tau,
                power: z_test_power(tau, model.mu()),
                pi1: Probability::new(realized_pi1)?,
            };
            if let Ok(mfdr) = mfdr_analytic(&design) {
                targets.mfdr = Some(mfdr);
                targets.ppv = Some(1.0 - mfdr);
            }
            targets.fwer = Some(-(model.m0() as f64 * (-tau.value()).ln_1p()).exp_m1());
        }
    }
    Ok(targets)
}

fn summarize(
    model: &ModelParams<f64>,
    procedure: &ProcedureSpec,
    outcomes: &[TrialOutcome],
) -> Result<PointSummary> {
    let mut acc = RateAccumulator::new();
    for o in outcomes {
        acc.push(&o.table);
    }
    let rates = acc.finish()?;

    let n = outcomes.len() as f64;
    let mean = outcomes.iter().map(|o| o.tau).sum::<f64>() / n;
    let sd = (outcomes.len() > 1).then(|| {
        let ss: f64 = outcomes.iter().map(|o| (o.tau - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    });
    let tau = TauSummary { mean, sd, stderr: sd.map(|s| s / n.sqrt()) };

    Ok(PointSummary {
        model: *model,
        procedure: *procedure,
        rates,
        tau,
        targets: targets_for(model, procedure)?,
    })
}

fn run_point(
    model: &ModelParams<f64>,
    procedure: &ProcedureSpec,
    trials: u64,
    master_seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<PointSummary> {
    let results: Vec<Result<TrialOutcome>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|k| run_trial(model, procedure, SeedSpec::new(master_seed, k)))
            .collect()
    });
    let outcomes = results
        .into_iter()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| Error::Trial { index: k as u64, source: Box::new(e) }))
        .collect::<Result<Vec<_>>>()?;
    summarize(model, procedure, &outcomes)
}

/// Runs `config.trials` independent trials at the configured model.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    config.validate()?;
    let pool = pool(workers)?;
    let point = run_point(&config.model, &config.procedure, config.trials, config.master_seed, &pool)?;
    Ok(ExperimentReport { config: config.clone(), points: vec![point] })
}

/// One point per entry of `m_schedule`, all on the same seed family.
pub fn run_convergence_study(config: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    config.validate()?;
    let schedule = config
        .m_schedule
        .as_ref()
        .ok_or_else(|| Error::Config("convergence study needs `m_schedule`".into()))?;
    let pool = pool(workers)?;
    let points = schedule
        .iter()
        .map(|&m| {
            let model = config.model.with_m(m)?;
            run_point(&model, &config.procedure, config.trials, config.master_seed, &pool)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport { config: config.clone(), points })
}

/// One point per π₁ at the configured m, all on the same seed family.
pub fn run_pi1_sweep(config: &ExperimentConfig, pi1s: &[f64], workers: usize) -> Result<ExperimentReport> {
    config.validate()?;
    if pi1s.is_empty() {
        return Err(Error::Config("empty pi1 sweep".into()));
    }
    let pool = pool(workers)?;
    let points = pi1s
        .iter()
        .map(|&pi1| {
            let model = config.model.with_pi1(pi1).map_err(|e| Error::Config(e.to_string()))?;
            run_point(&model, &config.procedure, config.trials, config.master_seed, &pool)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport { config: config.clone(), points })
}

/// Simulated check that the share of false nulls among alpha-threshold
/// rejections matches the PPV formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpvCheck {
    /// Effect size giving each test the requested power at level α.
    pub mu: f64,
    pub expected: f64,
    /// Empirical PPV, mean S / mean R, with its delta-method stderr.
    pub estimate: Estimate,
    pub mfdr: Estimate,
    /// (estimate − expected) / stderr.
    pub z_score: Option<f64>,
}

pub fn ppv_consistency_check(
    design: &DesignPoint<f64>,
    m: usize,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<PpvCheck> {
    let mu = effect_for_power(design.alpha, design.power)?;
    let expected = crate::metrics::ppv_formula(design)?.value();
    let model = ModelParams::new(m, design.pi1.value(), mu.value())?;
    let config = ExperimentConfig::new(model, ProcedureSpec::Alpha(design.alpha), trials, master_seed)?;
    let report = run_experiment(&config, workers)?;
    let rates = report.points[0].rates;
    let z_score = match (rates.ppv.value, rates.ppv.stderr) {
        (Some(v), Some(se)) if se > 0.0 => Some((v - expected) / se),
        _ => None,
    };
    Ok(PpvCheck { mu: mu.value(), expected, estimate: rates.ppv, mfdr: rates.mfdr, z_score })
}
