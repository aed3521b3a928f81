//! Outcome accounting and error-rate measures for threshold multiple tests.
//!
//! An [`OutcomeTable`] is the usual 2x2 split of one multiple test applied
//! to one field:
//!
//! ```text
//!                 true null   false null   total
//! rejected            V           S          R
//! not rejected        U           T        m - R
//! total              m0          m1          m
//! ```
//!
//! [`RateAccumulator`] turns many tables into Monte Carlo estimates of FDR,
//! mFDR, FWER and the empirical PPV.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::HypothesisStatus;
use crate::probability::Probability;
use crate::procedures::ThresholdDecision;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutcomeTable {
    /// Rejected true nulls.
    pub v: u64,
    /// Rejected false nulls.
    pub s: u64,
    /// Retained true nulls.
    pub u: u64,
    /// Retained false nulls.
    pub t: u64,
}

impl OutcomeTable {
    pub fn r(&self) -> u64 {
        self.v + self.s
    }

    pub fn m0(&self) -> u64 {
        self.v + self.u
    }

    pub fn m1(&self) -> u64 {
        self.s + self.t
    }

    pub fn m(&self) -> u64 {
        self.m0() + self.m1()
    }

    /// False discovery proportion V / max(R, 1).
    pub fn fdp(&self) -> f64 {
        self.v as f64 / self.r().max(1) as f64
    }
}

pub fn tabulate<T: Scalar>(
    decision: &ThresholdDecision<T>,
    statuses: &[HypothesisStatus],
) -> Result<OutcomeTable> {
    let (mut v, mut s) = (0u64, 0u64);
    for &i in decision.rejected() {
        match statuses.get(i) {
            Some(HypothesisStatus::TrueNull) => v += 1,
            Some(HypothesisStatus::FalseNull) => s += 1,
            None => {
                return Err(Error::invalid(format!(
                    "rejected index {i} outside {} statuses",
                    statuses.len()
                )))
            }
        }
    }
    let m1 = statuses.iter().filter(|s| s.is_false_null()).count() as u64;
    let m0 = statuses.len() as u64 - m1;
    Ok(OutcomeTable { v, s, u: m0 - v, t: m1 - s })
}

pub fn fdp(table: &OutcomeTable) -> f64 {
    table.fdp()
}

/// Level, power and false-null proportion of a homogeneous family of tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint<T> {
    pub alpha: Probability<T>,
    pub power: Probability<T>,
    pub pi1: Probability<T>,
}

impl<T: Scalar> DesignPoint<T> {
    pub fn new(alpha: T, power: T, pi1: T) -> Result<Self> {
        Ok(DesignPoint {
            alpha: Probability::new(alpha)?,
            power: Probability::new(power)?,
            pi1: Probability::new(pi1)?,
        })
    }

    /// (π₁·power, π₀·α, their sum): expected true and false rejections per
    /// hypothesis.
    fn rejection_masses(&self) -> Result<(T, T, T)> {
        let true_hits = self.power.value() * self.pi1.value();
        let false_hits = self.alpha.value() * (T::one() - self.pi1.value());
        let total = true_hits + false_hits;
        if total == T::zero() {
            return Err(Error::Undefined(
                "no rejections are expected (alpha and pi1 * power are both zero)".into(),
            ));
        }
        Ok((true_hits, false_hits, total))
    }
}

/// Positive predictive value (1−β)π₁ / ((1−β)π₁ + α(1−π₁)).
pub fn ppv_formula<T: Scalar>(d: &DesignPoint<T>) -> Result<Probability<T>> {
    let (true_hits, _, total) = d.rejection_masses()?;
    Ok(Probability::saturating(true_hits / total))
}

/// Marginal FDR of the alpha-threshold test, π₀α / (π₀α + π₁(1−β)).
pub fn mfdr_analytic<T: Scalar>(d: &DesignPoint<T>) -> Result<T> {
    let (_, false_hits, total) = d.rejection_masses()?;
    Ok(false_hits / total)
}

/// PPV for tests with individual levels and powers: the formula evaluated
/// at the average level and average power.
pub fn ppv_formula_heterogeneous<T: Scalar>(
    levels: &[Probability<T>],
    powers: &[Probability<T>],
    pi1: Probability<T>,
) -> Result<Probability<T>> {
    if levels.is_empty() || levels.len() != powers.len() {
        return Err(Error::invalid(format!(
            "need equally long non-empty level and power sequences, got {} and {}",
            levels.len(),
            powers.len()
        )));
    }
    let mean = |xs: &[Probability<T>]| {
        let sum = xs.iter().fold(T::zero(), |acc, p| acc + p.value());
        Probability::saturating(sum / T::from_count(xs.len()))
    };
    ppv_formula(&DesignPoint { alpha: mean(levels), power: mean(powers), pi1 })
}

/// Smallest π₁ at which PPV can reach 1/2, attained at power 1: the root of
/// π₁/(1−π₁) = α, i.e. α/(1+α).
pub fn min_pi1_for_ppv_half<T: Scalar>(alpha: Probability<T>) -> T {
    alpha.value() / (T::one() + alpha.value())
}

/// A Monte Carlo estimate. `value` is `None` when the estimand is undefined
/// for the observed data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub flag: Option<EstimateFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateFlag {
    /// No trial produced a rejection, so the ratio E(V)/E(R) is 0/0.
    NoRejections,
    /// Too few trials for a standard error.
    SingleTrial,
}

impl fmt::Display for EstimateFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateFlag::NoRejections => "undefined_no_rejections",
            EstimateFlag::SingleTrial => "single_trial",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimates {
    pub trials: u64,
    pub fdr: Estimate,
    pub mfdr: Estimate,
    pub fwer: Estimate,
    pub ppv: Estimate,
    pub mean_rejections: Estimate,
}

/// Fractional bits of the fixed-point FDP sums.
const FDP_BITS: u32 = 60;

/// v / r rounded to a multiple of 2^-60, as an integer.
fn fdp_fixed(v: u64, r: u64) -> u128 {
    if r == 0 {
        return 0;
    }
    let r = u128::from(r);
    ((u128::from(v) << FDP_BITS) + r / 2) / r
}

/// Sufficient statistics over trials. Every sum is an integer (FDP in
/// fixed point with 2^-60 resolution), so merging is exact in any order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateAccumulator {
    trials: u64,
    sum_v: u128,
    sum_s: u128,
    sum_vv: u128,
    sum_vr: u128,
    sum_rr: u128,
    any_false: u64,
    sum_fdp: u128,
    sum_fdp_sq: u128,
}

impl RateAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, table: &OutcomeTable) {
        let v = u128::from(table.v);
        let r = u128::from(table.r());
        let fdp = fdp_fixed(table.v, table.r());
        self.trials += 1;
        self.sum_v += v;
        self.sum_s += u128::from(table.s);
        self.sum_vv += v * v;
        self.sum_vr += v * r;
        self.sum_rr += r * r;
        self.any_false += u64::from(table.v >= 1);
        self.sum_fdp += fdp;
        self.sum_fdp_sq += (fdp * fdp + (1 << (FDP_BITS - 1))) >> FDP_BITS;
    }

    pub fn merge(&mut self, other: &RateAccumulator) {
        self.trials += other.trials;
        self.sum_v += other.sum_v;
        self.sum_s += other.sum_s;
        self.sum_vv += other.sum_vv;
        self.sum_vr += other.sum_vr;
        self.sum_rr += other.sum_rr;
        self.any_false += other.any_false;
        self.sum_fdp += other.sum_fdp;
        self.sum_fdp_sq += other.sum_fdp_sq;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn finish(&self) -> Result<RateEstimates> {
        if self.trials == 0 {
            return Err(Error::invalid("no outcome tables to aggregate"));
        }
        let n = self.trials as f64;
        let sum_r = self.sum_v + self.sum_s;
        let mean_v = self.sum_v as f64 / n;
        let mean_r = sum_r as f64 / n;
        let single = self.trials == 1;

        // Sample covariance of integer statistics, centred exactly:
        // (n Σxy − Σx Σy) / (n (n − 1)).
        let int_cov = |sum_xy: u128, sum_x: u128, sum_y: u128| {
            let n_int = u128::from(self.trials);
            let centred = (n_int * sum_xy) as i128 - (sum_x * sum_y) as i128;
            (!single).then(|| centred as f64 / (n * (n - 1.0)))
        };
        let se_of_mean = |var: Option<f64>| var.map(|v| (v.max(0.0) / n).sqrt());
        let flag_single = single.then_some(EstimateFlag::SingleTrial);

        let unit = (FDP_BITS as f64).exp2();
        let fdr_mean = self.sum_fdp as f64 / unit / n;
        let fdr_var = (!single).then(|| {
            (self.sum_fdp_sq as f64 / unit - n * fdr_mean * fdr_mean) / (n - 1.0)
        });
        let fdr = Estimate { value: Some(fdr_mean), stderr: se_of_mean(fdr_var), flag: flag_single };

        let hits = u128::from(self.any_false);
        let fwer = Estimate {
            value: Some(self.any_false as f64 / n),
            stderr: se_of_mean(int_cov(hits, hits, hits)),
            flag: flag_single,
        };

        let rr_var = int_cov(self.sum_rr, sum_r, sum_r);
        let mean_rejections =
            Estimate { value: Some(mean_r), stderr: se_of_mean(rr_var), flag: flag_single };

        let (mfdr, ppv) = if sum_r == 0 {
            let undefined =
                Estimate { value: None, stderr: None, flag: Some(EstimateFlag::NoRejections) };
            (undefined, undefined)
        } else {
            let ratio = mean_v / mean_r;
            // Delta method: Var(V̄/R̄) ≈ Var(V − ratio·R) / (n R̄²).
            let vv_var = int_cov(self.sum_vv, self.sum_v, self.sum_v);
            let vr_cov = int_cov(self.sum_vr, self.sum_v, sum_r);
            let stderr = match (vv_var, vr_cov, rr_var) {
                (Some(vv), Some(vr), Some(rr)) => {
                    let resid = (vv - 2.0 * ratio * vr + ratio * ratio * rr).max(0.0);
                    Some((resid / n).sqrt() / mean_r)
                }
                _ => None,
            };
            (
                Estimate { value: Some(ratio), stderr, flag: flag_single },
                Estimate { value: Some(1.0 - ratio), stderr, flag: flag_single },
            )
        };

        Ok(RateEstimates { trials: self.trials, fdr, mfdr, fwer, ppv, mean_rejections })
    }
}

/// Aggregates outcome tables into FDR, mFDR, FWER and PPV estimates.
pub fn estimate_rates(tables: &[OutcomeTable]) -> Result<RateEstimates> {
    let mut acc = RateAccumulator::new();
    for t in tables {
        acc.push(t);
    }
    acc.finish()
}
