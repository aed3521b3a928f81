//! Threshold multiple testing under the normal means model.
//!
//! Procedures and outcome metrics are generic over any [`Scalar`], including
//! exact rationals; everything touching the normal distribution needs a
//! floating-point [`Real`].

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod harness;
pub mod metrics;
pub mod probability;
pub mod procedures;
pub mod rng;
pub mod scalar;
pub mod special;

pub use asymptotics::{bh_limit_threshold, fixed_point_u, oracle_limit_threshold, LimitParams};
pub use error::{Error, Result};
pub use field::{
    empirical_pvalue_cdf, generate_field, generate_field_with, read_table, HypothesisField,
    HypothesisStatus, ModelParams, PValueTable, Placement,
};
pub use metrics::{
    estimate_rates, fdp, mfdr_analytic, min_pi1_for_ppv_half, ppv_formula,
    ppv_formula_heterogeneous, tabulate, DesignPoint, Estimate, EstimateFlag, OutcomeTable,
    RateAccumulator, RateEstimates,
};
pub use probability::{EffectSize, Probability};
pub use procedures::{
    alpha_threshold, benjamini_hochberg, bonferroni, oracle_threshold, ThresholdDecision,
};
pub use rng::{substream, SeedSpec, Substream};
pub use scalar::{Real, Scalar};
pub use special::{
    alt_pvalue_cdf, effect_for_power, normal_cdf, normal_quantile, normal_sf, z_test_power,
};

pub type Rational = num_rational::Rational64;

pub type ProbabilityF64 = Probability<f64>;
pub type ProbabilityF32 = Probability<f32>;
pub type ProbabilityExact = Probability<Rational>;
pub type EffectSizeF64 = EffectSize<f64>;
pub type ModelParamsF64 = ModelParams<f64>;
pub type HypothesisFieldF64 = HypothesisField<f64>;
pub type HypothesisFieldF32 = HypothesisField<f32>;
pub type ThresholdDecisionF64 = ThresholdDecision<f64>;
pub type ThresholdDecisionExact = ThresholdDecision<Rational>;
pub type DesignPointF64 = DesignPoint<f64>;
pub type DesignPointExact = DesignPoint<Rational>;
pub type LimitParamsF64 = LimitParams<f64>;
