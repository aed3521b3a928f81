use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// A value in the closed unit interval: P-values, levels, thresholds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability<T>(T);

impl<T: Scalar> Probability<T> {
    /// Rejects anything outside `[0, 1]`, including NaN.
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Probability(value))
        } else {
            Err(Error::invalid(format!("probability {value} outside [0, 1]")))
        }
    }

    /// Caller guarantees `0 <= value <= 1`.
    pub(crate) fn new_unchecked(value: T) -> Self {
        debug_assert!(value >= T::zero() && value <= T::one());
        Probability(value)
    }

    /// Clamps into `[0, 1]`; for results that can drift by an ulp.
    pub(crate) fn saturating(value: T) -> Self {
        if value < T::zero() {
            Probability(T::zero())
        } else if value > T::one() {
            Probability(T::one())
        } else {
            Probability(value)
        }
    }

    pub fn zero() -> Self {
        Probability(T::zero())
    }

    pub fn one() -> Self {
        Probability(T::one())
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(T::one() - self.0)
    }
}

impl<T: Scalar> fmt::Display for Probability<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Alternative mean shift `mu > 0` of the normal means model.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EffectSize<T>(T);

impl<T: Real> EffectSize<T> {
    pub fn new(mu: T) -> Result<Self> {
        if mu.is_finite() && mu > T::zero() {
            Ok(EffectSize(mu))
        } else {
            Err(Error::invalid(format!("effect size must be finite and > 0, got {mu}")))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

impl<T: Real> fmt::Display for EffectSize<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
