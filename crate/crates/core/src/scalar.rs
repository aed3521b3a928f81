//! Scalar abstractions.
//!
//! Two tiers: [`Scalar`] is enough for the counting and ratio arithmetic of
//! the threshold procedures and the PPV/mFDR formulas, and admits exact
//! rationals. [`Real`] adds the floating-point machinery needed by the
//! normal special functions, the field simulator and the fixed-point solver.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Ordered field element: `f32`, `f64` or an exact rational.
pub trait Scalar:
    Num + PartialOrd + Copy + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Num + PartialOrd + Copy + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// IEEE floating-point scalar (`f32` or `f64`).
pub trait Real: Scalar + Float + FloatConst + ToPrimitive + LowerExp {
    /// Significand precision in bits, including the implicit bit.
    const MANTISSA_DIGITS: u32;

    /// Converts an `f64` literal. Coefficient tables are stored as `f64`.
    fn lit(x: f64) -> Self;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    const MANTISSA_DIGITS: u32 = f64::MANTISSA_DIGITS;

    #[inline(always)]
    fn lit(x: f64) -> Self {
        x
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Real for f32 {
    const MANTISSA_DIGITS: u32 = f32::MANTISSA_DIGITS;

    #[inline(always)]
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}
