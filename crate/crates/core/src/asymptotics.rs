//! Large-m limits of the BH and oracle thresholds.
//!
//! For μ > 0 and λ > 1 the equation F_μ(u) = λu has exactly one root in
//! (0, 1), written u(μ, λ). Both the BH threshold and the oracle threshold
//! converge to u(μ, λ∞) with λ∞ = 1 + (1 − γ)/(γ π₁).

use crate::error::{Error, Result};
use crate::probability::{EffectSize, Probability};
use crate::scalar::Real;
use crate::special::shifted_pvalue_cdf;

/// Smallest accepted distance of λ above 1.
pub const LAMBDA_MARGIN: f64 = 1e-12;

const BRACKET_EPS: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParams<T> {
    mu_inf: EffectSize<T>,
    pi1_inf: T,
    gamma: T,
}

impl<T: Real> LimitParams<T> {
    pub fn new(mu_inf: T, pi1_inf: T, gamma: T) -> Result<Self> {
        let open_unit = |x: T| x > T::zero() && x < T::one();
        if !open_unit(pi1_inf) {
            return Err(Error::invalid(format!("limiting pi1 must lie in (0, 1), got {pi1_inf}")));
        }
        if !open_unit(gamma) {
            return Err(Error::invalid(format!("FDR level must lie in (0, 1), got {gamma}")));
        }
        Ok(LimitParams { mu_inf: EffectSize::new(mu_inf)?, pi1_inf, gamma })
    }

    pub fn mu_inf(&self) -> EffectSize<T> {
        self.mu_inf
    }

    pub fn pi1_inf(&self) -> T {
        self.pi1_inf
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// λ∞ = 1 + (1 − γ) / (γ · π₁∞).
    pub fn lambda_inf(&self) -> T {
        T::one() + (T::one() - self.gamma) / (self.gamma * self.pi1_inf)
    }

    /// (1 − π₁)u + π₁F_μ(u) − u/γ: zero exactly at the limiting threshold.
    pub fn mixture_residual(&self, u: T) -> T {
        let f = shifted_pvalue_cdf(u, self.mu_inf.value());
        (T::one() - self.pi1_inf) * u + self.pi1_inf * f - u / self.gamma
    }
}

/// The unique u in (0, 1) with F_μ(u) = λu.
///
/// g(u) = F_μ(u) − λu is positive near 0 (F_μ has infinite slope there)
/// and negative near 1, with a single sign change. The root is bracketed and
/// bisected, geometrically while the bracket spans orders of magnitude, down
/// to a relative width of a few ulps.
pub fn fixed_point_u<T: Real>(mu: EffectSize<T>, lambda: T) -> Result<Probability<T>> {
    if !(lambda.is_finite() && lambda > T::one() + T::lit(LAMBDA_MARGIN)) {
        return Err(Error::invalid(format!(
            "lambda must exceed 1 (F_mu(u) > u on (0, 1) leaves no interior root), got {lambda}"
        )));
    }
    let mu = mu.value();
    let g = |u: T| shifted_pvalue_cdf(u, mu) - lambda * u;

    let mut hi = T::one() - T::lit(BRACKET_EPS);
    let mut lo = T::lit(BRACKET_EPS);
    // Very large λ puts the root below the default bracket: walk down.
    while g(lo) <= T::zero() {
        hi = lo;
        lo = lo * T::lit(BRACKET_EPS);
        if lo <= T::min_positive_value() {
            return Err(Error::Numerical(format!(
                "fixed point for mu = {mu}, lambda = {lambda} is below the smallest normal number"
            )));
        }
    }
    debug_assert!(g(hi) < T::zero());

    let rel_tol = T::epsilon() * T::lit(4.0);
    for _ in 0..4096 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = if hi > lo * T::lit(4.0) { lo.sqrt() * hi.sqrt() } else { lo + (hi - lo) * T::lit(0.5) };
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Report the endpoint with the smaller residual.
    let u = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    Ok(Probability::new_unchecked(u))
}

/// Limit in probability of the BH threshold.
pub fn bh_limit_threshold<T: Real>(lp: &LimitParams<T>) -> Result<Probability<T>> {
    let u = fixed_point_u(lp.mu_inf, lp.lambda_inf())?;
    debug_assert!(
        lp.mixture_residual(u.value()).abs() <= T::lit(1e3) * T::epsilon(),
        "mixture cross-check failed at u = {u}"
    );
    Ok(u)
}

/// Limit in probability of the oracle threshold; the same value as
/// [`bh_limit_threshold`].
pub fn oracle_limit_threshold<T: Real>(lp: &LimitParams<T>) -> Result<Probability<T>> {
    bh_limit_threshold(lp)
}
