//! Threshold multiple tests.
//!
//! Every procedure here rejects exactly `{ i : p_i <= tau }` for a threshold
//! `tau` it computes from the P-values (and, for the oracle, from the true
//! statuses). They differ only in how `tau` is chosen.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::HypothesisStatus;
use crate::probability::Probability;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdDecision<T> {
    tau: Probability<T>,
    rejected: Vec<usize>,
}

impl<T: Scalar> ThresholdDecision<T> {
    /// Rejects every `i` with `p_values[i] <= tau`.
    pub fn from_threshold(p_values: &[Probability<T>], tau: Probability<T>) -> Self {
        let rejected = p_values
            .iter()
            .enumerate()
            .filter(|(_, p)| **p <= tau)
            .map(|(i, _)| i)
            .collect();
        ThresholdDecision { tau, rejected }
    }

    pub fn tau(&self) -> Probability<T> {
        self.tau
    }

    /// Rejected indices in increasing order.
    pub fn rejected(&self) -> &[usize] {
        &self.rejected
    }

    pub fn s_hat(&self) -> usize {
        self.rejected.len()
    }

    pub fn is_rejected(&self, index: usize) -> bool {
        self.rejected.binary_search(&index).is_ok()
    }

    /// Up to `k` rejected indices, most significant first.
    pub fn top_k(&self, p_values: &[Probability<T>], k: usize) -> Vec<usize> {
        let mut out = self.rejected.clone();
        out.sort_by(|&a, &b| cmp_prob(&p_values[a], &p_values[b]).then(a.cmp(&b)));
        out.truncate(k);
        out
    }
}

fn cmp_prob<T: Scalar>(a: &Probability<T>, b: &Probability<T>) -> Ordering {
    // Probability excludes NaN, so the order is total.
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn sorted_values<T: Scalar>(p_values: &[Probability<T>]) -> Vec<Probability<T>> {
    let mut sorted = p_values.to_vec();
    sorted.sort_unstable_by(cmp_prob);
    sorted
}

/// Rejects every P-value at or below `alpha`.
pub fn alpha_threshold<T: Scalar>(
    p_values: &[Probability<T>],
    alpha: Probability<T>,
) -> ThresholdDecision<T> {
    ThresholdDecision::from_threshold(p_values, alpha)
}

/// Alpha threshold at `fwer_level / m`.
pub fn bonferroni<T: Scalar>(
    p_values: &[Probability<T>],
    fwer_level: Probability<T>,
) -> Result<ThresholdDecision<T>> {
    if p_values.is_empty() {
        return Err(Error::invalid("bonferroni needs at least one p-value"));
    }
    if fwer_level.value() <= T::zero() {
        return Err(Error::invalid("bonferroni level must be positive"));
    }
    let tau = Probability::new_unchecked(fwer_level.value() / T::from_count(p_values.len()));
    Ok(alpha_threshold(p_values, tau))
}

fn check_fdr_level<T: Scalar>(gamma: Probability<T>) -> Result<()> {
    if gamma.value() <= T::zero() || gamma.value() >= T::one() {
        return Err(Error::invalid(format!("FDR level must lie in (0, 1), got {gamma}")));
    }
    Ok(())
}

/// Benjamini–Hochberg step-up at level `gamma`.
///
/// `s_hat` is the largest `s` with `p_(s) <= s * gamma / m` and the
/// threshold is `s_hat * gamma / m`; ties at the threshold are rejected.
pub fn benjamini_hochberg<T: Scalar>(
    p_values: &[Probability<T>],
    gamma: Probability<T>,
) -> Result<ThresholdDecision<T>> {
    if p_values.is_empty() {
        return Err(Error::invalid("benjamini_hochberg needs at least one p-value"));
    }
    check_fdr_level(gamma)?;

    let m = T::from_count(p_values.len());
    let step = |s: usize| T::from_count(s) * gamma.value() / m;
    let sorted = sorted_values(p_values);

    // Scanning down from the top, the first hit is the maximum.
    let s_hat = (1..=sorted.len())
        .rev()
        .find(|&s| sorted[s - 1].value() <= step(s))
        .unwrap_or(0);

    let tau = Probability::new_unchecked(step(s_hat));
    let decision = ThresholdDecision::from_threshold(p_values, tau);
    debug_assert_eq!(decision.s_hat(), s_hat);
    Ok(decision)
}

/// Largest threshold whose realized false discovery proportion stays at or
/// below `gamma`, given the true statuses.
///
/// FDP_t only changes at observed P-values, so the search runs over `{0}`
/// and the distinct observed values; the reported `tau` is the largest
/// qualifying observed value, or 0 when none qualifies. With continuous
/// P-values t = 0 always qualifies; only a true null at exactly p = 0 can
/// leave the search empty.
pub fn oracle_threshold<T: Scalar>(
    p_values: &[Probability<T>],
    statuses: &[HypothesisStatus],
    gamma: Probability<T>,
) -> Result<ThresholdDecision<T>> {
    if p_values.len() != statuses.len() {
        return Err(Error::invalid(format!(
            "{} p-values but {} statuses",
            p_values.len(),
            statuses.len()
        )));
    }
    check_fdr_level(gamma)?;

    let mut order: Vec<usize> = (0..p_values.len()).collect();
    order.sort_unstable_by(|&a, &b| cmp_prob(&p_values[a], &p_values[b]));

    // V_t <= gamma * max(R_t, 1), compared without division.
    let fdp_ok = |v: usize, r: usize| T::from_count(v) <= gamma.value() * T::from_count(r.max(1));

    let mut v = 0usize;
    let mut r = 0usize;
    let mut i = 0usize;
    // Candidate t = 0 includes any P-values that are exactly zero.
    while i < order.len() && p_values[order[i]].value() <= T::zero() {
        v += usize::from(!statuses[order[i]].is_false_null());
        r += 1;
        i += 1;
    }
    let mut tau = Probability::zero();
    while i < order.len() {
        let t = p_values[order[i]];
        while i < order.len() && p_values[order[i]] == t {
            v += usize::from(!statuses[order[i]].is_false_null());
            r += 1;
            i += 1;
        }
        if fdp_ok(v, r) {
            tau = t;
        }
    }
    Ok(ThresholdDecision::from_threshold(p_values, tau))
}
