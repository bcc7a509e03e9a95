//! Finite-size concentration toolbox.
//!
//! Two ingredients back the whole security stack: a variant Chernoff bound
//! pair converting an observed count into bounds on its expected value, and
//! a random-sampling-without-replacement tail relating a sampled error count
//! to the unsampled remainder. The latter sits behind a strategy trait so a
//! tighter inequality can be swapped in without touching callers.

use crate::math;

/// Natural-log probability. `0.0` encodes a certain event and
/// `f64::NEG_INFINITY` an impossible one; linear values that underflow f64
/// stay meaningful in this form.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(pub f64);

impl LogProb {
    pub fn certain() -> Self {
        LogProb(0.0)
    }

    pub fn never() -> Self {
        LogProb(f64::NEG_INFINITY)
    }

    pub fn from_linear(p: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p));
        LogProb(math::ln(p))
    }

    /// Linear probability; may underflow to 0 for very negative logs.
    pub fn linear(self) -> f64 {
        math::exp(self.0)
    }

    pub fn log10(self) -> f64 {
        self.0 / core::f64::consts::LN_10
    }

    /// Log-domain comparison against a linear target, immune to underflow.
    pub fn at_most(self, target: f64) -> bool {
        self.0 <= math::ln(target)
    }
}

/// Failure-probability budget of the two concentration tools.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Confidence {
    /// Failure probability of each variant Chernoff conversion.
    pub eps_1: f64,
    /// Failure probability of the sampling-without-replacement bound.
    pub eps_2: f64,
}

impl Confidence {
    pub fn validate(&self) -> bool {
        self.eps_1 > 0.0 && self.eps_1 <= 1.0 && self.eps_2 > 0.0 && self.eps_2 < 1.0
    }
}

fn beta(eps_1: f64) -> f64 {
    assert!(
        eps_1 > 0.0 && eps_1 <= 1.0,
        "chernoff failure probability must lie in (0, 1]"
    );
    math::ln(1.0 / eps_1)
}

/// Upper bound on the expected value behind an observed count `x`:
/// `x + b + sqrt(2*b*x + b^2)` with `b = ln(1/eps_1)`.
pub fn chernoff_upper(x: f64, eps_1: f64) -> f64 {
    assert!(x >= 0.0, "observed count must be non-negative");
    let b = beta(eps_1);
    x + b + math::sqrt(2.0 * b * x + b * b)
}

/// Lower bound on the expected value behind an observed count `x`:
/// `x - b/2 - sqrt(2*b*x + b^2/4)`, clamped at 0 so downstream estimates
/// never go negative.
pub fn chernoff_lower(x: f64, eps_1: f64) -> f64 {
    assert!(x >= 0.0, "observed count must be non-negative");
    let b = beta(eps_1);
    let raw = x - 0.5 * b - math::sqrt(2.0 * b * x + 0.25 * b * b);
    if raw > 0.0 {
        raw
    } else {
        0.0
    }
}

/// Sampling-without-replacement bound: given `observed_errors` among a
/// uniform `sample_size`-subset of a `population_size` population, how many
/// errors can the remainder hold?
pub trait RswrStrategy {
    /// Upper bound, valid with probability at least `1 - eps`, on the error
    /// **rate gap** between the unsampled remainder and the sample.
    fn remainder_rate_gap(&self, sample_size: f64, remainder_size: f64, eps: f64) -> f64;

    /// Tail probability that the remainder error rate exceeds the sample
    /// error rate by at least `gap`.
    fn excess_tail(&self, gap: f64, sample_size: f64, remainder_size: f64) -> LogProb;

    fn name(&self) -> &'static str;
}

/// Serfling-type hypergeometric tail.
///
/// For a uniform without-replacement sample of size `n` from a {0,1}
/// population of size `N`, the sample mean deviates from the population mean
/// by `g` with probability at most `exp(-2 n g^2 N / (N - n + 1))`. Applying
/// this to either side of a sample/remainder split and converting the
/// population-mean deviation into a sample-vs-remainder gap gives the two
/// exponents below; the larger one is used.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerflingBound;

impl SerflingBound {
    fn exponent_coefficient(sample: f64, remainder: f64) -> f64 {
        let total = sample + remainder;
        if sample <= 0.0 || remainder <= 0.0 || total <= 0.0 {
            return 0.0;
        }
        // remainder treated as the Serfling sample
        let c1 = 2.0 * remainder * sample * sample / (total * (sample + 1.0));
        // sample treated as the Serfling sample
        let c2 = 2.0 * sample * remainder * remainder / (total * (remainder + 1.0));
        if c1 > c2 {
            c1
        } else {
            c2
        }
    }
}

impl RswrStrategy for SerflingBound {
    fn remainder_rate_gap(&self, sample_size: f64, remainder_size: f64, eps: f64) -> f64 {
        assert!(eps > 0.0 && eps < 1.0, "rswr failure probability in (0, 1)");
        let coeff = Self::exponent_coefficient(sample_size, remainder_size);
        if coeff <= 0.0 {
            // nothing sampled or nothing left: the gap is vacuous
            return if remainder_size <= 0.0 { 0.0 } else { 1.0 };
        }
        math::sqrt(math::ln(1.0 / eps) / coeff)
    }

    fn excess_tail(&self, gap: f64, sample_size: f64, remainder_size: f64) -> LogProb {
        if gap <= 0.0 {
            return LogProb::certain();
        }
        if remainder_size <= 0.0 {
            return LogProb::never();
        }
        let coeff = Self::exponent_coefficient(sample_size, remainder_size);
        if coeff <= 0.0 {
            return LogProb::certain();
        }
        LogProb(-coeff * gap * gap)
    }

    fn name(&self) -> &'static str {
        "serfling"
    }
}

/// Upper bound, valid with probability at least `1 - eps_2`, on the number
/// of errors in the unsampled remainder of the population, given
/// `observed_errors` in a uniform without-replacement sample.
///
/// Uses [`SerflingBound`]; callers needing a different inequality go through
/// [`RswrStrategy`] directly.
pub fn rswr_upper_bound(
    observed_errors: f64,
    sample_size: f64,
    population_size: f64,
    eps_2: f64,
) -> f64 {
    rswr_upper_bound_with(
        &SerflingBound,
        observed_errors,
        sample_size,
        population_size,
        eps_2,
    )
}

pub fn rswr_upper_bound_with(
    strategy: &dyn RswrStrategy,
    observed_errors: f64,
    sample_size: f64,
    population_size: f64,
    eps_2: f64,
) -> f64 {
    assert!(
        observed_errors >= 0.0 && observed_errors <= sample_size && sample_size <= population_size,
        "count ordering violated: errors <= sample <= population required"
    );
    let remainder = population_size - sample_size;
    if remainder <= 0.0 {
        return 0.0;
    }
    if sample_size <= 0.0 {
        // nothing observed: only the trivial bound holds
        return remainder;
    }
    let gap = strategy.remainder_rate_gap(sample_size, remainder, eps_2);
    let rate = observed_errors / sample_size + gap;
    let bound = remainder * rate;
    if bound < remainder {
        bound
    } else {
        remainder
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chernoff_upper_collapses_at_zero() {
        // x = 0 with eps = e^-1 gives b = 1 and bound 2b
        let eps = math::exp(-1.0);
        let up = chernoff_upper(0.0, eps);
        assert!((up - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chernoff_upper_worked_value() {
        // direct arithmetic: b = ln(1e10), 100 + b + sqrt(200 b + b^2)
        let b = math::ln(1e10);
        let expect = 100.0 + b + math::sqrt(2.0 * b * 100.0 + b * b);
        let got = chernoff_upper(100.0, 1e-10);
        assert!((got - expect).abs() < 1e-9);
        assert!((got - 194.69).abs() < 0.01, "got {got}");
    }

    #[test]
    fn chernoff_lower_clamps_at_zero() {
        assert_eq!(chernoff_lower(0.0, 1e-10), 0.0);
        assert_eq!(chernoff_lower(0.0, 0.5), 0.0);
    }

    #[test]
    fn chernoff_lower_worked_value() {
        let b = math::ln(1e10);
        let expect = 1e6 - 0.5 * b - math::sqrt(2.0 * b * 1e6 + 0.25 * b * b);
        let got = chernoff_lower(1e6, 1e-10);
        assert!((got - expect).abs() < 1e-6);
        // direct evaluation lands near 993202.3
        assert!((got - 993202.3).abs() < 0.5, "got {got}");
    }

    #[test]
    fn chernoff_bounds_bracket_observation() {
        for &x in &[0.0, 1.0, 10.0, 1e3, 1e6, 1e9] {
            for &eps in &[1e-2, 1e-6, 1e-10] {
                let lo = chernoff_lower(x, eps);
                let up = chernoff_upper(x, eps);
                assert!(lo <= x && x <= up, "x={x} eps={eps}");
            }
        }
    }

    #[test]
    fn chernoff_bounds_monotone_in_x() {
        let eps = 1e-10;
        assert!(chernoff_upper(100.0, eps) < chernoff_upper(200.0, eps));
        assert!(chernoff_lower(100.0, eps) <= chernoff_lower(200.0, eps));
    }

    #[test]
    fn chernoff_bounds_widen_as_eps_shrinks() {
        let x = 500.0;
        assert!(chernoff_upper(x, 1e-12) > chernoff_upper(x, 1e-4));
        assert!(chernoff_lower(x, 1e-12) < chernoff_lower(x, 1e-4));
    }

    #[test]
    fn rswr_nothing_unsampled() {
        assert_eq!(rswr_upper_bound(0.0, 1e4, 1e4, 1e-10), 0.0);
    }

    #[test]
    fn rswr_zero_errors_still_pays_finite_size_penalty() {
        let bound = rswr_upper_bound(0.0, 1e4, 1e5, 1e-10);
        assert!(bound > 0.0);
        assert!(bound < 9e4);
    }

    #[test]
    fn rswr_monotone_in_sample_size() {
        // at a fixed observed error fraction, more sampling tightens the bound
        let population = 1e5;
        let mut last = f64::INFINITY;
        for &sample in &[1e3, 5e3, 2e4, 5e4] {
            let errors = 0.05 * sample;
            let bound = rswr_upper_bound(errors, sample, population, 1e-6);
            let remainder = population - sample;
            let rate = bound / remainder;
            assert!(rate < last, "sample {sample}: rate {rate} vs {last}");
            last = rate;
        }
    }

    #[test]
    fn excess_tail_matches_gap_inversion() {
        let s = SerflingBound;
        let (n_s, n_r) = (2e3, 1.8e4);
        let eps = 1e-8;
        let gap = s.remainder_rate_gap(n_s, n_r, eps);
        let tail = s.excess_tail(gap, n_s, n_r);
        assert!((tail.0 - math::ln(eps)).abs() < 1e-6);
    }

    #[test]
    fn log_prob_comparisons_survive_underflow() {
        let tiny = LogProb(-1250.0);
        assert_eq!(tiny.linear(), 0.0); // underflows linearly
        assert!(tiny.at_most(1e-10)); // but still compares correctly
        assert!(!LogProb(-20.0).at_most(1e-10));
    }
}
