//! Uncertainty for observed alarm rates.

use statrs::distribution::{ContinuousCDF, Gamma};

/// Two-sided interval on a Poisson rate per hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInterval {
    pub lower_per_h: f64,
    pub upper_per_h: f64,
}

impl RateInterval {
    pub fn contains(&self, rate_per_h: f64) -> bool {
        self.lower_per_h <= rate_per_h && rate_per_h <= self.upper_per_h
    }
}

/// Exact two-sided confidence interval for a Poisson rate, given `count`
/// observed events over `hours` of exposure.
///
/// Uses the gamma-quantile form of the exact construction: with
/// `alpha = 1 − confidence`, the bounds are the `alpha/2` quantile of
/// Gamma(count, 1) and the `1 − alpha/2` quantile of Gamma(count + 1, 1),
/// both divided by the exposure. The lower bound is 0 when no events were
/// observed.
///
/// Panics if `hours` is not positive or `confidence` is outside (0, 1).
pub fn fp_rate_interval(count: u64, hours: f64, confidence: f64) -> RateInterval {
    assert!(
        hours.is_finite() && hours > 0.0,
        "exposure hours must be positive"
    );
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0,1)"
    );
    let alpha = 1.0 - confidence;
    let lower = if count == 0 {
        0.0
    } else {
        Gamma::new(count as f64, 1.0)
            .expect("valid gamma shape")
            .inverse_cdf(alpha / 2.0)
            / hours
    };
    let upper = Gamma::new(count as f64 + 1.0, 1.0)
        .expect("valid gamma shape")
        .inverse_cdf(1.0 - alpha / 2.0)
        / hours;
    RateInterval {
        lower_per_h: lower,
        upper_per_h: upper,
    }
}
