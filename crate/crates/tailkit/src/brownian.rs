//! Supremum of Brownian motion over an independent random horizon.
//!
//! By the reflection principle, sup_{t ≤ T} B(t) has the law of |B(T)|, and
//! self-similarity factors that as √T·|N(0, 1)| — a product of independent
//! Weibull-type risks whenever T itself is Weibull-type.  For a horizon with
//! tail g(t)·exp(−L·t^p), running that product through the two-factor
//! machinery collapses to
//!
//! ```text
//! P(sup B > x) ~ √(2/(1+p)) · g(A₀·x^{2/(1+p)}) · exp(−(1/(2A₀) + L·A₀^p)·x^{2p/(1+p)}),
//! A₀ = (2Lp)^{−1/(1+p)}.
//! ```
//!
//! For an Exp(1) horizon the asymptotic is exact at every x: it reproduces
//! the first-passage identity P(sup B > x) = e^{−√2·x}.

use crate::error::Result;
use crate::product::product_tail_dependent;
use crate::tail::{AsymptoticForm, DependenceSpec, Modulation, WeibullTypeTail};

/// Tail of √T for a horizon T with tail g(t)·exp(−L·t^p):
/// P(√T > u) = g(u²)·exp(−L·u^{2p}).
fn sqrt_horizon_tail(time_tail: &WeibullTypeTail) -> Result<WeibullTypeTail> {
    let (l, p) = (time_tail.rate(), time_tail.exponent());
    match time_tail.modulation() {
        Modulation::PowerLaw { c, alpha } => {
            WeibullTypeTail::new(*c, 2.0 * alpha, l, 2.0 * p)
        }
        Modulation::Custom { alpha, .. } => {
            let log_g = time_tail.log_modulation_evaluator();
            WeibullTypeTail::with_modulation(move |u| log_g(u * u), 2.0 * alpha, l, 2.0 * p)
        }
    }
}

/// Half-normal tail P(|N(0,1)| > u) ~ √(2/π)·u^{−1}·exp(−u²/2).
fn half_normal_tail() -> WeibullTypeTail {
    WeibullTypeTail::new(
        (2.0 / std::f64::consts::PI).sqrt(),
        -1.0,
        0.5,
        2.0,
    )
    .expect("fixed half-normal parameters are valid")
}

/// Tail asymptotic of sup_{t ≤ T} B(t) for an independent Weibull-type
/// horizon T, assembled by pushing √T·|N(0,1)| through the independent
/// product pipeline.
pub fn bm_sup_tail(time_tail: &WeibullTypeTail) -> Result<AsymptoticForm> {
    product_tail_dependent(
        &sqrt_horizon_tail(time_tail)?,
        &half_normal_tail(),
        &DependenceSpec::Independent,
    )
}
