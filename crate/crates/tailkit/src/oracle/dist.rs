//! Exact laws used as ground truth.
//!
//! Each variant provides survival, density, and CDF (log-space versions
//! stay accurate to x far beyond linear-scale underflow), the quantile of a
//! survival level for inverse-transform sampling, and its own Weibull-type
//! asymptotic: the (C, α, L, p) quadruple such that
//! P(X > x) ~ C·x^α·exp(−L·x^p).

use crate::bessel::log_bessel_k;
use crate::error::{Result, TailError};
use crate::numerics::quad::{log_integrate, QuadratureSettings};
use crate::numerics::special::{log_gamma_upper_q, log_norm_sf, ln_gamma, LN_2PI};
use crate::tail::WeibullTypeTail;

/// A fully known positive law with a Weibull-type tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleDistribution {
    /// P(X > x) = exp(−rate·x).
    Exponential { rate: f64 },
    /// P(X > x) = exp(−rate·x^exponent).
    Weibull { rate: f64, exponent: f64 },
    /// Shape-scale Gamma: density x^{shape−1}e^{−x/scale}/(Γ(shape)·scale^{shape}).
    Gamma { shape: f64, scale: f64 },
    /// Law of |N(0, 1)|.
    HalfNormal,
    /// Law of S = √T where T has the generalised inverse Gaussian density
    /// ∝ t^{λ−1}·exp(−(δ²/t + α²·t)/2).
    GigSqrt { lambda: f64, delta: f64, alpha: f64 },
}

impl OracleDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OracleDistribution::Exponential { rate } => {
                positive("exponential rate", rate)
            }
            OracleDistribution::Weibull { rate, exponent } => {
                positive("weibull rate", rate)?;
                positive("weibull exponent", exponent)
            }
            OracleDistribution::Gamma { shape, scale } => {
                positive("gamma shape", shape)?;
                positive("gamma scale", scale)
            }
            OracleDistribution::HalfNormal => Ok(()),
            OracleDistribution::GigSqrt {
                lambda,
                delta,
                alpha,
            } => {
                if !lambda.is_finite() || lambda.abs() > 50.0 {
                    return Err(TailError::Domain(format!(
                        "gig lambda must lie in [-50, 50], got {lambda}"
                    )));
                }
                positive("gig delta", delta)?;
                positive("gig alpha", alpha)
            }
        }
    }

    /// ln P(X > x) for x ≥ 0.
    pub fn log_survival(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(TailError::Domain(format!(
                "survival evaluation needs x >= 0, got {x}"
            )));
        }
        match *self {
            OracleDistribution::Exponential { rate } => Ok(-rate * x),
            OracleDistribution::Weibull { rate, exponent } => Ok(-rate * x.powf(exponent)),
            OracleDistribution::Gamma { shape, scale } => {
                Ok(log_gamma_upper_q(shape, x / scale))
            }
            OracleDistribution::HalfNormal => Ok(std::f64::consts::LN_2 + log_norm_sf(x)),
            OracleDistribution::GigSqrt { .. } => self.gig_sqrt_log_survival(x),
        }
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        self.log_survival(x).map(f64::exp)
    }

    /// P(X ≤ x); clamps x < 0 to 0 mass.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        Ok(1.0 - self.survival(x)?)
    }

    /// ln of the density at x > 0.
    pub fn log_density(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(TailError::Domain(format!(
                "density evaluation needs x > 0, got {x}"
            )));
        }
        match *self {
            OracleDistribution::Exponential { rate } => Ok(rate.ln() - rate * x),
            OracleDistribution::Weibull { rate, exponent } => Ok(rate.ln()
                + exponent.ln()
                + (exponent - 1.0) * x.ln()
                - rate * x.powf(exponent)),
            OracleDistribution::Gamma { shape, scale } => Ok((shape - 1.0) * x.ln()
                - x / scale
                - ln_gamma(shape)
                - shape * scale.ln()),
            OracleDistribution::HalfNormal => {
                // √(2/π)·e^{−x²/2}.
                Ok(std::f64::consts::LN_2 - 0.5 * LN_2PI - 0.5 * x * x)
            }
            OracleDistribution::GigSqrt {
                lambda,
                delta,
                alpha,
            } => {
                // f_S(s) = 2·c·s^{2λ−1}·exp(−(δ²/s² + α²s²)/2).
                let lc = gig_log_normalizer(lambda, delta, alpha)?;
                Ok(std::f64::consts::LN_2 + lc + (2.0 * lambda - 1.0) * x.ln()
                    - 0.5 * (delta * delta / (x * x) + alpha * alpha * x * x))
            }
        }
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.log_density(x).map(f64::exp)
    }

    /// The Weibull-type asymptotic of this law's tail.
    pub fn asymptotic_tail(&self) -> Result<WeibullTypeTail> {
        self.validate()?;
        match *self {
            OracleDistribution::Exponential { rate } => WeibullTypeTail::new(1.0, 0.0, rate, 1.0),
            OracleDistribution::Weibull { rate, exponent } => {
                WeibullTypeTail::new(1.0, 0.0, rate, exponent)
            }
            OracleDistribution::Gamma { shape, scale } => {
                // Q(k, x/θ) ~ (x/θ)^{k−1}·e^{−x/θ}/Γ(k).
                let c = scale.powf(1.0 - shape) / ln_gamma(shape).exp();
                WeibullTypeTail::new(c, shape - 1.0, 1.0 / scale, 1.0)
            }
            OracleDistribution::HalfNormal => {
                // 2Φ̄(x) ~ √(2/π)·x⁻¹·e^{−x²/2}.
                let c = (2.0 / std::f64::consts::PI).sqrt();
                WeibullTypeTail::new(c, -1.0, 0.5, 2.0)
            }
            OracleDistribution::GigSqrt {
                lambda,
                delta,
                alpha,
            } => {
                // P(S > x) = P(T > x²) ~ (2c/α²)·x^{2λ−2}·e^{−α²x²/2}.
                let lc = gig_log_normalizer(lambda, delta, alpha)?;
                let c = (lc + std::f64::consts::LN_2 - 2.0 * alpha.ln()).exp();
                WeibullTypeTail::new(c, 2.0 * lambda - 2.0, 0.5 * alpha * alpha, 2.0)
            }
        }
    }

    /// The x with P(X > x) = s, for s ∈ (0, 1].
    pub fn quantile_survival(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(TailError::Domain(format!(
                "survival level must lie in (0, 1], got {s}"
            )));
        }
        if s == 1.0 {
            return Ok(0.0);
        }
        match *self {
            OracleDistribution::Exponential { rate } => Ok(-s.ln() / rate),
            OracleDistribution::Weibull { rate, exponent } => {
                Ok((-s.ln() / rate).powf(1.0 / exponent))
            }
            _ => self.quantile_survival_bisect(s),
        }
    }

    /// Bisection on the (nonincreasing) log-survival; used for the variants
    /// without a closed-form inverse.
    fn quantile_survival_bisect(&self, s: f64) -> Result<f64> {
        let target = s.ln();
        let mut hi = 1.0;
        let mut doublings = 0;
        while self.log_survival(hi)? > target {
            hi *= 2.0;
            doublings += 1;
            if doublings > 600 {
                return Err(TailError::Domain(format!(
                    "survival level {s:.6e} not reachable (distribution {self:?})"
                )));
            }
        }
        let mut lo = 0.0;
        for _ in 0..90 {
            let mid = 0.5 * (lo + hi);
            if self.log_survival(mid)? > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// GIG-sqrt survival P(S > x) = ∫_{x²}^∞ f_T(t) dt, integrated in
    /// u = ln t with an upper cutoff 150 log-units below the integrand's
    /// maximum on the domain.
    fn gig_sqrt_log_survival(&self, x: f64) -> Result<f64> {
        let OracleDistribution::GigSqrt {
            lambda,
            delta,
            alpha,
        } = *self
        else {
            unreachable!("gig_sqrt_log_survival is only called on GigSqrt");
        };
        if x == 0.0 {
            return Ok(0.0);
        }
        let lc = gig_log_normalizer(lambda, delta, alpha)?;
        let (d2, a2) = (delta * delta, alpha * alpha);
        // Integrand ℓ(u) = ln[t·f_T(t)] at t = eᵘ.
        let ell = move |u: f64| lc + lambda * u - 0.5 * (d2 * (-u).exp() + a2 * u.exp());
        // Mode of ℓ: α²w² − 2λw − δ² = 0 with w = eᵘ.
        let w_mode = (lambda + (lambda * lambda + a2 * d2).sqrt()) / a2;
        let lo = 2.0 * x.ln();
        let start = lo.max(w_mode.ln());
        let top = ell(start);
        let mut hi = start + 0.5;
        let mut steps = 0;
        while ell(hi) > top - 150.0 {
            hi += 0.5;
            steps += 1;
            if steps > 10_000 {
                return Err(TailError::Domain(
                    "GIG tail integrand failed to decay".to_string(),
                ));
            }
        }
        log_integrate(
            ell,
            lo,
            hi,
            &QuadratureSettings::default(),
            "GIG-sqrt survival",
        )
        .map(|v| v.min(0.0))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(TailError::Domain(format!(
            "{name} must be a positive finite real, got {v}"
        )));
    }
    Ok(())
}

/// ln of the GIG normalizing constant c = (α/δ)^λ / (2·K_λ(δα)), so that
/// f_T(t) = c·t^{λ−1}·exp(−(δ²/t + α²t)/2) integrates to one.
pub(crate) fn gig_log_normalizer(lambda: f64, delta: f64, alpha: f64) -> Result<f64> {
    positive("gig delta", delta)?;
    positive("gig alpha", alpha)?;
    let k = log_bessel_k(lambda.abs(), delta * alpha)?;
    Ok(lambda * (alpha.ln() - delta.ln()) - std::f64::consts::LN_2 - k)
}
