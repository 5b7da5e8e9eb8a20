//! Exact product-tail integrals by adaptive log-space quadrature.
//!
//! For positive risks X₁ ⫫-or-coupled with X₂ and Z = X₁X₂, conditioning on
//! X₂ = y gives
//!
//! ```text
//! P(Z > x) = ∫₀^∞ c(x, y)·F̄₁(x/y)·f₂(y) dy,
//! ```
//!
//! where c ≡ 1 for independence and c(x, y) = 1 + τ·F₁(x/y)·(1 − 2F₂(y))
//! under an FGM copula.  All integrals run in the substituted variable
//! u = ln y with the integrand assembled as a sum of logs, so values like
//! exp(−2000) pose no difficulty.

use crate::error::{Result, TailError};
use crate::numerics::quad::{log_integrate_bump, QuadratureSettings};
use crate::numerics::special::{log_norm_pdf, log_norm_sf};
use crate::oracle::dist::OracleDistribution;
use crate::tail::DependenceSpec;

fn settings_with(rel_tol: f64) -> QuadratureSettings {
    QuadratureSettings {
        rel_tol,
        ..QuadratureSettings::default()
    }
}

/// ln of the dependence factor c(x, y) for the given spec.
fn log_dependence_factor(
    dep: &DependenceSpec,
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    x: f64,
    y: f64,
) -> Result<f64> {
    match dep {
        DependenceSpec::Independent => Ok(0.0),
        DependenceSpec::Fgm { tau } => {
            let f1 = d1.cdf(x / y)?;
            let f2 = d2.cdf(y)?;
            Ok((tau * f1 * (1.0 - 2.0 * f2)).ln_1p())
        }
        DependenceSpec::Custom(custom) => Ok((custom.c)(x, y).ln()),
    }
}

/// ln P(X₁X₂ > x) by exact quadrature; relative tolerance 1e−10.
pub fn survival_product_quadrature(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    dep: &DependenceSpec,
    x: f64,
) -> Result<f64> {
    survival_product_quadrature_with(d1, d2, dep, x, &settings_with(1e-10))
}

/// [`survival_product_quadrature`] with caller-supplied quadrature settings.
pub fn survival_product_quadrature_with(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    dep: &DependenceSpec,
    x: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    d1.validate()?;
    d2.validate()?;
    if let DependenceSpec::Fgm { tau } = dep {
        if !tau.is_finite() || tau.abs() > 1.0 {
            return Err(TailError::Domain(format!(
                "FGM parameter tau must lie in [-1, 1], got {tau}"
            )));
        }
    }
    if !(x >= 0.0) {
        return Err(TailError::Domain(format!(
            "product survival needs x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        // Both factors are positive almost surely.
        return Ok(0.0);
    }
    let log_f = |u: f64| -> f64 {
        let y = u.exp();
        let pieces = (|| -> Result<f64> {
            Ok(log_dependence_factor(dep, d1, d2, x, y)?
                + d1.log_survival(x / y)?
                + d2.log_density(y)?
                + u)
        })();
        pieces.unwrap_or(f64::NAN)
    };
    log_integrate_bump(log_f, 0.5 * x.max(1.0).ln(), settings, "product survival")
        .map(|v| v.min(0.0))
}

/// ln of the density of X₁X₂ at x > 0 for independent factors:
/// h(x) = ∫₀^∞ f₁(x/y)·(1/y)·f₂(y) dy.  Relative tolerance 1e−10.
pub fn density_product_quadrature(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    x: f64,
) -> Result<f64> {
    density_product_quadrature_with(d1, d2, x, &settings_with(1e-10))
}

/// [`density_product_quadrature`] with caller-supplied settings.
pub fn density_product_quadrature_with(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    x: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    d1.validate()?;
    d2.validate()?;
    if !(x > 0.0) {
        return Err(TailError::Domain(format!(
            "product density needs x > 0, got {x}"
        )));
    }
    // In u = ln y the 1/y kernel cancels the jacobian:
    // ∫ f₁(x/y)(1/y)f₂(y) dy = ∫ f₁(x·e⁻ᵘ)·f₂(eᵘ) du.
    let log_f = |u: f64| -> f64 {
        let y = u.exp();
        let pieces =
            (|| -> Result<f64> { Ok(d1.log_density(x / y)? + d2.log_density(y)?) })();
        pieces.unwrap_or(f64::NAN)
    };
    log_integrate_bump(log_f, 0.5 * x.max(1.0).ln(), settings, "product density")
}

/// ln P(X₁X₂ > x) for a centered bivariate Gaussian pair with correlation
/// ρ and unit variances: P = 2∫₀^∞ Φ̄((x/y − ρy)/√(1−ρ²))·φ(y) dy.
/// Relative tolerance 1e−9.
pub fn gaussian_product_quadrature(rho: f64, x: f64) -> Result<f64> {
    gaussian_product_quadrature_with(rho, x, &settings_with(1e-9))
}

/// [`gaussian_product_quadrature`] with caller-supplied settings.
pub fn gaussian_product_quadrature_with(
    rho: f64,
    x: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(TailError::Domain(format!(
            "gaussian correlation must lie in (-1, 1), got {rho}"
        )));
    }
    if !(x > 0.0) {
        return Err(TailError::Domain(format!(
            "gaussian product tail needs x > 0, got {x}"
        )));
    }
    let sig = (1.0 - rho * rho).sqrt();
    let log_f = move |u: f64| {
        let y = u.exp();
        std::f64::consts::LN_2 + log_norm_sf((x / y - rho * y) / sig) + log_norm_pdf(y) + u
    };
    // The conditioning variable concentrates near √(x/(1+ρ))-ish; √x seeds
    // the search well across the admissible ρ range.
    log_integrate_bump(log_f, 0.5 * x.ln(), settings, "gaussian product survival")
        .map(|v| v.min(0.0))
}

/// ln P(sup_{[0,T]} B > x) = ln ∫₀^∞ 2Φ̄(x/√t)·f_T(t) dt by the reflection
/// principle, for an independent random horizon T.  Relative tolerance 1e−9.
pub fn bm_sup_quadrature(time_dist: &OracleDistribution, x: f64) -> Result<f64> {
    bm_sup_quadrature_with(time_dist, x, &settings_with(1e-9))
}

/// [`bm_sup_quadrature`] with caller-supplied settings.
pub fn bm_sup_quadrature_with(
    time_dist: &OracleDistribution,
    x: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    time_dist.validate()?;
    if !(x > 0.0) {
        return Err(TailError::Domain(format!(
            "supremum tail needs x > 0, got {x}"
        )));
    }
    let log_f = |u: f64| -> f64 {
        let t = u.exp();
        let pieces = (|| -> Result<f64> {
            Ok(std::f64::consts::LN_2
                + log_norm_sf(x * (-0.5 * u).exp())
                + time_dist.log_density(t)?
                + u)
        })();
        pieces.unwrap_or(f64::NAN)
    };
    log_integrate_bump(
        log_f,
        x.max(1.0).ln(),
        settings,
        "Brownian supremum survival",
    )
    .map(|v| v.min(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::log_bessel_k;

    const EXP1: OracleDistribution = OracleDistribution::Exponential { rate: 1.0 };

    #[test]
    fn exponential_product_matches_bessel_closed_form() {
        // P(Exp(1)·Exp(1) > x) = 2√x·K₁(2√x) exactly.
        for (x, expect) in [
            (4.0, -2.997053234657596),
            (100.0, -18.25804196681191),
            (2500.0, -97.467892142371833),
        ] {
            let got =
                survival_product_quadrature(&EXP1, &EXP1, &DependenceSpec::Independent, x)
                    .unwrap();
            assert!(
                (got - expect).abs() < 2e-9,
                "x={x}: got {got:.15}, expect {expect:.15}"
            );
        }
        // And the same value straight from the Bessel module.
        let x: f64 = 4.0;
        let closed = std::f64::consts::LN_2 + 0.5 * x.ln() + log_bessel_k(1.0, 2.0 * x.sqrt()).unwrap();
        assert!((closed - (-2.997053234657596)).abs() < 1e-11);
    }

    #[test]
    fn survival_at_zero_is_certain() {
        let got =
            survival_product_quadrature(&EXP1, &EXP1, &DependenceSpec::Independent, 0.0).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn symmetric_weibull_product_closed_form() {
        // Weibull(1/2, 2)² has P(Z > x) = x·K₁(x) exactly.
        let w = OracleDistribution::Weibull {
            rate: 0.5,
            exponent: 2.0,
        };
        let got =
            survival_product_quadrature(&w, &w, &DependenceSpec::Independent, 100.0).unwrap();
        assert!(
            (got - (-97.4678921423718)).abs() < 2e-8,
            "got {got:.15}"
        );
    }

    #[test]
    fn gamma_exponential_product_closed_form() {
        // Gamma(2,1)×Exp(1): P(Z > x) = 2√x·K₁(2√x) + 2x·K₀(2√x).
        let g = OracleDistribution::Gamma {
            shape: 2.0,
            scale: 1.0,
        };
        let got =
            survival_product_quadrature(&g, &EXP1, &DependenceSpec::Independent, 25.0).unwrap();
        assert!(
            (got - (-6.8349781166412234)).abs() < 2e-9,
            "got {got:.15}"
        );
        // Order of the pair must not matter.
        let swapped =
            survival_product_quadrature(&EXP1, &g, &DependenceSpec::Independent, 25.0).unwrap();
        assert!((got - swapped).abs() < 2e-9);
    }

    #[test]
    fn fgm_respects_envelope_and_pins() {
        let x = 4.0;
        let indep =
            survival_product_quadrature(&EXP1, &EXP1, &DependenceSpec::Independent, x).unwrap();
        let fgm = survival_product_quadrature(
            &EXP1,
            &EXP1,
            &DependenceSpec::Fgm { tau: 0.5 },
            x,
        )
        .unwrap();
        // Pointwise 1−|τ| ≤ c ≤ 1+|τ| bounds the integral.
        assert!(fgm > indep + 0.5f64.ln() && fgm < indep + 1.5f64.ln());
        assert!((fgm - (-3.3405843826950433)).abs() < 2e-9, "got {fgm:.15}");
        let counter = survival_product_quadrature(
            &EXP1,
            &EXP1,
            &DependenceSpec::Fgm { tau: -1.0 },
            x,
        )
        .unwrap();
        assert!(
            (counter - (-2.5386938734006047)).abs() < 2e-9,
            "got {counter:.15}"
        );
    }

    #[test]
    fn fgm_tau_zero_is_exactly_independent() {
        for x in [0.5, 4.0, 60.0] {
            let indep =
                survival_product_quadrature(&EXP1, &EXP1, &DependenceSpec::Independent, x)
                    .unwrap();
            let fgm0 =
                survival_product_quadrature(&EXP1, &EXP1, &DependenceSpec::Fgm { tau: 0.0 }, x)
                    .unwrap();
            assert!(
                (indep - fgm0).abs() < 1e-13,
                "x={x}: {indep:.17} vs {fgm0:.17}"
            );
        }
    }

    #[test]
    fn density_oracle_matches_bessel_closed_form() {
        // Density of Exp(1)² at x: 2·K₀(2√x).
        let got = density_product_quadrature(&EXP1, &EXP1, 100.0).unwrap();
        assert!(
            (got - (-20.585028915026396)).abs() < 2e-9,
            "got {got:.15}"
        );
        // The density integrates to one.  The outer variable is v = ln x over
        // a window wide enough that the truncated mass is ~1e−16 on both
        // sides (the density has a log singularity at 0 and a thin
        // exp(−2√x) right tail), yet narrow enough that the inner integrand
        // stays in a well-conditioned log range.
        let settings = settings_with(1e-7);
        let mass = crate::numerics::quad::log_integrate(
            |v: f64| {
                density_product_quadrature_with(&EXP1, &EXP1, v.exp(), &settings).unwrap() + v
            },
            -40.0,
            10.0,
            &settings_with(1e-6),
            "product density mass",
        )
        .unwrap();
        assert!(mass.abs() < 1e-5, "log mass {mass:.3e}");
    }

    #[test]
    fn gaussian_product_pins() {
        let got = gaussian_product_quadrature(0.0, 4.0).unwrap();
        assert!(
            (got - (-5.7353310976420792)).abs() < 5e-8,
            "got {got:.15}"
        );
        let got = gaussian_product_quadrature(0.5, 10.0).unwrap();
        assert!(
            (got - (-8.4039248408331624)).abs() < 5e-8,
            "got {got:.15}"
        );
        assert!(gaussian_product_quadrature(1.0, 4.0).is_err());
    }

    #[test]
    fn bm_sup_exponential_horizon_is_exact() {
        // Exp(1) horizon: P(sup > x) = e^{−√2·x} at every x, not just
        // asymptotically.
        for x in [0.5, 2.0, 5.0, 12.0] {
            let got = bm_sup_quadrature(&EXP1, x).unwrap();
            let expect = -std::f64::consts::SQRT_2 * x;
            assert!(
                (got - expect).abs() < 1e-8 * x.max(1.0),
                "x={x}: got {got:.12}, expect {expect:.12}"
            );
        }
    }

    #[test]
    fn bm_sup_weibull_horizon_pin() {
        let w = OracleDistribution::Weibull {
            rate: 1.0,
            exponent: 2.0,
        };
        let got = bm_sup_quadrature(&w, 3.0).unwrap();
        assert!((got - (-5.33686386872602)).abs() < 2e-8, "got {got:.14}");
    }

    #[test]
    fn small_x_supremum_probability_approaches_one() {
        let got = bm_sup_quadrature(&EXP1, 1e-8).unwrap();
        assert!(got.abs() < 1e-6, "got {got:.3e}");
        assert!(bm_sup_quadrature(&EXP1, 0.0).is_err());
    }
}
