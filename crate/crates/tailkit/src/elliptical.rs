//! Joint tails of bivariate elliptical risks and their scaled extensions.
//!
//! A bivariate elliptical vector (X₁, X₂) = R·(U₁, ρU₁ + √(1−ρ²)U₂) with
//! radial law R in the Gumbel domain satisfies
//!
//! ```text
//! P(X₁ > x, X₂ > x) ~ (√c_ρ/(2π)) · ((1−ρ²)^{3/2}/(1−ρ)²)
//!                     · P(R > √c_ρ·x) / (x·w(√c_ρ·x)),
//! c_ρ = 2/(1+ρ),
//! ```
//!
//! with w the Gumbel scaling function — here always w(x) = Lpx^{p−1},
//! because this module only admits Weibull-type radial tails.  Scaling the
//! radius by an FGM-coupled factor S replaces R with the product Z = SR,
//! whose tail comes from the two-factor machinery; pushing that through the
//! same display yields the scaled joint-tail form, and instantiating S as
//! the square root of a generalized inverse Gaussian variable gives the
//! extended generalized hyperbolic (EGHD) case in closed form, Bessel
//! constant included.  The weak tail dependence coefficient
//! χ = lim ln P(X₁>x)/ln P(X₁>x, X₂>x) has the same 2·((1+ρ)/2)^e − 1 shape
//! in every case; only the exponent e moves.

use crate::bessel::log_bessel_k;
use crate::error::{Result, TailError};
use crate::numerics::special::LN_2PI;
use crate::tail::{AsymptoticForm, ProductConstants, WeibullTypeTail};
use std::sync::Arc;

/// Inputs of the scaled elliptical joint tail: correlation, the radial and
/// scale tails, and the FGM parameter coupling them.
#[derive(Debug, Clone)]
pub struct EllipticalSpec {
    rho: f64,
    tau: f64,
    radial: WeibullTypeTail,
    scale: Option<WeibullTypeTail>,
}

fn require_correlation(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(TailError::Domain(format!(
            "correlation must satisfy |rho| < 1, got {rho}"
        )));
    }
    Ok(())
}

impl EllipticalSpec {
    pub fn new(
        rho: f64,
        radial: WeibullTypeTail,
        scale: Option<WeibullTypeTail>,
        tau: f64,
    ) -> Result<Self> {
        require_correlation(rho)?;
        if !tau.is_finite() || tau.abs() > 1.0 {
            return Err(TailError::Domain(format!(
                "FGM parameter tau must lie in [-1, 1], got {tau}"
            )));
        }
        Ok(EllipticalSpec {
            rho,
            tau,
            radial,
            scale,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn radial(&self) -> &WeibullTypeTail {
        &self.radial
    }

    pub fn scale(&self) -> Option<&WeibullTypeTail> {
        self.scale.as_ref()
    }

    /// c_ρ = 2/(1+ρ) ∈ (1, ∞): the squared effective threshold inflation of
    /// the joint event over the marginal one.
    pub fn c_rho(&self) -> f64 {
        2.0 / (1.0 + self.rho)
    }
}

/// The correlation prefactor (1−ρ²)^{3/2}/(1−ρ)², on the log scale.  It
/// collapses to (1+ρ)^{3/2}·(1−ρ)^{−1/2}, which is how it is evaluated.
fn log_rho_prefactor(rho: f64) -> f64 {
    1.5 * (1.0 + rho).ln() - 0.5 * (1.0 - rho).ln()
}

/// Gumbel scaling function of a Weibull-type tail, w(x) = L·p·x^{p−1}.
/// Only Weibull-type laws are admitted, so this is total on the type.
pub fn gumbel_scaling(tail: &WeibullTypeTail, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(TailError::Domain(format!(
            "scaling function needs x > 0, got {x}"
        )));
    }
    Ok(tail.rate() * tail.exponent() * x.powf(tail.exponent() - 1.0))
}

/// Joint tail P(X₁ > x, X₂ > x) of an unscaled bivariate elliptical vector
/// with Weibull-type radial tail g(x)·exp(−Lx^p) and correlation ρ.
pub fn elliptical_joint_tail(
    radial: &WeibullTypeTail,
    rho: f64,
) -> Result<AsymptoticForm> {
    require_correlation(rho)?;
    let c = 2.0 / (1.0 + rho);
    let (l, p) = (radial.rate(), radial.exponent());
    let log_prefactor = 0.5 * c.ln() - LN_2PI + log_rho_prefactor(rho)
        - (l * p).ln()
        - 0.5 * (p - 1.0) * c.ln();
    let g = radial.log_modulation_evaluator();
    let root_c = c.sqrt();
    Ok(
        AsymptoticForm::new(log_prefactor, -p, l * c.powf(0.5 * p), p)?
            .with_modulation_term(g, Arc::new(move |x: f64| root_c * x)),
    )
}

/// Joint tail of the scaled elliptical vector (X₁, X₂) = S·R·(U₁, ρU₁+…)
/// with FGM-coupled Weibull-type factors: radial tail g₁(x)e^{−L₁x^{p₁}}
/// (index 1 ↔ R) and scale tail g₂(x)e^{−L₂x^{p₂}} (index 2 ↔ S).
///
/// The display is the unscaled joint tail driven by the product Z = SR:
///
/// ```text
/// prefactor (1−τ)·(1+ρ)^{3/2}(1−ρ)^{−1/2}·√(p₂L₂/(2π(p₁+p₂)))
///           ·c_ρ^{1−r/4}·(p₁L₁)^{−1}·A^{p₂/2+p₁},
/// x^{−r/2} · g₁(c_ρ^{p₂/(2(p₁+p₂))}·x/z_x) · g₂(c_ρ^{p₁/(2(p₁+p₂))}·z_x)
///           · exp(−B·c_ρ^{r/2}·x^r),
/// ```
///
/// with the product constants A, B, r = p₁p₂/(p₁+p₂) and saddle z_x of the
/// (R, S) pair.
pub fn scaled_elliptical_joint_tail(spec: &EllipticalSpec) -> Result<AsymptoticForm> {
    let Some(scale) = spec.scale() else {
        return Err(TailError::Domain(
            "scaled elliptical joint tail needs a scale tail for S".to_string(),
        ));
    };
    if spec.tau() == 1.0 {
        return Err(TailError::DegenerateLeadingCoefficient(
            "FGM parameter tau = 1 kills the leading coefficient 1 - tau".to_string(),
        ));
    }
    let radial = spec.radial();
    let (l1, p1) = (radial.rate(), radial.exponent());
    let (l2, p2) = (scale.rate(), scale.exponent());
    let k = ProductConstants::from_tails(radial, scale);
    let (a, r, c) = (k.a(), k.rate_exponent(), spec.c_rho());
    let log_prefactor = (1.0 - spec.tau()).ln()
        + log_rho_prefactor(spec.rho())
        + 0.5 * ((p2 * l2).ln() - LN_2PI - (p1 + p2).ln())
        + (1.0 - 0.25 * r) * c.ln()
        - (p1 * l1).ln()
        + (0.5 * p2 + p1) * a.ln();
    let g1 = radial.log_modulation_evaluator();
    let g2 = scale.log_modulation_evaluator();
    let s = k.saddle_exponent();
    let scale1 = c.powf(0.5 * p2 / (p1 + p2)) / a;
    let scale2 = c.powf(0.5 * p1 / (p1 + p2)) * a;
    Ok(
        AsymptoticForm::new(log_prefactor, -0.5 * r, k.b() * c.powf(0.5 * r), r)?
            .with_modulation_term(g1, Arc::new(move |x: f64| scale1 * x.powf(1.0 - s)))
            .with_modulation_term(g2, Arc::new(move |x: f64| scale2 * x.powf(s))),
    )
}

/// Which joint-tail family the weak tail dependence coefficient refers to;
/// each fixes the exponent e in χ = 2·((1+ρ)/2)^e − 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChiVariant {
    /// Kotz-type/unscaled elliptical with tail index θ ≥ 0: e = θ/2.
    ThetaForm { theta: f64 },
    /// Scaled elliptical with Weibull-type (R, S) exponents:
    /// e = p₁p₂/(2(p₁+p₂)), the half rate-exponent of the product.
    ProductForm { p1: f64, p2: f64 },
    /// Extended generalized hyperbolic case: e = 1/2.
    Eghd,
}

/// Weak tail dependence coefficient χ = 2·((1+ρ)/2)^e − 1 of a bivariate
/// elliptical pair with correlation ρ.
pub fn weak_tail_dependence(variant: ChiVariant, rho: f64) -> Result<f64> {
    require_correlation(rho)?;
    let e = match variant {
        ChiVariant::ThetaForm { theta } => {
            if !theta.is_finite() || theta < 0.0 {
                return Err(TailError::Domain(format!(
                    "tail index theta must be nonnegative, got {theta}"
                )));
            }
            0.5 * theta
        }
        ChiVariant::ProductForm { p1, p2 } => {
            if !(p1 > 0.0 && p1.is_finite() && p2 > 0.0 && p2.is_finite()) {
                return Err(TailError::Domain(format!(
                    "Weibull exponents must be positive, got p1={p1}, p2={p2}"
                )));
            }
            0.5 * p1 * p2 / (p1 + p2)
        }
        ChiVariant::Eghd => 0.5,
    };
    Ok(2.0 * (0.5 * (1.0 + rho)).powf(e) - 1.0)
}

/// Parameters (λ, δ², α²) of a generalized inverse Gaussian law, carried as
/// (λ, δ, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GigParams {
    pub lambda: f64,
    pub delta: f64,
    pub alpha: f64,
}

impl GigParams {
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda.abs() > 50.0 {
            return Err(TailError::Domain(format!(
                "GIG order lambda must satisfy |lambda| <= 50, got {}",
                self.lambda
            )));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(TailError::Domain(format!(
                "GIG parameter delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(TailError::Domain(format!(
                "GIG parameter alpha must be positive, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Normalizing constant of the GIG(λ, δ², α²) density,
/// c = (α/δ)^λ / (2·K_λ(δα)).
pub fn gig_constant(gig: &GigParams) -> Result<f64> {
    gig.validate()?;
    let log_k = log_bessel_k(gig.lambda.abs(), gig.delta * gig.alpha)
        .map_err(|e| e.in_context("GIG normalizing constant"))?;
    Ok((gig.lambda * (gig.alpha.ln() - gig.delta.ln())
        - std::f64::consts::LN_2
        - log_k)
        .exp())
}

/// Joint tail P(X₁ > x, X₂ > x) of the extended generalized hyperbolic
/// vector: the scaled elliptical case with S² ~ GIG(λ, δ², α²) and
/// independent (τ = 0), in the closed form
///
/// ```text
/// c(λ,δ²,α²)/√(2π) · (1+ρ)^{3/2}(1−ρ)^{−1/2} · α^{−λ−3/2} · c_ρ^{(2λ+1)/4}
///   · x^{λ−3/2} · exp(−α·√c_ρ·x).
/// ```
pub fn eghd_joint_tail(gig: &GigParams, rho: f64) -> Result<AsymptoticForm> {
    require_correlation(rho)?;
    let c_gig = gig_constant(gig)?;
    let c = 2.0 / (1.0 + rho);
    let log_prefactor = c_gig.ln() - 0.5 * LN_2PI + log_rho_prefactor(rho)
        - (gig.lambda + 1.5) * gig.alpha.ln()
        + 0.25 * (2.0 * gig.lambda + 1.0) * c.ln();
    AsymptoticForm::new(
        log_prefactor,
        gig.lambda - 1.5,
        gig.alpha * c.sqrt(),
        1.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_k;
    use crate::oracle::dist::OracleDistribution;
    use crate::product::product_tail_dependent;
    use crate::tail::DependenceSpec;

    fn gaussian_radial() -> WeibullTypeTail {
        WeibullTypeTail::new(1.0, 0.0, 0.5, 2.0).unwrap()
    }

    #[test]
    fn gaussian_joint_tail_pin() {
        // Bivariate standard normal, ρ=0, x=5: −ln(2π) − 2ln 5 − 25.
        let form = elliptical_joint_tail(&gaussian_radial(), 0.0).unwrap();
        let got = form.eval_log_survival(5.0).unwrap().log_value;
        let want = -LN_2PI - 2.0 * 5.0f64.ln() - 25.0;
        assert!((got - want).abs() < 1e-12, "got {got:.15} want {want:.15}");
        assert!(elliptical_joint_tail(&gaussian_radial(), 1.0).is_err());
        assert!(elliptical_joint_tail(&gaussian_radial(), -1.0).is_err());
    }

    #[test]
    fn rho_prefactor_identity() {
        for rho in [-0.9f64, -0.4, 0.0, 0.3, 0.77] {
            let lhs = 1.5 * (1.0 - rho * rho).ln() - 2.0 * (1.0 - rho).ln();
            assert!(
                (lhs - log_rho_prefactor(rho)).abs() < 1e-14,
                "rho={rho}"
            );
        }
    }

    #[test]
    fn scaled_rate_exponent_is_the_product_rate_exponent() {
        let radial = WeibullTypeTail::new(1.3, 0.5, 2.0, 1.7).unwrap();
        let scale = WeibullTypeTail::new(0.8, -0.5, 0.6, 2.4).unwrap();
        let k = ProductConstants::from_tails(&radial, &scale);
        let spec = EllipticalSpec::new(0.4, radial, Some(scale), 0.25).unwrap();
        let form = scaled_elliptical_joint_tail(&spec).unwrap();
        assert!((form.rate_exponent() - k.rate_exponent()).abs() < 1e-14);
    }

    #[test]
    fn scaled_tau_shift_and_degeneracy() {
        let radial = gaussian_radial();
        let scale = WeibullTypeTail::new(1.0, 0.0, 1.0, 2.0).unwrap();
        let base = EllipticalSpec::new(0.2, radial.clone(), Some(scale.clone()), 0.0).unwrap();
        let shifted =
            EllipticalSpec::new(0.2, radial.clone(), Some(scale.clone()), 0.5).unwrap();
        let f0 = scaled_elliptical_joint_tail(&base).unwrap();
        let f5 = scaled_elliptical_joint_tail(&shifted).unwrap();
        for x in [4.0, 9.0, 30.0] {
            let gap = f5.eval_log_survival(x).unwrap().log_value
                - f0.eval_log_survival(x).unwrap().log_value;
            assert!((gap - 0.5f64.ln()).abs() < 1e-14, "x={x}: {gap:.16}");
        }
        let degenerate =
            EllipticalSpec::new(0.2, radial.clone(), Some(scale), 1.0).unwrap();
        assert!(matches!(
            scaled_elliptical_joint_tail(&degenerate),
            Err(TailError::DegenerateLeadingCoefficient(_))
        ));
        let missing = EllipticalSpec::new(0.2, radial, None, 0.0).unwrap();
        assert!(scaled_elliptical_joint_tail(&missing).is_err());
    }

    #[test]
    fn scaled_form_agrees_with_the_proof_route() {
        // At any ρ with τ = 0, the scaled display must equal composing the
        // unscaled display with the product tail of Z = SR: the joint tail
        // is (√c/(2π))·Π_ρ·P(Z > √c·x)/(x·w_Z(√c·x)) with w_Z = B·r·u^{r−1}.
        let radial = gaussian_radial();
        let scale = WeibullTypeTail::new(2.0, 1.0, 1.0, 2.0).unwrap();
        let k = ProductConstants::from_tails(&radial, &scale);
        let (b, r) = (k.b(), k.rate_exponent());
        let product =
            product_tail_dependent(&radial, &scale, &DependenceSpec::Independent).unwrap();
        for rho in [0.0, 0.35, -0.5] {
            let spec =
                EllipticalSpec::new(rho, radial.clone(), Some(scale.clone()), 0.0).unwrap();
            let form = scaled_elliptical_joint_tail(&spec).unwrap();
            let c: f64 = 2.0 / (1.0 + rho);
            for x in [5.0, 12.0, 40.0] {
                let u = c.sqrt() * x;
                let composed = 0.5 * c.ln() - LN_2PI + log_rho_prefactor(rho)
                    + product.eval_log_survival(u).unwrap().log_value
                    - x.ln()
                    - (b * r * u.powf(r - 1.0)).ln();
                let direct = form.eval_log_survival(x).unwrap().log_value;
                assert!(
                    (direct - composed).abs() < 1e-10,
                    "rho={rho}, x={x}: {direct:.14} vs {composed:.14}"
                );
            }
        }
    }

    #[test]
    fn chi_values_and_shape() {
        let chi0 = weak_tail_dependence(ChiVariant::Eghd, 0.0).unwrap();
        assert!((chi0 - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
        for rho in [-0.8, -0.2, 0.0, 0.5, 0.9] {
            let product =
                weak_tail_dependence(ChiVariant::ProductForm { p1: 2.0, p2: 2.0 }, rho)
                    .unwrap();
            let eghd = weak_tail_dependence(ChiVariant::Eghd, rho).unwrap();
            assert_eq!(product, eghd);
            // Exponent symmetric under swapping the two Weibull exponents.
            let ab =
                weak_tail_dependence(ChiVariant::ProductForm { p1: 0.7, p2: 2.9 }, rho)
                    .unwrap();
            let ba =
                weak_tail_dependence(ChiVariant::ProductForm { p1: 2.9, p2: 0.7 }, rho)
                    .unwrap();
            assert_eq!(ab, ba);
            // θ = 0 washes out the correlation entirely.
            let flat =
                weak_tail_dependence(ChiVariant::ThetaForm { theta: 0.0 }, rho).unwrap();
            assert_eq!(flat, 1.0);
        }
        // Strictly increasing in ρ, inside (−1, 1].
        for variant in [
            ChiVariant::ThetaForm { theta: 1.7 },
            ChiVariant::ProductForm { p1: 1.0, p2: 3.0 },
            ChiVariant::Eghd,
        ] {
            let mut prev = -1.0;
            for i in 0..40 {
                let rho = -0.99 + 1.98 * i as f64 / 39.0;
                let chi = weak_tail_dependence(variant, rho).unwrap();
                assert!(chi > prev, "{variant:?} at rho={rho}");
                assert!(chi > -1.0 && chi <= 1.0);
                prev = chi;
            }
        }
        assert!(weak_tail_dependence(ChiVariant::Eghd, 1.0).is_err());
        assert!(
            weak_tail_dependence(ChiVariant::ThetaForm { theta: -1.0 }, 0.0).is_err()
        );
        assert!(
            weak_tail_dependence(ChiVariant::ProductForm { p1: 0.0, p2: 1.0 }, 0.0)
                .is_err()
        );
    }

    #[test]
    fn gig_constant_pins() {
        // Half-integer order: K_{1/2}(1) = √(π/2)·e^{−1}.
        let half = gig_constant(&GigParams {
            lambda: 0.5,
            delta: 1.0,
            alpha: 1.0,
        })
        .unwrap();
        let want = 1.0 / (2.0 * (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp());
        assert!((half - want).abs() < 1e-12);
        assert!((half - 1.0844375514192275).abs() < 1e-12);

        let one = gig_constant(&GigParams {
            lambda: 1.0,
            delta: 1.0,
            alpha: 1.0,
        })
        .unwrap();
        assert!((one - 0.83069279602466091).abs() < 1e-12, "got {one:.17}");

        // α = δ collapses the ratio term for any order.
        for lambda in [0.0, 2.3, -1.7] {
            let got = gig_constant(&GigParams {
                lambda,
                delta: 1.6,
                alpha: 1.6,
            })
            .unwrap();
            let want = 1.0 / (2.0 * bessel_k(lambda.abs(), 1.6 * 1.6).unwrap());
            assert!((got - want).abs() < 1e-12 * want, "lambda={lambda}");
        }

        assert!(gig_constant(&GigParams {
            lambda: 0.5,
            delta: 0.0,
            alpha: 1.0
        })
        .is_err());
        assert!(gig_constant(&GigParams {
            lambda: 51.0,
            delta: 1.0,
            alpha: 1.0
        })
        .is_err());
    }

    #[test]
    fn eghd_pins() {
        let gig = GigParams {
            lambda: 1.0,
            delta: 1.0,
            alpha: 1.0,
        };
        let form = eghd_joint_tail(&gig, 0.0).unwrap();
        let got = form.eval_log_survival(10.0).unwrap().log_value;
        // ln c(1,1,1) − ½ln(2π) + ¾ln 2 − ½ln 10 − 10√2, by hand.
        let want = 0.83069279602466091f64.ln() - 0.5 * LN_2PI
            + 0.75 * std::f64::consts::LN_2
            - 0.5 * 10.0f64.ln()
            - 10.0 * std::f64::consts::SQRT_2;
        assert!((got - want).abs() < 1e-12, "got {got:.15} want {want:.15}");
        assert!((got - (-15.8780015503619)).abs() < 1e-10);

        let half = eghd_joint_tail(&gig, 0.5).unwrap();
        let got = half.eval_log_survival(10.0).unwrap().log_value;
        assert!((got - (-12.6321988890623)).abs() < 1e-10, "got {got:.13}");

        assert!(eghd_joint_tail(&gig, 1.0).is_err());
    }

    #[test]
    fn eghd_is_the_gig_instance_of_the_scaled_form() {
        let gig = GigParams {
            lambda: 1.0,
            delta: 1.0,
            alpha: 1.0,
        };
        // S = √V with V ~ GIG; its Weibull-type tail comes from the oracle
        // distribution so both routes stay independent.
        let scale_tail = OracleDistribution::GigSqrt {
            lambda: gig.lambda,
            delta: gig.delta,
            alpha: gig.alpha,
        }
        .asymptotic_tail()
        .unwrap();
        for rho in [0.0, 0.5, -0.3] {
            let spec =
                EllipticalSpec::new(rho, gaussian_radial(), Some(scale_tail.clone()), 0.0)
                    .unwrap();
            let scaled = scaled_elliptical_joint_tail(&spec).unwrap();
            let closed = eghd_joint_tail(&gig, rho).unwrap();
            for x in [5.0, 10.0, 20.0] {
                let a = scaled.eval_log_survival(x).unwrap().log_value;
                let b = closed.eval_log_survival(x).unwrap().log_value;
                assert!(
                    (a - b).abs() < 1e-10,
                    "rho={rho}, x={x}: {a:.14} vs {b:.14}"
                );
            }
        }
    }
}
