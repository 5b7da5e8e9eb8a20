//! Closed-form tail asymptotics for products of Weibull-type risks.
//!
//! For factors with tails gᵢ(x)·exp(−Lᵢx^{pᵢ}) and a dependence whose local
//! density factor c(x, y) settles to D·x^{q₁}·y^{q₂−q₁} on the saddle
//! window, the product X₁X₂ satisfies
//!
//! ```text
//! P(X₁X₂ > x) ~ D·√(2π p₂L₂/(p₁+p₂)) · A^{p₂/2+q₂−q₁} · x^κ
//!               · g₁(x/z_x) · g₂(z_x) · exp(−B·x^r),
//! κ = (2p₂q₁ + 2p₁q₂ + p₁p₂) / (2(p₁+p₂)),
//! ```
//!
//! with the saddle constants A, B, r = p₁p₂/(p₁+p₂) and z_x = A·x^{p₁/(p₁+p₂)}
//! of [`ProductConstants`].  Everything else here is a specialization: the
//! independent polynomial-modulation collapse, the FGM shift D = 1−τ, the
//! m-fold power, the density counterpart, and the bivariate-Gaussian product
//! whose rate 1/(1+ρ) shows that lognormal-style dependence falls outside
//! this model.
//!
//! [`check_dependence_condition`] is the empirical companion: it measures,
//! on a finite grid, how far a concrete c(x, y) sits from its declared limit
//! profile over the saddle window, since the limit itself is not decidable
//! from finitely many evaluations.

use crate::error::{Result, TailError};
use crate::numerics::special::LN_2PI;
use crate::oracle::dist::OracleDistribution;
use crate::tail::{
    AsymptoticForm, DependenceSpec, ProductConstants, WeibullTypeTail,
};

/// Per-threshold outcome of a dependence-condition check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DependenceCheckRow {
    pub x: f64,
    /// sup over the saddle-window y-mesh of |c(x,y) − D·x^{q₁}·y^{q₂−q₁}|.
    pub max_deviation: f64,
}

/// Evidence for (or against) a dependence factor settling to its declared
/// limit profile on the saddle window.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceCheckReport {
    pub rows: Vec<DependenceCheckRow>,
    /// True iff the deviations are non-increasing along the grid and the
    /// final one is below the requested tolerance.
    pub verdict: bool,
}

/// Tail asymptotic of X₁X₂ under a dependence with limit profile
/// (D, q₁, q₂); the returned form carries both modulations as evaluator
/// terms g₁(x/z_x)·g₂(z_x).
pub fn product_tail_dependent(
    t1: &WeibullTypeTail,
    t2: &WeibullTypeTail,
    dep: &DependenceSpec,
) -> Result<AsymptoticForm> {
    let (d, q1, q2) = dep.limit_profile()?;
    if d == 0.0 {
        return Err(TailError::DegenerateLeadingCoefficient(
            "dependence limit coefficient D = 0 (FGM tau = 1): the leading-order \
             constant vanishes and the first-order asymptotic is uninformative"
                .to_string(),
        ));
    }
    let k = ProductConstants::from_tails(t1, t2);
    let (p1, p2, l2) = (t1.exponent(), t2.exponent(), t2.rate());
    let a = k.a();
    let log_prefactor = d.ln()
        + 0.5 * (LN_2PI + (p2 * l2 / (p1 + p2)).ln())
        + (0.5 * p2 + q2 - q1) * a.ln();
    let kappa = (2.0 * p2 * q1 + 2.0 * p1 * q2 + p1 * p2) / (2.0 * (p1 + p2));
    let s = k.saddle_exponent();
    let g1 = t1.log_modulation_evaluator();
    let g2 = t2.log_modulation_evaluator();
    Ok(
        AsymptoticForm::new(log_prefactor, kappa, k.b(), k.rate_exponent())?
            .with_modulation_term(
                g1,
                std::sync::Arc::new(move |x: f64| x.powf(1.0 - s) / a),
            )
            .with_modulation_term(g2, std::sync::Arc::new(move |x: f64| a * x.powf(s))),
    )
}

fn power_law_coefficients(
    t1: &WeibullTypeTail,
    t2: &WeibullTypeTail,
) -> Result<(f64, f64)> {
    match (t1.coefficient(), t2.coefficient()) {
        (Some(c1), Some(c2)) => Ok((c1, c2)),
        _ => Err(TailError::ModulationNotPolynomial(
            "this closed form collapses the modulations into the prefactor and needs \
             both tails in C·x^alpha form; wrap custom evaluators with \
             product_tail_dependent instead"
                .to_string(),
        )),
    }
}

/// Fully collapsed independent-product asymptotic for power-law-modulated
/// tails Cᵢ·x^{αᵢ}·exp(−Lᵢx^{pᵢ}): no evaluator terms survive, the
/// modulations fold into the prefactor and the polynomial exponent.
pub fn product_tail_polynomial(
    t1: &WeibullTypeTail,
    t2: &WeibullTypeTail,
) -> Result<AsymptoticForm> {
    let (c1, c2) = power_law_coefficients(t1, t2)?;
    let k = ProductConstants::from_tails(t1, t2);
    let (p1, p2, l2) = (t1.exponent(), t2.exponent(), t2.rate());
    let (alpha1, alpha2) = (t1.alpha(), t2.alpha());
    let log_prefactor = 0.5 * (LN_2PI + (p2 * l2 / (p1 + p2)).ln())
        + c1.ln()
        + c2.ln()
        + (0.5 * p2 + alpha2 - alpha1) * k.a().ln();
    let kappa =
        (2.0 * p2 * alpha1 + 2.0 * p1 * alpha2 + p1 * p2) / (2.0 * (p1 + p2));
    AsymptoticForm::new(log_prefactor, kappa, k.b(), k.rate_exponent())
}

/// Tail asymptotic of an m-fold product of independent copies of a
/// power-law-modulated tail C·x^α·exp(−Lx^p):
///
/// ```text
/// P(X₁⋯X_m > x) ~ m^{−1/2}·(2πL)^{(m−1)/2}·C^m · x^{(2mα+(m−1)p)/(2m)}
///                 · exp(−mL·x^{p/m}).
/// ```
///
/// Assembled in log space; m is capped at 64 because (2πL)^{(m−1)/2} and the
/// x-powers leave the double range long before the asymptotic stops making
/// sense.
pub fn m_fold_product_tail(t: &WeibullTypeTail, m: u32) -> Result<AsymptoticForm> {
    if m < 1 || m > 64 {
        return Err(TailError::Domain(format!(
            "m-fold product needs 1 <= m <= 64, got {m}"
        )));
    }
    let Some(c) = t.coefficient() else {
        return Err(TailError::ModulationNotPolynomial(
            "the m-fold closed form needs a power-law modulation C·x^alpha".to_string(),
        ));
    };
    let m = f64::from(m);
    let (l, p, alpha) = (t.rate(), t.exponent(), t.alpha());
    let log_prefactor =
        -0.5 * m.ln() + 0.5 * (m - 1.0) * (LN_2PI + l.ln()) + m * c.ln();
    let kappa = (2.0 * m * alpha + (m - 1.0) * p) / (2.0 * m);
    AsymptoticForm::new(log_prefactor, kappa, m * l, p / m)
}

/// Density counterpart of [`product_tail_polynomial`]: the product's pdf
/// satisfies h(x) ~ L₁p₁A^{−p₁}·x^{r−1}·P(X₁X₂ > x), so the survival form is
/// reused with its prefactor scaled and its polynomial exponent shifted.
pub fn product_pdf_asymptotic(
    t1: &WeibullTypeTail,
    t2: &WeibullTypeTail,
) -> Result<AsymptoticForm> {
    let survival = product_tail_polynomial(t1, t2)?;
    let k = ProductConstants::from_tails(t1, t2);
    let (l1, p1) = (t1.rate(), t1.exponent());
    let r = k.rate_exponent();
    AsymptoticForm::new(
        survival.log_prefactor() + (l1 * p1).ln() - p1 * k.a().ln(),
        survival.poly_exponent() + r - 1.0,
        survival.rate_coefficient(),
        survival.rate_exponent(),
    )
}

/// Tail asymptotic of the product of two standard normals with correlation
/// ρ ∈ (−1, 1):
///
/// ```text
/// P(Z₁Z₂ > x) ~ (1+ρ)/√(2π) · x^{−1/2} · exp(−x/(1+ρ)).
/// ```
///
/// The rate 1/(1+ρ) differs from the independent-product constant B for
/// every ρ ≠ 0, which is exactly why Gaussian dependence is not an instance
/// of the local-density model above.
pub fn gaussian_product_tail(rho: f64) -> Result<AsymptoticForm> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(TailError::Domain(format!(
            "Gaussian product needs correlation |rho| < 1, got {rho}"
        )));
    }
    AsymptoticForm::new(
        (1.0 + rho).ln() - 0.5 * LN_2PI,
        -0.5,
        1.0 / (1.0 + rho),
        1.0,
    )
}

/// Number of log-spaced mesh points used per threshold when scanning the
/// saddle window.
const CHECK_MESH: usize = 512;

/// Slack for the "non-increasing" verdict so exact zeros and floating-point
/// ties do not flip it.
const CHECK_SLACK: f64 = 1e-12;

/// Measures how far a dependence factor c(x, y) sits from its declared limit
/// profile D·x^{q₁}·y^{q₂−q₁} over the saddle window y ∈ [a₁w_x, a₂w_x],
/// for each threshold in `x_grid`.
///
/// The FGM factor c(x, y) = 1 + τ·F₁(x/y)·(1 − 2F₂(y)) is built from the
/// two oracle distributions; a custom dependence brings its own evaluator
/// and window.  The window defaults to (A/2, 2A) in units of w_x, around
/// the saddle y ≈ A·w_x where the product's mass concentrates.  The verdict
/// is true iff the per-threshold deviations never increase along the grid
/// and the last one is below `tolerance` — a limit statement can only be
/// falsified, not proven, at finite x.
pub fn check_dependence_condition(
    dep: &DependenceSpec,
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    x_grid: &[f64],
    tolerance: f64,
) -> Result<DependenceCheckReport> {
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(TailError::Domain(format!(
            "tolerance must be a positive finite real, got {tolerance}"
        )));
    }
    if x_grid.is_empty() {
        return Err(TailError::Domain(
            "dependence check needs a nonempty threshold grid".to_string(),
        ));
    }
    for pair in x_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(TailError::Domain(format!(
                "threshold grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if !(x_grid[0] > 0.0) {
        return Err(TailError::Domain(format!(
            "thresholds must be positive, got {}",
            x_grid[0]
        )));
    }

    let t1 = d1.asymptotic_tail()?;
    let t2 = d2.asymptotic_tail()?;
    let k = ProductConstants::from_tails(&t1, &t2);
    let (d, q1, q2) = dep.limit_profile()?;

    enum Factor<'a> {
        Fgm { tau: f64 },
        Custom(&'a DependenceSpec),
    }
    let (factor, window) = match dep {
        DependenceSpec::Independent => {
            return Err(TailError::MissingEvaluator(
                "the independent product has no dependence factor to check; c(x, y) \
                 is identically 1"
                    .to_string(),
            ))
        }
        DependenceSpec::Fgm { tau } => (Factor::Fgm { tau: *tau }, (0.5 * k.a(), 2.0 * k.a())),
        DependenceSpec::Custom(custom) => {
            if !(custom.window.0 > 0.0 && custom.window.1 > custom.window.0) {
                return Err(TailError::Domain(format!(
                    "custom saddle window must satisfy 0 < a1 < a2, got ({}, {})",
                    custom.window.0, custom.window.1
                )));
            }
            (Factor::Custom(dep), custom.window)
        }
    };

    let eval_c = |x: f64, y: f64| -> Result<f64> {
        match &factor {
            Factor::Fgm { tau } => {
                let f1 = d1.cdf(x / y)?;
                let f2 = d2.cdf(y)?;
                Ok(1.0 + tau * f1 * (1.0 - 2.0 * f2))
            }
            Factor::Custom(DependenceSpec::Custom(custom)) => Ok((custom.c)(x, y)),
            Factor::Custom(_) => unreachable!("constructed from the Custom arm"),
        }
    };

    let mut rows = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let w = k.window_scale(x);
        let (lo, hi) = ((window.0 * w).ln(), (window.1 * w).ln());
        let mut max_dev = 0.0f64;
        for j in 0..CHECK_MESH {
            let frac = j as f64 / (CHECK_MESH - 1) as f64;
            let y = (lo + frac * (hi - lo)).exp();
            let target = d * x.powf(q1) * y.powf(q2 - q1);
            let dev = (eval_c(x, y)? - target).abs();
            if !dev.is_finite() {
                return Err(TailError::Domain(format!(
                    "dependence factor evaluated non-finite at x={x}, y={y}"
                )));
            }
            max_dev = max_dev.max(dev);
        }
        rows.push(DependenceCheckRow {
            x,
            max_deviation: max_dev,
        });
    }

    let decreasing = rows
        .windows(2)
        .all(|pair| pair[1].max_deviation <= pair[0].max_deviation + CHECK_SLACK);
    let verdict = decreasing && rows.last().unwrap().max_deviation < tolerance;
    Ok(DependenceCheckReport { rows, verdict })
}
