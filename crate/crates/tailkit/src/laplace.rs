//! The saddle machinery behind every product prefactor.
//!
//! All the closed forms in [`crate::product`] descend from one Laplace
//! approximation of
//!
//! ```text
//! ∫₀^∞ y^{κm} · exp(−λ·ψ(y)) dy,   ψ(y) = L₁A^{−p₁}y^{−p₁} + L₂A^{p₂}y^{p₂},
//! ```
//!
//! where ψ is the saddle function in units of z_x = A·x^{p₁/(p₁+p₂)}, so its
//! minimizer sits at y = 1 with ψ(1) = B.  This module exposes that
//! machinery directly — the normalized ψ, its curvature at the minimizer,
//! an independent numerical minimizer of the unnormalized ψ_x, and the
//! leading-order Laplace value — so each prefactor can be cross-validated
//! against straight quadrature instead of being trusted algebraically.

use crate::error::{Result, TailError};
use crate::numerics::golden::golden_section_min;
use crate::numerics::quad::{log_integrate_bump, QuadratureSettings};
use crate::numerics::special::LN_2PI;
use crate::product::product_tail_polynomial;
use crate::tail::WeibullTypeTail;

/// The normalized saddle function of a pair of Weibull-type rates: the
/// coefficients, the balance point A, and derived curvature data.
#[derive(Debug, Clone, Copy)]
pub struct SaddleSpec {
    l1: f64,
    p1: f64,
    l2: f64,
    p2: f64,
    a: f64,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(TailError::Domain(format!(
            "{name} must be a positive finite real, got {v}"
        )));
    }
    Ok(())
}

impl SaddleSpec {
    pub fn new(l1: f64, p1: f64, l2: f64, p2: f64) -> Result<Self> {
        require_positive("rate L1", l1)?;
        require_positive("exponent p1", p1)?;
        require_positive("rate L2", l2)?;
        require_positive("exponent p2", p2)?;
        let a = ((p1 * l1) / (p2 * l2)).powf(1.0 / (p1 + p2));
        Ok(SaddleSpec { l1, p1, l2, p2, a })
    }

    pub fn from_tails(t1: &WeibullTypeTail, t2: &WeibullTypeTail) -> Self {
        // Tail constructors already validated the rates, so this cannot fail.
        Self::new(t1.rate(), t1.exponent(), t2.rate(), t2.exponent()).unwrap()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// B = ψ(1) = L₁A^{−p₁} + L₂A^{p₂}.
    pub fn b(&self) -> f64 {
        self.psi(1.0)
    }

    /// r = p₁p₂/(p₁+p₂).
    pub fn rate_exponent(&self) -> f64 {
        self.p1 * self.p2 / (self.p1 + self.p2)
    }

    /// Normalized saddle function ψ(y) = L₁A^{−p₁}y^{−p₁} + L₂A^{p₂}y^{p₂},
    /// minimized at y = 1 by construction of A.
    pub fn psi(&self, y: f64) -> f64 {
        self.l1 * self.a.powf(-self.p1) * y.powf(-self.p1)
            + self.l2 * self.a.powf(self.p2) * y.powf(self.p2)
    }

    /// ψ′(1) from the closed form −p₁L₁A^{−p₁} + p₂L₂A^{p₂}; zero up to
    /// rounding for every valid spec.
    pub fn psi_derivative_at_one(&self) -> f64 {
        -self.p1 * self.l1 * self.a.powf(-self.p1)
            + self.p2 * self.l2 * self.a.powf(self.p2)
    }

    /// Curvature ψ″(1) = p₁(p₁+1)L₁A^{−p₁} + p₂(p₂−1)L₂A^{p₂}, strictly
    /// positive: the saddle is always an interior minimum.
    pub fn psi_second_at_one(&self) -> f64 {
        self.p1 * (self.p1 + 1.0) * self.l1 * self.a.powf(-self.p1)
            + self.p2 * (self.p2 - 1.0) * self.l2 * self.a.powf(self.p2)
    }

    /// Numerically minimizes the unnormalized ψ_x(y) = L₁(x/y)^{p₁} + L₂y^{p₂}
    /// over y ∈ (0, ∞), returning (argmin, minimum value).
    ///
    /// Golden-section on ln y over [ln z_x − 5, ln z_x + 5] (ψ_x is strictly
    /// convex in ln y), then a derivative-sign bisection polish: golden
    /// section alone stalls at the √ε noise floor of the objective, while
    /// the derivative −p₁L₁(x/y)^{p₁} + p₂L₂y^{p₂} changes sign crisply.
    pub fn minimize_psi(&self, x: f64) -> Result<(f64, f64)> {
        require_positive("threshold x", x)?;
        let ln_x = x.ln();
        let objective = |t: f64| {
            (self.p1 * (ln_x - t)).exp() * self.l1 + (self.p2 * t).exp() * self.l2
        };
        let derivative = |t: f64| {
            -self.p1 * self.l1 * (self.p1 * (ln_x - t)).exp()
                + self.p2 * self.l2 * (self.p2 * t).exp()
        };
        let center = self.a.ln() + ln_x * self.p1 / (self.p1 + self.p2);
        let coarse = golden_section_min(objective, center - 5.0, center + 5.0, 1e-12);
        // The derivative is strictly increasing in t = ln y; bracket its
        // root around the golden-section estimate and bisect.
        let mut step = 1e-6;
        let (mut lo, mut hi) = (coarse - step, coarse + step);
        while derivative(lo) > 0.0 {
            step *= 2.0;
            lo -= step;
        }
        step = 1e-6;
        while derivative(hi) < 0.0 {
            step *= 2.0;
            hi += step;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if derivative(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        Ok((t.exp(), objective(t)))
    }
}

/// The unnormalized saddle integrand exponent ψ_x(y) = L₁(x/y)^{p₁} + L₂y^{p₂}.
pub fn psi_value(spec: &SaddleSpec, x: f64, y: f64) -> Result<f64> {
    require_positive("threshold x", x)?;
    require_positive("argument y", y)?;
    Ok(spec.l1 * (x / y).powf(spec.p1) + spec.l2 * y.powf(spec.p2))
}

/// Leading-order Laplace estimate of ln ∫₀^∞ y^{κm}·exp(−λψ(y)) dy for the
/// normalized ψ of `spec`:
///
/// ```text
/// ½·ln(2π / (λ·ψ″(1))) − λ·ψ(1).
/// ```
///
/// The modulation exponent κm does not enter at leading order — the
/// minimizer sits at y = 1 where y^{κm} = 1 — but it is part of the
/// integrand's definition and kept in the signature.
pub fn laplace_log_integral(
    modulation_exponent: f64,
    spec: &SaddleSpec,
    lambda: f64,
) -> Result<f64> {
    if !modulation_exponent.is_finite() {
        return Err(TailError::Domain(format!(
            "modulation exponent must be finite, got {modulation_exponent}"
        )));
    }
    require_positive("scale lambda", lambda)?;
    Ok(0.5 * (LN_2PI - lambda.ln() - spec.psi_second_at_one().ln()) - lambda * spec.b())
}

/// One threshold of an asymptotic-versus-quadrature comparison of the
/// saddle integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyRow {
    pub x: f64,
    /// The collapsed closed form at x.
    pub log_asymptotic: f64,
    /// Direct quadrature of L₂p₂·∫ y^{p₂−1}·g₁(x/y)·g₂(y)·exp(−ψ_x(y)) dy.
    pub log_quadrature: f64,
    pub abs_log_gap: f64,
}

/// Gap sequence from [`laplace_consistency_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
}

impl ConsistencyReport {
    /// True when the log-scale gaps strictly shrink along the grid, the
    /// signature of a genuine first-order asymptotic.
    pub fn gaps_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|pair| pair[1].abs_log_gap < pair[0].abs_log_gap)
    }
}

/// Cross-validates the collapsed product form against direct quadrature of
/// the saddle integrand it was derived from, across an increasing grid of
/// thresholds.  For exact Weibull factors the integrand is the product's
/// true survival, so the gaps measure nothing but the quality of the
/// asymptotic.
pub fn laplace_consistency_check(
    t1: &WeibullTypeTail,
    t2: &WeibullTypeTail,
    x_grid: &[f64],
) -> Result<ConsistencyReport> {
    let form = product_tail_polynomial(t1, t2)?;
    if x_grid.is_empty() {
        return Err(TailError::Domain(
            "consistency check needs a nonempty threshold grid".to_string(),
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
    let spec = SaddleSpec::from_tails(t1, t2);
    let (l1, p1) = (t1.rate(), t1.exponent());
    let (l2, p2) = (t2.rate(), t2.exponent());
    let settings = QuadratureSettings::default();
    let mut rows = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let log_asymptotic = form.eval_log_survival(x)?.log_value;
        let ln_x = x.ln();
        // u = ln y; the y^{p₂−1} kernel and the jacobian merge into p₂u.
        let log_f = |u: f64| {
            (l2 * p2).ln()
                + p2 * u
                + t1.log_modulation((ln_x - u).exp())
                + t2.log_modulation(u.exp())
                - l1 * (p1 * (ln_x - u)).exp()
                - l2 * (p2 * u).exp()
        };
        let start = spec.a().ln() + ln_x * p1 / (p1 + p2);
        let log_quadrature = log_integrate_bump(log_f, start, &settings, "saddle integrand")
            .map_err(|e| e.in_context(&format!("saddle integrand at x = {x}")))?;
        rows.push(ConsistencyRow {
            x,
            log_asymptotic,
            log_quadrature,
            abs_log_gap: (log_asymptotic - log_quadrature).abs(),
        });
    }
    Ok(ConsistencyReport { rows })
}
