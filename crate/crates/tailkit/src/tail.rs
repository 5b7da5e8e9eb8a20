//! The Weibull-type tail class and the carriers shared by every asymptotic
//! in the crate.
//!
//! A tail P(X > x) ~ g(x)·exp(−L·x^p) is described by [`WeibullTypeTail`]:
//! rate L > 0, exponent p > 0, and a modulation g that is regularly varying
//! with index α.  The canonical modulation is the power law C·x^α; slowly
//! varying corrections enter through a user evaluator for ln g plus a
//! declared index, admissibility being checked on a geometric grid.
//!
//! For a product Z = X₁X₂ the saddle-point structure is captured by
//! [`ProductConstants`]:
//!
//! ```text
//! A = [(p₁L₁)/(p₂L₂)]^{1/(p₁+p₂)},   B = L₁A^{−p₁} + L₂A^{p₂},
//! r = p₁p₂/(p₁+p₂),                  z_x = A·x^{p₁/(p₁+p₂)},
//! ```
//!
//! so that P(Z > x) decays like exp(−B·x^r) with the conditioning variable
//! concentrating near z_x.  Every closed-form result is returned as an
//! [`AsymptoticForm`], the log-space carrier
//!
//! ```text
//! log P ≈ logPrefactor + κ·ln x + Σ log gᵢ(mapᵢ(x)) − B̃·x^r,
//! ```
//!
//! which keeps evaluation finite at any x and records when the requested
//! point is too shallow for the asymptotic to have set in.

use crate::error::{Result, TailError};
use std::fmt;
use std::sync::Arc;

/// Shared evaluator for a log-modulation u ↦ ln g(u).
pub type LogModulation = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Shared map from the evaluation point x to a modulation argument.
pub type ArgMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Modulation g of a Weibull-type tail: the regularly varying factor in
/// g(x)·exp(−L·x^p).
#[derive(Clone)]
pub enum Modulation {
    /// g(u) = c·u^alpha exactly.
    PowerLaw { c: f64, alpha: f64 },
    /// ln g supplied by the caller, declared regularly varying with index
    /// `alpha`; consistency is checked at construction on a geometric grid.
    Custom { log_g: LogModulation, alpha: f64 },
}

impl fmt::Debug for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulation::PowerLaw { c, alpha } => f
                .debug_struct("PowerLaw")
                .field("c", c)
                .field("alpha", alpha)
                .finish(),
            Modulation::Custom { alpha, .. } => f
                .debug_struct("Custom")
                .field("alpha", alpha)
                .field("log_g", &"<evaluator>")
                .finish(),
        }
    }
}

/// A Weibull-type tail P(X > x) ~ g(x)·exp(−L·x^p).
#[derive(Debug, Clone)]
pub struct WeibullTypeTail {
    modulation: Modulation,
    l: f64,
    p: f64,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(TailError::Domain(format!(
            "{name} must be a positive finite real, got {v}"
        )));
    }
    Ok(())
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(TailError::Domain(format!(
            "{name} must be finite, got {v}"
        )));
    }
    Ok(())
}

impl WeibullTypeTail {
    /// Power-law modulated tail C·x^α·exp(−L·x^p).
    pub fn new(c: f64, alpha: f64, l: f64, p: f64) -> Result<Self> {
        require_positive("modulation coefficient C", c)?;
        require_finite("modulation index alpha", alpha)?;
        require_positive("rate L", l)?;
        require_positive("exponent p", p)?;
        Ok(WeibullTypeTail {
            modulation: Modulation::PowerLaw { c, alpha },
            l,
            p,
        })
    }

    /// Tail with a caller-supplied log-modulation and declared index,
    /// checked with the default index tolerance of 0.1.
    pub fn with_modulation(
        log_g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        alpha: f64,
        l: f64,
        p: f64,
    ) -> Result<Self> {
        Self::with_modulation_tolerance(log_g, alpha, l, p, 0.1)
    }

    /// Tail with a caller-supplied log-modulation and declared index.
    ///
    /// Regular variation with index α means ln g(2u) − ln g(u) → α·ln 2; the
    /// constructor measures that doubling gap on the geometric grid
    /// u = 100·2^k (k ≤ 25) and insists the last eight gaps sit below
    /// `tolerance`.  Ultimate monotonicity of g — an assumption of the
    /// product asymptotics that cannot be decided from point evaluations — is
    /// likewise only screened on the back half of the same grid.
    pub fn with_modulation_tolerance(
        log_g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        alpha: f64,
        l: f64,
        p: f64,
        tolerance: f64,
    ) -> Result<Self> {
        require_finite("modulation index alpha", alpha)?;
        require_positive("rate L", l)?;
        require_positive("exponent p", p)?;
        require_positive("index tolerance", tolerance)?;

        let ln2 = std::f64::consts::LN_2;
        let mut values = Vec::with_capacity(27);
        for k in 0..=26 {
            let u = 100.0 * (1u64 << k) as f64;
            let v = log_g(u);
            if !v.is_finite() {
                return Err(TailError::Domain(format!(
                    "custom modulation is not finite at u = {u:.3e} (got {v})"
                )));
            }
            values.push(v);
        }
        for k in 18..=25 {
            let gap = (values[k + 1] - values[k] - alpha * ln2).abs();
            if gap > tolerance {
                return Err(TailError::Domain(format!(
                    "custom modulation disagrees with declared index {alpha}: \
                     doubling gap {gap:.3e} at u = {:.3e} exceeds tolerance {tolerance:.3e}",
                    100.0 * (1u64 << k) as f64
                )));
            }
        }
        let back = &values[13..];
        let increasing = back.windows(2).all(|w| w[1] >= w[0] - 1e-12);
        let decreasing = back.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        if !increasing && !decreasing {
            return Err(TailError::Domain(
                "custom modulation is not ultimately monotone on the checked grid".to_string(),
            ));
        }

        Ok(WeibullTypeTail {
            modulation: Modulation::Custom {
                log_g: Arc::new(log_g),
                alpha,
            },
            l,
            p,
        })
    }

    pub fn modulation(&self) -> &Modulation {
        &self.modulation
    }

    /// Regular-variation index of the modulation.
    pub fn alpha(&self) -> f64 {
        match self.modulation {
            Modulation::PowerLaw { alpha, .. } | Modulation::Custom { alpha, .. } => alpha,
        }
    }

    /// Modulation coefficient C for power-law modulations, `None` otherwise.
    pub fn coefficient(&self) -> Option<f64> {
        match self.modulation {
            Modulation::PowerLaw { c, .. } => Some(c),
            Modulation::Custom { .. } => None,
        }
    }

    pub fn rate(&self) -> f64 {
        self.l
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// ln g(u) for u > 0.
    pub fn log_modulation(&self, u: f64) -> f64 {
        match &self.modulation {
            Modulation::PowerLaw { c, alpha } => c.ln() + alpha * u.ln(),
            Modulation::Custom { log_g, .. } => log_g(u),
        }
    }

    /// A shareable evaluator of ln g, for embedding into asymptotic forms.
    pub fn log_modulation_evaluator(&self) -> LogModulation {
        match &self.modulation {
            Modulation::PowerLaw { c, alpha } => {
                let (c, alpha) = (*c, *alpha);
                Arc::new(move |u: f64| c.ln() + alpha * u.ln())
            }
            Modulation::Custom { log_g, .. } => log_g.clone(),
        }
    }

    /// ln[g(x)·exp(−L·x^p)], the tail's own asymptotic log-survival.
    pub fn log_survival_asymptotic(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(TailError::Domain(format!(
                "tail evaluation needs x > 0, got {x}"
            )));
        }
        Ok(self.log_modulation(x) - self.l * x.powf(self.p))
    }
}

/// Saddle-point constants of a product of two Weibull-type tails.
#[derive(Debug, Clone, Copy)]
pub struct ProductConstants {
    a: f64,
    b: f64,
    p1: f64,
    p2: f64,
}

impl ProductConstants {
    pub fn from_tails(t1: &WeibullTypeTail, t2: &WeibullTypeTail) -> Self {
        let (l1, p1) = (t1.rate(), t1.exponent());
        let (l2, p2) = (t2.rate(), t2.exponent());
        let a = ((p1 * l1) / (p2 * l2)).powf(1.0 / (p1 + p2));
        let b = l1 * a.powf(-p1) + l2 * a.powf(p2);
        ProductConstants { a, b, p1, p2 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// r = p₁p₂/(p₁+p₂): the product tail decays like exp(−B·x^r).
    pub fn rate_exponent(&self) -> f64 {
        self.p1 * self.p2 / (self.p1 + self.p2)
    }

    /// p₁/(p₁+p₂): the power of x in the saddle location.
    pub fn saddle_exponent(&self) -> f64 {
        self.p1 / (self.p1 + self.p2)
    }

    /// z_x = A·x^{p₁/(p₁+p₂)}, where the conditioning variable concentrates.
    pub fn saddle_point(&self, x: f64) -> f64 {
        self.a * x.powf(self.saddle_exponent())
    }

    /// w_x = x^{p₁/(p₁+p₂)}, the natural window scale around the saddle.
    pub fn window_scale(&self, x: f64) -> f64 {
        x.powf(self.saddle_exponent())
    }
}

/// Envelope bounds for a custom dependence density factor: c(x, y) must stay
/// within K₁·x^{β₁} + K₂·x^{β₂}-style control away from the saddle window
/// for the product expansion to hold.
#[derive(Debug, Clone, Copy)]
pub struct DependenceEnvelope {
    pub k1: f64,
    pub k2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// User-described dependence: the local density factor c(x, y), its limit
/// profile D·x^{q₁}·y^{q₂−q₁} on the saddle window, and the envelope that
/// controls it elsewhere.
#[derive(Clone)]
pub struct CustomDependence {
    pub d: f64,
    pub q1: f64,
    pub q2: f64,
    pub c: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub envelope: DependenceEnvelope,
    /// Saddle window (a₁, a₂) in units of w_x, with a₁ < a₂.
    pub window: (f64, f64),
}

impl fmt::Debug for CustomDependence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDependence")
            .field("d", &self.d)
            .field("q1", &self.q1)
            .field("q2", &self.q2)
            .field("c", &"<evaluator>")
            .field("envelope", &self.envelope)
            .field("window", &self.window)
            .finish()
    }
}

/// How the two factors of a product depend on each other.
#[derive(Debug, Clone)]
pub enum DependenceSpec {
    Independent,
    /// Farlie–Gumbel–Morgenstern copula with parameter τ ∈ [−1, 1].
    Fgm { tau: f64 },
    Custom(CustomDependence),
}

impl DependenceSpec {
    /// The (D, q₁, q₂) profile that the dependence contributes to the
    /// product-tail prefactor: c(x, y) → D·x^{q₁}·y^{q₂−q₁} on the saddle
    /// window.  Independent gives (1, 0, 0); FGM gives (1−τ, 0, 0) because
    /// on the window F₁(x/y) → 1 and F₂(y) → 1.
    pub fn limit_profile(&self) -> Result<(f64, f64, f64)> {
        match self {
            DependenceSpec::Independent => Ok((1.0, 0.0, 0.0)),
            DependenceSpec::Fgm { tau } => {
                if !tau.is_finite() || tau.abs() > 1.0 {
                    return Err(TailError::Domain(format!(
                        "FGM parameter tau must lie in [-1, 1], got {tau}"
                    )));
                }
                Ok((1.0 - tau, 0.0, 0.0))
            }
            DependenceSpec::Custom(custom) => {
                if !custom.d.is_finite() || custom.d < 0.0 {
                    return Err(TailError::Domain(format!(
                        "custom dependence coefficient D must be nonnegative, got {}",
                        custom.d
                    )));
                }
                Ok((custom.d, custom.q1, custom.q2))
            }
        }
    }
}

/// Outcome of evaluating an [`AsymptoticForm`] at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormEvaluation {
    /// ln of the asymptotic right-hand side.
    pub log_value: f64,
    /// True when B̃·x^r is below the validity threshold, i.e. the point is
    /// too shallow in the tail for the first-order asymptotic to be
    /// trustworthy.
    pub pre_asymptotic: bool,
}

/// Log-space carrier of a first-order tail asymptotic:
/// logPrefactor + κ·ln x + Σ ln gᵢ(mapᵢ(x)) − B̃·x^r.
#[derive(Clone)]
pub struct AsymptoticForm {
    log_prefactor: f64,
    poly_exponent: f64,
    rate_coefficient: f64,
    rate_exponent: f64,
    modulation_terms: Vec<(LogModulation, ArgMap)>,
    validity_threshold: f64,
}

impl fmt::Debug for AsymptoticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AsymptoticForm")
            .field("log_prefactor", &self.log_prefactor)
            .field("poly_exponent", &self.poly_exponent)
            .field("rate_coefficient", &self.rate_coefficient)
            .field("rate_exponent", &self.rate_exponent)
            .field("modulation_terms", &self.modulation_terms.len())
            .field("validity_threshold", &self.validity_threshold)
            .finish()
    }
}

impl AsymptoticForm {
    /// Builds a bare form with no modulation terms.  A zero rate coefficient
    /// is capped to the smallest positive double (the degenerate identity
    /// form), negative coefficients are rejected.
    pub fn new(
        log_prefactor: f64,
        poly_exponent: f64,
        rate_coefficient: f64,
        rate_exponent: f64,
    ) -> Result<Self> {
        require_finite("log prefactor", log_prefactor)?;
        require_finite("polynomial exponent", poly_exponent)?;
        require_positive("rate exponent", rate_exponent)?;
        if !rate_coefficient.is_finite() || rate_coefficient < 0.0 {
            return Err(TailError::Domain(format!(
                "rate coefficient must be a nonnegative finite real, got {rate_coefficient}"
            )));
        }
        Ok(AsymptoticForm {
            log_prefactor,
            poly_exponent,
            rate_coefficient: rate_coefficient.max(f64::MIN_POSITIVE),
            rate_exponent,
            modulation_terms: Vec::new(),
            validity_threshold: 5.0,
        })
    }

    /// Attaches a modulation term contributing ln g(map(x)) to evaluations.
    pub fn with_modulation_term(mut self, log_g: LogModulation, map: ArgMap) -> Self {
        self.modulation_terms.push((log_g, map));
        self
    }

    /// Adjusts the minimum B̃·x^r below which evaluations are flagged
    /// pre-asymptotic (default 5, i.e. tail mass above e⁻⁵).
    pub fn set_validity_threshold(&mut self, threshold: f64) -> Result<()> {
        require_positive("validity threshold", threshold)?;
        self.validity_threshold = threshold;
        Ok(())
    }

    pub fn log_prefactor(&self) -> f64 {
        self.log_prefactor
    }

    pub fn poly_exponent(&self) -> f64 {
        self.poly_exponent
    }

    pub fn rate_coefficient(&self) -> f64 {
        self.rate_coefficient
    }

    pub fn rate_exponent(&self) -> f64 {
        self.rate_exponent
    }

    pub fn validity_threshold(&self) -> f64 {
        self.validity_threshold
    }

    pub fn modulation_term_count(&self) -> usize {
        self.modulation_terms.len()
    }

    /// Evaluates the form at x > 0.
    pub fn eval_log_survival(&self, x: f64) -> Result<FormEvaluation> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(TailError::Domain(format!(
                "asymptotic form evaluation needs finite x > 0, got {x}"
            )));
        }
        let ln_x = x.ln();
        // B̃·x^r through logs so enormous x cannot overflow the power.
        let decay = (self.rate_coefficient.ln() + self.rate_exponent * ln_x)
            .exp()
            .min(f64::MAX);
        let mut log_value = self.log_prefactor + self.poly_exponent * ln_x - decay;
        for (log_g, map) in &self.modulation_terms {
            log_value += log_g(map(x));
        }
        Ok(FormEvaluation {
            log_value,
            pre_asymptotic: decay < self.validity_threshold,
        })
    }
}
