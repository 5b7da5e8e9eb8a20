use thiserror::Error;

/// Errors reported by tail constructions, quadrature, and sampling.
#[derive(Debug, Clone, Error)]
pub enum TailError {
    /// A parameter is outside its admissible range (non-positive rate,
    /// exponent out of bounds, empty grid, ...).  The message names the
    /// offending field and the value received.
    #[error("domain error: {0}")]
    Domain(String),

    /// The leading coefficient of the requested asymptotic is zero, so the
    /// first-order form degenerates and a higher-order expansion would be
    /// needed (e.g. an FGM copula at τ = 1).
    #[error("degenerate leading coefficient: {0}")]
    DegenerateLeadingCoefficient(String),

    /// An operation that needs power-law modulations was handed a custom
    /// one (or vice versa) and no evaluator is available for it.
    #[error("modulation is not a power law: {0}")]
    ModulationNotPolynomial(String),

    /// The requested check or computation needs an evaluator that the
    /// supplied configuration does not carry.
    #[error("missing evaluator: {0}")]
    MissingEvaluator(String),

    /// Adaptive quadrature stopped before reaching the requested relative
    /// accuracy.  `achieved` and `requested` are relative error estimates;
    /// `panels` is the number of subintervals at the point of failure.
    #[error(
        "quadrature failure in {context}: achieved relative error {achieved:.3e} \
         after {panels} panels (requested {requested:.3e})"
    )]
    QuadratureFailure {
        context: String,
        achieved: f64,
        requested: f64,
        panels: usize,
    },
}

impl TailError {
    /// Re-wraps a quadrature failure with a more specific context string,
    /// leaving other variants untouched.  Higher-level drivers use this to
    /// replace the generic integrator context with the name of the quantity
    /// being computed.
    pub fn in_context(self, context: &str) -> TailError {
        match self {
            TailError::QuadratureFailure {
                achieved,
                requested,
                panels,
                ..
            } => TailError::QuadratureFailure {
                context: context.to_string(),
                achieved,
                requested,
                panels,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, TailError>;
