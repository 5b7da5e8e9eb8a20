//! Tail asymptotics of Weibull-type risks.
//!
//! A positive risk X is *Weibull-type* when its survival function satisfies
//!
//! ```text
//! P(X > x) ~ g(x) · exp(−L·x^p),   x → ∞,
//! ```
//!
//! with rate L > 0, exponent p > 0, and a regularly varying modulation g.
//! This crate computes first-order tail asymptotics of products Z = X₁X₂ of
//! two such risks — independent, FGM-coupled, or with a user-described
//! dependence window — together with the applications that fall out of the
//! product form: suprema of Brownian motion over random horizons, joint
//! tails of (scaled) elliptical vectors, and weak tail dependence
//! coefficients.
//!
//! Every closed form ships with an independent verification channel:
//!
//! * [`oracle`] — exact distributions, log-space adaptive quadrature of the
//!   product-tail integrals, and reproducible Monte Carlo;
//! * [`laplace`] — the saddle-point machinery behind the formulas, exposed
//!   as a numerical cross-check of each prefactor.
//!
//! All probabilities live in natural-log space end to end: the x-ranges on
//! which the asymptotics are accurate put linear-scale values far below the
//! smallest positive double.
//!
//! With the default `parallel` feature, sweeps, dependence meshes, and
//! Monte Carlo batches spread over the rayon thread pool; disabling the
//! feature runs the same code paths sequentially with identical results.

pub mod bessel;
pub mod brownian;
pub mod elliptical;
mod error;
pub mod laplace;
pub mod numerics;
pub mod oracle;
pub mod product;
pub mod tail;

pub use error::{Result, TailError};
