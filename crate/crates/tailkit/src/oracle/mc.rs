//! Reproducible Monte Carlo for product tails.
//!
//! Draws are organised in fixed-size chunks of 16384 pairs; chunk i uses
//! ChaCha8 seeded with the caller's seed on stream i.  The chunk layout is
//! part of the estimator's definition, so the result is a pure function of
//! (inputs, n, seed): the parallel and sequential drivers, any rayon pool
//! shape, and any platform produce bit-identical estimates.
//!
//! Sampling is inverse-transform end to end.  Under an FGM copula the
//! second factor is drawn first (y = F̄₂⁻¹(u)), then the first factor from
//! its conditional law given y, whose survival is
//!
//! ```text
//! H(s) = F̄₁(s)·[1 + τ·b·F₁(s)],   b = 1 − 2F₂(y),
//! ```
//!
//! inverted by bisection (H is monotone since |τb| ≤ 1).

use crate::error::{Result, TailError};
use crate::numerics::exec::{indexed_map, indexed_map_sequential};
use crate::oracle::dist::OracleDistribution;
use crate::tail::DependenceSpec;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draws per RNG stream; fixed so that thread count can never influence
/// which variates any logical draw receives.
const CHUNK: u64 = 16_384;

/// A plain Monte Carlo estimate of an exceedance probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Fraction of pairs with x₁·x₂ > x.
    pub estimate: f64,
    /// Binomial standard error √(p̂(1−p̂)/n).
    pub std_error: f64,
}

/// Uniform on the open interval (0, 1): 53 mantissa bits, offset half a
/// step so 0 and 1 are unreachable.
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

/// Inverse-transform draw of X₁ conditional on the FGM coupling and the
/// realised survival level u₂ of the second factor (so F₂(y) = 1 − u₂).
fn draw_conditional_fgm(
    d1: &OracleDistribution,
    tau: f64,
    u2: f64,
    v: f64,
) -> Result<f64> {
    let b = 2.0 * u2 - 1.0; // 1 − 2F₂(y)
    let cond_log_survival = |s: f64| -> Result<f64> {
        let ls = d1.log_survival(s)?;
        let f1 = 1.0 - ls.exp();
        Ok(ls + (tau * b * f1).ln_1p())
    };
    // Bracket then bisect H(s) = v.
    let target = v.ln();
    let mut hi = 1.0;
    let mut doublings = 0;
    while cond_log_survival(hi)? > target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 600 {
            return Err(TailError::Domain(
                "conditional FGM survival failed to bracket".to_string(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if cond_log_survival(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn count_chunk(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    dep: &DependenceSpec,
    x: f64,
    seed: u64,
    chunk_index: u64,
    draws: u64,
) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk_index);
    let mut hits = 0u64;
    for _ in 0..draws {
        let u2 = open_uniform(&mut rng);
        let v = open_uniform(&mut rng);
        let y = d2.quantile_survival(u2)?;
        let x1 = match dep {
            DependenceSpec::Independent => d1.quantile_survival(v)?,
            DependenceSpec::Fgm { tau } => draw_conditional_fgm(d1, *tau, u2, v)?,
            DependenceSpec::Custom(_) => {
                return Err(TailError::MissingEvaluator(
                    "custom dependence carries no sampling law; only Independent and FGM \
                     products can be simulated"
                        .to_string(),
                ))
            }
        };
        if x1 * y > x {
            hits += 1;
        }
    }
    Ok(hits)
}

fn run(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    dep: &DependenceSpec,
    x: f64,
    n: u64,
    seed: u64,
    parallel: bool,
) -> Result<McEstimate> {
    d1.validate()?;
    d2.validate()?;
    if let DependenceSpec::Fgm { tau } = dep {
        if !tau.is_finite() || tau.abs() > 1.0 {
            return Err(TailError::Domain(format!(
                "FGM parameter tau must lie in [-1, 1], got {tau}"
            )));
        }
    }
    if n < 1_000 {
        return Err(TailError::Domain(format!(
            "Monte Carlo needs n >= 1000 for a meaningful standard error, got {n}"
        )));
    }
    if !(x >= 0.0) {
        return Err(TailError::Domain(format!(
            "exceedance threshold must be nonnegative, got {x}"
        )));
    }
    if x == 0.0 {
        // Positive factors exceed zero surely.
        return Ok(McEstimate {
            estimate: 1.0,
            std_error: 0.0,
        });
    }

    let chunks = n.div_ceil(CHUNK);
    let body = |i: usize| -> Result<u64> {
        let i = i as u64;
        let draws = CHUNK.min(n - i * CHUNK);
        count_chunk(d1, d2, dep, x, seed, i, draws)
    };
    let counts = if parallel {
        indexed_map(chunks as usize, body)
    } else {
        indexed_map_sequential(chunks as usize, body)
    };
    let mut hits = 0u64;
    for c in counts {
        hits += c?;
    }
    let p = hits as f64 / n as f64;
    Ok(McEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
    })
}

/// Monte Carlo estimate of P(X₁X₂ > x) from n inverse-transform draws,
/// deterministic in (seed, n); chunks are evaluated on the rayon pool when
/// the `parallel` feature is active.
pub fn mc_product_tail(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    dep: &DependenceSpec,
    x: f64,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    run(d1, d2, dep, x, n, seed, true)
}

/// Always-sequential twin of [`mc_product_tail`]; same chunk layout, so the
/// result is bit-identical.
pub fn mc_product_tail_sequential(
    d1: &OracleDistribution,
    d2: &OracleDistribution,
    dep: &DependenceSpec,
    x: f64,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    run(d1, d2, dep, x, n, seed, false)
}
