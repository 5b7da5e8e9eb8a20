//! Side-by-side evaluation of a closed form against an exact oracle.
//!
//! A sweep walks an increasing grid of thresholds, evaluates the asymptotic
//! form and the oracle at each, and reports the gap on the log scale.  Rows
//! are independent, so the grid is mapped in parallel when the `parallel`
//! feature is active; per-row failures (say, a quadrature budget blown at
//! one extreme threshold) are kept as row-level errors instead of sinking
//! the whole sweep.

use crate::error::{Result, TailError};
use crate::numerics::exec::{indexed_map, indexed_map_sequential};
use crate::tail::AsymptoticForm;

/// One grid point of an asymptotic-versus-exact comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    /// Threshold at which both sides were evaluated.
    pub x: f64,
    /// Oracle value of ln P(product > x).
    pub log_exact: f64,
    /// Closed-form value of ln P(product > x).
    pub log_asymptotic: f64,
    /// exact / asymptotic, the quantity that should drift to 1.
    pub ratio: f64,
    /// |log_exact − log_asymptotic|.
    pub abs_log_gap: f64,
    /// True when the form flagged this threshold as below its validity
    /// window, so a large gap is expected rather than alarming.
    pub pre_asymptotic: bool,
}

fn validate_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.is_empty() {
        return Err(TailError::Domain("sweep grid is empty".to_string()));
    }
    for pair in x_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(TailError::Domain(format!(
                "sweep grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

fn row(
    form: &AsymptoticForm,
    oracle: &(impl Fn(f64) -> Result<f64> + Sync),
    x: f64,
) -> Result<RatioRow> {
    let eval = form.eval_log_survival(x)?;
    let log_exact = oracle(x)?;
    let gap = log_exact - eval.log_value;
    Ok(RatioRow {
        x,
        log_exact,
        log_asymptotic: eval.log_value,
        ratio: gap.exp(),
        abs_log_gap: gap.abs(),
        pre_asymptotic: eval.pre_asymptotic,
    })
}

/// Evaluates `form` against `oracle` (both on the log scale) over a strictly
/// increasing threshold grid.  The outer `Result` rejects a malformed grid;
/// each row carries its own `Result` so one failed threshold does not erase
/// its neighbours.
pub fn ratio_sweep(
    form: &AsymptoticForm,
    oracle: impl Fn(f64) -> Result<f64> + Sync,
    x_grid: &[f64],
) -> Result<Vec<Result<RatioRow>>> {
    validate_grid(x_grid)?;
    Ok(indexed_map(x_grid.len(), |i| row(form, &oracle, x_grid[i])))
}

/// Always-sequential twin of [`ratio_sweep`]; identical results, used to
/// benchmark the parallel driver against a single-threaded baseline.
pub fn ratio_sweep_sequential(
    form: &AsymptoticForm,
    oracle: impl Fn(f64) -> Result<f64> + Sync,
    x_grid: &[f64],
) -> Result<Vec<Result<RatioRow>>> {
    validate_grid(x_grid)?;
    Ok(indexed_map_sequential(x_grid.len(), |i| {
        row(form, &oracle, x_grid[i])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::LN_2PI;
    use crate::oracle::dist::OracleDistribution;
    use crate::oracle::quad::survival_product_quadrature;
    use crate::tail::{DependenceSpec, ProductConstants, WeibullTypeTail};

    fn exp_square_form() -> AsymptoticForm {
        // Two unit exponentials: A = 1, B = 2, r = 1/2, and the product
        // prefactor √(2π·p₂L₂/(p₁+p₂))·A^{p₂/2} = √π with κ = 1/4.
        let t = WeibullTypeTail::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let k = ProductConstants::from_tails(&t, &t);
        assert_eq!(k.a(), 1.0);
        assert_eq!(k.b(), 2.0);
        let log_prefactor = 0.5 * (LN_2PI - std::f64::consts::LN_2);
        AsymptoticForm::new(log_prefactor, 0.25, k.b(), k.rate_exponent()).unwrap()
    }

    #[test]
    fn gap_shrinks_along_the_exponential_product() {
        let form = exp_square_form();
        let exp1 = OracleDistribution::Exponential { rate: 1.0 };
        let grid = [100.0, 400.0, 2500.0];
        let rows = ratio_sweep(
            &form,
            |x| survival_product_quadrature(&exp1, &exp1, &DependenceSpec::Independent, x),
            &grid,
        )
        .unwrap();
        let rows: Vec<RatioRow> = rows.into_iter().map(|r| r.unwrap()).collect();
        // exact/asymptotic − 1 follows the 3/(16√x) correction term.
        let expected = [0.018469025, 0.0093033062, 0.0037383824];
        for (row, want) in rows.iter().zip(expected) {
            assert!(
                ((row.ratio - 1.0).abs() - want).abs() < 1e-4,
                "x={}: ratio {} vs 1 + {}",
                row.x,
                row.ratio,
                want
            );
            assert!(!row.pre_asymptotic);
        }
        assert!(rows[0].abs_log_gap > rows[1].abs_log_gap);
        assert!(rows[1].abs_log_gap > rows[2].abs_log_gap);
        assert!((rows[2].ratio - 1.0).abs() < 0.004);
    }

    #[test]
    fn identity_oracle_gives_zero_gap() {
        let form = exp_square_form();
        let grid = [10.0, 20.0, 40.0];
        let rows = ratio_sweep(&form, |x| form.eval_log_survival(x).map(|e| e.log_value), &grid)
            .unwrap();
        for r in rows {
            let r = r.unwrap();
            assert_eq!(r.abs_log_gap, 0.0);
            assert_eq!(r.ratio, 1.0);
        }
    }

    #[test]
    fn parallel_and_sequential_agree_exactly() {
        let form = exp_square_form();
        let exp1 = OracleDistribution::Exponential { rate: 1.0 };
        let oracle =
            |x: f64| survival_product_quadrature(&exp1, &exp1, &DependenceSpec::Independent, x);
        let grid = [50.0, 150.0, 450.0, 1350.0];
        let par = ratio_sweep(&form, oracle, &grid).unwrap();
        let seq = ratio_sweep_sequential(&form, oracle, &grid).unwrap();
        for (a, b) in par.iter().zip(seq.iter()) {
            assert_eq!(a.as_ref().unwrap(), b.as_ref().unwrap());
        }
    }

    #[test]
    fn rejects_malformed_grids() {
        let form = exp_square_form();
        let ok = |x: f64| Ok(x);
        assert!(matches!(
            ratio_sweep(&form, ok, &[]),
            Err(TailError::Domain(_))
        ));
        assert!(ratio_sweep(&form, ok, &[2.0, 2.0]).is_err());
        assert!(ratio_sweep(&form, ok, &[3.0, 1.0]).is_err());
    }

    #[test]
    fn row_failures_stay_local() {
        let form = exp_square_form();
        let oracle = |x: f64| {
            if x > 100.0 {
                Err(TailError::Domain("synthetic failure".to_string()))
            } else {
                Ok(-x)
            }
        };
        let rows = ratio_sweep(&form, oracle, &[50.0, 200.0]).unwrap();
        assert!(rows[0].is_ok());
        assert!(rows[1].is_err());
    }
}
