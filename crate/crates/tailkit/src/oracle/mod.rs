//! Ground-truth engine: exact distributions, adaptive quadrature of the
//! product-tail integrals, reproducible Monte Carlo, and ratio-convergence
//! sweeps.  Everything here is independent of the closed-form asymptotics
//! it is used to verify — values come from integral representations of the
//! exact laws, never from the formulas under test.

pub mod dist;
pub mod mc;
pub mod quad;
pub mod sweep;

pub use dist::OracleDistribution;
pub use mc::{mc_product_tail, mc_product_tail_sequential, McEstimate};
pub use quad::{
    bm_sup_quadrature, bm_sup_quadrature_with, density_product_quadrature,
    density_product_quadrature_with, gaussian_product_quadrature,
    gaussian_product_quadrature_with, survival_product_quadrature,
    survival_product_quadrature_with,
};
pub use sweep::{ratio_sweep, ratio_sweep_sequential, RatioRow};
