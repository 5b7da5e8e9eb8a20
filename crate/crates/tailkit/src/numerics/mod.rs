//! Shared numerical machinery: log-space special functions, adaptive
//! Gauss–Kronrod quadrature for functions supplied as log-integrands,
//! tanh-sinh quadrature, golden-section minimization, and the indexed-map
//! executor behind the `parallel` feature.

pub mod exec;
pub mod golden;
pub mod quad;
pub mod special;
