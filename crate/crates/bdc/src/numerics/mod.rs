//! Special functions backing the likelihoods and the dependence penalty.
//!
//! Everything is computed and returned in log space where products over
//! many Gamma terms would otherwise underflow. The Tricomi function uses
//! its integral representation evaluated by adaptive Gauss-Kronrod
//! quadrature, which is well conditioned for the positive real arguments
//! this crate needs.

mod gamma;
mod quad;
mod tricomi;

pub use gamma::{
    gamma_cdf, gamma_quantile, log_beta, log_gamma_density, log_gamma_fn, normal_cdf,
    regularized_gamma_q,
};
pub use quad::{integrate, QuadratureSpec};
pub use tricomi::{log_tricomi_u, tricomi_u};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("argument {name} must be positive, got {value}")]
    NonPositiveArgument { name: &'static str, value: f64 },
    #[error("probability {p} outside (0,1)")]
    OutOfRangeProbability { p: f64 },
    #[error("quadrature did not converge within {nodes} nodes")]
    NonConvergentQuadrature { nodes: usize },
}

/// log(sum(exp(x))) without overflow; -inf for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_basics() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[0.0, 0.0]) - std::f64::consts::LN_2).abs() < 1e-15);
        let shifted = log_sum_exp(&[-1000.0, -1000.0]);
        assert!((shifted - (-1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }
}
