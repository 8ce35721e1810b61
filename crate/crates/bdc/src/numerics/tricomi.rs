//! Tricomi confluent hypergeometric function U(a, b, x) for a > 0,
//! x > 0, real b, through the Laplace integral representation
//!
//!   U(a,b,x) = Gamma(a)^{-1} int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt.
//!
//! Substituting w = x t maps the mass near w ~ a regardless of x; the
//! (0,1) piece is desingularized with w = s^{1/a} and the tail with
//! w = 1/v, leaving two smooth integrands on the unit interval.

use super::gamma::log_gamma_unchecked;
use super::quad::{integrate, QuadratureSpec};
use super::NumericsError;

/// ln U(a, b, x); the workhorse for the dependence penalty, which only
/// ever needs the log.
pub fn log_tricomi_u(a: f64, b: f64, x: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError> {
    if !(a > 0.0) {
        return Err(NumericsError::NonPositiveArgument { name: "a", value: a });
    }
    if !(x > 0.0) {
        return Err(NumericsError::NonPositiveArgument { name: "x", value: x });
    }
    let e = b - a - 1.0; // exponent on (1 + w/x)
    // head: w in (0,1) with w = s^(1/a)
    let head = integrate(
        |s: f64| {
            if s <= 0.0 {
                return 1.0; // limit of the integrand as w -> 0
            }
            let w = (s.ln() / a).exp();
            (-w + e * (w / x).ln_1p()).exp()
        },
        0.0,
        1.0,
        spec,
    )? / a;
    // tail: w in (1, inf) with w = 1/v
    let tail = integrate(
        |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let t = -1.0 / v - (a + 1.0) * v.ln() + e * (1.0 / (v * x)).ln_1p();
            t.exp()
        },
        0.0,
        1.0,
        spec,
    )?;
    let total = head + tail;
    if !(total > 0.0) || !total.is_finite() {
        return Err(NumericsError::NonConvergentQuadrature { nodes: spec.max_nodes });
    }
    Ok(-a * x.ln() - log_gamma_unchecked(a) + total.ln())
}

/// U(a, b, x) in linear space.
pub fn tricomi_u(a: f64, b: f64, x: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError> {
    Ok(log_tricomi_u(a, b, x, spec)?.exp())
}
