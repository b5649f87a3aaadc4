//! Floating-point price-of-anarchy quantities.
//!
//! `Phi(d, rho)` is the positive root of `rho (x+1)^d = x^{d+1}`; the price of
//! anarchy of `rho`-approximate equilibria in degree-`d` games is
//! `Phi(d, rho)^{d+1}`, which never exceeds `(d / W(d/rho))^{d+1}`.

mod checks;
mod smoothness;

pub use checks::{
    check_concavity, check_epsilon_inverse, check_lemmacomb, check_p_property,
    check_smoothness_constraint, GridCheck, GridSpec, PPropertyCheck, SmoothnessCheck,
};
pub use smoothness::{max_g, smoothness_b, smoothness_mu_hat};

use serde::Serialize;

use crate::error::AnalysisError;

const MAX_ITERATIONS: usize = 200;

/// Principal branch of the Lambert W function on `[0, inf)`.
///
/// Halley iteration started from `ln(1 + tau)`.
pub fn lambert_w(tau: f64) -> Result<f64, AnalysisError> {
    if !(tau >= 0.0) || tau.is_infinite() {
        return Err(AnalysisError::NegativeArgument(tau));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let mut w = tau.ln_1p();
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - tau;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            return Ok(w);
        }
    }
    Err(AnalysisError::NoConvergence("lambert_w"))
}

pub(crate) fn check_degree(d: u32) -> Result<(), AnalysisError> {
    if d == 0 {
        Err(AnalysisError::InvalidDegree)
    } else {
        Ok(())
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<(), AnalysisError> {
    if rho >= 1.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::InvalidRho(rho))
    }
}

/// `d / W(d / rho)`, an upper bound on `Phi(d, rho)`.
pub fn lambert_phi_bound(d: u32, rho: f64) -> Result<f64, AnalysisError> {
    check_degree(d)?;
    check_rho(rho)?;
    Ok(f64::from(d) / lambert_w(f64::from(d) / rho)?)
}

/// The generalized golden ratio `Phi(d, rho)`.
///
/// Newton's method on `G(x) = (d+1) ln x - d ln(x+1) - ln rho`, which is
/// increasing in `x`, safeguarded by bisection on `[1, d / W(d/rho)]`.
pub fn phi_ratio(d: u32, rho: f64) -> Result<f64, AnalysisError> {
    check_degree(d)?;
    check_rho(rho)?;
    let df = f64::from(d);
    let g = |x: f64| (df + 1.0) * x.ln() - df * x.ln_1p() - rho.ln();
    let dg = |x: f64| (df + 1.0) / x - df / (x + 1.0);

    // G(1) = -d ln 2 - ln rho < 0
    let mut lo = 1.0;
    let mut hi = lambert_phi_bound(d, rho)?;
    while g(hi) < 0.0 {
        // only reachable through rounding in the Lambert bound
        hi *= 1.0 + 1e-12;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERATIONS {
        let gx = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - gx / dg(x);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * next || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Err(AnalysisError::NoConvergence("phi_ratio"))
}

/// The price-of-anarchy quantities for one `(d, rho)` pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisResult {
    pub d: u32,
    pub rho: f64,
    /// `Phi(d, rho)`.
    pub phi: f64,
    /// `Phi^{d+1}`, the tight price of anarchy.
    pub poa_bound: f64,
    /// `(d / W(d/rho))^{d+1}`.
    pub lambert_bound: f64,
    pub mu_hat: f64,
    /// `(1 - mu_hat) Phi^{d+1} / rho`.
    pub lambda_hat: f64,
    /// Smoothness bound `B(mu_hat)`, equal to `Phi^{d+1}` up to rounding.
    pub b_at_mu_hat: f64,
}

pub fn poa_bounds(d: u32, rho: f64) -> Result<AnalysisResult, AnalysisError> {
    let phi = phi_ratio(d, rho)?;
    let lambert = lambert_phi_bound(d, rho)?;
    debug_assert!(phi <= lambert + 1e-12);
    let poa_bound = phi.powi(d as i32 + 1);
    let mu_hat = smoothness_mu_hat(d, rho)?;
    Ok(AnalysisResult {
        d,
        rho,
        phi,
        poa_bound,
        lambert_bound: lambert.powi(d as i32 + 1),
        mu_hat,
        lambda_hat: (1.0 - mu_hat) * poa_bound / rho,
        b_at_mu_hat: smoothness_b(d, rho, mu_hat)?,
    })
}
