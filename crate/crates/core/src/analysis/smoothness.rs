use crate::analysis::{check_degree, check_rho, phi_ratio, MAX_ITERATIONS};
use crate::error::AnalysisError;

/// `mu_hat = d Phi / ((d+1)(Phi+1))`, the smoothness parameter at which the
/// bound `B(mu)` attains `Phi^{d+1}`.
pub fn smoothness_mu_hat(d: u32, rho: f64) -> Result<f64, AnalysisError> {
    let phi = phi_ratio(d, rho)?;
    let df = f64::from(d);
    let mu = df * phi / ((df + 1.0) * (phi + 1.0));
    debug_assert!(mu > 0.0 && mu < 1.0);
    Ok(mu)
}

/// Maximizer and maximum of `g(x) = rho (x+1)^d - mu x^{d+1}` over `x >= 0`.
///
/// The maximizer is the unique root of `(x+1)^{d-1} / x^d = mu (d+1) / (rho d)`.
/// The left side is strictly decreasing, so the root is bisected in
/// `ln x`.
pub fn max_g(d: u32, rho: f64, mu: f64) -> Result<(f64, f64), AnalysisError> {
    check_degree(d)?;
    check_rho(rho)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(AnalysisError::InvalidMu {
            got: mu,
            expected: "(0, inf)",
        });
    }
    let df = f64::from(d);
    let target = (mu * (df + 1.0) / (rho * df)).ln();
    // ln h as a function of t = ln x
    let excess = |t: f64| (df - 1.0) * t.exp().ln_1p() - df * t - target;

    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while excess(lo) < 0.0 {
        lo *= 2.0;
    }
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + mid.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(AnalysisError::NoConvergence("max_g"));
    }
    let x = (0.5 * (lo + hi)).exp();
    let value = rho * (x + 1.0).powi(d as i32) - mu * x.powi(d as i32 + 1);
    Ok((x, value))
}

/// `B(mu) = max_{x >= 0} g(x) / (1 - mu)` for `mu` in `(0, 1)`.
pub fn smoothness_b(d: u32, rho: f64, mu: f64) -> Result<f64, AnalysisError> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(AnalysisError::InvalidMu {
            got: mu,
            expected: "(0, 1)",
        });
    }
    Ok(max_g(d, rho, mu)?.1 / (1.0 - mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(d: u32, rho: f64, mu: f64, x: f64) -> f64 {
        rho * (x + 1.0).powi(d as i32) - mu * x.powi(d as i32 + 1)
    }

    #[test]
    fn hand_computed_maximum() {
        // g(x) = x + 1 - x^2, g'(x) = 1 - 2x
        let (x, v) = max_g(1, 1.0, 1.0).unwrap();
        assert!((x - 0.5).abs() < 1e-12);
        assert!((v - 1.25).abs() < 1e-12);
    }

    #[test]
    fn grid_oracle_for_b() {
        // max of x + 1 - x^2/2 is 3/2 at x = 1, so B(1/2) = 3
        assert!((smoothness_b(1, 1.0, 0.5).unwrap() - 3.0).abs() < 1e-12);
        for (d, rho, mu) in [(1, 1.0, 0.5), (2, 1.0, 0.3), (3, 2.0, 0.7), (5, 7.0, 0.05)] {
            let (x, v) = max_g(d, rho, mu).unwrap();
            let grid_max = (0..=1000)
                .map(|k| g(d, rho, mu, 4.0 * x * f64::from(k) / 1000.0))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(v >= grid_max * (1.0 - 1e-12), "{d} {rho} {mu}");
            assert!(v - grid_max <= 1e-4 * v);
        }
    }

    #[test]
    fn maximizer_at_mu_hat_is_phi() {
        for d in 1..=6 {
            for rho in [1.0, 2.0, f64::from(d) + 2.0] {
                let phi = phi_ratio(d, rho).unwrap();
                let mu = smoothness_mu_hat(d, rho).unwrap();
                let (x, _) = max_g(d, rho, mu).unwrap();
                assert!((x - phi).abs() <= 1e-8 * phi);
                // the unsimplified form
                let df = f64::from(d);
                let raw =
                    rho * df * (phi + 1.0).powi(d as i32 - 1) / ((df + 1.0) * phi.powi(d as i32));
                assert!((raw - mu).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn mu_hat_against_inverse_rho() {
        // mu_hat < 1/rho only for small rho; mu_hat / rho always is
        let table = [
            (1, 1.0, 0.309_016_994_374_947_45, true),
            (1, 2.0, 0.366_025_403_784_438_65, true),
            (1, 5.0, 0.427_050_983_124_842_3, false),
            (2, 1.0, 0.454_885_202_552_012_87, true),
            (2, 2.0, 0.513_944_664_706_165_4, false),
            (2, 5.0, 0.579_220_013_560_983_3, false),
            (3, 1.0, 0.543_368_969_250_386_7, true),
            (3, 2.0, 0.598_217_332_345_886_9, false),
            (3, 5.0, 0.660_029_572_598_243_4, false),
        ];
        for (d, rho, expected, below) in table {
            let mu = smoothness_mu_hat(d, rho).unwrap();
            assert!((mu - expected).abs() < 1e-12, "{d} {rho}: {mu}");
            assert_eq!(mu < 1.0 / rho, below);
        }
    }

    #[test]
    fn rejects_bad_mu() {
        assert!(max_g(1, 1.0, 0.0).is_err());
        assert!(max_g(1, 1.0, -1.0).is_err());
        assert!(smoothness_b(1, 1.0, 1.0).is_err());
        assert!(max_g(1, 1.0, 1e6).is_ok());
        assert!(max_g(4, 1.0, 1e-9).is_ok());
    }
}
