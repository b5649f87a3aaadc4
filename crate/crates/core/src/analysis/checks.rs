//! Grid checks of the polynomial inequalities behind the bounds.
//!
//! Cost functions are nonnegative combinations of monomials and every
//! inequality here is linear in the cost function, so checking `f(t) = t^k`
//! for `k <= d` suffices.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::analysis::{check_degree, check_rho, lambert_w, phi_ratio};
use crate::dynamics::default_p;
use crate::error::AnalysisError;
use crate::potential::alpha;

/// Relative slack below which a grid point counts as a violation.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

/// Log-spaced sample points on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            lo: 1e-3,
            hi: 1e3,
            points: 60,
        }
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, AnalysisError> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) {
            return Err(AnalysisError::InvalidGrid("need 0 < lo < hi < inf"));
        }
        if self.points < 2 {
            return Err(AnalysisError::InvalidGrid("need at least two points"));
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| (a + (b - a) * k as f64 / last).exp())
            .collect())
    }
}

/// Outcome of a grid check: the smallest relative slack
/// `(rhs - lhs) / max(|lhs|, |rhs|)` and where it occurred.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCheck {
    pub passed: bool,
    pub worst_slack: f64,
    pub worst_point: Vec<f64>,
    pub evaluated: usize,
}

struct Worst {
    slack: f64,
    point: Vec<f64>,
    evaluated: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            slack: f64::INFINITY,
            point: Vec::new(),
            evaluated: 0,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, point: &[f64]) {
        self.evaluated += 1;
        let scale = lhs.abs().max(rhs.abs());
        let slack = if scale == 0.0 {
            0.0
        } else {
            (rhs - lhs) / scale
        };
        if slack < self.slack || slack.is_nan() {
            self.slack = slack;
            self.point = point.to_vec();
        }
    }

    fn finish(self) -> GridCheck {
        GridCheck {
            passed: self.slack >= -RELATIVE_TOLERANCE,
            worst_slack: self.slack,
            worst_point: self.point,
            evaluated: self.evaluated,
        }
    }
}

/// Checks `y f(x + y) <= a y f(y) + b x f(x)` over monomials of degree at
/// most `d`, `x in {0} U grid` and `y in grid`. Points are `[k, x, y]`.
fn check_two_term(d: u32, a: f64, b: f64, grid: &GridSpec) -> Result<GridCheck, AnalysisError> {
    let ys = grid.values()?;
    let xs: Vec<f64> = std::iter::once(0.0).chain(ys.iter().copied()).collect();
    let mut worst = Worst::new();
    for k in 0..=d as i32 {
        for &x in &xs {
            for &y in &ys {
                let lhs = y * (x + y).powi(k);
                let rhs = a * y.powi(k + 1) + b * x.powi(k + 1);
                worst.record(lhs, rhs, &[f64::from(k), x, y]);
            }
        }
    }
    Ok(worst.finish())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessCheck {
    pub check: GridCheck,
    /// `rho lambda / (1 - rho mu)` when `rho mu < 1`: the price-of-anarchy
    /// bound the pair certifies for `rho`-approximate equilibria.
    pub implied_bound: Option<f64>,
}

/// Grid check of `y f(x + y) <= lambda y f(y) + mu x f(x)`.
pub fn check_smoothness_constraint(
    d: u32,
    rho: f64,
    lambda: f64,
    mu: f64,
    grid: &GridSpec,
) -> Result<SmoothnessCheck, AnalysisError> {
    check_degree(d)?;
    check_rho(rho)?;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(AnalysisError::InvalidMu {
            got: mu,
            expected: "[0, inf)",
        });
    }
    let check = check_two_term(d, lambda, mu, grid)?;
    let implied_bound = (rho * mu < 1.0).then(|| rho * lambda / (1.0 - rho * mu));
    Ok(SmoothnessCheck {
        check,
        implied_bound,
    })
}

/// Grid check of
/// `y f(x + y) <= (1 + eps) y f(y) + (1 + 1/eps)^d d^d x f(x)`.
pub fn check_lemmacomb(d: u32, epsilon: f64, grid: &GridSpec) -> Result<GridCheck, AnalysisError> {
    check_degree(d)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(AnalysisError::InvalidEpsilon(epsilon));
    }
    let df = f64::from(d);
    let xi = (1.0 + 1.0 / epsilon).powf(df) * df.powf(df);
    check_two_term(d, 1.0 + epsilon, xi, grid)
}

/// Grid check of `(1+x)^psi - 1 >= psi x (1+x)^{psi-1}` for
/// `psi = 1/n, 2/n, ..., 1` (with `n = grid.points`) and `x` on the grid.
pub fn check_concavity(grid: &GridSpec) -> Result<GridCheck, AnalysisError> {
    let xs = grid.values()?;
    let n = grid.points;
    let mut worst = Worst::new();
    for k in 1..=n {
        let psi = k as f64 / n as f64;
        for &x in &xs {
            let l = x.ln_1p();
            let lhs = psi * x * ((psi - 1.0) * l).exp();
            let rhs = (psi * l).exp_m1();
            worst.record(lhs, rhs, &[psi, x]);
        }
    }
    Ok(worst.finish())
}

/// Checks `1/eps <= m (1 + p)` where `(1 + eps)^m = 1 + 1/p`, for
/// `m = 1..=max_m` and each `p`.
pub fn check_epsilon_inverse(p_values: &[f64], max_m: u32) -> Result<GridCheck, AnalysisError> {
    if p_values.iter().any(|&p| !(p > 0.0) || !p.is_finite()) || max_m == 0 {
        return Err(AnalysisError::InvalidGrid("need p > 0 and max_m >= 1"));
    }
    let mut worst = Worst::new();
    for &p in p_values {
        for m in 1..=max_m {
            let m = f64::from(m);
            let eps = ((1.0 / p).ln_1p() / m).exp_m1();
            worst.record(1.0 / eps, m * (1.0 + p), &[m, p]);
        }
    }
    Ok(worst.finish())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PPropertyCheck {
    pub d: u32,
    pub p: f64,
    /// `(2 alpha + 1) alpha Phi(d, alpha + 1/p)^{d+1}`.
    pub required: f64,
    pub w_one_third: f64,
    pub concavity: GridCheck,
    pub epsilon_inverse: GridCheck,
}

impl PPropertyCheck {
    pub fn p_holds(&self) -> bool {
        self.p >= self.required
    }

    pub fn passed(&self) -> bool {
        self.p_holds()
            && self.w_one_third > 0.25
            && self.concavity.passed
            && self.epsilon_inverse.passed
    }
}

/// Checks that the default `p` dominates `(2 alpha + 1) alpha Phi^{d+1}` at
/// `rho = alpha + 1/p`, together with the auxiliary inequalities used to
/// bound it.
pub fn check_p_property(d: u32) -> Result<PPropertyCheck, AnalysisError> {
    check_degree(d)?;
    let p = default_p(d).to_f64().unwrap_or(f64::INFINITY);
    let a = f64::from(alpha(d));
    let phi = phi_ratio(d, a + 1.0 / p)?;
    let required = (2.0 * a + 1.0) * a * phi.powi(d as i32 + 1);
    let samples = [1.0, 2.0, f64::from(d) + 2.0, 10.0, 1e3, p, 1e6, 1e9];
    Ok(PPropertyCheck {
        d,
        p,
        required,
        w_one_third: lambert_w(1.0 / 3.0)?,
        concavity: check_concavity(&GridSpec::default())?,
        epsilon_inverse: check_epsilon_inverse(&samples, 200)?,
    })
}
