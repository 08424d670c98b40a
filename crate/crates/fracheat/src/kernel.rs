//! The fractional heat kernel G, its derivatives, and the
//! directional-perturbation inequality machinery.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::gamma::gamma_abs_neg_s;

/// Dimension, fractional order and the cached normalization constant
/// c_ns = 1 / ((4 pi)^{n/2} |Gamma(-s)|).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FracParams {
    pub n: usize,
    pub s: f64,
    pub c_ns: f64,
}

impl FracParams {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(FracError::Domain("spatial dimension n must be >= 1".into()));
        }
        let g = gamma_abs_neg_s(s)?;
        let c_ns = 1.0 / ((4.0 * std::f64::consts::PI).powf(n as f64 / 2.0) * g);
        Ok(Self { n, s, c_ns })
    }

    /// Exponent of the time factor in G: n/2 + 1 - s.
    pub fn time_exponent(&self) -> f64 {
        self.n as f64 / 2.0 + 1.0 - self.s
    }

    /// Recompute c_ns and check it against the cached value.
    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.n, self.s)?;
        let rel = ((self.c_ns - fresh.c_ns) / fresh.c_ns).abs();
        if rel > 1e-12 {
            return Err(FracError::Invariant(format!(
                "cached c_ns off by relative {rel:.3e}"
            )));
        }
        Ok(())
    }
}

/// A point (x, t) in R^n x R.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub x: Vec<f64>,
    pub t: f64,
}

impl SpaceTimePoint {
    pub fn new(x: Vec<f64>, t: f64) -> Self {
        Self { x, t }
    }
}

pub fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    norm_sq(v).sqrt()
}

/// G(dx, dt) = c_ns dt^{-(n/2+1-s)} exp(-|dx|^2/(4 dt)) for dt > 0, else 0.
pub fn eval_kernel(p: &FracParams, dx: &[f64], dt: f64) -> f64 {
    debug_assert_eq!(dx.len(), p.n);
    if dt <= 0.0 {
        return 0.0;
    }
    p.c_ns * dt.powf(-p.time_exponent()) * (-norm_sq(dx) / (4.0 * dt)).exp()
}

/// log(G / c_ns) for dt > 0; avoids underflow in the inequality checks.
fn log_kernel_shape(p: &FracParams, dx_sq: f64, dt: f64) -> f64 {
    -p.time_exponent() * dt.ln() - dx_sq / (4.0 * dt)
}

/// Gradient of G in its first argument; component i is
/// -c_ns dt^{-(n/2+1-s)} (dx_i / (2 dt)) exp(-|dx|^2/(4 dt)).
pub fn eval_kernel_grad_x(p: &FracParams, dx: &[f64], dt: f64) -> Vec<f64> {
    assert!(dt > 0.0, "eval_kernel_grad_x: dt must be positive");
    let g = eval_kernel(p, dx, dt);
    dx.iter().map(|&c| -g * c / (2.0 * dt)).collect()
}

/// Hessian of G in x; entry (i,j) is
/// c_ns dt^{-(n/2+1-s)} [ -delta_ij/(2 dt) + dx_i dx_j/(4 dt^2) ] exp(-|dx|^2/(4 dt)).
pub fn eval_kernel_hess_x(p: &FracParams, dx: &[f64], dt: f64) -> Vec<Vec<f64>> {
    assert!(dt > 0.0, "eval_kernel_hess_x: dt must be positive");
    let g = eval_kernel(p, dx, dt);
    let n = p.n;
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = dx[i] * dx[j] / (4.0 * dt * dt);
            if i == j {
                v -= 1.0 / (2.0 * dt);
            }
            h[i][j] = g * v;
        }
    }
    h
}

/// Time derivative of G:
/// c_ns dt^{-(n/2+1-s)} exp(-|dx|^2/(4 dt)) (|dx|^2/(4 dt^2) - (n/2+1-s)/dt).
pub fn eval_kernel_dt(p: &FracParams, dx: &[f64], dt: f64) -> f64 {
    assert!(dt > 0.0, "eval_kernel_dt: dt must be positive");
    let g = eval_kernel(p, dx, dt);
    g * (norm_sq(dx) / (4.0 * dt * dt) - p.time_exponent() / dt)
}

/// The 2^n diagonal perturbation vectors eta_j around a center point.
///
/// Each eta_j has Euclidean norm delta = 1/sqrt(n), components of
/// magnitude 1/n, signs enumerating all orthants. Sign pattern j maps
/// bit i of j to the sign of component i (0 -> +, 1 -> -), so j = 0 is
/// the all-positive orthant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionalFrame {
    pub center: Vec<f64>,
    pub delta: f64,
    pub etas: Vec<Vec<f64>>,
}

/// Build the directional frame at `center`; panics if center.len() != p.n.
pub fn make_frame(p: &FracParams, center: &[f64]) -> DirectionalFrame {
    assert_eq!(center.len(), p.n);
    let n = p.n;
    let comp = 1.0 / n as f64;
    let etas = (0..1usize << n)
        .map(|j| {
            (0..n)
                .map(|i| if (j >> i) & 1 == 0 { comp } else { -comp })
                .collect()
        })
        .collect();
    DirectionalFrame {
        center: center.to_vec(),
        delta: 1.0 / (n as f64).sqrt(),
        etas,
    }
}

impl DirectionalFrame {
    /// Orthant index of `v` relative to the center; zero components count
    /// as positive so every point gets a deterministic orthant.
    pub fn orthant_of(&self, v: &[f64]) -> usize {
        let mut j = 0usize;
        for (i, (&vi, &ci)) in v.iter().zip(&self.center).enumerate() {
            if vi - ci < 0.0 {
                j |= 1 << i;
            }
        }
        j
    }
}

/// |y-x|^2 - |y-x^j|^2 - delta^2 |y-x| with x^j = center + eta_j for the
/// orthant j containing y - center. Nonnegative whenever |y - center| >= 1.
pub fn cosine_gap(frame: &DirectionalFrame, y: &[f64]) -> Result<f64> {
    let d: Vec<f64> = y.iter().zip(&frame.center).map(|(a, b)| a - b).collect();
    let r = norm(&d);
    if r < 1.0 - 1e-12 {
        return Err(FracError::Domain(format!(
            "cosine_gap requires |y - center| >= 1, got {r}"
        )));
    }
    let j = frame.orthant_of(y);
    let shifted: Vec<f64> = d.iter().zip(&frame.etas[j]).map(|(a, b)| a - b).collect();
    Ok(norm_sq(&d) - norm_sq(&shifted) - frame.delta * frame.delta * r)
}

/// Outcome of the kernel inequality check; margins are log-scale
/// (log rhs - log lhs), so a pass is margin >= -slack.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KeyInequalityReport {
    pub pass: bool,
    /// log margin of (|y-x|/tau)^p e^{-|y-x|^2/4tau} <= C(n,p) e^{-|y-x^j|^2/4tau}
    pub power_margin: f64,
    /// log margin of the kernel-sum bound
    /// G(y,tau) <= e^{-|y|/(4 n tau)} sum_j G(y + eta_j, tau)
    pub sum_margin: f64,
}

/// Explicit constant C(n, p) = sup_{X>=0} X^p e^{-X/(4n)} = (4 n p / e)^p.
pub fn key_inequality_constant(n: usize, power: f64) -> f64 {
    (4.0 * n as f64 * power / std::f64::consts::E).powf(power)
}

/// Check both forms of the directional-perturbation kernel inequality at
/// (y, tau). Works in log space so extreme tau do not underflow.
pub fn check_key_inequality(
    p: &FracParams,
    frame: &DirectionalFrame,
    y: &[f64],
    tau: f64,
    power: f64,
) -> Result<KeyInequalityReport> {
    if tau <= 0.0 || power <= 0.0 {
        return Err(FracError::Domain("tau and power must be positive".into()));
    }
    let d: Vec<f64> = y.iter().zip(&frame.center).map(|(a, b)| a - b).collect();
    let r = norm(&d);
    if r < 1.0 - 1e-12 {
        return Err(FracError::Domain(format!(
            "check_key_inequality requires |y - center| >= 1, got {r}"
        )));
    }
    let j = frame.orthant_of(y);
    let shifted: Vec<f64> = d.iter().zip(&frame.etas[j]).map(|(a, b)| a - b).collect();

    // power form, in logs
    let x_over_tau = r / tau;
    let log_lhs = power * x_over_tau.ln() - norm_sq(&d) / (4.0 * tau);
    let log_rhs =
        key_inequality_constant(p.n, power).ln() - norm_sq(&shifted) / (4.0 * tau);
    let power_margin = log_rhs - log_lhs;

    // kernel-sum form: the c_ns tau^{-a} prefactor cancels; log-sum-exp on the rhs
    let log_g = log_kernel_shape(p, norm_sq(&d), tau);
    let terms: Vec<f64> = frame
        .etas
        .iter()
        .map(|eta| {
            let v: Vec<f64> = d.iter().zip(eta).map(|(a, b)| a + b).collect();
            log_kernel_shape(p, norm_sq(&v), tau)
        })
        .collect();
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_sum = m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln();
    let log_rhs_sum = -r / (4.0 * p.n as f64 * tau) + log_sum;
    let sum_margin = log_rhs_sum - log_g;

    let slack = 1e-12;
    Ok(KeyInequalityReport {
        pass: power_margin >= -slack && sum_margin >= -slack,
        power_margin,
        sum_margin,
    })
}
