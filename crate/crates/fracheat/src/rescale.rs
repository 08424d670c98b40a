//! Blow-up normalization: the auxiliary maximization S_k (or its
//! gradient-augmented variant M_k), the selected point A_k and scale
//! lambda_k, the rescaled field v_k on Q_{Rbar}(0,0), and the derived
//! scaling exponents. The module verifies the procedure's algebra on
//! synthetic families; the limit/contradiction argument itself is out of
//! scope.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::grid::{Axis, GridField};
use crate::kernel::SpaceTimePoint;

/// Coefficient callable x -> real for the problem data b(x), K(x).
pub type Coefficient = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Data of the semilinear blow-up problem.
#[derive(Clone)]
pub struct BlowupProblem {
    pub n: usize,
    /// Nonlinearity exponent, > 1.
    pub p: f64,
    /// Gradient exponent; 0 disables the gradient term.
    pub q: f64,
    pub s: f64,
    /// Gradient coefficient b(x) >= 0.
    pub b: Option<Coefficient>,
    /// Limit profile K(x) > 0.
    pub k_profile: Option<Coefficient>,
    /// Growth constant of the (f2)-type hypothesis.
    pub c0: f64,
    /// Limit of K at infinity.
    pub kbar: f64,
}

impl std::fmt::Debug for BlowupProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlowupProblem")
            .field("n", &self.n)
            .field("p", &self.p)
            .field("q", &self.q)
            .field("s", &self.s)
            .field("c0", &self.c0)
            .field("kbar", &self.kbar)
            .finish()
    }
}

impl BlowupProblem {
    pub fn new(n: usize, p: f64, s: f64) -> Self {
        Self {
            n,
            p,
            q: 0.0,
            s,
            b: None,
            k_profile: None,
            c0: 1.0,
            kbar: 1.0,
        }
    }

    pub fn with_gradient(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    /// Supremum of the admissible p-range of the subcritical regime.
    pub fn p_max(&self) -> f64 {
        let n2 = self.n as f64 + 2.0;
        n2 / (n2 - 2.0 * self.s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(FracError::Domain("s must be in (0, 1)".into()));
        }
        if !(self.p > 1.0) {
            return Err(FracError::Domain("p must be > 1".into()));
        }
        if self.q < 0.0 {
            return Err(FracError::Domain("q must be >= 0".into()));
        }
        if !(self.c0 > 0.0 && self.kbar > 0.0) {
            return Err(FracError::Domain("C0 and Kbar must be positive".into()));
        }
        Ok(())
    }

    /// Subcritical-regime hypothesis: 1 < p < (n+2)/(n+2-2s).
    pub fn validate_subcritical(&self) -> Result<()> {
        self.validate()?;
        if self.p >= self.p_max() {
            return Err(FracError::Domain(format!(
                "p = {} is outside the subcritical range (1, {:.6})",
                self.p,
                self.p_max()
            )));
        }
        Ok(())
    }

    /// Gradient-regime hypothesis: s > 1/2 and 0 < q < 2sp/(2s+p-1).
    pub fn validate_gradient_regime(&self) -> Result<()> {
        self.validate()?;
        if self.s <= 0.5 {
            return Err(FracError::Domain(
                "the gradient regime requires s > 1/2".into(),
            ));
        }
        let q_max = 2.0 * self.s * self.p / (2.0 * self.s + self.p - 1.0);
        if !(self.q > 0.0 && self.q < q_max) {
            return Err(FracError::Domain(format!(
                "q = {} is outside the gradient-regime range (0, {q_max:.6})",
                self.q
            )));
        }
        Ok(())
    }
}

/// Which auxiliary quantity drives the selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RescaleVariant {
    /// S_k(X) = u(X) (R_k - |X - X_k|)^{2s/(p-1)}.
    Height,
    /// S_k(X) = (M_k(X) (R_k - |X - X_k|))^{2s/(p-1)} with
    /// M_k = u^{(p-1)/(2s)} + |grad u|^{(p-1)/(2s+p-1)}.
    HeightPlusGradient,
}

/// Output of the selection / rescaling pipeline.
#[derive(Debug)]
pub struct RescaleResult {
    pub x_k: SpaceTimePoint,
    pub r_k: f64,
    pub a_k: SpaceTimePoint,
    pub lambda_k: f64,
    /// Normalizing height: u(A_k) (height variant) or
    /// lambda_k^{-2s/(p-1)} (gradient variant).
    pub m_k: f64,
    pub variant: RescaleVariant,
    /// Defect of Eq. (5.6): max(0, 2 R lambda_k - (R_k - |A_k - X_k|));
    /// zero on exact data, O(grid step) at worst on grids.
    pub eq56_defect: f64,
    /// Guaranteed ceiling of v_k (2^{2s/(p-1)}) or of the combined
    /// gradient quantity (2).
    pub bound: f64,
    /// Rescaled field, filled by rescale_field.
    pub v_k: Option<GridField>,
}

/// Euclidean space-time distance used by the selection ball.
fn st_distance(x: &[f64], t: f64, y: &[f64], tau: f64) -> f64 {
    let mut d2 = (t - tau) * (t - tau);
    for (a, b) in x.iter().zip(y) {
        d2 += (a - b) * (a - b);
    }
    d2.sqrt()
}

fn for_each_node<F: FnMut(&[usize], usize, u64)>(g: &GridField, mut f: F) {
    let n = g.n();
    let spatial: Vec<usize> = g.axes.iter().map(|a| a.steps).collect();
    let node_count: usize = spatial.iter().product();
    let mut idx = vec![0usize; n];
    let mut flat: u64 = 0;
    for ti in 0..g.time_axis.steps {
        idx.iter_mut().for_each(|i| *i = 0);
        for _ in 0..node_count {
            f(&idx, ti, flat);
            flat += 1;
            for d in 0..n {
                idx[d] += 1;
                if idx[d] < spatial[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

/// |grad u| at a node via the grid's finite-difference gradient.
fn grad_norm_at(u: &GridField, idx: &[usize], ti: usize) -> f64 {
    (0..u.n())
        .map(|d| {
            let g = u.grad_at_node(d, idx, ti);
            g * g
        })
        .sum::<f64>()
        .sqrt()
}

/// The auxiliary height: u itself, or M_k for the gradient variant.
fn height_at(
    u: &GridField,
    idx: &[usize],
    ti: usize,
    prob: &BlowupProblem,
    variant: RescaleVariant,
) -> f64 {
    let uv = u.get(idx, ti).max(0.0);
    match variant {
        RescaleVariant::Height => uv,
        RescaleVariant::HeightPlusGradient => {
            let e_u = (prob.p - 1.0) / (2.0 * prob.s);
            let e_g = (prob.p - 1.0) / (2.0 * prob.s + prob.p - 1.0);
            uv.powf(e_u) + grad_norm_at(u, idx, ti).powf(e_g)
        }
    }
}

/// Maximize the auxiliary quantity S_k over the grid nodes inside the
/// space-time ball B_{R_k}(X_k), with one quadratic refinement step, and
/// derive lambda_k. Checks Eq. (5.6); a defect beyond 1e-3 R_k is a hard
/// failure (it indicates a selection bug, not grid noise).
pub fn select_blowup_point(
    u: &GridField,
    x_k: &SpaceTimePoint,
    r: f64,
    prob: &BlowupProblem,
    variant: RescaleVariant,
) -> Result<RescaleResult> {
    prob.validate()?;
    if r <= 0.0 {
        return Err(FracError::Domain("R must be positive".into()));
    }
    if x_k.x.len() != u.n() || u.n() != prob.n {
        return Err(FracError::Domain("dimension mismatch".into()));
    }
    let e_dist = 2.0 * prob.s / (prob.p - 1.0);
    let e_inv = (prob.p - 1.0) / (2.0 * prob.s);

    // height at the seed point (interpolated; the seed need not be a node)
    let u0 = u.eval(&x_k.x, x_k.t);
    if u0 <= 0.0 {
        return Err(FracError::Domain("u(X_k) must be positive".into()));
    }
    let h0 = match variant {
        RescaleVariant::Height => u0.powf(e_inv),
        RescaleVariant::HeightPlusGradient => {
            // evaluate M at the node nearest the seed
            let idx: Vec<usize> = x_k
                .x
                .iter()
                .zip(&u.axes)
                .map(|(&c, a)| (((c - a.min) / a.h()).round().max(0.0) as usize).min(a.steps - 1))
                .collect();
            let ti = (((x_k.t - u.time_axis.min) / u.time_axis.h()).round().max(0.0) as usize)
                .min(u.time_axis.steps - 1);
            height_at(u, &idx, ti, prob, variant)
        }
    };
    let r_k = 2.0 * r / h0;

    // exhaustive scan; strict > keeps the lowest flat index on ties
    let s_of = |h: f64, dist: f64| -> f64 {
        if dist >= r_k || h <= 0.0 {
            return 0.0;
        }
        match variant {
            RescaleVariant::Height => h * (r_k - dist).powf(e_dist),
            RescaleVariant::HeightPlusGradient => (h * (r_k - dist)).powf(e_dist),
        }
    };
    let mut best_s = -1.0f64;
    let mut best_idx: Vec<usize> = Vec::new();
    let mut best_ti = 0usize;
    for_each_node(u, |idx, ti, _| {
        let x: Vec<f64> = idx.iter().zip(&u.axes).map(|(&i, a)| a.coord(i)).collect();
        let t = u.time_axis.coord(ti);
        let dist = st_distance(&x, t, &x_k.x, x_k.t);
        if dist >= r_k {
            return;
        }
        let s = s_of(height_at(u, idx, ti, prob, variant), dist);
        if s > best_s {
            best_s = s;
            best_idx = idx.to_vec();
            best_ti = ti;
        }
    });
    if best_s < 0.0 {
        return Err(FracError::Domain(
            "no grid node inside the selection ball; refine the grid or widen it".into(),
        ));
    }

    // one quadratic refinement step per axis (height variant only: the
    // interpolated surrogate is u itself)
    let mut a_x: Vec<f64> = best_idx
        .iter()
        .zip(&u.axes)
        .map(|(&i, a)| a.coord(i))
        .collect();
    let mut a_t = u.time_axis.coord(best_ti);
    if variant == RescaleVariant::Height {
        let s_at = |x: &[f64], t: f64| -> f64 {
            let dist = st_distance(x, t, &x_k.x, x_k.t);
            s_of(u.eval(x, t).max(0.0), dist)
        };
        let mut refined_x = a_x.clone();
        let mut refined_t = a_t;
        for d in 0..u.n() {
            let h = u.axes[d].h();
            let mut xm = a_x.clone();
            xm[d] -= h;
            let mut xp = a_x.clone();
            xp[d] += h;
            let (sm, s0, sp) = (s_at(&xm, a_t), best_s, s_at(&xp, a_t));
            let denom = sm - 2.0 * s0 + sp;
            if denom < 0.0 {
                let delta = (0.5 * (sm - sp) / denom).clamp(-0.5, 0.5);
                refined_x[d] = a_x[d] + delta * h;
            }
        }
        {
            let h = u.time_axis.h();
            let (sm, s0, sp) = (s_at(&a_x, a_t - h), best_s, s_at(&a_x, a_t + h));
            let denom = sm - 2.0 * s0 + sp;
            if denom < 0.0 {
                let delta = (0.5 * (sm - sp) / denom).clamp(-0.5, 0.5);
                refined_t = a_t + delta * h;
            }
        }
        if s_at(&refined_x, refined_t) > best_s {
            a_x = refined_x;
            a_t = refined_t;
        }
    }

    let (m_k, lambda_k) = match variant {
        RescaleVariant::Height => {
            let ua = u.eval(&a_x, a_t);
            (ua, ua.powf(-e_inv))
        }
        RescaleVariant::HeightPlusGradient => {
            let ma = height_at(u, &best_idx, best_ti, prob, variant);
            let lambda = 1.0 / ma;
            (lambda.powf(-e_dist), lambda)
        }
    };
    let dist_a = st_distance(&a_x, a_t, &x_k.x, x_k.t);
    let eq56_defect = (2.0 * r * lambda_k - (r_k - dist_a)).max(0.0);
    if eq56_defect > 1e-3 * r_k {
        return Err(FracError::Invariant(format!(
            "Eq. (5.6) violated: 2 R lambda_k = {:.6e} exceeds R_k - |A_k - X_k| = {:.6e} \
             by {:.3e} (selection bug)",
            2.0 * r * lambda_k,
            r_k - dist_a,
            eq56_defect
        )));
    }
    let bound = match variant {
        RescaleVariant::Height => 2f64.powf(e_dist),
        RescaleVariant::HeightPlusGradient => 2.0,
    };
    Ok(RescaleResult {
        x_k: x_k.clone(),
        r_k,
        a_k: SpaceTimePoint::new(a_x, a_t),
        lambda_k,
        m_k,
        variant,
        eq56_defect,
        bound,
        v_k: None,
    })
}

/// Sample counts of the rescaled grid (odd so (0,0) is a node).
const V_SPATIAL_STEPS: usize = 33;
const V_TIME_STEPS: usize = 33;

/// Build v_k(x,t) = u(lambda_k x + a, lambda_k^2 t + a_t) / m_k on
/// Q_{Rbar}(0,0), Rbar = R / sqrt(n+1), and enforce the normalization
/// and the ceiling.
pub fn rescale_field(
    u: &GridField,
    res: &mut RescaleResult,
    r: f64,
    prob: &BlowupProblem,
) -> Result<()> {
    let n = u.n();
    let r_bar = r / ((n as f64 + 1.0).sqrt());
    let lam = res.lambda_k;
    let a_x = res.a_k.x.clone();
    let a_t = res.a_k.t;
    let m_k = res.m_k;
    let axes: Vec<Axis> = (0..n)
        .map(|_| Axis::new(-r_bar, r_bar, V_SPATIAL_STEPS))
        .collect::<Result<_>>()?;
    let time_axis = Axis::new(-r_bar * r_bar, r_bar * r_bar, V_TIME_STEPS)?;
    let mut v = GridField::from_fn(&format!("v_k[{}]", u.name), axes, time_axis, |x, t| {
        let y: Vec<f64> = x.iter().zip(&a_x).map(|(xi, ai)| lam * xi + ai).collect();
        u.eval(&y, lam * lam * t + a_t) / m_k
    });
    // center node: same evaluation path as m_k, so the division is 1
    // bit-exactly for the height variant
    let center_idx = vec![V_SPATIAL_STEPS / 2; n];
    let center_ti = V_TIME_STEPS / 2;
    if res.variant == RescaleVariant::Height {
        v.set(&center_idx, center_ti, u.eval(&a_x, a_t) / m_k);
    }

    // ceiling check
    let tol = 1e-3;
    match res.variant {
        RescaleVariant::Height => {
            let vmax = v.values.iter().cloned().fold(f64::MIN, f64::max);
            if vmax > res.bound + tol {
                return Err(FracError::Invariant(format!(
                    "rescaled field exceeds its ceiling: max v_k = {vmax:.6} > {:.6} + {tol}",
                    res.bound
                )));
            }
        }
        RescaleVariant::HeightPlusGradient => {
            let e_u = (prob.p - 1.0) / (2.0 * prob.s);
            let e_g = (prob.p - 1.0) / (2.0 * prob.s + prob.p - 1.0);
            let mut worst = f64::MIN;
            let mut violated = false;
            for_each_node(&v, |idx, ti, _| {
                let combined =
                    v.get(idx, ti).max(0.0).powf(e_u) + grad_norm_at(&v, idx, ti).powf(e_g);
                worst = worst.max(combined);
                if combined > res.bound + tol {
                    violated = true;
                }
            });
            if violated {
                return Err(FracError::Invariant(format!(
                    "combined rescaled quantity exceeds its ceiling: max = {worst:.6} > {:.6} + {tol}",
                    res.bound
                )));
            }
        }
    }
    res.v_k = Some(v);
    Ok(())
}

/// The derived scaling exponents of the rescaled equation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentTable {
    /// 2s/(p-1): the blow-up rate of the height.
    pub height_exponent: f64,
    /// (p-1)/(2s): the inverse rate, the lambda_k law.
    pub inverse_exponent: f64,
    /// 2sp/(p-1): the source scaling of the rescaled equation.
    pub source_exponent: f64,
    /// (2sp - (2s+p-1) q)/(p-1): the gradient-term scaling.
    pub gradient_source_exponent: f64,
    /// 2s/(2s+p-1): the gradient bound exponent.
    pub gradient_bound_exponent: f64,
    /// True iff q < 2sp/(2s+p-1): the gradient term vanishes in the limit.
    pub gradient_vanishes: bool,
    /// q sits exactly on the critical threshold (excluded by the strict
    /// hypothesis).
    pub critical_q: bool,
    /// 1 < p < (n+2)/(n+2-2s).
    pub p_subcritical: bool,
    /// The supremum of the admissible p-range.
    pub p_max: f64,
}

pub fn scaling_exponent_table(prob: &BlowupProblem) -> Result<ExponentTable> {
    prob.validate()?;
    let (p, q, s) = (prob.p, prob.q, prob.s);
    let q_crit = 2.0 * s * p / (2.0 * s + p - 1.0);
    let grad_src = (2.0 * s * p - (2.0 * s + p - 1.0) * q) / (p - 1.0);
    Ok(ExponentTable {
        height_exponent: 2.0 * s / (p - 1.0),
        inverse_exponent: (p - 1.0) / (2.0 * s),
        source_exponent: 2.0 * s * p / (p - 1.0),
        gradient_source_exponent: grad_src,
        gradient_bound_exponent: 2.0 * s / (2.0 * s + p - 1.0),
        gradient_vanishes: q < q_crit - 1e-12,
        critical_q: (q - q_crit).abs() <= 1e-12,
        p_subcritical: p > 1.0 && p < prob.p_max(),
        p_max: prob.p_max(),
    })
}
