//! Field handles: evaluator + growth declaration + optional hints, and
//! the built-in analytic catalog.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::grid::{GridField, ParabolicCylinder};
use crate::kernel::{eval_kernel, norm_sq, FracParams};

/// Declared growth class, used by the admissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    Bounded,
    Polynomial { degree: f64 },
    ExponentialInTime { rate: f64 },
    Custom,
}

pub type Evaluator = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// A space-time field u(x, t), total on R^n x (-inf, t].
#[derive(Clone)]
pub struct FieldHandle {
    pub name: String,
    pub n: usize,
    pub eval: Evaluator,
    pub growth: Growth,
    /// Compact support, if any (lets convolutions clip their lag range).
    pub support_hint: Option<ParabolicCylinder>,
    /// Finite-difference steps (hx, ht) suited to this field's resolution.
    pub fd_step: Option<(f64, f64)>,
}

impl std::fmt::Debug for FieldHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldHandle")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("growth", &self.growth)
            .field("support_hint", &self.support_hint)
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl FieldHandle {
    pub fn new<F>(name: &str, n: usize, growth: Growth, f: F) -> Self
    where
        F: Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            n,
            eval: Arc::new(f),
            growth,
            support_hint: None,
            fd_step: None,
        }
    }

    pub fn with_support(mut self, q: ParabolicCylinder) -> Self {
        self.support_hint = Some(q);
        self
    }

    pub fn with_fd_step(mut self, hx: f64, ht: f64) -> Self {
        self.fd_step = Some((hx, ht));
        self
    }

    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        (self.eval)(x, t)
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::new(&format!("const({c})"), n, Growth::Bounded, move |_, _| c)
    }

    /// a0 + grad . x, time-independent.
    pub fn affine(a0: f64, grad: Vec<f64>) -> Self {
        let n = grad.len();
        Self::new(
            "affine",
            n,
            Growth::Polynomial { degree: 1.0 },
            move |x, _| a0 + x.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>(),
        )
    }

    pub fn cos_wave(k: Vec<f64>) -> Self {
        let n = k.len();
        Self::new("cos(k.x)", n, Growth::Bounded, move |x, _| {
            x.iter().zip(&k).map(|(a, b)| a * b).sum::<f64>().cos()
        })
    }

    /// e^{lambda t} cos(k . x); eigenfunction family of the operator.
    pub fn exp_cos(lambda: f64, k: Vec<f64>) -> Self {
        let n = k.len();
        Self::new(
            "exp(lt)cos(k.x)",
            n,
            Growth::ExponentialInTime { rate: lambda },
            move |x, t| {
                (lambda * t).exp()
                    * x.iter().zip(&k).map(|(a, b)| a * b).sum::<f64>().cos()
            },
        )
    }

    /// |x|^beta, time-independent.
    pub fn power(n: usize, beta: f64) -> Self {
        Self::new(
            &format!("|x|^{beta}"),
            n,
            Growth::Polynomial { degree: beta },
            move |x, _| norm_sq(x).sqrt().powf(beta),
        )
    }

    /// Pure time ramp u = t; not in the slowly-increasing class.
    pub fn time_ramp(n: usize) -> Self {
        Self::new("t", n, Growth::Custom, |_, t| t)
    }

    /// Smooth bump compactly supported in
    /// B_rx(center) x (t_center - rt, t_center + rt), built from the
    /// standard mollifier profile (vanishes to all orders at the edge).
    pub fn bump(center: Vec<f64>, rx: f64, t_center: f64, rt: f64, amplitude: f64) -> Self {
        let n = center.len();
        let hint = ParabolicCylinder {
            center_x: center.clone(),
            center_t: t_center,
            r: rx.max(rt.sqrt()) + 1e-12,
        };
        Self::new("bump", n, Growth::Bounded, move |x, t| {
            let d2: f64 = x
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                / (rx * rx);
            let s2 = (t - t_center) * (t - t_center) / (rt * rt);
            if d2 >= 1.0 || s2 >= 1.0 {
                return 0.0;
            }
            amplitude * (-d2 / (1.0 - d2)).exp() * (-s2 / (1.0 - s2)).exp()
        })
        .with_support(hint)
    }

    /// Fundamental-solution snapshot G(x - x0, t - t0).
    pub fn kernel_snapshot(p: FracParams, x0: Vec<f64>, t0: f64) -> Self {
        let n = p.n;
        Self::new("G(x-x0,t-t0)", n, Growth::Bounded, move |x, t| {
            let dx: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
            eval_kernel(&p, &dx, t - t0)
        })
    }

    /// Grid-backed field: multilinear interpolation, zero extension;
    /// fd_step tied to the grid spacing so stencils land on nodes.
    pub fn from_grid(grid: GridField) -> Self {
        let n = grid.n();
        let hx = grid.axes.iter().map(|a| a.h()).fold(f64::MAX, f64::min);
        let ht = grid.time_axis.h();
        Self::new(&grid.name.clone(), n, Growth::Bounded, move |x, t| {
            grid.eval(x, t)
        })
        .with_fd_step(hx, ht)
    }
}
