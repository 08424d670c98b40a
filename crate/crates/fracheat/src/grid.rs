//! Parabolic cylinders and sampled space-time fields.
//!
//! GridField file format: a JSON manifest
//! {name, n, axes: [{min,max,steps}...], time_axis: {min,max,steps},
//!  order: "row-major-x1-fastest"} plus a sibling CSV of values, one per
//! line, x1 fastest and t slowest.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

/// Q_r(x0, t0): |x - x0| < r and |t - t0| < r^2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParabolicCylinder {
    pub center_x: Vec<f64>,
    pub center_t: f64,
    pub r: f64,
}

impl ParabolicCylinder {
    pub fn new(center_x: Vec<f64>, center_t: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(FracError::Domain("cylinder radius must be positive".into()));
        }
        Ok(Self { center_x, center_t, r })
    }

    pub fn contains(&self, x: &[f64], t: f64) -> bool {
        let d2: f64 = x
            .iter()
            .zip(&self.center_x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d2 < self.r * self.r && (t - self.center_t).abs() < self.r * self.r
    }

    /// Earliest time the cylinder reaches.
    pub fn t_min(&self) -> f64 {
        self.center_t - self.r * self.r
    }

    pub fn t_max(&self) -> f64 {
        self.center_t + self.r * self.r
    }
}

/// One sampled axis with `steps` nodes including both endpoints.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 2 || !(max > min) {
            return Err(FracError::Domain(format!(
                "axis needs max > min and steps >= 2, got [{min}, {max}] x {steps}"
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn h(&self) -> f64 {
        (self.max - self.min) / (self.steps - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.h()
    }

    /// Cell index and fractional offset for interpolation; None outside.
    fn locate(&self, v: f64) -> Option<(usize, f64)> {
        if v < self.min || v > self.max {
            return None;
        }
        let u = (v - self.min) / self.h();
        let mut i = u.floor() as usize;
        if i >= self.steps - 1 {
            i = self.steps - 2;
        }
        Some((i, u - i as f64))
    }
}

const ORDER_TAG: &str = "row-major-x1-fastest";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    name: String,
    n: usize,
    axes: Vec<Axis>,
    time_axis: Axis,
    order: String,
}

/// A real field sampled on a tensor grid, x1 fastest, t slowest.
#[derive(Debug, Clone)]
pub struct GridField {
    pub name: String,
    pub axes: Vec<Axis>,
    pub time_axis: Axis,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn zeros(name: &str, axes: Vec<Axis>, time_axis: Axis) -> Self {
        let len = time_axis.steps * axes.iter().map(|a| a.steps).product::<usize>();
        Self {
            name: name.to_string(),
            axes,
            time_axis,
            values: vec![0.0; len],
        }
    }

    pub fn from_fn<F: Fn(&[f64], f64) -> f64>(
        name: &str,
        axes: Vec<Axis>,
        time_axis: Axis,
        f: F,
    ) -> Self {
        let mut g = Self::zeros(name, axes, time_axis);
        let n = g.axes.len();
        let mut x = vec![0.0; n];
        let mut idx = vec![0usize; n];
        for ti in 0..g.time_axis.steps {
            let t = g.time_axis.coord(ti);
            idx.iter_mut().for_each(|i| *i = 0);
            loop {
                for d in 0..n {
                    x[d] = g.axes[d].coord(idx[d]);
                }
                let flat = g.flat_index(&idx, ti);
                g.values[flat] = f(&x, t);
                // advance, x1 fastest
                let mut d = 0;
                loop {
                    if d == n {
                        break;
                    }
                    idx[d] += 1;
                    if idx[d] < g.axes[d].steps {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d == n {
                    break;
                }
            }
            if n == 0 {
                break;
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn flat_index(&self, idx: &[usize], t_idx: usize) -> usize {
        debug_assert_eq!(idx.len(), self.axes.len());
        let mut flat = t_idx;
        for d in (0..self.axes.len()).rev() {
            flat = flat * self.axes[d].steps + idx[d];
        }
        flat
    }

    pub fn get(&self, idx: &[usize], t_idx: usize) -> f64 {
        self.values[self.flat_index(idx, t_idx)]
    }

    pub fn set(&mut self, idx: &[usize], t_idx: usize, v: f64) {
        let flat = self.flat_index(idx, t_idx);
        self.values[flat] = v;
    }

    /// Multilinear interpolation with zero extension outside the box.
    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        let n = self.axes.len();
        debug_assert_eq!(x.len(), n);
        let mut cells = Vec::with_capacity(n + 1);
        for d in 0..n {
            match self.axes[d].locate(x[d]) {
                Some(c) => cells.push(c),
                None => return 0.0,
            }
        }
        match self.time_axis.locate(t) {
            Some(c) => cells.push(c),
            None => return 0.0,
        }
        let mut acc = 0.0;
        let mut idx = vec![0usize; n];
        for corner in 0..(1usize << (n + 1)) {
            let mut w = 1.0;
            for (d, &(i0, frac)) in cells.iter().enumerate() {
                let hi = (corner >> d) & 1 == 1;
                w *= if hi { frac } else { 1.0 - frac };
                if d < n {
                    idx[d] = i0 + hi as usize;
                }
            }
            if w == 0.0 {
                continue;
            }
            let (t0, _) = cells[n];
            let ti = t0 + ((corner >> n) & 1 == 1) as usize;
            acc += w * self.get(&idx, ti);
        }
        acc
    }

    /// 4th-order central spatial gradient component at a node, downgraded
    /// to 2nd-order one-sided near the domain edge.
    pub fn grad_at_node(&self, d: usize, idx: &[usize], t_idx: usize) -> f64 {
        let h = self.axes[d].h();
        let steps = self.axes[d].steps;
        let i = idx[d];
        let at = |j: usize| {
            let mut q = idx.to_vec();
            q[d] = j;
            self.get(&q, t_idx)
        };
        if i >= 2 && i + 2 < steps {
            (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h)
        } else if i + 2 < steps {
            (-3.0 * at(i) + 4.0 * at(i + 1) - at(i + 2)) / (2.0 * h)
        } else {
            (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h)
        }
    }

    /// Write `{name}.json` and `{name}.csv` under `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let manifest = Manifest {
            name: self.name.clone(),
            n: self.axes.len(),
            axes: self.axes.clone(),
            time_axis: self.time_axis,
            order: ORDER_TAG.to_string(),
        };
        let json = serde_json::to_string_pretty(&manifest)
            .map_err(|e| FracError::Format(e.to_string()))?;
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.json", self.name)), json)?;
        let mut out =
            std::io::BufWriter::new(std::fs::File::create(dir.join(format!("{}.csv", self.name)))?);
        for v in &self.values {
            writeln!(out, "{v:.17e}")?;
        }
        Ok(())
    }

    /// Read a manifest + sibling CSV; rejects length mismatches and
    /// non-finite values.
    pub fn load(manifest_path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(manifest_path)?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| FracError::Format(e.to_string()))?;
        if manifest.order != ORDER_TAG {
            return Err(FracError::Format(format!(
                "unsupported value order {:?}",
                manifest.order
            )));
        }
        if manifest.axes.len() != manifest.n {
            return Err(FracError::Format(format!(
                "manifest declares n={} but lists {} axes",
                manifest.n,
                manifest.axes.len()
            )));
        }
        let csv_path = manifest_path.with_extension("csv");
        let expected: usize =
            manifest.time_axis.steps * manifest.axes.iter().map(|a| a.steps).product::<usize>();
        let mut values = Vec::with_capacity(expected);
        let file = std::io::BufReader::new(std::fs::File::open(&csv_path)?);
        for (lineno, line) in file.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let v: f64 = trimmed.parse().map_err(|_| {
                FracError::Format(format!("bad value at line {}", lineno + 1))
            })?;
            if !v.is_finite() {
                return Err(FracError::Format(format!(
                    "non-finite value at line {}",
                    lineno + 1
                )));
            }
            values.push(v);
        }
        if values.len() != expected {
            return Err(FracError::Format(format!(
                "value count {} does not match manifest ({} expected)",
                values.len(),
                expected
            )));
        }
        Ok(Self {
            name: manifest.name,
            axes: manifest.axes,
            time_axis: manifest.time_axis,
            values,
        })
    }
}
