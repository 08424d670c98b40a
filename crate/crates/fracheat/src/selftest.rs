//! The acceptance suite: eight self-contained criteria, each with its
//! own oracle, runnable with no external data. The CLI `selftest`
//! subcommand and the acceptance test target both drive `run_all`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{FieldHandle, Growth};
use crate::gamma::gamma_abs_neg_s;
use crate::greens::convolve_green;
use crate::grid::{Axis, GridField, ParabolicCylinder};
use crate::kernel::{check_key_inequality, make_frame, FracParams, SpaceTimePoint};
use crate::operator::{apply_marchaud, apply_master};
use crate::quadrature::{weighted_log_panels, QuadratureSpec};
use crate::regularity::{check_estimate_theorem, HolderMode, HolderSpec, TheoremKind};
use crate::rescale::{rescale_field, select_blowup_point, BlowupProblem, RescaleVariant};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_s: f64,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {} [{}] {} — {} ({:.1} s)",
            self.index,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed_s
        )
    }
}

/// 1. Symbol oracle: (d_t - Lap)^s e^{lt} cos(kx) = (l + k^2)^s x same,
/// over the 36-case grid, plus the closed-form lag identity to 1e-10.
pub fn criterion_symbol_suite() -> CriterionResult {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    let mut pass = true;
    for &s in &[0.25, 0.5, 0.75] {
        // closed-form identity in isolation, high-accuracy engine
        for &a in &[0.25f64, 1.0, 2.25, 4.0, 6.0, 8.0] {
            let got = lag_identity(a, s);
            let expect = a.powf(s) * gamma_abs_neg_s(s).unwrap();
            let rel = ((got - expect) / expect).abs();
            if rel > 1e-10 {
                pass = false;
                worst_case = format!("identity a={a} s={s} rel={rel:.2e}");
            }
        }
        let p = FracParams::new(1, s).unwrap();
        for &lambda in &[0.0, 0.5, 1.0, 2.0] {
            for &k in &[0.5, 1.0, 2.0] {
                let u = FieldHandle::exp_cos(lambda, vec![k]);
                let at = SpaceTimePoint::new(vec![0.0], 0.0);
                let got = apply_master(&p, &u, &at, &spec).unwrap().value;
                let expect = (lambda + k * k).powf(s);
                let rel = ((got - expect) / expect).abs();
                if rel > worst {
                    worst = rel;
                    worst_case = format!("lambda={lambda} k={k} s={s}");
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = pass && worst <= 1e-3 && elapsed <= 60.0;
    CriterionResult {
        index: 1,
        name: "symbol oracle suite".into(),
        pass,
        detail: format!("worst rel err {worst:.3e} at {worst_case}; budget 1e-3"),
        elapsed_s: elapsed,
    }
}

/// Integral_0^inf r^{-1-s}(1 - e^{-a r}) dr to ~1e-12: series inner
/// piece, dense log panels, analytic tail.
fn lag_identity(a: f64, s: f64) -> f64 {
    let (rc, rmax): (f64, f64) = (1e-3, 1e4);
    // inner: sum_j (-1)^{j+1} a^j rc^{j-s} / (j! (j-s))
    let mut inner = 0.0;
    let mut term_a = 1.0; // a^j / j!
    for j in 1..=24 {
        term_a *= a / j as f64;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        inner += sign * term_a * rc.powf(j as f64 - s) / (j as f64 - s);
    }
    let body: f64 = weighted_log_panels(rc, rmax, 16, -1.0 - s)
        .iter()
        .flat_map(|p| p.nodes.iter().map(|&(r, w)| w * (1.0 - (-a * r).exp())))
        .sum();
    let tail = rmax.powf(-s) / s; // e^{-a rmax} is below underflow
    inner + body + tail
}

/// 2. Key kernel inequality: 1e5 seeded samples on the precondition
/// domain, zero violations beyond the 1e-12 slack.
pub fn criterion_kernel_inequality(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let total = 100_000;
    let params: Vec<FracParams> = (1..=3)
        .map(|n| FracParams::new(n, 0.5).unwrap())
        .collect();
    let frames: Vec<_> = params
        .iter()
        .map(|p| make_frame(p, &vec![0.0; p.n]))
        .collect();
    for _ in 0..total {
        let ni = rng.gen_range(0..3usize);
        let (p, frame) = (&params[ni], &frames[ni]);
        // |y| >= 1 is the precondition: radius log-uniform in [1, 100]
        let rad = 10f64.powf(rng.gen::<f64>() * 2.0);
        let mut y: Vec<f64> = (0..p.n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-6 {
            y[0] = 1.0;
        }
        let scale = rad / y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v *= scale);
        let tau = 10f64.powf(rng.gen::<f64>() * 5.0 - 3.0); // 1e-3 .. 1e2
        let power = if rng.gen::<bool>() { 1.0 } else { 2.0 };
        let report = check_key_inequality(p, frame, &y, tau, power).unwrap();
        if !report.pass {
            violations += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 2,
        name: "kernel inequality suite".into(),
        pass: violations == 0 && elapsed <= 10.0,
        detail: format!("{violations} violations in {total} samples"),
        elapsed_s: elapsed,
    }
}

/// A seeded sum of three positive bumps supported in B_1.6 x (0.5, 2.5),
/// with a support hint covering B_2 x (0, 3).
pub fn manufactured_source(n: usize, seed: u64) -> FieldHandle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bumps = Vec::new();
    for _ in 0..3 {
        let center: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let rx = 0.4 + 0.4 * rng.gen::<f64>();
        let tc = 1.0 + rng.gen::<f64>();
        let rt = 0.3 + 0.2 * rng.gen::<f64>();
        let amp = 0.5 + rng.gen::<f64>();
        bumps.push(FieldHandle::bump(center, rx, tc, rt, amp));
    }
    let hint = ParabolicCylinder {
        center_x: vec![0.0; n],
        center_t: 1.5,
        r: 2.0,
    };
    FieldHandle::new(&format!("source[{seed}]"), n, Growth::Bounded, move |x, t| {
        bumps.iter().map(|b| b.value(x, t)).sum()
    })
    .with_support(hint)
}

/// Sup of |f| over a coarse probe grid of its support.
fn sup_estimate(f: &FieldHandle) -> f64 {
    let n = f.n;
    let mut sup = 0.0f64;
    let probes = 12usize;
    let mut x = vec![0.0; n];
    let mut idx = vec![0usize; n];
    let count = probes.pow(n as u32);
    for kt in 0..probes {
        let t = 0.5 + 2.0 * kt as f64 / (probes - 1) as f64;
        idx.iter_mut().for_each(|i| *i = 0);
        for _ in 0..count {
            for d in 0..n {
                x[d] = -1.8 + 3.6 * idx[d] as f64 / (probes - 1) as f64;
            }
            sup = sup.max(f.value(&x, t).abs());
            for d in 0..n {
                idx[d] += 1;
                if idx[d] < probes {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
    sup
}

/// w = G * f as a field handle (the manufactured solution).
pub fn solution_handle(p: FracParams, f: FieldHandle, spec: QuadratureSpec) -> FieldHandle {
    let n = p.n;
    FieldHandle::new(&format!("G*{}", f.name), n, Growth::Bounded, move |x, t| {
        convolve_green(&p, &f, &SpaceTimePoint::new(x.to_vec(), t), &spec)
            .map(|g| g.value)
            .unwrap_or(f64::NAN)
    })
    // w is smooth at the source's length scale; a coarse step keeps the
    // operator's inner finite differences from amplifying quadrature
    // noise of the convolution
    .with_fd_step(5e-3, 5e-3)
}

/// 3. Representation round-trip: apply_master(G * f) = f at interior
/// points, double-quadrature stacking tolerance 1e-2 relative to ||f||.
pub fn criterion_round_trip() -> CriterionResult {
    let start = Instant::now();
    // tuned to the 10-minute budget: n = 1 is cheap enough for the full
    // (4, 12) pair; n = 2 runs (3, 8) on both levels, which stays inside
    // the band because the convolution's box path keeps >= 24 spatial
    // nodes regardless of the Hermite order
    let spec_for = |n: usize| QuadratureSpec {
        panels_per_decade: if n == 1 { 4 } else { 3 },
        gh_order: if n == 1 { 12 } else { 8 },
        ..QuadratureSpec::default()
    };
    let combos: [(usize, f64); 6] = [
        (1, 0.3),
        (1, 0.5),
        (1, 0.7),
        (2, 0.3),
        (2, 0.5),
        (2, 0.7),
    ];
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    let mut points_checked = 0usize;
    for (i, &(n, s)) in combos.iter().enumerate() {
        let seed = 1 + (i as u64 % 5);
        let p = FracParams::new(n, s).unwrap();
        let f = manufactured_source(n, seed);
        let f_sup = sup_estimate(&f);
        let spec = spec_for(n);
        let w = solution_handle(p, f.clone(), spec);
        let pts: Vec<(Vec<f64>, f64)> = if n == 1 {
            vec![
                (vec![-0.5], 1.2),
                (vec![0.0], 1.6),
                (vec![0.6], 2.0),
                (vec![-0.2], 2.4),
            ]
        } else {
            vec![
                (vec![0.0, 0.0], 1.5),
                (vec![0.5, -0.3], 1.9),
                (vec![-0.4, 0.4], 2.3),
            ]
        };
        for (x, t) in pts {
            let at = SpaceTimePoint::new(x.clone(), t);
            let lw = apply_master(&p, &w, &at, &spec).unwrap().value;
            let rel = (lw - f.value(&x, t)).abs() / f_sup;
            points_checked += 1;
            if rel > worst {
                worst = rel;
                worst_case = format!("n={n} s={s} seed={seed} at ({x:?}, {t})");
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 3,
        name: "representation round-trip".into(),
        pass: worst <= 1e-2 && elapsed <= 600.0,
        detail: format!(
            "worst rel err {worst:.3e} over {points_checked} points, at {worst_case}; budget 1e-2"
        ),
        elapsed_s: elapsed,
    }
}

/// 4. Caloric check: the operator annihilates the fundamental solution
/// away from its pole, to 1e-4 of the kernel's peak height.
pub fn criterion_caloric(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let p = FracParams::new(1, 0.5).unwrap();
    let spec = QuadratureSpec::default();
    let u = FieldHandle::kernel_snapshot(p, vec![0.0], 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let total = 50;
    for _ in 0..total {
        let dx = (1.0 + rng.gen::<f64>()) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        // keep the Gaussian factor e^{-dx^2/(4 dt)} ~ e^{-12}: the
        // kernel's peak at this time lag dominates every error channel
        let dt = dx * dx / 48.0;
        let g_scale = p.c_ns * dt.powf(-p.time_exponent());
        let at = SpaceTimePoint::new(vec![dx], dt);
        let v = apply_master(&p, &u, &at, &spec).unwrap().value;
        worst = worst.max(v.abs() / g_scale);
    }
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 4,
        name: "caloric annihilation".into(),
        pass: worst <= 1e-4,
        detail: format!("worst |value|/G-scale {worst:.3e} over {total} points; budget 1e-4"),
        elapsed_s: elapsed,
    }
}

/// Fill a grid over B_2 x (0, 3) from a field handle.
fn fill_grid(name: &str, h: &FieldHandle, steps: usize, tsteps: usize) -> GridField {
    GridField::from_fn(
        name,
        vec![Axis::new(-2.0, 2.0, steps).unwrap()],
        Axis::new(0.02, 2.98, tsteps).unwrap(),
        |x, t| h.value(x, t),
    )
}

fn family_geometry() -> (ParabolicCylinder, ParabolicCylinder) {
    let q = ParabolicCylinder {
        center_x: vec![0.0],
        center_t: 1.5,
        r: 1.2,
    };
    let q_tilde = ParabolicCylinder {
        center_x: vec![0.0],
        center_t: 1.5,
        r: 0.45,
    };
    (q_tilde, q)
}

/// 5. Theorem-ratio uniformity across the manufactured family, with a
/// refinement stability check and the log-Lipschitz case at s = 1/2.
pub fn criterion_theorem_ratio() -> CriterionResult {
    let start = Instant::now();
    let conv_spec = QuadratureSpec {
        panels_per_decade: 2,
        gh_order: 6,
        ..QuadratureSpec::default()
    };
    let (q_tilde, q) = family_geometry();
    let hspec = HolderSpec::new(0.3, HolderMode::Holder, 20_000, 5e-3);
    let s = 0.3;
    let p = FracParams::new(1, s).unwrap();
    let mut ratios = Vec::new();
    let mut first_refined_ratio = 0.0;
    for seed in 1..=5u64 {
        let f = manufactured_source(1, seed);
        let w = solution_handle(p, f.clone(), conv_spec);
        let u_grid = fill_grid("u", &w, 65, 49);
        let f_grid = fill_grid("f", &f, 65, 49);
        let rep = check_estimate_theorem(
            &u_grid,
            &f_grid,
            s,
            None,
            TheoremKind::Holder,
            &q_tilde,
            &q,
            &hspec,
        )
        .unwrap();
        ratios.push(rep.theorem_ratio);
        if seed == 1 {
            let u_fine = fill_grid("u2", &w, 129, 97);
            let f_fine = fill_grid("f2", &f, 129, 97);
            let rep2 = check_estimate_theorem(
                &u_fine,
                &f_fine,
                s,
                None,
                TheoremKind::Holder,
                &q_tilde,
                &q,
                &hspec,
            )
            .unwrap();
            first_refined_ratio = rep2.theorem_ratio;
        }
    }
    let max_r = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min_r = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max_r / min_r;
    let stability = (first_refined_ratio / ratios[0] - 1.0).abs();

    // log-Lipschitz case at s = 1/2 (left exponent 2s = 1)
    let f_log = manufactured_source(1, 2);
    let p_half = FracParams::new(1, 0.5).unwrap();
    let w_log = solution_handle(p_half, f_log.clone(), conv_spec);
    let u_log = fill_grid("ul", &w_log, 65, 49);
    let f_log_grid = fill_grid("fl", &f_log, 65, 49);
    let rep_log = check_estimate_theorem(
        &u_log,
        &f_log_grid,
        0.5,
        None,
        TheoremKind::Holder,
        &q_tilde,
        &q,
        &hspec,
    )
    .unwrap();
    let log_ok = rep_log.theorem_ratio.is_finite() && rep_log.theorem_ratio > 0.0;

    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 5,
        name: "theorem-ratio uniformity".into(),
        pass: spread < 10.0 && stability <= 0.3 && log_ok,
        detail: format!(
            "spread {spread:.2} (budget 10), refinement drift {:.0}% (budget 30%), \
             log-Lipschitz ratio {:.3}",
            stability * 100.0,
            rep_log.theorem_ratio
        ),
        elapsed_s: elapsed,
    }
}

/// A seeded source supported strictly outside B_1 (two bumps at |x|
/// around 1.5), so G * f is caloric inside the unit cylinder.
fn exterior_source(seed: u64) -> FieldHandle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bumps = Vec::new();
    for sgn in [-1.0, 1.0] {
        let c = sgn * (1.45 + 0.2 * rng.gen::<f64>());
        let tc = 1.0 + rng.gen::<f64>();
        let amp = 0.5 + rng.gen::<f64>();
        bumps.push(FieldHandle::bump(vec![c], 0.35, tc, 0.4, amp));
    }
    let hint = ParabolicCylinder {
        center_x: vec![0.0],
        center_t: 1.5,
        r: 2.0,
    };
    FieldHandle::new(&format!("ext[{seed}]"), 1, Growth::Bounded, move |x, t| {
        bumps.iter().map(|b| b.value(x, t)).sum()
    })
    .with_support(hint)
}

/// 6. Homogeneous estimate: finite-difference C^2 norms of caloric
/// fields on Q_tilde, bounded by a single constant times sup |v| on Q
/// across seeds.
pub fn criterion_homogeneous() -> CriterionResult {
    let start = Instant::now();
    let conv_spec = QuadratureSpec {
        panels_per_decade: 2,
        gh_order: 6,
        ..QuadratureSpec::default()
    };
    let p = FracParams::new(1, 0.5).unwrap();
    let (q_tilde, q) = family_geometry();
    let mut ratios = Vec::new();
    for seed in 1..=5u64 {
        let f = exterior_source(seed);
        let v = solution_handle(p, f, conv_spec);
        let g = fill_grid("v", &v, 97, 73);
        // FD C^2 norm on Q_tilde: sup |v_xx| + sup |v_t| at interior nodes
        let hx = g.axes[0].h();
        let ht = g.time_axis.h();
        let mut c2 = 0.0f64;
        let mut sup_q = 0.0f64;
        for i in 1..g.axes[0].steps - 1 {
            let x = g.axes[0].coord(i);
            for k in 1..g.time_axis.steps - 1 {
                let t = g.time_axis.coord(k);
                let val = g.get(&[i], k);
                if q.contains(&[x], t) {
                    sup_q = sup_q.max(val.abs());
                }
                if q_tilde.contains(&[x], t) {
                    let vxx = (g.get(&[i + 1], k) - 2.0 * val + g.get(&[i - 1], k)) / (hx * hx);
                    let vt = (g.get(&[i], k + 1) - g.get(&[i], k - 1)) / (2.0 * ht);
                    c2 = c2.max(vxx.abs() + vt.abs());
                }
            }
        }
        ratios.push(c2 / sup_q);
    }
    let max_r = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min_r = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max_r / min_r;
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 6,
        name: "homogeneous C2 estimate".into(),
        pass: spread < 10.0 && ratios.iter().all(|r| r.is_finite()),
        detail: format!(
            "C2/sup ratios spread {spread:.2} (budget 10), max ratio {max_r:.3}"
        ),
        elapsed_s: elapsed,
    }
}

/// 7. Rescaling invariants on the synthetic blow-up family with heights
/// 1e2, 1e3, 1e4.
pub fn criterion_rescale() -> CriterionResult {
    let start = Instant::now();
    let prob = BlowupProblem::new(1, 2.0, 0.5);
    let seed = SpaceTimePoint::new(vec![0.0], 0.0);
    let mut logs: Vec<(f64, f64)> = Vec::new();
    let mut ok = true;
    let mut detail_parts = Vec::new();
    for &h in &[1e2f64, 1e3, 1e4] {
        let w = 0.05;
        let u = GridField::from_fn(
            "fam",
            vec![Axis::new(-0.05, 0.05, 801).unwrap()],
            Axis::new(-0.05, 0.05, 801).unwrap(),
            move |x, t| h / (1.0 + (x[0] * x[0] + t * t) / (w * w)),
        );
        match select_blowup_point(&u, &seed, 1.0, &prob, RescaleVariant::Height) {
            Ok(mut res) => {
                if res.eq56_defect != 0.0 {
                    ok = false;
                    detail_parts.push(format!("Eq.(5.6) defect {:.2e} at h={h}", res.eq56_defect));
                }
                if rescale_field(&u, &mut res, 1.0, &prob).is_err() {
                    ok = false;
                    detail_parts.push(format!("ceiling violated at h={h}"));
                } else {
                    let v = res.v_k.as_ref().unwrap();
                    let center = vec![v.axes[0].steps / 2];
                    if v.get(&center, v.time_axis.steps / 2) != 1.0 {
                        ok = false;
                        detail_parts.push(format!("v(0,0) != 1 at h={h}"));
                    }
                }
                logs.push((h.ln(), res.lambda_k.ln()));
            }
            Err(e) => {
                ok = false;
                detail_parts.push(format!("selection failed at h={h}: {e}"));
            }
        }
    }
    let mut slope = f64::NAN;
    if logs.len() == 3 {
        slope = (logs[2].1 - logs[0].1) / (logs[2].0 - logs[0].0);
        let expect = -(prob.p - 1.0) / (2.0 * prob.s);
        if (slope - expect).abs() > 0.05 * expect.abs() {
            ok = false;
            detail_parts.push(format!("lambda slope {slope:.4} vs {expect}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 7,
        name: "rescaling invariants".into(),
        pass: ok,
        detail: if detail_parts.is_empty() {
            format!("v(0,0)=1 exact, ceiling held, lambda slope {slope:.4}")
        } else {
            detail_parts.join("; ")
        },
        elapsed_s: elapsed,
    }
}

/// 8. Marchaud reduction: d_t^{1/2} e^{2t} = sqrt 2 e^{2t}, and
/// agreement with the master operator on the lifted field.
pub fn criterion_marchaud() -> CriterionResult {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let u = |t: f64| (2.0 * t).exp();
    let mut worst = 0.0f64;
    for i in 0..10 {
        let t = -1.0 + 0.4 * i as f64;
        let got = apply_marchaud(0.5, &u, t, &spec).unwrap().value;
        let expect = 2f64.sqrt() * (2.0 * t).exp();
        worst = worst.max(((got - expect) / expect).abs());
    }
    // consistency with the master operator on the time-only lift
    let p = FracParams::new(1, 0.5).unwrap();
    let lift = FieldHandle::new("lift", 1, Growth::ExponentialInTime { rate: 2.0 }, |_, t| {
        (2.0 * t).exp()
    });
    let mut worst_consistency = 0.0f64;
    for &t in &[-0.5, 0.0, 0.7] {
        let m = apply_master(&p, &lift, &SpaceTimePoint::new(vec![0.3], t), &spec)
            .unwrap()
            .value;
        let d = apply_marchaud(0.5, &u, t, &spec).unwrap().value;
        worst_consistency = worst_consistency.max(((m - d) / d).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        index: 8,
        name: "Marchaud reduction".into(),
        pass: worst <= 1e-4 && worst_consistency <= 1e-6,
        detail: format!(
            "worst rel err {worst:.3e} (budget 1e-4), master consistency {worst_consistency:.3e} \
             (budget 1e-6)"
        ),
        elapsed_s: elapsed,
    }
}

/// Run the whole acceptance suite.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_symbol_suite(),
        criterion_kernel_inequality(seed),
        criterion_round_trip(),
        criterion_caloric(seed),
        criterion_theorem_ratio(),
        criterion_homogeneous(),
        criterion_rescale(),
        criterion_marchaud(),
    ]
}
