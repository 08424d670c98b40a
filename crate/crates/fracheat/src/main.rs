//! fracheat CLI: config parsing, analytic field catalog, subcommand
//! dispatch, and deterministic JSON/CSV artifact emission.
//!
//! Exit codes: 0 ok, 1 invariant failure, 2 config error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use fracheat::field::FieldHandle;
use fracheat::grid::{Axis, GridField, ParabolicCylinder};
use fracheat::kernel::{
    check_key_inequality, eval_kernel, make_frame, FracParams, SpaceTimePoint,
};
use fracheat::operator::apply_master;
use fracheat::quadrature::QuadratureSpec;
use fracheat::regularity::{check_estimate_theorem, HolderMode, HolderSpec, TheoremKind};
use fracheat::rescale::{
    rescale_field, scaling_exponent_table, select_blowup_point, BlowupProblem, RescaleVariant,
};
use fracheat::selftest;
use fracheat::{greens, FracError};

#[derive(Parser)]
#[command(name = "fracheat", version, about = "Fully fractional heat operator toolkit")]
struct Cli {
    /// Path to a JSON run configuration (strict: unknown keys rejected)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts (overrides config)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed (overrides config)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (accepted for interface stability; execution is serial)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fractional order override, 0 < s < 1
    #[arg(long, global = true)]
    s: Option<f64>,
    /// Spatial dimension override
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Evaluation point "x1,...,xn,t"
    #[arg(long, global = true, value_name = "x1,...,t")]
    at: Option<String>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel-level checks and evaluations
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Apply the fractional heat operator to a field
    Op {
        #[command(subcommand)]
        action: OpAction,
    },
    /// Solve for the particular part w = G * (f restricted to Q)
    Solve,
    /// Split a grid solution into caloric and particular parts
    Decompose,
    /// Interior regularity estimates on grid data
    Reg,
    /// Blow-up point selection and rescaling
    Rescale,
    /// Run the full acceptance suite
    Selftest,
}

#[derive(Subcommand)]
enum KernelAction {
    /// Monte-Carlo check of the directional kernel inequality
    CheckLemma {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Evaluate the fundamental solution at the --at point
    Eval,
}

#[derive(Subcommand)]
enum OpAction {
    /// Evaluate the master operator at the --at point
    Apply,
}

// ---------------------------------------------------------------------------
// Run configuration (strict)

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
enum FieldSpec {
    Constant { value: f64 },
    Affine { offset: f64, grad: Vec<f64> },
    CosWave { k: Vec<f64> },
    ExpCos { lambda: f64, k: Vec<f64> },
    Power { beta: f64 },
    Bump {
        center: Vec<f64>,
        rx: f64,
        t_center: f64,
        rt: f64,
        amplitude: f64,
    },
    KernelSnapshot { x0: Vec<f64>, t0: f64 },
    /// Seeded sum of smooth bumps in B_2 x (0, 3)
    Manufactured { seed: u64 },
    GridFile { path: String },
}

impl FieldSpec {
    fn build(&self, p: &FracParams) -> Result<FieldHandle, FracError> {
        Ok(match self {
            FieldSpec::Constant { value } => FieldHandle::constant(p.n, *value),
            FieldSpec::Affine { offset, grad } => FieldHandle::affine(*offset, grad.clone()),
            FieldSpec::CosWave { k } => FieldHandle::cos_wave(k.clone()),
            FieldSpec::ExpCos { lambda, k } => FieldHandle::exp_cos(*lambda, k.clone()),
            FieldSpec::Power { beta } => FieldHandle::power(p.n, *beta),
            FieldSpec::Bump {
                center,
                rx,
                t_center,
                rt,
                amplitude,
            } => FieldHandle::bump(center.clone(), *rx, *t_center, *rt, *amplitude),
            FieldSpec::KernelSnapshot { x0, t0 } => {
                FieldHandle::kernel_snapshot(*p, x0.clone(), *t0)
            }
            FieldSpec::Manufactured { seed } => selftest::manufactured_source(p.n, *seed),
            FieldSpec::GridFile { path } => {
                FieldHandle::from_grid(GridField::load(Path::new(path))?)
            }
        })
    }

    fn dimension_ok(&self, n: usize) -> bool {
        match self {
            FieldSpec::Affine { grad, .. } => grad.len() == n,
            FieldSpec::CosWave { k } | FieldSpec::ExpCos { k, .. } => k.len() == n,
            FieldSpec::Bump { center, .. } => center.len() == n,
            FieldSpec::KernelSnapshot { x0, .. } => x0.len() == n,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderSpec {
    center_x: Vec<f64>,
    center_t: f64,
    r: f64,
}

impl CylinderSpec {
    fn build(&self) -> Result<ParabolicCylinder, FracError> {
        ParabolicCylinder::new(self.center_x.clone(), self.center_t, self.r)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct HolderBlock {
    alpha: f64,
    mode: HolderMode,
    pair_budget: usize,
    min_sep: f64,
    theorem: TheoremKind,
    schauder_alpha: Option<f64>,
}

impl Default for HolderBlock {
    fn default() -> Self {
        Self {
            alpha: 0.3,
            mode: HolderMode::Holder,
            pair_budget: 20_000,
            min_sep: 5e-3,
            theorem: TheoremKind::Holder,
            schauder_alpha: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct BlowupBlock {
    p: f64,
    q: Option<f64>,
    r: f64,
    gradient_variant: bool,
}

impl Default for BlowupBlock {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: None,
            r: 1.0,
            gradient_variant: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RunConfig {
    n: usize,
    s: f64,
    quad: QuadratureSpec,
    seed: u64,
    output_dir: String,
    /// Field the operator acts on (`op apply`)
    field: Option<FieldSpec>,
    /// Source term (`solve`, `decompose`, `reg`)
    source: Option<FieldSpec>,
    /// Grid data paths (manifest JSON)
    u_grid: Option<String>,
    f_grid: Option<String>,
    domain: Option<CylinderSpec>,
    subdomain: Option<CylinderSpec>,
    holder: HolderBlock,
    blowup: Option<BlowupBlock>,
    at: Option<Vec<f64>>,
    /// Grid resolution for solver-built fields
    grid_steps: usize,
    time_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 1,
            s: 0.5,
            quad: QuadratureSpec::default(),
            seed: 0,
            output_dir: "out".into(),
            field: None,
            source: None,
            u_grid: None,
            f_grid: None,
            domain: None,
            subdomain: None,
            holder: HolderBlock::default(),
            blowup: None,
            at: None,
            grid_steps: 65,
            time_steps: 49,
        }
    }
}

impl RunConfig {
    fn frac(&self) -> Result<FracParams, FracError> {
        FracParams::new(self.n, self.s)
    }

    fn validate(&self) -> Result<(), FracError> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(FracError::Domain(format!(
                "config.s: the fractional order must satisfy 0 < s < 1, got {}",
                self.s
            )));
        }
        self.frac()?;
        self.quad.validate()?;
        // The blow-up exponent range is a theorem hypothesis: reject an
        // explicit demo block at config time, before any computation.
        if let Some(block) = &self.blowup {
            let prob = self.blowup_problem();
            prob.validate_subcritical().map_err(|e| {
                FracError::Domain(format!(
                    "config.blowup.p: {e}; the subcritical hypothesis requires \
                     1 < p < (n+2)/(n+2-2s) = {:.6}",
                    prob.p_max()
                ))
            })?;
            if block.gradient_variant || block.q.is_some() {
                prob.validate_gradient_regime()
                    .map_err(|e| FracError::Domain(format!("config.blowup.q: {e}")))?;
            }
            if !(block.r > 0.0) {
                return Err(FracError::Domain(
                    "config.blowup.r must be positive".into(),
                ));
            }
        }
        for (label, f) in [("field", &self.field), ("source", &self.source)] {
            if let Some(spec) = f {
                if !spec.dimension_ok(self.n) {
                    return Err(FracError::Domain(format!(
                        "config.{label}: vector parameters must have length n = {}",
                        self.n
                    )));
                }
            }
        }
        if let Some(at) = &self.at {
            if at.len() != self.n + 1 {
                return Err(FracError::Domain(format!(
                    "config.at: expected {} coordinates (x1..xn, t)",
                    self.n + 1
                )));
            }
        }
        if self.grid_steps < 5 || self.time_steps < 5 {
            return Err(FracError::Domain(
                "config.grid_steps/time_steps must be at least 5".into(),
            ));
        }
        Ok(())
    }

    fn blowup_problem(&self) -> BlowupProblem {
        match &self.blowup {
            Some(block) => {
                let mut prob = BlowupProblem::new(self.n, block.p, self.s);
                if let Some(q) = block.q {
                    prob = prob.with_gradient(q);
                }
                prob
            }
            // demo default: midpoint of the subcritical range
            None => {
                let probe = BlowupProblem::new(self.n, 1.5, self.s);
                BlowupProblem::new(self.n, 0.5 * (1.0 + probe.p_max()), self.s)
            }
        }
    }

    fn eval_point(&self) -> SpaceTimePoint {
        let coords = self
            .at
            .clone()
            .unwrap_or_else(|| vec![0.0; self.n + 1]);
        SpaceTimePoint::new(coords[..self.n].to_vec(), coords[self.n])
    }

    fn domain_or_default(&self) -> Result<ParabolicCylinder, FracError> {
        match &self.domain {
            Some(c) => c.build(),
            None => ParabolicCylinder::new(vec![0.0; self.n], 1.5, 1.2),
        }
    }

    fn subdomain_or_default(&self) -> Result<ParabolicCylinder, FracError> {
        match &self.subdomain {
            Some(c) => c.build(),
            None => ParabolicCylinder::new(vec![0.0; self.n], 1.5, 0.45),
        }
    }

    fn template(&self) -> Result<GridField, FracError> {
        let axes = (0..self.n)
            .map(|_| Axis::new(-2.0, 2.0, self.grid_steps))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GridField::zeros(
            "template",
            axes,
            Axis::new(0.02, 2.98, self.time_steps)?,
        ))
    }
}

// ---------------------------------------------------------------------------
// Deterministic JSON emission: sorted keys (serde_json's default map) and
// every float at 17 significant digits.

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "\"nan\"".into()
    } else if v.is_infinite() {
        if v > 0.0 { "\"inf\"".into() } else { "\"-inf\"".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn write_json(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = x.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_f64(x.as_f64().unwrap()));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push(':');
                write_json(item, out);
            }
            out.push('}');
        }
    }
}

fn emit_report(dir: &Path, name: &str, v: &Value) -> Result<(), FracError> {
    std::fs::create_dir_all(dir)?;
    let mut text = String::new();
    write_json(v, &mut text);
    text.push('\n');
    std::fs::write(dir.join(name), &text)?;
    println!("{}", text.trim_end());
    Ok(())
}

/// Plot-ready CSV: header row, then one row per node of a time slice.
fn emit_plot_csv(dir: &Path, name: &str, g: &GridField, t_idx: usize) -> Result<(), FracError> {
    std::fs::create_dir_all(dir)?;
    let n = g.axes.len();
    let mut text = String::new();
    for d in 0..n {
        text.push_str(&format!("x{},", d + 1));
    }
    text.push_str("t,value\n");
    let t = g.time_axis.coord(t_idx);
    let mut idx = vec![0usize; n];
    let per_slice: usize = g.axes.iter().map(|a| a.steps).product();
    for _ in 0..per_slice {
        for d in 0..n {
            text.push_str(&format!("{:.16e},", g.axes[d].coord(idx[d])));
        }
        text.push_str(&format!("{:.16e},{:.16e}\n", t, g.get(&idx, t_idx)));
        for d in 0..n {
            idx[d] += 1;
            if idx[d] < g.axes[d].steps {
                break;
            }
            idx[d] = 0;
        }
    }
    std::fs::write(dir.join(name), &text)?;
    let recipe = format!(
        "# plot recipe for {name}\n# any CSV-aware plotting tool works, e.g.:\n\
         #   gnuplot> set datafile separator ','\n\
         #   gnuplot> plot '{name}' using 1:{} with lines\n",
        n + 2
    );
    std::fs::write(dir.join(format!("{name}.recipe.txt")), recipe)?;
    Ok(())
}

// ---------------------------------------------------------------------------

fn load_config(cli: &Cli) -> Result<RunConfig, FracError> {
    let mut cfg: RunConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| FracError::Format(format!("config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = cli.s {
        cfg.s = s;
    }
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.display().to_string();
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(FracError::Domain("--threads must be at least 1".into()));
        }
    }
    if let Some(at) = &cli.at {
        let coords: Result<Vec<f64>, _> = at.split(',').map(str::trim).map(str::parse).collect();
        cfg.at = Some(coords.map_err(|e| {
            FracError::Format(format!("--at expects comma-separated numbers: {e}"))
        })?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<bool, FracError> {
    let p = cfg.frac()?;
    let out_dir = PathBuf::from(&cfg.output_dir);
    match &cli.cmd {
        Command::Kernel { action } => match action {
            KernelAction::CheckLemma { samples } => {
                let frame = make_frame(&p, &vec![0.0; p.n]);
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let mut violations = 0usize;
                for _ in 0..*samples {
                    let rad = 10f64.powf(rng.gen::<f64>() * 2.0);
                    let mut y: Vec<f64> =
                        (0..p.n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                    let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm < 1e-6 {
                        y[0] = 1.0;
                    }
                    let scale = rad / y.iter().map(|v| v * v).sum::<f64>().sqrt();
                    y.iter_mut().for_each(|v| *v *= scale);
                    let tau = 10f64.powf(rng.gen::<f64>() * 5.0 - 3.0);
                    let power = if rng.gen::<bool>() { 1.0 } else { 2.0 };
                    if !check_key_inequality(&p, &frame, &y, tau, power)?.pass {
                        violations += 1;
                    }
                }
                emit_report(
                    &out_dir,
                    "kernel-check-lemma.json",
                    &json!({ "samples": samples, "violations": violations, "seed": cfg.seed }),
                )?;
                Ok(violations == 0)
            }
            KernelAction::Eval => {
                let at = cfg.eval_point();
                let value = eval_kernel(&p, &at.x, at.t);
                emit_report(
                    &out_dir,
                    "kernel-eval.json",
                    &json!({ "n": p.n, "s": p.s, "x": at.x, "t": at.t, "value": value }),
                )?;
                Ok(true)
            }
        },
        Command::Op { action: OpAction::Apply } => {
            let field = match &cfg.field {
                Some(spec) => spec.build(&p)?,
                None => FieldHandle::exp_cos(1.0, vec![1.0; p.n]),
            };
            let at = cfg.eval_point();
            let r = apply_master(&p, &field, &at, &cfg.quad)?;
            emit_report(
                &out_dir,
                "op-apply.json",
                &json!({
                    "field": field.name,
                    "n": p.n,
                    "s": p.s,
                    "x": at.x,
                    "t": at.t,
                    "value": r.value,
                    "err_est": r.err_est,
                    "low_confidence": r.low_confidence,
                }),
            )?;
            Ok(true)
        }
        Command::Solve => {
            let f = match &cfg.source {
                Some(spec) => spec.build(&p)?,
                None => selftest::manufactured_source(p.n, cfg.seed.max(1)),
            };
            let q = cfg.domain_or_default()?;
            let template = cfg.template()?;
            let w = greens::solve_w(&p, &f, &q, &template, &cfg.quad)?;
            std::fs::create_dir_all(&out_dir)?;
            w.save(&out_dir)?;
            emit_plot_csv(&out_dir, "solve-plot.csv", &w, w.time_axis.steps / 2)?;
            let sup = w.values.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
            emit_report(
                &out_dir,
                "solve.json",
                &json!({
                    "source": f.name,
                    "grid": w.name,
                    "nodes": w.values.len(),
                    "sup_w": sup,
                }),
            )?;
            Ok(true)
        }
        Command::Decompose => {
            let u_path = cfg.u_grid.as_ref().ok_or_else(|| {
                FracError::Domain("decompose needs config.u_grid (a GridField manifest)".into())
            })?;
            let u = GridField::load(Path::new(u_path))?;
            let f = match &cfg.source {
                Some(spec) => spec.build(&p)?,
                None => selftest::manufactured_source(p.n, cfg.seed.max(1)),
            };
            let q = cfg.domain_or_default()?;
            let d = greens::decompose(&p, &u, &f, &q, &cfg.quad)?;
            std::fs::create_dir_all(&out_dir)?;
            d.v.save(&out_dir)?;
            d.w.save(&out_dir)?;
            emit_plot_csv(&out_dir, "decompose-v-plot.csv", &d.v, d.v.time_axis.steps / 2)?;
            emit_report(
                &out_dir,
                "decompose.json",
                &json!({
                    "caloric_part": d.v.name,
                    "particular_part": d.w.name,
                    "spot_residual": d.spot_residual,
                }),
            )?;
            Ok(true)
        }
        Command::Reg => {
            let (u, f) = match (&cfg.u_grid, &cfg.f_grid) {
                (Some(up), Some(fp)) => (
                    GridField::load(Path::new(up))?,
                    GridField::load(Path::new(fp))?,
                ),
                _ => {
                    // manufactured demo pair: f seeded, u = G * f on the grid
                    let f = selftest::manufactured_source(p.n, cfg.seed.max(1));
                    let w = selftest::solution_handle(p, f.clone(), cfg.quad);
                    let template = cfg.template()?;
                    let u = GridField::from_fn(
                        "u",
                        template.axes.clone(),
                        template.time_axis,
                        |x, t| w.value(x, t),
                    );
                    let fg = GridField::from_fn(
                        "f",
                        template.axes.clone(),
                        template.time_axis,
                        |x, t| f.value(x, t),
                    );
                    (u, fg)
                }
            };
            let q = cfg.domain_or_default()?;
            let q_tilde = cfg.subdomain_or_default()?;
            let mut hspec = HolderSpec::new(
                cfg.holder.alpha,
                cfg.holder.mode,
                cfg.holder.pair_budget,
                cfg.holder.min_sep,
            );
            hspec.seed = cfg.seed;
            let rep = check_estimate_theorem(
                &u,
                &f,
                cfg.s,
                cfg.holder.schauder_alpha,
                cfg.holder.theorem,
                &q_tilde,
                &q,
                &hspec,
            )?;
            emit_report(
                &out_dir,
                "reg.json",
                &json!({
                    "sup_norm": rep.sup_norm,
                    "seminorm": rep.seminorm,
                    "effective_exponent": rep.effective_exponent,
                    "theorem_ratio": rep.theorem_ratio,
                }),
            )?;
            Ok(true)
        }
        Command::Rescale => {
            let u = match &cfg.u_grid {
                Some(up) => GridField::load(Path::new(up))?,
                None => {
                    // synthetic blow-up demo: a sharp radial peak at the origin
                    let axes = (0..p.n)
                        .map(|_| Axis::new(-0.05, 0.05, 401))
                        .collect::<Result<Vec<_>, _>>()?;
                    GridField::from_fn(
                        "peak",
                        axes,
                        Axis::new(-0.05, 0.05, 401)?,
                        |x, t| {
                            let d2: f64 =
                                x.iter().map(|v| v * v).sum::<f64>() + t * t;
                            1e3 / (1.0 + d2 / 2.5e-3)
                        },
                    )
                }
            };
            let prob = cfg.blowup_problem();
            let block = cfg.blowup.clone().unwrap_or_default();
            let variant = if block.gradient_variant {
                RescaleVariant::HeightPlusGradient
            } else {
                RescaleVariant::Height
            };
            let seed_pt = cfg.eval_point();
            let mut res = select_blowup_point(&u, &seed_pt, block.r, &prob, variant)?;
            rescale_field(&u, &mut res, block.r, &prob)?;
            std::fs::create_dir_all(&out_dir)?;
            if let Some(v) = &res.v_k {
                v.save(&out_dir)?;
                emit_plot_csv(&out_dir, "rescale-v-plot.csv", v, v.time_axis.steps / 2)?;
            }
            let table = scaling_exponent_table(&prob)?;
            emit_report(
                &out_dir,
                "rescale.json",
                &json!({
                    "selected_x": res.a_k.x,
                    "selected_t": res.a_k.t,
                    "r_k": res.r_k,
                    "lambda_k": res.lambda_k,
                    "m_k": res.m_k,
                    "eq56_defect": res.eq56_defect,
                    "ceiling": res.bound,
                    "exponents": serde_json::to_value(table).unwrap(),
                }),
            )?;
            Ok(true)
        }
        Command::Selftest => {
            let results = selftest::run_all(cfg.seed);
            let mut all_pass = true;
            println!("{:-<72}", "");
            for r in &results {
                println!("{}", r.summary_line());
                all_pass &= r.pass;
            }
            println!("{:-<72}", "");
            println!(
                "selftest: {}/{} criteria passed",
                results.iter().filter(|r| r.pass).count(),
                results.len()
            );
            emit_report(
                &out_dir,
                "selftest.json",
                &serde_json::to_value(&results).unwrap(),
            )?;
            Ok(all_pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("invariant failure (see report)");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
