//! `envlie` command-line front end.
//!
//! Exit status: 0 ok, 1 residual gate failed, 2 input error, 3 degenerate
//! geometry. Report files are deterministic; timings go to stdout only.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::char_curve::{curve_to_bezier, TraceOptions};
use crate::envelope::{
    curve_poles, envelope_mesh_with, obj_string, verify_envelope, Characteristic, ElementaryKind, MeshOptions,
    ResidualReport, RowStatus,
};
use crate::error::{Error, Result};
use crate::exact::{format_rational, from_f64, int, parse_rational, to_f64, Rational};
use crate::group::{generator_names, generators};
use crate::scene::Scene;
use crate::tangent::{dphi1, image_basis, stabilizer_kernel_coeffs};
use crate::trimming::{export_trimmed, trim_boundaries, TrimOptions};

#[derive(Parser, Debug)]
#[command(name = "envlie", version, about = "Characteristic curves and envelopes of moving quadrics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Tangent-map images of the group generators, image rank and kernel.
    Dphi(Common),
    /// Characteristic curve at one instant.
    Char(Common),
    /// Sampled envelope mesh with residuals.
    Envelope(Common),
    /// Trimmed envelope patch of a moving cone between two z-bounds.
    Trim(Common),
    /// Residuals of given points against the system.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Scene file (JSON).
    #[arg(long)]
    scene: PathBuf,
    /// Instant as an exact rational `p/q`.
    #[arg(long)]
    t0: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    t_samples: Option<usize>,
    #[arg(long)]
    u_samples: Option<usize>,
    /// Residual gate.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// CSV with columns `t,x,y,z` (`t` exact); defaults to samples of the
    /// characteristic at `t0`.
    #[arg(long)]
    points: Option<PathBuf>,
}

struct Ctx {
    scene: Scene,
    out: PathBuf,
}

impl Ctx {
    fn new(c: &Common) -> Result<Ctx> {
        let mut scene = Scene::load(&c.scene)?;
        if let Some(t) = &c.t0 {
            scene.options.t0 = Some(parse_rational(t).map_err(|e| relocate(e, "--t0"))?);
        }
        if let Some(n) = c.t_samples {
            scene.options.t_samples = n;
        }
        if let Some(n) = c.u_samples {
            scene.options.u_samples = n;
        }
        if let Some(x) = c.tol {
            scene.options.tol = x;
        }
        if scene.options.t_samples < 2 || scene.options.u_samples < 2 {
            return Err(Error::InvalidParameter("sample counts must be at least 2".into()));
        }
        let out = c
            .out
            .clone()
            .or_else(|| scene.output_dir.clone().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&out)?;
        Ok(Ctx { scene, out })
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        let p = self.out.join(name);
        std::fs::write(&p, contents)?;
        println!("wrote {}", p.display());
        Ok(())
    }

    fn write_json(&self, name: &str, v: &Value) -> Result<()> {
        self.write(name, &(serde_json::to_string_pretty(v).expect("json") + "\n"))
    }

    fn trace_options(&self) -> TraceOptions {
        let mut o = TraceOptions::default();
        if let Some(b) = self.scene.options.trace_bounds {
            o.bounds = b;
        }
        o
    }

    fn u_grid(&self) -> Vec<f64> {
        let (lo, hi) = &self.scene.options.u_range;
        let (lo, hi) = (to_f64(lo), to_f64(hi));
        let n = self.scene.options.u_samples;
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

fn relocate(e: Error, loc: &str) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse {
            location: loc.into(),
            message,
        },
        e => e,
    }
}

/// Runs the CLI with the process arguments and returns the exit status.
pub fn run() -> i32 {
    run_with(std::env::args_os())
}

pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Ok(v) = std::env::var("ENVLIE_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                // Fails only if the pool was already built in this process.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error[E_INVALID_PARAMETER]: ENVLIE_THREADS must be a positive integer");
                return 2;
            }
        }
    }
    let start = Instant::now();
    let res = match &cli.cmd {
        Cmd::Dphi(c) => Ctx::new(c).and_then(|x| cmd_dphi(&x)),
        Cmd::Char(c) => Ctx::new(c).and_then(|x| cmd_char(&x)),
        Cmd::Envelope(c) => Ctx::new(c).and_then(|x| cmd_envelope(&x)),
        Cmd::Trim(c) => Ctx::new(c).and_then(|x| cmd_trim(&x)),
        Cmd::Verify(v) => Ctx::new(&v.common).and_then(|x| cmd_verify(&x, v.points.as_deref())),
    };
    println!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match res {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("residual gate failed");
            1
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}

fn combination(coeffs: &[Rational], names: &[&str]) -> String {
    let mut s = String::new();
    for (c, n) in coeffs.iter().zip(names) {
        if *c == int(0) {
            continue;
        }
        let neg = *c < int(0);
        let a = if neg { -c.clone() } else { c.clone() };
        if s.is_empty() {
            s.push_str(if neg { "-" } else { "" });
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if a != int(1) {
            let _ = write!(s, "{}·", format_rational(&a));
        }
        s.push_str(n);
    }
    s
}

fn cmd_dphi(ctx: &Ctx) -> Result<bool> {
    let qbar = &ctx.scene.system.qbar;
    let tag = ctx.scene.system.motion.tag();
    let gens = generators(tag);
    let names = generator_names(tag);
    println!("elementary: {qbar}");
    println!("{:<4} image", "gen");
    let mut rows = vec![];
    for (g, n) in gens.iter().zip(&names) {
        let im = dphi1(qbar, g);
        let shown = if im.is_zero() { "0".to_string() } else { im.to_string() };
        println!("{n:<4} {shown}");
        rows.push(json!({ "generator": n, "image": shown, "coeffs": im.to_strings() }));
    }
    let (basis, rank) = image_basis(qbar, &gens);
    let kernel: Vec<String> = stabilizer_kernel_coeffs(qbar, &gens).iter().map(|c| combination(c, &names)).collect();
    println!("rank: {rank}");
    println!("kernel: {{{}}}", kernel.join(", "));
    ctx.write_json(
        "dphi.json",
        &json!({
            "elementary": qbar.to_json(),
            "group": tag,
            "images": rows,
            "rank": rank,
            "image_basis": basis.iter().map(|q| q.to_strings()).collect::<Vec<_>>(),
            "kernel": kernel,
        }),
    )?;
    Ok(true)
}

fn pair_f64(p: &[f64; 3]) -> Value {
    json!([p[0], p[1], p[2]])
}

/// Bézier pieces of `c` over `[lo, hi]`, split around the poles of `W`.
fn bezier_pieces(c: &crate::char_curve::HomogRationalCurve, lo: &Rational, hi: &Rational) -> Vec<Value> {
    let gap = (hi - lo) / int(1000);
    let mut cuts = vec![lo.clone()];
    for p in curve_poles(c) {
        let p = from_f64(p);
        if &p > lo && &p < hi {
            cuts.push(&p - &gap);
            cuts.push(&p + &gap);
        }
    }
    cuts.push(hi.clone());
    cuts.chunks(2)
        .filter(|w| w[0] < w[1])
        .filter_map(|w| curve_to_bezier(c, &w[0], &w[1]).ok())
        .map(|b| b.to_json())
        .collect()
}

/// World-frame samples of the characteristic at `t`, with a label per point.
fn characteristic_samples(ctx: &Ctx, t: &Rational, ch: &Characteristic) -> Result<Vec<(String, [f64; 3])>> {
    let g = ctx.scene.system.motion.eval(t)?;
    Ok(match ch {
        Characteristic::Rational(_) | Characteristic::Circle(_) => ctx
            .u_grid()
            .into_iter()
            .filter_map(|u| ch.sample(u).map(|p| (format!("{u}"), g.act_point_f64(p))))
            .filter(|(_, p)| p.iter().all(|x| x.is_finite()))
            .collect(),
        Characteristic::Traced(bs) => bs
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.points.iter().enumerate().map(move |(j, p)| (format!("{i}:{j}"), *p)))
            .map(|(l, p)| (l, g.act_point_f64(p)))
            .collect(),
        Characteristic::Point(p) => vec![("point".into(), g.act_point_f64(*p))],
        Characteristic::Rulings(_) | Characteristic::Empty => vec![],
    })
}

fn characteristic_json(ctx: &Ctx, t: &Rational, ch: &Characteristic) -> Result<Value> {
    let g = ctx.scene.system.motion.eval(t)?;
    let (lo, hi) = &ctx.scene.options.u_range;
    Ok(match ch {
        Characteristic::Rational(c) => {
            let world = c.map(&g);
            json!({
                "kind": "rational",
                "curve": c.to_json(),
                "world_curve": world.to_json(),
                "poles": curve_poles(c),
                "bezier": bezier_pieces(&world, lo, hi),
            })
        }
        Characteristic::Circle(c) => json!({
            "kind": "circle",
            "center": c.center.iter().map(format_rational).collect::<Vec<_>>(),
            "normal": c.normal.iter().map(format_rational).collect::<Vec<_>>(),
            "radius_sq": format_rational(&c.radius_sq),
            "curve": c.exact.as_ref().map(|e| e.to_json()),
            "world_curve": c.exact.as_ref().map(|e| e.map(&g).to_json()),
        }),
        Characteristic::Rulings(r) => json!({
            "kind": "rulings",
            "directions": r.directions.iter().map(pair_f64).collect::<Vec<_>>(),
            "apex_only": r.apex_only,
        }),
        Characteristic::Point(p) => json!({ "kind": "point", "point": pair_f64(&g.act_point_f64(*p)) }),
        Characteristic::Empty => json!({ "kind": "empty" }),
        Characteristic::Traced(bs) => json!({
            "kind": "traced",
            "branches": bs.iter().map(|b| json!({
                "points": b.len(),
                "closed": b.closed,
                "length": b.length(),
                "max_residual": b.max_residual(),
            })).collect::<Vec<_>>(),
        }),
    })
}

fn gate(report: &ResidualReport, tol: f64) -> bool {
    report.max.0 <= tol && report.max.1 <= tol
}

fn summary(report: &ResidualReport, tol: f64) -> Value {
    json!({
        "points": report.points.len(),
        "max_abs_f": report.max.0,
        "max_abs_df_dt": report.max.1,
        "mean_abs_f": report.mean.0,
        "mean_abs_df_dt": report.mean.1,
        "tol": tol,
        "passed": gate(report, tol),
    })
}

fn print_summary(report: &ResidualReport, tol: f64) {
    println!(
        "residuals over {} points: max |f| = {:.3e}, max |df/dt| = {:.3e}, mean |f| = {:.3e}, mean |df/dt| = {:.3e} (tol {:.1e})",
        report.points.len(),
        report.max.0,
        report.max.1,
        report.mean.0,
        report.mean.1,
        tol
    );
}

fn cmd_char(ctx: &Ctx) -> Result<bool> {
    let sys = &ctx.scene.system;
    let t0 = ctx.scene.t0();
    let ch = sys.characteristic(&t0, &ctx.trace_options())?;
    let samples = characteristic_samples(ctx, &t0, &ch)?;
    let points: Vec<(Rational, [f64; 3])> = samples.iter().map(|(_, p)| (t0.clone(), *p)).collect();
    let report = verify_envelope(sys, &points)?;
    let mut csv = String::from("label,x,y,z,abs_f,abs_df_dt\n");
    for ((l, p), (a, b)) in samples.iter().zip(&report.residuals) {
        let _ = writeln!(csv, "{l},{:.16e},{:.16e},{:.16e},{a:.6e},{b:.6e}", p[0], p[1], p[2]);
    }
    let mut j = characteristic_json(ctx, &t0, &ch)?;
    j["t0"] = json!(format_rational(&t0));
    j["residuals"] = summary(&report, ctx.scene.options.tol);
    println!("characteristic at t0 = {}: {}", format_rational(&t0), j["kind"].as_str().unwrap_or(""));
    print_summary(&report, ctx.scene.options.tol);
    ctx.write_json("char.json", &j)?;
    ctx.write("char.csv", &csv)?;
    Ok(gate(&report, ctx.scene.options.tol))
}

fn status_name(s: &RowStatus) -> String {
    match s {
        RowStatus::Ok => "ok".into(),
        RowStatus::Traced(n) => format!("traced({n})"),
        RowStatus::Stationary => "stationary".into(),
        RowStatus::Rulings => "rulings".into(),
        RowStatus::PointOrEmpty => "point_or_empty".into(),
        RowStatus::NonFinite => "non_finite".into(),
    }
}

fn cmd_envelope(ctx: &Ctx) -> Result<bool> {
    let sys = &ctx.scene.system;
    let tol = ctx.scene.options.tol;
    let t_grid = sys.motion.uniform_grid(ctx.scene.options.t_samples);
    let opts = MeshOptions {
        trace: ctx.trace_options(),
    };
    let mesh = envelope_mesh_with(sys, &t_grid, &ctx.u_grid(), &opts)?;
    let nu = mesh.u_values.len();
    let mut points = vec![];
    for r in &mesh.rows {
        if let Some(v) = r.first_vertex {
            points.extend(mesh.vertices[v..v + nu].iter().map(|p| (r.t.clone(), *p)));
        }
    }
    let max = mesh.max_residuals();
    let n = mesh.residuals.len().max(1) as f64;
    let sum = mesh.residuals.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let report = ResidualReport {
        points,
        residuals: mesh.residuals.clone(),
        max,
        mean: (sum.0 / n, sum.1 / n),
    };
    let skipped: Vec<Value> = mesh
        .rows
        .iter()
        .filter(|r| r.first_vertex.is_none())
        .map(|r| json!({ "t": format_rational(&r.t), "status": status_name(&r.status) }))
        .collect();
    println!(
        "envelope: {} of {} rows emitted, {} vertices, {} faces",
        mesh.emitted_rows(),
        mesh.rows.len(),
        mesh.vertices.len(),
        mesh.faces.len()
    );
    print_summary(&report, tol);
    if mesh.vertices.is_empty() {
        return Err(Error::EmptyRegion);
    }
    ctx.write("envelope.obj", &obj_string(&mesh.vertices, &mesh.faces))?;
    ctx.write("envelope_residuals.csv", &report.to_csv())?;
    ctx.write_json(
        "envelope_report.json",
        &json!({
            "description": ctx.scene.description,
            "t_samples": t_grid.len(),
            "u_samples": nu,
            "rows_emitted": mesh.emitted_rows(),
            "skipped_rows": skipped,
            "vertices": mesh.vertices.len(),
            "faces": mesh.faces.len(),
            "residuals": summary(&report, tol),
        }),
    )?;
    Ok(gate(&report, tol))
}

fn cmd_trim(ctx: &Ctx) -> Result<bool> {
    let sys = &ctx.scene.system;
    let tol = ctx.scene.options.tol;
    if !matches!(sys.kind(), ElementaryKind::Cone(_)) {
        return Err(Error::InvalidParameter("trimming needs a cone as elementary quadric".into()));
    }
    let (zmin, zmax) = ctx
        .scene
        .options
        .z_bounds
        .clone()
        .ok_or_else(|| Error::InvalidParameter("scene has no options.z_bounds".into()))?;
    let mut opts = TrimOptions::default();
    if let Some(w) = &ctx.scene.options.u_window {
        opts.window = w.clone();
    }
    let t_grid = sys.motion.uniform_grid(ctx.scene.options.t_samples);
    let region = trim_boundaries(sys, &zmin, &zmax, &t_grid, &opts)?;
    let ex = export_trimmed(sys, &region, ctx.scene.options.u_samples)?;

    let mut points = vec![];
    let mut slab_violation: f64 = 0.0;
    let (zlo, zhi) = (to_f64(&zmin), to_f64(&zmax));
    for s in &ex.strips {
        let t = &region.t_samples[s.row];
        let ginv = sys.motion.eval(t)?.inverse();
        for p in &ex.mesh.vertices[s.first_vertex..s.first_vertex + s.u.len()] {
            let z = ginv.act_point_f64(*p)[2];
            slab_violation = slab_violation.max(zlo - z).max(z - zhi);
            points.push((t.clone(), *p));
        }
    }
    let report = verify_envelope(sys, &points)?;
    let slab_ok = slab_violation <= 1e-9;
    println!(
        "trim: {} branches, {} ambiguous rows, {} skipped rows, {} strips, {} vertices",
        region.branches.len(),
        region.ambiguities.len(),
        region.skipped.len(),
        ex.strips.len(),
        ex.mesh.vertices.len()
    );
    println!("max z-slab violation: {:.3e}", slab_violation.max(0.0));
    print_summary(&report, tol);
    ctx.write_json("trim_domain.json", &ex.domain)?;
    ctx.write("trimmed.obj", &obj_string(&ex.mesh.vertices, &ex.mesh.faces))?;
    ctx.write_json(
        "trim_report.json",
        &json!({
            "description": ctx.scene.description,
            "z_bounds": [format_rational(&zmin), format_rational(&zmax)],
            "t_samples": t_grid.len(),
            "branches": region.branches.len(),
            "ambiguous_rows": region.ambiguities.iter().map(|&i| format_rational(&region.t_samples[i])).collect::<Vec<_>>(),
            "skipped_rows": region.skipped.iter().map(|(i, e)| json!({
                "t": format_rational(&region.t_samples[*i]), "code": e.code()
            })).collect::<Vec<_>>(),
            "strips": ex.strips.len(),
            "vertices": ex.mesh.vertices.len(),
            "faces": ex.mesh.faces.len(),
            "max_slab_violation": slab_violation.max(0.0),
            "residuals": summary(&report, tol),
        }),
    )?;
    Ok(gate(&report, tol) && slab_ok)
}

fn read_points(path: &Path) -> Result<Vec<(Rational, [f64; 3])>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = vec![];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with('t')) {
            continue;
        }
        let loc = |c: usize| format!("{}:{}: column {}", path.display(), i + 1, c + 1);
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() < 4 {
            return Err(Error::Parse {
                location: loc(0),
                message: "expected t,x,y,z".into(),
            });
        }
        let t = parse_rational(f[0]).map_err(|e| relocate(e, &loc(0)))?;
        let mut p = [0.0; 3];
        for k in 0..3 {
            p[k] = f[k + 1].parse().map_err(|e: std::num::ParseFloatError| Error::Parse {
                location: loc(k + 1),
                message: e.to_string(),
            })?;
        }
        out.push((t, p));
    }
    Ok(out)
}

fn cmd_verify(ctx: &Ctx, points: Option<&Path>) -> Result<bool> {
    let sys = &ctx.scene.system;
    let tol = ctx.scene.options.tol;
    let pts = match points {
        Some(p) => read_points(p)?,
        None => {
            let t0 = ctx.scene.t0();
            let ch = sys.characteristic(&t0, &ctx.trace_options())?;
            characteristic_samples(ctx, &t0, &ch)?.into_iter().map(|(_, p)| (t0.clone(), p)).collect()
        }
    };
    let report = verify_envelope(sys, &pts)?;
    print_summary(&report, tol);
    ctx.write("verify.csv", &report.to_csv())?;
    ctx.write_json("verify_report.json", &summary(&report, tol))?;
    Ok(gate(&report, tol))
}
