//! Envelope surfaces `χ = ∪ g_t(χ_t)`: sampling into meshes and checking
//! `f = 0`, `∂f/∂t = 0` on candidate points.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::char_curve::{
    cone_char_param, cone_rulings, derivative_surface, generic_char_trace, sphere_char_circle, Circle,
    ConeDerivativeSurface, HomogRationalCurve, Rulings, SampledCurve, SphereSection, TraceOptions,
};
use crate::error::{Error, Result};
use crate::exact::{abs, format_rational, from_f64, rational_sqrt, to_f64, Rational};
use crate::group::GroupElement;
use crate::motion::RationalMotion;
use crate::quadric::{Quadric, QuadricFamily};
use crate::rational_fn::RationalFunction;

/// Shape of the elementary surface, which selects the characteristic path.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementaryKind {
    /// `x² + y² − r² z²` up to scale, with rational `r`.
    Cone(Rational),
    /// The unit sphere up to scale.
    Sphere,
    Other,
}

pub fn classify(qbar: &Quadric) -> ElementaryKind {
    if qbar.proportionality(&Quadric::unit_sphere()).is_some() {
        return ElementaryKind::Sphere;
    }
    let c = qbar.coeffs();
    let rest_zero = (3..10).all(|k| c[k].is_zero());
    if rest_zero && !c[0].is_zero() && c[0] == c[1] {
        if let Some(r) = rational_sqrt(&-(&c[2] / &c[0])).filter(|r| r.is_positive()) {
            return ElementaryKind::Cone(r);
        }
    }
    ElementaryKind::Other
}

/// A one-parameter system `f(·, t) = λ(t)·(f̄ ∘ g_t⁻¹)`.
#[derive(Debug)]
pub struct SurfaceSystem {
    pub qbar: Quadric,
    pub motion: RationalMotion,
    /// Optional nonvanishing factor `λ(t)`.
    pub scale: Option<RationalFunction>,
    pub description: String,
    family: OnceLock<(QuadricFamily, QuadricFamily)>,
}

impl Clone for SurfaceSystem {
    fn clone(&self) -> Self {
        SurfaceSystem {
            qbar: self.qbar.clone(),
            motion: self.motion.clone(),
            scale: self.scale.clone(),
            description: self.description.clone(),
            family: self.family.clone(),
        }
    }
}

impl SurfaceSystem {
    pub fn new(qbar: Quadric, motion: RationalMotion) -> Self {
        SurfaceSystem {
            qbar,
            motion,
            scale: None,
            description: String::new(),
            family: OnceLock::new(),
        }
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    /// Multiplies the system by `λ(t)`, which must not vanish on the domain.
    pub fn with_scale(mut self, lambda: RationalFunction) -> Result<Self> {
        let (lo, hi) = self.motion.domain();
        if lambda.is_zero() || lambda.num().count_roots_in(lo, hi) > 0 || lambda.den().count_roots_in(lo, hi) > 0 {
            return Err(Error::InvalidParameter("scale factor vanishes or has a pole in the domain".into()));
        }
        self.scale = Some(lambda);
        self.family = OnceLock::new();
        Ok(self)
    }

    pub fn kind(&self) -> ElementaryKind {
        classify(&self.qbar)
    }

    /// `f(·, t)` and `∂f/∂t` with rational-function coefficients.
    pub fn family(&self) -> &(QuadricFamily, QuadricFamily) {
        self.family.get_or_init(|| {
            let mut f = QuadricFamily::pullback_motion(&self.qbar, &self.motion);
            if let Some(l) = &self.scale {
                f = f.scale_fn(l);
            }
            let df = f.derivative();
            (f, df)
        })
    }

    /// Derivative surface in the elementary frame; for a scaled system
    /// `λ(t₀)h + λ'(t₀) f̄`.
    pub fn derivative_surface(&self, t0: &Rational) -> Result<Quadric> {
        let h = derivative_surface(&self.qbar, &self.motion, t0);
        let Some(l) = &self.scale else { return h };
        let dl = l.derivative().eval(t0)?;
        let base = self.qbar.scale(&dl);
        let scaled = match h {
            Ok(h) => h.scale(&l.eval(t0)?).add(&base),
            Err(Error::StationaryInstant(_)) => base,
            Err(e) => return Err(e),
        };
        if scaled.is_zero() {
            return Err(Error::StationaryInstant(format_rational(t0)));
        }
        Ok(scaled)
    }

    /// `h` with the multiple of `f̄` removed that cancels `f̄`'s first nonzero
    /// monomial; same characteristic.
    pub fn reduced_derivative_surface(&self, t0: &Rational) -> Result<Quadric> {
        let (h, _) = self.derivative_surface(t0)?.reduce_modulo(&self.qbar);
        if h.is_zero() {
            return Err(Error::StationaryInstant(format_rational(t0)));
        }
        Ok(h)
    }

    /// Characteristic in the elementary frame (before applying `g_t`).
    pub fn characteristic(&self, t0: &Rational, trace: &TraceOptions) -> Result<Characteristic> {
        let h = self.reduced_derivative_surface(t0)?;
        match self.kind() {
            ElementaryKind::Cone(r) => match ConeDerivativeSurface::from_quadric(&h, &r) {
                Ok(d) => match cone_char_param(&d) {
                    Ok(c) => Ok(Characteristic::Rational(c)),
                    Err(Error::RulingDegenerate | Error::PlaneDegenerate) => {
                        Ok(Characteristic::Rulings(cone_rulings(&d)))
                    }
                    Err(e) => Err(e),
                },
                Err(Error::NotInImageSpan(_)) => self.traced(&h, trace),
                Err(e) => Err(e),
            },
            ElementaryKind::Sphere if h.is_affine_linear() => Ok(match sphere_char_circle(&h)? {
                SphereSection::Circle(c) => Characteristic::Circle(c),
                SphereSection::Point(p) => Characteristic::Point(crate::char_curve::point_f64(&p)),
                SphereSection::Empty => Characteristic::Empty,
            }),
            _ => self.traced(&h, trace),
        }
    }

    fn traced(&self, h: &Quadric, trace: &TraceOptions) -> Result<Characteristic> {
        match generic_char_trace(&self.qbar, h, trace) {
            Ok(b) => Ok(Characteristic::Traced(b)),
            Err(Error::NoIntersectionFound) => Ok(Characteristic::Empty),
            Err(e) => Err(e),
        }
    }

    /// Coefficient-normalized `(|f|, |∂f/∂t|)` at `p`, evaluated exactly at
    /// the binary value of `p`.
    pub fn residual(&self, t: &Rational, p: [f64; 3]) -> Result<(f64, f64)> {
        let (f, df) = self.family();
        let (f, df) = (f.at(t)?, df.at(t)?);
        Ok(residual_pair(&f, &df, p))
    }
}

fn max_abs(q: &Quadric) -> Rational {
    q.coeffs().iter().map(abs).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

fn normalized_value(q: &Quadric, scale: &Rational, p: &[Rational; 3]) -> f64 {
    if scale.is_zero() {
        return 0.0;
    }
    to_f64(&abs(&(q.eval(p) / scale)))
}

pub(crate) fn residual_pair(f: &Quadric, df: &Quadric, p: [f64; 3]) -> (f64, f64) {
    if !p.iter().all(|v| v.is_finite()) {
        return (f64::INFINITY, f64::INFINITY);
    }
    let pe = p.map(from_f64);
    (normalized_value(f, &max_abs(f), &pe), normalized_value(df, &max_abs(df), &pe))
}

/// Characteristic curve at one instant, in the elementary frame.
#[derive(Clone, Debug, PartialEq)]
pub enum Characteristic {
    Rational(HomogRationalCurve),
    Circle(Circle),
    /// Lines through the cone apex.
    Rulings(Rulings),
    Point([f64; 3]),
    Empty,
    Traced(Vec<SampledCurve>),
}

impl Characteristic {
    /// Point at grid parameter `u`: the curve parameter for rational curves
    /// and circles, the arclength fraction in `[0, 1]` of the longest branch
    /// for traced curves. `None` when the characteristic is not a curve.
    pub fn sample(&self, u: f64) -> Option<[f64; 3]> {
        match self {
            Characteristic::Rational(c) => Some(c.eval_f64(u)),
            Characteristic::Circle(c) => Some(c.eval_f64(u)),
            Characteristic::Traced(b) => b
                .iter()
                .max_by(|a, b| a.length().total_cmp(&b.length()))
                .map(|b| b.at_fraction(u)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Characteristic sampled from a traced curve with this many branches.
    Traced(usize),
    Stationary,
    Rulings,
    PointOrEmpty,
    NonFinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshRow {
    pub t: Rational,
    pub status: RowStatus,
    /// Index of the row's first vertex, when the row was emitted.
    pub first_vertex: Option<usize>,
    /// Real roots of `W` (rational rows): the u-values separating sheets.
    pub poles: Vec<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct MeshOptions {
    pub trace: TraceOptions,
}

/// Sampled envelope. Vertex `(i, j)` of an emitted row is
/// `g_{t_i}(χ_{t_i}(u_j))`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeMesh {
    pub u_values: Vec<f64>,
    pub rows: Vec<MeshRow>,
    pub vertices: Vec<[f64; 3]>,
    /// `(|f|, |∂f/∂t|)` per vertex, coefficient-normalized.
    pub residuals: Vec<(f64, f64)>,
    pub faces: Vec<[usize; 3]>,
}

impl EnvelopeMesh {
    pub fn max_residuals(&self) -> (f64, f64) {
        self.residuals
            .iter()
            .fold((0.0, 0.0), |(a, b), &(x, y)| (f64::max(a, x), f64::max(b, y)))
    }

    pub fn emitted_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.first_vertex.is_some()).count()
    }
}

struct RowOut {
    row: MeshRow,
    vertices: Vec<[f64; 3]>,
    residuals: Vec<(f64, f64)>,
}

fn skipped(t: &Rational, status: RowStatus) -> RowOut {
    RowOut {
        row: MeshRow {
            t: t.clone(),
            status,
            first_vertex: None,
            poles: vec![],
        },
        vertices: vec![],
        residuals: vec![],
    }
}

fn mesh_row(sys: &SurfaceSystem, t: &Rational, u_grid: &[f64], opts: &MeshOptions) -> Result<RowOut> {
    let ch = match sys.characteristic(t, &opts.trace) {
        Ok(c) => c,
        Err(Error::StationaryInstant(_)) => return Ok(skipped(t, RowStatus::Stationary)),
        Err(e) => return Err(e),
    };
    let status = match &ch {
        Characteristic::Rational(_) | Characteristic::Circle(_) => RowStatus::Ok,
        Characteristic::Traced(b) => RowStatus::Traced(b.len()),
        Characteristic::Rulings(_) => return Ok(skipped(t, RowStatus::Rulings)),
        Characteristic::Point(_) | Characteristic::Empty => return Ok(skipped(t, RowStatus::PointOrEmpty)),
    };
    let poles = match &ch {
        Characteristic::Rational(c) => curve_poles(c),
        _ => vec![],
    };
    let g: GroupElement = sys.motion.eval(t)?;
    let vertices: Vec<[f64; 3]> =
        u_grid.iter().map(|&u| g.act_point_f64(ch.sample(u).expect("curve characteristic"))).collect();
    if vertices.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
        return Ok(skipped(t, RowStatus::NonFinite));
    }
    let (f, df) = sys.family();
    let (f, df) = (f.at(t)?, df.at(t)?);
    let residuals = vertices.iter().map(|&p| residual_pair(&f, &df, p)).collect();
    Ok(RowOut {
        row: MeshRow {
            t: t.clone(),
            status,
            first_vertex: Some(0),
            poles,
        },
        vertices,
        residuals,
    })
}

/// Real roots of `W`, ascending: parameters where the curve passes through infinity.
pub fn curve_poles(c: &HomogRationalCurve) -> Vec<f64> {
    let w = c.w();
    match w.degree() {
        Some(1) => vec![-to_f64(&w.coeff(0)) / to_f64(&w.coeff(1))],
        Some(2) => w.real_roots_quadratic_f64(),
        _ => {
            // W = (u²+1)·D or a product of such; roots of the quadratic factors
            let q = crate::poly::Polynomial::from_ints(&[1, 0, 1]);
            match w.div_rem(&q) {
                Ok((d, rem)) if rem.is_zero() && d.degree() == Some(2) => d.real_roots_quadratic_f64(),
                _ => vec![],
            }
        }
    }
}

pub fn envelope_mesh(sys: &SurfaceSystem, t_grid: &[Rational], u_grid: &[f64]) -> Result<EnvelopeMesh> {
    envelope_mesh_with(sys, t_grid, u_grid, &MeshOptions::default())
}

/// Samples the envelope on `t_grid × u_grid`. Rows are independent and
/// computed in parallel; output order follows `t_grid`.
pub fn envelope_mesh_with(
    sys: &SurfaceSystem,
    t_grid: &[Rational],
    u_grid: &[f64],
    opts: &MeshOptions,
) -> Result<EnvelopeMesh> {
    if t_grid.len() < 2 || u_grid.len() < 2 {
        return Err(Error::InvalidParameter("grids need at least 2 samples each".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !sys.motion.contains(t)) {
        return Err(Error::OutOfDomain(format_rational(t)));
    }
    sys.family();
    sys.motion.body_velocity_fn();
    let outs: Vec<RowOut> = t_grid
        .par_iter()
        .map(|t| mesh_row(sys, t, u_grid, opts))
        .collect::<Result<_>>()?;

    let nu = u_grid.len();
    let mut mesh = EnvelopeMesh {
        u_values: u_grid.to_vec(),
        rows: vec![],
        vertices: vec![],
        residuals: vec![],
        faces: vec![],
    };
    for mut out in outs {
        if out.row.first_vertex.is_some() {
            out.row.first_vertex = Some(mesh.vertices.len());
            mesh.vertices.extend(out.vertices);
            mesh.residuals.extend(out.residuals);
        }
        mesh.rows.push(out.row);
    }
    for w in mesh.rows.windows(2) {
        let (Some(a), Some(b)) = (w[0].first_vertex, w[1].first_vertex) else { continue };
        for j in 0..nu - 1 {
            let (v00, v01, v10, v11) = (a + j, a + j + 1, b + j, b + j + 1);
            mesh.faces.push([v00, v10, v01]);
            mesh.faces.push([v10, v11, v01]);
        }
    }
    Ok(mesh)
}

/// Per-point residuals and summary statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub points: Vec<(Rational, [f64; 3])>,
    pub residuals: Vec<(f64, f64)>,
    pub max: (f64, f64),
    pub mean: (f64, f64),
}

impl ResidualReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,x,y,z,abs_f,abs_df_dt\n");
        for ((t, p), (a, b)) in self.points.iter().zip(&self.residuals) {
            let _ = writeln!(s, "{},{:.16e},{:.16e},{:.16e},{:.6e},{:.6e}", format_rational(t), p[0], p[1], p[2], a, b);
        }
        s
    }
}

/// `(|f|, |∂f/∂t|)` at each `(t, p)`, both polynomials normalized by their
/// largest coefficient at `t`.
pub fn verify_envelope(sys: &SurfaceSystem, points: &[(Rational, [f64; 3])]) -> Result<ResidualReport> {
    let residuals: Vec<(f64, f64)> = points
        .par_iter()
        .map(|(t, p)| {
            if !sys.motion.contains(t) {
                return Err(Error::OutOfDomain(format_rational(t)));
            }
            sys.residual(t, *p)
        })
        .collect::<Result<_>>()?;
    let n = residuals.len().max(1) as f64;
    let max = residuals.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (f64::max(a, x), f64::max(b, y)));
    let sum = residuals.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    Ok(ResidualReport {
        points: points.to_vec(),
        residuals,
        max,
        mean: (sum.0 / n, sum.1 / n),
    })
}

/// OBJ text: `v` records with 17 significant digits, then 1-based `f` records.
pub fn obj_string(vertices: &[[f64; 3]], faces: &[[usize; 3]]) -> String {
    let mut s = String::with_capacity(vertices.len() * 72 + faces.len() * 24);
    for v in vertices {
        let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
    }
    for f in faces {
        let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    s
}

pub fn export_obj(mesh: &EnvelopeMesh, path: &Path) -> Result<()> {
    std::fs::write(path, obj_string(&mesh.vertices, &mesh.faces))?;
    Ok(())
}
