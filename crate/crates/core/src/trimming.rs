//! Trimming the cone envelope to a slab `z_min < z < z_max` of the
//! elementary cone: exact per-instant u-intervals, boundary branches in the
//! `(t, u)` domain and their C¹ spline approximation.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::char_curve::{ConeDerivativeSurface, TraceOptions};
use crate::envelope::{residual_pair, Characteristic, ElementaryKind, EnvelopeMesh, MeshRow, RowStatus, SurfaceSystem};
use crate::error::{Error, Result};
use crate::exact::{format_rational, from_f64, int, rational_sqrt, to_f64, Rational};
use crate::poly::Polynomial;
use crate::quadric::QuadricFamily;
use crate::rational_fn::RationalFunction;
use crate::tangent::dphi1_matrix;

/// A real root of a rational polynomial of degree at most 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algebraic {
    Rational(Rational),
    /// `p + q√s` with `s > 0` not a rational square and `q ≠ 0`.
    Surd { p: Rational, q: Rational, s: Rational },
}

impl Algebraic {
    pub fn to_f64(&self) -> f64 {
        match self {
            Algebraic::Rational(v) => to_f64(v),
            Algebraic::Surd { p, q, s } => {
                let (pf, qs) = (to_f64(p), to_f64(q) * to_f64(s).sqrt());
                if pf == 0.0 || pf.signum() == qs.signum() {
                    pf + qs
                } else {
                    // conjugate form avoids cancellation
                    to_f64(&(p * p - q * q * s)) / (pf - qs)
                }
            }
        }
    }

    /// Exact comparison of `self` with `u`.
    pub fn cmp_rational(&self, u: &Rational) -> Ordering {
        match self {
            Algebraic::Rational(v) => v.cmp(u),
            Algebraic::Surd { p, q, s } => {
                // sign of w + q√s
                let w = p - u;
                if !w.is_negative() && q.is_positive() {
                    return Ordering::Greater;
                }
                if !w.is_positive() && q.is_negative() {
                    return Ordering::Less;
                }
                let (w2, q2s) = (&w * &w, q * q * s);
                if w.is_positive() {
                    w2.cmp(&q2s)
                } else {
                    q2s.cmp(&w2)
                }
            }
        }
    }

    fn enclosure(&self) -> (Rational, Rational) {
        let Algebraic::Surd { .. } = self else {
            let Algebraic::Rational(v) = self else { unreachable!() };
            return (v.clone(), v.clone());
        };
        let v = self.to_f64();
        let c = from_f64(v);
        let mut delta = from_f64((v.abs() * 2f64.powi(-40)).max(2f64.powi(-60)));
        loop {
            let (lo, hi) = (&c - &delta, &c + &delta);
            if self.cmp_rational(&lo) == Ordering::Greater && self.cmp_rational(&hi) == Ordering::Less {
                return (lo, hi);
            }
            delta *= int(1 << 20);
        }
    }

    fn bisect(&self, lo: Rational, hi: Rational) -> (Rational, Rational) {
        if lo == hi {
            return (lo, hi);
        }
        let m = (&lo + &hi) / int(2);
        match self.cmp_rational(&m) {
            Ordering::Greater => (m, hi),
            Ordering::Less => (lo, m),
            Ordering::Equal => (m.clone(), m),
        }
    }

    fn same(&self, other: &Algebraic) -> bool {
        match (self, other) {
            (Algebraic::Rational(a), Algebraic::Rational(b)) => a == b,
            (Algebraic::Surd { p: p1, q: q1, s: s1 }, Algebraic::Surd { p: p2, q: q2, s: s2 }) => {
                p1 == p2 && q1.is_positive() == q2.is_positive() && q1 * q1 * s1 == q2 * q2 * s2
            }
            _ => false,
        }
    }

    /// Order of `self` and `other`, plus a rational strictly between them
    /// when they differ.
    pub fn separate(&self, other: &Algebraic) -> (Ordering, Option<Rational>) {
        if self.same(other) {
            return (Ordering::Equal, None);
        }
        // well-separated floats: try a short midpoint, confirmed exactly
        let (a, b) = (self.to_f64(), other.to_f64());
        if (a - b).abs() > 1e-9 * (1.0 + a.abs() + b.abs()) {
            let m = from_f64(0.5 * (a + b));
            let (lo, hi, o) = if a < b { (self, other, Ordering::Less) } else { (other, self, Ordering::Greater) };
            if lo.cmp_rational(&m) == Ordering::Less && hi.cmp_rational(&m) == Ordering::Greater {
                return (o, Some(m));
            }
        }
        let (mut la, mut ha) = self.enclosure();
        let (mut lb, mut hb) = other.enclosure();
        loop {
            if ha < lb {
                return (Ordering::Less, Some((ha + lb) / int(2)));
            }
            if hb < la {
                return (Ordering::Greater, Some((hb + la) / int(2)));
            }
            (la, ha) = self.bisect(la, ha);
            (lb, hb) = other.bisect(lb, hb);
        }
    }
}

/// Distinct real roots of `p` (degree ≤ 2), ascending.
pub fn real_roots(p: &Polynomial) -> Vec<Algebraic> {
    let c = |i| p.coeff(i);
    match p.degree() {
        Some(1) => vec![Algebraic::Rational(-c(0) / c(1))],
        Some(2) => {
            let (a, b, cc) = (c(2), c(1), c(0));
            let disc = &b * &b - &a * &cc * int(4);
            if disc.is_negative() {
                return vec![];
            }
            let two_a = &a * int(2);
            if disc.is_zero() {
                return vec![Algebraic::Rational(-b / two_a)];
            }
            if let Some(sq) = rational_sqrt(&disc) {
                let mut r = [(-&b - &sq) / &two_a, (-&b + sq) / &two_a];
                r.sort();
                return r.into_iter().map(Algebraic::Rational).collect();
            }
            let p = -b / &two_a;
            let q = int(1) / two_a.abs();
            vec![
                Algebraic::Surd { p: p.clone(), q: -q.clone(), s: disc.clone() },
                Algebraic::Surd { p, q, s: disc },
            ]
        }
        _ => vec![],
    }
}

/// `z(u) = −N(u) / (r·D(u))` on the characteristic.
pub fn z_of_u(d: &ConeDerivativeSurface) -> Result<RationalFunction> {
    if d.is_plane_degenerate() {
        return Err(Error::PlaneDegenerate);
    }
    if d.n_poly().is_zero() {
        return Err(Error::RulingDegenerate);
    }
    RationalFunction::new(-&d.n_poly(), d.d_poly().scale(d.r()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EndpointKind {
    /// Root of the boundary quadratic for `z_min`.
    Lower,
    /// Root of the boundary quadratic for `z_max`.
    Upper,
    Pole,
    Window,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Endpoint {
    pub value: Algebraic,
    pub kind: EndpointKind,
}

/// Open interval of `u` on which the characteristic lies inside the slab.
#[derive(Clone, Debug, PartialEq)]
pub struct UInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl UInterval {
    pub fn contains(&self, u: &Rational) -> bool {
        self.lo.value.cmp_rational(u) == Ordering::Less && self.hi.value.cmp_rational(u) == Ordering::Greater
    }

    pub fn bounds_f64(&self) -> (f64, f64) {
        (self.lo.value.to_f64(), self.hi.value.to_f64())
    }
}

/// Exact solution set of `z_min < z(u) < z_max` within the open window.
/// The critical points are the roots of `N + r·z_b·D` for both bounds and
/// of `D`; the sign pattern is decided at one rational point per gap.
pub fn trim_u_intervals(
    d: &ConeDerivativeSurface,
    z_min: &Rational,
    z_max: &Rational,
    window: &(Rational, Rational),
) -> Result<Vec<UInterval>> {
    if z_min >= z_max {
        return Err(Error::InvalidParameter("z_min must be below z_max".into()));
    }
    if window.0 >= window.1 {
        return Err(Error::InvalidParameter("empty u-window".into()));
    }
    let z = z_of_u(d)?;
    let (num, den) = (z.num(), z.den());
    let mut crit: Vec<Endpoint> = vec![];
    for (kind, zb) in [(EndpointKind::Lower, z_min), (EndpointKind::Upper, z_max)] {
        let b = num - &den.scale(zb);
        crit.extend(real_roots(&b).into_iter().map(|value| Endpoint { value, kind }));
    }
    crit.extend(real_roots(den).into_iter().map(|value| Endpoint {
        value,
        kind: EndpointKind::Pole,
    }));
    crit.retain(|e| {
        e.value.cmp_rational(&window.0) == Ordering::Greater && e.value.cmp_rational(&window.1) == Ordering::Less
    });
    crit.sort_by(|a, b| a.value.separate(&b.value).0);

    let mut pts = vec![Endpoint {
        value: Algebraic::Rational(window.0.clone()),
        kind: EndpointKind::Window,
    }];
    pts.extend(crit);
    pts.push(Endpoint {
        value: Algebraic::Rational(window.1.clone()),
        kind: EndpointKind::Window,
    });
    let mut out = vec![];
    for w in pts.windows(2) {
        let (_, Some(test)) = w[0].value.separate(&w[1].value) else { continue };
        let zv = z.eval(&test)?;
        if *z_min < zv && zv < *z_max {
            out.push(UInterval {
                lo: w[0].clone(),
                hi: w[1].clone(),
            });
        }
    }
    Ok(out)
}

/// `k(t)` of the elementary-frame derivative surface `dφ₁(g⁻¹g')` and its
/// t-derivative, for a moving cone.
#[derive(Clone, Debug)]
pub struct ConeKFamily {
    pub r: Rational,
    pub k: [RationalFunction; 5],
    pub dk: [RationalFunction; 5],
}

impl ConeKFamily {
    pub fn new(sys: &SurfaceSystem) -> Result<Self> {
        let ElementaryKind::Cone(r) = sys.kind() else {
            return Err(Error::InvalidParameter("trimming needs a cone elementary surface".into()));
        };
        let m = sys.qbar.matrix().map(|c| RationalFunction::constant(c.clone()));
        let fam = QuadricFamily::from_matrix(dphi1_matrix(&m, sys.motion.body_velocity_fn()));
        let c = fam.coeffs();
        if let Some(i) = [0, 1, 2, 3, 9].into_iter().find(|&i| !c[i].is_zero()) {
            return Err(Error::NotInImageSpan(format!(
                "coefficient of {} is {}",
                crate::quadric::BASIS[i],
                c[i]
            )));
        }
        let k = [6, 7, 8, 4, 5].map(|i| c[i].clone());
        let dk = k.clone().map(|f| f.derivative());
        Ok(ConeKFamily { r, k, dk })
    }

    pub fn k_at(&self, t: &Rational) -> Result<[Rational; 5]> {
        let v: Vec<Rational> = self.k.iter().map(|f| f.eval(t)).collect::<Result<_>>()?;
        Ok(v.try_into().expect("five coefficients"))
    }

    pub fn surface_at(&self, t: &Rational) -> Result<ConeDerivativeSurface> {
        let k = self.k_at(t)?;
        if k.iter().all(|c| c.is_zero()) {
            return Err(Error::StationaryInstant(format_rational(t)));
        }
        ConeDerivativeSurface::new(k, self.r.clone())
    }

    /// `N + r·z_b·D` for coefficient vector `k`.
    fn boundary_poly(k: &[Rational; 5], r: &Rational, zb: &Rational) -> Polynomial {
        let [k1, k2, k3, k4, k5] = k;
        let n = Polynomial::new(vec![k3 - k1 * r, -(k2 * r) * int(2), k1 * r + k3]);
        let d = Polynomial::new(vec![-k4.clone(), -(k5 * int(2)), k4.clone()]);
        &n + &d.scale(&(r * zb))
    }

    /// `du/dt` along the root `u` of the boundary quadratic at `t`, by
    /// implicit differentiation; `None` at a vertical tangent.
    pub fn boundary_slope(&self, t: &Rational, zb: &Rational, u: f64) -> Result<Option<f64>> {
        let k = self.k_at(t)?;
        let dk: Vec<Rational> = self.dk.iter().map(|f| f.eval(t)).collect::<Result<_>>()?;
        let dk: [Rational; 5] = dk.try_into().expect("five coefficients");
        let f = Self::boundary_poly(&k, &self.r, zb);
        let ft = Self::boundary_poly(&dk, &self.r, zb).eval_f64(u);
        let fu = f.derivative().eval_f64(u);
        let scale = f.to_f64_coeffs().iter().fold(0.0f64, |a, c| a.max(c.abs())) * (1.0 + u * u);
        if fu.abs() <= 1e-12 * scale {
            return Ok(None);
        }
        Ok(Some(-ft / fu))
    }
}

/// Piecewise cubic Hermite interpolant `u(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrimSpline {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    /// Knots whose slope was replaced by a one-sided difference.
    pub flagged: Vec<usize>,
}

impl TrimSpline {
    fn segment(&self, t: f64) -> Option<usize> {
        let n = self.knots.len();
        if n == 0 || t < self.knots[0] || t > self.knots[n - 1] {
            return None;
        }
        if n == 1 {
            return Some(0);
        }
        Some(self.knots.partition_point(|&k| k <= t).clamp(1, n - 1) - 1)
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        let i = self.segment(t)?;
        if self.knots.len() == 1 || t == self.knots[i] {
            return Some(self.values[i]);
        }
        let h = self.knots[i + 1] - self.knots[i];
        let s = (t - self.knots[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        Some(
            (2.0 * s3 - 3.0 * s2 + 1.0) * self.values[i]
                + (s3 - 2.0 * s2 + s) * h * self.slopes[i]
                + (-2.0 * s3 + 3.0 * s2) * self.values[i + 1]
                + (s3 - s2) * h * self.slopes[i + 1],
        )
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        let i = self.segment(t)?;
        if self.knots.len() == 1 {
            return Some(self.slopes[0]);
        }
        let h = self.knots[i + 1] - self.knots[i];
        let s = (t - self.knots[i]) / h;
        let s2 = s * s;
        Some(
            (6.0 * s2 - 6.0 * s) / h * self.values[i]
                + (3.0 * s2 - 4.0 * s + 1.0) * self.slopes[i]
                + (-6.0 * s2 + 6.0 * s) / h * self.values[i + 1]
                + (3.0 * s2 - 2.0 * s) * self.slopes[i + 1],
        )
    }
}

/// C¹ cubic Hermite spline through `samples` with the given slopes. A
/// missing slope (vertical tangent) is replaced by the one-sided secant.
pub fn fit_trim_spline(samples: &[(f64, f64)], slopes: &[Option<f64>]) -> Result<TrimSpline> {
    if samples.is_empty() || samples.len() != slopes.len() {
        return Err(Error::InvalidParameter("need one slope per sample".into()));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::NonIncreasingKnots);
    }
    let n = samples.len();
    let mut flagged = vec![];
    let slopes = (0..n)
        .map(|i| match slopes[i] {
            Some(m) => m,
            None => {
                flagged.push(i);
                let (a, b) = if i + 1 < n { (i, i + 1) } else if i > 0 { (i - 1, i) } else { return 0.0 };
                (samples[b].1 - samples[a].1) / (samples[b].0 - samples[a].0)
            }
        })
        .collect();
    Ok(TrimSpline {
        knots: samples.iter().map(|s| s.0).collect(),
        values: samples.iter().map(|s| s.1).collect(),
        slopes,
        flagged,
    })
}

#[derive(Clone, Debug)]
pub struct TrimOptions {
    pub window: (Rational, Rational),
    /// Tracking radius as a multiple of the median per-step displacement.
    pub radius_factor: f64,
}

impl Default for TrimOptions {
    fn default() -> Self {
        TrimOptions {
            window: (int(-1), int(1)),
            radius_factor: 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub u: f64,
    pub slope: Option<f64>,
    pub kind: EndpointKind,
}

/// One continuous boundary curve `u(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrimBranch {
    pub kind: EndpointKind,
    /// `(row, point)` indices into [`TrimRegion::points`].
    pub members: Vec<(usize, usize)>,
    pub spline: TrimSpline,
}

#[derive(Clone, Debug)]
pub struct TrimRegion {
    pub z_bounds: (Rational, Rational),
    pub window: (Rational, Rational),
    pub t_samples: Vec<Rational>,
    /// Per-t intervals; `None` for skipped rows.
    pub intervals: Vec<Option<Vec<UInterval>>>,
    pub points: Vec<Vec<BoundaryPoint>>,
    pub skipped: Vec<(usize, Error)>,
    pub branches: Vec<TrimBranch>,
    /// Rows at which branch continuation was ambiguous and branches were split.
    pub ambiguities: Vec<usize>,
    pub tracking_radius: f64,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(v[v.len() / 2])
}

/// Groups boundary points into branches by predicted nearest-neighbour
/// continuation. A point continues a branch when it lies within the
/// tracking radius (or `factor` times the branch's predicted step, if
/// larger) of the slope prediction. Returns branches as member lists, ambiguous rows and the
/// tracking radius.
fn track(
    ts: &[f64],
    rows: &[Option<Vec<BoundaryPoint>>],
    factor: f64,
) -> (Vec<Vec<(usize, usize)>>, Vec<usize>, f64) {
    let mut disp = vec![];
    let mut scale = 0.0f64;
    for i in 0..rows.len().saturating_sub(1) {
        let (Some(a), Some(b)) = (&rows[i], &rows[i + 1]) else { continue };
        for p in a {
            scale = scale.max(p.u.abs());
            if let Some(m) = b.iter().filter(|q| q.kind == p.kind).map(|q| (q.u - p.u).abs()).min_by(f64::total_cmp) {
                disp.push(m);
            }
        }
    }
    let radius = (factor * median(disp).unwrap_or(0.0)).max(1e-9 * (1.0 + scale));

    let mut branches: Vec<Vec<(usize, usize)>> = vec![];
    let mut active: Vec<usize> = vec![];
    let mut ambiguous = vec![];
    for (i, row) in rows.iter().enumerate() {
        let Some(pts) = row else {
            active.clear();
            continue;
        };
        let mut cand: Vec<Vec<usize>> = vec![vec![]; active.len()];
        let mut owners: Vec<Vec<usize>> = vec![vec![]; pts.len()];
        for (a, &b) in active.iter().enumerate() {
            let &(ri, pi) = branches[b].last().expect("nonempty branch");
            let prev = &rows[ri].as_ref().expect("emitted row")[pi];
            let pred = prev.u + prev.slope.unwrap_or(0.0) * (ts[i] - ts[ri]);
            // fast-moving boundaries get a radius scaled to their own step
            let reach = radius.max(factor * (pred - prev.u).abs());
            for (j, q) in pts.iter().enumerate() {
                if q.kind == prev.kind && (q.u - pred).abs() <= reach {
                    cand[a].push(j);
                    owners[j].push(a);
                }
            }
        }
        let mut next_active = vec![];
        let mut taken = vec![false; pts.len()];
        let mut split = false;
        for (a, &b) in active.iter().enumerate() {
            match cand[a].as_slice() {
                [] => {}
                [j] if owners[*j].len() == 1 => {
                    branches[b].push((i, *j));
                    taken[*j] = true;
                    next_active.push(b);
                }
                _ => split = true,
            }
        }
        if split {
            ambiguous.push(i);
        }
        for (j, t) in taken.iter().enumerate() {
            if !t {
                branches.push(vec![(i, j)]);
                next_active.push(branches.len() - 1);
            }
        }
        active = next_active;
    }
    (branches, ambiguous, radius)
}

/// Intervals and boundary branches on `t_grid` for a moving cone.
pub fn trim_boundaries(
    sys: &SurfaceSystem,
    z_min: &Rational,
    z_max: &Rational,
    t_grid: &[Rational],
    opts: &TrimOptions,
) -> Result<TrimRegion> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonIncreasingKnots);
    }
    if let Some(t) = t_grid.iter().find(|t| !sys.motion.contains(t)) {
        return Err(Error::OutOfDomain(format_rational(t)));
    }
    if z_min >= z_max {
        return Err(Error::InvalidParameter("z_min must be below z_max".into()));
    }
    let fam = ConeKFamily::new(sys)?;
    type Row = std::result::Result<(Vec<UInterval>, Vec<BoundaryPoint>), Error>;
    let rows: Vec<Row> = t_grid
        .par_iter()
        .map(|t| -> Row {
            let d = fam.surface_at(t)?;
            let iv = trim_u_intervals(&d, z_min, z_max, &opts.window)?;
            let mut pts = vec![];
            for e in iv.iter().flat_map(|i| [&i.lo, &i.hi]) {
                let zb = match e.kind {
                    EndpointKind::Lower => z_min,
                    EndpointKind::Upper => z_max,
                    _ => continue,
                };
                let u = e.value.to_f64();
                pts.push(BoundaryPoint {
                    u,
                    slope: fam.boundary_slope(t, zb, u)?,
                    kind: e.kind,
                });
            }
            Ok((iv, pts))
        })
        .collect();

    let mut intervals = vec![];
    let mut points = vec![];
    let mut skipped = vec![];
    for (i, r) in rows.into_iter().enumerate() {
        match r {
            Ok((iv, pts)) => {
                intervals.push(Some(iv));
                points.push(Some(pts));
            }
            Err(e @ (Error::StationaryInstant(_) | Error::PlaneDegenerate | Error::RulingDegenerate)) => {
                skipped.push((i, e));
                intervals.push(None);
                points.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let ts: Vec<f64> = t_grid.iter().map(to_f64).collect();
    let (members, ambiguities, tracking_radius) = track(&ts, &points, opts.radius_factor);
    let branches = members
        .into_iter()
        .map(|m| {
            let p = |&(r, j): &(usize, usize)| &points[r].as_ref().expect("emitted row")[j];
            let samples: Vec<(f64, f64)> = m.iter().map(|rj| (ts[rj.0], p(rj).u)).collect();
            let slopes: Vec<Option<f64>> = m.iter().map(|rj| p(rj).slope).collect();
            Ok(TrimBranch {
                kind: p(&m[0]).kind,
                spline: fit_trim_spline(&samples, &slopes)?,
                members: m,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TrimRegion {
        z_bounds: (z_min.clone(), z_max.clone()),
        window: opts.window.clone(),
        t_samples: t_grid.to_vec(),
        intervals,
        points: points.into_iter().map(Option::unwrap_or_default).collect(),
        skipped,
        branches,
        ambiguities,
        tracking_radius,
    })
}

impl TrimRegion {
    /// Domain description: z-bounds, spline data per branch and the
    /// intervals per instant.
    pub fn domain_json(&self) -> serde_json::Value {
        let kind = |k: EndpointKind| match k {
            EndpointKind::Lower => "lower",
            EndpointKind::Upper => "upper",
            EndpointKind::Pole => "pole",
            EndpointKind::Window => "window",
        };
        serde_json::json!({
            "z_bounds": [format_rational(&self.z_bounds.0), format_rational(&self.z_bounds.1)],
            "u_window": [format_rational(&self.window.0), format_rational(&self.window.1)],
            "tracking_radius": self.tracking_radius,
            "branches": self.branches.iter().map(|b| serde_json::json!({
                "bound": kind(b.kind),
                "knots_t": b.spline.knots,
                "values_u": b.spline.values,
                "slopes": b.spline.slopes,
                "flagged_knots": b.spline.flagged,
            })).collect::<Vec<_>>(),
            "intervals": self.t_samples.iter().zip(&self.intervals).map(|(t, iv)| serde_json::json!({
                "t": format_rational(t),
                "skipped": iv.is_none(),
                "u_intervals": iv.iter().flatten().map(|i| {
                    let (a, b) = i.bounds_f64();
                    serde_json::json!([a, b])
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// One row segment of the trimmed mesh: samples across a single u-interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Strip {
    pub row: usize,
    pub interval: usize,
    pub u: Vec<f64>,
    pub first_vertex: usize,
}

#[derive(Clone, Debug)]
pub struct TrimmedExport {
    /// Mesh rows are strips; `u_values` holds the fractions across each
    /// interval.
    pub mesh: EnvelopeMesh,
    pub strips: Vec<Strip>,
    pub domain: serde_json::Value,
}

/// Envelope sampled only inside the region: `u_samples` points across each
/// interval, endpoints included. Strips of consecutive rows are joined when
/// their intervals overlap one-to-one.
pub fn export_trimmed(sys: &SurfaceSystem, region: &TrimRegion, u_samples: usize) -> Result<TrimmedExport> {
    if u_samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 u-samples".into()));
    }
    if region.intervals.iter().flatten().all(|iv| iv.is_empty()) {
        return Err(Error::EmptyRegion);
    }
    let frac: Vec<f64> = (0..u_samples).map(|j| j as f64 / (u_samples - 1) as f64).collect();
    type RowOut = (Vec<(usize, Vec<f64>, Vec<[f64; 3]>, Vec<(f64, f64)>)>, Rational);
    let rows: Vec<Option<RowOut>> = region
        .t_samples
        .par_iter()
        .zip(&region.intervals)
        .map(|(t, iv)| -> Result<Option<RowOut>> {
            let Some(iv) = iv.as_ref().filter(|v| !v.is_empty()) else { return Ok(None) };
            let Characteristic::Rational(c) = sys.characteristic(t, &TraceOptions::default())? else {
                return Ok(None);
            };
            let g = sys.motion.eval(t)?;
            let (f, df) = sys.family();
            let (f, df) = (f.at(t)?, df.at(t)?);
            let strips = iv
                .iter()
                .enumerate()
                .map(|(k, i)| {
                    let (lo, hi) = i.bounds_f64();
                    let u: Vec<f64> = frac.iter().map(|s| lo + (hi - lo) * s).collect();
                    let v: Vec<[f64; 3]> = u.iter().map(|&u| g.act_point_f64(c.eval_f64(u))).collect();
                    let r = v.iter().map(|&p| residual_pair(&f, &df, p)).collect();
                    (k, u, v, r)
                })
                .collect();
            Ok(Some((strips, t.clone())))
        })
        .collect::<Result<_>>()?;

    let mut mesh = EnvelopeMesh {
        u_values: frac,
        rows: vec![],
        vertices: vec![],
        residuals: vec![],
        faces: vec![],
    };
    let mut strips: Vec<Strip> = vec![];
    let mut by_row: Vec<Vec<usize>> = vec![vec![]; rows.len()];
    for (ri, row) in rows.into_iter().enumerate() {
        let Some((ss, t)) = row else { continue };
        for (k, u, v, r) in ss {
            by_row[ri].push(strips.len());
            mesh.rows.push(MeshRow {
                t: t.clone(),
                status: RowStatus::Ok,
                first_vertex: Some(mesh.vertices.len()),
                poles: vec![],
            });
            strips.push(Strip {
                row: ri,
                interval: k,
                u,
                first_vertex: mesh.vertices.len(),
            });
            mesh.vertices.extend(v);
            mesh.residuals.extend(r);
        }
    }
    let overlap = |a: &Strip, b: &Strip| {
        let (al, ah) = (a.u[0], *a.u.last().unwrap());
        let (bl, bh) = (b.u[0], *b.u.last().unwrap());
        al.max(bl) < ah.min(bh)
    };
    for i in 0..by_row.len().saturating_sub(1) {
        for &a in &by_row[i] {
            let partners: Vec<usize> = by_row[i + 1].iter().copied().filter(|&b| overlap(&strips[a], &strips[b])).collect();
            let [b] = partners.as_slice() else { continue };
            let back = by_row[i].iter().filter(|&&a2| overlap(&strips[a2], &strips[*b])).count();
            if back != 1 {
                continue;
            }
            let (va, vb) = (strips[a].first_vertex, strips[*b].first_vertex);
            for j in 0..u_samples - 1 {
                mesh.faces.push([va + j, vb + j, va + j + 1]);
                mesh.faces.push([vb + j, vb + j + 1, va + j + 1]);
            }
        }
    }
    Ok(TrimmedExport {
        mesh,
        strips,
        domain: region.domain_json(),
    })
}

/// Exact membership of `u` in the slab at `t`, straight from `z(u)`.
pub fn slab_contains(d: &ConeDerivativeSurface, z_min: &Rational, z_max: &Rational, u: &Rational) -> Result<bool> {
    let z = z_of_u(d)?;
    if z.den().eval(u).is_zero() {
        return Ok(false);
    }
    let v = z.eval(u)?;
    Ok(*z_min < v && v < *z_max)
}
