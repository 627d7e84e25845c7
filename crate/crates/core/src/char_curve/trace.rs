//! Predictor-corrector tracing of `zero(q) ∩ zero(h)` for two quadrics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::quadric::{Quadric, QuadricF64};

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn add_scaled(a: V3, s: f64, b: V3) -> V3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}
fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}
fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[derive(Clone, Debug)]
pub struct TraceOptions {
    /// Target turning angle per step (radians); step lengths adapt to it.
    pub step: f64,
    /// Bound on both coefficient-normalized residuals.
    pub tol: f64,
    pub max_points: usize,
    /// Axis-aligned search box `[lo, hi]`.
    pub bounds: [V3; 2],
    /// Seed planes per axis.
    pub planes: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 1e-2,
            tol: 1e-10,
            max_points: 100_000,
            bounds: [[-2.0; 3], [2.0; 3]],
            planes: 32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchEnd {
    Closed,
    Boundary,
    Singular,
    MaxPoints,
}

/// One traced branch. Tangents are unit vectors along the direction of
/// traversal.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub points: Vec<V3>,
    pub tangents: Vec<V3>,
    /// `(|q̂|, |ĥ|)` for the max-coefficient-normalized quadrics.
    pub residuals: Vec<(f64, f64)>,
    pub closed: bool,
    /// How the branch ends at its first and last point.
    pub ends: [BranchEnd; 2],
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, &(a, b)| m.max(a).max(b))
    }

    pub fn map(&self, g: &GroupElement) -> SampledCurve {
        let m = g.matrix().to_f64();
        let lin = |v: V3| -> V3 {
            let w: V3 = std::array::from_fn(|i| (0..3).map(|j| m[i][j] * v[j]).sum());
            let l = norm(w);
            w.map(|c| c / l)
        };
        SampledCurve {
            points: self.points.iter().map(|&p| g.act_point_f64(p)).collect(),
            tangents: self.tangents.iter().map(|&t| lin(t)).collect(),
            residuals: self.residuals.clone(),
            closed: self.closed,
            ends: self.ends,
        }
    }

    fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.points.len();
        let extra = usize::from(self.closed && n > 2);
        (0..n.saturating_sub(1) + extra).map(move |i| (i, (i + 1) % n))
    }

    fn hermite(&self, i: usize, j: usize, s: f64) -> V3 {
        hermite(self.points[i], self.tangents[i], self.points[j], self.tangents[j], s)
    }

    /// Distance from `p` to the polyline through the samples.
    pub fn polyline_distance(&self, p: V3) -> f64 {
        if self.points.len() == 1 {
            return norm(sub(p, self.points[0]));
        }
        self.segments()
            .map(|(i, j)| segment_distance(p, self.points[i], self.points[j]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the C¹ cubic Hermite interpolant of the samples
    /// (searched on the segments nearest to `p`).
    pub fn distance(&self, p: V3) -> f64 {
        if self.points.len() == 1 {
            return norm(sub(p, self.points[0]));
        }
        let mut segs: Vec<(f64, usize, usize)> = self
            .segments()
            .map(|(i, j)| (segment_distance(p, self.points[i], self.points[j]), i, j))
            .collect();
        segs.sort_by(|a, b| a.0.total_cmp(&b.0));
        segs.iter()
            .take(3)
            .map(|&(_, i, j)| {
                let f = |s: f64| norm(sub(self.hermite(i, j, s), p));
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..80 {
                    let m1 = lo + (hi - lo) / 3.0;
                    let m2 = hi - (hi - lo) / 3.0;
                    if f(m1) < f(m2) {
                        hi = m2;
                    } else {
                        lo = m1;
                    }
                }
                f(0.5 * (lo + hi)).min(f(0.0)).min(f(1.0))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Total polyline length.
    pub fn length(&self) -> f64 {
        self.segments().map(|(i, j)| norm(sub(self.points[j], self.points[i]))).sum()
    }

    /// Point at arclength fraction `s ∈ [0, 1]` along the polyline.
    pub fn at_fraction(&self, s: f64) -> V3 {
        let total = self.length();
        if self.points.len() < 2 || total == 0.0 {
            return self.points[0];
        }
        let mut target = s.clamp(0.0, 1.0) * total;
        for (i, j) in self.segments() {
            let l = norm(sub(self.points[j], self.points[i]));
            if target <= l {
                return self.hermite(i, j, if l > 0.0 { target / l } else { 0.0 });
            }
            target -= l;
        }
        *self.points.last().unwrap()
    }
}

/// Cubic Hermite point between `p0` and `p1` with unit tangents `t0`, `t1`
/// at `s ∈ [0, 1]`; derivative length chord / cos²(θ/4) is exact on circles.
fn hermite(p0: V3, t0: V3, p1: V3, t1: V3, s: f64) -> V3 {
    let theta = dot(t0, t1).clamp(-1.0, 1.0).acos();
    let l = norm(sub(p1, p0)) / (theta / 4.0).cos().powi(2);
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    std::array::from_fn(|k| h00 * p0[k] + h10 * l * t0[k] + h01 * p1[k] + h11 * l * t1[k])
}

fn segment_distance(p: V3, a: V3, b: V3) -> f64 {
    let ab = sub(b, a);
    let l2 = dot(ab, ab);
    let s = if l2 > 0.0 { (dot(sub(p, a), ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    norm(sub(p, add_scaled(a, s, ab)))
}

struct Tracer {
    q: QuadricF64,
    h: QuadricF64,
    opts: TraceOptions,
    h_max: f64,
    h_min: f64,
}

impl Tracer {
    fn residual(&self, p: V3) -> (f64, f64) {
        (self.q.eval(p), self.h.eval(p))
    }

    fn inside(&self, p: V3) -> bool {
        (0..3).all(|i| self.opts.bounds[0][i] <= p[i] && p[i] <= self.opts.bounds[1][i])
    }

    fn tangent(&self, p: V3) -> Option<V3> {
        let (gq, gh) = (self.q.gradient(p), self.h.gradient(p));
        let c = cross(gq, gh);
        let l = norm(c);
        if l <= 1e-9 * norm(gq) * norm(gh) || l == 0.0 {
            return None;
        }
        Some(c.map(|v| v / l))
    }

    /// Length of the minimum-norm Gauss-Newton step: first-order distance
    /// from `p` to the curve.
    fn offset(&self, p: V3) -> f64 {
        let r = self.residual(p);
        let (a, b) = (self.q.gradient(p), self.h.gradient(p));
        let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
        let det = aa * bb - ab * ab;
        if det <= 0.0 {
            return f64::INFINITY;
        }
        let y0 = (bb * r.0 - ab * r.1) / det;
        let y1 = (aa * r.1 - ab * r.0) / det;
        norm(std::array::from_fn(|i| a[i] * y0 + b[i] * y1))
    }

    /// Damped minimum-norm Gauss-Newton: `δ = −Jᵀ(JJᵀ)⁻¹F`.
    fn correct(&self, mut p: V3) -> Option<V3> {
        let tol = self.opts.tol;
        let size = |r: (f64, f64)| r.0.abs().max(r.1.abs());
        let mut r = self.residual(p);
        for _ in 0..60 {
            if size(r) <= tol * 1e-3 {
                return Some(p);
            }
            let (a, b) = (self.q.gradient(p), self.h.gradient(p));
            let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
            let det = aa * bb - ab * ab;
            if det <= 1e-24 * aa * bb || det == 0.0 {
                return (size(r) <= tol).then_some(p);
            }
            let y0 = (bb * r.0 - ab * r.1) / det;
            let y1 = (aa * r.1 - ab * r.0) / det;
            let delta: V3 = std::array::from_fn(|i| -(a[i] * y0 + b[i] * y1));
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda > 1e-4 {
                let trial = add_scaled(p, lambda, delta);
                let rt = self.residual(trial);
                if size(rt) < size(r) {
                    p = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (size(r) <= tol).then_some(p)
    }

    /// Marches from `seed` along `sign · tangent`. Returns points (starting
    /// with the seed), their tangents along the march, and the end reason.
    fn march(&self, seed: V3, sign: f64, detect_loop: bool) -> (Vec<V3>, Vec<V3>, BranchEnd) {
        let mut pts = vec![seed];
        let Some(t0) = self.tangent(seed) else {
            return (pts, vec![[0.0; 3]], BranchEnd::Singular);
        };
        let mut tans = vec![t0.map(|v| sign * v)];
        let mut h = self.h_max * 0.1;
        let mut arc = 0.0;
        loop {
            if pts.len() >= self.opts.max_points {
                return (pts, tans, BranchEnd::MaxPoints);
            }
            let p = *pts.last().unwrap();
            let t = *tans.last().unwrap();
            let next = loop {
                if h < self.h_min {
                    break None;
                }
                let pred = add_scaled(p, h, t);
                let Some(c) = self.correct(pred) else {
                    h *= 0.5;
                    continue;
                };
                if norm(sub(c, pred)) > 0.5 * h {
                    h *= 0.5;
                    continue;
                }
                let Some(mut tn) = self.tangent(c) else {
                    h *= 0.5;
                    continue;
                };
                if dot(tn, t) < 0.0 {
                    tn = tn.map(|v| -v);
                }
                let turn = dot(tn, t).clamp(-1.0, 1.0).acos();
                if turn > self.opts.step {
                    h *= 0.5;
                    continue;
                }
                // the interpolant between samples must stay on the curve too
                let mid = self.offset(hermite(p, t, c, tn, 0.5));
                if mid > 2.0 * self.opts.tol {
                    h *= 0.5;
                    continue;
                }
                let grow = turn < self.opts.step / 3.0 && mid < 0.1 * self.opts.tol;
                break Some((c, tn, grow));
            };
            let Some((c, tn, grow)) = next else {
                return (pts, tans, BranchEnd::Singular);
            };
            if !self.inside(c) {
                return (pts, tans, BranchEnd::Boundary);
            }
            let seg = norm(sub(c, p));
            arc += seg;
            if detect_loop && arc > 4.0 * seg && pts.len() > 3 {
                let ab = sub(c, p);
                let s = dot(sub(seed, p), ab) / dot(ab, ab);
                if (0.0..=1.0).contains(&s) && segment_distance(seed, p, c) < 0.05 * seg {
                    return (pts, tans, BranchEnd::Closed);
                }
            }
            pts.push(c);
            tans.push(tn);
            if grow {
                h = (h * 1.5).min(self.h_max);
            }
        }
    }

    fn branch(&self, seed: V3) -> SampledCurve {
        let (fwd, ftan, fend) = self.march(seed, 1.0, true);
        let (points, tangents, closed, ends) = if fend == BranchEnd::Closed {
            (fwd, ftan, true, [BranchEnd::Closed, BranchEnd::Closed])
        } else {
            let (bwd, btan, bend) = self.march(seed, -1.0, false);
            let mut pts: Vec<V3> = bwd[1..].iter().rev().copied().collect();
            let mut tans: Vec<V3> = btan[1..].iter().rev().map(|t| t.map(|v| -v)).collect();
            pts.extend(fwd);
            tans.extend(ftan);
            (pts, tans, false, [bend, fend])
        };
        let residuals = points
            .iter()
            .map(|&p| {
                let (a, b) = self.residual(p);
                (a.abs(), b.abs())
            })
            .collect();
        SampledCurve {
            points,
            tangents,
            residuals,
            closed,
            ends,
        }
    }

    /// Intersections of the curve with planes `x_axis = c`: 2-D Newton on
    /// `(q, h)` restricted to the plane from a grid of starting points.
    fn seeds(&self) -> Vec<V3> {
        let [lo, hi] = self.opts.bounds;
        let n = self.opts.planes.max(1);
        let starts = 12;
        let mut found = Vec::new();
        for axis in 0..3 {
            let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
            for i in 0..n {
                // irrational offset keeps planes off symmetry planes
                let frac = (i as f64 + 0.5 + 0.123_456_789) / (n as f64 + 0.25);
                let level = lo[axis] + frac * (hi[axis] - lo[axis]);
                for sb in 0..starts {
                    for sc in 0..starts {
                        let mut p = [0.0; 3];
                        p[axis] = level;
                        p[b] = lo[b] + (sb as f64 + 0.5) / starts as f64 * (hi[b] - lo[b]);
                        p[c] = lo[c] + (sc as f64 + 0.5) / starts as f64 * (hi[c] - lo[c]);
                        if let Some(s) = self.plane_newton(p, b, c) {
                            found.push(s);
                        }
                    }
                }
            }
        }
        found
    }

    fn plane_newton(&self, mut p: V3, b: usize, c: usize) -> Option<V3> {
        let tol = self.opts.tol;
        for _ in 0..40 {
            let (rq, rh) = self.residual(p);
            if rq.abs().max(rh.abs()) <= tol * 1e-3 {
                break;
            }
            let (gq, gh) = (self.q.gradient(p), self.h.gradient(p));
            let det = gq[b] * gh[c] - gq[c] * gh[b];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let db = (rq * gh[c] - rh * gq[c]) / det;
            let dc = (gq[b] * rh - gh[b] * rq) / det;
            p[b] -= db;
            p[c] -= dc;
            if !p[b].is_finite() || !p[c].is_finite() {
                return None;
            }
        }
        let (rq, rh) = self.residual(p);
        (rq.abs().max(rh.abs()) <= tol && self.inside(p)).then_some(p)
    }
}

/// Traces every branch of `zero(qbar) ∩ zero(h)` inside `opts.bounds`.
/// Branches are returned in order of their seed point; the output depends
/// only on the inputs and `opts`.
pub fn generic_char_trace(qbar: &Quadric, h: &Quadric, opts: &TraceOptions) -> Result<Vec<SampledCurve>> {
    if qbar.is_zero() || h.is_zero() {
        return Err(Error::InvalidParameter("zero quadric".into()));
    }
    let [lo, hi] = opts.bounds;
    let span = (0..3).map(|i| hi[i] - lo[i]).fold(0.0, f64::max);
    if !(span > 0.0) {
        return Err(Error::InvalidParameter("empty bounds".into()));
    }
    let tracer = Tracer {
        q: qbar.to_f64().normalized(),
        h: h.to_f64().normalized(),
        opts: opts.clone(),
        h_max: 0.01 * span,
        h_min: 1e-10 * span,
    };

    let quantum = 1e-7 * span;
    let mut keys = BTreeSet::new();
    let mut seeds = Vec::new();
    for s in tracer.seeds() {
        let key = s.map(|v| (v / quantum).round() as i64);
        if keys.insert(key) {
            seeds.push(s);
        }
    }
    if seeds.is_empty() {
        return Err(Error::NoIntersectionFound);
    }
    seeds.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2])));

    let cover = 1e-4 * span;
    let mut branches: Vec<SampledCurve> = Vec::new();
    for s in seeds {
        if branches.iter().any(|b| b.polyline_distance(s) <= cover) {
            continue;
        }
        branches.push(tracer.branch(s));
    }
    Ok(branches)
}
