//! Characteristic curves `χ_t = g_t(zero(f̄) ∩ zero(h))`, where `h` is the
//! derivative surface at `t`: exact rational curves for moving cones,
//! circles for moving spheres, and a numerical tracer for the general
//! quadric/quadric case.

mod bezier;
mod cone;
mod sphere;
mod trace;

pub use bezier::{curve_to_bezier, RationalBezier};
pub use cone::{cone_char_param, cone_rulings, ConeDerivativeSurface, Rulings};
pub use sphere::{sphere_char_circle, Circle, SphereSection};
pub use trace::{generic_char_trace, BranchEnd, SampledCurve, TraceOptions};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, to_f64, Rational};
use crate::group::{GroupElement, Point3};
use crate::motion::RationalMotion;
use crate::quadric::{Quadric, QuadricFamily};
use crate::rational_fn::RationalFunction;
use crate::poly::Polynomial;
use crate::tangent::dphi1;

/// `h = dφ₁(g_{t0}⁻¹ g'(t0))`. The characteristic at `t0` is
/// `g_{t0}(zero(qbar) ∩ zero(h))`.
pub fn derivative_surface(qbar: &Quadric, m: &RationalMotion, t0: &Rational) -> Result<Quadric> {
    let bv = m.body_velocity(t0)?;
    let h = dphi1(qbar, &bv);
    if h.is_zero() {
        return Err(Error::StationaryInstant(format_rational(t0)));
    }
    Ok(h)
}

/// Derivative surface of the scaled system `λ(t)·f(·, t)`, computed from the
/// scaled pullback family: `∂(λ f)/∂t (g_{t0} x, t0)`.
pub fn derivative_surface_scaled(
    qbar: &Quadric,
    m: &RationalMotion,
    lambda: &RationalFunction,
    t0: &Rational,
) -> Result<Quadric> {
    let g = m.eval(t0)?;
    let fam = QuadricFamily::pullback_motion(qbar, m).scale_fn(lambda).derivative();
    let h = fam.at(t0)?.pullback(&g.inverse());
    if h.is_zero() {
        return Err(Error::StationaryInstant(format_rational(t0)));
    }
    Ok(h)
}

/// Homogeneous rational curve `u ↦ (X : Y : Z : W)`, stored with the common
/// polynomial factor removed and scaled so that the first nonzero of
/// `W, X, Y, Z` is monic. Equal curves up to scale compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogRationalCurve {
    // (X, Y, Z, W)
    c: [Polynomial; 4],
}

impl HomogRationalCurve {
    pub fn new(w: Polynomial, x: Polynomial, y: Polynomial, z: Polynomial) -> Result<Self> {
        let c = [x, y, z, w];
        if c.iter().all(|p| p.is_zero()) {
            return Err(Error::InvalidParameter("all curve components vanish".into()));
        }
        let g = c.iter().fold(Polynomial::zero(), |g, p| Polynomial::gcd(&g, p));
        let mut c = if g.is_one() {
            c
        } else {
            c.map(|p| p.div_exact(&g).expect("gcd divides"))
        };
        let lead = [3, 0, 1, 2]
            .iter()
            .map(|&i| &c[i])
            .find(|p| !p.is_zero())
            .map(|p| p.leading())
            .expect("nonzero component");
        if !lead.is_one() {
            let inv = lead.recip();
            c = c.map(|p| p.scale(&inv));
        }
        Ok(HomogRationalCurve { c })
    }

    pub fn w(&self) -> &Polynomial {
        &self.c[3]
    }
    pub fn x(&self) -> &Polynomial {
        &self.c[0]
    }
    pub fn y(&self) -> &Polynomial {
        &self.c[1]
    }
    pub fn z(&self) -> &Polynomial {
        &self.c[2]
    }

    /// Components in homogeneous order `(X, Y, Z, W)`.
    pub fn components(&self) -> &[Polynomial; 4] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn eval_homogeneous(&self, u: &Rational) -> [Rational; 4] {
        std::array::from_fn(|i| self.c[i].eval(u))
    }

    /// Affine point, `None` where `W(u) = 0`.
    pub fn eval(&self, u: &Rational) -> Option<Point3> {
        let [x, y, z, w] = self.eval_homogeneous(u);
        if w.is_zero() {
            return None;
        }
        Some([x / &w, y / &w, z / &w])
    }

    pub fn eval_f64(&self, u: f64) -> [f64; 3] {
        let w = self.c[3].eval_f64(u);
        std::array::from_fn(|i| self.c[i].eval_f64(u) / w)
    }

    /// Homogeneous coordinates multiplied by the matrix of `g`.
    pub fn map(&self, g: &GroupElement) -> HomogRationalCurve {
        let m = g.matrix();
        let c: [Polynomial; 4] = std::array::from_fn(|i| {
            (0..4).fold(Polynomial::zero(), |acc, j| &acc + &self.c[j].scale(&m.0[i][j]))
        });
        let [x, y, z, w] = c;
        HomogRationalCurve::new(w, x, y, z).expect("regular map keeps the curve nonzero")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "W": self.w().to_strings(),
            "X": self.x().to_strings(),
            "Y": self.y().to_strings(),
            "Z": self.z().to_strings(),
        })
    }
}

/// Curves that can be moved by a group element.
pub trait MapCurve {
    fn map_by(&self, g: &GroupElement) -> Self;
}

impl MapCurve for HomogRationalCurve {
    fn map_by(&self, g: &GroupElement) -> Self {
        self.map(g)
    }
}

impl MapCurve for SampledCurve {
    fn map_by(&self, g: &GroupElement) -> Self {
        self.map(g)
    }
}

/// `g(c)`: exact for rational curves, pointwise for sampled ones.
pub fn map_curve<C: MapCurve>(c: &C, g: &GroupElement) -> C {
    c.map_by(g)
}

pub(crate) fn point_f64(p: &Point3) -> [f64; 3] {
    [to_f64(&p[0]), to_f64(&p[1]), to_f64(&p[2])]
}
