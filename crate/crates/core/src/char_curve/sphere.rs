use num_traits::{One, Signed, Zero};

use super::{point_f64, HomogRationalCurve};
use crate::error::{Error, Result};
use crate::exact::{int, rational_sqrt, to_f64, Rational};
use crate::group::Point3;
use crate::poly::Polynomial;
use crate::quadric::Quadric;

/// Intersection of the unit sphere with a plane.
#[derive(Clone, Debug, PartialEq)]
pub enum SphereSection {
    Circle(Circle),
    /// Tangent plane.
    Point(Point3),
    Empty,
}

/// Circle `c + ρ(e₁(1−u²)/(1+u²) + e₂·2u/(1+u²))` in the plane `n·x + d = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Point3,
    /// Plane normal, scaled so that its first nonzero entry is 1.
    pub normal: [Rational; 3],
    pub radius_sq: Rational,
    /// Present when the circle has a rational parameterization with
    /// rational coefficients in the orthonormal frame below.
    pub exact: Option<HomogRationalCurve>,
    frame: [[f64; 3]; 2],
}

impl Circle {
    pub fn radius(&self) -> f64 {
        to_f64(&self.radius_sq).sqrt()
    }

    pub fn frame(&self) -> [[f64; 3]; 2] {
        self.frame
    }

    pub fn eval_f64(&self, u: f64) -> [f64; 3] {
        if let Some(c) = &self.exact {
            return c.eval_f64(u);
        }
        let c = point_f64(&self.center);
        let rho = self.radius();
        let s = 1.0 + u * u;
        let (a, b) = ((1.0 - u * u) / s, 2.0 * u / s);
        std::array::from_fn(|i| c[i] + rho * (a * self.frame[0][i] + b * self.frame[1][i]))
    }
}

/// Householder reflection sending `e_z` to the unit vector `n`; columns 0
/// and 1 span the plane orthogonal to `n`.
fn householder<T>(n: [T; 3], one: T, zero: T) -> [[T; 3]; 3]
where
    T: Clone
        + PartialEq
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Add<Output = T>
        + std::ops::Div<Output = T>,
{
    let v = [zero.clone() - n[0].clone(), zero.clone() - n[1].clone(), one.clone() - n[2].clone()];
    let vv = v[0].clone() * v[0].clone() + v[1].clone() * v[1].clone() + v[2].clone() * v[2].clone();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j { one.clone() } else { zero.clone() };
            if vv == zero {
                id
            } else {
                let two = one.clone() + one.clone();
                id - two * v[i].clone() * v[j].clone() / vv.clone()
            }
        })
    })
}

/// Section of the unit sphere by the derivative surface `h`. A quadratic `h`
/// is first reduced modulo the sphere; it must then be affine-linear.
pub fn sphere_char_circle(h: &Quadric) -> Result<SphereSection> {
    let sphere = Quadric::unit_sphere();
    let h = if h.is_affine_linear() { h.clone() } else { h.reduce_modulo(&sphere).0 };
    if !h.is_affine_linear() {
        return Err(Error::InvalidParameter("derivative surface is not a plane modulo the sphere".into()));
    }
    let c = h.coeffs();
    let (mut n, mut d) = ([c[6].clone(), c[7].clone(), c[8].clone()], c[9].clone());
    let Some(lead) = n.iter().find(|v| !v.is_zero()).cloned() else {
        if d.is_zero() {
            return Err(Error::InvalidParameter("zero derivative surface".into()));
        }
        return Ok(SphereSection::Empty);
    };
    n = n.map(|v| v / &lead);
    d /= &lead;
    let n2 = &n[0] * &n[0] + &n[1] * &n[1] + &n[2] * &n[2];
    let center: Point3 = std::array::from_fn(|i| -(&d * &n[i]) / &n2);
    let radius_sq = int(1) - &d * &d / &n2;
    if radius_sq.is_negative() {
        return Ok(SphereSection::Empty);
    }
    if radius_sq.is_zero() {
        return Ok(SphereSection::Point(center));
    }

    let nf = {
        let v = n.clone().map(|x| to_f64(&x));
        let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|x| x / l)
    };
    let hf = householder(nf, 1.0, 0.0);
    let frame = [0, 1].map(|j| std::array::from_fn(|i| hf[i][j]));

    let exact = match (rational_sqrt(&n2), rational_sqrt(&radius_sq)) {
        (Some(len), Some(rho)) => {
            let unit = n.clone().map(|x| x / &len);
            let hq = householder(unit, Rational::one(), Rational::zero());
            let u2p1 = Polynomial::from_ints(&[1, 0, 1]);
            let cos = Polynomial::from_ints(&[1, 0, -1]).scale(&rho);
            let sin = Polynomial::from_ints(&[0, 2]).scale(&rho);
            let comp = |i: usize| {
                &(&u2p1.scale(&center[i]) + &cos.scale(&hq[i][0])) + &sin.scale(&hq[i][1])
            };
            Some(HomogRationalCurve::new(u2p1.clone(), comp(0), comp(1), comp(2))?)
        }
        _ => None,
    };
    Ok(SphereSection::Circle(Circle {
        center,
        normal: n,
        radius_sq,
        exact,
        frame,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn plane(a: i64, b: i64, c: i64, d: i64) -> Quadric {
        Quadric::from_ints([0, 0, 0, 0, 0, 0, a, b, c, d]).unwrap()
    }

    #[test]
    fn plane_sections() {
        let SphereSection::Circle(c) = sphere_char_circle(&plane(0, 0, 1, 0)).unwrap() else {
            panic!("expected circle")
        };
        let e = c.exact.as_ref().unwrap();
        assert_eq!(e.w(), &Polynomial::from_ints(&[1, 0, 1]));
        assert_eq!(e.x(), &Polynomial::from_ints(&[1, 0, -1]));
        assert_eq!(e.y(), &Polynomial::from_ints(&[0, 2]));
        assert!(e.z().is_zero());

        assert_eq!(
            sphere_char_circle(&plane(0, 0, 1, -1)).unwrap(),
            SphereSection::Point([int(0), int(0), int(1)])
        );
        assert_eq!(sphere_char_circle(&plane(0, 0, 1, -2)).unwrap(), SphereSection::Empty);
    }

    #[test]
    fn oblique_planes() {
        // normal (2, 3, 6) has length 7; offset chosen so the radius is 3/5
        let h = Quadric::from_coeffs_or_zero(
            [0, 0, 0, 0, 0, 0, 2, 3, 6].map(int).into_iter().chain([rat(-28, 5)]).collect::<Vec<_>>()
                .try_into()
                .unwrap(),
        );
        let SphereSection::Circle(c) = sphere_char_circle(&h).unwrap() else { panic!() };
        assert_eq!(c.radius_sq, rat(9, 25));
        let e = c.exact.clone().unwrap();
        let s = Quadric::unit_sphere();
        for u in [rat(0, 1), rat(2, 3), rat(-9, 4)] {
            let p = e.eval(&u).unwrap();
            assert!(s.eval(&p).is_zero());
            assert!(h.eval(&p).is_zero());
            let pf = c.eval_f64(to_f64(&u));
            let q = point_f64(&p);
            assert!((0..3).all(|i| (pf[i] - q[i]).abs() < 1e-14));
        }

        // irrational radius: float circle
        let SphereSection::Circle(c) = sphere_char_circle(&plane(1, 1, 0, -1)).unwrap() else { panic!() };
        assert!(c.exact.is_none());
        for u in [-3.0, 0.0, 0.4, 10.0] {
            let p = c.eval_f64(u);
            assert!((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0).abs() < 1e-14);
            assert!((p[0] + p[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic_h_is_reduced() {
        // expansion plus translation: −2s(x²+y²+z²) − 2x
        let h = Quadric::from_ints([-1, -1, -1, 0, 0, 0, -2, 0, 0, 0]).unwrap();
        let SphereSection::Circle(c) = sphere_char_circle(&h).unwrap() else { panic!() };
        assert_eq!(c.center, [rat(-1, 2), int(0), int(0)]);
        assert_eq!(c.radius_sq, rat(3, 4));
        let bad = Quadric::from_ints([1, 0, 0, 0, 0, 0, 0, 0, 0, -1]).unwrap();
        assert!(sphere_char_circle(&bad).is_err());
    }
}
