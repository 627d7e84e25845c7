use num_traits::{Signed, Zero};

use super::HomogRationalCurve;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, to_f64, Rational};
use crate::poly::Polynomial;
use crate::quadric::Quadric;

/// `h = k₁x + k₂y + k₃z + k₄xz + k₅yz` on the cone `x² + y² − r² z² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDerivativeSurface {
    k: [Rational; 5],
    r: Rational,
}

impl ConeDerivativeSurface {
    pub fn new(k: [Rational; 5], r: Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidParameter(format!("cone radius {} must be positive", format_rational(&r))));
        }
        if k.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidParameter("zero derivative surface".into()));
        }
        Ok(ConeDerivativeSurface { k, r })
    }

    /// Reads `k` from a derivative surface; every coefficient outside
    /// `{x, y, z, xz, yz}` must vanish.
    pub fn from_quadric(h: &Quadric, r: &Rational) -> Result<Self> {
        let c = h.coeffs();
        for i in [0, 1, 2, 3, 9] {
            if !c[i].is_zero() {
                return Err(Error::NotInImageSpan(format!(
                    "coefficient of {} is {}",
                    crate::quadric::BASIS[i],
                    format_rational(&c[i])
                )));
            }
        }
        Self::new(
            [c[6].clone(), c[7].clone(), c[8].clone(), c[4].clone(), c[5].clone()],
            r.clone(),
        )
    }

    pub fn k(&self) -> &[Rational; 5] {
        &self.k
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn to_quadric(&self) -> Quadric {
        let z = int(0);
        let k = &self.k;
        Quadric::from_coeffs_or_zero([
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            k[3].clone(),
            k[4].clone(),
            k[0].clone(),
            k[1].clone(),
            k[2].clone(),
            z,
        ])
    }

    /// `N(u) = k₁ r u² − 2k₂ r u − k₁ r + k₃ u² + k₃`.
    pub fn n_poly(&self) -> Polynomial {
        let [k1, k2, k3, _, _] = &self.k;
        let r = &self.r;
        Polynomial::new(vec![k3 - k1 * r, -(k2 * r) * int(2), k1 * r + k3])
    }

    /// `D(u) = k₄ u² − 2k₅ u − k₄`.
    pub fn d_poly(&self) -> Polynomial {
        let [_, _, _, k4, k5] = &self.k;
        Polynomial::new(vec![-k4.clone(), -(k5 * int(2)), k4.clone()])
    }

    pub fn is_ruling_degenerate(&self) -> bool {
        self.k[..3].iter().all(|c| c.is_zero())
    }

    pub fn is_plane_degenerate(&self) -> bool {
        self.k[3].is_zero() && self.k[4].is_zero()
    }
}

/// Rational parameterization of `cone(r) ∩ zero(h)`:
/// `W = r(u²+1)D`, `X = −r(u²−1)N`, `Y = 2ruN`, `Z = −(u²+1)N`.
pub fn cone_char_param(d: &ConeDerivativeSurface) -> Result<HomogRationalCurve> {
    if d.is_plane_degenerate() {
        return Err(Error::PlaneDegenerate);
    }
    let n = d.n_poly();
    if n.is_zero() {
        return Err(Error::RulingDegenerate);
    }
    let r = d.r();
    let u2p1 = Polynomial::from_ints(&[1, 0, 1]);
    let u2m1 = Polynomial::from_ints(&[-1, 0, 1]);
    let w = (&u2p1 * &d.d_poly()).scale(r);
    let x = (&u2m1 * &n).scale(&-r.clone());
    let y = (&Polynomial::from_ints(&[0, 2]) * &n).scale(r);
    let z = -&(&u2p1 * &n);
    HomogRationalCurve::new(w, x, y, z)
}

/// Lines through the apex contained in both the cone and `zero(h)`, given
/// by direction vectors `(r cos θ, r sin θ, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rulings {
    pub directions: Vec<[f64; 3]>,
    /// The apex is the only common point.
    pub apex_only: bool,
}

/// Rulings for the degenerate cases of [`cone_char_param`]. A derivative
/// surface `z·(k₄x + k₅y)` contributes the plane `k₄x + k₅y = 0`; a plane
/// `k₁x + k₂y + k₃z = 0` contributes itself. Non-degenerate input yields no
/// lines.
pub fn cone_rulings(d: &ConeDerivativeSurface) -> Rulings {
    let k = d.k();
    let plane = if d.is_plane_degenerate() {
        [k[0].clone(), k[1].clone(), k[2].clone()]
    } else if d.is_ruling_degenerate() {
        [k[3].clone(), k[4].clone(), int(0)]
    } else {
        return Rulings {
            directions: vec![],
            apex_only: false,
        };
    };
    let directions = plane_rulings(&plane, d.r());
    Rulings {
        apex_only: directions.is_empty(),
        directions,
    }
}

/// With `cos θ = (1−w²)/(1+w²)`, `sin θ = 2w/(1+w²)` the plane condition is
/// `(k₃ − k₁r)w² + 2k₂r w + (k₁r + k₃) = 0`; `w = ∞` is `θ = π`.
fn plane_rulings(p: &[Rational; 3], r: &Rational) -> Vec<[f64; 3]> {
    let [k1, k2, k3] = p;
    let a = k3 - k1 * r;
    let b = k2 * r * int(2);
    let c = k1 * r + k3;
    let rf = to_f64(r);
    let dir = |w: f64| {
        let s = 1.0 + w * w;
        [rf * (1.0 - w * w) / s, rf * 2.0 * w / s, 1.0]
    };
    if a.is_zero() {
        let mut out = vec![];
        if !b.is_zero() {
            out.push(dir(to_f64(&(-c / &b))));
        }
        out.push([-rf, 0.0, 1.0]);
        return out;
    }
    let disc = &b * &b - &a * &c * int(4);
    if disc.is_negative() {
        return vec![];
    }
    let coeffs = Polynomial::new(vec![c, b, a]);
    coeffs.real_roots_quadratic_f64().into_iter().map(dir).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn surf(k: [i64; 5], r: Rational) -> ConeDerivativeSurface {
        ConeDerivativeSurface::new(k.map(int), r).unwrap()
    }

    fn residuals(c: &HomogRationalCurve, d: &ConeDerivativeSurface) -> (Polynomial, Polynomial) {
        let [x, y, z, w] = c.components().clone();
        let r2 = d.r() * d.r();
        let cone = &(&(&x * &x) + &(&y * &y)) - &(&z * &z).scale(&r2);
        let k = d.k();
        let h = [
            (&x * &w).scale(&k[0]),
            (&y * &w).scale(&k[1]),
            (&z * &w).scale(&k[2]),
            (&x * &z).scale(&k[3]),
            (&y * &z).scale(&k[4]),
        ]
        .iter()
        .fold(Polynomial::zero(), |a, b| &a + b);
        (cone, h)
    }

    #[test]
    fn worked_example() {
        let r = rat(1, 5);
        let d = surf([0, 0, 1, 1, 0], r.clone());
        let c = cone_char_param(&d).unwrap();
        for u in [rat(0, 1), rat(1, 2), rat(3, 1), rat(-7, 3)] {
            let den = &u * &u - int(1);
            let p = c.eval(&u).unwrap();
            assert_eq!(p[0], int(-1));
            assert_eq!(p[1], &u * int(2) / &den);
            assert_eq!(p[2], -(&u * &u + int(1)) / (&r * &den));
        }
        assert!(c.eval(&int(1)).is_none());
        let (a, b) = residuals(&c, &d);
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn degenerate_cases() {
        let r = rat(1, 3);
        assert_eq!(cone_char_param(&surf([0, 0, 0, 0, 1], r.clone())), Err(Error::RulingDegenerate));
        assert_eq!(cone_char_param(&surf([1, 0, 0, 0, 0], r.clone())), Err(Error::PlaneDegenerate));

        let close = |a: [f64; 3], b: [f64; 3]| (0..3).all(|i| (a[i] - b[i]).abs() < 1e-12);
        let rf = 1.0 / 3.0;
        let yz = cone_rulings(&surf([0, 0, 0, 0, 1], r.clone()));
        assert_eq!(yz.directions.len(), 2);
        assert!(yz.directions.iter().any(|&d| close(d, [rf, 0.0, 1.0])));
        assert!(yz.directions.iter().any(|&d| close(d, [-rf, 0.0, 1.0])));

        let z = cone_rulings(&surf([0, 0, 1, 0, 0], r.clone()));
        assert!(z.apex_only && z.directions.is_empty());

        let x = cone_rulings(&surf([1, 0, 0, 0, 0], r.clone()));
        assert_eq!(x.directions.len(), 2);
        assert!(x.directions.iter().any(|&d| close(d, [0.0, rf, 1.0])));
        assert!(x.directions.iter().any(|&d| close(d, [0.0, -rf, 1.0])));

        assert!(cone_rulings(&surf([0, 0, 1, 1, 0], r)).directions.is_empty());
    }

    #[test]
    fn span_check() {
        let h = Quadric::from_ints([0, 0, 0, 1, 0, 0, 0, 0, 1, 0]).unwrap();
        assert!(matches!(
            ConeDerivativeSurface::from_quadric(&h, &int(1)),
            Err(Error::NotInImageSpan(_))
        ));
        let d = surf([1, -2, 3, 4, 5], rat(2, 7));
        assert_eq!(ConeDerivativeSurface::from_quadric(&d.to_quadric(), d.r()).unwrap(), d);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn residual_identities(
            k in proptest::array::uniform5(small()),
            rn in 1i64..20, rd in 1i64..20,
        ) {
            prop_assume!(!(k[3].is_zero() && k[4].is_zero()));
            let Ok(d) = ConeDerivativeSurface::new(k, rat(rn, rd)) else { return Ok(()); };
            prop_assume!(!d.n_poly().is_zero());
            let c = cone_char_param(&d).unwrap();
            let (a, b) = residuals(&c, &d);
            prop_assert!(a.is_zero());
            prop_assert!(b.is_zero());
        }
    }
}
