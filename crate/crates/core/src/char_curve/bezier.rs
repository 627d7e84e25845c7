use num_traits::{Signed, Zero};

use super::HomogRationalCurve;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, Rational};
use crate::group::Point3;

/// Rational Bézier curve on `s ∈ [0, 1]`, stored as homogeneous control
/// points `(w·P, w)`. Parameter `s` corresponds to `u = lo + (hi − lo)s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBezier {
    pub homogeneous: Vec<[Rational; 4]>,
    pub interval: (Rational, Rational),
}

fn binom(n: usize, k: usize) -> Rational {
    let mut r = int(1);
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

impl RationalBezier {
    pub fn degree(&self) -> usize {
        self.homogeneous.len() - 1
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.homogeneous.iter().map(|h| h[3].clone()).collect()
    }

    /// Affine control points; `None` where the weight is zero.
    pub fn control_points(&self) -> Vec<Option<Point3>> {
        self.homogeneous
            .iter()
            .map(|h| (!h[3].is_zero()).then(|| std::array::from_fn(|i| &h[i] / &h[3])))
            .collect()
    }

    /// de Casteljau evaluation in homogeneous coordinates.
    pub fn eval_homogeneous(&self, s: &Rational) -> [Rational; 4] {
        let one_minus = int(1) - s;
        let mut b = self.homogeneous.clone();
        let n = b.len();
        for r in 1..n {
            for i in 0..n - r {
                b[i] = std::array::from_fn(|k| &b[i][k] * &one_minus + &b[i + 1][k] * s);
            }
        }
        b.swap_remove(0)
    }

    pub fn eval(&self, s: &Rational) -> Option<Point3> {
        let h = self.eval_homogeneous(s);
        (!h[3].is_zero()).then(|| std::array::from_fn(|i| &h[i] / &h[3]))
    }

    /// Evaluation at the original curve parameter `u`.
    pub fn eval_u(&self, u: &Rational) -> Option<Point3> {
        let (lo, hi) = &self.interval;
        self.eval(&((u - lo) / (hi - lo)))
    }

    /// Degree elevation to `target ≥ degree`.
    pub fn elevate(&self, target: usize) -> RationalBezier {
        let mut b = self.homogeneous.clone();
        while b.len() - 1 < target {
            let n = b.len() - 1;
            let m = int((n + 1) as i64);
            let mut next = Vec::with_capacity(n + 2);
            for i in 0..=n + 1 {
                let a = int(i as i64) / &m;
                let c: [Rational; 4] = std::array::from_fn(|k| {
                    let left = if i > 0 { &b[i - 1][k] * &a } else { int(0) };
                    let right = if i <= n { &b[i][k] * (int(1) - &a) } else { int(0) };
                    left + right
                });
                next.push(c);
            }
            b = next;
        }
        RationalBezier {
            homogeneous: b,
            interval: self.interval.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pts: Vec<_> = self
            .control_points()
            .into_iter()
            .map(|p| p.map(|p| p.iter().map(format_rational).collect::<Vec<_>>()))
            .collect();
        serde_json::json!({
            "interval": [format_rational(&self.interval.0), format_rational(&self.interval.1)],
            "degree": self.degree(),
            "weights": self.weights().iter().map(format_rational).collect::<Vec<_>>(),
            "control_points": pts,
        })
    }
}

/// Bernstein form of the curve restricted to `[lo, hi]`, at the curve's own
/// degree. Weights are made nonnegative when their signs agree.
pub fn curve_to_bezier(c: &HomogRationalCurve, lo: &Rational, hi: &Rational) -> Result<RationalBezier> {
    if lo >= hi {
        return Err(Error::InvalidParameter("empty parameter interval".into()));
    }
    if c.w().count_roots_in(lo, hi) > 0 {
        return Err(Error::PoleInInterval);
    }
    let n = c.degree();
    let width = hi - lo;
    let mono: Vec<Vec<Rational>> =
        c.components().iter().map(|p| (0..=n).map(|i| p.compose_affine(lo, &width).coeff(i)).collect()).collect();
    let mut homogeneous: Vec<[Rational; 4]> = (0..=n)
        .map(|k| {
            std::array::from_fn(|comp| {
                (0..=k).fold(int(0), |acc, i| acc + binom(k, i) / binom(n, i) * &mono[comp][i])
            })
        })
        .collect();
    if homogeneous.iter().all(|h| !h[3].is_positive()) {
        for h in homogeneous.iter_mut() {
            *h = std::array::from_fn(|k| -h[k].clone());
        }
    }
    Ok(RationalBezier {
        homogeneous,
        interval: (lo.clone(), hi.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_curve::{cone_char_param, ConeDerivativeSurface};
    use crate::exact::rat;
    use crate::poly::Polynomial;

    #[test]
    fn circle_arc() {
        let c = HomogRationalCurve::new(
            Polynomial::from_ints(&[1, 0, 1]),
            Polynomial::from_ints(&[1, 0, -1]),
            Polynomial::from_ints(&[0, 2]),
            Polynomial::zero(),
        )
        .unwrap();
        let b = curve_to_bezier(&c, &int(0), &int(1)).unwrap();
        assert_eq!(b.weights(), vec![int(1), int(1), int(2)]);
        let pts: Vec<Point3> = b.control_points().into_iter().map(Option::unwrap).collect();
        assert_eq!(
            pts,
            vec![[int(1), int(0), int(0)], [int(1), int(1), int(0)], [int(0), int(1), int(0)]]
        );
        let e = b.elevate(4);
        assert_eq!(e.degree(), 4);
        for s in [rat(1, 3), rat(4, 5)] {
            assert_eq!(e.eval(&s), b.eval(&s));
        }
    }

    #[test]
    fn constant_curve_and_poles() {
        let c = HomogRationalCurve::new(
            Polynomial::from_ints(&[3]),
            Polynomial::from_ints(&[1]),
            Polynomial::from_ints(&[2]),
            Polynomial::from_ints(&[-6]),
        )
        .unwrap();
        let b = curve_to_bezier(&c, &int(-1), &int(2)).unwrap().elevate(4);
        let pts = b.control_points();
        assert!(pts.iter().all(|p| *p == pts[0]));

        let d = ConeDerivativeSurface::new([0, 0, 1, 1, 0].map(int), rat(1, 5)).unwrap();
        let cone = cone_char_param(&d).unwrap();
        assert_eq!(curve_to_bezier(&cone, &int(0), &int(2)), Err(Error::PoleInInterval));
        let b = curve_to_bezier(&cone, &rat(-1, 2), &rat(1, 2)).unwrap();
        for i in 1..=10 {
            let u = rat(-1, 2) + rat(i, 11);
            assert_eq!(b.eval_u(&u), cone.eval(&u));
        }
    }
}
