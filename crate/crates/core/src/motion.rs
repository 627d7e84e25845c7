//! Rational motions `t ↦ g_t` and their body velocity `g(t)⁻¹·g'(t)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Mat4, Rational};
use crate::group::{
    algebra_violation, group_violation, inverse_affine, AlgebraElement, GroupElement, GroupTag,
};
use crate::poly::Polynomial;
use crate::rational_fn::RationalFunction;

/// A curve in SE(3) or Aff(3) whose entries are rational functions of `t`
/// on a closed domain `[t_lo, t_hi]`.
#[derive(Debug)]
pub struct RationalMotion {
    entries: Mat4<RationalFunction>,
    domain: (Rational, Rational),
    tag: GroupTag,
    body_velocity: OnceLock<Mat4<RationalFunction>>,
}

impl Clone for RationalMotion {
    fn clone(&self) -> Self {
        RationalMotion {
            entries: self.entries.clone(),
            domain: self.domain.clone(),
            tag: self.tag,
            body_velocity: self.body_velocity.clone(),
        }
    }
}

impl PartialEq for RationalMotion {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.domain == other.domain && self.tag == other.tag
    }
}

impl RationalMotion {
    pub fn new(entries: Mat4<RationalFunction>, domain: (Rational, Rational), tag: GroupTag) -> Result<Self> {
        let (lo, hi) = &domain;
        if lo > hi {
            return Err(Error::InvalidMotion("empty domain".into()));
        }
        if let Some(why) = group_violation(&entries, tag) {
            return Err(Error::InvalidMotion(why));
        }
        for (i, row) in entries.0.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.den().count_roots_in(lo, hi) > 0 {
                    return Err(Error::InvalidMotion(format!(
                        "entry ({}, {}) has a pole in [{}, {}]",
                        i + 1,
                        j + 1,
                        format_rational(lo),
                        format_rational(hi)
                    )));
                }
            }
        }
        if tag == GroupTag::Aff3 && entries.det3().num().count_roots_in(lo, hi) > 0 {
            return Err(Error::InvalidMotion("linear block is singular inside the domain".into()));
        }
        Ok(RationalMotion {
            entries,
            domain,
            tag,
            body_velocity: OnceLock::new(),
        })
    }

    pub fn constant(g: &GroupElement, domain: (Rational, Rational)) -> Result<Self> {
        Self::new(g.matrix().map(|c| RationalFunction::constant(c.clone())), domain, g.tag())
    }

    /// Pure translation `t ↦ transl(p(t))`.
    pub fn translation(p: [RationalFunction; 3], domain: (Rational, Rational), tag: GroupTag) -> Result<Self> {
        let mut m = Mat4::identity();
        for (i, pi) in p.into_iter().enumerate() {
            m.0[i][3] = pi;
        }
        Self::new(m, domain, tag)
    }

    /// Rotation from a polynomial quaternion `(w, x, y, z)` (exact, rational
    /// in `t`) followed by translation `p(t)`.
    pub fn from_quaternion(
        q: [Polynomial; 4],
        p: [RationalFunction; 3],
        domain: (Rational, Rational),
    ) -> Result<Self> {
        let [w, x, y, z] = q;
        let sq = |a: &Polynomial| a * a;
        let two = |a: Polynomial| a.scale(&Rational::from_integer(2.into()));
        let norm = &(&sq(&w) + &sq(&x)) + &(&sq(&y) + &sq(&z));
        let rows: [[Polynomial; 3]; 3] = [
            [
                &(&sq(&w) + &sq(&x)) - &(&sq(&y) + &sq(&z)),
                two(&(&x * &y) - &(&w * &z)),
                two(&(&x * &z) + &(&w * &y)),
            ],
            [
                two(&(&x * &y) + &(&w * &z)),
                &(&sq(&w) - &sq(&x)) + &(&sq(&y) - &sq(&z)),
                two(&(&y * &z) - &(&w * &x)),
            ],
            [
                two(&(&x * &z) - &(&w * &y)),
                two(&(&y * &z) + &(&w * &x)),
                &(&sq(&w) - &sq(&x)) - &(&sq(&y) - &sq(&z)),
            ],
        ];
        let mut m = Mat4::identity();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = RationalFunction::new(rows[i][j].clone(), norm.clone())?;
            }
        }
        for (i, pi) in p.into_iter().enumerate() {
            m.0[i][3] = pi;
        }
        Self::new(m, domain, GroupTag::SE3)
    }

    pub fn entries(&self) -> &Mat4<RationalFunction> {
        &self.entries
    }

    pub fn domain(&self) -> &(Rational, Rational) {
        &self.domain
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.domain.0 <= t && t <= &self.domain.1
    }

    fn check_domain(&self, t0: &Rational) -> Result<()> {
        if !self.contains(t0) {
            return Err(Error::OutOfDomain(format_rational(t0)));
        }
        Ok(())
    }

    pub fn eval(&self, t0: &Rational) -> Result<GroupElement> {
        self.check_domain(t0)?;
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.entries.0[i][j].eval(t0)?;
            }
        }
        GroupElement::new(m, self.tag)
    }

    /// Entry-wise symbolic derivative `g'(t)`.
    pub fn derivative(&self) -> Mat4<RationalFunction> {
        self.entries.map(|e| e.derivative())
    }

    /// `g(t)⁻¹` as a matrix of rational functions.
    pub fn inverse_fn(&self) -> Mat4<RationalFunction> {
        inverse_affine(&self.entries, self.tag, |d| {
            d.recip().expect("determinant is nonzero on a valid motion")
        })
    }

    /// `t ↦ g(t)⁻¹·g'(t)`, computed once.
    pub fn body_velocity_fn(&self) -> &Mat4<RationalFunction> {
        self.body_velocity
            .get_or_init(|| self.inverse_fn().mul(&self.derivative()))
    }

    pub fn body_velocity(&self, t0: &Rational) -> Result<AlgebraElement> {
        self.check_domain(t0)?;
        let bv = self.body_velocity_fn();
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = bv.0[i][j].eval(t0)?;
            }
        }
        AlgebraElement::new(m, self.tag).map_err(|e| {
            Error::InvalidMotion(format!("body velocity at t = {}: {e}", format_rational(t0)))
        })
    }

    /// Checks the algebra invariants of the body velocity as identities in `t`.
    pub fn body_velocity_is_algebra_valued(&self) -> bool {
        algebra_violation(self.body_velocity_fn(), self.tag).is_none()
    }

    /// `t ↦ h·g_t` for a constant `h`.
    pub fn pre_compose(&self, h: &GroupElement) -> Result<Self> {
        if h.tag() != self.tag {
            return Err(Error::TagMismatch(format!("{:?} vs {:?}", h.tag(), self.tag)));
        }
        let hm = h.matrix().map(|c| RationalFunction::constant(c.clone()));
        Self::new(hm.mul(&self.entries), self.domain.clone(), self.tag)
    }

    /// `t ↦ g_t·h` for a constant `h`.
    pub fn post_compose(&self, h: &GroupElement) -> Result<Self> {
        if h.tag() != self.tag {
            return Err(Error::TagMismatch(format!("{:?} vs {:?}", h.tag(), self.tag)));
        }
        let hm = h.matrix().map(|c| RationalFunction::constant(c.clone()));
        Self::new(self.entries.mul(&hm), self.domain.clone(), self.tag)
    }

    /// Uniform rational grid of `n ≥ 2` parameters spanning the domain.
    pub fn uniform_grid(&self, n: usize) -> Vec<Rational> {
        let (lo, hi) = &self.domain;
        let n = n.max(2);
        (0..n)
            .map(|i| {
                lo + (hi - lo) * Rational::new((i as i64).into(), ((n - 1) as i64).into())
            })
            .collect()
    }

    pub fn is_identity_constant(&self) -> bool {
        self.entries == Mat4::identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num_traits::Zero;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den)).unwrap()
    }

    fn unit_domain() -> (Rational, Rational) {
        (int(0), int(1))
    }

    #[test]
    fn constant_identity_motion() {
        let m = RationalMotion::constant(&GroupElement::identity(GroupTag::SE3), unit_domain()).unwrap();
        assert_eq!(m.eval(&rat(1, 3)).unwrap(), GroupElement::identity(GroupTag::SE3));
        assert!(m.body_velocity(&rat(1, 3)).unwrap().is_zero());
    }

    #[test]
    fn translation_motion() {
        let m = RationalMotion::translation(
            [rf(&[0, 1], &[1]), rf(&[0, 2], &[1]), rf(&[0, 3], &[1])],
            unit_domain(),
            GroupTag::SE3,
        )
        .unwrap();
        let g = m.eval(&int(1)).unwrap();
        assert_eq!(g, GroupElement::translation(&[int(1), int(2), int(3)], GroupTag::SE3));
        let bv = m.body_velocity(&rat(1, 2)).unwrap();
        let expect = {
            let b = crate::group::se3_basis();
            AlgebraElement::combination(&[int(0), int(0), int(0), int(1), int(2), int(3)], &b)
        };
        assert_eq!(bv, expect);
    }

    #[test]
    fn out_of_domain() {
        let m = RationalMotion::constant(&GroupElement::identity(GroupTag::SE3), unit_domain()).unwrap();
        assert!(matches!(m.eval(&int(2)), Err(Error::OutOfDomain(_))));
        assert!(matches!(m.body_velocity(&int(-1)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn rejects_poles_and_non_rigid() {
        let bad = RationalMotion::translation(
            [rf(&[1], &[-1, 2]), RationalFunction::zero(), RationalFunction::zero()],
            unit_domain(),
            GroupTag::SE3,
        );
        assert!(matches!(bad, Err(Error::InvalidMotion(_))));
        // pole outside the domain is fine
        assert!(RationalMotion::translation(
            [rf(&[1], &[-3, 2]), RationalFunction::zero(), RationalFunction::zero()],
            unit_domain(),
            GroupTag::SE3,
        )
        .is_ok());
        let mut shear = Mat4::<RationalFunction>::identity();
        shear.0[0][1] = RationalFunction::t();
        assert!(RationalMotion::new(shear.clone(), unit_domain(), GroupTag::SE3).is_err());
        assert!(RationalMotion::new(shear, unit_domain(), GroupTag::Aff3).is_ok());
        let mut collapse = Mat4::<RationalFunction>::identity();
        collapse.0[0][0] = rf(&[-1, 2], &[1]);
        assert!(RationalMotion::new(collapse, unit_domain(), GroupTag::Aff3).is_err());
    }

    #[test]
    fn quaternion_motion_is_rigid() {
        let q = [
            Polynomial::from_ints(&[1, 2]),
            Polynomial::from_ints(&[0, 1, 1]),
            Polynomial::from_ints(&[3]),
            Polynomial::from_ints(&[-1, 0, 2]),
        ];
        let m = RationalMotion::from_quaternion(
            q,
            [rf(&[1, 1], &[1]), rf(&[0, 0, 1], &[1]), RationalFunction::zero()],
            (int(-2), int(2)),
        )
        .unwrap();
        assert!(m.body_velocity_is_algebra_valued());
        let g = m.eval(&rat(3, 7)).unwrap();
        assert_eq!(g.compose(&g.inverse()).unwrap(), GroupElement::identity(GroupTag::SE3));
    }
}
