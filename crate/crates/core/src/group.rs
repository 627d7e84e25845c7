//! Exact SE(3) and Aff(3) as 4×4 homogeneous matrices, and their Lie
//! algebras.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, Mat4, Rational, Ring};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    SE3,
    Aff3,
}

pub type Point3 = [Rational; 3];

/// Checks the group invariants on a matrix over any exact ring. For
/// rational functions these are identities in `t`.
pub(crate) fn group_violation<T: Ring>(m: &Mat4<T>, tag: GroupTag) -> Option<String> {
    let last = &m.0[3];
    if !(last[0].is_zero() && last[1].is_zero() && last[2].is_zero() && last[3].is_one()) {
        return Some("last row must be (0, 0, 0, 1)".into());
    }
    let det = m.det3();
    match tag {
        GroupTag::Aff3 => det.is_zero().then(|| "linear block is singular".into()),
        GroupTag::SE3 => {
            let mut rot = m.clone();
            for i in 0..4 {
                rot.0[i][3] = T::zero();
                rot.0[3][i] = T::zero();
            }
            let rtr = rot.transpose().mul(&rot);
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { T::one() } else { T::zero() };
                    if rtr.0[i][j] != expect {
                        return Some("rotation block is not orthogonal".into());
                    }
                }
            }
            (!det.is_one()).then(|| "rotation block has determinant != 1".into())
        }
    }
}

/// Element of SE(3) or Aff(3). Validated at construction.
#[derive(Clone, PartialEq, Debug)]
pub struct GroupElement {
    matrix: Mat4<Rational>,
    tag: GroupTag,
}

impl GroupElement {
    pub fn new(matrix: Mat4<Rational>, tag: GroupTag) -> Result<Self> {
        if let Some(why) = group_violation(&matrix, tag) {
            return Err(Error::InvalidGroupElement(why));
        }
        Ok(GroupElement { matrix, tag })
    }

    pub fn identity(tag: GroupTag) -> Self {
        GroupElement {
            matrix: Mat4::identity(),
            tag,
        }
    }

    pub fn translation(p: &Point3, tag: GroupTag) -> Self {
        let mut m = Mat4::identity();
        for i in 0..3 {
            m.0[i][3] = p[i].clone();
        }
        GroupElement { matrix: m, tag }
    }

    /// `(A, p)`: linear block `a` (row-major 3×3) and translation `p`.
    pub fn from_parts(a: &[[Rational; 3]; 3], p: &Point3, tag: GroupTag) -> Result<Self> {
        let m = Mat4::from_fn(|i, j| match (i, j) {
            (3, 3) => Rational::one(),
            (3, _) => Rational::zero(),
            (_, 3) => p[i].clone(),
            _ => a[i][j].clone(),
        });
        Self::new(m, tag)
    }

    pub fn matrix(&self) -> &Mat4<Rational> {
        &self.matrix
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    /// Same matrix, viewed in the larger group.
    pub fn as_aff3(&self) -> Self {
        GroupElement {
            matrix: self.matrix.clone(),
            tag: GroupTag::Aff3,
        }
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch(format!("{:?} vs {:?}", self.tag, other.tag)));
        }
        Ok(GroupElement {
            matrix: self.matrix.mul(&other.matrix),
            tag: self.tag,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            matrix: inverse_affine(&self.matrix, self.tag, |d| d.recip()),
            tag: self.tag,
        }
    }

    pub fn act_point(&self, p: &Point3) -> Point3 {
        let m = &self.matrix.0;
        std::array::from_fn(|i| {
            &m[i][0] * &p[0] + &m[i][1] * &p[1] + &m[i][2] * &p[2] + &m[i][3]
        })
    }

    pub fn act_point_f64(&self, p: [f64; 3]) -> [f64; 3] {
        let m = self.matrix.to_f64();
        std::array::from_fn(|i| m[i][0] * p[0] + m[i][1] * p[1] + m[i][2] * p[2] + m[i][3])
    }
}

/// Inverse of an affine 4×4 matrix with last row (0,0,0,1): `(A⁻¹, −A⁻¹p)`.
/// SE3 takes the transpose path.
pub(crate) fn inverse_affine<T: Ring>(
    m: &Mat4<T>,
    tag: GroupTag,
    recip: impl FnOnce(&T) -> T,
) -> Mat4<T> {
    let mut lin = match tag {
        GroupTag::SE3 => {
            let mut r = m.transpose();
            for i in 0..4 {
                r.0[i][3] = T::zero();
                r.0[3][i] = T::zero();
            }
            r
        }
        GroupTag::Aff3 => {
            let inv_det = recip(&m.det3());
            m.adjugate3().scale(&inv_det)
        }
    };
    finish_inverse(m, &mut lin);
    lin
}

pub(crate) fn finish_inverse<T: Ring>(m: &Mat4<T>, lin: &mut Mat4<T>) {
    let p: [T; 3] = std::array::from_fn(|i| m.0[i][3].clone());
    for i in 0..3 {
        let mut acc = T::zero();
        for (k, pk) in p.iter().enumerate() {
            acc = acc + lin.0[i][k].clone() * pk.clone();
        }
        lin.0[i][3] = -acc;
    }
    for j in 0..3 {
        lin.0[3][j] = T::zero();
    }
    lin.0[3][3] = T::one();
}

/// Element of the Lie algebra: last row zero; skew 3×3 block for se(3).
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraElement {
    matrix: Mat4<Rational>,
}

pub(crate) fn algebra_violation<T: Ring>(m: &Mat4<T>, tag: GroupTag) -> Option<String> {
    if !m.0[3].iter().all(|c| c.is_zero()) {
        return Some("last row must be zero".into());
    }
    if tag == GroupTag::SE3 {
        for i in 0..3 {
            for j in 0..=i {
                if m.0[i][j] != -m.0[j][i].clone() {
                    return Some("rotation block is not skew-symmetric".into());
                }
            }
        }
    }
    None
}

impl AlgebraElement {
    pub fn new(matrix: Mat4<Rational>, tag: GroupTag) -> Result<Self> {
        if let Some(why) = algebra_violation(&matrix, tag) {
            return Err(Error::InvalidAlgebraElement(why));
        }
        Ok(AlgebraElement { matrix })
    }

    pub fn zero() -> Self {
        AlgebraElement {
            matrix: Mat4::zero(),
        }
    }

    pub fn matrix(&self) -> &Mat4<Rational> {
        &self.matrix
    }

    pub fn is_skew(&self) -> bool {
        algebra_violation(&self.matrix, GroupTag::SE3).is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.0.iter().flatten().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        AlgebraElement {
            matrix: self.matrix.scale(s),
        }
    }

    /// Linear combination `Σ cᵢ·γᵢ`.
    pub fn combination(coeffs: &[Rational], basis: &[AlgebraElement]) -> Self {
        coeffs
            .iter()
            .zip(basis)
            .fold(Self::zero(), |acc, (c, g)| acc.add(&g.scale(c)))
    }
}

fn unit(entries: &[(usize, usize, i64)]) -> AlgebraElement {
    let mut m = Mat4::zero();
    for &(i, j, v) in entries {
        m.0[i][j] = int(v);
    }
    AlgebraElement { matrix: m }
}

/// γ₁..γ₆: rotations about x, y, z, then translations along x, y, z.
pub fn se3_basis() -> [AlgebraElement; 6] {
    [
        unit(&[(1, 2, -1), (2, 1, 1)]),
        unit(&[(0, 2, -1), (2, 0, 1)]),
        unit(&[(0, 1, -1), (1, 0, 1)]),
        unit(&[(0, 3, 1)]),
        unit(&[(1, 3, 1)]),
        unit(&[(2, 3, 1)]),
    ]
}

/// Generators of aff(3): the three translations, the three axis
/// expansions, then the six shears (s₁: (1,2), s₂: (1,3), s₃: (2,3),
/// s₄: (2,1), s₅: (3,1), s₆: (3,2), one-based).
pub fn aff3_generators() -> [AlgebraElement; 12] {
    let [_, _, _, t1, t2, t3] = se3_basis();
    [
        t1,
        t2,
        t3,
        unit(&[(0, 0, 1)]),
        unit(&[(1, 1, 1)]),
        unit(&[(2, 2, 1)]),
        unit(&[(0, 1, 1)]),
        unit(&[(0, 2, 1)]),
        unit(&[(1, 2, 1)]),
        unit(&[(1, 0, 1)]),
        unit(&[(2, 0, 1)]),
        unit(&[(2, 1, 1)]),
    ]
}

/// Uniform expansion `diag(1, 1, 1, 0)`.
pub fn uniform_expansion() -> AlgebraElement {
    unit(&[(0, 0, 1), (1, 1, 1), (2, 2, 1)])
}

pub fn generators(tag: GroupTag) -> Vec<AlgebraElement> {
    match tag {
        GroupTag::SE3 => se3_basis().to_vec(),
        GroupTag::Aff3 => aff3_generators().to_vec(),
    }
}

/// Display names matching [`generators`].
pub fn generator_names(tag: GroupTag) -> Vec<&'static str> {
    match tag {
        GroupTag::SE3 => vec!["g1", "g2", "g3", "g4", "g5", "g6"],
        GroupTag::Aff3 => vec![
            "g4", "g5", "g6", "e1", "e2", "e3", "s1", "s2", "s3", "s4", "s5", "s6",
        ],
    }
}

/// Rotation from a rational quaternion `(w, x, y, z)` (Euler–Rodrigues);
/// exact for any nonzero quaternion.
pub fn rotation_from_quaternion(q: [Rational; 4]) -> Result<[[Rational; 3]; 3]> {
    let [w, x, y, z] = q;
    let n = &w * &w + &x * &x + &y * &y + &z * &z;
    if n.is_zero() {
        return Err(Error::InvalidParameter("zero quaternion".into()));
    }
    let two = int(2);
    let m = [
        [
            &w * &w + &x * &x - &y * &y - &z * &z,
            &two * (&x * &y - &w * &z),
            &two * (&x * &z + &w * &y),
        ],
        [
            &two * (&x * &y + &w * &z),
            &w * &w - &x * &x + &y * &y - &z * &z,
            &two * (&y * &z - &w * &x),
        ],
        [
            &two * (&x * &z - &w * &y),
            &two * (&y * &z + &w * &x),
            &w * &w - &x * &x - &y * &y + &z * &z,
        ],
    ];
    Ok(m.map(|row| row.map(|c| c / &n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn p(a: i64, b: i64, c: i64) -> Point3 {
        [int(a), int(b), int(c)]
    }

    fn rz90() -> GroupElement {
        let r = [
            [int(0), int(-1), int(0)],
            [int(1), int(0), int(0)],
            [int(0), int(0), int(1)],
        ];
        GroupElement::from_parts(&r, &p(0, 0, 0), GroupTag::SE3).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = GroupElement::identity(GroupTag::SE3);
        assert_eq!(id.compose(&id).unwrap(), id);
        let a = GroupElement::translation(&p(1, 0, 0), GroupTag::SE3);
        let b = GroupElement::translation(&p(0, 2, 0), GroupTag::SE3);
        assert_eq!(a.compose(&b).unwrap(), GroupElement::translation(&p(1, 2, 0), GroupTag::SE3));
        let c = rz90().compose(&a).unwrap();
        let m = c.matrix();
        assert_eq!(m.0[0][3], int(0));
        assert_eq!(m.0[1][3], int(1));
        assert_eq!(m.0[2][3], int(0));
        assert_eq!(m.0[0][1], int(-1));
        assert!(matches!(
            a.compose(&a.as_aff3()),
            Err(Error::TagMismatch(_))
        ));
    }

    #[test]
    fn inverse_examples() {
        let id = GroupElement::identity(GroupTag::Aff3);
        assert_eq!(id.inverse(), id);
        let a = GroupElement::translation(&p(1, -2, 3), GroupTag::SE3);
        assert_eq!(a.inverse(), GroupElement::translation(&p(-1, 2, -3), GroupTag::SE3));
        let g = rz90().compose(&a).unwrap();
        assert_eq!(g.compose(&g.inverse()).unwrap(), GroupElement::identity(GroupTag::SE3));
    }

    #[test]
    fn act_point_examples() {
        let a = GroupElement::translation(&p(1, 2, 3), GroupTag::SE3);
        assert_eq!(a.act_point(&p(0, 0, 0)), p(1, 2, 3));
        let q = [rat(1, 3), rat(-2, 7), int(5)];
        assert_eq!(GroupElement::identity(GroupTag::SE3).act_point(&q), q);
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = Mat4::<Rational>::identity();
        m.0[0][1] = int(1);
        assert!(GroupElement::new(m.clone(), GroupTag::Aff3).is_ok());
        assert!(GroupElement::new(m, GroupTag::SE3).is_err());
        let mut bad = Mat4::<Rational>::identity();
        bad.0[3][0] = int(1);
        assert!(GroupElement::new(bad, GroupTag::Aff3).is_err());
        let mut refl = Mat4::<Rational>::identity();
        refl.0[0][0] = int(-1);
        assert!(GroupElement::new(refl, GroupTag::SE3).is_err());
        let mut sing = Mat4::<Rational>::identity();
        sing.0[2][2] = int(0);
        assert!(GroupElement::new(sing, GroupTag::Aff3).is_err());
    }

    #[test]
    fn basis_entries() {
        let b = se3_basis();
        assert_eq!(b[0].matrix().0[1][2], int(-1));
        assert_eq!(b[0].matrix().0[2][1], int(1));
        assert_eq!(b[0].matrix().0.iter().flatten().filter(|c| !c.is_zero()).count(), 2);
        assert_eq!(b[3].matrix().0[0][3], int(1));
        assert_eq!(b[3].matrix().0.iter().flatten().filter(|c| !c.is_zero()).count(), 1);
        let a = aff3_generators();
        assert_eq!(a[3].matrix().0[0][0], int(1));
        assert_eq!(a[3].matrix().0.iter().flatten().filter(|c| !c.is_zero()).count(), 1);
        for g in b.iter().chain(a.iter()) {
            assert!(g.matrix().0[3].iter().all(|c| c.is_zero()));
        }
        for g in &b[..3] {
            assert!(g.is_skew());
        }
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..8).prop_map(|(n, d)| rat(n, d))
    }

    fn se3_elem() -> impl Strategy<Value = GroupElement> {
        (
            proptest::array::uniform4(small_rat()),
            proptest::array::uniform3(small_rat()),
        )
            .prop_filter_map("nonzero quaternion", |(q, t)| {
                let r = rotation_from_quaternion(q).ok()?;
                GroupElement::from_parts(&r, &t, GroupTag::SE3).ok()
            })
    }

    fn aff3_elem() -> impl Strategy<Value = GroupElement> {
        (
            proptest::array::uniform3(proptest::array::uniform3(small_rat())),
            proptest::array::uniform3(small_rat()),
        )
            .prop_filter_map("invertible", |(a, t)| GroupElement::from_parts(&a, &t, GroupTag::Aff3).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn compose_associative(a in aff3_elem(), b in aff3_elem(), c in aff3_elem()) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_of_product(a in aff3_elem(), b in aff3_elem()) {
            let lhs = a.compose(&b).unwrap().inverse();
            let rhs = b.inverse().compose(&a.inverse()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn se3_preserves_distances(g in se3_elem(), pts in proptest::array::uniform3(proptest::array::uniform3(small_rat()))) {
            let d2 = |a: &Point3, b: &Point3| (0..3).map(|i| (&a[i] - &b[i]) * (&a[i] - &b[i])).fold(int(0), |s, v| s + v);
            let img: Vec<Point3> = pts.iter().map(|q| g.act_point(q)).collect();
            for i in 0..3 {
                for j in 0..i {
                    prop_assert_eq!(d2(&pts[i], &pts[j]), d2(&img[i], &img[j]));
                }
            }
            prop_assert_eq!(g.compose(&g.inverse()).unwrap(), GroupElement::identity(GroupTag::SE3));
        }
    }
}
