//! Ready-made elementary surfaces and motions used by the bundled scenes,
//! the examples and the tests.

use num_traits::Zero;

use crate::exact::{int, rat, Mat4, Rational};
use crate::group::GroupTag;
use crate::motion::RationalMotion;
use crate::poly::Polynomial;
use crate::quadric::Quadric;
use crate::rational_fn::RationalFunction;

fn unit_domain() -> (Rational, Rational) {
    (int(0), int(1))
}

fn poly(c: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(Polynomial::from_ints(c))
}

fn poly_q(c: &[(i64, i64)]) -> RationalFunction {
    RationalFunction::from_poly(Polynomial::new(c.iter().map(|&(n, d)| rat(n, d)).collect()))
}

/// Radius of the running example's cone `x² + y² − r² z²`.
pub fn running_example_radius() -> Rational {
    rat(1, 5)
}

pub fn running_example_cone() -> Quadric {
    Quadric::cone(&running_example_radius()).expect("positive radius")
}

/// The rational rigid motion of the running example on `t ∈ [0, 1]`.
pub fn running_example() -> RationalMotion {
    let den = Polynomial::from_ints(&[517, 788, 1108]);
    let nums: [[[i64; 3]; 3]; 3] = [
        [[123, -788, -468], [192, 848, 928], [-464, -736, 384]],
        [[256, 944, 864], [387, 268, 588], [228, 272, -368]],
        [[432, 608, -512], [-284, -496, 144], [-3, -1292, -972]],
    ];
    let tr = [[(3, 2), (2, 1)], [(1, 2), (3, 1)], [(3, 2), (3, 1)]];
    let mut m = Mat4::<RationalFunction>::identity();
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = RationalFunction::new(Polynomial::from_ints(&nums[i][j]), den.clone())
                .expect("nonzero denominator");
        }
        m.0[i][3] = poly_q(&tr[i]);
    }
    RationalMotion::new(m, unit_domain(), GroupTag::SE3).expect("running example is rigid")
}

/// Translation along the x-axis: the unit sphere sweeps a pipe of radius 1.
pub fn pipe() -> RationalMotion {
    RationalMotion::translation([poly(&[0, 1]), poly(&[]), poly(&[])], unit_domain(), GroupTag::SE3)
        .expect("valid translation")
}

/// Uniform scaling by `1 + t/2` followed by translation `(t, 0, 0)`: a canal
/// surface with linearly growing radius.
pub fn canal() -> RationalMotion {
    let s = poly_q(&[(1, 1), (1, 2)]);
    let mut m = Mat4::<RationalFunction>::identity();
    for i in 0..3 {
        m.0[i][i] = s.clone();
    }
    m.0[0][3] = poly(&[0, 1]);
    RationalMotion::new(m, unit_domain(), GroupTag::Aff3).expect("valid affine motion")
}

/// Translations combined with the shear `x ↦ x + t·y`; applied to the unit
/// sphere it gives a system of ellipsoids whose derivative surfaces have
/// the form `k₁x + k₂y + k₃z + k₄xy`.
pub fn sheared_ellipsoid() -> RationalMotion {
    let mut m = Mat4::<RationalFunction>::identity();
    m.0[0][1] = poly(&[0, 1]);
    m.0[0][3] = poly_q(&[(0, 1), (1, 2)]);
    m.0[1][3] = poly(&[0, 2]);
    m.0[2][3] = poly(&[0, 1]);
    RationalMotion::new(m, unit_domain(), GroupTag::Aff3).expect("valid affine motion")
}

/// Paraboloid `x² + 2y² − z`.
pub fn paraboloid_surface() -> Quadric {
    Quadric::paraboloid(&int(1), &int(2)).expect("nonzero")
}

/// Rotation about the x-axis by the rational quaternion `(1, t/2, 0, 0)`
/// combined with translation `(t, 0, t/2)`.
pub fn paraboloid_motion() -> RationalMotion {
    RationalMotion::from_quaternion(
        [
            Polynomial::from_ints(&[1]),
            Polynomial::new(vec![int(0), rat(1, 2)]),
            Polynomial::zero(),
            Polynomial::zero(),
        ],
        [poly(&[0, 1]), poly(&[]), poly_q(&[(0, 1), (1, 2)])],
        unit_domain(),
    )
    .expect("quaternion motions are rigid")
}
