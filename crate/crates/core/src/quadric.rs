//! Quadrics as symmetric 4×4 matrices, the implicit representation
//! space `Q = span{x², y², z², xy, xz, yz, x, y, z, 1}`, and the pullback
//! `φ(g) = f̄ ∘ g⁻¹`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, rat, to_f64, Mat4, Rational, Ring};
use crate::group::{GroupElement, Point3};
use crate::motion::RationalMotion;
use crate::rational_fn::RationalFunction;

/// Monomial names in the fixed basis order.
pub const BASIS: [&str; 10] = ["x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", "1"];

/// `(row, col)` of the matrix entry holding each basis coefficient.
const SLOTS: [(usize, usize); 10] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (0, 1),
    (0, 2),
    (1, 2),
    (0, 3),
    (1, 3),
    (2, 3),
    (3, 3),
];

fn is_off_diagonal(k: usize) -> bool {
    let (i, j) = SLOTS[k];
    i != j
}

pub(crate) fn matrix_to_coeffs<T: Ring>(m: &Mat4<T>) -> [T; 10] {
    std::array::from_fn(|k| {
        let (i, j) = SLOTS[k];
        if is_off_diagonal(k) {
            m.0[i][j].clone() + m.0[j][i].clone()
        } else {
            m.0[i][j].clone()
        }
    })
}

pub(crate) fn coeffs_to_matrix<T: Ring>(c: &[T; 10], half: impl Fn(&T) -> T) -> Mat4<T> {
    let mut m = Mat4::zero();
    for (k, ck) in c.iter().enumerate() {
        let (i, j) = SLOTS[k];
        if is_off_diagonal(k) {
            m.0[i][j] = half(ck);
            m.0[j][i] = half(ck);
        } else {
            m.0[i][j] = ck.clone();
        }
    }
    m
}

/// `g⁻ᵀ·M·g⁻¹` from the inverse matrix.
pub(crate) fn congruence<T: Ring>(m: &Mat4<T>, inv: &Mat4<T>) -> Mat4<T> {
    inv.transpose().mul(m).mul(inv)
}

/// Exact quadric `X̃ᵀ M X̃`, `X̃ = (x, y, z, 1)`. The zero quadric only
/// appears as a tangent-map output.
#[derive(Clone, PartialEq, Debug)]
pub struct Quadric {
    m: Mat4<Rational>,
}

impl Quadric {
    pub fn from_matrix(m: Mat4<Rational>) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::InvalidParameter("quadric matrix must be symmetric".into()));
        }
        let q = Quadric { m };
        if q.is_zero() {
            return Err(Error::InvalidParameter("zero quadric".into()));
        }
        Ok(q)
    }

    pub fn from_coeffs(c: [Rational; 10]) -> Result<Self> {
        let q = Self::from_coeffs_or_zero(c);
        if q.is_zero() {
            return Err(Error::InvalidParameter("zero quadric".into()));
        }
        Ok(q)
    }

    pub(crate) fn from_coeffs_or_zero(c: [Rational; 10]) -> Self {
        Quadric {
            m: coeffs_to_matrix(&c, |v| v / int(2)),
        }
    }

    pub(crate) fn from_matrix_or_zero(m: Mat4<Rational>) -> Self {
        debug_assert!(m.is_symmetric());
        Quadric { m }
    }

    pub fn from_ints(c: [i64; 10]) -> Result<Self> {
        Self::from_coeffs(c.map(int))
    }

    /// The zero sentinel.
    pub fn zero() -> Self {
        Quadric { m: Mat4::zero() }
    }

    /// Circular cone `x² + y² − r²z² = 0`, apex at the origin, axis `z`.
    pub fn cone(r: &Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidParameter("cone radius ratio must be > 0".into()));
        }
        let mut c = std::array::from_fn(|_| Rational::zero());
        c[0] = Rational::one();
        c[1] = Rational::one();
        c[2] = -(r * r);
        Self::from_coeffs(c)
    }

    pub fn unit_sphere() -> Self {
        Self::from_ints([1, 1, 1, 0, 0, 0, 0, 0, 0, -1]).expect("nonzero")
    }

    /// Elliptic paraboloid `a·x² + b·y² − z = 0`.
    pub fn paraboloid(a: &Rational, b: &Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidParameter("paraboloid needs a, b != 0".into()));
        }
        let mut c = std::array::from_fn(|_| Rational::zero());
        c[0] = a.clone();
        c[1] = b.clone();
        c[8] = -Rational::one();
        Self::from_coeffs(c)
    }

    pub fn matrix(&self) -> &Mat4<Rational> {
        &self.m
    }

    pub fn coeffs(&self) -> [Rational; 10] {
        matrix_to_coeffs(&self.m)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs()[k].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.m.0.iter().flatten().all(|c| c.is_zero())
    }

    pub fn eval(&self, p: &Point3) -> Rational {
        let x = [p[0].clone(), p[1].clone(), p[2].clone(), Rational::one()];
        let mx = self.m.mul_vec(&x);
        (0..4).fold(Rational::zero(), |acc, i| acc + &x[i] * &mx[i])
    }

    /// Homogeneous evaluation `X̃ᵀ M X̃` for `X̃ = (x, y, z, w)`.
    pub fn eval_homogeneous(&self, x: &[Rational; 4]) -> Rational {
        let mx = self.m.mul_vec(x);
        (0..4).fold(Rational::zero(), |acc, i| acc + &x[i] * &mx[i])
    }

    pub fn pullback(&self, g: &GroupElement) -> Quadric {
        let inv = g.inverse();
        Quadric {
            m: congruence(&self.m, inv.matrix()),
        }
    }

    pub fn add(&self, other: &Quadric) -> Quadric {
        Quadric { m: self.m.add(&other.m) }
    }

    pub fn sub(&self, other: &Quadric) -> Quadric {
        Quadric { m: self.m.sub(&other.m) }
    }

    pub fn scale(&self, s: &Rational) -> Quadric {
        Quadric { m: self.m.scale(s) }
    }

    /// Degree ≤ 1 (no quadratic monomials).
    pub fn is_affine_linear(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.m.0[i][j].is_zero()))
    }

    /// `Some(λ)` when `self = λ·other`.
    pub fn proportionality(&self, other: &Quadric) -> Option<Rational> {
        let a = self.coeffs();
        let b = other.coeffs();
        let k = b.iter().position(|c| !c.is_zero())?;
        let lambda = &a[k] / &b[k];
        a.iter()
            .zip(b.iter())
            .all(|(x, y)| *x == &lambda * y)
            .then_some(lambda)
    }

    /// Subtracts the multiple of `base` that cancels the coefficient of
    /// the first monomial where `base` is nonzero. The zero set on
    /// `base = 0` is unchanged.
    pub fn reduce_modulo(&self, base: &Quadric) -> (Quadric, Rational) {
        let b = base.coeffs();
        let k = b.iter().position(|c| !c.is_zero()).expect("nonzero base");
        let c = &self.coeffs()[k] / &b[k];
        (self.sub(&base.scale(&c)), c)
    }

    pub fn to_f64(&self) -> QuadricF64 {
        QuadricF64 { m: self.m.to_f64() }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(c: &[S]) -> Result<Self> {
        if c.len() != 10 {
            return Err(Error::Parse {
                location: "quadric".into(),
                message: format!("expected 10 coefficients, got {}", c.len()),
            });
        }
        let v: Vec<Rational> = c.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<_>>()?;
        Self::from_coeffs(std::array::from_fn(|k| v[k].clone()))
    }

    /// JSON 10-vector in basis order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "basis": BASIS, "coeffs": self.to_strings() })
    }
}

impl fmt::Display for Quadric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs();
        let mut first = true;
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let a = ck.abs();
            if first {
                if ck.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if ck.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            if k == 9 {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", BASIS[k])?;
            } else {
                write!(f, "{}*{}", format_rational(&a), BASIS[k])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Floating-point copy of a quadric for sampling and tracing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadricF64 {
    pub m: [[f64; 4]; 4],
}

impl QuadricF64 {
    pub fn eval(&self, p: [f64; 3]) -> f64 {
        let x = [p[0], p[1], p[2], 1.0];
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += x[i] * self.m[i][j] * x[j];
            }
        }
        s
    }

    pub fn gradient(&self, p: [f64; 3]) -> [f64; 3] {
        let x = [p[0], p[1], p[2], 1.0];
        std::array::from_fn(|i| 2.0 * (0..4).map(|j| self.m[i][j] * x[j]).sum::<f64>())
    }

    pub fn coeffs(&self) -> [f64; 10] {
        std::array::from_fn(|k| {
            let (i, j) = SLOTS[k];
            if i == j {
                self.m[i][j]
            } else {
                self.m[i][j] + self.m[j][i]
            }
        })
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |a, c| a.max(c.abs()))
    }

    /// Scaled so that the largest coefficient has magnitude 1.
    pub fn normalized(&self) -> QuadricF64 {
        let s = self.max_abs_coeff();
        if s == 0.0 {
            return *self;
        }
        QuadricF64 {
            m: self.m.map(|row| row.map(|c| c / s)),
        }
    }
}

/// A one-parameter family of quadrics with rational-function coefficients,
/// such as `f(·, t) = φ(g_t)`.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadricFamily {
    m: Mat4<RationalFunction>,
}

impl QuadricFamily {
    /// `f(·, t) = f̄ ∘ g_t⁻¹` as an identity in `t`.
    pub fn pullback_motion(q: &Quadric, motion: &RationalMotion) -> Self {
        let qm = q.m.map(|c| RationalFunction::constant(c.clone()));
        QuadricFamily {
            m: congruence(&qm, &motion.inverse_fn()),
        }
    }

    pub(crate) fn from_matrix(m: Mat4<RationalFunction>) -> Self {
        QuadricFamily { m }
    }

    pub fn from_coeffs(c: [RationalFunction; 10]) -> Self {
        let half = RationalFunction::constant(rat(1, 2));
        QuadricFamily {
            m: coeffs_to_matrix(&c, |v| v * &half),
        }
    }

    pub fn matrix(&self) -> &Mat4<RationalFunction> {
        &self.m
    }

    pub fn coeffs(&self) -> [RationalFunction; 10] {
        matrix_to_coeffs(&self.m)
    }

    pub fn derivative(&self) -> Self {
        QuadricFamily {
            m: self.m.map(|c| c.derivative()),
        }
    }

    pub fn scale_fn(&self, lambda: &RationalFunction) -> Self {
        QuadricFamily {
            m: self.m.map(|c| c * lambda),
        }
    }

    pub fn at(&self, t: &Rational) -> Result<Quadric> {
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.m.0[i][j].eval(t)?;
            }
        }
        Ok(Quadric::from_matrix_or_zero(m))
    }
}

/// Floating-point view for a quick residual without exact evaluation.
pub fn eval_f64_coeffs(c: &[f64; 10], p: [f64; 3]) -> f64 {
    let [x, y, z] = p;
    c[0] * x * x + c[1] * y * y + c[2] * z * z + c[3] * x * y + c[4] * x * z + c[5] * y * z
        + c[6] * x
        + c[7] * y
        + c[8] * z
        + c[9]
}

pub fn to_f64_coeffs(q: &Quadric) -> [f64; 10] {
    q.coeffs().map(|c| to_f64(&c))
}
