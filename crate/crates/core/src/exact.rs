//! Exact scalars and small fixed-size matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let trimmed = s.trim();
    let bad = |m: &str| Error::Parse {
        location: format!("\"{trimmed}\""),
        message: m.to_string(),
    };
    if let Some((n, d)) = trimmed.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Rational::new(n, d))
    } else {
        let n = BigInt::from_str(trimmed).map_err(|_| bad("expected \"p/q\" rational"))?;
        Ok(Rational::from_integer(n))
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators and denominators: scale down before dividing.
    let n_bits = q.numer().bits() as i64;
    let d_bits = q.denom().bits() as i64;
    let shift_n = (n_bits - 900).max(0) as usize;
    let shift_d = (d_bits - 900).max(0) as usize;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Exact rational value of a finite float.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).expect("finite float")
}

/// Exact square root when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let int_sqrt = |n: &num_bigint::BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(int_sqrt(q.numer())?, int_sqrt(q.denom())?))
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Commutative ring scalar used by [`Mat4`].
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Row-major 4×4 matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat4<T>(pub [[T; 4]; 4]);

impl<T: Ring> Mat4<T> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..4).fold(T::zero(), |acc, k| {
                acc + self.0[i][k].clone() * rhs.0[k][j].clone()
            })
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() + rhs.0[i][j].clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() - rhs.0[i][j].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() * s.clone())
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> Mat4<U> {
        Mat4::from_fn(|i, j| f(&self.0[i][j]))
    }

    pub fn mul_vec(&self, v: &[T; 4]) -> [T; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(T::zero(), |acc, k| acc + self.0[i][k].clone() * v[k].clone())
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..i).all(|j| self.0[i][j] == self.0[j][i]))
    }

    /// Determinant of the upper-left 3×3 block.
    pub fn det3(&self) -> T {
        let m = &self.0;
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone()
                * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone()
                * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    /// Adjugate of the upper-left 3×3 block, embedded in a 4×4 with zero
    /// last row and column.
    pub fn adjugate3(&self) -> Self {
        let m = &self.0;
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
        };
        let mut out = Self::zero();
        out.0[0][0] = c(1, 2, 1, 2);
        out.0[0][1] = -c(0, 2, 1, 2);
        out.0[0][2] = c(0, 1, 1, 2);
        out.0[1][0] = -c(1, 2, 0, 2);
        out.0[1][1] = c(0, 2, 0, 2);
        out.0[1][2] = -c(0, 1, 0, 2);
        out.0[2][0] = c(1, 2, 0, 1);
        out.0[2][1] = -c(0, 2, 0, 1);
        out.0[2][2] = c(0, 1, 0, 1);
        out
    }
}

impl<T: fmt::Display> fmt::Display for Mat4<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Mat4<Rational> {
    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| to_f64(&self.0[i][j])))
    }
}
