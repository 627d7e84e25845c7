//! Univariate rational functions `num(t) / den(t)` in canonical form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};
use crate::poly::{owned_ops, Polynomial};

/// Canonical form: `gcd(num, den) = 1` and `den` is monic. The zero function
/// is `0 / 1`. Structural equality is therefore functional equality.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Polynomial::gcd(&num, &den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc = den.leading().recip();
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn t() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Some(c) when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::new(n, d).expect("nonzero denominator")
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Pole(format_rational(t)));
        }
        Ok(self.num.eval(t) / d)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.num.eval_f64(t) / self.den.eval_f64(t)
    }

    /// Composition with an affine reparameterization: `f(a + b·s)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        Self::new(self.num.compose_affine(a, b), self.den.compose_affine(a, b))
            .expect("affine substitution keeps denominator nonzero")
    }

    pub fn to_serde(&self) -> RationalFunctionSerde {
        RationalFunctionSerde {
            num: self.num.to_strings(),
            den: self.den.to_strings(),
        }
    }
}

/// Text form `{num: ["p/q", ...], den: [...]}`, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunctionSerde {
    pub num: Vec<String>,
    #[serde(default = "one_coeffs")]
    pub den: Vec<String>,
}

fn one_coeffs() -> Vec<String> {
    vec!["1".into()]
}

impl TryFrom<&RationalFunctionSerde> for RationalFunction {
    type Error = Error;
    fn try_from(s: &RationalFunctionSerde) -> Result<Self> {
        RationalFunction::new(Polynomial::from_strings(&s.num)?, Polynomial::from_strings(&s.den)?)
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

owned_ops!(RationalFunction);

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
