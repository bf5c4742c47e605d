use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Element of the fraction field Q(t).
///
/// Kept normalized: numerator and denominator coprime, denominator monic,
/// zero stored as `0/1`. Structural equality is therefore field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunctionT {
    num: Poly,
    den: Poly,
}

impl RationalFunctionT {
    pub fn zero() -> Self {
        RationalFunctionT {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunctionT {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    /// The equivariant parameter `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        if k >= 0 {
            RationalFunctionT {
                num: Poly::monomial(c, k as usize),
                den: Poly::one(),
            }
        } else if c.is_zero() {
            Self::zero()
        } else {
            RationalFunctionT {
                num: Poly::constant(c),
                den: Poly::monomial(Rational::one(), (-k) as usize),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunctionT {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den`, normalizing. Fails on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_monomial() {
            // Only powers of t can be shared with a monomial denominator.
            let k = den.degree().unwrap().min(num.valuation().unwrap());
            (num.shift_down(k), den.shift_down(k))
        } else if num.is_monomial() {
            let k = num.degree().unwrap().min(den.valuation().unwrap());
            (num.shift_down(k), den.shift_down(k))
        } else {
            let g = Poly::gcd(&num, &den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.leading().unwrap().clone();
        if lead.is_one() {
            RationalFunctionT { num, den }
        } else {
            let inv = Rational::one() / lead;
            RationalFunctionT {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num == Poly::one()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        if self.num.degree() == Some(0) && self.den.degree() == Some(0) {
            Some(self.num.coeffs()[0].clone())
        } else {
            None
        }
    }

    /// deg(numerator) − deg(denominator); `None` for zero.
    pub fn t_degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunctionT {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Ok(RationalFunctionT {
            num: base.num.pow(e.unsigned_abs() as u32),
            den: base.den.pow(e.unsigned_abs() as u32),
        })
    }
}

impl Add for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn add(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunctionT::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            let (a, b) = (self.den.degree().unwrap(), rhs.den.degree().unwrap());
            let k = a.max(b);
            let lift = |p: &Poly, s: usize| &Poly::monomial(Rational::one(), s) * p;
            let num = &lift(&self.num, k - a) + &lift(&rhs.num, k - b);
            return RationalFunctionT::normalized(num, Poly::monomial(Rational::one(), k));
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunctionT::normalized(num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn neg(self) -> RationalFunctionT {
        RationalFunctionT {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn sub(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn mul(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunctionT::zero();
        }
        if self.den.degree() == Some(0) && rhs.den.degree() == Some(0) {
            return RationalFunctionT {
                num: &self.num * &rhs.num,
                den: Poly::one(),
            };
        }
        RationalFunctionT::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`RationalFunctionT::inverse`] for a
/// checked variant.
impl Div for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn div(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        self * &rhs.inverse().expect("division by zero rational function")
    }
}

impl fmt::Debug for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn lin(a: i64, b: i64) -> RationalFunctionT {
        // a + b t
        RationalFunctionT::from_poly(Poly::from_coeffs(vec![rat(a, 1), rat(b, 1)]))
    }

    #[test]
    fn normalizes_common_factors() {
        let x = &(&lin(1, 1) * &lin(2, 1)) / &(&lin(1, 1) * &lin(0, 3));
        assert_eq!(x.denominator(), &Poly::from_coeffs(vec![rat(0, 1), rat(1, 1)]));
        assert_eq!(x.numerator(), &Poly::from_coeffs(vec![rat(2, 3), rat(1, 3)]));
    }

    #[test]
    fn monomial_sums() {
        let a = RationalFunctionT::monomial(rat(1, 2), -2);
        let b = RationalFunctionT::monomial(rat(3, 1), -1);
        let s = &a + &b;
        assert_eq!(s, &(&lin(1, 6) * &RationalFunctionT::monomial(rat(1, 2), -2)) + &RationalFunctionT::zero());
        assert_eq!((&s - &s), RationalFunctionT::zero());
        assert_eq!(RationalFunctionT::monomial(rat(5, 1), 0).as_constant(), Some(rat(5, 1)));
        assert_eq!(a.t_degree(), Some(-2));
    }

    #[test]
    fn inverse_and_powers() {
        let x = lin(3, -2);
        assert!((&x * &x.inverse().unwrap()).is_one());
        assert_eq!(x.powi(-2).unwrap(), (&x * &x).inverse().unwrap());
        assert!(RationalFunctionT::zero().inverse().is_err());
    }
}
