//! Reduced rational functions in one indeterminate.
//!
//! Invariant: the denominator is monic and coprime to the numerator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::Error;
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `num/den` in reduced form; panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = RatFunc { num, den };
        f.reduce();
        f
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > Some(0) {
            self.num = self.num.exact_div(&g).expect("gcd divides");
            self.den = self.den.exact_div(&g).expect("gcd divides");
        }
        let lead = self.den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
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
        self.num.is_one() && self.den.is_one()
    }

    /// The underlying polynomial, if the denominator is one.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn recip(&self) -> Result<RatFunc, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolyDivision);
        }
        Ok(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn scale(&self, s: &Rational) -> RatFunc {
        if s.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Evaluation; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        if self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn frac(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(num), Poly::from_ints(den))
    }

    #[test]
    fn construction_reduces_and_normalizes() {
        // (2x^2 - 2) / (2x - 2) = x + 1
        let f = frac(&[-2, 0, 2], &[-2, 2]);
        assert_eq!(f.as_poly(), Some(&Poly::from_ints(&[1, 1])));
    }

    #[test]
    fn denominator_stays_monic() {
        let f = frac(&[1], &[0, 3]);
        assert_eq!(f.denominator(), &Poly::from_ints(&[0, 1]));
        assert_eq!(f.numerator(), &Poly::new(vec![crate::rational::ratio(1, 3)]));
    }

    #[test]
    fn field_arithmetic() {
        let a = frac(&[1], &[0, 1]); // 1/x
        let b = frac(&[0, 1], &[1]); // x
        assert!((&(&a * &b) - &RatFunc::one()).is_zero());
        let s = &a + &b; // (1 + x^2)/x
        assert_eq!(s.numerator(), &Poly::from_ints(&[1, 0, 1]));
        assert_eq!(s.denominator(), &Poly::from_ints(&[0, 1]));
    }

    #[test]
    fn derivative_of_inverse() {
        // d/dx (1/x) = -1/x^2
        let f = frac(&[1], &[0, 1]);
        let d = f.derivative();
        assert_eq!(d.numerator(), &Poly::from_ints(&[-1]));
        assert_eq!(d.denominator(), &Poly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn eval_and_poles() {
        let f = frac(&[1], &[0, 1]);
        assert_eq!(f.eval(&rat(2)), Some(crate::rational::ratio(1, 2)));
        assert_eq!(f.eval(&rat(0)), None);
    }
}
