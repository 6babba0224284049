//! Ordinary differential operators with rational-function coefficients.
//!
//! An operator is Σ aᵢ(x)∂ⁱ, stored lowest power first with a nonzero top
//! coefficient. Composition follows the Leibniz rule ∂∘f = f∂ + f′; right
//! Euclidean division is exact over the coefficient field ℚ(x).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::Error;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: Vec<RatFunc>,
}

impl DiffOp {
    pub fn new(coeffs: Vec<RatFunc>) -> Self {
        let mut op = DiffOp { coeffs };
        op.trim();
        op
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        DiffOp { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DiffOp::from_ratfunc(RatFunc::one())
    }

    pub fn from_ratfunc(f: RatFunc) -> Self {
        DiffOp::new(vec![f])
    }

    pub fn from_poly(p: Poly) -> Self {
        DiffOp::from_ratfunc(RatFunc::from_poly(p))
    }

    /// The operator `f(x)·∂^k`.
    pub fn term(f: RatFunc, k: usize) -> Self {
        if f.is_zero() {
            return DiffOp::zero();
        }
        let mut coeffs = vec![RatFunc::zero(); k + 1];
        coeffs[k] = f;
        DiffOp { coeffs }
    }

    /// The derivative symbol ∂.
    pub fn dx() -> Self {
        DiffOp::term(RatFunc::one(), 1)
    }

    /// Multiplication by x.
    pub fn x() -> Self {
        DiffOp::from_poly(Poly::x())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Order, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// Coefficient of ∂^k.
    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn leading(&self) -> Option<&RatFunc> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// True when every coefficient is a polynomial.
    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    /// Coefficient of ∂^k as a polynomial; errors on a true rational function.
    pub fn poly_coeff(&self, k: usize) -> Result<Poly, Error> {
        self.coeff(k)
            .as_poly()
            .cloned()
            .ok_or(Error::NonPolynomialCoefficient(k))
    }

    /// Left-multiplies by a function: `f·A` scales every coefficient.
    pub fn scale_fn(&self, f: &RatFunc) -> DiffOp {
        if f.is_zero() {
            return DiffOp::zero();
        }
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> DiffOp {
        self.scale_fn(&RatFunc::constant(s.clone()))
    }

    /// Divides by the leading coefficient, making the operator monic.
    pub fn normalize_monic(&self) -> Result<DiffOp, Error> {
        let lead = self.leading().ok_or(Error::ZeroOperator)?;
        if lead.is_one() {
            return Ok(self.clone());
        }
        Ok(self.scale_fn(&lead.recip()?))
    }

    /// Right Euclidean division: `self = q∘div + r` with `ord r < ord div`.
    pub fn right_divide(&self, div: &DiffOp) -> Result<(DiffOp, DiffOp), Error> {
        let d_ord = div.order().ok_or(Error::ZeroOperatorDivision)?;
        let d_lead = div.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = DiffOp::zero();
        while let Some(r_ord) = rem.order() {
            if r_ord < d_ord {
                break;
            }
            let factor = rem.leading().expect("nonzero remainder") / d_lead;
            let step = DiffOp::term(factor, r_ord - d_ord);
            rem = &rem - &(&step * div);
            quot = &quot + &step;
        }
        Ok((quot, rem))
    }

    /// Fraction-free right division: returns (Q, R, s) with
    /// lead(div)^s·self = Q∘div + R and ord R < ord div.
    ///
    /// For polynomial-coefficient inputs everything stays polynomial, which
    /// avoids the rational-function growth of `right_divide`.
    pub fn pseudo_right_divide(&self, div: &DiffOp) -> Result<(DiffOp, DiffOp, usize), Error> {
        let d_ord = div.order().ok_or(Error::ZeroOperatorDivision)?;
        let lead = div.leading().expect("nonzero divisor").clone();
        let mut rem = self.clone();
        let mut quot = DiffOp::zero();
        let mut steps = 0usize;
        while let Some(r_ord) = rem.order() {
            if r_ord < d_ord {
                break;
            }
            let top = DiffOp::term(rem.leading().expect("nonzero remainder").clone(), r_ord - d_ord);
            rem = &rem.scale_fn(&lead) - &(&top * div);
            quot = &quot.scale_fn(&lead) + &top;
            steps += 1;
        }
        Ok((quot, rem, steps))
    }

    /// Fraction-free right remainder; see `pseudo_right_divide`.
    pub fn pseudo_right_rem(&self, div: &DiffOp) -> Result<(DiffOp, usize), Error> {
        let (_, rem, steps) = self.pseudo_right_divide(div)?;
        Ok((rem, steps))
    }

    /// Applies the operator to a polynomial.
    pub fn apply_poly(&self, f: &Poly) -> RatFunc {
        let mut result = RatFunc::zero();
        let mut deriv = f.clone();
        for c in &self.coeffs {
            result = &result + &(c * &RatFunc::from_poly(deriv.clone()));
            deriv = deriv.derivative();
        }
        result
    }

    /// Evaluates `p(L)` for a scalar polynomial `p`, by Horner.
    pub fn eval_poly(p: &Poly, op: &DiffOp) -> DiffOp {
        let mut acc = DiffOp::zero();
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * op) + &DiffOp::from_ratfunc(RatFunc::constant(c.clone()));
        }
        acc
    }

    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, e: usize) -> DiffOp {
        let mut acc = DiffOp::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        DiffOp::new(coeffs)
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        DiffOp::new(coeffs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Leibniz composition: ∂ⁱ∘b(x) = Σₜ C(i,t)·b⁽ᵗ⁾(x)·∂^{i−t}.
impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        if self.is_zero() || rhs.is_zero() {
            return DiffOp::zero();
        }
        let max_i = self.coeffs.len() - 1;
        // derivs[j][t] = t-th derivative of rhs coefficient j
        let derivs: Vec<Vec<RatFunc>> = rhs
            .coeffs
            .iter()
            .map(|b| {
                let mut row = Vec::with_capacity(max_i + 1);
                row.push(b.clone());
                for t in 1..=max_i {
                    let next = row[t - 1].derivative();
                    row.push(next);
                }
                row
            })
            .collect();
        let mut coeffs =
            vec![RatFunc::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut binom = Rational::from_integer(1.into());
            for t in 0..=i {
                if t > 0 {
                    binom = binom * rat((i - t + 1) as i64) / rat(t as i64);
                }
                for (j, row) in derivs.iter().enumerate() {
                    let b_t = &row[t];
                    if b_t.is_zero() {
                        continue;
                    }
                    let term = &(a * b_t).scale(&binom);
                    coeffs[i + j - t] = &coeffs[i + j - t] + term;
                }
            }
        }
        DiffOp::new(coeffs)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let d_part = match k {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            if c.is_one() && k > 0 {
                f.write_str(&d_part)?;
            } else if d_part.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{d_part}")?;
            }
        }
        Ok(())
    }
}

/// The generalized Airy vacuum `L₀ = ∂ʳ − a_{r−2}∂^{r−2} − ⋯ − a₁∂ − x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AiryVacuum {
    order: u32,
    constants: Vec<Rational>,
}

impl AiryVacuum {
    /// Builds a vacuum of order `r ≥ 2` from the constants `a₁..a_{r−2}`.
    pub fn new(order: u32, constants: Vec<Rational>) -> Result<Self, Error> {
        if order < 2 {
            return Err(Error::VacuumOrderTooSmall(order));
        }
        let expected = order as usize - 2;
        if constants.len() != expected {
            return Err(Error::VacuumConstantCount {
                order,
                expected,
                got: constants.len(),
            });
        }
        Ok(AiryVacuum { order, constants })
    }

    /// The classical Airy vacuum ∂² − x.
    pub fn airy() -> Self {
        AiryVacuum {
            order: 2,
            constants: Vec::new(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The constants a₁..a_{r−2}.
    pub fn constants(&self) -> &[Rational] {
        &self.constants
    }

    /// a_k for 1 ≤ k ≤ r−2, zero outside that range.
    pub fn constant(&self, k: usize) -> Rational {
        if k >= 1 && k <= self.constants.len() {
            self.constants[k - 1].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn operator(&self) -> DiffOp {
        let r = self.order as usize;
        let mut coeffs = vec![RatFunc::zero(); r + 1];
        coeffs[r] = RatFunc::one();
        for (k, a) in self.constants.iter().enumerate() {
            coeffs[k + 1] = RatFunc::constant(-a.clone());
        }
        coeffs[0] = RatFunc::from_poly(Poly::monomial(rat(-1), 1));
        DiffOp::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn commutation_relation() {
        // ∂∘x = x∂ + 1
        let p = &DiffOp::dx() * &DiffOp::x();
        assert_eq!(p.coeff(1), RatFunc::from_poly(Poly::x()));
        assert_eq!(p.coeff(0), RatFunc::one());
    }

    #[test]
    fn euler_squared() {
        // (x∂)(x∂) = x²∂² + x∂; oracle: apply both sides to x^k, k ≤ 3.
        let euler = DiffOp::term(RatFunc::from_poly(Poly::x()), 1);
        let sq = &euler * &euler;
        assert_eq!(
            sq.coeff(2),
            RatFunc::from_poly(Poly::monomial(rat(1), 2))
        );
        assert_eq!(sq.coeff(1), RatFunc::from_poly(Poly::x()));
        assert_eq!(sq.coeff(0), RatFunc::zero());
        for k in 0..=3usize {
            let xk = Poly::monomial(rat(1), k);
            let once = euler.apply_poly(&xk);
            let via_product = sq.apply_poly(&xk);
            let twice = euler.apply_poly(once.as_poly().unwrap());
            assert_eq!(via_product, twice);
        }
    }

    #[test]
    fn identity_is_neutral() {
        let l0 = AiryVacuum::airy().operator();
        assert_eq!(&l0 * &DiffOp::one(), l0);
        assert_eq!(&DiffOp::one() * &l0, l0);
    }

    #[test]
    fn right_division_by_self() {
        let l0 = AiryVacuum::airy().operator();
        let (q, r) = l0.right_divide(&l0).unwrap();
        assert!(q.is_one());
        assert!(r.is_zero());
    }

    #[test]
    fn right_division_with_constant_shift() {
        // ∂² by (∂ − c): quotient ∂ + c, remainder c²; oracle is Q∘B + R.
        let c = ratio(3, 2);
        let a = DiffOp::term(RatFunc::one(), 2);
        let b = DiffOp::new(vec![
            RatFunc::constant(-c.clone()),
            RatFunc::one(),
        ]);
        let (q, r) = a.right_divide(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(q.coeff(0), RatFunc::constant(c.clone()));
        assert_eq!(q.coeff(1), RatFunc::one());
        assert_eq!(r.coeff(0), RatFunc::constant(&c * &c));
        assert!(r.order() < b.order());
    }

    #[test]
    fn right_division_first_order() {
        // (x∂ + 1) by ∂: quotient x, remainder 1.
        let a = &DiffOp::term(RatFunc::from_poly(Poly::x()), 1) + &DiffOp::one();
        let (q, r) = a.right_divide(&DiffOp::dx()).unwrap();
        assert_eq!(&(&q * &DiffOp::dx()) + &r, a);
        assert_eq!(q, DiffOp::x());
        assert!(r.is_one());
    }

    #[test]
    fn divide_by_zero_errors() {
        let a = DiffOp::dx();
        assert_eq!(
            a.right_divide(&DiffOp::zero()),
            Err(Error::ZeroOperatorDivision)
        );
    }

    #[test]
    fn normalize_monic_examples() {
        // 2∂ + x -> ∂ + x/2
        let a = &DiffOp::term(RatFunc::constant(rat(2)), 1) + &DiffOp::x();
        let m = a.normalize_monic().unwrap();
        assert!(m.is_monic());
        assert_eq!(
            m.coeff(0),
            RatFunc::from_poly(Poly::new(vec![Rational::zero(), ratio(1, 2)]))
        );
        assert_eq!(m.normalize_monic().unwrap(), m);
        assert_eq!(DiffOp::zero().normalize_monic(), Err(Error::ZeroOperator));
    }

    #[test]
    fn vacuum_shapes() {
        let v = AiryVacuum::new(3, vec![rat(5)]).unwrap();
        let op = v.operator();
        assert_eq!(op.order(), Some(3));
        assert_eq!(op.coeff(2), RatFunc::zero());
        assert_eq!(op.coeff(1), RatFunc::constant(rat(-5)));
        assert!(AiryVacuum::new(1, vec![]).is_err());
        assert!(AiryVacuum::new(4, vec![rat(1)]).is_err());
    }

    #[test]
    fn eval_poly_on_vacuum() {
        // p(z) = z² on L₀ gives L₀∘L₀.
        let l0 = AiryVacuum::airy().operator();
        let p = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(DiffOp::eval_poly(&p, &l0), &l0 * &l0);
    }
}
