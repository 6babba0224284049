//! The Weyl algebra in normal order, and the ♭ anti-automorphism.
//!
//! Elements are Σ c_{ij} xⁱ∂ʲ with every x to the left of every ∂; the
//! normal form is unique, so structural equality is operator equality.
//! ♭ is determined on generators by ♭x = L₀ and ♭∂ = ∂, reversing products.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::diffop::{AiryVacuum, DiffOp};
use crate::error::Error;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeylOp {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl WeylOp {
    pub fn zero() -> Self {
        WeylOp::default()
    }

    pub fn one() -> Self {
        WeylOp::term(rat(1), 0, 0)
    }

    /// The monomial `c·xⁱ∂ʲ`.
    pub fn term(c: Rational, i: u32, j: u32) -> Self {
        let mut w = WeylOp::zero();
        w.add_term(i, j, c);
        w
    }

    pub fn x() -> Self {
        WeylOp::term(rat(1), 1, 0)
    }

    pub fn dx() -> Self {
        WeylOp::term(rat(1), 0, 1)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> WeylOp {
        if s.is_zero() {
            return WeylOp::zero();
        }
        WeylOp {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Order in ∂.
    pub fn dx_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Degree in x.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn pow(&self, e: usize) -> WeylOp {
        let mut acc = WeylOp::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The vacuum as a Weyl element.
    pub fn vacuum(l0: &AiryVacuum) -> WeylOp {
        let mut w = WeylOp::term(rat(1), 0, l0.order());
        for (k, a) in l0.constants().iter().enumerate() {
            w.add_term(0, k as u32 + 1, -a);
        }
        w.add_term(1, 0, rat(-1));
        w
    }

    /// The ♭ anti-automorphism for the given vacuum: ♭x = L₀, ♭∂ = ∂.
    ///
    /// Computed monomial-wise: ♭(xⁱ∂ʲ) = ∂ʲ∘L₀ⁱ, re-normal-ordered.
    pub fn flat(&self, l0: &AiryVacuum) -> WeylOp {
        let vac = WeylOp::vacuum(l0);
        let max_i = self.x_degree().unwrap_or(0) as usize;
        let mut vac_pows = Vec::with_capacity(max_i + 1);
        vac_pows.push(WeylOp::one());
        for i in 1..=max_i {
            let next = &vac_pows[i - 1] * &vac;
            vac_pows.push(next);
        }
        let mut out = WeylOp::zero();
        for (&(i, j), c) in &self.terms {
            let piece = &WeylOp::term(rat(1), 0, j) * &vac_pows[i as usize];
            out = &out + &piece.scale(c);
        }
        out
    }

    pub fn to_diffop(&self) -> DiffOp {
        let ord = self.dx_order().unwrap_or(0) as usize;
        let mut polys: Vec<Poly> = vec![Poly::zero(); ord + 1];
        for (&(i, j), c) in &self.terms {
            polys[j as usize] = &polys[j as usize] + &Poly::monomial(c.clone(), i as usize);
        }
        DiffOp::new(polys.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn from_diffop(op: &DiffOp) -> Result<WeylOp, Error> {
        let mut w = WeylOp::zero();
        for (j, c) in op.coeffs().iter().enumerate() {
            let p = c
                .as_poly()
                .ok_or(Error::NonPolynomialCoefficient(j))?;
            for (i, coeff) in p.coeffs().iter().enumerate() {
                w.add_term(i as u32, j as u32, coeff.clone());
            }
        }
        Ok(w)
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        WeylOp {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

/// Normal-ordered product: ∂ᵇ∘xᶜ = Σₜ C(b,t)·c!/(c−t)!·x^{c−t}∂^{b−t}.
impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        let mut out = WeylOp::zero();
        for (&(a, b), c1) in &self.terms {
            for (&(c, d), c2) in &rhs.terms {
                let coeff = c1 * c2;
                let mut factor = Rational::one();
                for t in 0..=b.min(c) {
                    if t > 0 {
                        // C(b,t)/C(b,t-1) = (b-t+1)/t, falling factor (c-t+1)
                        factor = factor * rat((b - t + 1) as i64) * rat((c - t + 1) as i64)
                            / rat(t as i64);
                    }
                    out.add_term(a + c - t, b + d - t, &coeff * &factor);
                }
            }
        }
        out
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if !c.is_one() || (i, j) == (0, 0) {
                parts.push(format_rational(c));
            }
            match i {
                0 => {}
                1 => parts.push("x".to_string()),
                _ => parts.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("D".to_string()),
                _ => parts.push(format!("D^{j}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
