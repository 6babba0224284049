//! Sparse trivariate polynomials in x, z and the marker ξ.
//!
//! These carry the raw bordered determinant before the operator
//! substitution; no zero coefficients are ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::Poly;
use crate::rational::{format_rational, Rational};

/// Exponent triple `(x, z, ξ)`.
pub type Exp = (u32, u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exp, Rational>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn one() -> Self {
        TriPoly::term(Rational::from_integer(1.into()), (0, 0, 0))
    }

    pub fn term(c: Rational, e: Exp) -> Self {
        let mut t = TriPoly::zero();
        t.add_term(e, c);
        t
    }

    pub fn constant(c: Rational) -> Self {
        TriPoly::term(c, (0, 0, 0))
    }

    /// Embeds a univariate polynomial in the given axis (0 = x, 1 = z, 2 = ξ).
    pub fn from_poly(p: &Poly, axis: usize) -> Self {
        let mut t = TriPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let k = k as u32;
            let e = match axis {
                0 => (k, 0, 0),
                1 => (0, k, 0),
                _ => (0, 0, k),
            };
            t.add_term(e, c.clone());
        }
        t
    }

    pub fn add_term(&mut self, e: Exp, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exp) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when some term involves z or ξ.
    pub fn has_spectral_symbols(&self) -> bool {
        self.terms.keys().any(|&(_, j, k)| j > 0 || k > 0)
    }

    pub fn max_degrees(&self) -> Exp {
        let mut m = (0, 0, 0);
        for &(i, j, k) in self.terms.keys() {
            m.0 = m.0.max(i);
            m.1 = m.1.max(j);
            m.2 = m.2.max(k);
        }
        m
    }

    /// Swaps the roles of x and z.
    pub fn swap_x_z(&self) -> TriPoly {
        let mut t = TriPoly::zero();
        for (&(i, j, k), c) in &self.terms {
            t.add_term((j, i, k), c.clone());
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> TriPoly {
        if s.is_zero() {
            return TriPoly::zero();
        }
        TriPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// The coefficient of `z^j ξ^k`, collected as a polynomial in x.
    pub fn x_poly_of(&self, j: u32, k: u32) -> Poly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, jj, kk), c) in &self.terms {
            if jj == j && kk == k {
                let i = i as usize;
                if coeffs.len() <= i {
                    coeffs.resize(i + 1, Rational::zero());
                }
                coeffs[i] = c.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// Exact division; errors when the divisor does not divide exactly.
    ///
    /// Long division on the (x, z, ξ)-lexicographic term order; the Bareiss
    /// elimination below only ever requests divisions that are exact.
    pub fn exact_div(&self, div: &TriPoly) -> Result<TriPoly, Error> {
        if div.is_zero() {
            return Err(Error::ZeroPolyDivision);
        }
        let (lead_e, lead_c) = div.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = TriPoly::zero();
        while let Some((&re, rc)) = rem.terms.iter().next_back() {
            if re.0 < lead_e.0 || re.1 < lead_e.1 || re.2 < lead_e.2 {
                return Err(Error::InexactDivision);
            }
            let qe = (re.0 - lead_e.0, re.1 - lead_e.1, re.2 - lead_e.2);
            let qc = rc / lead_c;
            let piece = TriPoly::term(qc, qe);
            rem = &rem - &(&piece * div);
            quot = &quot + &piece;
        }
        Ok(quot)
    }
}

impl Add for &TriPoly {
    type Output = TriPoly;
    fn add(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;
    fn sub(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;
    fn mul(self, rhs: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (&(i1, j1, k1), c1) in &self.terms {
            for (&(i2, j2, k2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2, k1 + k2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(i, j, k), c) in self.terms.iter().rev() {
            if first {
                first = false;
                if c < &Rational::zero() {
                    f.write_str("-")?;
                }
            } else if c < &Rational::zero() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (i, j, k) == (0, 0, 0) {
                parts.push(format_rational(&mag));
            }
            for (sym, e) in [("x", i), ("z", j), ("xi", k)] {
                match e {
                    0 => {}
                    1 => parts.push(sym.to_string()),
                    _ => parts.push(format!("{sym}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
