//! Cusp divisors: finite sets of first-order distributions δ_λ∘(∂+γ)
//! with distinct support.

use std::fmt;

use crate::error::Error;
use crate::poly::Poly;
use crate::rational::{format_rational, rat, Rational};

/// One distribution δ_λ∘(∂_z + γ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cusp {
    pub lambda: Rational,
    pub gamma: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspDivisor {
    cusps: Vec<Cusp>,
}

impl CuspDivisor {
    /// Validates that the supports are pairwise distinct.
    pub fn new(cusps: Vec<Cusp>) -> Result<Self, Error> {
        for (i, a) in cusps.iter().enumerate() {
            for b in &cusps[..i] {
                if a.lambda == b.lambda {
                    return Err(Error::DuplicateLambda(format_rational(&a.lambda)));
                }
            }
        }
        Ok(CuspDivisor { cusps })
    }

    /// The vacuous divisor (n = 0).
    pub fn empty() -> Self {
        CuspDivisor { cusps: Vec::new() }
    }

    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Result<Self, Error> {
        CuspDivisor::new(
            pairs
                .iter()
                .map(|(l, g)| Cusp {
                    lambda: l.clone(),
                    gamma: g.clone(),
                })
                .collect(),
        )
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    /// Number of cusps n.
    pub fn len(&self) -> usize {
        self.cusps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cusps.is_empty()
    }

    /// Operator order N = r·n for a vacuum of order r.
    pub fn operator_order(&self, r: u32) -> usize {
        r as usize * self.cusps.len()
    }

    /// The spectral polynomial q(z) = ∏(z − λᵢ), monic of degree n.
    pub fn q(&self) -> Poly {
        let mut q = Poly::one();
        for c in &self.cusps {
            q = &q * &Poly::new(vec![-c.lambda.clone(), rat(1)]);
        }
        q
    }

    /// Same cusps, sorted by support; used for set comparison.
    pub fn sorted(&self) -> CuspDivisor {
        let mut cusps = self.cusps.clone();
        cusps.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        CuspDivisor { cusps }
    }

    /// Equality as a set of distributions.
    pub fn same_support(&self, other: &CuspDivisor) -> bool {
        self.sorted() == other.sorted()
    }
}

impl fmt::Display for CuspDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cusps
            .iter()
            .map(|c| {
                format!(
                    "({}, {})",
                    format_rational(&c.lambda),
                    format_rational(&c.gamma)
                )
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
