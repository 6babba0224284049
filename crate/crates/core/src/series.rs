//! Truncated power series and the series-side construction of K̄.
//!
//! Kernel elements of the vacuum have exact rational Taylor coefficients
//! at the origin, given by the recurrence the equation L₀f = 0 imposes.
//! Shifting the expansion point to a cusp support λ is done by solving the
//! shifted equation directly, which keeps every coefficient in ℚ. The
//! oracle then recovers K̄ as the unique polynomial-coefficient operator of
//! order N with monic degree-n leading coefficient that kills all of the
//! cusp-deformed kernel series — a route through exact linear algebra that
//! shares nothing with the bordered determinant.

use num_traits::{One, Zero};

use crate::diffop::{AiryVacuum, DiffOp};
use crate::divisor::CuspDivisor;
use crate::error::Error;
use crate::matrix::solve_linear;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{rat, Rational};

/// Power series truncation: coefficients of x^0..x^{len-1} are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Series { coeffs }
    }

    /// Number of trusted coefficients.
    pub fn trusted_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Termwise derivative; one trusted coefficient is lost.
    pub fn derivative(&self) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        Series {
            coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Series { coeffs }
    }

    /// Multiplication by an exact polynomial keeps the trusted window.
    pub fn mul_poly(&self, p: &Poly) -> Series {
        let n = self.coeffs.len();
        let mut coeffs = vec![Rational::zero(); n];
        for (t, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in t..n {
                coeffs[k] += c * &self.coeffs[k - t];
            }
        }
        Series { coeffs }
    }

    /// Order of vanishing within the trusted window.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// A truncated basis of `ker L₀` with unit Wronskian at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBasis {
    pub truncation: usize,
    pub functions: Vec<Series>,
}

/// Taylor basis of the kernel of the λ-shifted vacuum at the origin.
///
/// Basis element k satisfies f⁽ⁱ⁾(0) = δ_{ik}, so the Wronskian matrix at
/// the origin is the identity. The recurrence comes from
/// f⁽ʳ⁾ = (x+λ)f + Σ aₜ f⁽ᵗ⁾, coefficient by coefficient.
pub fn kernel_basis_shifted(
    l0: &AiryVacuum,
    lambda: &Rational,
    truncation: usize,
) -> Result<SeriesBasis, Error> {
    let r = l0.order() as usize;
    if truncation < r + 2 {
        return Err(Error::TruncationInsufficient {
            truncation,
            needed: r + 2,
        });
    }
    // falling(m, t) = (m+1)(m+2)...(m+t)
    let falling = |m: usize, t: usize| -> Rational {
        let mut p = Rational::one();
        for s in 1..=t {
            p *= rat((m + s) as i64);
        }
        p
    };
    let mut functions = Vec::with_capacity(r);
    for k in 0..r {
        let mut c = vec![Rational::zero(); truncation + 1];
        c[k] = falling(0, k).recip(); // 1/k!
        for m in 0..=truncation.saturating_sub(r) {
            let mut rhs = lambda * &c[m];
            if m > 0 {
                rhs += &c[m - 1];
            }
            for t in 1..=r.saturating_sub(2) {
                rhs += l0.constant(t) * &c[m + t] * falling(m, t);
            }
            c[m + r] = rhs / falling(m, r);
        }
        functions.push(Series::new(c));
    }
    Ok(SeriesBasis {
        truncation,
        functions,
    })
}

/// Taylor basis of `ker L₀` itself.
pub fn kernel_series_basis(l0: &AiryVacuum, truncation: usize) -> Result<SeriesBasis, Error> {
    kernel_basis_shifted(l0, &Rational::zero(), truncation)
}

/// Applies a polynomial-coefficient operator to a truncated series.
pub fn apply_to_series(op: &DiffOp, f: &Series) -> Result<Series, Error> {
    let ord = op.order().unwrap_or(0);
    let window = f.trusted_len().saturating_sub(ord);
    let mut acc = Series::new(vec![Rational::zero(); window]);
    let mut deriv = f.clone();
    for (k, c) in op.coeffs().iter().enumerate() {
        let p = c.as_poly().ok_or(Error::NonPolynomialCoefficient(k))?;
        if !p.is_zero() {
            acc = acc.add(&deriv.mul_poly(p));
        }
        deriv = deriv.derivative();
    }
    Ok(acc)
}

/// The cusp-deformed kernel series γ·h + h′ for one cusp, spanning the
/// same space as the distribution δ_λ∘(∂+γ) applied to the shifted kernel.
fn cusp_functions(
    l0: &AiryVacuum,
    lambda: &Rational,
    gamma: &Rational,
    truncation: usize,
) -> Result<Vec<Series>, Error> {
    let basis = kernel_basis_shifted(l0, lambda, truncation)?;
    Ok(basis
        .functions
        .iter()
        .map(|h| h.derivative().add(&h.scale(gamma)))
        .collect())
}

/// Series-side reconstruction of K̄, independent of the determinant route.
///
/// Solves for the unique operator Σ wⱼ(x)∂ʲ of order N with polynomial
/// coefficients of degree ≤ 2n and monic degree-n leading coefficient that
/// annihilates every cusp-deformed kernel series through the trusted
/// window. Degree bookkeeping rejects truncations too short to pin the
/// solution down.
pub fn kbar_series_oracle(
    l0: &AiryVacuum,
    divisor: &CuspDivisor,
    truncation: usize,
) -> Result<DiffOp, Error> {
    let r = l0.order() as usize;
    let n = divisor.len();
    let big_n = r * n;
    if n == 0 {
        return Ok(DiffOp::one());
    }
    let deg_bound = 2 * n;
    let needed_min = big_n + deg_bound + 3;
    if truncation < needed_min {
        return Err(Error::TruncationInsufficient {
            truncation,
            needed: needed_min,
        });
    }

    // ψ_s and their derivatives through order N.
    let mut derivs: Vec<Vec<Series>> = Vec::with_capacity(big_n);
    for cusp in divisor.cusps() {
        for psi in cusp_functions(l0, &cusp.lambda, &cusp.gamma, truncation)? {
            let mut row = Vec::with_capacity(big_n + 1);
            row.push(psi);
            for j in 1..=big_n {
                let next = row[j - 1].derivative();
                row.push(next);
            }
            derivs.push(row);
        }
    }

    // Unknowns: wⱼ,ₜ for j < N, t ≤ 2n, then the n free coefficients of τ.
    let w_width = deg_bound + 1;
    let unknowns = big_n * w_width + n;
    let equations_per = truncation - big_n;
    let mut a = Vec::with_capacity(big_n * equations_per);
    let mut b = Vec::with_capacity(big_n * equations_per);
    for row in &derivs {
        let top = &row[big_n];
        for e in 0..equations_per {
            let mut eq = vec![Rational::zero(); unknowns];
            for (j, psi_j) in row.iter().enumerate().take(big_n) {
                for t in 0..w_width.min(e + 1) {
                    eq[j * w_width + t] = psi_j.coeff(e - t);
                }
            }
            for t in 0..n.min(e + 1) {
                eq[big_n * w_width + t] = top.coeff(e - t);
            }
            a.push(eq);
            b.push(if e >= n {
                -top.coeff(e - n)
            } else {
                Rational::zero()
            });
        }
    }

    let solution = solve_linear(&a, &b)?;
    if !solution.nullspace.is_empty() {
        return Err(Error::TruncationInsufficient {
            truncation,
            needed: truncation + big_n,
        });
    }
    let x = solution
        .particular
        .expect("the bordered-determinant operator satisfies these equations");

    let mut coeffs: Vec<RatFunc> = Vec::with_capacity(big_n + 1);
    for j in 0..big_n {
        let slice = &x[j * w_width..(j + 1) * w_width];
        coeffs.push(RatFunc::from_poly(Poly::new(slice.to_vec())));
    }
    let mut tau_coeffs = x[big_n * w_width..].to_vec();
    tau_coeffs.push(Rational::one());
    coeffs.push(RatFunc::from_poly(Poly::new(tau_coeffs)));
    Ok(DiffOp::new(coeffs))
}
