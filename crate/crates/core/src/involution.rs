//! The spectral involution β and its exact verification.
//!
//! C^β is the divisor annihilating K̄(z,∂_z): its supports are the roots
//! of τ, and each γ comes from the Wronskian second-coefficient formula
//! γ = (v(μ) − w″(μ)) / w′(μ). On divisors whose τ splits over ℚ the
//! involution identities τ^β = q, ♭K̄ = K̄_{C^β} and β² = id are checked
//! coefficient-exactly; otherwise only the root-free fragment is.

use std::fmt;

use num_traits::Zero;

use crate::construct::{build_kbar, KbarResult};
use crate::diffop::{AiryVacuum, DiffOp};
use crate::divisor::{Cusp, CuspDivisor};
use crate::error::Error;
use crate::poly::Poly;
use crate::rational::{format_rational, Rational};

/// γ of the unique first-order distribution at μ annihilating a Wronskian
/// operator with leading coefficient w and ∂^{m−2} coefficient v.
pub fn gamma_from_wronskian(kbar: &DiffOp, mu: &Rational) -> Result<Rational, Error> {
    let ord = kbar.order().ok_or(Error::ZeroOperator)?;
    if ord < 2 {
        return Err(Error::NotSimpleRoot(format_rational(mu)));
    }
    let w = kbar.poly_coeff(ord)?;
    let dw = w.derivative();
    if !w.eval(mu).is_zero() || dw.eval(mu).is_zero() {
        return Err(Error::NotSimpleRoot(format_rational(mu)));
    }
    let v = kbar.poly_coeff(ord - 2)?;
    let ddw = dw.derivative();
    Ok((v.eval(mu) - ddw.eval(mu)) / dw.eval(mu))
}

/// Normal form of δ_μ∘(∂+γ)∘Q for a polynomial-coefficient Q = Σ aⱼ(z)∂ʲ:
/// the returned entry j is the scalar weight of δ_μ∘∂ʲ, namely
/// a_{j−1}(μ) + aⱼ′(μ) + γ·aⱼ(μ).
pub fn distribution_apply(
    mu: &Rational,
    gamma: &Rational,
    op: &DiffOp,
) -> Result<Vec<Rational>, Error> {
    let ord = op.order().ok_or(Error::ZeroOperator)?;
    let mut out = Vec::with_capacity(ord + 2);
    for j in 0..=ord + 1 {
        let mut b = Rational::zero();
        if j > 0 && j - 1 <= ord {
            b += op.poly_coeff(j - 1)?.eval(mu);
        }
        if j <= ord {
            let a_j = op.poly_coeff(j)?;
            b += a_j.derivative().eval(mu) + gamma * a_j.eval(mu);
        }
        out.push(b);
    }
    Ok(out)
}

/// True when δ_μ∘(∂+γ) annihilates the operator read in the z-variable.
pub fn annihilates(mu: &Rational, gamma: &Rational, op: &DiffOp) -> Result<bool, Error> {
    Ok(distribution_apply(mu, gamma, op)?.iter().all(Zero::is_zero))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaStatus {
    /// τ split over ℚ; the image divisor was built.
    Computed,
    /// τ is squarefree but has non-rational roots; only root-free
    /// invariants apply.
    IrrationalRoots,
}

/// The image divisor C^β together with its operator data.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaResult {
    pub source: CuspDivisor,
    pub status: BetaStatus,
    pub target: Option<CuspDivisor>,
    pub kbar_beta: Option<DiffOp>,
    pub tau_beta: Option<Poly>,
}

/// Computes C^β from the roots of τ. Errors outside 𝔻₀ (τ not squarefree).
pub fn compute_beta(
    l0: &AiryVacuum,
    divisor: &CuspDivisor,
    result: &KbarResult,
) -> Result<BetaResult, Error> {
    if !result.tau.is_squarefree() {
        return Err(Error::TauNotSquarefree);
    }
    let roots = result.tau.rational_roots();
    if roots.len() != divisor.len() {
        return Ok(BetaResult {
            source: divisor.clone(),
            status: BetaStatus::IrrationalRoots,
            target: None,
            kbar_beta: None,
            tau_beta: None,
        });
    }
    let mut cusps = Vec::with_capacity(roots.len());
    for mu in &roots {
        let gamma = gamma_from_wronskian(&result.kbar, mu)?;
        cusps.push(Cusp {
            lambda: mu.clone(),
            gamma,
        });
    }
    let target = CuspDivisor::new(cusps)?;
    let image = build_kbar(l0, &target)?;
    Ok(BetaResult {
        source: divisor.clone(),
        status: BetaStatus::Computed,
        target: Some(target),
        kbar_beta: Some(image.kbar),
        tau_beta: Some(image.tau),
    })
}

/// One verified identity with its exact residual (empty on pass).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub residual: String,
}

impl IdentityCheck {
    fn of_poly(name: &str, lhs: &Poly, rhs: &Poly) -> Self {
        let diff = lhs - rhs;
        IdentityCheck {
            name: name.to_string(),
            pass: diff.is_zero(),
            residual: if diff.is_zero() {
                String::new()
            } else {
                diff.to_string()
            },
        }
    }

    fn of_op(name: &str, lhs: &DiffOp, rhs: &DiffOp) -> Self {
        let diff = lhs - rhs;
        IdentityCheck {
            name: name.to_string(),
            pass: diff.is_zero(),
            residual: if diff.is_zero() {
                String::new()
            } else {
                diff.to_string()
            },
        }
    }

    fn of_bool(name: &str, pass: bool, detail: &str) -> Self {
        IdentityCheck {
            name: name.to_string(),
            pass,
            residual: if pass {
                String::new()
            } else {
                detail.to_string()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionStatus {
    Verified,
    IrrationalRoots,
    NotSquarefree,
}

/// Outcome of the involution identity suite over one divisor.
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionReport {
    pub status: InvolutionStatus,
    pub source: CuspDivisor,
    pub tau: Poly,
    pub q: Poly,
    pub target: Option<CuspDivisor>,
    pub checks: Vec<IdentityCheck>,
}

impl InvolutionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Root-free fragment: the top two coefficients of ♭K̄ are q and −q′.
fn root_free_checks(result: &KbarResult) -> Vec<IdentityCheck> {
    let ord = result.flat_kbar.order().unwrap_or(0);
    let lead = result.flat_kbar.poly_coeff(ord).unwrap_or_else(|_| Poly::zero());
    let mut checks = vec![IdentityCheck::of_poly(
        "leading coefficient of flat(kbar) equals q",
        &lead,
        &result.q,
    )];
    let sub = if ord > 0 {
        result
            .flat_kbar
            .poly_coeff(ord - 1)
            .unwrap_or_else(|_| Poly::zero())
    } else {
        Poly::zero()
    };
    checks.push(IdentityCheck::of_poly(
        "subleading coefficient of flat(kbar) equals -q'",
        &sub,
        &-&result.q.derivative(),
    ));
    checks
}

/// Runs the full involution suite: τ^β = q, ♭K̄ = K̄_{C^β}, β² = id.
/// Precondition failures are reported in the status, not thrown.
pub fn verify_involution(l0: &AiryVacuum, divisor: &CuspDivisor) -> Result<InvolutionReport, Error> {
    let result = build_kbar(l0, divisor)?;
    if !result.tau.is_squarefree() {
        return Ok(InvolutionReport {
            status: InvolutionStatus::NotSquarefree,
            source: divisor.clone(),
            tau: result.tau,
            q: result.q,
            target: None,
            checks: Vec::new(),
        });
    }
    let beta = compute_beta(l0, divisor, &result)?;
    let mut checks = root_free_checks(&result);
    if beta.status == BetaStatus::IrrationalRoots {
        return Ok(InvolutionReport {
            status: InvolutionStatus::IrrationalRoots,
            source: divisor.clone(),
            tau: result.tau,
            q: result.q,
            target: None,
            checks,
        });
    }

    let target = beta.target.clone().expect("computed");
    checks.push(IdentityCheck::of_poly(
        "tau of the image divisor equals q",
        beta.tau_beta.as_ref().expect("computed"),
        &result.q,
    ));
    checks.push(IdentityCheck::of_op(
        "flat(kbar) equals kbar of the image divisor",
        &result.flat_kbar,
        beta.kbar_beta.as_ref().expect("computed"),
    ));

    let image = build_kbar(l0, &target)?;
    let beta_twice = compute_beta(l0, &target, &image)?;
    let back = beta_twice
        .target
        .as_ref()
        .map(|t| t.same_support(divisor))
        .unwrap_or(false);
    checks.push(IdentityCheck::of_bool(
        "beta applied twice returns the original divisor",
        back,
        &format!(
            "came back to {}",
            beta_twice
                .target
                .map(|t| t.to_string())
                .unwrap_or_else(|| "no rational image".to_string())
        ),
    ));

    Ok(InvolutionReport {
        status: InvolutionStatus::Verified,
        source: divisor.clone(),
        tau: result.tau,
        q: result.q,
        target: Some(target),
        checks,
    })
}

/// The common eigenfunction f_C(x,z) = (1/q(z))·K f̂(x,z), kept symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalEigenfunction {
    pub intertwiner: DiffOp,
    pub q: Poly,
    pub vacuum: AiryVacuum,
}

impl FormalEigenfunction {
    pub fn new(result: &KbarResult, vacuum: &AiryVacuum) -> Self {
        FormalEigenfunction {
            intertwiner: result.monic(),
            q: result.q.clone(),
            vacuum: vacuum.clone(),
        }
    }
}

impl fmt::Display for FormalEigenfunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(1/({}))*[{}] applied to f(x+z),  f in ker L0",
            self.q.to_string_in("z"),
            self.intertwiner
        )
    }
}

/// Outcome of the eigenfunction symmetry reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub checks: Vec<IdentityCheck>,
    pub eigenfunction: FormalEigenfunction,
    pub image_eigenfunction: Option<FormalEigenfunction>,
    /// True when the verified identities imply f_C(x,z) = f_{C^β}(z,x).
    pub symmetry_established: bool,
}

/// Reduces the eigenfunction symmetry to already-verified operator
/// identities: (1/τ)·K̄ = K, plus τ^β = q and ♭K̄ = K̄_{C^β}.
pub fn eigenfunction_symmetry_check(
    l0: &AiryVacuum,
    divisor: &CuspDivisor,
) -> Result<SymmetryReport, Error> {
    let result = build_kbar(l0, divisor)?;
    let report = verify_involution(l0, divisor)?;

    let mut checks = Vec::new();
    let scaled = result
        .kbar
        .scale_fn(&crate::ratfunc::RatFunc::new(Poly::one(), result.tau.clone()));
    checks.push(IdentityCheck::of_op(
        "kbar scaled by 1/tau equals the monic intertwiner",
        &scaled,
        &result.monic(),
    ));
    checks.extend(report.checks.iter().cloned());

    let image_eigenfunction = match (&report.status, &report.target) {
        (InvolutionStatus::Verified, Some(target)) => {
            let image = build_kbar(l0, target)?;
            Some(FormalEigenfunction::new(&image, l0))
        }
        _ => None,
    };
    let symmetry_established = report.status == InvolutionStatus::Verified
        && checks.iter().all(|c| c.pass);
    Ok(SymmetryReport {
        checks,
        eigenfunction: FormalEigenfunction::new(&result, l0),
        image_eigenfunction,
        symmetry_established,
    })
}
