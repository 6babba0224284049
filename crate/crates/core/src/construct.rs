//! The bordered-determinant construction of K̄ and ♭K̄.
//!
//! For a vacuum L₀ of order r and a divisor of n cusps (λᵢ, γᵢ), the
//! operator K̄ of order N = rn arises from an (N+1)×(N+1) determinant over
//! ℚ[x, z, ξ]: block rows indexed by the z-power j carry
//! α_{ij}·I + λᵢʲ·B(x+λᵢ) per cusp, with α_{ij} = γᵢλᵢʲ + jλᵢ^{j−1} and
//! B the companion matrix of the vacuum; the border column holds zʲξᵏ at
//! row rj+k and zⁿ in the corner. The substitution xⁱzʲξᵏ ↦ xⁱ∘∂ᵏ∘L₀ʲ
//! yields K̄; swapping x and z first yields ♭K̄. The determinant is scaled
//! so that the ∂ᴺ coefficient τ(x) comes out monic of degree n.

use num_traits::{One, Signed, Zero};

use crate::diffop::{AiryVacuum, DiffOp};
use crate::divisor::CuspDivisor;
use crate::error::Error;
use crate::matrix::PolyMatrix;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{rat, Rational};
use crate::tripoly::TriPoly;

/// Output of the construction: the operator pair and its invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct KbarResult {
    /// K̄, with polynomial coefficients, of order N = rn.
    pub kbar: DiffOp,
    /// Leading coefficient of K̄; monic of degree n.
    pub tau: Poly,
    /// Spectral polynomial q(z) = ∏(z − λᵢ).
    pub q: Poly,
    /// ♭K̄, also of order N.
    pub flat_kbar: DiffOp,
    /// The scaled determinant in ℚ[x, z, ξ].
    pub tripoly: TriPoly,
    /// Sign of the raw determinant's normalization scalar.
    pub sign: i8,
    /// Scalar the raw determinant was divided by (±∏_{i<j}(λᵢ−λⱼ)ʳ).
    pub scale: Rational,
}

impl KbarResult {
    /// Monic version K = (1/τ)·K̄.
    pub fn monic(&self) -> DiffOp {
        self.kbar.normalize_monic().expect("kbar is nonzero")
    }
}

/// α_{ij} = γᵢλᵢʲ + jλᵢ^{j−1}.
fn alpha(gamma: &Rational, lambda: &Rational, j: usize) -> Rational {
    let lam_pow = |e: usize| -> Rational {
        let mut p = Rational::one();
        for _ in 0..e {
            p *= lambda;
        }
        p
    };
    let mut a = gamma * lam_pow(j);
    if j > 0 {
        a += rat(j as i64) * lam_pow(j - 1);
    }
    a
}

/// Companion matrix B(x+λ) of the vacuum, as degree-≤1 entries in x.
fn companion_block(l0: &AiryVacuum, lambda: &Rational) -> Vec<Vec<TriPoly>> {
    let r = l0.order() as usize;
    let mut b = vec![vec![TriPoly::zero(); r]; r];
    for (s, row) in b.iter_mut().enumerate().take(r - 1) {
        row[s + 1] = TriPoly::one();
    }
    // bottom row: (x+λ, a₁, ..., a_{r−2}, 0)
    b[r - 1][0] = &TriPoly::term(rat(1), (1, 0, 0)) + &TriPoly::constant(lambda.clone());
    for t in 1..=r.saturating_sub(2) {
        b[r - 1][t] = TriPoly::constant(l0.constant(t));
    }
    b
}

/// Assembles the (N+1)×(N+1) bordered matrix over ℚ[x, z, ξ].
pub fn build_bordered_matrix(l0: &AiryVacuum, divisor: &CuspDivisor) -> PolyMatrix {
    let r = l0.order() as usize;
    let n = divisor.len();
    let big_n = r * n;
    let mut m = PolyMatrix::new(big_n + 1, big_n + 1);

    for (i, cusp) in divisor.cusps().iter().enumerate() {
        let block = companion_block(l0, &cusp.lambda);
        let lam = &cusp.lambda;
        let mut lam_j = Rational::one();
        for j in 0..n {
            let a_ij = alpha(&cusp.gamma, lam, j);
            for l in 0..r {
                for col in 0..r {
                    let mut entry = block[l][col].scale(&lam_j);
                    if l == col {
                        entry = &entry + &TriPoly::constant(a_ij.clone());
                    }
                    m.set(r * j + l, r * i + col, entry);
                }
            }
            lam_j *= lam;
        }
        // bottom row: first row of the j = n block, (α_{in}, λᵢⁿ, 0, …, 0)
        let a_in = alpha(&cusp.gamma, lam, n);
        m.set(big_n, r * i, TriPoly::constant(a_in));
        m.set(big_n, r * i + 1, TriPoly::constant(lam_j.clone()));
    }

    // border column: zʲξᵏ at row rj+k, zⁿ in the corner
    for row in 0..big_n {
        let (j, k) = (row / r, row % r);
        m.set(row, big_n, TriPoly::term(rat(1), (0, j as u32, k as u32)));
    }
    m.set(big_n, big_n, TriPoly::term(rat(1), (0, n as u32, 0)));
    m
}

/// Substitutes xⁱzʲξᵏ ↦ xⁱ∘∂ᵏ∘L₀ʲ, producing a polynomial-coefficient operator.
pub fn substitute_tripoly(t: &TriPoly, l0: &AiryVacuum) -> DiffOp {
    let (_, max_z, max_xi) = t.max_degrees();
    let vac = l0.operator();
    let mut vac_pows: Vec<DiffOp> = Vec::with_capacity(max_z as usize + 1);
    vac_pows.push(DiffOp::one());
    for j in 1..=max_z as usize {
        let next = &vac_pows[j - 1] * &vac;
        vac_pows.push(next);
    }
    let mut out = DiffOp::zero();
    for j in 0..=max_z {
        for k in 0..=max_xi {
            let p = t.x_poly_of(j, k);
            if p.is_zero() {
                continue;
            }
            let dk = DiffOp::term(RatFunc::one(), k as usize);
            let piece = &dk * &vac_pows[j as usize];
            out = &out + &piece.scale_fn(&RatFunc::from_poly(p));
        }
    }
    out
}

/// Builds K̄, τ, q and ♭K̄ for the given vacuum and divisor.
pub fn build_kbar(l0: &AiryVacuum, divisor: &CuspDivisor) -> Result<KbarResult, Error> {
    let n = divisor.len();
    let matrix = build_bordered_matrix(l0, divisor);
    let raw = matrix.det().expect("bordered matrix is square");

    // Scale so the z^n coefficient (a polynomial in x) is monic: the raw
    // x^n z^n coefficient is ±∏_{i<j}(λᵢ−λⱼ)^r, nonzero for distinct λᵢ.
    let scale = raw.coeff((n as u32, n as u32, 0));
    assert!(
        !scale.is_zero(),
        "degenerate determinant: leading tau coefficient vanished"
    );
    let sign = if scale.is_negative() { -1 } else { 1 };
    let tripoly = raw.scale(&scale.recip());

    let tau = tripoly.x_poly_of(n as u32, 0);
    debug_assert!(tau.is_monic() && tau.degree() == Some(n));

    let kbar = substitute_tripoly(&tripoly, l0);
    let flat_kbar = substitute_tripoly(&tripoly.swap_x_z(), l0);

    Ok(KbarResult {
        kbar,
        tau,
        q: divisor.q(),
        flat_kbar,
        tripoly,
        sign,
        scale,
    })
}

/// ♭K̄ from an already-built result: swap x and z, then substitute.
pub fn flat_kbar(result: &KbarResult, l0: &AiryVacuum) -> DiffOp {
    substitute_tripoly(&result.tripoly.swap_x_z(), l0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::weyl::WeylOp;

    fn divisor1(lambda: i64, gamma: i64) -> CuspDivisor {
        CuspDivisor::from_pairs(&[(rat(lambda), rat(gamma))]).unwrap()
    }

    /// K̄ for r = 2, n = 1:
    /// (x+λ−γ²)∂² − ∂ + (γ²−λ−x)x + γ + γ²λ − λ² − λx.
    fn kbar_r2_reference(lambda: &Rational, gamma: &Rational) -> DiffOp {
        let g2 = gamma * gamma;
        let l2 = lambda * lambda;
        let lead = Poly::new(vec![lambda - &g2, rat(1)]);
        let c0 = Poly::new(vec![
            gamma + &(&g2 * lambda) - &l2,
            &g2 - lambda - lambda,
            rat(-1),
        ]);
        DiffOp::new(vec![
            RatFunc::from_poly(c0),
            RatFunc::constant(rat(-1)),
            RatFunc::from_poly(lead),
        ])
    }

    /// ♭K̄ for r = 2, n = 1:
    /// (x−λ)∂² − ∂ + (λ−x)x + γ + γ²λ − λ² − (γ²−λ)x.
    fn flat_r2_reference(lambda: &Rational, gamma: &Rational) -> DiffOp {
        let g2 = gamma * gamma;
        let l2 = lambda * lambda;
        let lead = Poly::new(vec![-lambda.clone(), rat(1)]);
        let c0 = Poly::new(vec![
            gamma + &(&g2 * lambda) - &l2,
            lambda - &g2 + lambda,
            rat(-1),
        ]);
        DiffOp::new(vec![
            RatFunc::from_poly(c0),
            RatFunc::constant(rat(-1)),
            RatFunc::from_poly(lead),
        ])
    }

    #[test]
    fn bordered_matrix_r2_n1_reference_form() {
        // [[γ, 1, 1], [λ+x, γ, ξ], [1+γλ, λ, z]]
        let l0 = AiryVacuum::airy();
        let c = CuspDivisor::from_pairs(&[(rat(5), rat(7))]).unwrap();
        let m = build_bordered_matrix(&l0, &c);
        assert_eq!(m.at(0, 0), &TriPoly::constant(rat(7)));
        assert_eq!(m.at(0, 1), &TriPoly::one());
        assert_eq!(m.at(0, 2), &TriPoly::one());
        let xl = &TriPoly::term(rat(1), (1, 0, 0)) + &TriPoly::constant(rat(5));
        assert_eq!(m.at(1, 0), &xl);
        assert_eq!(m.at(1, 1), &TriPoly::constant(rat(7)));
        assert_eq!(m.at(1, 2), &TriPoly::term(rat(1), (0, 0, 1)));
        assert_eq!(m.at(2, 0), &TriPoly::constant(rat(36))); // 1 + γλ
        assert_eq!(m.at(2, 1), &TriPoly::constant(rat(5)));
        assert_eq!(m.at(2, 2), &TriPoly::term(rat(1), (0, 1, 0)));
    }

    #[test]
    fn bordered_matrix_r3_n1_reference_form() {
        // [[γ,1,0,1],[0,γ,1,ξ],[λ+x,a,γ,ξ²],[1+γλ,λ,0,z]]
        let l0 = AiryVacuum::new(3, vec![rat(4)]).unwrap();
        let c = CuspDivisor::from_pairs(&[(rat(2), rat(3))]).unwrap();
        let m = build_bordered_matrix(&l0, &c);
        assert_eq!(m.at(0, 0), &TriPoly::constant(rat(3)));
        assert_eq!(m.at(0, 1), &TriPoly::one());
        assert_eq!(m.at(0, 2), &TriPoly::zero());
        assert_eq!(m.at(1, 0), &TriPoly::zero());
        assert_eq!(m.at(1, 1), &TriPoly::constant(rat(3)));
        assert_eq!(m.at(1, 2), &TriPoly::one());
        let xl = &TriPoly::term(rat(1), (1, 0, 0)) + &TriPoly::constant(rat(2));
        assert_eq!(m.at(2, 0), &xl);
        assert_eq!(m.at(2, 1), &TriPoly::constant(rat(4)));
        assert_eq!(m.at(2, 2), &TriPoly::constant(rat(3)));
        assert_eq!(m.at(3, 0), &TriPoly::constant(rat(7))); // 1 + γλ
        assert_eq!(m.at(3, 1), &TriPoly::constant(rat(2)));
        assert_eq!(m.at(3, 2), &TriPoly::zero());
        // border column: 1, ξ, ξ², z
        assert_eq!(m.at(0, 3), &TriPoly::one());
        assert_eq!(m.at(1, 3), &TriPoly::term(rat(1), (0, 0, 1)));
        assert_eq!(m.at(2, 3), &TriPoly::term(rat(1), (0, 0, 2)));
        assert_eq!(m.at(3, 3), &TriPoly::term(rat(1), (0, 1, 0)));
    }

    #[test]
    fn kbar_r2_lambda0_gamma1() {
        // K̄ = (x−1)∂² − ∂ + (1−x)x + 1
        let result = build_kbar(&AiryVacuum::airy(), &divisor1(0, 1)).unwrap();
        assert_eq!(result.kbar, kbar_r2_reference(&rat(0), &rat(1)));
        assert_eq!(result.flat_kbar, flat_r2_reference(&rat(0), &rat(1)));
        assert_eq!(result.tau, Poly::from_ints(&[-1, 1]));
        assert_eq!(result.q, Poly::from_ints(&[0, 1]));
    }

    #[test]
    fn kbar_r2_general_rational_parameters() {
        let l0 = AiryVacuum::airy();
        for (lam, gam) in [
            (rat(0), rat(0)),
            (rat(1), rat(2)),
            (ratio(1, 2), ratio(-2, 3)),
            (rat(-3), ratio(5, 7)),
        ] {
            let c = CuspDivisor::from_pairs(&[(lam.clone(), gam.clone())]).unwrap();
            let result = build_kbar(&l0, &c).unwrap();
            assert_eq!(result.kbar, kbar_r2_reference(&lam, &gam));
            assert_eq!(result.flat_kbar, flat_r2_reference(&lam, &gam));
        }
    }

    #[test]
    fn kbar_r3_a0_lambda0_gamma0() {
        // K̄ = x∂³ − ∂² − x², self-♭ at this fixed point
        let l0 = AiryVacuum::new(3, vec![rat(0)]).unwrap();
        let result = build_kbar(&l0, &divisor1(0, 0)).unwrap();
        let expected = DiffOp::new(vec![
            RatFunc::from_poly(Poly::from_ints(&[0, 0, -1])),
            RatFunc::zero(),
            RatFunc::constant(rat(-1)),
            RatFunc::from_poly(Poly::x()),
        ]);
        assert_eq!(result.kbar, expected);
        assert_eq!(result.flat_kbar, expected);
    }

    #[test]
    fn empty_divisor_is_vacuous() {
        let result = build_kbar(&AiryVacuum::airy(), &CuspDivisor::empty()).unwrap();
        assert!(result.kbar.is_one());
        assert!(result.flat_kbar.is_one());
        assert!(result.tau.is_one());
        assert!(result.q.is_one());
    }

    #[test]
    fn flat_route_agreement() {
        // Substitution route equals the Weyl-algebra anti-automorphism route.
        let cases: Vec<(AiryVacuum, CuspDivisor)> = vec![
            (AiryVacuum::airy(), divisor1(0, 1)),
            (AiryVacuum::airy(), divisor1(2, -1)),
            (
                AiryVacuum::airy(),
                CuspDivisor::from_pairs(&[(rat(0), rat(1)), (rat(1), rat(-2))]).unwrap(),
            ),
            (AiryVacuum::new(3, vec![rat(1)]).unwrap(), divisor1(1, 1)),
            (
                AiryVacuum::new(4, vec![rat(1), rat(-2)]).unwrap(),
                divisor1(-1, 2),
            ),
        ];
        for (l0, c) in cases {
            let result = build_kbar(&l0, &c).unwrap();
            let via_weyl = WeylOp::from_diffop(&result.kbar)
                .unwrap()
                .flat(&l0)
                .to_diffop();
            assert_eq!(result.flat_kbar, via_weyl);
            assert_eq!(flat_kbar(&result, &l0), result.flat_kbar);
        }
    }

    #[test]
    fn structural_invariants_small_grid() {
        for (l0, pairs) in [
            (AiryVacuum::airy(), vec![(rat(0), rat(1)), (rat(2), rat(3))]),
            (
                AiryVacuum::new(3, vec![ratio(1, 2)]).unwrap(),
                vec![(rat(1), rat(-1))],
            ),
        ] {
            let c = CuspDivisor::from_pairs(&pairs).unwrap();
            let n = c.len();
            let big_n = c.operator_order(l0.order());
            let result = build_kbar(&l0, &c).unwrap();
            assert_eq!(result.kbar.order(), Some(big_n));
            assert!(result.kbar.has_polynomial_coeffs());
            assert!(result.tau.is_monic());
            assert_eq!(result.tau.degree(), Some(n));
            assert_eq!(result.kbar.poly_coeff(big_n).unwrap(), result.tau);
            // second coefficient is −τ′
            assert_eq!(
                result.kbar.poly_coeff(big_n - 1).unwrap(),
                -&result.tau.derivative()
            );
            assert_eq!(result.flat_kbar.order(), Some(big_n));
            // Degree bound in the Σ xⁱ∂ʲ·K_{i,j}(L₀) representation: every
            // determinant polynomial K_{i,j} has degree at most n, which is
            // what caps the order of ♭K̄ at N.
            assert!(result.tripoly.max_degrees().0 as usize <= n);
            // The top two coefficients of ♭K̄ themselves stay within degree n.
            assert!(
                result.flat_kbar.poly_coeff(big_n).unwrap().degree() <= Some(n)
            );
            assert!(
                result
                    .flat_kbar
                    .poly_coeff(big_n - 1)
                    .unwrap()
                    .degree()
                    .unwrap_or(0)
                    <= n
            );
        }
    }
}
