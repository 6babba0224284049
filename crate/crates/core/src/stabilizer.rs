//! Stabilizer rings and the Darboux-conjugated commutative ring.
//!
//! R_C is the ring of polynomials whose derivative vanishes at every cusp
//! support; R_{T,L} is the ring of p with T∘p(L) in the left ideal 𝒟T,
//! decided by exact remainder vanishing. Conjugating stabilizer elements
//! through the monic intertwiner K produces the commutative ring of rank r.

use num_traits::{One, Zero};

use crate::construct::KbarResult;
use crate::diffop::{AiryVacuum, DiffOp};
use crate::divisor::CuspDivisor;
use crate::error::Error;
use crate::matrix::{nullspace, row_space_canonical};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{rat, Rational};

/// Basis of a degree-bounded slice of a stabilizer ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerBasis {
    pub degree_bound: usize,
    pub basis: Vec<Poly>,
}

impl StabilizerBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coefficient vectors padded to the degree bound, in canonical
    /// reduced-echelon form; equal subspaces give equal output.
    pub fn canonical_vectors(&self) -> Vec<Vec<Rational>> {
        let width = self.degree_bound + 1;
        let rows: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|p| {
                let mut v = p.coeffs().to_vec();
                v.resize(width, Rational::zero());
                v
            })
            .collect();
        row_space_canonical(&rows)
    }

    pub fn same_subspace(&self, other: &StabilizerBasis) -> bool {
        self.degree_bound == other.degree_bound
            && self.canonical_vectors() == other.canonical_vectors()
    }
}

fn basis_from_nullspace(vectors: Vec<Vec<Rational>>, degree_bound: usize) -> StabilizerBasis {
    let basis = vectors.into_iter().map(Poly::new).collect();
    StabilizerBasis {
        degree_bound,
        basis,
    }
}

/// {p : deg p ≤ d, p′(λᵢ) = 0 for every cusp}, by exact elimination.
pub fn stabilizer_closed(divisor: &CuspDivisor, degree_bound: usize) -> StabilizerBasis {
    let width = degree_bound + 1;
    let mut rows = Vec::with_capacity(divisor.len());
    for cusp in divisor.cusps() {
        let mut row = vec![Rational::zero(); width];
        let mut lam_pow = Rational::one();
        for k in 1..width {
            row[k] = rat(k as i64) * &lam_pow;
            lam_pow *= &cusp.lambda;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        // no constraints: every polynomial through the bound
        let basis = (0..width).map(|k| Poly::monomial(rat(1), k)).collect();
        return StabilizerBasis {
            degree_bound,
            basis,
        };
    }
    let vectors = nullspace(&rows).expect("well-formed system");
    basis_from_nullspace(vectors, degree_bound)
}

/// True when p′ vanishes at every cusp support.
pub fn stabilizes(divisor: &CuspDivisor, p: &Poly) -> bool {
    let dp = p.derivative();
    divisor.cusps().iter().all(|c| dp.eval(&c.lambda).is_zero())
}

/// {p : deg p ≤ d, T∘p(L) ⊂ 𝒟T}, by exact remainder elimination.
///
/// Right division by T is linear in the dividend, so the remainder of
/// T∘p(L) is Σ cₖ·rem(T∘Lᵏ, T); clearing denominators turns remainder
/// vanishing into a rational linear system in the cₖ.
pub fn stabilizer_generic(
    t: &DiffOp,
    l: &DiffOp,
    degree_bound: usize,
) -> Result<StabilizerBasis, Error> {
    let t_ord = t.order().ok_or(Error::ZeroOperator)?;
    l.order().ok_or(Error::ZeroOperator)?;
    let width = degree_bound + 1;

    // Fraction-free remainders: prem_k = lead^{s_k}·rem(T∘Lᵏ, T). Rescaling
    // every row to the common power lead^{s_max} keeps the nullspace of the
    // remainder map unchanged while avoiding rational-function growth.
    let mut pseudo = Vec::with_capacity(width);
    let mut power = t.clone();
    let mut s_max = 0usize;
    for k in 0..width {
        if k > 0 {
            power = &power * l;
        }
        let (rem, s) = power.pseudo_right_rem(t)?;
        s_max = s_max.max(s);
        pseudo.push((rem, s));
    }
    let lead = t.leading().expect("nonzero operator");
    let remainders: Vec<DiffOp> = pseudo
        .into_iter()
        .map(|(rem, s)| {
            let mut factor = crate::ratfunc::RatFunc::one();
            for _ in s..s_max {
                factor = &factor * lead;
            }
            rem.scale_fn(&factor)
        })
        .collect();

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for pos in 0..t_ord {
        // common denominator across the k-remainders at this ∂-power
        let mut lcm = Poly::one();
        for rem in &remainders {
            let den = rem.coeff(pos).denominator().clone();
            lcm = (&lcm * &den).exact_div(&lcm.gcd(&den)).expect("gcd divides");
        }
        let cleared: Vec<Poly> = remainders
            .iter()
            .map(|rem| {
                let f = rem.coeff(pos);
                let extra = lcm.exact_div(f.denominator()).expect("lcm is a multiple");
                f.numerator() * &extra
            })
            .collect();
        let max_deg = cleared
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .map_or(0, |d| d + 1);
        for xp in 0..max_deg {
            let row: Vec<Rational> = cleared.iter().map(|p| p.coeff(xp)).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }

    if rows.is_empty() {
        let basis = (0..width).map(|k| Poly::monomial(rat(1), k)).collect();
        return Ok(StabilizerBasis {
            degree_bound,
            basis,
        });
    }
    let vectors = nullspace(&rows)?;
    Ok(basis_from_nullspace(vectors, degree_bound))
}

/// Conjugates p(L₀) through the monic intertwiner: the quotient L_p in
/// K∘p(L₀) = L_p∘K. A nonzero remainder means p does not stabilize.
///
/// Computed fraction-free against K̄ itself: with τ the leading
/// coefficient and τˢ·K̄∘p(L₀) = PQ∘K̄ exactly, the conjugate is
/// L_p = τ^{−s−1}·PQ∘(τ·), which keeps the division polynomial whenever
/// K̄ is.
pub fn darboux_conjugate(kbar: &DiffOp, l0: &AiryVacuum, p: &Poly) -> Result<DiffOp, Error> {
    let lead = kbar.leading().ok_or(Error::ZeroOperator)?.clone();
    let b = kbar * &DiffOp::eval_poly(p, &l0.operator());
    let (pq, pr, s) = b.pseudo_right_divide(kbar)?;
    if !pr.is_zero() {
        return Err(Error::NonzeroConjugationRemainder);
    }
    let mut inv = lead.recip()?;
    for _ in 0..s {
        inv = &inv * &lead.recip()?;
    }
    Ok(&pq.scale_fn(&inv) * &DiffOp::from_ratfunc(lead))
}

/// One conjugated generator, L_p = K p(L₀) K⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct RingGenerator {
    pub p: Poly,
    pub op: DiffOp,
}

/// The commutative ring generated by the conjugated stabilizer elements.
#[derive(Debug, Clone, PartialEq)]
pub struct BispectralRing {
    pub vacuum: AiryVacuum,
    pub divisor: CuspDivisor,
    pub kbar: DiffOp,
    pub generators: Vec<RingGenerator>,
}

impl BispectralRing {
    /// gcd of generator orders; equals the vacuum order r.
    pub fn rank(&self) -> Option<usize> {
        self.generators
            .iter()
            .filter_map(|g| g.op.order())
            .reduce(gcd)
    }

    /// Exact pairwise commutativity of the generators.
    pub fn commutators_vanish(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[..i] {
                if !a.op.commutator(&b.op).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds the ring: one generator per stabilizer basis element of degree ≥ 2.
pub fn build_ring(
    l0: &AiryVacuum,
    divisor: &CuspDivisor,
    degree_bound: usize,
) -> Result<BispectralRing, Error> {
    let result = crate::construct::build_kbar(l0, divisor)?;
    build_ring_from(l0, divisor, &result, degree_bound)
}

/// Same, reusing an already-built K̄.
pub fn build_ring_from(
    l0: &AiryVacuum,
    divisor: &CuspDivisor,
    result: &KbarResult,
    degree_bound: usize,
) -> Result<BispectralRing, Error> {
    let stab = stabilizer_closed(divisor, degree_bound);
    let mut generators = Vec::new();
    for p in stab.basis {
        if p.degree().unwrap_or(0) < 2 {
            continue;
        }
        if !stabilizes(divisor, &p) {
            return Err(Error::NotInStabilizer(p.degree().unwrap_or(0)));
        }
        let op = darboux_conjugate(&result.kbar, l0, &p)?;
        generators.push(RingGenerator { p, op });
    }
    Ok(BispectralRing {
        vacuum: l0.clone(),
        divisor: divisor.clone(),
        kbar: result.kbar.clone(),
        generators,
    })
}

/// Divisibility witness for the true rank: q²(L₀) = Q∘K with K monic.
///
/// Same fraction-free route as the conjugation: τˢ·q²(L₀) = PQ∘K̄ gives
/// Q = τ^{−s}·PQ∘(τ·).
pub fn truerank_witness(result: &KbarResult, l0: &AiryVacuum) -> Result<DiffOp, Error> {
    let q2 = &result.q * &result.q;
    let target = DiffOp::eval_poly(&q2, &l0.operator());
    let lead = result.kbar.leading().ok_or(Error::ZeroOperator)?.clone();
    let (pq, pr, s) = target.pseudo_right_divide(&result.kbar)?;
    if !pr.is_zero() {
        return Err(Error::NonzeroConjugationRemainder);
    }
    let mut inv = RatFunc::one();
    for _ in 0..s {
        inv = &inv * &lead.recip()?;
    }
    Ok(&pq.scale_fn(&inv) * &DiffOp::from_ratfunc(lead))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_kbar;
    use crate::ratfunc::RatFunc;

    fn airy_divisor(lambda: i64, gamma: i64) -> CuspDivisor {
        CuspDivisor::from_pairs(&[(rat(lambda), rat(gamma))]).unwrap()
    }

    #[test]
    fn closed_stabilizer_origin() {
        // n=1, λ=0, d=3: basis {1, z², z³}
        let s = stabilizer_closed(&airy_divisor(0, 1), 3);
        assert_eq!(s.basis.len(), 3);
        assert_eq!(s.basis[0], Poly::one());
        assert_eq!(s.basis[1], Poly::from_ints(&[0, 0, 1]));
        assert_eq!(s.basis[2], Poly::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn closed_stabilizer_two_points() {
        // n=2, λ=(0,1), d=4: spans {1, 2z³−3z², z⁴−2z²}
        let c = CuspDivisor::from_pairs(&[(rat(0), rat(0)), (rat(1), rat(0))]).unwrap();
        let s = stabilizer_closed(&c, 4);
        assert_eq!(s.dimension(), 3);
        let expected = StabilizerBasis {
            degree_bound: 4,
            basis: vec![
                Poly::one(),
                Poly::from_ints(&[0, 0, -3, 2]),
                Poly::from_ints(&[0, 0, -2, 0, 1]),
            ],
        };
        assert!(s.same_subspace(&expected));
        for p in &s.basis {
            assert!(stabilizes(&c, p));
        }
    }

    #[test]
    fn degree_zero_always_constants() {
        let s = stabilizer_closed(&airy_divisor(3, -2), 0);
        assert_eq!(s.basis, vec![Poly::one()]);
    }

    #[test]
    fn generic_unit_operator() {
        // T = 1: the whole polynomial space through the bound
        let s = stabilizer_generic(&DiffOp::one(), &AiryVacuum::airy().operator(), 3).unwrap();
        assert_eq!(s.dimension(), 4);
    }

    #[test]
    fn generic_derivative_and_x() {
        // T = ∂, L = x: ∂p(x) = p(x)∂ + p′(x), so only constants survive.
        let s = stabilizer_generic(&DiffOp::dx(), &DiffOp::x(), 4).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.basis[0], Poly::one());
    }

    #[test]
    fn generic_matches_closed_for_kbar() {
        for (pairs, d) in [
            (vec![(rat(0), rat(1))], 4usize),
            (vec![(rat(1), rat(2))], 4),
            (vec![(rat(0), rat(0)), (rat(1), rat(-1))], 6),
        ] {
            let c = CuspDivisor::from_pairs(&pairs).unwrap();
            let l0 = AiryVacuum::airy();
            let result = build_kbar(&l0, &c).unwrap();
            let generic = stabilizer_generic(&result.kbar, &l0.operator(), d).unwrap();
            let closed = stabilizer_closed(&c, d);
            assert!(generic.same_subspace(&closed));
        }
    }

    #[test]
    fn conjugate_identity() {
        let l0 = AiryVacuum::airy();
        let result = build_kbar(&l0, &airy_divisor(0, 0)).unwrap();
        let one = darboux_conjugate(&result.kbar, &l0, &Poly::one()).unwrap();
        assert!(one.is_one());
    }

    #[test]
    fn conjugate_rejects_non_stabilizer() {
        // p = z does not stabilize λ = 0
        let l0 = AiryVacuum::airy();
        let result = build_kbar(&l0, &airy_divisor(0, 0)).unwrap();
        let err = darboux_conjugate(&result.kbar, &l0, &Poly::x());
        assert_eq!(err, Err(Error::NonzeroConjugationRemainder));
    }

    /// §5 operator L₄ at λ=0: the z² conjugate for the Airy vacuum.
    fn l4_reference(gamma: &Rational) -> DiffOp {
        // u = x − γ²
        let u = Poly::new(vec![-(gamma * gamma), rat(1)]);
        let u2 = &u * &u;
        let u3 = &u2 * &u;
        let u4 = &u3 * &u2.exact_div(&u).unwrap();
        let g = Poly::constant(gamma.clone());
        // ∂²: −2x − 4/u²
        let c2 = &RatFunc::from_poly(Poly::from_ints(&[0, -2]))
            - &RatFunc::new(Poly::from_ints(&[4]), u2.clone());
        // ∂: −2 + 4γ/u² + 8/u³
        let c1 = &(&RatFunc::from_poly(Poly::from_ints(&[-2]))
            + &RatFunc::new(g.scale(&rat(4)), u2.clone()))
            + &RatFunc::new(Poly::from_ints(&[8]), u3.clone());
        // const: x² + 2/u − 4γ/u³ − 8/u⁴
        let c0 = &(&(&RatFunc::from_poly(Poly::from_ints(&[0, 0, 1]))
            + &RatFunc::new(Poly::from_ints(&[2]), u.clone()))
            - &RatFunc::new(g.scale(&rat(4)), u3))
            - &RatFunc::new(Poly::from_ints(&[8]), u4);
        DiffOp::new(vec![c0, c1, c2, RatFunc::zero(), RatFunc::one()])
    }

    #[test]
    fn ring_for_airy_origin() {
        // r=2, λ=0, γ=0, d=3: generators of orders 4 and 6, rank 2
        let l0 = AiryVacuum::airy();
        let divisor = airy_divisor(0, 0);
        let ring = build_ring(&l0, &divisor, 3).unwrap();
        let orders: Vec<usize> = ring
            .generators
            .iter()
            .map(|g| g.op.order().unwrap())
            .collect();
        assert_eq!(orders, vec![4, 6]);
        assert_eq!(ring.rank(), Some(2));
        assert!(ring.commutators_vanish());
        assert_eq!(ring.generators[0].op, l4_reference(&rat(0)));
        // normalized form: monic with vanishing subleading coefficient
        for g in &ring.generators {
            assert!(g.op.is_monic());
            let ord = g.op.order().unwrap();
            assert!(g.op.coeff(ord - 1).is_zero());
            assert_eq!(ord, 2 * g.p.degree().unwrap());
        }
    }

    #[test]
    fn ring_with_nonzero_gamma_matches_reference_l4() {
        let l0 = AiryVacuum::airy();
        let result = build_kbar(&l0, &airy_divisor(0, 1)).unwrap();
        let l4 = darboux_conjugate(&result.kbar, &l0, &Poly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(l4, l4_reference(&rat(1)));
    }

    #[test]
    fn ring_trivial_below_degree_two() {
        let ring = build_ring(&AiryVacuum::airy(), &airy_divisor(0, 0), 1).unwrap();
        assert!(ring.generators.is_empty());
        assert_eq!(ring.rank(), None);
    }

    #[test]
    fn r3_ring_orders() {
        // r=3, λ=0, γ=0, a=0, d=3: orders (6, 9), rank 3
        let l0 = AiryVacuum::new(3, vec![rat(0)]).unwrap();
        let ring = build_ring(&l0, &airy_divisor(0, 0), 3).unwrap();
        let orders: Vec<usize> = ring
            .generators
            .iter()
            .map(|g| g.op.order().unwrap())
            .collect();
        assert_eq!(orders, vec![6, 9]);
        assert_eq!(ring.rank(), Some(3));
        assert!(ring.commutators_vanish());
    }

    #[test]
    fn intertwining_identity() {
        // L_p∘K = K∘p(L₀) exactly
        let l0 = AiryVacuum::airy();
        let divisor = airy_divisor(1, 2);
        let result = build_kbar(&l0, &divisor).unwrap();
        let p = Poly::from_ints(&[0, -2, 1]); // z² − 2z, stabilizes λ=1
        assert!(stabilizes(&divisor, &p));
        let lp = darboux_conjugate(&result.kbar, &l0, &p).unwrap();
        let k = result.monic();
        let lhs = &lp * &k;
        let rhs = &k * &DiffOp::eval_poly(&p, &l0.operator());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn witness_for_airy_origin() {
        // remainder(q²(L₀), K) = 0 and K∘Q = L_{q²}
        let l0 = AiryVacuum::airy();
        let divisor = airy_divisor(0, 0);
        let result = build_kbar(&l0, &divisor).unwrap();
        let witness = truerank_witness(&result, &l0).unwrap();
        let q2 = &result.q * &result.q;
        let l_q2 = darboux_conjugate(&result.kbar, &l0, &q2).unwrap();
        assert_eq!(&result.monic() * &witness, l_q2);
    }

    #[test]
    fn witness_vacuous_divisor() {
        let l0 = AiryVacuum::airy();
        let result = build_kbar(&l0, &CuspDivisor::empty()).unwrap();
        let witness = truerank_witness(&result, &l0).unwrap();
        assert!(witness.is_one());
    }
}
