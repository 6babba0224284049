//! Dense univariate polynomials over ℚ.
//!
//! Coefficients are stored lowest degree first with no trailing zeros; the
//! zero polynomial is the empty list. Division, gcd and root extraction are
//! all exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::monomial(rat(1), 1)
    }

    /// Convenience constructor from small integers, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative d/dx.
    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat(k as i64))
            .collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q·div + r` with `deg r < deg div`.
    pub fn div_rem(&self, div: &Poly) -> Result<(Poly, Poly), Error> {
        if div.is_zero() {
            return Err(Error::ZeroPolyDivision);
        }
        let dd = div.degree().unwrap();
        let lead_inv = div.leading().unwrap().recip();
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() * &lead_inv;
            let shift = rd - dd;
            for (k, c) in div.coeffs.iter().enumerate() {
                let delta = c * &factor;
                rem.coeffs[shift + k] -= delta;
            }
            rem.trim();
            quot[shift] = factor;
        }
        Ok((Poly::new(quot), rem))
    }

    /// Exact quotient; errors when the remainder is nonzero.
    pub fn exact_div(&self, div: &Poly) -> Result<Poly, Error> {
        let (q, r) = self.div_rem(div)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    ///
    /// Subresultant remainder sequence over the integer-cleared inputs;
    /// naive Euclid over ℚ blows up its coefficients badly enough to
    /// dominate whole operator divisions.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone().into_monic();
        }
        if other.is_zero() {
            return self.clone().into_monic();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return Poly::one();
        }
        let mut a = to_primitive_integer(self);
        let mut b = to_primitive_integer(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.len() - b.len();
            let r = int_pseudo_rem(&a, &b, delta);
            if r.is_empty() {
                let prim = int_primitive(&b);
                let coeffs = prim
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect::<Vec<_>>();
                return Poly::new(coeffs).into_monic();
            }
            if r.len() == 1 {
                return Poly::one();
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = r.into_iter().map(|c| c / &divisor).collect();
            g = a.last().expect("nonzero").clone();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
            };
        }
    }

    /// Divides through by the leading coefficient; zero stays zero.
    pub fn into_monic(self) -> Poly {
        match self.leading() {
            None => self,
            Some(lead) if lead.is_one() => self,
            Some(lead) => {
                let inv = lead.recip();
                self.scale(&inv)
            }
        }
    }

    /// True when gcd(p, p') is constant.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// All rational roots with multiplicity, extracted by repeated deflation.
    ///
    /// Candidates come from the rational root theorem applied to the
    /// integer-cleared polynomial, with a quadratic-formula route once the
    /// deflated degree drops to two.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        let mut p = self.clone();
        loop {
            match p.degree() {
                None | Some(0) => break,
                Some(1) => {
                    roots.push(-(&p.coeffs[0] / &p.coeffs[1]));
                    break;
                }
                Some(2) => {
                    let (c, b, a) = (&p.coeffs[0], &p.coeffs[1], &p.coeffs[2]);
                    let disc = b * b - rat(4) * a * c;
                    if let Some(s) = crate::rational::rational_sqrt(&disc) {
                        let two_a = rat(2) * a;
                        roots.push((-b.clone() + &s) / &two_a);
                        roots.push((-b.clone() - &s) / &two_a);
                    }
                    break;
                }
                _ => match p.find_one_rational_root() {
                    Some(root) => {
                        let linear = Poly::new(vec![-root.clone(), rat(1)]);
                        p = p.exact_div(&linear).expect("deflation by a root");
                        roots.push(root);
                    }
                    None => break,
                },
            }
        }
        roots.sort();
        roots
    }

    fn find_one_rational_root(&self) -> Option<Rational> {
        if self.coeff(0).is_zero() {
            return Some(Rational::zero());
        }
        // Clear denominators, then candidates are ±(divisor of a0)/(divisor of lead).
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let lead_divs = small_divisors(ints.last().unwrap())?;
        let const_divs = small_divisors(&ints[0])?;
        for p in &const_divs {
            for q in &lead_divs {
                for sign in [1i64, -1] {
                    let cand = Rational::new(p * BigInt::from(sign), q.clone());
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }

    /// Horner composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Renders with the given variable name, highest degree first.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_part = if mag.is_one() && k > 0 {
                String::new()
            } else {
                format_rational(&mag)
            };
            let var_part = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if !coeff_part.is_empty() && !var_part.is_empty() {
                out.push_str(&format!("{coeff_part}*{var_part}"));
            } else {
                out.push_str(&coeff_part);
                out.push_str(&var_part);
            }
        }
        out
    }
}

/// Integer-cleared, content-free coefficient vector.
fn to_primitive_integer(p: &Poly) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in p.coeffs() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    int_primitive(&ints)
}

fn int_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder over ℤ: lead(b)^{delta+1}·a mod b.
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt], delta: usize) -> Vec<BigInt> {
    let lb = b.last().expect("nonzero divisor");
    let mut r: Vec<BigInt> = a.to_vec();
    let mut mults = 0usize;
    while r.len() >= b.len() && !r.is_empty() {
        let top = r.last().expect("nonempty").clone();
        let shift = r.len() - b.len();
        let mut next: Vec<BigInt> = r[..r.len() - 1].iter().map(|c| lb * c).collect();
        for (i, bc) in b.iter().enumerate().take(b.len() - 1) {
            next[shift + i] -= &top * bc;
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        r = next;
        mults += 1;
    }
    for _ in mults..=delta {
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
    }
    r
}

/// Divisors of a nonzero integer by trial division, bailing out on inputs
/// whose smallest factor exceeds the search bound.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    const BOUND: u64 = 1_000_000;
    let mut m = n.abs();
    if m.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= m {
        if d > BigInt::from(BOUND) {
            return None;
        }
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    Some(divs)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::new(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        Poly::new(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}
