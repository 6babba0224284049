//! Exact matrix kernels: fraction-free determinants over the polynomial
//! ring and reduced-echelon solving over ℚ.

use num_traits::Zero;

use crate::error::Error;
use crate::rational::Rational;
use crate::tripoly::TriPoly;

/// Rectangular matrix of trivariate polynomial entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TriPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        PolyMatrix {
            rows,
            cols,
            entries: vec![TriPoly::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &TriPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: TriPoly) {
        self.entries[r * self.cols + c] = value;
    }

    /// Exact determinant.
    ///
    /// Columns that carry z/ξ symbols are peeled off by cofactor expansion
    /// (they come from the bordered u-column); what remains is handled by
    /// Bareiss elimination, whose interior divisions are exact.
    pub fn det(&self) -> Result<TriPoly, Error> {
        if self.rows != self.cols {
            return Err(Error::NonSquareMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_rec(&idx, &idx))
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> TriPoly {
        let n = rows.len();
        if n == 0 {
            return TriPoly::one();
        }
        if n == 1 {
            return self.at(rows[0], cols[0]).clone();
        }
        // Peel the rightmost symbolic column, if any.
        let symbolic = cols
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &c)| rows.iter().any(|&r| self.at(r, c).has_spectral_symbols()));
        if let Some((cpos, &c)) = symbolic {
            let rest_cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&cc| cc != c)
                .collect();
            let mut acc = TriPoly::zero();
            for (rpos, &r) in rows.iter().enumerate() {
                let entry = self.at(r, c);
                if entry.is_zero() {
                    continue;
                }
                let rest_rows: Vec<usize> =
                    rows.iter().copied().filter(|&rr| rr != r).collect();
                let minor = self.det_rec(&rest_rows, &rest_cols);
                let signed = if (rpos + cpos) % 2 == 0 {
                    &minor * entry
                } else {
                    -&(&minor * entry)
                };
                acc = &acc + &signed;
            }
            return acc;
        }
        self.det_bareiss(rows, cols)
    }

    fn det_bareiss(&self, rows: &[usize], cols: &[usize]) -> TriPoly {
        let n = rows.len();
        let mut m: Vec<Vec<TriPoly>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.at(r, c).clone()).collect())
            .collect();
        let mut sign_flip = false;
        let mut prev_pivot = TriPoly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign_flip = !sign_flip;
                    }
                    None => return TriPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.exact_div(&prev_pivot).expect("Bareiss step divides");
                }
                m[i][k] = TriPoly::zero();
            }
            prev_pivot = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign_flip {
            -&det
        } else {
            det
        }
    }
}

/// Full description of the solution set of `A·x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    /// One solution, absent when the system is inconsistent.
    pub particular: Option<Vec<Rational>>,
    /// Basis of the homogeneous solution space.
    pub nullspace: Vec<Vec<Rational>>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.nullspace.is_empty()
    }
}

/// Exact reduced row echelon solve of `A·x = b`.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Result<LinearSolution, Error> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but {} right-hand sides",
            rows,
            b.len()
        )));
    }
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix".to_string()));
    }

    // Augmented RREF.
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let width = cols + 1;
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot_row = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        m.swap(rank, pr);
        let inv = m[rank][col].recip();
        for j in col..width {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..width {
                    let delta = &factor * &m[rank][j];
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    let inconsistent = (rank..rows).any(|r| !m[r][cols].is_zero());
    let particular = if inconsistent {
        None
    } else {
        let mut x = vec![Rational::zero(); cols];
        for (r, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = m[r][cols].clone();
        }
        Some(x)
    };

    let mut nullspace = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::from_integer(1.into());
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        nullspace.push(v);
    }

    Ok(LinearSolution {
        particular,
        nullspace,
    })
}

/// Basis of the nullspace of a homogeneous system.
pub fn nullspace(a: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, Error> {
    let b = vec![Rational::zero(); a.len()];
    Ok(solve_linear(a, &b)?.nullspace)
}

/// Canonical (RREF) form of a list of vectors, for subspace comparison.
pub fn row_space_canonical(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let cols = vectors[0].len();
    let mut m: Vec<Vec<Rational>> = vectors.to_vec();
    let rows = m.len();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].recip();
        for j in 0..cols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in 0..cols {
                    let delta = &factor * &m[rank][j];
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    m.truncate(rank);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn xp(e: crate::tripoly::Exp) -> TriPoly {
        TriPoly::term(rat(1), e)
    }

    #[test]
    fn identity_determinant() {
        let mut m = PolyMatrix::new(3, 3);
        for i in 0..3 {
            m.set(i, i, TriPoly::one());
        }
        assert_eq!(m.det().unwrap(), TriPoly::one());
    }

    #[test]
    fn symbolic_two_by_two() {
        // [[x, 1], [1, z]] -> xz - 1
        let mut m = PolyMatrix::new(2, 2);
        m.set(0, 0, xp((1, 0, 0)));
        m.set(0, 1, TriPoly::one());
        m.set(1, 0, TriPoly::one());
        m.set(1, 1, xp((0, 1, 0)));
        let d = m.det().unwrap();
        let expected = &xp((1, 1, 0)) - &TriPoly::one();
        assert_eq!(d, expected);
    }

    #[test]
    fn vandermonde_in_values() {
        // Vandermonde(1, 2, 3) = (2-1)(3-1)(3-2) = 2, against cofactor expansion
        // by hand: det [[1,1,1],[1,2,3],[1,4,9]].
        let mut m = PolyMatrix::new(3, 3);
        let vals = [1i64, 2, 3];
        for (c, &v) in vals.iter().enumerate() {
            let mut power = 1i64;
            for r in 0..3 {
                m.set(r, c, TriPoly::constant(rat(power)));
                power *= v;
            }
        }
        assert_eq!(m.det().unwrap(), TriPoly::constant(rat(2)));
    }

    #[test]
    fn non_square_rejected() {
        let mut m = PolyMatrix::new(2, 3);
        m.set(0, 0, TriPoly::one());
        assert!(matches!(m.det(), Err(Error::NonSquareMatrix { .. })));
    }

    #[test]
    fn zero_row_gives_zero() {
        let mut m = PolyMatrix::new(3, 3);
        m.set(0, 0, xp((1, 0, 0)));
        m.set(0, 1, TriPoly::one());
        m.set(2, 2, xp((2, 0, 0)));
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn unique_solution() {
        let a = vec![
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
        ];
        let sol = solve_linear(&a, &[rat(1), rat(0)]).unwrap();
        assert!(sol.is_unique());
        assert_eq!(sol.particular.unwrap(), vec![rat(1), rat(0)]);
    }

    #[test]
    fn zero_row_nullspace() {
        let a = vec![vec![rat(0), rat(0)]];
        let sol = solve_linear(&a, &[rat(0)]).unwrap();
        assert_eq!(sol.nullspace.len(), 2);
    }

    #[test]
    fn single_constraint_solution_space() {
        // 2c2 + 3c3 + 4c4 = 0 over (c0, c2, c3, c4): rank 1, so a
        // 3-dimensional solution space (hand elimination gives the same).
        let a = vec![vec![rat(0), rat(2), rat(3), rat(4)]];
        let sol = solve_linear(&a, &[rat(0)]).unwrap();
        assert_eq!(sol.nullspace.len(), 3);
        for v in &sol.nullspace {
            let lhs = rat(2) * &v[1] + rat(3) * &v[2] + rat(4) * &v[3];
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn inconsistent_detected() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]];
        let sol = solve_linear(&a, &[rat(1), rat(2)]).unwrap();
        assert!(sol.particular.is_none());
    }

    #[test]
    fn solutions_satisfy_system_exactly() {
        let a = vec![
            vec![rat(2), rat(1), rat(-1)],
            vec![rat(-3), rat(-1), rat(2)],
        ];
        let b = [rat(8), rat(-11)];
        let sol = solve_linear(&a, &b).unwrap();
        let x = sol.particular.unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: Rational = row.iter().zip(&x).map(|(c, v)| c * v).sum();
            assert_eq!(&lhs, rhs);
        }
        for v in &sol.nullspace {
            for row in &a {
                let lhs: Rational = row.iter().zip(v).map(|(c, u)| c * u).sum();
                assert!(lhs.is_zero());
            }
        }
    }
}
