//! Dense matrices over arbitrary-precision rationals.
//!
//! All algorithms are exact: row reduction uses the first nonzero entry as
//! pivot (deterministic, no magnitude heuristics), solutions set free
//! variables to zero, and signatures are computed by symmetric congruence
//! reduction. No tolerances appear anywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Exact rational scalar: arbitrary-precision, always in canonical reduced
/// form with positive denominator (maintained by the representation).
pub type Rat = num_rational::BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d in canonical form. Panics on d = 0.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Matrix from a rectangular list of rows.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix from integer rows, for terse construction in tests and tables.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&n| rat(n)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(v: &[Rat]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_vec(&self, i: usize) -> Vec<Rat> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    /// Apply the matrix to a coordinate vector.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "apply: dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hcat: row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vcat: column mismatch");
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.at(i, j).clone() } else { other.at(i - self.rows, j).clone() }
        })
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(cols: &[Vec<Rat>], ambient_rows: usize) -> Matrix {
        assert!(cols.iter().all(|c| c.len() == ambient_rows), "from_columns: length mismatch");
        Matrix::from_fn(ambient_rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Block-diagonal composition.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Copy `block` into self with upper-left corner at (r0, c0).
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.at(i, j).clone());
            }
        }
    }

    /// Reduced row echelon form together with the pivot columns (one per
    /// nonzero row, in order). Pivoting takes the first nonzero entry, so
    /// the result is deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(row * m.cols + j, p * m.cols + j);
                }
            }
            let inv = m.at(row, col).recip();
            for j in col..m.cols {
                let v = m.at(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for j in col..m.cols {
                        let v = m.at(r, j) - &factor * m.at(row, j);
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse via augmented elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse: non-square");
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::identity(0));
        }
        let (r, pivots) = self.hcat(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    /// Matrix product of powers cache helper.
    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j).clone())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.at(i, j) + a * other.at(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }
}

/// Solve A·x = b exactly. Returns the first solution under RREF
/// back-substitution with free variables set to zero, or `None` when the
/// system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if a.rows() != b.len() {
        return Err(Error::Usage(format!(
            "solve_linear: A has {} rows but b has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let aug = a.hcat(&Matrix::column(b));
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); a.cols()];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = r.at(row, a.cols()).clone();
    }
    Ok(Some(x))
}

/// Exact basis of the kernel {x : A·x = 0}; empty when trivial. Basis
/// vectors are indexed by the free columns of the RREF, each with a 1 in
/// its free position.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Rat>> {
    let (r, pivots) = a.rref();
    let mut is_pivot = vec![false; a.cols()];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..a.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); a.cols()];
        v[free] = Rat::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -r.at(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Inertia of a symmetric matrix by exact simultaneous row/column
/// congruence: (negative, positive, zero) counts. The negative count comes
/// first, matching the convention that the index of a metric is the number
/// of negative squares. A step with only off-diagonal pivots available
/// first symmetrically adds row/column j into i, creating the diagonal
/// entry 2·G[i][j], which splits a hyperbolic plane into one positive and
/// one negative square.
pub fn signature(g: &Matrix) -> Result<(usize, usize, usize)> {
    if !g.is_symmetric() {
        return Err(Error::Usage("signature: matrix is not symmetric".into()));
    }
    let n = g.rows();
    let mut m = g.clone();
    let mut alive: Vec<usize> = (0..n).collect();
    let (mut neg, mut pos) = (0, 0);
    while !alive.is_empty() {
        if let Some(k) = alive.iter().position(|&i| !m.at(i, i).is_zero()) {
            let i = alive[k];
            let d = m.at(i, i).clone();
            if d.is_negative() {
                neg += 1;
            } else {
                pos += 1;
            }
            alive.remove(k);
            for &r in &alive {
                if m.at(r, i).is_zero() {
                    continue;
                }
                let factor = m.at(r, i) / &d;
                for &c in &alive {
                    let v = m.at(r, c) - &factor * m.at(i, c);
                    m.set(r, c, v);
                }
                m.set(r, i, Rat::zero());
                m.set(i, r, Rat::zero());
            }
            // Re-symmetrize the reduced block (row updates alone suffice
            // because the pivot row/column is zeroed symmetrically).
            for &r in &alive {
                for &c in &alive {
                    if r < c {
                        let v = m.at(r, c).clone();
                        m.set(c, r, v);
                    }
                }
            }
        } else if let Some((i, j)) = first_offdiag(&m, &alive) {
            // All diagonal entries vanish; make one nonzero symmetrically.
            for &c in &alive {
                let v = m.at(i, c) + m.at(j, c);
                m.set(i, c, v);
            }
            for &r in &alive {
                let v = m.at(r, i) + m.at(r, j);
                m.set(r, i, v);
            }
        } else {
            break; // remaining block is identically zero
        }
    }
    let zero = n - neg - pos;
    Ok((neg, pos, zero))
}

fn first_offdiag(m: &Matrix, alive: &[usize]) -> Option<(usize, usize)> {
    for (a, &i) in alive.iter().enumerate() {
        for &j in &alive[a + 1..] {
            if !m.at(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Incrementally built linear system over named-by-position unknowns.
/// Collects one row per equation, then answers solve/kernel queries.
pub struct LinearSystem {
    unknowns: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        LinearSystem { unknowns, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    /// Add the equation Σ coeffs[i]·x_i = rhs.
    pub fn push(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        assert_eq!(coeffs.len(), self.unknowns, "equation width mismatch");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    pub fn matrix(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(0, self.unknowns);
        }
        Matrix::from_rows(self.rows.clone())
    }

    /// Deterministic particular solution, `None` when inconsistent.
    pub fn solve(&self) -> Option<Vec<Rat>> {
        if self.rows.is_empty() {
            return Some(vec![Rat::zero(); self.unknowns]);
        }
        solve_linear(&self.matrix(), &self.rhs).expect("shape is consistent by construction")
    }

    /// Basis of the homogeneous solution space.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        if self.rows.is_empty() {
            let id = Matrix::identity(self.unknowns);
            return (0..self.unknowns).map(|j| id.col_vec(j)).collect();
        }
        kernel_basis(&self.matrix())
    }
}

/// Dot product against a gram matrix: xᵀ·G·y.
pub fn gram_pairing(g: &Matrix, x: &[Rat], y: &[Rat]) -> Rat {
    let gy = g.apply(y);
    x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(entries: &[i64]) -> Vec<Rat> {
        entries.iter().map(|&n| rat(n)).collect()
    }

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(3);
        let x = solve_linear(&a, &v(&[1, 2, 3])).unwrap().unwrap();
        assert_eq!(x, v(&[1, 2, 3]));
    }

    #[test]
    fn solve_inconsistent_rank1() {
        let a = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_linear(&a, &v(&[1, 3])).unwrap(), None);
    }

    #[test]
    fn solve_diagonal_fractions() {
        let a = Matrix::from_i64(&[&[2, 0], &[0, 3]]);
        let x = solve_linear(&a, &v(&[1, 1])).unwrap().unwrap();
        assert_eq!(x, vec![ratio(1, 2), ratio(1, 3)]);
    }

    #[test]
    fn solve_dimension_mismatch_is_usage_error() {
        let a = Matrix::identity(2);
        assert!(solve_linear(&a, &v(&[1, 2, 3])).is_err());
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let a = Matrix::from_i64(&[&[1, 1, 0]]);
        let x = solve_linear(&a, &v(&[5])).unwrap().unwrap();
        assert_eq!(x, v(&[5, 0, 0]));
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(kernel_basis(&Matrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_zero_full() {
        assert_eq!(kernel_basis(&Matrix::zeros(2, 2)).len(), 2);
    }

    #[test]
    fn kernel_rank_one() {
        let k = kernel_basis(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        // proportional to (1, −1)
        assert_eq!(&k[0][0] + &k[0][1], Rat::zero());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = Matrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        for k in kernel_basis(&a) {
            assert!(a.apply(&k).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_i64(&[&[1, 2], &[3, 5]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn signature_identity() {
        assert_eq!(signature(&Matrix::identity(4)).unwrap(), (0, 4, 0));
    }

    #[test]
    fn signature_witt_pair() {
        let g = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(signature(&g).unwrap(), (1, 1, 0));
    }

    #[test]
    fn signature_negative_and_degenerate() {
        let g = Matrix::diag(&[rat(-1), rat(-1), rat(0)]);
        assert_eq!(signature(&g).unwrap(), (2, 0, 1));
    }

    #[test]
    fn signature_rejects_nonsymmetric() {
        let g = Matrix::from_i64(&[&[0, 1], &[2, 0]]);
        assert!(signature(&g).is_err());
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |_, _| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=3)))
    }

    #[test]
    fn signature_sylvester_congruence_invariance() {
        // Sylvester's law: inertia is invariant under G ↦ PᵀGP for
        // invertible P.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let raw = random_matrix(&mut rng, n);
            let g = &raw + &raw.transpose();
            let p = loop {
                let cand = random_matrix(&mut rng, n);
                if cand.rank() == n {
                    break cand;
                }
            };
            let congruent = &(&p.transpose() * &g) * &p;
            assert_eq!(signature(&g).unwrap(), signature(&congruent).unwrap());
        }
    }

    #[test]
    fn solve_and_kernel_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let a = Matrix::from_fn(rows, cols, |_, _| {
                ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))
            });
            let x0: Vec<Rat> =
                (0..cols).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
            let b = a.apply(&x0);
            let x = solve_linear(&a, &b).unwrap().expect("consistent by construction");
            assert_eq!(a.apply(&x), b);
            for k in kernel_basis(&a) {
                assert!(a.apply(&k).iter().all(Rat::is_zero));
            }
        }
    }

    #[test]
    fn linear_system_collects_and_solves() {
        let mut sys = LinearSystem::new(2);
        sys.push(v(&[1, 1]), rat(3));
        sys.push(v(&[1, -1]), rat(1));
        assert_eq!(sys.solve().unwrap(), v(&[2, 1]));
        assert!(sys.kernel().is_empty());
    }
}
