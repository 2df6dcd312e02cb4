//! Minimal polynomials, characteristic polynomials, and the exact additive
//! Jordan decomposition.
//!
//! `jordan_chevalley` splits a square rational matrix M into S + N with S
//! semisimple (squarefree minimal polynomial), N nilpotent, and SN = NS,
//! entirely over the rationals. The construction is Newton iteration on the
//! squarefree part f of the minimal polynomial: with u ≡ (f')⁻¹ mod f fixed
//! once, the update X ← X − f(X)·u(X) squares the ideal (f(X)) at each
//! step, so at most ⌈log₂ deg⌉ + 1 rounds reach f(X) = 0. Both S and N are
//! polynomials in M with zero constant term, hence commute with everything
//! that commutes with M.

use num_traits::Zero;

use crate::matrix::{solve_linear, Matrix, Rat};
use crate::poly::Poly;

/// Minimal polynomial of the cyclic subspace generated by `v`.
fn local_min_poly(m: &Matrix, v: &[Rat]) -> Poly {
    let n = m.rows();
    let mut cols: Vec<Vec<Rat>> = vec![v.to_vec()];
    let mut cur = v.to_vec();
    loop {
        cur = m.apply(&cur);
        let b = Matrix::from_columns(&cols, n);
        if let Some(c) = solve_linear(&b, &cur).expect("consistent shapes") {
            // x^k − Σ c_j x^j annihilates v.
            let k = cols.len();
            let mut coeffs: Vec<Rat> = c.iter().map(|x| -x.clone()).collect();
            coeffs.push(num_traits::One::one());
            debug_assert_eq!(coeffs.len(), k + 1);
            return Poly::from_coeffs(coeffs);
        }
        cols.push(cur.clone());
    }
}

/// Exact monic minimal polynomial, computed as the lcm of the minimal
/// polynomials of the Krylov subspaces of the standard basis vectors. The
/// empty matrix has minimal polynomial 1.
pub fn min_poly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "min_poly: non-square");
    let n = m.rows();
    let mut p = Poly::one();
    for i in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[i] = num_traits::One::one();
        p = p.lcm(&local_min_poly(m, &e));
        if p.degree() == Some(n) {
            break;
        }
    }
    p
}

/// Monic characteristic polynomial by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "char_poly: non-square");
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = num_traits::One::one();
    let mut a = Matrix::zeros(n, n);
    for k in 1..=n {
        a = m * &(&a + &Matrix::identity(n).scale(&coeffs[n + 1 - k]));
        coeffs[n - k] = -a.trace() / crate::matrix::rat(k as i64);
    }
    Poly::from_coeffs(coeffs)
}

/// True when some power of the matrix vanishes.
pub fn is_nilpotent(m: &Matrix) -> bool {
    assert!(m.is_square(), "is_nilpotent: non-square");
    m.pow(m.rows()).is_zero()
}

/// Additive Jordan decomposition M = S + N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanChevalley {
    /// Semisimple part: squarefree minimal polynomial.
    pub s: Matrix,
    /// Nilpotent part, commuting with `s`.
    pub n: Matrix,
}

/// Exact additive Jordan decomposition over the rationals.
pub fn jordan_chevalley(m: &Matrix) -> JordanChevalley {
    assert!(m.is_square(), "jordan_chevalley: non-square");
    let dim = m.rows();
    if dim == 0 {
        return JordanChevalley { s: Matrix::zeros(0, 0), n: Matrix::zeros(0, 0) };
    }
    let p = min_poly(m);
    let f = p.squarefree_part();
    if f == p.monic() {
        // Already semisimple.
        return JordanChevalley { s: m.clone(), n: Matrix::zeros(dim, dim) };
    }
    // u·f' ≡ 1 mod f; f squarefree makes gcd(f, f') = 1.
    let (g, u, _) = f.derivative().xgcd(&f);
    assert_eq!(g, Poly::one(), "squarefree part must be coprime to its derivative");
    let bound = usize::BITS as usize - (p.degree().unwrap().leading_zeros() as usize) + 1;
    let mut x = m.clone();
    for _ in 0..=bound {
        let fx = f.eval_matrix(&x);
        if fx.is_zero() {
            break;
        }
        x = &x - &(&fx * &u.eval_matrix(&x));
    }
    assert!(f.eval_matrix(&x).is_zero(), "Newton iteration must converge in the stated bound");
    let n = m - &x;
    JordanChevalley { s: x, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{rat, ratio};

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn min_poly_identity() {
        assert_eq!(min_poly(&Matrix::identity(3)), p(&[-1, 1]));
    }

    #[test]
    fn min_poly_nilpotent_block() {
        let e = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(min_poly(&e), p(&[0, 0, 1]));
    }

    #[test]
    fn min_poly_distinct_diagonal() {
        let m = Matrix::diag(&[rat(2), rat(3)]);
        assert_eq!(min_poly(&m), p(&[6, -5, 1]));
    }

    #[test]
    fn min_poly_empty_matrix_is_one() {
        assert_eq!(min_poly(&Matrix::zeros(0, 0)), Poly::one());
    }

    #[test]
    fn char_poly_companion_example() {
        // companion of x² − 5x + 6
        let m = Matrix::from_i64(&[&[0, -6], &[1, 5]]);
        assert_eq!(char_poly(&m), p(&[6, -5, 1]));
        assert_eq!(char_poly(&Matrix::identity(2)), p(&[1, -2, 1]));
    }

    #[test]
    fn jc_semisimple_diagonal_untouched() {
        let m = Matrix::diag(&[rat(-3), rat(1), rat(2)]);
        let jc = jordan_chevalley(&m);
        assert_eq!(jc.s, m);
        assert!(jc.n.is_zero());
    }

    #[test]
    fn jc_splits_jordan_block() {
        let m = Matrix::from_i64(&[&[2, 1], &[0, 2]]);
        let jc = jordan_chevalley(&m);
        assert_eq!(jc.s, Matrix::identity(2).scale(&rat(2)));
        assert_eq!(jc.n, Matrix::from_i64(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn jc_distinct_eigenvalues_semisimple_despite_triangle() {
        let m = Matrix::from_i64(&[&[1, 1], &[0, 2]]);
        let jc = jordan_chevalley(&m);
        assert_eq!(jc.s, m);
        assert!(jc.n.is_zero());
    }

    #[test]
    fn jc_irrational_eigenvalues_stay_rational() {
        // x² − 2 is squarefree: the matrix is already semisimple even
        // though its eigenvalues are irrational.
        let m = Matrix::from_i64(&[&[0, 2], &[1, 0]]);
        let jc = jordan_chevalley(&m);
        assert_eq!(jc.s, m);
        assert!(jc.n.is_zero());
    }

    #[test]
    fn jc_mixed_block_with_fractions() {
        // Block diag(N_{1/2}, 3) where N_b is the 2x2 Jordan block at b.
        let m = Matrix::from_rows(vec![
            vec![ratio(1, 2), rat(1), rat(0)],
            vec![rat(0), ratio(1, 2), rat(0)],
            vec![rat(0), rat(0), rat(3)],
        ]);
        let jc = jordan_chevalley(&m);
        assert_eq!(&jc.s + &jc.n, m);
        assert!(is_nilpotent(&jc.n));
        assert!(!jc.n.is_zero());
        assert_eq!(&jc.s * &jc.n, &jc.n * &jc.s);
        let ms = min_poly(&jc.s);
        assert_eq!(ms, ms.squarefree_part());
    }

    #[test]
    fn jc_commutes_with_powers() {
        // S is a polynomial in M, so it commutes with every power of M.
        let m = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, 2]]);
        let jc = jordan_chevalley(&m);
        for k in 0..4 {
            let mk = m.pow(k);
            assert_eq!(&jc.s * &mk, &mk * &jc.s);
        }
    }
}
