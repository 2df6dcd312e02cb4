//! Pairs (𝔩, D_𝔩) with an orthogonal module (𝔞, D_𝔞, ρ).
//!
//! A `PairLDA` bundles the base Lie algebra 𝔩 with a derivation D_𝔩, a
//! metric abelian target 𝔞 with a skewsymmetric D_𝔞, and a representation
//! ρ of 𝔩 on 𝔞 by skewsymmetric maps, subject to the compatibility
//! ρ(D_𝔩 L) = [D_𝔞, ρ(L)]. Shape problems are usage errors at
//! construction; the mathematical conditions are verified by `check_pair`.

use crate::error::{Error, Result};
use crate::lie::{check_jacobi, is_derivation, is_skewsymmetric, lower_central_series, LieAlgebra};
use crate::matrix::{Matrix, Rat};
use crate::report::Report;

/// Base pair with orthogonal module: (𝔩, D_𝔩) acting on (𝔞, ⟨·,·⟩_𝔞, D_𝔞, ρ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairLDA {
    pub l: LieAlgebra,
    pub dl: Matrix,
    pub a_gram: Matrix,
    pub da: Matrix,
    /// ρ(e_i) for each basis vector of 𝔩; all a_dim × a_dim.
    pub rho: Vec<Matrix>,
}

impl PairLDA {
    pub fn new(
        l: LieAlgebra,
        dl: Matrix,
        a_gram: Matrix,
        da: Matrix,
        rho: Vec<Matrix>,
    ) -> Result<Self> {
        let n = l.dim();
        let m = a_gram.rows();
        if dl.rows() != n || dl.cols() != n {
            return Err(Error::usage("PairLDA: Dl shape does not match dim(l)"));
        }
        if a_gram.cols() != m || !a_gram.is_symmetric() {
            return Err(Error::usage("PairLDA: a_gram must be square symmetric"));
        }
        if da.rows() != m || da.cols() != m {
            return Err(Error::usage("PairLDA: Da shape does not match a_dim"));
        }
        if rho.len() != n {
            return Err(Error::usage("PairLDA: rho must list one matrix per basis vector of l"));
        }
        if rho.iter().any(|r| r.rows() != m || r.cols() != m) {
            return Err(Error::usage("PairLDA: rho matrices must be a_dim square"));
        }
        Ok(PairLDA { l, dl, a_gram, da, rho })
    }

    /// Pair with the trivial module action ρ = 0.
    pub fn trivial_module(l: LieAlgebra, dl: Matrix, a_gram: Matrix, da: Matrix) -> Result<Self> {
        let n = l.dim();
        let m = a_gram.rows();
        PairLDA::new(l, dl, a_gram, da, vec![Matrix::zeros(m, m); n])
    }

    /// Pair with no module at all: 𝔞 = {0}.
    pub fn without_module(l: LieAlgebra, dl: Matrix) -> Result<Self> {
        let n = l.dim();
        PairLDA::new(l, dl, Matrix::zeros(0, 0), Matrix::zeros(0, 0), vec![Matrix::zeros(0, 0); n])
    }

    pub fn n(&self) -> usize {
        self.l.dim()
    }

    pub fn a_dim(&self) -> usize {
        self.a_gram.rows()
    }

    /// ρ extended linearly: ρ(Σ x_i e_i).
    pub fn rho_of(&self, x: &[Rat]) -> Matrix {
        assert_eq!(x.len(), self.n(), "rho_of: length mismatch");
        let m = self.a_dim();
        let mut acc = Matrix::zeros(m, m);
        for (i, r) in self.rho.iter().enumerate() {
            acc = &acc + &r.scale(&x[i]);
        }
        acc
    }
}

/// Verify all PairLDA invariants; the report names the first violation
/// with a stable tag.
pub fn check_pair(p: &PairLDA) -> Report {
    let mut r = Report::new();
    if !check_jacobi(&p.l).ok() {
        r.fail("l-jacobi", "structure constants violate the Jacobi identity");
        return r;
    }
    if !is_derivation(&p.l, &p.dl).expect("shape checked at construction") {
        r.fail("dl-derivation", "Dl is not a derivation of l");
        return r;
    }
    if p.a_gram.rank() != p.a_dim() {
        r.fail("a-gram-nondegenerate", "a_gram is singular");
        return r;
    }
    if !is_skewsymmetric(&p.a_gram, &p.da) {
        r.fail("da-skew", "Da is not skewsymmetric w.r.t. a_gram");
        return r;
    }
    for (i, rho_i) in p.rho.iter().enumerate() {
        if !is_skewsymmetric(&p.a_gram, rho_i) {
            r.fail("rho-skew", format!("rho(e{}) is not skewsymmetric w.r.t. a_gram", i + 1));
            return r;
        }
    }
    for i in 0..p.n() {
        for j in (i + 1)..p.n() {
            let lhs = p.rho_of(p.l.bracket_basis(i, j));
            let rhs = &(&p.rho[i] * &p.rho[j]) - &(&p.rho[j] * &p.rho[i]);
            if lhs != rhs {
                r.fail("rho-rep", format!("rho fails the representation law on (e{}, e{})", i + 1, j + 1));
                return r;
            }
        }
    }
    for i in 0..p.n() {
        let lhs = p.rho_of(&p.dl.col_vec(i));
        let rhs = &(&p.da * &p.rho[i]) - &(&p.rho[i] * &p.da);
        if lhs != rhs {
            r.fail("rho-compat", format!("rho(Dl e{}) != [Da, rho(e{})]", i + 1, i + 1));
            return r;
        }
    }
    r.pass("pair-valid");
    r
}

/// Smallest non-negative m with 𝔩^{m+2} = 0; domain error when 𝔩 is not
/// nilpotent. Abelian algebras give m = 0.
pub fn nil_degree_m(l: &LieAlgebra) -> Result<usize> {
    let series = lower_central_series(l);
    if !series.last().unwrap().is_zero() {
        return Err(Error::domain("nil_degree_m: algebra is not nilpotent"));
    }
    Ok(series.len().max(2) - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::heisenberg3;
    use crate::matrix::rat;

    #[test]
    fn trivial_module_passes() {
        let p = PairLDA::trivial_module(
            LieAlgebra::abelian(3),
            Matrix::diag(&[rat(-3), rat(1), rat(2)]),
            Matrix::identity(2),
            Matrix::from_i64(&[&[0, -1], &[1, 0]]),
        )
        .unwrap();
        assert!(check_pair(&p).ok());
    }

    #[test]
    fn non_skew_rho_is_tagged() {
        let mut rho = vec![Matrix::zeros(2, 2); 3];
        rho[0] = Matrix::identity(2);
        let p = PairLDA::new(
            LieAlgebra::abelian(3),
            Matrix::zeros(3, 3),
            Matrix::identity(2),
            Matrix::zeros(2, 2),
            rho,
        )
        .unwrap();
        let r = check_pair(&p);
        assert!(!r.ok());
        assert_eq!(r.first_failure().unwrap().name, "rho-skew");
    }

    #[test]
    fn dim8_complex_block_example() {
        // Dl = diag(D_{1+i}, -1) as a real matrix, Da the rotation
        // generator, trivial rho.
        let dl = Matrix::from_i64(&[&[1, -1, 0], &[1, 1, 0], &[0, 0, -1]]);
        let p = PairLDA::trivial_module(
            LieAlgebra::abelian(3),
            dl,
            Matrix::identity(2),
            Matrix::from_i64(&[&[0, -1], &[1, 0]]),
        )
        .unwrap();
        assert!(check_pair(&p).ok());
    }

    #[test]
    fn compat_violation_detected() {
        // rho(e1) = J is skew for the identity gram and rho is a valid
        // abelian representation, but [Da, rho(e1)] != rho(Dl e1) when
        // Da does not commute appropriately.
        let j = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
        let mut rho = vec![Matrix::zeros(2, 2); 2];
        rho[0] = j.clone();
        // Da skew for identity gram; pick an element not commuting with J
        // composed against a Dl that moves e1.
        let da = Matrix::zeros(2, 2);
        let dl = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let p = PairLDA::new(LieAlgebra::abelian(2), dl, Matrix::identity(2), da, rho).unwrap();
        // rho(Dl e1) = rho(e2) = 0, [Da, rho(e1)] = 0: passes. Now make
        // Dl e1 = e1 so rho(Dl e1) = J != 0 = [Da, rho(e1)].
        let dl_bad = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let p_bad = PairLDA::new(
            p.l.clone(),
            dl_bad,
            p.a_gram.clone(),
            p.da.clone(),
            p.rho.clone(),
        )
        .unwrap();
        assert!(check_pair(&p).ok());
        let r = check_pair(&p_bad);
        assert!(!r.ok());
        assert_eq!(r.first_failure().unwrap().name, "rho-compat");
    }

    #[test]
    fn shape_errors_are_usage() {
        let err = PairLDA::new(
            LieAlgebra::abelian(2),
            Matrix::zeros(3, 3),
            Matrix::identity(2),
            Matrix::zeros(2, 2),
            vec![Matrix::zeros(2, 2); 2],
        )
        .unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn nil_degree_values() {
        assert_eq!(nil_degree_m(&LieAlgebra::abelian(3)).unwrap(), 0);
        assert_eq!(nil_degree_m(&heisenberg3()).unwrap(), 1);
        let mut solvable = LieAlgebra::abelian(2);
        solvable
            .set_bracket(0, 1, vec![rat(0), rat(1)])
            .unwrap();
        assert!(nil_degree_m(&solvable).is_err());
    }
}
