//! Lie algebras by structure constants, metrics, derivations, and the
//! canonical isotropic ideal.
//!
//! Structure constants are stored densely with antisymmetry kept redundant
//! and validated at construction. Quotients and complements always use the
//! deterministic conventions of `subspace`, so every computed object is
//! reproducible. Nilpotency is detected by stabilization of the lower
//! central series, which happens within dim steps.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{gram_pairing, Matrix, Rat};
use crate::report::Report;
use crate::subspace::Subspace;

// ---- Lie algebras ----

/// Finite-dimensional Lie algebra over Q via structure constants:
/// [e_i, e_j] = Σ_k c[i][j][k] e_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Vec<Vec<Rat>>>,
}

impl LieAlgebra {
    /// Abelian algebra: all brackets zero.
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, c: vec![vec![vec![Rat::zero(); dim]; dim]; dim] }
    }

    /// Set [e_i, e_j] to the coefficient vector `v`, and [e_j, e_i] to −v.
    /// Returns a usage error for i = j with nonzero v or mismatched length.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vec<Rat>) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::usage("set_bracket: basis index out of range"));
        }
        if v.len() != self.dim {
            return Err(Error::usage("set_bracket: coefficient vector length mismatch"));
        }
        if i == j && v.iter().any(|x| !x.is_zero()) {
            return Err(Error::usage("bracket of equal indices must be zero"));
        }
        self.c[j][i] = v.iter().map(|x| -x.clone()).collect();
        self.c[i][j] = v;
        Ok(())
    }

    /// Build from a full structure tensor, validating antisymmetry.
    pub fn from_structure(c: Vec<Vec<Vec<Rat>>>) -> Result<Self> {
        let dim = c.len();
        if c.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(Error::usage("from_structure: tensor is not dim^3"));
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::usage(format!(
                            "from_structure: antisymmetry fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(LieAlgebra { dim, c })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient vector of [e_i, e_j].
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.c[i][j]
    }

    /// Bilinear bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim, "bracket: x length");
        assert_eq!(y.len(), self.dim, "bracket: y length");
        let mut out = vec![Rat::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out[k] += &xy * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Matrix of ad(x): y ↦ [x, y].
    pub fn ad(&self, x: &[Rat]) -> Matrix {
        let cols: Vec<Vec<Rat>> = (0..self.dim)
            .map(|j| {
                let mut e = vec![Rat::zero(); self.dim];
                e[j] = num_traits::One::one();
                self.bracket(x, &e)
            })
            .collect();
        Matrix::from_columns(&cols, self.dim)
    }

    /// Standard basis vector.
    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut e = vec![Rat::zero(); self.dim];
        e[i] = num_traits::One::one();
        e
    }
}

/// Heisenberg algebra 𝔥₃: [e1, e2] = e3.
pub fn heisenberg3() -> LieAlgebra {
    let mut h = LieAlgebra::abelian(3);
    let mut e3 = vec![Rat::zero(); 3];
    e3[2] = num_traits::One::one();
    h.set_bracket(0, 1, e3).expect("static data");
    h
}

// ---- Structural checks ----

/// Jacobi identity on all basis triples; the report names the first
/// failing triple.
pub fn check_jacobi(g: &LieAlgebra) -> Report {
    let mut r = Report::new();
    let n = g.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let ei = g.basis_vector(i);
                let ej = g.basis_vector(j);
                let ek = g.basis_vector(k);
                let lhs: Vec<Rat> = {
                    let a = g.bracket(&ei, &g.bracket(&ej, &ek));
                    let b = g.bracket(&ej, &g.bracket(&ek, &ei));
                    let c = g.bracket(&ek, &g.bracket(&ei, &ej));
                    (0..n).map(|t| &a[t] + &b[t] + &c[t]).collect()
                };
                if lhs.iter().any(|x| !x.is_zero()) {
                    r.fail("jacobi", format!("first failing triple (e{}, e{}, e{})", i + 1, j + 1, k + 1));
                    return r;
                }
            }
        }
    }
    r.pass("jacobi");
    r
}

/// True iff D[X,Y] = [DX,Y] + [X,DY] on all basis pairs.
pub fn is_derivation(g: &LieAlgebra, d: &Matrix) -> Result<bool> {
    if d.rows() != g.dim() || d.cols() != g.dim() {
        return Err(Error::usage("is_derivation: matrix size does not match algebra dimension"));
    }
    for i in 0..g.dim() {
        for j in (i + 1)..g.dim() {
            let ei = g.basis_vector(i);
            let ej = g.basis_vector(j);
            let lhs = d.apply(g.bracket_basis(i, j));
            let a = g.bracket(&d.apply(&ei), &ej);
            let b = g.bracket(&ei, &d.apply(&ej));
            if (0..g.dim()).any(|k| lhs[k] != &a[k] + &b[k]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff gram·D + Dᵀ·gram = 0.
pub fn is_skewsymmetric(gram: &Matrix, d: &Matrix) -> bool {
    (&(gram * d) + &(&d.transpose() * gram)).is_zero()
}

/// Lower central series 𝔤¹ ⊇ 𝔤² ⊇ … including the first stabilized term.
pub fn lower_central_series(g: &LieAlgebra) -> Vec<Subspace> {
    let full = Subspace::full(g.dim());
    let mut series = vec![full.clone()];
    loop {
        let next = bracket_subspace(g, &full, series.last().unwrap());
        if &next == series.last().unwrap() {
            break;
        }
        series.push(next);
    }
    series
}

/// Span of brackets [a, b] over basis vectors of the two subspaces.
pub fn bracket_subspace(g: &LieAlgebra, a: &Subspace, b: &Subspace) -> Subspace {
    let mut vectors = Vec::new();
    for v in a.basis_vectors() {
        for w in b.basis_vectors() {
            vectors.push(g.bracket(&v, &w));
        }
    }
    Subspace::span(g.dim(), &vectors)
}

/// True when the lower central series terminates at zero.
pub fn is_nilpotent_algebra(g: &LieAlgebra) -> bool {
    lower_central_series(g).last().is_some_and(Subspace::is_zero)
}

/// Center 𝔷(𝔤) = {x : [x, y] = 0 for all y}.
pub fn center(g: &LieAlgebra) -> Subspace {
    let n = g.dim();
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..n {
            // coefficient of e_k in [x, e_j] as a function of x_i
            rows.push((0..n).map(|i| g.bracket_basis(i, j)[k].clone()).collect());
        }
    }
    Subspace::span(n, &crate::matrix::kernel_basis(&Matrix::from_rows(rows)))
}

/// True when [𝔤, s] ⊆ s.
pub fn is_ideal(g: &LieAlgebra, s: &Subspace) -> bool {
    bracket_subspace(g, &Subspace::full(g.dim()), s).is_subspace_of(s)
}

// ---- Metric Lie algebras ----

/// Lie algebra with a symmetric invariant bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricLieAlgebra {
    pub algebra: LieAlgebra,
    pub gram: Matrix,
}

impl MetricLieAlgebra {
    /// Bundle an algebra with a gram matrix; shape and symmetry are
    /// usage-checked here, invariance via `check_ad_invariant`.
    pub fn new(algebra: LieAlgebra, gram: Matrix) -> Result<Self> {
        if gram.rows() != algebra.dim() || gram.cols() != algebra.dim() {
            return Err(Error::usage("MetricLieAlgebra: gram shape does not match dimension"));
        }
        if !gram.is_symmetric() {
            return Err(Error::usage("MetricLieAlgebra: gram is not symmetric"));
        }
        Ok(MetricLieAlgebra { algebra, gram })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn pairing(&self, x: &[Rat], y: &[Rat]) -> Rat {
        gram_pairing(&self.gram, x, y)
    }
}

/// Invariance ⟨[X,Y],Z⟩ = ⟨X,[Y,Z]⟩ on all basis triples; the report
/// names the first failing triple.
pub fn check_ad_invariant(m: &MetricLieAlgebra) -> Report {
    let mut r = Report::new();
    let g = &m.algebra;
    let n = g.dim();
    if m.gram.rank() != n {
        r.fail("gram-nondegenerate", "gram matrix is singular");
        return r;
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = gram_pairing(&m.gram, g.bracket_basis(i, j), &g.basis_vector(k));
                let rhs = gram_pairing(&m.gram, &g.basis_vector(i), g.bracket_basis(j, k));
                if lhs != rhs {
                    r.fail(
                        "ad-invariant",
                        format!("first failing triple (e{}, e{}, e{})", i + 1, j + 1, k + 1),
                    );
                    return r;
                }
            }
        }
    }
    r.pass("ad-invariant");
    r
}

/// Canonical isotropic ideal 𝔦(𝔤) = Σ_k 𝔤^{k+1} ∩ (𝔤^{k+1})^⊥ of a
/// nilpotent metric Lie algebra.
pub fn canonical_isotropic_ideal(m: &MetricLieAlgebra) -> Result<Subspace> {
    if m.gram.rank() != m.dim() {
        return Err(Error::domain("canonical_isotropic_ideal: gram is degenerate"));
    }
    let series = lower_central_series(&m.algebra);
    if !series.last().unwrap().is_zero() {
        return Err(Error::domain("canonical_isotropic_ideal: algebra is not nilpotent"));
    }
    let mut ideal = Subspace::zero(m.dim());
    for gk in &series {
        ideal = ideal.sum(&gk.intersect(&gk.orth_complement(&m.gram)));
    }
    // Guaranteed properties of the construction; failures would indicate a
    // bug, not bad input.
    assert!(ideal.is_isotropic(&m.gram), "canonical ideal must be isotropic");
    assert!(is_ideal(&m.algebra, &ideal), "canonical ideal must be an ideal");
    let perp = ideal.orth_complement(&m.gram);
    for v in perp.basis_vectors() {
        for w in perp.basis_vectors() {
            assert!(
                ideal.contains(&m.algebra.bracket(&v, &w)),
                "perp/ideal quotient must be abelian"
            );
        }
    }
    Ok(ideal)
}

// ---- The omega <-> D correspondence ----

/// Metric Lie algebra carrying a symplectic form ω = ⟨·, D·⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSymplecticLieAlgebra {
    pub metric: MetricLieAlgebra,
    pub omega: Matrix,
    pub derivation: Matrix,
}

/// dω(X,Y,Z) = −ω([X,Y],Z) + ω([X,Z],Y) − ω([Y,Z],X) on all basis triples.
pub fn omega_is_closed(g: &LieAlgebra, omega: &Matrix) -> bool {
    let n = g.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let t1 = gram_pairing(omega, g.bracket_basis(i, j), &g.basis_vector(k));
                let t2 = gram_pairing(omega, g.bracket_basis(i, k), &g.basis_vector(j));
                let t3 = gram_pairing(omega, g.bracket_basis(j, k), &g.basis_vector(i));
                if !(&t2 - &t1 - t3).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Build the symplectic structure ω = gram·D from a bijective
/// skewsymmetric derivation D of a nilpotent metric Lie algebra.
pub fn symplectic_from_derivation(
    m: &MetricLieAlgebra,
    d: &Matrix,
) -> Result<MetricSymplecticLieAlgebra> {
    if d.rows() != m.dim() || d.cols() != m.dim() {
        return Err(Error::usage("symplectic_from_derivation: D shape mismatch"));
    }
    if m.gram.rank() != m.dim() {
        return Err(Error::domain("symplectic_from_derivation: gram is degenerate"));
    }
    if !check_ad_invariant(m).ok() {
        return Err(Error::domain("symplectic_from_derivation: gram is not ad-invariant"));
    }
    if !is_nilpotent_algebra(&m.algebra) {
        return Err(Error::domain("symplectic_from_derivation: algebra is not nilpotent"));
    }
    if d.rank() != m.dim() {
        return Err(Error::domain("symplectic_from_derivation: D is not bijective"));
    }
    if !is_skewsymmetric(&m.gram, d) {
        return Err(Error::domain("symplectic_from_derivation: D is not skewsymmetric"));
    }
    if !is_derivation(&m.algebra, d)? {
        return Err(Error::domain("symplectic_from_derivation: D is not a derivation"));
    }
    let omega = &m.gram * d;
    // Consequences of the preconditions, asserted.
    assert!((&omega + &omega.transpose()).is_zero(), "omega must be skewsymmetric");
    assert_eq!(omega.rank(), m.dim(), "omega must be non-degenerate");
    assert!(omega_is_closed(&m.algebra, &omega), "omega must be closed");
    Ok(MetricSymplecticLieAlgebra { metric: m.clone(), omega, derivation: d.clone() })
}

/// Recover the unique D with gram·D = omega from a closed non-degenerate
/// skewsymmetric omega; inverse of `symplectic_from_derivation`.
pub fn derivation_from_symplectic(m: &MetricLieAlgebra, omega: &Matrix) -> Result<Matrix> {
    if omega.rows() != m.dim() || omega.cols() != m.dim() {
        return Err(Error::usage("derivation_from_symplectic: omega shape mismatch"));
    }
    if !(&(omega.transpose()) + omega).is_zero() {
        return Err(Error::domain("derivation_from_symplectic: omega is not skewsymmetric"));
    }
    if omega.rank() != m.dim() {
        return Err(Error::domain("derivation_from_symplectic: omega is degenerate"));
    }
    if !omega_is_closed(&m.algebra, omega) {
        return Err(Error::domain("derivation_from_symplectic: omega is not closed"));
    }
    if m.gram.rank() != m.dim() {
        return Err(Error::domain("derivation_from_symplectic: gram is degenerate"));
    }
    if !check_ad_invariant(m).ok() {
        return Err(Error::domain("derivation_from_symplectic: gram is not ad-invariant"));
    }
    if !is_nilpotent_algebra(&m.algebra) {
        return Err(Error::domain("derivation_from_symplectic: algebra is not nilpotent"));
    }
    let d = &m.gram.inverse().expect("non-degenerate gram") * omega;
    assert_eq!(d.rank(), m.dim(), "recovered D must be bijective");
    assert!(is_skewsymmetric(&m.gram, &d), "recovered D must be skewsymmetric");
    assert!(
        is_derivation(&m.algebra, &d).expect("matching shapes"),
        "recovered D must be a derivation"
    );
    Ok(d)
}

/// Orthogonal direct sum with block-diagonal brackets and gram.
pub fn direct_sum(m1: &MetricLieAlgebra, m2: &MetricLieAlgebra) -> MetricLieAlgebra {
    let (n1, n2) = (m1.dim(), m2.dim());
    let n = n1 + n2;
    let mut g = LieAlgebra::abelian(n);
    for i in 0..n1 {
        for j in 0..n1 {
            let mut v = m1.algebra.bracket_basis(i, j).to_vec();
            v.extend(vec![Rat::zero(); n2]);
            g.c[i][j] = v;
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            let mut v = vec![Rat::zero(); n1];
            v.extend(m2.algebra.bracket_basis(i, j).to_vec());
            g.c[n1 + i][n1 + j] = v;
        }
    }
    let gram = Matrix::block_diag(&[&m1.gram, &m2.gram]);
    MetricLieAlgebra { algebra: g, gram }
}

/// True when F is a Lie algebra homomorphism g1 → g2 on basis pairs.
pub fn is_homomorphism(g1: &LieAlgebra, g2: &LieAlgebra, f: &Matrix) -> bool {
    if f.rows() != g2.dim() || f.cols() != g1.dim() {
        return false;
    }
    for i in 0..g1.dim() {
        for j in (i + 1)..g1.dim() {
            let lhs = f.apply(g1.bracket_basis(i, j));
            let rhs = g2.bracket(&f.apply(&g1.basis_vector(i)), &f.apply(&g1.basis_vector(j)));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// True when F preserves the pairing: F^T·gram2·F = gram1.
pub fn is_isometry(gram1: &Matrix, gram2: &Matrix, f: &Matrix) -> bool {
    &(&f.transpose() * gram2) * f == *gram1
}
