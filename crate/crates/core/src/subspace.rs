//! Subspaces of Q^n in canonical form.
//!
//! A subspace is stored as the reduced row echelon form of its spanning
//! set, so equal subspaces have identical representations and every
//! operation is deterministic. Complements follow one fixed convention:
//! the standard basis vectors at the non-pivot columns.

use num_traits::{One, Zero};

use crate::matrix::{gram_pairing, kernel_basis, solve_linear, Matrix, Rat};

/// Subspace of Q^n, canonically represented by an RREF row basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// RREF matrix whose rows form the canonical basis; zero rows trimmed.
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors inside Q^ambient.
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "span: length mismatch");
        if vectors.is_empty() {
            return Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() };
        }
        let (r, pivots) = Matrix::from_rows(vectors.to_vec()).rref();
        let rows: Vec<Vec<Rat>> = (0..pivots.len()).map(|i| r.row_vec(i)).collect();
        let basis = if rows.is_empty() { Matrix::zeros(0, ambient) } else { Matrix::from_rows(rows) };
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::span(ambient, &[])
    }

    pub fn full(ambient: usize) -> Self {
        let id = Matrix::identity(ambient);
        Subspace::span(ambient, &(0..ambient).map(|i| id.row_vec(i)).collect::<Vec<_>>())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis vectors (rows of the RREF).
    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        (0..self.dim()).map(|i| self.basis.row_vec(i)).collect()
    }

    /// Matrix whose columns are the canonical basis vectors.
    pub fn basis_columns(&self) -> Matrix {
        Matrix::from_columns(&self.basis_vectors(), self.ambient)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient, "contains: length mismatch");
        if self.dim() == 0 {
            return v.iter().all(Rat::is_zero);
        }
        solve_linear(&self.basis_columns(), v).expect("shapes agree").is_some()
    }

    /// Coordinates of v over the canonical basis; `None` when outside.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient, "coordinates: length mismatch");
        if self.dim() == 0 {
            return v.iter().all(Rat::is_zero).then(Vec::new);
        }
        solve_linear(&self.basis_columns(), v).expect("shapes agree")
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "sum: ambient mismatch");
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient, &vs)
    }

    /// Intersection via the kernel of the stacked coordinate map: a vector
    /// lies in both spans exactly when it is a combination of the first
    /// basis that the second basis also reproduces.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "intersect: ambient mismatch");
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // Columns: [B1 | −B2]; kernel elements (c1, c2) give B1·c1 = B2·c2.
        let b1 = self.basis_columns();
        let b2 = other.basis_columns();
        let stacked = b1.hcat(&b2.scale(&-Rat::one()));
        let vectors: Vec<Vec<Rat>> = kernel_basis(&stacked)
            .into_iter()
            .map(|k| b1.apply(&k[..self.dim()]))
            .collect();
        Subspace::span(self.ambient, &vectors)
    }

    /// Orthogonal complement with respect to a symmetric gram matrix:
    /// {x : ⟨b, x⟩_G = 0 for all basis vectors b} = ker(Bᵀ·G).
    pub fn orth_complement(&self, gram: &Matrix) -> Subspace {
        assert_eq!(gram.rows(), self.ambient, "orth_complement: gram shape");
        assert!(gram.is_symmetric(), "orth_complement: gram not symmetric");
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        let bt_g = &self.basis_columns().transpose() * gram;
        Subspace::span(self.ambient, &kernel_basis(&bt_g))
    }

    /// True when ⟨v, w⟩_G = 0 for all v, w in the subspace.
    pub fn is_isotropic(&self, gram: &Matrix) -> bool {
        let bs = self.basis_vectors();
        bs.iter().all(|v| bs.iter().all(|w| gram_pairing(gram, v, w).is_zero()))
    }

    /// True when the restriction of the gram matrix is non-degenerate.
    /// The zero subspace counts as non-degenerate.
    pub fn restriction_nondegenerate(&self, gram: &Matrix) -> bool {
        let b = self.basis_columns();
        let restricted = &(&b.transpose() * gram) * &b;
        restricted.rank() == self.dim()
    }

    /// Image of the subspace under a linear map (matrix acting on columns).
    pub fn image(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient, "image: shape mismatch");
        let vectors: Vec<Vec<Rat>> =
            self.basis_vectors().iter().map(|v| map.apply(v)).collect();
        Subspace::span(map.rows(), &vectors)
    }

    /// True when the map sends the subspace into itself.
    pub fn is_invariant_under(&self, map: &Matrix) -> bool {
        self.image(map).is_subspace_of(self)
    }

    /// Deterministic complement: the span of the standard basis vectors at
    /// the non-pivot columns of the canonical basis.
    pub fn std_complement(&self) -> Subspace {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let vectors: Vec<Vec<Rat>> = (0..self.ambient)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = vec![Rat::zero(); self.ambient];
                v[c] = Rat::one();
                v
            })
            .collect();
        Subspace::span(self.ambient, &vectors)
    }

    /// Deterministic complement of `self` inside `outer` (requires
    /// self ⊆ outer): greedily keep canonical basis vectors of `outer`
    /// that are independent of self plus the vectors kept so far.
    pub fn complement_within(&self, outer: &Subspace) -> Vec<Vec<Rat>> {
        assert!(self.is_subspace_of(outer), "complement_within: not nested");
        let mut acc = self.clone();
        let mut kept = Vec::new();
        for v in outer.basis_vectors() {
            if !acc.contains(&v) {
                kept.push(v.clone());
                acc = acc.sum(&Subspace::span(self.ambient, &[v]));
            }
        }
        assert_eq!(self.dim() + kept.len(), outer.dim());
        kept
    }

    /// Split v = p + q with p in self and q in the complement; requires
    /// self ⊕ complement to be the whole space.
    pub fn project_along(&self, complement: &Subspace, v: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        assert_eq!(self.dim() + complement.dim(), self.ambient, "not a direct complement");
        let b = self.basis_columns().hcat(&complement.basis_columns());
        let c = solve_linear(&b, v)
            .expect("shapes agree")
            .expect("direct sum spans the ambient space");
        let p = self.basis_columns().apply(&c[..self.dim()]);
        let q = complement.basis_columns().apply(&c[self.dim()..]);
        (p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    fn v(entries: &[i64]) -> Vec<Rat> {
        entries.iter().map(|&n| rat(n)).collect()
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let b = Subspace::span(3, &[v(&[2, 2, 2]), v(&[1, 1, 3]), v(&[3, 3, 5])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn membership_and_coordinates() {
        let s = Subspace::span(3, &[v(&[1, 0, 1]), v(&[0, 1, 1])]);
        assert!(s.contains(&v(&[2, 3, 5])));
        assert!(!s.contains(&v(&[0, 0, 1])));
        let c = s.coordinates(&v(&[2, 3, 5])).unwrap();
        let rebuilt = s.basis_columns().apply(&c);
        assert_eq!(rebuilt, v(&[2, 3, 5]));
    }

    #[test]
    fn sum_and_intersection_dimension_formula() {
        let a = Subspace::span(4, &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]);
        let b = Subspace::span(4, &[v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])]);
        let s = a.sum(&b);
        let i = a.intersect(&b);
        assert_eq!(s.dim(), 3);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 1, 0, 0])));
        assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
    }

    #[test]
    fn orth_complement_witt_plane() {
        let witt = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let e1 = Subspace::span(2, &[v(&[1, 0])]);
        let c = e1.orth_complement(&witt);
        // e1 is isotropic: it is its own orthogonal complement line.
        assert_eq!(c, e1);
        assert!(e1.is_isotropic(&witt));
    }

    #[test]
    fn restriction_nondegeneracy() {
        let g = Matrix::diag(&[rat(1), rat(-1), rat(1)]);
        let null_line = Subspace::span(3, &[v(&[1, 1, 0])]);
        assert!(!null_line.restriction_nondegenerate(&g));
        let good = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 0, 1])]);
        assert!(good.restriction_nondegenerate(&g));
        assert!(Subspace::zero(3).restriction_nondegenerate(&g));
    }

    #[test]
    fn std_complement_is_direct() {
        let s = Subspace::span(3, &[v(&[1, 2, 3])]);
        let c = s.std_complement();
        assert_eq!(c.dim(), 2);
        assert_eq!(s.sum(&c).dim(), 3);
        assert!(s.intersect(&c).is_zero());
        let (p, q) = s.project_along(&c, &v(&[5, 7, 9]));
        assert!(s.contains(&p));
        assert!(c.contains(&q));
        let total: Vec<Rat> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
        assert_eq!(total, v(&[5, 7, 9]));
    }

    #[test]
    fn invariance_under_maps() {
        let rot = Matrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 2]]);
        let plane = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert!(plane.is_invariant_under(&rot));
        let tilted = Subspace::span(3, &[v(&[1, 0, 1])]);
        assert!(!tilted.is_invariant_under(&rot));
    }
}
