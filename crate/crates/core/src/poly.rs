//! Univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first and kept normalized: the
//! leading coefficient is nonzero, and the zero polynomial is the empty
//! coefficient vector. Division, gcd, and modular inverse are exact.

use num_traits::{One, Zero};
use std::fmt;

use crate::matrix::{Matrix, Rat};

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            let coeff = if k > 0 && c.is_one() {
                String::new()
            } else if k > 0 && (-c).is_one() {
                "-".into()
            } else {
                c.to_string()
            };
            terms.push(if coeff.is_empty() || var.is_empty() {
                format!("{coeff}{var}")
            } else {
                format!("{coeff}*{var}")
            });
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        write!(f, "{out}")
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rat::one()] }
    }

    /// x
    pub fn x() -> Self {
        Poly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn constant(c: Rat) -> Self {
        Poly { coeffs: vec![c] }.normalized()
    }

    /// From coefficients, lowest degree first; trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        Poly { coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree and reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Rat::is_one)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip();
                Poly { coeffs: self.coeffs.iter().map(|c| c * &inv).collect() }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Poly { coeffs }.normalized()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.normalized()
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg divisor.
    /// Panics on division by zero.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dl = divisor.leading().unwrap().clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &dl;
            quot[k - dd] = q.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let v = &rem[k - dd + i] - &q * c;
                rem[k - dd + i] = v;
            }
        }
        (Poly { coeffs: quot }.normalized(), Poly { coeffs: rem }.normalized())
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divmod(divisor);
        assert!(r.is_zero(), "div_exact: nonzero remainder");
        q
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u·self + v·other = g, g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let lead_inv = r0.leading().unwrap().recip();
        let scale = Poly::constant(lead_inv);
        (r0.monic(), u0.mul(&scale), v0.mul(&scale))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(k.into()))
            .collect();
        Poly { coeffs }.normalized()
    }

    /// Squarefree part p / gcd(p, p'), monic. Requires p nonzero.
    pub fn squarefree_part(&self) -> Poly {
        assert!(!self.is_zero(), "squarefree_part of zero");
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    /// Evaluate at a square matrix by Horner's scheme.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        assert!(m.is_square(), "eval_matrix: non-square");
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &Matrix::identity(n).scale(c);
        }
        acc
    }

    /// Least common multiple, monic.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        self.mul(other).div_exact(&g).monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn normalization_trims_leading_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn arithmetic_ring_axioms_spotcheck() {
        let a = p(&[1, 2, 3]);
        let b = p(&[-1, 1]);
        assert_eq!(a.mul(&b).div_exact(&b), a);
        assert_eq!(a.add(&b).sub(&b), a);
    }

    #[test]
    fn divmod_matches_reconstruction() {
        let a = p(&[3, -2, 0, 5, 1]);
        let b = p(&[1, 0, 2]);
        let (q, r) = a.divmod(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_products() {
        let f = p(&[-1, 1]); // x − 1
        let g = p(&[-2, 1]); // x − 2
        let h = p(&[3, 1]); // x + 3
        assert_eq!(f.mul(&g).gcd(&f.mul(&h)), f);
        assert_eq!(f.gcd(&g), Poly::one());
    }

    #[test]
    fn xgcd_bezout_identity() {
        let a = p(&[-1, 0, 1]); // x² − 1
        let b = p(&[-1, 1]); // x − 1
        let (g, u, v) = a.xgcd(&b);
        assert_eq!(g, b);
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = p(&[-1, 1]); // x − 1
        let sq = f.mul(&f).mul(&p(&[-2, 1]));
        assert_eq!(sq.squarefree_part(), f.mul(&p(&[-2, 1])));
    }

    #[test]
    fn eval_matrix_on_nilpotent() {
        // q(x) = x², q(E12) = 0
        let e = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(p(&[0, 0, 1]).eval_matrix(&e).is_zero());
    }

    #[test]
    fn display_readable() {
        assert_eq!(p(&[-2, 0, 1]).to_string(), "x^2 - 2");
        assert_eq!(p(&[1]).to_string(), "1");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn lcm_of_coprime_is_product() {
        let f = p(&[-1, 1]);
        let g = p(&[-2, 1]);
        assert_eq!(f.lcm(&g), f.mul(&g));
        assert_eq!(f.lcm(&f), f);
    }
}
