//! Seeded randomness for fuzz loops and emptiness sampling.
//!
//! All randomness in the crate flows through a ChaCha stream cipher seeded
//! explicitly, so every sampled object is reproducible from its seed.
//! Samplers produce small rationals to keep exact arithmetic fast.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::{Matrix, Rat};

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational with numerator in [-bound, bound] and denominator in {1, 2, 3}.
pub fn rational(r: &mut ChaCha8Rng, bound: i64) -> Rat {
    crate::matrix::ratio(r.gen_range(-bound..=bound), r.gen_range(1..=3))
}

/// Nonzero rational with the same support as `rational`.
pub fn nonzero_rational(r: &mut ChaCha8Rng, bound: i64) -> Rat {
    loop {
        let x = rational(r, bound);
        if !num_traits::Zero::is_zero(&x) {
            return x;
        }
    }
}

pub fn vector(r: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<Rat> {
    (0..len).map(|_| rational(r, bound)).collect()
}

pub fn matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rational(r, bound))
}

/// Invertible square matrix, by rejection.
pub fn nonsingular_matrix(r: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    loop {
        let m = matrix(r, n, n, bound);
        if m.rank() == n {
            return m;
        }
    }
}

/// Skewsymmetric matrix K = A − Aᵀ.
pub fn skew_matrix(r: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let a = matrix(r, n, n, bound);
    &a - &a.transpose()
}

/// Random rational combination of basis vectors; zero vector for an empty
/// basis.
pub fn combination(r: &mut ChaCha8Rng, basis: &[Vec<Rat>], ambient: usize, bound: i64) -> Vec<Rat> {
    let mut acc = vec![<Rat as num_traits::Zero>::zero(); ambient];
    for b in basis {
        let c = rational(r, bound);
        for (slot, entry) in acc.iter_mut().zip(b.iter()) {
            *slot += &c * entry;
        }
    }
    acc
}

/// Random element of C¹_Q over the pair: τ and σ are drawn from the D°_s
/// kernels in their degrees, so `check_cq` accepts the result by
/// construction.
pub fn cq_transform(
    r: &mut ChaCha8Rng,
    pair: &crate::pair::PairLDA,
    bound: i64,
) -> crate::cochain::TransformPair {
    use crate::cochain::Target;
    let tau = dcirc_kernel_sample(r, pair, 1, Target::A, pair.a_dim(), bound);
    let sigma = dcirc_kernel_sample(r, pair, 2, Target::Real, 1, bound);
    crate::cochain::TransformPair::new(tau, sigma).expect("sampled transform has the right shape")
}

/// Random cochain in the kernel of D°_s for the given degree and target.
fn dcirc_kernel_sample(
    r: &mut ChaCha8Rng,
    pair: &crate::pair::PairLDA,
    degree: usize,
    target: crate::cochain::Target,
    target_dim: usize,
    bound: i64,
) -> crate::cochain::Cochain {
    use crate::cochain::{coordinates, dcirc, from_coordinates, increasing_tuples, Target};
    let n = pair.n();
    let tuples = increasing_tuples(n, degree);
    let width = if target == Target::A { target_dim } else { 1 };
    let total = tuples.len() * width;
    if total == 0 {
        return crate::cochain::Cochain::zero(degree, target, target_dim);
    }
    let mut cols = Vec::with_capacity(total);
    for j in 0..total {
        let mut unit = vec![<Rat as num_traits::Zero>::zero(); total];
        unit[j] = num_traits::One::one();
        let u = from_coordinates(&tuples, target, target_dim, degree, &unit);
        cols.push(coordinates(&dcirc(pair, &u, true), n));
    }
    let basis = crate::matrix::kernel_basis(&Matrix::from_columns(&cols, total));
    let coords = combination(r, &basis, total, bound);
    from_coordinates(&tuples, target, target_dim, degree, &coords)
}

/// Random cochain of the given degree over an n-dimensional base, with a
/// random coefficient vector on every increasing index tuple.
pub fn cochain(
    r: &mut ChaCha8Rng,
    n: usize,
    degree: usize,
    target: crate::cochain::Target,
    target_dim: usize,
    bound: i64,
) -> crate::cochain::Cochain {
    let mut c = crate::cochain::Cochain::zero(degree, target, target_dim);
    for key in crate::cochain::increasing_tuples(n, degree) {
        c.add_term(&key, vector(r, target_dim, bound));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_are_reproducible() {
        let a = vector(&mut rng(42), 5, 9);
        let b = vector(&mut rng(42), 5, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn nonsingular_really_is() {
        let m = nonsingular_matrix(&mut rng(1), 4, 5);
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn skew_is_skew() {
        let k = skew_matrix(&mut rng(2), 3, 5);
        assert!((&k + &k.transpose()).is_zero());
    }

    #[test]
    fn cq_transforms_land_in_the_kernel_of_dcirc() {
        use crate::matrix::rat;
        let l = crate::lie::LieAlgebra::abelian(2);
        let dl = Matrix::diag(&[rat(1), rat(-1)]);
        let a_gram = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        let da = Matrix::diag(&[rat(1), rat(-1)]);
        let pair = crate::pair::PairLDA::trivial_module(l, dl, a_gram, da).unwrap();
        let mut nonzero = 0;
        for seed in 0..5 {
            let t = cq_transform(&mut rng(seed), &pair, 4);
            assert!(crate::cochain::check_cq(&pair, &t).unwrap());
            if !t.tau.is_zero() || !t.sigma.is_zero() {
                nonzero += 1;
            }
        }
        assert!(nonzero >= 3, "sampler should usually produce nonzero transforms");
    }
}
