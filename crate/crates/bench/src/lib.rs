//! Shared fixtures for the kernel benchmarks: deterministic random matrices
//! and a mid-sized catalog entry, so every benchmark times the same inputs.

use std::collections::BTreeMap;

use mslaw_core::catalog::{instantiate, CatalogEntry, FamilyId};
use mslaw_core::{sampling, Matrix};

/// Deterministic batch of dense square matrices with entries of the given
/// numerator and denominator bound.
pub fn random_matrices(n: usize, count: usize, bound: i64) -> Vec<Matrix> {
    let mut r = sampling::rng(4242);
    (0..count).map(|_| sampling::matrix(&mut r, n, n, bound)).collect()
}

/// Deterministic batch of symmetric matrices for signature computations.
pub fn random_symmetric(n: usize, count: usize, bound: i64) -> Vec<Matrix> {
    random_matrices(n, count, bound)
        .into_iter()
        .map(|m| &m + &m.transpose())
        .collect()
}

/// A dim-8 catalog entry at defaults: large enough to exercise the model
/// builder, the extraction pipeline, and the verification report.
pub fn w2_entry() -> CatalogEntry {
    instantiate(FamilyId::Dim8W2, &BTreeMap::new()).expect("catalog defaults instantiate")
}
