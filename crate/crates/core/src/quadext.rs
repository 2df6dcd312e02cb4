//! Standard models and quadratic extensions.
//!
//! This module connects the two sides of the correspondence. Going up, a
//! valid pair (l, D_l) with orthogonal module (a, <,>_a, D_a, rho) and a
//! quadratic cocycle (alpha, gamma, delta, epsilon) in Z^2_Q+ assemble
//! into the standard model d_{alpha,gamma}(l, a): a metric Lie algebra on
//! the ordered basis Z_1..Z_n, A_1..A_m, L_1..L_n (the blocks l*, a, l)
//! carrying the derivation D_{delta,epsilon}. Going down, every nilpotent
//! metric Lie algebra g with bijective skewsymmetric derivation D has a
//! canonical isotropic ideal i(g), and choosing an admissible section of
//! the quotient map g -> g/i^perp recovers a cocycle over the induced
//! pair; different admissible sections give cocycles related by the group
//! action on Z^2_Q+, and the witness transform can be computed exactly.
//!
//! Invariants maintained here:
//! - `build_standard_model` accepts exactly the cocycles in Z^2_Q+ and
//!   asserts post hoc that the assembled bracket satisfies Jacobi, that
//!   the metric is ad-invariant, that D_{delta,epsilon} is a skew
//!   derivation, and that its semisimple part is the split derivation
//!   D_{0,0} of the semisimple parts of D_l and D_a.
//! - `check_balanced` reports the first failing condition (A_k) or (B_k)
//!   by name; the zero cocycle always fails (A_0).
//! - `extract_cocycle` on the canonical extension of a standard model,
//!   with the model's own splitting as section, returns the source
//!   cocycle exactly, in the same coordinates.
//! - `verify_equivalence` and `verify_isomorphism` decide their questions
//!   by exact cocycle arithmetic and, on success, cross-check the answer
//!   by building the triangular equivalence matrix F (and the block
//!   diagonal morphism part phi) and verifying it really is an isometric
//!   Lie isomorphism intertwining the derivations.
//!
//! All arithmetic is exact; every verdict is a theorem about the inputs,
//! not a numerical judgement.

use num_traits::{One, Zero};

use crate::cochain::{
    act, check_cq, check_morphism, check_zq_plus, pullback, Cochain, MorphismOfPairs,
    QuadCocycle, TransformPair,
};
use crate::error::{Error, Result};
use crate::jordan::jordan_chevalley;
use crate::lie::{
    bracket_subspace, canonical_isotropic_ideal, check_ad_invariant, check_jacobi, is_derivation,
    is_homomorphism, is_ideal, is_isometry, is_nilpotent_algebra, is_skewsymmetric,
    lower_central_series, LieAlgebra, MetricLieAlgebra,
};
use crate::matrix::{gram_pairing, kernel_basis, ratio, solve_linear, LinearSystem, Matrix, Rat};
use crate::pair::{check_pair, nil_degree_m, PairLDA};
use crate::report::Report;
use crate::subspace::Subspace;

// ---- Standard models ----

/// A standard model d_{alpha,gamma}(l, a) together with its derivation
/// D_{delta,epsilon} and the data it was built from.
#[derive(Clone, Debug)]
pub struct StandardModel {
    /// The metric Lie algebra on l* ⊕ a ⊕ l.
    pub model: MetricLieAlgebra,
    /// The derivation D_{delta,epsilon} in model coordinates.
    pub derivation: Matrix,
    pub source_pair: PairLDA,
    pub source_cocycle: QuadCocycle,
}

/// Set [e_i, e_j] on an algebra under construction, reordering the pair
/// and flipping the sign when needed.
fn set_oriented(alg: &mut LieAlgebra, i: usize, j: usize, v: Vec<Rat>) -> Result<()> {
    if v.iter().all(Rat::is_zero) {
        return Ok(());
    }
    if i < j {
        alg.set_bracket(i, j, v)
    } else {
        alg.set_bracket(j, i, v.iter().map(|x| -x.clone()).collect())
    }
}

/// The block matrix of D_{delta,epsilon} in model coordinates. `delta_mat`
/// is m x n with column i = delta(e_i); `eps_mat` is n x n with entry
/// (i, j) = epsilon(e_i, e_j).
fn assemble_derivation(
    n: usize,
    a_gram: &Matrix,
    dl: &Matrix,
    da: &Matrix,
    delta_mat: &Matrix,
    eps_mat: &Matrix,
) -> Matrix {
    let m = a_gram.rows();
    let mut d = Matrix::zeros(2 * n + m, 2 * n + m);
    d.put_block(0, 0, &-&dl.transpose());
    d.put_block(0, n, &-&(&delta_mat.transpose() * a_gram));
    d.put_block(0, n + m, &-eps_mat);
    d.put_block(n, n, da);
    d.put_block(n, n + m, delta_mat);
    d.put_block(n + m, n + m, dl);
    d
}

/// Assemble the standard model bracket, metric, and derivation without the
/// Z^2_Q+ gate or the post hoc assertions. Shape errors are usage errors;
/// no mathematical condition is checked, so the result may violate Jacobi.
/// Pair this with `standard_model_assertions` to observe which invariant a
/// non-cocycle breaks.
pub fn assemble_standard_model(pair: &PairLDA, c: &QuadCocycle) -> Result<StandardModel> {
    c.validate_over(pair)?;
    let n = pair.n();
    let m = pair.a_dim();
    let dim = 2 * n + m;
    let mut alg = LieAlgebra::abelian(dim);

    // [L_i, L_j] = Sum_k gamma(e_i,e_j,e_k) Z_k + alpha(e_i,e_j) + Sum_k c_ij^k L_k
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = vec![Rat::zero(); dim];
            for k in 0..n {
                v[k] = c.gamma.get(&[i, j, k])[0].clone();
            }
            let av = c.alpha.get(&[i, j]);
            v[n..n + m].clone_from_slice(&av);
            let lb = pair.l.bracket_basis(i, j);
            v[n + m..].clone_from_slice(lb);
            set_oriented(&mut alg, n + m + i, n + m + j, v)?;
        }
    }
    // [L_i, Z_j] = -Sum_k c_ik^j Z_k (the coadjoint action on l*)
    for i in 0..n {
        for j in 0..n {
            let mut v = vec![Rat::zero(); dim];
            for k in 0..n {
                v[k] = -pair.l.bracket_basis(i, k)[j].clone();
            }
            set_oriented(&mut alg, n + m + i, j, v)?;
        }
    }
    // [L_i, A_a] = -Sum_k <A_a, alpha(e_i,e_k)>_a Z_k + rho(e_i) A_a
    for i in 0..n {
        for a in 0..m {
            let mut v = vec![Rat::zero(); dim];
            for k in 0..n {
                let ga = pair.a_gram.apply(&c.alpha.get(&[i, k]));
                v[k] = -ga[a].clone();
            }
            let rc = pair.rho[i].col_vec(a);
            v[n..n + m].clone_from_slice(&rc);
            set_oriented(&mut alg, n + m + i, n + a, v)?;
        }
    }
    // [A_a, A_b] = Sum_k <rho(e_k) A_a, A_b>_a Z_k
    for a in 0..m {
        for b in (a + 1)..m {
            let mut v = vec![Rat::zero(); dim];
            for k in 0..n {
                let u = pair.rho[k].col_vec(a);
                v[k] = pair.a_gram.apply(&u)[b].clone();
            }
            set_oriented(&mut alg, n + a, n + b, v)?;
        }
    }

    let mut gram = Matrix::zeros(dim, dim);
    gram.put_block(0, n + m, &Matrix::identity(n));
    gram.put_block(n + m, 0, &Matrix::identity(n));
    gram.put_block(n, n, &pair.a_gram);

    let delta_mat = Matrix::from_fn(m, n, |a, i| c.delta.get(&[i])[a].clone());
    let eps_mat = Matrix::from_fn(n, n, |i, j| c.epsilon.get(&[i, j])[0].clone());
    let derivation = assemble_derivation(n, &pair.a_gram, &pair.dl, &pair.da, &delta_mat, &eps_mat);

    Ok(StandardModel {
        model: MetricLieAlgebra::new(alg, gram)?,
        derivation,
        source_pair: pair.clone(),
        source_cocycle: c.clone(),
    })
}

/// The invariants a standard model of a genuine cocycle must satisfy, as a
/// report: Jacobi, ad-invariance of the metric, D_{delta,epsilon} being a
/// skewsymmetric derivation, and its semisimple part being the split
/// derivation of the semisimple parts of D_l and D_a.
pub fn standard_model_assertions(sm: &StandardModel) -> Report {
    let mut rep = Report::new();
    let jac = check_jacobi(&sm.model.algebra);
    let jd = jac.first_failure().map_or(String::new(), |f| f.detail.clone());
    rep.record("jacobi", jac.ok(), jd);
    let adi = check_ad_invariant(&sm.model);
    let ad = adi.first_failure().map_or(String::new(), |f| f.detail.clone());
    rep.record("ad-invariant", adi.ok(), ad);
    let der = is_derivation(&sm.model.algebra, &sm.derivation).unwrap_or(false);
    rep.record("derivation", der, "D_{delta,epsilon} is not a derivation");
    rep.record(
        "skewsymmetric",
        is_skewsymmetric(&sm.model.gram, &sm.derivation),
        "D_{delta,epsilon} is not skewsymmetric",
    );
    let pair = &sm.source_pair;
    let n = pair.n();
    let m = pair.a_dim();
    let want = assemble_derivation(
        n,
        &pair.a_gram,
        &jordan_chevalley(&pair.dl).s,
        &jordan_chevalley(&pair.da).s,
        &Matrix::zeros(m, n),
        &Matrix::zeros(n, n),
    );
    rep.record(
        "semisimple-part",
        jordan_chevalley(&sm.derivation).s == want,
        "semisimple part of D is not the split model derivation",
    );
    rep
}

/// Build the standard model of a cocycle in Z^2_Q+ over a valid pair.
/// Cocycles outside Z^2_Q+ are rejected with a domain error naming the
/// first violated condition; for accepted inputs every invariant listed in
/// `standard_model_assertions` is asserted.
pub fn build_standard_model(pair: &PairLDA, c: &QuadCocycle) -> Result<StandardModel> {
    let pr = check_pair(pair);
    if let Some(f) = pr.first_failure() {
        return Err(Error::domain(format!("build_standard_model: invalid pair: {}", f.name)));
    }
    let zq = check_zq_plus(pair, c)?;
    if let Some(f) = zq.first_failure() {
        return Err(Error::domain(format!(
            "build_standard_model: cocycle is not in Z^2_Q+: {}",
            f.name
        )));
    }
    let sm = assemble_standard_model(pair, c)?;
    let rep = standard_model_assertions(&sm);
    assert!(
        rep.ok(),
        "standard model invariant violated for a cocycle in Z^2_Q+: {}",
        rep.first_failure().unwrap().name
    );
    Ok(sm)
}

// ---- Balanced conditions ----

/// Decide whether a cocycle over (l, D_l) with module a is balanced: the
/// conditions (A_k) and (B_k) for k = 0..=m, where m is the nilpotency
/// degree of l. The report carries a single line, "balanced" on success or
/// "balanced (A_k)" / "balanced (B_k)" naming the first failure.
///
/// Preconditions (domain errors): l nilpotent, D_l and D_a bijective, and
/// rho trivial.
pub fn check_balanced(pair: &PairLDA, c: &QuadCocycle) -> Result<Report> {
    c.validate_over(pair)?;
    let m_deg = nil_degree_m(&pair.l)?;
    if pair.dl.inverse().is_none() {
        return Err(Error::domain("check_balanced: D_l is not bijective"));
    }
    if pair.da.inverse().is_none() {
        return Err(Error::domain("check_balanced: D_a is not bijective"));
    }
    if pair.rho.iter().any(|r| !r.is_zero()) {
        return Err(Error::domain("check_balanced: rho must be trivial"));
    }
    let n = pair.n();
    let m = pair.a_dim();
    let series = lower_central_series(&pair.l);
    let zc = crate::lie::center(&pair.l);
    let mut rep = Report::new();

    for k in 0..=m_deg {
        let wk = if k < series.len() { series[k].clone() } else { Subspace::zero(n) };
        let wk_basis = wk.basis_vectors();
        let d = wk_basis.len();
        let lz = zc.intersect(&wk);
        let lz_basis = lz.basis_vectors();
        let dl0 = lz_basis.len();

        // (A_k): unknowns (L_0, A_0, Z_0) with L_0 in z(l) ∩ l^{k+1},
        // A_0 in a, Z_0 a functional on l^{k+1}. The condition holds when
        // every solution of the homogeneous system has L_0 = 0.
        let mut sys = LinearSystem::new(dl0 + m + d);
        for t in 0..n {
            let et = pair.l.basis_vector(t);
            // alpha(e_t, L_0) = 0
            let avals: Vec<Vec<Rat>> =
                lz_basis.iter().map(|b| c.alpha.eval(&[et.clone(), b.clone()])).collect();
            for a in 0..m {
                let mut co = vec![Rat::zero(); dl0 + m + d];
                for (b, av) in avals.iter().enumerate() {
                    co[b] = av[a].clone();
                }
                sys.push(co, Rat::zero());
            }
            // gamma(e_t, L_0, X) + <A_0, alpha(e_t, X)>_a - Z_0([e_t, X]) = 0
            for xs in wk_basis.iter() {
                let mut co = vec![Rat::zero(); dl0 + m + d];
                for (b, lb) in lz_basis.iter().enumerate() {
                    co[b] = c.gamma.eval(&[et.clone(), lb.clone(), xs.clone()])[0].clone();
                }
                let ga = pair.a_gram.apply(&c.alpha.eval(&[et.clone(), xs.clone()]));
                for a in 0..m {
                    co[dl0 + a] = ga[a].clone();
                }
                let bx = pair.l.bracket(&et, xs);
                let coords = wk.coordinates(&bx).expect("[l, l^{k+1}] lies in l^{k+1}");
                for (q, x) in coords.iter().enumerate() {
                    co[dl0 + m + q] = -x.clone();
                }
                sys.push(co, Rat::zero());
            }
        }
        let holds_a = sys.kernel().iter().all(|v| v[..dl0].iter().all(Rat::is_zero));
        if !holds_a {
            rep.fail(format!("balanced (A_{k})"), "");
            return Ok(rep);
        }

        // (B_k): the kernel of the bracket map l ⊗ l^{k+1} -> l, pushed
        // through the linear extension of alpha, must span a subspace of a
        // on which the metric restricts non-degenerately.
        if d > 0 {
            let mut bcols = Vec::with_capacity(n * d);
            for t in 0..n {
                let et = pair.l.basis_vector(t);
                for xs in &wk_basis {
                    bcols.push(pair.l.bracket(&et, xs));
                }
            }
            let bmat = Matrix::from_columns(&bcols, n);
            let mut imgs = Vec::new();
            for kvec in kernel_basis(&bmat) {
                let mut img = vec![Rat::zero(); m];
                for t in 0..n {
                    for s in 0..d {
                        let coef = &kvec[t * d + s];
                        if coef.is_zero() {
                            continue;
                        }
                        let av =
                            c.alpha.eval(&[pair.l.basis_vector(t), wk_basis[s].clone()]);
                        for a in 0..m {
                            img[a] = &img[a] + &(coef * &av[a]);
                        }
                    }
                }
                imgs.push(img);
            }
            let image = Subspace::span(m, &imgs);
            if !image.restriction_nondegenerate(&pair.a_gram) {
                rep.fail(format!("balanced (B_{k})"), "");
                return Ok(rep);
            }
        }
    }
    rep.pass("balanced");
    Ok(rep)
}

// ---- Canonical quadratic extensions ----

/// The canonical quadratic extension data of a nilpotent metric Lie
/// algebra with bijective skewsymmetric derivation: the canonical
/// isotropic ideal i, its perp, deterministic coordinates for the
/// quotients l = g/i^perp and a = i^perp/i, the induced pair, and the
/// exact sequence maps i: a -> g/i and p: g/i -> l.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub g: MetricLieAlgebra,
    pub d: Matrix,
    pub ideal: Subspace,
    pub i_perp: Subspace,
    /// Representatives of the chosen basis of g/i^perp (standard basis
    /// vectors at the non-pivot columns of i^perp).
    pub l_basis: Vec<Vec<Rat>>,
    /// Representatives of the chosen basis of i^perp/i (greedy complement
    /// of i inside i^perp over the canonical basis of i^perp).
    pub a_basis: Vec<Vec<Rat>>,
    /// The induced pair (l, D_l) with module (a, <,>_a, D_a, rho).
    pub pair: PairLDA,
    /// i: a -> g/i in the deterministic quotient coordinates of g/i.
    pub i_map: Matrix,
    /// p: g/i -> l in the same coordinates.
    pub p_map: Matrix,
}

/// Compute the canonical quadratic extension of (g, D): the canonical
/// isotropic ideal with both quotients in deterministic coordinates.
/// Domain errors mirror the correspondence preconditions; every structural
/// property of the output (i^perp an ideal, induced pair valid, exactness,
/// the maps intertwining the induced derivations) is asserted.
pub fn canonical_extension_of(g: &MetricLieAlgebra, d: &Matrix) -> Result<QuadraticExtension> {
    let nn = g.dim();
    if d.rows() != nn || d.cols() != nn {
        return Err(Error::usage("canonical_extension_of: derivation shape mismatch"));
    }
    if g.gram.inverse().is_none() {
        return Err(Error::domain("gram is degenerate"));
    }
    if !check_ad_invariant(g).ok() {
        return Err(Error::domain("gram is not ad-invariant"));
    }
    if !is_nilpotent_algebra(&g.algebra) {
        return Err(Error::domain("algebra is not nilpotent"));
    }
    if d.inverse().is_none() {
        return Err(Error::domain("D is not bijective"));
    }
    if !is_skewsymmetric(&g.gram, d) {
        return Err(Error::domain("D is not skewsymmetric"));
    }
    if !is_derivation(&g.algebra, d)? {
        return Err(Error::domain("D is not a derivation"));
    }

    let ideal = canonical_isotropic_ideal(g)?;
    let i_perp = ideal.orth_complement(&g.gram);
    assert!(ideal.is_invariant_under(d), "canonical ideal must be D-invariant");
    assert!(i_perp.is_invariant_under(d), "i^perp must be D-invariant");

    let n = ideal.dim();
    let l_comp = i_perp.std_complement();
    let l_basis = l_comp.basis_vectors();
    assert_eq!(l_basis.len(), n, "dim g/i^perp must equal dim i");
    let a_basis = ideal.complement_within(&i_perp);
    let m = a_basis.len();

    // Coordinate splitting g = i ⊕ span(a) ⊕ span(l).
    let mut cols = ideal.basis_vectors();
    cols.extend(a_basis.iter().cloned());
    cols.extend(l_basis.iter().cloned());
    let frame = Matrix::from_columns(&cols, nn);
    let frame_inv = frame.inverse().expect("ideal, a, and l parts span g");
    let split = |v: &[Rat]| -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
        let w = frame_inv.apply(v);
        (w[..n].to_vec(), w[n..n + m].to_vec(), w[n + m..].to_vec())
    };

    let mut l_alg = LieAlgebra::abelian(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (_, _, lc) = split(&g.algebra.bracket(&l_basis[i], &l_basis[j]));
            if !lc.iter().all(Rat::is_zero) {
                l_alg.set_bracket(i, j, lc)?;
            }
        }
    }
    let dl_cols: Vec<Vec<Rat>> = l_basis.iter().map(|u| split(&d.apply(u)).2).collect();
    let dl = Matrix::from_columns(&dl_cols, n);

    let a_gram = Matrix::from_fn(m, m, |a, b| gram_pairing(&g.gram, &a_basis[a], &a_basis[b]));
    assert!(a_gram.inverse().is_some(), "induced metric on a must be non-degenerate");
    let da_cols: Vec<Vec<Rat>> = a_basis
        .iter()
        .map(|w| {
            let (_, ac, lc) = split(&d.apply(w));
            assert!(lc.iter().all(Rat::is_zero), "D must preserve i^perp");
            ac
        })
        .collect();
    let da = Matrix::from_columns(&da_cols, m);
    let rho: Vec<Matrix> = (0..n)
        .map(|i| {
            let cols: Vec<Vec<Rat>> = a_basis
                .iter()
                .map(|w| {
                    let (_, ac, lc) = split(&g.algebra.bracket(&l_basis[i], w));
                    assert!(lc.iter().all(Rat::is_zero), "i^perp must be an ideal");
                    ac
                })
                .collect();
            Matrix::from_columns(&cols, m)
        })
        .collect();
    let pair = PairLDA::new(l_alg, dl, a_gram, da, rho)?;
    let pr = check_pair(&pair);
    assert!(pr.ok(), "induced pair must be valid: {}", pr.first_failure().unwrap().name);

    // Quotient g/i in deterministic coordinates, with the exact sequence
    // maps and their intertwining properties.
    let gi_comp = ideal.std_complement();
    let gi_basis = gi_comp.basis_vectors();
    assert_eq!(gi_basis.len(), n + m);
    let class_gi = |v: &[Rat]| -> Vec<Rat> {
        let (p, _) = gi_comp.project_along(&ideal, v);
        gi_comp.coordinates(&p).expect("quotient class")
    };
    let class_l = |v: &[Rat]| -> Vec<Rat> {
        let (p, _) = l_comp.project_along(&i_perp, v);
        l_comp.coordinates(&p).expect("quotient class")
    };
    let i_map =
        Matrix::from_columns(&a_basis.iter().map(|w| class_gi(w)).collect::<Vec<_>>(), n + m);
    let p_map = Matrix::from_columns(&gi_basis.iter().map(|w| class_l(w)).collect::<Vec<_>>(), n);
    assert!((&p_map * &i_map).is_zero(), "p after i must vanish");
    assert_eq!(i_map.rank(), m, "i must be injective");
    assert_eq!(p_map.rank(), n, "p must be surjective");
    let dbar =
        Matrix::from_columns(&gi_basis.iter().map(|w| class_gi(&d.apply(w))).collect::<Vec<_>>(), n + m);
    assert_eq!(&dbar * &i_map, &i_map * &pair.da, "i must intertwine D_a with the quotient of D");
    assert_eq!(&p_map * &dbar, &pair.dl * &p_map, "p must intertwine the quotient of D with D_l");

    Ok(QuadraticExtension {
        g: g.clone(),
        d: d.clone(),
        ideal,
        i_perp,
        l_basis,
        a_basis,
        pair,
        i_map,
        p_map,
    })
}

/// Re-verify the structural invariants of an extension, one line each.
pub fn check_extension(ext: &QuadraticExtension) -> Report {
    let mut rep = Report::new();
    rep.record(
        "ideal-isotropic",
        ext.ideal.is_isotropic(&ext.g.gram),
        "the canonical ideal is not isotropic",
    );
    rep.record("ideal-is-ideal", is_ideal(&ext.g.algebra, &ext.ideal), "i is not an ideal");
    rep.record("iperp-is-ideal", is_ideal(&ext.g.algebra, &ext.i_perp), "i^perp is not an ideal");
    rep.record("ideal-invariant", ext.ideal.is_invariant_under(&ext.d), "i is not D-invariant");
    rep.record(
        "iperp-invariant",
        ext.i_perp.is_invariant_under(&ext.d),
        "i^perp is not D-invariant",
    );
    let exact = (&ext.p_map * &ext.i_map).is_zero()
        && ext.i_map.rank() == ext.pair.a_dim()
        && ext.p_map.rank() == ext.pair.n();
    rep.record("exactness", exact, "0 -> a -> g/i -> l -> 0 is not exact");
    rep.record("pair-valid", check_pair(&ext.pair).ok(), "induced pair is invalid");
    rep
}

// ---- Sections and extraction ----

/// The canonical splitting of a standard model: the section that lifts the
/// basis of l to the L-block coordinates.
pub fn canonical_model_section(n: usize, a_dim: usize) -> Matrix {
    Matrix::from_fn(
        2 * n + a_dim,
        n,
        |r, c| if r == n + a_dim + c { Rat::one() } else { Rat::zero() },
    )
}

/// Check that `sec` is an admissible section for the extension: its
/// columns lift the chosen basis of l = g/i^perp, its image is isotropic,
/// and its image is invariant under the semisimple part of D.
fn validate_section(ext: &QuadraticExtension, sec: &Matrix) -> Result<()> {
    let nn = ext.g.dim();
    let n = ext.pair.n();
    if sec.rows() != nn || sec.cols() != n {
        return Err(Error::usage(format!("section must be a {nn} x {n} matrix")));
    }
    let l_comp = ext.i_perp.std_complement();
    for i in 0..n {
        let col = sec.col_vec(i);
        let (p, _) = l_comp.project_along(&ext.i_perp, &col);
        let coords = l_comp.coordinates(&p).expect("quotient class");
        let ok = coords
            .iter()
            .enumerate()
            .all(|(j, x)| if j == i { x.is_one() } else { x.is_zero() });
        if !ok {
            return Err(Error::domain("section does not split the quotient map onto l"));
        }
    }
    let cols: Vec<Vec<Rat>> = (0..n).map(|i| sec.col_vec(i)).collect();
    let v = Subspace::span(nn, &cols);
    if !v.is_isotropic(&ext.g.gram) {
        return Err(Error::domain("section image is not isotropic"));
    }
    let ds = jordan_chevalley(&ext.d).s;
    if !v.is_invariant_under(&ds) {
        return Err(Error::domain(
            "section image is not invariant under the semisimple part of D",
        ));
    }
    Ok(())
}

/// Construct the default admissible section: solve for a projection onto
/// i^perp commuting with the semisimple part D_s (one always exists since
/// D_s is semisimple and i^perp is invariant), take its kernel as a
/// D_s-invariant complement, and shift each basis vector inside i to make
/// the complement isotropic. The shift is the unique correction in i whose
/// pairing against the complement halves the original Gram matrix, and it
/// preserves D_s-invariance because D_s is skewsymmetric.
pub fn invariant_isotropic_section(ext: &QuadraticExtension) -> Matrix {
    let nn = ext.g.dim();
    let n = ext.pair.n();
    let ds = jordan_chevalley(&ext.d).s;
    let bmat = Matrix::from_columns(&ext.i_perp.basis_vectors(), nn);
    let r = bmat.cols();

    // Unknown projection pi, flattened row-major.
    let mut sys = LinearSystem::new(nn * nn);
    // pi restricted to i^perp is the identity: pi B = B.
    for cidx in 0..r {
        for i in 0..nn {
            let mut co = vec![Rat::zero(); nn * nn];
            for j in 0..nn {
                co[i * nn + j] = bmat.at(j, cidx).clone();
            }
            sys.push(co, bmat.at(i, cidx).clone());
        }
    }
    // The image lies inside i^perp: f(pi x) = 0 for every functional f
    // vanishing on i^perp.
    for f in kernel_basis(&bmat.transpose()) {
        for j in 0..nn {
            let mut co = vec![Rat::zero(); nn * nn];
            for (i, fi) in f.iter().enumerate() {
                co[i * nn + j] = fi.clone();
            }
            sys.push(co, Rat::zero());
        }
    }
    // pi commutes with D_s.
    for i in 0..nn {
        for j in 0..nn {
            let mut co = vec![Rat::zero(); nn * nn];
            for k in 0..nn {
                co[i * nn + k] = &co[i * nn + k] + ds.at(k, j);
                co[k * nn + j] = &co[k * nn + j] - ds.at(i, k);
            }
            sys.push(co, Rat::zero());
        }
    }
    let x = sys.solve().expect("an invariant projection onto i^perp exists");
    let pi = Matrix::from_fn(nn, nn, |i, j| x[i * nn + j].clone());
    let w = kernel_basis(&pi);
    assert_eq!(w.len(), n, "invariant complement dimension");

    // Isotropize: v_a = w_a - phi(w_a) with phi(w_a) in i and
    // <phi(w_a), w_b> = 1/2 <w_a, w_b> for all b.
    let ib = ext.ideal.basis_vectors();
    let pmat = Matrix::from_fn(n, n, |b, q| gram_pairing(&ext.g.gram, &ib[q], &w[b]));
    let half = ratio(1, 2);
    let vcols: Vec<Vec<Rat>> = (0..n)
        .map(|a| {
            let rhs: Vec<Rat> =
                (0..n).map(|b| &half * &gram_pairing(&ext.g.gram, &w[a], &w[b])).collect();
            let coeffs = solve_linear(&pmat, &rhs)
                .expect("square system")
                .expect("i pairs perfectly with the complement");
            let mut v = w[a].clone();
            for (q, cq) in coeffs.iter().enumerate() {
                for t in 0..nn {
                    v[t] = &v[t] - &(cq * &ib[q][t]);
                }
            }
            v
        })
        .collect();

    // Rescale so the columns lift the chosen basis of l.
    let l_comp = ext.i_perp.std_complement();
    let ccols: Vec<Vec<Rat>> = vcols
        .iter()
        .map(|v| {
            let (p, _) = l_comp.project_along(&ext.i_perp, v);
            l_comp.coordinates(&p).expect("quotient class")
        })
        .collect();
    let cmat = Matrix::from_columns(&ccols, n);
    let cinv = cmat.inverse().expect("complement classes form a basis of l");
    let vmat = Matrix::from_columns(&vcols, nn);
    &vmat * &cinv
}

/// The frame a section induces: s(e_i), the transversal t(A_a) inside
/// V_a = (i ⊕ s(l))^perp, and the dual basis p*(Z_i) in i.
struct SectionFrame {
    s_cols: Vec<Vec<Rat>>,
    t_cols: Vec<Vec<Rat>>,
    pstar_cols: Vec<Vec<Rat>>,
}

fn section_frame(ext: &QuadraticExtension, sec: &Matrix) -> SectionFrame {
    let nn = ext.g.dim();
    let n = ext.pair.n();
    let m = ext.pair.a_dim();
    let s_cols: Vec<Vec<Rat>> = (0..n).map(|i| sec.col_vec(i)).collect();
    let ib = ext.ideal.basis_vectors();

    let mut span_vecs = ib.clone();
    span_vecs.extend(s_cols.iter().cloned());
    let is_span = Subspace::span(nn, &span_vecs);
    let va = is_span.orth_complement(&ext.g.gram);
    assert_eq!(va.dim(), m, "V_a has the module dimension");

    // t(A_a) is the V_a-component of the a-basis representative; for
    // vectors in i^perp the complement component lies back in i.
    let t_cols: Vec<Vec<Rat>> =
        ext.a_basis.iter().map(|w| va.project_along(&is_span, w).0).collect();

    // p*(Z_i) in i is dual to the section: <p*(Z_i), s(e_j)> = delta_ij.
    let pmat = Matrix::from_fn(n, n, |j, q| gram_pairing(&ext.g.gram, &ib[q], &s_cols[j]));
    let pinv = pmat.inverse().expect("i pairs perfectly with the section image");
    let pstar_cols: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let xcol = pinv.col_vec(i);
            let mut v = vec![Rat::zero(); nn];
            for (q, xq) in xcol.iter().enumerate() {
                for t in 0..nn {
                    v[t] = &v[t] + &(xq * &ib[q][t]);
                }
            }
            v
        })
        .collect();
    SectionFrame { s_cols, t_cols, pstar_cols }
}

/// Extract the quadratic cocycle of an extension relative to a section.
/// With `None` the default invariant isotropic section is constructed;
/// a supplied section is validated (domain error when not admissible).
/// The result is asserted to lie in Z^2_Q+ over the induced pair.
pub fn extract_cocycle(ext: &QuadraticExtension, section: Option<&Matrix>) -> Result<QuadCocycle> {
    let sec = match section {
        Some(s) => {
            validate_section(ext, s)?;
            s.clone()
        }
        None => {
            let s = invariant_isotropic_section(ext);
            validate_section(ext, &s).expect("constructed section must be admissible");
            s
        }
    };
    let nn = ext.g.dim();
    let n = ext.pair.n();
    let m = ext.pair.a_dim();
    let fr = section_frame(ext, &sec);

    let mut cols = fr.pstar_cols.clone();
    cols.extend(fr.t_cols.iter().cloned());
    cols.extend(fr.s_cols.iter().cloned());
    let frame = Matrix::from_columns(&cols, nn);
    let finv = frame.inverse().expect("extraction frame is a basis");

    let mut alpha = Cochain::a_valued_zero(2, m);
    let mut gamma = Cochain::real_zero(3);
    let mut delta = Cochain::a_valued_zero(1, m);
    let mut epsilon = Cochain::real_zero(2);
    let a_gram_inv = ext.pair.a_gram.inverse().expect("module metric is non-degenerate");

    for i in 0..n {
        let dsi = ext.d.apply(&fr.s_cols[i]);
        let rhs: Vec<Rat> =
            (0..m).map(|a| gram_pairing(&ext.g.gram, &fr.t_cols[a], &dsi)).collect();
        delta.add_term(&[i], a_gram_inv.apply(&rhs));
        for j in (i + 1)..n {
            epsilon.add_term(&[i, j], vec![gram_pairing(&ext.g.gram, &dsi, &fr.s_cols[j])]);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let br = ext.g.algebra.bracket(&fr.s_cols[i], &fr.s_cols[j]);
            for k in (j + 1)..n {
                gamma.add_term(&[i, j, k], vec![gram_pairing(&ext.g.gram, &br, &fr.s_cols[k])]);
            }
            // alpha coordinates: the class of [s e_i, s e_j] - s([e_i, e_j])
            // in i^perp/i over the t-basis.
            let lb = ext.pair.l.bracket_basis(i, j);
            let mut w = br.clone();
            for (k, lk) in lb.iter().enumerate() {
                for t in 0..nn {
                    w[t] = &w[t] - &(lk * &fr.s_cols[k][t]);
                }
            }
            let co = finv.apply(&w);
            assert!(
                co[n + m..].iter().all(Rat::is_zero),
                "bracket defect must lie in i^perp"
            );
            alpha.add_term(&[i, j], co[n..n + m].to_vec());
        }
    }

    let c = QuadCocycle::new(alpha, gamma, delta, epsilon)?;
    let rep = check_zq_plus(&ext.pair, &c)?;
    assert!(
        rep.ok(),
        "extracted cocycle must lie in Z^2_Q+: {}",
        rep.first_failure().unwrap().name
    );
    Ok(c)
}

/// The transform relating the cocycles extracted from two admissible
/// sections of the same extension: if c_k = extract(ext, s_k), then
/// c_1 = act(c_2, witness). Computed exactly from the change of frames,
/// which is always of the triangular equivalence shape.
pub fn section_change_witness(
    ext: &QuadraticExtension,
    s1: &Matrix,
    s2: &Matrix,
) -> Result<TransformPair> {
    validate_section(ext, s1)?;
    validate_section(ext, s2)?;
    let nn = ext.g.dim();
    let n = ext.pair.n();
    let m = ext.pair.a_dim();
    let frame_matrix = |fr: &SectionFrame| {
        let mut cols = fr.pstar_cols.clone();
        cols.extend(fr.t_cols.iter().cloned());
        cols.extend(fr.s_cols.iter().cloned());
        Matrix::from_columns(&cols, nn)
    };
    let phi1 = frame_matrix(&section_frame(ext, s1));
    let phi2 = frame_matrix(&section_frame(ext, s2));
    let big = &phi2.inverse().expect("frame is a basis") * &phi1;

    let tau_mat = Matrix::from_fn(m, n, |a, i| big.at(n + a, n + m + i).clone());
    let tau_star = &tau_mat.transpose() * &ext.pair.a_gram;
    let zl = Matrix::from_fn(n, n, |i, j| big.at(i, n + m + j).clone());
    let sigma_bar = &zl + &(&tau_star * &tau_mat).scale(&ratio(1, 2));

    // The change of frames must have the equivalence shape: unipotent,
    // with (Z,A)-block -tau* and skew sigma-bar.
    let mut expect = Matrix::identity(nn);
    expect.put_block(0, n, &-&tau_star);
    expect.put_block(0, n + m, &zl);
    expect.put_block(n, n + m, &tau_mat);
    assert_eq!(big, expect, "section change must be a triangular equivalence");
    assert!(
        (&sigma_bar + &sigma_bar.transpose()).is_zero(),
        "sigma part of a section change must be alternating"
    );

    let mut tau = Cochain::a_valued_zero(1, m);
    for i in 0..n {
        tau.add_term(&[i], tau_mat.col_vec(i));
    }
    let mut sigma = Cochain::real_zero(2);
    for i in 0..n {
        for j in (i + 1)..n {
            sigma.add_term(&[i, j], vec![sigma_bar.at(j, i).clone()]);
        }
    }
    TransformPair::new(tau, sigma)
}

// ---- Equivalence and isomorphism ----

/// Witness for an equivalence of cocycles over one pair.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub transform: TransformPair,
}

/// Witness for an isomorphism across pairs: a bijective morphism of pairs
/// plus a transform over the source pair.
#[derive(Clone, Debug)]
pub struct IsomorphismWitness {
    pub morphism: MorphismOfPairs,
    pub transform: TransformPair,
}

/// The triangular matrix F of a transform (tau, sigma) in model
/// coordinates: identity blocks on the diagonal, -tau* and
/// sigma-bar - 1/2 tau* tau in the first block row, tau in the (A, L)
/// block.
fn equivalence_matrix(a_gram: &Matrix, n: usize, t: &TransformPair) -> Matrix {
    let m = a_gram.rows();
    let tau_mat = Matrix::from_fn(m, n, |a, i| t.tau.get(&[i])[a].clone());
    let tau_star = &tau_mat.transpose() * a_gram;
    let sigma_bar = Matrix::from_fn(n, n, |i, j| t.sigma.get(&[j, i])[0].clone());
    let mut f = Matrix::identity(2 * n + m);
    f.put_block(0, n, &-&tau_star);
    f.put_block(0, n + m, &(&sigma_bar - &(&tau_star * &tau_mat).scale(&ratio(1, 2))));
    f.put_block(n, n + m, &tau_mat);
    f
}

/// Decide whether the witness transform carries c2 to c1, i.e. whether
/// c1 = act(c2, transform). On a positive answer the triangular matrix F
/// is built and cross-checked: it must be an isometry, a Lie isomorphism
/// of the standard models, intertwine the two derivations, and fix l*.
pub fn verify_equivalence(
    pair: &PairLDA,
    c1: &QuadCocycle,
    c2: &QuadCocycle,
    w: &EquivalenceWitness,
) -> Result<bool> {
    let z1 = check_zq_plus(pair, c1)?;
    let z2 = check_zq_plus(pair, c2)?;
    if !z1.ok() || !z2.ok() {
        return Err(Error::domain("verify_equivalence: cocycles must lie in Z^2_Q+"));
    }
    w.transform.validate_over(pair)?;
    if !check_cq(pair, &w.transform)? {
        return Err(Error::domain("verify_equivalence: witness transform is not in C^1_Q"));
    }
    let acted = act(pair, c2, &w.transform)?;
    let result = acted == *c1;
    if result {
        let m1 = build_standard_model(pair, c1)?;
        let m2 = build_standard_model(pair, c2)?;
        let f = equivalence_matrix(&pair.a_gram, pair.n(), &w.transform);
        assert!(
            is_isometry(&m1.model.gram, &m2.model.gram, &f),
            "equivalence matrix must be an isometry"
        );
        assert!(
            is_homomorphism(&m1.model.algebra, &m2.model.algebra, &f),
            "equivalence matrix must be a Lie isomorphism"
        );
        assert_eq!(
            &f * &m1.derivation,
            &m2.derivation * &f,
            "equivalence matrix must intertwine the derivations"
        );
        let n = pair.n();
        let lstar = Subspace::span(
            m1.model.dim(),
            &(0..n).map(|i| m1.model.algebra.basis_vector(i)).collect::<Vec<_>>(),
        );
        assert!(lstar.image(&f).is_subspace_of(&lstar), "equivalence matrix must fix l*");
    }
    Ok(result)
}

/// Decide whether the witness (morphism, transform) exhibits c1 as the
/// image of c2: c1 = act(pullback(c2), transform). Both cocycles must be
/// balanced and the morphism bijective (domain errors otherwise). On a
/// positive answer the full isomorphism phi after F is cross-checked on
/// the standard models.
pub fn verify_isomorphism(
    p1: &PairLDA,
    c1: &QuadCocycle,
    p2: &PairLDA,
    c2: &QuadCocycle,
    w: &IsomorphismWitness,
) -> Result<bool> {
    let b1 = check_balanced(p1, c1)?;
    let b2 = check_balanced(p2, c2)?;
    if !b1.ok() || !b2.ok() {
        return Err(Error::domain("verify_isomorphism: cocycles must be balanced"));
    }
    let mr = check_morphism(p1, p2, &w.morphism)?;
    if let Some(f) = mr.first_failure() {
        return Err(Error::domain(format!("verify_isomorphism: invalid morphism: {}", f.name)));
    }
    if p1.n() != p2.n()
        || p1.a_dim() != p2.a_dim()
        || w.morphism.s.inverse().is_none()
        || w.morphism.u.inverse().is_none()
    {
        return Err(Error::domain("verify_isomorphism: witness morphism is not bijective"));
    }
    w.transform.validate_over(p1)?;
    if !check_cq(p1, &w.transform)? {
        return Err(Error::domain("verify_isomorphism: witness transform is not in C^1_Q"));
    }
    let pulled = pullback(p1, p2, &w.morphism, c2)?;
    let acted = act(p1, &pulled, &w.transform)?;
    let result = acted == *c1;
    if result {
        let m1 = build_standard_model(p1, c1)?;
        let m2 = build_standard_model(p2, c2)?;
        let f = equivalence_matrix(&p1.a_gram, p1.n(), &w.transform);
        let st_inv = w.morphism.s.transpose().inverse().unwrap();
        let u_inv = w.morphism.u.inverse().unwrap();
        let phi = Matrix::block_diag(&[&st_inv, &u_inv, &w.morphism.s]);
        let full = &phi * &f;
        assert!(
            is_isometry(&m1.model.gram, &m2.model.gram, &full),
            "isomorphism matrix must be an isometry"
        );
        assert!(
            is_homomorphism(&m1.model.algebra, &m2.model.algebra, &full),
            "isomorphism matrix must be a Lie isomorphism"
        );
        assert_eq!(
            &full * &m1.derivation,
            &m2.derivation * &full,
            "isomorphism matrix must intertwine the derivations"
        );
    }
    Ok(result)
}

// ---- Decompositions ----

/// Check that (s1, s2) is an orthogonal decomposition of (g, D) into
/// non-degenerate D-invariant ideals spanning g.
pub fn verify_decomposition(
    m: &MetricLieAlgebra,
    d: &Matrix,
    s1: &Subspace,
    s2: &Subspace,
) -> bool {
    let nn = m.dim();
    if s1.ambient() != nn || s2.ambient() != nn {
        return false;
    }
    if s1.dim() + s2.dim() != nn || s1.sum(s2).dim() != nn {
        return false;
    }
    for v in s1.basis_vectors() {
        for w in s2.basis_vectors() {
            if !m.pairing(&v, &w).is_zero() {
                return false;
            }
        }
    }
    if !is_ideal(&m.algebra, s1) || !is_ideal(&m.algebra, s2) {
        return false;
    }
    if !bracket_subspace(&m.algebra, s1, s2).is_zero() {
        return false;
    }
    if !s1.is_invariant_under(d) || !s2.is_invariant_under(d) {
        return false;
    }
    s1.restriction_nondegenerate(&m.gram) && s2.restriction_nondegenerate(&m.gram)
}
