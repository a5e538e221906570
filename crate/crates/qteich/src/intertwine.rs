//! Intertwiners between local representations.
//!
//! Two kinds of intertwiners are solved for numerically:
//!
//! * **Same-triangulation** intertwiners between two representations with
//!   equal classification data ([`solve_same_intertwiner`]).  These factor
//!   as a tensor permutation times one invertible `N x N` block per face;
//!   the per-side scalar gauges are `N`-th roots of unity that are snapped
//!   exactly and balanced by an integer flow over the face adjacency.
//! * **Flip** intertwiners realizing the quantum coordinate change of a
//!   diagonal exchange ([`flip_step`]).  The flip map sends the post-flip
//!   generators to rational expressions in the pre-flip ones; its matrix
//!   images act on the two faces of the flipped square only, so the solve
//!   happens on an `N^2`-dimensional local block and is embedded back.
//!
//! Composites along flip paths, closures of cycles back to the starting
//! triangulation, and eigenvalue-based invariants of the resulting operators
//! (which depend only on the mapping class, not the path realizing it) are
//! built on top of these two solvers.

use std::collections::VecDeque;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qalgebra::{format_complex, QParams};
use crate::rep::{FaceData, LocalOperator, LocalRep};
use crate::surface::Triangulation;
use crate::transport;

/// Residual tolerance for verifying a solved intertwiner against all
/// generator pairs.
const VERIFY_TOL: f64 = 1e-8;

/// Tolerance for snapping a phase that must be an exact root of unity.
const SNAP_TOL: f64 = 1e-6;

/// Singular-value gate for the null-space solves: smallest singular value
/// must fall below this...
const NULL_MIN_TOL: f64 = 1e-8;

/// ...and the next one must stay above this, so the null space is
/// unambiguously one-dimensional.
const NULL_GAP_TOL: f64 = 1e-6;

/// Tolerance on classification distance when deciding whether two
/// representations can be intertwined at all.
const CLASS_MATCH_TOL: f64 = 1e-8;

/// Tolerance passed to the classification extractor itself.
const CLASSIFY_TOL: f64 = 1e-9;

/// A solved intertwiner `L` between two representations on the same
/// triangulation: `rho_source(X_e) . L = L . rho_target(X_e)` for every
/// edge generator.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    /// The matrix `L`, normalized projectively (unit operator norm, leading
    /// entry positive real).
    pub matrix: CMat,
    /// Representation acting on the left of `L`.
    pub source: LocalRep,
    /// Representation acting on the right of `L`.
    pub target: LocalRep,
    /// Worst relative residual of the intertwining relations over all edges.
    pub residual: f64,
}

/// One solved diagonal exchange: the intertwiner `L` satisfies
/// `rho(Phi_d(X'_e)) . L = L . rho''(X'_e)` for every post-flip edge
/// generator, where `rho` is the pre-flip representation, `Phi_d` the flip
/// substitution, and `rho''` the canonical post-flip representation carried
/// in [`FlipStep::target`].
#[derive(Debug, Clone)]
pub struct FlipStep {
    /// The flipped edge.
    pub edge: usize,
    /// The two faces of the flipped square.
    pub faces: (usize, usize),
    /// Global labels of the square's cyclic sides `[p, q, r, s]`.
    pub roles: [usize; 4],
    /// Pre-flip representation.
    pub source: LocalRep,
    /// Canonical post-flip representation.
    pub target: LocalRep,
    /// The intertwiner on the full tensor space.
    pub matrix: CMat,
    /// Its restriction to the two-face block actually being mixed.
    pub local_matrix: CMat,
    /// Worst relative residual over the five local generator relations.
    pub residual: f64,
}

/// A composed chain of flip steps.  `composite = L_1 L_2 ... L_k` intertwines
/// the start representation (acting through the pulled-back flip images)
/// with [`PathResult::final_rep`].
#[derive(Debug, Clone)]
pub struct PathResult {
    /// The individual solved steps, in path order.
    pub steps: Vec<FlipStep>,
    /// Ordered product of the step matrices.
    pub composite: CMat,
    /// Canonical representation at the end of the path.
    pub final_rep: LocalRep,
}

/// A flip cycle closed back to the starting representation, with the scalar
/// the total operator acts by.
#[derive(Debug, Clone)]
pub struct CycleReport {
    /// Elementary intertwiner matrices in path order, followed by the
    /// same-triangulation closing matrix as the last entry (for an empty
    /// path the closing matrix is the only entry).
    pub step_matrices: Vec<CMat>,
    /// Ordered product of the step matrices; scalar for a trivial mapping
    /// class.
    pub total: CMat,
    /// Mean diagonal of `total`.
    pub scalar: Complex64,
    /// Max-norm deviation of `total / scalar` from the identity.
    pub residual: f64,
}

/// Projectively meaningful spectral data of a mapping-class operator.
///
/// The operator itself is only defined up to a global scalar, so everything
/// reported here is invariant under rescaling: the trace is normalized by
/// the determinant, and eigenvalues are reported as ratios.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    /// Dimension of the operator.
    pub dim: usize,
    /// Raw trace (scale-dependent, for reference only).
    pub trace: Complex64,
    /// `|tr L| / |det L|^(1/dim)` - scale-free trace modulus.
    pub scale_free_trace: f64,
    /// `tr L / det(L)^(1/dim)` with the principal branch of the root; only
    /// defined up to a `dim`-th root of unity.
    pub det_normalized_trace: Complex64,
    /// Argument of [`Self::det_normalized_trace`] reduced to the sector
    /// `[0, 2*pi/dim)`, which removes the branch ambiguity.
    pub phase_sector: f64,
    /// Eigenvalues divided by a reference eigenvalue (largest modulus,
    /// ties broken by argument), sorted by `(modulus, argument)`.
    pub eigenvalue_ratios: Vec<Complex64>,
}

// ---------------------------------------------------------------------------
// Same-triangulation intertwiners
// ---------------------------------------------------------------------------

/// Solve for the intertwiner between two representations of the same edge
/// algebra: `rho_source(X_e) . L = L . rho_target(X_e)` for all edges.
///
/// The triangulations must agree as labeled complexes (faces may be permuted
/// and rotated) and the classifications (edge weights, total load) must
/// match to `1e-8`; otherwise [`Error::NotIsomorphic`] is returned.  The
/// side-by-side scalar ratios are then exact `N`-th roots of unity up to a
/// global per-face gauge; they are snapped ([`Error::PhaseSnap`] if snapping
/// fails) and balanced by a mod-`N` flow over the face adjacency
/// ([`Error::InconsistentLoads`] if the loads cannot be reconciled), after
/// which one `N x N` block per face is recovered from a null-space solve.
pub fn solve_same_intertwiner(source: &LocalRep, target: &LocalRep) -> Result<Intertwiner> {
    let align = source
        .triangulation()
        .labeled_isomorphism(target.triangulation())
        .ok_or_else(|| {
            Error::NotIsomorphic("the triangulations do not match as labeled complexes".into())
        })?;
    solve_same_aligned(source, target, &align)
}

/// [`solve_same_intertwiner`] with an explicitly chosen face alignment.
///
/// When the labeled triangulation has automorphisms (for example both torus
/// faces carry the same edge labels) several alignments are valid and lead
/// to genuinely different intertwiners; cycle closures must use the
/// alignment induced by the flip path rather than an arbitrary one.
pub fn solve_same_aligned(
    source: &LocalRep,
    target: &LocalRep,
    align: &crate::surface::Alignment,
) -> Result<Intertwiner> {
    let params = source.params();
    if params.n() != target.params().n() || params.c() != target.params().c() {
        return Err(Error::Params(
            "cannot intertwine representations with different root-of-unity parameters".into(),
        ));
    }
    let t1 = source.triangulation();
    let t2 = target.triangulation();
    let n = params.n();
    let m = t1.faces().len();
    let nn = n as i64;

    // The alignment may come from the caller, so check it really is a
    // labeled isomorphism before trusting it.
    if align.perm.len() != m || align.rot.len() != m || t2.faces().len() != m {
        return Err(Error::NotIsomorphic("alignment does not cover the faces".into()));
    }
    let mut seen = vec![false; m];
    for j in 0..m {
        let p = align.perm[j];
        if p >= m || seen[p] {
            return Err(Error::NotIsomorphic("alignment is not a face bijection".into()));
        }
        seen[p] = true;
        for s in 0..3 {
            if t1.faces()[j][s] != t2.faces()[p][(s + align.rot[j]) % 3] {
                return Err(Error::NotIsomorphic(format!(
                    "alignment mismatches the labels of face {j}"
                )));
            }
        }
    }

    let c1 = source.classify(CLASSIFY_TOL)?;
    let c2 = target.classify(CLASSIFY_TOL)?;
    let dist = c1.distance(&c2);
    if dist > CLASS_MATCH_TOL {
        return Err(Error::NotIsomorphic(format!(
            "classifications differ by {dist:.3e} (tolerance {CLASS_MATCH_TOL:.0e})"
        )));
    }

    // Principal N-th root of the side-weight ratio, per face and slot.  The
    // true per-side gauge is kappa_hat * omega^t for an integer t still to
    // be determined.
    let w1: Vec<[Complex64; 3]> = source.face_data().iter().map(|f| f.weights(n)).collect();
    let w2: Vec<[Complex64; 3]> = target.face_data().iter().map(|f| f.weights(n)).collect();
    let mut kappa_hat = vec![[Complex64::new(1.0, 0.0); 3]; m];
    for j in 0..m {
        for s in 0..3 {
            let ratio = w2[align.perm[j]][(s + align.rot[j]) % 3] / w1[j][s];
            kappa_hat[j][s] = params.principal_nth_root(ratio);
        }
    }

    // Face defect: the product of the three true gauges must carry the load
    // ratio of the matched faces, so omega^(sum of t over the face) is the
    // deviation of the principal roots from that ratio.
    let mut face_defect = vec![0i64; m];
    for j in 0..m {
        let delta = target.face_data()[align.perm[j]].load()
            / (source.face_data()[j].load()
                * kappa_hat[j][0]
                * kappa_hat[j][1]
                * kappa_hat[j][2]);
        let (g, err) = params.nearest_omega_exponent(delta);
        if err > SNAP_TOL {
            return Err(Error::PhaseSnap {
                value: format_complex(delta),
                tol: SNAP_TOL,
                context: format!("load defect of face {j}"),
            });
        }
        face_defect[j] = g;
    }

    // Edge target: the gauges over the sides of one edge must multiply to 1,
    // so omega^(sum of t over the edge) is the inverse of the principal-root
    // product there.
    let mut edge_target = vec![0i64; t1.n_edges()];
    for e in 0..t1.n_edges() {
        let mut prod = Complex64::new(1.0, 0.0);
        for &(j, s) in t1.sides(e) {
            prod *= kappa_hat[j][s];
        }
        let (g, err) = params.nearest_omega_exponent(prod.inv());
        if err > SNAP_TOL {
            return Err(Error::PhaseSnap {
                value: format_complex(prod.inv()),
                tol: SNAP_TOL,
                context: format!("gauge ratio of edge {e}"),
            });
        }
        edge_target[e] = g;
    }

    let texp = solve_side_exponents(t1, &edge_target, &face_defect, nn)?;

    // One Sylvester solve per face: the gauged source triple against the
    // aligned target triple.  Triangle triples are irreducible, so each
    // block is unique up to scale and the null-space gate enforces that.
    let mut blocks = Vec::with_capacity(m);
    for j in 0..m {
        let pairs: Vec<(CMat, CMat)> = (0..3)
            .map(|s| {
                let kappa = kappa_hat[j][s] * params.omega_pow(texp[j][s]);
                (
                    linalg::scale(&source.side_matrix(j, s), kappa),
                    target.side_matrix(align.perm[j], (s + align.rot[j]) % 3),
                )
            })
            .collect();
        let stack = linalg::sylvester_stack(&pairs);
        let v = linalg::null_vector_gated(
            &stack,
            NULL_MIN_TOL,
            NULL_GAP_TOL,
            &format!("face {j} block of a same-triangulation intertwiner"),
        )?;
        blocks.push(linalg::normalize_projective(&linalg::unvec_col_major(&v, n))?);
    }

    // Assemble: per-face blocks times the tensor permutation that matches
    // the face orderings.
    let dim = source.dim();
    let mut l = linalg::tensor_permutation(&align.perm, m, n);
    for (j, block) in blocks.iter().enumerate() {
        l = linalg::mul(&linalg::embed_block(block, &[j], m, n), &l);
    }
    debug_assert_eq!(l.nrows(), dim);

    let mut residual = 0.0f64;
    for e in 0..t1.n_edges() {
        let lhs = linalg::mul(&source.generator(e), &l);
        let rhs = linalg::mul(&l, &target.generator(e));
        residual = residual.max(linalg::rel_dist(&lhs, &rhs));
    }
    if residual > VERIFY_TOL {
        return Err(Error::InconsistentLoads(format!(
            "solved gauge fails to intertwine: residual {residual:.3e} (tolerance {VERIFY_TOL:.0e})"
        )));
    }

    Ok(Intertwiner {
        matrix: linalg::normalize_projective(&l)?,
        source: source.clone(),
        target: target.clone(),
        residual,
    })
}

/// Solve the mod-`N` side-exponent system: for every edge the exponents of
/// its sides must sum to `edge_target[e]`, and within every face the three
/// exponents must sum to `face_defect[j]`.
///
/// A spanning forest of the face adjacency (through interior, non-self-folded
/// edges) is processed children first: every face fixes its non-tree sides
/// directly and leaves the side towards its parent to absorb the face
/// constraint.  Root faces have no free side left, so their constraint is a
/// genuine consistency check.
fn solve_side_exponents(
    t: &Triangulation,
    edge_target: &[i64],
    face_defect: &[i64],
    n: i64,
) -> Result<Vec<[i64; 3]>> {
    let m = t.faces().len();
    let mut texp: Vec<[Option<i64>; 3]> = vec![[None; 3]; m];

    // Breadth-first forest over face adjacency.
    let mut visited = vec![false; m];
    let mut parent_slot: Vec<Option<usize>> = vec![None; m];
    let mut order = Vec::with_capacity(m);
    for start in 0..m {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(j) = queue.pop_front() {
            order.push(j);
            for s in 0..3 {
                let e = t.faces()[j][s];
                let occ = t.sides(e);
                if occ.len() != 2 || occ[0].0 == occ[1].0 {
                    continue;
                }
                let (k, slot_k) = if occ[0] == (j, s) { occ[1] } else { occ[0] };
                if !visited[k] {
                    visited[k] = true;
                    parent_slot[k] = Some(slot_k);
                    queue.push_back(k);
                }
            }
        }
    }

    for &j in order.iter().rev() {
        let deferred = parent_slot[j];
        for s in 0..3 {
            if deferred == Some(s) || texp[j][s].is_some() {
                continue;
            }
            let e = t.faces()[j][s];
            let occ = t.sides(e);
            if occ.len() == 1 {
                texp[j][s] = Some(edge_target[e].rem_euclid(n));
            } else if occ[0].0 == occ[1].0 {
                // Self-folded: both sides sit in this face; fix the pair now.
                let (sa, sb) = (occ[0].1, occ[1].1);
                if texp[j][sa].is_none() && texp[j][sb].is_none() {
                    texp[j][sa] = Some(edge_target[e].rem_euclid(n));
                    texp[j][sb] = Some(0);
                }
            } else {
                let (k, u) = if occ[0] == (j, s) { occ[1] } else { occ[0] };
                texp[j][s] = Some(match texp[k][u] {
                    // Partner already fixed: balance the edge constraint.
                    Some(tp) => (edge_target[e] - tp).rem_euclid(n),
                    // Partner still free: make a free choice, the partner
                    // face (processed later) balances it.
                    None => 0,
                });
            }
        }
        match deferred {
            Some(ds) => {
                let others: i64 = (0..3).filter(|&s| s != ds).map(|s| texp[j][s].unwrap()).sum();
                texp[j][ds] = Some((face_defect[j] - others).rem_euclid(n));
            }
            None => {
                let total: i64 = (0..3).map(|s| texp[j][s].unwrap()).sum();
                if (total - face_defect[j]).rem_euclid(n) != 0 {
                    return Err(Error::InconsistentLoads(format!(
                        "face {j}: side gauges sum to omega^{} but the load ratio requires omega^{}",
                        total.rem_euclid(n),
                        face_defect[j].rem_euclid(n)
                    )));
                }
            }
        }
    }

    Ok(texp
        .into_iter()
        .map(|f| [f[0].unwrap(), f[1].unwrap(), f[2].unwrap()])
        .collect())
}

// ---------------------------------------------------------------------------
// Flip intertwiners
// ---------------------------------------------------------------------------

/// Everything the flip solvers need about the local two-face square: the
/// matrix images of the five post-flip generators under the flip
/// substitution, and the canonical post-flip representation of the square.
struct FlipLocal {
    /// Faces of the square in the ambient triangulation.
    a: usize,
    b: usize,
    /// Global labels of the cyclic sides `[p, q, r, s]`.
    roles: [usize; 4],
    /// Images of the post-flip local generators `[d, p, q, r, s]` under the
    /// flip substitution, as matrices on the `N^2`-dimensional square block.
    images: [CMat; 5],
    /// The split square after the flip, with local edge labels `0..5`.
    t_sq_flip: Triangulation,
    /// Canonical post-flip representation on the local square, face 0 being
    /// the ambient face `a` and face 1 the ambient face `b`.
    target: LocalRep,
}

/// Build the local flip data at edge `d` of `r`'s triangulation.
///
/// The square is split off with its own edge labels `0..5` (`0` the
/// diagonal, `1..5` the sides `p, q, r, s`) but keeps the ambient slot
/// positions, so the ambient face data transfers verbatim.
fn flip_local(r: &LocalRep, d: usize) -> Result<FlipLocal> {
    let t = r.triangulation();
    let params = r.params();
    let n = params.n();
    let (a, alpha, b, beta, roles) = t.flip_square(d)?;

    let mut lf0 = [0usize; 3];
    let mut lf1 = [0usize; 3];
    lf0[alpha] = 0;
    lf0[(alpha + 1) % 3] = 1;
    lf0[(alpha + 2) % 3] = 2;
    lf1[beta] = 0;
    lf1[(beta + 1) % 3] = 3;
    lf1[(beta + 2) % 3] = 4;
    let t_sq = Triangulation::from_faces(vec![lf0, lf1])?;

    let face_a = r.face_data()[a].clone();
    let face_b = r.face_data()[b].clone();
    let wa = face_a.weights(n);
    let wb = face_b.weights(n);
    let x_loc = vec![
        wa[alpha] * wb[beta],
        wa[(alpha + 1) % 3],
        wa[(alpha + 2) % 3],
        wb[(beta + 1) % 3],
        wb[(beta + 2) % 3],
    ];
    let h_loc = face_a.load() * face_b.load();

    // Transported weights; the genericity gate for x_d = -1 lives inside.
    let x_flip = transport::flip_weights(&t_sq, &x_loc, 0).map_err(|e| match e {
        Error::SingularWeight { value, tol, .. } => Error::SingularWeight { edge: d, value, tol },
        other => other,
    })?;
    let t_sq_flip = t_sq.flip(0)?;
    let dd = n * n;
    let target = LocalRep::from_edge_weights(&t_sq_flip, params, &x_flip, h_loc, dd)?;

    // Flip substitution on the square block: the diagonal inverts, the sides
    // p, r gain the left factor (1 + q X_d^{-1})^{-1} and q, s the left
    // factor (1 + q X_d).
    let r_loc = LocalRep::from_face_data(&t_sq, params, vec![face_a, face_b], dd)?;
    let xd = r_loc.generator(0);
    let xd_inv = linalg::inverse(&xd, "diagonal generator of a flip square")?;
    let q1 = params.q_pow(1);
    let f_plus = linalg::add(&linalg::eye(dd), &linalg::scale(&xd, q1));
    let f_minus_base = linalg::add(&linalg::eye(dd), &linalg::scale(&xd_inv, q1));
    let f_minus = match linalg::inverse(&f_minus_base, "flip factor") {
        Ok(inv) => inv,
        Err(_) => {
            // Report which eigenvalue of the factor collapsed; these are
            // 1 + q^(2t+1) y for the N values of the diagonal weight root y.
            let eigs = linalg::eigenvalues(&f_minus_base)?;
            let worst = eigs
                .iter()
                .copied()
                .min_by(|u, v| u.norm().total_cmp(&v.norm()))
                .unwrap_or_default();
            return Err(Error::Degenerate(format!(
                "flip at edge {d}: factor 1 + q X_d^(-1) has a vanishing eigenvalue {}",
                format_complex(worst)
            )));
        }
    };
    let images = [
        xd_inv,
        linalg::mul(&f_minus, &r_loc.generator(1)),
        linalg::mul(&f_plus, &r_loc.generator(2)),
        linalg::mul(&f_minus, &r_loc.generator(3)),
        linalg::mul(&f_plus, &r_loc.generator(4)),
    ];

    Ok(FlipLocal { a, b, roles, images, t_sq_flip, target })
}

/// Matrix images of all post-flip edge generators under the flip
/// substitution at edge `d`, evaluated in the representation `r`.
///
/// Returns the flipped triangulation together with one full-space matrix
/// per post-flip edge.  Generators of edges not meeting the flipped square
/// are unchanged; generators with sides on the square pick up the local
/// image of the corresponding role, including the corner coefficient
/// `q^{-1}` when the flip makes an edge self-folded.
pub fn flip_generator_images(r: &LocalRep, d: usize) -> Result<(Triangulation, Vec<CMat>)> {
    let loc = flip_local(r, d)?;
    let t = r.triangulation();
    let t_flip = t.flip(d)?;
    let m = t.faces().len();
    let n = r.params().n();

    let mut images = Vec::with_capacity(t_flip.n_edges());
    for e in 0..t_flip.n_edges() {
        if e == d {
            images.push(linalg::embed_block(&loc.images[0], &[loc.a, loc.b], m, n));
            continue;
        }
        // Post-flip faces are [d, q, r] at `a` and [d, s, p] at `b`; map each
        // side on the square to its local role image, keep outside sides as
        // plain side matrices.
        let mut factors: Vec<LocalOperator> = Vec::new();
        let mut on_square = false;
        for &(f, s) in t_flip.sides(e) {
            if f == loc.a || f == loc.b {
                on_square = true;
                let role = match (f == loc.a, s) {
                    (true, 1) => 2,  // q
                    (true, 2) => 3,  // r
                    (false, 1) => 4, // s
                    (false, 2) => 1, // p
                    _ => unreachable!("slot 0 of a flipped face is the diagonal"),
                };
                factors.push(LocalOperator {
                    sites: vec![loc.a, loc.b],
                    block: loc.images[role].clone(),
                });
            } else {
                factors.push(LocalOperator { sites: vec![f], block: r.side_matrix(f, s) });
            }
        }
        if !on_square {
            images.push(r.generator_local(e).to_full(m, n));
            continue;
        }
        let occ = t_flip.sides(e);
        let mut op = factors[0].clone();
        for extra in &factors[1..] {
            op = op.mul(extra, n);
        }
        if occ.len() == 2 && occ[0].0 == occ[1].0 {
            // The edge became self-folded: the fused generator carries the
            // corner coefficient.
            op = op.scale(r.params().q_pow(-1));
        }
        images.push(op.to_full(m, n));
    }
    Ok((t_flip, images))
}

/// Solve the flip at edge `d` against the canonical post-flip representation.
///
/// The five-generator intertwining system is solved on the `N^2`-dimensional
/// square block (the null-space gate enforces a one-dimensional solution
/// space) and embedded into the full tensor space; generators away from the
/// square commute with the embedding, so the local residual controls the
/// global one.
pub fn flip_step(r: &LocalRep, d: usize) -> Result<FlipStep> {
    let loc = flip_local(r, d)?;
    let params = r.params();
    let n = params.n();
    let m = r.triangulation().faces().len();

    let pairs: Vec<(CMat, CMat)> =
        (0..5).map(|i| (loc.images[i].clone(), loc.target.generator(i))).collect();
    let stack = linalg::sylvester_stack(&pairs);
    let v = linalg::null_vector_gated(
        &stack,
        NULL_MIN_TOL,
        NULL_GAP_TOL,
        &format!("flip intertwiner at edge {d}"),
    )?;
    let local_matrix = linalg::normalize_projective(&linalg::unvec_col_major(&v, n * n))?;

    let mut residual = 0.0f64;
    for (lhs, rhs) in &pairs {
        residual = residual.max(linalg::rel_dist(
            &linalg::mul(lhs, &local_matrix),
            &linalg::mul(&local_matrix, rhs),
        ));
    }
    if residual > VERIFY_TOL {
        return Err(Error::Rep(format!(
            "flip intertwiner at edge {d} fails to intertwine: residual {residual:.3e}"
        )));
    }

    let t_flip = r.triangulation().flip(d)?;
    let mut faces = r.face_data().to_vec();
    faces[loc.a] = loc.target.face_data()[0].clone();
    faces[loc.b] = loc.target.face_data()[1].clone();
    let target = LocalRep::from_face_data(&t_flip, params, faces, r.dim())?;
    let matrix = linalg::embed_block(&local_matrix, &[loc.a, loc.b], m, n);

    Ok(FlipStep {
        edge: d,
        faces: (loc.a, loc.b),
        roles: loc.roles,
        source: r.clone(),
        target,
        matrix,
        local_matrix,
        residual,
    })
}

/// Relative agreement of two face data triples, used to decide whether a
/// chosen flip target matches the source verbatim outside the square.
fn face_data_close(a: &FaceData, b: &FaceData) -> bool {
    (0..3).all(|s| (a.y[s] - b.y[s]).norm() <= 1e-12 * a.y[s].norm().max(1.0))
}

/// Solve the flip at edge `d` against a *chosen* post-flip representation
/// `target`, not necessarily the canonical one.
///
/// When the target's face data agrees with the source verbatim outside the
/// flipped square (the situation of a flip-back or a closed cycle), the
/// square system is solved directly against the target's own side matrices;
/// this keeps the result in the coherent family even on surfaces whose local
/// representations are reducible.  Otherwise the canonical step is composed
/// with a same-triangulation intertwiner.  Either way the result is verified
/// against the full flip images, so the returned residual is a genuine
/// end-to-end bound.
pub fn solve_flip_intertwiner(r: &LocalRep, target: &LocalRep, d: usize) -> Result<Intertwiner> {
    let loc = flip_local(r, d)?;
    let params = r.params();
    let n = params.n();
    let m = r.triangulation().faces().len();
    let t_flip = r.triangulation().flip(d)?;
    if t_flip.labeled_isomorphism(target.triangulation()).is_none() {
        return Err(Error::NotIsomorphic(
            "target representation does not live on the flipped triangulation".into(),
        ));
    }

    // The target must classify to the transported weights with the same
    // total load; otherwise no intertwiner exists.
    let c_r = r.classify(CLASSIFY_TOL)?;
    let expected = crate::rep::Classification {
        x: transport::flip_weights(r.triangulation(), &c_r.x, d)?,
        h: c_r.h,
    };
    let c_t = target.classify(CLASSIFY_TOL)?;
    let dist = expected.distance(&c_t);
    if dist > CLASS_MATCH_TOL {
        return Err(Error::NotIsomorphic(format!(
            "target classification is off the transported one by {dist:.3e}"
        )));
    }

    let direct = target.triangulation().faces() == t_flip.faces()
        && (0..m)
            .filter(|&j| j != loc.a && j != loc.b)
            .all(|j| face_data_close(&r.face_data()[j], &target.face_data()[j]));

    let matrix = if direct {
        // Stack the five local relations against the target's own square
        // block; the split square is a polygon, so its local representation
        // is irreducible and the solution ray is unique.
        let target_loc = LocalRep::from_face_data(
            &loc.t_sq_flip,
            params,
            vec![target.face_data()[loc.a].clone(), target.face_data()[loc.b].clone()],
            n * n,
        )?;
        let pairs: Vec<(CMat, CMat)> =
            (0..5).map(|i| (loc.images[i].clone(), target_loc.generator(i))).collect();
        let stack = linalg::sylvester_stack(&pairs);
        let v = linalg::null_vector_gated(
            &stack,
            NULL_MIN_TOL,
            NULL_GAP_TOL,
            &format!("flip intertwiner at edge {d} onto a chosen target"),
        )?;
        let local = linalg::unvec_col_major(&v, n * n);
        linalg::embed_block(&local, &[loc.a, loc.b], m, n)
    } else {
        let step = flip_step(r, d)?;
        let adjust = solve_same_intertwiner(&step.target, target)?;
        linalg::mul(&step.matrix, &adjust.matrix)
    };

    let (_, images) = flip_generator_images(r, d)?;
    let mut residual = 0.0f64;
    for (e, image) in images.iter().enumerate() {
        let lhs = linalg::mul(image, &matrix);
        let rhs = linalg::mul(&matrix, &target.generator(e));
        residual = residual.max(linalg::rel_dist(&lhs, &rhs));
    }
    if residual > VERIFY_TOL {
        return Err(Error::Rep(format!(
            "flip intertwiner at edge {d} fails against the chosen target: residual {residual:.3e}"
        )));
    }

    Ok(Intertwiner {
        matrix: linalg::normalize_projective(&matrix)?,
        source: r.clone(),
        target: target.clone(),
        residual,
    })
}

// ---------------------------------------------------------------------------
// Paths, cycles, invariants
// ---------------------------------------------------------------------------

/// Compose canonical flip steps along `path`, starting at `start`.
///
/// Each step flips the canonical representation produced by the previous
/// one; the composite is the ordered product `L_1 L_2 ... L_k` of the step
/// matrices.  An empty path yields the identity.
pub fn compose_path(start: &LocalRep, path: &[usize]) -> Result<PathResult> {
    let mut steps = Vec::with_capacity(path.len());
    let mut current = start.clone();
    for &d in path {
        let step = flip_step(&current, d)?;
        current = step.target.clone();
        steps.push(step);
    }
    let mut composite = linalg::eye(start.dim());
    for step in &steps {
        composite = linalg::mul(&composite, &step.matrix);
    }
    Ok(PathResult { steps, composite, final_rep: current })
}

/// Compose a flip path, relabel the endpoint back onto the starting edge
/// labels, close with a same-triangulation intertwiner and report the scalar
/// the total operator acts by.
///
/// `relabel[e]` is the starting-triangulation label of the endpoint edge
/// `e`.  For a path whose induced mapping class is trivial the total is a
/// scalar matrix; [`CycleReport::residual`] measures how close it is to one.
/// When the endpoint triangulation matches the start under several face
/// identifications (faces reading the same cyclic edge word), each closing
/// candidate is tried and the one with the smallest residual is kept, so a
/// trivial cycle is certified whenever some identification closes it.
pub fn closed_cycle(start: &LocalRep, path: &[usize], relabel: &[usize]) -> Result<CycleReport> {
    let run = compose_path(start, path)?;
    let relabeled = run.final_rep.relabeled(relabel)?;
    let aligns = relabeled
        .triangulation()
        .labeled_isomorphisms(start.triangulation());
    if aligns.is_empty() {
        return Err(Error::NotIsomorphic(
            "the relabeled endpoint triangulation does not match the start".into(),
        ));
    }
    let mut best: Option<(CMat, CMat, Complex64, f64)> = None;
    let mut first_err: Option<Error> = None;
    for align in &aligns {
        let closing = match solve_same_aligned(&relabeled, start, align) {
            Ok(c) => c,
            Err(e) => {
                first_err.get_or_insert(e);
                continue;
            }
        };
        let total = linalg::mul(&run.composite, &closing.matrix);
        let (scalar, residual) = linalg::scalar_residual(&total)?;
        if best.as_ref().map_or(true, |(_, _, _, r)| residual < *r) {
            best = Some((closing.matrix, total, scalar, residual));
        }
    }
    let (closing, total, scalar, residual) = match best {
        Some(b) => b,
        None => return Err(first_err.expect("at least one alignment was tried")),
    };
    let mut step_matrices: Vec<CMat> = run.steps.iter().map(|s| s.matrix.clone()).collect();
    step_matrices.push(closing);
    Ok(CycleReport { step_matrices, total, scalar, residual })
}

/// Projective spectral invariants of a mapping-class operator.
pub fn invariants_of(total: &CMat) -> Result<InvariantReport> {
    let dim = total.nrows();
    if dim == 0 || dim != total.ncols() {
        return Err(Error::Degenerate("invariants of a non-square matrix".into()));
    }
    let eigs = linalg::eigenvalues(total)?;
    let mut trace = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        trace += total[(i, i)];
    }

    // Stable determinant data through eigenvalue logs.
    let mut ln_sum = 0.0f64;
    let mut arg_sum = 0.0f64;
    for ev in &eigs {
        let r = ev.norm();
        if !r.is_finite() || r < 1e-300 {
            return Err(Error::Degenerate(format!(
                "mapping-class operator has a vanishing or non-finite eigenvalue {}",
                format_complex(*ev)
            )));
        }
        ln_sum += r.ln();
        arg_sum += ev.arg();
    }
    let d = dim as f64;
    let tau = std::f64::consts::TAU;
    let mut det_arg = arg_sum.rem_euclid(tau);
    if det_arg > std::f64::consts::PI {
        det_arg -= tau;
    }
    let scale_free_trace = trace.norm() / (ln_sum / d).exp();
    let det_normalized_trace = trace * Complex64::from_polar((-ln_sum / d).exp(), -det_arg / d);
    let phase_sector = det_normalized_trace.arg().rem_euclid(tau / d);

    let reference = *eigs
        .iter()
        .max_by(|u, v| u.norm().total_cmp(&v.norm()).then(u.arg().total_cmp(&v.arg())))
        .expect("dim > 0");
    let mut eigenvalue_ratios: Vec<Complex64> = eigs.iter().map(|ev| ev / reference).collect();
    eigenvalue_ratios.sort_by(|u, v| u.norm().total_cmp(&v.norm()).then(u.arg().total_cmp(&v.arg())));

    Ok(InvariantReport {
        dim,
        trace,
        scale_free_trace,
        det_normalized_trace,
        phase_sector,
        eigenvalue_ratios,
    })
}

/// Spectral invariants of the mapping class given by a flip path plus a
/// final relabeling, evaluated at a fixed point of its weight action.
///
/// The edge weights `x` must be fixed (to `1e-8`) by transporting along
/// `path` and renaming edge `e` to `relabel[e]`; otherwise
/// [`Error::NotFixedPoint`] is returned.  The starting representation is the
/// canonical one with total load `omega^load_root` times the principal root
/// of the weight product.
///
/// The closing same-triangulation intertwiner is a deterministic function
/// of the endpoint representation alone, so two flip paths that end in the
/// same stored presentation (face table and per-corner data) yield the same
/// projective operator.  The reported data is invariant under projective
/// rescalings of the elementary intertwiners by construction.
pub fn mapping_class_invariant(
    t: &Triangulation,
    params: &QParams,
    x: &[Complex64],
    path: &[usize],
    relabel: &[usize],
    load_root: i64,
    dim_cap: usize,
) -> Result<InvariantReport> {
    let (t_end, x_end) = transport::transport(t, x, path)?;
    let t_rel = t_end.relabeled(relabel)?;
    if t.labeled_isomorphism(&t_rel).is_none() {
        return Err(Error::NotFixedPoint(
            "the relabeled endpoint triangulation does not match the start".into(),
        ));
    }
    let mut x_rel = vec![Complex64::new(0.0, 0.0); x_end.len()];
    for (e, &xe) in x_end.iter().enumerate() {
        x_rel[relabel[e]] = xe;
    }
    let mut worst = 0.0f64;
    for e in 0..x.len() {
        worst = worst.max((x_rel[e] - x[e]).norm() / x[e].norm().max(1.0));
    }
    if worst > VERIFY_TOL {
        return Err(Error::NotFixedPoint(format!(
            "transported weights deviate from the start by {worst:.3e}"
        )));
    }

    let product: Complex64 = x.iter().product();
    let h = params.principal_nth_root(product) * params.omega_pow(load_root);
    let start = LocalRep::from_edge_weights(t, params, x, h, dim_cap)?;
    let run = compose_path(&start, path)?;
    let relabeled = run.final_rep.relabeled(relabel)?;
    let closing = solve_same_intertwiner(&relabeled, &start)?;
    let total = linalg::mul(&run.composite, &closing.matrix);
    invariants_of(&total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rep::{classify_matrices, DEFAULT_DIM_CAP};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_scalar(rng: &mut ChaCha8Rng) -> Complex64 {
        let r = rng.gen_range(0.6..1.6);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, th)
    }

    fn rand_weights(t: &Triangulation, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..t.n_edges()).map(|_| rand_scalar(rng)).collect()
    }

    fn canonical_rep(
        t: &Triangulation,
        params: &QParams,
        x: &[Complex64],
    ) -> LocalRep {
        let product: Complex64 = x.iter().product();
        let h = params.principal_nth_root(product);
        LocalRep::from_edge_weights(t, params, x, h, DEFAULT_DIM_CAP).unwrap()
    }

    #[test]
    fn flip_images_take_nth_powers_to_the_transported_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(401);
        let t = fixtures::square();
        for &(n, cc) in &[(2usize, 1i64), (3, 1)] {
            let params = QParams::new(n, cc).unwrap();
            let x = rand_weights(&t, &mut rng);
            let r = canonical_rep(&t, &params, &x);
            let (t_flip, images) = flip_generator_images(&r, 0).unwrap();
            let x_flip = transport::flip_weights(&t, &x, 0).unwrap();
            for e in 0..t_flip.n_edges() {
                let (s, res) = linalg::scalar_residual(&linalg::mat_pow(&images[e], n)).unwrap();
                assert!(res < 1e-9, "edge {e}: power not scalar at N={n} ({res:.3e})");
                assert!(
                    (s - x_flip[e]).norm() <= 1e-9 * x_flip[e].norm().max(1.0),
                    "edge {e}: power {s} vs transported weight {}",
                    x_flip[e]
                );
            }
            // The images form a representation of the flipped surface whose
            // classification is exactly the transported one.
            let class = classify_matrices(&t_flip, &params, &images, 1e-8).unwrap();
            for e in 0..t_flip.n_edges() {
                assert!((class.x[e] - x_flip[e]).norm() <= 1e-8 * x_flip[e].norm().max(1.0));
            }
            let h0: Complex64 = r.face_data().iter().map(|f| f.load()).product();
            assert!((class.h - h0).norm() <= 1e-8 * h0.norm().max(1.0));
        }
    }

    #[test]
    fn weight_one_square_flip_matches_the_halving_pattern() {
        let params = QParams::new(2, 1).unwrap();
        let t = fixtures::square();
        let x = vec![c(1.0, 0.0); 5];
        let r = canonical_rep(&t, &params, &x);
        let (_, images) = flip_generator_images(&r, 0).unwrap();
        // Sides p, r (edges 1, 3) halve, sides q, s (edges 2, 4) double,
        // the diagonal weight 1 is its own inverse.
        let expect = [1.0, 0.5, 2.0, 0.5, 2.0];
        for e in 0..5 {
            let (s, res) = linalg::scalar_residual(&linalg::mat_pow(&images[e], 2)).unwrap();
            assert!(res < 1e-12);
            assert!((s - c(expect[e], 0.0)).norm() < 1e-12, "edge {e}: {s}");
        }
    }

    #[test]
    fn flip_step_produces_a_verified_step_on_the_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(402);
        let t = fixtures::punctured_torus();
        let params = QParams::new(3, 1).unwrap();
        let x = rand_weights(&t, &mut rng);
        let r = canonical_rep(&t, &params, &x);
        let step = flip_step(&r, 0).unwrap();
        assert!(step.residual <= 1e-8);
        assert_eq!(step.edge, 0);

        // The canonical target classifies to the transported weights.
        let x_flip = transport::flip_weights(&t, &x, 0).unwrap();
        let class = step.target.classify(1e-9).unwrap();
        for e in 0..3 {
            assert!(
                (class.x[e] - x_flip[e]).norm() <= 1e-8 * x_flip[e].norm().max(1.0),
                "edge {e}: {} vs {}",
                class.x[e],
                x_flip[e]
            );
        }

        // Global check on a surface with identified roles (p = r, q = s):
        // the full-space flip images intertwine with the embedded matrix.
        let (_, images) = flip_generator_images(&r, 0).unwrap();
        for e in 0..3 {
            let lhs = linalg::mul(&images[e], &step.matrix);
            let rhs = linalg::mul(&step.matrix, &step.target.generator(e));
            assert!(linalg::rel_dist(&lhs, &rhs) <= 1e-8, "edge {e}");
        }
    }

    #[test]
    fn flip_and_flip_back_closes_to_a_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(403);
        let square = fixtures::square();
        let params2 = QParams::new(2, 1).unwrap();
        let x = rand_weights(&square, &mut rng);
        let r = canonical_rep(&square, &params2, &x);
        let report = closed_cycle(&r, &[0, 0], &[0, 1, 2, 3, 4]).unwrap();
        assert!(report.residual <= 1e-6, "square roundtrip residual {}", report.residual);

        let torus = fixtures::punctured_torus();
        let params3 = QParams::new(3, 5).unwrap();
        let x = rand_weights(&torus, &mut rng);
        let r = canonical_rep(&torus, &params3, &x);
        let report = closed_cycle(&r, &[1, 1], &[0, 1, 2]).unwrap();
        assert!(report.residual <= 1e-6, "torus roundtrip residual {}", report.residual);
    }

    #[test]
    fn same_triangulation_solve_handles_root_of_unity_twists() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let params = QParams::new(3, 1).unwrap();
        let omega = params.omega_pow(1);

        // Trivial case: a representation against itself gives a scalar.
        let t = fixtures::punctured_torus();
        let x = rand_weights(&t, &mut rng);
        let r = canonical_rep(&t, &params, &x);
        let iw = solve_same_intertwiner(&r, &r).unwrap();
        assert!(iw.residual <= 1e-8);
        let (_, res) = linalg::scalar_residual(&iw.matrix).unwrap();
        assert!(res <= 1e-8, "self-intertwiner should be scalar, residual {res}");

        // Twisting two edges by inverse roots of unity preserves the
        // classification but changes the generator matrices, so the solved
        // intertwiner is genuinely non-scalar.
        let twisted = r.scale_by_roots(&[omega, omega.inv(), c(1.0, 0.0)]).unwrap();
        let iw = solve_same_intertwiner(&r, &twisted).unwrap();
        assert!(iw.residual <= 1e-8);
        let scalar = linalg::scalar_residual(&iw.matrix);
        assert!(
            scalar.is_err() || scalar.unwrap().1 > 1e-3,
            "twisted intertwiner should not be scalar"
        );

        // Self-folded and boundary edges exercise the other arms of the
        // gauge flow.
        let t = fixtures::monogon();
        let x = rand_weights(&t, &mut rng);
        let r = canonical_rep(&t, &params, &x);
        let twisted = r.scale_by_roots(&[omega, omega.inv()]).unwrap();
        let iw = solve_same_intertwiner(&r, &twisted).unwrap();
        assert!(iw.residual <= 1e-8);
    }

    #[test]
    fn same_triangulation_solve_rejects_different_classes() {
        let params = QParams::new(2, 1).unwrap();
        let t = fixtures::punctured_torus();
        let ones = vec![c(1.0, 0.0); 3];
        let r1 = canonical_rep(&t, &params, &ones);

        let mut other = ones.clone();
        other[0] = c(2.0, 0.0);
        let h2 = params.principal_nth_root(c(2.0, 0.0));
        let r2 = LocalRep::from_edge_weights(&t, &params, &other, h2, DEFAULT_DIM_CAP).unwrap();
        assert!(matches!(
            solve_same_intertwiner(&r1, &r2),
            Err(Error::NotIsomorphic(_))
        ));

        // Same weights but the load shifted by a root of unity is a
        // different class as well.
        let h_shift = params.omega_pow(1);
        let r3 = LocalRep::from_edge_weights(&t, &params, &ones, h_shift, DEFAULT_DIM_CAP).unwrap();
        assert!(matches!(
            solve_same_intertwiner(&r1, &r3),
            Err(Error::NotIsomorphic(_))
        ));
    }

    #[test]
    fn flip_intertwiner_reaches_a_chosen_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(405);
        let params = QParams::new(2, 1).unwrap();
        let t = fixtures::square();
        let x = rand_weights(&t, &mut rng);
        let r = canonical_rep(&t, &params, &x);
        let h0: Complex64 = r.face_data().iter().map(|f| f.load()).product();

        let x_flip = transport::flip_weights(&t, &x, 0).unwrap();
        let t_flip = t.flip(0).unwrap();
        let target =
            LocalRep::from_edge_weights(&t_flip, &params, &x_flip, h0, DEFAULT_DIM_CAP).unwrap();
        let iw = solve_flip_intertwiner(&r, &target, 0).unwrap();
        assert!(iw.residual <= 1e-8);

        // A target with the load off by a root of unity is a different
        // class and must be rejected.
        let wrong = LocalRep::from_edge_weights(
            &t_flip,
            &params,
            &x_flip,
            h0 * params.omega_pow(1),
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        assert!(solve_flip_intertwiner(&r, &wrong, 0).is_err());
    }

    #[test]
    fn pentagon_cycle_closes_to_a_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(406);
        let t = fixtures::pentagon();
        let path = [2usize, 4, 2, 4, 2];
        let relabel = [0usize, 1, 4, 3, 2, 5, 6];
        for &(n, cc) in &[(2usize, 1i64), (3, 1)] {
            let params = QParams::new(n, cc).unwrap();
            let x = rand_weights(&t, &mut rng);
            let r = canonical_rep(&t, &params, &x);
            let report = closed_cycle(&r, &path, &relabel).unwrap();
            assert!(
                report.residual <= 1e-6,
                "pentagon cycle at N={n}: residual {:.3e}",
                report.residual
            );
        }
    }

    #[test]
    fn distant_flips_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(407);
        let t = fixtures::hexagon();
        let params = QParams::new(2, 1).unwrap();
        let x = rand_weights(&t, &mut rng);
        let r = canonical_rep(&t, &params, &x);
        // Diagonals 2 and 6 touch disjoint pairs of faces.
        let ab = compose_path(&r, &[2, 6]).unwrap();
        let ba = compose_path(&r, &[6, 2]).unwrap();
        assert_eq!(
            ab.final_rep.triangulation().faces(),
            ba.final_rep.triangulation().faces()
        );
        let ca = ab.final_rep.classify(1e-9).unwrap();
        let cb = ba.final_rep.classify(1e-9).unwrap();
        assert!(ca.distance(&cb) <= 1e-8);
        let na = linalg::normalize_projective(&ab.composite).unwrap();
        let nb = linalg::normalize_projective(&ba.composite).unwrap();
        assert!(
            linalg::rel_dist(&na, &nb) <= 1e-6,
            "distant flips differ by {:.3e}",
            linalg::rel_dist(&na, &nb)
        );
    }

    #[test]
    fn identity_and_order_finite_invariants_behave() {
        let t = fixtures::punctured_torus();
        let params = QParams::new(2, 1).unwrap();
        let x = vec![c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0)];

        // Empty path, identity relabeling: the identity mapping class.  The
        // total operator is scalar, so the scale-free trace is the dimension
        // and every eigenvalue ratio is 1.
        let report =
            mapping_class_invariant(&t, &params, &x, &[], &[0, 1, 2], 0, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(report.dim, 4);
        assert!((report.scale_free_trace - 4.0).abs() <= 1e-6 * 4.0);
        for ratio in &report.eigenvalue_ratios {
            assert!((ratio - c(1.0, 0.0)).norm() <= 1e-6);
        }

        // Flipping the diagonal and swapping the two other edges fixes
        // these weights; the class has finite order, so all eigenvalue
        // ratios lie on the unit circle.
        let report =
            mapping_class_invariant(&t, &params, &x, &[0], &[0, 2, 1], 0, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(report.dim, 4);
        for ratio in &report.eigenvalue_ratios {
            assert!(
                (ratio.norm() - 1.0).abs() <= 1e-6,
                "order-finite class with off-circle ratio {ratio}"
            );
        }

        // A longer path realizing the same class must produce the same
        // projective data.  Four extra flips of the diagonal are needed for
        // an exact roundtrip: a double flip restores the face table but
        // trades the two faces' corner data, so only the quadruple flip
        // returns the representation verbatim.
        let alt = mapping_class_invariant(
            &t,
            &params,
            &x,
            &[0, 0, 0, 0, 0],
            &[0, 2, 1],
            0,
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        assert!(
            (alt.scale_free_trace - report.scale_free_trace).abs() <= 1e-6,
            "scale-free trace differs across paths: {} vs {}",
            alt.scale_free_trace,
            report.scale_free_trace
        );
        let sector = std::f64::consts::TAU / report.dim as f64;
        let diff = (alt.phase_sector - report.phase_sector).rem_euclid(sector);
        assert!(
            diff.min(sector - diff) <= 1e-6,
            "phase sector differs across paths: {} vs {}",
            alt.phase_sector,
            report.phase_sector
        );

        // Weights that are not fixed by the move are rejected.
        let moved = vec![c(1.0, 0.0), c(3.0, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            mapping_class_invariant(&t, &params, &moved, &[0], &[0, 2, 1], 0, DEFAULT_DIM_CAP),
            Err(Error::NotFixedPoint(_))
        ));
    }

}
