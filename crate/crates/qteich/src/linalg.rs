//! Dense complex linear algebra helpers on top of `faer`.
//!
//! Everything downstream works with `CMat = faer::Mat<Complex64>`.  This
//! module centralizes the few decompositions we need (SVD null vectors with
//! gap gates, eigenvalues, LU inverse), Kronecker/tensor plumbing for
//! operators living on a subset of tensor factors, and the deterministic
//! normalization applied to every intertwiner.

use faer::linalg::solvers::DenseSolveCore;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = faer::Mat<Complex64>;

pub fn zero(n: usize, m: usize) -> CMat {
    CMat::zeros(n, m)
}

pub fn eye(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn scale(a: &CMat, c: Complex64) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * c)
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    a + b
}

pub fn sub(a: &CMat, b: &CMat) -> CMat {
    a - b
}

pub fn mul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

/// Plain transpose (no conjugation).
pub fn transpose(a: &CMat) -> CMat {
    a.transpose().to_owned()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut dst = CMat::zeros(a.nrows() * b.nrows(), a.ncols() * b.ncols());
    faer::linalg::kron::kron(dst.as_mut(), a.as_ref(), b.as_ref());
    dst
}

pub fn mat_pow(a: &CMat, k: usize) -> CMat {
    let mut out = eye(a.nrows());
    for _ in 0..k {
        out = &out * a;
    }
    out
}

/// Largest entry modulus.
pub fn norm_max(a: &CMat) -> f64 {
    // Unlike `faer`'s built-in max norm, propagate non-finite entries as an
    // infinite norm so that residual gates reject NaN-contaminated results.
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, j)].norm();
            if !v.is_finite() {
                return f64::INFINITY;
            }
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let sv = a
        .singular_values()
        .expect("singular values of a finite matrix");
    sv.first().copied().unwrap_or(0.0)
}

/// Relative max-norm distance: `|a - b|_max / max(|a|_max, |b|_max, 1e-300)`.
pub fn rel_dist(a: &CMat, b: &CMat) -> f64 {
    let scale = norm_max(a).max(norm_max(b));
    if scale == 0.0 {
        return 0.0;
    }
    norm_max(&(a - b)) / scale
}

pub fn determinant(a: &CMat) -> Complex64 {
    a.determinant()
}

/// Inverse via partial-pivot LU, verified by multiplying back.
pub fn inverse(a: &CMat, context: &str) -> Result<CMat> {
    if a.nrows() != a.ncols() {
        return Err(Error::Rep(format!("{context}: cannot invert a non-square matrix")));
    }
    let inv = a.partial_piv_lu().inverse();
    let residual = rel_dist(&(a * &inv), &eye(a.nrows()));
    if !residual.is_finite() || residual > 1e-8 {
        return Err(Error::SingularMatrix {
            context: context.to_string(),
            det: determinant(a).norm(),
        });
    }
    Ok(inv)
}

/// Eigenvalues of a square matrix, in faer's order.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    a.eigenvalues()
        .map_err(|e| Error::Degenerate(format!("eigenvalue computation failed: {e:?}")))
}

/// Gap-gated null vector: the singular vector for the smallest singular
/// value of `a`, accepted only when `sigma_min < min_tol * sigma_max` and
/// the second-smallest singular value stays above `gap_tol * sigma_max`
/// (null space of dimension exactly one).
pub fn null_vector_gated(a: &CMat, min_tol: f64, gap_tol: f64, note: &str) -> Result<CMat> {
    let svd = a
        .thin_svd()
        .map_err(|e| Error::Degenerate(format!("SVD failed ({note}): {e:?}")))?;
    let s = svd.S();
    let k = s.dim();
    if k < 2 {
        return Err(Error::Degenerate(format!(
            "null-space system too small ({note}): {k} singular values"
        )));
    }
    let sv: Vec<f64> = s.column_vector().iter().map(|c| c.re).collect();
    let sigma_max = sv[0].max(f64::MIN_POSITIVE);
    let sigma_min = sv[k - 1];
    let sigma_next = sv[k - 2];
    if sigma_min >= min_tol * sigma_max || sigma_next <= gap_tol * sigma_max {
        return Err(Error::NullSpaceGate {
            sigma_min,
            sigma_next,
            sigma_max,
            note: note.to_string(),
        });
    }
    let v = svd.V();
    Ok(CMat::from_fn(v.nrows(), 1, |i, _| v[(i, k - 1)]))
}

/// Interpret a length-`d*d` column as a `d x d` matrix in column-major
/// order (the vectorization convention `vec(AXB) = (B^T (x) A) vec(X)`).
pub fn unvec_col_major(v: &CMat, d: usize) -> CMat {
    assert_eq!(v.nrows(), d * d);
    assert_eq!(v.ncols(), 1);
    CMat::from_fn(d, d, |i, j| v[(i + j * d, 0)])
}

/// Stack the Sylvester-type blocks `I (x) A_k - B_k^T (x) I` for the
/// equations `A_k L = L B_k`; a null vector of the stack is `vec(L)` in
/// column-major order.
pub fn sylvester_stack(pairs: &[(CMat, CMat)]) -> CMat {
    assert!(!pairs.is_empty());
    let d = pairs[0].0.nrows();
    let dd = d * d;
    let id = eye(d);
    let mut stack = CMat::zeros(pairs.len() * dd, dd);
    for (k, (a, b)) in pairs.iter().enumerate() {
        assert_eq!(a.nrows(), d);
        assert_eq!(b.nrows(), d);
        let block = kron(&id, a) - kron(&transpose(b), &id);
        for i in 0..dd {
            for j in 0..dd {
                stack[(k * dd + i, j)] = block[(i, j)];
            }
        }
    }
    stack
}

/// Mean of the diagonal and the max-norm residual of `a / mean - Id`;
/// errors out when the mean diagonal is negligibly small.
pub fn scalar_residual(a: &CMat) -> Result<(Complex64, f64)> {
    let n = a.nrows();
    if n == 0 || n != a.ncols() {
        return Err(Error::Degenerate("scalar residual of a non-square matrix".into()));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        s += a[(i, i)];
    }
    s /= n as f64;
    if s.norm() < 1e-300 || s.norm() < 1e-12 * norm_max(a) {
        return Err(Error::Degenerate(format!(
            "matrix is not close to a scalar: mean diagonal {s} vs max entry {}",
            norm_max(a)
        )));
    }
    let residual = norm_max(&(&scale(a, s.inv()) - &eye(n)));
    Ok((s, residual))
}

/// Deterministic projective representative: divide by the operator norm,
/// then rotate so the largest-modulus entry (first in row-major order on
/// ties) is positive real.
pub fn normalize_projective(a: &CMat) -> Result<CMat> {
    let norm = op_norm(a);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Degenerate("cannot normalize a zero or non-finite matrix".into()));
    }
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_norm = -1.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let v = a[(i, j)];
            if v.norm() > best_norm {
                best_norm = v.norm();
                best = v;
            }
        }
    }
    let phase = best / best.norm();
    let factor = phase.conj() / norm;
    Ok(scale(a, factor))
}

/// Embed an operator acting on the listed tensor sites (each of local
/// dimension `site_dim`, `m` sites total, site 0 the slowest index) into
/// the full `site_dim^m` product space, identity on the other factors.
/// Within the block, the first listed site is the slower index.
pub fn embed_block(block: &CMat, sites: &[usize], m: usize, site_dim: usize) -> CMat {
    let full: usize = site_dim.pow(m as u32);
    assert_eq!(block.nrows(), site_dim.pow(sites.len() as u32));
    assert_eq!(block.nrows(), block.ncols());
    let digits = |idx: usize| -> Vec<usize> {
        let mut d = vec![0; m];
        let mut rest = idx;
        for j in (0..m).rev() {
            d[j] = rest % site_dim;
            rest /= site_dim;
        }
        d
    };
    let mut out = CMat::zeros(full, full);
    for r in 0..full {
        let dr = digits(r);
        'col: for c in 0..full {
            let dc = digits(c);
            for j in 0..m {
                if !sites.contains(&j) && dr[j] != dc[j] {
                    continue 'col;
                }
            }
            let mut br = 0;
            let mut bc = 0;
            for &s in sites {
                br = br * site_dim + dr[s];
                bc = bc * site_dim + dc[s];
            }
            out[(r, c)] = block[(br, bc)];
        }
    }
    out
}

/// Permutation operator on an `m`-fold tensor power: maps a basis vector
/// with digits `d` to the one whose digit at position `j` is `d[perm[j]]`.
pub fn tensor_permutation(perm: &[usize], m: usize, site_dim: usize) -> CMat {
    assert_eq!(perm.len(), m);
    let full: usize = site_dim.pow(m as u32);
    let mut out = CMat::zeros(full, full);
    for c in 0..full {
        let mut dc = vec![0; m];
        let mut rest = c;
        for j in (0..m).rev() {
            dc[j] = rest % site_dim;
            rest /= site_dim;
        }
        let mut r = 0;
        for j in 0..m {
            r = r * site_dim + dc[perm[j]];
        }
        out[(r, c)] = Complex64::new(1.0, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rand_mat(rng: &mut impl Rng, n: usize, m: usize) -> CMat {
        CMat::from_fn(n, m, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn kron_matches_hand_example() {
        let a = CMat::from_fn(2, 2, |i, j| Complex64::new((2 * i + j + 1) as f64, 0.0));
        let b = eye(2);
        let k = kron(&a, &b);
        assert_eq!(k.nrows(), 4);
        assert!((k[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((k[(1, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((k[(0, 2)] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(k[(0, 1)].norm() < 1e-15);
        // Mixed-product property on random matrices.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (a, b) = (rand_mat(&mut rng, 3, 3), rand_mat(&mut rng, 2, 2));
        let (c, d) = (rand_mat(&mut rng, 3, 3), rand_mat(&mut rng, 2, 2));
        let lhs = mul(&kron(&a, &b), &kron(&c, &d));
        let rhs = kron(&mul(&a, &c), &mul(&b, &d));
        assert!(rel_dist(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn inverse_round_trips_and_rejects_singular() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = rand_mat(&mut rng, 5, 5);
        let inv = inverse(&a, "test").unwrap();
        assert!(rel_dist(&mul(&a, &inv), &eye(5)) < 1e-10);
        let z = zero(3, 3);
        assert!(inverse(&z, "test").is_err());
    }

    #[test]
    fn null_vector_detects_rank_deficiency_with_gap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        // Build a 6x4 matrix with exactly one null direction: A = B * P where
        // P projects out a known unit vector.
        let b = rand_mat(&mut rng, 6, 4);
        let v = {
            let raw = rand_mat(&mut rng, 4, 1);
            scale(&raw, Complex64::new(1.0 / op_norm(&raw), 0.0))
        };
        let proj = sub(&eye(4), &mul(&v, &v.adjoint().to_owned()));
        let a = mul(&b, &proj);
        let null = null_vector_gated(&a, 1e-8, 1e-6, "test").unwrap();
        assert!(op_norm(&mul(&a, &null)) < 1e-10 * op_norm(&a));
        // Full-rank matrix: gate rejects.
        assert!(matches!(
            null_vector_gated(&b, 1e-8, 1e-6, "test"),
            Err(Error::NullSpaceGate { .. })
        ));
    }

    #[test]
    fn sylvester_stack_solves_an_intertwining_system() {
        // A_k L = L B_k with B_k = S^{-1} A_k S for two generators whose joint
        // commutant is trivial (a diagonal matrix with distinct entries and a
        // cyclic shift generate the full matrix algebra), so the stacked
        // system has a one-dimensional null space spanned by S.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let a1 = {
            let mut d = zero(3, 3);
            for i in 0..3 {
                d[(i, i)] = Complex64::new(1.0 + i as f64, 0.3 * i as f64);
            }
            d
        };
        let a2 = {
            let mut p = zero(3, 3);
            for i in 0..3 {
                p[((i + 1) % 3, i)] = Complex64::new(1.0, 0.0);
            }
            p
        };
        let s = rand_mat(&mut rng, 3, 3);
        let s_inv = inverse(&s, "test").unwrap();
        let b1 = mul(&mul(&s_inv, &a1), &s);
        let b2 = mul(&mul(&s_inv, &a2), &s);
        let stack = sylvester_stack(&[(a1.clone(), b1.clone()), (a2.clone(), b2.clone())]);
        let vec_l = null_vector_gated(&stack, 1e-8, 1e-6, "test").unwrap();
        let l = unvec_col_major(&vec_l, 3);
        assert!(rel_dist(&mul(&a1, &l), &mul(&l, &b1)) < 1e-10);
        assert!(rel_dist(&mul(&a2, &l), &mul(&l, &b2)) < 1e-10);
        // l must be proportional to s.
        let ratio = l[(0, 0)] / s[(0, 0)];
        assert!(rel_dist(&l, &scale(&s, ratio)) < 1e-8);
    }

    #[test]
    fn scalar_residual_measures_off_scalar_mass() {
        let mut a = scale(&eye(4), Complex64::new(0.0, 2.0));
        let (s, r) = scalar_residual(&a).unwrap();
        assert!((s - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!(r < 1e-15);
        a[(0, 1)] = Complex64::new(0.002, 0.0);
        let (_, r) = scalar_residual(&a).unwrap();
        assert!((r - 0.001).abs() < 1e-12);
    }

    #[test]
    fn normalization_is_deterministic_and_projective() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = rand_mat(&mut rng, 4, 4);
        let n1 = normalize_projective(&a).unwrap();
        let n2 = normalize_projective(&scale(&a, Complex64::new(0.0, -3.7))).unwrap();
        assert!(rel_dist(&n1, &n2) < 1e-12);
        assert!((op_norm(&n1) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn embed_block_places_sites_correctly() {
        // Two sites of dimension 2, operator X on site 1 of 2.
        let x = CMat::from_fn(2, 2, |i, j| {
            if i + j == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let full = embed_block(&x, &[1], 2, 2);
        let expected = kron(&eye(2), &x);
        assert!(rel_dist(&full, &expected) < 1e-15);
        let full = embed_block(&x, &[0], 2, 2);
        let expected = kron(&x, &eye(2));
        assert!(rel_dist(&full, &expected) < 1e-15);
        // Two-site block listed in swapped order equals conjugation by swap.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let b = rand_mat(&mut rng, 4, 4);
        let direct = embed_block(&b, &[0, 1], 2, 2);
        let swapped = embed_block(&b, &[1, 0], 2, 2);
        let p = tensor_permutation(&[1, 0], 2, 2);
        assert!(rel_dist(&swapped, &mul(&mul(&p, &direct), &transpose(&p))) < 1e-13);
    }

    #[test]
    fn tensor_permutation_composes_contravariantly() {
        // P_sigma maps digits d to digits d' with d'[j] = d[sigma[j]].
        let sigma = [1usize, 2, 0];
        let tau = [2usize, 0, 1];
        let p_sigma = tensor_permutation(&sigma, 3, 2);
        let p_tau = tensor_permutation(&tau, 3, 2);
        // Applying tau then sigma: digits pass through tau's relabeling
        // first, so the composite permutation is tau-after-sigma composed
        // index-wise as tau[sigma[j]].
        let composite: Vec<usize> = (0..3).map(|j| tau[sigma[j]]).collect();
        let p_comp = tensor_permutation(&composite, 3, 2);
        assert!(rel_dist(&mul(&p_sigma, &p_tau), &p_comp) < 1e-15);
    }
}
