//! Finite-dimensional local representations of the edge algebra.
//!
//! A representation assigns to every triangle of the triangulation a triple
//! of invertible `N x N` matrices acting on its own tensor factor, built from
//! three side scalars `y = (y_0, y_1, y_2)`.  An edge generator acts through
//! the one or two sides carrying that edge; its `N`-th power is the scalar
//! *edge weight*, and the ordered product of all generators (the Weyl
//! element) acts by the scalar *total load*.  The pair (edge weights, total
//! load) classifies the representation up to isomorphism, which is what
//! [`LocalRep::classify`] recovers numerically.
//!
//! Side scalars are stored exactly; the per-face load `h_j = y_0 y_1 y_2` and
//! the side weights `w_s = y_s^N` are derived quantities, so constructors
//! that receive `(w, h)` data canonicalize two of the three roots and solve
//! for the third.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qalgebra::{embedding_side_order, QParams, SkewPoly, TrianglePoly};
use crate::surface::Triangulation;

/// Default bound on the total tensor dimension `N^m`.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Relative tolerance for consistency checks between loads and weights at
/// construction time.
const LOAD_TOL: f64 = 1e-9;

/// The representation data carried by a single triangle: one invertible
/// scalar per side.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceData {
    pub y: [Complex64; 3],
}

impl FaceData {
    /// The face load `h_j = y_0 y_1 y_2`, computed exactly from the stored
    /// roots.
    pub fn load(&self) -> Complex64 {
        self.y[0] * self.y[1] * self.y[2]
    }

    /// The three side weights `w_s = y_s^N`.
    pub fn weights(&self, n: usize) -> [Complex64; 3] {
        [
            self.y[0].powu(n as u32),
            self.y[1].powu(n as u32),
            self.y[2].powu(n as u32),
        ]
    }
}

/// The `N x N` matrix attached to one side of a triangle with side scalars
/// `y`:
///
/// * slot 0 acts diagonally, `e_i -> y_0 q^{2i} e_i`;
/// * slot 1 shifts forward, `e_i -> y_1 e_{i+1}`;
/// * slot 2 shifts backward with a phase, `e_i -> y_2 q^{1-2i} e_{i-1}`.
///
/// These satisfy `M_s M_{s+1} = q^2 M_{s+1} M_s` (cyclically), `M_s^N =
/// y_s^N`, and `q^{-1} M_0 M_1 M_2 = y_0 y_1 y_2`.
pub fn triangle_side_matrix(params: &QParams, y: &[Complex64; 3], slot: usize) -> CMat {
    let n = params.n();
    let mut m = linalg::zero(n, n);
    match slot {
        0 => {
            for i in 0..n {
                m[(i, i)] = y[0] * params.q_pow(2 * i as i64);
            }
        }
        1 => {
            for i in 0..n {
                m[((i + 1) % n, i)] = y[1];
            }
        }
        2 => {
            for i in 0..n {
                m[((i + n - 1) % n, i)] = y[2] * params.q_pow(1 - 2 * i as i64);
            }
        }
        _ => panic!("slot out of range"),
    }
    m
}

/// An operator acting on a tensor product of `m` sites of dimension `n`
/// through an explicit block on a sparse subset of sites (identity
/// elsewhere).  Sites are listed in strictly increasing order, with the first
/// listed site as the slowest-varying tensor index of the block.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    pub sites: Vec<usize>,
    pub block: CMat,
}

impl LocalOperator {
    /// Re-express the block on a superset of sites (which must contain
    /// `self.sites`, in increasing order).
    fn extend(&self, union: &[usize], site_dim: usize) -> CMat {
        let pos: Vec<usize> = self
            .sites
            .iter()
            .map(|s| union.iter().position(|u| u == s).expect("site missing from union"))
            .collect();
        linalg::embed_block(&self.block, &pos, union.len(), site_dim)
    }

    /// Product of two local operators, supported on the union of their
    /// sites.
    pub fn mul(&self, other: &LocalOperator, site_dim: usize) -> LocalOperator {
        let mut union = self.sites.clone();
        for s in &other.sites {
            if !union.contains(s) {
                union.push(*s);
            }
        }
        union.sort_unstable();
        let a = self.extend(&union, site_dim);
        let b = other.extend(&union, site_dim);
        LocalOperator { sites: union, block: linalg::mul(&a, &b) }
    }

    /// `k`-th power (block power; the support does not grow).
    pub fn pow(&self, k: usize) -> LocalOperator {
        LocalOperator { sites: self.sites.clone(), block: linalg::mat_pow(&self.block, k) }
    }

    pub fn scale(&self, c: Complex64) -> LocalOperator {
        LocalOperator { sites: self.sites.clone(), block: linalg::scale(&self.block, c) }
    }

    /// The full `n^m x n^m` matrix.
    pub fn to_full(&self, m: usize, site_dim: usize) -> CMat {
        linalg::embed_block(&self.block, &self.sites, m, site_dim)
    }

    /// Relative max-norm distance after extending both operators to their
    /// common support.
    pub fn rel_dist(&self, other: &LocalOperator, site_dim: usize) -> f64 {
        let mut union = self.sites.clone();
        for s in &other.sites {
            if !union.contains(s) {
                union.push(*s);
            }
        }
        union.sort_unstable();
        let a = self.extend(&union, site_dim);
        let b = other.extend(&union, site_dim);
        linalg::rel_dist(&a, &b)
    }

    /// Apply the operator to a full column vector of length `n^m` without
    /// materializing the full matrix.  Cost is `O(dim * block_dim)`, and
    /// zero input entries are skipped, so applying a chain of generators to a
    /// basis vector stays cheap.
    pub fn apply(&self, v: &CMat, m: usize, site_dim: usize) -> CMat {
        let d_total = site_dim.pow(m as u32);
        assert_eq!(v.nrows(), d_total, "vector length mismatch");
        let b = self.sites.len();
        let b_dim = site_dim.pow(b as u32);
        let strides: Vec<usize> =
            self.sites.iter().map(|&j| site_dim.pow((m - 1 - j) as u32)).collect();
        let weights: Vec<usize> = (0..b).map(|k| site_dim.pow((b - 1 - k) as u32)).collect();
        let mut out = linalg::zero(d_total, 1);
        for c in 0..d_total {
            let vc = v[(c, 0)];
            if vc == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut bc = 0usize;
            let mut base = c;
            for k in 0..b {
                let digit = (c / strides[k]) % site_dim;
                bc += digit * weights[k];
                base -= digit * strides[k];
            }
            for br in 0..b_dim {
                let coeff = self.block[(br, bc)];
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut r = base;
                for k in 0..b {
                    r += ((br / weights[k]) % site_dim) * strides[k];
                }
                out[(r, 0)] += coeff * vc;
            }
        }
        out
    }
}

/// The classifying data of a local representation: one weight per edge
/// (`rho(X_i)^N = x_i`) and the total load (`rho(H) = h`).
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub x: Vec<Complex64>,
    pub h: Complex64,
}

impl Classification {
    /// Largest relative deviation between the two data sets
    /// (`|a - b| / max(1, |a|, |b|)` entrywise), or infinity on an arity
    /// mismatch.
    pub fn distance(&self, other: &Classification) -> f64 {
        if self.x.len() != other.x.len() {
            return f64::INFINITY;
        }
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm()).max(1.0);
        let mut worst = rel(self.h, other.h);
        for (a, b) in self.x.iter().zip(&other.x) {
            worst = worst.max(rel(*a, *b));
        }
        worst
    }

    pub fn approx_eq(&self, other: &Classification, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// A local representation of the edge algebra of a triangulated surface.
#[derive(Debug, Clone)]
pub struct LocalRep {
    t: Triangulation,
    params: QParams,
    faces: Vec<FaceData>,
    dim: usize,
}

impl LocalRep {
    /// Build a representation directly from per-face side scalars.
    pub fn from_face_data(
        t: &Triangulation,
        params: &QParams,
        faces: Vec<FaceData>,
        dim_cap: usize,
    ) -> Result<Self> {
        let m = t.faces().len();
        if faces.len() != m {
            return Err(Error::Rep(format!(
                "expected side scalars for {} faces, got {}",
                m,
                faces.len()
            )));
        }
        for (j, f) in faces.iter().enumerate() {
            for (s, y) in f.y.iter().enumerate() {
                if !y.is_finite() || y.norm() == 0.0 {
                    return Err(Error::Rep(format!(
                        "face {j} slot {s}: side scalar must be finite and nonzero"
                    )));
                }
            }
        }
        let mut dim = 1usize;
        for _ in 0..m {
            dim = dim.saturating_mul(params.n());
        }
        if dim > dim_cap {
            return Err(Error::DimCap { dim, cap: dim_cap });
        }
        Ok(LocalRep { t: t.clone(), params: params.clone(), faces, dim })
    }

    /// Build a representation from per-face side weights `w_s` and face
    /// loads `h_j`, checking `h_j^N = w_0 w_1 w_2` to relative tolerance
    /// `1e-9`.  Two of the three side scalars are fixed to principal `N`-th
    /// roots and the third is solved from the load, so the result is a
    /// deterministic representative of the data.
    pub fn from_face_weights(
        t: &Triangulation,
        params: &QParams,
        data: &[([Complex64; 3], Complex64)],
        dim_cap: usize,
    ) -> Result<Self> {
        let n = params.n();
        let mut faces = Vec::with_capacity(data.len());
        for (j, (w, h)) in data.iter().enumerate() {
            for (s, ws) in w.iter().enumerate() {
                if !ws.is_finite() || ws.norm() == 0.0 {
                    return Err(Error::Weights(format!(
                        "face {j} slot {s}: side weight must be finite and nonzero"
                    )));
                }
            }
            let prod = w[0] * w[1] * w[2];
            let hn = h.powu(n as u32);
            if (hn - prod).norm() > LOAD_TOL * prod.norm().max(1.0) {
                return Err(Error::Weights(format!(
                    "face {j}: load^N does not match the product of side weights \
                     (|h^N - w0 w1 w2| = {:.3e})",
                    (hn - prod).norm()
                )));
            }
            let y0 = params.principal_nth_root(w[0]);
            let y1 = params.principal_nth_root(w[1]);
            let y2 = h / (y0 * y1);
            faces.push(FaceData { y: [y0, y1, y2] });
        }
        Self::from_face_data(t, params, faces, dim_cap)
    }

    /// Build the deterministic representative with prescribed edge weights
    /// `x` and total load `h` (checked against `h^N = prod x_i`).  Interior
    /// edges put the whole weight on their first side in scan order; face
    /// loads are principal roots except on face 0, which absorbs the global
    /// load.
    pub fn from_edge_weights(
        t: &Triangulation,
        params: &QParams,
        x: &[Complex64],
        h: Complex64,
        dim_cap: usize,
    ) -> Result<Self> {
        let n = params.n();
        let m = t.faces().len();
        if x.len() != t.n_edges() {
            return Err(Error::Weights(format!(
                "expected {} edge weights, got {}",
                t.n_edges(),
                x.len()
            )));
        }
        if m == 0 {
            return Err(Error::Rep("the surface has no faces".into()));
        }
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_finite() || xi.norm() == 0.0 {
                return Err(Error::Weights(format!(
                    "edge {i}: weight must be finite and nonzero"
                )));
            }
        }
        let prod: Complex64 = x.iter().product();
        let hn = h.powu(n as u32);
        if !h.is_finite() || (hn - prod).norm() > LOAD_TOL * prod.norm().max(1.0) {
            return Err(Error::Weights(format!(
                "total load^N does not match the product of edge weights \
                 (|h^N - prod x| = {:.3e})",
                (hn - prod).norm()
            )));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut w = vec![[one; 3]; m];
        for i in 0..t.n_edges() {
            let occ = t.sides(i);
            let (j, s) = occ[0];
            w[j][s] = x[i];
            // Any further side of the same edge keeps weight one.
        }
        let mut face_loads = vec![Complex64::new(0.0, 0.0); m];
        let mut acc = one;
        for j in 1..m {
            let p = w[j][0] * w[j][1] * w[j][2];
            face_loads[j] = params.principal_nth_root(p);
            acc *= face_loads[j];
        }
        face_loads[0] = h / acc;
        let data: Vec<([Complex64; 3], Complex64)> =
            (0..m).map(|j| (w[j], face_loads[j])).collect();
        Self::from_face_weights(t, params, &data, dim_cap)
    }

    /// The standard representation: every edge weight 1 and total load
    /// `q^{2k}`.
    pub fn standard(
        t: &Triangulation,
        params: &QParams,
        k: i64,
        dim_cap: usize,
    ) -> Result<Self> {
        let x = vec![Complex64::new(1.0, 0.0); t.n_edges()];
        Self::from_edge_weights(t, params, &x, params.q_pow(2 * k), dim_cap)
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.t
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    /// Total dimension `N^m` of the representation space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn face_data(&self) -> &[FaceData] {
        &self.faces
    }

    /// The matrix attached to side `slot` of face `j`.
    pub fn side_matrix(&self, j: usize, slot: usize) -> CMat {
        triangle_side_matrix(&self.params, &self.faces[j].y, slot)
    }

    /// The generator of edge `i` as a local operator: the side matrix for a
    /// boundary edge, a tensor product over the two faces for an edge
    /// between distinct faces, and `q^{-1}` times the corner-ordered product
    /// for a self-folded edge.
    pub fn generator_local(&self, i: usize) -> LocalOperator {
        let occ = self.t.sides(i);
        if occ.len() == 1 {
            let (j, s) = occ[0];
            LocalOperator { sites: vec![j], block: self.side_matrix(j, s) }
        } else if occ[0].0 == occ[1].0 {
            let order = embedding_side_order(&self.t, i);
            let j = order[0].0;
            let prod = linalg::mul(
                &self.side_matrix(j, order[0].1),
                &self.side_matrix(j, order[1].1),
            );
            LocalOperator { sites: vec![j], block: linalg::scale(&prod, self.params.q_pow(-1)) }
        } else {
            let (j1, s1) = occ[0];
            let (j2, s2) = occ[1];
            LocalOperator {
                sites: vec![j1, j2],
                block: linalg::kron(&self.side_matrix(j1, s1), &self.side_matrix(j2, s2)),
            }
        }
    }

    /// The generator of edge `i` as a full matrix.
    pub fn generator(&self, i: usize) -> CMat {
        self.generator_local(i).to_full(self.faces.len(), self.params.n())
    }

    /// Full matrix of an integer power of a generator (negative powers use
    /// the inverse).
    pub fn generator_pow(&self, i: usize, k: i64) -> Result<CMat> {
        let local = self.generator_local(i);
        let block = if k >= 0 {
            linalg::mat_pow(&local.block, k as usize)
        } else {
            let inv = linalg::inverse(&local.block, &format!("generator {i}"))?;
            linalg::mat_pow(&inv, (-k) as usize)
        };
        Ok(LocalOperator { sites: local.sites, block }
            .to_full(self.faces.len(), self.params.n()))
    }

    /// Recover the classifying data by direct measurement: each `rho(X_i)^N`
    /// must be scalar to relative tolerance `tol` (its value is the edge
    /// weight), and the Weyl element, applied to every basis vector, must be
    /// scalar to the same relative tolerance (its value is the total load).
    pub fn classify(&self, tol: f64) -> Result<Classification> {
        let n = self.params.n();
        let m = self.faces.len();
        let n_edges = self.t.n_edges();
        let mut x = Vec::with_capacity(n_edges);
        let mut gens = Vec::with_capacity(n_edges);
        for i in 0..n_edges {
            let g = self.generator_local(i);
            let p = g.pow(n);
            let (s, r) = linalg::scalar_residual(&p.block)?;
            if r > tol {
                return Err(Error::Rep(format!(
                    "generator {i}: N-th power is off-scalar by {r:.3e} (tol {tol:.1e})"
                )));
            }
            x.push(s);
            gens.push(g);
        }
        let sigma = self.t.sigma_matrix();
        let mut exp_sum = 0i64;
        for a in 0..n_edges {
            for b in (a + 1)..n_edges {
                exp_sum += sigma[a][b];
            }
        }
        let coeff = self.params.q_pow(-exp_sum);
        let mut h = Complex64::new(0.0, 0.0);
        let mut worst = 0.0f64;
        for k in 0..self.dim {
            let mut v = linalg::zero(self.dim, 1);
            v[(k, 0)] = Complex64::new(1.0, 0.0);
            for g in gens.iter().rev() {
                v = g.apply(&v, m, n);
            }
            v = linalg::scale(&v, coeff);
            if k == 0 {
                h = v[(0, 0)];
            }
            for r in 0..self.dim {
                let expect = if r == k { h } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((v[(r, 0)] - expect).norm());
            }
        }
        if h.norm() == 0.0 || worst > tol * h.norm() {
            return Err(Error::Rep(format!(
                "Weyl element is off-scalar by {:.3e} relative (tol {tol:.1e})",
                worst / h.norm().max(f64::MIN_POSITIVE)
            )));
        }
        Ok(Classification { x, h })
    }

    /// The same representation with edge labels renamed: face data is
    /// untouched, so the generator of new label `relabel[e]` is the old
    /// generator of `e`.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Self> {
        Ok(LocalRep {
            t: self.t.relabeled(relabel)?,
            params: self.params.clone(),
            faces: self.faces.clone(),
            dim: self.dim,
        })
    }

    /// Rescale each edge weight `x_i` by `a_i^N` (and the total load by
    /// `prod a_i`) by multiplying the first side of each edge by `a_i`.
    pub fn scale_by_roots(&self, roots: &[Complex64]) -> Result<Self> {
        if roots.len() != self.t.n_edges() {
            return Err(Error::Weights(format!(
                "expected {} roots, got {}",
                self.t.n_edges(),
                roots.len()
            )));
        }
        let mut faces = self.faces.clone();
        for (i, a) in roots.iter().enumerate() {
            if !a.is_finite() || a.norm() == 0.0 {
                return Err(Error::Weights(format!(
                    "edge {i}: scaling root must be finite and nonzero"
                )));
            }
            let (j, s) = self.t.sides(i)[0];
            faces[j].y[s] *= a;
        }
        Self::from_face_data(&self.t, &self.params, faces, usize::MAX)
            .map(|mut r| {
                r.dim = self.dim;
                r
            })
    }

    /// The elementary equivalence move on an interior edge: multiply one
    /// side by `a` and the other by `a^{-1}`.  The classifying data is
    /// unchanged but the face data (and the matrices) move.
    pub fn equivalence_move(&self, edge: usize, a: Complex64) -> Result<Self> {
        let occ = self.t.sides(edge);
        if occ.len() != 2 {
            return Err(Error::Rep(format!(
                "edge {edge} is not interior; the equivalence move needs two sides"
            )));
        }
        if !a.is_finite() || a.norm() == 0.0 {
            return Err(Error::Weights("equivalence scalar must be finite and nonzero".into()));
        }
        let mut faces = self.faces.clone();
        let (j1, s1) = occ[0];
        let (j2, s2) = occ[1];
        faces[j1].y[s1] *= a;
        faces[j2].y[s2] *= a.inv();
        Self::from_face_data(&self.t, &self.params, faces, usize::MAX).map(|mut r| {
            r.dim = self.dim;
            r
        })
    }

    /// Evaluate a polynomial in the edge generators (normal-ordered
    /// monomials, integer exponents of either sign) as a full matrix.
    pub fn eval_poly(&self, p: &SkewPoly) -> Result<CMat> {
        let d = self.dim;
        let mut acc = linalg::zero(d, d);
        for (exps, coeff) in &p.terms {
            if exps.len() != self.t.n_edges() {
                return Err(Error::Rep(format!(
                    "monomial arity {} does not match the {} edges",
                    exps.len(),
                    self.t.n_edges()
                )));
            }
            let mut term = linalg::scale(&linalg::eye(d), *coeff);
            for (i, &k) in exps.iter().enumerate() {
                if k != 0 {
                    term = linalg::mul(&term, &self.generator_pow(i, k)?);
                }
            }
            acc = linalg::add(&acc, &term);
        }
        Ok(acc)
    }

    /// Evaluate a polynomial in the per-face side generators as a full
    /// matrix; used to check that the embedding of the edge algebra into the
    /// product of triangle algebras matches the generator matrices.
    pub fn eval_triangle_poly(&self, p: &TrianglePoly) -> Result<CMat> {
        let m = self.faces.len();
        if p.m != m {
            return Err(Error::Rep(format!(
                "polynomial is over {} faces, the surface has {m}",
                p.m
            )));
        }
        let d = self.dim;
        let n = self.params.n();
        let mut acc = linalg::zero(d, d);
        for (exps, coeff) in &p.terms {
            let mut term = CMat::from_fn(1, 1, |_, _| *coeff);
            for j in 0..m {
                let mut block = linalg::eye(n);
                for s in 0..3 {
                    let k = exps[3 * j + s];
                    if k == 0 {
                        continue;
                    }
                    let base = self.side_matrix(j, s);
                    let powed = if k >= 0 {
                        linalg::mat_pow(&base, k as usize)
                    } else {
                        let inv =
                            linalg::inverse(&base, &format!("side matrix ({j},{s})"))?;
                        linalg::mat_pow(&inv, (-k) as usize)
                    };
                    block = linalg::mul(&block, &powed);
                }
                term = linalg::kron(&term, &block);
            }
            acc = linalg::add(&acc, &term);
        }
        Ok(acc)
    }
}

/// Classify an arbitrary family of generator matrices over a triangulation:
/// each `N`-th power must be scalar to relative tolerance `tol` (the edge
/// weight), and the Weyl-normalized ordered product must be scalar as well
/// (the total load).  Used to measure conjugated or otherwise modified
/// generator families that do not come from stored face data.
pub fn classify_matrices(
    t: &Triangulation,
    params: &QParams,
    mats: &[CMat],
    tol: f64,
) -> Result<Classification> {
    let n_edges = t.n_edges();
    if mats.len() != n_edges {
        return Err(Error::Rep(format!(
            "expected {} generator matrices, got {}",
            n_edges,
            mats.len()
        )));
    }
    let mut x = Vec::with_capacity(n_edges);
    for (i, mat) in mats.iter().enumerate() {
        let p = linalg::mat_pow(mat, params.n());
        let (s, r) = linalg::scalar_residual(&p)?;
        if r > tol {
            return Err(Error::Rep(format!(
                "generator {i}: N-th power is off-scalar by {r:.3e} (tol {tol:.1e})"
            )));
        }
        x.push(s);
    }
    let sigma = t.sigma_matrix();
    let mut exp_sum = 0i64;
    for a in 0..n_edges {
        for b in (a + 1)..n_edges {
            exp_sum += sigma[a][b];
        }
    }
    let d = mats[0].nrows();
    let mut acc = linalg::scale(&linalg::eye(d), params.q_pow(-exp_sum));
    for mat in mats {
        acc = linalg::mul(&acc, mat);
    }
    let (h, r) = linalg::scalar_residual(&acc)?;
    if r > tol {
        return Err(Error::Rep(format!(
            "Weyl element is off-scalar by {r:.3e} (tol {tol:.1e})"
        )));
    }
    Ok(Classification { x, h })
}
