//! Pleated-surface developing maps and `PSL(2, C)` holonomy from edge weights.
//!
//! A weight system on an ideal triangulation determines a pleated surface:
//! place the base face on the Riemann sphere as the ideal triangle
//! `(0, 1, infinity)` and attach a new ideal triangle every time a side is
//! crossed, with the shape of each attached triangle prescribed by the weight
//! of the crossed edge.  Developing around a closed dual loop produces a
//! Moebius transformation, and these transformations assemble into the
//! holonomy representation of the punctured surface group.
//!
//! # Frozen conventions
//!
//! All points live on the sphere as projective pairs `(a : b)` (the point is
//! `a/b`, and `(1 : 0)` is infinity); no sentinel floats are used.  With the
//! wedge `u ^ v = u.a v.b - u.b v.a`, the cross-ratio convention is
//!
//! ```text
//! cr(p, q; r, s) = (p ^ r)(q ^ s) / ((p ^ s)(q ^ r)),
//! ```
//!
//! which satisfies `cr(x, 1; 0, infinity) = x`.  Crossing side `s` of a face
//! whose corners are `v[0..3]` reads the side's endpoints `z_a = v[s-1]`,
//! `z_b = v[s]` and the remaining corner `z_c = v[s+1]` (indices mod 3), and
//! attaches the fourth point `z_d` on the far side of the edge as the unique
//! solution of
//!
//! ```text
//! cr(z_a, z_b; z_c, z_d) = -x_e,
//! ```
//!
//! with `x_e` the weight of the crossed edge.  Entering the partner face at
//! slot `s'` stores the shared side the opposite way around, `v'[s'] = z_a`,
//! `v'[s'-1] = z_b`, and puts the new point at the remaining corner
//! `v'[s'+1] = z_d`.  Crossing back immediately reproduces the original
//! triangle exactly, because `cr(q, p; s, r) = cr(p, q; r, s)`.
//!
//! # Peripheral eigenvalues
//!
//! Walking once around a puncture yields a Moebius transformation `M` that
//! fixes the developed position `xi` of the puncture.  If `kappa` is the
//! eigenvalue of `M` on the line `xi`, the derivative of `M` at the fixed
//! point is `det(M) / kappa^2`; this derivative equals the inverse of the
//! product of the weights crossed by the walk, which gives a lift-free
//! cross-check against the combinatorial peripheral data.  The peripheral
//! eigenvalue reported for group lifts is `a = 1 / kappa_hat` where
//! `kappa_hat` is the eigenvalue of the unit-determinant walk transformation;
//! the orientation is fixed so that `a^2` matches the combinatorial
//! derivative, and with that normalization the signed product identity
//!
//! ```text
//! (-1)^p * a_1^{-1} ... a_p^{-1} = x_1 ... x_n      (p punctures, n edges)
//! ```
//!
//! holds for every choice of `SL(2, C)` lift of the holonomy.  Lifts are
//! parametrized by one sign per free generator of the surface group, realized
//! here as one sign per interior edge outside a dual spanning tree.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{Puncture, Triangulation};
use crate::transport;

/// Relative threshold below which two projective points count as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// Relative defect above which a claimed fixed point of a Moebius
/// transformation is rejected.
pub const FIXED_POINT_TOL: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// Projective points
// ---------------------------------------------------------------------------

/// A point of the Riemann sphere as a projective pair `(a : b)`: the complex
/// number `a/b`, with `(1 : 0)` playing the role of infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub a: Complex64,
    pub b: Complex64,
}

impl SpherePoint {
    /// The finite point `z = (z : 1)`.
    pub fn from_complex(z: Complex64) -> Self {
        SpherePoint { a: z, b: ONE }.normalized()
    }

    /// The point at infinity `(1 : 0)`.
    pub fn infinity() -> Self {
        SpherePoint {
            a: ONE,
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// The affine value `a/b`, or `None` for points at (or numerically
    /// indistinguishable from) infinity.
    pub fn as_complex(&self) -> Option<Complex64> {
        if self.b.norm() <= COINCIDENCE_TOL * self.a.norm() {
            None
        } else {
            Some(self.a / self.b)
        }
    }

    /// Rescale so the larger coordinate has modulus one.  Keeps long
    /// developments well conditioned without changing the projective point.
    pub fn normalized(self) -> Self {
        let m = self.a.norm().max(self.b.norm());
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        SpherePoint {
            a: self.a / m,
            b: self.b / m,
        }
    }

    /// Whether the pair defines a point at all (not `(0 : 0)`, no NaNs).
    pub fn is_valid(&self) -> bool {
        let m = self.a.norm().max(self.b.norm());
        m > 0.0 && m.is_finite()
    }
}

/// Antisymmetric pairing `u ^ v = u.a v.b - u.b v.a`; zero exactly when the
/// two pairs define the same projective point.
pub fn wedge(u: &SpherePoint, v: &SpherePoint) -> Complex64 {
    u.a * v.b - u.b * v.a
}

/// Whether two points coincide projectively (relative to normalized pairs).
pub fn same_point(u: &SpherePoint, v: &SpherePoint) -> bool {
    let un = u.normalized();
    let vn = v.normalized();
    wedge(&un, &vn).norm() <= COINCIDENCE_TOL
}

/// Cross-ratio `cr(p, q; r, s) = (p ^ r)(q ^ s) / ((p ^ s)(q ^ r))`, with
/// `cr(x, 1; 0, infinity) = x`.  Errors when the denominator vanishes, i.e.
/// when `p = s` or `q = r` up to the coincidence tolerance.
pub fn cross_ratio(
    p: &SpherePoint,
    q: &SpherePoint,
    r: &SpherePoint,
    s: &SpherePoint,
) -> Result<Complex64> {
    let (p, q, r, s) = (p.normalized(), q.normalized(), r.normalized(), s.normalized());
    let num = wedge(&p, &r) * wedge(&q, &s);
    let den = wedge(&p, &s) * wedge(&q, &r);
    if den.norm() <= COINCIDENCE_TOL {
        return Err(Error::Degenerate(format!(
            "cross-ratio denominator vanishes (|den| = {:.3e}); two of the four points coincide",
            den.norm()
        )));
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Ideal triangles
// ---------------------------------------------------------------------------

/// Three pairwise distinct points of the sphere: the developed position of
/// one face, indexed by the face's corners.
#[derive(Debug, Clone, Copy)]
pub struct IdealTriple {
    pub v: [SpherePoint; 3],
}

impl IdealTriple {
    /// Build a triple, rejecting coincident or invalid corners.
    pub fn new(v: [SpherePoint; 3]) -> Result<Self> {
        for (k, p) in v.iter().enumerate() {
            if !p.is_valid() {
                return Err(Error::Degenerate(format!(
                    "corner {k} of an ideal triangle is not a projective point"
                )));
            }
        }
        for k in 0..3 {
            if same_point(&v[k], &v[(k + 1) % 3]) {
                return Err(Error::Degenerate(format!(
                    "corners {} and {} of an ideal triangle coincide",
                    k,
                    (k + 1) % 3
                )));
            }
        }
        Ok(IdealTriple {
            v: [v[0].normalized(), v[1].normalized(), v[2].normalized()],
        })
    }

    /// The base placement `(0, 1, infinity)` at corners `(0, 1, 2)`.
    pub fn base() -> Self {
        IdealTriple {
            v: [
                SpherePoint::from_complex(c(0.0, 0.0)),
                SpherePoint::from_complex(c(1.0, 0.0)),
                SpherePoint::infinity(),
            ],
        }
    }
}

// ---------------------------------------------------------------------------
// Moebius transformations
// ---------------------------------------------------------------------------

/// A Moebius transformation as a nonsingular 2 x 2 complex matrix acting on
/// projective pairs; scalar multiples act identically.
#[derive(Debug, Clone, Copy)]
pub struct Moebius {
    /// Row-major entries `[[m00, m01], [m10, m11]]`: the map
    /// `z -> (m00 z + m01) / (m10 z + m11)`.
    pub m: [[Complex64; 2]; 2],
}

impl Moebius {
    pub fn identity() -> Self {
        let zero = c(0.0, 0.0);
        Moebius {
            m: [[ONE, zero], [zero, ONE]],
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Matrix-vector action on a projective pair, without normalization.
    pub fn apply_raw(&self, p: &SpherePoint) -> SpherePoint {
        SpherePoint {
            a: self.m[0][0] * p.a + self.m[0][1] * p.b,
            b: self.m[1][0] * p.a + self.m[1][1] * p.b,
        }
    }

    /// Image of a point, renormalized.
    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        self.apply_raw(p).normalized()
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let a = &self.m;
        let b = &other.m;
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Moebius { m: out }
    }

    /// True inverse (adjugate over determinant).
    pub fn inverse(&self) -> Result<Moebius> {
        let d = self.det();
        if d.norm() <= COINCIDENCE_TOL {
            return Err(Error::SingularMatrix {
                context: "inverting a Moebius transformation".into(),
                det: d.norm(),
            });
        }
        Ok(Moebius {
            m: [
                [self.m[1][1] / d, -self.m[0][1] / d],
                [-self.m[1][0] / d, self.m[0][0] / d],
            ],
        })
    }

    /// Rescale to determinant one using the principal square root; the other
    /// `SL(2, C)` lift is the negative of the returned matrix.
    pub fn sl2_normalized(&self) -> Result<Moebius> {
        let d = self.det();
        if d.norm() <= COINCIDENCE_TOL {
            return Err(Error::SingularMatrix {
                context: "normalizing a Moebius transformation to unit determinant".into(),
                det: d.norm(),
            });
        }
        let s = d.sqrt();
        Ok(Moebius {
            m: [
                [self.m[0][0] / s, self.m[0][1] / s],
                [self.m[1][0] / s, self.m[1][1] / s],
            ],
        })
    }

    /// Projective distance: `0` exactly when the two matrices are scalar
    /// multiples of each other, at most `1` in general (it is
    /// `1 - |<A, B>| / (|A| |B|)` for the Frobenius pairing).
    pub fn projective_distance(&self, other: &Moebius) -> f64 {
        let mut inner = c(0.0, 0.0);
        let mut na = 0.0;
        let mut nb = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                inner += self.m[i][j].conj() * other.m[i][j];
                na += self.m[i][j].norm_sqr();
                nb += other.m[i][j].norm_sqr();
            }
        }
        let denom = (na * nb).sqrt();
        if denom == 0.0 {
            return 1.0;
        }
        (1.0 - inner.norm() / denom).max(0.0)
    }

    /// The transformation sending `(0, 1, infinity)` to the corners of `t`,
    /// in order.
    pub fn from_base_to(t: &IdealTriple) -> Moebius {
        let (a, b, cc) = (&t.v[0], &t.v[1], &t.v[2]);
        let lambda = wedge(a, b);
        let mu = wedge(b, cc);
        Moebius {
            m: [
                [lambda * cc.a, mu * a.a],
                [lambda * cc.b, mu * a.b],
            ],
        }
    }

    /// The transformation sending the corners of `src` to the corners of
    /// `dst`, in order.
    pub fn taking(src: &IdealTriple, dst: &IdealTriple) -> Result<Moebius> {
        Ok(Moebius::from_base_to(dst).compose(&Moebius::from_base_to(src).inverse()?))
    }
}

/// Eigenvalue of `m` on the line `xi`, which must be fixed by `m`.
/// The defect `|m(xi) ^ xi|` relative to the vector sizes must stay below
/// [`FIXED_POINT_TOL`].
pub fn eigenvalue_at(m: &Moebius, xi: &SpherePoint) -> Result<Complex64> {
    let xin = xi.normalized();
    let w = m.apply_raw(&xin);
    let scale = w.a.norm().max(w.b.norm());
    if scale <= COINCIDENCE_TOL {
        return Err(Error::SingularMatrix {
            context: "eigenvalue at a fixed point (image vector vanished)".into(),
            det: m.det().norm(),
        });
    }
    let defect = wedge(&w, &xin).norm() / scale;
    if defect > FIXED_POINT_TOL {
        return Err(Error::Degenerate(format!(
            "the transformation does not fix the expected point (defect {defect:.3e})"
        )));
    }
    // Read the eigenvalue off the larger coordinate of xi.
    if xin.a.norm() >= xin.b.norm() {
        Ok(w.a / xin.a)
    } else {
        Ok(w.b / xin.b)
    }
}

// ---------------------------------------------------------------------------
// Developing
// ---------------------------------------------------------------------------

/// Fourth point of the crossing quad: given the corners `v` of a face and a
/// side slot `s`, returns `(z_a, z_b, z_c, z_d)` where `(z_a, z_b)` are the
/// side's endpoints, `z_c` is the remaining corner and `z_d` solves
/// `cr(z_a, z_b; z_c, z_d) = -x`.
fn cross_side(v: &[SpherePoint; 3], s: usize, x: Complex64) -> Result<[SpherePoint; 4]> {
    if x.norm() == 0.0 || !x.is_finite() {
        return Err(Error::Weights(
            "developing requires finite nonzero edge weights".into(),
        ));
    }
    let z_a = v[(s + 2) % 3];
    let z_b = v[s];
    let z_c = v[(s + 1) % 3];
    let big_a = wedge(&z_a, &z_c);
    let big_b = -x * wedge(&z_b, &z_c);
    let z_d = SpherePoint {
        a: big_a * z_b.a - big_b * z_a.a,
        b: big_a * z_b.b - big_b * z_a.b,
    }
    .normalized();
    if !z_d.is_valid() || same_point(&z_d, &z_a) || same_point(&z_d, &z_b) {
        return Err(Error::Degenerate(format!(
            "attached vertex collapses onto the crossed side (weight {x})"
        )));
    }
    if same_point(&z_d, &z_c) {
        return Err(Error::Degenerate(format!(
            "attached vertex coincides with the opposite corner (weight {x} is on the singular locus)"
        )));
    }
    Ok([z_a, z_b, z_c, z_d])
}

/// One developing state: a face of the triangulation together with the
/// developed positions of its three corners.
#[derive(Debug, Clone, Copy)]
struct DevState {
    face: usize,
    v: [SpherePoint; 3],
}

impl DevState {
    fn base(face: usize) -> Self {
        DevState {
            face,
            v: IdealTriple::base().v,
        }
    }

    /// Cross the side at `slot` of the current face into the partner face.
    fn step(&self, t: &Triangulation, x: &[Complex64], slot: usize) -> Result<DevState> {
        let e = t.face(self.face)[slot];
        let (g, s2) = t.opposite_side(e, (self.face, slot)).ok_or_else(|| {
            Error::Surface(format!(
                "cannot develop across boundary edge {e} (side {slot} of face {})",
                self.face
            ))
        })?;
        let [z_a, z_b, _, z_d] = cross_side(&self.v, slot, x[e])?;
        let mut v = [SpherePoint::infinity(); 3];
        v[s2] = z_a;
        v[(s2 + 2) % 3] = z_b;
        v[(s2 + 1) % 3] = z_d;
        Ok(DevState { face: g, v })
    }
}

/// Resolve an edge label to the unique slot it occupies in face `f`.
fn slot_of_edge(t: &Triangulation, f: usize, e: usize) -> Result<usize> {
    let face = t.face(f);
    let hits: Vec<usize> = (0..3).filter(|&s| face[s] == e).collect();
    match hits.len() {
        1 => Ok(hits[0]),
        0 => Err(Error::Surface(format!(
            "edge {e} does not bound face {f} (sides are {face:?})"
        ))),
        _ => Err(Error::Surface(format!(
            "edge {e} bounds face {f} twice; the crossing is ambiguous"
        ))),
    }
}

fn check_weights(t: &Triangulation, x: &[Complex64]) -> Result<()> {
    if x.len() != t.n_edges() {
        return Err(Error::Weights(format!(
            "{} weights supplied for {} edges",
            x.len(),
            t.n_edges()
        )));
    }
    for (e, w) in x.iter().enumerate() {
        if w.norm() == 0.0 || !w.is_finite() {
            return Err(Error::Weights(format!(
                "edge {e} has weight {w}, which is zero or not finite"
            )));
        }
    }
    Ok(())
}

/// Develop a dual path out of face 0, crossing the listed edges in order.
/// Each edge must bound the current face exactly once.  Returns the final
/// face and the developed positions of its corners.
pub fn develop(t: &Triangulation, x: &[Complex64], edges: &[usize]) -> Result<(usize, IdealTriple)> {
    check_weights(t, x)?;
    let mut state = DevState::base(0);
    for &e in edges {
        if e >= t.n_edges() {
            return Err(Error::Surface(format!(
                "edge {e} out of range for a triangulation with {} edges",
                t.n_edges()
            )));
        }
        let slot = slot_of_edge(t, state.face, e)?;
        state = state.step(t, x, slot)?;
    }
    Ok((state.face, IdealTriple::new(state.v)?))
}

/// Holonomy of a closed dual loop out of face 0: the Moebius transformation
/// carrying the base placement of face 0 to its placement after developing
/// around the loop.  Concatenation of loops multiplies holonomies.
pub fn holonomy(t: &Triangulation, x: &[Complex64], loop_edges: &[usize]) -> Result<Moebius> {
    let (face, triple) = develop(t, x, loop_edges)?;
    if face != 0 {
        return Err(Error::Surface(format!(
            "the edge sequence is not a closed loop: developing ended at face {face}, not face 0"
        )));
    }
    Ok(Moebius::from_base_to(&triple))
}

/// Holonomy of the walk around one puncture, developed in the frame that
/// places the walk's first face at `(0, 1, infinity)`.  The fixed point of
/// the result is the corner `p.corners[0]` of that placement.
pub fn puncture_holonomy(t: &Triangulation, x: &[Complex64], p: &Puncture) -> Result<Moebius> {
    check_weights(t, x)?;
    if !p.closed {
        return Err(Error::Surface(
            "boundary punctures have no closed peripheral loop".into(),
        ));
    }
    let f0 = p.corners[0].0;
    let mut state = DevState::base(f0);
    for &slot_in in p.crossed_slots.iter() {
        // crossed_slots[k] is a slot of the face the walk sits in at step k,
        // which is exactly state.face as the walk progresses.
        state = state.step(t, x, slot_in)?;
    }
    if state.face != f0 {
        return Err(Error::Surface(format!(
            "puncture walk did not close up (ended at face {}, started at face {f0})",
            state.face
        )));
    }
    Ok(Moebius::from_base_to(&IdealTriple::new(state.v)?))
}

/// Squared peripheral eigenvalue of one puncture, read off the developed
/// holonomy, together with its combinatorial value (the inverse of the
/// product of crossed weights) and their relative mismatch.
#[derive(Debug, Clone, Serialize)]
pub struct PunctureEigenvalue {
    /// `a^2` from the derivative of the peripheral Moebius map at its fixed
    /// point.
    pub a_sq: Complex64,
    /// The same quantity computed combinatorially from the crossed weights.
    pub combinatorial: Complex64,
    /// Relative difference between the two.
    pub residual: f64,
}

/// Compare the geometric and combinatorial squared eigenvalues at a puncture.
pub fn puncture_eigenvalue(
    t: &Triangulation,
    x: &[Complex64],
    p: &Puncture,
) -> Result<PunctureEigenvalue> {
    let m = puncture_holonomy(t, x, p)?;
    // The walk starts at corner (f0, c0) and every crossed triangle keeps
    // that vertex, so the developed walk fixes the base corner c0.
    let xi = IdealTriple::base().v[p.corners[0].1];
    let kappa = eigenvalue_at(&m, &xi)?;
    let a_sq = m.det() / (kappa * kappa);
    let comb = transport::puncture_eigenvalue_sq(x, p);
    let residual = (a_sq - comb).norm() / comb.norm().max(1.0);
    Ok(PunctureEigenvalue {
        a_sq,
        combinatorial: comb,
        residual,
    })
}

// ---------------------------------------------------------------------------
// Weight roundtrip
// ---------------------------------------------------------------------------

/// Recomputed weights from the developed geometry.
#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    /// Per-edge recomputed weight: for interior edges, `-cr(z_a, z_b; z_c, z_d)`
    /// over the developed crossing quad; boundary edges carry no quad and are
    /// copied through.
    pub weights: Vec<Complex64>,
    /// Largest relative drift over the interior edges.
    pub max_residual: f64,
}

/// Develop across every interior edge and recompute its weight from the four
/// developed vertices via the cross-ratio; the drift against the input
/// weights measures the numerical consistency of the developing rules.
pub fn roundtrip_weights(t: &Triangulation, x: &[Complex64]) -> Result<RoundtripReport> {
    check_weights(t, x)?;
    let mut weights = x.to_vec();
    let mut max_residual: f64 = 0.0;
    for e in 0..t.n_edges() {
        if !t.is_interior(e) {
            continue;
        }
        let (f, s) = t.sides(e)[0];
        let state = DevState::base(f);
        let [z_a, z_b, z_c, z_d] = cross_side(&state.v, s, x[e])?;
        let rec = -cross_ratio(&z_a, &z_b, &z_c, &z_d)?;
        let residual = (rec - x[e]).norm() / x[e].norm().max(1.0);
        weights[e] = rec;
        max_residual = max_residual.max(residual);
    }
    Ok(RoundtripReport {
        weights,
        max_residual,
    })
}

// ---------------------------------------------------------------------------
// Geometric flip check
// ---------------------------------------------------------------------------

/// One edge of the flipped square, with its transported and geometrically
/// recomputed weights.
#[derive(Debug, Clone, Serialize)]
pub struct FlipGeometricRow {
    pub edge: usize,
    pub transported: Complex64,
    pub geometric: Complex64,
    pub residual: f64,
}

/// Comparison of the rational coordinate change at a diagonal with the
/// cross-ratios of the developed quadrilateral.
#[derive(Debug, Clone, Serialize)]
pub struct FlipGeometricReport {
    pub rows: Vec<FlipGeometricRow>,
    pub max_residual: f64,
}

/// Check the flip formulas geometrically at diagonal `d`.  Develops the
/// square's four vertices, recomputes the new diagonal weight as the
/// cross-ratio over the opposite diagonal, and recomputes each side weight
/// from the attached far vertex of its outer triangle (which the flip does
/// not move).  Requires the five edges of the square to be pairwise
/// distinct, so each side carries a single unambiguous factor.
pub fn flip_geometric(t: &Triangulation, x: &[Complex64], d: usize) -> Result<FlipGeometricReport> {
    check_weights(t, x)?;
    let (a_face, alpha, _b_face, _beta, [p, q, r, s]) = t.flip_square(d)?;
    let mut labels = vec![d, p, q, r, s];
    labels.sort_unstable();
    labels.dedup();
    if labels.len() != 5 {
        return Err(Error::Surface(format!(
            "the square at edge {d} has repeated sides; per-side geometric factors are ambiguous"
        )));
    }
    let transported = transport::flip_weights(t, x, d)?;

    // Develop face a at the base placement and cross the diagonal: the quad
    // is z_b -P- z_c -Q- z_a -R- z_d -S- z_b with diagonal z_a - z_b.
    let state = DevState::base(a_face);
    let [z_a, z_b, z_c, z_d] = cross_side(&state.v, alpha, x[d])?;

    // Far vertices of the four outer triangles, attached from the original
    // faces; the flip moves neither the quad nor these four points.
    // P and Q are sides of face a (slots alpha+1, alpha+2); R and S are
    // sides of face b, whose developed corners are w[beta] = z_a,
    // w[beta+1] = z_d, w[beta+2] = z_b.
    let [_, _, _, zeta_p] = cross_side(&state.v, (alpha + 1) % 3, x[p])?;
    let [_, _, _, zeta_q] = cross_side(&state.v, (alpha + 2) % 3, x[q])?;
    let face_b = [z_a, z_d, z_b]; // at slots (beta, beta+1, beta+2), rebased
    let [_, _, _, zeta_r] = cross_side(&face_b, 1, x[r])?;
    let [_, _, _, zeta_s] = cross_side(&face_b, 2, x[s])?;

    // New diagonal: cross from the flipped face [d, Q, R], whose corners are
    // (z_c, z_a, z_d); the far point is the quad's fourth vertex z_b.
    let geo_d = -cross_ratio(&z_d, &z_c, &z_a, &z_b)?;
    // Sides keep their endpoints; only the inner apex changes across the
    // flip (old apex -> opposite corner of the new inner triangle).
    let geo_p = -cross_ratio(&z_b, &z_c, &z_d, &zeta_p)?;
    let geo_q = -cross_ratio(&z_c, &z_a, &z_d, &zeta_q)?;
    let geo_r = -cross_ratio(&z_a, &z_d, &z_c, &zeta_r)?;
    let geo_s = -cross_ratio(&z_d, &z_b, &z_c, &zeta_s)?;

    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (edge, geometric) in [(d, geo_d), (p, geo_p), (q, geo_q), (r, geo_r), (s, geo_s)] {
        let tr = transported[edge];
        let residual = (geometric - tr).norm() / tr.norm().max(1.0);
        max_residual = max_residual.max(residual);
        rows.push(FlipGeometricRow {
            edge,
            transported: tr,
            geometric,
            residual,
        });
    }
    Ok(FlipGeometricReport { rows, max_residual })
}

// ---------------------------------------------------------------------------
// Total peripheral load
// ---------------------------------------------------------------------------

/// Result of the signed total-load identity check.
#[derive(Debug, Clone, Serialize)]
pub struct TotalLoadReport {
    /// Interior edges outside the dual spanning tree: one free generator of
    /// the surface group per entry, and one lift sign slot per entry.
    pub generator_edges: Vec<usize>,
    /// Peripheral eigenvalue `a_k` per puncture (punctures in the order
    /// reported by the triangulation), for the chosen lift.
    pub eigenvalues: Vec<Complex64>,
    /// The signed product `(-1)^p * a_1^{-1} ... a_p^{-1}`.
    pub product: Complex64,
    /// The total load `x_1 ... x_n`.
    pub load: Complex64,
    /// Relative difference between `product` and `load`.
    pub residual: f64,
    /// Relative difference of the lift-free squared identity
    /// `a_1^{-2} ... a_p^{-2} = (x_1 ... x_n)^2`.
    pub squared_residual: f64,
}

/// Verify the signed total-load identity: over a surface without boundary,
/// the product of all edge weights equals `(-1)^p` times the product of the
/// inverse peripheral eigenvalues of any `SL(2, C)` lift of the holonomy.
///
/// Lifts are realized concretely: a dual spanning tree is fixed, each
/// remaining interior edge contributes one deck generator with a
/// unit-determinant matrix, and `lift_signs` (one sign per generator, all
/// `+1` when `None`) flips chosen generators to the other lift.  Peripheral
/// walks are then read as words in these generators.  The identity holds for
/// every sign choice; the squared identity is lift-free.
pub fn total_load_check(
    t: &Triangulation,
    x: &[Complex64],
    lift_signs: Option<&[i32]>,
) -> Result<TotalLoadReport> {
    check_weights(t, x)?;
    let punctures = t.punctures();
    if punctures.iter().any(|p| !p.closed) || (0..t.n_edges()).any(|e| t.is_boundary(e)) {
        return Err(Error::Surface(
            "the total load identity needs a surface without boundary".into(),
        ));
    }
    if t.components().len() != 1 {
        return Err(Error::Surface(
            "the total load identity is checked one connected surface at a time".into(),
        ));
    }

    // Dual spanning tree by breadth-first search over faces; canonical tiles
    // develop each face once along its tree path.
    let m = t.m();
    let mut tiles: Vec<Option<DevState>> = vec![None; m];
    tiles[0] = Some(DevState::base(0));
    let mut tree_edge = vec![false; t.n_edges()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let state = tiles[f].expect("queued faces have tiles");
        for slot in 0..3 {
            let e = t.face(f)[slot];
            if let Some((g, _)) = t.opposite_side(e, (f, slot)) {
                if tiles[g].is_none() {
                    tree_edge[e] = true;
                    tiles[g] = Some(state.step(t, x, slot)?);
                    queue.push_back(g);
                }
            }
        }
    }

    // Deck generator per non-tree interior edge: the unit-determinant map
    // carrying the canonical tile of the far face onto the tile reached by
    // crossing the edge from the canonical tile of its first side.
    let mut generator_edges = Vec::new();
    let mut generators: Vec<Option<Moebius>> = vec![None; t.n_edges()];
    for e in 0..t.n_edges() {
        if tree_edge[e] || !t.is_interior(e) {
            continue;
        }
        let (f, s) = t.sides(e)[0];
        let tile_f = tiles[f].expect("connected surface: every face has a tile");
        let crossed = tile_f.step(t, x, s)?;
        let tile_g = tiles[crossed.face].expect("connected surface: every face has a tile");
        let d_e = Moebius::taking(&IdealTriple::new(tile_g.v)?, &IdealTriple::new(crossed.v)?)?
            .sl2_normalized()?;
        generator_edges.push(e);
        generators[e] = Some(d_e);
    }

    let signs: Vec<i32> = match lift_signs {
        None => vec![1; generator_edges.len()],
        Some(s) => {
            if s.len() != generator_edges.len() {
                return Err(Error::Parse(format!(
                    "{} lift signs supplied for {} free generators",
                    s.len(),
                    generator_edges.len()
                )));
            }
            if s.iter().any(|&v| v != 1 && v != -1) {
                return Err(Error::Parse("lift signs must be +1 or -1".into()));
            }
            s.to_vec()
        }
    };
    let minus_one = c(-1.0, 0.0);
    for (k, &e) in generator_edges.iter().enumerate() {
        if signs[k] == -1 {
            let g = generators[e].as_mut().expect("generator was just built");
            for row in g.m.iter_mut() {
                for entry in row.iter_mut() {
                    *entry *= minus_one;
                }
            }
        }
    }

    // Read each puncture walk as a word in the deck generators: tree
    // crossings contribute nothing, a non-tree edge contributes the
    // generator when crossed from its first side and the inverse otherwise.
    let mut eigenvalues = Vec::new();
    let mut product = if punctures.len() % 2 == 1 { minus_one } else { ONE };
    let mut squared = ONE;
    for p in &punctures {
        let mut w = Moebius::identity();
        for (k, &e) in p.crossed_edges.iter().enumerate() {
            if tree_edge[e] {
                continue;
            }
            let side = (p.corners[k].0, p.crossed_slots[k]);
            let g = generators[e].as_ref().expect("interior non-tree edge");
            let letter = if t.sides(e)[0] == side { *g } else { g.inverse()? };
            w = w.compose(&letter);
        }
        let f0 = p.corners[0].0;
        let xi = tiles[f0].expect("tile exists").v[p.corners[0].1];
        let kappa = eigenvalue_at(&w, &xi)?;
        // Freeze: the walk runs clockwise around the puncture, so the
        // counterclockwise peripheral eigenvalue is the inverse of the
        // eigenvalue of the walk word at the fixed corner.
        let a = kappa.inv();
        eigenvalues.push(a);
        product *= a.inv();
        squared *= a * a;
    }

    let load = transport::peripheral_load(x);
    let residual = (product - load).norm() / load.norm().max(1.0);
    let load_sq = load * load;
    let squared_residual = (squared.inv() - load_sq).norm() / load_sq.norm().max(1.0);
    Ok(TotalLoadReport {
        generator_edges,
        eigenvalues,
        product,
        load,
        residual,
        squared_residual,
    })
}

// ---------------------------------------------------------------------------
