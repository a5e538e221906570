//! Ideal triangulations of punctured surfaces as labeled face/edge tables.
//!
//! A triangulation is stored as `m` triangular faces, each listing the labels
//! of its three sides in clockwise order (slots 0, 1, 2).  An edge label that
//! appears on two sides is an interior edge; a label that appears once is a
//! boundary edge.  All gluing data (the side involution, puncture classes,
//! the commutation exponents sigma) is derived from this table.
//!
//! Conventions fixed here and relied on everywhere else:
//! * Faces list their sides clockwise.  The corner between consecutive slots
//!   `s` and `s+1` of a face contributes `+1` to `a[edge(s)][edge(s+1)]`, and
//!   `sigma[i][j] = a[i][j] - a[j][i]`.  For a single triangle this gives
//!   `sigma[0][1] = sigma[1][2] = sigma[2][0] = +1`.
//! * Corner `c` of a face is the vertex between sides `c` and `c+1`.  Side `s`
//!   therefore has endpoints at corners `s-1` and `s`.  Gluing side `(f, s)`
//!   to `(g, s')` identifies corner `(f, s-1)` with `(g, s')` and corner
//!   `(f, s)` with `(g, s'-1)` (orientation-reversing on the shared arc).
//! * A flip at an interior edge `d` lying on two distinct faces `a` (slot
//!   alpha) and `b` (slot beta) keeps the label `d` for the new diagonal and
//!   rewrites the faces as `a <- [d, Q, R]`, `b <- [d, S, P]`, where
//!   `P = a[alpha+1]`, `Q = a[alpha+2]`, `R = b[beta+1]`, `S = b[beta+2]`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ideal triangulation: faces with clockwise slot-ordered edge labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    faces: Vec<[usize; 3]>,
    #[serde(skip)]
    n_edges: usize,
    /// Per edge, the (face, slot) pairs carrying it, in (face, slot) scan
    /// order.  Length 1 for boundary edges, 2 for interior edges.
    #[serde(skip)]
    sides: Vec<Vec<(usize, usize)>>,
}

/// One puncture: an equivalence class of face corners, with the dual walk
/// around it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Puncture {
    /// Corners `(face, corner)` in walk order.  For a closed puncture the walk
    /// is a cycle; for a puncture on the boundary it is an arc.
    pub corners: Vec<(usize, usize)>,
    /// Edges crossed between consecutive corners of the walk (one fewer entry
    /// than `corners` for an arc, equal length for a closed cycle).
    pub crossed_edges: Vec<usize>,
    /// Slots crossed, aligned with `crossed_edges`: entry k is the slot of
    /// `corners[k].0` whose edge is `crossed_edges[k]`.
    pub crossed_slots: Vec<usize>,
    /// Whether the walk closes up (puncture in the interior of the surface).
    pub closed: bool,
}

/// Validation summary for a triangulation.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub faces: usize,
    pub edges: usize,
    pub boundary_edges: usize,
    pub interior_edges: usize,
    pub punctures: usize,
    /// Euler characteristic of the compactified surface (punctures filled).
    pub euler_compactified: i64,
    /// Euler characteristic of the punctured surface itself.
    pub euler_punctured: i64,
    /// Connected components as sorted lists of face indices.
    pub components: Vec<Vec<usize>>,
}

/// A labeled isomorphism between two triangulations: `a.faces[j]` equals
/// `rotate(b.faces[perm[j]], rot[j])`, where `rotate(f, r)[s] = f[(s+r) % 3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub perm: Vec<usize>,
    pub rot: Vec<usize>,
}

/// Result of splitting a triangulation along interior edges: for every split
/// edge, the original label stays on its first-occurrence side and the listed
/// fresh label is assigned to the second side.
#[derive(Debug, Clone, Serialize)]
pub struct SplitMap {
    /// `(original_edge, kept_label, fresh_label)` per split edge.
    pub split: Vec<(usize, usize, usize)>,
}

impl Triangulation {
    /// Build a triangulation from its face table.  Edge labels must be
    /// `0..n` for some `n`, each used once (boundary) or twice (interior).
    pub fn from_faces(faces: Vec<[usize; 3]>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::Surface("a triangulation needs at least one face".into()));
        }
        let max_label = faces.iter().flatten().copied().max().unwrap();
        let n_edges = max_label + 1;
        let mut sides: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_edges];
        for (f, face) in faces.iter().enumerate() {
            for (s, &e) in face.iter().enumerate() {
                sides[e].push((f, s));
            }
        }
        for (e, occ) in sides.iter().enumerate() {
            match occ.len() {
                0 => {
                    return Err(Error::Surface(format!(
                        "edge labels must be contiguous: label {e} is unused while {max_label} is used"
                    )))
                }
                1 | 2 => {}
                k => {
                    return Err(Error::Surface(format!(
                        "edge {e} appears on {k} sides; an edge may bound at most two sides"
                    )))
                }
            }
        }
        let t = Triangulation { faces, n_edges, sides };
        // Defensive sanity: m - n < 0 holds for every valid table (each face
        // contributes three side slots and each edge absorbs at most two).
        debug_assert!((t.faces.len() as i64) - (t.n_edges as i64) < 0);
        Ok(t)
    }

    /// Rebuild derived tables after deserialization.
    pub fn rebuild(faces: Vec<[usize; 3]>) -> Result<Self> {
        Self::from_faces(faces)
    }

    pub fn m(&self) -> usize {
        self.faces.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face(&self, j: usize) -> [usize; 3] {
        self.faces[j]
    }

    /// The (face, slot) occurrences of edge `e`, in scan order.
    pub fn sides(&self, e: usize) -> &[(usize, usize)] {
        &self.sides[e]
    }

    pub fn is_boundary(&self, e: usize) -> bool {
        self.sides[e].len() == 1
    }

    pub fn is_interior(&self, e: usize) -> bool {
        self.sides[e].len() == 2
    }

    /// Interior edge whose two sides lie on the same face.
    pub fn is_self_folded(&self, e: usize) -> bool {
        self.sides[e].len() == 2 && self.sides[e][0].0 == self.sides[e][1].0
    }

    /// The other side of interior edge `e`, given one of its sides.
    pub fn opposite_side(&self, e: usize, side: (usize, usize)) -> Option<(usize, usize)> {
        let occ = &self.sides[e];
        if occ.len() != 2 {
            return None;
        }
        if occ[0] == side {
            Some(occ[1])
        } else if occ[1] == side {
            Some(occ[0])
        } else {
            None
        }
    }

    /// Commutation exponents derived from corner counts: the corner between
    /// slots `s` and `s+1` of each face increments `a[e(s)][e(s+1)]`, and
    /// `sigma[i][j] = a[i][j] - a[j][i]`.
    pub fn sigma_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_edges;
        let mut a = vec![vec![0i64; n]; n];
        for face in &self.faces {
            for s in 0..3 {
                let i = face[s];
                let j = face[(s + 1) % 3];
                a[i][j] += 1;
            }
        }
        let mut sigma = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                sigma[i][j] = a[i][j] - a[j][i];
            }
        }
        sigma
    }

    /// Connected components of the face-adjacency (dual) graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.m();
        let mut seen = vec![false; m];
        let mut comps = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut comp = vec![];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(f) = queue.pop_front() {
                comp.push(f);
                for &e in &self.faces[f] {
                    for &(g, _) in &self.sides[e] {
                        if !seen[g] {
                            seen[g] = true;
                            queue.push_back(g);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Walk the corner classes around every puncture.
    ///
    /// From corner `(f, c)` the walk crosses side `(f, c+1)`; if that side is
    /// glued to `(g, s')` the walk arrives at corner `(g, s')`.  Arcs that hit
    /// a boundary side are extended backwards from the start corner (the
    /// backward step from `(f, c)` crosses side `(f, c)` and arrives at
    /// `(g, s'-1)` for its partner `(g, s')`).
    pub fn punctures(&self) -> Vec<Puncture> {
        let m = self.m();
        let mut visited = vec![[false; 3]; m];
        let mut result = Vec::new();
        for f0 in 0..m {
            for c0 in 0..3 {
                if visited[f0][c0] {
                    continue;
                }
                // Walk forward from (f0, c0).
                let mut corners = vec![(f0, c0)];
                let mut crossed_edges = Vec::new();
                let mut crossed_slots = Vec::new();
                let mut closed = false;
                let (mut f, mut c) = (f0, c0);
                loop {
                    let s = (c + 1) % 3;
                    let e = self.faces[f][s];
                    match self.opposite_side(e, (f, s)) {
                        None => break, // boundary: forward arc ends
                        Some((g, sp)) => {
                            crossed_edges.push(e);
                            crossed_slots.push(s);
                            if (g, sp) == (f0, c0) {
                                closed = true;
                                break;
                            }
                            f = g;
                            c = sp;
                            corners.push((f, c));
                        }
                    }
                }
                if !closed {
                    // Extend backwards from the start corner.
                    let (mut f, mut c) = (f0, c0);
                    loop {
                        let s = c;
                        let e = self.faces[f][s];
                        match self.opposite_side(e, (f, s)) {
                            None => break,
                            Some((g, sp)) => {
                                let cp = (sp + 2) % 3; // s' - 1 mod 3
                                corners.insert(0, (g, cp));
                                crossed_edges.insert(0, e);
                                crossed_slots.insert(0, sp);
                                f = g;
                                c = cp;
                            }
                        }
                    }
                    // crossed_slots entries for the backward extension refer to
                    // the face we arrive at; rebuild them coherently forward.
                    crossed_slots.clear();
                    for k in 0..crossed_edges.len() {
                        let (cf, cc) = corners[k];
                        crossed_slots.push((cc + 1) % 3);
                        debug_assert_eq!(self.faces[cf][(cc + 1) % 3], crossed_edges[k]);
                    }
                }
                for &(vf, vc) in &corners {
                    visited[vf][vc] = true;
                }
                result.push(Puncture { corners, crossed_edges, crossed_slots, closed });
            }
        }
        // Deterministic order: by smallest corner.
        result.sort_by_key(|p| *p.corners.iter().min().unwrap());
        result
    }

    /// Validate and summarize.
    pub fn validate(&self) -> SurfaceReport {
        let punct = self.punctures();
        let p = punct.len() as i64;
        let m = self.m() as i64;
        let n = self.n_edges as i64;
        let boundary = (0..self.n_edges).filter(|&e| self.is_boundary(e)).count();
        SurfaceReport {
            faces: self.m(),
            edges: self.n_edges,
            boundary_edges: boundary,
            interior_edges: self.n_edges - boundary,
            punctures: punct.len(),
            euler_compactified: m - n + p,
            euler_punctured: m - n,
            components: self.components(),
        }
    }

    /// The square of faces and role edges involved in flipping `d`:
    /// `(a, alpha, b, beta, [P, Q, R, S])`.
    pub fn flip_square(&self, d: usize) -> Result<(usize, usize, usize, usize, [usize; 4])> {
        if d >= self.n_edges {
            return Err(Error::Surface(format!("edge {d} out of range (n = {})", self.n_edges)));
        }
        if self.is_boundary(d) {
            return Err(Error::NotFlippable { edge: d, reason: "boundary edge".into() });
        }
        let (a, alpha) = self.sides[d][0];
        let (b, beta) = self.sides[d][1];
        if a == b {
            return Err(Error::NotFlippable {
                edge: d,
                reason: "both sides lie on the same face (folded edge)".into(),
            });
        }
        let p = self.faces[a][(alpha + 1) % 3];
        let q = self.faces[a][(alpha + 2) % 3];
        let r = self.faces[b][(beta + 1) % 3];
        let s = self.faces[b][(beta + 2) % 3];
        Ok((a, alpha, b, beta, [p, q, r, s]))
    }

    /// Diagonal exchange at interior edge `d` (label preserved).
    pub fn flip(&self, d: usize) -> Result<Triangulation> {
        let (a, _alpha, b, _beta, [p, q, r, s]) = self.flip_square(d)?;
        let mut faces = self.faces.clone();
        faces[a] = [d, q, r];
        faces[b] = [d, s, p];
        Triangulation::from_faces(faces)
    }

    /// Split along the given interior edges.  Each split edge keeps its label
    /// on the first-occurrence side; the second side gets a fresh label.
    pub fn split(&self, edges: &[usize]) -> Result<(Triangulation, SplitMap)> {
        let set: BTreeSet<usize> = edges.iter().copied().collect();
        for &e in &set {
            if e >= self.n_edges {
                return Err(Error::Surface(format!("edge {e} out of range")));
            }
            if !self.is_interior(e) {
                return Err(Error::Surface(format!("edge {e} is a boundary edge and cannot be split")));
            }
        }
        let mut faces = self.faces.clone();
        let mut fresh = self.n_edges;
        let mut map = Vec::new();
        for &e in &set {
            let (f2, s2) = self.sides[e][1];
            faces[f2][s2] = fresh;
            map.push((e, e, fresh));
            fresh += 1;
        }
        Ok((Triangulation::from_faces(faces)?, SplitMap { split: map }))
    }

    /// Glue pairs of boundary edges.  Each pair merges to the smaller label;
    /// edge labels are then compacted.  Returns the new triangulation and the
    /// old-label -> new-label map.
    pub fn fuse(&self, pairs: &[(usize, usize)]) -> Result<(Triangulation, Vec<usize>)> {
        let mut target: Vec<usize> = (0..self.n_edges).collect();
        let mut used = BTreeSet::new();
        for &(x, y) in pairs {
            for &e in &[x, y] {
                if e >= self.n_edges {
                    return Err(Error::Surface(format!("edge {e} out of range")));
                }
                if !self.is_boundary(e) {
                    return Err(Error::Surface(format!("edge {e} is not a boundary edge; only boundary edges can be fused")));
                }
                if !used.insert(e) {
                    return Err(Error::Surface(format!("edge {e} appears in more than one fuse pair")));
                }
            }
            if x == y {
                return Err(Error::Surface(format!("cannot fuse edge {x} to itself")));
            }
            let keep = x.min(y);
            let drop = x.max(y);
            target[drop] = keep;
        }
        // Compact the surviving labels in increasing order.
        let survivors: Vec<usize> = (0..self.n_edges).filter(|&e| target[e] == e).collect();
        let mut compact = HashMap::new();
        for (new, &old) in survivors.iter().enumerate() {
            compact.insert(old, new);
        }
        let remap: Vec<usize> = (0..self.n_edges).map(|e| compact[&target[e]]).collect();
        let faces: Vec<[usize; 3]> = self
            .faces
            .iter()
            .map(|f| [remap[f[0]], remap[f[1]], remap[f[2]]])
            .collect();
        Ok((Triangulation::from_faces(faces)?, remap))
    }

    /// Rename edges by the bijection `relabel` (new label = `relabel[old]`).
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Triangulation> {
        if relabel.len() != self.n_edges {
            return Err(Error::Surface(format!(
                "relabeling has {} entries but the triangulation has {} edges",
                relabel.len(),
                self.n_edges
            )));
        }
        let mut seen = vec![false; self.n_edges];
        for &v in relabel {
            if v >= self.n_edges || seen[v] {
                return Err(Error::Surface("relabeling is not a bijection on edge labels".into()));
            }
            seen[v] = true;
        }
        let faces = self
            .faces
            .iter()
            .map(|f| [relabel[f[0]], relabel[f[1]], relabel[f[2]]])
            .collect();
        Triangulation::from_faces(faces)
    }

    /// Canonical key under face reordering and slot rotation (edge labels
    /// fixed): each face rotated to its lexicographically smallest rotation,
    /// then the faces sorted.
    pub fn canonical_key(&self) -> Vec<[usize; 3]> {
        let mut key: Vec<[usize; 3]> = self
            .faces
            .iter()
            .map(|f| {
                let rots = [
                    [f[0], f[1], f[2]],
                    [f[1], f[2], f[0]],
                    [f[2], f[0], f[1]],
                ];
                *rots.iter().min().unwrap()
            })
            .collect();
        key.sort_unstable();
        key
    }

    /// Find the lexicographically first labeled isomorphism onto `other`
    /// (same edge labels; faces may be permuted and rotated).
    pub fn labeled_isomorphism(&self, other: &Triangulation) -> Option<Alignment> {
        if self.m() != other.m() || self.n_edges != other.n_edges {
            return None;
        }
        let m = self.m();
        // candidates[j]: (k, rot) pairs with self.faces[j] = rotate(other.faces[k], rot).
        let mut candidates: Vec<Vec<(usize, usize)>> = Vec::with_capacity(m);
        for j in 0..m {
            let mut cand = Vec::new();
            for k in 0..m {
                for r in 0..3 {
                    let rotated = [
                        other.faces[k][r % 3],
                        other.faces[k][(1 + r) % 3],
                        other.faces[k][(2 + r) % 3],
                    ];
                    if rotated == self.faces[j] {
                        cand.push((k, r));
                        break; // rotations of a face are pairwise distinct
                    }
                }
            }
            if cand.is_empty() {
                return None;
            }
            candidates.push(cand);
        }
        // Backtracking search in lexicographic order of perm.
        fn search(
            j: usize,
            m: usize,
            candidates: &[Vec<(usize, usize)>],
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            rot: &mut Vec<usize>,
        ) -> bool {
            if j == m {
                return true;
            }
            for &(k, r) in &candidates[j] {
                if used[k] {
                    continue;
                }
                used[k] = true;
                perm.push(k);
                rot.push(r);
                if search(j + 1, m, candidates, used, perm, rot) {
                    return true;
                }
                used[k] = false;
                perm.pop();
                rot.pop();
            }
            false
        }
        let mut used = vec![false; m];
        let mut perm = Vec::new();
        let mut rot = Vec::new();
        if search(0, m, &candidates, &mut used, &mut perm, &mut rot) {
            Some(Alignment { perm, rot })
        } else {
            None
        }
    }

    /// Enumerate every labeled isomorphism onto `other`, in lexicographic
    /// order of the face permutation.  Triangulations whose distinct faces
    /// read the same cyclic edge word admit more than one.
    pub fn labeled_isomorphisms(&self, other: &Triangulation) -> Vec<Alignment> {
        if self.m() != other.m() || self.n_edges != other.n_edges {
            return Vec::new();
        }
        let m = self.m();
        let mut candidates: Vec<Vec<(usize, usize)>> = Vec::with_capacity(m);
        for j in 0..m {
            let mut cand = Vec::new();
            for k in 0..m {
                for r in 0..3 {
                    let rotated = [
                        other.faces[k][r % 3],
                        other.faces[k][(1 + r) % 3],
                        other.faces[k][(2 + r) % 3],
                    ];
                    if rotated == self.faces[j] {
                        cand.push((k, r));
                        break; // rotations of a face are pairwise distinct
                    }
                }
            }
            if cand.is_empty() {
                return Vec::new();
            }
            candidates.push(cand);
        }
        fn collect(
            j: usize,
            m: usize,
            candidates: &[Vec<(usize, usize)>],
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            rot: &mut Vec<usize>,
            out: &mut Vec<Alignment>,
        ) {
            if j == m {
                out.push(Alignment { perm: perm.clone(), rot: rot.clone() });
                return;
            }
            for &(k, r) in &candidates[j] {
                if used[k] {
                    continue;
                }
                used[k] = true;
                perm.push(k);
                rot.push(r);
                collect(j + 1, m, candidates, used, perm, rot, out);
                used[k] = false;
                perm.pop();
                rot.pop();
            }
        }
        let mut used = vec![false; m];
        let mut perm = Vec::new();
        let mut rot = Vec::new();
        let mut out = Vec::new();
        collect(0, m, &candidates, &mut used, &mut perm, &mut rot, &mut out);
        out
    }

    /// Breadth-first search in the flip graph for a path of edge flips
    /// carrying `self` to a triangulation labeled-isomorphic to `target`.
    pub fn flip_path(&self, target: &Triangulation, max_depth: usize) -> Result<Vec<usize>> {
        let goal = target.canonical_key();
        if self.canonical_key() == goal {
            return Ok(vec![]);
        }
        let mut visited: BTreeMap<Vec<[usize; 3]>, ()> = BTreeMap::new();
        visited.insert(self.canonical_key(), ());
        let mut queue: VecDeque<(Triangulation, Vec<usize>)> = VecDeque::new();
        queue.push_back((self.clone(), vec![]));
        while let Some((t, path)) = queue.pop_front() {
            if path.len() >= max_depth {
                continue;
            }
            for d in 0..t.n_edges {
                let Ok(next) = t.flip(d) else { continue };
                let key = next.canonical_key();
                if visited.contains_key(&key) {
                    continue;
                }
                let mut p = path.clone();
                p.push(d);
                if key == goal {
                    return Ok(p);
                }
                visited.insert(key, ());
                queue.push_back((next, p));
            }
        }
        Err(Error::Surface(format!(
            "no flip path of length <= {max_depth} found between the triangulations"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_sigma_is_cyclic_plus_one() {
        let t = fixtures::triangle();
        let sigma = t.sigma_matrix();
        assert_eq!(sigma[0][1], 1);
        assert_eq!(sigma[1][2], 1);
        assert_eq!(sigma[2][0], 1);
        assert_eq!(sigma[0][2], -1);
        for i in 0..3 {
            assert_eq!(sigma[i][i], 0);
        }
    }

    #[test]
    fn torus_sigma_has_entries_two() {
        let t = fixtures::punctured_torus();
        let sigma = t.sigma_matrix();
        assert_eq!(sigma[0][1], 2);
        assert_eq!(sigma[1][2], 2);
        assert_eq!(sigma[2][0], 2);
    }

    #[test]
    fn sigma_is_antisymmetric_on_all_fixtures() {
        for t in fixtures::all() {
            let s = t.sigma_matrix();
            let n = t.n_edges();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(s[i][j], -s[j][i], "sigma not antisymmetric at ({i},{j})");
                    assert!(s[i][j].abs() <= 2, "sigma entry out of range at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn puncture_counts_match_the_fixture_surfaces() {
        let check = |t: &Triangulation, expected: usize| {
            assert_eq!(t.punctures().len(), expected);
        };
        check(&fixtures::triangle(), 3);
        check(&fixtures::square(), 4);
        check(&fixtures::pentagon(), 5);
        check(&fixtures::hexagon(), 6);
        check(&fixtures::punctured_torus(), 1);
        check(&fixtures::four_punctured_sphere(), 4);
        check(&fixtures::monogon(), 2);
    }

    #[test]
    fn torus_puncture_walk_crosses_each_edge_twice() {
        let t = fixtures::punctured_torus();
        let p = t.punctures();
        assert_eq!(p.len(), 1);
        assert!(p[0].closed);
        assert_eq!(p[0].corners.len(), 6);
        let mut counts = [0usize; 3];
        for &e in &p[0].crossed_edges {
            counts[e] += 1;
        }
        assert_eq!(counts, [2, 2, 2]);
    }

    #[test]
    fn euler_characteristics_are_as_expected() {
        let r = fixtures::punctured_torus().validate();
        assert_eq!(r.euler_compactified, 0); // closed torus
        let r = fixtures::four_punctured_sphere().validate();
        assert_eq!(r.euler_compactified, 2); // sphere
        let r = fixtures::triangle().validate();
        assert_eq!(r.euler_compactified, 1); // disk
        let r = fixtures::monogon().validate();
        assert_eq!(r.euler_compactified, 1); // disk
    }

    #[test]
    fn square_flip_rewrites_faces_as_d_q_r_and_d_s_p() {
        let t = fixtures::square(); // faces [0,1,2], [0,3,4]
        let f = t.flip(0).unwrap();
        assert_eq!(f.faces(), &[[0, 2, 3], [0, 4, 1]]);
    }

    #[test]
    fn flipping_twice_restores_the_triangulation_up_to_face_swap() {
        let t = fixtures::square();
        let ff = t.flip(0).unwrap().flip(0).unwrap();
        // Face contents swap under the double flip; as labeled triangulations
        // they are isomorphic.
        assert_eq!(ff.canonical_key(), t.canonical_key());
        let al = t.labeled_isomorphism(&ff).unwrap();
        assert_eq!(al.perm, vec![1, 0]);
    }

    #[test]
    fn boundary_and_folded_edges_are_not_flippable() {
        let t = fixtures::square();
        assert!(matches!(t.flip(1), Err(Error::NotFlippable { .. })));
        let m = fixtures::monogon();
        assert!(matches!(m.flip(0), Err(Error::NotFlippable { .. })));
    }

    #[test]
    fn pentagon_five_flip_cycle_returns_with_diagonals_swapped() {
        // Flipping the older diagonal five times returns to the starting
        // triangulation with the two diagonal labels exchanged.
        let t = fixtures::pentagon();
        let path = [2usize, 4, 2, 4, 2];
        let mut cur = t.clone();
        for &d in &path {
            cur = cur.flip(d).unwrap();
        }
        assert_eq!(cur.faces(), &[[2, 5, 6], [2, 4, 3], [4, 0, 1]]);
        let mut relabel: Vec<usize> = (0..7).collect();
        relabel[2] = 4;
        relabel[4] = 2;
        let back = cur.relabeled(&relabel).unwrap();
        assert_eq!(back.canonical_key(), t.canonical_key());
    }

    #[test]
    fn split_then_fuse_is_identity_on_labels() {
        let t = fixtures::square();
        let (s, map) = t.split(&[0]).unwrap();
        assert_eq!(map.split, vec![(0, 0, 5)]);
        assert_eq!(s.n_edges(), 6);
        assert!(s.is_boundary(0) && s.is_boundary(5));
        assert_eq!(s.components().len(), 2);
        let (f, remap) = s.fuse(&[(0, 5)]).unwrap();
        assert_eq!(f.faces(), t.faces());
        assert_eq!(remap[..5], (0..5).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn flip_path_finds_the_single_flip_between_square_triangulations() {
        let t = fixtures::square();
        let target = t.flip(0).unwrap();
        assert_eq!(t.flip_path(&target, 4).unwrap(), vec![0]);
    }

    #[test]
    fn relabeling_validates_bijectivity() {
        let t = fixtures::triangle();
        assert!(t.relabeled(&[0, 0, 1]).is_err());
        assert!(t.relabeled(&[1, 2, 0]).is_ok());
    }

    #[test]
    fn labeled_isomorphism_respects_rotation() {
        let t = Triangulation::from_faces(vec![[0, 1, 2]]).unwrap();
        let r = Triangulation::from_faces(vec![[1, 2, 0]]).unwrap();
        let al = t.labeled_isomorphism(&r).unwrap();
        assert_eq!(al.perm, vec![0]);
        assert_eq!(al.rot, vec![2]); // t.faces[0][s] = r.faces[0][(s+2)%3]
        let bad = Triangulation::from_faces(vec![[0, 2, 1]]).unwrap();
        assert!(t.labeled_isomorphism(&bad).is_none());
    }

    #[test]
    fn four_punctured_sphere_table_is_consistent() {
        let t = fixtures::four_punctured_sphere();
        let r = t.validate();
        assert_eq!(r.faces, 4);
        assert_eq!(r.edges, 6);
        assert_eq!(r.boundary_edges, 0);
        assert_eq!(r.punctures, 4);
        for p in t.punctures() {
            assert!(p.closed);
            assert_eq!(p.corners.len(), 3, "each tetrahedron vertex has three wedges");
        }
    }
}
