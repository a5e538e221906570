//! Built-in triangulations used by the CLI and the test suite.
//!
//! Polygon fixtures are fans: face `j` is `[2j, 2j+1, 2j+2]` with the even
//! labels acting as diagonals between consecutive fan triangles.  The torus
//! fixture is the standard two-triangle table in which every edge is interior
//! and shared by both faces.

use crate::error::{Error, Result};
use crate::surface::Triangulation;

/// Single ideal triangle (three boundary edges, disk with three punctures).
pub fn triangle() -> Triangulation {
    Triangulation::from_faces(vec![[0, 1, 2]]).unwrap()
}

/// Square: two triangles glued along the diagonal `0`.
pub fn square() -> Triangulation {
    Triangulation::from_faces(vec![[0, 1, 2], [0, 3, 4]]).unwrap()
}

/// Pentagon fan: three triangles, interior diagonals `2` and `4`.
pub fn pentagon() -> Triangulation {
    Triangulation::from_faces(vec![[0, 1, 2], [2, 3, 4], [4, 5, 6]]).unwrap()
}

/// Hexagon fan: four triangles, interior diagonals `2`, `4`, `6`.
pub fn hexagon() -> Triangulation {
    Triangulation::from_faces(vec![[0, 1, 2], [2, 3, 4], [4, 5, 6], [6, 7, 8]]).unwrap()
}

/// Once-punctured torus: two triangles sharing all three edges.
pub fn punctured_torus() -> Triangulation {
    Triangulation::from_faces(vec![[0, 1, 2], [0, 1, 2]]).unwrap()
}

/// Four-punctured sphere: the boundary of a tetrahedron (four faces, six
/// edges, every vertex an ideal puncture).
pub fn four_punctured_sphere() -> Triangulation {
    Triangulation::from_faces(vec![[0, 1, 2], [3, 1, 4], [5, 2, 3], [4, 0, 5]]).unwrap()
}

/// Monogon with a self-folded edge: one triangle whose sides 0 and 1 are
/// glued to each other.
pub fn monogon() -> Triangulation {
    Triangulation::from_faces(vec![[0, 0, 1]]).unwrap()
}

/// All fixtures, in name order.
pub fn all() -> Vec<Triangulation> {
    vec![
        four_punctured_sphere(),
        hexagon(),
        monogon(),
        pentagon(),
        punctured_torus(),
        square(),
        triangle(),
    ]
}

/// Fixture names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "triangle",
    "square",
    "pentagon",
    "hexagon",
    "torus",
    "sphere4",
    "monogon",
];

/// Look up a fixture by CLI name.
pub fn by_name(name: &str) -> Result<Triangulation> {
    match name {
        "triangle" => Ok(triangle()),
        "square" => Ok(square()),
        "pentagon" => Ok(pentagon()),
        "hexagon" => Ok(hexagon()),
        "torus" => Ok(punctured_torus()),
        "sphere4" => Ok(four_punctured_sphere()),
        "monogon" => Ok(monogon()),
        other => Err(Error::Parse(format!(
            "unknown fixture '{other}'; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for &n in NAMES {
            by_name(n).unwrap();
        }
        assert!(by_name("heptagon").is_err());
    }

    #[test]
    fn fixture_edge_counts() {
        assert_eq!(triangle().n_edges(), 3);
        assert_eq!(square().n_edges(), 5);
        assert_eq!(pentagon().n_edges(), 7);
        assert_eq!(hexagon().n_edges(), 9);
        assert_eq!(punctured_torus().n_edges(), 3);
        assert_eq!(four_punctured_sphere().n_edges(), 6);
        assert_eq!(monogon().n_edges(), 2);
    }
}
