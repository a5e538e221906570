//! Classical (q = 1) coordinate change on edge-weight systems under
//! diagonal exchanges, and the peripheral quantities attached to punctures.
//!
//! For a flip at diagonal `d` whose square has sides `P = a[alpha+1]`,
//! `Q = a[alpha+2]` on one face and `R = b[beta+1]`, `S = b[beta+2]` on the
//! other, the weights transform as
//!
//! * `x_d' = x_d^{-1}`,
//! * sides in the `P`, `R` positions multiply by `(1 + x_d^{-1})^{-1}`,
//! * sides in the `Q`, `S` positions multiply by `(1 + x_d)`,
//!
//! and an edge appearing in several positions (identified sides of the
//! square) accumulates every factor.  These are the N-th-power shadows of
//! the quantum flip formulas; the same role assignment is used by the
//! matrix-level coordinate change, which is what ties the two layers
//! together in the cross-layer tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::surface::{Puncture, Triangulation};

/// Relative threshold below which `1 + x_d` counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Check flip genericity for diagonal weight `xd`: both `1 + x_d` and
/// `1 + x_d^{-1}` must be nonzero, which for nonzero `x_d` is the single
/// condition `x_d` away from `-1`.
pub fn check_generic(edge: usize, xd: Complex64) -> Result<()> {
    if xd.norm() == 0.0 {
        return Err(Error::Weights(format!("edge {edge} has zero weight")));
    }
    if (Complex64::new(1.0, 0.0) + xd).norm() < SINGULAR_TOL * xd.norm().max(1.0) {
        return Err(Error::SingularWeight {
            edge,
            value: format!("{xd}"),
            tol: SINGULAR_TOL,
        });
    }
    Ok(())
}

/// One diagonal exchange on a weight system.
pub fn flip_weights(t: &Triangulation, x: &[Complex64], d: usize) -> Result<Vec<Complex64>> {
    if x.len() != t.n_edges() {
        return Err(Error::Weights(format!(
            "{} weights supplied for {} edges",
            x.len(),
            t.n_edges()
        )));
    }
    let (_, _, _, _, [p, q, r, s]) = t.flip_square(d)?;
    let xd = x[d];
    check_generic(d, xd)?;
    let one = Complex64::new(1.0, 0.0);
    let minus = (one + xd.inv()).inv(); // factor for the P, R positions
    let plus = one + xd; // factor for the Q, S positions
    let mut out = x.to_vec();
    out[d] = xd.inv();
    // Apply per position so identified sides accumulate all their factors.
    out[p] *= minus;
    out[r] *= minus;
    out[q] *= plus;
    out[s] *= plus;
    Ok(out)
}

/// Transport a weight system along a flip path; returns the final weights
/// together with the intermediate triangulations (one per step, ending with
/// the final surface).
pub fn transport(
    t: &Triangulation,
    x: &[Complex64],
    path: &[usize],
) -> Result<(Triangulation, Vec<Complex64>)> {
    let mut cur_t = t.clone();
    let mut cur_x = x.to_vec();
    for (step, &d) in path.iter().enumerate() {
        cur_x = flip_weights(&cur_t, &cur_x, d).map_err(|e| match e {
            Error::SingularWeight { edge, value, tol } => Error::Weights(format!(
                "step {step} (flip at edge {edge}): singular weight {value} (tolerance {tol:.0e})"
            )),
            other => other,
        })?;
        cur_t = cur_t.flip(d)?;
    }
    Ok((cur_t, cur_x))
}

/// Total peripheral load: the product of all edge weights.
pub fn peripheral_load(x: &[Complex64]) -> Complex64 {
    x.iter().product()
}

/// Square of the peripheral eigenvalue at one puncture: the inverse of the
/// product (with multiplicity) of the weights of the edges crossed by the
/// walk around the puncture.
pub fn puncture_eigenvalue_sq(x: &[Complex64], puncture: &Puncture) -> Complex64 {
    let prod: Complex64 = puncture.crossed_edges.iter().map(|&e| x[e]).product();
    prod.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_complex::Complex64;

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * b.norm().max(1.0)
    }

    #[test]
    fn square_flip_weights_match_hand_substitution() {
        // x_d = 4: P and R multiply by (1+1/4)^{-1} = 4/5, Q and S by 5.
        let t = fixtures::square();
        let x = reals(&[4.0, 1.0, 1.0, 1.0, 1.0]);
        let out = flip_weights(&t, &x, 0).unwrap();
        let expected = reals(&[0.25, 0.8, 5.0, 0.8, 5.0]);
        for (a, b) in out.iter().zip(&expected) {
            assert!(close(*a, *b), "{out:?} vs {expected:?}");
        }
    }

    #[test]
    fn flip_weights_is_an_involution() {
        let t = fixtures::square();
        let x: Vec<Complex64> = vec![
            Complex64::new(0.3, 1.1),
            Complex64::new(-2.0, 0.4),
            Complex64::new(1.7, -0.2),
            Complex64::new(0.9, 0.9),
            Complex64::new(-0.5, -1.3),
        ];
        let t2 = t.flip(0).unwrap();
        let once = flip_weights(&t, &x, 0).unwrap();
        let twice = flip_weights(&t2, &once, 0).unwrap();
        for (a, b) in twice.iter().zip(&x) {
            assert!(close(*a, *b));
        }
    }

    #[test]
    fn torus_flip_accumulates_both_factors_per_edge() {
        let t = fixtures::punctured_torus();
        let x1 = Complex64::new(0.7, 0.4);
        let x2 = Complex64::new(-1.2, 0.5);
        let x3 = Complex64::new(2.0, -0.3);
        let out = flip_weights(&t, &[x1, x2, x3], 0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(close(out[0], x1.inv()));
        assert!(close(out[1], (one + x1.inv()).inv().powu(2) * x2));
        assert!(close(out[2], (one + x1).powu(2) * x3));
    }

    #[test]
    fn transport_preserves_the_total_product() {
        let t = fixtures::pentagon();
        let x: Vec<Complex64> = (0..7)
            .map(|k| Complex64::new(0.4 + 0.3 * k as f64, 0.2 - 0.1 * k as f64))
            .collect();
        let before = peripheral_load(&x);
        let (_, y) = transport(&t, &x, &[2, 4, 2]).unwrap();
        let after = peripheral_load(&y);
        assert!((before - after).norm() <= 1e-9 * before.norm());
    }

    #[test]
    fn pentagon_cycle_restores_weights_up_to_the_diagonal_swap() {
        // After the five-flip cycle the surface returns with edge labels 2
        // and 4 exchanged, so the weights return swapped the same way.
        let t = fixtures::pentagon();
        let x: Vec<Complex64> = (0..7)
            .map(|k| Complex64::new(1.0 + 0.2 * k as f64, 0.1 * k as f64))
            .collect();
        let (end_t, y) = transport(&t, &x, &[2, 4, 2, 4, 2]).unwrap();
        assert_eq!(end_t.faces(), &[[2, 5, 6], [2, 4, 3], [4, 0, 1]]);
        for e in 0..7 {
            let image = match e {
                2 => 4,
                4 => 2,
                other => other,
            };
            assert!(close(y[e], x[image]), "edge {e}");
        }
    }

    #[test]
    fn singular_weight_is_reported_with_step_index() {
        let t = fixtures::square();
        let x = reals(&[-1.0, 1.0, 1.0, 1.0, 1.0]);
        let err = transport(&t, &x, &[0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("step 0"), "{msg}");
    }

    #[test]
    fn peripheral_quantities_on_the_torus() {
        let t = fixtures::punctured_torus();
        let x = reals(&[1.0, 1.0, 1.0]);
        let p = t.punctures();
        assert_eq!(p.len(), 1);
        let a_sq = puncture_eigenvalue_sq(&x, &p[0]);
        assert!(close(a_sq, Complex64::new(1.0, 0.0)));

        let x = reals(&[2.0, 1.0, 1.0]);
        // The walk crosses every edge twice: product 4, eigenvalue^2 = 1/4.
        let a_sq = puncture_eigenvalue_sq(&x, &p[0]);
        assert!(close(a_sq, Complex64::new(0.25, 0.0)));
    }

    #[test]
    fn puncture_loads_multiply_to_the_squared_total_load() {
        for t in fixtures::all() {
            let x: Vec<Complex64> = (0..t.n_edges())
                .map(|k| Complex64::new(0.8 + 0.37 * k as f64, 0.21 * k as f64 - 0.4))
                .collect();
            let h = peripheral_load(&x);
            let prod: Complex64 = t
                .punctures()
                .iter()
                .map(|p| puncture_eigenvalue_sq(&x, p).inv())
                .product();
            // Only closed punctures account for every edge end twice; skip
            // surfaces with boundary for this identity.
            if t.punctures().iter().all(|p| p.closed) {
                assert!((prod - h * h).norm() <= 1e-9 * (h * h).norm());
            }
        }
    }
}
