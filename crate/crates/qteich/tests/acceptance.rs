//! Acceptance gate: the ten verification criteria this library commits to,
//! one test — and therefore one pass/fail line — per criterion, each at its
//! stated tolerance.  Run with `--nocapture` to see the measured numbers.
//!
//! Scale: N in {2, 3, 4}, the bundled fixture surfaces (up to 6 faces), and
//! operator dimensions up to 4096.

use std::time::Instant;

use num_complex::Complex64;
use qteich::intertwine::{self};
use qteich::linalg::{self, CMat};
use qteich::qalgebra::QParams;
use qteich::rep::{classify_matrices, LocalRep};
use qteich::surface::Triangulation;
use qteich::{fixtures, holonomy, transport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIM_CAP: usize = 4096;

/// Random weights with moduli in [0.4, 2).  With `generic` set, entries are
/// re-drawn until they stay away from the singular value -1, which every
/// flip-based criterion needs; criterion 4 samples with `generic = false`.
fn random_weights(rng: &mut ChaCha8Rng, n: usize, generic: bool) -> Vec<Complex64> {
    (0..n)
        .map(|_| loop {
            let r = rng.gen_range(0.4..2.0);
            let th = rng.gen_range(0.0..std::f64::consts::TAU);
            let z = Complex64::from_polar(r, th);
            if !generic || (z + Complex64::new(1.0, 0.0)).norm() > 0.15 {
                break z;
            }
        })
        .collect()
}

/// Weights suited to pleated-surface developments: the phase stays away
/// from +/- pi so no developed quad collapses.
fn shear_bend_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = rng.gen_range(0.4..2.0);
            let phi = rng.gen_range(-2.8..2.8_f64);
            Complex64::from_polar(r, phi)
        })
        .collect()
}

fn canonical_load(params: &QParams, x: &[Complex64], k: i64) -> Complex64 {
    params.principal_nth_root(x.iter().product()) * params.omega_pow(k)
}

fn random_rep(rng: &mut ChaCha8Rng, t: &Triangulation, params: &QParams) -> LocalRep {
    let x = random_weights(rng, t.n_edges(), true);
    let k = rng.gen_range(0..params.n() as i64);
    let h = canonical_load(params, &x, k);
    LocalRep::from_edge_weights(t, params, &x, h, DIM_CAP).expect("generic representation")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn flippable_edges(t: &Triangulation) -> Vec<usize> {
    (0..t.n_edges()).filter(|&e| t.flip(e).is_ok()).collect()
}

fn interior_edges(t: &Triangulation) -> Vec<usize> {
    (0..t.n_edges()).filter(|&e| t.is_interior(e)).collect()
}

fn identity_relabel(t: &Triangulation) -> Vec<usize> {
    (0..t.n_edges()).collect()
}

/// Least-squares scalar `s` minimizing `|a - s b|_F`.
fn align_scalar(a: &CMat, b: &CMat) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            num += b[(i, j)].conj() * a[(i, j)];
            den += b[(i, j)].norm_sqr();
        }
    }
    num / den
}

/// Distance between two phases taken modulo `period`.
fn phase_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

// ---------------------------------------------------------------------------
// 1. Exchange relations on random representations
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_exchange_relations_on_random_representations() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut reps = 0usize;
    let suite: [(&str, &[usize]); 5] = [
        ("triangle", &[2, 3, 4]),
        ("square", &[2, 3, 4]),
        ("pentagon", &[2, 3, 4]),
        ("torus", &[2, 3, 4]),
        ("sphere4", &[2, 3]),
    ];
    for (name, orders) in suite {
        let t = fixtures::by_name(name).unwrap();
        let sigma = t.sigma_matrix();
        for &n in orders {
            let params = QParams::new(n, 1).unwrap();
            for _ in 0..50 {
                let rep = random_rep(&mut rng, &t, &params);
                let gens: Vec<CMat> = (0..t.n_edges()).map(|i| rep.generator(i)).collect();
                for i in 0..t.n_edges() {
                    for j in (i + 1)..t.n_edges() {
                        let ab = linalg::mul(&gens[i], &gens[j]);
                        let ba = linalg::scale(
                            &linalg::mul(&gens[j], &gens[i]),
                            params.q_pow(2 * sigma[i][j]),
                        );
                        worst = worst.max(linalg::rel_dist(&ab, &ba));
                    }
                }
                reps += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        worst <= 1e-9,
        "exchange relation residual {worst:.3e} exceeds 1e-9 over {reps} representations"
    );
    assert!(elapsed < 30.0, "relation sweep took {elapsed:.1} s (budget 30 s)");
    println!(
        "criterion 1 PASS: {reps} random representations, worst relation residual \
         {worst:.3e} (tol 1e-9), {elapsed:.1} s (budget 30 s)"
    );
}

// ---------------------------------------------------------------------------
// 2. Classification and the same-data intertwiner
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_classification_and_same_data_intertwiner() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_class = 0.0f64;
    let mut worst_load = 0.0f64;
    let mut worst_conj = 0.0f64;
    let suite: [(&str, &[usize]); 5] = [
        ("triangle", &[2, 3, 4]),
        ("square", &[2, 3, 4]),
        ("pentagon", &[2, 3, 4]),
        ("torus", &[2, 3, 4]),
        ("sphere4", &[2, 3]),
    ];
    for (name, orders) in suite {
        let t = fixtures::by_name(name).unwrap();
        let interior = interior_edges(&t);
        for &n in orders {
            let params = QParams::new(n, 1).unwrap();
            for _ in 0..5 {
                let rep = random_rep(&mut rng, &t, &params);
                // Generator N-th powers and the Weyl element must be scalar
                // to 1e-9; classify() gates both at the given tolerance.
                let class = rep.classify(1e-9).expect("scalar gates at 1e-9");
                let hn = class.h.powu(n as u32);
                let prod: Complex64 = class.x.iter().product();
                worst_load = worst_load.max(rel(hn, prod));

                // A different realization of the same (x, h): unit-root
                // rescalings with product one, then equivalence moves on
                // interior edges.
                let mut ks: Vec<i64> = (0..t.n_edges() as i64)
                    .map(|_| rng.gen_range(0..n as i64))
                    .collect();
                let balance: i64 = ks.iter().sum();
                let last = ks.last_mut().unwrap();
                *last = (*last - balance).rem_euclid(n as i64);
                let roots: Vec<Complex64> = ks.iter().map(|&k| params.omega_pow(k)).collect();
                let mut partner = rep.scale_by_roots(&roots).unwrap();
                for &e in &interior {
                    let a = Complex64::from_polar(
                        rng.gen_range(0.5..2.0),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    );
                    partner = partner.equivalence_move(e, a).unwrap();
                }
                let partner_class = partner.classify(1e-9).expect("partner classification");
                worst_class = worst_class.max(class.distance(&partner_class));

                let l = intertwine::solve_same_intertwiner(&partner, &rep)
                    .expect("same-data intertwiner");
                assert!(l.residual <= 1e-8, "{name} N={n}: residual {:.3e}", l.residual);
                for e in 0..t.n_edges() {
                    let lhs = linalg::mul(&partner.generator(e), &l.matrix);
                    let rhs = linalg::mul(&l.matrix, &rep.generator(e));
                    worst_conj = worst_conj.max(linalg::rel_dist(&lhs, &rhs));
                }
            }
        }
    }
    assert!(worst_load <= 1e-9, "h^N vs product of weights: {worst_load:.3e} > 1e-9");
    assert!(worst_class <= 1e-9, "classification mismatch {worst_class:.3e} > 1e-9");
    assert!(worst_conj <= 1e-8, "same-data intertwiner residual {worst_conj:.3e} > 1e-8");
    println!(
        "criterion 2 PASS: scalar gates at 1e-9, h^N identity {worst_load:.3e} (tol 1e-9), \
         same-(x,h) intertwiner conjugation {worst_conj:.3e} (tol 1e-8)"
    );
}

// ---------------------------------------------------------------------------
// 3. Weight transport under flips + the quantum binomial identity
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_flip_transport_commutes_with_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst_transport = 0.0f64;
    let mut worst_binomial = 0.0f64;
    let mut checked_flips = 0usize;
    let suite: [(&str, &[usize]); 5] = [
        ("square", &[2, 3, 4]),
        ("pentagon", &[2, 3, 4]),
        ("torus", &[2, 3, 4]),
        ("hexagon", &[2, 3]),
        ("sphere4", &[2, 3]),
    ];
    for (name, orders) in suite {
        let t = fixtures::by_name(name).unwrap();
        let flips = flippable_edges(&t);
        assert!(!flips.is_empty(), "{name} has no flippable edge");
        for &n in orders {
            let params = QParams::new(n, 1).unwrap();
            for &d in &flips {
                for _ in 0..20 {
                    let x = random_weights(&mut rng, t.n_edges(), true);
                    let h = canonical_load(&params, &x, rng.gen_range(0..n as i64));
                    let rep = LocalRep::from_edge_weights(&t, &params, &x, h, DIM_CAP).unwrap();
                    let step = intertwine::flip_step(&rep, d).unwrap();
                    let (t2, images) = intertwine::flip_generator_images(&rep, d).unwrap();
                    let y = transport::flip_weights(&t, &x, d).unwrap();

                    // The flipped generators, conjugated through the solved
                    // intertwiner, must classify to the transported weights.
                    let linv = linalg::inverse(&step.matrix, "acceptance flip").unwrap();
                    let conj: Vec<CMat> = images
                        .iter()
                        .map(|a| linalg::mul(&linalg::mul(&linv, a), &step.matrix))
                        .collect();
                    let class = classify_matrices(&t2, &params, &conj, 1e-8).unwrap();
                    for e in 0..t2.n_edges() {
                        worst_transport = worst_transport.max(rel(class.x[e], y[e]));
                    }
                    worst_transport = worst_transport.max(rel(class.h, h));

                    // Quantum binomial, in the form the flip images use it:
                    // the N-th power of every flipped generator image is the
                    // transported scalar weight.
                    for e in 0..t2.n_edges() {
                        let (s, r) = linalg::scalar_residual(&linalg::mat_pow(&images[e], n))
                            .expect("flip image N-th power is scalar");
                        worst_binomial = worst_binomial.max(r).max(rel(s, y[e]));
                    }
                    checked_flips += 1;
                }
            }
        }
    }

    // The identity (A + B)^N = A^N + B^N itself, on clock/shift pairs: the
    // consecutive generators of one triangle satisfy X_i X_{i+1} = q^2
    // X_{i+1} X_i with q^2 a primitive N-th root of unity.
    let t = fixtures::triangle();
    for n in [2usize, 3, 4] {
        let params = QParams::new(n, 1).unwrap();
        for _ in 0..20 {
            let rep = random_rep(&mut rng, &t, &params);
            for i in 0..3 {
                let a = rep.generator(i);
                let b = rep.generator((i + 1) % 3);
                let lhs = linalg::mat_pow(&linalg::add(&a, &b), n);
                let rhs = linalg::add(&linalg::mat_pow(&a, n), &linalg::mat_pow(&b, n));
                worst_binomial = worst_binomial.max(linalg::rel_dist(&lhs, &rhs));
            }
        }
    }

    assert!(
        worst_transport <= 1e-8,
        "transport/classification mismatch {worst_transport:.3e} > 1e-8"
    );
    assert!(worst_binomial <= 1e-9, "quantum binomial residual {worst_binomial:.3e} > 1e-9");
    println!(
        "criterion 3 PASS: {checked_flips} solved flips, classification commutes to \
         {worst_transport:.3e} (tol 1e-8), quantum binomial {worst_binomial:.3e} (tol 1e-9)"
    );
}

// ---------------------------------------------------------------------------
// 4. Rank-one null space of the square intertwining system
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_square_system_has_rank_one_null_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let t = fixtures::square();
    for n in [2usize, 3, 4] {
        let params = QParams::new(n, 1).unwrap();
        let mut passes = 0usize;
        let mut failures: Vec<(usize, bool)> = Vec::new();
        let mut worst_gap = f64::INFINITY;
        for trial in 0..200 {
            let x = random_weights(&mut rng, t.n_edges(), false);
            // Operational near-singular flag: the flipped weight sits close
            // to the singular value -1 (the library rejects the exact locus).
            let flagged = transport::check_generic(0, x[0]).is_err()
                || (x[0] + Complex64::new(1.0, 0.0)).norm() < 1e-2;
            let outcome = (|| -> qteich::Result<(f64, f64)> {
                let h = canonical_load(&params, &x, 0);
                let rep = LocalRep::from_edge_weights(&t, &params, &x, h, DIM_CAP)?;
                let (t2, images) = intertwine::flip_generator_images(&rep, 0)?;
                let y = transport::flip_weights(&t, &x, 0)?;
                let target = LocalRep::from_edge_weights(&t2, &params, &y, h, DIM_CAP)?;
                let pairs: Vec<(CMat, CMat)> = (0..t2.n_edges())
                    .map(|e| (images[e].clone(), target.generator(e)))
                    .collect();
                let stack = linalg::sylvester_stack(&pairs);
                let sv = stack
                    .singular_values()
                    .map_err(|e| qteich::Error::Degenerate(format!("SVD failed: {e:?}")))?;
                let k = sv.len();
                Ok((sv[k - 1] / sv[0], sv[k - 2] / sv[0]))
            })();
            match outcome {
                Ok((smin, snext)) if smin < 1e-8 && snext >= 1e-6 => {
                    passes += 1;
                    worst_gap = worst_gap.min(snext);
                }
                _ => failures.push((trial, flagged)),
            }
        }
        assert!(
            passes >= 198,
            "N={n}: rank-one null space in {passes}/200 trials (need >= 198)"
        );
        for (trial, flagged) in &failures {
            assert!(
                *flagged,
                "N={n}: trial {trial} failed the rank-one gate without a near-singular flag"
            );
        }
        println!(
            "criterion 4 PASS (N={n}): {passes}/200 rank-one (gap >= 1e-6, worst {worst_gap:.3e}), \
             {} flagged failures",
            failures.len()
        );
    }
}

// ---------------------------------------------------------------------------
// 5. Pentagon relation
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_pentagon_cycle_is_scalar() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let t = fixtures::pentagon();
    let path = [2usize, 4, 2, 4, 2];
    let relabel = [0usize, 1, 4, 3, 2, 5, 6];
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let params = QParams::new(n, 1).unwrap();
        for _ in 0..3 {
            let x = random_weights(&mut rng, t.n_edges(), true);
            let h = canonical_load(&params, &x, rng.gen_range(0..n as i64));
            let rep = LocalRep::from_edge_weights(&t, &params, &x, h, DIM_CAP).unwrap();
            let report = intertwine::closed_cycle(&rep, &path, &relabel).unwrap();
            worst = worst.max(report.residual);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst <= 1e-6, "pentagon off-scalar residual {worst:.3e} > 1e-6");
    assert!(elapsed < 10.0, "pentagon sweep took {elapsed:.1} s (budget 10 s)");
    println!(
        "criterion 5 PASS: five-flip composite scalar to {worst:.3e} (tol 1e-6) \
         at N=2,3 in {elapsed:.1} s (budget 10 s)"
    );
}

// ---------------------------------------------------------------------------
// 6. Roundtrip and distant-commutativity moves
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_roundtrip_and_distant_commutativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst_roundtrip = 0.0f64;

    // Flip an edge twice and close back onto the start: composite is scalar.
    for name in ["square", "torus", "hexagon"] {
        let t = fixtures::by_name(name).unwrap();
        let d = flippable_edges(&t)[0];
        for n in [2usize, 3] {
            let params = QParams::new(n, 1).unwrap();
            let rep = random_rep(&mut rng, &t, &params);
            let report = intertwine::closed_cycle(&rep, &[d, d], &identity_relabel(&t)).unwrap();
            worst_roundtrip = worst_roundtrip.max(report.residual);
        }
    }
    assert!(worst_roundtrip <= 1e-6, "roundtrip residual {worst_roundtrip:.3e} > 1e-6");

    // Two flips whose squares share no face commute (up to scalar).
    let t = fixtures::hexagon();
    let flips = flippable_edges(&t);
    let mut pair = None;
    'outer: for (a, &e1) in flips.iter().enumerate() {
        for &e2 in &flips[a + 1..] {
            let (f1, _, g1, _, _) = t.flip_square(e1).unwrap();
            let (f2, _, g2, _, _) = t.flip_square(e2).unwrap();
            if f1 != f2 && f1 != g2 && g1 != f2 && g1 != g2 {
                pair = Some((e1, e2));
                break 'outer;
            }
        }
    }
    let (e1, e2) = pair.expect("the hexagon has a distant flip pair");
    let mut worst_commute = 0.0f64;
    for n in [2usize, 3] {
        let params = QParams::new(n, 1).unwrap();
        let rep = random_rep(&mut rng, &t, &params);
        let p12 = intertwine::compose_path(&rep, &[e1, e2]).unwrap();
        let p21 = intertwine::compose_path(&rep, &[e2, e1]).unwrap();
        assert_eq!(
            p12.final_rep.triangulation().faces(),
            p21.final_rep.triangulation().faces(),
            "distant flips must land on the same triangulation"
        );
        let s = align_scalar(&p12.composite, &p21.composite);
        worst_commute =
            worst_commute.max(linalg::rel_dist(&p12.composite, &linalg::scale(&p21.composite, s)));
    }
    assert!(worst_commute <= 1e-6, "distant flips differ by {worst_commute:.3e} > 1e-6");
    println!(
        "criterion 6 PASS: double-flip roundtrip scalar to {worst_roundtrip:.3e}, distant flips \
         ({e1},{e2}) order-independent to {worst_commute:.3e} (tol 1e-6)"
    );
}

// ---------------------------------------------------------------------------
// 7. Holonomy: develop/recompute roundtrip and geometric flips
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_holonomy_roundtrip_and_geometric_flip() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst_roundtrip = 0.0f64;
    let mut systems = 0usize;
    for name in ["square", "pentagon", "hexagon", "torus", "sphere4"] {
        let t = fixtures::by_name(name).unwrap();
        for _ in 0..20 {
            let x = shear_bend_weights(&mut rng, t.n_edges());
            let report = holonomy::roundtrip_weights(&t, &x).unwrap();
            worst_roundtrip = worst_roundtrip.max(report.max_residual);
            systems += 1;
        }
    }
    assert_eq!(systems, 100);
    assert!(worst_roundtrip <= 1e-8, "holonomy roundtrip {worst_roundtrip:.3e} > 1e-8");

    // Flip, then recompute the five square weights from the developed ideal
    // vertices: transported and geometric values must agree.
    let mut worst_flip = 0.0f64;
    for name in ["square", "sphere4"] {
        let t = fixtures::by_name(name).unwrap();
        for &d in &flippable_edges(&t) {
            for _ in 0..10 {
                let x = shear_bend_weights(&mut rng, t.n_edges());
                let report = holonomy::flip_geometric(&t, &x, d).unwrap();
                worst_flip = worst_flip.max(report.max_residual);
            }
        }
    }
    // The torus square has repeated sides, so the quad recomputation does
    // not apply; its per-puncture eigenvalue is flip-invariant instead.
    let t = fixtures::punctured_torus();
    for _ in 0..10 {
        let x = shear_bend_weights(&mut rng, t.n_edges());
        let before = transport::puncture_eigenvalue_sq(&x, &t.punctures()[0]);
        for d in flippable_edges(&t) {
            let t2 = t.flip(d).unwrap();
            let y = transport::flip_weights(&t, &x, d).unwrap();
            let after = transport::puncture_eigenvalue_sq(&y, &t2.punctures()[0]);
            worst_flip = worst_flip.max(rel(before, after));
        }
    }
    assert!(worst_flip <= 1e-8, "geometric flip disagreement {worst_flip:.3e} > 1e-8");
    println!(
        "criterion 7 PASS: 100 develop/recompute roundtrips to {worst_roundtrip:.3e}, \
         flips commute with geometry to {worst_flip:.3e} (tol 1e-8)"
    );
}

// ---------------------------------------------------------------------------
// 8. Total peripheral load across random lifts
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_total_peripheral_load_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = 0.0f64;
    let mut worst_sq = 0.0f64;
    let mut lifts = 0usize;
    for name in ["torus", "sphere4"] {
        let t = fixtures::by_name(name).unwrap();
        for _ in 0..10 {
            let x = shear_bend_weights(&mut rng, t.n_edges());
            let base = holonomy::total_load_check(&t, &x, None).unwrap();
            worst = worst.max(base.residual);
            worst_sq = worst_sq.max(base.squared_residual);
            lifts += 1;
            for _ in 0..5 {
                let signs: Vec<i32> = (0..base.generator_edges.len())
                    .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect();
                let report = holonomy::total_load_check(&t, &x, Some(&signs)).unwrap();
                worst = worst.max(report.residual);
                worst_sq = worst_sq.max(report.squared_residual);
                lifts += 1;
            }
        }
    }
    assert!(worst <= 1e-8, "signed load identity residual {worst:.3e} > 1e-8");
    assert!(worst_sq <= 1e-9, "squared load identity residual {worst_sq:.3e} > 1e-9");
    println!(
        "criterion 8 PASS: {lifts} lifts on torus + sphere4, signed identity {worst:.3e} \
         (tol 1e-8), squared identity {worst_sq:.3e} (tol 1e-9)"
    );
}

// ---------------------------------------------------------------------------
// 9. Mapping-class invariant well-definedness
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_mapping_class_invariant_is_well_defined() {
    let t = fixtures::punctured_torus();
    let params = QParams::new(2, 1).unwrap();
    let x = [
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.5, 0.0),
    ];
    let relabel = [0usize, 2, 1];
    let base =
        intertwine::mapping_class_invariant(&t, &params, &x, &[0], &relabel, 0, DIM_CAP).unwrap();
    let sector_period = std::f64::consts::TAU / base.dim as f64;
    assert!((base.scale_free_trace - 2.0f64.sqrt()).abs() <= 1e-9);
    assert!(phase_distance(base.phase_sector, std::f64::consts::FRAC_PI_8, sector_period) <= 1e-9);

    // A longer flip path realizing the same relabeled endpoint: four extra
    // flips of the same diagonal return to the identical presentation.
    let alt =
        intertwine::mapping_class_invariant(&t, &params, &x, &[0; 5], &relabel, 0, DIM_CAP)
            .unwrap();
    let path_drift = (base.scale_free_trace - alt.scale_free_trace)
        .abs()
        .max(phase_distance(base.phase_sector, alt.phase_sector, sector_period));
    assert!(path_drift <= 1e-6, "alternate path moved the invariant by {path_drift:.3e}");

    // Independent rescaling of every elementary intertwiner (including the
    // closing one) must leave the scale-free outputs unchanged.
    let h = canonical_load(&params, &x, 0);
    let rep = LocalRep::from_edge_weights(&t, &params, &x, h, DIM_CAP).unwrap();
    let cycle = intertwine::closed_cycle(&rep, &[0], &relabel).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut rescale_drift = 0.0f64;
    for _ in 0..5 {
        let mut total = linalg::eye(base.dim);
        for m in &cycle.step_matrices {
            let c = Complex64::from_polar(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            total = linalg::mul(&total, &linalg::scale(m, c));
        }
        let inv = intertwine::invariants_of(&total).unwrap();
        rescale_drift = rescale_drift
            .max((inv.scale_free_trace - base.scale_free_trace).abs())
            .max(phase_distance(inv.phase_sector, base.phase_sector, sector_period));
    }
    assert!(rescale_drift <= 1e-6, "rescaling moved the invariant by {rescale_drift:.3e}");
    println!(
        "criterion 9 PASS: scale-free trace and phase sector stable to {:.3e} under rescaling \
         and {:.3e} under an alternate path (tol 1e-6)",
        rescale_drift, path_drift
    );
}

// ---------------------------------------------------------------------------
// 10. CLI determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_seeded_cli_runs_are_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_qteich");

    // A representation descriptor for the path command.
    let t = fixtures::punctured_torus();
    let params = QParams::new(2, 1).unwrap();
    let x = [
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.5, 0.0),
    ];
    let h = canonical_load(&params, &x, 0);
    let rep = LocalRep::from_edge_weights(&t, &params, &x, h, DIM_CAP).unwrap();
    let rep_path = std::env::temp_dir().join(format!("qteich-acceptance-{}.json", std::process::id()));
    std::fs::write(&rep_path, qteich::json::rep_to_value(&rep).to_string()).unwrap();
    let rep_arg = rep_path.to_str().unwrap();

    let runs: [&[&str]; 3] = [
        &["pentagon-check", "--seed", "42", "-N", "3"],
        &["intertwine-path", "-r", rep_arg, "-p", "1", "--close"],
        &["transport", "-t", "square", "-w", "4,1,1,1,1", "-p", "1"],
    ];
    for args in runs {
        let run = || {
            let out = std::process::Command::new(bin)
                .args(args)
                .output()
                .expect("CLI binary runs");
            assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
            out.stdout
        };
        let first = run();
        let second = run();
        assert!(!first.is_empty());
        assert_eq!(first, second, "repeated run of {args:?} is not byte-identical");
    }
    std::fs::remove_file(&rep_path).ok();
    println!("criterion 10 PASS: 3 commands, repeated runs byte-identical");
}
