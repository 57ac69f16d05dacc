mod common;

use common::props::rng;
use cosserat_rod::assembly::{LoadCase, Problem};
use cosserat_rod::discretization::{initialize_from_curve, Discretization, Formulation, Helix, Integration};
use cosserat_rod::material::{Diagonals, ElasticLaw};
use nalgebra::DVector;
use rand::Rng;

fn law() -> ElasticLaw {
    ElasticLaw::from_stiffness(Diagonals { ke: 80.0, ksy: 30.0, ksz: 40.0, kt: 3.0, kby: 5.0, kbz: 7.0 }).unwrap()
}

fn problem(p: usize, formulation: Formulation, integration: Integration) -> Problem {
    let disc = Discretization::new(p, 1, formulation, integration).unwrap();
    let q0 = initialize_from_curve(&disc, &Helix { r0: 1.0, h: 1.5, coils: 0.3 }).unwrap();
    Problem::new(disc, law(), q0, LoadCase::default(), vec![]).unwrap()
}

fn random_state(problem: &Problem, seed: u64) -> DVector<f64> {
    let mut rng = rng(seed);
    problem.initial_state().map(|v| v + rng.random_range(-0.2..0.2))
}

#[test]
fn kernel_forces_equal_explicit_blocks() {
    for p in [1, 2] {
        for integration in [Integration::Full, Integration::Reduced] {
            let prob = problem(p, Formulation::Mixed, integration);
            for seed in 0..5 {
                let x = random_state(&prob, seed);
                let nq = prob.disc.n_kinematic();
                let q = x.rows(0, nq).into_owned();
                let (w_c, k_c, l_c) = prob.element_mixed_blocks(0, &q).unwrap();
                let nf = 6 * (p + 1);
                let nl = 6 * p;
                let lambda = x.rows(nq, nl).into_owned();
                let f = prob.residual(&x, 1.0).unwrap();
                let force = f.rows(0, nf).into_owned();
                let compliance = f.rows(nf, nl).into_owned();
                let expect_force = &w_c * &lambda;
                let expect_compliance = &k_c * &lambda - &l_c;
                assert!((force - &expect_force).amax() <= 1e-12 * expect_force.amax().max(1.0), "p={p} {integration}");
                assert!((compliance - &expect_compliance).amax() <= 1e-12 * expect_compliance.amax().max(1.0));
            }
        }
    }
}

#[test]
fn compliance_matrix_is_symmetric_positive_definite() {
    for p in [1, 2] {
        let prob = problem(p, Formulation::Mixed, Integration::Full);
        let q = random_state(&prob, 9).rows(0, prob.disc.n_kinematic()).into_owned();
        let (_, k_c, _) = prob.element_mixed_blocks(0, &q).unwrap();
        assert_eq!(k_c, k_c.transpose());
        assert!(k_c.clone().cholesky().is_some());
    }
}

#[test]
fn condensed_mixed_force_equals_reduced_displacement_force() {
    for p in [1, 2] {
        let mx = problem(p, Formulation::Mixed, Integration::Reduced);
        let db = problem(p, Formulation::Displacement, Integration::Reduced);
        for seed in 10..15 {
            let q = random_state(&mx, seed).rows(0, mx.disc.n_kinematic()).into_owned();
            let (w_c, k_c, l_c) = mx.element_mixed_blocks(0, &q).unwrap();
            let lambda = k_c.lu().solve(&l_c).unwrap();
            let condensed = &w_c * lambda;
            let f_db = db.element_internal_force_db(0, &q).unwrap();
            let err = (&condensed - &f_db).amax() / f_db.amax();
            assert!(err < 1e-10, "p={p}: {err:e}");
        }
    }
}

#[test]
fn condensation_differs_under_full_integration() {
    // the identity above is specific to the reduced rule
    let mx = problem(2, Formulation::Mixed, Integration::Full);
    let db = problem(2, Formulation::Displacement, Integration::Full);
    let q = random_state(&mx, 20).rows(0, mx.disc.n_kinematic()).into_owned();
    let (w_c, k_c, l_c) = mx.element_mixed_blocks(0, &q).unwrap();
    let condensed = &w_c * k_c.lu().solve(&l_c).unwrap();
    let f_db = db.element_internal_force_db(0, &q).unwrap();
    assert!((&condensed - &f_db).amax() / f_db.amax() > 1e-6);
}
