//! Randomized property checks returning the worst error observed.
//! Shared between the property tests and the acceptance report.

use cosserat_rod::assembly::{BoundaryCondition, DistributedLoad, Frame, LoadCase, PointLoad, Problem};
use cosserat_rod::discretization::{
    gauss_rule, initialize_from_curve, Circle, Discretization, Formulation, Helix, Integration, Straight,
};
use cosserat_rod::liegroup::*;
use cosserat_rod::material::{Diagonals, ElasticLaw, StrainState};
use nalgebra::{DMatrix, DVector, Matrix3, Vector3, Vector4, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector3(rng: &mut ChaCha8Rng, scale: f64) -> Vector3<f64> {
    Vector3::from_fn(|_, _| rng.random_range(-scale..scale))
}

pub fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let v = Vector4::from_fn(|_, _| rng.random_range(-2.0..2.0));
        if v.norm() > 0.1 {
            return Quaternion::from_vector(&v);
        }
    }
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    *quat_to_rotation(&random_quaternion(rng)).unwrap().matrix()
}

/// Worst orthonormality defect of `A(P)` and worst change of `A` under `P → sP`.
pub fn quaternion_map_defects(n: usize) -> (f64, f64) {
    let mut rng = rng(1);
    let (mut ortho, mut scale) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let p = random_quaternion(&mut rng);
        let a = *quat_to_rotation(&p).unwrap().matrix();
        ortho = ortho.max(orthonormality_defect(&a)).max((a.determinant() - 1.0).abs());
        let s = rng.random_range(0.05..20.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let b = *quat_to_rotation(&p.scale(s)).unwrap().matrix();
        scale = scale.max((a - b).amax());
    }
    (ortho, scale)
}

/// Worst relative mismatch between `A skew(T(P) δP)` and the central difference of `A` along `δP`.
pub fn tangent_fd_error(n: usize) -> f64 {
    let mut rng = rng(2);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = random_quaternion(&mut rng).to_vector();
        let dp = Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let a_of = |v: Vector4<f64>| *quat_to_rotation(&Quaternion::from_vector(&v)).unwrap().matrix();
        let fd = (a_of(p + dp * h) - a_of(p - dp * h)) / (2.0 * h);
        let t = quat_tangent(&Quaternion::from_vector(&p)).unwrap();
        let exact = a_of(p) * skew(&(t * dp));
        worst = worst.max((fd - exact).amax() / exact.amax().max(1e-300));
    }
    worst
}

/// Worst `A(P(A)) − A` entry and worst distance of `P(A(P))` from `±P/‖P‖`.
pub fn spurrier_round_trip_error(n: usize) -> f64 {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = random_quaternion(&mut rng).normalized();
        let a = *quat_to_rotation(&p).unwrap().matrix();
        let back = rotation_to_quat(&a).unwrap();
        let a2 = *quat_to_rotation(&back).unwrap().matrix();
        let dq = (back.to_vector() - p.to_vector()).amax().min((back.to_vector() + p.to_vector()).amax());
        worst = worst.max((a2 - a).amax()).max(dq);
    }
    worst
}

/// `(sin θ / θ, (1 − cos θ) / θ², (θ − sin θ) / θ³)` without cancellation at small angles.
fn exp_coefficients(angle: f64) -> (f64, f64, f64) {
    if angle < 1e-3 {
        let a2 = angle * angle;
        (1.0 - a2 / 6.0 + a2 * a2 / 120.0, 0.5 - a2 / 24.0 + a2 * a2 / 720.0, 1.0 / 6.0 - a2 / 120.0 + a2 * a2 / 5040.0)
    } else {
        (angle.sin() / angle, (1.0 - angle.cos()) / (angle * angle), (angle - angle.sin()) / angle.powi(3))
    }
}

pub fn so3_exp(omega: &Vector3<f64>) -> Matrix3<f64> {
    let (s, c, _) = exp_coefficients(omega.norm());
    let w = skew(omega);
    Matrix3::identity() + w * s + w * w * c
}

pub fn se3_exp(xi: &Vector6<f64>) -> EuclideanTransform {
    let v = Vector3::new(xi[0], xi[1], xi[2]);
    let omega = Vector3::new(xi[3], xi[4], xi[5]);
    let (_, c, d) = exp_coefficients(omega.norm());
    let w = skew(&omega);
    let jac = Matrix3::identity() + w * c + w * w * d;
    EuclideanTransform::new(so3_exp(&omega), jac * v)
}

/// Worst `‖Log(Exp(ξ)) − ξ‖` over random twists with rotation angle below π.
pub fn se3_round_trip_error(n: usize) -> f64 {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for i in 0..n {
        let axis = random_vector3(&mut rng, 1.0).normalize();
        // include tiny angles to exercise the series branches
        let angle = if i % 10 == 0 { rng.random_range(0.0..1e-5) } else { rng.random_range(0.0..3.1) };
        let omega = axis * angle;
        let v = random_vector3(&mut rng, 5.0);
        let xi = Vector6::new(v.x, v.y, v.z, omega.x, omega.y, omega.z);
        let back = se3_log(&se3_exp(&xi)).unwrap();
        worst = worst.max((back.0 - xi).norm());
    }
    worst
}

fn law() -> ElasticLaw {
    ElasticLaw::from_stiffness(Diagonals { ke: 50.0, ksy: 20.0, ksz: 30.0, kt: 2.0, kby: 3.0, kbz: 4.0 }).unwrap()
}

fn perturbed(q0: &DVector<f64>, rng: &mut ChaCha8Rng, size: f64) -> DVector<f64> {
    q0.map(|v| v + rng.random_range(-size..size))
}

/// Worst change of the stretched strains at sample points under random rigid motions of a deformed helix.
pub fn objectivity_error(n_motions: usize) -> f64 {
    let mut rng = rng(5);
    let disc = Discretization::new(2, 3, Formulation::Displacement, Integration::Full).unwrap();
    let q0 = initialize_from_curve(&disc, &Helix { r0: 1.0, h: 2.0, coils: 1.0 }).unwrap();
    let problem = Problem::new(disc, law(), q0.clone(), LoadCase::default(), vec![]).unwrap();
    let q = perturbed(&q0, &mut rng, 0.1);
    let xis: Vec<f64> = (0..25).map(|i| i as f64 / 24.0).collect();
    let strains: Vec<StrainState> = xis.iter().map(|&xi| problem.strain_state(&q, xi).unwrap()).collect();
    let mut worst = 0.0f64;
    for _ in 0..n_motions {
        let rot = random_rotation(&mut rng);
        let shift = random_vector3(&mut rng, 10.0);
        let qr = rotation_to_quat(&rot).unwrap();
        let mut moved = q.clone();
        for k in 0..disc.n_nodes() {
            let r = rot * disc.node_position(&q, k) + shift;
            let p = qr.mul(&disc.node_quaternion(&q, k));
            moved.fixed_rows_mut::<3>(7 * k).copy_from(&r);
            moved.fixed_rows_mut::<4>(7 * k + 3).copy_from(&p.to_vector());
        }
        for (xi, s) in xis.iter().zip(&strains) {
            let m = problem.strain_state(&moved, *xi).unwrap();
            worst = worst.max((m.gamma_bar - s.gamma_bar).amax()).max((m.kappa_bar - s.kappa_bar).amax());
        }
    }
    worst
}

/// Problems exercising every load and boundary-condition path.
pub fn jacobian_problems() -> Vec<(String, Problem)> {
    let mut out = Vec::new();
    for formulation in [Formulation::Displacement, Formulation::Mixed] {
        for (p, integration) in [(1, Integration::Full), (2, Integration::Full), (2, Integration::Reduced)] {
            let disc = Discretization::new(p, 2, formulation, integration).unwrap();
            let q0 = initialize_from_curve(
                &disc,
                &Straight { origin: Vector3::new(0.5, -1.0, 0.2), frame: random_rotation(&mut rng(6)), length: 3.0 },
            )
            .unwrap();
            let load = LoadCase {
                point: vec![
                    PointLoad {
                        xi: 1.0,
                        force: Vector3::new(0.3, -0.7, 1.1),
                        force_frame: Frame::Body,
                        moment: Vector3::new(-0.4, 0.2, 0.9),
                        moment_frame: Frame::Inertial,
                    },
                    PointLoad::force(0.0, Vector3::new(0.1, 0.2, 0.3), Frame::Inertial),
                ],
                distributed: Some(DistributedLoad { force: Vector3::new(0.0, 0.0, -0.5), moment: Vector3::new(0.2, 0.0, 0.1) }),
            };
            let bcs = vec![BoundaryCondition::Clamp { node: 0 }];
            let name = format!("straight Q{p} {formulation} {integration}");
            out.push((name, Problem::new(disc, law(), q0, load, bcs).unwrap()));
        }
        let disc = Discretization::new(2, 4, formulation, Integration::Full).unwrap();
        let q0 = initialize_from_curve(&disc, &Circle { radius: 2.0 }).unwrap();
        let last = disc.n_nodes() - 1;
        let bcs = vec![
            BoundaryCondition::Clamp { node: 0 },
            BoundaryCondition::FixTranslation { node: last, components: [true, false, true] },
            BoundaryCondition::DrivenRotation { node: last / 2, axis: Vector3::new(0.6, 0.0, 0.8), angle: 2.0 },
        ];
        let name = format!("ring {formulation}");
        out.push((name, Problem::new(disc, law(), q0, LoadCase::default(), bcs).unwrap()));
    }
    out
}

/// Worst `max|J − J_fd| / max|J|` over random states of every Jacobian problem.
pub fn jacobian_fd_error(n_states: usize) -> f64 {
    let mut rng = rng(7);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for (_, problem) in jacobian_problems() {
        for _ in 0..n_states {
            let x = perturbed(&problem.initial_state(), &mut rng, 0.1);
            let t = rng.random_range(0.2..1.0);
            let jac = problem.jacobian(&x, t).unwrap().to_dense();
            let n = x.len();
            let mut fd = DMatrix::zeros(n, n);
            for j in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let col = (problem.residual(&xp, t).unwrap() - problem.residual(&xm, t).unwrap()) / (2.0 * h);
                fd.set_column(j, &col);
            }
            worst = worst.max((jac.clone() - fd).amax() / jac.amax());
        }
    }
    worst
}

/// Worst relative defect of `W(ε) + W*(n, m) = n·ε_γ + m·ε_κ` at `(n, m) = C ε`.
pub fn fenchel_error(n: usize) -> f64 {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mut d = [0.0; 6];
        for v in &mut d {
            *v = 10f64.powf(rng.random_range(-2.0..6.0));
        }
        let law = ElasticLaw::from_stiffness(Diagonals { ke: d[0], ksy: d[1], ksz: d[2], kt: d[3], kby: d[4], kbz: d[5] })
            .unwrap();
        let s = StrainState::from_measures(random_vector3(&mut rng, 0.5), random_vector3(&mut rng, 0.5));
        let (nf, m) = law.contact_forces(&s).unwrap();
        let pairing = nf.dot(&s.eps_gamma()) + m.dot(&s.eps_kappa());
        let sum = law.strain_energy(&s).unwrap() + law.complementary_energy(&nf, &m);
        worst = worst.max((sum - pairing).abs() / pairing.abs());
    }
    worst
}

/// Worst relative error of `m`-point Gauss rules on monomials of degree up to `2m − 1`.
pub fn quadrature_error() -> f64 {
    let mut worst = 0.0f64;
    for (a, b) in [(0.0, 1.0), (-1.0, 1.0), (0.2, 0.7), (0.5, 0.5625)] {
        for m in 1..=5 {
            let rule = gauss_rule(m, a, b).unwrap();
            for d in 0..2 * m {
                let exact = (b.powi(d as i32 + 1) - a.powi(d as i32 + 1)) / (d as f64 + 1.0);
                let got = rule.integrate(|x| x.powi(d as i32));
                let scale = (b - a) * a.abs().max(b.abs()).powi(d as i32);
                worst = worst.max((got - exact).abs() / scale);
            }
        }
    }
    worst
}
