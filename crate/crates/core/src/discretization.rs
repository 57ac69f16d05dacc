//! Mesh, Lagrange bases, Gauss rules, connectivity and initialization.
//!
//! Nodal kinematic coordinates are stored node by node as `(r, P)`, seven
//! entries per node. Virtual variations are `(δr, δφ)`, six per node. The
//! compliance multipliers of the mixed formulation are stored element by
//! element as `(n_j, m_j)` for each of the `p` force nodes.

use nalgebra::{DVector, Matrix3, RealField, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liegroup::{lit, rotation_of, rotation_to_quat, tangent_of, Quaternion};

/// Slack allowed when deciding whether a parameter lies inside an element.
const INTERVAL_SLACK: f64 = 1e-12;

/// Smallest admissible reference tangent length.
pub const MIN_TANGENT_LENGTH: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formulation {
    #[serde(rename = "DB")]
    Displacement,
    #[serde(rename = "MX")]
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integration {
    Full,
    Reduced,
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Formulation::Displacement => "DB",
            Formulation::Mixed => "MX",
        })
    }
}

impl std::fmt::Display for Integration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Integration::Full => "full",
            Integration::Reduced => "red",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Discretization {
    pub p: usize,
    pub n_el: usize,
    pub formulation: Formulation,
    pub integration: Integration,
}

/// Global indices of one element's unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementDofs {
    /// `7(p+1)` kinematic coordinates.
    pub kinematic: Vec<usize>,
    /// `6(p+1)` variation rows.
    pub variation: Vec<usize>,
    /// `6p` multipliers (empty for the displacement formulation).
    pub multipliers: Vec<usize>,
}

impl Discretization {
    pub fn new(p: usize, n_el: usize, formulation: Formulation, integration: Integration) -> Result<Self> {
        if !(1..=2).contains(&p) {
            return Err(Error::InvalidDiscretization(format!("polynomial degree {p} not in 1..=2")));
        }
        if n_el == 0 {
            return Err(Error::InvalidDiscretization("at least one element is required".into()));
        }
        Ok(Self { p, n_el, formulation, integration })
    }

    /// Discretization with `n_nodes` nodes.
    pub fn with_nodes(p: usize, n_nodes: usize, formulation: Formulation, integration: Integration) -> Result<Self> {
        if p == 0 || n_nodes < 2 || !(n_nodes - 1).is_multiple_of(p) {
            return Err(Error::InvalidDiscretization(format!("{n_nodes} nodes incompatible with degree {p}")));
        }
        Self::new(p, (n_nodes - 1) / p, formulation, integration)
    }

    pub fn n_nodes(&self) -> usize {
        self.p * self.n_el + 1
    }

    pub fn n_kinematic(&self) -> usize {
        7 * self.n_nodes()
    }

    pub fn n_variation(&self) -> usize {
        6 * self.n_nodes()
    }

    pub fn n_multipliers(&self) -> usize {
        match self.formulation {
            Formulation::Displacement => 0,
            Formulation::Mixed => 6 * self.p * self.n_el,
        }
    }

    pub fn node_xi(&self, k: usize) -> f64 {
        k as f64 / (self.n_nodes() - 1) as f64
    }

    pub fn node_xis(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|k| self.node_xi(k)).collect()
    }

    pub fn element_interval(&self, e: usize) -> (f64, f64) {
        let n = self.n_el as f64;
        (e as f64 / n, (e + 1) as f64 / n)
    }

    /// Element containing `xi`; the right end belongs to the last element.
    pub fn element_of(&self, xi: f64) -> Result<usize> {
        if !(-INTERVAL_SLACK..=1.0 + INTERVAL_SLACK).contains(&xi) {
            return Err(Error::OutOfElement { xi, lo: 0.0, hi: 1.0 });
        }
        Ok(((xi * self.n_el as f64).floor().max(0.0) as usize).min(self.n_el - 1))
    }

    /// Node index of an element boundary at `xi`, if there is one.
    pub fn boundary_node(&self, xi: f64) -> Option<usize> {
        let s = xi * self.n_el as f64;
        let b = s.round();
        ((s - b).abs() <= 1e-9 && (0.0..=self.n_el as f64).contains(&b)).then(|| b as usize * self.p)
    }

    /// Positions of the force nodes (degree `p − 1`), element by element.
    pub fn force_node_xis(&self) -> Vec<f64> {
        (0..self.n_el)
            .flat_map(|e| {
                let (a, b) = self.element_interval(e);
                local_nodes(self.p - 1, a, b)
            })
            .collect()
    }

    /// Number of Gauss points for the internal virtual work.
    pub fn quadrature_order(&self) -> usize {
        match (self.integration, self.p) {
            (Integration::Reduced, p) => p,
            (Integration::Full, 1) => 2,
            (Integration::Full, _) => 5,
        }
    }

    pub fn quadrature(&self, e: usize) -> Result<QuadratureRule> {
        let (a, b) = self.element_interval(e);
        gauss_rule(self.quadrature_order(), a, b)
    }

    /// Gauss rule for distributed loads of polynomial degree `p_ext`.
    pub fn external_quadrature(&self, e: usize, p_ext: usize) -> Result<QuadratureRule> {
        let (a, b) = self.element_interval(e);
        gauss_rule((self.p + p_ext + 2) / 2, a, b)
    }

    pub fn element_dofs(&self, e: usize) -> ElementDofs {
        let first = e * self.p;
        let nodes = first..=first + self.p;
        let kinematic = nodes.clone().flat_map(|k| 7 * k..7 * k + 7).collect();
        let variation = nodes.flat_map(|k| 6 * k..6 * k + 6).collect();
        let multipliers = match self.formulation {
            Formulation::Displacement => Vec::new(),
            Formulation::Mixed => (6 * self.p * e..6 * self.p * (e + 1)).collect(),
        };
        ElementDofs { kinematic, variation, multipliers }
    }

    pub fn connectivity(&self) -> Vec<ElementDofs> {
        (0..self.n_el).map(|e| self.element_dofs(e)).collect()
    }

    pub fn node_position(&self, q: &DVector<f64>, k: usize) -> Vector3<f64> {
        Vector3::new(q[7 * k], q[7 * k + 1], q[7 * k + 2])
    }

    pub fn node_quaternion(&self, q: &DVector<f64>, k: usize) -> Quaternion {
        Quaternion::new(q[7 * k + 3], q[7 * k + 4], q[7 * k + 5], q[7 * k + 6])
    }
}

pub fn gather<T: Copy>(global: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| global[i]).collect()
}

pub fn scatter_add(global: &mut [f64], idx: &[usize], local: &[f64]) {
    for (&i, &v) in idx.iter().zip(local) {
        global[i] += v;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `m`-point Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_rule(m: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    let (x, w): (Vec<f64>, Vec<f64>) = match m {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let s = 1.0 / 3f64.sqrt();
            (vec![-s, s], vec![1.0, 1.0])
        }
        3 => {
            let s = (3.0f64 / 5.0).sqrt();
            (vec![-s, 0.0, s], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let r = 2.0 / 7.0 * (6.0f64 / 5.0).sqrt();
            let (s1, s2) = ((3.0 / 7.0 - r).sqrt(), (3.0 / 7.0 + r).sqrt());
            let w1 = (18.0 + 30f64.sqrt()) / 36.0;
            let w2 = (18.0 - 30f64.sqrt()) / 36.0;
            (vec![-s2, -s1, s1, s2], vec![w2, w1, w1, w2])
        }
        5 => {
            let r = 2.0 * (10.0f64 / 7.0).sqrt();
            let (s1, s2) = ((5.0 - r).sqrt() / 3.0, (5.0 + r).sqrt() / 3.0);
            let w1 = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
            let w2 = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
            (vec![-s2, -s1, 0.0, s1, s2], vec![w2, w1, 128.0 / 225.0, w1, w2])
        }
        _ => return Err(Error::UnsupportedOrder(m)),
    };
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    Ok(QuadratureRule {
        points: x.iter().map(|&x| c + h * x).collect(),
        weights: w.iter().map(|&w| h * w).collect(),
    })
}

/// The `q + 1` linearly spaced nodes of a degree-`q` basis on `[a, b]`.
/// A constant basis has its single node at the midpoint.
pub fn local_nodes(q: usize, a: f64, b: f64) -> Vec<f64> {
    if q == 0 {
        return vec![0.5 * (a + b)];
    }
    (0..=q).map(|i| a + (b - a) * i as f64 / q as f64).collect()
}

/// Lagrange basis of degree `q` on `[a, b]` and its derivatives at `xi`.
pub fn lagrange_basis(q: usize, interval: (f64, f64), xi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (a, b) = interval;
    let slack = INTERVAL_SLACK * (1.0 + (b - a).abs());
    if !(xi >= a - slack && xi <= b + slack) {
        return Err(Error::OutOfElement { xi, lo: a, hi: b });
    }
    if q > 2 {
        return Err(Error::InvalidDiscretization(format!("basis degree {q} not supported")));
    }
    let nodes = local_nodes(q, a, b);
    let n = nodes.len();
    let mut values = vec![1.0; n];
    let mut derivatives = vec![0.0; n];
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            values[i] *= (xi - nodes[k]) / (nodes[i] - nodes[k]);
        }
        // product rule; avoids dividing by (xi - node)
        for l in (0..n).filter(|&l| l != i) {
            let mut term = 1.0 / (nodes[i] - nodes[l]);
            for k in (0..n).filter(|&k| k != i && k != l) {
                term *= (xi - nodes[k]) / (nodes[i] - nodes[k]);
            }
            derivatives[i] += term;
        }
    }
    Ok((values, derivatives))
}

/// Interpolated kinematics at a point of one element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kinematics<T: RealField + Copy> {
    pub r: Vector3<T>,
    pub r_xi: Vector3<T>,
    pub p: Vector4<T>,
    pub p_xi: Vector4<T>,
}

impl<T: RealField + Copy> Kinematics<T> {
    /// Interpolation of element coordinates laid out node by node as `(r, P)`.
    pub fn interpolate(n: &[f64], dn: &[f64], q_e: &[T]) -> Self {
        let mut k = Self {
            r: Vector3::zeros(),
            r_xi: Vector3::zeros(),
            p: Vector4::zeros(),
            p_xi: Vector4::zeros(),
        };
        for (i, (&ni, &dni)) in n.iter().zip(dn).enumerate() {
            let (ni, dni): (T, T) = (lit(ni), lit(dni));
            let o = 7 * i;
            for c in 0..3 {
                k.r[c] += q_e[o + c] * ni;
                k.r_xi[c] += q_e[o + c] * dni;
            }
            for c in 0..4 {
                k.p[c] += q_e[o + 3 + c] * ni;
                k.p_xi[c] += q_e[o + 3 + c] * dni;
            }
        }
        k
    }

    pub fn rotation(&self) -> Matrix3<T> {
        rotation_of(self.p[0], &self.p.fixed_rows::<3>(1).into_owned())
    }

    /// Stretched strain `Aᵀ r'` given the rotation.
    pub fn gamma_bar(&self, a: &Matrix3<T>) -> Vector3<T> {
        a.tr_mul(&self.r_xi)
    }

    /// Scaled curvature `T(P) P'`.
    pub fn kappa_bar(&self) -> Vector3<T> {
        tangent_of(self.p[0], &self.p.fixed_rows::<3>(1).into_owned()) * self.p_xi
    }
}

/// Kinematics of global coordinates `q` at an arbitrary parameter `xi`.
pub fn interpolate_kinematics(disc: &Discretization, q: &DVector<f64>, xi: f64) -> Result<Kinematics<f64>> {
    let e = disc.element_of(xi)?;
    let (n, dn) = lagrange_basis(disc.p, disc.element_interval(e), xi)?;
    let q_e = gather(q.as_slice(), &disc.element_dofs(e).kinematic);
    let k = Kinematics::interpolate(&n, &dn, &q_e);
    let norm = k.p.norm();
    if norm <= crate::liegroup::DEGENERATE_NORM {
        return Err(Error::DegenerateQuaternion { norm });
    }
    Ok(k)
}

/// Reference data cached at one quadrature point.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePoint {
    pub xi: f64,
    /// Gauss weight in the `ξ` measure.
    pub weight: f64,
    pub n: Vec<f64>,
    pub dn: Vec<f64>,
    /// Force basis of degree `p − 1` (mixed formulation).
    pub force_basis: Vec<f64>,
    pub j: f64,
    pub gamma_bar0: Vector3<f64>,
    pub kappa_bar0: Vector3<f64>,
}

/// Quadrature-point reference data of every element.
pub fn reference_geometry(disc: &Discretization, q0: &DVector<f64>) -> Result<Vec<Vec<ReferencePoint>>> {
    if q0.len() != disc.n_kinematic() {
        return Err(Error::DimensionMismatch { expected: disc.n_kinematic(), got: q0.len() });
    }
    (0..disc.n_el)
        .map(|e| {
            let interval = disc.element_interval(e);
            let rule = disc.quadrature(e)?;
            let q_e = gather(q0.as_slice(), &disc.element_dofs(e).kinematic);
            rule.points
                .iter()
                .zip(&rule.weights)
                .map(|(&xi, &weight)| {
                    let (n, dn) = lagrange_basis(disc.p, interval, xi)?;
                    let (force_basis, _) = lagrange_basis(disc.p - 1, interval, xi)?;
                    let k = Kinematics::interpolate(&n, &dn, &q_e);
                    let norm = k.p.norm();
                    if norm <= crate::liegroup::DEGENERATE_NORM {
                        return Err(Error::DegenerateQuaternion { norm });
                    }
                    let j = k.r_xi.norm();
                    if !(j > MIN_TANGENT_LENGTH) {
                        return Err(Error::DegenerateTangent { xi, j });
                    }
                    let a = k.rotation();
                    Ok(ReferencePoint {
                        xi,
                        weight,
                        n,
                        dn,
                        force_basis,
                        j,
                        gamma_bar0: k.gamma_bar(&a),
                        kappa_bar0: k.kappa_bar(),
                    })
                })
                .collect()
        })
        .collect()
}

/// A parametrized reference placement `ξ ↦ (r, A)` on `[0, 1]`.
pub trait Curve {
    fn placement(&self, xi: f64) -> (Vector3<f64>, Matrix3<f64>);
}

impl<F: Fn(f64) -> (Vector3<f64>, Matrix3<f64>)> Curve for F {
    fn placement(&self, xi: f64) -> (Vector3<f64>, Matrix3<f64>) {
        self(xi)
    }
}

/// Straight rod from `origin` along the first column of `frame`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Straight {
    pub origin: Vector3<f64>,
    pub frame: Matrix3<f64>,
    pub length: f64,
}

impl Curve for Straight {
    fn placement(&self, xi: f64) -> (Vector3<f64>, Matrix3<f64>) {
        (self.origin + self.frame.column(0) * (self.length * xi), self.frame)
    }
}

/// Planar arc in the x–y plane starting at the origin tangent to `e_x`,
/// bending towards `+e_y`, with radius `radius` and opening angle `angle`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub radius: f64,
    pub angle: f64,
}

impl Curve for Arc {
    fn placement(&self, xi: f64) -> (Vector3<f64>, Matrix3<f64>) {
        let phi = self.angle * xi;
        let (s, c) = phi.sin_cos();
        let r = Vector3::new(self.radius * s, self.radius * (1.0 - c), 0.0);
        (r, Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }
}

/// Helix with axis `e_z`, radius `r0`, height `h` and `coils` turns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Helix {
    pub r0: f64,
    pub h: f64,
    pub coils: f64,
}

impl Helix {
    pub fn pitch(&self) -> f64 {
        self.h / (2.0 * std::f64::consts::PI * self.r0 * self.coils)
    }

    pub fn length(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.r0 * self.coils * (1.0 + self.pitch().powi(2)).sqrt()
    }
}

impl Curve for Helix {
    fn placement(&self, xi: f64) -> (Vector3<f64>, Matrix3<f64>) {
        let c = self.pitch();
        let alpha = 2.0 * std::f64::consts::PI * self.coils * xi;
        let (s, co) = alpha.sin_cos();
        let r = self.r0 * Vector3::new(s, -co, c * alpha);
        let k = 1.0 / (1.0 + c * c).sqrt();
        let ex = Vector3::new(co, s, c) * k;
        let ey = Vector3::new(-s, co, 0.0);
        let ez = ex.cross(&ey);
        (r, Matrix3::from_columns(&[ex, ey, ez]))
    }
}

/// Full circle of radius `radius` through the origin in the x–y plane,
/// starting along `+e_y` with its diameter on the x axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub radius: f64,
}

impl Curve for Circle {
    fn placement(&self, xi: f64) -> (Vector3<f64>, Matrix3<f64>) {
        let phi = 2.0 * std::f64::consts::PI * xi;
        let (s, c) = phi.sin_cos();
        let r = self.radius * Vector3::new(1.0 - c, s, 0.0);
        let ex = Vector3::new(s, c, 0.0);
        let ez = Vector3::z();
        let ey = ez.cross(&ex);
        (r, Matrix3::from_columns(&[ex, ey, ez]))
    }
}

/// Nodal coordinates sampled from a reference curve with consistent
/// quaternion hemispheres.
pub fn initialize_from_curve(disc: &Discretization, curve: &dyn Curve) -> Result<DVector<f64>> {
    let mut q = DVector::zeros(disc.n_kinematic());
    let mut previous: Option<Quaternion> = None;
    for k in 0..disc.n_nodes() {
        let (r, a) = curve.placement(disc.node_xi(k));
        let mut p = rotation_to_quat(&a)?;
        if let Some(prev) = previous {
            if prev.dot(&p) < 0.0 {
                p = p.scale(-1.0);
            }
        }
        q.fixed_rows_mut::<3>(7 * k).copy_from(&r);
        q.fixed_rows_mut::<4>(7 * k + 3).copy_from(&p.to_vector());
        previous = Some(p);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn basis_examples() {
        let (n, _) = lagrange_basis(1, (0.0, 1.0), 0.5).unwrap();
        assert_eq!(n, vec![0.5, 0.5]);
        let (n, dn) = lagrange_basis(0, (0.3, 0.4), 0.37).unwrap();
        assert_eq!((n, dn), (vec![1.0], vec![0.0]));
        let (n, _) = lagrange_basis(2, (0.0, 1.0), 0.0).unwrap();
        assert_eq!(n, vec![1.0, 0.0, 0.0]);
        assert!(matches!(lagrange_basis(1, (0.0, 0.5), 0.7), Err(Error::OutOfElement { .. })));
    }

    #[test]
    fn quadratic_basis_derivative() {
        // N_0 = 2(x - 1/2)(x - 1) on [0, 1]
        let (_, dn) = lagrange_basis(2, (0.0, 1.0), 0.25).unwrap();
        assert_relative_eq!(dn[0], 4.0 * 0.25 - 3.0, epsilon = 1e-14);
        assert_relative_eq!(dn[1], -8.0 * 0.25 + 4.0, epsilon = 1e-14);
        assert_relative_eq!(dn[2], 4.0 * 0.25 - 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_examples() {
        let r = gauss_rule(1, -1.0, 1.0).unwrap();
        assert_eq!((r.points, r.weights), (vec![0.0], vec![2.0]));
        let r = gauss_rule(2, -1.0, 1.0).unwrap();
        assert_relative_eq!(r.points[1], 1.0 / 3f64.sqrt(), epsilon = 1e-16);
        assert_eq!(r.weights, vec![1.0, 1.0]);
        let r = gauss_rule(5, 0.0, 1.0).unwrap();
        assert_relative_eq!(r.integrate(|x| x.powi(9)), 0.1, epsilon = 1e-13);
        assert_eq!(gauss_rule(6, 0.0, 1.0), Err(Error::UnsupportedOrder(6)));
        assert_eq!(gauss_rule(0, 0.0, 1.0), Err(Error::UnsupportedOrder(0)));
    }

    #[test]
    fn rule_selection() {
        let d = |p, i| Discretization::new(p, 3, Formulation::Mixed, i).unwrap().quadrature_order();
        assert_eq!(d(1, Integration::Full), 2);
        assert_eq!(d(2, Integration::Full), 5);
        assert_eq!(d(1, Integration::Reduced), 1);
        assert_eq!(d(2, Integration::Reduced), 2);
    }

    #[test]
    fn counts_and_connectivity() {
        let d = Discretization::new(2, 3, Formulation::Mixed, Integration::Full).unwrap();
        assert_eq!(d.n_nodes(), 7);
        assert_eq!(d.n_kinematic(), 49);
        assert_eq!(d.n_variation(), 42);
        assert_eq!(d.n_multipliers(), 36);
        let c = d.connectivity();
        assert_eq!(c[1].kinematic.first(), Some(&14));
        assert_eq!(c[1].kinematic.last(), Some(&34));
        assert_eq!(c[0].kinematic[14..], c[1].kinematic[..7]);
        assert_eq!(c[2].multipliers, (24..36).collect::<Vec<_>>());
        assert_eq!(d.force_node_xis().len(), 6);
        assert_eq!(d.boundary_node(1.0 / 3.0), Some(2));
        assert_eq!(d.boundary_node(0.5), None);
        assert_eq!(d.element_of(1.0).unwrap(), 2);
        assert!(Discretization::new(3, 1, Formulation::Mixed, Integration::Full).is_err());
    }

    #[test]
    fn straight_initialization() {
        let d = Discretization::new(1, 4, Formulation::Displacement, Integration::Full).unwrap();
        let curve = Straight { origin: Vector3::zeros(), frame: Matrix3::identity(), length: 2.0 };
        let q = initialize_from_curve(&d, &curve).unwrap();
        for k in 0..d.n_nodes() {
            assert_eq!(d.node_quaternion(&q, k), Quaternion::identity());
            assert_relative_eq!(d.node_position(&q, k), Vector3::new(0.5 * k as f64, 0.0, 0.0));
        }
        let refs = reference_geometry(&d, &q).unwrap();
        for pt in refs.iter().flatten() {
            assert_relative_eq!(pt.j, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn unit_element_stretch() {
        let d = Discretization::new(1, 1, Formulation::Displacement, Integration::Full).unwrap();
        let q = DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let k = interpolate_kinematics(&d, &q, 0.3).unwrap();
        assert_relative_eq!(k.gamma_bar(&k.rotation()), Vector3::x(), epsilon = 1e-15);
        assert_eq!(k.kappa_bar(), Vector3::zeros());
    }

    #[test]
    fn degenerate_reference_is_rejected() {
        let d = Discretization::new(1, 1, Formulation::Displacement, Integration::Full).unwrap();
        let q = DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(reference_geometry(&d, &q), Err(Error::DegenerateTangent { .. })));
    }
}
