//! Residual and Jacobian assembly for the displacement-based and mixed
//! formulations.
//!
//! Unknowns are ordered `[q (7N) | λ_c (6 p n_el, mixed only) | λ_bc]` and
//! equations `[forces (6N) | compliance (6 p n_el) | g_S (N) | bc rows]`.
//! Element Jacobians are computed by forward-mode automatic differentiation
//! of the element kernels.

use nalgebra::{DMatrix, DVector, Matrix3, RealField, Vector3, Vector4};
use num_dual::DualSVec64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretization::{
    gather, lagrange_basis, reference_geometry, Discretization, Formulation, Kinematics, ReferencePoint,
};
use crate::error::{Error, Result};
use crate::linalg::Triplets;
use crate::liegroup::{lit, rotation_of, Quaternion};
use crate::material::{ElasticLaw, StrainState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Components in the fixed inertial basis.
    Inertial,
    /// Components in the cross-section basis.
    Body,
}

/// Force and moment acting at an element boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointLoad {
    pub xi: f64,
    pub force: Vector3<f64>,
    pub force_frame: Frame,
    pub moment: Vector3<f64>,
    pub moment_frame: Frame,
}

impl PointLoad {
    pub fn force(xi: f64, force: Vector3<f64>, frame: Frame) -> Self {
        Self { xi, force, force_frame: frame, moment: Vector3::zeros(), moment_frame: Frame::Body }
    }

    pub fn moment(xi: f64, moment: Vector3<f64>, frame: Frame) -> Self {
        Self { xi, force: Vector3::zeros(), force_frame: Frame::Inertial, moment, moment_frame: frame }
    }
}

/// Constant line loads per unit reference arc length: an inertial force `b`
/// and a cross-section moment `c`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DistributedLoad {
    pub force: Vector3<f64>,
    pub moment: Vector3<f64>,
}

/// Loads scaled linearly by the load parameter `t`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadCase {
    pub point: Vec<PointLoad>,
    pub distributed: Option<DistributedLoad>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition {
    /// Node position and orientation fixed to their reference values.
    Clamp { node: usize },
    /// Selected inertial position components fixed.
    FixTranslation { node: usize, components: [bool; 3] },
    /// Rotation of the node about the inertial `axis` relative to its
    /// reference orientation follows `angle · t`. Its multiplier is the
    /// applied moment about `axis`.
    DrivenRotation { node: usize, axis: Vector3<f64>, angle: f64 },
}

impl BoundaryCondition {
    pub fn node(&self) -> usize {
        match *self {
            Self::Clamp { node } | Self::FixTranslation { node, .. } | Self::DrivenRotation { node, .. } => node,
        }
    }

    pub fn n_rows(&self) -> usize {
        match self {
            Self::Clamp { .. } => 6,
            Self::FixTranslation { components, .. } => components.iter().filter(|&&c| c).count(),
            Self::DrivenRotation { .. } => 1,
        }
    }
}

/// Unknowns split into their three groups.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    pub q: DVector<f64>,
    pub lambda_c: DVector<f64>,
    pub lambda_bc: DVector<f64>,
}

impl SystemState {
    pub fn to_vector(&self) -> DVector<f64> {
        let mut x = DVector::zeros(self.q.len() + self.lambda_c.len() + self.lambda_bc.len());
        x.rows_mut(0, self.q.len()).copy_from(&self.q);
        x.rows_mut(self.q.len(), self.lambda_c.len()).copy_from(&self.lambda_c);
        x.rows_mut(self.q.len() + self.lambda_c.len(), self.lambda_bc.len()).copy_from(&self.lambda_bc);
        x
    }
}

#[derive(Clone, Copy, Debug)]
struct LawVectors {
    cg: Vector3<f64>,
    ck: Vector3<f64>,
    cg_inv: Vector3<f64>,
    ck_inv: Vector3<f64>,
}

/// Discretized rod with material, loads and boundary conditions.
#[derive(Clone, Debug)]
pub struct Problem {
    pub disc: Discretization,
    pub law: ElasticLaw,
    pub load: LoadCase,
    pub bcs: Vec<BoundaryCondition>,
    /// Reference coordinates.
    pub q0: DVector<f64>,
    reference: Vec<Vec<ReferencePoint>>,
    law_vectors: LawVectors,
    bc_offsets: Vec<usize>,
    n_bc: usize,
}

fn lift<T: RealField + Copy>(v: &Vector3<f64>) -> Vector3<T> {
    v.map(lit)
}

fn hamilton<T: RealField + Copy>(a: &Vector4<T>, b: &Vector4<T>) -> Vector4<T> {
    let av = Vector3::new(a[1], a[2], a[3]);
    let bv = Vector3::new(b[1], b[2], b[3]);
    let v = bv * a[0] + av * b[0] + av.cross(&bv);
    Vector4::new(a[0] * b[0] - av.dot(&bv), v[0], v[1], v[2])
}

impl Problem {
    pub fn new(
        disc: Discretization,
        law: ElasticLaw,
        q0: DVector<f64>,
        load: LoadCase,
        bcs: Vec<BoundaryCondition>,
    ) -> Result<Self> {
        if disc.formulation == Formulation::Displacement && law.is_constrained() {
            return Err(Error::ConstrainedLaw);
        }
        let reference = reference_geometry(&disc, &q0)?;
        for pl in &load.point {
            if disc.boundary_node(pl.xi).is_none() {
                return Err(Error::MisplacedPointLoad(pl.xi));
            }
        }
        let mut bc_offsets = Vec::with_capacity(bcs.len());
        let mut n_bc = 0;
        for bc in &bcs {
            if bc.node() >= disc.n_nodes() {
                return Err(Error::InvalidDiscretization(format!("boundary condition on missing node {}", bc.node())));
            }
            if let BoundaryCondition::DrivenRotation { axis, .. } = bc {
                if (axis.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Config("driven rotation axis must be a unit vector".into()));
                }
            }
            bc_offsets.push(n_bc);
            n_bc += bc.n_rows();
        }
        let (cg_inv, ck_inv) = law.compliance();
        let (cg, ck) = law.stiffness().unwrap_or((Vector3::zeros(), Vector3::zeros()));
        Ok(Self {
            disc,
            law,
            load,
            bcs,
            q0,
            reference,
            law_vectors: LawVectors { cg, ck, cg_inv, ck_inv },
            bc_offsets,
            n_bc,
        })
    }

    pub fn n_unknowns(&self) -> usize {
        self.disc.n_kinematic() + self.disc.n_multipliers() + self.n_bc
    }

    pub fn n_bc_multipliers(&self) -> usize {
        self.n_bc
    }

    fn lambda_offset(&self) -> usize {
        self.disc.n_kinematic()
    }

    fn bc_offset(&self) -> usize {
        self.disc.n_kinematic() + self.disc.n_multipliers()
    }

    fn compliance_row_offset(&self) -> usize {
        self.disc.n_variation()
    }

    fn g_row_offset(&self) -> usize {
        self.disc.n_variation() + self.disc.n_multipliers()
    }

    fn bc_row_offset(&self) -> usize {
        self.g_row_offset() + self.disc.n_nodes()
    }

    pub fn reference(&self) -> &[Vec<ReferencePoint>] {
        &self.reference
    }

    /// Reference coordinates with all multipliers zero.
    pub fn initial_state(&self) -> DVector<f64> {
        let mut x = DVector::zeros(self.n_unknowns());
        x.rows_mut(0, self.q0.len()).copy_from(&self.q0);
        x
    }

    pub fn split(&self, x: &DVector<f64>) -> Result<SystemState> {
        self.check(x)?;
        let (nq, nl) = (self.disc.n_kinematic(), self.disc.n_multipliers());
        Ok(SystemState {
            q: x.rows(0, nq).into_owned(),
            lambda_c: x.rows(nq, nl).into_owned(),
            lambda_bc: x.rows(nq + nl, self.n_bc).into_owned(),
        })
    }

    /// Multipliers belonging to boundary condition `i`.
    pub fn bc_multipliers(&self, x: &DVector<f64>, i: usize) -> Vec<f64> {
        let o = self.bc_offset() + self.bc_offsets[i];
        (0..self.bcs[i].n_rows()).map(|k| x[o + k]).collect()
    }

    fn check(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.n_unknowns() {
            return Err(Error::DimensionMismatch { expected: self.n_unknowns(), got: x.len() });
        }
        Ok(())
    }

    /// Ordering keys along the centerline for the banded solve.
    pub fn unknown_keys(&self) -> Vec<f64> {
        let d = &self.disc;
        let mut keys = Vec::with_capacity(self.n_unknowns());
        for k in 0..d.n_nodes() {
            keys.extend(std::iter::repeat_n(d.node_xi(k), 7));
        }
        for e in 0..d.n_multipliers() / (6 * d.p).max(1) {
            let (a, b) = d.element_interval(e);
            keys.extend(std::iter::repeat_n(0.5 * (a + b), 6 * d.p));
        }
        for bc in &self.bcs {
            keys.extend(std::iter::repeat_n(d.node_xi(bc.node()), bc.n_rows()));
        }
        keys
    }

    pub fn equation_keys(&self) -> Vec<f64> {
        let d = &self.disc;
        let mut keys = Vec::with_capacity(self.n_unknowns());
        for k in 0..d.n_nodes() {
            keys.extend(std::iter::repeat_n(d.node_xi(k), 6));
        }
        for e in 0..d.n_multipliers() / (6 * d.p).max(1) {
            let (a, b) = d.element_interval(e);
            keys.extend(std::iter::repeat_n(0.5 * (a + b), 6 * d.p));
        }
        keys.extend(d.node_xis());
        for bc in &self.bcs {
            keys.extend(std::iter::repeat_n(d.node_xi(bc.node()), bc.n_rows()));
        }
        keys
    }

    /// Element force rows `6(p+1)` followed by compliance rows `6p` (mixed only).
    fn element_kernel<T: RealField + Copy>(&self, e: usize, q_e: &[T], lam_e: &[T]) -> Vec<T> {
        let p = self.disc.p;
        let mixed = self.disc.formulation == Formulation::Mixed;
        let nf = 6 * (p + 1);
        let mut out = vec![T::zero(); nf + if mixed { 6 * p } else { 0 }];
        let lv = &self.law_vectors;
        for pt in &self.reference[e] {
            let kin = Kinematics::interpolate(&pt.n, &pt.dn, q_e);
            let a = kin.rotation();
            let gb = kin.gamma_bar(&a);
            let kb = kin.kappa_bar();
            let eg = gb - lift::<T>(&pt.gamma_bar0);
            let ek = kb - lift::<T>(&pt.kappa_bar0);
            let w: T = lit(pt.weight);
            let j: T = lit(pt.j);
            let (n, m) = if mixed {
                let mut n = Vector3::zeros();
                let mut m = Vector3::zeros();
                for (s, &mj) in pt.force_basis.iter().enumerate() {
                    let mj: T = lit(mj);
                    for c in 0..3 {
                        n[c] += lam_e[6 * s + c] * mj;
                        m[c] += lam_e[6 * s + 3 + c] * mj;
                    }
                }
                for (s, &mj) in pt.force_basis.iter().enumerate() {
                    let wm = w * lit::<T>(mj);
                    for c in 0..3 {
                        out[nf + 6 * s + c] += wm * (j * lit::<T>(lv.cg_inv[c]) * n[c] - eg[c]);
                        out[nf + 6 * s + 3 + c] += wm * (j * lit::<T>(lv.ck_inv[c]) * m[c] - ek[c]);
                    }
                }
                (n, m)
            } else {
                (eg.component_mul(&lift(&lv.cg)) / j, ek.component_mul(&lift(&lv.ck)) / j)
            };
            let an = a * n;
            let coupling = gb.cross(&n) + kb.cross(&m);
            for i in 0..=p {
                let ni: T = lit(pt.n[i]);
                let dni: T = lit(pt.dn[i]);
                for c in 0..3 {
                    out[6 * i + c] -= w * dni * an[c];
                    out[6 * i + 3 + c] -= w * (dni * m[c] - ni * coupling[c]);
                }
            }
        }
        out
    }

    fn element_locals(&self, e: usize, x: &DVector<f64>) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
        let dofs = self.disc.element_dofs(e);
        let lo = self.lambda_offset();
        let mut cols = dofs.kinematic.clone();
        cols.extend(dofs.multipliers.iter().map(|&i| lo + i));
        let mut rows = dofs.variation.clone();
        let co = self.compliance_row_offset();
        rows.extend(dofs.multipliers.iter().map(|&i| co + i));
        let u = gather(x.as_slice(), &cols);
        (rows, cols, u)
    }

    fn element_with_jacobian<const K: usize>(&self, e: usize, u: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        let nq = 7 * (self.disc.p + 1);
        let dual: Vec<DualSVec64<K>> =
            u.iter().enumerate().map(|(i, &v)| DualSVec64::<K>::from_re(v).derivative(i)).collect();
        let out = self.element_kernel(e, &dual[..nq], &dual[nq..]);
        let mut jac = DMatrix::zeros(out.len(), K);
        for (r, v) in out.iter().enumerate() {
            let d = v.eps.unwrap_generic(nalgebra::Const::<K>, nalgebra::U1);
            jac.row_mut(r).copy_from(&d.transpose());
        }
        (out.iter().map(|v| v.re).collect(), jac)
    }

    fn element_dispatch(&self, e: usize, u: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        match u.len() {
            14 => self.element_with_jacobian::<14>(e, u),
            20 => self.element_with_jacobian::<20>(e, u),
            21 => self.element_with_jacobian::<21>(e, u),
            33 => self.element_with_jacobian::<33>(e, u),
            k => unreachable!("no element with {k} local unknowns"),
        }
    }

    /// Point-load contribution `(f, m)` at a node, before scaling by `t`.
    fn point_load_kernel<T: RealField + Copy>(pl: &PointLoad, q_node: &[T]) -> [T; 6] {
        let a = rotation_of(q_node[3], &Vector3::new(q_node[4], q_node[5], q_node[6]));
        let f = match pl.force_frame {
            Frame::Inertial => lift(&pl.force),
            Frame::Body => a * lift::<T>(&pl.force),
        };
        let m = match pl.moment_frame {
            Frame::Body => lift(&pl.moment),
            Frame::Inertial => a.tr_mul(&lift::<T>(&pl.moment)),
        };
        [f[0], f[1], f[2], m[0], m[1], m[2]]
    }

    /// Constraint rows and generalized constraint forces `(δr, δφ)` of one
    /// boundary condition.
    fn bc_kernel<T: RealField + Copy>(&self, bc: &BoundaryCondition, q_node: &[T], lam: &[T], t: f64) -> (Vec<T>, [T; 6]) {
        let k = bc.node();
        let r0 = Vector3::new(self.q0[7 * k], self.q0[7 * k + 1], self.q0[7 * k + 2]).map(lit::<T>);
        let p0 = Vector4::new(self.q0[7 * k + 3], self.q0[7 * k + 4], self.q0[7 * k + 5], self.q0[7 * k + 6]);
        let r = Vector3::new(q_node[0], q_node[1], q_node[2]);
        let p = Vector4::new(q_node[3], q_node[4], q_node[5], q_node[6]);
        let mut force = [T::zero(); 6];
        match *bc {
            BoundaryCondition::Clamp { .. } => {
                let conj0 = Vector4::new(p0[0], -p0[1], -p0[2], -p0[3]).map(lit::<T>);
                let rel = hamilton(&conj0, &p);
                let dr = r - r0;
                force.copy_from_slice(&lam[..6]);
                (vec![dr[0], dr[1], dr[2], rel[1], rel[2], rel[3]], force)
            }
            BoundaryCondition::FixTranslation { components, .. } => {
                let mut rows = Vec::new();
                for c in (0..3).filter(|&c| components[c]) {
                    force[c] = lam[rows.len()];
                    rows.push(r[c] - r0[c]);
                }
                (rows, force)
            }
            BoundaryCondition::DrivenRotation { axis, angle, .. } => {
                let conj0 = Vector4::new(p0[0], -p0[1], -p0[2], -p0[3]).map(lit::<T>);
                let rel = hamilton(&p, &conj0);
                let half = 0.5 * angle * t;
                let a_t = lift::<T>(&axis);
                let g = (a_t[0] * rel[1] + a_t[1] * rel[2] + a_t[2] * rel[3]) * lit::<T>(half.cos())
                    - rel[0] * lit::<T>(half.sin());
                let a = rotation_of(p[0], &Vector3::new(p[1], p[2], p[3]));
                let dir = a.tr_mul(&a_t) * lam[0];
                force[3] = dir[0];
                force[4] = dir[1];
                force[5] = dir[2];
                (vec![g], force)
            }
        }
    }

    fn node_bc_with_jacobian(&self, i: usize, x: &DVector<f64>, t: f64) -> (Vec<f64>, [f64; 6], DMatrix<f64>) {
        const K: usize = 13;
        let bc = &self.bcs[i];
        let k = bc.node();
        let nr = bc.n_rows();
        let lo = self.bc_offset() + self.bc_offsets[i];
        let u: Vec<DualSVec64<K>> = (0..7)
            .map(|c| x[7 * k + c])
            .chain((0..nr).map(|c| x[lo + c]))
            .enumerate()
            .map(|(c, v)| DualSVec64::<K>::from_re(v).derivative(c))
            .collect();
        let (rows, force) = self.bc_kernel(bc, &u[..7], &u[7..], t);
        // Jacobian: rows first, then the six force rows
        let mut jac = DMatrix::zeros(nr + 6, 7 + nr);
        for (r, v) in rows.iter().chain(force.iter()).enumerate() {
            let d = v.eps.unwrap_generic(nalgebra::Const::<K>, nalgebra::U1);
            jac.row_mut(r).copy_from(&d.rows(0, 7 + nr).transpose());
        }
        let mut f = [0.0; 6];
        for c in 0..6 {
            f[c] = force[c].re;
        }
        (rows.iter().map(|v| v.re).collect(), f, jac)
    }

    fn bc_columns(&self, i: usize) -> Vec<usize> {
        let k = self.bcs[i].node();
        let lo = self.bc_offset() + self.bc_offsets[i];
        (7 * k..7 * k + 7).chain(lo..lo + self.bcs[i].n_rows()).collect()
    }

    fn distributed_forces(&self, t: f64) -> Result<DVector<f64>> {
        let d = &self.disc;
        let mut f = DVector::zeros(d.n_variation());
        let Some(dl) = self.load.distributed else {
            return Ok(f);
        };
        for e in 0..d.n_el {
            let interval = d.element_interval(e);
            let rule = d.external_quadrature(e, 0)?;
            let q_e = gather(self.q0.as_slice(), &d.element_dofs(e).kinematic);
            for (&xi, &w) in rule.points.iter().zip(&rule.weights) {
                let (n, dn) = lagrange_basis(d.p, interval, xi)?;
                let j = Kinematics::interpolate(&n, &dn, &q_e).r_xi.norm();
                for i in 0..=d.p {
                    let node = e * d.p + i;
                    let s = t * w * n[i] * j;
                    for c in 0..3 {
                        f[6 * node + c] += s * dl.force[c];
                        f[6 * node + 3 + c] += s * dl.moment[c];
                    }
                }
            }
        }
        Ok(f)
    }

    /// Equilibrium residual at load parameter `t`.
    pub fn residual(&self, x: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        Ok(self.assemble(x, t, false)?.0)
    }

    pub fn jacobian(&self, x: &DVector<f64>, t: f64) -> Result<Triplets> {
        Ok(self.assemble(x, t, true)?.1)
    }

    pub fn residual_and_jacobian(&self, x: &DVector<f64>, t: f64) -> Result<(DVector<f64>, Triplets)> {
        self.assemble(x, t, true)
    }

    fn check_quaternions(&self, x: &DVector<f64>) -> Result<()> {
        for k in 0..self.disc.n_nodes() {
            let norm = Vector4::new(x[7 * k + 3], x[7 * k + 4], x[7 * k + 5], x[7 * k + 6]).norm();
            if !(norm > crate::liegroup::DEGENERATE_NORM) {
                return Err(Error::DegenerateQuaternion { norm });
            }
        }
        Ok(())
    }

    fn assemble(&self, x: &DVector<f64>, t: f64, with_jacobian: bool) -> Result<(DVector<f64>, Triplets)> {
        self.check(x)?;
        self.check_quaternions(x)?;
        let n = self.n_unknowns();
        let mut f = DVector::zeros(n);
        let mut jac = Triplets::new(if with_jacobian { n } else { 0 });

        let elements: Vec<_> = (0..self.disc.n_el)
            .into_par_iter()
            .map(|e| {
                let (rows, cols, u) = self.element_locals(e, x);
                let nq = 7 * (self.disc.p + 1);
                let (vals, local) = if with_jacobian {
                    let (v, m) = self.element_dispatch(e, &u);
                    (v, Some(m))
                } else {
                    (self.element_kernel(e, &u[..nq], &u[nq..]), None)
                };
                (rows, cols, vals, local)
            })
            .collect();
        for (rows, cols, vals, local) in elements {
            for (&r, v) in rows.iter().zip(&vals) {
                f[r] += v;
            }
            if let Some(m) = local {
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in cols.iter().enumerate() {
                        jac.push(r, c, m[(a, b)]);
                    }
                }
            }
        }

        f.rows_mut(0, self.disc.n_variation()).add_assign(&self.distributed_forces(t)?);

        for pl in &self.load.point {
            let k = self.disc.boundary_node(pl.xi).ok_or(Error::MisplacedPointLoad(pl.xi))?;
            let dual: Vec<DualSVec64<7>> =
                (0..7).map(|c| DualSVec64::<7>::from_re(x[7 * k + c]).derivative(c)).collect();
            let terms = Self::point_load_kernel(pl, &dual);
            for (c, v) in terms.iter().enumerate() {
                f[6 * k + c] += t * v.re;
                if with_jacobian {
                    let d = v.eps.unwrap_generic(nalgebra::Const::<7>, nalgebra::U1);
                    for (b, dv) in d.iter().enumerate() {
                        jac.push(6 * k + c, 7 * k + b, t * dv);
                    }
                }
            }
        }

        let go = self.g_row_offset();
        for k in 0..self.disc.n_nodes() {
            let p = Vector4::new(x[7 * k + 3], x[7 * k + 4], x[7 * k + 5], x[7 * k + 6]);
            f[go + k] = p.norm_squared() - 1.0;
            if with_jacobian {
                for c in 0..4 {
                    jac.push(go + k, 7 * k + 3 + c, 2.0 * p[c]);
                }
            }
        }

        let bo = self.bc_row_offset();
        for i in 0..self.bcs.len() {
            let (rows, force, local) = self.node_bc_with_jacobian(i, x, t);
            let k = self.bcs[i].node();
            let nr = rows.len();
            for (r, v) in rows.iter().enumerate() {
                f[bo + self.bc_offsets[i] + r] = *v;
            }
            for c in 0..6 {
                f[6 * k + c] += force[c];
            }
            if with_jacobian {
                let cols = self.bc_columns(i);
                for a in 0..nr + 6 {
                    let row = if a < nr { bo + self.bc_offsets[i] + a } else { 6 * k + a - nr };
                    for (b, &c) in cols.iter().enumerate() {
                        jac.push(row, c, local[(a, b)]);
                    }
                }
            }
        }
        Ok((f, jac))
    }

    /// Quaternion unit-length defects `‖P_k‖² − 1`.
    pub fn quaternion_constraints(&self, q: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.disc.n_nodes(), |k, _| {
            Vector4::new(q[7 * k + 3], q[7 * k + 4], q[7 * k + 5], q[7 * k + 6]).norm_squared() - 1.0
        })
    }

    /// Element internal forces of the displacement-based formulation.
    pub fn element_internal_force_db(&self, e: usize, q: &DVector<f64>) -> Result<DVector<f64>> {
        if self.law.is_constrained() {
            return Err(Error::ConstrainedLaw);
        }
        let q_e = gather(q.as_slice(), &self.disc.element_dofs(e).kinematic);
        let mut db = self.clone();
        db.disc.formulation = Formulation::Displacement;
        Ok(DVector::from_vec(db.element_kernel::<f64>(e, &q_e, &[])))
    }

    /// Compliance force directions `W_c,e`, compliance matrix `K_c,e⁻¹` and
    /// strain vector `l_c,e` of one mixed element.
    pub fn element_mixed_blocks(&self, e: usize, q: &DVector<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>, DVector<f64>)> {
        let p = self.disc.p;
        let (nf, nl) = (6 * (p + 1), 6 * p);
        let q_e = gather(q.as_slice(), &self.disc.element_dofs(e).kinematic);
        let mut w_c = DMatrix::zeros(nf, nl);
        let mut k_c = DMatrix::zeros(nl, nl);
        let mut l_c = DVector::zeros(nl);
        let lv = &self.law_vectors;
        for pt in &self.reference[e] {
            let kin = Kinematics::interpolate(&pt.n, &pt.dn, &q_e);
            let norm = kin.p.norm();
            if norm <= crate::liegroup::DEGENERATE_NORM {
                return Err(Error::DegenerateQuaternion { norm });
            }
            let a = kin.rotation();
            let gb = kin.gamma_bar(&a);
            let kb = kin.kappa_bar();
            let w = pt.weight;
            for (s, &ms) in pt.force_basis.iter().enumerate() {
                for c in 0..3 {
                    let ec = Vector3::ith(c, 1.0);
                    let a_col = a * ec;
                    let gx = gb.cross(&ec);
                    let kx = kb.cross(&ec);
                    for i in 0..=p {
                        let (ni, dni) = (pt.n[i], pt.dn[i]);
                        for d in 0..3 {
                            w_c[(6 * i + d, 6 * s + c)] -= w * dni * ms * a_col[d];
                            w_c[(6 * i + 3 + d, 6 * s + c)] += w * ni * ms * gx[d];
                            w_c[(6 * i + 3 + d, 6 * s + 3 + c)] += w * ms * (ni * kx[d] - dni * ec[d]);
                        }
                    }
                    for (s2, &ms2) in pt.force_basis.iter().enumerate() {
                        k_c[(6 * s + c, 6 * s2 + c)] += w * ms * ms2 * pt.j * lv.cg_inv[c];
                        k_c[(6 * s + 3 + c, 6 * s2 + 3 + c)] += w * ms * ms2 * pt.j * lv.ck_inv[c];
                    }
                    l_c[6 * s + c] += w * ms * (gb[c] - pt.gamma_bar0[c]);
                    l_c[6 * s + 3 + c] += w * ms * (kb[c] - pt.kappa_bar0[c]);
                }
            }
        }
        Ok((w_c, k_c, l_c))
    }

    /// Strains at a parameter `xi` of the state `q`.
    pub fn strain_state(&self, q: &DVector<f64>, xi: f64) -> Result<StrainState> {
        let e = self.disc.element_of(xi)?;
        let (n, dn) = lagrange_basis(self.disc.p, self.disc.element_interval(e), xi)?;
        let dofs = self.disc.element_dofs(e);
        let k = Kinematics::interpolate(&n, &dn, &gather(q.as_slice(), &dofs.kinematic));
        let k0 = Kinematics::interpolate(&n, &dn, &gather(self.q0.as_slice(), &dofs.kinematic));
        for kin in [&k, &k0] {
            let norm = kin.p.norm();
            if norm <= crate::liegroup::DEGENERATE_NORM {
                return Err(Error::DegenerateQuaternion { norm });
            }
        }
        StrainState::new(
            k.gamma_bar(&k.rotation()),
            k.kappa_bar(),
            k0.gamma_bar(&k0.rotation()),
            k0.kappa_bar(),
            k0.r_xi.norm(),
        )
        .map_err(|_| Error::DegenerateTangent { xi, j: k0.r_xi.norm() })
    }

    /// Resultant contact force and moment in the cross-section basis at
    /// `xi`; from the law (displacement-based) or the multiplier field (mixed).
    pub fn contact_forces(&self, x: &DVector<f64>, xi: f64) -> Result<(Vector3<f64>, Vector3<f64>)> {
        self.check(x)?;
        match self.disc.formulation {
            Formulation::Displacement => {
                let q = x.rows(0, self.disc.n_kinematic()).into_owned();
                self.law.contact_forces(&self.strain_state(&q, xi)?)
            }
            Formulation::Mixed => {
                let e = self.disc.element_of(xi)?;
                let (mb, _) = lagrange_basis(self.disc.p - 1, self.disc.element_interval(e), xi)?;
                let o = self.lambda_offset() + 6 * self.disc.p * e;
                let mut n = Vector3::zeros();
                let mut m = Vector3::zeros();
                for (s, &ms) in mb.iter().enumerate() {
                    for c in 0..3 {
                        n[c] += ms * x[o + 6 * s + c];
                        m[c] += ms * x[o + 6 * s + 3 + c];
                    }
                }
                Ok((n, m))
            }
        }
    }

    /// Centerline position and orientation quaternion at `xi`.
    pub fn pose(&self, x: &DVector<f64>, xi: f64) -> Result<(Vector3<f64>, Quaternion)> {
        let q = x.rows(0, self.disc.n_kinematic()).into_owned();
        let k = crate::discretization::interpolate_kinematics(&self.disc, &q, xi)?;
        Ok((k.r, Quaternion::from_vector(&k.p)))
    }

    pub fn rotation_at(&self, x: &DVector<f64>, xi: f64) -> Result<Matrix3<f64>> {
        let (_, p) = self.pose(x, xi)?;
        Ok(*crate::liegroup::quat_to_rotation(&p)?.matrix())
    }
}

trait AddAssignRows {
    fn add_assign(&mut self, other: &DVector<f64>);
}

impl AddAssignRows for nalgebra::DVectorViewMut<'_, f64> {
    fn add_assign(&mut self, other: &DVector<f64>) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += b;
        }
    }
}
