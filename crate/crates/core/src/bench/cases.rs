//! Benchmark problem builders with their default parameters.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};

use crate::assembly::{BoundaryCondition, Frame, LoadCase, PointLoad, Problem};
use crate::discretization::{initialize_from_curve, Arc, Circle, Curve, Discretization, Formulation, Helix, Integration, Straight};
use crate::error::{Error, Result};
use crate::material::{Diagonals, ElasticLaw};
use crate::solver::SolverConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    Bend45,
    Helix,
    HelicalRollup,
    Ring,
    Cantilever,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::Bend45, CaseId::Helix, CaseId::HelicalRollup, CaseId::Ring, CaseId::Cantilever];
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bend45" => Ok(Self::Bend45),
            "helix" => Ok(Self::Helix),
            "helical_rollup" => Ok(Self::HelicalRollup),
            "ring" => Ok(Self::Ring),
            "cantilever" => Ok(Self::Cantilever),
            _ => Err(Error::Config(format!("unknown case '{s}'"))),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bend45 => "bend45",
            Self::Helix => "helix",
            Self::HelicalRollup => "helical_rollup",
            Self::Ring => "ring",
            Self::Cantilever => "cantilever",
        })
    }
}

/// Element family: polynomial degree, formulation and integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub p: usize,
    pub formulation: Formulation,
    pub integration: Integration,
}

impl Family {
    pub const fn new(p: usize, formulation: Formulation, integration: Integration) -> Self {
        Self { p, formulation, integration }
    }

    pub fn discretization(&self, n_el: usize) -> Result<Discretization> {
        Discretization::new(self.p, n_el, self.formulation, self.integration)
    }

    pub fn with_nodes(&self, n_nodes: usize) -> Result<Discretization> {
        Discretization::with_nodes(self.p, n_nodes, self.formulation, self.integration)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}_{}_{}", self.p, self.formulation, self.integration)
    }
}

/// A ready-to-solve problem with its solver settings.
#[derive(Clone, Debug)]
pub struct CaseSetup {
    pub problem: Problem,
    pub solver: SolverConfig,
}

fn clamp0() -> Vec<BoundaryCondition> {
    vec![BoundaryCondition::Clamp { node: 0 }]
}

fn build(disc: Discretization, law: ElasticLaw, curve: &dyn Curve, load: LoadCase, bcs: Vec<BoundaryCondition>) -> Result<Problem> {
    let q0 = initialize_from_curve(&disc, curve)?;
    Problem::new(disc, law, q0, load, bcs)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bend45Params {
    pub rho: f64,
    pub fz: f64,
    pub tol_db: f64,
    pub tol_mx: f64,
}

pub const BEND45_TABLE: [Bend45Params; 4] = [
    Bend45Params { rho: 1e1, fz: 6e6, tol_db: 1e-2, tol_mx: 1e-2 },
    Bend45Params { rho: 1e2, fz: 6e2, tol_db: 1e-6, tol_mx: 1e-6 },
    Bend45Params { rho: 1e3, fz: 6e-2, tol_db: 1e-8, tol_mx: 1e-10 },
    Bend45Params { rho: 1e4, fz: 6e-6, tol_db: 1e-10, tol_mx: 1e-13 },
];

pub const BEND45_RADIUS: f64 = 100.0;
pub const BEND45_INCREMENTS: usize = 50;

impl Bend45Params {
    pub fn for_rho(rho: f64) -> Result<Self> {
        BEND45_TABLE
            .iter()
            .find(|p| (p.rho / rho - 1.0).abs() < 1e-9)
            .copied()
            .ok_or_else(|| Error::Config(format!("no 45 degree bend parameters for slenderness {rho}")))
    }

    pub fn tol(&self, f: Formulation) -> f64 {
        match f {
            Formulation::Displacement => self.tol_db,
            Formulation::Mixed => self.tol_mx,
        }
    }

    /// Remark for rows whose absolute tolerance is large next to the load.
    pub fn tolerance_note(&self) -> Option<String> {
        (self.tol_db.max(self.tol_mx) > 1e-3).then(|| {
            format!("tolerance {:e} is used as tabulated although it is absolute and F_z = {:e}", self.tol_db, self.fz)
        })
    }
}

pub fn bend45_curve() -> Arc {
    Arc { radius: BEND45_RADIUS, angle: PI / 4.0 }
}

/// Precurved 45 degree arc clamped at its start with a vertical tip force.
pub fn bend45(rho: f64, family: Family, n_el: usize, n_increments: usize) -> Result<CaseSetup> {
    let params = Bend45Params::for_rho(rho)?;
    let e = 1e7;
    let law = ElasticLaw::square_section(e, 0.5 * e, BEND45_RADIUS / rho)?;
    let load = LoadCase {
        point: vec![PointLoad::force(1.0, Vector3::new(0.0, 0.0, params.fz), Frame::Inertial)],
        distributed: None,
    };
    let problem = build(family.discretization(n_el)?, law, &bend45_curve(), load, clamp0())?;
    Ok(CaseSetup { problem, solver: SolverConfig::new(params.tol(family.formulation), n_increments) })
}

pub const HELIX_SLENDERNESS: [f64; 4] = [1e1, 1e2, 1e3, 1e4];
pub const HELIX_TOLERANCES: [f64; 4] = [1e-8, 1e-10, 1e-12, 1e-14];
pub const HELIX_NODES: usize = 17;

pub fn helix_curve() -> Helix {
    Helix { r0: 10.0, h: 50.0, coils: 2.0 }
}

pub fn helix_tolerance(rho: f64) -> Result<f64> {
    HELIX_SLENDERNESS
        .iter()
        .position(|&r| (r / rho - 1.0).abs() < 1e-9)
        .map(|i| HELIX_TOLERANCES[i])
        .ok_or_else(|| Error::Config(format!("no helix tolerance for slenderness {rho}")))
}

pub fn helix_law(rho: f64) -> Result<ElasticLaw> {
    ElasticLaw::circular_section(1.0, 0.5, helix_curve().length() / (2.0 * rho))
}

/// Cross-section moment that rolls the straight rod into the helix.
pub fn helix_tip_moment(rho: f64) -> Result<Vector3<f64>> {
    let h = helix_curve();
    let c = h.pitch();
    let (_, ck) = helix_law(rho)?.stiffness()?;
    Ok(Vector3::new(c * ck.x, 0.0, ck.z) / (h.r0 * (1.0 + c * c)))
}

/// Straight rod tangent to the helix at its start.
pub fn helix_reference() -> Straight {
    let h = helix_curve();
    let (origin, frame) = h.placement(0.0);
    Straight { origin, frame, length: h.length() }
}

pub fn helix(rho: f64, family: Family, n_nodes: usize, n_increments: usize) -> Result<CaseSetup> {
    let law = helix_law(rho)?;
    let load = LoadCase { point: vec![PointLoad::moment(1.0, helix_tip_moment(rho)?, Frame::Body)], distributed: None };
    let problem = build(family.with_nodes(n_nodes)?, law, &helix_reference(), load, clamp0())?;
    Ok(CaseSetup { problem, solver: SolverConfig::new(helix_tolerance(rho)?, n_increments) })
}

pub const ROLLUP_LENGTH: f64 = 10.0;
pub const ROLLUP_NODES: usize = 61;
pub const ROLLUP_TOL: f64 = 1e-8;
pub const ROLLUP_INCREMENTS_MX: usize = 90;
pub const ROLLUP_INCREMENTS_DB: usize = 2048;

pub fn helical_rollup(family: Family, n_nodes: usize, n_increments: usize) -> Result<CaseSetup> {
    let law = ElasticLaw::from_stiffness(Diagonals { ke: 1e4, ksy: 1e4, ksz: 1e4, kt: 1e2, kby: 1e2, kbz: 1e2 })?;
    let curve = Straight { origin: Vector3::zeros(), frame: Matrix3::identity(), length: ROLLUP_LENGTH };
    let tip = PointLoad {
        xi: 1.0,
        force: Vector3::new(0.0, 0.0, 50.0),
        force_frame: Frame::Inertial,
        moment: Vector3::new(0.0, 0.0, 20.0 * PI * 1e2 / ROLLUP_LENGTH),
        moment_frame: Frame::Inertial,
    };
    let load = LoadCase { point: vec![tip], distributed: None };
    let problem = build(family.with_nodes(n_nodes)?, law, &curve, load, clamp0())?;
    Ok(CaseSetup { problem, solver: SolverConfig::new(ROLLUP_TOL, n_increments) })
}

pub const RING_RADIUS: f64 = 20.0;
pub const RING_ELEMENTS: usize = 20;
pub const RING_INCREMENTS: usize = 120;
pub const RING_TOL: f64 = 1e-6;
pub const RING_FINAL_ANGLE: f64 = 4.0 * PI;

pub fn ring_law() -> Result<ElasticLaw> {
    let e = 2.1e7;
    let g = e / (2.0 * 1.3);
    ElasticLaw::rectangular_section(e, g, 1.0 / 3.0, 1.0, g * 9.753e-3)
}

/// Closed ring clamped at both ends, rotated about `e_x` at its midpoint by
/// `final_angle · t`. `n_el` must be even.
pub fn ring(family: Family, n_el: usize, n_increments: usize, final_angle: f64) -> Result<CaseSetup> {
    if !n_el.is_multiple_of(2) {
        return Err(Error::InvalidDiscretization("the ring needs an even element count".into()));
    }
    let disc = family.discretization(n_el)?;
    let last = disc.n_nodes() - 1;
    let bcs = vec![
        BoundaryCondition::Clamp { node: 0 },
        BoundaryCondition::Clamp { node: last },
        BoundaryCondition::DrivenRotation { node: last / 2, axis: Vector3::x(), angle: final_angle },
    ];
    let problem = build(disc, ring_law()?, &Circle { radius: RING_RADIUS }, LoadCase::default(), bcs)?;
    Ok(CaseSetup { problem, solver: SolverConfig::new(RING_TOL, n_increments) })
}

/// Index of the driven-rotation condition in a ring setup.
pub const RING_DRIVER: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CantileverLaw {
    Unconstrained,
    ShearStiff,
    Inextensible,
}

impl CantileverLaw {
    pub const ALL: [CantileverLaw; 3] = [Self::Unconstrained, Self::ShearStiff, Self::Inextensible];

    pub fn law(&self) -> Result<ElasticLaw> {
        let (ke, ks) = match self {
            Self::Unconstrained => (0.2, 1.0),
            Self::ShearStiff => (0.2, 0.0),
            Self::Inextensible => (0.0, 0.0),
        };
        ElasticLaw::from_compliance(Diagonals { ke, ksy: ks, ksz: ks, kt: 2.0, kby: 0.5, kbz: 0.5 })
    }
}

impl fmt::Display for CantileverLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unconstrained => "unconstrained",
            Self::ShearStiff => "shear_stiff",
            Self::Inextensible => "inextensible",
        })
    }
}

pub const CANTILEVER_LENGTH: f64 = 2.0 * PI;
pub const CANTILEVER_KBZ: f64 = 2.0;
pub const CANTILEVER_LEVER: f64 = 2.5;
pub const CANTILEVER_ALPHA2_MAX: f64 = 10.0;
pub const CANTILEVER_ELEMENTS: usize = 4;
pub const CANTILEVER_INCREMENTS: usize = 40;
pub const CANTILEVER_TOL: f64 = 1e-12;

/// Tip force magnitude for the load parameter `α²`.
pub fn cantilever_force(alpha2: f64) -> f64 {
    CANTILEVER_KBZ * alpha2 / CANTILEVER_LENGTH.powi(2)
}

/// Straight cantilever under a tip force `(0, −P, 0)`, optionally with the
/// tip moment `(0, 0, eP)`, where `P` corresponds to `alpha2` at `t = 1`.
pub fn cantilever(
    law: CantileverLaw,
    with_moment: bool,
    alpha2: f64,
    family: Family,
    n_el: usize,
    n_increments: usize,
) -> Result<CaseSetup> {
    let p = cantilever_force(alpha2);
    let curve = Straight { origin: Vector3::zeros(), frame: Matrix3::identity(), length: CANTILEVER_LENGTH };
    let moment = if with_moment { Vector3::new(0.0, 0.0, CANTILEVER_LEVER * p) } else { Vector3::zeros() };
    let tip = PointLoad {
        xi: 1.0,
        force: Vector3::new(0.0, -p, 0.0),
        force_frame: Frame::Inertial,
        moment,
        moment_frame: Frame::Body,
    };
    let load = LoadCase { point: vec![tip], distributed: None };
    let problem = build(family.discretization(n_el)?, law.law()?, &curve, load, clamp0())?;
    Ok(CaseSetup { problem, solver: SolverConfig::new(CANTILEVER_TOL, n_increments) })
}
