//! TOML description of a single rod problem.
//!
//! ```toml
//! [discretization]
//! p = 2
//! n_el = 4
//! formulation = "MX"
//! integration = "full"
//!
//! [material]
//! stiffness = { ke = 1e4, ksy = 1e4, ksz = 1e4, kt = 1e2, kby = 1e2, kbz = 1e2 }
//!
//! [geometry]
//! kind = "straight"
//! length = 10.0
//!
//! [[load.point]]
//! xi = 1.0
//! force = [0.0, 0.0, 1.0]
//!
//! [[bc]]
//! kind = "clamp"
//! xi = 0.0
//!
//! [solver]
//! tol = 1e-8
//! n_increments = 10
//! ```

use nalgebra::{Matrix3, Vector3};
use serde::Deserialize;

use crate::assembly::{BoundaryCondition, DistributedLoad, Frame, LoadCase, PointLoad, Problem};
use crate::discretization::{initialize_from_curve, Arc, Circle, Curve, Discretization, Formulation, Helix, Integration, Straight};
use crate::error::{Error, Result};
use crate::liegroup::{orthonormality_defect, ROTATION_TOLERANCE};
use crate::material::{Diagonals, ElasticLaw};
use crate::solver::{SolverConfig, DEFAULT_MAX_ITER};

/// Upper bound on the element count accepted from a file.
pub const MAX_ELEMENTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub discretization: DiscretizationSection,
    pub material: MaterialSection,
    pub geometry: GeometrySection,
    #[serde(default)]
    pub load: LoadSection,
    #[serde(default)]
    pub bc: Vec<BcSection>,
    pub solver: SolverSection,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationSection {
    pub p: usize,
    pub n_el: usize,
    pub formulation: Formulation,
    pub integration: Integration,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    pub stiffness: Option<Diagonals>,
    pub compliance: Option<Diagonals>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometrySection {
    Straight {
        length: f64,
        #[serde(default)]
        origin: Option<[f64; 3]>,
        /// Rows are the cross-section basis vectors `e_x, e_y, e_z`.
        #[serde(default)]
        axes: Option<[[f64; 3]; 3]>,
    },
    Arc {
        radius: f64,
        angle: f64,
    },
    Helix {
        radius: f64,
        height: f64,
        coils: f64,
    },
    Circle {
        radius: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSection {
    #[serde(default)]
    pub point: Vec<PointLoadSection>,
    pub distributed: Option<DistributedSection>,
}

fn inertial() -> Frame {
    Frame::Inertial
}

fn body() -> Frame {
    Frame::Body
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointLoadSection {
    pub xi: f64,
    #[serde(default)]
    pub force: [f64; 3],
    #[serde(default = "inertial")]
    pub force_frame: Frame,
    #[serde(default)]
    pub moment: [f64; 3],
    #[serde(default = "body")]
    pub moment_frame: Frame,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributedSection {
    #[serde(default)]
    pub force: [f64; 3],
    #[serde(default)]
    pub moment: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BcSection {
    Clamp { xi: f64 },
    FixTranslation { xi: f64, components: Vec<String> },
    DrivenRotation { xi: f64, axis: [f64; 3], angle: f64 },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub tol: f64,
    pub n_increments: Option<usize>,
    #[serde(default)]
    pub auto_increments: bool,
    pub max_iter: Option<usize>,
}

/// How the load parameter is stepped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Increments {
    Fixed(usize),
    /// Smallest convergent power of two.
    Auto,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
}

fn finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} must be finite")))
    }
}

impl RunConfig {
    pub fn discretization(&self) -> Result<Discretization> {
        let d = &self.discretization;
        if d.n_el > MAX_ELEMENTS {
            return Err(Error::Config(format!("n_el {} exceeds {MAX_ELEMENTS}", d.n_el)));
        }
        Discretization::new(d.p, d.n_el, d.formulation, d.integration)
    }

    pub fn law(&self) -> Result<ElasticLaw> {
        match (&self.material.stiffness, &self.material.compliance) {
            (Some(s), None) => ElasticLaw::from_stiffness(*s),
            (None, Some(c)) => ElasticLaw::from_compliance(*c),
            _ => Err(Error::Config("material needs exactly one of 'stiffness' or 'compliance'".into())),
        }
    }

    pub fn curve(&self) -> Result<Box<dyn Curve>> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Config(format!("{what} must be positive")))
            }
        };
        Ok(match &self.geometry {
            GeometrySection::Straight { length, origin, axes } => {
                let origin = origin.unwrap_or([0.0; 3]);
                finite(&origin, "origin")?;
                let frame = match axes {
                    Some(a) => {
                        finite(a.as_flattened(), "axes")?;
                        Matrix3::from_columns(&[Vector3::from(a[0]), Vector3::from(a[1]), Vector3::from(a[2])])
                    }
                    None => Matrix3::identity(),
                };
                let defect = orthonormality_defect(&frame);
                if defect > ROTATION_TOLERANCE || frame.determinant() < 0.0 {
                    return Err(Error::NotARotation { defect });
                }
                Box::new(Straight { origin: Vector3::from(origin), frame, length: positive(*length, "length")? })
            }
            GeometrySection::Arc { radius, angle } => {
                finite(&[*angle], "angle")?;
                Box::new(Arc { radius: positive(*radius, "radius")?, angle: *angle })
            }
            GeometrySection::Helix { radius, height, coils } => Box::new(Helix {
                r0: positive(*radius, "radius")?,
                h: positive(*height, "height")?,
                coils: positive(*coils, "coils")?,
            }),
            GeometrySection::Circle { radius } => Box::new(Circle { radius: positive(*radius, "radius")? }),
        })
    }

    pub fn load_case(&self) -> Result<LoadCase> {
        let mut point = Vec::new();
        for pl in &self.load.point {
            finite(&[pl.xi], "xi")?;
            finite(&pl.force, "force")?;
            finite(&pl.moment, "moment")?;
            point.push(PointLoad {
                xi: pl.xi,
                force: Vector3::from(pl.force),
                force_frame: pl.force_frame,
                moment: Vector3::from(pl.moment),
                moment_frame: pl.moment_frame,
            });
        }
        let distributed = match &self.load.distributed {
            Some(d) => {
                finite(&d.force, "force")?;
                finite(&d.moment, "moment")?;
                Some(DistributedLoad { force: Vector3::from(d.force), moment: Vector3::from(d.moment) })
            }
            None => None,
        };
        Ok(LoadCase { point, distributed })
    }

    pub fn boundary_conditions(&self, disc: &Discretization) -> Result<Vec<BoundaryCondition>> {
        let node = |xi: f64| -> Result<usize> {
            let s = xi * (disc.n_nodes() - 1) as f64;
            let k = s.round();
            if !xi.is_finite() || (s - k).abs() > 1e-9 || k < 0.0 || k > (disc.n_nodes() - 1) as f64 {
                return Err(Error::Config(format!("boundary condition at xi = {xi} is not on a node")));
            }
            Ok(k as usize)
        };
        self.bc
            .iter()
            .map(|bc| match bc {
                BcSection::Clamp { xi } => Ok(BoundaryCondition::Clamp { node: node(*xi)? }),
                BcSection::FixTranslation { xi, components } => {
                    let mut c = [false; 3];
                    for name in components {
                        let i = match name.as_str() {
                            "x" => 0,
                            "y" => 1,
                            "z" => 2,
                            _ => return Err(Error::Config(format!("unknown component '{name}'"))),
                        };
                        c[i] = true;
                    }
                    Ok(BoundaryCondition::FixTranslation { node: node(*xi)?, components: c })
                }
                BcSection::DrivenRotation { xi, axis, angle } => {
                    finite(axis, "axis")?;
                    finite(&[*angle], "angle")?;
                    let a = Vector3::from(*axis);
                    let norm = a.norm();
                    if !(norm > 0.0) {
                        return Err(Error::Config("driven rotation axis must be non-zero".into()));
                    }
                    Ok(BoundaryCondition::DrivenRotation { node: node(*xi)?, axis: a / norm, angle: *angle })
                }
            })
            .collect()
    }

    pub fn solver(&self) -> Result<(SolverConfig, Increments)> {
        let s = &self.solver;
        let increments = match (s.n_increments, s.auto_increments) {
            (Some(n), false) => Increments::Fixed(n),
            (None, true) => Increments::Auto,
            _ => return Err(Error::Config("solver needs exactly one of 'n_increments' or 'auto_increments = true'".into())),
        };
        let cfg = SolverConfig {
            tol: s.tol,
            n_increments: match increments {
                Increments::Fixed(n) => n,
                Increments::Auto => 1,
            },
            max_iter: s.max_iter.unwrap_or(DEFAULT_MAX_ITER),
        };
        cfg.validate()?;
        Ok((cfg, increments))
    }

    /// Problem and solver settings described by the file.
    pub fn build(&self) -> Result<(Problem, SolverConfig, Increments)> {
        let (cfg, increments) = self.solver()?;
        let disc = self.discretization()?;
        let law = self.law()?;
        let q0 = initialize_from_curve(&disc, self.curve()?.as_ref())?;
        let bcs = self.boundary_conditions(&disc)?;
        let problem = Problem::new(disc, law, q0, self.load_case()?, bcs)?;
        Ok((problem, cfg, increments))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
[discretization]
p = 2
n_el = 4
formulation = "MX"
integration = "full"

[material]
compliance = { ke = 0.0, ksy = 0.0, ksz = 0.0, kt = 2.0, kby = 0.5, kbz = 0.5 }

[geometry]
kind = "straight"
length = 6.283185307179586

[[load.point]]
xi = 1.0
force = [0.0, -0.5, 0.0]
moment = [0.0, 0.0, 1.25]

[[bc]]
kind = "clamp"
xi = 0.0

[solver]
tol = 1e-12
n_increments = 40
"#;

    #[test]
    fn example_builds() {
        let cfg = parse_config(EXAMPLE).unwrap();
        let (problem, solver, inc) = cfg.build().unwrap();
        assert_eq!(problem.disc.n_nodes(), 9);
        assert!(problem.law.is_constrained());
        assert_eq!(inc, Increments::Fixed(40));
        assert_eq!(solver.max_iter, DEFAULT_MAX_ITER);
        assert_eq!(problem.load.point[0].moment_frame, Frame::Body);
        assert_eq!(problem.load.point[0].force_frame, Frame::Inertial);
    }

    #[test]
    fn material_blocks_are_exclusive() {
        let both = EXAMPLE.replace(
            "[material]\n",
            "[material]\nstiffness = { ke = 1.0, ksy = 1.0, ksz = 1.0, kt = 1.0, kby = 1.0, kbz = 1.0 }\n",
        );
        assert!(matches!(parse_config(&both).unwrap().build(), Err(Error::Config(_))));
    }

    #[test]
    fn increments_are_exclusive() {
        let both = EXAMPLE.replace("n_increments = 40", "n_increments = 40\nauto_increments = true");
        assert!(matches!(parse_config(&both).unwrap().build(), Err(Error::Config(_))));
        let auto = EXAMPLE.replace("n_increments = 40", "auto_increments = true");
        assert_eq!(parse_config(&auto).unwrap().build().unwrap().2, Increments::Auto);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse_config(&EXAMPLE.replace("p = 2", "p = 2\nq = 1")), Err(Error::Config(_))));
        assert!(matches!(parse_config("not toml ["), Err(Error::Config(_))));
    }

    #[test]
    fn boundary_conditions_must_sit_on_nodes() {
        let off = EXAMPLE.replace("xi = 0.0", "xi = 0.1");
        assert!(matches!(parse_config(&off).unwrap().build(), Err(Error::Config(_))));
    }
}
