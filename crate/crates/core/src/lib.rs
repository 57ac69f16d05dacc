//! Total Lagrangian Petrov–Galerkin finite elements for Cosserat rods with
//! nodal positions and non-unit quaternions, in a displacement-based and a
//! mixed (Hellinger–Reissner) variant.

pub mod assembly;
pub mod discretization;
pub mod error;
pub mod liegroup;
pub mod linalg;
pub mod material;
pub mod solver;

pub use error::{Error, Result};
pub mod bench;
