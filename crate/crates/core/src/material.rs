//! Quadratic hyperelastic rod laws with diagonal stiffness.
//!
//! A law always stores its compliance diagonals. The stiffness diagonals are
//! only available when every compliance entry is strictly positive; a zero
//! compliance entry makes the corresponding strain direction rigid, which is
//! only meaningful for the mixed formulation.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal entries `(ke, ksy, ksz, kt, kby, kbz)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagonals {
    pub ke: f64,
    pub ksy: f64,
    pub ksz: f64,
    pub kt: f64,
    pub kby: f64,
    pub kbz: f64,
}

impl Diagonals {
    fn split(&self) -> (Vector3<f64>, Vector3<f64>) {
        (Vector3::new(self.ke, self.ksy, self.ksz), Vector3::new(self.kt, self.kby, self.kbz))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticLaw {
    stiffness: Option<(Vector3<f64>, Vector3<f64>)>,
    compliance_gamma: Vector3<f64>,
    compliance_kappa: Vector3<f64>,
}

impl ElasticLaw {
    pub fn from_stiffness(d: Diagonals) -> Result<Self> {
        let (cg, ck) = d.split();
        if cg.iter().chain(ck.iter()).any(|&k| !(k > 0.0) || !k.is_finite()) {
            return Err(Error::InvalidLaw("stiffness entries must be finite and positive".into()));
        }
        Ok(Self {
            stiffness: Some((cg, ck)),
            compliance_gamma: cg.map(|k| 1.0 / k),
            compliance_kappa: ck.map(|k| 1.0 / k),
        })
    }

    /// Law given by its compliance diagonals; zero entries are rigid directions.
    pub fn from_compliance(d: Diagonals) -> Result<Self> {
        let (cg, ck) = d.split();
        if cg.iter().chain(ck.iter()).any(|&c| !(c >= 0.0) || !c.is_finite()) {
            return Err(Error::InvalidLaw("compliance entries must be finite and non-negative".into()));
        }
        let stiffness = if cg.iter().chain(ck.iter()).all(|&c| c > 0.0) {
            Some((cg.map(|c| 1.0 / c), ck.map(|c| 1.0 / c)))
        } else {
            None
        };
        Ok(Self { stiffness, compliance_gamma: cg, compliance_kappa: ck })
    }

    /// Saint-Venant stiffness of a rod with cross-section area `area`,
    /// second moments `iy`, `iz` and torsional stiffness `kt`.
    pub fn from_section(e: f64, g: f64, area: f64, iy: f64, iz: f64, kt: f64) -> Result<Self> {
        Self::from_stiffness(Diagonals {
            ke: e * area,
            ksy: g * area,
            ksz: g * area,
            kt,
            kby: e * iy,
            kbz: e * iz,
        })
    }

    /// Square cross-section of width `w`; polar stiffness `2 G I`.
    pub fn square_section(e: f64, g: f64, w: f64) -> Result<Self> {
        let area = w * w;
        let i = w.powi(4) / 12.0;
        Self::from_section(e, g, area, i, i, 2.0 * g * i)
    }

    /// Circular cross-section of radius `r`; polar stiffness `2 G I`.
    pub fn circular_section(e: f64, g: f64, r: f64) -> Result<Self> {
        let area = std::f64::consts::PI * r * r;
        let i = std::f64::consts::PI * r.powi(4) / 4.0;
        Self::from_section(e, g, area, i, i, 2.0 * g * i)
    }

    /// Rectangular cross-section: width `w` along the local y axis, height `h`
    /// along the local z axis, with a prescribed torsional stiffness.
    pub fn rectangular_section(e: f64, g: f64, w: f64, h: f64, kt: f64) -> Result<Self> {
        Self::from_section(e, g, w * h, w * h.powi(3) / 12.0, h * w.powi(3) / 12.0, kt)
    }

    pub fn is_constrained(&self) -> bool {
        self.stiffness.is_none()
    }

    pub fn stiffness(&self) -> Result<(Vector3<f64>, Vector3<f64>)> {
        self.stiffness.ok_or(Error::ConstrainedLaw)
    }

    pub fn compliance(&self) -> (Vector3<f64>, Vector3<f64>) {
        (self.compliance_gamma, self.compliance_kappa)
    }

    pub fn strain_energy(&self, s: &StrainState) -> Result<f64> {
        let (cg, ck) = self.stiffness()?;
        let eg = s.eps_gamma();
        let ek = s.eps_kappa();
        Ok(0.5 * eg.dot(&cg.component_mul(&eg)) + 0.5 * ek.dot(&ck.component_mul(&ek)))
    }

    pub fn complementary_energy(&self, n: &Vector3<f64>, m: &Vector3<f64>) -> f64 {
        0.5 * n.dot(&self.compliance_gamma.component_mul(n))
            + 0.5 * m.dot(&self.compliance_kappa.component_mul(m))
    }

    /// Resultant contact force and moment in the cross-section basis.
    pub fn contact_forces(&self, s: &StrainState) -> Result<(Vector3<f64>, Vector3<f64>)> {
        let (cg, ck) = self.stiffness()?;
        Ok((cg.component_mul(&s.eps_gamma()), ck.component_mul(&s.eps_kappa())))
    }
}

/// Stretched strains at a point together with their reference values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrainState {
    pub gamma_bar: Vector3<f64>,
    pub kappa_bar: Vector3<f64>,
    pub gamma_bar0: Vector3<f64>,
    pub kappa_bar0: Vector3<f64>,
    /// Reference tangent length.
    pub j: f64,
}

impl StrainState {
    pub fn new(
        gamma_bar: Vector3<f64>,
        kappa_bar: Vector3<f64>,
        gamma_bar0: Vector3<f64>,
        kappa_bar0: Vector3<f64>,
        j: f64,
    ) -> Result<Self> {
        if !(j > 0.0) {
            return Err(Error::DegenerateTangent { xi: f64::NAN, j });
        }
        Ok(Self { gamma_bar, kappa_bar, gamma_bar0, kappa_bar0, j })
    }

    /// State with the given arc-length strain measures and a unit tangent.
    pub fn from_measures(eps_gamma: Vector3<f64>, eps_kappa: Vector3<f64>) -> Self {
        Self {
            gamma_bar: eps_gamma,
            kappa_bar: eps_kappa,
            gamma_bar0: Vector3::zeros(),
            kappa_bar0: Vector3::zeros(),
            j: 1.0,
        }
    }

    pub fn eps_gamma(&self) -> Vector3<f64> {
        (self.gamma_bar - self.gamma_bar0) / self.j
    }

    pub fn eps_kappa(&self) -> Vector3<f64> {
        (self.kappa_bar - self.kappa_bar0) / self.j
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> ElasticLaw {
        ElasticLaw::from_stiffness(Diagonals { ke: 1.0, ksy: 1.0, ksz: 1.0, kt: 1.0, kby: 1.0, kbz: 1.0 }).unwrap()
    }

    #[test]
    fn zero_strain_has_zero_energy_and_forces() {
        let s = StrainState::from_measures(Vector3::zeros(), Vector3::zeros());
        assert_eq!(unit().strain_energy(&s).unwrap(), 0.0);
        let (n, m) = unit().contact_forces(&s).unwrap();
        assert_eq!(n, Vector3::zeros());
        assert_eq!(m, Vector3::zeros());
    }

    #[test]
    fn unit_quadratic() {
        let s = StrainState::from_measures(Vector3::x(), Vector3::zeros());
        assert_eq!(unit().strain_energy(&s).unwrap(), 0.5);
    }

    #[test]
    fn diagonal_scaling() {
        let law = ElasticLaw::from_stiffness(Diagonals { ke: 2.0, ksy: 3.0, ksz: 4.0, kt: 1.0, kby: 1.0, kbz: 1.0 })
            .unwrap();
        let s = StrainState::from_measures(Vector3::new(1.0, 1.0, 1.0), Vector3::zeros());
        let (n, _) = law.contact_forces(&s).unwrap();
        assert_eq!(n, Vector3::new(2.0, 3.0, 4.0));
    }

    #[test]
    fn complementary_energy_values() {
        let law = ElasticLaw::from_compliance(Diagonals { ke: 0.2, ksy: 1.0, ksz: 1.0, kt: 2.0, kby: 0.5, kbz: 0.5 })
            .unwrap();
        let e = law.complementary_energy(&Vector3::new(1.0, 1.0, 1.0), &Vector3::zeros());
        assert_relative_eq!(e, 1.1, epsilon = 1e-15);

        let rigid = ElasticLaw::from_compliance(Diagonals { ke: 0.0, ksy: 0.0, ksz: 0.0, kt: 2.0, kby: 0.5, kbz: 0.5 })
            .unwrap();
        assert_eq!(rigid.complementary_energy(&Vector3::new(3.0, -1.0, 7.0), &Vector3::zeros()), 0.0);
        assert_eq!(law.complementary_energy(&Vector3::zeros(), &Vector3::zeros()), 0.0);
    }

    #[test]
    fn constrained_law_has_no_stiffness() {
        let law = ElasticLaw::from_compliance(Diagonals { ke: 0.2, ksy: 0.0, ksz: 0.0, kt: 2.0, kby: 0.5, kbz: 0.5 })
            .unwrap();
        assert!(law.is_constrained());
        let s = StrainState::from_measures(Vector3::x(), Vector3::zeros());
        assert_eq!(law.strain_energy(&s), Err(Error::ConstrainedLaw));
        assert_eq!(law.contact_forces(&s), Err(Error::ConstrainedLaw));
    }

    #[test]
    fn invalid_entries_are_rejected() {
        let bad = Diagonals { ke: -1.0, ksy: 1.0, ksz: 1.0, kt: 1.0, kby: 1.0, kbz: 1.0 };
        assert!(ElasticLaw::from_stiffness(bad).is_err());
        assert!(ElasticLaw::from_compliance(bad).is_err());
        let zero = Diagonals { ke: 0.0, ..bad };
        assert!(ElasticLaw::from_stiffness(zero).is_err());
    }

    #[test]
    fn stiffness_and_compliance_are_inverse() {
        let law = ElasticLaw::square_section(1e7, 5e6, 0.1).unwrap();
        let (cg, ck) = law.stiffness().unwrap();
        let (ig, ik) = law.compliance();
        for i in 0..3 {
            assert_relative_eq!(cg[i] * ig[i], 1.0, epsilon = 1e-14);
            assert_relative_eq!(ck[i] * ik[i], 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn section_builders() {
        // 45 degree bend, w = 1
        let law = ElasticLaw::square_section(1e7, 0.5e7, 1.0).unwrap();
        let (cg, ck) = law.stiffness().unwrap();
        assert_eq!(cg, Vector3::new(1e7, 0.5e7, 0.5e7));
        assert_relative_eq!(ck, Vector3::new(2.0 * 0.5e7 / 12.0, 1e7 / 12.0, 1e7 / 12.0), epsilon = 1e-9);

        // elastic ring: custom torsion
        let e = 2.1e7;
        let g = e / (2.0 * 1.3);
        let law = ElasticLaw::rectangular_section(e, g, 1.0 / 3.0, 1.0, g * 9.753e-3).unwrap();
        let (cg, ck) = law.stiffness().unwrap();
        assert_relative_eq!(cg.x, e / 3.0, max_relative = 1e-15);
        assert_relative_eq!(ck.x, g * 9.753e-3, max_relative = 1e-15);
        assert_relative_eq!(ck.y, e / 36.0, max_relative = 1e-14);
        assert_relative_eq!(ck.z, e / (27.0 * 12.0), max_relative = 1e-14);
    }
}
