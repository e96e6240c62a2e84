//! A complete scattering problem and dispatch to the available representations.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Result, WedgeError};
use crate::field::{FieldDecomposition, FieldFlag, TermKind, ZoneTerm};
use crate::geometry::{BoundaryCondition, ComplexAngle, FieldPoint, ImpedanceFaces, IncidentPlaneWave, WedgeGeometry};
use crate::ideal::{geometrical_acoustics_with, ideal_total_edge, DirectivityKernel, GateShift};
use crate::impedance::{FarFieldCoefficient, ImpedanceWedge, FAR_FIELD_WARN_BAND};
use crate::quadrature::QuadratureConfig;
use crate::sommerfeld::{dirichlet_total_contour, g_function};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Secondary edge sources along the edge.
    Edge,
    /// Steepest-descent contour integral (right-angled wedge only).
    Contour,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Edge => "edge",
            Representation::Contour => "contour",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Representation {
    type Err = WedgeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(Representation::Edge),
            "contour" => Ok(Representation::Contour),
            other => Err(WedgeError::Config(format!("unknown representation '{other}'"))),
        }
    }
}

/// Wedge, boundary condition and incident plane wave.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WedgeProblem {
    pub wedge: WedgeGeometry,
    pub bc: BoundaryCondition,
    pub incidence: IncidentPlaneWave,
}

impl WedgeProblem {
    pub fn new(wedge: WedgeGeometry, bc: BoundaryCondition, incidence: IncidentPlaneWave) -> Result<Self> {
        incidence.validate(&wedge)?;
        if !incidence.is_perpendicular() {
            return Err(WedgeError::Incidence("only perpendicular plane-wave incidence is supported".into()));
        }
        let problem = Self { wedge, bc, incidence };
        if let BoundaryCondition::Impedance(faces) = bc {
            if !wedge.is_right_angled() {
                return Err(WedgeError::Geometry("impedance faces require the right-angled wedge".into()));
            }
            ImpedanceWedge::new(faces, &incidence)?;
        }
        Ok(problem)
    }

    /// Right-angled wedge with real incidence angle `theta0` and wavenumber `k`.
    pub fn right_angled(bc: BoundaryCondition, theta0: impl Into<ComplexAngle>, k: f64) -> Result<Self> {
        Self::new(WedgeGeometry::right_angled(), bc, IncidentPlaneWave::perpendicular(theta0, k)?)
    }

    fn impedance(&self) -> Option<Result<ImpedanceWedge>> {
        match self.bc {
            BoundaryCondition::Impedance(faces) => Some(ImpedanceWedge::new(faces, &self.incidence)),
            BoundaryCondition::Neumann if self.wedge.is_right_angled() && self.incidence.theta0.is_real() => {
                Some(ImpedanceWedge::new(ImpedanceFaces::rigid(), &self.incidence))
            }
            _ => None,
        }
    }

    pub fn supports(&self, repr: Representation) -> bool {
        match repr {
            Representation::Edge => true,
            Representation::Contour => {
                self.wedge.is_right_angled()
                    && match self.bc {
                        BoundaryCondition::Dirichlet | BoundaryCondition::Impedance(_) => true,
                        BoundaryCondition::Neumann => self.incidence.theta0.is_real(),
                        _ => false,
                    }
            }
        }
    }

    fn unsupported(&self, repr: Representation) -> WedgeError {
        WedgeError::Config(format!(
            "no {} representation for a {} wedge with θ_W = {} and θ0 = {}{:+}i",
            repr,
            self.bc.name(),
            self.wedge.theta_w(),
            self.incidence.theta0.re,
            self.incidence.theta0.im
        ))
    }

    /// Total field and its decomposition at one receiver.
    pub fn evaluate(&self, rcv: &FieldPoint, repr: Representation, quad: &QuadratureConfig) -> Result<FieldDecomposition> {
        if !self.supports(repr) {
            return Err(self.unsupported(repr));
        }
        match (repr, self.bc) {
            (Representation::Edge, BoundaryCondition::Impedance(_)) => {
                self.impedance().expect("impedance problem")?.total_edge(rcv, quad)
            }
            (Representation::Edge, bc) => ideal_total_edge(&self.wedge, &bc, &self.incidence, rcv, quad),
            (Representation::Contour, BoundaryCondition::Dirichlet) => dirichlet_total_contour(&self.incidence, rcv, quad),
            (Representation::Contour, _) => self.impedance().expect("contour support checked")?.total_contour(rcv, quad),
        }
    }

    /// Gated geometrical terms as the given representation splits them.
    pub fn zone_terms(&self, theta: f64, repr: Representation) -> Result<Vec<ZoneTerm>> {
        let rcv = FieldPoint::new(1.0, theta);
        if let Some(w) = self.impedance() {
            let w = w?;
            return Ok(match repr {
                Representation::Edge => w.terms_edge(theta).0,
                Representation::Contour => w.terms_contour(theta),
            });
        }
        let shift = match repr {
            Representation::Edge => GateShift::None,
            Representation::Contour => GateShift::Gudermannian,
        };
        geometrical_acoustics_with(&self.wedge, &self.incidence, &rcv, &self.bc, shift)
    }

    /// Steepest-descent coefficient `D` with `p_d ≈ D e^{ikr}/√(kr)`, flagged
    /// near zone boundaries. Uses the contour gates where they exist.
    pub fn far_field(&self, theta: f64) -> Result<FarFieldCoefficient> {
        if let Some(w) = self.impedance() {
            return w?.far_field(theta);
        }
        let nu = self.wedge.nu();
        let value = match self.bc {
            BoundaryCondition::Dirichlet if self.wedge.is_right_angled() => {
                let t0 = self.incidence.theta0.value();
                let f = (t0 * (2.0 / 3.0)).sin() * g_function(Complex64::new(theta, 0.0), t0)?;
                Complex64::from_polar(2f64.sqrt() / (3.0 * PI.sqrt()), PI / 4.0) * f
            }
            bc => {
                let kernel = DirectivityKernel::new(&bc, &self.wedge, theta, self.incidence.theta0)?;
                Complex64::from_polar(-nu / (2.0 * (2.0 * PI).sqrt()), PI / 4.0) * kernel.eval_real(0.0)?
            }
        };
        let repr = if self.supports(Representation::Contour) {
            Representation::Contour
        } else {
            Representation::Edge
        };
        let flags = self
            .zone_terms(theta, repr)?
            .iter()
            .filter(|t| t.heaviside_arg.abs() < FAR_FIELD_WARN_BAND)
            .map(|t| FieldFlag::NearZoneBoundary(t.kind))
            .collect();
        Ok(FarFieldCoefficient { value, flags })
    }

    /// Smallest distance (radians) from `theta` to a zone boundary of any
    /// geometrical term in either representation.
    pub fn zone_margin(&self, theta: f64) -> Result<f64> {
        let mut m = f64::INFINITY;
        for repr in [Representation::Edge, Representation::Contour] {
            if repr == Representation::Contour && !self.supports(repr) {
                continue;
            }
            for t in self.zone_terms(theta, repr)? {
                m = m.min(t.heaviside_arg.abs());
            }
        }
        Ok(m)
    }

    /// Surface-wave terms present at `theta` in the contour split.
    pub fn surface_terms(&self, theta: f64) -> Result<Vec<ZoneTerm>> {
        if !matches!(self.bc, BoundaryCondition::Impedance(_)) {
            return Ok(Vec::new());
        }
        Ok(self
            .zone_terms(theta, Representation::Contour)?
            .into_iter()
            .filter(|t| matches!(t.kind, TermKind::Surface1 | TermKind::Surface2) && t.gate() > 0.0)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_wedge_has_no_contour_form() {
        let p = WedgeProblem::right_angled(BoundaryCondition::DirichletNeumann, 1.0, 1.0).unwrap();
        assert!(!p.supports(Representation::Contour));
        assert!(p.evaluate(&FieldPoint::new(1.0, 1.0), Representation::Contour, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn dirichlet_far_field_forms_agree() {
        // saddle value of the contour integrand against β at η = 0
        let p = WedgeProblem::right_angled(BoundaryCondition::Dirichlet, 1.1, 1.0).unwrap();
        let a = p.far_field(2.9).unwrap().value;
        let kernel = DirectivityKernel::new(&p.bc, &p.wedge, 2.9, ComplexAngle::real(1.1)).unwrap();
        let b = Complex64::from_polar(-2f64.sqrt() / (6.0 * PI.sqrt()), PI / 4.0) * kernel.eval_real(0.0).unwrap();
        assert!((a - b).norm() < 1e-13, "{a} vs {b}");
    }

    #[test]
    fn representation_parses() {
        assert_eq!("edge".parse::<Representation>().unwrap(), Representation::Edge);
        assert!("both".parse::<Representation>().is_err());
    }
}
