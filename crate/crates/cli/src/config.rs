//! Scenario files: a TOML description of the wedge, its faces, the incident
//! wave, the receivers and any quadrature overrides.
//!
//! Complex numbers are written as `[re, im]` pairs; a bare number is real.
//! Angles are in radians.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use wedge_diffraction::{
    BoundaryCondition, ComplexAngle, FieldPoint, ImpedanceFaces, IncidentPlaneWave, QuadratureConfig, WedgeGeometry,
    WedgeProblem,
};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub wedge: WedgeSection,
    pub boundary: BoundarySection,
    pub incidence: IncidenceSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receivers: Option<ReceiverSection>,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directivity: Option<DirectivitySection>,
    #[serde(default)]
    pub validation: ValidationSection,
}

/// A real number or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexValue::Real(x) => Complex64::new(x, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// `"right"` or an exterior angle in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WedgeAngle {
    Named(String),
    Radians(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeSection {
    pub angle: WedgeAngle,
}

impl Default for WedgeSection {
    fn default() -> Self {
        Self {
            angle: WedgeAngle::Named("right".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    /// `dirichlet`, `neumann`, `dirichlet-neumann`, `neumann-dirichlet` or `impedance`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu1: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu2: Option<ComplexValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceSection {
    pub theta0: ComplexValue,
    #[serde(default = "one")]
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverSection {
    /// `[r_min, r_max]` of a polar grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nr: Option<usize>,
    /// `[θ_min, θ_max]` of a polar grid or of a coefficient sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ntheta: Option<usize>,
    /// Explicit `[r, θ]` receivers, used instead of the grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    /// Gate arguments below this magnitude set the zone flag.
    #[serde(default = "default_zone_threshold")]
    pub zone_threshold: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectivitySection {
    /// Receiver angle at which the kernel is tabulated.
    pub theta: f64,
    /// `[η_min, η_max]`.
    pub eta: [f64; 2],
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationSection {
    /// Random receivers per check.
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_cross_tol")]
    pub cross_tol: f64,
    #[serde(default = "default_far_field_tol")]
    pub far_field_tol: f64,
    /// Negates the diffracted term before validation; a negative control.
    #[serde(default)]
    pub corrupt_kernel_sign: bool,
}

impl Default for ValidationSection {
    fn default() -> Self {
        Self {
            draws: default_draws(),
            fd_step: default_fd_step(),
            cross_tol: default_cross_tol(),
            far_field_tol: default_far_field_tol(),
            corrupt_kernel_sign: false,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_zone_threshold() -> f64 {
    1e-2
}

fn default_draws() -> usize {
    6
}

fn default_fd_step() -> f64 {
    1e-4
}

fn default_cross_tol() -> f64 {
    1e-6
}

fn default_far_field_tol() -> f64 {
    1e-5
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> CliResult<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| CliError::Config(format!("{} is not UTF-8: {e}", path.display())))?;
        let config = Self::parse(text)?;
        Ok((config, bytes))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn geometry(&self) -> CliResult<WedgeGeometry> {
        match &self.wedge.angle {
            WedgeAngle::Named(s) if s == "right" => Ok(WedgeGeometry::right_angled()),
            WedgeAngle::Named(s) => Err(CliError::Config(format!("unknown wedge angle '{s}'"))),
            WedgeAngle::Radians(a) => WedgeGeometry::new(*a).map_err(config_error),
        }
    }

    pub fn boundary_condition(&self) -> CliResult<BoundaryCondition> {
        let b = &self.boundary;
        let ideal = |bc| {
            if b.mu1.is_some() || b.mu2.is_some() {
                Err(CliError::Config(format!("admittances given for a {} wedge", b.kind)))
            } else {
                Ok(bc)
            }
        };
        match b.kind.as_str() {
            "dirichlet" => ideal(BoundaryCondition::Dirichlet),
            "neumann" => ideal(BoundaryCondition::Neumann),
            "dirichlet-neumann" => ideal(BoundaryCondition::DirichletNeumann),
            "neumann-dirichlet" => ideal(BoundaryCondition::NeumannDirichlet),
            "impedance" => {
                let (Some(mu1), Some(mu2)) = (b.mu1, b.mu2) else {
                    return Err(CliError::Config("impedance faces need both mu1 and mu2".into()));
                };
                let faces = ImpedanceFaces::from_admittance(mu1.value(), mu2.value()).map_err(config_error)?;
                Ok(BoundaryCondition::Impedance(faces))
            }
            other => Err(CliError::Config(format!("unknown boundary kind '{other}'"))),
        }
    }

    pub fn problem(&self) -> CliResult<WedgeProblem> {
        let wedge = self.geometry()?;
        let bc = self.boundary_condition()?;
        let t0 = self.incidence.theta0.value();
        let incidence = IncidentPlaneWave {
            theta0: ComplexAngle::new(t0.re, t0.im),
            k: self.incidence.k,
            phi0: 0.5 * PI,
        };
        WedgeProblem::new(wedge, bc, incidence).map_err(config_error)
    }

    pub fn quadrature(&self) -> CliResult<QuadratureConfig> {
        let mut q = QuadratureConfig::default();
        if let Some(x) = self.quadrature.rel_tol {
            q.rel_tol = x;
        }
        if let Some(x) = self.quadrature.abs_tol {
            q.abs_tol = x;
        }
        if let Some(x) = self.quadrature.max_nodes {
            q.max_nodes = x;
        }
        q.validate().map_err(config_error)?;
        Ok(q)
    }

    fn receiver_section(&self) -> CliResult<&ReceiverSection> {
        self.receivers
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [receivers] section".into()))
    }

    pub fn zone_threshold(&self) -> f64 {
        self.receivers.as_ref().map_or(default_zone_threshold(), |r| r.zone_threshold)
    }

    /// Receivers in row-major order: radius outer, angle inner.
    pub fn receivers(&self) -> CliResult<Vec<FieldPoint>> {
        let rs = self.receiver_section()?;
        let theta_w = self.geometry()?.theta_w();
        let points: Vec<FieldPoint> = if let Some(list) = &rs.points {
            list.iter().map(|[r, t]| FieldPoint::new(*r, *t)).collect()
        } else {
            let (Some(r), Some(nr)) = (rs.r, rs.nr) else {
                return Err(CliError::Config("[receivers] needs either points or r and nr".into()));
            };
            let radii = linspace(r, nr)?;
            let angles = linspace(rs.theta.unwrap_or([0.0, theta_w]), rs.ntheta.unwrap_or(1))?;
            radii
                .iter()
                .flat_map(|&r| angles.iter().map(move |&t| FieldPoint::new(r, t)))
                .collect()
        };
        if points.is_empty() {
            return Err(CliError::Config("no receivers".into()));
        }
        for p in &points {
            if !(p.r > 0.0 && p.r.is_finite()) || !(0.0..=theta_w).contains(&p.theta) {
                return Err(CliError::Config(format!(
                    "receiver (r = {}, θ = {}) outside r > 0, 0 ≤ θ ≤ {theta_w}",
                    p.r, p.theta
                )));
            }
        }
        Ok(points)
    }

    /// Angles of a coefficient sweep.
    pub fn sweep_angles(&self) -> CliResult<Vec<f64>> {
        let rs = self.receiver_section()?;
        let theta_w = self.geometry()?.theta_w();
        let angles = linspace(rs.theta.unwrap_or([0.0, theta_w]), rs.ntheta.unwrap_or(181))?;
        if let Some(t) = angles.iter().find(|t| !(0.0..=theta_w).contains(*t)) {
            return Err(CliError::Config(format!("sweep angle {t} outside [0, {theta_w}]")));
        }
        Ok(angles)
    }
}

fn linspace([lo, hi]: [f64; 2], n: usize) -> CliResult<Vec<f64>> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(CliError::Config(format!("bad range [{lo}, {hi}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

pub fn config_error(e: wedge_diffraction::WedgeError) -> CliError {
    CliError::Config(e.to_string())
}
