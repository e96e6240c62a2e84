//! Shared geometry: complex angles, the wedge, boundary conditions and
//! the admittance parameterisation of the right-angled impedance wedge.
//!
//! Angles are radians and are never wrapped; zone logic downstream relies on
//! unwrapped values in `[0, θ_W]`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Result, WedgeError};

/// Slack below 1 tolerated in the argument of `cosh⁻¹` before it is treated
/// as a geometry inconsistency.
pub const ACOSH_CLAMP: f64 = 1e-10;

/// Tolerance for the round trip `μ ↔ (θ1, θ2)`.
pub const ANGLE_ROUNDTRIP_TOL: f64 = 1e-12;

/// Gudermannian function `gd(x) = atan(sinh x)`.
pub fn gudermannian(x: f64) -> f64 {
    x.sinh().atan()
}

/// An angle with real and imaginary parts, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexAngle {
    pub re: f64,
    pub im: f64,
}

impl ComplexAngle {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_real(self) -> bool {
        self.im == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn sin(self) -> Complex64 {
        if self.is_real() {
            Complex64::new(self.re.sin(), 0.0)
        } else {
            self.value().sin()
        }
    }

    pub fn cos(self) -> Complex64 {
        if self.is_real() {
            Complex64::new(self.re.cos(), 0.0)
        } else {
            self.value().cos()
        }
    }

    /// `Re θ + gd(Im θ)`: where an inhomogeneous plane wave of this angle
    /// actually switches on and off.
    pub fn shifted_re(self) -> f64 {
        self.re + gudermannian(self.im)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }
}

impl From<f64> for ComplexAngle {
    fn from(re: f64) -> Self {
        Self::real(re)
    }
}

impl From<Complex64> for ComplexAngle {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexAngle> for Complex64 {
    fn from(a: ComplexAngle) -> Self {
        a.value()
    }
}

impl Add for ComplexAngle {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexAngle {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexAngle {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// Exterior wedge angle `θ_W` and wedge index `ν = π/θ_W`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WedgeGeometry {
    theta_w: f64,
}

impl WedgeGeometry {
    pub fn new(theta_w: f64) -> Result<Self> {
        if !(theta_w.is_finite() && theta_w > PI && theta_w < 2.0 * PI) {
            return Err(WedgeError::Geometry(format!(
                "wedge angle {theta_w} outside (π, 2π)"
            )));
        }
        Ok(Self { theta_w })
    }

    pub fn right_angled() -> Self {
        Self {
            theta_w: 1.5 * PI,
        }
    }

    pub fn theta_w(&self) -> f64 {
        self.theta_w
    }

    pub fn nu(&self) -> f64 {
        PI / self.theta_w
    }

    pub fn is_right_angled(&self) -> bool {
        (self.theta_w - 1.5 * PI).abs() < 1e-14
    }
}

/// Face admittances of the right-angled impedance wedge together with the
/// angles `θ1, θ2` defined by `μ1 = −sin θ1`, `μ2 = cos θ2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpedanceFaces {
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub theta1: ComplexAngle,
    pub theta2: ComplexAngle,
}

impl ImpedanceFaces {
    pub fn from_admittance(mu1: Complex64, mu2: Complex64) -> Result<Self> {
        let (theta1, theta2) = admittance_to_angles(mu1, mu2)?;
        Ok(Self {
            mu1,
            mu2,
            theta1,
            theta2,
        })
    }

    pub fn from_angles(theta1: ComplexAngle, theta2: ComplexAngle) -> Result<Self> {
        check_angle_strips(theta1, theta2)?;
        let (mu1, mu2) = angles_to_admittance(theta1, theta2);
        for (face, mu) in [("face θ=0", mu1), ("face θ=3π/2", mu2)] {
            if mu.re < -1e-14 {
                return Err(WedgeError::Passivity { face, re_mu: mu.re });
            }
        }
        Ok(Self {
            mu1,
            mu2,
            theta1,
            theta2,
        })
    }

    /// Both faces rigid: `(θ1, θ2) = (π, π/2)`.
    pub fn rigid() -> Self {
        Self {
            mu1: Complex64::new(0.0, 0.0),
            mu2: Complex64::new(0.0, 0.0),
            theta1: ComplexAngle::real(PI),
            theta2: ComplexAngle::real(FRAC_PI_2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// Dirichlet on `θ = 0`, Neumann on `θ = θ_W`.
    DirichletNeumann,
    /// Neumann on `θ = 0`, Dirichlet on `θ = θ_W`.
    NeumannDirichlet,
    Impedance(ImpedanceFaces),
}

impl BoundaryCondition {
    pub fn is_ideal(&self) -> bool {
        !matches!(self, BoundaryCondition::Impedance(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::DirichletNeumann => "dirichlet-neumann",
            BoundaryCondition::NeumannDirichlet => "neumann-dirichlet",
            BoundaryCondition::Impedance(_) => "impedance",
        }
    }

    /// Plane-wave reflection coefficients `(R1, R2)` of the ideal faces.
    pub fn ideal_reflection_coefficients(&self) -> Option<(f64, f64)> {
        match self {
            BoundaryCondition::Dirichlet => Some((-1.0, -1.0)),
            BoundaryCondition::Neumann => Some((1.0, 1.0)),
            BoundaryCondition::DirichletNeumann => Some((-1.0, 1.0)),
            BoundaryCondition::NeumannDirichlet => Some((1.0, -1.0)),
            BoundaryCondition::Impedance(_) => None,
        }
    }
}

/// Plane wave incident from direction `θ0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncidentPlaneWave {
    pub theta0: ComplexAngle,
    pub k: f64,
    /// Angle to the edge; `π/2` for perpendicular incidence.
    pub phi0: f64,
}

impl IncidentPlaneWave {
    pub fn perpendicular(theta0: impl Into<ComplexAngle>, k: f64) -> Result<Self> {
        let theta0 = theta0.into();
        let wave = Self {
            theta0,
            k,
            phi0: FRAC_PI_2,
        };
        wave.validate(&WedgeGeometry::right_angled())?;
        Ok(wave)
    }

    pub fn validate(&self, wedge: &WedgeGeometry) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(WedgeError::Incidence(format!(
                "wavenumber must be positive, got {}",
                self.k
            )));
        }
        if !self.theta0.is_finite() || self.theta0.re < 0.0 || self.theta0.re > wedge.theta_w() {
            return Err(WedgeError::Incidence(format!(
                "Re θ0 = {} outside [0, {}]",
                self.theta0.re,
                wedge.theta_w()
            )));
        }
        Ok(())
    }

    pub fn is_perpendicular(&self) -> bool {
        (self.phi0 - FRAC_PI_2).abs() < 1e-14
    }
}

/// Monopole source in cylindrical coordinates about the edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSourceSpec {
    pub r0: f64,
    pub theta0: f64,
    pub z0: f64,
    pub k: f64,
}

impl PointSourceSpec {
    pub fn validate(&self, wedge: &WedgeGeometry) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(WedgeError::Geometry(format!("source radius {} not positive", self.r0)));
        }
        if !(self.theta0 > 0.0 && self.theta0 < wedge.theta_w()) {
            return Err(WedgeError::Geometry(format!(
                "source angle {} outside (0, θ_W)",
                self.theta0
            )));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(WedgeError::Geometry(format!("wavenumber {} not positive", self.k)));
        }
        Ok(())
    }
}

/// Receiver in cylindrical coordinates; `z` defaults to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldPoint {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

impl FieldPoint {
    pub fn new(r: f64, theta: f64) -> Self {
        Self { r, theta, z: 0.0 }
    }

    pub fn with_z(r: f64, theta: f64, z: f64) -> Self {
        Self { r, theta, z }
    }

    /// Receiver at Cartesian `(x, y)` in the plane `z = 0`, with `θ` taken in
    /// `[0, 2π)` so that the face `θ = 3π/2` is reached from below.
    pub fn from_cartesian(x: f64, y: f64) -> Self {
        let mut theta = y.atan2(x);
        if theta < 0.0 {
            theta += 2.0 * PI;
        }
        Self::new(x.hypot(y), theta)
    }

    pub fn validate(&self, wedge: &WedgeGeometry) -> Result<()> {
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(WedgeError::Geometry(format!("receiver radius {} invalid", self.r)));
        }
        if !(self.theta >= 0.0 && self.theta <= wedge.theta_w()) {
            return Err(WedgeError::Geometry(format!(
                "receiver angle {} outside [0, θ_W]",
                self.theta
            )));
        }
        Ok(())
    }
}

fn acosh_clamped(x: f64, operation: &'static str) -> Result<f64> {
    if !x.is_finite() || x < 1.0 - ACOSH_CLAMP {
        return Err(WedgeError::Domain {
            operation,
            argument: x,
        });
    }
    Ok(x.max(1.0).acosh())
}

/// Auxiliary edge variable for a point source and a receiver:
/// `η = cosh⁻¹[((z−z0)z + l0 l)/(r0 r)]` at edge position `z`, with the
/// receiver at `(r, ·, 0)`.
pub fn eta_point_source(r: f64, source: &PointSourceSpec, z: f64) -> Result<f64> {
    if r <= 0.0 || source.r0 <= 0.0 {
        return Err(WedgeError::Geometry("η needs r > 0 and r0 > 0".into()));
    }
    let l = r.hypot(z);
    let l0 = source.r0.hypot(z - source.z0);
    acosh_clamped(((z - source.z0) * z + l0 * l) / (source.r0 * r), "eta")
}

/// The same quantity in terms of the local spherical angles of the source and
/// receiver seen from the edge point.
pub fn eta_spherical(phi0: f64, phi: f64) -> Result<f64> {
    acosh_clamped(
        (1.0 + phi0.cos() * phi.cos()) / (phi0.sin() * phi.sin()),
        "eta",
    )
}

/// Perpendicular plane-wave incidence: `η = cosh⁻¹(l/r)` at edge position `z`.
pub fn eta_plane_wave(r: f64, z: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(WedgeError::Geometry("η needs r > 0".into()));
    }
    acosh_clamped(r.hypot(z) / r, "eta")
}

/// Local spherical coordinates `(l, φ)` of a receiver seen from the edge
/// origin: `l = √(r²+z²)`, `r = l sin φ`, `z = −l cos φ`.
pub fn local_spherical(point: &FieldPoint) -> Result<(f64, f64)> {
    if point.r <= 0.0 {
        return Err(WedgeError::Geometry("local spherical angles need r > 0".into()));
    }
    let l = point.r.hypot(point.z);
    Ok((l, point.r.atan2(-point.z)))
}

fn check_angle_strips(theta1: ComplexAngle, theta2: ComplexAngle) -> Result<()> {
    let eps = 1e-12;
    if theta1.re < PI - eps || theta1.re > 1.5 * PI + eps {
        return Err(WedgeError::Geometry(format!(
            "Re θ1 = {} outside [π, 3π/2]",
            theta1.re
        )));
    }
    if theta2.re < -eps || theta2.re > FRAC_PI_2 + eps {
        return Err(WedgeError::Geometry(format!(
            "Re θ2 = {} outside [0, π/2]",
            theta2.re
        )));
    }
    Ok(())
}

/// Newton steps on `f(θ) = target`, which restore the accuracy the library
/// `asin`/`acos` lose to cancellation at large `|μ|`.
fn polish(mut theta: Complex64, f: impl Fn(Complex64) -> Complex64, df: impl Fn(Complex64) -> Complex64, target: Complex64) -> Complex64 {
    for _ in 0..2 {
        let d = df(theta);
        if d.norm() < 1e-8 {
            break;
        }
        theta -= (f(theta) - target) / d;
    }
    theta
}

/// `θ1 = π + arcsin μ1`, `θ2 = arccos μ2` on the principal branches, which
/// land in `Re θ1 ∈ [π, 3π/2]` and `Re θ2 ∈ [0, π/2]` whenever `Re μ ≥ 0`.
pub fn admittance_to_angles(mu1: Complex64, mu2: Complex64) -> Result<(ComplexAngle, ComplexAngle)> {
    if !(mu1.re.is_finite() && mu1.im.is_finite() && mu2.re.is_finite() && mu2.im.is_finite()) {
        return Err(WedgeError::Geometry("non-finite admittance".into()));
    }
    if mu1.re < 0.0 {
        return Err(WedgeError::Passivity {
            face: "face θ=0",
            re_mu: mu1.re,
        });
    }
    if mu2.re < 0.0 {
        return Err(WedgeError::Passivity {
            face: "face θ=3π/2",
            re_mu: mu2.re,
        });
    }
    let theta1 = polish(Complex64::new(PI, 0.0) + mu1.asin(), |t| -t.sin(), |t| -t.cos(), mu1);
    let theta2 = polish(mu2.acos(), |t| t.cos(), |t| -t.sin(), mu2);
    let (theta1, theta2) = (ComplexAngle::from(theta1), ComplexAngle::from(theta2));
    check_angle_strips(theta1, theta2)?;

    let r1 = (-theta1.sin() - mu1).norm();
    let r2 = (theta2.cos() - mu2).norm();
    let scale1 = ANGLE_ROUNDTRIP_TOL * mu1.norm().max(1.0);
    let scale2 = ANGLE_ROUNDTRIP_TOL * mu2.norm().max(1.0);
    if r1 > scale1 || r2 > scale2 {
        return Err(WedgeError::Singular {
            operation: "admittance_to_angles",
            detail: format!("round-trip residuals {r1:.3e}, {r2:.3e}"),
        });
    }
    Ok((theta1, theta2))
}

pub fn angles_to_admittance(theta1: ComplexAngle, theta2: ComplexAngle) -> (Complex64, Complex64) {
    (-theta1.sin(), theta2.cos())
}
