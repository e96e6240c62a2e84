//! Right-angled wedge with impedance faces under real plane-wave incidence.
//!
//! Face admittances enter through the complex angles `θ1 = π + arcsin μ1`
//! and `θ2 = arccos μ2`. The diffracted part is the contour integral
//!
//! ```text
//! p_d = −1/(3πi) ∫_S e^{ikr cos α'} C (sin(α'+θ) + sin θ1)(cos(α'+θ) + cos θ2)
//!                       Σ_j w_j G(α'+θ, θ_j) dα',
//! C   = sin(2θ0/3) / ((cos(2θ2/3) − cos(2θ1/3)) (sin θ0 − sin θ1)(cos θ0 − cos θ2)),
//! w_j = cos(2θ_{j+2}/3) − cos(2θ_{j+1}/3),   indices taken mod 3.
//! ```
//!
//! Besides the incident and reflected waves the geometrical part carries one
//! surface wave per face, gated by where the pole at `θ + θ_j` crosses `S`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Result, WedgeError};
use crate::field::{FieldDecomposition, FieldFlag, PhaseSign, TermKind, ZoneTerm};
use crate::geometry::{gudermannian, ComplexAngle, FieldPoint, ImpedanceFaces, IncidentPlaneWave, WedgeGeometry};
use crate::ideal::{plane_wave_terms, GateShift};
use crate::quadrature::{ContourKind, QuadratureConfig, QuadratureReport};
use crate::sommerfeld::{contour_prefactor, cos_minus_cos, g_function, g_poles, integrate_kernel_contour};

/// Factors smaller than this (relative to the magnitudes they are built from)
/// make the coefficients degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Far-field coefficients closer than this (radians) to a zone boundary are
/// flagged, since the steepest-descent expansion is not uniform there.
pub const FAR_FIELD_WARN_BAND: f64 = 0.05;

const NU: f64 = 2.0 / 3.0;

fn guard(factor: &'static str, value: Complex64, scale: f64) -> Result<Complex64> {
    if value.norm() < DEGENERATE_TOL * scale.max(1.0) || !value.is_finite() {
        return Err(WedgeError::DegenerateParameter {
            factor,
            magnitude: value.norm(),
        });
    }
    Ok(value)
}

/// `sin x − sin y = 2 cos((x+y)/2) sin((x−y)/2)`.
fn sin_minus_sin(x: Complex64, y: Complex64) -> Complex64 {
    2.0 * ((x + y) * 0.5).cos() * ((x - y) * 0.5).sin()
}

/// Plane-wave and surface-wave amplitudes plus the contour weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpedanceCoefficients {
    pub r1: Complex64,
    pub r2: Complex64,
    pub t1: Complex64,
    pub t2: Complex64,
    /// `C` in the contour integrand.
    pub prefactor: Complex64,
    /// `w_0, w_1, w_2`.
    pub weights: [Complex64; 3],
    /// `θ0, θ1, θ2`.
    pub angles: [Complex64; 3],
    /// `sin θ1 = −μ1`, exact for the given admittance.
    pub sin_theta1: Complex64,
    /// `cos θ2 = μ2`.
    pub cos_theta2: Complex64,
}

impl ImpedanceCoefficients {
    pub fn new(theta0: f64, faces: &ImpedanceFaces) -> Result<Self> {
        let t0 = Complex64::new(theta0, 0.0);
        let t1 = faces.theta1.value();
        let t2 = faces.theta2.value();
        let (s0, c0) = (t0.sin(), t0.cos());
        let s1 = -faces.mu1;
        let c2 = faces.mu2;

        let ds = guard("sin θ0 − sin θ1", sin_minus_sin(t0, t1), s0.norm().max(s1.norm()))?;
        let dc = guard("cos θ0 − cos θ2", cos_minus_cos(t0, t2), c0.norm().max(c2.norm()))?;
        let d21 = guard("cos(2θ2/3) − cos(2θ1/3)", cos_minus_cos(t2 * NU, t1 * NU), 1.0)?;
        let sn1 = guard("sin(2θ1/3)", (t1 * NU).sin(), 1.0)?;
        let sn2 = guard("sin(2θ2/3)", (t2 * NU).sin(), 1.0)?;
        let sn0 = (t0 * NU).sin();

        let d20 = cos_minus_cos(t2 * NU, t0 * NU);
        let d10 = cos_minus_cos(t1 * NU, t0 * NU);
        let common = ds * dc;

        let r1 = (s0 + s1) / ds;
        let r2 = (c0 + c2) / dc;
        let t1_amp = 2.0 * sn0 * d20 / (sn1 * d21) * s1 * cos_minus_cos(t2, t1) / common;
        let t2_amp = 2.0 * sn0 * d10 / (sn2 * d21) * c2 * sin_minus_sin(t2, t1) / common;

        let prefactor = sn0 / (d21 * common);
        let angles = [t0, t1, t2];
        let weights = [
            cos_minus_cos(t2 * NU, t1 * NU),
            cos_minus_cos(t0 * NU, t2 * NU),
            cos_minus_cos(t1 * NU, t0 * NU),
        ];
        Ok(Self {
            r1,
            r2,
            t1: t1_amp,
            t2: t2_amp,
            prefactor,
            weights,
            angles,
            sin_theta1: s1,
            cos_theta2: c2,
        })
    }
}

/// Which faces carry a surface wave, and over which angular ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceWaveStatus {
    pub face1_excited: bool,
    pub face2_excited: bool,
    /// Face 1 wave present for `0 ≤ θ < region1_end`.
    pub region1_end: f64,
    /// Face 2 wave present for `region2_start < θ ≤ 3π/2`.
    pub region2_start: f64,
    /// `Im μ < Re μ / √(1 + (Re μ)²)` per face, as commonly quoted.
    pub admittance_quoted: [bool; 2],
    /// `Im μ < −Re μ / √(1 + (Re μ)²)` per face, which agrees with the angle test.
    pub admittance_corrected: [bool; 2],
    /// Set when the quoted admittance form disagrees with the angle test.
    pub diagnostic: Option<String>,
}

impl SurfaceWaveStatus {
    pub fn new(faces: &ImpedanceFaces) -> Self {
        let (t1, t2) = (faces.theta1, faces.theta2);
        let g1 = gudermannian(t1.im);
        let g2 = gudermannian(t2.im);
        let face1 = t1.re >= PI && t1.re < PI - g1;
        let face2 = t2.re > FRAC_PI_2 - g2 && t2.re <= FRAC_PI_2;
        let quoted = |mu: Complex64| mu.im < mu.re / (1.0 + mu.re * mu.re).sqrt();
        let corrected = |mu: Complex64| mu.im < -mu.re / (1.0 + mu.re * mu.re).sqrt();
        let admittance_quoted = [quoted(faces.mu1), quoted(faces.mu2)];
        let admittance_corrected = [corrected(faces.mu1), corrected(faces.mu2)];
        let mut notes = Vec::new();
        for (i, (angle, q)) in [face1, face2].into_iter().zip(admittance_quoted).enumerate() {
            if angle != q {
                notes.push(format!(
                    "face {}: angle criterion says {}, quoted admittance form says {}",
                    i + 1,
                    angle,
                    q
                ));
            }
        }
        Self {
            face1_excited: face1,
            face2_excited: face2,
            region1_end: PI - t1.re - g1,
            region2_start: 2.0 * PI - t2.re - g2,
            admittance_quoted,
            admittance_corrected,
            diagnostic: if notes.is_empty() { None } else { Some(notes.join("; ")) },
        }
    }
}

/// Steepest-descent far-field coefficient: `p_d ≈ D e^{ikr} / √(kr)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldCoefficient {
    pub value: Complex64,
    /// Terms whose zone boundary lies within [`FAR_FIELD_WARN_BAND`].
    pub flags: Vec<FieldFlag>,
}

/// `√2 e^{iπ/4} / (3√π)`, the saddle-point factor of the contour form.
fn saddle_factor() -> Complex64 {
    Complex64::from_polar(2f64.sqrt() / (3.0 * PI.sqrt()), PI / 4.0)
}

/// `α' ↦ C (sin(α'+θ) + sin θ1)(cos(α'+θ) + cos θ2) Σ w_j G(α'+θ, θ_j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpedanceIntegrand {
    pub theta: f64,
    pub coefficients: ImpedanceCoefficients,
}

impl ImpedanceIntegrand {
    pub fn eval(&self, alpha: Complex64) -> Result<Complex64> {
        let c = &self.coefficients;
        let a = alpha + self.theta;
        let mut sum = Complex64::new(0.0, 0.0);
        for (w, t) in c.weights.iter().zip(c.angles) {
            sum += w * g_function(a, t)?;
        }
        Ok(c.prefactor * (a.sin() + c.sin_theta1) * (a.cos() + c.cos_theta2) * sum)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.coefficients
            .angles
            .iter()
            .flat_map(|t| g_poles(self.theta, *t))
            .collect()
    }
}

/// `f(0)`, or its limit when `f(0)` is `0·∞`. On a rigid face the factor
/// `sin θ + sin θ1` (or `cos θ + cos θ2`) vanishes at the pole of `G`, and
/// the mean over a small circle recovers the value. A nonzero residue means
/// a genuine pole and stays an error.
fn removable_value_at_zero(f: &ImpedanceIntegrand) -> Result<Complex64> {
    let err = match f.eval(Complex64::new(0.0, 0.0)) {
        Ok(v) => return Ok(v),
        Err(e @ WedgeError::Singular { .. }) => e,
        Err(e) => return Err(e),
    };
    const N: usize = 32;
    const RHO: f64 = 1e-2;
    let (mut mean, mut residue, mut scale) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0f64);
    for j in 0..N {
        let z = Complex64::from_polar(RHO, 2.0 * PI * j as f64 / N as f64);
        let v = f.eval(z)?;
        mean += v;
        residue += v * z;
        scale = scale.max(v.norm());
    }
    if residue.norm() / N as f64 > 1e-10 * RHO * scale {
        return Err(err);
    }
    Ok(mean / N as f64)
}

/// A configured impedance wedge: faces, incidence and derived coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpedanceWedge {
    pub faces: ImpedanceFaces,
    pub theta0: f64,
    pub k: f64,
    pub coefficients: ImpedanceCoefficients,
}

impl ImpedanceWedge {
    pub fn new(faces: ImpedanceFaces, inc: &IncidentPlaneWave) -> Result<Self> {
        inc.validate(&WedgeGeometry::right_angled())?;
        if !inc.is_perpendicular() {
            return Err(WedgeError::Incidence("impedance solution needs perpendicular incidence".into()));
        }
        if !inc.theta0.is_real() {
            return Err(WedgeError::Incidence(format!(
                "impedance solution needs a real incidence angle, got Im θ0 = {}",
                inc.theta0.im
            )));
        }
        let coefficients = ImpedanceCoefficients::new(inc.theta0.re, &faces)?;
        Ok(Self {
            faces,
            theta0: inc.theta0.re,
            k: inc.k,
            coefficients,
        })
    }

    pub fn surface_waves(&self) -> SurfaceWaveStatus {
        SurfaceWaveStatus::new(&self.faces)
    }

    fn reflected_terms(&self, theta: f64) -> Vec<ZoneTerm> {
        let c = &self.coefficients;
        plane_wave_terms(
            &WedgeGeometry::right_angled(),
            theta,
            ComplexAngle::real(self.theta0),
            c.r1,
            c.r2,
            GateShift::None,
        )
    }

    fn surface_terms(&self, theta: f64, arg1: f64, arg2: f64) -> [ZoneTerm; 2] {
        let c = &self.coefficients;
        [
            ZoneTerm {
                kind: TermKind::Surface1,
                coefficient: c.t1,
                heaviside_arg: arg1,
                phase_angle: theta + c.angles[1],
                sign: PhaseSign::Minus,
            },
            ZoneTerm {
                kind: TermKind::Surface2,
                coefficient: c.t2,
                heaviside_arg: arg2,
                phase_angle: theta + c.angles[2],
                sign: PhaseSign::Plus,
            },
        ]
    }

    /// Geometrical terms gated where their poles cross `S`.
    pub fn terms_contour(&self, theta: f64) -> Vec<ZoneTerm> {
        let (t1, t2) = (self.faces.theta1, self.faces.theta2);
        let mut terms = self.reflected_terms(theta);
        let surf = self.surface_terms(theta, PI - theta - t1.shifted_re(), theta + t2.shifted_re() - 2.0 * PI);
        terms.extend(surf.into_iter().filter(|t| t.coefficient != Complex64::new(0.0, 0.0)));
        terms
    }

    /// Geometrical terms as produced by the edge-source form. The surface
    /// gates use `Re θ_j` only and are off except at two corner
    /// configurations, which are flagged.
    pub fn terms_edge(&self, theta: f64) -> (Vec<ZoneTerm>, Vec<FieldFlag>) {
        let (t1, t2) = (self.faces.theta1, self.faces.theta2);
        let mut terms = self.reflected_terms(theta);
        let surf: Vec<ZoneTerm> = self
            .surface_terms(theta, PI - theta - t1.re, theta + t2.re - 2.0 * PI)
            .into_iter()
            .filter(|t| t.coefficient != Complex64::new(0.0, 0.0))
            .collect();
        let flags = surf
            .iter()
            .filter(|t| t.on_boundary())
            .map(|t| FieldFlag::DegenerateCorner(t.kind))
            .collect();
        terms.extend(surf);
        (terms, flags)
    }

    pub fn integrand(&self, theta: f64) -> ImpedanceIntegrand {
        ImpedanceIntegrand {
            theta,
            coefficients: self.coefficients,
        }
    }

    /// Diffracted field on `S` (or `Γ`).
    pub fn diffracted_contour(&self, r: f64, theta: f64, kind: ContourKind, quad: &QuadratureConfig) -> Result<QuadratureReport> {
        let integrand = self.integrand(theta);
        let report = integrate_kernel_contour(|a| integrand.eval(a), self.k, r, kind, integrand.poles(), quad)?;
        Ok(report.scaled(contour_prefactor()))
    }

    pub fn total_contour(&self, rcv: &FieldPoint, quad: &QuadratureConfig) -> Result<FieldDecomposition> {
        rcv.validate(&WedgeGeometry::right_angled())?;
        if !(rcv.r > 0.0) {
            return Err(WedgeError::Geometry(format!("receiver radius {} must be positive", rcv.r)));
        }
        let report = self.diffracted_contour(rcv.r, rcv.theta, ContourKind::S, quad)?;
        Ok(FieldDecomposition::assemble(self.terms_contour(rcv.theta), self.k * rcv.r, report, Vec::new()))
    }

    /// `D(θ) = √2 e^{iπ/4}/(3√π) · C (sin θ + sin θ1)(cos θ + cos θ2) Σ w_j G(θ, θ_j)`.
    pub fn far_field(&self, theta: f64) -> Result<FarFieldCoefficient> {
        let value = saddle_factor() * removable_value_at_zero(&self.integrand(theta))?;
        let flags = self
            .terms_contour(theta)
            .iter()
            .filter(|t| t.heaviside_arg.abs() < FAR_FIELD_WARN_BAND)
            .map(|t| FieldFlag::NearZoneBoundary(t.kind))
            .collect();
        Ok(FarFieldCoefficient { value, flags })
    }
}

/// Total field of the impedance wedge using the contour representation.
pub fn impedance_total_contour(
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    faces: &ImpedanceFaces,
    quad: &QuadratureConfig,
) -> Result<FieldDecomposition> {
    ImpedanceWedge::new(*faces, inc)?.total_contour(rcv, quad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rigid_faces_reduce_to_neumann_coefficients() {
        let co = ImpedanceCoefficients::new(0.9, &ImpedanceFaces::rigid()).unwrap();
        assert!((co.r1 - 1.0).norm() < 1e-15);
        assert!((co.r2 - 1.0).norm() < 1e-15);
        assert_eq!(co.t1, c(0.0, 0.0));
        assert_eq!(co.t2, c(0.0, 0.0));
    }

    #[test]
    fn rigid_far_field_on_the_faces_is_the_neumann_limit() {
        use crate::geometry::BoundaryCondition;
        use crate::ideal::DirectivityKernel;
        let inc = IncidentPlaneWave::perpendicular(0.9, 1.0).unwrap();
        let w = ImpedanceWedge::new(ImpedanceFaces::rigid(), &inc).unwrap();
        for theta in [0.0, 1.5 * PI, 1e-3] {
            let k = DirectivityKernel::new(&BoundaryCondition::Neumann, &WedgeGeometry::right_angled(), theta, inc.theta0)
                .unwrap();
            let ideal = Complex64::from_polar(-NU / (2.0 * (2.0 * PI).sqrt()), PI / 4.0) * k.eval_real(0.0).unwrap();
            let d = w.far_field(theta).unwrap().value;
            assert!((d - ideal).norm() < 1e-9 * ideal.norm(), "θ {theta}: {d} vs {ideal}");
        }
    }

    #[test]
    fn degenerate_factor_is_named() {
        // μ1 = μ2 = 1 puts θ1 = 3π/2 and θ2 = 0, where sin(2θ1/3) = 0
        let faces = ImpedanceFaces::from_admittance(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        match ImpedanceCoefficients::new(0.7, &faces) {
            Err(WedgeError::DegenerateParameter { factor, .. }) => assert_eq!(factor, "sin(2θ1/3)"),
            other => panic!("expected a degenerate factor, got {other:?}"),
        }
    }

    #[test]
    fn complex_incidence_is_rejected() {
        let inc = IncidentPlaneWave::perpendicular(ComplexAngle::new(0.5, 0.1), 1.0).unwrap();
        assert!(matches!(
            ImpedanceWedge::new(ImpedanceFaces::rigid(), &inc),
            Err(WedgeError::Incidence(_))
        ));
    }

    #[test]
    fn surface_wave_angle_test_matches_corrected_admittance_form() {
        for (mu, expect) in [(c(0.3, -0.8), true), (c(0.3, 0.8), false), (c(0.0, -0.5), true), (c(2.0, 0.5), false)] {
            let faces = ImpedanceFaces::from_admittance(mu, mu).unwrap();
            let st = SurfaceWaveStatus::new(&faces);
            assert_eq!(st.face1_excited, expect, "μ = {mu}");
            assert_eq!(st.face2_excited, expect, "μ = {mu}");
            assert_eq!(st.admittance_corrected, [expect, expect]);
        }
    }
}
