//! Secondary edge sources for ideal wedges.
//!
//! The diffracted field of a wedge with Dirichlet, Neumann or mixed faces is a
//! superposition of directional point sources along the edge,
//!
//! ```text
//! p_d = −(ν/4π) ∫ e^{ik(l0+l)}/(l0 l) β dz,
//! ```
//!
//! with a directivity `β` built from four terms
//! `β_i = sin(νφ_i)/(cosh νη − cos νφ_i)` and
//! `φ_{1..4} = π ± θ0 ± θ`. For perpendicular plane-wave incidence the
//! substitution `z = r sinh η` turns the half-line integral into
//! `−(ν/2π) ∫_0^∞ e^{ikr cosh η} β(η) dη`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, WedgeError};
use crate::field::{heaviside, FieldDecomposition, PhaseSign, TermKind, ZoneTerm, ZONE_TOL};
use crate::geometry::{
    gudermannian, BoundaryCondition, ComplexAngle, FieldPoint, IncidentPlaneWave, PointSourceSpec,
    WedgeGeometry,
};
use crate::quadrature::{integrate_edge, integrate_line, EdgePoles, LineSegment, QuadratureConfig, QuadratureReport};

const SIGNS_D: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
const SIGNS_N: [f64; 4] = [1.0, 1.0, 1.0, 1.0];
const SIGNS_TILDE_D: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

/// Denominators below this magnitude (off a zone boundary) are poles.
const POLE_TOL: f64 = 1e-14;

/// `φ1..φ4 = π+θ0+θ, π+θ0−θ, π−θ0+θ, π−θ0−θ`.
pub fn phis(theta: f64, theta0: Complex64) -> [Complex64; 4] {
    let pi = Complex64::new(PI, 0.0);
    [pi + theta0 + theta, pi + theta0 - theta, pi - theta0 + theta, pi - theta0 - theta]
}

/// `cosh a − cos b = 2 sinh((a+ib)/2) sinh((a−ib)/2)`, free of cancellation
/// near `a = b = 0`.
fn cosh_minus_cos(a: Complex64, b: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    2.0 * ((a + i * b) * 0.5).sinh() * ((a - i * b) * 0.5).sinh()
}

/// A term whose `νφ` is a real multiple of 2π sits exactly on a zone
/// boundary, where `sin νφ = 0` and `cos νφ = 1`.
fn on_zone_boundary(nu: f64, phi: Complex64) -> bool {
    if phi.im.abs() >= ZONE_TOL {
        return false;
    }
    let x = nu * phi.re / (2.0 * PI);
    (x - x.round()).abs() * 2.0 * PI < nu * ZONE_TOL
}

fn singular(at: Complex64) -> WedgeError {
    WedgeError::Singular {
        operation: "beta",
        detail: format!("kernel pole at η = {at}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    /// `sin(νφ)/(cosh νη − cos νφ)`
    Plain,
    /// `2 sin(νφ/2) cosh(νη/2)/(cosh νη − cos νφ)`
    Primed,
    /// `sinh(νη)/(cosh νη − cos νφ)`
    Tilde,
}

fn signed_sum(form: Form, signs: &[f64; 4], nu: f64, phis: &[Complex64; 4], eta: Complex64) -> Result<Complex64> {
    let a = eta * nu;
    let mut sum = Complex64::new(0.0, 0.0);
    for (s, &phi) in signs.iter().zip(phis) {
        if on_zone_boundary(nu, phi) {
            // cos νφ = 1: only the odd form survives, as coth(νη/2)
            if form == Form::Tilde {
                let h = (a * 0.5).sinh();
                if h.norm() < POLE_TOL {
                    return Err(singular(eta));
                }
                sum += *s * (a * 0.5).cosh() / h;
            }
            continue;
        }
        let b = phi * nu;
        let den = cosh_minus_cos(a, b);
        if den.norm() < POLE_TOL {
            return Err(singular(eta));
        }
        let num = match form {
            Form::Plain => b.sin(),
            Form::Primed => 2.0 * (b * 0.5).sin() * (a * 0.5).cosh(),
            Form::Tilde => a.sinh(),
        };
        sum += *s * num / den;
    }
    Ok(sum)
}

/// Ideal directivity `β` at real `η ≥ 0`.
pub fn beta_ideal(bc: &BoundaryCondition, nu: f64, theta: f64, theta0: ComplexAngle, eta: f64) -> Result<Complex64> {
    let wedge = WedgeGeometry::new(PI / nu)?;
    DirectivityKernel::new(bc, &wedge, theta, theta0)?.eval(Complex64::new(eta, 0.0))
}

/// Odd-part Dirichlet kernel `β̃^D = β̃1 + β̃2 − β̃3 − β̃4`,
/// `β̃_i = sinh(νη)/(cosh νη − cos νφ_i)`.
pub fn beta_tilde_dirichlet(nu: f64, theta: f64, theta0: Complex64, eta: Complex64) -> Result<Complex64> {
    signed_sum(Form::Tilde, &SIGNS_TILDE_D, nu, &phis(theta, theta0), eta)
}

/// Dirichlet kernel at complex incidence angle and complex `η`.
pub fn beta_dirichlet(nu: f64, theta: f64, theta0: Complex64, eta: Complex64) -> Result<Complex64> {
    signed_sum(Form::Plain, &SIGNS_D, nu, &phis(theta, theta0), eta)
}

/// Poles of `1/(cosh νη − cos νφ)` in the η-plane, `η = ±iφ + 2πin/ν`,
/// for the few periods that can reach the integration strip.
pub fn kernel_poles(nu: f64, phis: &[Complex64]) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let period = 2.0 * PI / nu;
    let mut out = Vec::new();
    for &phi in phis {
        if on_zone_boundary(nu, phi) {
            continue;
        }
        for n in -2..=2 {
            for s in [1.0, -1.0] {
                out.push(s * i * phi + i * (n as f64 * period));
            }
        }
    }
    out
}

/// `β` for one ideal boundary-condition pair and fixed angles.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectivityKernel {
    bc: BoundaryCondition,
    nu: f64,
    theta: f64,
    theta0: ComplexAngle,
    phis: [Complex64; 4],
    signs: [f64; 4],
    form: Form,
}

impl DirectivityKernel {
    pub fn new(bc: &BoundaryCondition, wedge: &WedgeGeometry, theta: f64, theta0: ComplexAngle) -> Result<Self> {
        let nu = wedge.nu();
        let tw = wedge.theta_w();
        let (signs, form, th, th0) = match bc {
            BoundaryCondition::Dirichlet => (SIGNS_D, Form::Plain, theta, theta0.value()),
            BoundaryCondition::Neumann => (SIGNS_N, Form::Plain, theta, theta0.value()),
            BoundaryCondition::DirichletNeumann => (SIGNS_D, Form::Primed, theta, theta0.value()),
            BoundaryCondition::NeumannDirichlet => {
                (SIGNS_D, Form::Primed, tw - theta, Complex64::new(tw, 0.0) - theta0.value())
            }
            BoundaryCondition::Impedance(_) => {
                return Err(WedgeError::Config(
                    "ideal directivity kernel requested for an impedance wedge".into(),
                ))
            }
        };
        Ok(Self {
            bc: *bc,
            nu,
            theta,
            theta0,
            phis: phis(th, th0),
            signs,
            form,
        })
    }

    pub fn boundary_condition(&self) -> &BoundaryCondition {
        &self.bc
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn theta0(&self) -> ComplexAngle {
        self.theta0
    }

    pub fn eval(&self, eta: Complex64) -> Result<Complex64> {
        signed_sum(self.form, &self.signs, self.nu, &self.phis, eta)
    }

    pub fn eval_real(&self, eta: f64) -> Result<Complex64> {
        self.eval(Complex64::new(eta, 0.0))
    }

    pub fn poles(&self) -> Vec<Complex64> {
        kernel_poles(self.nu, &self.phis)
    }

    /// The kernel with the sign of term `i` (0-based) reversed. A wrong
    /// kernel for negative controls of the validation oracles.
    pub fn with_term_sign_flipped(mut self, i: usize) -> Self {
        self.signs[i] = -self.signs[i];
        self
    }
}

/// Integrates a fallible η-kernel along the deformed edge path. The first
/// kernel error is returned in preference to the quadrature's own failure.
pub(crate) fn integrate_kernel_edge<K: FnMut(Complex64) -> Result<Complex64>>(
    mut kernel: K,
    k: f64,
    r: f64,
    poles: Vec<Complex64>,
    quad: &QuadratureConfig,
) -> Result<QuadratureReport> {
    let failure: RefCell<Option<WedgeError>> = RefCell::new(None);
    let poles = EdgePoles { poles, allow_pv: true };
    let out = integrate_edge(
        |eta| match kernel(eta) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        },
        k,
        r,
        &poles,
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    out?.into_result()
}

/// `p_d = −(ν/2π) ∫_0^∞ e^{ikr cosh η} β(η) dη` for perpendicular incidence.
pub fn edge_integral_plane_wave(
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    kernel: &DirectivityKernel,
    quad: &QuadratureConfig,
) -> Result<QuadratureReport> {
    if !inc.is_perpendicular() {
        return Err(WedgeError::Incidence(
            "the plane-wave edge integral needs perpendicular incidence".into(),
        ));
    }
    if !(rcv.r > 0.0) {
        return Err(WedgeError::Geometry(format!("receiver radius {} must be positive", rcv.r)));
    }
    let report = integrate_kernel_edge(|eta| kernel.eval(eta), inc.k, rcv.r, kernel.poles(), quad)?;
    Ok(report.scaled(Complex64::new(-kernel.nu() / (2.0 * PI), 0.0)))
}

/// Which zone-boundary positions the gates use for complex incidence angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateShift {
    /// `Re θ0 + gd(Im θ0)`: where the inhomogeneous waves actually switch.
    Gudermannian,
    /// `Re θ0` only, as produced by the edge-source form.
    None,
}

/// Incident and singly reflected plane waves with their zone gates, for
/// reflection coefficients `r1` (face `θ = 0`) and `r2` (face `θ = θ_W`).
pub(crate) fn plane_wave_terms(
    wedge: &WedgeGeometry,
    theta: f64,
    theta0: ComplexAngle,
    r1: Complex64,
    r2: Complex64,
    shift: GateShift,
) -> Vec<ZoneTerm> {
    let tw = wedge.theta_w();
    let t0 = theta0.value();
    let s = match shift {
        GateShift::Gudermannian => gudermannian(theta0.im),
        GateShift::None => 0.0,
    };
    let a = theta0.re + s;
    vec![
        ZoneTerm {
            kind: TermKind::Incident,
            coefficient: Complex64::new(1.0, 0.0),
            heaviside_arg: PI - (theta - a).abs(),
            phase_angle: theta - t0,
            sign: PhaseSign::Minus,
        },
        ZoneTerm {
            kind: TermKind::Reflected1,
            coefficient: r1,
            heaviside_arg: PI - (theta + a).abs(),
            phase_angle: theta + t0,
            sign: PhaseSign::Minus,
        },
        // image in the face θ = θ_W: e^{−ikr cos(2θ_W − θ − θ0)}
        ZoneTerm {
            kind: TermKind::Reflected2,
            coefficient: r2,
            heaviside_arg: PI - (theta + a - 2.0 * tw).abs(),
            phase_angle: Complex64::new(2.0 * tw, 0.0) - theta - t0,
            sign: PhaseSign::Minus,
        },
    ]
}

/// Geometrical-acoustics terms for an ideal wedge. Complex incidence angles
/// use the Gudermannian-shifted gates.
pub fn geometrical_acoustics(
    wedge: &WedgeGeometry,
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    bc: &BoundaryCondition,
) -> Result<Vec<ZoneTerm>> {
    geometrical_acoustics_with(wedge, inc, rcv, bc, GateShift::Gudermannian)
}

pub fn geometrical_acoustics_with(
    wedge: &WedgeGeometry,
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    bc: &BoundaryCondition,
    shift: GateShift,
) -> Result<Vec<ZoneTerm>> {
    inc.validate(wedge)?;
    rcv.validate(wedge)?;
    let (r1, r2) = bc.ideal_reflection_coefficients().ok_or_else(|| {
        WedgeError::Config("ideal geometrical acoustics requested for an impedance wedge".into())
    })?;
    Ok(plane_wave_terms(
        wedge,
        rcv.theta,
        inc.theta0,
        Complex64::new(r1, 0.0),
        Complex64::new(r2, 0.0),
        shift,
    ))
}

/// Total field of an ideal wedge under perpendicular plane-wave incidence:
/// geometrical acoustics with unshifted gates plus the edge integral.
pub fn ideal_total_edge(
    wedge: &WedgeGeometry,
    bc: &BoundaryCondition,
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    quad: &QuadratureConfig,
) -> Result<FieldDecomposition> {
    let terms = geometrical_acoustics_with(wedge, inc, rcv, bc, GateShift::None)?;
    let kernel = DirectivityKernel::new(bc, wedge, rcv.theta, inc.theta0)?;
    let report = edge_integral_plane_wave(inc, rcv, &kernel, quad)?;
    Ok(FieldDecomposition::assemble(terms, inc.k * rcv.r, report, Vec::new()))
}

/// `cosh η` for edge point `z` (possibly complex), source `(r0, z0)` and
/// receiver `(r, zr)`.
fn cosh_eta_point_source(src: &PointSourceSpec, rcv: &FieldPoint, z: Complex64) -> (Complex64, Complex64, Complex64) {
    let l = (rcv.r * rcv.r + (z - rcv.z) * (z - rcv.z)).sqrt();
    let l0 = (src.r0 * src.r0 + (z - src.z0) * (z - src.z0)).sqrt();
    let x = ((z - src.z0) * (z - rcv.z) + l0 * l) / (src.r0 * rcv.r);
    (x, l, l0)
}

/// `p_d = −(ν/4π) ∫_{−∞}^{∞} e^{ik(l0+l)}/(l0 l) β(η(z)) dz` for a monopole
/// source. The range `[−Z, Z]` is integrated on the real axis; the two tails
/// are rotated onto vertical legs where `e^{ik(l0+l)}` decays like `e^{−2k|Im z|}`.
pub fn edge_integral_point_source(
    src: &PointSourceSpec,
    rcv: &FieldPoint,
    kernel: &DirectivityKernel,
    quad: &QuadratureConfig,
) -> Result<QuadratureReport> {
    let wedge = WedgeGeometry::new(PI / kernel.nu())?;
    src.validate(&wedge)?;
    if !(rcv.r > 0.0) {
        return Err(WedgeError::Geometry(format!("receiver radius {} must be positive", rcv.r)));
    }
    quad.validate()?;
    let k = src.k;
    let decay = -quad.truncation_decay_target.ln();
    let t_leg = decay / (2.0 * k) * quad.truncation_scale;
    let z_span = (3.0 * t_leg)
        .max(src.z0.abs() + rcv.z.abs() + 4.0 * src.r0.max(rcv.r))
        * quad.truncation_scale;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    // panels no longer than half a period of e^{2ikz}
    let real_panels = ((2.0 * z_span) * 2.0 * k / PI).ceil().max(8.0) as usize;
    let leg_panels = 8;
    let segments = [
        LineSegment::new(c(-z_span, -t_leg), c(-z_span, 0.0), leg_panels),
        LineSegment::new(c(-z_span, 0.0), c(z_span, 0.0), real_panels),
        LineSegment::new(c(z_span, 0.0), c(z_span, t_leg), leg_panels),
    ];

    let failure: RefCell<Option<WedgeError>> = RefCell::new(None);
    let report = integrate_line(
        |z| {
            let (x, l, l0) = cosh_eta_point_source(src, rcv, z);
            let eta = if z.im == 0.0 {
                // real edge points: η real and ≥ 0
                if x.re < 1.0 - crate::geometry::ACOSH_CLAMP {
                    failure.borrow_mut().get_or_insert(WedgeError::Domain {
                        operation: "eta",
                        argument: x.re,
                    });
                    return c(f64::NAN, f64::NAN);
                }
                c(x.re.max(1.0).acosh(), 0.0)
            } else {
                x.acosh()
            };
            match kernel.eval(eta) {
                Ok(b) => (Complex64::new(0.0, k) * (l0 + l)).exp() / (l0 * l) * b,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    c(f64::NAN, f64::NAN)
                }
            }
        },
        &segments,
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut report = report?.into_result()?;
    report.truncation_point = z_span;
    Ok(report.scaled(c(-kernel.nu() / (4.0 * PI), 0.0)))
}

/// Free-field monopole `e^{ikR}/R` from `(r0, θs, z0)` to the receiver.
fn monopole(src: &PointSourceSpec, theta_s: f64, rcv: &FieldPoint) -> Complex64 {
    let d2 = rcv.r * rcv.r + src.r0 * src.r0 - 2.0 * rcv.r * src.r0 * (rcv.theta - theta_s).cos()
        + (rcv.z - src.z0).powi(2);
    let d = d2.max(0.0).sqrt();
    Complex64::new(0.0, src.k * d).exp() / d
}

/// Total field of an ideal wedge excited by a monopole: direct sound and
/// the two image sources, gated by visibility, plus the edge integral.
pub fn point_source_total(
    wedge: &WedgeGeometry,
    bc: &BoundaryCondition,
    src: &PointSourceSpec,
    rcv: &FieldPoint,
    quad: &QuadratureConfig,
) -> Result<FieldDecomposition> {
    src.validate(wedge)?;
    rcv.validate(wedge)?;
    let (r1, r2) = bc.ideal_reflection_coefficients().ok_or_else(|| {
        WedgeError::Config("point-source excitation is only available for ideal wedges".into())
    })?;
    let tw = wedge.theta_w();
    let (th, th0) = (rcv.theta, src.theta0);
    let (h0, _) = heaviside(PI - (th - th0).abs());
    let (h1, _) = heaviside(PI - (th + th0));
    let (h2, _) = heaviside(PI - (2.0 * tw - th - th0));
    let kernel = DirectivityKernel::new(bc, wedge, th, ComplexAngle::real(th0))?;
    let report = edge_integral_point_source(src, rcv, &kernel, quad)?;
    let zero = Complex64::new(0.0, 0.0);
    let gated = |h: f64, coef: f64, ts: f64| if h == 0.0 { zero } else { h * coef * monopole(src, ts, rcv) };
    Ok(FieldDecomposition {
        incident: gated(h0, 1.0, th0),
        reflected1: gated(h1, r1, -th0),
        reflected2: gated(h2, r2, 2.0 * tw - th0),
        surface1: zero,
        surface2: zero,
        diffracted: report.value,
        terms: Vec::new(),
        flags: Vec::new(),
        report,
    })
}
