//! Contour-integral solution of the right-angled Dirichlet wedge, valid for
//! complex incidence angles.
//!
//! The diffracted part is an integral over the steepest-descent contour `S`
//! through `α' = 0`,
//!
//! ```text
//! p_d = −1/(3πi) ∫_S e^{ikr cos α'} sin(2θ0/3) G(θ+α', θ0) dα',
//! G(α, θ0) = 1/(cos(2θ0/3) − cos(2(α−π)/3)) − 1/(cos(2θ0/3) − cos(2(α+π)/3)).
//! ```
//!
//! On `S` the exponential is `e^{ikr} e^{−kr sinh t tanh t}`. Moving `S` onto
//! the imaginary axis and folding `α' = ±iη` gives the edge-source integral,
//! through the identities
//!
//! ```text
//! sin(2θ0/3) [G(θ+iη) + G(θ−iη)] = −β^D,
//! sin(2θ0/3) [G(θ+iη) − G(θ−iη)] = −i β̃^D.
//! ```
//!
//! The deformation crosses poles when `Im θ0 ≠ 0`, so the two decompositions
//! gate their plane waves differently while agreeing in total.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, WedgeError};
use crate::field::FieldDecomposition;
use crate::geometry::{ComplexAngle, FieldPoint, IncidentPlaneWave, WedgeGeometry};
use crate::ideal::{
    beta_dirichlet, beta_tilde_dirichlet, edge_integral_plane_wave, plane_wave_terms, DirectivityKernel, GateShift,
};
use crate::quadrature::{integrate_contour_s, ContourKind, ContourPoles, QuadratureConfig, QuadratureReport};

/// Denominators of `G` below this magnitude are treated as poles.
pub const G_POLE_TOL: f64 = 1e-13;

const NU: f64 = 2.0 / 3.0;

/// `cos x − cos y = −2 sin((x+y)/2) sin((x−y)/2)`.
pub(crate) fn cos_minus_cos(x: Complex64, y: Complex64) -> Complex64 {
    -2.0 * ((x + y) * 0.5).sin() * ((x - y) * 0.5).sin()
}

fn g_singular(alpha: Complex64) -> WedgeError {
    WedgeError::Singular {
        operation: "g_function",
        detail: format!("pole at α = {alpha}"),
    }
}

/// `G(α, θ0)` in difference form.
pub fn g_function(alpha: Complex64, theta0: Complex64) -> Result<Complex64> {
    let c0 = theta0 * NU;
    let pi = Complex64::new(PI, 0.0);
    let d1 = cos_minus_cos(c0, (alpha - pi) * NU);
    let d2 = cos_minus_cos(c0, (alpha + pi) * NU);
    if d1.norm() < G_POLE_TOL || d2.norm() < G_POLE_TOL {
        return Err(g_singular(alpha));
    }
    Ok(1.0 / d1 - 1.0 / d2)
}

/// `G(α, θ0) = √3 sin(2α/3) / ((½ + cos(2(α−θ0)/3)) (½ + cos(2(α+θ0)/3)))`.
pub fn g_function_product(alpha: Complex64, theta0: Complex64) -> Result<Complex64> {
    let d1 = 0.5 + ((alpha - theta0) * NU).cos();
    let d2 = 0.5 + ((alpha + theta0) * NU).cos();
    if d1.norm() < G_POLE_TOL || d2.norm() < G_POLE_TOL {
        return Err(g_singular(alpha));
    }
    Ok(3f64.sqrt() * (alpha * NU).sin() / (d1 * d2))
}

/// Poles of `α' ↦ G(θ+α', θ0)`: `α' = −θ ± π ± θ0 + 3nπ`.
pub fn g_poles(theta: f64, theta0: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(20);
    for n in -2..=2 {
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                out.push(-theta + s1 * PI + s2 * theta0 + 3.0 * PI * n as f64);
            }
        }
    }
    out
}

/// Residuals of the even and odd `G`–`β` identities:
/// `sin(2θ0/3)[G(θ+iη)+G(θ−iη)] + β^D` and
/// `sin(2θ0/3)[G(θ+iη)−G(θ−iη)] + iβ̃^D`.
pub fn g_beta_identities(theta: f64, theta0: ComplexAngle, eta: f64) -> Result<(Complex64, Complex64)> {
    let t0 = theta0.value();
    let s = (t0 * NU).sin();
    let i = Complex64::new(0.0, 1.0);
    let gp = g_function(theta + i * eta, t0)?;
    let gm = g_function(theta - i * eta, t0)?;
    let e = Complex64::new(eta, 0.0);
    let bd = beta_dirichlet(NU, theta, t0, e)?;
    let bt = beta_tilde_dirichlet(NU, theta, t0, e)?;
    Ok((s * (gp + gm) + bd, s * (gp - gm) + i * bt))
}

/// Residual of
/// `sin a/(cos a − cos(b+c)) + sin a/(cos a − cos(b−c)) + sin(a+b)/(cos c − cos(a+b)) + sin(a−b)/(cos c − cos(a−b))`.
pub fn trig_identity_even(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    a.sin() / (a.cos() - (b + c).cos()) + a.sin() / (a.cos() - (b - c).cos())
        + (a + b).sin() / (c.cos() - (a + b).cos())
        + (a - b).sin() / (c.cos() - (a - b).cos())
}

/// Residual of
/// `sin a/(cos a − cos(b+c)) − sin a/(cos a − cos(b−c)) − sin c/(cos c − cos(a+b)) + sin c/(cos c − cos(a−b))`.
pub fn trig_identity_odd(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    a.sin() / (a.cos() - (b + c).cos()) - a.sin() / (a.cos() - (b - c).cos())
        - c.sin() / (c.cos() - (a + b).cos())
        + c.sin() / (c.cos() - (a - b).cos())
}

/// Residual of `cosh(2η/3) = ½(λ^{−2/3} + λ^{2/3})` with `λ = w + √(w²−1)`,
/// `w = l/r = cosh η`.
pub fn lambda_identity(w: f64) -> f64 {
    let eta = w.acosh();
    let lambda = w + (w * w - 1.0).sqrt();
    (NU * eta).cosh() - 0.5 * (lambda.powf(-NU) + lambda.powf(NU))
}

/// `α' ↦ sin(2θ0/3) G(θ+α', θ0)`, the Dirichlet integrand on `S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SommerfeldIntegrand {
    pub theta: f64,
    pub theta0: ComplexAngle,
}

impl SommerfeldIntegrand {
    pub fn eval(&self, alpha: Complex64) -> Result<Complex64> {
        let t0 = self.theta0.value();
        Ok((t0 * NU).sin() * g_function(self.theta + alpha, t0)?)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        g_poles(self.theta, self.theta0.value())
    }
}

/// `∫_S f(α') e^{ikr cos α'} dα'` for a fallible integrand; the first
/// integrand error takes precedence over quadrature failure.
pub(crate) fn integrate_kernel_contour<F: FnMut(Complex64) -> Result<Complex64>>(
    mut f: F,
    k: f64,
    r: f64,
    kind: ContourKind,
    poles: Vec<Complex64>,
    quad: &QuadratureConfig,
) -> Result<QuadratureReport> {
    let failure: RefCell<Option<WedgeError>> = RefCell::new(None);
    let poles = ContourPoles { poles, allow_pv: true };
    let out = integrate_contour_s(
        |a| match f(a) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        },
        k,
        r,
        kind,
        &poles,
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    out?.into_result()
}

/// `−1/(3πi)`
pub(crate) fn contour_prefactor() -> Complex64 {
    -1.0 / Complex64::new(0.0, 3.0 * PI)
}

fn check_right_angle_inputs(inc: &IncidentPlaneWave, rcv: &FieldPoint) -> Result<WedgeGeometry> {
    let wedge = WedgeGeometry::right_angled();
    inc.validate(&wedge)?;
    rcv.validate(&wedge)?;
    if !inc.is_perpendicular() {
        return Err(WedgeError::Incidence("contour solution needs perpendicular incidence".into()));
    }
    if !(rcv.r > 0.0) {
        return Err(WedgeError::Geometry(format!("receiver radius {} must be positive", rcv.r)));
    }
    Ok(wedge)
}

/// Diffracted Dirichlet field on `S` (or on `Γ` for the residue checks).
pub fn dirichlet_diffracted_contour(
    theta: f64,
    theta0: ComplexAngle,
    k: f64,
    r: f64,
    kind: ContourKind,
    quad: &QuadratureConfig,
) -> Result<QuadratureReport> {
    let integrand = SommerfeldIntegrand { theta, theta0 };
    let report = integrate_kernel_contour(|a| integrand.eval(a), k, r, kind, integrand.poles(), quad)?;
    Ok(report.scaled(contour_prefactor()))
}

/// Total Dirichlet field with Gudermannian-shifted gates and the diffracted
/// term on `S`.
pub fn dirichlet_total_contour(
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    quad: &QuadratureConfig,
) -> Result<FieldDecomposition> {
    let wedge = check_right_angle_inputs(inc, rcv)?;
    let minus_one = Complex64::new(-1.0, 0.0);
    let terms = plane_wave_terms(&wedge, rcv.theta, inc.theta0, minus_one, minus_one, GateShift::Gudermannian);
    let report = dirichlet_diffracted_contour(rcv.theta, inc.theta0, inc.k, rcv.r, ContourKind::S, quad)?;
    Ok(FieldDecomposition::assemble(terms, inc.k * rcv.r, report, Vec::new()))
}

/// Total Dirichlet field with unshifted gates and the edge-source integral.
pub fn dirichlet_total_edge_form(
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    quad: &QuadratureConfig,
) -> Result<FieldDecomposition> {
    let wedge = check_right_angle_inputs(inc, rcv)?;
    let minus_one = Complex64::new(-1.0, 0.0);
    let terms = plane_wave_terms(&wedge, rcv.theta, inc.theta0, minus_one, minus_one, GateShift::None);
    let kernel = DirectivityKernel::new(&crate::geometry::BoundaryCondition::Dirichlet, &wedge, rcv.theta, inc.theta0)?;
    let report = edge_integral_plane_wave(inc, rcv, &kernel, quad)?;
    Ok(FieldDecomposition::assemble(terms, inc.k * rcv.r, report, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g_vanishes_at_origin_and_is_odd() {
        let t0 = c(1.1, 0.2);
        assert!(g_function(c(0.0, 0.0), t0).unwrap().norm() < 1e-15);
        let a = c(0.7, -0.4);
        let sum = g_function(a, t0).unwrap() + g_function(-a, t0).unwrap();
        assert!(sum.norm() < 1e-14);
    }

    #[test]
    fn closed_forms_agree() {
        for (a, t0) in [(c(0.3, 0.8), c(1.0, 0.0)), (c(-2.0, 0.1), c(2.5, -0.4)), (c(4.0, -1.2), c(0.2, 0.3))] {
            let d = g_function(a, t0).unwrap();
            let p = g_function_product(a, t0).unwrap();
            assert!((d - p).norm() < 1e-12 * d.norm().max(1.0));
        }
    }

    #[test]
    fn identities_at_eta_zero() {
        let (even, odd) = g_beta_identities(0.9, ComplexAngle::real(2.0), 0.0).unwrap();
        assert!(even.norm() < 1e-13);
        assert_eq!(odd, c(0.0, 0.0));
    }

    #[test]
    fn lambda_identity_holds() {
        for w in [1.0, 1.3, 5.0, 1e3] {
            assert!(lambda_identity(w).abs() < 1e-13 * (NU * w.acosh()).cosh());
        }
    }

    #[test]
    fn pole_is_reported() {
        // α − π = θ0 puts the first denominator at zero
        let t0 = c(0.8, 0.0);
        assert!(g_function(t0 + PI, t0).is_err());
    }
}
