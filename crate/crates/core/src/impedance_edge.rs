//! Edge-source form of the impedance wedge.
//!
//! Folding the contour integral onto the imaginary axis turns the polynomial
//! factor `(sin(α'+θ) + sin θ1)(cos(α'+θ) + cos θ2)` into an even part `Q`
//! and an odd part `Q̃` in `α'`; at `α' = iη` they become `q` and `−i q̃`:
//!
//! ```text
//! q  = cos θ sin θ (cosh²η + sinh²η) + (sin θ1 cos θ + cos θ2 sin θ) cosh η + sin θ1 cos θ2
//! q̃  = (sin²θ − cos²θ) cosh η sinh η + (sin θ1 sin θ − cos θ2 cos θ) sinh η
//! β^I = C Σ_j w_j / sin(2θ_j/3) · (q β^D(θ_j) + q̃ β̃^D(θ_j))
//! p_d = −1/(3π) ∫_0^∞ e^{ikr cosh η} β^I dη
//! ```
//!
//! The surface waves are not separated out here: their unshifted gates are
//! closed everywhere except at two corner configurations, so they are carried
//! by the edge integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, WedgeError};
use crate::field::FieldDecomposition;
use crate::geometry::{FieldPoint, ImpedanceFaces, IncidentPlaneWave, WedgeGeometry};
use crate::ideal::{beta_dirichlet, beta_tilde_dirichlet, integrate_kernel_edge, kernel_poles, phis};
use crate::impedance::{ImpedanceWedge, DEGENERATE_TOL};
use crate::quadrature::{QuadratureConfig, QuadratureReport};

const NU: f64 = 2.0 / 3.0;

/// Even and odd parts `(Q, Q̃)` of `(sin(α+θ) + sin θ1)(cos(α+θ) + cos θ2)` in `α`,
/// given `s1 = sin θ1` and `c2 = cos θ2`.
pub fn q_decomposition(alpha: Complex64, theta: f64, s1: Complex64, c2: Complex64) -> (Complex64, Complex64) {
    let (s, c) = (theta.sin(), theta.cos());
    let (sa, ca) = (alpha.sin(), alpha.cos());
    let even = c * s * (ca * ca - sa * sa) + (s1 * c + c2 * s) * ca + s1 * c2;
    let odd = (c * c - s * s) * ca * sa + (c2 * c - s1 * s) * sa;
    (even, odd)
}

/// `(q, q̃)` at `η`, given `s1 = sin θ1` and `c2 = cos θ2`.
pub fn q_hyperbolic(theta: f64, s1: Complex64, c2: Complex64, eta: Complex64) -> (Complex64, Complex64) {
    let (s, c) = (theta.sin(), theta.cos());
    let (sh, ch) = (eta.sinh(), eta.cosh());
    let q = c * s * (ch * ch + sh * sh) + (s1 * c + c2 * s) * ch + s1 * c2;
    let qt = (s * s - c * c) * ch * sh + (s1 * s - c2 * c) * sh;
    (q, qt)
}

/// `β^I` for fixed receiver angle.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpedanceKernel {
    theta: f64,
    angles: [Complex64; 3],
    s1: Complex64,
    c2: Complex64,
    /// `C w_j / sin(2θ_j/3)`.
    factors: [Complex64; 3],
    odd_sign: f64,
}

impl ImpedanceKernel {
    pub fn new(wedge: &ImpedanceWedge, theta: f64) -> Result<Self> {
        let c = &wedge.coefficients;
        let mut factors = [Complex64::new(0.0, 0.0); 3];
        for j in 0..3 {
            let s = (c.angles[j] * NU).sin();
            if s.norm() < DEGENERATE_TOL {
                return Err(WedgeError::DegenerateParameter {
                    factor: ["sin(2θ0/3)", "sin(2θ1/3)", "sin(2θ2/3)"][j],
                    magnitude: s.norm(),
                });
            }
            factors[j] = c.prefactor * c.weights[j] / s;
        }
        Ok(Self {
            theta,
            angles: c.angles,
            s1: c.sin_theta1,
            c2: c.cos_theta2,
            factors,
            odd_sign: 1.0,
        })
    }

    /// The kernel with its odd part `q̃ β̃` negated. A wrong kernel for
    /// negative controls of the validation oracles.
    pub fn with_odd_part_negated(mut self) -> Self {
        self.odd_sign = -self.odd_sign;
        self
    }

    pub fn eval(&self, eta: Complex64) -> Result<Complex64> {
        let (q, qt) = q_hyperbolic(self.theta, self.s1, self.c2, eta);
        let qt = qt * self.odd_sign;
        let mut sum = Complex64::new(0.0, 0.0);
        for (f, t) in self.factors.iter().zip(self.angles) {
            let b = beta_dirichlet(NU, self.theta, t, eta)?;
            let bt = beta_tilde_dirichlet(NU, self.theta, t, eta)?;
            sum += f * (q * b + qt * bt);
        }
        Ok(sum)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.angles
            .iter()
            .flat_map(|t| kernel_poles(NU, &phis(self.theta, *t)))
            .collect()
    }
}

/// `β^I` at real `η`.
pub fn beta_impedance(kernel: &ImpedanceKernel, eta: f64) -> Result<Complex64> {
    kernel.eval(Complex64::new(eta, 0.0))
}

impl ImpedanceWedge {
    pub fn diffracted_edge(&self, r: f64, theta: f64, quad: &QuadratureConfig) -> Result<QuadratureReport> {
        let kernel = ImpedanceKernel::new(self, theta)?;
        let report = integrate_kernel_edge(|e| kernel.eval(e), self.k, r, kernel.poles(), quad)?;
        Ok(report.scaled(Complex64::new(-1.0 / (3.0 * PI), 0.0)))
    }

    pub fn total_edge(&self, rcv: &FieldPoint, quad: &QuadratureConfig) -> Result<FieldDecomposition> {
        rcv.validate(&WedgeGeometry::right_angled())?;
        if !(rcv.r > 0.0) {
            return Err(WedgeError::Geometry(format!("receiver radius {} must be positive", rcv.r)));
        }
        let (terms, flags) = self.terms_edge(rcv.theta);
        let report = self.diffracted_edge(rcv.r, rcv.theta, quad)?;
        Ok(FieldDecomposition::assemble(terms, self.k * rcv.r, report, flags))
    }
}

/// Total field of the impedance wedge using the edge-source representation.
pub fn impedance_total_edge_source(
    inc: &IncidentPlaneWave,
    rcv: &FieldPoint,
    faces: &ImpedanceFaces,
    quad: &QuadratureConfig,
) -> Result<FieldDecomposition> {
    ImpedanceWedge::new(*faces, inc)?.total_edge(rcv, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ComplexAngle;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn q_parts_on_imaginary_axis() {
        let (t1, t2) = (c(3.6, -0.4).sin(), c(1.1, 0.3).cos());
        for eta in [0.0, 0.4, 2.5] {
            let (q_, qt_) = q_decomposition(c(0.0, eta), 0.8, t1, t2);
            let (q, qt) = q_hyperbolic(0.8, t1, t2, c(eta, 0.0));
            assert!((q_ - q).norm() < 1e-12 * q.norm().max(1.0));
            assert!((qt_ - c(0.0, -1.0) * qt).norm() < 1e-12 * qt.norm().max(1.0));
        }
    }

    #[test]
    fn q_parts_recombine() {
        let (t1, t2) = (c(3.5, 0.2).sin(), c(0.9, -0.6).cos());
        let a = c(0.4, -0.7);
        let theta = 2.1;
        let (q, qt) = q_decomposition(a, theta, t1, t2);
        let direct = ((a + theta).sin() + t1) * ((a + theta).cos() + t2);
        assert!((q + qt - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn continuous_on_reflection_boundary() {
        let faces = ImpedanceFaces::from_admittance(c(0.5, -0.8), c(0.4, 0.6)).unwrap();
        let inc = IncidentPlaneWave::perpendicular(ComplexAngle::real(1.2), 1.0).unwrap();
        let w = ImpedanceWedge::new(faces, &inc).unwrap();
        let quad = QuadratureConfig::precise();
        let tb = PI - 1.2;
        let edge = w.total_edge(&FieldPoint::new(5.0, tb), &quad).unwrap().total();
        let contour = w.total_contour(&FieldPoint::new(5.0, tb), &quad).unwrap().total();
        assert!((edge - contour).norm() < 1e-8, "{edge} vs {contour}");
    }

    #[test]
    fn rigid_edge_kernel_is_neumann() {
        let inc = IncidentPlaneWave::perpendicular(ComplexAngle::real(0.9), 1.0).unwrap();
        let w = ImpedanceWedge::new(ImpedanceFaces::rigid(), &inc).unwrap();
        let k = ImpedanceKernel::new(&w, 2.3).unwrap();
        let n = crate::ideal::DirectivityKernel::new(
            &crate::geometry::BoundaryCondition::Neumann,
            &WedgeGeometry::right_angled(),
            2.3,
            ComplexAngle::real(0.9),
        )
        .unwrap();
        for eta in [0.0, 0.3, 1.7] {
            let a = beta_impedance(&k, eta).unwrap();
            let b = n.eval_real(eta).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "η {eta}: {a} vs {b}");
        }
    }
}
