//! Worked examples for the individual modules, each against an oracle that
//! does not share code with the quantity under test.

use std::f64::consts::PI;

use num_complex::Complex64;

use wedge_diffraction::geometry::{eta_point_source, PointSourceSpec};
use wedge_diffraction::ideal::{edge_integral_point_source, DirectivityKernel};
use wedge_diffraction::impedance::{ImpedanceWedge, SurfaceWaveStatus};
use wedge_diffraction::impedance_edge::{beta_impedance, q_hyperbolic, ImpedanceKernel};
use wedge_diffraction::quadrature::{integrate_line, ContourKind, LineSegment};
use wedge_diffraction::sommerfeld::dirichlet_diffracted_contour;
use wedge_diffraction::validation::{
    boundary_residual, cartesian_evaluator, helmholtz_residual, Face, PolarRegion, StencilOrder,
};
use wedge_diffraction::{
    BoundaryCondition, ComplexAngle, FieldPoint, ImpedanceFaces, IncidentPlaneWave, QuadratureConfig,
    Representation, TermKind, WedgeGeometry, WedgeProblem,
};

const W: f64 = 1.5 * PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn impedance(mu1: Complex64, mu2: Complex64, theta0: f64) -> WedgeProblem {
    let faces = ImpedanceFaces::from_admittance(mu1, mu2).unwrap();
    WedgeProblem::right_angled(BoundaryCondition::Impedance(faces), theta0, 1.0).unwrap()
}

fn fine() -> QuadratureConfig {
    QuadratureConfig::default().with_rel_tol(1e-11).with_abs_tol(1e-15)
}

/// Receiver angle furthest from every zone boundary.
fn widest_angle(p: &WedgeProblem) -> (f64, f64) {
    (0..=200)
        .map(|i| W * i as f64 / 200.0)
        .map(|t| (t, p.zone_margin(t).unwrap()))
        .fold((0.0, -1.0), |a, b| if b.1 > a.1 { b } else { a })
}

/// Polynomial extrapolation in `1/kr` to zero.
fn neville(kr: &[f64], v: &[Complex64]) -> Complex64 {
    let h: Vec<f64> = kr.iter().map(|x| 1.0 / x).collect();
    let mut p = v.to_vec();
    for m in 1..h.len() {
        for i in 0..h.len() - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

/// With the source at `z0 = 0` and the receiver in the same plane the edge
/// integrand is even in `z`, so twice the half-line integral is the full one.
#[test]
fn point_source_half_line_doubles_to_full_integral() {
    let wedge = WedgeGeometry::right_angled();
    let src = PointSourceSpec { r0: 1.3, theta0: 0.9, z0: 0.0, k: 2.0 };
    let rcv = FieldPoint::new(0.8, 3.1);
    for z in [0.1, 0.7, 2.5, 9.0] {
        let (a, b) = (eta_point_source(rcv.r, &src, z).unwrap(), eta_point_source(rcv.r, &src, -z).unwrap());
        assert!((a - b).abs() < 1e-14 * a.max(1.0));
    }
    let quad = QuadratureConfig::precise();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let kernel = DirectivityKernel::new(&bc, &wedge, rcv.theta, ComplexAngle::real(src.theta0)).unwrap();
        let full = edge_integral_point_source(&src, &rcv, &kernel, &quad).unwrap().value;

        // [0, Z] on the real axis, then up a vertical leg where e^{2ikz} decays
        let (z_max, leg) = (12.0, 20.0);
        let integrand = |z: Complex64| {
            let l = (rcv.r * rcv.r + z * z).sqrt();
            let l0 = (src.r0 * src.r0 + z * z).sqrt();
            let x = (z * z + l0 * l) / (src.r0 * rcv.r);
            let eta = if z.im == 0.0 { c(x.re.max(1.0).acosh(), 0.0) } else { x.acosh() };
            (c(0.0, src.k) * (l0 + l)).exp() / (l0 * l) * kernel.eval(eta).unwrap()
        };
        let segments = [
            LineSegment::new(c(0.0, 0.0), c(z_max, 0.0), 64),
            LineSegment::new(c(z_max, 0.0), c(z_max, leg), 16),
        ];
        let half = integrate_line(integrand, &segments, &quad).unwrap().value;
        let doubled = 2.0 * half * (-2.0 / 3.0 / (4.0 * PI));
        assert!((doubled - full).norm() < 1e-12 * full.norm().max(1.0), "{bc:?}: {doubled} vs {full}");
    }
}

#[test]
fn dirichlet_edge_and_contour_agree_at_kr_10_and_20() {
    let p = WedgeProblem::right_angled(BoundaryCondition::Dirichlet, PI / 3.0, 1.0).unwrap();
    let quad = fine();
    for kr in [10.0, 20.0] {
        let rcv = FieldPoint::new(kr, 2.0 * PI / 3.0);
        let e = p.evaluate(&rcv, Representation::Edge, &quad).unwrap();
        let s = p.evaluate(&rcv, Representation::Contour, &quad).unwrap();
        assert!((e.diffracted - s.diffracted).norm() < 1e-8, "kr {kr}");
        assert!((e.total() - s.total()).norm() < 1e-8, "kr {kr}");
    }
}

/// For `θ0 = π/2 + 0.3i` and `θ` between the shifted and unshifted
/// reflection boundaries, the two diffracted terms differ by exactly the one
/// plane wave that only the edge form switches on.
#[test]
fn complex_incidence_residue_bookkeeping() {
    let theta0 = ComplexAngle::new(0.5 * PI, 0.3);
    let p = WedgeProblem::right_angled(BoundaryCondition::Dirichlet, theta0, 1.0).unwrap();
    let shifted = PI - theta0.re - wedge_diffraction::geometry::gudermannian(theta0.im);
    let theta = 0.5 * (shifted + (PI - theta0.re));
    let quad = QuadratureConfig::precise();
    let rcv = FieldPoint::new(4.0, theta);
    let e = p.evaluate(&rcv, Representation::Edge, &quad).unwrap();
    let s = p.evaluate(&rcv, Representation::Contour, &quad).unwrap();
    assert!((e.total() - s.total()).norm() < 1e-8);

    let gates = |repr| {
        p.zone_terms(theta, repr)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.gate()))
            .collect::<Vec<_>>()
    };
    let (ge, gs) = (gates(Representation::Edge), gates(Representation::Contour));
    let switched: Vec<TermKind> = ge.iter().zip(&gs).filter(|(a, b)| a.1 != b.1).map(|(a, _)| a.0).collect();
    assert_eq!(switched, vec![TermKind::Reflected1]);
    let jump = e.term(TermKind::Reflected1) - s.term(TermKind::Reflected1);
    assert!(jump.norm() > 1e-3);
    assert!((s.diffracted - e.diffracted - jump).norm() < 1e-8);
}

#[test]
fn surface_wave_criterion_examples() {
    let status = |mu: Complex64| SurfaceWaveStatus::new(&ImpedanceFaces::from_admittance(mu, mu).unwrap());
    let rigid = status(c(0.0, 0.0));
    assert!(!rigid.face1_excited && !rigid.face2_excited);
    for im in [-0.2, -1.0, -5.0] {
        let st = status(c(0.0, im));
        assert!(st.face1_excited && st.face2_excited, "μ = {im}i");
    }
}

#[test]
fn rigid_impedance_far_field_is_the_neumann_coefficient() {
    for theta0 in [0.4, 1.9, 3.6] {
        let rigid = WedgeProblem::right_angled(BoundaryCondition::Impedance(ImpedanceFaces::rigid()), theta0, 1.0).unwrap();
        let neumann = WedgeProblem::right_angled(BoundaryCondition::Neumann, theta0, 1.0).unwrap();
        for theta in [0.3, 2.0, 4.4] {
            if rigid.zone_margin(theta).unwrap() < 0.05 {
                continue;
            }
            let (a, b) = (rigid.far_field(theta).unwrap().value, neumann.far_field(theta).unwrap().value);
            assert!((a - b).norm() < 1e-10 * b.norm().max(1.0), "θ0 {theta0} θ {theta}: {a} vs {b}");
        }
    }
}

/// `|β^I(η)| ≤ C |q(η)| e^{−2η/3}`, with the envelope constant set on
/// `η ≤ 2`, and `β^I` itself decays beyond that.
#[test]
fn impedance_kernel_growth_envelope() {
    for (mu1, mu2, theta0, theta) in [
        (c(0.5, -0.8), c(0.4, 0.6), 1.2, 2.0),
        (c(0.3, 0.2), c(0.1, -0.9), 0.7, 3.9),
        (c(2.0, 1.0), c(0.6, 0.0), 3.0, 0.5),
    ] {
        let faces = ImpedanceFaces::from_admittance(mu1, mu2).unwrap();
        let w = ImpedanceWedge::new(faces, &IncidentPlaneWave::perpendicular(theta0, 1.0).unwrap()).unwrap();
        let k = ImpedanceKernel::new(&w, theta).unwrap();
        let ratio = |eta: f64| {
            let (q, _) = q_hyperbolic(theta, -mu1, mu2, c(eta, 0.0));
            beta_impedance(&k, eta).unwrap().norm() / (q.norm() * (-2.0 * eta / 3.0).exp())
        };
        let bound = (1..=20).map(|i| ratio(0.1 * i as f64)).fold(0.0, f64::max);
        let mut prev = beta_impedance(&k, 2.0).unwrap().norm();
        for i in 1..=40 {
            let eta = 2.0 + 0.25 * i as f64;
            assert!(ratio(eta) <= bound, "η {eta}");
            let b = beta_impedance(&k, eta).unwrap().norm();
            assert!(b <= 1.5 * prev, "η {eta}: {b} after {prev}");
            prev = b;
        }
    }
}

#[test]
fn contour_node_count_is_sublinear_in_kr() {
    let quad = QuadratureConfig::default();
    let t0 = ComplexAngle::real(PI / 3.0);
    let nodes = |kr: f64| {
        dirichlet_diffracted_contour(2.0, t0, 1.0, kr, ContourKind::S, &quad)
            .unwrap()
            .nodes_used as f64
    };
    let (n5, n50) = (nodes(5.0), nodes(50.0));
    assert!(n50 < 10.0 * n5, "{n5} → {n50}");
}

/// Ratio of five-point Helmholtz residuals at `h` and `h/2`.
fn helmholtz_refinement(p: &WedgeProblem, repr: Representation) -> f64 {
    let quad = fine();
    let eval = cartesian_evaluator(p, repr, &quad);
    let region = PolarRegion { r_min: 2.0, r_max: 3.0, theta_min: 0.6, theta_max: 4.1, nr: 2, ntheta: 3 };
    let at = |h| helmholtz_residual(&eval, &region, 1.0, h).unwrap().max_helmholtz_residual;
    at(0.1) / at(0.05)
}

#[test]
fn helmholtz_residual_converges_quadratically() {
    let dirichlet = WedgeProblem::right_angled(BoundaryCondition::Dirichlet, 1.0, 1.0).unwrap();
    let ratio = helmholtz_refinement(&dirichlet, Representation::Edge);
    assert!((3.0..5.0).contains(&ratio), "Dirichlet: {ratio}");
    let imp = impedance(c(0.5, -0.8), c(0.7, 0.0), 1.0);
    for repr in [Representation::Edge, Representation::Contour] {
        let ratio = helmholtz_refinement(&imp, repr);
        assert!((3.0..5.0).contains(&ratio), "{repr}: {ratio}");
    }
}

/// Face-2 residual for `μ2 = 0.7` falls like `h` and `h²` for the two stencils.
#[test]
fn face_two_residual_order_follows_stencil() {
    let p = impedance(c(0.3, 0.1), c(0.7, 0.0), 1.0);
    let BoundaryCondition::Impedance(faces) = p.bc else { unreachable!() };
    let bc = BoundaryCondition::Impedance(faces);
    let quad = fine();
    let eval = cartesian_evaluator(&p, Representation::Contour, &quad);
    let at = |h: f64, order| {
        boundary_residual(&eval, Face::Face2, &bc, 1.0, h, &[2.0, 5.0], order)
            .unwrap()
            .bc_residual(Face::Face2)
            .unwrap()
    };
    for (order, lo, hi) in [(StencilOrder::First, 1.6, 2.4), (StencilOrder::Second, 3.0, 5.0)] {
        let ratio = at(0.02, order) / at(0.01, order);
        assert!((lo..hi).contains(&ratio), "{order:?}: {ratio}");
    }
}

/// The scaled edge-form diffracted field tends to `D` as `kr` grows.
#[test]
fn edge_form_far_field_recovers_d() {
    for (mu1, mu2, theta0) in [(c(0.4, 0.6), c(0.3, 0.2), 1.2), (c(0.5, -0.8), c(0.3, 0.4), 2.1)] {
        let p = impedance(mu1, mu2, theta0);
        let (theta, margin) = widest_angle(&p);
        assert!(margin >= 0.8);
        let BoundaryCondition::Impedance(faces) = p.bc else { unreachable!() };
        let w = ImpedanceWedge::new(faces, &p.incidence).unwrap();
        let kr = [50.0, 100.0, 200.0, 400.0];
        let v: Vec<Complex64> = kr
            .iter()
            .map(|&x| w.diffracted_edge(x, theta, &fine()).unwrap().value * x.sqrt() * c(0.0, -x).exp())
            .collect();
        let d = p.far_field(theta).unwrap().value;
        let fit = neville(&kr, &v);
        assert!((fit - d).norm() < 1e-5, "θ {theta}: {fit} vs {d}");
    }
}
