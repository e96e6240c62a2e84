//! Property tests for the invariants of the core types and kernels.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use wedge_diffraction::field::heaviside;
use wedge_diffraction::geometry::gudermannian;
use wedge_diffraction::ideal::DirectivityKernel;
use wedge_diffraction::impedance::{ImpedanceCoefficients, SurfaceWaveStatus};
use wedge_diffraction::impedance_edge::{q_decomposition, q_hyperbolic};
use wedge_diffraction::quadrature::{contour_s_point, integrate_adaptive, ContourKind};
use wedge_diffraction::sommerfeld::g_function;
use wedge_diffraction::{
    BoundaryCondition, ComplexAngle, FieldPoint, ImpedanceFaces, QuadratureConfig, Representation, WedgeGeometry,
    WedgeProblem,
};

const W: f64 = 1.5 * PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn passive() -> impl Strategy<Value = Complex64> {
    (0.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| c(re, im))
}

fn ideal_bc() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::Dirichlet),
        Just(BoundaryCondition::Neumann),
        Just(BoundaryCondition::DirichletNeumann),
        Just(BoundaryCondition::NeumannDirichlet),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn real_angle_trig_is_exact(x in -10.0..10.0f64) {
        let a = ComplexAngle::real(x);
        prop_assert_eq!(a.sin(), c(x.sin(), 0.0));
        prop_assert_eq!(a.cos(), c(x.cos(), 0.0));
    }

    #[test]
    fn admittance_round_trip(mu1 in passive(), mu2 in passive()) {
        let f = ImpedanceFaces::from_admittance(mu1, mu2).unwrap();
        let (t1, t2) = (f.theta1, f.theta2);
        prop_assert!((-t1.sin() - mu1).norm() < 1e-12 * mu1.norm().max(1.0));
        prop_assert!((t2.cos() - mu2).norm() < 1e-12 * mu2.norm().max(1.0));
        prop_assert!(t1.re >= PI - 1e-12 && t1.re <= W + 1e-12, "Re θ1 = {}", t1.re);
        prop_assert!(t2.re >= -1e-12 && t2.re <= 0.5 * PI + 1e-12, "Re θ2 = {}", t2.re);
    }

    #[test]
    fn heaviside_is_complementary(t in -1.0..1.0f64) {
        prop_assert_eq!(heaviside(t).0 + heaviside(-t).0, 1.0);
    }

    #[test]
    fn wedge_index_in_range(tw in 1.0001 * PI..1.9999 * PI) {
        let w = WedgeGeometry::new(tw).unwrap();
        prop_assert!(w.nu() > 0.5 && w.nu() < 1.0);
    }

    #[test]
    fn ideal_kernels_are_even(bc in ideal_bc(), theta in 0.0..W, theta0 in 0.05..W - 0.05, eta in 0.01..4.0f64) {
        let k = DirectivityKernel::new(&bc, &WedgeGeometry::right_angled(), theta, ComplexAngle::real(theta0)).unwrap();
        let (a, b) = (k.eval(c(eta, 0.0)), k.eval(c(-eta, 0.0)));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn dirichlet_kernel_vanishes_on_faces(theta0 in 0.05..W - 0.05, eta in 0.01..4.0f64) {
        for theta in [0.0, W] {
            let k = DirectivityKernel::new(&BoundaryCondition::Dirichlet, &WedgeGeometry::right_angled(), theta, ComplexAngle::real(theta0)).unwrap();
            prop_assert!(k.eval_real(eta).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn ideal_kernels_are_reciprocal(theta in 0.05..W - 0.05, theta0 in 0.05..W - 0.05, eta in 0.01..4.0f64) {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let w = WedgeGeometry::right_angled();
            let a = DirectivityKernel::new(&bc, &w, theta, ComplexAngle::real(theta0)).unwrap().eval_real(eta);
            let b = DirectivityKernel::new(&bc, &w, theta0, ComplexAngle::real(theta)).unwrap().eval_real(eta);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn s_contour_has_unit_real_cosine(s in -30.0..30.0f64) {
        let (alpha, _) = contour_s_point(ContourKind::S, s);
        prop_assert!((alpha.re + gudermannian(alpha.im)).abs() < 1e-12);
        let cos = alpha.cos();
        prop_assert!((cos.re - 1.0).abs() < 1e-12 * cos.norm().max(1.0));
    }

    #[test]
    fn g_is_periodic_in_three_pi(alpha_re in -5.0..5.0f64, alpha_im in -2.0..2.0f64, t0 in 0.05..W - 0.05) {
        let a = c(alpha_re, alpha_im);
        let t0 = c(t0, 0.0);
        if let (Ok(x), Ok(y)) = (g_function(a, t0), g_function(a + 3.0 * PI, t0)) {
            prop_assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0));
        }
    }

    #[test]
    fn q_parts_have_parity(theta in 0.0..W, a_re in -2.0..2.0f64, a_im in -2.0..2.0f64, mu1 in passive(), mu2 in passive()) {
        let (s1, c2) = (-mu1, mu2);
        let a = c(a_re, a_im);
        let (q, qt) = q_decomposition(a, theta, s1, c2);
        let (qm, qtm) = q_decomposition(-a, theta, s1, c2);
        let scale = q.norm().max(qt.norm()).max(1.0);
        prop_assert!((q - qm).norm() <= 1e-12 * scale);
        prop_assert!((qt + qtm).norm() <= 1e-12 * scale);
        let direct = ((a + theta).sin() + s1) * ((a + theta).cos() + c2);
        prop_assert!((q + qt - direct).norm() <= 1e-12 * scale);
        // q̃ vanishes at η = 0
        let (_, qt0) = q_hyperbolic(theta, s1, c2, c(0.0, 0.0));
        prop_assert!(qt0.norm() < 1e-15);
    }

    #[test]
    fn neumann_limit_coefficients(theta0 in 0.05..W - 0.05) {
        let co = ImpedanceCoefficients::new(theta0, &ImpedanceFaces::rigid()).unwrap();
        // conditioned by 1/sin θ0 and 1/cos θ0 respectively
        prop_assert!((co.r1 - 1.0).norm() < 1e-14 + 1e-15 / theta0.sin().abs());
        prop_assert!((co.r2 - 1.0).norm() < 1e-14 + 1e-15 / theta0.cos().abs());
        prop_assert!(co.t1.norm() < 1e-14 && co.t2.norm() < 1e-14);
    }

    #[test]
    fn surface_wave_angle_and_admittance_forms_agree(mu in passive()) {
        let faces = ImpedanceFaces::from_admittance(mu, mu).unwrap();
        let st = SurfaceWaveStatus::new(&faces);
        let bound = -mu.re / (1.0 + mu.re * mu.re).sqrt();
        prop_assume!((mu.im - bound).abs() > 1e-9);
        prop_assert_eq!(st.face1_excited, mu.im < bound);
        prop_assert_eq!(st.face1_excited, st.admittance_corrected[0]);
    }

    #[test]
    fn converged_reports_meet_tolerance(p in 0.5..20.0f64, rel in 1e-12..1e-6f64) {
        let cfg = QuadratureConfig::default().with_rel_tol(rel);
        let r = integrate_adaptive(|x| c((p * x).cos(), (p * x).sin() / (1.0 + x * x)), &[0.0, 3.0, 7.0], &cfg, 200_000).unwrap();
        if r.converged {
            prop_assert!(r.error_estimate <= (rel * r.value.norm()).max(cfg.abs_tol));
        }
        prop_assert!(r.accepted());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Equal admittances make the configuration symmetric under
    /// `(θ, θ0) → (3π/2 − θ, 3π/2 − θ0)`.
    #[test]
    fn symmetric_impedance_wedge(mu in passive(), theta0 in 0.1..W - 0.1, theta in 0.0..W, kr in 0.5..15.0f64) {
        let faces = ImpedanceFaces::from_admittance(mu, mu).unwrap();
        let bc = BoundaryCondition::Impedance(faces);
        let (Ok(a), Ok(b)) = (
            WedgeProblem::right_angled(bc, theta0, 1.0),
            WedgeProblem::right_angled(bc, W - theta0, 1.0),
        ) else {
            return Ok(());
        };
        prop_assume!(a.zone_margin(theta).unwrap() > 1e-3);
        let quad = QuadratureConfig::precise();
        for repr in [Representation::Edge, Representation::Contour] {
            let x = a.evaluate(&FieldPoint::new(kr, theta), repr, &quad).unwrap().total();
            let y = b.evaluate(&FieldPoint::new(kr, W - theta), repr, &quad).unwrap().total();
            prop_assert!((x - y).norm() < 1e-9, "{repr}: {x} vs {y}");
        }
    }

    #[test]
    fn ideal_diffracted_field_is_reciprocal(bc in prop_oneof![Just(BoundaryCondition::Dirichlet), Just(BoundaryCondition::Neumann)],
                                            theta in 0.1..W - 0.1, theta0 in 0.1..W - 0.1, kr in 0.5..20.0f64) {
        let (Ok(a), Ok(b)) = (WedgeProblem::right_angled(bc, theta0, 1.0), WedgeProblem::right_angled(bc, theta, 1.0)) else {
            return Ok(());
        };
        prop_assume!(a.zone_margin(theta).unwrap() > 1e-3);
        let quad = QuadratureConfig::precise();
        let x = a.evaluate(&FieldPoint::new(kr, theta), Representation::Edge, &quad).unwrap().diffracted;
        let y = b.evaluate(&FieldPoint::new(kr, theta0), Representation::Edge, &quad).unwrap().diffracted;
        prop_assert!((x - y).norm() < 1e-10);
    }
}
