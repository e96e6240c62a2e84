use num_complex::Complex64;

use super::adaptive::integrate_adaptive;
use super::{QuadratureConfig, QuadratureReport};
use crate::error::Result;

/// Number of excision half-widths `ε_n = ε_0 / 2ⁿ` fed to the extrapolation.
const RICHARDSON_TERMS: usize = 5;

/// Cauchy principal value of `∫_a^b g(t) dt` with a simple pole at `pole`.
///
/// A window of half-width `δ` around the pole is folded onto `[0, δ]`, where
/// `g(p+u) + g(p−u)` is smooth and even in `u`. The excised integrals
/// `I(ε) = ∫_ε^δ` are therefore `PV + c₁ε + c₃ε³ + …`, and a Richardson table
/// over odd powers removes the excision error. Outside the window the
/// integral is ordinary.
pub fn principal_value<G: FnMut(f64) -> Complex64>(
    mut g: G,
    a: f64,
    b: f64,
    pole: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureReport> {
    assert!(a < pole && pole < b, "pole must be interior");
    let delta = (pole - a).min(b - pole).min(0.5);
    let eps0 = config.pv_epsilon.unwrap_or(delta / 64.0).min(delta / 2.0);
    let budget = config.max_nodes / (RICHARDSON_TERMS + 3);

    let mut parts = Vec::with_capacity(3);
    if pole - delta > a {
        parts.push(integrate_adaptive(&mut g, &[a, pole - delta], config, budget)?);
    }
    if pole + delta < b {
        parts.push(integrate_adaptive(&mut g, &[pole + delta, b], config, budget)?);
    }

    // folded window: [ε_0, δ] once, then successively smaller excisions
    let mut folded = |u: f64| g(pole + u) + g(pole - u);
    let outer = integrate_adaptive(&mut folded, &[eps0, delta], config, budget)?;
    let mut window_nodes = outer.nodes_used;
    let mut window_err = outer.error_estimate;
    let mut window_ok = outer.accepted();
    let mut levels = Vec::with_capacity(RICHARDSON_TERMS);
    levels.push(outer.value);
    for n in 1..RICHARDSON_TERMS {
        let eps = eps0 / f64::powi(2.0, n as i32);
        let r = integrate_adaptive(&mut folded, &[eps, eps0], config, budget)?;
        window_nodes += r.nodes_used;
        window_ok &= r.accepted();
        window_err = window_err.max(outer.error_estimate + r.error_estimate);
        levels.push(outer.value + r.value);
    }

    let (value, extrapolation_err) = richardson_odd(&levels);
    let window = QuadratureReport {
        value,
        error_estimate: extrapolation_err + window_err,
        nodes_used: window_nodes,
        truncation_point: b,
        pv_applied: true,
        converged: false,
        roundoff_limited: false,
    };
    // the extrapolation cannot beat the noise of its inputs
    let converged = window_ok && window.error_estimate <= config.tolerance_for(value);
    let window = QuadratureReport {
        converged,
        roundoff_limited: window_ok && !converged && extrapolation_err <= 10.0 * window_err,
        ..window
    };
    parts.push(window);
    let mut total = QuadratureReport::combine(&parts).settle(config);
    total.truncation_point = b;
    total.pv_applied = true;
    Ok(total)
}

/// Extrapolates `I(ε_0 / 2ⁿ)` to `ε → 0` assuming an odd power series in ε.
/// Returns the extrapolated value and the change made by the last column.
fn richardson_odd(levels: &[Complex64]) -> (Complex64, f64) {
    let mut table = levels.to_vec();
    let mut last_change = f64::INFINITY;
    for col in 0..levels.len() - 1 {
        let factor = f64::powi(2.0, 2 * col as i32 + 1);
        let next: Vec<Complex64> = table
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        last_change = (next[next.len() - 1] - table[table.len() - 1]).norm();
        table = next;
    }
    (table[0], last_change)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_integrand_has_zero_pv() {
        let r = principal_value(|t| Complex64::new(1.0 / t, 0.0), -1.0, 1.0, 0.0, &QuadratureConfig::precise())
            .unwrap();
        assert!(r.value.norm() < 1e-14);
        assert!(r.pv_applied && r.accepted());
    }

    #[test]
    fn pole_plus_smooth_part() {
        let smooth = |t: f64| (2.0 * t).cos() + t * t;
        let r = principal_value(
            |t| Complex64::new(1.0 / t + smooth(t), 0.0),
            -1.0,
            1.0,
            0.0,
            &QuadratureConfig::precise(),
        )
        .unwrap();
        let exact = 2f64.sin() + 2.0 / 3.0;
        assert!((r.value.re - exact).abs() < 1e-12, "{} vs {exact}", r.value.re);
    }

    #[test]
    fn asymmetric_interval() {
        // PV ∫_0^3 e^t/(t−1) dt = e·(Ei(2) − Ei(−1))
        let ei2 = 4.954_234_356_001_890;
        let ei_m1 = -0.219_383_934_395_520_3;
        let exact = std::f64::consts::E * (ei2 - ei_m1);
        let r = principal_value(
            |t| Complex64::new(t.exp() / (t - 1.0), 0.0),
            0.0,
            3.0,
            1.0,
            &QuadratureConfig::precise(),
        )
        .unwrap();
        assert!((r.value.re - exact).abs() < 1e-10, "{} vs {exact}", r.value.re);
    }

    #[test]
    fn richardson_removes_odd_powers() {
        let pv = Complex64::new(1.25, -0.5);
        let levels: Vec<Complex64> = (0..4)
            .map(|n| {
                let e = 0.1 / f64::powi(2.0, n);
                pv + 3.0 * e - 7.0 * e.powi(3) + 11.0 * e.powi(5)
            })
            .collect();
        let (v, _) = richardson_odd(&levels);
        assert!((v - pv).norm() < 1e-13);
    }
}
