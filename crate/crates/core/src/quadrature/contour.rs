use num_complex::Complex64;

use super::adaptive::integrate_adaptive;
use super::edge::{integrate_edge, EdgePoles};
use super::pv::principal_value;
use super::{QuadratureConfig, QuadratureReport};
use crate::error::{Result, WedgeError};
use crate::geometry::gudermannian;

/// Pole-on-path detection threshold in the α'-plane.
pub const CONTOUR_PV_TOL: f64 = 1e-9;

/// Poles within this distance of the path get a panel breakpoint.
const NEAR_POLE_DISTANCE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContourKind {
    /// Steepest descent through the saddle `α' = 0`: `Re α' = −gd(Im α')`.
    S,
    /// The imaginary axis.
    Gamma,
}

/// Known poles of the integrand and whether a pole on the path may be
/// treated as a principal value.
#[derive(Clone, Debug, Default)]
pub struct ContourPoles {
    pub poles: Vec<Complex64>,
    pub allow_pv: bool,
}

/// Point of the contour at parameter `s`. Both contours are traversed
/// downward: `S` as `α'(s) = gd(s) − i s`, `Γ` as `α'(s) = −i s`.
pub fn contour_s_point(kind: ContourKind, s: f64) -> (Complex64, Complex64) {
    match kind {
        ContourKind::S => (
            Complex64::new(gudermannian(s), -s),
            Complex64::new(1.0 / s.cosh(), -1.0),
        ),
        ContourKind::Gamma => (Complex64::new(0.0, -s), Complex64::new(0.0, -1.0)),
    }
}

/// `e^{ikr cos α'(s)}` on `S`, written as `e^{ikr} e^{−kr sinh s tanh s}`.
pub fn contour_s_weight(kr: f64, s: f64) -> Complex64 {
    Complex64::new(0.0, kr).exp() * (-kr * s.sinh() * s.tanh()).exp()
}

/// Parameter half-range `T` with `kr sinh T tanh T ≥ decay + 2T`; the `2T`
/// allows for integrand growth like `e^{2|Im α'|}`.
fn s_truncation(kr: f64, config: &QuadratureConfig) -> f64 {
    let target = config.decay_exponent();
    let mut t = 0.5f64;
    while kr * t.sinh() * t.tanh() < target + 2.0 * t && t < 60.0 {
        t += 0.05;
    }
    t * config.truncation_scale
}

/// `∫_S f(α') e^{ikr cos α'} dα'` (or the same over `Γ`).
///
/// `f` must be analytic near the path apart from the listed poles. A pole on
/// the path is integrated as a principal value when `poles.allow_pv` is set
/// and is an error otherwise.
pub fn integrate_contour_s<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    k: f64,
    r: f64,
    kind: ContourKind,
    poles: &ContourPoles,
    config: &QuadratureConfig,
) -> Result<QuadratureReport> {
    config.validate()?;
    let kr = k * r;
    if !(kr > 0.0 && kr.is_finite()) {
        return Err(WedgeError::Config(format!("contour integral needs kr > 0, got {kr}")));
    }
    if kind == ContourKind::Gamma {
        // On Γ the exponential only oscillates; fold onto η ≥ 0 and use the
        // deformed edge path: ∫_Γ = −i ∫_0^∞ [f(iη) + f(−iη)] e^{ikr cosh η} dη.
        let i = Complex64::new(0.0, 1.0);
        let edge_poles = EdgePoles {
            poles: poles.poles.iter().flat_map(|p| [i * p, -i * p]).collect(),
            allow_pv: poles.allow_pv,
        };
        let report = integrate_edge(|eta| f(i * eta) + f(-i * eta), k, r, &edge_poles, config)?;
        return Ok(report.scaled(-i));
    }
    let t_max = s_truncation(kr, config);

    let mut integrand = |s: f64| {
        let (alpha, dalpha) = contour_s_point(kind, s);
        f(alpha) * contour_s_weight(kr, s) * dalpha
    };

    let mut breaks = vec![-t_max, 0.0, t_max];
    let mut pv_at: Option<f64> = None;
    for &p in &poles.poles {
        let s_p = -p.im;
        if s_p.abs() >= t_max {
            continue;
        }
        let (on_path, _) = contour_s_point(kind, s_p);
        let dist = (on_path - p).norm();
        if dist < CONTOUR_PV_TOL * p.norm().max(1.0) {
            if !poles.allow_pv {
                return Err(WedgeError::PoleOnContour { at: s_p });
            }
            match pv_at {
                Some(prev) if (prev - s_p).abs() < 1e-12 => {}
                Some(_) => {
                    return Err(WedgeError::Singular {
                        operation: "integrate_contour_s",
                        detail: "more than one distinct pole on the contour".into(),
                    })
                }
                None => pv_at = Some(s_p),
            }
        } else if dist < NEAR_POLE_DISTANCE {
            // resolve the Lorentzian of width `dist`
            for off in [0.0, -4.0 * dist, -dist, dist, 4.0 * dist] {
                if (s_p + off).abs() < t_max {
                    breaks.push(s_p + off);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let report = match pv_at {
        None => integrate_adaptive(&mut integrand, &breaks, config, config.max_nodes)?,
        Some(s_p) => {
            breaks.retain(|b| (b - s_p).abs() > 1e-3 || *b == -t_max || *b == t_max);
            // split at the pole's neighbours so the PV window is local
            let lo = *breaks.iter().filter(|b| **b < s_p).last().unwrap_or(&-t_max);
            let hi = *breaks.iter().find(|b| **b > s_p).unwrap_or(&t_max);
            let mut parts = Vec::new();
            let left: Vec<f64> = breaks.iter().copied().filter(|b| *b <= lo).collect();
            let right: Vec<f64> = breaks.iter().copied().filter(|b| *b >= hi).collect();
            if left.len() >= 2 {
                parts.push(integrate_adaptive(&mut integrand, &left, config, config.max_nodes / 3)?);
            }
            parts.push(principal_value(&mut integrand, lo, hi, s_p, config)?);
            if right.len() >= 2 {
                parts.push(integrate_adaptive(&mut integrand, &right, config, config.max_nodes / 3)?);
            }
            QuadratureReport::combine(&parts).settle(config)
        }
    };
    Ok(QuadratureReport {
        truncation_point: t_max,
        ..report
    })
}
