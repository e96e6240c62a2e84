use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::adaptive::integrate_adaptive;
use super::pv::principal_value;
use super::{QuadratureConfig, QuadratureReport};
use crate::error::{Result, WedgeError};

/// Panels on the real axis are no longer than this fraction of the local
/// oscillation period `2π/(kr sinh η)`.
const OSCILLATION_PANEL_FRACTION: f64 = 0.5;

/// Poles closer than this to the real η-axis are treated as lying on it.
pub const EDGE_PV_TOL: f64 = 1e-9;

/// Kernel poles in the η-plane.
#[derive(Clone, Debug, Default)]
pub struct EdgePoles {
    pub poles: Vec<Complex64>,
    pub allow_pv: bool,
}

/// Where the path leaves the real axis. Every listed pole in the band
/// `−¼ ≤ Im η ≤ π/2 + ¼` must lie to the left of it so that moving the
/// tail up to `Im η = π/2` encloses nothing.
pub fn edge_tail_start(poles: &[Complex64]) -> f64 {
    poles
        .iter()
        .filter(|p| p.im >= -0.25 && p.im <= FRAC_PI_2 + 0.25)
        .map(|p| p.re + 0.75)
        .fold(1.0, f64::max)
}

fn oscillation_breaks(from: f64, to: f64, local_rate: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut breaks = vec![from];
    let mut x = from;
    while x < to {
        let mut h: f64 = 0.5;
        for _ in 0..8 {
            let rate = local_rate((x + h).min(to));
            let limit = OSCILLATION_PANEL_FRACTION * 2.0 * PI / rate.max(1e-300);
            if h <= limit {
                break;
            }
            h = limit.max(1e-4);
        }
        x = (x + h).min(to);
        if to - x < 1e-3 * h {
            x = to;
        }
        breaks.push(x);
    }
    breaks
}

/// `∫_0^∞ e^{ikr cosh η} β(η) dη` for a kernel analytic in the strip
/// `0 ≤ Im η ≤ π/2` to the right of its listed poles.
///
/// The range `[0, η_c]` is integrated on the real axis with panels bounded
/// by the oscillation period. The tail is moved to `η_c → η_c + iπ/2 → ∞ + iπ/2`,
/// where `e^{ikr cosh η} = e^{−kr sinh(Re η)}`, and truncated once that
/// factor drops below the decay target.
pub fn integrate_edge<K: FnMut(Complex64) -> Complex64>(
    mut kernel: K,
    k: f64,
    r: f64,
    poles: &EdgePoles,
    config: &QuadratureConfig,
) -> Result<QuadratureReport> {
    config.validate()?;
    let kr = k * r;
    if !(kr > 0.0 && kr.is_finite()) {
        return Err(WedgeError::Config(format!("edge integral needs kr > 0, got {kr}")));
    }
    let eta_c = edge_tail_start(&poles.poles);
    let budget = config.max_nodes;

    // real segment
    let mut real_part = |x: f64| {
        let eta = Complex64::new(x, 0.0);
        Complex64::new(0.0, kr * x.cosh()).exp() * kernel(eta)
    };
    let mut breaks = oscillation_breaks(0.0, eta_c, |x| kr * x.sinh());
    let mut pv_poles: Vec<f64> = Vec::new();
    for p in &poles.poles {
        let d = p.im.abs();
        if p.re < -0.5 || p.re >= eta_c || d >= 0.5 {
            continue;
        }
        if p.re <= 1e-12 || d >= EDGE_PV_TOL * p.norm().max(1.0) {
            // resolve the near-axis Lorentzian of width d
            let c = p.re.max(0.0);
            for off in [0.0, -4.0 * d, -d, d, 4.0 * d] {
                let b = c + off;
                if b > 0.0 && b < eta_c {
                    breaks.push(b);
                }
            }
            continue;
        }
        if !poles.allow_pv {
            return Err(WedgeError::PoleOnContour { at: p.re });
        }
        if !pv_poles.iter().any(|q| (q - p.re).abs() < 1e-12) {
            pv_poles.push(p.re);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut parts = Vec::new();
    if pv_poles.is_empty() {
        parts.push(integrate_adaptive(&mut real_part, &breaks, config, budget * 3 / 4)?);
    } else {
        pv_poles.sort_by(f64::total_cmp);
        // windows [lo, hi] each holding one pole, separated by midpoints
        let mut edges = vec![0.0];
        for w in pv_poles.windows(2) {
            edges.push(0.5 * (w[0] + w[1]));
        }
        edges.push(eta_c);
        for (i, &pole) in pv_poles.iter().enumerate() {
            let lo = edges[i];
            let hi = edges[i + 1];
            let share = budget / (2 * pv_poles.len());
            // keep the oscillation breakpoints away from the pole itself
            let (inner_lo, inner_hi) = {
                let half = (pole - lo).min(hi - pole).min(0.5);
                (pole - half, pole + half)
            };
            let mut left: Vec<f64> = breaks
                .iter()
                .copied()
                .filter(|b| *b > lo && *b < inner_lo)
                .collect();
            left.insert(0, lo);
            left.push(inner_lo);
            let mut right: Vec<f64> = breaks
                .iter()
                .copied()
                .filter(|b| *b > inner_hi && *b < hi)
                .collect();
            right.insert(0, inner_hi);
            right.push(hi);
            left.dedup();
            right.dedup();
            if left.len() >= 2 && left[0] < left[left.len() - 1] {
                parts.push(integrate_adaptive(&mut real_part, &left, config, share / 2)?);
            }
            parts.push(principal_value(&mut real_part, inner_lo, inner_hi, pole, config)?);
            if right.len() >= 2 && right[0] < right[right.len() - 1] {
                parts.push(integrate_adaptive(&mut real_part, &right, config, share / 2)?);
            }
        }
    }
    drop(real_part);

    // vertical leg η_c → η_c + iπ/2
    let mut vertical = |y: f64| {
        let eta = Complex64::new(eta_c, y);
        (Complex64::new(0.0, kr) * eta.cosh()).exp() * kernel(eta) * Complex64::new(0.0, 1.0)
    };
    let vbreaks = oscillation_breaks(0.0, FRAC_PI_2, |_| kr * eta_c.cosh());
    parts.push(integrate_adaptive(&mut vertical, &vbreaks, config, budget / 8)?);
    drop(vertical);

    // horizontal leg at Im η = π/2
    let target = config.decay_exponent();
    let mut x_end = eta_c + 1.0;
    while kr * x_end.sinh() < target + 2.0 * x_end && x_end < eta_c + 60.0 {
        x_end += 0.05;
    }
    let x_end = eta_c + (x_end - eta_c) * config.truncation_scale;
    let mut horizontal = |x: f64| {
        let eta = Complex64::new(x, FRAC_PI_2);
        kernel(eta) * (-kr * x.sinh()).exp()
    };
    let mid = 0.5 * (eta_c + x_end);
    parts.push(integrate_adaptive(&mut horizontal, &[eta_c, mid, x_end], config, budget / 8)?);

    let mut report = QuadratureReport::combine(&parts).settle(config);
    report.truncation_point = x_end;
    Ok(report)
}
