use num_complex::Complex64;

use super::adaptive::integrate_adaptive;
use super::{QuadratureConfig, QuadratureReport};
use crate::error::Result;

/// Straight piece of a complex integration path, split into `panels`
/// equal starting panels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSegment {
    pub start: Complex64,
    pub end: Complex64,
    pub panels: usize,
}

impl LineSegment {
    pub fn new(start: Complex64, end: Complex64, panels: usize) -> Self {
        Self {
            start,
            end,
            panels: panels.max(1),
        }
    }
}

/// `∫ f(z) dz` along a chain of straight segments.
pub fn integrate_line<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    segments: &[LineSegment],
    config: &QuadratureConfig,
) -> Result<QuadratureReport> {
    config.validate()?;
    if segments.is_empty() {
        return Ok(QuadratureReport::zero());
    }
    let share = config.max_nodes / segments.len();
    let mut parts = Vec::with_capacity(segments.len());
    for seg in segments {
        let dz = seg.end - seg.start;
        if dz.norm() == 0.0 {
            continue;
        }
        let breaks: Vec<f64> = (0..=seg.panels).map(|i| i as f64 / seg.panels as f64).collect();
        let r = integrate_adaptive(|t| f(seg.start + dz * t) * dz, &breaks, config, share)?;
        parts.push(r);
    }
    if parts.is_empty() {
        return Ok(QuadratureReport::zero());
    }
    Ok(QuadratureReport::combine(&parts).settle(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_loop_around_a_pole() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let square = [
            LineSegment::new(c(1.0, -1.0), c(1.0, 1.0), 4),
            LineSegment::new(c(1.0, 1.0), c(-1.0, 1.0), 4),
            LineSegment::new(c(-1.0, 1.0), c(-1.0, -1.0), 4),
            LineSegment::new(c(-1.0, -1.0), c(1.0, -1.0), 4),
        ];
        let r = integrate_line(|z| z.exp() / z, &square, &QuadratureConfig::precise()).unwrap();
        let expected = c(0.0, 2.0 * std::f64::consts::PI);
        assert!((r.value - expected).norm() < 1e-12);
    }
}
