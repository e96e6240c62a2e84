use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::gauss_kronrod::gk21;
use super::{pairwise_sum, QuadratureConfig, QuadratureReport};
use crate::error::{Result, WedgeError};

const NODES_PER_PANEL: usize = 21;

#[derive(Clone, Copy, Debug)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
    pub error: f64,
    pub roundoff: f64,
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            // deterministic tie-break
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over consecutive
/// panels delimited by `breakpoints` (sorted, at least two entries).
///
/// `node_budget` caps evaluations for this call; the report is returned with
/// `converged = false` when it runs out. When every remaining panel is at
/// its rounding floor the report is `roundoff_limited` instead.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    breakpoints: &[f64],
    config: &QuadratureConfig,
    node_budget: usize,
) -> Result<QuadratureReport> {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::new();
    let mut nodes = 0usize;
    let mut finished: Vec<Panel> = Vec::new();

    let mut run = |a: f64, b: f64, nodes: &mut usize| -> Result<Panel> {
        let r = gk21(&mut f, a, b);
        *nodes += NODES_PER_PANEL;
        if let Some(at) = r.non_finite_at {
            return Err(WedgeError::KernelEvaluation { at });
        }
        Ok(Panel {
            a,
            b,
            value: r.kronrod,
            error: r.error,
            roundoff: r.roundoff,
        })
    };

    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(ByError(run(w[0], w[1], &mut nodes)?));
        }
    }

    let span = (breakpoints[breakpoints.len() - 1] - breakpoints[0]).abs().max(1.0);
    let (mut value, mut error) = totals(heap.iter().map(|p| &p.0));
    let mut converged = false;
    let mut unresolved = false;
    let mut roundoff_limited = false;
    let mut iterations = 0usize;

    loop {
        iterations += 1;
        if iterations % 64 == 0 {
            // resynchronise the running sums
            (value, error) = totals(heap.iter().map(|p| &p.0).chain(finished.iter()));
        }
        if error <= config.tolerance_for(value) {
            (value, error) = totals(heap.iter().map(|p| &p.0).chain(finished.iter()));
            if error <= config.tolerance_for(value) {
                converged = true;
                break;
            }
        }
        if nodes + 2 * NODES_PER_PANEL > node_budget {
            break;
        }
        let Some(ByError(worst)) = heap.pop() else {
            // every remaining panel sits at its rounding floor
            roundoff_limited = !unresolved;
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let at_floor = worst.error <= worst.roundoff;
        if at_floor || (worst.b - worst.a).abs() < 1e-13 * span || mid <= worst.a || mid >= worst.b {
            // cannot be resolved further in floating point
            unresolved |= !at_floor;
            finished.push(worst);
            continue;
        }
        let left = run(worst.a, mid, &mut nodes)?;
        let right = run(mid, worst.b, &mut nodes)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
    }
    let (_, error) = totals(heap.iter().map(|p| &p.0).chain(finished.iter()));

    let mut panels: Vec<Panel> = heap.into_iter().map(|p| p.0).chain(finished).collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<Complex64> = panels.iter().map(|p| p.value).collect();
    let value = pairwise_sum(&values);

    Ok(QuadratureReport {
        value,
        error_estimate: error,
        nodes_used: nodes,
        truncation_point: breakpoints[breakpoints.len() - 1],
        pv_applied: false,
        converged,
        roundoff_limited,
    })
}

fn totals<'a, I: Iterator<Item = &'a Panel>>(panels: I) -> (Complex64, f64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut e = 0.0;
    for p in panels {
        v += p.value;
        e += p.error;
    }
    (v, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_peaked_function() {
        // Lorentzian of width 1e-3 centred off a breakpoint.
        let w = 1e-3;
        let f = |x: f64| Complex64::new(w / ((x - 0.3).powi(2) + w * w), 0.0);
        let r = integrate_adaptive(f, &[0.0, 1.0], &QuadratureConfig::precise(), 1_000_000).unwrap();
        let exact = (0.7f64 / w).atan() + (0.3f64 / w).atan();
        assert!(r.converged);
        assert!((r.value.re - exact).abs() < 1e-10, "{} vs {}", r.value.re, exact);
    }

    #[test]
    fn cancelling_integrand_stops_at_rounding_floor() {
        let cfg = QuadratureConfig::default().with_rel_tol(1e-14).with_abs_tol(1e-30);
        let r = integrate_adaptive(|x| Complex64::new(x.sin(), 0.0), &[-3.0, 3.0], &cfg, 100_000).unwrap();
        assert!(!r.converged && r.roundoff_limited);
        assert!(r.value.norm() < 1e-14 && r.error_estimate < 1e-13);
        assert!(r.nodes_used < 1_000);
    }

    #[test]
    fn non_finite_is_reported() {
        let f = |_x: f64| Complex64::new(f64::NAN, 0.0);
        let err = integrate_adaptive(f, &[0.0, 1.0], &QuadratureConfig::default(), 10_000);
        assert!(matches!(err, Err(WedgeError::KernelEvaluation { .. })));
    }

    #[test]
    fn budget_exhaustion_is_not_converged() {
        let f = |x: f64| Complex64::new((1000.0 * x).sin() / (x + 1e-6).sqrt(), 0.0);
        let r = integrate_adaptive(f, &[0.0, 10.0], &QuadratureConfig::precise(), 200).unwrap();
        assert!(!r.converged);
        assert!(r.into_result().is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| Complex64::new(x.cos(), (3.0 * x).sin() * x);
        let cfg = QuadratureConfig::precise();
        let a = integrate_adaptive(f, &[0.0, 2.0, 7.0], &cfg, 100_000).unwrap();
        let b = integrate_adaptive(f, &[0.0, 2.0, 7.0], &cfg, 100_000).unwrap();
        assert_eq!(a.value, b.value);
    }
}
