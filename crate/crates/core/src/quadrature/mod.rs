//! Numerical integration for the wedge representations.
//!
//! Everything reduces to complex-valued integrands of one real parameter,
//! evaluated by globally adaptive Gauss–Kronrod (10/21) panels. Three entry
//! points sit on top of that:
//!
//! * [`integrate_edge`]: semi-infinite edge integrals `∫_0^∞ e^{ikr cosh η} β(η) dη`;
//! * [`integrate_contour_s`]: the steepest-descent contour through `α' = 0`;
//! * [`principal_value`]: simple poles sitting on the path.
//!
//! Panel sums are accumulated in position order with pairwise summation, so a
//! fixed configuration reproduces results bit for bit.

mod adaptive;
mod contour;
mod edge;
mod gauss_kronrod;
mod path;
mod pv;

pub use adaptive::{integrate_adaptive, Panel};
pub use contour::{contour_s_point, contour_s_weight, integrate_contour_s, ContourKind, ContourPoles};
pub use edge::{edge_tail_start, integrate_edge, EdgePoles};
pub use gauss_kronrod::{GK21_NODES, GK21_WEIGHTS, G10_WEIGHTS};
pub use path::{integrate_line, LineSegment};
pub use pv::principal_value;

use num_complex::Complex64;

use crate::error::{Result, WedgeError};

/// Tolerances and limits shared by every integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on integrand evaluations.
    pub max_nodes: usize,
    /// Envelope level at which semi-infinite ranges are cut off.
    pub truncation_decay_target: f64,
    /// Initial excision half-width for principal values; `None` picks one
    /// from the distance to the nearest panel end.
    pub pv_epsilon: Option<f64>,
    /// Multiplier on every truncation point (1 = nominal).
    pub truncation_scale: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_nodes: 400_000,
            truncation_decay_target: (-36.0f64).exp(),
            pv_epsilon: None,
            truncation_scale: 1.0,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Tight settings used by finite-difference oracles.
    pub fn precise() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(WedgeError::Config("tolerances must be positive".into()));
        }
        if self.max_nodes < 64 {
            return Err(WedgeError::Config(format!(
                "max_nodes = {} below the minimum of 64",
                self.max_nodes
            )));
        }
        if !(self.truncation_decay_target > 0.0 && self.truncation_decay_target < 1.0) {
            return Err(WedgeError::Config(
                "truncation_decay_target must lie in (0, 1)".into(),
            ));
        }
        if let Some(eps) = self.pv_epsilon {
            if !(eps > 0.0) {
                return Err(WedgeError::Config("pv_epsilon must be positive".into()));
            }
        }
        if !(self.truncation_scale >= 1.0) {
            return Err(WedgeError::Config("truncation_scale must be ≥ 1".into()));
        }
        Ok(())
    }

    /// `ln(1/target)`, the exponent the integrand envelope must reach.
    pub(crate) fn decay_exponent(&self) -> f64 {
        -self.truncation_decay_target.ln()
    }

    pub(crate) fn tolerance_for(&self, value: Complex64) -> f64 {
        (self.rel_tol * value.norm()).max(self.abs_tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureReport {
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes_used: usize,
    /// Last parameter value reached on the (possibly deformed) path.
    pub truncation_point: f64,
    pub pv_applied: bool,
    /// `error_estimate ≤ max(rel_tol·|value|, abs_tol)`.
    pub converged: bool,
    /// The tolerance is below what rounding allows for this integrand;
    /// `error_estimate` is the attainable accuracy and the value is kept.
    pub roundoff_limited: bool,
}

impl QuadratureReport {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            nodes_used: 0,
            truncation_point: 0.0,
            pv_applied: false,
            converged: true,
            roundoff_limited: false,
        }
    }

    /// Sum of independent pieces of one integral.
    pub fn combine(parts: &[QuadratureReport]) -> Self {
        let values: Vec<Complex64> = parts.iter().map(|p| p.value).collect();
        Self {
            value: pairwise_sum(&values),
            error_estimate: parts.iter().map(|p| p.error_estimate).sum(),
            nodes_used: parts.iter().map(|p| p.nodes_used).sum(),
            truncation_point: parts
                .iter()
                .map(|p| p.truncation_point)
                .fold(0.0, f64::max),
            pv_applied: parts.iter().any(|p| p.pv_applied),
            converged: parts.iter().all(|p| p.converged),
            roundoff_limited: parts.iter().all(|p| p.accepted()) && parts.iter().any(|p| p.roundoff_limited),
        }
    }

    /// Usable result: converged, or limited only by rounding.
    pub fn accepted(&self) -> bool {
        self.converged || self.roundoff_limited
    }

    /// Re-checks the tolerance on the assembled value. Pieces that each met
    /// their tolerance but cancel in the sum are rounding-limited.
    pub(crate) fn settle(mut self, config: &QuadratureConfig) -> Self {
        if !self.accepted() {
            return self;
        }
        self.converged = self.error_estimate <= config.tolerance_for(self.value);
        self.roundoff_limited = !self.converged;
        self
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        self.value *= factor;
        self.error_estimate *= factor.norm();
        self
    }

    /// Turns a report that is neither converged nor rounding-limited into an error.
    pub fn into_result(self) -> Result<Self> {
        if self.accepted() {
            Ok(self)
        } else {
            Err(WedgeError::Quadrature {
                report: Box::new(self),
            })
        }
    }
}

/// Pairwise (cascade) summation in slice order.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n if n <= 8 => values.iter().fold(Complex64::new(0.0, 0.0), |acc, v| acc + v),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}
