use thiserror::Error;

use crate::quadrature::QuadratureReport;

pub type Result<T> = std::result::Result<T, WedgeError>;

#[derive(Debug, Clone, Error)]
pub enum WedgeError {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("domain error in {operation}: argument {argument} outside the admissible range")]
    Domain { operation: &'static str, argument: f64 },

    #[error("passivity violation on {face}: Re(mu) = {re_mu} < 0")]
    Passivity { face: &'static str, re_mu: f64 },

    #[error("incidence angle outside the admissible strip: {0}")]
    Incidence(String),

    #[error("degenerate parameters: |{factor}| = {magnitude:.3e} below tolerance")]
    DegenerateParameter { factor: &'static str, magnitude: f64 },

    #[error("singular evaluation in {operation}: {detail}")]
    Singular { operation: &'static str, detail: String },

    #[error("kernel returned a non-finite value at parameter {at}")]
    KernelEvaluation { at: f64 },

    #[error("quadrature failed to converge: value {:.6e}{:+.6e}i, error estimate {:.3e} after {} nodes", report.value.re, report.value.im, report.error_estimate, report.nodes_used)]
    Quadrature { report: Box<QuadratureReport> },

    #[error("pole within the principal-value window of the contour at parameter {at}; explicit PV mode required")]
    PoleOnContour { at: f64 },

    #[error("invalid quadrature configuration: {0}")]
    Config(String),
}
