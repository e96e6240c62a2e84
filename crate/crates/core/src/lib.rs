//! Acoustic diffraction of plane waves by infinite wedges.
//!
//! Ideal wedges (Dirichlet, Neumann and mixed faces, any exterior angle) are
//! evaluated as line integrals of secondary edge sources. The right-angled
//! wedge with impedance faces has two equivalent representations: a
//! steepest-descent contour integral and an edge-source integral that absorbs
//! the surface waves. [`problem::WedgeProblem`] dispatches between them and
//! [`validation`] provides the finite-difference and cross-representation
//! checks used by the test suite and the command-line tool.

pub mod error;
pub mod field;
pub mod geometry;
pub mod ideal;
pub mod impedance;
pub mod impedance_edge;
pub mod problem;
pub mod quadrature;
pub mod sommerfeld;
pub mod validation;

pub use error::{Result, WedgeError};
pub use field::{FieldDecomposition, FieldFlag, TermKind};
pub use geometry::{BoundaryCondition, ComplexAngle, FieldPoint, ImpedanceFaces, IncidentPlaneWave, WedgeGeometry};
pub use problem::{Representation, WedgeProblem};
pub use quadrature::{QuadratureConfig, QuadratureReport};
