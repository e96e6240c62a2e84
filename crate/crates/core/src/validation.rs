//! Independent checks on computed fields: finite-difference residuals of the
//! Helmholtz equation and of the face conditions, agreement between the two
//! representations, and extrapolation of the far-field coefficient.
//!
//! Evaluators are plain closures `(x, y) ↦ p`, with the edge on the `z` axis,
//! face 1 along the positive `x` axis and face 2 along the negative `y` axis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, WedgeError};
use crate::field::TermKind;
use crate::geometry::{BoundaryCondition, FieldPoint};
use crate::problem::{Representation, WedgeProblem};
use crate::quadrature::QuadratureConfig;

/// Samples must stay this many grid spacings away from faces, apex and zone
/// boundaries.
pub const STENCIL_MARGIN: f64 = 3.0;

/// Floor on `|p|` when normalising face residuals, so that nodes of the
/// field do not inflate them.
pub const RESIDUAL_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Face {
    /// `θ = 0`, the positive `x` axis.
    Face1,
    /// `θ = 3π/2`, the negative `y` axis.
    Face2,
}

impl Face {
    pub fn name(self) -> &'static str {
        match self {
            Face::Face1 => "face1",
            Face::Face2 => "face2",
        }
    }

    fn index(self) -> usize {
        match self {
            Face::Face1 => 0,
            Face::Face2 => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilOrder {
    /// `(p(h) − p(0))/h`
    First,
    /// `(−3p(0) + 4p(h) − p(2h))/(2h)`
    Second,
}

/// Largest finite-difference residuals found over a sample set.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualReport {
    /// `|(∇² + k²)p| / (k²|p|)`
    pub max_helmholtz_residual: f64,
    /// Face-condition residual per face, if that face was checked.
    pub max_bc_residual: [Option<f64>; 2],
    pub grid_spacing: f64,
    pub sample_count: usize,
}

impl ResidualReport {
    pub fn bc_residual(&self, face: Face) -> Option<f64> {
        self.max_bc_residual[face.index()]
    }
}

/// Annular sector of receivers in polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarRegion {
    pub r_min: f64,
    pub r_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub nr: usize,
    pub ntheta: usize,
}

impl PolarRegion {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let step = |lo: f64, hi: f64, n: usize, i: usize| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.nr * self.ntheta);
        for i in 0..self.nr {
            for j in 0..self.ntheta {
                out.push((
                    step(self.r_min, self.r_max, self.nr, i),
                    step(self.theta_min, self.theta_max, self.ntheta, j),
                ));
            }
        }
        out
    }
}

/// Evaluator of the total field of `problem` at Cartesian points.
pub fn cartesian_evaluator<'a>(
    problem: &'a WedgeProblem,
    repr: Representation,
    quad: &'a QuadratureConfig,
) -> impl Fn(f64, f64) -> Result<Complex64> + Sync + 'a {
    move |x, y| {
        let mut p = FieldPoint::from_cartesian(x, y);
        // the face θ = 3π/2 itself
        if x == 0.0 && y < 0.0 {
            p.theta = 1.5 * PI;
        }
        Ok(problem.evaluate(&p, repr, quad)?.total())
    }
}

/// Five-point residual of `(∇² + k²)p` at every point of `region`.
pub fn helmholtz_residual<F: Fn(f64, f64) -> Result<Complex64>>(
    eval: F,
    region: &PolarRegion,
    k: f64,
    h: f64,
) -> Result<ResidualReport> {
    if !(h > 0.0 && k > 0.0) {
        return Err(WedgeError::Config("helmholtz_residual needs h > 0 and k > 0".into()));
    }
    let margin = STENCIL_MARGIN * h;
    if region.r_min < margin
        || region.theta_min * region.r_min < margin
        || (1.5 * PI - region.theta_max) * region.r_min < margin
    {
        return Err(WedgeError::Config(format!(
            "region must keep {margin:.3e} from the faces and the apex"
        )));
    }
    let mut worst: f64 = 0.0;
    let pts = region.points();
    for &(r, theta) in &pts {
        let (x, y) = (r * theta.cos(), r * theta.sin());
        let p0 = eval(x, y)?;
        let lap = (eval(x + h, y)? + eval(x - h, y)? + eval(x, y + h)? + eval(x, y - h)? - 4.0 * p0) / (h * h);
        let res = (lap + k * k * p0).norm() / (k * k * p0.norm().max(RESIDUAL_FLOOR));
        worst = worst.max(res);
    }
    Ok(ResidualReport {
        max_helmholtz_residual: worst,
        grid_spacing: h,
        sample_count: pts.len(),
        ..ResidualReport::default()
    })
}

/// What a face condition requires of `p` and its inward normal derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
enum FaceCondition {
    Dirichlet,
    /// `∂p/∂n = ikμp`, `n` pointing into the wedge; Neumann is `μ = 0`.
    Admittance(Complex64),
}

fn face_condition(bc: &BoundaryCondition, face: Face) -> FaceCondition {
    let zero = Complex64::new(0.0, 0.0);
    match (bc, face) {
        (BoundaryCondition::Dirichlet, _)
        | (BoundaryCondition::DirichletNeumann, Face::Face1)
        | (BoundaryCondition::NeumannDirichlet, Face::Face2) => FaceCondition::Dirichlet,
        (BoundaryCondition::Impedance(f), Face::Face1) => FaceCondition::Admittance(f.mu1),
        (BoundaryCondition::Impedance(f), Face::Face2) => FaceCondition::Admittance(f.mu2),
        _ => FaceCondition::Admittance(zero),
    }
}

/// One-sided residual of the face condition at distances `radii` from the
/// edge. Dirichlet faces report `|p|` (unit incident amplitude); the others
/// report `|∂p/∂n − ikμp| / (k max(|p|, RESIDUAL_FLOOR))` with the normal
/// derivative differenced from the fluid side.
pub fn boundary_residual<F: Fn(f64, f64) -> Result<Complex64>>(
    eval: F,
    face: Face,
    bc: &BoundaryCondition,
    k: f64,
    h: f64,
    radii: &[f64],
    order: StencilOrder,
) -> Result<ResidualReport> {
    if !(h > 0.0 && k > 0.0) {
        return Err(WedgeError::Config("boundary_residual needs h > 0 and k > 0".into()));
    }
    let cond = face_condition(bc, face);
    // face point and unit step into the fluid
    let geometry = |r: f64| match face {
        Face::Face1 => ((r, 0.0), (0.0, 1.0)),
        Face::Face2 => ((0.0, -r), (-1.0, 0.0)),
    };
    let mut worst: f64 = 0.0;
    for &r in radii {
        if r < STENCIL_MARGIN * h {
            return Err(WedgeError::Config(format!("face sample at r = {r} is within 3h of the apex")));
        }
        let ((x, y), (dx, dy)) = geometry(r);
        let p0 = eval(x, y)?;
        let res = match cond {
            FaceCondition::Dirichlet => p0.norm(),
            FaceCondition::Admittance(mu) => {
                let p1 = eval(x + h * dx, y + h * dy)?;
                // derivative into the fluid; the inward normal is its negative
                let d_out = match order {
                    StencilOrder::First => (p1 - p0) / h,
                    StencilOrder::Second => {
                        let p2 = eval(x + 2.0 * h * dx, y + 2.0 * h * dy)?;
                        (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * h)
                    }
                };
                let dn = -d_out;
                (dn - Complex64::new(0.0, k) * mu * p0).norm() / (k * p0.norm().max(RESIDUAL_FLOOR))
            }
        };
        worst = worst.max(res);
    }
    let mut max_bc_residual = [None, None];
    max_bc_residual[face.index()] = Some(worst);
    Ok(ResidualReport {
        max_bc_residual,
        grid_spacing: h,
        sample_count: radii.len(),
        ..ResidualReport::default()
    })
}

/// Edge-versus-contour comparison at one receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossRow {
    pub point: FieldPoint,
    pub total_edge: Complex64,
    pub total_contour: Complex64,
    /// `|total_edge − total_contour|`
    pub total_diff: f64,
    /// `p_d(edge) − p_d(contour)`
    pub diffracted_diff: Complex64,
    /// Geometrical content the edge form absorbs: contour minus edge terms.
    pub predicted: Complex64,
    /// `|diffracted_diff − predicted|`
    pub absorption_mismatch: f64,
    /// Surface-wave terms gated on in the contour split.
    pub surface_terms: Vec<TermKind>,
    pub zone_margin: f64,
}

/// Evaluates both representations at each receiver.
pub fn cross_representation_diff(
    problem: &WedgeProblem,
    receivers: &[FieldPoint],
    quad: &QuadratureConfig,
) -> Result<Vec<CrossRow>> {
    if !problem.supports(Representation::Contour) {
        return Err(WedgeError::Config(format!(
            "cross-check needs a contour representation, unavailable for {}",
            problem.bc.name()
        )));
    }
    receivers
        .iter()
        .map(|p| {
            let e = problem.evaluate(p, Representation::Edge, quad)?;
            let c = problem.evaluate(p, Representation::Contour, quad)?;
            let diffracted_diff = e.diffracted - c.diffracted;
            let predicted = c.geometrical() - e.geometrical();
            Ok(CrossRow {
                point: *p,
                total_edge: e.total(),
                total_contour: c.total(),
                total_diff: (e.total() - c.total()).norm(),
                diffracted_diff,
                predicted,
                absorption_mismatch: (diffracted_diff - predicted).norm(),
                surface_terms: problem.surface_terms(p.theta)?.iter().map(|t| t.kind).collect(),
                zone_margin: problem.zone_margin(p.theta)?,
            })
        })
        .collect()
}

/// Result of extrapolating `√(kr) e^{−ikr} p_d` to `kr → ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldFit {
    pub coefficient: Complex64,
    /// Observed exponent `q` in `√(kr) e^{−ikr} p_d − D ≈ c (kr)^{−q}`.
    pub order: f64,
    /// Change in the extrapolated value when the smallest `kr` is dropped.
    pub fit_residual: f64,
    /// Receiver within the warning band of a zone boundary.
    pub flagged: bool,
    pub samples: Vec<(f64, Complex64)>,
}

/// Polynomial extrapolation in `1/kr` to zero (Neville).
fn extrapolate_to_zero(h: &[f64], v: &[Complex64]) -> Complex64 {
    let n = h.len();
    let mut p = v.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

/// Samples the diffracted field of `problem` at `theta` for each `kr` and
/// extrapolates the scaled amplitude. Uses the contour form when available.
pub fn far_field_extrapolation(
    problem: &WedgeProblem,
    theta: f64,
    kr_sequence: &[f64],
    quad: &QuadratureConfig,
) -> Result<FarFieldFit> {
    if kr_sequence.len() < 3 {
        return Err(WedgeError::Config("far-field extrapolation needs at least three kr values".into()));
    }
    let repr = if problem.supports(Representation::Contour) {
        Representation::Contour
    } else {
        Representation::Edge
    };
    let k = problem.incidence.k;
    let mut samples = Vec::with_capacity(kr_sequence.len());
    for &kr in kr_sequence {
        let d = problem.evaluate(&FieldPoint::new(kr / k, theta), repr, quad)?;
        samples.push((kr, d.diffracted * kr.sqrt() * Complex64::new(0.0, -kr).exp()));
    }
    let h: Vec<f64> = kr_sequence.iter().map(|kr| 1.0 / kr).collect();
    let v: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
    let coefficient = extrapolate_to_zero(&h, &v);
    let without_first = extrapolate_to_zero(&h[1..], &v[1..]);
    let d0 = (v[0] - v[1]).norm();
    let d1 = (v[1] - v[2]).norm();
    let order = (d0 / d1).ln() / (kr_sequence[1] / kr_sequence[0]).ln();
    let flagged = !problem.far_field(theta)?.flags.is_empty();
    Ok(FarFieldFit {
        coefficient,
        order,
        fit_residual: (coefficient - without_first).norm(),
        flagged,
        samples,
    })
}
