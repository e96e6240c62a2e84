//! The subcommands. Each builds a [`Table`]; evaluation is parallel over
//! receivers and rows are assembled in input order.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wedge_diffraction::ideal::DirectivityKernel;
use wedge_diffraction::impedance::{ImpedanceWedge, SurfaceWaveStatus};
use wedge_diffraction::impedance_edge::ImpedanceKernel;
use wedge_diffraction::quadrature::{integrate_edge, EdgePoles};
use wedge_diffraction::validation::{
    boundary_residual, cross_representation_diff, far_field_extrapolation, helmholtz_residual, Face, PolarRegion,
    StencilOrder,
};
use wedge_diffraction::{
    BoundaryCondition, FieldDecomposition, FieldPoint, QuadratureConfig, Representation, WedgeError, WedgeProblem,
};

use crate::config::{config_error, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RepresentationChoice {
    Edge,
    Contour,
    Both,
}

impl RepresentationChoice {
    pub fn name(self) -> &'static str {
        match self {
            RepresentationChoice::Edge => "edge",
            RepresentationChoice::Contour => "contour",
            RepresentationChoice::Both => "both",
        }
    }

    /// The representations to evaluate, all of which `problem` must support.
    fn resolve(self, problem: &WedgeProblem) -> CliResult<Vec<Representation>> {
        let reprs = match self {
            RepresentationChoice::Edge => vec![Representation::Edge],
            RepresentationChoice::Contour => vec![Representation::Contour],
            RepresentationChoice::Both => vec![Representation::Edge, Representation::Contour],
        };
        for r in &reprs {
            if !problem.supports(*r) {
                return Err(CliError::Config(format!(
                    "the {r} representation is unavailable for a {} wedge of angle {}",
                    problem.bc.name(),
                    problem.wedge.theta_w()
                )));
            }
        }
        Ok(reprs)
    }
}

fn numeric(p: &FieldPoint, what: &str, e: WedgeError) -> CliError {
    CliError::Numeric(format!("receiver (r = {}, θ = {}), {what}: {e}", p.r, p.theta))
}

/// Results in input order; the first failure in that order wins.
fn par_rows<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> CliResult<R> + Sync + Send) -> CliResult<Vec<R>> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

const TERM_COLUMNS: [&str; 6] = ["incident", "reflected1", "reflected2", "surface1", "surface2", "diffracted"];

fn term_values(d: &FieldDecomposition) -> [Complex64; 6] {
    [d.incident, d.reflected1, d.reflected2, d.surface1, d.surface2, d.diffracted]
}

fn push_complex(row: &mut Vec<Cell>, z: Complex64) {
    row.push(z.re.into());
    row.push(z.im.into());
}

pub fn field_map(config: &ScenarioConfig, choice: RepresentationChoice) -> CliResult<Table> {
    let problem = config.problem()?;
    let reprs = choice.resolve(&problem)?;
    let quad = config.quadrature()?;
    let points = config.receivers()?;
    let threshold = config.zone_threshold();

    let mut columns = vec!["r".to_string(), "theta".to_string()];
    for r in &reprs {
        let prefix = if reprs.len() > 1 { format!("{r}_") } else { String::new() };
        for c in ["re_p", "im_p", "abs_p"] {
            columns.push(format!("{prefix}{c}"));
        }
        for t in TERM_COLUMNS {
            columns.push(format!("{prefix}re_{t}"));
            columns.push(format!("{prefix}im_{t}"));
        }
        columns.push(format!("{prefix}quad_error"));
        columns.push(format!("{prefix}quad_nodes"));
    }
    if reprs.len() > 1 {
        columns.extend(["re_total_diff", "im_total_diff", "abs_total_diff"].map(String::from));
    }
    columns.push("zone_flag".into());
    let mut table = Table::new(columns);

    let rows = par_rows(&points, |p| {
        let mut row: Vec<Cell> = vec![p.r.into(), p.theta.into()];
        let mut totals = Vec::new();
        let mut min_arg = f64::INFINITY;
        for &r in &reprs {
            let d = problem.evaluate(p, r, &quad).map_err(|e| numeric(p, r.name(), e))?;
            let total = d.total();
            push_complex(&mut row, total);
            row.push(total.norm().into());
            for z in term_values(&d) {
                push_complex(&mut row, z);
            }
            row.push(d.report.error_estimate.into());
            row.push(d.report.nodes_used.into());
            totals.push(total);
            for t in &d.terms {
                min_arg = min_arg.min(t.heaviside_arg.abs());
            }
        }
        if let [a, b] = totals[..] {
            push_complex(&mut row, a - b);
            row.push((a - b).norm().into());
        }
        row.push((min_arg < threshold).into());
        Ok(row)
    })?;
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

pub fn diffraction_coeff(config: &ScenarioConfig) -> CliResult<Table> {
    let problem = config.problem()?;
    let angles = config.sweep_angles()?;
    let mut table = Table::new(["theta", "re_d", "im_d", "abs_d", "zone_warning"]);
    let rows = par_rows(&angles, |&theta| {
        let warn = |t: f64| -> CliResult<bool> {
            // the flag band of the far-field coefficient
            let margin = problem.zone_margin(t).map_err(|e| numeric(&FieldPoint::new(0.0, t), "zone margin", e))?;
            Ok(margin < wedge_diffraction::impedance::FAR_FIELD_WARN_BAND)
        };
        match problem.far_field(theta) {
            Ok(d) => {
                let v = d.value;
                Ok(vec![theta.into(), v.re.into(), v.im.into(), v.norm().into(), (!d.flags.is_empty()).into()])
            }
            // D is singular on a zone boundary itself
            Err(WedgeError::Singular { .. }) if warn(theta)? => {
                Ok(vec![theta.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), true.into()])
            }
            Err(e) => Err(CliError::Numeric(format!("far-field coefficient at θ = {theta}: {e}"))),
        }
    })?;
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

pub fn directivity(config: &ScenarioConfig) -> CliResult<Table> {
    let problem = config.problem()?;
    let spec = config
        .directivity
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [directivity] section".into()))?;
    let [lo, hi] = spec.eta;
    if spec.count < 2 || !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(CliError::Config(format!("bad η range [{lo}, {hi}] with {} points", spec.count)));
    }
    let etas: Vec<f64> = (0..spec.count).map(|i| lo + (hi - lo) * i as f64 / (spec.count - 1) as f64).collect();
    let kernel: Box<dyn Fn(f64) -> wedge_diffraction::Result<Complex64> + Sync> = match problem.bc {
        BoundaryCondition::Impedance(faces) => {
            let w = ImpedanceWedge::new(faces, &problem.incidence).map_err(config_error)?;
            let k = ImpedanceKernel::new(&w, spec.theta).map_err(config_error)?;
            Box::new(move |eta| k.eval(Complex64::new(eta, 0.0)))
        }
        bc => {
            let k = DirectivityKernel::new(&bc, &problem.wedge, spec.theta, problem.incidence.theta0)
                .map_err(config_error)?;
            Box::new(move |eta| k.eval_real(eta))
        }
    };
    let mut table = Table::new(["eta", "re_beta", "im_beta", "abs_beta"]);
    let rows = par_rows(&etas, |&eta| {
        let b = kernel(eta).map_err(|e| CliError::Numeric(format!("kernel at θ = {}, η = {eta}: {e}", spec.theta)))?;
        Ok(vec![eta.into(), b.re.into(), b.im.into(), b.norm().into()])
    })?;
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

pub fn cross_check(config: &ScenarioConfig) -> CliResult<Outcome> {
    let problem = config.problem()?;
    RepresentationChoice::Both.resolve(&problem)?;
    let quad = config.quadrature()?;
    let points = config.receivers()?;
    let mut table = Table::new([
        "r",
        "theta",
        "re_total_edge",
        "im_total_edge",
        "re_total_contour",
        "im_total_contour",
        "total_diff",
        "re_diffracted_diff",
        "im_diffracted_diff",
        "re_predicted",
        "im_predicted",
        "absorption_mismatch",
        "zone_margin",
        "surface_terms",
    ]);
    let rows = par_rows(&points, |p| {
        let row = cross_representation_diff(&problem, std::slice::from_ref(p), &quad)
            .map_err(|e| numeric(p, "cross-check", e))?
            .remove(0);
        let mut cells: Vec<Cell> = vec![p.r.into(), p.theta.into()];
        push_complex(&mut cells, row.total_edge);
        push_complex(&mut cells, row.total_contour);
        cells.push(row.total_diff.into());
        push_complex(&mut cells, row.diffracted_diff);
        push_complex(&mut cells, row.predicted);
        cells.push(row.absorption_mismatch.into());
        cells.push(row.zone_margin.into());
        let names: Vec<&str> = row.surface_terms.iter().map(|k| k.name()).collect();
        cells.push(if names.is_empty() { "none".to_string() } else { names.join("+") }.into());
        Ok((cells, row.total_diff, row.absorption_mismatch))
    })?;
    let tol = config.validation.cross_tol;
    let mut worst: Option<(FieldPoint, f64)> = None;
    for (p, (cells, diff, mismatch)) in points.iter().zip(rows) {
        table.push(cells);
        let e = diff.max(mismatch);
        if e > tol && worst.is_none_or(|w| e > w.1) {
            worst = Some((*p, e));
        }
    }
    let failure = worst.map(|(p, e)| {
        format!(
            "cross-representation: difference {e:.3e} > {tol:.1e} at receiver (r = {}, θ = {})",
            p.r, p.theta
        )
    });
    Ok(Outcome { table, failure })
}

/// A report table and, if a check failed, the failing invariant.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<String>,
}

struct Check {
    name: String,
    representation: String,
    value: f64,
    tolerance: f64,
    /// `None` when skipped.
    passed: Option<bool>,
    note: String,
}

impl Check {
    fn new(name: impl Into<String>, representation: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            representation: representation.into(),
            value,
            tolerance,
            passed: Some(value <= tolerance),
            note: String::new(),
        }
    }

    fn skipped(name: &str, representation: &str, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            representation: representation.into(),
            value: f64::NAN,
            tolerance: f64::NAN,
            passed: None,
            note: note.into(),
        }
    }
}

fn is_dirichlet_face(bc: &BoundaryCondition, face: Face) -> bool {
    matches!(
        (bc, face),
        (BoundaryCondition::Dirichlet, _)
            | (BoundaryCondition::DirichletNeumann, Face::Face1)
            | (BoundaryCondition::NeumannDirichlet, Face::Face2)
    )
}

/// Uniform angle in `(lo, hi)` at least `margin` from every zone boundary.
fn draw_angle(rng: &mut ChaCha8Rng, problem: &WedgeProblem, lo: f64, hi: f64, margin: f64) -> CliResult<Option<f64>> {
    for _ in 0..1000 {
        let t = rng.gen_range(lo..hi);
        if problem.zone_margin(t).map_err(config_error)? > margin {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Runs the residual, cross-representation and far-field suites.
pub fn validate(config: &ScenarioConfig, choice: RepresentationChoice, seed: u64) -> CliResult<Outcome> {
    let problem = config.problem()?;
    let reprs = match choice {
        RepresentationChoice::Both => [Representation::Edge, Representation::Contour]
            .into_iter()
            .filter(|r| problem.supports(*r))
            .collect(),
        c => c.resolve(&problem)?,
    };
    let v = &config.validation;
    let reprs: Vec<Representation> = if v.corrupt_kernel_sign { vec![Representation::Edge] } else { reprs };
    if v.draws == 0 || !(v.fd_step > 0.0) {
        return Err(CliError::Config("validation needs draws > 0 and fd_step > 0".into()));
    }
    // the residual oracles need headroom below the finite-difference error
    let quad = QuadratureConfig {
        rel_tol: config.quadrature.rel_tol.unwrap_or(1e-11),
        abs_tol: config.quadrature.abs_tol.unwrap_or(1e-14),
        ..config.quadrature()?
    };
    let k = problem.incidence.k;
    let theta_w = problem.wedge.theta_w();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corrupt = v.corrupt_kernel_sign;
    let field = |p: &FieldPoint, repr: Representation| -> wedge_diffraction::Result<Complex64> {
        if corrupt && repr == Representation::Edge {
            let d = problem.evaluate(p, Representation::Edge, &quad)?;
            return Ok(d.geometrical() + corrupted_diffracted(&problem, p, &quad)?);
        }
        Ok(problem.evaluate(p, repr, &quad)?.total())
    };
    let total = |repr: Representation| {
        let field = &field;
        move |x: f64, y: f64| -> wedge_diffraction::Result<Complex64> {
            let mut p = FieldPoint::from_cartesian(x, y);
            if x == 0.0 && y < 0.0 {
                p.theta = theta_w;
            }
            if p.theta < 0.0 {
                p.theta += 2.0 * PI;
            }
            field(&p, repr)
        }
    };
    let run = |what: &str, e: WedgeError| CliError::Numeric(format!("validation {what}: {e}"));
    let mut checks = Vec::new();

    // face conditions; the Cartesian evaluator only knows the right-angled faces
    let radii: Vec<f64> = (0..v.draws).map(|_| rng.gen_range(1.0..10.0) / k).collect();
    for &repr in &reprs {
        let eval = total(repr);
        for face in [Face::Face1, Face::Face2] {
            let name = format!("bc-residual:{}", face.name());
            if face == Face::Face2 && !problem.wedge.is_right_angled() {
                checks.push(Check::skipped(&name, repr.name(), "face 2 check needs the right-angled wedge"));
                continue;
            }
            let rep = boundary_residual(&eval, face, &problem.bc, k, v.fd_step / k, &radii, StencilOrder::Second)
                .map_err(|e| run(&name, e))?;
            let tol = if is_dirichlet_face(&problem.bc, face) { 1e-7 } else { 1e-5 };
            checks.push(Check::new(name, repr.name(), rep.bc_residual(face).unwrap_or(f64::NAN), tol));
        }
    }

    // Helmholtz residual at random receivers clear of the zone boundaries
    let h = 1e-2 / k;
    let mut spots = Vec::new();
    for _ in 0..v.draws {
        if let Some(t) = draw_angle(&mut rng, &problem, 0.1, theta_w - 0.1, 0.05)? {
            spots.push((rng.gen_range(1.0..6.0) / k, t));
        }
    }
    for &repr in &reprs {
        let eval = total(repr);
        let mut worst = 0.0f64;
        for &(r, t) in &spots {
            let region = PolarRegion { r_min: r, r_max: r, theta_min: t, theta_max: t, nr: 1, ntheta: 1 };
            let rep = helmholtz_residual(&eval, &region, k, h).map_err(|e| run("helmholtz-residual", e))?;
            worst = worst.max(rep.max_helmholtz_residual);
        }
        checks.push(Check::new("helmholtz-residual", repr.name(), worst, 1e-4));
    }

    // edge versus contour, including the surface-wave content the edge form absorbs
    if problem.supports(Representation::Contour) {
        let mut receivers: Vec<FieldPoint> = spots.iter().map(|&(r, t)| FieldPoint::new(r, t)).collect();
        let mut in_regions = Vec::new();
        if let BoundaryCondition::Impedance(faces) = problem.bc {
            let st = SurfaceWaveStatus::new(&faces);
            let mut ranges = Vec::new();
            if st.face1_excited && st.region1_end > 0.1 {
                ranges.push((0.05, st.region1_end - 0.05));
            }
            if st.face2_excited && st.region2_start < theta_w - 0.1 {
                ranges.push((st.region2_start + 0.05, theta_w - 0.05));
            }
            for (lo, hi) in ranges {
                for _ in 0..v.draws {
                    if let Some(t) = draw_angle(&mut rng, &problem, lo, hi, 0.02)? {
                        in_regions.push(FieldPoint::new(rng.gen_range(1.0..6.0) / k, t));
                    }
                }
            }
        }
        receivers.extend(&in_regions);
        let mut worst_total = 0.0f64;
        let mut worst_absorb = 0.0f64;
        if corrupt {
            // the hook only alters the edge form; both checks reduce to the total difference
            for p in &receivers {
                let e = field(p, Representation::Edge).map_err(|e| run("cross-representation", e))?;
                let c = field(p, Representation::Contour).map_err(|e| run("cross-representation", e))?;
                worst_total = worst_total.max((e - c).norm());
            }
            worst_absorb = worst_total;
        } else {
            let rows =
                cross_representation_diff(&problem, &receivers, &quad).map_err(|e| run("cross-representation", e))?;
            for row in &rows {
                worst_total = worst_total.max(row.total_diff);
                worst_absorb = worst_absorb.max(row.absorption_mismatch);
            }
        }
        checks.push(Check::new("cross-representation", "both", worst_total, v.cross_tol));
        if in_regions.is_empty() {
            let mut c = Check::new("surface-wave-extraction", "both", worst_absorb, v.cross_tol);
            c.note = "no surface-wave receivers".into();
            checks.push(c);
        } else {
            checks.push(Check::new("surface-wave-extraction", "both", worst_absorb, v.cross_tol));
        }
    } else {
        checks.push(Check::skipped("cross-representation", "both", "no contour representation"));
    }

    // far field at the angle furthest from every zone boundary
    let (theta, margin) = (0..=200)
        .map(|i| theta_w * i as f64 / 200.0)
        .map(|t| problem.zone_margin(t).map(|m| (t, m)))
        .collect::<wedge_diffraction::Result<Vec<_>>>()
        .map_err(config_error)?
        .into_iter()
        .fold((0.0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
    if margin < 0.8 {
        checks.push(Check::skipped("far-field", "", format!("widest zone margin {margin:.3} below 0.8")));
    } else {
        let fit_quad = QuadratureConfig { abs_tol: 1e-15, ..quad };
        let fit = far_field_extrapolation(&problem, theta, &[50.0, 100.0, 200.0, 400.0], &fit_quad)
            .map_err(|e| run("far-field", e))?;
        let coefficient = fit.coefficient;
        let d = problem.far_field(theta).map_err(|e| run("far-field", e))?.value;
        let repr = if problem.supports(Representation::Contour) { "contour" } else { "edge" };
        let mut c = Check::new("far-field", repr, (coefficient - d).norm(), v.far_field_tol);
        c.note = format!("theta = {theta:.6}");
        checks.push(c);
    }

    let mut table = Table::new(["check", "representation", "value", "tolerance", "status", "note"]);
    let mut failures = Vec::new();
    for c in &checks {
        let status = match c.passed {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "skip",
        };
        if c.passed == Some(false) {
            failures.push(format!("{} ({}): {:.3e} > {:.1e}", c.name, c.representation, c.value, c.tolerance));
        }
        table.push(vec![
            c.name.clone().into(),
            c.representation.clone().into(),
            c.value.into(),
            c.tolerance.into(),
            status.to_string().into(),
            c.note.clone().into(),
        ]);
    }
    let failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Outcome { table, failure })
}

/// Edge-form diffracted field from a kernel with one sign reversed.
fn corrupted_diffracted(
    problem: &WedgeProblem,
    p: &FieldPoint,
    quad: &QuadratureConfig,
) -> wedge_diffraction::Result<Complex64> {
    let (kernel, poles, scale): (Box<dyn Fn(Complex64) -> wedge_diffraction::Result<Complex64>>, _, _) =
        match problem.bc {
            BoundaryCondition::Impedance(faces) => {
                let w = ImpedanceWedge::new(faces, &problem.incidence)?;
                let k = ImpedanceKernel::new(&w, p.theta)?.with_odd_part_negated();
                let poles = k.poles();
                (Box::new(move |e| k.eval(e)), poles, -1.0 / (3.0 * PI))
            }
            bc => {
                let k = DirectivityKernel::new(&bc, &problem.wedge, p.theta, problem.incidence.theta0)?
                    .with_term_sign_flipped(0);
                let poles = k.poles();
                (Box::new(move |e| k.eval(e)), poles, -problem.wedge.nu() / (2.0 * PI))
            }
        };
    let poles = EdgePoles { poles, allow_pv: true };
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let report = integrate_edge(|e| kernel(e).unwrap_or(nan), problem.incidence.k, p.r, &poles, quad)?;
    Ok(report.into_result()?.value * scale)
}
