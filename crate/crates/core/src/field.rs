//! Named field contributions and the zone (Heaviside) gates that switch
//! them on and off.

use std::fmt;

use num_complex::Complex64;

use crate::quadrature::QuadratureReport;

/// Heaviside arguments closer to zero than this are treated as exactly on a
/// zone boundary: the gate takes the value ½ and the evaluation is flagged.
pub const ZONE_TOL: f64 = 1e-9;

/// `H[t]` with `H[0] = ½`, plus whether `t` was within [`ZONE_TOL`] of 0.
pub fn heaviside(t: f64) -> (f64, bool) {
    if t.abs() < ZONE_TOL {
        (0.5, true)
    } else if t > 0.0 {
        (1.0, false)
    } else {
        (0.0, false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Incident,
    Reflected1,
    Reflected2,
    Surface1,
    Surface2,
}

impl TermKind {
    pub const ALL: [TermKind; 5] = [
        TermKind::Incident,
        TermKind::Reflected1,
        TermKind::Reflected2,
        TermKind::Surface1,
        TermKind::Surface2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TermKind::Incident => "incident",
            TermKind::Reflected1 => "reflected1",
            TermKind::Reflected2 => "reflected2",
            TermKind::Surface1 => "surface1",
            TermKind::Surface2 => "surface2",
        }
    }
}

/// Which way a plane-wave term propagates: `e^{−ikr cos χ}` or `e^{+ikr cos χ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSign {
    Minus,
    Plus,
}

/// One gated plane-wave term `coefficient · H[heaviside_arg] · e^{∓ikr cos χ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZoneTerm {
    pub kind: TermKind,
    pub coefficient: Complex64,
    pub heaviside_arg: f64,
    /// The angle `χ` in the phase.
    pub phase_angle: Complex64,
    pub sign: PhaseSign,
}

impl ZoneTerm {
    pub fn phase(&self, kr: f64) -> Complex64 {
        let s = match self.sign {
            PhaseSign::Minus => -1.0,
            PhaseSign::Plus => 1.0,
        };
        (Complex64::new(0.0, s * kr) * self.phase_angle.cos()).exp()
    }

    pub fn gate(&self) -> f64 {
        heaviside(self.heaviside_arg).0
    }

    pub fn on_boundary(&self) -> bool {
        heaviside(self.heaviside_arg).1
    }

    /// The term's contribution at `kr`. Skips the exponential when gated off,
    /// since inhomogeneous waves can overflow outside their zone.
    pub fn value(&self, kr: f64) -> Complex64 {
        let g = self.gate();
        if g == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficient * g * self.phase(kr)
        }
    }
}

/// Diagnostics attached to an evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldFlag {
    /// A gate argument was within [`ZONE_TOL`] of zero.
    ZoneBoundary(TermKind),
    /// As above, for a gate that depends on a complex angle.
    ComplexZoneBoundary(TermKind),
    /// One of the two corner configurations where an unshifted surface-wave
    /// gate is exactly zero.
    DegenerateCorner(TermKind),
    /// Receiver within the far-field warning band of a zone boundary.
    NearZoneBoundary(TermKind),
}

impl fmt::Display for FieldFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldFlag::ZoneBoundary(k) => write!(f, "zone-boundary:{}", k.name()),
            FieldFlag::ComplexZoneBoundary(k) => write!(f, "complex-zone-boundary:{}", k.name()),
            FieldFlag::DegenerateCorner(k) => write!(f, "degenerate-corner:{}", k.name()),
            FieldFlag::NearZoneBoundary(k) => write!(f, "near-zone-boundary:{}", k.name()),
        }
    }
}

/// The total field split into geometrical-acoustics terms and the remaining
/// diffracted (edge or contour) term.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDecomposition {
    pub incident: Complex64,
    pub reflected1: Complex64,
    pub reflected2: Complex64,
    pub surface1: Complex64,
    pub surface2: Complex64,
    pub diffracted: Complex64,
    pub terms: Vec<ZoneTerm>,
    pub flags: Vec<FieldFlag>,
    pub report: QuadratureReport,
}

impl FieldDecomposition {
    /// Assembles the decomposition from gated terms evaluated at `kr`.
    pub fn assemble(terms: Vec<ZoneTerm>, kr: f64, diffracted: QuadratureReport, mut flags: Vec<FieldFlag>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let mut parts = [zero; 5];
        for t in &terms {
            let idx = TermKind::ALL.iter().position(|k| *k == t.kind).unwrap_or(0);
            parts[idx] += t.value(kr);
            if t.on_boundary() {
                let flag = if t.phase_angle.im != 0.0 {
                    FieldFlag::ComplexZoneBoundary(t.kind)
                } else {
                    FieldFlag::ZoneBoundary(t.kind)
                };
                if !flags.contains(&flag) {
                    flags.push(flag);
                }
            }
        }
        Self {
            incident: parts[0],
            reflected1: parts[1],
            reflected2: parts[2],
            surface1: parts[3],
            surface2: parts[4],
            diffracted: diffracted.value,
            terms,
            flags,
            report: diffracted,
        }
    }

    pub fn geometrical(&self) -> Complex64 {
        self.incident + self.reflected1 + self.reflected2 + self.surface1 + self.surface2
    }

    pub fn total(&self) -> Complex64 {
        self.geometrical() + self.diffracted
    }

    pub fn term(&self, kind: TermKind) -> Complex64 {
        match kind {
            TermKind::Incident => self.incident,
            TermKind::Reflected1 => self.reflected1,
            TermKind::Reflected2 => self.reflected2,
            TermKind::Surface1 => self.surface1,
            TermKind::Surface2 => self.surface2,
        }
    }

    pub fn on_zone_boundary(&self) -> bool {
        self.flags.iter().any(|f| {
            matches!(
                f,
                FieldFlag::ZoneBoundary(_) | FieldFlag::ComplexZoneBoundary(_) | FieldFlag::DegenerateCorner(_)
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heaviside_convention() {
        assert_eq!(heaviside(1.0), (1.0, false));
        assert_eq!(heaviside(-1.0), (0.0, false));
        assert_eq!(heaviside(0.0), (0.5, true));
        assert_eq!(heaviside(5e-10), (0.5, true));
        assert_eq!(heaviside(2e-9), (1.0, false));
    }

    #[test]
    fn gated_off_term_does_not_overflow() {
        let t = ZoneTerm {
            kind: TermKind::Surface1,
            coefficient: Complex64::new(1.0, 0.0),
            heaviside_arg: -1.0,
            phase_angle: Complex64::new(1.0, -800.0),
            sign: PhaseSign::Minus,
        };
        assert_eq!(t.value(10.0), Complex64::new(0.0, 0.0));
    }
}
