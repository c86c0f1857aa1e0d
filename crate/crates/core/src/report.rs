use std::fmt;

use serde::Serialize;

use crate::fan::{Ray, SimplicialCone};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

/// One failed check. Fan violations list the offending cone pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two cones whose intersection is not their common face.
    ConeOverlap { a: SimplicialCone, b: SimplicialCone },
    VerticalRay { ray: Ray },
    /// A boundary face whose projection is not injective.
    BoundaryNotInjective { side: Side, face: SimplicialCone },
    /// The projected boundary fan itself fails validation.
    BoundaryOverlap { side: Side, a: SimplicialCone, b: SimplicialCone },
    SupportMismatch,
    ExpectedMismatch { side: Side },
    DegenerateCircuit { cone: SimplicialCone },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ConeOverlap { a, b } => write!(f, "cones {a} and {b} do not meet in a common face"),
            Violation::VerticalRay { ray } => write!(f, "ray {ray} projects to zero"),
            Violation::BoundaryNotInjective { side, face } => {
                write!(f, "projection is not injective on {side} boundary face {face}")
            }
            Violation::BoundaryOverlap { side, a, b } => {
                write!(f, "{side} boundary fan: cones {a} and {b} do not meet in a common face")
            }
            Violation::SupportMismatch => write!(f, "lower and upper boundary fans have different supports"),
            Violation::ExpectedMismatch { side } => write!(f, "{side} boundary fan differs from the expected fan"),
            Violation::DegenerateCircuit { cone } => write!(f, "cone {cone} has a one-signed circuit"),
        }
    }
}

/// The outcome of a validation pass; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "- {v}")?;
        }
        Ok(())
    }
}
