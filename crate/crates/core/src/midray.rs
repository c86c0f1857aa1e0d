//! Midray subdivisions of a cobordism: centers on the 2-faces spanned by the
//! positive ray and a link ray of each pointing-up cone, and execution of an
//! explicit schedule of such centers.

use num_traits::Signed;
use serde::Serialize;

use crate::cobordism::{circuit_of, Cobordism, ConeClass, LiftedRay};
use crate::collapse::{circuit_graph, verdict, CircuitKey};
use crate::error::{Error, Result};
use crate::fan::{self, Fan, SimplicialCone};
use crate::linalg;

/// `primitive(a + b)` for two distinct rays.
pub fn midray(a: &LiftedRay, b: &LiftedRay) -> Result<LiftedRay> {
    if a == b {
        return Err(Error::EqualRays);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if linalg::rank(&[a.gen().clone(), b.gen().clone()])? < 2 {
        return Err(Error::DependentInput);
    }
    LiftedRay::new(&(a.gen() + b.gen()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleEntry {
    pub source: SimplicialCone,
    pub circuit: CircuitKey,
    pub positive: LiftedRay,
    pub link: LiftedRay,
    pub center: LiftedRay,
}

/// One entry per (pointing-up cone, link ray), topmost circuits first.
///
/// Circuits are visited in reverse collapse order, cones within a circuit in
/// canonical order and link rays in canonical order. π-independent cones
/// carry no circuit and are skipped.
pub fn positive_link_centers(cob: &Cobordism) -> Result<Vec<ScheduleEntry>> {
    let graph = circuit_graph(cob);
    if let Some(bad) = graph.nodes().iter().find(|n| n.class() != ConeClass::Up) {
        return Err(Error::NotAllPointingUp(format!("circuit {} is {}", bad.key, bad.class())));
    }
    let order = verdict(&graph);
    if !order.collapsible {
        return Err(Error::NotCollapsible(order.witness.len()));
    }
    let mut entries = Vec::new();
    for key in order.witness.iter().rev() {
        let node = graph.node(key).expect("key from the graph");
        let mut cones = node.cones.clone();
        cones.sort();
        for cone in cones {
            let cc = circuit_of(&cone).expect("cone of a circuit node");
            let positive = cc.circuit.positive()[0].clone();
            for link in &cc.link {
                let center = midray(&positive, link)?;
                let two_face = SimplicialCone::new(vec![positive.clone(), link.clone()])?;
                let coords = linalg::nonneg_combination(&two_face.generators(), &center.gen().to_rational())?;
                assert!(
                    coords.is_some_and(|c| c.iter().all(Signed::is_positive)),
                    "midray lies inside its 2-face"
                );
                entries.push(ScheduleEntry {
                    source: cone.clone(),
                    circuit: key.clone(),
                    positive: positive.clone(),
                    link: link.clone(),
                    center,
                });
            }
        }
    }
    Ok(entries)
}

/// Star subdivides the fan at each center in turn, checking validity after
/// every step.
pub fn run_schedule(fan: &Fan, centers: &[LiftedRay]) -> Result<Fan> {
    let mut current = fan.clone();
    for c in centers {
        current = fan::star_subdivide(&current, c)?;
        let report = fan::validate_fan(&current);
        if !report.is_valid() {
            return Err(Error::BrokenFan(report));
        }
    }
    Ok(current)
}
