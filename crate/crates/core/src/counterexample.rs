//! Two worked examples, reproduced with every claim checked exactly.
//!
//! The first builds the cobordism of three smooth star subdivisions of a
//! smooth 3-cone, whose cones all point up, and shows that the positive-link
//! midray subdivisions produce a cone with two positive and two negative
//! circuit rays. The second is a π-nonsingular cobordism from the fan of the
//! projective plane to itself whose circuit graph is a directed 3-cycle.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cobordism::{build_cobordism, circuit_of, validate_cobordism, Cobordism, ConeClass};
use crate::collapse::{circuit_graph, is_pi_nonsingular, verdict, CircuitKey};
use crate::error::{Error, Result};
use crate::fan::{Fan, Ray, SimplicialCone};
use crate::linalg::{self, IntVector};
use crate::midray::{positive_link_centers, run_schedule, ScheduleEntry};
use crate::support::same_support;

/// A cone with its circuit partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeSummary {
    pub cone: SimplicialCone,
    pub class: ConeClass,
    pub positive: Vec<Ray>,
    pub negative: Vec<Ray>,
    pub link: Vec<Ray>,
}

impl ConeSummary {
    pub fn of(cone: &SimplicialCone) -> ConeSummary {
        let sorted = |rs: Vec<&Ray>| {
            let mut out: Vec<Ray> = rs.into_iter().cloned().collect();
            out.sort();
            out
        };
        match circuit_of(cone) {
            None => ConeSummary {
                cone: cone.clone(),
                class: ConeClass::Independent,
                positive: vec![],
                negative: vec![],
                link: cone.rays().to_vec(),
            },
            Some(cc) => ConeSummary {
                cone: cone.clone(),
                class: cc.circuit.class(),
                positive: sorted(cc.circuit.positive()),
                negative: sorted(cc.circuit.negative()),
                link: cc.link,
            },
        }
    }
}

impl fmt::Display for ConeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |rs: &[Ray]| rs.iter().map(Ray::to_string).collect::<Vec<_>>().join(" ");
        write!(
            f,
            "{} {}: POS [{}] NEG [{}] LNK [{}]",
            self.cone,
            self.class,
            list(&self.positive),
            list(&self.negative),
            list(&self.link)
        )
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::AssertionFailed(what()))
    }
}

/// Change of basis `e_i ↦ basis[i]` on the base lattice, height untouched.
struct BasisMap {
    basis: Vec<IntVector>,
}

impl BasisMap {
    fn new(basis: &[IntVector]) -> Result<BasisMap> {
        if basis.len() != 3 || basis.iter().any(|b| b.dim() != 3) {
            return Err(Error::DimensionMismatch { expected: 3, found: basis.len() });
        }
        let rows: Vec<Vec<BigInt>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        check(linalg::determinant(&rows).abs().is_one(), || "basis is not unimodular".into())?;
        Ok(BasisMap { basis: basis.to_vec() })
    }

    fn base(&self, c: [i64; 3]) -> IntVector {
        let mut out = IntVector::zeros(3);
        for (x, b) in c.iter().zip(&self.basis) {
            out = &out + &b.scale(&BigInt::from(*x));
        }
        out
    }

    fn lifted(&self, c: [i64; 4]) -> Ray {
        Ray::new(&self.base([c[0], c[1], c[2]]).extended(BigInt::from(c[3]))).expect("nonzero image")
    }

    fn base_ray(&self, c: [i64; 3]) -> Ray {
        Ray::new(&self.base(c)).expect("nonzero image")
    }

    fn cone(&self, rs: &[[i64; 4]]) -> SimplicialCone {
        SimplicialCone::new(rs.iter().map(|&c| self.lifted(c)).collect()).expect("independent image")
    }

    fn key(&self, rs: &[[i64; 4]]) -> CircuitKey {
        CircuitKey::new(rs.iter().map(|&c| self.lifted(c)).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KaruReport {
    /// Images of the standard basis vectors.
    pub basis: Vec<IntVector>,
    pub initial_census: Vec<ConeSummary>,
    pub collapsible_before: bool,
    pub order: Vec<CircuitKey>,
    pub schedule: Vec<ScheduleEntry>,
    /// The pointing-up cone with three negative rays after the first two
    /// subdivisions.
    pub intermediate_cone: ConeSummary,
    pub intermediate_negative_bases: Vec<Ray>,
    pub mixed_cone: SimplicialCone,
    pub mixed_pos: Vec<Ray>,
    pub mixed_neg: Vec<Ray>,
    pub final_census: Vec<ConeSummary>,
    pub everywhere_pointing_up: bool,
}

impl fmt::Display for KaruReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "initial cones:")?;
        for c in &self.initial_census {
            writeln!(f, "  {c}")?;
        }
        writeln!(f, "collapsible: {}", self.collapsible_before)?;
        for (i, k) in self.order.iter().enumerate() {
            writeln!(f, "  {}. {k}", i + 1)?;
        }
        writeln!(f, "midray schedule:")?;
        for e in &self.schedule {
            writeln!(f, "  {} = mid({}, {}) in {}", e.center, e.positive, e.link, e.source)?;
        }
        writeln!(f, "after the first two subdivisions:")?;
        writeln!(f, "  {}", self.intermediate_cone)?;
        writeln!(f, "after all subdivisions:")?;
        for c in &self.final_census {
            writeln!(f, "  {c}")?;
        }
        let list = |rs: &[Ray]| rs.iter().map(Ray::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "mixed cone {}: POS [{}] NEG [{}]", self.mixed_cone, list(&self.mixed_pos), list(&self.mixed_neg))?;
        writeln!(f, "every cone points up: {}", self.everywhere_pointing_up)
    }
}

pub fn karu_counterexample() -> Result<KaruReport> {
    karu_counterexample_in_basis(&[IntVector::from([1, 0, 0]), IntVector::from([0, 1, 0]), IntVector::from([0, 0, 1])])
}

/// The same construction over the cone spanned by a unimodular basis.
pub fn karu_counterexample_in_basis(basis: &[IntVector]) -> Result<KaruReport> {
    let m = BasisMap::new(basis)?;
    let delta = Fan::new(3, [SimplicialCone::new(basis.iter().map(Ray::new).collect::<Result<_>>()?)?])?;
    let centers = [m.base([1, 1, 0]), m.base([0, 1, 1]), m.base([1, 1, 1])];
    let cob = build_cobordism(&delta, &centers)?;

    let initial_census: Vec<ConeSummary> = cob.max_cones().iter().map(ConeSummary::of).collect();
    check(initial_census.len() == 4, || format!("expected 4 maximal cones, found {}", initial_census.len()))?;
    for c in &initial_census {
        check(c.class == ConeClass::Up && c.positive.len() == 1 && c.link.len() == 1, || {
            format!("cone {c} is not pointing up with a one-ray link")
        })?;
    }

    let graph = circuit_graph(&cob);
    let before = verdict(&graph);
    let (e1, e2, e3) = ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]);
    let (v12, v23, rho) = ([1, 1, 0, 1], [0, 1, 1, 2], [1, 1, 1, 3]);
    let expected_order = vec![m.key(&[e1, e2, v12]), m.key(&[e2, e3, v23]), m.key(&[v12, e3, rho])];
    check(before.collapsible && before.witness == expected_order, || {
        format!("expected collapse order {expected_order:?}, found {:?}", before.witness)
    })?;

    let schedule = positive_link_centers(&cob)?;
    let (mu1, mu2, z1, z2) = (m.lifted([2, 1, 1, 3]), m.lifted([1, 2, 2, 5]), m.lifted([1, 2, 1, 3]), m.lifted([1, 1, 1, 1]));
    let got: Vec<Ray> = schedule.iter().map(|e| e.center.clone()).collect();
    check(
        got.len() == 4
            && [&got[0], &got[1]].contains(&&mu1)
            && [&got[0], &got[1]].contains(&&mu2)
            && got[2] == z1
            && got[3] == z2,
        || format!("unexpected midray schedule {got:?}"),
    )?;

    let intermediate = run_schedule(cob.fan(), &got[..2])?;
    let three_negative = m.cone(&[v12, v23, e3, [1, 2, 2, 5]]);
    check(intermediate.has_cone(&three_negative), || format!("{three_negative} missing after two subdivisions"))?;
    let intermediate_cone = ConeSummary::of(&three_negative);
    let mut intermediate_negative_bases: Vec<Ray> =
        intermediate_cone.negative.iter().map(|r| Ray::new(&r.base())).collect::<Result<_>>()?;
    intermediate_negative_bases.sort();
    let mut expected_bases = vec![m.base_ray([1, 1, 0]), m.base_ray([0, 1, 1]), m.base_ray([0, 0, 1])];
    expected_bases.sort();
    check(
        intermediate_cone.class == ConeClass::Up
            && intermediate_cone.positive == vec![mu2.clone()]
            && intermediate_negative_bases == expected_bases,
        || format!("intermediate cone {intermediate_cone} has the wrong partition"),
    )?;

    let refined = run_schedule(&intermediate, &got[2..])?;
    let b = SimplicialCone::new(vec![mu2.clone(), m.lifted(v12), z1.clone(), z2.clone()])?;
    check(refined.has_cone(&b), || format!("{b} missing after the full schedule"))?;
    let mixed = ConeSummary::of(&b);
    let mut pos = vec![mu2, m.lifted(v12)];
    pos.sort();
    let mut neg = vec![z1, z2];
    neg.sort();
    check(mixed.class == ConeClass::Mixed && mixed.positive == pos && mixed.negative == neg, || {
        format!("cone {mixed} is not the expected mixed cone")
    })?;

    let refined = Cobordism::new(refined)?;
    check(same_support(refined.bottom(), cob.bottom())? && same_support(refined.top(), cob.top())?, || {
        "subdividing changed the support of a boundary".into()
    })?;
    let final_census: Vec<ConeSummary> = refined.max_cones().iter().map(ConeSummary::of).collect();
    let everywhere_pointing_up = final_census.iter().all(|c| matches!(c.class, ConeClass::Up | ConeClass::Independent));
    check(!everywhere_pointing_up, || "every refined cone still points up".into())?;

    Ok(KaruReport {
        basis: basis.to_vec(),
        initial_census,
        collapsible_before: before.collapsible,
        order: before.witness,
        schedule,
        intermediate_cone,
        intermediate_negative_bases,
        mixed_cone: b,
        mixed_pos: mixed.positive,
        mixed_neg: mixed.negative,
        final_census,
        everywhere_pointing_up,
    })
}

/// The fan of the projective plane: rays (1,0), (0,1), (-1,-1).
pub fn projective_plane() -> Fan {
    let r = |c: [i64; 2]| Ray::new(&IntVector::from(c)).expect("nonzero");
    let (a, b, c) = (r([1, 0]), r([0, 1]), r([-1, -1]));
    Fan::new(
        2,
        [
            SimplicialCone::new(vec![a.clone(), b.clone()]).expect("independent"),
            SimplicialCone::new(vec![b, c.clone()]).expect("independent"),
            SimplicialCone::new(vec![c, a]).expect("independent"),
        ],
    )
    .expect("valid cones")
}

/// Six cones over the projective plane with rays `(v_i, 0)` and `(v_i, 1)`.
pub fn noncollapsible_example() -> Cobordism {
    let vs = [[1, 0], [0, 1], [-1, -1]];
    let low = |i: usize| Ray::new(&IntVector::from([vs[i][0], vs[i][1], 0])).expect("nonzero");
    let high = |i: usize| Ray::new(&IntVector::from([vs[i][0], vs[i][1], 1])).expect("nonzero");
    let mut cones = Vec::new();
    for i in 0..3 {
        let j = (i + 1) % 3;
        cones.push(SimplicialCone::new(vec![low(i), high(i), low(j)]).expect("independent"));
        cones.push(SimplicialCone::new(vec![high(i), low(j), high(j)]).expect("independent"));
    }
    Cobordism::new(Fan::new(3, cones).expect("valid cones")).expect("valid cobordism")
}

#[derive(Clone, Debug, Serialize)]
pub struct NoncollapsibleReport {
    pub census: Vec<ConeSummary>,
    pub boundaries_are_projective_plane: bool,
    pub pi_nonsingular: bool,
    pub collapsible: bool,
    pub cycle: Vec<CircuitKey>,
    pub edges: Vec<(CircuitKey, CircuitKey)>,
}

impl fmt::Display for NoncollapsibleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cones:")?;
        for c in &self.census {
            writeln!(f, "  {c}")?;
        }
        writeln!(f, "both boundaries are the projective plane fan: {}", self.boundaries_are_projective_plane)?;
        writeln!(f, "pi-nonsingular: {}", self.pi_nonsingular)?;
        writeln!(f, "collapsible: {}", self.collapsible)?;
        writeln!(f, "circuit graph edges:")?;
        for (a, b) in &self.edges {
            writeln!(f, "  {a} -> {b}")?;
        }
        writeln!(f, "cycle:")?;
        for k in &self.cycle {
            writeln!(f, "  {k}")?;
        }
        Ok(())
    }
}

pub fn noncollapsible_bundle() -> Result<NoncollapsibleReport> {
    let cob = noncollapsible_example();
    let p2 = projective_plane();
    let report = validate_cobordism(cob.fan(), Some(&p2), Some(&p2));
    check(report.is_valid(), || format!("cobordism does not validate:\n{report}"))?;
    let census: Vec<ConeSummary> = cob.max_cones().iter().map(ConeSummary::of).collect();
    check(census.len() == 6 && census.iter().all(|c| c.class == ConeClass::UpDown), || {
        "expected six cones crossing a single circuit each".into()
    })?;
    let (pi_nonsingular, witness) = is_pi_nonsingular(&cob);
    check(pi_nonsingular, || format!("face {witness:?} projects to a singular cone"))?;

    let graph = circuit_graph(&cob);
    let v = verdict(&graph);
    let edges: Vec<(CircuitKey, CircuitKey)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| (graph.nodes()[a].key.clone(), graph.nodes()[b].key.clone()))
        .collect();
    let vert = |c: [i64; 2]| {
        let lo = Ray::new(&IntVector::from([c[0], c[1], 0])).expect("nonzero");
        let hi = Ray::new(&IntVector::from([c[0], c[1], 1])).expect("nonzero");
        CircuitKey::new(vec![lo, hi])
    };
    let (d1, d2, d3) = (vert([1, 0]), vert([0, 1]), vert([-1, -1]));
    let mut expected_edges = vec![(d1.clone(), d2.clone()), (d2.clone(), d3.clone()), (d3.clone(), d1.clone())];
    expected_edges.sort();
    let mut sorted_edges = edges.clone();
    sorted_edges.sort();
    check(sorted_edges == expected_edges, || format!("unexpected circuit graph edges {edges:?}"))?;
    let rotations = [vec![d1.clone(), d2.clone(), d3.clone()], vec![d2.clone(), d3.clone(), d1.clone()], vec![d3, d1, d2]];
    check(!v.collapsible && rotations.contains(&v.witness), || format!("expected the 3-cycle, found {:?}", v.witness))?;

    Ok(NoncollapsibleReport {
        census,
        boundaries_are_projective_plane: true,
        pi_nonsingular,
        collapsible: v.collapsible,
        cycle: v.witness,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn karu_report() {
        let r = karu_counterexample().unwrap();
        assert_eq!(r.initial_census.len(), 4);
        assert!(r.collapsible_before);
        assert_eq!(r.order.len(), 3);
        assert_eq!(r.mixed_pos, vec![Ray::new(&IntVector::from([1, 1, 0, 1])).unwrap(), Ray::new(&IntVector::from([1, 2, 2, 5])).unwrap()]);
        assert_eq!(r.mixed_neg, vec![Ray::new(&IntVector::from([1, 1, 1, 1])).unwrap(), Ray::new(&IntVector::from([1, 2, 1, 3])).unwrap()]);
        assert!(!r.everywhere_pointing_up);
        assert!(r.to_string().contains("Mixed"));
    }

    #[test]
    fn karu_in_another_basis() {
        let basis = [IntVector::from([1, 2, 0]), IntVector::from([0, 1, 0]), IntVector::from([3, -1, 1])];
        let r = karu_counterexample_in_basis(&basis).unwrap();
        assert_eq!(r.mixed_pos.len(), 2);
        let singular = [IntVector::from([2, 0, 0]), IntVector::from([0, 1, 0]), IntVector::from([0, 0, 1])];
        assert!(matches!(karu_counterexample_in_basis(&singular), Err(Error::AssertionFailed(_))));
    }

    #[test]
    fn noncollapsible_report() {
        let r = noncollapsible_bundle().unwrap();
        assert!(r.pi_nonsingular && !r.collapsible);
        assert_eq!(r.cycle.len(), 3);
        assert_eq!(r.edges.len(), 3);
        assert!(validate_cobordism(noncollapsible_example().fan(), Some(&projective_plane()), Some(&projective_plane())).is_valid());
    }
}
