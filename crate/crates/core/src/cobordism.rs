//! Fans in `N ⊕ Z`: projection, circuits, boundaries and the construction of
//! a cobordism from a sequence of star subdivisions.
//!
//! A lifted ray `(u, h)` has base `u ∈ N` and height `h`. A simplicial lifted
//! cone whose projected generators are dependent carries a unique circuit:
//! the minimal dependent subset with its integer relation `Σ r_i u_i = 0`,
//! signed so that `Σ r_i h_i > 0`. Rays with `r_i > 0` are positive, rays
//! with `r_i < 0` negative, and the remaining rays of the cone form its link.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{self, Fan, Ray, SimplicialCone};
use crate::linalg::{self, IntRelation, IntVector, Rational};
use crate::report::{Side, ValidationReport, Violation};
use crate::support;

/// A ray of `N ⊕ Z`; see [`Ray::base`] and [`Ray::height`].
pub type LiftedRay = Ray;

/// The lifted ray through `(base, height)`.
pub fn lift(base: &IntVector, height: BigInt) -> Result<LiftedRay> {
    Ray::new(&base.extended(height))
}

/// The minimally dependent rays of a cone with their normalized relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circuit {
    rays: Vec<LiftedRay>,
    coeffs: Vec<BigInt>,
}

impl Circuit {
    /// Circuit rays in canonical order.
    pub fn rays(&self) -> &[LiftedRay] {
        &self.rays
    }

    /// Relation coefficients aligned with [`Circuit::rays`].
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn positive(&self) -> Vec<&LiftedRay> {
        self.rays.iter().zip(&self.coeffs).filter(|(_, c)| c.is_positive()).map(|(r, _)| r).collect()
    }

    pub fn negative(&self) -> Vec<&LiftedRay> {
        self.rays.iter().zip(&self.coeffs).filter(|(_, c)| c.is_negative()).map(|(r, _)| r).collect()
    }

    pub fn class(&self) -> ConeClass {
        match (self.positive().len(), self.negative().len()) {
            (0, _) | (_, 0) => ConeClass::Degenerate,
            (1, 1) => ConeClass::UpDown,
            (1, _) => ConeClass::Up,
            (_, 1) => ConeClass::Down,
            _ => ConeClass::Mixed,
        }
    }

    /// Largest height among the circuit rays.
    pub fn top_height(&self) -> BigInt {
        self.rays.iter().map(|r| r.height().clone()).max().unwrap_or_default()
    }
}

/// The circuit of one cone together with the cone's link rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCircuit {
    pub circuit: Circuit,
    pub link: Vec<LiftedRay>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConeClass {
    Independent,
    Up,
    Down,
    UpDown,
    Mixed,
    Degenerate,
}

impl fmt::Display for ConeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Projected generators (not re-primitivized) and whether they are independent.
pub fn project(c: &SimplicialCone) -> (Vec<IntVector>, bool) {
    let bases: Vec<IntVector> = c.rays().iter().map(Ray::base).collect();
    let independent = linalg::rank(&bases).expect("common dimension") == bases.len();
    (bases, independent)
}

/// The projected cone with primitive generators; `c` must be π-independent.
pub fn project_cone(c: &SimplicialCone) -> Result<SimplicialCone> {
    let rays = c.rays().iter().map(|r| Ray::new(&r.base())).collect::<Result<Vec<_>>>()?;
    SimplicialCone::new(rays)
}

pub fn circuit_of(c: &SimplicialCone) -> Option<ConeCircuit> {
    let (bases, independent) = project(c);
    if independent {
        return None;
    }
    let relation: IntRelation = linalg::kernel_relation(&bases)
        .expect("projection of a simplicial lifted cone has nullity at most 1")
        .expect("projections are dependent");
    let heights: Vec<BigInt> = c.rays().iter().map(|r| r.height().clone()).collect();
    let pairing = relation.pairing(&heights);
    assert!(
        !pairing.is_zero(),
        "relation of {c} is orthogonal to the heights, so the lifted generators are dependent"
    );
    let relation = if pairing.is_negative() { relation.negated() } else { relation };
    let mut rays = Vec::new();
    let mut coeffs = Vec::new();
    let mut link = Vec::new();
    for (r, k) in c.rays().iter().zip(relation.coeffs()) {
        if k.is_zero() {
            link.push(r.clone());
        } else {
            rays.push(r.clone());
            coeffs.push(k.clone());
        }
    }
    Some(ConeCircuit { circuit: Circuit { rays, coeffs }, link })
}

pub fn classify(c: &SimplicialCone) -> ConeClass {
    circuit_of(c).map_or(ConeClass::Independent, |cc| cc.circuit.class())
}

fn is_pi_independent(c: &SimplicialCone) -> bool {
    project(c).1
}

/// Faces `τ` (maximal among those found) for which `b ∓ t·e_last` leaves the
/// support for small `t > 0`, where `b` is the sum of `τ`'s generators.
///
/// In a valid fan the cones containing `b` are exactly the cones having `τ`
/// as a face, and there `b` has coordinate 1 on the rays of `τ` and 0
/// elsewhere. Staying inside such a `σ` for small `t` therefore only needs
/// `e_last ∈ span σ` with the right sign on the rays of `σ` outside `τ`.
fn exit_faces(fan: &Fan, side: Side, require_independent: bool) -> Vec<SimplicialCone> {
    let n = fan.dim();
    let up = IntVector::unit(n, n - 1).to_rational();
    let cones: Vec<(&SimplicialCone, Option<Vec<Rational>>)> = fan
        .max_cones()
        .iter()
        .map(|s| (s, linalg::solve_in_span(&s.generators(), &up).expect("independent generators")))
        .collect();
    let stays_inside = |sigma: &SimplicialCone, coords: &Option<Vec<Rational>>, tau: &SimplicialCone| {
        let Some(coords) = coords else {
            return false;
        };
        sigma.rays().iter().zip(coords).all(|(r, l)| {
            tau.contains_ray(r)
                || match side {
                    Side::Lower => !l.is_positive(),
                    Side::Upper => !l.is_negative(),
                }
        })
    };
    let faces: BTreeSet<SimplicialCone> = fan.max_cones().iter().flat_map(|s| s.faces()).collect();
    let exits: Vec<SimplicialCone> = faces
        .into_iter()
        .filter(|tau| !require_independent || is_pi_independent(tau))
        .filter(|tau| {
            !cones
                .iter()
                .filter(|(s, _)| s.has_face(tau))
                .any(|(s, coords)| stays_inside(s, coords, tau))
        })
        .collect();
    exits
        .iter()
        .filter(|t| !exits.iter().any(|o| o.len() > t.len() && o.has_face(t)))
        .cloned()
        .collect()
}

/// Maximal π-independent faces on the given side of the cobordism fan.
pub fn boundary(fan: &Fan, side: Side) -> Result<Vec<SimplicialCone>> {
    let report = fan::validate_fan(fan);
    if !report.is_valid() {
        return Err(Error::InvalidFan(report));
    }
    Ok(exit_faces(fan, side, true))
}

/// Projects boundary faces into the base lattice.
pub fn project_faces(faces: &[SimplicialCone], base_dim: usize) -> Result<Fan> {
    Fan::new(base_dim, faces.iter().map(project_cone).collect::<Result<Vec<_>>>()?)
}

struct Checked {
    report: ValidationReport,
    bottom: Fan,
    top: Fan,
}

fn check(fan: &Fan, expected_bottom: Option<&Fan>, expected_top: Option<&Fan>) -> Checked {
    let base_dim = fan.dim().saturating_sub(1);
    let mut report = fan::validate_fan(fan);
    for r in fan.rays() {
        if r.base().is_zero() {
            report.push(Violation::VerticalRay { ray: r });
        }
    }
    if !report.is_valid() {
        return Checked { report, bottom: Fan::empty(base_dim), top: Fan::empty(base_dim) };
    }
    let mut projected = Vec::new();
    for side in [Side::Lower, Side::Upper] {
        for face in exit_faces(fan, side, false) {
            if !is_pi_independent(&face) {
                report.push(Violation::BoundaryNotInjective { side, face });
            }
        }
        let faces = exit_faces(fan, side, true);
        let proj = project_faces(&faces, base_dim).expect("π-independent faces project to cones");
        for v in fan::validate_fan(&proj).violations {
            if let Violation::ConeOverlap { a, b } = v {
                report.push(Violation::BoundaryOverlap { side, a, b });
            }
        }
        projected.push(proj);
    }
    let top = projected.pop().expect("two sides");
    let bottom = projected.pop().expect("two sides");
    if report.is_valid() && !support::same_support(&bottom, &top).expect("matching dimensions") {
        report.push(Violation::SupportMismatch);
    }
    if expected_bottom.is_some_and(|e| !fan::fans_equal(e, &bottom)) {
        report.push(Violation::ExpectedMismatch { side: Side::Lower });
    }
    if expected_top.is_some_and(|e| !fan::fans_equal(e, &top)) {
        report.push(Violation::ExpectedMismatch { side: Side::Upper });
    }
    for c in fan.max_cones() {
        if classify(c) == ConeClass::Degenerate {
            report.push(Violation::DegenerateCircuit { cone: c.clone() });
        }
    }
    Checked { report, bottom, top }
}

pub fn validate_cobordism(fan: &Fan, expected_bottom: Option<&Fan>, expected_top: Option<&Fan>) -> ValidationReport {
    check(fan, expected_bottom, expected_top).report
}

/// A validated simplicial cobordism with its projected boundary fans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cobordism {
    fan: Fan,
    bottom: Fan,
    top: Fan,
}

impl Cobordism {
    pub fn new(fan: Fan) -> Result<Cobordism> {
        if fan.dim() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: fan.dim() });
        }
        let Checked { report, bottom, top } = check(&fan, None, None);
        if !report.is_valid() {
            return Err(Error::InvalidCobordism(report));
        }
        Ok(Cobordism { fan, bottom, top })
    }

    pub fn base_dim(&self) -> usize {
        self.fan.dim() - 1
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Projection of the lower boundary.
    pub fn bottom(&self) -> &Fan {
        &self.bottom
    }

    /// Projection of the upper boundary.
    pub fn top(&self) -> &Fan {
        &self.top
    }

    pub fn max_cones(&self) -> &BTreeSet<SimplicialCone> {
        self.fan.max_cones()
    }

    /// Every maximal cone with its circuit (if π-dependent), canonical order.
    pub fn circuits(&self) -> Vec<(&SimplicialCone, Option<ConeCircuit>)> {
        self.fan.max_cones().iter().map(|c| (c, circuit_of(c))).collect()
    }
}

/// Builds the cobordism of a sequence of star subdivisions of `delta`.
///
/// Rays of `delta` sit at level 0 and the `t`-th center at level `t`, raised
/// when needed so that it lies strictly above the lifted face it subdivides:
/// the level is `max(previous + 1, floor(Σ λ_i h_i) + 1)` where
/// `w = Σ λ_i u_i` over the minimal face containing the center. Without the
/// raise a center could land on (or below) that face and the new cone would
/// be degenerate.
pub fn build_cobordism(delta: &Fan, centers: &[IntVector]) -> Result<Cobordism> {
    build_cobordism_scaled(delta, centers, &BigInt::from(1))
}

/// As [`build_cobordism`] with every height equal to its level times `step`.
pub fn build_cobordism_scaled(delta: &Fan, centers: &[IntVector], step: &BigInt) -> Result<Cobordism> {
    assert!(step.is_positive(), "height step must be positive");
    let report = fan::validate_fan(delta);
    if !report.is_valid() {
        return Err(Error::InvalidFan(report));
    }
    let d = delta.dim();
    let mut levels: BTreeMap<Ray, BigInt> = delta.rays().into_iter().map(|r| (r, BigInt::zero())).collect();
    let mut previous = BigInt::zero();
    let lift_cone = |levels: &BTreeMap<Ray, BigInt>, c: &SimplicialCone, extra: Option<LiftedRay>| {
        let mut rays: Vec<LiftedRay> = c
            .rays()
            .iter()
            .map(|r| lift(r.gen(), step * &levels[r]))
            .collect::<Result<_>>()?;
        rays.extend(extra);
        SimplicialCone::new(rays)
    };
    let mut running = delta.clone();
    let mut upstairs = Vec::new();
    for center in centers {
        if center.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: center.dim() });
        }
        let w = Ray::new(center)?;
        if running.rays().contains(&w) {
            return Err(Error::CenterAlreadyRay(w.into()));
        }
        let tau = fan::minimal_containing_cone(&running, &w).map_err(|e| match e {
            Error::NotInSupport(_) => Error::CenterNotInSupport(w.gen().clone()),
            other => other,
        })?;
        let lambda = linalg::nonneg_combination(&tau.generators(), &w.gen().to_rational())?
            .expect("center lies in its minimal cone");
        let below: Rational = tau.rays().iter().zip(&lambda).map(|(r, l)| l * Rational::from_integer(levels[r].clone())).sum();
        let level: BigInt = (&previous + BigInt::one()).max(below.floor().to_integer() + BigInt::one());
        previous = level.clone();
        let lifted_center = lift(w.gen(), step * &level)?;
        for sigma in running.max_cones().iter().filter(|s| s.has_face(&tau)) {
            upstairs.push(lift_cone(&levels, sigma, Some(lifted_center.clone()))?);
        }
        running = fan::star_subdivide(&running, &w)?;
        levels.insert(w, level);
    }
    for c in running.max_cones() {
        upstairs.push(lift_cone(&levels, c, None)?);
    }
    let fan = Fan::new(d + 1, upstairs)?;
    let Checked { report, bottom, top } = check(&fan, Some(delta), Some(&running));
    if !report.is_valid() {
        return Err(Error::InvalidCobordism(report));
    }
    Ok(Cobordism { fan, bottom, top })
}

/// The lifted ray with its height multiplied by `factor`.
pub fn scale_height(r: &LiftedRay, factor: &BigInt) -> Result<LiftedRay> {
    lift(&r.base(), r.height() * factor)
}

/// Applies [`scale_height`] to every ray of the cobordism.
pub fn rescale_heights(cob: &Cobordism, factor: &BigInt) -> Result<Cobordism> {
    assert!(factor.is_positive(), "height factor must be positive");
    let cones = cob
        .max_cones()
        .iter()
        .map(|c| {
            let rays = c.rays().iter().map(|r| scale_height(r, factor)).collect::<Result<Vec<_>>>()?;
            SimplicialCone::new(rays)
        })
        .collect::<Result<Vec<_>>>()?;
    Cobordism::new(Fan::new(cob.fan.dim(), cones)?)
}
