//! Simplicial cones and fans.
//!
//! A [`Fan`] stores only its maximal cones; every subset of a simplicial
//! cone's rays spans a face, so the face lattice is implicit. Cones keep
//! their rays sorted, which makes equality, hashing and iteration order
//! canonical.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, IntVector, Rational};
use crate::report::{ValidationReport, Violation};

/// A ray through a primitive lattice vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Ray(IntVector);

impl Ray {
    /// The ray through `v`; the generator is divided by its content.
    pub fn new(v: &IntVector) -> Result<Ray> {
        Ok(Ray(linalg::primitive(v)?))
    }

    pub fn gen(&self) -> &IntVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Lifted view: the generator without its last (height) coordinate.
    pub fn base(&self) -> IntVector {
        self.0.truncated()
    }

    /// Lifted view: the last coordinate.
    pub fn height(&self) -> &BigInt {
        self.0.coords().last().expect("ray of positive dimension")
    }
}

impl From<Ray> for IntVector {
    fn from(r: Ray) -> IntVector {
        r.0
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A cone spanned by linearly independent primitive rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SimplicialCone {
    rays: Vec<Ray>,
}

impl SimplicialCone {
    pub fn new(mut rays: Vec<Ray>) -> Result<Self> {
        let Some(first) = rays.first() else {
            return Err(Error::InvalidCone("a cone needs at least one ray".into()));
        };
        let dim = first.dim();
        if let Some(r) = rays.iter().find(|r| r.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: r.dim() });
        }
        rays.sort();
        if rays.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCone("repeated ray".into()));
        }
        let gens: Vec<IntVector> = rays.iter().map(|r| r.gen().clone()).collect();
        if linalg::rank(&gens)? < gens.len() {
            return Err(Error::InvalidCone(format!(
                "generators {} are linearly dependent",
                Self { rays: rays.clone() }
            )));
        }
        Ok(Self { rays })
    }

    /// Builds a cone from generator vectors (normalized to primitive).
    pub fn from_vectors(vs: &[IntVector]) -> Result<Self> {
        Self::new(vs.iter().map(Ray::new).collect::<Result<_>>()?)
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rays[0].dim()
    }

    pub fn generators(&self) -> Vec<IntVector> {
        self.rays.iter().map(|r| r.gen().clone()).collect()
    }

    pub fn contains_ray(&self, r: &Ray) -> bool {
        self.rays.binary_search(r).is_ok()
    }

    /// True when every ray of `other` is a ray of `self`.
    pub fn has_face(&self, other: &SimplicialCone) -> bool {
        other.rays.iter().all(|r| self.contains_ray(r))
    }

    /// The face spanned by the rays selected by `mask` (bit i = ray i).
    pub(crate) fn face_by_mask(&self, mask: usize) -> Option<SimplicialCone> {
        let rays: Vec<Ray> = (0..self.rays.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.rays[i].clone())
            .collect();
        (!rays.is_empty()).then_some(SimplicialCone { rays })
    }

    /// All nonempty faces, ordered by bitmask over the sorted rays.
    pub fn faces(&self) -> impl Iterator<Item = SimplicialCone> + '_ {
        (1..1usize << self.rays.len()).filter_map(|m| self.face_by_mask(m))
    }

    /// The face spanned by the rays not equal to `r`.
    pub fn without(&self, r: &Ray) -> Option<SimplicialCone> {
        let rays: Vec<Ray> = self.rays.iter().filter(|x| *x != r).cloned().collect();
        (!rays.is_empty()).then_some(SimplicialCone { rays })
    }

    /// Sum of the primitive generators.
    pub fn barycenter(&self) -> IntVector {
        self.rays
            .iter()
            .skip(1)
            .fold(self.rays[0].gen().clone(), |acc, r| &acc + r.gen())
    }
}

impl fmt::Display for SimplicialCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

/// Generators extend to a lattice basis.
pub fn is_smooth(c: &SimplicialCone) -> bool {
    linalg::maximal_minor_gcd(&c.generators())
        .expect("cone generators are independent")
        .is_one()
}

pub fn cone_contains(c: &SimplicialCone, p: &[Rational]) -> Result<bool> {
    Ok(linalg::nonneg_combination(&c.generators(), p)?.is_some())
}

/// A simplicial fan, stored as its set of maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    dim: usize,
    cones: BTreeSet<SimplicialCone>,
}

impl Fan {
    /// Collects `cones` into a fan. Cones that are faces of other cones are
    /// dropped. Intersection properties are not checked here; see
    /// [`validate_fan`].
    pub fn new(dim: usize, cones: impl IntoIterator<Item = SimplicialCone>) -> Result<Fan> {
        let mut all = BTreeSet::new();
        for c in cones {
            if c.ambient_dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.ambient_dim() });
            }
            all.insert(c);
        }
        let cones = all
            .iter()
            .filter(|c| !all.iter().any(|o| o.len() > c.len() && o.has_face(c)))
            .cloned()
            .collect();
        Ok(Fan { dim, cones })
    }

    pub fn empty(dim: usize) -> Fan {
        Fan { dim, cones: BTreeSet::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_cones(&self) -> &BTreeSet<SimplicialCone> {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn rays(&self) -> BTreeSet<Ray> {
        self.cones.iter().flat_map(|c| c.rays().iter().cloned()).collect()
    }

    /// True when `c` is a cone of the fan (a face of some maximal cone).
    pub fn has_cone(&self, c: &SimplicialCone) -> bool {
        self.cones.iter().any(|m| m.has_face(c))
    }

    /// Whether the point lies in the support.
    pub fn contains_point(&self, p: &[Rational]) -> Result<bool> {
        for c in &self.cones {
            if cone_contains(c, p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.cones.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Whether two simplicial cones intersect exactly in the face spanned by
/// their common rays.
///
/// By the separation lemma for polyhedral cones this holds iff some linear
/// form vanishes on the common rays, is positive on the other rays of `a`
/// and negative on the other rays of `b`; that strict system is decided by
/// Fourier-Motzkin elimination.
pub fn cones_meet_properly(a: &SimplicialCone, b: &SimplicialCone) -> bool {
    let common: Vec<IntVector> = a
        .rays()
        .iter()
        .filter(|r| b.contains_ray(r))
        .map(|r| r.gen().clone())
        .collect();
    if common.len() == a.len() || common.len() == b.len() {
        return true;
    }
    let forms = linalg::nullspace_basis(&common, a.ambient_dim()).expect("same dimension");
    let row = |g: &IntVector, sign: i64| {
        IntVector::new(forms.iter().map(|k| k.dot(g) * sign).collect())
    };
    let mut rows = Vec::new();
    for r in a.rays().iter().filter(|r| !b.contains_ray(r)) {
        rows.push(row(r.gen(), 1));
    }
    for r in b.rays().iter().filter(|r| !a.contains_ray(r)) {
        rows.push(row(r.gen(), -1));
    }
    linalg::strictly_feasible(&rows)
}

/// Checks every pair of maximal cones; violations are reported in
/// canonical pair order.
pub fn validate_fan(f: &Fan) -> ValidationReport {
    let cones: Vec<&SimplicialCone> = f.cones.iter().collect();
    let mut report = ValidationReport::default();
    for (i, a) in cones.iter().enumerate() {
        for b in &cones[i + 1..] {
            if !cones_meet_properly(a, b) {
                report.push(Violation::ConeOverlap { a: (*a).clone(), b: (*b).clone() });
            }
        }
    }
    report
}

/// The cone of `f` containing `r` in its relative interior.
pub fn minimal_containing_cone(f: &Fan, r: &Ray) -> Result<SimplicialCone> {
    if r.dim() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, found: r.dim() });
    }
    let p = r.gen().to_rational();
    for c in &f.cones {
        if let Some(lambda) = linalg::nonneg_combination(&c.generators(), &p)? {
            let rays = c
                .rays()
                .iter()
                .zip(&lambda)
                .filter(|(_, l)| !l.is_zero())
                .map(|(r, _)| r.clone())
                .collect();
            return Ok(SimplicialCone { rays });
        }
    }
    Err(Error::NotInSupport(r.to_string()))
}

/// Star subdivision of `f` at `r`; the identity when `r` is already a ray.
pub fn star_subdivide(f: &Fan, r: &Ray) -> Result<Fan> {
    if r.dim() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, found: r.dim() });
    }
    if f.cones.iter().any(|c| c.contains_ray(r)) {
        return Ok(f.clone());
    }
    let center = minimal_containing_cone(f, r)?;
    let mut cones = Vec::with_capacity(f.len() + center.len());
    for sigma in &f.cones {
        if !sigma.has_face(&center) {
            cones.push(sigma.clone());
            continue;
        }
        for w in center.rays() {
            let mut rays: Vec<Ray> = sigma.rays().iter().filter(|x| *x != w).cloned().collect();
            rays.push(r.clone());
            cones.push(SimplicialCone::new(rays)?);
        }
    }
    Fan::new(f.dim, cones)
}

pub fn fans_equal(a: &Fan, b: &Fan) -> bool {
    a.dim == b.dim && a.cones == b.cones
}

/// The standard-basis cone of dimension `dim`.
pub fn orthant(dim: usize) -> SimplicialCone {
    SimplicialCone::new((0..dim).map(|i| Ray(IntVector::unit(dim, i))).collect())
        .expect("unit vectors are independent")
}
