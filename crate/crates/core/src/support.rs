//! Exact support comparison between fans.
//!
//! `|inner| ⊆ |outer|` is decided cone by cone: a maximal cone `σ` of the
//! inner fan is sliced by the simplex `λ ≥ 0, Σλ = 1` in its own barycentric
//! coordinates, and the pieces `σ ∩ τ` for the cones `τ` of the outer fan are
//! measured exactly. Pieces of a valid fan have disjoint interiors, so `σ` is
//! covered iff their volumes add up to the volume of the whole slice.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::fan::{Fan, SimplicialCone};
use crate::linalg::{self, Rational};

/// `a . x <= b`
struct HalfSpace {
    a: Vec<Rational>,
    b: Rational,
}

fn rational_rank(rows: Vec<Vec<Rational>>) -> usize {
    let mut m = rows;
    linalg::rref(&mut m).len()
}

fn rational_det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

fn affine_dim(points: &[&Vec<Rational>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs = points[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(x, y)| x - y).collect())
        .collect();
    rational_rank(diffs)
}

/// `m!` times the volume of the bounded polytope `{x in Q^m : hs}`.
fn scaled_volume(m: usize, hs: &[HalfSpace]) -> Rational {
    let feasible = |x: &[Rational]| {
        hs.iter().all(|h| {
            let lhs: Rational = h.a.iter().zip(x).map(|(a, x)| a * x).sum();
            lhs <= h.b
        })
    };
    if m == 0 {
        return if feasible(&[]) { Rational::one() } else { Rational::zero() };
    }
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    for subset in linalg::combinations(hs.len(), m) {
        let mut aug: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| {
                let mut row = hs[i].a.clone();
                row.push(hs[i].b.clone());
                row
            })
            .collect();
        let pivots = linalg::rref(&mut aug);
        if pivots.len() != m || pivots.contains(&m) {
            continue;
        }
        let x: Vec<Rational> = (0..m).map(|i| aug[i][m].clone()).collect();
        if feasible(&x) && !vertices.contains(&x) {
            vertices.push(x);
        }
    }
    if vertices.len() <= m || affine_dim(&vertices.iter().collect::<Vec<_>>()) < m {
        return Rational::zero();
    }
    let tight: Vec<Vec<bool>> = vertices
        .iter()
        .map(|x| {
            hs.iter()
                .map(|h| h.a.iter().zip(x).map(|(a, x)| a * x).sum::<Rational>() == h.b)
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..vertices.len()).collect();
    let mut total = Rational::zero();
    for simplex in triangulate(&all, m, &vertices, &tight, hs.len()) {
        let apex = &vertices[simplex[m]];
        let rows: Vec<Vec<Rational>> = simplex[..m]
            .iter()
            .map(|&v| vertices[v].iter().zip(apex).map(|(x, y)| x - y).collect())
            .collect();
        total += rational_det(&rows).abs();
    }
    total
}

/// Pulling triangulation of the face spanned by `face` (of dimension `dim`):
/// cone the lowest vertex over every facet that avoids it.
fn triangulate(
    face: &[usize],
    dim: usize,
    vertices: &[Vec<Rational>],
    tight: &[Vec<bool>],
    nconstraints: usize,
) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in 0..nconstraints {
        let g: Vec<usize> = face.iter().copied().filter(|&v| tight[v][c]).collect();
        if g.len() < face.len() && !g.is_empty() {
            let pts: Vec<&Vec<Rational>> = g.iter().map(|&v| &vertices[v]).collect();
            if affine_dim(&pts) == dim - 1 {
                facets.insert(g);
            }
        }
    }
    let mut out = Vec::new();
    for g in facets.iter().filter(|g| !g.contains(&apex)) {
        for mut s in triangulate(g, dim - 1, vertices, tight, nconstraints) {
            s.push(apex);
            out.push(s);
        }
    }
    out
}

/// Scaled volume of `σ ∩ τ` inside the barycentric slice of `σ`; the whole
/// slice measures 1.
fn piece_volume(sigma: &SimplicialCone, tau: &SimplicialCone) -> Result<Rational> {
    let k = sigma.len();
    let tau_gens = tau.generators();
    // coords[i][j]: coefficient of tau's ray j in sigma's generator i
    let mut coords = Vec::with_capacity(k);
    for g in sigma.generators() {
        match linalg::solve_in_span(&tau_gens, &g.to_rational())? {
            Some(c) => coords.push(c),
            None => return Ok(Rational::zero()),
        }
    }
    let m = k - 1;
    let mut hs = Vec::new();
    for i in 0..m {
        let mut a = vec![Rational::zero(); m];
        a[i] = -Rational::one();
        hs.push(HalfSpace { a, b: Rational::zero() });
    }
    hs.push(HalfSpace { a: vec![Rational::one(); m], b: Rational::one() });
    // mu_j = coords[k-1][j] + sum_i (coords[i][j] - coords[k-1][j]) x_i >= 0
    for j in 0..tau.len() {
        let last = &coords[m][j];
        let a = (0..m).map(|i| last - &coords[i][j]).collect();
        hs.push(HalfSpace { a, b: last.clone() });
    }
    Ok(scaled_volume(m, &hs))
}

/// Whether the support of `inner` lies inside the support of `outer`.
/// `outer` must be a valid fan.
pub fn covers(outer: &Fan, inner: &Fan) -> Result<bool> {
    if outer.dim() != inner.dim() {
        return Ok(false);
    }
    for sigma in inner.max_cones() {
        if outer.has_cone(sigma) {
            continue;
        }
        let mut total = Rational::zero();
        for tau in outer.max_cones() {
            total += piece_volume(sigma, tau)?;
        }
        if total != Rational::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether two valid fans have the same support.
pub fn same_support(a: &Fan, b: &Fan) -> Result<bool> {
    Ok(covers(a, b)? && covers(b, a)?)
}
