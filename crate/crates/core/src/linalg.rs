//! Exact integer and rational linear algebra.
//!
//! Everything here works on arbitrary-precision integers ([`BigInt`]) or
//! rationals ([`Rational`]); there is no floating point anywhere in the crate.
//! Ranks, determinants, minors and circuit relations use fraction-free
//! (Bareiss) elimination so intermediate values stay integral. Solving for
//! coordinates inside a span uses rational row reduction.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A lattice point with exact integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the absolute values of the entries (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    /// Appends one coordinate, e.g. a height.
    pub fn extended(&self, last: BigInt) -> IntVector {
        let mut coords = self.0.clone();
        coords.push(last);
        Self(coords)
    }

    /// Drops the last coordinate.
    pub fn truncated(&self) -> IntVector {
        Self(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|x| Rational::from_integer(x.clone())).collect()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn checked_add(&self, other: &IntVector) -> Result<IntVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(self + other)
    }
}

impl From<&[i64]> for IntVector {
    fn from(c: &[i64]) -> Self {
        Self(c.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(c: Vec<i64>) -> Self {
        Self::from(c.as_slice())
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(c: [i64; N]) -> Self {
        Self::from(c.as_slice())
    }
}

impl Add for &IntVector {
    type Output = IntVector;

    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.dim(), rhs.dim(), "adding vectors of different dimension");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;

    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.dim(), rhs.dim(), "subtracting vectors of different dimension");
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;

    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

// Documents carry plain JSON integers.
impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords = self
            .to_i64s()
            .ok_or_else(|| serde::ser::Error::custom(format!("coordinate of {self} exceeds 64 bits")))?;
        coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Vec::<i64>::deserialize(d)?.into())
    }
}

/// An integer linear dependency `sum coeffs[i] * v[i] = 0`, scaled so the
/// entries have gcd 1. The global sign is left to the caller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntRelation(Vec<BigInt>);

impl IntRelation {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn negated(&self) -> IntRelation {
        IntRelation(self.0.iter().map(|x| -x).collect())
    }

    /// Pairs the relation with one value per input vector.
    pub fn pairing(&self, values: &[BigInt]) -> BigInt {
        self.0.iter().zip(values).map(|(a, b)| a * b).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }
}

impl fmt::Display for IntRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        IntVector(self.0.clone()).fmt(f)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn common_dim(vs: &[IntVector]) -> Result<Option<usize>> {
    let Some(first) = vs.first() else {
        return Ok(None);
    };
    for v in vs {
        check_dim(first.dim(), v.dim())?;
    }
    Ok(Some(first.dim()))
}

/// Divides `v` by the gcd of its entries.
pub fn primitive(v: &IntVector) -> Result<IntVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    Ok(IntVector(v.0.iter().map(|x| x / &g).collect()))
}

/// Fraction-free row echelon form. Returns the reduced matrix, the pivot
/// columns and the parity of the row swaps (true = odd).
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>, bool) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            odd = !odd;
        }
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots, odd)
}

fn rows_of(vs: &[IntVector]) -> Vec<Vec<BigInt>> {
    vs.iter().map(|v| v.0.clone()).collect()
}

/// Exact rank over the rationals.
pub fn rank(vs: &[IntVector]) -> Result<usize> {
    if common_dim(vs)?.is_none() {
        return Ok(0);
    }
    Ok(bareiss(rows_of(vs)).1.len())
}

/// Determinant of a square integer matrix given by rows.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let (m, pivots, odd) = bareiss(rows.to_vec());
    if pivots.len() < n {
        return BigInt::zero();
    }
    let d = m[n - 1][n - 1].clone();
    if odd {
        -d
    } else {
        d
    }
}

/// The unique (up to sign) integer relation among `vs`, or `None` when they
/// are independent.
pub fn kernel_relation(vs: &[IntVector]) -> Result<Option<IntRelation>> {
    let Some(_) = common_dim(vs)? else {
        return Ok(None);
    };
    let k = vs.len();
    let (_, pivots, _) = bareiss(rows_of(vs));
    let r = pivots.len();
    if r == k {
        return Ok(None);
    }
    if r + 1 < k {
        return Err(Error::NullityTooLarge(k - r));
    }
    // Pivot columns of the k x d matrix are k-1 independent coordinates; the
    // relation is the vector of signed cofactors of that (k-1) x k block.
    let block: Vec<Vec<BigInt>> = pivots
        .iter()
        .map(|&i| vs.iter().map(|v| v.0[i].clone()).collect())
        .collect();
    let mut coeffs = Vec::with_capacity(k);
    for j in 0..k {
        let minor: Vec<Vec<BigInt>> = block
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let d = determinant(&minor);
        coeffs.push(if j % 2 == 0 { d } else { -d });
    }
    let rel = primitive(&IntVector(coeffs)).expect("cofactor vector of a rank-deficient block is nonzero");
    Ok(Some(IntRelation(rel.0)))
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// gcd of all k x k minors of the k x d matrix whose rows are `vs`.
///
/// The vectors extend to a lattice basis exactly when this is 1.
pub fn maximal_minor_gcd(vs: &[IntVector]) -> Result<BigInt> {
    let Some(d) = common_dim(vs)? else {
        return Ok(BigInt::one());
    };
    let k = vs.len();
    if k > d || rank(vs)? < k {
        return Err(Error::DependentInput);
    }
    let mut g = BigInt::zero();
    for cols in combinations(d, k) {
        let minor: Vec<Vec<BigInt>> = vs
            .iter()
            .map(|v| cols.iter().map(|&c| v.0[c].clone()).collect())
            .collect();
        g = g.gcd(&determinant(&minor));
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

/// Reduced row echelon form over the rationals; returns pivot columns.
pub(crate) fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Coordinates of `p` with respect to the independent vectors `cols`, or
/// `None` when `p` is outside their span. Signs are unconstrained.
pub fn solve_in_span(cols: &[IntVector], p: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let k = cols.len();
    let n = p.len();
    for c in cols {
        check_dim(n, c.dim())?;
    }
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols
                .iter()
                .map(|c| Rational::from_integer(c.0[i].clone()))
                .collect();
            row.push(p[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return Ok(None);
    }
    if pivots.len() < k {
        return Err(Error::DependentInput);
    }
    Ok(Some((0..k).map(|i| m[i][k].clone()).collect()))
}

/// The coefficients `lambda >= 0` with `p = sum lambda_i rays_i`, if any.
pub fn nonneg_combination(rays: &[IntVector], p: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let coeffs = solve_in_span(rays, p)?;
    Ok(coeffs.filter(|c| c.iter().all(|x| !x.is_negative())))
}

/// An integer basis of `{x : r . x = 0 for every r in rows}` in dimension `dim`.
pub fn nullspace_basis(rows: &[IntVector], dim: usize) -> Result<Vec<IntVector>> {
    for r in rows {
        check_dim(dim, r.dim())?;
    }
    let mut m: Vec<Vec<Rational>> = rows.iter().map(IntVector::to_rational).collect();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Rational::zero(); dim];
        x[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[row][free].clone();
        }
        let denom = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints = IntVector(x.iter().map(|q| (q * &denom).to_integer()).collect());
        basis.push(primitive(&ints)?);
    }
    Ok(basis)
}

/// Decides whether some `y` satisfies `a . y > 0` for every row `a`
/// (Fourier-Motzkin elimination on a homogeneous strict system).
///
/// By Gordan's alternative this fails exactly when a nontrivial nonnegative
/// combination of the rows vanishes.
pub fn strictly_feasible(rows: &[IntVector]) -> bool {
    let Some(dim) = rows.first().map(IntVector::dim) else {
        return true;
    };
    let mut current: Vec<IntVector> = Vec::new();
    for r in rows {
        if r.is_zero() {
            return false;
        }
        current.push(primitive(r).expect("nonzero"));
    }
    current.sort();
    current.dedup();
    for var in (0..dim).rev() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in current {
            match r.0[var].sign() {
                num_bigint::Sign::Plus => pos.push(r),
                num_bigint::Sign::Minus => neg.push(r),
                num_bigint::Sign::NoSign => rest.push(r),
            }
        }
        for p in &pos {
            for q in &neg {
                let combined = &p.scale(&-&q.0[var]) + &q.scale(&p.0[var]);
                if combined.is_zero() {
                    return false;
                }
                rest.push(primitive(&combined).expect("nonzero"));
            }
        }
        rest.sort();
        rest.dedup();
        current = rest;
    }
    current.is_empty()
}
