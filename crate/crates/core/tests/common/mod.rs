#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use toricfan::fan::{self, Fan, Ray, SimplicialCone};
use toricfan::linalg::IntVector;

pub type Matrix = [[i64; 3]; 3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Product of a few random elementary matrices and a signed permutation.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> Matrix {
    let mut m: Matrix = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut perm = [0usize, 1, 2];
    perm.shuffle(rng);
    let mut p = [[0i64; 3]; 3];
    for (i, &j) in perm.iter().enumerate() {
        p[i][j] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    m = mul(&m, &p);
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..3);
        let mut j = rng.gen_range(0..3);
        while j == i {
            j = rng.gen_range(0..3);
        }
        let mut e: Matrix = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        e[i][j] = rng.gen_range(-2..=2);
        m = mul(&m, &e);
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut c = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn apply(m: &Matrix, v: &IntVector) -> IntVector {
    let x = v.to_i64s().expect("small coordinates");
    IntVector::from((0..3).map(|i| (0..3).map(|k| m[i][k] * x[k]).sum()).collect::<Vec<i64>>())
}

/// Columns of `m`, the images of the standard basis.
pub fn columns(m: &Matrix) -> Vec<IntVector> {
    (0..3).map(|j| IntVector::from([m[0][j], m[1][j], m[2][j]])).collect()
}

fn fan_of(rays: &[[i64; 3]], cones: &[&[usize]]) -> Fan {
    let rs: Vec<Ray> = rays.iter().map(|&r| Ray::new(&IntVector::from(r)).unwrap()).collect();
    Fan::new(3, cones.iter().map(|c| SimplicialCone::new(c.iter().map(|&i| rs[i].clone()).collect()).unwrap())).unwrap()
}

/// Smooth seed fans in dimension 3.
pub fn seeds() -> Vec<(&'static str, Fan)> {
    let octant: Vec<Vec<usize>> = (0..8)
        .map(|s: usize| (0..3).map(|i| 2 * i + (s >> i & 1)).collect())
        .collect();
    let octant_refs: Vec<&[usize]> = octant.iter().map(Vec::as_slice).collect();
    vec![
        ("orthant", fan_of(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]], &[&[0, 1, 2]])),
        (
            "projective space",
            fan_of(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]], &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]),
        ),
        (
            "product of lines",
            fan_of(&[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], &octant_refs),
        ),
        (
            "plane times ray",
            fan_of(&[[1, 0, 0], [0, 1, 0], [-1, -1, 0], [0, 0, 1]], &[&[0, 1, 3], &[1, 2, 3], &[2, 0, 3]]),
        ),
    ]
}

pub fn conjugate(f: &Fan, m: &Matrix) -> Fan {
    Fan::new(
        3,
        f.max_cones().iter().map(|c| {
            SimplicialCone::new(c.rays().iter().map(|r| Ray::new(&apply(m, r.gen())).unwrap()).collect()).unwrap()
        }),
    )
    .unwrap()
}

/// Barycenter of a random face of dimension at least 2 of the running fan.
pub fn random_barycenter(rng: &mut ChaCha8Rng, f: &Fan) -> IntVector {
    let cones: Vec<&SimplicialCone> = f.max_cones().iter().collect();
    let cone = cones[rng.gen_range(0..cones.len())];
    let faces: Vec<SimplicialCone> = cone.faces().filter(|c| c.len() >= 2).collect();
    faces[rng.gen_range(0..faces.len())].barycenter()
}

pub struct Case {
    pub label: String,
    pub delta: Fan,
    pub centers: Vec<IntVector>,
}

/// A conjugated seed fan and 1 to 4 barycentric centers.
pub fn random_case(rng: &mut ChaCha8Rng, index: usize) -> Case {
    let all = seeds();
    let (name, seed) = &all[index % all.len()];
    let m = random_unimodular(rng);
    let delta = conjugate(seed, &m);
    let mut running = delta.clone();
    let mut centers = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let c = random_barycenter(rng, &running);
        running = fan::star_subdivide(&running, &Ray::new(&c).unwrap()).unwrap();
        centers.push(c);
    }
    Case { label: format!("{name} #{index}"), delta, centers }
}

pub fn corpus(seed: u64, n: usize) -> Vec<Case> {
    let mut r = rng(seed);
    (0..n).map(|i| random_case(&mut r, i)).collect()
}

/// Whether the lattice generated by the independent `vs` is saturated in
/// `Z^d`, decided by listing the integer points of the half-open
/// parallelepiped they span.
pub fn saturated_by_enumeration(vs: &[Vec<i64>]) -> bool {
    let d = vs[0].len();
    // the parallelepiped lies in the box spanned coordinatewise by its corners
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    for v in vs {
        for i in 0..d {
            if v[i] < 0 {
                lo[i] += v[i];
            } else {
                hi[i] += v[i];
            }
        }
    }
    let mut point = lo.clone();
    loop {
        if point.iter().any(|&x| x != 0) && in_half_open_parallelepiped(vs, &point) {
            return false;
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == d {
                return true;
            }
            if point[i] < hi[i] {
                point[i] += 1;
                break;
            }
            point[i] = lo[i];
            i += 1;
        }
    }
}

fn in_half_open_parallelepiped(vs: &[Vec<i64>], p: &[i64]) -> bool {
    solve_exact(vs, p).is_some_and(|lambda| lambda.iter().all(|&(num, den)| num >= 0 && num < den))
}

/// Whether every standard basis vector is an integer combination of `vs`
/// (`vs` square and independent).
pub fn spans_lattice_by_solving(vs: &[Vec<i64>]) -> bool {
    let d = vs[0].len();
    (0..d).all(|j| {
        let mut e = vec![0i64; d];
        e[j] = 1;
        solve_exact(vs, &e).is_some_and(|lambda| lambda.iter().all(|&(num, den)| num % den == 0))
    })
}

/// The unique `λ` with `Σ λ_j v_j = p` as fractions `(num, den)` with
/// `den > 0`, by fraction-free elimination over i128; `None` when `p` is
/// outside the span or the `v_j` are dependent.
pub fn solve_exact(vs: &[Vec<i64>], p: &[i64]) -> Option<Vec<(i128, i128)>> {
    let d = p.len();
    let k = vs.len();
    let mut m: Vec<Vec<i128>> = (0..d)
        .map(|i| {
            let mut row: Vec<i128> = vs.iter().map(|v| v[i] as i128).collect();
            row.push(p[i] as i128);
            row
        })
        .collect();
    for c in 0..k {
        let pr = (c..d).find(|&i| m[i][c] != 0)?;
        m.swap(c, pr);
        for i in 0..d {
            if i != c && m[i][c] != 0 {
                let (a, b) = (m[c][c], m[i][c]);
                for j in 0..=k {
                    m[i][j] = m[i][j] * a - m[c][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    for x in m[i].iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
    }
    if (k..d).any(|i| m[i][k] != 0) {
        return None;
    }
    Some(
        (0..k)
            .map(|c| if m[c][c] < 0 { (-m[c][k], -m[c][c]) } else { (m[c][k], m[c][c]) })
            .collect(),
    )
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
