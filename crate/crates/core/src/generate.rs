//! Seeded, dependency-free generators for test corpora: random lattice
//! polytopes, random unimodular maps, and random Delzant polytopes built by
//! corner chops of smooth seeds. Deterministic across platforms.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::matrix::{IntMat, IntVec};
use crate::polytope::{poly_from_int_points, standard_simplex, unit_cube, Polytope, UnimodularMap};
use crate::rat::{rat, rat_int, Rat, RatVec};

/// splitmix64; tiny and reproducible.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed.wrapping_add(0x9e3779b97f4a7c15) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// uniform in `0..n`
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// Hull of `m` random integer points in `[-bound, bound]^d`, retried until
/// full-dimensional.
pub fn random_lattice_polytope(rng: &mut Rng, d: usize, m: usize, bound: i64) -> Polytope {
    loop {
        let pts: Vec<Vec<i64>> = (0..m.max(d + 1))
            .map(|_| (0..d).map(|_| rng.range_i64(-bound, bound)).collect())
            .collect();
        if let Ok(p) = poly_from_int_points(&pts) {
            return p;
        }
    }
}

/// A random full-dimensional lattice simplex.
pub fn random_lattice_simplex(rng: &mut Rng, d: usize, bound: i64) -> Polytope {
    loop {
        let pts: Vec<Vec<i64>> = (0..=d)
            .map(|_| (0..d).map(|_| rng.range_i64(-bound, bound)).collect())
            .collect();
        if let Ok(p) = poly_from_int_points(&pts) {
            if p.vertices().len() == d + 1 {
                return p;
            }
        }
    }
}

/// Product of a few elementary operations: shears with small coefficients,
/// swaps, and sign flips. Entries stay small.
pub fn random_unimodular_matrix(rng: &mut Rng, d: usize, ops: usize) -> IntMat {
    let mut m = IntMat::identity(d);
    for _ in 0..ops {
        match rng.below(3) {
            0 => {
                // row_i += c * row_j
                let i = rng.below(d as u64) as usize;
                let mut j = rng.below(d as u64) as usize;
                if i == j {
                    j = (j + 1) % d;
                }
                if d == 1 {
                    continue;
                }
                let c = BigInt::from(rng.range_i64(-2, 2));
                for col in 0..d {
                    let add = &c * &m[(j, col)];
                    m[(i, col)] += add;
                }
            }
            1 => {
                let i = rng.below(d as u64) as usize;
                let j = rng.below(d as u64) as usize;
                if i != j {
                    for col in 0..d {
                        let tmp = m[(i, col)].clone();
                        m[(i, col)] = m[(j, col)].clone();
                        m[(j, col)] = tmp;
                    }
                }
            }
            _ => {
                let i = rng.below(d as u64) as usize;
                for col in 0..d {
                    let v = -m[(i, col)].clone();
                    m[(i, col)] = v;
                }
            }
        }
    }
    debug_assert!(m.det().abs().is_one());
    m
}

pub fn random_unimodular_map(rng: &mut Rng, d: usize, integral: bool) -> UnimodularMap {
    let matrix = random_unimodular_matrix(rng, d, 5);
    let translation: RatVec = (0..d)
        .map(|_| {
            if integral {
                rat_int(rng.range_i64(-5, 5))
            } else {
                rat(rng.range_i64(-15, 15), rng.range_i64(2, 7))
            }
        })
        .collect();
    UnimodularMap::new(matrix, translation).expect("constructed unimodular")
}

/// Lattice length of the edge from vertex `i` along direction `w`.
fn edge_length(p: &Polytope, i: usize, w: &IntVec) -> Option<BigInt> {
    let v = &p.vertices()[i];
    for (a, b) in p.edges() {
        let (from, to) = if a == i {
            (a, b)
        } else if b == i {
            (b, a)
        } else {
            continue;
        };
        let diff = crate::rat::sub_vec(&p.vertices()[to], &p.vertices()[from]);
        let dir = crate::polytope::rational_direction(&diff);
        if dir == *w {
            // length = diff / w at the first nonzero coordinate
            let j = w.iter().position(|x| !num_traits::Zero::is_zero(x)).unwrap();
            let len = &diff[j] / Rat::from_integer(w[j].clone());
            debug_assert!(len.denom().is_one());
            let _ = v;
            return Some(len.to_integer());
        }
    }
    None
}

/// Chops the corner at vertex `i` at lattice depth `c`, preserving
/// smoothness when `c` is below both incident edge lengths.
fn chop_vertex(p: &Polytope, i: usize, c: i64) -> Option<Polytope> {
    let d = p.dim();
    let dirs = p.edge_directions(i);
    if dirs.len() != d {
        return None;
    }
    for w in &dirs {
        let len = edge_length(p, i, w)?;
        if len <= BigInt::from(c) {
            return None;
        }
    }
    let v = &p.vertices()[i];
    let mut pts: Vec<RatVec> = p
        .vertices()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, q)| q.clone())
        .collect();
    for w in &dirs {
        let step: RatVec = w.iter().map(|x| Rat::from_integer(x * BigInt::from(c))).collect();
        pts.push(crate::rat::add_vec(v, &step));
    }
    Polytope::from_points(&pts).ok()
}

/// A random Delzant polytope: a smooth seed (box, dilated simplex,
/// Hirzebruch trapezoid, prisms in 3d) followed by a few corner chops.
/// Always verified smooth before returning.
pub fn random_delzant(rng: &mut Rng, d: usize) -> Polytope {
    assert!((2..=3).contains(&d));
    loop {
        let mut p = match (d, rng.below(4)) {
            (2, 0) => unit_cube(1, rng.range_i64(1, 5)).product(&unit_cube(1, rng.range_i64(1, 5))),
            (2, 1) => standard_simplex(2, rng.range_i64(1, 5)),
            (2, _) => {
                let a = rng.range_i64(1, 2);
                let x = rng.range_i64(1, 3);
                let y = a * x + rng.range_i64(1, 4);
                crate::families::Family::Hirzebruch { x, y, a }.build().unwrap()
            }
            (_, 0) => unit_cube(1, rng.range_i64(1, 4))
                .product(&unit_cube(1, rng.range_i64(1, 4)))
                .product(&unit_cube(1, rng.range_i64(1, 4))),
            (_, 1) => standard_simplex(3, rng.range_i64(1, 4)),
            (_, 2) => standard_simplex(2, rng.range_i64(1, 4)).product(&unit_cube(1, rng.range_i64(1, 4))),
            (_, _) => {
                let a = rng.range_i64(1, 2);
                let x = rng.range_i64(1, 2);
                let y = a * x + rng.range_i64(1, 3);
                crate::families::Family::Hirzebruch { x, y, a }
                    .build()
                    .unwrap()
                    .product(&unit_cube(1, rng.range_i64(1, 4)))
            }
        };
        let chops = rng.below(3);
        for _ in 0..chops {
            let i = rng.below(p.vertices().len() as u64) as usize;
            let c = rng.range_i64(1, 2);
            if let Some(q) = chop_vertex(&p, i, c) {
                if crate::gromov::is_delzant(&q) {
                    p = q;
                }
            }
        }
        if crate::gromov::is_delzant(&p) {
            return p;
        }
    }
}

/// Applies a random unimodular map to the polytope (optionally with a real
/// translate).
pub fn random_image(rng: &mut Rng, p: &Polytope, integral: bool) -> (Polytope, UnimodularMap) {
    let map = random_unimodular_map(rng, p.dim(), integral);
    (p.apply_map(&map), map)
}
