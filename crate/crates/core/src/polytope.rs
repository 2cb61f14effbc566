//! Rational polytopes with exact V- and H-representations.
//!
//! A `Polytope` is always full-dimensional and carries both representations:
//! irredundant vertices and facets `{x : <u_k, x> >= -phi_k}` with primitive
//! inner integer normals. Conversions are exhaustive subset enumerations,
//! which is exact and entirely adequate at desk scale (d <= 5, tens of
//! points).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, solve_lp, Constraint, LpOutcome, Relation};
use crate::matrix::{primitive, solve_rational, IntMat, IntVec};
use crate::rat::{
    ceil_big, dot_int_rat, floor_big, from_int_vec, is_integral, sub_vec, to_int_vec, Rat, RatVec,
};

pub const DEFAULT_CELL_BUDGET: u64 = 10_000_000;

/// Translate mode of a unimodular transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// integral translation part
    Int,
    /// arbitrary real (here: rational) translation part
    Real,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Int => write!(f, "z"),
            Mode::Real => write!(f, "r"),
        }
    }
}

/// An affine map `x -> A x + b` with `A` in `GL(d, Z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularMap {
    pub matrix: IntMat,
    pub translation: RatVec,
}

impl UnimodularMap {
    pub fn new(matrix: IntMat, translation: RatVec) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.rows() != translation.len() {
            return Err(Error::WrongDimension { expected: matrix.rows(), got: translation.len() });
        }
        if !matrix.is_unimodular() {
            return Err(Error::Parse("matrix is not unimodular".into()));
        }
        Ok(UnimodularMap { matrix, translation })
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMap { matrix: IntMat::identity(d), translation: vec![Rat::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn mode(&self) -> Mode {
        if is_integral(&self.translation) {
            Mode::Int
        } else {
            Mode::Real
        }
    }

    pub fn apply_point(&self, x: &[Rat]) -> RatVec {
        let ax = self.matrix.mul_rat_vec(x);
        ax.iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }

    pub fn inverse(&self) -> UnimodularMap {
        let ainv = self.matrix.unimodular_inverse();
        let bt = ainv.mul_rat_vec(&self.translation);
        UnimodularMap { matrix: ainv, translation: bt.iter().map(|x| -x).collect() }
    }
}

/// Inner halfspace `<normal, x> >= -offset` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: IntVec,
    pub offset: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatVec>,
    halfspaces: Vec<Halfspace>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Convex hull of a point set; the points must affinely span the ambient
    /// space. Facets are found by exhaustive subset hyperplane testing.
    pub fn from_points(points: &[RatVec]) -> Result<Polytope> {
        let Some(first) = points.first() else {
            return Err(Error::LowerDimensional { rank: 0, dim: 0 });
        };
        let dim = first.len();
        assert!(points.iter().all(|p| p.len() == dim), "ragged points");
        let mut pts: Vec<RatVec> = points.to_vec();
        pts.sort();
        pts.dedup();

        if dim == 0 {
            return Err(Error::LowerDimensional { rank: 0, dim: 0 });
        }
        let rank = affine_rank(&pts);
        if rank < dim {
            return Err(Error::LowerDimensional { rank, dim });
        }

        if dim == 1 {
            let lo = pts.iter().map(|p| p[0].clone()).min().unwrap();
            let hi = pts.iter().map(|p| p[0].clone()).max().unwrap();
            return Ok(Polytope {
                dim,
                vertices: vec![vec![lo.clone()], vec![hi.clone()]],
                halfspaces: vec![
                    Halfspace { normal: vec![BigInt::one()], offset: -lo },
                    Halfspace { normal: vec![-BigInt::one()], offset: hi },
                ],
            });
        }

        let n = pts.len();
        let mut facets: BTreeSet<(IntVec, Rat)> = BTreeSet::new();
        let mut subset = vec![0usize; dim];
        enumerate_subsets(n, dim, &mut subset, &mut |sel| {
            let diffs: Vec<RatVec> =
                sel[1..].iter().map(|&i| sub_vec(&pts[i], &pts[sel[0]])).collect();
            let Some(u) = hyperplane_normal(&diffs, dim) else {
                return;
            };
            let c = dot_int_rat(&u, &pts[sel[0]]);
            let mut above = false;
            let mut below = false;
            for p in &pts {
                let v = dot_int_rat(&u, p);
                if v > c {
                    above = true;
                } else if v < c {
                    below = true;
                }
                if above && below {
                    return;
                }
            }
            // orient inner: all points on the >= side
            let (u, c): (IntVec, Rat) =
                if below { (u.iter().map(|x| -x).collect(), -c) } else { (u, c) };
            // a supporting hyperplane is a facet iff its contact set is
            // (d-1)-dimensional
            let contact: Vec<RatVec> =
                pts.iter().filter(|p| dot_int_rat(&u, p) == c).cloned().collect();
            if affine_rank(&contact) == dim - 1 {
                facets.insert((u, -c));
            }
        });

        let halfspaces: Vec<Halfspace> = facets
            .into_iter()
            .map(|(normal, offset)| Halfspace { normal, offset })
            .collect();

        // vertices: points whose active facet normals span R^d
        let mut vertices = Vec::new();
        for p in &pts {
            let active: Vec<IntVec> = halfspaces
                .iter()
                .filter(|h| dot_int_rat(&h.normal, p) == -&h.offset)
                .map(|h| h.normal.clone())
                .collect();
            if active.len() >= dim && IntMat::from_cols(&active).rank() == dim {
                vertices.push(p.clone());
            }
        }
        vertices.sort();
        Ok(Polytope { dim, vertices, halfspaces })
    }

    /// Vertex enumeration of a bounded full-dimensional halfspace system
    /// (`<u, x> >= -phi` rows) by exhaustive d-subset basic solutions.
    pub fn from_halfspaces(halfspaces: &[(IntVec, Rat)]) -> Result<Polytope> {
        let Some(first) = halfspaces.first() else {
            return Err(Error::Unbounded);
        };
        let dim = first.0.len();
        let rows: Vec<(IntVec, Rat)> = halfspaces
            .iter()
            .map(|(u, phi)| {
                let g = u
                    .iter()
                    .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
                if g.is_zero() || g.is_one() {
                    (u.clone(), phi.clone())
                } else {
                    let gr = Rat::from_integer(g.clone());
                    (u.iter().map(|x| x / &g).collect(), phi / gr)
                }
            })
            .collect();

        let cons: Vec<Constraint> = rows
            .iter()
            .map(|(u, phi)| Constraint::new(from_int_vec(u), Relation::Ge, -phi.clone()))
            .collect();
        if lp_feasible(&cons).is_none() {
            return Err(Error::EmptyPolytope);
        }
        for i in 0..dim {
            for sgn in [1i64, -1] {
                let mut obj = vec![Rat::zero(); dim];
                obj[i] = Rat::from_integer(BigInt::from(sgn));
                if matches!(solve_lp(&obj, &cons), LpOutcome::Unbounded) {
                    return Err(Error::Unbounded);
                }
            }
        }

        let m = rows.len();
        let mut verts: BTreeSet<RatVec> = BTreeSet::new();
        let mut subset = vec![0usize; dim];
        enumerate_subsets(m, dim, &mut subset, &mut |sel| {
            let mut a = IntMat::zero(dim, dim);
            for (r, &i) in sel.iter().enumerate() {
                for c in 0..dim {
                    a[(r, c)] = rows[i].0[c].clone();
                }
            }
            let b: RatVec = sel.iter().map(|&i| -rows[i].1.clone()).collect();
            let Some(x) = solve_rational(&a, &b) else {
                return;
            };
            if rows.iter().all(|(u, phi)| dot_int_rat(u, &x) >= -phi) {
                verts.insert(x);
            }
        });
        if verts.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Self::from_points(&verts.into_iter().collect::<Vec<_>>())
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| dot_int_rat(&h.normal, x) >= -&h.offset)
    }

    pub fn contains_strict(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| dot_int_rat(&h.normal, x) > -&h.offset)
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().all(|v| is_integral(v))
    }

    /// All integer points, in lexicographic order, via a bounding-box scan
    /// with exact membership.
    pub fn lattice_points(&self) -> Result<Vec<IntVec>> {
        self.lattice_points_with_budget(DEFAULT_CELL_BUDGET)
    }

    pub fn lattice_points_with_budget(&self, budget: u64) -> Result<Vec<IntVec>> {
        let d = self.dim;
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let min = self.vertices.iter().map(|v| &v[i]).min().unwrap().clone();
            let max = self.vertices.iter().map(|v| &v[i]).max().unwrap().clone();
            lo.push(ceil_big(&min));
            hi.push(floor_big(&max));
        }
        let mut cells: u64 = 1;
        for i in 0..d {
            let w: BigInt = &hi[i] - &lo[i] + 1;
            if w.is_negative() || w.is_zero() {
                return Ok(vec![]);
            }
            let w = u64::try_from(&w)
                .map_err(|_| Error::BudgetExceeded { budget, required: u64::MAX })?;
            cells = cells
                .checked_mul(w)
                .ok_or(Error::BudgetExceeded { budget, required: u64::MAX })?;
        }
        if cells > budget {
            return Err(Error::BudgetExceeded { budget, required: cells });
        }

        // integer thresholds: <u, z> >= ceil(-phi) for integral z
        let thresholds: Vec<(IntVec, BigInt)> = self
            .halfspaces
            .iter()
            .map(|h| (h.normal.clone(), ceil_big(&-&h.offset)))
            .collect();

        if let Some(fast) = Self::try_i64_scan(&lo, &hi, &thresholds) {
            return Ok(fast);
        }

        let mut out = Vec::new();
        let mut cur = lo.clone();
        'outer: loop {
            if thresholds
                .iter()
                .all(|(u, t)| u.iter().zip(&cur).map(|(a, b)| a * b).sum::<BigInt>() >= *t)
            {
                out.push(cur.clone());
            }
            let mut i = d;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..d {
                        cur[j] = lo[j].clone();
                    }
                    break;
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn try_i64_scan(
        lo: &[BigInt],
        hi: &[BigInt],
        thresholds: &[(IntVec, BigInt)],
    ) -> Option<Vec<IntVec>> {
        const LIM: i64 = 1 << 30;
        let to64 = |x: &BigInt| i64::try_from(x).ok().filter(|v| v.abs() < LIM);
        let lo: Vec<i64> = lo.iter().map(to64).collect::<Option<_>>()?;
        let hi: Vec<i64> = hi.iter().map(to64).collect::<Option<_>>()?;
        let rows: Vec<(Vec<i64>, i64)> = thresholds
            .iter()
            .map(|(u, t)| {
                let u: Vec<i64> = u.iter().map(to64).collect::<Option<_>>()?;
                Some((u, to64(t)?))
            })
            .collect::<Option<_>>()?;
        let d = lo.len();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        'outer: loop {
            if rows
                .iter()
                .all(|(u, t)| u.iter().zip(&cur).map(|(a, b)| a * b).sum::<i64>() >= *t)
            {
                out.push(cur.iter().map(|&v| BigInt::from(v)).collect());
            }
            let mut i = d;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..d {
                        cur[j] = lo[j];
                    }
                    break;
                }
            }
        }
        Some(out)
    }

    pub fn interior_lattice_points(&self) -> Result<Vec<IntVec>> {
        Ok(self
            .lattice_points()?
            .into_iter()
            .filter(|z| self.contains_strict(&from_int_vec(z)))
            .collect())
    }

    /// Image under a unimodular map. Lattice point counts are preserved for
    /// integral translations.
    pub fn apply_map(&self, t: &UnimodularMap) -> Polytope {
        assert_eq!(t.dim(), self.dim, "dimension mismatch");
        let vertices: Vec<RatVec> = {
            let mut v: Vec<RatVec> = self.vertices.iter().map(|p| t.apply_point(p)).collect();
            v.sort();
            v
        };
        let ainv_t = t.matrix.unimodular_inverse().transpose();
        let halfspaces: Vec<Halfspace> = {
            let mut hs: Vec<Halfspace> = self
                .halfspaces
                .iter()
                .map(|h| {
                    let normal = ainv_t.mul_vec(&h.normal);
                    let offset = &h.offset - dot_int_rat(&normal, &t.translation);
                    Halfspace { normal, offset }
                })
                .collect();
            hs.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
            hs
        };
        Polytope { dim: self.dim, vertices, halfspaces }
    }

    pub fn translate(&self, v: &[Rat]) -> Polytope {
        let mut map = UnimodularMap::identity(self.dim);
        map.translation = v.to_vec();
        self.apply_map(&map)
    }

    /// Pointwise scaling by a positive rational.
    pub fn dilate(&self, t: &Rat) -> Polytope {
        assert!(t.is_positive(), "dilation factor must be positive");
        let mut vertices: Vec<RatVec> =
            self.vertices.iter().map(|p| p.iter().map(|x| x * t).collect()).collect();
        vertices.sort();
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| Halfspace { normal: h.normal.clone(), offset: &h.offset * t })
            .collect();
        Polytope { dim: self.dim, vertices, halfspaces }
    }

    /// Hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                sums.push(crate::rat::add_vec(p, q));
            }
        }
        Polytope::from_points(&sums)
    }

    /// Cartesian product; both representations are exact without any hull
    /// computation.
    pub fn product(&self, other: &Polytope) -> Polytope {
        let dim = self.dim + other.dim;
        let mut vertices = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                let mut v = p.clone();
                v.extend(q.iter().cloned());
                vertices.push(v);
            }
        }
        vertices.sort();
        let mut halfspaces = Vec::new();
        for h in &self.halfspaces {
            let mut normal = h.normal.clone();
            normal.extend(std::iter::repeat_n(BigInt::zero(), other.dim));
            halfspaces.push(Halfspace { normal, offset: h.offset.clone() });
        }
        for h in &other.halfspaces {
            let mut normal: IntVec = std::iter::repeat_n(BigInt::zero(), self.dim).collect();
            normal.extend(h.normal.iter().cloned());
            halfspaces.push(Halfspace { normal, offset: h.offset.clone() });
        }
        Polytope { dim, vertices, halfspaces }
    }

    /// Indices of facets active at vertex `i`.
    pub fn vertex_facets(&self, i: usize) -> Vec<usize> {
        let v = &self.vertices[i];
        self.halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| dot_int_rat(&h.normal, v) == -&h.offset)
            .map(|(k, _)| k)
            .collect()
    }

    /// Vertex pairs forming edges (common active facets of rank d-1).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let active: Vec<Vec<usize>> = (0..n).map(|i| self.vertex_facets(i)).collect();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let common: Vec<IntVec> = active[i]
                    .iter()
                    .filter(|k| active[j].contains(k))
                    .map(|&k| self.halfspaces[k].normal.clone())
                    .collect();
                if self.dim >= 1
                    && common.len() >= self.dim - 1
                    && IntMat::from_cols(&common).rank() == self.dim - 1
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Primitive edge directions emanating from vertex `i`, sorted.
    pub fn edge_directions(&self, i: usize) -> Vec<IntVec> {
        let mut dirs = Vec::new();
        for (a, b) in self.edges() {
            let (from, to) = if a == i {
                (a, b)
            } else if b == i {
                (b, a)
            } else {
                continue;
            };
            let diff = sub_vec(&self.vertices[to], &self.vertices[from]);
            dirs.push(rational_direction(&diff));
        }
        dirs.sort();
        dirs
    }

    /// LP rows stating that the point given by `d` consecutive LP variables
    /// starting at `offset` (out of `nvars`) lies in this polytope.
    pub fn membership_constraints(&self, nvars: usize, offset: usize) -> Vec<Constraint> {
        self.halfspaces
            .iter()
            .map(|h| {
                let mut coeffs = vec![Rat::zero(); nvars];
                for (j, u) in h.normal.iter().enumerate() {
                    coeffs[offset + j] = Rat::from_integer(u.clone());
                }
                Constraint::new(coeffs, Relation::Ge, -h.offset.clone())
            })
            .collect()
    }

    pub fn contains_int(&self, z: &[BigInt]) -> bool {
        self.contains(&from_int_vec(z))
    }
}

/// Primitive integer vector pointing in the direction of a rational vector.
pub fn rational_direction(v: &[Rat]) -> IntVec {
    let den = v
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let ints: IntVec = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    primitive(&ints)
}

/// Affine rank of a point set (dimension of its affine hull).
pub fn affine_rank(points: &[RatVec]) -> usize {
    let Some(p0) = points.first() else { return 0 };
    let diffs: Vec<RatVec> = points[1..].iter().map(|p| sub_vec(p, p0)).collect();
    rat_rank(&diffs)
}

fn rat_rank(vecs: &[RatVec]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let cols = vecs[0].len();
    let mut m: Vec<RatVec> = vecs.to_vec();
    let rows = m.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[rank][c];
            for j in c..cols {
                let sub = &f * &m[rank][j];
                m[i][j] = &m[i][j] - sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Primitive integer normal of the hyperplane spanned by the given d-1
/// difference vectors, or `None` if they are dependent.
fn hyperplane_normal(diffs: &[RatVec], dim: usize) -> Option<IntVec> {
    debug_assert_eq!(diffs.len(), dim - 1);
    let mut m: Vec<RatVec> = diffs.to_vec();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in c..dim {
            m[r][j] = &m[r][j] / &pv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..dim {
                let sub = &f * &m[r][j];
                m[i][j] = &m[i][j] - sub;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r < dim - 1 {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c)).expect("one free column");
    let mut u = vec![Rat::zero(); dim];
    u[free] = Rat::one();
    for (row, &c) in pivots.iter().enumerate() {
        u[c] = -m[row][free].clone();
    }
    Some(rational_direction(&u))
}

pub(crate) fn enumerate_subsets(
    n: usize,
    k: usize,
    buf: &mut [usize],
    f: &mut dyn FnMut(&[usize]),
) {
    fn rec(
        n: usize,
        k: usize,
        start: usize,
        depth: usize,
        buf: &mut [usize],
        f: &mut dyn FnMut(&[usize]),
    ) {
        if depth == k {
            f(buf);
            return;
        }
        for i in start..n {
            if n - i < k - depth {
                break;
            }
            buf[depth] = i;
            rec(n, k, i + 1, depth + 1, buf, f);
        }
    }
    if k <= n {
        rec(n, k, 0, 0, buf, f);
    }
}

pub fn unit_cube(d: usize, k: i64) -> Polytope {
    let mut pts = Vec::new();
    for mask in 0..(1u64 << d) {
        let v: RatVec = (0..d)
            .map(|i| crate::rat::rat_int(if mask >> i & 1 == 1 { k } else { 0 }))
            .collect();
        pts.push(v);
    }
    Polytope::from_points(&pts).expect("cube is full-dimensional")
}

pub fn standard_simplex(d: usize, scale: i64) -> Polytope {
    let mut pts = vec![vec![Rat::zero(); d]];
    for i in 0..d {
        let mut v = vec![Rat::zero(); d];
        v[i] = crate::rat::rat_int(scale);
        pts.push(v);
    }
    Polytope::from_points(&pts).expect("simplex is full-dimensional")
}

pub fn poly_from_int_points(points: &[Vec<i64>]) -> Result<Polytope> {
    let pts: Vec<RatVec> = points.iter().map(|p| crate::rat::rvec(p)).collect();
    Polytope::from_points(&pts)
}

/// Lattice points as plain i64 vectors (errors on overflow); convenient for
/// the sum-set dynamic programming.
pub fn lattice_points_i64(p: &Polytope) -> Result<Vec<Vec<i64>>> {
    p.lattice_points()?
        .into_iter()
        .map(|z| {
            z.iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
                .collect::<Result<Vec<i64>>>()
        })
        .collect()
}

pub fn int_point(z: &[i64]) -> IntVec {
    z.iter().map(|&v| BigInt::from(v)).collect()
}

/// Integral vertex list, or an error for rational vertices.
pub fn integral_vertices(p: &Polytope) -> Result<Vec<IntVec>> {
    p.vertices()
        .iter()
        .map(|v| to_int_vec(v).ok_or(Error::NonLatticePolytope))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int, rvec};

    #[test]
    fn standard_simplex_facets() {
        let p = standard_simplex(2, 1);
        assert_eq!(p.vertices().len(), 3);
        let normals: Vec<(Vec<i64>, i64)> = p
            .halfspaces()
            .iter()
            .map(|h| {
                (
                    h.normal.iter().map(|x| i64::try_from(x).unwrap()).collect(),
                    i64::try_from(h.offset.numer()).unwrap(),
                )
            })
            .collect();
        assert!(normals.contains(&(vec![1, 0], 0)));
        assert!(normals.contains(&(vec![0, 1], 0)));
        assert!(normals.contains(&(vec![-1, -1], 1)));
        assert_eq!(normals.len(), 3);
    }

    #[test]
    fn hull_drops_redundant_points() {
        let pts = vec![rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), vec![rat(1, 2), rat(1, 2)]];
        let p = Polytope::from_points(&pts).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!(!p.vertices().contains(&vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn lower_dimensional_input_is_rejected() {
        let pts = vec![rvec(&[0, 0]), rvec(&[1, 1]), rvec(&[2, 2])];
        assert_eq!(
            Polytope::from_points(&pts),
            Err(Error::LowerDimensional { rank: 1, dim: 2 })
        );
    }

    #[test]
    fn halfspaces_to_vertices_square_and_simplex() {
        let sq = Polytope::from_halfspaces(&[
            (int_point(&[1, 0]), rat_int(0)),
            (int_point(&[0, 1]), rat_int(0)),
            (int_point(&[-1, 0]), rat_int(1)),
            (int_point(&[0, -1]), rat_int(1)),
        ])
        .unwrap();
        let vs: Vec<Vec<i64>> = sq
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x.numer()).unwrap()).collect())
            .collect();
        assert_eq!(vs, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        let tri = Polytope::from_halfspaces(&[
            (int_point(&[1, 0]), rat_int(0)),
            (int_point(&[0, 1]), rat_int(0)),
            (int_point(&[-1, -1]), rat_int(1)),
        ])
        .unwrap();
        assert_eq!(tri.vertices().len(), 3);
    }

    #[test]
    fn hirzebruch_vertex_enumeration() {
        // normals (1,0),(0,1),(-1,0),(-a,-1), offsets 0,0,x,y at x=2, y=7, a=2
        let p = Polytope::from_halfspaces(&[
            (int_point(&[1, 0]), rat_int(0)),
            (int_point(&[0, 1]), rat_int(0)),
            (int_point(&[-1, 0]), rat_int(2)),
            (int_point(&[-2, -1]), rat_int(7)),
        ])
        .unwrap();
        let mut vs: Vec<IntVec> = p.vertices().iter().map(|v| to_int_vec(v).unwrap()).collect();
        vs.sort();
        assert_eq!(
            vs,
            vec![int_point(&[0, 0]), int_point(&[0, 7]), int_point(&[2, 0]), int_point(&[2, 3])]
        );
    }

    #[test]
    fn empty_and_unbounded_systems() {
        assert_eq!(
            Polytope::from_halfspaces(&[
                (int_point(&[1]), rat_int(0)),
                (int_point(&[-1]), rat_int(-1)),
            ]),
            Err(Error::EmptyPolytope)
        );
        assert_eq!(
            Polytope::from_halfspaces(&[
                (int_point(&[1, 0]), rat_int(0)),
                (int_point(&[0, 1]), rat_int(0)),
            ]),
            Err(Error::Unbounded)
        );
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(standard_simplex(2, 1).lattice_points().unwrap().len(), 3);
        assert_eq!(unit_cube(2, 2).lattice_points().unwrap().len(), 9);
    }

    #[test]
    fn lattice_points_lex_order_and_budget() {
        let p = unit_cube(2, 1);
        let pts = p.lattice_points().unwrap();
        assert_eq!(
            pts,
            vec![int_point(&[0, 0]), int_point(&[0, 1]), int_point(&[1, 0]), int_point(&[1, 1])]
        );
        assert!(matches!(
            unit_cube(3, 1000).lattice_points_with_budget(100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn apply_map_preserves_lattice_counts() {
        let square = unit_cube(2, 1);
        let shear = UnimodularMap::new(
            IntMat::from_rows(&[vec![1, 1], vec![0, 1]]),
            vec![Rat::zero(), Rat::zero()],
        )
        .unwrap();
        let image = square.apply_map(&shear);
        assert_eq!(image.lattice_points().unwrap().len(), 4);

        let id = UnimodularMap::identity(2);
        assert_eq!(square.apply_map(&id), square);
    }

    #[test]
    fn fractional_translate_can_lose_all_lattice_points() {
        // (1/3, 1/3) + simplex contains no integer point; enumeration oracle
        let tri = standard_simplex(2, 1);
        let moved = tri.translate(&[rat(1, 3), rat(1, 3)]);
        assert_eq!(moved.lattice_points().unwrap().len(), 0);
        // while (1/3, 0) keeps exactly one, (1,0), on its boundary
        let moved = tri.translate(&[rat(1, 3), rat_int(0)]);
        assert_eq!(moved.lattice_points().unwrap(), vec![int_point(&[1, 0])]);
    }

    #[test]
    fn minkowski_and_dilate() {
        let seg = poly_from_int_points(&[vec![0], vec![1]]).unwrap();
        let sum = seg.minkowski_sum(&seg).unwrap();
        assert_eq!(sum.vertices(), &[rvec(&[0]), rvec(&[2])]);

        let tri = standard_simplex(2, 1);
        let shifted = tri.translate(&rvec(&[3, 4]));
        assert!(shifted.contains(&rvec(&[3, 4])));

        let doubled = tri.dilate(&rat_int(2));
        assert_eq!(doubled.lattice_points().unwrap().len(), 6);
    }

    #[test]
    fn product_structure() {
        let sq = unit_cube(1, 2).product(&unit_cube(1, 3));
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.halfspaces().len(), 4);
        assert_eq!(sq.lattice_points().unwrap().len(), 12);
    }

    #[test]
    fn facet_normals_primitive_and_vertices_supported() {
        let p = poly_from_int_points(&[vec![0, 0], vec![4, 2], vec![2, 6], vec![-2, 2]]).unwrap();
        for h in p.halfspaces() {
            assert_eq!(primitive(&h.normal), h.normal);
        }
        for i in 0..p.vertices().len() {
            assert!(p.vertex_facets(i).len() >= 2);
        }
    }

    #[test]
    fn edges_of_square() {
        let sq = unit_cube(2, 1);
        assert_eq!(sq.edges().len(), 4);
        let dirs = sq.edge_directions(0); // vertex (0,0)
        assert_eq!(dirs, vec![int_point(&[0, 1]), int_point(&[1, 0])]);
    }

    #[test]
    fn unimodular_map_roundtrip() {
        let m = UnimodularMap::new(
            IntMat::from_rows(&[vec![2, 1], vec![1, 1]]),
            vec![rat(1, 3), rat_int(-2)],
        )
        .unwrap();
        assert_eq!(m.mode(), Mode::Real);
        let p = rvec(&[5, -7]);
        let q = m.apply_point(&p);
        assert_eq!(m.inverse().apply_point(&q), p);
        assert!(UnimodularMap::new(IntMat::from_rows(&[vec![2, 0], vec![0, 1]]), rvec(&[0, 0]))
            .is_err());
    }
}
