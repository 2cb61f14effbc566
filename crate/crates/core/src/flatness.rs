//! Unimodular-simplex embeddings for bodies of large width, generalized
//! flatness oracles, and the exact one-dimensional flatness constant.
//!
//! The central construction: if the d-th successive minimum of `K - K` is at
//! most `1/(2d)` (integral mode) or `1/d` (real mode), then `K` contains a
//! translated lattice parallelepiped, and a parallelepiped always contains a
//! unimodular simplex. The parallelepiped step is the inductive slice
//! argument; the top slice contributes a single point found by rounding
//! coordinates in the edge basis, which keeps the induction valid for real
//! base points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, solve_lp, Constraint, LpOutcome, Relation};
use crate::matrix::{hnf, solve_rational, IntMat, IntVec};
use crate::polytope::{Mode, Polytope, UnimodularMap};
use crate::rat::{
    add_vec, ceil_big, dot_int_rat, floor_big, from_int_vec, is_integral, sqrt_upper, sub_vec,
    to_int_vec, Rat, RatVec,
};
use crate::width::{lattice_width, successive_minima_diffbody};

/// Per-dimension rational upper bounds for the flatness constant. Each entry
/// dominates the true value, so width thresholds built from the table only
/// strengthen preconditions.
///
/// d = 1: exactly 1. d = 2: 2783/1291 > 1 + 2/sqrt(3). d = 3: 4.244.
/// d >= 4: rational over-approximation of sqrt((d+1)(2d+1)/6) * d^(3/2).
pub fn flt_upper(d: usize) -> Rat {
    match d {
        0 => Rat::zero(),
        1 => Rat::one(),
        2 => crate::rat::rat(2783, 1291),
        3 => crate::rat::rat(4244, 1000),
        _ => {
            let d_big = BigInt::from(d as u64);
            let num = (&d_big + 1) * (BigInt::from(2) * &d_big + 1) * (&d_big * &d_big * &d_big);
            sqrt_upper(&Rat::new(num, BigInt::from(6)), 1000)
        }
    }
}

/// Width threshold of the simplex-embedding theorem for the given mode:
/// `2 * Flt(d) * d` (integral translates) or `Flt(d) * d` (real translates),
/// evaluated with the tabulated upper bounds.
pub fn simplex_width_threshold(d: usize, mode: Mode) -> Rat {
    let base = flt_upper(d) * Rat::from_integer(BigInt::from(d as u64));
    match mode {
        Mode::Int => Rat::from_integer(BigInt::from(2)) * base,
        Mode::Real => base,
    }
}

/// d+1 points whose edge vectors form a unimodular matrix; an integral
/// certificate additionally has integral points.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexCertificate {
    pub mode: Mode,
    pub points: Vec<RatVec>,
}

impl SimplexCertificate {
    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    /// Edge matrix `[p_1 - p_0, ..., p_d - p_0]`; errors if not integral.
    pub fn edge_matrix(&self) -> Result<IntMat> {
        let p0 = &self.points[0];
        let cols: Vec<IntVec> = self.points[1..]
            .iter()
            .map(|p| to_int_vec(&sub_vec(p, p0)).ok_or(Error::NonLatticePolytope))
            .collect::<Result<_>>()?;
        Ok(IntMat::from_cols(&cols))
    }

    /// The transformation sending the standard simplex onto this one.
    pub fn as_map(&self) -> Result<UnimodularMap> {
        UnimodularMap::new(self.edge_matrix()?, self.points[0].clone())
    }
}

/// Structural check plus exact membership of all points in `k`.
pub fn verify_simplex(k: &Polytope, cert: &SimplexCertificate) -> Result<()> {
    let d = k.dim();
    if cert.points.len() != d + 1 {
        return Err(Error::InvalidCertificate("simplex certificate has wrong arity".into()));
    }
    let e = cert.edge_matrix().map_err(|_| {
        Error::InvalidCertificate("edge vectors are not integral".into())
    })?;
    if !e.det().abs().is_one() {
        return Err(Error::InvalidCertificate("determinant != +-1".into()));
    }
    if cert.mode == Mode::Int && !cert.points.iter().all(|p| is_integral(p)) {
        return Err(Error::InvalidCertificate("integral mode requires integral points".into()));
    }
    for (i, p) in cert.points.iter().enumerate() {
        if !k.contains(p) {
            return Err(Error::InvalidCertificate(format!("point {i} is outside the body")));
        }
    }
    Ok(())
}

/// A unimodular simplex inside the parallelepiped `a + sum_i [0, tau v_i]`,
/// where `tau = 1` with integral `a` (mode Int) and `tau = 2` with arbitrary
/// rational `a` (mode Real). Both modes output integral simplices.
pub fn simplex_in_parallelepiped(
    a: &[Rat],
    edges: &[IntVec],
    mode: Mode,
) -> Result<SimplexCertificate> {
    let d = a.len();
    if edges.len() != d || IntMat::from_cols(edges).rank() != d {
        return Err(Error::IndependenceViolation);
    }
    if mode == Mode::Int && !is_integral(a) {
        return Err(Error::ParameterOutOfRange("integral mode requires an integral base".into()));
    }
    let tau = match mode {
        Mode::Int => 1i64,
        Mode::Real => 2,
    };
    let points = parallelepiped_simplex(a, edges, tau, false);
    debug_assert!(points.iter().all(|p| is_integral(p)));
    let cert = SimplexCertificate { mode: Mode::Int, points };
    debug_assert!(verify_in_parallelepiped(a, edges, tau, &cert.points).is_ok());
    Ok(SimplexCertificate { mode, points: cert.points })
}

/// Exact membership of points in `a + sum_i [0, tau v_i]`.
fn verify_in_parallelepiped(a: &[Rat], edges: &[IntVec], tau: i64, points: &[RatVec]) -> Result<()> {
    let m = IntMat::from_cols(edges);
    let hi = Rat::from_integer(BigInt::from(tau));
    for p in points {
        let rhs = sub_vec(p, a);
        let t = solve_rational(&m, &rhs).ok_or(Error::IndependenceViolation)?;
        if !t.iter().all(|c| !c.is_negative() && *c <= hi) {
            return Err(Error::InvalidCertificate("point outside parallelepiped".into()));
        }
    }
    Ok(())
}

/// The inductive slice construction. `real_heights` permits slicing at
/// non-integral heights (the returned points then have integral differences
/// but real positions); with `real_heights = false` the caller must ensure
/// the projected segment contains two consecutive integers, which holds for
/// integral `a` with `tau >= 1` and for any `a` with `tau >= 2`.
fn parallelepiped_simplex(a: &[Rat], edges: &[IntVec], tau: i64, real_heights: bool) -> Vec<RatVec> {
    let d = a.len();
    let tau_r = Rat::from_integer(BigInt::from(tau));
    if d == 1 {
        let v = Rat::from_integer(edges[0][0].clone());
        let end = &a[0] + &tau_r * &v;
        let (lo, hi) = if a[0] <= end { (a[0].clone(), end) } else { (end, a[0].clone()) };
        let t0 = if real_heights {
            lo.clone()
        } else {
            let k = Rat::from_integer(ceil_big(&lo));
            debug_assert!(&k + Rat::one() <= hi, "segment too short for two integer points");
            k
        };
        return vec![vec![t0.clone()], vec![t0 + Rat::one()]];
    }

    // transform so the first d-1 edges have last coordinate 0
    let m = IntMat::from_cols(edges);
    let (h, u) = hnf(&m);
    let mut a_t = u.mul_rat_vec(a);
    let mut cols: Vec<IntVec> = (0..d).map(|j| h.col(j)).collect();
    debug_assert!((0..d - 1).all(|j| cols[j][d - 1].is_zero()));
    // orient the last edge upward, translating the base if needed
    if cols[d - 1][d - 1].is_negative() {
        let shift: RatVec = cols[d - 1].iter().map(|x| Rat::from_integer(x.clone()) * &tau_r).collect();
        a_t = add_vec(&a_t, &shift);
        cols[d - 1] = cols[d - 1].iter().map(|x| -x).collect();
    }
    let hgt = Rat::from_integer(cols[d - 1][d - 1].clone());
    let lo = a_t[d - 1].clone();

    let k = if real_heights {
        lo.clone()
    } else {
        let k = Rat::from_integer(ceil_big(&lo));
        debug_assert!(&k + Rat::one() <= &lo + &tau_r * &hgt, "segment too short");
        k
    };

    // bottom slice base: a_t + s * tau * v_d with last coordinate k
    let s_bot = (&k - &lo) / (&tau_r * &hgt);
    let base_bot: RatVec = (0..d - 1)
        .map(|i| &a_t[i] + &s_bot * &tau_r * Rat::from_integer(cols[d - 1][i].clone()))
        .collect();
    let trunc: Vec<IntVec> = (0..d - 1).map(|j| cols[j][..d - 1].to_vec()).collect();
    let q = parallelepiped_simplex(&base_bot, &trunc, tau, real_heights);

    // top slice base at height k+1
    let s_top = (&k + Rat::one() - &lo) / (&tau_r * &hgt);
    let base_top: RatVec = (0..d - 1)
        .map(|i| &a_t[i] + &s_top * &tau_r * Rat::from_integer(cols[d - 1][i].clone()))
        .collect();
    // find w in the edge lattice with q_0 + w inside the top slice:
    // writing q_0 - base_top = sum gamma_j v_j, the choice m_j = ceil(-gamma_j)
    // gives coefficients (gamma_j + m_j)/tau in [0, 1]
    let tm = IntMat::from_cols(&trunc);
    let c = sub_vec(&q[0], &base_top);
    let gamma = solve_rational(&tm, &c).expect("truncated edges are independent");
    let mcoef: Vec<BigInt> = gamma.iter().map(|g| ceil_big(&-g)).collect();
    let w = tm.mul_vec(&mcoef);
    let top: RatVec = q[0]
        .iter()
        .zip(&w)
        .map(|(x, wi)| x + Rat::from_integer(wi.clone()))
        .collect();

    // lift and undo the transform
    let uinv = u.unimodular_inverse();
    let mut pts: Vec<RatVec> = Vec::with_capacity(d + 1);
    for qi in &q {
        let mut p = qi.clone();
        p.push(k.clone());
        pts.push(uinv.mul_rat_vec(&p));
    }
    let mut p = top;
    p.push(&k + Rat::one());
    pts.push(uinv.mul_rat_vec(&p));
    pts
}

/// Attempts to place a unimodular copy of the standard simplex inside `k`.
///
/// A direct translate of the standard simplex is attempted first; the main
/// route applies the successive-minima threshold (`lambda_d <= 1/(2d)` for
/// integral mode, `<= 1/d` for real mode), realizes the witnesses as
/// segments, and runs the parallelepiped construction. `Ok(None)` means the
/// sufficient condition failed; the body may still contain a copy.
pub fn find_unimodular_simplex(k: &Polytope, mode: Mode) -> Result<Option<SimplexCertificate>> {
    let d = k.dim();

    if let Some(cert) = direct_simplex_translate(k, mode) {
        verify_simplex(k, &cert)?;
        return Ok(Some(cert));
    }

    let minima = successive_minima_diffbody(k)?;
    let threshold = match mode {
        Mode::Int => crate::rat::rat(1, 2 * d as i64),
        Mode::Real => crate::rat::rat(1, d as i64),
    };
    if minima.lambdas[d - 1] > threshold {
        return Ok(None);
    }

    // realize each witness as a segment [a_i, a_i + v_i] inside (threshold) K
    let shrunk = k.dilate(&threshold);
    let mut anchors: Vec<RatVec> = Vec::with_capacity(d);
    for v in &minima.witnesses {
        let mut cons = shrunk.membership_constraints(d, 0);
        for h in shrunk.halfspaces() {
            let coeffs: RatVec =
                h.normal.iter().map(|c| Rat::from_integer(c.clone())).collect();
            let uv = dot_int_rat(&h.normal, &from_int_vec(v));
            cons.push(Constraint::new(coeffs, Relation::Ge, -&h.offset - uv));
        }
        let a = lp_feasible(&cons).expect("witness within threshold admits a segment");
        anchors.push(a);
    }

    let (tau, real_heights) = match mode {
        Mode::Int => (2i64, false),
        Mode::Real => (1, true),
    };
    let mut base = vec![Rat::zero(); d];
    for a in &anchors {
        base = add_vec(&base, a);
    }
    if mode == Mode::Int {
        base = base.iter().map(|x| x * Rat::from_integer(BigInt::from(2))).collect();
    }
    let points = parallelepiped_simplex(&base, &minima.witnesses, tau, real_heights);
    let cert = SimplexCertificate { mode, points };
    verify_simplex(k, &cert)?;
    Ok(Some(cert))
}

/// Direct translate search: integral (or rational) `b` with `b + Delta_d`
/// inside `k`.
fn direct_simplex_translate(k: &Polytope, mode: Mode) -> Option<SimplexCertificate> {
    let d = k.dim();
    // b and all b + e_i inside K: per facet the tightest of the d+1 offsets
    let rows: Vec<(IntVec, Rat)> = k
        .halfspaces()
        .iter()
        .map(|h| {
            let min_shift = h
                .normal
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .chain(std::iter::once(Rat::zero()))
                .min()
                .unwrap();
            (h.normal.clone(), &h.offset + min_shift)
        })
        .collect();
    let b = match mode {
        Mode::Real => feasible_point(&rows)?,
        Mode::Int => from_int_vec(&integer_point_in_system(&rows)?),
    };
    let mut points = vec![b.clone()];
    for i in 0..d {
        let mut p = b.clone();
        p[i] = &p[i] + Rat::one();
        points.push(p);
    }
    Some(SimplexCertificate { mode, points })
}

fn feasible_point(rows: &[(IntVec, Rat)]) -> Option<RatVec> {
    let cons: Vec<Constraint> = rows
        .iter()
        .map(|(u, phi)| Constraint::new(from_int_vec(u), Relation::Ge, -phi.clone()))
        .collect();
    lp_feasible(&cons)
}

/// Lexicographically first integer point of the rational polyhedron
/// `<u, x> >= -phi` (assumed bounded), or `None`.
pub fn integer_point_in_system(rows: &[(IntVec, Rat)]) -> Option<IntVec> {
    let d = rows.first()?.0.len();
    let cons: Vec<Constraint> = rows
        .iter()
        .map(|(u, phi)| Constraint::new(from_int_vec(u), Relation::Ge, -phi.clone()))
        .collect();
    lp_feasible(&cons)?;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let mut obj = vec![Rat::zero(); d];
        obj[i] = Rat::one();
        let LpOutcome::Optimal { value: max, .. } = solve_lp(&obj, &cons) else {
            return None; // unbounded systems are not searched
        };
        obj[i] = -Rat::one();
        let LpOutcome::Optimal { value: neg_min, .. } = solve_lp(&obj, &cons) else {
            return None;
        };
        lo.push(ceil_big(&-neg_min));
        hi.push(floor_big(&max));
        if lo[i] > hi[i] {
            return None;
        }
    }
    let mut cur = lo.clone();
    'outer: loop {
        let ok = rows.iter().all(|(u, phi)| {
            let v: BigInt = u.iter().zip(&cur).map(|(a, b)| a * b).sum();
            Rat::from_integer(v) >= -phi
        });
        if ok {
            return Some(cur);
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
    None
}

/// Result of the (sound, incomplete) copy search.
#[derive(Debug, Clone, PartialEq)]
pub enum CopySearch {
    Found(UnimodularMap),
    /// no certificate with `|A|_inf` up to the searched bound
    Unknown { bound: i64 },
}

pub const DEFAULT_MATRIX_BOUND: i64 = 3;
const MATRIX_ENUM_CAP: u64 = 100_000_000;

/// Unimodular matrices with entries bounded by `bound`, ordered by l1
/// distance from the identity, then lexicographically.
pub fn unimodular_candidates(d: usize, bound: i64) -> Result<Vec<IntMat>> {
    let cells = (2 * bound as u64 + 1).checked_pow((d * d) as u32);
    match cells {
        Some(c) if c <= MATRIX_ENUM_CAP => {}
        _ => {
            return Err(Error::BudgetExceeded {
                budget: MATRIX_ENUM_CAP,
                required: cells.unwrap_or(u64::MAX),
            })
        }
    }
    let mut out: Vec<(i64, Vec<i64>)> = Vec::new();
    let n = d * d;
    let mut cur = vec![-bound; n];
    'outer: loop {
        if det_i64(&cur, d).abs() == 1 {
            let dist: i64 = cur
                .iter()
                .enumerate()
                .map(|(idx, &v)| {
                    let target = if idx / d == idx % d { 1 } else { 0 };
                    (v - target).abs()
                })
                .sum();
            out.push((dist, cur.clone()));
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                for j in i + 1..n {
                    cur[j] = -bound;
                }
                break;
            }
        }
    }
    out.sort();
    Ok(out
        .into_iter()
        .map(|(_, flat)| {
            let rows: Vec<Vec<i64>> = flat.chunks(d).map(|c| c.to_vec()).collect();
            IntMat::from_rows(&rows)
        })
        .collect())
}

fn det_i64(flat: &[i64], d: usize) -> i64 {
    match d {
        1 => flat[0],
        2 => flat[0] * flat[3] - flat[1] * flat[2],
        3 => {
            flat[0] * (flat[4] * flat[8] - flat[5] * flat[7])
                - flat[1] * (flat[3] * flat[8] - flat[5] * flat[6])
                + flat[2] * (flat[3] * flat[7] - flat[4] * flat[6])
        }
        4 => {
            // cofactor expansion along the first row; entries are tiny
            let minor = |r: [usize; 3], c: [usize; 3]| {
                flat[r[0] * 4 + c[0]]
                    * (flat[r[1] * 4 + c[1]] * flat[r[2] * 4 + c[2]]
                        - flat[r[1] * 4 + c[2]] * flat[r[2] * 4 + c[1]])
                    - flat[r[0] * 4 + c[1]]
                        * (flat[r[1] * 4 + c[0]] * flat[r[2] * 4 + c[2]]
                            - flat[r[1] * 4 + c[2]] * flat[r[2] * 4 + c[0]])
                    + flat[r[0] * 4 + c[2]]
                        * (flat[r[1] * 4 + c[0]] * flat[r[2] * 4 + c[1]]
                            - flat[r[1] * 4 + c[1]] * flat[r[2] * 4 + c[0]])
            };
            let rows = [1, 2, 3];
            flat[0] * minor(rows, [1, 2, 3]) - flat[1] * minor(rows, [0, 2, 3])
                + flat[2] * minor(rows, [0, 1, 3])
                - flat[3] * minor(rows, [0, 1, 2])
        }
        _ => {
            let rows: Vec<Vec<i64>> = flat.chunks(d).map(|c| c.to_vec()).collect();
            i64::try_from(&IntMat::from_rows(&rows).det()).expect("determinant fits i64")
        }
    }
}

/// Searches for `A` in `GL(d, Z)` (entries up to `bound`) and a translate `b`
/// with `A * X + b` inside `k`. `X` is any finite point set; only its points
/// matter. Sound but incomplete: `Unknown` reports the searched bound.
pub fn contains_unimodular_copy(
    k: &Polytope,
    x_points: &[RatVec],
    mode: Mode,
    bound: i64,
) -> Result<CopySearch> {
    let d = k.dim();
    assert!(x_points.iter().all(|p| p.len() == d), "dimension mismatch");
    for a in unimodular_candidates(d, bound)? {
        // translate polytope: for every point p of X and facet (u, phi):
        // <u, b> >= -phi - <u, A p>; per normal only the tightest offset
        // matters, so the system stays one row per facet
        let images: Vec<RatVec> = x_points.iter().map(|p| a.mul_rat_vec(p)).collect();
        let rows: Vec<(IntVec, Rat)> = k
            .halfspaces()
            .iter()
            .map(|h| {
                let shift = images
                    .iter()
                    .map(|ap| dot_int_rat(&h.normal, ap))
                    .min()
                    .expect("X is nonempty");
                (h.normal.clone(), &h.offset + shift)
            })
            .collect();
        let b = match mode {
            Mode::Real => feasible_point(&rows),
            Mode::Int => integer_point_in_system(&rows).map(|z| from_int_vec(&z)),
        };
        if let Some(b) = b {
            let map = UnimodularMap::new(a, b)?;
            debug_assert!(verify_copy(k, x_points, &map).is_ok());
            return Ok(CopySearch::Found(map));
        }
    }
    Ok(CopySearch::Unknown { bound })
}

/// Exact check that `map(X)` lies inside `k`.
pub fn verify_copy(k: &Polytope, x_points: &[RatVec], map: &UnimodularMap) -> Result<()> {
    if !map.matrix.is_unimodular() {
        return Err(Error::InvalidCertificate("determinant != +-1".into()));
    }
    for p in x_points {
        if !k.contains(&map.apply_point(p)) {
            return Err(Error::InvalidCertificate("image point outside the body".into()));
        }
    }
    Ok(())
}

/// The cube-lemma descent: from a real-mode certificate for `X + [0,1]^d`
/// inside `k`, construct and verify an integral-mode certificate for `X`
/// with the same matrix (round the translate up in the edge basis).
pub fn cube_lemma_descend(
    k: &Polytope,
    x_points: &[RatVec],
    real_map: &UnimodularMap,
) -> Result<UnimodularMap> {
    let ainv = real_map.matrix.unimodular_inverse();
    let b = ainv.mul_rat_vec(&real_map.translation);
    let b_up: IntVec = b.iter().map(ceil_big).collect();
    let t_int = real_map.matrix.mul_vec(&b_up);
    let map = UnimodularMap::new(real_map.matrix.clone(), from_int_vec(&t_int))?;
    verify_copy(k, x_points, &map)?;
    Ok(map)
}

/// Exact generalized flatness constant in dimension 1 for a finite rational
/// set: the largest gap between consecutive points of `(X U -X) + Z` within
/// one period.
pub fn flt1_exact(xs: &[Rat]) -> Result<Rat> {
    if xs.is_empty() {
        return Err(Error::ParameterOutOfRange("flt1 of empty set".into()));
    }
    let mut fracs: Vec<Rat> = Vec::new();
    for x in xs {
        for v in [x.clone(), -x.clone()] {
            let f = &v - Rat::from_integer(floor_big(&v));
            fracs.push(f);
        }
    }
    fracs.sort();
    fracs.dedup();
    let mut best = Rat::zero();
    for i in 0..fracs.len() {
        let next = if i + 1 < fracs.len() {
            fracs[i + 1].clone()
        } else {
            &fracs[0] + Rat::one()
        };
        let gap = next - &fracs[i];
        if gap > best {
            best = gap;
        }
    }
    Ok(best)
}

/// Best dilate `R` such that an R-unimodular copy of `R * Delta_d` fits in
/// `k`, over a deterministic candidate family of unimodular matrices (small
/// entries, vertex edge-cone bases, and the matrix produced by the width
/// theorem). A sound lower bound, guaranteed at least
/// `width(k) / (Flt(d) * d)`.
pub fn largest_simplex_dilate(k: &Polytope) -> Result<(Rat, UnimodularMap)> {
    let d = k.dim();
    let mut candidates: Vec<IntMat> = vec![IntMat::identity(d)];

    // edge-cone bases at every vertex
    for i in 0..k.vertices().len() {
        let dirs = k.edge_directions(i);
        if dirs.len() < d {
            continue;
        }
        let mut subset = vec![0usize; d];
        let dirs_ref = &dirs;
        let cands = &mut candidates;
        crate::polytope::enumerate_subsets(dirs_ref.len(), d, &mut subset, &mut |sel| {
            let cols: Vec<IntVec> = sel.iter().map(|&j| dirs_ref[j].clone()).collect();
            let m = IntMat::from_cols(&cols);
            if m.is_unimodular() {
                cands.push(m);
            }
        });
    }
    if let Ok(small) = unimodular_candidates(d, 1) {
        candidates.extend(small);
    }

    // theorem route: the scaled body has width Flt(d)*d, so the real-mode
    // embedding succeeds; its edge matrix joins the candidate family and
    // guarantees the lower bound width/(Flt(d) d)
    let width = lattice_width(k)?.value;
    let guarantee = &width / simplex_width_threshold(d, Mode::Real);
    let scale = Rat::one() / &guarantee;
    let scaled = k.dilate(&scale);
    if let Some(cert) = find_unimodular_simplex(&scaled, Mode::Real)? {
        candidates.push(cert.edge_matrix()?);
    }
    // permuting the columns of A relabels the simplex vertices and yields
    // the same body, so dedupe candidates up to column permutation
    let mut seen = std::collections::HashSet::new();
    candidates.retain(|a| {
        let mut cols: Vec<Vec<String>> = (0..d)
            .map(|j| a.col(j).iter().map(|x| x.to_string()).collect())
            .collect();
        cols.sort();
        seen.insert(cols)
    });

    let mut best: Option<(Rat, UnimodularMap)> = None;
    for a in candidates {
        // maximize R subject to b in K and R * A e_j + b in K
        let nvars = d + 1; // (b, R)
        let mut cons = k.membership_constraints(nvars, 0);
        for h in k.halfspaces() {
            for j in 0..d {
                let mut coeffs = vec![Rat::zero(); nvars];
                for (i, c) in h.normal.iter().enumerate() {
                    coeffs[i] = Rat::from_integer(c.clone());
                }
                coeffs[d] = dot_int_rat(&h.normal, &from_int_vec(&a.col(j)));
                cons.push(Constraint::new(coeffs, Relation::Ge, -h.offset.clone()));
            }
        }
        let mut rcons = vec![Rat::zero(); nvars];
        rcons[d] = Rat::one();
        cons.push(Constraint::new(rcons.clone(), Relation::Ge, Rat::zero()));
        let out = solve_lp(&rcons, &cons);
        let Some((r, point)) = out.optimal() else { continue };
        if best.as_ref().is_none_or(|(br, _)| r > br) {
            let b = point[..d].to_vec();
            best = Some((r.clone(), UnimodularMap::new(a.clone(), b)?));
        }
    }
    let (r, map) = best.expect("identity candidate always yields a bound");
    debug_assert!(r >= guarantee);
    Ok((r, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{int_point, poly_from_int_points, standard_simplex, unit_cube};
    use crate::rat::{rat, rat_int, rvec};

    #[test]
    fn fast_determinants_match_bareiss() {
        let mut rng = crate::generate::Rng::new(44);
        for d in 1..=4usize {
            for _ in 0..50 {
                let flat: Vec<i64> = (0..d * d).map(|_| rng.range_i64(-4, 4)).collect();
                let rows: Vec<Vec<i64>> = flat.chunks(d).map(|c| c.to_vec()).collect();
                let exact = IntMat::from_rows(&rows).det();
                assert_eq!(BigInt::from(det_i64(&flat, d)), exact);
            }
        }
    }

    #[test]
    fn flt_table_values() {
        assert_eq!(flt_upper(1), rat_int(1));
        assert_eq!(flt_upper(2), rat(2783, 1291));
        // dominates 1 + 2/sqrt(3): (f - 1)^2 > 4/3
        let f2 = flt_upper(2) - rat_int(1);
        assert!(&f2 * &f2 > rat(4, 3));
        assert_eq!(flt_upper(3), rat(1061, 250));
        // d >= 4: (flt)^2 >= (d+1)(2d+1) d^3 / 6, monotone from d = 3
        let mut prev = flt_upper(3);
        for d in 4..=6usize {
            let f = flt_upper(d);
            let n = (d + 1) * (2 * d + 1) * d * d * d;
            assert!(&f * &f >= rat(n as i64, 6));
            assert!(f > prev);
            prev = f;
        }
    }

    #[test]
    fn parallelepiped_standard_basis() {
        let edges = vec![int_point(&[1, 0, 0]), int_point(&[0, 1, 0]), int_point(&[0, 0, 1])];
        let cert =
            simplex_in_parallelepiped(&rvec(&[0, 0, 0]), &edges, Mode::Int).unwrap();
        let cube = unit_cube(3, 1);
        verify_simplex(&cube, &cert).unwrap();
        assert_eq!(cert.points[0], rvec(&[0, 0, 0]));
    }

    #[test]
    fn parallelepiped_real_base() {
        // (1/2, 1/2) + [0, 2]^2 contains the integral simplex on {1, 2}^2
        let edges = vec![int_point(&[1, 0]), int_point(&[0, 1])];
        let cert = simplex_in_parallelepiped(&[rat(1, 2), rat(1, 2)], &edges, Mode::Real)
            .unwrap();
        for p in &cert.points {
            assert!(is_integral(p));
            for c in p {
                assert!(*c >= rat_int(1) && *c <= rat_int(2), "point outside {{1,2}}^2");
            }
        }
        // oracle: enumerate lattice points of the parallelepiped and check a
        // unimodular triple exists among them
        let container =
            poly_from_int_points(&[vec![1, 1], vec![2, 1], vec![1, 2], vec![2, 2]]).unwrap();
        for p in &cert.points {
            assert!(container.contains(p));
        }
    }

    #[test]
    fn parallelepiped_skew_edges() {
        // a = 0, v1 = (1,0), v2 = (1,2): certificate inside the parallelepiped
        let edges = vec![int_point(&[1, 0]), int_point(&[1, 2])];
        let cert = simplex_in_parallelepiped(&rvec(&[0, 0]), &edges, Mode::Int).unwrap();
        verify_in_parallelepiped(&rvec(&[0, 0]), &edges, 1, &cert.points).unwrap();
        // oracle: exhaustive search over the parallelepiped's lattice points
        // for some unimodular triple confirms one exists
        let para = Polytope::from_points(&[
            rvec(&[0, 0]),
            rvec(&[1, 0]),
            rvec(&[1, 2]),
            rvec(&[2, 2]),
        ])
        .unwrap();
        let pts = para.lattice_points().unwrap();
        let mut found = false;
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                for l in 0..pts.len() {
                    if i == j || j == l || i == l {
                        continue;
                    }
                    let e = IntMat::from_cols(&[
                        pts[j].iter().zip(&pts[i]).map(|(a, b)| a - b).collect(),
                        pts[l].iter().zip(&pts[i]).map(|(a, b)| a - b).collect(),
                    ]);
                    if e.det().abs().is_one() {
                        found = true;
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn wide_simplex_gets_integral_certificate() {
        // width(9 Delta_2) = 9 exceeds 2 * Flt(2) * 2 ~ 8.62
        let k = standard_simplex(2, 9);
        let cert = find_unimodular_simplex(&k, Mode::Int).unwrap().unwrap();
        assert_eq!(cert.mode, Mode::Int);
        verify_simplex(&k, &cert).unwrap();
    }

    #[test]
    fn unit_cube_uses_direct_translate() {
        for d in 1..=3usize {
            let k = unit_cube(d, 1);
            let cert = find_unimodular_simplex(&k, Mode::Int).unwrap().unwrap();
            verify_simplex(&k, &cert).unwrap();
            assert_eq!(cert.points[0], vec![Rat::zero(); d]);
        }
    }

    #[test]
    fn shifted_simplex_real_mode() {
        // (1/3, 1/3) + 5 Delta_2 has width 5 >= Flt(2) * 2 ~ 4.31
        let k = standard_simplex(2, 5).translate(&[rat(1, 3), rat(1, 3)]);
        let cert = find_unimodular_simplex(&k, Mode::Real).unwrap().unwrap();
        verify_simplex(&k, &cert).unwrap();
    }

    #[test]
    fn narrow_body_reports_not_found() {
        // width 1 in every direction is far below any threshold, and no
        // integral translate of the simplex fits in a shifted thin triangle
        let k = standard_simplex(2, 1).translate(&[rat(1, 3), rat(1, 3)]).dilate(&rat(9, 10));
        assert_eq!(find_unimodular_simplex(&k, Mode::Int).unwrap(), None);
    }

    #[test]
    fn copy_search_examples() {
        // [0,1]^2 contains the simplex at the identity
        let k = unit_cube(2, 1);
        let x = vec![rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1])];
        match contains_unimodular_copy(&k, &x, Mode::Int, 1).unwrap() {
            CopySearch::Found(map) => {
                assert_eq!(map.matrix, IntMat::identity(2));
                assert_eq!(map.translation, rvec(&[0, 0]));
            }
            other => panic!("expected identity certificate, got {other:?}"),
        }

        // a body without lattice points contains no integral copy of a point
        let k = standard_simplex(2, 1).translate(&[rat(1, 3), rat(1, 3)]);
        let x = vec![rvec(&[0, 0])];
        assert_eq!(
            contains_unimodular_copy(&k, &x, Mode::Int, 2).unwrap(),
            CopySearch::Unknown { bound: 2 }
        );

        // d = 1: K = [7/10, 13/10], X = {1/3}: width 3/5 < Flt_1({1/3}) = 2/3
        let k = Polytope::from_points(&[vec![rat(7, 10)], vec![rat(13, 10)]]).unwrap();
        let x = vec![vec![rat(1, 3)]];
        assert_eq!(
            contains_unimodular_copy(&k, &x, Mode::Int, 3).unwrap(),
            CopySearch::Unknown { bound: 3 }
        );
        // but a real copy exists
        assert!(matches!(
            contains_unimodular_copy(&k, &x, Mode::Real, 1).unwrap(),
            CopySearch::Found(_)
        ));
    }

    #[test]
    fn flt1_values() {
        assert_eq!(flt1_exact(&[rat_int(0)]).unwrap(), rat_int(1));
        assert_eq!(flt1_exact(&[rat(1, 3)]).unwrap(), rat(2, 3));
        // gaps of ({0, 1/2} U -{0, 1/2}) + Z are all 1/2
        assert_eq!(flt1_exact(&[rat_int(0), rat(1, 2)]).unwrap(), rat(1, 2));
        assert!(flt1_exact(&[]).is_err());
    }

    #[test]
    fn flt1_translation_invariance() {
        let a = flt1_exact(&[rat(1, 3), rat(2, 5)]).unwrap();
        let b = flt1_exact(&[rat(1, 3) + rat_int(4), rat(2, 5) - rat_int(7)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn simplex_dilate_examples() {
        // t * Delta_d: R = t with the identity
        let (r, map) = largest_simplex_dilate(&standard_simplex(2, 4)).unwrap();
        assert_eq!(r, rat_int(4));
        assert_eq!(map.matrix, IntMat::identity(2));

        // box [0,3] x [0,5]: width 3 caps R at 3, attained by the identity
        let rect = unit_cube(1, 3).product(&unit_cube(1, 5));
        let (r, _) = largest_simplex_dilate(&rect).unwrap();
        assert_eq!(r, rat_int(3));

        // Hirzebruch 4-gon (x=2, y=7, a=2) contains 2 Delta_2
        let h = poly_from_int_points(&[vec![0, 0], vec![2, 0], vec![0, 7], vec![2, 3]]).unwrap();
        let (r, _) = largest_simplex_dilate(&h).unwrap();
        assert!(r >= rat_int(2));
    }

    #[test]
    fn cube_lemma_construction() {
        // plant a real copy of X + [0,1]^2 inside K and descend
        let x = vec![rvec(&[0, 0]), rvec(&[1, 1])];
        let cube_pts: Vec<RatVec> =
            vec![rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[1, 1])];
        let mut xc: Vec<RatVec> = Vec::new();
        for p in &x {
            for q in &cube_pts {
                xc.push(add_vec(p, q));
            }
        }
        let k = unit_cube(2, 4).translate(&[rat(1, 3), rat(2, 7)]);
        let search = contains_unimodular_copy(&k, &xc, Mode::Real, 1).unwrap();
        let CopySearch::Found(real_map) = search else {
            panic!("real copy must exist");
        };
        let int_map = cube_lemma_descend(&k, &x, &real_map).unwrap();
        assert_eq!(int_map.mode(), Mode::Int);
        verify_copy(&k, &x, &int_map).unwrap();
    }
}
