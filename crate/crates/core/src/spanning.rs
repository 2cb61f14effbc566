//! Affine-lattice computations on the lattice points of a polytope: the
//! spanning test, generating subsets of dimension-bounded size (by the width
//! induction), and the exact spanning and Caratheodory spanning ranks for
//! small instances.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flatness::{find_unimodular_simplex, simplex_width_threshold};
use crate::matrix::{
    col_lattice_hnf, in_column_lattice, int_vec_rank, saturation_basis, snf,
    unimodular_with_last_row, IntMat, IntVec,
};
use crate::polytope::{enumerate_subsets, integral_vertices, Mode, Polytope};
use crate::rat::{from_int_vec, to_int_vec, Rat};

pub const DEFAULT_SR_POINT_BUDGET: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    /// the difference lattice does not have full rank
    Infinite,
}

/// Affine lattice `base + Z-span(basis columns)` with the basis in canonical
/// (column-span) Hermite form.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineLattice {
    pub base: IntVec,
    pub basis: IntMat,
    pub index: LatticeIndex,
}

impl AffineLattice {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn contains(&self, z: &[BigInt]) -> bool {
        let diff: IntVec = z.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        if self.basis.cols() == 0 {
            return diff.iter().all(|x| x.is_zero());
        }
        in_column_lattice(&self.basis, &diff)
    }

    /// Equality as point sets: same canonical difference lattice and bases in
    /// the same coset.
    pub fn same_lattice(&self, other: &AffineLattice) -> bool {
        self.basis == other.basis && self.contains(&other.base)
    }
}

/// Affine lattice spanned by a nonempty set of integer points: base is the
/// lexicographically smallest point, the basis is the Hermite form of the
/// difference lattice, and the index comes from the Smith normal form.
pub fn affine_lattice_of_points(points: &[IntVec]) -> AffineLattice {
    assert!(!points.is_empty(), "empty point set");
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let base = pts[0].clone();
    let d = base.len();
    let diffs: Vec<IntVec> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        return AffineLattice { base, basis: IntMat::zero(d, 0), index: LatticeIndex::Infinite };
    }
    let basis = crate::matrix::col_lattice_hnf_incremental(&diffs);
    let index = if basis.cols() == d {
        let (s, _, _) = snf(&basis);
        let mut prod = BigInt::one();
        for i in 0..d {
            prod *= &s[(i, i)];
        }
        LatticeIndex::Finite(prod.abs())
    } else {
        LatticeIndex::Infinite
    };
    AffineLattice { base, basis, index }
}

/// Does the polytope's lattice point set affinely generate all of `Z^d`?
pub fn is_spanning(p: &Polytope) -> Result<bool> {
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    let pts = p.lattice_points()?;
    Ok(affine_lattice_of_points(&pts).index == LatticeIndex::Finite(BigInt::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenSetMethod {
    Recursive,
    ExactMinimum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSet {
    pub points: Vec<IntVec>,
    pub method: GenSetMethod,
    /// the dimension bound C(d) the recursive output stays below
    pub bound_used: Rat,
}

/// The width induction: bodies of width at least `2 Flt(d) d` contribute the
/// d+1 points of an embedded unimodular simplex; narrow bodies are sliced
/// along a minimizing direction and the slices handled recursively. The
/// result generates the same affine lattice as all lattice points and has
/// fewer than `C(d)` elements.
pub fn generating_subset_recursive(p: &Polytope) -> Result<GenSet> {
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    let pts = p.lattice_points()?;
    let idx = gen_subset_indices(&pts)?;
    let mut points: Vec<IntVec> = idx.into_iter().map(|i| pts[i].clone()).collect();
    points.sort();
    points.dedup();
    let gs = GenSet { points, method: GenSetMethod::Recursive, bound_used: size_bound_c(p.dim()) };
    debug_assert!(verify_genset_against_points(&gs.points, &pts));
    Ok(gs)
}

pub fn verify_genset_against_points(subset: &[IntVec], all: &[IntVec]) -> bool {
    affine_lattice_of_points(subset).same_lattice(&affine_lattice_of_points(all))
}

/// Projection of a point set to lattice coordinates on its affine hull: the
/// lexicographically smallest point as base, a unimodular basis of the
/// saturated difference lattice, and each point's integer coordinates in it.
/// Returns `None` for full-dimensional (or single-point) sets.
pub fn affine_hull_coords(points: &[IntVec]) -> Option<(IntVec, IntMat, Vec<IntVec>)> {
    let n = points.len();
    if n <= 1 {
        return None;
    }
    let dim = points[0].len();
    let base_idx = (0..n).min_by(|&a, &b| points[a].cmp(&points[b])).expect("nonempty");
    let diffs: Vec<IntVec> = (0..n)
        .map(|i| points[i].iter().zip(&points[base_idx]).map(|(a, b)| a - b).collect())
        .collect();
    let rank = int_vec_rank(&diffs);
    if rank == 0 || rank >= dim {
        return None;
    }
    let sat = saturation_basis(&IntMat::from_cols(&diffs));
    debug_assert_eq!(sat.cols(), rank);
    let mapped: Vec<IntVec> = diffs
        .iter()
        .map(|z| {
            let c = crate::matrix::solve_rational_rect(&sat, z)
                .expect("points lie in the saturation");
            to_int_vec(&c).expect("saturation coordinates are integral")
        })
        .collect();
    Some((points[base_idx].clone(), sat, mapped))
}

/// Core recursion on plain point sets (`points` are all lattice points of
/// their convex hull); returns indices into `points`.
fn gen_subset_indices(points: &[IntVec]) -> Result<Vec<usize>> {
    let n = points.len();
    if n <= 1 {
        return Ok((0..n).collect());
    }
    if points.iter().all(|p| p == &points[0]) {
        return Ok(vec![0]);
    }
    // lower-dimensional sets: recurse in lattice coordinates on the hull
    if let Some((_, _, mapped)) = affine_hull_coords(points) {
        return gen_subset_indices_full(&mapped);
    }
    gen_subset_indices_full(points)
}

/// Full-dimensional case of the recursion.
fn gen_subset_indices_full(points: &[IntVec]) -> Result<Vec<usize>> {
    let dim = points[0].len();
    if dim == 0 {
        return Ok(vec![0]);
    }
    let rats: Vec<crate::rat::RatVec> = points.iter().map(|z| from_int_vec(z)).collect();
    let poly = Polytope::from_points(&rats)?;
    let cert = crate::width::lattice_width(&poly)?;

    if cert.value >= simplex_width_threshold(dim, Mode::Int) {
        if let Some(simplex) = find_unimodular_simplex(&poly, Mode::Int)? {
            let mut idx = Vec::with_capacity(dim + 1);
            let mut ok = true;
            for sp in &simplex.points {
                let z = to_int_vec(sp).expect("integral certificate");
                match points.iter().position(|q| *q == z) {
                    Some(i) => idx.push(i),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(idx);
            }
        }
        // fall through to slicing; always valid
    }

    // slice along a width-minimizing direction moved to the last coordinate
    let t = unimodular_with_last_row(&cert.direction)?;
    let mut slices: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
    let mut mapped: Vec<IntVec> = Vec::with_capacity(points.len());
    for (i, z) in points.iter().enumerate() {
        let tz = t.mul_vec(z);
        slices.entry(tz[dim - 1].clone()).or_default().push(i);
        mapped.push(tz);
    }
    let mut out = Vec::new();
    for (_, members) in slices {
        let sliced: Vec<IntVec> =
            members.iter().map(|&i| mapped[i][..dim - 1].to_vec()).collect();
        let sub = gen_subset_indices(&sliced)?;
        out.extend(sub.into_iter().map(|local| members[local]));
    }
    Ok(out)
}

/// Dimension-only bound `C(d) = prod_{k=1..d} (2 Flt(k) k + 1)`, `C(0) = 2`,
/// evaluated with the tabulated upper bounds (so slightly larger and still
/// valid).
pub fn size_bound_c(d: usize) -> Rat {
    if d == 0 {
        return crate::rat::rat_int(2);
    }
    let mut prod = Rat::one();
    for k in 1..=d {
        let f = crate::flatness::flt_upper(k);
        let term = Rat::from_integer(BigInt::from(2)) * f * Rat::from_integer(BigInt::from(k as u64))
            + Rat::one();
        prod *= term;
    }
    prod
}

/// The same product as an upper bound for the maximal spanning rank in
/// dimension d.
pub fn sr_dim_bound(d: usize) -> Rat {
    size_bound_c(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningRank {
    pub value: usize,
    pub witness: Vec<IntVec>,
    /// false when the exact search was skipped for budget reasons and the
    /// value is only an upper bound from the recursive construction
    pub exact: bool,
}

/// Minimal size of a subset of the lattice points generating their affine
/// lattice, by subset search in increasing size. Exponential by design;
/// instances beyond the point budget fall back to the recursive upper bound.
pub fn spanning_rank(p: &Polytope) -> Result<SpanningRank> {
    spanning_rank_with_budget(p, DEFAULT_SR_POINT_BUDGET)
}

pub fn spanning_rank_with_budget(p: &Polytope, max_points: usize) -> Result<SpanningRank> {
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    let pts = p.lattice_points()?;
    if pts.len() > max_points {
        let gs = generating_subset_recursive(p)?;
        return Ok(SpanningRank { value: gs.points.len(), witness: gs.points, exact: false });
    }
    let d = p.dim();
    let target = affine_lattice_of_points(&pts);
    let n = pts.len();
    for k in (d + 1)..=n {
        let mut found: Option<Vec<usize>> = None;
        let mut buf = vec![0usize; k];
        enumerate_subsets(n, k, &mut buf, &mut |sel| {
            if found.is_some() {
                return;
            }
            let subset: Vec<IntVec> = sel.iter().map(|&i| pts[i].clone()).collect();
            if affine_lattice_of_points(&subset).same_lattice(&target) {
                found = Some(sel.to_vec());
            }
        });
        if let Some(sel) = found {
            let witness: Vec<IntVec> = sel.into_iter().map(|i| pts[i].clone()).collect();
            return Ok(SpanningRank { value: k, witness, exact: true });
        }
    }
    // the full set always generates itself
    Ok(SpanningRank { value: n, witness: pts, exact: true })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrOutcome {
    pub lower: usize,
    pub upper: usize,
    /// probe box used for counterexample hunting (documented, configurable)
    pub probe_box: i64,
}

impl CsrOutcome {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.upper)
    }
}

pub const DEFAULT_CSR_PROBE_BOX: i64 = 2;

/// Caratheodory spanning rank: the minimal `n` such that every element of
/// the lattice spanned by `P x {1}` is an integer combination of at most `n`
/// of its points.
///
/// Exact when the bracket closes: the lower bound comes from rank counting
/// (fewer than d+1 points span a lower-rank sublattice) plus certified
/// counterexamples (a probe element of the lattice lying in no n-subset
/// span); the upper bound is the spanning rank. A surviving gap is reported
/// as a bracket.
pub fn caratheodory_spanning_rank(p: &Polytope, probe_box: i64) -> Result<CsrOutcome> {
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    let d = p.dim();
    let pts = p.lattice_points()?;
    let homs: Vec<IntVec> = pts
        .iter()
        .map(|z| {
            let mut h = z.clone();
            h.push(BigInt::one());
            h
        })
        .collect();
    let lambda = col_lattice_hnf(&IntMat::from_cols(&homs));
    debug_assert_eq!(lambda.cols(), d + 1);

    let sr = spanning_rank(p)?;
    let upper = sr.value;
    if !sr.exact {
        return Ok(CsrOutcome { lower: upper.div_ceil(d + 1).max(1), upper, probe_box });
    }

    // probes: lattice basis elements and small combinations
    let mut probes: Vec<IntVec> = Vec::new();
    for j in 0..lambda.cols() {
        probes.push(lambda.col(j));
    }
    let mut combo = vec![-probe_box; lambda.cols()];
    'outer: loop {
        if combo.iter().any(|&c| c != 0) {
            let coeffs: IntVec = combo.iter().map(|&c| BigInt::from(c)).collect();
            probes.push(lambda.mul_vec(&coeffs));
        }
        let mut i = lambda.cols();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if combo[i] < probe_box {
                combo[i] += 1;
                for j in i + 1..lambda.cols() {
                    combo[j] = -probe_box;
                }
                break;
            }
        }
    }
    probes.sort();
    probes.dedup();

    let mut lower = d + 1; // rank argument
    'grow: while lower < upper {
        let n = lower;
        // find a probe covered by no n-subset span
        let mut counterexample = false;
        'probe: for q in &probes {
            let mut buf = vec![0usize; n];
            let mut covered = false;
            enumerate_subsets(homs.len(), n, &mut buf, &mut |sel| {
                if covered {
                    return;
                }
                let cols: Vec<IntVec> = sel.iter().map(|&i| homs[i].clone()).collect();
                let m = col_lattice_hnf(&IntMat::from_cols(&cols));
                if m.cols() > 0 && in_column_lattice(&m, q) {
                    covered = true;
                }
            });
            if !covered {
                counterexample = true;
                break 'probe;
            }
        }
        if counterexample {
            lower = n + 1;
        } else {
            break 'grow; // probes do not separate; report the bracket
        }
    }
    Ok(CsrOutcome { lower, upper, probe_box })
}

/// Index-1 test against `Z^d` for a set of integer points.
pub fn points_span_ambient(points: &[IntVec]) -> bool {
    affine_lattice_of_points(points).index == LatticeIndex::Finite(BigInt::one())
}

/// The standard empty 3-simplex of normalized volume 2.
pub fn empty_simplex_vol2() -> Polytope {
    crate::polytope::poly_from_int_points(&[
        vec![0, 0, 0],
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![1, 1, 2],
    ])
    .expect("full-dimensional")
}

/// Vertices of a lattice polytope as integer vectors.
pub fn lattice_vertices(p: &Polytope) -> Result<Vec<IntVec>> {
    integral_vertices(p)
}
