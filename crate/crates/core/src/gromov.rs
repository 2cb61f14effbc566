//! Polytope-side bounds for the Gromov width of toric manifolds: the Delzant
//! test, Lu's upper bounds Λ and Υ, diamond lower-bound certificates, and a
//! combined report.
//!
//! Υ equals the facet width for Delzant polytopes, which in turn equals the
//! lattice width; the report therefore brackets the Gromov width between the
//! best embedded simplex/diamond size and Λ, with the lattice width labelled
//! as the conjectural upper bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flatness::{largest_simplex_dilate, unimodular_candidates};
use crate::lp::{solve_lp, Constraint, Relation};
use crate::matrix::{IntMat, IntVec};
use crate::polytope::{enumerate_subsets, Polytope, UnimodularMap};
use crate::rat::{add_vec, dot_int_rat, from_int_vec, scale_vec, sub_vec, Rat, RatVec};
use crate::width::{facet_width, lattice_width, WidthCertificate};

/// A polytope is Delzant when every vertex lies on exactly d facets whose
/// primitive normals form a matrix of determinant +-1.
pub fn is_delzant(p: &Polytope) -> bool {
    let d = p.dim();
    (0..p.vertices().len()).all(|i| {
        let active = p.vertex_facets(i);
        if active.len() != d {
            return false;
        }
        let cols: Vec<IntVec> =
            active.iter().map(|&k| p.halfspaces()[k].normal.clone()).collect();
        IntMat::from_cols(&cols).det().abs().is_one()
    })
}

/// A facet-normal relation: nonnegative integer multiplicities `a_k` with
/// `sum a_k u_k = 0`; its value is `sum a_k phi_k` (translation invariant).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalRelation {
    pub multiplicities: Vec<u32>,
    pub value: Rat,
}

fn relations_up_to(p: &Polytope, total: u32) -> Vec<NormalRelation> {
    let m = p.halfspaces().len();
    let d = p.dim();
    // fast path in machine integers; fall back to exact big integers when a
    // normal entry does not fit (multiplicities stay <= total, so i64 sums
    // cannot overflow for entries below 2^57 / total)
    let limit = i64::MAX / (total.max(1) as i64 * m.max(1) as i64);
    let normals_i64: Option<Vec<Vec<i64>>> = p
        .halfspaces()
        .iter()
        .map(|h| {
            h.normal
                .iter()
                .map(|x| i64::try_from(x).ok().filter(|v| v.abs() < limit))
                .collect()
        })
        .collect();
    let normals_big: Vec<&IntVec> = p.halfspaces().iter().map(|h| &h.normal).collect();

    let mut out = Vec::new();
    let mut a = vec![0u32; m];
    let mut emit = |a: &[u32]| {
        let zero_sum = match &normals_i64 {
            Some(normals) => (0..d).all(|j| {
                a.iter()
                    .zip(normals)
                    .map(|(&ai, u)| ai as i64 * u[j])
                    .sum::<i64>()
                    == 0
            }),
            None => (0..d).all(|j| {
                a.iter()
                    .zip(&normals_big)
                    .map(|(&ai, u)| BigInt::from(ai) * &u[j])
                    .sum::<BigInt>()
                    .is_zero()
            }),
        };
        if zero_sum {
            let value: Rat = a
                .iter()
                .zip(p.halfspaces())
                .map(|(&ai, h)| Rat::from_integer(BigInt::from(ai)) * &h.offset)
                .sum();
            out.push(NormalRelation { multiplicities: a.to_vec(), value });
        }
    };
    fn rec(k: usize, m: usize, remaining: u32, a: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
        if k == m {
            if a.iter().any(|&x| x > 0) {
                emit(a);
            }
            return;
        }
        for v in 0..=remaining {
            a[k] = v;
            rec(k + 1, m, remaining - v, a, emit);
        }
        a[k] = 0;
    }
    rec(0, m, total, &mut a, &mut emit);
    out
}

/// Lu's Λ: the maximum value over relations with total multiplicity at most
/// d+1. Any nonzero relation has positive value on a bounded polytope, so no
/// sign filtering is needed.
pub fn lu_lambda(p: &Polytope) -> Result<NormalRelation> {
    if !is_delzant(p) {
        return Err(Error::NotDelzant);
    }
    let d = p.dim() as u32;
    let rels = relations_up_to(p, d + 1);
    rels.into_iter()
        .max_by(|a, b| a.value.cmp(&b.value))
        .ok_or(Error::NoPositiveRelation)
}

pub const DEFAULT_UPSILON_CROSSCHECK: u32 = 4;

/// Lu's Υ: the minimum value over all relations, which for Delzant polytopes
/// equals the facet width. A bounded enumeration cross-checks that no
/// smaller positive relation value exists.
pub fn lu_upsilon(p: &Polytope) -> Result<Rat> {
    lu_upsilon_with_crosscheck(p, DEFAULT_UPSILON_CROSSCHECK)
}

pub fn lu_upsilon_with_crosscheck(p: &Polytope, budget: u32) -> Result<Rat> {
    if !is_delzant(p) {
        return Err(Error::NotDelzant);
    }
    let (fw, _) = facet_width(p);
    for rel in relations_up_to(p, budget) {
        if rel.value < fw {
            return Err(Error::InvalidCertificate(format!(
                "relation {:?} undercuts the facet width",
                rel.multiplicities
            )));
        }
    }
    Ok(fw)
}

/// A diamond certificate: lattice basis `b_i`, center `x`, reaches `k_i`,
/// `l_i` with `k_i + l_i = a`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiamondSpec {
    pub basis: IntMat,
    pub center: RatVec,
    pub k: RatVec,
    pub l: RatVec,
    pub size: Rat,
}

impl DiamondSpec {
    /// The 2d generator points `x + k_i b_i` and `x - l_i b_i`.
    pub fn generator_points(&self) -> Vec<RatVec> {
        let d = self.center.len();
        let mut pts = Vec::with_capacity(2 * d);
        for i in 0..d {
            let b = from_int_vec(&self.basis.col(i));
            pts.push(add_vec(&self.center, &scale_vec(&self.k[i], &b)));
            pts.push(sub_vec(&self.center, &scale_vec(&self.l[i], &b)));
        }
        pts
    }
}

/// Structural and membership verification of a diamond inside `p`.
pub fn verify_diamond(p: &Polytope, spec: &DiamondSpec) -> Result<()> {
    if !spec.basis.is_unimodular() {
        return Err(Error::InvalidCertificate("diamond basis is not unimodular".into()));
    }
    let d = p.dim();
    if spec.k.len() != d || spec.l.len() != d {
        return Err(Error::InvalidCertificate("diamond has wrong arity".into()));
    }
    for i in 0..d {
        if spec.k[i].is_negative() || spec.l[i].is_negative() {
            return Err(Error::InvalidCertificate("negative reach".into()));
        }
        if &spec.k[i] + &spec.l[i] != spec.size {
            return Err(Error::InvalidCertificate("k_i + l_i != size".into()));
        }
    }
    for (i, pt) in spec.generator_points().iter().enumerate() {
        if !p.contains(pt) {
            return Err(Error::InvalidCertificate(format!(
                "diamond generator {i} outside the polytope"
            )));
        }
    }
    Ok(())
}

pub const DEFAULT_DIAMOND_MATRIX_BOUND: i64 = 1;

/// Largest diamond found over a deterministic basis family: edge-direction
/// bases at every vertex plus all unimodular matrices with entries up to
/// `matrix_bound`. One LP per basis; a sound lower bound for the Gromov
/// width, not claimed optimal.
pub fn largest_diamond(p: &Polytope, matrix_bound: i64) -> Result<DiamondSpec> {
    let d = p.dim();
    let mut bases: Vec<IntMat> = Vec::new();
    for i in 0..p.vertices().len() {
        let dirs = p.edge_directions(i);
        if dirs.len() < d {
            continue;
        }
        let mut buf = vec![0usize; d];
        let dirs_ref = &dirs;
        let list = &mut bases;
        enumerate_subsets(dirs_ref.len(), d, &mut buf, &mut |sel| {
            let cols: Vec<IntVec> = sel.iter().map(|&j| dirs_ref[j].clone()).collect();
            let m = IntMat::from_cols(&cols);
            if m.is_unimodular() {
                list.push(m);
            }
        });
    }
    bases.extend(unimodular_candidates(d, matrix_bound)?);
    // a diamond is unchanged by negating a basis vector (swaps k_i and l_i)
    // or permuting them, so dedupe bases up to signed column permutation
    let mut seen = std::collections::HashSet::new();
    bases.retain(|b| {
        let mut cols: Vec<Vec<String>> = (0..d)
            .map(|j| {
                let col = b.col(j);
                let flip = col
                    .iter()
                    .find(|x| !x.is_zero())
                    .map(|x| x.is_negative())
                    .unwrap_or(false);
                col.iter()
                    .map(|x| if flip { (-x).to_string() } else { x.to_string() })
                    .collect()
            })
            .collect();
        cols.sort();
        seen.insert(cols)
    });

    let mut best: Option<DiamondSpec> = None;
    for basis in bases {
        // vars: (x_1..x_d, k_1..k_d, l_1..l_d, a)
        let nvars = 3 * d + 1;
        let mut cons: Vec<Constraint> = Vec::new();
        for i in 0..d {
            let mut row = vec![Rat::zero(); nvars];
            row[d + i] = Rat::one();
            cons.push(Constraint::new(row.clone(), Relation::Ge, Rat::zero()));
            let mut row = vec![Rat::zero(); nvars];
            row[2 * d + i] = Rat::one();
            cons.push(Constraint::new(row, Relation::Ge, Rat::zero()));
            let mut row = vec![Rat::zero(); nvars];
            row[d + i] = Rat::one();
            row[2 * d + i] = Rat::one();
            row[3 * d] = -Rat::one();
            cons.push(Constraint::new(row, Relation::Eq, Rat::zero()));
        }
        for h in p.halfspaces() {
            for i in 0..d {
                let ub = dot_int_rat(&h.normal, &from_int_vec(&basis.col(i)));
                // <u, x> + k_i <u, b_i> >= -phi
                let mut row = vec![Rat::zero(); nvars];
                for (j, c) in h.normal.iter().enumerate() {
                    row[j] = Rat::from_integer(c.clone());
                }
                row[d + i] = ub.clone();
                cons.push(Constraint::new(row, Relation::Ge, -h.offset.clone()));
                // <u, x> - l_i <u, b_i> >= -phi
                let mut row = vec![Rat::zero(); nvars];
                for (j, c) in h.normal.iter().enumerate() {
                    row[j] = Rat::from_integer(c.clone());
                }
                row[2 * d + i] = -ub;
                cons.push(Constraint::new(row, Relation::Ge, -h.offset.clone()));
            }
        }
        let mut obj = vec![Rat::zero(); nvars];
        obj[3 * d] = Rat::one();
        let Some((a_val, point)) = solve_lp(&obj, &cons).optimal().map(|(a, p)| (a.clone(), p.clone()))
        else {
            continue;
        };
        if best.as_ref().is_none_or(|b| a_val > b.size) {
            let spec = DiamondSpec {
                basis: basis.clone(),
                center: point[..d].to_vec(),
                k: point[d..2 * d].to_vec(),
                l: point[2 * d..3 * d].to_vec(),
                size: a_val,
            };
            verify_diamond(p, &spec)?;
            best = Some(spec);
        }
    }
    best.ok_or(Error::NoPositiveRelation)
}

/// Combined report: certified lower bound (best of simplex dilate and
/// diamond), Lu's Λ upper bound for Delzant inputs, and the lattice width as
/// the conjectural upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GromovReport {
    pub lower_bound: Rat,
    pub simplex_dilate: Rat,
    pub simplex_map: UnimodularMap,
    pub diamond: DiamondSpec,
    /// Λ; absent for non-Delzant inputs (upper bounds omitted)
    pub lambda_upper: Option<Rat>,
    /// Υ = facet width; absent for non-Delzant inputs
    pub upsilon: Option<Rat>,
    /// conjectural upper bound: the lattice width
    pub lattice_width: WidthCertificate,
    pub delzant: bool,
}

pub fn gromov_bounds(p: &Polytope) -> Result<GromovReport> {
    let d = p.dim();
    let width = lattice_width(p)?;
    let (r, map) = largest_simplex_dilate(p)?;
    let bound = if d <= 2 { 2 } else { DEFAULT_DIAMOND_MATRIX_BOUND };
    let diamond = largest_diamond(p, bound)?;
    let lower = if diamond.size > r { diamond.size.clone() } else { r.clone() };
    let delzant = is_delzant(p);
    let (lambda, upsilon) = if delzant {
        (Some(lu_lambda(p)?.value), Some(lu_upsilon(p)?))
    } else {
        (None, None)
    };
    Ok(GromovReport {
        lower_bound: lower,
        simplex_dilate: r,
        simplex_map: map,
        diamond,
        lambda_upper: lambda,
        upsilon,
        lattice_width: width,
        delzant,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolygonClass {
    TwoSimplexEquivalent,
    /// unimodular image of conv((0,0),(1,0),(0,y),(1,y-a)) with y >= a >= 0
    Trapezoid { y: BigInt, a: BigInt },
    HasInteriorPoint,
}

/// Classification of Delzant lattice polygons by interior lattice points:
/// either there is one, or the polygon is a copy of 2Δ₂, or of a width-1
/// trapezoid.
pub fn delzant_polygon_classify(p: &Polytope) -> Result<PolygonClass> {
    if p.dim() != 2 {
        return Err(Error::WrongDimension { expected: 2, got: p.dim() });
    }
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    if !is_delzant(p) {
        return Err(Error::NotDelzant);
    }
    if !p.interior_lattice_points()?.is_empty() {
        return Ok(PolygonClass::HasInteriorPoint);
    }
    let width = lattice_width(p)?;
    if width.value == crate::rat::rat_int(2) {
        // must be a copy of 2Δ₂: normalize a vertex cone to the standard one
        if normalize_to_two_simplex(p) {
            return Ok(PolygonClass::TwoSimplexEquivalent);
        }
        return Err(Error::InvalidCertificate(
            "width-2 hollow Delzant polygon failed 2Δ₂ normalization".into(),
        ));
    }
    debug_assert_eq!(width.value, Rat::one());
    let (y, a) = normalize_trapezoid(p, &width.direction)?;
    Ok(PolygonClass::Trapezoid { y, a })
}

fn normalize_to_two_simplex(p: &Polytope) -> bool {
    let target: Vec<RatVec> =
        vec![crate::rat::rvec(&[0, 0]), crate::rat::rvec(&[0, 2]), crate::rat::rvec(&[2, 0])];
    for i in 0..p.vertices().len() {
        let dirs = p.edge_directions(i);
        if dirs.len() != 2 {
            return false;
        }
        for (w1, w2) in [(&dirs[0], &dirs[1]), (&dirs[1], &dirs[0])] {
            let m = IntMat::from_cols(&[w1.clone(), w2.clone()]);
            if !m.is_unimodular() {
                continue;
            }
            let minv = m.unimodular_inverse();
            let v = p.vertices()[i].clone();
            let mut imgs: Vec<RatVec> = p
                .vertices()
                .iter()
                .map(|q| minv.mul_rat_vec(&sub_vec(q, &v)))
                .collect();
            imgs.sort();
            if imgs == target {
                return true;
            }
        }
    }
    false
}

/// Normalize a width-1 Delzant lattice polygon to the canonical trapezoid
/// and read off (y, a): the width direction becomes the first coordinate,
/// the column at x = 0 becomes [0, y], and the column at x = 1 becomes
/// [0, y - a] after an integral shear (flipping x if needed so y >= a >= 0).
fn normalize_trapezoid(p: &Polytope, u: &[BigInt]) -> Result<(BigInt, BigInt)> {
    let t = crate::matrix::unimodular_with_last_row(u)?;
    // move the functional to the first coordinate
    let d = 2usize;
    let mut perm = IntMat::zero(d, d);
    perm[(0, 1)] = BigInt::one();
    perm[(1, 0)] = BigInt::one();
    let t = perm.mul(&t);
    let imgs: Vec<RatVec> = p.vertices().iter().map(|v| t.mul_rat_vec(v)).collect();
    let xmin = imgs.iter().map(|v| v[0].clone()).min().unwrap();
    let col0: Vec<Rat> =
        imgs.iter().filter(|v| v[0] == xmin).map(|v| v[1].clone()).collect();
    let col1: Vec<Rat> = imgs
        .iter()
        .filter(|v| &v[0] - &xmin == Rat::one())
        .map(|v| v[1].clone())
        .collect();
    if col0.is_empty() || col1.is_empty() {
        return Err(Error::InvalidCertificate("trapezoid normalization failed".into()));
    }
    let h0 = col0.iter().max().unwrap() - col0.iter().min().unwrap();
    let h1 = col1.iter().max().unwrap() - col1.iter().min().unwrap();
    let (hi, lo) = if h0 >= h1 { (h0, h1) } else { (h1, h0) };
    let y = hi.to_integer();
    let a = (&hi - &lo).to_integer();
    Ok((y, a))
}
