//! Named polytope families and the wide non-IDP witness verification.
//!
//! The wide family is built from `conv({(3,0,-1),(0,2,-1)} U [0,k]^3)` (times
//! a cube factor in higher dimension). For every `t >= 2` the lattice point
//! `(3t-4, 1, 1-t)` lies in `t P` but is not a sum of `t` lattice points of
//! `P`; membership in the sum set is decided twice, by direct dynamic
//! programming over sum sets and by the slice reduction to
//! `(t-1)-fold {(3,0),(0,2)} sums + {0..k}^2`, and the two must agree.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::polytope::{int_point, lattice_points_i64, poly_from_int_points, unit_cube, Polytope};
use crate::rat::rat_int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cube { d: usize, k: i64 },
    StandardSimplex { d: usize, scale: i64 },
    CrossPolytope { d: usize },
    WideNonIdp { d: usize, k: i64 },
    EmptySimplexVol2,
    Hirzebruch { x: i64, y: i64, a: i64 },
    WideTriangle { k: i64 },
    Gw1Diamond,
}

impl Family {
    /// Parses a family from its CLI name and `key=value` parameters.
    pub fn parse(name: &str, params: &BTreeMap<String, i64>) -> Result<Family> {
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::ParameterOutOfRange(format!("missing parameter {key}")))
        };
        let fam = match name {
            "cube" => Family::Cube { d: get("d")? as usize, k: get("k")? },
            "standard_simplex" => Family::StandardSimplex {
                d: get("d")? as usize,
                scale: params.get("scale").copied().unwrap_or(1),
            },
            "crosspolytope" => Family::CrossPolytope { d: get("d")? as usize },
            "wide_nonidp" => Family::WideNonIdp { d: get("d")? as usize, k: get("k")? },
            "empty_simplex_vol2" => Family::EmptySimplexVol2,
            "hirzebruch" => Family::Hirzebruch { x: get("x")?, y: get("y")?, a: get("a")? },
            "wide_triangle" => Family::WideTriangle { k: get("k")? },
            "gw1_diamond" => Family::Gw1Diamond,
            other => {
                return Err(Error::ParameterOutOfRange(format!("unknown family {other:?}")))
            }
        };
        Ok(fam)
    }

    pub fn build(&self) -> Result<Polytope> {
        match self {
            Family::Cube { d, k } => {
                check(*d >= 1 && *k >= 1, "cube needs d >= 1, k >= 1")?;
                Ok(unit_cube(*d, *k))
            }
            Family::StandardSimplex { d, scale } => {
                check(*d >= 1 && *scale >= 1, "simplex needs d >= 1, scale >= 1")?;
                Ok(crate::polytope::standard_simplex(*d, *scale))
            }
            Family::CrossPolytope { d } => {
                check(*d >= 1, "crosspolytope needs d >= 1")?;
                let mut pts = Vec::new();
                for i in 0..*d {
                    for s in [1i64, -1] {
                        let mut v = vec![0i64; *d];
                        v[i] = s;
                        pts.push(v);
                    }
                }
                poly_from_int_points(&pts)
            }
            Family::WideNonIdp { d, k } => {
                check(*d >= 3, "wide_nonidp needs d >= 3")?;
                check(*k >= 3, "wide_nonidp needs k >= 3")?;
                let base = wide_nonidp_3d(*k)?;
                if *d == 3 {
                    Ok(base)
                } else {
                    Ok(base.product(&unit_cube(*d - 3, *k)))
                }
            }
            Family::EmptySimplexVol2 => Ok(crate::spanning::empty_simplex_vol2()),
            Family::Hirzebruch { x, y, a } => {
                check(*x > 0 && *a > 0 && *y > a * x, "hirzebruch needs y > a*x > 0")?;
                poly_from_int_points(&[
                    vec![0, 0],
                    vec![*x, 0],
                    vec![0, *y],
                    vec![*x, *y - *a * *x],
                ])
            }
            Family::WideTriangle { k } => {
                check(*k >= 1, "wide_triangle needs k >= 1")?;
                poly_from_int_points(&[vec![0, 0], vec![*k, -1], vec![*k + 1, 1]])
            }
            Family::Gw1Diamond => {
                poly_from_int_points(&[vec![1, 0], vec![1, 2], vec![2, 1], vec![0, 1]])
            }
        }
    }
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(msg.into()))
    }
}

fn wide_nonidp_3d(k: i64) -> Result<Polytope> {
    let mut pts = vec![vec![3, 0, -1], vec![0, 2, -1]];
    for mask in 0..8i64 {
        pts.push(vec![
            if mask & 1 == 1 { k } else { 0 },
            if mask & 2 == 2 { k } else { 0 },
            if mask & 4 == 4 { k } else { 0 },
        ]);
    }
    poly_from_int_points(&pts)
}

/// Recognizes a polytope as `wide_nonidp(d, k)` (exact vertex match, not up
/// to unimodular equivalence).
pub fn match_wide_nonidp(p: &Polytope) -> Option<(usize, i64)> {
    let d = p.dim();
    if d < 3 {
        return None;
    }
    let k = p
        .vertices()
        .iter()
        .flat_map(|v| v.iter())
        .max()?
        .to_integer();
    let k = i64::try_from(&k).ok()?;
    if k < 3 {
        return None;
    }
    let family = Family::WideNonIdp { d, k }.build().ok()?;
    (family == *p).then_some((d, k))
}

/// The explicit convex combination certifying `(3t-4, 1)` inside the
/// hull of the slice sum set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceCombination {
    pub q1: Vec<i64>,
    pub q2: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub witness: Vec<i64>,
    pub in_dilate: bool,
    pub in_sumset: bool,
    pub methods_agree: Option<bool>,
    pub combination: Option<SliceCombination>,
    /// true when the witness separates `t P` from the t-fold sum set
    pub witness_found: bool,
}

/// Verifies the wide-family witness `(3t-4, 1, 1-t, 0, ..., 0)`, or falls
/// back to the generic gap search for other lattice polytopes (reporting the
/// lexicographically first gap point, if any).
pub fn idp_witness_check(p: &Polytope, t: i64) -> Result<WitnessReport> {
    if t < 2 {
        return Err(Error::ParameterOutOfRange("witness check needs t >= 2".into()));
    }
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    if let Some((d, k)) = match_wide_nonidp(p) {
        return wide_witness_check(d, k, t);
    }
    let gaps = generic_idp_gap(p, t)?;
    match gaps.first() {
        Some(g) => Ok(WitnessReport {
            witness: g.clone(),
            in_dilate: true,
            in_sumset: false,
            methods_agree: None,
            combination: None,
            witness_found: true,
        }),
        None => Ok(WitnessReport {
            witness: vec![],
            in_dilate: false,
            in_sumset: false,
            methods_agree: None,
            combination: None,
            witness_found: false,
        }),
    }
}

fn wide_witness_check(d: usize, k: i64, t: i64) -> Result<WitnessReport> {
    let base = wide_nonidp_3d(k)?;
    let mut witness = vec![3 * t - 4, 1, 1 - t];
    witness.extend(std::iter::repeat_n(0, d - 3));

    // membership in t P: exact halfspace check on the dilate (the product
    // factors contribute 0, a sum of t zeros)
    let full = Family::WideNonIdp { d, k }.build()?;
    let dilated = full.dilate(&rat_int(t));
    let in_dilate = dilated.contains_int(&int_point(&witness));

    // explicit convex combination: (3t-4, 1) is the midpoint of
    // q1 = (t-1)(3,0) and q2 = (t-2)(3,0) + (0,2) + (1,0)
    let q1 = vec![3 * (t - 1), 0];
    let q2 = vec![3 * (t - 2) + 1, 2];
    assert_eq!(q1[0] + q2[0], 2 * (3 * t - 4));
    assert_eq!(q1[1] + q2[1], 2);
    let combination = Some(SliceCombination { q1: q1.clone(), q2: q2.clone() });

    // direct DP on the 3-dimensional factor
    let z1 = lattice_points_i64(&base)?;
    let zt = sumset_iterate(&z1, t as usize)?;
    let slice_direct: HashSet<Vec<i64>> = zt
        .iter()
        .filter(|z| z[2] == 1 - t)
        .map(|z| vec![z[0], z[1]])
        .collect();

    // slice reduction: (t-1)-fold {(3,0),(0,2)} sums + {0..k}^2
    let mut gens: HashSet<Vec<i64>> = HashSet::new();
    gens.insert(vec![0, 0]);
    for _ in 0..(t - 1) {
        let mut next = HashSet::new();
        for g in &gens {
            next.insert(vec![g[0] + 3, g[1]]);
            next.insert(vec![g[0], g[1] + 2]);
        }
        gens = next;
    }
    let mut slice_reduced: HashSet<Vec<i64>> = HashSet::new();
    for g in &gens {
        for x in 0..=k {
            for y in 0..=k {
                slice_reduced.insert(vec![g[0] + x, g[1] + y]);
            }
        }
    }
    let methods_agree = slice_direct == slice_reduced;

    let p2 = vec![witness[0], witness[1]];
    let in_slice = slice_direct.contains(&p2);
    debug_assert_eq!(in_slice, slice_reduced.contains(&p2));
    // the witness lies in the sum set of the product iff its 3d part lies in
    // the base sum set (the cube factor absorbs the zero coordinates)
    let in_sumset = in_slice;

    Ok(WitnessReport {
        witness,
        in_dilate,
        in_sumset,
        methods_agree: Some(methods_agree),
        combination,
        witness_found: in_dilate && !in_sumset,
    })
}

pub const DEFAULT_DP_BUDGET: u64 = 4_000_000;

/// All lattice points of `t P` that are not sums of `t` lattice points of
/// `P`, in lexicographic order, by iterated sum sets.
pub fn generic_idp_gap(p: &Polytope, t: i64) -> Result<Vec<Vec<i64>>> {
    generic_idp_gap_with_budget(p, t, DEFAULT_DP_BUDGET)
}

pub fn generic_idp_gap_with_budget(p: &Polytope, t: i64, budget: u64) -> Result<Vec<Vec<i64>>> {
    if t < 1 {
        return Err(Error::ParameterOutOfRange("gap search needs t >= 1".into()));
    }
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticePolytope);
    }
    let z1 = lattice_points_i64(p)?;
    let need = (z1.len() as u64).saturating_mul(z1.len() as u64);
    if need > budget {
        return Err(Error::BudgetExceeded { budget, required: need });
    }
    let sums = sumset_iterate(&z1, t as usize)?;
    let dil = p.dilate(&rat_int(t));
    let mut gaps: Vec<Vec<i64>> = lattice_points_i64(&dil)?
        .into_iter()
        .filter(|z| !sums.contains(z))
        .collect();
    gaps.sort();
    Ok(gaps)
}

fn sumset_iterate(z1: &[Vec<i64>], t: usize) -> Result<HashSet<Vec<i64>>> {
    let mut acc: HashSet<Vec<i64>> = z1.iter().cloned().collect();
    for _ in 1..t {
        let mut next: HashSet<Vec<i64>> =
            HashSet::with_capacity(acc.len().saturating_mul(2));
        for s in &acc {
            for z in z1 {
                let mut sum = s.clone();
                for (a, b) in sum.iter_mut().zip(z) {
                    *a = a.checked_add(*b).ok_or(Error::Overflow)?;
                }
                next.insert(sum);
            }
        }
        acc = next;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::standard_simplex;
    use crate::width::lattice_width;

    #[test]
    fn build_basic_families() {
        let s = Family::StandardSimplex { d: 3, scale: 1 }.build().unwrap();
        assert_eq!(s.vertices().len(), 4);

        let c = Family::CrossPolytope { d: 3 }.build().unwrap();
        assert_eq!(c.vertices().len(), 6);

        let t = Family::WideTriangle { k: 3 }.build().unwrap();
        let mut vs: Vec<Vec<i64>> = t
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x.numer()).unwrap()).collect())
            .collect();
        vs.sort();
        assert_eq!(vs, vec![vec![0, 0], vec![3, -1], vec![4, 1]]);

        assert!(Family::WideNonIdp { d: 3, k: 2 }.build().is_err());
        assert!(Family::Hirzebruch { x: 2, y: 3, a: 2 }.build().is_err());
    }

    /// Independent facet counter: every plane through a vertex triple,
    /// integer cross products, supporting-side test, contact-dimension test.
    /// Shares nothing with the hull implementation.
    fn brute_facet_count(vertices: &[[i64; 3]]) -> usize {
        let sub = |a: [i64; 3], b: [i64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        let cross = |a: [i64; 3], b: [i64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let dot = |a: [i64; 3], b: [i64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let gcd3 = |a: [i64; 3]| {
            let g = num_integer::gcd(num_integer::gcd(a[0].abs(), a[1].abs()), a[2].abs());
            if g == 0 {
                1
            } else {
                g
            }
        };
        let n = vertices.len();
        let mut planes = std::collections::HashSet::new();
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let nrm = cross(sub(vertices[j], vertices[i]), sub(vertices[l], vertices[i]));
                    if nrm == [0, 0, 0] {
                        continue;
                    }
                    let g = gcd3(nrm);
                    let mut nrm = [nrm[0] / g, nrm[1] / g, nrm[2] / g];
                    let mut c = dot(nrm, vertices[i]);
                    let above = vertices.iter().any(|&v| dot(nrm, v) > c);
                    let below = vertices.iter().any(|&v| dot(nrm, v) < c);
                    if above && below {
                        continue;
                    }
                    if above {
                        nrm = [-nrm[0], -nrm[1], -nrm[2]];
                        c = -c;
                    }
                    let contact: Vec<[i64; 3]> =
                        vertices.iter().copied().filter(|&v| dot(nrm, v) == c).collect();
                    // 2-dimensional contact: some triple spans a nonzero cross
                    let two_dim = contact.len() >= 3
                        && contact.iter().skip(1).any(|&v| {
                            contact.iter().skip(1).any(|&w| {
                                cross(sub(v, contact[0]), sub(w, contact[0])) != [0, 0, 0]
                            })
                        });
                    if two_dim {
                        planes.insert((nrm, c));
                    }
                }
            }
        }
        planes.len()
    }

    #[test]
    fn wide_family_shape() {
        // facet counts frozen from the independent brute-force plane oracle:
        // 9 facets for k >= 4; at k = 3 the side plane through (3,0,-1)
        // merges with x = k, giving 8
        // at k = 3 the cube corner (3,0,0) falls onto the edge from
        // (3,0,-1) up the x = 3 face, so one vertex disappears
        for (k, expected_vertices) in [(3i64, 9usize), (5, 10)] {
            let verts: Vec<[i64; 3]> = {
                let mut v = vec![[3, 0, -1], [0, 2, -1]];
                for mask in 0..8i64 {
                    v.push([
                        if mask & 1 == 1 { k } else { 0 },
                        if mask & 2 == 2 { k } else { 0 },
                        if mask & 4 == 4 { k } else { 0 },
                    ]);
                }
                v
            };
            let oracle = brute_facet_count(&verts);
            let p = Family::WideNonIdp { d: 3, k }.build().unwrap();
            assert_eq!(p.halfspaces().len(), oracle, "k={k}");
            assert_eq!(p.vertices().len(), expected_vertices, "k={k}");
        }
        let p5 = Family::WideNonIdp { d: 3, k: 5 }.build().unwrap();
        assert_eq!(p5.halfspaces().len(), 9);
        let p3 = Family::WideNonIdp { d: 3, k: 3 }.build().unwrap();
        assert_eq!(p3.halfspaces().len(), 8);
    }

    #[test]
    fn wide_family_lattice_structure() {
        let p = Family::WideNonIdp { d: 3, k: 3 }.build().unwrap();
        let pts = p.lattice_points().unwrap();
        assert!(pts.contains(&int_point(&[3, 0, -1])));
        assert!(pts.contains(&int_point(&[0, 2, -1])));
        for x in 0..=3i64 {
            for y in 0..=3 {
                for z in 0..=3 {
                    assert!(pts.contains(&int_point(&[x, y, z])));
                }
            }
        }
        let mut lasts: Vec<i64> = pts
            .iter()
            .map(|z| i64::try_from(&z[2]).unwrap())
            .collect();
        lasts.sort();
        lasts.dedup();
        assert_eq!(lasts, vec![-1, 0, 1, 2, 3]);
    }

    #[test]
    fn wide_family_width_is_k() {
        for k in [3i64, 5] {
            let p = Family::WideNonIdp { d: 3, k }.build().unwrap();
            assert_eq!(lattice_width(&p).unwrap().value, rat_int(k));
        }
        // the cube factor keeps the width at k in dimension 4
        for k in [3i64, 4] {
            let p = Family::WideNonIdp { d: 4, k }.build().unwrap();
            assert_eq!(lattice_width(&p).unwrap().value, rat_int(k));
        }
    }

    #[test]
    fn wide_family_is_spanning() {
        for k in [3i64, 4, 5] {
            let p = Family::WideNonIdp { d: 3, k }.build().unwrap();
            assert!(crate::spanning::is_spanning(&p).unwrap());
        }
    }

    #[test]
    fn witness_examples() {
        // k = 3, t = 2: p = (2, 1, -1)
        let p = Family::WideNonIdp { d: 3, k: 3 }.build().unwrap();
        let rep = idp_witness_check(&p, 2).unwrap();
        assert_eq!(rep.witness, vec![2, 1, -1]);
        assert!(rep.in_dilate);
        assert!(!rep.in_sumset);
        assert_eq!(rep.methods_agree, Some(true));
        assert!(rep.witness_found);

        // k = 4, t = 3: p = (5, 1, -2)
        let p = Family::WideNonIdp { d: 3, k: 4 }.build().unwrap();
        let rep = idp_witness_check(&p, 3).unwrap();
        assert_eq!(rep.witness, vec![5, 1, -2]);
        assert!(rep.witness_found);
        assert_eq!(rep.methods_agree, Some(true));

        // cubes are integrally closed: generic mode finds nothing
        let rep = idp_witness_check(&unit_cube(3, 2), 2).unwrap();
        assert!(!rep.witness_found);
    }

    #[test]
    fn generic_gap_examples() {
        for t in [2i64, 3] {
            assert!(generic_idp_gap(&standard_simplex(2, 1), t).unwrap().is_empty());
        }
        let gaps = generic_idp_gap(&crate::spanning::empty_simplex_vol2(), 2).unwrap();
        assert!(!gaps.is_empty());

        let p = Family::WideNonIdp { d: 3, k: 3 }.build().unwrap();
        let gaps = generic_idp_gap(&p, 2).unwrap();
        assert!(gaps.contains(&vec![2, 1, -1]));
    }

    #[test]
    fn family_parse_roundtrip() {
        let mut params = BTreeMap::new();
        params.insert("d".to_string(), 3i64);
        params.insert("k".to_string(), 5i64);
        let f = Family::parse("wide_nonidp", &params).unwrap();
        assert_eq!(f, Family::WideNonIdp { d: 3, k: 5 });
        assert!(Family::parse("nonsense", &params).is_err());
        assert!(Family::parse("hirzebruch", &params).is_err());
    }
}
