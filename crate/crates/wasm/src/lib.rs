//! Browser bindings for the interactive demo: analyze a drawn lattice
//! polygon, build parameterized families, and explore the one-dimensional
//! flatness constant. All results are JSON strings with exact rationals; a
//! failed call returns `{"error": "..."}` instead of throwing.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use latgeo::cert::Certificate;
use latgeo::json::{
    intvec_to_json, polytope_from_str, polytope_to_json, rat_to_json, ratvec_to_json,
};
use latgeo::polytope::Mode;
use latgeo::rat::{parse_rat, Rat};

fn err_json(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn rat_f64(r: &Rat) -> f64 {
    // display only; all reported values stay exact strings
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

fn ratvec_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_f64).collect()
}

/// Full report for a 2-dimensional rational polytope given in the polytope
/// JSON schema; includes drawing data (lattice points, width strip, diamond
/// and simplex certificates) next to the exact values.
#[wasm_bindgen]
pub fn analyze_polygon(polytope_json: &str) -> String {
    match analyze_impl(polytope_json) {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

fn analyze_impl(polytope_json: &str) -> latgeo::Result<Value> {
    let p = polytope_from_str(polytope_json)?;
    if p.dim() != 2 {
        return Err(latgeo::Error::WrongDimension { expected: 2, got: p.dim() });
    }
    let width = latgeo::width::lattice_width(&p)?;
    let (fw, _) = latgeo::width::facet_width(&p);
    let lattice_points = p.lattice_points()?;
    let interior = p.interior_lattice_points()?;
    let delzant = latgeo::gromov::is_delzant(&p);
    let is_lattice = p.is_lattice_polytope();

    // width strip: the two supporting lines <u, x> = lo and <u, x> = hi
    let dirs: Vec<Rat> = p
        .vertices()
        .iter()
        .map(|v| latgeo::rat::dot_int_rat(&width.direction, v))
        .collect();
    let lo = dirs.iter().min().unwrap().clone();
    let hi = dirs.iter().max().unwrap().clone();

    let diamond = latgeo::gromov::largest_diamond(&p, 2)?;
    let (simplex_r, simplex_map) = latgeo::flatness::largest_simplex_dilate(&p)?;
    let lower =
        if diamond.size > simplex_r { diamond.size.clone() } else { simplex_r.clone() };

    let mut out = json!({
        "dim": 2,
        "vertices": polytope_to_json(&p)["vertices"],
        "width": rat_to_json(&width.value),
        "width_direction": intvec_to_json(&width.direction),
        "width_strip": { "lo": rat_to_json(&lo), "hi": rat_to_json(&hi) },
        "width_certified": width.certified,
        "facet_width": rat_to_json(&fw),
        "lattice_point_count": lattice_points.len(),
        "lattice_points": Value::Array(
            lattice_points.iter().map(|z| intvec_to_json(z)).collect()
        ),
        "interior_lattice_point_count": interior.len(),
        "delzant": delzant,
        "gromov_lower_bound": rat_to_json(&lower),
        "simplex_dilate": rat_to_json(&simplex_r),
        "simplex_points": Value::Array(
            simplex_dilate_points(&simplex_r, &simplex_map)
                .iter()
                .map(|q| Value::Array(q.iter().map(|x| json!(x)).collect()))
                .collect()
        ),
        "diamond_size": rat_to_json(&diamond.size),
        "diamond_points": Value::Array(
            diamond
                .generator_points()
                .iter()
                .map(|q| Value::Array(ratvec_f64(q).iter().map(|x| json!(x)).collect()))
                .collect()
        ),
        "diamond_certificate": Certificate::Diamond(diamond).to_json(),
    });
    let obj = out.as_object_mut().unwrap();

    if is_lattice {
        let spanning = latgeo::spanning::is_spanning(&p)?;
        obj.insert("spanning".into(), json!(spanning));
        if lattice_points.len() <= 16 {
            let sr = latgeo::spanning::spanning_rank(&p)?;
            obj.insert("spanning_rank".into(), json!(sr.value));
            obj.insert("spanning_rank_exact".into(), json!(sr.exact));
        }
    }
    if delzant {
        let lam = latgeo::gromov::lu_lambda(&p)?;
        let ups = latgeo::gromov::lu_upsilon(&p)?;
        obj.insert("lambda_upper".into(), rat_to_json(&lam.value));
        obj.insert("upsilon".into(), rat_to_json(&ups));
    }
    if let Some(cert) = latgeo::flatness::find_unimodular_simplex(&p, Mode::Int)? {
        obj.insert(
            "unimodular_simplex".into(),
            Value::Array(cert.points.iter().map(|q| ratvec_to_json(q)).collect()),
        );
    }
    Ok(out)
}

fn simplex_dilate_points(r: &Rat, map: &latgeo::polytope::UnimodularMap) -> Vec<Vec<f64>> {
    let d = map.dim();
    let mut pts = vec![vec![Rat::new(0.into(), 1.into()); d]];
    for i in 0..d {
        let mut e = vec![Rat::new(0.into(), 1.into()); d];
        e[i] = r.clone();
        pts.push(e);
    }
    pts.iter().map(|q| ratvec_f64(&map.apply_point(q))).collect()
}

/// Builds a named family (`cube`, `standard_simplex`, `hirzebruch`,
/// `wide_triangle`, `gw1_diamond`, `crosspolytope`, or `random` with a seed)
/// and returns its polytope JSON.
#[wasm_bindgen]
pub fn build_family(name: &str, params: &str, seed: u64) -> String {
    let mut map = std::collections::BTreeMap::new();
    for part in params.split(',').filter(|s| !s.is_empty()) {
        let Some((k, v)) = part.split_once('=') else {
            return err_json(format!("bad parameter {part:?}"));
        };
        let Ok(n) = v.trim().parse::<i64>() else {
            return err_json(format!("bad integer in {part:?}"));
        };
        map.insert(k.trim().to_string(), n);
    }
    if name == "random" {
        let d = *map.get("d").unwrap_or(&2) as usize;
        let m = *map.get("m").unwrap_or(&6) as usize;
        let b = *map.get("box").unwrap_or(&4);
        let mut rng = latgeo::generate::Rng::new(seed);
        let p = latgeo::generate::random_lattice_polytope(&mut rng, d, m, b);
        return polytope_to_json(&p).to_string();
    }
    match latgeo::families::Family::parse(name, &map).and_then(|f| f.build()) {
        Ok(p) => polytope_to_json(&p).to_string(),
        Err(e) => err_json(e),
    }
}

/// Exact 1-dimensional generalized flatness constant of a comma-separated
/// rational set, with the reduced point set for a number-line drawing.
#[wasm_bindgen]
pub fn flt1_gaps(set: &str) -> String {
    let xs: Result<Vec<Rat>, _> = set.split(',').map(parse_rat).collect();
    let xs = match xs {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    match latgeo::flatness::flt1_exact(&xs) {
        Ok(v) => {
            let mut pts: Vec<Rat> = xs
                .iter()
                .flat_map(|x| [x.clone(), -x.clone()])
                .map(|x| {
                    
                    &x - Rat::from_integer(latgeo::rat::floor_big(&x))
                })
                .collect();
            pts.sort();
            pts.dedup();
            json!({
                "flt1": latgeo::rat::fmt_rat(&v),
                "period_points": pts.iter().map(latgeo::rat::fmt_rat).collect::<Vec<_>>(),
                "period_points_f64": pts.iter().map(rat_f64).collect::<Vec<_>>(),
            })
            .to_string()
        }
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_square_reports_invariants() {
        let p = build_family("cube", "d=2,k=2", 0);
        let report: Value = serde_json::from_str(&analyze_polygon(&p)).unwrap();
        assert_eq!(report["width"], "2");
        assert_eq!(report["delzant"], true);
        assert_eq!(report["lattice_point_count"], 9);
        assert_eq!(report["gromov_lower_bound"], "2");
        assert_eq!(report["upsilon"], "2");
        assert_eq!(report["spanning"], true);
    }

    #[test]
    fn analyze_rejects_wrong_dimension() {
        let p = build_family("cube", "d=3,k=1", 0);
        let report: Value = serde_json::from_str(&analyze_polygon(&p)).unwrap();
        assert!(report["error"].as_str().unwrap().contains("dimension"));
    }

    #[test]
    fn families_and_flt1() {
        let h = build_family("hirzebruch", "x=2,y=7,a=2", 0);
        let report: Value = serde_json::from_str(&analyze_polygon(&h)).unwrap();
        assert_eq!(report["width"], "2");
        assert_eq!(report["lambda_upper"], "2");

        let f: Value = serde_json::from_str(&flt1_gaps("1/3")).unwrap();
        assert_eq!(f["flt1"], "2/3");

        let r = build_family("random", "d=2,m=6,box=4", 7);
        let report: Value = serde_json::from_str(&analyze_polygon(&r)).unwrap();
        assert!(report.get("width").is_some());
    }
}
