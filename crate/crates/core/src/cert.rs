//! Typed certificates with a tagged JSON encoding and independent
//! re-verification against the polytope they were produced for.

use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::flatness::SimplexCertificate;
use crate::gromov::DiamondSpec;
use crate::json::{
    intmat_rows_from_json, intmat_rows_to_json, intvec_from_json, intvec_to_json, obj,
    rat_from_json, rat_to_json, ratvec_from_json, ratvec_to_json,
};
use crate::polytope::{Mode, Polytope, UnimodularMap};
use crate::rat::{Rat, RatVec};
use crate::spanning::verify_genset_against_points;
use crate::width::{MinimaCertificate, WidthCertificate};

pub const CERT_SCHEMA: &str = "latgeo.cert/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Width(WidthCertificate),
    Minima(MinimaCertificate),
    Simplex(SimplexCertificate),
    /// a unimodular copy `A X + b` of the point set `x_points` inside the body
    Copy { map: UnimodularMap, mode: Mode, x_points: Vec<RatVec> },
    /// an R-unimodular copy of `dilate * Delta_d`
    SimplexDilate { dilate: Rat, map: UnimodularMap },
    Diamond(DiamondSpec),
    GenSet { points: Vec<crate::matrix::IntVec> },
}

fn mode_to_json(m: Mode) -> Value {
    Value::String(m.to_string())
}

fn mode_from_json(v: &Value) -> Result<Mode> {
    match v.as_str() {
        Some("z") => Ok(Mode::Int),
        Some("r") => Ok(Mode::Real),
        _ => Err(Error::Parse("mode must be \"z\" or \"r\"".into())),
    }
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Width(_) => "width",
            Certificate::Minima(_) => "minima",
            Certificate::Simplex(_) => "simplex",
            Certificate::Copy { .. } => "copy",
            Certificate::SimplexDilate { .. } => "simplex_dilate",
            Certificate::Diamond(_) => "diamond",
            Certificate::GenSet { .. } => "genset",
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            Certificate::Width(w) => vec![
                ("candidates_checked", Value::from(w.candidates_checked)),
                ("certified", Value::from(w.certified)),
                ("direction", intvec_to_json(&w.direction)),
                ("enumeration_radius", rat_to_json(&w.enumeration_radius)),
                ("value", rat_to_json(&w.value)),
            ],
            Certificate::Minima(m) => vec![
                (
                    "lambdas",
                    Value::Array(m.lambdas.iter().map(rat_to_json).collect()),
                ),
                (
                    "witnesses",
                    Value::Array(m.witnesses.iter().map(|w| intvec_to_json(w)).collect()),
                ),
            ],
            Certificate::Simplex(s) => vec![
                ("mode", mode_to_json(s.mode)),
                (
                    "points",
                    Value::Array(s.points.iter().map(|p| ratvec_to_json(p)).collect()),
                ),
            ],
            Certificate::Copy { map, mode, x_points } => vec![
                ("matrix", intmat_rows_to_json(&map.matrix)),
                ("mode", mode_to_json(*mode)),
                ("translation", ratvec_to_json(&map.translation)),
                (
                    "x_points",
                    Value::Array(x_points.iter().map(|p| ratvec_to_json(p)).collect()),
                ),
            ],
            Certificate::SimplexDilate { dilate, map } => vec![
                ("dilate", rat_to_json(dilate)),
                ("matrix", intmat_rows_to_json(&map.matrix)),
                ("translation", ratvec_to_json(&map.translation)),
            ],
            Certificate::Diamond(spec) => vec![
                ("basis_rows", intmat_rows_to_json(&spec.basis)),
                ("center", ratvec_to_json(&spec.center)),
                ("k", ratvec_to_json(&spec.k)),
                ("l", ratvec_to_json(&spec.l)),
                ("size", rat_to_json(&spec.size)),
            ],
            Certificate::GenSet { points } => vec![(
                "points",
                Value::Array(points.iter().map(|p| intvec_to_json(p)).collect()),
            )],
        };
        let mut entries = vec![
            ("schema", Value::String(CERT_SCHEMA.into())),
            ("kind", Value::String(self.kind().into())),
        ];
        entries.extend(body);
        obj(entries)
    }

    pub fn from_json(v: &Value) -> Result<Certificate> {
        let o = v.as_object().ok_or_else(|| Error::Parse("expected certificate object".into()))?;
        let get = |k: &str| o.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
        let kind = get("kind")?.as_str().ok_or_else(|| Error::Parse("kind must be a string".into()))?;
        match kind {
            "width" => Ok(Certificate::Width(WidthCertificate {
                value: rat_from_json(get("value")?)?,
                direction: intvec_from_json(get("direction")?)?,
                enumeration_radius: rat_from_json(get("enumeration_radius")?)?,
                candidates_checked: get("candidates_checked")?
                    .as_u64()
                    .ok_or_else(|| Error::Parse("candidates_checked must be a count".into()))?,
                certified: get("certified")?
                    .as_bool()
                    .ok_or_else(|| Error::Parse("certified must be a bool".into()))?,
            })),
            "minima" => {
                let lambdas = get("lambdas")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("lambdas must be an array".into()))?
                    .iter()
                    .map(rat_from_json)
                    .collect::<Result<_>>()?;
                let witnesses = get("witnesses")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("witnesses must be an array".into()))?
                    .iter()
                    .map(intvec_from_json)
                    .collect::<Result<_>>()?;
                Ok(Certificate::Minima(MinimaCertificate { lambdas, witnesses }))
            }
            "simplex" => {
                let mode = mode_from_json(get("mode")?)?;
                let points = get("points")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("points must be an array".into()))?
                    .iter()
                    .map(ratvec_from_json)
                    .collect::<Result<_>>()?;
                Ok(Certificate::Simplex(SimplexCertificate { mode, points }))
            }
            "copy" => {
                let matrix = intmat_rows_from_json(get("matrix")?)?;
                let translation = ratvec_from_json(get("translation")?)?;
                let mode = mode_from_json(get("mode")?)?;
                let x_points = get("x_points")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("x_points must be an array".into()))?
                    .iter()
                    .map(ratvec_from_json)
                    .collect::<Result<_>>()?;
                let map = UnimodularMap::new(matrix, translation)?;
                Ok(Certificate::Copy { map, mode, x_points })
            }
            "simplex_dilate" => {
                let matrix = intmat_rows_from_json(get("matrix")?)?;
                let translation = ratvec_from_json(get("translation")?)?;
                Ok(Certificate::SimplexDilate {
                    dilate: rat_from_json(get("dilate")?)?,
                    map: UnimodularMap::new(matrix, translation)?,
                })
            }
            "diamond" => Ok(Certificate::Diamond(DiamondSpec {
                basis: intmat_rows_from_json(get("basis_rows")?)?,
                center: ratvec_from_json(get("center")?)?,
                k: ratvec_from_json(get("k")?)?,
                l: ratvec_from_json(get("l")?)?,
                size: rat_from_json(get("size")?)?,
            })),
            "genset" => {
                let points = get("points")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("points must be an array".into()))?
                    .iter()
                    .map(intvec_from_json)
                    .collect::<Result<_>>()?;
                Ok(Certificate::GenSet { points })
            }
            other => Err(Error::Parse(format!("unknown certificate kind {other:?}"))),
        }
    }

    /// Independent re-verification against the body the certificate claims
    /// something about.
    pub fn verify(&self, against: &Polytope) -> Result<()> {
        match self {
            Certificate::Width(w) => crate::width::verify_width(against, w),
            Certificate::Minima(m) => crate::width::verify_minima(against, m),
            Certificate::Simplex(s) => crate::flatness::verify_simplex(against, s),
            Certificate::Copy { map, mode, x_points } => {
                if *mode == Mode::Int && map.mode() != Mode::Int {
                    return Err(Error::InvalidCertificate(
                        "integral mode requires an integral translation".into(),
                    ));
                }
                crate::flatness::verify_copy(against, x_points, map)
            }
            Certificate::SimplexDilate { dilate, map } => {
                if dilate.is_negative() {
                    return Err(Error::InvalidCertificate("negative dilate".into()));
                }
                if !map.matrix.is_unimodular() {
                    return Err(Error::InvalidCertificate("determinant != +-1".into()));
                }
                let d = against.dim();
                // vertices of dilate * Delta_d under the map
                let mut pts: Vec<RatVec> = vec![vec![Rat::zero(); d]];
                for i in 0..d {
                    let mut e = vec![Rat::zero(); d];
                    e[i] = dilate.clone();
                    pts.push(e);
                }
                for p in &pts {
                    if !against.contains(&map.apply_point(p)) {
                        return Err(Error::InvalidCertificate(
                            "simplex dilate image leaves the body".into(),
                        ));
                    }
                }
                Ok(())
            }
            Certificate::Diamond(spec) => crate::gromov::verify_diamond(against, spec),
            Certificate::GenSet { points } => {
                let all = against.lattice_points()?;
                for p in points {
                    if !all.contains(p) {
                        return Err(Error::InvalidCertificate(
                            "generating point is not a lattice point of the body".into(),
                        ));
                    }
                }
                if !verify_genset_against_points(points, &all) {
                    return Err(Error::InvalidCertificate(
                        "subset does not generate the full affine lattice".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{standard_simplex, unit_cube};
    use crate::rat::rat_int;

    #[test]
    fn certificates_roundtrip_and_verify() {
        let p = unit_cube(2, 3);

        let w = crate::width::lattice_width(&p).unwrap();
        let c = Certificate::Width(w);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(c, back);
        back.verify(&p).unwrap();

        let m = crate::width::successive_minima_diffbody(&p).unwrap();
        let c = Certificate::Minima(m);
        Certificate::from_json(&c.to_json()).unwrap().verify(&p).unwrap();

        let s = crate::flatness::find_unimodular_simplex(&p, Mode::Int).unwrap().unwrap();
        let c = Certificate::Simplex(s);
        Certificate::from_json(&c.to_json()).unwrap().verify(&p).unwrap();

        let spec = crate::gromov::largest_diamond(&p, 1).unwrap();
        let c = Certificate::Diamond(spec);
        Certificate::from_json(&c.to_json()).unwrap().verify(&p).unwrap();

        let gs = crate::spanning::generating_subset_recursive(&p).unwrap();
        let c = Certificate::GenSet { points: gs.points };
        Certificate::from_json(&c.to_json()).unwrap().verify(&p).unwrap();
    }

    #[test]
    fn tampered_simplex_is_rejected() {
        let p = standard_simplex(2, 3);
        let s = crate::flatness::find_unimodular_simplex(&p, Mode::Int).unwrap().unwrap();
        let mut tampered = s.clone();
        // stretch one edge: determinant becomes +-2
        let diff: RatVec = tampered.points[1]
            .iter()
            .zip(&tampered.points[0])
            .map(|(a, b)| a + (a - b))
            .collect();
        tampered.points[1] = diff;
        let err = Certificate::Simplex(tampered).verify(&p).unwrap_err();
        match err {
            Error::InvalidCertificate(msg) => assert!(msg.contains("determinant")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn tampered_width_is_rejected() {
        let p = unit_cube(2, 3);
        let mut w = crate::width::lattice_width(&p).unwrap();
        w.value = rat_int(2);
        assert!(Certificate::Width(w).verify(&p).is_err());
    }
}
