//! `latgeo` — exact lattice-polytope invariants with verifiable certificates.
//!
//! Every command reads the polytope JSON schema
//! `{"dim": d, "vertices": [["num/den", ...], ...]}` (`-` for stdin) and
//! writes a deterministic JSON payload to stdout. Rationals are always
//! strings. Exit codes: 0 success, 2 honest "not found within the searched
//! bounds", 1 errors (machine-readable JSON on stderr).

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use latgeo::cert::Certificate;
use latgeo::error::Error;
use latgeo::flatness::CopySearch;
use latgeo::json::{
    intvec_to_json, obj, polytope_from_str, polytope_to_json, rat_to_json,
};
use latgeo::polytope::{Mode, Polytope};
use latgeo::rat::parse_rat;

const SCHEMA: &str = "latgeo/1";

#[derive(Parser)]
#[command(name = "latgeo", version, about = "Exact lattice-polytope invariants")]
struct Cli {
    /// JSON output (the default and only format; accepted for compatibility)
    #[arg(long, global = true)]
    json: bool,
    /// print elapsed milliseconds to stderr (stdout stays deterministic)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certified lattice width
    Width {
        input: String,
        /// direction-candidate budget
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Minimum width over facet normals
    FacetWidth { input: String },
    /// Successive minima of the difference body with witnesses
    Minima { input: String },
    /// Unimodular simplex embedding certificate
    SimplexCert {
        input: String,
        #[arg(long, value_parser = parse_mode, default_value = "z")]
        mode: Mode,
    },
    /// Search for a unimodular copy of X inside K
    ContainsCopy {
        k: String,
        x: String,
        #[arg(long, value_parser = parse_mode, default_value = "z")]
        mode: Mode,
        /// matrix entry bound for the search
        #[arg(long, default_value_t = latgeo::flatness::DEFAULT_MATRIX_BOUND)]
        bound: i64,
    },
    /// Exact 1-dimensional generalized flatness constant of a finite set
    Flt1 {
        /// comma-separated rationals, e.g. "1/3,0"
        set: String,
    },
    /// Do the lattice points affinely generate Z^d?
    Spanning { input: String },
    /// Generating subset of the affine lattice of lattice points
    Genset {
        input: String,
        /// use the exact minimum (spanning-rank witness) instead of the
        /// recursive construction
        #[arg(long)]
        exact: bool,
    },
    /// Exact spanning rank (subset search)
    Sr {
        input: String,
        /// lattice-point budget for the exact search
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Caratheodory spanning rank (exact when the bracket closes)
    Csr {
        input: String,
        /// probe box for counterexample hunting
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Delzant test (plus hollow-polygon classification in the plane)
    Delzant { input: String },
    /// Lu's Lambda upper bound
    Lambda { input: String },
    /// Lu's Upsilon upper bound (= facet width for Delzant polytopes)
    Upsilon { input: String },
    /// Largest diamond certificate
    Diamond {
        input: String,
        #[arg(long, default_value_t = latgeo::gromov::DEFAULT_DIAMOND_MATRIX_BOUND)]
        bound: i64,
    },
    /// Combined Gromov-width report
    Gromov { input: String },
    /// Emit a named polytope family as polytope JSON
    Family {
        /// cube, standard_simplex, crosspolytope, wide_nonidp,
        /// empty_simplex_vol2, hirzebruch, wide_triangle, gw1_diamond, random
        name: String,
        /// comma-separated key=value integers, e.g. "d=3,k=5"
        #[arg(long, default_value = "")]
        params: String,
        /// seed for the random corpus generator (family "random")
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Wide-family witness check / generic IDP gap search
    IdpWitness {
        input: String,
        #[arg(long)]
        t: i64,
    },
    /// Re-verify a certificate independently of how it was produced
    Verify {
        cert: String,
        #[arg(long)]
        against: String,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "z" => Ok(Mode::Int),
        "r" => Ok(Mode::Real),
        _ => Err("mode must be z or r".into()),
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn digest(raw: &str) -> String {
    let mut h = Sha256::new();
    h.update(raw.as_bytes());
    format!("sha256:{:x}", h.finalize())
}

struct Loaded {
    poly: Polytope,
    digest: String,
}

fn load_polytope(path: &str) -> Result<Loaded, Error> {
    let raw = read_input(path)?;
    Ok(Loaded { poly: polytope_from_str(&raw)?, digest: digest(&raw) })
}

/// 0 = success, 2 = honest not-found/incomplete.
struct Output {
    payload: Value,
    exit: i32,
}

fn envelope(command: &str, input_digest: Option<&str>, mut fields: Vec<(&str, Value)>) -> Value {
    let mut entries = vec![
        ("schema", Value::String(SCHEMA.into())),
        ("command", Value::String(command.into())),
    ];
    if let Some(d) = input_digest {
        entries.push(("input_digest", Value::String(d.into())));
    }
    entries.append(&mut fields);
    obj(entries)
}

fn run(cli: Cli) -> Result<Output, Error> {
    match cli.command {
        Cmd::Width { input, budget } => {
            let l = load_polytope(&input)?;
            let cert = match budget {
                Some(b) => latgeo::width::lattice_width_with_budget(&l.poly, b)?,
                None => latgeo::width::lattice_width(&l.poly)?,
            };
            let exit = if cert.certified { 0 } else { 2 };
            let payload = envelope(
                "width",
                Some(&l.digest),
                vec![
                    ("certificate", Certificate::Width(cert.clone()).to_json()),
                    ("certified", Value::from(cert.certified)),
                    ("direction", intvec_to_json(&cert.direction)),
                    ("width", rat_to_json(&cert.value)),
                ],
            );
            Ok(Output { payload, exit })
        }
        Cmd::FacetWidth { input } => {
            let l = load_polytope(&input)?;
            let (w, idx) = latgeo::width::facet_width(&l.poly);
            let payload = envelope(
                "facet-width",
                Some(&l.digest),
                vec![
                    ("facet_index", Value::from(idx as u64)),
                    ("facet_width", rat_to_json(&w)),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Minima { input } => {
            let l = load_polytope(&input)?;
            let cert = latgeo::width::successive_minima_diffbody(&l.poly)?;
            let payload = envelope(
                "minima",
                Some(&l.digest),
                vec![
                    ("certificate", Certificate::Minima(cert.clone()).to_json()),
                    (
                        "lambdas",
                        Value::Array(cert.lambdas.iter().map(rat_to_json).collect()),
                    ),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::SimplexCert { input, mode } => {
            let l = load_polytope(&input)?;
            match latgeo::flatness::find_unimodular_simplex(&l.poly, mode)? {
                Some(cert) => {
                    let payload = envelope(
                        "simplex-cert",
                        Some(&l.digest),
                        vec![
                            ("certificate", Certificate::Simplex(cert).to_json()),
                            ("found", Value::from(true)),
                            ("mode", Value::String(mode.to_string())),
                        ],
                    );
                    Ok(Output { payload, exit: 0 })
                }
                None => {
                    let payload = envelope(
                        "simplex-cert",
                        Some(&l.digest),
                        vec![
                            ("found", Value::from(false)),
                            ("mode", Value::String(mode.to_string())),
                            (
                                "reason",
                                Value::String(
                                    "successive-minima threshold failed; the body may still contain a copy"
                                        .into(),
                                ),
                            ),
                        ],
                    );
                    Ok(Output { payload, exit: 2 })
                }
            }
        }
        Cmd::ContainsCopy { k, x, mode, bound } => {
            let lk = load_polytope(&k)?;
            let raw_x = read_input(&x)?;
            let vx: Value = serde_json::from_str(&raw_x)
                .map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
            let (_, x_points) = latgeo::json::points_from_json(&vx)?;
            match latgeo::flatness::contains_unimodular_copy(&lk.poly, &x_points, mode, bound)? {
                CopySearch::Found(map) => {
                    let cert = Certificate::Copy { map, mode, x_points };
                    let payload = envelope(
                        "contains-copy",
                        Some(&lk.digest),
                        vec![
                            ("certificate", cert.to_json()),
                            ("found", Value::from(true)),
                            ("mode", Value::String(mode.to_string())),
                        ],
                    );
                    Ok(Output { payload, exit: 0 })
                }
                CopySearch::Unknown { bound } => {
                    let payload = envelope(
                        "contains-copy",
                        Some(&lk.digest),
                        vec![
                            ("found", Value::from(false)),
                            ("mode", Value::String(mode.to_string())),
                            ("searched_bound", Value::from(bound)),
                        ],
                    );
                    Ok(Output { payload, exit: 2 })
                }
            }
        }
        Cmd::Flt1 { set } => {
            let xs = set
                .split(',')
                .map(parse_rat)
                .collect::<Result<Vec<_>, _>>()?;
            let v = latgeo::flatness::flt1_exact(&xs)?;
            let payload = envelope("flt1", None, vec![("flt1", rat_to_json(&v))]);
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Spanning { input } => {
            let l = load_polytope(&input)?;
            let s = latgeo::spanning::is_spanning(&l.poly)?;
            let payload =
                envelope("spanning", Some(&l.digest), vec![("spanning", Value::from(s))]);
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Genset { input, exact } => {
            let l = load_polytope(&input)?;
            let (points, method) = if exact {
                let sr = latgeo::spanning::spanning_rank(&l.poly)?;
                let method = if sr.exact { "exact-minimum" } else { "recursive" };
                (sr.witness, method)
            } else {
                let gs = latgeo::spanning::generating_subset_recursive(&l.poly)?;
                (gs.points, "recursive")
            };
            let cert = Certificate::GenSet { points: points.clone() };
            let payload = envelope(
                "genset",
                Some(&l.digest),
                vec![
                    ("certificate", cert.to_json()),
                    ("method", Value::String(method.into())),
                    ("size", Value::from(points.len() as u64)),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Sr { input, budget } => {
            let l = load_polytope(&input)?;
            let sr = match budget {
                Some(b) => latgeo::spanning::spanning_rank_with_budget(&l.poly, b as usize)?,
                None => latgeo::spanning::spanning_rank(&l.poly)?,
            };
            let exit = if sr.exact { 0 } else { 2 };
            let payload = envelope(
                "sr",
                Some(&l.digest),
                vec![
                    ("exact", Value::from(sr.exact)),
                    ("spanning_rank", Value::from(sr.value as u64)),
                    (
                        "witness",
                        Value::Array(sr.witness.iter().map(|w| intvec_to_json(w)).collect()),
                    ),
                ],
            );
            Ok(Output { payload, exit })
        }
        Cmd::Csr { input, bound } => {
            let l = load_polytope(&input)?;
            let probe = bound.unwrap_or(latgeo::spanning::DEFAULT_CSR_PROBE_BOX);
            let out = latgeo::spanning::caratheodory_spanning_rank(&l.poly, probe)?;
            let exact = out.exact().is_some();
            let payload = envelope(
                "csr",
                Some(&l.digest),
                vec![
                    ("exact", Value::from(exact)),
                    ("lower", Value::from(out.lower as u64)),
                    ("probe_box", Value::from(out.probe_box)),
                    ("upper", Value::from(out.upper as u64)),
                ],
            );
            Ok(Output { payload, exit: if exact { 0 } else { 2 } })
        }
        Cmd::Delzant { input } => {
            let l = load_polytope(&input)?;
            let delzant = latgeo::gromov::is_delzant(&l.poly);
            let mut fields = vec![("delzant", Value::from(delzant))];
            if delzant && l.poly.dim() == 2 && l.poly.is_lattice_polytope() {
                use latgeo::gromov::PolygonClass;
                let tag = match latgeo::gromov::delzant_polygon_classify(&l.poly)? {
                    PolygonClass::TwoSimplexEquivalent => "2-simplex-equivalent".to_string(),
                    PolygonClass::Trapezoid { y, a } => format!("trapezoid({y},{a})"),
                    PolygonClass::HasInteriorPoint => "has-interior-point".to_string(),
                };
                fields.push(("classification", Value::String(tag)));
            }
            let payload = envelope("delzant", Some(&l.digest), fields);
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Lambda { input } => {
            let l = load_polytope(&input)?;
            let rel = latgeo::gromov::lu_lambda(&l.poly)?;
            let payload = envelope(
                "lambda",
                Some(&l.digest),
                vec![
                    ("lambda", rat_to_json(&rel.value)),
                    (
                        "relation",
                        Value::Array(
                            rel.multiplicities.iter().map(|&a| Value::from(a)).collect(),
                        ),
                    ),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Upsilon { input } => {
            let l = load_polytope(&input)?;
            let v = latgeo::gromov::lu_upsilon(&l.poly)?;
            let payload = envelope("upsilon", Some(&l.digest), vec![("upsilon", rat_to_json(&v))]);
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Diamond { input, bound } => {
            let l = load_polytope(&input)?;
            let spec = latgeo::gromov::largest_diamond(&l.poly, bound)?;
            let payload = envelope(
                "diamond",
                Some(&l.digest),
                vec![
                    ("certificate", Certificate::Diamond(spec.clone()).to_json()),
                    ("searched_bound", Value::from(bound)),
                    ("size", rat_to_json(&spec.size)),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Gromov { input } => {
            let l = load_polytope(&input)?;
            let rep = latgeo::gromov::gromov_bounds(&l.poly)?;
            let simplex_cert = Certificate::SimplexDilate {
                dilate: rep.simplex_dilate.clone(),
                map: rep.simplex_map.clone(),
            };
            let payload = envelope(
                "gromov",
                Some(&l.digest),
                vec![
                    ("delzant", Value::from(rep.delzant)),
                    ("diamond_certificate", Certificate::Diamond(rep.diamond.clone()).to_json()),
                    ("diamond_size", rat_to_json(&rep.diamond.size)),
                    (
                        "lambda_upper",
                        rep.lambda_upper.as_ref().map(rat_to_json).unwrap_or(Value::Null),
                    ),
                    (
                        "lattice_width",
                        json!({
                            "note": "conjectural upper bound",
                            "value": rat_to_json(&rep.lattice_width.value),
                        }),
                    ),
                    ("lower_bound", rat_to_json(&rep.lower_bound)),
                    ("simplex_certificate", simplex_cert.to_json()),
                    ("simplex_dilate", rat_to_json(&rep.simplex_dilate)),
                    (
                        "upsilon",
                        rep.upsilon.as_ref().map(rat_to_json).unwrap_or(Value::Null),
                    ),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Family { name, params, seed } => {
            let mut map = BTreeMap::new();
            for part in params.split(',').filter(|s| !s.is_empty()) {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad parameter {part:?}")))?;
                let n: i64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer in {part:?}")))?;
                map.insert(k.trim().to_string(), n);
            }
            let poly = if name == "random" {
                // seeded corpus generator (tooling extension, not a named construction)
                let d = *map.get("d").unwrap_or(&2) as usize;
                let m = *map.get("m").unwrap_or(&(d as i64 + 3)) as usize;
                let b = *map.get("box").unwrap_or(&5);
                let mut rng = latgeo::generate::Rng::new(seed);
                latgeo::generate::random_lattice_polytope(&mut rng, d, m, b)
            } else {
                latgeo::families::Family::parse(&name, &map)?.build()?
            };
            Ok(Output { payload: polytope_to_json(&poly), exit: 0 })
        }
        Cmd::IdpWitness { input, t } => {
            let l = load_polytope(&input)?;
            let rep = latgeo::families::idp_witness_check(&l.poly, t)?;
            let combo = rep
                .combination
                .as_ref()
                .map(|c| {
                    json!({
                        "q1": c.q1,
                        "q2": c.q2,
                        "weights": ["1/2", "1/2"],
                    })
                })
                .unwrap_or(Value::Null);
            let payload = envelope(
                "idp-witness",
                Some(&l.digest),
                vec![
                    ("combination", combo),
                    ("in_dilate", Value::from(rep.in_dilate)),
                    ("in_sumset", Value::from(rep.in_sumset)),
                    (
                        "methods_agree",
                        rep.methods_agree.map(Value::from).unwrap_or(Value::Null),
                    ),
                    ("t", Value::from(t)),
                    ("witness", Value::Array(rep.witness.iter().map(|&x| Value::from(x)).collect())),
                    ("witness_found", Value::from(rep.witness_found)),
                ],
            );
            Ok(Output { payload, exit: 0 })
        }
        Cmd::Verify { cert, against } => {
            let raw = read_input(&cert)?;
            let v: Value = serde_json::from_str(&raw)
                .map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
            // accept a bare certificate or a command envelope; envelopes may
            // embed several certificates (the gromov report does)
            let mut certs: Vec<Certificate> = Vec::new();
            if let Some(o) = v.as_object() {
                for (key, val) in o {
                    if key == "certificate" || key.ends_with("_certificate") {
                        certs.push(Certificate::from_json(val)?);
                    }
                }
            }
            if certs.is_empty() {
                certs.push(Certificate::from_json(&v)?);
            }
            let l = load_polytope(&against)?;
            let mut kinds = Vec::new();
            for c in &certs {
                c.verify(&l.poly)?;
                kinds.push(Value::String(c.kind().into()));
            }
            let payload = envelope(
                "verify",
                Some(&l.digest),
                vec![("kinds", Value::Array(kinds)), ("valid", Value::from(true))],
            );
            Ok(Output { payload, exit: 0 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let timing = cli.timing;
    let start = std::time::Instant::now();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.payload);
            if timing {
                eprintln!("timing_ms: {}", start.elapsed().as_millis());
            }
            std::process::exit(out.exit);
        }
        Err(e) => {
            let kind = match &e {
                Error::Parse(_) => "parse",
                Error::InvalidCertificate(_) => "invalid-certificate",
                Error::BudgetExceeded { .. } => "budget-exceeded",
                _ => "domain",
            };
            eprintln!("{}", json!({ "error": e.to_string(), "kind": kind }));
            std::process::exit(1);
        }
    }
}
