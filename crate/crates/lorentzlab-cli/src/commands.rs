//! One function per subcommand. Each returns the report body; `main` adds the
//! command echo and verdict.

use std::collections::BTreeMap;

use lorentzlab::cones::ConeByGenerators;
use lorentzlab::fanchow::{
    bergman_fan, canonical_bijection_check, check_fan_lorentzian, functional_from_weights, transport_chain, weights_from_json, DegreeFunctional,
    Fan, FanError, FanJson, FanStep,
};
use lorentzlab::hereditary::{verify_hl_witness, HerError, HlReport, Verdict, WeightJson, WeightsJson};
use lorentzlab::linalg::Vector;
use lorentzlab::lorentzian::{self, LorentzError, LorentzValue, LorentzVerdict};
use lorentzlab::matroid::{div_t_minus_one, hrw_check, FlatLattice, MatroidJson};
use lorentzlab::polytope::{self, PolytopeJson, SimplePolytope};
use lorentzlab::subdivision::{self, SubdivStep};
use lorentzlab::{check_hereditary, from_weights, HereditaryPoly, HomPoly, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{input, ChainCmd, Cli, Command, FanCmd, HereditaryCmd, InputError, Method, MatroidCmd, Outcome, PolyCmd, PolytopeCmd, StepArgs};

type Res = Result<Outcome, InputError>;

pub fn run(cli: &Cli) -> Res {
    let workers = cli.parallel.max(1);
    let verify = cli.verify_witness;
    match &cli.command {
        Command::Poly(c) => poly(c, workers, verify),
        Command::Hereditary(c) => hereditary(c, workers, verify),
        Command::Subdivide(a) => step(a, false),
        Command::Weld(a) => step(a, true),
        Command::Chain(ChainCmd::Apply { poly, chain }) => chain_apply(poly, chain),
        Command::Matroid(c) => matroid(c, workers, verify),
        Command::Polytope(c) => polytope(c),
        Command::Fan(c) => fan(c, workers, verify),
    }
}

fn poly_fields(f: &HomPoly) -> Value {
    json!({ "poly": f.to_string(), "vars": f.vars().labels(), "degree": f.degree() })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn lorentz_outcome(f: &HomPoly, res: Result<LorentzVerdict, LorentzError>, verify: impl Fn(&LorentzVerdict) -> bool, check_witness: bool) -> Res {
    let base = poly_fields(f);
    let v = match res {
        Ok(v) => v,
        Err(LorentzError::NegativeCoefficient(m)) => {
            // the lexicographically first negative term, rechecked by reading its coefficient
            let mut body = merge(base, json!({ "witness": { "kind": "negative_coefficient", "monomial": m } }));
            if check_witness {
                body["witness_verified"] = json!(f.terms().any(|(_, c)| c.is_negative()));
            }
            return Ok(Outcome::new(false, body, format!("negative coefficient on {m}")));
        }
        Err(e) => return Err(e.into()),
    };
    let mut body = merge(base, json!({ "checks": v.checks, "witness": v.witness }));
    if check_witness && v.witness.is_some() {
        body["witness_verified"] = json!(verify(&v));
    }
    let summary = format!("{} conditions examined", v.checks);
    Ok(match v.value {
        LorentzValue::Yes => Outcome::new(true, body, summary),
        LorentzValue::No => Outcome::new(false, body, summary),
        LorentzValue::Vacuous => Outcome::with("vacuous", body, summary),
        LorentzValue::Consistent => Outcome::with("consistent", body, summary),
    })
}

fn load_cone(path: &str, n: usize) -> Result<ConeByGenerators, InputError> {
    let raw: ConeByGenerators = input::json(path)?;
    let cone = ConeByGenerators::new(raw.generators).map_err(|e| InputError(format!("{path}: generators: {e}")))?;
    if cone.dim() != n {
        return Err(InputError(format!("{path}: generators: length {} does not match {n} variables", cone.dim())));
    }
    Ok(cone)
}

fn seed() -> u64 {
    std::env::var("LORENTZLAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_601)
}

/// Tuples of `d` points, each a combination of the generators with
/// coefficients drawn from {1/4, …, 2}.
fn cone_samples(cone: &ConeByGenerators, d: usize, count: usize) -> Vec<Vec<Vector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    (0..count)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let mut v = vec![Q::zero(); cone.dim()];
                    for g in &cone.generators {
                        let c = Q::new(rng.gen_range(1..=8), 4);
                        for (x, y) in v.iter_mut().zip(g) {
                            *x += &c * y;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

fn poly(c: &PolyCmd, workers: usize, verify: bool) -> Res {
    match c {
        PolyCmd::Lorentzian { poly, method } => {
            let f = input::poly(poly)?;
            let res = match method {
                Method::Exchange => lorentzian::is_lorentzian_with(&f, workers),
                Method::Connectivity => lorentzian::is_lorentzian_v2(&f),
            };
            lorentz_outcome(&f, res, |v| lorentzian::verify_witness(&f, v.witness.as_ref().unwrap(), None, None), verify)
        }
        PolyCmd::KLorentzian { poly, cone } => {
            let f = input::poly(poly)?;
            let cone = load_cone(cone, f.nvars())?;
            let res = lorentzian::is_k_lorentzian_with(&f, &cone, workers);
            lorentz_outcome(&f, res, |v| lorentzian::verify_witness(&f, v.witness.as_ref().unwrap(), Some(&cone), None), verify)
        }
        PolyCmd::Definitional { poly, cone, samples } => {
            let f = input::poly(poly)?;
            let cone = load_cone(cone, f.nvars())?;
            let tuples = cone_samples(&cone, f.degree() as usize, *samples);
            let res = lorentzian::definitional_check(&f, &tuples);
            let mut out = lorentz_outcome(&f, res, |v| lorentzian::verify_witness(&f, v.witness.as_ref().unwrap(), Some(&cone), Some(&tuples)), verify)?;
            out.body["seed"] = json!(seed());
            if let Some(w) = out.body.get("witness").and_then(|w| w.get("sample")).and_then(Value::as_u64) {
                out.body["sample"] = json!(tuples[w as usize]);
            }
            Ok(out)
        }
    }
}

fn hereditary_fields(h: &HereditaryPoly) -> Value {
    json!({
        "poly": h.f.to_string(),
        "complex": h.delta.to_json(),
        "lineality": h.lin.basis(),
        "strongly_hereditary": h.strong,
        "positive": h.is_positive(),
    })
}

fn not_hereditary(f: &HomPoly, e: HerError) -> Res {
    match e {
        HerError::NotHereditary { face } => {
            let body = merge(poly_fields(f), json!({ "witness": { "kind": "not_hereditary", "face": face } }));
            Ok(Outcome::new(false, body, "lineality space does not project onto a face"))
        }
        e => Err(e.into()),
    }
}

fn hl_outcome(h: &HereditaryPoly, r: HlReport, base: Value, verify: bool) -> Res {
    let summary = format!("{} signature checks, connectivity on {}", r.q_checks.len(), if r.connectivity_on.is_empty() { "-" } else { &r.connectivity_on });
    let verified = (verify && r.verdict == Verdict::No).then(|| verify_hl_witness(h, &r));
    let verdict = r.verdict;
    let mut body = merge(base, json!({ "report": r }));
    if let Some(ok) = verified {
        body["witness_verified"] = json!(ok);
    }
    Ok(match verdict {
        Verdict::Yes => Outcome::new(true, body, summary),
        Verdict::No => Outcome::new(false, body, summary),
        Verdict::VacuousEmptyCone => Outcome::with("vacuous", body, "the cone K_f is empty"),
    })
}

fn hereditary(c: &HereditaryCmd, workers: usize, verify: bool) -> Res {
    match c {
        HereditaryCmd::Check { poly } => {
            let f = input::poly(poly)?;
            let h = match check_hereditary(&f) {
                Ok(h) => h,
                Err(e) => return not_hereditary(&f, e),
            };
            let weights = WeightsJson::from_parts(&h.delta, &h.lin, &h.facet_weights()).weights;
            let body = merge(hereditary_fields(&h), json!({ "weights": weights }));
            Ok(Outcome::new(true, body, format!("{} facets, lineality dimension {}", h.delta.facets().len(), h.lin.dim())))
        }
        HereditaryCmd::Lorentzian { poly, hints } => {
            let f = input::poly(poly)?;
            let h = match check_hereditary(&f) {
                Ok(h) => h,
                Err(e) => return not_hereditary(&f, e),
            };
            let hints = input::hints(hints, f.nvars())?;
            let r = h.is_hereditary_lorentzian(&hints, workers);
            hl_outcome(&h, r, hereditary_fields(&h), verify)
        }
        HereditaryCmd::FromWeights { weights } => {
            let w: WeightsJson = input::json(weights)?;
            let (delta, lin, ws) = w.parse().map_err(|e| InputError(format!("{weights}: {e}")))?;
            let h = from_weights(&delta, &lin, &ws)?;
            let body = merge(hereditary_fields(&h), json!({ "poly_json": h.f.to_json() }));
            Ok(Outcome::success(body, format!("{} terms", h.f.num_terms())))
        }
    }
}

fn step(a: &StepArgs, weld: bool) -> Res {
    let f = input::poly(&a.poly)?;
    let c = input::rationals(&a.coeffs, "--coeffs")?;
    let face = input::labels(&a.face);
    if weld {
        let label = a.vertex.as_deref().ok_or_else(|| InputError("--vertex: weld needs the vertex to eliminate".into()))?;
        let zero = input::indices(f.vars(), &[label.to_string()], "--vertex")?[0];
        let s = input::indices(f.vars(), &face, "--face")?;
        let g = subdivision::weld(&f, zero, &s, &c)?;
        let body = json!({ "input": f.to_string(), "poly": g.to_string(), "vars": g.vars().labels(), "eliminated": label });
        Ok(Outcome::success(body, format!("welded {label}")))
    } else {
        let s = input::indices(f.vars(), &face, "--face")?;
        let label = a.vertex.clone().unwrap_or_else(|| f.vars().fresh_label("@"));
        let g = subdivision::subdivide(&f, &s, &c, &label)?;
        let body = json!({ "input": f.to_string(), "poly": g.to_string(), "vars": g.vars().labels(), "new_vertex": label });
        Ok(Outcome::success(body, format!("new vertex {label}")))
    }
}

fn chain_apply(poly: &str, chain: &str) -> Res {
    let f = input::poly(poly)?;
    let steps: Vec<SubdivStep> = input::json(chain)?;
    let r = subdivision::apply_chain(&f, &steps)?;
    let body = json!({ "input": f.to_string(), "poly": r.result.to_string(), "vars": r.result.vars().labels(), "certificates": r.certificates });
    Ok(Outcome::success(body, format!("{} steps", steps.len())))
}

fn lattice(path: &str) -> Result<FlatLattice, InputError> {
    let m: MatroidJson = input::json(path)?;
    let m = m.build().map_err(|e| InputError(format!("{path}: {e}")))?;
    Ok(m.flats()?)
}

fn matroid(c: &MatroidCmd, workers: usize, verify: bool) -> Res {
    match c {
        MatroidCmd::Flats { matroid } => {
            let lat = lattice(matroid)?;
            let flats: Vec<Value> = lat.flat_sets().into_iter().enumerate().map(|(i, f)| json!({ "rank": lat.flat_rank(i), "elements": f })).collect();
            Ok(Outcome::success(json!({ "rank": lat.rank(), "flats": flats }), format!("{} flats", lat.len())))
        }
        MatroidCmd::Charpoly { matroid } => {
            let lat = lattice(matroid)?;
            let chi = lat.char_poly_mobius();
            let reduced = div_t_minus_one(&chi);
            let body = json!({ "rank": lat.rank(), "char_poly": chi, "reduced_char_poly": reduced });
            Ok(Outcome::success(body, "coefficients in ascending powers"))
        }
        MatroidCmd::Hrw { matroid } => {
            let lat = lattice(matroid)?;
            let pol = lat.pol()?;
            let r = hrw_check(&lat, &pol);
            let ok = r.passed();
            let summary = format!("|coefficients| {:?}", r.log_concavity.sequence.iter().map(Q::to_string).collect::<Vec<_>>());
            Ok(Outcome::new(ok, json!({ "report": r }), summary))
        }
        MatroidCmd::Bergman { matroid } => {
            let lat = lattice(matroid)?;
            let fan = bergman_fan(&lat, true)?;
            let alpha = fan.volume_functional()?;
            fan_verdict(&alpha, &[], workers, verify)
        }
    }
}

fn bodies(paths: &[String]) -> Result<Vec<SimplePolytope>, InputError> {
    paths
        .iter()
        .map(|p| {
            let j: PolytopeJson = input::json(p)?;
            j.build().map_err(|e| InputError(format!("{p}: {e}")))
        })
        .collect()
}

fn polytope(c: &PolytopeCmd) -> Res {
    match c {
        PolytopeCmd::Volume { polytope } => {
            let p = &bodies(std::slice::from_ref(polytope))?[0];
            let v = p.volume();
            Ok(Outcome::success(json!({ "dim": p.dim(), "vertices": p.vertices().len(), "volume": v }), format!("volume {v}")))
        }
        PolytopeCmd::Polynomial { polytope } => {
            let p = &bodies(std::slice::from_ref(polytope))?[0];
            let h = p.volume_polynomial()?;
            let body = merge(hereditary_fields(&h), json!({ "at_support_numbers": h.f.evaluate(p.support_numbers())?, "poly_json": h.f.to_json() }));
            Ok(Outcome::success(body, format!("{} terms", h.f.num_terms())))
        }
        PolytopeCmd::Mixed { polytopes } => {
            let bs = bodies(polytopes)?;
            let v = polytope::mixed_volume(&bs)?;
            Ok(Outcome::success(json!({ "mixed_volume": v }), format!("mixed volume {v}")))
        }
        PolytopeCmd::Af { polytopes } => {
            let bs = bodies(polytopes)?;
            let holds = polytope::af_check(&bs)?;
            // the three mixed volumes make a `no` checkable by hand
            let rest = &bs[2..];
            let with = |a: &SimplePolytope, b: &SimplePolytope| {
                let mut v = vec![a.clone(), b.clone()];
                v.extend(rest.iter().cloned());
                polytope::mixed_volume(&v)
            };
            let (v12, v11, v22) = (with(&bs[0], &bs[1])?, with(&bs[0], &bs[0])?, with(&bs[1], &bs[1])?);
            let body = json!({ "v12": v12, "v11": v11, "v22": v22, "v12_squared": &v12 * &v12, "v11_v22": &v11 * &v22 });
            Ok(Outcome::new(holds, body, format!("V12^2 = {}, V11*V22 = {}", &v12 * &v12, &v11 * &v22)))
        }
    }
}

fn load_fan(path: &str) -> Result<Fan, InputError> {
    let j: FanJson = input::json(path)?;
    j.build(true).map_err(|e| InputError(format!("{path}: {e}")))
}

/// The functional from a weights file (a list of `{facet, w}`), or the
/// volume functional when no file is given.
fn functional(fan: &Fan, weights: Option<&str>) -> Result<DegreeFunctional, InputError> {
    match weights {
        Some(path) => {
            let ws: Vec<WeightJson> = input::json(path)?;
            let w: BTreeMap<Vec<usize>, Q> = weights_from_json(fan, &ws).map_err(|e| InputError(format!("{path}: {e}")))?;
            functional_from_weights(fan, &w).map_err(|e| InputError(format!("{path}: {e}")))
        }
        None => Ok(fan.volume_functional()?),
    }
}

fn functional_fields(alpha: &DegreeFunctional) -> Value {
    let h = alpha.poly();
    json!({
        "fan": alpha.fan().to_json(),
        "poly": h.f.to_string(),
        "weights": WeightsJson::from_parts(&h.delta, &h.lin, &h.facet_weights()).weights,
    })
}

fn fan_verdict(alpha: &DegreeFunctional, hints: &[Vector], workers: usize, verify: bool) -> Res {
    let base = merge(functional_fields(alpha), json!({ "balanced_weight_dimension": alpha.fan().balanced_weights().len() }));
    match check_fan_lorentzian(alpha, hints, workers) {
        Ok(r) => hl_outcome(alpha.poly(), r, base, verify),
        Err(FanError::EmptyCone) => Ok(Outcome::with("vacuous", base, "the cone of the functional is empty")),
        Err(e) => Err(e.into()),
    }
}

fn fan(c: &FanCmd, workers: usize, verify: bool) -> Res {
    match c {
        FanCmd::Check { fan, weights, hints } => {
            let f = load_fan(fan)?;
            let alpha = functional(&f, weights.as_deref())?;
            let hints = input::hints(hints, f.rays().len())?;
            fan_verdict(&alpha, &hints, workers, verify)
        }
        FanCmd::Subdivide { fan, ray, label, weights } => {
            let f = load_fan(fan)?;
            let alpha = functional(&f, weights.as_deref())?;
            let rho = input::rationals(ray, "--ray")?;
            if rho.len() != f.dim() {
                return Err(InputError(format!("--ray: expected {} entries, got {}", f.dim(), rho.len())));
            }
            let (face, coeffs) = f.locate(&rho)?;
            let beta = alpha.subdivide(&rho, label)?;
            let body = merge(functional_fields(&beta), json!({ "face": f.complex().labels_of(&face), "c": coeffs }));
            Ok(Outcome::success(body, format!("ray {label} added")))
        }
        FanCmd::Bijection { fan, other, weights, other_weights } => {
            let a = functional(&load_fan(fan)?, weights.as_deref())?;
            let b = functional(&load_fan(other)?, other_weights.as_deref())?;
            let r = canonical_bijection_check(&a, &b, None)?;
            let holds = r.holds;
            let summary = format!("{} overlapping pairs", r.pairs.len());
            Ok(Outcome::new(holds, json!({ "report": r }), summary))
        }
        FanCmd::Transport { fan, steps, weights } => {
            let f = load_fan(fan)?;
            let alpha = functional(&f, weights.as_deref())?;
            let st: Vec<FanStep> = input::json(steps)?;
            let (beta, certs) = transport_chain(&alpha, &st)?;
            let body = merge(functional_fields(&beta), json!({ "certificates": certs }));
            Ok(Outcome::success(body, format!("{} steps", st.len())))
        }
    }
}
