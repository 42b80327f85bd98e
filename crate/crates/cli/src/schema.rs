//! Problem-file schema: parsing, validation (strict or lenient on unknown
//! fields), and conversion into the core types.

use momap_core::action::{ActionDescriptor, ActionKind, PointState};
use momap_core::cone::{parse_rat, Rat};
use momap_core::group::GroupDescriptor;
use momap_core::linalg::{CMatrix, CVector};
use momap_core::pairs::SplitPairData;
use momap_core::stability::TorusActionExact;
use momap_core::vortex::VortexProblem;
use nalgebra::Complex;
use num_bigint::BigInt;
use serde_json::Value;

#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "schema error: {}", self.0)
    }
}

type SResult<T> = Result<T, SchemaError>;

fn err<T>(msg: impl Into<String>) -> SResult<T> {
    Err(SchemaError(msg.into()))
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub kind: String,
    pub seed: Option<u64>,
    pub payload: Value,
    /// The whole parsed document, for digests.
    pub raw: Value,
}

const KINDS: [&str; 5] =
    ["torus_action", "linear_action", "projective_action", "vortex", "split_pair"];

/// Check an object's keys against an allowed set; unknown keys are an error
/// in strict mode and a warning otherwise.
pub fn check_fields(obj: &Value, allowed: &[&str], strict: bool, ctx: &str) -> SResult<()> {
    let Some(map) = obj.as_object() else {
        return err(format!("{ctx}: expected an object"));
    };
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            if strict {
                return err(format!("{ctx}: unknown field \"{key}\""));
            }
            log::warn!("{ctx}: ignoring unknown field \"{key}\"");
        }
    }
    Ok(())
}

pub fn parse_problem(text: &str, strict: bool) -> SResult<ProblemFile> {
    let raw: Value =
        serde_json::from_str(text).map_err(|e| SchemaError(format!("invalid JSON: {e}")))?;
    check_fields(&raw, &["version", "kind", "seed", "payload"], strict, "problem")?;
    let version = raw.get("version").and_then(|v| v.as_str()).unwrap_or("1");
    if version != "1" {
        return err(format!("unsupported schema version \"{version}\""));
    }
    let kind = raw
        .get("kind")
        .and_then(|v| v.as_str())
        .ok_or_else(|| SchemaError("missing \"kind\"".into()))?
        .to_string();
    if !KINDS.contains(&kind.as_str()) {
        return err(format!("unknown kind \"{kind}\"; expected one of {KINDS:?}"));
    }
    let seed = match raw.get("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| SchemaError("seed must be a nonnegative integer".into()))?,
        ),
    };
    let payload = raw
        .get("payload")
        .cloned()
        .ok_or_else(|| SchemaError("missing \"payload\"".into()))?;
    Ok(ProblemFile { kind, seed, payload, raw })
}

/// Rational from a JSON integer or a "p/q" / decimal string.
pub fn json_rat(v: &Value, ctx: &str) -> SResult<Rat> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(BigInt::from(i)))
            } else {
                err(format!("{ctx}: non-integer numbers must be quoted rationals like \"1/2\""))
            }
        }
        Value::String(s) => {
            parse_rat(s).ok_or_else(|| SchemaError(format!("{ctx}: cannot parse rational \"{s}\"")))
        }
        _ => err(format!("{ctx}: expected a rational (integer or \"p/q\")")),
    }
}

pub fn json_f64(v: &Value, ctx: &str) -> SResult<f64> {
    v.as_f64().ok_or_else(|| SchemaError(format!("{ctx}: expected a number")))
}

fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Complex vector from an array of [re, im] pairs.
pub fn json_cvector(v: &Value, ctx: &str) -> SResult<CVector> {
    let arr = v
        .as_array()
        .ok_or_else(|| SchemaError(format!("{ctx}: expected an array of [re, im] pairs")))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, entry) in arr.iter().enumerate() {
        let pair = entry
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| SchemaError(format!("{ctx}[{i}]: expected [re, im]")))?;
        out.push(Complex::new(
            json_f64(&pair[0], &format!("{ctx}[{i}].re"))?,
            json_f64(&pair[1], &format!("{ctx}[{i}].im"))?,
        ));
    }
    Ok(CVector::from_vec(out))
}

/// Square complex matrix from row-major rows of [re, im] pairs.
pub fn json_cmatrix(v: &Value, ctx: &str) -> SResult<CMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| SchemaError(format!("{ctx}: expected an array of rows")))?;
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| SchemaError(format!("{ctx}[{i}]: expected {n} entries")))?;
        for (j, entry) in row.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| SchemaError(format!("{ctx}[{i}][{j}]: expected [re, im]")))?;
            entries.push(Complex::new(
                json_f64(&pair[0], &format!("{ctx}[{i}][{j}].re"))?,
                json_f64(&pair[1], &format!("{ctx}[{i}][{j}].im"))?,
            ));
        }
    }
    Ok(CMatrix::from_row_slice(n, n, &entries))
}

pub fn json_group(v: &Value, strict: bool, ctx: &str) -> SResult<GroupDescriptor> {
    check_fields(v, &["kind", "n", "factors", "pairing_scale"], strict, ctx)?;
    let kind = v
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| SchemaError(format!("{ctx}: missing group kind")))?;
    let n = || -> SResult<usize> {
        v.get("n")
            .and_then(|x| x.as_u64())
            .map(|x| x as usize)
            .ok_or_else(|| SchemaError(format!("{ctx}: missing group size \"n\"")))
    };
    let mut g = match kind {
        "gl" => GroupDescriptor::gl(n()?),
        "sl" => GroupDescriptor::sl(n()?),
        "torus" => GroupDescriptor::torus(n()?),
        "product" => {
            let factors = v
                .get("factors")
                .and_then(|f| f.as_array())
                .ok_or_else(|| SchemaError(format!("{ctx}: product needs \"factors\"")))?;
            let gs = factors
                .iter()
                .enumerate()
                .map(|(i, f)| json_group(f, strict, &format!("{ctx}.factors[{i}]")))
                .collect::<SResult<Vec<_>>>()?;
            GroupDescriptor::product(gs)
        }
        other => return err(format!("{ctx}: unknown group kind \"{other}\"")),
    };
    if let Some(s) = v.get("pairing_scale") {
        let s = json_f64(s, &format!("{ctx}.pairing_scale"))?;
        if s <= 0.0 {
            return err(format!("{ctx}: pairing_scale must be positive"));
        }
        g = g.with_pairing_scale(s);
    }
    Ok(g)
}

/// Exact torus data together with its floating twin and the point.
pub struct TorusProblem {
    pub exact: TorusActionExact,
    pub float: ActionDescriptor,
    pub vector: CVector,
}

pub fn parse_torus_payload(p: &Value, strict: bool) -> SResult<TorusProblem> {
    check_fields(
        p,
        &["rank", "weights", "tau", "vector", "pairing_scale", "xi_list"],
        strict,
        "payload",
    )?;
    let rank = p
        .get("rank")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| SchemaError("payload.rank missing".into()))? as usize;
    let weights_v = p
        .get("weights")
        .and_then(|v| v.as_array())
        .ok_or_else(|| SchemaError("payload.weights missing".into()))?;
    let mut weights = Vec::with_capacity(weights_v.len());
    for (j, w) in weights_v.iter().enumerate() {
        let row = w
            .as_array()
            .ok_or_else(|| SchemaError(format!("weights[{j}]: expected an array")))?;
        let mut cov = Vec::with_capacity(row.len());
        for (k, e) in row.iter().enumerate() {
            cov.push(json_rat(e, &format!("weights[{j}][{k}]"))?);
        }
        weights.push(cov);
    }
    let tau: Vec<Rat> = match p.get("tau") {
        None | Some(Value::Null) => vec![Rat::from_integer(BigInt::from(0)); rank],
        Some(Value::Array(ts)) => ts
            .iter()
            .enumerate()
            .map(|(k, t)| json_rat(t, &format!("tau[{k}]")))
            .collect::<SResult<Vec<_>>>()?,
        _ => return err("tau must be an array of rationals"),
    };
    let scale: Rat = match p.get("pairing_scale") {
        None | Some(Value::Null) => Rat::from_integer(BigInt::from(1)),
        Some(v) => json_rat(v, "pairing_scale")?,
    };
    // tau covector folds in the pairing scale; weights are unaffected
    let tau_cov: Vec<Rat> = tau.iter().map(|t| t * &scale).collect();
    let exact = TorusActionExact::new(rank, weights.clone(), tau_cov)
        .map_err(|e| SchemaError(e.to_string()))?;
    let weights_f: Vec<Vec<f64>> =
        weights.iter().map(|w| w.iter().map(rat_to_f64).collect()).collect();
    let tau_f: Vec<f64> = tau.iter().map(rat_to_f64).collect();
    let mut float =
        ActionDescriptor::torus(rank, ActionKind::Linear, weights_f, Some(tau_f))
            .map_err(|e| SchemaError(e.to_string()))?;
    float.group = float.group.with_pairing_scale(rat_to_f64(&scale));
    let vector = json_cvector(
        p.get("vector").unwrap_or(&Value::Null),
        "payload.vector",
    )?;
    if vector.len() != weights_v.len() {
        return err(format!(
            "vector length {} does not match the {} weights",
            vector.len(),
            weights_v.len()
        ));
    }
    Ok(TorusProblem { exact, float, vector })
}

pub struct MatrixActionProblem {
    pub action: ActionDescriptor,
    pub point: PointState,
}

pub fn parse_matrix_action_payload(
    p: &Value,
    projective: bool,
    strict: bool,
) -> SResult<MatrixActionProblem> {
    check_fields(p, &["group", "rep", "tau", "vector", "xi_list"], strict, "payload")?;
    let group = json_group(
        p.get("group").unwrap_or(&Value::Null),
        strict,
        "payload.group",
    )?;
    let kind = if projective { ActionKind::Projective } else { ActionKind::Linear };
    let rep = p
        .get("rep")
        .ok_or_else(|| SchemaError("payload.rep missing".into()))?;
    check_fields(rep, &["type", "weights", "matrices"], strict, "payload.rep")?;
    let rep_type = rep
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| SchemaError("payload.rep.type missing".into()))?;
    let tau_matrix = |action_tau: &Value| -> SResult<Option<CMatrix>> {
        match action_tau {
            Value::Null => Ok(None),
            Value::Array(cs) => {
                let center = group.center_basis();
                if cs.len() != center.len() {
                    return err(format!(
                        "tau has {} coefficients but the center has dimension {}",
                        cs.len(),
                        center.len()
                    ));
                }
                let n = group.ambient_dim();
                let mut t = CMatrix::zeros(n, n);
                for (k, c) in cs.iter().enumerate() {
                    let c = json_f64(c, &format!("tau[{k}]"))?;
                    t += &center[k] * Complex::new(c, 0.0);
                }
                Ok(Some(t))
            }
            _ => err("tau must be an array of center coefficients"),
        }
    };
    let action = match rep_type {
        "weights" => {
            let rank = group.ambient_dim();
            let ws = rep
                .get("weights")
                .and_then(|w| w.as_array())
                .ok_or_else(|| SchemaError("rep.weights missing".into()))?;
            let mut weights = Vec::new();
            for (j, w) in ws.iter().enumerate() {
                let row = w
                    .as_array()
                    .ok_or_else(|| SchemaError(format!("rep.weights[{j}] not an array")))?;
                let mut cov = Vec::new();
                for (k, e) in row.iter().enumerate() {
                    cov.push(json_f64(e, &format!("rep.weights[{j}][{k}]"))?);
                }
                weights.push(cov);
            }
            let tau_center = match p.get("tau") {
                None | Some(Value::Null) => None,
                Some(Value::Array(cs)) => Some(
                    cs.iter()
                        .enumerate()
                        .map(|(k, c)| json_f64(c, &format!("tau[{k}]")))
                        .collect::<SResult<Vec<_>>>()?,
                ),
                _ => return err("tau must be an array"),
            };
            ActionDescriptor::torus(rank, kind, weights, tau_center)
                .map_err(|e| SchemaError(e.to_string()))?
        }
        "matrices" => {
            let ms = rep
                .get("matrices")
                .and_then(|m| m.as_array())
                .ok_or_else(|| SchemaError("rep.matrices missing".into()))?;
            let matrices = ms
                .iter()
                .enumerate()
                .map(|(i, m)| json_cmatrix(m, &format!("rep.matrices[{i}]")))
                .collect::<SResult<Vec<_>>>()?;
            let tau = tau_matrix(p.get("tau").unwrap_or(&Value::Null))?;
            ActionDescriptor::matrix_rep(group, kind, matrices, tau)
                .map_err(|e| SchemaError(e.to_string()))?
        }
        other => return err(format!("unknown rep type \"{other}\"")),
    };
    let vector = json_cvector(p.get("vector").unwrap_or(&Value::Null), "payload.vector")?;
    if vector.len() != action.dim_v {
        return err(format!(
            "vector length {} does not match dim V = {}",
            vector.len(),
            action.dim_v
        ));
    }
    let point = if projective {
        PointState::projective(vector).map_err(|e| SchemaError(e.to_string()))?
    } else {
        PointState::linear(vector)
    };
    Ok(MatrixActionProblem { action, point })
}

pub struct VortexPayload {
    pub problem: VortexProblem,
    pub t_list: Option<Vec<f64>>,
    pub tol: f64,
    pub max_iter: usize,
}

pub fn parse_vortex_payload(p: &Value, strict: bool) -> SResult<VortexPayload> {
    check_fields(
        p,
        &["grid_n", "degree", "t_param", "m", "t_list", "tol", "max_iter"],
        strict,
        "payload",
    )?;
    let grid_n = p
        .get("grid_n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| SchemaError("payload.grid_n missing".into()))? as usize;
    let degree = p
        .get("degree")
        .and_then(|v| v.as_i64())
        .ok_or_else(|| SchemaError("payload.degree missing".into()))?;
    let t_param = json_f64(p.get("t_param").unwrap_or(&Value::Null), "payload.t_param")?;
    let m_spec = p.get("m").ok_or_else(|| SchemaError("payload.m missing".into()))?;
    check_fields(m_spec, &["type", "values", "sigma", "total_mass", "value"], strict, "payload.m")?;
    let m = match m_spec.get("type").and_then(|t| t.as_str()) {
        Some("values") => {
            let vals = m_spec
                .get("values")
                .and_then(|v| v.as_array())
                .ok_or_else(|| SchemaError("m.values missing".into()))?;
            vals.iter()
                .enumerate()
                .map(|(i, v)| json_f64(v, &format!("m.values[{i}]")))
                .collect::<SResult<Vec<f64>>>()?
        }
        Some("gaussian") => {
            let sigma = json_f64(m_spec.get("sigma").unwrap_or(&Value::Null), "m.sigma")?;
            let mass =
                json_f64(m_spec.get("total_mass").unwrap_or(&Value::Null), "m.total_mass")?;
            momap_core::vortex::gaussian_bump(grid_n, sigma, mass)
        }
        Some("constant") => {
            let value = json_f64(m_spec.get("value").unwrap_or(&Value::Null), "m.value")?;
            vec![value; grid_n * grid_n]
        }
        _ => return err("m.type must be one of values|gaussian|constant"),
    };
    let problem = VortexProblem::new(grid_n, degree, m, t_param)
        .map_err(|e| SchemaError(e.to_string()))?;
    let t_list = match p.get("t_list") {
        None | Some(Value::Null) => None,
        Some(Value::Array(ts)) => Some(
            ts.iter()
                .enumerate()
                .map(|(i, t)| json_f64(t, &format!("t_list[{i}]")))
                .collect::<SResult<Vec<f64>>>()?,
        ),
        _ => return err("t_list must be an array of numbers"),
    };
    let tol = match p.get("tol") {
        None | Some(Value::Null) => 1e-10,
        Some(v) => json_f64(v, "payload.tol")?,
    };
    let max_iter = match p.get("max_iter") {
        None | Some(Value::Null) => 300,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| SchemaError("max_iter must be an integer".into()))?
            as usize,
    };
    Ok(VortexPayload { problem, t_list, tol, max_iter })
}

pub struct PairPayload {
    pub data: SplitPairData,
    pub quot: bool,
}

pub fn parse_pair_payload(p: &Value, strict: bool) -> SResult<PairPayload> {
    check_fields(
        p,
        &["pair_kind", "summand_degrees", "phi_nonzero", "d_phi_degree", "tau"],
        strict,
        "payload",
    )?;
    let quot = match p.get("pair_kind").and_then(|k| k.as_str()) {
        Some("oriented") => false,
        Some("quot") => true,
        _ => return err("pair_kind must be \"oriented\" or \"quot\""),
    };
    let degrees = p
        .get("summand_degrees")
        .and_then(|v| v.as_array())
        .ok_or_else(|| SchemaError("summand_degrees missing".into()))?
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.as_i64()
                .ok_or_else(|| SchemaError(format!("summand_degrees[{i}] must be an integer")))
        })
        .collect::<SResult<Vec<i64>>>()?;
    let phi = p
        .get("phi_nonzero")
        .and_then(|v| v.as_array())
        .ok_or_else(|| SchemaError("phi_nonzero missing".into()))?
        .iter()
        .enumerate()
        .map(|(i, b)| {
            b.as_bool()
                .ok_or_else(|| SchemaError(format!("phi_nonzero[{i}] must be a boolean")))
        })
        .collect::<SResult<Vec<bool>>>()?;
    let d_phi = match p.get("d_phi_degree") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_i64()
                .ok_or_else(|| SchemaError("d_phi_degree must be an integer".into()))?,
        ),
    };
    let tau = match p.get("tau") {
        None | Some(Value::Null) => Rat::from_integer(BigInt::from(0)),
        Some(v) => json_rat(v, "payload.tau")?,
    };
    Ok(PairPayload {
        data: SplitPairData {
            summand_degrees: degrees,
            phi_nonzero: phi,
            d_phi_degree: d_phi,
            tau,
        },
        quot,
    })
}

/// The xi list for the `weights` subcommand: diagonal rational vectors for
/// torus payloads, full Hermitian matrices otherwise.
pub fn parse_xi_list_diag(p: &Value, rank: usize) -> SResult<Vec<Vec<f64>>> {
    let xs = p
        .get("xi_list")
        .and_then(|v| v.as_array())
        .ok_or_else(|| SchemaError("payload.xi_list required for the weights table".into()))?;
    let mut out = Vec::with_capacity(xs.len());
    for (i, x) in xs.iter().enumerate() {
        let row = x
            .as_array()
            .filter(|r| r.len() == rank)
            .ok_or_else(|| SchemaError(format!("xi_list[{i}]: expected {rank} entries")))?;
        let mut diag = Vec::with_capacity(rank);
        for (k, e) in row.iter().enumerate() {
            diag.push(json_f64(e, &format!("xi_list[{i}][{k}]"))?);
        }
        out.push(diag);
    }
    Ok(out)
}

pub fn parse_xi_list_matrices(p: &Value) -> SResult<Vec<CMatrix>> {
    let xs = p
        .get("xi_list")
        .and_then(|v| v.as_array())
        .ok_or_else(|| SchemaError("payload.xi_list required for the weights table".into()))?;
    xs.iter()
        .enumerate()
        .map(|(i, x)| json_cmatrix(x, &format!("xi_list[{i}]")))
        .collect()
}
