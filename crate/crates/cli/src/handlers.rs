//! Problem-kind handlers behind a common trait, registered by name and
//! selected at runtime from the problem file's `kind` field.

use crate::schema::{self, ProblemFile, SchemaError};
use momap_core::action::WeightValue;
use momap_core::cone::Rat;
use momap_core::error::Error as CoreError;
use momap_core::linalg::CMatrix;
use momap_core::pairs::{oriented_pair_classify, quot_pair_classify, PairVerdict};
use momap_core::solver::{solve_moment_zero, JacobianMode, SolveOptions, SolveOutcome};
use momap_core::stability::{general_classify, torus_classify, StabilityVerdict};
use momap_core::vortex::{continuation_in_t, solve_vortex, VortexOutcome};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Solve,
    Weights,
    Vortex,
    Pair,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Solve => "solve",
            Command::Weights => "weights",
            Command::Vortex => "vortex",
            Command::Pair => "pair",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Flags {
    pub drop_tol: Option<f64>,
    pub newton_tol: Option<f64>,
    pub eps_min: Option<f64>,
    pub stab_tol: Option<f64>,
    pub jacobian: JacobianMode,
    pub trace: bool,
    pub strict: bool,
}

impl Flags {
    pub fn solve_options(&self) -> SolveOptions {
        let mut opts = SolveOptions::default();
        if let Some(t) = self.newton_tol {
            opts.newton_tol = t;
        }
        if let Some(e) = self.eps_min {
            opts.eps_min = e;
        }
        if let Some(s) = self.stab_tol {
            opts.stab_tol = s;
        }
        opts.jacobian_mode = self.jacobian;
        opts
    }
}

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Inconclusive(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Inconclusive(_) => 3,
            CliError::Other(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Inconclusive(m) | CliError::Other(m) => m,
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Inconclusive(m) => CliError::Inconclusive(m),
            CoreError::NonRationalWeights(m) | CoreError::InvalidProblem(m) => {
                CliError::Schema(m)
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

pub trait KindHandler: Sync {
    fn kind(&self) -> &'static str;
    fn run(&self, cmd: Command, problem: &ProblemFile, flags: &Flags)
        -> Result<Value, CliError>;
}

pub fn registry() -> Vec<Box<dyn KindHandler>> {
    vec![
        Box::new(TorusHandler),
        Box::new(MatrixActionHandler { projective: false }),
        Box::new(MatrixActionHandler { projective: true }),
        Box::new(VortexHandler),
        Box::new(PairHandler),
    ]
}

pub fn dispatch(
    cmd: Command,
    problem: &ProblemFile,
    flags: &Flags,
) -> Result<Value, CliError> {
    let handlers = registry();
    let handler = handlers
        .iter()
        .find(|h| h.kind() == problem.kind)
        .ok_or_else(|| CliError::Schema(format!("no handler for kind \"{}\"", problem.kind)))?;
    handler.run(cmd, problem, flags)
}

fn wrong_command(cmd: Command, kind: &str) -> CliError {
    CliError::Schema(format!(
        "subcommand \"{}\" does not apply to problems of kind \"{kind}\"",
        cmd.name()
    ))
}

// value builders

fn rat_value(r: &Rat) -> Value {
    json!({ "exact": r.to_string(), "approx": r.to_f64().unwrap_or(f64::NAN) })
}

fn weight_value(w: &WeightValue) -> Value {
    match w {
        WeightValue::Finite(v) => json!(v),
        WeightValue::PlusInfinity => json!("+inf"),
    }
}

fn cmatrix_value(m: &CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<Value> =
                (0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect();
            json!(row)
        })
        .collect();
    json!(rows)
}

fn verdict_value(v: &StabilityVerdict) -> Value {
    let mut out = json!({
        "class": format!("{:?}", v.class),
        "polystable": v.class.is_polystable(),
        "semistable": v.class.is_semistable(),
        "method": format!("{:?}", v.method),
        "diagnostics": v.diagnostics,
    });
    let obj = out.as_object_mut().unwrap();
    if let Some(w) = &v.witness_rational {
        obj.insert("witness".into(), json!(w.iter().map(rat_value).collect::<Vec<_>>()));
    }
    if let Some(m) = &v.witness_matrix {
        obj.insert("witness_matrix".into(), cmatrix_value(m));
    }
    if let Some(basis) = &v.stabilizer_basis {
        obj.insert(
            "stabilizer_basis".into(),
            json!(basis
                .iter()
                .map(|b| b.iter().map(rat_value).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        );
    }
    out
}

fn solve_outcome_value(out: &SolveOutcome, trace: bool) -> Result<Value, CliError> {
    match out {
        SolveOutcome::Polystable(cert) => {
            let mut v = json!({
                "variant": "polystable",
                "s_final": cmatrix_value(&cert.s_final),
                "x_star": cert.x_star.vector.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                "mu_residual": cert.mu_residual,
            });
            if trace {
                v.as_object_mut().unwrap().insert(
                    "trace".into(),
                    serde_json::to_value(&cert.path).unwrap_or(Value::Null),
                );
            }
            Ok(v)
        }
        SolveOutcome::Unstable(cert) => {
            let mut v = json!({
                "variant": "unstable",
                "sigma": cmatrix_value(&cert.sigma),
                "sigma_weyl": cert.sigma_weyl,
                "weight_at_sigma": weight_value(&cert.weight_at_sigma),
            });
            if trace {
                v.as_object_mut().unwrap().insert(
                    "norm_history".into(),
                    json!(cert
                        .norm_history
                        .iter()
                        .map(|(e, s)| json!([e, s]))
                        .collect::<Vec<_>>()),
                );
            }
            Ok(v)
        }
        SolveOutcome::Inconclusive { reason, .. } => {
            Err(CliError::Inconclusive(reason.clone()))
        }
    }
}

struct TorusHandler;

impl KindHandler for TorusHandler {
    fn kind(&self) -> &'static str {
        "torus_action"
    }

    fn run(
        &self,
        cmd: Command,
        problem: &ProblemFile,
        flags: &Flags,
    ) -> Result<Value, CliError> {
        let parsed = schema::parse_torus_payload(&problem.payload, flags.strict)?;
        let drop_tol = flags.drop_tol.unwrap_or(momap_core::action::DEFAULT_DROP_TOL);
        match cmd {
            Command::Classify => {
                let verdict = torus_classify(&parsed.exact, &parsed.vector, drop_tol)?;
                Ok(verdict_value(&verdict))
            }
            Command::Solve => {
                let mut action = parsed.float.clone().with_drop_tol(drop_tol);
                action.drop_tol = drop_tol;
                let point = momap_core::action::PointState::linear(parsed.vector.clone());
                let out = solve_moment_zero(&action, &point, &flags.solve_options())?;
                solve_outcome_value(&out, flags.trace)
            }
            Command::Weights => {
                let xi_list =
                    schema::parse_xi_list_diag(&problem.payload, parsed.exact.rank)?;
                let support = parsed.exact.support(&parsed.vector, drop_tol);
                let mut rows = Vec::new();
                for (i, diag) in xi_list.iter().enumerate() {
                    // exact where the entries are exactly representable
                    let xi_rat: Vec<Rat> = diag
                        .iter()
                        .map(|&v| {
                            Rat::from_float(v).ok_or_else(|| {
                                CliError::Schema(format!("xi_list[{i}] is not finite"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    let w = parsed.exact.maximal_weight_exact(&support, &xi_rat);
                    rows.push(json!({
                        "index": i,
                        "xi": diag,
                        "weight": match w {
                            None => json!("+inf"),
                            Some(r) => json!(r.to_f64().unwrap_or(f64::NAN)),
                        },
                    }));
                }
                Ok(json!({ "table": rows }))
            }
            _ => Err(wrong_command(cmd, self.kind())),
        }
    }
}

struct MatrixActionHandler {
    projective: bool,
}

impl KindHandler for MatrixActionHandler {
    fn kind(&self) -> &'static str {
        if self.projective { "projective_action" } else { "linear_action" }
    }

    fn run(
        &self,
        cmd: Command,
        problem: &ProblemFile,
        flags: &Flags,
    ) -> Result<Value, CliError> {
        let parsed =
            schema::parse_matrix_action_payload(&problem.payload, self.projective, flags.strict)?;
        let mut action = parsed.action;
        if let Some(t) = flags.drop_tol {
            action.drop_tol = t;
        }
        match cmd {
            Command::Classify => {
                let verdict = general_classify(&action, &parsed.point, &flags.solve_options())?;
                Ok(verdict_value(&verdict))
            }
            Command::Solve => {
                let out = solve_moment_zero(&action, &parsed.point, &flags.solve_options())?;
                solve_outcome_value(&out, flags.trace)
            }
            Command::Weights => {
                let xi_list = schema::parse_xi_list_matrices(&problem.payload)?;
                let mut rows = Vec::new();
                for (i, xi) in xi_list.iter().enumerate() {
                    let w = action.maximal_weight(xi, &parsed.point)?;
                    rows.push(json!({
                        "index": i,
                        "weight": weight_value(&w),
                    }));
                }
                Ok(json!({ "table": rows }))
            }
            _ => Err(wrong_command(cmd, self.kind())),
        }
    }
}

struct VortexHandler;

impl KindHandler for VortexHandler {
    fn kind(&self) -> &'static str {
        "vortex"
    }

    fn run(
        &self,
        cmd: Command,
        problem: &ProblemFile,
        flags: &Flags,
    ) -> Result<Value, CliError> {
        if cmd != Command::Vortex {
            return Err(wrong_command(cmd, self.kind()));
        }
        let parsed = schema::parse_vortex_payload(&problem.payload, flags.strict)?;
        if let Some(t_list) = &parsed.t_list {
            let rep =
                continuation_in_t(&parsed.problem, t_list, parsed.tol, parsed.max_iter)?;
            return Ok(json!({
                "variant": "scan",
                "threshold": rep.threshold,
                "entries": rep.entries.iter().map(|e| json!({
                    "t": e.t,
                    "solved": e.solved,
                    "min_u": e.min_u,
                    "residual_inf": if e.residual_inf.is_nan() { Value::Null } else { json!(e.residual_inf) },
                })).collect::<Vec<_>>(),
            }));
        }
        match solve_vortex(&parsed.problem, parsed.tol, parsed.max_iter)? {
            VortexOutcome::Solved(sol) => Ok(json!({
                "variant": "solved",
                "grid_n": parsed.problem.grid_n,
                "residual_inf": sol.residual_inf,
                "mass_identity_error": sol.mass_identity_error,
                "newton_iters": sol.newton_iters,
                "u": sol.u,
            })),
            VortexOutcome::Insolvable(diag) => Ok(json!({
                "variant": "insolvable",
                "mass_gap": diag.mass_gap,
                "min_u": diag.min_u,
                "newton_iters": diag.newton_iters,
                "reason": diag.reason,
            })),
        }
    }
}

struct PairHandler;

impl KindHandler for PairHandler {
    fn kind(&self) -> &'static str {
        "split_pair"
    }

    fn run(
        &self,
        cmd: Command,
        problem: &ProblemFile,
        flags: &Flags,
    ) -> Result<Value, CliError> {
        if cmd != Command::Pair {
            return Err(wrong_command(cmd, self.kind()));
        }
        let parsed = schema::parse_pair_payload(&problem.payload, flags.strict)?;
        let verdict: PairVerdict = if parsed.quot {
            quot_pair_classify(&parsed.data)?
        } else {
            oriented_pair_classify(&parsed.data)?
        };
        Ok(json!({
            "class": format!("{:?}", verdict.class),
            "reason": verdict.reason,
            "violated": verdict.violated.map(|s| json!({
                "summands": s.summands,
                "twist": s.twist,
            })),
        }))
    }
}

/// CSV projections for tabular outcomes.
pub fn to_csv(cmd: Command, outcome: &Value) -> Result<String, CliError> {
    match cmd {
        Command::Weights => {
            let rows = outcome
                .get("table")
                .and_then(|t| t.as_array())
                .ok_or_else(|| CliError::Other("no table in outcome".into()))?;
            let mut s = String::from("index,weight\n");
            for r in rows {
                let idx = r.get("index").and_then(|v| v.as_u64()).unwrap_or(0);
                let w = match r.get("weight") {
                    Some(Value::String(inf)) => inf.clone(),
                    Some(Value::Number(n)) => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
                    _ => "nan".into(),
                };
                s.push_str(&format!("{idx},{w}\n"));
            }
            Ok(s)
        }
        Command::Vortex => match outcome.get("variant").and_then(|v| v.as_str()) {
            Some("scan") => {
                let mut s = String::from("t,solved,min_u,residual_inf\n");
                for e in outcome.get("entries").and_then(|v| v.as_array()).unwrap_or(&vec![]) {
                    s.push_str(&format!(
                        "{:.16e},{},{:.16e},{}\n",
                        e.get("t").and_then(|v| v.as_f64()).unwrap_or(f64::NAN),
                        e.get("solved").and_then(|v| v.as_bool()).unwrap_or(false),
                        e.get("min_u").and_then(|v| v.as_f64()).unwrap_or(f64::NAN),
                        e.get("residual_inf")
                            .and_then(|v| v.as_f64())
                            .map(|f| format!("{f:.16e}"))
                            .unwrap_or_else(|| "".into()),
                    ));
                }
                Ok(s)
            }
            Some("solved") => {
                let n = outcome.get("grid_n").and_then(|v| v.as_u64()).unwrap_or(0) as usize;
                let u = outcome.get("u").and_then(|v| v.as_array()).cloned().unwrap_or_default();
                let mut s = String::from("i,j,u\n");
                for i in 0..n {
                    for j in 0..n {
                        let val = u
                            .get(i * n + j)
                            .and_then(|v| v.as_f64())
                            .unwrap_or(f64::NAN);
                        s.push_str(&format!("{i},{j},{val:.16e}\n"));
                    }
                }
                Ok(s)
            }
            _ => Err(CliError::Schema("csv output needs a scan or solved outcome".into())),
        },
        _ => Err(CliError::Schema(format!(
            "csv output is not defined for subcommand \"{}\"",
            cmd.name()
        ))),
    }
}
