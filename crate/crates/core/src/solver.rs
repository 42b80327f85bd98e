//! Continuity method for moment-map zeros: solve m(e^s x0) + eps*s = 0 on
//! the orthogonal complement of the stabilizer algebra and drive eps -> 0.
//! A bounded path certifies polystability with the reaching group element;
//! an unbounded path produces a normalized destabilizing direction.

use crate::action::{ActionDescriptor, PointState, WeightValue};
use crate::dexp::dexp_factor;
use crate::error::{Error, Result};
use crate::linalg::{cre, CMatrix};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JacobianMode {
    Exact,
    FiniteDifference,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub eps_start: f64,
    pub eps_min: f64,
    /// Newton convergence threshold on ||l(eps, s)||.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Geometric shrink factor of the eps schedule, in (0,1).
    pub step_shrink: f64,
    /// Instability declared at ||s|| > divergence_factor * (1 + ||m(x0)||).
    pub divergence_factor: f64,
    pub jacobian_mode: JacobianMode,
    /// Singular values below this count as stabilizer directions.
    pub stab_tol: f64,
    /// Total continuation-step budget (accepted plus failed attempts).
    pub max_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            eps_start: 1.0,
            eps_min: 1e-10,
            newton_tol: 1e-11,
            newton_max_iter: 50,
            step_shrink: 0.5,
            divergence_factor: 1e3,
            jacobian_mode: JacobianMode::Exact,
            stab_tol: 1e-8,
            max_steps: 600,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PathStep {
    pub eps: f64,
    pub s_norm: f64,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone)]
pub struct PolystableCert {
    /// Final correction in the stabilizer complement at x0.
    pub s_final: CMatrix,
    /// e^{s_final} x0, the computed moment-map zero.
    pub x_star: PointState,
    /// Full (unprojected) moment norm at x_star.
    pub mu_residual: f64,
    pub path: Vec<PathStep>,
}

#[derive(Debug, Clone)]
pub struct UnstableCert {
    /// Normalized destabilizing direction, orthogonal to the stabilizer.
    pub sigma: CMatrix,
    /// Conjugacy-class representative of sigma.
    pub sigma_weyl: Vec<f64>,
    pub weight_at_sigma: WeightValue,
    /// (eps, ||s||) along the accepted continuation steps.
    pub norm_history: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Polystable(PolystableCert),
    Unstable(UnstableCert),
    Inconclusive { reason: String, path: Vec<PathStep> },
}

/// The residual l(eps, s) projected to the stabilizer complement, kept both
/// as an ambient matrix and in complement coordinates.
#[derive(Debug, Clone)]
pub struct PerturbedResidual {
    pub value: CMatrix,
    pub coeffs: DVector<f64>,
}

/// Solver state tied to one base point x0.
#[derive(Debug, Clone)]
pub struct Initialized {
    pub x0: PointState,
    /// s1 = -m(x), the exact solution of l(1, s) = 0.
    pub s1: CMatrix,
    /// h-orthonormal basis of the complement of i*k_{x0} in i*k.
    pub complement: Vec<CMatrix>,
    /// ||m(x0)||, the constant in the a-priori bound ||s|| <= ||m(x0)||/eps.
    pub moment_norm_x0: f64,
    /// Component of m(x) along the stabilizer algebra at x. On stabilizer
    /// directions the weight equals the moment pairing, so a nonzero value
    /// is a destabilizing obstruction that no group motion removes; it is
    /// measured at the original point where the scales are honest.
    pub stabilizer_obstruction: CMatrix,
}

/// h-orthonormal basis of the complement of the stabilizer algebra i*k_x
/// inside i*k. The stabilizer is the nullspace of u -> u^#_x on k.
pub fn stabilizer_complement(
    a: &ActionDescriptor,
    x: &PointState,
    stab_tol: f64,
) -> Result<Vec<CMatrix>> {
    let (basis_coeff, _) = stabilizer_svd(a, x, stab_tol)?;
    let basis = a.ik_basis();
    Ok(basis_coeff
        .into_iter()
        .map(|coeffs| {
            let n = a.group.ambient_dim();
            let mut m = CMatrix::zeros(n, n);
            for (c, b) in coeffs.iter().zip(basis) {
                m += b * cre(*c);
            }
            m
        })
        .collect())
}

/// Smallest singular value of the stacked stabilizer equations at x; zero
/// means a nontrivial infinitesimal stabilizer.
pub fn stabilizer_min_singular_value(a: &ActionDescriptor, x: &PointState) -> Result<f64> {
    let d = a.ik_basis().len();
    let m = stabilizer_matrix(a, x)?;
    if d > m.nrows() {
        return Ok(0.0);
    }
    let svd = m.svd(false, false);
    Ok(svd
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, &s| acc.min(s)))
}

fn stabilizer_matrix(a: &ActionDescriptor, x: &PointState) -> Result<DMatrix<f64>> {
    let basis = a.ik_basis();
    let d = basis.len();
    let rows = 2 * a.dim_v;
    let mut m = DMatrix::<f64>::zeros(rows, d);
    for (j, b) in basis.iter().enumerate() {
        let u = b * nalgebra::Complex::new(0.0, 1.0);
        let w = a.fundamental_field(&u, x)?;
        for i in 0..a.dim_v {
            m[(i, j)] = w[i].re;
            m[(i + a.dim_v, j)] = w[i].im;
        }
    }
    // row equilibration per coordinate: points of the form e^{-s1} x carry
    // component imbalances of many orders, which would otherwise hide
    // genuine stabilizer constraints below the relative SVD cutoff
    for i in 0..a.dim_v {
        let mut nrm = 0.0f64;
        for j in 0..d {
            nrm += m[(i, j)] * m[(i, j)] + m[(i + a.dim_v, j)] * m[(i + a.dim_v, j)];
        }
        let nrm = nrm.sqrt();
        if nrm > 0.0 {
            for j in 0..d {
                m[(i, j)] /= nrm;
                m[(i + a.dim_v, j)] /= nrm;
            }
        }
    }
    Ok(m)
}

fn stabilizer_svd(
    a: &ActionDescriptor,
    x: &PointState,
    stab_tol: f64,
) -> Result<(Vec<Vec<f64>>, f64)> {
    let m = stabilizer_matrix(a, x)?;
    let d = m.ncols();
    let svd = m.svd(false, true);
    let vt = svd.v_t.as_ref().unwrap();
    let smax = svd.singular_values.iter().fold(0.0f64, |acc, &s| acc.max(s));
    let cutoff = stab_tol * smax.max(1.0);
    let mut rows = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            rows.push((0..d).map(|j| vt[(k, j)]).collect());
        }
    }
    Ok((rows, smax))
}

/// Step (a) of the continuation: s1 = -m(x), x0 = e^{-s1} x, so that
/// (eps, s) = (1, s1) solves the perturbed equation exactly.
pub fn initialize(a: &ActionDescriptor, x: &PointState, opts: &SolveOptions) -> Result<Initialized> {
    let m_x = a.moment_value(x)?;
    let s1 = -&m_x;
    let x0 = a.act_exp(&m_x, x)?;
    let complement = stabilizer_complement(a, &x0, opts.stab_tol)?;
    let m_x0 = a.moment_value(&x0)?;
    let moment_norm_x0 = a.group.h_norm(&m_x0);
    let complement_at_x = stabilizer_complement(a, x, opts.stab_tol)?;
    let mut proj = CMatrix::zeros(m_x.nrows(), m_x.ncols());
    for e in &complement_at_x {
        proj += e * cre(a.group.pairing(&m_x, e));
    }
    let stabilizer_obstruction = &m_x - &proj;
    Ok(Initialized { x0, s1, complement, moment_norm_x0, stabilizer_obstruction })
}

/// Coefficients of the complement projection of an ambient matrix.
pub fn project_to_complement(a: &ActionDescriptor, init: &Initialized, m: &CMatrix) -> DVector<f64> {
    DVector::from_iterator(
        init.complement.len(),
        init.complement.iter().map(|e| a.group.pairing(m, e)),
    )
}

/// Matrix form of complement coefficients.
pub fn complement_matrix(a: &ActionDescriptor, init: &Initialized, coeffs: &DVector<f64>) -> CMatrix {
    let n = a.group.ambient_dim();
    let mut m = CMatrix::zeros(n, n);
    for (c, e) in coeffs.iter().zip(&init.complement) {
        m += e * cre(*c);
    }
    m
}

/// l(eps, s) = proj(m(e^s x0)) + eps s in complement coordinates.
pub fn residual(
    a: &ActionDescriptor,
    init: &Initialized,
    eps: f64,
    s_coeffs: &DVector<f64>,
) -> Result<PerturbedResidual> {
    let s = complement_matrix(a, init, s_coeffs);
    let y = a.act_exp(&s, &init.x0)?;
    let m = a.moment_value(&y)?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ActionOverflow);
    }
    let coeffs = project_to_complement(a, init, &m) + s_coeffs * eps;
    let value = complement_matrix(a, init, &coeffs);
    Ok(PerturbedResidual { value, coeffs })
}

const JACOBIAN_COND_LIMIT: f64 = 1e12;

/// dl/ds as a dense operator on complement coordinates. Exact mode pushes
/// each basis direction through the differential of exp and the bilinear
/// moment derivative; finite-difference mode uses central differences of
/// the residual with step 1e-6 (1 + ||s||).
pub fn jacobian(
    a: &ActionDescriptor,
    init: &Initialized,
    eps: f64,
    s_coeffs: &DVector<f64>,
    mode: JacobianMode,
) -> Result<DMatrix<f64>> {
    let d = init.complement.len();
    let mut j = DMatrix::<f64>::zeros(d, d);
    match mode {
        JacobianMode::Exact => {
            let s = complement_matrix(a, init, s_coeffs);
            let y = a.act_exp(&s, &init.x0)?;
            for k in 0..d {
                let sdot = &init.complement[k];
                let f = dexp_factor(&s, sdot);
                let w = a.fundamental_field(&f.sigma, &y)?;
                let dm = a.moment_derivative(&y, &w)?;
                let col = project_to_complement(a, init, &dm);
                for i in 0..d {
                    j[(i, k)] = col[i] + if i == k { eps } else { 0.0 };
                }
            }
        }
        JacobianMode::FiniteDifference => {
            let h = 1e-6 * (1.0 + s_coeffs.norm());
            for k in 0..d {
                let mut sp = s_coeffs.clone();
                sp[k] += h;
                let mut sm = s_coeffs.clone();
                sm[k] -= h;
                let rp = residual(a, init, eps, &sp)?;
                let rm = residual(a, init, eps, &sm)?;
                let col = (rp.coeffs - rm.coeffs) / (2.0 * h);
                for i in 0..d {
                    j[(i, k)] = col[i];
                }
            }
        }
    }
    if j.iter().any(|v| !v.is_finite()) {
        return Err(Error::ActionOverflow);
    }
    let svd = j.clone().svd(false, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let smin = svd.singular_values.iter().fold(f64::INFINITY, |a, &s| a.min(s));
    if smax > 0.0 && smax / smin.max(f64::MIN_POSITIVE) > JACOBIAN_COND_LIMIT {
        return Err(Error::SingularJacobian(smax / smin.max(f64::MIN_POSITIVE)));
    }
    Ok(j)
}

/// Newton correction at fixed eps. Returns (s, residual_norm, iters).
fn newton_correct(
    a: &ActionDescriptor,
    init: &Initialized,
    eps: f64,
    s_start: &DVector<f64>,
    opts: &SolveOptions,
) -> Result<(DVector<f64>, f64, usize)> {
    let mut s = s_start.clone();
    let mut r = residual(a, init, eps, &s)?;
    let mut rnorm = r.coeffs.norm();
    for iter in 0..opts.newton_max_iter {
        if rnorm <= opts.newton_tol {
            return Ok((s, rnorm, iter));
        }
        let j = jacobian(a, init, eps, &s, opts.jacobian_mode)?;
        let delta = j
            .lu()
            .solve(&(-&r.coeffs))
            .ok_or_else(|| Error::LinearSolveFailure("newton step".into()))?;
        // Armijo backtracking on the residual norm
        let mut alpha = 1.0f64;
        let mut accepted = false;
        while alpha >= 1.0 / 1024.0 {
            let cand = &s + &delta * alpha;
            match residual(a, init, eps, &cand) {
                Ok(rc) => {
                    let cnorm = rc.coeffs.norm();
                    if cnorm <= (1.0 - 1e-4 * alpha) * rnorm {
                        s = cand;
                        r = rc;
                        rnorm = cnorm;
                        accepted = true;
                        break;
                    }
                }
                Err(Error::ActionOverflow) => {}
                Err(e) => return Err(e),
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::LinearSolveFailure(format!(
                "newton stalled at eps {eps:.3e} with residual {rnorm:.3e}"
            )));
        }
    }
    if rnorm <= opts.newton_tol {
        Ok((s, rnorm, opts.newton_max_iter))
    } else {
        Err(Error::LinearSolveFailure(format!(
            "newton budget exhausted at eps {eps:.3e}, residual {rnorm:.3e}"
        )))
    }
}

/// A coordinate supported at x0 whose normalized magnitude shrank by more
/// than twelve orders marks an escape to a boundary orbit.
const COLLAPSE_FACTOR: f64 = 1e-12;

fn support_collapsed(x0: &PointState, x_star: &PointState, drop_tol: f64) -> bool {
    let n0 = x0.vector.norm();
    let ns = x_star.vector.norm();
    if n0 == 0.0 || ns == 0.0 {
        return false;
    }
    x0.vector.iter().zip(x_star.vector.iter()).any(|(a, b)| {
        let rel0 = a.norm() / n0;
        let rels = b.norm() / ns;
        rel0 > drop_tol && rels < COLLAPSE_FACTOR * rel0
    })
}

/// Signature of a divergent path: the growth rate of ||s|| per unit of
/// ln(1/eps) is positive, significant, and non-decaying over the last
/// `window` accepted steps. On the log-divergent branch this rate tends to
/// a constant and on the fast branch it grows like ||s||; on bounded paths
/// it decays like eps. Normalizing by the log-eps decrement makes the test
/// insensitive to the adaptive step-size backoff.
fn growing(history: &[(f64, f64)], window: usize) -> bool {
    if history.len() < window + 2 {
        return false;
    }
    let tail = &history[history.len() - (window + 2)..];
    let snorm = tail.last().unwrap().1;
    let floor = 1e-12 * (1.0 + snorm);
    let mut rates = Vec::with_capacity(window + 1);
    for w in tail.windows(2) {
        let dlog = (w[0].0 / w[1].0).ln();
        if dlog <= 0.0 {
            return false;
        }
        rates.push((w[1].1 - w[0].1) / dlog);
    }
    rates.iter().all(|&r| r > floor) && rates.windows(2).all(|r| r[1] >= 0.8 * r[0])
}

/// The continuity method. Returns a polystability certificate (bounded
/// path, moment zero reached), an instability certificate (divergent path
/// with its normalized limit direction), or Inconclusive.
pub fn solve_moment_zero(
    a: &ActionDescriptor,
    x: &PointState,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    let init = initialize(a, x, opts)?;
    let obstruction = a.group.h_norm(&init.stabilizer_obstruction);
    let moment_scale = a.group.h_norm(&init.s1);

    // moment component along the stabilizer: constant along the flow, so a
    // nonzero value certifies a destabilizing direction immediately (the
    // weight on a stabilizer direction is the moment pairing itself)
    if obstruction > (10.0 * opts.newton_tol).max(1e-9 * (1.0 + moment_scale)) {
        let sigma = -&init.stabilizer_obstruction * cre(1.0 / obstruction);
        let weight = a.maximal_weight(&sigma, x)?;
        let sigma_weyl =
            crate::spectral::HermitianTypeVector::new(sigma.clone()).weyl_representative();
        return Ok(SolveOutcome::Unstable(UnstableCert {
            sigma,
            sigma_weyl,
            weight_at_sigma: weight,
            norm_history: vec![],
        }));
    }

    let d = init.complement.len();
    let mut path: Vec<PathStep> = Vec::new();
    let mut history: Vec<(f64, f64)> = Vec::new();

    let mut s = project_to_complement(a, &init, &init.s1);
    let mut eps = opts.eps_start;
    match newton_correct(a, &init, eps, &s, opts) {
        Ok((s_new, rnorm, iters)) => {
            s = s_new;
            path.push(PathStep { eps, s_norm: s.norm(), residual_norm: rnorm, newton_iters: iters });
            history.push((eps, s.norm()));
        }
        Err(e) => {
            return Ok(SolveOutcome::Inconclusive {
                reason: format!("initial solve at eps = {} failed: {e}", opts.eps_start),
                path,
            })
        }
    }
    if d == 0 {
        // everything stabilizes x0; the obstruction test above was the
        // whole story and the moment already vanishes on the complement
        let m = a.moment_value(&init.x0)?;
        return Ok(SolveOutcome::Polystable(PolystableCert {
            s_final: CMatrix::zeros(a.group.ambient_dim(), a.group.ambient_dim()),
            x_star: init.x0.clone(),
            mu_residual: a.group.h_norm(&m),
            path,
        }));
    }

    // scale by the moment at the original point: the base point e^{-s1} x
    // of the continuation can carry an exponentially inflated moment
    let mut shrink = opts.step_shrink;
    let divergence_bound = opts.divergence_factor * (1.0 + moment_scale);

    for _ in 0..opts.max_steps {
        let eps_next = eps * shrink;
        if eps_next < 1e-300 {
            return Ok(SolveOutcome::Inconclusive {
                reason: "eps underflow without certificate".into(),
                path,
            });
        }
        match newton_correct(a, &init, eps_next, &s, opts) {
            Ok((s_new, rnorm, iters)) => {
                eps = eps_next;
                s = s_new;
                shrink = opts.step_shrink;
                path.push(PathStep {
                    eps,
                    s_norm: s.norm(),
                    residual_norm: rnorm,
                    newton_iters: iters,
                });
                history.push((eps, s.norm()));

                if s.norm() > divergence_bound && growing(&history, 5) {
                    return Ok(unstable_from_path(a, &init, &s, history));
                }
                if eps <= opts.eps_min {
                    // growth first: on the strictly semistable branch the
                    // moment residual also vanishes (the zero is attained
                    // only in the boundary orbit), so a small residual with
                    // steadily growing ||s|| is not a polystability proof
                    if growing(&history, 3) {
                        return Ok(unstable_from_path(a, &init, &s, history));
                    }
                    let y = a.act_exp(&complement_matrix(a, &init, &s), &init.x0)?;
                    let mu_full = a.group.h_norm(&a.moment_value(&y)?);
                    if mu_full <= 10.0 * opts.newton_tol {
                        if support_collapsed(&init.x0, &y, a.drop_tol) {
                            // the computed zero lies on a boundary orbit:
                            // some component present at x0 was driven to
                            // relative nothingness along the path
                            return Ok(unstable_from_path(a, &init, &s, history));
                        }
                        return Ok(SolveOutcome::Polystable(PolystableCert {
                            s_final: complement_matrix(a, &init, &s),
                            x_star: y,
                            mu_residual: mu_full,
                            path,
                        }));
                    }
                }
            }
            Err(Error::ActionOverflow)
            | Err(Error::SingularJacobian(_))
            | Err(Error::LinearSolveFailure(_)) => {
                shrink = shrink.sqrt();
                if shrink > 1.0 - 1e-9 {
                    if growing(&history, 3) {
                        return Ok(unstable_from_path(a, &init, &s, history));
                    }
                    return Ok(SolveOutcome::Inconclusive {
                        reason: format!("continuation stuck at eps = {eps:.3e}"),
                        path,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SolveOutcome::Inconclusive { reason: "continuation budget exhausted".into(), path })
}

fn unstable_from_path(
    a: &ActionDescriptor,
    init: &Initialized,
    s: &DVector<f64>,
    history: Vec<(f64, f64)>,
) -> SolveOutcome {
    let s_mat = complement_matrix(a, init, s);
    let nrm = a.group.h_norm(&s_mat);
    let sigma = s_mat * cre(1.0 / nrm);
    let weight = a
        .maximal_weight(&sigma, &init.x0)
        .unwrap_or(WeightValue::PlusInfinity);
    let sigma_weyl =
        crate::spectral::HermitianTypeVector::new(sigma.clone()).weyl_representative();
    SolveOutcome::Unstable(UnstableCert {
        sigma,
        sigma_weyl,
        weight_at_sigma: weight,
        norm_history: history,
    })
}
