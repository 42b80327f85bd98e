//! The abelian vortex equation on a periodic N x N grid over [0,1)^2: the
//! rank-1 Hermitian-Einstein equation for the conformal factor u of a
//! metric h = h0 e^{2u}, namely Lap(u) - (1/2) m e^{2u} + (t - 2 pi d) = 0
//! with the five-point periodic Laplacian (exactly zero row sums, which
//! forces the discrete mass identity (1/2) sum m e^{2u} hc^2 = t - 2 pi d).
//! Solvable exactly when t exceeds the degree threshold 2 pi d.

use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct VortexProblem {
    /// Grid size N; cell size 1/N, unit total volume.
    pub grid_n: usize,
    /// Line-bundle degree d >= 0; background curvature mass 2 pi d.
    pub degree: i64,
    /// Pointwise |phi|^2 with respect to the background metric, row-major.
    pub phi0_sq: Vec<f64>,
    /// The constant right-hand side.
    pub t_param: f64,
}

impl VortexProblem {
    pub fn new(grid_n: usize, degree: i64, phi0_sq: Vec<f64>, t_param: f64) -> Result<Self> {
        if grid_n < 2 {
            return Err(Error::InvalidProblem("grid must be at least 2x2".into()));
        }
        if degree < 0 {
            return Err(Error::InvalidProblem("degree must be nonnegative".into()));
        }
        if phi0_sq.len() != grid_n * grid_n {
            return Err(Error::InvalidProblem(format!(
                "field length {} does not match {0}x{0} grid",
                grid_n
            )));
        }
        if phi0_sq.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidProblem("phi0_sq must be nonnegative".into()));
        }
        if !phi0_sq.iter().any(|&v| v > 0.0) {
            return Err(Error::InvalidProblem("phi0_sq must not vanish identically".into()));
        }
        Ok(Self { grid_n, degree, phi0_sq, t_param })
    }

    /// Background curvature constant 2 pi d.
    pub fn background(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.degree as f64
    }

    pub fn cells(&self) -> usize {
        self.grid_n * self.grid_n
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VortexSolution {
    pub u: Vec<f64>,
    pub residual_inf: f64,
    pub mass_identity_error: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InsolvableDiagnosis {
    /// Mass gap t - 2 pi d; nonpositive values make the identity
    /// (1/2) sum m e^{2u} hc^2 = t - 2 pi d unsatisfiable.
    pub mass_gap: f64,
    pub min_u: f64,
    pub newton_iters: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub enum VortexOutcome {
    Solved(VortexSolution),
    Insolvable(InsolvableDiagnosis),
}

impl VortexOutcome {
    pub fn solution(&self) -> Option<&VortexSolution> {
        match self {
            VortexOutcome::Solved(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, VortexOutcome::Solved(_))
    }
}

/// Five-point periodic Laplacian, negative spectrum convention.
pub fn laplacian(n: usize, u: &[f64], out: &mut [f64]) {
    let h2 = (n * n) as f64;
    for i in 0..n {
        let ip = if i + 1 == n { 0 } else { i + 1 };
        let im = if i == 0 { n - 1 } else { i - 1 };
        for j in 0..n {
            let jp = if j + 1 == n { 0 } else { j + 1 };
            let jm = if j == 0 { n - 1 } else { j - 1 };
            out[i * n + j] = (u[ip * n + j] + u[im * n + j] + u[i * n + jp] + u[i * n + jm]
                - 4.0 * u[i * n + j])
                * h2;
        }
    }
}

/// G(u) = Lap(u) - (1/2) m e^{2u} + (t - 2 pi d).
pub fn assemble_equation(p: &VortexProblem, u: &[f64]) -> Vec<f64> {
    let n = p.grid_n;
    let mut out = vec![0.0; n * n];
    laplacian(n, u, &mut out);
    let c = p.t_param - p.background();
    for (idx, o) in out.iter_mut().enumerate() {
        *o += c - 0.5 * p.phi0_sq[idx] * (2.0 * u[idx]).exp();
    }
    out
}

/// |(1/2) sum m e^{2u} hc^2 - (t - 2 pi d)|: the discrete Chern-Weil mass
/// identity, which must hold at any solution.
pub fn mass_identity_error(p: &VortexProblem, u: &[f64]) -> f64 {
    let hc2 = 1.0 / (p.grid_n * p.grid_n) as f64;
    let mass: f64 = u
        .iter()
        .zip(&p.phi0_sq)
        .map(|(&ui, &mi)| 0.5 * mi * (2.0 * ui).exp() * hc2)
        .sum();
    (mass - (p.t_param - p.background())).abs()
}

/// FFT-based solver for (c - Lap) z = r on the periodic grid; used as the
/// conjugate-gradient preconditioner.
struct SpectralPoisson {
    n: usize,
    fwd: Arc<dyn rustfft::Fft<f64>>,
    inv: Arc<dyn rustfft::Fft<f64>>,
    /// Eigenvalues of -Lap, nonnegative.
    lam: Vec<f64>,
}

impl SpectralPoisson {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let h2 = (n * n) as f64;
        let mut lam = vec![0.0; n * n];
        for k in 0..n {
            let ck = (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
            for l in 0..n {
                let cl = (2.0 * std::f64::consts::PI * l as f64 / n as f64).cos();
                lam[k * n + l] = h2 * (4.0 - 2.0 * ck - 2.0 * cl);
            }
        }
        Self { n, fwd, inv, lam }
    }

    fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        let plan = if inverse { &self.inv } else { &self.fwd };
        for row in data.chunks_mut(n) {
            plan.process(row);
        }
        let mut col = vec![Complex64::default(); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = data[i * n + j];
            }
            plan.process(&mut col);
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
    }

    /// z = (c - Lap)^{-1} r.
    fn solve(&self, c: f64, r: &[f64], z: &mut [f64]) {
        let n = self.n;
        let mut buf: Vec<Complex64> =
            r.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fft2(&mut buf, false);
        for (b, &l) in buf.iter_mut().zip(&self.lam) {
            *b /= l + c;
        }
        self.fft2(&mut buf, true);
        let scale = 1.0 / (n * n) as f64;
        for (zi, b) in z.iter_mut().zip(&buf) {
            *zi = b.re * scale;
        }
    }
}

/// Preconditioned CG for (D - Lap) x = b with D = diag(d) >= 0 not all 0.
fn pcg(
    n: usize,
    d: &[f64],
    b: &[f64],
    poisson: &SpectralPoisson,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let cells = n * n;
    let dbar = (d.iter().sum::<f64>() / cells as f64).max(1e-12);
    let apply = |x: &[f64], out: &mut [f64]| {
        laplacian(n, x, out);
        for i in 0..cells {
            out[i] = d[i] * x[i] - out[i];
        }
    };
    let mut x = vec![0.0; cells];
    let mut r = b.to_vec();
    let bnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut z = vec![0.0; cells];
    poisson.solve(dbar, &r, &mut z);
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; cells];
    for _ in 0..max_iter {
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(Error::LinearSolveFailure(
                "vortex jacobian lost definiteness".into(),
            ));
        }
        let alpha = rz / pap;
        for i in 0..cells {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= rel_tol * bnorm {
            return Ok(x);
        }
        poisson.solve(dbar, &r, &mut z);
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..cells {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::LinearSolveFailure("conjugate gradient stalled".into()))
}

const MIN_U_FLOOR: f64 = -50.0;

/// Damped Newton iteration for the vortex equation. Returns the solution
/// or an insolvability diagnosis (mass identity unsatisfiable, detected
/// either by the conformal factor collapsing or by budget exhaustion with
/// nonpositive mass gap).
pub fn solve_vortex(p: &VortexProblem, tol: f64, max_iter: usize) -> Result<VortexOutcome> {
    let init = initial_guess(p);
    solve_vortex_from(p, init, tol, max_iter)
}

fn initial_guess(p: &VortexProblem) -> Vec<f64> {
    let mean_m = p.phi0_sq.iter().sum::<f64>() / p.cells() as f64;
    let gap = (p.t_param - p.background()).max(1e-3);
    vec![0.5 * (2.0 * gap / mean_m).ln(); p.cells()]
}

/// Newton solve from an explicit starting field (used by the warm-started
/// continuation).
pub fn solve_vortex_from(
    p: &VortexProblem,
    mut u: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<VortexOutcome> {
    let n = p.grid_n;

    let poisson = SpectralPoisson::new(n);
    let mut g = assemble_equation(p, &u);
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_inf = |v: &[f64]| v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mut gnorm = norm2(&g);

    let insolvable = |u: &[f64], iters: usize, reason: String| {
        let min_u = u.iter().cloned().fold(f64::INFINITY, f64::min);
        VortexOutcome::Insolvable(InsolvableDiagnosis {
            mass_gap: p.t_param - p.background(),
            min_u,
            newton_iters: iters,
            reason,
        })
    };

    for iter in 0..max_iter {
        if norm_inf(&g) <= tol {
            return Ok(VortexOutcome::Solved(VortexSolution {
                residual_inf: norm_inf(&g),
                mass_identity_error: mass_identity_error(p, &u),
                u,
                newton_iters: iter,
            }));
        }
        let min_u = u.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_u < MIN_U_FLOOR {
            return Ok(insolvable(
                &u,
                iter,
                format!(
                    "conformal factor collapsed (min u = {min_u:.1}); \
                     mass identity needs (1/2) sum m e^{{2u}} = {:.6e} > 0",
                    p.t_param - p.background()
                ),
            ));
        }
        // J = Lap - diag(m e^{2u}); solve J du = -G via the SPD form
        let d: Vec<f64> = p
            .phi0_sq
            .iter()
            .zip(&u)
            .map(|(&mi, &ui)| mi * (2.0 * ui).exp())
            .collect();
        let du = pcg(n, &d, &g, &poisson, 1e-12, 20 * n + 200)?;
        // Armijo backtracking on ||G||_2
        let mut alpha = 1.0f64;
        let mut accepted = false;
        while alpha >= 1.0 / 4096.0 {
            let cand: Vec<f64> = u.iter().zip(&du).map(|(&a, &b)| a + alpha * b).collect();
            let gc = assemble_equation(p, &cand);
            let gcn = norm2(&gc);
            if gcn <= (1.0 - 1e-4 * alpha) * gnorm {
                u = cand;
                g = gc;
                gnorm = gcn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Ok(insolvable(
                &u,
                iter,
                format!("newton stalled at |G| = {gnorm:.3e}"),
            ));
        }
    }
    if norm_inf(&g) <= tol {
        return Ok(VortexOutcome::Solved(VortexSolution {
            residual_inf: norm_inf(&g),
            mass_identity_error: mass_identity_error(p, &u),
            u,
            newton_iters: max_iter,
        }));
    }

    Ok(insolvable(&u, max_iter, format!("newton budget exhausted at |G| = {gnorm:.3e}")))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationEntry {
    pub t: f64,
    pub solved: bool,
    pub min_u: f64,
    pub residual_inf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationReport {
    pub entries: Vec<ContinuationEntry>,
    /// First t in scan order (descending) reported Insolvable.
    pub threshold: Option<f64>,
}

/// Warm-started descending scan over t values; the empirical solvability
/// threshold is the first Insolvable entry.
pub fn continuation_in_t(
    p: &VortexProblem,
    t_list: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<ContinuationReport> {
    if t_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidProblem("t_list must be strictly descending".into()));
    }
    let mut entries = Vec::with_capacity(t_list.len());
    let mut threshold = None;
    let mut warm: Option<Vec<f64>> = None;
    for &t in t_list {
        let q = VortexProblem { t_param: t, ..p.clone() };
        let start = warm.clone().unwrap_or_else(|| initial_guess(&q));
        let outcome = solve_vortex_from(&q, start, tol, max_iter)?;
        match &outcome {
            VortexOutcome::Solved(sol) => {
                let min_u = sol.u.iter().cloned().fold(f64::INFINITY, f64::min);
                entries.push(ContinuationEntry {
                    t,
                    solved: true,
                    min_u,
                    residual_inf: sol.residual_inf,
                });
                warm = Some(sol.u.clone());
            }
            VortexOutcome::Insolvable(diag) => {
                entries.push(ContinuationEntry {
                    t,
                    solved: false,
                    min_u: diag.min_u,
                    residual_inf: f64::NAN,
                });
                if threshold.is_none() {
                    threshold = Some(t);
                }
                // later (smaller) t values only get harder; keep scanning
                // with the cold start so each entry is independent
                warm = None;
            }
        }
    }
    Ok(ContinuationReport { entries, threshold })
}

/// Gaussian bump centered on the torus, normalized to a given total mass
/// sum m hc^2.
pub fn gaussian_bump(n: usize, sigma: f64, total_mass: f64) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        let x = i as f64 / n as f64 - 0.5;
        for j in 0..n {
            let y = j as f64 / n as f64 - 0.5;
            m[i * n + j] = (-(x * x + y * y) / (2.0 * sigma * sigma)).exp();
        }
    }
    let hc2 = 1.0 / (n * n) as f64;
    let mass: f64 = m.iter().sum::<f64>() * hc2;
    let scale = total_mass / mass;
    for v in &mut m {
        *v *= scale;
    }
    m
}

/// Smooth strictly positive manufactured density for convergence studies.
pub fn manufactured_density(n: usize) -> Vec<f64> {
    let tau = 2.0 * std::f64::consts::PI;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        let x = i as f64 / n as f64;
        for j in 0..n {
            let y = j as f64 / n as f64;
            m[i * n + j] = ((tau * x).sin() + (tau * y).cos()).exp() + 0.5;
        }
    }
    m
}
