//! Linear and projective Hamiltonian actions: moment maps, fundamental
//! vector fields, weights along one-parameter rays and maximal weights.
//!
//! The moment map is stored in its i*k-valued form m(x), characterized by
//! h(m(x), xi) = (1/2) <rho_*(xi) v, v> + h(tau, xi) for linear actions and
//! h(m(x), xi) = (1/2 pi) <rho_*(xi) v, v> / |v|^2 for projective ones. With
//! this convention the ray weight t -> h(m(e^{t xi} x), xi) is nondecreasing
//! and tends to h(tau, xi) on the finite branch, and polystability of x is
//! equivalent to solvability of m(g x) = 0.

use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::linalg::{cre, fnorm, hermitian_defect, vdot, CMatrix, CVector};
use crate::spectral::HermitianTypeVector;
use nalgebra::Complex;
use serde::{Deserialize, Serialize};

pub const DEFAULT_DROP_TOL: f64 = 1e-12;

const OVERFLOW_EXPONENT: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionKind {
    Linear,
    Projective,
}

/// Representation data: weight covectors for a diagonal torus, or the
/// images rho_*(b_i) of the canonical i*k basis for a matrix group.
#[derive(Debug, Clone)]
pub enum Rep {
    Weights(Vec<Vec<f64>>),
    Matrices(Vec<CMatrix>),
}

#[derive(Debug, Clone)]
pub struct ActionDescriptor {
    pub group: GroupDescriptor,
    pub kind: ActionKind,
    pub rep: Rep,
    /// Central parameter in i*z(k), stored as an ambient Hermitian matrix.
    /// Linear actions only.
    pub tau: Option<CMatrix>,
    pub dim_v: usize,
    /// Relative threshold below which an eigencomponent of a point counts
    /// as zero. This flips maximal weights between finite and +infinity.
    pub drop_tol: f64,
    basis: Vec<CMatrix>,
}

/// A point of the representation space (linear) or of its projectivization
/// (projective; representatives are kept at unit norm).
#[derive(Debug, Clone, PartialEq)]
pub struct PointState {
    pub vector: CVector,
}

impl PointState {
    pub fn linear(vector: CVector) -> Self {
        Self { vector }
    }

    pub fn projective(vector: CVector) -> Result<Self> {
        let n = vector.norm();
        if n == 0.0 {
            return Err(Error::InvalidProblem(
                "projective representative must be nonzero".into(),
            ));
        }
        Ok(Self { vector: vector.unscale(n) })
    }
}

/// Value of the maximal-weight function: a real number or +infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value")]
pub enum WeightValue {
    Finite(f64),
    PlusInfinity,
}

impl WeightValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, WeightValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            WeightValue::Finite(v) => Some(*v),
            WeightValue::PlusInfinity => None,
        }
    }
}

impl std::ops::Add for WeightValue {
    type Output = WeightValue;
    fn add(self, other: WeightValue) -> WeightValue {
        match (self, other) {
            (WeightValue::Finite(a), WeightValue::Finite(b)) => WeightValue::Finite(a + b),
            _ => WeightValue::PlusInfinity,
        }
    }
}

impl PartialOrd for WeightValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use WeightValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), PlusInfinity) => Some(std::cmp::Ordering::Less),
            (PlusInfinity, Finite(_)) => Some(std::cmp::Ordering::Greater),
            (PlusInfinity, PlusInfinity) => Some(std::cmp::Ordering::Equal),
        }
    }
}

impl ActionDescriptor {
    /// Torus action given by weight covectors, one per coordinate of V.
    /// tau_center are the coefficients of tau in the diagonal basis.
    pub fn torus(
        rank: usize,
        kind: ActionKind,
        weights: Vec<Vec<f64>>,
        tau_center: Option<Vec<f64>>,
    ) -> Result<Self> {
        let group = GroupDescriptor::torus(rank);
        for w in &weights {
            if w.len() != rank {
                return Err(Error::InvalidProblem(format!(
                    "weight covector length {} does not match torus rank {rank}",
                    w.len()
                )));
            }
        }
        let tau = match (&kind, tau_center) {
            (ActionKind::Projective, Some(_)) => {
                return Err(Error::InvalidProblem(
                    "projective actions carry no central parameter".into(),
                ))
            }
            (_, None) => None,
            (ActionKind::Linear, Some(t)) => {
                if t.len() != rank {
                    return Err(Error::InvalidProblem("tau length mismatch".into()));
                }
                let mut m = CMatrix::zeros(rank, rank);
                for (i, v) in t.iter().enumerate() {
                    m[(i, i)] = cre(*v);
                }
                Some(m)
            }
        };
        let dim_v = weights.len();
        let basis = group.ik_basis();
        Ok(Self { group, kind, rep: Rep::Weights(weights), tau, dim_v, drop_tol: DEFAULT_DROP_TOL, basis })
    }

    /// Matrix representation: `matrices[i]` is the Hermitian action of the
    /// i-th canonical i*k basis element on V. Checked to be a Lie-algebra
    /// homomorphism with unitary compact action and central tau.
    pub fn matrix_rep(
        group: GroupDescriptor,
        kind: ActionKind,
        matrices: Vec<CMatrix>,
        tau: Option<CMatrix>,
    ) -> Result<Self> {
        let basis = group.ik_basis();
        if matrices.len() != basis.len() {
            return Err(Error::InvalidProblem(format!(
                "expected {} representation matrices, got {}",
                basis.len(),
                matrices.len()
            )));
        }
        let dim_v = if matrices.is_empty() { 0 } else { matrices[0].nrows() };
        for m in &matrices {
            if m.nrows() != dim_v || m.ncols() != dim_v {
                return Err(Error::InvalidProblem("representation matrices must share shape".into()));
            }
            if hermitian_defect(m) > 1e-10 * (1.0 + fnorm(m)) {
                return Err(Error::InvalidProblem(
                    "rho_*(i k) must act by Hermitian matrices".into(),
                ));
            }
        }
        if matches!(kind, ActionKind::Projective) && tau.is_some() {
            return Err(Error::InvalidProblem(
                "projective actions carry no central parameter".into(),
            ));
        }

        let action = Self {
            group,
            kind,
            rep: Rep::Matrices(matrices),
            tau: None,
            dim_v,
            drop_tol: DEFAULT_DROP_TOL,
            basis,
        };
        // bracket homomorphism on basis pairs
        for i in 0..action.basis.len() {
            for j in i + 1..action.basis.len() {
                let lhs = action.rho_star(
                    &(&action.basis[i] * &action.basis[j]
                        - &action.basis[j] * &action.basis[i]),
                )?;
                let (mi, mj) = match &action.rep {
                    Rep::Matrices(ms) => (&ms[i], &ms[j]),
                    _ => unreachable!(),
                };
                let rhs = mi * mj - mj * mi;
                if fnorm(&(&lhs - &rhs)) > 1e-10 * (1.0 + fnorm(&rhs)) {
                    return Err(Error::InvalidProblem(format!(
                        "representation brackets do not match on basis pair ({i},{j})"
                    )));
                }
            }
        }
        let mut action = action;
        if let Some(t) = tau {
            action.group.check_in_algebra(&t, 1e-10)?;
            if hermitian_defect(&t) > 1e-10 * (1.0 + fnorm(&t)) {
                return Err(Error::InvalidProblem("tau must be Hermitian".into()));
            }
            for b in &action.basis {
                let comm = &t * b - b * &t;
                if fnorm(&comm) > 1e-10 * (1.0 + fnorm(&t)) {
                    return Err(Error::InvalidProblem("tau must be central in k".into()));
                }
            }
            action.tau = Some(t);
        }
        Ok(action)
    }

    pub fn with_drop_tol(mut self, tol: f64) -> Self {
        self.drop_tol = tol;
        self
    }

    pub fn ik_basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn is_projective(&self) -> bool {
        matches!(self.kind, ActionKind::Projective)
    }

    /// The induced algebra representation applied to u (complex-linear).
    pub fn rho_star(&self, u: &CMatrix) -> Result<CMatrix> {
        match &self.rep {
            Rep::Weights(ws) => {
                let r = self.group.ambient_dim();
                let mut out = CMatrix::zeros(ws.len(), ws.len());
                for (j, w) in ws.iter().enumerate() {
                    let mut z = Complex::new(0.0, 0.0);
                    for k in 0..r {
                        z += u[(k, k)] * cre(w[k]);
                    }
                    out[(j, j)] = z;
                }
                Ok(out)
            }
            Rep::Matrices(ms) => {
                let coords = self.group.algebra_coords(u);
                let mut out = CMatrix::zeros(self.dim_v, self.dim_v);
                for (c, m) in coords.iter().zip(ms) {
                    out += m * *c;
                }
                Ok(out)
            }
        }
    }

    /// Pairing h(tau, xi) for xi in i*k.
    pub fn tau_pairing(&self, xi: &CMatrix) -> f64 {
        match &self.tau {
            None => 0.0,
            Some(t) => self.group.pairing(t, xi),
        }
    }

    /// The i*k-valued moment map m(x).
    pub fn moment_value(&self, x: &PointState) -> Result<CMatrix> {
        let v = &x.vector;
        let n = self.group.ambient_dim();
        let mut m = CMatrix::zeros(n, n);
        let norm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for b in &self.basis {
            let bv = self.rho_star(b)? * v;
            let q = vdot(&bv, v).re;
            let coeff = match self.kind {
                ActionKind::Linear => 0.5 * q + self.tau_pairing(b),
                ActionKind::Projective => q / (2.0 * std::f64::consts::PI * norm2),
            };
            m += b * cre(coeff);
        }
        Ok(m)
    }

    /// Fundamental vector field u^# at x; projective fields are projected
    /// orthogonal to the representative.
    pub fn fundamental_field(&self, u: &CMatrix, x: &PointState) -> Result<CVector> {
        let w = self.rho_star(u)? * &x.vector;
        match self.kind {
            ActionKind::Linear => Ok(w),
            ActionKind::Projective => {
                let v = &x.vector;
                let n2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
                let c = vdot(&w, v) / cre(n2);
                Ok(w - v * c)
            }
        }
    }

    /// Derivative of the moment map at x along a tangent vector w (for
    /// projective actions w must be orthogonal to the representative).
    pub fn moment_derivative(&self, x: &PointState, w: &CVector) -> Result<CMatrix> {
        let v = &x.vector;
        let n = self.group.ambient_dim();
        let mut m = CMatrix::zeros(n, n);
        let norm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for b in &self.basis {
            let bv = self.rho_star(b)? * v;
            let d = vdot(&bv, w).re;
            let coeff = match self.kind {
                ActionKind::Linear => d,
                ActionKind::Projective => d / (std::f64::consts::PI * norm2),
            };
            m += b * cre(coeff);
        }
        Ok(m)
    }

    /// Apply the group element e^{s}, s Hermitian in i*k, to a point.
    pub fn act_exp(&self, s: &CMatrix, x: &PointState) -> Result<PointState> {
        let rho_s = self.rho_star(s)?;
        let data = HermitianTypeVector::new(rho_s);
        let v = &x.vector;
        let mut out = CVector::zeros(v.len());
        for (l, p) in data.eigenvalues.iter().zip(&data.eigenprojections) {
            let comp = p * v;
            let mass = comp.norm();
            if mass == 0.0 {
                continue;
            }
            if *l > OVERFLOW_EXPONENT {
                return Err(Error::ActionOverflow);
            }
            out += comp * cre(l.exp());
        }
        match self.kind {
            ActionKind::Linear => Ok(PointState::linear(out)),
            ActionKind::Projective => PointState::projective(out),
        }
    }

    /// Apply the unitary group element e^{u}, u anti-Hermitian in k.
    pub fn act_exp_unitary(&self, u: &CMatrix, x: &PointState) -> Result<PointState> {
        let rho_u = self.rho_star(u)?;
        // i * rho(u) is Hermitian; e^{rho(u)} = f(i rho(u)) with f = e^{-i t}
        let data = HermitianTypeVector::new(rho_u * Complex::new(0.0, 1.0));
        let g = data.apply_fn_complex(|t| Complex::new(0.0, -t).exp());
        let out = g * &x.vector;
        match self.kind {
            ActionKind::Linear => Ok(PointState::linear(out)),
            ActionKind::Projective => PointState::projective(out),
        }
    }

    /// h(m(e^{t xi} x), xi) for a batch of parameters t, sharing one
    /// spectral decomposition. Values may be +-infinity for linear actions;
    /// evaluation is rescaled per eigencomponent so no NaN can appear.
    pub fn ray_weights(&self, xi: &CMatrix, x: &PointState, ts: &[f64]) -> Result<Vec<f64>> {
        let rho = self.rho_star(xi)?;
        if hermitian_defect(&rho) > 1e-8 * (1.0 + fnorm(&rho)) {
            return Err(Error::NotHermitianType(
                "rho_*(xi) must be Hermitian for ray weights".into(),
            ));
        }
        let data = HermitianTypeVector::new(rho);
        let v = &x.vector;
        let comps: Vec<(f64, f64)> = data
            .eigenvalues
            .iter()
            .zip(&data.eigenprojections)
            .map(|(l, p)| (*l, (p * v).norm_squared()))
            .filter(|(_, w)| *w > 0.0)
            .collect();
        let tau_term = self.tau_pairing(xi);
        let mut out = Vec::with_capacity(ts.len());
        for &t in ts {
            let val = match self.kind {
                ActionKind::Linear => {
                    let mut acc = tau_term;
                    for &(l, w) in &comps {
                        acc += 0.5 * l * w * (2.0 * t * l).exp();
                    }
                    acc
                }
                ActionKind::Projective => {
                    let mmax = comps
                        .iter()
                        .map(|&(l, _)| 2.0 * t * l)
                        .fold(f64::NEG_INFINITY, f64::max);
                    let mut num = 0.0;
                    let mut den = 0.0;
                    for &(l, w) in &comps {
                        let e = (2.0 * t * l - mmax).exp();
                        num += l * w * e;
                        den += w * e;
                    }
                    num / den / (2.0 * std::f64::consts::PI)
                }
            };
            out.push(val);
        }
        Ok(out)
    }

    /// h(m(e^{t xi} x), xi) at a single parameter.
    pub fn weight_along_ray(&self, xi: &CMatrix, x: &PointState, t: f64) -> Result<f64> {
        Ok(self.ray_weights(xi, x, &[t])?[0])
    }

    /// The maximal weight lambda^xi(x) = lim_{t->inf} of the ray weight.
    pub fn maximal_weight(&self, xi: &CMatrix, x: &PointState) -> Result<WeightValue> {
        let rho = self.rho_star(xi)?;
        if hermitian_defect(&rho) > 1e-8 * (1.0 + fnorm(&rho)) {
            return Err(Error::NotHermitianType(
                "rho_*(xi) must be Hermitian for maximal weights".into(),
            ));
        }
        let data = HermitianTypeVector::new(rho);
        let v = &x.vector;
        let vnorm = v.norm();
        let supported: Vec<f64> = data
            .eigenvalues
            .iter()
            .zip(&data.eigenprojections)
            .filter(|(_, p)| (*p * v).norm() > self.drop_tol * vnorm)
            .map(|(l, _)| *l)
            .collect();
        match self.kind {
            ActionKind::Linear => {
                let pos = supported.iter().any(|&l| l > data.cluster_tol);
                if pos {
                    Ok(WeightValue::PlusInfinity)
                } else {
                    Ok(WeightValue::Finite(self.tau_pairing(xi)))
                }
            }
            ActionKind::Projective => {
                let lmax = supported
                    .iter()
                    .fold(f64::NEG_INFINITY, |m, &l| m.max(l));
                if lmax == f64::NEG_INFINITY {
                    return Err(Error::InvalidProblem(
                        "projective point has empty support".into(),
                    ));
                }
                Ok(WeightValue::Finite(lmax / (2.0 * std::f64::consts::PI)))
            }
        }
    }

    /// Self-test residual |ray(t_big) - maximal_weight| for a finite weight,
    /// with t_big = 40 / (smallest positive decay rate).
    pub fn weight_limit_consistency(&self, xi: &CMatrix, x: &PointState) -> Result<f64> {
        let mw = match self.maximal_weight(xi, x)? {
            WeightValue::PlusInfinity => return Err(Error::DivergentRay),
            WeightValue::Finite(v) => v,
        };
        let rho = self.rho_star(xi)?;
        let data = HermitianTypeVector::new(rho);
        let v = &x.vector;
        let vnorm = v.norm();
        let supported: Vec<f64> = data
            .eigenvalues
            .iter()
            .zip(&data.eigenprojections)
            .filter(|(_, p)| (*p * v).norm() > self.drop_tol * vnorm)
            .map(|(l, _)| *l)
            .collect();
        let mut rate = f64::INFINITY;
        match self.kind {
            ActionKind::Linear => {
                for &l in &supported {
                    if l < -data.cluster_tol {
                        rate = rate.min(-l);
                    }
                }
            }
            ActionKind::Projective => {
                let lmax = supported.iter().fold(f64::NEG_INFINITY, |m, &l| m.max(l));
                for &l in &supported {
                    if lmax - l > data.cluster_tol {
                        rate = rate.min(lmax - l);
                    }
                }
            }
        }
        let t_big = if rate.is_finite() { 40.0 / rate } else { 1.0 };
        let ray = self.weight_along_ray(xi, x, t_big)?;
        Ok((ray - mw).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_cvector, random_hermitian, random_traceless_hermitian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn pm_torus(tau: Option<Vec<f64>>) -> ActionDescriptor {
        ActionDescriptor::torus(1, ActionKind::Linear, vec![vec![1.0], vec![-1.0]], tau).unwrap()
    }

    fn cv(entries: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(entries.len(), entries.iter().map(|&(r, i)| Complex::new(r, i)))
    }

    fn one_by_one(v: f64) -> CMatrix {
        CMatrix::from_element(1, 1, cre(v))
    }

    use crate::sampling::{gl_standard_action as gl_standard, sl2_sym_action as sl2_sym};

    #[test]
    fn moment_values_pinned() {
        let a = pm_torus(None);
        let x = PointState::linear(cv(&[(1.0, 0.0), (1.0, 0.0)]));
        let m = a.moment_value(&x).unwrap();
        assert!(fnorm(&m) < 1e-14, "balanced point has zero moment");

        let x = PointState::linear(cv(&[(2.0, 0.0), (1.0, 0.0)]));
        let m = a.moment_value(&x).unwrap();
        assert!((m[(0, 0)].re - 1.5).abs() < 1e-14);

        // projective GL(2) standard rep, v = e1: pairing with diag(1,-1)
        let a = gl_standard(2, ActionKind::Projective);
        let x = PointState::projective(cv(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        let m = a.moment_value(&x).unwrap();
        let xi = CMatrix::from_row_slice(2, 2, &[cre(1.0), cre(0.0), cre(0.0), cre(-1.0)]);
        let p = a.group.pairing(&m, &xi);
        assert!((p - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn fundamental_field_examples() {
        let a = pm_torus(None);
        let x = PointState::linear(cv(&[(2.0, 0.0), (1.0, 0.0)]));
        let f = a.fundamental_field(&one_by_one(0.0), &x).unwrap();
        assert!(f.norm() < 1e-15);
        let f = a.fundamental_field(&one_by_one(1.0), &x).unwrap();
        assert!((f[0] - cre(2.0)).norm() < 1e-14 && (f[1] - cre(-1.0)).norm() < 1e-14);

        // projective stabilizer direction: E11 fixes [e1]
        let a = gl_standard(2, ActionKind::Projective);
        let x = PointState::projective(cv(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        let mut e11 = CMatrix::zeros(2, 2);
        e11[(0, 0)] = cre(1.0);
        let f = a.fundamental_field(&e11, &x).unwrap();
        assert!(f.norm() < 1e-14);
    }

    #[test]
    fn ray_weight_closed_forms() {
        let a = pm_torus(None);
        let xi = one_by_one(1.0);
        let x = PointState::linear(cv(&[(1.0, 0.0), (1.0, 0.0)]));
        assert!(a.weight_along_ray(&xi, &x, 0.0).unwrap().abs() < 1e-14);
        for &t in &[0.5f64, 1.0, 2.5] {
            let want = 0.5 * ((2.0 * t).exp() - (-2.0 * t).exp());
            let got = a.weight_along_ray(&xi, &x, t).unwrap();
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0));
        }
        // v = (0,1): -e^{-2t}/2, increasing to 0
        let x = PointState::linear(cv(&[(0.0, 0.0), (1.0, 0.0)]));
        for &t in &[0.0f64, 1.0, 3.0] {
            let want = -0.5 * (-2.0 * t).exp();
            let got = a.weight_along_ray(&xi, &x, t).unwrap();
            assert!((got - want).abs() < 1e-12);
        }
        // overflow-safe: huge t gives +infinity, not NaN
        let x = PointState::linear(cv(&[(1.0, 0.0), (1.0, 0.0)]));
        let w = a.weight_along_ray(&xi, &x, 1e4).unwrap();
        assert!(w.is_infinite() && w > 0.0);
    }

    #[test]
    fn maximal_weight_branches() {
        let a = pm_torus(None);
        let xi = one_by_one(1.0);
        let v_both = PointState::linear(cv(&[(1.0, 0.0), (1.0, 0.0)]));
        assert_eq!(a.maximal_weight(&xi, &v_both).unwrap(), WeightValue::PlusInfinity);
        let v_neg = PointState::linear(cv(&[(0.0, 0.0), (1.0, 0.0)]));
        assert_eq!(a.maximal_weight(&xi, &v_neg).unwrap(), WeightValue::Finite(0.0));
        // xi = 0 gives the tau pairing, 0 here
        assert_eq!(
            a.maximal_weight(&one_by_one(0.0), &v_both).unwrap(),
            WeightValue::Finite(0.0)
        );

        // projective GL(2): xi = diag(1,-1), v = e1 + e2 -> 1/(2 pi)
        let a = gl_standard(2, ActionKind::Projective);
        let xi = CMatrix::from_row_slice(2, 2, &[cre(1.0), cre(0.0), cre(0.0), cre(-1.0)]);
        let x = PointState::projective(cv(&[(1.0, 0.0), (1.0, 0.0)])).unwrap();
        let w = a.maximal_weight(&xi, &x).unwrap().finite().unwrap();
        assert!((w - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn tau_enters_finite_branch_with_plus_sign() {
        // weights (1), tau = (c): the finite weight at xi = -1 is -c, and
        // m(e^s v) = |v|^2 e^{2s}/2 + c vanishes iff c < 0
        let a = ActionDescriptor::torus(
            1,
            ActionKind::Linear,
            vec![vec![1.0]],
            Some(vec![-0.8]),
        )
        .unwrap();
        let x = PointState::linear(cv(&[(1.0, 0.0)]));
        let w = a.maximal_weight(&one_by_one(-1.0), &x).unwrap();
        assert_eq!(w, WeightValue::Finite(0.8));
        // ray value converges to that limit
        let r = a.weight_along_ray(&one_by_one(-1.0), &x, 30.0).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        // moment zero: e^{2s}/2 = 0.8 at s = ln(1.6)/2
        let s = one_by_one(0.5 * 1.6f64.ln());
        let moved = a.act_exp(&s, &x).unwrap();
        let m = a.moment_value(&moved).unwrap();
        assert!(fnorm(&m) < 1e-12);
    }

    #[test]
    fn weight_limit_consistency_examples() {
        let a = pm_torus(None);
        let xi = one_by_one(1.0);
        let x = PointState::linear(cv(&[(0.0, 0.0), (1.0, 0.0)]));
        assert!(a.weight_limit_consistency(&xi, &x).unwrap() <= 1e-12);

        let g = gl_standard(2, ActionKind::Projective);
        let xi2 = CMatrix::from_row_slice(2, 2, &[cre(1.0), cre(0.0), cre(0.0), cre(-1.0)]);
        let x2 = PointState::projective(cv(&[(1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!(g.weight_limit_consistency(&xi2, &x2).unwrap() <= 1e-10);

        // xi = 0: residual identically 0
        let r = a
            .weight_limit_consistency(&one_by_one(0.0), &x)
            .unwrap();
        assert!(r == 0.0);

        // divergent ray is refused
        let xboth = PointState::linear(cv(&[(1.0, 0.0), (1.0, 0.0)]));
        assert!(matches!(
            a.weight_limit_consistency(&xi, &xboth),
            Err(Error::DivergentRay)
        ));
    }

    #[test]
    fn monotone_rays_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ts: Vec<f64> = (0..100).map(|i| -2.0 + 4.0 * i as f64 / 99.0).collect();
        for case in 0..60 {
            let (a, xi, x) = if case % 2 == 0 {
                let rank = 1 + case % 3;
                let nw = 1 + case % 5;
                let weights: Vec<Vec<f64>> = (0..nw)
                    .map(|_| (0..rank).map(|_| (rng.random_range(-3..=3i32)) as f64).collect())
                    .collect();
                let a = ActionDescriptor::torus(rank, ActionKind::Linear, weights, None).unwrap();
                let mut xi = CMatrix::zeros(rank, rank);
                for k in 0..rank {
                    xi[(k, k)] = cre(crate::sampling::standard_normal(&mut rng));
                }
                let x = PointState::linear(random_cvector(&mut rng, nw));
                (a, xi, x)
            } else {
                let a = gl_standard(2, ActionKind::Projective);
                let xi = random_hermitian(&mut rng, 2);
                let x = PointState::projective(random_cvector(&mut rng, 2)).unwrap();
                (a, xi, x)
            };
            let w = a.ray_weights(&xi, &x, &ts).unwrap();
            for k in 1..w.len() {
                if w[k].is_infinite() || w[k - 1].is_infinite() {
                    assert!(w[k] >= w[k - 1] || (w[k].is_infinite() && w[k - 1].is_infinite()));
                } else {
                    assert!(
                        w[k] >= w[k - 1] - 1e-10,
                        "monotonicity violated at case {case}: {} -> {}",
                        w[k - 1],
                        w[k]
                    );
                }
            }
        }
    }

    #[test]
    fn infinitesimal_equivariance_fd() {
        // d/dt m(e^{tu} x) = [u, m(x)] for u in k, via central differences
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = 1e-6;
        for case in 0..40 {
            let (a, x) = match case % 3 {
                0 => {
                    let a = gl_standard(2, ActionKind::Linear);
                    let x = PointState::linear(random_cvector(&mut rng, 2));
                    (a, x)
                }
                1 => {
                    let a = sl2_sym(3, ActionKind::Projective);
                    let x = PointState::projective(random_cvector(&mut rng, 4)).unwrap();
                    (a, x)
                }
                _ => {
                    let a = ActionDescriptor::torus(
                        2,
                        ActionKind::Linear,
                        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, -1.0]],
                        Some(vec![0.3, -0.2]),
                    )
                    .unwrap();
                    let x = PointState::linear(random_cvector(&mut rng, 3));
                    (a, x)
                }
            };
            // u = i w with w Hermitian in i*k
            let w = match &a.group.kind {
                crate::group::GroupKind::SpecialLinear(n) => random_traceless_hermitian(&mut rng, *n),
                _ => {
                    let n = a.group.ambient_dim();
                    if matches!(a.rep, Rep::Weights(_)) {
                        let mut d = CMatrix::zeros(n, n);
                        for k in 0..n {
                            d[(k, k)] = cre(crate::sampling::standard_normal(&mut rng));
                        }
                        d
                    } else {
                        random_hermitian(&mut rng, n)
                    }
                }
            };
            let u = &w * Complex::new(0.0, 1.0);
            let xp = a.act_exp_unitary(&(&u * cre(h)), &x).unwrap();
            let xm = a.act_exp_unitary(&(&u * cre(-h)), &x).unwrap();
            let mp = a.moment_value(&xp).unwrap();
            let mm = a.moment_value(&xm).unwrap();
            let fd = (mp - mm) * cre(0.5 / h);
            let m = a.moment_value(&x).unwrap();
            let bracket = &u * &m - &m * &u;
            let err = fnorm(&(&fd - &bracket));
            assert!(
                err <= 1e-5 * (1.0 + fnorm(&bracket)),
                "equivariance fd error {err} at case {case}"
            );
        }
    }

    #[test]
    fn stabilizer_moment_commutes() {
        // v supported on a single weight: k_x contains all xi with chi(xi)=0
        let a = ActionDescriptor::torus(
            2,
            ActionKind::Linear,
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            Some(vec![0.1, 0.4]),
        )
        .unwrap();
        let x = PointState::linear(cv(&[(1.5, 0.0), (0.0, 0.0)]));
        let m = a.moment_value(&x).unwrap();
        // stabilizer direction: chi_1 = (1,1) vanishes on xi = diag(1,-1)
        let mut xi = CMatrix::zeros(2, 2);
        xi[(0, 0)] = cre(1.0);
        xi[(1, 1)] = cre(-1.0);
        let comm = &xi * &m - &m * &xi;
        assert!(fnorm(&comm) <= 1e-10);

        // GL(2) standard rep, x = e1: E22 direction stabilizes
        let a = gl_standard(2, ActionKind::Linear);
        let x = PointState::linear(cv(&[(1.0, 0.0), (0.0, 0.0)]));
        let m = a.moment_value(&x).unwrap();
        let mut e22 = CMatrix::zeros(2, 2);
        e22[(1, 1)] = cre(1.0);
        let comm = &e22 * &m - &m * &e22;
        assert!(fnorm(&comm) <= 1e-10);
    }

    #[test]
    fn k_equivariance_of_maximal_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = gl_standard(3, ActionKind::Projective);
        for _ in 0..25 {
            let xi = random_hermitian(&mut rng, 3);
            let x = PointState::projective(random_cvector(&mut rng, 3)).unwrap();
            // random unitary k = e^u
            let w = random_hermitian(&mut rng, 3);
            let u = &w * Complex::new(0.0, 1.0);
            let ku = HermitianTypeVector::new(w.clone())
                .apply_fn_complex(|t| Complex::new(0.0, t).exp());
            let kx = a.act_exp_unitary(&u, &x).unwrap();
            let xi_conj = &ku * &xi * ku.adjoint();
            let w0 = a.maximal_weight(&xi, &x).unwrap();
            let w1 = a.maximal_weight(&xi_conj, &kx).unwrap();
            match (w0, w1) {
                (WeightValue::Finite(a0), WeightValue::Finite(a1)) => {
                    assert!((a0 - a1).abs() <= 1e-10, "{a0} vs {a1}");
                }
                (b0, b1) => assert_eq!(b0, b1),
            }
        }
        // linear branch: the +infinity branch must agree exactly
        let a = gl_standard(2, ActionKind::Linear);
        for _ in 0..25 {
            let xi = random_hermitian(&mut rng, 2);
            let x = PointState::linear(random_cvector(&mut rng, 2));
            let w = random_hermitian(&mut rng, 2);
            let u = &w * Complex::new(0.0, 1.0);
            let ku = HermitianTypeVector::new(w.clone())
                .apply_fn_complex(|t| Complex::new(0.0, t).exp());
            let kx = a.act_exp_unitary(&u, &x).unwrap();
            let xi_conj = &ku * &xi * ku.adjoint();
            let w0 = a.maximal_weight(&xi, &x).unwrap();
            let w1 = a.maximal_weight(&xi_conj, &kx).unwrap();
            assert_eq!(w0.is_finite(), w1.is_finite());
        }
    }

    #[test]
    fn sym_cubic_rep_is_valid() {
        // construction itself runs the bracket/hermiticity checks
        let a = sl2_sym(3, ActionKind::Projective);
        assert_eq!(a.dim_v, 4);
        // diag(1,-1) acts with weights (3,1,-1,-3)
        let g = GroupDescriptor::sl(2);
        let mut xi = CMatrix::zeros(2, 2);
        xi[(0, 0)] = cre(1.0);
        xi[(1, 1)] = cre(-1.0);
        let r = a.rho_star(&xi).unwrap();
        let evs = HermitianTypeVector::new(r).weyl_representative();
        let want = [3.0, 1.0, -1.0, -3.0];
        for (e, w) in evs.iter().zip(want.iter()) {
            assert!((e - w).abs() < 1e-10);
        }
        let _ = g;
    }
}
