//! Stability classification. Torus actions are classified exactly through
//! rational cone arithmetic on the weight covectors; general actions get a
//! certificate-based verdict from the continuity solver.

use crate::action::{ActionDescriptor, PointState, WeightValue};
use crate::cone::{LinearInequality, Rat, RationalCone};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::solver::{
    solve_moment_zero, stabilizer_min_singular_value, SolveOptions, SolveOutcome,
};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityClass {
    Stable,
    PolystableNotStable,
    SemistableNotPolystable,
    Unstable,
}

impl StabilityClass {
    pub fn is_polystable(&self) -> bool {
        matches!(self, StabilityClass::Stable | StabilityClass::PolystableNotStable)
    }

    pub fn is_semistable(&self) -> bool {
        !matches!(self, StabilityClass::Unstable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ExactCone,
    Certificate,
}

#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    /// Exact destabilizing (or polystability-violating) direction, torus case.
    pub witness_rational: Option<Vec<Rat>>,
    /// Destabilizing direction from the solver, general case.
    pub witness_matrix: Option<CMatrix>,
    /// Basis of the support-stabilizer subspace {xi : chi(xi) = 0 on supp v}.
    pub stabilizer_basis: Option<Vec<Vec<Rat>>>,
    pub method: Method,
    pub diagnostics: String,
}

/// Exact torus action data: rational weight covectors (one per coordinate
/// of V) and the covector of xi -> h(tau, xi).
#[derive(Debug, Clone)]
pub struct TorusActionExact {
    pub rank: usize,
    pub weights: Vec<Vec<Rat>>,
    pub tau_cov: Vec<Rat>,
}

impl TorusActionExact {
    pub fn new(rank: usize, weights: Vec<Vec<Rat>>, tau_cov: Vec<Rat>) -> Result<Self> {
        for w in &weights {
            if w.len() != rank {
                return Err(Error::NonRationalWeights(format!(
                    "weight covector length {} does not match rank {rank}",
                    w.len()
                )));
            }
        }
        if tau_cov.len() != rank {
            return Err(Error::NonRationalWeights("tau covector length mismatch".into()));
        }
        Ok(Self { rank, weights, tau_cov })
    }

    /// Support of v at the relative drop tolerance.
    pub fn support(&self, v: &CVector, drop_tol: f64) -> Vec<usize> {
        let norm = v.norm();
        (0..v.len().min(self.weights.len()))
            .filter(|&j| v[j].norm() > drop_tol * norm)
            .collect()
    }

    /// Exact maximal weight of a rational direction: None encodes +infinity.
    pub fn maximal_weight_exact(&self, support: &[usize], xi: &[Rat]) -> Option<Rat> {
        for &j in support {
            let val: Rat = self.weights[j].iter().zip(xi).map(|(c, x)| c * x).sum();
            if val > Rat::zero() {
                return None;
            }
        }
        Some(self.tau_cov.iter().zip(xi).map(|(c, x)| c * x).sum())
    }
}

fn neg(c: &[Rat]) -> Vec<Rat> {
    c.iter().map(|x| -x).collect()
}

/// Exact polystability classification of a torus-action point per the
/// non-stable-locus cone conditions. All cone tests run in rational
/// arithmetic; only the support of v uses the floating drop tolerance.
pub fn torus_classify(
    a: &TorusActionExact,
    v: &CVector,
    drop_tol: f64,
) -> Result<StabilityVerdict> {
    let support = a.support(v, drop_tol);
    let s_weights: Vec<&Vec<Rat>> = support.iter().map(|&j| &a.weights[j]).collect();
    let dim = a.rank;

    // unstable <=> exists xi: chi(xi) <= 0 on supp, <tau, xi> < 0
    let mut unstable = RationalCone::new(dim);
    for w in &s_weights {
        unstable.push(LinearInequality::le((*w).clone()));
    }
    unstable.push(LinearInequality::lt(a.tau_cov.clone()));
    if let Some(xi) = unstable.feasible_point() {
        let weight = a.maximal_weight_exact(&support, &xi);
        return Ok(StabilityVerdict {
            class: StabilityClass::Unstable,
            witness_rational: Some(xi),
            witness_matrix: None,
            stabilizer_basis: None,
            method: Method::ExactCone,
            diagnostics: format!(
                "destabilizer with negative weight {}",
                weight.map(|w| w.to_string()).unwrap_or_default()
            ),
        });
    }

    // stable <=> {chi <= 0 on supp, <tau, xi> <= 0} = {0}
    let mut closure = RationalCone::new(dim);
    for w in &s_weights {
        closure.push(LinearInequality::le((*w).clone()));
    }
    closure.push(LinearInequality::le(a.tau_cov.clone()));
    let nonzero = closure.nonzero_point();
    let stab_rows: Vec<Vec<Rat>> = s_weights.iter().map(|w| (*w).clone()).collect();
    let stab_basis = crate::cone::nullspace(&stab_rows, dim);
    if nonzero.is_none() {
        return Ok(StabilityVerdict {
            class: StabilityClass::Stable,
            witness_rational: None,
            witness_matrix: None,
            stabilizer_basis: Some(stab_basis),
            method: Method::ExactCone,
            diagnostics: "nonpositive-weight cone is trivial".into(),
        });
    }

    // semistable here; polystable iff tau vanishes on the support
    // stabilizer and every finite-zero-weight direction lies inside it
    let tau_on_stab_zero = stab_basis.iter().all(|b| {
        a.tau_cov
            .iter()
            .zip(b)
            .map(|(c, x)| c * x)
            .sum::<Rat>()
            .is_zero()
    });
    let mut polystable = tau_on_stab_zero;
    let mut violation = None;
    if polystable {
        for w0 in &s_weights {
            let mut sys = RationalCone::new(dim);
            for w in &s_weights {
                sys.push(LinearInequality::le((*w).clone()));
            }
            sys.push(LinearInequality::le(a.tau_cov.clone()));
            sys.push(LinearInequality::le(neg(&a.tau_cov)));
            sys.push(LinearInequality::lt((*w0).clone()));
            if let Some(xi) = sys.feasible_point() {
                polystable = false;
                violation = Some(xi);
                break;
            }
        }
    }

    if polystable {
        Ok(StabilityVerdict {
            class: StabilityClass::PolystableNotStable,
            witness_rational: nonzero,
            witness_matrix: None,
            stabilizer_basis: Some(stab_basis),
            method: Method::ExactCone,
            diagnostics: "zero-weight directions all stabilize the support".into(),
        })
    } else {
        Ok(StabilityVerdict {
            class: StabilityClass::SemistableNotPolystable,
            witness_rational: violation.or(nonzero),
            witness_matrix: None,
            stabilizer_basis: Some(stab_basis),
            method: Method::ExactCone,
            diagnostics: "zero-weight direction strictly moves the support".into(),
        })
    }
}

/// The finite test set Phi_tau: one rational point in every nonempty cell
/// C_A intersected with the pointed tau-nonnegative half-space. A point v
/// is tau-stable iff its maximal weight is positive on every member.
pub fn torus_test_set(a: &TorusActionExact) -> Result<Vec<Vec<Rat>>> {
    let dim = a.rank;
    // distinct weight covectors
    let mut distinct: Vec<Vec<Rat>> = Vec::new();
    for w in &a.weights {
        if !distinct.contains(w) {
            distinct.push(w.clone());
        }
    }
    let r = distinct.len();
    if r > 20 {
        return Err(Error::NonRationalWeights(format!(
            "test-set enumeration over 2^{r} subsets refused"
        )));
    }
    let mut points = Vec::new();
    for mask in 0u32..(1u32 << r) {
        // the cell where the nonpositive-weight subspace is exactly V_A:
        // chi(xi) <= 0 on A and chi(xi) > 0 off A
        let mut sys = RationalCone::new(dim);
        for (i, w) in distinct.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sys.push(LinearInequality::le(w.clone()));
            } else {
                sys.push(LinearInequality::lt(neg(w)));
            }
        }
        // the tau half-space of the non-stable locus: <tau, xi> <= 0 (the
        // same side as the union defining NS_tau; on the other side the
        // finite-branch weights are positive and detect nothing)
        sys.push(LinearInequality::le(a.tau_cov.clone()));
        let p = if sys.inequalities.iter().any(|i| i.strict) {
            sys.feasible_point()
        } else {
            sys.nonzero_point()
        };
        if let Some(p) = p {
            if p.iter().any(|x| !x.is_zero()) {
                points.push(p);
            }
        }
    }
    Ok(points)
}

/// Sign classification through the finite test set: stable iff the exact
/// maximal weight is strictly positive at every member of Phi_tau.
pub fn torus_stable_by_test_set(
    a: &TorusActionExact,
    phi: &[Vec<Rat>],
    v: &CVector,
    drop_tol: f64,
) -> bool {
    let support = a.support(v, drop_tol);
    phi.iter().all(|xi| match a.maximal_weight_exact(&support, xi) {
        None => true, // +infinity
        Some(w) => w > Rat::zero(),
    })
}

/// Certificate-based classification for general linear/projective actions.
pub fn general_classify(
    a: &ActionDescriptor,
    x: &PointState,
    opts: &SolveOptions,
) -> Result<StabilityVerdict> {
    match solve_moment_zero(a, x, opts)? {
        SolveOutcome::Polystable(cert) => {
            let smin = stabilizer_min_singular_value(a, &cert.x_star)?;
            let class = if smin > opts.stab_tol {
                StabilityClass::Stable
            } else {
                StabilityClass::PolystableNotStable
            };
            Ok(StabilityVerdict {
                class,
                witness_rational: None,
                witness_matrix: Some(cert.s_final.clone()),
                stabilizer_basis: None,
                method: Method::Certificate,
                diagnostics: format!(
                    "moment zero reached, |mu| = {:.3e}, stabilizer sigma_min = {:.3e}",
                    cert.mu_residual, smin
                ),
            })
        }
        SolveOutcome::Unstable(cert) => {
            let (class, diag) = match cert.weight_at_sigma {
                WeightValue::Finite(w) if w < -1e-6 => (
                    StabilityClass::Unstable,
                    format!("destabilizer with weight {w:.6e}"),
                ),
                WeightValue::Finite(w) if w.abs() <= 1e-6 => (
                    StabilityClass::SemistableNotPolystable,
                    format!("boundary semistable: |weight| = {:.3e} <= 1e-6", w.abs()),
                ),
                other => {
                    return Err(Error::Inconclusive(format!(
                        "divergent path but weight at sigma is {other:?}"
                    )))
                }
            };
            Ok(StabilityVerdict {
                class,
                witness_rational: None,
                witness_matrix: Some(cert.sigma.clone()),
                stabilizer_basis: None,
                method: Method::Certificate,
                diagnostics: diag,
            })
        }
        SolveOutcome::Inconclusive { reason, .. } => Err(Error::Inconclusive(reason)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::ActionKind;
    use crate::cone::rat;
    use num_traits::Signed;
    use nalgebra::Complex;

    fn cv(entries: &[f64]) -> CVector {
        CVector::from_iterator(entries.len(), entries.iter().map(|&r| Complex::new(r, 0.0)))
    }

    fn pm_exact(tau: Vec<Rat>) -> TorusActionExact {
        TorusActionExact::new(1, vec![vec![rat(1)], vec![rat(-1)]], tau).unwrap()
    }

    #[test]
    fn classify_plus_minus_examples() {
        let a = pm_exact(vec![rat(0)]);
        let v = torus_classify(&a, &cv(&[1.0, 1.0]), 1e-12).unwrap();
        assert_eq!(v.class, StabilityClass::Stable);

        let v = torus_classify(&a, &cv(&[1.0, 0.0]), 1e-12).unwrap();
        assert_eq!(v.class, StabilityClass::SemistableNotPolystable);
        let w = v.witness_rational.unwrap();
        assert!(w[0] < Rat::zero(), "witness moves along the unsupported side");

        let v = torus_classify(&a, &cv(&[0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(v.class, StabilityClass::PolystableNotStable);
    }

    #[test]
    fn unstable_with_shifted_tau() {
        // weights (1), tau_cov = +1/2: xi = -1 has chi(xi) = -1 <= 0 and
        // <tau, xi> = -1/2 < 0
        let a = TorusActionExact::new(1, vec![vec![rat(1)]], vec![crate::cone::rat_frac(1, 2)])
            .unwrap();
        let v = torus_classify(&a, &cv(&[1.0]), 1e-12).unwrap();
        assert_eq!(v.class, StabilityClass::Unstable);
        let xi = v.witness_rational.unwrap();
        assert!(xi[0] < Rat::zero());
        // and with tau_cov = -1/2 the same point is stable
        let a = TorusActionExact::new(1, vec![vec![rat(1)]], vec![crate::cone::rat_frac(-1, 2)])
            .unwrap();
        let v = torus_classify(&a, &cv(&[1.0]), 1e-12).unwrap();
        assert_eq!(v.class, StabilityClass::Stable);
    }

    #[test]
    fn verdict_monotone_and_scale_invariant() {
        let a = TorusActionExact::new(
            2,
            vec![
                vec![rat(1), rat(0)],
                vec![rat(0), rat(1)],
                vec![rat(-1), rat(-1)],
            ],
            vec![rat(0), rat(0)],
        )
        .unwrap();
        for v in [cv(&[1.0, 1.0, 1.0]), cv(&[1.0, 0.0, 1.0]), cv(&[0.0, 0.0, 1.0])] {
            let verdict = torus_classify(&a, &v, 1e-12).unwrap();
            // structural monotonicity
            if verdict.class == StabilityClass::Stable {
                assert!(verdict.class.is_polystable());
            }
            if verdict.class.is_polystable() {
                assert!(verdict.class.is_semistable());
            }
            // scaling invariance
            let scaled = &v * Complex::new(-3.7, 0.4);
            let verdict2 = torus_classify(&a, &scaled, 1e-12).unwrap();
            assert_eq!(verdict.class, verdict2.class);
        }
    }

    #[test]
    fn test_set_plus_minus() {
        let a = pm_exact(vec![rat(0)]);
        let phi = torus_test_set(&a).unwrap();
        // one-dimensional torus: both signs appear
        assert!(phi.len() >= 2);
        assert!(phi.iter().any(|p| p[0] > Rat::zero()));
        assert!(phi.iter().any(|p| p[0] < Rat::zero()));
        // stable point passes, semistable point fails
        assert!(torus_stable_by_test_set(&a, &phi, &cv(&[1.0, 1.0]), 1e-12));
        assert!(!torus_stable_by_test_set(&a, &phi, &cv(&[1.0, 0.0]), 1e-12));
    }

    #[test]
    fn test_set_repeated_weights_with_tau() {
        // weights (1,1), tau_cov = -1: the nonpositive-pairing half-space
        // is {xi >= 0}, and only the C_empty cell {xi > 0} meets it
        let a = TorusActionExact::new(1, vec![vec![rat(1)], vec![rat(1)]], vec![rat(-1)])
            .unwrap();
        let phi = torus_test_set(&a).unwrap();
        assert!(!phi.is_empty());
        for p in &phi {
            assert!(p[0] > Rat::zero(), "only the positive direction survives");
        }
        // supported v is stable (weight +infinity on phi); the zero vector
        // is not (finite weight <tau, xi> <= 0 on phi)
        assert!(torus_stable_by_test_set(&a, &phi, &cv(&[1.0, 1.0]), 1e-12));
        assert!(!torus_stable_by_test_set(&a, &phi, &cv(&[0.0, 0.0]), 1e-12));
        let cone = torus_classify(&a, &cv(&[0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(cone.class, StabilityClass::Unstable);
    }

    #[test]
    fn test_set_empty_weights() {
        let a = TorusActionExact::new(2, vec![], vec![rat(1), rat(0)]).unwrap();
        let phi = torus_test_set(&a).unwrap();
        assert!(!phi.is_empty());
        for p in &phi {
            let t: Rat = a.tau_cov.iter().zip(p).map(|(c, x)| c * x).sum();
            assert!(!t.is_positive() && p.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn general_certificates_match_exact() {
        let opts = SolveOptions::default();
        let af = ActionDescriptor::torus(
            1,
            ActionKind::Linear,
            vec![vec![1.0], vec![-1.0]],
            None,
        )
        .unwrap();
        let v = general_classify(&af, &PointState::linear(cv(&[2.0, 1.0])), &opts).unwrap();
        assert_eq!(v.class, StabilityClass::Stable);
        assert_eq!(v.method, Method::Certificate);

        let v = general_classify(&af, &PointState::linear(cv(&[1.0, 0.0])), &opts).unwrap();
        assert_eq!(v.class, StabilityClass::SemistableNotPolystable);

        let v = general_classify(&af, &PointState::linear(cv(&[0.0, 0.0])), &opts).unwrap();
        assert_eq!(v.class, StabilityClass::PolystableNotStable);
    }
}
