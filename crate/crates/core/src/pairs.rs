//! Exact stability arithmetic for split holomorphic pairs over a curve:
//! the rank-2 oriented-pair condition and Quot-style tau-stability, both
//! evaluated in rational arithmetic over a finite candidate set of
//! subsheaves (sums of summands plus twisted line subsheaves).

use crate::cone::Rat;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

/// E = O(d_1) + ... + O(d_r) with a section pattern: phi_nonzero[i] marks
/// whether phi restricted to the i-th summand is nonzero. For rank-2
/// oriented pairs, d_phi_degree is the degree of the divisorial common
/// zero component of phi.
#[derive(Debug, Clone)]
pub struct SplitPairData {
    pub summand_degrees: Vec<i64>,
    pub phi_nonzero: Vec<bool>,
    pub d_phi_degree: Option<i64>,
    pub tau: Rat,
}

impl SplitPairData {
    pub fn rank(&self) -> usize {
        self.summand_degrees.len()
    }

    pub fn has_section(&self) -> bool {
        self.phi_nonzero.iter().any(|&b| b)
    }

    pub fn total_degree(&self) -> i64 {
        self.summand_degrees.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.summand_degrees.is_empty() {
            return Err(Error::InvalidProblem("at least one summand required".into()));
        }
        if self.phi_nonzero.len() != self.summand_degrees.len() {
            return Err(Error::InvalidProblem(
                "section pattern length must match the number of summands".into(),
            ));
        }
        // a nonzero section of O(d) needs d >= 0
        for (i, (&d, &nz)) in self.summand_degrees.iter().zip(&self.phi_nonzero).enumerate() {
            if nz && d < 0 {
                return Err(Error::InvalidProblem(format!(
                    "summand {i} has negative degree {d} but a nonzero section"
                )));
            }
        }
        match (self.has_section(), self.d_phi_degree) {
            (false, Some(_)) => Err(Error::InvalidProblem(
                "d_phi_degree is undefined when phi = 0".into(),
            )),
            (true, Some(k)) => {
                let bound = self
                    .summand_degrees
                    .iter()
                    .zip(&self.phi_nonzero)
                    .filter(|(_, &nz)| nz)
                    .map(|(&d, _)| d)
                    .min()
                    .unwrap();
                if k < 0 || k > bound {
                    Err(Error::InvalidProblem(format!(
                        "d_phi_degree {k} outside [0, {bound}]"
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairClass {
    Stable,
    PolystableNotStable,
    NotPolystable,
}

/// Descriptor of a violating subsheaf: the summand index set, optionally
/// twisted down by `twist` on a single summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsheafDesc {
    pub summands: Vec<usize>,
    pub twist: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub class: PairClass,
    pub reason: String,
    pub violated: Option<SubsheafDesc>,
}

/// Rank-2 oriented-pair classification: with a section, stability is the
/// strict slope inequality deg(D_phi) < (d1+d2)/2; without, a split bundle
/// is never stable and is polystable exactly when the summands balance.
pub fn oriented_pair_classify(p: &SplitPairData) -> Result<PairVerdict> {
    if p.rank() != 2 {
        return Err(Error::RankMismatch(format!(
            "oriented-pair classification needs rank 2, got {}",
            p.rank()
        )));
    }
    p.validate()?;
    let (d1, d2) = (p.summand_degrees[0], p.summand_degrees[1]);
    if p.has_section() {
        let k = p.d_phi_degree.ok_or_else(|| {
            Error::InvalidProblem("d_phi_degree required when phi != 0".into())
        })?;
        // deg(D_phi) < mu(E) <=> 2k < d1 + d2
        if 2 * k < d1 + d2 {
            Ok(PairVerdict {
                class: PairClass::Stable,
                reason: format!("deg(D_phi) = {k} < mu(E) = {}/2", d1 + d2),
                violated: None,
            })
        } else {
            Ok(PairVerdict {
                class: PairClass::NotPolystable,
                reason: format!("deg(D_phi) = {k} >= mu(E) = {}/2", d1 + d2),
                violated: Some(SubsheafDesc { summands: vec![], twist: k }),
            })
        }
    } else {
        // split bundles are never stable; polystable iff slopes agree
        if d1 == d2 {
            Ok(PairVerdict {
                class: PairClass::PolystableNotStable,
                reason: format!("phi = 0 and O({d1}) + O({d2}) is polystable split"),
                violated: None,
            })
        } else {
            let bad = if d1 > d2 { 0 } else { 1 };
            Ok(PairVerdict {
                class: PairClass::NotPolystable,
                reason: format!(
                    "phi = 0 and the summand O({}) destabilizes",
                    p.summand_degrees[bad]
                ),
                violated: Some(SubsheafDesc { summands: vec![bad], twist: 0 }),
            })
        }
    }
}

fn rat_i64(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn slope(deg: i64, rank: usize) -> Rat {
    Rat::new(BigInt::from(deg), BigInt::from(rank as i64))
}

/// Candidate subsheaves in the split category: sums of summand subsets and
/// twisted line subsheaves O(d_i - k).
fn candidates(p: &SplitPairData) -> Vec<SubsheafDesc> {
    let r = p.rank();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << r) {
        let summands: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
        out.push(SubsheafDesc { summands, twist: 0 });
    }
    let max_abs = p
        .summand_degrees
        .iter()
        .map(|d| d.unsigned_abs())
        .max()
        .unwrap_or(0) as i64;
    let cap = 4 * max_abs.max(1);
    let floor_neg_tau = (-&p.tau).floor().to_integer().to_i64().unwrap_or(0);
    let mut twisted = 0i64;
    for (i, &d) in p.summand_degrees.iter().enumerate() {
        let k_max = (d - floor_neg_tau).max(0).min(cap - twisted);
        for k in 1..=k_max {
            out.push(SubsheafDesc { summands: vec![i], twist: k });
            twisted += 1;
        }
        if twisted >= cap {
            break;
        }
    }
    out
}

/// Quot-style tau-stability over the split candidate set: stable iff
/// mu(E/F) > -tau for every candidate of rank < r and mu(F) < -tau for
/// every candidate inside ker(phi).
pub fn quot_pair_classify(p: &SplitPairData) -> Result<PairVerdict> {
    p.validate()?;
    let r = p.rank();
    let total = p.total_degree();
    let neg_tau = -&p.tau;
    for cand in candidates(p) {
        let rank_f = cand.summands.len().max(1);
        let deg_f: i64 =
            cand.summands.iter().map(|&i| p.summand_degrees[i]).sum::<i64>() - cand.twist;
        let in_kernel = !cand.summands.is_empty()
            && cand.summands.iter().all(|&i| !p.phi_nonzero[i]);
        if cand.summands.len() < r {
            // mu(E/F) > -tau
            let q_rank = r - cand.summands.len();
            let q_slope = slope(total - deg_f, q_rank);
            if q_slope <= neg_tau {
                return Ok(PairVerdict {
                    class: PairClass::NotPolystable,
                    reason: format!(
                        "mu(E/F) = {} <= -tau = {} for F = {:?}",
                        q_slope, neg_tau, cand
                    ),
                    violated: Some(cand),
                });
            }
        }
        if in_kernel {
            // mu(F) < -tau
            let f_slope = slope(deg_f, rank_f);
            if f_slope >= neg_tau {
                return Ok(PairVerdict {
                    class: PairClass::NotPolystable,
                    reason: format!(
                        "F = {:?} lies in ker(phi) with mu(F) = {} >= -tau = {}",
                        cand, f_slope, neg_tau
                    ),
                    violated: Some(cand),
                });
            }
        }
    }
    Ok(PairVerdict {
        class: PairClass::Stable,
        reason: "all candidate subsheaves satisfy both strict inequalities".into(),
        violated: None,
    })
}

/// Above this bound the quot verdict is τ-independent and equals the
/// injectivity surrogate "no summand lies in ker(phi)".
pub fn quot_large_tau_bound(p: &SplitPairData) -> Rat {
    let max_abs = p
        .summand_degrees
        .iter()
        .map(|d| d.unsigned_abs())
        .max()
        .unwrap_or(0) as i64;
    rat_i64((p.rank() as i64) * max_abs.max(1) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{rat, rat_frac};

    fn oriented(d: [i64; 2], phi: [bool; 2], k: Option<i64>) -> SplitPairData {
        SplitPairData {
            summand_degrees: d.to_vec(),
            phi_nonzero: phi.to_vec(),
            d_phi_degree: k,
            tau: rat(0),
        }
    }

    #[test]
    fn oriented_examples() {
        // d = (3,1), phi_2 != 0, deg D = 1 -> stable (1 < 2)
        let v = oriented_pair_classify(&oriented([3, 1], [false, true], Some(1))).unwrap();
        assert_eq!(v.class, PairClass::Stable);

        // d = (3,1), phi = (phi_1, 0), deg D = 3 -> not polystable (3 >= 2)
        let v = oriented_pair_classify(&oriented([3, 1], [true, false], Some(3))).unwrap();
        assert_eq!(v.class, PairClass::NotPolystable);

        // d = (2,2), phi = 0 -> polystable, not stable
        let v = oriented_pair_classify(&oriented([2, 2], [false, false], None)).unwrap();
        assert_eq!(v.class, PairClass::PolystableNotStable);

        // phi = 0 unbalanced: larger summand destabilizes
        let v = oriented_pair_classify(&oriented([1, -2], [false, false], None)).unwrap();
        assert_eq!(v.class, PairClass::NotPolystable);
        assert_eq!(v.violated.unwrap().summands, vec![0]);
    }

    #[test]
    fn oriented_validation() {
        assert!(matches!(
            oriented_pair_classify(&SplitPairData {
                summand_degrees: vec![1, 2, 3],
                phi_nonzero: vec![false; 3],
                d_phi_degree: None,
                tau: rat(0),
            }),
            Err(Error::RankMismatch(_))
        ));
        // deg(D_phi) beyond a supported summand degree
        assert!(oriented_pair_classify(&oriented([3, 1], [false, true], Some(2))).is_err());
        // nonzero section on a negative summand
        assert!(oriented_pair_classify(&oriented([3, -1], [false, true], Some(0))).is_err());
        // d_phi given but phi = 0
        assert!(oriented_pair_classify(&oriented([3, 1], [false, false], Some(1))).is_err());
    }

    #[test]
    fn oriented_shift_invariance() {
        // shifting both degrees and the divisor degree by c preserves the verdict
        for (d, k) in [([3i64, 1], 1i64), ([0, 0], 0), ([2, -1], 0)] {
            let v0 =
                oriented_pair_classify(&oriented(d, [true, true], Some(k))).map(|v| v.class);
            for c in [1i64, 2, 5] {
                let shifted = oriented([d[0] + c, d[1] + c], [true, true], Some(k + c));
                let v1 = oriented_pair_classify(&shifted).map(|v| v.class);
                assert_eq!(v0.as_ref().ok(), v1.as_ref().ok());
            }
        }
    }

    fn quot(d: Vec<i64>, phi: Vec<bool>, tau: Rat) -> SplitPairData {
        SplitPairData { summand_degrees: d, phi_nonzero: phi, d_phi_degree: None, tau }
    }

    #[test]
    fn quot_examples() {
        // E = O(1)+O(0), phi injective on both summands, tau = 10 -> stable
        let v = quot_pair_classify(&quot(vec![1, 0], vec![true, true], rat(10))).unwrap();
        assert_eq!(v.class, PairClass::Stable);

        // phi killing O(1): F = O(1) in ker, mu(F) = 1 >= -10 -> not polystable
        let v = quot_pair_classify(&quot(vec![1, 0], vec![false, true], rat(10))).unwrap();
        assert_eq!(v.class, PairClass::NotPolystable);
        assert_eq!(v.violated.unwrap().summands, vec![0]);

        // tau = -100: quotient-slope condition fails for a proper summand
        let v = quot_pair_classify(&quot(vec![1, 0], vec![true, true], rat(-100))).unwrap();
        assert_eq!(v.class, PairClass::NotPolystable);
    }

    #[test]
    fn quot_large_tau_matches_kernel_surrogate() {
        // above the explicit bound the verdict stabilizes to "no summand in ker"
        let configs = [
            (vec![1i64, 0], vec![true, true]),
            (vec![1, 0], vec![false, true]),
            (vec![2, -1, 0], vec![true, false, true]),
            (vec![-2, -3], vec![false, false]),
            (vec![3], vec![true]),
            (vec![3], vec![false]),
        ];
        for (d, phi) in configs {
            let base = quot(d.clone(), phi.clone(), rat(0));
            let bound = quot_large_tau_bound(&base);
            let surrogate_stable = phi.iter().all(|&nz| nz);
            for extra in [rat(1), rat(10), rat(100)] {
                let p = quot(d.clone(), phi.clone(), &bound + &extra);
                let v = quot_pair_classify(&p).unwrap();
                assert_eq!(
                    v.class == PairClass::Stable,
                    surrogate_stable,
                    "config {d:?} {phi:?} at tau = bound + {extra}"
                );
            }
        }
    }

    #[test]
    fn quot_boundary_equality_is_rejected_exactly() {
        // mu(E/F) = -tau exactly: strict inequality fails
        // E = O(0)+O(0), F = O(0): mu(E/F) = 0; tau = 0 gives equality
        let v = quot_pair_classify(&quot(vec![0, 0], vec![true, true], rat(0))).unwrap();
        assert_eq!(v.class, PairClass::NotPolystable);
        // tau = 1/2 clears it
        let v = quot_pair_classify(&quot(vec![0, 0], vec![true, true], rat_frac(1, 2))).unwrap();
        assert_eq!(v.class, PairClass::Stable);
    }

    #[test]
    fn quot_rank_one() {
        // r = 1: only the kernel condition can bite
        let v = quot_pair_classify(&quot(vec![2], vec![true], rat(-5))).unwrap();
        assert_eq!(v.class, PairClass::Stable);
        let v = quot_pair_classify(&quot(vec![2], vec![false], rat(-5))).unwrap();
        // F = E in ker: mu = 2 < 5 holds, so stable here
        assert_eq!(v.class, PairClass::Stable);
        let v = quot_pair_classify(&quot(vec![2], vec![false], rat(-2))).unwrap();
        // mu(F) = 2 >= 2 = -tau: fails
        assert_eq!(v.class, PairClass::NotPolystable);
    }
}
