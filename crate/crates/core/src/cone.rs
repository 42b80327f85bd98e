//! Exact rational polyhedral-cone feasibility by Fourier-Motzkin
//! elimination with strictness flags, plus point extraction and rational
//! nullspaces. No floating point anywhere in this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parse "p", "p/q", or a decimal like "-1.25" into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let den = BigInt::from(10u8).pow(frac.len() as u32);
        let num: BigInt = frac.parse().ok()?;
        let frac_rat = Rat::new(num, den);
        let int_rat = Rat::from_integer(int_part);
        return Some(if neg { int_rat - frac_rat } else { int_rat + frac_rat });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// A homogeneous inequality c . xi <= 0, or c . xi < 0 when strict.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearInequality {
    pub coeffs: Vec<Rat>,
    pub strict: bool,
}

impl LinearInequality {
    pub fn le(coeffs: Vec<Rat>) -> Self {
        Self { coeffs, strict: false }
    }

    pub fn lt(coeffs: Vec<Rat>) -> Self {
        Self { coeffs, strict: true }
    }

    /// The opposite inequality -c . xi <= 0 (or < 0).
    pub fn negated(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect(), strict: self.strict }
    }

    pub fn eval(&self, xi: &[Rat]) -> Rat {
        self.coeffs.iter().zip(xi).map(|(c, x)| c * x).sum()
    }

    pub fn satisfied_by(&self, xi: &[Rat]) -> bool {
        let v = self.eval(xi);
        if self.strict {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    }
}

/// A finite system of homogeneous rational inequalities in `dim` variables.
#[derive(Debug, Clone)]
pub struct RationalCone {
    pub dim: usize,
    pub inequalities: Vec<LinearInequality>,
}

impl RationalCone {
    pub fn new(dim: usize) -> Self {
        Self { dim, inequalities: Vec::new() }
    }

    pub fn push(&mut self, ineq: LinearInequality) {
        assert_eq!(ineq.coeffs.len(), self.dim);
        self.inequalities.push(ineq);
    }

    /// Find a rational point satisfying every inequality, or None if the
    /// system is infeasible. The all-zero point is returned when feasible
    /// and no strict constraint forbids it; strict constraints force a
    /// genuinely nonzero solution. The extraction walks the Fourier-Motzkin
    /// elimination back to front with fixed deterministic choices.
    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        // levels[k] holds the system in variables 0..k before eliminating
        // variable k-1
        let mut levels: Vec<Vec<LinearInequality>> = Vec::with_capacity(self.dim + 1);
        levels.push(self.inequalities.clone());
        for k in (1..=self.dim).rev() {
            let cur = levels.last().unwrap();
            let next = eliminate_last(cur, k);
            levels.push(next);
        }
        // base level: inequalities with no variables; strict ones read 0 < 0
        if levels.last().unwrap().iter().any(|i| i.strict) {
            return None;
        }
        let mut point: Vec<Rat> = Vec::new();
        for k in 1..=self.dim {
            let system = &levels[self.dim - k];
            let x = choose_value(system, k, &point)?;
            point.push(x);
        }
        debug_assert!(self.inequalities.iter().all(|i| i.satisfied_by(&point)));
        Some(point)
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// Does the cone contain any nonzero point? Probes both signs of every
    /// coordinate direction; returns the first hit in a fixed order.
    pub fn nonzero_point(&self) -> Option<Vec<Rat>> {
        if self.inequalities.iter().any(|i| i.strict) {
            // a strict homogeneous constraint already excludes zero
            return self.feasible_point();
        }
        for i in 0..self.dim {
            for sign in [1i64, -1] {
                let mut sys = self.clone();
                let mut c = vec![Rat::zero(); self.dim];
                c[i] = rat(-sign);
                sys.push(LinearInequality::lt(c)); // sign * xi_i > 0
                if let Some(p) = sys.feasible_point() {
                    return Some(p);
                }
            }
        }
        None
    }
}

/// Eliminate variable k-1 (0-based index k-1) from a system in k variables.
fn eliminate_last(system: &[LinearInequality], k: usize) -> Vec<LinearInequality> {
    let j = k - 1;
    let mut zeros = Vec::new();
    let mut uppers = Vec::new(); // coeff > 0
    let mut lowers = Vec::new(); // coeff < 0
    for ineq in system {
        let c = &ineq.coeffs[j];
        if c.is_zero() {
            let mut short = ineq.clone();
            short.coeffs.truncate(j);
            zeros.push(short);
        } else if c.is_positive() {
            uppers.push(ineq);
        } else {
            lowers.push(ineq);
        }
    }
    for u in &uppers {
        for l in &lowers {
            // cancel the j-th coefficient: u * |l_j| + l * u_j
            let uj = &u.coeffs[j];
            let lj = &l.coeffs[j];
            let mut coeffs = Vec::with_capacity(j);
            for i in 0..j {
                coeffs.push(&u.coeffs[i] * (-lj) + &l.coeffs[i] * uj);
            }
            zeros.push(LinearInequality { coeffs, strict: u.strict || l.strict });
        }
    }
    zeros
}

/// Choose a value for variable k-1 given values for variables 0..k-1 and
/// the system in k variables.
fn choose_value(system: &[LinearInequality], k: usize, partial: &[Rat]) -> Option<Rat> {
    let j = k - 1;
    let mut lower: Option<(Rat, bool)> = None; // (bound, strict)
    let mut upper: Option<(Rat, bool)> = None;
    for ineq in system {
        let cj = &ineq.coeffs[j];
        if cj.is_zero() {
            continue;
        }
        let rest: Rat = ineq.coeffs[..j]
            .iter()
            .zip(partial)
            .map(|(c, x)| c * x)
            .sum();
        let bound = -rest / cj;
        if cj.is_positive() {
            // x_j <= bound (or <)
            let tighter = match &upper {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && ineq.strict && !s),
            };
            if tighter {
                upper = Some((bound, ineq.strict));
            }
        } else {
            let tighter = match &lower {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && ineq.strict && !s),
            };
            if tighter {
                lower = Some((bound, ineq.strict));
            }
        }
    }
    match (lower, upper) {
        (None, None) => Some(Rat::zero()),
        (Some((lo, _)), None) => Some(lo + Rat::one()),
        (None, Some((hi, _))) => Some(hi - Rat::one()),
        (Some((lo, ls)), Some((hi, hs))) => {
            if lo < hi {
                Some((lo + hi) / rat(2))
            } else if lo == hi && !ls && !hs {
                Some(lo)
            } else {
                None
            }
        }
    }
}

/// Basis of the exact nullspace of a rational matrix given by rows.
pub fn nullspace(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let mut pivot = None;
        for i in r..nrows {
            if !m[i][c].is_zero() {
                pivot = Some(i);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in &mut m[r] {
            *x = &*x / &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..dim {
                    let sub = &m[r][cc] * &f;
                    m[i][cc] = &m[i][cc] - sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    for free in 0..dim {
        if is_pivot(free) {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[ri][free].clone();
        }
        basis.push(v);
    }
    basis
}
