//! The differential of the matrix exponential at a Hermitian point:
//! (d_s exp)(sdot) e^{-s} = lambda + (k - Ad_{e^s} k), where
//! sdot = lambda + [k, s] with lambda in the centralizer of s and k
//! anti-Hermitian, orthogonal to the centralizer.

use crate::linalg::{anti_hermitian_part, cre, hermitian_part, CMatrix};
use crate::spectral::{AdSpectralData, HermitianTypeVector};

#[derive(Debug, Clone)]
pub struct DexpFactor {
    /// sigma = (d_s exp)(sdot) e^{-s}.
    pub sigma: CMatrix,
    /// Hermitian part of sigma.
    pub sigma_h: CMatrix,
    /// Anti-Hermitian part of sigma.
    pub sigma_a: CMatrix,
    /// Kernel component of sdot under ad(s), Hermitian.
    pub lambda: CMatrix,
    /// Anti-Hermitian solution of [k, s] = sdot - lambda orthogonal to the
    /// centralizer: k_rho = -(sdot)_rho / rho on each ad-eigenspace.
    pub k: CMatrix,
}

pub fn dexp_factor(s: &CMatrix, sdot: &CMatrix) -> DexpFactor {
    let s = hermitian_part(s);
    let sdot = hermitian_part(sdot);
    let base = HermitianTypeVector::new(s.clone());
    let ad = AdSpectralData::new(base.clone());

    let lambda = ad.project_kernel(&sdot);
    let n = s.nrows();
    let mut k = CMatrix::zeros(n, n);
    for (c, &rho) in ad.ad_eigenvalues.iter().enumerate() {
        if rho != 0.0 {
            k += ad.components(&sdot)[c].clone() * cre(-1.0 / rho);
        }
    }

    let exp_s = base.apply_fn(f64::exp);
    let exp_neg_s = base.apply_fn(|t| (-t).exp());
    let sigma = &lambda + &k - &exp_s * &k * &exp_neg_s;
    let sigma_h = hermitian_part(&sigma);
    let sigma_a = anti_hermitian_part(&sigma);
    DexpFactor { sigma, sigma_h, sigma_a, lambda, k }
}

/// Finite-difference reference: (e^{s + h sdot} e^{-s} - I)/h.
pub fn dexp_finite_difference(s: &CMatrix, sdot: &CMatrix, h: f64) -> CMatrix {
    let n = s.nrows();
    let perturbed = HermitianTypeVector::new(s + sdot * cre(h)).apply_fn(f64::exp);
    let exp_neg_s = HermitianTypeVector::new(-s).apply_fn(f64::exp);
    (perturbed * exp_neg_s - CMatrix::identity(n, n)) * cre(1.0 / h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fnorm, trace_pairing, CVector};
    use crate::sampling::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| cre(v)),
        ))
    }

    #[test]
    fn dexp_at_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sdot = random_hermitian(&mut rng, 4);
        let f = dexp_factor(&CMatrix::zeros(4, 4), &sdot);
        assert!(fnorm(&(&f.sigma - &sdot)) < 1e-12);
        assert!(fnorm(&f.sigma_a) < 1e-12);
    }

    #[test]
    fn central_direction_passes_through() {
        let s = diag(&[1.0, 0.0]);
        let sdot = diag(&[0.7, -0.3]);
        let f = dexp_factor(&s, &sdot);
        assert!(fnorm(&(&f.sigma - &sdot)) < 1e-12);
        assert!(fnorm(&f.k) < 1e-12);
        assert!(fnorm(&(&f.lambda - &sdot)) < 1e-12);
    }

    #[test]
    fn off_diagonal_worked_example() {
        // s = diag(1,0), sdot = [[0,1],[1,0]]: k = [[0,-1],[1,0]],
        // sigma = [[0, e-1],[1-1/e, 0]]
        let s = diag(&[1.0, 0.0]);
        let sdot = CMatrix::from_row_slice(2, 2, &[cre(0.0), cre(1.0), cre(1.0), cre(0.0)]);
        let f = dexp_factor(&s, &sdot);
        assert!(fnorm(&f.lambda) < 1e-12);
        let k_want =
            CMatrix::from_row_slice(2, 2, &[cre(0.0), cre(-1.0), cre(1.0), cre(0.0)]);
        assert!(fnorm(&(&f.k - &k_want)) < 1e-12);
        let e = std::f64::consts::E;
        let sigma_want = CMatrix::from_row_slice(
            2,
            2,
            &[cre(0.0), cre(e - 1.0), cre(1.0 - 1.0 / e), cre(0.0)],
        );
        assert!(fnorm(&(&f.sigma - &sigma_want)) < 1e-12);
        // finite-difference verification at h = 1e-6
        let fd = dexp_finite_difference(&s, &sdot, 1e-6);
        assert!(fnorm(&(&fd - &f.sigma)) < 1e-5);
        // decomposition reconstructs sdot
        let recon = &f.lambda + (&f.k * &s - &s * &f.k);
        assert!(fnorm(&(recon - sdot)) < 1e-12);
    }

    #[test]
    fn differential_inequalities_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for i in 0..60 {
            let n = 2 + i % 4;
            let s = random_hermitian(&mut rng, n);
            let sdot = random_hermitian(&mut rng, n);
            let f = dexp_factor(&s, &sdot);
            let lhs = trace_pairing(&sdot, &f.sigma_h).re;
            let rhs = trace_pairing(&sdot, &sdot).re;
            assert!(lhs >= rhs - 1e-8, "pairing bound violated: {lhs} < {rhs}");

            let comm = &f.sigma_a * &s - &s * &f.sigma_a;
            let t = trace_pairing(&comm, &f.sigma_h).re;
            assert!(t <= 1e-8, "commutator pairing must be nonpositive: {t}");
        }
        // equality exactly on commuting pairs
        for _ in 0..20 {
            let s = random_hermitian(&mut rng, 4);
            // commuting sdot: polynomial in s
            let htv = HermitianTypeVector::new(s.clone());
            let sdot = htv.apply_fn(|t| 0.3 * t * t - t + 0.2);
            let f = dexp_factor(&s, &sdot);
            let comm = &f.sigma_a * &s - &s * &f.sigma_a;
            let t = trace_pairing(&comm, &f.sigma_h).re;
            assert!(t.abs() <= 1e-8, "commuting pair should give equality: {t}");
        }
        // strictly negative for a genuinely non-commuting pair
        let s = diag(&[1.0, 0.0]);
        let sdot = CMatrix::from_row_slice(2, 2, &[cre(0.0), cre(1.0), cre(1.0), cre(0.0)]);
        let f = dexp_factor(&s, &sdot);
        let comm = &f.sigma_a * &s - &s * &f.sigma_a;
        assert!(trace_pairing(&comm, &f.sigma_h).re < -1e-6);
    }

    #[test]
    fn finite_difference_convergence_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = random_hermitian(&mut rng, 3);
        let s = &s * cre(1.0 / fnorm(&s));
        let sdot = random_hermitian(&mut rng, 3);
        let f = dexp_factor(&s, &sdot);
        let e1 = fnorm(&(dexp_finite_difference(&s, &sdot, 1e-3) - &f.sigma));
        let e2 = fnorm(&(dexp_finite_difference(&s, &sdot, 1e-4) - &f.sigma));
        assert!(e2 < 0.2 * e1, "error should shrink linearly in h: {e1} -> {e2}");
    }
}
