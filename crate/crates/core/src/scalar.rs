//! The scalar functions used by the spectral calculus: eta, psi, theta and
//! the truncated inverse square root. All have removable singularities at 0
//! which are evaluated by short Taylor expansions below `TAYLOR_CUTOFF`.

/// Switch to a 4-term Taylor expansion below this magnitude.
pub const TAYLOR_CUTOFF: f64 = 1e-4;

/// eta(t) = sqrt((1 - e^{-t}) / t), eta(0) = 1.
pub fn eta(t: f64) -> f64 {
    if t.abs() < TAYLOR_CUTOFF {
        // (1 - e^{-t})/t = 1 - t/2 + t^2/6 - t^3/24 + O(t^4)
        (1.0 - t / 2.0 + t * t / 6.0 - t * t * t / 24.0).sqrt()
    } else {
        ((-f64::exp_m1(-t)) / t).sqrt()
    }
}

/// psi(t) = (e^t - 1) / t, psi(0) = 1.
pub fn psi(t: f64) -> f64 {
    if t.abs() < TAYLOR_CUTOFF {
        1.0 + t / 2.0 + t * t / 6.0 + t * t * t / 24.0
    } else {
        f64::exp_m1(t) / t
    }
}

/// theta(t) = 2t / (e^t - e^{-t}) = t / sinh t, theta(0) = 1.
pub fn theta(t: f64) -> f64 {
    if t.abs() < TAYLOR_CUTOFF {
        // t/sinh t = 1 - t^2/6 + 7 t^4/360 - 31 t^6/15120 + O(t^8)
        let t2 = t * t;
        1.0 - t2 / 6.0 + 7.0 * t2 * t2 / 360.0 - 31.0 * t2 * t2 * t2 / 15120.0
    } else {
        t / t.sinh()
    }
}

/// phi(t) = 1/sqrt(t) for t > 0, otherwise 0. Deliberately discontinuous.
pub fn phi_sqrtinv(t: f64) -> f64 {
    if t > 0.0 {
        1.0 / t.sqrt()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(eta(0.0), 1.0);
        assert_eq!(psi(0.0), 1.0);
        assert_eq!(theta(0.0), 1.0);
        assert_eq!(phi_sqrtinv(0.0), 0.0);
        assert_eq!(phi_sqrtinv(-3.0), 0.0);
    }

    #[test]
    fn direct_values() {
        assert!((psi(1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert!((eta(1.0) - ((1.0 - (-1.0f64).exp()) / 1.0).sqrt()).abs() < 1e-15);
        assert!((theta(2.0) - 2.0 / 2.0f64.sinh()).abs() < 1e-15);
        assert!((phi_sqrtinv(4.0) - 0.5).abs() < 1e-16);
    }

    // The two branches must agree at the cutoff to within 1e-12 relative.
    #[test]
    fn branch_agreement_at_cutoff() {
        for &t in &[TAYLOR_CUTOFF, -TAYLOR_CUTOFF] {
            let eta_taylor = (1.0 - t / 2.0 + t * t / 6.0 - t * t * t / 24.0).sqrt();
            let eta_direct = ((-f64::exp_m1(-t)) / t).sqrt();
            assert!((eta_taylor - eta_direct).abs() / eta_direct <= 1e-12);

            let psi_taylor = 1.0 + t / 2.0 + t * t / 6.0 + t * t * t / 24.0;
            let psi_direct = f64::exp_m1(t) / t;
            assert!((psi_taylor - psi_direct).abs() / psi_direct <= 1e-12);

            let t2 = t * t;
            let theta_taylor =
                1.0 - t2 / 6.0 + 7.0 * t2 * t2 / 360.0 - 31.0 * t2 * t2 * t2 / 15120.0;
            let theta_direct = t / t.sinh();
            assert!((theta_taylor - theta_direct).abs() / theta_direct <= 1e-12);
        }
    }

    #[test]
    fn smoothness_across_cutoff() {
        // adjacent evaluations straddling the cutoff stay close
        for f in [eta, psi, theta] {
            let a = f(TAYLOR_CUTOFF * (1.0 - 1e-9));
            let b = f(TAYLOR_CUTOFF * (1.0 + 1e-9));
            assert!((a - b).abs() < 1e-12);
        }
    }
}
