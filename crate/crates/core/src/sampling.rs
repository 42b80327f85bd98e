//! Seeded random inputs and reference representations for the property and
//! acceptance suites.

use crate::action::{ActionDescriptor, ActionKind};
use crate::group::GroupDescriptor;
use crate::linalg::{cre, hermitian_part, CMatrix, CVector};
use nalgebra::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Hermitian matrix with N(0,1) real and imaginary parts before
/// symmetrization.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex::new(standard_normal(rng), standard_normal(rng))
    });
    hermitian_part(&m)
}

/// Traceless Hermitian matrix.
pub fn random_traceless_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let mut m = random_hermitian(rng, n);
    let shift = m.trace() / Complex::new(n as f64, 0.0);
    for i in 0..n {
        m[(i, i)] -= shift;
    }
    m
}

/// Complex vector with N(0,1) components.
pub fn random_cvector<R: Rng>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| {
        Complex::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-ish unitary from the QR of a Ginibre matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex::new(standard_normal(rng), standard_normal(rng))
    });
    let qr = m.qr();
    qr.q()
}

/// GL(n) acting on C^n by the standard representation.
pub fn gl_standard_action(n: usize, kind: ActionKind) -> ActionDescriptor {
    let g = GroupDescriptor::gl(n);
    let mats = g.ik_basis();
    ActionDescriptor::matrix_rep(g, kind, mats, None).expect("standard rep is valid")
}

/// SL(2) acting on binary forms of degree d, written in the unitary basis
/// sqrt(binom(d,j)) x^{d-j} y^j.
pub fn sl2_sym_action(d: usize, kind: ActionKind) -> ActionDescriptor {
    let g = GroupDescriptor::sl(2);
    let basis = g.ik_basis();
    let dim = d + 1;
    let mats: Vec<CMatrix> = basis
        .iter()
        .map(|b| {
            let mut m = CMatrix::zeros(dim, dim);
            let a = b[(0, 0)];
            let c = b[(0, 1)];
            let cc = b[(1, 0)];
            for j in 0..dim {
                m[(j, j)] += a * cre((d as f64) - 2.0 * j as f64);
                if j + 1 < dim {
                    m[(j + 1, j)] += cc * cre((((d - j) * (j + 1)) as f64).sqrt());
                }
                if j >= 1 {
                    m[(j - 1, j)] += c * cre(((j * (d - j + 1)) as f64).sqrt());
                }
            }
            m
        })
        .collect();
    ActionDescriptor::matrix_rep(g, kind, mats, None).expect("sym^d rep is valid")
}
