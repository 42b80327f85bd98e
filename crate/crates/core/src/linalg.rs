//! Small dense-matrix helpers shared by the spectral and solver modules.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn czero() -> C64 {
    Complex::new(0.0, 0.0)
}

pub fn cre(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// Frobenius norm.
pub fn fnorm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vnorm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian defect ||m - m*||.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    fnorm(&(m - m.adjoint()))
}

/// (m + m*)/2.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// (m - m*)/2.
pub fn anti_hermitian_part(m: &CMatrix) -> CMatrix {
    (m - m.adjoint()).scale(0.5)
}

/// Standard Hermitian inner product <a, b> = sum a_i conj(b_i).
pub fn vdot(a: &CVector, b: &CVector) -> C64 {
    b.dotc(a)
}

/// tr(a b*), the unscaled Frobenius pairing.
pub fn trace_pairing(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = czero();
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y.conj();
    }
    acc
}

/// Realify an (m x n) complex matrix to the (2m x 2n) block [[Re,-Im],[Im,Re]].
pub fn realify(m: &CMatrix) -> DMatrix<f64> {
    let (r, c) = m.shape();
    let mut out = DMatrix::<f64>::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
            out[(i + r, j + c)] = z.re;
        }
    }
    out
}

/// Real column vector [Re(v); Im(v)].
pub fn realify_vec(v: &CVector) -> DVector<f64> {
    let n = v.len();
    let mut out = DVector::<f64>::zeros(2 * n);
    for i in 0..n {
        out[i] = v[i].re;
        out[i + n] = v[i].im;
    }
    out
}

/// Coefficients of the characteristic polynomial in descending degree,
/// monic: (1, c1, ..., cn) with det(xI - A) = x^n + c1 x^{n-1} + ... + cn.
/// Faddeev-LeVerrier recursion; exactness degrades gracefully for small n.
pub fn char_poly(a: &CMatrix) -> Vec<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut coeffs = vec![cre(1.0)];
    let mut m = CMatrix::identity(n, n);
    let mut c = cre(1.0);
    for k in 1..=n {
        let am = a * &m;
        c = -am.trace() / cre(k as f64);
        coeffs.push(c);
        m = &am + CMatrix::identity(n, n) * c;
    }
    let _ = c;
    coeffs
}
