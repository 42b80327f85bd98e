//! Spectral calculus for vectors of Hermitian type: clustered
//! eigendecompositions, eigenprojections of ad(xi) = [xi, .], matrix
//! functions of Hermitian operators, parabolic subalgebra bases, and the
//! equivalence relation on Hermitian-type vectors.

use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::linalg::{cre, fnorm, hermitian_defect, realify, C64, CMatrix};

/// Relative factor for the default eigenvalue clustering tolerance.
pub const CLUSTER_TOL_FACTOR: f64 = 1e-8;

/// An element of i*k stored with its clustered spectral decomposition.
#[derive(Debug, Clone)]
pub struct HermitianTypeVector {
    pub matrix: CMatrix,
    /// Cluster means, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Multiplicity of each cluster.
    pub multiplicities: Vec<usize>,
    /// Orthogonal projection onto each cluster eigenspace.
    pub eigenprojections: Vec<CMatrix>,
    pub cluster_tol: f64,
}

impl HermitianTypeVector {
    /// Decompose a Hermitian matrix with the default clustering tolerance
    /// 1e-8 * (1 + spectral radius).
    pub fn new(matrix: CMatrix) -> Self {
        Self::with_tol(matrix, None)
    }

    pub fn with_tol(matrix: CMatrix, cluster_tol: Option<f64>) -> Self {
        let n = matrix.nrows();
        assert_eq!(n, matrix.ncols(), "matrix must be square");
        let herm = (&matrix + matrix.adjoint()).scale(0.5);
        let se = nalgebra::SymmetricEigen::new(herm);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
        let radius = order
            .first()
            .map(|_| se.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs())))
            .unwrap_or(0.0);
        let tol = cluster_tol.unwrap_or(CLUSTER_TOL_FACTOR * (1.0 + radius));

        let mut eigenvalues = Vec::new();
        let mut multiplicities = Vec::new();
        let mut eigenprojections = Vec::new();
        let mut k = 0;
        while k < n {
            let mut members = vec![order[k]];
            let mut j = k + 1;
            // merge while adjacent sorted eigenvalues stay within tol
            while j < n
                && (se.eigenvalues[order[j - 1]] - se.eigenvalues[order[j]]).abs() <= tol
            {
                members.push(order[j]);
                j += 1;
            }
            let mean =
                members.iter().map(|&i| se.eigenvalues[i]).sum::<f64>() / members.len() as f64;
            let mut proj = CMatrix::zeros(n, n);
            for &i in &members {
                let v = se.eigenvectors.column(i);
                proj += &v * v.adjoint();
            }
            eigenvalues.push(mean);
            multiplicities.push(members.len());
            eigenprojections.push(proj);
            k = j;
        }

        Self { matrix, eigenvalues, multiplicities, eigenprojections, cluster_tol: tol }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()))
    }

    /// Largest defect among the projection identities: sum = I, mutual
    /// orthogonality/idempotence, and matrix = sum of lambda * P.
    pub fn validate(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut sum = CMatrix::zeros(n, n);
        let mut recon = CMatrix::zeros(n, n);
        for (l, p) in self.eigenvalues.iter().zip(&self.eigenprojections) {
            sum += p;
            recon += p * cre(*l);
        }
        worst = worst.max(fnorm(&(sum - CMatrix::identity(n, n))));
        worst = worst.max(fnorm(&(&recon - &(&self.matrix + self.matrix.adjoint()).scale(0.5))));
        for (i, p) in self.eigenprojections.iter().enumerate() {
            for (j, q) in self.eigenprojections.iter().enumerate() {
                let prod = p * q;
                let want = if i == j { p.clone() } else { CMatrix::zeros(n, n) };
                worst = worst.max(fnorm(&(prod - want)));
            }
        }
        worst
    }

    /// f(xi) = sum f(lambda_i) P_i for a real scalar function.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.apply_fn_complex(|l| cre(f(l)))
    }

    /// Same with complex values (used for unitary exponentials e^{i t xi}).
    pub fn apply_fn_complex(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (l, p) in self.eigenvalues.iter().zip(&self.eigenprojections) {
            out += p * f(*l);
        }
        out
    }

    /// Sorted descending eigenvalues expanded by multiplicity; the canonical
    /// Weyl-chamber representative of the conjugacy class.
    pub fn weyl_representative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for (l, m) in self.eigenvalues.iter().zip(&self.multiplicities) {
            out.extend(std::iter::repeat(*l).take(*m));
        }
        out
    }
}

/// Matrix function of a Hermitian matrix, f(h) = sum f(lambda) P_lambda.
pub fn matrix_function(f: impl Fn(f64) -> f64, h: &CMatrix) -> CMatrix {
    HermitianTypeVector::new(h.clone()).apply_fn(f)
}

/// True iff m lies in the algebra of g and is Hermitian within tol * ||m||.
pub fn hermitian_type_check(m: &CMatrix, g: &GroupDescriptor, tol: f64) -> Result<bool> {
    g.check_in_algebra(m, tol.max(1e-12))?;
    Ok(hermitian_defect(m) <= tol * fnorm(m))
}

/// Characteristic-polynomial coefficients (monic, descending degree):
/// conjugation invariants generating the invariant algebra.
pub fn conjugacy_invariants(m: &CMatrix) -> Vec<C64> {
    crate::linalg::char_poly(m)
}

/// Spectral data of ad(xi) acting on the ambient matrix space: eigenvalue
/// clusters of differences lambda_i - lambda_j with the projection
/// P_delta(A) = sum over matching (i,j) of P_i A P_j.
#[derive(Debug, Clone)]
pub struct AdSpectralData {
    pub base: HermitianTypeVector,
    /// Ad-eigenvalue cluster values, sorted ascending; the kernel cluster is
    /// snapped to exactly 0.
    pub ad_eigenvalues: Vec<f64>,
    /// For each cluster, the list of (i, j) base-cluster index pairs.
    pub pairs: Vec<Vec<(usize, usize)>>,
    pub ad_tol: f64,
}

impl AdSpectralData {
    pub fn new(base: HermitianTypeVector) -> Self {
        let k = base.eigenvalues.len();
        let ad_tol = 2.0 * base.cluster_tol;
        let mut diffs: Vec<(f64, usize, usize)> = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                diffs.push((base.eigenvalues[i] - base.eigenvalues[j], i, j));
            }
        }
        diffs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut ad_eigenvalues = Vec::new();
        let mut pairs = Vec::new();
        let mut s = 0;
        while s < diffs.len() {
            let mut e = s + 1;
            while e < diffs.len() && (diffs[e].0 - diffs[e - 1].0).abs() <= ad_tol {
                e += 1;
            }
            let mean = diffs[s..e].iter().map(|d| d.0).sum::<f64>() / (e - s) as f64;
            let value = if mean.abs() <= ad_tol { 0.0 } else { mean };
            ad_eigenvalues.push(value);
            pairs.push(diffs[s..e].iter().map(|d| (d.1, d.2)).collect());
            s = e;
        }
        Self { base, ad_eigenvalues, pairs, ad_tol }
    }

    fn project_cluster(&self, c: usize, a: &CMatrix) -> CMatrix {
        let n = self.base.dim();
        let mut out = CMatrix::zeros(n, n);
        for &(i, j) in &self.pairs[c] {
            out += &self.base.eigenprojections[i] * a * &self.base.eigenprojections[j];
        }
        out
    }

    /// f([xi,.])(A) = sum f(delta) P_delta(A).
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64, a: &CMatrix) -> CMatrix {
        let n = self.base.dim();
        let mut out = CMatrix::zeros(n, n);
        for c in 0..self.ad_eigenvalues.len() {
            let w = f(self.ad_eigenvalues[c]);
            if w != 0.0 {
                out += self.project_cluster(c, a) * cre(w);
            }
        }
        out
    }

    /// [xi, A] through the spectral decomposition.
    pub fn bracket(&self, a: &CMatrix) -> CMatrix {
        self.apply_fn(|d| d, a)
    }

    /// Projection onto the strictly negative ad-eigenspaces (the Lie algebra
    /// of the unipotent radical).
    pub fn project_negative(&self, a: &CMatrix) -> CMatrix {
        let n = self.base.dim();
        let mut out = CMatrix::zeros(n, n);
        for c in 0..self.ad_eigenvalues.len() {
            if self.ad_eigenvalues[c] < 0.0 {
                out += self.project_cluster(c, a);
            }
        }
        out
    }

    /// Projection onto the kernel of ad(xi).
    pub fn project_kernel(&self, a: &CMatrix) -> CMatrix {
        let n = self.base.dim();
        let mut out = CMatrix::zeros(n, n);
        for c in 0..self.ad_eigenvalues.len() {
            if self.ad_eigenvalues[c] == 0.0 {
                out += self.project_cluster(c, a);
            }
        }
        out
    }

    /// Ad-eigenvalue components of `a`, one matrix per cluster.
    pub fn components(&self, a: &CMatrix) -> Vec<CMatrix> {
        (0..self.ad_eigenvalues.len())
            .map(|c| self.project_cluster(c, a))
            .collect()
    }
}

/// ad_ops of the spec: apply f([xi,.]) to a matrix in the algebra.
pub fn ad_ops(xi: &HermitianTypeVector, f: impl Fn(f64) -> f64, a: &CMatrix) -> CMatrix {
    AdSpectralData::new(xi.clone()).apply_fn(f, a)
}

/// Orthonormal bases (w.r.t. the group pairing) of the unipotent radical
/// u(xi), the centralizer z(xi) and the parabolic algebra g(xi) inside the
/// algebra of `g`.
#[derive(Debug, Clone)]
pub struct ParabolicData {
    pub ad: AdSpectralData,
    pub unipotent_basis: Vec<CMatrix>,
    pub centralizer_basis: Vec<CMatrix>,
    pub parabolic_basis: Vec<CMatrix>,
}

pub fn parabolic_data(xi: &HermitianTypeVector, g: &GroupDescriptor) -> Result<ParabolicData> {
    g.check_in_algebra(&xi.matrix, 1e-8)?;
    let ad = AdSpectralData::new(xi.clone());
    let span = g.ik_basis();
    let project = |keep: &dyn Fn(f64) -> bool| -> Vec<CMatrix> {
        let projected: Vec<CMatrix> = span
            .iter()
            .map(|b| {
                let n = ad.base.dim();
                let mut out = CMatrix::zeros(n, n);
                for c in 0..ad.ad_eigenvalues.len() {
                    if keep(ad.ad_eigenvalues[c]) {
                        out += ad.project_cluster(c, b);
                    }
                }
                out
            })
            .collect();
        gram_schmidt(g, projected)
    };
    let unipotent_basis = project(&|d| d < 0.0);
    let centralizer_basis = project(&|d| d == 0.0);
    let parabolic_basis = project(&|d| d <= 0.0);
    Ok(ParabolicData { ad, unipotent_basis, centralizer_basis, parabolic_basis })
}

/// Modified Gram-Schmidt over the complex pairing of `g`, dropping
/// numerically dependent vectors.
fn gram_schmidt(g: &GroupDescriptor, vecs: Vec<CMatrix>) -> Vec<CMatrix> {
    let mut basis: Vec<CMatrix> = Vec::new();
    for mut v in vecs {
        let scale0 = g.h_norm(&v).max(1e-300);
        for _ in 0..2 {
            for b in &basis {
                let c = g.pairing_complex(&v, b);
                v -= b * c;
            }
        }
        let nrm = g.h_norm(&v);
        if nrm > 1e-8 * scale0.max(1.0) {
            basis.push(v.unscale(nrm));
        }
    }
    basis
}

/// True iff zeta - xi lies in u(xi) within tolerance: condition 2 of the
/// equivalence relation on Hermitian-type vectors. zeta may be any algebra
/// element with real spectrum (it is rejected otherwise).
pub fn equivalence_check(
    xi: &HermitianTypeVector,
    zeta: &CMatrix,
    g: &GroupDescriptor,
    tol: f64,
) -> Result<bool> {
    g.check_in_algebra(zeta, tol.max(1e-10))?;
    // realify and inspect the spectrum: any non-real eigenvalue of zeta
    // shows up as a non-real eigenvalue of the real 2n x 2n matrix
    let re = realify(zeta);
    let eigs = re.complex_eigenvalues();
    let scale = 1.0 + fnorm(zeta);
    for e in eigs.iter() {
        if e.im.abs() > tol.max(1e-9) * scale {
            return Err(Error::NotHermitianType(format!(
                "eigenvalue {:.6e}+{:.6e}i has non-real part",
                e.re, e.im
            )));
        }
    }
    let diff = zeta - &xi.matrix;
    let ad = AdSpectralData::new(xi.clone());
    let residual = &diff - ad.project_negative(&diff);
    Ok(fnorm(&residual) <= tol * (1.0 + fnorm(&diff)))
}

/// Conjugacy-class canonical form: descending eigenvalues with multiplicity.
pub fn weyl_representative(xi: &HermitianTypeVector) -> Vec<f64> {
    xi.weyl_representative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;
    use nalgebra::Complex;

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| cre(v)),
        ))
    }

    fn e_ij(n: usize, i: usize, j: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        m[(i, j)] = cre(1.0);
        m
    }

    #[test]
    fn decomposition_invariants() {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[cre(2.0), Complex::new(0.0, 1.0), Complex::new(0.0, -1.0), cre(2.0)],
        );
        let v = HermitianTypeVector::new(h);
        assert!(v.validate() < 1e-12);
        assert_eq!(v.eigenvalues.len(), 2);

        // clustered case: eigenvalues {1, 1, -2} of an SL(3) element
        let v = HermitianTypeVector::new(diag(&[1.0, 1.0 + 1e-12, -2.0]));
        assert_eq!(v.eigenvalues.len(), 2);
        assert_eq!(v.multiplicities, vec![2, 1]);
        assert!(v.validate() < 1e-10);

        let z = HermitianTypeVector::new(CMatrix::zeros(3, 3));
        assert_eq!(z.eigenvalues, vec![0.0]);
        assert_eq!(z.multiplicities, vec![3]);
    }

    #[test]
    fn hermitian_type_check_examples() {
        let gl2 = GroupDescriptor::gl(2);
        assert!(hermitian_type_check(&diag(&[1.0, 0.0]), &gl2, 1e-10).unwrap());
        // anti-Hermitian rotation generator, spectrum +-i
        let mut rot = CMatrix::zeros(2, 2);
        rot[(0, 1)] = cre(1.0);
        rot[(1, 0)] = cre(-1.0);
        assert!(!hermitian_type_check(&rot, &gl2, 1e-10).unwrap());
        // [[1,1],[0,0]] lies in H(GL(2)) but is not a Hermitian representative
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = cre(1.0);
        m[(0, 1)] = cre(1.0);
        assert!(!hermitian_type_check(&m, &gl2, 1e-10).unwrap());
        // trace violation for SL
        assert!(matches!(
            hermitian_type_check(&diag(&[1.0, 0.0]), &GroupDescriptor::sl(2), 1e-10),
            Err(Error::NotInAlgebra(_))
        ));
    }

    #[test]
    fn parabolic_gl2() {
        let xi = HermitianTypeVector::new(diag(&[1.0, 0.0]));
        let g = GroupDescriptor::gl(2);
        let p = parabolic_data(&xi, &g).unwrap();
        assert_eq!(p.unipotent_basis.len(), 1);
        assert_eq!(p.centralizer_basis.len(), 2);
        assert_eq!(p.parabolic_basis.len(), 3);
        // u(xi) = span{E21}
        let u = &p.unipotent_basis[0];
        assert!((u[(1, 0)].norm() - 1.0).abs() < 1e-10);
        assert!(u[(0, 1)].norm() < 1e-12 && u[(0, 0)].norm() < 1e-12);
        // bracket reproduces [xi, E21] = -E21
        let ad = AdSpectralData::new(xi);
        let b = ad.bracket(&e_ij(2, 1, 0));
        assert!(fnorm(&(b + e_ij(2, 1, 0))) < 1e-12);
    }

    #[test]
    fn parabolic_zero_and_sl3() {
        let g3 = GroupDescriptor::gl(3);
        let p = parabolic_data(&HermitianTypeVector::new(CMatrix::zeros(3, 3)), &g3).unwrap();
        assert_eq!(p.unipotent_basis.len(), 0);
        assert_eq!(p.centralizer_basis.len(), 9);
        assert_eq!(p.parabolic_basis.len(), 9);

        let sl3 = GroupDescriptor::sl(3);
        let xi = HermitianTypeVector::new(diag(&[1.0, 1.0, -2.0]));
        let p = parabolic_data(&xi, &sl3).unwrap();
        assert_eq!(p.unipotent_basis.len(), 2); // entries (3,1) and (3,2)
        assert_eq!(
            p.parabolic_basis.len(),
            p.unipotent_basis.len() + p.centralizer_basis.len()
        );
        for u in &p.unipotent_basis {
            assert!(u[(2, 0)].norm() + u[(2, 1)].norm() > 0.9);
            assert!(u.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn ad_spectrum_conjugate_exchange() {
        // conj-transpose maps Eig(ad, d) to Eig(ad, -d)
        let xi = HermitianTypeVector::new(diag(&[2.0, 0.5, -1.0]));
        let ad = AdSpectralData::new(xi);
        let a = CMatrix::from_fn(3, 3, |i, j| Complex::new((i + 2 * j) as f64, j as f64 - 1.0));
        for (c, d) in ad.ad_eigenvalues.iter().enumerate() {
            let comp = ad.project_cluster(c, &a);
            let back = ad.apply_fn(|x| if (x + d).abs() <= ad.ad_tol { 1.0 } else { 0.0 },
                                   &comp.adjoint());
            assert!(fnorm(&(&back - &comp.adjoint())) < 1e-10);
        }
        // completeness: sum of all components is the identity map
        let total = ad.apply_fn(|_| 1.0, &a);
        assert!(fnorm(&(&total - &a)) < 1e-10);
    }

    #[test]
    fn equivalence_examples() {
        let g = GroupDescriptor::gl(2);
        let xi = HermitianTypeVector::new(diag(&[1.0, 0.0]));
        // zeta = [[1,0],[1,0]]: zeta - xi = E21 in u(xi)
        let zeta = &diag(&[1.0, 0.0]) + e_ij(2, 1, 0);
        assert!(equivalence_check(&xi, &zeta, &g, 1e-8).unwrap());
        // zeta = [[1,1],[0,0]]: difference E12 has ad-eigenvalue +1
        let zeta = &diag(&[1.0, 0.0]) + e_ij(2, 0, 1);
        assert!(!equivalence_check(&xi, &zeta, &g, 1e-8).unwrap());
        // reflexivity
        let xi3 = HermitianTypeVector::new(diag(&[2.0, 2.0, -1.0]));
        assert!(equivalence_check(&xi3, &diag(&[2.0, 2.0, -1.0]), &GroupDescriptor::gl(3), 1e-8)
            .unwrap());
        // non-real spectrum rejected
        let mut rot = CMatrix::zeros(2, 2);
        rot[(0, 1)] = cre(1.0);
        rot[(1, 0)] = cre(-1.0);
        assert!(matches!(
            equivalence_check(&xi, &rot, &g, 1e-8),
            Err(Error::NotHermitianType(_))
        ));
    }

    #[test]
    fn equivalence_relation_properties() {
        // hermitian pair: equivalent iff equal; symmetric in both orders
        let g = GroupDescriptor::gl(3);
        let xi = HermitianTypeVector::new(diag(&[1.0, 0.0, -1.0]));
        let zeta = HermitianTypeVector::new(diag(&[1.0, 0.5, -1.0]));
        assert!(!equivalence_check(&xi, &zeta.matrix, &g, 1e-8).unwrap());
        assert!(!equivalence_check(&zeta, &xi.matrix, &g, 1e-8).unwrap());
        // transitivity on constructed triples: zeta = xi + u1, zeta' = zeta + u2
        let u1 = e_ij(3, 1, 0) * cre(0.7);
        let u2 = e_ij(3, 2, 0) * cre(-0.3);
        let z1 = &xi.matrix + &u1;
        let z2 = &z1 + &u2;
        assert!(equivalence_check(&xi, &z1, &g, 1e-8).unwrap());
        assert!(equivalence_check(&xi, &z2, &g, 1e-8).unwrap());
    }

    #[test]
    fn weyl_and_invariants() {
        let v = HermitianTypeVector::new(diag(&[0.0, 3.0, -1.0]));
        assert_eq!(v.weyl_representative(), vec![3.0, 0.0, -1.0]);

        let h = CMatrix::from_row_slice(2, 2, &[cre(2.0), cre(1.0), cre(1.0), cre(2.0)]);
        let w = HermitianTypeVector::new(h).weyl_representative();
        assert!((w[0] - 3.0).abs() < 1e-12 && (w[1] - 1.0).abs() < 1e-12);

        // spectral invariance under a fixed unitary conjugation
        let th = 0.7f64;
        let u = CMatrix::from_row_slice(
            2,
            2,
            &[cre(th.cos()), cre(-th.sin()), cre(th.sin()), cre(th.cos())],
        );
        let conj = &u * diag(&[2.0, 1.0]) * u.adjoint();
        let w = HermitianTypeVector::new(conj.clone()).weyl_representative();
        assert!((w[0] - 2.0).abs() < 1e-12 && (w[1] - 1.0).abs() < 1e-12);

        // invariants agree for conjugate matrices, differ otherwise
        let inv0 = conjugacy_invariants(&diag(&[1.0, 2.0]));
        let ginv = CMatrix::from_row_slice(2, 2, &[cre(1.0), cre(1.0), cre(0.0), cre(1.0)]);
        let ginv_inv = CMatrix::from_row_slice(2, 2, &[cre(1.0), cre(-1.0), cre(0.0), cre(1.0)]);
        let inv1 = conjugacy_invariants(&(&ginv * diag(&[1.0, 2.0]) * &ginv_inv));
        for (a, b) in inv0.iter().zip(&inv1) {
            assert!((a - b).norm() < 1e-12);
        }
        let inv2 = conjugacy_invariants(&diag(&[1.0, 3.0]));
        assert!((inv0[1] - inv2[1]).norm() > 0.5);
    }

    #[test]
    fn matrix_function_examples() {
        let h = CMatrix::from_row_slice(2, 2, &[cre(0.0), cre(1.0), cre(1.0), cre(0.0)]);
        let sq = matrix_function(|t| t * t, &h);
        assert!(fnorm(&(sq - CMatrix::identity(2, 2))) < 1e-12);

        let h = diag(&[0.0, 2.0f64.ln()]);
        let ex = matrix_function(f64::exp, &h);
        assert!(fnorm(&(ex - diag(&[1.0, 2.0]))) < 1e-12);

        // identity function returns the matrix, and commutation holds
        let h = CMatrix::from_row_slice(
            3,
            3,
            &[
                cre(1.0), Complex::new(0.2, 0.1), cre(0.0),
                Complex::new(0.2, -0.1), cre(-0.5), cre(0.3),
                cre(0.0), cre(0.3), cre(2.0),
            ],
        );
        let id = matrix_function(|t| t, &h);
        assert!(fnorm(&(&id - &h)) < 1e-12);
        let f = matrix_function(f64::exp, &h);
        assert!(fnorm(&(&f * &h - &h * &f)) < 1e-10);
    }

    #[test]
    fn ad_ops_examples() {
        let xi = HermitianTypeVector::new(diag(&[1.0, 0.0]));
        // f = id on E21 gives -E21
        let r = ad_ops(&xi, |d| d, &e_ij(2, 1, 0));
        assert!(fnorm(&(r + e_ij(2, 1, 0))) < 1e-12);
        // constant 1 is the identity operator
        let a = CMatrix::from_fn(2, 2, |i, j| Complex::new(i as f64, j as f64));
        let r = ad_ops(&xi, |_| 1.0, &a);
        assert!(fnorm(&(&r - &a)) < 1e-12);
        // f = exp on E12 (ad-eigenvalue +1) scales by e
        let r = ad_ops(&xi, f64::exp, &e_ij(2, 0, 1));
        assert!(fnorm(&(r - e_ij(2, 0, 1) * cre(std::f64::consts::E))) < 1e-12);
    }

    #[test]
    fn ad_ops_matches_vectorized_matrix_function() {
        // ad(xi) as an n^2 x n^2 Hermitian matrix via kron, then compare
        // matrix_function there with ad_ops here
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 3;
            let mut h = CMatrix::from_fn(n, n, |_, _| {
                Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            h = (&h + h.adjoint()).scale(0.5);
            let a = CMatrix::from_fn(n, n, |_, _| {
                Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let id = CMatrix::identity(n, n);
            let big = id.kronecker(&h) - h.transpose().kronecker(&id);
            let f = |t: f64| (0.37 * t).cos() + 0.2 * t;
            let fb = matrix_function(f, &big);
            // vec(A) in column-major order
            let va = CVector::from_iterator(n * n, a.iter().cloned());
            let fv = &fb * va;
            let want = CMatrix::from_iterator(n, n, fv.iter().cloned());
            let got = ad_ops(&HermitianTypeVector::new(h), f, &a);
            assert!(fnorm(&(&got - &want)) < 1e-9);
        }
    }

    #[test]
    fn monotony_of_matrix_functions() {
        // |f| <= |g| on the spectrum implies ||f(h)v|| <= ||g(h)v||
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = 4;
            let mut h = CMatrix::from_fn(n, n, |_, _| {
                Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            h = (&h + h.adjoint()).scale(0.5);
            let m = 2.0;
            let htv = HermitianTypeVector::new(h.clone());
            let r = htv.spectral_radius().max(1e-9);
            let h = h * cre(m / r); // Spec(h) in [-M, M]
            let v = CVector::from_fn(n, |_, _| {
                Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let fh = matrix_function(f64::sin, &h) * &v;
            let gh = matrix_function(|t| t, &h) * &v;
            assert!(fh.norm() <= gh.norm() + 1e-10);
        }
    }

    #[test]
    fn product_group_blockwise() {
        let g = GroupDescriptor::product(vec![GroupDescriptor::gl(2), GroupDescriptor::gl(2)]);
        let xi = HermitianTypeVector::new(diag(&[1.0, 0.0, 1.0, 0.0]));
        let p = parabolic_data(&xi, &g).unwrap();
        // each block contributes one strictly lower entry
        assert_eq!(p.unipotent_basis.len(), 2);
        for u in &p.unipotent_basis {
            assert!(g.algebra_defect(u) < 1e-10, "basis leaks across blocks");
        }
        // trace pairing used for orthonormality is blockwise
        for (i, a) in p.unipotent_basis.iter().enumerate() {
            for (j, b) in p.unipotent_basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.pairing_complex(a, b).re - want).abs() < 1e-10);
            }
        }
    }
}
