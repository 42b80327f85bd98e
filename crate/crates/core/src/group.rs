//! Matrix reductive groups: GL(n), SL(n), the diagonal torus, and finite
//! products, together with their Lie algebras, compact forms and the
//! invariant trace pairing.
//!
//! Conventions: the compact form k is the anti-Hermitian part of the
//! algebra, so i*k consists of Hermitian matrices (traceless for SL, real
//! diagonal for the torus). A real orthonormal basis of i*k doubles as a
//! complex basis of the algebra via g = (i*k) (x) C.

use crate::error::{Error, Result};
use crate::linalg::{cre, czero, fnorm, C64, CMatrix};
use nalgebra::Complex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GroupKind {
    GeneralLinear(usize),
    SpecialLinear(usize),
    DiagonalTorus(usize),
    Product(Vec<GroupDescriptor>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub kind: GroupKind,
    /// Scale of the trace pairing h(a,b) = scale * Re tr(a b*). For products
    /// this multiplies the sum of the factor pairings.
    pub pairing_scale: f64,
}

/// One leaf block of a (possibly nested) product: offset into the ambient
/// matrix, block size, effective pairing scale, and the leaf kind.
#[derive(Debug, Clone)]
pub struct LeafBlock {
    pub offset: usize,
    pub size: usize,
    pub scale: f64,
    pub kind: LeafKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafKind {
    Gl,
    Sl,
    Torus,
}

impl GroupDescriptor {
    pub fn gl(n: usize) -> Self {
        Self { kind: GroupKind::GeneralLinear(n), pairing_scale: 1.0 }
    }

    pub fn sl(n: usize) -> Self {
        Self { kind: GroupKind::SpecialLinear(n), pairing_scale: 1.0 }
    }

    pub fn torus(n: usize) -> Self {
        Self { kind: GroupKind::DiagonalTorus(n), pairing_scale: 1.0 }
    }

    pub fn product(factors: Vec<GroupDescriptor>) -> Self {
        Self { kind: GroupKind::Product(factors), pairing_scale: 1.0 }
    }

    pub fn with_pairing_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0, "pairing scale must be positive");
        self.pairing_scale = scale;
        self
    }

    /// Size of the ambient matrices.
    pub fn ambient_dim(&self) -> usize {
        match &self.kind {
            GroupKind::GeneralLinear(n)
            | GroupKind::SpecialLinear(n)
            | GroupKind::DiagonalTorus(n) => *n,
            GroupKind::Product(fs) => fs.iter().map(|f| f.ambient_dim()).sum(),
        }
    }

    /// Leaf blocks in ambient order, with pairing scales accumulated
    /// through nested products.
    pub fn leaf_blocks(&self) -> Vec<LeafBlock> {
        let mut out = Vec::new();
        self.collect_leaves(0, 1.0, &mut out);
        out
    }

    fn collect_leaves(&self, offset: usize, outer_scale: f64, out: &mut Vec<LeafBlock>) {
        let scale = outer_scale * self.pairing_scale;
        match &self.kind {
            GroupKind::GeneralLinear(n) => {
                out.push(LeafBlock { offset, size: *n, scale, kind: LeafKind::Gl })
            }
            GroupKind::SpecialLinear(n) => {
                out.push(LeafBlock { offset, size: *n, scale, kind: LeafKind::Sl })
            }
            GroupKind::DiagonalTorus(n) => {
                out.push(LeafBlock { offset, size: *n, scale, kind: LeafKind::Torus })
            }
            GroupKind::Product(fs) => {
                let mut off = offset;
                for f in fs {
                    f.collect_leaves(off, scale, out);
                    off += f.ambient_dim();
                }
            }
        }
    }

    /// Invariant pairing h(a,b) = sum over blocks of scale_b * Re tr(a_b b_b*).
    pub fn pairing(&self, a: &CMatrix, b: &CMatrix) -> f64 {
        self.pairing_complex(a, b).re
    }

    /// Sesquilinear extension of the pairing to the full algebra.
    pub fn pairing_complex(&self, a: &CMatrix, b: &CMatrix) -> C64 {
        let mut acc = czero();
        for blk in self.leaf_blocks() {
            let av = a.view((blk.offset, blk.offset), (blk.size, blk.size));
            let bv = b.view((blk.offset, blk.offset), (blk.size, blk.size));
            let mut t = czero();
            for (x, y) in av.iter().zip(bv.iter()) {
                t += x * y.conj();
            }
            acc += t * cre(blk.scale);
        }
        acc
    }

    pub fn h_norm(&self, a: &CMatrix) -> f64 {
        self.pairing(a, a).max(0.0).sqrt()
    }

    /// Defect of membership in the Lie algebra (0 for members): off-block
    /// mass, plus per-block defects (trace for SL, off-diagonal for torus).
    pub fn algebra_defect(&self, m: &CMatrix) -> f64 {
        let n = self.ambient_dim();
        assert_eq!(m.nrows(), n);
        assert_eq!(m.ncols(), n);
        let blocks = self.leaf_blocks();
        let mut defect2 = 0.0;
        // mass outside the diagonal blocks
        let mut inside = vec![usize::MAX; n];
        for (bi, blk) in blocks.iter().enumerate() {
            for k in blk.offset..blk.offset + blk.size {
                inside[k] = bi;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if inside[i] != inside[j] {
                    defect2 += m[(i, j)].norm_sqr();
                }
            }
        }
        for blk in &blocks {
            let v = m.view((blk.offset, blk.offset), (blk.size, blk.size));
            match blk.kind {
                LeafKind::Gl => {}
                LeafKind::Sl => {
                    let mut tr = czero();
                    for k in 0..blk.size {
                        tr += v[(k, k)];
                    }
                    defect2 += tr.norm_sqr();
                }
                LeafKind::Torus => {
                    for i in 0..blk.size {
                        for j in 0..blk.size {
                            if i != j {
                                defect2 += v[(i, j)].norm_sqr();
                            }
                        }
                    }
                }
            }
        }
        defect2.sqrt()
    }

    pub fn check_in_algebra(&self, m: &CMatrix, tol: f64) -> Result<()> {
        let d = self.algebra_defect(m);
        let scale = fnorm(m).max(1.0);
        if d <= tol * scale {
            Ok(())
        } else {
            Err(Error::NotInAlgebra(format!(
                "defect {:.3e} exceeds {:.3e}",
                d,
                tol * scale
            )))
        }
    }

    /// Real dimension of i*k (= complex dimension of the algebra).
    pub fn ik_dim(&self) -> usize {
        self.leaf_blocks()
            .iter()
            .map(|b| match b.kind {
                LeafKind::Gl => b.size * b.size,
                LeafKind::Sl => b.size * b.size - 1,
                LeafKind::Torus => b.size,
            })
            .sum()
    }

    /// h-orthonormal basis of i*k as Hermitian ambient matrices. The same
    /// matrices form a complex orthonormal basis of the algebra.
    pub fn ik_basis(&self) -> Vec<CMatrix> {
        let n = self.ambient_dim();
        let mut basis = Vec::with_capacity(self.ik_dim());
        for blk in self.leaf_blocks() {
            let s = 1.0 / blk.scale.sqrt();
            let o = blk.offset;
            let put = |entries: Vec<(usize, usize, C64)>| {
                let mut m = CMatrix::zeros(n, n);
                for (i, j, z) in entries {
                    m[(o + i, o + j)] = z;
                }
                m
            };
            match blk.kind {
                LeafKind::Torus => {
                    for i in 0..blk.size {
                        basis.push(put(vec![(i, i, cre(s))]));
                    }
                }
                LeafKind::Gl => {
                    for i in 0..blk.size {
                        basis.push(put(vec![(i, i, cre(s))]));
                    }
                    let r = s / 2.0_f64.sqrt();
                    for i in 0..blk.size {
                        for j in i + 1..blk.size {
                            basis.push(put(vec![(i, j, cre(r)), (j, i, cre(r))]));
                            basis.push(put(vec![
                                (i, j, Complex::new(0.0, r)),
                                (j, i, Complex::new(0.0, -r)),
                            ]));
                        }
                    }
                }
                LeafKind::Sl => {
                    // traceless real diagonals: orthonormalized E_ii - E_{i+1,i+1} ladder
                    for i in 0..blk.size - 1 {
                        let norm = ((i + 1) as f64 * (i + 2) as f64).sqrt();
                        let mut entries = Vec::new();
                        for k in 0..=i {
                            entries.push((k, k, cre(s / norm)));
                        }
                        entries.push((i + 1, i + 1, cre(-s * (i + 1) as f64 / norm)));
                        basis.push(put(entries));
                    }
                    let r = s / 2.0_f64.sqrt();
                    for i in 0..blk.size {
                        for j in i + 1..blk.size {
                            basis.push(put(vec![(i, j, cre(r)), (j, i, cre(r))]));
                            basis.push(put(vec![
                                (i, j, Complex::new(0.0, r)),
                                (j, i, Complex::new(0.0, -r)),
                            ]));
                        }
                    }
                }
            }
        }
        basis
    }

    /// Complex coordinates of an algebra element in `ik_basis`.
    pub fn algebra_coords(&self, m: &CMatrix) -> Vec<C64> {
        self.ik_basis()
            .iter()
            .map(|b| self.pairing_complex(m, b))
            .collect()
    }

    /// Real coordinates of an i*k element in `ik_basis`.
    pub fn ik_coords(&self, m: &CMatrix) -> Vec<f64> {
        self.ik_basis().iter().map(|b| self.pairing(m, b)).collect()
    }

    pub fn from_coords(&self, coords: &[C64]) -> CMatrix {
        let n = self.ambient_dim();
        let mut m = CMatrix::zeros(n, n);
        for (c, b) in coords.iter().zip(self.ik_basis()) {
            m += b * *c;
        }
        m
    }

    /// Basis of the center of i*k (Hermitian matrices commuting with the
    /// whole compact group): scaled identity per GL/torus-diagonal block,
    /// nothing for SL blocks.
    pub fn center_basis(&self) -> Vec<CMatrix> {
        let n = self.ambient_dim();
        let mut out = Vec::new();
        for blk in self.leaf_blocks() {
            match blk.kind {
                LeafKind::Sl => {}
                LeafKind::Gl => {
                    let mut m = CMatrix::zeros(n, n);
                    let s = 1.0 / (blk.scale * blk.size as f64).sqrt();
                    for k in 0..blk.size {
                        m[(blk.offset + k, blk.offset + k)] = cre(s);
                    }
                    out.push(m);
                }
                LeafKind::Torus => {
                    let s = 1.0 / blk.scale.sqrt();
                    for k in 0..blk.size {
                        let mut m = CMatrix::zeros(n, n);
                        m[(blk.offset + k, blk.offset + k)] = cre(s);
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}
