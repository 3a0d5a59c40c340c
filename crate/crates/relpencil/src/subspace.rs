//! Subspaces of C^d in a canonical reduced column-echelon basis, with the
//! lattice operations every quotient-dimension formula reduces to.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::Scalar;

/// A subspace of C^d. The basis is stored in reduced column-echelon form,
/// which is canonical: two subspaces are equal as sets iff their basis
/// matrices are identical entrywise.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ExactMatrix", into = "ExactMatrix")]
pub struct Subspace {
    ambient_dim: usize,
    basis: ExactMatrix,
}

impl From<ExactMatrix> for Subspace {
    fn from(m: ExactMatrix) -> Self {
        Subspace::from_basis_matrix(m)
    }
}

impl From<Subspace> for ExactMatrix {
    fn from(s: Subspace) -> Self {
        s.basis
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: ExactMatrix::zero(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: ExactMatrix::identity(ambient_dim) }
    }

    /// Column space of `m`, canonicalized.
    pub fn from_basis_matrix(m: ExactMatrix) -> Self {
        let ambient_dim = m.rows();
        // Reduced column echelon form = transpose of the rref of the
        // transpose; nonzero rows come back as the canonical basis columns.
        let red = m.transpose().rref();
        let nonzero = red.matrix.row_slice(0, red.rank);
        Subspace { ambient_dim, basis: nonzero.transpose() }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in ambient dimension {}",
                    v.len(),
                    ambient_dim
                )));
            }
        }
        Ok(Subspace::from_basis_matrix(ExactMatrix::from_columns(
            ambient_dim,
            vectors.to_vec(),
        )))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        let col = ExactMatrix::from_columns(self.ambient_dim, vec![v.to_vec()]);
        self.basis.hstack(&col).rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimension mismatch");
        self.basis.hstack(&other.basis).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_basis_matrix(self.basis.hstack(&other.basis)))
    }

    /// Intersection via the kernel of `[B_U | -B_V]`: a kernel vector (a, b)
    /// gives the common point B_U a = B_V b.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let stacked = self.basis.hstack(&other.basis.neg());
        let k = stacked.kernel_basis();
        // Project kernel onto the U-coefficients and map through B_U.
        let coeffs = ExactMatrix::from_fn(self.dim(), k.cols(), |i, j| k[(i, j)].clone());
        Ok(Subspace::from_basis_matrix(self.basis.matmul(&coeffs)))
    }

    /// dim U/V for nested V ⊆ U.
    pub fn quotient_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        if !self.contains(other) {
            return Err(Error::NotNested);
        }
        Ok(self.dim() - other.dim())
    }

    /// {Mu : u ∈ U} for a matrix with cols(M) = ambient_dim(U).
    pub fn image(&self, m: &ExactMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "image: matrix has {} columns, subspace ambient dimension {}",
                m.cols(),
                self.ambient_dim
            )));
        }
        Ok(Subspace::from_basis_matrix(m.matmul(&self.basis)))
    }

    /// {x : Mx ∈ U} for a matrix with rows(M) = ambient_dim(U). Computed from
    /// the kernel of `[M | -B_U]` projected onto the x-coordinates.
    pub fn preimage(&self, m: &ExactMatrix) -> Result<Subspace> {
        if m.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "preimage: matrix has {} rows, subspace ambient dimension {}",
                m.rows(),
                self.ambient_dim
            )));
        }
        let stacked = m.hstack(&self.basis.neg());
        let k = stacked.kernel_basis();
        let xs = ExactMatrix::from_fn(m.cols(), k.cols(), |i, j| k[(i, j)].clone());
        Ok(Subspace::from_basis_matrix(xs))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of C^{}) {:?}", self.dim(), self.ambient_dim, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); d];
        v[i] = Scalar::one();
        v
    }

    #[test]
    fn span_collapses_duplicates() {
        let u = Subspace::span(3, &[e(3, 0), e(3, 0)]).unwrap();
        assert_eq!(u.dim(), 1);
        assert!(u.contains_vector(&e(3, 0)));
    }

    #[test]
    fn span_empty_and_full() {
        assert_eq!(Subspace::span(2, &[]).unwrap(), Subspace::zero(2));
        assert_eq!(Subspace::span(2, &[e(2, 0), e(2, 1)]).unwrap(), Subspace::full(2));
    }

    #[test]
    fn sum_examples() {
        let u = Subspace::span(3, &[e(3, 0)]).unwrap();
        let z = Subspace::zero(3);
        assert_eq!(u.sum(&z).unwrap(), u);
        let v = Subspace::span(3, &[e(3, 1)]).unwrap();
        let uv = u.sum(&v).unwrap();
        assert_eq!(uv, Subspace::span(3, &[e(3, 0), e(3, 1)]).unwrap());
        // span(e1) + span(e1+e2) is the same plane.
        let w = Subspace::span(
            3,
            &[vec![Scalar::one(), Scalar::one(), Scalar::zero()]],
        )
        .unwrap();
        assert_eq!(u.sum(&w).unwrap(), uv);
    }

    #[test]
    fn intersect_examples() {
        let u = Subspace::span(3, &[e(3, 0), e(3, 1)]).unwrap();
        assert_eq!(u.intersect(&u).unwrap(), u);
        let v = Subspace::span(3, &[e(3, 1), e(3, 2)]).unwrap();
        assert_eq!(u.intersect(&v).unwrap(), Subspace::span(3, &[e(3, 1)]).unwrap());
        let l1 = Subspace::span(2, &[e(2, 0)]).unwrap();
        let l2 = Subspace::span(2, &[e(2, 1)]).unwrap();
        assert_eq!(l1.intersect(&l2).unwrap(), Subspace::zero(2));
    }

    #[test]
    fn quotient_dims() {
        let full = Subspace::full(2);
        assert_eq!(full.quotient_dim(&Subspace::zero(2)).unwrap(), 2);
        assert_eq!(full.quotient_dim(&full).unwrap(), 0);
        let u = Subspace::span(3, &[e(3, 0), e(3, 1)]).unwrap();
        let v = Subspace::span(3, &[e(3, 0)]).unwrap();
        assert_eq!(u.quotient_dim(&v).unwrap(), 1);
        assert!(matches!(v.quotient_dim(&u), Err(Error::NotNested)));
    }

    #[test]
    fn image_preimage_examples() {
        let u = Subspace::span(2, &[e(2, 0)]).unwrap();
        assert_eq!(u.image(&ExactMatrix::identity(2)).unwrap(), u);
        let zero_map = ExactMatrix::zero(2, 3);
        assert_eq!(
            Subspace::zero(2).preimage(&zero_map).unwrap(),
            Subspace::full(3)
        );
        let n = ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(Subspace::full(2).image(&n).unwrap(), u);
    }

    #[test]
    fn canonical_under_rescaling() {
        let u = Subspace::span(
            3,
            &[
                vec![Scalar::from_int(2), Scalar::from_int(4), Scalar::zero()],
                vec![Scalar::from_int(1), Scalar::from_int(3), Scalar::zero()],
            ],
        )
        .unwrap();
        let v = Subspace::span(
            3,
            &[
                vec![Scalar::from_int(1), Scalar::from_int(3), Scalar::zero()],
                vec![Scalar::from_int(3), Scalar::from_int(7), Scalar::zero()],
            ],
        )
        .unwrap();
        assert_eq!(u, v);
        assert_eq!(u.basis(), v.basis());
    }
}
