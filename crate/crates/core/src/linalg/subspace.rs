use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::matrix::Matrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A linear subspace of `Q^n`.
///
/// The basis is kept as the nonzero rows of a reduced row echelon form
/// (equivalently, the basis matrix is in reduced column echelon form), so two
/// subspaces are equal exactly when their representations are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::canonical(Matrix::identity(ambient))
    }

    /// Span of the given vectors, each of length `ambient`.
    pub fn span<I>(ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let vectors: Vec<Vec<Rational>> = vectors.into_iter().collect();
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        Ok(Self::canonical(Matrix::from_rows(vectors)?))
    }

    /// Column span of `basis`.
    pub fn from_basis_matrix(basis: &Matrix) -> Self {
        Self::canonical(basis.transpose())
    }

    fn canonical(row_vectors: Matrix) -> Self {
        let ambient = row_vectors.cols();
        let echelon = row_vectors.echelon();
        let rows = (0..echelon.pivots.len()).map(|i| echelon.reduced.row(i).to_vec()).collect();
        Subspace { ambient, rows }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Canonical basis vectors.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `ambient x dim` matrix whose columns are the canonical basis.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.rows).expect("canonical rows have ambient length")
    }

    fn row_matrix(&self) -> Matrix {
        Matrix::from_fn(self.dim(), self.ambient, |i, j| self.rows[i][j].clone())
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient, other.ambient
            )))
        }
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        if v.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Ok(Matrix::from_rows(rows)?.rank() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(other.sum(self)?.dim() == other.dim())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        Subspace::span(self.ambient, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        // x = A a = B b  <=>  [A | -B] (a, b) = 0
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let stacked = a.hstack(&(-&b))?;
        let coeffs = stacked.null_space_basis();
        let vectors = coeffs
            .into_iter()
            .map(|c| a.mul_vec(&c[..self.dim()]))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.ambient, vectors)
    }

    /// `{M v : v in self}` as a subspace of the codomain of `m`.
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a subspace of Q^{}",
                m.rows(),
                m.cols(),
                self.ambient
            )));
        }
        let images = self.rows.iter().map(|v| m.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Subspace::span(m.rows(), images)
    }

    /// `{v : M v in self}` as a subspace of the domain of `m`.
    pub fn preimage_under(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix pulled back to a subspace of Q^{}",
                m.rows(),
                m.cols(),
                self.ambient
            )));
        }
        // M v lies in self iff every functional vanishing on self kills M v.
        let annihilator = self.standard_annihilator();
        if annihilator.is_zero() {
            return Ok(Subspace::full(m.cols()));
        }
        Ok(kernel(&annihilator.row_matrix().checked_mul(m)?))
    }

    /// Orthogonal complement for the standard dot product.
    fn standard_annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        kernel(&self.row_matrix())
    }

    /// `{v : v^T G s = 0 for all s in self}`.
    ///
    /// `gram` must be square of size `ambient_dim`. When `require_nondegenerate`
    /// is set a singular `gram` is rejected with [`Error::DegeneratePairing`].
    pub fn ortho_complement(&self, gram: &Matrix, require_nondegenerate: bool) -> Result<Subspace> {
        if gram.rows() != self.ambient || gram.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} pairing on Q^{}",
                gram.rows(),
                gram.cols(),
                self.ambient
            )));
        }
        if require_nondegenerate && gram.determinant()?.is_zero() {
            return Err(Error::DegeneratePairing);
        }
        self.left_annihilator(gram)
    }

    /// `{x : x^T B z = 0 for all z in self}` for a pairing `B` whose columns
    /// index this subspace's ambient space.
    pub fn left_annihilator(&self, pairing: &Matrix) -> Result<Subspace> {
        if pairing.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "pairing with {} columns against a subspace of Q^{}",
                pairing.cols(),
                self.ambient
            )));
        }
        if self.is_zero() {
            return Ok(Subspace::full(pairing.rows()));
        }
        // rows z^T B^T, so that (z^T B^T) x = x^T B z
        Ok(kernel(&self.row_matrix().checked_mul(&pairing.transpose())?))
    }
}

/// Serializes as the basis matrix (columns are basis vectors).
impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis_matrix().serialize(serializer)
    }
}

/// Null space of `m`.
pub fn kernel(m: &Matrix) -> Subspace {
    let basis = m.null_space_basis();
    if basis.is_empty() {
        return Subspace::zero(m.cols());
    }
    Subspace::canonical(Matrix::from_rows(basis).expect("null space vectors share a length"))
}

/// Column span of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::from_basis_matrix(m)
}

/// Equality of subspaces of the same ambient space.
pub fn subspace_equal(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.same_ambient(b)?;
    Ok(a == b)
}

/// Orthogonal complement under a symmetric nondegenerate Gram matrix.
pub fn ortho_complement(s: &Subspace, gram: &Matrix) -> Result<Subspace> {
    if !gram.is_symmetric() {
        return Err(Error::PreconditionViolated("Gram matrix is not symmetric".into()));
    }
    s.ortho_complement(gram, true)
}
