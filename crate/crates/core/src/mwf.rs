//! Monodromy weight filtration of a nilpotent operator.
//!
//! For a nilpotent `N` on `V` and a center `k`, the weight filtration `M` is
//! the unique increasing filtration with `N(M_j) ⊆ M_{j-2}` such that `N^l`
//! induces isomorphisms `Gr_{k+l} -> Gr_{k-l}` for every `l >= 0`.
//!
//! Construction: with `l` minimal such that `N^{l+1} = 0`, the outer steps are
//! `M_{k+l} = V`, `M_{k+l-1} = ker N^l`, `M_{k-l} = im N^l`, `M_{k-l-1} = 0`,
//! and the middle is filled by recursing on `ker N^l / im N^l`. The recursion
//! is carried out on pairs `L ⊆ U` of `N`-stable subspaces of `V` itself, so no
//! quotient coordinates are ever chosen.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Filtration, Matrix, Subspace};

/// A nilpotent endomorphism together with the weight it is centered at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentEndo {
    matrix: Matrix,
    center: i64,
    index: u32,
}

impl NilpotentEndo {
    pub fn new(matrix: Matrix, center: i64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "nilpotent operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n = matrix.rows();
        let mut power = Matrix::identity(n);
        for index in 0..=n as u32 {
            if power.is_zero() {
                return Ok(NilpotentEndo { matrix, center, index });
            }
            power = power.checked_mul(&matrix)?;
        }
        Err(Error::NotNilpotent)
    }

    pub fn zero(dim: usize, center: i64) -> Self {
        NilpotentEndo { matrix: Matrix::zeros(dim, dim), center, index: u32::from(dim > 0) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Smallest `m` with `N^m = 0`.
    pub fn nilpotency_index(&self) -> u32 {
        self.index
    }

    pub fn with_center(&self, center: i64) -> Self {
        NilpotentEndo { center, ..self.clone() }
    }

    pub fn power(&self, k: u32) -> Matrix {
        self.matrix.pow(k).expect("square by construction")
    }

    /// The unipotent monodromy `T = exp(N)`.
    pub fn unipotent(&self) -> Matrix {
        self.matrix.exp_nilpotent().expect("nilpotent by construction")
    }

    /// `P N P^{-1}` for an invertible `P`.
    pub fn conjugated(&self, p: &Matrix) -> Result<Self> {
        let inv = p
            .inverse()?
            .ok_or_else(|| Error::PreconditionViolated("conjugating matrix is singular".into()))?;
        let m = p.checked_mul(&self.matrix)?.checked_mul(&inv)?;
        Ok(NilpotentEndo { matrix: m, center: self.center, index: self.index })
    }

    /// The adjoint `S` with `<N x, y> = <x, S y>` under the Gram matrix `gram`,
    /// i.e. `S = G^{-1} N^T G`.
    pub fn pairing_adjoint(&self, gram: &Matrix) -> Result<Self> {
        let inv = gram.inverse()?.ok_or(Error::DegeneratePairing)?;
        let s = inv.checked_mul(&self.matrix.transpose())?.checked_mul(gram)?;
        NilpotentEndo::new(s, self.center)
    }
}

/// Monodromy weight filtration of `n` centered at `n.center()`.
pub fn weight_filtration(n: &NilpotentEndo) -> Filtration {
    let dim = n.dim();
    let mut steps = BTreeMap::new();
    fill_steps(n, &Subspace::full(dim), &Subspace::zero(dim), &mut steps).expect("shapes agree by construction");
    Filtration::from_steps(dim, steps).expect("construction yields a nested exhaustive filtration")
}

fn fill_steps(
    n: &NilpotentEndo,
    upper: &Subspace,
    lower: &Subspace,
    steps: &mut BTreeMap<i64, Subspace>,
) -> Result<()> {
    if upper == lower {
        return Ok(());
    }
    let k = n.center();
    // chain[i] = N^i(upper); find the least l with N^{l+1}(upper) ⊆ lower
    let mut chain = vec![upper.clone()];
    loop {
        let next = chain.last().expect("nonempty").image_under(n.matrix())?;
        if next.is_subspace_of(lower)? {
            break;
        }
        chain.push(next);
    }
    let l = chain.len() - 1;
    let top_power = n.power(l as u32);
    let kernel_part = lower.preimage_under(&top_power)?.intersection(upper)?;
    let image_part = chain[l].sum(lower)?;
    let li = l as i64;
    steps.insert(k + li, upper.clone());
    steps.insert(k + li - 1, kernel_part.clone());
    steps.insert(k - li, image_part.clone());
    steps.insert(k - li - 1, lower.clone());
    if l >= 1 {
        fill_steps(n, &kernel_part, &image_part, steps)?;
    }
    Ok(())
}

/// Which defining property of a weight filtration fails, with indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// `N(M_j)` is not contained in `M_{j-2}`.
    Lowering { index: i64 },
    /// `dim Gr_{k+l} != dim Gr_{k-l}`.
    GradedDims { l: i64, upper: usize, lower: usize },
    /// `N^l: Gr_{k+l} -> Gr_{k-l}` has a kernel.
    NotInjective { l: i64 },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Lowering { index } => {
                write!(f, "N(M_{index}) is not contained in M_{}", index - 2)
            }
            AxiomViolation::GradedDims { l, upper, lower } => {
                write!(f, "graded pieces at center±{l} have dims {upper} and {lower}")
            }
            AxiomViolation::NotInjective { l } => write!(f, "N^{l} is not injective on the graded piece"),
        }
    }
}

/// First failing axiom of `(n, m)`, or `None` when `m` is the weight filtration.
pub fn mwf_violation(n: &NilpotentEndo, m: &Filtration) -> Result<Option<AxiomViolation>> {
    if n.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator on Q^{} against a filtration of Q^{}",
            n.dim(),
            m.ambient_dim()
        )));
    }
    let jumps: Vec<i64> = m.jumps().map(|(j, _)| j).collect();
    // M_j only changes at jumps and M_{j-2} only grows, so jumps suffice.
    for &j in &jumps {
        if !m.get(j).image_under(n.matrix())?.is_subspace_of(m.get(j - 2))? {
            return Ok(Some(AxiomViolation::Lowering { index: j }));
        }
    }
    let k = n.center();
    let reach = jumps.iter().map(|j| (j - k).abs()).max().unwrap_or(0);
    for l in 1..=reach {
        let upper = m.graded_dim(k + l);
        let lower = m.graded_dim(k - l);
        if upper != lower {
            return Ok(Some(AxiomViolation::GradedDims { l, upper, lower }));
        }
        if upper == 0 {
            continue;
        }
        let power = n.power(l as u32);
        let killed = m.get(k - l - 1).preimage_under(&power)?.intersection(m.get(k + l))?;
        if &killed != m.get(k + l - 1) {
            return Ok(Some(AxiomViolation::NotInjective { l }));
        }
    }
    Ok(None)
}

/// True iff `m` satisfies both defining properties of the weight filtration of `n`.
pub fn check_mwf_axioms(n: &NilpotentEndo, m: &Filtration) -> Result<bool> {
    Ok(mwf_violation(n, m)?.is_none())
}
