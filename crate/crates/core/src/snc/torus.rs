//! Homology of a real torus `T^m` as the exterior algebra `Λ^• Q^m`.
//!
//! `H_k(T^m)` has basis `e_I = e_{i_1} ∧ ... ∧ e_{i_k}` over `k`-subsets `I`,
//! listed in lexicographic order. A `k`-dimensional linear subtorus spanned by
//! lattice vectors `v_1, ..., v_k` has class `v_1 ∧ ... ∧ v_k`, whose
//! coordinates are the `k x k` minors.

use crate::error::{Error, Result};
use crate::linalg::{int, Matrix, Rational};

/// `k`-subsets of `{0..m}` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        go(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Coordinates of `v_1 ∧ ... ∧ v_k` in the basis `e_I`.
pub fn wedge(m: usize, vectors: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    if let Some(v) = vectors.iter().find(|v| v.len() != m) {
        return Err(Error::DimensionMismatch(format!("vector of length {} in Q^{m}", v.len())));
    }
    let k = vectors.len();
    subsets(m, k)
        .into_iter()
        .map(|rows| Matrix::from_fn(k, k, |i, j| vectors[j][rows[i]].clone()).determinant())
        .collect()
}

/// Class of the coordinate subtorus `T_I`, i.e. `e_I`.
pub fn coordinate_class(m: usize, subset: &[usize]) -> Result<Vec<Rational>> {
    let vectors: Vec<Vec<Rational>> =
        subset.iter().map(|&i| (0..m).map(|j| int(i64::from(i == j))).collect()).collect();
    wedge(m, &vectors)
}

/// Rank of the span of the given classes inside `Λ^k Q^m`.
pub fn span_rank(classes: &[Vec<Rational>]) -> Result<usize> {
    let Some(first) = classes.first() else { return Ok(0) };
    Ok(Matrix::from_columns(first.len(), classes)?.rank())
}

/// The classes of all coordinate `k`-subtori of `T^m` span `H_k(T^m)`.
pub fn coordinate_subtori_span(m: usize, k: usize) -> Result<bool> {
    let classes = subsets(m, k).iter().map(|s| coordinate_class(m, s)).collect::<Result<Vec<_>>>()?;
    let total = subsets(m, k).len();
    Ok(span_rank(&classes)? == total)
}
