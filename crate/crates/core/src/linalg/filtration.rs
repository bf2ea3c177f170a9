use std::collections::BTreeMap;

use serde::Serialize;

use super::matrix::Matrix;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// An exhaustive increasing filtration `... ⊆ F_j ⊆ F_{j+1} ⊆ ...` of `Q^n`.
///
/// Stored sparsely: only indices where the subspace strictly grows are kept.
/// `F_j` is the step at the largest stored index `<= j`, or `0` below the
/// first one. The last stored step is always the full space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Filtration {
    ambient: usize,
    jumps: BTreeMap<i64, Subspace>,
    zero: Subspace,
}

impl Filtration {
    /// Builds a filtration from explicit steps. Steps may repeat or include
    /// the zero space; they must be nested and the highest must be full.
    pub fn from_steps<I>(ambient: usize, steps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Subspace)>,
    {
        let steps: BTreeMap<i64, Subspace> = steps.into_iter().collect();
        let mut jumps = BTreeMap::new();
        let mut prev = Subspace::zero(ambient);
        for (j, s) in steps {
            if s.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "step {j} lives in Q^{}, filtration of Q^{ambient}",
                    s.ambient_dim()
                )));
            }
            if !prev.is_subspace_of(&s)? {
                return Err(Error::InvalidFiltration(format!("step {j} does not contain step {}", j - 1)));
            }
            if s.dim() > prev.dim() {
                jumps.insert(j, s.clone());
            }
            prev = s;
        }
        if !prev.is_full() {
            return Err(Error::InvalidFiltration(
                "highest step is not the whole space".into(),
            ));
        }
        Ok(Filtration { ambient, jumps, zero: Subspace::zero(ambient) })
    }

    /// `0` below `index`, everything from `index` on.
    pub fn trivial(ambient: usize, index: i64) -> Self {
        Self::from_steps(ambient, [(index, Subspace::full(ambient))]).expect("single full step")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn get(&self, j: i64) -> &Subspace {
        self.jumps.range(..=j).next_back().map_or(&self.zero, |(_, s)| s)
    }

    /// First index with a nonzero step.
    pub fn lowest(&self) -> Option<i64> {
        self.jumps.keys().next().copied()
    }

    /// First index at which the step is the whole space.
    pub fn highest(&self) -> Option<i64> {
        self.jumps.keys().next_back().copied()
    }

    pub fn jumps(&self) -> impl Iterator<Item = (i64, &Subspace)> {
        self.jumps.iter().map(|(&j, s)| (j, s))
    }

    /// `dim F_j - dim F_{j-1}`.
    pub fn graded_dim(&self, j: i64) -> usize {
        self.get(j).dim() - self.get(j - 1).dim()
    }

    /// Nonzero graded dimensions by index.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        self.jumps.keys().map(|&j| (j, self.graded_dim(j))).collect()
    }

    /// Graded dimensions over an explicit index range, zeros included.
    pub fn graded_dims_between(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|j| self.graded_dim(j)).collect()
    }

    /// The filtration `G_j = F_{j - by}`.
    pub fn shifted(&self, by: i64) -> Filtration {
        Filtration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(&j, s)| (j + by, s.clone())).collect(),
            zero: self.zero.clone(),
        }
    }

    /// Image of every step under an invertible matrix.
    pub fn mapped(&self, p: &Matrix) -> Result<Filtration> {
        if p.rows() != self.ambient || p.cols() != self.ambient {
            return Err(Error::DimensionMismatch("mapping matrix must be square of ambient size".into()));
        }
        if p.rank() != self.ambient {
            return Err(Error::PreconditionViolated("mapping matrix is singular".into()));
        }
        let steps = self
            .jumps
            .iter()
            .map(|(&j, s)| Ok((j, s.image_under(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Filtration::from_steps(self.ambient, steps)
    }

    /// Re-checks nesting and exhaustiveness of the stored steps.
    pub fn check_nesting(&self) -> bool {
        let mut prev = &self.zero;
        for s in self.jumps.values() {
            match prev.is_subspace_of(s) {
                Ok(true) if s.dim() > prev.dim() => prev = s,
                _ => return false,
            }
        }
        prev.is_full()
    }
}

#[derive(Serialize)]
struct FiltrationJson<'a> {
    ambient_dim: usize,
    steps: BTreeMap<String, &'a Subspace>,
    graded_dims: BTreeMap<String, usize>,
}

/// Serialized as `{"ambient_dim", "steps": {index: basis}, "graded_dims": {index: dim}}`,
/// listing only the indices where the filtration jumps.
impl Serialize for Filtration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FiltrationJson {
            ambient_dim: self.ambient,
            steps: self.jumps.iter().map(|(j, s)| (j.to_string(), s)).collect(),
            graded_dims: self.graded_dims().into_iter().map(|(j, d)| (j.to_string(), d)).collect(),
        }
        .serialize(serializer)
    }
}
