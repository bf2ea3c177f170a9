//! Perverse Leray filtrations of surfaces fibered in elliptic curves over a
//! curve, and comparison with weight filtrations.
//!
//! For `g: V -> D` with smooth fiber `F` a 2-torus, the perverse filtration on
//! `H^k(V)` has `P_{k-2} = 0`, `P_{k-1} = ker(H^k(V) -> H^k(F))`, `P_k = H^k(V)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, Filtration, Matrix, Subspace};

/// `dim H^k(F)` for a 2-torus fiber.
pub const FIBER_BETTI: [usize; 3] = [1, 2, 1];

fn fiber_betti(k: usize) -> usize {
    FIBER_BETTI.get(k).copied().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedSurfaceData {
    betti: Vec<usize>,
    restrictions: BTreeMap<usize, Matrix>,
}

impl FiberedSurfaceData {
    /// Restrictions are required in degrees `k <= 2` with `betti[k] > 0`;
    /// elsewhere the restriction is the zero map.
    pub fn new(betti: Vec<usize>, restrictions: BTreeMap<usize, Matrix>) -> Result<Self> {
        for (&k, r) in &restrictions {
            let expected = (fiber_betti(k), betti.get(k).copied().unwrap_or(0));
            if (r.rows(), r.cols()) != expected {
                return Err(Error::ShapeMismatch(format!(
                    "restriction in degree {k} is {}x{}, expected {}x{}",
                    r.rows(),
                    r.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        for (k, &b) in betti.iter().enumerate().take(3) {
            if b > 0 && !restrictions.contains_key(&k) {
                return Err(Error::MissingData(format!("restriction to the fiber in degree {k}")));
            }
        }
        Ok(FiberedSurfaceData { betti, restrictions })
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    pub fn restriction(&self, k: usize) -> Matrix {
        self.restrictions
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(fiber_betti(k), self.betti.get(k).copied().unwrap_or(0)))
    }
}

/// `P_•H^k(V)` for every degree `k <= 2` with `H^k(V) ≠ 0`.
pub fn perverse_filtration_surface(data: &FiberedSurfaceData) -> Result<BTreeMap<usize, Filtration>> {
    let mut out = BTreeMap::new();
    for (k, &b) in data.betti.iter().enumerate().take(3) {
        if b == 0 {
            continue;
        }
        let k_i = k as i64;
        let ker = kernel(&data.restriction(k));
        let f = Filtration::from_steps(b, [(k_i - 2, Subspace::zero(b)), (k_i - 1, ker), (k_i, Subspace::full(b))])?;
        out.insert(k, f);
    }
    Ok(out)
}

/// First place where `P_m = W_{2m} = W_{2m+1}` fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PwWitness {
    pub degree: usize,
    pub m: i64,
    /// `"W_2m"` or `"W_2m+1"`.
    pub step: String,
    pub perverse: Subspace,
    pub weight: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PwReport {
    pub holds: bool,
    /// `dim Gr^P_m = dim Gr^W_{2m}` and `Gr^W_{2m+1} = 0` everywhere.
    pub graded_dims_agree: bool,
    pub witness: Option<PwWitness>,
}

pub fn pw_report(p: &BTreeMap<usize, Filtration>, w: &BTreeMap<usize, Filtration>) -> Result<PwReport> {
    let degrees: Vec<usize> = p.keys().chain(w.keys()).copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let mut witness = None;
    let mut graded_dims_agree = true;
    for k in degrees {
        let (pk, wk) = match (p.get(&k), w.get(&k)) {
            (Some(a), Some(b)) => (a, b),
            (a, _) => {
                return Err(Error::DimensionMismatch(format!(
                    "degree {k} has a {} filtration only",
                    if a.is_some() { "perverse" } else { "weight" }
                )))
            }
        };
        if pk.ambient_dim() != wk.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "degree {k}: perverse on Q^{}, weight on Q^{}",
                pk.ambient_dim(),
                wk.ambient_dim()
            )));
        }
        let ends = [pk.lowest(), pk.highest(), wk.lowest().map(|j| j.div_euclid(2)), wk.highest().map(|j| j.div_euclid(2))];
        let lo = ends.iter().flatten().min().copied().unwrap_or(0) - 1;
        let hi = ends.iter().flatten().max().copied().unwrap_or(0) + 1;
        for m in lo..=hi {
            graded_dims_agree &= pk.graded_dim(m) == wk.graded_dim(2 * m) && wk.graded_dim(2 * m + 1) == 0;
            if witness.is_some() {
                continue;
            }
            for (step, j) in [("W_2m", 2 * m), ("W_2m+1", 2 * m + 1)] {
                if pk.get(m) != wk.get(j) {
                    witness = Some(PwWitness {
                        degree: k,
                        m,
                        step: step.into(),
                        perverse: pk.get(m).clone(),
                        weight: wk.get(j).clone(),
                    });
                    break;
                }
            }
        }
    }
    Ok(PwReport { holds: witness.is_none(), graded_dims_agree, witness })
}

/// `P_m H^k = W_{2m} H^k = W_{2m+1} H^k` for all `m` and all degrees.
pub fn pw_compare(p: &BTreeMap<usize, Filtration>, w: &BTreeMap<usize, Filtration>) -> Result<bool> {
    Ok(pw_report(p, w)?.holds)
}

/// `{"betti": [..], "restrictions": {k: matrix}, "weight": {k: {index: basis}}}`.
///
/// A weight step is a matrix whose columns span it, or `[]` for zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PwFixture {
    pub betti: Vec<usize>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Matrix>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weight: BTreeMap<String, BTreeMap<String, Matrix>>,
}

fn parse_key<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad index {s:?}")))
}

impl PwFixture {
    pub fn data(&self) -> Result<FiberedSurfaceData> {
        let restrictions = self
            .restrictions
            .iter()
            .map(|(k, m)| Ok((parse_key(k)?, m.clone())))
            .collect::<Result<BTreeMap<usize, Matrix>>>()?;
        FiberedSurfaceData::new(self.betti.clone(), restrictions)
    }

    /// Weight filtrations given inline, by degree.
    pub fn weight_filtrations(&self) -> Result<BTreeMap<usize, Filtration>> {
        let mut out = BTreeMap::new();
        for (k, steps) in &self.weight {
            let k: usize = parse_key(k)?;
            let ambient = self.betti.get(k).copied().unwrap_or(0);
            let steps = steps
                .iter()
                .map(|(j, m)| {
                    let s = if m.rows() == 0 {
                        Subspace::zero(ambient)
                    } else if m.rows() == ambient {
                        Subspace::from_basis_matrix(m)
                    } else {
                        return Err(Error::ShapeMismatch(format!(
                            "weight step {j} of H^{k} has {} rows, expected {ambient}",
                            m.rows()
                        )));
                    };
                    Ok((parse_key::<i64>(j)?, s))
                })
                .collect::<Result<Vec<_>>>()?;
            out.insert(k, Filtration::from_steps(ambient, steps)?);
        }
        Ok(out)
    }

    pub fn from_data(data: &FiberedSurfaceData, weight: &BTreeMap<usize, Filtration>) -> Self {
        PwFixture {
            betti: data.betti.clone(),
            restrictions: data.restrictions.iter().map(|(k, m)| (k.to_string(), m.clone())).collect(),
            weight: weight
                .iter()
                .map(|(k, f)| (k.to_string(), f.jumps().map(|(j, s)| (j.to_string(), s.basis_matrix())).collect()))
                .collect(),
        }
    }
}

/// `V = (C*)^2 -> C*`, projection to one factor, in the basis of `H^•((C*)^2)`
/// given by products of the generators of the two factors. Every restriction
/// to the fiber `(S^1)^2 ⊂ (C*)^2` of a level set is an isomorphism.
pub fn torus_surface() -> FiberedSurfaceData {
    let restrictions = BTreeMap::from([(0, Matrix::identity(1)), (1, Matrix::identity(2)), (2, Matrix::identity(1))]);
    FiberedSurfaceData::new(vec![1, 2, 1], restrictions).expect("valid shapes")
}
