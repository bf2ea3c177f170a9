//! Semistable degenerations: Clemens tori, limit weight filtrations and the
//! statements relating them.
//!
//! The nearby fiber `X_1` enters only through linear data: the monodromy
//! logarithm `N_k` on each `H^k(X_1)`, the intersection pairing
//! `H^k x H^{2d-k} -> Q`, and optionally the restriction `H^k(X_1) -> H^k(T)`
//! to a profound torus.
//!
//! Homology is identified with cohomology of the complementary degree through
//! the pairing: `ζ ∈ H^{2d-k}` is the class `⟨-, ζ⟩` in `H_k`, whose
//! coordinates in the basis dual to `H^k` are `Bζ`. The homology monodromy
//! logarithm is then `S_k = B N_{2d-k} B^{-1}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::JsonRational;
use crate::linalg::{image, kernel, Filtration, Matrix, Rational, Subspace};
use crate::mwf::{weight_filtration, NilpotentEndo};
use crate::snc::{Face, Nerve, SncFixture};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneration {
    nerve: Nerve,
    d: usize,
    logs: BTreeMap<usize, NilpotentEndo>,
    pairings: BTreeMap<usize, Matrix>,
    restrictions: BTreeMap<usize, Matrix>,
}

impl Degeneration {
    /// `logs[k]` is `N_k` and must satisfy `N_k^{k+1} = 0`; `pairings[k]` has
    /// shape `dim H^k x dim H^{2d-k}` and must be nondegenerate. A pairing for
    /// one of `k`, `2d - k` serves both.
    pub fn new(
        nerve: Nerve,
        d: usize,
        logs: BTreeMap<usize, Matrix>,
        pairings: BTreeMap<usize, Matrix>,
        restrictions: BTreeMap<usize, Matrix>,
    ) -> Result<Self> {
        let mut endos = BTreeMap::new();
        for (k, m) in logs {
            if k > 2 * d {
                return Err(Error::PreconditionViolated(format!("degree {k} exceeds 2d = {}", 2 * d)));
            }
            let n = NilpotentEndo::new(m, k as i64)?;
            if n.nilpotency_index() > k as u32 + 1 {
                return Err(Error::PreconditionViolated(format!("N_{k}^{} is nonzero", k + 1)));
            }
            endos.insert(k, n);
        }
        for (&k, b) in &pairings {
            if k > 2 * d {
                return Err(Error::PreconditionViolated(format!("pairing in degree {k} exceeds 2d = {}", 2 * d)));
            }
            if b.rows() != b.cols() || b.rank() != b.rows() {
                return Err(Error::DegeneratePairing);
            }
            for (deg, dim) in [(k, b.rows()), (2 * d - k, b.cols())] {
                if let Some(n) = endos.get(&deg) {
                    if n.dim() != dim {
                        return Err(Error::DimensionMismatch(format!(
                            "pairing in degree {k} expects dim H^{deg} = {dim}, monodromy acts on Q^{}",
                            n.dim()
                        )));
                    }
                }
            }
        }
        for (&k, r) in &restrictions {
            if let Some(n) = endos.get(&k) {
                if r.cols() != n.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "restriction in degree {k} has {} columns, dim H^{k} = {}",
                        r.cols(),
                        n.dim()
                    )));
                }
            }
        }
        Ok(Degeneration { nerve, d, logs: endos, pairings, restrictions })
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn relative_dim(&self) -> usize {
        self.d
    }

    pub fn log(&self, k: usize) -> Result<&NilpotentEndo> {
        self.logs.get(&k).ok_or_else(|| Error::MissingData(format!("no monodromy logarithm in degree {k}")))
    }

    /// Pairing matrix `B` with `⟨η, ζ⟩ = η^T B ζ` for `η ∈ H^k`, `ζ ∈ H^{2d-k}`.
    pub fn pairing(&self, k: usize) -> Result<Matrix> {
        if let Some(b) = self.pairings.get(&k) {
            return Ok(b.clone());
        }
        self.complementary(k)
            .and_then(|c| self.pairings.get(&c))
            .map(Matrix::transpose)
            .ok_or_else(|| Error::MissingData(format!("no pairing in degree {k}")))
    }

    pub fn restriction(&self, k: usize) -> Result<&Matrix> {
        self.restrictions.get(&k).ok_or(Error::MissingRestriction(k))
    }

    fn complementary(&self, k: usize) -> Option<usize> {
        (2 * self.d).checked_sub(k)
    }

    /// `M_•` on `H^k(X_1)`, centered at `k`.
    pub fn limit_filtration(&self, k: usize) -> Result<Filtration> {
        Ok(weight_filtration(self.log(k)?))
    }

    /// Dimension `|I| - 1` of the Clemens torus over a point of `A_I`.
    pub fn clemens_torus_dim(&self, face: &Face) -> Result<usize> {
        clemens_torus_dim(&self.nerve, face)
    }

    /// Dimension of the Clemens torus over the deepest strata.
    pub fn delta(&self) -> usize {
        self.nerve.depth().saturating_sub(1)
    }

    /// `S_k = B N_{2d-k} B^{-1}` on `H_k`, in the basis dual to `H^k`.
    pub fn homology_log(&self, k: usize) -> Result<Matrix> {
        let c = self
            .complementary(k)
            .ok_or_else(|| Error::MissingData(format!("degree {k} exceeds 2d")))?;
        let n = self.log(c)?;
        let b = self.pairing(k)?;
        let inv = b.inverse()?.ok_or(Error::DegeneratePairing)?;
        b.checked_mul(n.matrix())?.checked_mul(&inv)
    }
}

pub fn clemens_torus_dim(nerve: &Nerve, face: &Face) -> Result<usize> {
    if !nerve.contains(face) {
        return Err(Error::NotAFace(face.to_string()));
    }
    Ok(face.len() - 1)
}

/// `M_{2k-1}H^k` against the annihilator of `M_{2d-2k}H^{2d-k}` under the pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub holds: bool,
    pub lower: Subspace,
    pub annihilator: Subspace,
}

pub fn duality_report(deg: &Degeneration, k: usize) -> Result<DualityReport> {
    let c = deg
        .complementary(k)
        .ok_or_else(|| Error::MissingData(format!("degree {k} exceeds 2d")))?;
    let b = deg.pairing(k)?;
    let lower = deg.limit_filtration(k)?.get(2 * k as i64 - 1).clone();
    let other = deg.limit_filtration(c)?.get(2 * deg.d as i64 - 2 * k as i64).clone();
    let annihilator = other.left_annihilator(&b)?;
    Ok(DualityReport { holds: lower == annihilator, lower, annihilator })
}

/// `M_{2k-1}H^k` is the orthogonal complement of `M_{2d-2k}H^{2d-k}`.
pub fn duality_check(deg: &Degeneration, k: usize) -> Result<bool> {
    Ok(duality_report(deg, k)?.holds)
}

/// `M_{2k-1}H^k` against the kernel of the restriction to a profound torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaincyReport {
    pub holds: bool,
    pub lower: Subspace,
    pub restriction_kernel: Subspace,
}

pub fn maincy_report(deg: &Degeneration, k: usize) -> Result<MaincyReport> {
    let r = deg.restriction(k)?;
    let lower = deg.limit_filtration(k)?.get(2 * k as i64 - 1).clone();
    if r.cols() != lower.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "restriction has {} columns, dim H^{k} = {}",
            r.cols(),
            lower.ambient_dim()
        )));
    }
    let restriction_kernel = kernel(r);
    Ok(MaincyReport { holds: lower == restriction_kernel, lower, restriction_kernel })
}

/// `M_{2k-1}H^k(X_1) = ker(H^k(X_1) -> H^k(T))`.
pub fn verify_maincy(deg: &Degeneration, k: usize) -> Result<bool> {
    Ok(maincy_report(deg, k)?.holds)
}

/// `im S_k^k` against the span of the given torus classes in `H_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusSpanReport {
    pub holds: bool,
    pub image: Subspace,
    pub torus_span: Subspace,
}

pub fn torus_span_report(deg: &Degeneration, k: usize, torus_classes: &Matrix) -> Result<TorusSpanReport> {
    let s = deg.homology_log(k)?;
    if torus_classes.rows() != s.rows() {
        return Err(Error::DimensionMismatch(format!(
            "torus classes live in Q^{}, dim H_{k} = {}",
            torus_classes.rows(),
            s.rows()
        )));
    }
    let image = image(&s.pow(k as u32)?);
    let torus_span = Subspace::from_basis_matrix(torus_classes);
    Ok(TorusSpanReport { holds: image == torus_span, image, torus_span })
}

/// `im S_k^k` is spanned by the columns of `torus_classes`.
pub fn torus_span_check(deg: &Degeneration, k: usize, torus_classes: &Matrix) -> Result<bool> {
    Ok(torus_span_report(deg, k, torus_classes)?.holds)
}

/// `M_{2k-1}H^k` is the annihilator of `im S_k^k` under evaluation `H^k x H_k -> Q`.
pub fn homology_duality_check(deg: &Degeneration, k: usize) -> Result<bool> {
    let s = deg.homology_log(k)?;
    let im = image(&s.pow(k as u32)?);
    let lower = deg.limit_filtration(k)?.get(2 * k as i64 - 1).clone();
    Ok(im.left_annihilator(&Matrix::identity(s.rows()))? == lower)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairingJson {
    Single(Matrix),
    ByDegree(BTreeMap<String, Matrix>),
}

/// Degeneration fixture: the snc fields describe the central fiber's nerve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationFixture {
    #[serde(flatten)]
    pub nerve: SncFixture,
    pub d: usize,
    #[serde(default)]
    pub monodromy_logs: BTreeMap<String, Matrix>,
    /// A bare matrix is the pairing on the middle degree `d`.
    pub pairing: PairingJson,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Matrix>,
    /// Degree -> list of torus classes, each a column vector in `H_k`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub torus_classes: BTreeMap<String, Vec<Vec<JsonRational>>>,
}

fn by_degree(m: &BTreeMap<String, Matrix>) -> Result<BTreeMap<usize, Matrix>> {
    m.iter()
        .map(|(k, v)| {
            let k: usize = k.trim().parse().map_err(|_| Error::Parse(format!("bad degree {k:?}")))?;
            Ok((k, v.clone()))
        })
        .collect()
}

impl DegenerationFixture {
    pub fn degeneration(&self) -> Result<Degeneration> {
        let pairings = match &self.pairing {
            PairingJson::Single(m) => BTreeMap::from([(self.d, m.clone())]),
            PairingJson::ByDegree(m) => by_degree(m)?,
        };
        Degeneration::new(
            self.nerve.nerve()?,
            self.d,
            by_degree(&self.monodromy_logs)?,
            pairings,
            by_degree(&self.restrictions)?,
        )
    }

    pub fn from_degeneration(deg: &Degeneration, torus_classes: &BTreeMap<usize, Matrix>) -> Result<Self> {
        let pair = crate::snc::SncPair::new(deg.nerve.clone(), false, Vec::new())?;
        let keyed = |m: &BTreeMap<usize, Matrix>| m.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        Ok(DegenerationFixture {
            nerve: SncFixture::from_parts(&pair, None),
            d: deg.d,
            monodromy_logs: deg.logs.iter().map(|(k, n)| (k.to_string(), n.matrix().clone())).collect(),
            pairing: PairingJson::ByDegree(keyed(&deg.pairings)),
            restrictions: keyed(&deg.restrictions),
            torus_classes: torus_classes
                .iter()
                .map(|(k, m)| {
                    let cols = m.columns().into_iter().map(|c| c.into_iter().map(JsonRational).collect()).collect();
                    (k.to_string(), cols)
                })
                .collect(),
        })
    }

    /// Torus classes in degree `k` as the columns of a matrix on `H_k`.
    pub fn torus_classes(&self, k: usize, ambient: usize) -> Option<Result<Matrix>> {
        let cols = self.torus_classes.get(&k.to_string())?;
        let cols: Vec<Vec<Rational>> = cols.iter().map(|c| c.iter().map(|q| q.0.clone()).collect()).collect();
        Some(Matrix::from_columns(ambient, &cols))
    }
}
