//! JSON fixtures for snc pairs and model examples.
//!
//! ```json
//! {"n": 3, "faces": [[1], [2], [3], [1, 2]], "components": {"1,2": ["p", "q"]},
//!  "log_cy": true, "curves": [{"level": 1, "ends": [["1,2", "p"], [[1, 2], "q"]]}],
//!  "cohomology": {"0": {"X": {"betti": [1, 0, 1], "gysin": {}}},
//!                 "1": {"1": {"betti": [1], "gysin": {"X": {"0": [["1"]]}}}}}}
//! ```
//!
//! Component keys are `"X"`, a face key `"1,2"` when the face has one
//! component, or `"1,2#label"`. Faces inside curve ends may be written as
//! keys or index arrays.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::nerve::{Component, Curve, Face, Nerve, SncPair};
use super::spectral::{ComponentCohomology, StratumCohomology};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FaceRepr {
    Indices(Vec<usize>),
    Key(String),
}

impl FaceRepr {
    fn to_face(&self) -> Result<Face> {
        match self {
            FaceRepr::Indices(v) => Face::new(v.clone()),
            FaceRepr::Key(k) => Face::parse_key(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub level: usize,
    pub ends: [(FaceRepr, String); 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub betti: Vec<usize>,
    #[serde(default)]
    pub gysin: BTreeMap<String, BTreeMap<String, Matrix>>,
}

/// Raw serde form of an snc fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SncFixture {
    pub n: usize,
    pub faces: Vec<Vec<usize>>,
    #[serde(default)]
    pub components: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub log_cy: bool,
    #[serde(default)]
    pub curves: Vec<CurveJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<BTreeMap<String, BTreeMap<String, ComponentJson>>>,
}

fn parse_index<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

impl SncFixture {
    pub fn nerve(&self) -> Result<Nerve> {
        let faces = self.faces.iter().map(|f| Face::new(f.clone())).collect::<Result<Vec<_>>>()?;
        let components = self
            .components
            .iter()
            .map(|(k, v)| Ok((Face::parse_key(k)?, v.clone())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Nerve::new(self.n, faces, components)
    }

    pub fn pair(&self) -> Result<SncPair> {
        let nerve = self.nerve()?;
        let curves = self
            .curves
            .iter()
            .map(|c| {
                let end = |(f, l): &(FaceRepr, String)| -> Result<Component> { Ok(Component::stratum(f.to_face()?, l.clone())) };
                Ok(Curve { level: c.level, ends: [end(&c.ends[0])?, end(&c.ends[1])?] })
            })
            .collect::<Result<Vec<_>>>()?;
        SncPair::new(nerve, self.log_cy, curves)
    }

    /// Parsed stratum cohomology, `None` when the fixture carries none.
    pub fn cohomology(&self, nerve: &Nerve) -> Result<Option<StratumCohomology>> {
        let Some(levels) = &self.cohomology else { return Ok(None) };
        let mut coh = StratumCohomology::new();
        for (level, comps) in levels {
            let level: usize = parse_index(level, "level")?;
            for (key, data) in comps {
                let c = nerve.resolve_component(key)?;
                if c.level() != level {
                    return Err(Error::Parse(format!("component {key} listed under level {level}")));
                }
                let mut gysin = BTreeMap::new();
                for (target, maps) in &data.gysin {
                    let t = nerve.resolve_component(target)?;
                    let maps = maps
                        .iter()
                        .map(|(r, m)| Ok((parse_index(r, "degree")?, m.clone())))
                        .collect::<Result<BTreeMap<usize, Matrix>>>()?;
                    gysin.insert(t, maps);
                }
                coh.insert(c, ComponentCohomology { betti: data.betti.clone(), gysin });
            }
        }
        Ok(Some(coh))
    }

    /// Pair and its cohomology, which must be present.
    pub fn pair_with_cohomology(&self) -> Result<(SncPair, StratumCohomology)> {
        let pair = self.pair()?;
        let coh = self
            .cohomology(pair.nerve())?
            .ok_or_else(|| Error::MissingData("fixture has no \"cohomology\" section".into()))?;
        Ok((pair, coh))
    }

    pub fn from_parts(pair: &SncPair, coh: Option<&StratumCohomology>) -> Self {
        let nerve = pair.nerve();
        let components = nerve
            .faces()
            .filter_map(|f| {
                let labels = nerve.labels(f).expect("face of the nerve");
                (labels != [super::nerve::DEFAULT_LABEL]).then(|| (f.key(), labels.to_vec()))
            })
            .collect();
        let curves = pair
            .curves()
            .iter()
            .map(|c| {
                let end = |e: &Component| match e {
                    Component::Stratum { face, label } => (FaceRepr::Indices(face.indices().to_vec()), label.clone()),
                    Component::Ambient => unreachable!("curve ends are strata"),
                };
                CurveJson { level: c.level, ends: [end(&c.ends[0]), end(&c.ends[1])] }
            })
            .collect();
        let cohomology = coh.map(|coh| {
            let mut levels: BTreeMap<String, BTreeMap<String, ComponentJson>> = BTreeMap::new();
            for (c, data) in coh.iter() {
                let gysin = data
                    .gysin
                    .iter()
                    .map(|(t, maps)| {
                        (component_key(nerve, t), maps.iter().map(|(r, m)| (r.to_string(), m.clone())).collect())
                    })
                    .collect();
                levels
                    .entry(c.level().to_string())
                    .or_default()
                    .insert(component_key(nerve, c), ComponentJson { betti: data.betti.clone(), gysin });
            }
            levels
        });
        SncFixture {
            n: nerve.n(),
            faces: nerve.faces().map(|f| f.indices().to_vec()).collect(),
            components,
            log_cy: pair.is_log_cy(),
            curves,
            cohomology,
        }
    }
}

/// Shortest key that resolves back to `c` in `nerve`.
pub fn component_key(nerve: &Nerve, c: &Component) -> String {
    match c {
        Component::Ambient => "X".into(),
        Component::Stratum { face, label } => match nerve.labels(face) {
            Some([_]) => face.key(),
            _ => format!("{}#{label}", face.key()),
        },
    }
}

/// `P^d` with its `d + 1` coordinate hyperplanes.
///
/// Every stratum `Y_I` is a `P^{d-|I|}`, every Gysin map is `1` in each
/// degree where both sides are nonzero, and the curves are the coordinate
/// lines `Y_K`, `|K| = d - 1`, joining the two torus-fixed points on them.
pub fn coordinate_simplex(d: usize) -> Result<(SncPair, StratumCohomology)> {
    if d == 0 {
        return Err(Error::PreconditionViolated("projective space of dimension at least 1".into()));
    }
    let nerve = Nerve::all_subsets(d + 1, d)?;
    let betti = |codim: usize| -> Vec<usize> { (0..=2 * (d - codim)).map(|r| usize::from(r % 2 == 0)).collect() };
    let one = Matrix::identity(1);
    let mut coh = StratumCohomology::new();
    coh.insert(Component::Ambient, ComponentCohomology { betti: betti(0), gysin: BTreeMap::new() });
    for level in 1..=d {
        for c in nerve.components_at(level) {
            let face = c.face().expect("stratum").clone();
            let mut gysin = BTreeMap::new();
            for pos in 0..face.len() {
                let target = match face.without_position(pos) {
                    None => Component::Ambient,
                    Some(t) => Component::stratum(t, super::nerve::DEFAULT_LABEL),
                };
                let maps: BTreeMap<usize, Matrix> = (0..=2 * (d - level)).step_by(2).map(|r| (r, one.clone())).collect();
                gysin.insert(target, maps);
            }
            coh.insert(c, ComponentCohomology { betti: betti(level), gysin });
        }
    }
    let mut curves = Vec::new();
    for line in nerve.faces().filter(|f| f.len() + 1 == d).cloned().collect::<Vec<_>>() {
        let outside: Vec<usize> = (1..=d + 1).filter(|i| !line.indices().contains(i)).collect();
        let point = |i: usize| -> Result<Component> {
            let mut v = line.indices().to_vec();
            v.push(i);
            Ok(Component::stratum(Face::new(v)?, super::nerve::DEFAULT_LABEL))
        };
        curves.push(Curve { level: d - 1, ends: [point(outside[0])?, point(outside[1])?] });
    }
    if d == 1 {
        let p = |i| Component::stratum(Face::singleton(i).expect("positive index"), super::nerve::DEFAULT_LABEL);
        curves.push(Curve { level: 0, ends: [p(1), p(2)] });
    }
    Ok((SncPair::new(nerve, true, curves)?, coh))
}
