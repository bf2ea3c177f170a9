use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default label of the single connected component of a stratum.
pub const DEFAULT_LABEL: &str = "0";

/// A nonempty set `I ⊆ {1..n}` of divisor components, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::InvalidNerve("empty face".into()));
        }
        if indices[0] == 0 {
            return Err(Error::InvalidNerve("component indices start at 1".into()));
        }
        Ok(Face(indices))
    }

    pub fn singleton(i: usize) -> Result<Self> {
        Face::new(vec![i])
    }

    /// Parses a key such as `"1,3"`.
    pub fn parse_key(key: &str) -> Result<Self> {
        let indices = key
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad face key {key:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Face::new(indices)
    }

    pub fn key(&self) -> String {
        self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The face with its `pos`-th smallest index removed (`None` for singletons).
    pub fn without_position(&self, pos: usize) -> Option<Face> {
        if self.0.len() <= 1 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Face(v))
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|i| other.0.binary_search(i).is_ok())
    }

    /// All nonempty proper subsets.
    fn proper_subsets(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        (1..(1u64 << n) - 1).map(move |mask| {
            Face((0..n).filter(|b| mask >> b & 1 == 1).map(|b| self.0[b]).collect())
        })
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// A connected component of a normalized stratum: the ambient variety at
/// level 0, or a component of `Y_I` at level `|I|`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Component {
    Ambient,
    Stratum { face: Face, label: String },
}

impl Component {
    pub fn stratum(face: Face, label: impl Into<String>) -> Self {
        Component::Stratum { face, label: label.into() }
    }

    pub fn level(&self) -> usize {
        match self {
            Component::Ambient => 0,
            Component::Stratum { face, .. } => face.len(),
        }
    }

    pub fn face(&self) -> Option<&Face> {
        match self {
            Component::Ambient => None,
            Component::Stratum { face, .. } => Some(face),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Ambient => write!(f, "X"),
            Component::Stratum { face, label } => write!(f, "{}#{label}", face.key()),
        }
    }
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The dual complex of `Y = Y_1 ∪ ... ∪ Y_n`: the nonempty intersections
/// `Y_I` and the connected components of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    n: usize,
    components: BTreeMap<Face, Vec<String>>,
}

impl Nerve {
    /// Faces missing from `components` get a single component labeled
    /// [`DEFAULT_LABEL`].
    pub fn new(
        n: usize,
        faces: impl IntoIterator<Item = Face>,
        mut components: BTreeMap<Face, Vec<String>>,
    ) -> Result<Self> {
        let faces: BTreeSet<Face> = faces.into_iter().collect();
        if n == 0 || faces.is_empty() {
            return Err(Error::EmptyNerve);
        }
        for face in &faces {
            if let Some(&bad) = face.indices().iter().find(|&&i| i > n) {
                return Err(Error::InvalidNerve(format!("face {face} uses index {bad} > n = {n}")));
            }
        }
        for i in 1..=n {
            if !faces.contains(&Face::singleton(i)?) {
                return Err(Error::InvalidNerve(format!("missing singleton face {{{i}}}")));
            }
        }
        for face in &faces {
            if let Some(sub) = face.proper_subsets().find(|s| !faces.contains(s)) {
                return Err(Error::InvalidNerve(format!("face {face} present but its subset {sub} is not")));
            }
        }
        if let Some(extra) = components.keys().find(|f| !faces.contains(f)) {
            return Err(Error::InvalidNerve(format!("components given for non-face {extra}")));
        }
        for face in &faces {
            let labels = components.entry(face.clone()).or_insert_with(|| vec![DEFAULT_LABEL.to_string()]);
            if labels.is_empty() {
                return Err(Error::InvalidNerve(format!("face {face} has no components")));
            }
            let distinct: BTreeSet<&String> = labels.iter().collect();
            if distinct.len() != labels.len() {
                return Err(Error::InvalidNerve(format!("face {face} repeats a component label")));
            }
        }
        Ok(Nerve { n, components })
    }

    /// Nerve whose faces are all nonempty subsets of `{1..n}` of size at most `max_size`.
    pub fn all_subsets(n: usize, max_size: usize) -> Result<Self> {
        let faces = (1u64..(1u64 << n))
            .filter(|m| m.count_ones() as usize <= max_size)
            .map(|m| Face::new((0..n).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect()))
            .collect::<Result<Vec<_>>>()?;
        Nerve::new(n, faces, BTreeMap::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.components.keys()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.components.contains_key(face)
    }

    pub fn labels(&self, face: &Face) -> Option<&[String]> {
        self.components.get(face).map(Vec::as_slice)
    }

    /// Every face satisfies the closure property (re-check of the constructor invariant).
    pub fn is_closed(&self) -> bool {
        self.components
            .keys()
            .all(|f| f.proper_subsets().all(|s| self.components.contains_key(&s)))
    }

    /// All components at a given level, level 0 being the ambient variety.
    pub fn components_at(&self, level: usize) -> Vec<Component> {
        if level == 0 {
            return vec![Component::Ambient];
        }
        self.components
            .iter()
            .filter(|(f, _)| f.len() == level)
            .flat_map(|(f, labels)| labels.iter().map(move |l| Component::stratum(f.clone(), l.clone())))
            .collect()
    }

    pub fn has_component(&self, c: &Component) -> bool {
        match c {
            Component::Ambient => true,
            Component::Stratum { face, label } => self.labels(face).is_some_and(|ls| ls.contains(label)),
        }
    }

    /// Largest face size.
    pub fn depth(&self) -> usize {
        self.components.keys().map(Face::len).max().unwrap_or(0)
    }

    /// Faces with no strictly larger face containing them.
    pub fn minimal_faces(&self) -> Vec<Face> {
        self.components
            .keys()
            .filter(|f| !self.components.keys().any(|g| g.len() > f.len() && f.is_subset_of(g)))
            .cloned()
            .collect()
    }

    /// Resolves a JSON component key: `"X"`, `"1,2"` (single-component face)
    /// or `"1,2#label"`.
    pub fn resolve_component(&self, key: &str) -> Result<Component> {
        if key == "X" {
            return Ok(Component::Ambient);
        }
        let (face_key, label) = match key.split_once('#') {
            Some((f, l)) => (f, Some(l)),
            None => (key, None),
        };
        let face = Face::parse_key(face_key)?;
        let labels = self.labels(&face).ok_or_else(|| Error::NotAFace(face.to_string()))?;
        let label = match label {
            Some(l) if labels.iter().any(|x| x == l) => l.to_string(),
            Some(l) => return Err(Error::InvalidNerve(format!("face {face} has no component {l:?}"))),
            None if labels.len() == 1 => labels[0].clone(),
            None => {
                return Err(Error::InvalidNerve(format!(
                    "face {face} has several components; use \"{face_key}#label\""
                )))
            }
        };
        Ok(Component::stratum(face, label))
    }
}

/// A rational curve inside `Y^level` meeting `Y^{level+1}` in two points,
/// one on each endpoint component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub level: usize,
    pub ends: [Component; 2],
}

/// An snc pair `(X, Y)` recorded through its nerve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncPair {
    nerve: Nerve,
    log_cy: bool,
    curves: Vec<Curve>,
}

impl SncPair {
    pub fn new(nerve: Nerve, log_cy: bool, curves: Vec<Curve>) -> Result<Self> {
        for (i, c) in curves.iter().enumerate() {
            for end in &c.ends {
                let ok = match end {
                    Component::Ambient => false,
                    Component::Stratum { face, .. } => face.len() == c.level + 1 && nerve.has_component(end),
                };
                if !ok {
                    return Err(Error::InvalidNerve(format!(
                        "curve {i} at level {} has endpoint {end}, expected a component of a face of size {}",
                        c.level,
                        c.level + 1
                    )));
                }
            }
        }
        Ok(SncPair { nerve, log_cy, curves })
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn is_log_cy(&self) -> bool {
        self.log_cy
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }
}

/// A real torus sitting over a point of a minimal stratum component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfoundTorus {
    pub stratum: Component,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratification {
    pub minimal_strata: Vec<Component>,
    pub profound_tori: Vec<ProfoundTorus>,
    /// Largest face size, the codimension of the deepest strata.
    pub delta: usize,
}

/// Minimal strata, one profound torus per minimal stratum component, and `δ`.
pub fn stratify(nerve: &Nerve) -> Stratification {
    let minimal_strata: Vec<Component> = nerve
        .minimal_faces()
        .into_iter()
        .flat_map(|f| {
            let labels = nerve.labels(&f).expect("minimal faces are faces").to_vec();
            labels.into_iter().map(move |l| Component::stratum(f.clone(), l))
        })
        .collect();
    let profound_tori = minimal_strata
        .iter()
        .map(|c| ProfoundTorus { stratum: c.clone(), dim: c.level() })
        .collect();
    Stratification { minimal_strata, profound_tori, delta: nerve.depth() }
}

/// Outcome of the connectivity condition on minimal strata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub holds: bool,
    /// Sizes of the minimal faces that occur.
    pub minimal_sizes: Vec<usize>,
    /// Connected components of the curve graph on minimal strata.
    pub classes: Vec<Vec<Component>>,
    pub reason: Option<String>,
}

/// All minimal strata have one size `j`, and the graph on minimal stratum
/// components whose edges are the level `j - 1` curves is connected.
pub fn check_star_condition(pair: &SncPair) -> StarReport {
    let strat = stratify(pair.nerve());
    let sizes: BTreeSet<usize> = strat.minimal_strata.iter().map(Component::level).collect();
    let minimal_sizes: Vec<usize> = sizes.iter().copied().collect();
    if sizes.len() != 1 {
        return StarReport {
            holds: false,
            minimal_sizes,
            classes: Vec::new(),
            reason: Some("minimal strata have different codimensions".into()),
        };
    }
    let j = minimal_sizes[0];
    let vertices = &strat.minimal_strata;
    let index: BTreeMap<&Component, usize> = vertices.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for c in pair.curves().iter().filter(|c| c.level + 1 == j) {
        if let (Some(&a), Some(&b)) = (index.get(&c.ends[0]), index.get(&c.ends[1])) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut classes: BTreeMap<usize, Vec<Component>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(v.clone());
    }
    let classes: Vec<Vec<Component>> = classes.into_values().collect();
    let holds = classes.len() <= 1;
    StarReport {
        holds,
        minimal_sizes,
        reason: (!holds).then(|| format!("curve graph on minimal strata has {} components", classes.len())),
        classes,
    }
}
