//! The weight spectral sequence of `X \ Y`.
//!
//! `E_1^{p,q} = H^{2p+q}(Ỹ^{-p})` for `p <= 0`, with `d_1` the alternating
//! sum of Gysin maps. The sequence degenerates at `E_2`, where
//! `E_2^{p,q} = Gr^W_q H^{p+q}(X \ Y)`.
//!
//! Sign convention: the Gysin map from a component of `Y_I`,
//! `I = {i_1 < ... < i_s}`, into a component of `Y_{I \ {i_r}}` enters `d_1`
//! with sign `(-1)^{r-1}`. Gysin data supplied by callers is unsigned.

use std::collections::BTreeMap;

use serde::Serialize;

use super::nerve::{Component, Nerve, SncPair};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Filtration, Matrix, Subspace};

/// Betti numbers and outgoing Gysin maps of one stratum component.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComponentCohomology {
    /// `betti[r] = dim H^r`.
    pub betti: Vec<usize>,
    /// target component -> degree `r` -> matrix of `H^r(self) -> H^{r+2}(target)`.
    pub gysin: BTreeMap<Component, BTreeMap<usize, Matrix>>,
}

impl ComponentCohomology {
    pub fn betti(&self, r: usize) -> usize {
        self.betti.get(r).copied().unwrap_or(0)
    }
}

/// Cohomology of the normalized strata `Ỹ^p`, supplied as data.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StratumCohomology {
    components: BTreeMap<Component, ComponentCohomology>,
}

impl StratumCohomology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Component, data: ComponentCohomology) {
        self.components.insert(c, data);
    }

    pub fn get(&self, c: &Component) -> Option<&ComponentCohomology> {
        self.components.get(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Component, &ComponentCohomology)> {
        self.components.iter()
    }
}

/// `dim Gr^W_q H^m(X \ Y)` for every `(m, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightTable {
    dims: BTreeMap<(i64, i64), usize>,
}

impl WeightTable {
    pub fn from_entries(entries: impl IntoIterator<Item = ((i64, i64), usize)>) -> Self {
        WeightTable { dims: entries.into_iter().filter(|&(_, d)| d > 0).collect() }
    }

    /// `dim Gr^W_weight H^degree`.
    pub fn get(&self, degree: i64, weight: i64) -> usize {
        self.dims.get(&(degree, weight)).copied().unwrap_or(0)
    }

    /// Nonzero entries as `((degree, weight), dim)`.
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total_dim(&self, degree: i64) -> usize {
        self.dims.iter().filter(|((m, _), _)| *m == degree).map(|(_, d)| d).sum()
    }

    pub fn max_degree(&self) -> i64 {
        self.dims.keys().map(|&(m, _)| m).max().unwrap_or(0)
    }

    /// Every nonzero weight `q` of `H^m` satisfies `m <= q <= 2m`.
    pub fn weights_in_range(&self) -> bool {
        self.dims.keys().all(|&(m, q)| m <= q && q <= 2 * m)
    }

    /// Weight filtration of `H^m` in a weight-adapted basis: basis vectors are
    /// ordered by increasing weight, so `W_q` is spanned by a prefix of them.
    pub fn adapted_filtration(&self, degree: i64) -> Filtration {
        let total = self.total_dim(degree);
        let mut prefix = 0;
        let mut steps = Vec::new();
        for (&(m, q), &d) in &self.dims {
            if m != degree {
                continue;
            }
            prefix += d;
            let basis = Matrix::from_fn(total, prefix, |i, j| crate::linalg::int(i64::from(i == j)));
            steps.push((q, Subspace::from_basis_matrix(&basis)));
        }
        Filtration::from_steps(total, steps).expect("prefix spans are nested and end full")
    }

    /// Euler characteristic `sum_m (-1)^m dim H^m`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|(&(m, _), &d)| if m % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

impl Serialize for WeightTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            degree: i64,
            weight: i64,
            dim: usize,
        }
        let v: Vec<Entry> = self.entries().map(|((degree, weight), dim)| Entry { degree, weight, dim }).collect();
        v.serialize(serializer)
    }
}

/// The `E_1` page with its differential, and the resulting `E_2` dimensions.
#[derive(Clone, Debug)]
pub struct WeightSpectralSequence {
    /// Basis of `E_1^{p,q}`: the components of `Ỹ^{-p}`, each contributing
    /// `dim H^{2p+q}` consecutive coordinates.
    blocks: BTreeMap<(i64, i64), Vec<(Component, usize)>>,
    /// `d_1: E_1^{p,q} -> E_1^{p+1,q}`, keyed by source `(p, q)`.
    d1: BTreeMap<(i64, i64), Matrix>,
    table: WeightTable,
}

impl WeightSpectralSequence {
    pub fn e1_dim(&self, p: i64, q: i64) -> usize {
        self.blocks.get(&(p, q)).map_or(0, |b| b.iter().map(|(_, d)| d).sum())
    }

    /// Nonzero `E_1` dimensions keyed by `(p, q)`.
    pub fn e1_dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.blocks.keys().map(|&(p, q)| ((p, q), self.e1_dim(p, q))).filter(|&(_, d)| d > 0).collect()
    }

    /// Matrix of `d_1` out of `E_1^{p,q}`, or `None` when source or target vanish.
    pub fn d1(&self, p: i64, q: i64) -> Option<&Matrix> {
        self.d1.get(&(p, q))
    }

    /// Components indexing the blocks of `E_1^{p,q}`, with block sizes.
    pub fn basis(&self, p: i64, q: i64) -> &[(Component, usize)] {
        self.blocks.get(&(p, q)).map_or(&[], Vec::as_slice)
    }

    pub fn weight_table(&self) -> &WeightTable {
        &self.table
    }

    /// `sum (-1)^{p+q} dim E_1^{p,q}`.
    pub fn e1_euler_characteristic(&self) -> i64 {
        self.e1_dims()
            .into_iter()
            .map(|((p, q), d)| if (p + q).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

fn gysin_sign(source: &Component, target: &Component) -> Option<i64> {
    match (source.face(), target) {
        (Some(f), Component::Ambient) if f.len() == 1 => Some(1),
        (Some(f), Component::Stratum { face: t, .. }) => (0..f.len())
            .find(|&pos| f.without_position(pos).as_ref() == Some(t))
            .map(|pos| if pos % 2 == 0 { 1 } else { -1 }),
        _ => None,
    }
}

fn check_data(nerve: &Nerve, coh: &StratumCohomology, depth: usize) -> Result<()> {
    for level in 0..=depth {
        for c in nerve.components_at(level) {
            let data = coh.get(&c).ok_or_else(|| Error::MissingData(format!("no cohomology for component {c}")))?;
            if data.betti(0) != 1 {
                return Err(Error::ShapeMismatch(format!("component {c} must be connected: betti_0 = 1")));
            }
        }
    }
    for (c, data) in coh.iter() {
        if !nerve.has_component(c) {
            return Err(Error::MissingData(format!("cohomology given for unknown component {c}")));
        }
        for (target, maps) in &data.gysin {
            if gysin_sign(c, target).is_none() || !nerve.has_component(target) {
                return Err(Error::ShapeMismatch(format!("Gysin map {c} -> {target} is not a codimension one inclusion")));
            }
            let tdata = coh.get(target).ok_or_else(|| Error::MissingData(format!("no cohomology for component {target}")))?;
            for (&r, m) in maps {
                let expected = (tdata.betti(r + 2), data.betti(r));
                if (m.rows(), m.cols()) != expected {
                    return Err(Error::ShapeMismatch(format!(
                        "Gysin {c} -> {target} in degree {r} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        expected.0,
                        expected.1
                    )));
                }
            }
        }
        // an inclusion between single-component strata always exists
        if let Some(face) = c.face() {
            for pos in 0..face.len() {
                let target = match face.without_position(pos) {
                    None => Component::Ambient,
                    Some(t) => match nerve.labels(&t) {
                        Some([only]) if nerve.labels(face).map_or(0, <[String]>::len) == 1 => {
                            Component::stratum(t, only.clone())
                        }
                        _ => continue,
                    },
                };
                let tdata = coh.get(&target).ok_or_else(|| Error::MissingData(format!("no cohomology for {target}")))?;
                for r in 0..data.betti.len() {
                    let needed = tdata.betti(r + 2) > 0 && data.betti(r) > 0;
                    let given = data.gysin.get(&target).is_some_and(|m| m.contains_key(&r));
                    if needed && !given {
                        return Err(Error::MissingData(format!("Gysin map {c} -> {target} in degree {r}")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Builds the `E_1` page and `d_1`, checks `d_1 ∘ d_1 = 0`, and computes `E_2`.
pub fn weight_spectral_sequence(pair: &SncPair, coh: &StratumCohomology) -> Result<WeightSpectralSequence> {
    let nerve = pair.nerve();
    let depth = nerve.depth();
    check_data(nerve, coh, depth)?;
    let max_deg = coh.iter().map(|(_, d)| d.betti.len()).max().unwrap_or(0);

    let mut blocks: BTreeMap<(i64, i64), Vec<(Component, usize)>> = BTreeMap::new();
    for level in 0..=depth {
        for c in nerve.components_at(level) {
            let data = coh.get(&c).expect("checked above");
            for r in 0..max_deg {
                let (p, q) = (-(level as i64), (r + 2 * level) as i64);
                blocks.entry((p, q)).or_default().push((c.clone(), data.betti(r)));
            }
        }
    }

    let mut d1 = BTreeMap::new();
    for (&(p, q), src) in &blocks {
        let Some(tgt) = blocks.get(&(p + 1, q)) else { continue };
        let rows: usize = tgt.iter().map(|(_, d)| d).sum();
        let cols: usize = src.iter().map(|(_, d)| d).sum();
        if rows == 0 || cols == 0 {
            continue;
        }
        let r = (2 * p + q) as usize;
        let mut m = Matrix::zeros(rows, cols);
        let mut col0 = 0;
        for (sc, sd) in src {
            let sdata = coh.get(sc).expect("checked above");
            let mut row0 = 0;
            for (tc, td) in tgt {
                if let Some(g) = sdata.gysin.get(tc).and_then(|maps| maps.get(&r)) {
                    let sign = crate::linalg::int(gysin_sign(sc, tc).expect("validated"));
                    for i in 0..*td {
                        for j in 0..*sd {
                            m.set(row0 + i, col0 + j, g.get(i, j) * &sign);
                        }
                    }
                }
                row0 += td;
            }
            col0 += sd;
        }
        d1.insert((p, q), m);
    }

    for (&(p, q), first) in &d1 {
        if let Some(second) = d1.get(&(p + 1, q)) {
            if !second.checked_mul(first)?.is_zero() {
                return Err(Error::D1SquareNonzero { p, q });
            }
        }
    }

    let mut entries = Vec::new();
    for (&(p, q), src) in &blocks {
        let dim: usize = src.iter().map(|(_, d)| d).sum();
        if dim == 0 {
            continue;
        }
        let out_rank = d1.get(&(p, q)).map_or(0, Matrix::rank);
        let in_rank = d1.get(&(p - 1, q)).map_or(0, Matrix::rank);
        entries.push(((p + q, q), dim - out_rank - in_rank));
    }
    Ok(WeightSpectralSequence { blocks, d1, table: WeightTable::from_entries(entries) })
}

/// `Gr^W_q H^m(X \ Y)` dimensions from the weight spectral sequence.
pub fn weight_ss(pair: &SncPair, coh: &StratumCohomology) -> Result<WeightTable> {
    Ok(weight_spectral_sequence(pair, coh)?.weight_table().clone())
}

/// Outcome of the bound `dim Gr^W_{2k} H^k <= C(δ, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub holds: bool,
    /// `(k, dim Gr^W_{2k} H^k, C(δ, k))` for every `k` checked.
    pub rows: Vec<(i64, usize, u64)>,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn bound_report(table: &WeightTable, delta: usize) -> BoundReport {
    let top = table.max_degree().max(delta as i64);
    let rows: Vec<(i64, usize, u64)> = (0..=top)
        .map(|k| (k, table.get(k, 2 * k), binomial(delta as u64, k as u64)))
        .collect();
    BoundReport { holds: rows.iter().all(|&(_, d, b)| d as u64 <= b), rows }
}

/// `dim Gr^W_{2k} H^k <= C(δ, k)` for every `k`.
pub fn check_bound(table: &WeightTable, delta: usize) -> bool {
    bound_report(table, delta).holds
}

/// Coordinates of the top weight part `Gr^W_{2k} H^k` in terms of torus classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopWeightGenerators {
    /// One entry per component of `Ỹ^k`; each is dual to the torus `T_I` over it.
    pub basis: Vec<Component>,
    /// `ker d_1 ⊆ E_1^{-k,2k}`, isomorphic to `Gr^W_{2k} H^k`.
    pub kernel: Subspace,
}

pub fn top_weight_generators(pair: &SncPair, coh: &StratumCohomology, k: usize) -> Result<TopWeightGenerators> {
    let ss = weight_spectral_sequence(pair, coh)?;
    let (p, q) = (-(k as i64), 2 * k as i64);
    let basis: Vec<Component> = ss.basis(p, q).iter().filter(|(_, d)| *d > 0).map(|(c, _)| c.clone()).collect();
    let dim = ss.e1_dim(p, q);
    let kernel = match ss.d1(p, q) {
        Some(m) => kernel(m),
        None => Subspace::full(dim),
    };
    Ok(TopWeightGenerators { basis, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::snc::fixtures::coordinate_simplex;

    #[test]
    fn punctured_line() {
        let (pair, coh) = coordinate_simplex(1).unwrap();
        let ss = weight_spectral_sequence(&pair, &coh).unwrap();
        assert_eq!(ss.d1(-1, 2).unwrap(), &Matrix::from_ints(1, 2, &[1, 1]).unwrap());
        let t = ss.weight_table();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1), ((1, 2), 1)]);
    }

    #[test]
    fn triangle_table() {
        let (pair, coh) = coordinate_simplex(2).unwrap();
        let t = weight_ss(&pair, &coh).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1), ((1, 2), 2), ((2, 4), 1)]);
        assert!(t.weights_in_range());
    }

    #[test]
    fn triangle_top_weight_generators() {
        let (pair, coh) = coordinate_simplex(2).unwrap();
        let g2 = top_weight_generators(&pair, &coh, 2).unwrap();
        assert_eq!(g2.basis.len(), 3);
        let expected = Subspace::span(3, [vec![int(1), int(-1), int(1)]]).unwrap();
        assert_eq!(g2.kernel, expected);
        let g1 = top_weight_generators(&pair, &coh, 1).unwrap();
        assert_eq!(g1.basis.len(), 3);
        assert_eq!(g1.kernel.dim(), 2);
    }

    #[test]
    fn smooth_divisor_has_no_level_two() {
        let nerve = Nerve::all_subsets(1, 1).unwrap();
        let pair = SncPair::new(nerve, false, vec![]).unwrap();
        let mut coh = StratumCohomology::new();
        coh.insert(Component::Ambient, ComponentCohomology { betti: vec![1, 0, 1, 0, 1], ..Default::default() });
        let mut d = ComponentCohomology { betti: vec![1, 0, 1], ..Default::default() };
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_ints(1, 1, &[1]).unwrap());
        maps.insert(2, Matrix::from_ints(1, 1, &[1]).unwrap());
        d.gysin.insert(Component::Ambient, maps);
        coh.insert(pair.nerve().resolve_component("1").unwrap(), d);
        let g = top_weight_generators(&pair, &coh, 2).unwrap();
        assert!(g.basis.is_empty());
        assert_eq!(g.kernel.dim(), 0);
        // a line in P^2: the complement is contractible
        let t = weight_ss(&pair, &coh).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1)]);
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let (pair, mut coh) = coordinate_simplex(2).unwrap();
        // flip one node -> line map so the alternating sum no longer cancels
        let node = pair.nerve().resolve_component("1,2").unwrap();
        let line = pair.nerve().resolve_component("1").unwrap();
        let mut data = coh.get(&node).unwrap().clone();
        data.gysin.get_mut(&line).unwrap().insert(0, Matrix::from_ints(1, 1, &[-1]).unwrap());
        coh.insert(node, data);
        assert_eq!(weight_ss(&pair, &coh), Err(Error::D1SquareNonzero { p: -2, q: 4 }));
    }

    #[test]
    fn shape_and_missing_data_errors() {
        let (pair, coh) = coordinate_simplex(2).unwrap();
        let line = pair.nerve().resolve_component("2").unwrap();
        let mut bad = coh.clone();
        let mut data = coh.get(&line).unwrap().clone();
        data.gysin.get_mut(&Component::Ambient).unwrap().insert(0, Matrix::zeros(2, 1));
        bad.insert(line.clone(), data);
        assert!(matches!(weight_ss(&pair, &bad), Err(Error::ShapeMismatch(_))));

        let mut missing = coh.clone();
        let mut data = coh.get(&line).unwrap().clone();
        data.gysin.clear();
        missing.insert(line, data);
        assert!(matches!(weight_ss(&pair, &missing), Err(Error::MissingData(_))));
    }

    #[test]
    fn bound_checks() {
        let (pair, coh) = coordinate_simplex(2).unwrap();
        let t = weight_ss(&pair, &coh).unwrap();
        let r = bound_report(&t, 2);
        assert!(r.holds);
        assert!(r.rows.iter().all(|&(_, d, b)| d as u64 == b));
        let artificial = WeightTable::from_entries([((0, 0), 1), ((1, 2), 3)]);
        assert!(!check_bound(&artificial, 2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(3, 2), 3);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(10, 5), 252);
    }
}
