#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use profound::degen::DegenerationFixture;
use profound::k3::{self, BilinearLattice, LatticeVector};
use profound::lefschetz::{twist, SL2Matrix, TwistWord};
use profound::linalg::{int, Filtration, Matrix, Rational};
use profound::pw::{self, PwFixture};
use profound::snc::{self, SncFixture};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

pub fn read_fixture<T: for<'de> serde::Deserialize<'de>>(name: &str) -> T {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Gram matrix of E8(-1)^2 + U^3 written out entry by entry.
pub fn k3_gram_oracle() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; 22]; 22];
    for block in 0..2 {
        let o = 8 * block;
        for i in 0..8 {
            g[o + i][o + i] = -2;
        }
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
            g[o + a][o + b] = 1;
            g[o + b][o + a] = 1;
        }
    }
    for u in 0..3 {
        let o = 16 + 2 * u;
        g[o][o + 1] = 1;
        g[o + 1][o] = 1;
    }
    g
}

pub fn pair_oracle(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    (0..x.len()).map(|i| (0..y.len()).map(|j| x[i] * g[i][j] * y[j]).sum::<i64>()).sum()
}

pub fn k3() -> BilinearLattice {
    BilinearLattice::k3()
}

pub fn vector(expr: &str) -> LatticeVector {
    k3().parse_vector(expr).unwrap()
}

/// A random ρ on the K3 lattice with `⟨ρ,e1⟩ = 0` and `⟨ρ,ρ⟩ > 0`.
pub fn random_rho(r: &mut impl Rng) -> LatticeVector {
    let g = k3_gram_oracle();
    let f1 = 17;
    loop {
        let mut c = vec![0i64; 22];
        for (i, x) in c.iter_mut().enumerate() {
            if i != f1 && r.gen_bool(0.3) {
                *x = r.gen_range(-2..=2);
            }
        }
        c[18] = r.gen_range(1..=4);
        c[19] = r.gen_range(1..=4);
        if pair_oracle(&g, &c, &c) > 0 {
            return LatticeVector(c);
        }
    }
}

pub fn random_int_vector(r: &mut impl Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(-bound..=bound)).collect()
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// A random invertible integer matrix: a product of elementary row operations.
pub fn random_unimodular(r: &mut impl Rng, n: usize) -> Matrix {
    let mut p = Matrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..3 * n {
        let i = r.gen_range(0..n);
        let j = (i + r.gen_range(1..n)) % n;
        let c = r.gen_range(-2..=2);
        let mut e = Matrix::identity(n);
        e.set(i, j, int(c));
        p = e.checked_mul(&p).unwrap();
    }
    p
}

/// A random nilpotent matrix of size `n`: a sparse strictly upper triangular
/// matrix conjugated by a random unimodular one.
pub fn random_nilpotent(r: &mut impl Rng, n: usize) -> Matrix {
    let density = r.gen_range(0.2..0.9);
    let u = Matrix::from_fn(n, n, |i, j| if j > i && r.gen_bool(density) { int(r.gen_range(-3..=3)) } else { int(0) });
    let p = random_unimodular(r, n);
    let inv = p.inverse().unwrap().unwrap();
    p.checked_mul(&u).unwrap().checked_mul(&inv).unwrap()
}

/// Random element of SL2(Z) with entries bounded by `bound`.
pub fn random_sl2(r: &mut impl Rng, bound: i64) -> SL2Matrix {
    loop {
        let [a, b, c, d] = [0; 4].map(|_: i32| r.gen_range(-bound..=bound));
        if a * d - b * c == 1 {
            return SL2Matrix::from_i64(a, b, c, d).unwrap();
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn random_twist(r: &mut impl Rng, bound: i64) -> SL2Matrix {
    loop {
        let (s, t) = (r.gen_range(-bound..=bound), r.gen_range(-bound..=bound));
        if gcd(s, t) == 1 {
            return twist(s, t).unwrap();
        }
    }
}

pub fn random_word(r: &mut impl Rng, len: usize) -> TwistWord {
    TwistWord::new((0..len).map(|_| random_twist(r, 5)).collect()).unwrap()
}

pub fn sl2_oracle_product(letters: &[[i64; 4]]) -> [i64; 4] {
    letters.iter().fold([1, 0, 0, 1], |[a, b, c, d], &[e, f, g, h]| {
        [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]
    })
}

pub fn r_oracle(s: i64, t: i64) -> [i64; 4] {
    [1 - s * t, s * s, -t * t, 1 + s * t]
}

pub fn binomial(n: usize, k: usize) -> usize {
    // Pascal's triangle
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

// fixture builders

pub fn jordan3() -> Matrix {
    Matrix::from_ints(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]).unwrap()
}

pub fn simplex_fixture(d: usize) -> SncFixture {
    let (pair, coh) = snc::coordinate_simplex(d).unwrap();
    SncFixture::from_parts(&pair, Some(&coh))
}

/// `Gβ`, the homology class dual to `β`.
pub fn dual_of_beta(beta: &LatticeVector) -> Matrix {
    let gb = k3().gram().mul_vec(&beta.to_rational()).unwrap();
    Matrix::from_columns(22, &[gb]).unwrap()
}

pub fn k3_degeneration_fixture() -> DegenerationFixture {
    let (beta, rho) = (vector("e1"), vector("e2+f2"));
    let deg = k3::type_iii_degeneration(&beta, &rho).unwrap();
    DegenerationFixture::from_degeneration(&deg, &BTreeMap::from([(2, dual_of_beta(&beta))])).unwrap()
}

/// Same data with the monodromy on `H^2` replaced by zero.
pub fn k3_degeneration_n0_fixture() -> DegenerationFixture {
    let beta = vector("e1");
    let deg = k3::type_iii_with_log(&k3(), &beta, Matrix::zeros(22, 22)).unwrap();
    DegenerationFixture::from_degeneration(&deg, &BTreeMap::from([(2, dual_of_beta(&beta))])).unwrap()
}

/// W from the weight spectral sequence of the triangle, in its weight-adapted basis.
pub fn triangle_weight() -> BTreeMap<usize, Filtration> {
    let (pair, coh) = snc::coordinate_simplex(2).unwrap();
    let table = snc::weight_ss(&pair, &coh).unwrap();
    (0..=2).map(|k| (k, table.adapted_filtration(k as i64))).collect()
}

pub fn torus_surface_fixture() -> PwFixture {
    PwFixture::from_data(&pw::torus_surface(), &triangle_weight())
}

pub fn word_fixture() -> serde_json::Value {
    serde_json::json!([{"s": 1, "t": 0}, {"s": 0, "t": 1}, {"s": 3, "t": 1}])
}

/// Every fixture file with the value it must contain.
pub fn all_fixtures() -> Vec<(&'static str, serde_json::Value)> {
    let v = |x: &dyn erased::Ser| x.value();
    vec![
        ("jordan3.json", v(&jordan3())),
        ("p1_two_points.json", v(&simplex_fixture(1))),
        ("p2_triangle.json", v(&simplex_fixture(2))),
        ("p3_tetrahedron.json", v(&simplex_fixture(3))),
        ("k3_type_iii.json", v(&k3_degeneration_fixture())),
        ("k3_type_iii_n0.json", v(&k3_degeneration_n0_fixture())),
        ("torus_surface.json", v(&torus_surface_fixture())),
        ("word.json", word_fixture()),
    ]
}

mod erased {
    pub trait Ser {
        fn value(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> Ser for T {
        fn value(&self) -> serde_json::Value {
            serde_json::to_value(self).unwrap()
        }
    }
}

/// Every filtration that differs from `m` in exactly one step and is still
/// nested: a step pulled down or pushed up to a neighbour, or tilted inside
/// the gap between its neighbours.
pub fn single_step_perturbations(m: &Filtration) -> Vec<Filtration> {
    let n = m.ambient_dim();
    let (Some(lo), Some(hi)) = (m.lowest(), m.highest()) else {
        return Vec::new();
    };
    let range = (lo - 1)..=(hi + 1);
    let rebuild = |j: i64, s: &profound::linalg::Subspace| {
        let steps = range.clone().map(|i| (i, if i == j { s.clone() } else { m.get(i).clone() }));
        Filtration::from_steps(n, steps).unwrap()
    };
    let mut out = Vec::new();
    for j in range.clone() {
        let (below, here, above) = (m.get(j - 1), m.get(j), m.get(j + 1));
        for s in [below, above] {
            if s != here {
                out.push(rebuild(j, s));
            }
        }
        // tilt one new basis vector of M_j towards M_{j+1}
        if below != here && here != above {
            let u = here.basis().iter().find(|v| !below.contains(v).unwrap()).unwrap();
            let w = above.basis().iter().find(|v| !here.contains(v).unwrap()).unwrap();
            let tilted: Vec<Rational> = u.iter().zip(w).map(|(a, b)| a + b).collect();
            let mut gens: Vec<Vec<Rational>> = below.basis().to_vec();
            gens.extend(here.basis().iter().filter(|v| *v != u).cloned());
            gens.push(tilted);
            let s = profound::linalg::Subspace::span(n, gens).unwrap();
            if s.dim() == here.dim() && &s != here {
                out.push(rebuild(j, &s));
            }
        }
    }
    out
}
