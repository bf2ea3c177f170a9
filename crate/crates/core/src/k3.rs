//! Integral lattices, the K3 lattice, and the operator `N_{β,ρ}`.
//!
//! `Λ_K3 = E8(-1) ⊕ E8(-1) ⊕ U ⊕ U ⊕ U` with basis labels
//! `g1..g8, h1..h8, e1, f1, e2, f2, e3, f3`. Each `E8(-1)` block is the
//! negated Cartan matrix of the chain `1-2-3-4-5-6-7` with node 8 attached
//! to node 5; each `U` block is `[[0,1],[1,0]]` on `(e_i, f_i)`.
//!
//! For isotropic `β` and `ρ` with `⟨ρ,β⟩ = 0`, `⟨ρ,ρ⟩ > 0`,
//! `N_{β,ρ}(x) = ⟨x,β⟩ρ - ⟨x,ρ⟩β`, so `N^2(x) = -⟨x,β⟩⟨ρ,ρ⟩β` and `N^3 = 0`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::degen::Degeneration;
use crate::error::{Error, Result};
use crate::linalg::{image, int, kernel, Filtration, Matrix, Rational, Subspace};
use crate::snc::Nerve;

/// A lattice vector in coordinates of the labeled basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&x| int(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Nonzero with coprime coordinates.
    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearLattice {
    gram: Matrix,
    labels: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl BilinearLattice {
    pub fn new(gram: Matrix, labels: Vec<String>) -> Result<Self> {
        if !gram.is_square() || !gram.is_symmetric() {
            return Err(Error::ShapeMismatch("Gram matrix must be square and symmetric".into()));
        }
        if gram.entries().iter().any(|q| !q.is_integer()) {
            return Err(Error::PreconditionViolated("Gram matrix must have integer entries".into()));
        }
        if labels.len() != gram.rows() {
            return Err(Error::DimensionMismatch(format!("{} labels for rank {}", labels.len(), gram.rows())));
        }
        Ok(BilinearLattice { gram, labels })
    }

    /// Labels `x1..xn`.
    pub fn from_gram(gram: Matrix) -> Result<Self> {
        let labels = (1..=gram.rows()).map(|i| format!("x{i}")).collect();
        Self::new(gram, labels)
    }

    /// The hyperbolic plane on `(e, f)`.
    pub fn hyperbolic() -> Self {
        let gram = Matrix::from_ints(2, 2, &[0, 1, 1, 0]).expect("2x2");
        Self::new(gram, vec!["e".into(), "f".into()]).expect("valid")
    }

    /// `E8(-1)`, basis labels `prefix1..prefix8`.
    pub fn e8_negative(prefix: &str) -> Self {
        let mut m = Matrix::zeros(8, 8);
        for i in 0..8 {
            m.set(i, i, int(-2));
        }
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
        for (a, b) in edges {
            m.set(a, b, int(1));
            m.set(b, a, int(1));
        }
        Self::new(m, (1..=8).map(|i| format!("{prefix}{i}")).collect()).expect("valid")
    }

    /// `U` with basis labels `e{i}`, `f{i}`.
    pub fn hyperbolic_indexed(i: usize) -> Self {
        let u = Self::hyperbolic();
        Self::new(u.gram, vec![format!("e{i}"), format!("f{i}")]).expect("valid")
    }

    pub fn direct_sum(parts: &[BilinearLattice]) -> Result<Self> {
        let gram = Matrix::direct_sum(&parts.iter().map(|p| p.gram.clone()).collect::<Vec<_>>());
        let labels = parts.iter().flat_map(|p| p.labels.iter().cloned()).collect();
        Self::new(gram, labels)
    }

    /// `E8(-1)^2 ⊕ U^3`.
    pub fn k3() -> Self {
        Self::direct_sum(&[
            Self::e8_negative("g"),
            Self::e8_negative("h"),
            Self::hyperbolic_indexed(1),
            Self::hyperbolic_indexed(2),
            Self::hyperbolic_indexed(3),
        ])
        .expect("valid")
    }

    /// `U^m` with labels `e1, f1, ..., em, fm`.
    pub fn hyperbolic_sum(m: usize) -> Self {
        Self::direct_sum(&(1..=m).map(Self::hyperbolic_indexed).collect::<Vec<_>>()).expect("valid")
    }

    /// Lattices by name: `K3`, `U`, `U2`, `U3`, `E8-`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "K3" => Ok(Self::k3()),
            "U" => Ok(Self::hyperbolic()),
            "E8-" => Ok(Self::e8_negative("g")),
            _ => match name.strip_prefix('U').and_then(|m| m.parse::<usize>().ok()) {
                Some(m) if m >= 1 => Ok(Self::hyperbolic_sum(m)),
                _ => Err(Error::Parse(format!("unknown lattice {name:?}"))),
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_vector(&self, label: &str) -> Option<LatticeVector> {
        let i = self.labels.iter().position(|l| l == label)?;
        Some(LatticeVector((0..self.rank()).map(|j| i64::from(i == j)).collect()))
    }

    pub fn pair(&self, x: &LatticeVector, y: &LatticeVector) -> Result<Rational> {
        self.check_len(x)?;
        self.check_len(y)?;
        let gy = self.gram.mul_vec(&y.to_rational())?;
        Ok(x.0.iter().zip(&gy).map(|(&a, b)| b * int(a)).sum())
    }

    fn check_len(&self, x: &LatticeVector) -> Result<()> {
        if x.0.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!("vector of length {} in a lattice of rank {}", x.0.len(), self.rank())));
        }
        Ok(())
    }

    pub fn determinant(&self) -> Rational {
        self.gram.determinant().expect("square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).to_integer().is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs() == int(1)
    }

    /// Inertia by symmetric Gaussian elimination over `Q`.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a = self.gram.to_rows();
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            if a[i][i].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                    swap_sym(&mut a, i, j);
                } else if let Some((j, k)) =
                    (i..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).find(|&(j, k)| !a[j][k].is_zero())
                {
                    // x_j -> x_j + x_k makes the diagonal entry 2 a_jk
                    for r in 0..n {
                        let v = a[k][r].clone();
                        a[j][r] += v;
                    }
                    for r in 0..n {
                        let v = a[r][k].clone();
                        a[r][j] += v;
                    }
                    swap_sym(&mut a, i, j);
                } else {
                    diag.extend(std::iter::repeat_n(int(0), n - i));
                    break;
                }
            }
            let p = a[i][i].clone();
            for r in i + 1..n {
                if a[r][i].is_zero() {
                    continue;
                }
                let f = &a[r][i] / &p;
                for c in i..n {
                    let v = &f * &a[i][c];
                    a[r][c] -= v;
                }
                for c in i..n {
                    let v = &f * &a[c][i];
                    a[c][r] -= v;
                }
            }
            diag.push(p);
        }
        Signature {
            positive: diag.iter().filter(|d| d.is_positive()).count(),
            negative: diag.iter().filter(|d| d.is_negative()).count(),
            zero: diag.iter().filter(|d| d.is_zero()).count(),
        }
    }

    /// Parses `"e2+f2"`, `"2e1-3f2"`, `"-g1 + 2*h3"` or a JSON integer array.
    pub fn parse_vector(&self, expr: &str) -> Result<LatticeVector> {
        let expr = expr.trim();
        if expr.starts_with('[') {
            let v: Vec<i64> =
                serde_json::from_str(expr).map_err(|e| Error::Parse(format!("vector {expr:?}: {e}")))?;
            let v = LatticeVector(v);
            self.check_len(&v)?;
            return Ok(v);
        }
        let mut coords = vec![0i64; self.rank()];
        let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty vector expression".into()));
        }
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if rest.len() == compact.len() => (1, rest),
                _ => return Err(Error::Parse(format!("expected + or - in {expr:?}"))),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
            let coeff: i64 = if digits == 0 {
                1
            } else {
                term[..digits].parse().map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            let label = term[digits..].trim_start_matches('*');
            let i = self
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Parse(format!("unknown basis label {label:?} in {expr:?}")))?;
            coords[i] += sign * coeff;
        }
        Ok(LatticeVector(coords))
    }

    /// Vector in labeled form, e.g. `"e2+f2"`.
    pub fn format_vector(&self, v: &LatticeVector) -> String {
        let mut out = String::new();
        for (x, l) in v.0.iter().zip(&self.labels) {
            match *x {
                0 => continue,
                1 if out.is_empty() => out.push_str(l),
                1 => out.push_str(&format!("+{l}")),
                -1 => out.push_str(&format!("-{l}")),
                c if c > 0 && !out.is_empty() => out.push_str(&format!("+{c}{l}")),
                c => out.push_str(&format!("{c}{l}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn swap_sym(a: &mut [Vec<Rational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Checks `⟨β,β⟩ = 0`, `β ≠ 0`, `⟨ρ,β⟩ = 0`, `⟨ρ,ρ⟩ > 0`.
pub fn check_beta_rho(l: &BilinearLattice, beta: &LatticeVector, rho: &LatticeVector) -> Result<()> {
    if beta.is_zero() {
        return Err(Error::PreconditionViolated("β must be nonzero".into()));
    }
    let bb = l.pair(beta, beta)?;
    if !bb.is_zero() {
        return Err(Error::PreconditionViolated(format!("⟨β,β⟩ = {bb}, expected 0")));
    }
    let rb = l.pair(rho, beta)?;
    if !rb.is_zero() {
        return Err(Error::PreconditionViolated(format!("⟨ρ,β⟩ = {rb}, expected 0")));
    }
    let rr = l.pair(rho, rho)?;
    if !rr.is_positive() {
        return Err(Error::PreconditionViolated(format!("⟨ρ,ρ⟩ = {rr}, expected > 0")));
    }
    Ok(())
}

/// Matrix of `x ↦ ⟨x,β⟩ρ - ⟨x,ρ⟩β`, i.e. `ρ β^T G - β ρ^T G`.
pub fn n_beta_rho(l: &BilinearLattice, beta: &LatticeVector, rho: &LatticeVector) -> Result<Matrix> {
    check_beta_rho(l, beta, rho)?;
    let g = l.gram();
    let gb = g.mul_vec(&beta.to_rational())?;
    let gr = g.mul_vec(&rho.to_rational())?;
    let (b, r) = (beta.to_rational(), rho.to_rational());
    Ok(Matrix::from_fn(l.rank(), l.rank(), |i, j| &r[i] * &gb[j] - &b[i] * &gr[j]))
}

/// `M'_0 = M'_1 = im N^2`, `M'_2 = M'_3 = ker N^2`, `M'_4` everything.
pub fn mprime_filtration(l: &BilinearLattice, beta: &LatticeVector, rho: &LatticeVector) -> Result<Filtration> {
    let n = n_beta_rho(l, beta, rho)?;
    let n2 = n.pow(2)?;
    Filtration::from_steps(l.rank(), [(0, image(&n2)), (2, kernel(&n2)), (4, Subspace::full(l.rank()))])
}

fn shell(bound: i64, len: usize, remaining: i64, prefix: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if prefix.len() == len {
        return remaining == 0 && visit(prefix);
    }
    let slots = (len - prefix.len() - 1) as i64;
    let top = remaining.min(bound);
    for x in (-top..=top).rev() {
        let left = remaining - x.abs();
        if left > slots * bound {
            continue;
        }
        prefix.push(x);
        let stop = shell(bound, len, left, prefix, visit);
        prefix.pop();
        if stop {
            return true;
        }
    }
    false
}

/// First primitive `β` with `⟨β,β⟩ = 0`, `⟨β,α⟩ = 0` and all `|β_i| <= bound`.
///
/// Candidates are enumerated by increasing `Σ|β_i|`, and within a shell in
/// decreasing lexicographic order of coordinates.
pub fn find_isotropic_orthogonal(l: &BilinearLattice, alpha: &LatticeVector, bound: u32) -> Result<Option<LatticeVector>> {
    let aa = l.pair(alpha, alpha)?;
    if !aa.is_positive() {
        return Err(Error::PreconditionViolated(format!("⟨α,α⟩ = {aa}, expected > 0")));
    }
    let n = l.rank();
    let bound = i64::from(bound);
    let g = l.gram();
    let ga: Vec<Rational> = g.mul_vec(&alpha.to_rational())?;
    let mut found = None;
    for s in 1..=(n as i64 * bound) {
        let mut visit = |v: &[i64]| {
            let lv = LatticeVector(v.to_vec());
            let orth: Rational = v.iter().zip(&ga).map(|(&x, a)| a * int(x)).sum();
            if !orth.is_zero() || !lv.is_primitive() {
                return false;
            }
            if l.pair(&lv, &lv).expect("length checked").is_zero() {
                found = Some(lv);
                return true;
            }
            false
        };
        if shell(bound, n, s, &mut Vec::with_capacity(n), &mut visit) {
            break;
        }
    }
    Ok(found)
}

/// Perverse filtration of an elliptic K3 with fiber class `β` against `M'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K3PwReport {
    pub holds: bool,
    /// `P_0`, `P_1`, `P_2`.
    pub perverse: Vec<Subspace>,
    pub mprime: Filtration,
    /// `P_0^⊥ = P_1`.
    pub perverse_self_dual: bool,
}

/// `P_0 = span β`, `P_1 = β^⊥`, `P_2` everything.
pub fn perverse_filtration_k3(l: &BilinearLattice, beta: &LatticeVector) -> Result<Filtration> {
    let p0 = Subspace::span(l.rank(), [beta.to_rational()])?;
    let p1 = p0.ortho_complement(l.gram(), true)?;
    Filtration::from_steps(l.rank(), [(0, p0), (1, p1), (2, Subspace::full(l.rank()))])
}

pub fn k3_pw_report(l: &BilinearLattice, beta: &LatticeVector, rho: &LatticeVector) -> Result<K3PwReport> {
    let mprime = mprime_filtration(l, beta, rho)?;
    let p = perverse_filtration_k3(l, beta)?;
    let perverse: Vec<Subspace> = (0..3).map(|i| p.get(i).clone()).collect();
    let holds = perverse.iter().enumerate().all(|(i, p)| p == mprime.get(2 * i as i64));
    let perverse_self_dual = perverse[0].ortho_complement(l.gram(), true)? == perverse[1];
    Ok(K3PwReport { holds, perverse, mprime, perverse_self_dual })
}

/// `P_i H^2 = M'_{2i} H^2` for `i = 0, 1, 2`.
pub fn k3_pw_check(l: &BilinearLattice, beta: &LatticeVector, rho: &LatticeVector) -> Result<bool> {
    Ok(k3_pw_report(l, beta, rho)?.holds)
}

/// Type III degeneration of K3 surfaces with limit monodromy `N_{β,ρ}` on `H^2`.
///
/// The central fiber's dual complex is the boundary of a tetrahedron, so the
/// profound torus is `T^2`; the restriction `H^2(X_1) -> H^2(T^2) = Q` is
/// `x ↦ ⟨x,β⟩`. Degrees 0 and 4 carry the zero operator on `Q`.
pub fn type_iii_degeneration(beta: &LatticeVector, rho: &LatticeVector) -> Result<Degeneration> {
    let l = BilinearLattice::k3();
    let n = n_beta_rho(&l, beta, rho)?;
    type_iii_with_log(&l, beta, n)
}

/// As [`type_iii_degeneration`] with an arbitrary operator on `H^2`.
pub fn type_iii_with_log(l: &BilinearLattice, beta: &LatticeVector, n: Matrix) -> Result<Degeneration> {
    let gb = l.gram().mul_vec(&beta.to_rational())?;
    let restriction = Matrix::from_rows(vec![gb])?;
    let logs = BTreeMap::from([(0, Matrix::zeros(1, 1)), (2, n), (4, Matrix::zeros(1, 1))]);
    let pairings = BTreeMap::from([(0, Matrix::identity(1)), (2, l.gram().clone())]);
    Degeneration::new(Nerve::all_subsets(4, 3)?, 2, logs, pairings, BTreeMap::from([(2, restriction)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mwf::{weight_filtration, NilpotentEndo};

    fn k3() -> BilinearLattice {
        BilinearLattice::k3()
    }

    fn v(l: &BilinearLattice, s: &str) -> LatticeVector {
        l.parse_vector(s).unwrap()
    }

    #[test]
    fn k3_invariants() {
        let l = k3();
        assert_eq!(l.rank(), 22);
        assert_eq!(l.determinant(), int(-1));
        assert!(l.is_even() && l.is_unimodular());
        assert_eq!(l.signature(), Signature { positive: 3, negative: 19, zero: 0 });
        assert_eq!(BilinearLattice::e8_negative("g").determinant(), int(1));
    }

    #[test]
    fn parses_and_formats_vectors() {
        let l = k3();
        let x = v(&l, "2e1 - 3f2 + g1");
        assert_eq!(l.format_vector(&x), "g1+2e1-3f2");
        assert_eq!(v(&l, "-e3"), LatticeVector({
            let mut c = vec![0; 22];
            c[20] = -1;
            c
        }));
        assert!(l.parse_vector("e4").is_err());
        assert!(l.parse_vector("").is_err());
        assert!(l.parse_vector("[1,2]").is_err());
    }

    #[test]
    fn n_beta_rho_basic_values() {
        let l = k3();
        let (beta, rho) = (v(&l, "e1"), v(&l, "e2+f2"));
        let n = n_beta_rho(&l, &beta, &rho).unwrap();
        assert!(n.mul_vec(&beta.to_rational()).unwrap().iter().all(Zero::is_zero));
        let expected: Vec<Rational> = beta.to_rational().iter().map(|b| b * int(-2)).collect();
        assert_eq!(n.mul_vec(&rho.to_rational()).unwrap(), expected);
        assert!(n.pow(3).unwrap().is_zero());
    }

    #[test]
    fn mprime_matches_weight_filtration() {
        let l = k3();
        let (beta, rho) = (v(&l, "e1"), v(&l, "e2+f2"));
        let m = mprime_filtration(&l, &beta, &rho).unwrap();
        assert_eq!(m.graded_dims_between(0, 4), vec![1, 0, 20, 0, 1]);
        let n = NilpotentEndo::new(n_beta_rho(&l, &beta, &rho).unwrap(), 2).unwrap();
        assert_eq!(weight_filtration(&n), m);
        let report = k3_pw_report(&l, &beta, &rho).unwrap();
        assert!(report.holds && report.perverse_self_dual);
    }

    #[test]
    fn preconditions() {
        let l = k3();
        let beta = v(&l, "e1");
        for bad in ["f1", "e2-f2", "e2"] {
            let r = n_beta_rho(&l, &beta, &v(&l, bad));
            assert!(matches!(r, Err(Error::PreconditionViolated(_))), "{bad}");
        }
        assert!(n_beta_rho(&l, &v(&l, "e1+f1"), &v(&l, "e2+f2")).is_err());
    }

    #[test]
    fn isotropic_search() {
        let u2 = BilinearLattice::hyperbolic_sum(2);
        let alpha = v(&u2, "e1+f1");
        assert_eq!(find_isotropic_orthogonal(&u2, &alpha, 1).unwrap(), Some(v(&u2, "e2")));
        let u = BilinearLattice::named("U1").unwrap();
        assert_eq!(find_isotropic_orthogonal(&u, &v(&u, "e1+f1"), 3).unwrap(), None);
        let pos = BilinearLattice::from_gram(Matrix::from_ints(1, 1, &[2]).unwrap()).unwrap();
        assert_eq!(find_isotropic_orthogonal(&pos, &LatticeVector(vec![1]), 5).unwrap(), None);
        let alpha = v(&k3(), "e3+f3");
        let beta = find_isotropic_orthogonal(&k3(), &alpha, 1).unwrap().unwrap();
        assert_eq!(k3().pair(&beta, &beta).unwrap(), int(0));
    }

    #[test]
    fn type_iii_model() {
        let l = k3();
        let deg = type_iii_degeneration(&v(&l, "e1"), &v(&l, "e2+f2")).unwrap();
        assert!(crate::degen::duality_check(&deg, 2).unwrap());
        assert!(crate::degen::verify_maincy(&deg, 2).unwrap());
        assert_eq!(deg.delta(), 2);
    }
}
