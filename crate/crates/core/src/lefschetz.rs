//! Monodromy words of elliptic Lefschetz fibrations in `SL2(Z)`.
//!
//! The positive Dehn twist about the primitive cycle `sα + tβ` is
//! `R_{s,t} = [[1 - st, s^2], [-t^2, 1 + st]]`; `R_{s,t} = R_{-s,-t}`, and these
//! are exactly the `SL2(Z)` conjugates of `R_{1,0} = [[1,1],[0,1]]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl SL2Matrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if &a * &d - &b * &c != BigInt::one() {
            return Err(Error::PreconditionViolated(format!("[[{a},{b}],[{c},{d}]] does not have determinant 1")));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        SL2Matrix { a: BigInt::one(), b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// `self * x * self^{-1}`.
    pub fn conjugate(&self, x: &SL2Matrix) -> SL2Matrix {
        self.mul(x).mul(&self.inverse())
    }

    pub fn pow(&self, k: u32) -> SL2Matrix {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }
}

impl fmt::Debug for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn from_big(x: &BigInt) -> Self {
        x.to_i64().map_or_else(|| JsonInt::Big(x.to_string()), JsonInt::Small)
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(x) => Ok(BigInt::from(*x)),
            JsonInt::Big(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        }
    }
}

/// Serialized as `[[a, b], [c, d]]`; entries beyond 64 bits become strings.
impl Serialize for SL2Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [JsonInt::from_big(&self.a), JsonInt::from_big(&self.b)],
            [JsonInt::from_big(&self.c), JsonInt::from_big(&self.d)],
        ];
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SL2Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[JsonInt; 2]; 2]>::deserialize(deserializer)?;
        let conv = |x: &JsonInt| x.to_big().map_err(serde::de::Error::custom);
        SL2Matrix::new(conv(&a)?, conv(&b)?, conv(&c)?, conv(&d)?).map_err(serde::de::Error::custom)
    }
}

/// `R_{s,t}`.
pub fn twist_matrix(s: &BigInt, t: &BigInt) -> Result<SL2Matrix> {
    if !s.gcd(t).is_one() {
        return Err(Error::NotPrimitive { s: s.to_string(), t: t.to_string() });
    }
    let st = s * t;
    Ok(SL2Matrix { a: BigInt::one() - &st, b: s * s, c: -(t * t), d: BigInt::one() + &st })
}

pub fn twist(s: i64, t: i64) -> Result<SL2Matrix> {
    twist_matrix(&BigInt::from(s), &BigInt::from(t))
}

/// `(s, t)` with `m = R_{s,t}`, normalized so `t > 0`, or `t = 0` and `s > 0`.
pub fn twist_params(m: &SL2Matrix) -> Result<(BigInt, BigInt)> {
    let not_twist = || Error::NotAPositiveTwist(m.to_string());
    if m.trace() != BigInt::from(2) || m.is_identity() {
        return Err(not_twist());
    }
    // m - I = n [[-st, s^2], [-t^2, st]] with (s, t) primitive; positivity is n = 1
    let (s2, t2) = (m.b.clone(), -&m.c);
    if s2.is_negative() || t2.is_negative() {
        return Err(not_twist());
    }
    let (s, t) = (s2.sqrt(), t2.sqrt());
    if &s * &s != s2 || &t * &t != t2 || !s.gcd(&t).is_one() {
        return Err(not_twist());
    }
    // a - 1 = -st fixes the relative sign
    let st = BigInt::one() - &m.a;
    let (s, t) = if st.is_negative() { (-s, t) } else { (s, t) };
    if &s * &t != st {
        return Err(not_twist());
    }
    let (s, t) = if t.is_negative() || (t.is_zero() && s.is_negative()) { (-s, -t) } else { (s, t) };
    debug_assert_eq!(twist_matrix(&s, &t).as_ref(), Ok(m));
    Ok((s, t))
}

pub fn is_positive_twist(m: &SL2Matrix) -> bool {
    twist_params(m).is_ok()
}

/// `L = [[s, u], [t, v]]` with `det L = 1` and `m = L R_{1,0} L^{-1}`, choosing
/// `|u|` minimal and then `|v|` minimal.
pub fn conjugator(m: &SL2Matrix) -> Result<SL2Matrix> {
    let (s, t) = twist_params(m)?;
    // s v - t u = 1; all solutions are (u0 + k s, v0 + k t)
    let e = s.extended_gcd(&t);
    let g = e.gcd.clone();
    let (mut u0, mut v0) = (-e.y, e.x);
    if g.is_negative() {
        u0 = -u0;
        v0 = -v0;
    }
    let (u, v) = if s.is_zero() {
        // t = 1 and u = -1; v is free
        (BigInt::from(-1), BigInt::zero())
    } else {
        let k0 = (-&u0).div_floor(&s);
        let candidates = [k0.clone() - 1, k0.clone(), k0 + 1];
        candidates
            .iter()
            .map(|k| (&u0 + k * &s, &v0 + k * &t))
            .min_by(|x, y| (x.0.abs(), x.1.abs()).cmp(&(y.0.abs(), y.1.abs())))
            .expect("three candidates")
    };
    let l = SL2Matrix::new(s, u, t, v)?;
    if l.conjugate(&twist(1, 0)?) != *m {
        return Err(Error::NotAPositiveTwist(m.to_string()));
    }
    Ok(l)
}

/// An ordered word of positive Dehn twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TwistWord(Vec<SL2Matrix>);

impl TwistWord {
    pub fn new(letters: Vec<SL2Matrix>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|m| !is_positive_twist(m)) {
            return Err(Error::NotAPositiveTwist(bad.to_string()));
        }
        Ok(TwistWord(letters))
    }

    pub fn empty() -> Self {
        TwistWord(Vec::new())
    }

    pub fn from_params(params: &[(i64, i64)]) -> Result<Self> {
        Self::new(params.iter().map(|&(s, t)| twist(s, t)).collect::<Result<_>>()?)
    }

    pub fn letters(&self) -> &[SL2Matrix] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        TwistWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// `(s, t)` of every letter, normalized as in [`twist_params`].
    pub fn params(&self) -> Vec<(BigInt, BigInt)> {
        self.0.iter().map(|m| twist_params(m).expect("letters are positive twists")).collect()
    }
}

/// `T_1 T_2 ... T_m`.
pub fn total_monodromy(w: &TwistWord) -> SL2Matrix {
    w.0.iter().fold(SL2Matrix::identity(), |acc, m| acc.mul(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

/// Elementary braid move at letters `i, i + 1` (0-based):
/// right `(A, B) -> (A B A^{-1}, A)`, left `(A, B) -> (B, B^{-1} A B)`.
pub fn hurwitz_move(w: &TwistWord, i: usize, dir: Direction) -> Result<TwistWord> {
    if i + 1 >= w.len() {
        return Err(Error::PositionOutOfRange { pos: i, len: w.len() });
    }
    let (a, b) = (&w.0[i], &w.0[i + 1]);
    let (x, y) = match dir {
        Direction::Right => (a.conjugate(b), a.clone()),
        Direction::Left => (b.clone(), b.inverse().conjugate(a)),
    };
    let mut letters = w.0.clone();
    letters[i] = x;
    letters[i + 1] = y;
    TwistWord::new(letters)
}

/// `(R_{0,1}, R_{3,1}, R_{6,1}, R_{1,0}^8)`, whose product is `R_{1,0}^{-1}`.
pub fn template_word() -> TwistWord {
    let mut params = vec![(0, 1), (3, 1), (6, 1)];
    params.extend([(1, 0); 8]);
    TwistWord::from_params(&params).expect("primitive parameters")
}

/// Eleven positive twists with product `m^{-1}`: the template conjugated by
/// [`conjugator`]`(m)`. The product is re-verified before returning.
pub fn factor_inverse_twist(m: &SL2Matrix) -> Result<TwistWord> {
    let l = conjugator(m)?;
    let word = TwistWord::new(template_word().0.iter().map(|x| l.conjugate(x)).collect())?;
    if total_monodromy(&word) != m.inverse() {
        return Err(Error::NotAPositiveTwist(m.to_string()));
    }
    Ok(word)
}

/// `w` followed by the inverse factorizations of its letters in reverse order;
/// the result has product identity and length `12 |w|`.
pub fn complete_to_sphere(w: &TwistWord) -> Result<TwistWord> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut out = w.clone();
    for m in w.0.iter().rev() {
        out = out.concat(&factor_inverse_twist(m)?);
    }
    debug_assert!(total_monodromy(&out).is_identity());
    debug_assert_eq!(out.len() % 12, 0);
    Ok(out)
}

/// A letter as written in JSON: a 2x2 matrix or `{"s": .., "t": ..}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum LetterJson {
    Params { s: i64, t: i64 },
    Matrix(SL2Matrix),
}

pub fn parse_word(text: &str) -> Result<TwistWord> {
    let letters: Vec<LetterJson> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("twist word: {e}")))?;
    let letters = letters
        .into_iter()
        .map(|l| match l {
            LetterJson::Params { s, t } => twist(s, t),
            LetterJson::Matrix(m) => Ok(m),
        })
        .collect::<Result<Vec<_>>>()?;
    TwistWord::new(letters)
}
