//! Sparse exact-rational linear combinations and the word-level structure maps
//! (concatenation, shuffle, deshuffle, deconcatenation) shared by every Hopf
//! algebra in the crate.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError};
use crate::forest::{Forest, Tree};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::new(0, format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// A finite formal sum `Σ c_k k` over an ordered basis. Zero coefficients are
/// never stored, so structural equality is equality of vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Comb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

/// Element of the span of ordered forests.
pub type LinComb = Comb<Forest>;
/// Element of the span of forest pairs.
pub type TensorElem = Comb<(Forest, Forest)>;
/// Element of a tensor power with an arbitrary number of legs.
pub type MultiTensor = Comb<Vec<Forest>>;

impl<K: Ord> Default for Comb<K> {
    fn default() -> Self {
        Comb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Comb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Rational::one())
    }

    pub fn term(k: K, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Rational> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Rational> {
        self.terms.keys()
    }

    pub fn coeff(&self, k: &K) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, k: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Comb { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Linear extension of a map on basis elements.
    pub fn map_linear<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Comb<K2>) -> Comb<K2> {
        let mut out = Comb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Fallible linear extension.
    pub fn try_map_linear<K2: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<Comb<K2>, E>,
    ) -> Result<Comb<K2>, E> {
        let mut out = Comb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }

    /// Relabels basis elements; colliding keys are summed.
    pub fn map_basis<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> Comb<K2> {
        let mut out = Comb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Bilinear extension of a map on pairs of basis elements.
    pub fn bilinear<K2: Ord + Clone, K3: Ord + Clone>(
        &self,
        other: &Comb<K2>,
        mut f: impl FnMut(&K, &K2) -> Comb<K3>,
    ) -> Comb<K3> {
        let mut out = Comb::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_scaled(&f(a, b), &(ca * cb));
            }
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        Comb { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    /// Basis elements in order, with coefficients.
    pub fn terms(&self) -> Vec<(K, Rational)> {
        self.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for Comb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone> IntoIterator for Comb<K> {
    type Item = (K, Rational);
    type IntoIter = btree_map::IntoIter<K, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, K: Ord + Clone> IntoIterator for &'a Comb<K> {
    type Item = (&'a K, &'a Rational);
    type IntoIter = btree_map::Iter<'a, K, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Ord + Clone> AddAssign<&Comb<K>> for Comb<K> {
    fn add_assign(&mut self, rhs: &Comb<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<&Comb<K>> for Comb<K> {
    fn sub_assign(&mut self, rhs: &Comb<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }
}

impl<K: Ord + Clone> Add for &Comb<K> {
    type Output = Comb<K>;
    fn add(self, rhs: &Comb<K>) -> Comb<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Add for Comb<K> {
    type Output = Comb<K>;
    fn add(mut self, rhs: Comb<K>) -> Comb<K> {
        self += &rhs;
        self
    }
}

impl<K: Ord + Clone> Sub for &Comb<K> {
    type Output = Comb<K>;
    fn sub(self, rhs: &Comb<K>) -> Comb<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for Comb<K> {
    type Output = Comb<K>;
    fn sub(mut self, rhs: Comb<K>) -> Comb<K> {
        self -= &rhs;
        self
    }
}

impl<K: Ord + Clone> Neg for &Comb<K> {
    type Output = Comb<K>;
    fn neg(self) -> Comb<K> {
        Comb { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect() }
    }
}

impl<K: Ord + Clone> Neg for Comb<K> {
    type Output = Comb<K>;
    fn neg(self) -> Comb<K> {
        -&self
    }
}

impl<K: Ord + Clone> Mul<&Comb<K>> for &Rational {
    type Output = Comb<K>;
    fn mul(self, rhs: &Comb<K>) -> Comb<K> {
        rhs.scale(self)
    }
}

/// Writes a signed coefficient in front of a basis label, e.g. `- 1/2 [o]`.
pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (String, &'a Rational)>,
{
    let mut first = true;
    for (label, c) in terms {
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        let a = c.abs();
        if !a.is_one() {
            write!(f, "{a} ")?;
        }
        f.write_str(&label)?;
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(k, c)| (k.to_string(), c)))
    }
}

impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|((a, b), c)| (format!("{a}⊗{b}"), c)))
    }
}

impl fmt::Display for MultiTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(legs, c)| {
                let s: Vec<String> = legs.iter().map(ToString::to_string).collect();
                (s.join("⊗"), c)
            }),
        )
    }
}

impl<K: Ord + Clone> fmt::Debug for Comb<K>
where
    Comb<K>: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl LinComb {
    pub fn unit() -> Self {
        Self::basis(Forest::unit())
    }

    pub fn tree(t: &Tree) -> Self {
        Self::basis(Forest::from(t.clone()))
    }

    /// Coefficient of the unit.
    pub fn counit(&self) -> Rational {
        self.coeff(&Forest::unit())
    }

    /// The homogeneous component of degree `n`.
    pub fn part(&self, n: usize) -> Self {
        self.filter(|f| f.degree() == n)
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        self.filter(|f| f.degree() <= max_degree)
    }

    /// Drops the unit component.
    pub fn augmentation_part(&self) -> Self {
        self.filter(|f| !f.is_unit())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.keys().map(Forest::degree).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.keys().map(Forest::degree).min()
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.keys().map(Forest::degree).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl From<Forest> for LinComb {
    fn from(f: Forest) -> Self {
        LinComb::basis(f)
    }
}

impl From<Tree> for LinComb {
    fn from(t: Tree) -> Self {
        LinComb::basis(Forest::from(t))
    }
}

impl TensorElem {
    pub fn pair(a: &LinComb, b: &LinComb) -> Self {
        a.bilinear(b, |x, y| TensorElem::basis((x.clone(), y.clone())))
    }

    pub fn unit() -> Self {
        Self::basis((Forest::unit(), Forest::unit()))
    }

    pub fn to_multi(&self) -> MultiTensor {
        self.map_basis(|(a, b)| vec![a.clone(), b.clone()])
    }

    /// Swaps the two legs.
    pub fn flip(&self) -> Self {
        self.map_basis(|(a, b)| (b.clone(), a.clone()))
    }

    /// Drops terms with a unit on either leg.
    pub fn reduced(&self) -> Self {
        self.filter(|(a, b)| !a.is_unit() && !b.is_unit())
    }

    /// Applies linear maps to each leg.
    pub fn map_legs(
        &self,
        mut f: impl FnMut(&Forest) -> LinComb,
        mut g: impl FnMut(&Forest) -> LinComb,
    ) -> Self {
        self.map_linear(|(a, b)| TensorElem::pair(&f(a), &g(b)))
    }

    /// Multiplies the two legs together.
    pub fn contract(&self, mut m: impl FnMut(&Forest, &Forest) -> LinComb) -> LinComb {
        self.map_linear(|(a, b)| m(a, b))
    }
}

impl MultiTensor {
    pub fn from_legs(legs: &[LinComb]) -> Self {
        let mut out = MultiTensor::basis(Vec::new());
        for leg in legs {
            out = out.bilinear(leg, |w, f| {
                let mut w = w.clone();
                w.push(f.clone());
                MultiTensor::basis(w)
            });
        }
        out
    }

    /// Replaces leg `i` by the two legs of `f(leg_i)`.
    pub fn expand_leg(&self, i: usize, mut f: impl FnMut(&Forest) -> TensorElem) -> Self {
        self.map_linear(|legs| {
            f(&legs[i]).map_basis(|(a, b)| {
                let mut w = Vec::with_capacity(legs.len() + 1);
                w.extend_from_slice(&legs[..i]);
                w.push(a.clone());
                w.push(b.clone());
                w.extend_from_slice(&legs[i + 1..]);
                w
            })
        })
    }

    /// Applies a linear map to leg `i`.
    pub fn apply_leg(&self, i: usize, mut f: impl FnMut(&Forest) -> LinComb) -> Self {
        self.map_linear(|legs| {
            f(&legs[i]).map_basis(|x| {
                let mut w = legs.clone();
                w[i] = x.clone();
                w
            })
        })
    }

    /// Multiplies legs `i` and `i + 1` into one.
    pub fn merge_legs(&self, i: usize, mut m: impl FnMut(&Forest, &Forest) -> LinComb) -> Self {
        self.map_linear(|legs| {
            m(&legs[i], &legs[i + 1]).map_basis(|x| {
                let mut w = Vec::with_capacity(legs.len() - 1);
                w.extend_from_slice(&legs[..i]);
                w.push(x.clone());
                w.extend_from_slice(&legs[i + 2..]);
                w
            })
        })
    }
}

/// `Σ c_i e_i`.
pub fn combine(coeffs: &[Rational], elems: &[LinComb]) -> Result<LinComb, Error> {
    if coeffs.len() != elems.len() {
        return Err(Error::LengthMismatch(coeffs.len(), elems.len()));
    }
    let mut out = LinComb::zero();
    for (c, e) in coeffs.iter().zip(elems) {
        out.add_scaled(e, c);
    }
    Ok(out)
}

/// Bilinear word concatenation.
pub fn concat(a: &LinComb, b: &LinComb) -> LinComb {
    a.bilinear(b, |x, y| LinComb::basis(x.concat(y)))
}

/// All interleavings of two tree-words, with multiplicity.
pub fn shuffle_forests(a: &Forest, b: &Forest) -> LinComb {
    let (a, b) = (a.trees(), b.trees());
    let mut out = LinComb::zero();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    shuffle_rec(a, b, &mut buf, &mut out);
    out
}

fn shuffle_rec(a: &[Tree], b: &[Tree], buf: &mut Vec<Tree>, out: &mut LinComb) {
    if a.is_empty() || b.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        out.add_term(Forest::new(w), Rational::one());
        return;
    }
    buf.push(a[0].clone());
    shuffle_rec(&a[1..], b, buf, out);
    buf.pop();
    buf.push(b[0].clone());
    shuffle_rec(a, &b[1..], buf, out);
    buf.pop();
}

pub fn shuffle(a: &LinComb, b: &LinComb) -> LinComb {
    a.bilinear(b, shuffle_forests)
}

/// `Δ_⧢` on a forest: sum over subsets of positions.
pub fn deshuffle_forest(f: &Forest) -> TensorElem {
    let trees = f.trees();
    let n = trees.len();
    let mut out = TensorElem::zero();
    for mask in 0u64..(1u64 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, t) in trees.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left.push(t.clone());
            } else {
                right.push(t.clone());
            }
        }
        out.add_term((Forest::new(left), Forest::new(right)), Rational::one());
    }
    out
}

pub fn deshuffle(x: &LinComb) -> TensorElem {
    x.map_linear(deshuffle_forest)
}

/// Deconcatenation: split a word at every position.
pub fn deconcat_forest(f: &Forest) -> TensorElem {
    let trees = f.trees();
    (0..=trees.len())
        .map(|i| ((Forest::new(trees[..i].to_vec()), Forest::new(trees[i..].to_vec())), Rational::one()))
        .collect()
}

pub fn deconcat(x: &LinComb) -> TensorElem {
    x.map_linear(deconcat_forest)
}

/// The Kronecker pairing on any basis.
pub fn pairing<K: Ord + Clone>(x: &Comb<K>, y: &Comb<K>) -> Rational {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small
        .iter()
        .filter_map(|(k, c)| large.terms.get(k).map(|d| c * d))
        .fold(Rational::zero(), |acc, v| acc + v)
}

#[derive(Serialize, Deserialize)]
struct TermJson<F> {
    coeff: String,
    forest: F,
}

#[derive(Serialize, Deserialize)]
struct CombJson<F> {
    terms: Vec<TermJson<F>>,
}

impl Serialize for LinComb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CombJson {
            terms: self.terms.iter().map(|(f, c)| TermJson { coeff: c.to_string(), forest: f }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinComb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CombJson::<Forest>::deserialize(d)?;
        let mut out = LinComb::zero();
        for t in raw.terms {
            out.add_term(t.forest, parse_rational(&t.coeff).map_err(D::Error::custom)?);
        }
        Ok(out)
    }
}

impl Serialize for TensorElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CombJson {
            terms: self.terms.iter().map(|((a, b), c)| TermJson { coeff: c.to_string(), forest: [a, b] }).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d"]).unwrap()
    }

    fn lc(s: &str) -> LinComb {
        LinComb::basis(parse_forest(s, &ab()).unwrap())
    }

    #[test]
    fn combine_cleans_zeros() {
        let x = lc("[a]");
        assert!(combine(&[int(1), int(-1)], &[x.clone(), x.clone()]).unwrap().is_zero());
        assert_eq!(combine(&[frac(1, 2), frac(1, 2)], &[x.clone(), x.clone()]).unwrap(), x);
        assert_eq!(combine(&[int(2)], &[x.clone()]).unwrap().coeff(&parse_forest("[a]", &ab()).unwrap()), int(2));
        assert!(combine(&[int(1)], &[]).is_err());
    }

    #[test]
    fn concat_and_shuffle() {
        assert_eq!(concat(&lc("[a]"), &lc("[b]")), lc("[a][b]"));
        assert_eq!(concat(&LinComb::unit(), &lc("[a][b]")), lc("[a][b]"));
        assert_eq!(shuffle(&lc("[b]"), &lc("[d]")), lc("[b][d]") + lc("[d][b]"));
        assert_eq!(shuffle(&lc("[a][b]"), &lc("[c]")), lc("[a][b][c]") + lc("[a][c][b]") + lc("[c][a][b]"));
        assert_eq!(shuffle(&lc("[a]"), &lc("[a]")), lc("[a][a]").scale(&int(2)));
    }

    #[test]
    fn deshuffle_small() {
        let f = |s: &str| parse_forest(s, &ab()).unwrap();
        let d = deshuffle(&lc("[a][b]"));
        assert_eq!(d.len(), 4);
        assert_eq!(d.coeff(&(f("[b]"), f("[a]"))), int(1));
        assert_eq!(deshuffle(&LinComb::unit()), TensorElem::unit());
    }

    #[test]
    fn pairing_values() {
        assert_eq!(pairing(&lc("[a][b]"), &lc("[a][b]")), int(1));
        assert_eq!(pairing(&lc("[a][b]"), &lc("[b][a]")), int(0));
        let x = lc("[a]").scale(&int(2)) + lc("[b]").scale(&int(3));
        assert_eq!(pairing(&x, &lc("[b]")), int(3));
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("4").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn display_and_json() {
        let x = lc("[a]").scale(&frac(3, 2)) - lc("[b][a]");
        assert_eq!(x.to_string(), "3/2 [a] - [b][a]");
        let s = serde_json::to_string(&x).unwrap();
        let y: LinComb = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(s.contains(r#""coeff":"3/2""#));
    }
}
