//! The Hopf isomorphism `φ` from the Grossman–Larson algebra onto the tensor
//! algebra over planar trees, truncated characters with Chen composition,
//! canonical lifts, Π-degrees and the geometric embedding of characters.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forest::{enumerate_forests, enumerate_forests_up_to, enumerate_trees, Alphabet, Decoration, Forest, Tree};
use crate::linalg::Matrix;
use crate::lincomb::{concat, deconcat_forest, shuffle_forests, LinComb, Rational, TensorElem};
use crate::mkw::{mkw_antipode_forest, mkw_coproduct_forest};
use crate::postlie::{concat_antipode_forest, gl_product, graft_forests};

static PHI: LazyLock<RwLock<HashMap<Forest, LinComb>>> = LazyLock::new(|| RwLock::new(HashMap::new()));
static PHI_INV: LazyLock<RwLock<HashMap<Forest, LinComb>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn memo(cache: &RwLock<HashMap<Forest, LinComb>>, f: &Forest, compute: impl FnOnce() -> LinComb) -> LinComb {
    if let Some(v) = cache.read().expect("cache poisoned").get(f) {
        return v.clone();
    }
    let v = compute();
    cache.write().expect("cache poisoned").insert(f.clone(), v.clone());
    v
}

/// `φ` on a basis forest: `φ(τ) = τ` and `φ(τ1 ω) = τ1 · φ(ω) − φ(τ1 ⊲ ω)`.
pub fn phi_forest(f: &Forest) -> LinComb {
    if f.len() <= 1 {
        return LinComb::basis(f.clone());
    }
    memo(&PHI, f, || {
        let (head, tail) = f.trees().split_first().expect("at least two trees");
        let head = Forest::from(head.clone());
        let tail = Forest::new(tail.to_vec());
        let left = concat(&LinComb::basis(head.clone()), &phi_forest(&tail));
        left - graft_forests(&head, &tail).map_linear(phi_forest)
    })
}

pub fn phi(x: &LinComb) -> LinComb {
    x.map_linear(phi_forest)
}

/// `φ^{-1}(τ1 ω) = τ1 ∗ φ^{-1}(ω)`.
pub fn phi_inverse_forest(f: &Forest) -> LinComb {
    if f.len() <= 1 {
        return LinComb::basis(f.clone());
    }
    memo(&PHI_INV, f, || {
        let (head, tail) = f.trees().split_first().expect("at least two trees");
        let head = LinComb::basis(Forest::from(head.clone()));
        gl_product(&head, &phi_inverse_forest(&Forest::new(tail.to_vec())))
    })
}

pub fn phi_inverse(x: &LinComb) -> LinComb {
    x.map_linear(phi_inverse_forest)
}

/// Forests of degree `n`, ordered by number of trees and then canonically.
pub fn tree_count_order(n: usize, alphabet: &Alphabet) -> Vec<Forest> {
    let mut b = enumerate_forests(n, alphabet);
    b.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    b
}

/// The matrix of `φ` on the degree-`n` piece in tree-count order, with its basis.
pub fn phi_matrix(n: usize, alphabet: &Alphabet) -> (Matrix, Vec<Forest>) {
    let basis = tree_count_order(n, alphabet);
    let cols: Vec<LinComb> = basis.iter().map(phi_forest).collect();
    let (m, _) = Matrix::from_columns(&cols, Some(&basis));
    (m, basis)
}

/// `φ^{-1}` by inverting the graded matrices of `φ`; an independent check of
/// [`phi_inverse`].
pub fn phi_inverse_by_matrix(x: &LinComb, alphabet: &Alphabet) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for n in x.degrees() {
        let (m, basis) = phi_matrix(n, alphabet);
        let inv = m.inverse().ok_or(Error::Singular(n))?;
        let part = x.part(n);
        for (j, b) in basis.iter().enumerate() {
            let c = part.coeff(b);
            if c.is_zero() {
                continue;
            }
            for (i, r) in basis.iter().enumerate() {
                out.add_term(r.clone(), &inv[(i, j)] * &c);
            }
        }
    }
    Ok(out)
}

/// `exp_∗(x) = Σ_k x^{∗k}/k!`, truncated at degree `max_degree`; `x` must have
/// no unit component.
pub fn gl_exp(x: &LinComb, max_degree: usize) -> LinComb {
    let x = x.augmentation_part().truncate(max_degree);
    let mut out = LinComb::unit();
    let mut power = LinComb::unit();
    let mut fact = BigInt::one();
    for k in 1..=max_degree {
        power = gl_product(&power, &x).truncate(max_degree);
        if power.is_zero() {
            break;
        }
        fact *= k;
        out.add_scaled(&power, &Rational::new(BigInt::one(), fact.clone()));
    }
    out
}

/// `exp_·(x)` for the concatenation product, truncated.
pub fn concat_exp(x: &LinComb, max_degree: usize) -> LinComb {
    let x = x.augmentation_part().truncate(max_degree);
    let mut out = LinComb::unit();
    let mut power = LinComb::unit();
    let mut fact = BigInt::one();
    for k in 1..=max_degree {
        power = concat(&power, &x).truncate(max_degree);
        if power.is_zero() {
            break;
        }
        fact *= k;
        out.add_scaled(&power, &Rational::new(BigInt::one(), fact.clone()));
    }
    out
}

/// Which Hopf algebra a truncated character lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Characters of `(OF, ⧢, Δ_MKW)`.
    Mkw,
    /// Characters of the shuffle algebra over trees, with deconcatenation.
    Tensor,
}

impl Flavor {
    fn coproduct(self, f: &Forest) -> TensorElem {
        match self {
            Flavor::Mkw => mkw_coproduct_forest(f),
            Flavor::Tensor => deconcat_forest(f),
        }
    }

    fn antipode(self, f: &Forest) -> LinComb {
        match self {
            Flavor::Mkw => mkw_antipode_forest(f),
            Flavor::Tensor => concat_antipode_forest(f),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Mkw => "mkw",
            Flavor::Tensor => "tensor",
        })
    }
}

/// A linear functional on forests of degree `≤ n`, stored by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncChar {
    pub n: usize,
    pub flavor: Flavor,
    pub alphabet: Alphabet,
    values: BTreeMap<Forest, Rational>,
}

impl TruncChar {
    /// The counit.
    pub fn epsilon(n: usize, flavor: Flavor, alphabet: &Alphabet) -> Self {
        Self::from_series(&LinComb::unit(), n, flavor, alphabet)
    }

    /// The functional `f ↦ ⟨series, f⟩`.
    pub fn from_series(series: &LinComb, n: usize, flavor: Flavor, alphabet: &Alphabet) -> Self {
        let values = series.truncate(n).into_iter().collect();
        TruncChar { n, flavor, alphabet: alphabet.clone(), values }
    }

    /// The representing series `Σ ⟨X, f⟩ f`.
    pub fn series(&self) -> LinComb {
        self.values.iter().map(|(f, c)| (f.clone(), c.clone())).collect()
    }

    pub fn value(&self, f: &Forest) -> Rational {
        self.values.get(f).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &LinComb) -> Rational {
        x.iter().map(|(f, c)| c * self.value(f)).fold(Rational::zero(), |a, b| a + b)
    }

    fn compatible(&self, other: &TruncChar) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(Error::CharacterMismatch(format!("flavors {} and {}", self.flavor, other.flavor)));
        }
        if self.n != other.n {
            return Err(Error::CharacterMismatch(format!("truncations {} and {}", self.n, other.n)));
        }
        Ok(())
    }

    /// First basis pair `(x, y)` with `|x| + |y| ≤ n` where multiplicativity
    /// for the shuffle fails.
    pub fn multiplicativity_witness(&self) -> Option<(Forest, Forest)> {
        if !self.value(&Forest::unit()).is_one() {
            return Some((Forest::unit(), Forest::unit()));
        }
        for i in 1..=self.n {
            for x in enumerate_forests(i, &self.alphabet) {
                let vx = self.value(&x);
                for j in i..=self.n - i {
                    for y in enumerate_forests(j, &self.alphabet) {
                        if self.eval(&shuffle_forests(&x, &y)) != &vx * self.value(&y) {
                            return Some((x, y));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_character(&self) -> bool {
        self.multiplicativity_witness().is_none()
    }

    /// Emits `forest,value` lines in canonical order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("forest,value\n");
        for (f, c) in &self.values {
            s.push_str(&format!("{f},{c}\n"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "flavor": self.flavor.to_string(),
            "values": self.values.iter().map(|(f, c)| json!({"forest": f.to_string(), "value": c.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// `⟨X ∗ Y, x⟩ = ⟨X ⊗ Y, Δ(x)⟩` with the flavor's coproduct.
pub fn char_convolve(x: &TruncChar, y: &TruncChar) -> Result<TruncChar> {
    x.compatible(y)?;
    let mut values = BTreeMap::new();
    for f in enumerate_forests_up_to(x.n, &x.alphabet) {
        let v = x
            .flavor
            .coproduct(&f)
            .iter()
            .map(|((a, b), c)| c * x.value(a) * y.value(b))
            .fold(Rational::zero(), |acc, t| acc + t);
        if !v.is_zero() {
            values.insert(f, v);
        }
    }
    Ok(TruncChar { n: x.n, flavor: x.flavor, alphabet: x.alphabet.clone(), values })
}

/// `X ∘ S`.
pub fn char_inverse(x: &TruncChar) -> TruncChar {
    let mut values = BTreeMap::new();
    for f in enumerate_forests_up_to(x.n, &x.alphabet) {
        let v = x.eval(&x.flavor.antipode(&f));
        if !v.is_zero() {
            values.insert(f, v);
        }
    }
    TruncChar { n: x.n, flavor: x.flavor, alphabet: x.alphabet.clone(), values }
}

/// The MKW character represented by `exp_∗(Σ_i c_i [i])`.
pub fn canonical_lift(increments: &BTreeMap<Decoration, Rational>, n: usize, alphabet: &Alphabet) -> TruncChar {
    let mut l = LinComb::zero();
    for (d, c) in increments {
        l.add_term(Forest::from(Tree::leaf(d.clone())), c.clone());
    }
    TruncChar::from_series(&gl_exp(&l, n), n, Flavor::Mkw, alphabet)
}

/// Trees `τ_1, τ_2, …` of degree `≤ n` in canonical order, with `p_j = n/|τ_j|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiScaling {
    pub n: usize,
    pub trees: Vec<Tree>,
    pub p: Vec<Rational>,
}

impl PiScaling {
    pub fn new(n: usize, alphabet: &Alphabet) -> Self {
        let trees: Vec<Tree> = (1..=n).flat_map(|k| enumerate_trees(k, alphabet)).collect();
        let p = trees.iter().map(|t| Rational::new((n as i64).into(), (t.degree() as i64).into())).collect();
        PiScaling { n, trees, p }
    }
}

/// `deg_Π(ω) = Σ |τ|/N` over the trees of `ω`.
pub fn deg_pi(f: &Forest, scaling: &PiScaling) -> Result<Rational> {
    let n = scaling.n as i64;
    let mut total = Rational::zero();
    for t in f.trees() {
        if t.degree() > scaling.n {
            return Err(Error::OversizedTree { degree: t.degree(), bound: scaling.n });
        }
        total += Rational::new((t.degree() as i64).into(), n.into());
    }
    Ok(total)
}

/// Maps an MKW character to the tensor character represented by `φ(series)`.
pub fn embed_rough_path(x: &TruncChar) -> Result<TruncChar> {
    if x.flavor != Flavor::Mkw {
        return Err(Error::CharacterMismatch("embedding expects an mkw character".into()));
    }
    Ok(TruncChar::from_series(&phi(&x.series()), x.n, Flavor::Tensor, &x.alphabet))
}

/// The inverse of [`embed_rough_path`].
pub fn unembed_rough_path(y: &TruncChar) -> Result<TruncChar> {
    if y.flavor != Flavor::Tensor {
        return Err(Error::CharacterMismatch("un-embedding expects a tensor character".into()));
    }
    Ok(TruncChar::from_series(&phi_inverse(&y.series()), y.n, Flavor::Mkw, &y.alphabet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::parse_forest;
    use crate::lincomb::{frac, int};

    fn ab(s: &str) -> LinComb {
        LinComb::basis(parse_forest(s, &Alphabet::new(["a", "b"]).unwrap()).unwrap())
    }

    fn o(s: &str) -> LinComb {
        LinComb::basis(parse_forest(s, &Alphabet::plain()).unwrap())
    }

    #[test]
    fn phi_small() {
        assert_eq!(phi(&ab("[a[b]]")), ab("[a[b]]"));
        assert_eq!(phi(&ab("[a][b]")), ab("[a][b]") - ab("[b[a]]"));
        assert_eq!(phi(&LinComb::unit()), LinComb::unit());
        assert_eq!(phi_inverse(&ab("[a][b]")), ab("[a][b]") + ab("[b[a]]"));
        let x = ab("[a][b][a]");
        assert_eq!(phi(&phi_inverse(&x)), x);
    }

    #[test]
    fn phi_matrix_is_unitriangular() {
        for n in 1..=4 {
            assert!(phi_matrix(n, &Alphabet::plain()).0.is_unitriangular(), "degree {n}");
        }
    }

    #[test]
    fn lift_series() {
        let inc: BTreeMap<_, _> = [(Alphabet::plain().letters()[0].clone(), int(1))].into();
        let x = canonical_lift(&inc, 2, &Alphabet::plain());
        let want = LinComb::unit() + o("[o]") + (o("[o][o]") + o("[o[o]]")).scale(&frac(1, 2));
        assert_eq!(x.series(), want);
        assert!(x.is_character());
        let zero: BTreeMap<_, _> = [(Alphabet::plain().letters()[0].clone(), int(0))].into();
        assert_eq!(canonical_lift(&zero, 3, &Alphabet::plain()), TruncChar::epsilon(3, Flavor::Mkw, &Alphabet::plain()));
    }

    #[test]
    fn convolution_unit_and_inverse() {
        let a = Alphabet::plain();
        let inc: BTreeMap<_, _> = [(a.letters()[0].clone(), frac(2, 3))].into();
        let x = canonical_lift(&inc, 3, &a);
        let e = TruncChar::epsilon(3, Flavor::Mkw, &a);
        assert_eq!(char_convolve(&x, &e).unwrap(), x);
        assert_eq!(char_convolve(&x, &char_inverse(&x)).unwrap(), e);
        let t = TruncChar::epsilon(3, Flavor::Tensor, &a);
        assert!(char_convolve(&x, &t).is_err());
    }

    #[test]
    fn pi_degrees() {
        let s = PiScaling::new(3, &Alphabet::plain());
        assert_eq!(s.p[0], int(3));
        assert_eq!(s.p[1], frac(3, 2));
        let f = |t: &str| parse_forest(t, &Alphabet::plain()).unwrap();
        assert_eq!(deg_pi(&f("[o][o[o]]"), &s).unwrap(), int(1));
        assert_eq!(deg_pi(&Forest::unit(), &s).unwrap(), int(0));
        assert_eq!(deg_pi(&f("[o[o][o]]"), &s).unwrap(), int(1));
        assert!(deg_pi(&f("[o[o[o[o]]]]"), &s).is_err());
    }

    #[test]
    fn embedding_of_lift() {
        let a = Alphabet::plain();
        let inc: BTreeMap<_, _> = [(a.letters()[0].clone(), int(3))].into();
        let x = canonical_lift(&inc, 2, &a);
        let y = embed_rough_path(&x).unwrap();
        let oo = parse_forest("[o][o]", &a).unwrap();
        assert_eq!(y.value(&oo), frac(9, 2));
        assert!(y.is_character());
        assert_eq!(unembed_rough_path(&y).unwrap(), x);
    }
}
