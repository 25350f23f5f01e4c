//! Non-planar rooted forests with the Butcher–Connes–Kreimer coproduct, the
//! shuffle-free natural growth and its primitive projection.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, ParseError, Result};
use crate::forest::{parse_forest, Alphabet, Decoration, Forest, Tree};
use crate::lincomb::{write_terms, Comb, LinComb, Rational};

/// A multiset of non-planar trees, each stored with children sorted, and the
/// trees themselves sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NpForest(Forest);

pub type BckComb = Comb<NpForest>;
pub type BckTensor = Comb<(NpForest, NpForest)>;

fn canonical_tree(t: &Tree) -> Tree {
    let mut kids: Vec<Tree> = t.children().iter().map(canonical_tree).collect();
    kids.sort();
    t.with_children(kids)
}

impl NpForest {
    /// Forgets the planar structure.
    pub fn from_planar(f: &Forest) -> Self {
        let mut trees: Vec<Tree> = f.trees().iter().map(canonical_tree).collect();
        trees.sort();
        NpForest(Forest::new(trees))
    }

    pub fn unit() -> Self {
        NpForest(Forest::unit())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_unit()
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn trees(&self) -> &[Tree] {
        self.0.trees()
    }

    /// Disjoint union.
    pub fn union(&self, other: &NpForest) -> NpForest {
        let mut trees = self.0.trees().to_vec();
        trees.extend_from_slice(other.0.trees());
        trees.sort();
        NpForest(Forest::new(trees))
    }

    pub fn b_plus(&self, d: &Decoration) -> NpForest {
        NpForest(Forest::from(self.0.b_plus(d)))
    }

    /// A planar representative.
    pub fn as_planar(&self) -> &Forest {
        &self.0
    }
}

impl fmt::Display for NpForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for NpForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Display for BckComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.iter().map(|(k, c)| (k.to_string(), c)))
    }
}

impl fmt::Display for BckTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.iter().map(|((a, b), c)| (format!("{a}⊗{b}"), c)))
    }
}

/// Parses bracket text; child order is irrelevant.
pub fn parse_np_forest(text: &str, alphabet: &Alphabet) -> Result<NpForest, ParseError> {
    Ok(NpForest::from_planar(&parse_forest(text, alphabet)?))
}

pub fn forget_planarity(x: &LinComb) -> BckComb {
    x.map_basis(NpForest::from_planar)
}

pub fn bck_product(a: &BckComb, b: &BckComb) -> BckComb {
    a.bilinear(b, |x, y| BckComb::basis(x.union(y)))
}

static COPRODUCT: LazyLock<RwLock<HashMap<Tree, BckTensor>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn tensor_product(a: &BckTensor, b: &BckTensor) -> BckTensor {
    a.bilinear(b, |(a1, a2), (b1, b2)| BckTensor::basis((a1.union(b1), a2.union(b2))))
}

/// `Δ B_+ = B_+ ⊗ 1 + (id ⊗ B_+)Δ` on a canonical tree.
fn coproduct_tree(t: &Tree) -> BckTensor {
    if let Some(v) = COPRODUCT.read().expect("cache poisoned").get(t) {
        return v.clone();
    }
    let inner = coproduct_forest(&NpForest(t.b_minus()));
    let d = t.decoration();
    let mut out = inner.map_basis(|(l, r)| (l.clone(), r.b_plus(d)));
    out.add_term((NpForest(Forest::from(t.clone())), NpForest::unit()), Rational::one());
    COPRODUCT.write().expect("cache poisoned").insert(t.clone(), out.clone());
    out
}

fn coproduct_forest(f: &NpForest) -> BckTensor {
    let mut out = BckTensor::basis((NpForest::unit(), NpForest::unit()));
    for t in f.trees() {
        out = tensor_product(&out, &coproduct_tree(t));
    }
    out
}

pub fn bck_coproduct(x: &BckComb) -> BckTensor {
    x.map_linear(coproduct_forest)
}

pub fn bck_reduced_coproduct(x: &BckComb) -> BckTensor {
    x.map_linear(|f| {
        if f.is_unit() {
            BckTensor::zero()
        } else {
            coproduct_forest(f).filter(|(l, r)| !l.is_unit() && !r.is_unit())
        }
    })
}

pub fn bck_antipode(x: &BckComb) -> BckComb {
    x.map_linear(antipode_forest)
}

fn antipode_forest(f: &NpForest) -> BckComb {
    if f.is_unit() {
        return BckComb::basis(NpForest::unit());
    }
    let mut out = BckComb::term(f.clone(), -Rational::one());
    for ((l, r), c) in &bck_reduced_coproduct(&BckComb::basis(f.clone())) {
        let s = antipode_forest(l);
        out.add_scaled(&bck_product(&s, &BckComb::basis(r.clone())), &-c);
    }
    out
}

fn graft_all(roots: &[Tree], t: &Tree, out: &mut Vec<Tree>) {
    let mut kids = t.children().to_vec();
    kids.extend_from_slice(roots);
    out.push(t.with_children(kids));
    for (i, c) in t.children().iter().enumerate() {
        let mut sub = Vec::new();
        graft_all(roots, c, &mut sub);
        for g in sub {
            let mut kids = t.children().to_vec();
            kids[i] = g;
            out.push(t.with_children(kids));
        }
    }
}

/// `(1/|ω2|) Σ_v ω1 ⊤_v ω2` without shuffling at `v`.
pub fn bck_natural_growth_forests(a: &NpForest, b: &NpForest) -> Result<BckComb> {
    if b.is_unit() {
        return Err(Error::EmptyGrowthTarget);
    }
    if a.is_unit() {
        return Ok(BckComb::basis(b.clone()));
    }
    let weight = Rational::new(1.into(), (b.degree() as i64).into());
    let mut out = BckComb::zero();
    for (i, t) in b.trees().iter().enumerate() {
        let mut grown = Vec::new();
        graft_all(a.trees(), t, &mut grown);
        for g in grown {
            let mut trees = b.trees().to_vec();
            trees[i] = g;
            out.add_term(NpForest::from_planar(&Forest::new(trees)), weight.clone());
        }
    }
    Ok(out)
}

pub fn bck_natural_growth(a: &BckComb, b: &BckComb) -> Result<BckComb> {
    let mut out = BckComb::zero();
    for (fa, ca) in a {
        for (fb, cb) in b {
            out.add_scaled(&bck_natural_growth_forests(fa, fb)?, &(ca * cb));
        }
    }
    Ok(out)
}

pub fn bck_primitive_projection(x: &BckComb) -> BckComb {
    x.map_linear(|f| {
        if f.is_unit() {
            return BckComb::zero();
        }
        let mut out = BckComb::basis(f.clone());
        for ((l, r), c) in &bck_reduced_coproduct(&BckComb::basis(f.clone())) {
            let p = bck_primitive_projection(&BckComb::basis(r.clone()));
            let g = bck_natural_growth(&BckComb::basis(l.clone()), &p).expect("reduced legs are non-empty");
            out.add_scaled(&g, &-c);
        }
        out
    })
}

pub fn bck_is_primitive(x: &BckComb) -> bool {
    x.coeff(&NpForest::unit()).is_zero() && bck_reduced_coproduct(x).is_zero()
}

/// All non-planar forests with `degree` vertices.
pub fn enumerate_np_forests(degree: usize, alphabet: &Alphabet) -> Vec<NpForest> {
    let mut out: Vec<NpForest> =
        crate::forest::enumerate_forests(degree, alphabet).iter().map(NpForest::from_planar).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::int;

    fn np(s: &str) -> BckComb {
        BckComb::basis(parse_np_forest(s, &Alphabet::plain()).unwrap())
    }

    #[test]
    fn canonical_children() {
        let a = Alphabet::new(["a", "b", "c", "d"]).unwrap();
        assert_eq!(parse_np_forest("[a[b][c[d]]]", &a).unwrap(), parse_np_forest("[a[c[d]][b]]", &a).unwrap());
        assert_eq!(np("[o[o]][o]"), np("[o][o[o]]"));
    }

    #[test]
    fn coproducts() {
        let t = |a: &str, b: &str| {
            BckTensor::basis((
                parse_np_forest(a, &Alphabet::plain()).unwrap(),
                parse_np_forest(b, &Alphabet::plain()).unwrap(),
            ))
        };
        assert_eq!(bck_coproduct(&np("[o]")), t("", "[o]") + t("[o]", ""));
        assert_eq!(bck_coproduct(&np("[o[o]]")), t("", "[o[o]]") + t("[o]", "[o]") + t("[o[o]]", ""));
        let d = bck_coproduct(&np("[o[o][o]]"));
        assert_eq!(d.coeff(&(parse_np_forest("[o]", &Alphabet::plain()).unwrap(), parse_np_forest("[o[o]]", &Alphabet::plain()).unwrap())), int(2));
    }

    #[test]
    fn growth() {
        assert_eq!(bck_natural_growth(&np("[o]"), &np("[o]")).unwrap(), np("[o[o]]"));
        assert_eq!(bck_natural_growth(&np("[o][o]"), &np("[o]")).unwrap(), np("[o[o][o]]"));
    }

    #[test]
    fn projections() {
        assert_eq!(bck_primitive_projection(&np("[o][o]")), np("[o][o]") - np("[o[o]]").scale(&int(2)));
        for s in ["[o[o]]", "[o[o[o]]]", "[o[o][o]]", "[o][o[o]]"] {
            assert!(bck_primitive_projection(&np(s)).is_zero(), "{s}");
        }
        let want = np("[o][o][o]") - np("[o][o[o]]").scale(&int(3)) + np("[o[o[o]]]").scale(&int(3));
        assert_eq!(bck_primitive_projection(&np("[o][o][o]")), want);
    }

    #[test]
    fn counts() {
        let n: Vec<usize> = (0..=4).map(|d| enumerate_np_forests(d, &Alphabet::plain()).len()).collect();
        assert_eq!(n, [1, 1, 2, 4, 9]);
    }
}
