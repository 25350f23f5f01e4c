//! The MKW Hopf algebra: shuffle product, coproduct by left-admissible cuts,
//! reduced coproduct, antipode, and duality with the GL product.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_traits::One;

use crate::forest::{enumerate_forests, Alphabet, Decoration, Forest, Tree};
use crate::lincomb::{shuffle, LinComb, MultiTensor, Rational, TensorElem};
use crate::postlie::gl_product_forests;

static TREE_COPRODUCT: LazyLock<RwLock<HashMap<Tree, TensorElem>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static FOREST_COPRODUCT: LazyLock<RwLock<HashMap<Forest, TensorElem>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static ANTIPODE: LazyLock<RwLock<HashMap<Forest, LinComb>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `(pruned, trunk)` pairs over all left-admissible cuts of `t`, excluding the
/// full deconcatenation term.
fn cuts(t: &Tree) -> Vec<(LinComb, Tree)> {
    let children = t.children();
    let mut out = Vec::new();
    for p in 0..=children.len() {
        let pruned_here = LinComb::basis(Forest::new(children[..p].to_vec()));
        let mut partial: Vec<(LinComb, Vec<Tree>)> = vec![(pruned_here, Vec::new())];
        for c in &children[p..] {
            let sub = cuts(c);
            let mut next = Vec::with_capacity(partial.len() * sub.len());
            for (pr, trunk) in &partial {
                for (spr, st) in &sub {
                    let mut kids = trunk.clone();
                    kids.push(st.clone());
                    next.push((shuffle(pr, spr), kids));
                }
            }
            partial = next;
        }
        for (pr, kids) in partial {
            out.push((pr, t.with_children(kids)));
        }
    }
    out
}

/// `Δ_MKW(τ) = Σ_c P^c(τ) ⊗ T^c(τ) + τ ⊗ 1`.
pub fn mkw_coproduct_tree(t: &Tree) -> TensorElem {
    if let Some(v) = TREE_COPRODUCT.read().expect("cache poisoned").get(t) {
        return v.clone();
    }
    let mut out = TensorElem::zero();
    for (pruned, trunk) in cuts(t) {
        let trunk = Forest::from(trunk);
        for (p, c) in pruned {
            out.add_term((p, trunk.clone()), c);
        }
    }
    out.add_term((Forest::from(t.clone()), Forest::unit()), Rational::one());
    TREE_COPRODUCT.write().expect("cache poisoned").insert(t.clone(), out.clone());
    out
}

/// `Δ_MKW(ω) = (id ⊗ B_−)(Δ_MKW(B_+ω) − B_+ω ⊗ 1)`.
pub fn mkw_coproduct_forest(f: &Forest) -> TensorElem {
    match f.trees() {
        [] => return TensorElem::unit(),
        [t] => return mkw_coproduct_tree(t),
        _ => {}
    }
    if let Some(v) = FOREST_COPRODUCT.read().expect("cache poisoned").get(f) {
        return v.clone();
    }
    let root = f.b_plus(&Decoration::internal_root());
    let mut out = TensorElem::zero();
    for ((l, r), c) in mkw_coproduct_tree(&root) {
        if r.is_unit() {
            continue;
        }
        let r = r.trees()[0].b_minus();
        out.add_term((l, r), c);
    }
    FOREST_COPRODUCT.write().expect("cache poisoned").insert(f.clone(), out.clone());
    out
}

pub fn mkw_coproduct(x: &LinComb) -> TensorElem {
    x.map_linear(mkw_coproduct_forest)
}

/// `Δ̂(x) = Δ(x) − x ⊗ 1 − 1 ⊗ x`; the unit component of `x` is ignored.
pub fn reduced_coproduct(x: &LinComb) -> TensorElem {
    x.map_linear(|f| if f.is_unit() { TensorElem::zero() } else { mkw_coproduct_forest(f).reduced() })
}

/// `Δ̂^k(x)` with `k + 1` legs, iterating on the last leg.
pub fn iterated_reduced_coproduct(x: &LinComb, k: usize) -> MultiTensor {
    let mut t = x.augmentation_part().map_basis(|f| vec![f.clone()]);
    for i in 0..k {
        t = t.expand_leg(i, |f| mkw_coproduct_forest(f).reduced());
        if t.is_zero() {
            break;
        }
    }
    t
}

/// The antipode of `(OF, ⧢, Δ_MKW)`: `S(x) = −x − S(x^(1)) ⧢ x^(2)`.
pub fn mkw_antipode_forest(f: &Forest) -> LinComb {
    if f.is_unit() {
        return LinComb::unit();
    }
    if let Some(v) = ANTIPODE.read().expect("cache poisoned").get(f) {
        return v.clone();
    }
    let mut out = LinComb::term(f.clone(), -Rational::one());
    for ((l, r), c) in &mkw_coproduct_forest(f).reduced() {
        let s = mkw_antipode_forest(l);
        out.add_scaled(&shuffle(&s, &LinComb::basis(r.clone())), &-c);
    }
    ANTIPODE.write().expect("cache poisoned").insert(f.clone(), out.clone());
    out
}

pub fn mkw_antipode(x: &LinComb) -> LinComb {
    x.map_linear(mkw_antipode_forest)
}

/// A violation of `⟨A ∗ B, x⟩ = ⟨A ⊗ B, Δ(x)⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityWitness {
    pub a: Forest,
    pub b: Forest,
    pub x: Forest,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Checks `⟨A ∗ B, x⟩ = ⟨A ⊗ B, Δ(x)⟩` for all basis forests with
/// `|A| + |B| = |x| ≤ max_degree`, against the given coproduct. Returns the
/// first counterexample in basis order.
pub fn duality_check_with(
    max_degree: usize,
    alphabet: &Alphabet,
    coproduct: impl Fn(&Forest) -> TensorElem,
) -> Option<DualityWitness> {
    for n in 0..=max_degree {
        let xs = enumerate_forests(n, alphabet);
        let deltas: HashMap<Forest, TensorElem> = xs.iter().map(|x| (x.clone(), coproduct(x))).collect();
        for i in 0..=n {
            for a in enumerate_forests(i, alphabet) {
                for b in enumerate_forests(n - i, alphabet) {
                    let prod = gl_product_forests(&a, &b);
                    let key = (a.clone(), b.clone());
                    for x in &xs {
                        let lhs = prod.coeff(x);
                        let rhs = deltas[x].coeff(&key);
                        if lhs != rhs {
                            return Some(DualityWitness { a, b, x: x.clone(), lhs, rhs });
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn gl_mkw_duality_check(max_degree: usize, alphabet: &Alphabet) -> Option<DualityWitness> {
    duality_check_with(max_degree, alphabet, mkw_coproduct_forest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::parse_forest;
    use crate::lincomb::{int, shuffle};

    fn al() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d", "f"]).unwrap()
    }

    fn f(s: &str) -> Forest {
        parse_forest(s, &al()).unwrap()
    }

    fn lc(s: &str) -> LinComb {
        LinComb::basis(f(s))
    }

    fn t(a: &str, b: &str) -> TensorElem {
        TensorElem::basis((f(a), f(b)))
    }

    #[test]
    fn tree_display() {
        let got = mkw_coproduct(&lc("[a[b][c[d]]]"));
        let want = t("", "[a[b][c[d]]]")
            + t("[b]", "[a[c[d]]]")
            + t("[d]", "[a[b][c]]")
            + TensorElem::pair(&shuffle(&lc("[b]"), &lc("[d]")), &lc("[a[c]]"))
            + t("[b][c[d]]", "[a]")
            + t("[a[b][c[d]]]", "");
        assert_eq!(got, want);
    }

    #[test]
    fn forest_display() {
        let got = mkw_coproduct(&lc("[a[b]][c[d]][f]"));
        let want = t("", "[a[b]][c[d]][f]")
            + t("[b]", "[a][c[d]][f]")
            + t("[d]", "[a[b]][c][f]")
            + t("[a[b]]", "[c[d]][f]")
            + TensorElem::pair(&shuffle(&lc("[b]"), &lc("[d]")), &lc("[a][c][f]"))
            + TensorElem::pair(&shuffle(&lc("[a[b]]"), &lc("[d]")), &lc("[c][f]"))
            + t("[a[b]][c[d]]", "[f]")
            + t("[a[b]][c[d]][f]", "");
        assert_eq!(got, want);
    }

    #[test]
    fn small_coproducts() {
        assert_eq!(mkw_coproduct(&LinComb::unit()), TensorElem::unit());
        assert_eq!(mkw_coproduct(&lc("[a]")), t("", "[a]") + t("[a]", ""));
        assert_eq!(mkw_coproduct(&lc("[a[b]]")), t("", "[a[b]]") + t("[b]", "[a]") + t("[a[b]]", ""));
        assert_eq!(mkw_coproduct(&lc("[a][b]")), t("", "[a][b]") + t("[a]", "[b]") + t("[a][b]", ""));
        assert_eq!(reduced_coproduct(&lc("[a[b]]")), t("[b]", "[a]"));
        assert!(reduced_coproduct(&lc("[a]")).is_zero());
    }

    #[test]
    fn antipode_values() {
        assert_eq!(mkw_antipode(&lc("[a]")), -lc("[a]"));
        assert_eq!(mkw_antipode(&lc("[a[b]]")), -lc("[a[b]]") + lc("[b][a]") + lc("[a][b]"));
        assert_eq!(mkw_antipode(&LinComb::unit()), LinComb::unit());
    }

    #[test]
    fn iterated_nilpotent() {
        let x = lc("[a[b][c[d]]]");
        assert!(!iterated_reduced_coproduct(&x, 3).is_zero());
        assert!(iterated_reduced_coproduct(&x, 4).is_zero());
        assert_eq!(iterated_reduced_coproduct(&lc("[a][b]"), 1).coeff(&vec![f("[a]"), f("[b]")]), int(1));
    }

    #[test]
    fn duality_small_and_negative_control() {
        assert!(gl_mkw_duality_check(3, &Alphabet::plain()).is_none());
        let corrupted = |x: &Forest| {
            let mut d = mkw_coproduct_forest(x);
            if x.degree() == 2 {
                d.add_term((x.clone(), Forest::unit()), int(1));
            }
            d
        };
        let w = duality_check_with(3, &Alphabet::plain(), corrupted).expect("counterexample");
        assert_eq!(w.x.degree(), 2);
    }
}
