//! Left grafting, its Guin–Oudom extension, the planar Grossman–Larson
//! product and the antipodes of the concatenation and GL Hopf algebras.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_traits::One;

use crate::forest::{Forest, Tree};
use crate::lincomb::{concat, deshuffle_forest, LinComb, Rational};

type PairCache = LazyLock<RwLock<HashMap<(Forest, Forest), LinComb>>>;

static GRAFT_CACHE: PairCache = LazyLock::new(|| RwLock::new(HashMap::new()));
static GL_CACHE: PairCache = LazyLock::new(|| RwLock::new(HashMap::new()));
static GL_ANTIPODE_CACHE: LazyLock<RwLock<HashMap<Forest, LinComb>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn cached<K: Clone + Eq + std::hash::Hash>(
    cache: &RwLock<HashMap<K, LinComb>>,
    key: &K,
    compute: impl FnOnce() -> LinComb,
) -> LinComb {
    if let Some(v) = cache.read().expect("cache poisoned").get(key) {
        return v.clone();
    }
    let v = compute();
    cache.write().expect("cache poisoned").insert(key.clone(), v.clone());
    v
}

fn count_vertices(f: &Forest) -> usize {
    f.degree()
}

/// Rebuilds `t`, prepending `grafts[v]` to the children of the vertex with
/// preorder index `v`.
fn rebuild(t: &Tree, next: &mut usize, grafts: &[Vec<Tree>]) -> Tree {
    let me = *next;
    *next += 1;
    let mut children = grafts[me].clone();
    for c in t.children() {
        children.push(rebuild(c, next, grafts));
    }
    Tree::new(t.decoration().clone(), children)
}

/// `A ⊲ B` on basis forests, by direct enumeration: each root of `A` picks a
/// vertex of `B`; roots sharing a vertex keep their order and sit leftmost.
pub fn graft_forests(a: &Forest, b: &Forest) -> LinComb {
    if a.is_unit() {
        return LinComb::basis(b.clone());
    }
    if b.is_unit() {
        return LinComb::zero();
    }
    cached(&GRAFT_CACHE, &(a.clone(), b.clone()), || {
        let n = count_vertices(b);
        let k = a.len();
        let mut out = LinComb::zero();
        let mut choice = vec![0usize; k];
        loop {
            let mut grafts = vec![Vec::new(); n];
            for (t, &v) in a.trees().iter().zip(&choice) {
                grafts[v].push(t.clone());
            }
            let mut next = 0;
            let trees: Vec<Tree> = b.trees().iter().map(|t| rebuild(t, &mut next, &grafts)).collect();
            out.add_term(Forest::new(trees), Rational::one());
            let mut i = 0;
            while i < k {
                choice[i] += 1;
                if choice[i] < n {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    })
}

/// Bilinear left grafting `A ⊲ B`.
pub fn left_graft(a: &LinComb, b: &LinComb) -> LinComb {
    a.bilinear(b, graft_forests)
}

/// `τ ⊲ σ` for single trees: `τ` becomes the leftmost child of each vertex.
fn graft_tree_on_tree(t: &Tree, s: &Tree) -> Vec<Tree> {
    let mut out = vec![s.with_children(std::iter::once(t.clone()).chain(s.children().iter().cloned()).collect())];
    for (i, c) in s.children().iter().enumerate() {
        for g in graft_tree_on_tree(t, c) {
            let mut children = s.children().to_vec();
            children[i] = g;
            out.push(s.with_children(children));
        }
    }
    out
}

fn graft_tree_on_forest(t: &Tree, b: &Forest) -> LinComb {
    let mut out = LinComb::zero();
    for (i, s) in b.trees().iter().enumerate() {
        for g in graft_tree_on_tree(t, s) {
            let mut trees = b.trees().to_vec();
            trees[i] = g;
            out.add_term(Forest::new(trees), Rational::one());
        }
    }
    out
}

/// `A ⊲ B` through the Guin–Oudom recursion, peeling the leftmost tree:
/// `(τω′) ⊲ B = τ ⊲ (ω′ ⊲ B) − (τ ⊲ ω′) ⊲ B`, with trees acting as derivations.
/// Independent of [`graft_forests`]; used to cross-check it.
pub fn graft_recursive(a: &Forest, b: &Forest) -> LinComb {
    match a.trees() {
        [] => LinComb::basis(b.clone()),
        [t] => graft_tree_on_forest(t, b),
        [t, rest @ ..] => {
            let rest = Forest::new(rest.to_vec());
            let inner = graft_recursive(&rest, b);
            let first = inner.map_linear(|f| graft_tree_on_forest(t, f));
            let tw = graft_tree_on_forest(t, &rest);
            let second = tw.map_linear(|f| graft_recursive(f, b));
            first - second
        }
    }
}

/// The Grossman–Larson product on basis forests: `A_(1) · (A_(2) ⊲ B)`.
pub fn gl_product_forests(a: &Forest, b: &Forest) -> LinComb {
    if a.is_unit() {
        return LinComb::basis(b.clone());
    }
    if b.is_unit() {
        return LinComb::basis(a.clone());
    }
    cached(&GL_CACHE, &(a.clone(), b.clone()), || {
        let mut out = LinComb::zero();
        for ((l, r), c) in &deshuffle_forest(a) {
            let g = graft_forests(r, b);
            out.add_scaled(&concat(&LinComb::basis(l.clone()), &g), c);
        }
        out
    })
}

pub fn gl_product(a: &LinComb, b: &LinComb) -> LinComb {
    a.bilinear(b, gl_product_forests)
}

/// `S(τ1…τn) = (−1)^n τn…τ1`.
pub fn concat_antipode_forest(f: &Forest) -> LinComb {
    let sign = if f.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
    LinComb::term(f.reversed(), sign)
}

pub fn concat_antipode(x: &LinComb) -> LinComb {
    x.map_linear(concat_antipode_forest)
}

/// The GL antipode: `S_∗(A) = S(A) + S_∗(A^(1)) ⊲ S(A^(2))` over the reduced
/// deshuffle.
pub fn gl_antipode_forest(f: &Forest) -> LinComb {
    if f.is_unit() {
        return LinComb::unit();
    }
    if let [t] = f.trees() {
        return LinComb::term(Forest::from(t.clone()), -Rational::one());
    }
    cached(&GL_ANTIPODE_CACHE, f, || {
        let mut out = concat_antipode_forest(f);
        for ((l, r), c) in &deshuffle_forest(f).reduced() {
            let g = left_graft(&gl_antipode_forest(l), &concat_antipode_forest(r));
            out.add_scaled(&g, c);
        }
        out
    })
}

pub fn gl_antipode(x: &LinComb) -> LinComb {
    x.map_linear(gl_antipode_forest)
}

/// Recovers `A · B` from the GL side as `A_(1) ∗ (S_∗(A_(2)) ⊲ B)`.
pub fn gl_inverse_product(a: &LinComb, b: &LinComb) -> LinComb {
    a.bilinear(b, |fa, fb| {
        let mut out = LinComb::zero();
        let fb = LinComb::basis(fb.clone());
        for ((l, r), c) in &deshuffle_forest(fa) {
            let inner = left_graft(&gl_antipode_forest(r), &fb);
            out.add_scaled(&gl_product(&LinComb::basis(l.clone()), &inner), c);
        }
        out
    })
}

/// `x ⊲ y − y ⊲ x + xy − yx`.
pub fn jacobi_bracket(x: &LinComb, y: &LinComb) -> LinComb {
    left_graft(x, y) - left_graft(y, x) + concat(x, y) - concat(y, x)
}

/// The concatenation commutator `xy − yx`.
pub fn commutator(x: &LinComb, y: &LinComb) -> LinComb {
    concat(x, y) - concat(y, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Alphabet};
    use crate::lincomb::int;

    fn al() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d", "e", "f"]).unwrap()
    }

    fn f(s: &str) -> Forest {
        parse_forest(s, &al()).unwrap()
    }

    fn lc(s: &str) -> LinComb {
        LinComb::basis(f(s))
    }

    fn sum(items: &[&str]) -> LinComb {
        items.iter().fold(LinComb::zero(), |acc, s| acc + lc(s))
    }

    #[test]
    fn tree_grafting_display() {
        let got = left_graft(&lc("[a[b]]"), &lc("[c[d][e[f]]]"));
        let want = sum(&[
            "[c[a[b]][d][e[f]]]",
            "[c[d[a[b]]][e[f]]]",
            "[c[d][e[a[b]][f]]]",
            "[c[d][e[f[a[b]]]]]",
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn forest_grafting_display() {
        let got = left_graft(&lc("[a[b]][c]"), &lc("[d[e]][f]"));
        let want = sum(&[
            "[d[a[b]][c][e]][f]",
            "[d[a[b]][e[c]]][f]",
            "[d[a[b]][e]][f[c]]",
            "[d[c][e[a[b]]]][f]",
            "[d[e[a[b]][c]]][f]",
            "[d[e[a[b]]]][f[c]]",
            "[d[c][e]][f[a[b]]]",
            "[d[e[c]]][f[a[b]]]",
            "[d[e]][f[a[b]][c]]",
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn graft_units() {
        assert_eq!(left_graft(&LinComb::unit(), &lc("[a[b]]")), lc("[a[b]]"));
        assert!(left_graft(&lc("[a]"), &LinComb::unit()).is_zero());
        assert_eq!(left_graft(&LinComb::unit(), &LinComb::unit()), LinComb::unit());
    }

    #[test]
    fn direct_and_recursive_grafting_agree() {
        for (a, b) in [("[a][c]", "[d]"), ("[a[b]][c]", "[d[e]][f]"), ("[a][b][c]", "[d[e]]")] {
            assert_eq!(graft_forests(&f(a), &f(b)), graft_recursive(&f(a), &f(b)), "{a} ⊲ {b}");
        }
        assert_eq!(left_graft(&lc("[a][c]"), &lc("[d]")), lc("[d[a][c]]"));
    }

    #[test]
    fn gl_products() {
        assert_eq!(gl_product(&lc("[a]"), &lc("[b]")), lc("[a][b]") + lc("[b[a]]"));
        let abc = gl_product(&gl_product(&lc("[a]"), &lc("[b]")), &lc("[c]"));
        let (a, b, c) = (lc("[a]"), lc("[b]"), lc("[c]"));
        let want = concat(&concat(&a, &b), &c)
            + concat(&left_graft(&a, &b), &c)
            + concat(&a, &left_graft(&b, &c))
            + concat(&b, &left_graft(&a, &c))
            + left_graft(&a, &left_graft(&b, &c));
        assert_eq!(abc, want);
        assert_eq!(gl_product(&LinComb::unit(), &lc("[a][b]")), lc("[a][b]"));
    }

    #[test]
    fn antipodes() {
        assert_eq!(concat_antipode(&lc("[a][b]")), lc("[b][a]"));
        assert_eq!(concat_antipode(&lc("[a]")), -lc("[a]"));
        assert_eq!(gl_antipode(&lc("[a[b]]")), -lc("[a[b]]"));
        let want = gl_product(&lc("[b]"), &lc("[a]")) + left_graft(&lc("[a]"), &lc("[b]"));
        assert_eq!(gl_antipode(&lc("[a][b]")), want);
        assert_eq!(gl_antipode(&LinComb::unit()), LinComb::unit());
    }

    #[test]
    fn inverse_product() {
        assert_eq!(gl_inverse_product(&lc("[a]"), &lc("[b]")), lc("[a][b]"));
        assert_eq!(gl_inverse_product(&LinComb::unit(), &lc("[a[b]]")), lc("[a[b]]"));
        assert_eq!(gl_inverse_product(&lc("[a[b]]"), &LinComb::unit()), lc("[a[b]]"));
    }

    #[test]
    fn brackets() {
        assert!(jacobi_bracket(&lc("[a]"), &lc("[a]")).is_zero());
        let want = lc("[b[a]]") - lc("[a[b]]") + lc("[a][b]") - lc("[b][a]");
        assert_eq!(jacobi_bracket(&lc("[a]"), &lc("[b]")), want);
        assert_eq!(want.coeff(&f("[a][b]")), int(1));
    }
}
