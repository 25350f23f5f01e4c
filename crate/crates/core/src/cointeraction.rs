//! The coaction `ρ_⊲` dual to left grafting, the cointeraction axioms and the
//! co-translation/co-substitution identities, the post-Lie translation `T_v`
//! and the comparison showing the two families of automorphisms are disjoint.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::{enumerate_forests, Alphabet, Decoration, Forest, Tree};
use crate::lincomb::{concat, deshuffle, shuffle_forests, LinComb, MultiTensor, TensorElem};
use crate::mkw::mkw_coproduct_tree;
use crate::postlie::{gl_product, gl_product_forests, graft_forests, left_graft};
use crate::report::Check;

/// `ρ_⊲` on a tree: the left-admissible cuts of `Δ_MKW(τ)` without `τ ⊗ 1`.
pub fn rho_graft_tree(t: &Tree) -> TensorElem {
    let whole = (Forest::from(t.clone()), Forest::unit());
    mkw_coproduct_tree(t).filter(|k| *k != whole)
}

/// `ρ_⊲(ω1 ω2) = ρ_⊲(ω1) (⧢ ⊗ ·) ρ_⊲(ω2)`.
pub fn rho_graft_forest(f: &Forest) -> TensorElem {
    let mut out = TensorElem::unit();
    for t in f.trees() {
        out = out.bilinear(&rho_graft_tree(t), |(a1, a2), (b1, b2)| {
            shuffle_forests(a1, b1).map_basis(|l| (l.clone(), a2.concat(b2)))
        });
    }
    out
}

pub fn rho_graft(x: &LinComb) -> TensorElem {
    x.map_linear(rho_graft_forest)
}

/// `x ↦ Σ ⟨A·B, x⟩ A ⊗ B` for every forest of degree `n`, obtained by
/// scattering all products of basis pairs of total degree `n`.
pub fn transpose_product(
    n: usize,
    alphabet: &Alphabet,
    product: impl Fn(&Forest, &Forest) -> LinComb,
) -> HashMap<Forest, TensorElem> {
    let mut out: HashMap<Forest, TensorElem> = HashMap::new();
    for i in 0..=n {
        let right = enumerate_forests(n - i, alphabet);
        for a in enumerate_forests(i, alphabet) {
            for b in &right {
                for (x, c) in &product(&a, b) {
                    out.entry(x.clone()).or_default().add_term((a.clone(), b.clone()), c.clone());
                }
            }
        }
    }
    out
}

/// The coproducts dual to `∗`, `·` and `⊲`, materialised by transposition up
/// to a maximal degree.
pub struct DualCoproducts {
    alphabet: Alphabet,
    star: Vec<HashMap<Forest, TensorElem>>,
    concat: Vec<HashMap<Forest, TensorElem>>,
    graft: Vec<HashMap<Forest, TensorElem>>,
}

impl DualCoproducts {
    pub fn new(max_degree: usize, alphabet: &Alphabet) -> Self {
        let by_degree = |p: fn(&Forest, &Forest) -> LinComb| {
            (0..=max_degree).map(|n| transpose_product(n, alphabet, p)).collect::<Vec<_>>()
        };
        DualCoproducts {
            alphabet: alphabet.clone(),
            star: by_degree(gl_product_forests),
            concat: by_degree(|a, b| LinComb::basis(a.concat(b))),
            graft: by_degree(graft_forests),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.star.len() - 1
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn lookup(table: &[HashMap<Forest, TensorElem>], f: &Forest) -> TensorElem {
        table
            .get(f.degree())
            .unwrap_or_else(|| panic!("degree {} beyond the transposition range", f.degree()))
            .get(f)
            .cloned()
            .unwrap_or_default()
    }

    /// `Δ_∗`, dual to the Grossman–Larson product.
    pub fn star(&self, f: &Forest) -> TensorElem {
        Self::lookup(&self.star, f)
    }

    /// `Δ_⊙`, dual to concatenation.
    pub fn concat(&self, f: &Forest) -> TensorElem {
        Self::lookup(&self.concat, f)
    }

    /// `ρ_⊲` as the transpose of left grafting.
    pub fn graft(&self, f: &Forest) -> TensorElem {
        Self::lookup(&self.graft, f)
    }
}

/// Multiplies legs `i < j` of each term into position `i`.
fn merge_apart(t: &MultiTensor, i: usize, j: usize, m: impl Fn(&Forest, &Forest) -> LinComb) -> MultiTensor {
    t.map_linear(|legs| {
        m(&legs[i], &legs[j]).map_basis(|x| {
            let mut w = legs.clone();
            w[i] = x.clone();
            w.remove(j);
            w
        })
    })
}

fn forests_up_to(max_degree: usize, alphabet: &Alphabet) -> Vec<Forest> {
    (0..=max_degree).flat_map(|n| enumerate_forests(n, alphabet)).collect()
}

/// Checks the four cointeraction axioms for a candidate coaction `rho` on
/// every basis forest of degree at most the range of `duals`.
pub fn verify_cointeraction_with(duals: &DualCoproducts, rho: &dyn Fn(&Forest) -> TensorElem) -> Vec<Check> {
    let max = duals.max_degree();
    let basis = forests_up_to(max, duals.alphabet());
    let mut unit = Check::new("rho(1) = 1⊗1");
    let r1 = rho(&Forest::unit());
    unit.record(r1 == TensorElem::unit(), || format!("rho(1) = {r1}"));

    let mut mult = Check::new("rho(x⧢y) = rho(x)(⧢⊗⧢)rho(y)");
    for x in &basis {
        for y in basis.iter().filter(|y| x.degree() + y.degree() <= max) {
            let lhs = shuffle_forests(x, y).map_linear(|f| rho(f));
            let (rx, ry) = (rho(x), rho(y));
            let rhs = rx.bilinear(&ry, |(a1, a2), (b1, b2)| {
                TensorElem::pair(&shuffle_forests(a1, b1), &shuffle_forests(a2, b2))
            });
            mult.record(lhs == rhs, || format!("x = {x}, y = {y}: {lhs} vs {rhs}"));
        }
    }

    let mut counit = Check::new("(id⊗ε)rho = 1ε");
    for x in &basis {
        let r = rho(x);
        let lhs: LinComb = r.iter().filter(|((_, b), _)| b.is_unit()).map(|((a, _), c)| (a.clone(), c.clone())).collect();
        let rhs = if x.is_unit() { LinComb::unit() } else { LinComb::zero() };
        counit.record(lhs == rhs, || format!("x = {x}: {lhs}"));
    }

    let mut comult = Check::new("(id⊗Δ_⊙)rho = m^{1,3}(rho⊗rho)Δ_⊙");
    for x in &basis {
        let lhs = rho(x).to_multi().expand_leg(1, |f| duals.concat(f));
        let split = duals.concat(x).to_multi().expand_leg(0, |f| rho(f)).expand_leg(2, |f| rho(f));
        let rhs = merge_apart(&split, 0, 2, shuffle_forests);
        comult.record(lhs == rhs, || format!("x = {x}: {lhs} vs {rhs}"));
    }
    vec![unit, mult, counit, comult]
}

pub fn verify_cointeraction(max_degree: usize, alphabet: &Alphabet) -> Vec<Check> {
    let duals = DualCoproducts::new(max_degree, alphabet);
    verify_cointeraction_with(&duals, &rho_graft_forest)
}

/// `(id⊗ρ)ρ = m^{1,2}(id⊗ρ⊗id)(Δ_⊙⊗id)ρ = (Δ_∗⊗id)ρ` on every basis forest.
pub fn verify_cotranslation_cosubstitution(max_degree: usize, alphabet: &Alphabet) -> Vec<Check> {
    let duals = DualCoproducts::new(max_degree, alphabet);
    let mut translation = Check::new("(id⊗rho)rho = m^{1,2}(id⊗rho⊗id)(Δ_⊙⊗id)rho");
    let mut substitution = Check::new("(id⊗rho)rho = (Δ_∗⊗id)rho");
    for x in forests_up_to(max_degree, alphabet) {
        let r = rho_graft_forest(&x).to_multi();
        let lhs = r.expand_leg(1, rho_graft_forest);
        let mid = merge_apart(
            &r.expand_leg(0, |f| duals.concat(f)).expand_leg(1, rho_graft_forest),
            0,
            1,
            shuffle_forests,
        );
        let rhs = r.expand_leg(0, |f| duals.star(f));
        translation.record(lhs == mid, || format!("x = {x}: {lhs} vs {mid}"));
        substitution.record(lhs == rhs, || format!("x = {x}: {lhs} vs {rhs}"));
    }
    vec![translation, substitution]
}

/// Checks `⟨A⊗B, ρ_⊲(x)⟩ = ⟨A⊲B, x⟩` and that the cut rule agrees with the
/// transpose of grafting, for all `|x| ≤ max_degree`.
pub fn verify_rho_duality(max_degree: usize, alphabet: &Alphabet) -> Check {
    let duals = DualCoproducts::new(max_degree, alphabet);
    let mut check = Check::new("<A⊗B, rho(x)> = <A⊲B, x>");
    for x in forests_up_to(max_degree, alphabet) {
        let cut = rho_graft_forest(&x);
        let transposed = duals.graft(&x);
        check.record(cut == transposed, || format!("x = {x}: {cut} vs {transposed}"));
    }
    check
}

/// Terms of `Δ_⧢(x) − x ⊗ x` with total degree at most `max_degree`; `None`
/// when `x` is group-like up to that degree, else the lowest failing degree.
pub fn group_like_defect(x: &LinComb, max_degree: usize) -> Option<usize> {
    let x = x.truncate(max_degree);
    let diff = deshuffle(&x) - TensorElem::pair(&x, &x);
    diff.keys().map(|(a, b)| a.degree() + b.degree()).filter(|&d| d <= max_degree).min()
}

pub fn is_group_like(x: &LinComb, max_degree: usize) -> bool {
    x.coeff(&Forest::unit()).is_one() && group_like_defect(x, max_degree).is_none()
}

/// The shift vector `v` of a translation; every entry is primitive for `Δ_⧢`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationVector(BTreeMap<Decoration, LinComb>);

impl TranslationVector {
    pub fn new(map: BTreeMap<Decoration, LinComb>) -> Result<Self> {
        for (d, v) in &map {
            let prim = TensorElem::pair(v, &LinComb::unit()) + TensorElem::pair(&LinComb::unit(), v);
            if !v.coeff(&Forest::unit()).is_zero() || deshuffle(v) != prim {
                return Err(Error::NotPrimitive(format!("v_{d} = {v}")));
            }
        }
        Ok(TranslationVector(map))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, d: &Decoration) -> LinComb {
        self.0.get(d).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<Decoration, LinComb> {
        &self.0
    }

    /// `v + T_v(u)`, the composite shift.
    pub fn compose(&self, u: &TranslationVector, max_degree: usize) -> Result<TranslationVector> {
        let mut out = self.0.clone();
        for (d, ud) in &u.0 {
            let moved = translate(self, ud, max_degree);
            *out.entry(d.clone()).or_default() += &moved;
        }
        TranslationVector::new(out)
    }
}

struct Translator<'a> {
    v: &'a TranslationVector,
    max: usize,
    memo: HashMap<Forest, LinComb>,
}

impl Translator<'_> {
    fn letter(&self, d: &Decoration) -> LinComb {
        LinComb::tree(&Tree::leaf(d.clone())) + self.v.get(d).truncate(self.max)
    }

    fn forest(&mut self, f: &Forest) -> LinComb {
        if f.degree() > self.max {
            return LinComb::zero();
        }
        if let Some(v) = self.memo.get(f) {
            return v.clone();
        }
        let out = match f.trees() {
            [] => LinComb::unit(),
            [t] => {
                let inner = self.forest(&t.b_minus());
                left_graft(&inner, &self.letter(t.decoration())).truncate(self.max)
            }
            [t, rest @ ..] => {
                let head = Forest::from(t.clone());
                let rest = Forest::new(rest.to_vec());
                let prod = gl_product(&self.forest(&head), &self.forest(&rest)).truncate(self.max);
                let correction = graft_forests(&head, &rest).map_linear(|g| self.forest(g));
                prod - correction
            }
        };
        self.memo.insert(f.clone(), out.clone());
        out
    }
}

/// The post-Lie translation `T_v`, truncated at `max_degree`: `T_v([i]) =
/// [i] + v_i`, `T_v(B_+^i ω) = T_v(ω) ⊲ T_v([i])`, and
/// `T_v(τω) = T_v(τ) ∗ T_v(ω) − T_v(τ ⊲ ω)`.
pub fn translate(v: &TranslationVector, x: &LinComb, max_degree: usize) -> LinComb {
    let mut t = Translator { v, max: max_degree, memo: HashMap::new() };
    x.map_linear(|f| t.forest(f)).truncate(max_degree)
}

/// Outcome of comparing `T_v` against `ξ ⊲ ·` on `[i]` and `[i[j]]` with the
/// shift forced by `T_v([i]) = ξ ⊲ [i]`.
#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessReport {
    pub letters_agree: bool,
    pub coincide: bool,
    pub witness: Option<DisjointnessWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessWitness {
    pub forest: Forest,
    pub grafted: LinComb,
    pub translated: LinComb,
}

pub fn disjointness_witness(xi: &LinComb, alphabet: &Alphabet, max_degree: usize) -> Result<DisjointnessReport> {
    if let Some(d) = group_like_defect(xi, max_degree) {
        return Err(Error::NotGroupLike(d));
    }
    if !xi.coeff(&Forest::unit()).is_one() {
        return Err(Error::NotGroupLike(0));
    }
    let xi = xi.truncate(max_degree);
    let shifts: BTreeMap<Decoration, LinComb> = alphabet
        .letters()
        .iter()
        .map(|d| {
            let grown = xi.map_basis(|f| Forest::from(f.b_plus(d)));
            (d.clone(), (grown - LinComb::tree(&Tree::leaf(d.clone()))).truncate(max_degree))
        })
        .collect();
    let v = TranslationVector::new(shifts)?;
    let mut letters_agree = true;
    let mut witness = None;
    for i in alphabet.letters() {
        let leaf = Forest::from(Tree::leaf(i.clone()));
        let grafted = left_graft(&xi, &LinComb::basis(leaf.clone())).truncate(max_degree);
        letters_agree &= grafted == translate(&v, &LinComb::basis(leaf), max_degree);
        for j in alphabet.letters() {
            let edge = Forest::from(Tree::new(i.clone(), vec![Tree::leaf(j.clone())]));
            let x = LinComb::basis(edge.clone());
            let grafted = left_graft(&xi, &x).truncate(max_degree);
            let translated = translate(&v, &x, max_degree);
            if witness.is_none() && grafted != translated {
                witness = Some(DisjointnessWitness { forest: edge, grafted, translated });
            }
        }
    }
    Ok(DisjointnessReport { letters_agree, coincide: witness.is_none(), witness })
}

/// `T_v(a ∗ b) − T_v(a) ∗ T_v(b)`, truncated.
pub fn star_morphism_defect(v: &TranslationVector, a: &LinComb, b: &LinComb, max_degree: usize) -> LinComb {
    let lhs = translate(v, &gl_product(a, b).truncate(max_degree), max_degree);
    let rhs = gl_product(&translate(v, a, max_degree), &translate(v, b, max_degree)).truncate(max_degree);
    lhs - rhs
}

/// `T_v(ab) − T_v(a) T_v(b)`, truncated.
pub fn concat_morphism_defect(v: &TranslationVector, a: &LinComb, b: &LinComb, max_degree: usize) -> LinComb {
    let lhs = translate(v, &concat(a, b).truncate(max_degree), max_degree);
    let rhs = concat(&translate(v, a, max_degree), &translate(v, b, max_degree)).truncate(max_degree);
    lhs - rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::shuffle;
    use crate::embedding::gl_exp;
    use crate::forest::parse_forest;
    use crate::lincomb::{frac, int};
    use crate::report::all_passed;

    fn al() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d", "e", "f", "g", "i", "j", "k", "o"]).unwrap()
    }

    fn lc(s: &str) -> LinComb {
        LinComb::basis(parse_forest(s, &al()).unwrap())
    }

    fn t(a: &LinComb, b: &str) -> TensorElem {
        TensorElem::pair(a, &lc(b))
    }

    #[test]
    fn twelve_term_display() {
        let got = rho_graft(&lc("[a[b][c]][d[e]][f[g]]"));
        let (b, e, g, bc) = (lc("[b]"), lc("[e]"), lc("[g]"), lc("[b][c]"));
        let want = t(&LinComb::unit(), "[a[b][c]][d[e]][f[g]]")
            + t(&b, "[a[c]][d[e]][f[g]]")
            + t(&e, "[a[b][c]][d][f[g]]")
            + t(&g, "[a[b][c]][d[e]][f]")
            + t(&bc, "[a][d[e]][f[g]]")
            + t(&shuffle(&b, &e), "[a[c]][d][f[g]]")
            + t(&shuffle(&b, &g), "[a[c]][d[e]][f]")
            + t(&shuffle(&e, &g), "[a[b][c]][d][f]")
            + t(&shuffle(&bc, &e), "[a][d][f[g]]")
            + t(&shuffle(&bc, &g), "[a][d[e]][f]")
            + t(&shuffle(&shuffle(&b, &e), &g), "[a[c]][d][f]")
            + t(&shuffle(&shuffle(&bc, &e), &g), "[a][d][f]");
        assert_eq!(got, want);
    }

    #[test]
    fn small_values() {
        assert_eq!(rho_graft(&lc("[o]")), t(&LinComb::unit(), "[o]"));
        assert_eq!(rho_graft(&lc("[a[b]][c]")), t(&LinComb::unit(), "[a[b]][c]") + t(&lc("[b]"), "[a][c]"));
        assert_eq!(rho_graft(&LinComb::unit()), TensorElem::unit());
    }

    #[test]
    fn transposed_coproducts() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let duals = DualCoproducts::new(3, &a);
        for x in forests_up_to(3, &a) {
            assert_eq!(duals.concat(&x), crate::lincomb::deconcat_forest(&x));
            assert_eq!(duals.star(&x), crate::mkw::mkw_coproduct_forest(&x));
        }
        assert!(verify_rho_duality(3, &a).passed());
    }

    #[test]
    fn axioms_hold_and_corruption_is_caught() {
        assert!(all_passed(&verify_cointeraction(3, &Alphabet::plain())));
        assert!(all_passed(&verify_cotranslation_cosubstitution(3, &Alphabet::plain())));
        let duals = DualCoproducts::new(3, &Alphabet::plain());
        let corrupted = |f: &Forest| {
            let mut r = rho_graft_forest(f);
            if f.degree() == 2 {
                r.add_term((f.clone(), Forest::unit()), int(1));
            }
            r
        };
        let report = verify_cointeraction_with(&duals, &corrupted);
        assert!(!all_passed(&report));
        assert!(report.iter().any(|c| c.witness.as_deref().is_some_and(|w| w.contains("[o"))));
    }

    #[test]
    fn translation_examples() {
        let x = lc("[i[j]]") + lc("[a][b[c]]");
        assert_eq!(translate(&TranslationVector::zero(), &x, 4), x);
        let mut m = BTreeMap::new();
        m.insert(Decoration::new("i").unwrap(), lc("[k]"));
        let v = TranslationVector::new(m).unwrap();
        assert_eq!(translate(&v, &lc("[i]"), 3), lc("[i]") + lc("[k]"));
        assert_eq!(translate(&v, &lc("[i[j]]"), 3), lc("[i[j]]") + lc("[k[j]]"));
        let mut bad = BTreeMap::new();
        bad.insert(Decoration::new("i").unwrap(), lc("[a][b]"));
        assert!(matches!(TranslationVector::new(bad), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn translation_is_a_double_morphism() {
        let mut m = BTreeMap::new();
        m.insert(Decoration::new("a").unwrap(), lc("[b]").scale(&frac(1, 2)) + lc("[a[b]]"));
        m.insert(Decoration::new("b").unwrap(), lc("[a][b]") - lc("[b][a]"));
        let v = TranslationVector::new(m).unwrap();
        let xs = [lc("[a]"), lc("[b[a]]"), lc("[a][b]")];
        for x in &xs {
            for y in &xs {
                assert!(star_morphism_defect(&v, x, y, 4).is_zero(), "{x} ∗ {y}");
                assert!(concat_morphism_defect(&v, x, y, 4).is_zero(), "{x} · {y}");
            }
        }
    }

    #[test]
    fn disjointness() {
        let a = Alphabet::new(["a", "b", "c"]).unwrap();
        let one = disjointness_witness(&LinComb::unit(), &a, 4).unwrap();
        assert!(one.coincide && one.letters_agree);
        let xi = gl_exp(&lc("[c]").scale(&int(2)), 4);
        let r = disjointness_witness(&xi, &a, 4).unwrap();
        assert!(r.letters_agree);
        assert!(!r.coincide);
        assert!(matches!(disjointness_witness(&(LinComb::unit() + lc("[a][b]")), &a, 4), Err(Error::NotGroupLike(_))));
    }
}
