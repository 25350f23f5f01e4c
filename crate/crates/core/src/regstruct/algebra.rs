//! The enveloping product `⊙` on `𝔗`, deformed grafting and its Guin–Oudom
//! extension, the product `∗`, the dual coproduct `Δ_DMKW` and the map `φ`.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lincomb::Rational;

use super::tree::{
    enumerate_reg_trees_up_to, lower_root_adjacent, modify_at, raise_at, vertices, MultiIndex, RegComb, RegTensor,
    RegTree,
};

type Cache<K> = LazyLock<RwLock<HashMap<K, RegComb>>>;

static ASSOC: Cache<(RegTree, RegTree)> = LazyLock::new(|| RwLock::new(HashMap::new()));
static GRAFT: Cache<(RegTree, RegTree)> = LazyLock::new(|| RwLock::new(HashMap::new()));
static STAR: Cache<(RegTree, RegTree)> = LazyLock::new(|| RwLock::new(HashMap::new()));
static PHI: Cache<RegTree> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn cached<K: Clone + Eq + std::hash::Hash>(cache: &Cache<K>, key: &K, f: impl FnOnce() -> RegComb) -> RegComb {
    if let Some(v) = cache.read().expect("cache poisoned").get(key) {
        return v.clone();
    }
    let v = f();
    cache.write().expect("cache poisoned").insert(key.clone(), v.clone());
    v
}

/// `(X^m τ_1⋯τ_k) ⊙ (X^n σ_1⋯σ_l)`: the units `X^n` are moved left with
/// `τ X^i = X^i τ + ↓^i τ`, then the roots are merged.
pub fn assoc_product_trees(a: &RegTree, b: &RegTree) -> RegComb {
    cached(&ASSOC, &(a.clone(), b.clone()), || {
        let d = a.dim();
        let mut acc = RegComb::basis(a.clone());
        for c in b.deco.unit_steps() {
            let e = MultiIndex::unit(d, c);
            acc = acc.map_linear(|t| {
                let mut out = lower_root_adjacent(&RegComb::basis(t.clone()), &e);
                out.add_term(t.with_deco(t.deco.add(&e)), Rational::one());
                out
            });
        }
        acc.map_basis(|t| {
            let mut branches = t.branches.clone();
            branches.extend(b.branches.iter().cloned());
            t.with_branches(branches)
        })
    })
}

pub fn reg_assoc_product(x: &RegComb, y: &RegComb) -> RegComb {
    x.bilinear(y, assoc_product_trees)
}

/// `[x, y]_0 = x ⊙ y − y ⊙ x`.
pub fn bracket0(x: &RegComb, y: &RegComb) -> RegComb {
    reg_assoc_product(x, y) - reg_assoc_product(y, x)
}

/// `Δ_⧢` on a tree: the units split binomially, the planted factors by subsets.
pub fn reg_deshuffle_tree(t: &RegTree) -> RegTensor {
    let k = t.branches.len();
    let mut out = RegTensor::zero();
    for m1 in t.deco.below() {
        let c = t.deco.binomial(&m1);
        let m2 = t.deco.checked_sub(&m1).expect("m1 ≤ m");
        for mask in 0u64..(1u64 << k) {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            for (i, b) in t.branches.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    l.push(b.clone());
                } else {
                    r.push(b.clone());
                }
            }
            out.add_term((RegTree { deco: m1.clone(), branches: l }, RegTree { deco: m2.clone(), branches: r }), c.clone());
        }
    }
    out
}

pub fn reg_deshuffle(x: &RegComb) -> RegTensor {
    x.map_linear(reg_deshuffle_tree)
}

/// Whether `x` lies in `𝒱`, i.e. is primitive for `Δ_⧢`.
pub fn is_reg_primitive(x: &RegComb) -> bool {
    let Some(d) = x.keys().next().map(RegTree::dim) else {
        return true;
    };
    let one = RegComb::basis(RegTree::unit(d));
    let prim = x.bilinear(&one, |a, b| RegTensor::basis((a.clone(), b.clone())))
        + one.bilinear(x, |a, b| RegTensor::basis((a.clone(), b.clone())));
    x.coeff(&RegTree::unit(d)).is_zero() && reg_deshuffle(x) == prim
}

/// A letter of `𝒱` acting on one planted branch `I_b(τ_2)`.
fn letter_on_branch(x: &RegTree, (b, t2): &(MultiIndex, RegTree)) -> Vec<((MultiIndex, RegTree), Rational)> {
    let mut out = Vec::new();
    if x.branches.is_empty() {
        for v in 0..t2.vertex_count() {
            out.push(((b.clone(), raise_at(t2, v, &x.deco)), Rational::one()));
        }
        return out;
    }
    let (a, t1) = &x.branches[0];
    for path in vertices(t2) {
        let n = super::tree::at_path(t2, &path).deco.clone();
        for l in n.below() {
            let Some(edge) = a.checked_sub(&l) else {
                continue;
            };
            let lowered = n.checked_sub(&l).expect("ℓ ≤ n_v");
            let grown = modify_at(t2, &path, &|node| {
                let mut branches = vec![(edge.clone(), t1.clone())];
                branches.extend(node.branches.iter().cloned());
                RegTree { deco: lowered.clone(), branches }
            });
            out.push(((b.clone(), grown), n.binomial(&l)));
        }
    }
    out
}

/// A letter acting on a tree as a derivation over its planted factors; unit
/// factors are annihilated.
fn letter_act(x: &RegTree, t: &RegTree) -> RegComb {
    let mut out = RegComb::zero();
    for (i, branch) in t.branches.iter().enumerate() {
        for (nb, c) in letter_on_branch(x, branch) {
            let mut branches = t.branches.clone();
            branches[i] = nb;
            out.add_term(t.with_branches(branches), c);
        }
    }
    out
}

/// `A ⊲̂̂ B` on `𝔗`, through the Guin–Oudom recursion on the first letter of
/// `A`: `(xA′) ⊲ B = x ⊲ (A′ ⊲ B) − (x ⊲ A′) ⊲ B`.
pub fn reg_graft_trees(a: &RegTree, b: &RegTree) -> RegComb {
    if a.is_unit() {
        return RegComb::basis(b.clone());
    }
    if b.is_unit() {
        return RegComb::zero();
    }
    if a.is_letter() {
        return letter_act(a, b);
    }
    cached(&GRAFT, &(a.clone(), b.clone()), || {
        let (x, rest) = split_first_letter(a);
        let first = reg_graft_trees(&rest, b).map_linear(|t| letter_act(&x, t));
        let second = letter_act(&x, &rest).map_linear(|t| reg_graft_trees(t, b));
        first - second
    })
}

/// `a = x ⊙ rest` with `x` a letter: units first, then the leftmost branch.
fn split_first_letter(a: &RegTree) -> (RegTree, RegTree) {
    match a.deco.first_nonzero() {
        Some(c) => {
            let e = MultiIndex::unit(a.dim(), c);
            let rest = a.with_deco(a.deco.checked_sub(&e).expect("component is nonzero"));
            (RegTree::x(e), rest)
        }
        None => {
            let (edge, t) = a.branches[0].clone();
            (RegTree::planted(edge, t), a.with_branches(a.branches[1..].to_vec()))
        }
    }
}

pub fn reg_graft(x: &RegComb, y: &RegComb) -> RegComb {
    x.bilinear(y, reg_graft_trees)
}

/// `⊲̂̂` restricted to `𝒱 × 𝒱`.
pub fn deformed_graft(x: &RegComb, y: &RegComb) -> Result<RegComb> {
    for (name, z) in [("left", x), ("right", y)] {
        if !is_reg_primitive(z) {
            return Err(Error::Domain(format!("{name} argument {z} is not in 𝒱")));
        }
    }
    Ok(reg_graft(x, y))
}

/// `ω_1 ∗ ω_2 = (ω_1)_(1) ⊙ ((ω_1)_(2) ⊲̂̂ ω_2)`.
pub fn reg_gl_product_trees(a: &RegTree, b: &RegTree) -> RegComb {
    if a.is_unit() {
        return RegComb::basis(b.clone());
    }
    if b.is_unit() {
        return RegComb::basis(a.clone());
    }
    cached(&STAR, &(a.clone(), b.clone()), || {
        let mut out = RegComb::zero();
        for ((a1, a2), c) in &reg_deshuffle_tree(a) {
            let grafted = reg_graft_trees(a2, b);
            out.add_scaled(&RegComb::basis(a1.clone()).bilinear(&grafted, assoc_product_trees), c);
        }
        out
    })
}

pub fn reg_gl_product(x: &RegComb, y: &RegComb) -> RegComb {
    x.bilinear(y, reg_gl_product_trees)
}

/// Dimension, decoration-norm cap and `reg_degree` cap of a finite window on `𝔗`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegCaps {
    pub dim: usize,
    pub max_norm: usize,
    pub max_degree: usize,
}

impl Default for RegCaps {
    fn default() -> Self {
        RegCaps { dim: 1, max_norm: 2, max_degree: 3 }
    }
}

impl RegCaps {
    pub fn basis(&self) -> Vec<RegTree> {
        enumerate_reg_trees_up_to(self.max_degree, self.dim, self.max_norm)
    }

    pub fn contains(&self, t: &RegTree) -> bool {
        t.dim() == self.dim && t.reg_degree() <= self.max_degree && t.max_norm() <= self.max_norm
    }

    fn check(&self, x: &RegComb) -> Result<()> {
        match x.keys().find(|t| !self.contains(t)) {
            None => Ok(()),
            Some(t) => Err(Error::DegreeCap { requested: t.reg_degree().max(t.max_norm()), cap: self.max_degree }),
        }
    }
}

/// `Δ_DMKW` on the capped window, as the transpose of `∗` under the Kronecker
/// pairing: `⟨A ∗ B, x⟩ = ⟨A ⊗ B, Δ_DMKW(x)⟩` for `A`, `B` in the window with
/// `reg_degree(A) + reg_degree(B) ≤ max_degree`.
pub struct DeformedMkw {
    caps: RegCaps,
    table: HashMap<RegTree, RegTensor>,
}

impl DeformedMkw {
    pub fn new(caps: RegCaps) -> Self {
        let basis = caps.basis();
        let mut table: HashMap<RegTree, RegTensor> = HashMap::new();
        for a in &basis {
            for b in basis.iter().filter(|b| a.reg_degree() + b.reg_degree() <= caps.max_degree) {
                for (x, c) in &reg_gl_product_trees(a, b) {
                    if caps.contains(x) {
                        table.entry(x.clone()).or_default().add_term((a.clone(), b.clone()), c.clone());
                    }
                }
            }
        }
        DeformedMkw { caps, table }
    }

    pub fn caps(&self) -> RegCaps {
        self.caps
    }

    pub fn coproduct_tree(&self, t: &RegTree) -> Result<RegTensor> {
        self.caps.check(&RegComb::basis(t.clone()))?;
        Ok(self.table.get(t).cloned().unwrap_or_default())
    }

    pub fn coproduct(&self, x: &RegComb) -> Result<RegTensor> {
        x.try_map_linear(|t| self.coproduct_tree(t))
    }
}

/// `φ`: the identity on `𝔅` and `φ(ω_1 ∗ ω_2) = φ(ω_1) ⊙ φ(ω_2)`, evaluated
/// by peeling a generator `g` off each tree and rewriting `t = g ∗ rest − r`
/// where `r` has a smaller root decoration or fewer root edges.
pub fn phi_reg_tree(t: &RegTree) -> RegComb {
    if t.is_unit() || t.is_letter() || t.branches.is_empty() {
        return RegComb::basis(t.clone());
    }
    cached(&PHI, t, || {
        let (g, rest) = if t.deco.is_zero() {
            let (edge, sub) = t.branches[0].clone();
            (RegTree::planted(edge, sub), t.with_branches(t.branches[1..].to_vec()))
        } else {
            (RegTree::x(t.deco.clone()), t.with_deco(MultiIndex::zero(t.dim())))
        };
        let mut remainder = reg_gl_product_trees(&g, &rest);
        debug_assert!(remainder.coeff(t).is_one());
        remainder.add_term(t.clone(), -Rational::one());
        let lead = RegComb::basis(g).bilinear(&phi_reg_tree(&rest), assoc_product_trees);
        lead - remainder.map_linear(phi_reg_tree)
    })
}

pub fn phi_reg(x: &RegComb) -> RegComb {
    x.map_linear(phi_reg_tree)
}

/// Orders the window by root-decoration norm, then root-edge count; `φ` is
/// unitriangular in this order.
pub fn phi_reg_order(caps: &RegCaps) -> Vec<RegTree> {
    let mut basis = caps.basis();
    basis.sort_by_key(|t| (t.deco.norm(), t.branches.len(), t.clone()));
    basis
}

/// The matrix of `φ` on the capped window in [`phi_reg_order`].
pub fn phi_reg_matrix(caps: &RegCaps) -> Result<(Matrix, Vec<RegTree>)> {
    let basis = phi_reg_order(caps);
    let columns: Vec<RegComb> = basis.iter().map(phi_reg_tree).collect();
    for c in &columns {
        caps.check(c)?;
    }
    Ok((Matrix::from_columns(&columns, Some(&basis)).0, basis))
}

/// `φ^{-1}` on the capped window by inverting the matrix of `φ`.
pub fn phi_reg_inverse(x: &RegComb, caps: &RegCaps) -> Result<RegComb> {
    caps.check(x)?;
    let (m, basis) = phi_reg_matrix(caps)?;
    let inv = m.inverse().ok_or(Error::Singular(caps.max_degree))?;
    let index: HashMap<&RegTree, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut out = RegComb::zero();
    for (t, c) in x {
        let j = index[t];
        for (i, b) in basis.iter().enumerate() {
            let v = &inv[(i, j)];
            if !v.is_zero() {
                out.add_term(b.clone(), v * c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::int;
    use crate::regstruct::tree::{parse_reg_tree, raise};

    fn t(s: &str) -> RegTree {
        parse_reg_tree(s, 1).unwrap()
    }

    fn c(s: &str) -> RegComb {
        RegComb::basis(t(s))
    }

    fn x(n: u32) -> RegComb {
        RegComb::basis(RegTree::x(MultiIndex::new(vec![n])))
    }

    #[test]
    fn units_multiply() {
        assert_eq!(reg_gl_product(&x(1), &x(1)), x(2));
        assert_eq!(reg_gl_product(&x(1), &x(2)), x(3));
        assert_eq!(reg_assoc_product(&x(1), &x(2)), x(3));
        assert_eq!(reg_gl_product(&c("1"), &c("[o[o]{a=1}]")), c("[o[o]{a=1}]"));
    }

    #[test]
    fn enveloping_product() {
        assert_eq!(reg_assoc_product(&x(1), &c("[o[o]{a=1}]")), c("[o{1}[o]{a=1}]"));
        assert_eq!(reg_assoc_product(&c("[o[o]{a=1}]"), &x(1)), c("[o{1}[o]{a=1}]") + c("[o[o]]"));
        assert_eq!(reg_assoc_product(&c("[o[o]]"), &c("[o[o[o]]]")), c("[o[o][o[o]]]"));
    }

    #[test]
    fn graft_letters() {
        assert_eq!(reg_graft(&x(1), &c("[o[o]{a=1}]")), c("[o[o{1}]{a=1}]"));
        assert!(reg_graft(&c("[o[o]]"), &x(1)).is_zero());
        let got = deformed_graft(&c("[o[o]{a=1}]"), &c("[o[o{1}]]")).unwrap();
        assert_eq!(got, c("[o[o{1}[o]{a=1}]]") + c("[o[o[o]]]"));
        assert!(deformed_graft(&c("[o[o][o]]"), &c("[o[o]]")).is_err());
        let plain = deformed_graft(&c("[o[o]]"), &c("[o[o[o]]]")).unwrap();
        assert_eq!(plain, c("[o[o[o][o]]]") + c("[o[o[o[o]]]]"));
    }

    #[test]
    fn bracket_lowering() {
        let p = c("[o[o]{a=1}]");
        let q = c("[o[o[o]]{a=2}]");
        let lhs = bracket0(&bracket0(&p, &q), &x(1));
        let rhs = bracket0(&c("[o[o]]"), &q) + bracket0(&p, &c("[o[o[o]]{a=1}]"));
        assert_eq!(lhs, rhs);
        assert!(bracket0(&x(1), &x(1)).is_zero());
    }

    #[test]
    fn unit_times_planted() {
        let w = t("[o[o]{a=1}]");
        let p = RegComb::basis(RegTree::planted(MultiIndex::new(vec![1]), w.clone()));
        let raised = |n: u32| {
            raise(&RegComb::basis(w.clone()), &MultiIndex::new(vec![n]))
                .map_basis(|s| RegTree::planted(MultiIndex::new(vec![1]), s.clone()))
        };
        let want = reg_assoc_product(&x(1), &p) + raised(1);
        assert_eq!(reg_gl_product(&x(1), &p), want);
        let want2 = reg_assoc_product(&x(2), &p) + reg_assoc_product(&x(1), &raised(1)).scale(&int(2)) + raised(2);
        assert_eq!(reg_gl_product(&x(2), &p), want2);
    }

    #[test]
    fn phi_on_generators_and_units() {
        for s in ["[o{1}]", "[o[o]{a=2}]", "[o[o{1}[o]]]"] {
            assert_eq!(phi_reg(&c(s)), c(s));
        }
        assert_eq!(phi_reg(&reg_gl_product(&x(1), &x(1))), reg_assoc_product(&x(1), &x(1)));
    }

    #[test]
    fn phi_is_bijective_but_not_multiplicative() {
        let caps = RegCaps::default();
        let (m, _) = phi_reg_matrix(&caps).unwrap();
        assert!(m.is_unitriangular());
        let y = c("[o[o][o{1}]]") + c("[o{1}[o]]");
        assert_eq!(phi_reg(&phi_reg_inverse(&y, &caps).unwrap()), y);

        // P∗X − X∗P = ↓P − ↑P while P⊙X − X⊙P = ↓P, so no map fixing 𝔅 is multiplicative.
        let (p, x1) = (c("[o[o]]"), x(1));
        let comm = reg_gl_product(&p, &x1) - reg_gl_product(&x1, &p);
        assert_eq!(comm, -c("[o[o{1}]]"));
        let comm0 = reg_assoc_product(&p, &x1) - reg_assoc_product(&x1, &p);
        assert!(comm0.is_zero());
        assert_ne!(phi_reg(&reg_gl_product(&p, &x1)), reg_assoc_product(&phi_reg(&p), &phi_reg(&x1)));
        assert_eq!(phi_reg(&reg_gl_product(&x1, &p)), reg_assoc_product(&phi_reg(&x1), &phi_reg(&p)));
    }

    #[test]
    fn dmkw_small() {
        let dm = DeformedMkw::new(RegCaps::default());
        let v = dm.coproduct(&c("[o[o]]")).unwrap();
        assert_eq!(v.coeff(&(t("1"), t("[o[o]]"))), int(1));
        assert_eq!(v.coeff(&(t("[o[o]]"), t("1"))), int(1));
        let x2 = dm.coproduct(&x(2)).unwrap();
        assert_eq!(x2.coeff(&(t("[o{1}]"), t("[o{1}]"))), int(1));
        assert!(dm.coproduct(&c("[o[o[o[o[o]]]]]")).is_err());
    }
}
