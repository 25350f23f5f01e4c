//! Planar regularity structures: decorated trees as the enveloping algebra
//! of the deformed post-Lie algebra `(𝒱, ⊲̂̂, [·,·]_0)`, the recentering
//! product `∗`, its dual coproduct and the quotient-tensor isomorphism `φ`.

mod algebra;
mod tree;

pub use algebra::{
    assoc_product_trees, bracket0, deformed_graft, is_reg_primitive, phi_reg, phi_reg_inverse, phi_reg_matrix,
    phi_reg_order, phi_reg_tree, reg_assoc_product, reg_deshuffle, reg_deshuffle_tree, reg_gl_product,
    reg_gl_product_trees, reg_graft, reg_graft_trees, DeformedMkw, RegCaps,
};
pub use tree::{
    enumerate_reg_trees, enumerate_reg_trees_up_to, lower_root_adjacent, parse_reg_tree, raise, raise_at, MultiIndex,
    RegComb, RegTensor, RegTree,
};

use crate::report::Check;

/// Generators of `𝒱` in the window: unit vertices and planted trees.
pub fn letters(max_degree: usize, dim: usize, max_norm: usize) -> Vec<RegTree> {
    enumerate_reg_trees_up_to(max_degree, dim, max_norm).into_iter().filter(RegTree::is_letter).collect()
}

fn basis(t: &RegTree) -> RegComb {
    RegComb::basis(t.clone())
}

/// `(postLie1)` and `(postLie2)` for `(𝒱, ⊲̂̂, [·,·]_0)` on generator triples
/// with `reg_degree` sum at most `max_degree`.
pub fn verify_deformed_post_lie(max_degree: usize, dim: usize, max_norm: usize) -> Vec<Check> {
    let gens = letters(max_degree, dim, max_norm);
    let mut derivation = Check::new("x⊲[y,z]_0 = [x⊲y,z]_0 + [y,x⊲z]_0");
    let mut associator = Check::new("[x,y]_0⊲z = a(x,y,z) − a(y,x,z)");
    let assoc = |x: &RegComb, y: &RegComb, z: &RegComb| {
        reg_graft(x, &reg_graft(y, z)) - reg_graft(&reg_graft(x, y), z)
    };
    for x in &gens {
        for y in &gens {
            for z in &gens {
                if x.reg_degree() + y.reg_degree() + z.reg_degree() > max_degree {
                    continue;
                }
                let (x, y, z) = (basis(x), basis(y), basis(z));
                let lhs = reg_graft(&x, &bracket0(&y, &z));
                let rhs = bracket0(&reg_graft(&x, &y), &z) + bracket0(&y, &reg_graft(&x, &z));
                derivation.record(lhs == rhs, || format!("x = {x}, y = {y}, z = {z}: {lhs} vs {rhs}"));
                let lhs = reg_graft(&bracket0(&x, &y), &z);
                let rhs = assoc(&x, &y, &z) - assoc(&y, &x, &z);
                associator.record(lhs == rhs, || format!("x = {x}, y = {y}, z = {z}: {lhs} vs {rhs}"));
            }
        }
    }
    vec![derivation, associator]
}

/// Associativity of `⊙` and `∗`, Jacobi for `[·,·]_0`, exactness and
/// coassociativity of `Δ_DMKW`, bijectivity of `φ` and its morphism property,
/// and the commuting units.
pub fn verify_regstruct_algebra(caps: &RegCaps) -> Vec<Check> {
    let window = caps.basis();
    let n = caps.max_degree;
    let mut triples = Vec::new();
    for a in &window {
        for b in &window {
            for c in window.iter().filter(|c| a.reg_degree() + b.reg_degree() + c.reg_degree() <= n) {
                triples.push((a, b, c));
            }
        }
    }
    let mut odot = Check::new("(a⊙b)⊙c = a⊙(b⊙c)");
    let mut star = Check::new("(a∗b)∗c = a∗(b∗c)");
    for (a, b, c) in triples {
        let (a, b, c) = (basis(a), basis(b), basis(c));
        let l = reg_assoc_product(&reg_assoc_product(&a, &b), &c);
        let r = reg_assoc_product(&a, &reg_assoc_product(&b, &c));
        odot.record(l == r, || format!("{a}, {b}, {c}"));
        let l = reg_gl_product(&reg_gl_product(&a, &b), &c);
        let r = reg_gl_product(&a, &reg_gl_product(&b, &c));
        star.record(l == r, || format!("{a}, {b}, {c}"));
    }

    let mut jacobi = Check::new("Jacobi for [·,·]_0");
    let gens = letters(n, caps.dim, caps.max_norm);
    for x in &gens {
        for y in &gens {
            for z in gens.iter().filter(|z| x.reg_degree() + y.reg_degree() + z.reg_degree() <= n + 1) {
                let (x, y, z) = (basis(x), basis(y), basis(z));
                let s = bracket0(&x, &bracket0(&y, &z)) + bracket0(&y, &bracket0(&z, &x)) + bracket0(&z, &bracket0(&x, &y));
                jacobi.record(s.is_zero(), || format!("{x}, {y}, {z}: {s}"));
            }
        }
    }

    let dmkw = DeformedMkw::new(*caps);
    let mut duality = Check::new("<A∗B, x> = <A⊗B, Δ_DMKW(x)>");
    for a in &window {
        for b in window.iter().filter(|b| a.reg_degree() + b.reg_degree() <= n) {
            let prod = reg_gl_product_trees(a, b);
            for x in &window {
                let lhs = prod.coeff(x);
                let rhs = dmkw.coproduct_tree(x).map(|d| d.coeff(&(a.clone(), b.clone())));
                duality.record(rhs.as_ref() == Ok(&lhs), || format!("A = {a}, B = {b}, x = {x}: {lhs} vs {rhs:?}"));
            }
        }
    }
    let mut counit = Check::new("(id⊗ε)Δ_DMKW = id");
    let mut coassoc = Check::new("(Δ_DMKW⊗id)Δ_DMKW = (id⊗Δ_DMKW)Δ_DMKW");
    let unit = RegTree::unit(caps.dim);
    for x in &window {
        let d = dmkw.coproduct_tree(x).expect("window element");
        let left: RegComb = d.iter().filter(|((_, r), _)| *r == unit).map(|((l, _), c)| (l.clone(), c.clone())).collect();
        counit.record(left == basis(x), || format!("x = {x}: {left}"));
        let lhs = expand(&d, 0, &dmkw);
        let rhs = expand(&d, 1, &dmkw);
        coassoc.record(lhs == rhs, || format!("x = {x}"));
    }

    let mut bijective = Check::new("φ unitriangular on the window");
    match phi_reg_matrix(caps) {
        Ok((m, _)) => bijective.record(m.is_unitriangular(), || "matrix of φ is not unitriangular".into()),
        Err(e) => bijective.record(false, || e.to_string()),
    }
    let mut morphism = Check::new("φ(A∗B) = φ(A)⊙φ(B)");
    for a in &window {
        for b in window.iter().filter(|b| a.reg_degree() + b.reg_degree() <= n) {
            let (ra, rb) = (basis(a), basis(b));
            let lhs = phi_reg(&reg_gl_product(&ra, &rb));
            let rhs = reg_assoc_product(&phi_reg(&ra), &phi_reg(&rb));
            morphism.record(lhs == rhs, || format!("A = {a}, B = {b}"));
        }
    }

    let mut units = Check::new("X^i∗X^j = X^{i+j} = X^j∗X^i");
    for i in 0..caps.dim {
        for j in 0..caps.dim {
            let (ei, ej) = (MultiIndex::unit(caps.dim, i), MultiIndex::unit(caps.dim, j));
            let (xi, xj) = (basis(&RegTree::x(ei.clone())), basis(&RegTree::x(ej.clone())));
            let sum = basis(&RegTree::x(ei.add(&ej)));
            let l = reg_gl_product(&xi, &xj);
            let r = reg_gl_product(&xj, &xi);
            units.record(l == sum && r == sum, || format!("i = {i}, j = {j}: {l} vs {r}"));
        }
    }
    vec![odot, star, jacobi, duality, counit, coassoc, bijective, morphism, units]
}

/// Applies `Δ_DMKW` to leg `leg` of a two-leg tensor, keeping only triples of
/// total `reg_degree` inside the window.
fn expand(d: &RegTensor, leg: usize, dmkw: &DeformedMkw) -> crate::lincomb::Comb<(RegTree, RegTree, RegTree)> {
    let n = dmkw.caps().max_degree;
    let mut out = crate::lincomb::Comb::zero();
    for ((l, r), c) in d {
        let split = if leg == 0 { l } else { r };
        for ((s1, s2), c2) in &dmkw.coproduct_tree(split).expect("window element") {
            let key = if leg == 0 { (s1.clone(), s2.clone(), r.clone()) } else { (l.clone(), s1.clone(), s2.clone()) };
            if key.0.reg_degree() + key.1.reg_degree() + key.2.reg_degree() <= n {
                out.add_term(key, c * c2);
            }
        }
    }
    out
}
