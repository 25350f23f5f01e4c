//! Natural growth on the MKW Hopf algebra and everything built from it:
//! the primitive projection, primitive degree, the decomposition through the
//! maps `F_i`, cocycles `B_+^p`, the graded shuffle structure, comodules
//! `C_(p_ij)` and coalgebra endomorphisms `Φ_(u_i)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{LazyLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forest::{enumerate_forests, Alphabet, Forest, Tree};
use crate::linalg::{to_combs, Matrix};
use crate::lincomb::{Comb, LinComb, MultiTensor, Rational, TensorElem};
use crate::mkw::{iterated_reduced_coproduct, mkw_coproduct, reduced_coproduct};

static GROWTH_CACHE: LazyLock<RwLock<HashMap<(Forest, Forest), LinComb>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static PI_CACHE: LazyLock<RwLock<HashMap<Forest, LinComb>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static PRIMITIVE_BASIS: LazyLock<RwLock<HashMap<(usize, Alphabet), Vec<LinComb>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Interleavings of `roots` (order kept) with `children` (order kept).
fn interleave(roots: &[Tree], children: &[Tree], buf: &mut Vec<Tree>, out: &mut Vec<Vec<Tree>>) {
    if roots.is_empty() || children.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(roots);
        w.extend_from_slice(children);
        out.push(w);
        return;
    }
    buf.push(roots[0].clone());
    interleave(&roots[1..], children, buf, out);
    buf.pop();
    buf.push(children[0].clone());
    interleave(roots, &children[1..], buf, out);
    buf.pop();
}

/// `Σ_v ω ⊤_v t` over the vertices of one tree.
fn grow_tree(roots: &[Tree], t: &Tree, out: &mut Vec<Tree>) {
    let mut placements = Vec::new();
    interleave(roots, t.children(), &mut Vec::new(), &mut placements);
    for kids in placements {
        out.push(t.with_children(kids));
    }
    for (i, c) in t.children().iter().enumerate() {
        let mut sub = Vec::new();
        grow_tree(roots, c, &mut sub);
        for g in sub {
            let mut kids = t.children().to_vec();
            kids[i] = g;
            out.push(t.with_children(kids));
        }
    }
}

/// `ω1 ⊤ ω2` on basis forests; `ω2` must be non-empty.
pub fn natural_growth_forests(a: &Forest, b: &Forest) -> Result<LinComb> {
    if b.is_unit() {
        return Err(Error::EmptyGrowthTarget);
    }
    if a.is_unit() {
        return Ok(LinComb::basis(b.clone()));
    }
    let key = (a.clone(), b.clone());
    if let Some(v) = GROWTH_CACHE.read().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let weight = Rational::new(1.into(), (b.degree() as i64).into());
    let mut out = LinComb::zero();
    for (i, t) in b.trees().iter().enumerate() {
        let mut grown = Vec::new();
        grow_tree(a.trees(), t, &mut grown);
        for g in grown {
            let mut trees = b.trees().to_vec();
            trees[i] = g;
            out.add_term(Forest::new(trees), weight.clone());
        }
    }
    GROWTH_CACHE.write().expect("cache poisoned").insert(key, out.clone());
    Ok(out)
}

/// Bilinear natural growth `ω1 ⊤ ω2`, normalised per homogeneous component of
/// `ω2`.
pub fn natural_growth(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for (fa, ca) in a {
        for (fb, cb) in b {
            out.add_scaled(&natural_growth_forests(fa, fb)?, &(ca * cb));
        }
    }
    Ok(out)
}

/// The primitive projection `π(x) = x − x^(1) ⊤ π(x^(2))`, with `π(1) = 0`.
pub fn primitive_projection_forest(f: &Forest) -> LinComb {
    if f.is_unit() {
        return LinComb::zero();
    }
    if let Some(v) = PI_CACHE.read().expect("cache poisoned").get(f) {
        return v.clone();
    }
    let mut out = LinComb::basis(f.clone());
    for ((l, r), c) in &reduced_coproduct(&LinComb::basis(f.clone())) {
        let p = primitive_projection_forest(r);
        let g = natural_growth(&LinComb::basis(l.clone()), &p).expect("reduced legs are non-empty");
        out.add_scaled(&g, &-c);
    }
    PI_CACHE.write().expect("cache poisoned").insert(f.clone(), out.clone());
    out
}

pub fn primitive_projection(x: &LinComb) -> LinComb {
    x.map_linear(primitive_projection_forest)
}

pub fn is_primitive(x: &LinComb) -> bool {
    x.counit().is_zero() && reduced_coproduct(x).is_zero()
}

/// The least `k` with `Δ̂^k(x) = 0`.
pub fn primitive_degree(x: &LinComb) -> Result<usize> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut t = x.augmentation_part().map_basis(|f| vec![f.clone()]);
    if t.is_zero() {
        return Ok(0);
    }
    let mut k = 0;
    while !t.is_zero() {
        t = t.expand_leg(k, |f| crate::mkw::mkw_coproduct_forest(f).reduced());
        k += 1;
    }
    Ok(k)
}

/// `F_i(l_0 ⊗ ⋯ ⊗ l_{i−1}) = (l_0 ⊤ ⋯ ⊤ l_{i−2}) ⊤ l_{i−1}`, extended multilinearly.
/// Leg 0 carries `p_i` and the last leg carries `p_1`.
pub fn f_map(t: &MultiTensor) -> LinComb {
    t.map_linear(|legs| {
        let mut acc = LinComb::basis(legs[0].clone());
        for l in &legs[1..] {
            acc = natural_growth(&acc, &LinComb::basis(l.clone())).expect("legs of F are non-empty");
        }
        acc
    })
}

/// Evaluates `p_i ⊤ ⋯ ⊤ p_1` for letters given as `[p_i, …, p_1]`.
pub fn growth_word(letters: &[LinComb]) -> Result<LinComb> {
    let Some((first, rest)) = letters.split_first() else {
        return Ok(LinComb::unit());
    };
    let mut acc = first.clone();
    for p in rest {
        acc = natural_growth(&acc, p)?;
    }
    Ok(acc)
}

fn legs_primitive(t: &MultiTensor, n: usize) -> bool {
    (0..n).all(|i| t.expand_leg(i, |f| crate::mkw::mkw_coproduct_forest(f).reduced()).is_zero())
}

/// Writes `x` (no unit component) as `Σ_j F_j(t_j)` with `t_j ∈ P^{⊗j}`,
/// top level first.
pub fn f_decompose(x: &LinComb) -> Result<Vec<(usize, MultiTensor)>> {
    let mut rest = x.augmentation_part();
    let mut out = Vec::new();
    let mut guard = x.max_degree().unwrap_or(0) + 1;
    while !rest.is_zero() {
        if guard == 0 {
            return Err(Error::Invariant("f_decompose did not terminate".into()));
        }
        guard -= 1;
        let m = primitive_degree(&rest)?;
        let t = iterated_reduced_coproduct(&rest, m - 1);
        if !legs_primitive(&t, m) {
            return Err(Error::Invariant(format!("Δ̂^{}(x) has a non-primitive leg", m - 1)));
        }
        rest -= &f_map(&t);
        out.push((m, t));
    }
    Ok(out)
}

/// `B_+^p(x) = x ⊤ p` for primitive `p`.
pub fn cocycle_bplus(x: &LinComb, p: &LinComb) -> Result<LinComb> {
    if !is_primitive(p) {
        return Err(Error::NotPrimitive(p.to_string()));
    }
    natural_growth(x, p)
}

/// A basis of the primitive elements of degree `n`, from the kernel of `Δ̂`.
pub fn primitive_basis(n: usize, alphabet: &Alphabet) -> Vec<LinComb> {
    let key = (n, alphabet.clone());
    if let Some(v) = PRIMITIVE_BASIS.read().expect("cache poisoned").get(&key) {
        return v.clone();
    }
    let basis = if n == 0 {
        Vec::new()
    } else {
        let forests = enumerate_forests(n, alphabet);
        let images: Vec<TensorElem> =
            forests.iter().map(|f| reduced_coproduct(&LinComb::basis(f.clone()))).collect();
        let (m, _) = Matrix::from_columns(&images, None);
        to_combs(&m.kernel(), &forests)
    };
    PRIMITIVE_BASIS.write().expect("cache poisoned").insert(key, basis.clone());
    basis
}

/// Interleavings of two words, summed with multiplicity.
pub fn gr_shuffle<L: Ord + Clone>(w1: &[L], w2: &[L]) -> Comb<Vec<L>> {
    fn rec<L: Ord + Clone>(a: &[L], b: &[L], buf: &mut Vec<L>, out: &mut Comb<Vec<L>>) {
        if a.is_empty() || b.is_empty() {
            let mut w = buf.clone();
            w.extend_from_slice(a);
            w.extend_from_slice(b);
            out.add_term(w, Rational::one());
            return;
        }
        buf.push(a[0].clone());
        rec(&a[1..], b, buf, out);
        buf.pop();
        buf.push(b[0].clone());
        rec(a, &b[1..], buf, out);
        buf.pop();
    }
    let mut out = Comb::zero();
    rec(w1, w2, &mut Vec::new(), &mut out);
    out
}

/// Splits a word at every position.
pub fn gr_deconcat<L: Ord + Clone>(w: &[L]) -> Comb<(Vec<L>, Vec<L>)> {
    (0..=w.len()).map(|i| ((w[..i].to_vec(), w[i..].to_vec()), Rational::one())).collect()
}

/// Legwise shuffle of multi-tensors: the product of `gr(H)` in `F`-coordinates.
pub fn shuffle_legs(a: &MultiTensor, b: &MultiTensor) -> MultiTensor {
    a.bilinear(b, |x, y| gr_shuffle(x, y))
}

/// The product of `gr(H)` transported to `H` through the `F`-decomposition.
pub fn gr_product(x: &LinComb, y: &LinComb) -> Result<LinComb> {
    let mut out = LinComb::zero();
    let (cx, cy) = (x.counit(), y.counit());
    out.add_scaled(y, &cx);
    out.add_scaled(&x.augmentation_part(), &cy);
    let dx = f_decompose(x)?;
    let dy = f_decompose(y)?;
    for (_, tx) in &dx {
        for (_, ty) in &dy {
            out += &f_map(&shuffle_legs(tx, ty));
        }
    }
    Ok(out)
}

/// The coaction of the comodule `C_(p_ij)`: row `i` maps `j` to the
/// coefficient of `e_j` in `Δ_C(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coaction {
    pub rows: Vec<BTreeMap<usize, LinComb>>,
}

/// Decompositions of `{lo..=hi}` into consecutive intervals, in left-to-right order.
fn interval_decompositions(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for end in lo..=hi {
        for mut tail in interval_decompositions(end + 1, hi) {
            tail.insert(0, (lo, end));
            out.push(tail);
        }
    }
    out
}

/// Builds `Δ_C(e_0), …, Δ_C(e_n)` from primitives `p_(i,j)`, `1 ≤ i ≤ j ≤ n`.
pub fn comodule_coaction(n: usize, family: &BTreeMap<(usize, usize), LinComb>) -> Result<Coaction> {
    for i in 1..=n {
        for j in i..=n {
            if !family.contains_key(&(i, j)) {
                return Err(Error::IncompleteFamily(i, j));
            }
        }
    }
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = BTreeMap::new();
        for j in 0..i {
            let mut c = LinComb::zero();
            for parts in interval_decompositions(j + 1, i) {
                let letters: Vec<LinComb> = parts.iter().rev().map(|k| family[k].clone()).collect();
                c += &growth_word(&letters)?;
            }
            if !c.is_zero() {
                row.insert(j, c);
            }
        }
        row.insert(i, LinComb::unit());
        rows.push(row);
    }
    Ok(Coaction { rows })
}

impl Coaction {
    pub fn coefficient(&self, i: usize, j: usize) -> LinComb {
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }

    /// `(id ⊗ Δ_C)Δ_C = (Δ ⊗ id)Δ_C`, i.e. `Δ(c_ik) = Σ_j c_ij ⊗ c_jk`.
    pub fn is_coassociative(&self) -> bool {
        let n = self.rows.len();
        (0..n).all(|i| {
            (0..n).all(|k| {
                let lhs = mkw_coproduct(&self.coefficient(i, k));
                let mut rhs = TensorElem::zero();
                for j in 0..n {
                    rhs += &TensorElem::pair(&self.coefficient(i, j), &self.coefficient(j, k));
                }
                lhs == rhs
            })
        })
    }
}

/// A linear map `P^{⊗i} → P`, given on multi-tensors with `i` legs.
pub type PrimitiveMap = Box<dyn Fn(&MultiTensor) -> LinComb + Send + Sync>;

/// Compositions of `n` into positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Φ_(u_i)(x)`, where `u[i − 1]` plays the role of `u_i`.
pub fn coalgebra_endomorphism(u: &[PrimitiveMap], x: &LinComb, max_degree: usize) -> Result<LinComb> {
    if let Some(d) = x.max_degree() {
        if d > max_degree {
            return Err(Error::DegreeCap { requested: d, cap: max_degree });
        }
    }
    let mut out = LinComb::term(Forest::unit(), x.counit());
    for (n, t) in f_decompose(x)? {
        for comp in compositions(n) {
            let mut image = MultiTensor::zero();
            for (legs, c) in &t {
                let mut acc = MultiTensor::basis(Vec::new());
                let mut start = 0;
                for &a in &comp {
                    let ua = u.get(a - 1).ok_or(Error::MissingMap(a))?;
                    let block = MultiTensor::basis(legs[start..start + a].to_vec());
                    let piece = ua(&block);
                    acc = acc.bilinear(&piece, |w, f| {
                        let mut w = w.clone();
                        w.push(f.clone());
                        MultiTensor::basis(w)
                    });
                    start += a;
                }
                image.add_scaled(&acc, c);
            }
            out += &f_map(&image);
        }
    }
    Ok(out)
}

/// Rank of `Φ_(u_i)` on the span of forests of degree `1..=max_degree`,
/// together with the dimension of that span.
pub fn endomorphism_rank(u: &[PrimitiveMap], max_degree: usize, alphabet: &Alphabet) -> Result<(usize, usize)> {
    let forests: Vec<Forest> = (1..=max_degree).flat_map(|n| enumerate_forests(n, alphabet)).collect();
    let images = forests
        .iter()
        .map(|f| coalgebra_endomorphism(u, &LinComb::basis(f.clone()), max_degree))
        .collect::<Result<Vec<_>>>()?;
    Ok((Matrix::from_columns(&images, None).0.rank(), forests.len()))
}

/// `u_1 = c · id`, all higher maps zero.
pub fn scalar_family(c: Rational, depth: usize) -> Vec<PrimitiveMap> {
    let mut u: Vec<PrimitiveMap> = Vec::with_capacity(depth);
    u.push(Box::new(move |t: &MultiTensor| t.map_linear(|legs| LinComb::basis(legs[0].clone())).scale(&c)));
    for _ in 1..depth {
        u.push(Box::new(|_: &MultiTensor| LinComb::zero()));
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::parse_forest;
    use crate::lincomb::{frac, int};

    fn p(s: &str) -> LinComb {
        LinComb::basis(parse_forest(s, &Alphabet::plain()).unwrap())
    }

    fn abcdef(s: &str) -> LinComb {
        LinComb::basis(parse_forest(s, &Alphabet::new(["a", "b", "c", "d", "e", "f"]).unwrap()).unwrap())
    }

    #[test]
    fn growth_display() {
        let got = natural_growth(&abcdef("[a[b]][c]"), &abcdef("[d[e][f]]")).unwrap().scale(&int(3));
        let want = [
            "[d[a[b]][c][e][f]]",
            "[d[a[b]][e][c][f]]",
            "[d[a[b]][e][f][c]]",
            "[d[e][a[b]][c][f]]",
            "[d[e][a[b]][f][c]]",
            "[d[e][f][a[b]][c]]",
            "[d[e[a[b]][c]][f]]",
            "[d[e][f[a[b]][c]]]",
        ]
        .iter()
        .fold(LinComb::zero(), |acc, s| acc + abcdef(s));
        assert_eq!(got, want);
    }

    #[test]
    fn growth_edge_cases() {
        assert_eq!(natural_growth(&LinComb::unit(), &p("[o]")).unwrap(), p("[o]"));
        assert_eq!(natural_growth(&p("[o][o[o]]"), &p("[o]")).unwrap(), p("[o[o][o[o]]]"));
        assert_eq!(natural_growth(&p("[o]"), &LinComb::unit()), Err(Error::EmptyGrowthTarget));
    }

    #[test]
    fn worked_projection() {
        let got = primitive_projection(&p("[o][o[o]]"));
        let want = (p("[o][o[o]]") - p("[o[o]][o]")).scale(&frac(1, 2)) + p("[o[o[o]]]").scale(&frac(1, 2))
            - p("[o[o][o]]");
        assert_eq!(got, want);
        assert!(is_primitive(&got));
        assert_eq!(primitive_projection(&p("[o]")), p("[o]"));
        assert!(primitive_projection(&p("[o[o]]")).is_zero());
        assert!(primitive_projection(&p("[o[o][o]]")).is_zero());
    }

    #[test]
    fn degrees() {
        assert_eq!(primitive_degree(&p("[o]")).unwrap(), 1);
        assert_eq!(primitive_degree(&p("[o][o]")).unwrap(), 2);
        assert_eq!(primitive_degree(&LinComb::zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn decomposition_of_two_points() {
        let x = p("[o][o]");
        let d = f_decompose(&x).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].0, 2);
        let o = parse_forest("[o]", &Alphabet::plain()).unwrap();
        assert_eq!(d[0].1, MultiTensor::basis(vec![o.clone(), o]));
        assert_eq!(d[1].0, 1);
        let level1 = d[1].1.map_basis(|l| l[0].clone());
        assert_eq!(level1, p("[o][o]") - p("[o[o]]"));
        let sum = d.iter().fold(LinComb::zero(), |acc, (_, t)| acc + f_map(t));
        assert_eq!(sum, x);
    }

    #[test]
    fn cocycle_small() {
        assert_eq!(cocycle_bplus(&LinComb::unit(), &p("[o]")).unwrap(), p("[o]"));
        assert_eq!(cocycle_bplus(&p("[o]"), &p("[o]")).unwrap(), p("[o[o]]"));
        assert!(matches!(cocycle_bplus(&p("[o]"), &p("[o[o]]")), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn primitive_basis_dimensions() {
        let dims: Vec<usize> = (1..=4).map(|n| primitive_basis(n, &Alphabet::plain()).len()).collect();
        assert_eq!(dims, [1, 1, 2, 5]);
        for b in primitive_basis(3, &Alphabet::plain()) {
            assert!(is_primitive(&b));
        }
    }

    #[test]
    fn word_shuffles() {
        assert_eq!(gr_shuffle(&[1], &[2]).len(), 2);
        assert!(gr_shuffle::<i32>(&[], &[1, 2]) == Comb::basis(vec![1, 2]));
        assert_eq!(gr_shuffle(&[1, 2], &[3]).len(), 3);
        assert_eq!(gr_deconcat(&[1, 2]).len(), 3);
    }

    #[test]
    fn comodule_rows() {
        let o = p("[o]");
        let family: BTreeMap<_, _> = [((1, 1), o.clone()), ((1, 2), o.clone()), ((2, 2), o.clone())].into();
        let c = comodule_coaction(2, &family).unwrap();
        assert_eq!(c.coefficient(1, 0), o);
        assert_eq!(c.coefficient(2, 0), o.clone() + p("[o[o]]"));
        assert_eq!(c.coefficient(2, 1), o);
        assert_eq!(c.coefficient(2, 2), LinComb::unit());
        assert!(c.is_coassociative());
        let short: BTreeMap<_, _> = [((1, 1), o.clone())].into();
        assert_eq!(comodule_coaction(2, &short), Err(Error::IncompleteFamily(1, 2)));
    }

    #[test]
    fn endomorphism_scalars() {
        let x = p("[o][o[o]]") + p("[o]");
        let id = scalar_family(int(1), 3);
        assert_eq!(coalgebra_endomorphism(&id, &x, 3).unwrap(), x);
        let two = scalar_family(int(2), 3);
        let y = f_map(&MultiTensor::from_legs(&[p("[o]"), p("[o]")]));
        assert_eq!(y, p("[o[o]]"));
        assert_eq!(coalgebra_endomorphism(&two, &y, 3).unwrap(), y.scale(&int(4)));
        let zero = scalar_family(int(0), 3);
        assert!(coalgebra_endomorphism(&zero, &x, 3).unwrap().is_zero());
    }
}
