//! Planar trees with multi-index decorations on vertices and edges, their text
//! format, enumeration by `reg_degree`, and the operators `↑` and `↓`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::lincomb::{write_terms, Comb, Rational};

/// A point of `ℕ^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    /// The unit vector `e_c` in dimension `d`.
    pub fn unit(d: usize, c: usize) -> Self {
        let mut v = vec![0; d];
        v[c] = 1;
        MultiIndex(v)
    }

    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, or `None` when a component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MultiIndex)
    }

    /// Index of the first nonzero component.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&x| x != 0)
    }

    /// All `ℓ ≤ self` componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &m in &self.0 {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..=m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// `∏_c binom(self_c, other_c)`.
    pub fn binomial(&self, other: &MultiIndex) -> Rational {
        let mut out = BigInt::one();
        for (&n, &k) in self.0.iter().zip(&other.0) {
            if k > n {
                return Rational::from_integer(BigInt::from(0));
            }
            for j in 0..k {
                out = out * BigInt::from(n - j) / BigInt::from(j + 1);
            }
        }
        Rational::from_integer(out)
    }

    /// The unit vectors whose sum is `self`, in component order.
    pub fn unit_steps(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c, m as usize)).collect()
    }

    /// All multi-indices of dimension `d` with norm `n`.
    pub fn with_norm(d: usize, n: usize) -> Vec<MultiIndex> {
        fn go(d: usize, n: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if d == 1 {
                prefix.push(n as u32);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for x in (0..=n).rev() {
                prefix.push(x as u32);
                go(d - 1, n - x, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 {
            go(d, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A tree in `𝔗`: root decoration `X^m` followed by planted branches
/// `I_{a_1}(τ_1) ⋯ I_{a_k}(τ_k)`. The bare undecorated root is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegTree {
    #[serde(rename = "n")]
    pub deco: MultiIndex,
    #[serde(rename = "c")]
    pub branches: Vec<(MultiIndex, RegTree)>,
}

pub type RegComb = Comb<RegTree>;
pub type RegTensor = Comb<(RegTree, RegTree)>;

impl RegTree {
    pub fn unit(d: usize) -> Self {
        RegTree { deco: MultiIndex::zero(d), branches: Vec::new() }
    }

    /// The single vertex `X^m`.
    pub fn x(m: MultiIndex) -> Self {
        RegTree { deco: m, branches: Vec::new() }
    }

    /// `I_a(τ)`: an undecorated root with one edge labelled `a` above `τ`.
    pub fn planted(a: MultiIndex, t: RegTree) -> Self {
        RegTree { deco: MultiIndex::zero(a.dim()), branches: vec![(a, t)] }
    }

    pub fn dim(&self) -> usize {
        self.deco.dim()
    }

    pub fn is_unit(&self) -> bool {
        self.deco.is_zero() && self.branches.is_empty()
    }

    /// A generator of `𝒱`: a unit-vector vertex or a planted tree.
    pub fn is_letter(&self) -> bool {
        (self.branches.is_empty() && self.deco.norm() == 1) || (self.deco.is_zero() && self.branches.len() == 1)
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.branches.iter().map(|(_, t)| t.vertex_count()).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    /// Edges plus the norms of every vertex and edge decoration.
    pub fn reg_degree(&self) -> usize {
        self.deco.norm() + self.branches.iter().map(|(a, t)| 1 + a.norm() + t.reg_degree()).sum::<usize>()
    }

    pub fn max_norm(&self) -> usize {
        self.branches.iter().map(|(a, t)| a.norm().max(t.max_norm())).fold(self.deco.norm(), usize::max)
    }

    pub fn with_deco(&self, deco: MultiIndex) -> Self {
        RegTree { deco, branches: self.branches.clone() }
    }

    pub fn with_branches(&self, branches: Vec<(MultiIndex, RegTree)>) -> Self {
        RegTree { deco: self.deco.clone(), branches }
    }
}

impl fmt::Display for RegTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[o{{{}}}", self.deco)?;
        for (a, t) in &self.branches {
            write!(f, "{t}{{a={a}}}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RegTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RegComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.iter().map(|(k, c)| (k.to_string(), c)))
    }
}

impl fmt::Display for RegTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.iter().map(|((a, b), c)| (format!("{a}⊗{b}"), c)))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    d: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::new(start, "expected a natural number"))
    }

    fn multi_index(&mut self) -> Result<MultiIndex, ParseError> {
        let start = self.pos;
        let entries = if self.eat(b'(') {
            let mut v = vec![self.number()?];
            while self.eat(b',') {
                v.push(self.number()?);
            }
            self.expect(b')')?;
            v
        } else {
            vec![self.number()?]
        };
        if entries.len() != self.d {
            return Err(ParseError::new(start, format!("expected {} components, found {}", self.d, entries.len())));
        }
        Ok(MultiIndex(entries))
    }

    fn tree(&mut self) -> Result<RegTree, ParseError> {
        self.expect(b'[')?;
        self.skip_ws();
        if self.s.get(self.pos) != Some(&b'o') {
            return Err(self.err("expected vertex token 'o'"));
        }
        self.pos += 1;
        let deco = if self.eat(b'{') {
            let m = self.multi_index()?;
            self.expect(b'}')?;
            m
        } else {
            MultiIndex::zero(self.d)
        };
        let mut branches = Vec::new();
        loop {
            self.skip_ws();
            match self.s.get(self.pos) {
                Some(b'[') => {
                    let t = self.tree()?;
                    let a = if self.eat(b'{') {
                        self.expect(b'a')?;
                        self.expect(b'=')?;
                        let a = self.multi_index()?;
                        self.expect(b'}')?;
                        a
                    } else {
                        MultiIndex::zero(self.d)
                    };
                    branches.push((a, t));
                }
                Some(b']') => {
                    self.pos += 1;
                    return Ok(RegTree { deco, branches });
                }
                _ => return Err(self.err("expected '[' or ']'")),
            }
        }
    }
}

/// Parses `[o{m} child{a=..} …]`; omitted decorations are zero, and `1`
/// denotes the unit.
pub fn parse_reg_tree(text: &str, d: usize) -> Result<RegTree, ParseError> {
    if text.trim() == "1" {
        return Ok(RegTree::unit(d));
    }
    let mut p = Parser { s: text.as_bytes(), pos: 0, d };
    let t = p.tree()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

/// All trees of the given `reg_degree` with every decoration of norm at most
/// `max_norm`.
pub fn enumerate_reg_trees(degree: usize, d: usize, max_norm: usize) -> Vec<RegTree> {
    let mut out = Vec::new();
    for m in 0..=degree.min(max_norm) {
        for deco in MultiIndex::with_norm(d, m) {
            for branches in branch_words(degree - m, d, max_norm) {
                out.push(RegTree { deco: deco.clone(), branches });
            }
        }
    }
    out.sort();
    out
}

fn branch_words(degree: usize, d: usize, max_norm: usize) -> Vec<Vec<(MultiIndex, RegTree)>> {
    if degree == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=degree {
        let heads = planted_branches(first, d, max_norm);
        if heads.is_empty() {
            continue;
        }
        let tails = branch_words(degree - first, d, max_norm);
        for h in &heads {
            for t in &tails {
                let mut w = vec![h.clone()];
                w.extend(t.iter().cloned());
                out.push(w);
            }
        }
    }
    out
}

fn planted_branches(degree: usize, d: usize, max_norm: usize) -> Vec<(MultiIndex, RegTree)> {
    let mut out = Vec::new();
    for a in 0..degree.min(max_norm + 1) {
        for sub in enumerate_reg_trees(degree - 1 - a, d, max_norm) {
            for edge in MultiIndex::with_norm(d, a) {
                out.push((edge, sub.clone()));
            }
        }
    }
    out
}

pub fn enumerate_reg_trees_up_to(max_degree: usize, d: usize, max_norm: usize) -> Vec<RegTree> {
    (0..=max_degree).flat_map(|n| enumerate_reg_trees(n, d, max_norm)).collect()
}

/// Vertices in preorder; `raise_at` and grafting address them by this index.
fn vertex_paths(t: &RegTree, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, (_, c)) in t.branches.iter().enumerate() {
        prefix.push(i);
        vertex_paths(c, prefix, out);
        prefix.pop();
    }
}

pub(crate) fn vertices(t: &RegTree) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    vertex_paths(t, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn at_path<'a>(t: &'a RegTree, path: &[usize]) -> &'a RegTree {
    path.iter().fold(t, |node, &i| &node.branches[i].1)
}

/// Rebuilds `t` with the subtree at `path` replaced by `f(subtree)`.
pub(crate) fn modify_at(t: &RegTree, path: &[usize], f: &impl Fn(&RegTree) -> RegTree) -> RegTree {
    match path.split_first() {
        None => f(t),
        Some((&i, rest)) => {
            let mut branches = t.branches.clone();
            branches[i].1 = modify_at(&t.branches[i].1, rest, f);
            t.with_branches(branches)
        }
    }
}

/// `↑^ℓ_v`: adds `ℓ` to the decoration of the vertex with preorder index `v`.
pub fn raise_at(t: &RegTree, v: usize, l: &MultiIndex) -> RegTree {
    let path = &vertices(t)[v];
    modify_at(t, path, &|node| node.with_deco(node.deco.add(l)))
}

fn raise_unit(x: &RegComb, c: usize) -> RegComb {
    x.map_linear(|t| {
        let e = MultiIndex::unit(t.dim(), c);
        (0..t.vertex_count()).map(|v| (raise_at(t, v, &e), Rational::one())).collect()
    })
}

/// `↑^ℓ = ↑^{ℓ_1} ∘ ⋯ ∘ ↑^{ℓ_k}` over unit steps, each summing over all vertices.
pub fn raise(x: &RegComb, l: &MultiIndex) -> RegComb {
    l.unit_steps().into_iter().fold(x.clone(), |acc, c| raise_unit(&acc, c))
}

fn lower_unit(x: &RegComb, c: usize) -> RegComb {
    x.map_linear(|t| {
        let e = MultiIndex::unit(t.dim(), c);
        let mut out = RegComb::zero();
        for (i, (a, _)) in t.branches.iter().enumerate() {
            if let Some(a2) = a.checked_sub(&e) {
                let mut branches = t.branches.clone();
                branches[i].0 = a2;
                out.add_term(t.with_branches(branches), Rational::one());
            }
        }
        out
    })
}

/// `↓^ℓ`: for each unit step, sums over root-adjacent edges lowering one of
/// them; terms leaving `ℕ^d` vanish.
pub fn lower_root_adjacent(x: &RegComb, l: &MultiIndex) -> RegComb {
    l.unit_steps().into_iter().fold(x.clone(), |acc, c| lower_unit(&acc, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::int;

    fn t(s: &str) -> RegTree {
        parse_reg_tree(s, 1).unwrap()
    }

    #[test]
    fn parse_and_render() {
        let x = t("[o{0}[o{1}]{a=(1)}]");
        assert_eq!(x.branches[0].0, MultiIndex::new(vec![1]));
        assert_eq!(x.branches[0].1.deco, MultiIndex::new(vec![1]));
        assert_eq!(parse_reg_tree(&x.to_string(), 1).unwrap(), x);
        assert_eq!(t("[o[o]]"), RegTree::planted(MultiIndex::zero(1), RegTree::unit(1)));
        assert!(t("1").is_unit());
        let two = parse_reg_tree("[o{(1,2)}[o]{a=(0,1)}]", 2).unwrap();
        assert_eq!(two.reg_degree(), 3 + 1 + 1);
        assert!(parse_reg_tree("[o{(1,2)}]", 1).is_err());
        assert!(parse_reg_tree("[o[o]", 1).is_err());
    }

    #[test]
    fn degrees_and_counts() {
        assert_eq!(t("[o{2}[o{1}]{a=1}]").reg_degree(), 2 + 1 + 1 + 1);
        assert_eq!(enumerate_reg_trees(0, 1, 2), vec![RegTree::unit(1)]);
        assert_eq!(enumerate_reg_trees(1, 1, 2).len(), 2);
        for n in 0..=4 {
            for x in enumerate_reg_trees(n, 1, 2) {
                assert_eq!(x.reg_degree(), n);
                assert!(x.max_norm() <= 2);
            }
        }
    }

    #[test]
    fn raising_and_lowering() {
        let one = RegComb::basis(t("[o]"));
        assert_eq!(raise(&one, &MultiIndex::new(vec![1])), RegComb::basis(t("[o{1}]")));
        assert_eq!(raise(&one, &MultiIndex::new(vec![2])), RegComb::basis(t("[o{2}]")));
        let two = RegComb::basis(t("[o[o]]"));
        assert_eq!(raise(&two, &MultiIndex::new(vec![1])).len(), 2);
        let sq = raise(&two, &MultiIndex::new(vec![2]));
        assert_eq!(sq.coeff(&t("[o{1}[o{1}]]")), int(2));
        assert_eq!(lower_root_adjacent(&two, &MultiIndex::new(vec![1])), RegComb::zero());
        let planted = RegComb::basis(t("[o[o[o]]{a=2}]"));
        assert_eq!(lower_root_adjacent(&planted, &MultiIndex::new(vec![1])), RegComb::basis(t("[o[o[o]]{a=1}]")));
    }

    #[test]
    fn multi_index_helpers() {
        let m = MultiIndex::new(vec![2, 1]);
        assert_eq!(m.below().len(), 6);
        assert_eq!(m.binomial(&MultiIndex::new(vec![1, 1])), int(2));
        assert_eq!(m.binomial(&MultiIndex::new(vec![3, 0])), int(0));
        assert_eq!(MultiIndex::with_norm(2, 2).len(), 3);
        assert_eq!(m.unit_steps(), vec![0, 0, 1]);
    }
}
