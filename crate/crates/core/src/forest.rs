//! Decorated planar rooted trees and ordered forests.
//!
//! Trees are hash-consed: every structurally distinct tree exists once per
//! process, so equality and hashing are pointer operations. The total order
//! compares vertex counts first and then the canonical bracket encoding.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, RwLock};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// A vertex label drawn from the session alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decoration(Arc<str>);

/// Label of the temporary root used by `B_+`/`B_-` based formulas. It is not a
/// valid token, so it can never be parsed and never collides with user input.
pub(crate) const INTERNAL_ROOT: &str = "#";

impl Decoration {
    pub fn new(token: &str) -> Result<Self, ParseError> {
        if token.is_empty() || !token.chars().all(is_token_char) {
            return Err(ParseError::new(0, format!("invalid decoration token {token:?}")));
        }
        Ok(Decoration(Arc::from(token)))
    }

    pub(crate) fn internal_root() -> Self {
        Decoration(Arc::from(INTERNAL_ROOT))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// The finite set of decorations available in a session.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<Decoration>);

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self, ParseError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<Decoration> = tokens
            .into_iter()
            .map(|t| Decoration::new(t.as_ref()))
            .collect::<Result<_, _>>()?;
        if set.is_empty() {
            return Err(ParseError::new(0, "alphabet must not be empty"));
        }
        Ok(Alphabet(set.into_iter().collect()))
    }

    /// The singleton alphabet `{o}` used for undecorated trees.
    pub fn plain() -> Self {
        Alphabet(vec![Decoration(Arc::from("o"))])
    }

    pub fn letters(&self) -> &[Decoration] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.iter().any(|d| d.as_str() == token)
    }

    pub fn get(&self, token: &str) -> Option<&Decoration> {
        self.0.iter().find(|d| d.as_str() == token)
    }

    /// Collects the tokens that open a bracket in `texts`, so coefficients
    /// and other surrounding syntax are ignored.
    pub fn infer_from(texts: &[&str]) -> Option<Self> {
        let mut tokens = BTreeSet::new();
        for text in texts {
            let mut rest = *text;
            while let Some(i) = rest.find('[') {
                rest = rest[i + 1..].trim_start();
                let end = rest.find(|c: char| !is_token_char(c)).unwrap_or(rest.len());
                if end > 0 {
                    tokens.insert(rest[..end].to_string());
                }
                rest = &rest[end..];
            }
        }
        if tokens.is_empty() {
            None
        } else {
            Alphabet::new(tokens).ok()
        }
    }
}

struct Node {
    decoration: Decoration,
    children: Vec<Tree>,
    degree: usize,
    code: Arc<str>,
}

/// A decorated planar rooted tree. Cheap to clone.
#[derive(Clone)]
pub struct Tree(Arc<Node>);

static INTERNER: LazyLock<RwLock<HashMap<Arc<str>, Tree>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

impl Tree {
    /// The tree with the given root decoration and ordered children.
    pub fn new(decoration: Decoration, children: Vec<Tree>) -> Tree {
        let mut code = String::with_capacity(
            2 + decoration.as_str().len() + children.iter().map(|c| c.code().len()).sum::<usize>(),
        );
        code.push('[');
        code.push_str(decoration.as_str());
        for c in &children {
            code.push_str(c.code());
        }
        code.push(']');
        if let Some(t) = INTERNER.read().expect("interner poisoned").get(code.as_str()) {
            return t.clone();
        }
        let mut table = INTERNER.write().expect("interner poisoned");
        if let Some(t) = table.get(code.as_str()) {
            return t.clone();
        }
        let code: Arc<str> = Arc::from(code);
        let degree = 1 + children.iter().map(Tree::degree).sum::<usize>();
        let tree = Tree(Arc::new(Node { decoration, children, degree, code: code.clone() }));
        table.insert(code, tree.clone());
        tree
    }

    pub fn leaf(decoration: Decoration) -> Tree {
        Tree::new(decoration, Vec::new())
    }

    pub fn decoration(&self) -> &Decoration {
        &self.0.decoration
    }

    pub fn children(&self) -> &[Tree] {
        &self.0.children
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Canonical bracket encoding, e.g. `[a[b][c[d]]]`.
    pub fn code(&self) -> &str {
        &self.0.code
    }

    /// The ordered forest of the root's children (`B_-`).
    pub fn b_minus(&self) -> Forest {
        Forest(self.0.children.clone())
    }

    /// Replaces the children of the root.
    pub fn with_children(&self, children: Vec<Tree>) -> Tree {
        Tree::new(self.0.decoration.clone(), children)
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state);
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.degree().cmp(&other.degree()).then_with(|| self.code().cmp(other.code()))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A word of planar trees. The empty forest is the unit `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Forest(Vec<Tree>);

impl Forest {
    pub fn new(trees: Vec<Tree>) -> Forest {
        Forest(trees)
    }

    pub fn unit() -> Forest {
        Forest(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.0
    }

    pub fn into_trees(self) -> Vec<Tree> {
        self.0
    }

    /// Number of trees.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        self.0.iter().map(Tree::degree).sum()
    }

    /// Word concatenation.
    pub fn concat(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.0.len() + other.0.len());
        trees.extend_from_slice(&self.0);
        trees.extend_from_slice(&other.0);
        Forest(trees)
    }

    /// Grafts the whole forest onto a new root (`B_+^d`).
    pub fn b_plus(&self, decoration: &Decoration) -> Tree {
        Tree::new(decoration.clone(), self.0.clone())
    }

    /// The forest read right to left.
    pub fn reversed(&self) -> Forest {
        Forest(self.0.iter().rev().cloned().collect())
    }

    /// Canonical text; the unit renders as the empty string.
    pub fn code(&self) -> String {
        self.0.iter().map(Tree::code).collect()
    }

    fn chars(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().flat_map(|t| t.code().chars())
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Self {
        Forest(vec![t])
    }
}

impl FromIterator<Tree> for Forest {
    fn from_iter<I: IntoIterator<Item = Tree>>(iter: I) -> Self {
        Forest(iter.into_iter().collect())
    }
}

impl Borrow<[Tree]> for Forest {
    fn borrow(&self) -> &[Tree] {
        &self.0
    }
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        self.degree().cmp(&other.degree()).then_with(|| self.chars().cmp(other.chars()))
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for t in &self.0 {
            f.write_str(t.code())?;
        }
        Ok(())
    }
}

/// `B_+^d(ω)`.
pub fn b_plus(forest: &Forest, decoration: &Decoration) -> Tree {
    forest.b_plus(decoration)
}

/// `B_-(τ)`.
pub fn b_minus(tree: &Tree) -> Forest {
    tree.b_minus()
}

/// Parses a juxtaposition of bracket trees such as `[a[b][c[d]]]`.
///
/// With a singleton alphabet the token may be omitted (`[[][]]`). The text
/// `1` denotes the empty forest, as does the empty string.
pub fn parse_forest(text: &str, alphabet: &Alphabet) -> Result<Forest, ParseError> {
    let trimmed = text.trim();
    if trimmed == "1" || trimmed.is_empty() {
        return Ok(Forest::unit());
    }
    let mut p = Parser { chars: text.char_indices().peekable(), text, alphabet };
    let mut trees = Vec::new();
    loop {
        p.skip_ws();
        match p.chars.peek() {
            None => break,
            Some(&(_, '[')) => trees.push(p.tree()?),
            Some(&(pos, c)) => {
                return Err(ParseError::new(pos, format!("expected '[' but found {c:?}")));
            }
        }
    }
    Ok(Forest(trees))
}

/// Parses a single tree.
pub fn parse_tree(text: &str, alphabet: &Alphabet) -> Result<Tree, ParseError> {
    let forest = parse_forest(text, alphabet)?;
    match forest.0.len() {
        1 => Ok(forest.0.into_iter().next().expect("one tree")),
        n => Err(ParseError::new(0, format!("expected exactly one tree, found {n}"))),
    }
}

/// Canonical text of a forest; `render_forest(parse_forest(s)) == s` for canonical `s`.
pub fn render_forest(forest: &Forest) -> String {
    forest.code()
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn tree(&mut self) -> Result<Tree, ParseError> {
        let (open, _) = self.chars.next().expect("caller saw '['");
        self.skip_ws();
        let start = self.chars.peek().map_or(self.text.len(), |&(i, _)| i);
        let mut end = start;
        while let Some(&(i, c)) = self.chars.peek() {
            if !is_token_char(c) {
                break;
            }
            end = i + c.len_utf8();
            self.chars.next();
        }
        let token = &self.text[start..end];
        let decoration = if token.is_empty() {
            if self.alphabet.len() != 1 {
                return Err(ParseError::new(
                    start,
                    "missing decoration token (only allowed with a singleton alphabet)",
                ));
            }
            self.alphabet.letters()[0].clone()
        } else {
            match self.alphabet.get(token) {
                Some(d) => d.clone(),
                None => {
                    return Err(ParseError::new(start, format!("unknown decoration {token:?}")));
                }
            }
        };
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some(&(_, '[')) => children.push(self.tree()?),
                Some(&(_, ']')) => {
                    self.chars.next();
                    return Ok(Tree::new(decoration, children));
                }
                Some(&(pos, c)) => {
                    return Err(ParseError::new(pos, format!("unexpected character {c:?}")));
                }
                None => return Err(ParseError::new(open, "unbalanced '['")),
            }
        }
    }
}

/// All planar trees with exactly `degree` vertices, in canonical order.
pub fn enumerate_trees(degree: usize, alphabet: &Alphabet) -> Vec<Tree> {
    if degree == 0 {
        return Vec::new();
    }
    let mut out: Vec<Tree> = enumerate_forests(degree - 1, alphabet)
        .iter()
        .flat_map(|f| alphabet.letters().iter().map(move |d| f.b_plus(d)))
        .collect();
    out.sort();
    out
}

/// All ordered forests with exactly `degree` vertices, in canonical order.
/// There are `C_n * |A|^n` of them.
pub fn enumerate_forests(degree: usize, alphabet: &Alphabet) -> Vec<Forest> {
    static CACHE: LazyLock<RwLock<HashMap<(usize, Alphabet), Arc<Vec<Forest>>>>> =
        LazyLock::new(|| RwLock::new(HashMap::new()));
    let key = (degree, alphabet.clone());
    if let Some(v) = CACHE.read().expect("cache poisoned").get(&key) {
        return v.as_ref().clone();
    }
    let mut out = Vec::new();
    if degree == 0 {
        out.push(Forest::unit());
    } else {
        for first in 1..=degree {
            let heads = enumerate_trees(first, alphabet);
            let tails = enumerate_forests(degree - first, alphabet);
            for h in &heads {
                for t in &tails {
                    let mut trees = Vec::with_capacity(1 + t.len());
                    trees.push(h.clone());
                    trees.extend_from_slice(t.trees());
                    out.push(Forest(trees));
                }
            }
        }
        out.sort();
    }
    CACHE.write().expect("cache poisoned").insert(key, Arc::new(out.clone()));
    out
}

/// All forests of degree `0..=max_degree`, in canonical order.
pub fn enumerate_forests_up_to(max_degree: usize, alphabet: &Alphabet) -> Vec<Forest> {
    (0..=max_degree).flat_map(|n| enumerate_forests(n, alphabet)).collect()
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    d: String,
    c: Vec<TreeJson>,
}

impl TreeJson {
    fn from_tree(t: &Tree) -> Self {
        TreeJson {
            d: t.decoration().as_str().to_owned(),
            c: t.children().iter().map(TreeJson::from_tree).collect(),
        }
    }

    fn into_tree(self) -> Result<Tree, ParseError> {
        let d = Decoration::new(&self.d)?;
        let children = self.c.into_iter().map(TreeJson::into_tree).collect::<Result<_, _>>()?;
        Ok(Tree::new(d, children))
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeJson::from_tree(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        TreeJson::deserialize(d)?.into_tree().map_err(D::Error::custom)
    }
}

impl Serialize for Forest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Forest {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Forest(Vec::<Tree>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d"]).unwrap()
    }

    #[test]
    fn alphabet_inference_skips_coefficients() {
        let a = Alphabet::infer_from(&["1/2 [b[a]] - 3 [a]", "[ c]"]).unwrap();
        let letters: Vec<&str> = a.letters().iter().map(Decoration::as_str).collect();
        assert_eq!(letters, ["a", "b", "c"]);
        assert!(Alphabet::infer_from(&["1", "[]"]).is_none());
    }

    #[test]
    fn parse_keeps_planar_order() {
        let a = abcd();
        let t1 = parse_forest("[a[b][c[d]]]", &a).unwrap();
        let t2 = parse_forest("[a[c[d]][b]]", &a).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1.trees()[0].children().len(), 2);
        assert_eq!(t1.trees()[0].children()[0].code(), "[b]");
        assert_ne!(t1, t2);
        assert_eq!(t1.degree(), 4);
        assert_eq!(render_forest(&t1), "[a[b][c[d]]]");
    }

    #[test]
    fn parse_unit_and_omitted_tokens() {
        assert!(parse_forest("", &abcd()).unwrap().is_unit());
        let plain = Alphabet::plain();
        let f = parse_forest("[[][]]", &plain).unwrap();
        assert_eq!(f.code(), "[o[o][o]]");
        assert_eq!(parse_forest("[o[o][o]]", &plain).unwrap(), f);
    }

    #[test]
    fn parse_errors() {
        let a = abcd();
        assert!(parse_forest("[a[b]", &a).is_err());
        assert!(parse_forest("[a]]", &a).is_err());
        assert!(parse_forest("[x]", &a).is_err());
        assert!(parse_forest("[[a]]", &a).is_err());
        let err = parse_forest("[a][e]", &a).unwrap_err();
        assert_eq!(err.position, 4);
    }

    #[test]
    fn b_plus_and_minus() {
        let a = Alphabet::new(["a", "b", "c", "r"]).unwrap();
        let f = parse_forest("[a[b]][c]", &a).unwrap();
        let r = a.get("r").unwrap().clone();
        let t = b_plus(&f, &r);
        assert_eq!(t.code(), "[r[a[b]][c]]");
        assert_eq!(b_minus(&t), f);
        assert_eq!(b_plus(&Forest::unit(), &r).code(), "[r]");
        let t = parse_tree("[r[a][b]]", &a).unwrap();
        assert_eq!(b_minus(&t).code(), "[a][b]");
    }

    #[test]
    fn degrees() {
        let a = abcd();
        assert_eq!(parse_forest("[a][b][c]", &a).unwrap().degree(), 3);
        assert_eq!(Forest::unit().degree(), 0);
    }

    #[test]
    fn compare_orders_by_degree_then_code() {
        let p = Alphabet::plain();
        let one = parse_forest("[o]", &p).unwrap();
        let two = parse_forest("[o[o]]", &p).unwrap();
        assert!(one < two);
        assert_eq!(one.cmp(&one), Ordering::Equal);
        let trees: Vec<String> =
            (1..=3).flat_map(|n| enumerate_trees(n, &p)).map(|t| t.code().to_owned()).collect();
        assert_eq!(trees, ["[o]", "[o[o]]", "[o[o[o]]]", "[o[o][o]]"]);
    }

    #[test]
    fn interning_shares_nodes() {
        let p = Alphabet::plain();
        let x = parse_tree("[o[o][o[o]]]", &p).unwrap();
        let y = parse_tree("[[][[]]]", &p).unwrap();
        assert!(Arc::ptr_eq(&x.0, &y.0));
    }

    #[test]
    fn json_round_trip() {
        let a = abcd();
        let f = parse_forest("[a[b]][c[d]]", &a).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"[{"d":"a","c":[{"d":"b","c":[]}]},{"d":"c","c":[{"d":"d","c":[]}]}]"#);
        let g: Forest = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
