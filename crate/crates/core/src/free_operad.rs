//! Free operads on graded binary generators, as sums of leaf-labeled trees.
//!
//! A tree is read in prefix order (node symbol, left subtree, right subtree);
//! leaves carry degree 0. Swapping the children of a node `g(A, B)` gives
//! `(g·τ)(B, A)` times `(-1)^{|A||B|}`, where `g·τ` is the generator's
//! transposition image. The normal form puts the smaller minimal leaf on the
//! left at every node.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{qi, Rational, Sign};
use crate::linalg::SparseVec;

/// Largest arity the free-operad API will enumerate.
pub const MAX_ARITY: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("leaf index {index} out of range for arity {arity}")]
    LeafOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity {0} exceeds the cap of {MAX_ARITY}")]
    ArityTooLarge(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("swap action of `{0}` is not an involution")]
    NotInvolution(String),
}

/// How the leaf transposition acts on a generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwapKind {
    /// One basis element fixed by the transposition, like `1·2 = 2·1`.
    Symmetric,
    /// One basis element negated, like `(1,2) = -(2,1)`.
    Antisymmetric,
    /// Two basis elements exchanged, like `[1,2]` and `[2,1]`.
    Pair,
}

/// How a family prints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Glyph {
    /// `open A sep B close`, e.g. `(1,2)` or `[1,2]`.
    Bracket { open: char, close: char },
    /// `A op B`, parenthesised when nested, e.g. `(1*2)*3`.
    Infix(char),
}

/// A family of binary generators sharing one degree and one S₂-module.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub swap: SwapKind,
    pub glyph: Glyph,
    /// Grading used to split quotients into weight components.
    pub weight: usize,
}

impl Generator {
    pub fn new(name: &str, degree: i64, swap: SwapKind, glyph: Glyph) -> Self {
        Generator { name: name.to_string(), degree, swap, glyph, weight: 0 }
    }

    pub fn with_weight(mut self, w: usize) -> Self {
        self.weight = w;
        self
    }

    pub fn dim(&self) -> usize {
        match self.swap {
            SwapKind::Pair => 2,
            _ => 1,
        }
    }

    /// The 2×2 (or 1×1) matrix of the leaf transposition on this family.
    pub fn swap_matrix(&self) -> Vec<Vec<Rational>> {
        match self.swap {
            SwapKind::Symmetric => vec![vec![qi(1)]],
            SwapKind::Antisymmetric => vec![vec![qi(-1)]],
            SwapKind::Pair => vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]],
        }
    }
}

/// Index of a generator basis element in a [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenId(pub u16);

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BasisElement {
    family: usize,
    reversed: bool,
}

/// An ordered registry of generator families and their basis elements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Signature {
    families: Vec<Generator>,
    basis: Vec<BasisElement>,
}

impl Signature {
    pub fn new(families: Vec<Generator>) -> Self {
        let mut basis = Vec::new();
        for (f, g) in families.iter().enumerate() {
            basis.push(BasisElement { family: f, reversed: false });
            if g.swap == SwapKind::Pair {
                basis.push(BasisElement { family: f, reversed: true });
            }
        }
        Signature { families, basis }
    }

    pub fn families(&self) -> &[Generator] {
        &self.families
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.basis.len() as u16).map(GenId)
    }

    pub fn family_of(&self, g: GenId) -> &Generator {
        &self.families[self.basis[g.0 as usize].family]
    }

    pub fn family_index(&self, g: GenId) -> usize {
        self.basis[g.0 as usize].family
    }

    pub fn is_reversed(&self, g: GenId) -> bool {
        self.basis[g.0 as usize].reversed
    }

    pub fn degree(&self, g: GenId) -> i64 {
        self.family_of(g).degree
    }

    /// The plain (non-reversed) basis element of a family, by family name.
    pub fn id(&self, family: &str) -> Result<GenId, OperadError> {
        self.basis
            .iter()
            .position(|b| !b.reversed && self.families[b.family].name == family)
            .map(|i| GenId(i as u16))
            .ok_or_else(|| OperadError::UnknownGenerator(family.to_string()))
    }

    /// The reversed basis element of a pair family.
    pub fn id_rev(&self, family: &str) -> Result<GenId, OperadError> {
        self.basis
            .iter()
            .position(|b| b.reversed && self.families[b.family].name == family)
            .map(|i| GenId(i as u16))
            .ok_or_else(|| OperadError::UnknownGenerator(family.to_string()))
    }

    /// Image of a basis element under the leaf transposition.
    pub fn swap(&self, g: GenId) -> (GenId, Sign) {
        let fam = self.family_of(g);
        match fam.swap {
            SwapKind::Symmetric => (g, Sign::Plus),
            SwapKind::Antisymmetric => (g, Sign::Minus),
            SwapKind::Pair => {
                let other = if self.is_reversed(g) { GenId(g.0 - 1) } else { GenId(g.0 + 1) };
                (other, Sign::Plus)
            }
        }
    }

    /// Checks that every swap matrix squares to the identity.
    pub fn validate(&self) -> Result<(), OperadError> {
        for g in &self.families {
            let m = g.swap_matrix();
            let n = m.len();
            for i in 0..n {
                for j in 0..n {
                    let v: Rational = (0..n).map(|k| &m[i][k] * &m[k][j]).sum();
                    let want = if i == j { qi(1) } else { qi(0) };
                    if v != want {
                        return Err(OperadError::NotInvolution(g.name.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Concatenation of two signatures; ids of `other` are shifted.
    pub fn join(&self, other: &Signature) -> Signature {
        let mut fams = self.families.clone();
        fams.extend(other.families.iter().cloned());
        Signature::new(fams)
    }

    /// Same families with the given per-family weights.
    pub fn with_weights(&self, weights: &[usize]) -> Signature {
        let fams = self
            .families
            .iter()
            .zip(weights)
            .map(|(g, w)| g.clone().with_weight(*w))
            .collect();
        Signature::new(fams)
    }

    /// Translate a generator id of a sub-signature into this one by family name.
    pub fn translate(&self, from: &Signature, g: GenId) -> Result<GenId, OperadError> {
        let name = &from.family_of(g).name;
        if from.is_reversed(g) {
            self.id_rev(name)
        } else {
            self.id(name)
        }
    }
}

/// A planar binary tree with leaf labels and generator labels at nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tree {
    Leaf(u8),
    Node(GenId, Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(g: GenId, a: Tree, b: Tree) -> Tree {
        Tree::Node(g, Box::new(a), Box::new(b))
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, a, b) => a.arity() + b.arity(),
        }
    }

    pub fn min_leaf(&self) -> u8 {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node(_, a, b) => a.min_leaf().min(b.min_leaf()),
        }
    }

    pub fn leaves(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u8>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node(_, a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn degree(&self, sig: &Signature) -> i64 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(g, a, b) => sig.degree(*g) + a.degree(sig) + b.degree(sig),
        }
    }

    pub fn nodes(&self) -> Vec<GenId> {
        match self {
            Tree::Leaf(_) => vec![],
            Tree::Node(g, a, b) => {
                let mut v = vec![*g];
                v.extend(a.nodes());
                v.extend(b.nodes());
                v
            }
        }
    }

    pub fn map_nodes(&self, f: &impl Fn(GenId) -> GenId) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(*l),
            Tree::Node(g, a, b) => Tree::node(f(*g), a.map_nodes(f), b.map_nodes(f)),
        }
    }

    pub fn relabel(&self, f: &impl Fn(u8) -> u8) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node(g, a, b) => Tree::node(*g, a.relabel(f), b.relabel(f)),
        }
    }

    /// Replace leaf `i` by `g` (already relabeled), returning the tree and the
    /// total degree of node symbols that follow leaf `i` in prefix order.
    fn substitute(&self, i: u8, g: &Tree, sig: &Signature) -> (Tree, i64) {
        fn go(t: &Tree, i: u8, g: &Tree, sig: &Signature, after: &mut i64, found: &mut bool) -> Tree {
            match t {
                Tree::Leaf(l) if *l == i => {
                    *found = true;
                    g.clone()
                }
                Tree::Leaf(l) => Tree::Leaf(*l),
                Tree::Node(n, a, b) => {
                    if *found {
                        *after += sig.degree(*n);
                    }
                    let a2 = go(a, i, g, sig, after, found);
                    let b2 = go(b, i, g, sig, after, found);
                    Tree::node(*n, a2, b2)
                }
            }
        }
        let mut after = 0;
        let mut found = false;
        let t = go(self, i, g, sig, &mut after, &mut found);
        (t, after)
    }
}

/// Normal form of a single planar tree, as a signed tree.
pub fn normalize_tree(t: &Tree, sig: &Signature) -> (Tree, Sign) {
    match t {
        Tree::Leaf(_) => (t.clone(), Sign::Plus),
        Tree::Node(g, a, b) => {
            let (a, sa) = normalize_tree(a, sig);
            let (b, sb) = normalize_tree(b, sig);
            let s = sa * sb;
            if a.min_leaf() < b.min_leaf() {
                (Tree::node(*g, a, b), s)
            } else {
                let (h, sh) = sig.swap(*g);
                let k = Sign::pow(a.degree(sig) * b.degree(sig));
                (Tree::node(h, b, a), s * sh * k)
            }
        }
    }
}

/// A finite formal sum of trees of one arity, kept in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperadElement {
    pub arity: usize,
    pub terms: BTreeMap<Tree, Rational>,
}

impl OperadElement {
    pub fn zero(arity: usize) -> Self {
        OperadElement { arity, terms: BTreeMap::new() }
    }

    /// The arity-one identity.
    pub fn identity() -> Self {
        let mut e = OperadElement::zero(1);
        e.terms.insert(Tree::Leaf(1), Rational::one());
        e
    }

    pub fn from_tree(t: Tree, sig: &Signature) -> Self {
        let mut e = OperadElement::zero(t.arity());
        e.add_tree(&t, Rational::one(), sig);
        e
    }

    pub fn generator(g: GenId, sig: &Signature) -> Self {
        OperadElement::from_tree(Tree::node(g, Tree::Leaf(1), Tree::Leaf(2)), sig)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c · t` after normalising `t`.
    pub fn add_tree(&mut self, t: &Tree, c: Rational, sig: &Signature) {
        let (nt, s) = normalize_tree(t, sig);
        let c = s.apply(c);
        let e = self.terms.entry(nt).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            let (nt, _) = normalize_tree(t, sig);
            self.terms.remove(&nt);
        }
    }

    pub fn add(&mut self, other: &OperadElement, c: &Rational) {
        for (t, x) in &other.terms {
            let e = self.terms.entry(t.clone()).or_insert_with(Rational::zero);
            *e += x * c;
            if e.is_zero() {
                self.terms.remove(t);
            }
        }
    }

    pub fn scaled(&self, c: &Rational) -> OperadElement {
        let mut out = OperadElement::zero(self.arity);
        out.add(self, c);
        out
    }

    pub fn sum(&self, other: &OperadElement) -> OperadElement {
        let mut out = self.clone();
        out.add(other, &Rational::one());
        out
    }

    pub fn difference(&self, other: &OperadElement) -> OperadElement {
        let mut out = self.clone();
        out.add(other, &qi(-1));
        out
    }

    /// Re-normalise every term (idempotent on elements built by this module).
    pub fn normalized(&self, sig: &Signature) -> OperadElement {
        let mut out = OperadElement::zero(self.arity);
        for (t, c) in &self.terms {
            out.add_tree(t, c.clone(), sig);
        }
        out
    }

    /// Rename node labels into another signature, e.g. a joined one.
    pub fn remap(&self, f: &impl Fn(GenId) -> GenId, target: &Signature) -> OperadElement {
        let mut out = OperadElement::zero(self.arity);
        for (t, c) in &self.terms {
            out.add_tree(&t.map_nodes(f), c.clone(), target);
        }
        out
    }

    pub fn to_vector(&self, basis: &MonomialBasis) -> SparseVec {
        self.terms.iter().map(|(t, c)| (basis.index_of(t), c.clone())).collect()
    }

    pub fn display(&self, sig: &Signature) -> String {
        format_element(self, sig)
    }
}

/// Partial composition `f ∘_i g` (1-based `i`).
///
/// Leaves of `g` become `i..i+n-1`, later leaves of `f` shift by `n-1`. When
/// `g` has degree `|g|`, each term picks up `(-1)^{|g|·δ}` where `δ` is the
/// degree of node symbols following leaf `i` in prefix order.
pub fn graft(
    f: &OperadElement,
    i: usize,
    g: &OperadElement,
    sig: &Signature,
) -> Result<OperadElement, OperadError> {
    if i == 0 || i > f.arity {
        return Err(OperadError::LeafOutOfRange { index: i, arity: f.arity });
    }
    let n = g.arity;
    let arity = f.arity + n - 1;
    if arity > MAX_ARITY {
        return Err(OperadError::ArityTooLarge(arity));
    }
    let mut out = OperadElement::zero(arity);
    let i8 = i as u8;
    let shift_f = |l: u8| if l > i8 { l + n as u8 - 1 } else { l };
    let shift_g = |l: u8| l + i8 - 1;
    for (tf, cf) in &f.terms {
        let tf2 = tf.relabel(&|l| if l == i8 { l } else { shift_f(l) });
        for (tg, cg) in &g.terms {
            let tg2 = tg.relabel(&shift_g);
            let (t, after) = tf2.substitute(i8, &tg2, sig);
            let s = Sign::pow(tg.degree(sig) * after);
            out.add_tree(&t, s.apply(cf * cg), sig);
        }
    }
    Ok(out)
}

/// Right action of a permutation on leaf labels: label `k` becomes `sigma[k-1]`.
///
/// `sigma` is 1-based in its values, e.g. `[2, 1]` is the transposition.
pub fn act(sigma: &[usize], e: &OperadElement, sig: &Signature) -> Result<OperadElement, OperadError> {
    if sigma.len() != e.arity {
        return Err(OperadError::ArityMismatch { expected: e.arity, found: sigma.len() });
    }
    let mut out = OperadElement::zero(e.arity);
    for (t, c) in &e.terms {
        let t2 = t.relabel(&|l| sigma[l as usize - 1] as u8);
        out.add_tree(&t2, c.clone(), sig);
    }
    Ok(out)
}

/// All normal-form trees with leaves `labels` (sorted ascending).
fn trees_on(labels: &[u8], sig: &Signature) -> Vec<Tree> {
    if labels.len() == 1 {
        return vec![Tree::Leaf(labels[0])];
    }
    let rest = &labels[1..];
    let mut out = Vec::new();
    // left block always holds the minimal label
    for mask in 0u32..(1 << rest.len()) {
        if mask == (1 << rest.len()) - 1 {
            continue;
        }
        let mut left = vec![labels[0]];
        let mut right = Vec::new();
        for (k, &l) in rest.iter().enumerate() {
            if mask & (1 << k) != 0 {
                left.push(l);
            } else {
                right.push(l);
            }
        }
        let lt = trees_on(&left, sig);
        let rt = trees_on(&right, sig);
        for g in sig.ids() {
            for a in &lt {
                for b in &rt {
                    out.push(Tree::node(g, a.clone(), b.clone()));
                }
            }
        }
    }
    out.sort();
    out
}

/// Normal-form monomial basis of `T E(n)`.
pub fn free_basis(sig: &Signature, n: usize) -> Result<Vec<Tree>, OperadError> {
    if n > MAX_ARITY {
        return Err(OperadError::ArityTooLarge(n));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let labels: Vec<u8> = (1..=n as u8).collect();
    Ok(trees_on(&labels, sig))
}

/// Occurrences of each generator family in a tree.
pub fn weight(t: &Tree, sig: &Signature) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for g in t.nodes() {
        *m.entry(sig.family_of(g).name.clone()).or_insert(0) += 1;
    }
    m
}

/// Sum of family weights over the nodes of a tree.
pub fn grading(t: &Tree, sig: &Signature) -> usize {
    t.nodes().iter().map(|g| sig.family_of(*g).weight).sum()
}

/// Indexed monomial basis of one arity.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub arity: usize,
    pub trees: Vec<Tree>,
    index: HashMap<Tree, usize>,
}

impl MonomialBasis {
    pub fn new(sig: &Signature, n: usize) -> Result<Self, OperadError> {
        let trees = free_basis(sig, n)?;
        let index = trees.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(MonomialBasis { arity: n, trees, index })
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn index_of(&self, t: &Tree) -> usize {
        *self.index.get(t).unwrap_or_else(|| panic!("tree {t:?} is not a normal-form basis monomial"))
    }

    pub fn element(&self, v: &SparseVec) -> OperadElement {
        let mut e = OperadElement::zero(self.arity);
        for (i, c) in v {
            if !c.is_zero() {
                e.terms.insert(self.trees[*i].clone(), c.clone());
            }
        }
        e
    }
}

fn write_tree(out: &mut String, t: &Tree, sig: &Signature, top: bool) {
    match t {
        Tree::Leaf(l) => {
            let _ = write!(out, "{l}");
        }
        Tree::Node(g, a, b) => {
            let (a, b) = if sig.is_reversed(*g) { (b, a) } else { (a, b) };
            match sig.family_of(*g).glyph {
                Glyph::Bracket { open, close } => {
                    out.push(open);
                    write_tree(out, a, sig, false);
                    out.push(',');
                    write_tree(out, b, sig, false);
                    out.push(close);
                }
                Glyph::Infix(op) => {
                    if !top {
                        out.push('(');
                    }
                    write_tree(out, a, sig, false);
                    out.push(op);
                    write_tree(out, b, sig, false);
                    if !top {
                        out.push(')');
                    }
                }
            }
        }
    }
}

pub fn format_tree(t: &Tree, sig: &Signature) -> String {
    let mut s = String::new();
    write_tree(&mut s, t, sig, true);
    s
}

/// Canonical text form, accepted back by the relation parser.
pub fn format_element(e: &OperadElement, sig: &Signature) -> String {
    if e.terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (t, c)) in e.terms.iter().enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if neg {
            s.push('-');
        } else if k > 0 {
            s.push('+');
        }
        if mag.is_one() {
            write_tree(&mut s, t, sig, true);
        } else {
            // an infix monomial after a coefficient is parenthesised
            let _ = write!(s, "{mag}");
            write_tree(&mut s, t, sig, false);
        }
    }
    s
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn lie_sig() -> Signature {
        Signature::new(vec![Generator::new(
            "lie",
            0,
            SwapKind::Antisymmetric,
            Glyph::Bracket { open: '(', close: ')' },
        )])
    }

    fn leib_sig(deg: i64) -> Signature {
        Signature::new(vec![Generator::new(
            "leib",
            deg,
            SwapKind::Pair,
            Glyph::Bracket { open: '[', close: ']' },
        )])
    }

    fn com_sig() -> Signature {
        Signature::new(vec![Generator::new("com", 0, SwapKind::Symmetric, Glyph::Infix('·'))])
    }

    fn ll_sig() -> Signature {
        lie_sig().join(&leib_sig(1))
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(free_basis(&lie_sig(), 3).unwrap().len(), 3);
        assert_eq!(free_basis(&leib_sig(0), 3).unwrap().len(), 12);
        assert_eq!(free_basis(&ll_sig(), 3).unwrap().len(), 27);
        for sig in [lie_sig(), leib_sig(1), ll_sig(), com_sig()] {
            let d = sig.dim();
            assert_eq!(free_basis(&sig, 4).unwrap().len(), 15 * d * d * d);
        }
        assert!(free_basis(&lie_sig(), 7).is_err());
    }

    #[test]
    fn lie_basis_monomials() {
        let sig = lie_sig();
        let shown: Vec<String> =
            free_basis(&sig, 3).unwrap().iter().map(|t| format_tree(t, &sig)).collect();
        assert_eq!(shown, vec!["(1,(2,3))", "((1,2),3)", "((1,3),2)"]);
    }

    #[test]
    fn com_graft_is_left_comb() {
        let sig = com_sig();
        let m = OperadElement::generator(sig.id("com").unwrap(), &sig);
        let e = graft(&m, 1, &m, &sig).unwrap();
        assert_eq!(e.display(&sig), "(1·2)·3");
        assert_eq!(graft(&m, 1, &OperadElement::identity(), &sig).unwrap(), m);
        assert_eq!(graft(&OperadElement::identity(), 1, &m, &sig).unwrap(), m);
    }

    #[test]
    fn leibniz_graft_right() {
        let sig = leib_sig(0);
        let m = OperadElement::generator(sig.id("leib").unwrap(), &sig);
        let e = graft(&m, 2, &m, &sig).unwrap();
        assert_eq!(e.display(&sig), "[1,[2,3]]");
        assert!(graft(&m, 3, &m, &sig).is_err());
    }

    #[test]
    fn swaps() {
        let sig = lie_sig();
        let m = OperadElement::generator(sig.id("lie").unwrap(), &sig);
        let s = act(&[2, 1], &m, &sig).unwrap();
        assert_eq!(s, m.scaled(&qi(-1)));
        assert_eq!(act(&[1, 2], &m, &sig).unwrap(), m);
        let sig = leib_sig(1);
        let m = OperadElement::generator(sig.id("leib").unwrap(), &sig);
        let s = act(&[2, 1], &m, &sig).unwrap();
        assert_eq!(s.display(&sig), "[2,1]");
        assert_ne!(s, m);
        assert!(act(&[1], &m, &sig).is_err());
    }

    #[test]
    fn weights() {
        let sig = ll_sig();
        let leib = OperadElement::generator(sig.id("leib").unwrap(), &sig);
        let lie = OperadElement::generator(sig.id("lie").unwrap(), &sig);
        let t = graft(&leib, 2, &leib, &sig).unwrap();
        let (tree, _) = t.terms.iter().next().unwrap();
        assert_eq!(weight(tree, &sig)["leib"], 2);
        let t = graft(&leib, 1, &lie, &sig).unwrap();
        let w = weight(t.terms.keys().next().unwrap(), &sig);
        assert_eq!((w["lie"], w["leib"]), (1, 1));
        for tr in free_basis(&sig, 4).unwrap() {
            assert_eq!(tr.nodes().len(), 3);
        }
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        crate::kernel::permutations(n)
            .into_iter()
            .map(|p| p.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    #[test]
    fn action_is_an_action() {
        for sig in [lie_sig(), leib_sig(0), leib_sig(1), ll_sig()] {
            for t in free_basis(&sig, 3).unwrap() {
                let e = OperadElement::from_tree(t, &sig);
                for s in all_perms(3) {
                    for u in all_perms(3) {
                        let lhs = act(&s, &act(&u, &e, &sig).unwrap(), &sig).unwrap();
                        let su: Vec<usize> = (0..3).map(|k| s[u[k] - 1]).collect();
                        let rhs = act(&su, &e, &sig).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn graft_is_associative() {
        // (f ∘_i g) ∘_j h against the reindexed composite, on odd and even generators
        for sig in [ll_sig(), leib_sig(1)] {
            let gens: Vec<OperadElement> =
                sig.ids().map(|g| OperadElement::generator(g, &sig)).collect();
            for f in &gens {
                for g in &gens {
                    for h in &gens {
                        for i in 1..=2 {
                            // sequential: h inserted into a leaf coming from g
                            for j in i..i + 2 {
                                let lhs = graft(&graft(f, i, g, &sig).unwrap(), j, h, &sig).unwrap();
                                let rhs = graft(f, i, &graft(g, j - i + 1, h, &sig).unwrap(), &sig).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normalization_idempotent() {
        let sig = ll_sig();
        let basis = free_basis(&sig, 4).unwrap();
        for (k, t) in basis.iter().enumerate().step_by(7) {
            let e = act(&[3, 1, 4, 2], &OperadElement::from_tree(t.clone(), &sig), &sig).unwrap();
            let mut e2 = e.clone();
            e2.add_tree(&basis[(k * 13) % basis.len()], qi(2), &sig);
            assert_eq!(e2.normalized(&sig), e2);
        }
    }

    #[test]
    fn odd_generators_pick_up_signs_at_arity_four() {
        let sig = leib_sig(1);
        let l = sig.id("leib").unwrap();
        // [[3,4],[1,2]] = -[[1,2],[3,4]] reversed: both subtrees odd
        let t = Tree::node(
            l,
            Tree::node(l, Tree::Leaf(3), Tree::Leaf(4)),
            Tree::node(l, Tree::Leaf(1), Tree::Leaf(2)),
        );
        let (_, s) = normalize_tree(&t, &sig);
        assert_eq!(s, Sign::Minus);
    }
}
