//! Named quadratic presentations and the operadic derived-bracket checks.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::dsl::parse_relation;
use crate::free_operad::{GenId, Generator, Glyph, MonomialBasis, OperadElement, Signature, SwapKind, Tree};
use crate::kernel::{qi, Rational, Sign};
use crate::linalg::{kernel, SparseVec, Subspace};
use crate::quadratic::{
    hadamard_dim, holds_in, joint_signature, quotient_dim, relation_span, white_product, QuadraticError,
    QuadraticPresentation,
};

pub const NAMES: [&str; 13] =
    ["Com", "Lie", "Leib", "sLeib", "Zinb", "sInvZinb", "Perm", "sPerm", "D", "LL", "sInvLL", "ZC", "sZC"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZooError {
    #[error("unknown operad `{0}`; known: {}", NAMES.join(", "))]
    Unknown(String),
    #[error("no rewrite rule registered for ({0}, {1})")]
    NoDelta(String, String),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
}

fn paren() -> Glyph {
    Glyph::Bracket { open: '(', close: ')' }
}

fn square() -> Glyph {
    Glyph::Bracket { open: '[', close: ']' }
}

fn lie_gen(degree: i64) -> Generator {
    let swap = if degree % 2 == 0 { SwapKind::Antisymmetric } else { SwapKind::Symmetric };
    Generator::new("lie", degree, swap, paren())
}

fn com_gen(degree: i64) -> Generator {
    let swap = if degree % 2 == 0 { SwapKind::Symmetric } else { SwapKind::Antisymmetric };
    Generator::new("com", degree, swap, Glyph::Infix('·'))
}

fn leib_gen(degree: i64) -> Generator {
    Generator::new("leib", degree, SwapKind::Pair, square())
}

fn zinb_gen(degree: i64) -> Generator {
    Generator::new("zinb", degree, SwapKind::Pair, Glyph::Infix('*'))
}

fn perm_gen(degree: i64) -> Generator {
    Generator::new("perm", degree, SwapKind::Pair, Glyph::Infix('◊'))
}

/// Generators of the deriving operad: `c = 1⊗1` and the pair `d⊗1`, `1⊗d`.
pub fn deriving_signature() -> Signature {
    Signature::new(vec![
        Generator::new("c", 0, SwapKind::Symmetric, Glyph::Infix('·')),
        Generator::new("d", 1, SwapKind::Pair, Glyph::Infix('▹')).with_weight(1),
    ])
}

fn build(name: &str, families: Vec<Generator>, relations: &[&str]) -> Result<QuadraticPresentation, ZooError> {
    Ok(QuadraticPresentation::from_text(name, Signature::new(families), relations)?)
}

/// The registered presentation called `name`.
pub fn presentation(name: &str) -> Result<QuadraticPresentation, ZooError> {
    match name {
        "Com" => build(name, vec![com_gen(0)], &["(1·2)·3-1·(2·3)"]),
        "Lie" => build(name, vec![lie_gen(0)], &["((1,2),3)+((3,1),2)+((2,3),1)"]),
        "Leib" => build(name, vec![leib_gen(0)], &["[1,[2,3]]-[[1,2],3]-[2,[1,3]]"]),
        "sLeib" => build(name, vec![leib_gen(1)], &["[1,[2,3]]+[[1,2],3]+[2,[1,3]]"]),
        "Zinb" => build(name, vec![zinb_gen(0)], &["1*(2*3)-(1*2)*3-(2*1)*3"]),
        "sInvZinb" => build(name, vec![zinb_gen(-1)], &["1*(2*3)+(1*2)*3-(2*1)*3"]),
        "Perm" => build(name, vec![perm_gen(0)], &["(1◊2)◊3-(2◊1)◊3", "(1◊2)◊3-1◊(2◊3)"]),
        "sPerm" => build(name, vec![perm_gen(1)], &["(1◊2)◊3+(2◊1)◊3", "(1◊2)◊3+1◊(2◊3)"]),
        "D" => deriving_presentation(),
        "LL" => build(
            name,
            vec![lie_gen(0), leib_gen(1).with_weight(1)],
            &[
                "[1,[2,3]]+[[1,2],3]+[2,[1,3]]",
                "[1,(2,3)]-([1,2],3)-(2,[1,3])",
                "[(1,2),3]-([1,2],3)+([2,1],3)",
                "(1,(2,3))-((1,2),3)-(2,(1,3))",
            ],
        ),
        "sInvLL" => build(
            name,
            vec![lie_gen(-1), leib_gen(0).with_weight(1)],
            &[
                "[1,[2,3]]-[[1,2],3]-[2,[1,3]]",
                "[1,(2,3)]-([1,2],3)-(2,[1,3])",
                "[(1,2),3]+([1,2],3)+([2,1],3)",
                "((1,2),3)+((3,1),2)+((2,3),1)",
            ],
        ),
        "ZC" => build(
            name,
            vec![com_gen(0), zinb_gen(-1).with_weight(1)],
            &["1*(2*3)+(1*2)*3-(2*1)*3", "(1*2)·3-1*(2·3)+(1·2)*3", "1·(2·3)-(1·2)·3"],
        ),
        "sZC" => build(
            name,
            vec![com_gen(1), zinb_gen(0).with_weight(1)],
            &["1*(2*3)-(1*2)*3-(2*1)*3", "(1*2)·3-1*(2·3)-(1·2)*3", "(1·2)·3+1·(2·3)"],
        ),
        other => Err(ZooError::Unknown(other.to_string())),
    }
}

/// Named Koszul dual, where the registry has one.
pub fn named_dual(name: &str) -> Option<&'static str> {
    match name {
        "Lie" => Some("Com"),
        "Com" => Some("Lie"),
        "Leib" => Some("Zinb"),
        "Zinb" => Some("Leib"),
        "sLeib" => Some("sInvZinb"),
        "sInvZinb" => Some("sLeib"),
        "LL" => Some("ZC"),
        "ZC" => Some("LL"),
        "sInvLL" => Some("sZC"),
        "sZC" => Some("sInvLL"),
        _ => None,
    }
}

/// Rewrite rules `Q∘P ⇒ P∘Q` in the joint signature of `(P, Q)`.
pub fn delta_rules(p: &str, q: &str) -> Result<Vec<OperadElement>, ZooError> {
    let texts: &[&str] = match (p, q) {
        ("Lie", "sLeib") => &["[1,(2,3)]-([1,2],3)-(2,[1,3])", "[(1,2),3]-([1,2],3)+([2,1],3)"],
        ("Com", "Lie") => &["(1,2·3)-(1,2)·3-2·(1,3)"],
        _ => return Err(ZooError::NoDelta(p.to_string(), q.to_string())),
    };
    parse_delta(p, q, texts)
}

/// Parse rewrite rules against the joint signature of two registered operads.
pub fn parse_delta(p: &str, q: &str, texts: &[&str]) -> Result<Vec<OperadElement>, ZooError> {
    let sig = joint_signature(&presentation(p)?, &presentation(q)?);
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_relation(t, &sig).map_err(|e| ZooError::Quadratic(QuadraticError::Parse(i, e))))
        .collect()
}

// ---------------------------------------------------------------------------
// The deriving operad

/// A multilinear monomial in `x_i`, `dx_i`, stored in label order.
type Monomial = Vec<(u8, bool)>;

fn differentiate(m: &Monomial) -> Vec<(Monomial, i64)> {
    let mut out = Vec::new();
    let mut odd_before = 0i64;
    for (k, (_, has_d)) in m.iter().enumerate() {
        if !has_d {
            let mut m2 = m.clone();
            m2[k].1 = true;
            out.push((m2, Sign::pow(odd_before).to_i64()));
        } else {
            odd_before += 1;
        }
    }
    out
}

fn eval_tree(t: &Tree, sig: &Signature) -> Vec<(Monomial, i64)> {
    match t {
        Tree::Leaf(l) => vec![(vec![(*l, false)], 1)],
        Tree::Node(g, a, b) => {
            let ea = eval_tree(a, sig);
            let eb = eval_tree(b, sig);
            let (left, right): (Vec<(Monomial, i64)>, Vec<(Monomial, i64)>) = match (sig.family_of(*g).degree, sig.is_reversed(*g)) {
                (0, _) => (ea, eb),
                (_, false) => (ea.iter().flat_map(|(m, c)| differentiate(m).into_iter().map(move |(m2, s)| (m2, s * c))).collect(), eb),
                (_, true) => {
                    let sa = Sign::pow(a.degree(sig)).to_i64();
                    let db = eb.iter().flat_map(|(m, c)| differentiate(m).into_iter().map(move |(m2, s)| (m2, s * c * sa))).collect();
                    (ea, db)
                }
            };
            let mut out = Vec::new();
            for (ma, ca) in &left {
                for (mb, cb) in &right {
                    let mut m = ma.clone();
                    m.extend(mb.iter().copied());
                    out.push((m, ca * cb));
                }
            }
            out
        }
    }
}

/// Evaluate a tree of the deriving operad on `x_1, …, x_n` in the free
/// graded-commutative algebra on `x_i` (even) and `dx_i` (odd): `c(A,B) = AB`,
/// `(d⊗1)(A,B) = d(A)B`, `(1⊗d)(A,B) = (-1)^{|A|} A d(B)`.
///
/// Returns coefficients keyed by the set of labels carrying `d`.
pub fn evaluate(t: &Tree, sig: &Signature) -> BTreeMap<u32, i64> {
    let mut out = BTreeMap::new();
    for (m, c) in eval_tree(t, sig) {
        let degrees: Vec<i64> = m.iter().map(|(_, d)| i64::from(*d)).collect();
        let mut order: Vec<usize> = (0..m.len()).collect();
        order.sort_by_key(|&k| m[k].0);
        let s = crate::kernel::koszul_sign_unchecked(&order, &degrees);
        let mask = m.iter().filter(|(_, d)| *d).fold(0u32, |acc, (l, _)| acc | (1 << (l - 1)));
        *out.entry(mask).or_insert(0) += s.to_i64() * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn evaluation_rows(basis: &MonomialBasis, sig: &Signature) -> BTreeMap<u32, SparseVec> {
    let mut rows: BTreeMap<u32, SparseVec> = BTreeMap::new();
    for (k, t) in basis.trees.iter().enumerate() {
        for (mask, c) in evaluate(t, sig) {
            rows.entry(mask).or_default().insert(k, qi(c));
        }
    }
    rows
}

/// `D = (c, d⊗1, 1⊗d; ker ev at arity 3)`.
pub fn deriving_presentation() -> Result<QuadraticPresentation, ZooError> {
    let sig = deriving_signature();
    let basis = MonomialBasis::new(&sig, 3).map_err(QuadraticError::from)?;
    let rows: Vec<SparseVec> = evaluation_rows(&basis, &sig).into_values().collect();
    let relations = kernel(&rows, basis.len()).iter().map(|v| basis.element(v)).collect();
    Ok(QuadraticPresentation::new("D", sig, relations)?)
}

/// Rank of the evaluation map on `T E_D(n)`.
pub fn deriving_image_dim(n: usize) -> Result<usize, ZooError> {
    let sig = deriving_signature();
    let basis = MonomialBasis::new(&sig, n).map_err(QuadraticError::from)?;
    let rows = evaluation_rows(&basis, &sig);
    // rank of the transpose equals rank of the map
    let mut s = Subspace::new();
    for r in rows.values() {
        s.insert(r);
    }
    Ok(s.rank())
}

/// d-patterns of arity `n`: subsets of `{1..n}` of size at most `n−1`.
pub fn d_patterns(n: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| (m.count_ones() as usize) < n).collect()
}

/// `dim D(n) = 2ⁿ − 1` by counting d-patterns.
pub fn deriving_dim(n: usize) -> usize {
    d_patterns(n).len()
}

// ---------------------------------------------------------------------------
// Operadic derived bracket

#[derive(Debug, Clone, Serialize)]
pub struct DerivedBracketReport {
    /// The sPerm relations hold in the top-degree part of D.
    pub perm_relation: bool,
    /// `(n, dim Lie⊗sPerm(n), dim sLeib(n))`.
    pub dims: Vec<(usize, usize, usize)>,
    /// `Lie ∘_M sPerm` has the same relation span as sLeib.
    pub dictionary: bool,
    pub pass: bool,
}

/// Checks `sLeib ≅ Lie ⊗ sPerm` three ways.
pub fn verify_operadic_derived_bracket() -> Result<DerivedBracketReport, ZooError> {
    let d = presentation("D")?;
    let sperm = presentation("sPerm")?;
    let lie = presentation("Lie")?;
    let sleib = presentation("sLeib")?;
    // ◊ ↦ d⊗1, and its transposition ↦ 1⊗d
    let d_id = d.sig.id("d").map_err(QuadraticError::from)?;
    let mut perm_relation = true;
    for r in &sperm.relations {
        let img = r.remap(&|g: GenId| GenId(d_id.0 + (g.0 - sperm.sig.id("perm").unwrap().0)), &d.sig);
        perm_relation &= holds_in(&d, &img)?;
    }
    let mut dims = Vec::new();
    for n in 2..=4 {
        dims.push((n, hadamard_dim(&lie, &sperm, n)?, quotient_dim(&sleib, n)?));
    }
    let w = white_product(&lie, &sperm)?;
    let ws = relation_span(&w, 3)?;
    let ss = relation_span(&sleib, 3)?;
    let to_sleib = |e: &OperadElement| e.remap(&|g| g, &sleib.sig);
    let dictionary = ws.rank() == ss.rank() && ws.elements().iter().all(|e| ss.contains(&to_sleib(e)));
    let pass = perm_relation && dictionary && dims.iter().all(|(_, a, b)| a == b);
    Ok(DerivedBracketReport { perm_relation, dims, dictionary, pass })
}

// ---------------------------------------------------------------------------
// Identities in Zinb ⊙ sCom

fn left_normed(items: Vec<Tree>, g: GenId) -> Tree {
    let mut it = items.into_iter();
    let mut t = it.next().expect("nonempty");
    for x in it {
        t = Tree::node(g, t, x);
    }
    t
}

/// `(1*⋯*n−1)·n − Σ_k 1*⋯*(k·k+1)*⋯*n`, which vanishes in Zinb⊙sCom.
pub fn zinb_com_corollary(n: usize, sig: &Signature) -> Result<OperadElement, ZooError> {
    let star = sig.id("zinb").map_err(QuadraticError::from)?;
    let dot = sig.id("com").map_err(QuadraticError::from)?;
    let leaves: Vec<Tree> = (1..=n as u8).map(Tree::Leaf).collect();
    let lhs = Tree::node(dot, left_normed(leaves[..n - 1].to_vec(), star), leaves[n - 1].clone());
    let mut e = OperadElement::from_tree(lhs, sig);
    for k in 0..n - 1 {
        let mut items = leaves[..k].to_vec();
        items.push(Tree::node(dot, leaves[k].clone(), leaves[k + 1].clone()));
        items.extend(leaves[k + 2..].iter().cloned());
        e.add_tree(&left_normed(items, star), qi(-1), sig);
    }
    Ok(e)
}

/// Ordered shuffles of two sequences.
fn shuffles<T: Clone>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut s in shuffles(&a[1..], b) {
        s.insert(0, a[0].clone());
        out.push(s);
    }
    for mut s in shuffles(a, &b[1..]) {
        s.insert(0, b[0].clone());
        out.push(s);
    }
    out
}

/// Contractions `w^k`: adjacent letters `k, k+1` (labels) merged by `·`,
/// when both occur consecutively in the word.
fn contract_labels(word: &[Tree], k: u8, dot: GenId) -> Option<Vec<Tree>> {
    let pos = word.iter().position(|t| *t == Tree::Leaf(k))?;
    if word.get(pos + 1) != Some(&Tree::Leaf(k + 1)) {
        return None;
    }
    let mut w = word[..pos].to_vec();
    w.push(Tree::node(dot, Tree::Leaf(k), Tree::Leaf(k + 1)));
    w.extend(word[pos + 2..].iter().cloned());
    Some(w)
}

/// The general product identity for `(1*⋯*i)·(i+1*⋯*n)` in Zinb⊙sCom, as
/// `lhs − rhs`. Superscripts contract consecutive labels of a factor before
/// shuffling; a sum of shuffles multiplies each word on the right.
pub fn zinb_com_lemma(i: usize, n: usize, sig: &Signature) -> Result<OperadElement, ZooError> {
    let star = sig.id("zinb").map_err(QuadraticError::from)?;
    let dot = sig.id("com").map_err(QuadraticError::from)?;
    let leaf = |k: usize| Tree::Leaf(k as u8);
    let word = |a: usize, b: usize| -> Vec<Tree> { (a..=b).map(leaf).collect() };
    let lhs = Tree::node(dot, left_normed(word(1, i), star), left_normed(word(i + 1, n), star));
    let mut e = OperadElement::from_tree(lhs, sig);
    let sub = |w: Vec<Tree>, last: Tree, c: Rational, e: &mut OperadElement| {
        let mut items = w;
        items.push(last);
        e.add_tree(&left_normed(items, star), c, sig);
    };
    // Σ_k ((1*⋯*i)^k ⧢ (i+1*⋯*n−1)) * n
    for k in 1..n {
        if let Some(first) = contract_labels(&word(1, i), k as u8, dot) {
            for s in shuffles(&first, &word(i + 1, n - 1)) {
                sub(s, leaf(n), qi(-1), &mut e);
            }
        }
    }
    // −Σ_k ((1*⋯*i−1) ⧢ (i+1*⋯*n)^k) * i
    for k in i + 1..n {
        if let Some(second) = contract_labels(&word(i + 1, n), k as u8, dot) {
            for s in shuffles(&word(1, i - 1), &second) {
                sub(s, leaf(i), qi(1), &mut e);
            }
        }
    }
    // ((1*⋯*i−1) ⧢ (i+1*⋯*n−1)) * (i·n)
    for s in shuffles(&word(1, i - 1), &word(i + 1, n - 1)) {
        sub(s, Tree::node(dot, leaf(i), leaf(n)), qi(-1), &mut e);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for n in NAMES {
            let p = presentation(n).unwrap();
            assert!(!p.relations.is_empty(), "{n}");
        }
        assert!(matches!(presentation("Foo"), Err(ZooError::Unknown(_))));
    }

    #[test]
    fn deriving_counts() {
        assert_eq!(deriving_dim(1), 1);
        assert_eq!(deriving_dim(2), 3);
        assert_eq!(deriving_dim(3), 7);
        let d = presentation("D").unwrap();
        assert_eq!(d.relations.len(), 20);
        assert_eq!(quotient_dim(&d, 3).unwrap(), 7);
        assert_eq!(deriving_image_dim(3).unwrap(), 7);
    }

    #[test]
    fn perm_lemma_in_d() {
        // d⊗d⊗1 = −(d⊗1)∘₁(d⊗1) = (d⊗1)∘₁(1⊗d) = (d⊗1)∘₂(d⊗1)
        let sig = deriving_signature();
        let a = parse_relation("(1▹2)▹3", &sig).unwrap();
        let b = parse_relation("(2▹1)▹3", &sig).unwrap();
        let c = parse_relation("1▹(2▹3)", &sig).unwrap();
        let ev = |e: &OperadElement| {
            let mut m: BTreeMap<u32, Rational> = BTreeMap::new();
            for (t, x) in &e.terms {
                for (k, v) in evaluate(t, &sig) {
                    *m.entry(k).or_insert(qi(0)) += x * qi(v);
                }
            }
            m.retain(|_, v| *v != qi(0));
            m
        };
        let top = BTreeMap::from([(0b011u32, qi(1))]);
        assert_eq!(ev(&a.scaled(&qi(-1))), top);
        assert_eq!(ev(&b), top);
        assert_eq!(ev(&c), top);
    }
}
