//! Binary quadratic operads: ideal spans, quotient dimensions, Koszul-dual
//! pairing, distributive laws, Hadamard and white products.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dsl::{parse_relation, ParseError};
use crate::free_operad::{
    act, format_element, grading, graft, GenId, Generator, Glyph, MonomialBasis, OperadElement,
    OperadError, Signature, SwapKind, Tree,
};
use crate::kernel::{permutation_sign, qi, Rational, Sign};
use crate::linalg::{kernel, SparseVec, Subspace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadraticError {
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error("relation {0}: {1}")]
    Parse(usize, ParseError),
    #[error("relation {index} is not of arity 3")]
    NotArityThree { index: usize },
    #[error("relation {index} is not homogeneous in degree and weight")]
    Inhomogeneous { index: usize },
    #[error("ideal spans start at arity 3, got {0}")]
    ArityTooSmall(usize),
    #[error("rewrite rule {index} has a term outside Q∘P and P∘Q")]
    DeltaShape { index: usize },
    #[error("rewrite rules cover {rank} of {needed} monomials of Q∘P")]
    DeltaDomainIncomplete { rank: usize, needed: usize },
    #[error("only arity 4 is supported here, got {0}")]
    UnsupportedArity(usize),
}

/// A binary quadratic presentation `(E, R)`.
#[derive(Debug, Clone)]
pub struct QuadraticPresentation {
    pub name: String,
    pub sig: Signature,
    pub relations: Vec<OperadElement>,
}

impl QuadraticPresentation {
    pub fn new(name: &str, sig: Signature, relations: Vec<OperadElement>) -> Result<Self, QuadraticError> {
        sig.validate()?;
        for (index, r) in relations.iter().enumerate() {
            if r.arity != 3 {
                return Err(QuadraticError::NotArityThree { index });
            }
            let mut keys = r.terms.keys().map(|t| (t.degree(&sig), grading(t, &sig)));
            if let Some(first) = keys.next() {
                if keys.any(|k| k != first) {
                    return Err(QuadraticError::Inhomogeneous { index });
                }
            }
        }
        Ok(QuadraticPresentation { name: name.to_string(), sig, relations })
    }

    pub fn from_text(name: &str, sig: Signature, relations: &[&str]) -> Result<Self, QuadraticError> {
        let rels = relations
            .iter()
            .enumerate()
            .map(|(i, t)| parse_relation(t, &sig).map_err(|e| QuadraticError::Parse(i, e)))
            .collect::<Result<Vec<_>, _>>()?;
        QuadraticPresentation::new(name, sig, rels)
    }

    pub fn display_relations(&self) -> Vec<String> {
        self.relations.iter().map(|r| format_element(r, &self.sig)).collect()
    }
}

/// Subspace of `T E(n)` split into weight blocks.
#[derive(Debug, Clone)]
pub struct RelationSpan {
    pub basis: MonomialBasis,
    weights: Vec<usize>,
    blocks: BTreeMap<usize, Subspace>,
}

impl RelationSpan {
    fn new(sig: &Signature, n: usize) -> Result<Self, OperadError> {
        let basis = MonomialBasis::new(sig, n)?;
        let weights = basis.trees.iter().map(|t| grading(t, sig)).collect();
        Ok(RelationSpan { basis, weights, blocks: BTreeMap::new() })
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(Subspace::rank).sum()
    }

    /// Rank inside one weight block.
    pub fn rank_in(&self, w: usize) -> usize {
        self.blocks.get(&w).map_or(0, Subspace::rank)
    }

    /// Weight-homogeneous components of a vector.
    fn split(&self, v: &SparseVec) -> BTreeMap<usize, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (i, c) in v {
            out.entry(self.weights[*i]).or_default().insert(*i, c.clone());
        }
        out
    }

    /// Insert the components of `v`; returns the enlarged components.
    fn insert(&mut self, v: &SparseVec) -> Vec<SparseVec> {
        let mut grown = Vec::new();
        for (w, part) in self.split(v) {
            if self.blocks.entry(w).or_default().insert(&part) {
                grown.push(part);
            }
        }
        grown
    }

    pub fn contains_vec(&self, v: &SparseVec) -> bool {
        self.split(v)
            .iter()
            .all(|(w, part)| self.blocks.get(w).is_some_and(|s| s.contains(part)))
    }

    pub fn contains(&self, e: &OperadElement) -> bool {
        e.arity == self.basis.arity && self.contains_vec(&e.to_vector(&self.basis))
    }

    pub fn basis_vectors(&self) -> Vec<SparseVec> {
        self.blocks.values().flat_map(Subspace::basis).collect()
    }

    pub fn elements(&self) -> Vec<OperadElement> {
        self.basis_vectors().iter().map(|v| self.basis.element(v)).collect()
    }

    /// Number of monomials of each weight.
    pub fn monomials_by_weight(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for w in &self.weights {
            *m.entry(*w).or_insert(0) += 1;
        }
        m
    }

    /// Close under the symmetric group, starting from the given new vectors.
    fn close_under_symmetric(&mut self, sig: &Signature, mut queue: VecDeque<SparseVec>) {
        let n = self.basis.arity;
        let transpositions: Vec<Vec<usize>> = (1..n)
            .map(|k| {
                let mut s: Vec<usize> = (1..=n).collect();
                s.swap(k - 1, k);
                s
            })
            .collect();
        while let Some(v) = queue.pop_front() {
            let e = self.basis.element(&v);
            for s in &transpositions {
                let img = act(s, &e, sig).expect("arity matches").to_vector(&self.basis);
                queue.extend(self.insert(&img));
            }
        }
    }
}

/// Span of the ideal generated by `R` inside `T E(n)`.
///
/// At arity 3 this is the symmetric-group orbit of `R`; above it, each basis
/// element of the previous arity is grafted with every generator in both
/// orders, then the result is closed under the symmetric group.
pub fn relation_span(p: &QuadraticPresentation, n: usize) -> Result<RelationSpan, QuadraticError> {
    if n < 3 {
        return Err(QuadraticError::ArityTooSmall(n));
    }
    let mut span = RelationSpan::new(&p.sig, n)?;
    let mut queue = VecDeque::new();
    if n == 3 {
        for r in &p.relations {
            queue.extend(span.insert(&r.to_vector(&span.basis)));
        }
    } else {
        let below = relation_span(p, n - 1)?;
        let gens: Vec<OperadElement> = p.sig.ids().map(|g| OperadElement::generator(g, &p.sig)).collect();
        for x in below.elements() {
            for e in &gens {
                for i in 1..n {
                    let y = graft(&x, i, e, &p.sig)?;
                    queue.extend(span.insert(&y.to_vector(&span.basis)));
                }
                let y = graft(e, 1, &x, &p.sig)?;
                queue.extend(span.insert(&y.to_vector(&span.basis)));
            }
        }
    }
    span.close_under_symmetric(&p.sig, queue);
    Ok(span)
}

/// `dim P(n)`.
pub fn quotient_dim(p: &QuadraticPresentation, n: usize) -> Result<usize, QuadraticError> {
    match n {
        0 => Ok(0),
        1 => Ok(1),
        2 => Ok(p.sig.dim()),
        _ => {
            let s = relation_span(p, n)?;
            Ok(s.basis.len() - s.rank())
        }
    }
}

/// `dim P(n)` split by weight (the sum of family weights along a tree).
pub fn graded_quotient_dims(p: &QuadraticPresentation, n: usize) -> Result<BTreeMap<usize, usize>, QuadraticError> {
    match n {
        0 => Ok(BTreeMap::new()),
        1 => Ok(BTreeMap::from([(0, 1)])),
        2 => {
            let mut m = BTreeMap::new();
            for g in p.sig.ids() {
                *m.entry(p.sig.family_of(g).weight).or_insert(0) += 1;
            }
            Ok(m)
        }
        _ => {
            let s = relation_span(p, n)?;
            Ok(s.monomials_by_weight().into_iter().map(|(w, k)| (w, k - s.rank_in(w))).collect())
        }
    }
}

/// Whether `e` vanishes in `P(n)`.
pub fn holds_in(p: &QuadraticPresentation, e: &OperadElement) -> Result<bool, QuadraticError> {
    if e.arity < 3 {
        return Ok(e.is_zero());
    }
    Ok(relation_span(p, e.arity)?.contains(e))
}

/// `dim (P ⊗ Q)(n)` for the arity-wise tensor product.
pub fn hadamard_dim(p: &QuadraticPresentation, q: &QuadraticPresentation, n: usize) -> Result<usize, QuadraticError> {
    Ok(quotient_dim(p, n)? * quotient_dim(q, n)?)
}

// ---------------------------------------------------------------------------
// Koszul duality

/// The dual generator family: degree negated, symmetric and antisymmetric
/// exchanged, pairs kept.
pub fn dual_generator(g: &Generator) -> Generator {
    let (name, glyph) = match g.name.as_str() {
        "lie" => ("com".to_string(), Glyph::Infix('·')),
        "com" => ("lie".to_string(), Glyph::Bracket { open: '(', close: ')' }),
        "leib" => ("zinb".to_string(), Glyph::Infix('*')),
        "zinb" => ("leib".to_string(), Glyph::Bracket { open: '[', close: ']' }),
        other => (format!("{other}!"), g.glyph.clone()),
    };
    let swap = match g.swap {
        SwapKind::Symmetric => SwapKind::Antisymmetric,
        SwapKind::Antisymmetric => SwapKind::Symmetric,
        SwapKind::Pair => SwapKind::Pair,
    };
    Generator { name, degree: -g.degree, swap, glyph, weight: g.weight }
}

pub fn dual_signature(sig: &Signature) -> Signature {
    Signature::new(sig.families().iter().map(dual_generator).collect())
}

/// Pairing of a generator basis element with a dual one (same family index).
///
/// Pairs use `diag(1, -1)`, so that the transposition matrices `S`, `S'`
/// satisfy `Sᵀ P S' = -P`.
fn generator_pairing(sig: &Signature, g: GenId, dual: &Signature, h: GenId) -> Rational {
    if sig.family_index(g) != dual.family_index(h) || sig.is_reversed(g) != dual.is_reversed(h) {
        return qi(0);
    }
    if sig.is_reversed(g) {
        qi(-1)
    } else {
        qi(1)
    }
}

/// Read an arity-3 normal tree as `(μ ∘_i ν)` with a leaf order.
fn decompose3(t: &Tree) -> Option<(usize, GenId, GenId, Vec<u8>)> {
    match t {
        Tree::Node(mu, a, b) => match (a.as_ref(), b.as_ref()) {
            (Tree::Node(nu, _, _), Tree::Leaf(_)) => Some((1, *mu, *nu, t.leaves())),
            (Tree::Leaf(_), Tree::Node(nu, _, _)) => Some((2, *mu, *nu, t.leaves())),
            _ => None,
        },
        Tree::Leaf(_) => None,
    }
}

/// `⟨μ∘_iν·σ, μ'∘_jν'·σ'⟩ = (-1)^i sgn(σ) δ_ij δ_σσ' ⟨μ,μ'⟩⟨ν,ν'⟩` on normal trees.
pub fn koszul_pair_trees(a: &Tree, sig: &Signature, b: &Tree, dual: &Signature) -> Rational {
    let (Some((i, mu, nu, la)), Some((j, mu2, nu2, lb))) = (decompose3(a), decompose3(b)) else {
        return qi(0);
    };
    if i != j || la != lb {
        return qi(0);
    }
    let sigma: Vec<usize> = la.iter().map(|l| *l as usize - 1).collect();
    let s = Sign::pow(i as i64) * permutation_sign(&sigma);
    s.apply(generator_pairing(sig, mu, dual, mu2) * generator_pairing(sig, nu, dual, nu2))
}

/// Bilinear extension of [`koszul_pair_trees`] to arity-3 elements.
pub fn koszul_pair(
    a: &OperadElement,
    sig: &Signature,
    b: &OperadElement,
    dual: &Signature,
) -> Result<Rational, QuadraticError> {
    for e in [a, b] {
        if e.arity != 3 {
            return Err(OperadError::ArityMismatch { expected: 3, found: e.arity }.into());
        }
    }
    let mut total = qi(0);
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            let v = koszul_pair_trees(ta, sig, tb, dual);
            if !v.is_zero() {
                total += v * ca * cb;
            }
        }
    }
    Ok(total)
}

/// `R^⊥ ⊂ T E^∨(3)` for the pairing above, together with `E^∨`.
pub fn orthogonal_complement(p: &QuadraticPresentation) -> Result<(Signature, RelationSpan), QuadraticError> {
    let dual = dual_signature(&p.sig);
    let span = relation_span(p, 3)?;
    let mut out = RelationSpan::new(&dual, 3)?;
    let rows: Vec<SparseVec> = span
        .elements()
        .iter()
        .map(|r| {
            let mut row = SparseVec::new();
            for (k, t) in out.basis.trees.iter().enumerate() {
                let mut v = qi(0);
                for (tr, c) in &r.terms {
                    v += koszul_pair_trees(tr, &p.sig, t, &dual) * c;
                }
                if !v.is_zero() {
                    row.insert(k, v);
                }
            }
            row
        })
        .collect();
    for v in kernel(&rows, out.basis.len()) {
        out.insert(&v);
    }
    Ok((dual, out))
}

// ---------------------------------------------------------------------------
// Distributive laws

/// The presentation `(E_P ⊕ E_Q, R_P ⊕ Δ ⊕ R_Q)`, weight = number of Q nodes.
pub fn joined_presentation(
    p: &QuadraticPresentation,
    q: &QuadraticPresentation,
    delta: &[OperadElement],
) -> Result<QuadraticPresentation, QuadraticError> {
    let sig = joint_signature(p, q);
    let shift = p.sig.dim() as u16;
    let mut rels: Vec<OperadElement> = p.relations.iter().map(|r| r.remap(&|g| g, &sig)).collect();
    rels.extend(delta.iter().cloned());
    rels.extend(q.relations.iter().map(|r| r.remap(&|g: GenId| GenId(g.0 + shift), &sig)));
    QuadraticPresentation::new(&format!("{}{}", p.name, q.name), sig, rels)
}

/// `E_P ⊕ E_Q` with weights 0 on P and 1 on Q.
pub fn joint_signature(p: &QuadraticPresentation, q: &QuadraticPresentation) -> Signature {
    let sig = p.sig.join(&q.sig);
    let np = p.sig.families().len();
    let weights: Vec<usize> = (0..sig.families().len()).map(|k| usize::from(k >= np)).collect();
    sig.with_weights(&weights)
}

fn is_q(sig: &Signature, g: GenId) -> bool {
    sig.family_of(g).weight == 1
}

/// Root colour, then the colour of the single inner node, at arity 3.
fn colours3(t: &Tree, sig: &Signature) -> Option<(bool, bool)> {
    decompose3(t).map(|(_, mu, nu, _)| (is_q(sig, mu), is_q(sig, nu)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComposeDims {
    /// `P(2)∘(Q(2)⊗Q(2))`
    pub pqq: usize,
    /// `P(2)∘Q(3)`
    pub pq3: usize,
    /// `P(3)∘Q(2)`
    pub p3q: usize,
}

impl ComposeDims {
    pub fn total(&self) -> usize {
        self.pqq + self.pq3 + self.p3q
    }
}

fn leaf_q(t: &Tree, sig: &Signature) -> bool {
    matches!(t, Tree::Node(g, a, b) if is_q(sig, *g) && matches!(**a, Tree::Leaf(_)) && matches!(**b, Tree::Leaf(_)))
}

fn all_q(t: &Tree, sig: &Signature) -> bool {
    t.nodes().iter().all(|g| is_q(sig, *g))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Pqq,
    Pq3,
    P3q,
}

fn classify(t: &Tree, sig: &Signature) -> Option<Family> {
    let Tree::Node(root, a, b) = t else { return None };
    if is_q(sig, *root) {
        return None;
    }
    let nodes = t.nodes();
    let q_count = nodes.iter().filter(|g| is_q(sig, **g)).count();
    match q_count {
        2 if leaf_q(a, sig) && leaf_q(b, sig) => Some(Family::Pqq),
        2 if (matches!(**a, Tree::Leaf(_)) && all_q(b, sig)) || (matches!(**b, Tree::Leaf(_)) && all_q(a, sig)) => {
            Some(Family::Pq3)
        }
        1 => {
            // the Q node must sit directly above two leaves
            fn q_on_leaves(t: &Tree, sig: &Signature) -> bool {
                match t {
                    Tree::Leaf(_) => true,
                    Tree::Node(g, a, b) if is_q(sig, *g) => {
                        matches!(**a, Tree::Leaf(_)) && matches!(**b, Tree::Leaf(_))
                    }
                    Tree::Node(_, a, b) => q_on_leaves(a, sig) && q_on_leaves(b, sig),
                }
            }
            q_on_leaves(t, sig).then_some(Family::P3q)
        }
        _ => None,
    }
}

/// Dimensions of the three monomial families of `(P ⊙ Q)(4)` with two P/Q
/// colours, each modulo the relations living inside it.
pub fn compose_product_dim(
    p: &QuadraticPresentation,
    q: &QuadraticPresentation,
    n: usize,
) -> Result<ComposeDims, QuadraticError> {
    if n != 4 {
        return Err(QuadraticError::UnsupportedArity(n));
    }
    let sig = joint_signature(p, q);
    let shift = p.sig.dim() as u16;
    let basis = MonomialBasis::new(&sig, 4)?;
    let mut counts = [0usize; 3];
    for t in &basis.trees {
        match classify(t, &sig) {
            Some(Family::Pqq) => counts[0] += 1,
            Some(Family::Pq3) => counts[1] += 1,
            Some(Family::P3q) => counts[2] += 1,
            None => {}
        }
    }
    let p_gens: Vec<OperadElement> = p.sig.ids().map(|g| OperadElement::generator(g, &sig)).collect();
    let q_gens: Vec<OperadElement> =
        q.sig.ids().map(|g| OperadElement::generator(GenId(g.0 + shift), &sig)).collect();
    let q_rels: Vec<OperadElement> = relation_span(q, 3)?
        .elements()
        .iter()
        .map(|r| r.remap(&|g: GenId| GenId(g.0 + shift), &sig))
        .collect();
    let p_rels: Vec<OperadElement> =
        relation_span(p, 3)?.elements().iter().map(|r| r.remap(&|g| g, &sig)).collect();

    let inner_rank = |seeds: Vec<OperadElement>| -> Result<usize, QuadraticError> {
        let mut span = RelationSpan::new(&sig, 4)?;
        let mut queue = VecDeque::new();
        for s in seeds {
            queue.extend(span.insert(&s.to_vector(&span.basis)));
        }
        span.close_under_symmetric(&sig, queue);
        Ok(span.rank())
    };
    let mut seeds2 = Vec::new();
    for pg in &p_gens {
        for r in &q_rels {
            seeds2.push(graft(pg, 2, r, &sig)?);
        }
    }
    let mut seeds3 = Vec::new();
    for r in &p_rels {
        for qg in &q_gens {
            for i in 1..=3 {
                seeds3.push(graft(r, i, qg, &sig)?);
            }
        }
    }
    Ok(ComposeDims {
        pqq: counts[0],
        pq3: counts[1] - inner_rank(seeds2)?,
        p3q: counts[2] - inner_rank(seeds3)?,
    })
}

/// Outcome of a distributive-law check at arity 4.
#[derive(Debug, Clone, Serialize)]
pub struct DistributiveReport {
    pub compose: ComposeDims,
    /// Weight → dim of the joined operad at arity 4.
    pub graded: BTreeMap<usize, usize>,
    pub pass: bool,
}

impl DistributiveReport {
    pub fn weight(&self, w: usize) -> usize {
        self.graded.get(&w).copied().unwrap_or(0)
    }

    /// `dim(P̄⊙Q)(4) − (dim PQ¹(4) + dim PQ²(4))`.
    pub fn deficit(&self) -> i64 {
        self.compose.total() as i64 - (self.weight(1) + self.weight(2)) as i64
    }

    pub fn summary(&self) -> String {
        format!(
            "{} = {} + {} : {}",
            self.compose.total(),
            self.weight(1),
            self.weight(2),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Check that `delta` is a distributive law `Q∘P ⇒ P∘Q` by comparing the
/// weight-1 and weight-2 parts of the joined operad at arity 4 with the
/// composition-product families.
///
/// `delta` lives in [`joint_signature`].
pub fn check_distributive(
    p: &QuadraticPresentation,
    q: &QuadraticPresentation,
    delta: &[OperadElement],
) -> Result<DistributiveReport, QuadraticError> {
    let sig = joint_signature(p, q);
    for (index, d) in delta.iter().enumerate() {
        let ok = d.arity == 3
            && d.terms.keys().all(|t| matches!(colours3(t, &sig), Some((true, false)) | Some((false, true))));
        if !ok {
            return Err(QuadraticError::DeltaShape { index });
        }
    }
    // the orbit of delta must rewrite every monomial of Q∘P
    let basis = MonomialBasis::new(&sig, 3)?;
    let qp: Vec<usize> = basis
        .trees
        .iter()
        .enumerate()
        .filter(|(_, t)| colours3(t, &sig) == Some((true, false)))
        .map(|(i, _)| i)
        .collect();
    let mut orbit = Subspace::new();
    for d in delta {
        for s in crate::kernel::permutations(3) {
            let s1: Vec<usize> = s.iter().map(|x| x + 1).collect();
            let img = act(&s1, d, &sig)?.to_vector(&basis);
            let proj: SparseVec = img.into_iter().filter(|(i, _)| qp.contains(i)).collect();
            orbit.insert(&proj);
        }
    }
    if orbit.rank() != qp.len() {
        return Err(QuadraticError::DeltaDomainIncomplete { rank: orbit.rank(), needed: qp.len() });
    }
    let joined = joined_presentation(p, q, delta)?;
    let graded = graded_quotient_dims(&joined, 4)?;
    let compose = compose_product_dim(p, q, 4)?;
    let g = |w| graded.get(&w).copied().unwrap_or(0);
    let pass = g(1) == compose.p3q && g(2) == compose.pqq + compose.pq3;
    Ok(DistributiveReport { compose, graded, pass })
}

// ---------------------------------------------------------------------------
// Manin white product

/// One basis element of `E₁ ⊗ E₂` as a combination of pairs.
type ProductBasis = Vec<(GenId, GenId, Rational)>;

fn product_signature(s1: &Signature, s2: &Signature) -> (Signature, Vec<ProductBasis>) {
    let mut fams = Vec::new();
    let mut expansions = Vec::new();
    let mut glyphs = vec![
        Glyph::Infix('*'),
        Glyph::Infix('◊'),
        Glyph::Infix('▹'),
        Glyph::Bracket { open: '[', close: ']' },
        Glyph::Infix('·'),
        Glyph::Bracket { open: '(', close: ')' },
    ];
    let mut take = |preferred: Glyph| -> Glyph {
        if let Some(k) = glyphs.iter().position(|g| *g == preferred) {
            glyphs.remove(k)
        } else {
            glyphs.pop().unwrap_or(Glyph::Infix('?'))
        }
    };
    let sign_of = |sig: &Signature, g: GenId| sig.swap(g).1.to_rational();
    for (fa, a) in s1.families().iter().enumerate() {
        for (fb, b) in s2.families().iter().enumerate() {
            let ga = s1.ids().find(|g| s1.family_index(*g) == fa && !s1.is_reversed(*g)).unwrap();
            let gb = s2.ids().find(|g| s2.family_index(*g) == fb && !s2.is_reversed(*g)).unwrap();
            let name = format!("{}⊗{}", a.name, b.name);
            let degree = a.degree + b.degree;
            let weight = a.weight + b.weight;
            let one = Rational::one();
            match (a.swap == SwapKind::Pair, b.swap == SwapKind::Pair) {
                (false, false) => {
                    let s = sign_of(s1, ga) * sign_of(s2, gb);
                    let (swap, glyph) = if s.is_one() {
                        (SwapKind::Symmetric, take(Glyph::Infix('·')))
                    } else {
                        (SwapKind::Antisymmetric, take(Glyph::Bracket { open: '(', close: ')' }))
                    };
                    fams.push(Generator { name, degree, swap, glyph, weight });
                    expansions.push(vec![(ga, gb, one)]);
                }
                (true, false) => {
                    fams.push(Generator { name, degree, swap: SwapKind::Pair, glyph: take(Glyph::Bracket { open: '[', close: ']' }), weight });
                    expansions.push(vec![(ga, gb, one)]);
                    expansions.push(vec![(GenId(ga.0 + 1), gb, sign_of(s2, gb))]);
                }
                (false, true) => {
                    fams.push(Generator { name, degree, swap: SwapKind::Pair, glyph: take(Glyph::Bracket { open: '[', close: ']' }), weight });
                    expansions.push(vec![(ga, gb, one)]);
                    expansions.push(vec![(ga, GenId(gb.0 + 1), sign_of(s1, ga))]);
                }
                (true, true) => {
                    let ar = GenId(ga.0 + 1);
                    let br = GenId(gb.0 + 1);
                    fams.push(Generator { name: name.clone(), degree, swap: SwapKind::Pair, glyph: take(Glyph::Infix('*')), weight });
                    expansions.push(vec![(ga, gb, one.clone())]);
                    expansions.push(vec![(ar, br, one.clone())]);
                    fams.push(Generator { name: format!("{name}'"), degree, swap: SwapKind::Pair, glyph: take(Glyph::Infix('◊')), weight });
                    expansions.push(vec![(ga, br, one.clone())]);
                    expansions.push(vec![(ar, gb, one)]);
                }
            }
        }
    }
    (Signature::new(fams), expansions)
}

/// `P₁ ∘_M P₂ = (E₁⊗E₂, Ψ⁻¹(R₁⊗T E₂(3) + T E₁(3)⊗R₂))`.
pub fn white_product(p1: &QuadraticPresentation, p2: &QuadraticPresentation) -> Result<QuadraticPresentation, QuadraticError> {
    let (sig, exp) = product_signature(&p1.sig, &p2.sig);
    let b1 = MonomialBasis::new(&p1.sig, 3)?;
    let b2 = MonomialBasis::new(&p2.sig, 3)?;
    let ann = |p: &QuadraticPresentation, b: &MonomialBasis| -> Result<Vec<SparseVec>, QuadraticError> {
        let rows = relation_span(p, 3)?.basis_vectors();
        Ok(kernel(&rows, b.len()))
    };
    let a1 = ann(p1, &b1)?;
    let a2 = ann(p2, &b2)?;
    let mut span = RelationSpan::new(&sig, 3)?;
    let images: Vec<Vec<(usize, usize, Rational)>> = span
        .basis
        .trees
        .iter()
        .map(|t| {
            psi(t, &exp, &p1.sig, &p2.sig)
                .into_iter()
                .flat_map(|(ta, tb, c)| {
                    let ea = OperadElement::from_tree(ta, &p1.sig);
                    let eb = OperadElement::from_tree(tb, &p2.sig);
                    let mut v = Vec::new();
                    for (x, cx) in &ea.terms {
                        for (y, cy) in &eb.terms {
                            v.push((b1.index_of(x), b2.index_of(y), &c * cx * cy));
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let weights: Vec<usize> = span.basis.trees.iter().map(|t| grading(t, &sig)).collect();
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, w) in weights.iter().enumerate() {
        blocks.entry(*w).or_default().push(k);
    }
    let mut relations = Vec::new();
    for cols in blocks.values() {
        let mut rows = Vec::new();
        for fa in &a1 {
            for fb in &a2 {
                let mut row = SparseVec::new();
                for (local, &k) in cols.iter().enumerate() {
                    let mut v = qi(0);
                    for (i1, i2, c) in &images[k] {
                        if let (Some(x), Some(y)) = (fa.get(i1), fb.get(i2)) {
                            v += c * x * y;
                        }
                    }
                    if !v.is_zero() {
                        row.insert(local, v);
                    }
                }
                rows.push(row);
            }
        }
        for kv in kernel(&rows, cols.len()) {
            let v: SparseVec = kv.into_iter().map(|(local, c)| (cols[local], c)).collect();
            if !span.insert(&v).is_empty() {
                relations.push(span.basis.element(&v));
            }
        }
    }
    QuadraticPresentation::new(&format!("{}∘{}", p1.name, p2.name), sig, relations)
}

/// `Ψ : T(E₁⊗E₂)(3) → T E₁(3) ⊗ T E₂(3)` on one normal tree.
fn psi(t: &Tree, exp: &[ProductBasis], s1: &Signature, s2: &Signature) -> Vec<(Tree, Tree, Rational)> {
    let (i, mu, nu, _) = decompose3(t).expect("arity-3 tree");
    let mut out = Vec::new();
    for (ma, mb, cm) in &exp[mu.0 as usize] {
        for (na, nb, cn) in &exp[nu.0 as usize] {
            let build = |root: GenId, inner: GenId| match t {
                Tree::Node(_, a, b) if i == 1 => {
                    Tree::node(root, a.map_nodes(&|_| inner), (**b).clone())
                }
                Tree::Node(_, a, b) => Tree::node(root, (**a).clone(), b.map_nodes(&|_| inner)),
                Tree::Leaf(_) => unreachable!(),
            };
            // prefix order μ₁ μ₂ ν₁ ν₂ → μ₁ ν₁ | μ₂ ν₂
            let k = Sign::pow(s2.degree(*mb) * s1.degree(*na));
            out.push((build(*ma, *na), build(*mb, *nb), k.apply(cm * cn)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lie() -> QuadraticPresentation {
        let sig = Signature::new(vec![Generator::new(
            "lie",
            0,
            SwapKind::Antisymmetric,
            Glyph::Bracket { open: '(', close: ')' },
        )]);
        QuadraticPresentation::from_text("Lie", sig, &["((1,2),3)+((3,1),2)+((2,3),1)"]).unwrap()
    }

    fn com() -> QuadraticPresentation {
        let sig = Signature::new(vec![Generator::new("com", 0, SwapKind::Symmetric, Glyph::Infix('·'))]);
        QuadraticPresentation::from_text("Com", sig, &["(1·2)·3-1·(2·3)"]).unwrap()
    }

    #[test]
    fn small_dims() {
        assert_eq!(relation_span(&lie(), 3).unwrap().rank(), 1);
        assert_eq!(relation_span(&com(), 3).unwrap().rank(), 2);
        let lie_dims: Vec<usize> = (1..=5).map(|n| quotient_dim(&lie(), n).unwrap()).collect();
        assert_eq!(lie_dims, vec![1, 1, 2, 6, 24]);
        let com_dims: Vec<usize> = (1..=5).map(|n| quotient_dim(&com(), n).unwrap()).collect();
        assert_eq!(com_dims, vec![1, 1, 1, 1, 1]);
        assert!(relation_span(&lie(), 2).is_err());
    }

    #[test]
    fn lie_com_duality() {
        let (dual, perp) = orthogonal_complement(&lie()).unwrap();
        assert_eq!(perp.rank(), 2);
        let c = com();
        assert_eq!(dual.families()[0].name, "com");
        let rc = relation_span(&c, 3).unwrap();
        for x in perp.basis_vectors() {
            assert!(rc.contains_vec(&x));
        }
    }

    #[test]
    fn poisson() {
        let (l, c) = (lie(), com());
        let sig = joint_signature(&c, &l);
        let d = parse_relation("(1,2·3)-(1,2)·3-2·(1,3)", &sig).unwrap();
        let rep = check_distributive(&c, &l, &[d]).unwrap();
        assert_eq!(rep.compose, ComposeDims { pqq: 3, pq3: 8, p3q: 6 });
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.graded.values().sum::<usize>(), 24);
    }

    #[test]
    fn white_com_com() {
        let w = white_product(&com(), &com()).unwrap();
        let dims: Vec<usize> = (1..=4).map(|n| quotient_dim(&w, n).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let sig = lie().sig.join(&com().sig).with_weights(&[0, 1]);
        let r = parse_relation("((1,2),3)+(1·2)·3", &sig).unwrap();
        assert!(matches!(
            QuadraticPresentation::new("bad", sig, vec![r]),
            Err(QuadraticError::Inhomogeneous { index: 0 })
        ));
    }
}
