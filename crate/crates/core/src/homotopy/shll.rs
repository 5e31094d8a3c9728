//! Derived homotopies `(±)ⁱ_m l_m(d^{⊗i}⊗1)` of a formal sh Lie algebra and
//! the square of the induced codifferential on `T̄ s S̄ s g`.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::rc::Rc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::term::{Expr, ShAlphabet, Term};
use super::{derived_homotopy_sign, HomotopyError};
use crate::algebra::{lin_add_all, Lin};
use crate::bar::{
    coderivation_from, Bar, CoalgebraKind, Coderivation, Extension, Multilinear, SymWord, TensorWord, Witness,
};
use crate::kernel::{combinations, tensor_map_sign, Rational, Sign};
use crate::linalg::{SparseVec, Subspace};

/// Largest total arity accepted by [`verify_shll_square`].
pub const MAX_FORMAL_ARITY: usize = 5;

/// `(m, i)`: the part `∂^{(i)}_m`.
pub type Part = (usize, usize);

/// Coderivations built from formal `l_m` (`m ≤ max_l`) and a formal `d`.
pub struct ShEngine<'a> {
    pub alpha: &'a ShAlphabet,
    pub max_l: usize,
    /// Include the signs `(±)ⁱ_m`; off only to exhibit the defect.
    pub signed: bool,
    confluence: Rc<Cell<(usize, usize)>>,
}

impl<'a> ShEngine<'a> {
    pub fn new(alpha: &'a ShAlphabet, max_l: usize) -> Self {
        ShEngine { alpha, max_l, signed: true, confluence: Rc::new(Cell::new((0, 0))) }
    }

    pub fn mixed(&self) -> Bar<'a, ShAlphabet> {
        Bar::new(self.alpha, CoalgebraKind::Mixed)
    }

    pub fn zinbiel(&self) -> Bar<'a, ShAlphabet> {
        Bar::new(self.alpha, CoalgebraKind::Zinbiel)
    }

    pub fn commutative(&self) -> Bar<'a, ShAlphabet> {
        Bar::new(self.alpha, CoalgebraKind::Commutative)
    }

    /// Number of evaluated terms and how many of them the two reduction
    /// orders disagreed on.
    pub fn confluence(&self) -> (usize, usize) {
        self.confluence.get()
    }

    /// `x ↦ sign · l_m(d^{⊗i}⊗1^{⊗m-i})(x)` with Koszul signs for the `d`s.
    pub fn derived_map(&self, m: usize, i: usize) -> Result<Multilinear<'a, Term>, HomotopyError> {
        let sign = if self.signed { derived_homotopy_sign(m, i)? } else { Sign::Plus };
        let alpha = self.alpha;
        let counter = self.confluence.clone();
        Ok(Rc::new(move |xs: &[Term]| {
            let degs: Vec<i64> = xs.iter().map(|x| alpha.term_degree(x)).collect();
            let maps: Vec<i64> = (0..m).map(|k| i64::from(k < i)).collect();
            let s = (sign * tensor_map_sign(&maps, &degs)).to_rational();
            let expr = Expr::L(
                xs.iter()
                    .enumerate()
                    .map(|(k, x)| if k < i { Expr::D(Box::new(Expr::of(x))) } else { Expr::of(x) })
                    .collect(),
            );
            let a = alpha.eval_inner_first(&expr);
            let b = alpha.eval_d_first(&expr);
            let (n, bad) = counter.get();
            counter.set((n + 1, bad + usize::from(a != b)));
            a.into_iter().map(|(t, c)| (t, c * &s)).collect()
        }))
    }

    /// `∂^{(i)}_m` on `T̄ s S̄ s g`, profile `(1,…,1,m-i)`; its degree must be −1.
    pub fn part(&self, m: usize, i: usize) -> Result<Coderivation<'a, Term>, HomotopyError> {
        let mut profile = vec![1; i];
        profile.push(m - i);
        let cod = coderivation_from(&self.mixed(), self.derived_map(m, i)?, &profile, m as i64 - 2 + i as i64)?;
        if cod.degree != -1 {
            return Err(HomotopyError::DegreeMismatch {
                kind: "derived homotopy".into(),
                arity: m,
                expected: -1,
                found: cod.degree,
            });
        }
        Ok(cod)
    }

    /// The diagonal part `∂^{(m-1)}_m` as a coderivation of `T̄ s s g`.
    pub fn diagonal_part(&self, m: usize) -> Result<Coderivation<'a, Term>, HomotopyError> {
        let profile = vec![1; m];
        Ok(coderivation_from(&self.zinbiel(), self.derived_map(m, m - 1)?, &profile, 2 * m as i64 - 3)?)
    }

    /// `∂_m = s l_m (s⁻¹)^{⊗m}` on `S̄ s g`.
    pub fn shlie_part(&self, m: usize) -> Result<Coderivation<'a, Term>, HomotopyError> {
        let alpha = self.alpha;
        let f: Multilinear<'a, Term> = Rc::new(move |xs: &[Term]| alpha.node(xs.to_vec()));
        Ok(coderivation_from(&self.commutative(), f, &[m], m as i64 - 2)?)
    }

    /// Sh-Lie relations among two-node terms on the labels `1..=t`: the
    /// corestriction of `∂_shLie²` on every decorated symmetric word.
    pub fn relations(&self, t: usize) -> Result<Vec<Lin<Term>>, HomotopyError> {
        let bar = self.commutative();
        let parts: Vec<Coderivation<'a, Term>> =
            (1..=self.max_l.min(t)).map(|m| self.shlie_part(m)).collect::<Result<_, _>>()?;
        let exts: Vec<Extension<'_, 'a, ShAlphabet>> = parts.iter().map(|c| Extension::new(&bar, c)).collect();
        let mut out = Vec::new();
        for mask in 0..(1u32 << t) {
            let letters: Vec<Term> =
                (0..t).map(|k| Term::Leaf { label: k as u32 + 1, d: mask & (1 << k) != 0 }).collect();
            let Some((word, s)) = bar.canonical(letters) else { continue };
            let w = TensorWord::single(word);
            let mut v = Lin::new();
            for en in &exts {
                let inner = en.apply(&w);
                for em in &exts {
                    lin_add_all(&mut v, &single_letters(&em.apply_lin(&inner)), &s.to_rational());
                }
            }
            if !v.is_empty() {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// `proj ∂_m ∂_n(w)` for the sh-Lie coderivations.
    pub fn shlie_pair(&self, m: usize, n: usize, w: &TensorWord<Term>) -> Result<Lin<Term>, HomotopyError> {
        let bar = self.commutative();
        let (cm, cn) = (self.shlie_part(m)?, self.shlie_part(n)?);
        let (em, en) = (Extension::new(&bar, &cm), Extension::new(&bar, &cn));
        Ok(single_letters(&em.apply_lin(&en.apply(w))))
    }
}

/// Single-letter component of a sum of words.
pub fn single_letters(v: &Lin<TensorWord<Term>>) -> Lin<Term> {
    let mut out = Lin::new();
    for (w, c) in v {
        if w.weight() == 1 {
            crate::algebra::lin_add(&mut out, &w.0[0].0[0], c);
        }
    }
    out
}

/// Every word of `T̄ s S̄ s g` using each of the labels `1..=t` exactly once.
pub fn multilinear_words(t: usize) -> Vec<TensorWord<Term>> {
    fn go(rest: &[u32], prefix: &mut Vec<SymWord<Term>>, out: &mut Vec<TensorWord<Term>>) {
        if rest.is_empty() {
            out.push(TensorWord(prefix.clone()));
            return;
        }
        for k in 1..=rest.len() {
            for block in combinations(rest.len(), k) {
                let factor = SymWord(block.iter().map(|&b| Term::leaf(rest[b])).collect());
                let others: Vec<u32> = (0..rest.len()).filter(|b| !block.contains(b)).map(|b| rest[b]).collect();
                prefix.push(factor);
                go(&others, prefix, out);
                prefix.pop();
            }
        }
    }
    let labels: Vec<u32> = (1..=t as u32).collect();
    let mut out = Vec::new();
    go(&labels, &mut Vec::new(), &mut out);
    out
}

/// Word `ss1 ⊗ … ⊗ ss(k) ⊗ s(s(k+1)…s(t))` (profile `(1^k, t-k)`).
pub fn basic_word(profile: &[usize]) -> TensorWord<Term> {
    let mut label = 0u32;
    TensorWord(
        profile
            .iter()
            .map(|&a| {
                SymWord(
                    (0..a)
                        .map(|_| {
                            label += 1;
                            Term::leaf(label)
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// `b = r·a` with `r = ±1`, both nonzero.
pub fn sign_ratio(a: &Lin<Term>, b: &Lin<Term>) -> Option<i64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    if a == b {
        return Some(1);
    }
    let neg: Lin<Term> = a.iter().map(|(t, c)| (t.clone(), -c.clone())).collect();
    (neg == *b).then_some(-1)
}

/// One `(i+j, m+n, profile)` block summed over its words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    pub arity: usize,
    pub ij: usize,
    pub mn: usize,
    pub profile: Vec<usize>,
    pub words: usize,
    /// Terms produced before cancellation.
    pub terms: usize,
    pub exact_zero: bool,
    pub reduced_zero: bool,
}

/// `∂^{(i)}_m∂^{(j)}_n(x)` against `∂^{(i-1)}_m∂^{(j+1)}_n(x)` on a basic element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CancelRecord {
    pub m: usize,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub profile: Vec<usize>,
    /// `Some(-1)` when the two products cancel.
    pub ratio: Option<i64>,
}

/// `Σ_{i+j=k} ∂^{(i)}_m∂^{(j)}_n(basic)` against `∂_m∂_n(sd1…sdk·s(k+1)…)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalRecord {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub ratio: Option<i64>,
    /// `(-1)^{Σ_{l≤k} |d l|}`, which is `(-1)^k` for labels of degree 0.
    pub expected: i64,
    /// Both sides are zero.
    pub vanishes: bool,
}

impl DiagonalRecord {
    pub fn holds(&self) -> bool {
        self.vanishes || self.ratio == Some(self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShReport {
    pub max_arity: usize,
    pub label_degrees: Vec<i64>,
    pub relations: BTreeMap<usize, usize>,
    pub blocks: Vec<BlockReport>,
    pub cancellations: Vec<CancelRecord>,
    pub diagonal: Vec<DiagonalRecord>,
    /// Number of evaluated terms and disagreements between reduction orders.
    pub confluence: (usize, usize),
    /// Every block outside the profiles `(1^{i+j}, m+n-1-i-j)` vanishes exactly.
    pub arity_lemma: bool,
    pub zero: bool,
    pub witness: Option<Witness>,
}

struct Reducer {
    index: BTreeMap<Term, usize>,
    span: Subspace,
}

impl Reducer {
    fn vector(&mut self, v: &Lin<Term>) -> SparseVec {
        let mut out = SparseVec::new();
        for (t, c) in v {
            let len = self.index.len();
            let k = *self.index.entry(t.clone()).or_insert(len);
            out.insert(k, c.clone());
        }
        out
    }

    fn new(relations: &[Lin<Term>]) -> Self {
        let mut r = Reducer { index: BTreeMap::new(), span: Subspace::new() };
        for v in relations {
            let x = r.vector(v);
            r.span.insert(&x);
        }
        r
    }

    fn contains(&mut self, v: &Lin<Term>) -> bool {
        let x = self.vector(v);
        self.span.contains(&x)
    }
}

fn parts_up_to(max: usize) -> Vec<Part> {
    (1..=max).flat_map(|m| (0..m).map(move |i| (m, i))).collect()
}

/// `proj ∂^{(i)}_m ∂^{(j)}_n (w)` for every pair with `m + n - 1 = weight(w)`.
fn pair_values<'a>(
    engine: &ShEngine<'a>,
    exts: &BTreeMap<Part, Extension<'_, 'a, ShAlphabet>>,
    w: &TensorWord<Term>,
) -> BTreeMap<(Part, Part), (Lin<Term>, usize)> {
    let t = w.weight();
    let mut out = BTreeMap::new();
    for (&(n, j), eb) in exts {
        if n > t {
            continue;
        }
        let m = t + 1 - n;
        if m > engine.max_l {
            continue;
        }
        let inner = eb.apply(w);
        for i in 0..m {
            let ea = &exts[&(m, i)];
            let mut v = Lin::new();
            let mut terms = 0;
            for (u, c) in &inner {
                if u.weight() != m {
                    continue;
                }
                let r = single_letters(&ea.apply(u));
                terms += r.len();
                lin_add_all(&mut v, &r, c);
            }
            if terms > 0 {
                out.insert(((m, i), (n, j)), (v, terms));
            }
        }
    }
    out
}

fn is_diagonal_profile(profile: &[usize]) -> bool {
    profile[..profile.len() - 1].iter().all(|&a| a == 1)
}

/// Formal check that the derived homotopies of an sh Lie algebra square to
/// zero modulo the sh-Lie relations, for every total arity `≤ max_arity`.
pub fn verify_shll_square(max_arity: usize, label_degrees: &[i64]) -> Result<ShReport, HomotopyError> {
    verify_shll_square_with(max_arity, label_degrees, true)
}

/// As [`verify_shll_square`]; `signed = false` drops every `(±)ⁱ_m`.
pub fn verify_shll_square_with(
    max_arity: usize,
    label_degrees: &[i64],
    signed: bool,
) -> Result<ShReport, HomotopyError> {
    if max_arity > MAX_FORMAL_ARITY {
        return Err(HomotopyError::ArityCap { n: max_arity, cap: MAX_FORMAL_ARITY });
    }
    let alpha = ShAlphabet::new(label_degrees.iter().enumerate().map(|(k, &d)| (k as u32 + 1, d)).collect());
    let mut engine = ShEngine::new(&alpha, max_arity);
    engine.signed = signed;
    let bar = engine.mixed();
    let cods: BTreeMap<Part, Coderivation<'_, Term>> =
        parts_up_to(max_arity).into_iter().map(|p| Ok((p, engine.part(p.0, p.1)?))).collect::<Result<_, HomotopyError>>()?;
    let exts: BTreeMap<Part, Extension<'_, '_, ShAlphabet>> =
        cods.iter().map(|(p, c)| (*p, Extension::new(&bar, c))).collect();

    let mut report = ShReport {
        max_arity,
        label_degrees: label_degrees.to_vec(),
        relations: BTreeMap::new(),
        blocks: Vec::new(),
        cancellations: Vec::new(),
        diagonal: Vec::new(),
        confluence: (0, 0),
        arity_lemma: true,
        zero: true,
        witness: None,
    };
    for t in 1..=max_arity {
        let rels = engine.relations(t)?;
        let mut reducer = Reducer::new(&rels);
        report.relations.insert(t, reducer.span.rank());
        let mut blocks: BTreeMap<(usize, usize, Vec<usize>), BlockReport> = BTreeMap::new();
        for w in multilinear_words(t) {
            let profile = w.profile();
            let mut sums: BTreeMap<(usize, usize), (Lin<Term>, usize)> = BTreeMap::new();
            for (((m, i), (n, j)), (v, terms)) in pair_values(&engine, &exts, &w) {
                let e = sums.entry((i + j, m + n)).or_default();
                lin_add_all(&mut e.0, &v, &Rational::one());
                e.1 += terms;
            }
            for ((ij, mn), (v, terms)) in sums {
                let exact = v.is_empty();
                let reduced = exact || reducer.contains(&v);
                if !is_diagonal_profile(&profile) && !exact {
                    report.arity_lemma = false;
                }
                if !reduced && report.witness.is_none() {
                    report.witness = Some(Witness {
                        law: format!("block (i+j, m+n) = ({ij}, {mn})"),
                        word: bar.show(&w),
                        residual: alpha.show_lin(&v),
                    });
                }
                let b = blocks.entry((ij, mn, profile.clone())).or_insert(BlockReport {
                    arity: t,
                    ij,
                    mn,
                    profile: profile.clone(),
                    words: 0,
                    terms: 0,
                    exact_zero: true,
                    reduced_zero: true,
                });
                b.words += 1;
                b.terms += terms;
                b.exact_zero &= exact;
                b.reduced_zero &= reduced;
            }
        }
        report.blocks.extend(blocks.into_values());
        report.cancellations.extend(cancellations(&engine, &exts, t));
        report.diagonal.extend(diagonal(&engine, &exts, t)?);
    }
    report.zero = report.blocks.iter().all(|b| b.reduced_zero);
    report.confluence = engine.confluence();
    Ok(report)
}

/// Basic elements `(1^p, n-j, 1^{i+j-p-1}, m-i)` of total arity `t`.
fn cancellations<'a>(
    engine: &ShEngine<'a>,
    exts: &BTreeMap<Part, Extension<'_, 'a, ShAlphabet>>,
    t: usize,
) -> Vec<CancelRecord> {
    let mut out = Vec::new();
    for m in 2..=t {
        let n = t + 1 - m;
        for i in 1..m {
            for j in 0..n.saturating_sub(1) {
                for p in j..i + j {
                    let mut profile = vec![1; p];
                    profile.push(n - j);
                    profile.extend(std::iter::repeat_n(1, i + j - p - 1));
                    profile.push(m - i);
                    let w = basic_word(&profile);
                    let vals = pair_values(engine, exts, &w);
                    let a = vals.get(&((m, i), (n, j))).map(|x| x.0.clone()).unwrap_or_default();
                    let b = vals.get(&((m, i - 1), (n, j + 1))).map(|x| x.0.clone()).unwrap_or_default();
                    out.push(CancelRecord { m, n, i, j, p, profile, ratio: sign_ratio(&a, &b) });
                }
            }
        }
    }
    out
}

fn diagonal<'a>(
    engine: &ShEngine<'a>,
    exts: &BTreeMap<Part, Extension<'_, 'a, ShAlphabet>>,
    t: usize,
) -> Result<Vec<DiagonalRecord>, HomotopyError> {
    let mut out = Vec::new();
    for m in 1..=t {
        let n = t + 1 - m;
        for k in 0..t {
            let mut profile = vec![1; k];
            profile.push(t - k);
            let vals = pair_values(engine, exts, &basic_word(&profile));
            let mut lhs = Lin::new();
            for i in 0..=k.min(m - 1) {
                if k - i < n {
                    if let Some((v, _)) = vals.get(&((m, i), (n, k - i))) {
                        lin_add_all(&mut lhs, v, &Rational::one());
                    }
                }
            }
            let letters: Vec<Term> = (1..=t as u32).map(|l| Term::Leaf { label: l, d: (l as usize) <= k }).collect();
            let Some((word, s)) = engine.commutative().canonical(letters) else { continue };
            let mut rhs = engine.shlie_pair(m, n, &TensorWord::single(word))?;
            if s == Sign::Minus {
                rhs = rhs.into_iter().map(|(x, c)| (x, -c)).collect();
            }
            let ratio = sign_ratio(&rhs, &lhs);
            let e: i64 = (1..=k as u32).map(|l| engine.alpha.label_degree(l) + 1).sum();
            let expected = Sign::pow(e).to_i64();
            out.push(DiagonalRecord { m, n, k, ratio, expected, vanishes: lhs.is_empty() && rhs.is_empty() });
        }
    }
    Ok(out)
}

/// Outcome of the exhaustive support check for single parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruningReport {
    pub max_n: usize,
    pub words: usize,
    pub nonzero: usize,
    /// Words of shape `(1,…,2,…,1, n-j, a)` seen, all mapped to zero.
    pub special: usize,
    pub violation: Option<(usize, usize, Vec<usize>)>,
}

fn admissible(n: usize, j: usize, profile: &[usize]) -> bool {
    let (head, last) = profile.split_at(j);
    let last = last[0];
    let ones = |s: &[usize]| s.iter().all(|&a| a == 1);
    let shape1 = j >= 1 && ones(&head[..j - 1]) && head[j - 1] == n - j + 1;
    let shape2 = ones(head) && last >= n - j;
    shape1 || shape2
}

fn special(n: usize, j: usize, profile: &[usize]) -> bool {
    j >= 2 && profile[j - 1] == n - j && {
        let head = &profile[..j - 1];
        head.iter().filter(|&&a| a == 2).count() == 1 && head.iter().all(|&a| a <= 2)
    }
}

/// `∂^{(j)}_n(x) ≠ 0` only on the two admissible shapes, for words with
/// `j + 1` factors and `n ≤ max_n`.
pub fn pruning_check(max_n: usize) -> Result<PruningReport, HomotopyError> {
    let alpha = ShAlphabet::default();
    let engine = ShEngine::new(&alpha, max_n);
    let bar = engine.mixed();
    let mut r = PruningReport { max_n, words: 0, nonzero: 0, special: 0, violation: None };
    for n in 1..=max_n {
        for j in 0..n {
            let cod = engine.part(n, j)?;
            let ext = Extension::new(&bar, &cod);
            for t in n..=n + 2 {
                for w in multilinear_words(t).into_iter().filter(|w| w.len() == j + 1) {
                    r.words += 1;
                    let profile = w.profile();
                    let zero = ext.apply(&w).is_empty();
                    if special(n, j, &profile) {
                        r.special += 1;
                        if !zero && r.violation.is_none() {
                            r.violation = Some((n, j, profile.clone()));
                        }
                    }
                    if !zero {
                        r.nonzero += 1;
                        if !admissible(n, j, &profile) && r.violation.is_none() {
                            r.violation = Some((n, j, profile));
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub max_l: usize,
    pub max_weight: usize,
    pub signed: bool,
    pub words: usize,
    pub zero: bool,
    pub witness: Option<Witness>,
}

/// The diagonal family `(±)^{m-1}_m l_m(d^{⊗m-1}⊗1)` as an sh Leibniz
/// structure on `T̄ s s g`: its square vanishes modulo the sh-Lie relations.
pub fn shll_corollary_check(max_l: usize, max_weight: usize, signed: bool) -> Result<CorollaryReport, HomotopyError> {
    if max_weight > MAX_FORMAL_ARITY {
        return Err(HomotopyError::ArityCap { n: max_weight, cap: MAX_FORMAL_ARITY });
    }
    let alpha = ShAlphabet::default();
    let mut engine = ShEngine::new(&alpha, max_l);
    engine.signed = signed;
    let bar = engine.zinbiel();
    let cods: Vec<Coderivation<'_, Term>> =
        (1..=max_l.min(max_weight)).map(|m| engine.diagonal_part(m)).collect::<Result<_, _>>()?;
    let exts: Vec<Extension<'_, '_, ShAlphabet>> = cods.iter().map(|c| Extension::new(&bar, c)).collect();
    let mut r = CorollaryReport { max_l, max_weight, signed, words: 0, zero: true, witness: None };
    for t in 1..=max_weight {
        let mut reducer = Reducer::new(&engine.relations(t)?);
        for perm in crate::kernel::permutations(t) {
            let w = TensorWord(perm.iter().map(|&k| SymWord(vec![Term::leaf(k as u32 + 1)])).collect());
            r.words += 1;
            let mut v = Lin::new();
            for en in &exts {
                let inner = en.apply(&w);
                for em in &exts {
                    lin_add_all(&mut v, &single_letters(&em.apply_lin(&inner)), &Rational::one());
                }
            }
            if !v.is_empty() && !reducer.contains(&v) && r.witness.is_none() {
                r.zero = false;
                r.witness = Some(Witness { law: "∂∂".into(), word: bar.show(&w), residual: alpha.show_lin(&v) });
            }
        }
    }
    Ok(r)
}
