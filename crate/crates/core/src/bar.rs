//! Cofree commutative, Zinbiel and mixed coalgebras over a graded space,
//! coderivations determined by their corestrictions, and the bar
//! codifferential of a Lie-Leibniz algebra.
//!
//! A letter `x` always stands for the suspended element `s x` of degree
//! `|x| + 1`. In the mixed coalgebra `T̄ s S̄ s g` a factor is `s c` with `c` a
//! symmetric word of letters.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{lin_add, lin_add_all, AlgebraError, Alphabet, BracketAlgebra, Lin, LieLeibnizAlgebra};
use crate::kernel::{combinations, koszul_sign_unchecked, Rational, Sign};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BarError {
    #[error("profile {profile:?} does not fit the {kind:?} coalgebra")]
    ProfileMismatch { profile: Vec<usize>, kind: CoalgebraKind },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoalgebraKind {
    /// `S̄ s g` with `Δ_c` of degree 0.
    Commutative,
    /// `T̄ s s g` with `Δ_z`.
    Zinbiel,
    /// `T̄ s S̄ s g` with `Δ_z` and the odd `Δ_c`.
    Mixed,
}

impl CoalgebraKind {
    fn has_zinb(self) -> bool {
        self != CoalgebraKind::Commutative
    }

    fn has_com(self) -> bool {
        self != CoalgebraKind::Zinbiel
    }

    pub fn admits(self, profile: &[usize]) -> bool {
        if profile.is_empty() || profile.contains(&0) {
            return false;
        }
        match self {
            CoalgebraKind::Commutative => profile.len() == 1,
            CoalgebraKind::Zinbiel => profile.iter().all(|&a| a == 1),
            CoalgebraKind::Mixed => true,
        }
    }
}

/// Graded-symmetric word, letters in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymWord<L>(pub Vec<L>);

impl<L: Ord + Clone> SymWord<L> {
    /// Sort `letters`, returning the Koszul sign of the sort, or `None` when
    /// an odd letter repeats.
    pub fn canonical(letters: Vec<L>, deg: impl Fn(&L) -> i64) -> Option<(SymWord<L>, Sign)> {
        let mut perm: Vec<usize> = (0..letters.len()).collect();
        perm.sort_by(|a, b| letters[*a].cmp(&letters[*b]));
        let degrees: Vec<i64> = letters.iter().map(&deg).collect();
        let sign = koszul_sign_unchecked(&perm, &degrees);
        let sorted: Vec<L> = perm.iter().map(|i| letters[*i].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] && deg(&w[0]).rem_euclid(2) == 1 {
                return None;
            }
        }
        Some((SymWord(sorted), sign))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tensor word of factors; each factor is a symmetric word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorWord<L>(pub Vec<SymWord<L>>);

impl<L: Ord + Clone> TensorWord<L> {
    pub fn single(c: SymWord<L>) -> Self {
        TensorWord(vec![c])
    }

    pub fn letter(x: L) -> Self {
        TensorWord(vec![SymWord(vec![x])])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn profile(&self) -> Vec<usize> {
        self.0.iter().map(|c| c.len()).collect()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|c| c.len()).sum()
    }

    pub fn concat(&self, other: &TensorWord<L>) -> TensorWord<L> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TensorWord(v)
    }
}

pub type Pair<L> = (TensorWord<L>, TensorWord<L>);

/// A cofree coalgebra of the given kind over the letters of `alg`.
pub struct Bar<'a, A: Alphabet> {
    pub alg: &'a A,
    pub kind: CoalgebraKind,
}

impl<'a, A: Alphabet> Clone for Bar<'a, A> {
    fn clone(&self) -> Self {
        Bar { alg: self.alg, kind: self.kind }
    }
}

fn sg(e: i64) -> Rational {
    Sign::pow(e).to_rational()
}

impl<'a, A: Alphabet> Bar<'a, A> {
    pub fn new(alg: &'a A, kind: CoalgebraKind) -> Self {
        Bar { alg, kind }
    }

    /// `|s x|`.
    pub fn letter_degree(&self, x: &A::Elem) -> i64 {
        self.alg.degree(x) + 1
    }

    pub fn sym_degree(&self, c: &SymWord<A::Elem>) -> i64 {
        c.0.iter().map(|x| self.letter_degree(x)).sum()
    }

    /// Degree of one factor (`s c` outside the commutative kind).
    pub fn factor_degree(&self, c: &SymWord<A::Elem>) -> i64 {
        self.sym_degree(c) + i64::from(self.kind.has_zinb())
    }

    pub fn degree(&self, w: &TensorWord<A::Elem>) -> i64 {
        w.0.iter().map(|c| self.factor_degree(c)).sum()
    }

    pub fn canonical(&self, letters: Vec<A::Elem>) -> Option<(SymWord<A::Elem>, Sign)> {
        SymWord::canonical(letters, |x| self.letter_degree(x))
    }

    /// `Δ_c` on a symmetric word: every `(i, n-i)`-unshuffle with its Koszul sign.
    pub fn delta_sym(&self, c: &SymWord<A::Elem>) -> Vec<(SymWord<A::Elem>, SymWord<A::Elem>, Rational)> {
        let n = c.len();
        let degrees: Vec<i64> = c.0.iter().map(|x| self.letter_degree(x)).collect();
        let mut out = Vec::new();
        for i in 1..n {
            for block in combinations(n, i) {
                let mut perm = block.clone();
                perm.extend((0..n).filter(|k| !block.contains(k)));
                let s = koszul_sign_unchecked(&perm, &degrees).to_rational();
                let left = SymWord(perm[..i].iter().map(|k| c.0[*k].clone()).collect());
                let right = SymWord(perm[i..].iter().map(|k| c.0[*k].clone()).collect());
                out.push((left, right, s));
            }
        }
        out
    }

    /// `Δ_z`: unshuffles of all factors but the last, which stays rightmost.
    pub fn delta_zinb(&self, w: &TensorWord<A::Elem>) -> Lin<Pair<A::Elem>> {
        let mut out = Lin::new();
        let n = w.len();
        if n < 2 {
            return out;
        }
        let degrees: Vec<i64> = w.0[..n - 1].iter().map(|c| self.factor_degree(c)).collect();
        for i in 1..n {
            for block in combinations(n - 1, i) {
                let mut perm = block.clone();
                perm.extend((0..n - 1).filter(|k| !block.contains(k)));
                let s = koszul_sign_unchecked(&perm, &degrees).to_rational();
                let left = TensorWord(perm[..i].iter().map(|k| w.0[*k].clone()).collect());
                let mut right: Vec<_> = perm[i..].iter().map(|k| w.0[*k].clone()).collect();
                right.push(w.0[n - 1].clone());
                lin_add(&mut out, &(left, TensorWord(right)), &s);
            }
        }
        out
    }

    /// `Δ_c` of one factor: `(s⊗s)Δ_c⁰ s⁻¹` in the shifted kinds, plain `Δ_c⁰` otherwise.
    fn delta_factor(&self, c: &SymWord<A::Elem>) -> Lin<Pair<A::Elem>> {
        let mut out = Lin::new();
        let shifted = self.kind.has_zinb();
        for (l, r, s) in self.delta_sym(c) {
            let s = if shifted { s * sg(self.sym_degree(&l)) } else { s };
            lin_add(&mut out, &(TensorWord::single(l), TensorWord::single(r)), &s);
        }
        out
    }

    /// Commutative coproduct; for the mixed kind this is the odd `Δ_c` of the
    /// cofree `Zinb⊙sCom`-coalgebra.
    pub fn delta_com(&self, w: &TensorWord<A::Elem>) -> Lin<Pair<A::Elem>> {
        match self.kind {
            CoalgebraKind::Zinbiel => Lin::new(),
            CoalgebraKind::Commutative => {
                assert_eq!(w.len(), 1, "commutative words have one factor");
                self.delta_factor(&w.0[0])
            }
            CoalgebraKind::Mixed => self.delta_mixed(w),
        }
    }

    /// The mixed `Δ_c` on `s c_1 ⊗ … ⊗ s c_n`.
    pub fn delta_mixed(&self, w: &TensorWord<A::Elem>) -> Lin<Pair<A::Elem>> {
        let n = w.len();
        let fdeg: Vec<i64> = w.0.iter().map(|c| self.factor_degree(c)).collect();
        let mut out = Lin::new();
        if n == 0 {
            return out;
        }
        if n == 1 {
            return self.delta_factor(&w.0[0]);
        }
        // split one inner factor; the halves stay adjacent on the left, the last factor on the right
        let mut first = Lin::new();
        for k in 0..n - 1 {
            let pre = sg(fdeg[..k].iter().sum());
            for ((x1, x2), cx) in self.delta_factor(&w.0[k]) {
                let block_deg = self.degree(&x1) + self.degree(&x2);
                let mut degrees = fdeg[..n - 1].to_vec();
                degrees[k] = block_deg;
                let others: Vec<usize> = (0..n - 1).filter(|&j| j != k).collect();
                for i in 0..others.len() + 1 {
                    for pick in combinations(others.len(), i) {
                        let mut left: Vec<usize> = pick.iter().map(|&t| others[t]).collect();
                        left.push(k);
                        left.sort_unstable();
                        let mut perm = left.clone();
                        perm.extend((0..n - 1).filter(|j| !left.contains(j)));
                        let eps = koszul_sign_unchecked(&perm, &degrees).to_rational();
                        let mut lw = Vec::new();
                        for &j in &left {
                            if j == k {
                                lw.extend(x1.0.iter().cloned());
                                lw.extend(x2.0.iter().cloned());
                            } else {
                                lw.push(w.0[j].clone());
                            }
                        }
                        let mut rw: Vec<_> = perm[left.len()..].iter().map(|j| w.0[*j].clone()).collect();
                        rw.push(w.0[n - 1].clone());
                        lin_add(&mut first, &(TensorWord(lw), TensorWord(rw)), &(&pre * &cx * eps));
                    }
                }
            }
        }
        for ((a, b), c) in &first {
            lin_add(&mut out, &(a.clone(), b.clone()), c);
            let t = -sg(self.degree(a) * self.degree(b));
            lin_add(&mut out, &(b.clone(), a.clone()), &(c * t));
        }
        // split the last factor, deal the rest over both sides
        let pre = sg(fdeg[..n - 1].iter().sum());
        let last = self.delta_factor(&w.0[n - 1]);
        for i in 0..n {
            for block in combinations(n - 1, i) {
                let mut perm = block.clone();
                perm.extend((0..n - 1).filter(|k| !block.contains(k)));
                let eps = koszul_sign_unchecked(&perm, &fdeg[..n - 1]).to_rational();
                let x1: Vec<_> = perm[..i].iter().map(|k| w.0[*k].clone()).collect();
                let x2: Vec<_> = perm[i..].iter().map(|k| w.0[*k].clone()).collect();
                let x2deg: i64 = x2.iter().map(|c| self.factor_degree(c)).sum();
                for ((a, b), cab) in &last {
                    let s = sg(x2deg * self.degree(a));
                    let mut l = x1.clone();
                    l.extend(a.0.iter().cloned());
                    let mut r = x2.clone();
                    r.extend(b.0.iter().cloned());
                    lin_add(&mut out, &(TensorWord(l), TensorWord(r)), &(&pre * &eps * cab * s));
                }
            }
        }
        out
    }

    /// Apply `f ⊗ 1 + 1 ⊗ f` (an odd or even map of degree `deg`) to pairs.
    pub fn on_pairs(
        &self,
        pairs: &Lin<Pair<A::Elem>>,
        deg: i64,
        f: &dyn Fn(&TensorWord<A::Elem>) -> Lin<TensorWord<A::Elem>>,
    ) -> Lin<Pair<A::Elem>> {
        let mut out = Lin::new();
        for ((a, b), c) in pairs {
            for (fa, k) in f(a) {
                lin_add(&mut out, &(fa, b.clone()), &(c * k));
            }
            let s = sg(deg * self.degree(a));
            for (fb, k) in f(b) {
                lin_add(&mut out, &(a.clone(), fb), &(c * k * &s));
            }
        }
        out
    }

    /// Apply a coproduct to a linear combination.
    pub fn delta_lin(
        &self,
        v: &Lin<TensorWord<A::Elem>>,
        delta: impl Fn(&Self, &TensorWord<A::Elem>) -> Lin<Pair<A::Elem>>,
    ) -> Lin<Pair<A::Elem>> {
        let mut out = Lin::new();
        for (w, c) in v {
            lin_add_all(&mut out, &delta(self, w), c);
        }
        out
    }

    pub fn show_factor(&self, c: &SymWord<A::Elem>) -> String {
        let inner: Vec<String> = c.0.iter().map(|x| format!("s{}", self.alg.show(x))).collect();
        match (self.kind.has_zinb(), c.len()) {
            (false, _) => inner.concat(),
            (true, 1) => format!("s{}", inner[0]),
            (true, _) => format!("s({})", inner.concat()),
        }
    }

    pub fn show(&self, w: &TensorWord<A::Elem>) -> String {
        if w.is_empty() {
            return "∅".into();
        }
        w.0.iter().map(|c| self.show_factor(c)).collect::<Vec<_>>().join("⊗")
    }

    pub fn show_lin(&self, v: &Lin<TensorWord<A::Elem>>) -> String {
        crate::algebra::format_lin(v, |w| self.show(w))
    }

    pub fn show_pairs(&self, v: &Lin<Pair<A::Elem>>) -> String {
        crate::algebra::format_lin(v, |(a, b)| format!("({}, {})", self.show(a), self.show(b)))
    }

    /// All basis words of weight `1..=max_weight` over `letters`.
    pub fn basis_words(&self, letters: &[A::Elem], max_weight: usize) -> Vec<TensorWord<A::Elem>> {
        let mut out = Vec::new();
        for wt in 1..=max_weight {
            for profile in compositions(wt) {
                if !self.kind.admits(&profile) {
                    continue;
                }
                let factors: Vec<Vec<SymWord<A::Elem>>> =
                    profile.iter().map(|&a| self.sym_words(letters, a)).collect();
                let mut acc: Vec<Vec<SymWord<A::Elem>>> = vec![vec![]];
                for choices in &factors {
                    let mut next = Vec::with_capacity(acc.len() * choices.len());
                    for prefix in &acc {
                        for c in choices {
                            let mut p = prefix.clone();
                            p.push(c.clone());
                            next.push(p);
                        }
                    }
                    acc = next;
                }
                out.extend(acc.into_iter().map(TensorWord));
            }
        }
        out
    }

    /// Nonzero symmetric words of length `a`.
    pub fn sym_words(&self, letters: &[A::Elem], a: usize) -> Vec<SymWord<A::Elem>> {
        let mut sorted = letters.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.multisets(&sorted, 0, a, &mut cur, &mut out);
        out
    }

    fn multisets(&self, letters: &[A::Elem], start: usize, left: usize, cur: &mut Vec<A::Elem>, out: &mut Vec<SymWord<A::Elem>>) {
        if left == 0 {
            out.push(SymWord(cur.clone()));
            return;
        }
        for i in start..letters.len() {
            let x = &letters[i];
            if cur.last() == Some(x) && self.letter_degree(x).rem_euclid(2) == 1 {
                continue;
            }
            cur.push(x.clone());
            self.multisets(letters, i, left - 1, cur, out);
            cur.pop();
        }
    }
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
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

/// Witness `k` (1-based) of `(a_i) ∼_k (b_i)`, the smallest one if several.
pub fn arity_relation(a: &[usize], b: &[usize]) -> Option<usize> {
    let n = a.len();
    if n == 0 || b.len() != n {
        return None;
    }
    for k in 1..=n {
        if a[..k - 1] != b[..k - 1] {
            break;
        }
        if k == n {
            if a[n - 1] <= b[n - 1] {
                return Some(k);
            }
        } else if a[k - 1] + a[k] == b[k - 1] && a[k + 1..] == b[k..n - 1] {
            return Some(k);
        }
    }
    None
}

/// Corestriction of one part: a word of the matching profile to `Σ c · e`,
/// meaning `Σ c · (suspended e)` as a single letter.
pub type Corestriction<'a, E> = Rc<dyn Fn(&TensorWord<E>) -> Lin<E> + 'a>;

/// Multilinear map on `g` with flattened arguments.
pub type Multilinear<'a, E> = Rc<dyn Fn(&[E]) -> Lin<E> + 'a>;

/// A coderivation given by its corestriction, as a sum of parts with fixed profiles.
#[derive(Clone)]
pub struct Coderivation<'a, E> {
    pub kind: CoalgebraKind,
    pub degree: i64,
    pub parts: Vec<(Vec<usize>, Corestriction<'a, E>)>,
}

impl<'a, E: Ord + Clone + 'a> Coderivation<'a, E> {
    pub fn zero(kind: CoalgebraKind, degree: i64) -> Self {
        Coderivation { kind, degree, parts: Vec::new() }
    }

    /// Sum of two coderivations of the same degree.
    pub fn plus(mut self, other: &Coderivation<'a, E>) -> Self {
        assert_eq!(self.degree, other.degree);
        self.parts.extend(other.parts.iter().cloned());
        self
    }

    pub fn scaled(self, s: Rational) -> Self {
        let parts = self
            .parts
            .into_iter()
            .map(|(p, f)| {
                let s = s.clone();
                let g: Corestriction<'a, E> = Rc::new(move |w: &TensorWord<E>| {
                    f(w).into_iter().map(|(k, c)| (k, c * &s)).collect()
                });
                (p, g)
            })
            .collect();
        Coderivation { parts, ..self }
    }
}

/// Sign of desuspending `s c_1 ⊗ … ⊗ s c_n` and then every letter, left to right.
pub fn desuspension_sign<A: Alphabet>(bar: &Bar<'_, A>, w: &TensorWord<A::Elem>) -> Sign {
    let mut e = 0i64;
    if bar.kind.has_zinb() {
        let mut prefix = 0;
        for c in &w.0 {
            e += prefix;
            prefix += bar.factor_degree(c);
        }
    }
    let mut prefix = 0;
    for c in &w.0 {
        for x in &c.0 {
            e += prefix;
            prefix += bar.letter_degree(x);
        }
    }
    Sign::pow(e)
}

/// The paper-style closed form of [`desuspension_sign`] for labels of degree 0.
pub fn general_sign(profile: &[usize]) -> Sign {
    let n = profile.len() as i64;
    let a: Vec<i64> = profile.iter().map(|&x| x as i64).collect();
    let mut e = 0i64;
    for i in 0..a.len().saturating_sub(1) {
        e += (a[i] + 1) * (n - 1 - i as i64);
        e += a[i + 1] * a[..=i].iter().sum::<i64>();
    }
    e += a.iter().map(|x| x * (x - 1) / 2).sum::<i64>();
    Sign::pow(e)
}

/// The coderivation induced by `f` of degree `f_degree` on the given profile:
/// `ss f (s⁻¹…)(s⁻¹…)` in the shifted kinds, `s f (s⁻¹)^{⊗m}` in the commutative one.
pub fn coderivation_from<'a, A: Alphabet>(
    bar: &Bar<'a, A>,
    f: Multilinear<'a, A::Elem>,
    profile: &[usize],
    f_degree: i64,
) -> Result<Coderivation<'a, A::Elem>, BarError> {
    if !bar.kind.admits(profile) {
        return Err(BarError::ProfileMismatch { profile: profile.to_vec(), kind: bar.kind });
    }
    let total: i64 = profile.iter().sum::<usize>() as i64;
    let degree = match bar.kind {
        CoalgebraKind::Commutative => 1 + f_degree - total,
        _ => crate::kernel::coderivation_degree(f_degree, profile),
    };
    let b = bar.clone();
    let core: Corestriction<'a, A::Elem> = Rc::new(move |w: &TensorWord<A::Elem>| {
        let args: Vec<A::Elem> = w.0.iter().flat_map(|c| c.0.iter().cloned()).collect();
        let s = desuspension_sign(&b, w).to_rational();
        f(&args).into_iter().map(|(k, c)| (k, c * &s)).collect()
    });
    Ok(Coderivation { kind: bar.kind, degree, parts: vec![(profile.to_vec(), core)] })
}

/// Evaluates a coderivation on words, rebuilding it from its corestriction
/// through the coproducts. Results are memoized per word.
pub struct Extension<'b, 'a, A: Alphabet> {
    pub bar: Bar<'a, A>,
    pub cod: &'b Coderivation<'a, A::Elem>,
    memo: RefCell<BTreeMap<TensorWord<A::Elem>, Lin<TensorWord<A::Elem>>>>,
}

impl<'b, 'a, A: Alphabet> Extension<'b, 'a, A> {
    pub fn new(bar: &Bar<'a, A>, cod: &'b Coderivation<'a, A::Elem>) -> Self {
        assert_eq!(bar.kind, cod.kind, "coalgebra kinds differ");
        Extension { bar: bar.clone(), cod, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn degree(&self) -> i64 {
        self.cod.degree
    }

    pub fn apply(&self, w: &TensorWord<A::Elem>) -> Lin<TensorWord<A::Elem>> {
        if let Some(v) = self.memo.borrow().get(w) {
            return v.clone();
        }
        let v = self.compute(w);
        self.memo.borrow_mut().insert(w.clone(), v.clone());
        v
    }

    pub fn apply_lin(&self, v: &Lin<TensorWord<A::Elem>>) -> Lin<TensorWord<A::Elem>> {
        let mut out = Lin::new();
        for (w, c) in v {
            lin_add_all(&mut out, &self.apply(w), c);
        }
        out
    }

    fn compute(&self, w: &TensorWord<A::Elem>) -> Lin<TensorWord<A::Elem>> {
        let bar = &self.bar;
        let mut out = Lin::new();
        let profile = w.profile();
        for (p, f) in &self.cod.parts {
            if *p == profile {
                for (e, c) in f(w) {
                    lin_add(&mut out, &TensorWord::letter(e), &c);
                }
            }
        }
        let me = |u: &TensorWord<A::Elem>| self.apply(u);
        if bar.kind.has_zinb() && w.len() >= 2 {
            // u_1…u_m is read off from the (u_{<m}, u_m) component of Δ_z ∂ w
            let r = bar.on_pairs(&bar.delta_zinb(w), self.degree(), &me);
            for ((a, b), c) in r {
                if b.len() == 1 {
                    lin_add(&mut out, &a.concat(&b), &c);
                }
            }
        }
        if bar.kind.has_com() && w.weight() >= 2 {
            let s = if bar.kind == CoalgebraKind::Mixed { sg(self.degree()) } else { Rational::one() };
            let r = bar.on_pairs(&bar.delta_com(w), self.degree(), &me);
            for ((a, b), c) in r {
                if a.len() != 1 || b.len() != 1 || a.0[0].len() != 1 {
                    continue;
                }
                let x = &a.0[0].0[0];
                let rest = &b.0[0];
                if rest.0.first().map(|y| x > y).unwrap_or(false) {
                    continue;
                }
                let mut letters = vec![x.clone()];
                letters.extend(rest.0.iter().cloned());
                let Some((word, _)) = bar.canonical(letters) else {
                    continue;
                };
                let u = TensorWord::single(word);
                let d = bar.delta_com(&u).get(&(a.clone(), b.clone())).cloned().unwrap_or_default();
                debug_assert!(!d.is_zero());
                lin_add(&mut out, &u, &(c * &s / d));
            }
        }
        out
    }
}

/// First word where a coproduct compatibility fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub law: String,
    pub word: String,
    pub residual: String,
}

/// Check `(∂⊗1+1⊗∂)Δ_z = Δ_z∂` and `(-1)^{|∂|}(∂⊗1+1⊗∂)Δ_c = Δ_c∂` (no sign in
/// the commutative kind) on every word of weight `≤ max_weight`.
pub fn is_coderivation<A: Alphabet>(
    bar: &Bar<'_, A>,
    map: &dyn Fn(&TensorWord<A::Elem>) -> Lin<TensorWord<A::Elem>>,
    degree: i64,
    letters: &[A::Elem],
    max_weight: usize,
) -> Result<usize, Witness> {
    let words = bar.basis_words(letters, max_weight);
    for w in &words {
        let fw = map(w);
        if bar.kind.has_zinb() {
            let lhs = bar.on_pairs(&bar.delta_zinb(w), degree, map);
            let rhs = bar.delta_lin(&fw, Bar::delta_zinb);
            if lhs != rhs {
                return Err(witness(bar, "DDZ", w, &lhs, &rhs));
            }
        }
        if bar.kind.has_com() {
            let s = if bar.kind == CoalgebraKind::Mixed { sg(degree) } else { Rational::one() };
            let lhs = crate::algebra::lin_scaled(&bar.on_pairs(&bar.delta_com(w), degree, map), &s);
            let rhs = bar.delta_lin(&fw, Bar::delta_com);
            if lhs != rhs {
                return Err(witness(bar, "DDC", w, &lhs, &rhs));
            }
        }
    }
    Ok(words.len())
}

fn witness<A: Alphabet>(
    bar: &Bar<'_, A>,
    law: &str,
    w: &TensorWord<A::Elem>,
    lhs: &Lin<Pair<A::Elem>>,
    rhs: &Lin<Pair<A::Elem>>,
) -> Witness {
    let mut diff = lhs.clone();
    lin_add_all(&mut diff, rhs, &-Rational::one());
    Witness { law: law.into(), word: bar.show(w), residual: bar.show_pairs(&diff) }
}

type Triple<L> = (TensorWord<L>, TensorWord<L>, TensorWord<L>);

/// `(δ⊗1)` applied to a sum of pairs; `flip` composes with the Koszul swap
/// of the first two slots.
fn delta_left<A: Alphabet>(
    bar: &Bar<'_, A>,
    p: &Lin<Pair<A::Elem>>,
    delta: &dyn Fn(&TensorWord<A::Elem>) -> Lin<Pair<A::Elem>>,
    flip: bool,
) -> Lin<Triple<A::Elem>> {
    let mut out = Lin::new();
    for ((a, b), c) in p {
        for ((x, y), k) in delta(a) {
            if flip {
                let t = sg(bar.degree(&x) * bar.degree(&y));
                lin_add(&mut out, &(y, x, b.clone()), &(c * k * t));
            } else {
                lin_add(&mut out, &(x, y, b.clone()), &(c * k));
            }
        }
    }
    out
}

/// `(1⊗δ)` with `δ` of degree `delta_degree`.
fn delta_right<A: Alphabet>(
    bar: &Bar<'_, A>,
    p: &Lin<Pair<A::Elem>>,
    delta: &dyn Fn(&TensorWord<A::Elem>) -> Lin<Pair<A::Elem>>,
    delta_degree: i64,
) -> Lin<Triple<A::Elem>> {
    let mut out = Lin::new();
    for ((a, b), c) in p {
        let s = sg(delta_degree * bar.degree(a));
        for ((x, y), k) in delta(b) {
            lin_add(&mut out, &(a.clone(), x, y), &(c * k * &s));
        }
    }
    out
}

/// Words checked by [`coalgebra_laws`], or the first failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub words: usize,
    pub failure: Option<Witness>,
}

/// Co-Zinbiel, `τΔ_c = -Δ_c`, odd coassociativity of `Δ_c` and the mixed
/// compatibility on every word of weight `≤ max_weight`. Mixed kind only.
pub fn coalgebra_laws<A: Alphabet>(bar: &Bar<'_, A>, letters: &[A::Elem], max_weight: usize) -> LawReport {
    let words = bar.basis_words(letters, max_weight);
    let dz = |w: &TensorWord<A::Elem>| bar.delta_zinb(w);
    let dc = |w: &TensorWord<A::Elem>| bar.delta_com(w);
    let fail = |law: &str, w: &TensorWord<A::Elem>, lhs: &Lin<Triple<A::Elem>>, rhs: &Lin<Triple<A::Elem>>| {
        let mut diff = lhs.clone();
        lin_add_all(&mut diff, rhs, &-Rational::one());
        Witness { law: law.into(), word: bar.show(w), residual: format!("{} terms differ", diff.len()) }
    };
    for w in &words {
        let z = bar.delta_zinb(w);
        let c = bar.delta_com(w);
        let lhs = delta_right(bar, &z, &dz, 0);
        let mut rhs = delta_left(bar, &z, &dz, false);
        lin_add_all(&mut rhs, &delta_left(bar, &z, &dz, true), &Rational::one());
        if lhs != rhs {
            return LawReport { words: words.len(), failure: Some(fail("co-Zinbiel", w, &lhs, &rhs)) };
        }
        let mut flipped = Lin::new();
        for ((a, b), k) in &c {
            lin_add(&mut flipped, &(b.clone(), a.clone()), &(k * -sg(bar.degree(a) * bar.degree(b))));
        }
        if flipped != c {
            let residual = bar.show_pairs(&flipped);
            return LawReport {
                words: words.len(),
                failure: Some(Witness { law: "τΔ_c = -Δ_c".into(), word: bar.show(w), residual }),
            };
        }
        let lhs = delta_left(bar, &c, &dc, false);
        let rhs: Lin<_> = delta_right(bar, &c, &dc, 1).into_iter().map(|(k, v)| (k, -v)).collect();
        if lhs != rhs {
            return LawReport { words: words.len(), failure: Some(fail("coassociativity", w, &lhs, &rhs)) };
        }
        let lhs = delta_left(bar, &c, &dz, false);
        let mut rhs = delta_right(bar, &z, &dc, 1);
        lin_add_all(&mut rhs, &delta_left(bar, &z, &dc, false), &Rational::one());
        if lhs != rhs {
            return LawReport { words: words.len(), failure: Some(fail("compatibility", w, &lhs, &rhs)) };
        }
    }
    LawReport { words: words.len(), failure: None }
}

/// `∂_Lie + ∂_Leib` on the mixed coalgebra; bidegree must be (0,1).
pub fn bar_codifferential<'a>(
    bar: &Bar<'a, LieLeibnizAlgebra>,
) -> Result<Coderivation<'a, usize>, BarError> {
    let alg = bar.alg;
    if (alg.p, alg.q) != (0, 1) {
        return Err(AlgebraError::NotShiftable { p: alg.p, q: alg.q }.into());
    }
    Ok(lie_part(bar)?.plus(&leib_part(bar)?))
}

/// `∂_Lie := ss(.,.)(s⁻¹⊗s⁻¹)s⁻¹` (or `s(.,.)(s⁻¹⊗s⁻¹)` when commutative).
pub fn lie_part<'a, A: BracketAlgebra>(bar: &Bar<'a, A>) -> Result<Coderivation<'a, A::Elem>, BarError> {
    let alg = bar.alg;
    let f: Multilinear<'a, A::Elem> = Rc::new(move |xs: &[A::Elem]| alg.lie(&xs[0], &xs[1]));
    coderivation_from(bar, f, &[2], 0)
}

/// `∂_Leib := ss[.,.](s⁻¹⊗s⁻¹)(s⁻¹⊗s⁻¹)`.
pub fn leib_part<'a, A: BracketAlgebra>(bar: &Bar<'a, A>) -> Result<Coderivation<'a, A::Elem>, BarError> {
    let alg = bar.alg;
    let f: Multilinear<'a, A::Elem> = Rc::new(move |xs: &[A::Elem]| alg.leib(&xs[0], &xs[1]));
    coderivation_from(bar, f, &[1, 1], 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareReport {
    pub words: usize,
    pub max_weight: usize,
    pub zero: bool,
    pub witness: Option<Witness>,
}

/// `∂∂` on every basis word of weight `≤ max_weight`; the first nonzero value is the witness.
pub fn square<A: Alphabet>(
    bar: &Bar<'_, A>,
    cod: &Coderivation<'_, A::Elem>,
    letters: &[A::Elem],
    max_weight: usize,
) -> SquareReport {
    let ext = Extension::new(bar, cod);
    let words = bar.basis_words(letters, max_weight);
    for w in &words {
        let v = ext.apply_lin(&ext.apply(w));
        if !v.is_empty() {
            return SquareReport {
                words: words.len(),
                max_weight,
                zero: false,
                witness: Some(Witness { law: "∂∂".into(), word: bar.show(w), residual: bar.show_lin(&v) }),
            };
        }
    }
    SquareReport { words: words.len(), max_weight, zero: true, witness: None }
}

/// Graded commutator `[D₁, D₂](w) = D₁D₂w - (-1)^{|D₁||D₂|} D₂D₁w`.
pub fn commutator<A: Alphabet>(
    e1: &Extension<'_, '_, A>,
    e2: &Extension<'_, '_, A>,
    w: &TensorWord<A::Elem>,
) -> Lin<TensorWord<A::Elem>> {
    let mut out = e1.apply_lin(&e2.apply(w));
    let s = -sg(e1.degree() * e2.degree());
    lin_add_all(&mut out, &e2.apply_lin(&e1.apply(w)), &s);
    out
}

/// Bar check of a Lie-Leibniz algebra at any even/odd bidegree `(p, p+1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarReport {
    pub axioms: crate::algebra::AxiomReport,
    pub square: SquareReport,
}

/// Regrade to (0,1), build `∂_LL` and square it up to `max_weight`.
pub fn check_bar(alg: &LieLeibnizAlgebra, max_weight: usize) -> Result<BarReport, BarError> {
    let axioms = crate::algebra::check_ll_axioms(alg)?;
    let canon = alg.to_canonical()?;
    let bar = Bar::new(&canon, CoalgebraKind::Mixed);
    let cod = bar_codifferential(&bar)?;
    let letters: Vec<usize> = (0..canon.space.dim()).collect();
    let square = square(&bar, &cod, &letters, max_weight);
    Ok(BarReport { axioms, square })
}

impl fmt::Display for SquareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "∂∂ = 0 on {} words of weight ≤ {}", self.words, self.max_weight),
            Some(w) => write!(f, "∂∂({}) = {}", w.word, w.residual),
        }
    }
}

#[cfg(test)]
mod tests;
