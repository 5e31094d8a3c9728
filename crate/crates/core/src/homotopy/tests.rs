use std::rc::Rc;

use proptest::prelude::*;

use super::concrete::{apply_map, LinearMap};
use super::shll::*;
use super::*;
use crate::algebra::{
    axiom_residual, check_ll_axioms, lie_lin, sl2_broken, sl2_trace_form, BracketAlgebra, BracketKind, GradedSpace, Lin,
    LieLeibnizAlgebra,
};
use crate::bar::{Bar, CoalgebraKind, Extension, Multilinear, SymWord, TensorWord};
use crate::kernel::{q, qi, GradedSymbol, Sign};

fn lin(terms: &[(Term, i64)]) -> Lin<Term> {
    terms.iter().map(|(t, c)| (t.clone(), qi(*c))).collect()
}

fn leaves(alpha: &ShAlphabet, xs: &[Term]) -> Vec<Lin<Term>> {
    let _ = alpha;
    xs.iter().map(|x| lin(&[(x.clone(), 1)])).collect()
}

#[test]
fn derived_signs() {
    assert_eq!(derived_homotopy_sign(2, 1), Ok(Sign::Plus));
    assert_eq!(derived_homotopy_sign(3, 1), Ok(Sign::Minus));
    assert_eq!(derived_homotopy_sign(3, 2), Ok(Sign::Minus));
    for m in 1..8 {
        assert_eq!(derived_homotopy_sign(m, 0), Ok(Sign::Plus));
        for i in 0..m {
            let e: i64 = (0..i as i64).map(|t| m as i64 + t).sum();
            assert_eq!(derived_homotopy_sign(m, i).unwrap(), Sign::pow(e));
        }
    }
    assert_eq!(derived_homotopy_sign(3, 3), Err(HomotopyError::IndexOutOfRange { m: 3, i: 3 }));
    assert!(derived_homotopy_sign(0, 0).is_err());
}

#[test]
fn a1_sign_chain() {
    let rows = a1_ledger(6);
    assert!(!rows.is_empty());
    for r in &rows {
        assert!(r.steps_hold, "{r:?}");
        assert_eq!(r.z, -r.y, "{r:?}");
    }
    let smallest = &rows[0];
    assert_eq!((smallest.m, smallest.n, smallest.i, smallest.j, smallest.p), (2, 2, 1, 0, 0));
}

#[test]
fn a2_sign_comparison() {
    let rows = a2_ledger(7);
    assert!(rows.iter().all(|r| r.holds()));
    assert!(rows.iter().any(|r| !r.literal_holds()));
}

#[test]
fn curly_convention() {
    let alpha = ShAlphabet::default();
    let xs = [Term::leaf(1), Term::leaf(2), Term::leaf(3)];
    let l = alpha.apply_l(&leaves(&alpha, &xs));
    let c = alpha.curly(&leaves(&alpha, &xs));
    assert_eq!(c, l.into_iter().map(|(t, k)| (t, -k)).collect::<Lin<Term>>());
    // odd labels may repeat, even ones may not
    assert!(alpha.node(vec![Term::leaf(1), Term::leaf(1)]).is_empty());
    assert_eq!(alpha.node(vec![Term::dleaf(1), Term::dleaf(1)]).len(), 1);
    assert!(alpha.d(&Term::dleaf(4)).is_empty());
}

#[test]
fn derivation_over_brackets() {
    let alpha = ShAlphabet::default();
    let t = alpha.node(vec![Term::leaf(1), Term::leaf(2)]);
    let (x, _) = t.iter().next().unwrap();
    // d l2(1,2) = l2(d1,2) + l2(1,d2), and l2(1,d2) = -l2(d2,1)
    assert_eq!(alpha.show_lin(&alpha.d(x)), "l2(1,d2) + l2(d1,2)");
    assert!(alpha.d_lin(&alpha.d(x)).is_empty());
}

fn word(factors: &[&[u32]]) -> TensorWord<Term> {
    TensorWord(factors.iter().map(|f| SymWord(f.iter().map(|&l| Term::leaf(l)).collect())).collect())
}

#[test]
fn basic_element_values() {
    let alpha = ShAlphabet::default();
    let engine = ShEngine::new(&alpha, 5);
    let bar = engine.mixed();
    // ∂^{(i)}_m(ss1⊗…⊗ssi⊗s(s(i+1)…sm)) = (±)ⁱ_m{d1,…,di,i+1,…,m}
    for m in 1..=5 {
        for i in 0..m {
            let cod = engine.part(m, i).unwrap();
            assert_eq!(cod.degree, -1);
            let ext = Extension::new(&bar, &cod);
            let mut profile = vec![1; i];
            profile.push(m - i);
            let got = single_letters(&ext.apply(&basic_word(&profile)));
            let args: Vec<Term> = (1..=m as u32).map(|l| Term::Leaf { label: l, d: l as usize <= i }).collect();
            let s = derived_homotopy_sign(m, i).unwrap().to_rational();
            let want: Lin<Term> = alpha.curly(&leaves(&alpha, &args)).into_iter().map(|(t, c)| (t, c * &s)).collect();
            assert_eq!(got, want, "m={m} i={i}");
        }
    }
    let e21 = engine.part(2, 1).unwrap();
    let v = Extension::new(&bar, &e21).apply(&word(&[&[1], &[2]]));
    assert_eq!(bar.show_lin(&v), "-ssl2(d1,2)");
    let want = alpha.curly(&leaves(&alpha, &[Term::dleaf(1), Term::leaf(2)]));
    assert_eq!(single_letters(&v), want);
    let e32 = engine.part(3, 2).unwrap();
    assert!(Extension::new(&bar, &e32).apply(&word(&[&[1, 2], &[3], &[4]])).is_empty());
}

#[test]
fn unshifted_part_is_conjugated_sh_lie() {
    let alpha = ShAlphabet::default();
    let engine = ShEngine::new(&alpha, 4);
    let (mixed, comm) = (engine.mixed(), engine.commutative());
    for m in 1..=3 {
        let a = engine.part(m, 0).unwrap();
        let b = engine.shlie_part(m).unwrap();
        let (ea, eb) = (Extension::new(&mixed, &a), Extension::new(&comm, &b));
        for t in 1..=4u32 {
            let w = TensorWord::single(SymWord((1..=t).map(Term::leaf).collect()));
            assert_eq!(ea.apply(&w), eb.apply(&w), "m={m} t={t}");
        }
    }
}

#[test]
fn square_to_arity_four() {
    let r = verify_shll_square(4, &[0; 4]).unwrap();
    assert!(r.zero && r.arity_lemma && r.witness.is_none());
    assert_eq!(r.confluence.1, 0);
    assert!(r.confluence.0 > 0);
    assert_eq!(r.relations[&3], 8);
    assert!(r.cancellations.iter().all(|c| c.ratio == Some(-1)));
    assert!(r.diagonal.iter().all(|d| d.holds() && !d.vanishes));
    assert!(r.diagonal.iter().all(|d| d.expected == Sign::pow(d.k as i64).to_i64()));
    // the smallest cross-term cancellation
    let c = r.cancellations.iter().find(|c| (c.m, c.n, c.i, c.j) == (2, 2, 1, 0)).unwrap();
    assert_eq!((c.profile.clone(), c.ratio), (vec![2, 1], Some(-1)));
    // blocks that need the sh-Lie relations sit on the diagonal profiles only
    for b in &r.blocks {
        let diag = b.profile[..b.profile.len() - 1].iter().all(|&a| a == 1);
        assert!(b.exact_zero || diag, "{b:?}");
    }
    assert!(r.blocks.iter().any(|b| !b.exact_zero));
    let k0: Vec<_> = r.diagonal.iter().filter(|d| d.k == 0).collect();
    assert!(k0.iter().all(|d| d.ratio == Some(1)));
}

#[test]
fn square_with_odd_labels() {
    for degs in [[1, 0, 0, 0], [0, 1, 1, 0], [1, 1, 1, 1]] {
        let r = verify_shll_square(4, &degs).unwrap();
        assert!(r.zero && r.arity_lemma, "{degs:?}");
        assert!(r.cancellations.iter().all(|c| c.ratio == Some(-1)));
        assert!(r.diagonal.iter().all(|d| d.holds()), "{degs:?}");
    }
}

#[test]
fn dropping_signs_breaks_the_square() {
    let r = verify_shll_square_with(3, &[0; 3], false).unwrap();
    assert!(!r.zero);
    let w = r.witness.unwrap();
    assert_eq!(w.word, "ss1⊗ss2⊗ss3");
}

#[test]
fn arity_cap() {
    assert_eq!(verify_shll_square(6, &[]).unwrap_err(), HomotopyError::ArityCap { n: 6, cap: 5 });
}

#[test]
fn pruning() {
    let r = pruning_check(4).unwrap();
    assert_eq!(r.violation, None);
    assert!(r.nonzero > 0 && r.special > 0);
}

#[test]
fn diagonal_corollary() {
    assert!(shll_corollary_check(2, 4, true).unwrap().zero);
    assert!(shll_corollary_check(4, 4, true).unwrap().zero);
    let bad = shll_corollary_check(4, 4, false).unwrap();
    assert!(!bad.zero && bad.witness.is_some());
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = (1u32..5).prop_map(Expr::Leaf);
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::D(Box::new(e))),
            prop::collection::vec(inner, 1..4).prop_map(Expr::L),
        ]
    })
}

proptest! {
    #[test]
    fn reduction_orders_agree(e in arb_expr(), degs in prop::collection::vec(0i64..3, 4)) {
        let alpha = ShAlphabet::new((1..=4).zip(degs).collect());
        prop_assert_eq!(alpha.eval_inner_first(&e), alpha.eval_d_first(&e));
    }

    #[test]
    fn normal_form_is_idempotent(e in arb_expr()) {
        let alpha = ShAlphabet::default();
        for (t, _) in alpha.eval_inner_first(&e) {
            let again = alpha.eval_inner_first(&Expr::of(&t));
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!(again.get(&t).cloned(), Some(qi(1)));
        }
    }
}

fn dg_letters(inst: &DgLieInstance) -> Vec<usize> {
    (0..inst.alg.space.dim()).collect()
}

#[test]
fn higher_derived_square() {
    let inst = sl2_grassmann();
    let fam = higher_derived_family(&inst).unwrap();
    assert_eq!(fam.maps.iter().map(|m| (m.profile.clone(), m.degree)).collect::<Vec<_>>(), vec![(vec![1], -1), (vec![1, 1], 1)]);
    let r = sh_leibniz_square(&inst.alg, &fam, &dg_letters(&inst), 4).unwrap();
    assert!(r.zero, "{r}");
}

#[test]
fn flipped_sign_family_fails() {
    let inst = sl2_grassmann();
    let alg = &inst.alg;
    let d1 = &inst.d[1];
    let fam = higher_derived_family(&inst).unwrap();
    let flipped: Multilinear<'_, usize> = Rc::new(move |xs: &[usize]| {
        let s = Sign::pow(alg.space.degree(xs[0])).to_rational();
        let one: Lin<usize> = [(xs[1], qi(1))].into_iter().collect();
        lie_lin(alg, &apply_map(d1, &[(xs[0], s)].into_iter().collect()), &one)
    });
    let bad = HomotopyFamily::new(FamilyKind::ShLeibniz).with(vec![1], -1, fam.maps[0].map.clone()).with(vec![1, 1], 1, flipped);
    let r = sh_leibniz_square(alg, &bad, &dg_letters(&inst), 3).unwrap();
    assert!(!r.zero && r.witness.is_some());
}

#[test]
fn single_bracket_family() {
    for (alg, ok) in [(sl2_trace_form(), true), (sl2_broken(), false)] {
        let canon = alg.to_canonical().unwrap();
        let c = &canon;
        let leib: Multilinear<'_, usize> = Rc::new(move |xs: &[usize]| c.leib(&xs[0], &xs[1]));
        let fam = HomotopyFamily::new(FamilyKind::ShLeibniz).with(vec![1, 1], 1, leib);
        let letters: Vec<usize> = (0..canon.space.dim()).collect();
        let r = sh_leibniz_square(&canon, &fam, &letters, 3).unwrap();
        assert_eq!(r.zero, ok);
        let holds = check_ll_axioms(&alg).unwrap().failure.map(|f| f.axiom != "odd-leibniz").unwrap_or(true);
        assert_eq!(holds, ok);
    }
}

#[test]
fn family_degree_errors() {
    let inst = sl2_grassmann();
    let fam = higher_derived_family(&inst).unwrap();
    let wrong = HomotopyFamily::new(FamilyKind::ShLeibniz).with(vec![1, 1], 0, fam.maps[1].map.clone());
    assert!(matches!(wrong.validate(), Err(HomotopyError::DegreeMismatch { expected: 1, found: 0, .. })));
    assert!(sh_leibniz_square(&inst.alg, &wrong, &dg_letters(&inst), 2).is_err());
    assert_eq!(FamilyKind::ShLie.expected_degree(&[3]), 1);
    assert_eq!(FamilyKind::ShLL.expected_degree(&[1, 2]), 2);

    let mut swapped = sl2_grassmann();
    swapped.d.swap(0, 1);
    assert!(matches!(higher_derived_family(&swapped), Err(HomotopyError::DegreeMismatch { .. })));

    let mut partial = sl2_grassmann();
    let keep: LinearMap = partial.d[1].iter().filter(|(x, _)| **x < 4).map(|(x, v)| (*x, v.clone())).collect();
    partial.d[1] = keep;
    assert!(matches!(higher_derived_family(&partial), Err(HomotopyError::NotDerivation(_))));
}

#[test]
fn higher_derived_shapes() {
    let mut inst = sl2_grassmann();
    inst.d[1].clear();
    let fam = higher_derived_family(&inst).unwrap();
    assert_eq!(fam.maps.len(), 1);
    assert_eq!(fam.maps[0].profile, vec![1]);

    let z = affine_zeta();
    let fam = higher_derived_family(&z).unwrap();
    assert_eq!(fam.maps.len(), 1);
    let d3 = &fam.maps[0];
    assert_eq!((d3.profile.clone(), d3.degree), (vec![1, 1, 1], 3));
    // ((d₂ aζ, b), b) = ((a, b), b) = (b, b) = 0 and ((d₂ bζ, a), a) = ((b, a), a) = ((-b), a) = b
    let (a, b) = (0, 2);
    let (az, bz) = (1, 3);
    assert!((d3.map)(&[az, b, b]).is_empty());
    assert_eq!((d3.map)(&[bz, a, a]), [(b, qi(1))].into_iter().collect());
    assert_eq!(z.alg.space.name(bz), "bζ");
    let letters: Vec<usize> = (0..z.alg.space.dim()).collect();
    assert!(sh_leibniz_square(&z.alg, &fam, &letters, 5).unwrap().zero);
}

#[test]
fn invariance_concrete() {
    let inst = sl2_grassmann();
    let fam = higher_derived_family(&inst).unwrap();
    let r = invariant_cocycle_check(&inst.alg, &fam, 2).unwrap();
    assert!(r.zero && r.words > 0);
    let z = affine_zeta();
    let fz = higher_derived_family(&z).unwrap();
    assert!(invariant_cocycle_check(&z.alg, &fz, 3).unwrap().zero);
    let empty = HomotopyFamily::new(FamilyKind::ShLeibniz);
    assert!(invariant_cocycle_check(&inst.alg, &empty, 2).unwrap().zero);
}

#[test]
fn invariance_fails_for_unrelated_bracket() {
    let inst = sl2_grassmann();
    let alg = &inst.alg;
    let dim = alg.space.dim();
    // an arbitrary homogeneous degree-1 table
    let table: Vec<Vec<Lin<usize>>> = (0..dim)
        .map(|x| {
            (0..dim)
                .map(|y| {
                    let deg = alg.space.degree(x) + alg.space.degree(y) + 1;
                    (0..dim)
                        .filter(|z| alg.space.degree(*z) == deg)
                        .map(|z| (z, qi(((7 * x + 13 * y + 31 * z) % 5) as i64 - 2)))
                        .filter(|(_, c)| *c != qi(0))
                        .collect()
                })
                .collect()
        })
        .collect();
    let f: Multilinear<'_, usize> = Rc::new(move |xs: &[usize]| table[xs[0]][xs[1]].clone());
    let fam = HomotopyFamily::new(FamilyKind::ShLeibniz).with(vec![1, 1], 1, f);
    let r = invariant_cocycle_check(alg, &fam, 2).unwrap();
    assert!(!r.zero && r.witness.is_some());
}

#[test]
fn invariance_formal() {
    for n in 1..=4 {
        assert!(invariant_identity_formal(n, FormalFamily::HigherDerived).pass, "n={n}");
        assert!(invariant_identity_formal(n, FormalFamily::Zero).pass);
    }
    let r = invariant_identity_formal(2, FormalFamily::RightNested);
    assert!(!r.pass && r.witness.is_some());
}

fn abelian() -> LieLeibnizAlgebra {
    let space = GradedSpace::new(vec![GradedSymbol::new("x", 0), GradedSymbol::new("y", 1)]).unwrap();
    LieLeibnizAlgebra::new("abelian", space, 0, 1)
}

#[test]
fn cartan_cocycle() {
    let r = cartan_cocycle_check(&sl2_trace_form()).unwrap();
    assert!(r.axioms_pass && r.cocycle.zero && r.cocycle.words > 0);
    assert!(cartan_cocycle_check(&abelian()).unwrap().cocycle.zero);
    let r = cartan_cocycle_check(&crate::algebra::omni_lie(2)).unwrap();
    assert!(r.cocycle.zero);
}

#[test]
fn cartan_detects_llre02_defect() {
    // [K, e] = K breaks the second mixed relation, since (e, f) = K
    let mut a = sl2_trace_form();
    a.set(BracketKind::Leib, 3, 0, 3, q(1, 1)).unwrap();
    assert!(!check_ll_axioms(&a).unwrap().pass);
    let n = a.space.dim();
    let llre02 = (0..n * n * n).any(|t| !axiom_residual(&a, "LLre02", &[t % n, (t / n) % n, t / (n * n)]).is_empty());
    assert!(llre02);
    let r = cartan_cocycle_check(&a).unwrap();
    assert!(!r.axioms_pass && !r.cocycle.zero);
}

#[test]
fn bar_over_formal_terms() {
    // the coalgebra engine accepts formal letters
    let alpha = ShAlphabet::default();
    let bar = Bar::new(&alpha, CoalgebraKind::Mixed);
    let w = word(&[&[1, 2], &[3]]);
    assert_eq!(bar.degree(&w), 5);
}

