//! Free graded Lie algebra on labels `1..` and their images under one odd
//! derivation `d`, realised by graded commutators in the tensor algebra.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_lin, lin_add, lin_add_all, Lin};
use crate::kernel::{Rational, Sign};

/// `(label, d)`.
pub type Letter = (u32, bool);
pub type Poly = Lin<Vec<Letter>>;

/// Labels of degree 0 and `d` of the given odd degree.
#[derive(Debug, Clone, Copy)]
pub struct FreeLie {
    pub d_degree: i64,
}

impl FreeLie {
    fn letter_degree(&self, l: &Letter) -> i64 {
        if l.1 {
            self.d_degree
        } else {
            0
        }
    }

    fn word_degree(&self, w: &[Letter]) -> i64 {
        w.iter().map(|l| self.letter_degree(l)).sum()
    }

    pub fn gen(&self, label: u32) -> Poly {
        let mut v = Poly::new();
        lin_add(&mut v, &vec![(label, false)], &Rational::one());
        v
    }

    /// `(a, b) = ab - (-1)^{|a||b|} ba`.
    pub fn bracket(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (x, c) in a {
            for (y, k) in b {
                let ck = c * k;
                let mut xy = x.clone();
                xy.extend(y.iter().copied());
                lin_add(&mut out, &xy, &ck);
                let mut yx = y.clone();
                yx.extend(x.iter().copied());
                let s = Sign::pow(self.word_degree(x) * self.word_degree(y) + 1).to_rational();
                lin_add(&mut out, &yx, &(ck * s));
            }
        }
        out
    }

    /// `d` as a derivation of the tensor algebra; applies to undecorated letters only.
    pub fn d(&self, a: &Poly) -> Poly {
        let mut out = Poly::new();
        for (w, c) in a {
            let mut prefix = 0;
            for k in 0..w.len() {
                assert!(!w[k].1, "d applied twice");
                let mut v = w.clone();
                v[k].1 = true;
                lin_add(&mut out, &v, &(c * Sign::pow(self.d_degree * prefix).to_rational()));
                prefix += self.letter_degree(&w[k]);
            }
        }
        out
    }

    pub fn show(&self, a: &Poly) -> String {
        format_lin(a, |w: &Vec<Letter>| {
            w.iter().map(|(l, d)| if *d { format!("d{l}") } else { l.to_string() }).collect::<Vec<_>>().join("·")
        })
    }
}

/// Formal families `D_n` on the free Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormalFamily {
    /// `D_n = ((d·,·),…,·)`.
    HigherDerived,
    /// `D_n = 0`.
    Zero,
    /// `D_n = (·,(…,(·,d·)))`, the derivation on the last slot.
    RightNested,
}

fn eval(fl: &FreeLie, fam: FormalFamily, args: &[Poly]) -> Poly {
    match fam {
        FormalFamily::Zero => Poly::new(),
        FormalFamily::HigherDerived => {
            let mut v = fl.d(&args[0]);
            for a in &args[1..] {
                v = fl.bracket(&v, a);
            }
            v
        }
        FormalFamily::RightNested => {
            let n = args.len();
            let mut v = fl.d(&args[n - 1]);
            for a in args[..n - 1].iter().rev() {
                v = fl.bracket(a, &v);
            }
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalInvariantReport {
    pub n: usize,
    pub family: FormalFamily,
    /// Per `k`, whether the identity holds.
    pub slots: BTreeMap<usize, bool>,
    pub pass: bool,
    pub witness: Option<String>,
}

/// For each `k = 1..n`:
/// `D_n(1,…,(k,k+1),…,n+1) = (D_n(1,…,n), n+1) - (D_n(1,…,k+1,k,…), ·)`,
/// the second term with the labels `k, k+1` exchanged.
pub fn invariant_identity_formal(n: usize, family: FormalFamily) -> FormalInvariantReport {
    let fl = FreeLie { d_degree: 2 * n as i64 - 3 };
    let gens: Vec<Poly> = (1..=n as u32 + 1).map(|l| fl.gen(l)).collect();
    let mut report = FormalInvariantReport { n, family, slots: BTreeMap::new(), pass: true, witness: None };
    for k in 1..=n {
        let mut args: Vec<Poly> = gens[..k - 1].to_vec();
        args.push(fl.bracket(&gens[k - 1], &gens[k]));
        args.extend(gens[k + 1..].iter().cloned());
        let lhs = eval(&fl, family, &args);
        let mut rhs = fl.bracket(&eval(&fl, family, &gens[..n]), &gens[n]);
        let mut swapped = gens.clone();
        swapped.swap(k - 1, k);
        let t = fl.bracket(&eval(&fl, family, &swapped[..n]), &swapped[n]);
        lin_add_all(&mut rhs, &t, &-Rational::one());
        let ok = lhs == rhs;
        report.slots.insert(k, ok);
        if !ok && report.witness.is_none() {
            let mut diff = lhs.clone();
            lin_add_all(&mut diff, &rhs, &-Rational::one());
            report.witness = Some(format!("k = {k}: {}", fl.show(&diff)));
        }
        report.pass &= ok;
    }
    report
}
