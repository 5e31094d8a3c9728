//! Formal sh-Lie terms: nested `l_m` symbols over labelled leaves, with a
//! formal derivation `d` of degree +1 pushed onto the leaves.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{lin_add, lin_add_all, Alphabet, Lin};
use crate::kernel::{koszul_sign_unchecked, permutation_sign, Rational, Sign};

/// A normal-form monomial. Arguments of every node are sorted; `d` sits only
/// on leaves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Leaf { label: u32, d: bool },
    Node(Vec<Term>),
}

impl Term {
    pub fn leaf(label: u32) -> Term {
        Term::Leaf { label, d: false }
    }

    pub fn dleaf(label: u32) -> Term {
        Term::Leaf { label, d: true }
    }

    /// Number of `l` symbols.
    pub fn nodes(&self) -> usize {
        match self {
            Term::Leaf { .. } => 0,
            Term::Node(args) => 1 + args.iter().map(Term::nodes).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf { label, d: false } => write!(f, "{label}"),
            Term::Leaf { label, d: true } => write!(f, "d{label}"),
            Term::Node(args) => {
                write!(f, "l{}(", args.len())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Unreduced expression, used to cross-check two rewriting orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Leaf(u32),
    D(Box<Expr>),
    L(Vec<Expr>),
}

impl Expr {
    pub fn of(t: &Term) -> Expr {
        match t {
            Term::Leaf { label, d: false } => Expr::Leaf(*label),
            Term::Leaf { label, d: true } => Expr::D(Box::new(Expr::Leaf(*label))),
            Term::Node(args) => Expr::L(args.iter().map(Expr::of).collect()),
        }
    }
}

/// Labels with degrees (default 0); `|l_m| = m - 2`, `|d| = 1`.
#[derive(Debug, Clone, Default)]
pub struct ShAlphabet {
    pub label_degrees: BTreeMap<u32, i64>,
}

fn unit(t: Term, c: Rational) -> Lin<Term> {
    let mut v = Lin::new();
    lin_add(&mut v, &t, &c);
    v
}

impl ShAlphabet {
    pub fn new(label_degrees: BTreeMap<u32, i64>) -> Self {
        ShAlphabet { label_degrees }
    }

    pub fn label_degree(&self, label: u32) -> i64 {
        self.label_degrees.get(&label).copied().unwrap_or(0)
    }

    pub fn term_degree(&self, t: &Term) -> i64 {
        match t {
            Term::Leaf { label, d } => self.label_degree(*label) + i64::from(*d),
            Term::Node(args) => args.iter().map(|a| self.term_degree(a)).sum::<i64>() + args.len() as i64 - 2,
        }
    }

    /// `l_m(args)` in normal form: arguments sorted with the sign of graded
    /// antisymmetry; zero when an even argument repeats.
    pub fn node(&self, args: Vec<Term>) -> Lin<Term> {
        let degrees: Vec<i64> = args.iter().map(|a| self.term_degree(a)).collect();
        let mut perm: Vec<usize> = (0..args.len()).collect();
        perm.sort_by(|a, b| args[*a].cmp(&args[*b]));
        let sign = permutation_sign(&perm) * koszul_sign_unchecked(&perm, &degrees);
        let sorted: Vec<Term> = perm.iter().map(|k| args[*k].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] && self.term_degree(&w[0]).rem_euclid(2) == 0 {
                return Lin::new();
            }
        }
        unit(Term::Node(sorted), sign.to_rational())
    }

    /// Multilinear `l_m` on linear combinations.
    pub fn apply_l(&self, args: &[Lin<Term>]) -> Lin<Term> {
        let mut acc: Vec<(Vec<Term>, Rational)> = vec![(Vec::new(), Rational::one())];
        for a in args {
            let mut next = Vec::new();
            for (prefix, c) in &acc {
                for (t, k) in a {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    next.push((p, c * k));
                }
            }
            acc = next;
        }
        let mut out = Lin::new();
        for (ts, c) in acc {
            lin_add_all(&mut out, &self.node(ts), &c);
        }
        out
    }

    /// `{a_1, …, a_m} = (-1)^{m(m-1)/2} l_m(a_1, …, a_m)`.
    pub fn curly(&self, args: &[Lin<Term>]) -> Lin<Term> {
        let m = args.len() as i64;
        let s = Sign::pow(m * (m - 1) / 2).to_rational();
        self.apply_l(args).into_iter().map(|(t, c)| (t, c * &s)).collect()
    }

    /// `d` as a derivation of every `l_m`, with `d² = 0`.
    pub fn d(&self, t: &Term) -> Lin<Term> {
        match t {
            Term::Leaf { label, d: false } => unit(Term::dleaf(*label), Rational::one()),
            Term::Leaf { d: true, .. } => Lin::new(),
            Term::Node(args) => {
                let m = args.len() as i64;
                let mut out = Lin::new();
                let mut prefix = 0i64;
                for k in 0..args.len() {
                    let s = Sign::pow(m + prefix).to_rational();
                    let mut parts: Vec<Lin<Term>> = args.iter().map(|a| unit(a.clone(), Rational::one())).collect();
                    parts[k] = self.d(&args[k]);
                    lin_add_all(&mut out, &self.apply_l(&parts), &s);
                    prefix += self.term_degree(&args[k]);
                }
                out
            }
        }
    }

    pub fn d_lin(&self, v: &Lin<Term>) -> Lin<Term> {
        let mut out = Lin::new();
        for (t, c) in v {
            lin_add_all(&mut out, &self.d(t), c);
        }
        out
    }

    /// Inner-first reduction: normalize arguments, then apply `d` and sort.
    pub fn eval_inner_first(&self, e: &Expr) -> Lin<Term> {
        match e {
            Expr::Leaf(l) => unit(Term::leaf(*l), Rational::one()),
            Expr::D(x) => self.d_lin(&self.eval_inner_first(x)),
            Expr::L(args) => {
                let parts: Vec<Lin<Term>> = args.iter().map(|a| self.eval_inner_first(a)).collect();
                self.apply_l(&parts)
            }
        }
    }

    fn expr_degree(&self, e: &Expr) -> i64 {
        match e {
            Expr::Leaf(l) => self.label_degree(*l),
            Expr::D(x) => self.expr_degree(x) + 1,
            Expr::L(args) => args.iter().map(|a| self.expr_degree(a)).sum::<i64>() + args.len() as i64 - 2,
        }
    }

    /// Push every `d` down to the leaves on raw expressions, dropping `dd`.
    fn push_d(&self, e: &Expr) -> Vec<(Sign, Expr)> {
        match e {
            Expr::Leaf(_) => vec![(Sign::Plus, e.clone())],
            Expr::L(args) => {
                let mut acc: Vec<(Sign, Vec<Expr>)> = vec![(Sign::Plus, Vec::new())];
                for a in args {
                    let pa = self.push_d(a);
                    let mut next = Vec::new();
                    for (s, prefix) in &acc {
                        for (t, x) in &pa {
                            let mut p = prefix.clone();
                            p.push(x.clone());
                            next.push((*s * *t, p));
                        }
                    }
                    acc = next;
                }
                acc.into_iter().map(|(s, v)| (s, Expr::L(v))).collect()
            }
            Expr::D(x) => self.push_d(x).into_iter().flat_map(|(s, y)| self.d_raw(&y).into_iter().map(move |(t, z)| (s * t, z))).collect(),
        }
    }

    fn d_raw(&self, e: &Expr) -> Vec<(Sign, Expr)> {
        match e {
            Expr::Leaf(_) => vec![(Sign::Plus, Expr::D(Box::new(e.clone())))],
            Expr::D(_) => Vec::new(),
            Expr::L(args) => {
                let m = args.len() as i64;
                let mut out = Vec::new();
                let mut prefix = 0i64;
                for k in 0..args.len() {
                    for (s, x) in self.d_raw(&args[k]) {
                        let mut v = args.clone();
                        v[k] = x;
                        out.push((Sign::pow(m + prefix) * s, Expr::L(v)));
                    }
                    prefix += self.expr_degree(&args[k]);
                }
                out
            }
        }
    }

    /// Derivation-first reduction: push `d` to the leaves on the raw
    /// expression, then sort bottom-up.
    pub fn eval_d_first(&self, e: &Expr) -> Lin<Term> {
        let mut out = Lin::new();
        for (s, x) in self.push_d(e) {
            lin_add_all(&mut out, &self.sort_raw(&x), &s.to_rational());
        }
        out
    }

    fn sort_raw(&self, e: &Expr) -> Lin<Term> {
        match e {
            Expr::Leaf(l) => unit(Term::leaf(*l), Rational::one()),
            Expr::D(x) => match **x {
                Expr::Leaf(l) => unit(Term::dleaf(l), Rational::one()),
                _ => unreachable!("d pushed to leaves"),
            },
            Expr::L(args) => {
                let parts: Vec<Lin<Term>> = args.iter().map(|a| self.sort_raw(a)).collect();
                self.apply_l(&parts)
            }
        }
    }

    pub fn show_lin(&self, v: &Lin<Term>) -> String {
        crate::algebra::format_lin(v, |t: &Term| t.to_string())
    }
}

impl Alphabet for ShAlphabet {
    type Elem = Term;

    fn degree(&self, x: &Term) -> i64 {
        self.term_degree(x)
    }

    fn show(&self, x: &Term) -> String {
        x.to_string()
    }
}
