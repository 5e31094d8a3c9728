//! Finite-dimensional Lie-Leibniz algebras given by structure constants,
//! the axiom checker, derived brackets, bundled instances and a formal
//! (free symbol) algebra used to reproduce bracket identities syntactically.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::kernel::{GradedSymbol, Rational, Sign};

/// Finite linear combination.
pub type Lin<E> = BTreeMap<E, Rational>;

pub(crate) fn lin_add<E: Ord + Clone>(acc: &mut Lin<E>, key: &E, c: &Rational) {
    if c.is_zero() {
        return;
    }
    if let Some(v) = acc.get_mut(key) {
        *v += c;
        if v.is_zero() {
            acc.remove(key);
        }
    } else {
        acc.insert(key.clone(), c.clone());
    }
}

pub(crate) fn lin_add_all<E: Ord + Clone>(acc: &mut Lin<E>, other: &Lin<E>, scale: &Rational) {
    for (k, c) in other {
        lin_add(acc, k, &(c * scale));
    }
}

pub(crate) fn lin_scaled<E: Ord + Clone>(l: &Lin<E>, s: &Rational) -> Lin<E> {
    let mut out = Lin::new();
    lin_add_all(&mut out, l, s);
    out
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AlgebraError {
    #[error("duplicate basis symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown basis symbol `{0}`")]
    UnknownSymbol(String),
    #[error("{bracket} {a} {b} -> {c} is not degree-homogeneous: expected degree {expected}, found {found}")]
    Inhomogeneous { bracket: &'static str, a: String, b: String, c: String, expected: i64, found: i64 },
    #[error("bidegree ({p},{q}) needs an even Lie degree and an odd Leibniz degree")]
    Parity { p: i64, q: i64 },
    #[error("the bar construction needs bidegree (p, p+1); found ({p},{q})")]
    NotShiftable { p: i64, q: i64 },
    #[error("d is not homogeneous of degree +1 on `{0}`")]
    DifferentialDegree(String),
    #[error("d² ≠ 0 on `{0}`")]
    DifferentialSquare(String),
    #[error("d is not a derivation of the Lie bracket on ({0}, {1})")]
    NotDerivation(String, String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// Ordered list of graded basis symbols with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct GradedSpace {
    pub basis: Vec<GradedSymbol>,
}

impl GradedSpace {
    pub fn new(basis: Vec<GradedSymbol>) -> Result<Self, AlgebraError> {
        let mut s = GradedSpace::default();
        for b in basis {
            s.push(b)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, sym: GradedSymbol) -> Result<usize, AlgebraError> {
        if self.index(&sym.name).is_some() {
            return Err(AlgebraError::DuplicateSymbol(sym.name));
        }
        self.basis.push(sym);
        Ok(self.basis.len() - 1)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn format(&self, v: &Lin<usize>) -> String {
        format_lin(v, |i| self.name(*i).to_string())
    }
}

/// Render a linear combination as `a - 2b + 1/2c`; zero renders as `0`.
pub fn format_lin<E>(v: &Lin<E>, show: impl Fn(&E) -> String) -> String {
    let mut out = String::new();
    for (k, c) in v {
        let neg = c < &Rational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&abs.to_string());
        }
        out.push_str(&show(k));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Graded letters with a display form.
pub trait Alphabet {
    type Elem: Ord + Clone + fmt::Debug;
    fn degree(&self, x: &Self::Elem) -> i64;
    fn show(&self, x: &Self::Elem) -> String;
}

/// A graded Lie bracket `(.,.)` and a Leibniz bracket `[.,.]` on basis elements.
pub trait BracketAlgebra: Alphabet {
    fn lie(&self, x: &Self::Elem, y: &Self::Elem) -> Lin<Self::Elem>;
    fn leib(&self, x: &Self::Elem, y: &Self::Elem) -> Lin<Self::Elem>;
}

fn bilinear<A: BracketAlgebra>(
    a: &A,
    x: &Lin<A::Elem>,
    y: &Lin<A::Elem>,
    f: impl Fn(&A, &A::Elem, &A::Elem) -> Lin<A::Elem>,
) -> Lin<A::Elem> {
    let mut out = Lin::new();
    for (u, cu) in x {
        for (v, cv) in y {
            lin_add_all(&mut out, &f(a, u, v), &(cu * cv));
        }
    }
    out
}

pub fn lie_lin<A: BracketAlgebra>(a: &A, x: &Lin<A::Elem>, y: &Lin<A::Elem>) -> Lin<A::Elem> {
    bilinear(a, x, y, A::lie)
}

pub fn leib_lin<A: BracketAlgebra>(a: &A, x: &Lin<A::Elem>, y: &Lin<A::Elem>) -> Lin<A::Elem> {
    bilinear(a, x, y, A::leib)
}

pub(crate) fn unit<E: Ord + Clone>(e: &E) -> Lin<E> {
    let mut l = Lin::new();
    l.insert(e.clone(), Rational::one());
    l
}

type Table = BTreeMap<(usize, usize), Lin<usize>>;

/// Lie-Leibniz algebra on a finite graded basis.
///
/// `lie` has degree `p` and `leib` degree `q`; missing table entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LieLeibnizAlgebra {
    pub name: String,
    pub space: GradedSpace,
    pub p: i64,
    pub q: i64,
    lie: Table,
    leib: Table,
}

impl Alphabet for LieLeibnizAlgebra {
    type Elem = usize;

    fn degree(&self, x: &usize) -> i64 {
        self.space.degree(*x)
    }

    fn show(&self, x: &usize) -> String {
        self.space.name(*x).to_string()
    }
}

impl BracketAlgebra for LieLeibnizAlgebra {
    fn lie(&self, x: &usize, y: &usize) -> Lin<usize> {
        self.lie.get(&(*x, *y)).cloned().unwrap_or_default()
    }

    fn leib(&self, x: &usize, y: &usize) -> Lin<usize> {
        self.leib.get(&(*x, *y)).cloned().unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Lie,
    Leib,
}

impl BracketKind {
    fn label(self) -> &'static str {
        match self {
            BracketKind::Lie => "lie",
            BracketKind::Leib => "leib",
        }
    }
}

impl LieLeibnizAlgebra {
    pub fn new(name: impl Into<String>, space: GradedSpace, p: i64, q: i64) -> Self {
        LieLeibnizAlgebra { name: name.into(), space, p, q, lie: Table::new(), leib: Table::new() }
    }

    /// Add `coeff · c` to the bracket of basis elements `a`, `b`.
    pub fn set(&mut self, kind: BracketKind, a: usize, b: usize, c: usize, coeff: Rational) -> Result<(), AlgebraError> {
        let shift = match kind {
            BracketKind::Lie => self.p,
            BracketKind::Leib => self.q,
        };
        let expected = self.space.degree(a) + self.space.degree(b) + shift;
        let found = self.space.degree(c);
        if expected != found {
            return Err(AlgebraError::Inhomogeneous {
                bracket: kind.label(),
                a: self.space.name(a).into(),
                b: self.space.name(b).into(),
                c: self.space.name(c).into(),
                expected,
                found,
            });
        }
        let table = match kind {
            BracketKind::Lie => &mut self.lie,
            BracketKind::Leib => &mut self.leib,
        };
        let entry = table.entry((a, b)).or_default();
        lin_add(entry, &c, &coeff);
        if entry.is_empty() {
            table.remove(&(a, b));
        }
        Ok(())
    }

    /// Same as [`set`](Self::set) with basis names.
    pub fn set_named(&mut self, kind: BracketKind, a: &str, b: &str, c: &str, coeff: Rational) -> Result<(), AlgebraError> {
        let idx = |n: &str| self.space.index(n).ok_or_else(|| AlgebraError::UnknownSymbol(n.into()));
        let (a, b, c) = (idx(a)?, idx(b)?, idx(c)?);
        self.set(kind, a, b, c, coeff)
    }

    /// Set `(a,b)` and its graded-antisymmetric partner `(b,a)`.
    pub fn set_lie_antisym(&mut self, a: usize, b: usize, c: usize, coeff: Rational) -> Result<(), AlgebraError> {
        self.set(BracketKind::Lie, a, b, c, coeff.clone())?;
        if a != b {
            let s = -Sign::pow(self.space.degree(a) * self.space.degree(b)).to_rational();
            self.set(BracketKind::Lie, b, a, c, coeff * s)?;
        }
        Ok(())
    }

    pub fn table(&self, kind: BracketKind) -> impl Iterator<Item = (&(usize, usize), &Lin<usize>)> {
        match kind {
            BracketKind::Lie => self.lie.iter(),
            BracketKind::Leib => self.leib.iter(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.lie.is_empty() && self.leib.is_empty()
    }

    /// Every table entry re-checked for degree homogeneity.
    pub fn check_homogeneous(&self) -> Result<(), AlgebraError> {
        for (kind, table, shift) in [(BracketKind::Lie, &self.lie, self.p), (BracketKind::Leib, &self.leib, self.q)] {
            for ((a, b), v) in table {
                for c in v.keys() {
                    let expected = self.space.degree(*a) + self.space.degree(*b) + shift;
                    if self.space.degree(*c) != expected {
                        return Err(AlgebraError::Inhomogeneous {
                            bracket: kind.label(),
                            a: self.space.name(*a).into(),
                            b: self.space.name(*b).into(),
                            c: self.space.name(*c).into(),
                            expected,
                            found: self.space.degree(*c),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Shift every degree by `p` so that the bidegree becomes `(0,1)`.
    ///
    /// Only parities enter the signs, and `p` is even, so the axioms are unchanged.
    pub fn to_canonical(&self) -> Result<LieLeibnizAlgebra, AlgebraError> {
        if self.p.rem_euclid(2) != 0 || self.q.rem_euclid(2) != 1 {
            return Err(AlgebraError::Parity { p: self.p, q: self.q });
        }
        if self.q != self.p + 1 {
            return Err(AlgebraError::NotShiftable { p: self.p, q: self.q });
        }
        let mut out = self.clone();
        for b in out.space.basis.iter_mut() {
            b.degree += self.p;
        }
        out.p = 0;
        out.q = 1;
        Ok(out)
    }
}

/// One failing instance of an axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub args: Vec<String>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub algebra: String,
    pub bidegree: (i64, i64),
    pub dim: usize,
    /// Number of basis instances evaluated.
    pub checked: usize,
    pub pass: bool,
    pub failure: Option<AxiomFailure>,
}

/// Names of the checked identities, in the order they are tried.
pub const AXIOMS: [&str; 5] = ["antisymmetry", "jacobi", "odd-leibniz", "LLre01", "LLre02"];

/// Residual of one axiom on basis elements (a pair for antisymmetry, a triple otherwise).
pub fn axiom_residual<A: BracketAlgebra>(alg: &A, axiom: &str, xs: &[A::Elem]) -> Lin<A::Elem> {
    let d = |i: usize| alg.degree(&xs[i]);
    let u = |i: usize| unit(&xs[i]);
    let sg = |e: i64| Sign::pow(e).to_rational();
    let mut out = Lin::new();
    match axiom {
        "antisymmetry" => {
            lin_add_all(&mut out, &alg.lie(&xs[0], &xs[1]), &Rational::one());
            lin_add_all(&mut out, &alg.lie(&xs[1], &xs[0]), &sg(d(0) * d(1)));
        }
        "jacobi" => {
            let yz = alg.lie(&xs[1], &xs[2]);
            let xy = alg.lie(&xs[0], &xs[1]);
            let xz = alg.lie(&xs[0], &xs[2]);
            lin_add_all(&mut out, &lie_lin(alg, &u(0), &yz), &Rational::one());
            lin_add_all(&mut out, &lie_lin(alg, &xy, &u(2)), &-Rational::one());
            lin_add_all(&mut out, &lie_lin(alg, &u(1), &xz), &-sg(d(0) * d(1)));
        }
        "odd-leibniz" => {
            let x23 = alg.leib(&xs[1], &xs[2]);
            let x12 = alg.leib(&xs[0], &xs[1]);
            let x13 = alg.leib(&xs[0], &xs[2]);
            lin_add_all(&mut out, &leib_lin(alg, &u(0), &x23), &sg(d(0)));
            lin_add_all(&mut out, &leib_lin(alg, &x12, &u(2)), &Rational::one());
            lin_add_all(&mut out, &leib_lin(alg, &u(1), &x13), &sg(d(0) * d(1) + d(1)));
        }
        "LLre01" => {
            let p23 = alg.lie(&xs[1], &xs[2]);
            let b12 = alg.leib(&xs[0], &xs[1]);
            let b13 = alg.leib(&xs[0], &xs[2]);
            lin_add_all(&mut out, &leib_lin(alg, &u(0), &p23), &Rational::one());
            lin_add_all(&mut out, &lie_lin(alg, &b12, &u(2)), &-Rational::one());
            lin_add_all(&mut out, &lie_lin(alg, &u(1), &b13), &-sg((d(0) + 1) * d(1)));
        }
        "LLre02" => {
            let p12 = alg.lie(&xs[0], &xs[1]);
            let b12 = alg.leib(&xs[0], &xs[1]);
            let b21 = alg.leib(&xs[1], &xs[0]);
            lin_add_all(&mut out, &leib_lin(alg, &p12, &u(2)), &Rational::one());
            lin_add_all(&mut out, &lie_lin(alg, &b12, &u(2)), &-Rational::one());
            lin_add_all(&mut out, &lie_lin(alg, &b21, &u(2)), &sg(d(0) * d(1)));
        }
        other => panic!("unknown axiom {other}"),
    }
    out
}

/// Check antisymmetry, Jacobi, the odd Leibniz identity and both mixed
/// relations on every basis pair/triple; stops at the first failure.
pub fn check_ll_axioms(alg: &LieLeibnizAlgebra) -> Result<AxiomReport, AlgebraError> {
    alg.check_homogeneous()?;
    if alg.p.rem_euclid(2) != 0 || alg.q.rem_euclid(2) != 1 {
        return Err(AlgebraError::Parity { p: alg.p, q: alg.q });
    }
    let n = alg.space.dim();
    let mut report = AxiomReport {
        algebra: alg.name.clone(),
        bidegree: (alg.p, alg.q),
        dim: n,
        checked: 0,
        pass: true,
        failure: None,
    };
    for axiom in AXIOMS {
        let arity = if axiom == "antisymmetry" { 2 } else { 3 };
        let mut idx = vec![0usize; arity];
        loop {
            report.checked += 1;
            let r = axiom_residual(alg, axiom, &idx);
            if !r.is_empty() {
                report.pass = false;
                report.failure = Some(AxiomFailure {
                    axiom: axiom.to_string(),
                    args: idx.iter().map(|i| alg.space.name(*i).to_string()).collect(),
                    residual: alg.space.format(&r),
                });
                return Ok(report);
            }
            // odometer over basis tuples
            let mut k = arity;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || n == 0 {
                break;
            }
        }
    }
    Ok(report)
}

/// dg Lie algebra: a Lie bracket of degree `b` and a differential `d` of degree +1.
#[derive(Debug, Clone)]
pub struct DgLie {
    pub algebra: LieLeibnizAlgebra,
    pub d: BTreeMap<usize, Lin<usize>>,
}

impl DgLie {
    pub fn apply_d(&self, v: &Lin<usize>) -> Lin<usize> {
        let mut out = Lin::new();
        for (x, c) in v {
            if let Some(dx) = self.d.get(x) {
                lin_add_all(&mut out, dx, c);
            }
        }
        out
    }
}

/// Derived bracket `[x,y] := (-1)^b (dx, y)`, where `b` is the Lie bracket degree.
///
/// The Lie table of the input is kept; its Leibniz table is replaced.
pub fn derived_bracket(dg: &DgLie) -> Result<LieLeibnizAlgebra, AlgebraError> {
    let alg = &dg.algebra;
    let n = alg.space.dim();
    for x in 0..n {
        let dx = dg.apply_d(&unit(&x));
        if dx.keys().any(|y| alg.space.degree(*y) != alg.space.degree(x) + 1) {
            return Err(AlgebraError::DifferentialDegree(alg.space.name(x).into()));
        }
        if !dg.apply_d(&dx).is_empty() {
            return Err(AlgebraError::DifferentialSquare(alg.space.name(x).into()));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = dg.apply_d(&alg.lie(&x, &y));
            let mut rhs = lie_lin(alg, &dg.apply_d(&unit(&x)), &unit(&y));
            let s = Sign::pow(alg.space.degree(x) + alg.p).to_rational();
            lin_add_all(&mut rhs, &lie_lin(alg, &unit(&x), &dg.apply_d(&unit(&y))), &s);
            if lhs != rhs {
                return Err(AlgebraError::NotDerivation(alg.space.name(x).into(), alg.space.name(y).into()));
            }
        }
    }
    let mut out = LieLeibnizAlgebra::new(format!("derived({})", alg.name), alg.space.clone(), alg.p, alg.p + 1);
    out.lie = alg.lie.clone();
    let s = Sign::pow(alg.p).to_rational();
    for x in 0..n {
        for y in 0..n {
            let v = lie_lin(alg, &dg.apply_d(&unit(&x)), &unit(&y));
            for (c, k) in v {
                out.set(BracketKind::Leib, x, y, c, &k * &s)?;
            }
        }
    }
    Ok(out)
}

fn sym(name: &str, degree: i64) -> GradedSymbol {
    GradedSymbol::new(name, degree)
}

fn qq(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// sl₂ structure constants on indices (e, f, h).
fn sl2_brackets() -> Vec<(usize, usize, usize, i64)> {
    let (e, f, h) = (0, 1, 2);
    vec![(h, e, e, 2), (e, h, e, -2), (h, f, f, -2), (f, h, f, 2), (e, f, h, 1), (f, e, h, -1)]
}

/// sl₂ ⊕ K with the trace form as Lie bracket into K and the sl₂ bracket as
/// Leibniz bracket; |sl₂| = 1, |K| = 0, bidegree (-2,-1).
pub fn sl2_trace_form() -> LieLeibnizAlgebra {
    let space = GradedSpace::new(vec![sym("e", 1), sym("f", 1), sym("h", 1), sym("K", 0)]).unwrap();
    let mut a = LieLeibnizAlgebra::new("sl2+K", space, -2, -1);
    let k = 3;
    for (x, y, c) in [(0, 1, 1), (1, 0, 1), (2, 2, 2)] {
        a.set(BracketKind::Lie, x, y, k, qq(c)).unwrap();
    }
    for (x, y, z, c) in sl2_brackets() {
        a.set(BracketKind::Leib, x, y, z, qq(c)).unwrap();
    }
    a
}

/// [`sl2_trace_form`] with `[e,f] = 2h`; breaks invariance of the form.
pub fn sl2_broken() -> LieLeibnizAlgebra {
    let mut a = sl2_trace_form();
    a.name = "sl2+K broken".into();
    a.set(BracketKind::Leib, 0, 1, 2, qq(1)).unwrap();
    a
}

/// Omni-Lie algebra over Q^n: gl(V) ⊕ V in degree 1 and a second copy W of V
/// in degree 0, bidegree (-2,-1).
///
/// `[g₁+v₁, g₂+v₂] = [g₁,g₂] + g₁v₂`, `(g₁+v₁, g₂+v₂) = g₁v₂ + g₂v₁ ∈ W`,
/// `[g, w] = [w, g] = gw`.
pub fn omni_lie(n: usize) -> LieLeibnizAlgebra {
    let mut basis = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            basis.push(sym(&format!("E{i}{j}"), 1));
        }
    }
    for i in 1..=n {
        basis.push(sym(&format!("v{i}"), 1));
    }
    for i in 1..=n {
        basis.push(sym(&format!("w{i}"), 0));
    }
    let mut a = LieLeibnizAlgebra::new(format!("omni-Lie(Q^{n})"), GradedSpace::new(basis).unwrap(), -2, -1);
    let e = |i: usize, j: usize| i * n + j;
    let v = |i: usize| n * n + i;
    let w = |i: usize| n * n + n + i;
    let one = qq(1);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // E_ij E_kl = δ_jk E_il
                    if j == k {
                        a.set(BracketKind::Leib, e(i, j), e(k, l), e(i, l), one.clone()).unwrap();
                    }
                    if l == i {
                        a.set(BracketKind::Leib, e(i, j), e(k, l), e(k, j), -one.clone()).unwrap();
                    }
                }
            }
            // E_ij v_j = v_i, and likewise on W
            a.set(BracketKind::Leib, e(i, j), v(j), v(i), one.clone()).unwrap();
            a.set(BracketKind::Leib, e(i, j), w(j), w(i), one.clone()).unwrap();
            a.set(BracketKind::Leib, w(j), e(i, j), w(i), one.clone()).unwrap();
            a.set(BracketKind::Lie, e(i, j), v(j), w(i), one.clone()).unwrap();
            a.set(BracketKind::Lie, v(j), e(i, j), w(i), one.clone()).unwrap();
        }
    }
    a
}

/// sl₂ ⊗ Λ[ε] with |ε| = -1 and d = ∂/∂ε; bracket degree 0.
pub fn sl2_exterior_dg() -> DgLie {
    let names = ["e", "f", "h"];
    let mut basis: Vec<GradedSymbol> = names.iter().map(|n| sym(n, 0)).collect();
    basis.extend(names.iter().map(|n| sym(&format!("{n}ε"), -1)));
    let mut a = LieLeibnizAlgebra::new("sl2⊗Λ[ε]", GradedSpace::new(basis).unwrap(), 0, 1);
    for (x, y, z, c) in sl2_brackets() {
        a.set(BracketKind::Lie, x, y, z, qq(c)).unwrap();
        a.set(BracketKind::Lie, x + 3, y, z + 3, qq(c)).unwrap();
        a.set(BracketKind::Lie, x, y + 3, z + 3, qq(c)).unwrap();
    }
    let d = (0..3).map(|i| (i + 3, unit(&i).into_iter().collect())).collect();
    DgLie { algebra: a, d }
}

/// Derived Lie-Leibniz algebra of [`sl2_exterior_dg`], bidegree (0,1).
pub fn derived_sl2() -> LieLeibnizAlgebra {
    derived_bracket(&sl2_exterior_dg()).expect("d is a derivation")
}

/// Parse an instance file.
///
/// ```text
/// # comment
/// bidegree -2 -1
/// degree e 1
/// lie e f -> K 1
/// leib h e -> e 2
/// ```
/// Coefficients are integers or `p/q`; `degree` lines must precede their use.
pub fn parse_instance(text: &str) -> Result<LieLeibnizAlgebra, AlgebraError> {
    let mut alg = LieLeibnizAlgebra::new("instance", GradedSpace::default(), 0, 1);
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| AlgebraError::Syntax { line: ln + 1, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let int = |s: &str| s.parse::<i64>().map_err(|_| err(format!("expected an integer, found `{s}`")));
        match toks[0] {
            "name" => alg.name = toks[1..].join(" "),
            "bidegree" if toks.len() == 3 => {
                alg.p = int(toks[1])?;
                alg.q = int(toks[2])?;
            }
            "degree" if toks.len() == 3 => {
                alg.space.push(sym(toks[1], int(toks[2])?))?;
            }
            "lie" | "leib" if toks.len() == 6 && toks[3] == "->" => {
                let kind = if toks[0] == "lie" { BracketKind::Lie } else { BracketKind::Leib };
                let coeff: Rational = toks[5].parse().map_err(|_| err(format!("bad coefficient `{}`", toks[5])))?;
                alg.set_named(kind, toks[1], toks[2], toks[4], coeff)?;
            }
            _ => return Err(err(format!("cannot read `{line}`"))),
        }
    }
    Ok(alg)
}

/// Serialize in the format read by [`parse_instance`].
pub fn write_instance(alg: &LieLeibnizAlgebra) -> String {
    let mut out = format!("name {}\nbidegree {} {}\n", alg.name, alg.p, alg.q);
    for b in &alg.space.basis {
        out.push_str(&format!("degree {} {}\n", b.name, b.degree));
    }
    for kind in [BracketKind::Lie, BracketKind::Leib] {
        for ((a, b), v) in alg.table(kind) {
            for (c, k) in v {
                out.push_str(&format!(
                    "{} {} {} -> {} {}\n",
                    kind.label(),
                    alg.space.name(*a),
                    alg.space.name(*b),
                    alg.space.name(*c),
                    k
                ));
            }
        }
    }
    out
}

/// Free bracket expression over integer labels.
///
/// Ordered first by the largest label it contains, so `(2,[1,3])` keeps 2 on
/// the left.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formal {
    key: u32,
    shape: Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Sym(u32),
    Lie(Box<Formal>, Box<Formal>),
    Leib(Box<Formal>, Box<Formal>),
}

impl Formal {
    pub fn sym(label: u32) -> Formal {
        Formal { key: label, shape: Shape::Sym(label) }
    }

    pub fn lie(a: Formal, b: Formal) -> Formal {
        Formal { key: a.key.max(b.key), shape: Shape::Lie(Box::new(a), Box::new(b)) }
    }

    pub fn leib(a: Formal, b: Formal) -> Formal {
        Formal { key: a.key.max(b.key), shape: Shape::Leib(Box::new(a), Box::new(b)) }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn leaves(&self) -> Vec<u32> {
        match &self.shape {
            Shape::Sym(l) => vec![*l],
            Shape::Lie(a, b) | Shape::Leib(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }
}

impl fmt::Display for Formal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Sym(l) => write!(f, "{l}"),
            Shape::Lie(a, b) => write!(f, "({a},{b})"),
            Shape::Leib(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Free Lie-Leibniz symbols of bidegree (0,1); labels have degree 0 unless set.
///
/// The Lie bracket is stored with its arguments in [`Formal`] order, the
/// Leibniz bracket is left as written.
#[derive(Debug, Clone, Default)]
pub struct FormalAlgebra {
    pub label_degrees: BTreeMap<u32, i64>,
}

impl Alphabet for FormalAlgebra {
    type Elem = Formal;

    fn show(&self, x: &Formal) -> String {
        x.to_string()
    }

    fn degree(&self, x: &Formal) -> i64 {
        match &x.shape {
            Shape::Sym(l) => self.label_degrees.get(l).copied().unwrap_or(0),
            Shape::Lie(a, b) => self.degree(a) + self.degree(b),
            Shape::Leib(a, b) => self.degree(a) + self.degree(b) + 1,
        }
    }
}

impl BracketAlgebra for FormalAlgebra {
    fn lie(&self, x: &Formal, y: &Formal) -> Lin<Formal> {
        let mut out = Lin::new();
        if x == y {
            if self.degree(x).rem_euclid(2) == 1 {
                out.insert(Formal::lie(x.clone(), y.clone()), Rational::one());
            }
        } else if x < y {
            out.insert(Formal::lie(x.clone(), y.clone()), Rational::one());
        } else {
            let s = -Sign::pow(self.degree(x) * self.degree(y)).to_rational();
            out.insert(Formal::lie(y.clone(), x.clone()), s);
        }
        out
    }

    fn leib(&self, x: &Formal, y: &Formal) -> Lin<Formal> {
        unit(&Formal::leib(x.clone(), y.clone()))
    }
}

/// Render a formal sum with Leibniz-rooted terms first, then by leaf sequence.
pub fn format_formal_sum(v: &Lin<Formal>) -> String {
    let mut terms: Vec<(&Formal, &Rational)> = v.iter().collect();
    terms.sort_by_key(|(t, _)| (!matches!(t.shape, Shape::Leib(..)), t.leaves(), (*t).clone()));
    let mut out = String::new();
    for (t, c) in terms {
        let neg = c < &Rational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if neg {
            out.push_str(if out.is_empty() { "-" } else { " - " });
        } else if !out.is_empty() {
            out.push_str(" + ");
        }
        if !abs.is_one() {
            out.push_str(&abs.to_string());
        }
        out.push_str(&t.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
