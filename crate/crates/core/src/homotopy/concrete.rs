//! sh Leibniz families on concrete graded spaces, higher derived brackets of
//! deformed dg Lie algebras, invariance and the Cartan 3-form.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::HomotopyError;
use crate::algebra::{
    check_ll_axioms, lie_lin, lin_add, lin_add_all, AlgebraError, Alphabet, BracketAlgebra, BracketKind, GradedSpace,
    Lin, LieLeibnizAlgebra,
};
use crate::bar::{
    bar_codifferential, coderivation_from, commutator, lie_part, square, Bar, CoalgebraKind, Coderivation,
    Extension, Multilinear, SquareReport, TensorWord, Witness,
};
use crate::kernel::{GradedSymbol, Rational, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `D_n` of arity `n`, degree `2n-3`, on `T̄ s s g`.
    ShLeibniz,
    /// `l_n` of degree `n-2` on `S̄ s g`.
    ShLie,
    /// `l^{(a_1…a_n)}` of degree `n + Σa - 3` on `T̄ s S̄ s g`.
    ShLL,
}

impl FamilyKind {
    pub fn coalgebra(self) -> CoalgebraKind {
        match self {
            FamilyKind::ShLeibniz => CoalgebraKind::Zinbiel,
            FamilyKind::ShLie => CoalgebraKind::Commutative,
            FamilyKind::ShLL => CoalgebraKind::Mixed,
        }
    }

    pub fn expected_degree(self, profile: &[usize]) -> i64 {
        let total = profile.iter().sum::<usize>() as i64;
        match self {
            FamilyKind::ShLeibniz => 2 * total - 3,
            FamilyKind::ShLie => total - 2,
            FamilyKind::ShLL => profile.len() as i64 + total - 3,
        }
    }
}

#[derive(Clone)]
pub struct FamilyMap<'a, E> {
    pub profile: Vec<usize>,
    pub degree: i64,
    pub map: Multilinear<'a, E>,
}

/// A finite family of multilinear maps of one kind.
#[derive(Clone)]
pub struct HomotopyFamily<'a, E> {
    pub kind: FamilyKind,
    pub maps: Vec<FamilyMap<'a, E>>,
}

impl<'a, E: Ord + Clone + 'a> HomotopyFamily<'a, E> {
    pub fn new(kind: FamilyKind) -> Self {
        HomotopyFamily { kind, maps: Vec::new() }
    }

    /// Add `D_n` (sh Leibniz) with arity `n`.
    pub fn with(mut self, profile: Vec<usize>, degree: i64, map: Multilinear<'a, E>) -> Self {
        self.maps.push(FamilyMap { profile, degree, map });
        self
    }

    pub fn get(&self, profile: &[usize]) -> Option<&FamilyMap<'a, E>> {
        self.maps.iter().find(|m| m.profile == profile)
    }

    pub fn validate(&self) -> Result<(), HomotopyError> {
        for m in &self.maps {
            let expected = self.kind.expected_degree(&m.profile);
            if m.degree != expected {
                return Err(HomotopyError::DegreeMismatch {
                    kind: format!("{:?}", self.kind),
                    arity: m.profile.iter().sum(),
                    expected,
                    found: m.degree,
                });
            }
        }
        Ok(())
    }

    /// The induced coderivation, of degree −1.
    pub fn coderivation<A: Alphabet<Elem = E>>(&self, bar: &Bar<'a, A>) -> Result<Coderivation<'a, E>, HomotopyError> {
        self.validate()?;
        let mut cod = Coderivation::zero(bar.kind, -1);
        for m in &self.maps {
            cod = cod.plus(&coderivation_from(bar, m.map.clone(), &m.profile, m.degree)?);
        }
        Ok(cod)
    }
}

/// Square of the sh Leibniz codifferential `Σ ∂̃_n` on words of weight `≤ max_weight`.
pub fn sh_leibniz_square<'a, A: Alphabet>(
    alg: &'a A,
    family: &HomotopyFamily<'a, A::Elem>,
    letters: &[A::Elem],
    max_weight: usize,
) -> Result<SquareReport, HomotopyError> {
    if family.kind != FamilyKind::ShLeibniz {
        return Err(HomotopyError::DegreeMismatch {
            kind: format!("{:?}", family.kind),
            arity: 0,
            expected: 0,
            found: 0,
        });
    }
    let bar = Bar::new(alg, CoalgebraKind::Zinbiel);
    let cod = family.coderivation(&bar)?;
    Ok(square(&bar, &cod, letters, max_weight))
}

/// Linear endomorphism on basis indices.
pub type LinearMap = BTreeMap<usize, Lin<usize>>;

pub fn apply_map(f: &LinearMap, v: &Lin<usize>) -> Lin<usize> {
    let mut out = Lin::new();
    for (x, c) in v {
        if let Some(fx) = f.get(x) {
            lin_add_all(&mut out, fx, c);
        }
    }
    out
}

fn unit(x: usize) -> Lin<usize> {
    let mut v = Lin::new();
    lin_add(&mut v, &x, &Rational::one());
    v
}

/// A graded Lie algebra (bracket of degree 0) with a deformed differential
/// `d_0 + ħ d_1 + ħ² d_2 + …`.
#[derive(Debug, Clone)]
pub struct DgLieInstance {
    pub alg: LieLeibnizAlgebra,
    pub d: Vec<LinearMap>,
}

impl DgLieInstance {
    /// Every `d_n` has degree `2n-1` and is a derivation of the bracket.
    pub fn check(&self) -> Result<(), HomotopyError> {
        let alg = &self.alg;
        let dim = alg.space.dim();
        for (n, d) in self.d.iter().enumerate() {
            let deg = 2 * n as i64 - 1;
            for x in 0..dim {
                for y in apply_map(d, &unit(x)).keys() {
                    if alg.space.degree(*y) != alg.space.degree(x) + deg {
                        return Err(HomotopyError::DegreeMismatch {
                            kind: format!("d{n}"),
                            arity: 1,
                            expected: deg,
                            found: alg.space.degree(*y) - alg.space.degree(x),
                        });
                    }
                }
            }
            for x in 0..dim {
                for y in 0..dim {
                    let lhs = apply_map(d, &alg.lie(&x, &y));
                    let mut rhs = lie_lin(alg, &apply_map(d, &unit(x)), &unit(y));
                    let s = Sign::pow(deg * alg.space.degree(x)).to_rational();
                    lin_add_all(&mut rhs, &lie_lin(alg, &unit(x), &apply_map(d, &unit(y))), &s);
                    if lhs != rhs {
                        return Err(HomotopyError::NotDerivation(format!(
                            "d{n} on ({}, {})",
                            alg.space.name(x),
                            alg.space.name(y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `D_1 = d_0` and `D_{n+1} = ((…(d_n ·, ·), …), ·)` for every nonzero `d_n`.
pub fn higher_derived_family(inst: &DgLieInstance) -> Result<HomotopyFamily<'_, usize>, HomotopyError> {
    inst.check()?;
    let alg = &inst.alg;
    let mut fam = HomotopyFamily::new(FamilyKind::ShLeibniz);
    for (n, d) in inst.d.iter().enumerate() {
        if d.values().all(|v| v.is_empty()) {
            continue;
        }
        let f: Multilinear<'_, usize> = Rc::new(move |xs: &[usize]| {
            let mut v = apply_map(d, &unit(xs[0]));
            for x in &xs[1..] {
                v = lie_lin(alg, &v, &unit(*x));
            }
            v
        });
        fam = fam.with(vec![1; n + 1], 2 * n as i64 - 1, f);
    }
    Ok(fam)
}

/// `L ⊗ Λ[gens]` for a Lie algebra `L` in degree 0 and odd generators.
/// Basis: `x·m` for `x ∈ L` and monomials `m` (subsets of the generators).
fn lie_exterior(
    name: &str,
    lie_names: &[&str],
    brackets: &[(usize, usize, usize, i64)],
    gens: &[(&str, i64)],
) -> (LieLeibnizAlgebra, Vec<Vec<usize>>) {
    let g = gens.len();
    let monos: Vec<Vec<usize>> = (0..1usize << g).map(|m| (0..g).filter(|k| m & (1 << k) != 0).collect()).collect();
    let nm = monos.len();
    let mut basis = Vec::new();
    for x in lie_names {
        for m in &monos {
            let label: String = m.iter().map(|&k| gens[k].0).collect();
            let deg: i64 = m.iter().map(|&k| gens[k].1).sum();
            basis.push(GradedSymbol::new(format!("{x}{label}"), deg));
        }
    }
    let mut alg = LieLeibnizAlgebra::new(name, GradedSpace::new(basis).expect("distinct names"), 0, 1);
    for &(x, y, z, c) in brackets {
        for (a, ma) in monos.iter().enumerate() {
            for (b, mb) in monos.iter().enumerate() {
                if ma.iter().any(|k| mb.contains(k)) {
                    continue;
                }
                // sort the concatenated odd generators
                let mut v: Vec<usize> = ma.iter().chain(mb).copied().collect();
                let mut inv = 0;
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        inv += usize::from(v[i] > v[j]);
                    }
                }
                v.sort();
                let prod = monos.iter().position(|m| *m == v).expect("monomial");
                let s = Sign::pow(inv as i64).to_i64() * c;
                alg.set(BracketKind::Lie, x * nm + a, y * nm + b, z * nm + prod, Rational::from_integer(s.into()))
                    .expect("homogeneous");
            }
        }
    }
    (alg, monos)
}

/// `1 ⊗ ∂/∂g` for the odd generator `g`.
fn partial(dim_l: usize, monos: &[Vec<usize>], g: usize) -> LinearMap {
    let nm = monos.len();
    let mut d = LinearMap::new();
    for x in 0..dim_l {
        for (a, m) in monos.iter().enumerate() {
            if let Some(pos) = m.iter().position(|&k| k == g) {
                let rest: Vec<usize> = m.iter().copied().filter(|&k| k != g).collect();
                let b = monos.iter().position(|r| *r == rest).expect("monomial");
                let mut v = Lin::new();
                lin_add(&mut v, &(x * nm + b), &Sign::pow(pos as i64).to_rational());
                d.insert(x * nm + a, v);
            }
        }
    }
    d
}

fn sl2_table() -> Vec<(usize, usize, usize, i64)> {
    let (e, f, h) = (0, 1, 2);
    vec![(h, e, e, 2), (e, h, e, -2), (h, f, f, -2), (f, h, f, 2), (e, f, h, 1), (f, e, h, -1)]
}

/// `sl₂ ⊗ Λ[ε, θ]` with `|ε| = -1`, `|θ| = 1`, `d_0 = ∂/∂θ`, `d_1 = ∂/∂ε`.
pub fn sl2_grassmann() -> DgLieInstance {
    let (alg, monos) = lie_exterior("sl2⊗Λ[ε,θ]", &["e", "f", "h"], &sl2_table(), &[("ε", -1), ("θ", 1)]);
    DgLieInstance { alg, d: vec![partial(3, &monos, 1), partial(3, &monos, 0)] }
}

/// The two-dimensional Lie algebra `(a, b) = b` tensored with `Λ[ζ]`,
/// `|ζ| = -3`, deformed only by `d_2 = ∂/∂ζ`.
pub fn affine_zeta() -> DgLieInstance {
    let (alg, monos) = lie_exterior("aff⊗Λ[ζ]", &["a", "b"], &[(0, 1, 1, 1), (1, 0, 1, -1)], &[("ζ", -3)]);
    DgLieInstance { alg, d: vec![LinearMap::new(), LinearMap::new(), partial(2, &monos, 0)] }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub name: String,
    pub words: usize,
    pub zero: bool,
    pub witness: Option<Witness>,
}

fn single_letter<E: Ord + Clone>(v: &Lin<TensorWord<E>>) -> bool {
    v.keys().any(|w| w.weight() == 1)
}

/// `[∂_Lie, ∂̃_n] = 0`, checked on the corestriction over all words of weight `n + 1`.
pub fn invariant_cocycle_check(
    alg: &LieLeibnizAlgebra,
    family: &HomotopyFamily<'_, usize>,
    n: usize,
) -> Result<CocycleReport, HomotopyError> {
    if alg.p != 0 {
        return Err(AlgebraError::NotShiftable { p: alg.p, q: alg.q }.into());
    }
    let bar = Bar::new(alg, CoalgebraKind::Mixed);
    let profile = vec![1; n];
    let mut report = CocycleReport { name: format!("[∂_Lie, ∂̃_{n}]"), words: 0, zero: true, witness: None };
    let Some(m) = family.get(&profile) else {
        return Ok(report);
    };
    family.validate()?;
    let dn = coderivation_from(&bar, m.map.clone(), &profile, m.degree)?;
    let dl = lie_part(&bar)?;
    let (el, en) = (Extension::new(&bar, &dl), Extension::new(&bar, &dn));
    let letters: Vec<usize> = (0..alg.space.dim()).collect();
    for w in bar.basis_words(&letters, n + 1).into_iter().filter(|w| w.weight() == n + 1) {
        report.words += 1;
        let v = commutator(&el, &en, &w);
        if single_letter(&v) {
            report.zero = false;
            report.witness = Some(Witness { law: report.name.clone(), word: bar.show(&w), residual: bar.show_lin(&v) });
            break;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanReport {
    pub axioms_pass: bool,
    pub cocycle: CocycleReport,
}

/// `ψ = ([.,.],.)` of profile (1,1,1) is a cocycle: `[∂_LL, ∂_ψ] = 0` on
/// every word of weight 4 (after regrading to bidegree (0,1)).
pub fn cartan_cocycle_check(alg: &LieLeibnizAlgebra) -> Result<CartanReport, HomotopyError> {
    let axioms_pass = check_ll_axioms(alg)?.pass;
    let canon = alg.to_canonical()?;
    let bar = Bar::new(&canon, CoalgebraKind::Mixed);
    let dll = bar_codifferential(&bar)?;
    let c = &canon;
    let psi: Multilinear<'_, usize> = Rc::new(move |xs: &[usize]| lie_lin(c, &c.leib(&xs[0], &xs[1]), &unit(xs[2])));
    let dpsi = coderivation_from(&bar, psi, &[1, 1, 1], 1)?;
    let (e1, e2) = (Extension::new(&bar, &dll), Extension::new(&bar, &dpsi));
    let letters: Vec<usize> = (0..canon.space.dim()).collect();
    let mut cocycle = CocycleReport { name: "[∂_LL, ∂_ψ]".into(), words: 0, zero: true, witness: None };
    for w in bar.basis_words(&letters, 4).into_iter().filter(|w| w.weight() == 4) {
        cocycle.words += 1;
        let v = commutator(&e1, &e2, &w);
        if !v.is_empty() {
            cocycle.zero = false;
            cocycle.witness = Some(Witness { law: cocycle.name.clone(), word: bar.show(&w), residual: bar.show_lin(&v) });
            break;
        }
    }
    Ok(CartanReport { axioms_pass, cocycle })
}
