//! Exact rationals, graded signs, shifts and (un)shuffles.
//!
//! Every other module funnels its sign bookkeeping through [`koszul_sign`] and
//! [`tensor_map_sign`], so there is a single place where the Koszul rule lives.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics on a zero denominator.
pub fn q(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("permutation has {perm} slots but {degrees} degrees were given")]
    LengthMismatch { perm: usize, degrees: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("cannot split {n} slots into a block of {i}")]
    BlockTooLarge { i: usize, n: usize },
}

/// A sign in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^e`.
    pub fn pow(e: i64) -> Sign {
        if e.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_rational(self) -> Rational {
        qi(self.to_i64())
    }

    pub fn apply(self, x: Rational) -> Rational {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// How degrees enter sign computations.
///
/// `Integer` keeps the full Z-grading. `Parity` collapses to Z/2, which is the
/// regime where `ss = s^{-1}s^{-1} = id` may be used as an identification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GradingMode {
    #[default]
    Integer,
    Parity,
}

impl GradingMode {
    pub fn reduce(self, degree: i64) -> i64 {
        match self {
            GradingMode::Integer => degree,
            GradingMode::Parity => degree.rem_euclid(2),
        }
    }
}

/// A named graded symbol. Equality and ordering are by name only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedSymbol {
    pub name: String,
    pub degree: i64,
}

impl GradedSymbol {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        GradedSymbol { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

impl PartialEq for GradedSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}
impl Eq for GradedSymbol {}

impl PartialOrd for GradedSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GradedSymbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.name.cmp(&other.name)
    }
}

/// The suspension `s` (degree +1) or desuspension `s^{-1}` (degree -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftOp {
    Up,
    Down,
}

impl ShiftOp {
    pub fn degree(self) -> i64 {
        match self {
            ShiftOp::Up => 1,
            ShiftOp::Down => -1,
        }
    }

    pub fn inverse(self) -> ShiftOp {
        match self {
            ShiftOp::Up => ShiftOp::Down,
            ShiftOp::Down => ShiftOp::Up,
        }
    }

    /// Sign picked up by `other ∘ self` on an element; `s^{-1}s` and `ss^{-1}`
    /// are the identity with sign +1.
    pub fn compose_sign(self, other: ShiftOp) -> Option<Sign> {
        (self.inverse() == other).then_some(Sign::Plus)
    }
}

fn check_permutation(sigma: &[usize]) -> Result<(), KernelError> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(KernelError::NotAPermutation(n));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Koszul sign of rearranging graded slots.
///
/// `sigma[k]` is the (0-based) input slot placed at output position `k`.
/// The result is the product of `(-1)^{|a||b|}` over every pair the
/// rearrangement inverts.
pub fn koszul_sign(sigma: &[usize], degrees: &[i64]) -> Result<Sign, KernelError> {
    if sigma.len() != degrees.len() {
        return Err(KernelError::LengthMismatch { perm: sigma.len(), degrees: degrees.len() });
    }
    check_permutation(sigma)?;
    Ok(koszul_sign_unchecked(sigma, degrees))
}

pub(crate) fn koszul_sign_unchecked(sigma: &[usize], degrees: &[i64]) -> Sign {
    let mut odd = 0i64;
    for k in 0..sigma.len() {
        if degrees[sigma[k]].rem_euclid(2) == 0 {
            continue;
        }
        for l in k + 1..sigma.len() {
            if sigma[k] > sigma[l] && degrees[sigma[l]].rem_euclid(2) == 1 {
                odd += 1;
            }
        }
    }
    Sign::pow(odd)
}

/// Plain sign of a permutation (all degrees odd).
pub fn permutation_sign(sigma: &[usize]) -> Sign {
    let ones = vec![1; sigma.len()];
    koszul_sign_unchecked(sigma, &ones)
}

/// All `(i, n-i)`-unshuffles of `n` slots, each with its Koszul sign.
///
/// An unshuffle lists a block of `i` slots in increasing order followed by the
/// remaining slots in increasing order. Without degrees every sign is +1.
pub fn unshuffles(
    i: usize,
    n: usize,
    degrees: Option<&[i64]>,
) -> Result<Vec<(Vec<usize>, Sign)>, KernelError> {
    if i > n {
        return Err(KernelError::BlockTooLarge { i, n });
    }
    if let Some(d) = degrees {
        if d.len() != n {
            return Err(KernelError::LengthMismatch { perm: n, degrees: d.len() });
        }
    }
    let mut out = Vec::new();
    for block in combinations(n, i) {
        let mut perm = block.clone();
        perm.extend((0..n).filter(|k| !block.contains(k)));
        let sign = match degrees {
            Some(d) => koszul_sign_unchecked(&perm, d),
            None => Sign::Plus,
        };
        out.push((perm, sign));
    }
    Ok(out)
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Sign of applying `f_1 ⊗ … ⊗ f_n` to `a_1 ⊗ … ⊗ a_n`:
/// `(-1)^{Σ_{j<k} |f_k||a_j|}`.
pub fn tensor_map_sign(map_degrees: &[i64], arg_degrees: &[i64]) -> Sign {
    debug_assert_eq!(map_degrees.len(), arg_degrees.len());
    let mut prefix = 0i64;
    let mut e = 0i64;
    for (f, a) in map_degrees.iter().zip(arg_degrees) {
        e += f * prefix;
        prefix += a;
    }
    Sign::pow(e)
}

/// Sign and output degree of transporting an `n`-ary product of degree
/// `bracket_degree` across the suspension: `s ∘ β ∘ (s^{-1})^{⊗n}` evaluated
/// on `s x_1 ⊗ … ⊗ s x_n`, where `word_degrees` are the `|x_i|`.
///
/// The returned degree is that of `s β(x_1, …, x_n)`.
pub fn shift_bracket(bracket_degree: i64, word_degrees: &[i64]) -> (Sign, i64) {
    let shifted: Vec<i64> = word_degrees.iter().map(|d| d + 1).collect();
    let maps = vec![-1; word_degrees.len()];
    let sign = tensor_map_sign(&maps, &shifted);
    let degree = 1 + bracket_degree + word_degrees.iter().sum::<i64>();
    (sign, degree)
}

/// Degree of the coderivation induced by a map of degree `f_degree` and
/// arity profile `(a_1, …, a_n)`: `2 + |f| - Σ a_i - n`.
pub fn coderivation_degree(f_degree: i64, profile: &[usize]) -> i64 {
    2 + f_degree - profile.iter().sum::<usize>() as i64 - profile.len() as i64
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn is_zero(x: &Rational) -> bool {
    x.is_zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_plus() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 3, 5]).unwrap(), Sign::Plus);
    }

    #[test]
    fn odd_swap_is_minus() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), Sign::Minus);
    }

    #[test]
    fn three_cycle() {
        // (1,2,3) -> (2,3,1) with degrees (1,1,0): only 2 and 1 cross, both odd.
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 1, 0]).unwrap(), Sign::Minus);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            koszul_sign(&[0, 1], &[1]),
            Err(KernelError::LengthMismatch { .. })
        ));
        assert!(matches!(koszul_sign(&[0, 0], &[1, 1]), Err(KernelError::NotAPermutation(2))));
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(1, 2, None).unwrap().len(), 2);
        assert_eq!(unshuffles(2, 4, None).unwrap().len(), 6);
        assert!(unshuffles(3, 2, None).is_err());
    }

    #[test]
    fn unshuffle_sign_odd_symbols() {
        let u = unshuffles(1, 3, Some(&[1, 1, 1])).unwrap();
        let (_, s) = u.iter().find(|(p, _)| p[0] == 1).unwrap();
        assert_eq!(*s, Sign::Minus);
    }

    #[test]
    fn shift_examples() {
        // even Leibniz bracket conjugated by s, |x1| = 0
        assert_eq!(shift_bracket(0, &[0, 0]).0, Sign::Minus);
        assert_eq!(shift_bracket(0, &[0]).0, Sign::Plus);
        assert_eq!(coderivation_degree(0, &[2]), -1);
        assert_eq!(coderivation_degree(0, &[1, 1]), -2);
        assert_eq!(ShiftOp::Up.compose_sign(ShiftOp::Down), Some(Sign::Plus));
    }

    #[test]
    fn rationals_are_reduced() {
        let x = q(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
    }

    #[test]
    fn parity_mode() {
        assert_eq!(GradingMode::Parity.reduce(-3), 1);
        assert_eq!(GradingMode::Integer.reduce(-3), -3);
    }

    fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
        // arrangement by tau, then by sigma on the arranged list
        sigma.iter().map(|&k| tau[k]).collect()
    }

    proptest! {
        #[test]
        fn koszul_is_multiplicative(n in 1usize..6, seed in 0usize..10_000, degs in proptest::collection::vec(-3i64..4, 5)) {
            let perms = permutations(n);
            let sigma = &perms[seed % perms.len()];
            let tau = &perms[(seed / 7) % perms.len()];
            let d = &degs[..n];
            let first = koszul_sign(tau, d).unwrap();
            let permuted: Vec<i64> = tau.iter().map(|&k| d[k]).collect();
            let second = koszul_sign(sigma, &permuted).unwrap();
            let total = koszul_sign(&compose(sigma, tau), d).unwrap();
            prop_assert_eq!(first * second, total);
        }

        #[test]
        fn even_degrees_give_plus(n in 1usize..6, seed in 0usize..1000, degs in proptest::collection::vec(-2i64..3, 5)) {
            let perms = permutations(n);
            let sigma = &perms[seed % perms.len()];
            let d: Vec<i64> = degs[..n].iter().map(|x| 2 * x).collect();
            prop_assert_eq!(koszul_sign(sigma, &d).unwrap(), Sign::Plus);
        }
    }

    #[test]
    fn unshuffles_partition_symmetric_group() {
        for n in 1..=5 {
            let mut all: Vec<Vec<usize>> = Vec::new();
            for i in 0..=n {
                for (u, _) in unshuffles(i, n, None).unwrap() {
                    // compose with every permutation of each block
                    for p in permutations(i) {
                        for r in permutations(n - i) {
                            let mut w: Vec<usize> = p.iter().map(|&k| u[k]).collect();
                            w.extend(r.iter().map(|&k| u[i + k]));
                            all.push(w);
                        }
                    }
                }
            }
            // each split size i reaches every permutation exactly once
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), factorial(n));
            assert_eq!(all.len(), (n + 1) * factorial(n));
        }
    }
}
