//! Closed-form sign bookkeeping for the two cancellation arguments, replayed
//! over all small admissible indices.

use serde::{Deserialize, Serialize};

use super::derived_homotopy_sign;
use crate::kernel::Sign;

fn pm(m: i64, i: i64) -> Sign {
    derived_homotopy_sign(m as usize, i as usize).expect("admissible index")
}

/// One `(m, n, i, j, p)` row: each displayed factor and each step of the
/// simplification, as signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A1Entry {
    pub m: usize,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub pm1: i64,
    pub pm2: i64,
    pub pm3: i64,
    /// `(±)ⁱ_m(±)ʲ_n(±)₁(±)₂`.
    pub y: i64,
    /// `(±)^{i-1}_m(±)^{j+1}_n(±)₃`.
    pub z: i64,
    /// Each rewriting step of both chains holds.
    pub steps_hold: bool,
}

/// Sign chains for `∂^{(i)}_m∂^{(j)}_n` and `∂^{(i-1)}_m∂^{(j+1)}_n` on the
/// basic element of profile `(1^p, n-j, 1^{i+j-p-1}, m-i)`, total arity `≤ max`.
pub fn a1_ledger(max_arity: usize) -> Vec<A1Entry> {
    let mut out = Vec::new();
    for t in 2..=max_arity as i64 {
        for m in 2..=t {
            let n = t + 1 - m;
            for i in 1..m {
                for j in 0..n - 1 {
                    for p in j..i + j {
                        let pm1 = Sign::pow((n + j) * (i + j - p - 1) + (n + j) * (m - i + 1));
                        let pm2 = Sign::pow((n + j + 1) * (i + j - p - 1) + (i + j - p - 1));
                        let pm3 = Sign::pow((m - i) * (n + j - 1));
                        let y = pm(m, i) * pm(n, j) * pm1 * pm2;
                        let y1 = pm(m, i) * pm(n, j) * Sign::pow((n + j) * (m - i + 1));
                        let y2 = pm(m, i) * pm(n, j + 1) * Sign::pow((n + j) * (m - i));
                        let z = pm(m, i - 1) * pm(n, j + 1) * pm3;
                        let z1 = -(pm(m, i - 1) * pm(n, j + 1) * Sign::pow(m + i - 1) * Sign::pow((m - i) * (n + j)));
                        let z2 = -(pm(m, i) * pm(n, j + 1) * Sign::pow((m - i) * (n + j)));
                        let uses = pm(n, j) * Sign::pow(n + j) == pm(n, j + 1)
                            && pm(m, i - 1) * Sign::pow(m + i - 1) == pm(m, i);
                        out.push(A1Entry {
                            m: m as usize,
                            n: n as usize,
                            i: i as usize,
                            j: j as usize,
                            p: p as usize,
                            pm1: pm1.to_i64(),
                            pm2: pm2.to_i64(),
                            pm3: pm3.to_i64(),
                            y: y.to_i64(),
                            z: z.to_i64(),
                            steps_hold: uses && y == y1 && y1 == y2 && z == z1 && z1 == z2,
                        });
                    }
                }
            }
        }
    }
    out
}

/// One `(m, n, i, j)` row of the diagonal comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A2Entry {
    pub m: usize,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    /// Sign of the nested curly-bracket term after `∂^{(i)}_m∂^{(j)}_n`.
    pub lp3: i64,
    /// Sign of the same term inside `∂_m∂_n`, with `(m-i-1)(m-i-2)/2`.
    pub lp7: i64,
    /// `lp7` with the literal `(m-i-1)(m-3)/2`.
    pub lp7_literal: i64,
}

impl A2Entry {
    pub fn k(&self) -> usize {
        self.i + self.j
    }

    /// `lp3 = (-1)^k lp7`.
    pub fn holds(&self) -> bool {
        self.lp3 == Sign::pow(self.k() as i64).to_i64() * self.lp7
    }

    pub fn literal_holds(&self) -> bool {
        self.lp3 == Sign::pow(self.k() as i64).to_i64() * self.lp7_literal
    }
}

fn half(a: i64) -> i64 {
    debug_assert!(a % 2 == 0);
    a / 2
}

pub fn a2_ledger(max_arity: usize) -> Vec<A2Entry> {
    let mut out = Vec::new();
    for t in 1..=max_arity as i64 {
        for m in 1..=t {
            let n = t + 1 - m;
            for i in 0..m {
                for j in 0..n {
                    let lp3 = pm(m, i) * pm(n, j) * Sign::pow((n + j) * (m - i - 1));
                    let common = half((n - j) * (n - j - 1)) + half(n * (n - 1)) + (1 + n + j) * (m - i - 1) + half(m * (m - 1));
                    let lp7 = Sign::pow(common + half((m - i - 1) * (m - i - 2)));
                    // the literal exponent need not be an integer; read it with floor division
                    let lp7_literal = Sign::pow(common + ((m - i - 1) * (m - 3)).div_euclid(2));
                    out.push(A2Entry {
                        m: m as usize,
                        n: n as usize,
                        i: i as usize,
                        j: j as usize,
                        lp3: lp3.to_i64(),
                        lp7: lp7.to_i64(),
                        lp7_literal: lp7_literal.to_i64(),
                    });
                }
            }
        }
    }
    out
}
