//! Sparse exact linear algebra: incremental fraction-free echelon forms,
//! ranks, membership and kernels.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::kernel::Rational;

/// Sparse rational vector keyed by column index.
pub type SparseVec = BTreeMap<usize, Rational>;

type IntRow = BTreeMap<usize, BigInt>;

/// Scale a rational vector to a primitive integer vector with positive leading entry.
fn to_primitive(v: &SparseVec) -> IntRow {
    let mut lcm = BigInt::one();
    for x in v.values() {
        lcm = lcm.lcm(x.denom());
    }
    let mut row: IntRow = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(&c, x)| (c, x.numer() * (&lcm / x.denom())))
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for x in row.values() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    if row.values().next().map(|x| x.is_negative()).unwrap_or(false) {
        g = -g;
    }
    if !g.is_one() {
        for x in row.values_mut() {
            *x = &*x / &g;
        }
    }
}

/// Row space of a set of vectors, kept in fraction-free echelon form.
///
/// Rows are primitive integer vectors indexed by their pivot (leading) column.
#[derive(Debug, Clone, Default)]
pub struct Subspace {
    rows: BTreeMap<usize, IntRow>,
}

impl Subspace {
    pub fn new() -> Self {
        Subspace::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut s = Subspace::new();
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_int(&self, mut v: IntRow) -> IntRow {
        let mut cursor = 0usize;
        loop {
            let Some((c, coeff)) = v.range(cursor..).next().map(|(c, x)| (*c, x.clone())) else {
                break;
            };
            if let Some(row) = self.rows.get(&c) {
                let lead = &row[&c];
                let g = lead.gcd(&coeff);
                let mul_v = lead / &g;
                let mul_r = &coeff / &g;
                for x in v.values_mut() {
                    *x = &*x * &mul_v;
                }
                for (col, x) in row {
                    let e = v.entry(*col).or_insert_with(BigInt::zero);
                    *e -= x * &mul_r;
                    if e.is_zero() {
                        v.remove(col);
                    }
                }
                make_primitive(&mut v);
            }
            cursor = c + 1;
        }
        v
    }

    /// Add a vector; returns true if it enlarged the space.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce_int(to_primitive(v));
        match r.keys().next() {
            Some(&c) => {
                self.rows.insert(c, r);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_int(to_primitive(v)).is_empty()
    }

    /// Residual of `v` after elimination against this space, up to a nonzero scalar.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        self.reduce_int(to_primitive(v))
            .into_iter()
            .map(|(c, x)| (c, Rational::from_integer(x)))
            .collect()
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows
            .values()
            .map(|r| r.iter().map(|(c, x)| (*c, Rational::from_integer(x.clone()))).collect())
            .collect()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.rank() == other.rank() && self.is_subspace_of(other)
    }
}

/// Rank of a dense integer matrix by Bareiss fraction-free elimination.
///
/// Independent of [`Subspace`]; used to cross-check ranks in tests.
pub fn bareiss_rank(matrix: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Basis of `{x : Σ_c row[c] x[c] = 0 for every row}` in `ncols` unknowns.
pub fn kernel(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    // reduced row echelon form over the rationals; the systems here are small
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut d = vec![Rational::zero(); ncols];
            for (c, x) in r {
                d[*c] = x.clone();
            }
            d
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rational::one() / m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let sub = &f * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = SparseVec::new();
            v.insert(f, Rational::one());
            for (r, &p) in pivots.iter().enumerate() {
                if !m[r][f].is_zero() {
                    v.insert(p, -m[r][f].clone());
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{q, qi};
    use proptest::prelude::*;

    fn sv(entries: &[(usize, Rational)]) -> SparseVec {
        entries.iter().cloned().collect()
    }

    #[test]
    fn dependent_vectors() {
        let mut s = Subspace::new();
        assert!(s.insert(&sv(&[(0, qi(1)), (1, qi(2))])));
        assert!(s.insert(&sv(&[(1, qi(1)), (2, q(1, 2))])));
        assert!(!s.insert(&sv(&[(0, qi(2)), (1, qi(5)), (2, q(1, 2))])));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&sv(&[(0, qi(1)), (1, qi(3)), (2, q(1, 2))])));
        assert!(!s.contains(&sv(&[(2, qi(1))])));
    }

    #[test]
    fn kernel_of_single_row() {
        let k = kernel(&[sv(&[(0, qi(1)), (1, qi(1))])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = v.get(&0).cloned().unwrap_or_default() + v.get(&1).cloned().unwrap_or_default();
            assert_eq!(dot, qi(0));
        }
    }

    proptest! {
        #[test]
        fn incremental_rank_matches_bareiss(entries in proptest::collection::vec(proptest::collection::vec(-3i64..4, 6), 1..8)) {
            let dense: Vec<Vec<BigInt>> = entries.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let vs: Vec<SparseVec> = entries.iter().map(|r| r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, &x)| (c, qi(x))).collect()).collect();
            let s = Subspace::from_vectors(vs.iter());
            prop_assert_eq!(s.rank(), bareiss_rank(&dense));
            let k = kernel(&vs, 6);
            prop_assert_eq!(k.len() + s.rank(), 6);
        }
    }
}
