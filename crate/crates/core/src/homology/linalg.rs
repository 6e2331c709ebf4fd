//! Exact rank computation for integer incidence matrices.
//!
//! Matrices are stored as triplets and densified row by row only when a rank
//! is requested. Over the rationals we run Bareiss fraction-free elimination,
//! first in `i128` and, if any intermediate overflows, again with big integers.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Field;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `value` to entry (r, c). Repeated pushes accumulate.
    pub fn push(&mut self, r: usize, c: usize, value: i64) {
        assert!(r < self.rows && c < self.cols, "entry out of bounds");
        if value != 0 {
            self.entries.push((r, c, value));
        }
    }

    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    fn dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            m[r][c] += v;
        }
        m
    }

    /// Plain-text dump: a header line `rows cols nnz` followed by 1-based
    /// `row col value` triplets after accumulation.
    pub fn to_matrix_market(&self) -> String {
        let dense = self.dense();
        let nz: Vec<(usize, usize, i64)> = dense
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(move |(c, v)| (r, c, *v))
            })
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "%%MatrixMarket matrix coordinate integer general");
        let _ = writeln!(out, "{} {} {}", self.rows, self.cols, nz.len());
        for (r, c, v) in nz {
            let _ = writeln!(out, "{} {} {}", r + 1, c + 1, v);
        }
        out
    }

    pub fn rank(&self, field: Field) -> usize {
        if self.rows == 0 || self.cols == 0 || self.entries.is_empty() {
            return 0;
        }
        match field {
            Field::Rationals => {
                let dense = self.dense();
                bareiss_i128(&dense).unwrap_or_else(|| bareiss_big(&dense))
            }
            Field::Prime(p) => rank_mod_p(&self.dense(), p),
        }
    }
}

fn bareiss_i128(m: &[Vec<i64>]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let rows = a.len();
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let pv = a[rank][col];
        for r in rank + 1..rows {
            let f = a[r][col];
            for c in col..cols {
                let t = a[r][c].checked_mul(pv)?;
                let u = a[rank][c].checked_mul(f)?;
                a[r][c] = t.checked_sub(u)? / prev;
            }
        }
        prev = pv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let rows = a.len();
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let pv = a[rank][col].clone();
        for r in rank + 1..rows {
            let f = a[r][col].clone();
            for c in col..cols {
                let v = (&a[r][c] * &pv - &a[rank][c] * &f) / &prev;
                a[r][c] = v;
            }
        }
        prev = pv;
        rank += 1;
    }
    rank
}

fn rank_mod_p(m: &[Vec<i64>], p: u64) -> usize {
    let pi = p as i128;
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&v| (v as i128).rem_euclid(pi) as u64).collect())
        .collect();
    let rows = a.len();
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][col], p - 2, p);
        for c in col..cols {
            a[rank][c] = mul_mod(a[rank][c], inv, p);
        }
        for r in 0..rows {
            if r == rank || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for c in col..cols {
                let sub = mul_mod(f, a[rank][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}
