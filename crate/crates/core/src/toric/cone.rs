//! Exact linear feasibility by Gaussian substitution of equalities followed
//! by Fourier–Motzkin elimination over the rationals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

type Row = (Vec<Q>, Q);

/// Constraints `a·x = b` and `a·x ≤ b` on `n` real variables.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    n: usize,
    eqs: Vec<Row>,
    les: Vec<Row>,
}

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

impl LinearSystem {
    pub fn new(n: usize) -> Self {
        LinearSystem {
            n,
            ..Default::default()
        }
    }

    pub fn eq(&mut self, a: Vec<Q>, b: Q) {
        assert_eq!(a.len(), self.n);
        self.eqs.push((a, b));
    }

    pub fn le(&mut self, a: Vec<Q>, b: Q) {
        assert_eq!(a.len(), self.n);
        self.les.push((a, b));
    }

    /// `x_j ≥ 0`.
    pub fn nonneg(&mut self, j: usize) {
        let mut a = vec![Q::zero(); self.n];
        a[j] = -Q::one();
        self.les.push((a, Q::zero()));
    }

    pub fn feasible(&self) -> bool {
        self.eliminate(None).is_some()
    }

    /// Range of `x_j` over the feasible set as (lower, upper), `None` for an
    /// unbounded side; `None` overall when infeasible.
    pub fn bounds(&self, j: usize) -> Option<(Option<Q>, Option<Q>)> {
        let rows = self.eliminate(Some(j))?;
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for (a, b) in rows {
            let c = &a[j];
            let v = &b / c;
            if c.is_positive() {
                if hi.as_ref().is_none_or(|h| v < *h) {
                    hi = Some(v);
                }
            } else if lo.as_ref().is_none_or(|l| v > *l) {
                lo = Some(v);
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return None;
            }
        }
        Some((lo, hi))
    }

    /// Eliminates every variable except `keep`; returns the remaining
    /// inequalities (all in `keep` alone) or `None` if infeasible.
    fn eliminate(&self, keep: Option<usize>) -> Option<Vec<Row>> {
        let mut eqs = self.eqs.clone();
        let mut les = self.les.clone();
        // substitute equalities, pivoting away from `keep` when possible
        while let Some((a, b)) = eqs.pop() {
            let pivot = (0..self.n)
                .filter(|&k| !a[k].is_zero())
                .min_by_key(|&k| Some(k) == keep);
            let Some(k) = pivot else {
                if b.is_zero() {
                    continue;
                }
                return None;
            };
            if Some(k) == keep {
                // x_keep fixed
                les.push((a.clone(), b.clone()));
                les.push((a.iter().map(|v| -v).collect(), -b));
                continue;
            }
            let substitute = |row: &mut Row| {
                if row.0[k].is_zero() {
                    return;
                }
                let f = &row.0[k] / &a[k];
                for i in 0..a.len() {
                    let d = &f * &a[i];
                    row.0[i] -= d;
                }
                row.1 -= &f * &b;
            };
            eqs.iter_mut().for_each(substitute);
            les.iter_mut().for_each(substitute);
        }
        let mut rows = normalize_all(les)?;
        for k in 0..self.n {
            if Some(k) == keep {
                continue;
            }
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
            for r in rows {
                if r.0[k].is_positive() {
                    pos.push(r);
                } else if r.0[k].is_negative() {
                    neg.push(r);
                } else {
                    rest.push(r);
                }
            }
            for p in &pos {
                for m in &neg {
                    let (cp, cm) = (p.0[k].clone(), -m.0[k].clone());
                    let a = p.0.iter().zip(&m.0).map(|(x, y)| x * &cm + y * &cp).collect();
                    rest.push((a, &p.1 * &cm + &m.1 * &cp));
                }
            }
            rows = normalize_all(rest)?;
        }
        Some(rows.into_iter().collect())
    }
}

/// Scales rows so the first nonzero coefficient has absolute value one,
/// drops trivial rows and duplicates; `None` on a contradiction `0 ≤ b < 0`.
fn normalize_all(rows: Vec<Row>) -> Option<BTreeSet<Row>> {
    let mut out = BTreeSet::new();
    for (a, b) in rows {
        match a.iter().find(|v| !v.is_zero()) {
            None => {
                if b.is_negative() {
                    return None;
                }
            }
            Some(lead) => {
                let s = lead.abs();
                out.insert((a.iter().map(|v| v / &s).collect(), b / s));
            }
        }
    }
    Some(out)
}

/// Whether the only nonnegative `u` with `Σ u_i v_i = 0` is zero.
pub fn is_pointed_cone(vectors: &[Vec<i64>]) -> bool {
    let n = vectors.len();
    if n == 0 {
        return true;
    }
    let dim = vectors[0].len();
    let mut sys = LinearSystem::new(n);
    for j in 0..n {
        sys.nonneg(j);
    }
    for c in 0..dim {
        sys.eq(vectors.iter().map(|v| q(v[c])).collect(), Q::zero());
    }
    sys.eq(vec![Q::one(); n], Q::one());
    !sys.feasible()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointedness() {
        assert!(is_pointed_cone(&[
            vec![1, 0],
            vec![-1, 1],
            vec![1, 0],
            vec![0, 1]
        ]));
        assert!(!is_pointed_cone(&[vec![1], vec![-1]]));
        assert!(is_pointed_cone(&[vec![1], vec![1], vec![1]]));
        assert!(!is_pointed_cone(&[vec![1, 0], vec![0, 1], vec![-1, -1]]));
        assert!(!is_pointed_cone(&[vec![]]));
        assert!(is_pointed_cone(&[]));
    }

    #[test]
    fn bounds_of_a_simplex() {
        // x + 2y = 4, x, y ≥ 0
        let mut s = LinearSystem::new(2);
        s.nonneg(0);
        s.nonneg(1);
        s.eq(vec![q(1), q(2)], q(4));
        assert_eq!(s.bounds(0), Some((Some(q(0)), Some(q(4)))));
        assert_eq!(s.bounds(1), Some((Some(q(0)), Some(q(2)))));
        s.le(vec![q(1), q(0)], q(-1));
        assert!(!s.feasible());
    }

    #[test]
    fn unbounded_side() {
        let mut s = LinearSystem::new(2);
        s.nonneg(0);
        s.nonneg(1);
        s.eq(vec![q(1), q(-1)], q(1));
        assert_eq!(s.bounds(0), Some((Some(q(1)), None)));
    }
}
