//! Semi-simplicial sets and their reduced cohomology over a field.
//!
//! Cells are dense indices per dimension; each n-cell (n >= 1) carries its
//! n+1 faces as indices into dimension n-1. The cochain complex is augmented
//! by a single generator in degree -1, so the empty set has H^-1 = k.

mod linalg;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use linalg::SparseMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[default]
    Rationals,
    Prime(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (limit 2^32)")]
    TooLarge(u64),
}

impl Field {
    /// `0` selects the rationals, anything else must be a prime below 2^32.
    pub fn from_characteristic(p: u64) -> Result<Field, FieldError> {
        if p == 0 {
            return Ok(Field::Rationals);
        }
        if p > u32::MAX as u64 {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A semi-simplicial set with dense cell indices.
///
/// `faces[n][c]` lists the faces d_0..d_n of the n-cell `c` for n >= 1;
/// zero-cells carry an empty face list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemiSimplicialSet {
    faces: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("cell {cell} in dimension {dim} has {found} faces, expected {expected}")]
    FaceCount {
        dim: usize,
        cell: usize,
        found: usize,
        expected: usize,
    },
    #[error("cell {cell} in dimension {dim} names face {face} which does not exist")]
    DanglingFace { dim: usize, cell: usize, face: usize },
}

impl SemiSimplicialSet {
    pub fn empty() -> Self {
        SemiSimplicialSet { faces: Vec::new() }
    }

    /// Builds from raw face lists, checking only shape (counts and ranges).
    pub fn from_faces(mut faces: Vec<Vec<Vec<usize>>>) -> Result<Self, ShapeError> {
        while faces.last().is_some_and(|d| d.is_empty()) {
            faces.pop();
        }
        for (dim, cells) in faces.iter().enumerate() {
            let expected = if dim == 0 { 0 } else { dim + 1 };
            for (cell, fs) in cells.iter().enumerate() {
                if fs.len() != expected {
                    return Err(ShapeError::FaceCount {
                        dim,
                        cell,
                        found: fs.len(),
                        expected,
                    });
                }
                if dim > 0 {
                    if let Some(&face) = fs.iter().find(|&&f| f >= faces[dim - 1].len()) {
                        return Err(ShapeError::DanglingFace { dim, cell, face });
                    }
                }
            }
        }
        Ok(SemiSimplicialSet { faces })
    }

    /// -1 for the empty set.
    pub fn top_dim(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.faces.get(dim).map_or(0, Vec::len)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn faces(&self, dim: usize, cell: usize) -> &[usize] {
        &self.faces[dim][cell]
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Signed boundary d_n : C_n -> C_{n-1}, rows indexed by n-cells.
    /// For n = 0 this is the augmentation onto the single (-1)-cell.
    pub fn boundary_matrix(&self, n: usize) -> SparseMatrix {
        if n == 0 {
            let mut m = SparseMatrix::new(self.num_cells(0), 1);
            for c in 0..self.num_cells(0) {
                m.push(c, 0, 1);
            }
            return m;
        }
        let mut m = SparseMatrix::new(self.num_cells(n), self.num_cells(n - 1));
        for (c, fs) in self.faces[n].iter().enumerate() {
            for (i, &f) in fs.iter().enumerate() {
                m.push(c, f, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        m
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n % 2 == 0 {
                    c.len() as i64
                } else {
                    -(c.len() as i64)
                }
            })
            .sum()
    }
}

/// Incremental construction keyed by arbitrary hashable cell keys.
#[derive(Debug)]
pub struct SemiSimplicialBuilder<K> {
    index: Vec<HashMap<K, usize>>,
    keys: Vec<Vec<K>>,
    faces: Vec<Vec<Vec<usize>>>,
}

impl<K: Clone + Eq + Hash> Default for SemiSimplicialBuilder<K> {
    fn default() -> Self {
        SemiSimplicialBuilder {
            index: Vec::new(),
            keys: Vec::new(),
            faces: Vec::new(),
        }
    }
}

impl<K: Clone + Eq + Hash> SemiSimplicialBuilder<K> {
    pub fn new() -> Self {
        Self::default()
    }

    fn ensure_dim(&mut self, dim: usize) {
        while self.index.len() <= dim {
            self.index.push(HashMap::new());
            self.keys.push(Vec::new());
            self.faces.push(Vec::new());
        }
    }

    /// Registers a cell; returns its index. Re-adding a key is a no-op.
    pub fn add_cell(&mut self, dim: usize, key: K) -> usize {
        self.ensure_dim(dim);
        if let Some(&i) = self.index[dim].get(&key) {
            return i;
        }
        let i = self.keys[dim].len();
        self.index[dim].insert(key.clone(), i);
        self.keys[dim].push(key);
        self.faces[dim].push(Vec::new());
        i
    }

    pub fn lookup(&self, dim: usize, key: &K) -> Option<usize> {
        self.index.get(dim)?.get(key).copied()
    }

    pub fn set_faces(&mut self, dim: usize, cell: usize, faces: Vec<usize>) {
        self.faces[dim][cell] = faces;
    }

    pub fn keys(&self, dim: usize) -> &[K] {
        self.keys.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn build(self) -> Result<(SemiSimplicialSet, Vec<Vec<K>>), ShapeError> {
        let set = SemiSimplicialSet::from_faces(self.faces)?;
        let mut keys = self.keys;
        keys.truncate(set.faces.len());
        Ok((set, keys))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    /// Nonzero reduced Betti numbers by degree.
    pub reduced_betti: BTreeMap<i64, usize>,
    pub top_dim: i64,
}

impl BettiProfile {
    pub fn get(&self, j: i64) -> usize {
        self.reduced_betti.get(&j).copied().unwrap_or(0)
    }

    /// True when all reduced cohomology vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.reduced_betti.is_empty()
    }

    /// Degrees other than `j` carrying nonzero cohomology.
    pub fn off_degree(&self, j: i64) -> Vec<(i64, usize)> {
        self.reduced_betti
            .iter()
            .filter(|(&d, _)| d != j)
            .map(|(&d, &b)| (d, b))
            .collect()
    }
}

impl fmt::Display for BettiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, b)) in self.reduced_betti.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}: {b}")?;
        }
        write!(f, "}}")
    }
}

pub fn reduced_cohomology(x: &SemiSimplicialSet, k: Field) -> BettiProfile {
    let top = x.top_dim();
    // ranks[n + 1] = rank of d_n : C_n -> C_{n-1}, n = -1..=top+1
    let mut ranks = vec![0usize; (top + 3) as usize];
    for n in 0..=top {
        ranks[(n + 1) as usize] = x.boundary_matrix(n as usize).rank(k);
    }
    let mut reduced_betti = BTreeMap::new();
    for j in -1..=top {
        let cells = if j == -1 { 1 } else { x.num_cells(j as usize) };
        let b = cells - ranks[(j + 1) as usize] - ranks[(j + 2) as usize];
        if b != 0 {
            reduced_betti.insert(j, b);
        }
    }
    BettiProfile {
        reduced_betti,
        top_dim: top,
    }
}

pub fn is_bouquet(x: &SemiSimplicialSet, k: Field) -> bool {
    let p = reduced_cohomology(x, k);
    p.reduced_betti.keys().all(|&j| j >= p.top_dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceIdentityViolation {
    pub dim: usize,
    pub cell: usize,
    pub i: usize,
    pub j: usize,
}

/// Every (cell, i, j) with i < j where d_i d_j != d_{j-1} d_i.
pub fn check_semisimplicial(x: &SemiSimplicialSet) -> Vec<FaceIdentityViolation> {
    let mut out = Vec::new();
    for dim in 2..x.faces.len() {
        for (cell, fs) in x.faces[dim].iter().enumerate() {
            for j in 1..=dim {
                for i in 0..j {
                    let lhs = x.faces[dim - 1][fs[j]][i];
                    let rhs = x.faces[dim - 1][fs[i]][j - 1];
                    if lhs != rhs {
                        out.push(FaceIdentityViolation { dim, cell, i, j });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex_boundary_triangle() -> SemiSimplicialSet {
        // vertices 0,1,2; edges 01, 02, 12 with d_0 dropping the first vertex
        SemiSimplicialSet::from_faces(vec![
            vec![vec![], vec![], vec![]],
            vec![vec![1, 0], vec![2, 0], vec![2, 1]],
        ])
        .unwrap()
    }

    #[test]
    fn empty_set_convention() {
        let p = reduced_cohomology(&SemiSimplicialSet::empty(), Field::Rationals);
        assert_eq!(p.reduced_betti, BTreeMap::from([(-1, 1)]));
        assert_eq!(p.top_dim, -1);
        assert!(is_bouquet(&SemiSimplicialSet::empty(), Field::Rationals));
    }

    #[test]
    fn points() {
        for n in 1..6 {
            let x = SemiSimplicialSet::from_faces(vec![vec![vec![]; n]]).unwrap();
            let p = reduced_cohomology(&x, Field::Rationals);
            let expected: BTreeMap<i64, usize> = if n == 1 {
                BTreeMap::new()
            } else {
                BTreeMap::from([(0, n - 1)])
            };
            assert_eq!(p.reduced_betti, expected);
            assert!(is_bouquet(&x, Field::Rationals));
        }
    }

    #[test]
    fn triangle_boundary() {
        let x = simplex_boundary_triangle();
        assert!(check_semisimplicial(&x).is_empty());
        let p = reduced_cohomology(&x, Field::Rationals);
        assert_eq!(p.reduced_betti, BTreeMap::from([(1, 1)]));
        assert_eq!(reduced_cohomology(&x, Field::Prime(2)), p);
    }

    #[test]
    fn two_segments_not_bouquet() {
        let x = SemiSimplicialSet::from_faces(vec![vec![vec![]; 4], vec![vec![1, 0], vec![3, 2]]]).unwrap();
        let p = reduced_cohomology(&x, Field::Rationals);
        assert_eq!(p.reduced_betti, BTreeMap::from([(0, 1)]));
        assert_eq!(p.top_dim, 1);
        assert!(!is_bouquet(&x, Field::Rationals));
    }

    #[test]
    fn planted_defect() {
        // full 2-simplex with d_0/d_1 swapped on the 2-cell
        let good = SemiSimplicialSet::from_faces(vec![
            vec![vec![]; 3],
            vec![vec![1, 0], vec![2, 0], vec![2, 1]],
            vec![vec![2, 1, 0]],
        ])
        .unwrap();
        assert!(check_semisimplicial(&good).is_empty());
        assert!(reduced_cohomology(&good, Field::Rationals).is_acyclic());
        let bad = SemiSimplicialSet::from_faces(vec![
            vec![vec![]; 3],
            vec![vec![1, 0], vec![2, 0], vec![2, 1]],
            vec![vec![1, 2, 0]],
        ])
        .unwrap();
        assert!(!check_semisimplicial(&bad).is_empty());
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            SemiSimplicialSet::from_faces(vec![vec![vec![]], vec![vec![0]]]),
            Err(ShapeError::FaceCount { .. })
        ));
        assert!(matches!(
            SemiSimplicialSet::from_faces(vec![vec![vec![]], vec![vec![0, 3]]]),
            Err(ShapeError::DanglingFace { .. })
        ));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::from_characteristic(0), Ok(Field::Rationals));
        assert_eq!(Field::from_characteristic(7), Ok(Field::Prime(7)));
        assert_eq!(Field::from_characteristic(9), Err(FieldError::NotPrime(9)));
    }

    #[test]
    fn builder_dedups() {
        let mut b = SemiSimplicialBuilder::<&str>::new();
        let a = b.add_cell(0, "a");
        assert_eq!(b.add_cell(0, "a"), a);
        let c = b.add_cell(0, "c");
        let e = b.add_cell(1, "ac");
        b.set_faces(1, e, vec![c, a]);
        let (x, keys) = b.build().unwrap();
        assert_eq!(x.cell_counts(), vec![2, 1]);
        assert_eq!(keys[0], vec!["a", "c"]);
    }
}
