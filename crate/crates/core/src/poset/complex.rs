//! Abstract simplicial complexes stored by facets.
//!
//! A complex with no facets is the complex whose only face is the empty
//! face; its reduced cohomology is `k` in degree -1.

use std::collections::BTreeSet;

use serde::Serialize;

use super::PosetError;
use crate::homology::{reduced_cohomology, BettiProfile, Field, SemiSimplicialBuilder, SemiSimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimplicialComplex {
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Normalizes: sorts vertices, drops duplicates and non-maximal faces.
    pub fn from_facets(facets: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut fs: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        fs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        fs.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for f in fs {
            if !kept.iter().any(|g| is_subset(&f, g)) {
                kept.push(f);
            }
        }
        kept.sort();
        SimplicialComplex { facets: kept }
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.facets.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    pub fn dim(&self) -> i64 {
        self.facets.iter().map(|f| f.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        f.is_empty() || self.facets.iter().any(|g| is_subset(&f, g))
    }

    /// Every face including the empty one, ordered by size then vertices.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for f in &self.facets {
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                all.insert((0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect());
            }
        }
        let mut v: Vec<Vec<usize>> = all.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    pub fn link(&self, face: &[usize]) -> Result<SimplicialComplex, PosetError> {
        if !self.contains(face) {
            return Err(PosetError::FaceNotInComplex(face.to_vec()));
        }
        let f: BTreeSet<usize> = face.iter().copied().collect();
        Ok(SimplicialComplex::from_facets(
            self.facets
                .iter()
                .filter(|g| f.iter().all(|v| g.contains(v)))
                .map(|g| g.iter().copied().filter(|v| !f.contains(v)).collect::<Vec<_>>()),
        ))
    }

    /// Orders each face by vertex index; `d_i` drops the i-th vertex.
    pub fn to_semisimplicial(&self) -> SemiSimplicialSet {
        let faces = self.faces();
        let mut b = SemiSimplicialBuilder::<Vec<usize>>::new();
        for f in faces.iter().filter(|f| !f.is_empty()) {
            b.add_cell(f.len() - 1, f.clone());
        }
        for f in faces.iter().filter(|f| f.len() >= 2) {
            let d = f.len() - 1;
            let cell = b.lookup(d, f).unwrap();
            let fs = (0..f.len())
                .map(|i| {
                    let mut g = f.clone();
                    g.remove(i);
                    b.lookup(d - 1, &g).unwrap()
                })
                .collect();
            b.set_faces(d, cell, fs);
        }
        b.build().expect("faces of a simplicial complex").0
    }

    pub fn betti(&self, k: Field) -> BettiProfile {
        reduced_cohomology(&self.to_semisimplicial(), k)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmWitness {
    pub face: Vec<usize>,
    pub degree: i64,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmReport {
    pub cohen_macaulay: bool,
    pub witness: Option<CmWitness>,
}

/// Checks that every link, including the link of the empty face, has reduced
/// cohomology only in its top dimension.
pub fn is_cohen_macaulay(k_complex: &SimplicialComplex, k: Field) -> CmReport {
    for face in k_complex.faces() {
        let link = k_complex.link(&face).expect("face of the complex");
        let prof = link.betti(k);
        if let Some((&degree, &dimension)) = prof.reduced_betti.iter().find(|(&j, _)| j < link.dim()) {
            return CmReport {
                cohen_macaulay: false,
                witness: Some(CmWitness {
                    face,
                    degree,
                    dimension,
                }),
            };
        }
    }
    CmReport {
        cohen_macaulay: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let k = SimplicialComplex::from_facets(vec![vec![2, 1], vec![1], vec![1, 2], vec![3]]);
        assert_eq!(k.facets(), &[vec![1, 2], vec![3]]);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.faces().len(), 5);
    }

    #[test]
    fn links() {
        let tri = SimplicialComplex::from_facets(vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(tri.link(&[]).unwrap(), tri);
        assert_eq!(tri.link(&[0]).unwrap().facets(), &[vec![1], vec![2]]);
        let simplex = SimplicialComplex::from_facets(vec![vec![0, 1, 2]]);
        assert_eq!(simplex.link(&[0, 1]).unwrap().facets(), &[vec![2]]);
        assert!(matches!(
            tri.link(&[0, 1, 2]),
            Err(PosetError::FaceNotInComplex(_))
        ));
    }

    #[test]
    fn cm_examples() {
        let empty = SimplicialComplex::from_facets(Vec::<Vec<usize>>::new());
        assert_eq!(empty.dim(), -1);
        assert!(is_cohen_macaulay(&empty, Field::Rationals).cohen_macaulay);
        let segments = SimplicialComplex::from_facets(vec![vec![0, 1], vec![2, 3]]);
        let r = is_cohen_macaulay(&segments, Field::Rationals);
        assert!(!r.cohen_macaulay);
        assert_eq!(r.witness.unwrap().face, Vec::<usize>::new());
        let square = SimplicialComplex::from_facets(vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        assert!(is_cohen_macaulay(&square, Field::Rationals).cohen_macaulay);
        assert_eq!(square.betti(Field::Rationals).reduced_betti.get(&1), Some(&1));
        // a triangle with a dangling edge: pure fails at the link of the free vertex
        let dangling = SimplicialComplex::from_facets(vec![vec![0, 1, 2], vec![2, 3]]);
        assert!(!is_cohen_macaulay(&dangling, Field::Rationals).cohen_macaulay);
    }

    #[test]
    fn projective_plane_depends_on_field() {
        // 6-vertex triangulation of RP^2
        let rp2 = SimplicialComplex::from_facets(vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![2, 4, 5],
            vec![1, 3, 5],
        ]);
        assert!(rp2.betti(Field::Rationals).is_acyclic());
        assert_eq!(
            rp2.betti(Field::Prime(2)).reduced_betti,
            std::collections::BTreeMap::from([(1, 1), (2, 1)])
        );
        assert!(is_cohen_macaulay(&rp2, Field::Rationals).cohen_macaulay);
        assert!(!is_cohen_macaulay(&rp2, Field::Prime(2)).cohen_macaulay);
    }
}
