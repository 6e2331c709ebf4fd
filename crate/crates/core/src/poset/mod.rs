//! Finite posets, order complexes, Cohen–Macaulayness, and the passage from
//! a graded poset to its category (one morphism per related pair).

mod complex;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

pub use complex::{is_cohen_macaulay, CmReport, CmWitness, SimplicialComplex};

use crate::category::{CategoryBuilder, FiniteGradedCategory, MorId, ObjId};
use crate::factorization::factorization_space;
use crate::homology::{reduced_cohomology, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relations contain a cycle through `{0}` and `{1}`")]
    NotAPoset(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("poset is not graded: maximal chains of [{0}, {1}] differ in length")]
    NotGraded(String, String),
    #[error("`{0}` is not strictly below `{1}`")]
    NotStrictlyBelow(String, String),
    #[error("face {0:?} is not in the complex")]
    FaceNotInComplex(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    /// row r |= row s
    fn or_row(&mut self, r: usize, s: usize) {
        for w in 0..self.words {
            let v = self.bits[s * self.words + w];
            self.bits[r * self.words + w] |= v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: BitMatrix,
}

impl FinitePoset {
    /// Builds the reflexive-transitive closure of `relations` (pairs a ≤ b).
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut seen = HashMap::new();
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        let mut leq = BitMatrix::new(n);
        for i in 0..n {
            leq.set(i, i);
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(PosetError::UnknownElement(a.max(b).to_string()));
            }
            leq.set(a, b);
        }
        // Warshall: if i ≤ k then everything above k is above i
        for k in 0..n {
            for i in 0..n {
                if leq.get(i, k) {
                    leq.or_row(i, k);
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq.get(a, b) && leq.get(b, a) {
                    return Err(PosetError::NotAPoset(labels[a].clone(), labels[b].clone()));
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn from_labeled(elements: &[&str], relations: &[(&str, &str)]) -> Result<Self, PosetError> {
        let idx: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let rel = relations
            .iter()
            .map(|(a, b)| {
                let ia = idx
                    .get(a)
                    .ok_or_else(|| PosetError::UnknownElement(a.to_string()))?;
                let ib = idx
                    .get(b)
                    .ok_or_else(|| PosetError::UnknownElement(b.to_string()))?;
                Ok((*ia, *ib))
            })
            .collect::<Result<Vec<_>, PosetError>>()?;
        Self::from_relations(elements.iter().map(|s| s.to_string()).collect(), &rel)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq.get(a, b)
    }

    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.len()).any(|c| self.lt(a, c) && self.lt(c, b))
    }

    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.covers(a, b) {
                    v.push((a, b));
                }
            }
        }
        v
    }

    /// All pairs a ≤ b, lexicographically.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) {
                    v.push((a, b));
                }
            }
        }
        v
    }

    pub fn open_interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.lt(x, c) && self.lt(c, y))
            .collect()
    }

    /// Minimum and maximum length of maximal chains in [x, y], for x ≤ y.
    pub fn chain_length_range(&self, x: usize, y: usize) -> Option<(u32, u32)> {
        if !self.leq(x, y) {
            return None;
        }
        let mut order: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq(x, c) && self.leq(c, y))
            .collect();
        order.sort_by_key(|&c| (0..self.len()).filter(|&d| self.leq(d, c)).count());
        let mut range: HashMap<usize, (u32, u32)> = HashMap::new();
        range.insert(x, (0, 0));
        for &c in order.iter().filter(|&&c| c != x) {
            let mut lo = u32::MAX;
            let mut hi = 0;
            for &d in &order {
                if let Some(&(a, b)) = range.get(&d) {
                    if self.covers(d, c) {
                        lo = lo.min(a + 1);
                        hi = hi.max(b + 1);
                    }
                }
            }
            range.insert(c, (lo, hi));
        }
        range.get(&y).copied()
    }

    /// Common length of all maximal chains in [x, y], if they agree.
    pub fn rank_length(&self, x: usize, y: usize) -> Option<u32> {
        match self.chain_length_range(x, y)? {
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn is_graded(&self) -> bool {
        self.first_ungraded().is_none()
    }

    fn first_ungraded(&self) -> Option<(usize, usize)> {
        self.intervals()
            .into_iter()
            .find(|&(x, y)| self.rank_length(x, y).is_none())
    }

    /// The subposet on `elements` (in the given order).
    pub fn restrict(&self, elements: &[usize]) -> FinitePoset {
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        let mut rel = Vec::new();
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                if self.leq(a, b) {
                    rel.push((i, j));
                }
            }
        }
        FinitePoset::from_relations(labels, &rel).expect("restriction of a poset")
    }

    /// Disjoint union, labels suffixed when needed to stay unique.
    pub fn disjoint_union(parts: &[FinitePoset]) -> FinitePoset {
        let mut labels = Vec::new();
        let mut rel = Vec::new();
        let mut offset = 0;
        for (pi, p) in parts.iter().enumerate() {
            for l in &p.labels {
                labels.push(format!("{l}#{pi}"));
            }
            for (a, b) in p.intervals() {
                rel.push((a + offset, b + offset));
            }
            offset += p.len();
        }
        FinitePoset::from_relations(labels, &rel).expect("disjoint union of posets")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalSpec {
    Open(usize, usize),
    Whole,
}

/// Facets are the maximal chains of the chosen subposet. An empty open
/// interval gives the complex whose only face is empty.
pub fn order_complex(p: &FinitePoset, interval: IntervalSpec) -> SimplicialComplex {
    let elems: Vec<usize> = match interval {
        IntervalSpec::Open(x, y) => p.open_interval(x, y),
        IntervalSpec::Whole => (0..p.len()).collect(),
    };
    let inside = |c: usize| elems.contains(&c);
    let minimal: Vec<usize> = elems
        .iter()
        .copied()
        .filter(|&c| !elems.iter().any(|&d| p.lt(d, c)))
        .collect();
    let mut facets = Vec::new();
    let mut stack: Vec<Vec<usize>> = minimal.into_iter().map(|m| vec![m]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        let ups: Vec<usize> = (0..p.len()).filter(|&c| inside(c) && p.covers(top, c)).collect();
        if ups.is_empty() {
            facets.push(chain);
        } else {
            for u in ups {
                let mut c = chain.clone();
                c.push(u);
                stack.push(c);
            }
        }
    }
    SimplicialComplex::from_facets(facets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCmWitness {
    pub x: String,
    pub y: String,
    pub face: Vec<String>,
    pub degree: i64,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCmReport {
    pub locally_cohen_macaulay: bool,
    pub witness: Option<LocalCmWitness>,
}

/// Every open interval (x, y) with x < y must have a Cohen–Macaulay order
/// complex.
pub fn is_locally_cm(p: &FinitePoset, k: Field) -> LocalCmReport {
    for (x, y) in p.intervals() {
        if x == y {
            continue;
        }
        let r = is_cohen_macaulay(&order_complex(p, IntervalSpec::Open(x, y)), k);
        if let Some(w) = r.witness {
            return LocalCmReport {
                locally_cohen_macaulay: false,
                witness: Some(LocalCmWitness {
                    x: p.label(x).to_string(),
                    y: p.label(y).to_string(),
                    face: w.face.iter().map(|&v| p.label(v).to_string()).collect(),
                    degree: w.degree,
                    dimension: w.dimension,
                }),
            };
        }
    }
    LocalCmReport {
        locally_cohen_macaulay: true,
        witness: None,
    }
}

/// The category of a graded poset together with the morphism of each pair.
#[derive(Clone, Debug)]
pub struct PosetCategory {
    pub category: FiniteGradedCategory,
    morphism: HashMap<(usize, usize), MorId>,
}

impl PosetCategory {
    pub fn morphism(&self, a: usize, b: usize) -> Option<MorId> {
        self.morphism.get(&(a, b)).copied()
    }
}

/// Objects are the elements (same indices); the morphism `a≤b` has length
/// equal to the common length of maximal chains in [a, b].
pub fn poset_category(p: &FinitePoset) -> Result<PosetCategory, PosetError> {
    if let Some((x, y)) = p.first_ungraded() {
        return Err(PosetError::NotGraded(p.label(x).into(), p.label(y).into()));
    }
    let mut b = CategoryBuilder::new();
    for l in p.labels() {
        b.add_object(l.clone());
    }
    let mut morphism = HashMap::new();
    for (x, y) in p.intervals() {
        let label = format!("{}≤{}", p.label(x), p.label(y));
        let m = if x == y {
            b.set_identity_label(ObjId(x), label)
        } else {
            b.add_morphism(label, ObjId(x), ObjId(y), p.rank_length(x, y).unwrap())
        };
        morphism.insert((x, y), m);
    }
    for (x, y) in p.intervals() {
        for (y2, z) in p.intervals() {
            if y == y2 {
                b.set_composite(morphism[&(x, y)], morphism[&(y, z)], morphism[&(x, z)]);
            }
        }
    }
    Ok(PosetCategory {
        category: b.build().expect("poset category"),
        morphism,
    })
}

pub fn poset_to_category(p: &FinitePoset) -> Result<FiniteGradedCategory, PosetError> {
    poset_category(p).map(|pc| pc.category)
}

pub fn verify_interval_equals_factorization(
    p: &FinitePoset,
    x: usize,
    y: usize,
    k: Field,
) -> Result<bool, PosetError> {
    if !p.lt(x, y) {
        return Err(PosetError::NotStrictlyBelow(p.label(x).into(), p.label(y).into()));
    }
    let pc = poset_category(p)?;
    let space =
        factorization_space(&pc.category, pc.morphism(x, y).unwrap()).expect("x < y is not an identity");
    let a = order_complex(p, IntervalSpec::Open(x, y)).betti(k);
    let b = reduced_cohomology(&space.set, k);
    Ok(a.reduced_betti == b.reduced_betti)
}
