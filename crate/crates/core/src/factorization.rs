//! Factorization spaces and the reduced nerve.
//!
//! A factorization of `p` is a sequence `(f_0, ..., f_{n+1})` of non-identity
//! morphisms with `f_0 ∘ ... ∘ f_{n+1} = p`; it is an n-cell of the
//! factorization space and its face `d_i` composes `f_i ∘ f_{i+1}`.
//!
//! The reduced nerve has the composable k-tuples of non-identity morphisms as
//! k-cells (objects in dimension 0). Faces drop the first entry, compose
//! adjacent entries, or drop the last entry.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::category::{FiniteGradedCategory, MorId, ObjId};
use crate::homology::{SemiSimplicialBuilder, SemiSimplicialSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("morphism `{0}` is an identity")]
    IdentityMorphism(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationSpace {
    pub morphism: MorId,
    pub set: SemiSimplicialSet,
    /// `cells[n][c]` is the factor sequence of the n-cell `c`.
    pub cells: Vec<Vec<Vec<MorId>>>,
}

type Sequences = Rc<Vec<Vec<MorId>>>;

/// Shared index of two-step factorizations with a memo of all factor
/// sequences per morphism.
pub struct FactorizationIndex<'a> {
    cat: &'a FiniteGradedCategory,
    /// `two[p]` lists `(outer, inner)` with `outer ∘ inner = p`.
    two: Vec<Vec<(MorId, MorId)>>,
    memo: RefCell<HashMap<MorId, Sequences>>,
}

impl<'a> FactorizationIndex<'a> {
    pub fn new(cat: &'a FiniteGradedCategory) -> Self {
        let mut two = vec![Vec::new(); cat.num_morphisms()];
        for inner in cat.morphism_ids() {
            if cat.is_identity(inner) {
                continue;
            }
            for o in cat.objects() {
                for &outer in cat.hom(cat.target(inner), o) {
                    if cat.is_identity(outer) {
                        continue;
                    }
                    if let Some(p) = cat.composite(inner, outer) {
                        two[p.0].push((outer, inner));
                    }
                }
            }
        }
        FactorizationIndex {
            cat,
            two,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn category(&self) -> &FiniteGradedCategory {
        self.cat
    }

    pub fn two_step(&self, p: MorId) -> &[(MorId, MorId)] {
        &self.two[p.0]
    }

    pub fn is_decomposable(&self, p: MorId) -> bool {
        !self.two[p.0].is_empty()
    }

    /// All factor sequences of `p` including the trivial one `[p]`.
    pub fn sequences(&self, p: MorId) -> Sequences {
        if let Some(s) = self.memo.borrow().get(&p) {
            return s.clone();
        }
        let mut out = vec![vec![p]];
        for &(outer, inner) in &self.two[p.0] {
            for s in self.sequences(inner).iter() {
                let mut v = Vec::with_capacity(s.len() + 1);
                v.push(outer);
                v.extend_from_slice(s);
                out.push(v);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let rc = Rc::new(out);
        self.memo.borrow_mut().insert(p, rc.clone());
        rc
    }

    pub fn space(&self, p: MorId) -> Result<FactorizationSpace, FactorizationError> {
        let cat = self.cat;
        if cat.is_identity(p) {
            return Err(FactorizationError::IdentityMorphism(cat.label(p).to_string()));
        }
        let seqs = self.sequences(p);
        let mut b = SemiSimplicialBuilder::<Vec<MorId>>::new();
        for s in seqs.iter().filter(|s| s.len() >= 2) {
            b.add_cell(s.len() - 2, s.clone());
        }
        for s in seqs.iter().filter(|s| s.len() >= 3) {
            let dim = s.len() - 2;
            let cell = b.lookup(dim, s).expect("registered");
            let faces = (0..=dim)
                .map(|i| {
                    let mut f = s[..i].to_vec();
                    let c = cat
                        .composite(s[i + 1], s[i])
                        .expect("factors of p compose within range");
                    f.push(c);
                    f.extend_from_slice(&s[i + 2..]);
                    b.lookup(dim - 1, &f).expect("face is a factorization of p")
                })
                .collect();
            b.set_faces(dim, cell, faces);
        }
        let (set, cells) = b.build().expect("well-formed factorization space");
        Ok(FactorizationSpace {
            morphism: p,
            set,
            cells,
        })
    }
}

pub fn factorization_space(
    cat: &FiniteGradedCategory,
    p: MorId,
) -> Result<FactorizationSpace, FactorizationError> {
    FactorizationIndex::new(cat).space(p)
}

/// A k-cell of the reduced nerve: the tuple in composition order together
/// with its endpoints and total length. 0-cells have an empty tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveCell {
    pub factors: Vec<MorId>,
    pub source: ObjId,
    pub target: ObjId,
    pub length: u32,
}

#[derive(Clone, Debug)]
pub struct ReducedNerve {
    pub set: SemiSimplicialSet,
    pub cells: Vec<Vec<NerveCell>>,
}

/// Tuples whose composite falls outside a truncation bound are omitted.
pub fn reduced_nerve(cat: &FiniteGradedCategory) -> ReducedNerve {
    let non_ids: Vec<MorId> = cat.morphism_ids().filter(|&m| !cat.is_identity(m)).collect();
    let mut levels: Vec<Vec<(NerveCell, MorId)>> = Vec::new();
    levels.push(
        cat.objects()
            .map(|o| {
                (
                    NerveCell {
                        factors: Vec::new(),
                        source: o,
                        target: o,
                        length: 0,
                    },
                    cat.identity(o),
                )
            })
            .collect(),
    );
    loop {
        let prev = levels.last().unwrap();
        let mut next = Vec::new();
        for (cell, comp) in prev {
            for &g in &non_ids {
                let comp_new = if cell.factors.is_empty() {
                    if cat.target(g) != cell.source {
                        continue;
                    }
                    Some(g)
                } else {
                    if cat.target(g) != cell.source {
                        continue;
                    }
                    cat.composite(g, *comp)
                };
                let Some(c) = comp_new else { continue };
                let mut factors = cell.factors.clone();
                factors.push(g);
                next.push((
                    NerveCell {
                        factors,
                        source: cat.source(c),
                        target: cat.target(c),
                        length: cat.length(c),
                    },
                    c,
                ));
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }

    let mut b = SemiSimplicialBuilder::<Vec<MorId>>::new();
    for (k, level) in levels.iter().enumerate() {
        for (cell, comp) in level {
            let key = if k == 0 { vec![*comp] } else { cell.factors.clone() };
            b.add_cell(k, key);
        }
    }
    for k in 1..levels.len() {
        for (idx, (cell, _)) in levels[k].iter().enumerate() {
            let f = &cell.factors;
            let key_of = |t: Vec<MorId>, obj: ObjId| if t.is_empty() { vec![cat.identity(obj)] } else { t };
            let mut faces = Vec::with_capacity(k + 1);
            faces.push(
                b.lookup(k - 1, &key_of(f[1..].to_vec(), cat.source(f[0])))
                    .unwrap(),
            );
            for i in 0..k - 1 {
                let mut t = f[..i].to_vec();
                t.push(
                    cat.composite(f[i + 1], f[i])
                        .expect("sub-composite of a defined composite"),
                );
                t.extend_from_slice(&f[i + 2..]);
                faces.push(b.lookup(k - 1, &t).unwrap());
            }
            faces.push(
                b.lookup(k - 1, &key_of(f[..k - 1].to_vec(), cat.target(f[k - 1])))
                    .unwrap(),
            );
            b.set_faces(k, idx, faces);
        }
    }
    let (set, _) = b.build().expect("well-formed nerve");
    let cells = levels
        .into_iter()
        .map(|l| l.into_iter().map(|(c, _)| c).collect())
        .collect();
    ReducedNerve { set, cells }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellsBijection {
    pub holds: bool,
    /// `(k, nerve k-cells, sum over p of (k-2)-cells of the factorization spaces)`
    pub counts: Vec<(usize, usize, usize)>,
}

pub fn verify_cells_bijection(cat: &FiniteGradedCategory) -> CellsBijection {
    let nerve = reduced_nerve(cat);
    let index = FactorizationIndex::new(cat);
    let mut per_len: Vec<usize> = Vec::new();
    for p in cat.morphism_ids().filter(|&m| !cat.is_identity(m)) {
        for s in index.sequences(p).iter().filter(|s| s.len() >= 2) {
            if per_len.len() <= s.len() {
                per_len.resize(s.len() + 1, 0);
            }
            per_len[s.len()] += 1;
        }
    }
    let top = nerve.cells.len().max(per_len.len());
    let counts: Vec<(usize, usize, usize)> = (2..top)
        .map(|k| {
            (
                k,
                nerve.cells.get(k).map_or(0, Vec::len),
                per_len.get(k).copied().unwrap_or(0),
            )
        })
        .collect();
    CellsBijection {
        holds: counts.iter().all(|&(_, a, b)| a == b),
        counts,
    }
}
