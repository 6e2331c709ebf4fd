//! Finite graded categories with an explicit composition table.
//!
//! `compose(first, second)` is the composite `second ∘ first` and is only
//! meaningful when `target(first) == source(second)`. Categories built from
//! quivers may be truncated: composites longer than the bound are recorded as
//! out of range instead of being materialized.

mod ops;
mod quiver;
mod validate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ops::{opposite, product, skeletalize, truncate_to_length, Skeleton};
pub use quiver::{from_quiver, Arrow, QuiverPresentation};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub source: ObjId,
    pub target: ObjId,
    pub length: u32,
    pub label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composite {
    Defined(MorId),
    /// Composable, but the composite lies beyond the truncation bound.
    OutOfRange,
    /// Composable, yet the table has no entry (only in invalid input).
    Missing,
    NotComposable,
}

impl Composite {
    pub fn defined(self) -> Option<MorId> {
        match self {
            Composite::Defined(m) => Some(m),
            _ => None,
        }
    }
}

const NONE: u32 = u32::MAX;
const OUT: u32 = u32::MAX - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("duplicate object label `{0}`")]
    DuplicateObjectLabel(String),
    #[error("duplicate morphism label `{0}`")]
    DuplicateMorphismLabel(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism or arrow `{0}`")]
    UnknownMorphism(String),
    #[error("composite given for non-composable pair ({first}, {second})")]
    NotComposable { first: String, second: String },
    #[error("relation {index}: paths do not share head and tail")]
    RelationEndpointMismatch { index: usize },
    #[error("relation {index}: a path is empty or not composable")]
    InvalidPath { index: usize },
    #[error("relation {index}: the two paths have different lengths")]
    InhomogeneousRelation { index: usize },
    #[error("relation {index}: a path is longer than max_length")]
    RelationTooLong { index: usize },
    #[error(
        "congruence is not cancellative: `{left}` and `{right}` become equal after composing with `{via}`"
    )]
    NonCancellative {
        left: String,
        right: String,
        via: String,
    },
    #[error("length-0 part is not indiscrete between `{a}` and `{b}` ({count} morphisms)")]
    NotIndiscretelyBased { a: String, b: String, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGradedCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    table: Vec<u32>,
    truncation: Option<u32>,
    hom: Vec<Vec<Vec<MorId>>>,
}

impl FiniteGradedCategory {
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn object_label(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn object_by_label(&self, label: &str) -> Option<ObjId> {
        self.objects.iter().position(|l| l == label).map(ObjId)
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m.0]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_by_label(&self, label: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.label == label).map(MorId)
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].source
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].target
    }

    pub fn length(&self, m: MorId) -> u32 {
        self.morphisms[m.0].length
    }

    pub fn label(&self, m: MorId) -> &str {
        &self.morphisms[m.0].label
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.source(m).0] == m
    }

    /// Morphisms from `a` to `b`, in id order.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a.0][b.0]
    }

    /// `Some(n)` when composites longer than `n` were dropped.
    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    /// `second ∘ first`.
    pub fn compose(&self, first: MorId, second: MorId) -> Composite {
        if self.target(first) != self.source(second) {
            return Composite::NotComposable;
        }
        match self.table[first.0 * self.morphisms.len() + second.0] {
            NONE => Composite::Missing,
            OUT => Composite::OutOfRange,
            k => Composite::Defined(MorId(k as usize)),
        }
    }

    pub fn composite(&self, first: MorId, second: MorId) -> Option<MorId> {
        self.compose(first, second).defined()
    }

    /// Composite of factors given in composition order `f_0 ∘ ... ∘ f_k`.
    pub fn compose_chain(&self, factors: &[MorId]) -> Option<MorId> {
        let (&last, rest) = factors.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &f| self.composite(acc, f))
    }

    /// Non-identity morphisms ordered by (length, id).
    pub fn non_identities_by_length(&self) -> Vec<MorId> {
        let mut v: Vec<MorId> = self.morphism_ids().filter(|&m| !self.is_identity(m)).collect();
        v.sort_by_key(|&m| (self.length(m), m));
        v
    }

    pub fn max_length(&self) -> u32 {
        self.morphisms.iter().map(|m| m.length).max().unwrap_or(0)
    }
}

impl fmt::Display for FiniteGradedCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category with {} objects and {} morphisms",
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

/// Incremental construction. Every object receives an identity named
/// `id_<label>`; identity composites are filled in at `build` unless set
/// explicitly.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    explicit: HashMap<(usize, usize), u32>,
    truncation: Option<u32>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> ObjId {
        let label = label.into();
        let o = ObjId(self.objects.len());
        let id = MorId(self.morphisms.len());
        self.morphisms.push(Morphism {
            source: o,
            target: o,
            length: 0,
            label: format!("id_{label}"),
        });
        self.objects.push(label);
        self.identities.push(id);
        o
    }

    /// Renames the identity of `o`.
    pub fn set_identity_label(&mut self, o: ObjId, label: impl Into<String>) -> MorId {
        let id = self.identities[o.0];
        self.morphisms[id.0].label = label.into();
        id
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.0]
    }

    pub fn add_morphism(
        &mut self,
        label: impl Into<String>,
        source: ObjId,
        target: ObjId,
        length: u32,
    ) -> MorId {
        let id = MorId(self.morphisms.len());
        self.morphisms.push(Morphism {
            source,
            target,
            length,
            label: label.into(),
        });
        id
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn set_composite(&mut self, first: MorId, second: MorId, result: MorId) {
        self.explicit.insert((first.0, second.0), result.0 as u32);
    }

    pub fn set_out_of_range(&mut self, first: MorId, second: MorId) {
        self.explicit.insert((first.0, second.0), OUT);
    }

    pub fn truncate_at(&mut self, bound: Option<u32>) {
        self.truncation = bound;
    }

    pub fn build(self) -> Result<FiniteGradedCategory, CategoryError> {
        let mut seen = HashMap::new();
        for l in &self.objects {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(CategoryError::DuplicateObjectLabel(l.clone()));
            }
        }
        let mut seen = HashMap::new();
        for m in &self.morphisms {
            if seen.insert(m.label.as_str(), ()).is_some() {
                return Err(CategoryError::DuplicateMorphismLabel(m.label.clone()));
            }
            for o in [m.source, m.target] {
                if o.0 >= self.objects.len() {
                    return Err(CategoryError::UnknownObject(o.0.to_string()));
                }
            }
        }
        let n = self.morphisms.len();
        let mut table = vec![NONE; n * n];
        for (f, m) in self.morphisms.iter().enumerate() {
            table[self.identities[m.source.0].0 * n + f] = f as u32;
            table[f * n + self.identities[m.target.0].0] = f as u32;
        }
        for (&(f, g), &k) in &self.explicit {
            let bad = || CategoryError::NotComposable {
                first: self.morphisms.get(f).map_or(f.to_string(), |m| m.label.clone()),
                second: self.morphisms.get(g).map_or(g.to_string(), |m| m.label.clone()),
            };
            if f >= n || g >= n || (k != OUT && k as usize >= n) {
                return Err(bad());
            }
            if self.morphisms[f].target != self.morphisms[g].source {
                return Err(bad());
            }
            table[f * n + g] = k;
        }
        let no = self.objects.len();
        let mut hom = vec![vec![Vec::new(); no]; no];
        for (i, m) in self.morphisms.iter().enumerate() {
            hom[m.source.0][m.target.0].push(MorId(i));
        }
        Ok(FiniteGradedCategory {
            objects: self.objects,
            morphisms: self.morphisms,
            identities: self.identities,
            table,
            truncation: self.truncation,
            hom,
        })
    }
}

/// The chain a -> b -> c with composite, all arrows of length 1.
pub fn a2_chain() -> FiniteGradedCategory {
    let mut b = CategoryBuilder::new();
    let a = b.add_object("a");
    let bb = b.add_object("b");
    let c = b.add_object("c");
    let f = b.add_morphism("f", a, bb, 1);
    let g = b.add_morphism("g", bb, c, 1);
    let gf = b.add_morphism("g∘f", a, c, 2);
    b.set_composite(f, g, gf);
    b.build().expect("static category")
}

/// One object, identity only.
pub fn point_category() -> FiniteGradedCategory {
    let mut b = CategoryBuilder::new();
    b.add_object("*");
    b.build().expect("static category")
}
