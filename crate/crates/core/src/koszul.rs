//! Graded Ext between simple modules, Koszulity, generation in degree one
//! and quadraticity checks.
//!
//! `Ext^i(S_w, S_v)` in internal degree `n` is the sum, over morphisms
//! `p: v -> w` of length `n`, of `H^{i-2}` of the factorization space of `p`.
//! The oracle computes the same groups from the reduced nerve directly, using
//! only the inner faces as differential.

use std::collections::{BTreeMap, HashMap};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::category::{FiniteGradedCategory, MorId, ObjId};
use crate::factorization::{reduced_nerve, FactorizationIndex, ReducedNerve};
use crate::homology::{reduced_cohomology, BettiProfile, Field, SparseMatrix};

pub const DEFAULT_WITNESS_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error("internal degree {n} exceeds the truncation bound {bound}")]
    BeyondTruncation { n: u32, bound: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtQuery {
    pub w: ObjId,
    pub v: ObjId,
    pub n: u32,
}

/// Cohomological degree `i` to dimension; zero entries omitted.
pub type ExtDims = BTreeMap<i64, usize>;

/// Up to which length a verdict has been established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckedUpTo {
    Complete,
    Degree(u32),
}

impl CheckedUpTo {
    pub fn of(cat: &FiniteGradedCategory) -> Self {
        match cat.truncation() {
            Some(b) => CheckedUpTo::Degree(b),
            None => CheckedUpTo::Complete,
        }
    }

    pub fn admits(self, n: u32) -> bool {
        match self {
            CheckedUpTo::Complete => true,
            CheckedUpTo::Degree(b) => n <= b,
        }
    }
}

impl Serialize for CheckedUpTo {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CheckedUpTo::Complete => s.serialize_str("complete"),
            CheckedUpTo::Degree(b) => s.serialize_u32(*b),
        }
    }
}

impl std::fmt::Display for CheckedUpTo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckedUpTo::Complete => write!(f, "complete"),
            CheckedUpTo::Degree(b) => write!(f, "up to degree {b}"),
        }
    }
}

fn check_query(cat: &FiniteGradedCategory, q: &ExtQuery) -> Result<(), KoszulError> {
    for o in [q.w, q.v] {
        if o.0 >= cat.num_objects() {
            return Err(KoszulError::UnknownObject(o.0));
        }
    }
    if let Some(bound) = cat.truncation() {
        if q.n > bound {
            return Err(KoszulError::BeyondTruncation { n: q.n, bound });
        }
    }
    Ok(())
}

fn add_shifted(out: &mut ExtDims, profile: &BettiProfile) {
    for (&j, &b) in &profile.reduced_betti {
        *out.entry(j + 2).or_insert(0) += b;
    }
}

pub fn ext_simples(cat: &FiniteGradedCategory, q: ExtQuery, k: Field) -> Result<ExtDims, KoszulError> {
    check_query(cat, &q)?;
    let mut out = ExtDims::new();
    if q.n == 0 {
        if q.w == q.v {
            out.insert(0, 1);
        }
        return Ok(out);
    }
    let index = FactorizationIndex::new(cat);
    for &p in cat.hom(q.v, q.w) {
        if cat.length(p) == q.n {
            let s = index.space(p).expect("positive length is not an identity");
            add_shifted(&mut out, &reduced_cohomology(&s.set, k));
        }
    }
    Ok(out)
}

/// Cohomology of the complex spanned by the nerve cells of one
/// (source, target, length) block, with inner faces as differential.
fn oracle_block(nerve: &ReducedNerve, block: &[Vec<usize>], k: Field) -> ExtDims {
    // position of each nerve cell inside its level of the block
    let mut pos: Vec<HashMap<usize, usize>> = Vec::with_capacity(block.len());
    for cells in block {
        pos.push(cells.iter().enumerate().map(|(i, &c)| (c, i)).collect());
    }
    let count = |r: usize| block.get(r).map_or(0, Vec::len);
    let rank_of = |r: usize| -> usize {
        // d_r : C_r -> C_{r-1}
        if r < 2 || count(r) == 0 || count(r - 1) == 0 {
            return 0;
        }
        let mut m = SparseMatrix::new(count(r), count(r - 1));
        for (row, &cell) in block[r].iter().enumerate() {
            let faces = nerve.set.faces(r, cell);
            for (i, &face) in faces.iter().enumerate().take(r).skip(1) {
                let col = pos[r - 1][&face];
                m.push(row, col, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        m.rank(k)
    };
    let mut out = ExtDims::new();
    let ranks: Vec<usize> = (0..=block.len()).map(rank_of).collect();
    for r in 0..block.len() {
        let d = count(r) - ranks[r] - ranks[r + 1];
        if d > 0 {
            out.insert(r as i64, d);
        }
    }
    out
}

/// Groups nerve cells by (source, target, length); inner faces stay inside a
/// group because they preserve the composite.
fn nerve_blocks(nerve: &ReducedNerve) -> BTreeMap<(usize, usize, u32), Vec<Vec<usize>>> {
    let mut blocks: BTreeMap<(usize, usize, u32), Vec<Vec<usize>>> = BTreeMap::new();
    for (r, level) in nerve.cells.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            let b = blocks.entry((c.source.0, c.target.0, c.length)).or_default();
            if b.len() <= r {
                b.resize(r + 1, Vec::new());
            }
            b[r].push(i);
        }
    }
    blocks
}

pub fn ext_oracle_resolution(
    cat: &FiniteGradedCategory,
    q: ExtQuery,
    k: Field,
) -> Result<ExtDims, KoszulError> {
    check_query(cat, &q)?;
    let nerve = reduced_nerve(cat);
    let blocks = nerve_blocks(&nerve);
    Ok(blocks
        .get(&(q.v.0, q.w.0, q.n))
        .map(|b| oracle_block(&nerve, b, k))
        .unwrap_or_default())
}

/// All nonzero `Ext^i(S_w, S_v)_{-n}` for `n` within the verified range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtTable {
    pub entries: BTreeMap<(ObjId, ObjId, u32, i64), usize>,
}

#[derive(Serialize)]
struct ExtEntry<'a> {
    w: &'a str,
    v: &'a str,
    n: u32,
    i: i64,
    dim: usize,
}

impl ExtTable {
    /// Swaps `w` and `v` in every entry.
    pub fn transposed(&self) -> ExtTable {
        ExtTable {
            entries: self
                .entries
                .iter()
                .map(|(&(w, v, n, i), &d)| ((v, w, n, i), d))
                .collect(),
        }
    }

    pub fn get(&self, w: ObjId, v: ObjId, n: u32, i: i64) -> usize {
        self.entries.get(&(w, v, n, i)).copied().unwrap_or(0)
    }

    pub fn to_json(&self, cat: &FiniteGradedCategory) -> serde_json::Value {
        let rows: Vec<ExtEntry> = self
            .entries
            .iter()
            .map(|(&(w, v, n, i), &dim)| ExtEntry {
                w: cat.object_label(w),
                v: cat.object_label(v),
                n,
                i,
                dim,
            })
            .collect();
        serde_json::to_value(rows).expect("plain data")
    }
}

fn in_range(cat: &FiniteGradedCategory, p: MorId) -> bool {
    CheckedUpTo::of(cat).admits(cat.length(p))
}

pub fn ext_table(cat: &FiniteGradedCategory, k: Field) -> ExtTable {
    let mut entries = BTreeMap::new();
    for o in cat.objects() {
        entries.insert((o, o, 0, 0), 1);
    }
    let index = FactorizationIndex::new(cat);
    for p in cat.non_identities_by_length() {
        if !in_range(cat, p) {
            continue;
        }
        let s = index.space(p).expect("non-identity");
        let prof = reduced_cohomology(&s.set, k);
        for (&j, &b) in &prof.reduced_betti {
            *entries
                .entry((cat.target(p), cat.source(p), cat.length(p), j + 2))
                .or_insert(0) += b;
        }
    }
    ExtTable { entries }
}

pub fn ext_table_oracle(cat: &FiniteGradedCategory, k: Field) -> ExtTable {
    let nerve = reduced_nerve(cat);
    let mut entries = BTreeMap::new();
    for ((src, tgt, n), block) in nerve_blocks(&nerve) {
        if !CheckedUpTo::of(cat).admits(n) {
            continue;
        }
        for (i, d) in oracle_block(&nerve, &block, k) {
            entries.insert((ObjId(tgt), ObjId(src), n, i), d);
        }
    }
    ExtTable { entries }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulWitness {
    pub morphism: MorId,
    pub label: String,
    pub length: u32,
    /// Degree `j` of the offending reduced cohomology of the factorization space.
    pub degree: i64,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulVerdict {
    pub koszul: bool,
    pub checked_up_to: CheckedUpTo,
    pub witnesses: Vec<KoszulWitness>,
    /// Number of failing morphisms, which may exceed the witnesses listed.
    pub failing_morphisms: usize,
}

pub fn is_koszul(cat: &FiniteGradedCategory, k: Field) -> KoszulVerdict {
    is_koszul_with_limit(cat, k, DEFAULT_WITNESS_LIMIT)
}

/// Checks that the factorization space of every non-identity `p` has reduced
/// cohomology only in degree `length(p) - 2`. In a truncated category only
/// morphisms up to the bound are examined.
pub fn is_koszul_with_limit(cat: &FiniteGradedCategory, k: Field, limit: usize) -> KoszulVerdict {
    let index = FactorizationIndex::new(cat);
    let mut witnesses = Vec::new();
    let mut failing = 0;
    for p in cat.non_identities_by_length() {
        if !in_range(cat, p) {
            continue;
        }
        let s = index.space(p).expect("non-identity");
        let prof = reduced_cohomology(&s.set, k);
        let bad = prof.off_degree(cat.length(p) as i64 - 2);
        if bad.is_empty() {
            continue;
        }
        failing += 1;
        for (degree, dimension) in bad {
            if witnesses.len() < limit {
                witnesses.push(KoszulWitness {
                    morphism: p,
                    label: cat.label(p).to_string(),
                    length: cat.length(p),
                    degree,
                    dimension,
                });
            }
        }
    }
    KoszulVerdict {
        koszul: failing == 0,
        checked_up_to: CheckedUpTo::of(cat),
        witnesses,
        failing_morphisms: failing,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub generated_in_degree_one: bool,
    /// Indecomposable morphisms of length at least two.
    pub witnesses: Vec<MorId>,
}

pub fn generated_in_degree_one(cat: &FiniteGradedCategory) -> GenerationReport {
    let index = FactorizationIndex::new(cat);
    let witnesses: Vec<MorId> = cat
        .non_identities_by_length()
        .into_iter()
        .filter(|&p| cat.length(p) >= 2 && !index.is_decomposable(p))
        .collect();
    GenerationReport {
        generated_in_degree_one: witnesses.is_empty(),
        witnesses,
    }
}

/// Sufficient condition for quadraticity: every factorization space of a
/// morphism of length other than 1 is nonempty, and every one of length
/// other than 2 is connected.
pub fn quadratic_sufficient(cat: &FiniteGradedCategory, k: Field) -> bool {
    let index = FactorizationIndex::new(cat);
    cat.non_identities_by_length()
        .into_iter()
        .filter(|&p| in_range(cat, p))
        .all(|p| {
            let l = cat.length(p);
            let s = index.space(p).expect("non-identity");
            let prof = reduced_cohomology(&s.set, k);
            (l == 1 || !s.set.is_empty()) && (l == 2 || prof.get(0) == 0)
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum QuadraticStatus {
    Quadratic,
    NotQuadratic {
        reason: String,
        witness: MorId,
        label: String,
    },
    Unknown,
}

/// Three-way answer. `NotQuadratic` is returned when the algebra is not
/// generated in degree one, or when it is and some morphism of length at
/// least 3 has a disconnected factorization space, which produces a minimal
/// relation in that degree.
pub fn quadratic_status(cat: &FiniteGradedCategory, k: Field) -> QuadraticStatus {
    let gen = generated_in_degree_one(cat);
    if let Some(&w) = gen.witnesses.first() {
        return QuadraticStatus::NotQuadratic {
            reason: "not generated in degree one".into(),
            witness: w,
            label: cat.label(w).to_string(),
        };
    }
    if quadratic_sufficient(cat, k) {
        return QuadraticStatus::Quadratic;
    }
    let index = FactorizationIndex::new(cat);
    for p in cat.non_identities_by_length() {
        if cat.length(p) < 3 || !in_range(cat, p) {
            continue;
        }
        let s = index.space(p).expect("non-identity");
        if reduced_cohomology(&s.set, k).get(0) > 0 {
            return QuadraticStatus::NotQuadratic {
                reason: format!("minimal relation in degree {}", cat.length(p)),
                witness: p,
                label: cat.label(p).to_string(),
            };
        }
    }
    QuadraticStatus::Unknown
}
